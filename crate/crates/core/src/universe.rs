//! Ordered interaction lists and the configuration spaces they span.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::port::{Configuration, Interaction, PortUniverse};

/// Default bound on interaction lists and on enumerated configuration sets.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// A canonically ordered list of interactions over a port universe, e.g.
/// `I(P)` or the constrained `I_pB` of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionUniverse {
    ports: Arc<PortUniverse>,
    interactions: Vec<Interaction>,
    index: HashMap<Interaction, usize>,
}

impl InteractionUniverse {
    /// Sorts and deduplicates `interactions`; all must be over `ports`.
    pub fn new(ports: Arc<PortUniverse>, interactions: impl IntoIterator<Item = Interaction>) -> Result<Self> {
        let mut list: Vec<Interaction> = interactions.into_iter().collect();
        if let Some(a) = list.iter().find(|a| !ports.contains_interaction(**a)) {
            return Err(Error::UniverseMismatch(format!(
                "interaction with bits {:#x} is not over the port universe",
                a.bits()
            )));
        }
        list.sort();
        list.dedup();
        let index = list.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        Ok(InteractionUniverse {
            ports,
            interactions: list,
            index,
        })
    }

    /// `I(P)`: every non-empty subset of the ports.
    pub fn all(ports: Arc<PortUniverse>, cap: u64) -> Result<Self> {
        let n = ports.len();
        if n >= 64 || (1u64 << n) - 1 > cap {
            return Err(Error::ResourceLimit(format!(
                "I(P) over {n} ports has 2^{n}-1 interactions, above the cap of {cap}"
            )));
        }
        let list = (1u128..1 << n).map(|bits| Interaction::from_bits(bits).expect("non-zero"));
        Self::new(ports, list)
    }

    pub fn ports(&self) -> &Arc<PortUniverse> {
        &self.ports
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn len(&self) -> usize {
        self.interactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interactions.is_empty()
    }

    pub fn position(&self, a: Interaction) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub fn contains(&self, a: Interaction) -> bool {
        self.index.contains_key(&a)
    }

    pub fn contains_configuration(&self, gamma: &Configuration) -> bool {
        gamma.iter().all(|a| self.contains(a))
    }

    /// `2^n - 1`, or `None` when it does not fit in a `u64`.
    pub fn configuration_count(&self) -> Option<u64> {
        (self.len() < 64).then(|| (1u64 << self.len()) - 1)
    }

    pub fn is_enumerable(&self, cap: u64) -> bool {
        self.configuration_count().is_some_and(|c| c <= cap)
    }

    /// The configuration picked out by bit `i` ↦ `interactions[i]`.
    pub fn configuration_of_mask(&self, mask: u64) -> Option<Configuration> {
        let members = (0..self.len().min(64))
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.interactions[i]);
        Configuration::new(members).ok()
    }

    /// All `2^n - 1` configurations, ordered by their index bitmask.
    pub fn configurations(&self, cap: u64) -> Result<Configurations<'_>> {
        if self.len() > 62 {
            return Err(Error::ResourceLimit(format!(
                "cannot enumerate configurations over {} interactions",
                self.len()
            )));
        }
        let count = (1u64 << self.len()) - 1;
        if count > cap {
            return Err(Error::ResourceLimit(format!(
                "{count} configurations exceed the cap of {cap}"
            )));
        }
        Ok(Configurations {
            universe: self,
            next: 1,
            end: count + 1,
        })
    }
}

/// Iterator over every configuration of an [`InteractionUniverse`].
#[derive(Debug, Clone)]
pub struct Configurations<'a> {
    universe: &'a InteractionUniverse,
    next: u64,
    end: u64,
}

impl Iterator for Configurations<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        self.universe.configuration_of_mask(mask)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Configurations<'_> {}
