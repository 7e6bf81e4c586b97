//! Ports, interactions and configurations.
//!
//! Ports live in a [`PortUniverse`], which fixes their numbering. Ports are
//! numbered in sorted order of `(label, instance)`, so the bit order of an
//! [`Interaction`] agrees with the order of its rendered port names and the
//! lexicographic order on interactions is the lexicographic order on their
//! sorted port lists.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest number of ports a universe can hold; interactions are bitmasks.
pub const MAX_PORTS: usize = 128;

/// A port label, optionally tagged with a 1-based component instance index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    label: String,
    instance: Option<u32>,
}

impl Port {
    pub fn plain(label: impl Into<String>) -> Self {
        Port {
            label: label.into(),
            instance: None,
        }
    }

    pub fn of_instance(label: impl Into<String>, instance: u32) -> Self {
        Port {
            label: label.into(),
            instance: Some(instance),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn instance(&self) -> Option<u32> {
        self.instance
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.instance {
            Some(j) => write!(f, "{}({})", self.label, j),
            None => f.write_str(&self.label),
        }
    }
}

/// Words of the formula grammar; not usable as names.
pub const RESERVED: [&str; 7] = ["and", "dis", "false", "implies", "not", "or", "true"];

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}

impl FromStr for Port {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(1, 1, format!("malformed port name `{s}`"));
        match s.find('(') {
            None if is_ident(s) => Ok(Port::plain(s)),
            None => Err(bad()),
            Some(open) => {
                let label = s[..open].trim_end();
                let rest = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                let instance: u32 = rest.trim().parse().map_err(|_| bad())?;
                if !is_ident(label) || instance == 0 {
                    return Err(bad());
                }
                Ok(Port::of_instance(label, instance))
            }
        }
    }
}

/// Index of a port inside its [`PortUniverse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortId(pub(crate) u8);

impl PortId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn bit(self) -> u128 {
        1u128 << self.0
    }
}

/// A finite, non-empty, sorted set of uniquely named ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortUniverse {
    ports: Vec<Port>,
    index: HashMap<Port, PortId>,
}

impl PortUniverse {
    pub fn new(ports: impl IntoIterator<Item = Port>) -> Result<Self> {
        let mut ports: Vec<Port> = ports.into_iter().collect();
        ports.sort();
        if let Some(w) = ports.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateName(w[0].to_string()));
        }
        if ports.is_empty() {
            return Err(Error::UniverseMismatch("a port universe needs at least one port".into()));
        }
        if ports.len() > MAX_PORTS {
            return Err(Error::ResourceLimit(format!(
                "{} ports exceed the supported maximum of {MAX_PORTS}",
                ports.len()
            )));
        }
        let index = ports
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), PortId(i as u8)))
            .collect();
        Ok(PortUniverse { ports, index })
    }

    /// Universe of plain (instance-free) ports.
    pub fn plain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(labels.into_iter().map(Port::plain))
    }

    pub fn len(&self) -> usize {
        self.ports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ports.is_empty()
    }

    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn ids(&self) -> impl Iterator<Item = PortId> + '_ {
        (0..self.ports.len()).map(|i| PortId(i as u8))
    }

    pub fn port(&self, id: PortId) -> &Port {
        &self.ports[id.index()]
    }

    pub fn id(&self, port: &Port) -> Option<PortId> {
        self.index.get(port).copied()
    }

    /// Looks up a rendered port name such as `m(1)`.
    pub fn resolve(&self, name: &str) -> Result<PortId> {
        let port: Port = name
            .parse()
            .map_err(|_| Error::UnknownPort(name.trim().to_string()))?;
        self.id(&port).ok_or_else(|| Error::UnknownPort(port.to_string()))
    }

    /// Bitmask with one bit per port of the universe.
    pub fn mask(&self) -> u128 {
        if self.ports.len() == MAX_PORTS {
            u128::MAX
        } else {
            (1u128 << self.ports.len()) - 1
        }
    }

    pub fn contains_interaction(&self, a: Interaction) -> bool {
        a.0 & !self.mask() == 0
    }

    pub fn interaction_names(&self, a: Interaction) -> Vec<String> {
        a.ports().map(|p| self.port(p).to_string()).collect()
    }

    pub fn show_interaction(&self, a: Interaction) -> String {
        format!("{{{}}}", self.interaction_names(a).join(","))
    }

    pub fn show_configuration(&self, gamma: &Configuration) -> String {
        let parts: Vec<String> = gamma.iter().map(|a| self.show_interaction(a)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Parses a list of rendered port names into an interaction.
    pub fn interaction_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Interaction> {
        let ids = names
            .iter()
            .map(|n| self.resolve(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Interaction::from_ids(ids).ok_or_else(|| Error::InvalidInteraction("{}".into()))
    }
}

/// A non-empty set of ports of one universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interaction(u128);

impl Interaction {
    pub fn from_ids(ids: impl IntoIterator<Item = PortId>) -> Option<Self> {
        Self::from_bits(ids.into_iter().fold(0, |acc, p| acc | p.bit()))
    }

    pub fn from_bits(bits: u128) -> Option<Self> {
        (bits != 0).then_some(Interaction(bits))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, p: PortId) -> bool {
        self.0 & p.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn ports(self) -> impl Iterator<Item = PortId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            Some(PortId(i as u8))
        })
    }
}

impl Ord for Interaction {
    /// Lexicographic order on the ascending port lists.
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y) = (self.0, other.0);
        if x == y {
            return Ordering::Equal;
        }
        let first_diff = (x ^ y).trailing_zeros();
        let above = u128::MAX.checked_shl(first_diff + 1).unwrap_or(0);
        // Whoever holds the first differing port is smaller, unless the other
        // list has already ended (then the other is a proper prefix).
        if x >> first_diff & 1 == 1 {
            if y & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if x & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Interaction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A non-empty set of interactions. Ordered lexicographically over its
/// sorted interactions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(BTreeSet<Interaction>);

impl Configuration {
    pub fn new(interactions: impl IntoIterator<Item = Interaction>) -> Result<Self> {
        let set: BTreeSet<Interaction> = interactions.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        Ok(Configuration(set))
    }

    pub fn singleton(a: Interaction) -> Self {
        Configuration(BTreeSet::from([a]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = Interaction> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, a: Interaction) -> bool {
        self.0.contains(&a)
    }

    pub fn is_subset(&self, other: &Configuration) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Configuration) -> Configuration {
        Configuration(self.0.union(&other.0).copied().collect())
    }

    pub fn as_set(&self) -> &BTreeSet<Interaction> {
        &self.0
    }

    pub fn into_set(self) -> BTreeSet<Interaction> {
        self.0
    }
}

impl<'a> IntoIterator for &'a Configuration {
    type Item = Interaction;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Interaction>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}
