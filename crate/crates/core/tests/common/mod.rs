//! Test-only oracle: dense set semantics over a small list of interactions.
//!
//! A configuration is a bitmask over `items`; the meaning of a formula is the
//! vector of truth values for every mask. Nothing here calls the library's
//! evaluators, sat-set algebra or desugaring.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pcl_core::{Architecture, Configuration, Interaction, PclExpr, PilExpr, Style};
use rand::Rng;

pub fn pil_holds(e: &PilExpr, a: Interaction) -> bool {
    match e {
        PilExpr::True => true,
        PilExpr::False => false,
        PilExpr::Port(p) => a.contains(*p),
        PilExpr::Not(inner) => !pil_holds(inner, a),
        PilExpr::And(l, r) => pil_holds(l, a) && pil_holds(r, a),
        PilExpr::Or(l, r) => pil_holds(l, a) || pil_holds(r, a),
    }
}

pub struct Oracle {
    pub items: Vec<Interaction>,
}

impl Oracle {
    pub fn new(items: impl IntoIterator<Item = Interaction>) -> Self {
        let items: Vec<Interaction> = items.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        assert!(items.len() <= 20, "oracle universe too large: {}", items.len());
        Oracle { items }
    }

    pub fn size(&self) -> usize {
        1 << self.items.len()
    }

    pub fn mask_of(&self, gamma: &[Interaction]) -> Option<usize> {
        let mut mask = 0;
        for a in gamma {
            mask |= 1 << self.items.iter().position(|b| b == a)?;
        }
        Some(mask)
    }

    pub fn config(&self, mask: usize) -> Vec<Interaction> {
        (0..self.items.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.items[i]).collect()
    }

    /// Truth table indexed by mask; entry 0 (the empty set) is always false.
    pub fn meaning(&self, f: &PclExpr) -> Vec<bool> {
        let size = self.size();
        let mut out = match f {
            PclExpr::True => vec![true; size],
            PclExpr::Pil(phi) => {
                let ok: usize = (0..self.items.len())
                    .filter(|&i| pil_holds(phi, self.items[i]))
                    .map(|i| 1 << i)
                    .sum();
                (0..size).map(|m| m & !ok == 0).collect()
            }
            PclExpr::Interaction(a) => {
                let mut v = vec![false; size];
                if let Some(m) = self.mask_of(&[*a]) {
                    v[m] = true;
                }
                v
            }
            PclExpr::Not(g) => self.meaning(g).into_iter().map(|b| !b).collect(),
            PclExpr::Closure(g) => upward(&self.meaning(g), self.items.len()),
            PclExpr::Union(l, r) => zip(&self.meaning(l), &self.meaning(r), |x, y| x || y),
            PclExpr::Intersect(l, r) => zip(&self.meaning(l), &self.meaning(r), |x, y| x && y),
            PclExpr::Implies(l, r) => zip(&self.meaning(l), &self.meaning(r), |x, y| !x || y),
            PclExpr::Coalesce(l, r) => cover(&self.meaning(l), &self.meaning(r)),
            PclExpr::Dis(items) => {
                let mut acc = self.meaning(&items[0]);
                for item in &items[1..] {
                    let next = self.meaning(item);
                    let both = cover(&acc, &next);
                    acc = (0..size).map(|m| acc[m] || next[m] || both[m]).collect();
                }
                acc
            }
        };
        out[0] = false;
        out
    }

    pub fn satisfying(&self, f: &PclExpr) -> Vec<usize> {
        let table = self.meaning(f);
        (1..self.size()).filter(|&m| table[m]).collect()
    }

    /// Does `gamma` contain a non-empty subset satisfying `f`?
    pub fn has_satisfying_subset(&self, f: &PclExpr, gamma: &[Interaction]) -> bool {
        let table = self.meaning(f);
        let g = self.mask_of(gamma).expect("configuration inside the oracle universe");
        (1..self.size()).any(|m| m & !g == 0 && table[m])
    }
}

fn zip(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

fn upward(table: &[bool], bits: usize) -> Vec<bool> {
    let mut out = table.to_vec();
    for bit in 0..bits {
        for m in 0..out.len() {
            if m >> bit & 1 == 1 && out[m ^ (1 << bit)] {
                out[m] = true;
            }
        }
    }
    out
}

// all unions m1 | m2 with both parts satisfying their side
fn cover(a: &[bool], b: &[bool]) -> Vec<bool> {
    let left: Vec<usize> = (1..a.len()).filter(|&m| a[m]).collect();
    let right: Vec<usize> = (1..b.len()).filter(|&m| b[m]).collect();
    let mut out = vec![false; a.len()];
    for &x in &left {
        for &y in &right {
            out[x | y] = true;
        }
    }
    out
}

/// A set of interactions outside of which no satisfying configuration can
/// reach, when one can be read off the syntax. `None` means unbounded.
pub fn support(f: &PclExpr) -> Option<BTreeSet<Interaction>> {
    let join = |l: &PclExpr, r: &PclExpr| -> Option<BTreeSet<Interaction>> {
        let mut s = support(l)?;
        s.extend(support(r)?);
        Some(s)
    };
    match f {
        PclExpr::Interaction(a) => Some(BTreeSet::from([*a])),
        PclExpr::Union(l, r) | PclExpr::Coalesce(l, r) => join(l, r),
        PclExpr::Intersect(l, r) => match (support(l), support(r)) {
            (Some(a), Some(b)) => Some(a.intersection(&b).copied().collect()),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        },
        PclExpr::Dis(items) => {
            let mut s = BTreeSet::new();
            for item in items {
                s.extend(support(item)?);
            }
            Some(s)
        }
        _ => None,
    }
}

/// Whether `gamma` itself satisfies `f`.
pub fn satisfies(f: &PclExpr, gamma: &Configuration) -> bool {
    let oracle = Oracle::new(gamma.iter());
    oracle.meaning(f)[oracle.size() - 1]
}

/// Whether some non-empty subset of `gamma` satisfies `f`.
pub fn dominated(f: &PclExpr, gamma: &Configuration) -> bool {
    let oracle = Oracle::new(gamma.iter());
    oracle.meaning(f).into_iter().any(|b| b)
}

pub fn gallery() -> Vec<(Style, Vec<u32>)> {
    vec![
        (Style::MasterSlave, vec![1, 1]),
        (Style::MasterSlave, vec![2, 2]),
        (Style::Star, vec![2]),
        (Style::Star, vec![3]),
        (Style::PublishSubscribe, vec![1, 1, 1]),
        (Style::Blackboard, vec![1]),
        (Style::Blackboard, vec![2]),
        (Style::PipesFilters, vec![2, 1]),
        (Style::RequestResponse, vec![1, 1, 1]),
    ]
}

/// Draws configurations from a system, biased toward satisfying ones so that
/// every verdict shows up.
pub struct LassoSource {
    pub interactions: Vec<Interaction>,
    pub good: Vec<Configuration>,
}

impl LassoSource {
    pub fn new(arch: &Architecture) -> Self {
        let interactions = arch.system.interactions(u64::MAX).unwrap();
        let items = support(&arch.formula).expect("bounded support");
        let oracle = Oracle::new(items);
        let good = oracle
            .satisfying(&arch.formula)
            .into_iter()
            .map(|m| Configuration::new(oracle.config(m)).unwrap())
            .collect();
        LassoSource { interactions, good }
    }

    pub fn configuration(&self, rng: &mut impl Rng) -> Configuration {
        let mut set: BTreeSet<Interaction> = BTreeSet::new();
        let roll = rng.gen_range(0..10);
        if roll < 6 && !self.good.is_empty() {
            set.extend(self.good[rng.gen_range(0..self.good.len())].iter());
        }
        // pure, padded, or random
        let extra = match roll {
            0..=3 => 0,
            4..=5 => rng.gen_range(1..=2),
            _ => rng.gen_range(1..=3),
        };
        for _ in 0..extra {
            set.insert(self.interactions[rng.gen_range(0..self.interactions.len())]);
        }
        if set.is_empty() {
            set.insert(self.interactions[rng.gen_range(0..self.interactions.len())]);
        }
        Configuration::new(set).unwrap()
    }

    /// Prefix of length at most 3, loop of length 1 to 3.
    pub fn lasso(&self, rng: &mut impl Rng) -> (Vec<Configuration>, Vec<Configuration>) {
        let prefix = (0..rng.gen_range(0..=3)).map(|_| self.configuration(rng)).collect();
        let cycle = (0..rng.gen_range(1..=3)).map(|_| self.configuration(rng)).collect();
        (prefix, cycle)
    }
}
