//! Propositional configuration logic: formulas evaluated on configurations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pil::Pil;
use crate::port::{Configuration, Interaction, PortUniverse};

/// Core PCL syntax. The derived operators are constructor functions that
/// expand to these five forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pcl {
    True,
    Pil(Pil),
    Not(Box<Pcl>),
    Union(Box<Pcl>, Box<Pcl>),
    Coalesce(Box<Pcl>, Box<Pcl>),
}

impl Pcl {
    pub fn pil(phi: Pil) -> Pcl {
        Pcl::Pil(phi)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Pcl {
        Pcl::Not(Box::new(self))
    }

    pub fn union(self, other: Pcl) -> Pcl {
        Pcl::Union(Box::new(self), Box::new(other))
    }

    pub fn coalesce(self, other: Pcl) -> Pcl {
        Pcl::Coalesce(Box::new(self), Box::new(other))
    }

    /// `f ⊓ g := ¬(¬f ⊔ ¬g)`
    pub fn intersect(self, other: Pcl) -> Pcl {
        self.not().union(other.not()).not()
    }

    /// `f ⇒ g := ¬f ⊔ g`
    pub fn implies(self, other: Pcl) -> Pcl {
        self.not().union(other)
    }

    /// `~f := f + true`
    pub fn closure(self) -> Pcl {
        self.coalesce(Pcl::True)
    }

    /// `f ∨ g := f ⊔ g ⊔ (f + g)`
    pub fn disjoin(self, other: Pcl) -> Pcl {
        let sum = self.clone().coalesce(other.clone());
        self.union(other).union(sum)
    }

    /// Left fold of `⊔`; the empty union is refused.
    pub fn big_union(items: impl IntoIterator<Item = Pcl>) -> Result<Pcl> {
        fold_nonempty(items, "union", Pcl::union)
    }

    /// Left fold of `+`; the empty sum is refused.
    pub fn big_sum(items: impl IntoIterator<Item = Pcl>) -> Result<Pcl> {
        fold_nonempty(items, "coalescing", Pcl::coalesce)
    }

    /// Left fold of `∨`; the empty disjunction is refused.
    pub fn big_disjoin(items: impl IntoIterator<Item = Pcl>) -> Result<Pcl> {
        fold_nonempty(items, "disjunction", Pcl::disjoin)
    }

    /// Left fold of `⊓`; the empty intersection is `true`.
    pub fn big_intersect(items: impl IntoIterator<Item = Pcl>) -> Pcl {
        items.into_iter().reduce(Pcl::intersect).unwrap_or(Pcl::True)
    }

    pub fn port_mask(&self) -> u128 {
        match self {
            Pcl::True => 0,
            Pcl::Pil(phi) => phi.port_mask(),
            Pcl::Not(f) => f.port_mask(),
            Pcl::Union(l, r) | Pcl::Coalesce(l, r) => l.port_mask() | r.port_mask(),
        }
    }

    pub(crate) fn check_universe(&self, universe: &PortUniverse) -> Result<()> {
        if self.port_mask() & !universe.mask() != 0 {
            return Err(Error::UniverseMismatch(
                "formula mentions a port outside the universe".into(),
            ));
        }
        Ok(())
    }
}

fn fold_nonempty(
    items: impl IntoIterator<Item = Pcl>,
    name: &'static str,
    op: fn(Pcl, Pcl) -> Pcl,
) -> Result<Pcl> {
    items
        .into_iter()
        .reduce(op)
        .ok_or(Error::EmptyBigOperator(name))
}

/// Evaluation limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatOptions {
    /// Split attempts allowed for one coalescing node on one configuration.
    pub split_budget: u64,
}

pub const DEFAULT_SPLIT_BUDGET: u64 = 43_046_721; // 3^16

impl Default for SatOptions {
    fn default() -> Self {
        SatOptions {
            split_budget: DEFAULT_SPLIT_BUDGET,
        }
    }
}

/// Maximum number of interactions an [`Evaluator`] can index.
pub const MAX_LOCAL_INTERACTIONS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    Pil(u128),
    Not(u32),
    Union(u32, u32),
    Coalesce(u32, u32),
}

/// Direct evaluator of the satisfaction relation over a fixed list of at
/// most 128 interactions. Sub-configurations are bitmasks over that list.
///
/// Coalescing enumerates the covers `γ = γ₁ ∪ γ₂`, pruned to parts that
/// can satisfy their operand, and memoizes on `(node, mask)`. The memo
/// persists across calls, so one evaluator can serve a whole enumeration.
#[derive(Debug)]
pub struct Evaluator {
    nodes: Vec<Node>,
    support: Vec<u128>,
    root: u32,
    len: usize,
    memo: HashMap<(u32, u128), bool>,
    options: SatOptions,
}

impl Evaluator {
    pub fn new(f: &Pcl, interactions: &[Interaction], options: SatOptions) -> Result<Self> {
        if interactions.len() > MAX_LOCAL_INTERACTIONS {
            return Err(Error::ResourceLimit(format!(
                "direct evaluation handles at most {MAX_LOCAL_INTERACTIONS} interactions, got {}",
                interactions.len()
            )));
        }
        let full = low_mask(interactions.len());
        let mut builder = Builder {
            interactions,
            full,
            nodes: Vec::new(),
            support: Vec::new(),
            consed: HashMap::new(),
        };
        let root = builder.compile(f);
        Ok(Evaluator {
            nodes: builder.nodes,
            support: builder.support,
            root,
            len: interactions.len(),
            memo: HashMap::new(),
            options,
        })
    }

    /// Does the sub-configuration selected by `mask` satisfy the formula?
    pub fn eval_mask(&mut self, mask: u128) -> Result<bool> {
        if mask == 0 || mask & !low_mask(self.len) != 0 {
            return Err(Error::EmptyConfiguration);
        }
        self.eval(self.root, mask)
    }

    fn eval(&mut self, node: u32, mask: u128) -> Result<bool> {
        match self.nodes[node as usize] {
            Node::True => Ok(true),
            Node::Pil(sat) => Ok(mask & !sat == 0),
            Node::Not(f) => Ok(!self.eval(f, mask)?),
            Node::Union(l, r) => Ok(self.eval(l, mask)? || self.eval(r, mask)?),
            Node::Coalesce(l, r) => {
                if let Some(&v) = self.memo.get(&(node, mask)) {
                    return Ok(v);
                }
                let v = self.coalesce(l, r, mask)?;
                self.memo.insert((node, mask), v);
                Ok(v)
            }
        }
    }

    fn coalesce(&mut self, left: u32, right: u32, mask: u128) -> Result<bool> {
        let left_support = self.support[left as usize] & mask;
        let right_support = self.support[right as usize];
        let budget = self.options.split_budget;
        let mut attempts = 0u64;
        let tick = |attempts: &mut u64| {
            *attempts += 1;
            if *attempts > budget {
                Err(Error::ResourceLimit(format!(
                    "coalescing split budget of {budget} attempts exhausted"
                )))
            } else {
                Ok(())
            }
        };

        let mut first = left_support;
        while first != 0 {
            tick(&mut attempts)?;
            let rest = mask & !first;
            if rest & !right_support == 0 && self.eval(left, first)? {
                // second part = rest ∪ (some subset of the first part)
                let shared = first & right_support;
                let mut extra = shared;
                loop {
                    let second = rest | extra;
                    if second != 0 {
                        tick(&mut attempts)?;
                        if self.eval(right, second)? {
                            return Ok(true);
                        }
                    }
                    if extra == 0 {
                        break;
                    }
                    extra = (extra - 1) & shared;
                }
            }
            first = (first - 1) & left_support;
        }
        Ok(false)
    }
}

fn low_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

struct Builder<'a> {
    interactions: &'a [Interaction],
    full: u128,
    nodes: Vec<Node>,
    support: Vec<u128>,
    consed: HashMap<Node, u32>,
}

impl Builder<'_> {
    fn compile(&mut self, f: &Pcl) -> u32 {
        let node = match f {
            Pcl::True => Node::True,
            Pcl::Pil(phi) => {
                let sat = self
                    .interactions
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| phi.holds(**a))
                    .fold(0u128, |acc, (i, _)| acc | 1 << i);
                Node::Pil(sat)
            }
            Pcl::Not(g) => Node::Not(self.compile(g)),
            Pcl::Union(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::Union(l, r)
            }
            Pcl::Coalesce(l, r) => {
                let (l, r) = (self.compile(l), self.compile(r));
                Node::Coalesce(l, r)
            }
        };
        if let Some(&id) = self.consed.get(&node) {
            return id;
        }
        // Upper bound on the interactions any satisfying sub-configuration can use.
        let support = match node {
            Node::True | Node::Not(_) => self.full,
            Node::Pil(sat) => sat,
            Node::Union(l, r) | Node::Coalesce(l, r) => {
                self.support[l as usize] | self.support[r as usize]
            }
        };
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.support.push(support);
        self.consed.insert(node, id);
        id
    }
}

/// `γ ⊨ f` by direct recursion on the formula.
pub fn pcl_sat(universe: &PortUniverse, gamma: &Configuration, f: &Pcl) -> Result<bool> {
    pcl_sat_with(universe, gamma, f, SatOptions::default())
}

pub fn pcl_sat_with(
    universe: &PortUniverse,
    gamma: &Configuration,
    f: &Pcl,
    options: SatOptions,
) -> Result<bool> {
    f.check_universe(universe)?;
    if let Some(a) = gamma.iter().find(|a| !universe.contains_interaction(*a)) {
        return Err(Error::UniverseMismatch(format!(
            "interaction with bits {:#x} is not over the port universe",
            a.bits()
        )));
    }
    let interactions: Vec<Interaction> = gamma.iter().collect();
    let mut evaluator = Evaluator::new(f, &interactions, options)?;
    evaluator.eval_mask(low_mask(interactions.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::port::Port;

    struct Fixture {
        u: PortUniverse,
    }

    impl Fixture {
        fn ms() -> Self {
            Fixture {
                u: PortUniverse::new([Port::of_instance("m", 1), Port::of_instance("s", 1)])
                    .unwrap(),
            }
        }

        fn a(&self, names: &[&str]) -> Interaction {
            self.u.interaction_of_names(names).unwrap()
        }

        fn m(&self, names: &[&str]) -> Pcl {
            Pcl::pil(Pil::characteristic(self.a(names), &self.u).unwrap())
        }

        fn gamma(&self, parts: &[&[&str]]) -> Configuration {
            Configuration::new(parts.iter().map(|p| self.a(p))).unwrap()
        }

        fn sat(&self, parts: &[&[&str]], f: &Pcl) -> bool {
            pcl_sat(&self.u, &self.gamma(parts), f).unwrap()
        }
    }

    #[test]
    fn singleton_satisfies_its_characteristic_monomial() {
        let fx = Fixture::ms();
        assert!(fx.sat(&[&["m(1)", "s(1)"]], &fx.m(&["m(1)", "s(1)"])));
    }

    #[test]
    fn coalescing_splits_a_configuration() {
        let fx = Fixture::ms();
        let f = fx.m(&["m(1)"]).coalesce(fx.m(&["s(1)"]));
        assert!(fx.sat(&[&["m(1)"], &["s(1)"]], &f));
        assert!(!fx.sat(&[&["m(1)"]], &f));
    }

    #[test]
    fn coalescing_parts_may_overlap() {
        let fx = Fixture::ms();
        let f = fx.m(&["m(1)"]).coalesce(Pcl::True);
        assert!(fx.sat(&[&["m(1)"]], &f));
        assert!(fx.sat(&[&["m(1)"], &["s(1)"]], &f));
        assert!(!fx.sat(&[&["s(1)"]], &f));
    }

    #[test]
    fn coalescing_of_a_formula_with_itself_is_weaker() {
        let fx = Fixture::ms();
        let f = fx.m(&["m(1)"]).union(fx.m(&["s(1)"]));
        let gamma: &[&[&str]] = &[&["m(1)"], &["s(1)"]];
        assert!(!fx.sat(gamma, &f));
        assert!(fx.sat(gamma, &f.clone().coalesce(f)));
    }

    #[test]
    fn derived_operators_expand_as_defined() {
        let fx = Fixture::ms();
        let (f, g) = (fx.m(&["m(1)"]), fx.m(&["s(1)"]));
        assert_eq!(f.clone().closure(), Pcl::Coalesce(Box::new(f.clone()), Box::new(Pcl::True)));
        assert_eq!(
            f.clone().disjoin(g.clone()),
            f.clone().union(g.clone()).union(f.clone().coalesce(g.clone()))
        );
        assert_eq!(
            f.clone().intersect(g.clone()),
            Pcl::Not(Box::new(Pcl::Union(Box::new(f.clone().not()), Box::new(g.clone().not()))))
        );
        assert_eq!(f.clone().implies(g.clone()), f.not().union(g));
    }

    #[test]
    fn empty_big_operators() {
        assert_eq!(Pcl::big_intersect([]), Pcl::True);
        assert_eq!(Pcl::big_union([]).unwrap_err().code(), "EMPTY_BIG_OPERATOR");
        assert!(Pcl::big_sum([]).is_err());
        assert!(Pcl::big_disjoin([]).is_err());
        assert_eq!(Pcl::big_sum([Pcl::True]).unwrap(), Pcl::True);
    }

    #[test]
    fn split_budget_is_enforced() {
        let u = PortUniverse::plain(["a", "b", "c", "d", "e", "f", "g", "h"]).unwrap();
        let gamma = Configuration::new((0..8).map(|i| Interaction::from_bits(1 << i).unwrap()))
            .unwrap();
        // No part of this split ever satisfies the right operand, so the
        // search exhausts every cover.
        let f = Pcl::True.coalesce(Pcl::pil(Pil::falsum()).not().not());
        let tight = SatOptions { split_budget: 10 };
        let err = pcl_sat_with(&u, &gamma, &f, tight).unwrap_err();
        assert_eq!(err.code(), "RESOURCE_LIMIT");
        assert!(!pcl_sat(&u, &gamma, &f).unwrap());
    }

    #[test]
    fn foreign_interactions_are_rejected() {
        let fx = Fixture::ms();
        let outside = Configuration::singleton(Interaction::from_bits(1 << 9).unwrap());
        let err = pcl_sat(&fx.u, &outside, &Pcl::True).unwrap_err();
        assert_eq!(err.code(), "UNIVERSE_MISMATCH");
    }
}
