//! Sets of satisfying configurations, computed bottom-up over a formula.
//!
//! A set is either explicit or a membership predicate over `C(U)`.
//! Formulas built from full monomials stay explicit all the way up, so
//! their satisfying sets are found without touching the (often huge)
//! configuration space. Complement is the one operator that forces a
//! predicate; intersecting a predicate with an explicit set filters it
//! back to an explicit one.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::PclExpr;
use crate::pcl::{Evaluator, Pcl, SatOptions};
use crate::pil::Pil;
use crate::port::{Configuration, PortUniverse};
use crate::universe::InteractionUniverse;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Explicit(BTreeSet<Configuration>),
    All,
    /// Every interaction satisfies the formula.
    Pil(Pil),
    Complement(Box<Repr>),
    Union(Box<Repr>, Box<Repr>),
    Intersect(Box<Repr>, Box<Repr>),
    /// `A + B` with `A` explicit.
    CoalesceWith(BTreeSet<Configuration>, Box<Repr>),
    /// Configurations containing some member.
    Upward(BTreeSet<Configuration>),
}

/// The configurations over an interaction universe that satisfy a formula.
#[derive(Debug, Clone)]
pub struct SatSet {
    universe: Arc<InteractionUniverse>,
    repr: Repr,
    options: SatOptions,
}

impl SatSet {
    pub fn universe(&self) -> &InteractionUniverse {
        &self.universe
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Explicit(_))
    }

    /// Members of an explicit set.
    pub fn members(&self) -> Result<&BTreeSet<Configuration>> {
        match &self.repr {
            Repr::Explicit(set) => Ok(set),
            _ => Err(Error::ResourceLimit(format!(
                "satisfying set over {} interactions is only known as a predicate",
                self.universe.len()
            ))),
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.members().ok().map(BTreeSet::len)
    }

    pub fn is_empty(&self) -> Option<bool> {
        self.len().map(|n| n == 0)
    }

    pub fn contains(&self, gamma: &Configuration) -> Result<bool> {
        if !self.universe.contains_configuration(gamma) {
            return Err(Error::UniverseMismatch(format!(
                "{} is not over the interaction universe",
                self.universe.ports().show_configuration(gamma)
            )));
        }
        self.algebra(u64::MAX).member(&self.repr, gamma, &mut 0)
    }

    /// Least member, where it can be found without enumeration.
    pub fn least_member(&self) -> Option<Configuration> {
        match &self.repr {
            Repr::Explicit(set) | Repr::Upward(set) => set.first().cloned(),
            _ => None,
        }
    }

    /// Least member (lexicographically) that is a subset of `gamma`.
    pub fn least_member_within(&self, gamma: &Configuration) -> Result<Option<Configuration>> {
        Ok(self.members()?.iter().find(|m| m.is_subset(gamma)).cloned())
    }

    /// Turns a predicate into an explicit set by enumerating `C(U)`.
    pub fn materialize(self, cap: u64) -> Result<SatSet> {
        if self.is_explicit() {
            return Ok(self);
        }
        let set = self.algebra(cap).enumerate(&self.repr)?;
        Ok(SatSet {
            repr: Repr::Explicit(set),
            ..self
        })
    }

    /// Configurations that contain a member of this set.
    pub fn upward_closure(&self) -> Result<SatSet> {
        Ok(SatSet {
            universe: self.universe.clone(),
            repr: Repr::Upward(self.members()?.clone()),
            options: self.options,
        })
    }

    fn algebra(&self, cap: u64) -> Algebra<'_> {
        Algebra {
            universe: &self.universe,
            cap,
            options: self.options,
        }
    }
}

/// `{γ ∈ C(U) | γ ⊨ f}`, explicit when the universe is enumerable or the
/// formula allows it, a predicate otherwise.
pub fn sat_set(f: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<SatSet> {
    sat_set_with(f, universe, cap, SatOptions::default())
}

pub fn sat_set_with(f: &Pcl, universe: &InteractionUniverse, cap: u64, options: SatOptions) -> Result<SatSet> {
    f.check_universe(universe.ports())?;
    let algebra = Algebra { universe, cap, options };
    let mut repr = algebra.build(f)?;
    if !matches!(repr, Repr::Explicit(_)) && universe.is_enumerable(cap) {
        repr = Repr::Explicit(algebra.enumerate(&repr)?);
    }
    Ok(SatSet {
        universe: Arc::new(universe.clone()),
        repr,
        options,
    })
}

/// The same set by testing every configuration of `C(U)` directly.
pub fn brute_force_sat_set(f: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<SatSet> {
    f.check_universe(universe.ports())?;
    let count = universe.configurations(cap)?.len() as u64;
    let options = SatOptions::default();
    let mut evaluator = Evaluator::new(f, universe.interactions(), options)?;
    let mut set = BTreeSet::new();
    for mask in 1..=count {
        if evaluator.eval_mask(mask as u128)? {
            set.insert(universe.configuration_of_mask(mask).expect("non-zero mask"));
        }
    }
    Ok(SatSet {
        universe: Arc::new(universe.clone()),
        repr: Repr::Explicit(set),
        options,
    })
}

/// A formula `⊔ᵢ Σⱼ m_{i,j}`; each disjunct is kept as the one
/// configuration it is satisfied by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullNormalForm {
    ports: Arc<PortUniverse>,
    disjuncts: BTreeSet<Configuration>,
}

impl FullNormalForm {
    pub fn ports(&self) -> &Arc<PortUniverse> {
        &self.ports
    }

    pub fn disjuncts(&self) -> &BTreeSet<Configuration> {
        &self.disjuncts
    }

    /// Unsatisfiable formulas become `not true`.
    pub fn to_expr(&self) -> PclExpr {
        let sum = |gamma: &Configuration| {
            gamma
                .iter()
                .map(PclExpr::Interaction)
                .reduce(PclExpr::coalesce)
                .expect("configurations are non-empty")
        };
        self.disjuncts
            .iter()
            .map(sum)
            .reduce(PclExpr::union)
            .unwrap_or_else(|| PclExpr::True.not())
    }

    pub fn to_formula(&self) -> Pcl {
        self.to_expr().desugar(&self.ports)
    }
}

/// Full normal form over `I(P)`.
pub fn full_normal_form(f: &Pcl, ports: &Arc<PortUniverse>, cap: u64) -> Result<FullNormalForm> {
    let universe = InteractionUniverse::all(ports.clone(), cap)?;
    full_normal_form_over(f, &universe, cap)
}

/// Full normal form whose disjuncts are restricted to `universe`.
pub fn full_normal_form_over(f: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<FullNormalForm> {
    let set = sat_set(f, universe, cap)?.materialize(cap)?;
    Ok(FullNormalForm {
        ports: universe.ports().clone(),
        disjuncts: set.members()?.clone(),
    })
}

/// Outcome of a decision with an optional witness configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Configuration>,
}

/// `f ≡ g` over `C(U)`. A counterexample is the least configuration in the
/// symmetric difference.
pub fn equivalent(f: &Pcl, g: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<Decision> {
    let difference = f
        .clone()
        .intersect(g.clone().not())
        .union(g.clone().intersect(f.clone().not()));
    let set = sat_set(&difference, universe, cap)?.materialize(cap)?;
    let witness = set.members()?.first().cloned();
    Ok(Decision {
        holds: witness.is_none(),
        witness,
    })
}

/// Whether some configuration satisfies `f`; the least one is the witness.
pub fn satisfiable(f: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<Decision> {
    let set = sat_set(f, universe, cap)?.materialize(cap)?;
    let witness = set.members()?.first().cloned();
    Ok(Decision {
        holds: witness.is_some(),
        witness,
    })
}

/// `D_f`: configurations containing some satisfying configuration of `f`.
pub fn dominating_set(f: &Pcl, universe: &InteractionUniverse, cap: u64) -> Result<SatSet> {
    let set = sat_set(f, universe, cap)?.materialize(cap)?;
    let upward = set.upward_closure()?;
    if universe.is_enumerable(cap) {
        upward.materialize(cap)
    } else {
        Ok(upward)
    }
}

struct Algebra<'a> {
    universe: &'a InteractionUniverse,
    cap: u64,
    options: SatOptions,
}

impl Algebra<'_> {
    fn build(&self, f: &Pcl) -> Result<Repr> {
        Ok(match f {
            Pcl::True => Repr::All,
            Pcl::Pil(phi) => self.leaf(phi),
            Pcl::Not(g) => complement(self.build(g)?),
            Pcl::Union(l, r) => self.union(self.build(l)?, self.build(r)?)?,
            Pcl::Coalesce(l, r) => self.coalesce(self.build(l)?, self.build(r)?)?,
        })
    }

    fn leaf(&self, phi: &Pil) -> Repr {
        let ports = self.universe.ports();
        if let Some(pinned) = phi.full_monomial_interaction(ports) {
            let set = pinned
                .filter(|a| self.universe.contains(*a))
                .map(Configuration::singleton)
                .into_iter()
                .collect();
            return Repr::Explicit(set);
        }
        let satisfying: Vec<_> = self
            .universe
            .interactions()
            .iter()
            .copied()
            .filter(|a| phi.holds(*a))
            .collect();
        let n = satisfying.len();
        if n >= 64 || (1u64 << n) - 1 > self.cap {
            return Repr::Pil(phi.clone());
        }
        let set = (1u64..1 << n)
            .map(|mask| {
                Configuration::new((0..n).filter(|i| mask >> i & 1 == 1).map(|i| satisfying[i]))
                    .expect("non-zero mask")
            })
            .collect();
        Repr::Explicit(set)
    }

    fn union(&self, l: Repr, r: Repr) -> Result<Repr> {
        Ok(match (l, r) {
            (Repr::All, _) | (_, Repr::All) => Repr::All,
            (Repr::Explicit(mut a), Repr::Explicit(b)) => {
                a.extend(b);
                Repr::Explicit(a)
            }
            (Repr::Explicit(a), other) | (other, Repr::Explicit(a)) if a.is_empty() => other,
            (Repr::Complement(a), Repr::Complement(b)) => complement(self.intersect(*a, *b)?),
            // ¬X ⊔ Y = ¬(X ⊓ ¬Y), which filters X when it is explicit
            (Repr::Complement(a), other) | (other, Repr::Complement(a)) => {
                complement(self.intersect(*a, complement(other))?)
            }
            (l, r) => Repr::Union(Box::new(l), Box::new(r)),
        })
    }

    fn intersect(&self, l: Repr, r: Repr) -> Result<Repr> {
        Ok(match (l, r) {
            (Repr::All, other) | (other, Repr::All) => other,
            (Repr::Explicit(a), Repr::Explicit(b)) => Repr::Explicit(a.intersection(&b).cloned().collect()),
            (Repr::Explicit(a), other) | (other, Repr::Explicit(a)) => {
                let mut kept = BTreeSet::new();
                for gamma in a {
                    if self.member(&other, &gamma, &mut 0)? {
                        kept.insert(gamma);
                    }
                }
                Repr::Explicit(kept)
            }
            (Repr::Complement(a), Repr::Complement(b)) => complement(self.union(*a, *b)?),
            (l, r) => Repr::Intersect(Box::new(l), Box::new(r)),
        })
    }

    fn coalesce(&self, l: Repr, r: Repr) -> Result<Repr> {
        Ok(match (l, r) {
            (Repr::Explicit(a), _) | (_, Repr::Explicit(a)) if a.is_empty() => Repr::Explicit(a),
            (Repr::Explicit(a), Repr::Explicit(b)) if (a.len() as u128) * (b.len() as u128) <= self.cap as u128 => {
                let mut out = BTreeSet::new();
                for x in &a {
                    for y in &b {
                        out.insert(x.union(y));
                    }
                }
                Repr::Explicit(out)
            }
            (Repr::Explicit(a), Repr::All) | (Repr::All, Repr::Explicit(a)) => Repr::Upward(a),
            (Repr::Explicit(a), other) | (other, Repr::Explicit(a)) => Repr::CoalesceWith(a, Box::new(other)),
            (l, r) => {
                if !self.universe.is_enumerable(self.cap) {
                    return Err(Error::ResourceLimit(format!(
                        "coalescing two predicate sets needs the configuration space of {} interactions, above the cap of {}",
                        self.universe.len(),
                        self.cap
                    )));
                }
                let a = self.enumerate(&l)?;
                if a.is_empty() {
                    Repr::Explicit(a)
                } else {
                    Repr::CoalesceWith(a, Box::new(r))
                }
            }
        })
    }

    fn member(&self, repr: &Repr, gamma: &Configuration, attempts: &mut u64) -> Result<bool> {
        Ok(match repr {
            Repr::Explicit(set) => set.contains(gamma),
            Repr::All => true,
            Repr::Pil(phi) => gamma.iter().all(|a| phi.holds(a)),
            Repr::Complement(inner) => !self.member(inner, gamma, attempts)?,
            Repr::Union(l, r) => self.member(l, gamma, attempts)? || self.member(r, gamma, attempts)?,
            Repr::Intersect(l, r) => self.member(l, gamma, attempts)? && self.member(r, gamma, attempts)?,
            Repr::Upward(set) => set.iter().any(|m| m.is_subset(gamma)),
            Repr::CoalesceWith(left, right) => {
                for first in left.iter().filter(|m| m.is_subset(gamma)) {
                    if self.completes(first, right, gamma, attempts)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Is there a member `β` of `right` with `γ \ first ⊆ β ⊆ γ`?
    fn completes(&self, first: &Configuration, right: &Repr, gamma: &Configuration, attempts: &mut u64) -> Result<bool> {
        let rest: BTreeSet<_> = gamma.as_set().difference(first.as_set()).copied().collect();
        match right {
            Repr::All => return Ok(true),
            Repr::Explicit(set) => {
                return Ok(set
                    .iter()
                    .any(|b| rest.is_subset(b.as_set()) && b.is_subset(gamma)));
            }
            _ => {}
        }
        let shared: Vec<_> = first.iter().collect();
        if shared.len() >= 63 {
            return Err(Error::ResourceLimit(format!(
                "coalescing split over {} shared interactions",
                shared.len()
            )));
        }
        for mask in 0u64..1 << shared.len() {
            let mut second = rest.clone();
            second.extend((0..shared.len()).filter(|i| mask >> i & 1 == 1).map(|i| shared[i]));
            let Ok(second) = Configuration::new(second) else {
                continue;
            };
            *attempts += 1;
            if *attempts > self.options.split_budget {
                return Err(Error::ResourceLimit(format!(
                    "coalescing split budget of {} attempts exhausted",
                    self.options.split_budget
                )));
            }
            if self.member(right, &second, attempts)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn enumerate(&self, repr: &Repr) -> Result<BTreeSet<Configuration>> {
        if let Repr::Explicit(set) = repr {
            return Ok(set.clone());
        }
        let mut out = BTreeSet::new();
        for gamma in self.universe.configurations(self.cap)? {
            if self.member(repr, &gamma, &mut 0)? {
                out.insert(gamma);
            }
        }
        Ok(out)
    }
}

fn complement(repr: Repr) -> Repr {
    match repr {
        Repr::Complement(inner) => *inner,
        other => Repr::Complement(Box::new(other)),
    }
}
