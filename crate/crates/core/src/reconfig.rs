//! Reconfiguration sequences and the trust decisions over them.

use std::collections::BTreeMap;

use crate::buchi::{two_state_automaton, Guard, Lasso};
use crate::component::System;
use crate::error::{Error, Result};
use crate::pcl::Pcl;
use crate::port::{Configuration, Interaction};
use crate::satset::{dominating_set, equivalent, sat_set, SatSet};

/// Activation of interactions at one step.
pub type Assignment = BTreeMap<Interaction, bool>;

/// An ultimately periodic sequence of configurations of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implementation {
    lasso: Lasso<Configuration>,
}

impl Implementation {
    pub fn new(sys: &System, prefix: Vec<Configuration>, cycle: Vec<Configuration>) -> Result<Self> {
        let lasso = Lasso::new(prefix, cycle)?;
        for l in 0..lasso.span() {
            sys.validate_configuration(lasso.at(l))?;
        }
        Ok(Implementation { lasso })
    }

    pub fn lasso(&self) -> &Lasso<Configuration> {
        &self.lasso
    }

    pub fn prefix(&self) -> &[Configuration] {
        self.lasso.prefix()
    }

    pub fn cycle(&self) -> &[Configuration] {
        self.lasso.cycle()
    }

    /// Configuration active at step `l`.
    pub fn config_of(&self, l: usize) -> &Configuration {
        self.lasso.at(l)
    }
}

/// Position `l`'s configuration; alias of [`Implementation::config_of`].
pub fn config_of(implementation: &Implementation, l: usize) -> &Configuration {
    implementation.config_of(l)
}

/// Builds an implementation from per-step activation maps. Interactions
/// missing from a map are inactive.
pub fn implementation_from_assignments(steps: &Lasso<Assignment>, sys: &System) -> Result<Implementation> {
    let convert = |step: &Assignment| {
        if let Some(a) = step.keys().find(|a| !sys.validate_interaction(**a)) {
            return Err(Error::InvalidInteraction(sys.ports().show_interaction(*a)));
        }
        Configuration::new(step.iter().filter(|(_, on)| **on).map(|(a, _)| *a))
    };
    let prefix = steps.prefix().iter().map(convert).collect::<Result<_>>()?;
    let cycle = steps.cycle().iter().map(convert).collect::<Result<_>>()?;
    Implementation::new(sys, prefix, cycle)
}

/// Activation maps total over `I_pB`.
pub fn assignments_of(implementation: &Implementation, sys: &System, cap: u64) -> Result<Lasso<Assignment>> {
    let interactions = sys.interactions(cap)?;
    Ok(implementation
        .lasso
        .map(|gamma| interactions.iter().map(|a| (*a, gamma.contains(*a))).collect()))
}

/// A dynamic reconfigurable architecture: a system, the formula its
/// configurations should satisfy, and an implementation.
#[derive(Debug, Clone)]
pub struct Dra {
    pub system: System,
    pub formula: Pcl,
    pub implementation: Implementation,
}

impl Dra {
    pub fn new(system: System, formula: Pcl, implementation: Implementation) -> Result<Self> {
        formula.check_universe(system.ports())?;
        for l in 0..implementation.lasso.span() {
            system.validate_configuration(implementation.config_of(l))?;
        }
        Ok(Dra {
            system,
            formula,
            implementation,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrustVerdict {
    /// Every step after `g` satisfies the formula.
    Trustworthy { g: usize },
    /// Loop indices whose configuration violates the formula.
    NotTrustworthy { violations: Vec<usize> },
}

impl TrustVerdict {
    pub fn is_trustworthy(&self) -> bool {
        matches!(self, TrustVerdict::Trustworthy { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialVerdict {
    /// From step `g` on, each configuration contains a satisfying one.
    /// `witnesses` pairs each step in `g..span` with its chosen subset.
    PartiallyTrustworthy {
        g: usize,
        witnesses: Vec<(usize, Configuration)>,
    },
    /// Loop indices whose configuration has no satisfying subset.
    NotPartiallyTrustworthy { violations: Vec<usize> },
}

impl PartialVerdict {
    pub fn is_partially_trustworthy(&self) -> bool {
        matches!(self, PartialVerdict::PartiallyTrustworthy { .. })
    }
}

fn satisfying(dra: &Dra, cap: u64) -> Result<SatSet> {
    let universe = dra.system.interaction_universe(cap)?;
    sat_set(&dra.formula, &universe, cap)?.materialize(cap)
}

fn loop_positions(lasso: &Lasso<Configuration>) -> std::ops::Range<usize> {
    lasso.prefix().len()..lasso.span()
}

/// Decides trustworthiness by running the implementation through the
/// trust automaton, then locates `g` or the violating loop steps.
pub fn is_trustworthy(dra: &Dra, cap: u64) -> Result<TrustVerdict> {
    let sat = satisfying(dra, cap)?;
    let lasso = dra.implementation.lasso();
    let automaton = two_state_automaton(sat.universe().clone(), Guard::new("sat", sat.clone()))?;
    let accepted = automaton.accepts(lasso)?;
    let good = (0..lasso.span())
        .map(|l| sat.contains(lasso.at(l)))
        .collect::<Result<Vec<bool>>>()?;
    if accepted {
        let g = good.iter().rposition(|ok| !ok).unwrap_or(0);
        Ok(TrustVerdict::Trustworthy { g })
    } else {
        let violations = loop_positions(lasso)
            .filter(|l| !good[*l])
            .map(|l| l - lasso.prefix().len())
            .collect();
        Ok(TrustVerdict::NotTrustworthy { violations })
    }
}

/// Decides partial trustworthiness with the dominating-set automaton.
/// A configuration that satisfies the formula is its own witness;
/// otherwise the least satisfying subset is chosen.
pub fn is_partially_trustworthy(dra: &Dra, cap: u64) -> Result<PartialVerdict> {
    let sat = satisfying(dra, cap)?;
    let universe = sat.universe().clone();
    let dominating = dominating_set(&dra.formula, &universe, cap)?;
    let lasso = dra.implementation.lasso();
    let automaton = two_state_automaton(universe, Guard::new("dom", dominating.clone()))?;
    let dominated = (0..lasso.span())
        .map(|l| dominating.contains(lasso.at(l)))
        .collect::<Result<Vec<bool>>>()?;
    if !automaton.accepts(lasso)? {
        let violations = loop_positions(lasso)
            .filter(|l| !dominated[*l])
            .map(|l| l - lasso.prefix().len())
            .collect();
        return Ok(PartialVerdict::NotPartiallyTrustworthy { violations });
    }
    let g = dominated.iter().rposition(|ok| !ok).map_or(0, |l| l + 1);
    let mut witnesses = Vec::new();
    for l in g..lasso.span() {
        let gamma = lasso.at(l);
        let chosen = if sat.contains(gamma)? {
            gamma.clone()
        } else {
            sat.least_member_within(gamma)?
                .expect("dominated configurations contain a satisfying one")
        };
        witnesses.push((l, chosen));
    }
    Ok(PartialVerdict::PartiallyTrustworthy { g, witnesses })
}

/// Restricts every step from the stabilization point on to its witness.
/// Earlier steps are kept; a trustworthy implementation comes back as is.
pub fn correct(dra: &Dra, cap: u64) -> Result<Implementation> {
    if is_trustworthy(dra, cap)?.is_trustworthy() {
        return Ok(dra.implementation.clone());
    }
    let PartialVerdict::PartiallyTrustworthy { witnesses, .. } = is_partially_trustworthy(dra, cap)? else {
        return Err(Error::NotPartiallyTrustworthy);
    };
    let lasso = dra.implementation.lasso();
    let replaced: BTreeMap<usize, Configuration> = witnesses.into_iter().collect();
    let step = |l: usize| replaced.get(&l).unwrap_or(lasso.at(l)).clone();
    let prefix = (0..lasso.prefix().len()).map(step).collect();
    let cycle = loop_positions(lasso).map(step).collect();
    Implementation::new(&dra.system, prefix, cycle)
}

/// Outcome of [`dra_equivalent`]; `reason` names the first failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DraEquivalence {
    pub equivalent: bool,
    pub reason: Option<&'static str>,
}

/// Same system, equivalent formulas, and both implementations trustworthy.
pub fn dra_equivalent(d1: &Dra, d2: &Dra, cap: u64) -> Result<DraEquivalence> {
    let fail = |reason| {
        Ok(DraEquivalence {
            equivalent: false,
            reason: Some(reason),
        })
    };
    if d1.system != d2.system {
        return fail("systems differ");
    }
    let universe = d1.system.interaction_universe(cap)?;
    if !equivalent(&d1.formula, &d2.formula, &universe, cap)?.holds {
        return fail("formulas not equivalent");
    }
    if !is_trustworthy(d1, cap)?.is_trustworthy() || !is_trustworthy(d2, cap)?.is_trustworthy() {
        return fail("implementation not trustworthy");
    }
    Ok(DraEquivalence {
        equivalent: true,
        reason: None,
    })
}
