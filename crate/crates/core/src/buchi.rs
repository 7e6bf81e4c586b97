//! Büchi automata over possibly infinite alphabets, read on lasso words.
//!
//! Transition guards are symbol sets given by membership, so an alphabet
//! such as every configuration of a system never has to be listed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::component::System;
use crate::error::{Error, Result};
use crate::pcl::Pcl;
use crate::port::Configuration;
use crate::satset::{dominating_set, sat_set, SatSet};
use crate::universe::InteractionUniverse;

/// A set of symbols known by membership.
pub trait SymbolSet<S>: fmt::Debug + Send + Sync {
    fn contains(&self, symbol: &S) -> bool;

    /// Some member, if the set is non-empty.
    fn witness(&self) -> Option<S>;

    /// Every member, for sets small enough to list.
    fn members(&self) -> Option<Vec<S>> {
        None
    }
}

impl<S: Ord + Clone + fmt::Debug + Send + Sync> SymbolSet<S> for BTreeSet<S> {
    fn contains(&self, symbol: &S) -> bool {
        BTreeSet::contains(self, symbol)
    }

    fn witness(&self) -> Option<S> {
        self.first().cloned()
    }

    fn members(&self) -> Option<Vec<S>> {
        Some(self.iter().cloned().collect())
    }
}

impl SymbolSet<Configuration> for SatSet {
    fn contains(&self, symbol: &Configuration) -> bool {
        SatSet::contains(self, symbol).unwrap_or(false)
    }

    fn witness(&self) -> Option<Configuration> {
        self.least_member()
    }

    fn members(&self) -> Option<Vec<Configuration>> {
        SatSet::members(self).ok().map(|m| m.iter().cloned().collect())
    }
}

/// `C_pB`: every configuration whose interactions are in `I_pB`.
#[derive(Debug, Clone)]
pub struct ConfigurationSpace {
    universe: Arc<InteractionUniverse>,
}

impl ConfigurationSpace {
    pub fn new(universe: InteractionUniverse) -> Self {
        ConfigurationSpace {
            universe: Arc::new(universe),
        }
    }

    pub fn universe(&self) -> &InteractionUniverse {
        &self.universe
    }
}

impl SymbolSet<Configuration> for ConfigurationSpace {
    fn contains(&self, symbol: &Configuration) -> bool {
        self.universe.contains_configuration(symbol)
    }

    fn witness(&self) -> Option<Configuration> {
        self.universe.interactions().first().map(|a| Configuration::singleton(*a))
    }
}

/// A guard with the label it is shown under.
#[derive(Debug, Clone)]
pub struct Guard<S> {
    pub label: String,
    pub set: Arc<dyn SymbolSet<S>>,
}

impl<S> Guard<S> {
    pub fn new(label: impl Into<String>, set: impl SymbolSet<S> + 'static) -> Self {
        Guard {
            label: label.into(),
            set: Arc::new(set),
        }
    }
}

/// An ultimately periodic word `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<S> {
    prefix: Vec<S>,
    cycle: Vec<S>,
}

impl<S: Clone> Lasso<S> {
    pub fn new(prefix: Vec<S>, cycle: Vec<S>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(Lasso { prefix, cycle })
    }

    pub fn prefix(&self) -> &[S] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[S] {
        &self.cycle
    }

    /// Number of distinct positions, prefix and one pass of the cycle.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Symbol at word position `l`.
    pub fn at(&self, l: usize) -> &S {
        match l.checked_sub(self.prefix.len()) {
            None => &self.prefix[l],
            Some(k) => &self.cycle[k % self.cycle.len()],
        }
    }

    /// The successor of position `l` among the first [`Lasso::span`] ones.
    pub fn next_position(&self, l: usize) -> usize {
        if l + 1 < self.span() {
            l + 1
        } else {
            self.prefix.len()
        }
    }

    /// The same word with the first cycle symbol moved into the prefix.
    pub fn rotated(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.push(self.cycle[0].clone());
        let mut cycle = self.cycle[1..].to_vec();
        cycle.push(self.cycle[0].clone());
        Lasso { prefix, cycle }
    }

    /// The same word with the cycle written twice.
    pub fn unrolled(&self) -> Self {
        Lasso {
            prefix: self.prefix.clone(),
            cycle: [self.cycle.clone(), self.cycle.clone()].concat(),
        }
    }

    pub fn map<T>(&self, mut f: impl FnMut(&S) -> T) -> Lasso<T> {
        Lasso {
            prefix: self.prefix.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(f).collect(),
        }
    }
}

/// A non-deterministic Büchi automaton. States are indices into the
/// declared name list.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton<S> {
    states: Vec<String>,
    alphabet: Guard<S>,
    initial: BTreeSet<usize>,
    transitions: Vec<(usize, Guard<S>, usize)>,
    accepting: BTreeSet<usize>,
}

impl<S: Clone> BuchiAutomaton<S> {
    pub fn new(
        states: Vec<String>,
        alphabet: Guard<S>,
        initial: BTreeSet<usize>,
        transitions: Vec<(usize, Guard<S>, usize)>,
        accepting: BTreeSet<usize>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidAutomaton(msg));
        let names: BTreeSet<&String> = states.iter().collect();
        if names.len() != states.len() {
            return invalid("duplicate state name".into());
        }
        if initial.is_empty() {
            return invalid("no initial state".into());
        }
        let n = states.len();
        if let Some(q) = initial.iter().chain(&accepting).find(|q| **q >= n) {
            return invalid(format!("state index {q} is not declared"));
        }
        for (from, guard, to) in &transitions {
            if *from >= n || *to >= n {
                return invalid(format!("transition {from} --{}--> {to} uses an undeclared state", guard.label));
            }
            let outside = match guard.set.members() {
                Some(all) => all.iter().any(|s| !alphabet.set.contains(s)),
                None => guard.set.witness().is_some_and(|s| !alphabet.set.contains(&s)),
            };
            if outside {
                return invalid(format!("guard `{}` leaves the alphabet", guard.label));
            }
        }
        Ok(BuchiAutomaton {
            states,
            alphabet,
            initial,
            transitions,
            accepting,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &Guard<S> {
        &self.alphabet
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &[(usize, Guard<S>, usize)] {
        &self.transitions
    }

    /// Does some run over `word` visit an accepting state infinitely often?
    ///
    /// Runs are searched in the product of the automaton with the word's
    /// positions, where the last position returns to the cycle start. Only
    /// cycle positions lie on cycles of that graph.
    pub fn accepts(&self, word: &Lasso<S>) -> Result<bool> {
        let span = word.span();
        for l in 0..span {
            if !self.alphabet.set.contains(word.at(l)) {
                return Err(Error::UnknownSymbol(format!("at word position {l}")));
            }
        }
        let n = self.states.len();
        let node = |q: usize, l: usize| q * span + l;
        let mut successors = vec![Vec::new(); n * span];
        for (from, guard, to) in &self.transitions {
            for l in 0..span {
                if guard.set.contains(word.at(l)) {
                    successors[node(*from, l)].push(node(*to, word.next_position(l)));
                }
            }
        }
        let starts: Vec<usize> = self.initial.iter().map(|q| node(*q, 0)).collect();
        let reachable = reach(&successors, &starts);
        for &q in &self.accepting {
            for l in word.prefix().len()..span {
                let v = node(q, l);
                if reachable[v] && reach(&successors, &successors[v])[v] {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Is the language empty? An accepted word exists iff an accepting
    /// state is reachable and lies on a cycle.
    pub fn is_empty(&self) -> bool {
        self.find_accepting_lasso().is_none()
    }

    /// Some accepted word, built from guard witnesses.
    pub fn find_accepting_lasso(&self) -> Option<Lasso<S>> {
        let n = self.states.len();
        let mut edges: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
        for (from, guard, to) in &self.transitions {
            if let Some(s) = guard.set.witness() {
                edges[*from].push((*to, s));
            }
        }
        let starts: Vec<usize> = self.initial.iter().copied().collect();
        for &q in &self.accepting {
            let Some(prefix) = path(&edges, &starts, q) else {
                continue;
            };
            let first_steps: Vec<&(usize, S)> = edges[q].iter().collect();
            for (next, symbol) in first_steps {
                if let Some(rest) = path(&edges, &[*next], q) {
                    let mut cycle = vec![symbol.clone()];
                    cycle.extend(rest);
                    return Some(Lasso { prefix, cycle });
                }
            }
        }
        None
    }

    /// Line-oriented listing: state declarations, then one
    /// `q --label--> q'` line per transition.
    pub fn to_text(&self) -> String {
        let names = |set: &BTreeSet<usize>| {
            set.iter().map(|q| self.states[*q].as_str()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.states.join(" "));
        let _ = writeln!(out, "initial {}", names(&self.initial));
        let _ = writeln!(out, "accepting {}", names(&self.accepting));
        let _ = writeln!(out, "alphabet {}", self.alphabet.label);
        for (from, guard, to) in &self.transitions {
            let _ = writeln!(out, "{} --{}--> {}", self.states[*from], guard.label, self.states[*to]);
        }
        out
    }
}

fn reach(successors: &[Vec<usize>], starts: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; successors.len()];
    let mut stack: Vec<usize> = starts.to_vec();
    while let Some(v) = stack.pop() {
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(&successors[v]);
        }
    }
    seen
}

/// Symbols along a shortest path from one of `starts` to `target`.
fn path<S: Clone>(edges: &[Vec<(usize, S)>], starts: &[usize], target: usize) -> Option<Vec<S>> {
    let mut parent: Vec<Option<(usize, S)>> = vec![None; edges.len()];
    let mut seen = vec![false; edges.len()];
    let mut queue = VecDeque::new();
    for &s in starts {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        if v == target {
            let mut symbols = Vec::new();
            let mut at = v;
            while let Some((prev, s)) = parent[at].clone() {
                symbols.push(s);
                at = prev;
            }
            symbols.reverse();
            return Some(symbols);
        }
        for (w, s) in &edges[v] {
            if !seen[*w] {
                seen[*w] = true;
                parent[*w] = Some((v, s.clone()));
                queue.push_back(*w);
            }
        }
    }
    None
}

/// `q₀` loops on every configuration of `universe`; `q₀ → q₁` and
/// `q₁ → q₁` read members of `guard`.
pub fn two_state_automaton(
    universe: InteractionUniverse,
    guard: Guard<Configuration>,
) -> Result<BuchiAutomaton<Configuration>> {
    let space = ConfigurationSpace::new(universe);
    let any = Guard::new("any", space.clone());
    BuchiAutomaton::new(
        vec!["q0".into(), "q1".into()],
        Guard::new("C", space),
        BTreeSet::from([0]),
        vec![(0, any, 0), (0, guard.clone(), 1), (1, guard, 1)],
        BTreeSet::from([1]),
    )
}

/// `A_f`: accepts exactly the words whose configurations eventually all
/// satisfy `f`.
pub fn build_trust_automaton(f: &Pcl, sys: &System, cap: u64) -> Result<BuchiAutomaton<Configuration>> {
    let universe = sys.interaction_universe(cap)?;
    let sat = sat_set(f, &universe, cap)?.materialize(cap)?;
    two_state_automaton(universe, Guard::new("sat", sat))
}

/// `B_f`: as [`build_trust_automaton`] with the dominating set `D_f` in
/// place of the satisfying set.
pub fn build_partial_trust_automaton(f: &Pcl, sys: &System, cap: u64) -> Result<BuchiAutomaton<Configuration>> {
    let universe = sys.interaction_universe(cap)?;
    let dominating = dominating_set(f, &universe, cap)?;
    two_state_automaton(universe, Guard::new("dom", dominating))
}
