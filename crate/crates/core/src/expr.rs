//! Surface syntax: the formulas as written, derived operators included.
//!
//! Parsing and rendering work on these trees so that the concrete text
//! round-trips; [`PclExpr::desugar`] lowers them to the core [`Pcl`].

use crate::pcl::Pcl;
use crate::pil::Pil;
use crate::port::{Interaction, PortId, PortUniverse};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PilExpr {
    True,
    False,
    Port(PortId),
    Not(Box<PilExpr>),
    And(Box<PilExpr>, Box<PilExpr>),
    Or(Box<PilExpr>, Box<PilExpr>),
}

impl PilExpr {
    pub fn desugar(&self) -> Pil {
        match self {
            PilExpr::True => Pil::True,
            PilExpr::False => Pil::falsum(),
            PilExpr::Port(p) => Pil::atom(*p),
            PilExpr::Not(e) => e.desugar().neg(),
            PilExpr::And(l, r) => l.desugar().and(r.desugar()),
            PilExpr::Or(l, r) => l.desugar().or(r.desugar()),
        }
    }

    /// Surface form of a core formula, preferring `&` and `false` where the
    /// core shape allows. `lift(φ).desugar() == φ`.
    pub fn lift(phi: &Pil) -> PilExpr {
        match phi {
            Pil::True => PilExpr::True,
            Pil::Atom(p) => PilExpr::Port(*p),
            Pil::Neg(inner) => match inner.as_ref() {
                Pil::True => PilExpr::False,
                Pil::Or(l, r) => PilExpr::And(
                    Box::new(PilExpr::lift(&(**l).clone().neg())),
                    Box::new(PilExpr::lift(&(**r).clone().neg())),
                ),
                other => PilExpr::Not(Box::new(PilExpr::lift(other))),
            },
            Pil::Or(l, r) => PilExpr::Or(Box::new(PilExpr::lift(l)), Box::new(PilExpr::lift(r))),
        }
    }
}

/// Surface PCL syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PclExpr {
    True,
    Pil(PilExpr),
    /// `<p,q>`: the characteristic monomial of `{p,q}` over the whole universe.
    Interaction(Interaction),
    Not(Box<PclExpr>),
    Closure(Box<PclExpr>),
    Union(Box<PclExpr>, Box<PclExpr>),
    Intersect(Box<PclExpr>, Box<PclExpr>),
    Coalesce(Box<PclExpr>, Box<PclExpr>),
    Implies(Box<PclExpr>, Box<PclExpr>),
    /// n-ary `∨`, folded left.
    Dis(Vec<PclExpr>),
}

impl PclExpr {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PclExpr::Not(Box::new(self))
    }

    pub fn closure(self) -> Self {
        PclExpr::Closure(Box::new(self))
    }

    pub fn union(self, other: Self) -> Self {
        PclExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn intersect(self, other: Self) -> Self {
        PclExpr::Intersect(Box::new(self), Box::new(other))
    }

    pub fn coalesce(self, other: Self) -> Self {
        PclExpr::Coalesce(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        PclExpr::Implies(Box::new(self), Box::new(other))
    }

    /// Lowers to the five core constructors. Interaction literals expand
    /// over `universe`, which must contain every port the expression names.
    pub fn desugar(&self, universe: &PortUniverse) -> Pcl {
        match self {
            PclExpr::True => Pcl::True,
            PclExpr::Pil(phi) => Pcl::Pil(phi.desugar()),
            PclExpr::Interaction(a) => Pcl::Pil(
                Pil::characteristic(*a, universe)
                    .expect("interaction literals are resolved against the universe"),
            ),
            PclExpr::Not(f) => f.desugar(universe).not(),
            PclExpr::Closure(f) => f.desugar(universe).closure(),
            PclExpr::Union(l, r) => l.desugar(universe).union(r.desugar(universe)),
            PclExpr::Intersect(l, r) => l.desugar(universe).intersect(r.desugar(universe)),
            PclExpr::Coalesce(l, r) => l.desugar(universe).coalesce(r.desugar(universe)),
            PclExpr::Implies(l, r) => l.desugar(universe).implies(r.desugar(universe)),
            PclExpr::Dis(items) => items
                .iter()
                .map(|f| f.desugar(universe))
                .reduce(Pcl::disjoin)
                .expect("dis has at least one operand"),
        }
    }

    /// Surface form of a core formula using only core operators, with
    /// characteristic monomials shown as interaction literals.
    /// `lift(f, u).desugar(u) == f`.
    pub fn lift(f: &Pcl, universe: &PortUniverse) -> PclExpr {
        match f {
            Pcl::True => PclExpr::True,
            Pcl::Pil(phi) => match phi.full_monomial_interaction(universe) {
                Some(Some(a)) if Pil::characteristic(a, universe).as_ref() == Ok(phi) => {
                    PclExpr::Interaction(a)
                }
                _ => PclExpr::Pil(PilExpr::lift(phi)),
            },
            Pcl::Not(g) => PclExpr::lift(g, universe).not(),
            Pcl::Union(l, r) => PclExpr::lift(l, universe).union(PclExpr::lift(r, universe)),
            Pcl::Coalesce(l, r) => PclExpr::lift(l, universe).coalesce(PclExpr::lift(r, universe)),
        }
    }

    /// Port bitmask of every port named, literals included.
    pub fn port_mask(&self) -> u128 {
        match self {
            PclExpr::True => 0,
            PclExpr::Pil(phi) => phi.desugar().port_mask(),
            PclExpr::Interaction(a) => a.bits(),
            PclExpr::Not(f) | PclExpr::Closure(f) => f.port_mask(),
            PclExpr::Union(l, r)
            | PclExpr::Intersect(l, r)
            | PclExpr::Coalesce(l, r)
            | PclExpr::Implies(l, r) => l.port_mask() | r.port_mask(),
            PclExpr::Dis(items) => items.iter().fold(0, |m, f| m | f.port_mask()),
        }
    }

    /// Every interaction literal, in order of appearance.
    pub fn interaction_literals(&self) -> Vec<Interaction> {
        fn walk(e: &PclExpr, out: &mut Vec<Interaction>) {
            match e {
                PclExpr::True | PclExpr::Pil(_) => {}
                PclExpr::Interaction(a) => out.push(*a),
                PclExpr::Not(f) | PclExpr::Closure(f) => walk(f, out),
                PclExpr::Union(l, r)
                | PclExpr::Intersect(l, r)
                | PclExpr::Coalesce(l, r)
                | PclExpr::Implies(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                PclExpr::Dis(items) => items.iter().for_each(|f| walk(f, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Lowers a surface formula to the core; alias of [`PclExpr::desugar`].
pub fn desugar(f: &PclExpr, universe: &PortUniverse) -> Pcl {
    f.desugar(universe)
}
