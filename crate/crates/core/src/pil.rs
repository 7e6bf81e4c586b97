//! Propositional interaction logic: formulas evaluated on one interaction.

use crate::error::{Error, Result};
use crate::port::{Interaction, PortId, PortUniverse};

/// Core PIL syntax. `Neg(Neg(φ))` never occurs: [`Pil::neg`] collapses it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pil {
    True,
    Atom(PortId),
    Neg(Box<Pil>),
    Or(Box<Pil>, Box<Pil>),
}

impl Pil {
    pub fn atom(p: PortId) -> Pil {
        Pil::Atom(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Pil {
        match self {
            Pil::Neg(inner) => *inner,
            other => Pil::Neg(Box::new(other)),
        }
    }

    pub fn or(self, other: Pil) -> Pil {
        Pil::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Pil) -> Pil {
        self.neg().or(other.neg()).neg()
    }

    pub fn falsum() -> Pil {
        Pil::True.neg()
    }

    /// Positive literal `p` or negative literal `p̄`.
    pub fn literal(p: PortId, positive: bool) -> Pil {
        if positive {
            Pil::Atom(p)
        } else {
            Pil::Atom(p).neg()
        }
    }

    /// `⋀_{p∈a} p ∧ ⋀_{p∉a} p̄`, folded left over the universe in port order.
    pub fn characteristic(a: Interaction, universe: &PortUniverse) -> Result<Pil> {
        if !universe.contains_interaction(a) {
            return Err(Error::UniverseMismatch(format!(
                "interaction with port bits {:#x} is not over the universe",
                a.bits()
            )));
        }
        let mut literals = universe.ids().map(|p| Pil::literal(p, a.contains(p)));
        let first = literals.next().expect("universes are non-empty");
        Ok(literals.fold(first, Pil::and))
    }

    pub fn holds(&self, a: Interaction) -> bool {
        match self {
            Pil::True => true,
            Pil::Atom(p) => a.contains(*p),
            Pil::Neg(inner) => !inner.holds(a),
            Pil::Or(l, r) => l.holds(a) || r.holds(a),
        }
    }

    /// Bitmask of every port mentioned.
    pub fn port_mask(&self) -> u128 {
        match self {
            Pil::True => 0,
            Pil::Atom(p) => p.bit(),
            Pil::Neg(inner) => inner.port_mask(),
            Pil::Or(l, r) => l.port_mask() | r.port_mask(),
        }
    }

    /// Literals `(port, positive)` if this is a monomial.
    ///
    /// A conjunction is stored as the negation of a disjunction of negated
    /// conjuncts, so a monomial is either a single literal or `Neg` of an
    /// `Or`-tree whose leaves are negated literals.
    pub fn monomial_literals(&self) -> Option<Vec<(PortId, bool)>> {
        fn negated_leaves(node: &Pil, out: &mut Vec<(PortId, bool)>) -> bool {
            match node {
                Pil::Or(l, r) => negated_leaves(l, out) && negated_leaves(r, out),
                Pil::Atom(p) => {
                    out.push((*p, false));
                    true
                }
                Pil::Neg(inner) => match inner.as_ref() {
                    Pil::Atom(p) => {
                        out.push((*p, true));
                        true
                    }
                    _ => false,
                },
                Pil::True => false,
            }
        }
        match self {
            Pil::Atom(p) => Some(vec![(*p, true)]),
            Pil::Neg(inner) => match inner.as_ref() {
                Pil::Atom(p) => Some(vec![(*p, false)]),
                or @ Pil::Or(..) => {
                    let mut out = Vec::new();
                    negated_leaves(or, &mut out).then_some(out)
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial_literals().is_some()
    }

    /// The interaction this formula pins down, if it is a full monomial
    /// over `universe`: every port occurs exactly once.
    pub fn full_monomial_interaction(&self, universe: &PortUniverse) -> Option<Option<Interaction>> {
        let literals = self.monomial_literals()?;
        if literals.len() != universe.len() {
            return None;
        }
        let mut seen = 0u128;
        let mut positive = 0u128;
        for (p, pos) in literals {
            if seen & p.bit() != 0 {
                return None;
            }
            seen |= p.bit();
            if pos {
                positive |= p.bit();
            }
        }
        (seen == universe.mask()).then(|| Interaction::from_bits(positive))
    }

    pub fn is_full_monomial(&self, universe: &PortUniverse) -> bool {
        self.full_monomial_interaction(universe).is_some()
    }
}

/// `a ⊨ φ`, after checking that both are over `universe`.
pub fn pil_sat(universe: &PortUniverse, a: Interaction, phi: &Pil) -> Result<bool> {
    if !universe.contains_interaction(a) {
        return Err(Error::UniverseMismatch(universe.show_interaction(a)));
    }
    if phi.port_mask() & !universe.mask() != 0 {
        return Err(Error::UniverseMismatch(
            "formula mentions a port outside the universe".into(),
        ));
    }
    Ok(phi.holds(a))
}

/// Characteristic monomial `m_a`.
pub fn characteristic_monomial(a: Interaction, universe: &PortUniverse) -> Result<Pil> {
    Pil::characteristic(a, universe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::port::Port;

    fn ms() -> PortUniverse {
        PortUniverse::new([Port::of_instance("m", 1), Port::of_instance("s", 1)]).unwrap()
    }

    fn ia(u: &PortUniverse, names: &[&str]) -> Interaction {
        u.interaction_of_names(names).unwrap()
    }

    #[test]
    fn atom_holds_iff_port_active() {
        let u = ms();
        let m = u.resolve("m(1)").unwrap();
        assert!(pil_sat(&u, ia(&u, &["m(1)", "s(1)"]), &Pil::atom(m)).unwrap());
    }

    #[test]
    fn false_never_holds() {
        let u = ms();
        assert!(!pil_sat(&u, ia(&u, &["m(1)"]), &Pil::falsum()).unwrap());
    }

    #[test]
    fn negated_absent_port_holds() {
        let u = ms();
        let s = u.resolve("s(1)").unwrap();
        assert!(pil_sat(&u, ia(&u, &["m(1)"]), &Pil::atom(s).neg()).unwrap());
    }

    #[test]
    fn double_negation_collapses() {
        let p = Pil::atom(PortId(0));
        assert_eq!(p.clone().neg().neg(), p);
        assert_eq!(Pil::falsum(), Pil::Neg(Box::new(Pil::True)));
    }

    #[test]
    fn characteristic_monomials_of_small_universe() {
        let u = ms();
        let (m, s) = (u.resolve("m(1)").unwrap(), u.resolve("s(1)").unwrap());
        let both = Pil::characteristic(ia(&u, &["m(1)", "s(1)"]), &u).unwrap();
        assert_eq!(both, Pil::atom(m).and(Pil::atom(s)));
        let only_m = Pil::characteristic(ia(&u, &["m(1)"]), &u).unwrap();
        assert_eq!(only_m, Pil::atom(m).and(Pil::atom(s).neg()));
        assert!(only_m.is_full_monomial(&u));
        assert!(!Pil::atom(m).is_full_monomial(&u));
        assert_eq!(
            only_m.full_monomial_interaction(&u),
            Some(Some(ia(&u, &["m(1)"])))
        );
    }

    #[test]
    fn all_negative_full_monomial_pins_no_interaction() {
        let u = ms();
        let (m, s) = (u.resolve("m(1)").unwrap(), u.resolve("s(1)").unwrap());
        let none = Pil::atom(m).neg().and(Pil::atom(s).neg());
        assert_eq!(none.full_monomial_interaction(&u), Some(None));
    }

    #[test]
    fn non_monomials_are_recognised() {
        let (p, q) = (Pil::atom(PortId(0)), Pil::atom(PortId(1)));
        assert!(!p.clone().or(q.clone()).is_monomial());
        assert!(!Pil::True.is_monomial());
        assert!(p.clone().and(q.clone().neg()).is_monomial());
        assert!(p.clone().and(p.clone()).is_monomial());
        assert!(!p.clone().and(p).is_full_monomial(&PortUniverse::plain(["p", "q"]).unwrap()));
    }

    #[test]
    fn foreign_ports_are_a_universe_mismatch() {
        let u = ms();
        let phi = Pil::atom(PortId(5));
        let err = pil_sat(&u, ia(&u, &["m(1)"]), &phi).unwrap_err();
        assert_eq!(err.code(), "UNIVERSE_MISMATCH");
        let outside = Interaction::from_bits(1 << 7).unwrap();
        assert!(Pil::characteristic(outside, &u).is_err());
    }
}
