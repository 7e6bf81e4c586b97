mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::Oracle;
use pcl_core::textio::{parse_formula, render_formula};
use pcl_core::{
    brute_force_sat_set, dominating_set, equivalent, full_normal_form_over, pcl_sat, sat_set, satisfiable,
    Configuration, Interaction, InteractionUniverse, PclExpr, PilExpr, PortUniverse, DEFAULT_CAP,
};
use proptest::prelude::*;

const PORTS: [&str; 3] = ["a", "b", "c"];

fn ports() -> Arc<PortUniverse> {
    Arc::new(PortUniverse::plain(PORTS).unwrap())
}

fn interaction(bits: u8) -> Interaction {
    Interaction::from_bits(bits as u128).unwrap()
}

fn pil() -> impl Strategy<Value = PilExpr> {
    let ids: Vec<_> = ports().ids().collect();
    let leaf = prop_oneof![
        Just(PilExpr::True),
        Just(PilExpr::False),
        prop::sample::select(ids).prop_map(PilExpr::Port),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| PilExpr::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PilExpr::And(Box::new(l), Box::new(r))),
            (inner.clone(), inner).prop_map(|(l, r)| PilExpr::Or(Box::new(l), Box::new(r))),
        ]
    })
}

fn pcl() -> impl Strategy<Value = PclExpr> {
    let leaf = prop_oneof![
        1 => Just(PclExpr::True),
        3 => (1u8..8).prop_map(|b| PclExpr::Interaction(interaction(b))),
        2 => pil().prop_map(PclExpr::Pil),
    ];
    leaf.prop_recursive(4, 12, 3, |inner| {
        let b = |e: PclExpr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |e| PclExpr::Not(b(e))),
            inner.clone().prop_map(move |e| PclExpr::Closure(b(e))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PclExpr::Union(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PclExpr::Intersect(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PclExpr::Coalesce(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| PclExpr::Implies(b(l), b(r))),
            prop::collection::vec(inner, 1..4).prop_map(PclExpr::Dis),
        ]
    })
}

/// A sub-universe of `I(P)` so that restricted universes get exercised too.
fn universe_bits() -> impl Strategy<Value = BTreeSet<u8>> {
    prop::collection::btree_set(1u8..8, 1..=7)
}

fn setup(bits: &BTreeSet<u8>) -> (InteractionUniverse, Oracle) {
    let list: Vec<Interaction> = bits.iter().map(|&b| interaction(b)).collect();
    (
        InteractionUniverse::new(ports(), list.clone()).unwrap(),
        Oracle::new(list),
    )
}

fn oracle_set(oracle: &Oracle, f: &PclExpr) -> BTreeSet<Configuration> {
    oracle
        .satisfying(f)
        .into_iter()
        .map(|m| Configuration::new(oracle.config(m)).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sat_set_matches_oracle(f in pcl(), bits in universe_bits()) {
        let (universe, oracle) = setup(&bits);
        let core = f.desugar(&ports());
        let expected = oracle_set(&oracle, &f);
        let compositional = sat_set(&core, &universe, DEFAULT_CAP).unwrap();
        prop_assert_eq!(compositional.members().unwrap(), &expected);
        let brute = brute_force_sat_set(&core, &universe, DEFAULT_CAP).unwrap();
        prop_assert_eq!(brute.members().unwrap(), &expected);
        for mask in 1..oracle.size() {
            let gamma = Configuration::new(oracle.config(mask)).unwrap();
            prop_assert_eq!(pcl_sat(&ports(), &gamma, &core).unwrap(), expected.contains(&gamma));
        }
    }

    #[test]
    fn full_normal_form_is_equivalent(f in pcl(), bits in universe_bits()) {
        let (universe, _) = setup(&bits);
        let core = f.desugar(&ports());
        let fnf = full_normal_form_over(&core, &universe, DEFAULT_CAP).unwrap();
        let back = fnf.to_formula();
        prop_assert!(equivalent(&core, &back, &universe, DEFAULT_CAP).unwrap().holds);
        for gamma in fnf.disjuncts() {
            let single = Oracle::new(universe.interactions().iter().copied());
            let sum = gamma.iter().map(PclExpr::Interaction).reduce(PclExpr::coalesce).unwrap();
            let hits = single.satisfying(&sum);
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(single.config(hits[0]), gamma.iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn closure_is_the_dominating_set(f in pcl(), bits in universe_bits()) {
        let (universe, _) = setup(&bits);
        let core = f.desugar(&ports());
        let dom = dominating_set(&core, &universe, DEFAULT_CAP).unwrap();
        let closed = sat_set(&core.clone().closure(), &universe, DEFAULT_CAP).unwrap();
        prop_assert_eq!(dom.members().unwrap(), closed.members().unwrap());
    }

    #[test]
    fn equivalence_witnesses_separate(f in pcl(), g in pcl(), bits in universe_bits()) {
        let (universe, oracle) = setup(&bits);
        let (cf, cg) = (f.desugar(&ports()), g.desugar(&ports()));
        let decision = equivalent(&cf, &cg, &universe, DEFAULT_CAP).unwrap();
        let same = oracle.meaning(&f) == oracle.meaning(&g);
        prop_assert_eq!(decision.holds, same);
        if let Some(w) = decision.witness {
            prop_assert_ne!(pcl_sat(&ports(), &w, &cf).unwrap(), pcl_sat(&ports(), &w, &cg).unwrap());
        }
        let sat = satisfiable(&cf, &universe, DEFAULT_CAP).unwrap();
        prop_assert_eq!(sat.holds, !oracle.satisfying(&f).is_empty());
    }

    #[test]
    fn rendering_round_trips(f in pcl()) {
        let u = ports();
        let text = render_formula(&f, &u);
        let back = parse_formula(&text, &u).unwrap();
        prop_assert_eq!(render_formula(&back, &u), text);
        prop_assert_eq!(back.desugar(&u), f.desugar(&u));
    }
}

#[test]
fn coalescing_is_idempotent_on_closed_sets() {
    // ~f + ~f = ~f, checked exhaustively over I(P) for a few seeds
    let u = ports();
    let universe = InteractionUniverse::all(u.clone(), DEFAULT_CAP).unwrap();
    for text in ["~<a>", "~{a | b}", "~(<a> + <b,c>)"] {
        let f = parse_formula(text, &u).unwrap().desugar(&u);
        let doubled = f.clone().coalesce(f.clone());
        assert!(equivalent(&f, &doubled, &universe, DEFAULT_CAP).unwrap().holds, "{text}");
    }
}
