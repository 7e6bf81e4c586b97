use pcl_core::architectures::{gen_pipes_filters, gen_pipes_filters_unclosed};
use pcl_core::{pcl_sat, sat_set, Configuration, DEFAULT_CAP};

#[test]
fn unclosed_style_is_unsatisfiable() {
    // Without closures the component constraints ask every configuration to
    // be a single interaction while the connector constraint needs two.
    let arch = gen_pipes_filters_unclosed(2, 1).unwrap();
    let universe = arch.system.interaction_universe(DEFAULT_CAP).unwrap();
    let set = sat_set(&arch.core(), &universe, DEFAULT_CAP).unwrap();
    assert_eq!(set.len(), Some(0));
}

#[test]
fn closed_style_has_both_chains() {
    let arch = gen_pipes_filters(2, 1).unwrap();
    let universe = arch.system.interaction_universe(DEFAULT_CAP).unwrap();
    let set = sat_set(&arch.core(), &universe, DEFAULT_CAP).unwrap();
    let members = set.members().unwrap();
    assert_eq!(members.len(), 2);
    assert!(members.iter().all(|gamma| gamma.len() == 2));
}

#[test]
fn filter_constraint_allows_a_shared_pipe() {
    // The filter constraint only bounds how each filter is wired, so one pipe
    // may feed two filters as long as each filter reads exactly one pipe.
    let arch = gen_pipes_filters(2, 2).unwrap();
    let ports = arch.system.ports();
    let a = |names: &[&str]| ports.interaction_of_names(names).unwrap();
    let gamma = Configuration::new([
        a(&["in_f(1)", "out_p(1)"]),
        a(&["out_f(1)", "in_p(2)"]),
        a(&["in_f(2)", "out_p(1)"]),
        a(&["out_f(2)", "in_p(2)"]),
    ])
    .unwrap();
    assert!(pcl_sat(ports, &gamma, &arch.core()).unwrap());
}
