//! Parametric architecture styles: a system together with the formula its
//! configurations should satisfy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::component::{instantiate, ComponentType, System};
use crate::error::{Error, Result};
use crate::expr::PclExpr;
use crate::pcl::Pcl;
use crate::port::Interaction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    MasterSlave,
    PublishSubscribe,
    PipesFilters,
    Star,
    Blackboard,
    RequestResponse,
}

impl Style {
    pub const ALL: [Style; 6] = [
        Style::MasterSlave,
        Style::PublishSubscribe,
        Style::PipesFilters,
        Style::Star,
        Style::Blackboard,
        Style::RequestResponse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Style::MasterSlave => "master-slave",
            Style::PublishSubscribe => "publish-subscribe",
            Style::PipesFilters => "pipes-filters",
            Style::Star => "star",
            Style::Blackboard => "blackboard",
            Style::RequestResponse => "request-response",
        }
    }

    /// Number of instance counts the style takes.
    pub fn arity(self) -> usize {
        match self {
            Style::MasterSlave | Style::PipesFilters => 2,
            Style::PublishSubscribe | Style::RequestResponse => 3,
            Style::Star | Style::Blackboard => 1,
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Style {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Style::ALL
            .into_iter()
            .find(|style| style.name() == s)
            .ok_or_else(|| Error::parse(1, 1, format!("unknown architecture style `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureSpec {
    pub style: Style,
    pub counts: Vec<u32>,
}

impl ArchitectureSpec {
    pub fn new(style: Style, counts: Vec<u32>) -> Self {
        ArchitectureSpec { style, counts }
    }

    pub fn generate(&self) -> Result<Architecture> {
        generate(self.style, &self.counts)
    }
}

/// A generated system and its formula, kept in surface form.
#[derive(Debug, Clone)]
pub struct Architecture {
    pub system: System,
    pub formula: PclExpr,
}

impl Architecture {
    pub fn core(&self) -> Pcl {
        self.formula.desugar(self.system.ports())
    }
}

pub fn generate(style: Style, counts: &[u32]) -> Result<Architecture> {
    if counts.len() != style.arity() {
        return Err(Error::Arity {
            style: style.name(),
            expected: style.arity(),
            got: counts.len(),
        });
    }
    match style {
        Style::MasterSlave => gen_master_slave(counts[0], counts[1]),
        Style::PublishSubscribe => gen_publish_subscribe(counts[0], counts[1], counts[2]),
        Style::PipesFilters => gen_pipes_filters(counts[0], counts[1]),
        Style::Star => gen_star(counts[0]),
        Style::Blackboard => gen_blackboard(counts[0]),
        Style::RequestResponse => gen_request_response(counts[0], counts[1], counts[2]),
    }
}

fn types(spec: &[(&str, &[&str], u32)]) -> Result<System> {
    let types = spec
        .iter()
        .map(|(name, ports, count)| Ok((ComponentType::new(*name, ports.iter().copied())?, *count)))
        .collect::<Result<Vec<_>>>()?;
    instantiate(types)
}

/// Interaction literal over ports given as `(label, instance)`.
fn lit(sys: &System, ports: &[(&str, u32)]) -> PclExpr {
    let ids = ports
        .iter()
        .map(|(label, j)| sys.port(label, *j).expect("generated ports exist"));
    PclExpr::Interaction(Interaction::from_ids(ids).expect("non-empty"))
}

fn nonempty(items: Vec<PclExpr>, op: &'static str) -> Result<Vec<PclExpr>> {
    if items.is_empty() {
        Err(Error::EmptyBigOperator(op))
    } else {
        Ok(items)
    }
}

fn big_union(items: Vec<PclExpr>) -> Result<PclExpr> {
    Ok(nonempty(items, "union")?.into_iter().reduce(PclExpr::union).expect("non-empty"))
}

fn big_sum(items: Vec<PclExpr>) -> Result<PclExpr> {
    Ok(nonempty(items, "coalescing")?.into_iter().reduce(PclExpr::coalesce).expect("non-empty"))
}

fn big_dis(items: Vec<PclExpr>) -> Result<PclExpr> {
    let mut items = nonempty(items, "disjunction")?;
    Ok(if items.len() == 1 {
        items.remove(0)
    } else {
        PclExpr::Dis(items)
    })
}

/// The empty intersection is `true`.
fn big_and(items: Vec<PclExpr>) -> PclExpr {
    items.into_iter().reduce(PclExpr::intersect).unwrap_or(PclExpr::True)
}

fn range(n: u32) -> std::ops::RangeInclusive<u32> {
    1..=n
}

/// Masters `m`, slaves `s`; every slave is served by one master.
pub fn gen_master_slave(u1: u32, u2: u32) -> Result<Architecture> {
    let system = types(&[("Master", &["m"], u1), ("Slave", &["s"], u2)])?;
    let per_slave = range(u2)
        .map(|j| big_union(range(u1).map(|k| lit(&system, &[("m", k), ("s", j)])).collect()))
        .collect::<Result<Vec<_>>>()?;
    let formula = big_dis(per_slave)?;
    Ok(Architecture { system, formula })
}

/// Publishers `p`, topics `t_p`/`t_s`, subscribers `s`.
pub fn gen_publish_subscribe(u1: u32, u2: u32, u3: u32) -> Result<Architecture> {
    let system = types(&[
        ("Publisher", &["p"], u1),
        ("Topic", &["t_p", "t_s"], u2),
        ("Subscriber", &["s"], u3),
    ])?;
    let fed = |j: u32| big_dis(range(u1).map(|k| lit(&system, &[("p", k), ("t_p", j)])).collect());
    let subscribed = |r: u32| -> Result<PclExpr> {
        let parts = range(u2)
            .map(|j| Ok(lit(&system, &[("s", r), ("t_s", j)]).coalesce(fed(j)?)))
            .collect::<Result<Vec<_>>>()?;
        big_dis(parts)
    };
    let subscribers = big_dis(range(u3).map(subscribed).collect::<Result<_>>()?)?;
    let topics = big_dis(range(u2).map(fed).collect::<Result<_>>()?)?;
    let formula = PclExpr::Dis(vec![subscribers, topics]);
    Ok(Architecture { system, formula })
}

struct PipesFilters {
    system: System,
    u1: u32,
    u2: u32,
}

impl PipesFilters {
    fn new(u1: u32, u2: u32) -> Result<Self> {
        let system = types(&[("Pipe", &["in_p", "out_p"], u1), ("Filter", &["in_f", "out_f"], u2)])?;
        if u1 < 2 {
            return Err(Error::InsufficientPipes(u1));
        }
        Ok(PipesFilters { system, u1, u2 })
    }

    /// Filter `j` reads from pipe `k`.
    fn reads(&self, j: u32, k: u32) -> PclExpr {
        lit(&self.system, &[("in_f", j), ("out_p", k)])
    }

    /// Filter `j` writes to pipe `k`.
    fn writes(&self, j: u32, k: u32) -> PclExpr {
        lit(&self.system, &[("out_f", j), ("in_p", k)])
    }

    /// Filter `j` sits between two distinct pipes and no others.
    fn filter_linked(&self, j: u32) -> Result<PclExpr> {
        let mut cases = Vec::new();
        for i1 in range(self.u1) {
            for i2 in range(self.u1).filter(|i| *i != i1) {
                let other_inputs = big_and(range(self.u1).filter(|i| *i != i1).map(|i| self.reads(j, i).not()).collect());
                let other_outputs = big_and(range(self.u1).filter(|i| *i != i2).map(|i| self.writes(j, i).not()).collect());
                let unique = other_inputs.intersect(other_outputs);
                cases.push(self.reads(j, i1).coalesce(self.writes(j, i2)).intersect(unique));
            }
        }
        big_union(cases)
    }

    fn pipe_output(&self, r: u32) -> Result<PclExpr> {
        let cases = range(self.u2)
            .map(|j1| big_and(range(self.u2).filter(|j| *j != j1).map(|j2| self.reads(j2, r).not()).collect()))
            .collect();
        big_union(cases)
    }

    /// Pipe `k` feeds a filter and receives from none.
    fn source_end(&self, k: u32) -> Result<PclExpr> {
        let feeds = big_union(range(self.u2).map(|i| self.reads(i, k)).collect())?;
        Ok(feeds.intersect(big_and(range(self.u2).map(|i| self.writes(i, k).not()).collect())))
    }

    /// Pipe `k` receives from a filter and feeds none.
    fn sink_end(&self, k: u32) -> Result<PclExpr> {
        let fed = big_union(range(self.u2).map(|i| self.writes(i, k)).collect())?;
        Ok(fed.intersect(big_and(range(self.u2).map(|i| self.reads(i, k).not()).collect())))
    }

    fn formula(&self, ends_within: bool) -> Result<PclExpr> {
        let filters = big_sum(range(self.u2).map(|j| self.filter_linked(j)).collect::<Result<_>>()?)?;
        let pipes = big_and(range(self.u1).map(|r| self.pipe_output(r)).collect::<Result<_>>()?);
        let mut ends = Vec::new();
        for k1 in range(self.u1) {
            for k2 in range(self.u1).filter(|k| *k != k1) {
                let (source, sink) = (self.source_end(k1)?, self.sink_end(k2)?);
                ends.push(if ends_within {
                    source.closure().intersect(sink.closure())
                } else {
                    source.intersect(sink)
                });
            }
        }
        Ok(filters.intersect(pipes).intersect(big_union(ends)?))
    }
}

/// Pipes `in_p`/`out_p`, filters `in_f`/`out_f`. The two pipeline ends
/// are required to occur somewhere in the configuration (`~`), so that the
/// end conditions, which each pin a single interaction, can hold together.
pub fn gen_pipes_filters(u1: u32, u2: u32) -> Result<Architecture> {
    let pf = PipesFilters::new(u1, u2)?;
    let formula = pf.formula(true)?;
    Ok(Architecture {
        system: pf.system,
        formula,
    })
}

/// Pipes-filters with the end conditions intersected directly. Each end
/// condition only holds on a one-interaction configuration, so this
/// variant is unsatisfiable; kept for comparison.
pub fn gen_pipes_filters_unclosed(u1: u32, u2: u32) -> Result<Architecture> {
    let pf = PipesFilters::new(u1, u2)?;
    let formula = pf.formula(false)?;
    Ok(Architecture {
        system: pf.system,
        formula,
    })
}

/// Nodes `p`; some node is a centre linked to other nodes.
pub fn gen_star(u1: u32) -> Result<Architecture> {
    let system = types(&[("Node", &["p"], u1)])?;
    if u1 < 2 {
        return Err(Error::InsufficientNodes(u1));
    }
    let centres = range(u1)
        .map(|j| big_dis(range(u1).filter(|i| *i != j).map(|i| lit(&system, &[("p", j), ("p", i)])).collect()))
        .collect::<Result<Vec<_>>>()?;
    let formula = big_union(centres)?;
    Ok(Architecture { system, formula })
}

/// One blackboard `b1`/`b2`, `u2` sources `s1`/`s2`, one controller
/// `c1`/`c2`.
pub fn gen_blackboard(u2: u32) -> Result<Architecture> {
    let system = types(&[
        ("Blackboard", &["b1", "b2"], 1),
        ("Source", &["s1", "s2"], u2),
        ("Controller", &["c1", "c2"], 1),
    ])?;
    let informed = big_sum(range(u2).map(|j| lit(&system, &[("b1", 1), ("s1", j)])).collect())?;
    let writers = big_dis(
        range(u2)
            .map(|j| lit(&system, &[("b2", 1), ("s2", j), ("c2", 1)]))
            .collect(),
    )?;
    let formula = lit(&system, &[("b1", 1), ("c1", 1)]).coalesce(informed).coalesce(writers);
    Ok(Architecture { system, formula })
}

/// Services `get_s`/`send`, clients `con_cl`/`req`/`rec`, coordinators
/// `con_c`/`get_c`/`dsc`. Inside the exclusivity clause `~` is closure and
/// the conjunctions are intersections.
pub fn gen_request_response(u1: u32, u2: u32, u3: u32) -> Result<Architecture> {
    let system = types(&[
        ("Service", &["get_s", "send"], u1),
        ("Client", &["con_cl", "req", "rec"], u2),
        ("Coordinator", &["con_c", "get_c", "dsc"], u3),
    ])?;
    let connect = |k, j| lit(&system, &[("con_cl", k), ("con_c", j)]);
    let request = |i, k, j| lit(&system, &[("get_s", i), ("req", k), ("get_c", j)]);
    let respond = |i, k, j| lit(&system, &[("send", i), ("rec", k), ("dsc", j)]);

    let served = |i: u32| -> Result<PclExpr> {
        let mut rounds = Vec::new();
        for k in range(u2) {
            for j in range(u3) {
                rounds.push(connect(k, j).coalesce(request(i, k, j)).coalesce(respond(i, k, j)));
            }
        }
        big_union(rounds)
    };

    let mut clauses = Vec::new();
    for i1 in range(u1) {
        for k1 in range(u2) {
            for j1 in range(u3) {
                let mut others = Vec::new();
                for i2 in range(u1).filter(|i| *i != i1) {
                    for k2 in range(u2) {
                        others.push(request(i2, k2, j1).not());
                    }
                }
                let exclusive = request(i1, k1, j1).closure().intersect(big_and(others));
                clauses.push(request(i1, k1, j1).not().union(exclusive));
            }
        }
    }
    let exclusivity = big_and(clauses);

    let formula = big_dis(
        range(u1)
            .map(|i| Ok(served(i)?.intersect(exclusivity.clone())))
            .collect::<Result<_>>()?,
    )?;
    Ok(Architecture { system, formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcl::pcl_sat;
    use crate::port::Configuration;
    use crate::satset::sat_set;
    use crate::universe::DEFAULT_CAP;

    fn conf(sys: &System, parts: &[&[&str]]) -> Configuration {
        Configuration::new(parts.iter().map(|p| sys.ports().interaction_of_names(p).unwrap())).unwrap()
    }

    #[test]
    fn styles_parse_and_check_arity() {
        for style in Style::ALL {
            assert_eq!(style.name().parse::<Style>().unwrap(), style);
        }
        let err = generate(Style::Star, &[1, 2]).unwrap_err();
        assert_eq!(err.code(), "ARITY_MISMATCH");
        assert_eq!(generate(Style::MasterSlave, &[0, 1]).unwrap_err().code(), "ZERO_COUNT");
        assert_eq!(generate(Style::PipesFilters, &[1, 1]).unwrap_err().code(), "INSUFFICIENT_PIPES");
        assert_eq!(generate(Style::Star, &[1]).unwrap_err().code(), "INSUFFICIENT_NODES");
    }

    #[test]
    fn formulas_stay_within_the_system() {
        for (style, counts) in [
            (Style::MasterSlave, vec![2, 3]),
            (Style::PublishSubscribe, vec![2, 2, 1]),
            (Style::PipesFilters, vec![3, 2]),
            (Style::Star, vec![4]),
            (Style::Blackboard, vec![3]),
            (Style::RequestResponse, vec![2, 1, 2]),
        ] {
            let arch = generate(style, &counts).unwrap();
            for a in arch.formula.interaction_literals() {
                assert!(arch.system.validate_interaction(a), "{style}");
            }
        }
    }

    #[test]
    fn master_slave_small() {
        let arch = gen_master_slave(1, 1).unwrap();
        let u = arch.system.interaction_universe(DEFAULT_CAP).unwrap();
        let set = sat_set(&arch.core(), &u, DEFAULT_CAP).unwrap();
        assert_eq!(set.members().unwrap().len(), 1);
        let arch = gen_master_slave(2, 2).unwrap();
        let two_masters = conf(&arch.system, &[&["m(1)", "s(1)"], &["m(2)", "s(1)"]]);
        assert!(!pcl_sat(arch.system.ports(), &two_masters, &arch.core()).unwrap());
    }

    #[test]
    fn pipes_filters_single_filter() {
        let arch = gen_pipes_filters(2, 1).unwrap();
        let u = arch.system.interaction_universe(DEFAULT_CAP).unwrap();
        let set = sat_set(&arch.core(), &u, DEFAULT_CAP).unwrap();
        let members = set.members().unwrap();
        assert_eq!(members.len(), 2);
        assert!(members.iter().all(|g| g.len() == 2));
        let same_pipe = conf(&arch.system, &[&["in_f(1)", "out_p(1)"], &["out_f(1)", "in_p(1)"]]);
        assert!(!pcl_sat(arch.system.ports(), &same_pipe, &arch.core()).unwrap());
    }

    #[test]
    fn unclosed_pipeline_ends_are_unsatisfiable() {
        let arch = gen_pipes_filters_unclosed(2, 1).unwrap();
        let u = arch.system.interaction_universe(DEFAULT_CAP).unwrap();
        assert_eq!(sat_set(&arch.core(), &u, DEFAULT_CAP).unwrap().len(), Some(0));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_request_response(2, 2, 1).unwrap();
        let b = gen_request_response(2, 2, 1).unwrap();
        assert_eq!(a.formula, b.formula);
    }
}
