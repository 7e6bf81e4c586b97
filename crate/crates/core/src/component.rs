//! Component types, instance expansion, and the constrained interaction
//! and configuration spaces of an instantiated system.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::port::{is_ident, Configuration, Interaction, Port, PortId, PortUniverse};
use crate::universe::{Configurations, InteractionUniverse};

/// Labelled transition system of a component type. Kept as data only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lts {
    pub states: Vec<String>,
    pub initial: String,
    /// `(source, port label, target)`
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    name: String,
    ports: Vec<String>,
    lts: Option<Lts>,
}

impl ComponentType {
    pub fn new<S: Into<String>>(name: impl Into<String>, ports: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let ports: Vec<String> = ports.into_iter().map(Into::into).collect();
        if !is_ident(&name) {
            return Err(Error::parse(1, 1, format!("component name `{name}` is not an identifier")));
        }
        if ports.is_empty() {
            return Err(Error::NoPorts(name));
        }
        let mut seen = BTreeSet::new();
        for p in &ports {
            if !is_ident(p) {
                return Err(Error::parse(1, 1, format!("port label `{p}` is not an identifier")));
            }
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateName(format!("{name}.{p}")));
            }
        }
        Ok(ComponentType { name, ports, lts: None })
    }

    pub fn with_lts(mut self, lts: Lts) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidLts {
            component: self.name.clone(),
            reason,
        };
        let states: BTreeSet<&str> = lts.states.iter().map(String::as_str).collect();
        if states.len() != lts.states.len() {
            return Err(invalid("duplicate state".into()));
        }
        if !states.contains(lts.initial.as_str()) {
            return Err(invalid(format!("initial state `{}` is not declared", lts.initial)));
        }
        for (from, port, to) in &lts.transitions {
            if !states.contains(from.as_str()) || !states.contains(to.as_str()) {
                return Err(invalid(format!("transition {from} --{port}--> {to} uses an undeclared state")));
            }
            if !self.ports.contains(port) {
                return Err(invalid(format!("transition label `{port}` is not a port")));
            }
        }
        self.lts = Some(lts);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ports(&self) -> &[String] {
        &self.ports
    }

    pub fn lts(&self) -> Option<&Lts> {
        self.lts.as_ref()
    }
}

/// An instantiated component-based system `pB`: every type `B(i)` with
/// `uᵢ` instances whose ports are renamed `label(j)`.
#[derive(Debug, Clone)]
pub struct System {
    types: Vec<(ComponentType, u32)>,
    ports: Arc<PortUniverse>,
    /// One port mask per instance `B(i,j)`.
    instances: Vec<u128>,
}

impl PartialEq for System {
    fn eq(&self, other: &Self) -> bool {
        self.types == other.types
    }
}

impl Eq for System {}

/// Expands component types into their instances.
pub fn instantiate(types: Vec<(ComponentType, u32)>) -> Result<System> {
    System::new(types)
}

impl System {
    pub fn new(types: Vec<(ComponentType, u32)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for (ty, count) in &types {
            if !names.insert(ty.name()) {
                return Err(Error::DuplicateName(ty.name().to_string()));
            }
            if *count == 0 {
                return Err(Error::ZeroCount(ty.name().to_string()));
            }
        }
        let all_ports = types.iter().flat_map(|(ty, count)| {
            (1..=*count).flat_map(move |j| ty.ports().iter().map(move |p| Port::of_instance(p.clone(), j)))
        });
        let ports = Arc::new(PortUniverse::new(all_ports)?);
        let instances = types
            .iter()
            .flat_map(|(ty, count)| (1..=*count).map(move |j| (ty, j)))
            .map(|(ty, j)| {
                ty.ports().iter().fold(0u128, |mask, p| {
                    let id = ports.id(&Port::of_instance(p.clone(), j)).expect("port was registered");
                    mask | 1 << id.index()
                })
            })
            .collect();
        Ok(System { types, ports, instances })
    }

    pub fn types(&self) -> &[(ComponentType, u32)] {
        &self.types
    }

    /// `P_pB`
    pub fn ports(&self) -> &Arc<PortUniverse> {
        &self.ports
    }

    pub fn port(&self, label: &str, instance: u32) -> Result<PortId> {
        let port = Port::of_instance(label, instance);
        self.ports.id(&port).ok_or_else(|| Error::UnknownPort(port.to_string()))
    }

    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    /// `|I_pB| = ∏ (1 + ports per instance) - 1`, saturating.
    pub fn interaction_count(&self) -> u128 {
        self.instances
            .iter()
            .fold(1u128, |acc, m| acc.saturating_mul(1 + m.count_ones() as u128))
            - 1
    }

    /// At most one port of each instance, and only ports of this system.
    pub fn validate_interaction(&self, a: Interaction) -> bool {
        self.ports.contains_interaction(a)
            && self.instances.iter().all(|m| (a.bits() & m).count_ones() <= 1)
    }

    /// Like [`System::validate_interaction`], for rendered port names.
    pub fn validate_interaction_names<S: AsRef<str>>(&self, names: &[S]) -> Result<bool> {
        let a = self.ports.interaction_of_names(names)?;
        Ok(self.validate_interaction(a))
    }

    pub fn validate_configuration(&self, gamma: &Configuration) -> Result<()> {
        match gamma.iter().find(|a| !self.validate_interaction(*a)) {
            Some(a) => Err(Error::InvalidInteraction(self.ports.show_interaction(a))),
            None => Ok(()),
        }
    }

    /// `I_pB` in canonical order.
    pub fn interactions(&self, cap: u64) -> Result<Vec<Interaction>> {
        let count = self.interaction_count();
        if count > cap as u128 {
            return Err(Error::ResourceLimit(format!(
                "system has {count} interactions, above the cap of {cap}"
            )));
        }
        let mut partial: Vec<u128> = vec![0];
        for &mask in &self.instances {
            let mut next = Vec::with_capacity(partial.len() * (1 + mask.count_ones() as usize));
            for &bits in &partial {
                next.push(bits);
                let mut rest = mask;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    next.push(bits | bit);
                    rest &= rest - 1;
                }
            }
            partial = next;
        }
        let mut list: Vec<Interaction> = partial.into_iter().filter_map(Interaction::from_bits).collect();
        list.sort();
        Ok(list)
    }

    pub fn interaction_universe(&self, cap: u64) -> Result<InteractionUniverse> {
        InteractionUniverse::new(self.ports.clone(), self.interactions(cap)?)
    }

    /// Every configuration of `C_pB`, for systems whose space fits in `cap`.
    pub fn enumerate_configurations(&self, cap: u64) -> Result<OwnedConfigurations> {
        let universe = self.interaction_universe(cap)?;
        universe.configurations(cap)?;
        Ok(OwnedConfigurations { universe, next: 1 })
    }
}

/// Owning counterpart of [`Configurations`].
#[derive(Debug, Clone)]
pub struct OwnedConfigurations {
    universe: InteractionUniverse,
    next: u64,
}

impl OwnedConfigurations {
    pub fn universe(&self) -> &InteractionUniverse {
        &self.universe
    }

    pub fn borrowed(&self) -> Configurations<'_> {
        self.universe.configurations(u64::MAX).expect("size was checked")
    }
}

impl Iterator for OwnedConfigurations {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        let count = self.universe.configuration_count()?;
        if self.next > count {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        self.universe.configuration_of_mask(mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn master_slave(u1: u32, u2: u32) -> System {
        instantiate(vec![
            (ComponentType::new("Master", ["m"]).unwrap(), u1),
            (ComponentType::new("Slave", ["s"]).unwrap(), u2),
        ])
        .unwrap()
    }

    fn pipes_filters(u1: u32, u2: u32) -> System {
        instantiate(vec![
            (ComponentType::new("Pipe", ["in_p", "out_p"]).unwrap(), u1),
            (ComponentType::new("Filter", ["in_f", "out_f"]).unwrap(), u2),
        ])
        .unwrap()
    }

    fn names(sys: &System) -> Vec<String> {
        sys.ports().ports().iter().map(Port::to_string).collect()
    }

    #[test]
    fn instantiation_renames_ports_per_instance() {
        assert_eq!(names(&master_slave(1, 1)), ["m(1)", "s(1)"]);
        assert_eq!(master_slave(2, 2).ports().len(), 4);
        assert_eq!(pipes_filters(2, 1).ports().len(), 6);
    }

    #[test]
    fn instantiation_errors() {
        let m = ComponentType::new("Master", ["m"]).unwrap();
        let err = instantiate(vec![(m.clone(), 1), (m.clone(), 2)]).unwrap_err();
        assert_eq!(err.code(), "DUPLICATE_NAME");
        assert_eq!(instantiate(vec![(m.clone(), 0)]).unwrap_err().code(), "ZERO_COUNT");
        // port labels shared across types would collide once renamed
        let other = ComponentType::new("Other", ["m"]).unwrap();
        assert_eq!(instantiate(vec![(m, 1), (other, 1)]).unwrap_err().code(), "DUPLICATE_NAME");
        assert_eq!(ComponentType::new("T", ["p", "p"]).unwrap_err().code(), "DUPLICATE_NAME");
        assert_eq!(ComponentType::new("T", Vec::<String>::new()).unwrap_err().code(), "NO_PORTS");
    }

    #[test]
    fn interaction_counts() {
        let ms = master_slave(1, 1);
        let list = ms.interactions(1 << 20).unwrap();
        let shown: Vec<String> = list.iter().map(|a| ms.ports().show_interaction(*a)).collect();
        assert_eq!(shown, ["{m(1)}", "{m(1),s(1)}", "{s(1)}"]);
        assert_eq!(master_slave(2, 2).interactions(1 << 20).unwrap().len(), 15);
        assert_eq!(pipes_filters(2, 1).interactions(1 << 20).unwrap().len(), 26);
        assert_eq!(pipes_filters(2, 1).interaction_count(), 26);
        assert_eq!(pipes_filters(2, 1).interactions(25).unwrap_err().code(), "RESOURCE_LIMIT");
    }

    #[test]
    fn interactions_match_filtered_powerset() {
        for sys in [master_slave(2, 2), pipes_filters(1, 1), master_slave(1, 3)] {
            let n = sys.ports().len();
            let filtered: Vec<Interaction> = (1u128..1 << n)
                .filter_map(Interaction::from_bits)
                .filter(|a| sys.validate_interaction(*a))
                .collect();
            let mut expected = filtered;
            expected.sort();
            assert_eq!(sys.interactions(1 << 20).unwrap(), expected);
        }
    }

    #[test]
    fn configuration_enumeration() {
        assert_eq!(master_slave(1, 1).enumerate_configurations(100).unwrap().count(), 7);
        assert_eq!(master_slave(2, 2).enumerate_configurations(100_000).unwrap().count(), 32767);
        let err = pipes_filters(2, 1).enumerate_configurations(100_000).unwrap_err();
        assert_eq!(err.code(), "RESOURCE_LIMIT");
    }

    #[test]
    fn enumeration_order_is_stable() {
        let a: Vec<Configuration> = master_slave(1, 2).enumerate_configurations(1000).unwrap().collect();
        let b: Vec<Configuration> = master_slave(1, 2).enumerate_configurations(1000).unwrap().collect();
        assert_eq!(a, b);
        let c: Vec<Configuration> = master_slave(1, 2).enumerate_configurations(1000).unwrap().borrowed().collect();
        assert_eq!(a, c);
    }

    #[test]
    fn interaction_validation() {
        let ms = master_slave(2, 2);
        assert!(ms.validate_interaction_names(&["m(1)", "s(1)"]).unwrap());
        assert!(!pipes_filters(2, 1).validate_interaction_names(&["in_p(1)", "out_p(1)"]).unwrap());
        assert_eq!(ms.validate_interaction_names(&["m(3)"]).unwrap_err().code(), "UNKNOWN_PORT");
    }

    #[test]
    fn lts_is_validated() {
        let lts = Lts {
            states: vec!["idle".into(), "busy".into()],
            initial: "idle".into(),
            transitions: vec![("idle".into(), "m".into(), "busy".into())],
        };
        let ty = ComponentType::new("Master", ["m"]).unwrap();
        assert!(ty.clone().with_lts(lts.clone()).is_ok());
        let bad_label = Lts {
            transitions: vec![("idle".into(), "x".into(), "busy".into())],
            ..lts.clone()
        };
        assert_eq!(ty.clone().with_lts(bad_label).unwrap_err().code(), "INVALID_LTS");
        let bad_initial = Lts {
            initial: "gone".into(),
            ..lts
        };
        assert_eq!(ty.with_lts(bad_initial).unwrap_err().code(), "INVALID_LTS");
    }
}
