use serde::{Deserialize, Serialize};

use crate::component::{ComponentType, Lts, System};
use crate::error::{Error, Result};
use crate::port::Configuration;
use crate::reconfig::Implementation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeEntry {
    pub name: String,
    pub ports: Vec<String>,
    pub instances: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lts: Option<Lts>,
}

/// `{"types": [...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub types: Vec<TypeEntry>,
}

/// `{"prefix": [...], "loop": [...]}`; a configuration is a list of
/// interactions, each a list of port names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImplementationFile {
    #[serde(default)]
    pub prefix: Vec<Vec<Vec<String>>>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Vec<Vec<String>>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line().max(1), e.column().max(1), e.to_string())
}

pub fn parse_system(text: &str) -> Result<System> {
    let file: SystemFile = serde_json::from_str(text).map_err(json_error)?;
    let types = file
        .types
        .into_iter()
        .map(|entry| {
            let mut ty = ComponentType::new(entry.name, entry.ports)?;
            if let Some(lts) = entry.lts {
                ty = ty.with_lts(lts)?;
            }
            Ok((ty, entry.instances))
        })
        .collect::<Result<Vec<_>>>()?;
    System::new(types)
}

pub fn render_system(sys: &System) -> String {
    let file = SystemFile {
        types: sys
            .types()
            .iter()
            .map(|(ty, count)| TypeEntry {
                name: ty.name().to_string(),
                ports: ty.ports().to_vec(),
                instances: *count,
                lts: ty.lts().cloned(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes") + "\n"
}

fn configuration(sys: &System, interactions: &[Vec<String>]) -> Result<Configuration> {
    let mut list = Vec::with_capacity(interactions.len());
    for names in interactions {
        if names.is_empty() {
            return Err(Error::InvalidInteraction("[]".into()));
        }
        let a = sys.ports().interaction_of_names(names)?;
        if !sys.validate_interaction(a) {
            return Err(Error::InvalidInteraction(sys.ports().show_interaction(a)));
        }
        list.push(a);
    }
    Configuration::new(list)
}

/// A single configuration, `[[port, ...], ...]`.
pub fn parse_configuration(text: &str, sys: &System) -> Result<Configuration> {
    let list: Vec<Vec<String>> = serde_json::from_str(text).map_err(json_error)?;
    configuration(sys, &list)
}

pub fn parse_implementation(text: &str, sys: &System) -> Result<Implementation> {
    let file: ImplementationFile = serde_json::from_str(text).map_err(json_error)?;
    if file.cycle.is_empty() {
        return Err(Error::EmptyLoop);
    }
    let convert = |list: &[Vec<Vec<String>>]| {
        list.iter()
            .map(|c| configuration(sys, c))
            .collect::<Result<Vec<_>>>()
    };
    Implementation::new(sys, convert(&file.prefix)?, convert(&file.cycle)?)
}

pub fn render_implementation(implementation: &Implementation, sys: &System) -> String {
    let convert = |list: &[Configuration]| {
        list.iter()
            .map(|gamma| gamma.iter().map(|a| sys.ports().interaction_names(a)).collect())
            .collect()
    };
    let file = ImplementationFile {
        prefix: convert(implementation.prefix()),
        cycle: convert(implementation.cycle()),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes") + "\n"
}
