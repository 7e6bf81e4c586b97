//! Concrete syntax: the formula grammar, JSON system and implementation
//! files, and verdict reports.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! pcl   := pcl1 [ "implies" pcl ]
//! pcl1  := pcl2 { "or" pcl2 }               union
//! pcl2  := pcl3 { "and" pcl3 }              intersection
//! pcl3  := pcl4 { "+" pcl4 }                coalescing
//! pcl4  := "not" pcl4 | "~" pcl4 | atom
//! atom  := "true" | "{" pil "}" | "<" port { "," port } ">"
//!        | "(" pcl ")" | "dis" "(" pcl { "," pcl } ")"
//! pil   := pil2 { "|" pil2 }
//! pil2  := pil3 { "&" pil3 }
//! pil3  := "!" pil3 | "true" | "false" | port | "(" pil ")"
//! port  := ident [ "(" integer ")" ]
//! ```
//!
//! Automata dump as `states`, `initial`, `accepting` and `alphabet` lines
//! followed by one `q --label--> q'` line per transition.

mod files;
mod parser;
mod render;
mod report;

pub use files::{
    parse_configuration, parse_implementation, parse_system, render_implementation, render_system, ImplementationFile, SystemFile,
    TypeEntry,
};
pub use parser::{parse_formula, parse_formula_core, MAX_DEPTH};
pub use render::{render_core, render_formula, render_pil};
pub use report::{configuration_json, configuration_text, Report};
