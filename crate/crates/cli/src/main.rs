//! `pcl`: decide configuration-logic questions about component systems.
//!
//! Exit codes: 0 affirmative or success, 1 negative verdict, 2 bad usage or
//! input, 3 resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcl_core::reconfig::Dra;
use pcl_core::textio::{
    configuration_json, configuration_text, parse_configuration, parse_formula, parse_implementation, parse_system,
    render_formula, render_implementation, render_system, Report,
};
use pcl_core::{
    brute_force_sat_set, correct, dra_equivalent, equivalent, full_normal_form_over, generate, is_partially_trustworthy,
    is_trustworthy, pcl_sat, sat_set, satisfiable, Configuration, Error, PartialVerdict, Pcl, PortUniverse, Style,
    System, TrustVerdict, DEFAULT_CAP,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "pcl", version, about = "Configuration logic and trustworthiness checks for component systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Upper bound on enumerated interactions, configurations and splits.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args)]
struct Model {
    /// System description (JSON).
    #[arg(long)]
    system: PathBuf,
    /// Formula file in the text grammar.
    #[arg(long)]
    formula: PathBuf,
}

#[derive(Args)]
struct WithImpl {
    #[command(flatten)]
    model: Model,
    /// Implementation lasso (JSON).
    #[arg(long = "impl")]
    implementation: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Does one configuration satisfy the formula?
    Sat {
        #[command(flatten)]
        model: Model,
        /// Configuration as `[[port, ...], ...]`.
        #[arg(long)]
        config: PathBuf,
    },
    /// Every configuration of the system satisfying the formula.
    Satset {
        #[command(flatten)]
        model: Model,
        /// Test every configuration instead of using the set algebra.
        #[arg(long)]
        brute_force: bool,
    },
    /// Full normal form over the system's interactions.
    Fnf {
        #[command(flatten)]
        model: Model,
    },
    /// Are two formulas equivalent on the system?
    Equiv {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        formula2: PathBuf,
    },
    Satisfiable {
        #[command(flatten)]
        model: Model,
    },
    /// Does the implementation eventually always satisfy the formula?
    Trust(WithImpl),
    /// Does every step eventually contain a satisfying configuration?
    PartialTrust(WithImpl),
    /// Restrict a partially trustworthy implementation to satisfying steps.
    Correct {
        #[command(flatten)]
        target: WithImpl,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two reconfigurable architectures.
    DraEquiv {
        #[command(flatten)]
        first: WithImpl,
        /// Defaults to the first system.
        #[arg(long)]
        system2: Option<PathBuf>,
        /// Defaults to the first formula.
        #[arg(long)]
        formula2: Option<PathBuf>,
        #[arg(long)]
        impl2: PathBuf,
    },
    /// Generate a system and formula for an architecture style.
    Gen {
        style: Style,
        /// Instance counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<u32>,
        /// Write the system here instead of into the report.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Write the formula here instead of into the report.
        #[arg(long)]
        formula: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sat { .. } => "sat",
            Command::Satset { .. } => "satset",
            Command::Fnf { .. } => "fnf",
            Command::Equiv { .. } => "equiv",
            Command::Satisfiable { .. } => "satisfiable",
            Command::Trust(_) => "trust",
            Command::PartialTrust(_) => "partial-trust",
            Command::Correct { .. } => "correct",
            Command::DraEquiv { .. } => "dra-equiv",
            Command::Gen { .. } => "gen",
        }
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::ResourceLimit(_)) => 3,
            Failure::Lib(Error::NotPartiallyTrustworthy) => 1,
            _ => 2,
        }
    }

    fn report(&self, command: &str) -> Report {
        match self {
            Failure::Lib(e) => Report::error(command, e),
            Failure::Io(path, e) => Report::new(command, "error").with(
                "error",
                json!({"code": "IO_ERROR", "message": format!("{}: {e}", path.display())}),
            ),
        }
    }
}

type Outcome = std::result::Result<(Report, u8), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

struct Loaded {
    system: System,
    formula: Pcl,
}

fn load_formula(path: &Path, ports: &PortUniverse) -> std::result::Result<Pcl, Failure> {
    Ok(parse_formula(&read(path)?, ports)?.desugar(ports))
}

fn load(model: &Model) -> std::result::Result<Loaded, Failure> {
    let system = parse_system(&read(&model.system)?)?;
    let formula = load_formula(&model.formula, system.ports())?;
    Ok(Loaded { system, formula })
}

fn load_dra(spec: &WithImpl) -> std::result::Result<Dra, Failure> {
    let Loaded { system, formula } = load(&spec.model)?;
    let implementation = parse_implementation(&read(&spec.implementation)?, &system)?;
    Ok(Dra::new(system, formula, implementation)?)
}

fn verdict(yes: bool, affirmative: &str, negative: &str) -> (String, u8) {
    if yes {
        (affirmative.to_string(), 0)
    } else {
        (negative.to_string(), 1)
    }
}

fn witness_value(ports: &PortUniverse, gamma: &Configuration, output: Output) -> Value {
    match output {
        Output::Json => configuration_json(ports, gamma),
        Output::Text => Value::String(configuration_text(ports, gamma)),
    }
}

fn count_value(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn run(command: &Command, cap: u64, output: Output) -> Outcome {
    let name = command.name();
    match command {
        Command::Sat { model, config } => {
            let m = load(model)?;
            let gamma = parse_configuration(&read(config)?, &m.system)?;
            let holds = pcl_sat(m.system.ports(), &gamma, &m.formula)?;
            let (v, code) = verdict(holds, "satisfied", "not-satisfied");
            Ok((Report::new(name, v), code))
        }
        Command::Satset { model, brute_force } => {
            let m = load(model)?;
            let universe = m.system.interaction_universe(cap)?;
            let started = Instant::now();
            let set = if *brute_force {
                brute_force_sat_set(&m.formula, &universe, cap)?
            } else {
                sat_set(&m.formula, &universe, cap)?.materialize(cap)?
            };
            let elapsed = started.elapsed();
            let ports = m.system.ports();
            let members: Vec<Value> = set.members()?.iter().map(|g| witness_value(ports, g, output)).collect();
            let mut report = Report::new(name, "computed")
                .with("count", members.len())
                .with("members", members);
            report.witness = set.least_member().map(|g| witness_value(ports, &g, output));
            if output == Output::Text {
                report = report.with("elapsed", format!("{:.3}s", elapsed.as_secs_f64()));
            }
            Ok((report, 0))
        }
        Command::Fnf { model } => {
            let m = load(model)?;
            let universe = m.system.interaction_universe(cap)?;
            let fnf = full_normal_form_over(&m.formula, &universe, cap)?;
            let text = render_formula(&fnf.to_expr(), m.system.ports());
            let report = Report::new(name, "computed")
                .with("disjuncts", fnf.disjuncts().len())
                .with("formula", text);
            Ok((report, 0))
        }
        Command::Equiv { model, formula2 } => {
            let m = load(model)?;
            let other = load_formula(formula2, m.system.ports())?;
            let universe = m.system.interaction_universe(cap)?;
            let decision = equivalent(&m.formula, &other, &universe, cap)?;
            let (v, code) = verdict(decision.holds, "equivalent", "not-equivalent");
            let mut report = Report::new(name, v);
            report.witness = decision.witness.map(|g| witness_value(m.system.ports(), &g, output));
            Ok((report, code))
        }
        Command::Satisfiable { model } => {
            let m = load(model)?;
            let universe = m.system.interaction_universe(cap)?;
            let decision = satisfiable(&m.formula, &universe, cap)?;
            let (v, code) = verdict(decision.holds, "satisfiable", "unsatisfiable");
            let mut report = Report::new(name, v);
            report.witness = decision.witness.map(|g| witness_value(m.system.ports(), &g, output));
            Ok((report, code))
        }
        Command::Trust(spec) => {
            let dra = load_dra(spec)?;
            let mut report;
            let code;
            match is_trustworthy(&dra, cap)? {
                TrustVerdict::Trustworthy { g } => {
                    report = Report::new(name, "trustworthy");
                    report.g = Some(g);
                    code = 0;
                }
                TrustVerdict::NotTrustworthy { violations } => {
                    report = Report::new(name, "not-trustworthy");
                    report.violations = violations;
                    code = 1;
                }
            }
            Ok((report, code))
        }
        Command::PartialTrust(spec) => {
            let dra = load_dra(spec)?;
            match is_partially_trustworthy(&dra, cap)? {
                PartialVerdict::PartiallyTrustworthy { g, witnesses } => {
                    let ports = dra.system.ports();
                    let list: Vec<Value> = witnesses
                        .iter()
                        .map(|(l, gamma)| match output {
                            Output::Json => json!({"step": l, "configuration": configuration_json(ports, gamma)}),
                            Output::Text => Value::String(format!("{l}: {}", configuration_text(ports, gamma))),
                        })
                        .collect();
                    let mut report = Report::new(name, "partially-trustworthy").with("witnesses", list);
                    report.g = Some(g);
                    Ok((report, 0))
                }
                PartialVerdict::NotPartiallyTrustworthy { violations } => {
                    let mut report = Report::new(name, "not-partially-trustworthy");
                    report.violations = violations;
                    Ok((report, 1))
                }
            }
        }
        Command::Correct { target, out } => {
            let dra = load_dra(target)?;
            let fixed = correct(&dra, cap)?;
            write(out, &render_implementation(&fixed, &dra.system))?;
            let report = Report::new(name, "corrected").with("out", out.display().to_string());
            Ok((report, 0))
        }
        Command::DraEquiv {
            first,
            system2,
            formula2,
            impl2,
        } => {
            let d1 = load_dra(first)?;
            let system = match system2 {
                Some(path) => parse_system(&read(path)?)?,
                None => d1.system.clone(),
            };
            let formula = match formula2 {
                Some(path) => load_formula(path, system.ports())?,
                None => load_formula(&first.model.formula, system.ports())?,
            };
            let implementation = parse_implementation(&read(impl2)?, &system)?;
            let d2 = Dra::new(system, formula, implementation)?;
            let outcome = dra_equivalent(&d1, &d2, cap)?;
            let (v, code) = verdict(outcome.equivalent, "equivalent", "not-equivalent");
            let mut report = Report::new(name, v);
            if let Some(reason) = outcome.reason {
                report = report.with("reason", reason);
            }
            Ok((report, code))
        }
        Command::Gen {
            style,
            counts,
            system,
            formula,
        } => {
            let arch = generate(*style, counts)?;
            let system_text = render_system(&arch.system);
            let formula_text = render_formula(&arch.formula, arch.system.ports()) + "\n";
            let mut report = Report::new(name, "generated")
                .with("style", style.name())
                .with("counts", counts.clone())
                .with("ports", arch.system.ports().len())
                .with("interactions", count_value(arch.system.interaction_count()));
            match system {
                Some(path) => {
                    write(path, &system_text)?;
                    report = report.with("system", path.display().to_string());
                }
                None => {
                    let parsed: Value = serde_json::from_str(&system_text).expect("rendered system is JSON");
                    report = report.with("system", parsed);
                }
            }
            match formula {
                Some(path) => {
                    write(path, &formula_text)?;
                    report = report.with("formula", path.display().to_string());
                }
                None => report = report.with("formula", formula_text.trim_end()),
            }
            Ok((report, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (report, code) = match run(&cli.command, cli.cap, cli.output) {
        Ok(done) => done,
        Err(failure) => (failure.report(name), failure.exit_code()),
    };
    match cli.output {
        Output::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("reports serialize")
        ),
        Output::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(code)
}
