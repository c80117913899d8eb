//! The `modalkit` command line.
//!
//! Exit status: 0 when the checked property holds (or no countermodel was
//! found in range), 1 when a refutation or countermodel was found, 2 on
//! usage, parse or validation errors, 3 when a resource limit was hit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::correspondence::{axiom_report, barcan_report};
use crate::error::Error;
use crate::formula::{render, Format, Formula};
use crate::model::{DomainMode, Frame, Model, WorldSet};
use crate::parser::parse;
use crate::search::{find_countermodel, FrameConstraint, SearchOptions, SearchSpec};
use crate::semantics::{eval, frame_valid, scheme_valid, truth_set, Budget, Env, Reading, Verdict};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitStatus(pub i32);

impl ExitStatus {
    pub const HOLDS: ExitStatus = ExitStatus(0);
    pub const REFUTED: ExitStatus = ExitStatus(1);
    pub const USAGE: ExitStatus = ExitStatus(2);
    pub const RESOURCE_LIMIT: ExitStatus = ExitStatus(3);

    fn from_holds(holds: bool) -> ExitStatus {
        if holds {
            ExitStatus::HOLDS
        } else {
            ExitStatus::REFUTED
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "modalkit",
    version,
    about = "Check modal formulas on finite Kripke models"
)]
pub struct Cli {
    /// Print a single JSON document on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a formula at a world, or check its validity in a model.
    Check(CheckArgs),
    /// Check a scheme against every valuation on a frame.
    FrameValid(FrameValidArgs),
    /// Report the standard axioms against frame properties.
    Correspond(CorrespondArgs),
    /// Report the Barcan formulas against domain monotonicity.
    Barcan(BarcanArgs),
    /// Search small models for a countermodel.
    Countermodel(CountermodelArgs),
    /// Print a formula in another notation.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    /// Evaluate at this world instead of checking validity.
    #[arg(long)]
    pub world: Option<String>,
    /// Bind a variable to a domain element, as `x=a`.
    #[arg(long = "env", value_name = "VAR=ELEMENT")]
    pub env: Vec<String>,
    /// Replace the accessibility relation by the total one.
    #[arg(long)]
    pub total_access: bool,
}

#[derive(Debug, Args)]
pub struct FrameValidArgs {
    #[arg(long)]
    pub frame: PathBuf,
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub total_access: bool,
}

#[derive(Debug, Args)]
pub struct CorrespondArgs {
    #[arg(long)]
    pub frame: PathBuf,
    #[arg(long)]
    pub total_access: bool,
}

#[derive(Debug, Args)]
pub struct BarcanArgs {
    #[arg(long)]
    pub dframe: PathBuf,
}

#[derive(Debug, Args)]
pub struct CountermodelArgs {
    #[arg(long)]
    pub conclusion: String,
    /// A formula that must be valid in the countermodel.
    #[arg(long = "premise")]
    pub premises: Vec<String>,
    /// A scheme that must be valid under every instantiation.
    #[arg(long = "scheme-premise")]
    pub scheme_premises: Vec<String>,
    /// Frame constraints, comma separated or repeated.
    #[arg(long = "require", value_delimiter = ',')]
    pub require: Vec<FrameConstraint>,
    #[arg(long, default_value_t = 3)]
    pub max_worlds: usize,
    #[arg(long, default_value_t = 0)]
    pub max_domain: usize,
    #[arg(long, default_value = "varying")]
    pub mode: DomainMode,
    #[arg(long, default_value = "object")]
    pub reading: Reading,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Skip frames isomorphic to an earlier one.
    #[arg(long)]
    pub prune: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long, default_value = "ascii")]
    pub format: Format,
}

/// A failure with the status it maps to.
struct Failure {
    status: ExitStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match e {
            Error::ResourceLimit { .. } => ExitStatus::RESOURCE_LIMIT,
            _ => ExitStatus::USAGE,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: ExitStatus::USAGE,
        message: message.into(),
    }
}

/// What a command produced: text, the JSON form, and the status.
struct Report {
    text: String,
    json: Value,
    status: ExitStatus,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() {
                ExitStatus::USAGE
            } else {
                ExitStatus::HOLDS
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return status;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let _ = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("json values serialize")
                )
            } else {
                write!(out, "{}", report.text)
            };
            report.status
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn execute(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Check(a) => check(a),
        Command::FrameValid(a) => frame_valid_cmd(a),
        Command::Correspond(a) => correspond(a),
        Command::Barcan(a) => barcan(a),
        Command::Countermodel(a) => countermodel(a),
        Command::Render(a) => {
            let f = parse_formula(&a.formula)?;
            let text = render(&f, a.format);
            Ok(Report {
                json: json!({ "rendered": text }),
                text: format!("{text}\n"),
                status: ExitStatus::HOLDS,
            })
        }
    }
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| usage(e.display_with_source(text)))
}

fn load_model(path: &Path, total: bool) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let model = Model::from_json(&text)
        .map_err(|e| usage(format!("{}: invalid model at {e}", path.display())))?;
    Ok(if total {
        model.with_total_access()
    } else {
        model
    })
}

fn budget() -> Result<Budget, Failure> {
    Budget::from_env().map_err(usage)
}

fn set_names(fr: &Frame, s: WorldSet) -> String {
    format!("{{{}}}", fr.names_of(s).join(", "))
}

fn describe_witness(fr: &Frame, v: &Verdict) -> String {
    let Some(w) = &v.witness else {
        return String::new();
    };
    let mut parts: Vec<String> = w
        .props
        .iter()
        .chain(&w.schemes)
        .map(|(k, s)| format!("{k} = {}", set_names(fr, *s)))
        .collect();
    if let Some(h) = &w.hole {
        parts.push(format!("interpretation of {} in the JSON report", h.name));
    }
    if parts.is_empty() {
        format!("at {}", fr.world_name(w.world))
    } else {
        format!("at {} with {}", fr.world_name(w.world), parts.join(", "))
    }
}

fn check(a: &CheckArgs) -> Result<Report, Failure> {
    let model = load_model(&a.model, a.total_access)?;
    let f = parse_formula(&a.formula)?;
    let fr = model.frame();
    let mut env = Env::new();
    for binding in &a.env {
        let (var, elem) = binding
            .split_once('=')
            .ok_or_else(|| usage(format!("--env expects VAR=ELEMENT, got `{binding}`")))?;
        let df = model
            .domain_frame()
            .ok_or_else(|| usage("--env needs a model with a domain"))?;
        let e = df
            .element_index(elem.trim())
            .ok_or_else(|| usage(format!("unknown domain element `{}`", elem.trim())))?;
        env.bind(var.trim(), e);
    }
    let eval_err = |e| Failure::from(Error::Eval(e));
    if let Some(name) = &a.world {
        let w = fr
            .world_index(name)
            .ok_or_else(|| usage(format!("unknown world `{name}`")))?;
        let value = eval(&model, &f, w, &env).map_err(eval_err)?;
        return Ok(Report {
            text: format!("{value}\n"),
            json: json!({ "world": name, "value": value }),
            status: ExitStatus::from_holds(value),
        });
    }
    let verdict = if f.scheme_vars().is_empty() {
        let set = truth_set(&model, &f, &env).map_err(eval_err)?;
        let failing = WorldSet(fr.all().0 & !set.0);
        Verdict {
            holds: failing.is_empty(),
            witness: failing.first().map(|w| crate::semantics::Witness {
                world: w,
                env: env.clone(),
                props: Vec::new(),
                schemes: Vec::new(),
                hole: None,
            }),
        }
    } else {
        if !a.env.is_empty() {
            return Err(usage("--env cannot be combined with scheme variables"));
        }
        scheme_valid(&model, &f, &budget()?)?
    };
    let text = if verdict.holds {
        "valid\n".to_string()
    } else {
        format!("invalid {}\n", describe_witness(fr, &verdict))
    };
    Ok(Report {
        text,
        json: verdict_json(&verdict, fr, &model),
        status: ExitStatus::from_holds(verdict.holds),
    })
}

fn verdict_json(v: &Verdict, fr: &Frame, model: &Model) -> Value {
    let mut o = json!({ "holds": v.holds });
    if let Some(w) = &v.witness {
        o["witness"] = w.to_json(fr, model.domain_frame());
    }
    o
}

fn frame_valid_cmd(a: &FrameValidArgs) -> Result<Report, Failure> {
    let model = load_model(&a.frame, a.total_access)?;
    let scheme = parse_formula(&a.scheme)?;
    let fr = model.frame();
    let v = frame_valid(fr, &scheme, &budget()?)?;
    let text = if v.holds {
        "frame valid\n".to_string()
    } else {
        format!("not frame valid: refuted {}\n", describe_witness(fr, &v))
    };
    Ok(Report {
        text,
        json: verdict_json(&v, fr, &model),
        status: ExitStatus::from_holds(v.holds),
    })
}

fn correspond(a: &CorrespondArgs) -> Result<Report, Failure> {
    let model = load_model(&a.frame, a.total_access)?;
    let fr = model.frame();
    let report = axiom_report(fr, &budget()?)?;
    let mut text = String::new();
    for (id, e) in &report.entries {
        let property = match (id.property(), e.property) {
            (Some(p), Some(b)) => format!("{p}={b}"),
            _ => "-".to_string(),
        };
        let flag = if e.consistent {
            "consistent"
        } else {
            "INCONSISTENT"
        };
        text.push_str(&format!(
            "{:<3} holds={:<5} {:<17} {flag}",
            id.key(),
            e.verdict.holds,
            property
        ));
        if !e.verdict.holds {
            text.push_str(&format!("  refuted {}", describe_witness(fr, &e.verdict)));
        }
        text.push('\n');
    }
    let props: Vec<String> = report
        .properties
        .iter()
        .map(|(p, b)| format!("{p}={b}"))
        .collect();
    text.push_str(&format!("frame: {}\n", props.join(" ")));
    let status = if !report.consistent() {
        ExitStatus::REFUTED
    } else {
        ExitStatus::from_holds(report.all_hold())
    };
    Ok(Report {
        text,
        json: report.to_json(),
        status,
    })
}

fn barcan(a: &BarcanArgs) -> Result<Report, Failure> {
    let model = load_model(&a.dframe, false)?;
    let df = model
        .domain_frame()
        .ok_or_else(|| usage("the Barcan report needs a model with a domain"))?;
    let r = barcan_report(df, &budget()?)?;
    let fr = &df.frame;
    let line = |name: &str, v: &Verdict| {
        if v.holds {
            format!("{name}: holds\n")
        } else {
            format!("{name}: fails {}\n", describe_witness(fr, v))
        }
    };
    let m = r.monotonicity;
    let text = format!(
        "{}{}domains: constant={} nondecreasing={} nonincreasing={}\nsymmetric: {}\nconsistency: {}\n",
        line("BF", &r.bf),
        line("CBF", &r.cbf),
        m.constant,
        m.nondecreasing,
        m.nonincreasing,
        r.symmetric,
        if r.consistent() { "consistent" } else { "INCONSISTENT" }
    );
    let status = ExitStatus::from_holds(r.bf.holds && r.cbf.holds && r.consistent());
    Ok(Report {
        text,
        json: r.to_json(),
        status,
    })
}

fn countermodel(a: &CountermodelArgs) -> Result<Report, Failure> {
    let spec = SearchSpec {
        max_worlds: a.max_worlds,
        max_domain: a.max_domain,
        constraints: a.require.clone(),
        premise_formulas: a
            .premises
            .iter()
            .map(|p| parse_formula(p))
            .collect::<Result<_, _>>()?,
        premise_schemes: a
            .scheme_premises
            .iter()
            .map(|p| parse_formula(p))
            .collect::<Result<_, _>>()?,
        conclusion: parse_formula(&a.conclusion)?,
        reading: a.reading,
        mode: a.mode,
    };
    let opts = SearchOptions {
        jobs: a.jobs,
        prune: a.prune,
        budget: budget()?,
        ..SearchOptions::default()
    };
    let scope = if spec.max_domain > 0 {
        format!(
            "{} worlds and {} domain elements",
            spec.max_worlds, spec.max_domain
        )
    } else {
        format!("{} worlds", spec.max_worlds)
    };
    match find_countermodel(&spec, &opts)? {
        None => Ok(Report {
            text: format!("no countermodel up to {scope}\n"),
            json: json!({ "found": false, "max_worlds": spec.max_worlds, "max_domain": spec.max_domain }),
            status: ExitStatus::HOLDS,
        }),
        Some(cm) => {
            let cert = cm.certificate(&spec);
            let pretty = serde_json::to_string_pretty(&cert).expect("json values serialize");
            let text = format!(
                "countermodel with {} worlds, conclusion fails at {}\n{pretty}\n",
                cm.worlds(),
                cm.model.frame().world_name(cm.witness.world)
            );
            Ok(Report {
                text,
                json: cert,
                status: ExitStatus::REFUTED,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (ExitStatus, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let status = run(
            std::iter::once("modalkit").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            status,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn render_command() {
        assert_eq!(
            run_args(&["render", "--formula", "[]P => P", "--format", "latex"]).1,
            "\\Box P \\supset P\n"
        );
        assert_eq!(
            run_args(&["render", "--formula", "~<>(P & ~Q)", "--format", "unicode"]).1,
            "¬◇(P ∧ ¬Q)\n"
        );
        let (status, _, err) = run_args(&["render", "--formula", "p &"]);
        assert_eq!(status, ExitStatus::USAGE);
        assert!(err.contains("parse error"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["frobnicate"]).0, ExitStatus::USAGE);
        assert_eq!(
            run_args(&["countermodel", "--conclusion", "p", "--require", "shiny"]).0,
            ExitStatus::USAGE
        );
        assert_eq!(run_args(&["--help"]).0, ExitStatus::HOLDS);
    }

    #[test]
    fn countermodel_json_is_only_json() {
        let (status, out, _) = run_args(&[
            "--json",
            "countermodel",
            "--conclusion",
            "(P => Q) => ([]~Q => []~P)",
        ]);
        assert_eq!(status, ExitStatus::REFUTED);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["certificate"]["reading"], "object");
    }
}
