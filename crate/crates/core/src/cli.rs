//! Command-line front end. Argument parsing lives here so that the binary
//! stays a thin wrapper and every command can be run in-process by tests.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classify::{tabulate_with, write_csv, ClassRow, ClassifyOptions, DEFAULT_MAX_DEGREE};
use crate::crossratio::{crossratio_sweep, SamplingBounds, DEFAULT_SEED};
use crate::error::Error;
use crate::group::{GroupSpec, PermGroup};
use crate::limits;
use crate::perm::Permutation;
use crate::rationality::{decide, reduce_to_sylow, witness_nonrational, Verdict};
use crate::two_group::{sylow_2, Index2Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SWEEP_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "xrat", version, about = "Orbit-parity rationality decisions for fields of cross-ratios")]
pub struct Cli {
    /// Enumeration cap in elements (overrides XRAT_ENUM_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide rationality and print the certificate.
    Decide(GroupCommand),
    /// Orbit decomposition with stabilizer generators.
    Orbits(GroupCommand),
    /// 2-Sylow subgroup and the odd-orbit / fixed-point comparison.
    Sylow(GroupCommand),
    /// Index-2 witnesses for a fixed-point-free 2-group.
    Witness {
        #[command(flatten)]
        group: GroupCommand,
        /// Replace the group by its 2-Sylow subgroup first.
        #[arg(long)]
        reduce: bool,
    },
    /// Verdict table over all conjugacy classes of subgroups.
    Classify {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
        format: OutputFormat,
    },
    /// Randomized exact checks of cross-ratio invariance and the descended
    /// permutation action.
    CrossratioCheck {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
        format: OutputFormat,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GroupCommand {
    /// Degree n of the ambient symmetric group.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Generators in cycle notation, e.g. "(1 2)(3 4)".
    #[arg(long, num_args = 1..)]
    pub gens: Vec<String>,
    /// JSON file holding {"degree": n, "generators": [...]}, or a previous
    /// JSON report containing such an object under "group".
    #[arg(long, conflicts_with_all = ["degree", "gens"])]
    pub group: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error) -> Self {
        let exit_code = if err.is_parse() { EXIT_PARSE } else { EXIT_PRECONDITION };
        Report {
            exit_code,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

impl GroupCommand {
    fn load(&self) -> Result<PermGroup, Error> {
        if let Some(path) = &self.group {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let spec_value = value.get("group").cloned().unwrap_or(value);
            let spec: GroupSpec = serde_json::from_value(spec_value)
                .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            return PermGroup::try_from(spec);
        }
        let degree = self
            .degree
            .ok_or_else(|| Error::Input("either --degree or --group is required".into()))?;
        PermGroup::from_cycles(degree, &self.gens)
    }

    fn no_csv(&self) -> Result<(), Error> {
        if self.format == OutputFormat::Csv {
            return Err(Error::Input("csv output is only available for classify".into()));
        }
        Ok(())
    }
}

fn angle(gens: &[Permutation]) -> String {
    if gens.is_empty() {
        return "<>".into();
    }
    let inner: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    format!("<{}>", inner.join(", "))
}

fn braces(points: &[usize]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Report {
    if let Err(e) = limits::apply_env_override() {
        return Report::error(&e);
    }
    if let Some(cap) = cli.cap {
        limits::set_enumeration_cap(cap);
    }
    let result = match &cli.command {
        Command::Decide(g) => run_decide(g),
        Command::Orbits(g) => run_orbits(g),
        Command::Sylow(g) => run_sylow(g),
        Command::Witness { group, reduce } => run_witness(group, *reduce),
        Command::Classify {
            degree,
            max_degree,
            format,
        } => run_classify(*degree, *max_degree, *format),
        Command::CrossratioCheck {
            seed,
            trials,
            degree,
            format,
        } => return run_crossratio(*seed, *trials, *degree, *format),
    };
    match result {
        Ok(out) => Report::ok(out),
        Err(e) => Report::error(&e),
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Report {
                    exit_code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report::ok(text)
            }
        }
    }
}

fn run_decide(cmd: &GroupCommand) -> Result<String, Error> {
    cmd.no_csv()?;
    let g = cmd.load()?;
    let verdict = decide(&g)?;
    verdict.validate(&g)?;
    if cmd.format == OutputFormat::Json {
        let mut value = serde_json::to_value(&verdict).expect("serializable");
        value["group"] = serde_json::to_value(g.to_spec()).expect("serializable");
        return Ok(to_json(&value));
    }
    let mut out = String::new();
    writeln!(out, "verdict: {}", verdict.kind()).unwrap();
    writeln!(out, "group: {} of degree {}, order {}", angle(g.generators()), g.degree(), g.order()).unwrap();
    let orbits: Vec<String> = g.orbits().orbits.iter().map(|o| braces(&o.members)).collect();
    writeln!(out, "orbits: {}", orbits.join(" ")).unwrap();
    match &verdict {
        Verdict::Rational(cert) => {
            writeln!(out, "certificate: odd orbit {} of size {}", braces(&cert.orbit), cert.size).unwrap();
        }
        Verdict::NotUnirational(cert) => {
            writeln!(out, "certificate:").unwrap();
            writeln!(
                out,
                "  2-Sylow subgroup P = {} of order {}, index {}",
                angle(cert.sylow.sylow.generators()),
                cert.sylow.sylow.order(),
                cert.sylow.index
            )
            .unwrap();
            writeln!(out, "  fixed points of P: none").unwrap();
            write_witnesses(&mut out, &cert.sylow.sylow, &cert.witnesses);
        }
    }
    Ok(out)
}

fn write_witnesses(out: &mut String, p: &PermGroup, witnesses: &[Index2Witness]) {
    for (orbit, w) in p.orbits().orbits.iter().zip(witnesses) {
        writeln!(
            out,
            "  orbit {}: stabilizer {} inside H = {}, [P:H] = 2, H normal in P",
            braces(&orbit.members),
            angle(&w.stabilizer),
            angle(&w.subgroup)
        )
        .unwrap();
    }
}

fn run_orbits(cmd: &GroupCommand) -> Result<String, Error> {
    cmd.no_csv()?;
    let g = cmd.load()?;
    let orbits = g.orbits();
    if cmd.format == OutputFormat::Json {
        return Ok(to_json(&orbits));
    }
    let mut out = String::new();
    for o in &orbits.orbits {
        writeln!(
            out,
            "{} size {} stabilizer {}",
            braces(&o.members),
            o.len(),
            angle(&o.stabilizer_generators)
        )
        .unwrap();
    }
    Ok(out)
}

fn run_sylow(cmd: &GroupCommand) -> Result<String, Error> {
    cmd.no_csv()?;
    let g = cmd.load()?;
    let (witness, agree) = reduce_to_sylow(&g)?;
    witness.validate(&g)?;
    let fixed = witness.sylow.fixed_points();
    let odd_orbit = g.orbits().first_odd().is_some();
    if cmd.format == OutputFormat::Json {
        return Ok(to_json(&json!({
            "sylow": witness.sylow,
            "index": witness.index,
            "parent_order": witness.parent_order,
            "fixed_points": fixed,
            "has_odd_orbit": odd_orbit,
            "agree": agree,
        })));
    }
    let mut out = String::new();
    writeln!(out, "sylow: {} of order {}", angle(witness.sylow.generators()), witness.sylow.order()).unwrap();
    writeln!(out, "index: {}", witness.index).unwrap();
    writeln!(out, "fixed points: {}", braces(&fixed)).unwrap();
    writeln!(out, "odd orbit: {}", if odd_orbit { "yes" } else { "no" }).unwrap();
    writeln!(out, "agree: {agree}").unwrap();
    Ok(out)
}

fn run_witness(cmd: &GroupCommand, reduce: bool) -> Result<String, Error> {
    cmd.no_csv()?;
    let mut p = cmd.load()?;
    if reduce {
        p = sylow_2(&p)?.sylow;
    }
    let witnesses = witness_nonrational(&p)?;
    for w in &witnesses {
        w.validate(&p)?;
    }
    if cmd.format == OutputFormat::Json {
        return Ok(to_json(&json!({ "group": p.to_spec(), "witnesses": witnesses })));
    }
    let mut out = String::new();
    writeln!(out, "P = {} of order {}", angle(p.generators()), p.order()).unwrap();
    write_witnesses(&mut out, &p, &witnesses);
    Ok(out)
}

fn run_classify(degree: usize, max_degree: usize, format: OutputFormat) -> Result<String, Error> {
    let rows = tabulate_with(degree, &ClassifyOptions { max_degree })?;
    match format {
        OutputFormat::Json => Ok(to_json(&rows)),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        OutputFormat::Plain => Ok(plain_table(&rows)),
    }
}

fn plain_table(rows: &[ClassRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>5}  {:>6}  {:<14}  {:>6}  {:>5}  {:<14}  generators",
        "class", "order", "orbits", "sylow", "fixed", "verdict"
    )
    .unwrap();
    for r in rows {
        let sizes: Vec<String> = r.orbit_sizes.iter().map(|s| s.to_string()).collect();
        writeln!(
            out,
            "{:>5}  {:>6}  {:<14}  {:>6}  {:>5}  {:<14}  {}",
            r.class_id,
            r.order,
            sizes.join(" "),
            r.sylow_order,
            r.sylow_fixed_points,
            r.verdict.to_string(),
            r.generators.join(" ; ")
        )
        .unwrap();
    }
    out
}

fn run_crossratio(seed: u64, trials: usize, degree: usize, format: OutputFormat) -> Report {
    if format == OutputFormat::Csv {
        return Report::error(&Error::Input("csv output is only available for classify".into()));
    }
    let report = match crossratio_sweep(seed, trials, degree, &SamplingBounds::default()) {
        Ok(r) => r,
        Err(e) => return Report::error(&e),
    };
    let stdout = match format {
        OutputFormat::Json => to_json(&report),
        _ => format!("{report}\n"),
    };
    Report {
        exit_code: if report.all_passed() { EXIT_OK } else { EXIT_SWEEP_FAILURE },
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Report {
        run_args(std::iter::once("xrat").chain(args.iter().copied()))
    }

    #[test]
    fn decide_rational() {
        let r = run(&["decide", "--degree", "5", "--gens", "(1 2)(3 4)"]);
        assert_eq!(r.exit_code, 0, "{}", r.stderr);
        assert!(r.stdout.contains("verdict: Rational"));
        assert!(r.stdout.contains("odd orbit {5} of size 1"));
    }

    #[test]
    fn decide_not_unirational() {
        let r = run(&["decide", "--degree", "6", "--gens", "(1 2)", "(3 4)", "(5 6)"]);
        assert_eq!(r.exit_code, 0, "{}", r.stderr);
        assert!(r.stdout.contains("verdict: NotUnirational"));
        assert_eq!(r.stdout.matches("[P:H] = 2").count(), 3);
    }

    #[test]
    fn exit_codes() {
        let r = run(&["decide", "--degree", "4", "--gens", "(1 2)"]);
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
        assert!(r.stderr.contains("n >= 5"));
        let r = run(&["decide", "--degree", "5", "--gens", "(1 2"]);
        assert_eq!(r.exit_code, EXIT_PARSE);
        let r = run(&["decide", "--degree", "5", "--gens", "(1 x)"]);
        assert_eq!(r.exit_code, EXIT_PARSE);
        assert!(r.stderr.contains("`x`"), "{}", r.stderr);
        let r = run(&["frobnicate"]);
        assert_eq!(r.exit_code, EXIT_PARSE);
        let r = run(&["decide", "--degree", "5", "--format", "csv"]);
        assert_eq!(r.exit_code, EXIT_PARSE);
    }

    #[test]
    fn crossratio_reports_are_reproducible() {
        let a = run(&["crossratio-check", "--seed", "3", "--trials", "40"]);
        let b = run(&["crossratio-check", "--seed", "3", "--trials", "40"]);
        assert_eq!(a.exit_code, 0);
        assert_eq!(a, b);
        assert!(a.stdout.contains("invariance: 40 passed, 0 failed"));
    }
}
