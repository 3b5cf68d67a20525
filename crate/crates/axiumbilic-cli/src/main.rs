//! `axi`: classify axiumbilic points, draw axial portraits and stability
//! diagrams, sweep bifurcation families and run the identity checks.

use axiumbilic::axial_net::{portrait, NetSelection};
use axiumbilic::bifurcation_family::{e34_sweep_base, e45_sweep_base, sweep, Deformation, OneParamFamily};
use axiumbilic::catalog;
use axiumbilic::classifier::stability_diagram;
use axiumbilic::emit::{classify_report, diagram_svg, events_json, json_string, portrait_svg};
use axiumbilic::error::Error;
use axiumbilic::monge_surface::MongeJet;
use axiumbilic::tol;
use axiumbilic::verify::{self, VerifyConfig};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: u8 = 1;
const PARSE: u8 = 2;
const DEGENERATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "axi", version, about = "Axiumbilic points and axial curvature lines of surfaces in R^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NetArg {
    Principal,
    Mean,
    Both,
}

impl From<NetArg> for NetSelection {
    fn from(n: NetArg) -> Self {
        match n {
            NetArg::Principal => NetSelection::Principal,
            NetArg::Mean => NetSelection::Mean,
            NetArg::Both => NetSelection::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    E34,
    E45,
}

#[derive(clap::Args, Debug, Clone)]
struct JetArgs {
    /// JSON jet file: {"r": {"r20": ..}, "s": {"s02": ..}}
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    jet: Option<PathBuf>,
    /// Built-in jet: e3, e4, e5, e34, e45 (and e34-sweep, e45-sweep)
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the origin of a jet; JSON report.
    Classify {
        #[command(flatten)]
        input: JetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Axial portrait as SVG (plus a CSV of all polylines next to it).
    Portrait {
        #[command(flatten)]
        input: JetArgs,
        #[arg(long, default_value_t = 0.25)]
        window: f64,
        #[arg(long, default_value_t = 12)]
        density: usize,
        #[arg(long, value_enum, default_value_t = NetArg::Both)]
        net: NetArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability diagram over the (a, b) plane as SVG, with a CSV next to it.
    Diagram {
        #[arg(long, default_value = "-20,5", value_name = "LO,HI")]
        a_range: String,
        #[arg(long, default_value = "-12,12", value_name = "LO,HI")]
        b_range: String,
        /// Cells per side.
        #[arg(long, default_value_t = 200)]
        density: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-parameter sweep: CSV of counts and an event log.
    Sweep {
        #[command(flatten)]
        input: JetArgs,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Which E34 deformation (1 or 2).
        #[arg(long, default_value_t = 1)]
        branch: u8,
        #[arg(long, default_value_t = -1e-2, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Radius of the disk searched for axiumbilic points.
        #[arg(long, default_value_t = 0.05)]
        window: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity checks; exit 0 iff all pass.
    Verify {
        /// A check or group name.
        #[arg(long)]
        only: Option<String>,
    },
}

/// Validated settings shared by the commands.
#[derive(Debug, Clone, PartialEq)]
struct RunConfig {
    window: f64,
    resolution: usize,
    t_range: (f64, f64),
    out: Option<PathBuf>,
    nets: NetSelection,
    tolerance: Option<f64>,
}

impl RunConfig {
    fn check(&self) -> Result<(), Failure> {
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(usage("--window must be positive"));
        }
        if self.t_range.0 > self.t_range.1 {
            return Err(usage("--t0 must not exceed --t1"));
        }
        Ok(())
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(m: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: m.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::NonFinite(_) => PARSE,
            _ => DEGENERATE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn load_jet(input: &JetArgs) -> Result<MongeJet, Failure> {
    match (&input.jet, &input.example) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure { code: PARSE, message: format!("{}: {e}", p.display()) })?;
            MongeJet::from_json_str(&text).map_err(|e| Failure { code: PARSE, message: format!("{}: {e}", p.display()) })
        }
        (None, Some(name)) => match name.as_str() {
            "e34-sweep" => Ok(e34_sweep_base()),
            "e45-sweep" => Ok(e45_sweep_base()),
            n => catalog::by_name(n).ok_or_else(|| usage(format!("unknown example {n:?}"))),
        },
        (None, None) => Err(usage("one of --jet or --example is required")),
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sibling(out: &Option<PathBuf>, ext: &str) -> Option<PathBuf> {
    out.as_ref().map(|p| p.with_extension(ext))
}

fn range(s: &str, flag: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || usage(format!("{flag} expects LO,HI"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(usage(format!("{flag} is empty: {lo} >= {hi}")));
    }
    Ok((lo, hi))
}

fn tolerance_from_env() -> Result<Option<f64>, Failure> {
    match std::env::var("AXI_TOL") {
        Ok(v) => {
            let x: f64 = v.trim().parse().map_err(|_| usage(format!("AXI_TOL={v:?} is not a number")))?;
            if !tol::set_scale(x) {
                return Err(usage(format!("AXI_TOL={v:?} must be positive")));
            }
            Ok(Some(x))
        }
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tolerance = tolerance_from_env()?;
    let base = RunConfig {
        window: 1.0,
        resolution: 1,
        t_range: (0.0, 0.0),
        out: None,
        nets: NetSelection::Both,
        tolerance,
    };
    match cli.command {
        Command::Classify { input, out } => {
            let jet = load_jet(&input)?;
            write_out(&out, &json_string(&classify_report(&jet)?))
        }
        Command::Portrait { input, window, density, net, out } => {
            let cfg = RunConfig { window, resolution: density, nets: net.into(), out, ..base };
            cfg.check()?;
            let jet = load_jet(&input)?;
            let p = portrait(&jet, cfg.window, cfg.resolution, cfg.nets)?;
            if let Some(csv) = sibling(&cfg.out, "csv") {
                write_out(&Some(csv), &p.to_csv())?;
            }
            write_out(&cfg.out, &portrait_svg(&p))
        }
        Command::Diagram { a_range, b_range, density, out } => {
            let (ar, br) = (range(&a_range, "--a-range")?, range(&b_range, "--b-range")?);
            if density == 0 {
                return Err(usage("--density must be at least 1"));
            }
            let d = stability_diagram(ar, br, density, density)?;
            if let Some(csv) = sibling(&out, "csv") {
                write_out(&Some(csv), &d.to_csv())?;
            }
            write_out(&out, &diagram_svg(&d))
        }
        Command::Sweep { input, family, branch, t0, t1, steps, window, out } => {
            let cfg = RunConfig { window, resolution: steps, t_range: (t0, t1), out, ..base };
            cfg.check()?;
            if steps == 0 {
                return Err(usage("--steps must be at least 1"));
            }
            let deformation = match (family, branch) {
                (FamilyArg::E45, _) => Deformation::E45,
                (FamilyArg::E34, 1) => Deformation::E34Branch1,
                (FamilyArg::E34, 2) => Deformation::E34Branch2,
                _ => return Err(usage("--branch must be 1 or 2")),
            };
            let jet = load_jet(&input)?;
            let fam = OneParamFamily::new(jet, deformation, cfg.t_range);
            let report = sweep(&fam, cfg.resolution, cfg.window);
            let events = json_string(&events_json(&report));
            match sibling(&cfg.out, "events.json") {
                Some(p) => write_out(&Some(p), &events)?,
                None => eprint!("{events}"),
            }
            write_out(&cfg.out, &report.to_csv())?;
            if let Some(s) = &report.locus.stall {
                eprintln!("continuation stalled at t = {}: {}", s.last.t, s.reason);
                return Err(Failure { code: DEGENERATE, message: "partial sweep written".into() });
            }
            Ok(())
        }
        Command::Verify { only } => {
            let r = verify::run(&VerifyConfig { only: only.as_deref(), ..Default::default() }).map_err(usage)?;
            if let Some(t) = base.tolerance {
                println!("tolerance scale {t}");
            }
            print!("{}", r.to_text());
            if r.passed() {
                Ok(())
            } else {
                Err(Failure { code: DEGENERATE, message: "verification failed".into() })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("axi: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
