//! `wodzicki`: compute noncommutative integrals and run the verification
//! suites from the command line, writing JSON reports.
//!
//! Exit status: 0 when every selected check passes, 2 when one fails, 1 on
//! usage or manifest errors.

mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use wodzicki::boundary::boundary_reports;
use wodzicki::ncint::ncintegral;
use wodzicki::par;
use wodzicki::psido::{realize, OneForm};
use wodzicki::report::{VerificationReport, REPORT_SCHEMA};
use wodzicki::theorems::{
    dim2_formula_report, einstein_hilbert_invariance, parity_reality_suite, power_vanishing_report,
    tadpole_report, torus4_zeta0_report, ReportBundle,
};
use wodzicki::zeta_oracle::{calibration_report, residue_at_pole};

use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(name = "wodzicki", version, about = "Exact Wodzicki residues on flat spin tori")]
struct Cli {
    /// Worker threads for suite-level parallelism.
    #[arg(long, global = true, env = "WODZICKI_JOBS")]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock runtimes (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ∮ of the operator given in a manifest.
    Ncint {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Tadpoles Tad(d-k) over a corpus of one-forms.
    Tadpole {
        #[command(flatten)]
        src: Source,
        /// Orders k; defaults to 0, d-2, d-1, d.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        orders: Vec<i32>,
    },
    /// Run one verification suite.
    Verify {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
    /// Heat-coefficient cancellation checks on the half-space boundary.
    Boundary {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        dims: Vec<usize>,
    },
    /// Residue of the spectral zeta function at s = d.
    ZetaResidue {
        #[arg(long)]
        dim: usize,
    },
    /// Compare c_d Wres(|D|^-d) with the spectral residue.
    Calibrate {
        #[arg(long)]
        dim: usize,
    },
}

/// Where the one-forms come from: a manifest, or a seeded corpus.
#[derive(Args, Debug)]
struct Source {
    #[arg(long, conflicts_with_all = ["dim", "seed", "count"])]
    manifest: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Tadpole,
    OddPower,
    TopPower,
    Torus4,
    Dim2,
    Dim2Formula,
    EinsteinHilbert,
    Parity,
    Calibration,
}

enum Failure {
    Usage(String),
    Assertion,
}

impl From<wodzicki::Error> for Failure {
    fn from(e: wodzicki::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        par::configure_threads(j);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Loaded {
    dim: usize,
    forms: Vec<OneForm>,
    seed: Option<u64>,
    suite: Option<Suite>,
    output: Option<PathBuf>,
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    if let Some(path) = &src.manifest {
        let m = Manifest::load(path).map_err(Failure::Usage)?;
        let forms = m.one_forms(10).map_err(Failure::Usage)?;
        return Ok(Loaded {
            dim: m.dim,
            forms,
            seed: m.seed(),
            suite: m.suite,
            output: m.output.clone(),
        });
    }
    let dim = src.dim.ok_or_else(|| Failure::Usage("either --manifest or --dim is required".into()))?;
    if dim < 2 {
        return Err(Failure::Usage(format!("--dim must be at least 2, got {dim}")));
    }
    let forms = wodzicki::theorems::one_form_corpus(dim, src.count, src.seed, Default::default());
    Ok(Loaded {
        dim,
        forms,
        seed: Some(src.seed),
        suite: None,
        output: None,
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Ncint { manifest } => {
            let m = Manifest::load(manifest).map_err(Failure::Usage)?;
            let spec = m.operator_spec().map_err(Failure::Usage)?;
            let symbol = realize(&spec)?;
            let v = ncintegral(&symbol)?;
            let (re, im) = v.value.to_complex_f64();
            let doc = json!({
                "schema": REPORT_SCHEMA,
                "command": "ncint",
                "dim": spec.dim,
                "floor": spec.floor(),
                "value": v.value,
                "approx": [re, im],
                "provenance": v.provenance,
            });
            emit(cli, m.output.as_ref(), &doc)
        }
        Command::Tadpole { src, orders } => {
            let l = load(src)?;
            let d = l.dim as i32;
            let mut orders = if orders.is_empty() { vec![0, d - 2, d - 1, d] } else { orders.clone() };
            orders.sort_unstable();
            orders.dedup();
            let rep = tadpole_report(&l.forms, &orders, l.seed)?;
            finish(cli, l.output.as_ref(), vec![rep])
        }
        Command::Verify { src, suite } => {
            let l = load(src)?;
            let suite = suite
                .or(l.suite)
                .ok_or_else(|| Failure::Usage("no suite given (use --suite or the manifest)".into()))?;
            let reports = verify(suite, &l)?;
            finish(cli, l.output.as_ref(), reports)
        }
        Command::Boundary { dims } => {
            let reps = boundary_reports(dims)?;
            finish(cli, None, reps)
        }
        Command::ZetaResidue { dim } => {
            let r = residue_at_pole(*dim, *dim)?;
            let doc = json!({
                "pole": r.pole,
                "estimate": r.estimate,
                "uncertainty": r.uncertainty,
            });
            emit(cli, None, &doc)?;
            if r.converged {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
        Command::Calibrate { dim } => {
            let rep = calibration_report(*dim)?;
            finish(cli, None, vec![rep])
        }
    }
}

fn require_dim(l: &Loaded, ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{what}, got --dim {}", l.dim)))
    }
}

fn verify(suite: Suite, l: &Loaded) -> Result<Vec<VerificationReport>, Failure> {
    let d = l.dim;
    let forms = &l.forms;
    Ok(match suite {
        Suite::Tadpole => {
            let di = d as i32;
            let mut orders = vec![0, di - 2, di - 1, di];
            orders.dedup();
            vec![tadpole_report(forms, &orders, l.seed)?]
        }
        Suite::OddPower => vec![power_vanishing_report(forms, &[1, 3], l.seed)?],
        Suite::TopPower => vec![power_vanishing_report(forms, &[d as u32], l.seed)?],
        Suite::Torus4 => {
            require_dim(l, d == 4, "the torus4 suite runs on T^4")?;
            forms.iter().map(torus4_zeta0_report).collect::<Result<_, _>>()?
        }
        Suite::Dim2 => {
            require_dim(l, d == 2, "the dim2 suite runs on T^2")?;
            vec![power_vanishing_report(forms, &[2], l.seed)?]
        }
        Suite::Dim2Formula => {
            require_dim(l, d == 2, "the dim2-formula suite runs on T^2")?;
            let pairs: Vec<(&OneForm, &OneForm)> = forms.iter().zip(forms.iter().cycle().skip(1)).collect();
            pairs.into_iter().map(|(a, b)| dim2_formula_report(a, b)).collect::<Result<_, _>>()?
        }
        Suite::EinsteinHilbert => forms.iter().map(einstein_hilbert_invariance).collect::<Result<_, _>>()?,
        Suite::Parity => {
            let jobs: Vec<(usize, u32, u32)> = (0..forms.len())
                .flat_map(|i| (0..=d as u32).flat_map(move |k| (1..=2).map(move |l| (i, k, l))))
                .collect();
            let reps = par::map(&jobs, |&(i, k, l)| parity_reality_suite(&forms[i], k, l));
            reps.into_iter().collect::<Result<_, _>>()?
        }
        Suite::Calibration => vec![calibration_report(d)?],
    })
}

/// Writes the bundle and maps its verdict to the exit status.
fn finish(cli: &Cli, manifest_output: Option<&PathBuf>, mut reports: Vec<VerificationReport>) -> Outcome {
    if !cli.timings {
        for r in &mut reports {
            r.runtime_ms = None;
        }
    }
    let bundle = ReportBundle::new(reports);
    let pass = bundle.pass;
    emit(cli, manifest_output, &bundle)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn emit<T: Serialize>(cli: &Cli, manifest_output: Option<&PathBuf>, doc: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    match cli.output.as_ref().or(manifest_output) {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
