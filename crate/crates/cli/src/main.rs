//! `wco`: command-line front end for the weighted composition operator toolkit.
//!
//! Every run writes one JSON document (config echo, version, seed, timings and
//! the result, or an error object). Scans can also emit CSV.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use wco_spectra::blaschke::ClassifyOptions;
use wco_spectra::circle::shub_semiconjugacy;
use wco_spectra::engine::{
    assemble_spectrum, conjecture1_scan, proposition1_annulus, theorem11_build_weight, theorem6_build_weight,
    verify_example6, BuildOptions, ScanReport, SpectrumOptions, Verdict,
};
use wco_spectra::radius::{default_max_period, spectral_radius};
use wco_spectra::{AnalyticWeight, BlaschkeProduct, Error, WcoSpec, Weight};

const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

#[derive(Parser, Serialize)]
#[command(name = "wco", version, about = "Semi-Fredholm spectra of weighted composition operators")]
struct Cli {
    /// JSON result path; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized sampling (recorded in the output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Dynamical type and Denjoy–Wolff point of a Blaschke product.
    Classify {
        #[arg(long)]
        blaschke: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        parabolic_band: f64,
    },
    /// Boundary semiconjugacy `h` with `h∘B = h^d`.
    Conjugacy {
        #[arg(long)]
        blaschke: PathBuf,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 40)]
        iters: usize,
    },
    SpectralRadius {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        max_period: Option<usize>,
    },
    Spectrum {
        #[command(subcommand)]
        mode: SpectrumMode,
    },
    VerifyExample6 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1 << 16)]
        grid: usize,
    },
    /// Weight whose unweighted-spectrum circles sit at the given radii.
    BuildT6 {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Truncated construction with one order-reversing orbit.
    BuildT11 {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long)]
        n_trunc: usize,
        #[command(flatten)]
        build: BuildArgs,
    },
    Annulus {
        #[arg(long)]
        blaschke: PathBuf,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SpectrumMode {
    Assemble {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        tree: TreeArgs,
    },
    Scan {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Extra radii drawn uniformly from `(0, ρ_upper]`.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Serialize)]
struct OperatorArgs {
    /// AnalyticWeight JSON.
    #[arg(long)]
    weight: PathBuf,
    #[arg(long)]
    degree: Option<usize>,
    /// Symbol other than `z^d`; the weight is transported to the model circle.
    #[arg(long)]
    blaschke: Option<PathBuf>,
    #[arg(long)]
    zero_tol: Option<f64>,
}

#[derive(Args, Serialize)]
struct TreeArgs {
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long)]
    max_period: Option<usize>,
}

#[derive(Args, Serialize)]
struct BuildArgs {
    #[arg(long, default_value_t = 8)]
    max_period: usize,
    #[arg(long)]
    grid_m: Option<u32>,
    /// Also write the synthesized AnalyticWeight here.
    #[arg(long)]
    weight_out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Module(Error),
    Io(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Module(e) if !e.is_validation() => EXIT_COMPUTATION,
            _ => EXIT_VALIDATION,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Module(e) => json!({"kind": e.kind(), "message": e.to_string()}),
            Failure::Io(m) => json!({"kind": "Io", "message": m}),
            Failure::Parse(m) => json!({"kind": "Parse", "message": m}),
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize")
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn load_weight(path: &Path, zero_tol: Option<f64>) -> Result<Weight, Failure> {
    let a: AnalyticWeight = read_json(path)?;
    let w = a.to_weight()?;
    Ok(match zero_tol {
        Some(t) => w.with_zero_tol(t)?,
        None => w,
    })
}

fn load_spec(op: &OperatorArgs) -> Result<WcoSpec, Failure> {
    let w = load_weight(&op.weight, op.zero_tol)?;
    match (&op.blaschke, op.degree) {
        (Some(path), degree) => {
            let b: BlaschkeProduct = read_json(path)?;
            if let Some(d) = degree.filter(|&d| d != b.degree()) {
                return Err(Error::InvalidInput(format!("--degree {d} but B has degree {}", b.degree())).into());
            }
            Ok(WcoSpec::from_blaschke(b, w, 4096, 40, 16)?)
        }
        (None, Some(d)) => Ok(WcoSpec::model(d, w)?),
        (None, None) => Err(Error::InvalidInput("one of --degree or --blaschke is required".into()).into()),
    }
}

fn spectrum_options(tree: &TreeArgs) -> SpectrumOptions {
    SpectrumOptions {
        max_period: tree.max_period,
        depth: tree.depth,
        ..SpectrumOptions::default()
    }
}

fn build_options(b: &BuildArgs) -> BuildOptions {
    BuildOptions {
        max_period: b.max_period,
        grid_m: b.grid_m,
        ..BuildOptions::default()
    }
}

fn save_weight(path: &Option<PathBuf>, a: &AnalyticWeight) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, serde_json::to_string_pretty(a).expect("weight serializes").as_bytes()),
        None => Ok(()),
    }
}

fn write_csv(path: &Path, report: &ScanReport) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let bad = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["radius", "verdict", "certificate-kind", "depth", "margin"]).map_err(bad)?;
    for r in &report.rows {
        let verdict = match r.verdict {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
            Verdict::Undecided => "UNDECIDED",
        };
        let kind = r.kind.map(|k| format!("{k:?}")).unwrap_or_default();
        let margin = r.margin.map(|m| m.to_string()).unwrap_or_default();
        w.write_record([r.radius.to_string(), verdict.into(), kind, r.depth.to_string(), margin])
            .map_err(bad)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    write_atomic(path, &bytes)
}

fn run(cli: &Cli) -> Outcome {
    let ok = |v: Value| Ok((v, 0));
    match &cli.command {
        Command::Classify { blaschke, parabolic_band } => {
            if !(*parabolic_band > 0.0) {
                return Err(Error::InvalidInput("--parabolic-band must be positive".into()).into());
            }
            let b: BlaschkeProduct = read_json(blaschke)?;
            let opts = ClassifyOptions {
                parabolic_band: *parabolic_band,
                ..ClassifyOptions::default()
            };
            ok(to_value(&b.classify_with(&opts)?))
        }
        Command::Conjugacy { blaschke, grid, iters } => {
            let b: BlaschkeProduct = read_json(blaschke)?;
            ok(to_value(&shub_semiconjugacy(&b, *grid, *iters)?))
        }
        Command::SpectralRadius { op, max_period } => {
            let spec = load_spec(op)?;
            let m = max_period.unwrap_or_else(|| default_max_period(spec.degree()));
            ok(to_value(&spectral_radius(&spec, m)?))
        }
        Command::Spectrum { mode } => match mode {
            SpectrumMode::Assemble { op, tree } => {
                let spec = load_spec(op)?;
                ok(to_value(&assemble_spectrum(&spec, &spectrum_options(tree))?))
            }
            SpectrumMode::Scan {
                op,
                tree,
                radii,
                random,
                csv,
            } => {
                let spec = load_spec(op)?;
                let opts = spectrum_options(tree);
                let mut all = radii.clone();
                if *random > 0 {
                    let m = tree.max_period.unwrap_or_else(|| default_max_period(spec.degree()));
                    let top = spectral_radius(&spec, m)?.rho_grid_upper;
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    all.extend((0..*random).map(|_| top * (1.0 - rng.gen::<f64>())));
                }
                if all.is_empty() {
                    return Err(Error::InvalidInput("no radii: pass --radii or --random".into()).into());
                }
                let report = conjecture1_scan(&spec, &all, tree.depth, &opts)?;
                if let Some(p) = csv {
                    write_csv(p, &report)?;
                }
                let code = if report.decisive() { 0 } else { EXIT_UNDECIDED };
                Ok((to_value(&report), code))
            }
        },
        Command::VerifyExample6 { k, nmax, grid } => {
            let report = verify_example6(*k, *nmax, *grid)?;
            let mut v = to_value(&report);
            v["verdict"] = json!(if report.pass { "PASS" } else { "FAIL" });
            Ok((v, if report.pass { 0 } else { EXIT_COMPUTATION }))
        }
        Command::BuildT6 { degree, lambdas, build } => {
            let ls: Vec<Complex64> = lambdas.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            let (_, analytic, spectrum) = theorem6_build_weight(*degree, &ls, &build_options(build))?;
            save_weight(&build.weight_out, &analytic)?;
            ok(json!({"weight": analytic, "spectrum": spectrum}))
        }
        Command::BuildT11 {
            degree,
            lambdas,
            n_trunc,
            build,
        } => {
            let (_, analytic, report) = theorem11_build_weight(*degree, lambdas, *n_trunc, &build_options(build))?;
            save_weight(&build.weight_out, &analytic)?;
            ok(json!({"weight": analytic, "report": report}))
        }
        Command::Annulus { blaschke, weight, grid } => {
            let b: BlaschkeProduct = read_json(blaschke)?;
            let w = load_weight(weight, None)?;
            ok(to_value(&proposition1_annulus(&b, &w, *grid)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let elapsed = start.elapsed().as_secs_f64();
    let mut doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": to_value(&cli),
        "seed": cli.seed,
    });
    let code = match outcome {
        Ok((result, code)) => {
            doc["result"] = result;
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.to_json()["message"].as_str().unwrap_or_default());
            doc["error"] = f.to_json();
            f.code()
        }
    };
    doc["timings"] = json!({ "elapsed_s": elapsed });
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    let written = match &cli.output {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    };
    if let Err(f) = written {
        eprintln!("error: {}", f.to_json());
        return ExitCode::from(EXIT_VALIDATION);
    }
    ExitCode::from(code)
}
