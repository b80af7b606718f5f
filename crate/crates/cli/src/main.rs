use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gzsys::cover::{lift, transporter, zd_act};
use gzsys::decomp::{atlas, stratum_of, RegularDecompositionData};
use gzsys::gz::{gz_flow, is_strongly_regular, kw_map};
use gzsys::hessenberg::{phi_inverse, trivialize};
use gzsys::io::{decode_cover_point, decode_gz_value, decode_matrix, decode_zd_element};
use gzsys::verify::{cover_audit, run_suite, VerifyConfig, SUITES};
use gzsys::{Complex64, GzError, Tolerances};

#[derive(Parser)]
#[command(name = "gzsys", version, about = "Gelfand-Zeitlin integrable system toolkit")]
struct Cli {
    /// Rank tolerance for nullspaces and centralizers.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Eigenvalue clustering tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    cluster_tol: f64,
    /// Seed for every sampling subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kostant-Wallach map of a matrix.
    Phi { matrix: PathBuf },
    /// Strong-regularity certificate of a matrix.
    SregCheck { matrix: PathBuf },
    /// Trajectory of the flow of f_{i,j}, `steps + 1` matrices.
    Flow {
        matrix: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Real part of the final time.
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Imaginary part of the final time.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_im: f64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
    },
    /// Largest relative Poisson bracket over random matrices.
    BracketAudit {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Regular decomposition data of a strongly regular matrix.
    StratumOf { matrix: PathBuf },
    /// All strata with n levels and their dimensions.
    Atlas {
        #[arg(long)]
        n: usize,
    },
    /// All cover points over a matrix.
    Lift {
        matrix: PathBuf,
        /// Stratum in `1/2/2,1` notation; inferred when absent.
        #[arg(long)]
        stratum: Option<RegularDecompositionData>,
    },
    /// Action of a group element on a cover point.
    ZdAct { element: PathBuf, point: PathBuf },
    /// Group element carrying one cover point to another.
    Transporter { from: PathBuf, to: PathBuf },
    /// Consistency audit on sampled cover points.
    CoverAudit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stratum: Option<RegularDecompositionData>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Hessenberg matrix with prescribed Kostant-Wallach value.
    HessenbergInverse { value: PathBuf },
    /// Writes a generic cover point as a group element applied to the Hessenberg section.
    Trivialize { point: PathBuf },
    /// Runs a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = suite_name)]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn suite_name(s: &str) -> Result<String, String> {
    if s == "all" || SUITES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of all, {}", SUITES.join(", ")))
    }
}

enum Failure {
    Domain(GzError),
    Io(String),
}

impl From<GzError> for Failure {
    fn from(e: GzError) -> Self {
        Failure::Domain(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn check_n(n: usize) -> Result<(), Failure> {
    if (1..=8).contains(&n) {
        Ok(())
    } else {
        Err(GzError::DimensionMismatch(format!("n = {n} outside 1..=8")).into())
    }
}

fn run(cli: Cli) -> Result<Option<Value>, Failure> {
    let tols = Tolerances { rank: cli.tol, cluster: cli.cluster_tol };
    let cfg = |n: usize, samples: usize| VerifyConfig { n, samples, seed: cli.seed, tols };
    let out = match cli.cmd {
        Cmd::Phi { matrix } => to_value(&kw_map(&decode_matrix(&read(&matrix)?)?)),
        Cmd::SregCheck { matrix } => to_value(&is_strongly_regular(&decode_matrix(&read(&matrix)?)?, tols.rank)),
        Cmd::Flow { matrix, i, j, t, t_im, steps } => {
            let x = decode_matrix(&read(&matrix)?)?;
            let t = Complex64::new(t, t_im);
            let traj = (0..=steps)
                .map(|k| gz_flow(&x, i, j, t * (k as f64 / steps as f64)))
                .collect::<gzsys::Result<Vec<_>>>()?;
            to_value(&traj)
        }
        Cmd::BracketAudit { n, samples } => {
            check_n(n)?;
            to_value(&run_suite("poisson", &cfg(n, samples))?)
        }
        Cmd::StratumOf { matrix } => {
            let d = stratum_of(&decode_matrix(&read(&matrix)?)?, &tols)?;
            let mut v = to_value(&d);
            v["notation"] = json!(d.to_string());
            v
        }
        Cmd::Atlas { n } => {
            check_n(n)?;
            to_value(&atlas(n))
        }
        Cmd::Lift { matrix, stratum } => {
            let x = decode_matrix(&read(&matrix)?)?;
            let d = match stratum {
                Some(d) => d,
                None => stratum_of(&x, &tols)?,
            };
            to_value(&lift(&x, &d, &tols)?)
        }
        Cmd::ZdAct { element, point } => {
            let k = decode_zd_element(&read(&element)?)?;
            let p = decode_cover_point(&read(&point)?, &tols)?;
            to_value(&zd_act(&k, &p)?)
        }
        Cmd::Transporter { from, to } => {
            let a = decode_cover_point(&read(&from)?, &tols)?;
            let b = decode_cover_point(&read(&to)?, &tols)?;
            to_value(&transporter(&a, &b, &tols)?)
        }
        Cmd::CoverAudit { n, stratum, samples } => {
            check_n(n)?;
            to_value(&cover_audit(&cfg(n, samples), stratum.as_ref())?)
        }
        Cmd::HessenbergInverse { value } => {
            to_value(phi_inverse(&decode_gz_value(&read(&value)?)?).as_cmatrix())
        }
        Cmd::Trivialize { point } => {
            let p = decode_cover_point(&read(&point)?, &tols)?;
            let t = trivialize(&p, &tols)?;
            json!({
                "k": to_value(&t.k),
                "hessenberg": to_value(t.hessenberg.as_cmatrix()),
                "residual": t.residual,
            })
        }
        Cmd::Verify { suite, n, samples, out } => {
            check_n(n)?;
            let report = run_suite(&suite, &cfg(n, samples))?;
            let mut v = to_value(&report);
            positive_zeros(&mut v);
            let text = serde_json::to_string_pretty(&v).expect("plain data serializes");
            eprintln!("{}: {}", suite, if report.passed { "passed" } else { "FAILED" });
            match out {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    return Ok(None);
                }
                None => v,
            }
        }
    };
    Ok(Some(out))
}

fn positive_zeros(v: &mut Value) {
    match v {
        Value::Number(x) if x.as_f64() == Some(0.0) && x.is_f64() => *v = json!(0.0),
        Value::Array(a) => a.iter_mut().for_each(positive_zeros),
        Value::Object(o) => o.values_mut().for_each(positive_zeros),
        _ => {}
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("plain data serializes"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Some(mut v)) => {
            positive_zeros(&mut v);
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, message) = match f {
                Failure::Domain(e) => (e.kind().to_string(), e.to_string()),
                Failure::Io(m) => ("io".to_string(), m),
            };
            eprintln!("error: {message}");
            emit(&json!({ "error": kind, "message": message }));
            ExitCode::from(1)
        }
    }
}
