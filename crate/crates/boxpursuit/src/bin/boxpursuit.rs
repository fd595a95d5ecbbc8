//! Command-line front end. Every subcommand is a thin adapter over the
//! library; see the README for the file formats.
//!
//! Exit codes: 0 success / property holds, 2 infeasible program,
//! 3 property fails, 64 malformed input file, 1 other errors.

use boxpursuit::alphabet::Alphabet;
use boxpursuit::harness::{
    emit_theory_overlay, percent_fractions, run_phase_grid, run_robustness_grid, write_grid_csv,
    PhaseGridConfig,
};
use boxpursuit::io::{read_matrix_auto, read_vector_csv, FormatError};
use boxpursuit::nsp::{check_nsp, nsp_recovery_crosscheck, NspQuery};
use boxpursuit::rng::Streams;
use boxpursuit::solver::{
    check_unique, round_to_alphabet, solve_box_bp, solve_box_bp_denoise, BoxBounds, SolveStatus,
};
use boxpursuit::statdim::{delta_curve, write_curve_csv, CurveSpec};
use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NSP_FAILS: u8 = 3;
const EXIT_BAD_FILE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "boxpursuit",
    about = "Box-constrained basis pursuit for finite-alphabet sparse signals",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for grid/crosscheck subcommands (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct ProgramSelect {
    /// Alphabet as LO:HI (e.g. 0:1, -1:1, 0:2); box = its convex hull
    #[arg(long, conflicts_with_all = ["p1", "pplus"])]
    alphabet: Option<String>,
    /// Plain basis pursuit (no box)
    #[arg(long, conflicts_with = "pplus")]
    p1: bool,
    /// Nonnegativity constraint only
    #[arg(long)]
    pplus: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve min ||x||_1 s.t. Ax = b with the selected constraint set
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        program: ProgramSelect,
        /// Also certify uniqueness of the solution
        #[arg(long)]
        check_unique: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve min ||x||_1 s.t. ||Ax - b||_2 <= eta with a box
    Denoise {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        program: ProgramSelect,
        #[arg(long)]
        eta: f64,
        /// Round the solution to the alphabet (requires --alphabet)
        #[arg(long)]
        round: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one phase-transition point
    Statdim {
        /// bin | ter | uf | bf
        #[arg(long)]
        variant: String,
        #[arg(long = "N")]
        n: usize,
        /// bin/ter: k; uf: k_interior,k_top; bf: k_interior,k_bottom,k_top
        #[arg(long)]
        counts: String,
    },
    /// Emit a theory curve as CSV over k/N in {0.01, ..., 1}
    Curve {
        /// bin | ter | uf | bf (alphabet implied: 0:1, -1:1, 0:2, -2:2)
        #[arg(long)]
        variant: String,
        #[arg(long = "N")]
        n: usize,
        /// Interior share of the support for uf/bf curves
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a null space property; exit 0 if it holds, 3 if not
    Nsp {
        /// bnsp | nspplus | btnsp | ufnsp | fnsp
        #[arg(long)]
        kind: String,
        #[arg(long)]
        matrix: PathBuf,
        /// Semicolon-separated index sets (1-based), e.g. "1,2" or "1;2,3"
        #[arg(long)]
        sets: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a noiseless phase-transition grid from a JSON config
    Phase {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a noisy (eta > 0) grid from a JSON config
    Robust {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// NSP-vs-uniqueness agreement report on random small instances
    Crosscheck {
        #[arg(long)]
        trials: usize,
        /// m,N,k
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn new(message: impl Into<String>, code: u8) -> Self {
        CliError {
            message: message.into(),
            code,
        }
    }

    fn exit_code(&self) -> u8 {
        self.code
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(e.to_string(), EXIT_BAD_FILE)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(e.to_string(), EXIT_FAIL)
    }
}

macro_rules! cli_err_from {
    ($ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new(e.to_string(), EXIT_FAIL)
            }
        }
    };
}
cli_err_from!(boxpursuit::solver::SolveError);
cli_err_from!(boxpursuit::nsp::NspError);
cli_err_from!(boxpursuit::statdim::StatdimError);
cli_err_from!(boxpursuit::harness::HarnessError);
cli_err_from!(boxpursuit::alphabet::AlphabetError);

fn bounds_for(program: &ProgramSelect, n: usize) -> Result<(BoxBounds, Option<Alphabet>), CliError> {
    if program.p1 {
        Ok((BoxBounds::free(n), None))
    } else if program.pplus {
        Ok((BoxBounds::nonnegative(n), None))
    } else if let Some(spec) = &program.alphabet {
        let alphabet = Alphabet::parse(spec)?;
        Ok((BoxBounds::from_alphabet(&alphabet, n), Some(alphabet)))
    } else {
        Err(CliError::new(
            "select a constraint set: --alphabet LO:HI, --p1 or --pplus",
            EXIT_FAIL,
        ))
    }
}

fn load_system(matrix: &PathBuf, rhs: &PathBuf) -> Result<(DMatrix<f64>, DVector<f64>), CliError> {
    let a = read_matrix_auto(matrix)?;
    let b = read_vector_csv(rhs)?;
    if b.len() != a.nrows() {
        return Err(CliError::new(
            format!(
                "matrix has {} rows but rhs has {} entries",
                a.nrows(),
                b.len()
            ),
            EXIT_FAIL,
        ));
    }
    Ok((a, b))
}

fn parse_sets(spec: &str) -> Result<Vec<Vec<usize>>, CliError> {
    spec.split(';')
        .map(|group| {
            let group = group.trim();
            if group.is_empty() {
                return Ok(Vec::new());
            }
            group
                .split(',')
                .map(|tok| {
                    let v: usize = tok.trim().parse().map_err(|_| {
                        CliError::new(format!("invalid index `{}` in --sets", tok.trim()), EXIT_FAIL)
                    })?;
                    if v == 0 {
                        return Err(CliError::new("--sets indices are 1-based", EXIT_FAIL));
                    }
                    Ok(v - 1)
                })
                .collect()
        })
        .collect()
}

fn parse_counts(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|tok| {
            tok.trim().parse().map_err(|_| {
                CliError::new(format!("invalid count `{}` in --counts", tok.trim()), EXIT_FAIL)
            })
        })
        .collect()
}

fn curve_spec(variant: &str, n: usize, counts: &[usize]) -> Result<CurveSpec, CliError> {
    let want = |len: usize, shape: &str| {
        if counts.len() != len {
            Err(CliError::new(
                format!("variant {variant} expects --counts {shape}"),
                EXIT_FAIL,
            ))
        } else {
            Ok(())
        }
    };
    match variant {
        "bin" => {
            want(1, "k")?;
            Ok(CurveSpec::Bin { n, k: counts[0] })
        }
        "ter" => {
            want(1, "k")?;
            Ok(CurveSpec::BipolarTernary { n, k: counts[0] })
        }
        "uf" => {
            want(2, "k_interior,k_top")?;
            Ok(CurveSpec::UnipolarFinite {
                n,
                k_interior: counts[0],
                k_top: counts[1],
            })
        }
        "bf" => {
            want(3, "k_interior,k_bottom,k_top")?;
            Ok(CurveSpec::BipolarFinite {
                n,
                k_interior: counts[0],
                k_bottom: counts[1],
                k_top: counts[2],
            })
        }
        other => Err(CliError::new(
            format!("unknown variant `{other}` (expected bin|ter|uf|bf)"),
            EXIT_FAIL,
        )),
    }
}

fn load_config(path: &PathBuf, seed: Option<u64>) -> Result<PhaseGridConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg: PhaseGridConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("{}: {e}", path.display()), EXIT_BAD_FILE))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Solve {
            matrix,
            rhs,
            program,
            check_unique: want_unique,
            out,
        } => {
            let (a, b) = load_system(&matrix, &rhs)?;
            let (bounds, _) = bounds_for(&program, a.ncols())?;
            let mut result = solve_box_bp(&a, &b, &bounds)?;
            if want_unique && result.status == SolveStatus::Optimal {
                result.unique = check_unique(&a, &b, &bounds, &result.vector())?;
            }
            std::fs::write(&out, serde_json::to_string_pretty(&result).unwrap())?;
            Ok(match result.status {
                SolveStatus::Optimal => EXIT_OK,
                SolveStatus::Infeasible => EXIT_INFEASIBLE,
                SolveStatus::ToleranceNotMet => EXIT_FAIL,
            })
        }
        Command::Denoise {
            matrix,
            rhs,
            program,
            eta,
            round,
            out,
        } => {
            let (a, b) = load_system(&matrix, &rhs)?;
            let (bounds, alphabet) = bounds_for(&program, a.ncols())?;
            if round && alphabet.is_none() {
                return Err(CliError::new("--round requires --alphabet", EXIT_FAIL));
            }
            let result = solve_box_bp_denoise(&a, &b, eta, &bounds)?;
            let mut doc = serde_json::to_value(&result).unwrap();
            if round {
                if let Some(alphabet) = alphabet {
                    let rounded = round_to_alphabet(&result.vector(), &alphabet);
                    doc["rounded"] = json!(rounded.levels);
                }
            }
            std::fs::write(&out, serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(match result.status {
                SolveStatus::Optimal => EXIT_OK,
                SolveStatus::Infeasible => EXIT_INFEASIBLE,
                SolveStatus::ToleranceNotMet => EXIT_FAIL,
            })
        }
        Command::Statdim { variant, n, counts } => {
            let counts = parse_counts(&counts)?;
            let spec = curve_spec(&variant, n, &counts)?;
            let point = delta_curve(&spec)?;
            let doc = json!({
                "variant": variant,
                "N": n,
                "counts": counts,
                "delta": point.delta,
                "tau_star": point.tau_star,
                "delta_over_N": point.delta / n as f64,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(EXIT_OK)
        }
        Command::Curve {
            variant,
            n,
            ratio,
            out,
        } => {
            let alphabet = match variant.as_str() {
                "bin" => Alphabet::new(0, 1),
                "ter" => Alphabet::new(-1, 1),
                "uf" => Alphabet::new(0, 2),
                "bf" => Alphabet::new(-2, 2),
                other => {
                    return Err(CliError::new(
                        format!("unknown variant `{other}` (expected bin|ter|uf|bf)"),
                        EXIT_FAIL,
                    ))
                }
            }?;
            let rows = emit_theory_overlay(&alphabet, n, ratio, &percent_fractions())?;
            let mut buf = Vec::new();
            write_curve_csv(&mut buf, &rows)?;
            std::fs::write(&out, buf)?;
            Ok(EXIT_OK)
        }
        Command::Nsp {
            kind,
            matrix,
            sets,
            out,
        } => {
            let a = read_matrix_auto(&matrix)?;
            let sets = parse_sets(&sets)?;
            let get = |i: usize| -> Result<Vec<usize>, CliError> {
                sets.get(i).cloned().ok_or_else(|| {
                    CliError::new("not enough ;-separated groups in --sets", EXIT_FAIL)
                })
            };
            let query = match kind.as_str() {
                "bnsp" => NspQuery::BNsp { k: get(0)? },
                "nspplus" => NspQuery::NspPlus { k: get(0)? },
                "btnsp" => NspQuery::BtNsp {
                    k_pos: get(0)?,
                    k_neg: get(1)?,
                },
                "ufnsp" => NspQuery::UfNsp {
                    k_top: get(0)?,
                    k: get(1)?,
                },
                "fnsp" => NspQuery::FNsp {
                    k_bottom: get(0)?,
                    k_top: get(1)?,
                    k: get(2)?,
                },
                other => {
                    return Err(CliError::new(
                        format!("unknown kind `{other}` (expected bnsp|nspplus|btnsp|ufnsp|fnsp)"),
                        EXIT_FAIL,
                    ))
                }
            };
            let verdict = check_nsp(&a, &query)?;
            let sets_1based: Vec<Vec<usize>> = sets
                .iter()
                .map(|s| s.iter().map(|&i| i + 1).collect())
                .collect();
            let doc = json!({
                "kind": kind,
                "holds": verdict.holds,
                "witness": verdict.witness,
                "sets": sets_1based,
                "m": a.nrows(),
                "N": a.ncols(),
            });
            let text = serde_json::to_string_pretty(&doc).unwrap();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(if verdict.holds { EXIT_OK } else { EXIT_NSP_FAILS })
        }
        Command::Phase { config, out, seed } => {
            let cfg = load_config(&config, seed)?;
            let table = run_phase_grid(&cfg)?;
            let mut buf = Vec::new();
            write_grid_csv(&mut buf, &table)?;
            std::fs::write(&out, buf)?;
            Ok(EXIT_OK)
        }
        Command::Robust { config, out, seed } => {
            let cfg = load_config(&config, seed)?;
            let table = run_robustness_grid(&cfg)?;
            let mut buf = Vec::new();
            write_grid_csv(&mut buf, &table)?;
            std::fs::write(&out, buf)?;
            Ok(EXIT_OK)
        }
        Command::Crosscheck {
            trials,
            dims,
            seed,
            out,
        } => {
            let parts = parse_counts(&dims)?;
            if parts.len() != 3 {
                return Err(CliError::new("--dims expects m,N,k", EXIT_FAIL));
            }
            let streams = Streams::new(seed);
            let report =
                nsp_recovery_crosscheck(&streams, trials, (parts[0], parts[1], parts[2]))?;
            let text = serde_json::to_string_pretty(&report).unwrap();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(if report.all_agree() { EXIT_OK } else { EXIT_FAIL })
        }
    }
}
