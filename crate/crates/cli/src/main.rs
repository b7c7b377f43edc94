use clap::{Args, Parser, Subcommand};
use gme_cli::analysis;
use gme_cli::io;
use gme_core::maps::MapSpec;
use gme_core::multipartite::SpaceShape;
use gme_core::witness::{build_witness, evaluate_with_tol, flip_seed_policy, ghz_seed_policy, DETECTION_TOL};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "cert-cli", about = "Certify genuine multipartite entanglement with positive-map witnesses", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArg {
    /// Detection threshold on witness values
    #[arg(long, default_value_t = DETECTION_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Build a GME witness from a map and a seed policy, write it as JSON
    WitnessBuild {
        /// Map: transpose | reduction | choi3 | gchoi:a,b,c | breuer-hall:d | identity
        #[arg(long)]
        map: String,
        /// Seed policy: ghz:n,d (|GHZ⟩ on every cut) or flip:n,d (qubit flip seeds)
        #[arg(long, default_value = "ghz:3,3")]
        seeds: String,
        /// Output path for the witness JSON
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a witness file on a state and print value and verdict
    Evaluate {
        /// Witness JSON file
        #[arg(long)]
        witness: PathBuf,
        /// State: ghz:n,d | rho-lambda:λ | noise:p,λ | two-param:p,q | a JSON file
        #[arg(long)]
        state: String,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Minimum eigenvalue of the partial transpose on every bipartition
    PptCheck {
        #[arg(long)]
        state: String,
    },
    /// Minimum eigenvalue of (Λ ⊗ 𝟙)[ρ] on every bipartition
    MapCheck {
        #[arg(long)]
        state: String,
        #[arg(long)]
        map: String,
    },
    /// Witness values on ρ(λ) over a λ grid
    LambdaScan {
        #[arg(long, default_value = "choi3")]
        map: String,
        #[arg(long, default_value_t = 0.02)]
        from: f64,
        #[arg(long, default_value_t = 0.98)]
        to: f64,
        #[arg(long, default_value_t = 49)]
        steps: usize,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Critical white-noise weight for ρ(λ) under a witness
    NoiseRobustness {
        /// λ of the bound-entangled family; rational literals like 1/9 accepted
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "choi3")]
        map: String,
    },
    /// Two-witness scan of the (p,q) family, written as CSV
    RegionScan {
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
}

/// Exit 1 for malformed flags and specifiers, 2 for failures of numerical
/// validation (bad files, non-states, dimension conflicts).
enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            CliError::Numeric(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn usage<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

fn numeric<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Numeric(e.to_string()))
}

fn parse_map(s: &str) -> Result<MapSpec, CliError> {
    usage(MapSpec::from_str(s))
}

fn load_state(spec: &str) -> Result<io::PreparedState, CliError> {
    if std::path::Path::new(spec).is_file() {
        numeric(io::parse_state(spec))
    } else {
        usage(io::parse_state(spec))
    }
}

fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![from];
    }
    (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::WitnessBuild { map, seeds, out } => {
            let map_spec = parse_map(&map)?;
            let (policy, rest) = seeds
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("bad seed policy '{seeds}'")))?;
            let nums: Vec<&str> = rest.split(',').collect();
            if nums.len() != 2 {
                return Err(CliError::Usage(format!("seed policy wants n,d, got '{rest}'")));
            }
            let n: usize = usage(nums[0].parse::<usize>().map_err(|_| format!("bad party count '{}'", nums[0])))?;
            let d: usize = usage(nums[1].parse::<usize>().map_err(|_| format!("bad local dimension '{}'", nums[1])))?;
            let shape = numeric(SpaceShape::uniform(n, d))?;
            let seeds = match policy {
                "ghz" => numeric(ghz_seed_policy(n, d, &numeric(map_spec.build(d))?))?,
                "flip" => numeric(flip_seed_policy(n, d))?,
                other => return Err(CliError::Usage(format!("unknown seed policy '{other}' (expected ghz or flip)"))),
            };
            let built = numeric(build_witness(seeds, &shape))?;
            numeric(io::write_matrix(&out, shape.dims(), &built.witness))?;
            println!("witness written to {} (trace {:.6})", out.display(), built.witness.trace().re);
            Ok(())
        }
        Command::Evaluate { witness, state, tol } => {
            let (_, w) = numeric(io::read_hermitian(&witness))?;
            let st = load_state(&state)?;
            let (value, verdict) = numeric(evaluate_with_tol(&w, &st.rho, tol.tol))?;
            println!("value = {value:.12}");
            println!("verdict = {verdict}");
            Ok(())
        }
        Command::PptCheck { state } => {
            let st = load_state(&state)?;
            for (cut, v) in numeric(analysis::ppt_check(&st.rho, &st.shape))? {
                println!("{cut}: min eigenvalue {v:+.12e}");
            }
            Ok(())
        }
        Command::MapCheck { state, map } => {
            let st = load_state(&state)?;
            let map_spec = parse_map(&map)?;
            let d = st.shape.dims()[0];
            let built = numeric(map_spec.build(d))?;
            for (cut, v) in numeric(analysis::map_check(&st.rho, &st.shape, &built))? {
                println!("{cut}: min eigenvalue {v:+.12e}");
            }
            Ok(())
        }
        Command::LambdaScan { map, from, to, steps, tol } => {
            if !(from > 0.0 && to < 1.0 && from <= to) {
                return Err(CliError::Usage(format!("λ grid must satisfy 0 < from ≤ to < 1, got [{from}, {to}]")));
            }
            let map_spec = parse_map(&map)?;
            let built = numeric(map_spec.build(3))?;
            let grid = linspace(from, to, steps);
            println!("lambda,value,verdict");
            for (lambda, value, verdict) in numeric(analysis::lambda_scan(&grid, &built, tol.tol))? {
                println!("{lambda:.6},{value:+.12e},{verdict}");
            }
            Ok(())
        }
        Command::NoiseRobustness { lambda, map } => {
            let lambda = usage(io::parse_scalar(&lambda))?;
            let map_spec = parse_map(&map)?;
            let w = numeric(analysis::qutrit_ghz_witness(&numeric(map_spec.build(3))?))?;
            match numeric(analysis::noise_robustness(lambda, &w))? {
                Some(r) => {
                    println!("lambda = {}", r.lambda);
                    println!("value at p = 0: {:.12e}", r.witness_value_at_zero);
                    println!("witness trace: {:.12}", r.witness_trace);
                    println!("p_crit = {:.12}", r.p_crit);
                }
                None => {
                    println!("state not detected at p = 0; no p_crit");
                }
            }
            Ok(())
        }
        Command::RegionScan { steps, out, tol } => {
            let rows = numeric(analysis::region_scan(steps, tol.tol))?;
            numeric(
                std::fs::write(&out, io::emit_region_csv(&rows))
                    .map_err(|e| format!("cannot write {}: {e}", out.display())),
            )?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, parse failures usage errors
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
