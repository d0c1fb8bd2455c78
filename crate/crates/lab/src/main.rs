use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qae_core::{run_iqae, run_mlqae, Backend, IqaeConfig, IqaeError, OracleSpec, ScheduleKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qae_lab::bench::{emit_csv, run_sweep, Algorithm, ExperimentConfig};
use qae_lab::config::parse_config;
use qae_lab::{reproduce, verify};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_ITERATION_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "qae", version, about = "Quantum amplitude estimation lab")]
struct Cli {
    /// Worker threads for repetition sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OracleArgs {
    /// Domain register width.
    #[arg(long)]
    qubits: u32,
    /// Target amplitude; `a * 2^qubits` must be an integer.
    #[arg(long)]
    a: f64,
}

#[derive(Subcommand)]
enum Command {
    /// One maximum-likelihood estimation run.
    Mlqae {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Schedule depth.
        #[arg(long)]
        m: u32,
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "analytic")]
        backend: Backend,
        #[arg(long, default_value = "eis")]
        schedule: ScheduleKind,
    },
    /// One iterative estimation run.
    Iqae {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Shots per round.
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        ratio: u64,
        #[arg(long, default_value = "analytic")]
        backend: Backend,
        /// Print one line per round.
        #[arg(long)]
        trace: bool,
    },
    /// Classical hit-or-miss baseline over repetitions.
    Mci {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the sweep described by an experiment file and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the simulator against dense-matrix and brute-force oracles.
    Verify,
    /// Regenerate a benchmark table, or the accuracy-vs-budget figure.
    Reproduce {
        /// Table number, 1 to 9.
        #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
        table: Option<u8>,
        /// Figure number; only 16 is available.
        #[arg(long)]
        figure: Option<u8>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "analytic")]
        backend: Backend,
        /// Classical repetitions per budget for the figure.
        #[arg(long, default_value_t = reproduce::MCI_REPS)]
        mci_reps: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn oracle(args: &OracleArgs) -> Result<OracleSpec, Box<dyn std::error::Error>> {
    Ok(OracleSpec::from_amplitude(args.qubits, args.a)?)
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Mlqae {
            oracle: args,
            m,
            shots,
            seed,
            backend,
            schedule,
        } => {
            if shots == 0 {
                return Err("--shots must be positive".into());
            }
            let oracle = oracle(&args)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = run_mlqae(&oracle, m, shots, schedule, backend, &mut rng);
            writeln!(out, "algorithm,a_hat,theta_hat,oracle_calls,log_likelihood")?;
            writeln!(
                out,
                "mlqae,{},{},{},{}",
                report.a_hat, report.theta_hat, report.oracle_calls, report.log_likelihood_at_max
            )?;
            writeln!(
                out,
                "# a = {}  error = {:.4}%  powers = {:?}",
                args.a,
                100.0 * (report.a_hat - args.a).abs() / args.a,
                report.records.iter().map(|r| r.power).collect::<Vec<_>>()
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Iqae {
            oracle: args,
            epsilon,
            alpha,
            shots,
            seed,
            ratio,
            backend,
            trace,
        } => {
            let oracle = oracle(&args)?;
            let config = IqaeConfig {
                epsilon,
                alpha,
                shots_per_round: shots,
                ratio,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (report, code) = match run_iqae(&oracle, &config, backend, &mut rng) {
                Ok(report) => (report, ExitCode::SUCCESS),
                Err(IqaeError::IterationCap(report)) => {
                    eprintln!(
                        "error: interval did not reach width 2*epsilon within {} rounds",
                        config.round_cap()
                    );
                    (*report, ExitCode::from(EXIT_ITERATION_CAP))
                }
                Err(e) => return Err(e.into()),
            };
            if trace {
                writeln!(out, "# round k plane shots hits theta_lo theta_hi")?;
                for (i, r) in report.rounds.iter().enumerate() {
                    writeln!(
                        out,
                        "# {} {} {} {} {} {:.10} {:.10}",
                        i + 1,
                        r.k,
                        if r.upper_half_plane { "upper" } else { "lower" },
                        r.shots,
                        r.hits,
                        r.interval_after.theta_lo(),
                        r.interval_after.theta_hi()
                    )?;
                }
            }
            writeln!(out, "algorithm,a_hat,a_lo,a_hi,oracle_calls,rounds")?;
            writeln!(
                out,
                "iqae,{},{},{},{},{}",
                report.a_hat,
                report.a_lo,
                report.a_hi,
                report.oracle_calls,
                report.rounds.len()
            )?;
            writeln!(
                out,
                "# a = {}  error = {:.4}%  covered = {}",
                args.a,
                100.0 * (report.a_hat - args.a).abs() / args.a,
                report.a_lo <= args.a && args.a <= report.a_hi
            )?;
            Ok(code)
        }
        Command::Mci {
            a,
            samples,
            reps,
            seed,
        } => {
            let config = ExperimentConfig {
                algorithm: Algorithm::Mci,
                domain_qubits: 10,
                a_true: a,
                shots_list: vec![samples],
                repetitions: reps,
                base_seed: seed,
                backend: Backend::Analytic,
            };
            if !(0.0..=1.0).contains(&a) || a == 0.0 {
                return Err("--a must lie in (0, 1]".into());
            }
            let rows = run_sweep(&config)?;
            emit_csv(&rows, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out: path } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| format!("reading {}: {e}", config.display()))?;
            let parsed = parse_config(&text).map_err(|e| format!("{}: {e}", config.display()))?;
            let rows = run_sweep(&parsed)?;
            match path {
                Some(path) => {
                    let mut buf = Vec::new();
                    emit_csv(&rows, &mut buf)?;
                    fs::write(&path, buf)
                        .map_err(|e| format!("writing {}: {e}", path.display()))?;
                }
                None => emit_csv(&rows, &mut out)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let results = verify::run_all();
            let mut ok = true;
            for r in &results {
                writeln!(
                    out,
                    "{} {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                )?;
                ok &= r.passed;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED)
            })
        }
        Command::Reproduce {
            table,
            figure,
            out: dir,
            backend,
            mci_reps,
        } => {
            let files = match (table, figure) {
                (Some(t), _) => reproduce::reproduce_table(t, backend, &dir)?.files,
                (None, Some(16)) => reproduce::reproduce_figure16(backend, mci_reps, &dir)?,
                (None, Some(f)) => return Err(format!("no figure {f}; only 16").into()),
                (None, None) => unreachable!("clap requires one of --table, --figure"),
            };
            for f in files {
                writeln!(out, "{}", f.display())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
