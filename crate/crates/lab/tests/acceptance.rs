//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qae_core::backend::flag_probability_at;
use qae_core::{
    eis_schedule, maximize_likelihood, run_iqae, Backend, IqaeConfig, IqaeError, IqaeReport,
    MeasurementRecord, OracleSpec,
};
use qae_lab::bench::{run_cell, run_sweep, Algorithm, SummaryRow};
use qae_lab::reproduce::{error_at_budget, matched_budget, table_config, A_TRUE};
use qae_lab::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within_time(mut o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    let fast = elapsed <= limit;
    o.passed &= fast;
    o.detail = format!("{}; {:.2?} (limit {:?})", o.detail, elapsed, limit);
    o
}

fn iqae_report(result: Result<IqaeReport, IqaeError>) -> (IqaeReport, bool) {
    match result {
        Ok(r) => (r, false),
        Err(IqaeError::IterationCap(r)) => (*r, true),
        Err(e) => panic!("{e}"),
    }
}

fn cell(rows: &[SummaryRow], shots: u64) -> &SummaryRow {
    rows.iter()
        .find(|r| r.shots == shots)
        .expect("shots in preset")
}

fn rotation_identity() -> Outcome {
    let start = Instant::now();
    let r = verify::check_rotation_identity(6, 8, 1e-9);
    within_time(
        outcome(r.passed, r.detail),
        start.elapsed(),
        Duration::from_secs(10),
    )
}

fn unitarity() -> Outcome {
    let start = Instant::now();
    let r = verify::check_unitarity(4, 1e-10);
    within_time(
        outcome(r.passed, r.detail),
        start.elapsed(),
        Duration::from_secs(5),
    )
}

fn oracle_accounting() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (table, factor) in [(2u8, 18u64), (3, 35), (4, 18), (5, 35)] {
        let config = table_config(table, Backend::Analytic).unwrap();
        for &shots in &config.shots_list {
            for o in run_cell(&config, shots).unwrap() {
                checked += 1;
                if o.oracle_calls != factor * shots {
                    bad.push(format!("table {table} shots {shots}: {}", o.oracle_calls));
                }
            }
        }
    }
    for table in 6..=9u8 {
        let config = table_config(table, Backend::Analytic).unwrap();
        let Algorithm::Iqae {
            epsilon,
            alpha,
            ratio,
        } = config.algorithm
        else {
            unreachable!()
        };
        let oracle = config.oracle().unwrap();
        for &shots in &config.shots_list {
            for rep in 0..config.repetitions {
                let cfg = IqaeConfig {
                    epsilon,
                    alpha,
                    shots_per_round: shots,
                    ratio,
                };
                let mut rng = ChaCha8Rng::seed_from_u64(config.repetition_seed(shots, rep));
                let (r, _) = iqae_report(run_iqae(&oracle, &cfg, Backend::Analytic, &mut rng));
                let sum: u64 = r.rounds.iter().map(|x| x.new_shots * (2 * x.k + 1)).sum();
                checked += 1;
                if r.oracle_calls != sum {
                    bad.push(format!("table {table} shots {shots} rep {rep}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} runs, {} mismatches {:?}", bad.len(), bad),
    )
}

fn mci_table() -> Outcome {
    let start = Instant::now();
    let rows = run_sweep(&table_config(1, Backend::Analytic).unwrap()).unwrap();
    let (small, large) = (cell(&rows, 1024), cell(&rows, 16384));
    let ok = (6.0..=7.3).contains(&small.err_pct.avg)
        && (0.0095..=0.0112).contains(&small.a.std)
        && (1.5..=1.9).contains(&large.err_pct.avg);
    within_time(
        outcome(
            ok,
            format!(
                "1024: avg err {:.3}% in [6.0, 7.3], std {:.5} in [0.0095, 0.0112]; \
                 16384: avg err {:.3}% in [1.5, 1.9]",
                small.err_pct.avg, small.a.std, large.err_pct.avg
            ),
        ),
        start.elapsed(),
        Duration::from_secs(30),
    )
}

fn mlqae_table() -> Outcome {
    let start = Instant::now();
    let rows = run_sweep(&table_config(3, Backend::Analytic).unwrap()).unwrap();
    let (big, small) = (cell(&rows, 1024), cell(&rows, 16));
    let ok =
        (0.123..=0.127).contains(&big.a.avg) && big.err_pct.avg <= 0.6 && small.err_pct.avg <= 7.0;
    within_time(
        outcome(
            ok,
            format!(
                "1024: avg a {:.5} in [0.123, 0.127], avg err {:.3}% <= 0.6; 16: avg err {:.3}% <= 7",
                big.a.avg, big.err_pct.avg, small.err_pct.avg
            ),
        ),
        start.elapsed(),
        Duration::from_secs(120),
    )
}

fn iqae_table() -> Outcome {
    let config = table_config(6, Backend::Analytic).unwrap();
    let Algorithm::Iqae {
        epsilon,
        alpha,
        ratio,
    } = config.algorithm
    else {
        unreachable!()
    };
    let oracle = config.oracle().unwrap();
    let shots = 1024;
    let cfg = IqaeConfig {
        epsilon,
        alpha,
        shots_per_round: shots,
        ratio,
    };
    let (mut err, mut calls, mut widest, mut capped) = (0.0, 0.0, 0.0f64, 0);
    for rep in 0..config.repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(config.repetition_seed(shots, rep));
        let (r, cap) = iqae_report(run_iqae(&oracle, &cfg, Backend::Analytic, &mut rng));
        err += 100.0 * (r.a_hat - A_TRUE).abs() / A_TRUE;
        calls += r.oracle_calls as f64;
        widest = widest.max(r.a_hi - r.a_lo);
        capped += cap as u32;
    }
    let n = config.repetitions as f64;
    let (err, calls) = (err / n, calls / n);
    let ok = err <= 1.0
        && (16452.0 / 2.0..=16452.0 * 2.0).contains(&calls)
        && widest <= 2.0 * epsilon
        && capped == 0;
    outcome(
        ok,
        format!(
            "avg err {err:.3}% <= 1.0, avg calls {calls:.1} in [8226, 32904], \
             widest a-interval {widest:.5} <= {}, capped runs {capped}",
            2.0 * epsilon
        ),
    )
}

fn iqae_coverage() -> Outcome {
    let oracle = OracleSpec::from_amplitude(10, A_TRUE).unwrap();
    let cfg = IqaeConfig::new(0.01, 0.05, 1024);
    let runs = 500;
    let covered = (0..runs)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(70_000 + seed);
            let (r, _) = iqae_report(run_iqae(&oracle, &cfg, Backend::Analytic, &mut rng));
            r.a_lo <= A_TRUE && A_TRUE <= r.a_hi
        })
        .count();
    let rate = covered as f64 / runs as f64;
    outcome(
        rate >= 0.9,
        format!("{covered}/{runs} = {:.1}% >= 90%", 100.0 * rate),
    )
}

fn budget_ordering() -> Outcome {
    let mci_rows = run_sweep(&table_config(1, Backend::Analytic).unwrap()).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for table in 2..=9u8 {
        let config = table_config(table, Backend::Analytic).unwrap();
        let budget = matched_budget(config.domain_qubits);
        let mci = cell(&mci_rows, budget).err_pct.avg;
        let quantum = error_at_budget(&run_sweep(&config).unwrap(), budget);
        let ratio = quantum / mci;
        ok &= ratio <= 0.5;
        lines.push(format!("t{table} {:.3}", ratio));
    }
    outcome(
        ok,
        format!(
            "error / MCI error at 2^qubits calls, each <= 0.5: {}",
            lines.join(", ")
        ),
    )
}

fn mle_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let schedule = eis_schedule(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let theta: f64 = rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
        let records: Vec<_> = schedule
            .powers()
            .iter()
            .map(|&p| {
                MeasurementRecord::new(
                    p,
                    10_000,
                    (10_000.0 * flag_probability_at(theta, p)).round() as u64,
                )
            })
            .collect();
        let a_hat = maximize_likelihood(&records).sin().powi(2);
        worst = worst.max((a_hat - theta.sin().powi(2)).abs());
    }
    outcome(
        worst < 1e-3,
        format!("50 angles, max |a_hat - a| = {worst:.2e} < 1e-3"),
    )
}

fn determinism() -> Outcome {
    let base = std::env::temp_dir().join(format!("qae-acceptance-{}", std::process::id()));
    let run = |dir: &Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_qae"))
            .args(["reproduce", "--table", "5", "--out"])
            .arg(dir)
            .status()
            .expect("spawn qae");
        assert!(status.success());
        std::fs::read(dir.join("table5.csv")).expect("table5.csv")
    };
    let (first, second) = (run(&base.join("a")), run(&base.join("b")));
    let _ = std::fs::remove_dir_all(&base);
    outcome(
        first == second && !first.is_empty(),
        format!("{} bytes, identical: {}", first.len(), first == second),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("rotation identity", rotation_identity),
        ("Q unitarity", unitarity),
        ("oracle accounting", oracle_accounting),
        ("MCI table", mci_table),
        ("MLQAE 10 qubits m=4", mlqae_table),
        ("IQAE 10 qubits eps=0.01", iqae_table),
        ("IQAE coverage", iqae_coverage),
        ("matched-budget accuracy vs MCI", budget_ordering),
        ("MLE consistency", mle_consistency),
        ("reproduce determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!(
            "{} {:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        failed += !o.passed as u32;
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() as u32 - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
