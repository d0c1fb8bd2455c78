//! Repetition sweeps over shot counts, summary statistics, and the CSV and
//! plot-data writers.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use qae_core::rng::derive_seed;
use qae_core::{
    mci_estimate, run_iqae, run_mlqae, Backend, IqaeConfig, IqaeError, OracleError, OracleSpec,
    ScheduleKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Exact CSV header, in [`SummaryRow`] field order.
pub const CSV_HEADER: &str = "shots,max_a,avg_a,min_a,std_a,max_err_pct,avg_err_pct,min_err_pct,std_err_pct,max_calls,avg_calls,min_calls,std_calls";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Mlqae {
        m: u32,
        kind: ScheduleKind,
    },
    Iqae {
        epsilon: f64,
        alpha: f64,
        ratio: u64,
    },
    /// Classical hit-or-miss; the shot count is the sample count.
    Mci,
}

impl Algorithm {
    /// Stable tag mixed into repetition seeds.
    fn seed_tag(&self) -> u64 {
        match self {
            Algorithm::Mlqae { .. } => 1,
            Algorithm::Iqae { .. } => 2,
            Algorithm::Mci => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Mlqae { .. } => "mlqae",
            Algorithm::Iqae { .. } => "iqae",
            Algorithm::Mci => "mci",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub domain_qubits: u32,
    pub a_true: f64,
    pub shots_list: Vec<u64>,
    pub repetitions: u64,
    pub base_seed: u64,
    pub backend: Backend,
}

impl ExperimentConfig {
    /// The oracle realizing `a_true` on the domain register.
    pub fn oracle(&self) -> Result<OracleSpec, OracleError> {
        OracleSpec::from_amplitude(self.domain_qubits, self.a_true)
    }

    /// Seed of repetition `rep` in the cell for `shots`.
    pub fn repetition_seed(&self, shots: u64, rep: u64) -> u64 {
        derive_seed(&[self.base_seed, self.algorithm.seed_tag(), shots, rep])
    }
}

/// `(max, avg, min, std)` of a sample, `std` being the population
/// (divide-by-N) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub max: f64,
    pub avg: f64,
    pub min: f64,
    pub std: f64,
}

/// # Panics
/// On an empty slice.
pub fn summarize(values: &[f64]) -> Summary {
    assert!(!values.is_empty(), "cannot summarize an empty sample");
    let n = values.len() as f64;
    let avg = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - avg) * (v - avg)).sum::<f64>() / n;
    Summary {
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        avg,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        std: var.sqrt(),
    }
}

/// One sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub shots: u64,
    pub a: Summary,
    pub err_pct: Summary,
    pub calls: Summary,
    /// Repetitions that stopped at the IQAE round cap. Their partial
    /// estimates still enter the statistics.
    pub capped_runs: u64,
}

/// Result of one repetition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub a_hat: f64,
    pub oracle_calls: u64,
    pub capped: bool,
}

impl Outcome {
    /// `100 |a_hat - a| / a`.
    pub fn err_pct(&self, a_true: f64) -> f64 {
        relative_error_pct(self.a_hat, a_true)
    }
}

pub fn relative_error_pct(estimate: f64, truth: f64) -> f64 {
    100.0 * (estimate - truth).abs() / truth
}

#[derive(Debug)]
pub enum SweepError {
    Oracle(OracleError),
    InvalidIqae(IqaeError),
    EmptyShots,
    NoRepetitions,
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::Oracle(e) => write!(f, "{e}"),
            SweepError::InvalidIqae(e) => write!(f, "{e}"),
            SweepError::EmptyShots => f.write_str("shots list is empty"),
            SweepError::NoRepetitions => f.write_str("repetition count must be positive"),
        }
    }
}

impl std::error::Error for SweepError {}

impl From<OracleError> for SweepError {
    fn from(e: OracleError) -> Self {
        SweepError::Oracle(e)
    }
}

/// Runs repetition `rep` of the cell for `shots` on its own seeded stream.
pub fn run_repetition(
    config: &ExperimentConfig,
    oracle: &OracleSpec,
    shots: u64,
    rep: u64,
) -> Result<Outcome, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.repetition_seed(shots, rep));
    match config.algorithm {
        Algorithm::Mlqae { m, kind } => {
            let report = run_mlqae(oracle, m, shots, kind, config.backend, &mut rng);
            Ok(Outcome {
                a_hat: report.a_hat,
                oracle_calls: report.oracle_calls,
                capped: false,
            })
        }
        Algorithm::Iqae {
            epsilon,
            alpha,
            ratio,
        } => {
            let cfg = IqaeConfig {
                epsilon,
                alpha,
                shots_per_round: shots,
                ratio,
            };
            match run_iqae(oracle, &cfg, config.backend, &mut rng) {
                Ok(report) => Ok(Outcome {
                    a_hat: report.a_hat,
                    oracle_calls: report.oracle_calls,
                    capped: false,
                }),
                Err(IqaeError::IterationCap(report)) => Ok(Outcome {
                    a_hat: report.a_hat,
                    oracle_calls: report.oracle_calls,
                    capped: true,
                }),
                Err(e) => Err(SweepError::InvalidIqae(e)),
            }
        }
        Algorithm::Mci => Ok(Outcome {
            a_hat: mci_estimate(config.a_true, shots, &mut rng),
            oracle_calls: shots,
            capped: false,
        }),
    }
}

/// All repetitions of one cell, in repetition order.
pub fn run_cell(config: &ExperimentConfig, shots: u64) -> Result<Vec<Outcome>, SweepError> {
    let oracle = config.oracle()?;
    (0..config.repetitions)
        .into_par_iter()
        .map(|rep| run_repetition(config, &oracle, shots, rep))
        .collect()
}

pub fn summarize_cell(shots: u64, a_true: f64, outcomes: &[Outcome]) -> SummaryRow {
    let a: Vec<f64> = outcomes.iter().map(|o| o.a_hat).collect();
    let err: Vec<f64> = outcomes.iter().map(|o| o.err_pct(a_true)).collect();
    let calls: Vec<f64> = outcomes.iter().map(|o| o.oracle_calls as f64).collect();
    SummaryRow {
        shots,
        a: summarize(&a),
        err_pct: summarize(&err),
        calls: summarize(&calls),
        capped_runs: outcomes.iter().filter(|o| o.capped).count() as u64,
    }
}

/// One [`SummaryRow`] per entry of `shots_list`, in list order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SummaryRow>, SweepError> {
    if config.shots_list.is_empty() || config.shots_list.contains(&0) {
        return Err(SweepError::EmptyShots);
    }
    if config.repetitions == 0 {
        return Err(SweepError::NoRepetitions);
    }
    config
        .shots_list
        .iter()
        .map(|&shots| {
            let outcomes = run_cell(config, shots)?;
            Ok(summarize_cell(shots, config.a_true, &outcomes))
        })
        .collect()
}

/// `%.6g`-style formatting: six significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so the exponent reflects the printed mantissa.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus one line per row.
pub fn emit_csv<W: Write>(rows: &[SummaryRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let fields = [
            r.a.max,
            r.a.avg,
            r.a.min,
            r.a.std,
            r.err_pct.max,
            r.err_pct.avg,
            r.err_pct.min,
            r.err_pct.std,
            r.calls.max,
            r.calls.avg,
            r.calls.min,
            r.calls.std,
        ];
        write!(out, "{}", r.shots)?;
        for f in fields {
            write!(out, ",{}", format_sig6(f))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    ErrVsShots,
    AVsShots,
    CallsVsShots,
    ErrVsCalls,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [
        PlotKind::ErrVsShots,
        PlotKind::AVsShots,
        PlotKind::CallsVsShots,
        PlotKind::ErrVsCalls,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PlotKind::ErrVsShots => "err_vs_shots",
            PlotKind::AVsShots => "a_vs_shots",
            PlotKind::CallsVsShots => "calls_vs_shots",
            PlotKind::ErrVsCalls => "err_vs_calls",
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown plot kind `{s}`"))
    }
}

/// Numeric columns `x, y_avg, y_min, y_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub columns: [&'static str; 4],
    pub rows: Vec<[f64; 4]>,
}

impl fmt::Display for PlotTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.columns.join(" "))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format_sig6(*v)).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

type Columns = fn(&SummaryRow) -> [f64; 4];

/// Plot-ready view of a sweep, sorted by the x column.
pub fn emit_plot_data(rows: &[SummaryRow], kind: PlotKind) -> PlotTable {
    let (columns, pick): ([&'static str; 4], Columns) = match kind {
        PlotKind::ErrVsShots => (
            ["shots", "avg_err_pct", "min_err_pct", "max_err_pct"],
            |r| [r.shots as f64, r.err_pct.avg, r.err_pct.min, r.err_pct.max],
        ),
        PlotKind::AVsShots => (["shots", "avg_a", "min_a", "max_a"], |r| {
            [r.shots as f64, r.a.avg, r.a.min, r.a.max]
        }),
        PlotKind::CallsVsShots => (["shots", "avg_calls", "min_calls", "max_calls"], |r| {
            [r.shots as f64, r.calls.avg, r.calls.min, r.calls.max]
        }),
        PlotKind::ErrVsCalls => (
            ["avg_calls", "avg_err_pct", "min_err_pct", "max_err_pct"],
            |r| [r.calls.avg, r.err_pct.avg, r.err_pct.min, r.err_pct.max],
        ),
    };
    let mut data: Vec<[f64; 4]> = rows.iter().map(pick).collect();
    data.sort_by(|a, b| a[0].total_cmp(&b[0]));
    PlotTable {
        columns,
        rows: data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_examples() {
        let s = summarize(&[1.0, 2.0, 3.0]);
        assert_eq!((s.max, s.avg, s.min), (3.0, 2.0, 1.0));
        assert!((s.std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);

        let s = summarize(&[5.0]);
        assert_eq!((s.max, s.avg, s.min, s.std), (5.0, 5.0, 5.0, 0.0));

        let s = summarize(&[0.123, 0.127, 0.125]);
        assert_eq!((s.max, s.min), (0.127, 0.123));
        assert!((s.avg - 0.125).abs() < 1e-15);
        // Two-pass check: E[x^2] - E[x]^2.
        let ex2 = (0.123f64.powi(2) + 0.127f64.powi(2) + 0.125f64.powi(2)) / 3.0;
        assert!((s.std - (ex2 - s.avg * s.avg).sqrt()).abs() < 1e-9);
        assert!((s.std - 0.001_633).abs() < 1e-6);
    }

    #[test]
    #[should_panic(expected = "empty")]
    fn summary_of_nothing() {
        summarize(&[]);
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(18432.0), "18432");
        assert_eq!(format_sig6(0.125), "0.125");
        assert_eq!(format_sig6(6.644_812_3), "6.64481");
        assert_eq!(format_sig6(16452.267), "16452.3");
        assert_eq!(format_sig6(1_234_567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.000_012_345_67), "1.23457e-05");
        assert_eq!(format_sig6(0.000_123_456_7), "0.000123457");
        assert_eq!(format_sig6(9.999_999_7), "10");
        assert_eq!(format_sig6(-2.5), "-2.5");
    }

    fn row(shots: u64, a: f64) -> SummaryRow {
        let s = summarize(&[a]);
        SummaryRow {
            shots,
            a: s,
            err_pct: summarize(&[relative_error_pct(a, 0.125)]),
            calls: summarize(&[18.0 * shots as f64]),
            capped_runs: 0,
        }
    }

    #[test]
    fn csv_shape() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));

        let mut buf = Vec::new();
        emit_csv(&[row(1024, 0.126)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert_eq!(line.split(',').count(), 13);
        assert!(line.starts_with("1024,0.126,0.126,0.126,0,0.8,"));
        assert!(line.ends_with(",18432,18432,18432,0"));
    }

    #[test]
    fn plot_tables() {
        let rows = [row(64, 0.12), row(16, 0.13), row(32, 0.125)];
        let t = emit_plot_data(&rows, PlotKind::ErrVsShots);
        let xs: Vec<f64> = t.rows.iter().map(|r| r[0]).collect();
        assert_eq!(xs, vec![16.0, 32.0, 64.0]);
        let t = emit_plot_data(&rows, PlotKind::ErrVsCalls);
        assert_eq!(t.rows[0][0], 18.0 * 16.0);
        let text = emit_plot_data(&rows, PlotKind::AVsShots).to_string();
        assert!(text.starts_with("# shots avg_a min_a max_a\n"));
        assert_eq!(text.lines().count(), 4);
        assert_eq!("err_vs_calls".parse(), Ok(PlotKind::ErrVsCalls));
    }
}
