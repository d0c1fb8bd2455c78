//! Presets for the published benchmark tables and the accuracy-vs-budget
//! figure, with fixed seeds so every run writes identical files.
//!
//! | table | algorithm | qubits | parameters        |
//! |-------|-----------|--------|-------------------|
//! | 1     | MCI       | -      | 1024, 16384 samples, 10 000 reps |
//! | 2     | MLQAE     | 10     | EIS, m = 3        |
//! | 3     | MLQAE     | 10     | EIS, m = 4        |
//! | 4     | MLQAE     | 14     | EIS, m = 3        |
//! | 5     | MLQAE     | 14     | EIS, m = 4        |
//! | 6     | IQAE      | 10     | epsilon = 0.01    |
//! | 7     | IQAE      | 10     | epsilon = 0.005   |
//! | 8     | IQAE      | 14     | epsilon = 0.01    |
//! | 9     | IQAE      | 14     | epsilon = 0.005   |
//!
//! Quantum tables sweep shots 16, 32, ..., 1024 with 30 repetitions each,
//! `a = 1/8`, `alpha = 0.05`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qae_core::{Backend, ScheduleKind};

use crate::bench::{
    emit_csv, emit_plot_data, run_sweep, Algorithm, ExperimentConfig, PlotKind, SummaryRow,
    SweepError,
};

pub const TABLE_COUNT: u8 = 9;
pub const SHOTS: [u64; 7] = [16, 32, 64, 128, 256, 512, 1024];
pub const A_TRUE: f64 = 0.125;
pub const QUANTUM_REPS: u64 = 30;
pub const MCI_REPS: u64 = 10_000;
pub const MCI_SAMPLES: [u64; 2] = [1 << 10, 1 << 14];

/// Base seed of table `n`.
pub fn default_seed(table: u8) -> u64 {
    20_210_000 + table as u64
}

pub fn table_config(table: u8, backend: Backend) -> Option<ExperimentConfig> {
    let quantum = |qubits: u32, algorithm: Algorithm| ExperimentConfig {
        algorithm,
        domain_qubits: qubits,
        a_true: A_TRUE,
        shots_list: SHOTS.to_vec(),
        repetitions: QUANTUM_REPS,
        base_seed: default_seed(table),
        backend,
    };
    let mlqae = |m| Algorithm::Mlqae {
        m,
        kind: ScheduleKind::Eis,
    };
    let iqae = |epsilon| Algorithm::Iqae {
        epsilon,
        alpha: 0.05,
        ratio: 2,
    };
    Some(match table {
        1 => ExperimentConfig {
            algorithm: Algorithm::Mci,
            domain_qubits: 14,
            a_true: A_TRUE,
            shots_list: MCI_SAMPLES.to_vec(),
            repetitions: MCI_REPS,
            base_seed: default_seed(1),
            backend,
        },
        2 => quantum(10, mlqae(3)),
        3 => quantum(10, mlqae(4)),
        4 => quantum(14, mlqae(3)),
        5 => quantum(14, mlqae(4)),
        6 => quantum(10, iqae(0.01)),
        7 => quantum(10, iqae(0.005)),
        8 => quantum(14, iqae(0.01)),
        9 => quantum(14, iqae(0.005)),
        _ => return None,
    })
}

#[derive(Debug)]
pub struct Written {
    pub rows: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReproduceError {
    #[error("no table {0}; tables are numbered 1..={TABLE_COUNT}")]
    UnknownTable(u8),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn write_file(path: PathBuf, bytes: &[u8]) -> Result<PathBuf, ReproduceError> {
    fs::write(&path, bytes).map_err(|source| ReproduceError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes `<stem>.csv` and one `<stem>_<plot>.dat` per plot kind.
pub fn write_outputs(
    rows: &[SummaryRow],
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>, ReproduceError> {
    fs::create_dir_all(dir).map_err(|source| ReproduceError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut csv = Vec::new();
    emit_csv(rows, &mut csv).expect("writing to memory");
    let mut files = vec![write_file(dir.join(format!("{stem}.csv")), &csv)?];
    for kind in PlotKind::ALL {
        let table = emit_plot_data(rows, kind).to_string();
        files.push(write_file(
            dir.join(format!("{stem}_{}.dat", kind.name())),
            table.as_bytes(),
        )?);
    }
    Ok(files)
}

pub fn reproduce_table(
    table: u8,
    backend: Backend,
    out_dir: &Path,
) -> Result<Written, ReproduceError> {
    let config = table_config(table, backend).ok_or(ReproduceError::UnknownTable(table))?;
    let rows = run_sweep(&config)?;
    let files = write_outputs(&rows, out_dir, &format!("table{table}"))?;
    Ok(Written { rows, files })
}

/// Sample counts at which the classical baseline is evaluated for the
/// accuracy-vs-budget comparison: powers of two spanning the quantum
/// methods' oracle-call range.
pub const FIGURE_BUDGETS: [u64; 9] = [256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536];

/// Relative error against oracle calls for every quantum preset on a
/// domain plus the classical baseline at [`FIGURE_BUDGETS`].
///
/// Writes `fig16_q<qubits>_<method>.dat` and `fig16_mci.dat`.
pub fn reproduce_figure16(
    backend: Backend,
    mci_reps: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, ReproduceError> {
    fs::create_dir_all(out_dir).map_err(|source| ReproduceError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for table in 2..=TABLE_COUNT {
        let config = table_config(table, backend).expect("preset exists");
        let rows = run_sweep(&config)?;
        let label = match config.algorithm {
            Algorithm::Mlqae { m, .. } => format!("mlqae_m{m}"),
            Algorithm::Iqae { epsilon, .. } => format!("iqae_eps{epsilon}"),
            Algorithm::Mci => unreachable!("tables 2..=9 are quantum"),
        };
        let data = emit_plot_data(&rows, PlotKind::ErrVsCalls).to_string();
        files.push(write_file(
            out_dir.join(format!("fig16_q{}_{label}.dat", config.domain_qubits)),
            data.as_bytes(),
        )?);
    }
    let mci = ExperimentConfig {
        algorithm: Algorithm::Mci,
        domain_qubits: 14,
        a_true: A_TRUE,
        shots_list: FIGURE_BUDGETS.to_vec(),
        repetitions: mci_reps,
        base_seed: default_seed(16),
        backend,
    };
    let rows = run_sweep(&mci)?;
    let data = emit_plot_data(&rows, PlotKind::ErrVsCalls).to_string();
    files.push(write_file(out_dir.join("fig16_mci.dat"), data.as_bytes())?);
    Ok(files)
}

/// Classical sample count matched to a quantum domain of `qubits` qubits.
pub fn matched_budget(qubits: u32) -> u64 {
    1 << qubits
}

/// Average relative error of a quantum sweep at `budget` oracle calls,
/// interpolated linearly in `ln(calls)` between the bracketing cells.
///
/// Outside the covered range the nearest cell is used; above the range that
/// cell spends fewer calls than `budget`, so the comparison never favours the
/// quantum method.
///
/// # Panics
///
/// If `rows` is empty.
pub fn error_at_budget(rows: &[SummaryRow], budget: u64) -> f64 {
    assert!(!rows.is_empty(), "no sweep cells");
    let mut points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.calls.avg.ln(), r.err_pct.avg))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let x = (budget as f64).ln();
    let (first, last) = (points[0], points[points.len() - 1]);
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|p| p.0 < x);
    let (lo, hi) = (points[i - 1], points[i]);
    if hi.0 == lo.0 {
        return hi.1;
    }
    lo.1 + (hi.1 - lo.1) * (x - lo.0) / (hi.0 - lo.0)
}
