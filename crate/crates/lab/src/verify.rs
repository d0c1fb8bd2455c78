//! Brute-force checks of the simulation core against dense linear algebra
//! and direct enumeration. Backs the `verify` subcommand and the acceptance
//! suite.

use std::f64::consts::PI;

use num_complex::Complex64;
use qae_core::binomial::clopper_pearson;
use qae_core::iqae::{find_next_k, ConfidenceInterval, BOUNDARY_TOL};
use qae_core::statevector::simulated_flag_probability;
use qae_core::{analytic_flag_probability, prepare_a, OracleSpec, Statevector};

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    dim: usize,
    data: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Dense {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Dense::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn mul(&self, rhs: &Dense) -> Dense {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Dense {
        let mut out = Dense::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Dense) -> Dense {
        let n = self.dim * rhs.dim;
        let mut out = Dense::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        out.set(
                            i * rhs.dim + k,
                            j * rhs.dim + l,
                            self.get(i, j) * rhs.get(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &Dense) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

fn real(rows: &[&[f64]]) -> Dense {
    let mut m = Dense::zeros(rows.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m.set(i, j, Complex64::new(*v, 0.0));
        }
    }
    m
}

/// `A = M (H^n x I)` built gate by gate.
pub fn dense_a(oracle: &OracleSpec) -> Dense {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = real(&[&[h, h], &[h, -h]]);
    let mut hn = Dense::identity(1);
    for _ in 0..oracle.qubits() {
        hn = hn.kron(&hadamard);
    }
    let layer = hn.kron(&Dense::identity(2));
    // Marking: flag flip on good domain indices.
    let dim = layer.dim();
    let mut mark = Dense::zeros(dim);
    for d in 0..dim / 2 {
        let (i0, i1) = (2 * d, 2 * d + 1);
        if oracle.is_good(d as u64) {
            mark.set(i0, i1, Complex64::new(1.0, 0.0));
            mark.set(i1, i0, Complex64::new(1.0, 0.0));
        } else {
            mark.set(i0, i0, Complex64::new(1.0, 0.0));
            mark.set(i1, i1, Complex64::new(1.0, 0.0));
        }
    }
    mark.mul(&layer)
}

/// `I^n x Z`.
pub fn dense_s_chi(qubits: u32) -> Dense {
    Dense::identity(1 << qubits).kron(&real(&[&[1.0, 0.0], &[0.0, -1.0]]))
}

/// `I - 2 |0><0|`.
pub fn dense_s_0(qubits: u32) -> Dense {
    let mut m = Dense::identity(1 << (qubits + 1));
    m.set(0, 0, Complex64::new(-1.0, 0.0));
    m
}

/// `Q = A S_0 A^dagger S_chi` from explicit matrices.
pub fn dense_q(oracle: &OracleSpec) -> Dense {
    let a = dense_a(oracle);
    a.mul(&dense_s_0(oracle.qubits()))
        .mul(&a.adjoint())
        .mul(&dense_s_chi(oracle.qubits()))
}

/// Matrix of the matrix-free `apply_q`, one basis column at a time.
pub fn probe_q(oracle: &OracleSpec) -> Dense {
    let dim = 1usize << (oracle.qubits() + 1);
    let mut m = Dense::zeros(dim);
    for col in 0..dim {
        let mut s = Statevector::basis(oracle.qubits(), col);
        s.apply_q(oracle);
        for (row, amp) in s.amplitudes().iter().enumerate() {
            m.set(row, col, *amp);
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn oracles_up_to(max_qubits: u32) -> impl Iterator<Item = OracleSpec> {
    (1..=max_qubits).flat_map(|n| (0..=1u64 << n).map(move |k| OracleSpec::new(n, k).unwrap()))
}

/// `Q Q^dagger = I` for every `n <= max_qubits`, every `K`.
pub fn check_unitarity(max_qubits: u32, tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    for o in oracles_up_to(max_qubits) {
        let q = probe_q(&o);
        let dev = q.mul(&q.adjoint()).max_abs_diff(&Dense::identity(q.dim()));
        worst = worst.max(dev);
    }
    CheckResult {
        name: "Q unitarity (column probes)",
        passed: worst <= tol,
        detail: format!("n <= {max_qubits}, max |QQ^+ - I| = {worst:.3e} (tol {tol:.0e})"),
    }
}

/// Matrix-free `Q` equals the explicit product of gate matrices.
pub fn check_dense_equivalence(max_qubits: u32, tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    let explicit = OracleSpec::with_good_set(2, [1]).unwrap();
    for o in oracles_up_to(max_qubits).chain(std::iter::once(explicit)) {
        worst = worst.max(probe_q(&o).max_abs_diff(&dense_q(&o)));
        let a0 = dense_a(&o).apply(Statevector::zero(o.qubits()).amplitudes());
        let direct = prepare_a(&o);
        let dev = a0
            .iter()
            .zip(direct.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    CheckResult {
        name: "matrix-free A and Q match dense gate products",
        passed: worst <= tol,
        detail: format!("n <= {max_qubits}, max deviation {worst:.3e} (tol {tol:.0e})"),
    }
}

/// Simulated flag probability of `Q^m A|0>` against `sin^2((2m+1) theta)`.
pub fn check_rotation_identity(max_qubits: u32, max_power: u64, tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for o in oracles_up_to(max_qubits) {
        let mut s = prepare_a(&o);
        for m in 0..=max_power {
            if m > 0 {
                s.apply_q(&o);
            }
            let dev = (s.flag_probability() - analytic_flag_probability(&o, m)).abs();
            worst = worst.max(dev);
            cases += 1;
        }
    }
    CheckResult {
        name: "rotation identity sin^2((2m+1) theta)",
        passed: worst < tol,
        detail: format!(
            "{cases} cases, n <= {max_qubits}, m <= {max_power}, max deviation {worst:.3e} (tol {tol:.0e})"
        ),
    }
}

/// Norm stays 1 through long operator sequences.
pub fn check_normalization(tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    for o in oracles_up_to(5) {
        let mut s = prepare_a(&o);
        for step in 0..12 {
            match step % 3 {
                0 => s.apply_s_chi(),
                1 => s.apply_s_0(),
                _ => s.apply_q_power(&o, 3),
            }
            worst = worst.max((s.norm_sqr() - 1.0).abs());
        }
    }
    CheckResult {
        name: "normalization",
        passed: worst <= tol,
        detail: format!("max |norm^2 - 1| = {worst:.3e} (tol {tol:.0e})"),
    }
}

/// Cross-check of the simulated and analytic backends at `n = 10`.
pub fn check_backend_probabilities(tol: f64) -> CheckResult {
    let o = OracleSpec::new(10, 128).unwrap();
    let worst = (0..=8)
        .map(|m| (simulated_flag_probability(&o, m) - analytic_flag_probability(&o, m)).abs())
        .fold(0.0, f64::max);
    CheckResult {
        name: "statevector vs analytic backend at n = 10",
        passed: worst < tol,
        detail: format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    }
}

fn ln_choose(n: u64, k: u64) -> f64 {
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    match p {
        p if p <= 0.0 => (k == 0) as u8 as f64,
        p if p >= 1.0 => (k == n) as u8 as f64,
        p => (ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp(),
    }
}

fn bisect(f: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Clopper-Pearson bounds from explicit Binomial tail sums.
pub fn tail_sum_interval(hits: u64, shots: u64, alpha: f64) -> (f64, f64) {
    let lo = if hits == 0 {
        0.0
    } else {
        bisect(|p| {
            (hits..=shots)
                .map(|k| binomial_pmf(shots, k, p))
                .sum::<f64>()
                < alpha / 2.0
        })
    };
    let hi = if hits == shots {
        1.0
    } else {
        bisect(|p| (0..=hits).map(|k| binomial_pmf(shots, k, p)).sum::<f64>() > alpha / 2.0)
    };
    (lo, hi)
}

pub fn check_clopper_pearson(tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    for shots in [1u64, 2, 5, 10, 16, 33, 100, 1024] {
        for hits in (0..=shots).step_by((shots / 8).max(1) as usize) {
            for alpha in [0.05, 0.05 / 7.0, 1e-3] {
                let (lo, hi) = clopper_pearson(hits, shots, alpha);
                let (lo_ref, hi_ref) = tail_sum_interval(hits, shots, alpha);
                worst = worst.max((lo - lo_ref).abs()).max((hi - hi_ref).abs());
            }
        }
    }
    CheckResult {
        name: "Clopper-Pearson vs Binomial tail sums",
        passed: worst <= tol,
        detail: format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    }
}

/// Largest `k` whose scaled interval lies between consecutive multiples of
/// `pi`, by exhaustive scan.
pub fn brute_force_next_k(lo: f64, hi: f64) -> (u64, bool) {
    let limit = (PI / (hi - lo)).floor() as u64 / 4 + 1;
    (0..=limit)
        .filter_map(|k| {
            let s = (4 * k + 2) as f64;
            let (l, h) = (s * lo, s * hi);
            if h - l > PI + BOUNDARY_TOL {
                return None;
            }
            let j = ((l + BOUNDARY_TOL) / PI).floor();
            (h <= (j + 1.0) * PI + BOUNDARY_TOL).then_some((k, (j as i64) % 2 == 0))
        })
        .next_back()
        .expect("k = 0 always fits")
}

pub fn check_half_plane_search() -> CheckResult {
    let mut mismatches = 0usize;
    let mut cases = 0usize;
    for i in 1..400 {
        let lo = i as f64 * (1.5 / 400.0);
        for width in [1e-4, 1e-3, 7e-3, 0.05, 0.2] {
            let hi = (lo + width).min(std::f64::consts::FRAC_PI_2);
            let got = find_next_k(&ConfidenceInterval::new(lo, hi), 0, 2);
            if got != brute_force_next_k(lo, hi) {
                mismatches += 1;
            }
            cases += 1;
        }
    }
    CheckResult {
        name: "half-plane k search vs exhaustive scan",
        passed: mismatches == 0,
        detail: format!("{cases} intervals, {mismatches} mismatches"),
    }
}

/// Everything `qae verify` runs.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_unitarity(4, 1e-10),
        check_dense_equivalence(3, 1e-12),
        check_rotation_identity(6, 8, 1e-9),
        check_normalization(1e-10),
        check_backend_probabilities(1e-9),
        check_clopper_pearson(1e-9),
        check_half_plane_search(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_three_of_eight_prepares_three_eighths() {
        let o = OracleSpec::new(3, 3).unwrap();
        let v = dense_a(&o).apply(Statevector::zero(3).amplitudes());
        let p: f64 = v.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum();
        assert!((p - 0.375).abs() < 1e-14);
    }

    #[test]
    fn dense_q_squared_on_three_eighths() {
        let o = OracleSpec::new(3, 3).unwrap();
        let a0 = dense_a(&o).apply(Statevector::zero(3).amplitudes());
        let q = dense_q(&o);
        let v = q.apply(&q.apply(&a0));
        let p: f64 = v.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum();
        let theta = 0.375f64.sqrt().asin();
        assert!((p - (5.0 * theta).sin().powi(2)).abs() < 1e-12);

        let mut s = prepare_a(&o);
        s.apply_q_power(&o, 2);
        assert!((s.flag_probability() - p).abs() < 1e-12);
    }

    #[test]
    fn quarter_example_from_dense_product() {
        let o = OracleSpec::with_good_set(2, [1]).unwrap();
        let a0 = dense_a(&o).apply(Statevector::zero(2).amplitudes());
        let v = dense_q(&o).apply(&a0);
        let p: f64 = v.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_sum_reference() {
        let (lo, hi) = tail_sum_interval(5, 10, 0.05);
        assert!((lo - 0.187_086).abs() < 1e-6 && (hi - 0.812_914).abs() < 1e-6);
    }

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
