use qae_core::{measure_flag, Backend, OracleSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

const DRAWS: usize = 10_000;
const SHOTS: u64 = 20;

/// Pearson statistic of observed hit counts against Binomial(SHOTS, p),
/// pooling sparse tail bins until every expected count is at least 5.
fn chi_squared(counts: &[u64], p: f64) -> (f64, usize) {
    let dist = Binomial::new(p, SHOTS).unwrap();
    let mut bins = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (h, &c) in counts.iter().enumerate() {
        obs += c as f64;
        exp += dist.pmf(h as u64) * DRAWS as f64;
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs;
        last.1 += exp;
    }
    let stat = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, bins.len() - 1)
}

#[test]
fn both_backends_sample_the_predicted_binomial() {
    let oracle = OracleSpec::new(6, 11).unwrap();
    for m in [0u64, 1, 3] {
        let p = Backend::Analytic.flag_probability(&oracle, m);
        for (i, backend) in [Backend::Statevector, Backend::Analytic]
            .into_iter()
            .enumerate()
        {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + 10 * m + i as u64);
            let mut counts = vec![0u64; SHOTS as usize + 1];
            for _ in 0..DRAWS {
                counts[measure_flag(backend, &oracle, m, SHOTS, &mut rng) as usize] += 1;
            }
            let (stat, dof) = chi_squared(&counts, p);
            let critical = ChiSquared::new(dof as f64).unwrap().inverse_cdf(0.999);
            assert!(
                stat < critical,
                "{backend} m={m}: chi2 {stat:.2} >= {critical:.2} ({dof} dof)"
            );
        }
    }
}

#[test]
fn backends_agree_on_probabilities() {
    for n in 1..=8u32 {
        for k in [0, 1, (1u64 << n) / 3, 1u64 << n] {
            let oracle = OracleSpec::new(n, k).unwrap();
            for m in 0..6 {
                let sv = Backend::Statevector.flag_probability(&oracle, m);
                let an = Backend::Analytic.flag_probability(&oracle, m);
                assert!((sv - an).abs() < 1e-10, "n={n} k={k} m={m}");
            }
        }
    }
}
