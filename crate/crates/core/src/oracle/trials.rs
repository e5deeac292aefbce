//! Seeded randomized checks of the explicit constructions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GwError, Result};
use crate::ring::RingSpec;
use crate::square_classes::SquareClassGroup;

use super::good::{factor_into_good, is_good_matrix, random_good_matrix, random_unit, verify_factorization};
use super::lemma::{check_default_classes, lemma_self_test, odd_relation_matrix};
use super::matrix::RingMatrix;

#[derive(Debug, Clone, Default)]
pub struct TrialReport {
    pub trials: usize,
    /// Failed trials with a description of the counterexample.
    pub failures: Vec<String>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn record(report: &mut TrialReport, outcome: Result<()>) -> Result<()> {
    report.trials += 1;
    match outcome {
        Ok(()) => Ok(()),
        Err(GwError::Internal(msg)) => {
            report.failures.push(msg);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// The odd-relation matrix identity at random `(a, b, c, d, p, q, r)`, and
/// the square-class identities at random `(a, b, c, d)` with default
/// parameters.
pub fn lemma_trials(spec: RingSpec, trials: usize, seed: u64) -> Result<TrialReport> {
    lemma_self_test()?;
    let classes = SquareClassGroup::compute(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport::default();
    for _ in 0..trials {
        let u: Vec<u64> = (0..7).map(|_| random_unit(spec, &mut rng)).collect();
        let outcome = odd_relation_matrix(spec, [u[0], u[1], u[2], u[3]], [u[4], u[5], u[6]])
            .and_then(|_| check_default_classes(&classes, [u[0], u[1], u[2], u[3]]))
            .map(|_| ());
        record(&mut report, outcome)?;
    }
    Ok(report)
}

/// Random products of good matrices of dimension `2..=max_dim`, factored
/// back into good matrices and re-verified.
pub fn factorization_trials(spec: RingSpec, trials: usize, seed: u64, max_dim: usize) -> Result<TrialReport> {
    if !(2..=4).contains(&max_dim) {
        return Err(GwError::Dimension(format!("max dimension must be 2..=4, got {max_dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport::default();
    for _ in 0..trials {
        let n = rng.gen_range(2..=max_dim);
        let d0: Vec<u64> = (0..n).map(|_| random_unit(spec, &mut rng)).collect();
        let d = RingMatrix::diagonal(spec, &d0);
        let mut running = d0;
        let mut p = RingMatrix::identity(spec, n);
        for _ in 0..rng.gen_range(1..=6) {
            let g = random_good_matrix(spec, &running, &mut rng);
            let cert = is_good_matrix(&g, &RingMatrix::diagonal(spec, &running))?
                .ok_or_else(|| GwError::Internal(format!("generated matrix {g} is not good")))?;
            running = cert.resulting_diagonal;
            p = g.mul(&p)?;
        }
        let outcome = factor_into_good(&p, &d).and_then(|f| {
            let last = verify_factorization(&p, &d, &f)?;
            if last != running {
                return Err(GwError::Internal(format!("P = {p}: factored diagonal differs")));
            }
            Ok(())
        });
        let outcome = outcome.map_err(|e| match e {
            GwError::Internal(m) => GwError::Internal(format!("P = {p}, D = {d}: {m}")),
            other => other,
        });
        record(&mut report, outcome)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_trials_pass() {
        assert!(lemma_trials(RingSpec::z2k(4), 50, 7).unwrap().passed());
        assert!(factorization_trials(RingSpec::trunc2(3), 50, 7, 4).unwrap().passed());
    }
}
