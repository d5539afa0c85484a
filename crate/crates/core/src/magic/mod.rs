//! Displacement distribution `p_psi(mu) = |<psi|T_mu|psi>|^2 / D`, the
//! stabilizer Renyi entropy built on it, and a sampling estimator of its
//! collision probability.

mod clifford;

pub use clifford::{
    certify_clifford, clifford_generators, clifford_image, random_stabilizer_state, CliffordImage,
    Gate,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{DimSpec, DisplacementOp, PhasePoint};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::state::StateVector;

/// Weights below this are treated as exact zeros in `sum p^alpha` (alpha < 1)
/// and in `p ln p`.
pub const WEIGHT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementDistribution {
    dims: DimSpec,
    weights: Vec<f64>,
}

impl DisplacementDistribution {
    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    /// Weights indexed by [`PhasePoint::index`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, mu: &PhasePoint) -> f64 {
        self.weights[mu.index(&self.dims)]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Number of weights above `tol`.
    pub fn support(&self, tol: f64) -> usize {
        self.weights.iter().filter(|&&w| w > tol).count()
    }

    /// `sum_mu p(mu)^2`.
    pub fn collision(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }
}

pub fn displacement_distribution(state: &StateVector) -> Result<DisplacementDistribution> {
    displacement_distribution_with(state, Exec::default())
}

pub fn displacement_distribution_with(
    state: &StateVector,
    exec: Exec,
) -> Result<DisplacementDistribution> {
    state.require_normalized()?;
    let dims = state.dims();
    let scale = 1.0 / dims.total_dim() as f64;
    let psi = state.amplitudes();
    let weights = exec.map_collect(dims.label_count(), |i| {
        let op = DisplacementOp::new(dims, &PhasePoint::from_index(dims, i))
            .expect("enumerated labels are canonical");
        (op.sandwich(psi, psi).norm_sqr() * scale).max(0.0)
    });
    Ok(DisplacementDistribution {
        dims: dims.clone(),
        weights,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Renyi index must be finite and positive, got {alpha}"
        )));
    }
    Ok(())
}

/// `M_alpha = ln(sum p^alpha) / (1 - alpha) - ln D`, in nats.
///
/// `alpha == 1.0` selects the Shannon limit, see [`stabilizer_shannon`].
pub fn stabilizer_renyi(state: &StateVector, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let dist = displacement_distribution(state)?;
    Ok(renyi_of(&dist, alpha))
}

/// `-sum p ln p - ln D`.
pub fn stabilizer_shannon(state: &StateVector) -> Result<f64> {
    Ok(shannon_of(&displacement_distribution(state)?))
}

pub(crate) fn renyi_of(dist: &DisplacementDistribution, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return shannon_of(dist);
    }
    let sum: f64 = dist
        .weights
        .iter()
        .filter(|&&w| alpha >= 1.0 || w > WEIGHT_FLOOR)
        .map(|w| w.powf(alpha))
        .sum();
    sum.ln() / (1.0 - alpha) - (dist.dims.total_dim() as f64).ln()
}

fn shannon_of(dist: &DisplacementDistribution) -> f64 {
    let h: f64 = dist
        .weights
        .iter()
        .filter(|&&w| w > WEIGHT_FLOOR)
        .map(|w| -w * w.ln())
        .sum();
    h - (dist.dims.total_dim() as f64).ln()
}

/// `sum_mu conj(<psi|T_mu|psi>) <phi|T_mu|phi> / D`, which equals `|<psi|phi>|^2`.
pub fn cross_fidelity(state: &StateVector, other: &StateVector) -> Result<f64> {
    cross_fidelity_with(state, other, Exec::default())
}

pub fn cross_fidelity_with(state: &StateVector, other: &StateVector, exec: Exec) -> Result<f64> {
    other.require_dims(state.dims())?;
    state.require_normalized()?;
    other.require_normalized()?;
    let dims = state.dims();
    let (psi, phi) = (state.amplitudes(), other.amplitudes());
    let total = exec.sum(dims.label_count(), |i| {
        let op = DisplacementOp::new(dims, &PhasePoint::from_index(dims, i))
            .expect("enumerated labels are canonical");
        (op.sandwich(psi, psi).conj() * op.sandwich(phi, phi)).re
    });
    Ok(total / dims.total_dim() as f64)
}

/// `sum_mu |<psi|T_mu|phi>|^2 / D`. This is `<psi|psi><phi|phi>` for any pair,
/// so it is 1 for normalized states and carries no overlap information.
pub fn transition_weight(state: &StateVector, other: &StateVector) -> Result<f64> {
    transition_weight_with(state, other, Exec::default())
}

pub fn transition_weight_with(state: &StateVector, other: &StateVector, exec: Exec) -> Result<f64> {
    other.require_dims(state.dims())?;
    let dims = state.dims();
    let (psi, phi) = (state.amplitudes(), other.amplitudes());
    let total = exec.sum(dims.label_count(), |i| {
        DisplacementOp::new(dims, &PhasePoint::from_index(dims, i))
            .expect("enumerated labels are canonical")
            .sandwich(psi, phi)
            .norm_sqr()
    });
    Ok(total / dims.total_dim() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PuritySampling {
    /// Visit every label once; the result is exact.
    Exhaustive,
    /// Draw labels uniformly with replacement.
    Uniform { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityEstimate {
    /// Estimate of `sum_mu p(mu)^2`.
    pub estimate: f64,
    /// Standard error of the mean; zero when exhaustive, NaN for one sample.
    pub stderr: f64,
    pub samples: usize,
}

const SAMPLE_BLOCK: usize = 1024;

/// Unbiased estimate of `sum_mu p(mu)^2` from uniformly drawn labels: each
/// draw contributes `D^2 p(mu)^2`.
///
/// Samples are drawn in fixed blocks, block `b` using ChaCha stream `b` of
/// `seed`, so the result does not depend on the thread count.
pub fn purity_estimator(state: &StateVector, sampling: PuritySampling) -> Result<PurityEstimate> {
    purity_estimator_with(state, sampling, Exec::default())
}

pub fn purity_estimator_with(
    state: &StateVector,
    sampling: PuritySampling,
    exec: Exec,
) -> Result<PurityEstimate> {
    state.require_normalized()?;
    let dims = state.dims();
    let labels = dims.label_count();
    let psi = state.amplitudes();
    let scale = 1.0 / dims.total_dim() as f64;
    let value = |i: usize| {
        let p = DisplacementOp::new(dims, &PhasePoint::from_index(dims, i))
            .expect("enumerated labels are canonical")
            .sandwich(psi, psi)
            .norm_sqr()
            * scale;
        labels as f64 * p * p
    };
    match sampling {
        PuritySampling::Exhaustive => {
            let sum = exec.sum(labels, value);
            Ok(PurityEstimate {
                estimate: sum / labels as f64,
                stderr: 0.0,
                samples: labels,
            })
        }
        PuritySampling::Uniform { samples, seed } => {
            if samples < 1 {
                return Err(Error::InvalidParameter("need at least one sample".into()));
            }
            let blocks = samples.div_ceil(SAMPLE_BLOCK);
            let partial = exec.map_collect(blocks, |b| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b as u64);
                let n = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
                (0..n).fold((0.0, 0.0), |(s, s2), _| {
                    let x = value(rng.random_range(0..labels));
                    (s + x, s2 + x * x)
                })
            });
            let (s, s2) = partial
                .into_iter()
                .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
            let n = samples as f64;
            let mean = s / n;
            let stderr = if samples > 1 {
                ((s2 - n * mean * mean).max(0.0) / (n - 1.0) / n).sqrt()
            } else {
                f64::NAN
            };
            Ok(PurityEstimate {
                estimate: mean,
                stderr,
                samples,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{inner, random_state, tensor};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn t_state() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(
            DimSpec::new(vec![2]).unwrap(),
            vec![
                Complex64::new(s, 0.0),
                Complex64::from_polar(s, std::f64::consts::FRAC_PI_4),
            ],
        )
        .unwrap()
    }

    fn qudit(d: usize) -> DimSpec {
        DimSpec::new(vec![d]).unwrap()
    }

    #[test]
    fn qubit_zero_distribution() {
        let dims = qudit(2);
        let dist = displacement_distribution(&StateVector::zero(dims.clone())).unwrap();
        let w = |a, b| dist.weight(&PhasePoint::new(&dims, vec![(a, b)]).unwrap());
        assert_relative_eq!(w(0, 0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(w(1, 0), 0.5, epsilon = 1e-15);
        assert!(w(0, 1) < 1e-15 && w(1, 1) < 1e-15);
    }

    #[test]
    fn qutrit_zero_distribution() {
        let dims = qudit(3);
        let dist = displacement_distribution(&StateVector::zero(dims.clone())).unwrap();
        for mu in PhasePoint::all(&dims) {
            let expect = if mu.pairs()[0].1 == 0 { 1.0 / 3.0 } else { 0.0 };
            assert_relative_eq!(dist.weight(&mu), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn t_state_magic() {
        // p = (1/2, 1/4, 1/4, 0) over (I, X, Y, Z) gives sum p^2 = 3/8
        assert_relative_eq!(
            stabilizer_renyi(&t_state(), 2.0).unwrap(),
            (4.0f64 / 3.0).ln(),
            epsilon = 1e-12
        );
        let dist = displacement_distribution(&t_state()).unwrap();
        assert_relative_eq!(dist.collision(), 0.375, epsilon = 1e-14);
    }

    #[test]
    fn stabilizer_examples_vanish() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(qudit(2), vec![Complex64::new(s, 0.0); 2]).unwrap();
        assert!(stabilizer_renyi(&plus, 2.0).unwrap().abs() < 1e-12);
        for dims in [vec![2], vec![3, 2], vec![4, 4]] {
            let zero = StateVector::zero(DimSpec::new(dims).unwrap());
            for alpha in [0.5, 1.0, 2.0, 3.0] {
                assert!(stabilizer_renyi(&zero, alpha).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_alpha_and_unnormalized() {
        assert!(stabilizer_renyi(&t_state(), 0.0).is_err());
        assert!(stabilizer_renyi(&t_state(), -1.0).is_err());
        let raw = StateVector::new(qudit(2), vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(
            displacement_distribution(&raw),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn shannon_limit_is_continuous() {
        let psi = random_state(&DimSpec::new(vec![3, 2]).unwrap(), 4);
        let m1 = stabilizer_renyi(&psi, 1.0).unwrap();
        let near = stabilizer_renyi(&psi, 1.0 + 1e-6).unwrap();
        assert!((m1 - near).abs() < 1e-5);
        assert_eq!(m1, stabilizer_shannon(&psi).unwrap());
    }

    #[test]
    fn normalization_and_cross_fidelity() {
        for dims in [
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![3, 3],
            vec![2, 2, 2],
        ] {
            let dims = DimSpec::new(dims).unwrap();
            for seed in 0..5 {
                let psi = random_state(&dims, seed);
                assert_relative_eq!(
                    displacement_distribution(&psi).unwrap().total(),
                    1.0,
                    epsilon = 1e-9
                );
                let phi = random_state(&dims, seed + 100);
                let direct = inner(&psi, &phi).unwrap().norm_sqr();
                assert_relative_eq!(cross_fidelity(&psi, &phi).unwrap(), direct, epsilon = 1e-9);
            }
        }
        let q = qudit(2);
        let zero = StateVector::zero(q.clone());
        assert_relative_eq!(cross_fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-15);
        let one = StateVector::basis(q, 1).unwrap();
        assert!(cross_fidelity(&zero, &one).unwrap() < 1e-15);
        assert_relative_eq!(
            transition_weight(&zero, &one).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn transition_weight_is_product_of_norms() {
        let dims = DimSpec::new(vec![2, 3]).unwrap();
        let psi = random_state(&dims, 4);
        let phi = random_state(&dims, 5);
        assert_relative_eq!(transition_weight(&psi, &phi).unwrap(), 1.0, epsilon = 1e-12);
        let scaled =
            StateVector::new(dims, phi.amplitudes().iter().map(|a| a * 2.0).collect()).unwrap();
        assert_relative_eq!(
            transition_weight(&psi, &scaled).unwrap(),
            4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn additivity() {
        let a = random_state(&qudit(2), 1);
        let b = random_state(&qudit(3), 2);
        for alpha in [0.5, 2.0, 3.0] {
            let sum = stabilizer_renyi(&a, alpha).unwrap() + stabilizer_renyi(&b, alpha).unwrap();
            assert!((stabilizer_renyi(&tensor(&a, &b), alpha).unwrap() - sum).abs() < 1e-8);
        }
    }

    #[test]
    fn exhaustive_estimator_is_exact() {
        let est = purity_estimator(&t_state(), PuritySampling::Exhaustive).unwrap();
        assert_relative_eq!(est.estimate, 0.375, epsilon = 1e-14);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.samples, 4);
    }

    #[test]
    fn sampled_estimator_converges() {
        let est = purity_estimator(
            &t_state(),
            PuritySampling::Uniform {
                samples: 100_000,
                seed: 3,
            },
        )
        .unwrap();
        assert!((est.estimate - 0.375).abs() < 3.0 * est.stderr, "{est:?}");
        let zero = StateVector::zero(qudit(2));
        let est = purity_estimator(
            &zero,
            PuritySampling::Uniform {
                samples: 20_000,
                seed: 1,
            },
        )
        .unwrap();
        assert!(
            (est.estimate - 0.5).abs() < 4.0 * est.stderr + 1e-12,
            "{est:?}"
        );
        assert!(purity_estimator(
            &zero,
            PuritySampling::Uniform {
                samples: 0,
                seed: 1
            }
        )
        .is_err());
    }

    #[test]
    fn estimator_is_thread_independent() {
        let psi = random_state(&DimSpec::new(vec![2, 3]).unwrap(), 9);
        let s = PuritySampling::Uniform {
            samples: 5000,
            seed: 42,
        };
        let a = purity_estimator_with(&psi, s, Exec::Sequential).unwrap();
        let b = purity_estimator_with(&psi, s, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
