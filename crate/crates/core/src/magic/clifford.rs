//! Numerically certified Clifford gates and stabilizer-state generation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{DimSpec, DisplacementOp, Phase, PhasePoint};
use crate::error::{mismatch, Error, Result};
use crate::state::StateVector;

const CLIFFORD_TOL: f64 = 1e-8;

/// `U T_mu U^dagger = phase * T_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordImage {
    pub target: PhasePoint,
    pub phase: Complex64,
}

/// Finds the displacement that `u` conjugates `T_mu` into, scanning all
/// labels by Hilbert-Schmidt overlap.
pub fn clifford_image(
    u: &DMatrix<Complex64>,
    mu: &PhasePoint,
    dims: &DimSpec,
) -> Result<CliffordImage> {
    let n = dims.total_dim();
    if u.nrows() != n || u.ncols() != n {
        return Err(mismatch(
            format!("{n}x{n} unitary"),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let t = DisplacementOp::new(dims, mu)?.to_dense();
    let conj = u * t * u.adjoint();
    for cand in PhasePoint::all(dims) {
        let op = DisplacementOp::new(dims, &cand)?;
        // Tr(T_cand^dagger M) / D
        let overlap: Complex64 = op
            .targets()
            .iter()
            .zip(op.phases())
            .enumerate()
            .map(|(j, (&t, &p))| p.conj() * conj[(t, j)])
            .sum::<Complex64>()
            / n as f64;
        if (overlap.norm() - 1.0).abs() < CLIFFORD_TOL {
            let phase = overlap / overlap.norm();
            let dev = (&conj - op.to_dense() * phase)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if dev < CLIFFORD_TOL {
                return Ok(CliffordImage {
                    target: cand,
                    phase,
                });
            }
        }
    }
    Err(Error::NotClifford(mu.to_string()))
}

/// Images of every label under `u`. Fails unless `u` maps displacements to
/// displacements and the label map is a bijection.
pub fn certify_clifford(u: &DMatrix<Complex64>, dims: &DimSpec) -> Result<Vec<CliffordImage>> {
    let images = PhasePoint::all(dims)
        .map(|mu| clifford_image(u, &mu, dims))
        .collect::<Result<Vec<_>>>()?;
    let mut hit = vec![false; dims.label_count()];
    for img in &images {
        let i = img.target.index(dims);
        if hit[i] {
            return Err(Error::NotClifford(format!(
                "label map hits {} twice",
                img.target
            )));
        }
        hit[i] = true;
    }
    Ok(images)
}

/// A gate acting on `targets` of a register.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub targets: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
}

fn fourier(d: usize) -> DMatrix<Complex64> {
    let s = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |k, j| {
        Phase::pi_frac(2 * (j * k) as i64, d as i64).value() * s
    })
}

// exp(i pi (j^2 + (d mod 2) j) / d): conjugates X into a multiple of T_{1,1}
// for both parities of d.
fn quadratic_phase(d: usize) -> DMatrix<Complex64> {
    let c = (d % 2) as i64;
    DMatrix::from_fn(d, d, |r, col| {
        if r == col {
            let j = r as i64;
            Phase::pi_frac(j * j + c * j, d as i64).value()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn sum_gate(d: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            m[(j * d + (j + k) % d, j * d + k)] = Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Fourier and quadratic-phase gates on every qudit and the SUM gate on each
/// adjacent pair of equal dimension. Each gate is certified before it is
/// returned.
pub fn clifford_generators(dims: &DimSpec) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for (i, &d) in dims.dims().iter().enumerate() {
        let (f, p) = if d == 2 { ("H", "S") } else { ("F", "P") };
        gates.push(Gate {
            name: f.into(),
            targets: vec![i],
            matrix: fourier(d),
        });
        gates.push(Gate {
            name: p.into(),
            targets: vec![i],
            matrix: quadratic_phase(d),
        });
    }
    for (i, pair) in dims.dims().windows(2).enumerate() {
        if pair[0] == pair[1] {
            let d = pair[0];
            gates.push(Gate {
                name: if d == 2 { "CNOT".into() } else { "SUM".into() },
                targets: vec![i, i + 1],
                matrix: sum_gate(d),
            });
        }
    }
    for g in &gates {
        let local = dims.subsystem(&g.targets)?;
        certify_clifford(&g.matrix, &local)
            .map_err(|_| Error::CertificationFailed(format!("{}{:?}", g.name, g.targets)))?;
    }
    Ok(gates)
}

/// Applies `depth` uniformly chosen generators to `|0...0>`.
pub fn random_stabilizer_state(dims: &DimSpec, depth: usize, seed: u64) -> Result<StateVector> {
    let gates = clifford_generators(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = StateVector::zero(dims.clone());
    for _ in 0..depth {
        let g = &gates[rng.random_range(0..gates.len())];
        state = state.apply_local(&g.matrix, &g.targets)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::{displacement_distribution, stabilizer_renyi};

    fn qudit(d: usize) -> DimSpec {
        DimSpec::new(vec![d]).unwrap()
    }

    #[test]
    fn identity_fixes_every_label() {
        let dims = DimSpec::new(vec![2, 3]).unwrap();
        let id = DMatrix::identity(6, 6);
        for mu in PhasePoint::all(&dims) {
            let img = clifford_image(&id, &mu, &dims).unwrap();
            assert_eq!(img.target, mu);
            assert!((img.phase - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let dims = qudit(2);
        let img = clifford_image(
            &fourier(2),
            &PhasePoint::new(&dims, vec![(1, 0)]).unwrap(),
            &dims,
        )
        .unwrap();
        assert_eq!(img.target.pairs(), &[(0, 1)]);
    }

    #[test]
    fn qutrit_fourier_maps_shift_to_pure_phase() {
        let dims = qudit(3);
        let f = fourier(3);
        let mu = PhasePoint::new(&dims, vec![(0, 1)]).unwrap();
        let img = clifford_image(&f, &mu, &dims).unwrap();
        assert_eq!(img.target.pairs()[0].1, 0);
        assert_ne!(img.target.pairs()[0].0, 0);
        // dense conjugation oracle
        let lhs = &f * crate::algebra::displacement_matrix(3, 0, 1).unwrap() * f.adjoint();
        let (a, b) = img.target.pairs()[0];
        let rhs = crate::algebra::displacement_matrix(3, a as i64, b as i64).unwrap() * img.phase;
        assert!((lhs - rhs).camax() < 1e-12);
    }

    #[test]
    fn t_gate_is_not_clifford() {
        let dims = qudit(2);
        let mut t = DMatrix::identity(2, 2);
        t[(1, 1)] = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let x = PhasePoint::new(&dims, vec![(0, 1)]).unwrap();
        assert!(matches!(
            clifford_image(&t, &x, &dims),
            Err(Error::NotClifford(_))
        ));
        assert!(certify_clifford(&t, &dims).is_err());
    }

    #[test]
    fn generator_sets() {
        let names = |dims: Vec<usize>| -> Vec<String> {
            clifford_generators(&DimSpec::new(dims).unwrap())
                .unwrap()
                .into_iter()
                .map(|g| g.name)
                .collect()
        };
        assert_eq!(names(vec![2, 2]), ["H", "S", "H", "S", "CNOT"]);
        assert_eq!(names(vec![3, 3]), ["F", "P", "F", "P", "SUM"]);
        assert_eq!(names(vec![4]), ["F", "P"]);
        assert_eq!(names(vec![2, 3]), ["H", "S", "F", "P"]);
        for d in 2..=6 {
            assert_eq!(
                clifford_generators(&DimSpec::uniform(d, 2).unwrap())
                    .unwrap()
                    .len(),
                5
            );
        }
    }

    #[test]
    fn label_map_is_a_bijection() {
        for g in clifford_generators(&DimSpec::uniform(3, 2).unwrap()).unwrap() {
            let local = DimSpec::uniform(3, g.targets.len()).unwrap();
            let images = certify_clifford(&g.matrix, &local).unwrap();
            let mut idx: Vec<usize> = images.iter().map(|i| i.target.index(&local)).collect();
            idx.sort_unstable();
            assert_eq!(idx, (0..local.label_count()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn stabilizer_states_have_flat_distributions() {
        for dims in [vec![2, 2], vec![3, 3], vec![2, 2, 2], vec![4], vec![2, 3]] {
            let dims = DimSpec::new(dims).unwrap();
            assert_eq!(
                random_stabilizer_state(&dims, 0, 1).unwrap(),
                StateVector::zero(dims.clone())
            );
            for seed in 0..5 {
                let s = random_stabilizer_state(&dims, 30, seed).unwrap();
                let dist = displacement_distribution(&s).unwrap();
                let n = dims.total_dim();
                assert_eq!(dist.support(1e-8), n);
                for &w in dist.weights() {
                    assert!(w < 1e-8 || (w - 1.0 / n as f64).abs() < 1e-8);
                }
                assert!(stabilizer_renyi(&s, 2.0).unwrap().abs() < 1e-8);
            }
        }
    }
}
