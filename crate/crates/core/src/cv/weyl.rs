use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock::{displacement_matrix_cv, ComplexPoint, FockMode};
use crate::error::{mismatch, Error, Result};
use crate::par::Exec;
use crate::state::{inner, StateVector};

/// Upper bound on the number of product-grid points in a multimode entropy.
pub const ENTROPY_POINT_LIMIT: usize = 5_000_000;

/// Cartesian midpoint rule for `int d^2 z` over the disc `|z| <= radius`:
/// cell centres on a square lattice of pitch `spacing`, each weighted by
/// `spacing^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radius: f64,
    spacing: f64,
    nodes: Vec<ComplexPoint>,
}

impl QuadratureGrid {
    pub fn new(radius: f64, spacing: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid needs positive radius and spacing, got R = {radius}, h = {spacing}"
            )));
        }
        let half = (radius / spacing).ceil() as i64;
        let mut nodes = Vec::new();
        for i in -half..half {
            for j in -half..half {
                let z = Complex64::new((i as f64 + 0.5) * spacing, (j as f64 + 0.5) * spacing);
                if z.norm() <= radius {
                    nodes.push(z);
                }
            }
        }
        Ok(Self {
            radius,
            spacing,
            nodes,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[ComplexPoint] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Same disc with half the spacing.
    pub fn refined(&self) -> Self {
        Self::new(self.radius, self.spacing / 2.0).expect("already validated")
    }
}

fn modes_of(state: &StateVector) -> Vec<FockMode> {
    state
        .dims()
        .dims()
        .iter()
        .map(|&d| FockMode::new(d - 1).expect("dims are >= 2"))
        .collect()
}

fn check_modes(state: &StateVector, zs: &[ComplexPoint]) -> Result<()> {
    if zs.len() != state.dims().len() {
        return Err(mismatch(
            format!("{} displacement amplitudes", state.dims().len()),
            zs.len(),
        ));
    }
    Ok(())
}

fn sandwich(state: &StateVector, mats: &[&DMatrix<Complex64>]) -> Complex64 {
    let mut v = state.clone();
    for (i, m) in mats.iter().enumerate() {
        v = v
            .apply_local(m, &[i])
            .expect("mode matrix matches its mode");
    }
    inner(state, &v).expect("same register")
}

/// Multimode Weyl function `<psi| D(z_1) ... D(z_N) |psi>`, one amplitude per
/// mode; every register qudit is a truncated mode of dimension `cutoff + 1`.
pub fn weyl_function(state: &StateVector, zs: &[ComplexPoint]) -> Result<Complex64> {
    check_modes(state, zs)?;
    let mats: Vec<DMatrix<Complex64>> = modes_of(state)
        .iter()
        .zip(zs)
        .map(|(m, &z)| displacement_matrix_cv(m, z))
        .collect();
    Ok(sandwich(state, &mats.iter().collect::<Vec<_>>()))
}

/// `p_psi(z) = |W_psi(z)|^2 / pi^N`.
pub fn weyl_distribution(state: &StateVector, zs: &[ComplexPoint]) -> Result<f64> {
    let w = weyl_function(state, zs)?;
    Ok(w.norm_sqr() / PI.powi(zs.len() as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylEntropy {
    /// `-int p ln p`, in nats, over the product grid.
    pub entropy: f64,
    /// `int p` over the same grid; should be close to 1.
    pub normalization: f64,
}

/// Differential entropy of `p_psi` over the product of `grid` across modes.
pub fn weyl_entropy(state: &StateVector, grid: &QuadratureGrid) -> Result<WeylEntropy> {
    weyl_entropy_with(state, grid, Exec::default())
}

pub fn weyl_entropy_with(
    state: &StateVector,
    grid: &QuadratureGrid,
    exec: Exec,
) -> Result<WeylEntropy> {
    let modes = modes_of(state);
    let per_mode = grid.nodes().len();
    let points = per_mode
        .checked_pow(modes.len() as u32)
        .filter(|&p| p <= ENTROPY_POINT_LIMIT)
        .ok_or(Error::BudgetExceeded {
            what: "Weyl entropy product grid",
            required: per_mode.saturating_pow(modes.len() as u32),
            limit: ENTROPY_POINT_LIMIT,
        })?;
    // D(z) for every node, per mode
    let tables: Vec<Vec<DMatrix<Complex64>>> = modes
        .iter()
        .map(|m| exec.map_collect(per_mode, |i| displacement_matrix_cv(m, grid.nodes()[i])))
        .collect();
    let norm = PI.powi(modes.len() as i32);
    let w = grid.weight().powi(modes.len() as i32);
    let terms = exec.map_collect(points, |mut flat| {
        let mut mats = Vec::with_capacity(modes.len());
        for t in tables.iter().rev() {
            mats.push(&t[flat % per_mode]);
            flat /= per_mode;
        }
        mats.reverse();
        let p = sandwich(state, &mats).norm_sqr() / norm;
        let h = if p > 0.0 { -p * p.ln() } else { 0.0 };
        (w * p, w * h)
    });
    let (normalization, entropy) = terms
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    Ok(WeylEntropy {
        entropy,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv::fock::coherent_state;
    use crate::state::tensor;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_area_approximates_disc() {
        let g = QuadratureGrid::new(6.0, 0.1).unwrap();
        let area = g.weight() * g.nodes().len() as f64;
        assert!((area - PI * 36.0).abs() / (PI * 36.0) < 1e-2);
        assert!(QuadratureGrid::new(0.0, 0.1).is_err());
        assert!(QuadratureGrid::new(1.0, -0.1).is_err());
    }

    #[test]
    fn weyl_function_examples() {
        let mode = FockMode::new(40).unwrap();
        let vac = mode.number_state(0).unwrap();
        let one = mode.number_state(1).unwrap();
        let w = c(0.9, -0.4);
        let coh = coherent_state(&mode, w).state;
        for z in [c(0.5, 0.2), c(-1.0, 1.3), c(0.0, 0.0)] {
            let g = (-z.norm_sqr() / 2.0).exp();
            assert!((weyl_function(&vac, &[z]).unwrap() - g).norm() < 1e-12);
            assert!((weyl_function(&one, &[z]).unwrap() - (1.0 - z.norm_sqr()) * g).norm() < 1e-12);
            let expect = Complex64::from_polar(g, 2.0 * (z * w.conj()).im);
            assert!((weyl_function(&coh, &[z]).unwrap() - expect).norm() < 1e-10);
            assert_relative_eq!(
                weyl_distribution(&coh, &[z]).unwrap(),
                g * g / PI,
                epsilon = 1e-10
            );
            assert_relative_eq!(
                weyl_distribution(&one, &[z]).unwrap(),
                (1.0 - z.norm_sqr()).powi(2) * g * g / PI,
                epsilon = 1e-12
            );
        }
        assert!(weyl_function(&vac, &[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn multimode_weyl_function_factorizes() {
        let mode = FockMode::new(12).unwrap();
        let a = coherent_state(&mode, c(0.3, 0.1)).state;
        let b = mode.number_state(1).unwrap();
        let zs = [c(0.4, -0.2), c(-0.7, 0.5)];
        let joint = weyl_function(&tensor(&a, &b), &zs).unwrap();
        let split = weyl_function(&a, &zs[..1]).unwrap() * weyl_function(&b, &zs[1..]).unwrap();
        assert!((joint - split).norm() < 1e-12);
    }

    #[test]
    fn vacuum_entropy() {
        let mode = FockMode::new(40).unwrap();
        let grid = QuadratureGrid::new(6.0, 0.1).unwrap();
        let s = weyl_entropy(&mode.number_state(0).unwrap(), &grid).unwrap();
        assert!((s.entropy - (1.0 + PI.ln())).abs() < 5e-3, "{s:?}");
        assert!((s.normalization - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fock_one_has_more_entropy_and_converges() {
        let grid = QuadratureGrid::new(6.0, 0.1).unwrap();
        let vac =
            weyl_entropy(&FockMode::new(20).unwrap().number_state(0).unwrap(), &grid).unwrap();
        let s20 =
            weyl_entropy(&FockMode::new(20).unwrap().number_state(1).unwrap(), &grid).unwrap();
        let s40 =
            weyl_entropy(&FockMode::new(40).unwrap().number_state(1).unwrap(), &grid).unwrap();
        assert!(s40.entropy > vac.entropy + 0.1);
        assert!((s20.entropy - s40.entropy).abs() < 1e-3);
    }

    #[test]
    fn small_radius_reports_poor_normalization() {
        let mode = FockMode::new(10).unwrap();
        let s = weyl_entropy(
            &mode.number_state(0).unwrap(),
            &QuadratureGrid::new(1.0, 0.1).unwrap(),
        )
        .unwrap();
        assert!(s.normalization < 0.9);
    }

    #[test]
    fn two_mode_entropy_is_additive_for_products() {
        let mode = FockMode::new(6).unwrap();
        let grid = QuadratureGrid::new(5.0, 0.25).unwrap();
        let vac = mode.number_state(0).unwrap();
        let one = mode.number_state(1).unwrap();
        let s0 = weyl_entropy(&vac, &grid).unwrap();
        let s1 = weyl_entropy(&one, &grid).unwrap();
        let joint = weyl_entropy(&tensor(&vac, &one), &grid).unwrap();
        assert!((joint.entropy - s0.entropy - s1.entropy).abs() < 1e-6);
        assert!((joint.normalization - 1.0).abs() < 1e-3);
    }

    #[test]
    fn entropy_grid_budget() {
        let mode = FockMode::new(2).unwrap();
        let psi = tensor(
            &tensor(
                &mode.number_state(0).unwrap(),
                &mode.number_state(0).unwrap(),
            ),
            &mode.number_state(0).unwrap(),
        );
        let grid = QuadratureGrid::new(6.0, 0.1).unwrap();
        assert!(matches!(
            weyl_entropy(&psi, &grid),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
