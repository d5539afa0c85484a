//! Truncated-mode checks against series and closed forms written out here.

use std::f64::consts::PI;

use num_complex::Complex64;
use weylswap_core::cv::{
    coherent_matrix_element, coherent_overlap, coherent_state, cv_swap_quadrature,
    displacement_element, displacement_matrix_cv, gaussian_ops, rotation, squeezing,
    swap_convergence, weyl_distribution, weyl_entropy, weyl_function, FockMode, QuadratureGrid,
};
use weylswap_core::{tensor, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

// <m| e^{-|z|^2/2} e^{z a^dag} e^{-conj(z) a} |n>, summed term by term.
fn normal_ordered_series(m: usize, n: usize, z: Complex64) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for k in 0..=m.min(n) {
        acc += z.powu((m - k) as u32) * (-z.conj()).powu((n - k) as u32)
            / (factorial(m - k) * factorial(n - k) * factorial(k));
    }
    acc * (factorial(m) * factorial(n)).sqrt() * (-z.norm_sqr() / 2.0).exp()
}

#[test]
fn elements_match_the_normal_ordered_series() {
    for z in [c(0.3, -0.4), c(-1.1, 0.7), c(1.9, 0.2), c(0.0, 2.0)] {
        for m in 0..14 {
            for n in 0..14 {
                let got = displacement_element(m, n, z);
                let want = normal_ordered_series(m, n, z);
                assert!(
                    (got - want).norm() < 1e-10,
                    "({m},{n}) at {z}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn element_examples() {
    let z = c(0.6, -0.8);
    let g = (-z.norm_sqr() / 2.0).exp();
    assert!((displacement_element(0, 0, z) - g).norm() < 1e-15);
    assert!((displacement_element(1, 0, z) - z * g).norm() < 1e-15);
    assert!((displacement_element(1, 1, z) - (1.0 - z.norm_sqr()) * g).norm() < 1e-15);
}

#[test]
fn conjugate_symmetry() {
    let mode = FockMode::new(30).unwrap();
    for z in [c(1.2, -0.3), c(-0.4, 1.7)] {
        let d = displacement_matrix_cv(&mode, z);
        let dm = displacement_matrix_cv(&mode, -z);
        assert!((d.adjoint() - dm).camax() < 1e-10);
    }
}

#[test]
fn coherent_overlap_and_weyl_function() {
    let mode = FockMode::new(40).unwrap();
    let (u, w) = (c(0.4, 0.9), c(-1.0, 0.2));
    let a = coherent_state(&mode, u).state;
    let b = coherent_state(&mode, w).state;
    let ov = weylswap_core::inner(&a, &b).unwrap();
    assert!((ov - coherent_overlap(u, w)).norm() < 1e-12);
    for z in [c(0.5, 0.5), c(-1.3, 0.0)] {
        let want = Complex64::from_polar((-z.norm_sqr() / 2.0).exp(), 2.0 * (z * w.conj()).im);
        assert!((weyl_function(&b, &[z]).unwrap() - want).norm() < 1e-10);
        // |W|^2 / pi does not depend on w
        let p = weyl_distribution(&b, &[z]).unwrap();
        assert!((p - (-z.norm_sqr()).exp() / PI).abs() < 1e-10);
    }
}

#[test]
fn normalization_of_low_states() {
    let mode = FockMode::new(40).unwrap();
    let grid = QuadratureGrid::new(6.0, 0.1).unwrap();
    let states: Vec<StateVector> = vec![
        mode.number_state(0).unwrap(),
        coherent_state(&mode, c(1.5, 0.0)).state,
        coherent_state(&mode, c(-0.6, -1.2)).state,
        mode.number_state(1).unwrap(),
        mode.number_state(2).unwrap(),
    ];
    for s in &states {
        let n = weyl_entropy(s, &grid).unwrap().normalization;
        assert!((0.999..=1.001).contains(&n), "{n}");
    }
}

#[test]
fn entropy_is_invariant_under_gaussian_ops() {
    let mode = FockMode::new(40).unwrap();
    let grid = QuadratureGrid::new(6.0, 0.1).unwrap();
    let mut amps = vec![c(0.0, 0.0); mode.dim()];
    amps[0] = c(0.6, 0.0);
    amps[1] = c(0.0, 0.8);
    let inputs = [
        mode.number_state(0).unwrap(),
        coherent_state(&mode, c(0.5, 0.5)).state,
        mode.number_state(1).unwrap(),
        StateVector::new(mode.dims(), amps).unwrap(),
    ];
    let ops = gaussian_ops(&mode, c(0.7, -0.4), 1.1, c(0.3, 0.0));
    for s in &inputs {
        let before = weyl_entropy(s, &grid).unwrap().entropy;
        for op in &ops {
            let after = weyl_entropy(&s.apply_matrix(&op.matrix).unwrap(), &grid)
                .unwrap()
                .entropy;
            let tol = if op.name == "squeezing" { 2e-2 } else { 5e-3 };
            assert!(
                (after - before).abs() < tol,
                "{}: {before} -> {after}",
                op.name
            );
        }
    }
    // rotation and squeezing compose with a complex squeezing parameter
    let sq = squeezing(&mode, Complex64::from_polar(0.3, 0.9));
    let rotated = rotation(&mode, 0.45);
    let s = inputs[0]
        .apply_matrix(&sq)
        .unwrap()
        .apply_matrix(&rotated)
        .unwrap();
    let after = weyl_entropy(&s, &grid).unwrap().entropy;
    assert!((after - (1.0 + PI.ln())).abs() < 2e-2);
}

#[test]
fn two_mode_weyl_function_factorizes() {
    let mode = FockMode::new(10).unwrap();
    let a = coherent_state(&mode, c(0.2, -0.3)).state;
    let b = mode.number_state(2).unwrap();
    let zs = [c(0.1, 0.4), c(-0.6, -0.2)];
    let joint = weyl_function(&tensor(&a, &b), &zs).unwrap();
    let split = weyl_function(&a, &zs[..1]).unwrap() * weyl_function(&b, &zs[1..]).unwrap();
    assert!((joint - split).norm() < 1e-12);
}

#[test]
fn quadrature_swap_on_coherent_pairs() {
    let mode = FockMode::new(24).unwrap();
    let grid = QuadratureGrid::new(6.0, 0.15).unwrap();
    let s = cv_swap_quadrature(&mode, &grid).unwrap();
    let pts = [c(0.0, 0.0), c(1.0, 0.0), c(-0.6, 0.8), c(0.3, -0.5)];
    for &u1 in &pts {
        for &u2 in &pts {
            for &w1 in &pts {
                for &w2 in &pts {
                    let got = coherent_matrix_element(&s, &mode, (u1, u2), (w1, w2));
                    let want = coherent_overlap(u1, w2) * coherent_overlap(u2, w1);
                    assert!((got - want).norm() < 1e-2);
                }
            }
        }
    }
}

#[test]
fn quadrature_swap_is_converged_in_spacing() {
    let mode = FockMode::new(12).unwrap();
    let conv = swap_convergence(&mode, &QuadratureGrid::new(6.0, 0.2).unwrap(), 3).unwrap();
    assert!(conv.relative_change < 0.1, "{conv:?}");
    assert!(conv.error_fine < 1e-3, "{conv:?}");
}
