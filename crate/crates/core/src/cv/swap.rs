use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock::{displacement_matrix_cv, ComplexPoint, FockMode};
use super::weyl::QuadratureGrid;
use crate::error::{Error, Result};
use crate::par::Exec;

/// Largest two-mode space, `(cutoff + 1)^2`, for the dense quadrature SWAP.
pub const CV_SWAP_DIM_LIMIT: usize = 1024;

const NODE_BATCH: usize = 512;

/// `sum_nodes (h^2 / pi) D(-z) (x) D(z)` on the truncated two-mode space,
/// approximating `int d^2z / pi D(-z) (x) D(z) = SWAP`.
pub fn cv_swap_quadrature(mode: &FockMode, grid: &QuadratureGrid) -> Result<DMatrix<Complex64>> {
    cv_swap_quadrature_with(mode, grid, Exec::default())
}

pub fn cv_swap_quadrature_with(
    mode: &FockMode,
    grid: &QuadratureGrid,
    exec: Exec,
) -> Result<DMatrix<Complex64>> {
    let dim = mode.dim();
    let k = dim * dim;
    if k > CV_SWAP_DIM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "two-mode quadrature SWAP",
            required: k,
            limit: CV_SWAP_DIM_LIMIT,
        });
    }
    let w = grid.weight() / PI;
    // C[(m1,n1),(m2,n2)] = sum_z w D(-z)_{m1 n1} D(z)_{m2 n2}, as real GEMMs
    // over batches of nodes: C = L^T R with L, R of shape (nodes, k).
    let mut c_re = DMatrix::<f64>::zeros(k, k);
    let mut c_im = DMatrix::<f64>::zeros(k, k);
    for batch in grid.nodes().chunks(NODE_BATCH) {
        let b = batch.len();
        let pairs = exec.map_collect(b, |i| {
            let z = batch[i];
            (
                displacement_matrix_cv(mode, -z),
                displacement_matrix_cv(mode, z),
            )
        });
        let mut l_re = DMatrix::<f64>::zeros(k, b);
        let mut l_im = DMatrix::<f64>::zeros(k, b);
        let mut r_re = DMatrix::<f64>::zeros(b, k);
        let mut r_im = DMatrix::<f64>::zeros(b, k);
        for (i, (minus, plus)) in pairs.iter().enumerate() {
            for m in 0..dim {
                for n in 0..dim {
                    let idx = m * dim + n;
                    let l = minus[(m, n)] * w;
                    l_re[(idx, i)] = l.re;
                    l_im[(idx, i)] = l.im;
                    r_re[(i, idx)] = plus[(m, n)].re;
                    r_im[(i, idx)] = plus[(m, n)].im;
                }
            }
        }
        c_re.gemm(1.0, &l_re, &r_re, 1.0);
        c_re.gemm(-1.0, &l_im, &r_im, 1.0);
        c_im.gemm(1.0, &l_re, &r_im, 1.0);
        c_im.gemm(1.0, &l_im, &r_re, 1.0);
    }
    // reorder into the two-mode basis |m1, m2> <n1, n2|
    Ok(DMatrix::from_fn(k, k, |row, col| {
        let (m1, m2) = (row / dim, row % dim);
        let (n1, n2) = (col / dim, col % dim);
        let (a, b) = (m1 * dim + n1, m2 * dim + n2);
        Complex64::new(c_re[(a, b)], c_im[(a, b)])
    }))
}

/// The permutation `|m1, m2> -> |m2, m1>` on the truncated two-mode space.
pub fn two_mode_swap(mode: &FockMode) -> DMatrix<Complex64> {
    let dim = mode.dim();
    let mut out = DMatrix::zeros(dim * dim, dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            out[(b * dim + a, a * dim + b)] = Complex64::new(1.0, 0.0);
        }
    }
    out
}

/// Frobenius norm of `swap - SWAP` on the block `|m1, m2>`, `m1, m2 <= block`.
pub fn swap_block_error(swap: &DMatrix<Complex64>, mode: &FockMode, block: usize) -> f64 {
    let dim = mode.dim();
    let exact = two_mode_swap(mode);
    let idx: Vec<usize> = (0..=block.min(mode.cutoff()))
        .flat_map(|a| (0..=block.min(mode.cutoff())).map(move |b| a * dim + b))
        .collect();
    idx.iter()
        .flat_map(|&r| idx.iter().map(move |&c| (r, c)))
        .map(|(r, c)| (swap[(r, c)] - exact[(r, c)]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `<u1, u2| S |w1, w2>` with unnormalized truncated coherent states, so the
/// result is directly comparable with `<u1|w2><u2|w1>`.
pub fn coherent_matrix_element(
    swap: &DMatrix<Complex64>,
    mode: &FockMode,
    u: (ComplexPoint, ComplexPoint),
    w: (ComplexPoint, ComplexPoint),
) -> Complex64 {
    let amps = |z: ComplexPoint| -> Vec<Complex64> {
        let mut out = Vec::with_capacity(mode.dim());
        let mut cur = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..mode.dim() {
            if n > 0 {
                cur *= z / (n as f64).sqrt();
            }
            out.push(cur);
        }
        out
    };
    let two = |a: Vec<Complex64>, b: Vec<Complex64>| -> Vec<Complex64> {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| x * y))
            .collect()
    };
    let bra = two(amps(u.0), amps(u.1));
    let ket = two(amps(w.0), amps(w.1));
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, &k) in ket.iter().enumerate() {
        if k == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (r, &b) in bra.iter().enumerate() {
            acc += b.conj() * swap[(r, c)] * k;
        }
    }
    acc
}

/// `<z'|z>` for untruncated coherent states.
pub fn coherent_overlap(zp: ComplexPoint, z: ComplexPoint) -> Complex64 {
    (-(zp.norm_sqr() + z.norm_sqr()) / 2.0 + zp.conj() * z).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapConvergence {
    pub spacing: f64,
    pub block: usize,
    pub error_coarse: f64,
    pub error_fine: f64,
    /// `|error_fine - error_coarse| / error_coarse`.
    pub relative_change: f64,
}

/// Low-block SWAP error at the grid spacing and at half of it.
pub fn swap_convergence(
    mode: &FockMode,
    grid: &QuadratureGrid,
    block: usize,
) -> Result<SwapConvergence> {
    let coarse = swap_block_error(&cv_swap_quadrature(mode, grid)?, mode, block);
    let fine = swap_block_error(&cv_swap_quadrature(mode, &grid.refined())?, mode, block);
    Ok(SwapConvergence {
        spacing: grid.spacing(),
        block,
        error_coarse: coarse,
        error_fine: fine,
        relative_change: (fine - coarse).abs() / coarse,
    })
}
