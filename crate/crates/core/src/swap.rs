//! SWAP as an average of anti-correlated displacements, transpose and partial
//! transpose as displacement sums, and the negativity built on them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{DimSpec, DisplacementOp, PhasePoint};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::state::{DensityMatrix, Partition};

/// Largest register dimension for which the doubled-space SWAP is built densely.
pub const SWAP_DIM_LIMIT: usize = 32;
/// Largest register dimension accepted by the transpose sums.
pub const TRANSPOSE_DIM_LIMIT: usize = 256;
/// Tolerance for the Hermiticity precondition of [`negativity`].
pub const HERMITIAN_TOL: f64 = 1e-8;

fn check_budget(what: &'static str, required: usize, limit: usize) -> Result<()> {
    if required > limit {
        return Err(Error::BudgetExceeded {
            what,
            required,
            limit,
        });
    }
    Ok(())
}

/// `(1/D) sum_mu T_mu^dagger (x) T_mu` on `H (x) H`.
pub fn swap_by_displacements(dims: &DimSpec) -> Result<DMatrix<Complex64>> {
    swap_by_displacements_with(dims, Exec::default())
}

pub fn swap_by_displacements_with(dims: &DimSpec, exec: Exec) -> Result<DMatrix<Complex64>> {
    let d = dims.total_dim();
    check_budget("doubled-space SWAP", d, SWAP_DIM_LIMIT)?;
    // For each label: forward action of T_mu and of T_mu^dagger.
    let ops: Vec<(DisplacementOp, Vec<usize>, Vec<Complex64>)> =
        exec.map_collect(dims.label_count(), |i| {
            let op = DisplacementOp::new(dims, &PhasePoint::from_index(dims, i))
                .expect("enumerated labels are canonical");
            let mut inv_t = vec![0; d];
            let mut inv_p = vec![Complex64::new(0.0, 0.0); d];
            for (j, (&t, &p)) in op.targets().iter().zip(op.phases()).enumerate() {
                inv_t[t] = j;
                inv_p[t] = p.conj();
            }
            (op, inv_t, inv_p)
        });
    let scale = 1.0 / d as f64;
    let mut out = DMatrix::<Complex64>::zeros(d * d, d * d);
    exec.for_each_chunk_mut(out.as_mut_slice(), d * d, |col, column| {
        let (j1, j2) = (col / d, col % d);
        for (op, inv_t, inv_p) in &ops {
            let row = inv_t[j1] * d + op.targets()[j2];
            column[row] += inv_p[j1] * op.phases()[j2] * scale;
        }
    });
    Ok(out)
}

/// The permutation `|f>|g> -> |g>|f>` on `H (x) H`.
pub fn exact_swap(dims: &DimSpec) -> Result<DMatrix<Complex64>> {
    let d = dims.total_dim();
    check_budget("doubled-space SWAP", d, SWAP_DIM_LIMIT)?;
    let mut out = DMatrix::zeros(d * d, d * d);
    for j1 in 0..d {
        for j2 in 0..d {
            out[(j2 * d + j1, j1 * d + j2)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(out)
}

/// `(1/D) sum_mu T_mu rho conj(T_mu)`, which equals `rho^T`.
pub fn transpose_by_displacements(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let all: Vec<usize> = (0..rho.dims().len()).collect();
    displacement_transpose(rho, &all, Exec::default())
}

/// Partial transpose on the qudits in `part`:
/// `(1/dim H_B) sum_{mu_B} (I (x) T_{mu_B}) rho (I (x) conj(T_{mu_B}))`.
pub fn partial_transpose(rho: &DensityMatrix, part: &Partition) -> Result<DensityMatrix> {
    partial_transpose_with(rho, part, Exec::default())
}

pub fn partial_transpose_with(
    rho: &DensityMatrix,
    part: &Partition,
    exec: Exec,
) -> Result<DensityMatrix> {
    part.validate(rho.dims())?;
    displacement_transpose(rho, part.positions(), exec)
}

fn displacement_transpose(
    rho: &DensityMatrix,
    positions: &[usize],
    exec: Exec,
) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let n = dims.total_dim();
    check_budget("displacement transpose", n, TRANSPOSE_DIM_LIMIT)?;
    if positions.is_empty() {
        return Ok(rho.clone());
    }
    let local = dims.subsystem(positions)?;
    let ops: Vec<DisplacementOp> = exec.map_collect(local.label_count(), |i| {
        let mu = PhasePoint::embed(dims, positions, &PhasePoint::from_index(&local, i))
            .expect("positions validated");
        DisplacementOp::new(dims, &mu).expect("embedded label is canonical")
    });
    let scale = 1.0 / local.total_dim() as f64;
    let m = rho.matrix();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    // (T rho T*)_{t(i), l} = p_i rho_{i, t(l)} conj(p_l)
    exec.for_each_chunk_mut(out.as_mut_slice(), n, |l, column| {
        for op in &ops {
            let (t, p) = (op.targets(), op.phases());
            let right = p[l].conj() * scale;
            let src = t[l];
            for i in 0..n {
                column[t[i]] += p[i] * m[(i, src)] * right;
            }
        }
    });
    DensityMatrix::new(dims.clone(), out)
}

/// Partial transpose by exchanging the row and column digits of `part`.
pub fn partial_transpose_direct(rho: &DensityMatrix, part: &Partition) -> Result<DensityMatrix> {
    part.validate(rho.dims())?;
    let dims = rho.dims();
    let n = dims.total_dim();
    let m = rho.matrix();
    let out = DMatrix::from_fn(n, n, |r, c| {
        let mut dr = dims.digits(r);
        let mut dc = dims.digits(c);
        for &p in part.positions() {
            std::mem::swap(&mut dr[p], &mut dc[p]);
        }
        m[(dims.index(&dr), dims.index(&dc))]
    });
    DensityMatrix::new(dims.clone(), out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Negativity {
    /// `(||rho^PT||_1 - 1) / 2`.
    pub negativity: f64,
    /// `ln ||rho^PT||_1`.
    pub log_negativity: f64,
    pub trace_norm: f64,
    /// Eigenvalues of the partial transpose, ascending.
    pub spectrum: Vec<f64>,
}

/// Negativity of `rho` with respect to transposing the qudits in `part`.
pub fn negativity(rho: &DensityMatrix, part: &Partition) -> Result<Negativity> {
    let dev = rho.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let pt = partial_transpose(rho, part)?;
    let spectrum = hermitian_spectrum(pt.matrix());
    let trace_norm: f64 = spectrum.iter().map(|x| x.abs()).sum();
    Ok(Negativity {
        negativity: (trace_norm - 1.0) / 2.0,
        log_negativity: trace_norm.ln(),
        trace_norm,
        spectrum,
    })
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn hermitian_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
