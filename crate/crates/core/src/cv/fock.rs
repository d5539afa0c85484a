use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::DimSpec;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Complex phase-space amplitude `z` of a displacement `D(z)`.
pub type ComplexPoint = Complex64;

/// One bosonic mode truncated to the number states `|0>, ..., |cutoff>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockMode {
    cutoff: usize,
}

impl FockMode {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidParameter(
                "Fock cutoff must be at least 1".into(),
            ));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of retained levels, `cutoff + 1`.
    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dims(&self) -> DimSpec {
        DimSpec::new(vec![self.dim()]).expect("cutoff >= 1")
    }

    /// `a` with `sqrt(n)` on the first superdiagonal.
    pub fn annihilation(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| {
            if c == r + 1 {
                Complex64::new((c as f64).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn number_state(&self, n: usize) -> Result<StateVector> {
        StateVector::basis(self.dims(), n)
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `L_0^{(k)}(x), ..., L_len-1^{(k)}(x)` by the three-term recurrence.
fn laguerre_row(k: usize, x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let k = k as f64;
    let (mut prev, mut cur) = (0.0, 1.0);
    for i in 0..len {
        out.push(cur);
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + k - x) * cur - (i + k) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    out
}

// sqrt(lo!/hi!) |z|^(hi-lo) exp(-|z|^2/2), evaluated in log space
fn envelope(lo: usize, hi: usize, r: f64) -> f64 {
    let k = hi - lo;
    if r == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (0.5 * (ln_factorial(lo) - ln_factorial(hi)) + k as f64 * r.ln() - 0.5 * r * r).exp()
}

/// `<m| D(z) |n>` from the associated-Laguerre closed form.
pub fn displacement_element(m: usize, n: usize, z: ComplexPoint) -> Complex64 {
    let r = z.norm();
    let x = r * r;
    let unit = if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    if m >= n {
        let k = m - n;
        let lag = laguerre_row(k, x, n + 1)[n];
        unit.powu(k as u32) * (envelope(n, m, r) * lag)
    } else {
        // <m|D(z)|n> = conj(<n|D(-z)|m>)
        let k = n - m;
        let lag = laguerre_row(k, x, m + 1)[m];
        (-unit.conj()).powu(k as u32) * (envelope(m, n, r) * lag)
    }
}

/// Truncated `D(z)`: the analytic matrix elements with indices `<= cutoff`.
///
/// Accurate for `|z|` well inside `sqrt(cutoff)`; only rows and columns near
/// the cutoff lose unitarity.
pub fn displacement_matrix_cv(mode: &FockMode, z: ComplexPoint) -> DMatrix<Complex64> {
    let dim = mode.dim();
    let r = z.norm();
    let x = r * r;
    let unit = if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let lag = laguerre_row(k, x, dim - k);
        let lower = unit.powu(k as u32);
        let upper = (-unit.conj()).powu(k as u32);
        for (n, &l) in lag.iter().enumerate() {
            let amp = envelope(n, n + k, r) * l;
            out[(n + k, n)] = lower * amp;
            if k > 0 {
                out[(n, n + k)] = upper * amp;
            }
        }
    }
    out
}

/// A truncated state together with the norm it lost to the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    /// Renormalized state.
    pub state: StateVector,
    /// `1 - sum |amp|^2` before renormalization.
    pub deficit: f64,
}

/// Coherent state `|w> = D(w)|0>` with amplitudes `exp(-|w|^2/2) w^n / sqrt(n!)`.
pub fn coherent_state(mode: &FockMode, w: ComplexPoint) -> Truncated {
    let r = w.norm();
    let unit = if r > 0.0 {
        w / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    let amps: Vec<Complex64> = (0..mode.dim())
        .map(|n| unit.powu(n as u32) * envelope(0, n, r))
        .collect();
    let state = StateVector::new(mode.dims(), amps).expect("length matches cutoff");
    let deficit = 1.0 - state.norm_sqr();
    Truncated {
        state: state.normalized().expect("coherent amplitudes are nonzero"),
        deficit,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianOp {
    pub name: String,
    pub matrix: DMatrix<Complex64>,
}

/// Phase rotation `exp(i theta a^dagger a)`.
pub fn rotation(mode: &FockMode, theta: f64) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(mode.dim(), |n, _| {
        Complex64::from_polar(1.0, theta * n as f64)
    }))
}

/// Single-mode squeezing `exp((conj(xi) a^2 - xi a^dagger^2) / 2)`, by
/// exponentiating the truncated generator. Intended for `|xi| <= 0.3`.
pub fn squeezing(mode: &FockMode, xi: Complex64) -> DMatrix<Complex64> {
    let a = mode.annihilation();
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    ((a2 * xi.conj() - ad2 * xi) * Complex64::new(0.5, 0.0)).exp()
}

/// Displacement `D(w)`, rotation by `theta` and squeezing by `xi`, in that order.
pub fn gaussian_ops(
    mode: &FockMode,
    w: ComplexPoint,
    theta: f64,
    xi: Complex64,
) -> Vec<GaussianOp> {
    vec![
        GaussianOp {
            name: "displacement".into(),
            matrix: displacement_matrix_cv(mode, w),
        },
        GaussianOp {
            name: "rotation".into(),
            matrix: rotation(mode, theta),
        },
        GaussianOp {
            name: "squeezing".into(),
            matrix: squeezing(mode, xi),
        },
    ]
}
