//! Dense state vectors and density matrices over a qudit register.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::DimSpec;
use crate::error::{mismatch, Error, Result};

/// Tolerance used when a routine requires a normalized input.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: DimSpec,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(dims: DimSpec, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != dims.total_dim() {
            return Err(mismatch(
                format!("{} amplitudes for dims {dims}", dims.total_dim()),
                amps.len(),
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self { dims, amps })
    }

    /// The computational basis state with the given index.
    pub fn basis(dims: DimSpec, index: usize) -> Result<Self> {
        if index >= dims.total_dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dims {dims}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.total_dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    pub fn zero(dims: DimSpec) -> Self {
        Self::basis(dims, 0).expect("index 0 always exists")
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        self.amps.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub(crate) fn require_dims(&self, dims: &DimSpec) -> Result<()> {
        if &self.dims != dims {
            return Err(mismatch(dims, &self.dims));
        }
        Ok(())
    }

    /// Applies `gate` (acting on the qudits at `targets`, in that order) and
    /// leaves the rest of the register untouched.
    pub fn apply_local(&self, gate: &DMatrix<Complex64>, targets: &[usize]) -> Result<Self> {
        let local = targets_dim(&self.dims, targets)?;
        if gate.nrows() != local || gate.ncols() != local {
            return Err(mismatch(
                format!("{local}x{local} gate"),
                format!("{}x{}", gate.nrows(), gate.ncols()),
            ));
        }
        let split = Split::new(&self.dims, targets);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut block = vec![Complex64::new(0.0, 0.0); local];
        for rest in 0..split.rest_dim {
            for (l, slot) in block.iter_mut().enumerate() {
                *slot = self.amps[split.join(l, rest)];
            }
            for r in 0..local {
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, &x) in block.iter().enumerate() {
                    acc += gate[(r, l)] * x;
                }
                out[split.join(r, rest)] = acc;
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps: out,
        })
    }

    /// Applies a full-register matrix.
    pub fn apply_matrix(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        let all: Vec<usize> = (0..self.dims.len()).collect();
        self.apply_local(u, &all)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let v = DVector::from_column_slice(&self.amps);
        DensityMatrix {
            dims: self.dims.clone(),
            mat: &v * v.adjoint(),
        }
    }
}

fn targets_dim(dims: &DimSpec, targets: &[usize]) -> Result<usize> {
    let mut seen = vec![false; dims.len()];
    for &t in targets {
        if t >= dims.len() || seen[t] {
            return Err(Error::InvalidPartition(format!(
                "target {t} is out of range or repeated for dims {dims}"
            )));
        }
        seen[t] = true;
    }
    Ok(dims.subsystem_dim(targets))
}

/// Factorization of basis indices into (selected qudits, remaining qudits),
/// both big-endian in register order of their own positions.
pub(crate) struct Split {
    sel_strides: Vec<(usize, usize)>,
    rest_strides: Vec<(usize, usize)>,
    pub sel_dim: usize,
    pub rest_dim: usize,
}

impl Split {
    pub fn new(dims: &DimSpec, selected: &[usize]) -> Self {
        let n = dims.len();
        let mut stride = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * dims.dims()[i + 1];
        }
        let rest: Vec<usize> = (0..n).filter(|i| !selected.contains(i)).collect();
        let pick = |ps: &[usize]| -> Vec<(usize, usize)> {
            ps.iter().map(|&p| (dims.dims()[p], stride[p])).collect()
        };
        Self {
            sel_strides: pick(selected),
            rest_strides: pick(&rest),
            sel_dim: dims.subsystem_dim(selected),
            rest_dim: dims.subsystem_dim(&rest),
        }
    }

    fn spread(mut index: usize, strides: &[(usize, usize)]) -> usize {
        let mut out = 0;
        for &(d, s) in strides.iter().rev() {
            out += (index % d) * s;
            index /= d;
        }
        out
    }

    /// Full-register index of (selected index, remaining index).
    pub fn join(&self, sel: usize, rest: usize) -> usize {
        Self::spread(sel, &self.sel_strides) + Self::spread(rest, &self.rest_strides)
    }
}

/// A set of qudit positions; the complement is implied by the register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    positions: Vec<usize>,
}

impl Partition {
    pub fn new(dims: &DimSpec, positions: impl Into<Vec<usize>>) -> Result<Self> {
        let mut positions = positions.into();
        let before = positions.len();
        positions.sort_unstable();
        positions.dedup();
        if positions.len() != before {
            return Err(Error::InvalidPartition("repeated qudit position".into()));
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= dims.len()) {
            return Err(Error::InvalidPartition(format!(
                "position {p} out of range for {} qudits",
                dims.len()
            )));
        }
        Ok(Self { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn complement(&self, dims: &DimSpec) -> Vec<usize> {
        (0..dims.len())
            .filter(|i| !self.positions.contains(i))
            .collect()
    }

    pub(crate) fn validate(&self, dims: &DimSpec) -> Result<()> {
        Partition::new(dims, self.positions.clone()).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: DimSpec,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(dims: DimSpec, mat: DMatrix<Complex64>) -> Result<Self> {
        let n = dims.total_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(mismatch(
                format!("{n}x{n} matrix for dims {dims}"),
                format!("{}x{}", mat.nrows(), mat.ncols()),
            ));
        }
        Ok(Self { dims, mat })
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Traces out every qudit not in `keep`; the result is ordered by `keep`.
    pub fn partial_trace(&self, keep: &Partition) -> Result<DensityMatrix> {
        keep.validate(&self.dims)?;
        if keep.positions().is_empty() {
            return Err(Error::InvalidPartition(
                "cannot keep an empty subsystem".into(),
            ));
        }
        let split = Split::new(&self.dims, keep.positions());
        let out = DMatrix::from_fn(split.sel_dim, split.sel_dim, |r, c| {
            (0..split.rest_dim)
                .map(|k| self.mat[(split.join(r, k), split.join(c, k))])
                .sum()
        });
        DensityMatrix::new(self.dims.subsystem(keep.positions())?, out)
    }
}

/// Kronecker product, first factor most significant.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amps
        .iter()
        .flat_map(|&x| b.amps.iter().map(move |&y| x * y))
        .collect();
    StateVector {
        dims: a.dims.concat(&b.dims),
        amps,
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dims != b.dims {
        return Err(mismatch(&a.dims, &b.dims));
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `rho_A = Tr_B |psi><psi|` for `A = part`.
pub fn reduced_density(state: &StateVector, part: &Partition) -> Result<DensityMatrix> {
    part.validate(state.dims())?;
    state.require_normalized()?;
    if part.positions().is_empty() {
        return Err(Error::InvalidPartition("subsystem A is empty".into()));
    }
    let split = Split::new(state.dims(), part.positions());
    // psi reshaped as a dim_A x dim_B matrix, so rho_A = M M^dagger
    let m = DMatrix::from_fn(split.sel_dim, split.rest_dim, |a, b| {
        state.amps[split.join(a, b)]
    });
    DensityMatrix::new(state.dims.subsystem(part.positions())?, &m * m.adjoint())
}

/// Normalized vector of i.i.d. standard complex Gaussian amplitudes,
/// deterministic in `seed`.
pub fn random_state(dims: &DimSpec, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..dims.total_dim())
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    StateVector {
        dims: dims.clone(),
        amps,
    }
    .normalized()
    .expect("a Gaussian vector is nonzero almost surely")
}

/// Square matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    })
}
