//! Modular index arithmetic and the qudit displacement operators
//! `T_{a,b} = exp(-i pi a b / d) Z^a X^b`.
//!
//! Labels are always stored as canonical representatives in `[0, d)`. For even
//! `d` the operators are only periodic up to a sign, so every reduction returns
//! the phase it introduced instead of dropping it.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{mismatch, Error, Result};
use crate::state::StateVector;

/// Local dimensions of an n-qudit register.
///
/// Basis states are ordered big-endian: `|j_1, ..., j_n>` sits at
/// `sum_i j_i * prod_{k>i} d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimSpec {
    dims: Vec<usize>,
    total: usize,
}

impl DimSpec {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::EmptyRegister);
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::BudgetExceeded {
                what: "register",
                required: usize::MAX,
                limit: usize::MAX,
            })?;
        Ok(Self { dims, total })
    }

    /// A register of `n` qudits of equal dimension `d`.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Number of displacement labels, `total_dim^2`.
    pub fn label_count(&self) -> usize {
        self.total * self.total
    }

    /// Digits of a basis index, most significant qudit first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&j, &d)| acc * d + j)
    }

    /// Product of the local dimensions at `positions` (1 for an empty set).
    pub fn subsystem_dim(&self, positions: &[usize]) -> usize {
        positions.iter().map(|&p| self.dims[p]).product()
    }

    /// Register made of the qudits at `positions`, in the given order.
    pub fn subsystem(&self, positions: &[usize]) -> Result<DimSpec> {
        DimSpec::new(positions.iter().map(|&p| self.dims[p]).collect::<Vec<_>>())
    }

    /// Concatenation of two registers.
    pub fn concat(&self, other: &DimSpec) -> DimSpec {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DimSpec {
            dims,
            total: self.total * other.total,
        }
    }
}

impl fmt::Display for DimSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A unit-modulus phase `exp(i pi num / den)`, kept as an exact rational
/// multiple of pi until it is turned into a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };
    pub const MINUS_ONE: Phase = Phase { num: 1, den: 1 };

    /// `exp(i pi num / den)`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Phase {
            num: num.rem_euclid(2 * den),
            den,
        }
    }

    /// `(-1)^k`.
    pub fn sign(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Phase::ONE
        } else {
            Phase::MINUS_ONE
        }
    }

    /// The phase angle as `(numerator, denominator)` of a multiple of pi,
    /// numerator in `[0, 2 den)`.
    pub fn as_pi_fraction(&self) -> (i64, i64) {
        (self.num, self.den)
    }

    pub fn conj(self) -> Self {
        Phase::pi_frac(-self.num, self.den)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.num as f64 / self.den as f64)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        let den = self.den.lcm(&rhs.den);
        Phase::pi_frac(self.num * (den / self.den) + rhs.num * (den / rhs.den), den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(i pi {}/{})", self.num, self.den)
    }
}

/// A multi-qudit displacement label `mu = (a_1, b_1; ...; a_n, b_n)` with
/// canonical components `0 <= a_i, b_i < d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pairs: Vec<(usize, usize)>,
}

impl PhasePoint {
    pub fn new(dims: &DimSpec, pairs: impl Into<Vec<(usize, usize)>>) -> Result<Self> {
        let pairs = pairs.into();
        if pairs.len() != dims.len() {
            return Err(mismatch(format!("{} label pairs", dims.len()), pairs.len()));
        }
        for (&(a, b), &d) in pairs.iter().zip(dims.dims()) {
            if a >= d || b >= d {
                return Err(Error::InvalidParameter(format!(
                    "label ({a},{b}) is not canonical for d = {d}"
                )));
            }
        }
        Ok(Self { pairs })
    }

    pub fn zero(dims: &DimSpec) -> Self {
        Self {
            pairs: vec![(0, 0); dims.len()],
        }
    }

    /// Reduces arbitrary integer labels to canonical form. The returned phase
    /// satisfies `T_raw = phase * T_canonical`.
    pub fn reduce(dims: &DimSpec, raw: &[(i64, i64)]) -> Result<(Self, Phase)> {
        if raw.len() != dims.len() {
            return Err(mismatch(format!("{} label pairs", dims.len()), raw.len()));
        }
        let mut phase = Phase::ONE;
        let pairs = raw
            .iter()
            .zip(dims.dims())
            .map(|(&(a, b), &d)| {
                let (a0, b0, sign) = reduce_pair(d as i64, a, b);
                phase = phase * sign;
                (a0 as usize, b0 as usize)
            })
            .collect();
        Ok((Self { pairs }, phase))
    }

    /// Label number `index` in the enumeration used for distributions: each
    /// qudit contributes the digit `a_i * d_i + b_i`, combined big-endian.
    pub fn from_index(dims: &DimSpec, mut index: usize) -> Self {
        let mut pairs = vec![(0, 0); dims.len()];
        for (slot, &d) in pairs.iter_mut().zip(dims.dims()).rev() {
            let digit = index % (d * d);
            index /= d * d;
            *slot = (digit / d, digit % d);
        }
        Self { pairs }
    }

    pub fn index(&self, dims: &DimSpec) -> usize {
        self.pairs
            .iter()
            .zip(dims.dims())
            .fold(0, |acc, (&(a, b), &d)| acc * d * d + a * d + b)
    }

    /// Every label of the register, in index order.
    pub fn all(dims: &DimSpec) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..dims.label_count()).map(move |i| PhasePoint::from_index(dims, i))
    }

    /// Lifts a label on the qudits at `positions` to the full register, with
    /// the identity label elsewhere.
    pub fn embed(full: &DimSpec, positions: &[usize], local: &PhasePoint) -> Result<Self> {
        if positions.len() != local.pairs.len() {
            return Err(mismatch(positions.len(), local.pairs.len()));
        }
        let mut pairs = vec![(0, 0); full.len()];
        for (&p, &pair) in positions.iter().zip(&local.pairs) {
            if p >= full.len() {
                return Err(Error::InvalidPartition(format!(
                    "position {p} out of range"
                )));
            }
            pairs[p] = pair;
        }
        PhasePoint::new(full, pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|&p| p == (0, 0))
    }

    fn check(&self, dims: &DimSpec) -> Result<()> {
        if self.pairs.len() != dims.len() {
            return Err(mismatch(
                format!("{} label pairs", dims.len()),
                self.pairs.len(),
            ));
        }
        for (&(a, b), &d) in self.pairs.iter().zip(dims.dims()) {
            if a >= d || b >= d {
                return Err(Error::InvalidParameter(format!(
                    "label ({a},{b}) is not canonical for d = {d}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{a},{b}")?;
        }
        write!(f, ")")
    }
}

// a = a0 + d p, b = b0 + d q  =>  T_{a,b} = (-1)^{a0 q + b0 p + d p q} T_{a0,b0}
fn reduce_pair(d: i64, a: i64, b: i64) -> (i64, i64, Phase) {
    let (p, a0) = (a.div_euclid(d), a.rem_euclid(d));
    let (q, b0) = (b.div_euclid(d), b.rem_euclid(d));
    (a0, b0, Phase::sign(a0 * q + b0 * p + d * p * q))
}

/// Dense `T_{a,b}` on a single qudit, built literally as
/// `exp(-i pi a b / d) Z^a X^b` for any integers `a`, `b`.
pub fn displacement_matrix(d: usize, a: i64, b: i64) -> Result<DMatrix<Complex64>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let di = d as i64;
    let z = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |j, _| {
        Phase::pi_frac(2 * j as i64, di).value()
    }));
    let x = DMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // Z^d = X^d = I exactly, so only the residues matter for the powers.
    let pow = |m: &DMatrix<Complex64>, e: i64| {
        (0..e.rem_euclid(di)).fold(DMatrix::identity(d, d), |acc, _| acc * m)
    };
    let scalar = Phase::pi_frac(-a * b, di).value();
    Ok((pow(&z, a) * pow(&x, b)) * scalar)
}

/// `T_mu` in monomial form: `T_mu |j> = phases[j] |targets[j]>`.
#[derive(Debug, Clone)]
pub struct DisplacementOp {
    targets: Vec<usize>,
    phases: Vec<Complex64>,
}

impl DisplacementOp {
    pub fn new(dims: &DimSpec, mu: &PhasePoint) -> Result<Self> {
        mu.check(dims)?;
        let mut targets = vec![0usize];
        let mut phases = vec![Complex64::new(1.0, 0.0)];
        for (&(a, b), &d) in mu.pairs.iter().zip(dims.dims()) {
            // T_{a,b} |j> = exp(i pi (2 a j + a b) / d) |j + b mod d>
            let table: Vec<Complex64> = (0..d)
                .map(|j| Phase::pi_frac((2 * a * j + a * b) as i64, d as i64).value())
                .collect();
            let mut next_t = Vec::with_capacity(targets.len() * d);
            let mut next_p = Vec::with_capacity(targets.len() * d);
            for (&t, &p) in targets.iter().zip(&phases) {
                for (k, &ph) in table.iter().enumerate() {
                    next_t.push(t * d + (k + b) % d);
                    next_p.push(p * ph);
                }
            }
            targets = next_t;
            phases = next_p;
        }
        Ok(Self { targets, phases })
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// `T |v>` for a raw amplitude slice.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for ((&t, &p), &x) in self.targets.iter().zip(&self.phases).zip(v) {
            out[t] = p * x;
        }
        out
    }

    /// `<u| T |v>` without materializing `T |v>`.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.targets
            .iter()
            .zip(&self.phases)
            .zip(v)
            .map(|((&t, &p), &x)| u[t].conj() * p * x)
            .sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, (&t, &p)) in self.targets.iter().zip(&self.phases).enumerate() {
            m[(t, j)] = p;
        }
        m
    }
}

/// `T_mu |psi>` by index shifts and diagonal phases.
pub fn apply_displacement(state: &StateVector, mu: &PhasePoint) -> Result<StateVector> {
    let op = DisplacementOp::new(state.dims(), mu)?;
    StateVector::new(state.dims().clone(), op.apply(state.amplitudes()))
}

/// `<psi| T_mu |psi>`.
pub fn expectation(state: &StateVector, mu: &PhasePoint) -> Result<Complex64> {
    let op = DisplacementOp::new(state.dims(), mu)?;
    Ok(op.sandwich(state.amplitudes(), state.amplitudes()))
}

/// Returns the canonical label of `mu + mu2` and the phase with
/// `T_mu T_mu2 = phase * T_canonical(mu + mu2)`.
pub fn compose(mu: &PhasePoint, mu2: &PhasePoint, dims: &DimSpec) -> Result<(PhasePoint, Phase)> {
    mu.check(dims)?;
    mu2.check(dims)?;
    let mut phase = Phase::ONE;
    let mut raw = Vec::with_capacity(dims.len());
    for ((&(a, b), &(a2, b2)), &d) in mu.pairs.iter().zip(&mu2.pairs).zip(dims.dims()) {
        let (a, b, a2, b2, d) = (a as i64, b as i64, a2 as i64, b2 as i64, d as i64);
        phase = phase * Phase::pi_frac(a * b2 - a2 * b, d);
        raw.push((a + a2, b + b2));
    }
    let (sum, wrap) = PhasePoint::reduce(dims, &raw)?;
    Ok((sum, phase * wrap))
}

/// Returns the canonical label of `-mu` and the phase with
/// `T_mu^dagger = phase * T_canonical(-mu)`.
pub fn adjoint_index(mu: &PhasePoint, dims: &DimSpec) -> Result<(PhasePoint, Phase)> {
    mu.check(dims)?;
    let raw: Vec<(i64, i64)> = mu
        .pairs
        .iter()
        .map(|&(a, b)| (-(a as i64), -(b as i64)))
        .collect();
    PhasePoint::reduce(dims, &raw)
}
