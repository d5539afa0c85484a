//! Second Renyi entanglement entropy of a pure state, three ways: single-copy
//! displacement expectations on A, the partial-trace purity, and the two-copy
//! SWAP_A expectation.

use crate::algebra::{DisplacementOp, PhasePoint};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::state::{reduced_density, Partition, Split, StateVector};

/// Purity values below this are clamped before taking the logarithm.
pub const PURITY_FLOOR: f64 = 1e-12;
/// Largest register dimension for the two-copy SWAP_A expectation.
pub const DOUBLED_DIM_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Renyi2 {
    /// `-ln Tr rho_A^2`, in nats.
    pub entropy: f64,
    /// `Tr rho_A^2` as computed, before clamping.
    pub purity: f64,
    /// Set when the purity fell below [`PURITY_FLOOR`].
    pub clamped: bool,
}

impl Renyi2 {
    fn from_purity(purity: f64) -> Self {
        let clamped = purity < PURITY_FLOOR;
        if clamped {
            log::warn!("purity {purity:e} clamped to {PURITY_FLOOR:e} before the logarithm");
        }
        Renyi2 {
            entropy: -purity.max(PURITY_FLOOR).ln(),
            purity,
            clamped,
        }
    }
}

fn require_a(state: &StateVector, part: &Partition) -> Result<()> {
    part.validate(state.dims())?;
    if part.positions().is_empty() {
        return Err(Error::InvalidPartition("subsystem A is empty".into()));
    }
    state.require_normalized()
}

/// `S_2 = -ln[ sum_{mu_A} |<psi| T_{mu_A} (x) I_B |psi>|^2 / dim H_A ]`.
pub fn renyi2_displacement(state: &StateVector, part: &Partition) -> Result<Renyi2> {
    renyi2_displacement_with(state, part, Exec::default())
}

pub fn renyi2_displacement_with(
    state: &StateVector,
    part: &Partition,
    exec: Exec,
) -> Result<Renyi2> {
    require_a(state, part)?;
    let dims = state.dims();
    let local = dims.subsystem(part.positions())?;
    let psi = state.amplitudes();
    let total = exec.sum(local.label_count(), |i| {
        let mu = PhasePoint::embed(dims, part.positions(), &PhasePoint::from_index(&local, i))
            .expect("partition validated");
        DisplacementOp::new(dims, &mu)
            .expect("embedded label is canonical")
            .sandwich(psi, psi)
            .norm_sqr()
    });
    Ok(Renyi2::from_purity(total / local.total_dim() as f64))
}

/// `-ln Tr rho_A^2` from the reduced density matrix.
pub fn renyi2_oracle(state: &StateVector, part: &Partition) -> Result<Renyi2> {
    require_a(state, part)?;
    let rho = reduced_density(state, part)?;
    let m = rho.matrix();
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
    let purity = m.iter().map(|z| z.norm_sqr()).sum();
    Ok(Renyi2::from_purity(purity))
}

/// `<psi|<psi| SWAP_A |psi>|psi>`, with SWAP_A exchanging the two copies of A.
pub fn swap_expectation(state: &StateVector, part: &Partition) -> Result<f64> {
    require_a(state, part)?;
    let dims = state.dims();
    let n = dims.total_dim();
    if n > DOUBLED_DIM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "two-copy state",
            required: n,
            limit: DOUBLED_DIM_LIMIT,
        });
    }
    let psi = state.amplitudes();
    let doubled: Vec<_> = psi
        .iter()
        .flat_map(|&x| psi.iter().map(move |&y| x * y))
        .collect();
    let split = Split::new(dims, part.positions());
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for a1 in 0..split.sel_dim {
        for b1 in 0..split.rest_dim {
            let j = split.join(a1, b1);
            for a2 in 0..split.sel_dim {
                for b2 in 0..split.rest_dim {
                    let k = split.join(a2, b2);
                    let swapped = split.join(a2, b1) * n + split.join(a1, b2);
                    acc += doubled[j * n + k].conj() * doubled[swapped];
                }
            }
        }
    }
    Ok(acc.re)
}
