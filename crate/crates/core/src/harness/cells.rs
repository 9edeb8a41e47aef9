use crate::attractor::{distance_between, AttractorContext};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use crate::word::Word;
use rayon::prelude::*;
use serde::Serialize;

/// Cells `A_1, …, A_M` of `Θ`'s index set; `cells[j]` holds the `i` with `θ_i(E) ⊆ ψ_j(E)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellPartition {
    pub cells: Vec<Vec<usize>>,
    /// Per cell, `Σ_{i∈A_j} ρ_Θ^s = r_j^s` holds, as the union identity forces under OSC.
    pub mass_balanced: Vec<bool>,
}

impl CellPartition {
    pub fn cell_of(&self, i: usize) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(&i))
    }

    pub fn is_balanced(&self) -> bool {
        self.mass_balanced.iter().all(|&b| b)
    }
}

/// Assigns each `θ_i` to the only image `ψ_j(E)` it is not certified to miss.
///
/// Containment then follows from `θ_i(E) ⊆ E = ⋃ ψ_j(E)`, which is the
/// same-attractor hypothesis under test.
pub fn partition_cells(theta: &IfsSystem, psi: &IfsSystem, delta: &Scalar, diam: &Scalar, budget: &Budget) -> Result<CellPartition> {
    let rho = theta
        .common_ratio()
        .ok_or_else(|| Error::Precondition("Θ must be homogeneous".into()))?;
    if !(rho * diam).lt_certified(delta) {
        return Err(Error::Precondition(format!("ρ_Θ·diam(E) = {} is not below δ = {delta}", rho * diam)));
    }
    let ctx_theta = AttractorContext::new(theta, budget);
    let ctx_psi = AttractorContext::new(psi, budget);
    let assignment: Vec<Result<usize>> = (0..theta.len())
        .into_par_iter()
        .map(|i| {
            let mut open = Vec::new();
            for j in 0..psi.len() {
                let d = distance_between(&ctx_theta, &[Word::single(i)], &ctx_psi, &[Word::single(j)], budget)?;
                if !d.is_positive() {
                    open.push(j);
                }
            }
            match open.as_slice() {
                [j] => Ok(*j),
                [] => Err(Error::InputsIncompatible(format!(
                    "θ_{} (word {}) misses every first-level piece of Ψ",
                    i + 1,
                    theta.label(i)
                ))),
                _ => Err(Error::Undecidable(format!(
                    "θ_{} may meet {} pieces of Ψ",
                    i + 1,
                    open.len()
                ))),
            }
        })
        .collect();
    if let Some(Err(e)) = assignment.iter().find(|r| matches!(r, Err(Error::InputsIncompatible(_)))) {
        return Err(e.clone());
    }
    let mut cells = vec![Vec::new(); psi.len()];
    for (i, j) in assignment.into_iter().enumerate() {
        cells[j?].push(i);
    }
    let theta_weights = theta.weights();
    let mass_balanced = psi
        .weights()
        .iter()
        .zip(&cells)
        .map(|(w, cell)| {
            let mass = cell.iter().fold(Scalar::integer(0), |acc, &i| acc + &theta_weights[i]);
            mass.possibly_equal(w)
        })
        .collect();
    Ok(CellPartition { cells, mass_balanced })
}
