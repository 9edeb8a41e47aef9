use super::cells::CellPartition;
use crate::budget::Budget;
use crate::charvec::{analyze, linear_combine, CharVec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub gamma_theta: CharVec,
    pub gamma_quotients: Vec<CharVec>,
    pub weights: Vec<Scalar>,
    /// `γ(Θ) − Σ_j r_j^s γ(Γ_j)`.
    pub residual: CharVec,
    /// Every component of `Θ` lies inside one cell.
    pub components_within_cells: bool,
    /// Components of `A_j` under `∼_Θ` coincide with those of `Γ_j`.
    pub components_match: bool,
    pub provisional: bool,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.components_within_cells && self.components_match
    }
}

/// `γ(Θ) − Σ_j w_j γ(Γ_j)` on bare vectors.
pub fn vector_residual(gamma_theta: &CharVec, weights: &[Scalar], gammas: &[CharVec]) -> Result<CharVec> {
    Ok(gamma_theta.sub(&linear_combine(weights, gammas)?))
}

pub fn decomposition_check(
    theta: &IfsSystem,
    psi: &IfsSystem,
    cells: &CellPartition,
    quotients: &[IfsSystem],
    budget: &Budget,
) -> Result<DecompositionReport> {
    if quotients.len() != cells.cells.len() || psi.len() != cells.cells.len() {
        return Err(Error::LengthMismatch(quotients.len(), cells.cells.len()));
    }
    let outer = analyze(theta, budget)?;
    let components_within_cells = outer
        .partition
        .components()
        .iter()
        .all(|comp| cells.cells.iter().any(|cell| comp.iter().all(|i| cell.contains(i))));
    let mut components_match = true;
    let mut gamma_quotients = Vec::with_capacity(quotients.len());
    let mut provisional = outer.partition.is_provisional();
    for (cell, gamma) in cells.cells.iter().zip(quotients) {
        let inner = analyze(gamma, budget)?;
        provisional |= inner.partition.is_provisional();
        let mut lifted: Vec<Vec<usize>> = inner
            .partition
            .components()
            .iter()
            .map(|c| c.iter().map(|&t| cell[t]).collect())
            .collect();
        lifted.sort();
        let mut restricted: Vec<Vec<usize>> = outer
            .partition
            .components()
            .iter()
            .filter(|c| cell.contains(&c[0]))
            .cloned()
            .collect();
        restricted.sort();
        components_match &= lifted == restricted;
        gamma_quotients.push(inner.gamma);
    }
    let weights = psi.weights();
    let residual = vector_residual(&outer.gamma, &weights, &gamma_quotients)?;
    Ok(DecompositionReport {
        gamma_theta: outer.gamma,
        gamma_quotients,
        weights,
        residual,
        components_within_cells,
        components_match,
        provisional,
    })
}
