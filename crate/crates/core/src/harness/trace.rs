use super::band::{band_exponent, choose_band, normalize_into_band, BandParams};
use super::cells::{partition_cells, CellPartition};
use super::decomposition::{decomposition_check, DecompositionReport};
use super::quotient::quotients;
use crate::attractor::{affine_hull, conjugate_to_hull, diameter_bounds, same_attractor_evidence, AttractorEvidence};
use crate::budget::Budget;
use crate::charvec::{analyze, compare_at, linear_combine, CharVec, OrderResult};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::separation::SscVerdict;
use crate::system::{checked_pow, IfsSystem};
use serde::Serialize;
use std::fmt;

/// Depth used for the affine hull and the diameter bound.
const TRACE_DEPTH: usize = 4;

/// Largest power of the SSC system tried while pushing its ratios below `ρ`.
const MAX_PSI_POWER: usize = 64;

pub const MAXIMALITY_NOTE: &str = "Θ is the band power Φ^k, not a maximiser of γ over the class 𝓘_{E,a,b} \
of homogeneous OSC generating systems with ratio in [a, b); that class cannot be enumerated, so the \
final link compares against this Θ only";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessStatus {
    ContradictionDemonstrated,
    TriviallyConsistent,
    InputsIncompatible,
    Undecided,
}

impl fmt::Display for HarnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HarnessStatus::ContradictionDemonstrated => "contradiction-demonstrated",
            HarnessStatus::TriviallyConsistent => "trivially-consistent",
            HarnessStatus::InputsIncompatible => "inputs-incompatible",
            HarnessStatus::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageOutcome {
    Certified,
    /// Passed on heuristic evidence only.
    Heuristic,
    Failed,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub outcome: StageOutcome,
    pub detail: String,
}

/// Per-cell data: `Γ_j`, its ratio, `k_j` and the chain `γ(Γ_j) ≺ γ(Φ∘Γ_j) ≺ ⋯`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellTrace {
    pub cell: usize,
    pub size: usize,
    pub ratio: Scalar,
    pub k: u32,
    pub chain: Vec<CharVec>,
    pub chain_orders: Vec<OrderResult>,
}

impl CellTrace {
    pub fn normalized_gamma(&self) -> &CharVec {
        self.chain.last().expect("chain starts with γ(Γ_j)")
    }

    fn chain_certified(&self) -> bool {
        self.chain_orders.iter().all(|o| *o == OrderResult::Less)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub status: HarnessStatus,
    pub stages: Vec<Stage>,
    pub hull_dim: Option<usize>,
    pub evidence: Option<AttractorEvidence>,
    pub psi_power: Option<usize>,
    pub delta: Option<Scalar>,
    pub diameter: Option<Scalar>,
    pub band: Option<BandParams>,
    pub theta_power: Option<u32>,
    pub cells: Option<CellPartition>,
    pub cell_traces: Vec<CellTrace>,
    pub decomposition: Option<DecompositionReport>,
    /// `Σ_j r_j^s γ(Φ^{k_j}∘Γ_j)`.
    pub averaged: Option<CharVec>,
    pub notes: Vec<String>,
}

impl HarnessReport {
    fn new() -> Self {
        HarnessReport {
            status: HarnessStatus::Undecided,
            stages: Vec::new(),
            hull_dim: None,
            evidence: None,
            psi_power: None,
            delta: None,
            diameter: None,
            band: None,
            theta_power: None,
            cells: None,
            cell_traces: Vec::new(),
            decomposition: None,
            averaged: None,
            notes: vec![MAXIMALITY_NOTE.to_string()],
        }
    }

    fn pass(&mut self, name: &'static str, detail: impl Into<String>) {
        self.stages.push(Stage {
            name,
            outcome: StageOutcome::Certified,
            detail: detail.into(),
        });
    }

    fn heuristic(&mut self, name: &'static str, detail: impl Into<String>) {
        self.stages.push(Stage {
            name,
            outcome: StageOutcome::Heuristic,
            detail: detail.into(),
        });
    }

    /// Records the stopping stage and sets the final status.
    fn halt(&mut self, name: &'static str, status: HarnessStatus, detail: impl Into<String>) -> Halt {
        let outcome = if status == HarnessStatus::Undecided {
            StageOutcome::Undecided
        } else {
            StageOutcome::Failed
        };
        self.stages.push(Stage {
            name,
            outcome,
            detail: detail.into(),
        });
        self.status = status;
        Halt
    }

    fn halt_on(&mut self, name: &'static str, err: Error) -> Halt {
        let status = match &err {
            Error::InputsIncompatible(_) => HarnessStatus::InputsIncompatible,
            Error::Precondition(_) | Error::NotSsc => HarnessStatus::TriviallyConsistent,
            _ => HarnessStatus::Undecided,
        };
        self.halt(name, status, err.to_string())
    }

    /// Stage that stopped the pipeline, if any.
    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| matches!(s.outcome, StageOutcome::Failed | StageOutcome::Undecided))
    }

    /// Only a fully certified chain is a definite outcome of the pipeline.
    pub fn is_provisional(&self) -> bool {
        self.status != HarnessStatus::ContradictionDemonstrated
    }
}

impl fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status)?;
        for s in &self.stages {
            let tag = match s.outcome {
                StageOutcome::Certified => "ok",
                StageOutcome::Heuristic => "heuristic",
                StageOutcome::Failed => "FAILED",
                StageOutcome::Undecided => "undecided",
            };
            writeln!(f, "  [{tag}] {}: {}", s.name, s.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

struct Halt;

/// Runs the separation-contradiction pipeline on homogeneous non-SSC `Φ` and SSC `Ψ`.
///
/// Every outcome is a report state; the first stage that fails names the broken link.
pub fn contradiction_trace(phi: &IfsSystem, psi: &IfsSystem, budget: &Budget) -> HarnessReport {
    let mut report = HarnessReport::new();
    let _ = run(phi, psi, budget, &mut report);
    report
}

fn run(phi: &IfsSystem, psi: &IfsSystem, budget: &Budget, report: &mut HarnessReport) -> Result<(), Halt> {
    if phi.dim() != psi.dim() {
        return Err(report.halt(
            "inputs",
            HarnessStatus::InputsIncompatible,
            format!("dimensions {} and {} differ", phi.dim(), psi.dim()),
        ));
    }
    let (phi, psi) = reduce_to_hull(phi, psi, report);
    let (phi, psi) = (&phi, &psi);

    const GATES: &str = "preconditions";
    let Some(rho) = phi.common_ratio().cloned() else {
        return Err(report.halt(GATES, HarnessStatus::TriviallyConsistent, "precondition failure: Φ must be homogeneous"));
    };
    if phi.osc().is_none() {
        return Err(report.halt(GATES, HarnessStatus::TriviallyConsistent, "precondition failure: Φ needs an OSC attribute"));
    }
    let phi_ssc = analyze(phi, budget).map_err(|e| report.halt_on(GATES, e))?.ssc;
    match phi_ssc {
        SscVerdict::NotSsc { .. } => {}
        SscVerdict::Ssc { .. } => {
            return Err(report.halt(GATES, HarnessStatus::TriviallyConsistent, "precondition failure: Φ must be not-SSC"))
        }
        SscVerdict::Undecided { .. } => {
            return Err(report.halt(GATES, HarnessStatus::Undecided, "could not certify that Φ fails the SSC"))
        }
    }
    match analyze(psi, budget).map_err(|e| report.halt_on(GATES, e))?.ssc {
        SscVerdict::Ssc { .. } => {}
        SscVerdict::NotSsc { .. } => {
            return Err(report.halt(GATES, HarnessStatus::TriviallyConsistent, "precondition failure: Ψ must be SSC"))
        }
        SscVerdict::Undecided { .. } => {
            return Err(report.halt(GATES, HarnessStatus::Undecided, "could not certify that Ψ satisfies the SSC"))
        }
    }
    report.pass(GATES, format!("Φ homogeneous with ρ = {rho}, OSC, not SSC; Ψ SSC"));

    const EVIDENCE: &str = "same attractor";
    let evidence = same_attractor_evidence(phi, psi, budget).map_err(|e| report.halt_on(EVIDENCE, e))?;
    report.evidence = Some(evidence.clone());
    if evidence.is_distinct() {
        return Err(report.halt(EVIDENCE, HarnessStatus::InputsIncompatible, evidence.to_string()));
    }
    if evidence.is_certified_same() {
        report.pass(EVIDENCE, evidence.to_string());
    } else {
        report.heuristic(EVIDENCE, format!("{evidence}; continuing under the same-attractor hypothesis"));
    }

    const POWER: &str = "Ψ power";
    let n = (1..=MAX_PSI_POWER)
        .find(|&n| psi.max_ratio().pow(n as u32).lt_certified(&rho))
        .ok_or_else(|| report.halt(POWER, HarnessStatus::Undecided, "no power of Ψ has all ratios below ρ"))?;
    let psi_n = psi.power_within(n, budget).map_err(|e| report.halt_on(POWER, e))?;
    report.psi_power = Some(n);
    report.pass(POWER, format!("Ψ^{n}: {} maps, ratios below ρ", psi_n.len()));

    const GAP: &str = "gap δ";
    let delta = match analyze(&psi_n, budget).map_err(|e| report.halt_on(GAP, e))?.ssc {
        SscVerdict::Ssc { delta } => delta,
        other => return Err(report.halt(GAP, HarnessStatus::Undecided, other.to_string())),
    };
    report.delta = Some(delta.clone());
    report.pass(GAP, format!("δ ≥ {delta}"));

    const DIAM: &str = "diameter";
    let diam = diameter_bounds(psi, TRACE_DEPTH, budget).upper;
    report.diameter = Some(diam.clone());
    report.pass(DIAM, format!("diam(E) ≤ {diam}"));

    const BAND: &str = "band";
    let band = choose_band(phi, &psi_n, &delta, &diam).map_err(|e| report.halt_on(BAND, e))?;
    report.band = Some(band.clone());
    report.pass(BAND, band.to_string());

    const THETA: &str = "Θ = Φ^k";
    let k = band_exponent(&rho, &Scalar::integer(1), &band).map_err(|e| report.halt_on(THETA, e))?;
    let theta = phi.power_within(k as usize, budget).map_err(|e| report.halt_on(THETA, e))?;
    report.theta_power = Some(k);
    report.pass(THETA, format!("k = {k}, ρ^k = {} in the band, {} maps", rho.pow(k), theta.len()));

    const CELLS: &str = "cells A_j";
    let cells = partition_cells(&theta, &psi_n, &delta, &diam, budget).map_err(|e| report.halt_on(CELLS, e))?;
    report.cells = Some(cells.clone());
    if !cells.is_balanced() {
        return Err(report.halt(
            CELLS,
            HarnessStatus::InputsIncompatible,
            "cell masses do not match the weights r_j^s, so the union identity fails",
        ));
    }
    report.pass(CELLS, format!("sizes {:?}", cells.cells.iter().map(Vec::len).collect::<Vec<_>>()));

    const QUOTIENTS: &str = "quotients Γ_j";
    let gammas = quotients(&theta, &psi_n, &cells).map_err(|e| report.halt_on(QUOTIENTS, e))?;
    report.pass(QUOTIENTS, format!("{} homogeneous quotient systems", gammas.len()));

    const DECOMPOSITION: &str = "decomposition identity";
    let decomposition =
        decomposition_check(&theta, &psi_n, &cells, &gammas, budget).map_err(|e| report.halt_on(DECOMPOSITION, e))?;
    report.decomposition = Some(decomposition.clone());
    if !decomposition.holds() {
        return Err(report.halt(
            DECOMPOSITION,
            HarnessStatus::InputsIncompatible,
            format!("residual {}", decomposition.residual),
        ));
    }
    report.pass(DECOMPOSITION, "γ(Θ) = Σ r_j^s γ(Γ_j) with zero residual");

    const CHAIN: &str = "monotone chains";
    for (j, gamma) in gammas.iter().enumerate() {
        let rho_gamma = gamma.common_ratio().cloned().expect("quotients of a homogeneous system are homogeneous");
        let needed = checked_pow(phi.len(), band_exponent(&rho, &rho_gamma, &band).unwrap_or(0) as usize)
            .saturating_mul(gamma.len());
        if needed > budget.max_maps {
            return Err(report.halt(
                CHAIN,
                HarnessStatus::Undecided,
                format!("Φ^k_j∘Γ_{} needs {needed} maps, above the budget of {}", j + 1, budget.max_maps),
            ));
        }
        let (kj, _) = normalize_into_band(phi, gamma, &band).map_err(|e| report.halt_on(CHAIN, e))?;
        let mut chain = Vec::with_capacity(kj as usize + 1);
        let mut current = gamma.clone();
        chain.push(analyze(&current, budget).map_err(|e| report.halt_on(CHAIN, e))?.gamma);
        for _ in 0..kj {
            current = phi.compose(&current).map_err(|e| report.halt_on(CHAIN, e))?;
            chain.push(analyze(&current, budget).map_err(|e| report.halt_on(CHAIN, e))?.gamma);
        }
        let chain_orders = chain.windows(2).map(|w| compare_at(&w[0], &w[1]).0).collect();
        report.cell_traces.push(CellTrace {
            cell: j,
            size: gamma.len(),
            ratio: rho_gamma,
            k: kj,
            chain,
            chain_orders,
        });
    }
    if let Some(t) = report.cell_traces.iter().find(|t| !t.chain_certified()) {
        let detail = format!("γ(Φ^t∘Γ_{}) is not strictly increasing in t", t.cell + 1);
        return Err(report.halt(CHAIN, HarnessStatus::Undecided, detail));
    }
    report.pass(CHAIN, "γ(Γ_j) ≺ γ(Φ∘Γ_j) ≺ ⋯ ≺ γ(Φ^{k_j}∘Γ_j) for every cell");

    const AVERAGE: &str = "strict average";
    let normalized: Vec<CharVec> = report.cell_traces.iter().map(|t| t.normalized_gamma().clone()).collect();
    let averaged = linear_combine(&decomposition.weights, &normalized).map_err(|e| report.halt_on(AVERAGE, e))?;
    report.averaged = Some(averaged.clone());
    match compare_at(&decomposition.gamma_theta, &averaged).0 {
        OrderResult::Less => report.pass(AVERAGE, format!("γ(Θ) ≺ {averaged}")),
        other => return Err(report.halt(AVERAGE, HarnessStatus::Undecided, format!("γ(Θ) vs average: {other}"))),
    }

    const MAXIMALITY: &str = "maximality";
    for t in &report.cell_traces.clone() {
        let order = compare_at(t.normalized_gamma(), &decomposition.gamma_theta).0;
        if !matches!(order, OrderResult::Less | OrderResult::Equal) {
            let detail = format!(
                "γ(Φ^k_j∘Γ_{}) is {order} than γ(Θ); this Θ is not maximal over 𝓘",
                t.cell + 1
            );
            return Err(report.halt(MAXIMALITY, HarnessStatus::Undecided, detail));
        }
    }
    report.pass(MAXIMALITY, "every normalized quotient has γ ⪯ γ(Θ)");
    let provisional = report.stages.iter().any(|s| s.outcome != StageOutcome::Certified);
    report.status = if provisional {
        HarnessStatus::Undecided
    } else {
        HarnessStatus::ContradictionDemonstrated
    };
    Ok(())
}

/// Conjugates both systems into hull coordinates when they share a proper certified hull.
fn reduce_to_hull(phi: &IfsSystem, psi: &IfsSystem, report: &mut HarnessReport) -> (IfsSystem, IfsSystem) {
    const HULL: &str = "affine hull";
    let hull_psi = affine_hull(psi, TRACE_DEPTH);
    report.hull_dim = Some(hull_psi.dim());
    if hull_psi.dim() == psi.dim() {
        report.pass(HULL, format!("full dimension {}", psi.dim()));
        return (phi.clone(), psi.clone());
    }
    let hull_phi = affine_hull(phi, TRACE_DEPTH);
    if hull_phi.certified && hull_psi.certified && hull_phi.same_span(&hull_psi) {
        if let (Some(p), Some(q)) = (conjugate_to_hull(phi, &hull_psi), conjugate_to_hull(psi, &hull_psi)) {
            report.pass(HULL, format!("both systems reduced to their common {}-dimensional hull", hull_psi.dim()));
            return (p, q);
        }
    }
    report.heuristic(HULL, format!("hull of dimension {} kept in ambient coordinates", hull_psi.dim()));
    (phi.clone(), psi.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn fifths_against_quarters() {
        let r = contradiction_trace(&catalog::touching_fifths(), &catalog::cantor_quarters(), &Budget::default());
        assert_eq!(r.status, HarnessStatus::InputsIncompatible, "{r}");
        assert_eq!(r.first_failure().unwrap().name, "same attractor");
        assert!(r.is_provisional());
    }

    #[test]
    fn gate_failures() {
        let b = Budget::default();
        let c4 = catalog::cantor_quarters();
        let f5 = catalog::touching_fifths();
        let r = contradiction_trace(&c4, &c4, &b);
        assert_eq!(r.status, HarnessStatus::TriviallyConsistent);
        assert!(r.first_failure().unwrap().detail.contains("Φ must be not-SSC"));
        let r = contradiction_trace(&f5, &f5, &b);
        assert_eq!(r.status, HarnessStatus::TriviallyConsistent);
        assert!(r.first_failure().unwrap().detail.contains("Ψ must be SSC"));
        assert!(r.notes[0].contains("maximiser"));
    }
}
