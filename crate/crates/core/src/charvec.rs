//! Characteristic vectors `γ(Φ)` and the top-down lexicographic order on them.

use crate::attractor::{same_attractor_evidence, AttractorEvidence};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::separation::{adjacency_graph, components, ssc_from_graph, ComponentPartition, SscVerdict};
use crate::system::IfsSystem;
use crate::word::Word;
use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Finitely supported vector indexed by `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharVec {
    entries: BTreeMap<usize, Scalar>,
    provisional: bool,
}

impl CharVec {
    /// Drops entries known to be exactly zero.
    pub fn new(entries: BTreeMap<usize, Scalar>) -> Self {
        assert!(!entries.contains_key(&0), "indices start at 1");
        let entries = entries
            .into_iter()
            .filter(|(_, v)| !(v.is_exact() && v.is_zero_certified()))
            .collect();
        CharVec {
            entries,
            provisional: false,
        }
    }

    /// `values[0]` is entry 1.
    pub fn from_dense(values: &[Scalar]) -> Self {
        CharVec::new(values.iter().enumerate().map(|(i, v)| (i + 1, v.clone())).collect())
    }

    pub fn from_ratios(values: &[(i64, i64)]) -> Self {
        CharVec::from_dense(&values.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect::<Vec<_>>())
    }

    /// The unit vector `e_n`.
    pub fn unit(n: usize) -> Self {
        CharVec::new(BTreeMap::from([(n, Scalar::integer(1))]))
    }

    pub fn with_provisional(mut self, provisional: bool) -> Self {
        self.provisional = provisional;
        self
    }

    pub fn is_provisional(&self) -> bool {
        self.provisional
    }

    pub fn entries(&self) -> &BTreeMap<usize, Scalar> {
        &self.entries
    }

    pub fn entry(&self, n: usize) -> Scalar {
        self.entries.get(&n).cloned().unwrap_or_else(|| Scalar::integer(0))
    }

    /// Largest index with a stored entry, 0 for the zero vector.
    pub fn support_max(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }

    pub fn sum(&self) -> Scalar {
        self.entries.values().fold(Scalar::integer(0), |acc, v| acc + v)
    }

    pub fn scale(&self, a: &Scalar) -> CharVec {
        CharVec::new(self.entries.iter().map(|(&n, v)| (n, v * a)).collect()).with_provisional(self.provisional)
    }

    pub fn add(&self, other: &CharVec) -> CharVec {
        let mut out = self.entries.clone();
        for (&n, v) in &other.entries {
            let cur = out.remove(&n).unwrap_or_else(|| Scalar::integer(0));
            out.insert(n, cur + v);
        }
        CharVec::new(out).with_provisional(self.provisional || other.provisional)
    }

    pub fn sub(&self, other: &CharVec) -> CharVec {
        self.add(&other.scale(&Scalar::integer(-1)))
    }

    /// Every entry certified zero.
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Scalar::is_zero_certified)
    }

    /// `(n, numerator, denominator)` triples, available for exact vectors.
    pub fn triples(&self) -> Option<Vec<(usize, BigInt, BigInt)>> {
        self.entries
            .iter()
            .map(|(&n, v)| v.as_rational().map(|q| (n, q.numer().clone(), q.denom().clone())))
            .collect()
    }
}

impl fmt::Display for CharVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for n in 1..=self.support_max() {
            write!(f, "{}, ", self.entry(n))?;
        }
        f.write_str("0, …)")
    }
}

impl Serialize for CharVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (&n, v) in &self.entries {
            match v.as_rational() {
                Some(q) => seq.serialize_element(&(n, q.numer().to_string(), q.denom().to_string()))?,
                None => seq.serialize_element(&(n, v.to_string()))?,
            }
        }
        seq.end()
    }
}

/// `γ_n = Σ_{n-components Λ} Σ_{i∈Λ} ρ_i^s`.
pub fn characteristic_vector(sys: &IfsSystem, partition: &ComponentPartition) -> CharVec {
    let weights = sys.weights();
    let mut entries: BTreeMap<usize, Scalar> = BTreeMap::new();
    for comp in partition.components() {
        let mass = comp.iter().fold(Scalar::integer(0), |acc, &i| acc + &weights[i]);
        let slot = entries.entry(comp.len()).or_insert_with(|| Scalar::integer(0));
        *slot = &*slot + &mass;
    }
    CharVec::new(entries).with_provisional(partition.is_provisional())
}

/// Adjacency graph, components and `γ` in one pass.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub partition: ComponentPartition,
    pub gamma: CharVec,
    pub ssc: SscVerdict,
    pub edges: Vec<(usize, usize)>,
    pub undecided: Vec<(usize, usize)>,
}

pub fn analyze(sys: &IfsSystem, budget: &Budget) -> Result<Analysis> {
    let graph = adjacency_graph(sys, budget)?;
    let partition = components(&graph);
    let gamma = characteristic_vector(sys, &partition);
    Ok(Analysis {
        ssc: ssc_from_graph(&graph),
        edges: graph.edges().to_vec(),
        undecided: graph.undecided().to_vec(),
        partition,
        gamma,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "order", rename_all = "kebab-case")]
pub enum OrderResult {
    Less,
    Equal,
    Greater,
    /// The deciding entry difference encloses zero; `gap` is `y_n − x_n`.
    Incomparable { index: usize, gap: Interval },
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Less => f.write_str("Less"),
            OrderResult::Equal => f.write_str("Equal"),
            OrderResult::Greater => f.write_str("Greater"),
            OrderResult::Incomparable { index, gap } => write!(
                f,
                "Incomparable at index {index}: difference {gap} needs precision below {:.1e}",
                gap.width()
            ),
        }
    }
}

/// `x ≺ y` iff at the highest index where they differ, `x_n < y_n`.
pub fn compare(x: &CharVec, y: &CharVec) -> OrderResult {
    compare_at(x, y).0
}

/// The order together with the index that decided it.
pub fn compare_at(x: &CharVec, y: &CharVec) -> (OrderResult, Option<usize>) {
    let top = x.support_max().max(y.support_max());
    for n in (1..=top).rev() {
        let diff = y.entry(n) - x.entry(n);
        match diff.certified_sign() {
            Some(std::cmp::Ordering::Equal) => continue,
            Some(std::cmp::Ordering::Greater) => return (OrderResult::Less, Some(n)),
            Some(std::cmp::Ordering::Less) => return (OrderResult::Greater, Some(n)),
            None => {
                return (
                    OrderResult::Incomparable {
                        index: n,
                        gap: diff.to_interval(),
                    },
                    Some(n),
                )
            }
        }
    }
    (OrderResult::Equal, None)
}

/// `Σ_k c_k v_k` for nonnegative coefficients summing to 1.
pub fn linear_combine(coeffs: &[Scalar], vecs: &[CharVec]) -> Result<CharVec> {
    if coeffs.len() != vecs.len() {
        return Err(Error::LengthMismatch(coeffs.len(), vecs.len()));
    }
    if let Some(c) = coeffs.iter().find(|c| c.upper_f64() < 0.0 || (c.is_exact() && c.lower_f64() < 0.0)) {
        return Err(Error::BadCoefficients(format!("negative coefficient {c}")));
    }
    let total = coeffs.iter().fold(Scalar::integer(0), |acc, c| acc + c);
    let unit = match &total {
        Scalar::Exact(_) => total == Scalar::integer(1),
        Scalar::Interval(iv) => iv.contains(1.0),
    };
    if !unit {
        return Err(Error::BadCoefficients(format!("sum is {total}")));
    }
    Ok(coeffs
        .iter()
        .zip(vecs)
        .fold(CharVec::new(BTreeMap::new()), |acc, (c, v)| acc.add(&v.scale(c))))
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub gamma_psi: CharVec,
    pub gamma_composite: CharVec,
    pub order: OrderResult,
    pub deciding_index: Option<usize>,
    /// A component of `Φ∘Ψ` that is not of the form `{i}×Λ`, in composite labels.
    pub merged_component: Option<Vec<Word>>,
    pub evidence: Option<AttractorEvidence>,
    pub provisional: bool,
}

impl MonotonicityReport {
    pub fn strictly_increasing(&self) -> bool {
        self.order == OrderResult::Less
    }
}

/// Checks `γ(Ψ) ≺ γ(Φ∘Ψ)` for `Φ` with OSC but not SSC and `Ψ` with OSC, generating the same set.
///
/// `assume_same_attractor` skips the attractor comparison.
pub fn verify_monotonicity(
    phi: &IfsSystem,
    psi: &IfsSystem,
    budget: &Budget,
    assume_same_attractor: bool,
) -> Result<MonotonicityReport> {
    if phi.osc().is_none() || psi.osc().is_none() {
        return Err(Error::Precondition("both systems need an open set condition attribute".into()));
    }
    let phi_analysis = analyze(phi, budget)?;
    match &phi_analysis.ssc {
        SscVerdict::NotSsc { .. } => {}
        SscVerdict::Ssc { .. } => {
            return Err(Error::Precondition("the outer system satisfies the SSC; it must not".into()))
        }
        SscVerdict::Undecided { .. } => {
            return Err(Error::Precondition("could not certify that the outer system fails the SSC".into()))
        }
    }
    let evidence = if assume_same_attractor {
        None
    } else {
        let e = same_attractor_evidence(phi, psi, budget)?;
        if e.is_distinct() {
            return Err(Error::InputsIncompatible(e.to_string()));
        }
        Some(e)
    };
    let composite = phi.compose_within(psi, budget)?;
    let inner = analyze(psi, budget)?;
    let outer = analyze(&composite, budget)?;
    let (order, deciding_index) = compare_at(&inner.gamma, &outer.gamma);
    let merged_component = find_merged(&outer.partition, &inner.partition, psi.len())
        .map(|c| c.iter().map(|&k| composite.label(k).clone()).collect());
    let provisional = inner.gamma.is_provisional()
        || outer.gamma.is_provisional()
        || evidence.as_ref().is_some_and(|e| !e.is_certified_same());
    Ok(MonotonicityReport {
        gamma_psi: inner.gamma,
        gamma_composite: outer.gamma,
        order,
        deciding_index,
        merged_component,
        evidence,
        provisional,
    })
}

/// First component of the composite not of the form `{i} × Λ` with `Λ` a component of `Ψ`.
fn find_merged<'a>(outer: &'a ComponentPartition, inner: &ComponentPartition, m: usize) -> Option<&'a Vec<usize>> {
    outer.components().iter().find(|comp| {
        let first = comp[0] / m;
        if comp.iter().any(|&k| k / m != first) {
            return true;
        }
        let js: Vec<usize> = comp.iter().map(|&k| k % m).collect();
        !inner.components().contains(&js)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn gamma_examples() {
        let b = Budget::default();
        assert_eq!(analyze(&catalog::touching_fifths(), &b).unwrap().gamma, CharVec::from_ratios(&[(1, 3), (2, 3)]));
        assert_eq!(analyze(&catalog::cantor_quarters(), &b).unwrap().gamma, CharVec::unit(1));
        let f25 = catalog::touching_fifths().power(2).unwrap();
        assert_eq!(analyze(&f25, &b).unwrap().gamma, CharVec::from_ratios(&[(2, 9), (4, 9), (1, 3)]));
    }

    #[test]
    fn order_examples() {
        let e1 = CharVec::unit(1);
        let g5 = CharVec::from_ratios(&[(1, 3), (2, 3)]);
        assert_eq!(compare_at(&e1, &g5), (OrderResult::Less, Some(2)));
        assert_eq!(compare(&g5, &g5), OrderResult::Equal);
        let g25 = CharVec::from_ratios(&[(2, 9), (4, 9), (1, 3)]);
        assert_eq!(compare_at(&g5, &g25), (OrderResult::Less, Some(3)));
        assert_eq!(compare(&g25, &g5), OrderResult::Greater);
        assert_eq!(g5.to_string(), "(1/3, 2/3, 0, …)");
    }

    #[test]
    fn interval_entries_can_be_incomparable() {
        let x = CharVec::from_dense(&[Scalar::Interval(Interval::new(0.3, 0.4))]);
        let y = CharVec::from_dense(&[Scalar::Interval(Interval::new(0.35, 0.45))]);
        assert!(matches!(compare(&x, &y), OrderResult::Incomparable { index: 1, .. }));
    }

    #[test]
    fn combinations() {
        let half = Scalar::ratio(1, 2);
        let e1 = CharVec::unit(1);
        assert_eq!(linear_combine(&[half.clone(), half.clone()], &[e1.clone(), e1.clone()]).unwrap(), e1);
        let v = linear_combine(
            &[Scalar::ratio(1, 3), Scalar::ratio(2, 3)],
            &[CharVec::unit(1), CharVec::unit(2)],
        )
        .unwrap();
        assert_eq!(v, CharVec::from_ratios(&[(1, 3), (2, 3)]));
        let g5 = CharVec::from_ratios(&[(1, 3), (2, 3)]);
        let g25 = CharVec::from_ratios(&[(2, 9), (4, 9), (1, 3)]);
        let mix = linear_combine(&[half.clone(), half.clone()], &[g5, g25]).unwrap();
        assert_eq!(mix, CharVec::from_ratios(&[(5, 18), (5, 9), (1, 6)]));
        assert!(matches!(
            linear_combine(std::slice::from_ref(&half), std::slice::from_ref(&e1)),
            Err(Error::BadCoefficients(_))
        ));
        assert_eq!(linear_combine(&[half], &[]), Err(Error::LengthMismatch(1, 0)));
    }

    #[test]
    fn monotonicity_on_fifths() {
        let b = Budget::default();
        let f5 = catalog::touching_fifths();
        let r = verify_monotonicity(&f5, &f5, &b, false).unwrap();
        assert!(r.strictly_increasing());
        assert!(!r.provisional);
        let merged: Vec<String> = r.merged_component.unwrap().iter().map(Word::to_string).collect();
        assert_eq!(merged, ["(2,2)", "(2,3)", "(3,1)"]);
        let f25 = f5.power(2).unwrap();
        let r = verify_monotonicity(&f5, &f25, &b, false).unwrap();
        assert!(r.strictly_increasing());
        assert_eq!(r.gamma_composite, CharVec::from_ratios(&[(5, 27), (10, 27), (4, 9)]));
        let c4 = catalog::cantor_quarters();
        assert!(matches!(verify_monotonicity(&c4, &c4, &b, false), Err(Error::Precondition(_))));
    }
}
