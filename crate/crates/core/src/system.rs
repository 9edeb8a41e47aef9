//! Iterated function systems of similitudes and their algebra.

use crate::budget::Budget;
use crate::dimension::{self, SimilarityDimension};
use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::scalar::{Mode, Scalar};
use crate::similitude::Similitude;
use crate::word::Word;
use serde::Serialize;
use std::sync::OnceLock;

/// Ratios of an interval-mode system count as equal below this width.
pub const HOMOGENEITY_TOLERANCE: f64 = 1e-12;

/// How the open set condition is known for a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OscAttribute {
    /// Asserted by the user.
    Declared,
    /// Verified with an explicit open set.
    Witnessed,
    /// Follows from a certified strong separation check.
    ImpliedBySsc,
    /// Carried over to a composition or power of systems with OSC that share an attractor.
    Inherited,
}

#[derive(Clone, Debug)]
pub struct IfsSystem {
    dim: usize,
    maps: Vec<Similitude>,
    mode: Mode,
    labels: Vec<Word>,
    factors: Option<(usize, usize)>,
    osc: Option<OscAttribute>,
    common_ratio: Option<Scalar>,
    dimension: OnceLock<SimilarityDimension>,
}

impl PartialEq for IfsSystem {
    fn eq(&self, other: &Self) -> bool {
        self.maps == other.maps
    }
}

impl IfsSystem {
    pub fn new(maps: Vec<Similitude>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::TooFewMaps(maps.len()));
        }
        let dim = maps[0].dim();
        if let Some(bad) = maps.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mode = if maps.iter().all(|m| m.mode() == Mode::Exact) {
            Mode::Exact
        } else {
            Mode::Interval
        };
        let maps: Vec<Similitude> = maps.into_iter().map(|m| m.in_mode(mode)).collect();
        let labels = (0..maps.len()).map(Word::single).collect();
        let common_ratio = detect_common_ratio(&maps);
        Ok(IfsSystem {
            dim,
            maps,
            mode,
            labels,
            factors: None,
            osc: None,
            common_ratio,
            dimension: OnceLock::new(),
        })
    }

    pub fn with_osc(mut self, osc: OscAttribute) -> Self {
        self.osc = Some(osc);
        self
    }

    pub fn without_osc(mut self) -> Self {
        self.osc = None;
        self
    }

    pub(crate) fn with_labels(mut self, labels: Vec<Word>) -> Self {
        debug_assert_eq!(labels.len(), self.maps.len());
        self.labels = labels;
        self
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &Similitude {
        &self.maps[i]
    }

    /// Display address of each map: its own index, or the flattened
    /// index tuple it came from when built by composition.
    pub fn labels(&self) -> &[Word] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Word {
        &self.labels[i]
    }

    /// For a system built as `Φ∘Ψ`, the pair `(i, j)` behind composite index `k`.
    pub fn provenance(&self, k: usize) -> Option<(usize, usize)> {
        self.factors.map(|(_, m)| (k / m, k % m))
    }

    pub fn factor_sizes(&self) -> Option<(usize, usize)> {
        self.factors
    }

    pub fn osc(&self) -> Option<OscAttribute> {
        self.osc
    }

    pub fn is_homogeneous(&self) -> bool {
        self.common_ratio.is_some()
    }

    pub fn common_ratio(&self) -> Option<&Scalar> {
        self.common_ratio.as_ref()
    }

    pub fn ratios(&self) -> impl Iterator<Item = &Scalar> {
        self.maps.iter().map(Similitude::ratio)
    }

    /// Largest contraction ratio (certified maximum).
    pub fn max_ratio(&self) -> Scalar {
        let mut it = self.ratios();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, r| acc.max_of(r))
    }

    pub fn min_ratio(&self) -> Scalar {
        let mut it = self.ratios();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, r| acc.min_of(r))
    }

    pub fn check_symbol(&self, s: usize) -> Result<()> {
        if s < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidSymbol {
                symbol: s,
                maps: self.len(),
            })
        }
    }

    /// `φ_{w_1} ∘ ⋯ ∘ φ_{w_m}`.
    pub fn cylinder_map(&self, w: &Word) -> Result<Similitude> {
        let (&first, rest) = w.symbols().split_first().ok_or(Error::EmptyWord)?;
        self.check_symbol(first)?;
        let mut acc = self.maps[first].clone();
        for &s in rest {
            self.check_symbol(s)?;
            acc = acc.compose(&self.maps[s])?;
        }
        Ok(acc)
    }

    /// `Φ∘Ψ = {φ_i∘ψ_j}` in lexicographic `(i, j)` order.
    pub fn compose(&self, other: &IfsSystem) -> Result<IfsSystem> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut maps = Vec::with_capacity(self.len() * other.len());
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for (f, lf) in self.maps.iter().zip(&self.labels) {
            for (g, lg) in other.maps.iter().zip(&other.labels) {
                maps.push(f.compose(g)?);
                labels.push(lf.concat(lg));
            }
        }
        let mut out = IfsSystem::new(maps)?.with_labels(labels);
        out.factors = Some((self.len(), other.len()));
        if self.osc.is_some() && other.osc.is_some() {
            // valid when both generate the same attractor; callers composing
            // unrelated systems should not rely on it
            out.osc = Some(OscAttribute::Inherited);
        }
        Ok(out)
    }

    /// `Φ^k` by repeated composition.
    pub fn power(&self, k: usize) -> Result<IfsSystem> {
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose(&acc)?;
        }
        if k > 1 {
            acc.osc = self.osc.map(|_| OscAttribute::Inherited);
        }
        Ok(acc)
    }

    /// `Φ^k`, refusing when `N^k` exceeds the map budget.
    pub fn power_within(&self, k: usize, budget: &Budget) -> Result<IfsSystem> {
        let needed = checked_pow(self.len(), k);
        if needed > budget.max_maps {
            return Err(Error::BudgetExceeded {
                what: "maps in power",
                needed,
                limit: budget.max_maps,
            });
        }
        self.power(k)
    }

    /// `Φ∘Ψ`, refusing when `NM` exceeds the map budget.
    pub fn compose_within(&self, other: &IfsSystem, budget: &Budget) -> Result<IfsSystem> {
        let needed = self.len().saturating_mul(other.len());
        if needed > budget.max_maps {
            return Err(Error::BudgetExceeded {
                what: "maps in composition",
                needed,
                limit: budget.max_maps,
            });
        }
        self.compose(other)
    }

    pub fn similarity_dimension(&self) -> &SimilarityDimension {
        self.dimension
            .get_or_init(|| dimension::similarity_dimension(self, dimension::DEFAULT_WIDTH))
    }

    /// `ρ_i^s` for every map.
    pub fn weights(&self) -> Vec<Scalar> {
        let dim = self.similarity_dimension();
        self.ratios().map(|r| dim.weight(r)).collect()
    }

    pub fn fixed_points(&self) -> Vec<Point> {
        self.maps.iter().map(Similitude::fixed_point).collect()
    }

    /// Same system in interval arithmetic.
    pub fn to_interval_mode(&self) -> IfsSystem {
        let maps = self.maps.iter().map(|m| m.in_mode(Mode::Interval)).collect();
        let mut out = IfsSystem::new(maps).expect("already validated");
        out.labels = self.labels.clone();
        out.factors = self.factors;
        out.osc = self.osc;
        out
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> usize {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

fn detect_common_ratio(maps: &[Similitude]) -> Option<Scalar> {
    let first = maps[0].ratio();
    match first {
        Scalar::Exact(_) => maps
            .iter()
            .all(|m| m.ratio() == first)
            .then(|| first.clone()),
        Scalar::Interval(_) => {
            let mut hull = first.to_interval();
            for m in maps {
                let iv = m.ratio().to_interval();
                if !iv.overlaps(&hull) {
                    return None;
                }
                hull = hull.hull(&iv);
            }
            (hull.width() < HOMOGENEITY_TOLERANCE).then_some(Scalar::Interval(hull))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn offsets(sys: &IfsSystem) -> Vec<Scalar> {
        sys.maps().iter().map(|m| m.translation().coords()[0].clone()).collect()
    }

    fn ratios_over(vals: &[i64], den: i64) -> Vec<Scalar> {
        vals.iter().map(|&v| Scalar::ratio(v, den)).collect()
    }

    #[test]
    fn cylinder_maps() {
        let f5 = catalog::touching_fifths();
        assert_eq!(
            f5.cylinder_map(&Word::from_one_based(&[2, 3])).unwrap(),
            Similitude::line(1, 25, 19, 25)
        );
        assert_eq!(
            f5.cylinder_map(&Word::from_one_based(&[1])).unwrap(),
            Similitude::line(1, 5, 0, 1)
        );
        let c4 = catalog::cantor_quarters();
        assert_eq!(
            c4.cylinder_map(&Word::from_one_based(&[2, 2])).unwrap(),
            Similitude::line(1, 16, 15, 16)
        );
        assert_eq!(f5.cylinder_map(&Word::empty()), Err(Error::EmptyWord));
        assert!(matches!(
            f5.cylinder_map(&Word::new(vec![3])),
            Err(Error::InvalidSymbol { .. })
        ));
    }

    #[test]
    fn composition_examples() {
        let f5 = catalog::touching_fifths();
        let f25 = f5.compose(&f5).unwrap();
        assert_eq!(f25.len(), 9);
        assert_eq!(offsets(&f25), ratios_over(&[0, 3, 4, 15, 18, 19, 20, 23, 24], 25));
        assert_eq!(f25.provenance(5), Some((1, 2)));
        assert_eq!(f25.label(5).to_string(), "(2,3)");
        let c4 = catalog::cantor_quarters();
        let c16 = c4.compose(&c4).unwrap();
        assert_eq!(offsets(&c16), ratios_over(&[0, 3, 12, 15], 16));
        assert!(IfsSystem::new(vec![Similitude::line(1, 2, 0, 1)]).is_err());
    }

    #[test]
    fn powers() {
        let f5 = catalog::touching_fifths();
        assert_eq!(f5.power(1).unwrap(), f5);
        assert_eq!(f5.power(2).unwrap(), f5.compose(&f5).unwrap());
        let c64 = catalog::cantor_quarters().power(3).unwrap();
        assert_eq!(c64.len(), 8);
        assert_eq!(c64.common_ratio(), Some(&Scalar::ratio(1, 64)));
        assert_eq!(f5.power(0), Err(Error::ZeroPower));
    }

    #[test]
    fn homogeneity_detection() {
        assert!(catalog::touching_fifths().is_homogeneous());
        let mixed = IfsSystem::new(vec![Similitude::line(1, 2, 0, 1), Similitude::line(1, 4, 3, 4)]).unwrap();
        assert!(!mixed.is_homogeneous());
        let iv = catalog::touching_fifths().to_interval_mode();
        assert!(iv.is_homogeneous());
    }
}
