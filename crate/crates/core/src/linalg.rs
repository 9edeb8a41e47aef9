//! Points, orthogonal matrices and small exact linear solves.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{Mode, Scalar, ScalarKey};
use std::fmt;

/// Largest admissible `‖MᵀM − I‖` enclosure for interval orthogonal maps.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn zero(dim: usize, mode: Mode) -> Self {
        Point(vec![Scalar::zero(mode); dim])
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Point(coords.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(Scalar::is_exact)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point(self.0.iter().map(|a| a * k).collect())
    }

    pub fn norm_squared(&self) -> Scalar {
        let mut it = self.0.iter();
        let first = it.next().map(Scalar::square).unwrap_or_else(|| Scalar::integer(0));
        it.fold(first, |acc, c| acc + c.square())
    }

    /// Scalar whose lower endpoint bounds the Euclidean norm from below.
    pub fn norm_lower(&self) -> Scalar {
        if self.0.len() == 1 {
            return self.0[0].abs();
        }
        self.norm_squared().sqrt_lower()
    }

    /// Scalar whose upper endpoint bounds the Euclidean norm from above.
    pub fn norm_upper(&self) -> Scalar {
        if self.0.len() == 1 {
            return self.0[0].abs();
        }
        self.norm_squared().sqrt_upper()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    /// Hashable identity when every coordinate is known exactly.
    pub fn key(&self) -> Option<Vec<ScalarKey>> {
        self.0.iter().map(Scalar::key).collect()
    }

    /// Every coordinate certified equal.
    pub fn certified_equal(&self, other: &Point) -> bool {
        match (self.key(), other.key()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    pub fn in_mode(&self, mode: Mode) -> Point {
        Point(self.0.iter().map(|c| c.in_mode(mode)).collect())
    }
}

impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrthoKind {
    SignedPermutation,
    RationalOrthogonal,
    /// Interval matrix certified to contain an orthogonal matrix; `tol`
    /// is the entrywise widening applied to guarantee it.
    IntervalOrthogonal { tol: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMap {
    dim: usize,
    entries: Vec<Scalar>,
    kind: OrthoKind,
    /// For signed permutations: row `r` reads column `perm[r].0`, negated if `perm[r].1`.
    perm: Option<Vec<(usize, bool)>>,
}

impl OrthogonalMap {
    pub fn identity(dim: usize, mode: Mode) -> Self {
        let mut entries = vec![Scalar::zero(mode); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Scalar::one(mode);
        }
        OrthogonalMap {
            dim,
            entries,
            kind: OrthoKind::SignedPermutation,
            perm: Some((0..dim).map(|i| (i, false)).collect()),
        }
    }

    /// Validates a row-major square matrix.
    ///
    /// Exact matrices must satisfy `MᵀM = I` exactly. Interval matrices are
    /// accepted when the enclosure of `MᵀM − I` is small, after widening each
    /// entry so that the box provably contains an orthogonal matrix.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotOrthogonal("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        if entries.iter().all(Scalar::is_exact) {
            Self::from_exact(dim, entries)
        } else {
            Self::from_interval(dim, entries)
        }
    }

    fn from_exact(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        let m = OrthogonalMap {
            dim,
            entries,
            kind: OrthoKind::RationalOrthogonal,
            perm: None,
        };
        let gram = m.transpose().mul_matrix(&m);
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1 } else { 0 };
                if gram.entry(i, j) != &Scalar::integer(want) {
                    return Err(Error::NotOrthogonal(format!(
                        "(MᵀM)[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        gram.entry(i, j)
                    )));
                }
            }
        }
        Ok(m.classified())
    }

    fn from_interval(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        let entries: Vec<Scalar> = entries.iter().map(|e| e.in_mode(Mode::Interval)).collect();
        let raw = OrthogonalMap {
            dim,
            entries,
            kind: OrthoKind::IntervalOrthogonal { tol: 0.0 },
            perm: None,
        };
        let gram = raw.transpose().mul_matrix(&raw);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let want = Scalar::Interval(Interval::point(if i == j { 1.0 } else { 0.0 }));
                let dev = (gram.entry(i, j) - &want).abs();
                worst = worst.max(dev.upper_f64());
            }
        }
        // ‖M − Q‖₂ ≤ ‖MᵀM − I‖₂ ≤ d·max|(MᵀM − I)_ij| for the polar factor Q
        let tol = Interval::point(worst)
            .mul(&Interval::point(dim as f64))
            .hi();
        // written negated so that a NaN enclosure is rejected
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(tol <= ORTHOGONALITY_TOLERANCE) {
            return Err(Error::NotOrthogonal(format!(
                "‖MᵀM − I‖ enclosure {tol:e} exceeds {ORTHOGONALITY_TOLERANCE:e}"
            )));
        }
        let entries = raw
            .entries
            .iter()
            .map(|e| Scalar::Interval(e.to_interval().inflate(tol)))
            .collect();
        Ok(OrthogonalMap {
            dim,
            entries,
            kind: OrthoKind::IntervalOrthogonal { tol },
            perm: None,
        })
    }

    /// Detects signed permutations among exact matrices.
    fn classified(mut self) -> Self {
        if !self.entries.iter().all(Scalar::is_exact) {
            return self;
        }
        let one = Scalar::integer(1);
        let minus_one = Scalar::integer(-1);
        let zero = Scalar::integer(0);
        let mut perm = Vec::with_capacity(self.dim);
        for r in 0..self.dim {
            let mut found = None;
            for c in 0..self.dim {
                let e = self.entry(r, c);
                if *e == zero {
                    continue;
                }
                if found.is_some() || (*e != one && *e != minus_one) {
                    return self;
                }
                found = Some((c, *e == minus_one));
            }
            match found {
                Some(p) => perm.push(p),
                None => return self,
            }
        }
        self.kind = OrthoKind::SignedPermutation;
        self.perm = Some(perm);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> OrthoKind {
        self.kind
    }

    pub fn is_signed_permutation(&self) -> bool {
        self.perm.is_some()
    }

    /// `(column, negated)` per row when this is a signed permutation.
    pub fn signed_permutation(&self) -> Option<&[(usize, bool)]> {
        self.perm.as_deref()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.dim).map(<[Scalar]>::to_vec).collect()
    }

    pub fn mode(&self) -> Mode {
        if self.entries.iter().all(Scalar::is_exact) {
            Mode::Exact
        } else {
            Mode::Interval
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm
            .as_ref()
            .is_some_and(|p| p.iter().enumerate().all(|(r, &(c, neg))| r == c && !neg))
    }

    pub fn apply(&self, x: &Point) -> Point {
        debug_assert_eq!(x.dim(), self.dim);
        if let Some(perm) = &self.perm {
            return Point::new(
                perm.iter()
                    .map(|&(c, neg)| {
                        let v = &x.coords()[c];
                        if neg {
                            -v
                        } else {
                            v.clone()
                        }
                    })
                    .collect(),
            );
        }
        let xs = x.coords();
        Point::new(
            (0..self.dim)
                .map(|r| {
                    let row = &self.entries[r * self.dim..(r + 1) * self.dim];
                    let mut acc = &row[0] * &xs[0];
                    for c in 1..self.dim {
                        acc = acc + &row[c] * &xs[c];
                    }
                    acc
                })
                .collect(),
        )
    }

    fn mul_matrix(&self, other: &OrthogonalMap) -> OrthogonalMap {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = self.entry(r, 0) * other.entry(0, c);
                for k in 1..d {
                    acc = acc + self.entry(r, k) * other.entry(k, c);
                }
                entries.push(acc);
            }
        }
        OrthogonalMap {
            dim: d,
            entries,
            kind: self.kind,
            perm: None,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &OrthogonalMap) -> OrthogonalMap {
        if let (Some(p), Some(q)) = (&self.perm, &other.perm) {
            // (P Q) x: row r of P reads column p[r] of Qx, which reads q[p[r]]
            let perm: Vec<(usize, bool)> = p
                .iter()
                .map(|&(c, neg)| {
                    let (c2, neg2) = q[c];
                    (c2, neg ^ neg2)
                })
                .collect();
            let mode = if self.mode() == Mode::Exact && other.mode() == Mode::Exact {
                Mode::Exact
            } else {
                Mode::Interval
            };
            return Self::from_perm(perm, mode);
        }
        let mut m = self.mul_matrix(other);
        m.kind = match (self.kind, other.kind) {
            (OrthoKind::IntervalOrthogonal { tol: a }, OrthoKind::IntervalOrthogonal { tol: b }) => {
                OrthoKind::IntervalOrthogonal { tol: a + b }
            }
            (OrthoKind::IntervalOrthogonal { tol }, _) | (_, OrthoKind::IntervalOrthogonal { tol }) => {
                OrthoKind::IntervalOrthogonal { tol }
            }
            _ => OrthoKind::RationalOrthogonal,
        };
        if m.kind == OrthoKind::RationalOrthogonal {
            m.classified()
        } else {
            m
        }
    }

    fn from_perm(perm: Vec<(usize, bool)>, mode: Mode) -> OrthogonalMap {
        let dim = perm.len();
        let mut entries = vec![Scalar::zero(mode); dim * dim];
        for (r, &(c, neg)) in perm.iter().enumerate() {
            entries[r * dim + c] = if neg {
                -Scalar::one(mode)
            } else {
                Scalar::one(mode)
            };
        }
        OrthogonalMap {
            dim,
            entries,
            kind: OrthoKind::SignedPermutation,
            perm: Some(perm),
        }
    }

    pub fn transpose(&self) -> OrthogonalMap {
        let d = self.dim;
        if let Some(p) = &self.perm {
            let mut inv = vec![(0, false); d];
            for (r, &(c, neg)) in p.iter().enumerate() {
                inv[c] = (r, neg);
            }
            return Self::from_perm(inv, self.mode());
        }
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                entries.push(self.entry(c, r).clone());
            }
        }
        OrthogonalMap {
            dim: d,
            entries,
            kind: self.kind,
            perm: None,
        }
    }

    pub fn in_mode(&self, mode: Mode) -> OrthogonalMap {
        if mode == Mode::Exact || self.mode() == Mode::Interval {
            return self.clone();
        }
        let kind = match self.kind {
            OrthoKind::SignedPermutation => OrthoKind::SignedPermutation,
            _ => OrthoKind::IntervalOrthogonal { tol: 0.0 },
        };
        OrthogonalMap {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.in_mode(mode)).collect(),
            kind,
            perm: self.perm.clone(),
        }
    }
}

/// Solves `A x = b` exactly by Gaussian elimination (exact scalars only).
#[allow(clippy::needless_range_loop)]
pub fn solve_exact(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero_certified())
            .ok_or(Error::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero_certified() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &delta;
            }
            let delta = &factor * &b[col];
            b[r] = &b[r] - &delta;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Float Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_rows(rows: &[&[(i64, i64)]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
            .collect()
    }

    #[test]
    fn swap_negate_is_signed_permutation() {
        let m = OrthogonalMap::from_rows(exact_rows(&[&[(0, 1), (-1, 1)], &[(1, 1), (0, 1)]])).unwrap();
        assert!(m.is_signed_permutation());
        let x = Point::from_ratios(&[(1, 1), (2, 1)]);
        assert_eq!(m.apply(&x), Point::from_ratios(&[(-2, 1), (1, 1)]));
        let back = m.transpose().apply(&m.apply(&x));
        assert_eq!(back, x);
    }

    #[test]
    fn pythagorean_rotation_is_rational_orthogonal() {
        let m = OrthogonalMap::from_rows(exact_rows(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]])).unwrap();
        assert_eq!(m.kind(), OrthoKind::RationalOrthogonal);
        let mm = m.compose(&m.transpose());
        assert!(mm.is_identity());
    }

    #[test]
    fn non_orthogonal_rejected() {
        let err = OrthogonalMap::from_rows(exact_rows(&[&[(1, 1), (0, 1)], &[(0, 1), (2, 1)]]));
        assert!(matches!(err, Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn interval_rotation_accepted_and_widened() {
        let c = (std::f64::consts::PI / 5.0).cos();
        let s = (std::f64::consts::PI / 5.0).sin();
        let iv = |x: f64| Scalar::Interval(Interval::point(x));
        let m = OrthogonalMap::from_rows(vec![vec![iv(c), iv(-s)], vec![iv(s), iv(c)]]).unwrap();
        match m.kind() {
            OrthoKind::IntervalOrthogonal { tol } => assert!(tol > 0.0 && tol < 1e-12),
            k => panic!("unexpected kind {k:?}"),
        }
        let bad = OrthogonalMap::from_rows(vec![vec![iv(0.9), iv(0.0)], vec![iv(0.0), iv(1.0)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn exact_solve() {
        let a = exact_rows(&[&[(2, 1), (1, 1)], &[(1, 1), (3, 1)]]);
        let b = vec![Scalar::integer(3), Scalar::integer(5)];
        let x = solve_exact(a, b).unwrap();
        assert_eq!(x, vec![Scalar::ratio(4, 5), Scalar::ratio(7, 5)]);
    }
}
