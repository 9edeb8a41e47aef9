use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::system::IfsSystem;
use serde::Serialize;
use std::fmt;

/// Largest `ℓ` tried before giving up.
pub const MAX_ELL: u32 = 64;

/// Largest power scanned when normalizing a ratio into the band.
pub const MAX_BAND_POWER: u32 = 4096;

/// `ℓ`, `ε` and the right-open band `[ρε, ε)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandParams {
    pub ell: u32,
    pub rho: Scalar,
    pub epsilon: Scalar,
}

impl BandParams {
    pub fn lower(&self) -> Scalar {
        &self.rho * &self.epsilon
    }

    pub fn upper(&self) -> &Scalar {
        &self.epsilon
    }

    /// Certified membership `ρε ≤ x < ε`.
    pub fn contains(&self, x: &Scalar) -> bool {
        self.lower().le_certified(x) && x.lt_certified(&self.epsilon)
    }
}

impl fmt::Display for BandParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℓ = {}, ε = {}, band [{}, {})", self.ell, self.epsilon, self.lower(), self.epsilon)
    }
}

/// Minimal `ℓ` with `ρ^ℓ < min_r`, and the maximal `ε = ρ^ℓ·δ/diam`.
pub fn band_for(rho: &Scalar, min_r: &Scalar, delta: &Scalar, diam: &Scalar) -> Result<BandParams> {
    if !delta.is_positive_certified() || !diam.is_positive_certified() {
        return Err(Error::Precondition("δ and diam(E) must be positive".into()));
    }
    let mut power = rho.clone();
    for ell in 1..=MAX_ELL {
        if power.lt_certified(min_r) {
            let epsilon = &(&power * delta) / diam;
            if !epsilon.lt_certified(&power) {
                return Err(Error::Precondition(format!("ε = {epsilon} is not below ρ^ℓ = {power}")));
            }
            return Ok(BandParams {
                ell,
                rho: rho.clone(),
                epsilon,
            });
        }
        power = &power * rho;
    }
    Err(Error::BudgetExceeded {
        what: "band exponent ℓ",
        needed: MAX_ELL as usize + 1,
        limit: MAX_ELL as usize,
    })
}

/// Band parameters for homogeneous `Φ` against `Ψ`, whose ratios must all be below `ρ`.
pub fn choose_band(phi: &IfsSystem, psi: &IfsSystem, delta: &Scalar, diam: &Scalar) -> Result<BandParams> {
    let rho = phi
        .common_ratio()
        .ok_or_else(|| Error::Precondition("the outer system must be homogeneous".into()))?;
    if !psi.max_ratio().lt_certified(rho) {
        return Err(Error::Precondition(format!(
            "every ratio of the SSC system must be below ρ = {rho}; replace it by a power first"
        )));
    }
    band_for(rho, &psi.min_ratio(), delta, diam)
}

/// The unique `k ≥ 1` with `ρ^k·ρ_Γ ∈ [ρε, ε)`.
pub fn band_exponent(rho: &Scalar, rho_gamma: &Scalar, band: &BandParams) -> Result<u32> {
    if !band.epsilon.lt_certified(rho_gamma) {
        return Err(Error::InputsIncompatible(format!(
            "ratio {rho_gamma} is not above ε = {}",
            band.epsilon
        )));
    }
    let mut value = rho_gamma * rho;
    for k in 1..=MAX_BAND_POWER {
        if value.lt_certified(&band.epsilon) {
            return if band.contains(&value) {
                Ok(k)
            } else {
                Err(Error::Undecidable(format!("ρ^{k}·ρ_Γ = {value} straddles a band endpoint")))
            };
        }
        if !band.epsilon.le_certified(&value) {
            return Err(Error::Undecidable(format!("ρ^{k}·ρ_Γ = {value} straddles ε")));
        }
        value = &value * rho;
    }
    Err(Error::BudgetExceeded {
        what: "band power",
        needed: MAX_BAND_POWER as usize + 1,
        limit: MAX_BAND_POWER as usize,
    })
}

/// `k` and `Φ^k ∘ Γ` with contraction ratio in the band.
pub fn normalize_into_band(phi: &IfsSystem, gamma: &IfsSystem, band: &BandParams) -> Result<(u32, IfsSystem)> {
    let rho = phi
        .common_ratio()
        .ok_or_else(|| Error::Precondition("the outer system must be homogeneous".into()))?;
    let rho_gamma = gamma
        .common_ratio()
        .ok_or_else(|| Error::Precondition("the quotient system must be homogeneous".into()))?;
    let k = band_exponent(rho, rho_gamma, band)?;
    let normalized = phi.power(k as usize)?.compose(gamma)?;
    Ok((k, normalized))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn choose_band_examples() {
        let c4 = catalog::cantor_quarters();
        let band = choose_band(&c4, &c4.power(2).unwrap(), &q(1, 8), &q(1, 1)).unwrap();
        assert_eq!(band.ell, 3);
        assert_eq!(band.epsilon, q(1, 512));
        let band = choose_band(&c4, &c4.power(3).unwrap(), &q(1, 32), &q(1, 1)).unwrap();
        assert_eq!(band.ell, 4);
        assert_eq!(band.epsilon, q(1, 8192));
        assert!(matches!(choose_band(&c4, &c4, &q(1, 2), &q(1, 1)), Err(Error::Precondition(_))));
        assert!(matches!(
            band_for(&q(1, 2), &q(0, 1), &q(1, 2), &q(1, 1)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn band_exponent_boundaries() {
        let band = BandParams {
            ell: 1,
            rho: q(1, 4),
            epsilon: q(1, 32),
        };
        assert_eq!(band_exponent(&q(1, 4), &q(1, 4), &band).unwrap(), 2);
        let band = BandParams {
            ell: 1,
            rho: q(1, 5),
            epsilon: q(1, 125),
        };
        assert_eq!(band.lower(), q(1, 625));
        assert!(!band.contains(&q(1, 125)));
        assert_eq!(band_exponent(&q(1, 5), &q(1, 5), &band).unwrap(), 3);
        assert!(matches!(
            band_exponent(&q(1, 5), &q(1, 250), &band),
            Err(Error::InputsIncompatible(_))
        ));
    }

    #[test]
    fn normalize_composes() {
        let c4 = catalog::cantor_quarters();
        let band = BandParams {
            ell: 1,
            rho: q(1, 4),
            epsilon: q(1, 32),
        };
        let (k, sys) = normalize_into_band(&c4, &c4, &band).unwrap();
        assert_eq!(k, 2);
        assert_eq!(sys.len(), 8);
        assert_eq!(sys.common_ratio(), Some(&q(1, 64)));
    }
}
