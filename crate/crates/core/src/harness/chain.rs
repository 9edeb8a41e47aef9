use crate::budget::Budget;
use crate::charvec::{analyze, compare_at, CharVec, OrderResult};
use crate::error::{Error, Result};
use crate::separation::SscVerdict;
use crate::system::{checked_pow, IfsSystem};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLink {
    pub power: usize,
    pub gamma: CharVec,
    /// Order of this vector against the next power's; absent on the last link.
    pub next: Option<OrderResult>,
    pub deciding_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerChain {
    pub links: Vec<ChainLink>,
}

impl PowerChain {
    pub fn strictly_increasing(&self) -> bool {
        self.links
            .iter()
            .filter_map(|l| l.next.as_ref())
            .all(|o| *o == OrderResult::Less)
    }

    pub fn is_provisional(&self) -> bool {
        self.links.iter().any(|l| l.gamma.is_provisional())
    }
}

/// `γ(Φ), γ(Φ²), …, γ(Φ^K)` with the order between consecutive entries.
pub fn power_chain(phi: &IfsSystem, k_max: usize, budget: &Budget) -> Result<PowerChain> {
    if k_max == 0 {
        return Err(Error::ZeroPower);
    }
    if phi.osc().is_none() {
        return Err(Error::Precondition("the system needs an open set condition attribute".into()));
    }
    let needed = checked_pow(phi.len(), k_max);
    if needed > budget.max_maps {
        return Err(Error::BudgetExceeded {
            what: "maps in the largest power",
            needed,
            limit: budget.max_maps,
        });
    }
    let mut gammas = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let a = analyze(&phi.power(k)?, budget)?;
        if k == 1 {
            match a.ssc {
                SscVerdict::NotSsc { .. } => {}
                SscVerdict::Ssc { .. } => {
                    return Err(Error::Precondition("the system satisfies the SSC; it must not".into()))
                }
                SscVerdict::Undecided { .. } => {
                    return Err(Error::Precondition("could not certify that the system fails the SSC".into()))
                }
            }
        }
        gammas.push(a.gamma);
    }
    let links = (0..k_max)
        .map(|i| {
            let (next, deciding_index) = match gammas.get(i + 1) {
                Some(g) => {
                    let (o, n) = compare_at(&gammas[i], g);
                    (Some(o), n)
                }
                None => (None, None),
            };
            ChainLink {
                power: i + 1,
                gamma: gammas[i].clone(),
                next,
                deciding_index,
            }
        })
        .collect();
    Ok(PowerChain { links })
}
