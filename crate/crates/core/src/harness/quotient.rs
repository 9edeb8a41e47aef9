use super::cells::CellPartition;
use crate::error::{Error, Result};
use crate::system::{IfsSystem, OscAttribute};

/// `Γ_j = {ψ_j⁻¹ ∘ θ_i : i ∈ A_j}`, labelled by the `Θ` words it came from.
pub fn quotient_ifs(theta: &IfsSystem, psi: &IfsSystem, j: usize, cells: &CellPartition) -> Result<IfsSystem> {
    let cell = cells.cells.get(j).ok_or(Error::IndexOutOfRange {
        index: j,
        maps: cells.cells.len(),
    })?;
    if cell.len() < 2 {
        return Err(Error::InputsIncompatible(format!(
            "cell {} has {} map(s); a generating quotient needs at least two",
            j + 1,
            cell.len()
        )));
    }
    let psi_j = psi.map(j);
    if !theta.max_ratio().lt_certified(psi_j.ratio()) {
        return Err(Error::Precondition(format!(
            "ρ_Θ must be below r_{} = {}",
            j + 1,
            psi_j.ratio()
        )));
    }
    let maps = cell
        .iter()
        .map(|&i| psi_j.left_quotient(theta.map(i)))
        .collect::<Result<Vec<_>>>()?;
    let labels = cell.iter().map(|&i| theta.label(i).clone()).collect();
    Ok(IfsSystem::new(maps)?.with_labels(labels).with_osc(OscAttribute::Inherited))
}

/// All quotients in cell order.
pub fn quotients(theta: &IfsSystem, psi: &IfsSystem, cells: &CellPartition) -> Result<Vec<IfsSystem>> {
    (0..cells.cells.len()).map(|j| quotient_ifs(theta, psi, j, cells)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Scalar;

    fn first_letter_cells(theta: &IfsSystem, m: usize) -> CellPartition {
        let per = theta.len() / m;
        CellPartition {
            cells: (0..m).map(|j| (j * per..(j + 1) * per).collect()).collect(),
            mass_balanced: vec![true; m],
        }
    }

    #[test]
    fn cancellation_examples() {
        let c4 = catalog::cantor_quarters();
        let c42 = c4.power(2).unwrap();
        let cells = first_letter_cells(&c42, 2);
        for j in 0..2 {
            assert_eq!(quotient_ifs(&c42, &c4, j, &cells).unwrap(), c4);
        }
        let c43 = c4.power(3).unwrap();
        let cells = first_letter_cells(&c43, 4);
        for j in 0..4 {
            let g = quotient_ifs(&c43, &c42, j, &cells).unwrap();
            assert_eq!(g, c4);
            assert_eq!(g.common_ratio(), Some(&Scalar::ratio(1, 4)));
        }
    }

    #[test]
    fn power_identity() {
        let f5 = catalog::touching_fifths();
        for m in 1..=3 {
            let big = f5.power(m + 1).unwrap();
            let cells = first_letter_cells(&big, 3);
            let expected = f5.power(m).unwrap();
            for g in quotients(&big, &f5, &cells).unwrap() {
                assert_eq!(g, expected);
            }
        }
    }

    #[test]
    fn degenerate_cells() {
        let c4 = catalog::cantor_quarters();
        let c42 = c4.power(2).unwrap();
        let cells = CellPartition {
            cells: vec![vec![0, 1, 2], vec![3]],
            mass_balanced: vec![false, false],
        };
        assert!(matches!(quotient_ifs(&c42, &c4, 1, &cells), Err(Error::InputsIncompatible(_))));
        let cells = first_letter_cells(&c4, 1);
        assert!(matches!(quotient_ifs(&c4, &c4, 0, &cells), Err(Error::Precondition(_))));
    }
}
