use ifsx_core::charvec::analyze;
use ifsx_core::harness::{band_exponent, partition_cells, quotients, BandParams, CellPartition};
use ifsx_core::separation::min_gap;
use ifsx_core::{Budget, IfsSystem, OrthogonalMap, Point, Scalar, Similitude};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn signed_perm(d: usize, swap: bool, signs: &[bool]) -> OrthogonalMap {
    let rows = (0..d)
        .map(|r| {
            let col = if swap && d == 2 { 1 - r } else { r };
            (0..d)
                .map(|c| match (c == col, signs[r]) {
                    (false, _) => q(0, 1),
                    (true, false) => q(1, 1),
                    (true, true) => q(-1, 1),
                })
                .collect()
        })
        .collect();
    OrthogonalMap::from_rows(rows).unwrap()
}

fn similitude(d: usize) -> impl Strategy<Value = Similitude> {
    (
        (1i64..=5, 2i64..=9).prop_filter("contracting", |(p, q)| p < q),
        any::<bool>(),
        proptest::collection::vec(any::<bool>(), d),
        proptest::collection::vec((-9i64..=9, 1i64..=8), d),
    )
        .prop_map(move |((p, den), swap, signs, t)| {
            Similitude::new(q(p, den), signed_perm(d, swap, &signs), Point::from_ratios(&t)).unwrap()
        })
}

/// Homogeneous system on the line with ratio `1/den` and offsets in `[0, 1]`.
fn line_system() -> impl Strategy<Value = IfsSystem> {
    (2i64..=6, proptest::collection::vec((0i64..=8, any::<bool>()), 2..=4)).prop_map(|(den, ts)| {
        let maps = ts
            .into_iter()
            .map(|(t, flip)| {
                let o = OrthogonalMap::from_rows(vec![vec![if flip { q(-1, 1) } else { q(1, 1) }]]).unwrap();
                Similitude::new(q(1, den), o, Point::from_ratios(&[(t, 8)])).unwrap()
            })
            .collect();
        IfsSystem::new(maps).unwrap()
    })
}

fn first_letter_cells(len: usize, m: usize) -> CellPartition {
    let per = len / m;
    CellPartition {
        cells: (0..m).map(|j| (j * per..(j + 1) * per).collect()).collect(),
        mass_balanced: vec![true; m],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative((f, g, h) in (1usize..=2).prop_flat_map(|d| (similitude(d), similitude(d), similitude(d)))) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn left_quotient_cancels((f, g) in (1usize..=2).prop_flat_map(|d| (similitude(d), similitude(d)))) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(f.left_quotient(&fg).unwrap(), g);
    }

    #[test]
    fn gamma_is_a_probability_vector(sys in line_system()) {
        let a = analyze(&sys, &Budget::default().with_nodes(20_000)).unwrap();
        prop_assert!(a.gamma.support_max() <= sys.len());
        if !a.partition.is_provisional() {
            prop_assert_eq!(a.gamma.sum(), q(1, 1));
            if a.partition.len() == 1 {
                prop_assert_eq!(a.gamma.entry(sys.len()), q(1, 1));
            }
        }
    }

    #[test]
    fn powers_share_the_dimension(sys in line_system()) {
        let s1 = sys.similarity_dimension().enclosure();
        let s2 = sys.power(2).unwrap().similarity_dimension().enclosure();
        prop_assert!(s1.overlaps(&s2));
    }

    #[test]
    fn quotients_of_powers_are_powers(sys in line_system(), m in 1usize..=2) {
        let big = sys.power(m + 1).unwrap();
        let expected = sys.power(m).unwrap();
        for g in quotients(&big, &sys, &first_letter_cells(big.len(), sys.len())).unwrap() {
            prop_assert_eq!(g, expected.clone());
        }
    }

    #[test]
    fn cells_are_closed_under_adjacency(sys in line_system()) {
        let b = Budget::default().with_nodes(20_000);
        let Ok(delta) = min_gap(&sys, &b) else { return Ok(()) };
        let theta = sys.power(3).unwrap();
        let Ok(cells) = partition_cells(&theta, &sys, &delta, &q(2, 1), &b) else { return Ok(()) };
        prop_assert_eq!(&cells.cells, &first_letter_cells(theta.len(), sys.len()).cells);
        for (i, j) in analyze(&theta, &b).unwrap().edges {
            prop_assert_eq!(cells.cell_of(i), cells.cell_of(j));
        }
    }

    #[test]
    fn band_exponent_lands_in_the_band(rho_den in 2i64..=9, g in (1i64..=8, 2i64..=9), eps in (1i64..=3, 50i64..=5000)) {
        let rho = q(1, rho_den);
        let rho_gamma = q(g.0.min(g.1 - 1), g.1);
        let band = BandParams { ell: 1, rho: rho.clone(), epsilon: q(eps.0, eps.1) };
        let k = band_exponent(&rho, &rho_gamma, &band).unwrap();
        let value = &rho.pow(k) * &rho_gamma;
        prop_assert!(band.contains(&value));
        prop_assert!(!band.contains(&(&value / &rho)));
    }
}
