mod common;

use std::collections::BTreeMap;

use kh_core::algebra::{rank_mod_p, reduce_chain, smith_normal_form, IntMatrix};
use kh_core::braid::split_union;
use kh_core::complex::{build_differentials, reduce_complex, verify_d_squared};
use kh_core::homology::{compute, framed_table};
use kh_core::polynomial::{bracket, graded_euler};
use kh_core::{BraidWord, ComputeOptions, HomologyTable};
use proptest::prelude::*;

fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        let letter = (1..n as i32, any::<bool>()).prop_map(|(k, neg)| if neg { -k } else { k });
        proptest::collection::vec(letter, 0..=max_len)
            .prop_map(move |letters| BraidWord::new(n, letters).unwrap())
    })
}

fn table(w: &BraidWord) -> HomologyTable {
    compute(&w.closure(), &ComputeOptions::default()).unwrap().table.to_classical().unwrap()
}

fn poincare(t: &HomologyTable) -> BTreeMap<(i32, i32), usize> {
    t.groups.iter().filter(|(_, g)| g.free_rank > 0).map(|(k, g)| (*k, g.free_rank)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differential_squares_to_zero(w in braid(5, 9)) {
        let c = build_differentials(&w.closure()).unwrap();
        prop_assert!(verify_d_squared(&c).is_ok());
    }

    #[test]
    fn library_matches_oracle(w in braid(4, 7)) {
        let got = common::from_library(&table(&w));
        prop_assert_eq!(got, common::classical_homology(w.strands(), w.letters()));
    }

    #[test]
    fn euler_characteristic_is_the_bracket(w in braid(4, 9)) {
        let c = compute(&w.closure(), &ComputeOptions::default()).unwrap();
        prop_assert_eq!(graded_euler(&c.table).unwrap(), bracket(&w.closure()).unwrap());
    }

    #[test]
    fn conjugation_invariance(w in braid(4, 7), g in 1i32..4, inv in any::<bool>()) {
        let n = w.strands() as i32;
        let g = (g - 1) % (n - 1) + 1;
        let g = if inv { -g } else { g };
        let mut letters = vec![g];
        letters.extend_from_slice(w.letters());
        letters.push(-g);
        let conj = BraidWord::new(w.strands(), letters).unwrap();
        prop_assert_eq!(table(&w).groups, table(&conj).groups);
    }

    #[test]
    fn stabilization_invariance(w in braid(3, 6), positive in any::<bool>()) {
        let n = w.strands();
        let mut letters = w.letters().to_vec();
        letters.push(if positive { n as i32 } else { -(n as i32) });
        let stabilized = BraidWord::new(n + 1, letters).unwrap();
        prop_assert_eq!(table(&w).groups, table(&stabilized).groups);
    }

    #[test]
    fn mirror_reflects_rational_ranks(w in braid(4, 8)) {
        prop_assume!(w.components() == 1);
        let mirrored: BTreeMap<(i32, i32), usize> =
            poincare(&table(&w.inverse())).into_iter().map(|((i, j), r)| ((-i, -j), r)).collect();
        prop_assert_eq!(poincare(&table(&w)), mirrored);
    }

    #[test]
    fn kunneth_for_split_unions(a in braid(3, 5), b in braid(3, 4)) {
        let (pa, pb) = (poincare(&table(&a)), poincare(&table(&b)));
        let mut product: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        for ((i1, j1), r1) in &pa {
            for ((i2, j2), r2) in &pb {
                *product.entry((i1 + i2, j1 + j2)).or_default() += r1 * r2;
            }
        }
        prop_assert_eq!(poincare(&table(&split_union(&a, &b))), product);
    }

    #[test]
    fn bracket_is_multiplicative(a in braid(3, 6), b in braid(3, 6)) {
        let both = bracket(&split_union(&a, &b).closure()).unwrap();
        prop_assert_eq!(both, &bracket(&a.closure()).unwrap() * &bracket(&b.closure()).unwrap());
    }

    #[test]
    fn universal_coefficients(w in braid(4, 8)) {
        let opts = ComputeOptions { mod_p: vec![2, 3, 5, 7], ..ComputeOptions::default() };
        let c = compute(&w.closure(), &opts).unwrap();
        for (p, dims) in &c.mod_p {
            let t_p = |a: i32, b: i32| c.table.get(a, b).p_torsion_count(*p);
            let mut keys: Vec<(i32, i32)> = dims.keys().copied().collect();
            keys.extend(c.table.groups.keys().copied());
            keys.extend(c.table.groups.keys().map(|&(a, b)| (a + 2, b)));
            for (a, b) in keys {
                let expect = c.table.get(a, b).free_rank + t_p(a, b) + t_p(a - 2, b);
                prop_assert_eq!(dims.get(&(a, b)).copied().unwrap_or(0), expect, "p={} at ({}, {})", p, a, b);
            }
        }
    }

    #[test]
    fn reduction_preserves_homology(w in braid(4, 8)) {
        let c = build_differentials(&w.closure()).unwrap();
        let r = reduce_complex(&c);
        prop_assert!(verify_d_squared(&r).is_ok());
        prop_assert!(r.total_dim() <= c.total_dim());
        prop_assert_eq!(framed_table(&c).unwrap(), framed_table(&r).unwrap());
    }

    #[test]
    fn smith_form_matches_oracles(m in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 5), 4)) {
        let s = smith_normal_form(&IntMatrix::from_dense(&m));
        let d: Vec<i128> = s.invariant_factors.iter().map(|x| i128::from(x.to_i64().unwrap())).collect();
        let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        prop_assert_eq!(&d, &common::determinantal_invariants(&wide));
        prop_assert_eq!(&d, &common::smith_diagonal(&wide));
        prop_assert_eq!(s.rank, d.len());
        for p in [2u64, 3, 5, 7] {
            let expect = d.iter().filter(|&&x| x % i128::from(p) != 0).count();
            prop_assert_eq!(rank_mod_p(&IntMatrix::from_dense(&m), p).unwrap(), expect);
        }
    }

    #[test]
    fn chain_reduction_keeps_cokernel(
        a in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 4),
    ) {
        let d2 = IntMatrix::from_dense(&a);
        let chain = vec![IntMatrix::zeros(0, 4), d2];
        let r = reduce_chain(&chain);
        let before = smith_normal_form(&chain[1]);
        let after = smith_normal_form(&r.maps[1]);
        prop_assert_eq!(before.torsion().cloned().collect::<Vec<_>>(), after.torsion().cloned().collect::<Vec<_>>());
        prop_assert_eq!(4 - before.rank, r.survivors[0].len() - after.rank);
    }
}
