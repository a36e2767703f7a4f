use matroid_xf_core::factorization::{
    build_extended_formulation, factorize_from_transcripts, verify_vertex_lifting,
};
use matroid_xf_core::hitting::greedy_hitting_family;
use matroid_xf_core::protocol::{check_protocol, CanonicalOrdering};
use matroid_xf_core::{exchange_bijection, BasePolytope, Caps, ElementSet, Matroid, RankOracle};
use proptest::prelude::*;

/// Loopless binary matroids given by nonzero columns over `rows` bits.
fn binary_matroid() -> impl Strategy<Value = Matroid> {
    (2usize..=4)
        .prop_flat_map(|rows| (Just(rows), prop::collection::vec(1u8..(1 << rows), 3..=8)))
        .prop_map(|(rows, cols)| {
            let matrix: Vec<Vec<u8>> =
                (0..rows).map(|i| cols.iter().map(|c| (c >> i) & 1).collect()).collect();
            Matroid::binary(&matrix).unwrap()
        })
}

fn any_matroid() -> impl Strategy<Value = Matroid> {
    prop_oneof![
        binary_matroid(),
        (2usize..=7).prop_flat_map(|n| (1..=n, Just(n))).prop_map(|(r, n)| Matroid::uniform(r, n).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_axioms(m in any_matroid()) {
        let sets: Vec<ElementSet> = m.ground().subsets().collect();
        for &a in &sets {
            let ra = m.rank_of(a);
            prop_assert!(ra <= a.len());
            for e in m.ground().difference(a).iter() {
                let rb = m.rank_of(a.with(e));
                prop_assert!(rb == ra || rb == ra + 1);
            }
        }
        for &a in sets.iter().step_by(3) {
            for &b in sets.iter().step_by(5) {
                prop_assert!(
                    m.rank_of(a.union(b)) + m.rank_of(a.intersection(b)) <= m.rank_of(a) + m.rank_of(b)
                );
            }
        }
    }

    #[test]
    fn dual_bases_are_complements(m in binary_matroid()) {
        let caps = Caps::default();
        let Ok(d) = m.dual() else { return Ok(()) };
        let ground = m.ground();
        let mut expected: Vec<ElementSet> =
            m.bases(&caps).unwrap().iter().map(|b| ground.difference(b.set())).collect();
        let mut got: Vec<ElementSet> = d.bases(&caps).unwrap().iter().map(|b| b.set()).collect();
        expected.sort_by_key(|s| s.bits());
        got.sort_by_key(|s| s.bits());
        prop_assert_eq!(&got, &expected);
        for s in ground.subsets() {
            let oracle = expected.iter().map(|b| b.intersection(s).len()).max().unwrap();
            prop_assert_eq!(d.rank_of(s), oracle);
        }
    }

    #[test]
    fn exchange_bijections_exist(m in any_matroid(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let bases = m.bases(&Caps::default()).unwrap();
        let (b, b2) = (bases[i.index(bases.len())], bases[j.index(bases.len())]);
        let bij = exchange_bijection(&m, b, b2).unwrap();
        prop_assert!(bij.is_valid(&m));
    }

    #[test]
    fn protocol_realizes_slack(m in any_matroid()) {
        let p = BasePolytope::new(m, &Caps::default()).unwrap();
        prop_assert!(p.flacet_report().disagreements.is_empty());
        let fam = greedy_hitting_family(&p);
        prop_assert!(check_protocol(&p, &fam, &CanonicalOrdering).unwrap().is_ok());
        let fac = factorize_from_transcripts(&p, &fam).unwrap();
        prop_assert!(fac.is_nonnegative());
        prop_assert_eq!(fac.first_mismatch(&p), None);
        let ef = build_extended_formulation(&p, &fac);
        prop_assert!(verify_vertex_lifting(&p, &ef, &fac).passed());
    }
}
