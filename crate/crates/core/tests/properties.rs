use num_bigint::BigUint;
use proptest::prelude::*;
use ratlink::numtheory::{
    from_odd_cf, is_strongly_invertible, to_odd_cf, unoriented_equivalent, Fraction, OddCf,
};
use ratlink::plat::{build_ps_diagram, mirror, reversal, OrientationChoice, SignedVector};
use ratlink::seifert::{blocks, circle_chain, classify_type, invariants, reduce_to_fixpoint};

fn coprime_fractions(q_max: u64) -> impl Iterator<Item = Fraction> {
    (2..=q_max).flat_map(|q| (1..q).filter_map(move |p| Fraction::from_u64(p, q).ok()))
}

/// Plain Euclid, of whatever length it comes out.
fn greedy(p: u64, q: u64) -> Vec<u64> {
    let (mut p, mut q, mut out) = (p, q, Vec::new());
    while p != 0 {
        out.push(q / p);
        (p, q) = (q % p, p);
    }
    out
}

#[test]
fn continued_fraction_round_trips() {
    for f in coprime_fractions(500) {
        let v = to_odd_cf(&f).unwrap();
        assert_eq!(from_odd_cf(&v), f);
        assert_eq!(to_odd_cf(&from_odd_cf(&v)).unwrap(), v);
        let (p, q) = (u64::try_from(f.p()).unwrap(), u64::try_from(f.q()).unwrap());
        assert_eq!(v.crossing_number(), greedy(p, q).iter().sum::<u64>() as u128);
    }
}

#[test]
fn reversal_inverts_the_numerator() {
    for f in coprime_fractions(500) {
        let v = to_odd_cf(&f).unwrap();
        let r = from_odd_cf(&v.reversed());
        assert_eq!(r.q(), f.q());
        assert_eq!((r.p() * f.p()) % f.q(), BigUint::from(1u8), "{f}");
    }
}

#[test]
fn unoriented_equivalence_is_an_equivalence() {
    for q in 2..=200u64 {
        let fs: Vec<Fraction> = (1..q).filter_map(|p| Fraction::from_u64(p, q).ok()).collect();
        let rel: Vec<Vec<bool>> =
            fs.iter().map(|a| fs.iter().map(|b| unoriented_equivalent(a, b)).collect()).collect();
        for i in 0..fs.len() {
            assert!(rel[i][i]);
            for j in 0..fs.len() {
                assert_eq!(rel[i][j], rel[j][i]);
                if rel[i][j] {
                    for k in 0..fs.len() {
                        assert!(!rel[j][k] || rel[i][k], "q = {q}");
                    }
                }
            }
        }
    }
}

#[test]
fn strongly_invertible_links_have_odd_crossing_number() {
    for f in coprime_fractions(500).filter(|f| f.is_two_component()) {
        if is_strongly_invertible(&f).unwrap() {
            assert_eq!(to_odd_cf(&f).unwrap().crossing_number() % 2, 1, "{f}");
        }
    }
}

#[test]
fn long_mirror_example_is_type_three_to_four() {
    let sv = SignedVector::new(vec![3, 2, 1, 5, -4, 1, 2, 2, 3, 3, -1, -3, -1, 3, 2]).unwrap();
    let m = mirror(&sv).unwrap();
    assert_eq!(classify_type(&sv), ratlink::RType::III);
    assert_eq!(classify_type(&m), ratlink::RType::IV);
}

fn odd_cf() -> impl Strategy<Value = OddCf> {
    (0usize..5)
        .prop_flat_map(|k| proptest::collection::vec(1u64..6, 2 * k + 1))
        .prop_filter("not the unknot", |v| v != &[1])
        .prop_map(|v| OddCf::new(v).unwrap())
}

fn oriented() -> impl Strategy<Value = (OddCf, OrientationChoice)> {
    (odd_cf(), any::<bool>()).prop_map(|(v, plus)| {
        let o = if !from_odd_cf(&v).is_two_component() {
            OrientationChoice::Forced
        } else if plus {
            OrientationChoice::Plus
        } else {
            OrientationChoice::Minus
        };
        (v, o)
    })
}

fn sign_counts(sv: &SignedVector) -> (usize, usize) {
    let b = blocks(sv);
    let pos = b.iter().filter(|b| b.sign > 0).count();
    (pos, b.len() - pos)
}

proptest! {
    #[test]
    fn random_round_trips(v in odd_cf()) {
        prop_assert_eq!(to_odd_cf(&from_odd_cf(&v)).unwrap(), v);
    }

    #[test]
    fn mirror_is_an_involution((v, o) in oriented()) {
        let sv = build_ps_diagram(&v, o).unwrap().signed_vector();
        let m = mirror(&sv).unwrap();
        prop_assert_eq!(mirror(&m).unwrap(), sv.clone());
        let (p, n) = sign_counts(&sv);
        prop_assert_eq!(sign_counts(&m), (n, p));
        let d = |s: &SignedVector| reduce_to_fixpoint(&circle_chain(s).unwrap()).1;
        prop_assert_eq!(d(&sv), d(&m));
    }

    #[test]
    fn reversal_is_realized_by_the_reversed_vector((v, o) in oriented()) {
        let sv = build_ps_diagram(&v, o).unwrap().signed_vector();
        let rev = reversal(&sv);
        prop_assert_eq!(reversal(&rev), sv.clone());
        let f = from_odd_cf(&v.reversed());
        let found = OrientationChoice::legal_for(&f)
            .iter()
            .any(|&o| build_ps_diagram(&v.reversed(), o).unwrap().signed_vector() == rev);
        prop_assert!(found);
        let a = invariants(&from_odd_cf(&v), o).unwrap();
        let o2 = OrientationChoice::legal_for(&f)
            .iter()
            .copied()
            .find(|&o| build_ps_diagram(&v.reversed(), o).unwrap().signed_vector() == rev)
            .unwrap();
        let b = invariants(&f, o2).unwrap();
        prop_assert_eq!(
            (a.n, a.mu, a.s, a.genus, a.braid, a.deficiency),
            (b.n, b.mu, b.s, b.genus, b.braid, b.deficiency)
        );
        prop_assert_eq!(a.rtype.reversed(), b.rtype);
    }

    #[test]
    fn block_parity_matches_type((v, o) in oriented()) {
        let sv = build_ps_diagram(&v, o).unwrap().signed_vector();
        let even = blocks(&sv).len() % 2 == 0;
        let t = classify_type(&sv);
        prop_assert_eq!(even, matches!(t, ratlink::RType::I | ratlink::RType::II));
    }
}
