use num_bigint::BigUint;
use ratlink::census::{census_oriented, run_census, CensusOptions, CountTable};
use ratlink::formulas::{lambda_count, tk, tl, tls, u_count};
use ratlink::plat::reversal;
use ratlink::RType;

const N_MAX: u64 = 14;

#[test]
fn census_matches_closed_forms() {
    for n in 2..=N_MAX {
        let c = run_census(n, &CensusOptions { shards: 4, ..Default::default() }).unwrap();
        let table = c.count_table();
        table.check().unwrap();
        assert_eq!(table, CountTable::from_formulas(n).unwrap(), "n = {n}");
        assert_eq!(BigUint::from(c.oriented_count()), lambda_count(n).unwrap());
        assert_eq!(c.omega() + c.omega_sym(), 2 * c.oriented_count());
        if n >= 3 {
            assert_eq!(BigUint::from(c.unoriented_count()), u_count(n).unwrap());
        }
        if n >= 4 {
            assert_eq!(BigUint::from(c.unoriented_knot_count()), tk(n).unwrap());
            assert_eq!(BigUint::from(c.unoriented_link_count()), tl(n).unwrap());
            assert_eq!(BigUint::from(c.knot_count()), tk(n).unwrap());
        }
        let si = c.strongly_invertible_count();
        if n % 2 == 0 {
            assert_eq!(si, 0);
        } else if n >= 5 {
            assert_eq!(BigUint::from(si), tls(n).unwrap());
        }
        let t = c.type_total();
        assert_eq!(t.count(RType::I), t.count(RType::II));
        assert_eq!(t.count(RType::III), t.count(RType::IV));
        assert_eq!(t.symmetric_count(RType::I), 0);
        assert_eq!(t.symmetric_count(RType::II), 0);
        assert_eq!(t.symmetric_count(RType::III), t.symmetric_count(RType::IV));
    }
}

#[test]
fn entries_are_canonical_and_consistent() {
    for n in 2..=10 {
        let (count, entries) = census_oriented(n).unwrap();
        assert_eq!(count as usize, entries.len());
        for e in entries {
            let sv = &e.record.signed_vector;
            assert_eq!(e.key, sv.clone().min(reversal(sv)));
            assert!(e.record.deficiency <= (n - 2) / 2);
            assert_eq!(e.record.n + 2 - e.record.s - e.record.mu as u64, 2 * e.record.genus);
            assert_eq!(e.record.strongly_invertible.is_some(), e.record.mu == 2);
        }
    }
}

#[test]
fn out_of_range_n() {
    assert!(run_census(1, &CensusOptions::default()).is_err());
}
