//! Exhaustive enumeration of rational links with a given crossing number.
//!
//! Every odd-length composition of `n` is a continued fraction vector. Each
//! vector with each legal orientation gives one signed vector; an oriented
//! link is the pair {signed vector, its reversal}, keyed by the smaller of
//! the two. Shards of the composition stream are processed independently and
//! merged in shard order, so the result does not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas;
use crate::numtheory::{from_odd_cf, is_strongly_invertible, mod_inverse, Fraction, OddCf};
use crate::plat::{build_ps_diagram, reversal, OrientationChoice, SignedVector};
use crate::seifert::{record_for, InvariantRecord, RType};

/// Largest `n` for which compositions can be indexed by 64-bit masks.
pub const MAX_ENUMERABLE_N: u64 = 64;

/// Odd-length compositions of `n`, in lexicographic order.
///
/// A composition is encoded by the `n - 1` gaps between unit steps, with a
/// set bit for each cut and the first gap in the highest bit. Descending
/// masks then give ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    n: u64,
    next: u64,
    end: u64,
}

impl Compositions {
    fn range(n: u64, hi: u64, lo: u64) -> Self {
        Compositions { n, next: hi, end: lo }
    }
}

impl Iterator for Compositions {
    type Item = OddCf;

    fn next(&mut self) -> Option<OddCf> {
        while self.next > self.end {
            self.next -= 1;
            let mask = self.next;
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            return Some(decode(self.n, mask));
        }
        None
    }
}

fn decode(n: u64, mask: u64) -> OddCf {
    let mut parts = Vec::with_capacity(mask.count_ones() as usize + 1);
    let mut run = 1u64;
    for gap in (0..n - 1).rev() {
        if mask >> gap & 1 == 1 {
            parts.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    parts.push(run);
    OddCf::new(parts).expect("odd composition of n >= 2")
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange { what: "census", n: n as i64 });
    }
    if n > MAX_ENUMERABLE_N {
        return Err(Error::TooLarge(n as u128));
    }
    Ok(())
}

pub fn enumerate_vectors(n: u64) -> Result<Compositions> {
    check_n(n)?;
    Ok(Compositions::range(n, 1u64 << (n - 1), 0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    /// The smaller of the signed vector and its reversal.
    pub key: SignedVector,
    pub fraction: Fraction,
    pub record: InvariantRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    /// Number of contiguous pieces the composition stream is cut into.
    pub shards: usize,
    /// Full entries are kept only for `n` up to this bound.
    pub keep_entries_up_to: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { shards: 1, keep_entries_up_to: 16 }
    }
}

/// Counts of signed vectors by type, all of them and palindromic ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TypeTally {
    pub all: [u64; 4],
    pub symmetric: [u64; 4],
}

impl TypeTally {
    pub fn count(&self, t: RType) -> u64 {
        self.all[type_index(t)]
    }

    pub fn symmetric_count(&self, t: RType) -> u64 {
        self.symmetric[type_index(t)]
    }

    fn add(&mut self, other: &TypeTally) {
        for i in 0..4 {
            self.all[i] += other.all[i];
            self.symmetric[i] += other.symmetric[i];
        }
    }
}

fn type_index(t: RType) -> usize {
    match t {
        RType::I => 0,
        RType::II => 1,
        RType::III => 2,
        RType::IV => 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct KeyInfo {
    deficiency: u64,
    mu: u8,
}

#[derive(Debug, Default)]
struct Shard {
    keys: Vec<(SignedVector, KeyInfo)>,
    entries: Vec<CensusEntry>,
    tally: BTreeMap<u64, TypeTally>,
    unoriented: Vec<((BigUint, BigUint), bool)>,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub n: u64,
    oriented: BTreeMap<SignedVector, KeyInfo>,
    /// Present when `n` is within the options' entry bound.
    pub entries: Option<Vec<CensusEntry>>,
    /// Tallies over all signed vectors, without reversal identification.
    pub tally: BTreeMap<u64, TypeTally>,
    /// Unoriented classes, keyed by `(q, min(p, p^-1 mod q))`, with their
    /// strong invertibility.
    unoriented: BTreeMap<(BigUint, BigUint), bool>,
}

fn run_shard(n: u64, hi: u64, lo: u64, keep: bool) -> Result<Shard> {
    let mut shard = Shard::default();
    for v in Compositions::range(n, hi, lo) {
        let f = from_odd_cf(&v);
        let inv = mod_inverse(f.p(), f.q());
        let p_min = f.p().clone().min(inv);
        let si = f.is_two_component() && is_strongly_invertible(&f)?;
        shard.unoriented.push(((f.q().clone(), p_min), si));
        for &o in OrientationChoice::legal_for(&f) {
            let d = build_ps_diagram(&v, o)?;
            let record = record_for(&d)?;
            let sv = record.signed_vector.clone();
            let rev = reversal(&sv);
            let symmetric = rev == sv;
            let t = shard.tally.entry(record.deficiency).or_default();
            t.all[type_index(record.rtype)] += 1;
            if symmetric {
                t.symmetric[type_index(record.rtype)] += 1;
            }
            let key = sv.min(rev);
            shard.keys.push((key.clone(), KeyInfo { deficiency: record.deficiency, mu: record.mu }));
            if keep {
                shard.entries.push(CensusEntry { key, fraction: f.clone(), record });
            }
        }
    }
    Ok(shard)
}

pub fn run_census(n: u64, opts: &CensusOptions) -> Result<Census> {
    check_n(n)?;
    let total = 1u64 << (n - 1);
    let shards = opts.shards.max(1) as u64;
    let keep = n <= opts.keep_entries_up_to;
    let bounds: Vec<(u64, u64)> = (0..shards)
        .map(|i| {
            let hi = total - total * i / shards;
            let lo = total - total * (i + 1) / shards;
            (hi, lo)
        })
        .collect();
    let results: Vec<Result<Shard>> = if shards == 1 {
        vec![run_shard(n, total, 0, keep)]
    } else {
        bounds
            .par_iter()
            .map(|&(hi, lo)| run_shard(n, hi, lo, keep))
            .collect()
    };

    let mut census = Census {
        n,
        oriented: BTreeMap::new(),
        entries: keep.then(Vec::new),
        tally: BTreeMap::new(),
        unoriented: BTreeMap::new(),
    };
    for shard in results {
        let shard = shard?;
        for (key, info) in shard.keys {
            let prev = census.oriented.insert(key.clone(), info);
            if let Some(prev) = prev {
                assert_eq!(prev, info, "reversal pair {key} disagrees on invariants");
            }
        }
        for (d, t) in &shard.tally {
            census.tally.entry(*d).or_default().add(t);
        }
        for (k, si) in shard.unoriented {
            census.unoriented.insert(k, si);
        }
        if let Some(entries) = census.entries.as_mut() {
            entries.extend(shard.entries);
        }
    }
    Ok(census)
}

impl Census {
    /// Oriented links up to reversal.
    pub fn oriented_count(&self) -> u64 {
        self.oriented.len() as u64
    }

    pub fn oriented_count_at(&self, d: u64) -> u64 {
        self.oriented.values().filter(|i| i.deficiency == d).count() as u64
    }

    pub fn oriented_keys(&self) -> impl Iterator<Item = &SignedVector> {
        self.oriented.keys()
    }

    pub fn knot_count(&self) -> u64 {
        self.oriented.values().filter(|i| i.mu == 1).count() as u64
    }

    pub fn link_count(&self) -> u64 {
        self.oriented.values().filter(|i| i.mu == 2).count() as u64
    }

    pub fn unoriented_count(&self) -> u64 {
        self.unoriented.len() as u64
    }

    pub fn unoriented_knot_count(&self) -> u64 {
        self.unoriented.keys().filter(|(q, _)| q.bit(0)).count() as u64
    }

    pub fn unoriented_link_count(&self) -> u64 {
        self.unoriented_count() - self.unoriented_knot_count()
    }

    pub fn unoriented_fractions(&self) -> Vec<Fraction> {
        self.unoriented
            .keys()
            .map(|(q, p)| Fraction::new(p.clone(), q.clone()).expect("census fraction"))
            .collect()
    }

    pub fn strongly_invertible_count(&self) -> u64 {
        self.unoriented.values().filter(|&&si| si).count() as u64
    }

    /// All signed vectors, `|Omega_n|`.
    pub fn omega(&self) -> u64 {
        self.tally.values().map(|t| t.all.iter().sum::<u64>()).sum()
    }

    /// Palindromic signed vectors, `|Omega'_n|`.
    pub fn omega_sym(&self) -> u64 {
        self.tally.values().map(|t| t.symmetric.iter().sum::<u64>()).sum()
    }

    pub fn type_total(&self) -> TypeTally {
        let mut t = TypeTally::default();
        for x in self.tally.values() {
            t.add(x);
        }
        t
    }

    pub fn count_table(&self) -> CountTable {
        let n = self.n;
        assert!(
            self.tally.keys().all(|&d| d <= (n - 2) / 2),
            "census deficiency beyond (n - 2) / 2"
        );
        let rows = (0..=(n - 2) / 2)
            .map(|d| {
                let t = self.tally.get(&d).copied().unwrap_or_default();
                CountRow {
                    d,
                    r1: t.count(RType::I).into(),
                    r3: t.count(RType::III).into(),
                    rs3: t.symmetric_count(RType::III).into(),
                    lambda_nd: self.oriented_count_at(d).into(),
                }
            })
            .collect();
        CountTable {
            n,
            rows,
            lambda: self.oriented_count().into(),
            unoriented: self.unoriented_count().into(),
            omega: self.omega().into(),
            omega_sym: self.omega_sym().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub d: u64,
    #[serde(serialize_with = "formulas::ser_big")]
    pub r1: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub r3: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub rs3: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub lambda_nd: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub n: u64,
    pub rows: Vec<CountRow>,
    #[serde(serialize_with = "formulas::ser_big")]
    pub lambda: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub unoriented: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub omega: BigUint,
    #[serde(serialize_with = "formulas::ser_big")]
    pub omega_sym: BigUint,
}

impl CountTable {
    /// The table predicted by the closed forms.
    pub fn from_formulas(n: u64) -> Result<CountTable> {
        let lambda = formulas::lambda_count(n)?;
        let rows: Vec<CountRow> = (0..=(n - 2) / 2)
            .map(|d| {
                let (ni, di) = (n as i64, d as i64);
                CountRow {
                    d,
                    r1: formulas::r1_count(ni, di),
                    r3: formulas::r3_count(ni, di),
                    rs3: formulas::rs3_count(ni, di),
                    lambda_nd: formulas::lambda_nd(n, d).value,
                }
            })
            .collect();
        let omega = rows.iter().map(|r| &r.r1 + &r.r3).sum::<BigUint>() * 2u8;
        let omega_sym = rows.iter().map(|r| r.rs3.clone()).sum::<BigUint>() * 2u8;
        // The unoriented closed form needs n >= 3; the lone 2-crossing class
        // is the Hopf link.
        let unoriented = if n == 2 { BigUint::from(1u8) } else { formulas::u_count(n)? };
        Ok(CountTable { n, rows, lambda, unoriented, omega, omega_sym })
    }

    /// Sum over deficiencies equals the total, and each deficiency splits
    /// into Type I, Type III and symmetric Type III counts.
    pub fn check(&self) -> std::result::Result<(), String> {
        let sum: BigUint = self.rows.iter().map(|r| r.lambda_nd.clone()).sum();
        if sum != self.lambda {
            return Err(format!("n = {}: deficiency counts sum to {sum}, total is {}", self.n, self.lambda));
        }
        for r in &self.rows {
            if &r.r1 + &r.r3 + &r.rs3 != r.lambda_nd {
                return Err(format!(
                    "n = {}, d = {}: {} + {} + {} != {}",
                    self.n, r.d, r.r1, r.r3, r.rs3, r.lambda_nd
                ));
            }
        }
        if (&self.omega + &self.omega_sym) != &self.lambda * 2u8 {
            return Err(format!("n = {}: (omega + omega') / 2 != total", self.n));
        }
        Ok(())
    }
}

pub fn census_unoriented(n: u64) -> Result<(u64, Vec<Fraction>)> {
    let c = run_census(n, &CensusOptions { keep_entries_up_to: 0, ..Default::default() })?;
    Ok((c.unoriented_count(), c.unoriented_fractions()))
}

pub fn census_oriented(n: u64) -> Result<(u64, Vec<CensusEntry>)> {
    let c = run_census(n, &CensusOptions { keep_entries_up_to: u64::MAX, ..Default::default() })?;
    let count = c.oriented_count();
    let mut seen = BTreeSet::new();
    let entries = c
        .entries
        .unwrap_or_default()
        .into_iter()
        .filter(|e| seen.insert(e.key.clone()))
        .collect();
    Ok((count, entries))
}

pub fn tally_by_deficiency(n: u64) -> Result<CountTable> {
    let c = run_census(n, &CensusOptions { keep_entries_up_to: 0, ..Default::default() })?;
    Ok(c.count_table())
}

pub fn census_strongly_invertible(n: u64) -> Result<u64> {
    let c = run_census(n, &CensusOptions { keep_entries_up_to: 0, ..Default::default() })?;
    Ok(c.strongly_invertible_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vectors(n: u64) -> Vec<Vec<u64>> {
        enumerate_vectors(n).unwrap().map(|v| v.entries().to_vec()).collect()
    }

    #[test]
    fn compositions() {
        assert_eq!(vectors(2), vec![vec![2]]);
        assert_eq!(vectors(3), vec![vec![1, 1, 1], vec![3]]);
        assert_eq!(vectors(4), vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1], vec![4]]);
        assert_eq!(vectors(10).len(), 1 << 8);
        assert!(enumerate_vectors(1).is_err());
    }

    #[test]
    fn small_censuses() {
        assert_eq!(census_unoriented(3).unwrap().0, 2);
        assert_eq!(census_unoriented(4).unwrap().0, 3);
        assert_eq!(census_unoriented(2).unwrap().0, 1);
        assert_eq!(census_oriented(4).unwrap().0, 5);
        assert_eq!(census_strongly_invertible(4).unwrap(), 0);
        assert_eq!(census_strongly_invertible(5).unwrap(), 2);
    }

    #[test]
    fn row_six() {
        let t = tally_by_deficiency(6).unwrap();
        let triples: Vec<(u64, u64, u64)> = t
            .rows
            .iter()
            .map(|r| {
                let f = |x: &BigUint| u64::try_from(x).unwrap();
                (f(&r.r1), f(&r.r3), f(&r.rs3))
            })
            .collect();
        assert_eq!(triples, vec![(3, 2, 2), (2, 3, 1), (0, 1, 1)]);
        assert_eq!(t, CountTable::from_formulas(6).unwrap());
        t.check().unwrap();
    }

    #[test]
    fn sharding_is_deterministic() {
        let one = run_census(11, &CensusOptions::default()).unwrap();
        let many = run_census(11, &CensusOptions { shards: 7, ..Default::default() }).unwrap();
        assert_eq!(one.count_table(), many.count_table());
        assert_eq!(one.entries, many.entries);
        assert!(one.oriented_keys().eq(many.oriented_keys()));
    }
}
