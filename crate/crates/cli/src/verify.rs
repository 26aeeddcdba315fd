//! Identity and census suites behind `ratlink verify`.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigUint;
use ratlink::census::{run_census, CensusOptions, CountTable};
use ratlink::formulas::{
    convolved_fib, h_count, lambda_count, lambda_n0, lambda_nd, r1_count, r3_count, rs3_count, tk,
    tl, tls, u_count, verify_corollary,
};
use ratlink::RType;
use serde::Serialize;

/// Published counts for n = 2..=13: (r1, r3, rs3) per deficiency, then the
/// total number of oriented links.
pub const PUBLISHED: &[(u64, &[(u64, u64, u64)], u64)] = &[
    (2, &[(0, 1, 1)], 2),
    (3, &[(0, 1, 1)], 2),
    (4, &[(1, 1, 1), (0, 1, 1)], 5),
    (5, &[(2, 1, 1), (0, 2, 0)], 6),
    (6, &[(3, 2, 2), (2, 3, 1), (0, 1, 1)], 15),
    (7, &[(4, 4, 2), (6, 4, 0), (0, 3, 1)], 24),
    (8, &[(6, 7, 3), (12, 8, 2), (3, 6, 2), (0, 1, 1)], 51),
    (9, &[(10, 11, 3), (20, 18, 0), (12, 10, 2), (0, 4, 0)], 90),
    (10, &[(17, 17, 5), (34, 37, 3), (30, 21, 5), (4, 10, 2), (0, 1, 1)], 187),
    (11, &[(28, 27, 5), (62, 68, 0), (60, 51, 5), (20, 20, 0), (0, 5, 1)], 352),
    (12, &[(45, 44, 8), (116, 119, 5), (115, 118, 10), (60, 45, 5), (5, 15, 3), (0, 1, 1)], 715),
    (13, &[(72, 72, 8), (212, 208, 0), (228, 246, 10), (140, 116, 0), (30, 35, 3), (0, 6, 0)], 1386),
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub n_max: u64,
    pub census_n_max: Option<u64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

type Outcome = Result<String, String>;

fn run(name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(detail)) => Check { name, pass: true, detail },
        Ok(Err(detail)) => Check { name, pass: false, detail },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Check { name, pass: false, detail: msg }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn deficiencies(n: u64) -> std::ops::RangeInclusive<u64> {
    0..=(n - 2) / 2
}

pub fn identities(n_max: u64) -> Vec<Check> {
    let range = 2..=n_max;
    let mut out = Vec::new();
    out.push(run("merged_count_is_convolved_fibonacci", || {
        for n in range.clone() {
            for d in deficiencies(n) {
                let (ni, di) = (n as i64, d as i64);
                let h = h_count(ni, di);
                ensure(h == r1_count(ni, di) + r3_count(ni, di), || format!("H({n},{d}) != r1 + r3"))?;
                ensure(h == convolved_fib(d as usize, (n - d - 1) as usize), || {
                    format!("H({n},{d}) != F^({d})_{}", n - d - 1)
                })?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("symmetric_count_is_convolved_fibonacci", || {
        for n in range.clone() {
            for d in deficiencies(n) {
                let want = if (n * d) % 2 == 0 {
                    convolved_fib((d / 2) as usize, (n / 2 - (d + 1) / 2) as usize)
                } else {
                    BigUint::from(0u8)
                };
                ensure(rs3_count(n as i64, d as i64) == want, || format!("rs3({n},{d})"))?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("merged_count_recurrence", || {
        for n in range.clone() {
            let n = n as i64;
            for d in -1..=(n - 2) / 2 {
                ensure(
                    h_count(n + 1, d + 1) == h_count(n, d + 1) + h_count(n - 1, d + 1) + h_count(n - 1, d),
                    || format!("recurrence at ({n},{d})"),
                )?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("deficiency_split", || {
        for n in range.clone() {
            for d in deficiencies(n) {
                let (ni, di) = (n as i64, d as i64);
                let sum = r1_count(ni, di) + r3_count(ni, di) + rs3_count(ni, di);
                ensure(lambda_nd(n, d).value == sum, || format!("lambda({n},{d}) != r1 + r3 + rs3"))?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("partition_sum", || {
        for n in range.clone() {
            let sum: BigUint = deficiencies(n).map(|d| lambda_nd(n, d).value).sum();
            ensure(sum == lambda_count(n).map_err(|e| e.to_string())?, || format!("n = {n}"))?;
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("corollary_sum", || {
        for n in range.clone() {
            ensure(verify_corollary(n), || format!("n = {n}"))?;
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("zero_deficiency", || {
        for n in range.clone() {
            let v = lambda_n0(n).map_err(|e| e.to_string())?;
            ensure(v == lambda_nd(n, 0).value, || format!("n = {n}"))?;
        }
        for n in 3..n_max {
            ensure(lambda_n0(n + 1).unwrap() > lambda_n0(n).unwrap(), || format!("not increasing at n = {n}"))?;
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("exact_thirds", || {
        // Each closed form asserts its own divisibility.
        for n in range.clone() {
            lambda_count(n).map_err(|e| e.to_string())?;
            if n >= 4 {
                let (k, l) = (tk(n).unwrap(), tl(n).unwrap());
                let s = if n % 2 == 1 { tls(n).unwrap() } else { BigUint::from(0u8) };
                ensure(k.clone() + l.clone() * 2u8 - s == lambda_count(n).unwrap(), || {
                    format!("knot and link split at n = {n}")
                })?;
                ensure(k + l == u_count(n).unwrap(), || format!("unoriented split at n = {n}"))?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out
}

pub fn census(n_max: u64, shards: usize) -> Vec<Check> {
    let mut tables = Vec::new();
    let mut out = Vec::new();
    let mut census_err = None;
    for n in 2..=n_max {
        match run_census(n, &CensusOptions { shards, keep_entries_up_to: 0 }) {
            Ok(c) => tables.push(c),
            Err(e) => {
                census_err = Some(format!("n = {n}: {e}"));
                break;
            }
        }
    }
    if let Some(e) = census_err {
        out.push(Check { name: "census_runs", pass: false, detail: e });
        return out;
    }
    out.push(run("census_matches_closed_forms", || {
        for c in &tables {
            let t = c.count_table();
            t.check().map_err(|e| e.to_string())?;
            let f = CountTable::from_formulas(c.n).map_err(|e| e.to_string())?;
            ensure(t == f, || format!("n = {}", c.n))?;
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("census_unoriented", || {
        for c in tables.iter().filter(|c| c.n >= 3) {
            ensure(BigUint::from(c.unoriented_count()) == u_count(c.n).unwrap(), || format!("n = {}", c.n))?;
        }
        Ok(format!("3 <= n <= {n_max}"))
    }));
    out.push(run("census_components", || {
        for c in tables.iter().filter(|c| c.n >= 4) {
            ensure(BigUint::from(c.unoriented_knot_count()) == tk(c.n).unwrap(), || format!("knots, n = {}", c.n))?;
            ensure(BigUint::from(c.unoriented_link_count()) == tl(c.n).unwrap(), || format!("links, n = {}", c.n))?;
        }
        Ok(format!("4 <= n <= {n_max}"))
    }));
    out.push(run("census_strongly_invertible", || {
        for c in &tables {
            let got = c.strongly_invertible_count();
            if c.n % 2 == 0 {
                ensure(got == 0, || format!("n = {}", c.n))?;
            } else if c.n >= 5 {
                ensure(BigUint::from(got) == tls(c.n).unwrap(), || format!("n = {}", c.n))?;
            }
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out.push(run("census_type_symmetry", || {
        for c in &tables {
            let t = c.type_total();
            ensure(
                t.count(RType::I) == t.count(RType::II)
                    && t.count(RType::III) == t.count(RType::IV)
                    && t.symmetric_count(RType::I) == 0
                    && t.symmetric_count(RType::II) == 0
                    && t.symmetric_count(RType::III) == t.symmetric_count(RType::IV),
                || format!("n = {}", c.n),
            )?;
        }
        Ok(format!("2 <= n <= {n_max}"))
    }));
    out
}

/// Compares a table to the published rows it overlaps.
pub fn against_published(table: &CountTable) -> Option<Result<(), String>> {
    let &(_, rows, total) = PUBLISHED.iter().find(|r| r.0 == table.n)?;
    if table.rows.len() != rows.len() {
        return Some(Err(format!("n = {}: {} deficiency columns", table.n, table.rows.len())));
    }
    for (r, &(a, b, c)) in table.rows.iter().zip(rows) {
        if (r.r1.clone(), r.r3.clone(), r.rs3.clone()) != (a.into(), b.into(), c.into()) {
            return Some(Err(format!("n = {}, d = {}", table.n, r.d)));
        }
    }
    if table.lambda != BigUint::from(total) {
        return Some(Err(format!("n = {}: total", table.n)));
    }
    Some(Ok(()))
}

pub fn published(n_max: u64) -> Check {
    run("published_table", || {
        let top = n_max.min(13);
        for n in 2..=top {
            let t = CountTable::from_formulas(n).map_err(|e| e.to_string())?;
            against_published(&t).expect("row exists")?;
        }
        Ok(format!("2 <= n <= {top}"))
    })
}
