//! Seifert circle structure of PS-form 4-plats and the invariants read off it.
//!
//! Smoothing a PS-form diagram leaves one large circle `C`, through the long
//! arc, and a chain of smaller circles that hang off it. Every block of the
//! signed vector is one excursion away from `C` and back: outside `C` for
//! positive blocks, inside for negative ones. Within a block, a region whose
//! strands run parallel adds its crossings between the current circle and
//! `C`; an antiparallel region adds a path of new circles, one crossing apart.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{is_strongly_invertible, to_odd_cf, Fraction, OddCf};
use crate::plat::{build_ps_diagram, Block, OrientationChoice, PlatDiagram, SignedVector};

/// Splits a signed vector into maximal runs of equal sign.
pub fn blocks(sv: &SignedVector) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for (i, &b) in sv.entries().iter().enumerate() {
        let sign = if b > 0 { 1 } else { -1 };
        match out.last_mut() {
            Some(block) if block.sign == sign => block.entries.push(b),
            _ => out.push(Block { entries: vec![b], sign, start: i }),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RType {
    I,
    II,
    III,
    IV,
}

impl RType {
    /// Image under reversal of the vector.
    pub fn reversed(self) -> Self {
        match self {
            RType::I => RType::II,
            RType::II => RType::I,
            t => t,
        }
    }
}

impl fmt::Display for RType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RType::I => "I",
            RType::II => "II",
            RType::III => "III",
            RType::IV => "IV",
        })
    }
}

pub fn classify_type(sv: &SignedVector) -> RType {
    match (sv.first() > 0, sv.last() > 0) {
        (true, false) => RType::I,
        (false, true) => RType::II,
        (true, true) => RType::III,
        (false, false) => RType::IV,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CircleKind {
    Medium,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Circle {
    /// Crossings shared with the large circle.
    pub large_crossings: u64,
    pub side: Side,
}

impl Circle {
    pub fn kind(&self) -> CircleKind {
        if self.large_crossings > 0 {
            CircleKind::Medium
        } else {
            CircleKind::Small
        }
    }
}

/// The circles other than `C`, in the order the diagram meets them.
///
/// `adjacency[i]` counts crossings between `nodes[i]` and `nodes[i + 1]`;
/// it is zero where one excursion ends and the next begins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleChain {
    pub nodes: Vec<Circle>,
    pub adjacency: Vec<u64>,
}

impl CircleChain {
    /// Seifert circles including the large one.
    pub fn circle_count(&self) -> u64 {
        self.nodes.len() as u64 + 1
    }

    pub fn crossing_count(&self) -> u64 {
        self.nodes.iter().map(|c| c.large_crossings).sum::<u64>() + self.adjacency.iter().sum::<u64>()
    }

    pub fn small_count(&self) -> usize {
        self.nodes.iter().filter(|c| c.kind() == CircleKind::Small).count()
    }

    pub fn medium_count(&self) -> usize {
        self.nodes.len() - self.small_count()
    }

    /// Panics when a structural invariant fails.
    pub fn check(&self) {
        assert_eq!(self.adjacency.len() + 1, self.nodes.len().max(1));
        for (i, c) in self.nodes.iter().enumerate() {
            if c.kind() == CircleKind::Small {
                assert!(
                    i > 0 && i + 1 < self.nodes.len(),
                    "small circle {i} at the end of the chain"
                );
                assert_eq!(self.adjacency[i - 1], 1, "small circle {i} left adjacency");
                assert_eq!(self.adjacency[i], 1, "small circle {i} right adjacency");
            }
        }
    }

    /// Removes small circle `i`, merging its two neighbours.
    pub fn reduce_at(&mut self, i: usize) {
        let c = self.nodes[i];
        assert_eq!(c.kind(), CircleKind::Small, "circle {i} is not small");
        assert!(i > 0 && i + 1 < self.nodes.len());
        assert!(self.adjacency[i - 1] == 1 && self.adjacency[i] == 1);
        let right = self.nodes.remove(i + 1);
        self.nodes.remove(i);
        self.nodes[i - 1].large_crossings += right.large_crossings;
        self.adjacency.drain(i - 1..=i);
    }

    /// Index of the first removable small circle.
    pub fn first_small(&self) -> Option<usize> {
        self.nodes.iter().position(|c| c.kind() == CircleKind::Small)
    }
}

/// Small and medium circle counts attributed by the per-entry parity rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuleTally {
    pub small: u64,
    pub medium: u64,
}

/// A region whose two strands run the same way.
fn is_parallel(index: usize, b: i64) -> bool {
    (index % 2 == 0) == (b > 0)
}

fn neg_rule(a: &[u64]) -> bool {
    let l = a.len();
    if l == 1 {
        return a[0] % 2 == 0;
    }
    l % 2 == 1
        && a[0] % 2 == 1
        && a[l - 1] % 2 == 1
        && (2..l - 1).step_by(2).all(|r| a[r] % 2 == 0)
}

fn first_pos_rule(a: &[u64]) -> bool {
    let l = a.len();
    l % 2 == 0 && (1..l - 1).step_by(2).all(|r| a[r] % 2 == 0) && a[l - 1] % 2 == 1
}

/// Checks the parity and position constraints on the entries of each block.
pub fn validate(sv: &SignedVector) -> Result<()> {
    let bs = blocks(sv);
    let count = bs.len();
    for (k, b) in bs.iter().enumerate() {
        let a: Vec<u64> = b.entries.iter().map(|x| x.unsigned_abs()).collect();
        let (ok, what) = if b.sign < 0 {
            (neg_rule(&a), "negative block")
        } else if count == 1 {
            (
                a.len() == 1 || (1..a.len()).step_by(2).all(|r| a[r] % 2 == 0),
                "single positive block",
            )
        } else if k == 0 {
            (first_pos_rule(&a), "first positive block")
        } else if k == count - 1 {
            let rev: Vec<u64> = a.iter().rev().copied().collect();
            (first_pos_rule(&rev), "last positive block")
        } else {
            (neg_rule(&a), "middle positive block")
        };
        if !ok {
            return Err(Error::NotRDecomposition(format!(
                "{what} {:?} of {sv} breaks the parity rules",
                b.entries
            )));
        }
    }
    Ok(())
}

/// Small/medium counts by the per-entry rules: an antiparallel entry of size
/// `a` gives `a - 1` small circles, a parallel entry one medium circle.
pub fn rule_tally(sv: &SignedVector) -> Result<RuleTally> {
    validate(sv)?;
    let mut t = RuleTally { small: 0, medium: 0 };
    for (i, &b) in sv.entries().iter().enumerate() {
        if is_parallel(i, b) {
            t.medium += 1;
        } else {
            t.small += b.unsigned_abs() - 1;
        }
    }
    Ok(t)
}

pub fn circle_chain(sv: &SignedVector) -> Result<CircleChain> {
    validate(sv)?;
    let entries = sv.entries();
    let mut nodes: Vec<Circle> = Vec::new();
    let mut adjacency: Vec<u64> = Vec::new();
    for block in blocks(sv) {
        let side = if block.sign > 0 { Side::Outside } else { Side::Inside };
        let end = block.start + block.len();
        // Index into `nodes` of the circle the strand currently runs along;
        // `None` while it is still on `C`.
        let mut current: Option<usize> = None;
        for i in block.start..end {
            let a = entries[i].unsigned_abs();
            if is_parallel(i, entries[i]) {
                match current {
                    Some(c) => nodes[c].large_crossings += a,
                    None => {
                        push(&mut nodes, &mut adjacency, Circle { large_crossings: a, side }, 0);
                        current = Some(nodes.len() - 1);
                    }
                }
                continue;
            }
            let fresh = if i + 1 == end { a - 1 } else { a };
            for _ in 0..fresh {
                let (circle, link) = match current {
                    None => (Circle { large_crossings: 1, side }, 0),
                    Some(_) => (Circle { large_crossings: 0, side }, 1),
                };
                push(&mut nodes, &mut adjacency, circle, link);
                current = Some(nodes.len() - 1);
            }
            if i + 1 == end {
                // The last crossing returns to `C`.
                match current {
                    Some(c) => nodes[c].large_crossings += 1,
                    None => unreachable!("block {:?} of {sv} ends without a circle", block.entries),
                }
            }
        }
    }
    let chain = CircleChain { nodes, adjacency };
    debug_assert_eq!(chain.crossing_count(), sv.crossing_number());
    chain.check();
    Ok(chain)
}

fn push(nodes: &mut Vec<Circle>, adjacency: &mut Vec<u64>, c: Circle, link: u64) {
    if !nodes.is_empty() {
        adjacency.push(link);
    }
    nodes.push(c);
}

/// Removes small circles leftmost first until none is left.
pub fn reduce_to_fixpoint(c: &CircleChain) -> (CircleChain, u64) {
    let mut chain = c.clone();
    let mut count = 0;
    while let Some(i) = chain.first_small() {
        chain.reduce_at(i);
        count += 1;
    }
    assert!(
        chain.nodes.iter().all(|c| c.large_crossings >= 2),
        "reduced chain has a medium circle with fewer than two crossings on C"
    );
    (chain, count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRecord {
    pub pq: Fraction,
    pub vector: OddCf,
    pub signed_vector: SignedVector,
    pub n: u64,
    pub mu: u8,
    pub s: u64,
    pub genus: u64,
    pub braid: u64,
    pub deficiency: u64,
    #[serde(rename = "type")]
    pub rtype: RType,
    /// `None` for knots.
    pub strongly_invertible: Option<bool>,
}

pub fn invariants(f: &Fraction, o: OrientationChoice) -> Result<InvariantRecord> {
    let v = to_odd_cf(f)?;
    let d = build_ps_diagram(&v, o)?;
    record_for(&d)
}

/// Invariants of an already built diagram.
pub fn record_for(d: &PlatDiagram) -> Result<InvariantRecord> {
    let sv = d.signed_vector();
    let chain = circle_chain(&sv)?;
    let (_, deficiency) = reduce_to_fixpoint(&chain);
    let n = sv.crossing_number();
    let mu = d.component_count();
    let s = chain.circle_count();
    let twice_genus = (n + 2)
        .checked_sub(s + mu as u64)
        .expect("more Seifert circles than crossings allow");
    assert!(twice_genus % 2 == 0, "odd 2g for {sv}");
    assert!(deficiency <= n.saturating_sub(2) / 2, "deficiency bound fails for {sv}");
    let f = d.fraction().clone();
    let strongly_invertible = if mu == 2 {
        Some(is_strongly_invertible(&f)?)
    } else {
        None
    };
    Ok(InvariantRecord {
        pq: f,
        vector: d.vector().clone(),
        rtype: classify_type(&sv),
        signed_vector: sv,
        n,
        mu,
        s,
        genus: twice_genus / 2,
        braid: s - deficiency,
        deficiency,
        strongly_invertible,
    })
}
