//! Crossing-level model of the 4-plat in preferred standard form.
//!
//! The plat lives on four horizontal levels, numbered 1 (top) to 4 (bottom).
//! Level 4 carries the long arc and has no crossings. Twist regions are
//! chained left to right: odd regions `a1, a3, ...` twist levels 2 and 3, even
//! regions twist levels 1 and 2. Both ends are closed by caps joining levels
//! (1,2) and (3,4).
//!
//! Strands are cut into segments, one per level between consecutive
//! crossings. Segment `(column, level)` lies to the right of crossing
//! `column - 1` and to the left of crossing `column`; columns run `0..=n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory::{from_odd_cf, mirror_fraction, to_odd_cf, Fraction, OddCf};

/// Upper bound on the crossings of a materialized diagram.
pub const MAX_CROSSINGS: u128 = 1 << 22;

const LEVELS: usize = 4;
const LONG_ARC_LEVEL: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrientationChoice {
    /// Knots: the long arc fixes the orientation.
    Forced,
    /// Leftmost crossing positive.
    Plus,
    /// Leftmost crossing negative.
    Minus,
}

impl OrientationChoice {
    pub fn tag(self) -> &'static str {
        match self {
            OrientationChoice::Forced => "forced",
            OrientationChoice::Plus => "+",
            OrientationChoice::Minus => "-",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            OrientationChoice::Forced => OrientationChoice::Forced,
            OrientationChoice::Plus => OrientationChoice::Minus,
            OrientationChoice::Minus => OrientationChoice::Plus,
        }
    }

    /// The legal choices for a fraction: one for knots, two for links.
    pub fn legal_for(f: &Fraction) -> &'static [OrientationChoice] {
        if f.is_two_component() {
            &[OrientationChoice::Plus, OrientationChoice::Minus]
        } else {
            &[OrientationChoice::Forced]
        }
    }
}

impl fmt::Display for OrientationChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    fn reversed(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Segment {
    pub column: usize,
    pub level: u8,
}

impl Segment {
    fn id(self) -> usize {
        self.column * LEVELS + (self.level as usize - 1)
    }

    fn from_id(id: usize) -> Self {
        Segment {
            column: id / LEVELS,
            level: (id % LEVELS) as u8 + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub size: u64,
    pub axis: Axis,
    /// The two levels twisted by this region, upper first.
    pub levels: (u8, u8),
    /// Index of the region's first crossing.
    pub first_crossing: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub region: usize,
    /// Upper of the two levels exchanged at this crossing.
    pub upper: u8,
    /// Left-hand segment of the strand passing over.
    pub over: Segment,
    /// Left-hand segment of the strand passing under.
    pub under: Segment,
    pub sign: i8,
}

/// One passage of a component through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Debug, Clone)]
pub struct PlatDiagram {
    vector: OddCf,
    fraction: Fraction,
    orientation: OrientationChoice,
    regions: Vec<Region>,
    crossings: Vec<Crossing>,
    component_of: Vec<u8>,
    direction_of: Vec<Direction>,
    component_count: u8,
}

/// The component containing the bottom long arc.
pub const LONG_ARC_COMPONENT: u8 = 1;

impl PlatDiagram {
    pub fn vector(&self) -> &OddCf {
        &self.vector
    }

    pub fn fraction(&self) -> &Fraction {
        &self.fraction
    }

    pub fn orientation(&self) -> OrientationChoice {
        self.orientation
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn component_count(&self) -> u8 {
        self.component_count
    }

    pub fn long_arc_component(&self) -> u8 {
        LONG_ARC_COMPONENT
    }

    /// Number of segment columns, `crossings + 1`.
    pub fn columns(&self) -> usize {
        self.crossings.len() + 1
    }

    pub fn component(&self, s: Segment) -> u8 {
        self.component_of[s.id()]
    }

    pub fn direction(&self, s: Segment) -> Direction {
        self.direction_of[s.id()]
    }

    /// Sign of the leftmost crossing: the `L+`/`L-` label, derived for knots.
    pub fn derived_label(&self) -> OrientationChoice {
        if self.crossings[0].sign > 0 {
            OrientationChoice::Plus
        } else {
            OrientationChoice::Minus
        }
    }

    /// Segment reached by leaving `s` in direction `dir`, together with the
    /// travel direction there and the crossing passed on the way, if any.
    pub fn step(&self, s: Segment, dir: Direction) -> (Segment, Direction, Option<Passage>) {
        step(&self.crossings, s, dir)
    }

    /// Passages through crossings along component `label`, starting at its
    /// lowest-numbered segment and following its orientation.
    pub fn passages(&self, label: u8) -> Vec<Passage> {
        let start = match (0..self.component_of.len()).find(|&i| self.component_of[i] == label) {
            Some(i) => Segment::from_id(i),
            None => return Vec::new(),
        };
        let mut out = Vec::new();
        let (mut s, mut dir) = (start, self.direction(start));
        loop {
            let (next, next_dir, passage) = self.step(s, dir);
            out.extend(passage);
            s = next;
            dir = next_dir;
            if s == start {
                debug_assert_eq!(dir, self.direction(start));
                return out;
            }
        }
    }

    /// Over and under alternate along every component.
    pub fn is_alternating(&self) -> bool {
        (1..=self.component_count).all(|label| {
            let p = self.passages(label);
            p.iter()
                .zip(p.iter().cycle().skip(1))
                .all(|(a, b)| a.over != b.over)
        })
    }

    pub fn signed_vector(&self) -> SignedVector {
        signed_vector(self)
    }
}

fn step(crossings: &[Crossing], s: Segment, dir: Direction) -> (Segment, Direction, Option<Passage>) {
    let last = crossings.len();
    let cap = |level: u8| match level {
        1 => 2,
        2 => 1,
        3 => 4,
        _ => 3,
    };
    let swap = |x: &Crossing, level: u8| {
        if level == x.upper {
            Some(x.upper + 1)
        } else if level == x.upper + 1 {
            Some(x.upper)
        } else {
            None
        }
    };
    match dir {
        Direction::Right if s.column == last => (
            Segment { column: last, level: cap(s.level) },
            Direction::Left,
            None,
        ),
        Direction::Right => {
            let x = &crossings[s.column];
            let next = Segment { column: s.column + 1, level: swap(x, s.level).unwrap_or(s.level) };
            let passage = swap(x, s.level).map(|_| Passage { crossing: s.column, over: x.over == s });
            (next, Direction::Right, passage)
        }
        Direction::Left if s.column == 0 => (
            Segment { column: 0, level: cap(s.level) },
            Direction::Right,
            None,
        ),
        Direction::Left => {
            let c = s.column - 1;
            let x = &crossings[c];
            let level = swap(x, s.level).unwrap_or(s.level);
            let next = Segment { column: c, level };
            let passage = swap(x, s.level).map(|_| Passage { crossing: c, over: x.over == next });
            (next, Direction::Left, passage)
        }
    }
}

/// Builds the preferred-standard-form 4-plat for `v` with orientation `o`.
pub fn build_ps_diagram(v: &OddCf, o: OrientationChoice) -> Result<PlatDiagram> {
    let n = v.crossing_number();
    if n > MAX_CROSSINGS {
        return Err(Error::TooLarge(n));
    }
    let fraction = from_odd_cf(v);
    let two = fraction.is_two_component();
    match (two, o) {
        (false, OrientationChoice::Forced) | (true, OrientationChoice::Plus | OrientationChoice::Minus) => {}
        (false, _) => {
            return Err(Error::IllegalOrientation {
                tag: o.tag(),
                q: fraction.q().to_string(),
                reason: "knots take the forced orientation",
            })
        }
        (true, _) => {
            return Err(Error::IllegalOrientation {
                tag: o.tag(),
                q: fraction.q().to_string(),
                reason: "two-component links need + or -",
            })
        }
    }

    let mut regions = Vec::with_capacity(v.len());
    let mut crossings = Vec::with_capacity(n as usize);
    for (i, &size) in v.entries().iter().enumerate() {
        // Odd regions (i even here) pass the upper strand over, which puts the
        // strand arriving from the long arc under at the first crossing.
        let (axis, upper, upper_over) = if i % 2 == 0 {
            (Axis::Horizontal, 2u8, true)
        } else {
            (Axis::Vertical, 1u8, false)
        };
        regions.push(Region {
            size,
            axis,
            levels: (upper, upper + 1),
            first_crossing: crossings.len(),
        });
        for _ in 0..size {
            let column = crossings.len();
            let top = Segment { column, level: upper };
            let bottom = Segment { column, level: upper + 1 };
            let (over, under) = if upper_over { (top, bottom) } else { (bottom, top) };
            crossings.push(Crossing { region: i, upper, over, under, sign: 0 });
        }
    }

    let segments = (crossings.len() + 1) * LEVELS;
    let mut component_of = vec![0u8; segments];
    let mut direction_of = vec![Direction::Right; segments];
    let mut trace = |start: Segment, dir: Direction, label: u8, comp: &mut Vec<u8>| {
        let (mut s, mut d) = (start, dir);
        while comp[s.id()] == 0 {
            comp[s.id()] = label;
            direction_of[s.id()] = d;
            let (next, next_dir, _) = step(&crossings, s, d);
            s = next;
            d = next_dir;
        }
    };
    // The long arc runs right to left.
    trace(
        Segment { column: 0, level: LONG_ARC_LEVEL },
        Direction::Left,
        LONG_ARC_COMPONENT,
        &mut component_of,
    );
    let mut component_count = 1;
    if let Some(free) = component_of.iter().position(|&c| c == 0) {
        trace(Segment::from_id(free), Direction::Right, 2, &mut component_of);
        component_count = 2;
    }
    assert!(
        component_of.iter().all(|&c| c != 0),
        "4-plat closure has more than two components"
    );
    assert_eq!(
        component_count == 2,
        two,
        "component count disagrees with the parity of q for {v}"
    );

    let mut d = PlatDiagram {
        vector: v.clone(),
        fraction,
        orientation: o,
        regions,
        crossings,
        component_of,
        direction_of,
        component_count,
    };
    d.assign_signs();
    let want = match o {
        OrientationChoice::Plus => 1,
        OrientationChoice::Minus => -1,
        OrientationChoice::Forced => d.crossings[0].sign,
    };
    if d.crossings[0].sign != want {
        for (c, dir) in d.component_of.iter().zip(d.direction_of.iter_mut()) {
            if *c != LONG_ARC_COMPONENT {
                *dir = dir.reversed();
            }
        }
        d.assign_signs();
    }
    debug_assert_eq!(d.crossings[0].sign, want);
    Ok(d)
}

impl PlatDiagram {
    /// Right-handed convention, evaluated combinatorially: a crossing whose
    /// strands run the same way is positive when the upper strand passes
    /// over, and antiparallel strands flip that.
    fn assign_signs(&mut self) {
        for c in 0..self.crossings.len() {
            let x = self.crossings[c];
            let top = self.direction(Segment { column: c, level: x.upper });
            let bottom = self.direction(Segment { column: c, level: x.upper + 1 });
            let parallel = top == bottom;
            let upper_over = x.over.level == x.upper;
            self.crossings[c].sign = if parallel == upper_over { 1 } else { -1 };
        }
    }
}

/// `[b1, ..., b_{2k+1}]`: region sizes carrying the crossing sign of each region.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SignedVector(Vec<i64>);

impl SignedVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() % 2 == 0 {
            return Err(Error::InvalidSignedVector(format!(
                "length {} is not odd",
                entries.len()
            )));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidSignedVector("entries must be nonzero".into()));
        }
        Ok(SignedVector(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn crossing_number(&self) -> u64 {
        self.0.iter().map(|b| b.unsigned_abs()).sum()
    }

    pub fn magnitudes(&self) -> Result<OddCf> {
        OddCf::new(self.0.iter().map(|b| b.unsigned_abs()).collect())
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn first(&self) -> i64 {
        self.0[0]
    }

    pub fn last(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// A maximal run of same-sign entries of a signed vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub entries: Vec<i64>,
    pub sign: i8,
    /// Index of the block's first entry in the signed vector.
    pub start: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads region signs off the diagram.
///
/// Panics if some region mixes crossing signs, which would mean the template
/// is not alternating.
pub fn signed_vector(d: &PlatDiagram) -> SignedVector {
    let entries = d
        .regions
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let xs = &d.crossings[r.first_crossing..r.first_crossing + r.size as usize];
            let sign = xs[0].sign;
            assert!(
                xs.iter().all(|x| x.sign == sign),
                "region {i} of {} mixes crossing signs",
                d.vector
            );
            sign as i64 * r.size as i64
        })
        .collect();
    SignedVector(entries)
}

pub fn reversal(sv: &SignedVector) -> SignedVector {
    SignedVector(sv.0.iter().rev().copied().collect())
}

/// The fraction and orientation whose PS-form diagram has signed vector `sv`.
pub fn realize(sv: &SignedVector) -> Result<(Fraction, OrientationChoice)> {
    let v = sv.magnitudes()?;
    if v.crossing_number() > MAX_CROSSINGS {
        return Err(Error::TooLarge(v.crossing_number()));
    }
    let f = from_odd_cf(&v);
    let o = if !f.is_two_component() {
        OrientationChoice::Forced
    } else if sv.first() > 0 {
        OrientationChoice::Plus
    } else {
        OrientationChoice::Minus
    };
    let d = build_ps_diagram(&v, o)?;
    if d.signed_vector() != *sv {
        return Err(Error::InvalidSignedVector(format!(
            "{sv} is not the signed vector of a PS-form 4-plat (expected {})",
            d.signed_vector()
        )));
    }
    Ok((f, o))
}

/// Signed vector of the mirror image, rebuilt from `(q - p)/q`.
///
/// Mirroring negates every crossing, so on two-component links it swaps the
/// `+`/`-` label of the PS form.
pub fn mirror(sv: &SignedVector) -> Result<SignedVector> {
    let (f, o) = realize(sv)?;
    let m = mirror_fraction(&f);
    let d = build_ps_diagram(&to_odd_cf(&m)?, o.flipped())?;
    Ok(d.signed_vector())
}

#[derive(Serialize)]
struct RegionView {
    index: usize,
    size: u64,
    axis: Axis,
    levels: [u8; 2],
    sign: i8,
}

#[derive(Serialize)]
struct CrossingView {
    index: usize,
    region: usize,
    levels: [u8; 2],
    over: Segment,
    under: Segment,
    sign: i8,
}

#[derive(Serialize)]
struct PathStep {
    column: usize,
    level: u8,
    direction: Direction,
}

#[derive(Serialize)]
struct ComponentView {
    label: u8,
    path: Vec<PathStep>,
}

#[derive(Serialize)]
struct DiagramView<'a> {
    pq: &'a Fraction,
    vector: &'a OddCf,
    orientation: &'static str,
    leftmost_sign: i8,
    regions: Vec<RegionView>,
    crossings: Vec<CrossingView>,
    components: Vec<ComponentView>,
    long_arc_component: u8,
}

impl Serialize for PlatDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let regions = self
            .regions
            .iter()
            .enumerate()
            .map(|(index, r)| RegionView {
                index,
                size: r.size,
                axis: r.axis,
                levels: [r.levels.0, r.levels.1],
                sign: self.crossings[r.first_crossing].sign,
            })
            .collect();
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .map(|(index, x)| CrossingView {
                index,
                region: x.region,
                levels: [x.upper, x.upper + 1],
                over: x.over,
                under: x.under,
                sign: x.sign,
            })
            .collect();
        let components = (1..=self.component_count)
            .map(|label| {
                let start = Segment::from_id(
                    self.component_of.iter().position(|&c| c == label).expect("component exists"),
                );
                let mut path = Vec::new();
                let (mut s, mut dir) = (start, self.direction(start));
                loop {
                    path.push(PathStep { column: s.column, level: s.level, direction: dir });
                    let (next, next_dir, _) = self.step(s, dir);
                    s = next;
                    dir = next_dir;
                    if s == start {
                        break;
                    }
                }
                ComponentView { label, path }
            })
            .collect();
        DiagramView {
            pq: &self.fraction,
            vector: &self.vector,
            orientation: self.orientation.tag(),
            leftmost_sign: self.crossings[0].sign,
            regions,
            crossings,
            components,
            long_arc_component: LONG_ARC_COMPONENT,
        }
        .serialize(serializer)
    }
}
