//! Integer combinatorics of the cubic resonance set on Z².
//!
//! For an output index `j`, the resonance set holds the triples
//! `(j1, j2, j3)` with `j1 - j2 + j3 = j` and `|j1|² - |j2|² + |j3|² = |j|²`.
//! Every enumeration here is truncated to the l∞ ball of radius `trunc`
//! and runs in exact integer arithmetic.
//!
//! Writing `a = j1 - j` and `b = j3 - j`, the two conditions collapse to
//! `a · b = 0`: the four points `j, j1, j2, j3` span a (possibly degenerate)
//! rectangle. The fast enumerator walks those orthogonal pairs directly,
//! the brute-force one checks every `(j1, j3)` and serves as its oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the integer lattice Z².
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    /// `|p|²`, exact for coordinates up to 2^30 in magnitude.
    pub fn norm_sq(self) -> i64 {
        self.a * self.a + self.b * self.b
    }

    pub fn dot(self, other: LatticePoint) -> i64 {
        self.a * other.a + self.b * other.b
    }

    pub fn linf(self) -> i64 {
        self.a.abs().max(self.b.abs())
    }

    /// `⟨p⟩² = 1 + |p|²`.
    pub fn bracket_sq(self) -> f64 {
        1.0 + self.norm_sq() as f64
    }

    fn in_ball(self, trunc: i64) -> bool {
        self.linf() <= trunc
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.a, -self.b)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((a, b): (i64, i64)) -> Self {
        LatticePoint::new(a, b)
    }
}

/// A member of the resonance set of the output index `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResonantTriple {
    pub j1: LatticePoint,
    pub j2: LatticePoint,
    pub j3: LatticePoint,
    pub j: LatticePoint,
}

impl ResonantTriple {
    /// The partner obtained by exchanging the two non-conjugated slots.
    pub fn mirrored(self) -> Self {
        ResonantTriple { j1: self.j3, j2: self.j2, j3: self.j1, j: self.j }
    }

    pub fn is_valid(&self) -> bool {
        is_resonant(self.j1, self.j2, self.j3, self.j)
    }
}

pub fn is_resonant(j1: LatticePoint, j2: LatticePoint, j3: LatticePoint, j: LatticePoint) -> bool {
    j1 - j2 + j3 == j && j1.norm_sq() - j2.norm_sq() + j3.norm_sq() == j.norm_sq()
}

/// The integer phase `|p1|² - |p2|² + |p3|² - |q|²` of a momentum-matched triple.
pub fn resonance_defect(p1: LatticePoint, p2: LatticePoint, p3: LatticePoint, q: LatticePoint) -> Result<i64> {
    if p1 - p2 + p3 != q {
        return Err(Error::arg(format!("momentum mismatch: {p1} - {p2} + {p3} != {q}")));
    }
    Ok(p1.norm_sq() - p2.norm_sq() + p3.norm_sq() - q.norm_sq())
}

fn check_trunc(j: LatticePoint, trunc: i64) -> Result<()> {
    if trunc < 0 {
        return Err(Error::arg(format!("truncation radius must be >= 0, got {trunc}")));
    }
    if j.linf() > trunc {
        return Err(Error::arg(format!("output index {j} lies outside the truncation ball of radius {trunc}")));
    }
    Ok(())
}

/// Lattice points of the l∞ ball in lexicographic order.
pub fn ball(trunc: i64) -> impl Iterator<Item = LatticePoint> {
    (-trunc..=trunc).flat_map(move |a| (-trunc..=trunc).map(move |b| LatticePoint::new(a, b)))
}

/// Brute-force enumeration: every `(j1, j3)` in the ball, lexicographic order.
pub fn enumerate_resonant_triples(j: LatticePoint, trunc: i64) -> Result<Vec<ResonantTriple>> {
    check_trunc(j, trunc)?;
    let mut out = Vec::new();
    for j1 in ball(trunc) {
        for j3 in ball(trunc) {
            let j2 = j1 + j3 - j;
            if j2.in_ball(trunc) && is_resonant(j1, j2, j3, j) {
                out.push(ResonantTriple { j1, j2, j3, j });
            }
        }
    }
    Ok(out)
}

/// Enumeration through orthogonal pairs `a ⊥ b`. Emits the same set as
/// [`enumerate_resonant_triples`], in the same lexicographic order.
pub fn enumerate_resonant_triples_fast(j: LatticePoint, trunc: i64) -> Result<Vec<ResonantTriple>> {
    check_trunc(j, trunc)?;
    let mut out = Vec::new();
    visit_resonant(j, trunc, |j1, j2, j3| out.push(ResonantTriple { j1, j2, j3, j }));
    Ok(out)
}

fn gcd(mut x: i64, mut y: i64) -> i64 {
    x = x.abs();
    y = y.abs();
    while y != 0 {
        let r = x % y;
        x = y;
        y = r;
    }
    x
}

fn div_floor(n: i64, d: i64) -> i64 {
    let q = n / d;
    if (n % d != 0) && ((n < 0) != (d < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(n: i64, d: i64) -> i64 {
    -div_floor(-n, d)
}

/// Range of integers `t` with `|c + t e| <= r`, intersected with `range`.
fn clamp_line(range: (i64, i64), c: i64, e: i64, r: i64) -> (i64, i64) {
    let (lo, hi) = range;
    if e == 0 {
        return if c.abs() <= r { (lo, hi) } else { (1, 0) };
    }
    let (a, b) = if e > 0 { (div_ceil(-r - c, e), div_floor(r - c, e)) } else { (div_ceil(r - c, e), div_floor(-r - c, e)) };
    (lo.max(a), hi.min(b))
}

/// Visits every resonant triple of `j` inside the ball in lexicographic
/// `(j1, j3)` order without allocating.
pub(crate) fn visit_resonant(j: LatticePoint, trunc: i64, mut visit: impl FnMut(LatticePoint, LatticePoint, LatticePoint)) {
    for j1 in ball(trunc) {
        let a = j1 - j;
        if a == LatticePoint::ORIGIN {
            // j1 = j forces j2 = j3, any j3 works.
            for j3 in ball(trunc) {
                visit(j1, j3, j3);
            }
            continue;
        }
        // primitive direction orthogonal to a, lexicographically positive
        let g = gcd(a.a, a.b);
        let mut d = LatticePoint::new(-a.b / g, a.a / g);
        if d.a < 0 || (d.a == 0 && d.b < 0) {
            d = -d;
        }
        let mut range = (i64::MIN / 4, i64::MAX / 4);
        range = clamp_line(range, j.a, d.a, trunc);
        range = clamp_line(range, j.b, d.b, trunc);
        range = clamp_line(range, j1.a, d.a, trunc);
        range = clamp_line(range, j1.b, d.b, trunc);
        for t in range.0..=range.1 {
            let b = LatticePoint::new(t * d.a, t * d.b);
            let j3 = j + b;
            let j2 = j1 + b;
            visit(j1, j2, j3);
        }
    }
}

/// `⟨j⟩² Σ ⟨j1⟩⁻²⟨j2⟩⁻²⟨j3⟩⁻²` over the truncated resonance set of `j`.
pub fn weight_sum(j: LatticePoint, trunc: i64) -> Result<f64> {
    check_trunc(j, trunc)?;
    let mut acc = 0.0;
    visit_resonant(j, trunc, |j1, j2, j3| {
        acc += 1.0 / (j1.bracket_sq() * j2.bracket_sq() * j3.bracket_sq());
    });
    Ok(j.bracket_sq() * acc)
}

fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Integer points `p` with `|2p - center2x|² = radius_sq_x4`, lexicographic.
pub fn circle_lattice_points(center2x: LatticePoint, radius_sq_x4: i64) -> Result<Vec<LatticePoint>> {
    if radius_sq_x4 < 0 {
        return Err(Error::arg(format!("squared radius must be >= 0, got {radius_sq_x4}")));
    }
    let s = isqrt(radius_sq_x4);
    let mut out = Vec::new();
    let lo = div_ceil(center2x.a - s, 2);
    let hi = div_floor(center2x.a + s, 2);
    for p1 in lo..=hi {
        let dx = 2 * p1 - center2x.a;
        let rem = radius_sq_x4 - dx * dx;
        if rem < 0 {
            continue;
        }
        let s2 = isqrt(rem);
        if s2 * s2 != rem {
            continue;
        }
        let mut push = |twice: i64| {
            if twice.rem_euclid(2) == 0 {
                out.push(LatticePoint::new(p1, twice / 2));
            }
        };
        push(center2x.b - s2);
        if s2 != 0 {
            push(center2x.b + s2);
        }
    }
    Ok(out)
}

/// `Σ ⟨p⟩⁻²` over lattice points on the circle with `|p| >= a_min`.
///
/// The circle is passed as its doubled center and quadrupled squared radius
/// so that half-integer centers stay exact.
pub fn circle_lattice_sum(center2x: LatticePoint, radius_sq_x4: i64, a_min: f64) -> Result<f64> {
    if !(a_min >= 1.0) {
        return Err(Error::arg(format!("cutoff A must be >= 1, got {a_min}")));
    }
    let points = circle_lattice_points(center2x, radius_sq_x4)?;
    Ok(points.into_iter().filter(|p| p.norm_sq() as f64 >= a_min * a_min).map(|p| 1.0 / p.bracket_sq()).sum())
}

/// Truncated resonance sets for every output index of a ball.
#[derive(Clone, Debug)]
pub struct ResonanceTable {
    trunc: i64,
    entries: BTreeMap<LatticePoint, Vec<ResonantTriple>>,
}

impl ResonanceTable {
    pub fn build(trunc: i64) -> Result<Self> {
        if trunc < 0 {
            return Err(Error::arg(format!("truncation radius must be >= 0, got {trunc}")));
        }
        let mut entries = BTreeMap::new();
        for j in ball(trunc) {
            entries.insert(j, enumerate_resonant_triples_fast(j, trunc)?);
        }
        Ok(ResonanceTable { trunc, entries })
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn triples(&self, j: LatticePoint) -> &[ResonantTriple] {
        self.entries.get(&j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Vec<ResonantTriple>)> {
        self.entries.iter()
    }

    pub fn total_triples(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    /// Checks that every stored triple is resonant and that the table is
    /// closed under [`ResonantTriple::mirrored`].
    pub fn check_invariants(&self) -> bool {
        self.entries.iter().all(|(j, list)| list.iter().all(|t| t.j == *j && t.is_valid() && list.binary_search(&t.mirrored()).is_ok()))
    }
}

/// Momentum-matched, non-resonant triples `(p1, p2, p3)` of the ball whose
/// output `q = p1 - p2 + p3` is arbitrary, grouped by `q`, each with its
/// integer phase.
pub fn non_resonant_triples(trunc: i64) -> Result<BTreeMap<LatticePoint, Vec<(ResonantTriple, i64)>>> {
    if trunc < 0 {
        return Err(Error::arg(format!("truncation radius must be >= 0, got {trunc}")));
    }
    let mut out: BTreeMap<LatticePoint, Vec<(ResonantTriple, i64)>> = BTreeMap::new();
    for p1 in ball(trunc) {
        for p2 in ball(trunc) {
            for p3 in ball(trunc) {
                let q = p1 - p2 + p3;
                let phi = p1.norm_sq() - p2.norm_sq() + p3.norm_sq() - q.norm_sq();
                if phi != 0 {
                    out.entry(q).or_default().push((ResonantTriple { j1: p1, j2: p2, j3: p3, j: q }, phi));
                }
            }
        }
    }
    Ok(out)
}
