//! Exact circle and chord geometry.
//!
//! Points of the unit circle are [`Angle`]s measured in turns, so the vertices
//! of a regular polygon (`k / n` turns) are represented without any π
//! rounding. Radians only appear inside trigonometric evaluations.
//!
//! The central object is [`f_value`]: the distance from the origin of the
//! intersection of the lines through two chords, with the conventions
//!
//! * a degenerate chord `x = y` stands for the tangent line at `x`,
//! * two identical lines report the distance of the line to the origin,
//! * two parallel lines report `+∞`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{cos_pi, sin_pi};

/// Direction determinant below which two distinct lines count as parallel.
pub const PARALLEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Turns,
    Radians,
}

/// A point `e^{2πi·turns}` of the unit circle, with `turns` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Canonical angle for `t` given in `unit`.
    pub fn new(t: f64, unit: AngleUnit) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain(format!("angle must be finite, got {t}")));
        }
        let turns = match unit {
            AngleUnit::Turns => t,
            AngleUnit::Radians => t / TAU,
        };
        Ok(Angle(wrap_turns(turns)))
    }

    pub fn from_turns(t: f64) -> Result<Self> {
        Self::new(t, AngleUnit::Turns)
    }

    pub fn from_radians(t: f64) -> Result<Self> {
        Self::new(t, AngleUnit::Radians)
    }

    /// Vertex `k` of the regular `n`-gon with a vertex at angle zero.
    pub fn polygon_vertex(k: usize, n: usize) -> Self {
        Angle(wrap_turns(k as f64 / n as f64))
    }

    pub fn turns(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0 * TAU
    }

    /// Cartesian coordinates of the point.
    pub fn point(self) -> [f64; 2] {
        [cos_pi(2.0 * self.0), sin_pi(2.0 * self.0)]
    }

    pub fn rotate(self, turns: f64) -> Self {
        Angle(wrap_turns(self.0 + turns))
    }

    pub fn antipode(self) -> Self {
        self.rotate(0.5)
    }

    /// Counter-clockwise offset from `self` to `other`, in `[0, 1)`.
    pub fn offset_to(self, other: Angle) -> f64 {
        wrap_turns(other.0 - self.0)
    }

    /// Shortest circular distance in turns, in `[0, 1/2]`.
    pub fn circular_distance(self, other: Angle) -> f64 {
        let d = self.offset_to(other);
        d.min(1.0 - d)
    }
}

/// Canonical angle for `t` in `unit`; errors on non-finite input.
pub fn canon_angle(t: f64, unit: AngleUnit) -> Result<Angle> {
    Angle::new(t, unit)
}

pub(crate) fn wrap_turns(t: f64) -> f64 {
    let w = t.rem_euclid(1.0);
    // rem_euclid rounds tiny negatives up to exactly 1.0
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// A counter-clockwise arc starting at `start` and spanning `length` turns.
///
/// `length` lies in `[0, 1]`; length zero is a single point when closed and
/// empty when open, length one is the whole circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: Angle,
    length: f64,
}

impl Arc {
    /// The open arc from `start` to `end`; empty when they coincide.
    pub fn between(start: Angle, end: Angle) -> Self {
        Arc {
            start,
            length: start.offset_to(end),
        }
    }

    pub fn with_length(start: Angle, length: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&length) {
            return Err(Error::domain(format!(
                "arc length must lie in [0, 1] turns, got {length}"
            )));
        }
        Ok(Arc { start, length })
    }

    pub fn full_circle() -> Self {
        Arc {
            start: Angle::ZERO,
            length: 1.0,
        }
    }

    pub fn start(&self) -> Angle {
        self.start
    }

    pub fn end(&self) -> Angle {
        self.start.rotate(self.length)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full(&self) -> bool {
        self.length >= 1.0
    }

    /// Membership test; `closed` includes both endpoints.
    pub fn contains(&self, a: Angle, closed: bool) -> bool {
        if self.is_full() {
            return true;
        }
        let offset = self.start.offset_to(a);
        if closed {
            offset <= self.length
        } else {
            offset > 0.0 && offset < self.length
        }
    }
}

/// How the lines through two chords meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineClass {
    /// Single intersection point, together with its Euclidean norm.
    IntersectAt {
        point: [f64; 2],
        norm: f64,
    },
    /// Both chords span the same line.
    SameLine {
        distance_to_origin: f64,
    },
    Parallel,
}

/// Distance from the origin to the line through `a` and `b` (tangent line
/// when `a == b`).
pub fn chord_distance_to_origin(a: Angle, b: Angle) -> f64 {
    cos_pi(a.turns() - b.turns()).abs()
}

/// Line through the chord as `normal · p = offset`.
fn chord_line(a: Angle, b: Angle) -> ([f64; 2], f64) {
    let s = a.turns() + b.turns();
    ([cos_pi(s), sin_pi(s)], cos_pi(a.turns() - b.turns()))
}

fn shared_endpoint(a1: Angle, a2: Angle, a3: Angle, a4: Angle) -> Option<Angle> {
    [a1, a2].into_iter().find(|&p| p == a3 || p == a4)
}

/// Classifies the lines through the chords `(a1, a2)` and `(a3, a4)`.
///
/// Identical lines are detected combinatorially: three distinct points of the
/// circle are never collinear, so two chords span the same line exactly when
/// their endpoint sets agree.
pub fn classify_lines(a1: Angle, a2: Angle, a3: Angle, a4: Angle) -> LineClass {
    let same_set = (a1 == a3 && a2 == a4) || (a1 == a4 && a2 == a3);
    if same_set {
        return LineClass::SameLine {
            distance_to_origin: chord_distance_to_origin(a1, a2),
        };
    }
    if let Some(p) = shared_endpoint(a1, a2, a3, a4) {
        // distinct lines through a common point of the circle meet only there
        return LineClass::IntersectAt {
            point: p.point(),
            norm: 1.0,
        };
    }
    let (n1, c1) = chord_line(a1, a2);
    let (n2, c2) = chord_line(a3, a4);
    let det = n1[0] * n2[1] - n1[1] * n2[0];
    if det.abs() < PARALLEL_TOLERANCE {
        return LineClass::Parallel;
    }
    let x = (c1 * n2[1] - c2 * n1[1]) / det;
    let y = (c2 * n1[0] - c1 * n2[0]) / det;
    LineClass::IntersectAt {
        point: [x, y],
        norm: x.hypot(y),
    }
}

/// The function `f`: norm of the intersection point, distance of the common
/// line, or `+∞` for parallel lines.
pub fn f_value(a1: Angle, a2: Angle, a3: Angle, a4: Angle) -> f64 {
    match classify_lines(a1, a2, a3, a4) {
        LineClass::IntersectAt { norm, .. } => norm,
        LineClass::SameLine { distance_to_origin } => distance_to_origin,
        LineClass::Parallel => f64::INFINITY,
    }
}

/// Combinatorial crossing test for four distinct points: the chords cross
/// strictly inside the circle iff exactly one of `a3`, `a4` lies on the open
/// arc from `a1` to `a2`.
pub fn chords_cross_strictly_inside(a1: Angle, a2: Angle, a3: Angle, a4: Angle) -> Result<bool> {
    let pts = [a1, a2, a3, a4];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::Precondition(format!(
                    "crossing test needs four distinct points, got repeated {}",
                    pts[i].turns()
                )));
            }
        }
    }
    Ok(crosses_unchecked(a1, a2, a3, a4))
}

pub(crate) fn crosses_unchecked(a1: Angle, a2: Angle, a3: Angle, a4: Angle) -> bool {
    let span = a1.offset_to(a2);
    let inside = |p: Angle| {
        let o = a1.offset_to(p);
        o > 0.0 && o < span
    };
    inside(a3) != inside(a4)
}

/// Half-width in turns of the arc `I_r(x)`.
fn i_r_half_width(r: f64) -> f64 {
    r.asin() / std::f64::consts::PI
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1], got {r}")));
    }
    Ok(())
}

/// The closed arc of points `y` whose chord with `x` meets the closed disk of
/// radius `r`: centred at the antipode of `x` with half-width `2·arcsin(r)`
/// radians. Meaningful for `y != x`; see [`in_i_r`] for the tangent case.
pub fn i_r_arc(x: Angle, r: f64) -> Result<Arc> {
    check_radius(r)?;
    let half = i_r_half_width(r);
    Arc::with_length(x.antipode().rotate(-half), 2.0 * half)
}

/// Whether the line through `x` and `y` meets the disk of radius `r`
/// (closed disk unless `strict`).
pub fn in_i_r(y: Angle, x: Angle, r: f64, strict: bool) -> Result<bool> {
    check_radius(r)?;
    Ok(compare(chord_distance_to_origin(x, y), r, strict))
}

/// `value < r` when strict, `value <= r` otherwise.
#[inline]
pub fn compare(value: f64, r: f64, strict: bool) -> bool {
    if strict {
        value < r
    } else {
        value <= r
    }
}
