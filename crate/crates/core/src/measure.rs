//! Probability measures on the circle.
//!
//! A [`MixtureMeasure`] is a finite list of atoms plus finitely many
//! components that are uniform on an arc. This family is closed under the
//! operations used here, has closed-form Fourier coefficients, and can be
//! sampled exactly. [`DiscreteMeasure`] is the purely atomic special case.
//!
//! Measures only exist in validated form; the serializable [`MeasureSpec`]
//! is the unvalidated file representation.

use std::cmp::Ordering;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Invariant, Result};
use crate::geometry::{wrap_turns, Angle, AngleUnit, Arc};
use crate::numeric::{cos_pi, sin_pi, CompensatedSum};

/// Tolerance on the total mass.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Minimal circular gap (turns) between two atoms.
pub const ATOM_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub angle_turns: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub start_turns: f64,
    pub end_turns: f64,
    pub mass: f64,
}

/// File representation of a measure:
/// `{"atoms":[{"angle_turns":..,"weight":..}],"arcs":[{"start_turns":..,"end_turns":..,"mass":..}]}`.
///
/// An arc runs counter-clockwise from `start_turns` to `end_turns`; when
/// `end_turns - start_turns` is exactly a positive integer the arc is the
/// whole circle.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub arcs: Vec<ArcSpec>,
}

impl MeasureSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure spec serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Reinterprets every angle as radians and converts to turns.
    pub fn from_radians(mut self) -> Self {
        let k = 1.0 / std::f64::consts::TAU;
        for a in &mut self.atoms {
            a.angle_turns *= k;
        }
        for a in &mut self.arcs {
            a.start_turns *= k;
            a.end_turns *= k;
        }
        self
    }

    pub fn validate(&self) -> Result<MixtureMeasure> {
        MixtureMeasure::from_spec(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub angle: Angle,
    pub weight: f64,
}

/// Uniform mass on the arc from `start` to `end` (unwrapped, `start < end <= start + 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcComponent {
    start: Angle,
    end: f64,
    mass: f64,
}

impl ArcComponent {
    pub fn start(&self) -> Angle {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.end - self.start.turns()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn is_full(&self) -> bool {
        self.length() >= 1.0
    }

    pub fn arc(&self) -> Arc {
        Arc::with_length(self.start, self.length().min(1.0)).expect("validated arc length")
    }

    fn midpoint(&self) -> f64 {
        0.5 * (self.start.turns() + self.end)
    }

    fn spec(&self) -> ArcSpec {
        ArcSpec {
            start_turns: self.start.turns(),
            end_turns: self.end,
            mass: self.mass,
        }
    }
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(
            Invariant::FiniteValue,
            format!("{what} is not finite ({x})"),
        ))
    }
}

fn validate_atoms(specs: &[AtomSpec]) -> Result<Vec<Atom>> {
    let mut atoms = Vec::with_capacity(specs.len());
    for (i, a) in specs.iter().enumerate() {
        let t = finite(a.angle_turns, "atom angle")?;
        let w = finite(a.weight, "atom weight")?;
        if w <= 0.0 {
            return Err(Error::invalid(
                Invariant::PositiveWeight,
                format!("atom {i} has weight {w}; weights must be strictly positive"),
            ));
        }
        atoms.push(Atom {
            angle: Angle::from_turns(t)?,
            weight: w,
        });
    }
    atoms.sort_by(|a, b| {
        a.angle
            .turns()
            .partial_cmp(&b.angle.turns())
            .unwrap_or(Ordering::Equal)
    });
    let n = atoms.len();
    let pairs = if n > 1 { n } else { 0 };
    for i in 0..pairs {
        let j = (i + 1) % n;
        let gap = atoms[i].angle.circular_distance(atoms[j].angle);
        if gap <= ATOM_GAP {
            return Err(Error::invalid(
                Invariant::DistinctAtoms,
                format!(
                    "duplicate atom: angles {} and {} are within {ATOM_GAP} turns",
                    atoms[i].angle.turns(),
                    atoms[j].angle.turns()
                ),
            ));
        }
    }
    Ok(atoms)
}

fn validate_arc(i: usize, a: &ArcSpec) -> Result<ArcComponent> {
    let s = finite(a.start_turns, "arc start")?;
    let e = finite(a.end_turns, "arc end")?;
    let mass = finite(a.mass, "arc mass")?;
    if mass < 0.0 {
        return Err(Error::invalid(
            Invariant::NonNegativeMass,
            format!("arc {i} has negative mass {mass}"),
        ));
    }
    let start = wrap_turns(s);
    let end = if start == s && e > s && e <= s + 1.0 {
        // already canonical; kept verbatim so validation is idempotent
        e
    } else {
        let raw = e - s;
        if raw > 0.0 && raw.fract() == 0.0 {
            start + 1.0
        } else {
            start + wrap_turns(raw)
        }
    };
    if end <= start {
        return Err(Error::invalid(
            Invariant::NonEmptyArc,
            format!("arc {i} from {s} to {e} is empty"),
        ));
    }
    Ok(ArcComponent {
        start: Angle::from_turns(start)?,
        end,
        mass,
    })
}

fn check_total(total: f64) -> Result<()> {
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::invalid(
            Invariant::UnitMass,
            format!("total mass {total} differs from 1"),
        ));
    }
    Ok(())
}

/// A validated probability measure: atoms plus arc-uniform components.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureMeasure {
    atoms: Vec<Atom>,
    arcs: Vec<ArcComponent>,
}

impl MixtureMeasure {
    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        let atoms = validate_atoms(&spec.atoms)?;
        let arcs = spec
            .arcs
            .iter()
            .enumerate()
            .map(|(i, a)| validate_arc(i, a))
            .collect::<Result<Vec<_>>>()?;
        let total: CompensatedSum = atoms
            .iter()
            .map(|a| a.weight)
            .chain(arcs.iter().map(|a| a.mass))
            .collect();
        check_total(total.value())?;
        Ok(MixtureMeasure { atoms, arcs })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        MeasureSpec::from_json(s)?.validate()
    }

    pub fn read(path: impl AsRef<Path>, unit: AngleUnit) -> Result<Self> {
        let spec = MeasureSpec::read(path)?;
        match unit {
            AngleUnit::Turns => spec.validate(),
            AngleUnit::Radians => spec.from_radians().validate(),
        }
    }

    /// The uniform (Haar) probability measure.
    pub fn uniform() -> Self {
        MixtureMeasure {
            atoms: Vec::new(),
            arcs: vec![ArcComponent {
                start: Angle::ZERO,
                end: 1.0,
                mass: 1.0,
            }],
        }
    }

    /// Uniform probability measure on the arc from `start` to `end` turns.
    pub fn uniform_arc(start: f64, end: f64) -> Result<Self> {
        MeasureSpec {
            atoms: vec![],
            arcs: vec![ArcSpec {
                start_turns: start,
                end_turns: end,
                mass: 1.0,
            }],
        }
        .validate()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn arcs(&self) -> &[ArcComponent] {
        &self.arcs
    }

    pub fn is_discrete(&self) -> bool {
        self.arcs.iter().all(|a| a.mass == 0.0)
    }

    /// Mass of the continuous part.
    pub fn continuous_mass(&self) -> f64 {
        self.arcs.iter().map(|a| a.mass).sum()
    }

    pub fn to_spec(&self) -> MeasureSpec {
        MeasureSpec {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomSpec {
                    angle_turns: a.angle.turns(),
                    weight: a.weight,
                })
                .collect(),
            arcs: self.arcs.iter().map(ArcComponent::spec).collect(),
        }
    }

    /// Re-runs validation on the canonical representation.
    pub fn validate(&self) -> Result<MixtureMeasure> {
        self.to_spec().validate()
    }

    pub fn to_discrete(&self) -> Result<DiscreteMeasure> {
        if !self.is_discrete() {
            return Err(Error::invalid(
                Invariant::NoContinuousPart,
                format!(
                    "measure has continuous mass {}; a discrete measure is required",
                    self.continuous_mass()
                ),
            ));
        }
        Ok(DiscreteMeasure {
            atoms: self.atoms.clone(),
        })
    }

    /// Rotation of the whole measure by `turns`.
    pub fn rotate(&self, turns: f64) -> Result<MixtureMeasure> {
        let mut spec = self.to_spec();
        for a in &mut spec.atoms {
            a.angle_turns += turns;
        }
        for a in &mut spec.arcs {
            a.start_turns += turns;
            a.end_turns += turns;
        }
        spec.validate()
    }

    /// Draws one point.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Angle {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for a in &self.atoms {
            acc += a.weight;
            if u < acc {
                return a.angle;
            }
        }
        for c in &self.arcs {
            acc += c.mass;
            if u < acc {
                return sample_arc(c, rng);
            }
        }
        // rounding in the running sum: fall back to the last component
        match (self.arcs.iter().rev().find(|c| c.mass > 0.0), self.atoms.last()) {
            (Some(c), _) => sample_arc(c, rng),
            (None, Some(a)) => a.angle,
            (None, None) => unreachable!("validated measure has positive mass"),
        }
    }

    /// Fourier coefficient `∫ e^{-2πint} dμ(t)`.
    pub fn fourier_coefficient(&self, n: i64) -> Complex64 {
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let nf = n as f64;
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for a in &self.atoms {
            let phase = wrap_turns(nf * a.angle.turns());
            re.add(a.weight * cos_pi(2.0 * phase));
            im.add(-a.weight * sin_pi(2.0 * phase));
        }
        for c in &self.arcs {
            let len = c.length();
            // mass · e^{-2πin·mid} · sin(πnL)/(πnL)
            let sinc = sin_pi(nf * len) / (std::f64::consts::PI * nf * len);
            if sinc == 0.0 {
                continue;
            }
            let phase = wrap_turns(nf * c.midpoint());
            re.add(c.mass * sinc * cos_pi(2.0 * phase));
            im.add(-c.mass * sinc * sin_pi(2.0 * phase));
        }
        Complex64::new(re.value(), im.value())
    }

    /// Whether the measure is invariant under rotation by half a turn.
    pub fn is_antipodally_symmetric(&self, tol: f64) -> bool {
        let atoms_ok = self.atoms.iter().all(|a| {
            let target = a.angle.antipode();
            self.atoms
                .iter()
                .any(|b| b.angle.circular_distance(target) <= tol && (b.weight - a.weight).abs() <= tol)
        });
        let arcs_ok = self.arcs.iter().filter(|c| !c.is_full()).all(|c| {
            let target = c.start.antipode();
            self.arcs.iter().any(|d| {
                !d.is_full()
                    && d.start.circular_distance(target) <= tol
                    && (d.length() - c.length()).abs() <= tol
                    && (d.mass - c.mass).abs() <= tol
            })
        });
        atoms_ok && arcs_ok
    }
}

fn sample_arc<R: Rng + ?Sized>(c: &ArcComponent, rng: &mut R) -> Angle {
    let u: f64 = rng.random();
    Angle::from_turns(c.start.turns() + u * c.length()).expect("finite")
}

impl From<DiscreteMeasure> for MixtureMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        MixtureMeasure {
            atoms: m.atoms,
            arcs: Vec::new(),
        }
    }
}

/// A validated finitely supported probability measure, atoms sorted by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureSpec", into = "MeasureSpec")]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    /// Builds from `(angle in turns, weight)` pairs.
    pub fn from_turns(atoms: &[(f64, f64)]) -> Result<Self> {
        let spec = MeasureSpec {
            atoms: atoms
                .iter()
                .map(|&(angle_turns, weight)| AtomSpec { angle_turns, weight })
                .collect(),
            arcs: vec![],
        };
        spec.validate()?.to_discrete()
    }

    /// Atoms at the given angles with weights proportional to `weights`.
    pub fn normalized(angles: &[Angle], weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        let pairs: Vec<(f64, f64)> = angles
            .iter()
            .zip(weights)
            .map(|(a, w)| (a.turns(), w / total))
            .collect();
        Self::from_turns(&pairs)
    }

    /// Equal weights on the vertices of the regular `n`-gon.
    pub fn regular_polygon(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("polygon needs at least one vertex"));
        }
        let w = 1.0 / n as f64;
        let atoms: Vec<(f64, f64)> = (0..n).map(|k| (k as f64 / n as f64, w)).collect();
        Self::from_turns(&atoms)
    }

    /// `½(δ_p + δ_{-p})`.
    pub fn antipodal_pair(p: f64) -> Result<Self> {
        Self::from_turns(&[(p, 0.5), (p + 0.5, 0.5)])
    }

    pub fn delta(p: f64) -> Result<Self> {
        Self::from_turns(&[(p, 1.0)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn angles(&self) -> Vec<Angle> {
        self.atoms.iter().map(|a| a.angle).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.weight).collect()
    }

    pub fn rotate(&self, turns: f64) -> Result<Self> {
        MixtureMeasure::from(self.clone()).rotate(turns)?.to_discrete()
    }

    pub fn to_spec(&self) -> MeasureSpec {
        MixtureMeasure::from(self.clone()).to_spec()
    }
}

impl TryFrom<MeasureSpec> for DiscreteMeasure {
    type Error = Error;

    fn try_from(spec: MeasureSpec) -> Result<Self> {
        spec.validate()?.to_discrete()
    }
}

impl From<DiscreteMeasure> for MeasureSpec {
    fn from(m: DiscreteMeasure) -> Self {
        m.to_spec()
    }
}

/// Deterministic generator for stream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seeded random measures for property checks.
pub mod random {
    use super::*;

    /// Weights uniform on the open simplex (normalized exponentials).
    pub fn simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n).map(|_| 1e-6 - (1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w
    }

    /// `n` atoms at uniform angles with uniform simplex weights.
    pub fn discrete<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DiscreteMeasure {
        loop {
            let w = simplex_point(n, rng);
            let atoms: Vec<(f64, f64)> = w.iter().map(|&x| (rng.random::<f64>(), x)).collect();
            if let Ok(m) = DiscreteMeasure::from_turns(&atoms) {
                return m;
            }
        }
    }

    /// Up to three atoms and up to two arcs, each present with positive mass.
    pub fn mixture<R: Rng + ?Sized>(rng: &mut R) -> MixtureMeasure {
        loop {
            let n_atoms = rng.random_range(0..=3usize);
            let n_arcs = rng.random_range(usize::from(n_atoms == 0)..=2);
            let w = simplex_point(n_atoms + n_arcs, rng);
            let spec = MeasureSpec {
                atoms: (0..n_atoms)
                    .map(|k| AtomSpec {
                        angle_turns: rng.random(),
                        weight: w[k],
                    })
                    .collect(),
                arcs: (0..n_arcs)
                    .map(|k| {
                        let start: f64 = rng.random();
                        ArcSpec {
                            start_turns: start,
                            end_turns: start + rng.random_range(0.01..1.0),
                            mass: w[n_atoms + k],
                        }
                    })
                    .collect(),
            };
            if let Ok(m) = spec.validate() {
                return m;
            }
        }
    }

    /// A random mixture invariant under rotation by half a turn.
    pub fn symmetric_mixture<R: Rng + ?Sized>(rng: &mut R) -> MixtureMeasure {
        loop {
            let n_atoms = rng.random_range(0..=2usize);
            let n_arcs = rng.random_range(usize::from(n_atoms == 0)..=2);
            let w = simplex_point(n_atoms + n_arcs, rng);
            let mut spec = MeasureSpec::default();
            for (k, &x) in w.iter().enumerate() {
                let t = 0.5 * rng.random::<f64>();
                let len = rng.random_range(0.01..0.5);
                for shift in [0.0, 0.5] {
                    if k < n_atoms {
                        spec.atoms.push(AtomSpec {
                            angle_turns: t + shift,
                            weight: x / 2.0,
                        });
                    } else {
                        spec.arcs.push(ArcSpec {
                            start_turns: t + shift,
                            end_turns: t + shift + len,
                            mass: x / 2.0,
                        });
                    }
                }
            }
            if let Ok(m) = spec.validate() {
                return m;
            }
        }
    }
}
