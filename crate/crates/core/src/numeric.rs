//! Small floating-point helpers shared across modules.

use std::f64::consts::PI;

/// Reduces `x` (in half-turns) to a quadrant index and a remainder in [-1/4, 1/4].
fn reduce_half_turns(x: f64) -> (u8, f64) {
    let y = x.rem_euclid(2.0);
    let q = (2.0 * y).round();
    let rest = y - 0.5 * q;
    ((q as i64).rem_euclid(4) as u8, rest)
}

/// `sin(pi * x)`, exact at multiples of 1/2.
pub fn sin_pi(x: f64) -> f64 {
    let (q, r) = reduce_half_turns(x);
    let (s, c) = (PI * r).sin_cos();
    match q {
        0 => s,
        1 => c,
        2 => -s,
        _ => -c,
    }
}

/// `cos(pi * x)`, exact at multiples of 1/2.
pub fn cos_pi(x: f64) -> f64 {
    let (q, r) = reduce_half_turns(x.abs());
    let (s, c) = (PI * r).sin_cos();
    match q {
        0 => c,
        1 => -s,
        2 => -c,
        _ => s,
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_exact_at_half_integers() {
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(-0.5), 0.0);
        assert_eq!(cos_pi(1.0), -1.0);
        assert_eq!(cos_pi(0.0), 1.0);
        assert_eq!(sin_pi(1.0), 0.0);
        assert_eq!(sin_pi(2000.0), 0.0);
        assert_eq!(sin_pi(-1.5), 1.0);
    }

    #[test]
    fn trig_matches_std() {
        for i in -400..400 {
            let x = i as f64 * 0.0137;
            assert!((sin_pi(x) - (PI * x).sin()).abs() < 1e-13, "sin {x}");
            assert!((cos_pi(x) - (PI * x).cos()).abs() < 1e-13, "cos {x}");
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-24);
    }
}
