//! Exact piecewise-linear lifts of circle homeomorphisms.
//!
//! A [`PLLift`] is a homeomorphism `F` of the real line with `F(x + 1) = F(x) + 1`,
//! stored by its breakpoints in the fundamental domain `[0, 1)`. Between two
//! consecutive breakpoints the map is affine; the segment after the last
//! breakpoint joins `(x_last, y_last)` to `(x_first + 1, y_first + 1)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{ceil, floor, int, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("a lift needs at least one sample")]
    Empty,
    #[error("duplicate x-coordinate {0}")]
    DuplicateX(Q),
    #[error("y-coordinates are not strictly increasing at x = {0}")]
    NonIncreasingY(Q),
    #[error("period violation: last y {last} is not below first y + 1 = {bound}")]
    PeriodViolation { last: Q, bound: Q },
    #[error("x-coordinate {0} lies outside [0, 1)")]
    XOutOfRange(Q),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

impl LiftError {
    /// Stable variant name, used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            LiftError::Empty => "Empty",
            LiftError::DuplicateX(_) => "DuplicateX",
            LiftError::NonIncreasingY(_) => "NonIncreasingY",
            LiftError::PeriodViolation { .. } => "PeriodViolation",
            LiftError::XOutOfRange(_) => "XOutOfRange",
            LiftError::ResourceLimit(_) => "ResourceLimit",
        }
    }
}

/// Guard against breakpoint and rational-size growth under composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_breakpoints: usize,
    /// Maximum bit length of any numerator or denominator.
    pub max_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_breakpoints: 1 << 20,
            max_bits: 1 << 16,
        }
    }
}

impl Limits {
    pub fn check(&self, lift: &PLLift) -> Result<(), LiftError> {
        if lift.samples.len() > self.max_breakpoints {
            return Err(LiftError::ResourceLimit(format!(
                "{} breakpoints exceeds the limit of {}",
                lift.samples.len(),
                self.max_breakpoints
            )));
        }
        let bits = lift
            .samples
            .iter()
            .flat_map(|(x, y)| [x, y])
            .map(|q| q.numer().bits().max(q.denom().bits()))
            .max()
            .unwrap_or(0);
        if bits > self.max_bits {
            return Err(LiftError::ResourceLimit(format!(
                "{bits}-bit rational exceeds the limit of {} bits",
                self.max_bits
            )));
        }
        Ok(())
    }
}

/// Extrema of the periodic displacement `x ↦ F(x) − x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementSummary {
    pub min_disp: Q,
    pub max_disp: Q,
    /// Leftmost breakpoint in `[0, 1)` attaining `min_disp`.
    pub argmin: Q,
    /// Leftmost breakpoint in `[0, 1)` attaining `max_disp`.
    pub argmax: Q,
    pub min_abs_disp: Q,
}

impl DisplacementSummary {
    pub fn changes_sign(&self) -> bool {
        !self.min_disp.is_positive() && !self.max_disp.is_negative()
    }
}

/// An open interval on which a lift is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedInterval {
    /// Left end, in `[0, 1)`.
    pub start: Q,
    /// Right end; may exceed 1 when the interval wraps past an integer.
    pub end: Q,
    /// The lift is the identity on the whole line.
    pub whole_line: bool,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLLift {
    samples: Vec<(Q, Q)>,
}

impl fmt::Debug for PLLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLLift[")?;
        for (i, (x, y)) in self.samples.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

impl PLLift {
    /// Validates and canonicalizes sample pairs with x in `[0, 1)`.
    ///
    /// Samples are sorted by x first; collinear samples are pruned.
    pub fn new(mut samples: Vec<(Q, Q)>) -> Result<Self, LiftError> {
        if samples.is_empty() {
            return Err(LiftError::Empty);
        }
        for (x, _) in &samples {
            if x.is_negative() || *x >= Q::one() {
                return Err(LiftError::XOutOfRange(x.clone()));
            }
        }
        samples.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in samples.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(LiftError::DuplicateX(pair[1].0.clone()));
            }
            if pair[1].1 <= pair[0].1 {
                return Err(LiftError::NonIncreasingY(pair[1].0.clone()));
            }
        }
        let first = &samples[0].1;
        let last = &samples[samples.len() - 1].1;
        let bound = first + Q::one();
        if samples.len() > 1 && *last >= bound {
            return Err(LiftError::PeriodViolation {
                last: last.clone(),
                bound,
            });
        }
        Ok(Self::canonical(samples))
    }

    /// Builds a lift from points anywhere on the line, reducing each point
    /// into the fundamental domain by an integer deck translation.
    pub fn from_points(points: impl IntoIterator<Item = (Q, Q)>) -> Result<Self, LiftError> {
        let reduced = points
            .into_iter()
            .map(|(x, y)| {
                let shift = Q::from(floor(&x));
                (x - &shift, y - shift)
            })
            .collect();
        Self::new(reduced)
    }

    pub fn identity() -> Self {
        Self::translation(Q::zero())
    }

    pub fn translation(c: Q) -> Self {
        Self {
            samples: vec![(Q::zero(), c)],
        }
    }

    pub fn samples(&self) -> &[(Q, Q)] {
        &self.samples
    }

    pub fn breakpoint_count(&self) -> usize {
        self.samples.len()
    }

    /// The translation amount if this lift is `x ↦ x + c`.
    pub fn as_translation(&self) -> Option<&Q> {
        match self.samples.as_slice() {
            [(_, c)] => Some(c),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.as_translation().is_some_and(Zero::is_zero)
    }

    // Input must already be sorted and validated.
    fn canonical(samples: Vec<(Q, Q)>) -> Self {
        let n = samples.len();
        let mut kept = Vec::with_capacity(n);
        if n > 1 {
            for i in 0..n {
                let (px, py) = neighbor(&samples, i, false);
                let (nx, ny) = neighbor(&samples, i, true);
                let (x, y) = &samples[i];
                // slope in == slope out, cross-multiplied
                let collinear = (y - &py) * (&nx - x) == (&ny - y) * (x - &px);
                if !collinear {
                    kept.push(samples[i].clone());
                }
            }
        }
        if kept.is_empty() {
            let (x, y) = &samples[0];
            return Self::translation(y - x);
        }
        Self { samples: kept }
    }

    fn segment_at(&self, t: &Q) -> ((Q, Q), (Q, Q)) {
        let idx = self.samples.partition_point(|(x, _)| x <= t);
        if idx == 0 {
            (neighbor(&self.samples, 0, false), self.samples[0].clone())
        } else {
            (
                self.samples[idx - 1].clone(),
                neighbor(&self.samples, idx - 1, true),
            )
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        if let Some(c) = self.as_translation() {
            return x + c;
        }
        let shift = Q::from(floor(x));
        let t = x - &shift;
        let ((x0, y0), (x1, y1)) = self.segment_at(&t);
        let y = &y0 + (&y1 - &y0) * (&t - &x0) / (&x1 - &x0);
        y + shift
    }

    /// Solves `F(x) = y`.
    pub fn eval_inverse(&self, y: &Q) -> Q {
        if let Some(c) = self.as_translation() {
            return y - c;
        }
        let n = self.samples.len();
        let y_first = &self.samples[0].1;
        let shift = Q::from(floor(&(y - y_first)));
        let t = y - &shift;
        let idx = self.samples.partition_point(|(_, sy)| *sy <= t);
        debug_assert!(idx >= 1);
        let (x0, y0) = self.samples[idx - 1].clone();
        let (x1, y1) = if idx == n {
            neighbor(&self.samples, n - 1, true)
        } else {
            self.samples[idx].clone()
        };
        let x = &x0 + (&x1 - &x0) * (&t - &y0) / (&y1 - &y0);
        x + shift
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLLift) -> PLLift {
        if let (Some(a), Some(b)) = (self.as_translation(), inner.as_translation()) {
            return Self::translation(a + b);
        }
        let base = inner.eval(&Q::zero());
        let mut xs: Vec<Q> = inner.samples.iter().map(|(x, _)| x.clone()).collect();
        if self.as_translation().is_none() {
            for (b, _) in &self.samples {
                // representative of b in [inner(0), inner(0) + 1)
                let y = b + Q::from(ceil(&(&base - b)));
                xs.push(inner.eval_inverse(&y));
            }
        }
        xs.sort();
        xs.dedup();
        let samples = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect();
        Self::new(samples).expect("composition of lifts is a lift")
    }

    pub fn compose_limited(&self, inner: &PLLift, limits: &Limits) -> Result<PLLift, LiftError> {
        let out = self.compose(inner);
        limits.check(&out)?;
        Ok(out)
    }

    pub fn inverse(&self) -> PLLift {
        if let Some(c) = self.as_translation() {
            return Self::translation(-c);
        }
        Self::from_points(self.samples.iter().map(|(x, y)| (y.clone(), x.clone())))
            .expect("inverse of a lift is a lift")
    }

    /// The deck-translated lift `F + k`.
    pub fn translate(&self, k: i64) -> PLLift {
        self.shift(&Q::from(int(k)))
    }

    pub(crate) fn shift(&self, c: &Q) -> PLLift {
        Self {
            samples: self
                .samples
                .iter()
                .map(|(x, y)| (x.clone(), y + c))
                .collect(),
        }
    }

    pub fn power(&self, n: i64) -> PLLift {
        self.power_limited(
            n,
            &Limits {
                max_breakpoints: usize::MAX,
                max_bits: u64::MAX,
            },
        )
        .expect("unbounded limits")
    }

    /// Exact `n`-fold composition by repeated squaring; negative `n` uses the inverse.
    pub fn power_limited(&self, n: i64, limits: &Limits) -> Result<PLLift, LiftError> {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PLLift::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_limited(&base, limits)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_limited(&base, limits)?;
            }
        }
        Ok(acc)
    }

    pub fn displacement(&self) -> DisplacementSummary {
        let mut it = self.samples.iter().map(|(x, y)| (x, y - x));
        let (x0, d0) = it.next().expect("nonempty");
        let (mut min_disp, mut argmin) = (d0.clone(), x0.clone());
        let (mut max_disp, mut argmax) = (d0, x0.clone());
        for (x, d) in it {
            if d < min_disp {
                min_disp = d.clone();
                argmin = x.clone();
            }
            if d > max_disp {
                max_disp = d;
                argmax = x.clone();
            }
        }
        let min_abs_disp = min_abs(&min_disp, &max_disp);
        DisplacementSummary {
            min_disp,
            max_disp,
            argmin,
            argmax,
            min_abs_disp,
        }
    }

    /// Leftmost `x` in `[0, 1)` where `F(x) − x = level`, if any.
    pub fn leftmost_displacement_level(&self, level: &Q) -> Option<Q> {
        let knots = self.samples.iter().map(|(x, _)| x.clone());
        PeriodicProfile::sample(knots, |x| self.eval(x) - x).leftmost_level(level)
    }

    /// The leftmost maximal open interval on which the lift is the identity.
    pub fn fixed_interval(&self) -> Option<FixedInterval> {
        if self.is_identity() {
            return Some(FixedInterval {
                start: Q::zero(),
                end: Q::one(),
                whole_line: true,
            });
        }
        if self.samples.len() < 2 {
            return None;
        }
        (0..self.samples.len()).find_map(|i| {
            let (x, y) = &self.samples[i];
            let (nx, ny) = neighbor(&self.samples, i, true);
            (x == y && nx == ny).then(|| FixedInterval {
                start: x.clone(),
                end: nx,
                whole_line: false,
            })
        })
    }

    /// Whether the lift is the identity on the closed interval `[a, b]`, `a < b`.
    pub fn fixes_on(&self, a: &Q, b: &Q) -> bool {
        if a >= b {
            return false;
        }
        if self.eval(a) != *a || self.eval(b) != *b {
            return false;
        }
        if b - a >= Q::one() {
            return self.is_identity();
        }
        // every breakpoint inside (a, b) must be fixed as well
        let shift = Q::from(floor(a));
        self.samples.iter().all(|(x, y)| {
            [&shift, &(&shift + Q::one())].into_iter().all(|s| {
                let bx = x + s;
                !(a < &bx && bx < *b) || y + s == bx
            })
        })
    }

    /// Conjugation by `x ↦ −x`; negates the displacement function.
    pub fn reflect_conjugate(&self) -> PLLift {
        if let Some(c) = self.as_translation() {
            return Self::translation(-c);
        }
        Self::from_points(self.samples.iter().map(|(x, y)| (-x, -y)))
            .expect("reflection of a lift is a lift")
    }
}

/// Sample `i` stepped to its cyclic neighbour, shifted by a period across the wrap.
fn neighbor(samples: &[(Q, Q)], i: usize, forward: bool) -> (Q, Q) {
    let n = samples.len();
    if forward {
        if i + 1 < n {
            samples[i + 1].clone()
        } else {
            let (x, y) = &samples[0];
            (x + Q::one(), y + Q::one())
        }
    } else if i > 0 {
        samples[i - 1].clone()
    } else {
        let (x, y) = &samples[n - 1];
        (x - Q::one(), y - Q::one())
    }
}

pub(crate) fn min_abs(min: &Q, max: &Q) -> Q {
    if !min.is_positive() && !max.is_negative() {
        Q::zero()
    } else {
        min.abs().min(max.abs())
    }
}

/// A 1-periodic piecewise-linear function given by its values at knots in `[0, 1)`.
#[derive(Debug, Clone)]
pub(crate) struct PeriodicProfile {
    knots: Vec<(Q, Q)>,
}

impl PeriodicProfile {
    /// Samples `f` at the given knots plus 0; `f` must be affine between them.
    pub(crate) fn sample(knots: impl IntoIterator<Item = Q>, f: impl Fn(&Q) -> Q) -> Self {
        let mut xs: Vec<Q> = knots.into_iter().collect();
        xs.push(Q::zero());
        xs.sort();
        xs.dedup();
        Self {
            knots: xs
                .into_iter()
                .map(|x| {
                    let v = f(&x);
                    (x, v)
                })
                .collect(),
        }
    }

    pub(crate) fn min(&self) -> &Q {
        self.knots.iter().map(|(_, v)| v).min().expect("nonempty")
    }

    pub(crate) fn max(&self) -> &Q {
        self.knots.iter().map(|(_, v)| v).max().expect("nonempty")
    }

    pub(crate) fn min_abs(&self) -> Q {
        min_abs(self.min(), self.max())
    }

    pub(crate) fn leftmost_level(&self, level: &Q) -> Option<Q> {
        let n = self.knots.len();
        for i in 0..n {
            let (a, va) = &self.knots[i];
            if va == level {
                return Some(a.clone());
            }
            let (b, vb) = if i + 1 < n {
                self.knots[i + 1].clone()
            } else {
                (Q::one(), self.knots[0].1.clone())
            };
            let da = va - level;
            let db = &vb - level;
            if (da.is_negative() && db.is_positive()) || (da.is_positive() && db.is_negative()) {
                return Some(a + (level - va) * (&b - a) / (vb - va));
            }
        }
        None
    }
}

/// `E(x)`: the lower integer part.
pub fn lower_integer_part(x: &Q) -> BigInt {
    floor(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lift(pairs: &[(&str, &str)]) -> PLLift {
        PLLift::new(pairs.iter().map(|(x, y)| (q(x), q(y))).collect()).unwrap()
    }

    #[test]
    fn normalize_prunes_pure_translation() {
        let f = lift(&[("0", "1/2"), ("1/4", "3/4"), ("1/2", "1")]);
        assert_eq!(f.samples(), &[(q("0"), q("1/2"))]);
    }

    #[test]
    fn normalize_two_breakpoints() {
        let f = lift(&[("0", "0"), ("1/2", "3/4")]);
        assert_eq!(f.breakpoint_count(), 2);
        // slopes 3/2 then 1/2
        assert_eq!(f.eval(&q("1/4")), q("3/8"));
        assert_eq!(f.eval(&q("3/4")), q("7/8"));
    }

    #[test]
    fn normalize_errors() {
        let bad = |pairs: &[(&str, &str)]| {
            PLLift::new(pairs.iter().map(|(x, y)| (q(x), q(y))).collect()).unwrap_err()
        };
        assert!(matches!(
            bad(&[("0", "0"), ("1/2", "0")]),
            LiftError::NonIncreasingY(_)
        ));
        assert!(matches!(
            bad(&[("0", "0"), ("0", "1/4")]),
            LiftError::DuplicateX(_)
        ));
        assert!(matches!(
            bad(&[("0", "0"), ("1/2", "1")]),
            LiftError::PeriodViolation { .. }
        ));
        assert!(matches!(bad(&[("1", "0")]), LiftError::XOutOfRange(_)));
        assert!(matches!(bad(&[("-1/3", "0")]), LiftError::XOutOfRange(_)));
        assert_eq!(PLLift::new(vec![]).unwrap_err(), LiftError::Empty);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(PLLift::translation(q("1/3")).eval(&q("5")), q("16/3"));
        let f = lift(&[("0", "0"), ("1/2", "3/4")]);
        assert_eq!(f.eval(&q("1/4")), q("3/8"));
        assert_eq!(f.eval(&q("5/4")), q("11/8"));
        assert_eq!(f.eval(&q("-3/4")), q("-5/8"));
        assert_eq!(f.eval_inverse(&q("11/8")), q("5/4"));
    }

    #[test]
    fn compose_translations_add() {
        let a = PLLift::translation(q("1/2"));
        let b = PLLift::translation(q("1/3"));
        assert_eq!(a.compose(&b), PLLift::translation(q("5/6")));
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = lift(&[("0", "0"), ("1/2", "3/4")]);
        let g = PLLift::translation(q("1/2"));
        let fg = f.compose(&g);
        for i in -7..13 {
            let x = Q::new(int(i * 7 + 3), int(17));
            assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn invert_examples() {
        let f = lift(&[("0", "0"), ("1/2", "3/4")]);
        let inv = f.inverse();
        assert_eq!(inv, lift(&[("0", "0"), ("3/4", "1/2")]));
        assert!(f.compose(&inv).is_identity());
        assert!(inv.compose(&f).is_identity());
        assert_eq!(
            PLLift::translation(q("2/7")).inverse(),
            PLLift::translation(q("-2/7"))
        );
        assert!(PLLift::identity().inverse().is_identity());
    }

    #[test]
    fn translate_shifts_displacement() {
        assert_eq!(PLLift::identity().translate(3), PLLift::translation(q("3")));
        let f = lift(&[("0", "1/4"), ("1/2", "1/2")]);
        assert_eq!(f.translate(0), f);
        assert_eq!(f.translate(2).displacement().min_disp, q("2"));
    }

    #[test]
    fn power_examples() {
        let f = lift(&[("0", "1/4"), ("1/2", "1/2")]);
        assert!(f.power(0).is_identity());
        assert_eq!(
            PLLift::translation(q("1/3")).power(3),
            PLLift::translation(q("1"))
        );
        let g = lift(&[("0", "1/2"), ("1/2", "1")]);
        assert_eq!(g.power(2).eval(&q("0")), q("1"));
        assert!(f.power(-3).compose(&f.power(3)).is_identity());
    }

    #[test]
    fn power_respects_limits() {
        let f = lift(&[("0", "1/7"), ("1/3", "3/5"), ("2/3", "5/6")]);
        let tight = Limits {
            max_breakpoints: 4,
            max_bits: 1 << 10,
        };
        assert!(matches!(
            f.power_limited(8, &tight),
            Err(LiftError::ResourceLimit(_))
        ));
    }

    #[test]
    fn displacement_examples() {
        let t = PLLift::translation(q("-2/5")).displacement();
        assert_eq!(
            (t.min_disp.clone(), t.max_disp.clone()),
            (q("-2/5"), q("-2/5"))
        );
        assert_eq!(t.min_abs_disp, q("2/5"));
        let f = lift(&[("0", "1/4"), ("1/2", "1/2")]).displacement();
        assert_eq!(f.min_disp, q("0"));
        assert_eq!(f.argmin, q("1/2"));
        assert_eq!(f.max_disp, q("1/4"));
        assert_eq!(f.argmax, q("0"));
        assert_eq!(f.min_abs_disp, q("0"));
        let id = PLLift::identity().displacement();
        assert!(id.min_disp.is_zero() && id.max_disp.is_zero() && id.min_abs_disp.is_zero());
    }

    #[test]
    fn fixed_interval_examples() {
        let id = PLLift::identity().fixed_interval().unwrap();
        assert!(id.whole_line);
        assert_eq!(PLLift::translation(q("1/2")).fixed_interval(), None);
        let bump = lift(&[("0", "0"), ("1/4", "1/4"), ("5/8", "3/4")]);
        let fi = bump.fixed_interval().unwrap();
        assert_eq!((fi.start, fi.end, fi.whole_line), (q("0"), q("1/4"), false));
        assert!(bump.fixes_on(&q("1/16"), &q("3/16")));
        assert!(!bump.fixes_on(&q("1/16"), &q("1/2")));
        // wrapping interval
        let wrap = lift(&[("1/4", "1/4"), ("1/2", "5/8"), ("3/4", "3/4")]);
        let fi = wrap.fixed_interval().unwrap();
        assert_eq!((fi.start.clone(), fi.end.clone()), (q("3/4"), q("5/4")));
        assert!(wrap.fixes_on(&q("7/8"), &q("9/8")));
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(
            PLLift::translation(q("1/3")).reflect_conjugate(),
            PLLift::translation(q("-1/3"))
        );
        let f = lift(&[("0", "1/4"), ("1/2", "1/2")]);
        assert_eq!(f.reflect_conjugate().reflect_conjugate(), f);
        let d = f.reflect_conjugate().displacement();
        assert_eq!((d.min_disp, d.max_disp), (q("-1/4"), q("0")));
    }

    #[test]
    fn leftmost_level_interpolates() {
        // displacement 1/4 at 0, -1/8 at 1/2: zero crossing at 1/3
        let f = lift(&[("0", "1/4"), ("1/2", "3/8")]);
        assert_eq!(f.leftmost_displacement_level(&Q::zero()), Some(q("1/3")));
        assert_eq!(f.leftmost_displacement_level(&q("1")), None);
    }
}
