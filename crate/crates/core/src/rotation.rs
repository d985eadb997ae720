//! Translation numbers: certified enclosures by iteration and exact rational detection.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lift_maps::{LiftError, Limits, PLLift};
use crate::rational::{ceil, int, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// A closed rational interval known to contain some exact real invariant.
///
/// A degenerate interval (`lo == hi`) is an exact value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CertifiedInterval {
    lo: Q,
    hi: Q,
}

impl CertifiedInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "certified interval with lo {lo} > hi {hi}");
        Self { lo, hi }
    }

    pub fn exact(v: Q) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Q> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Q) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn shift(&self, c: &Q) -> Self {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Multiplication by a scalar of either sign.
    pub fn scale(&self, c: &Q) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    /// Enclosure of `|v|` for `v` in this interval.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Self {
                lo: Q::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
            }
        }
    }

    /// Largest `|v|` over the interval.
    pub fn magnitude(&self) -> Q {
        self.lo.abs().max(self.hi.abs())
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// A translation number detected as the rational `p/q` via a point with `F^q(x) = x + p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTau {
    pub value: Q,
    pub p: BigInt,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauResult {
    pub interval: CertifiedInterval,
    pub rational: Option<RationalTau>,
    /// Largest iterate `F^n` computed.
    pub iterations_used: u64,
}

fn bounds_of_iterate(iterate: &PLLift, n: u64) -> CertifiedInterval {
    let d = iterate.displacement();
    let n = qi(n as i64);
    CertifiedInterval::new(d.min_disp / &n, d.max_disp / n)
}

/// `[min(F^n − id)/n, max(F^n − id)/n]`, which contains `τ(F)` and is narrower than `1/n`.
pub fn tau_bounds(f: &PLLift, n: u64) -> Result<CertifiedInterval, RotationError> {
    tau_bounds_with(f, n, &Limits::default())
}

pub fn tau_bounds_with(
    f: &PLLift,
    n: u64,
    limits: &Limits,
) -> Result<CertifiedInterval, RotationError> {
    if n == 0 {
        return Err(RotationError::InvalidArgument(
            "iteration count must be positive",
        ));
    }
    let exponent = i64::try_from(n)
        .map_err(|_| RotationError::InvalidArgument("iteration count too large"))?;
    let iterate = f.power_limited(exponent, limits)?;
    Ok(bounds_of_iterate(&iterate, n))
}

/// The rational translation number `p/q` with the least period `q ≤ q_max`, if one exists.
pub fn tau_rational(f: &PLLift, q_max: u64) -> Result<Option<RationalTau>, RotationError> {
    tau_rational_with(f, q_max, &Limits::default())
}

pub fn tau_rational_with(
    f: &PLLift,
    q_max: u64,
    limits: &Limits,
) -> Result<Option<RationalTau>, RotationError> {
    if q_max == 0 {
        return Err(RotationError::InvalidArgument("q_max must be positive"));
    }
    if let Some(c) = f.as_translation() {
        // x + c has period q exactly when q·c is an integer
        let q = c.denom();
        return Ok((*q <= BigInt::from(q_max)).then(|| RationalTau {
            value: c.clone(),
            p: c.numer().clone(),
            q: q.try_into().expect("q ≤ q_max"),
        }));
    }
    let mut iterate = f.clone();
    for q in 1..=q_max {
        if q > 1 {
            iterate = f.compose_limited(&iterate, limits)?;
        }
        let d = iterate.displacement();
        // max − min < 1, so at most one integer is attained
        let p = ceil(&d.min_disp);
        if Q::from(p.clone()) <= d.max_disp {
            return Ok(Some(RationalTau {
                value: Q::new(p.clone(), int(q as i64)),
                p,
                q,
            }));
        }
    }
    Ok(None)
}

/// Rational detection up to `q_max`, then doubling `n` until the width is below `width_target`.
pub fn tau(f: &PLLift, width_target: &Q, q_max: u64) -> Result<TauResult, RotationError> {
    tau_with(f, width_target, q_max, &Limits::default())
}

pub fn tau_with(
    f: &PLLift,
    width_target: &Q,
    q_max: u64,
    limits: &Limits,
) -> Result<TauResult, RotationError> {
    if !width_target.is_positive() {
        return Err(RotationError::InvalidArgument(
            "width target must be positive",
        ));
    }
    if let Some(r) = tau_rational_with(f, q_max, limits)? {
        return Ok(TauResult {
            interval: CertifiedInterval::exact(r.value.clone()),
            iterations_used: r.q,
            rational: Some(r),
        });
    }
    let mut n = 1u64;
    let mut iterate = f.clone();
    let mut interval = bounds_of_iterate(&iterate, n);
    while !interval.is_exact() && interval.width() >= *width_target {
        iterate = iterate.compose_limited(&iterate, limits)?;
        n = n
            .checked_mul(2)
            .ok_or(RotationError::InvalidArgument("iteration count overflow"))?;
        interval = interval
            .intersect(&bounds_of_iterate(&iterate, n))
            .expect("certified enclosures of one number intersect");
    }
    Ok(TauResult {
        interval,
        rational: None,
        iterations_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lift(pairs: &[(&str, &str)]) -> PLLift {
        PLLift::new(pairs.iter().map(|(x, y)| (q(x), q(y))).collect()).unwrap()
    }

    #[test]
    fn interval_arithmetic() {
        let a = CertifiedInterval::new(q("-1/2"), q("1/4"));
        let b = CertifiedInterval::new(q("1"), q("2"));
        assert_eq!(a.abs(), CertifiedInterval::new(q("0"), q("1/2")));
        assert_eq!(a.sub(&b), CertifiedInterval::new(q("-5/2"), q("-3/4")));
        assert_eq!(a.scale(&q("-2")), CertifiedInterval::new(q("-1/2"), q("1")));
        assert_eq!(b.neg().abs(), b);
        assert!(a.intersect(&b).is_none());
        assert_eq!(a.magnitude(), q("1/2"));
    }

    #[test]
    fn tau_bounds_translation_is_exact() {
        let i = tau_bounds(&PLLift::translation(q("1/3")), 1).unwrap();
        assert!(i.is_exact());
        assert_eq!(i.lo(), &q("1/3"));
    }

    #[test]
    fn tau_bounds_fixed_point_contains_zero() {
        let f = lift(&[("0", "1/4"), ("1/2", "1/2")]);
        for n in [1, 3, 8] {
            assert!(tau_bounds(&f, n).unwrap().contains(&Q::zero()));
        }
    }

    #[test]
    fn tau_bounds_nest() {
        let f = lift(&[("0", "1/8"), ("1/2", "3/4")]);
        let i16 = tau_bounds(&f, 16).unwrap();
        let i32 = tau_bounds(&f, 32).unwrap();
        assert!(i16.width() < q("1/16"));
        let both = i16.intersect(&i32).expect("enclosures intersect");
        assert!(i16.contains_interval(&both));
    }

    #[test]
    fn zero_iterations_rejected() {
        assert!(tau_bounds(&PLLift::identity(), 0).is_err());
        assert!(tau_rational(&PLLift::identity(), 0).is_err());
        assert!(tau(&PLLift::identity(), &q("0"), 3).is_err());
    }

    #[test]
    fn tau_rational_translation() {
        let r = tau_rational(&PLLift::translation(q("2/5")), 10)
            .unwrap()
            .unwrap();
        assert_eq!((r.value, r.q), (q("2/5"), 5));
        assert_eq!(
            tau_rational(&PLLift::translation(q("2/5")), 4).unwrap(),
            None
        );
    }

    #[test]
    fn tau_rational_period_two() {
        let f = lift(&[("0", "1/2"), ("1/2", "1")]);
        assert_eq!(f.power(2), PLLift::translation(q("1")));
        let r = tau_rational(&f, 5).unwrap().unwrap();
        assert_eq!((r.value, r.q), (q("1/2"), 2));
    }

    #[test]
    fn tau_rational_detects_nontranslation_orbits() {
        // slopes 3/2 and 1/2 shifted by 1/3: F^q displacement range contains p
        let f = lift(&[("0", "1/3"), ("1/2", "13/12")]);
        let bounds = tau_bounds(&f, 64).unwrap();
        if let Some(r) = tau_rational(&f, 12).unwrap() {
            assert!(bounds.contains(&r.value));
        }
    }

    #[test]
    fn tau_prefers_rational() {
        let r = tau(&PLLift::translation(q("1/3")), &q("1/100"), 8).unwrap();
        assert!(r.interval.is_exact());
        assert_eq!(r.rational.unwrap().value, q("1/3"));
    }

    #[test]
    fn tau_reaches_width_target() {
        let f = lift(&[("0", "1/8"), ("1/2", "3/4")]);
        let r = tau(&f, &q("1/40"), 1).unwrap();
        if r.rational.is_none() {
            assert!(r.interval.width() < q("1/40"));
        }
    }
}
