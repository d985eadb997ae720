//! Annulus lifts represented by their two boundary traces.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lift_maps::{LiftError, Limits, PLLift, PeriodicProfile};
use crate::rational::{ceil, int, Q};
use crate::rotation::{tau_with, CertifiedInterval, RotationError};

/// A lift of an annulus homeomorphism, seen through its traces on `R × {0}` and `R × {1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnulusLift {
    pub lower: PLLift,
    pub upper: PLLift,
}

/// Output of [`AnnulusLift::recenter`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recentered {
    pub lift: AnnulusLift,
    /// Diagonal deck translation applied.
    pub shift: BigInt,
    /// Whether the traces were swapped to make the twist positive.
    pub flipped: bool,
    /// Leftmost point in `[0, 1)` where the gap `α` is attained.
    pub x0: Q,
}

impl AnnulusLift {
    pub fn new(lower: PLLift, upper: PLLift) -> Self {
        Self { lower, upper }
    }

    pub fn identity() -> Self {
        Self::new(PLLift::identity(), PLLift::identity())
    }

    /// The lift `(Id, x + n)` of the `n`-th power of the twist.
    pub fn twist_power(n: i64) -> Self {
        Self::new(PLLift::identity(), PLLift::identity().translate(n))
    }

    pub fn is_identity(&self) -> bool {
        self.lower.is_identity() && self.upper.is_identity()
    }

    /// Diagonal deck translation by `k`.
    pub fn translate(&self, k: i64) -> Self {
        self.shift(&Q::from(int(k)))
    }

    fn shift(&self, c: &Q) -> Self {
        Self::new(self.lower.shift(c), self.upper.shift(c))
    }

    /// Conjugation by `(x, r) ↦ (x, 1 − r)`: swaps the traces.
    pub fn flip(&self) -> Self {
        Self::new(self.upper.clone(), self.lower.clone())
    }

    /// Componentwise `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.lower.compose(&other.lower),
            self.upper.compose(&other.upper),
        )
    }

    pub fn compose_limited(&self, other: &Self, limits: &Limits) -> Result<Self, LiftError> {
        Ok(Self::new(
            self.lower.compose_limited(&other.lower, limits)?,
            self.upper.compose_limited(&other.upper, limits)?,
        ))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.lower.inverse(), self.upper.inverse())
    }

    pub fn power(&self, n: i64) -> Self {
        Self::new(self.lower.power(n), self.upper.power(n))
    }

    /// The periodic PL function `F₁ − F₀`, sampled at the merged breakpoints.
    fn gap_profile(&self) -> PeriodicProfile {
        let knots = self
            .lower
            .samples()
            .iter()
            .chain(self.upper.samples())
            .map(|(x, _)| x.clone());
        PeriodicProfile::sample(knots, |x| self.upper.eval(x) - self.lower.eval(x))
    }

    /// Signed extrema `(min, max)` of `F₁ − F₀`.
    pub fn signed_gap_extrema(&self) -> (Q, Q) {
        let p = self.gap_profile();
        (p.min().clone(), p.max().clone())
    }

    /// `α = min |F₁ − F₀|`; unchanged by diagonal translation.
    pub fn alpha(&self) -> Q {
        self.gap_profile().min_abs()
    }

    /// Leftmost point in `[0, 1)` where `|F₁ − F₀| = α`.
    pub fn alpha_point(&self) -> Q {
        let profile = self.gap_profile();
        let alpha = profile.min_abs();
        let level = if alpha.is_zero() || profile.min().is_positive() {
            alpha
        } else {
            -alpha
        };
        profile
            .leftmost_level(&level)
            .expect("the minimum of |F₁ − F₀| is attained")
    }

    /// Whether `α` is attained with `F₁ ≥ F₀`.
    pub fn is_positive_twist(&self) -> bool {
        !self.gap_profile().max().is_negative()
    }

    /// Torsion number `ρ = τ(F₁) − τ(F₀)` as a certified interval of width below `width_target`.
    pub fn rho(&self, width_target: &Q, q_max: u64) -> Result<CertifiedInterval, RotationError> {
        self.rho_with(width_target, q_max, &Limits::default())
    }

    pub fn rho_with(
        &self,
        width_target: &Q,
        q_max: u64,
        limits: &Limits,
    ) -> Result<CertifiedInterval, RotationError> {
        let half = width_target / Q::from(int(2));
        let lower = tau_with(&self.lower, &half, q_max, limits)?;
        let upper = tau_with(&self.upper, &half, q_max, limits)?;
        Ok(upper.interval.sub(&lower.interval))
    }

    /// Flips to a positive twist if needed, then translates so that
    /// `−1 < F₀(x₀) − x₀ ≤ 0` at the leftmost `α`-attaining point `x₀`.
    pub fn recenter(&self) -> Recentered {
        let flipped = !self.is_positive_twist();
        let base = if flipped { self.flip() } else { self.clone() };
        let x0 = base.alpha_point();
        let disp = base.lower.eval(&x0) - &x0;
        let shift = -ceil(&disp);
        Recentered {
            lift: base.shift(&Q::from(shift.clone())),
            shift,
            flipped,
            x0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lift(pairs: &[(&str, &str)]) -> PLLift {
        PLLift::new(pairs.iter().map(|(x, y)| (q(x), q(y))).collect()).unwrap()
    }

    fn tr(s: &str) -> PLLift {
        PLLift::translation(q(s))
    }

    #[test]
    fn twist_and_rho() {
        let t = AnnulusLift::new(PLLift::identity(), tr("1"));
        assert_eq!(t, AnnulusLift::twist_power(1));
        let r = t.rho(&q("1/64"), 4).unwrap();
        assert_eq!(r.exact_value(), Some(&q("1")));
        for n in [-2, 0, 5] {
            let r = AnnulusLift::twist_power(n).rho(&q("1/64"), 4).unwrap();
            assert_eq!(r.exact_value(), Some(&q(&n.to_string())));
        }
        let a = AnnulusLift::new(tr("1/3"), tr("3/4"));
        assert_eq!(
            a.rho(&q("1/64"), 12).unwrap().exact_value(),
            Some(&q("5/12"))
        );
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(AnnulusLift::twist_power(1).alpha(), q("1"));
        assert_eq!(AnnulusLift::new(tr("1/2"), tr("1/2")).alpha(), q("0"));
        let a = AnnulusLift::new(PLLift::identity(), lift(&[("0", "1/4"), ("1/2", "7/8")]));
        assert_eq!(a.alpha(), q("1/4"));
        assert_eq!(a.translate(-3).alpha(), q("1/4"));
    }

    #[test]
    fn alpha_zero_inside_segment() {
        // F₁ − F₀ runs from 1/4 at 0 to −1/8 at 1/2
        let a = AnnulusLift::new(PLLift::identity(), lift(&[("0", "1/4"), ("1/2", "3/8")]));
        assert_eq!(a.alpha(), q("0"));
        assert_eq!(a.alpha_point(), q("1/3"));
    }

    #[test]
    fn flip_examples() {
        let f = AnnulusLift::twist_power(1).flip();
        assert_eq!(f, AnnulusLift::new(tr("1"), PLLift::identity()));
        assert_eq!(f.rho(&q("1/64"), 2).unwrap().exact_value(), Some(&q("-1")));
        assert_eq!(f.flip(), AnnulusLift::twist_power(1));
        assert!(!f.is_positive_twist());
    }

    #[test]
    fn recenter_examples() {
        let r = AnnulusLift::new(tr("5/2"), tr("7/2")).recenter();
        assert_eq!(r.shift, int(-3));
        assert_eq!(r.lift, AnnulusLift::new(tr("-1/2"), tr("1/2")));
        assert!(!r.flipped);

        let r = AnnulusLift::new(PLLift::identity(), tr("2")).recenter();
        assert_eq!(r.shift, int(0));

        let r = AnnulusLift::new(tr("1"), tr("3")).recenter();
        assert_eq!(r.shift, int(-1));
        assert_eq!(r.lift, AnnulusLift::new(PLLift::identity(), tr("2")));

        let r = AnnulusLift::new(tr("3"), tr("1")).recenter();
        assert!(r.flipped);
        assert_eq!(r.lift, AnnulusLift::new(PLLift::identity(), tr("2")));
    }

    #[test]
    fn recenter_bounds_upper_displacement() {
        let a = AnnulusLift::new(
            lift(&[("0", "7/3"), ("1/3", "5/2"), ("3/4", "3")]),
            lift(&[("1/8", "5"), ("1/2", "21/4")]),
        );
        let r = a.recenter();
        let b = &r.lift;
        let x0 = &r.x0;
        let d0 = b.lower.eval(x0) - x0;
        assert!(d0 > q("-1") && d0 <= q("0"));
        let alpha = a.alpha();
        let e = Q::from(crate::rational::floor(&alpha));
        assert!(b.upper.eval(x0) - x0 < e + q("1"));
    }

    #[test]
    fn compose_examples() {
        let t = AnnulusLift::twist_power(1);
        assert_eq!(t.compose(&t), AnnulusLift::twist_power(2));
        let a = AnnulusLift::new(lift(&[("0", "1/8"), ("1/2", "3/4")]), tr("1/3"));
        assert!(a.compose(&a.inverse()).is_identity());
        let l = AnnulusLift::new(PLLift::identity(), tr("1/2"));
        let r = AnnulusLift::new(tr("1/4"), PLLift::identity());
        assert_eq!(l.compose(&r), AnnulusLift::new(tr("1/4"), tr("1/2")));
    }
}
