//! Norm estimates: the EHN commutator count on the circle, commutator-length and
//! fragmentation brackets for annulus lifts, and the quasi-isometry band checks.
//!
//! `E` below is the lower integer part. All brackets are closed-form in `α`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::annulus::AnnulusLift;
use crate::lift_maps::{LiftError, Limits, PLLift};
use crate::rational::{floor, int, qi, Q};
use crate::report::CheckReport;
use crate::rotation::{tau_with, CertifiedInterval, RotationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("regularity r = {0} is unsupported (r must differ from 2 and 3)")]
    UnsupportedRegularity(i64),
    #[error("the identity pair has no bracket")]
    IdentityTarget,
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

/// Regularity class of the homeomorphisms: `r = 0` or any other admissible `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regularity {
    R0,
    General,
}

impl Regularity {
    pub fn from_order(r: i64) -> Result<Self, BoundsError> {
        match r {
            0 => Ok(Regularity::R0),
            2 | 3 => Err(BoundsError::UnsupportedRegularity(r)),
            _ => Ok(Regularity::General),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regularity::R0 => "r0",
            Regularity::General => "general",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "r0" => Some(Regularity::R0),
            "general" => Some(Regularity::General),
            _ => None,
        }
    }

    /// Additive constant of the commutator-length upper bound.
    pub fn cl_constant(self) -> i64 {
        match self {
            Regularity::R0 => 5,
            Regularity::General => 9,
        }
    }
}

/// Regularity plus whether the open-annulus fragmentation bound of 4 is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Regime {
    pub regularity: Regularity,
    pub open_annulus: bool,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::new(Regularity::R0, false),
        Regime::new(Regularity::General, false),
        Regime::new(Regularity::R0, true),
        Regime::new(Regularity::General, true),
    ];

    pub const fn new(regularity: Regularity, open_annulus: bool) -> Self {
        Self {
            regularity,
            open_annulus,
        }
    }

    pub fn tag(self) -> &'static str {
        match (self.regularity, self.open_annulus) {
            (Regularity::R0, false) => "r0",
            (Regularity::General, false) => "r_general",
            (Regularity::R0, true) => "r0_open_annulus",
            (Regularity::General, true) => "r_general_open_annulus",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.tag() == tag)
    }

    /// Additive constant of the fragmentation upper bound.
    pub fn frag_constant(self) -> u64 {
        match (self.regularity, self.open_annulus) {
            (Regularity::R0, false) => 36,
            (Regularity::General, false) => 40,
            (Regularity::R0, true) => 12,
            (Regularity::General, true) => 16,
        }
    }
}

/// Least `n ≥ 1` with `m < 2n − 1`, or 0 for the identity.
pub fn ehn_commutator_count(f: &PLLift) -> BigInt {
    if f.is_identity() {
        return int(0);
    }
    let m = f.displacement().min_abs_disp;
    floor(&((m + qi(1)) / qi(2))) + 1
}

/// `[E(α/4) + 1, E((α+3)/4) + c]` with `c = 9`, or 5 for `r = 0`.
pub fn cl_bracket(alpha: &Q, regularity: Regularity) -> (BigInt, BigInt) {
    let lower = floor(&(alpha / qi(4))) + 1;
    let upper = floor(&((alpha + qi(3)) / qi(4))) + regularity.cl_constant();
    (lower, upper)
}

/// `[E(α) + 1, E(α) + C]` with `C` the regime's fragmentation constant.
pub fn frag_bracket(alpha: &Q, regime: Regime) -> (BigInt, BigInt) {
    let e = floor(alpha);
    (&e + 1, e + regime.frag_constant())
}

pub fn cl_bounds(a: &AnnulusLift, regularity: Regularity) -> Result<(BigInt, BigInt), BoundsError> {
    if a.is_identity() {
        return Err(BoundsError::IdentityTarget);
    }
    Ok(cl_bracket(&a.alpha(), regularity))
}

pub fn frag_bounds(a: &AnnulusLift, regime: Regime) -> Result<(BigInt, BigInt), BoundsError> {
    if a.is_identity() {
        return Err(BoundsError::IdentityTarget);
    }
    Ok(frag_bracket(&a.alpha(), regime))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub alpha: Q,
    pub rho: CertifiedInterval,
    pub cl_lower: BigInt,
    pub cl_upper: BigInt,
    pub frag_lower: BigInt,
    pub frag_upper: BigInt,
    pub regime: Regime,
}

pub fn bounds_report(
    a: &AnnulusLift,
    regime: Regime,
    width_target: &Q,
    q_max: u64,
) -> Result<BoundsReport, BoundsError> {
    let (cl_lower, cl_upper) = cl_bounds(a, regime.regularity)?;
    let (frag_lower, frag_upper) = frag_bounds(a, regime)?;
    Ok(BoundsReport {
        alpha: a.alpha(),
        rho: a.rho(width_target, q_max)?,
        cl_lower,
        cl_upper,
        frag_lower,
        frag_upper,
        regime,
    })
}

/// Whether `[lo, hi]` sits inside `[centre − radius, centre + radius]` for every
/// `centre` in `centres`, with the band widened by `slack` on both sides.
fn bracket_in_band(
    lo: &BigInt,
    hi: &BigInt,
    centres: &CertifiedInterval,
    radius: &Q,
    slack: &Q,
) -> bool {
    let lo = Q::from(lo.clone());
    let hi = Q::from(hi.clone());
    lo >= centres.hi() - radius - slack && hi <= centres.lo() + radius + slack
}

/// Checks `| |ρ|/4 − cl | ≤ 12` and `| |ρ| − Frag | ≤ 40` over the whole brackets, every regime.
pub fn qi_band_check(
    a: &AnnulusLift,
    width_target: &Q,
    q_max: u64,
) -> Result<CheckReport, BoundsError> {
    if a.is_identity() {
        return Err(BoundsError::IdentityTarget);
    }
    let alpha = a.alpha();
    let rho = a.rho(width_target, q_max)?;
    let abs_rho = rho.abs();
    let slack = rho.width();
    let quarter = abs_rho.scale(&Q::new(int(1), int(4)));
    let mut report = CheckReport::new("qi_band_check");
    for regularity in [Regularity::R0, Regularity::General] {
        let (lo, hi) = cl_bracket(&alpha, regularity);
        report.push(
            format!("cl_band_{}", regularity.tag()),
            bracket_in_band(&lo, &hi, &quarter, &qi(12), &slack),
            format!("cl ∈ [{lo}, {hi}], |ρ|/4 ∈ {quarter}, radius 12, slack {slack}"),
        );
    }
    for regime in Regime::ALL {
        let (lo, hi) = frag_bracket(&alpha, regime);
        report.push(
            format!("frag_band_{}", regime.tag()),
            bracket_in_band(&lo, &hi, &abs_rho, &qi(40), &slack),
            format!("Frag ∈ [{lo}, {hi}], |ρ| ∈ {abs_rho}, radius 40, slack {slack}"),
        );
    }
    Ok(report)
}

/// `[G, H] = G H G⁻¹ H⁻¹`.
pub fn commutator(g: &PLLift, h: &PLLift) -> PLLift {
    g.compose(h).compose(&g.inverse()).compose(&h.inverse())
}

pub struct CommutatorProduct {
    pub product: PLLift,
    pub tau: CertifiedInterval,
    pub report: CheckReport,
}

/// Exact `∏ [Gᵢ, Hᵢ]`, checked against the EHN necessity bound `m < 2n − 1`
/// and the Bavard-type bound `|τ| ≤ 2n`.
pub fn commutator_product(
    pairs: &[(PLLift, PLLift)],
    width_target: &Q,
    q_max: u64,
    limits: &Limits,
) -> Result<CommutatorProduct, BoundsError> {
    let mut product = PLLift::identity();
    for (g, h) in pairs {
        let c = g
            .compose_limited(h, limits)?
            .compose_limited(&g.inverse(), limits)?
            .compose_limited(&h.inverse(), limits)?;
        product = product.compose_limited(&c, limits)?;
    }
    let n = pairs.len() as i64;
    let mut report = CheckReport::new("commutator_product");
    let m = product.displacement().min_abs_disp;
    if n == 0 {
        report.push(
            "ehn_necessity",
            product.is_identity(),
            "empty product is the identity",
        );
    } else {
        let bound = qi(2 * n - 1);
        report.push(
            "ehn_necessity",
            m < bound,
            format!("min |P(x) − x| = {m}, bound {bound}"),
        );
    }
    let tau = tau_with(&product, width_target, q_max, limits)?.interval;
    let cap = qi(2 * n);
    report.push(
        "bavard_bound",
        tau.lo() >= &-cap.clone() && tau.hi() <= &cap,
        format!("τ(P) ∈ {tau}, bound {cap}"),
    );
    Ok(CommutatorProduct {
        product,
        tau,
        report,
    })
}

/// `α < 4n` when both traces are products of `n` commutators.
pub fn alpha_commutator_consistency(a: &AnnulusLift, n: u64) -> bool {
    a.alpha() < qi(4 * n as i64) || (n == 0 && a.is_identity())
}
