//! Fragmentation of circle lifts into factors that fix an open interval, and
//! boundary-trace plans for annulus lifts.
//!
//! [`fragment_circle`] follows the inductive construction: at each step it
//! locates the leftmost displacement minimizer `x₀`, picks `x₁` inside the
//! admissible interval, and builds a PL map `h` that is the identity near
//! `F(x₀)`. Every free point is the simplest rational in its open interval;
//! midpoints compound denominators across steps. In the base case `h = F⁻¹` near `F(x₁)`, so both `h⁻¹` and `h∘F`
//! fix an interval; in the inductive case `h` pulls `F(x₁)` below `x₁ + k` and
//! the construction recurses on `h∘F`. A lift with minimal absolute
//! displacement `m` and `k = E(m)` gets exactly `k + 2` factors.

use std::cmp::{max, min};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::annulus::AnnulusLift;
use crate::bounds::{Regime, Regularity};
use crate::lift_maps::{FixedInterval, LiftError, Limits, PLLift};
use crate::rational::{floor, qi, simplest_between, Q};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragError {
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("the identity pair has no fragmentation plan")]
    IdentityTarget,
    #[error("displacement {0} is too large for a factor count")]
    Overflow(Q),
}

/// An exact factorization of `target` into lifts that each fix an open interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragCertificate {
    pub target: PLLift,
    /// Product taken left to right: `factors[0] ∘ factors[1] ∘ …`.
    pub factors: Vec<PLLift>,
    /// `E(m)` for `m = min |F(x) − x|`.
    pub k: u64,
    /// One fixed-interval witness per factor.
    pub fixed_intervals: Vec<FixedInterval>,
    /// Whether the construction ran on the reflection-conjugate of `target`.
    pub reflected: bool,
    pub min_disp: Q,
    pub max_disp: Q,
}

pub type VerificationReport = CheckReport;

fn threshold(m: &Q) -> Result<u64, FragError> {
    floor(m)
        .to_u64()
        .ok_or_else(|| FragError::Overflow(m.clone()))
}

fn invariant(ok: bool, msg: impl FnOnce() -> String) -> Result<(), FragError> {
    if ok {
        Ok(())
    } else {
        Err(FragError::InternalInvariant(msg()))
    }
}

fn simplest(lo: &Q, hi: &Q) -> Q {
    simplest_between(lo, Some(hi))
}

/// `(h⁻¹, h∘F)` where `h` fixes `[p, q] ∋ F(x₀)` and `h∘F` fixes `[u, v]`.
///
/// Requires `0 ≤ F(x₀) − x₀ < 1`. The points `q, p, u, v` are the simplest
/// rationals in their admissible intervals, which keeps `h` arithmetically
/// small: `u, v` lie above `q` and `F⁻¹(q)` and below `p + 1` and `F⁻¹(p + 1)`.
fn base_step(f: &PLLift, x0: &Q, limits: &Limits) -> Result<(PLLift, PLLift), FragError> {
    let one = Q::one();
    let a = f.eval(x0);
    let q = simplest(&a, &(x0 + &one));
    let floor_p = max(max(q.clone(), f.eval_inverse(&q)), f.eval(&q)) - &one;
    let p = simplest(&floor_p, &a);
    let lo = max(q.clone(), f.eval_inverse(&q));
    let hi = min(&p + &one, f.eval_inverse(&(&p + &one)));
    invariant(lo < hi, || {
        format!("no room for a fixed interval between {lo} and {hi}")
    })?;
    let u = simplest(&lo, &hi);
    let v = simplest(&u, &hi);

    let mut points = vec![
        (p.clone(), p.clone()),
        (q.clone(), q.clone()),
        (f.eval(&u), u.clone()),
        (f.eval(&v), v.clone()),
    ];
    // F's breakpoints inside (u, v) become breakpoints of h = F⁻¹ there
    for (sx, sy) in f.samples() {
        let j = Q::from(floor(&(&u - sx)) + BigInt::one());
        let c = sx + &j;
        if c < v {
            points.push((sy + &j, c));
        }
    }
    let h = PLLift::from_points(points)?;
    let h_inv = h.inverse();
    let hf = h.compose_limited(f, limits)?;
    invariant(h_inv.fixes_on(&p, &q), || {
        format!("h⁻¹ does not fix a neighbourhood of F(x₀) = {a}")
    })?;
    invariant(hf.fixes_on(&u, &v), || {
        format!("h∘F does not fix [{u}, {v}]")
    })?;
    Ok((h_inv, hf))
}

/// `(h⁻¹, h∘F)` where `h` fixes `[p, q] ∋ F(x₀)` and `h(F(x₁)) < x₁ + k`.
///
/// Requires `k ≤ F(x₀) − x₀ < k + 1` with `k ≥ 1`. The slack
/// `g = x₀ + k + 1 − F(x₀)` bounds how much room later steps have, and each
/// step spends about `q − p + (x₀ + 1 − x₁) + (c − q)` of it. Keeping those
/// within `η = g / 4(k + 1)` makes the slack shrink polynomially across the
/// induction, so the simplest-rational choices stay small.
fn inductive_step(
    f: &PLLift,
    x0: &Q,
    k: u64,
    limits: &Limits,
) -> Result<(PLLift, PLLift), FragError> {
    let one = Q::one();
    let kq = qi(k as i64);
    let a = f.eval(x0);
    let eta = (x0 + &kq + &one - &a) / qi(4 * (k as i64 + 1));
    let q = simplest(&a, &(&a + &eta));
    let reach = f.eval(&(&q - &kq));
    let near_one = f.eval(&(x0 + &one - &eta));
    let low_p = [&a - &eta, &reach - &one, &q - &one, &near_one - &one]
        .into_iter()
        .max()
        .expect("nonempty");
    let p = simplest(&low_p, &a);
    let low_y = [q.clone(), reach, near_one]
        .into_iter()
        .max()
        .expect("nonempty");
    let y = simplest(&low_y, &(&p + &one));
    let x1 = f.eval_inverse(&y);
    invariant(&a - &kq < x1 && x1 < x0 + &one, || {
        format!("x₁ = {x1} outside (F(x₀) − {k}, x₀ + 1)")
    })?;
    let high_c = [&q + &eta, y.clone(), &x1 + &kq]
        .into_iter()
        .min()
        .expect("nonempty");
    let c = simplest(&q, &high_c);

    let h = PLLift::from_points([(p.clone(), p.clone()), (q.clone(), q.clone()), (y, c)])?;
    let h_inv = h.inverse();
    let hf = h.compose_limited(f, limits)?;
    invariant(h_inv.fixes_on(&p, &q), || {
        format!("h⁻¹ does not fix a neighbourhood of F(x₀) = {a}")
    })?;
    let moved = hf.eval(&x1) - &x1;
    invariant(moved < kq && moved.is_positive(), || {
        format!("h∘F(x₁) − x₁ = {moved} not in (0, {k})")
    })?;
    Ok((h_inv, hf))
}

pub fn fragment_circle(target: &PLLift) -> Result<FragCertificate, FragError> {
    fragment_circle_with(target, &Limits::default())
}

pub fn fragment_circle_with(
    target: &PLLift,
    limits: &Limits,
) -> Result<FragCertificate, FragError> {
    let summary = target.displacement();
    let k = threshold(&summary.min_abs_disp)?;
    let mut factors = Vec::new();
    let mut reflected = false;

    let mut current = target.clone();
    loop {
        if current.is_identity() {
            break;
        }
        if current.fixed_interval().is_some() {
            factors.push(current.clone());
            break;
        }
        let d = current.displacement();
        if d.max_disp.is_negative() {
            current = current.reflect_conjugate();
            reflected = !reflected;
            continue;
        }
        let (x0, level) = if d.changes_sign() {
            let x0 = current
                .leftmost_displacement_level(&Q::zero())
                .expect("a sign change has a zero");
            (x0, Q::zero())
        } else {
            (d.argmin.clone(), d.min_disp.clone())
        };
        let step_k = threshold(&level)?;
        let unreflect = |g: PLLift| if reflected { g.reflect_conjugate() } else { g };
        if step_k == 0 {
            let (h_inv, hf) = base_step(&current, &x0, limits)?;
            factors.push(unreflect(h_inv));
            factors.push(unreflect(hf));
            break;
        }
        let (h_inv, hf) = inductive_step(&current, &x0, step_k, limits)?;
        factors.push(unreflect(h_inv));
        invariant(factors.len() as u64 <= k + 1, || {
            format!("more than k + 2 = {} factors", k + 2)
        })?;
        current = hf;
    }

    let expected = if target.is_identity() {
        0
    } else if target.fixed_interval().is_some() {
        1
    } else {
        k + 2
    };
    invariant(factors.len() as u64 == expected, || {
        format!("emitted {} factors, expected {expected}", factors.len())
    })?;

    let fixed_intervals = factors
        .iter()
        .map(|g| {
            g.fixed_interval()
                .ok_or_else(|| FragError::InternalInvariant("factor fixes no interval".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(FragCertificate {
        target: target.clone(),
        factors,
        k,
        fixed_intervals,
        reflected: reflected_at_start(target),
        min_disp: summary.min_disp,
        max_disp: summary.max_disp,
    })
}

fn reflected_at_start(target: &PLLift) -> bool {
    !target.is_identity()
        && target.fixed_interval().is_none()
        && target.displacement().max_disp.is_negative()
}

/// Left-to-right product `factors[0] ∘ factors[1] ∘ …`.
pub fn product(factors: &[PLLift]) -> PLLift {
    factors
        .iter()
        .fold(PLLift::identity(), |acc, g| acc.compose(g))
}

fn witness_holds(factor: &PLLift, w: &FixedInterval) -> bool {
    if w.whole_line {
        factor.is_identity()
    } else {
        factor.fixes_on(&w.start, &w.end) || {
            // the open interval may end exactly at a breakpoint that moves; test a shrunken copy
            let eps = (&w.end - &w.start) / qi(4);
            factor.fixes_on(&(&w.start + &eps), &(&w.end - &eps))
        }
    }
}

/// Checks interval-fixing, the exact product, and `m < |factors| − 1`.
pub fn verify_certificate(cert: &FragCertificate) -> VerificationReport {
    let mut report = CheckReport::new("verify_certificate");

    let bad: Vec<usize> = cert
        .factors
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            let witnessed = cert
                .fixed_intervals
                .get(*i)
                .is_none_or(|w| witness_holds(g, w));
            g.fixed_interval().is_none() || !witnessed
        })
        .map(|(i, _)| i)
        .collect();
    report.push(
        "factors_fix_open_intervals",
        bad.is_empty(),
        if bad.is_empty() {
            format!("all {} factors fix an open interval", cert.factors.len())
        } else {
            format!("factors {bad:?} fix no open interval")
        },
    );

    let prod = product(&cert.factors);
    let equal = prod == cert.target;
    report.push(
        "product_equals_target",
        equal,
        if equal {
            "exact product equals the target".to_string()
        } else {
            format!("product {prod:?} differs from target {:?}", cert.target)
        },
    );

    let n = cert.factors.len();
    let m = cert.target.displacement().min_abs_disp;
    if n >= 2 {
        let bound = qi(n as i64 - 1);
        report.push(
            "displacement_below_count_minus_one",
            m < bound,
            format!("min |F(x) − x| = {m}, bound {bound}"),
        );
    } else {
        report.push(
            "displacement_below_count_minus_one",
            true,
            format!("not applicable with {n} factors"),
        );
    }
    report
}

/// Role of a factor that is only counted: its traces are the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountedRole {
    /// Makes the lift fix a neighbourhood of the boundary.
    Collar,
    /// Supported in the open annulus.
    Interior,
    /// Surcharge for smoothing a homeomorphism decomposition.
    Approximation,
}

impl CountedRole {
    pub fn tag(self) -> &'static str {
        match self {
            CountedRole::Collar => "collar",
            CountedRole::Interior => "interior",
            CountedRole::Approximation => "approximation",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "collar" => Some(CountedRole::Collar),
            "interior" => Some(CountedRole::Interior),
            "approximation" => Some(CountedRole::Approximation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    Explicit,
    Counted {
        role: CountedRole,
        multiplicity: u64,
    },
}

/// A disc-supported factor seen through its boundary traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFactor {
    pub lower_trace: PLLift,
    pub upper_trace: PLLift,
    pub touches_lower: bool,
    pub touches_upper: bool,
    pub kind: FactorKind,
}

impl TraceFactor {
    pub fn upper(trace: PLLift) -> Self {
        Self {
            lower_trace: PLLift::identity(),
            upper_trace: trace,
            touches_lower: false,
            touches_upper: true,
            kind: FactorKind::Explicit,
        }
    }

    pub fn lower(trace: PLLift) -> Self {
        Self {
            lower_trace: trace,
            upper_trace: PLLift::identity(),
            touches_lower: true,
            touches_upper: false,
            kind: FactorKind::Explicit,
        }
    }

    pub fn counted(role: CountedRole, multiplicity: u64) -> Self {
        Self {
            lower_trace: PLLift::identity(),
            upper_trace: PLLift::identity(),
            touches_lower: false,
            touches_upper: false,
            kind: FactorKind::Counted { role, multiplicity },
        }
    }

    pub fn count(&self) -> u64 {
        match self.kind {
            FactorKind::Explicit => 1,
            FactorKind::Counted { multiplicity, .. } => multiplicity,
        }
    }

    fn flipped(self) -> Self {
        Self {
            lower_trace: self.upper_trace,
            upper_trace: self.lower_trace,
            touches_lower: self.touches_upper,
            touches_upper: self.touches_lower,
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusFragPlan {
    /// The input lift.
    pub source: AnnulusLift,
    /// The recentred lift whose traces the factors reproduce; `source` translated by `shift`.
    pub target: AnnulusLift,
    pub shift: BigInt,
    pub flipped: bool,
    pub alpha: Q,
    pub regime: Regime,
    pub factors: Vec<TraceFactor>,
    pub total_count: u64,
}

pub fn plan_annulus_fragmentation(
    a: &AnnulusLift,
    regime: Regime,
) -> Result<AnnulusFragPlan, FragError> {
    plan_annulus_fragmentation_with(a, regime, &Limits::default())
}

pub fn plan_annulus_fragmentation_with(
    a: &AnnulusLift,
    regime: Regime,
    limits: &Limits,
) -> Result<AnnulusFragPlan, FragError> {
    if a.is_identity() {
        return Err(FragError::IdentityTarget);
    }
    let alpha = a.alpha();
    let e = threshold(&alpha)?;
    let rc = a.recenter();
    let upper = fragment_circle_with(&rc.lift.upper, limits)?;
    let lower = fragment_circle_with(&rc.lift.lower, limits)?;
    invariant(upper.factors.len() as u64 <= e + 2, || {
        format!(
            "upper trace needs {} factors, more than E(α) + 2 = {}",
            upper.factors.len(),
            e + 2
        )
    })?;
    invariant(lower.factors.len() <= 2, || {
        format!(
            "lower trace needs {} factors, more than 2",
            lower.factors.len()
        )
    })?;

    let mut factors: Vec<TraceFactor> = upper
        .factors
        .into_iter()
        .map(TraceFactor::upper)
        .chain(lower.factors.into_iter().map(TraceFactor::lower))
        .map(|f| if rc.flipped { f.flipped() } else { f })
        .collect();
    factors.push(TraceFactor::counted(CountedRole::Collar, 4));
    factors.push(TraceFactor::counted(
        CountedRole::Interior,
        if regime.open_annulus { 4 } else { 28 },
    ));
    if regime.regularity == Regularity::General {
        factors.push(TraceFactor::counted(CountedRole::Approximation, 4));
    }
    let total_count = factors.iter().map(TraceFactor::count).sum::<u64>();
    invariant(total_count <= e + regime.frag_constant(), || {
        format!(
            "plan uses {total_count} factors, above E(α) + {}",
            regime.frag_constant()
        )
    })?;
    invariant(total_count > e, || {
        format!("plan uses {total_count} factors, below E(α) + 1")
    })?;

    let target = if rc.flipped { rc.lift.flip() } else { rc.lift };
    Ok(AnnulusFragPlan {
        source: a.clone(),
        target,
        shift: rc.shift,
        flipped: rc.flipped,
        alpha,
        regime,
        factors,
        total_count,
    })
}

/// Which branch of the lower-bound case analysis a decomposition falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuditCase {
    /// `k₀ ≥ 2` and `k₁ ≥ 2`.
    BothMany,
    /// One boundary touched once, the other at least twice.
    OneAndMany,
    /// One boundary untouched, the other touched at least twice.
    ZeroAndMany,
    /// `(k₀, k₁) = (1, 1)`.
    OneOne,
    /// `(0, 0)`, `(0, 1)` or `(1, 0)`.
    Degenerate,
}

impl AuditCase {
    pub fn classify(k0: u64, k1: u64) -> Self {
        match (k0.min(k1), k0.max(k1)) {
            (lo, _) if lo >= 2 => AuditCase::BothMany,
            (1, hi) if hi >= 2 => AuditCase::OneAndMany,
            (0, hi) if hi >= 2 => AuditCase::ZeroAndMany,
            (1, 1) => AuditCase::OneOne,
            _ => AuditCase::Degenerate,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            AuditCase::BothMany => "k0>=2,k1>=2",
            AuditCase::OneAndMany => "one_and_many",
            AuditCase::ZeroAndMany => "zero_and_many",
            AuditCase::OneOne => "one_one",
            AuditCase::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub report: CheckReport,
    pub alpha: Q,
    pub k0: u64,
    pub k1: u64,
    pub total: u64,
    pub case: AuditCase,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Validates a trace-level decomposition of `a` and the lower-bound inequality `α < m`.
pub fn audit_annulus_fragmentation(a: &AnnulusLift, factors: &[TraceFactor]) -> AuditReport {
    let mut report = CheckReport::new("audit_annulus_fragmentation");

    let indices = |pred: &dyn Fn(&TraceFactor) -> bool| -> Vec<usize> {
        factors
            .iter()
            .enumerate()
            .filter(|(_, f)| pred(f))
            .map(|(i, _)| i)
            .collect()
    };
    let describe = |bad: &[usize], ok: &str| {
        if bad.is_empty() {
            ok.to_string()
        } else {
            format!("violated by factors {bad:?}")
        }
    };

    let both = indices(&|f| f.touches_lower && f.touches_upper);
    report.push(
        "no_factor_touches_both_boundaries",
        both.is_empty(),
        describe(&both, "each disc meets at most one boundary component"),
    );

    let untouched = indices(&|f| {
        (!f.touches_lower && !f.lower_trace.is_identity())
            || (!f.touches_upper && !f.upper_trace.is_identity())
    });
    report.push(
        "untouched_traces_are_identity",
        untouched.is_empty(),
        describe(
            &untouched,
            "traces on untouched boundaries are the identity",
        ),
    );

    let outside_a = indices(&|f| {
        [&f.lower_trace, &f.upper_trace]
            .into_iter()
            .any(|t| t.fixed_interval().is_none())
    });
    report.push(
        "traces_fix_open_intervals",
        outside_a.is_empty(),
        describe(&outside_a, "every trace fixes an open interval"),
    );

    let bad_counted = indices(&|f| match f.kind {
        FactorKind::Explicit => false,
        FactorKind::Counted { multiplicity, .. } => {
            multiplicity == 0
                || f.touches_lower
                || f.touches_upper
                || !f.lower_trace.is_identity()
                || !f.upper_trace.is_identity()
        }
    });
    report.push(
        "counted_factors_have_identity_traces",
        bad_counted.is_empty(),
        describe(&bad_counted, "counted factors carry identity traces"),
    );

    let lower = factors
        .iter()
        .fold(PLLift::identity(), |acc, f| acc.compose(&f.lower_trace));
    let upper = factors
        .iter()
        .fold(PLLift::identity(), |acc, f| acc.compose(&f.upper_trace));
    let composed = lower == a.lower && upper == a.upper;
    report.push(
        "trace_composition_matches_target",
        composed,
        if composed {
            "trace products equal the target traces".to_string()
        } else {
            format!(
                "lower matches: {}, upper matches: {}",
                lower == a.lower,
                upper == a.upper
            )
        },
    );

    let alpha = a.alpha();
    let k0 = factors.iter().filter(|f| f.touches_lower).count() as u64;
    let k1 = factors.iter().filter(|f| f.touches_upper).count() as u64;
    let total: u64 = factors.iter().map(TraceFactor::count).sum();
    let m = qi(total as i64);
    if a.is_identity() {
        report.push("alpha_below_factor_count", true, "identity target");
    } else {
        report.push(
            "alpha_below_factor_count",
            alpha < m,
            format!("α = {alpha}, m = {total}"),
        );
    }

    let case = AuditCase::classify(k0, k1);
    let (holds, claim) = match case {
        AuditCase::Degenerate => (alpha.is_zero(), "α = 0".to_string()),
        AuditCase::OneOne => (alpha < Q::one(), "α < 1".to_string()),
        _ => (
            alpha < qi((k0 + k1) as i64),
            format!("α < k₀ + k₁ = {}", k0 + k1),
        ),
    };
    report.push(
        "case_conclusion",
        holds,
        format!("case {}: {claim} with α = {alpha}", case.tag()),
    );

    AuditReport {
        report,
        alpha,
        k0,
        k1,
        total,
        case,
    }
}
