//! Quasi-morphism probes for `τ` and `ρ`, and deterministic sampling of lifts.
//!
//! # Seeded generator
//!
//! All sampling uses SplitMix64: the state advances by `0x9E3779B97F4A7C15`
//! and each output is mixed by `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//! z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`. The initial state is
//! the seed itself. A draw in `0..n` is `next_u64() % n`.
//!
//! Trial `i` of a probe seeded with `s` uses the substream seeded with the
//! first SplitMix64 output from state `s + i·0x9E3779B97F4A7C15` (wrapping), so
//! trials can be evaluated in any order.

use num_traits::{One, Signed, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::annulus::AnnulusLift;
use crate::bounds::{commutator_product, BoundsError};
use crate::lift_maps::{LiftError, Limits, PLLift};
use crate::rational::{qi, ratio, Q};
use crate::report::CheckReport;
use crate::rotation::{tau_with, CertifiedInterval, RotationError};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
/// Noise values are multiples of `roughness / NOISE_STEPS`.
const NOISE_STEPS: u64 = 16;
const MAX_REPAIR_HALVINGS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmError {
    #[error("{name} expects {expected}, got {found}")]
    TypeMismatch {
        name: &'static str,
        expected: &'static str,
        found: &'static str,
    },
    #[error("infeasible sampler config: {0}")]
    InfeasibleConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QmName {
    TauCircle,
    RhoAnnulus,
}

impl QmName {
    pub fn tag(self) -> &'static str {
        match self {
            QmName::TauCircle => "tau_circle",
            QmName::RhoAnnulus => "rho_annulus",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "tau_circle" | "tau" => Some(QmName::TauCircle),
            "rho_annulus" | "rho" => Some(QmName::RhoAnnulus),
            _ => None,
        }
    }

    /// Known defect: 1 for `τ`, 2 for `ρ = τ(F₁) − τ(F₀)`.
    pub fn defect_bound(self) -> Q {
        match self {
            QmName::TauCircle => qi(1),
            QmName::RhoAnnulus => qi(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Circle(PLLift),
    Annulus(AnnulusLift),
}

impl Element {
    fn kind(&self) -> &'static str {
        match self {
            Element::Circle(_) => "lift",
            Element::Annulus(_) => "annulus",
        }
    }

    pub fn compose(&self, other: &Element, limits: &Limits) -> Result<Element, QmError> {
        match (self, other) {
            (Element::Circle(a), Element::Circle(b)) => {
                Ok(Element::Circle(a.compose_limited(b, limits)?))
            }
            (Element::Annulus(a), Element::Annulus(b)) => {
                Ok(Element::Annulus(a.compose_limited(b, limits)?))
            }
            _ => Err(QmError::InvalidArgument(
                "cannot compose a lift with an annulus lift",
            )),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Circle(a) => Element::Circle(a.inverse()),
            Element::Annulus(a) => Element::Annulus(a.inverse()),
        }
    }

    pub fn power(&self, n: i64, limits: &Limits) -> Result<Element, QmError> {
        Ok(match self {
            Element::Circle(a) => Element::Circle(a.power_limited(n, limits)?),
            Element::Annulus(a) => Element::Annulus(AnnulusLift::new(
                a.lower.power_limited(n, limits)?,
                a.upper.power_limited(n, limits)?,
            )),
        })
    }
}

/// Precision used when evaluating `τ` or `ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmSettings {
    pub width_target: Q,
    pub q_max: u64,
    pub limits: Limits,
}

impl Default for QmSettings {
    fn default() -> Self {
        Self {
            width_target: ratio(1, 64),
            q_max: 8,
            limits: Limits::default(),
        }
    }
}

/// Certified value of `name` on `element`, exact when a period is detected.
pub fn eval_qm(
    name: QmName,
    element: &Element,
    settings: &QmSettings,
) -> Result<CertifiedInterval, QmError> {
    match (name, element) {
        (QmName::TauCircle, Element::Circle(f)) => {
            Ok(tau_with(f, &settings.width_target, settings.q_max, &settings.limits)?.interval)
        }
        (QmName::RhoAnnulus, Element::Annulus(a)) => {
            Ok(a.rho_with(&settings.width_target, settings.q_max, &settings.limits)?)
        }
        _ => Err(QmError::TypeMismatch {
            name: name.tag(),
            expected: match name {
                QmName::TauCircle => "lift",
                QmName::RhoAnnulus => "annulus",
            },
            found: element.kind(),
        }),
    }
}

/// Parameters of [`sample_lift`].
///
/// Breakpoints are `breakpoint_count` distinct points `j / denominator_bound`
/// in `[0, 1)`; values are `x + displacement_offset + ε` with `ε` on a grid in
/// `[−roughness, roughness]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SamplerConfig {
    pub seed: u64,
    pub breakpoint_count: u64,
    pub denominator_bound: u64,
    pub displacement_offset: Q,
    pub roughness: Q,
}

impl SamplerConfig {
    pub fn new(seed: u64, displacement_offset: Q, roughness: Q) -> Self {
        Self {
            seed,
            breakpoint_count: 3,
            denominator_bound: 16,
            displacement_offset,
            roughness,
        }
    }

    fn validate(&self) -> Result<(), QmError> {
        let fail = |msg: String| Err(QmError::InfeasibleConfig(msg));
        if self.breakpoint_count == 0 {
            return fail("breakpoint_count must be at least 1".into());
        }
        if self.denominator_bound < 2 {
            return fail("denominator_bound must be at least 2".into());
        }
        if self.breakpoint_count > self.denominator_bound {
            return fail(format!(
                "{} distinct breakpoints do not fit on the grid 1/{}",
                self.breakpoint_count, self.denominator_bound
            ));
        }
        if self.roughness.is_negative() || self.roughness >= ratio(1, 2) {
            return fail(format!("roughness {} outside [0, 1/2)", self.roughness));
        }
        Ok(())
    }

    /// The same config with the seed replaced by substream `index`.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            seed: substream_seed(self.seed, index),
            ..self.clone()
        }
    }
}

/// First SplitMix64 output from state `seed + index·GOLDEN`.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::seed_from_u64(seed.wrapping_add(index.wrapping_mul(GOLDEN))).next_u64()
}

fn draw(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

/// A varied config for corpus generation: 1 to 4 breakpoints, denominators up
/// to 16, offset on the grid `1/8` within `[−max_offset, max_offset]`, and
/// roughness in `{0, 1/16, 1/8, 1/4, 3/8}`.
pub fn varied_config(seed: u64, index: u64, max_offset: u64) -> SamplerConfig {
    let mut rng = SplitMix64::seed_from_u64(substream_seed(seed, index));
    let breakpoint_count = 1 + draw(&mut rng, 4);
    let denominator_bound = 4 + draw(&mut rng, 13);
    let steps = 16 * max_offset + 1;
    let offset = ratio(draw(&mut rng, steps) as i64 - (8 * max_offset) as i64, 8);
    let roughness = [
        ratio(0, 1),
        ratio(1, 16),
        ratio(1, 8),
        ratio(1, 4),
        ratio(3, 8),
    ][draw(&mut rng, 5) as usize]
        .clone();
    SamplerConfig {
        seed: rng.next_u64(),
        breakpoint_count,
        denominator_bound,
        displacement_offset: offset,
        roughness,
    }
}

fn strictly_monotone(samples: &[(Q, Q)]) -> bool {
    samples.windows(2).all(|w| w[0].1 < w[1].1)
        && samples.last().unwrap().1 < &samples[0].1 + Q::one()
}

/// Deterministic PL lift from `config`. Noise is scaled by `1, 1/2, 1/4, …`
/// until the values are strictly increasing across the period.
pub fn sample_lift(config: &SamplerConfig) -> Result<PLLift, QmError> {
    config.validate()?;
    let mut rng = SplitMix64::seed_from_u64(config.seed);
    let d = config.denominator_bound;
    let mut xs = std::collections::BTreeSet::new();
    while (xs.len() as u64) < config.breakpoint_count {
        xs.insert(draw(&mut rng, d));
    }
    let noise: Vec<Q> = xs
        .iter()
        .map(|_| {
            let k = draw(&mut rng, 2 * NOISE_STEPS + 1) as i64 - NOISE_STEPS as i64;
            &config.roughness * ratio(k, NOISE_STEPS as i64)
        })
        .collect();
    let xs: Vec<Q> = xs.into_iter().map(|j| ratio(j as i64, d as i64)).collect();

    let mut scale = Q::one();
    for _ in 0..=MAX_REPAIR_HALVINGS {
        let samples: Vec<(Q, Q)> = xs
            .iter()
            .zip(&noise)
            .map(|(x, e)| (x.clone(), x + &config.displacement_offset + e * &scale))
            .collect();
        if strictly_monotone(&samples) {
            return Ok(PLLift::new(samples)?);
        }
        scale /= qi(2);
    }
    Err(QmError::InfeasibleConfig(
        "monotone repair did not converge".into(),
    ))
}

pub fn sample_annulus(
    lower: &SamplerConfig,
    upper: &SamplerConfig,
) -> Result<AnnulusLift, QmError> {
    Ok(AnnulusLift::new(sample_lift(lower)?, sample_lift(upper)?))
}

fn sample_element(
    name: QmName,
    config: &SamplerConfig,
    index: u64,
    offset_jitter: &Q,
) -> Result<Element, QmError> {
    let mut cfg = config.substream(index);
    cfg.displacement_offset += offset_jitter;
    match name {
        QmName::TauCircle => Ok(Element::Circle(sample_lift(&cfg)?)),
        QmName::RhoAnnulus => {
            let lower = cfg.substream(0);
            let mut upper = cfg.substream(1);
            upper.displacement_offset += qi(1);
            Ok(Element::Annulus(sample_annulus(&lower, &upper)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectProbeResult {
    pub name: QmName,
    pub trials: u64,
    /// Largest `max |q(ab) − q(a) − q(b)|` over the trial enclosures.
    pub observed_max: Q,
    /// Certification width of the enclosure attaining `observed_max`.
    pub slack: Q,
    /// Largest certified lower bound on a trial's defect; a lower bound for `D(q)`.
    pub certified_lower: Q,
    pub bound: Q,
    /// Trials whose certified lower bound exceeds `bound`.
    pub violations: Vec<u64>,
}

impl DefectProbeResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && &self.observed_max - &self.slack <= self.bound
    }
}

/// Samples `trials` pairs `(a, b)` and encloses `|q(ab) − q(a) − q(b)|`.
///
/// Trial `i` draws `a` and `b` from substreams `2i` and `2i + 1` of `config`,
/// each with its offset shifted by a multiple of `1/4` in `[−1, 1]`.
pub fn defect_probe(
    name: QmName,
    config: &SamplerConfig,
    trials: u64,
    settings: &QmSettings,
) -> Result<DefectProbeResult, QmError> {
    if trials == 0 {
        return Err(QmError::InvalidArgument("trials must be positive"));
    }
    config.validate()?;
    let bound = name.defect_bound();
    let mut observed_max = Q::zero();
    let mut slack = Q::zero();
    let mut certified_lower = Q::zero();
    let mut violations = Vec::new();
    for i in 0..trials {
        let mut rng = SplitMix64::seed_from_u64(substream_seed(config.seed, i));
        let ja = ratio(draw(&mut rng, 9) as i64 - 4, 4);
        let jb = ratio(draw(&mut rng, 9) as i64 - 4, 4);
        let a = sample_element(name, config, 2 * i, &ja)?;
        let b = sample_element(name, config, 2 * i + 1, &jb)?;
        let ab = a.compose(&b, &settings.limits)?;
        let defect = eval_qm(name, &ab, settings)?
            .sub(&eval_qm(name, &a, settings)?)
            .sub(&eval_qm(name, &b, settings)?);
        let upper = defect.magnitude();
        let lower = defect.abs().lo().clone();
        if lower > bound {
            violations.push(i);
        }
        if upper > observed_max {
            observed_max = upper;
            slack = defect.width();
        }
        if lower > certified_lower {
            certified_lower = lower;
        }
    }
    Ok(DefectProbeResult {
        name,
        trials,
        observed_max,
        slack,
        certified_lower,
        bound,
        violations,
    })
}

/// `q(aⁿ) = n·q(a)` for `n = 1..=n_max`: exact when both values are exact, by intersection otherwise.
pub fn homogeneity_probe(
    name: QmName,
    element: &Element,
    n_max: u64,
    settings: &QmSettings,
) -> Result<CheckReport, QmError> {
    if n_max == 0 {
        return Err(QmError::InvalidArgument("n_max must be positive"));
    }
    let base = eval_qm(name, element, settings)?;
    let mut report = CheckReport::new("homogeneity_probe");
    for n in 1..=n_max {
        let power = element.power(n as i64, &settings.limits)?;
        let value = eval_qm(name, &power, settings)?;
        let expected = base.scale(&qi(n as i64));
        let (passed, detail) = match (value.exact_value(), expected.exact_value()) {
            (Some(v), Some(e)) => (v == e, format!("q(a^{n}) = {v}, n·q(a) = {e}")),
            _ => (
                value.intersects(&expected),
                format!("q(a^{n}) ∈ {value}, n·q(a) ∈ {expected}"),
            ),
        };
        report.push(format!("n={n}"), passed, detail);
    }
    Ok(report)
}

/// `q(h g h⁻¹)` against `q(g)`.
pub fn conjugation_probe(
    name: QmName,
    g: &Element,
    h: &Element,
    settings: &QmSettings,
) -> Result<CheckReport, QmError> {
    let conj = h
        .compose(g, &settings.limits)?
        .compose(&h.inverse(), &settings.limits)?;
    let vg = eval_qm(name, g, settings)?;
    let vc = eval_qm(name, &conj, settings)?;
    let mut report = CheckReport::new("conjugation_probe");
    let (passed, detail) = match (vg.exact_value(), vc.exact_value()) {
        (Some(a), Some(b)) => (a == b, format!("q(g) = {a}, q(hgh⁻¹) = {b}")),
        _ => (vg.intersects(&vc), format!("q(g) ∈ {vg}, q(hgh⁻¹) ∈ {vc}")),
    };
    report.push("conjugation_invariance", passed, detail);
    Ok(report)
}

/// Distance from `α` to the `|ρ|` enclosure; zero when `α` lies inside it.
pub fn rho_alpha_distance(
    a: &AnnulusLift,
    settings: &QmSettings,
) -> Result<(Q, CertifiedInterval), QmError> {
    let rho = a.rho_with(&settings.width_target, settings.q_max, &settings.limits)?;
    let abs = rho.abs();
    let alpha = a.alpha();
    let below = abs.lo() - &alpha;
    let above = &alpha - abs.hi();
    let gap = below.max(above).max(Q::zero());
    Ok((gap, rho))
}

/// `| |ρ| − α | ≤ 2`, measured as the distance from `α` to the `|ρ|` enclosure.
pub fn rho_alpha_gap(a: &AnnulusLift, settings: &QmSettings) -> Result<CheckReport, QmError> {
    let (gap, rho) = rho_alpha_distance(a, settings)?;
    let mut report = CheckReport::new("rho_alpha_gap");
    let detail = match rho.exact_value() {
        Some(r) => format!("ρ = {r}, α = {}, gap = {gap}", a.alpha()),
        None => format!("ρ ∈ {rho}, α = {}, distance = {gap}", a.alpha()),
    };
    report.push("gap_at_most_2", gap <= qi(2), detail);
    Ok(report)
}

/// `|τ(∏ [Gᵢ, Hᵢ])| ≤ 2n`.
pub fn bavard_probe(
    pairs: &[(PLLift, PLLift)],
    settings: &QmSettings,
) -> Result<CheckReport, QmError> {
    let result = commutator_product(
        pairs,
        &settings.width_target,
        settings.q_max,
        &settings.limits,
    )?;
    let mut report = CheckReport::new("bavard_probe");
    let check = result
        .report
        .check("bavard_bound")
        .expect("commutator_product reports the bound")
        .clone();
    report.push(check.name, check.passed, check.detail);
    Ok(report)
}

/// `|ρ(tⁿ f) − ρ(f) − n| ≤ 2` plus certification slack for each `n` in `ns`.
pub fn twist_drift_probe(
    a: &AnnulusLift,
    ns: impl IntoIterator<Item = i64>,
    settings: &QmSettings,
) -> Result<CheckReport, QmError> {
    let base = a.rho_with(&settings.width_target, settings.q_max, &settings.limits)?;
    let mut report = CheckReport::new("twist_drift_probe");
    for n in ns {
        let shifted = AnnulusLift::twist_power(n).compose(a);
        let value = shifted.rho_with(&settings.width_target, settings.q_max, &settings.limits)?;
        let drift = value.sub(&base).shift(&qi(-n));
        let slack = drift.width();
        report.push(
            format!("n={n}"),
            drift.abs().lo() <= &qi(2),
            format!("ρ(tⁿf) − ρ(f) − n ∈ {drift}, slack {slack}"),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tr(s: &str) -> PLLift {
        PLLift::translation(q(s))
    }

    #[test]
    fn splitmix_reference_outputs() {
        // reference values of SplitMix64 from state 0
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn eval_examples() {
        let s = QmSettings::default();
        let v = eval_qm(QmName::TauCircle, &Element::Circle(tr("1/3")), &s).unwrap();
        assert_eq!(v.exact_value(), Some(&q("1/3")));
        let t = Element::Annulus(AnnulusLift::twist_power(1));
        assert_eq!(
            eval_qm(QmName::RhoAnnulus, &t, &s).unwrap().exact_value(),
            Some(&q("1"))
        );
        assert!(matches!(
            eval_qm(QmName::TauCircle, &t, &s),
            Err(QmError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn sampler_is_deterministic() {
        let c = SamplerConfig::new(42, q("1/3"), q("1/8"));
        assert_eq!(sample_lift(&c).unwrap(), sample_lift(&c).unwrap());
        assert_ne!(
            sample_lift(&c).unwrap(),
            sample_lift(&c.substream(1)).unwrap()
        );
    }

    #[test]
    fn sampler_zero_roughness_is_translation() {
        let c = SamplerConfig::new(5, q("7/4"), q("0"));
        assert_eq!(sample_lift(&c).unwrap(), tr("7/4"));
    }

    #[test]
    fn sampler_displacement_window() {
        for seed in 0..50 {
            let c = SamplerConfig::new(seed, q("3/2"), q("1/8"));
            let d = sample_lift(&c).unwrap().displacement();
            assert!(d.min_disp >= q("11/8") && d.max_disp <= q("13/8"));
        }
    }

    #[test]
    fn sampler_rejects_infeasible() {
        let mut c = SamplerConfig::new(1, q("0"), q("1/2"));
        assert!(matches!(sample_lift(&c), Err(QmError::InfeasibleConfig(_))));
        c.roughness = q("1/4");
        c.breakpoint_count = 0;
        assert!(sample_lift(&c).is_err());
        c.breakpoint_count = 20;
        assert!(sample_lift(&c).is_err());
        c.breakpoint_count = 2;
        c.denominator_bound = 1;
        assert!(sample_lift(&c).is_err());
    }

    #[test]
    fn sample_annulus_examples() {
        let lo = SamplerConfig::new(1, q("0"), q("0"));
        let hi = SamplerConfig::new(2, q("1"), q("0"));
        assert_eq!(
            sample_annulus(&lo, &hi).unwrap(),
            AnnulusLift::twist_power(1)
        );
        let lo = SamplerConfig::new(3, q("0"), q("1/8"));
        let hi = SamplerConfig::new(4, q("5/2"), q("1/8"));
        let a = sample_annulus(&lo, &hi).unwrap();
        let alpha = a.alpha();
        assert!(alpha >= q("9/4") && alpha <= q("11/4"));
        assert_eq!(a, sample_annulus(&lo, &hi).unwrap());
    }

    #[test]
    fn defect_of_translations_is_zero() {
        let c = SamplerConfig::new(9, q("1/5"), q("0"));
        let r = defect_probe(QmName::TauCircle, &c, 20, &QmSettings::default()).unwrap();
        assert_eq!(r.observed_max, q("0"));
        assert!(r.passed());
    }

    #[test]
    fn defect_probe_small_runs() {
        let s = QmSettings {
            width_target: q("1/8"),
            q_max: 4,
            ..QmSettings::default()
        };
        let c = SamplerConfig::new(7, q("1/3"), q("1/4"));
        let r = defect_probe(QmName::TauCircle, &c, 50, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = defect_probe(QmName::RhoAnnulus, &c, 20, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(defect_probe(QmName::TauCircle, &c, 0, &s).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let s = QmSettings::default();
        let r = homogeneity_probe(QmName::TauCircle, &Element::Circle(tr("1/3")), 5, &s).unwrap();
        assert!(r.passed());
        let half = PLLift::new(vec![(q("0"), q("1/2")), (q("1/4"), q("5/8"))]).unwrap();
        let r = homogeneity_probe(QmName::TauCircle, &Element::Circle(half), 4, &s).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn conjugation_examples() {
        let s = QmSettings::default();
        let g = Element::Circle(sample_lift(&SamplerConfig::new(3, q("1/7"), q("1/4"))).unwrap());
        let r = conjugation_probe(QmName::TauCircle, &g, &Element::Circle(tr("2/9")), &s).unwrap();
        assert!(r.passed());
        let h = Element::Circle(sample_lift(&SamplerConfig::new(4, q("0"), q("3/8"))).unwrap());
        assert!(conjugation_probe(QmName::TauCircle, &g, &h, &s)
            .unwrap()
            .passed());
    }

    #[test]
    fn gap_examples() {
        let s = QmSettings::default();
        for n in [-3, 0, 1, 7] {
            let (gap, _) = rho_alpha_distance(&AnnulusLift::twist_power(n), &s).unwrap();
            assert_eq!(gap, q("0"));
        }
        let a = AnnulusLift::new(tr("1/3"), tr("3/4"));
        let s12 = QmSettings {
            q_max: 12,
            ..s.clone()
        };
        let (gap, rho) = rho_alpha_distance(&a, &s12).unwrap();
        assert_eq!((gap, rho.exact_value().cloned()), (q("0"), Some(q("5/12"))));
        assert!(rho_alpha_gap(&AnnulusLift::identity(), &s)
            .unwrap()
            .passed());
    }

    #[test]
    fn bavard_examples() {
        let s = QmSettings::default();
        assert!(bavard_probe(&[], &s).unwrap().passed());
        let g = sample_lift(&SamplerConfig::new(11, q("1/2"), q("1/4"))).unwrap();
        let h = sample_lift(&SamplerConfig::new(12, q("-1/3"), q("1/4"))).unwrap();
        assert!(bavard_probe(&[(g, h)], &s).unwrap().passed());
    }

    #[test]
    fn twist_drift() {
        let a = AnnulusLift::new(tr("1/3"), tr("3/4"));
        let s = QmSettings {
            q_max: 12,
            ..QmSettings::default()
        };
        assert!(twist_drift_probe(&a, -3..=3, &s).unwrap().passed());
    }
}
