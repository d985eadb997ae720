//! Argument parsing and command dispatch.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use torsion_core::bounds::{
    bounds_report, commutator_product, ehn_commutator_count, qi_band_check, Regime, Regularity,
};
use torsion_core::fragmentation::{
    audit_annulus_fragmentation, fragment_circle, plan_annulus_fragmentation, verify_certificate,
    AnnulusFragPlan,
};
use torsion_core::qm_lab::{
    bavard_probe, conjugation_probe, defect_probe, homogeneity_probe, rho_alpha_distance,
    rho_alpha_gap, sample_annulus, sample_lift, twist_drift_probe, varied_config, Element, QmName,
    QmSettings, SamplerConfig,
};
use torsion_core::rational::{parse_q, ratio, Q};
use torsion_core::rotation::{tau_bounds_with, tau_with, TauResult};
use torsion_core::{AnnulusLift, Limits, PLLift};

use crate::document::{parse_document, q_value, Document, DocumentError};
use crate::output::{checks_value, interval_value, tau_value, Format, Output, Report};

#[derive(Debug, Parser)]
#[command(
    name = "torsion",
    version,
    about = "Exact translation numbers, torsion numbers and fragmentation certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
}

fn rational_arg(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("{s:?} is not a rational p/q"))
}

#[derive(Debug, Clone, Args)]
pub struct Precision {
    /// Target width of certified enclosures.
    #[arg(long, value_parser = rational_arg)]
    pub width: Option<Q>,
    /// Largest period tried by exact rational detection.
    #[arg(long)]
    pub q_max: Option<u64>,
    /// Use the single enclosure from F^N instead of the adaptive search.
    #[arg(long)]
    pub iterations: Option<u64>,
}

impl Precision {
    fn settings(&self, width: Q, q_max: u64) -> QmSettings {
        QmSettings {
            width_target: self.width.clone().unwrap_or(width),
            q_max: self.q_max.unwrap_or(q_max),
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegularityArg {
    R0,
    General,
}

#[derive(Debug, Clone, Args)]
pub struct RegimeArgs {
    #[arg(long, value_enum, default_value = "general")]
    pub regime: RegularityArg,
    /// Assume the open-annulus fragmentation bound of 4.
    #[arg(long)]
    pub open_annulus: bool,
    /// Regularity order r; overrides --regime and rejects r = 2, 3.
    #[arg(long, allow_negative_numbers = true)]
    pub order: Option<i64>,
}

impl RegimeArgs {
    fn regime(&self) -> Result<Regime, CliError> {
        let regularity = match self.order {
            Some(r) => Regularity::from_order(r).map_err(|e| module("bounds", e))?,
            None => match self.regime {
                RegularityArg::R0 => Regularity::R0,
                RegularityArg::General => Regularity::General,
            },
        };
        Ok(Regime::new(regularity, self.open_annulus))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = rational_arg, default_value = "1/3", allow_hyphen_values = true)]
    pub offset: Q,
    #[arg(long, value_parser = rational_arg, default_value = "1/4")]
    pub roughness: Q,
    #[arg(long, default_value_t = 3)]
    pub breakpoints: u64,
    #[arg(long, default_value_t = 16)]
    pub denominator: u64,
    /// A probe_config document; replaces the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl SamplerArgs {
    fn config(&self) -> Result<SamplerConfig, CliError> {
        match &self.config {
            Some(path) => match read_document(Some(path), &mut std::io::empty())? {
                Document::ProbeConfig(c) => Ok(c),
                other => Err(wrong_kind("probe_config", &other)),
            },
            None => Ok(SamplerConfig {
                seed: self.seed,
                breakpoint_count: self.breakpoints,
                denominator_bound: self.denominator,
                displacement_offset: self.offset.clone(),
                roughness: self.roughness.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QmArg {
    Tau,
    Rho,
}

impl From<QmArg> for QmName {
    fn from(q: QmArg) -> Self {
        match q {
            QmArg::Tau => QmName::TauCircle,
            QmArg::Rho => QmName::RhoAnnulus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Lift,
    Annulus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a lift or annulus lift: τ, ρ, α, brackets and band checks.
    Analyze {
        input: Option<PathBuf>,
        #[command(flatten)]
        precision: Precision,
    },
    /// Certified translation number of a lift.
    Tau {
        input: Option<PathBuf>,
        #[command(flatten)]
        precision: Precision,
    },
    /// Fragmentation certificate of a lift.
    Fragment { input: Option<PathBuf> },
    /// Verify a fragmentation certificate.
    Verify { input: Option<PathBuf> },
    /// Boundary-trace fragmentation plan of an annulus lift.
    Plan {
        input: Option<PathBuf>,
        #[command(flatten)]
        regime: RegimeArgs,
    },
    /// Audit a plan document.
    Audit { input: Option<PathBuf> },
    /// Commutator-length and fragmentation brackets of an annulus lift.
    Bounds {
        input: Option<PathBuf>,
        #[command(flatten)]
        regime: RegimeArgs,
        #[command(flatten)]
        precision: Precision,
    },
    /// Emit a seeded lift or annulus document.
    Sample {
        #[arg(long, value_enum, default_value = "lift")]
        kind: SampleKind,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Offset of the upper trace; defaults to the lower offset plus 1.
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        upper_offset: Option<Q>,
    },
    /// Quasi-morphism probes.
    Probe {
        #[command(subcommand)]
        probe: ProbeCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeCommand {
    /// Enclose |q(ab) − q(a) − q(b)| over seeded pairs (default width 1/8, q-max 4).
    Defect {
        qm: QmArg,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        precision: Precision,
    },
    /// q(aⁿ) against n·q(a).
    Homogeneity {
        qm: QmArg,
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        precision: Precision,
    },
    /// q(hgh⁻¹) against q(g) for seeded g and h.
    Conjugation {
        qm: QmArg,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        precision: Precision,
    },
    /// | |ρ| − α | ≤ 2 on an annulus document or a seeded corpus.
    Gap {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        precision: Precision,
    },
    /// |τ| of seeded commutator products against 2n.
    Bavard {
        #[arg(long, default_value_t = 1)]
        pairs: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        precision: Precision,
    },
    /// ρ(tⁿf) − ρ(f) − n for n in [−window, window].
    Drift {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        precision: Precision,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("expected a {expected} document, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("{module}: {message}")]
    Module {
        module: &'static str,
        message: String,
    },
}

impl CliError {
    pub fn to_value(&self) -> Value {
        let (kind, module) = match self {
            CliError::Io { .. } => ("io", None),
            CliError::Document(DocumentError::Syntax { .. }) => ("syntax_error", None),
            CliError::Document(DocumentError::InvariantViolation { .. }) => {
                ("invariant_violation", None)
            }
            CliError::WrongKind { .. } => ("wrong_kind", None),
            CliError::Module { module, .. } => ("module_error", Some(*module)),
        };
        json!({ "error": { "kind": kind, "module": module, "message": self.to_string() } })
    }
}

fn module(name: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Module {
        module: name,
        message: e.to_string(),
    }
}

fn wrong_kind(expected: &'static str, found: &Document) -> CliError {
    CliError::WrongKind {
        expected,
        found: found.kind(),
    }
}

fn read_document(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Document, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(|e| CliError::Io {
                path: "<stdin>".into(),
                message: e.to_string(),
            })?;
        }
    }
    Ok(parse_document(&text)?)
}

fn read_lift(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<PLLift, CliError> {
    match read_document(path, stdin)? {
        Document::Lift(f) => Ok(f),
        other => Err(wrong_kind("lift", &other)),
    }
}

fn read_annulus(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<AnnulusLift, CliError> {
    match read_document(path, stdin)? {
        Document::Annulus(a) => Ok(a),
        other => Err(wrong_kind("annulus", &other)),
    }
}

const DEFAULT_WIDTH: (i64, i64) = (1, 64);
const DEFAULT_Q_MAX: u64 = 8;

fn default_settings(p: &Precision) -> QmSettings {
    p.settings(ratio(DEFAULT_WIDTH.0, DEFAULT_WIDTH.1), DEFAULT_Q_MAX)
}

fn compute_tau(f: &PLLift, p: &Precision) -> Result<TauResult, CliError> {
    let s = default_settings(p);
    match p.iterations {
        Some(n) => Ok(TauResult {
            interval: tau_bounds_with(f, n, &s.limits).map_err(|e| module("rotation", e))?,
            rational: None,
            iterations_used: n,
        }),
        None => tau_with(f, &s.width_target, s.q_max, &s.limits).map_err(|e| module("rotation", e)),
    }
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze { input, precision } => match read_document(input.as_ref(), stdin)? {
            Document::Lift(f) => analyze_lift(&f, precision),
            Document::Annulus(a) => analyze_annulus(&a, precision),
            other => Err(wrong_kind("lift or annulus", &other)),
        },
        Command::Tau { input, precision } => {
            let f = read_lift(input.as_ref(), stdin)?;
            let t = compute_tau(&f, precision)?;
            Ok(Output::Report(Report::new("tau", tau_value(&t))))
        }
        Command::Fragment { input } => {
            let f = read_lift(input.as_ref(), stdin)?;
            let cert = fragment_circle(&f).map_err(|e| module("fragmentation", e))?;
            Ok(Output::Document(Document::Certificate(cert)))
        }
        Command::Verify { input } => {
            let cert = match read_document(input.as_ref(), stdin)? {
                Document::Certificate(c) => c,
                other => return Err(wrong_kind("certificate", &other)),
            };
            let checks = verify_certificate(&cert);
            let mut r = Report::new(
                "verify",
                json!({ "factor_count": cert.factors.len(), "report": checks_value(&checks) }),
            );
            r.absorb(&checks);
            Ok(Output::Report(r))
        }
        Command::Plan { input, regime } => {
            let a = read_annulus(input.as_ref(), stdin)?;
            let plan = plan_annulus_fragmentation(&a, regime.regime()?)
                .map_err(|e| module("fragmentation", e))?;
            Ok(Output::Document(Document::Plan(plan)))
        }
        Command::Audit { input } => {
            let plan = match read_document(input.as_ref(), stdin)? {
                Document::Plan(p) => p,
                other => return Err(wrong_kind("plan", &other)),
            };
            Ok(Output::Report(audit(&plan)))
        }
        Command::Bounds {
            input,
            regime,
            precision,
        } => {
            let a = read_annulus(input.as_ref(), stdin)?;
            let regime = regime.regime()?;
            let s = default_settings(precision);
            let b = bounds_report(&a, regime, &s.width_target, s.q_max)
                .map_err(|e| module("bounds", e))?;
            let mut r = Report::new(
                "bounds",
                json!({
                    "alpha": q_value(&b.alpha),
                    "rho": interval_value(&b.rho),
                    "cl_lower": b.cl_lower.to_string(),
                    "cl_upper": b.cl_upper.to_string(),
                    "frag_lower": b.frag_lower.to_string(),
                    "frag_upper": b.frag_upper.to_string(),
                    "regime": regime.tag(),
                    "regularity": regime.regularity.tag(),
                    "open_annulus_assumed": regime.open_annulus,
                    "constants": {
                        "cl_upper_constant": regime.regularity.cl_constant(),
                        "frag_upper_constant": regime.frag_constant(),
                    },
                    "formulas": {
                        "cl_lower": "E(alpha/4) + 1",
                        "cl_upper": format!("E((alpha+3)/4) + {}", regime.regularity.cl_constant()),
                        "frag_lower": "E(alpha) + 1",
                        "frag_upper": format!("E(alpha) + {}", regime.frag_constant()),
                    },
                }),
            );
            if b.cl_lower > b.cl_upper {
                r.fail("cl_bracket_ordered");
            }
            if b.frag_lower > b.frag_upper {
                r.fail("frag_bracket_ordered");
            }
            Ok(Output::Report(r))
        }
        Command::Sample {
            kind,
            sampler,
            upper_offset,
        } => {
            let c = sampler.config()?;
            let doc = match kind {
                SampleKind::Lift => {
                    Document::Lift(sample_lift(&c).map_err(|e| module("qm_lab", e))?)
                }
                SampleKind::Annulus => {
                    let lower = c.substream(0);
                    let mut upper = c.substream(1);
                    upper.displacement_offset = upper_offset
                        .clone()
                        .unwrap_or_else(|| &c.displacement_offset + Q::from_integer(1.into()));
                    Document::Annulus(
                        sample_annulus(&lower, &upper).map_err(|e| module("qm_lab", e))?,
                    )
                }
            };
            Ok(Output::Document(doc))
        }
        Command::Probe { probe } => run_probe(probe, stdin).map(Output::Report),
    }
}

fn analyze_lift(f: &PLLift, p: &Precision) -> Result<Output, CliError> {
    let t = compute_tau(f, p)?;
    let d = f.displacement();
    let cert = fragment_circle(f).map_err(|e| module("fragmentation", e))?;
    let fixed = f.fixed_interval().map(|w| {
        json!({ "start": q_value(&w.start), "end": q_value(&w.end), "whole_line": w.whole_line })
    });
    Ok(Output::Report(Report::new(
        "analyze",
        json!({
            "kind": "lift",
            "tau": tau_value(&t),
            "displacement": {
                "min": q_value(&d.min_disp),
                "max": q_value(&d.max_disp),
                "min_abs": q_value(&d.min_abs_disp),
            },
            "fixed_interval": fixed,
            "ehn_commutator_count": ehn_commutator_count(f).to_string(),
            "fragmentation_factor_count": cert.factors.len(),
        }),
    )))
}

fn analyze_annulus(a: &AnnulusLift, p: &Precision) -> Result<Output, CliError> {
    let s = default_settings(p);
    let lower = compute_tau(&a.lower, p)?;
    let upper = compute_tau(&a.upper, p)?;
    let rho = upper.interval.sub(&lower.interval);
    let alpha = a.alpha();
    let mut result = json!({
        "kind": "annulus",
        "lower": { "tau": tau_value(&lower) },
        "upper": { "tau": tau_value(&upper) },
        "rho": interval_value(&rho),
        "alpha": q_value(&alpha),
    });
    let mut report_checks = None;
    let m = result.as_object_mut().expect("object");
    if a.is_identity() {
        m.insert("brackets".into(), Value::Null);
        m.insert("qi_band_check".into(), Value::Null);
    } else {
        let mut brackets = serde_json::Map::new();
        for regime in Regime::ALL {
            let (cl_lo, cl_hi) = torsion_core::bounds::cl_bracket(&alpha, regime.regularity);
            let (fr_lo, fr_hi) = torsion_core::bounds::frag_bracket(&alpha, regime);
            brackets.insert(
                regime.tag().to_string(),
                json!({
                    "cl_lower": cl_lo.to_string(),
                    "cl_upper": cl_hi.to_string(),
                    "frag_lower": fr_lo.to_string(),
                    "frag_upper": fr_hi.to_string(),
                }),
            );
        }
        m.insert("brackets".into(), Value::Object(brackets));
        let band = qi_band_check(a, &s.width_target, s.q_max).map_err(|e| module("bounds", e))?;
        m.insert("qi_band_check".into(), checks_value(&band));
        report_checks = Some(band);
    }
    let mut r = Report::new("analyze", result);
    if let Some(band) = report_checks {
        r.absorb(&band);
    }
    Ok(Output::Report(r))
}

fn audit(plan: &AnnulusFragPlan) -> Report {
    let a = audit_annulus_fragmentation(&plan.target, &plan.factors);
    let declared = plan.total_count == a.total;
    let mut r = Report::new(
        "audit",
        json!({
            "alpha": q_value(&a.alpha),
            "k0": a.k0,
            "k1": a.k1,
            "total": a.total,
            "declared_total": plan.total_count,
            "case": a.case.tag(),
            "regime": plan.regime.tag(),
            "report": checks_value(&a.report),
        }),
    );
    r.absorb(&a.report);
    if !declared {
        r.fail("audit.declared_total_matches");
    }
    r
}

fn sampled_element(qm: QmName, c: &SamplerConfig) -> Result<Element, CliError> {
    let e = match qm {
        QmName::TauCircle => Element::Circle(sample_lift(c).map_err(|e| module("qm_lab", e))?),
        QmName::RhoAnnulus => {
            let mut upper = c.substream(1);
            upper.displacement_offset += Q::from_integer(1.into());
            Element::Annulus(
                sample_annulus(&c.substream(0), &upper).map_err(|e| module("qm_lab", e))?,
            )
        }
    };
    Ok(e)
}

fn config_value(c: &SamplerConfig) -> Value {
    json!({
        "seed": c.seed,
        "breakpoint_count": c.breakpoint_count,
        "denominator_bound": c.denominator_bound,
        "displacement_offset": q_value(&c.displacement_offset),
        "roughness": q_value(&c.roughness),
    })
}

fn settings_value(s: &QmSettings) -> Value {
    json!({ "width_target": q_value(&s.width_target), "q_max": s.q_max })
}

fn run_probe(probe: &ProbeCommand, stdin: &mut dyn Read) -> Result<Report, CliError> {
    match probe {
        ProbeCommand::Defect {
            qm,
            trials,
            sampler,
            precision,
        } => {
            let c = sampler.config()?;
            let s = precision.settings(ratio(1, 8), 4);
            let d = defect_probe((*qm).into(), &c, *trials, &s).map_err(|e| module("qm_lab", e))?;
            let mut r = Report::new(
                "probe defect",
                json!({
                    "qm": d.name.tag(),
                    "trials": d.trials,
                    "observed_max": q_value(&d.observed_max),
                    "slack": q_value(&d.slack),
                    "observed_max_minus_slack": q_value(&(&d.observed_max - &d.slack)),
                    "certified_lower": q_value(&d.certified_lower),
                    "bound": q_value(&d.bound),
                    "violations": d.violations,
                    "config": config_value(&c),
                    "settings": settings_value(&s),
                }),
            );
            if !d.passed() {
                r.fail("defect_within_bound");
            }
            Ok(r)
        }
        ProbeCommand::Homogeneity {
            qm,
            input,
            n_max,
            sampler,
            precision,
        } => {
            let qm: QmName = (*qm).into();
            let element = match input {
                Some(_) => match read_document(input.as_ref(), stdin)? {
                    Document::Lift(f) => Element::Circle(f),
                    Document::Annulus(a) => Element::Annulus(a),
                    other => return Err(wrong_kind("lift or annulus", &other)),
                },
                None => sampled_element(qm, &sampler.config()?)?,
            };
            let s = default_settings(precision);
            let checks =
                homogeneity_probe(qm, &element, *n_max, &s).map_err(|e| module("qm_lab", e))?;
            let mut r = Report::new(
                "probe homogeneity",
                json!({ "qm": qm.tag(), "report": checks_value(&checks) }),
            );
            r.absorb(&checks);
            Ok(r)
        }
        ProbeCommand::Conjugation {
            qm,
            sampler,
            precision,
        } => {
            let qm: QmName = (*qm).into();
            let c = sampler.config()?;
            let g = sampled_element(qm, &c.substream(0))?;
            let h = sampled_element(qm, &c.substream(1))?;
            let s = default_settings(precision);
            let checks = conjugation_probe(qm, &g, &h, &s).map_err(|e| module("qm_lab", e))?;
            let mut r = Report::new(
                "probe conjugation",
                json!({ "qm": qm.tag(), "config": config_value(&c), "report": checks_value(&checks) }),
            );
            r.absorb(&checks);
            Ok(r)
        }
        ProbeCommand::Gap {
            input,
            trials,
            seed,
            precision,
        } => {
            let s = default_settings(precision);
            if input.is_some() {
                let a = read_annulus(input.as_ref(), stdin)?;
                let checks = rho_alpha_gap(&a, &s).map_err(|e| module("qm_lab", e))?;
                let mut r = Report::new("probe gap", json!({ "report": checks_value(&checks) }));
                r.absorb(&checks);
                return Ok(r);
            }
            let mut max_distance = Q::from_integer(0.into());
            let mut violations = Vec::new();
            for i in 0..*trials {
                let a = sample_annulus(
                    &varied_config(*seed, 2 * i, 2),
                    &varied_config(*seed, 2 * i + 1, 8),
                )
                .map_err(|e| module("qm_lab", e))?;
                let (d, _) = rho_alpha_distance(&a, &s).map_err(|e| module("qm_lab", e))?;
                if d > Q::from_integer(2.into()) {
                    violations.push(i);
                }
                max_distance = max_distance.max(d);
            }
            let mut r = Report::new(
                "probe gap",
                json!({
                    "trials": trials,
                    "seed": seed,
                    "max_distance": q_value(&max_distance),
                    "violations": violations,
                    "settings": settings_value(&s),
                }),
            );
            if !violations.is_empty() {
                r.fail("gap_at_most_2");
            }
            Ok(r)
        }
        ProbeCommand::Bavard {
            pairs,
            trials,
            seed,
            precision,
        } => {
            let s = default_settings(precision);
            let mut violations = Vec::new();
            let mut max_abs = Q::from_integer(0.into());
            for i in 0..*trials {
                let list = (0..*pairs)
                    .map(|j| {
                        let base = (i * pairs + j) * 2;
                        Ok((
                            sample_lift(&varied_config(*seed, base, 2))?,
                            sample_lift(&varied_config(*seed, base + 1, 2))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, torsion_core::qm_lab::QmError>>()
                    .map_err(|e| module("qm_lab", e))?;
                let checks = bavard_probe(&list, &s).map_err(|e| module("qm_lab", e))?;
                if !checks.passed() {
                    violations.push(i);
                }
                let product = commutator_product(&list, &s.width_target, s.q_max, &s.limits)
                    .map_err(|e| module("bounds", e))?;
                max_abs = max_abs.max(product.tau.magnitude());
            }
            let mut r = Report::new(
                "probe bavard",
                json!({
                    "pairs": pairs,
                    "trials": trials,
                    "seed": seed,
                    "bound": (2 * pairs).to_string(),
                    "max_abs_tau": q_value(&max_abs),
                    "violations": violations,
                    "settings": settings_value(&s),
                }),
            );
            if !violations.is_empty() {
                r.fail("bavard_bound");
            }
            Ok(r)
        }
        ProbeCommand::Drift {
            input,
            window,
            sampler,
            precision,
        } => {
            let a = match input {
                Some(_) => read_annulus(input.as_ref(), stdin)?,
                None => match sampled_element(QmName::RhoAnnulus, &sampler.config()?)? {
                    Element::Annulus(a) => a,
                    Element::Circle(_) => unreachable!("rho samples annulus lifts"),
                },
            };
            let s = default_settings(precision);
            let checks =
                twist_drift_probe(&a, -window..=*window, &s).map_err(|e| module("qm_lab", e))?;
            let mut r = Report::new("probe drift", json!({ "report": checks_value(&checks) }));
            r.absorb(&checks);
            Ok(r)
        }
    }
}
