//! Tri-state classification of `Ψ = Φ ∘ E` into the E-N, E-strong-Young,
//! E-Orlicz and E-Young classes.

mod checks;
mod config;
mod verdict;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::exprlang::{BinOp, ComposedFunction, Expr, ExtReal, MapExpr};

pub use checks::{
    check_convex, check_even, check_left_continuity_at, check_nondegenerate, check_positive,
    check_ratio_limit_inf, check_ratio_limit_zero, check_value_limit_inf, check_value_limit_zero,
    check_zero_at_origin, check_zero_iff_zero, estimate_a_phi, estimate_u_phi, Nondegeneracy,
    BOUNDARY_TOL,
};
pub use config::{geometric_grid, CheckConfig, ConfigError, STABLE_SPREAD, STABLE_WINDOW};
pub use verdict::{Evidence, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FunctionClass {
    #[serde(rename = "E-N")]
    EN,
    #[serde(rename = "E-strong-Young")]
    EStrongYoung,
    #[serde(rename = "E-Orlicz")]
    EOrlicz,
    #[serde(rename = "E-Young")]
    EYoung,
}

impl FunctionClass {
    /// Strongest first: each class implies every later one.
    pub const CHAIN: [FunctionClass; 4] = [
        FunctionClass::EN,
        FunctionClass::EStrongYoung,
        FunctionClass::EOrlicz,
        FunctionClass::EYoung,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::EN => "E-N",
            FunctionClass::EStrongYoung => "E-strong-Young",
            FunctionClass::EOrlicz => "E-Orlicz",
            FunctionClass::EYoung => "E-Young",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        FunctionClass::CHAIN.into_iter().find(|c| c.name() == name)
    }

    pub fn conditions(self) -> &'static [Check] {
        use Check::*;
        match self {
            FunctionClass::EN => &[Convex, Even, Positive, RatioLimitZero, RatioLimitInf],
            FunctionClass::EStrongYoung => &[Convex, ZeroIffZero, ValueLimitInf],
            FunctionClass::EOrlicz => &[
                Convex,
                ZeroAtOrigin,
                ValueLimitInf,
                Nondegenerate,
                LeftContinuous,
            ],
            FunctionClass::EYoung => &[Convex, ValueLimitZero, ValueLimitInf],
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Convex,
    Even,
    Positive,
    RatioLimitZero,
    RatioLimitInf,
    ZeroAtOrigin,
    ZeroIffZero,
    ValueLimitZero,
    ValueLimitInf,
    Nondegenerate,
    LeftContinuous,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Convex,
        Check::Even,
        Check::Positive,
        Check::RatioLimitZero,
        Check::RatioLimitInf,
        Check::ZeroAtOrigin,
        Check::ZeroIffZero,
        Check::ValueLimitZero,
        Check::ValueLimitInf,
        Check::Nondegenerate,
        Check::LeftContinuous,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Convex => "convex",
            Check::Even => "even",
            Check::Positive => "positive",
            Check::RatioLimitZero => "ratio_limit_zero",
            Check::RatioLimitInf => "ratio_limit_inf",
            Check::ZeroAtOrigin => "zero_at_origin",
            Check::ZeroIffZero => "zero_iff_zero",
            Check::ValueLimitZero => "value_limit_zero",
            Check::ValueLimitInf => "value_limit_inf",
            Check::Nondegenerate => "nondegenerate",
            Check::LeftContinuous => "left_continuous",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything measured at a single `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub t: f64,
    pub checks: BTreeMap<Check, Verdict>,
    pub u_phi: ExtReal,
    pub a_phi: ExtReal,
    pub nondegenerate_strict: bool,
}

impl SampleReport {
    pub fn class_status(&self, class: FunctionClass) -> Status {
        Status::all(class.conditions().iter().map(|c| self.checks[c].status))
    }
}

/// A condition that was not certified at some `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub t: f64,
    pub condition: Check,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassVerdict {
    pub status: Status,
    /// Status at each `t`, in sample order.
    pub per_sample: Vec<Status>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainViolation {
    pub stronger: FunctionClass,
    pub weaker: FunctionClass,
    /// `None` for the aggregated verdicts.
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub phi: String,
    pub e: [String; 2],
    pub p: Option<f64>,
    pub config: CheckConfig,
    pub classes: BTreeMap<FunctionClass, ClassVerdict>,
    pub samples: Vec<SampleReport>,
    pub chain_consistent: bool,
    pub chain_violations: Vec<ChainViolation>,
}

impl ClassificationReport {
    pub fn status(&self, class: FunctionClass) -> Status {
        self.classes[&class].status
    }

    /// First verdict for `check` with the given status, across samples.
    pub fn find(&self, check: Check, status: Status) -> Option<(f64, &Verdict)> {
        self.samples.iter().find_map(|s| {
            let v = &s.checks[&check];
            (v.status == status).then_some((s.t, v))
        })
    }
}

/// Runs every condition checker at one `t`.
pub fn classify_sample(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> SampleReport {
    let u_phi = estimate_u_phi(psi, t, cfg);
    let nondeg = check_nondegenerate(psi, t, cfg);
    let mut checks = BTreeMap::new();
    for check in Check::ALL {
        let v = match check {
            Check::Convex => check_convex(psi, t, cfg),
            Check::Even => check_even(psi, t, cfg),
            Check::Positive => check_positive(psi, t, cfg),
            Check::RatioLimitZero => check_ratio_limit_zero(psi, t, cfg),
            Check::RatioLimitInf => check_ratio_limit_inf(psi, t, cfg),
            Check::ZeroAtOrigin => check_zero_at_origin(psi, t, cfg),
            Check::ZeroIffZero => check_zero_iff_zero(psi, t, cfg),
            Check::ValueLimitZero => check_value_limit_zero(psi, t, cfg),
            Check::ValueLimitInf => check_value_limit_inf(psi, t, cfg),
            Check::Nondegenerate => nondeg.verdict.clone(),
            Check::LeftContinuous => check_left_continuity_at(psi, t, u_phi, cfg),
        };
        checks.insert(check, v);
    }
    SampleReport {
        t,
        checks,
        u_phi,
        a_phi: estimate_a_phi(psi, t, cfg),
        nondegenerate_strict: nondeg.strict,
    }
}

/// Classifies `Ψ` at every `cfg.t_samples` value. Samples run in parallel;
/// the report is assembled in sample order.
pub fn classify(psi: &ComposedFunction, cfg: &CheckConfig) -> Result<ClassificationReport, ConfigError> {
    cfg.validate()?;
    let samples: Vec<SampleReport> = cfg
        .t_samples
        .par_iter()
        .map(|&t| classify_sample(psi, t, cfg))
        .collect();

    let mut classes = BTreeMap::new();
    for class in FunctionClass::CHAIN {
        let per_sample: Vec<Status> = samples.iter().map(|s| s.class_status(class)).collect();
        let failures = samples
            .iter()
            .flat_map(|s| {
                class.conditions().iter().filter_map(move |c| {
                    let status = s.checks[c].status;
                    (status != Status::Certified).then_some(Failure {
                        t: s.t,
                        condition: *c,
                        status,
                    })
                })
            })
            .collect();
        let status = Status::all(per_sample.iter().copied());
        classes.insert(
            class,
            ClassVerdict {
                status,
                per_sample,
                failures,
            },
        );
    }

    let mut chain_violations = Vec::new();
    for (i, &stronger) in FunctionClass::CHAIN.iter().enumerate() {
        for &weaker in &FunctionClass::CHAIN[i + 1..] {
            for (k, s) in samples.iter().enumerate() {
                let (a, b) = (&classes[&stronger].per_sample[k], &classes[&weaker].per_sample[k]);
                if *a == Status::Certified && *b != Status::Certified {
                    chain_violations.push(ChainViolation {
                        stronger,
                        weaker,
                        t: Some(s.t),
                    });
                }
            }
            if classes[&stronger].status == Status::Certified
                && classes[&weaker].status != Status::Certified
            {
                chain_violations.push(ChainViolation {
                    stronger,
                    weaker,
                    t: None,
                });
            }
        }
    }

    Ok(ClassificationReport {
        phi: psi.phi.to_string(),
        e: [psi.map.e_t.to_string(), psi.map.e_u.to_string()],
        p: psi.p,
        config: cfg.clone(),
        classes,
        samples,
        chain_consistent: chain_violations.is_empty(),
        chain_violations,
    })
}

/// `Φ₁ + Φ₂`.
pub fn phi_sum(phi1: &Expr, phi2: &Expr) -> Expr {
    Expr::binary(BinOp::Add, phi1.clone(), phi2.clone())
}

/// `c · Φ`. With `0 · ∞ = 0`, `c = 0` gives the zero function.
pub fn phi_scale(phi: &Expr, c: f64) -> Expr {
    Expr::binary(BinOp::Mul, Expr::num(c), phi.clone())
}

/// `E₁ + E₂`, coordinatewise.
pub fn e_sum(e1: &MapExpr, e2: &MapExpr) -> MapExpr {
    e1.sum(e2)
}

/// `c · E`, coordinatewise.
pub fn e_scale(e: &MapExpr, c: f64) -> MapExpr {
    e.scale(c)
}
