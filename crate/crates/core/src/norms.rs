//! The modular `∫ Ψ(t, f(t)) dμ`, the Luxemburg norm it induces, and the
//! `L^p` closed form.

use serde::Serialize;
use thiserror::Error;

use crate::classify::{CheckConfig, Evidence, Status, Verdict};
use crate::exprlang::{ComposedFunction, ExtReal};
use crate::measure::{GridFunction, MeasureError, MeasureSpace};

/// Default relative bracket width for [`luxemburg_norm`].
pub const DEFAULT_TOL: f64 = 1e-10;
/// Bisection steps after bracketing.
pub const MAX_ITERATIONS: usize = 200;
/// Scaling factors beyond this count as "no finite λ".
pub const LAMBDA_CAP: f64 = 1e12;
const MAX_HALVINGS: usize = 2100;

#[derive(Debug, Error)]
pub enum NormError {
    #[error("psi is not nondecreasing in u ({status}): {}", describe(.evidence))]
    NotMonotone { status: Status, evidence: Vec<Evidence> },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("no lower bracket found for the Luxemburg norm")]
    BracketOverflow,
    #[error("tolerance must be positive and below 1, got {0}")]
    BadTolerance(f64),
    #[error("p must be at least 1, got {0}")]
    BadExponent(f64),
}

fn describe(evidence: &[Evidence]) -> String {
    evidence
        .iter()
        .map(|e| {
            let vals: Vec<String> = e.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{} [{}]", e.description, vals.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularValue {
    pub value: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult {
    pub value: ExtReal,
    pub iterations: usize,
    pub bracket: [ExtReal; 2],
    pub modular_at_value: ExtReal,
}

/// `Ψ(t, ·)` nondecreasing on `{0} ∪ u_grid` at every `t`. A point where
/// `Ψ` is undefined makes the verdict inconclusive.
pub fn check_monotone(psi: &ComposedFunction, t_samples: &[f64], cfg: &CheckConfig) -> Verdict {
    let us: Vec<f64> = std::iter::once(0.0).chain(cfg.u_grid.iter().copied()).collect();
    for &t in t_samples {
        let mut prev: Option<(f64, ExtReal)> = None;
        for &u in &us {
            let v = match psi.eval(t, u) {
                Ok(v) => v,
                Err(e) => {
                    return Verdict::inconclusive(
                        Evidence::new(format!("psi undefined ({e})"))
                            .with("t", t)
                            .with("u", u),
                    )
                }
            };
            if let Some((pu, pv)) = prev {
                if v < pv {
                    return Verdict::refuted(
                        Evidence::new("psi decreases between u1 and u2")
                            .with("t", t)
                            .with("u1", pu)
                            .with("u2", u)
                            .with("psi_u1", pv)
                            .with("psi_u2", v),
                    );
                }
            }
            prev = Some((u, v));
        }
    }
    Verdict::certified(
        Evidence::new("psi nondecreasing on the grid")
            .with("samples", t_samples.len() as f64)
            .with("grid_points", us.len() as f64),
    )
}

/// `∫ Ψ(t, f(t)) dμ`.
pub fn modular(
    psi: &ComposedFunction,
    m: &MeasureSpace,
    f: &GridFunction,
) -> Result<ModularValue, NormError> {
    f.check_aligned(m)?;
    let values = f.values();
    let value = m.integrate_nodes(|i, t| psi.eval(t, values[i]))?;
    Ok(ModularValue { value })
}

fn node_ts(m: &MeasureSpace) -> Vec<f64> {
    m.nodes().into_iter().map(|(t, _)| t).collect()
}

/// `h(λ) = ∫ Ψ(t, f(t)/λ) dμ`.
fn h(psi: &ComposedFunction, m: &MeasureSpace, f: &GridFunction, lambda: f64) -> Result<ExtReal, NormError> {
    let values = f.values();
    Ok(m.integrate_nodes(|i, t| psi.eval(t, values[i] / lambda))?)
}

/// `inf{λ > 0 : ∫ Ψ(t, f(t)/λ) dμ ≤ 1}`, returned as the upper end of a
/// bisection bracket of relative width `tol`.
pub fn luxemburg_norm(
    psi: &ComposedFunction,
    m: &MeasureSpace,
    f: &GridFunction,
    tol: f64,
) -> Result<NormResult, NormError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(NormError::BadTolerance(tol));
    }
    f.check_aligned(m)?;
    let monotone = check_monotone(psi, &node_ts(m), &CheckConfig::default());
    if !monotone.is_certified() {
        return Err(NormError::NotMonotone {
            status: monotone.status,
            evidence: monotone.evidence,
        });
    }
    if f.is_zero() {
        return Ok(NormResult {
            value: ExtReal::ZERO,
            iterations: 0,
            bracket: [ExtReal::ZERO, ExtReal::ZERO],
            modular_at_value: modular(psi, m, f)?.value,
        });
    }

    let one = ExtReal::ONE;
    let (mut lo, mut hi);
    let mut h_hi;
    let h1 = h(psi, m, f, 1.0)?;
    if h1 <= one {
        hi = 1.0;
        h_hi = h1;
        lo = 0.5;
        let mut steps = 0;
        loop {
            let v = h(psi, m, f, lo)?;
            if v > one {
                break;
            }
            hi = lo;
            h_hi = v;
            lo *= 0.5;
            steps += 1;
            if steps > MAX_HALVINGS || lo == 0.0 {
                return Err(NormError::BracketOverflow);
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        loop {
            let v = h(psi, m, f, hi)?;
            if v <= one {
                h_hi = v;
                break;
            }
            if hi >= LAMBDA_CAP {
                return Ok(NormResult {
                    value: ExtReal::PosInf,
                    iterations: 0,
                    bracket: [ExtReal::Finite(hi), ExtReal::PosInf],
                    modular_at_value: ExtReal::PosInf,
                });
            }
            lo = hi;
            hi *= 2.0;
        }
    }

    let mut iterations = 0;
    while hi - lo > tol * hi && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let v = h(psi, m, f, mid)?;
        if v <= one {
            hi = mid;
            h_hi = v;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(NormResult {
        value: ExtReal::Finite(hi),
        iterations,
        bracket: [ExtReal::Finite(lo), ExtReal::Finite(hi)],
        modular_at_value: h_hi,
    })
}

/// Membership in the modular space: some `λ ∈ {1, 2, 4, …}` up to
/// [`LAMBDA_CAP`] gives a finite modular for `f/λ`.
pub fn is_member(psi: &ComposedFunction, m: &MeasureSpace, f: &GridFunction) -> Verdict {
    if let Err(e) = f.check_aligned(m) {
        return Verdict::inconclusive(Evidence::new(e.to_string()));
    }
    let mut lambda = 1.0;
    loop {
        let v = match h(psi, m, f, lambda) {
            Ok(v) => v,
            Err(e) => {
                return Verdict::inconclusive(Evidence::new(e.to_string()).with("lambda", lambda))
            }
        };
        if !v.is_effectively_infinite() {
            return Verdict::certified(
                Evidence::new("modular of f/lambda is finite")
                    .with("lambda", lambda)
                    .with("modular", v),
            );
        }
        if lambda >= LAMBDA_CAP {
            return Verdict::refuted(
                Evidence::new("modular of f/lambda is infinite for every tested lambda")
                    .with("lambda_max", lambda)
                    .with("modular", v),
            );
        }
        lambda *= 2.0;
    }
}

/// `(∫ f^p dμ)^{1/p}`.
pub fn lp_norm(p: f64, m: &MeasureSpace, f: &GridFunction) -> Result<f64, NormError> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(NormError::BadExponent(p));
    }
    f.check_aligned(m)?;
    let sum: f64 = m
        .nodes()
        .iter()
        .zip(f.values())
        .map(|(&(_, w), &x)| w * x.powf(p))
        .sum();
    Ok(sum.powf(1.0 / p))
}
