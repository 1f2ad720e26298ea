//! Sobolev-type norms on interval measures, with weak derivatives
//! approximated by finite differences.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exprlang::{ComposedFunction, ExtReal};
use crate::measure::{GridFunction, MeasureError, MeasureSpace};
use crate::norms::{self, NormError, NormResult};

#[derive(Debug, Error)]
pub enum SobolevError {
    #[error("derivatives need an interval measure")]
    NotInterval,
    #[error("order {order} needs at least {min} nodes, got {nodes}")]
    TooFewNodes { order: usize, nodes: usize, min: usize },
    #[error("{found} samples for a measure with {expected} nodes")]
    Misaligned { expected: usize, found: usize },
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Nodes needed for derivatives up to `order`.
pub fn min_nodes(order: usize) -> usize {
    (order + 2).max(3)
}

fn check_samples(m: &MeasureSpace, f: &[f64], order: usize) -> Result<f64, SobolevError> {
    let h = m.spacing().ok_or(SobolevError::NotInterval)?;
    if f.len() != m.len() {
        return Err(SobolevError::Misaligned {
            expected: m.len(),
            found: f.len(),
        });
    }
    if let Some(index) = f.iter().position(|x| !x.is_finite()) {
        return Err(SobolevError::NonFinite { index });
    }
    if order > 0 && f.len() < min_nodes(order) {
        return Err(SobolevError::TooFewNodes {
            order,
            nodes: f.len(),
            min: min_nodes(order),
        });
    }
    Ok(h)
}

/// Central differences inside, second-order one-sided stencils at the ends.
fn first_difference(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else if i + 1 == n {
                (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// `D^order f` at the nodes of `m`; signed.
pub fn weak_derivative(f: &[f64], m: &MeasureSpace, order: usize) -> Result<Vec<f64>, SobolevError> {
    let h = check_samples(m, f, order)?;
    let mut v = f.to_vec();
    for _ in 0..order {
        v = first_difference(&v, h);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevResult {
    pub value: ExtReal,
    /// `‖D^r f‖` for `r = 0..=k`.
    pub terms: Vec<NormResult>,
}

/// `Σ_{r ≤ k} ‖ |D^r f| ‖` in the Luxemburg norm of `psi`.
pub fn sobolev_norm(
    psi: &ComposedFunction,
    m: &MeasureSpace,
    f: &[f64],
    k: usize,
    tol: f64,
) -> Result<SobolevResult, SobolevError> {
    check_samples(m, f, k)?;
    let terms = (0..=k)
        .into_par_iter()
        .map(|r| {
            let d = GridFunction::from_signed(&weak_derivative(f, m, r)?)?;
            Ok(norms::luxemburg_norm(psi, m, &d, tol)?)
        })
        .collect::<Result<Vec<_>, SobolevError>>()?;
    let mut value = ExtReal::ZERO;
    for t in &terms {
        value = value.add(t.value).unwrap_or(ExtReal::PosInf);
    }
    Ok(SobolevResult { value, terms })
}

/// `(Σ_{r ≤ k} ‖D^r f‖_p)^{1/p}`: the `p`-th root is taken of the plain sum
/// of `L^p` norms.
pub fn sobolev_lp_norm(p: f64, m: &MeasureSpace, f: &[f64], k: usize) -> Result<f64, SobolevError> {
    check_samples(m, f, k)?;
    let mut sum = 0.0;
    for r in 0..=k {
        let d = GridFunction::from_signed(&weak_derivative(f, m, r)?)?;
        sum += norms::lp_norm(p, m, &d)?;
    }
    Ok(sum.powf(1.0 / p))
}
