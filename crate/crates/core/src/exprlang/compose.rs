use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{parse, BinOp, Env, EvalError, Expr, ExtReal, ParseError, Var};

/// The map `E(t, u) = (e_t(t, u), e_u(t, u))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapExpr {
    pub e_t: Expr,
    pub e_u: Expr,
}

impl MapExpr {
    pub fn new(e_t: Expr, e_u: Expr) -> Self {
        MapExpr { e_t, e_u }
    }

    pub fn identity() -> Self {
        MapExpr::new(Expr::Var(Var::T), Expr::Var(Var::U))
    }

    pub fn parse(e_t: &str, e_u: &str) -> Result<Self, ParseError> {
        Ok(MapExpr::new(parse(e_t)?, parse(e_u)?))
    }

    /// Coordinatewise `E₁ + E₂`.
    pub fn sum(&self, other: &MapExpr) -> MapExpr {
        MapExpr::new(
            Expr::binary(BinOp::Add, self.e_t.clone(), other.e_t.clone()),
            Expr::binary(BinOp::Add, self.e_u.clone(), other.e_u.clone()),
        )
    }

    /// Coordinatewise `c · E`.
    pub fn scale(&self, c: f64) -> MapExpr {
        MapExpr::new(
            Expr::binary(BinOp::Mul, Expr::num(c), self.e_t.clone()),
            Expr::binary(BinOp::Mul, Expr::num(c), self.e_u.clone()),
        )
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e_t, self.e_u)
    }
}

/// Which part of `Φ ∘ E` failed to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    InnerT,
    InnerU,
    Outer,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::InnerT => "E (t coordinate)",
            Stage::InnerU => "E (u coordinate)",
            Stage::Outer => "phi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("evaluating {stage}: {source}")]
pub struct ComposeError {
    pub stage: Stage,
    #[source]
    pub source: EvalError,
}

/// `Ψ(t, u) = Φ(E(t, u))`, evaluated in two stages.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedFunction {
    pub phi: Expr,
    pub map: MapExpr,
    pub p: Option<f64>,
}

impl ComposedFunction {
    /// Fails when `p` is referenced but not supplied.
    pub fn new(phi: Expr, map: MapExpr, p: Option<f64>) -> Result<Self, ComposeError> {
        if p.is_none() {
            for (stage, e) in [
                (Stage::Outer, &phi),
                (Stage::InnerT, &map.e_t),
                (Stage::InnerU, &map.e_u),
            ] {
                if e.mentions(Var::P) {
                    return Err(ComposeError {
                        stage,
                        source: EvalError::Unbound(Var::P),
                    });
                }
            }
        }
        Ok(ComposedFunction { phi, map, p })
    }

    /// `Φ` composed with the identity map.
    pub fn identity(phi: Expr, p: Option<f64>) -> Result<Self, ComposeError> {
        ComposedFunction::new(phi, MapExpr::identity(), p)
    }

    pub fn eval(&self, t: f64, u: f64) -> Result<ExtReal, ComposeError> {
        self.eval_ext(ExtReal::from(t), ExtReal::from(u))
    }

    pub fn eval_ext(&self, t: ExtReal, u: ExtReal) -> Result<ExtReal, ComposeError> {
        let p = self.p.map(ExtReal::from);
        let inner = Env { t, u, p };
        let et = self.map.e_t.eval(&inner).map_err(|source| ComposeError {
            stage: Stage::InnerT,
            source,
        })?;
        let eu = self.map.e_u.eval(&inner).map_err(|source| ComposeError {
            stage: Stage::InnerU,
            source,
        })?;
        self.phi
            .eval(&Env { t: et, u: eu, p })
            .map_err(|source| ComposeError {
                stage: Stage::Outer,
                source,
            })
    }

    /// `Ψ(t, ·)` with `t` fixed.
    pub fn at(&self, t: f64) -> impl Fn(f64) -> Result<ExtReal, ComposeError> + '_ {
        move |u| self.eval(t, u)
    }
}

/// Convenience: parse `Φ`, `E_t`, `E_u` and compose.
pub fn compose_sources(
    phi: &str,
    e_t: &str,
    e_u: &str,
    p: Option<f64>,
) -> Result<ComposedFunction, crate::Error> {
    let map = MapExpr::parse(e_t, e_u)?;
    Ok(ComposedFunction::new(parse(phi)?, map, p)?)
}
