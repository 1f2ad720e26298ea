//! Per-`t` condition checkers on `u ↦ Ψ(t, u)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{CheckConfig, STABLE_SPREAD, STABLE_WINDOW};
use super::verdict::{Evidence, Status, Verdict};
use crate::exprlang::{ComposeError, ComposedFunction, ExtReal};

/// Absolute width at which the `U_Φ` and `a_Φ` bisections stop.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Left-limit ladders stop once the gap below `U` falls under this fraction
/// of `max(1, U)`.
const LEFT_GAP: f64 = 1e-7;

fn failed(what: &str, u: f64, err: &ComposeError) -> Verdict {
    Verdict::inconclusive(Evidence::new(format!("{what}: evaluation failed at u ({err})")).with("u", u))
}

fn ladder_note(cfg: &CheckConfig) -> Evidence {
    Evidence::new("ladder")
        .with("ladder_ratio", cfg.ladder_ratio)
        .with("rungs", cfg.max_ladder as f64)
}

/// `Ψ(t, ·)` at `us`, stopping after the first effectively infinite value
/// when `stop_at_inf` is set.
fn ladder(
    psi: &ComposedFunction,
    t: f64,
    us: impl Iterator<Item = f64>,
    stop_at_inf: bool,
) -> Result<Vec<(f64, ExtReal)>, (f64, ComposeError)> {
    let mut out = Vec::new();
    for u in us {
        let v = psi.eval(t, u).map_err(|e| (u, e))?;
        out.push((u, v));
        if stop_at_inf && v.is_effectively_infinite() {
            break;
        }
    }
    Ok(out)
}

fn descending(cfg: &CheckConfig) -> impl Iterator<Item = f64> + '_ {
    (0..=cfg.max_ladder).map(move |k| cfg.ladder_ratio.powi(-(k as i32)))
}

fn ascending(cfg: &CheckConfig) -> impl Iterator<Item = f64> + '_ {
    (0..=cfg.max_ladder).map(move |k| cfg.ladder_ratio.powi(k as i32))
}

fn ratio(v: ExtReal, u: f64) -> ExtReal {
    v.div(ExtReal::Finite(u)).unwrap_or(ExtReal::PosInf)
}

/// Level of a ladder whose last [`STABLE_WINDOW`] values agree to a relative
/// spread of [`STABLE_SPREAD`].
fn stabilized(values: &[ExtReal]) -> Option<f64> {
    if values.len() < STABLE_WINDOW {
        return None;
    }
    let tail = &values[values.len() - STABLE_WINDOW..];
    if tail.iter().any(|v| v.is_effectively_infinite()) {
        return None;
    }
    let xs: Vec<f64> = tail.iter().map(|v| v.to_f64()).collect();
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let last = xs[xs.len() - 1];
    (hi - lo <= STABLE_SPREAD * last.abs().max(1.0)).then_some(last)
}

fn tail(values: &[ExtReal]) -> &[ExtReal] {
    &values[values.len().saturating_sub(STABLE_WINDOW)..]
}

fn nondecreasing(values: &[ExtReal]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

fn strictly_decreasing(values: &[ExtReal]) -> bool {
    values.len() >= STABLE_WINDOW && values.windows(2).all(|w| w[0] > w[1])
}

/// Midpoint convexity on grid pairs, pairs anchored at 0, and random
/// log-uniform pairs.
pub fn check_convex(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let g = &cfg.u_grid;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for i in 0..g.len() {
        pairs.push((0.0, g[i]));
        if i + 1 < g.len() {
            pairs.push((g[i], g[i + 1]));
        }
        if i + 2 < g.len() {
            pairs.push((g[i], g[i + 2]));
        }
    }
    let (lo, hi) = (g[0].ln(), g[g.len() - 1].ln());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ t.to_bits());
    for _ in 0..cfg.random_pairs {
        let a = rng.gen_range(lo..=hi).exp();
        let b = rng.gen_range(lo..=hi).exp();
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }

    let mut worst: Option<(f64, Evidence)> = None;
    let mut first_error: Option<Verdict> = None;
    for (u1, u2) in pairs {
        let mid = 0.5 * (u1 + u2);
        let vals = [u1, u2, mid].map(|u| psi.eval(t, u).map_err(|e| (u, e)));
        let [a, b, m] = match vals {
            [Ok(a), Ok(b), Ok(m)] => [a, b, m],
            _ => {
                if first_error.is_none() {
                    let (u, e) = vals.into_iter().find_map(|v| v.err()).expect("one failed");
                    first_error = Some(failed("convexity", u, &e));
                }
                continue;
            }
        };
        if a.is_effectively_infinite() || b.is_effectively_infinite() {
            continue;
        }
        let witness = |excess: ExtReal| {
            Evidence::new("midpoint inequality violated")
                .with("u1", u1)
                .with("u2", u2)
                .with("mid", mid)
                .with("psi_u1", a)
                .with("psi_u2", b)
                .with("psi_mid", m)
                .with("excess", excess)
        };
        if m.is_effectively_infinite() {
            if worst.as_ref().map_or(true, |w| w.0 < f64::INFINITY) {
                worst = Some((f64::INFINITY, witness(ExtReal::PosInf)));
            }
            continue;
        }
        let (a, b, m) = (a.to_f64(), b.to_f64(), m.to_f64());
        let avg = 0.5 * a + 0.5 * b;
        let scale = a.abs().max(b.abs()).max(m.abs());
        let excess = m - avg;
        if excess > cfg.tol_convex * scale {
            let rel = excess / scale;
            if worst.as_ref().map_or(true, |w| w.0 < rel) {
                worst = Some((rel, witness(ExtReal::Finite(excess))));
            }
        }
    }
    match (worst, first_error) {
        (Some((_, w)), _) => Verdict::refuted(w),
        (None, Some(err)) => err,
        (None, None) => Verdict::certified(
            Evidence::new("midpoint inequality holds on all tested pairs")
                .with("tol_convex", cfg.tol_convex)
                .with("grid_points", g.len() as f64)
                .with("random_pairs", cfg.random_pairs as f64),
        ),
    }
}

fn same(a: ExtReal, b: ExtReal, tol: f64) -> bool {
    match (a.is_effectively_infinite(), b.is_effectively_infinite()) {
        (true, true) => true,
        (false, false) => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= tol * x.abs().max(y.abs())
        }
        _ => false,
    }
}

/// `Ψ(t, u) = Ψ(t, -u)` on the grid.
pub fn check_even(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let mut undefined: Option<Verdict> = None;
    for &u in &cfg.u_grid {
        let pos = match psi.eval(t, u) {
            Ok(v) => v,
            Err(e) => return failed("evenness", u, &e),
        };
        match psi.eval(t, -u) {
            Ok(neg) if !same(pos, neg, cfg.tol_convex) => {
                return Verdict::refuted(
                    Evidence::new("psi(u) differs from psi(-u)")
                        .with("u", u)
                        .with("psi_u", pos)
                        .with("psi_neg_u", neg),
                );
            }
            Ok(_) => {}
            Err(e) => {
                undefined.get_or_insert_with(|| {
                    Verdict::inconclusive(
                        Evidence::new(format!("psi undefined at -u, evenness not testable ({e})"))
                            .with("u", -u),
                    )
                });
            }
        }
    }
    undefined.unwrap_or_else(|| {
        Verdict::certified(
            Evidence::new("psi(u) = psi(-u) on the grid").with("tol_convex", cfg.tol_convex),
        )
    })
}

/// `Ψ(t, u) > 0` for every grid `u > 0`. The witness is the largest grid
/// point where this fails.
pub fn check_positive(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let mut witness = None;
    for &u in &cfg.u_grid {
        match psi.eval(t, u) {
            Ok(v) if v <= ExtReal::ZERO => witness = Some((u, v)),
            Ok(_) => {}
            Err(e) => return failed("positivity", u, &e),
        }
    }
    match witness {
        Some((u, v)) => Verdict::refuted(
            Evidence::new("psi(u) <= 0 at a positive u")
                .with("u", u)
                .with("psi_u", v),
        ),
        None => Verdict::certified(Evidence::new("psi(u) > 0 on the positive grid")),
    }
}

/// `|Ψ(t, 0)| ≤ tol_convex`.
pub fn check_zero_at_origin(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    match psi.eval(t, 0.0) {
        Err(e) => failed("value at origin", 0.0, &e),
        Ok(v) if !v.is_effectively_infinite() && v.to_f64().abs() <= cfg.tol_convex => {
            Verdict::certified(
                Evidence::new("psi(0) = 0 within tolerance")
                    .with("psi_0", v)
                    .with("tol", cfg.tol_convex),
            )
        }
        Ok(v) => Verdict::refuted(
            Evidence::new("psi(0) != 0")
                .with("u", 0.0)
                .with("psi_u", v),
        ),
    }
}

/// `Ψ(t, u) = 0` exactly when `u = 0`.
pub fn check_zero_iff_zero(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let origin = check_zero_at_origin(psi, t, cfg);
    if origin.is_refuted() {
        return origin;
    }
    let positive = check_positive(psi, t, cfg);
    match (origin.status, positive.status) {
        (_, Status::Refuted) => positive,
        (Status::Certified, Status::Certified) => Verdict {
            status: Status::Certified,
            evidence: origin.evidence.into_iter().chain(positive.evidence).collect(),
        },
        (Status::Inconclusive, _) => origin,
        _ => positive,
    }
}

/// `Ψ(t, u) / u → 0` as `u → 0⁺`.
pub fn check_ratio_limit_zero(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let rungs = match ladder(psi, t, descending(cfg), false) {
        Ok(r) => r,
        Err((u, e)) => return failed("ratio limit at 0", u, &e),
    };
    let ratios: Vec<ExtReal> = rungs.iter().map(|&(u, v)| ratio(v, u)).collect();
    let (u_last, last) = (rungs[rungs.len() - 1].0, ratios[ratios.len() - 1]);
    let mags: Vec<ExtReal> = ratios.iter().map(|r| r.abs()).collect();
    let final_evidence = |desc: &str| {
        Evidence::new(desc)
            .with("u", u_last)
            .with("ratio", last)
            .with("tol_zero_limit", cfg.tol_zero_limit)
    };
    if !last.is_effectively_infinite()
        && last.to_f64().abs() < cfg.tol_zero_limit
        && tail(&mags).windows(2).all(|w| w[0] >= w[1])
    {
        return Verdict {
            status: Status::Certified,
            evidence: vec![final_evidence("psi(u)/u decreases below tolerance"), ladder_note(cfg)],
        };
    }
    if let Some(level) = stabilized(&ratios) {
        if level.abs() > cfg.tol_zero_limit {
            return Verdict::refuted(
                final_evidence("psi(u)/u stabilizes away from 0").with("limit_estimate", level),
            );
        }
    }
    let diverging = ratios.iter().any(|r| r.is_effectively_infinite())
        || (nondecreasing(tail(&mags)) && last.to_f64().abs() > cfg.big_m);
    if diverging {
        return Verdict::refuted(final_evidence("psi(u)/u diverges as u -> 0"));
    }
    Verdict::inconclusive(final_evidence("psi(u)/u neither vanishes nor stabilizes"))
}

/// Shared shape of the "→ ∞ as u → ∞" checks on a sequence derived from the
/// ascending ladder.
fn limit_inf(what: &str, rungs: &[(f64, ExtReal)], seq: &[ExtReal], cfg: &CheckConfig) -> Verdict {
    let big = ExtReal::Finite(cfg.big_m);
    let hit = seq
        .iter()
        .position(|v| v.is_effectively_infinite() || *v > big);
    if let Some(k) = hit {
        let before = &seq[k.saturating_sub(STABLE_WINDOW)..=k];
        if nondecreasing(before) {
            return Verdict {
                status: Status::Certified,
                evidence: vec![
                    Evidence::new(format!("{what} increases past big_m"))
                        .with("u", rungs[k].0)
                        .with("value", seq[k])
                        .with("big_m", cfg.big_m),
                    ladder_note(cfg),
                ],
            };
        }
    }
    let (u_last, last) = (rungs[rungs.len() - 1].0, seq[seq.len() - 1]);
    let at_end = |desc: String| Evidence::new(desc).with("u", u_last).with("value", last);
    if let Some(level) = stabilized(seq) {
        return Verdict::refuted(at_end(format!("{what} stabilizes")).with("limit_estimate", level));
    }
    if strictly_decreasing(tail(seq)) {
        return Verdict::refuted(
            at_end(format!("{what} strictly decreasing over the last rungs"))
                .with("previous", seq[seq.len() - 2]),
        );
    }
    Verdict::inconclusive(at_end(format!("{what} neither diverges nor stabilizes")))
}

/// `Ψ(t, u) / u → ∞` as `u → ∞`.
pub fn check_ratio_limit_inf(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    match ladder(psi, t, ascending(cfg), true) {
        Ok(rungs) => {
            let ratios: Vec<ExtReal> = rungs.iter().map(|&(u, v)| ratio(v, u)).collect();
            limit_inf("psi(u)/u", &rungs, &ratios, cfg)
        }
        Err((u, e)) => failed("ratio limit at infinity", u, &e),
    }
}

/// `Ψ(t, u) → ∞` as `u → ∞`.
pub fn check_value_limit_inf(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    match ladder(psi, t, ascending(cfg), true) {
        Ok(rungs) => {
            let values: Vec<ExtReal> = rungs.iter().map(|r| r.1).collect();
            limit_inf("psi(u)", &rungs, &values, cfg)
        }
        Err((u, e)) => failed("limit at infinity", u, &e),
    }
}

/// `Ψ(t, 0) = 0` and `Ψ(t, u) → 0` as `u → 0⁺`.
pub fn check_value_limit_zero(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Verdict {
    let origin = check_zero_at_origin(psi, t, cfg);
    if origin.status != Status::Certified {
        return origin;
    }
    let rungs = match ladder(psi, t, descending(cfg), false) {
        Ok(r) => r,
        Err((u, e)) => return failed("limit at 0", u, &e),
    };
    let values: Vec<ExtReal> = rungs.iter().map(|r| r.1).collect();
    let mags: Vec<ExtReal> = values.iter().map(|v| v.abs()).collect();
    let (u_last, last) = (rungs[rungs.len() - 1].0, values[values.len() - 1]);
    let at_end = |desc: &str| {
        Evidence::new(desc)
            .with("u", u_last)
            .with("psi_u", last)
            .with("tol_zero_limit", cfg.tol_zero_limit)
    };
    if !last.is_effectively_infinite()
        && last.to_f64().abs() < cfg.tol_zero_limit
        && tail(&mags).windows(2).all(|w| w[0] >= w[1])
    {
        return Verdict {
            status: Status::Certified,
            evidence: vec![
                origin.evidence[0].clone(),
                at_end("psi(u) decreases to 0 along the ladder"),
                ladder_note(cfg),
            ],
        };
    }
    if let Some(level) = stabilized(&values) {
        if level.abs() > cfg.tol_zero_limit {
            return Verdict::refuted(
                at_end("psi(u) stabilizes away from psi(0)").with("limit_estimate", level),
            );
        }
    }
    if values.iter().any(|v| v.is_effectively_infinite())
        || (nondecreasing(tail(&mags)) && last.to_f64().abs() > cfg.big_m)
    {
        return Verdict::refuted(at_end("psi(u) diverges as u -> 0"));
    }
    Verdict::inconclusive(at_end("psi(u) neither vanishes nor stabilizes"))
}

/// Bisects `[lo, hi]` where `above(hi)` holds and `above(lo)` does not,
/// then returns the decimal with fewest digits inside the final bracket.
fn boundary(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if hi - lo <= BOUNDARY_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    simplest_between(lo, hi)
}

/// The number with the fewest decimal places in `[lo, hi]`.
fn simplest_between(lo: f64, hi: f64) -> f64 {
    for digits in 0..=15 {
        let s = 10f64.powi(digits);
        let x = (lo * s).ceil() / s;
        if x >= lo && x <= hi {
            return x;
        }
    }
    0.5 * (lo + hi)
}

/// `U_Φ = sup{u > 0 : Ψ(t, u) < ∞}`. Only a genuine `+∞` counts; overflow
/// of finite arithmetic does not. Evaluation errors count as finite.
pub fn estimate_u_phi(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> ExtReal {
    let infinite = |u: f64| matches!(psi.eval(t, u), Ok(ExtReal::PosInf));
    match cfg.u_grid.iter().position(|&u| infinite(u)) {
        None => ExtReal::PosInf,
        Some(i) => {
            let lo = if i == 0 { 0.0 } else { cfg.u_grid[i - 1] };
            ExtReal::Finite(boundary(lo, cfg.u_grid[i], infinite))
        }
    }
}

/// `a_Φ = inf{u > 0 : Ψ(t, u) > 0}`; `+∞` when no grid point is positive.
pub fn estimate_a_phi(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> ExtReal {
    let positive = |u: f64| matches!(psi.eval(t, u), Ok(v) if v > ExtReal::ZERO);
    match cfg.u_grid.iter().position(|&u| positive(u)) {
        None => ExtReal::PosInf,
        Some(0) => ExtReal::ZERO,
        Some(i) => ExtReal::Finite(boundary(cfg.u_grid[i - 1], cfg.u_grid[i], positive)),
    }
}

/// Left continuity of `Ψ(t, ·)` at `U`; `U = ∞` is certified by convention.
pub fn check_left_continuity_at(
    psi: &ComposedFunction,
    t: f64,
    big_u: ExtReal,
    cfg: &CheckConfig,
) -> Verdict {
    let u_top = match big_u {
        ExtReal::PosInf => {
            return Verdict::certified(Evidence::new("U is +inf; left continuity holds by convention"))
        }
        ExtReal::Finite(u) => u,
    };
    if u_top <= 0.0 {
        return Verdict::inconclusive(Evidence::new("U is 0; no left neighbourhood").with("U", u_top));
    }
    let at_u = match psi.eval(t, u_top) {
        Ok(v) => v,
        Err(e) => return failed("left continuity", u_top, &e),
    };
    let stop = LEFT_GAP * u_top.max(1.0);
    let gaps = (1..=cfg.max_ladder)
        .map(|k| u_top * cfg.ladder_ratio.powi(-(k as i32)))
        .take_while(|&gap| gap >= stop);
    let rungs = match ladder(psi, t, gaps.map(|gap| u_top - gap), false) {
        Ok(r) if !r.is_empty() => r,
        Ok(_) => return Verdict::inconclusive(Evidence::new("empty left ladder").with("U", u_top)),
        Err((u, e)) => return failed("left continuity", u, &e),
    };
    let (u_last, left) = rungs[rungs.len() - 1];
    let evidence = |desc: &str| {
        Evidence::new(desc)
            .with("U", u_top)
            .with("psi_U", at_u)
            .with("left_limit_estimate", left)
            .with("u_last", u_last)
    };
    let agree = match (left.is_effectively_infinite(), at_u.is_effectively_infinite()) {
        (true, true) => true,
        (false, false) => {
            let (l, v) = (left.to_f64(), at_u.to_f64());
            (l - v).abs() <= cfg.tol_zero_limit * l.abs().max(1.0)
        }
        _ => false,
    };
    if agree {
        Verdict::certified(evidence("left limit matches psi(U)"))
    } else {
        Verdict::refuted(evidence("left limit differs from psi(U)"))
    }
}

/// Outcome of the non-degeneracy check together with the strict reading
/// (`0 < Ψ < ∞` at every grid point).
#[derive(Debug, Clone, PartialEq)]
pub struct Nondegeneracy {
    pub verdict: Verdict,
    pub strict: bool,
}

/// Some grid `u` has `0 < Ψ(t, u) < ∞`, and `Ψ` is not `+∞` on the whole grid.
pub fn check_nondegenerate(psi: &ComposedFunction, t: f64, cfg: &CheckConfig) -> Nondegeneracy {
    let mut witness = None;
    let mut strict = true;
    let mut all_infinite = true;
    let mut error = None;
    for &u in &cfg.u_grid {
        match psi.eval(t, u) {
            Ok(v) => {
                let inside = v > ExtReal::ZERO && !v.is_infinite();
                strict &= inside;
                all_infinite &= v.is_infinite();
                if inside && witness.is_none() {
                    witness = Some((u, v));
                }
            }
            Err(e) => {
                strict = false;
                error.get_or_insert((u, e));
            }
        }
    }
    let verdict = match (witness, error) {
        (Some((u, v)), _) if !all_infinite => Verdict::certified(
            Evidence::new("0 < psi(u) < inf at a grid point")
                .with("u", u)
                .with("psi_u", v)
                .with("strict", if strict { 1.0 } else { 0.0 }),
        ),
        (None, Some((u, e))) => failed("non-degeneracy", u, &e),
        _ => Verdict::refuted(
            Evidence::new("no grid point with 0 < psi(u) < inf")
                .with("u_min", cfg.u_grid[0])
                .with("u_max", cfg.u_grid[cfg.u_grid.len() - 1]),
        ),
    };
    Nondegeneracy { verdict, strict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::compose_sources;

    fn id(phi: &str) -> ComposedFunction {
        compose_sources(phi, "t", "u", None).unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default().with_t_samples(vec![1.0])
    }

    fn ex43() -> ComposedFunction {
        compose_sources(
            "piecewise(u<1, -log(u + abs(t)^(1/p) + 1), inf)",
            "u^p",
            "u",
            Some(2.0),
        )
        .unwrap()
    }

    fn ex52() -> ComposedFunction {
        compose_sources(
            "piecewise(u>1, t*ln(u), 0)",
            "piecewise(u>1, 1, 0)",
            "piecewise(u>1, inf, 0)",
            None,
        )
        .unwrap()
    }

    fn ex42() -> ComposedFunction {
        compose_sources("piecewise(u<1, u-abs(t), u+abs(t)-2)", "u", "u", None).unwrap()
    }

    #[test]
    fn convexity() {
        let c = cfg();
        assert!(check_convex(&id("u^2"), 1.0, &c).is_certified());
        let v = check_convex(&id("u^0.5"), 1.0, &c);
        assert!(v.is_refuted());
        let w = v.witness().unwrap();
        let (u1, u2, mid) = (w.get("u1").unwrap(), w.get("u2").unwrap(), w.get("mid").unwrap());
        let f = |x: ExtReal| x.to_f64().sqrt();
        assert!(f(mid) > 0.5 * (f(u1) + f(u2)));
        assert!(check_convex(&id("t*u^2"), -1.0, &c).is_refuted());
        assert!(check_convex(&ex43(), 0.0, &c).is_certified());
    }

    #[test]
    fn evenness() {
        let c = cfg();
        assert!(check_even(&id("u^2"), 1.0, &c).is_certified());
        let v = check_even(&id("exp(2*u)-1"), 1.0, &c);
        assert!(v.is_refuted());
        assert_eq!(check_even(&id("u*ln(u)"), 1.0, &c).status, Status::Inconclusive);
    }

    #[test]
    fn ratio_limits() {
        let c = cfg();
        assert!(check_ratio_limit_zero(&id("u^2"), 1.0, &c).is_certified());
        let v = check_ratio_limit_zero(&id("exp(u)-1"), 1.0, &c);
        assert!(v.is_refuted());
        let est = v.witness().unwrap().get("limit_estimate").unwrap().to_f64();
        assert!((est - 1.0).abs() < 1e-6);
        assert!(check_ratio_limit_zero(&id("u"), 1.0, &c).is_refuted());

        assert!(check_ratio_limit_inf(&id("u^2"), 1.0, &c).is_certified());
        assert!(check_ratio_limit_inf(&id("u"), 1.0, &c).is_refuted());
        assert!(check_ratio_limit_inf(&id("exp(2*u)-1"), 1.0, &c).is_certified());
    }

    #[test]
    fn value_limits() {
        let c = cfg();
        assert!(check_value_limit_zero(&id("exp(2*u)-1"), 1.0, &c).is_certified());
        let v = check_value_limit_zero(&id("exp(t+u)-1"), 1.0, &c);
        assert!(v.is_refuted());
        let psi0 = v.witness().unwrap().get("psi_u").unwrap().to_f64();
        assert!((psi0 - (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!(check_value_limit_zero(&ex43(), 0.0, &c).is_certified());

        assert!(check_value_limit_inf(&id("u^2"), 1.0, &c).is_certified());
        let v = check_value_limit_inf(&id("1-exp(-u)"), 1.0, &c);
        assert!(v.is_refuted());
        assert!(check_value_limit_inf(&ex52(), 1.0, &c).is_certified());
        assert!(check_value_limit_inf(&id("piecewise(u>1, -ln(u), 0)"), 1.0, &c).is_refuted());
    }

    #[test]
    fn zero_iff_zero() {
        let c = cfg();
        let cosh = compose_sources("cosh(t*exp(u))-1", "u", "0", None).unwrap();
        assert!(check_zero_iff_zero(&cosh, 1.0, &c).is_certified());
        let v = check_zero_iff_zero(&ex42(), 1.0, &c);
        assert!(v.is_refuted());
        assert_eq!(v.witness().unwrap().get("u"), Some(ExtReal::ONE));
        let cube = compose_sources("u^p", "t", "u", Some(3.0)).unwrap();
        assert!(check_zero_iff_zero(&cube, 1.0, &c).is_certified());
    }

    #[test]
    fn thresholds() {
        let c = cfg();
        assert_eq!(estimate_u_phi(&id("u^2"), 1.0, &c), ExtReal::PosInf);
        assert_eq!(estimate_u_phi(&id("exp(exp(u))"), 1.0, &c), ExtReal::PosInf);
        let u = estimate_u_phi(&ex43(), 0.0, &c).to_f64();
        assert!((u - 1.0).abs() <= 1e-9);
        let u = estimate_u_phi(&ex52(), 0.0, &c).to_f64();
        assert!((u - 1.0).abs() <= 1e-9);

        assert_eq!(estimate_a_phi(&id("u^2"), 1.0, &c), ExtReal::ZERO);
        assert!((estimate_a_phi(&ex42(), 0.0, &c).to_f64() - 1.0).abs() <= 1e-9);
        assert!((estimate_a_phi(&ex52(), 0.0, &c).to_f64() - 1.0).abs() <= 1e-9);
        assert_eq!(estimate_a_phi(&id("0*u"), 1.0, &c), ExtReal::PosInf);
    }

    #[test]
    fn left_continuity() {
        let c = cfg();
        assert!(check_left_continuity_at(&id("u^2"), 1.0, ExtReal::PosInf, &c).is_certified());
        let psi = ex43();
        let v = check_left_continuity_at(&psi, 0.0, estimate_u_phi(&psi, 0.0, &c), &c);
        assert!(v.is_refuted());
        let l = v.witness().unwrap().get("left_limit_estimate").unwrap().to_f64();
        assert!((l + 3f64.ln()).abs() < 1e-4);
        let psi = ex52();
        let v = check_left_continuity_at(&psi, 0.0, estimate_u_phi(&psi, 0.0, &c), &c);
        assert!(v.is_certified());
    }

    #[test]
    fn nondegeneracy() {
        let c = cfg();
        let sq = check_nondegenerate(&id("u^2"), 1.0, &c);
        assert!(sq.verdict.is_certified() && sq.strict);
        let e42 = check_nondegenerate(&ex42(), 0.0, &c);
        assert!(e42.verdict.is_certified() && !e42.strict);
        assert!(check_nondegenerate(&id("0*u"), 1.0, &c).verdict.is_refuted());
        assert!(check_nondegenerate(&id("inf + u"), 1.0, &c).verdict.is_refuted());
    }
}
