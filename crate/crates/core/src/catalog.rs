//! Worked-example fixtures with their claimed classifications, plus the
//! implication-lattice and closure suites built on them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    classify, e_scale, e_sum, phi_scale, phi_sum, Check, CheckConfig, ClassificationReport,
    Evidence, FunctionClass, Status,
};
use crate::exprlang::{parse, ComposedFunction, Expr, MapExpr};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{name}` is malformed: {source}")]
    Malformed {
        name: String,
        #[source]
        source: Box<crate::Error>,
    },
}

/// Which map a claim is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// The fixture's own `E`.
    Given,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub class: FunctionClass,
    pub map: MapKind,
    pub expected: Status,
}

/// A claim the checkers are known to contradict, and the condition that
/// should carry the refutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownDispute {
    pub class: FunctionClass,
    pub condition: Check,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub phi: &'static str,
    pub e_t: &'static str,
    pub e_u: &'static str,
    pub p: Option<f64>,
    pub t_samples: Vec<f64>,
    /// Which `t` values are left out, and why.
    pub sampling_note: &'static str,
    pub claims: Vec<Claim>,
    pub known_dispute: Option<KnownDispute>,
}

impl Fixture {
    pub fn compose(&self) -> Result<ComposedFunction, CatalogError> {
        crate::exprlang::compose_sources(self.phi, self.e_t, self.e_u, self.p)
            .map_err(|e| self.malformed(e))
    }

    pub fn compose_identity(&self) -> Result<ComposedFunction, CatalogError> {
        crate::exprlang::compose_sources(self.phi, "t", "u", self.p).map_err(|e| self.malformed(e))
    }

    pub fn map(&self) -> Result<MapExpr, CatalogError> {
        Ok(self.compose()?.map)
    }

    pub fn config(&self) -> CheckConfig {
        CheckConfig::default().with_t_samples(self.t_samples.clone())
    }

    fn malformed(&self, e: crate::Error) -> CatalogError {
        CatalogError::Malformed {
            name: self.name.to_string(),
            source: Box::new(e),
        }
    }
}

fn claim(class: FunctionClass, map: MapKind, expected: Status) -> Claim {
    Claim {
        class,
        map,
        expected,
    }
}

/// "Is E-X but is not X": certified with `E`, refuted with the identity.
fn e_but_not_plain(class: FunctionClass) -> Vec<Claim> {
    vec![
        claim(class, MapKind::Given, Status::Certified),
        claim(class, MapKind::Identity, Status::Refuted),
    ]
}

/// "Is E-X but not E-Y", both with the given `E`.
fn separates(holds: FunctionClass, fails: FunctionClass) -> Vec<Claim> {
    vec![
        claim(holds, MapKind::Given, Status::Certified),
        claim(fails, MapKind::Given, Status::Refuted),
    ]
}

/// All fixtures, in a fixed order.
pub fn list_fixtures() -> Vec<Fixture> {
    use FunctionClass::*;
    let fx = |name, phi, e_t, e_u, p, t: &[f64], note, claims| Fixture {
        name,
        phi,
        e_t,
        e_u,
        p,
        t_samples: t.to_vec(),
        sampling_note: note,
        claims,
        known_dispute: None,
    };
    vec![
        fx(
            "ex2.1.1",
            "t*u^2",
            "abs(t)",
            "u",
            None,
            &[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0],
            "t = 0 excluded (measure zero; psi vanishes identically there)",
            e_but_not_plain(EN),
        ),
        Fixture {
            known_dispute: Some(KnownDispute {
                class: EN,
                condition: Check::RatioLimitZero,
                note: "psi(t,u) = (1-t) ln(u^2)^2 + t u^2 has psi/u -> inf as u -> 0 for t != 1",
            }),
            ..fx(
                "ex2.1.2",
                "(1-t)*u^2 + t*exp(u)",
                "t",
                "ln(u^2)",
                None,
                &[0.25, 0.5, 0.75],
                "t in (0, 1); t = 1 would make psi = u^2",
                e_but_not_plain(EN),
            )
        },
        fx(
            "ex2.2.1",
            "exp(t+u)-1",
            "u",
            "u",
            None,
            &[-1.0, 0.5, 1.0, 2.0],
            "t = 0 excluded: with the identity map phi(0, u) = e^u - 1 is Young",
            e_but_not_plain(EYoung),
        ),
        Fixture {
            known_dispute: Some(KnownDispute {
                class: EYoung,
                condition: Check::ValueLimitInf,
                note: "psi = -|t| ln u for u > 1 decreases to -inf",
            }),
            ..fx(
                "ex2.2.2",
                "piecewise(u>1, t*ln(u), 0)",
                "-abs(t)",
                "u",
                None,
                &[0.5, 1.0, 2.0],
                "complex t enters only through |t|; samples are values of |t|",
                e_but_not_plain(EYoung),
            )
        },
        fx(
            "ex2.3.1",
            "exp(u^t)-1",
            "abs(t)",
            "u",
            None,
            &[-2.0, -1.0, 1.0, 2.0],
            "|t| >= 1 only; for 0 < |t| < 1 psi is not convex near 0",
            e_but_not_plain(EStrongYoung),
        ),
        fx(
            "ex2.3.2",
            "cosh(t*exp(u))-1",
            "u",
            "0",
            None,
            &[0.5, 1.0, 2.0],
            "t = 0 excluded: with the identity map phi(0, u) = 0",
            e_but_not_plain(EStrongYoung),
        ),
        fx(
            "ex2.4.1",
            "-t+u",
            "0",
            "u^p",
            Some(2.0),
            &[-1.0, 0.5, 1.0, 2.0],
            "t = 0 excluded: with the identity map phi(0, u) = u is Orlicz",
            e_but_not_plain(EOrlicz),
        ),
        fx(
            "ex2.4.2",
            "t + u^(p/(1-t))",
            "0",
            "u",
            Some(2.0),
            &[-1.0, -0.5, 0.5],
            "t = 0 excluded (phi(0, u) = u^p); t = 1 is a pole",
            e_but_not_plain(EOrlicz),
        ),
        fx(
            "ex4.1",
            "exp(u^t)-1",
            "1",
            "u",
            None,
            &[0.5, 1.0, 2.0],
            "psi does not depend on t",
            separates(EStrongYoung, EN),
        ),
        fx(
            "ex4.2",
            "piecewise(u<1, u-abs(t), u+abs(t)-2)",
            "u",
            "u",
            None,
            &[0.0, 1.0],
            "psi does not depend on t",
            separates(EOrlicz, EStrongYoung),
        ),
        fx(
            "ex4.3",
            "piecewise(u<1, -log(u + abs(t)^(1/p) + 1), inf)",
            "u^p",
            "u",
            Some(2.0),
            &[0.5, 1.0],
            "psi does not depend on t",
            separates(EYoung, EOrlicz),
        ),
        fx(
            "ex5.1",
            "exp(t+u)-1",
            "u",
            "u",
            None,
            &[0.0, 1.0],
            "psi does not depend on t",
            vec![claim(EYoung, MapKind::Given, Status::Certified)],
        ),
        fx(
            "ex5.2",
            "piecewise(u>1, t*ln(u), 0)",
            "piecewise(u>1, 1, 0)",
            "piecewise(u>1, inf, 0)",
            None,
            &[0.0, 1.0],
            "psi does not depend on t",
            vec![claim(EYoung, MapKind::Given, Status::Certified)],
        ),
    ]
}

pub fn fixture(name: &str) -> Result<Fixture, CatalogError> {
    list_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| CatalogError::UnknownFixture(name.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureStatus {
    Confirmed,
    Disputed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimOutcome {
    pub class: FunctionClass,
    pub map: MapKind,
    pub expected: Status,
    pub observed: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisputeOutcome {
    pub class: FunctionClass,
    pub condition: Check,
    pub note: &'static str,
    /// The claimed class was refuted through `condition`.
    pub reproduced: bool,
    pub t: Option<f64>,
    pub witness: Option<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub status: FixtureStatus,
    pub claims: Vec<ClaimOutcome>,
    pub dispute: Option<DisputeOutcome>,
    pub observed: ClassificationReport,
    pub observed_identity: ClassificationReport,
}

impl FixtureReport {
    /// A known dispute that was reproduced, or a confirmation when none was
    /// expected.
    pub fn as_expected(&self, fixture: &Fixture) -> bool {
        match (&fixture.known_dispute, &self.dispute) {
            (None, _) => self.status == FixtureStatus::Confirmed,
            (Some(_), Some(d)) => self.status == FixtureStatus::Disputed && d.reproduced,
            (Some(_), None) => false,
        }
    }
}

fn classify_fixture(f: &Fixture, psi: &ComposedFunction) -> Result<ClassificationReport, CatalogError> {
    classify(psi, &f.config()).map_err(|e| CatalogError::Malformed {
        name: f.name.to_string(),
        source: Box::new(crate::Error::Config(e)),
    })
}

pub fn run_fixture_def(f: &Fixture) -> Result<FixtureReport, CatalogError> {
    let (given, identity) = rayon::join(
        || classify_fixture(f, &f.compose()?),
        || classify_fixture(f, &f.compose_identity()?),
    );
    let (observed, observed_identity) = (given?, identity?);
    let claims: Vec<ClaimOutcome> = f
        .claims
        .iter()
        .map(|c| {
            let report = match c.map {
                MapKind::Given => &observed,
                MapKind::Identity => &observed_identity,
            };
            ClaimOutcome {
                class: c.class,
                map: c.map,
                expected: c.expected,
                observed: report.status(c.class),
            }
        })
        .collect();
    let contradicted = claims
        .iter()
        .any(|c| c.observed != c.expected && c.observed != Status::Inconclusive);
    let open = claims.iter().any(|c| c.observed == Status::Inconclusive);
    let status = if contradicted {
        FixtureStatus::Disputed
    } else if open {
        FixtureStatus::Inconclusive
    } else {
        FixtureStatus::Confirmed
    };
    let dispute = f.known_dispute.as_ref().map(|d| {
        let refuted = observed.status(d.class) == Status::Refuted;
        let hit = observed.find(d.condition, Status::Refuted);
        DisputeOutcome {
            class: d.class,
            condition: d.condition,
            note: d.note,
            reproduced: refuted && hit.is_some(),
            t: hit.map(|h| h.0),
            witness: hit.and_then(|h| h.1.witness().cloned()),
        }
    });
    Ok(FixtureReport {
        name: f.name.to_string(),
        status,
        claims,
        dispute,
        observed,
        observed_identity,
    })
}

/// Classifies a fixture with its own map and with the identity, and
/// compares against its claims.
pub fn run_fixture(name: &str) -> Result<FixtureReport, CatalogError> {
    run_fixture_def(&fixture(name)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogSummary {
    pub confirmed: Vec<String>,
    pub disputed: Vec<String>,
    pub inconclusive: Vec<String>,
    /// Fixtures whose outcome differs from what the catalog expects.
    pub unexpected: Vec<String>,
    pub chain_consistent: bool,
    pub separations: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogReport {
    pub fixtures: Vec<FixtureReport>,
    pub summary: CatalogSummary,
}

impl CatalogReport {
    /// 0 when every outcome is as expected, 1 on an unexpected dispute,
    /// 2 when something stayed inconclusive.
    pub fn exit_code(&self) -> i32 {
        if !self.summary.inconclusive.is_empty() {
            2
        } else if !self.summary.unexpected.is_empty() {
            1
        } else {
            0
        }
    }
}

/// Label for "`weaker` does not imply `stronger`".
pub fn separation_label(stronger: FunctionClass, weaker: FunctionClass) -> String {
    format!("{weaker} =/=> {stronger}")
}

fn summarize(defs: &[Fixture], reports: &[FixtureReport]) -> CatalogSummary {
    let names = |s: FixtureStatus| -> Vec<String> {
        reports
            .iter()
            .filter(|r| r.status == s)
            .map(|r| r.name.clone())
            .collect()
    };
    let unexpected = defs
        .iter()
        .zip(reports)
        .filter(|(f, r)| r.status != FixtureStatus::Inconclusive && !r.as_expected(f))
        .map(|(_, r)| r.name.clone())
        .collect();
    let chain_consistent = reports
        .iter()
        .filter(|r| r.status == FixtureStatus::Confirmed)
        .all(|r| r.observed.chain_consistent && r.observed_identity.chain_consistent);

    let mut separations = BTreeMap::new();
    for pair in FunctionClass::CHAIN.windows(2) {
        let (stronger, weaker) = (pair[0], pair[1]);
        let witness = defs.iter().zip(reports).find(|(f, r)| {
            let claims = |class, expected| {
                f.claims
                    .iter()
                    .any(|c| c.map == MapKind::Given && c.class == class && c.expected == expected)
            };
            r.status == FixtureStatus::Confirmed
                && claims(stronger, Status::Refuted)
                && claims(weaker, Status::Certified)
        });
        if let Some((_, r)) = witness {
            separations.insert(separation_label(stronger, weaker), r.name.clone());
        }
    }
    CatalogSummary {
        confirmed: names(FixtureStatus::Confirmed),
        disputed: names(FixtureStatus::Disputed),
        inconclusive: names(FixtureStatus::Inconclusive),
        unexpected,
        chain_consistent,
        separations,
    }
}

/// Every fixture, classified in parallel and reported in catalog order.
pub fn run_all() -> Result<CatalogReport, CatalogError> {
    let defs = list_fixtures();
    let fixtures = defs
        .par_iter()
        .map(run_fixture_def)
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(&defs, &fixtures);
    Ok(CatalogReport { fixtures, summary })
}

/// Random convex `Σ a_k u^k` with nonnegative coefficients, `k ≤ 4`; the
/// constant term is zero half the time.
pub fn generated_polynomials(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut terms = Vec::new();
            if rng.gen_bool(0.5) {
                terms.push(format!("{:.3}", rng.gen_range(0.0..2.0)));
            }
            for k in 1..=4 {
                if rng.gen_bool(0.6) {
                    terms.push(format!("{:.3}*u^{k}", rng.gen_range(0.0..3.0)));
                }
            }
            if terms.is_empty() {
                terms.push("u^2".to_string());
            }
            terms.join(" + ")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureCase {
    pub description: String,
    pub class: FunctionClass,
    pub expected: Status,
    pub observed: Status,
}

impl ClosureCase {
    pub fn holds(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderRung {
    pub n: u32,
    pub classes: BTreeMap<FunctionClass, Status>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderCase {
    pub description: String,
    pub limit: BTreeMap<FunctionClass, Status>,
    pub rungs: Vec<LadderRung>,
    /// Smallest `n` from which every rung classifies like the limit.
    pub stable_from: Option<u32>,
    pub expected_stable: bool,
}

impl LadderCase {
    pub fn holds(&self) -> bool {
        self.stable_from.is_some() == self.expected_stable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    /// `Φ₁ + Φ₂` and `cΦ`, `c > 0`, with a shared map.
    pub phi_closure: Vec<ClosureCase>,
    /// `E₁ + E₂` and `cE` with `Φ = u`.
    pub map_closure: Vec<ClosureCase>,
    /// `c = 0` scalings; positivity is lost.
    pub zero_scaling: Vec<ClosureCase>,
    pub ladders: Vec<LadderCase>,
    pub all_hold: bool,
}

pub const LADDER_STEPS: [u32; 4] = [1, 10, 100, 1000];
pub const SCALINGS: [f64; 3] = [0.5, 1.0, 2.0];

/// A `Φ` with a map and samples, for the closure suite.
#[derive(Debug, Clone)]
struct Member {
    label: String,
    phi: Expr,
    map: MapExpr,
    p: Option<f64>,
    t_samples: Vec<f64>,
}

impl Member {
    fn from_fixture(f: &Fixture) -> Member {
        Member {
            label: f.name.to_string(),
            phi: parse(f.phi).expect("fixture parses"),
            map: f.map().expect("fixture composes"),
            p: f.p,
            t_samples: f.t_samples.clone(),
        }
    }

    fn canonical(phi: &str) -> Member {
        Member {
            label: phi.to_string(),
            phi: parse(phi).expect("canonical source parses"),
            map: MapExpr::identity(),
            p: None,
            t_samples: vec![1.0],
        }
    }

    fn statuses(&self, phi: &Expr, map: &MapExpr, t: &[f64]) -> BTreeMap<FunctionClass, Status> {
        let psi = ComposedFunction::new(phi.clone(), map.clone(), self.p).expect("p bound");
        let report = classify(&psi, &CheckConfig::default().with_t_samples(t.to_vec()))
            .expect("valid config");
        report.classes.iter().map(|(c, v)| (*c, v.status)).collect()
    }

    fn own(&self) -> BTreeMap<FunctionClass, Status> {
        self.statuses(&self.phi, &self.map, &self.t_samples)
    }
}

fn certified(s: &BTreeMap<FunctionClass, Status>) -> Vec<FunctionClass> {
    s.iter()
        .filter(|(_, v)| **v == Status::Certified)
        .map(|(c, _)| *c)
        .collect()
}

fn fixture_member(name: &str) -> Member {
    Member::from_fixture(&fixture(name).expect("known fixture"))
}

fn common_samples(a: &Member, b: &Member) -> Vec<f64> {
    a.t_samples
        .iter()
        .copied()
        .filter(|t| b.t_samples.contains(t))
        .collect()
}

fn phi_group_cases(group: &[Member]) -> (Vec<ClosureCase>, Vec<ClosureCase>) {
    let own: Vec<_> = group.iter().map(Member::own).collect();
    let mut cases = Vec::new();
    let mut zero = Vec::new();
    for i in 0..group.len() {
        for j in i + 1..group.len() {
            let (a, b) = (&group[i], &group[j]);
            let t = common_samples(a, b);
            let both: Vec<_> = certified(&own[i])
                .into_iter()
                .filter(|c| own[j][c] == Status::Certified)
                .collect();
            if both.is_empty() || t.is_empty() {
                continue;
            }
            let sum = a.statuses(&phi_sum(&a.phi, &b.phi), &a.map, &t);
            for class in both {
                cases.push(ClosureCase {
                    description: format!("{} + {} with E = {}", a.label, b.label, a.map),
                    class,
                    expected: Status::Certified,
                    observed: sum[&class],
                });
            }
        }
    }
    for (m, s) in group.iter().zip(&own) {
        for c in SCALINGS {
            let scaled = m.statuses(&phi_scale(&m.phi, c), &m.map, &m.t_samples);
            for class in certified(s) {
                cases.push(ClosureCase {
                    description: format!("{c} * {} with E = {}", m.label, m.map),
                    class,
                    expected: Status::Certified,
                    observed: scaled[&class],
                });
            }
        }
        let scaled = m.statuses(&phi_scale(&m.phi, 0.0), &m.map, &m.t_samples);
        for class in [FunctionClass::EN, FunctionClass::EStrongYoung] {
            zero.push(ClosureCase {
                description: format!("0 * {} with E = {}", m.label, m.map),
                class,
                expected: Status::Refuted,
                observed: scaled[&class],
            });
        }
    }
    (cases, zero)
}

fn map_cases() -> Vec<ClosureCase> {
    let maps: Vec<MapExpr> = ["u^2", "u^4", "cosh(u)-1", "u"]
        .iter()
        .map(|e_u| MapExpr::parse("t", e_u).expect("map parses"))
        .collect();
    let linear = Member::canonical("u");
    let own: Vec<_> = maps
        .iter()
        .map(|m| linear.statuses(&linear.phi, m, &linear.t_samples))
        .collect();
    let mut cases = Vec::new();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            let sum = linear.statuses(&linear.phi, &e_sum(&maps[i], &maps[j]), &linear.t_samples);
            for class in certified(&own[i]) {
                if own[j][&class] == Status::Certified {
                    cases.push(ClosureCase {
                        description: format!("u with E = {} + {}", maps[i], maps[j]),
                        class,
                        expected: Status::Certified,
                        observed: sum[&class],
                    });
                }
            }
        }
        for c in SCALINGS {
            let scaled = linear.statuses(&linear.phi, &e_scale(&maps[i], c), &linear.t_samples);
            for class in certified(&own[i]) {
                cases.push(ClosureCase {
                    description: format!("u with E = {c} * {}", maps[i]),
                    class,
                    expected: Status::Certified,
                    observed: scaled[&class],
                });
            }
        }
    }
    cases
}

#[derive(Debug, Clone, Copy)]
enum LadderKind {
    /// `Φ_n = Φ + u²/n`.
    Phi,
    /// `E_n = E + id/n`.
    Map,
}

fn ladder(m: &Member, kind: LadderKind, expected_stable: bool) -> LadderCase {
    let limit = m.own();
    let rungs: Vec<LadderRung> = LADDER_STEPS
        .iter()
        .map(|&n| {
            let inv = 1.0 / n as f64;
            let classes = match kind {
                LadderKind::Phi => {
                    let bump = phi_scale(&parse("u^2").expect("parses"), inv);
                    m.statuses(&phi_sum(&m.phi, &bump), &m.map, &m.t_samples)
                }
                LadderKind::Map => {
                    let map = e_sum(&m.map, &e_scale(&MapExpr::identity(), inv));
                    m.statuses(&m.phi, &map, &m.t_samples)
                }
            };
            LadderRung { n, classes }
        })
        .collect();
    let stable_from = rungs
        .iter()
        .rposition(|r| r.classes != limit)
        .map_or(Some(LADDER_STEPS[0]), |i| rungs.get(i + 1).map(|r| r.n));
    let description = match kind {
        LadderKind::Phi => format!("phi_n = phi + u^2/n for {} with E = {}", m.label, m.map),
        LadderKind::Map => format!("E_n = {} + id/n for {}", m.map, m.label),
    };
    LadderCase {
        description,
        limit,
        rungs,
        stable_from,
        expected_stable,
    }
}

/// Sums and positive scalings within same-map groups, map sums and scalings
/// under a linear `Φ`, the `c = 0` exception, and limit ladders.
pub fn run_closure_suite() -> ClosureReport {
    let canonical: Vec<Member> = ["u^2", "u^4", "cosh(u)-1", "exp(u^2)-1"]
        .iter()
        .map(|s| Member::canonical(s))
        .collect();
    let groups: Vec<Vec<Member>> = vec![
        canonical,
        ["ex2.2.1", "ex5.1", "ex4.2"].iter().map(|n| fixture_member(n)).collect(),
        ["ex2.1.1", "ex2.3.1"].iter().map(|n| fixture_member(n)).collect(),
    ];
    let (phi_cases, zero): (Vec<_>, Vec<_>) = groups.par_iter().map(|g| phi_group_cases(g)).unzip();

    let u2 = || Member::canonical("u^2");
    let u4 = || Member::canonical("u^4");
    let ladder_specs: Vec<(Member, LadderKind, bool)> = vec![
        (u2(), LadderKind::Phi, true),
        (u4(), LadderKind::Phi, true),
        (fixture_member("ex2.1.1"), LadderKind::Phi, true),
        (fixture_member("ex2.4.1"), LadderKind::Phi, true),
        (fixture_member("ex4.1"), LadderKind::Phi, true),
        (fixture_member("ex4.3"), LadderKind::Phi, true),
        (fixture_member("ex5.1"), LadderKind::Phi, true),
        (fixture_member("ex5.2"), LadderKind::Phi, true),
        // Every phi_n is strictly positive away from 0; the limit is not.
        (fixture_member("ex4.2"), LadderKind::Phi, false),
        (u2(), LadderKind::Map, true),
        (u4(), LadderKind::Map, true),
        (Member::canonical("cosh(u)-1"), LadderKind::Map, true),
        (fixture_member("ex2.1.1"), LadderKind::Map, true),
        (fixture_member("ex5.2"), LadderKind::Map, true),
        // psi_n(t, 0) = e^{t/n} - 1 is nonzero for every n.
        (fixture_member("ex5.1"), LadderKind::Map, false),
    ];
    let ladders: Vec<LadderCase> = ladder_specs
        .par_iter()
        .map(|(m, kind, stable)| ladder(m, *kind, *stable))
        .collect();

    let phi_closure: Vec<ClosureCase> = phi_cases.into_iter().flatten().collect();
    let zero_scaling: Vec<ClosureCase> = zero.into_iter().flatten().collect();
    let map_closure = map_cases();
    let all_hold = phi_closure.iter().all(ClosureCase::holds)
        && map_closure.iter().all(ClosureCase::holds)
        && zero_scaling.iter().all(ClosureCase::holds)
        && ladders.iter().all(LadderCase::holds);
    ClosureReport {
        phi_closure,
        map_closure,
        zero_scaling,
        ladders,
        all_hold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Closed = fn(f64, f64) -> f64;

    /// Hand-composed `Ψ` per fixture.
    fn closed_form(name: &str) -> Closed {
        match name {
            "ex2.1.1" => |t, u| t.abs() * u * u,
            "ex2.1.2" => |t, u| (1.0 - t) * (u * u).ln().powi(2) + t * (u * u).ln().exp(),
            "ex2.2.1" | "ex5.1" => |_, u| (2.0 * u).exp_m1(),
            "ex2.2.2" => |t, u| if u > 1.0 { -t.abs() * u.ln() } else { 0.0 },
            "ex2.3.1" => |t, u| u.powf(t.abs()).exp_m1(),
            "ex2.3.2" => |_, u| u.cosh() - 1.0,
            "ex2.4.1" => |_, u| u * u,
            "ex2.4.2" => |_, u| u * u,
            "ex4.1" => |_, u| u.exp_m1(),
            "ex4.2" => |_, u| if u < 1.0 { 0.0 } else { 2.0 * u - 2.0 },
            "ex4.3" => |_, u| if u < 1.0 { -(2.0 * u).ln_1p() } else { f64::INFINITY },
            "ex5.2" => |_, u| if u > 1.0 { f64::INFINITY } else { 0.0 },
            _ => unreachable!(),
        }
    }

    #[test]
    fn fixtures_match_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in list_fixtures() {
            let psi = f.compose().unwrap();
            let closed = closed_form(f.name);
            for _ in 0..100 {
                let t = f.t_samples[rng.gen_range(0..f.t_samples.len())];
                let u = rng.gen_range(0.01..3.0);
                let got = psi.eval(t, u).unwrap().to_f64();
                let want = closed(t, u);
                if want.is_infinite() {
                    assert!(got.is_infinite(), "{} at ({t}, {u})", f.name);
                } else {
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs().max(1e-300),
                        "{} at ({t}, {u}): {got} vs {want}",
                        f.name
                    );
                }
            }
        }
    }

    #[test]
    fn catalog_shape() {
        let all = list_fixtures();
        assert_eq!(all.len(), 13);
        let ex221 = fixture("ex2.2.1").unwrap();
        assert_eq!(ex221.claims, e_but_not_plain(FunctionClass::EYoung));
        let ex42 = fixture("ex4.2").unwrap();
        assert_eq!(
            ex42.claims,
            separates(FunctionClass::EOrlicz, FunctionClass::EStrongYoung)
        );
        assert!(fixture("ex2.1.2").unwrap().known_dispute.is_some());
        assert!(matches!(fixture("nope"), Err(CatalogError::UnknownFixture(_))));
        for f in all {
            f.compose().unwrap();
            f.compose_identity().unwrap();
            assert!(f.config().validate().is_ok());
        }
    }

    #[test]
    fn ex212_dispute_oracle() {
        let psi = fixture("ex2.1.2").unwrap().compose().unwrap();
        let v = psi.eval(0.5, 1e-8).unwrap().to_f64();
        let want = 0.5 * (1e-16f64).ln().powi(2) + 0.5e-16;
        assert!((v - want).abs() < 1e-9 * want);
        assert!(v / 1e-8 > 1e10);
    }

    #[test]
    fn single_fixtures() {
        assert_eq!(run_fixture("ex2.2.1").unwrap().status, FixtureStatus::Confirmed);
        let r = run_fixture("ex2.1.2").unwrap();
        assert_eq!(r.status, FixtureStatus::Disputed);
        assert!(r.dispute.unwrap().reproduced);
        let r = run_fixture("ex4.1").unwrap();
        assert_eq!(r.status, FixtureStatus::Confirmed);
        assert_eq!(r.observed.status(FunctionClass::EN), Status::Refuted);
    }

    #[test]
    fn generated_polynomials_parse() {
        let polys = generated_polynomials(20, 3);
        assert_eq!(polys, generated_polynomials(20, 3));
        for p in polys {
            parse(&p).unwrap();
        }
    }
}
