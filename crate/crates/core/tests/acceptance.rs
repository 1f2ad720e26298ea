//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use eorlicz::catalog::{self, FixtureStatus};
use eorlicz::classify::{classify, CheckConfig, FunctionClass};
use eorlicz::exprlang::{compose_sources, ComposedFunction};
use eorlicz::measure::{GridFunction, MeasureSpace, QuadratureRule};
use eorlicz::norms::{self, DEFAULT_TOL};
use eorlicz::sobolev;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("{what} took {elapsed:?}, limit {limit:?}"),
    )
}

fn fixture_reproduction() -> Outcome {
    let start = Instant::now();
    let report = catalog::run_all().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let confirmed = [
        "ex2.1.1", "ex2.2.1", "ex2.3.1", "ex2.3.2", "ex2.4.1", "ex2.4.2", "ex4.1", "ex4.2", "ex4.3",
        "ex5.1", "ex5.2",
    ];
    for name in confirmed {
        let r = report
            .fixtures
            .iter()
            .find(|f| f.name == name)
            .ok_or(format!("{name} missing"))?;
        ensure(r.status == FixtureStatus::Confirmed, format!("{name} is {:?}", r.status))?;
        for c in &r.claims {
            ensure(
                c.observed == c.expected,
                format!("{name}: {} ({:?}) observed {}", c.class, c.map, c.observed),
            )?;
        }
    }
    for name in ["ex2.1.2", "ex2.2.2"] {
        let r = report.fixtures.iter().find(|f| f.name == name).unwrap();
        ensure(r.status == FixtureStatus::Disputed, format!("{name} is {:?}", r.status))?;
        let d = r.dispute.as_ref().ok_or(format!("{name} has no dispute record"))?;
        ensure(
            d.reproduced && d.witness.is_some(),
            format!("{name}: dispute not reproduced"),
        )?;
    }
    ensure(report.summary.unexpected.is_empty(), "unexpected outcomes")?;
    ensure(report.exit_code() == 0, "catalog exit code is nonzero")?;
    within(elapsed, Duration::from_secs(30), "run_all")?;
    Ok(format!(
        "{} confirmed, disputed {:?}, {elapsed:.2?}",
        report.summary.confirmed.len(),
        report.summary.disputed
    ))
}

fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> (MeasureSpace, usize) {
    let n = rng.gen_range(1..=max_atoms);
    let atoms: Vec<(f64, f64)> = (0..n)
        .map(|i| (i as f64, rng.gen_range(0.01..2.0)))
        .collect();
    (MeasureSpace::discrete(atoms).unwrap(), n)
}

fn random_f(rng: &mut ChaCha8Rng, n: usize) -> GridFunction {
    GridFunction::new((0..n).map(|_| rng.gen_range(0.0..4.0)).collect()).unwrap()
}

fn power(p: f64) -> ComposedFunction {
    compose_sources("u^p", "t", "u", Some(p)).unwrap()
}

fn norm(psi: &ComposedFunction, m: &MeasureSpace, f: &GridFunction) -> Result<f64, String> {
    norms::luxemburg_norm(psi, m, f, DEFAULT_TOL)
        .map(|r| r.value.to_f64())
        .map_err(|e| e.to_string())
}

fn lp_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut worst: f64 = 0.0;
    for p in [1.0, 2.0, 3.0] {
        let psi = power(p);
        for _ in 0..50 {
            let (m, n) = random_measure(&mut rng, 32);
            let f = random_f(&mut rng, n);
            let lp = norms::lp_norm(p, &m, &f).map_err(|e| e.to_string())?;
            let lux = norm(&psi, &m, &f)?;
            let rel = if lp == 0.0 { lux } else { (lux - lp).abs() / lp };
            worst = worst.max(rel);
        }
    }
    ensure(worst <= 1e-8, format!("worst relative error {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(10), "Lp oracle")?;
    Ok(format!("150 cases, worst relative error {worst:.1e}, {:.2?}", start.elapsed()))
}

fn lattice() -> Outcome {
    let report = catalog::run_all().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for f in report
        .fixtures
        .iter()
        .filter(|f| f.status == FixtureStatus::Confirmed)
    {
        ensure(
            f.observed.chain_consistent && f.observed_identity.chain_consistent,
            format!("{} breaks the chain", f.name),
        )?;
        checked += 2;
    }
    for src in catalog::generated_polynomials(100, 4) {
        let psi = compose_sources(&src, "t", "u", None).map_err(|e| e.to_string())?;
        let r = classify(&psi, &CheckConfig::default().with_t_samples(vec![1.0]))
            .map_err(|e| e.to_string())?;
        ensure(r.chain_consistent, format!("{src} breaks the chain: {:?}", r.chain_violations))?;
        checked += 1;
    }
    let sep = &report.summary.separations;
    let expect = [
        (FunctionClass::EN, FunctionClass::EStrongYoung, "ex4.1"),
        (FunctionClass::EStrongYoung, FunctionClass::EOrlicz, "ex4.2"),
        (FunctionClass::EOrlicz, FunctionClass::EYoung, "ex4.3"),
    ];
    for (stronger, weaker, name) in expect {
        let label = catalog::separation_label(stronger, weaker);
        ensure(
            sep.get(&label).map(String::as_str) == Some(name),
            format!("{label}: expected {name}, got {:?}", sep.get(&label)),
        )?;
    }
    Ok(format!("{checked} reports chain-consistent; separations {sep:?}"))
}

fn closure() -> Outcome {
    let r = catalog::run_closure_suite();
    let bad: Vec<String> = r
        .phi_closure
        .iter()
        .chain(&r.map_closure)
        .chain(&r.zero_scaling)
        .filter(|c| !c.holds())
        .map(|c| format!("{} [{}]: {}", c.description, c.class, c.observed))
        .chain(
            r.ladders
                .iter()
                .filter(|l| !l.holds())
                .map(|l| format!("{}: stable_from {:?}", l.description, l.stable_from)),
        )
        .collect();
    ensure(bad.is_empty(), bad.join("; "))?;
    ensure(!r.zero_scaling.is_empty(), "no c = 0 exception recorded")?;
    let stable = r.ladders.iter().filter(|l| l.expected_stable).count();
    Ok(format!(
        "{} sum/scale cases, {} map cases, {} stable ladders, {} recorded exceptions",
        r.phi_closure.len(),
        r.map_closure.len(),
        stable,
        r.zero_scaling.len() + r.ladders.len() - stable
    ))
}

fn norm_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let psis = [
        power(2.0),
        compose_sources("exp(t+u)-1", "u", "u", None).unwrap(),
        power(3.0),
    ];
    let (mut homog, mut tri, mut mono): (f64, f64, f64) = (0.0, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for k in 0..50 {
        let psi = &psis[k % 3];
        let (m, n) = random_measure(&mut rng, 16);
        let f = random_f(&mut rng, n);
        let g = random_f(&mut rng, n);
        let nf = norm(psi, &m, &f)?;
        for c in [0.5, 2.0, 10.0] {
            let ncf = norm(psi, &m, &f.scaled(c).unwrap())?;
            if nf > 0.0 {
                homog = homog.max((ncf - c * nf).abs() / (c * nf));
            }
        }
        let sum = GridFunction::new(f.values().iter().zip(g.values()).map(|(a, b)| a + b).collect())
            .unwrap();
        let big = GridFunction::new(f.values().iter().zip(g.values()).map(|(a, b)| a.max(*b)).collect())
            .unwrap();
        tri = tri.max(norm(psi, &m, &sum)? - nf - norm(psi, &m, &g)?);
        mono = mono.max(nf - norm(psi, &m, &big)?);
    }
    ensure(homog <= 1e-8, format!("homogeneity error {homog:e}"))?;
    ensure(tri <= 1e-8, format!("triangle excess {tri:e}"))?;
    ensure(mono <= 1e-10, format!("monotonicity excess {mono:e}"))?;
    Ok(format!(
        "homogeneity {homog:.1e}, triangle excess {tri:.1e}, monotonicity excess {mono:.1e}"
    ))
}

fn sobolev_sanity() -> Outcome {
    let square = power(2.0);
    let grid = |n| MeasureSpace::interval(0.0, 1.0, n, QuadratureRule::Midpoint).unwrap();
    let sample = |m: &MeasureSpace, f: fn(f64) -> f64| -> Vec<f64> {
        m.nodes().iter().map(|&(t, _)| f(t)).collect()
    };
    let m = grid(2001);
    let x = sample(&m, |t| t);
    let s = sobolev::sobolev_norm(&square, &m, &x, 1, DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .value
        .to_f64();
    let want = 3f64.sqrt().recip() + 1.0;
    ensure((s - want).abs() <= 1e-3, format!("k = 1 norm {s}, want {want}"))?;

    let f = sample(&m, |t| (2.0 * t).sin().abs());
    let s0 = sobolev::sobolev_norm(&square, &m, &f, 0, DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .value
        .to_f64();
    let l = norm(&square, &m, &GridFunction::new(f).unwrap())?;
    ensure((s0 - l).abs() <= 1e-12 * l, format!("k = 0 gives {s0}, luxemburg {l}"))?;

    let errors: Vec<f64> = [251, 501, 1001]
        .iter()
        .map(|&n| {
            let m = grid(n);
            let d = sobolev::weak_derivative(&sample(&m, f64::sin), &m, 1).unwrap();
            let ts = sample(&m, |t| t);
            (1..n - 1).map(|i| (d[i] - ts[i].cos()).abs()).fold(0.0, f64::max)
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    ensure(
        orders.iter().all(|o| (o - 2.0).abs() < 0.25),
        format!("observed orders {orders:?}"),
    )?;
    Ok(format!("k = 1 norm {s:.6}, observed orders {orders:.3?}"))
}

fn run_cli(args: &[&str], dir: &Path, threads: Option<&str>, out: &str) -> Result<Vec<u8>, String> {
    let report = dir.join(out);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eorlicz"));
    cmd.args(args).arg("--report").arg(&report);
    match threads {
        Some(n) => cmd.env("RAYON_NUM_THREADS", n),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    let status = cmd.status().map_err(|e| e.to_string())?;
    ensure(status.code() != Some(3), format!("{args:?} exited with an input error"))?;
    fs::read(&report).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = dir.path();
    let write = |name: &str, body: &str| fs::write(p.join(name), body).unwrap();
    write(
        "classify.json",
        r#"{"phi": "cosh(t*exp(u))-1", "E": ["u", "0"], "t_samples": [0.5, 1, 2]}"#,
    );
    write(
        "norm.json",
        r#"{"phi": "exp(t+u)-1", "E": ["u", "u"], "omega": {"type": "interval", "a": 0, "b": 1, "nodes": 1000}}"#,
    );
    let data: String = (0..1000)
        .map(|i| {
            let t = (i as f64 + 0.5) / 1000.0;
            format!("{t},{}\n", (3.0 * t).sin() + 1.0)
        })
        .collect();
    write("data.csv", &format!("t,value\n{data}"));
    let spec = |n: &str| p.join(n).to_string_lossy().into_owned();
    let (cs, ns, data) = (spec("classify.json"), spec("norm.json"), spec("data.csv"));
    let commands: Vec<Vec<&str>> = vec![
        vec!["classify", "--spec", &cs],
        vec!["norm", "--spec", &ns, "--data", &data],
        vec!["sobolev", "--spec", &ns, "--data", &data, "--order", "2"],
        vec!["catalog"],
    ];
    for args in &commands {
        let a = run_cli(args, p, Some("1"), "a.json")?;
        let b = run_cli(args, p, Some("1"), "b.json")?;
        let c = run_cli(args, p, None, "c.json")?;
        ensure(a == b, format!("{} differs between runs", args[0]))?;
        ensure(a == c, format!("{} differs with parallelism", args[0]))?;
        serde_json::from_slice::<serde_json::Value>(&a).map_err(|e| e.to_string())?;
    }
    let psi = compose_sources("exp(u^t)-1", "abs(t)", "u", None).unwrap();
    let cfg = CheckConfig::default().with_t_samples(vec![-2.0, -1.0, 1.0, 2.0]);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = one.install(|| serde_json::to_string(&classify(&psi, &cfg).unwrap()).unwrap());
    let parallel = serde_json::to_string(&classify(&psi, &cfg).unwrap()).unwrap();
    ensure(serial == parallel, "in-process classify differs across pools")?;
    Ok(format!("{} commands byte-identical across 3 runs", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("fixture reproduction", fixture_reproduction),
        ("Lp oracle", lp_oracle),
        ("implication lattice", lattice),
        ("closure suite", closure),
        ("norm axioms", norm_axioms),
        ("Sobolev sanity", sobolev_sanity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
