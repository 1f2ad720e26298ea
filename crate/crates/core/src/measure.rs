//! Finite measure spaces: weighted atoms, or an interval with a composite
//! quadrature rule. Integration is a fixed-order weighted sum over nodes.

use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprlang::{ComposeError, ExtReal};

/// Below this many nodes integrands are evaluated sequentially.
const PARALLEL_MIN_NODES: usize = 512;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("atom weights must be finite and nonnegative (atom {index}: w = {weight})")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("atom coordinates must be finite (atom {index}: t = {t})")]
    InvalidCoordinate { index: usize, t: f64 },
    #[error("total mass must be finite and positive")]
    ZeroMass,
    #[error("interval needs finite a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("{rule:?} rule needs at least {min} node(s), got {nodes}")]
    TooFewNodes {
        rule: QuadratureRule,
        nodes: usize,
        min: usize,
    },
    #[error("grid function has {found} values but the measure has {expected} nodes")]
    Misaligned { expected: usize, found: usize },
    #[error("grid value {index} must be finite and nonnegative, got {value}")]
    InvalidValue { index: usize, value: f64 },
    #[error("integrand failed at node {index} (t = {t}): {source}")]
    Eval {
        index: usize,
        t: f64,
        #[source]
        source: ComposeError,
    },
    #[error("reading grid data: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    #[default]
    Midpoint,
    Trapezoid,
}

/// JSON form of a measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureDescriptor {
    Discrete {
        atoms: Vec<(f64, f64)>,
    },
    Interval {
        a: f64,
        b: f64,
        nodes: usize,
        #[serde(default)]
        rule: QuadratureRule,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpace {
    /// Atoms sorted by coordinate.
    Discrete { atoms: Vec<(f64, f64)> },
    Interval {
        a: f64,
        b: f64,
        nodes: usize,
        rule: QuadratureRule,
    },
}

impl MeasureSpace {
    pub fn discrete(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, MeasureError> {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        for (index, &(t, w)) in atoms.iter().enumerate() {
            if !t.is_finite() {
                return Err(MeasureError::InvalidCoordinate { index, t });
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(MeasureError::InvalidWeight { index, weight: w });
            }
        }
        let mass: f64 = atoms.iter().map(|a| a.1).sum();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(MeasureError::ZeroMass);
        }
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(MeasureSpace::Discrete { atoms })
    }

    pub fn interval(a: f64, b: f64, nodes: usize, rule: QuadratureRule) -> Result<Self, MeasureError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(MeasureError::InvalidInterval { a, b });
        }
        let min = match rule {
            QuadratureRule::Midpoint => 1,
            QuadratureRule::Trapezoid => 2,
        };
        if nodes < min {
            return Err(MeasureError::TooFewNodes { rule, nodes, min });
        }
        Ok(MeasureSpace::Interval { a, b, nodes, rule })
    }

    pub fn from_descriptor(d: &MeasureDescriptor) -> Result<Self, MeasureError> {
        match d {
            MeasureDescriptor::Discrete { atoms } => MeasureSpace::discrete(atoms.iter().copied()),
            MeasureDescriptor::Interval { a, b, nodes, rule } => {
                MeasureSpace::interval(*a, *b, *nodes, *rule)
            }
        }
    }

    pub fn descriptor(&self) -> MeasureDescriptor {
        match self {
            MeasureSpace::Discrete { atoms } => MeasureDescriptor::Discrete {
                atoms: atoms.clone(),
            },
            MeasureSpace::Interval { a, b, nodes, rule } => MeasureDescriptor::Interval {
                a: *a,
                b: *b,
                nodes: *nodes,
                rule: *rule,
            },
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MeasureSpace::Discrete { atoms } => atoms.len(),
            MeasureSpace::Interval { nodes, .. } => *nodes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node spacing for interval measures.
    pub fn spacing(&self) -> Option<f64> {
        match self {
            MeasureSpace::Discrete { .. } => None,
            MeasureSpace::Interval { a, b, nodes, rule } => Some(match rule {
                QuadratureRule::Midpoint => (b - a) / *nodes as f64,
                QuadratureRule::Trapezoid => (b - a) / (*nodes - 1) as f64,
            }),
        }
    }

    /// `(t, w)` pairs in increasing `t`.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        match self {
            MeasureSpace::Discrete { atoms } => atoms.clone(),
            MeasureSpace::Interval { a, b, nodes, rule } => {
                let n = *nodes;
                let h = self.spacing().unwrap_or(0.0);
                match rule {
                    QuadratureRule::Midpoint => (0..n)
                        .map(|i| (a + (i as f64 + 0.5) * h, h))
                        .collect(),
                    QuadratureRule::Trapezoid => (0..n)
                        .map(|i| {
                            let t = if i + 1 == n { *b } else { a + i as f64 * h };
                            let w = if i == 0 || i + 1 == n { 0.5 * h } else { h };
                            (t, w)
                        })
                        .collect(),
                }
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.nodes().iter().map(|n| n.1).sum()
    }

    /// `∫ g dμ` for an integrand of `t`.
    pub fn integrate<G>(&self, g: G) -> Result<ExtReal, MeasureError>
    where
        G: Fn(f64) -> Result<ExtReal, ComposeError> + Sync,
    {
        self.integrate_nodes(|_, t| g(t))
    }

    /// Like [`integrate`](Self::integrate), with the node index passed to
    /// the integrand. Nodes may be evaluated in parallel; the sum is always
    /// accumulated in node order. Zero-weight nodes are skipped.
    pub fn integrate_nodes<G>(&self, g: G) -> Result<ExtReal, MeasureError>
    where
        G: Fn(usize, f64) -> Result<ExtReal, ComposeError> + Sync,
    {
        let nodes = self.nodes();
        let eval = |(index, &(t, w)): (usize, &(f64, f64))| -> Result<(f64, ExtReal), MeasureError> {
            if w == 0.0 {
                return Ok((w, ExtReal::ZERO));
            }
            g(index, t)
                .map(|v| (w, v))
                .map_err(|source| MeasureError::Eval { index, t, source })
        };
        let values: Vec<(f64, ExtReal)> = if nodes.len() >= PARALLEL_MIN_NODES {
            nodes.par_iter().enumerate().map(eval).collect::<Result<_, _>>()?
        } else {
            nodes.iter().enumerate().map(eval).collect::<Result<_, _>>()?
        };
        let mut acc = ExtReal::ZERO;
        for (index, (w, v)) in values.into_iter().enumerate() {
            let term = ExtReal::Finite(w).mul(v).and_then(|term| acc.add(term));
            acc = term.map_err(|source| MeasureError::Eval {
                index,
                t: nodes[index].0,
                source: ComposeError {
                    stage: crate::exprlang::Stage::Outer,
                    source,
                },
            })?;
        }
        Ok(acc)
    }
}

/// Nonnegative samples `‖f(t_i)‖`, one per node of a measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, MeasureError> {
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(MeasureError::InvalidValue { index, value });
            }
        }
        Ok(GridFunction { values })
    }

    /// Pointwise absolute values of signed samples.
    pub fn from_signed(values: &[f64]) -> Result<Self, MeasureError> {
        GridFunction::new(values.iter().map(|v| v.abs()).collect())
    }

    pub fn zeros(n: usize) -> Self {
        GridFunction {
            values: vec![0.0; n],
        }
    }

    /// Samples `f` at the nodes of `m`.
    pub fn sample(m: &MeasureSpace, f: impl Fn(f64) -> f64) -> Result<Self, MeasureError> {
        GridFunction::new(m.nodes().iter().map(|&(t, _)| f(t)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn check_aligned(&self, m: &MeasureSpace) -> Result<(), MeasureError> {
        if self.len() == m.len() {
            Ok(())
        } else {
            Err(MeasureError::Misaligned {
                expected: m.len(),
                found: self.len(),
            })
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self, MeasureError> {
        GridFunction::new(self.values.iter().map(|v| v * c).collect())
    }
}

/// Reads `t,value` rows. A leading non-numeric row is taken as a header
/// and `#` starts a comment line. Rows are matched to nodes by position,
/// so the `t` column is informational.
pub fn read_grid_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>, MeasureError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| MeasureError::Csv(e.to_string()))?;
        if record.len() != 2 {
            return Err(MeasureError::Csv(format!(
                "row {}: expected 2 columns `t,value`, found {}",
                line + 1,
                record.len()
            )));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push((v[0], v[1])),
            Err(_) if line == 0 => continue,
            Err(e) => {
                return Err(MeasureError::Csv(format!("row {}: {e}", line + 1)));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn finite(v: f64) -> Result<ExtReal, ComposeError> {
        Ok(ExtReal::Finite(v))
    }

    #[test]
    fn total_mass_of_two_atoms() {
        let m = MeasureSpace::discrete([(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(m.integrate(|_| finite(1.0)).unwrap(), ExtReal::ONE);
    }

    #[test]
    fn midpoint_integrates_identity() {
        let m = MeasureSpace::interval(0.0, 1.0, 1000, QuadratureRule::Midpoint).unwrap();
        let v = m.integrate(finite).unwrap().to_f64();
        assert!((v - 0.5).abs() < 1e-6);
    }

    #[test]
    fn infinite_integrand_on_positive_mass() {
        let m = MeasureSpace::discrete([(0.0, 1.0)]).unwrap();
        assert_eq!(m.integrate(|_| Ok(ExtReal::PosInf)).unwrap(), ExtReal::PosInf);
        // zero-weight atoms do not contribute
        let m = MeasureSpace::discrete([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let v = m
            .integrate(|t| Ok(if t > 0.5 { ExtReal::PosInf } else { ExtReal::ONE }))
            .unwrap();
        assert_eq!(v, ExtReal::ONE);
    }

    #[test]
    fn node_enumeration() {
        let m = MeasureSpace::discrete([(1.0, 2.0), (0.0, 3.0)]).unwrap();
        assert_eq!(m.nodes(), vec![(0.0, 3.0), (1.0, 2.0)]);
        let m = MeasureSpace::interval(0.0, 1.0, 2, QuadratureRule::Midpoint).unwrap();
        assert_eq!(m.nodes(), vec![(0.25, 0.5), (0.75, 0.5)]);
        let m = MeasureSpace::interval(0.0, 1.0, 1, QuadratureRule::Midpoint).unwrap();
        assert_eq!(m.nodes(), vec![(0.5, 1.0)]);
        let m = MeasureSpace::interval(0.0, 1.0, 3, QuadratureRule::Trapezoid).unwrap();
        assert_eq!(m.nodes(), vec![(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)]);
    }

    #[test]
    fn rejects_invalid_measures() {
        assert!(matches!(
            MeasureSpace::discrete([(0.0, -1.0)]),
            Err(MeasureError::InvalidWeight { .. })
        ));
        assert!(matches!(
            MeasureSpace::discrete([(0.0, 0.0)]),
            Err(MeasureError::ZeroMass)
        ));
        assert!(matches!(
            MeasureSpace::discrete(Vec::new()),
            Err(MeasureError::ZeroMass)
        ));
        assert!(matches!(
            MeasureSpace::interval(1.0, 1.0, 4, QuadratureRule::Midpoint),
            Err(MeasureError::InvalidInterval { .. })
        ));
        assert!(matches!(
            MeasureSpace::interval(0.0, 1.0, 1, QuadratureRule::Trapezoid),
            Err(MeasureError::TooFewNodes { .. })
        ));
    }

    #[test]
    fn integrand_error_carries_node_index() {
        use crate::exprlang::compose_sources;
        let psi = compose_sources("ln(t)", "t", "u", None).unwrap();
        let m = MeasureSpace::discrete([(1.0, 1.0), (0.0, 1.0)]).unwrap();
        match m.integrate(|t| psi.eval(t, 0.0)) {
            Err(MeasureError::Eval { index, t, .. }) => {
                assert_eq!(index, 0);
                assert_eq!(t, 0.0);
            }
            other => panic!("expected node error, got {other:?}"),
        }
    }

    #[test]
    fn midpoint_converges_at_second_order() {
        let err = |n: usize| {
            let m = MeasureSpace::interval(0.0, 1.0, n, QuadratureRule::Midpoint).unwrap();
            (m.integrate(|t| finite(t * t)).unwrap().to_f64() - 1.0 / 3.0).abs()
        };
        let mut prev = err(16);
        for n in [32, 64, 128, 256] {
            let e = err(n);
            assert!(e < prev);
            let order = (prev / e).log2();
            assert!((order - 2.0).abs() < 0.05, "order {order} at n = {n}");
            prev = e;
        }
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let m = MeasureSpace::interval(-1.0, 3.0, 7, QuadratureRule::Trapezoid).unwrap();
        let v = m.integrate(|t| finite(2.0 * t + 1.0)).unwrap().to_f64();
        assert!((v - 12.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_and_sequential_sums_agree() {
        let m = MeasureSpace::interval(0.0, 2.0, 4096, QuadratureRule::Midpoint).unwrap();
        let par = m.integrate(|t| finite(t.sin())).unwrap();
        let nodes = m.nodes();
        let mut seq = 0.0;
        for (t, w) in nodes {
            seq += w * t.sin();
        }
        assert_eq!(par.to_f64().to_bits(), seq.to_bits());
    }

    #[test]
    fn descriptor_json() {
        let d: MeasureDescriptor =
            serde_json::from_str(r#"{"type":"interval","a":0,"b":1,"nodes":10}"#).unwrap();
        assert_eq!(
            MeasureSpace::from_descriptor(&d).unwrap(),
            MeasureSpace::interval(0.0, 1.0, 10, QuadratureRule::Midpoint).unwrap()
        );
        let d: MeasureDescriptor =
            serde_json::from_str(r#"{"type":"discrete","atoms":[[1,2],[0,3]]}"#).unwrap();
        assert_eq!(MeasureSpace::from_descriptor(&d).unwrap().len(), 2);
        assert!(serde_json::from_str::<MeasureDescriptor>(
            r#"{"type":"discrete","atoms":[],"extra":1}"#
        )
        .is_err());
    }

    #[test]
    fn csv_rows() {
        let rows = read_grid_csv("t,value\n0, 1.5\n# note\n1,2\n".as_bytes()).unwrap();
        assert_eq!(rows, vec![(0.0, 1.5), (1.0, 2.0)]);
        assert!(read_grid_csv("0,1\nx,2\n".as_bytes()).is_err());
        assert!(read_grid_csv("0,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_function_validation() {
        assert!(GridFunction::new(vec![1.0, -0.5]).is_err());
        assert!(GridFunction::new(vec![f64::NAN]).is_err());
        let g = GridFunction::from_signed(&[-2.0, 3.0]).unwrap();
        assert_eq!(g.values(), &[2.0, 3.0]);
        let m = MeasureSpace::discrete([(0.0, 1.0)]).unwrap();
        assert!(g.check_aligned(&m).is_err());
    }

    fn arb_measure() -> impl Strategy<Value = MeasureSpace> {
        prop::collection::vec((-10.0f64..10.0, 0.01f64..5.0), 1..24)
            .prop_map(|atoms| MeasureSpace::discrete(atoms).unwrap())
    }

    proptest! {
        #[test]
        fn integration_is_linear(m in arb_measure(), a in -5.0f64..5.0,
                                 c0 in -3.0f64..3.0, c1 in -3.0f64..3.0) {
            let g = |t: f64| c0 + c1 * t;
            let h = |t: f64| (t * 0.3).cos();
            let lhs = m.integrate(|t| finite(a * g(t) + h(t))).unwrap().to_f64();
            let ig = m.integrate(|t| finite(g(t))).unwrap().to_f64();
            let ih = m.integrate(|t| finite(h(t))).unwrap().to_f64();
            let rhs = a * ig + ih;
            let scale = m.nodes().iter().map(|&(t, w)| w * (a * g(t)).abs() + w * h(t).abs()).sum::<f64>();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn integration_is_monotone(m in arb_measure(), shift in 0.0f64..2.0) {
            let g = |t: f64| t.sin();
            let lo = m.integrate(|t| finite(g(t))).unwrap();
            let hi = m.integrate(|t| finite(g(t) + shift)).unwrap();
            prop_assert!(lo <= hi);
        }
    }
}
