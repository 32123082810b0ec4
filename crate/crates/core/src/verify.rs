//! Relation and identity suites over enumerated basis windows.
//!
//! Operator identities are tested pointwise on basis vectors: every basis vector of the
//! window is pushed through `LHS - RHS` and the residual must vanish exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::affine::{AffineModel, Node0Path};
use crate::coeff::{parse_rational, rat, ParamPoly, Params, Rational, Scalar};
use crate::combinatorics::{multipartitions_up_to, ChargedMultipartition, Partition};
use crate::daha::{check_daha_relations, DahaConfig};
use crate::error::{Error, Result};
use crate::generator::{CartanMatrix, GeneratorId, Kind};
use crate::wedge::{
    charge_compose, charge_decompose, degree, to_multipartition_labels, v_basis, word_degree, Dims, FockState,
    FockVec,
};

/// Deliberate defects that the quick profile must detect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// `-t z_i d/dz_i` instead of `+t z_i d/dz_i` in the Dunkl operator.
    DunklTSign,
    /// `s_i -> +K P` instead of `-K P`.
    ExchangeSign,
    /// Drops `n/2L` from the constant term of the Dunkl operator.
    DropHalfN,
    /// `r_ij` acts by `P_ij` when `b_i < b_j` instead of `b_i > b_j`.
    RBranch,
    /// One extra term in the geometric sum of the divided difference.
    DividedDifferenceOffByOne,
    /// Mode-one generators taken as bare `J(X)`.
    DropOmega,
    /// `+hbar/4` instead of `-hbar/4` in front of the quadratic correction.
    OmegaSign,
    /// `beta = t/2 - Nc/4`.
    BetaMissingHalfC,
    /// `T` picks up a sign for every index that wraps from `v_N` to `v_1`.
    TSign,
    /// Uses `hbar/2` instead of `beta` for the shift of node `0`.
    RhoShift,
}

impl Mutation {
    pub const ALL: [Mutation; 10] = [
        Mutation::DunklTSign,
        Mutation::ExchangeSign,
        Mutation::DropHalfN,
        Mutation::RBranch,
        Mutation::DividedDifferenceOffByOne,
        Mutation::DropOmega,
        Mutation::OmegaSign,
        Mutation::BetaMissingHalfC,
        Mutation::TSign,
        Mutation::RhoShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::DunklTSign => "dunkl-t-sign",
            Mutation::ExchangeSign => "exchange-sign",
            Mutation::DropHalfN => "drop-half-n",
            Mutation::RBranch => "r-branch",
            Mutation::DividedDifferenceOffByOne => "divided-difference-off-by-one",
            Mutation::DropOmega => "drop-omega",
            Mutation::OmegaSign => "omega-sign",
            Mutation::BetaMissingHalfC => "beta-missing-half-c",
            Mutation::TSign => "t-sign",
            Mutation::RhoShift => "rho-shift",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
    pub millis: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// `{"checks": [...]}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn summary(&self) -> Value {
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let mut by_id: std::collections::BTreeMap<&str, (usize, usize)> = Default::default();
        for c in &self.checks {
            let e = by_id.entry(c.id.as_str()).or_default();
            e.0 += 1;
            if c.passed() {
                e.1 += 1;
            }
        }
        json!({
            "total": self.checks.len(),
            "passed": passed,
            "failed": self.checks.len() - passed,
            "by_id": by_id.into_iter().map(|(k, (n, p))| (k.to_string(), json!({"total": n, "passed": p}))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Linear combinations of products of generators, acting on the left.
#[derive(Clone, Debug)]
pub enum OpExpr<R> {
    Id,
    Gen(GeneratorId),
    Scaled(R, Box<OpExpr<R>>),
    Sum(Vec<OpExpr<R>>),
    /// `Prod([a, b])` is `a ∘ b`: `b` acts first.
    Prod(Vec<OpExpr<R>>),
}

impl<R: Scalar> OpExpr<R> {
    pub fn gen(g: GeneratorId) -> Self {
        OpExpr::Gen(g)
    }

    pub fn scaled(self, c: R) -> Self {
        OpExpr::Scaled(c, Box::new(self))
    }

    pub fn neg(self) -> Self {
        self.scaled(-R::one())
    }

    pub fn prod(a: Self, b: Self) -> Self {
        OpExpr::Prod(vec![a, b])
    }

    pub fn comm(a: Self, b: Self) -> Self {
        OpExpr::Sum(vec![Self::prod(a.clone(), b.clone()), Self::prod(b, a).neg()])
    }

    pub fn anticomm(a: Self, b: Self) -> Self {
        OpExpr::Sum(vec![Self::prod(a.clone(), b.clone()), Self::prod(b, a)])
    }

    pub fn sum(terms: Vec<Self>) -> Self {
        OpExpr::Sum(terms)
    }

    pub fn apply(&self, model: &AffineModel<R>, v: &FockVec<R>) -> Result<FockVec<R>> {
        Ok(match self {
            OpExpr::Id => v.clone(),
            OpExpr::Gen(g) => model.act(*g, v)?,
            OpExpr::Scaled(c, inner) => inner.apply(model, v)?.scale(c),
            OpExpr::Sum(terms) => {
                let mut out = FockVec::new();
                for t in terms {
                    out.add_vec(&t.apply(model, v)?);
                }
                out
            }
            OpExpr::Prod(factors) => {
                let mut acc = v.clone();
                for f in factors.iter().rev() {
                    acc = f.apply(model, &acc)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
        })
    }
}

/// `LHS - RHS` of one instance of the affine Yangian relations. `kind` picks the sign
/// (`Plus` or `Minus`) in the relations that come in pairs; `r2` is the second mode in the
/// Serre relation.
pub fn yangian_relation<R: Scalar>(
    id: &str,
    (i, j): (usize, usize),
    (r, s, r2): (u32, u32, u32),
    kind: Kind,
    n: usize,
    hbar: &R,
    beta: &R,
) -> Result<OpExpr<R>> {
    let g = |k: Kind, node: usize, mode: u32| OpExpr::<R>::gen(GeneratorId::new(k, node, mode));
    let a = CartanMatrix::new(n).entry(i, j);
    let pm = match kind {
        Kind::Plus => 1,
        Kind::Minus => -1,
        Kind::Cartan => 0,
    };
    let need_sign = || {
        if pm == 0 {
            Err(Error::Config(format!("{id} needs kind plus or minus")))
        } else {
            Ok(())
        }
    };
    let rq = |q: Rational| R::from_rational(&q);
    let hb = |q: Rational| hbar.clone() * &rq(q);
    Ok(match id {
        "Y1" => OpExpr::comm(g(Kind::Cartan, i, r), g(Kind::Cartan, j, s)),
        "Y2" => {
            let mut terms = vec![OpExpr::comm(g(Kind::Plus, i, r), g(Kind::Minus, j, s))];
            if i == j {
                terms.push(g(Kind::Cartan, i, r + s).neg());
            }
            OpExpr::sum(terms)
        }
        "Y3" => {
            need_sign()?;
            OpExpr::sum(vec![
                OpExpr::comm(g(Kind::Cartan, i, 0), g(kind, j, s)),
                g(kind, j, s).scaled(rq(rat(-pm * a, 1))),
            ])
        }
        "Y4" | "Y5" => {
            need_sign()?;
            let left = if id == "Y4" { Kind::Cartan } else { kind };
            OpExpr::sum(vec![
                OpExpr::comm(g(left, i, r + 1), g(kind, j, s)),
                OpExpr::comm(g(left, i, r), g(kind, j, s + 1)).neg(),
                OpExpr::anticomm(g(left, i, r), g(kind, j, s)).scaled(hb(rat(-pm * a, 2))),
            ])
        }
        "Y6" | "Y7" | "Y8" | "Y9" | "Y10" | "Y11" => {
            let (left, right) = match id {
                "Y6" | "Y10" => (Kind::Cartan, Kind::Plus),
                "Y7" | "Y11" => (Kind::Cartan, Kind::Minus),
                "Y8" => (Kind::Plus, Kind::Plus),
                _ => (Kind::Minus, Kind::Minus),
            };
            let mut bm = beta.clone();
            bm -= hbar;
            let mut mb = hbar.clone();
            mb -= beta;
            // RHS = p A B + q B A with A = left_{i,r}, B = right_{j,s}
            let (p, q) = match id {
                "Y6" | "Y8" => (bm, -beta.clone()),
                "Y7" | "Y9" => (beta.clone(), mb),
                "Y10" => (-beta.clone(), bm),
                _ => (mb, beta.clone()),
            };
            let a_op = g(left, i, r);
            let b_op = g(right, j, s);
            OpExpr::sum(vec![
                OpExpr::comm(g(left, i, r + 1), b_op.clone()),
                OpExpr::comm(a_op.clone(), g(right, j, s + 1)).neg(),
                OpExpr::prod(a_op.clone(), b_op.clone()).scaled(-p),
                OpExpr::prod(b_op, a_op).scaled(-q),
            ])
        }
        "Y12" => {
            need_sign()?;
            if i == j {
                return Err(Error::Config("Y12 needs distinct nodes".into()));
            }
            match a {
                0 => OpExpr::comm(g(kind, i, r), g(kind, j, s)),
                -1 => OpExpr::sum(vec![
                    OpExpr::comm(g(kind, i, r), OpExpr::comm(g(kind, i, r2), g(kind, j, s))),
                    OpExpr::comm(g(kind, i, r2), OpExpr::comm(g(kind, i, r), g(kind, j, s))),
                ]),
                _ => return Err(Error::Config(format!("unexpected Cartan entry {a}"))),
            }
        }
        other => return Err(Error::Config(format!("unknown relation {other}"))),
    })
}

/// The basis vectors `|λ, c⟩` with at most `max_boxes` boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub charges: Vec<i64>,
    pub max_boxes: usize,
}

impl Window {
    pub fn new(n: usize, l: usize, charges: Vec<i64>, max_boxes: usize) -> Self {
        Self { n, l, charges, max_boxes }
    }

    pub fn dims(&self) -> Result<Dims> {
        if self.charges.len() != self.l {
            return Err(Error::Config(format!("{} charges given for L = {}", self.charges.len(), self.l)));
        }
        Dims::new(self.n, self.l)
    }

    pub fn basis(&self) -> Result<Vec<FockState>> {
        let dims = self.dims()?;
        multipartitions_up_to(&self.charges, self.max_boxes)
            .iter()
            .map(|lc| charge_compose(&dims, lc))
            .collect()
    }
}

/// Coefficient ring used to evaluate a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Eval {
    /// Exact in `Q[t, c]`.
    Symbolic,
    /// Exact at each of the session's sample points.
    Sampled,
}

/// A serializable, reproducible check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    pub window: Window,
    pub eval: Eval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<Value>,
}

impl RelationCheck {
    pub fn new(id: &str, window: &Window, eval: Eval) -> Self {
        Self {
            id: id.to_string(),
            nodes: Vec::new(),
            modes: Vec::new(),
            kind: None,
            window: window.clone(),
            eval,
            extra: None,
        }
    }

    pub fn nodes(mut self, nodes: &[usize]) -> Self {
        self.nodes = nodes.to_vec();
        self
    }

    pub fn modes(mut self, modes: &[u32]) -> Self {
        self.modes = modes.to_vec();
        self
    }

    pub fn kind(mut self, kind: Kind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn extra(mut self, extra: Value) -> Self {
        self.extra = Some(extra);
        self
    }

    fn node(&self, k: usize) -> Result<usize> {
        self.nodes.get(k).copied().ok_or_else(|| Error::Config(format!("{}: missing node {k}", self.id)))
    }

    fn mode(&self, k: usize) -> u32 {
        self.modes.get(k).copied().unwrap_or(0)
    }

    fn generator(&self) -> Result<GeneratorId> {
        let kind = self.kind.ok_or_else(|| Error::Config(format!("{}: missing kind", self.id)))?;
        Ok(GeneratorId::new(kind, self.node(0)?, self.mode(0)))
    }

    fn extra_str(&self, key: &str) -> Option<&str> {
        self.extra.as_ref().and_then(|e| e.get(key)).and_then(Value::as_str)
    }

    fn extra_i64(&self, key: &str) -> Option<i64> {
        self.extra.as_ref().and_then(|e| e.get(key)).and_then(Value::as_i64)
    }
}

/// The choice of `ν(1), ..., ν(L)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum NuSpec {
    /// `ν(b) = α (b - 1) + γ`.
    Affine { alpha: ParamPoly, gamma: ParamPoly },
    /// Independent generic linear forms in `t, c`.
    Generic,
}

impl Default for NuSpec {
    fn default() -> Self {
        NuSpec::Affine {
            alpha: ParamPoly::zero_value(),
            gamma: ParamPoly::zero_value(),
        }
    }
}

impl NuSpec {
    pub fn values(&self, l: usize) -> Result<Vec<ParamPoly>> {
        match self {
            NuSpec::Affine { alpha, gamma } => Ok((0..l)
                .map(|b| alpha.scaled(&rat(b as i64, 1)) + gamma.clone())
                .collect()),
            NuSpec::Generic => {
                let table = [(2, 7, -3, 5), (-1, 11, 4, 3), (5, 13, 1, 17), (-7, 19, -2, 23)];
                if l > table.len() {
                    return Err(Error::Config(format!("generic nu is tabulated up to L = {}", table.len())));
                }
                Ok(table[..l]
                    .iter()
                    .map(|&(a, b, c, d)| ParamPoly::t().scaled(&rat(a, b)) + ParamPoly::c().scaled(&rat(c, d)))
                    .collect())
            }
        }
    }
}

trait ZeroValue {
    fn zero_value() -> Self;
}

impl ZeroValue for ParamPoly {
    fn zero_value() -> Self {
        <ParamPoly as num::Zero>::zero()
    }
}

/// Generic `(t, c)` points with denominators at least 7.
pub fn default_sample_points() -> Vec<(Rational, Rational)> {
    vec![(rat(5, 7), rat(2, 11)), (rat(-3, 13), rat(8, 17)), (rat(11, 19), rat(-4, 23))]
}

pub fn parse_points(s: &str) -> Result<Vec<(Rational, Rational)>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let mut t = None;
            let mut c = None;
            for kv in p.split(',') {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected t=..,c=.. in {p:?}")))?;
                match k.trim() {
                    "t" => t = Some(parse_rational(v.trim())?),
                    "c" => c = Some(parse_rational(v.trim())?),
                    other => return Err(Error::Parse(format!("unknown parameter {other}"))),
                }
            }
            Ok((
                t.ok_or_else(|| Error::Parse("missing t".into()))?,
                c.ok_or_else(|| Error::Parse("missing c".into()))?,
            ))
        })
        .collect()
}

/// Models shared between checks with the same `(N, L)` and coefficient ring.
pub struct Session {
    pub nu: NuSpec,
    pub mutation: Option<Mutation>,
    pub points: Vec<(Rational, Rational)>,
    /// Record wall-clock time per check; off gives byte-identical reports.
    pub timing: bool,
    symbolic: Mutex<HashMap<(usize, usize), Arc<AffineModel<ParamPoly>>>>,
    sampled: Mutex<HashMap<(usize, usize, usize), Arc<AffineModel<Rational>>>>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new(NuSpec::default(), None)
    }
}

impl Session {
    pub fn new(nu: NuSpec, mutation: Option<Mutation>) -> Self {
        Self {
            nu,
            mutation,
            points: default_sample_points(),
            timing: true,
            symbolic: Mutex::new(HashMap::new()),
            sampled: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_points(mut self, points: Vec<(Rational, Rational)>) -> Self {
        self.points = points;
        self
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn symbolic_params(&self, l: usize) -> Result<Params<ParamPoly>> {
        Ok(Params::symbolic(self.nu.values(l)?))
    }

    pub fn symbolic_model(&self, dims: Dims) -> Result<Arc<AffineModel<ParamPoly>>> {
        let mut map = self.symbolic.lock().expect("model lock");
        if let Some(m) = map.get(&(dims.n, dims.l)) {
            return Ok(m.clone());
        }
        let cfg = DahaConfig::new(dims.l, self.symbolic_params(dims.l)?).with_mutation(self.mutation);
        let m = Arc::new(AffineModel::new(dims, cfg));
        map.insert((dims.n, dims.l), m.clone());
        Ok(m)
    }

    pub fn sampled_model(&self, dims: Dims, point: usize) -> Result<Arc<AffineModel<Rational>>> {
        let mut map = self.sampled.lock().expect("model lock");
        if let Some(m) = map.get(&(dims.n, dims.l, point)) {
            return Ok(m.clone());
        }
        let (t, c) = &self.points[point];
        let params = self.symbolic_params(dims.l)?.specialize(t, c);
        let cfg = DahaConfig::new(dims.l, params).with_mutation(self.mutation);
        let m = Arc::new(AffineModel::new(dims, cfg));
        map.insert((dims.n, dims.l, point), m.clone());
        Ok(m)
    }

    /// Runs one check; configuration errors become failures with the message attached.
    pub fn run_check(&self, rc: &RelationCheck) -> CheckReport {
        let start = Instant::now();
        let outcome = self.run_check_inner(rc);
        let (status, counterexample) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(cx)) => (Status::Fail, Some(cx)),
            Err(e) => (Status::Fail, Some(json!({"error": e.to_string()}))),
        };
        let mut params = serde_json::to_value(rc).expect("serializable");
        if let Value::Object(map) = &mut params {
            map.remove("id");
            if rc.eval == Eval::Sampled {
                map.insert(
                    "points".into(),
                    Value::Array(self.points.iter().map(|(t, c)| json!({"t": t.to_string(), "c": c.to_string()})).collect()),
                );
            }
            if self.mutation.is_some() {
                map.insert("mutation".into(), json!(self.mutation.map(Mutation::name)));
            }
        }
        CheckReport {
            id: rc.id.clone(),
            params,
            status,
            counterexample,
            millis: if self.timing { start.elapsed().as_millis() as u64 } else { 0 },
        }
    }

    fn run_check_inner(&self, rc: &RelationCheck) -> Result<Option<Value>> {
        let dims = rc.window.dims()?;
        if rc.id.starts_with('H') && rc.id.len() == 2 {
            return self.run_daha(rc);
        }
        match rc.id.as_str() {
            "BIJ" => return Ok(check_bijection(&rc.window)),
            "EX" => return Ok(check_operator_examples(self.mutation)),
            "TINF" => return check_t_infinity(&rc.window),
            _ => {}
        }
        match rc.eval {
            Eval::Symbolic => {
                let model = self.symbolic_model(dims)?;
                run_on_model(rc, &model)
            }
            Eval::Sampled => {
                for p in 0..self.points.len() {
                    let model = self.sampled_model(dims, p)?;
                    if let Some(mut cx) = run_on_model(rc, &model)? {
                        if let Value::Object(m) = &mut cx {
                            let (t, c) = &self.points[p];
                            m.insert("point".into(), json!({"t": t.to_string(), "c": c.to_string()}));
                        }
                        return Ok(Some(cx));
                    }
                }
                Ok(None)
            }
        }
    }

    fn run_daha(&self, rc: &RelationCheck) -> Result<Option<Value>> {
        let n = rc.extra_i64("n").unwrap_or(2) as usize;
        let bound = rc.extra_i64("expbound").unwrap_or(2);
        let nu = match rc.extra_str("nu") {
            Some("generic") => NuSpec::Generic,
            Some("zero") => NuSpec::default(),
            _ => self.nu.clone(),
        };
        let l = rc.window.l;
        let params = Params::symbolic(nu.values(l)?);
        let check = |cfg_report: Vec<CheckReport>| -> Option<Value> {
            cfg_report.into_iter().find(|r| r.id == rc.id && !r.passed()).and_then(|r| r.counterexample)
        };
        match rc.eval {
            Eval::Symbolic => {
                let cfg = DahaConfig::new(l, params).with_mutation(self.mutation);
                Ok(check(check_daha_family(&rc.id, n, &cfg, bound)))
            }
            Eval::Sampled => {
                for (t, c) in &self.points {
                    let cfg = DahaConfig::new(l, params.specialize(t, c)).with_mutation(self.mutation);
                    if let Some(cx) = check(check_daha_family(&rc.id, n, &cfg, bound)) {
                        return Ok(Some(cx));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Runs checks in order; with `stop_on_failure` the first failing check ends the run.
    pub fn run_all(&self, checks: &[RelationCheck], stop_on_failure: bool) -> Report {
        let mut report = Report::default();
        for rc in checks {
            let r = self.run_check(rc);
            let failed = !r.passed();
            report.checks.push(r);
            if failed && stop_on_failure {
                break;
            }
        }
        report
    }
}

fn check_daha_family<R: Scalar>(family: &str, n: usize, cfg: &DahaConfig<R>, bound: i64) -> Vec<CheckReport> {
    check_daha_relations(n, cfg, bound, json!({}))
        .into_iter()
        .filter(|r| r.id == family)
        .collect()
}

fn state_json(dims: &Dims, state: &FockState) -> Value {
    let lc = charge_decompose(dims, state);
    json!({"components": lc.components, "charges": lc.charges})
}

pub fn fock_vec_json<R: Scalar>(dims: &Dims, v: &FockVec<R>) -> Value {
    let labelled = to_multipartition_labels(dims, v);
    Value::Array(
        labelled
            .iter()
            .map(|(lc, c)| json!({"components": lc.components, "charges": lc.charges, "coeff": c.to_json()}))
            .collect(),
    )
}

/// First basis vector (in window order) on which `residual` is nonzero.
fn first_failure<R: Scalar>(
    dims: &Dims,
    basis: &[FockState],
    residual: impl Fn(&FockState) -> Result<FockVec<R>> + Sync,
) -> Result<Option<Value>> {
    let found = basis
        .par_iter()
        .map(|st| residual(st).map(|r| (st, r)))
        .find_map_first(|res| match res {
            Ok((_, r)) if r.is_zero() => None,
            Ok((st, r)) => Some(Ok(json!({"input": state_json(dims, st), "residual": fock_vec_json(dims, &r)}))),
            Err(e) => Some(Err(e)),
        });
    found.transpose()
}

fn run_on_model<R: Scalar>(rc: &RelationCheck, model: &AffineModel<R>) -> Result<Option<Value>> {
    let dims = *model.dims();
    let basis = rc.window.basis()?;
    let id = rc.id.as_str();
    match id {
        _ if id.starts_with('Y') => {
            let i = rc.node(0)?;
            let j = rc.nodes.get(1).copied().unwrap_or(i);
            let expr = yangian_relation(
                id,
                (i, j),
                (rc.mode(0), rc.mode(1), rc.mode(2)),
                rc.kind.unwrap_or(Kind::Plus),
                dims.n,
                &model.hbar(),
                &model.beta(),
            )?;
            first_failure(&dims, &basis, |st| expr.apply(model, &FockVec::basis(st.clone())))
        }
        "STAB" => {
            let g = rc.generator()?;
            first_failure(&dims, &basis, |st| {
                let d = degree(&dims, st);
                let l = d.max(1);
                let a = model.module.yangian_on_state(g, st, Some(l))?;
                let mut b = model.module.yangian_on_state(g, st, Some(l + 1))?;
                b.sub_vec(&a);
                if b.is_zero() {
                    for out in a.keys() {
                        if degree(&dims, out) != d {
                            let mut flag = FockVec::new();
                            flag.add_term(out.clone(), R::one());
                            return Ok(flag);
                        }
                    }
                }
                Ok(b)
            })
        }
        "DEG" => {
            let g = rc.generator()?;
            let charge: i64 = rc.window.charges.iter().sum();
            let max_deg = rc.extra_i64("max_degree").unwrap_or(1);
            let level = rc.extra_i64("level").unwrap_or(1) as usize;
            let n = dims.truncation_length(charge, level);
            for d in 0..=max_deg {
                for w in v_basis(&dims, charge, n, d) {
                    let out = model.module.apply_word(g, &w)?;
                    if let Some((bad, _)) = out.iter().find(|(o, _)| word_degree(&dims, charge, o) != d) {
                        return Ok(Some(json!({"word": w.indices(), "degree": d, "image_word": bad.indices()})));
                    }
                }
            }
            Ok(None)
        }
        "CYC" => {
            let g = rc.generator()?;
            let power = if g.node == 1 { 2 } else { 1 };
            let rho = model.rho(g, power);
            first_failure(&dims, &basis, |st| {
                let v = FockVec::basis(st.clone());
                let mut up = v.clone();
                for _ in 0..power {
                    up = model.t_infinity(&up);
                }
                let mut lhs = model.act(g, &up)?;
                for _ in 0..power {
                    lhs = model.t_infinity_inverse(&lhs)?;
                }
                for (c, h) in &rho.terms {
                    lhs.sub_vec(&model.act(*h, &v)?.scale(c));
                }
                Ok(lhs)
            })
        }
        "KEY" => {
            let g = rc.generator()?;
            let variant = rc.extra_str("variant") == Some("N-1");
            first_failure(&dims, &basis, |st| {
                let l = degree(&dims, st).max(1);
                let (mut lhs, rhs) = model.key_identity_sides(g, st, l, variant)?;
                lhs.sub_vec(&rhs);
                Ok(lhs)
            })
        }
        "CELLX" => {
            let g = rc.generator()?;
            let path = match rc.extra_str("path") {
                Some("current") => Node0Path::Current,
                _ => Node0Path::Conjugation,
            };
            first_failure(&dims, &basis, |st| {
                let mut got = if g.node == 0 {
                    model.node0_state(g, st, path)?
                } else {
                    model.module.yangian_on_state(g, st, None)?
                };
                got.sub_vec(&model.cell_state(g, st));
                Ok(got)
            })
        }
        "LEVEL" => {
            let path = match rc.extra_str("path") {
                Some("current") => Node0Path::Current,
                Some("conjugation") => Node0Path::Conjugation,
                _ => Node0Path::Canonical,
            };
            first_failure(&dims, &basis, |st| {
                let mut out = model.node0_state(GeneratorId::cartan(0, 0), st, path)?;
                for i in 1..dims.n {
                    out.add_vec(&model.module.yangian_on_state(GeneratorId::cartan(i, 0), st, None)?);
                }
                out.add_term(st.clone(), -R::from_int(dims.l as i64));
                Ok(out)
            })
        }
        other => Err(Error::Config(format!("unknown check id {other}"))),
    }
}

/// Frozen operator values on small tensors, evaluated with the session's mutation.
pub fn check_operator_examples(mutation: Option<Mutation>) -> Option<Value> {
    use crate::daha::{apply_dunkl, apply_r, apply_y, divided_difference, PolyTensor, PolyVec};
    let (t, c) = (ParamPoly::t(), ParamPoly::c());
    let cfg = |l: usize| DahaConfig::new(l, Params::symbolic(vec![ParamPoly::zero_value(); l])).with_mutation(mutation);
    let pt = |m: &[i64], b: &[u8]| PolyTensor::new(m.to_vec(), b.to_vec());
    let fail = |name: &str, got: Value| Some(json!({"example": name, "got": got}));

    let dd: [(&[i64], Vec<(Vec<i64>, i64)>); 3] = [
        (&[1, 1], vec![]),
        (&[0, 2], vec![(vec![0, 2], -1), (vec![1, 1], -1)]),
        (&[2, 0], vec![(vec![1, 1], 1), (vec![0, 2], 1)]),
    ];
    for (m, want) in dd {
        let mut got = divided_difference(0, 1, m);
        got.sort();
        let mut want = want;
        want.sort();
        if got != want {
            return fail("divided difference", json!(got));
        }
    }

    let r_cases: [(&[u8], PolyVec<ParamPoly>); 3] = [
        (&[1, 1], PolyVec::term(pt(&[0, 0], &[1, 1]), ParamPoly::from_rational(&rat(1, 2)))),
        (&[2, 1], PolyVec::basis(pt(&[0, 0], &[1, 2]))),
        (&[1, 2], PolyVec::new()),
    ];
    for (b, want) in r_cases {
        if apply_r::<ParamPoly>(0, 1, &pt(&[0, 0], b)) != want {
            return fail("r", json!(b));
        }
    }

    let dunkl_cases: Vec<(usize, PolyTensor, PolyVec<ParamPoly>)> = vec![
        (1, pt(&[3], &[1]), PolyVec::term(pt(&[3], &[1]), t.scaled(&rat(3, 1)))),
        (1, pt(&[0], &[1]), PolyVec::new()),
        (1, pt(&[0, 1], &[1, 1]), PolyVec::new()),
        (2, pt(&[0, 0], &[2, 1]), PolyVec::term(pt(&[0, 0], &[1, 2]), -c.clone())),
        (2, pt(&[0, 0], &[1, 2]), PolyVec::new()),
    ];
    for (l, v, want) in dunkl_cases {
        let got = apply_dunkl(0, &v, &cfg(l));
        if got != want {
            return fail("dunkl", crate::daha::poly_vec_json(&got));
        }
    }

    let v = pt(&[1, 1], &[1, 1]);
    let want = PolyVec::term(v.clone(), -t + c.scaled(&rat(1, 2)));
    let got = apply_y(0, &v, &cfg(1));
    if got != want {
        return fail("y", crate::daha::poly_vec_json(&got));
    }
    None
}

/// `charge_compose ∘ charge_decompose = id` and `Σ c_s = M` on partitions up to the window size.
pub fn check_bijection(window: &Window) -> Option<Value> {
    let dims = match window.dims() {
        Ok(d) => d,
        Err(e) => return Some(json!({"error": e.to_string()})),
    };
    let m: i64 = window.charges.iter().sum();
    let mut seen = std::collections::HashSet::new();
    for lam in Partition::all_up_to(window.max_boxes) {
        let st = FockState::new(lam.clone(), m);
        let lc = charge_decompose(&dims, &st);
        let ok = lc.total_charge() == m
            && seen.insert(lc.clone())
            && charge_compose(&dims, &lc).ok().as_ref() == Some(&st);
        if !ok {
            return Some(json!({"partition": lam, "M": m, "image": lc}));
        }
    }
    None
}

/// `T∞⁻¹ ∘ T∞ = id` on the window, and the global index shift at `L = 1`.
pub fn check_t_infinity(window: &Window) -> Result<Option<Value>> {
    let dims = window.dims()?;
    for st in window.basis()? {
        let (s, img) = crate::affine::t_infinity_state(&dims, &st);
        let (s2, back) = crate::affine::t_infinity_inverse_state(&dims, &img)?;
        if back != st || s * s2 != 1 {
            return Ok(Some(json!({"input": state_json(&dims, &st), "round_trip": state_json(&dims, &back)})));
        }
        if dims.l == 1 && (s != 1 || img != FockState::new(st.partition.clone(), st.charge + 1)) {
            return Ok(Some(json!({"input": state_json(&dims, &st), "image": state_json(&dims, &img), "sign": s})));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!("unknown profile {s:?}"))),
        }
    }
}

/// Standard windows: `F(0)` at level one and `F(-1, 1)` at level two.
pub fn standard_windows(max_boxes: usize) -> Vec<Window> {
    vec![Window::new(3, 1, vec![0], max_boxes), Window::new(3, 2, vec![-1, 1], max_boxes)]
}

const KINDS: [Kind; 3] = [Kind::Plus, Kind::Minus, Kind::Cartan];
const SIGNS: [Kind; 2] = [Kind::Plus, Kind::Minus];

pub fn daha_checks(eval: Eval, max_n: usize, bound: i64) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    for l in 1..=2 {
        let w = Window::new(3, l, vec![0; l], 0);
        for n in 1..=max_n {
            for nu in ["zero", "generic"] {
                for fam in ["H1", "H2", "H3", "H4"] {
                    out.push(RelationCheck::new(fam, &w, eval).extra(json!({"n": n, "expbound": bound, "nu": nu})));
                }
            }
        }
    }
    out
}

/// (Y1)-(Y5), (Y12) among finite nodes, modes `<= max_mode`.
pub fn finite_relation_checks(window: &Window, eval: Eval, max_mode: u32) -> Vec<RelationCheck> {
    let nodes: Vec<usize> = (1..window.n).collect();
    let modes: Vec<u32> = (0..=max_mode).collect();
    let mut out = Vec::new();
    for &i in &nodes {
        for &j in &nodes {
            for &r in &modes {
                for &s in &modes {
                    out.push(RelationCheck::new("Y1", window, eval).nodes(&[i, j]).modes(&[r, s]));
                    out.push(RelationCheck::new("Y2", window, eval).nodes(&[i, j]).modes(&[r, s]));
                    for k in SIGNS {
                        if r == 0 {
                            out.push(RelationCheck::new("Y3", window, eval).nodes(&[i, j]).modes(&[0, s]).kind(k));
                        }
                        out.push(RelationCheck::new("Y4", window, eval).nodes(&[i, j]).modes(&[r, s]).kind(k));
                        out.push(RelationCheck::new("Y5", window, eval).nodes(&[i, j]).modes(&[r, s]).kind(k));
                    }
                    if i != j {
                        for &r2 in &modes {
                            if r2 < r {
                                continue;
                            }
                            for k in SIGNS {
                                out.push(RelationCheck::new("Y12", window, eval).nodes(&[i, j]).modes(&[r, s, r2]).kind(k));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// (Y6)-(Y11) at their node pairs.
pub fn affine_relation_checks(window: &Window, eval: Eval, max_mode: u32) -> Vec<RelationCheck> {
    let n = window.n;
    let mut out = Vec::new();
    for r in 0..=max_mode {
        for s in 0..=max_mode {
            for (i, j) in [(1, 0), (0, n - 1)] {
                for id in ["Y6", "Y7", "Y8", "Y9"] {
                    out.push(RelationCheck::new(id, window, eval).nodes(&[i, j]).modes(&[r, s]));
                }
            }
            for (i, j) in [(0, 1), (n - 1, 0)] {
                for id in ["Y10", "Y11"] {
                    out.push(RelationCheck::new(id, window, eval).nodes(&[i, j]).modes(&[r, s]));
                }
            }
        }
    }
    out
}

/// (Y1)-(Y3) and (Y12) with node 0 involved.
pub fn affine_extra_checks(window: &Window, eval: Eval, max_mode: u32) -> Vec<RelationCheck> {
    let n = window.n;
    let mut out = Vec::new();
    for r in 0..=max_mode {
        for s in 0..=max_mode {
            for (i, j) in [(0, 0), (0, 1), (1, 0), (0, n - 1), (n - 1, 0)] {
                out.push(RelationCheck::new("Y1", window, eval).nodes(&[i, j]).modes(&[r, s]));
                out.push(RelationCheck::new("Y2", window, eval).nodes(&[i, j]).modes(&[r, s]));
                if r == 0 {
                    for k in SIGNS {
                        out.push(RelationCheck::new("Y3", window, eval).nodes(&[i, j]).modes(&[0, s]).kind(k));
                    }
                }
                if i != j && s == 0 {
                    for k in SIGNS {
                        out.push(RelationCheck::new("Y12", window, eval).nodes(&[i, j]).modes(&[r, 0, r]).kind(k));
                    }
                }
            }
            if r == 0 && s == 0 {
                for k in SIGNS {
                    out.push(RelationCheck::new("Y4", window, eval).nodes(&[0, 0]).modes(&[0, 0]).kind(k));
                    out.push(RelationCheck::new("Y5", window, eval).nodes(&[0, 0]).modes(&[0, 0]).kind(k));
                }
            }
        }
    }
    out
}

pub fn stabilization_checks(window: &Window, max_mode: u32) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    for i in 1..window.n {
        for r in 0..=max_mode {
            for k in KINDS {
                out.push(RelationCheck::new("STAB", window, Eval::Symbolic).nodes(&[i]).modes(&[r]).kind(k));
                out.push(
                    RelationCheck::new("DEG", window, Eval::Symbolic)
                        .nodes(&[i])
                        .modes(&[r])
                        .kind(k)
                        .extra(json!({"max_degree": 1, "level": 1})),
                );
            }
        }
    }
    out
}

pub fn cyclic_checks(window: &Window, eval: Eval, max_mode: u32) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    for i in 1..window.n {
        for r in 0..=max_mode {
            for k in KINDS {
                out.push(RelationCheck::new("CYC", window, eval).nodes(&[i]).modes(&[r]).kind(k));
            }
        }
    }
    out
}

pub fn key_checks(window: &Window, eval: Eval) -> Vec<RelationCheck> {
    let n = window.n;
    let mut out = Vec::new();
    let gens = |i: usize| {
        vec![
            GeneratorId::plus(i, 0),
            GeneratorId::minus(i, 0),
            GeneratorId::cartan(i, 0),
            GeneratorId::minus(i, 1),
        ]
    };
    for i in 1..=n - 2 {
        for g in gens(i) {
            out.push(RelationCheck::new("KEY", window, eval).nodes(&[g.node]).modes(&[g.mode]).kind(g.kind).extra(json!({"variant": "N"})));
        }
    }
    for g in gens(n - 1) {
        out.push(RelationCheck::new("KEY", window, eval).nodes(&[g.node]).modes(&[g.mode]).kind(g.kind).extra(json!({"variant": "N-1"})));
    }
    out
}

pub fn cell_checks(window: &Window) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    for i in 0..window.n {
        for k in KINDS {
            if i == 0 {
                for path in ["conjugation", "current"] {
                    out.push(RelationCheck::new("CELLX", window, Eval::Symbolic).nodes(&[0]).kind(k).extra(json!({"path": path})));
                }
            } else {
                out.push(RelationCheck::new("CELLX", window, Eval::Symbolic).nodes(&[i]).kind(k));
            }
        }
    }
    out
}

pub fn level_checks(window: &Window) -> Vec<RelationCheck> {
    ["canonical", "conjugation", "current"]
        .into_iter()
        .map(|p| RelationCheck::new("LEVEL", window, Eval::Symbolic).extra(json!({"path": p})))
        .collect()
}

/// The check list of a profile. The quick profile is the acceptance set.
pub fn profile_checks(profile: Profile) -> Vec<RelationCheck> {
    let full = profile == Profile::Full;
    let mut out = Vec::new();
    // structural checks first: cheap and they localize defects
    for (n, l) in [(3, 1), (3, 2), (4, 2)] {
        let charges = if l == 1 { vec![0] } else { vec![0, 0] };
        out.push(RelationCheck::new("BIJ", &Window::new(n, l, charges, if full { 8 } else { 6 }), Eval::Symbolic));
    }
    for w in standard_windows(4) {
        out.push(RelationCheck::new("TINF", &w, Eval::Symbolic));
    }
    out.push(RelationCheck::new("EX", &Window::new(3, 2, vec![0, 0], 0), Eval::Symbolic));
    for w in standard_windows(4) {
        out.extend(cell_checks(&w));
        out.extend(level_checks(&w));
    }
    for w in standard_windows(3) {
        out.extend(stabilization_checks(&w, if full { 2 } else { 1 }));
    }
    for w in standard_windows(2) {
        out.extend(key_checks(&w, Eval::Symbolic));
        out.extend(cyclic_checks(&w, Eval::Symbolic, 1));
    }
    for w in standard_windows(3) {
        out.extend(finite_relation_checks(&w, Eval::Symbolic, 1));
    }
    for w in standard_windows(2) {
        out.extend(affine_relation_checks(&w, Eval::Sampled, 1));
        out.extend(affine_relation_checks(&w, Eval::Symbolic, 1));
        if full {
            out.extend(affine_extra_checks(&w, Eval::Symbolic, 1));
        }
    }
    out.extend(daha_checks(Eval::Symbolic, 3, 2));
    if full {
        for w in standard_windows(3) {
            out.extend(cyclic_checks(&w, Eval::Symbolic, 1));
            out.extend(key_checks(&w, Eval::Symbolic));
        }
        for w in standard_windows(2) {
            for i in 1..w.n {
                for total in 2..=3u32 {
                    for r in 0..=total {
                        out.push(RelationCheck::new("Y2", &w, Eval::Sampled).nodes(&[i, i]).modes(&[r, total - r]));
                    }
                }
            }
        }
        for w in [Window::new(4, 1, vec![0], 2), Window::new(4, 2, vec![0, 1], 2)] {
            out.extend(finite_relation_checks(&w, Eval::Sampled, 1));
            out.extend(affine_relation_checks(&w, Eval::Sampled, 1));
            out.extend(cyclic_checks(&w, Eval::Sampled, 1));
            out.extend(key_checks(&w, Eval::Sampled));
        }
    }
    out
}

/// Basis of the window as charged multipartitions, in the documented order.
pub fn dump_basis(window: &Window) -> Vec<ChargedMultipartition> {
    multipartitions_up_to(&window.charges, window.max_boxes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_names_round_trip() {
        for m in Mutation::ALL {
            assert_eq!(Mutation::from_name(m.name()), Some(m));
        }
        assert_eq!(Mutation::from_name("nope"), None);
    }

    #[test]
    fn y3_on_one_box_window() {
        let session = Session::default();
        for w in standard_windows(1) {
            for i in 1..3 {
                for k in SIGNS {
                    let rc = RelationCheck::new("Y3", &w, Eval::Symbolic).nodes(&[i, i]).modes(&[0, 0]).kind(k);
                    assert!(session.run_check(&rc).passed());
                }
            }
        }
    }

    #[test]
    fn serre_level_one() {
        let session = Session::default();
        let w = Window::new(3, 1, vec![0], 3);
        for k in SIGNS {
            let rc = RelationCheck::new("Y12", &w, Eval::Symbolic).nodes(&[1, 2]).modes(&[0, 0, 0]).kind(k);
            let r = session.run_check(&rc);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn vacuum_window_diagonal_relations() {
        let session = Session::default();
        let w = Window::new(3, 1, vec![0], 0);
        for i in 1..3 {
            for j in 1..3 {
                let rc = RelationCheck::new("Y1", &w, Eval::Symbolic).nodes(&[i, j]).modes(&[1, 1]);
                assert!(session.run_check(&rc).passed());
            }
        }
    }

    #[test]
    fn report_is_deterministic_without_timing() {
        let w = Window::new(3, 1, vec![0], 2);
        let checks = vec![
            RelationCheck::new("Y2", &w, Eval::Symbolic).nodes(&[1, 1]).modes(&[1, 0]),
            RelationCheck::new("TINF", &w, Eval::Symbolic),
        ];
        let a = serde_json::to_string(&Session::default().with_timing(false).run_all(&checks, false)).unwrap();
        let b = serde_json::to_string(&Session::default().with_timing(false).run_all(&checks, false)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn points_parse() {
        let p = parse_points("t=5/7,c=2/3;t=1,c=-1/9").unwrap();
        assert_eq!(p, vec![(rat(5, 7), rat(2, 3)), (rat(1, 1), rat(-1, 9))]);
        assert!(parse_points("t=1").is_err());
    }
}
