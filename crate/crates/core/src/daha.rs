//! The degenerate double affine Hecke algebra acting on `C[z_1^±, ..., z_n^±] ⊗ W^{⊗n}`.
//!
//! Positions are 0-based. Operators act on the right; a word `g_1 g_2 ... g_k` is applied
//! to a vector by applying `g_1` first.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{rat, Params, Scalar};
use crate::sparse::SparseVec;
use crate::verify::{CheckReport, Mutation, Status};

/// The monomial `z^m ⊗ w_{b_1} ⊗ ... ⊗ w_{b_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyTensor {
    pub exponents: Vec<i64>,
    pub colors: Vec<u8>,
}

impl PolyTensor {
    pub fn new(exponents: Vec<i64>, colors: Vec<u8>) -> Self {
        assert_eq!(exponents.len(), colors.len());
        Self { exponents, colors }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    fn swap_colors(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.colors.swap(i, j);
        out
    }

    fn swap_both(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.colors.swap(i, j);
        out.exponents.swap(i, j);
        out
    }

    pub fn to_json(&self) -> Value {
        json!({"exponents": self.exponents, "colors": self.colors})
    }
}

pub type PolyVec<R> = SparseVec<PolyTensor, R>;

/// Level `L`, the parameters `t, c, nu` and an optional seeded defect.
#[derive(Clone, Debug)]
pub struct DahaConfig<R> {
    pub l: usize,
    pub params: Params<R>,
    pub mutation: Option<Mutation>,
}

impl<R: Scalar> DahaConfig<R> {
    pub fn new(l: usize, params: Params<R>) -> Self {
        assert_eq!(params.nu.len(), l, "one nu value per W-color");
        Self {
            l,
            params,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    fn exchange_sign(&self) -> i64 {
        if self.mutated(Mutation::ExchangeSign) {
            1
        } else {
            -1
        }
    }
}

/// `(z_j / (z_i - z_j)) (1 - K_ij)` on the monomial `z^exps`, `i < j`, as a list of
/// monomials with integer coefficients.
pub fn divided_difference(i: usize, j: usize, exps: &[i64]) -> Vec<(Vec<i64>, i64)> {
    divided_difference_impl(i, j, exps, false)
}

fn divided_difference_impl(i: usize, j: usize, exps: &[i64], off_by_one: bool) -> Vec<(Vec<i64>, i64)> {
    assert!(i < j && j < exps.len());
    let (a, b) = (exps[i], exps[j]);
    let extra = i64::from(off_by_one);
    let mut out = Vec::new();
    let mut push = |ei: i64, ej: i64, coeff: i64| {
        let mut e = exps.to_vec();
        e[i] = ei;
        e[j] = ej;
        out.push((e, coeff));
    };
    if a < b {
        for r in 0..(b - a + extra) {
            push(a + r, b - r, -1);
        }
    } else if a > b {
        for r in 0..(a - b + extra) {
            push(b + r, a - r, 1);
        }
    }
    out
}

/// `r_ij` for `i < j`.
pub fn apply_r<R: Scalar>(i: usize, j: usize, pt: &PolyTensor) -> PolyVec<R> {
    apply_r_impl(i, j, pt, false)
}

fn apply_r_impl<R: Scalar>(i: usize, j: usize, pt: &PolyTensor, wrong_branch: bool) -> PolyVec<R> {
    assert!(i < j);
    let (bi, bj) = (pt.colors[i], pt.colors[j]);
    let swap = if wrong_branch { bi < bj } else { bi > bj };
    if bi == bj {
        PolyVec::term(pt.clone(), R::from_rational(&rat(1, 2)))
    } else if swap {
        PolyVec::basis(pt.swap_colors(i, j))
    } else {
        PolyVec::new()
    }
}

/// `(z_j/(z_i - z_j))(1 - K_ij) P_ij + r_ij` for `i < j`, accumulated into `out` with `factor`.
fn exchange_term<R: Scalar>(i: usize, j: usize, pt: &PolyTensor, cfg: &DahaConfig<R>, factor: &R, out: &mut PolyVec<R>) {
    let swapped = pt.swap_colors(i, j);
    let off = cfg.mutated(Mutation::DividedDifferenceOffByOne);
    for (e, k) in divided_difference_impl(i, j, &pt.exponents, off) {
        out.add_term(PolyTensor::new(e, swapped.colors.clone()), factor.clone() * &R::from_int(k));
    }
    let r = apply_r_impl::<R>(i, j, pt, cfg.mutated(Mutation::RBranch));
    out.add_scaled(&r, factor);
}

/// The matrix Dunkl-Cherednik operator `d_k^{(n)}` on one monomial.
pub fn apply_dunkl<R: Scalar>(k: usize, pt: &PolyTensor, cfg: &DahaConfig<R>) -> PolyVec<R> {
    let n = pt.len();
    let p = &cfg.params;
    let mut out = PolyVec::new();
    let mut diag = p.t.clone() * &R::from_int(pt.exponents[k]);
    if cfg.mutated(Mutation::DunklTSign) {
        diag = -diag;
    }
    let mut constant = p.nu[(pt.colors[k] - 1) as usize].clone();
    if !cfg.mutated(Mutation::DropHalfN) {
        constant += &R::from_rational(&rat(n as i64, 2 * cfg.l as i64));
    }
    constant -= &R::from_rational(&rat(1, 2));
    diag -= &(p.c.clone() * &constant);
    out.add_term(pt.clone(), diag);
    let neg_c = -p.c.clone();
    for j in 0..k {
        exchange_term(j, k, pt, cfg, &p.c, &mut out);
    }
    for j in k + 1..n {
        exchange_term(k, j, pt, cfg, &neg_c, &mut out);
    }
    out
}

/// `K_ij P_ij` with the representation sign: the image of the transposition `s_ij`.
pub fn apply_transposition<R: Scalar>(i: usize, j: usize, pt: &PolyTensor, cfg: &DahaConfig<R>) -> PolyVec<R> {
    PolyVec::term(pt.swap_both(i, j), R::from_int(cfg.exchange_sign()))
}

/// `y_k^{(n)} = u_k + (c/2)(Σ_{k<j} s_kj - Σ_{j<k} s_jk)` with `u_k -> -d_k`.
pub fn apply_y<R: Scalar>(k: usize, pt: &PolyTensor, cfg: &DahaConfig<R>) -> PolyVec<R> {
    let n = pt.len();
    let mut out = apply_dunkl(k, pt, cfg).scale(&-R::one());
    let half_c = cfg.params.c.scaled(&rat(1, 2));
    let sign = R::from_int(cfg.exchange_sign());
    for j in 0..n {
        if j == k {
            continue;
        }
        let mut coeff = half_c.clone() * &sign;
        if j < k {
            coeff = -coeff;
        }
        out.add_term(pt.swap_both(j, k), coeff);
    }
    out
}

/// Generators of the algebra, as they appear in relation words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DahaGen {
    /// `s_i = s_{i,i+1}`.
    S(usize),
    /// `s_ij`.
    Sij(usize, usize),
    X(usize),
    XInv(usize),
    U(usize),
}

pub fn apply_gen<R: Scalar>(g: DahaGen, v: &PolyVec<R>, cfg: &DahaConfig<R>) -> PolyVec<R> {
    let mut out = PolyVec::new();
    for (pt, coeff) in v {
        let image = match g {
            DahaGen::S(i) => apply_transposition(i, i + 1, pt, cfg),
            DahaGen::Sij(i, j) => apply_transposition(i.min(j), i.max(j), pt, cfg),
            DahaGen::X(i) | DahaGen::XInv(i) => {
                let mut q = pt.clone();
                q.exponents[i] += if matches!(g, DahaGen::X(_)) { 1 } else { -1 };
                PolyVec::basis(q)
            }
            DahaGen::U(i) => apply_dunkl(i, pt, cfg).scale(&-R::one()),
        };
        out.add_scaled(&image, coeff);
    }
    out
}

/// Applies the word left to right.
pub fn apply_word<R: Scalar>(word: &[DahaGen], v: &PolyVec<R>, cfg: &DahaConfig<R>) -> PolyVec<R> {
    word.iter().fold(v.clone(), |acc, &g| apply_gen(g, &acc, cfg))
}

/// A relation `Σ coeff · word = 0`.
#[derive(Clone, Debug)]
pub struct DahaRelation<R> {
    pub family: &'static str,
    pub label: String,
    pub terms: Vec<(R, Vec<DahaGen>)>,
}

fn rel<R: Scalar>(family: &'static str, label: String, terms: Vec<(R, Vec<DahaGen>)>) -> DahaRelation<R> {
    DahaRelation { family, label, terms }
}

/// Every instance of the defining relations for `n` positions.
pub fn daha_relations<R: Scalar>(n: usize, params: &Params<R>) -> Vec<DahaRelation<R>> {
    use DahaGen::*;
    let one = R::one;
    let neg = || -R::one();
    let t = &params.t;
    let c = &params.c;
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        out.push(rel("H1", format!("s{i}^2=1"), vec![(one(), vec![S(i), S(i)]), (neg(), vec![])]));
        if i + 2 < n {
            out.push(rel(
                "H1",
                format!("braid s{i}"),
                vec![(one(), vec![S(i), S(i + 1), S(i)]), (neg(), vec![S(i + 1), S(i), S(i + 1)])],
            ));
        }
        for j in 0..n.saturating_sub(1) {
            if j + 1 < i || j > i + 1 {
                out.push(rel("H1", format!("s{i}s{j}"), vec![(one(), vec![S(i), S(j)]), (neg(), vec![S(j), S(i)])]));
            }
        }
    }
    for i in 0..n {
        out.push(rel("H2", format!("x{i}x{i}^-1"), vec![(one(), vec![X(i), XInv(i)]), (neg(), vec![])]));
        out.push(rel("H2", format!("x{i}^-1x{i}"), vec![(one(), vec![XInv(i), X(i)]), (neg(), vec![])]));
        for j in 0..n {
            if i != j {
                out.push(rel("H2", format!("x{i}x{j}"), vec![(one(), vec![X(i), X(j)]), (neg(), vec![X(j), X(i)])]));
                out.push(rel("H3", format!("u{i}u{j}"), vec![(one(), vec![U(i), U(j)]), (neg(), vec![U(j), U(i)])]));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        out.push(rel("H2", format!("s{i}x{i}"), vec![(one(), vec![S(i), X(i)]), (neg(), vec![X(i + 1), S(i)])]));
        out.push(rel(
            "H3",
            format!("s{i}u{i}"),
            vec![(one(), vec![S(i), U(i)]), (neg(), vec![U(i + 1), S(i)]), (c.clone(), vec![])],
        ));
        for j in 0..n {
            if j != i && j != i + 1 {
                out.push(rel("H2", format!("s{i}x{j}"), vec![(one(), vec![S(i), X(j)]), (neg(), vec![X(j), S(i)])]));
                out.push(rel("H3", format!("s{i}u{j}"), vec![(one(), vec![S(i), U(j)]), (neg(), vec![U(j), S(i)])]));
            }
        }
    }
    for i in 0..n {
        // [u_i, x_i] = t x_i + c (Σ_{j<i} x_j s_ji + Σ_{i<j} x_i s_ij)
        let mut terms = vec![(one(), vec![U(i), X(i)]), (neg(), vec![X(i), U(i)]), (-t.clone(), vec![X(i)])];
        for j in 0..n {
            if j < i {
                terms.push((-c.clone(), vec![X(j), Sij(j, i)]));
            } else if j > i {
                terms.push((-c.clone(), vec![X(i), Sij(i, j)]));
            }
        }
        out.push(rel("H4", format!("[u{i},x{i}]"), terms));
        for j in 0..n {
            if j == i {
                continue;
            }
            let rhs = if i < j { vec![X(i), Sij(i, j)] } else { vec![X(j), Sij(j, i)] };
            out.push(rel(
                "H4",
                format!("[u{i},x{j}]"),
                vec![(one(), vec![U(i), X(j)]), (neg(), vec![X(j), U(i)]), (c.clone(), rhs)],
            ));
        }
    }
    out
}

/// Every label with `|m_i| <= bound` and colors in `1..=L`, in lexicographic order.
pub fn poly_labels(n: usize, l: usize, bound: i64) -> Vec<PolyTensor> {
    let mut out = Vec::new();
    let exps: Vec<Vec<i64>> = product(n, &(-bound..=bound).collect::<Vec<_>>());
    let colors: Vec<Vec<u8>> = product(n, &(1..=l as u8).collect::<Vec<_>>());
    for e in &exps {
        for b in &colors {
            out.push(PolyTensor::new(e.clone(), b.clone()));
        }
    }
    out
}

fn product<T: Clone>(n: usize, values: &[T]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn poly_vec_json<R: Scalar>(v: &PolyVec<R>) -> Value {
    Value::Array(
        v.iter()
            .map(|(pt, c)| json!({"exponents": pt.exponents, "colors": pt.colors, "coeff": c.to_json()}))
            .collect(),
    )
}

/// Evaluates one relation on one label; the residual is zero iff it holds there.
pub fn relation_residual<R: Scalar>(relation: &DahaRelation<R>, pt: &PolyTensor, cfg: &DahaConfig<R>) -> PolyVec<R> {
    let start = PolyVec::basis(pt.clone());
    let mut acc = PolyVec::new();
    for (coeff, word) in &relation.terms {
        acc.add_scaled(&apply_word(word, &start, cfg), coeff);
    }
    acc
}

/// Checks (H1)-(H4) on every label with `|m_i| <= bound`, one report per family.
pub fn check_daha_relations<R: Scalar>(n: usize, cfg: &DahaConfig<R>, bound: i64, params_json: Value) -> Vec<CheckReport> {
    let labels = poly_labels(n, cfg.l, bound);
    let relations = daha_relations(n, &cfg.params);
    ["H1", "H2", "H3", "H4"]
        .into_iter()
        .map(|family| {
            let start = Instant::now();
            let fam: Vec<&DahaRelation<R>> = relations.iter().filter(|r| r.family == family).collect();
            let failure = fam.iter().find_map(|relation| {
                labels.par_iter().find_map_first(|pt| {
                    let residual = relation_residual(relation, pt, cfg);
                    (!residual.is_zero()).then(|| {
                        json!({
                            "relation": relation.label,
                            "input": pt.to_json(),
                            "residual": poly_vec_json(&residual),
                        })
                    })
                })
            });
            let mut params = params_json.clone();
            if let Value::Object(map) = &mut params {
                map.insert("n".into(), json!(n));
                map.insert("L".into(), json!(cfg.l));
                map.insert("expbound".into(), json!(bound));
                map.insert("instances".into(), json!(fam.len()));
            }
            CheckReport {
                id: family.to_string(),
                params,
                status: if failure.is_some() { Status::Fail } else { Status::Pass },
                counterexample: failure,
                millis: start.elapsed().as_millis() as u64,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ParamPoly, Rational};
    use num::{One, Zero};
    use std::collections::BTreeMap;

    fn cfg(l: usize, nu: Vec<ParamPoly>) -> DahaConfig<ParamPoly> {
        DahaConfig::new(l, Params::symbolic(nu))
    }

    /// `(z_j/(z_i - z_j))(P - K_ij P)` for `P = z_i^a z_j^b` by long division in `z_i`.
    fn divided_difference_oracle(a: i64, b: i64) -> BTreeMap<(i64, i64), i64> {
        const SHIFT: i64 = 10;
        let mut num: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        *num.entry((a + SHIFT, b + SHIFT)).or_default() += 1;
        *num.entry((b + SHIFT, a + SHIFT)).or_default() -= 1;
        num.retain(|_, c| *c != 0);
        let mut quotient: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        while let Some((&(di, dj), &c)) = num.iter().next_back() {
            assert!(di >= 1, "division left a remainder");
            *quotient.entry((di - 1, dj)).or_default() += c;
            *num.entry((di, dj)).or_default() -= c;
            *num.entry((di - 1, dj + 1)).or_default() += c;
            num.retain(|_, c| *c != 0);
        }
        quotient
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((di, dj), c)| ((di - SHIFT, dj - SHIFT + 1), c))
            .collect()
    }

    #[test]
    fn divided_difference_examples() {
        assert!(divided_difference(0, 1, &[1, 1]).is_empty());
        let mut got = divided_difference(0, 1, &[0, 2]);
        got.sort();
        assert_eq!(got, vec![(vec![0, 2], -1), (vec![1, 1], -1)]);
        let mut got = divided_difference(0, 1, &[2, 0]);
        got.sort();
        assert_eq!(got, vec![(vec![0, 2], 1), (vec![1, 1], 1)]);
    }

    #[test]
    fn divided_difference_matches_exact_division() {
        for a in -4..=4 {
            for b in -4..=4 {
                let got: BTreeMap<(i64, i64), i64> =
                    divided_difference(0, 1, &[a, b]).into_iter().map(|(e, c)| ((e[0], e[1]), c)).collect();
                assert_eq!(got, divided_difference_oracle(a, b), "m = ({a}, {b})");
            }
        }
    }

    #[test]
    fn r_examples() {
        let v: PolyVec<Rational> = apply_r(0, 1, &PolyTensor::new(vec![0, 0], vec![1, 1]));
        assert_eq!(v.get(&PolyTensor::new(vec![0, 0], vec![1, 1])), Some(&rat(1, 2)));
        let v: PolyVec<Rational> = apply_r(0, 1, &PolyTensor::new(vec![3, 1], vec![2, 1]));
        assert_eq!(v, PolyVec::basis(PolyTensor::new(vec![3, 1], vec![1, 2])));
        let v: PolyVec<Rational> = apply_r(0, 1, &PolyTensor::new(vec![0, 0], vec![1, 2]));
        assert!(v.is_zero());
    }

    #[test]
    fn dunkl_examples() {
        let c = cfg(1, vec![ParamPoly::zero()]);
        for m in -3..=3 {
            let pt = PolyTensor::new(vec![m], vec![1]);
            let v = apply_dunkl(0, &pt, &c);
            if m == 0 {
                assert!(v.is_zero());
            } else {
                assert_eq!(v, PolyVec::term(pt.clone(), ParamPoly::t().scaled(&rat(m, 1))));
            }
        }
        let v = apply_dunkl(0, &PolyTensor::new(vec![0, 1], vec![1, 1]), &c);
        assert!(v.is_zero(), "{v:?}");
    }

    #[test]
    fn y_examples() {
        let c = cfg(1, vec![ParamPoly::zero()]);
        let pt = PolyTensor::new(vec![1, 1], vec![1, 1]);
        let mut expected = apply_dunkl(0, &pt, &c).scale(&-ParamPoly::one());
        expected.add_term(pt.clone(), -ParamPoly::c().scaled(&rat(1, 2)));
        assert_eq!(apply_y(0, &pt, &c), expected);
        let single = PolyTensor::new(vec![2], vec![1]);
        assert_eq!(apply_y(0, &single, &c), apply_dunkl(0, &single, &c).scale(&-ParamPoly::one()));
    }

    #[test]
    fn y_at_c_zero_is_minus_euler_operator() {
        let params = Params { t: rat(1, 1), c: Rational::zero(), nu: vec![rat(3, 7), rat(-2, 5)] };
        let c = DahaConfig::new(2, params);
        for pt in poly_labels(3, 2, 1) {
            for k in 0..3 {
                let expected = PolyVec::term(pt.clone(), rat(-pt.exponents[k], 1));
                assert_eq!(apply_y(k, &pt, &c), expected);
            }
        }
    }

    #[test]
    fn relations_hold_small() {
        for n in 1..=2 {
            let c = cfg(1, vec![ParamPoly::zero()]);
            for r in check_daha_relations(n, &c, 2, json!({})) {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn relations_hold_level_two_symbolic_nu() {
        let nu = vec![
            ParamPoly::t().scaled(&rat(2, 7)) - ParamPoly::c().scaled(&rat(3, 5)),
            ParamPoly::c().scaled(&rat(4, 3)) - ParamPoly::t().scaled(&rat(1, 11)),
        ];
        let c = cfg(2, nu);
        for r in check_daha_relations(3, &c, 1, json!({})) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn dunkl_preserves_exponent_bounds() {
        let c = cfg(2, vec![ParamPoly::t(), ParamPoly::c()]);
        for pt in poly_labels(3, 2, 2) {
            for k in 0..3 {
                let top = *pt.exponents.iter().max().unwrap();
                let bottom = *pt.exponents.iter().min().unwrap();
                for (q, _) in &apply_dunkl(k, &pt, &c) {
                    assert!(q.exponents.iter().all(|&e| e <= top && e >= bottom));
                    let total: i64 = q.exponents.iter().sum();
                    assert_eq!(total, pt.exponents.iter().sum::<i64>());
                }
            }
        }
    }
}
