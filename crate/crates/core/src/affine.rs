//! The affine node: the automorphism `ρ`, the shift maps `T` and `T∞`, and the assembled
//! affine Yangian action on `F(c)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::coeff::{binomial, rat, Scalar};
use crate::combinatorics::chevalley_on_basis;
use crate::daha::DahaConfig;
use crate::error::{Error, Result};
use crate::generator::{GeneratorId, Kind};
use crate::schurweyl::{chevalley_matrix, current_on_word, wrap_words, WedgeModule};
use crate::verify::Mutation;
use crate::wedge::{
    charge_compose, charge_decompose, color_gauge, min_truncation, normal_order, Dims, FockState, FockVec,
    WedgeVec, WedgeWord,
};

/// `ρ(g)` or `ρ²(g)` as a combination of generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoExpansion<R> {
    pub input: GeneratorId,
    pub terms: Vec<(R, GeneratorId)>,
}

/// `ρ(X_{i,r}) = Σ_s C(r,s) γ^{r-s} X_{i-1,s}` with `γ = β` at `i ∈ {0, 1}` and `ħ/2` otherwise.
pub fn rho_expand<R: Scalar>(g: GeneratorId, power: u32, n: usize, hbar: &R, beta: &R) -> RhoExpansion<R> {
    rho_expand_impl(g, power, n, hbar, beta, false)
}

fn rho_expand_impl<R: Scalar>(
    g: GeneratorId,
    power: u32,
    n: usize,
    hbar: &R,
    beta: &R,
    wrong_node0_shift: bool,
) -> RhoExpansion<R> {
    let mut terms = vec![(R::one(), g)];
    for _ in 0..power {
        let mut next: Vec<(R, GeneratorId)> = Vec::new();
        for (coeff, h) in terms {
            let gamma = if h.node == 1 || (h.node == 0 && !wrong_node0_shift) {
                beta.clone()
            } else {
                hbar.scaled(&rat(1, 2))
            };
            let target = (h.node + n - 1) % n;
            let mut power_of_gamma = R::one();
            for s in (0..=h.mode).rev() {
                let c = coeff.clone() * &power_of_gamma * &R::from_rational(&binomial(h.mode, s));
                let id = GeneratorId::new(h.kind, target, s);
                match next.iter_mut().find(|(_, x)| *x == id) {
                    Some(slot) => slot.0 += &c,
                    None => next.push((c, id)),
                }
                power_of_gamma = power_of_gamma * &gamma;
            }
        }
        next.retain(|(c, _)| !c.is_zero());
        next.sort_by(|a, b| b.1.mode.cmp(&a.1.mode));
        terms = next;
    }
    RhoExpansion { input: g, terms }
}

/// The index map of `T`: `z^m w_b v_a ↦ z^{m - δ_{a,N}} w_b v_{a+1}`.
pub fn t_index(k: i64, dims: &Dims) -> i64 {
    let n = dims.n as i64;
    if k.rem_euclid(n) == 0 {
        k + 1 + n * (dims.l as i64 - 1)
    } else {
        k + 1
    }
}

pub fn t_inverse_index(k: i64, dims: &Dims) -> i64 {
    let n = dims.n as i64;
    if (k - 1).rem_euclid(n) == 0 {
        k - 1 - n * (dims.l as i64 - 1)
    } else {
        k - 1
    }
}

/// `T` on a finite wedge: the index map factor by factor, then normal ordering.
pub fn apply_t(w: &WedgeWord, dims: &Dims) -> (i8, WedgeWord) {
    apply_t_impl(w, dims, false)
}

fn apply_t_impl(w: &WedgeWord, dims: &Dims, tampered: bool) -> (i8, WedgeWord) {
    let mut sign = 1i8;
    let ks: Vec<i64> = w
        .indices()
        .iter()
        .map(|&k| {
            if tampered && k.rem_euclid(dims.n as i64) == 0 {
                sign = -sign;
            }
            t_index(k, dims)
        })
        .collect();
    let (s, word) = normal_order(&ks).expect("T is injective on indices");
    (s * sign, word)
}

pub fn apply_t_inverse(w: &WedgeWord, dims: &Dims) -> (i8, WedgeWord) {
    let ks: Vec<i64> = w.indices().iter().map(|&k| t_inverse_index(k, dims)).collect();
    normal_order(&ks).expect("T is injective on indices")
}

/// `v_{L,N} = u_{top} ∧ u_{top-N} ∧ ... ∧ u_{top-(L-1)N}` with `top = -mNL`.
pub fn v_l_n(dims: &Dims, top: i64) -> Vec<i64> {
    (0..dims.l as i64).map(|b| top - dims.n as i64 * b).collect()
}

/// `v_{L,N-1}`: the pairs `u_{top-bN} ∧ u_{top-bN-1}`.
pub fn v_l_n_minus_one(dims: &Dims, top: i64) -> Vec<i64> {
    (0..dims.l as i64)
        .flat_map(|b| [top - dims.n as i64 * b, top - dims.n as i64 * b - 1])
        .collect()
}

fn concat(w: &WedgeWord, tail: &[i64]) -> Vec<i64> {
    let mut v = w.indices().to_vec();
    v.extend_from_slice(tail);
    v
}

/// `T∞ : F_M → F_{M+L}` on one basis vector.
pub fn t_infinity_state(dims: &Dims, state: &FockState) -> (i8, FockState) {
    t_infinity_impl(dims, state, false)
}

fn t_infinity_impl(dims: &Dims, state: &FockState, tampered: bool) -> (i8, FockState) {
    let n = min_truncation(dims, state);
    let top = state.charge - n as i64;
    let word = state.word(n).expect("truncation covers partition");
    let (s0, merged) = normal_order(&concat(&word, &v_l_n(dims, top))).expect("v_{L,N} lies in the tail");
    let (s1, shifted) = apply_t_impl(&merged, dims, tampered);
    let out = FockState::from_word(&shifted, state.charge + dims.l as i64).expect("T raises every index");
    (s0 * s1, out)
}

/// `T∞⁻¹ : F_M → F_{M-L}` on one basis vector.
pub fn t_infinity_inverse_state(dims: &Dims, state: &FockState) -> Result<(i8, FockState)> {
    let l = dims.l;
    let mut n = min_truncation(dims, state);
    while n < l {
        n += dims.period() as usize;
    }
    for _ in 0..4 {
        let top = state.charge - n as i64;
        let word = state.word(n)?;
        let (sign, pre) = apply_t_inverse(&word, dims);
        let ks = pre.indices();
        let (head, tail) = ks.split_at(n - l);
        if tail == v_l_n(dims, top).as_slice() && head.last().is_none_or(|&k| k > top) {
            let (s0, _) = normal_order(ks).expect("distinct");
            debug_assert_eq!(s0, 1);
            let v = WedgeWord::new(head.to_vec())?;
            let out = FockState::from_word(&v, state.charge - l as i64)
                .ok_or_else(|| Error::Precondition("T∞ inverse left the Fock space".into()))?;
            return Ok((sign, out));
        }
        n += dims.period() as usize;
    }
    Err(Error::Precondition(format!("no preimage of {state:?} under T∞")))
}

pub fn apply_t_infinity<R: Scalar>(dims: &Dims, v: &FockVec<R>) -> FockVec<R> {
    let mut out = FockVec::new();
    for (state, c) in v {
        let (s, image) = t_infinity_state(dims, state);
        out.add_term(image, c.scaled(&rat(s as i64, 1)));
    }
    out
}

pub fn apply_t_infinity_inverse<R: Scalar>(dims: &Dims, v: &FockVec<R>) -> Result<FockVec<R>> {
    let mut out = FockVec::new();
    for (state, c) in v {
        let (s, image) = t_infinity_inverse_state(dims, state)?;
        out.add_term(image, c.scaled(&rat(s as i64, 1)));
    }
    Ok(out)
}

/// Which construction computes a node-0 generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Node0Path {
    /// Cell combinatorics at mode 0, `T∞ ρ T∞⁻¹` otherwise.
    Canonical,
    /// `T∞ ρ(g) T∞⁻¹` at every mode.
    Conjugation,
    /// The loop current `E_{N1} z`, `E_{1N} z^{-1}` at mode 0.
    Current,
}

/// The affine Yangian acting on `F_M = ⊕ F(c)`, memoized per `(generator, basis vector)`.
pub struct AffineModel<R: Scalar> {
    pub module: WedgeModule<R>,
    cache: RwLock<HashMap<(GeneratorId, FockState), Arc<FockVec<R>>>>,
}

impl<R: Scalar> AffineModel<R> {
    pub fn new(dims: Dims, cfg: DahaConfig<R>) -> Self {
        Self {
            module: WedgeModule::new(dims, cfg),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn dims(&self) -> &Dims {
        &self.module.dims
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.module.cfg.mutation
    }

    pub fn hbar(&self) -> R {
        self.module.hbar()
    }

    /// `β = t/2 - Nc/4 + c/2`.
    pub fn beta(&self) -> R {
        let p = &self.module.cfg.params;
        let mut beta = p.beta(self.dims().n);
        if self.mutation() == Some(Mutation::BetaMissingHalfC) {
            beta -= &p.c.scaled(&rat(1, 2));
        }
        beta
    }

    pub fn rho(&self, g: GeneratorId, power: u32) -> RhoExpansion<R> {
        rho_expand_impl(
            g,
            power,
            self.dims().n,
            &self.hbar(),
            &self.beta(),
            self.mutation() == Some(Mutation::RhoShift),
        )
    }

    pub fn t_infinity(&self, v: &FockVec<R>) -> FockVec<R> {
        let tampered = self.mutation() == Some(Mutation::TSign);
        let mut out = FockVec::new();
        for (state, c) in v {
            let (s, image) = t_infinity_impl(self.dims(), state, tampered);
            out.add_term(image, c.scaled(&rat(s as i64, 1)));
        }
        out
    }

    pub fn t_infinity_inverse(&self, v: &FockVec<R>) -> Result<FockVec<R>> {
        apply_t_infinity_inverse(self.dims(), v)
    }

    /// Any generator on one basis vector.
    pub fn act_state(&self, g: GeneratorId, state: &FockState) -> Result<Arc<FockVec<R>>> {
        let key = (g, state.clone());
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.compute(g, state)?);
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn act(&self, g: GeneratorId, v: &FockVec<R>) -> Result<FockVec<R>> {
        let mut out = FockVec::new();
        for (state, c) in v {
            let image = self.act_state(g, state)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    fn compute(&self, g: GeneratorId, state: &FockState) -> Result<FockVec<R>> {
        let n = self.dims().n;
        if g.node >= n {
            return Err(Error::Generator(format!("{g}: node must be below N = {n}")));
        }
        if g.node != 0 {
            return self.module.yangian_on_state(g, state, None);
        }
        self.node0_state(g, state, Node0Path::Canonical)
    }

    /// A node-0 generator on one basis vector through the chosen construction.
    pub fn node0_state(&self, g: GeneratorId, state: &FockState, path: Node0Path) -> Result<FockVec<R>> {
        if g.node != 0 {
            return Err(Error::Generator(format!("{g} is not a node-0 generator")));
        }
        match (path, g.mode) {
            (Node0Path::Canonical, 0) => Ok(self.cell_state(g, state)),
            (Node0Path::Current, 0) => self.node0_current(g, state),
            (Node0Path::Current, _) => Err(Error::Generator(format!("{g}: the loop current only gives mode 0"))),
            _ => self.node0_conjugated(g, state),
        }
    }

    /// `T∞ ρ(g) T∞⁻¹`.
    fn node0_conjugated(&self, g: GeneratorId, state: &FockState) -> Result<FockVec<R>> {
        let pre = self.t_infinity_inverse(&FockVec::basis(state.clone()))?;
        let mut mid = FockVec::new();
        for (coeff, h) in self.rho(g, 1).terms {
            mid.add_scaled(&self.act(h, &pre)?, &coeff);
        }
        Ok(self.t_infinity(&mid))
    }

    /// Mode-zero Chevalley generators from the cell formulas, in the wedge basis.
    pub fn cell_state(&self, g: GeneratorId, state: &FockState) -> FockVec<R> {
        let dims = self.dims();
        let lc = charge_decompose(dims, state);
        let eps = color_gauge(dims, state) as i64;
        let mut out = FockVec::new();
        for (mu, c) in &chevalley_on_basis::<R>(g, &lc, dims.n).expect("mode zero") {
            let target = charge_compose(dims, mu).expect("same charges");
            let sign = eps * color_gauge(dims, &target) as i64;
            out.add_term(target, c.scaled(&rat(sign, 1)));
        }
        out
    }

    /// `X_0^+ = E_{N1} z`, `X_0^- = E_{1N} z^{-1}` and `H_0 = [X_0^+, X_0^-]` on `F_M`.
    fn node0_current(&self, g: GeneratorId, state: &FockState) -> Result<FockVec<R>> {
        let dims = self.dims();
        let n = dims.n;
        let apply = |kind: Kind, v: &FockVec<R>| -> Result<FockVec<R>> {
            let (x, r) = match kind {
                Kind::Plus => (vec![(n, 1, 1)], 1),
                _ => (vec![(1, n, 1)], -1),
            };
            let mut out = FockVec::new();
            for (s, c) in v {
                // one extra period so that tail factors moved by z^{-1} are accounted for
                let len = min_truncation(dims, s) + dims.period() as usize;
                let raw: WedgeVec<R> = current_on_word(&x, r, &s.word(len)?, dims);
                let image: WedgeVec<R> = raw
                    .iter()
                    .filter(|(w, _)| FockState::from_word(w, s.charge).is_some())
                    .map(|(w, c)| (w.clone(), c.clone()))
                    .collect();
                out.add_scaled(&wrap_words(&image, s.charge)?, c);
            }
            Ok(out)
        };
        let v = FockVec::basis(state.clone());
        match g.kind {
            Kind::Plus | Kind::Minus => apply(g.kind, &v),
            Kind::Cartan => {
                let mut out = apply(Kind::Plus, &apply(Kind::Minus, &v)?)?;
                out.sub_vec(&apply(Kind::Minus, &apply(Kind::Plus, &v)?)?);
                Ok(out)
            }
        }
    }

    /// Both sides of the tail identity: `T^p X (v ∧ v') ∧ |top⟩` against
    /// `T^p (X v ∧ v') ∧ |top⟩`, with `v' = v_{L,N}` (`p = 1`) or `v_{L,N-1}` (`p = 2`).
    pub fn key_identity_sides(&self, g: GeneratorId, state: &FockState, level: usize, variant_n_minus_one: bool) -> Result<(FockVec<R>, FockVec<R>)> {
        let dims = self.dims();
        let n = dims.truncation_length(state.charge, level);
        let top = state.charge - n as i64;
        let word = state.word(n)?;
        let extra = if variant_n_minus_one { v_l_n_minus_one(dims, top) } else { v_l_n(dims, top) };
        let power = if variant_n_minus_one { 2 } else { 1 };
        let out_charge = top + (n + extra.len()) as i64;
        let shift_wrap = |v: &WedgeVec<R>| -> Result<FockVec<R>> {
            let mut out = FockVec::new();
            for (w, c) in v {
                let mut sign = 1i64;
                let mut cur = w.clone();
                for _ in 0..power {
                    let (s, next) = apply_t(&cur, dims);
                    sign *= s as i64;
                    cur = next;
                }
                let st = FockState::from_word(&cur, out_charge)
                    .ok_or_else(|| Error::Precondition("shifted word meets the tail".into()))?;
                out.add_term(st, c.scaled(&rat(sign, 1)));
            }
            Ok(out)
        };
        // left: X acts on the longer wedge
        let (s0, merged) = normal_order(&concat(&word, &extra)).expect("extra lies in the tail");
        let mut lhs_words = self.module.apply(g, &WedgeVec::basis(merged))?;
        if s0 < 0 {
            lhs_words = lhs_words.scale(&-R::one());
        }
        // right: X acts on v only
        let mut rhs_words = WedgeVec::new();
        for (w, c) in self.module.apply_word(g, &word)?.iter() {
            if let Some((s, merged)) = normal_order(&concat(w, &extra)) {
                rhs_words.add_term(merged, c.scaled(&rat(s as i64, 1)));
            }
        }
        Ok((shift_wrap(&lhs_words)?, shift_wrap(&rhs_words)?))
    }

    /// `Σ_i H_{i,0}` through the assembled action.
    pub fn level_operator(&self, state: &FockState) -> Result<FockVec<R>> {
        let mut out = FockVec::new();
        for i in 0..self.dims().n {
            let image = self.act_state(GeneratorId::cartan(i, 0), state)?;
            out.add_vec(&image);
        }
        Ok(out)
    }
}

/// Mode-zero generator of a finite node as a `gl_N` element (re-exported for callers that
/// build loop-current operators).
pub fn finite_chevalley(kind: Kind, node: usize) -> Vec<(usize, usize, i64)> {
    chevalley_matrix(kind, node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ParamPoly, Params};
    use crate::combinatorics::{multipartitions_up_to, Partition};
    use num::{One, Zero};

    fn dims(n: usize, l: usize) -> Dims {
        Dims::new(n, l).unwrap()
    }

    fn model(n: usize, l: usize) -> AffineModel<ParamPoly> {
        AffineModel::new(dims(n, l), DahaConfig::new(l, Params::symbolic(vec![ParamPoly::zero(); l])))
    }

    #[test]
    fn rho_examples() {
        let (hbar, beta) = (ParamPoly::c(), crate::coeff::derived_params(4).1);
        let e = rho_expand(GeneratorId::plus(2, 0), 1, 4, &hbar, &beta);
        assert_eq!(e.terms, vec![(ParamPoly::one(), GeneratorId::plus(1, 0))]);
        let e = rho_expand(GeneratorId::plus(0, 1), 1, 3, &hbar, &beta);
        assert_eq!(e.terms, vec![(ParamPoly::one(), GeneratorId::plus(2, 1)), (beta.clone(), GeneratorId::plus(2, 0))]);
        let e = rho_expand(GeneratorId::cartan(3, 1), 1, 4, &hbar, &beta);
        assert_eq!(
            e.terms,
            vec![(ParamPoly::one(), GeneratorId::cartan(2, 1)), (hbar.scaled(&rat(1, 2)), GeneratorId::cartan(2, 0))]
        );
        let e = rho_expand(GeneratorId::minus(1, 1), 2, 3, &hbar, &beta);
        assert_eq!(
            e.terms,
            vec![(ParamPoly::one(), GeneratorId::minus(2, 1)), (beta.scaled(&rat(2, 1)), GeneratorId::minus(2, 0))]
        );
    }

    #[test]
    fn t_examples() {
        let d = dims(3, 2);
        assert_eq!(t_index(5, &d), 6);
        assert_eq!(t_index(0, &d), 4);
        assert_eq!(t_index(6, &d), 10);
        assert_eq!(t_index(3, &d), 7);
        for k in -40..40 {
            assert_eq!(t_inverse_index(t_index(k, &d), &d), k);
            let (t, dd) = (d.decode(k), d.decode(t_index(k, &d)));
            assert_eq!(dd.b, t.b);
            assert_eq!(dd.a, t.a % 3 + 1);
            assert_eq!(dd.m, t.m - i64::from(t.a == 3));
        }
    }

    #[test]
    fn t_infinity_level_one_is_shift() {
        let d = dims(3, 1);
        for lam in Partition::all_up_to(4) {
            for m in [-2, 0, 1, 5] {
                let st = FockState::new(lam.clone(), m);
                let (s, img) = t_infinity_state(&d, &st);
                assert_eq!(s, 1);
                assert_eq!(img, FockState::new(lam.clone(), m + 1));
            }
        }
    }

    #[test]
    fn t_infinity_round_trip() {
        for l in 1..=2 {
            let d = dims(3, l);
            for lam in Partition::all_up_to(4) {
                for m in [-3, 0, 2] {
                    let st = FockState::new(lam.clone(), m);
                    let (s, img) = t_infinity_state(&d, &st);
                    let (s2, back) = t_infinity_inverse_state(&d, &img).unwrap();
                    assert_eq!(back, st);
                    assert_eq!(s * s2, 1);
                }
            }
        }
    }

    #[test]
    fn node0_paths_agree_at_mode_zero() {
        for (n, l, charges) in [(3, 1, vec![0]), (3, 2, vec![-1, 1]), (3, 2, vec![0, 0]), (4, 2, vec![1, 0])] {
            let m = model(n, l);
            for lc in multipartitions_up_to(&charges, 3) {
                let st = charge_compose(m.dims(), &lc).unwrap();
                for kind in [Kind::Plus, Kind::Minus, Kind::Cartan] {
                    let g = GeneratorId::new(kind, 0, 0);
                    let cell = m.node0_state(g, &st, Node0Path::Canonical).unwrap();
                    let conj = m.node0_state(g, &st, Node0Path::Conjugation).unwrap();
                    let cur = m.node0_state(g, &st, Node0Path::Current).unwrap();
                    assert_eq!(conj, cell, "T∞ path {g} on {lc:?}");
                    assert_eq!(cur, cell, "current path {g} on {lc:?}");
                }
            }
        }
    }
}
