//! Yangian actions on finite wedges `Λ^n U ≅ (C[z^±] ⊗ W^{⊗n}) ⊗_{S_n} V^{⊗n}` and, through
//! truncation, on the Fock spaces `F_M`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coeff::{rat, Rational, Scalar};
use crate::daha::{apply_y, DahaConfig, PolyTensor};
use crate::error::{Error, Result};
use crate::generator::{GeneratorId, Kind};
use crate::sparse::SparseVec;
use crate::verify::Mutation;
use crate::wedge::{degree, normal_order, Dims, FockState, FockVec, UTriple, WedgeVec, WedgeWord};

/// A pure tensor `z^m w_b ⊗ v_a`, position by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedTensor {
    pub poly: PolyTensor,
    pub vcolors: Vec<u8>,
}

impl MixedTensor {
    pub fn from_word(word: &WedgeWord, dims: &Dims) -> Self {
        let triples: Vec<UTriple> = word.indices().iter().map(|&k| dims.decode(k)).collect();
        Self {
            poly: PolyTensor::new(
                triples.iter().map(|t| t.m).collect(),
                triples.iter().map(|t| t.b as u8).collect(),
            ),
            vcolors: triples.iter().map(|t| t.a as u8).collect(),
        }
    }

    /// The wedge `u_{k_1} ∧ ... ∧ u_{k_n}` in normal order, or `None` if it vanishes.
    pub fn to_wedge(&self, dims: &Dims) -> Option<(i8, WedgeWord)> {
        to_wedge_parts(&self.poly, &self.vcolors, dims)
    }
}

fn to_wedge_parts(poly: &PolyTensor, vcolors: &[u8], dims: &Dims) -> Option<(i8, WedgeWord)> {
    let ks: Vec<i64> = (0..poly.len())
        .map(|i| {
            dims.encode(UTriple {
                m: poly.exponents[i],
                b: poly.colors[i] as i64,
                a: vcolors[i] as i64,
            })
        })
        .collect();
    normal_order(&ks)
}

/// A `gl_N` element `Σ coeff E_{pq}`, indices `1..=N`.
pub type GlElement = Vec<(usize, usize, i64)>;

/// The Chevalley element of a finite node as a `gl_N` matrix.
pub fn chevalley_matrix(kind: Kind, i: usize) -> GlElement {
    match kind {
        Kind::Plus => vec![(i, i + 1, 1)],
        Kind::Minus => vec![(i + 1, i, 1)],
        Kind::Cartan => vec![(i, i, 1), (i + 1, i + 1, -1)],
    }
}

/// `Σ_k z_k^r (X)_k` on one word.
pub fn current_on_word<R: Scalar>(x: &GlElement, r: i64, word: &WedgeWord, dims: &Dims) -> WedgeVec<R> {
    let mut out = WedgeVec::new();
    let ks = word.indices();
    for (pos, &k) in ks.iter().enumerate() {
        let t = dims.decode(k);
        for &(p, q, coeff) in x {
            if t.a != q as i64 {
                continue;
            }
            let mut new = ks.to_vec();
            new[pos] = dims.encode(UTriple { m: t.m + r, b: t.b, a: p as i64 });
            if let Some((sign, w)) = normal_order(&new) {
                out.add_term(w, R::from_int(coeff * sign as i64));
            }
        }
    }
    out
}

pub fn current_action<R: Scalar>(x: &GlElement, r: i64, v: &WedgeVec<R>, dims: &Dims) -> WedgeVec<R> {
    let mut out = WedgeVec::new();
    for (w, c) in v {
        out.add_scaled(&current_on_word(x, r, w, dims), c);
    }
    out
}

/// `J(X) = Σ_k y_k^{(n)} ⊗ (X)_k` on one word.
pub fn j_on_word<R: Scalar>(x: &GlElement, word: &WedgeWord, dims: &Dims, cfg: &DahaConfig<R>) -> WedgeVec<R> {
    let mt = MixedTensor::from_word(word, dims);
    let mut out = WedgeVec::new();
    for k in 0..mt.vcolors.len() {
        let hits: Vec<(usize, i64)> = x
            .iter()
            .filter(|&&(_, q, _)| mt.vcolors[k] as usize == q)
            .map(|&(p, _, c)| (p, c))
            .collect();
        if hits.is_empty() {
            continue;
        }
        let y = apply_y(k, &mt.poly, cfg);
        for (p, coeff) in hits {
            let mut vcolors = mt.vcolors.clone();
            vcolors[k] = p as u8;
            for (pt, c) in &y {
                if let Some((sign, w)) = to_wedge_parts(pt, &vcolors, dims) {
                    out.add_term(w, c.clone() * &R::from_int(coeff * sign as i64));
                }
            }
        }
    }
    out
}

pub fn j_action<R: Scalar>(x: &GlElement, v: &WedgeVec<R>, dims: &Dims, cfg: &DahaConfig<R>) -> WedgeVec<R> {
    let mut out = WedgeVec::new();
    for (w, c) in v {
        out.add_scaled(&j_on_word(x, w, dims, cfg), c);
    }
    out
}

/// A quadratic element `Σ coeff E_{ab} E_{cd}` of `U(gl_N)`.
pub type Quadratic = Vec<(Rational, (usize, usize), (usize, usize))>;

fn sym(q: &mut Quadratic, sign: i64, a: (usize, usize), b: (usize, usize)) {
    q.push((rat(sign, 1), a, b));
    q.push((rat(sign, 1), b, a));
}

/// The quadratic correction `ω` with `J(X) = X_{i,1} + (ħ/4) ω`.
pub fn omega(kind: Kind, i: usize, n: usize) -> Quadratic {
    let mut q = Quadratic::new();
    match kind {
        Kind::Plus => {
            for p in i + 1..=n {
                sym(&mut q, 1, (i, p), (p, i + 1));
            }
            for p in 1..=i {
                sym(&mut q, -1, (i, p), (p, i + 1));
            }
        }
        Kind::Minus => {
            for p in i + 1..=n {
                sym(&mut q, 1, (i + 1, p), (p, i));
            }
            for p in 1..=i {
                sym(&mut q, -1, (i + 1, p), (p, i));
            }
        }
        Kind::Cartan => {
            for p in i + 1..=n {
                sym(&mut q, 1, (i, p), (p, i));
            }
            for p in 1..i {
                sym(&mut q, -1, (i, p), (p, i));
            }
            for p in 1..=i {
                sym(&mut q, 1, (i + 1, p), (p, i + 1));
            }
            for p in i + 2..=n {
                sym(&mut q, -1, (i + 1, p), (p, i + 1));
            }
            // -2 H_i^2
            let (a, b) = ((i, i), (i + 1, i + 1));
            q.push((rat(-2, 1), a, a));
            q.push((rat(2, 1), a, b));
            q.push((rat(2, 1), b, a));
            q.push((rat(-2, 1), b, b));
        }
    }
    q
}

pub fn quadratic_on_word<R: Scalar>(q: &Quadratic, word: &WedgeWord, dims: &Dims) -> WedgeVec<R> {
    let mut out = WedgeVec::new();
    let start: WedgeVec<R> = WedgeVec::basis(word.clone());
    for (coeff, a, b) in q {
        let inner = current_action(&vec![(b.0, b.1, 1)], 0, &start, dims);
        if inner.is_zero() {
            continue;
        }
        let outer = current_action(&vec![(a.0, a.1, 1)], 0, &inner, dims);
        out.add_scaled(&outer, &R::from_rational(coeff));
    }
    out
}

/// Finite-node Yangian generators on finite wedges, memoized per `(generator, word)`.
pub struct WedgeModule<R: Scalar> {
    pub dims: Dims,
    pub cfg: DahaConfig<R>,
    cache: RwLock<HashMap<(GeneratorId, WedgeWord), Arc<WedgeVec<R>>>>,
}

impl<R: Scalar> WedgeModule<R> {
    pub fn new(dims: Dims, cfg: DahaConfig<R>) -> Self {
        assert_eq!(cfg.l, dims.l);
        Self {
            dims,
            cfg,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn hbar(&self) -> R {
        self.cfg.params.hbar()
    }

    fn check_node(&self, g: GeneratorId) -> Result<()> {
        if g.node == 0 || g.node >= self.dims.n {
            return Err(Error::Generator(format!(
                "{g}: finite-type operators need a node in 1..{}",
                self.dims.n - 1
            )));
        }
        Ok(())
    }

    /// `g` applied to one word.
    pub fn apply_word(&self, g: GeneratorId, word: &WedgeWord) -> Result<Arc<WedgeVec<R>>> {
        self.check_node(g)?;
        let key = (g, word.clone());
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.compute_word(g, word)?);
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn apply(&self, g: GeneratorId, v: &WedgeVec<R>) -> Result<WedgeVec<R>> {
        let mut out = WedgeVec::new();
        for (w, c) in v {
            let image = self.apply_word(g, w)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    fn compute_word(&self, g: GeneratorId, word: &WedgeWord) -> Result<WedgeVec<R>> {
        let i = g.node;
        let x = chevalley_matrix(g.kind, i);
        Ok(match g.mode {
            0 => current_on_word(&x, 0, word, &self.dims),
            1 => {
                let mut out = j_on_word(&x, word, &self.dims, &self.cfg);
                if self.cfg.mutation != Some(Mutation::DropOmega) {
                    let mut factor = self.hbar().scaled(&rat(-1, 4));
                    if self.cfg.mutation == Some(Mutation::OmegaSign) {
                        factor = -factor;
                    }
                    let w = quadratic_on_word::<R>(&omega(g.kind, i, self.dims.n), word, &self.dims);
                    out.add_scaled(&w, &factor);
                }
                out
            }
            r => {
                let single = WedgeVec::basis(word.clone());
                match g.kind {
                    Kind::Cartan => {
                        // H_{i,r} = [X^+_{i,r-1}, X^-_{i,1}]
                        let xp = GeneratorId::plus(i, r - 1);
                        let xm = GeneratorId::minus(i, 1);
                        let mut out = self.apply(xp, &self.apply(xm, &single)?)?;
                        out.sub_vec(&self.apply(xm, &self.apply(xp, &single)?)?);
                        out
                    }
                    Kind::Plus | Kind::Minus => {
                        // X^±_{i,r} = ±(1/2)[H_{i,1}, X^±_{i,r-1}] - (ħ/2)(H_{i,0} X^±_{i,r-1} + X^±_{i,r-1} H_{i,0})
                        let prev = g.with_mode(r - 1);
                        let h1 = GeneratorId::cartan(i, 1);
                        let h0 = GeneratorId::cartan(i, 0);
                        let xv = self.apply(prev, &single)?;
                        let mut comm = self.apply(h1, &xv)?;
                        comm.sub_vec(&self.apply(prev, &self.apply(h1, &single)?)?);
                        let half = if g.kind == Kind::Plus { rat(1, 2) } else { rat(-1, 2) };
                        let mut out = comm.scale(&R::from_rational(&half));
                        let mut anti = self.apply(h0, &xv)?;
                        anti.add_vec(&self.apply(prev, &self.apply(h0, &single)?)?);
                        out.add_scaled(&anti, &self.hbar().scaled(&rat(-1, 2)));
                        out
                    }
                }
            }
        })
    }

    /// Applies a finite-node generator to `F_M` through the truncation `n = s + l NL`.
    ///
    /// With `level = None` each basis vector uses `l = max(deg, 1)`.
    pub fn yangian_on_fock(&self, g: GeneratorId, v: &FockVec<R>, level: Option<usize>) -> Result<FockVec<R>> {
        let mut out = FockVec::new();
        for (state, c) in v {
            out.add_scaled(&self.yangian_on_state(g, state, level)?, c);
        }
        Ok(out)
    }

    pub fn yangian_on_state(&self, g: GeneratorId, state: &FockState, level: Option<usize>) -> Result<FockVec<R>> {
        self.check_node(g)?;
        let d = degree(&self.dims, state);
        let l = match level {
            Some(l) if l < d => return Err(Error::Truncation { level: l, degree: d }),
            Some(l) => l,
            None => d.max(1),
        };
        let n = self.dims.truncation_length(state.charge, l);
        let word = state.word(n)?;
        let image = self.apply_word(g, &word)?;
        wrap_words(&image, state.charge)
    }
}

/// `Σ c_w w ∧ |M - n⟩` read back as a Fock vector.
pub fn wrap_words<R: Scalar>(v: &WedgeVec<R>, charge: i64) -> Result<FockVec<R>> {
    let mut out = FockVec::new();
    for (w, c) in v {
        let state = FockState::from_word(w, charge).ok_or_else(|| {
            Error::Precondition(format!("{w:?} leaves the truncated space of F_{charge}"))
        })?;
        out.add_term(state, c.clone());
    }
    Ok(out)
}

/// Dense row-sparse matrix of an operator on an explicit basis list.
pub fn materialize<K: Ord + Clone, R: Scalar>(
    basis: &[K],
    mut op: impl FnMut(&K) -> Result<SparseVec<K, R>>,
) -> Result<Vec<SparseVec<K, R>>> {
    basis.iter().map(|b| op(b)).collect()
}
