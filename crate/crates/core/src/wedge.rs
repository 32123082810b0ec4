//! Index calculus of the semi-infinite wedge construction.
//!
//! `U = C[z, z^-1] ⊗ W ⊗ V` has basis `u_k` (`k ∈ Z`) with `z^m w_b v_a = u_{a - N(b + L m)}`.
//! Finite wedges are strictly decreasing index lists ([`WedgeWord`]); vectors of `F_M` are
//! stored by their partition label `|λ, M⟩` ([`FockState`]) and only expanded to a
//! [`WedgeWord`] at a chosen truncation length.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::Scalar;
use crate::combinatorics::{ChargedMultipartition, Partition};
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

/// `N = dim V` (the rank, `N >= 3`) and `L = dim W` (the level, `L >= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub n: usize,
    pub l: usize,
}

impl Dims {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("N must be at least 3, got {n}")));
        }
        if l < 1 {
            return Err(Error::Config("L must be at least 1".into()));
        }
        Ok(Self { n, l })
    }

    /// `NL`, the period of the index encoding.
    pub fn period(&self) -> i64 {
        (self.n * self.l) as i64
    }

    /// `s ∈ {0, ..., NL-1}` with `s ≡ M mod NL`.
    pub fn offset(&self, charge: i64) -> usize {
        charge.rem_euclid(self.period()) as usize
    }

    /// `n = s + l NL`.
    pub fn truncation_length(&self, charge: i64, level: usize) -> usize {
        self.offset(charge) + level * self.period() as usize
    }

    pub fn encode(&self, t: UTriple) -> i64 {
        t.a - self.n as i64 * (t.b + self.l as i64 * t.m)
    }

    pub fn decode(&self, k: i64) -> UTriple {
        let (n, l) = (self.n as i64, self.l as i64);
        let a = (k - 1).rem_euclid(n) + 1;
        let q = (a - k) / n;
        let b = (q - 1).rem_euclid(l) + 1;
        let m = (q - b) / l;
        UTriple { m, b, a }
    }

    /// z-exponent of `u_k`, i.e. `decode(k).m`.
    pub fn z_exponent(&self, k: i64) -> i64 {
        (-k).div_euclid(self.period())
    }

    pub fn color(&self, k: i64) -> i64 {
        self.decode(k).b
    }

    /// Index of `u_k` inside its own color: `a - N(1 + m)`.
    pub fn color_index(&self, k: i64) -> i64 {
        let t = self.decode(k);
        t.a - self.n as i64 * (1 + t.m)
    }

    /// Inverse of [`Dims::color_index`] for a fixed color `b`.
    pub fn from_color_index(&self, b: i64, kappa: i64) -> i64 {
        let n = self.n as i64;
        let a = (kappa - 1).rem_euclid(n) + 1;
        let m = (a - kappa) / n - 1;
        self.encode(UTriple { m, b, a })
    }
}

/// `z^m w_b v_a` with `b ∈ {1..L}`, `a ∈ {1..N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UTriple {
    pub m: i64,
    pub b: i64,
    pub a: i64,
}

/// `N`, `L` and the charge `M` of `F_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalConfig {
    pub dims: Dims,
    pub charge: i64,
}

impl GlobalConfig {
    pub fn new(n: usize, l: usize, charge: i64) -> Result<Self> {
        Ok(Self {
            dims: Dims::new(n, l)?,
            charge,
        })
    }

    pub fn offset(&self) -> usize {
        self.dims.offset(self.charge)
    }
}

/// `u_{k_1} ∧ ... ∧ u_{k_n}` with `k_1 > ... > k_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeWord(Vec<i64>);

impl WedgeWord {
    pub fn new(indices: Vec<i64>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Precondition(format!("{indices:?} is not strictly decreasing")));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_indices(self) -> Vec<i64> {
        self.0
    }
}

impl fmt::Debug for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{:?}", self.0)
    }
}

/// Sorts `ks` into strictly decreasing order. Returns `None` on a repeated index, otherwise
/// the sign of the sorting permutation together with the sorted word.
pub fn normal_order(ks: &[i64]) -> Option<(i8, WedgeWord)> {
    let mut v = ks.to_vec();
    let mut sign = 1i8;
    // insertion sort; lengths stay in the tens
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] < v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, WedgeWord(v)))
}

/// `|λ, M⟩ = u_{k_1} ∧ u_{k_2} ∧ ...` with `k_i = M + λ_i - i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockState {
    pub partition: Partition,
    pub charge: i64,
}

impl FockState {
    pub fn new(partition: Partition, charge: i64) -> Self {
        Self { partition, charge }
    }

    pub fn vacuum(charge: i64) -> Self {
        Self::new(Partition::empty(), charge)
    }

    /// The first `n` indices.
    pub fn word(&self, n: usize) -> Result<WedgeWord> {
        partition_to_word(&self.partition, self.charge, n)
    }

    /// Reads `word ∧ |M - n⟩`; `None` when the wedge vanishes because an index of `word`
    /// repeats one of the tail.
    pub fn from_word(word: &WedgeWord, charge: i64) -> Option<Self> {
        let n = word.len() as i64;
        if word.0.last().is_some_and(|&k| k <= charge - n) {
            return None;
        }
        let parts: Vec<u32> = word
            .0
            .iter()
            .enumerate()
            .map(|(i, &k)| (k - charge + i as i64) as u32)
            .collect();
        Some(Self::new(Partition::from_padded(parts).expect("strictly decreasing word"), charge))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{:?}, {}⟩", self.partition, self.charge)
    }
}

pub type FockVec<R> = SparseVec<FockState, R>;
pub type WedgeVec<R> = SparseVec<WedgeWord, R>;

pub fn partition_to_word(lambda: &Partition, charge: i64, n: usize) -> Result<WedgeWord> {
    if n < lambda.len() {
        return Err(Error::Precondition(format!(
            "length {n} is shorter than the partition {lambda:?}"
        )));
    }
    Ok(WedgeWord(
        (1..=n)
            .map(|i| charge + lambda.part(i) as i64 - i as i64 + 1)
            .collect(),
    ))
}

/// Appends `u_{M-n} ∧ ... ∧ u_{M-n'+1}`.
pub fn extend_word(w: &WedgeWord, charge: i64, new_len: usize) -> Result<WedgeWord> {
    let n = w.len();
    if new_len < n {
        return Err(Error::Precondition(format!("cannot extend length {n} to {new_len}")));
    }
    if w.0.last().is_some_and(|&k| k <= charge - n as i64) {
        return Err(Error::Precondition(format!(
            "{w:?} ends at or below the tail index {}",
            charge - n as i64
        )));
    }
    let mut out = w.0.clone();
    out.extend((n..new_len).map(|j| charge - j as i64));
    Ok(WedgeWord(out))
}

/// Smallest admissible truncation `n ≡ M mod NL` covering the partition.
pub fn min_truncation(dims: &Dims, state: &FockState) -> usize {
    let s = dims.offset(state.charge);
    let period = dims.period() as usize;
    let need = state.partition.len();
    if need <= s {
        s
    } else {
        s + (need - s).div_ceil(period) * period
    }
}

/// Vacuum z-exponent pattern `m_i^0` for `i = 1..=n`.
pub fn vacuum_exponents(dims: &Dims, charge: i64, n: usize) -> Vec<i64> {
    (1..=n as i64).map(|i| dims.z_exponent(charge - i + 1)).collect()
}

/// Degree of a finite word relative to the vacuum pattern of `F_M`.
pub fn word_degree(dims: &Dims, charge: i64, w: &WedgeWord) -> i64 {
    w.0.iter()
        .enumerate()
        .map(|(i, &k)| dims.z_exponent(charge - i as i64) - dims.z_exponent(k))
        .sum()
}

/// `deg |λ, M⟩ = Σ_i (m_i^0 - m_i)`.
pub fn degree(dims: &Dims, state: &FockState) -> usize {
    let n = state.partition.len();
    let w = state.word(n).expect("length covers the partition");
    let d = word_degree(dims, state.charge, &w);
    debug_assert!(d >= 0);
    d as usize
}

/// Basis of `V_{M,n}^d`: words of length `n` with `m_i ≤ m_i^0` for every `i` and degree `d`.
pub fn v_basis(dims: &Dims, charge: i64, n: usize, d: i64) -> Vec<WedgeWord> {
    if d < 0 {
        return Vec::new();
    }
    let period = dims.period();
    let m0 = vacuum_exponents(dims, charge, n);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);

    fn go(
        dims: &Dims,
        m0: &[i64],
        period: i64,
        rem: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<WedgeWord>,
    ) {
        let i = cur.len();
        if i == m0.len() {
            if rem == 0 {
                out.push(WedgeWord(cur.clone()));
            }
            return;
        }
        // m(k) <= m0[i]  <=>  k > -NL (m0[i] + 1); drop <= rem  <=>  k <= -NL (m0[i] - rem)
        let lo = -period * (m0[i] + 1) + 1;
        let mut hi = -period * (m0[i] - rem);
        if let Some(&prev) = cur.last() {
            hi = hi.min(prev - 1);
        }
        let mut k = hi;
        while k >= lo {
            let drop = m0[i] - dims.z_exponent(k);
            cur.push(k);
            go(dims, m0, period, rem - drop, cur, out);
            cur.pop();
            k -= 1;
        }
    }

    go(dims, &m0, period, d, &mut cur, &mut out);
    out
}

/// Splits `|λ, M⟩` by W-color into `(λ^(1..L); c_1..c_L)`.
pub fn charge_decompose(dims: &Dims, state: &FockState) -> ChargedMultipartition {
    let n = min_truncation(dims, state);
    let w = state.word(n).expect("truncation covers partition");
    let tail_top = state.charge - n as i64;
    let l = dims.l;
    let mut per_color: Vec<Vec<i64>> = vec![Vec::new(); l];
    for &k in w.indices() {
        per_color[(dims.color(k) - 1) as usize].push(dims.color_index(k));
    }
    let mut components = Vec::with_capacity(l);
    let mut charges = Vec::with_capacity(l);
    for (s, seq) in per_color.iter().enumerate() {
        let b = s as i64 + 1;
        // largest tail index of this color
        let top = (0..dims.period())
            .map(|j| tail_top - j)
            .find(|&k| dims.color(k) == b)
            .expect("every color occurs once per period");
        let charge = dims.color_index(top) + seq.len() as i64;
        let parts: Vec<u32> = seq
            .iter()
            .enumerate()
            .map(|(i, &kappa)| (kappa - charge + i as i64) as u32)
            .collect();
        components.push(Partition::from_padded(parts).expect("per-color sequence is decreasing"));
        charges.push(charge);
    }
    ChargedMultipartition { components, charges }
}

/// Inverse of [`charge_decompose`].
pub fn charge_compose(dims: &Dims, lc: &ChargedMultipartition) -> Result<FockState> {
    if lc.level() != dims.l {
        return Err(Error::Config(format!(
            "multipartition has {} components but L = {}",
            lc.level(),
            dims.l
        )));
    }
    // global threshold below which every color is in its vacuum region
    let threshold = (0..dims.l)
        .map(|s| {
            let lowest = lc.charges[s] - lc.components[s].len() as i64;
            dims.from_color_index(s as i64 + 1, lowest)
        })
        .min()
        .expect("L >= 1")
        - 1;
    let mut all = Vec::new();
    for s in 0..dims.l {
        let b = s as i64 + 1;
        let lam = &lc.components[s];
        let mut i = 1i64;
        loop {
            let kappa = lc.charges[s] + lam.part(i as usize) as i64 - i + 1;
            let k = dims.from_color_index(b, kappa);
            if k <= threshold {
                break;
            }
            all.push(k);
            i += 1;
        }
    }
    all.sort_unstable_by(|a, b| b.cmp(a));
    let charge = threshold + all.len() as i64;
    debug_assert_eq!(charge, lc.total_charge());
    let state = FockState::from_word(&WedgeWord::new(all)?, charge)
        .ok_or_else(|| Error::Precondition("inconsistent multicharge".into()))?;
    Ok(state)
}

/// Sign relating the wedge basis `|λ, M⟩` to the multipartition basis `|λ, c⟩`.
///
/// The cell-combinatorial formulas hold with unit coefficients when the wedge factors are
/// grouped by W-color; this is the parity of that regrouping, normalized so the vacuum of
/// every `F(c)` has sign `+1`.
pub fn color_gauge(dims: &Dims, state: &FockState) -> i8 {
    let lc = charge_decompose(dims, state);
    let vac = charge_compose(dims, &ChargedMultipartition::vacuum(&lc.charges)).expect("valid charges");
    let n = min_truncation(dims, state).max(min_truncation(dims, &vac));
    let parity = |s: &FockState| -> usize {
        let colors: Vec<i64> = s.word(n).expect("covers").indices().iter().map(|&k| dims.color(k)).collect();
        let mut inv = 0;
        for i in 0..colors.len() {
            for j in i + 1..colors.len() {
                if colors[i] > colors[j] {
                    inv += 1;
                }
            }
        }
        inv
    };
    if (parity(state) + parity(&vac)) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `|λ, c⟩`-labelled vector to the wedge labels, applying [`color_gauge`].
pub fn to_wedge_labels<R: Scalar>(
    dims: &Dims,
    v: &SparseVec<ChargedMultipartition, R>,
) -> Result<FockVec<R>> {
    let mut out = FockVec::new();
    for (lc, coeff) in v {
        let state = charge_compose(dims, lc)?;
        let sign = color_gauge(dims, &state);
        out.add_term(state, if sign > 0 { coeff.clone() } else { -coeff.clone() });
    }
    Ok(out)
}

pub fn to_multipartition_labels<R: Scalar>(
    dims: &Dims,
    v: &FockVec<R>,
) -> SparseVec<ChargedMultipartition, R> {
    let mut out = SparseVec::new();
    for (state, coeff) in v {
        let sign = color_gauge(dims, state);
        out.add_term(
            charge_decompose(dims, state),
            if sign > 0 { coeff.clone() } else { -coeff.clone() },
        );
    }
    out
}

/// Groups a vector by charge `M` (used by callers that need per-`F_M` views).
pub fn split_by_charge<R: Scalar>(v: &FockVec<R>) -> BTreeMap<i64, FockVec<R>> {
    let mut out: BTreeMap<i64, FockVec<R>> = BTreeMap::new();
    for (s, c) in v {
        out.entry(s.charge).or_default().add_term(s.clone(), c.clone());
    }
    out
}
