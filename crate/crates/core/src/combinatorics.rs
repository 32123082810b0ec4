//! Partitions, charged multipartitions, residues, and the cell-combinatorial
//! action of the affine Lie algebra on the level `L` Fock space `F(c)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::generator::{GeneratorId, Kind};
use crate::sparse::SparseVec;

/// A weakly decreasing list of positive parts. The empty list is the empty partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Partition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Partition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self(parts))
    }

    /// Drops trailing zeros; fails on anything that is not weakly decreasing.
    pub fn from_padded(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `lambda_x` with the 1-based row convention; zero past the length.
    pub fn part(&self, x: usize) -> u32 {
        self.0.get(x.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rows `x` where a box `(x, lambda_x + 1)` can be added.
    pub fn addable_rows(&self) -> Vec<usize> {
        (1..=self.len() + 1)
            .filter(|&x| x == 1 || self.part(x - 1) > self.part(x))
            .collect()
    }

    /// Rows `x` whose last box `(x, lambda_x)` can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&x| self.part(x) > self.part(x + 1)).collect()
    }

    pub fn with_box_added(&self, x: usize) -> Partition {
        let mut parts = self.0.clone();
        if x > parts.len() {
            parts.push(1);
        } else {
            parts[x - 1] += 1;
        }
        Partition(parts)
    }

    pub fn with_box_removed(&self, x: usize) -> Partition {
        let mut parts = self.0.clone();
        parts[x - 1] -= 1;
        if parts[x - 1] == 0 {
            parts.pop();
        }
        Partition(parts)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_up_to(max_size: usize) -> Vec<Partition> {
        (0..=max_size).flat_map(Partition::all_of_size).collect()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::from_padded(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// An `L`-tuple of partitions together with a multicharge; labels `|λ, c⟩` in `F(c)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ChargedMultipartition {
    pub components: Vec<Partition>,
    pub charges: Vec<i64>,
}

impl ChargedMultipartition {
    pub fn new(components: Vec<Partition>, charges: Vec<i64>) -> Result<Self> {
        if components.is_empty() || components.len() != charges.len() {
            return Err(Error::Config(format!(
                "{} components but {} charges",
                components.len(),
                charges.len()
            )));
        }
        Ok(Self { components, charges })
    }

    pub fn vacuum(charges: &[i64]) -> Self {
        Self {
            components: vec![Partition::empty(); charges.len()],
            charges: charges.to_vec(),
        }
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn total_charge(&self) -> i64 {
        self.charges.iter().sum()
    }

    pub fn size(&self) -> usize {
        self.components.iter().map(Partition::size).sum()
    }
}

/// Total order used for basis dumps: charges lexicographically, then size, then components.
impl Ord for ChargedMultipartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.charges
            .cmp(&other.charges)
            .then(self.size().cmp(&other.size()))
            .then_with(|| self.components.cmp(&other.components))
    }
}

impl PartialOrd for ChargedMultipartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Box `(row, col)` of component `component` (all 1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub component: usize,
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(component: usize, row: usize, col: usize) -> Self {
        Self { component, row, col }
    }
}

/// `(c_s + y - x) mod N`.
pub fn residue(cell: Cell, charges: &[i64], n: usize) -> usize {
    let content = charges[cell.component - 1] + cell.col as i64 - cell.row as i64;
    content.rem_euclid(n as i64) as usize
}

pub fn addable_cells(lc: &ChargedMultipartition, i: usize, n: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for (s, lam) in lc.components.iter().enumerate() {
        for x in lam.addable_rows() {
            let cell = Cell::new(s + 1, x, lam.part(x) as usize + 1);
            if residue(cell, &lc.charges, n) == i % n {
                out.push(cell);
            }
        }
    }
    out
}

pub fn removable_cells(lc: &ChargedMultipartition, i: usize, n: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for (s, lam) in lc.components.iter().enumerate() {
        for x in lam.removable_rows() {
            let cell = Cell::new(s + 1, x, lam.part(x) as usize);
            if residue(cell, &lc.charges, n) == i % n {
                out.push(cell);
            }
        }
    }
    out
}

fn modify(lc: &ChargedMultipartition, cell: Cell, add: bool) -> ChargedMultipartition {
    let mut out = lc.clone();
    let lam = &lc.components[cell.component - 1];
    out.components[cell.component - 1] = if add {
        lam.with_box_added(cell.row)
    } else {
        lam.with_box_removed(cell.row)
    };
    out
}

/// Action of a mode-zero Chevalley generator on one basis vector of `F(c)`.
pub fn chevalley_on_basis<R: Scalar>(
    gen: GeneratorId,
    lc: &ChargedMultipartition,
    n: usize,
) -> Result<SparseVec<ChargedMultipartition, R>> {
    if gen.mode != 0 {
        return Err(Error::Generator(format!("{gen} is not a mode-zero generator")));
    }
    let i = gen.node % n;
    let mut out = SparseVec::new();
    match gen.kind {
        Kind::Plus => {
            for cell in removable_cells(lc, i, n) {
                out.add_term(modify(lc, cell, false), R::one());
            }
        }
        Kind::Minus => {
            for cell in addable_cells(lc, i, n) {
                out.add_term(modify(lc, cell, true), R::one());
            }
        }
        Kind::Cartan => {
            let weight = addable_cells(lc, i, n).len() as i64 - removable_cells(lc, i, n).len() as i64;
            out.add_term(lc.clone(), R::from_int(weight));
        }
    }
    Ok(out)
}

pub fn chevalley_action<R: Scalar>(
    gen: GeneratorId,
    v: &SparseVec<ChargedMultipartition, R>,
    n: usize,
) -> Result<SparseVec<ChargedMultipartition, R>> {
    let mut out = SparseVec::new();
    for (lc, coeff) in v {
        out.add_scaled(&chevalley_on_basis(gen, lc, n)?, coeff);
    }
    Ok(out)
}

/// Every `L`-multipartition with at most `max_boxes` boxes, for fixed charges, in basis order.
pub fn multipartitions_up_to(charges: &[i64], max_boxes: usize) -> Vec<ChargedMultipartition> {
    fn go(level: usize, rem: usize, cur: &mut Vec<Partition>, out: &mut Vec<Vec<Partition>>) {
        if cur.len() == level {
            out.push(cur.clone());
            return;
        }
        for k in 0..=rem {
            for p in Partition::all_of_size(k) {
                cur.push(p);
                go(level, rem - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut all = Vec::new();
    go(charges.len(), max_boxes, &mut Vec::new(), &mut all);
    let mut out: Vec<_> = all
        .into_iter()
        .map(|components| ChargedMultipartition {
            components,
            charges: charges.to_vec(),
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, Rational};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn single(parts: &[u32], charge: i64) -> ChargedMultipartition {
        ChargedMultipartition::new(vec![p(parts)], vec![charge]).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::from_padded(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[3, 1]).size(), 4);
        assert_eq!(Partition::all_of_size(4).len(), 5);
        assert_eq!(Partition::all_up_to(6).len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue(Cell::new(1, 1, 1), &[0], 3), 0);
        assert_eq!(residue(Cell::new(1, 2, 1), &[1], 3), 0);
        assert_eq!(residue(Cell::new(2, 1, 3), &[0, -1], 3), 1);
    }

    #[test]
    fn addable_examples() {
        let vac = single(&[], 0);
        assert_eq!(addable_cells(&vac, 0, 3), vec![Cell::new(1, 1, 1)]);
        assert!(addable_cells(&vac, 1, 3).is_empty());
        // (1,2) has residue 1, (2,1) has residue 2.
        assert_eq!(addable_cells(&single(&[1], 0), 1, 3), vec![Cell::new(1, 1, 2)]);
        assert_eq!(addable_cells(&single(&[1], 0), 2, 3), vec![Cell::new(1, 2, 1)]);
    }

    #[test]
    fn removable_examples() {
        let vac = single(&[], 0);
        for i in 0..3 {
            assert!(removable_cells(&vac, i, 3).is_empty());
        }
        assert_eq!(removable_cells(&single(&[1], 0), 0, 3), vec![Cell::new(1, 1, 1)]);
        assert_eq!(removable_cells(&single(&[2, 1], 0), 1, 3), vec![Cell::new(1, 1, 2)]);
        assert_eq!(removable_cells(&single(&[2, 1], 0), 2, 3), vec![Cell::new(1, 2, 1)]);
    }

    #[test]
    fn chevalley_examples() {
        let vac = single(&[], 0);
        let v = chevalley_on_basis::<Rational>(GeneratorId::minus(0, 0), &vac, 3).unwrap();
        assert_eq!(v, SparseVec::basis(single(&[1], 0)));
        let h = chevalley_on_basis::<Rational>(GeneratorId::cartan(0, 0), &vac, 3).unwrap();
        assert_eq!(h, SparseVec::term(vac.clone(), int(1)));
        let z = chevalley_on_basis::<Rational>(GeneratorId::minus(1, 0), &vac, 3).unwrap();
        assert!(z.is_zero());
        assert!(chevalley_on_basis::<Rational>(GeneratorId::minus(1, 1), &vac, 3).is_err());
    }

    #[test]
    fn level_identity_on_small_multipartitions() {
        for n in [3usize, 4] {
            for charges in [vec![0], vec![-1, 1], vec![2, 0, -1]] {
                for lc in multipartitions_up_to(&charges, 4) {
                    let total: i64 = (0..n)
                        .map(|i| addable_cells(&lc, i, n).len() as i64 - removable_cells(&lc, i, n).len() as i64)
                        .sum();
                    assert_eq!(total, charges.len() as i64, "{lc:?}");
                    for s in 0..lc.level() {
                        let comp = ChargedMultipartition::new(
                            vec![lc.components[s].clone()],
                            vec![lc.charges[s]],
                        )
                        .unwrap();
                        let add: usize = (0..n).map(|i| addable_cells(&comp, i, n).len()).sum();
                        let rem: usize = (0..n).map(|i| removable_cells(&comp, i, n).len()).sum();
                        assert_eq!(add as i64 - rem as i64, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn chevalley_commutator_matches_cartan() {
        // [X_i^+, X_j^-] = δ_ij H_i on a small window.
        let n = 3;
        for lc in multipartitions_up_to(&[0, 1], 3) {
            let v: SparseVec<_, Rational> = SparseVec::basis(lc.clone());
            for i in 0..n {
                for j in 0..n {
                    let xp = |w: &SparseVec<_, Rational>| chevalley_action(GeneratorId::plus(i, 0), w, n).unwrap();
                    let xm = |w: &SparseVec<_, Rational>| chevalley_action(GeneratorId::minus(j, 0), w, n).unwrap();
                    let mut lhs = xp(&xm(&v));
                    lhs.sub_vec(&xm(&xp(&v)));
                    let rhs = if i == j {
                        chevalley_action(GeneratorId::cartan(i, 0), &v, n).unwrap()
                    } else {
                        SparseVec::new()
                    };
                    assert_eq!(lhs, rhs, "i={i} j={j} {lc:?}");
                }
            }
        }
    }

    #[test]
    fn window_counts_and_order() {
        let w = multipartitions_up_to(&[0, 0], 2);
        // 1 + 2 + (2 + 2 + 1)
        assert_eq!(w.len(), 8);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(w[0].size(), 0);
    }

    #[test]
    fn json_shape() {
        let lc = ChargedMultipartition::new(vec![p(&[2, 1]), p(&[])], vec![-1, 1]).unwrap();
        let s = serde_json::to_string(&lc).unwrap();
        assert_eq!(s, r#"{"components":[[2,1],[]],"charges":[-1,1]}"#);
        let back: ChargedMultipartition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, lc);
    }
}
