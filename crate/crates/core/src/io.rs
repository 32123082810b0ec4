//! JSON schemas for Fock vectors, operator matrices and bases.
//!
//! Vectors are written in multipartition labels:
//!
//! ```json
//! {"N": 3, "L": 1, "terms": [{"components": [[1]], "charges": [0], "coeff": "1"}]}
//! ```
//!
//! Rational coefficients are strings `"p/q"`; symbolic ones are term lists
//! `[{"t": i, "c": j, "num": "p", "den": "q"}]` for `Σ (p/q) t^i c^j`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::Scalar;
use crate::combinatorics::{ChargedMultipartition, Partition};
use crate::error::{Error, Result};
use crate::sparse::SparseVec;
use crate::wedge::{charge_compose, charge_decompose, to_multipartition_labels, to_wedge_labels, Dims, FockState, FockVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub components: Vec<Partition>,
    pub charges: Vec<i64>,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub terms: Vec<TermJson>,
}

pub fn vector_to_json<R: Scalar>(dims: &Dims, v: &FockVec<R>) -> VectorJson {
    let terms = to_multipartition_labels(dims, v)
        .iter()
        .map(|(lc, c)| TermJson {
            components: lc.components.clone(),
            charges: lc.charges.clone(),
            coeff: c.to_json(),
        })
        .collect();
    VectorJson { n: dims.n, l: dims.l, terms }
}

/// Parses a vector; `N` and `L` in the file must match `dims`.
pub fn vector_from_json<R: Scalar>(dims: &Dims, v: &VectorJson) -> Result<FockVec<R>> {
    if v.n != dims.n || v.l != dims.l {
        return Err(Error::Config(format!(
            "vector is for N = {}, L = {} but the run uses N = {}, L = {}",
            v.n, v.l, dims.n, dims.l
        )));
    }
    let mut labelled = SparseVec::new();
    for t in &v.terms {
        let lc = ChargedMultipartition::new(t.components.clone(), t.charges.clone())?;
        labelled.add_term(lc, R::from_json(&t.coeff)?);
    }
    to_wedge_labels(dims, &labelled)
}

pub fn state_label(dims: &Dims, state: &FockState) -> ChargedMultipartition {
    charge_decompose(dims, state)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub col: usize,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub row: usize,
    pub entries: Vec<MatrixEntry>,
}

/// Row-sparse matrix of an operator. Columns are the window basis; rows index `basis`,
/// whose first `window` entries are the window itself and the rest are images outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub generator: String,
    pub window: usize,
    pub basis: Vec<ChargedMultipartition>,
    pub rows: Vec<MatrixRow>,
}

/// `columns[j]` is the image of `window[j]`, already in multipartition labels.
pub fn matrix_to_json<R: Scalar>(
    dims: &Dims,
    generator: &str,
    window: &[ChargedMultipartition],
    columns: &[SparseVec<ChargedMultipartition, R>],
) -> MatrixJson {
    let mut basis = window.to_vec();
    let mut extra: Vec<ChargedMultipartition> = columns
        .iter()
        .flat_map(|c| c.keys().cloned())
        .filter(|k| !window.contains(k))
        .collect();
    extra.sort();
    extra.dedup();
    basis.extend(extra);
    let index: std::collections::HashMap<&ChargedMultipartition, usize> =
        basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut rows: Vec<Vec<MatrixEntry>> = vec![Vec::new(); basis.len()];
    for (j, col) in columns.iter().enumerate() {
        for (k, c) in col.iter() {
            rows[index[k]].push(MatrixEntry { col: j, coeff: c.to_json() });
        }
    }
    MatrixJson {
        n: dims.n,
        l: dims.l,
        generator: generator.to_string(),
        window: window.len(),
        basis: basis.clone(),
        rows: rows
            .into_iter()
            .enumerate()
            .filter(|(_, e)| !e.is_empty())
            .map(|(row, entries)| MatrixRow { row, entries })
            .collect(),
    }
}

/// Basis in dump order: multipartitions with the given charges and at most `max_boxes`
/// boxes, or else the images of all partitions `λ` with `|λ| <= max_boxes` at charge `M`.
pub fn basis_window(dims: &Dims, charges: Option<&[i64]>, m: i64, max_boxes: usize) -> Result<Vec<ChargedMultipartition>> {
    let mut out = match charges {
        Some(c) => {
            if c.len() != dims.l {
                return Err(Error::Config(format!("{} charges given for L = {}", c.len(), dims.l)));
            }
            crate::combinatorics::multipartitions_up_to(c, max_boxes)
        }
        None => Partition::all_up_to(max_boxes)
            .into_iter()
            .map(|p| charge_decompose(dims, &FockState::new(p, m)))
            .collect(),
    };
    out.sort();
    Ok(out)
}

pub fn compose_all(dims: &Dims, basis: &[ChargedMultipartition]) -> Result<Vec<FockState>> {
    basis.iter().map(|lc| charge_compose(dims, lc)).collect()
}

pub fn multipartition_json(lc: &ChargedMultipartition) -> Value {
    json!({"components": lc.components, "charges": lc.charges})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, ParamPoly, Rational};

    #[test]
    fn vector_round_trip() {
        let dims = Dims::new(3, 2).unwrap();
        let lc = ChargedMultipartition::new(vec![Partition::new(vec![2]).unwrap(), Partition::empty()], vec![-1, 1]).unwrap();
        let mut v = SparseVec::<ChargedMultipartition, ParamPoly>::new();
        v.add_term(lc, ParamPoly::t() + ParamPoly::constant(rat(-2, 3)));
        let fv = to_wedge_labels(&dims, &v).unwrap();
        let js = vector_to_json(&dims, &fv);
        let text = serde_json::to_string(&js).unwrap();
        let back: VectorJson = serde_json::from_str(&text).unwrap();
        let fv2: FockVec<ParamPoly> = vector_from_json(&dims, &back).unwrap();
        assert_eq!(fv, fv2);
        assert_eq!(serde_json::to_string(&vector_to_json(&dims, &fv2)).unwrap(), text);
    }

    #[test]
    fn rational_coefficients_accept_numbers_and_strings() {
        let dims = Dims::new(3, 1).unwrap();
        let js: VectorJson = serde_json::from_str(
            r#"{"N":3,"L":1,"terms":[{"components":[[1]],"charges":[0],"coeff":"-5/7"},{"components":[[]],"charges":[0],"coeff":2}]}"#,
        )
        .unwrap();
        let v: FockVec<Rational> = vector_from_json(&dims, &js).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.get(&FockState::new(Partition::new(vec![1]).unwrap(), 0)), Some(&rat(-5, 7)));
    }

    #[test]
    fn basis_from_total_charge_is_sorted_and_bounded() {
        let dims = Dims::new(3, 2).unwrap();
        let b = basis_window(&dims, None, 0, 2).unwrap();
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.iter().all(|lc| lc.size() <= 2 && lc.total_charge() == 0));
        assert!(b.contains(&ChargedMultipartition::vacuum(&[0, 0])));
        assert!(b.contains(&ChargedMultipartition::vacuum(&[-1, 1])));
    }
}
