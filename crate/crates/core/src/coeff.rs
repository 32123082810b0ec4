//! Exact coefficients: rationals and polynomials in the two formal parameters `t` and `c`.
//!
//! Every operator in the crate is generic over [`Scalar`]. Symbolic runs use
//! [`ParamPoly`] (identities in `Q[t, c]`); sampled runs use [`Rational`] with `t` and
//! `c` fixed to rational points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-5/7"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Coefficient ring used by sparse vectors and operators.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + 'static
{
    fn from_rational(q: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn scaled(&self, q: &Rational) -> Self {
        self.clone() * &Self::from_rational(q)
    }

    fn to_json(&self) -> serde_json::Value;

    /// Inverse of [`Scalar::to_json`]; also accepts a rational as a string or integer.
    fn from_json(v: &serde_json::Value) -> Result<Self>;
}

fn rational_from_json(v: &serde_json::Value) -> Result<Option<Rational>> {
    Ok(match v {
        serde_json::Value::String(s) => Some(parse_rational(s)?),
        serde_json::Value::Number(n) => Some(parse_rational(&n.to_string())?),
        _ => None,
    })
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        if let Some(q) = rational_from_json(v)? {
            return Ok(q);
        }
        let p = ParamPoly::from_json(v)?;
        p.as_constant()
            .ok_or_else(|| Error::Parse(format!("coefficient {p} depends on t or c")))
    }
}

/// Element of `Q[t, c]` in canonical sparse form: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl ParamPoly {
    pub fn constant(q: Rational) -> Self {
        Self::monomial(0, 0, q)
    }

    pub fn monomial(deg_t: u32, deg_c: u32, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert((deg_t, deg_c), q);
        }
        Self { terms }
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, int(1))
    }

    pub fn c() -> Self {
        Self::monomial(0, 1, int(1))
    }

    /// Terms sorted lexicographically by `(deg_t, deg_c)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(a, b), q)| (a, b, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, deg_t: u32, deg_c: u32) -> Rational {
        self.terms.get(&(deg_t, deg_c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (u32, u32), q: &Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += q;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, q.clone());
            }
        }
    }

    pub fn to_json_terms(&self) -> Vec<PolyTermJson> {
        self.terms
            .iter()
            .map(|(&(t, c), q)| PolyTermJson {
                t,
                c,
                num: q.numer().to_string(),
                den: q.denom().to_string(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[PolyTermJson]) -> Result<Self> {
        let mut p = ParamPoly::zero();
        for term in terms {
            let q = parse_rational(&format!("{}/{}", term.num, term.den))?;
            p.add_term((term.t, term.c), &q);
        }
        Ok(p)
    }
}

/// One serialized term of a [`ParamPoly`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub t: u32,
    pub c: u32,
    pub num: String,
    pub den: String,
}

impl Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<PolyTermJson>::deserialize(d)?;
        ParamPoly::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

impl Zero for ParamPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ParamPoly {
    fn one() -> Self {
        Self::constant(int(1))
    }
}

impl<'a> AddAssign<&'a ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &'a ParamPoly) {
        for (&k, q) in &rhs.terms {
            self.add_term(k, q);
        }
    }
}

impl<'a> SubAssign<&'a ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, rhs: &'a ParamPoly) {
        for (&k, q) in &rhs.terms {
            self.add_term(k, &-q);
        }
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        self += &rhs;
        self
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(mut self, rhs: ParamPoly) -> ParamPoly {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a ParamPoly> for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &'a ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (&(a1, b1), p) in &self.terms {
            for (&(a2, b2), q) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), &(p * q));
            }
        }
        out
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        self * &rhs
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(mut self) -> ParamPoly {
        for q in self.terms.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl Scalar for ParamPoly {
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }

    fn scaled(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= q;
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_terms()).expect("plain data")
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        if let Some(q) = rational_from_json(v)? {
            return Ok(ParamPoly::constant(q));
        }
        Ok(serde_json::from_value(v.clone())?)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(dt, dc), q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut vars = String::new();
            for (name, d) in [("t", dt), ("c", dc)] {
                match d {
                    0 => {}
                    1 => vars.push_str(name),
                    _ => vars.push_str(&format!("{name}^{d}")),
                }
            }
            let unit = mag.is_one();
            match (vars.is_empty(), unit) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{vars}")?,
                (false, false) if mag.is_integer() => write!(f, "{mag}{vars}")?,
                (false, false) => write!(f, "({mag}){vars}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

/// Exact evaluation at `t = t_val`, `c = c_val`.
pub fn specialize(p: &ParamPoly, t_val: &Rational, c_val: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (&(dt, dc), q) in &p.terms {
        acc += q * num::pow(t_val.clone(), dt as usize) * num::pow(c_val.clone(), dc as usize);
    }
    acc
}

/// `hbar = c` and `beta = t/2 - N c/4 + c/2`, the parameter matching between the
/// degenerate double affine Hecke algebra and the affine Yangian.
pub fn derived_params(n: usize) -> (ParamPoly, ParamPoly) {
    let hbar = ParamPoly::c();
    let beta = beta_from(&ParamPoly::t(), &ParamPoly::c(), n);
    (hbar, beta)
}

/// `t/2 - N c/4 + c/2` evaluated in any coefficient ring.
pub fn beta_from<R: Scalar>(t: &R, c: &R, n: usize) -> R {
    let mut beta = t.scaled(&rat(1, 2));
    beta -= &c.scaled(&rat(n as i64, 4));
    beta += &c.scaled(&rat(1, 2));
    beta
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// The values of the parameters in a chosen coefficient ring.
#[derive(Clone, Debug)]
pub struct Params<R> {
    pub t: R,
    pub c: R,
    /// `nu(1), ..., nu(L)`.
    pub nu: Vec<R>,
}

impl<R: Scalar> Params<R> {
    pub fn hbar(&self) -> R {
        self.c.clone()
    }

    pub fn beta(&self, n: usize) -> R {
        beta_from(&self.t, &self.c, n)
    }
}

impl Params<ParamPoly> {
    /// Fully symbolic `t`, `c` with the given `nu`.
    pub fn symbolic(nu: Vec<ParamPoly>) -> Self {
        Self {
            t: ParamPoly::t(),
            c: ParamPoly::c(),
            nu,
        }
    }

    pub fn specialize(&self, t: &Rational, c: &Rational) -> Params<Rational> {
        Params {
            t: t.clone(),
            c: c.clone(),
            nu: self.nu.iter().map(|p| specialize(p, t, c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec((0u32..3, 0u32..3, -9i64..9, 1i64..6), 0..5).prop_map(|terms| {
            let mut p = ParamPoly::zero();
            for (a, b, n, d) in terms {
                p += &ParamPoly::monomial(a, b, rat(n, d));
            }
            p
        })
    }

    fn rat_strategy() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| rat(n, d))
    }

    #[test]
    fn derived_params_small_rank() {
        let (hbar, beta) = derived_params(3);
        assert_eq!(hbar, ParamPoly::c());
        let expected = ParamPoly::monomial(1, 0, rat(1, 2)) + ParamPoly::monomial(0, 1, rat(-1, 4));
        assert_eq!(beta, expected);

        let (_, beta4) = derived_params(4);
        let expected = ParamPoly::monomial(1, 0, rat(1, 2)) + ParamPoly::monomial(0, 1, rat(-1, 2));
        assert_eq!(beta4, expected);

        for n in 3..8 {
            let (_, beta) = derived_params(n);
            assert_eq!(specialize(&beta, &int(2), &int(0)), int(1));
        }
    }

    #[test]
    fn specialize_examples() {
        let tc = ParamPoly::t() * ParamPoly::c();
        assert_eq!(specialize(&tc, &int(2), &int(3)), int(6));
        assert_eq!(specialize(&ParamPoly::zero(), &rat(5, 3), &int(-1)), int(0));
        let p = ParamPoly::monomial(1, 0, rat(1, 2)) + ParamPoly::monomial(0, 1, rat(-1, 4));
        assert_eq!(specialize(&p, &int(1), &int(2)), int(0));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = ParamPoly::t() - ParamPoly::t();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p, ParamPoly::zero());
    }

    #[test]
    fn json_is_sorted_and_exact() {
        let p = ParamPoly::monomial(0, 1, rat(-3, 4)) + ParamPoly::monomial(1, 0, rat(1, 2));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"t":0,"c":1,"num":"-3","den":"4"},{"t":1,"c":0,"num":"1","den":"2"}]"#
        );
        let back: ParamPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_is_readable() {
        let (_, beta) = derived_params(3);
        assert_eq!(beta.to_string(), "-(1/4)c + (1/2)t");
        assert_eq!((ParamPoly::t() * ParamPoly::t()).to_string(), "t^2");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-5/7").unwrap(), rat(-5, 7));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(2, 0), int(1));
        assert_eq!(binomial(5, 5), int(1));
    }

    proptest! {
        #[test]
        fn ring_axioms(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
            prop_assert_eq!((p.clone() * &q) * &r, p.clone() * &(q.clone() * &r));
            prop_assert_eq!(p.clone() * &(q.clone() + r.clone()), p.clone() * &q + p.clone() * &r);
            prop_assert_eq!(p.clone() + q.clone(), q.clone() + p.clone());
            prop_assert_eq!(p.clone() * &q, q.clone() * &p);
            prop_assert_eq!(p.clone() - p.clone(), ParamPoly::zero());
        }

        #[test]
        fn specialize_is_a_ring_homomorphism(
            p in poly_strategy(), q in poly_strategy(), t in rat_strategy(), c in rat_strategy()
        ) {
            let prod = specialize(&(p.clone() * &q), &t, &c);
            prop_assert_eq!(prod, specialize(&p, &t, &c) * specialize(&q, &t, &c));
            let sum = specialize(&(p.clone() + q.clone()), &t, &c);
            prop_assert_eq!(sum, specialize(&p, &t, &c) + specialize(&q, &t, &c));
        }

        #[test]
        fn json_round_trip(p in poly_strategy()) {
            let s = serde_json::to_string(&p).unwrap();
            let back: ParamPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
