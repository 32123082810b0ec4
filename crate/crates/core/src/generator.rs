//! Names of affine Yangian generators and the affine Cartan matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Plus,
    Minus,
    Cartan,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Plus => "X+",
            Kind::Minus => "X-",
            Kind::Cartan => "H",
        }
    }
}

/// `X^+_{i,r}`, `X^-_{i,r}` or `H_{i,r}` with node `i` in `Z/NZ` (stored as `0..N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorId {
    pub node: usize,
    pub mode: u32,
    pub kind: Kind,
}

impl GeneratorId {
    pub fn new(kind: Kind, node: usize, mode: u32) -> Self {
        Self { node, mode, kind }
    }

    pub fn plus(node: usize, mode: u32) -> Self {
        Self::new(Kind::Plus, node, mode)
    }

    pub fn minus(node: usize, mode: u32) -> Self {
        Self::new(Kind::Minus, node, mode)
    }

    pub fn cartan(node: usize, mode: u32) -> Self {
        Self::new(Kind::Cartan, node, mode)
    }

    pub fn with_mode(self, mode: u32) -> Self {
        Self { mode, ..self }
    }

    pub fn with_node(self, node: usize) -> Self {
        Self { node, ..self }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} i={} r={}", self.kind.symbol(), self.node, self.mode)
    }
}

/// Parses the CLI form `"X+ i=1 r=1"`, `"X- i=0 r=0"`, `"H i=2 r=1"`.
impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot parse generator {s:?}; expected e.g. \"X+ i=1 r=0\""));
        let mut words = s.split_whitespace();
        let kind = match words.next().ok_or_else(bad)? {
            "X+" | "x+" | "E" => Kind::Plus,
            "X-" | "x-" | "F" => Kind::Minus,
            "H" | "h" => Kind::Cartan,
            _ => return Err(bad()),
        };
        let (mut node, mut mode) = (None, None);
        for w in words {
            let (key, value) = w.split_once('=').ok_or_else(bad)?;
            match key {
                "i" => node = Some(value.parse().map_err(|_| bad())?),
                "r" => mode = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(Self::new(kind, node.ok_or_else(bad)?, mode.unwrap_or(0)))
    }
}

/// Cartan matrix of affine type `A_{N-1}^{(1)}` (`N >= 3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub n: usize,
}

impl CartanMatrix {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        let (i, j) = (i % self.n, j % self.n);
        if i == j {
            2
        } else if (i + 1) % self.n == j || (j + 1) % self.n == i {
            -1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_generator() {
        let g: GeneratorId = "X+ i=1 r=1".parse().unwrap();
        assert_eq!(g, GeneratorId::plus(1, 1));
        let g: GeneratorId = "H i=0".parse().unwrap();
        assert_eq!(g, GeneratorId::cartan(0, 0));
        assert!("Y i=1".parse::<GeneratorId>().is_err());
        assert_eq!(GeneratorId::minus(2, 0).to_string(), "X- i=2 r=0");
    }

    #[test]
    fn cartan_entries() {
        let a = CartanMatrix::new(3);
        assert_eq!(a.entry(0, 0), 2);
        assert_eq!(a.entry(0, 2), -1);
        assert_eq!(a.entry(1, 2), -1);
        let a4 = CartanMatrix::new(4);
        assert_eq!(a4.entry(0, 2), 0);
        assert_eq!(a4.entry(3, 0), -1);
    }
}
