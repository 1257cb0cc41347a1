//! Partitions, strata, connected components and the closed-form values
//! attached to them.

mod exact;
mod formulas;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use exact::{pi_fixed, ExactReal};
pub use formulas::*;

pub(crate) use exact::{double_factorial, factorial};

/// An unordered partition, stored with parts sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` non-increasing. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if let Some(i) = parts.iter().position(|&p| p == 0) {
            return Err(Error::Invalid(format!("zero part at index {i}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multiplicities `(part, count)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// All partitions of `s` in reverse-lexicographic order: `[s]` first,
/// `[1,...,1]` last.
pub fn partitions_of(s: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, s, &mut Vec::new(), &mut out);
    out
}

/// A stratum `H(m_1, ..., m_n)` of Abelian differentials.
///
/// The empty partition is the torus `H(0)`: representable, but degenerate and
/// excluded from all tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Stratum {
    m: Partition,
    g: u32,
}

impl Stratum {
    pub fn new(m: Partition) -> Result<Self> {
        let s = m.sum();
        if !s.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "zero orders sum to {s}, which is odd"
            )));
        }
        Ok(Stratum { g: s / 2 + 1, m })
    }

    pub fn from_parts(parts: &[u32]) -> Result<Self> {
        Stratum::new(Partition::new(parts.to_vec())?)
    }

    /// The degenerate torus stratum.
    pub fn torus() -> Self {
        Stratum {
            m: Partition::default(),
            g: 1,
        }
    }

    /// All strata of genus `g`, in the order of [`partitions_of`].
    pub fn of_genus(g: u32) -> Vec<Stratum> {
        assert!(g >= 1);
        partitions_of(2 * g - 2)
            .into_iter()
            .map(|m| Stratum::new(m).unwrap())
            .collect()
    }

    pub fn partition(&self) -> &Partition {
        &self.m
    }

    pub fn zeros(&self) -> &[u32] {
        self.m.parts()
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_zeros(&self) -> usize {
        self.m.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.m.is_empty()
    }

    /// Complex dimension `2g + n - 1`.
    pub fn dimension(&self) -> u32 {
        2 * self.g + self.m.len() as u32 - 1
    }

    /// Smallest number of squares of a square-tiled surface in the stratum:
    /// every zero of order `m` needs a vertex of angle `2pi(m+1)`.
    pub fn min_squares(&self) -> usize {
        self.m
            .parts()
            .iter()
            .map(|&m| m as usize + 1)
            .sum::<usize>()
            .max(1)
    }

    /// Nontrivial commutator cycle lengths, `m_i + 1`.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.m.parts().iter().map(|&m| m as usize + 1).collect()
    }

    pub fn is_all_even(&self) -> bool {
        !self.m.is_empty() && self.m.parts().iter().all(|m| m % 2 == 0)
    }

    pub fn is_minimal(&self) -> bool {
        self.m.len() == 1
    }

    /// `H(g-1, g-1)`.
    pub fn is_pair(&self) -> bool {
        self.m.len() == 2 && self.m.parts()[0] == self.g - 1 && self.m.parts()[1] == self.g - 1
    }

    pub fn is_principal(&self) -> bool {
        !self.m.is_empty() && self.m.parts().iter().all(|&m| m == 1)
    }

    /// Number of zero labelings identified when zeros are named:
    /// `prod_j r_j!` over multiplicities `r_j` of repeated orders.
    pub fn labeling_factor(&self) -> u64 {
        self.m
            .multiplicities()
            .iter()
            .map(|&(_, r)| (1..=r as u64).product::<u64>())
            .product()
    }

    /// Connected components, following the Kontsevich-Zorich
    /// classification (with its genus 2 and 3 exceptions hard-coded).
    pub fn components(&self) -> Result<Vec<Component>> {
        use Component::*;
        if self.is_degenerate() {
            return Err(Error::DegenerateStratum);
        }
        let g = self.g;
        let hyp_special = self.is_minimal() || self.is_pair();
        let out = match g {
            2 => vec![Connected],
            3 if hyp_special => vec![Hyperelliptic, OddSpin],
            3 => vec![Connected],
            _ if self.is_minimal() => vec![Hyperelliptic, EvenSpin, OddSpin],
            _ if self.is_pair() && (g - 1).is_multiple_of(2) => {
                vec![Hyperelliptic, EvenSpin, OddSpin]
            }
            _ if self.is_pair() => vec![Hyperelliptic, NonHyperelliptic],
            _ if self.is_all_even() => vec![EvenSpin, OddSpin],
            _ => vec![Connected],
        };
        Ok(out)
    }

    /// Zero orders padded with ones up to genus `g`: `m(g)`.
    pub fn complete_with_ones(m: &Partition, g: u32) -> Result<Partition> {
        let sum = m.sum();
        if 2 * g < 2 || 2 * g - 2 <= sum {
            return Err(Error::GenusTooSmall { g, sum });
        }
        let mut parts = m.parts().to_vec();
        parts.extend(std::iter::repeat_n(1, (2 * g - 2 - sum) as usize));
        Partition::new(parts)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// Strict parser for `"2,1,1"`: positive integers, non-increasing. The empty
/// string is the torus.
impl FromStr for Stratum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(Stratum::torus());
        }
        let mut parts = Vec::new();
        let mut pos = 0usize;
        for tok in s.split(',') {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse {
                    pos,
                    msg: format!("expected a positive integer, found {tok:?}"),
                });
            }
            let v: u32 = tok.parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("integer out of range: {tok}"),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    pos,
                    msg: "zero orders must be positive".into(),
                });
            }
            if let Some(&prev) = parts.last() {
                if v > prev {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("parts must be non-increasing ({prev} then {v})"),
                    });
                }
            }
            parts.push(v);
            pos += tok.len() + 1;
        }
        Stratum::new(Partition(parts)).map_err(|e| Error::Parse {
            pos: 0,
            msg: e.to_string(),
        })
    }
}

impl TryFrom<String> for Stratum {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Stratum> for String {
    fn from(s: Stratum) -> String {
        s.to_string()
    }
}

/// A connected component of a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Connected,
    Hyperelliptic,
    EvenSpin,
    OddSpin,
    NonHyperelliptic,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Connected => "connected",
            Component::Hyperelliptic => "hyperelliptic",
            Component::EvenSpin => "even-spin",
            Component::OddSpin => "odd-spin",
            Component::NonHyperelliptic => "nonhyperelliptic",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "connected" => Component::Connected,
            "hyperelliptic" | "hyp" => Component::Hyperelliptic,
            "even-spin" | "even" => Component::EvenSpin,
            "odd-spin" | "odd" => Component::OddSpin,
            "nonhyperelliptic" | "nonhyp" => Component::NonHyperelliptic,
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown component {s:?}"),
                })
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Census,
    Ingested,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Census => "census",
            Provenance::Ingested => "ingested",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonKind {
    Eps1,
    Eps2,
    Eps3,
}

/// A deviation from one of the conjectural asymptotic values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRecord {
    pub stratum: Stratum,
    pub eps: f64,
    pub which: EpsilonKind,
    pub provenance: Provenance,
}
