//! Exact census of square-tiled surfaces.
//!
//! A square-tiled surface with `N` squares is a pair `(h, v)` in `S_N^2`
//! acting transitively; its zeros are the nontrivial cycles of the
//! commutator. Counts are kept exactly: `pairs` is the number of such pairs
//! with the commutator type of a stratum, and `pairs / N!` is the number of
//! surfaces weighted by `1/|Aut|`.
//!
//! Two independent engines produce the same integers: [`direct`] scans
//! `h` by conjugacy class and `v` over all of `S_N`; [`frobenius`] sums
//! characters and removes disconnected pairs with the exponential formula.
//! [`enumerate`] lists the isomorphism classes themselves, which is what
//! per-component counts and Siegel-Veech ensembles need.

pub mod characters;
pub mod db;
pub mod direct;
pub mod enumerate;
pub mod frobenius;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use db::CensusDB;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::origami::Origami;
use crate::strata::{Component, Stratum};
use characters::factorial;
use direct::DirectTable;
use frobenius::Frobenius;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Direct,
    Frobenius,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Engine::Direct),
            "frobenius" => Ok(Engine::Frobenius),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown engine {s:?}"),
            }),
        }
    }
}

/// One exact count: surfaces of a stratum (or one of its components) with
/// `n` squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRecord {
    pub stratum: Stratum,
    pub n: usize,
    /// Transitive pairs `(h, v)` with the stratum's commutator type.
    pub pairs: BigInt,
    /// `pairs / n!`, the `1/|Aut|`-weighted number of surfaces.
    pub weighted: BigRational,
    /// `prod r_j!` over repeated zero orders, the factor for named zeros.
    pub labeled_factor: u64,
    pub engine: Engine,
    pub component: Option<Component>,
    /// ISO-8601 creation time; not part of a record's identity.
    pub created_at: String,
}

impl CountRecord {
    pub fn new(
        stratum: &Stratum,
        n: usize,
        pairs: BigInt,
        engine: Engine,
        component: Option<Component>,
    ) -> Self {
        let weighted = BigRational::new(pairs.clone(), factorial(n));
        CountRecord {
            stratum: stratum.clone(),
            n,
            pairs,
            weighted,
            labeled_factor: stratum.labeling_factor(),
            engine,
            component,
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// Weighted count with named zeros.
    pub fn labeled_weighted(&self) -> BigRational {
        &self.weighted * BigRational::from_integer(self.labeled_factor.into())
    }

    /// Same stratum, size, component and count (engine and time ignored).
    pub fn same_count(&self, other: &CountRecord) -> bool {
        self.stratum == other.stratum
            && self.n == other.n
            && self.component == other.component
            && self.pairs == other.pairs
    }
}

/// Largest square counts each engine is allowed to run at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Direct scan over `S_N`: cost grows like `N! * p(N)`.
    pub direct_max_n: usize,
    /// Character sums: cost grows like the number of partitions of `N`.
    pub frobenius_max_n: usize,
    /// Class enumeration (per-component counts, ensembles).
    pub enumerate_max_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            direct_max_n: 10,
            frobenius_max_n: 60,
            enumerate_max_n: 24,
        }
    }
}

fn check(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::BudgetExceeded { reached: n, limit })
    } else {
        Ok(())
    }
}

/// Counting front end holding the engine caches, so that a run over many
/// strata and square counts shares character columns and direct scans.
pub struct Census {
    exec: Exec,
    budget: Budget,
    frobenius: Frobenius,
    direct: HashMap<usize, DirectTable>,
}

impl Census {
    pub fn new(exec: Exec, budget: Budget) -> Self {
        Census {
            exec,
            budget,
            frobenius: Frobenius::new(exec),
            direct: HashMap::new(),
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn direct_table(&mut self, n: usize) -> &DirectTable {
        let exec = self.exec;
        self.direct
            .entry(n)
            .or_insert_with(|| direct::direct_table(n, exec))
    }

    /// Exhaustive count: `h` by class representative, `v` over `S_n`.
    pub fn count_direct(&mut self, st: &Stratum, n: usize) -> Result<CountRecord> {
        check(n, self.budget.direct_max_n)?;
        let pairs = if n == 0 || n < st.min_squares() {
            BigInt::zero()
        } else {
            self.direct_table(n).get(&st.cycle_lengths())
        };
        Ok(CountRecord::new(st, n, pairs, Engine::Direct, None))
    }

    /// Character-sum count with connectivity correction.
    pub fn count_frobenius(&mut self, st: &Stratum, n: usize) -> Result<CountRecord> {
        check(n, self.budget.frobenius_max_n)?;
        let pairs = if n == 0 || n < st.min_squares() {
            BigInt::zero()
        } else {
            self.frobenius.transitive_pairs(n, &st.cycle_lengths())
        };
        Ok(CountRecord::new(st, n, pairs, Engine::Frobenius, None))
    }

    pub fn count(&mut self, st: &Stratum, n: usize, engine: Engine) -> Result<CountRecord> {
        match engine {
            Engine::Direct => self.count_direct(st, n),
            Engine::Frobenius => self.count_frobenius(st, n),
        }
    }

    /// Records for `n = 1..=n_max`. On a budget overrun the error names the
    /// first size that could not be counted.
    pub fn series(
        &mut self,
        st: &Stratum,
        n_max: usize,
        engine: Engine,
    ) -> Result<Vec<CountRecord>> {
        (1..=n_max).map(|n| self.count(st, n, engine)).collect()
    }

    /// Lattice points of area at most `n_max`, zeros named:
    /// `sum_{N <= n_max} labeled_weighted(N)`.
    pub fn cumulative_count(
        &mut self,
        st: &Stratum,
        n_max: usize,
        engine: Engine,
    ) -> Result<BigRational> {
        Ok(cumulative(&self.series(st, n_max, engine)?))
    }

    /// Counts split by connected component of the stratum, from the list of
    /// isomorphism classes. The parts sum to the total count.
    pub fn count_by_component(
        &mut self,
        st: &Stratum,
        n: usize,
    ) -> Result<BTreeMap<Component, CountRecord>> {
        check(n, self.budget.enumerate_max_n)?;
        let comps = st.components()?;
        let classes = enumerate::enumerate_classes(st, n, self.exec);
        let tags = self
            .exec
            .map(&classes, |(o, aut)| -> Result<(Component, u64)> {
                Ok((o.component()?, *aut))
            });
        let fact = factorial(n);
        let mut pairs: BTreeMap<Component, BigInt> =
            comps.iter().map(|&c| (c, BigInt::zero())).collect();
        for t in tags {
            let (c, aut) = t?;
            // each class contributes n!/|Aut| labelled pairs
            *pairs.entry(c).or_default() += &fact / BigInt::from(aut);
        }
        Ok(pairs
            .into_iter()
            .map(|(c, p)| (c, CountRecord::new(st, n, p, Engine::Direct, Some(c))))
            .collect())
    }

    /// Isomorphism classes with automorphism counts.
    pub fn classes(&self, st: &Stratum, n: usize) -> Result<Vec<(Origami, u64)>> {
        check(n, self.budget.enumerate_max_n)?;
        Ok(enumerate::enumerate_classes(st, n, self.exec))
    }
}

impl Default for Census {
    fn default() -> Self {
        Census::new(Exec::default(), Budget::default())
    }
}

/// Sum of named-zero weighted counts over a series of records.
pub fn cumulative(records: &[CountRecord]) -> BigRational {
    records
        .iter()
        .fold(BigRational::zero(), |acc, r| acc + r.labeled_weighted())
}

/// One-shot direct count with default budget.
pub fn count_direct(st: &Stratum, n: usize) -> Result<CountRecord> {
    Census::default().count_direct(st, n)
}

/// One-shot character-sum count with default budget.
pub fn count_frobenius(st: &Stratum, n: usize) -> Result<CountRecord> {
    Census::default().count_frobenius(st, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> Stratum {
        s.parse().unwrap()
    }

    #[test]
    fn h2_three_squares() {
        let r = count_direct(&st("2"), 3).unwrap();
        assert_eq!(r.pairs, BigInt::from(18));
        assert_eq!(r.weighted, BigRational::from_integer(3.into()));
        let f = count_frobenius(&st("2"), 3).unwrap();
        assert!(r.same_count(&f));
    }

    #[test]
    fn below_minimal_area_is_zero() {
        let mut c = Census::default();
        for engine in [Engine::Direct, Engine::Frobenius] {
            assert!(c.count(&st("4"), 4, engine).unwrap().pairs.is_zero());
            assert!(c.count(&st("1,1"), 3, engine).unwrap().pairs.is_zero());
        }
        assert!(c
            .cumulative_count(&st("2"), 2, Engine::Direct)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn cumulative_counts() {
        let mut c = Census::default();
        assert_eq!(
            c.cumulative_count(&st("2"), 3, Engine::Frobenius).unwrap(),
            BigRational::from_integer(3.into())
        );
        let mut prev = BigRational::zero();
        for n in 1..=12 {
            let cur = c
                .cumulative_count(&st("1,1"), n, Engine::Frobenius)
                .unwrap();
            assert!(cur >= prev);
            prev = cur;
        }
    }

    #[test]
    fn h11_four_squares_exhaustive() {
        // brute force over all of S_4^2
        let mut hits = 0;
        let perms = crate::origami::tests::all_perms(4);
        for h in &perms {
            for v in &perms {
                let o = Origami::new(h.clone(), v.clone()).unwrap();
                if o.is_connected() && o.stratum().unwrap() == st("1,1") {
                    hits += 1;
                }
            }
        }
        let r = count_direct(&st("1,1"), 4).unwrap();
        assert_eq!(r.pairs, BigInt::from(hits));
        assert_eq!(
            r.labeled_weighted(),
            &r.weighted * BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn budget_is_enforced() {
        let mut c = Census::new(
            Exec::Sequential,
            Budget {
                direct_max_n: 5,
                ..Budget::default()
            },
        );
        match c.series(&st("2"), 7, Engine::Direct) {
            Err(Error::BudgetExceeded {
                reached: 6,
                limit: 5,
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn components_partition_the_count() {
        let mut c = Census::default();
        for (s, n) in [
            ("2", 3),
            ("2", 6),
            ("1,1", 5),
            ("4", 5),
            ("4", 7),
            ("2,2", 6),
            ("3,1", 6),
        ] {
            let parts = c.count_by_component(&st(s), n).unwrap();
            let total: BigInt = parts.values().map(|r| r.pairs.clone()).sum();
            assert_eq!(total, c.count_direct(&st(s), n).unwrap().pairs, "{s} n={n}");
        }
        let h4 = c.count_by_component(&st("4"), 5).unwrap();
        assert!(!h4[&Component::Hyperelliptic].pairs.is_zero());
        assert!(!h4[&Component::OddSpin].pairs.is_zero());
        assert!(!h4.contains_key(&Component::EvenSpin));
        let h2 = c.count_by_component(&st("2"), 3).unwrap();
        assert_eq!(h2.len(), 1);
        assert_eq!(h2[&Component::Connected].pairs, BigInt::from(18));
    }
}
