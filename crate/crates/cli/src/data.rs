//! Where table values come from: the census cache, closed forms and
//! external volume tables, each value tagged with its provenance.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::ValueEnum;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use sqtiled::census::{Census, CensusDB, CountRecord, Engine};
use sqtiled::estimate::{fmt_float, read_volume_table, volume_from_records};
use sqtiled::strata::{
    hyperelliptic_volume_minimal, hyperelliptic_volume_pair, Component, ExactReal, Provenance,
    Stratum,
};
use sqtiled::{Error, Exec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Ingested,
    ClosedForm,
    Census,
}

/// One table cell before formatting.
#[derive(Clone, Debug)]
pub enum Cell {
    Exact(ExactReal),
    Value(f64, Provenance),
    /// Applicable but unavailable; carries the reason.
    Missing(String),
    NotApplicable,
}

impl Cell {
    /// `(value, provenance)` strings.
    pub fn render(&self, digits: usize) -> (String, String) {
        match self {
            Cell::Exact(x) => (exact_cell(x), Provenance::ClosedForm.to_string()),
            Cell::Value(v, p) => (fmt_float(*v, digits), p.to_string()),
            Cell::Missing(_) => ("NA".into(), "missing".into()),
            Cell::NotApplicable => (String::new(), String::new()),
        }
    }
}

/// `num/den`, always with the denominator.
pub fn ratio_cell(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `num/den` or `num/den*pi^k`.
pub fn exact_cell(x: &ExactReal) -> String {
    let c = ratio_cell(&x.coeff);
    match x.pi_exp {
        0 => c,
        1 => format!("{c}*pi"),
        e => format!("{c}*pi^{e}"),
    }
}

/// Shared state of one invocation.
pub struct Ctx {
    pub exec: Exec,
    pub census: Census,
    pub digits: usize,
    cache_dir: PathBuf,
    started: Instant,
    max_seconds: Option<f64>,
}

impl Ctx {
    pub fn new(
        exec: Exec,
        census: Census,
        cache_dir: PathBuf,
        max_seconds: Option<f64>,
        digits: usize,
    ) -> Self {
        Ctx {
            exec,
            census,
            digits,
            cache_dir,
            started: Instant::now(),
            max_seconds,
        }
    }

    /// Fails with a budget error if the time budget ran out before starting
    /// work on `n` squares.
    pub fn check_time(&self, n: usize) -> Result<()> {
        if let Some(max) = self.max_seconds {
            let spent = self.started.elapsed().as_secs_f64();
            if spent > max {
                return Err(Error::BudgetExceeded {
                    reached: n,
                    limit: n.saturating_sub(1),
                })
                .with_context(|| format!("time budget of {max} s used up after {spent:.1} s"));
            }
        }
        Ok(())
    }

    pub fn db(&self, st: &Stratum) -> Result<CensusDB> {
        Ok(CensusDB::for_stratum(&self.cache_dir, st)?)
    }

    /// Total counts for every `N <= n_max`, from the cache when present and
    /// from the character-sum engine otherwise. New records are stored.
    pub fn total_series(&mut self, st: &Stratum, n_max: usize) -> Result<Vec<CountRecord>> {
        let mut db = self.db(st)?;
        let mut out = Vec::with_capacity(n_max);
        let mut fresh = Vec::new();
        for n in 1..=n_max {
            match db.get_any(st, n) {
                Some(r) => out.push(r.clone()),
                None => {
                    self.check_time(n)?;
                    let r = self.census.count(st, n, Engine::Frobenius)?;
                    fresh.push(r.clone());
                    out.push(r);
                }
            }
        }
        db.insert_all(&fresh)?;
        Ok(out)
    }

    /// Cumulative named-zero counts per component for `N <= n_max`.
    pub fn component_totals(
        &mut self,
        st: &Stratum,
        n_max: usize,
    ) -> Result<BTreeMap<Component, BigRational>> {
        let comps = st.components()?;
        let mut db = self.db(st)?;
        let mut totals: BTreeMap<Component, BigRational> = BTreeMap::new();
        for n in 1..=n_max {
            let cached: Option<Vec<CountRecord>> = comps
                .iter()
                .map(|&c| db.get(st, n, Engine::Direct, Some(c)).cloned())
                .collect();
            let recs = match cached {
                Some(r) => r,
                None => {
                    self.check_time(n)?;
                    let split: Vec<CountRecord> = self
                        .census
                        .count_by_component(st, n)?
                        .into_values()
                        .collect();
                    db.insert_all(&split)?;
                    split
                }
            };
            for r in recs {
                let c = r.component.expect("component records");
                *totals.entry(c).or_default() += r.labeled_weighted();
            }
        }
        Ok(totals)
    }

    /// `vol(even) / vol(odd)` approximated by the ratio of cumulative
    /// component counts up to `n` squares.
    pub fn spin_ratio(&mut self, st: &Stratum, n: Option<usize>) -> Result<Cell> {
        let Some(n) = n else {
            return Ok(Cell::Missing("spin split needs --surface-n".into()));
        };
        let t = self.component_totals(st, n)?;
        let even = t.get(&Component::EvenSpin).cloned().unwrap_or_default();
        let odd = t.get(&Component::OddSpin).cloned().unwrap_or_default();
        if odd == BigRational::default() {
            return Ok(Cell::Missing(format!(
                "no odd-spin surfaces with at most {n} squares"
            )));
        }
        let ratio = (even / odd).to_f64().unwrap_or(f64::NAN);
        Ok(Cell::Value(ratio, Provenance::Census))
    }

    pub fn load_volumes(&self, path: Option<&Path>) -> Result<BTreeMap<Stratum, f64>> {
        let Some(path) = path else {
            return Ok(BTreeMap::new());
        };
        let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let entries =
            read_volume_table(f).with_context(|| format!("reading {}", path.display()))?;
        let mut out = BTreeMap::new();
        for e in entries {
            let v = e.value.to_f64();
            if let Some(old) = out.insert(e.stratum.clone(), v) {
                if old != v {
                    return Err(Error::Invalid(format!(
                        "{}: two different volumes for H({})",
                        path.display(),
                        e.stratum
                    ))
                    .into());
                }
            }
        }
        Ok(out)
    }

    /// The volume of `st` (zeros named) from the first source that has it.
    pub fn volume(
        &mut self,
        st: &Stratum,
        sources: &[Source],
        ingested: &BTreeMap<Stratum, f64>,
        n_max: Option<usize>,
    ) -> Result<Cell> {
        let mut why = Vec::new();
        for s in sources {
            match s {
                Source::Ingested => match ingested.get(st) {
                    Some(&v) => return Ok(Cell::Value(v, Provenance::Ingested)),
                    None => why.push("not in the volume table"),
                },
                Source::ClosedForm => match closed_form_volume(st) {
                    Some(v) => return Ok(Cell::Value(v.to_f64(), Provenance::ClosedForm)),
                    None => why.push("no closed form"),
                },
                Source::Census => {
                    let Some(n) = n_max else {
                        why.push("census estimate needs --nmax");
                        continue;
                    };
                    let recs = self.total_series(st, n)?;
                    match volume_from_records(st, &recs) {
                        Ok(v) => return Ok(Cell::Value(v.value, Provenance::Census)),
                        Err(Error::InsufficientData { .. }) => {
                            why.push("too few nonzero counts for a fit (raise --nmax)")
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
        Ok(Cell::Missing(if why.is_empty() {
            "no source selected".into()
        } else {
            why.join(", ")
        }))
    }
}

/// Exact volumes known in closed form: the genus-two strata, which are
/// hyperelliptic components in their entirety. Zeros named.
pub fn closed_form_volume(st: &Stratum) -> Option<ExactReal> {
    if st.genus() != 2 {
        return None;
    }
    if st.is_minimal() {
        Some(hyperelliptic_volume_minimal(2))
    } else {
        let f = ExactReal::from_ratio(st.labeling_factor() as i64, 1, 0);
        Some(&hyperelliptic_volume_pair(2) * &f)
    }
}
