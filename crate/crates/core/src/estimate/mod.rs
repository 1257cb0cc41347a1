//! Volume estimates from cumulative counts, and deviations from the
//! conjectural values.
//!
//! The number of lattice points of area at most `N` in a stratum of complex
//! dimension `d` grows like `a_0 N^d`, and the volume of the unit-area
//! hypersurface is `2d a_0`. The leading coefficient is taken from a
//! least-squares fit of `C(N)` by `sum_j a_j N^(d-j)` with up to three
//! correction terms; the error bar is the disagreement between the fits on
//! the two halves of the window, a heuristic rather than a confidence
//! interval.

mod fit;
pub mod table;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::census::CountRecord;
use crate::error::{Error, Result};
use crate::strata::{conjectural_volume, EpsilonKind, EpsilonRecord, Provenance, Stratum};

pub use fit::least_squares;
pub use table::{read_volume_table, write_figure_tsv, VolumeEntry};

/// Fixed-point rendering with `digits` decimals, ties rounded to even (on the
/// exact binary value), negative zero printed as zero.
pub fn fmt_float(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub stratum: Stratum,
    pub value: f64,
    pub error_bar: f64,
    pub n_window: (usize, usize),
    pub method: String,
}

/// Leading coefficient of a fit of `points` by `N^d, ..., N^(d-r)`.
fn leading(d: i32, points: &[(usize, f64)]) -> Option<f64> {
    let w = points.len();
    if w < d as usize + 1 {
        return None;
    }
    let r = 3.min(w - d as usize - 1) as i32;
    let top = points.iter().map(|p| p.0).max()? as f64;
    // columns scaled by top^(d-j) for conditioning
    let cols: Vec<Vec<f64>> = (0..=r)
        .map(|j| {
            points
                .iter()
                .map(|&(n, _)| (n as f64 / top).powi(d - j))
                .collect()
        })
        .collect();
    let y: Vec<f64> = points.iter().map(|p| p.1 / top.powi(d)).collect();
    least_squares(&cols, &y).map(|c| c[0])
}

fn residuals(d: i32, points: &[(usize, f64)]) -> Vec<f64> {
    let w = points.len();
    let r = 3.min(w - d as usize - 1) as i32;
    let top = points.iter().map(|p| p.0).max().unwrap_or(1) as f64;
    let cols: Vec<Vec<f64>> = (0..=r)
        .map(|j| {
            points
                .iter()
                .map(|&(n, _)| (n as f64 / top).powi(d - j))
                .collect()
        })
        .collect();
    let y: Vec<f64> = points.iter().map(|p| p.1 / top.powi(d)).collect();
    let Some(c) = least_squares(&cols, &y) else {
        return Vec::new();
    };
    (0..w)
        .map(|i| y[i] - cols.iter().zip(&c).map(|(col, a)| col[i] * a).sum::<f64>())
        .collect()
}

/// Lag-one autocorrelation of residuals; strongly negative values mean the
/// counts oscillate with the parity of `N`.
fn lag_one(res: &[f64]) -> f64 {
    let ss: f64 = res.iter().map(|r| r * r).sum();
    if ss == 0.0 || res.len() < 3 {
        return 0.0;
    }
    res.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / ss
}

fn parity_split(points: &[(usize, f64)]) -> [Vec<(usize, f64)>; 2] {
    let pick = |p: usize| points.iter().copied().filter(|q| q.0 % 2 == p).collect();
    [pick(0), pick(1)]
}

/// Estimate of `Vol H_1(st)` from cumulative counts `(N, C(N))`, zeros
/// named. Points before the first nonzero count are ignored.
pub fn volume_from_counts(st: &Stratum, cumulative: &[(usize, f64)]) -> Result<VolumeEstimate> {
    let d = st.dimension() as i32;
    let mut pts: Vec<(usize, f64)> = cumulative.to_vec();
    pts.sort_by_key(|p| p.0);
    let first = pts.iter().position(|p| p.1 > 0.0).unwrap_or(pts.len());
    let pts = &pts[first..];
    let need = d as usize + 2;
    if pts.len() < need {
        return Err(Error::InsufficientData {
            need,
            have: pts.len(),
        });
    }
    let scale = 2.0 * d as f64;
    let window = (pts[0].0, pts[pts.len() - 1].0);
    let fit_all = |p: &[(usize, f64)]| leading(d, p).map(|a| scale * a);

    let oscillating = lag_one(&residuals(d, pts)) < -0.5;
    let halves = parity_split(pts);
    let split = oscillating && halves.iter().all(|h| h.len() >= need);
    let (value, method, spread) = if split {
        let a = fit_all(&halves[0]);
        let b = fit_all(&halves[1]);
        match (a, b) {
            (Some(a), Some(b)) => (0.5 * (a + b), "parity-split", (a - b).abs()),
            _ => {
                return Err(Error::InsufficientData {
                    need,
                    have: pts.len(),
                })
            }
        }
    } else {
        let v = fit_all(pts).ok_or(Error::InsufficientData {
            need,
            have: pts.len(),
        })?;
        (v, "all-n", 0.0)
    };
    // half-window spread
    let mid = pts.len() / 2;
    let (lo, hi) = pts.split_at(mid);
    let bar = match (fit_all(lo), fit_all(hi)) {
        (Some(a), Some(b)) => (a - b).abs(),
        _ => f64::INFINITY,
    };
    let r = 3.min(pts.len() - d as usize - 1);
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::Invalid(format!(
            "volume fit for H({st}) gave {value}; counts do not grow like N^{d}"
        )));
    }
    Ok(VolumeEstimate {
        stratum: st.clone(),
        value,
        error_bar: bar.max(spread),
        n_window: window,
        method: format!("lsq N^{d}..N^{}, {method}", d - r as i32),
    })
}

/// Cumulative named-zero counts from per-`N` records (sorted by `N`).
pub fn cumulative_points(records: &[CountRecord]) -> Vec<(usize, f64)> {
    let mut recs: Vec<&CountRecord> = records.iter().filter(|r| r.component.is_none()).collect();
    recs.sort_by_key(|r| r.n);
    let mut acc = num_rational::BigRational::from_integer(0.into());
    recs.iter()
        .map(|r| {
            acc += r.labeled_weighted();
            (r.n, acc.to_f64().unwrap_or(f64::NAN))
        })
        .collect()
}

pub fn volume_from_records(st: &Stratum, records: &[CountRecord]) -> Result<VolumeEstimate> {
    volume_from_counts(st, &cumulative_points(records))
}

/// Relative deviation from the conjectural volume `4 / prod(m_i + 1)`.
pub fn epsilon1(st: &Stratum, vol: f64, provenance: Provenance) -> EpsilonRecord {
    let conj = conjectural_volume(st).to_f64();
    EpsilonRecord {
        stratum: st.clone(),
        eps: vol / conj - 1.0,
        which: EpsilonKind::Eps1,
        provenance,
    }
}

/// Ratio of the even and odd spin components, minus one.
pub fn epsilon2(
    st: &Stratum,
    vol_even: f64,
    vol_odd: f64,
    provenance: Provenance,
) -> EpsilonRecord {
    EpsilonRecord {
        stratum: st.clone(),
        eps: vol_even / vol_odd - 1.0,
        which: EpsilonKind::Eps2,
        provenance,
    }
}

/// A stratum made of simple zeros added to a fixed set of higher zeros.
fn is_padded(st: &Stratum) -> bool {
    st.zeros().contains(&1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongBoundRow {
    pub genus: u32,
    /// `max |eps_1| sqrt(g)` over the genus.
    pub scaled_max: f64,
    pub argmax: Stratum,
    /// The same maximum restricted to strata with at least one simple zero.
    pub padded_max: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StrongBoundReport {
    pub rows: Vec<StrongBoundRow>,
    /// Smallest constant `C` with `|eps_1| <= C / sqrt(g)` on the data.
    pub implied_c: Option<f64>,
    /// Genera where `max |eps_1|` did not decrease.
    pub non_monotone_at: Vec<u32>,
}

/// `|eps_1| sqrt(g)` per genus: the data's view of `|eps_1| <= C/sqrt(g)`.
pub fn strong_bound_report(records: &[EpsilonRecord]) -> StrongBoundReport {
    let mut by_genus: BTreeMap<u32, Vec<&EpsilonRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.which == EpsilonKind::Eps1) {
        by_genus.entry(r.stratum.genus()).or_default().push(r);
    }
    let mut rows = Vec::new();
    for (g, recs) in by_genus {
        let sg = (g as f64).sqrt();
        let best = recs
            .iter()
            .max_by(|a, b| a.eps.abs().total_cmp(&b.eps.abs()))
            .expect("nonempty");
        let padded = recs
            .iter()
            .filter(|r| is_padded(&r.stratum))
            .map(|r| r.eps.abs() * sg)
            .max_by(f64::total_cmp);
        rows.push(StrongBoundRow {
            genus: g,
            scaled_max: best.eps.abs() * sg,
            argmax: best.stratum.clone(),
            padded_max: padded,
        });
    }
    let implied_c = rows.iter().map(|r| r.scaled_max).max_by(f64::total_cmp);
    let non_monotone_at = rows
        .windows(2)
        .filter(|w| {
            w[1].scaled_max / (w[1].genus as f64).sqrt()
                >= w[0].scaled_max / (w[0].genus as f64).sqrt()
        })
        .map(|w| w[1].genus)
        .collect();
    StrongBoundReport {
        rows,
        implied_c,
        non_monotone_at,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureRow {
    pub genus: u32,
    pub min: f64,
    pub max: f64,
    pub argmin: Stratum,
    pub argmax: Stratum,
}

/// Per-genus extremes of arbitrary per-stratum values, genus ascending.
/// Ties go to the first stratum in the input order.
pub fn genus_extremes(values: &[(Stratum, f64)]) -> Vec<FigureRow> {
    let mut by_genus: BTreeMap<u32, Vec<&(Stratum, f64)>> = BTreeMap::new();
    for v in values {
        by_genus.entry(v.0.genus()).or_default().push(v);
    }
    by_genus
        .into_iter()
        .map(|(g, vs)| {
            let mut lo = vs[0];
            let mut hi = vs[0];
            for v in &vs[1..] {
                if v.1 < lo.1 {
                    lo = v;
                }
                if v.1 > hi.1 {
                    hi = v;
                }
            }
            FigureRow {
                genus: g,
                min: lo.1,
                max: hi.1,
                argmin: lo.0.clone(),
                argmax: hi.0.clone(),
            }
        })
        .collect()
}

/// Per-genus minimum and maximum of `1 + eps_1` over every stratum of each
/// genus in `genera`. Fails listing the strata that have no volume.
pub fn figure_epsilon_table(
    volumes: &BTreeMap<Stratum, f64>,
    genera: std::ops::RangeInclusive<u32>,
) -> Result<Vec<FigureRow>> {
    let mut values = Vec::new();
    let mut missing = Vec::new();
    for g in genera {
        for st in Stratum::of_genus(g) {
            match volumes.get(&st) {
                Some(&v) => {
                    let e = epsilon1(&st, v, Provenance::Ingested).eps;
                    values.push((st, 1.0 + e));
                }
                None => missing.push(format!("H({st})")),
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Missing(format!(
            "no volume for {}",
            missing.join(" ")
        )));
    }
    for (st, v) in &values {
        if !(*v > 0.0 && *v < 2.0) {
            return Err(Error::Invalid(format!(
                "1+eps_1 = {v} for H({st}) is outside (0, 2); check the volume table"
            )));
        }
    }
    Ok(genus_extremes(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::hyperelliptic_volume_minimal;

    fn st(s: &str) -> Stratum {
        s.parse().unwrap()
    }

    #[test]
    fn pure_monomial_is_recovered() {
        let h2 = st("2");
        let pts: Vec<(usize, f64)> = (3..=20).map(|n| (n, (n as f64).powi(4))).collect();
        let e = volume_from_counts(&h2, &pts).unwrap();
        assert!((e.value - 8.0).abs() < 1e-9, "{e:?}");
        assert!(e.error_bar < 1e-6);
        let doubled: Vec<(usize, f64)> = pts.iter().map(|&(n, c)| (n, 2.0 * c)).collect();
        let e2 = volume_from_counts(&h2, &doubled).unwrap();
        assert!((e2.value - 16.0).abs() < 1e-8);
    }

    #[test]
    fn lower_order_terms_are_absorbed() {
        let h11 = st("1,1");
        // d = 5
        let pts: Vec<(usize, f64)> = (4..=30)
            .map(|n| {
                let x = n as f64;
                (n, 0.07 * x.powi(5) - 0.4 * x.powi(4) + 2.0 * x.powi(3))
            })
            .collect();
        let e = volume_from_counts(&h11, &pts).unwrap();
        assert!((e.value - 0.7).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn too_few_points() {
        let pts: Vec<(usize, f64)> = (3..=7).map(|n| (n, n as f64)).collect();
        assert!(matches!(
            volume_from_counts(&st("2"), &pts),
            Err(Error::InsufficientData { need: 6, have: 5 })
        ));
    }

    #[test]
    fn epsilons() {
        let h2 = st("2");
        let e = epsilon1(
            &h2,
            hyperelliptic_volume_minimal(2).to_f64(),
            Provenance::ClosedForm,
        );
        assert!((e.eps + 0.391_2).abs() < 1e-3, "{}", e.eps);
        assert!((1.0 + e.eps - std::f64::consts::PI.powi(4) / 160.0).abs() < 1e-12);
        assert_eq!(epsilon1(&h2, 4.0 / 3.0, Provenance::ClosedForm).eps, 0.0);
        assert_eq!(epsilon2(&h2, 1.0, 1.0, Provenance::Census).eps, 0.0);
        assert!((epsilon2(&h2, 0.9, 1.0, Provenance::Census).eps + 0.1).abs() < 1e-12);
    }

    #[test]
    fn strong_bound() {
        let rec = EpsilonRecord {
            stratum: st("2"),
            eps: std::f64::consts::PI.powi(4) / 160.0 - 1.0,
            which: EpsilonKind::Eps1,
            provenance: Provenance::ClosedForm,
        };
        let rep = strong_bound_report(std::slice::from_ref(&rec));
        assert!((rep.implied_c.unwrap() - rec.eps.abs() * 2f64.sqrt()).abs() < 1e-12);
        assert!(rep.implied_c.unwrap() > 0.553);
        assert_eq!(rep.rows[0].padded_max, None);
        assert_eq!(strong_bound_report(&[]), StrongBoundReport::default());
    }

    #[test]
    fn figure_rows() {
        let mut vols = BTreeMap::new();
        vols.insert(st("2"), hyperelliptic_volume_minimal(2).to_f64());
        assert!(matches!(
            figure_epsilon_table(&vols, 2..=2),
            Err(Error::Missing(m)) if m.contains("H(1,1)")
        ));
        vols.insert(st("1,1"), std::f64::consts::PI.powi(4) / 135.0);
        let rows = figure_epsilon_table(&vols, 2..=2).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].argmin, st("2"));
        assert_eq!(rows[0].argmax, st("1,1"));
        let single = genus_extremes(&[(st("2"), 0.6)]);
        assert_eq!(single[0].min, single[0].max);
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.125, 2), "0.12");
        assert_eq!(fmt_float(0.375, 2), "0.38");
        assert_eq!(fmt_float(-0.0001, 2), "0.00");
        assert_eq!(fmt_float(1.0 / 3.0, 12), "0.333333333333");
    }
}
