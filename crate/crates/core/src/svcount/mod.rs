//! Area-weighted counting of cylinders on square-tiled surfaces and
//! Siegel-Veech constant estimates.
//!
//! Every closed geodesic on a square-tiled surface runs in a rational
//! direction `(p, q)`, and the cylinders in that direction are the
//! horizontal cylinders of the surface after a matrix of `SL(2,Z)` takes
//! `(p, q)` to `(1, 0)`. A cylinder of width `w` in units of the primitive
//! vector has circumference `w |(p,q)|`, which becomes `w |(p,q)| / sqrt(N)`
//! once the `N`-square surface is scaled to area one.
//!
//! Directions are unoriented (a cylinder and its reverse are counted once)
//! and are generated along Stern-Brocot trees: the subtree under a node only
//! holds longer vectors, so it is cut once the node's vector is longer than
//! the cutoff. Each tree step changes the carried surface by one shear, so
//! no matrix words are ever applied.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::census::enumerate::enumerate_classes;
use crate::error::{Error, Result};
use crate::estimate::{fmt_float, least_squares};
use crate::exec::Exec;
use crate::origami::{CylScratch, Mat2, Origami};
use crate::strata::{Component, Stratum};

/// An unoriented primitive direction, normalised to `q > 0`, or `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Direction {
    pub p: i64,
    pub q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Direction {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(if q < 0 || (q == 0 && p < 0) {
            Direction { p: -p, q: -q }
        } else {
            Direction { p, q }
        })
    }

    pub fn norm(&self) -> f64 {
        ((self.p * self.p + self.q * self.q) as f64).sqrt()
    }
}

/// A matrix of determinant one taking `(p, q)` to `(1, 0)`:
/// `[[a, b], [-q, p]]` with `a p + b q = 1`.
pub fn direction_reduce(p: i64, q: i64) -> Result<Mat2> {
    // extended Euclid on (p, q)
    let (mut r0, mut r1) = (p, q);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    match r0 {
        1 => Ok(Mat2::new(s0, t0, -q, p)),
        -1 => Ok(Mat2::new(-s0, -t0, -q, p)),
        _ => Err(Error::NotCoprime { p, q }),
    }
}

/// One cylinder seen from a direction: its circumference on the unit-area
/// surface and its area as a fraction of the whole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderHit {
    pub length: f64,
    pub weight: f64,
}

fn compose(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    // (a b)(x) = a(b(x))
    out.clear();
    out.extend(b.iter().map(|&y| a[y as usize]));
}

fn inverse(a: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    inv
}

struct Walker {
    n: usize,
    /// largest primitive vector length that can still carry a cylinder
    radius: f64,
    scale: f64,
    scratch: CylScratch,
    profile: Vec<(u32, u32)>,
    hits: Vec<CylinderHit>,
}

impl Walker {
    fn record(&mut self, h: &[u32], v: &[u32], norm: f64, cutoff: f64) {
        self.profile.clear();
        self.scratch.profile(h, v, &mut self.profile);
        for &(w, ht) in &self.profile {
            let length = w as f64 * norm * self.scale;
            if length <= cutoff {
                self.hits.push(CylinderHit {
                    length,
                    weight: (w * ht) as f64 / self.n as f64,
                });
            }
        }
    }

    /// Directions `G (1,1)` for all `G` below the node, where `(h, v)` is
    /// `G^-1` applied to the surface and `g = (a, b, c, d)`.
    fn tree(&mut self, h: Vec<u32>, v: Vec<u32>, g: [i64; 4], cutoff: f64) {
        let mut stack = vec![(h, v, g)];
        let mut vh = Vec::new();
        while let Some((h, v, [a, b, c, d])) = stack.pop() {
            let (p, q) = (a + b, c + d);
            let norm = ((p * p + q * q) as f64).sqrt();
            if norm > self.radius {
                continue;
            }
            // [[1,0],[-1,1]] takes (1,1) to (1,0) and acts by (h, v) -> (v h, v)
            compose(&v, &h, &mut vh);
            self.record(&vh, &v, norm, cutoff);
            // children G T and G L: T^-1 acts by (h, v) -> (h, v h),
            // L^-1 = [[1,0],[-1,1]] by (h, v) -> (v h, v)
            let right = (h, vh.clone(), [a, a + b, c, c + d]);
            let left = (vh.clone(), v, [a + b, b, c + d, d]);
            stack.push(left);
            stack.push(right);
        }
    }
}

/// All cylinders of `o` of unit-area circumference at most `cutoff`, over
/// unoriented directions, sorted by length.
pub fn cylinder_spectrum(o: &Origami, cutoff: f64) -> Vec<CylinderHit> {
    spectrum_with_radius(o, cutoff, 1.0)
}

fn spectrum_with_radius(o: &Origami, cutoff: f64, radius_factor: f64) -> Vec<CylinderHit> {
    let n = o.n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut w = Walker {
        n,
        radius: radius_factor * cutoff / scale,
        scale,
        scratch: CylScratch::default(),
        profile: Vec::new(),
        hits: Vec::new(),
    };
    let h = o.h().images().to_vec();
    let v = o.v().images().to_vec();
    // (1, 0)
    w.record(&h, &v, 1.0, cutoff);
    // (0, 1): S^-1 acts by (h, v) -> (v, h^-1)
    let hi = inverse(&h);
    w.record(&v, &hi, 1.0, cutoff);
    // p, q >= 1
    w.tree(h.clone(), v.clone(), [1, 0, 0, 1], cutoff);
    // p <= -1, q >= 1: rotate by S^-1, which maps (-a, b) to (b, a)
    w.tree(v, hi, [1, 0, 0, 1], cutoff);
    let mut hits = w.hits;
    hits.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.weight.total_cmp(&b.weight))
    });
    hits
}

/// Area-weighted count of cylinders of circumference at most `l` on the
/// unit-area rescaling of `o`.
pub fn n_area(o: &Origami, l: f64) -> f64 {
    cylinder_spectrum(o, l).iter().map(|c| c.weight).sum()
}

/// `n_area` at every cutoff in `ls` from one sorted spectrum.
pub fn n_area_sweep(spectrum: &[CylinderHit], ls: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ls.len());
    for &l in ls {
        let k = spectrum.partition_point(|c| c.length <= l);
        out.push(spectrum[..k].iter().map(|c| c.weight).sum());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CareaSample {
    pub origami: String,
    pub n: usize,
    pub l: f64,
    pub n_area: f64,
    /// `n_area / (pi L^2)`
    pub carea_hat: f64,
    /// Slope of the affine fit of `n_area` against `pi L^2` over
    /// `L in [L/2, L]`: the preferred estimate.
    pub carea_fit: f64,
    /// Coefficient of determination of that fit.
    pub r2: f64,
}

/// Points of the cutoff sweep used by [`carea_surface`].
pub const SWEEP_POINTS: usize = 24;

/// Affine fit of `y` against `x`: `(slope, intercept, r2)`.
pub fn affine_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let ones = vec![1.0; x.len()];
    let c = least_squares(&[x.to_vec(), ones], y).unwrap_or(vec![f64::NAN, f64::NAN]);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - c[0] * xi - c[1]).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (c[0], c[1], r2)
}

/// Per-surface Siegel-Veech estimate at cutoff `l`.
pub fn carea_surface(o: &Origami, l: f64) -> CareaSample {
    let spec = cylinder_spectrum(o, l);
    let ls: Vec<f64> = (0..SWEEP_POINTS)
        .map(|i| l * (0.5 + 0.5 * i as f64 / (SWEEP_POINTS - 1) as f64))
        .collect();
    let ys = n_area_sweep(&spec, &ls);
    let xs: Vec<f64> = ls.iter().map(|t| PI * t * t).collect();
    let (slope, _, r2) = affine_fit(&xs, &ys);
    let total = *ys.last().unwrap();
    CareaSample {
        origami: o.to_string(),
        n: o.n(),
        l,
        n_area: total,
        carea_hat: total / (PI * l * l),
        carea_fit: slope,
        r2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumCarea {
    pub stratum: Stratum,
    pub component: Option<Component>,
    pub n: usize,
    pub l: f64,
    /// Surfaces used.
    pub samples: usize,
    /// `1/|Aut|`-weighted mean of `carea_hat`.
    pub carea_mean: f64,
    /// `1/|Aut|`-weighted mean of `carea_fit`.
    pub carea_fit: f64,
    pub per_surface: Vec<CareaSample>,
}

/// Ensemble Siegel-Veech estimate over the square-tiled surfaces of `st`
/// with `n` squares (optionally one component), each weighted by
/// `1/|Aut|`. With `max_samples` below the number of classes, an evenly
/// spaced subset of the class list is used.
pub fn carea_stratum(
    st: &Stratum,
    n: usize,
    l: f64,
    max_samples: Option<usize>,
    component: Option<Component>,
    exec: Exec,
) -> Result<StratumCarea> {
    let classes = enumerate_classes(st, n, exec);
    let tags = exec.map(&classes, |(o, _)| match component {
        None => Ok(true),
        Some(c) => o.component().map(|k| k == c),
    });
    let mut pool = Vec::new();
    for ((o, aut), keep) in classes.into_iter().zip(tags) {
        if keep? {
            pool.push((o, aut));
        }
    }
    if pool.is_empty() {
        return Err(Error::Missing(format!(
            "no square-tiled surface in H({st}){} with {n} squares",
            component.map(|c| format!(" {c}")).unwrap_or_default()
        )));
    }
    let chosen: Vec<(Origami, u64)> = match max_samples {
        Some(k) if k > 0 && k < pool.len() => {
            (0..k).map(|i| pool[i * pool.len() / k].clone()).collect()
        }
        _ => pool,
    };
    let samples = exec.map(&chosen, |(o, _)| carea_surface(o, l));
    let (mut wsum, mut hat, mut fit) = (0.0, 0.0, 0.0);
    for ((_, aut), s) in chosen.iter().zip(&samples) {
        let w = 1.0 / *aut as f64;
        wsum += w;
        hat += w * s.carea_hat;
        fit += w * s.carea_fit;
    }
    Ok(StratumCarea {
        stratum: st.clone(),
        component,
        n,
        l,
        samples: samples.len(),
        carea_mean: hat / wsum,
        carea_fit: fit / wsum,
        per_surface: samples,
    })
}

/// Sample log: `origami,N,L,n_area,carea_hat`.
pub fn write_samples_csv<W: Write>(w: W, samples: &[CareaSample], digits: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["origami", "N", "L", "n_area", "carea_hat"])
        .map_err(csv_err)?;
    for s in samples {
        out.write_record([
            s.origami.clone(),
            s.n.to_string(),
            fmt_float(s.l, digits),
            fmt_float(s.n_area, digits),
            fmt_float(s.carea_hat, digits),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Stratum report: `stratum,component,N,L,samples,carea_mean,carea_fit`.
pub fn write_report_csv<W: Write>(w: W, rows: &[StratumCarea], digits: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "stratum",
        "component",
        "N",
        "L",
        "samples",
        "carea_mean",
        "carea_fit",
    ])
    .map_err(csv_err)?;
    for r in rows {
        out.write_record([
            r.stratum.to_string(),
            r.component
                .map(|c| c.to_string())
                .unwrap_or_else(|| "all".into()),
            r.n.to_string(),
            fmt_float(r.l, digits),
            r.samples.to_string(),
            fmt_float(r.carea_mean, digits),
            fmt_float(r.carea_fit, digits),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}
