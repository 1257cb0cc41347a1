//! Square-tiled surfaces encoded as pairs of permutations.
//!
//! Squares are numbered `0..N`. `h(x)` is the square to the right of `x` and
//! `v(x)` the square above it. Corners of the tiling are the cycles of the
//! commutator; a cycle of length `k` is a cone point of angle `2 pi k`, i.e. a
//! zero of order `k - 1`.

mod cylinders;
mod hyperelliptic;
mod parse;
mod perm;
mod sl2;
mod spin;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::strata::{Component, Partition, Stratum};

pub(crate) use cylinders::CylScratch;
pub use cylinders::Cylinder;
pub use hyperelliptic::Involution;
pub use perm::Perm;
pub use sl2::{Generator, Mat2};
pub use spin::SpinParity;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origami {
    h: Perm,
    v: Perm,
}

impl Origami {
    pub fn new(h: Perm, v: Perm) -> Result<Self> {
        if h.len() != v.len() {
            return Err(Error::Invalid(format!(
                "h acts on {} squares, v on {}",
                h.len(),
                v.len()
            )));
        }
        if h.is_empty() {
            return Err(Error::Invalid(
                "an origami needs at least one square".into(),
            ));
        }
        Ok(Origami { h, v })
    }

    pub(crate) fn from_parts_unchecked(h: Perm, v: Perm) -> Self {
        debug_assert_eq!(h.len(), v.len());
        Origami { h, v }
    }

    /// The single-square torus.
    pub fn torus() -> Self {
        Origami {
            h: Perm::identity(1),
            v: Perm::identity(1),
        }
    }

    pub fn h(&self) -> &Perm {
        &self.h
    }

    pub fn v(&self) -> &Perm {
        &self.v
    }

    /// Number of squares (the area).
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// `h v h^-1 v^-1`.
    pub fn commutator(&self) -> Perm {
        self.h
            .compose(&self.v)
            .compose(&self.h.inverse())
            .compose(&self.v.inverse())
    }

    /// Orbits of the group generated by `h` and `v`, each sorted.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(x) = stack.pop() {
                members.push(x as u32);
                for y in [self.h.apply(x), self.v.apply(x)] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Zero orders read off the commutator. The torus (trivial commutator)
    /// comes back as [`Stratum::torus`].
    pub fn stratum(&self) -> Result<Stratum> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let parts: Vec<u32> = self
            .commutator()
            .cycle_type()
            .into_iter()
            .filter(|&c| c > 1)
            .map(|c| c as u32 - 1)
            .collect();
        Stratum::new(Partition::new(parts)?)
    }

    /// Genus computed from the cell complex: `V - E + F = 2 - 2g` with one
    /// face per square, two edges per square and one vertex per commutator
    /// cycle.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.commutator().cycles().len() as i64;
        let n = self.n() as i64;
        v - 2 * n + n
    }

    /// Relabels square `x` as `sigma(x)`.
    pub fn relabel(&self, sigma: &Perm) -> Origami {
        Origami {
            h: self.h.conjugate_by(sigma),
            v: self.v.conjugate_by(sigma),
        }
    }

    /// Breadth-first relabeling from `root` within its orbit: squares are
    /// numbered in the order first reached when scanning `h(x), v(x)` for
    /// `x = 0, 1, 2, ...` in new labels. Returns `(h, v)` images of the orbit
    /// in the new labels.
    pub(crate) fn rooted_images(&self, root: usize, buf: &mut RootScratch) -> (usize, bool) {
        let n = self.n();
        buf.reset(n);
        buf.label[root] = 0;
        buf.order.push(root as u32);
        let mut i = 0;
        while i < buf.order.len() {
            let x = buf.order[i] as usize;
            for y in [self.h.apply(x), self.v.apply(x)] {
                if buf.label[y] == u32::MAX {
                    buf.label[y] = buf.order.len() as u32;
                    buf.order.push(y as u32);
                }
            }
            i += 1;
        }
        let k = buf.order.len();
        for (j, &x) in buf.order.iter().enumerate() {
            let x = x as usize;
            buf.hv[j] = buf.label[self.h.apply(x)];
            buf.hv[k + j] = buf.label[self.v.apply(x)];
        }
        (k, k == n)
    }

    fn canonical_connected(&self) -> (Vec<u32>, usize) {
        let n = self.n();
        let mut buf = RootScratch::default();
        let mut best: Option<Vec<u32>> = None;
        let mut count = 0;
        for r in 0..n {
            self.rooted_images(r, &mut buf);
            let cand = &buf.hv[..2 * n];
            match &best {
                Some(b) if b.as_slice() < cand => {}
                Some(b) if b.as_slice() == cand => count += 1,
                _ => {
                    best = Some(cand.to_vec());
                    count = 1;
                }
            }
        }
        (best.unwrap(), count)
    }

    /// Canonical representative of the simultaneous-conjugacy class.
    ///
    /// Connected origamis use the lexicographically smallest breadth-first
    /// relabeling over all roots (`O(N^2)`); disconnected ones canonicalize
    /// each orbit and sort the orbits.
    pub fn canonical_form(&self) -> Origami {
        let pieces = self.orbit_pieces();
        let mut canon: Vec<Vec<u32>> = pieces.iter().map(|o| o.canonical_connected().0).collect();
        canon.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut h = Vec::with_capacity(self.n());
        let mut v = Vec::with_capacity(self.n());
        let mut offset = 0u32;
        for c in &canon {
            let k = c.len() / 2;
            h.extend(c[..k].iter().map(|x| x + offset));
            v.extend(c[k..].iter().map(|x| x + offset));
            offset += k as u32;
        }
        Origami {
            h: Perm::from_images_unchecked(h),
            v: Perm::from_images_unchecked(v),
        }
    }

    /// Size of the simultaneous centralizer `{s : s h = h s, s v = v s}`.
    pub fn automorphism_count(&self) -> u128 {
        let pieces = self.orbit_pieces();
        let mut forms: Vec<(Vec<u32>, usize)> =
            pieces.iter().map(|o| o.canonical_connected()).collect();
        forms.sort();
        let mut total: u128 = 1;
        let mut i = 0;
        while i < forms.len() {
            let mut j = i;
            while j < forms.len() && forms[j].0 == forms[i].0 {
                j += 1;
            }
            let mult = (j - i) as u128;
            let aut = forms[i].1 as u128;
            total *= (1..=mult).product::<u128>() * aut.pow(mult as u32);
            i = j;
        }
        total
    }

    /// Each orbit as its own origami (labels compressed in order).
    pub fn orbit_pieces(&self) -> Vec<Origami> {
        let orbits = self.orbits();
        if orbits.len() == 1 {
            return vec![self.clone()];
        }
        let n = self.n();
        let mut local = vec![0u32; n];
        orbits
            .iter()
            .map(|orb| {
                for (i, &x) in orb.iter().enumerate() {
                    local[x as usize] = i as u32;
                }
                let h = orb
                    .iter()
                    .map(|&x| local[self.h.apply(x as usize)])
                    .collect();
                let v = orb
                    .iter()
                    .map(|&x| local[self.v.apply(x as usize)])
                    .collect();
                Origami {
                    h: Perm::from_images_unchecked(h),
                    v: Perm::from_images_unchecked(v),
                }
            })
            .collect()
    }

    /// The component of the stratum containing this surface.
    ///
    /// In genus 2 both strata are connected and the single component is
    /// reported as [`Component::Connected`], although every surface there is
    /// hyperelliptic.
    pub fn component(&self) -> Result<Component> {
        let st = self.stratum()?;
        let comps = st.components()?;
        if comps == [Component::Connected] {
            return Ok(Component::Connected);
        }
        if comps.contains(&Component::Hyperelliptic) && self.in_hyperelliptic_component(&st) {
            return Ok(Component::Hyperelliptic);
        }
        if comps.contains(&Component::EvenSpin) || comps.contains(&Component::OddSpin) {
            return Ok(match self.spin_parity()? {
                SpinParity::Even => Component::EvenSpin,
                SpinParity::Odd => Component::OddSpin,
            });
        }
        Ok(Component::NonHyperelliptic)
    }
}

#[derive(Default)]
pub(crate) struct RootScratch {
    label: Vec<u32>,
    order: Vec<u32>,
    pub(crate) hv: Vec<u32>,
}

impl RootScratch {
    fn reset(&mut self, n: usize) {
        self.label.clear();
        self.label.resize(n, u32::MAX);
        self.order.clear();
        self.hv.clear();
        self.hv.resize(2 * n, 0);
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `N;h=cycles;v=cycles`, e.g. `3;h=(0,1,2);v=(1,2)`.
impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};h={};v={}", self.n(), self.h, self.v)
    }
}

impl FromStr for Origami {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_origami(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn o(s: &str) -> Origami {
        s.parse().unwrap()
    }

    #[test]
    fn commutators() {
        assert!(o("1;h=();v=()").commutator().is_identity());
        assert!(o("4;h=(0,1,2,3);v=(0,2)(1,3)").commutator().is_identity());
        let c = o("3;h=(0,1,2);v=(1,2)").commutator();
        assert_eq!(c.cycle_type(), vec![3]);
    }

    #[test]
    fn strata_of_small_origamis() {
        assert!(Origami::torus().stratum().unwrap().is_degenerate());
        assert_eq!(
            o("3;h=(0,1,2);v=(1,2)").stratum().unwrap(),
            Stratum::from_parts(&[2]).unwrap()
        );
        assert!(matches!(
            o("2;h=();v=()").stratum(),
            Err(Error::Disconnected)
        ));
        // exhaustive search over S_4 pairs finds H(1,1) witnesses
        let h11 = Stratum::from_parts(&[1, 1]).unwrap();
        let perms = all_perms(4);
        let found = perms.iter().any(|h| {
            perms.iter().any(|v| {
                let x = Origami::new(h.clone(), v.clone()).unwrap();
                x.is_connected() && x.stratum().unwrap() == h11
            })
        });
        assert!(found);
    }

    #[test]
    fn connectivity() {
        assert!(!o("2;h=();v=()").is_connected());
        assert!(Origami::torus().is_connected());
        assert!(o("3;h=(0,1,2);v=()").is_connected());
        assert_eq!(o("4;h=(0,1);v=(2,3)").orbits().len(), 2);
        assert_eq!(o("4;h=(0,1);v=()").orbits().len(), 3);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(Origami::torus().automorphism_count(), 1);
        for n in 1..=7 {
            let cyc: Vec<u32> = (0..n).collect();
            let h = Perm::from_cycles(n as usize, &[cyc]).unwrap();
            let x = Origami::new(h, Perm::identity(n as usize)).unwrap();
            assert_eq!(x.automorphism_count(), n as u128);
        }
        assert_eq!(o("3;h=(0,1,2);v=(1,2)").automorphism_count(), 1);
        // two isomorphic unit tori: swap plus nothing else
        assert_eq!(o("2;h=();v=()").automorphism_count(), 2);
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        let x = o("5;h=(0,1,2)(3,4);v=(0,3)(1,4,2)");
        let s = Perm::from_cycles(5, &[vec![0, 4, 2], vec![1, 3]]).unwrap();
        assert_eq!(x.canonical_form(), x.relabel(&s).canonical_form());
        let d = o("4;h=(0,1);v=(2,3)");
        let t = Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(d.canonical_form(), d.relabel(&t).canonical_form());
    }

    #[test]
    fn euler_characteristic_matches_genus() {
        let x = o("3;h=(0,1,2);v=(1,2)");
        assert_eq!(x.euler_characteristic(), -2);
        assert_eq!(Origami::torus().euler_characteristic(), 0);
    }

    pub(crate) fn all_perms(n: usize) -> Vec<Perm> {
        fn rec(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            let n = used.len();
            if cur.len() == n {
                out.push(Perm::from_images(cur.clone()).unwrap());
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x as u32);
                    rec(cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}
