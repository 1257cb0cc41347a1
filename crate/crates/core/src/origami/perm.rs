use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, ..., n-1}`. Composition is right-to-left:
/// `(p * q)(x) = p(q(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Invalid(format!(
                    "not a permutation: image {x} at position {i}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation on `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let xu = x as usize;
                if xu >= n {
                    return Err(Error::Invalid(format!("point {x} out of range 0..{n}")));
                }
                if used[xu] {
                    return Err(Error::Invalid(format!("point {x} repeated in cycles")));
                }
                used[xu] = true;
                images[xu] = c[(i + 1) % c.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    /// `self^k` for any integer `k`, in linear time.
    pub fn pow(&self, k: i64) -> Perm {
        let n = self.len();
        let mut out = vec![0u32; n];
        let mut seen = vec![false; n];
        let mut cyc = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            cyc.clear();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.apply(x);
            }
            let l = cyc.len() as i64;
            let shift = k.rem_euclid(l) as usize;
            for (i, &y) in cyc.iter().enumerate() {
                out[y as usize] = cyc[(i + shift) % cyc.len()];
            }
        }
        Perm { images: out }
    }

    /// Disjoint cycles, each starting at its smallest point, fixed points
    /// included, ordered by smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x as u32);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths sorted non-increasing (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `sigma * self * sigma^-1`: relabel each point `x` as `sigma(x)`.
    pub fn conjugate_by(&self, sigma: &Perm) -> Perm {
        let n = self.len();
        let mut out = vec![0u32; n];
        for x in 0..n {
            out[sigma.apply(x)] = sigma.images[self.apply(x)];
        }
        Perm { images: out }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Disjoint-cycle notation without fixed points, `()` for the identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let p = Perm::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 3]);
        assert_eq!(p.compose(&p.inverse()), Perm::identity(4));
        assert_eq!(p.pow(3), Perm::identity(4));
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(5), p.pow(2));
        assert_eq!(p.cycle_type(), vec![3, 1]);
        assert_eq!(p.to_string(), "(0,1,2)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // a(b(0)) = a(0) = 1
        assert_eq!(a.compose(&b).apply(0), 1);
        // a(b(1)) = a(2) = 2
        assert_eq!(a.compose(&b).apply(1), 2);
    }

    #[test]
    fn conjugation_matches_product() {
        let p = Perm::from_cycles(5, &[vec![0, 3, 1], vec![2, 4]]).unwrap();
        let s = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(p.conjugate_by(&s), s.compose(&p).compose(&s.inverse()));
    }
}
