use super::{Origami, Perm};
use crate::strata::Stratum;

/// An involutive automorphism with derivative `-Id` (rotation by `pi`),
/// acting on squares by `iota h iota = h^-1`, `iota v iota = v^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub map: Perm,
    /// Fixed points on the surface: square centres, side midpoints and
    /// vertices.
    pub fixed_points: usize,
    /// Number of cone points (zeros) fixed.
    pub fixed_zeros: usize,
}

impl Origami {
    /// All rotations by `pi` that are involutions. On a connected surface
    /// such a map is fixed by the image of square 0, so at most `N` candidates
    /// are checked.
    pub fn rotation_involutions(&self) -> Vec<Involution> {
        let n = self.n();
        if !self.is_connected() {
            return Vec::new();
        }
        let (h, v) = (self.h(), self.v());
        let (hi, vi) = (h.inverse(), v.inverse());
        // corners: bottom-left corner of x, shared along cycles of v h v^-1 h^-1
        let c = v.compose(h).compose(&vi).compose(&hi);
        let mut vid = vec![0usize; n];
        let mut vlen = Vec::new();
        for (i, cyc) in c.cycles().iter().enumerate() {
            for &x in cyc {
                vid[x as usize] = i;
            }
            vlen.push(cyc.len());
        }
        let mut out = Vec::new();
        let mut map = vec![u32::MAX; n];
        let mut stack = Vec::new();
        'cand: for r in 0..n {
            map.iter_mut().for_each(|m| *m = u32::MAX);
            map[0] = r as u32;
            stack.clear();
            stack.push(0usize);
            while let Some(x) = stack.pop() {
                let ix = map[x] as usize;
                for (y, iy) in [(h.apply(x), hi.apply(ix)), (v.apply(x), vi.apply(ix))] {
                    if map[y] == u32::MAX {
                        map[y] = iy as u32;
                        stack.push(y);
                    } else if map[y] as usize != iy {
                        continue 'cand;
                    }
                }
            }
            let Ok(iota) = Perm::from_images(map.clone()) else {
                continue;
            };
            if !iota.compose(&iota).is_identity() {
                continue;
            }
            let centres = (0..n).filter(|&x| iota.apply(x) == x).count();
            let vert_sides = (0..n).filter(|&x| iota.apply(x) == h.apply(x)).count();
            let horiz_sides = (0..n).filter(|&x| iota.apply(x) == v.apply(x)).count();
            let mut fixed_vertices = 0;
            let mut fixed_zeros = 0;
            let mut done = vec![false; vlen.len()];
            for x in 0..n {
                let id = vid[x];
                if done[id] {
                    continue;
                }
                done[id] = true;
                if vid[v.apply(h.apply(iota.apply(x)))] == id {
                    fixed_vertices += 1;
                    if vlen[id] > 1 {
                        fixed_zeros += 1;
                    }
                }
            }
            out.push(Involution {
                map: iota,
                fixed_points: centres + vert_sides + horiz_sides + fixed_vertices,
                fixed_zeros,
            });
        }
        out
    }

    fn genus_from_cells(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Whether some rotation by `pi` is a hyperelliptic involution, i.e. has
    /// the `2g + 2` fixed points of a genus-0 quotient.
    pub fn is_hyperelliptic(&self) -> bool {
        let want = 2 * self.genus_from_cells() + 2;
        self.rotation_involutions()
            .iter()
            .any(|i| i.fixed_points == want)
    }

    /// Membership in the hyperelliptic component of `H(2g-2)` or
    /// `H(g-1,g-1)`. For the pair stratum the involution must exchange the
    /// two zeros.
    pub(crate) fn in_hyperelliptic_component(&self, st: &Stratum) -> bool {
        let want = 2 * st.genus() as usize + 2;
        self.rotation_involutions()
            .iter()
            .any(|i| i.fixed_points == want && (!st.is_pair() || i.fixed_zeros == 0))
    }
}
