//! Spin parity as the Arf invariant of the winding-number quadratic form.
//!
//! Cycles are closed paths in the dual graph (square centres joined across
//! shared sides); they avoid the cone points, so their winding number with
//! respect to the flat framing is well defined. A spanning tree of the dual
//! graph gives `N + 1` fundamental cycles, each a simple closed curve, whose
//! classes span `H_1(S; Z/2)`. Intersections are computed after pushing
//! cycle `i` to the offset `t_i` along every side it crosses, which makes
//! all curves transverse. With `q(c) = ind(c) + 1 mod 2` on the fundamental
//! cycles, a symplectic Gram-Schmidt pass yields the Arf invariant.

use super::Origami;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinParity {
    Even,
    Odd,
}

impl SpinParity {
    pub fn bit(self) -> u8 {
        match self {
            SpinParity::Even => 0,
            SpinParity::Odd => 1,
        }
    }
}

// Move directions as quarter turns: right, up, left, down.
const RIGHT: u8 = 0;
const UP: u8 = 1;
const LEFT: u8 = 2;
const DOWN: u8 = 3;

#[derive(Clone, Copy)]
struct Step {
    /// square left by this step
    from: u32,
    dir: u8,
}

type Bits = Vec<u64>;

fn bit(v: &Bits, i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

impl Origami {
    /// Fundamental cycles of a breadth-first spanning tree of the dual graph.
    #[allow(clippy::needless_range_loop)]
    fn fundamental_cycles(&self) -> Vec<Vec<Step>> {
        let n = self.n();
        let (hi, vi) = (self.h().inverse(), self.v().inverse());
        let step_target = |s: Step| -> usize {
            let x = s.from as usize;
            match s.dir {
                RIGHT => self.h().apply(x),
                UP => self.v().apply(x),
                LEFT => hi.apply(x),
                _ => vi.apply(x),
            }
        };
        // parent step into each square, from the root 0
        let mut parent: Vec<Option<Step>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree_edge = vec![[false; 2]; n]; // [right side, top side] of x
        depth[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for dir in [RIGHT, UP, LEFT, DOWN] {
                let s = Step {
                    from: x as u32,
                    dir,
                };
                let y = step_target(s);
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some(s);
                    match dir {
                        RIGHT => tree_edge[x][0] = true,
                        UP => tree_edge[x][1] = true,
                        LEFT => tree_edge[y][0] = true,
                        _ => tree_edge[y][1] = true,
                    }
                    queue.push_back(y);
                }
            }
        }
        let reverse = |s: Step, to: usize| Step {
            from: to as u32,
            dir: (s.dir + 2) % 4,
        };
        let mut cycles = Vec::new();
        for x in 0..n {
            for (side, dir) in [(0usize, RIGHT), (1usize, UP)] {
                if tree_edge[x][side] {
                    continue;
                }
                let first = Step {
                    from: x as u32,
                    dir,
                };
                let y = step_target(first);
                // tree path y -> x: climb from both ends to the common ancestor
                let mut up_from_y = Vec::new();
                let mut down_to_x = Vec::new();
                let (mut a, mut b) = (y, x);
                while a != b {
                    if depth[a] >= depth[b] {
                        let p = parent[a].unwrap();
                        up_from_y.push(reverse(p, a));
                        a = p.from as usize;
                    } else {
                        let p = parent[b].unwrap();
                        down_to_x.push(p);
                        b = p.from as usize;
                    }
                }
                let mut cyc = vec![first];
                cyc.extend(up_from_y);
                cyc.extend(down_to_x.into_iter().rev());
                cycles.push(cyc);
            }
        }
        cycles
    }

    /// Parity of the spin structure. Requires every zero order to be even.
    #[allow(clippy::needless_range_loop)]
    pub fn spin_parity(&self) -> Result<SpinParity> {
        let st = self.stratum()?;
        if let Some(&odd) = st.zeros().iter().find(|&&m| m % 2 == 1) {
            return Err(Error::SpinNotApplicable(odd));
        }
        let cycles = self.fundamental_cycles();
        let k = cycles.len();
        let n = self.n();

        let q: Vec<bool> = cycles
            .iter()
            .map(|c| {
                let mut turn = 0i32;
                for i in 0..c.len() {
                    let d = (c[(i + 1) % c.len()].dir + 4 - c[i].dir) % 4;
                    turn += match d {
                        0 => 0,
                        1 => 1,
                        3 => -1,
                        _ => unreachable!("U-turn in a simple dual cycle"),
                    };
                }
                debug_assert_eq!(turn % 4, 0);
                let ind = turn / 4;
                (ind + 1).rem_euclid(2) == 1
            })
            .collect();

        // Chords per square: boundary positions (counterclockwise from the
        // bottom-left corner) of entry and exit points of each cycle.
        let side_pos = |side: u8, t: f64| -> f64 {
            match side {
                RIGHT => 1.0 + t,
                UP => 2.0 + (1.0 - t),
                LEFT => 3.0 + (1.0 - t),
                _ => t,
            }
        };
        let mut chords: Vec<Vec<(usize, f64, f64)>> = vec![Vec::new(); n];
        for (i, c) in cycles.iter().enumerate() {
            let t = (i + 1) as f64 / (k + 1) as f64;
            for j in 0..c.len() {
                let prev = c[(j + c.len() - 1) % c.len()];
                let cur = c[j];
                // entering cur.from moving in prev.dir: through the opposite side
                let entry = (prev.dir + 2) % 4;
                let exit = cur.dir;
                chords[cur.from as usize].push((i, side_pos(entry, t), side_pos(exit, t)));
            }
        }
        let words = k.div_ceil(64);
        let mut omega: Vec<Bits> = vec![vec![0u64; words]; k];
        for list in &chords {
            for a in 0..list.len() {
                for b in (a + 1)..list.len() {
                    let (i, s1, s2) = list[a];
                    let (j, s3, s4) = list[b];
                    if i == j {
                        continue;
                    }
                    let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
                    let in3 = lo < s3 && s3 < hi;
                    let in4 = lo < s4 && s4 < hi;
                    if in3 != in4 {
                        omega[i][j / 64] ^= 1 << (j % 64);
                        omega[j][i / 64] ^= 1 << (i % 64);
                    }
                }
            }
        }

        // Symplectic Gram-Schmidt over Z/2, vectors in the cycle basis.
        let pair = |x: &Bits, y: &Bits| -> bool {
            let mut acc = false;
            for i in 0..k {
                if bit(x, i) {
                    let row = &omega[i];
                    let mut s = 0u32;
                    for (r, yy) in row.iter().zip(y) {
                        s ^= (r & yy).count_ones() & 1;
                    }
                    acc ^= s == 1;
                }
            }
            acc
        };
        let mut vecs: Vec<(Bits, bool)> = (0..k)
            .map(|i| {
                let mut b = vec![0u64; words];
                b[i / 64] |= 1 << (i % 64);
                (b, q[i])
            })
            .collect();
        let mut arf = false;
        let mut pairs = 0;
        loop {
            let mut found = None;
            'outer: for a in 0..vecs.len() {
                for b in (a + 1)..vecs.len() {
                    if pair(&vecs[a].0, &vecs[b].0) {
                        found = Some((a, b));
                        break 'outer;
                    }
                }
            }
            let Some((ia, ib)) = found else { break };
            let (b, qb) = vecs.swap_remove(ib);
            let (a, qa) = vecs.swap_remove(ia);
            arf ^= qa && qb;
            pairs += 1;
            for (v, qv) in vecs.iter_mut() {
                let alpha = pair(v, &b);
                let beta = pair(v, &a);
                if alpha {
                    xor_into(v, &a);
                    *qv ^= qa;
                }
                if beta {
                    xor_into(v, &b);
                    *qv ^= qb;
                }
                *qv ^= alpha && beta;
            }
        }
        debug_assert_eq!(pairs as u32, st.genus());
        Ok(if arf {
            SpinParity::Odd
        } else {
            SpinParity::Even
        })
    }
}
