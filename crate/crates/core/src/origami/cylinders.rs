use super::Origami;

/// A maximal horizontal cylinder: `height` rows of `width` squares each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
    /// Squares, bottom row first, each row in `h` order.
    pub squares: Vec<u32>,
}

impl Cylinder {
    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

/// Reusable buffers for computing cylinder profiles in hot loops.
#[derive(Default)]
pub(crate) struct CylScratch {
    row_of: Vec<u32>,
    row_start: Vec<u32>,
    row_len: Vec<u32>,
    up: Vec<u32>,
    has_down: Vec<bool>,
    seen: Vec<bool>,
}

impl CylScratch {
    /// Pushes `(width, height)` of every maximal horizontal cylinder of `o`
    /// (given by its image arrays) into `out`.
    pub(crate) fn profile(&mut self, h: &[u32], v: &[u32], out: &mut Vec<(u32, u32)>) {
        let n = h.len();
        self.row_of.clear();
        self.row_of.resize(n, u32::MAX);
        self.row_start.clear();
        self.row_len.clear();
        for s in 0..n {
            if self.row_of[s] != u32::MAX {
                continue;
            }
            let r = self.row_start.len() as u32;
            let mut x = s;
            let mut len = 0;
            while self.row_of[x] == u32::MAX {
                self.row_of[x] = r;
                len += 1;
                x = h[x] as usize;
            }
            self.row_start.push(s as u32);
            self.row_len.push(len);
        }
        let rows = self.row_start.len();
        // up[r]: the row above r when the boundary between them carries no
        // singularity, i.e. v h = h v along the whole row.
        self.up.clear();
        self.up.resize(rows, u32::MAX);
        self.has_down.clear();
        self.has_down.resize(rows, false);
        for r in 0..rows {
            let s = self.row_start[r] as usize;
            let mut x = s;
            let mut regular = true;
            loop {
                let hx = h[x] as usize;
                if v[hx] != h[v[x] as usize] {
                    regular = false;
                    break;
                }
                x = hx;
                if x == s {
                    break;
                }
            }
            if regular {
                let above = self.row_of[v[s] as usize];
                self.up[r] = above;
                self.has_down[above as usize] = true;
            }
        }
        self.seen.clear();
        self.seen.resize(rows, false);
        // chains start at rows with a singular bottom boundary
        for r in 0..rows {
            if self.has_down[r] || self.seen[r] {
                continue;
            }
            let mut height = 0;
            let mut x = r;
            loop {
                self.seen[x] = true;
                height += 1;
                let u = self.up[x];
                if u == u32::MAX {
                    break;
                }
                x = u as usize;
            }
            out.push((self.row_len[r], height));
        }
        // remaining rows sit on closed chains: the surface is a torus
        for r in 0..rows {
            if self.seen[r] {
                continue;
            }
            let mut height = 0;
            let mut x = r;
            while !self.seen[x] {
                self.seen[x] = true;
                height += 1;
                x = self.up[x] as usize;
            }
            out.push((self.row_len[r], height));
        }
    }
}

impl Origami {
    /// Maximal horizontal cylinders, ordered by their bottom row's smallest
    /// starting square.
    pub fn horizontal_cylinders(&self) -> Vec<Cylinder> {
        let h = self.h();
        let v = self.v();
        let n = self.n();
        let rows = h.cycles();
        let mut row_of = vec![0usize; n];
        for (r, c) in rows.iter().enumerate() {
            for &x in c {
                row_of[x as usize] = r;
            }
        }
        let regular = |r: usize| {
            rows[r]
                .iter()
                .all(|&x| v.apply(h.apply(x as usize)) == h.apply(v.apply(x as usize)))
        };
        let up: Vec<Option<usize>> = (0..rows.len())
            .map(|r| regular(r).then(|| row_of[v.apply(rows[r][0] as usize)]))
            .collect();
        let mut has_down = vec![false; rows.len()];
        for u in up.iter().flatten() {
            has_down[*u] = true;
        }
        let mut seen = vec![false; rows.len()];
        let mut out = Vec::new();
        let build = |start: usize, seen: &mut Vec<bool>| {
            let mut squares = Vec::new();
            let mut height = 0;
            let mut r = start;
            // align each row under the previous one: start at v(previous start)
            let mut first = rows[start][0] as usize;
            loop {
                if seen[r] {
                    break;
                }
                seen[r] = true;
                height += 1;
                let mut x = first;
                for _ in 0..rows[r].len() {
                    squares.push(x as u32);
                    x = h.apply(x);
                }
                match up[r] {
                    Some(u) => {
                        first = v.apply(first);
                        r = u;
                    }
                    None => break,
                }
            }
            Cylinder {
                width: rows[start].len(),
                height,
                squares,
            }
        };
        for r in 0..rows.len() {
            if !has_down[r] && !seen[r] {
                out.push(build(r, &mut seen));
            }
        }
        for r in 0..rows.len() {
            if !seen[r] {
                out.push(build(r, &mut seen));
            }
        }
        out
    }
}
