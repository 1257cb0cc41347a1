//! One representative per isomorphism class of connected origamis in a
//! stratum, with automorphism counts.
//!
//! Labellings are built row by row: the horizontal cycle through the root
//! gets labels `0..l`, then `v(0), v(1), ...` are chosen in turn, and whenever
//! `v(x)` reaches a new square its whole horizontal cycle is labelled next.
//! With rows known in full, the corner at `x` closes as soon as `v(x)` and
//! `v(h(x))` are set, so partial pairs with more non-commuting corners than
//! the stratum allows are cut almost immediately. Two further lower bounds
//! on the defects still to come keep the search polynomial in practice: a
//! row without a defect must map onto a whole unhit row of its own length,
//! and every run of unhit squares in a partly hit row needs its own incoming
//! segment, which (past the row being filled) costs a defect. A complete pair is kept
//! when its labelling is the smallest over all roots, leaving one labelling
//! per class; the number of roots attaining it is `|Aut|`.

use std::cmp::Ordering;

use crate::exec::Exec;
use crate::origami::{Origami, Perm};
use crate::strata::Stratum;

const NONE: u32 = u32::MAX;

#[derive(Clone)]
struct State {
    n: usize,
    h: Vec<u32>,
    hinv: Vec<u32>,
    v: Vec<u32>,
    vpre: Vec<u32>,
    /// labelled squares
    next: u32,
    /// filled `v` slots
    slot: u32,
    defects: usize,
    /// corners not yet closed whose defect is already forced: `v(y)` is set,
    /// `v(h(y))` is not, and `h(v(y))` already has a `v`-preimage
    pending: Vec<bool>,
    forced: usize,
    flips: Vec<u32>,
    /// start label of the row holding each square; row length by start
    row_of: Vec<u32>,
    row_len: Vec<u32>,
    /// `v`-preimages landing in each row (by start)
    row_hits: Vec<u32>,
    /// rows by length whose `v` is still entirely unset
    open_src: Vec<u32>,
    /// rows by length with no `v`-preimage yet
    free_dst: Vec<u32>,
    /// maximal runs of preimage-free squares inside rows that already have
    /// a preimage; each needs its own incoming segment
    runs: usize,
    run_deltas: Vec<isize>,
}

#[derive(Clone, Copy)]
enum Choice {
    Old(u32),
    NewRow(u32),
}

impl State {
    fn new(n: usize) -> Self {
        State {
            n,
            h: vec![NONE; n],
            hinv: vec![NONE; n],
            v: vec![NONE; n],
            vpre: vec![NONE; n],
            next: 0,
            slot: 0,
            defects: 0,
            pending: vec![false; n],
            forced: 0,
            flips: Vec::new(),
            row_of: vec![NONE; n],
            row_len: vec![0; n],
            row_hits: vec![0; n],
            open_src: vec![0; n + 1],
            free_dst: vec![0; n + 1],
            runs: 0,
            run_deltas: Vec::new(),
        }
    }

    fn add_row(&mut self, len: u32) {
        let s = self.next;
        for i in 0..len {
            let x = s + i;
            let y = s + (i + 1) % len;
            self.h[x as usize] = y;
            self.hinv[y as usize] = x;
            self.row_of[x as usize] = s;
        }
        self.row_len[s as usize] = len;
        self.row_hits[s as usize] = 0;
        self.open_src[len as usize] += 1;
        self.free_dst[len as usize] += 1;
        self.next += len;
    }

    fn remove_row(&mut self, len: u32) {
        self.next -= len;
        self.open_src[len as usize] -= 1;
        self.free_dst[len as usize] -= 1;
        for x in self.next..self.next + len {
            self.h[x as usize] = NONE;
            self.hinv[x as usize] = NONE;
            self.row_of[x as usize] = NONE;
        }
    }

    /// Whether the corner at `y` is closed and fails `vh = hv`.
    #[inline]
    fn defective(&self, y: u32) -> Option<bool> {
        let vy = self.v[y as usize];
        let vhy = self.v[self.h[y as usize] as usize];
        if vy == NONE || vhy == NONE {
            return None;
        }
        Some(vhy != self.h[vy as usize])
    }

    fn apply(&mut self, c: Choice) -> usize {
        let x = self.slot;
        let y = match c {
            Choice::Old(y) => y,
            Choice::NewRow(len) => {
                let y = self.next;
                self.add_row(len);
                y
            }
        };
        self.v[x as usize] = y;
        self.vpre[y as usize] = x;
        self.slot += 1;
        self.track_rows(x, y, true);
        let a = x;
        let b = self.hinv[x as usize];
        let mut d = usize::from(self.defective(a) == Some(true));
        if b != a && self.defective(b) == Some(true) {
            d += 1;
        }
        self.defects += d;
        let mark = self.flips.len();
        // the corner at b has just closed
        if b != NONE && self.pending[b as usize] {
            self.flip(b);
        }
        // corner at x: is its missing side already blocked?
        let hx = self.h[x as usize];
        if self.v[hx as usize] == NONE && self.vpre[self.h[y as usize] as usize] != NONE {
            self.flip(x);
        }
        // the corner whose preferred value was y
        let c = self.vpre[self.hinv[y as usize] as usize];
        if c != NONE && c != x {
            let hc = self.h[c as usize];
            if self.v[hc as usize] == NONE && !self.pending[c as usize] {
                self.flip(c);
            }
        }
        let flipped = (self.flips.len() - mark) as u32;
        self.flips.push(flipped);
        d
    }

    fn track_rows(&mut self, x: u32, y: u32, on: bool) {
        let rx = self.row_of[x as usize];
        let lx = self.row_len[rx as usize] as usize;
        let ry = self.row_of[y as usize] as usize;
        let ly = self.row_len[ry] as usize;
        if on {
            let delta: isize = if ly == 1 {
                0
            } else if self.row_hits[ry] == 0 {
                1
            } else {
                let l = self.vpre[self.hinv[y as usize] as usize] == NONE;
                let r = self.vpre[self.h[y as usize] as usize] == NONE;
                match (l, r) {
                    (true, true) => 1,
                    (false, false) => -1,
                    _ => 0,
                }
            };
            self.runs = (self.runs as isize + delta) as usize;
            self.run_deltas.push(delta);
            if rx == x {
                self.open_src[lx] -= 1;
            }
            if self.row_hits[ry] == 0 {
                self.free_dst[ly] -= 1;
            }
            self.row_hits[ry] += 1;
        } else {
            let delta = self.run_deltas.pop().unwrap();
            self.runs = (self.runs as isize - delta) as usize;
            if rx == x {
                self.open_src[lx] += 1;
            }
            self.row_hits[ry] -= 1;
            if self.row_hits[ry] == 0 {
                self.free_dst[ly] += 1;
            }
        }
    }

    /// Rows with `v` still unset that must contain a defect: a row with none
    /// maps onto a whole row of its own length that has no preimage yet (or
    /// onto a row yet to be created from unlabelled squares).
    /// Lower bound on the defects still to come.
    fn future(&self) -> usize {
        let cur = self.slot < self.next && self.row_of[self.slot as usize] != self.slot;
        let need = self.runs.saturating_sub(usize::from(cur));
        (self.forced + self.unmatched_rows()).max(need)
    }

    fn unmatched_rows(&self) -> usize {
        let mut spare = self.n - self.next as usize;
        let mut extra = 0;
        for len in 1..=self.n {
            let short = self.open_src[len].saturating_sub(self.free_dst[len]) as usize;
            if short == 0 {
                continue;
            }
            let covered = (spare / len).min(short);
            spare -= covered * len;
            extra += short - covered;
        }
        extra
    }

    fn flip(&mut self, y: u32) {
        let p = &mut self.pending[y as usize];
        *p = !*p;
        if *p {
            self.forced += 1;
        } else {
            self.forced -= 1;
        }
        self.flips.push(y);
    }

    fn unflip(&mut self) {
        let k = self.flips.pop().unwrap();
        for _ in 0..k {
            let y = self.flips.pop().unwrap();
            let p = &mut self.pending[y as usize];
            *p = !*p;
            if *p {
                self.forced += 1;
            } else {
                self.forced -= 1;
            }
        }
    }

    /// Lower bound on the defects of any completion.
    fn bound(&self) -> usize {
        self.defects + self.future()
    }

    fn undo(&mut self, c: Choice, d: usize) {
        self.unflip();
        self.defects -= d;
        self.slot -= 1;
        let x = self.slot;
        let y = self.v[x as usize];
        self.track_rows(x, y, false);
        self.v[x as usize] = NONE;
        self.vpre[y as usize] = NONE;
        if let Choice::NewRow(len) = c {
            self.remove_row(len);
        }
    }

    fn choices(&self, out: &mut Vec<Choice>) {
        out.clear();
        for y in 0..self.next {
            if self.vpre[y as usize] == NONE {
                out.push(Choice::Old(y));
            }
        }
        for len in 1..=(self.n as u32 - self.next) {
            out.push(Choice::NewRow(len));
        }
    }

    /// No slot left to fill, or the labelled part is closed off.
    fn stuck(&self) -> bool {
        self.slot == self.next && (self.next as usize) < self.n
    }
}

struct Search<'a> {
    lengths: &'a [usize],
    budget: usize,
    label: Vec<u32>,
    order: Vec<u32>,
    found: Vec<(Origami, u64)>,
}

impl Search<'_> {
    fn run(&mut self, st: &mut State) {
        if st.stuck() || st.bound() > self.budget {
            return;
        }
        if st.slot as usize == st.n {
            if st.defects == self.budget {
                self.leaf(st);
            }
            return;
        }
        let mut choices = Vec::with_capacity(st.n);
        st.choices(&mut choices);
        for c in choices {
            let d = st.apply(c);
            self.run(st);
            st.undo(c, d);
        }
    }

    fn leaf(&mut self, st: &State) {
        let n = st.n;
        let o = Origami::from_parts_unchecked(
            Perm::from_images_unchecked(st.h.clone()),
            Perm::from_images_unchecked(st.v.clone()),
        );
        let mut ct: Vec<usize> = o
            .commutator()
            .cycle_type()
            .into_iter()
            .filter(|&k| k > 1)
            .collect();
        ct.sort_unstable_by(|a, b| b.cmp(a));
        if ct != self.lengths {
            return;
        }
        let mut aut = 1u64;
        for r in 1..n as u32 {
            match self.compare_root(st, r) {
                Ordering::Less => return,
                Ordering::Equal => aut += 1,
                Ordering::Greater => {}
            }
        }
        self.found.push((o, aut));
    }

    fn label_row(&mut self, st: &State, start: u32) {
        let mut y = start;
        loop {
            self.label[y as usize] = self.order.len() as u32;
            self.order.push(y);
            y = st.h[y as usize];
            if y == start {
                break;
            }
        }
    }

    /// Compares the row-by-row labelling rooted at `r` with the current one
    /// (rooted at 0), position by position in `(h(x), v(x))` order.
    fn compare_root(&mut self, st: &State, r: u32) -> Ordering {
        let n = st.n;
        self.label.clear();
        self.label.resize(n, NONE);
        self.order.clear();
        self.label_row(st, r);
        for j in 0..n {
            let x = self.order[j];
            let hl = self.label[st.h[x as usize] as usize];
            match hl.cmp(&st.h[j]) {
                Ordering::Equal => {}
                other => return other,
            }
            let y = st.v[x as usize];
            if self.label[y as usize] == NONE {
                self.label_row(st, y);
            }
            match self.label[y as usize].cmp(&st.v[j]) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    }
}

/// Every connected origami of `st` with `n` squares, one per isomorphism
/// class, with its automorphism count. The weights `1/|Aut|` sum to the
/// transitive pair count divided by `n!`.
pub fn enumerate_classes(st: &Stratum, n: usize, exec: Exec) -> Vec<(Origami, u64)> {
    let lengths = st.cycle_lengths();
    let budget: usize = lengths.iter().sum();
    if n == 0 || n < st.min_squares() {
        return Vec::new();
    }
    // Split the search tree into prefixes for the worker pool: first by the
    // length of the root row, then by the first `v` choices.
    let mut prefixes: Vec<State> = (1..=n as u32)
        .map(|len| {
            let mut s = State::new(n);
            s.add_row(len);
            s
        })
        .collect();
    let mut choices = Vec::new();
    for _ in 0..2 {
        let mut next = Vec::new();
        for s in prefixes {
            if s.slot as usize == n || s.stuck() {
                next.push(s);
                continue;
            }
            s.choices(&mut choices);
            for &c in &choices {
                let mut t = s.clone();
                t.apply(c);
                if t.bound() <= budget {
                    next.push(t);
                }
            }
        }
        prefixes = next;
    }
    let parts = exec.map(&prefixes, |p| {
        let mut search = Search {
            lengths: &lengths,
            budget,
            label: Vec::new(),
            order: Vec::new(),
            found: Vec::new(),
        };
        let mut st = p.clone();
        search.run(&mut st);
        search.found
    });
    parts.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::characters::factorial;
    use crate::census::direct::direct_table;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use std::collections::HashSet;

    fn weight(classes: &[(Origami, u64)]) -> BigRational {
        classes
            .iter()
            .map(|(_, a)| BigRational::new(1.into(), BigInt::from(*a)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    #[test]
    fn h2_three_squares() {
        let st: Stratum = "2".parse().unwrap();
        let c = enumerate_classes(&st, 3, Exec::Sequential);
        assert_eq!(weight(&c), BigRational::from_integer(3.into()));
        // two classes: the L and the 3-cycle shape, neither symmetric ...
        // weighted 3 comes from classes whose 1/|Aut| sum to 3
        for (o, a) in &c {
            assert_eq!(o.automorphism_count(), *a as u128);
            assert_eq!(o.stratum().unwrap(), st);
        }
    }

    #[test]
    fn matches_direct_counts() {
        for n in 1..=7 {
            let t = direct_table(n, Exec::Sequential);
            for g in 1..=3u32 {
                let strata = if g == 1 {
                    vec![Stratum::torus()]
                } else {
                    Stratum::of_genus(g)
                };
                for st in strata {
                    let c = enumerate_classes(&st, n, Exec::Parallel);
                    let want = BigRational::new(t.get(&st.cycle_lengths()), factorial(n));
                    assert_eq!(weight(&c), want, "{st} n={n}");
                    let canon: HashSet<String> = c
                        .iter()
                        .map(|(o, _)| o.canonical_form().to_string())
                        .collect();
                    assert_eq!(canon.len(), c.len(), "duplicate class {st} n={n}");
                }
            }
        }
    }
}
