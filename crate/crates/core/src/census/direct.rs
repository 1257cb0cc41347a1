//! Brute-force pair counting: `h` runs over one representative per cycle
//! type (weighted by the class size), `v` over all of `S_n`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::characters::shapes;
use super::frobenius::class_size;
use crate::exec::Exec;

/// Transitive pair counts for every commutator cycle type at a fixed `n`,
/// keyed by the nontrivial cycle lengths in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectTable {
    pub n: usize,
    pub counts: BTreeMap<Vec<usize>, BigInt>,
}

impl DirectTable {
    /// Transitive pairs whose commutator has exactly these nontrivial cycle
    /// lengths (any order).
    pub fn get(&self, lengths: &[usize]) -> BigInt {
        let mut k = lengths.to_vec();
        k.sort_unstable_by(|a, b| b.cmp(a));
        self.counts.get(&k).cloned().unwrap_or_default()
    }
}

/// Permutation with the given cycle type, cycles on consecutive points.
fn representative(shape: &[u8]) -> Vec<u32> {
    let mut img = Vec::new();
    let mut start = 0u32;
    for &len in shape {
        let len = len as u32;
        for i in 0..len {
            img.push(start + (i + 1) % len);
        }
        start += len;
    }
    img
}

fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Counts, for fixed `h` and all `v` with `v(0) = first`, the transitive
/// pairs per commutator type.
fn scan_block(h: &[u32], first: u32, out: &mut HashMap<Vec<usize>, u64>) {
    let n = h.len();
    let mut hinv = vec![0u32; n];
    for (x, &y) in h.iter().enumerate() {
        hinv[y as usize] = x as u32;
    }
    let mut v: Vec<u32> = Vec::with_capacity(n);
    v.push(first);
    v.extend((0..n as u32).filter(|&x| x != first));
    let mut vinv = vec![0u32; n];
    let mut comm = vec![0u32; n];
    let mut seen = vec![false; n];
    let mut key: Vec<usize> = Vec::new();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        for (x, &y) in v.iter().enumerate() {
            vinv[y as usize] = x as u32;
        }
        // transitivity by bitmask closure
        let mut reach: u64 = 1;
        let mut frontier: u64 = 1;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= 1 << h[x];
                next |= 1 << v[x];
            }
            frontier = next & !reach;
            reach |= next;
        }
        if reach == full {
            for x in 0..n {
                comm[x] = h[v[hinv[vinv[x] as usize] as usize] as usize];
            }
            key.clear();
            seen.iter_mut().for_each(|s| *s = false);
            for x in 0..n {
                if seen[x] || comm[x] as usize == x {
                    continue;
                }
                let mut len = 0;
                let mut y = x;
                while !seen[y] {
                    seen[y] = true;
                    y = comm[y] as usize;
                    len += 1;
                }
                key.push(len);
            }
            key.sort_unstable_by(|a, b| b.cmp(a));
            match out.get_mut(&key) {
                Some(c) => *c += 1,
                None => {
                    out.insert(key.clone(), 1);
                }
            }
        }
        if !next_permutation(&mut v[1..]) {
            break;
        }
    }
}

/// Exhaustive table of transitive pairs at `n` squares.
pub fn direct_table(n: usize, exec: Exec) -> DirectTable {
    assert!((1..=20).contains(&n));
    let classes = shapes(n);
    let tasks: Vec<(usize, u32)> = (0..classes.len())
        .flat_map(|c| (0..n as u32).map(move |f| (c, f)))
        .collect();
    let partial = exec.map(&tasks, |&(c, first)| {
        let h = representative(&classes[c]);
        let mut out = HashMap::new();
        scan_block(&h, first, &mut out);
        (c, out)
    });
    let sizes: Vec<BigInt> = classes
        .iter()
        .map(|s| {
            let parts: Vec<usize> = s.iter().map(|&p| p as usize).filter(|&p| p > 1).collect();
            class_size(n, &parts)
        })
        .collect();
    let mut counts: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    for (c, block) in partial {
        for (k, cnt) in block {
            *counts.entry(k).or_default() += &sizes[c] * BigInt::from(cnt);
        }
    }
    DirectTable { n, counts }
}
