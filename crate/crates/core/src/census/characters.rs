//! Symmetric-group characters by the Murnaghan-Nakayama rule.
//!
//! Partitions are handled through beta-sets (first-column hook lengths):
//! removing a rim hook of length `k` is moving one bead from `b` to `b - k`,
//! with sign `(-1)^(beads strictly between)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exec::Exec;

pub type Shape = Vec<u8>;

/// All partitions of `n` as non-increasing part lists.
pub fn shapes(n: usize) -> Vec<Shape> {
    fn rec(rest: usize, max: usize, cur: &mut Shape, out: &mut Vec<Shape>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p as u8);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    assert!(n < 256);
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Product of all hook lengths, `n! / dim(lambda)`.
pub fn hook_product(shape: &[u8]) -> BigInt {
    let mut acc = BigInt::one();
    let mut small: u64 = 1;
    let cols = shape.first().copied().unwrap_or(0) as usize;
    // conjugate partition for leg lengths
    let conj: Vec<usize> = (0..cols)
        .map(|j| shape.iter().take_while(|&&p| p as usize > j).count())
        .collect();
    for (i, &row) in shape.iter().enumerate() {
        for (j, &c) in conj.iter().enumerate().take(row as usize) {
            let hook = (row as u64 - j as u64) + (c as u64 - i as u64) - 1;
            match small.checked_mul(hook) {
                Some(s) => small = s,
                None => {
                    acc *= small;
                    small = hook;
                }
            }
        }
    }
    acc * small
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, k| a * k)
}

/// `dim(lambda) = n! / hook_product`.
pub fn dimension(shape: &[u8]) -> BigInt {
    let n: usize = shape.iter().map(|&p| p as usize).sum();
    factorial(n) / hook_product(shape)
}

fn to_beta(shape: &[u8]) -> Vec<usize> {
    let l = shape.len();
    shape
        .iter()
        .enumerate()
        .map(|(i, &p)| p as usize + l - 1 - i)
        .collect()
}

fn from_beta(beta: &mut [usize]) -> Shape {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let l = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| (b - (l - 1 - i)) as u8)
        .filter(|&p| p > 0)
        .collect()
}

/// Every way to strip a rim hook of length `k` from `shape`:
/// `(remaining shape, sign)`.
pub fn remove_rim_hooks(shape: &[u8], k: usize) -> Vec<(Shape, i32)> {
    let beta = to_beta(shape);
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < k {
            continue;
        }
        let t = b - k;
        if beta.contains(&t) {
            continue;
        }
        let between = beta.iter().filter(|&&x| t < x && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = t;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        out.push((from_beta(&mut nb), sign));
    }
    out
}

/// Character table column `chi_lambda(mu)` for every partition `lambda` of
/// `n`, where `mu = parts` plus fixed points. Computed level by level: the
/// table after stripping `parts[j..]` is memoized per shape and shared by all
/// larger shapes.
pub fn character_column(n: usize, parts: &[usize], exec: Exec) -> HashMap<Shape, BigInt> {
    let rest = n - parts.iter().sum::<usize>();
    let base = shapes(rest);
    let dims = exec.map(&base, |s| dimension(s));
    let mut table: HashMap<Shape, BigInt> = base.into_iter().zip(dims).collect();
    let mut size = rest;
    for &k in parts.iter().rev() {
        size += k;
        let level = shapes(size);
        let prev = &table;
        let vals = exec.map(&level, |s| {
            remove_rim_hooks(s, k)
                .into_iter()
                .fold(BigInt::zero(), |acc, (t, sign)| {
                    let v = &prev[&t];
                    if sign > 0 {
                        acc + v
                    } else {
                        acc - v
                    }
                })
        });
        table = level.into_iter().zip(vals).collect();
    }
    table
}

/// Plain recursive Murnaghan-Nakayama, for cross-checks.
pub fn character(shape: &[u8], parts: &[usize]) -> BigInt {
    match parts.split_first() {
        None => BigInt::one(),
        Some((&k, rest)) if k == 1 && rest.iter().all(|&p| p == 1) => dimension(shape),
        Some((&k, rest)) => remove_rim_hooks(shape, k)
            .into_iter()
            .map(|(t, s)| BigInt::from(s) * character(&t, rest))
            .sum(),
    }
}
