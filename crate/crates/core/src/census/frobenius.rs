//! Counting permutation pairs by commutator class through character sums,
//! followed by the exponential-formula correction that keeps only transitive
//! pairs.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::characters::{factorial, hook_product, remove_rim_hooks, shapes, Shape};
use crate::exec::Exec;

/// One character column: `chi_lambda(C)` for every shape `lambda`.
type Column = Arc<HashMap<Shape, BigInt>>;

/// Memoized character columns and pair counts. One instance can serve every
/// stratum and square count of a run; columns for a class are built from the
/// columns of the class with its first part removed.
#[derive(Default)]
pub struct Frobenius {
    exec: Exec,
    columns: HashMap<(usize, Vec<usize>), Column>,
    hooks: HashMap<usize, Arc<Vec<(Shape, BigInt)>>>,
    pairs: HashMap<(usize, Vec<usize>), BigInt>,
}

fn is_even_class(parts: &[usize]) -> bool {
    parts.iter().map(|&k| k - 1).sum::<usize>() % 2 == 0
}

/// `n! / z_mu` for the class with nontrivial parts `parts` in `S_n`.
pub fn class_size(n: usize, parts: &[usize]) -> BigInt {
    let mut z = BigInt::one();
    let fixed = n - parts.iter().sum::<usize>();
    z *= factorial(fixed);
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut i = 0;
    while i < sorted.len() {
        let k = sorted[i];
        let r = sorted[i..].iter().take_while(|&&x| x == k).count();
        z *= BigInt::from(k).pow(r as u32) * factorial(r);
        i += r;
    }
    factorial(n) / z
}

impl Frobenius {
    pub fn new(exec: Exec) -> Self {
        Frobenius {
            exec,
            ..Default::default()
        }
    }

    fn hook_table(&mut self, n: usize) -> Arc<Vec<(Shape, BigInt)>> {
        let exec = self.exec;
        self.hooks
            .entry(n)
            .or_insert_with(|| {
                let sh = shapes(n);
                let hp = exec.map(&sh, |s| hook_product(s));
                Arc::new(sh.into_iter().zip(hp).collect())
            })
            .clone()
    }

    /// `chi_lambda(parts, 1^rest)` for all `lambda` of `n`.
    fn column(&mut self, n: usize, parts: &[usize]) -> Column {
        let key = (n, parts.to_vec());
        if let Some(c) = self.columns.get(&key) {
            return c.clone();
        }
        let col: HashMap<Shape, BigInt> = match parts.split_first() {
            None => {
                let hooks = self.hook_table(n);
                let fact = factorial(n);
                hooks.iter().map(|(s, h)| (s.clone(), &fact / h)).collect()
            }
            Some((&k, rest)) => {
                let prev = self.column(n - k, rest);
                let level = shapes(n);
                let vals = self.exec.map(&level, |s| {
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
                level.into_iter().zip(vals).collect()
            }
        };
        let col = Arc::new(col);
        self.columns.insert(key, col.clone());
        col
    }

    /// Number of pairs `(h, v)` in `S_n^2` (transitive or not) whose
    /// commutator has nontrivial cycle lengths `parts`:
    /// `|C| * sum_lambda (n!/dim lambda) chi_lambda(C)`.
    pub fn all_pairs(&mut self, n: usize, parts: &[usize]) -> BigInt {
        let mut parts: Vec<usize> = parts.to_vec();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        debug_assert!(parts.iter().all(|&k| k >= 2));
        if parts.iter().sum::<usize>() > n || !is_even_class(&parts) {
            return BigInt::zero();
        }
        let key = (n, parts.clone());
        if let Some(p) = self.pairs.get(&key) {
            return p.clone();
        }
        let col = self.column(n, &parts);
        let hooks = self.hook_table(n);
        let sum: BigInt = hooks.iter().map(|(s, h)| h * &col[s]).sum();
        let total = class_size(n, &parts) * sum;
        self.pairs.insert(key, total.clone());
        total
    }

    /// Labelled weighted count of all pairs: zeros carry distinct names, so
    /// each unordered configuration is counted `prod r_j!` times, divided by
    /// `n!`.
    fn labeled_all(&mut self, n: usize, parts: &[usize]) -> BigRational {
        let a = self.all_pairs(n, parts);
        BigRational::new(a * labeling(parts), factorial(n))
    }

    /// Labelled weighted count of transitive pairs with `n` squares whose
    /// commutator cycles have lengths `lengths` (one named zero per entry).
    ///
    /// Components of a general pair are separated by the exponential
    /// formula: the component holding the first zero carries a subset `B` of
    /// the zeros and `n_B` squares, the rest is an arbitrary configuration.
    /// Components without zeros are unramified torus covers.
    pub fn connected_labeled_weighted(&mut self, n: usize, lengths: &[usize]) -> BigRational {
        let z = lengths.len();
        let full = (1usize << z) - 1;
        let parts_of = |mask: usize| -> Vec<usize> {
            let mut p: Vec<usize> = (0..z)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| lengths[i])
                .collect();
            p.sort_unstable_by(|a, b| b.cmp(a));
            p
        };
        // all[mask][m], conn[mask][m]
        let mut all = vec![vec![BigRational::zero(); n + 1]; full + 1];
        for (mask, row) in all.iter_mut().enumerate() {
            let p = parts_of(mask);
            for (m, slot) in row.iter_mut().enumerate() {
                *slot = if m == 0 {
                    if mask == 0 {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                } else {
                    self.labeled_all(m, &p)
                };
            }
        }
        let mut conn = vec![vec![BigRational::zero(); n + 1]; full + 1];
        // mask 0: connected torus covers, the logarithm of the partition
        // generating function
        for m in 1..=n {
            let mut s = all[0][m].clone();
            for mb in 1..m {
                s -= &conn[0][mb] * &all[0][m - mb] * BigRational::from_integer(mb.into())
                    / BigRational::from_integer(m.into());
            }
            conn[0][m] = s;
        }
        for mask in 1..=full {
            let low = mask & mask.wrapping_neg();
            for m in 1..=n {
                let mut s = all[mask][m].clone();
                // submasks B of mask containing the lowest zero
                let mut b = mask;
                loop {
                    if b & low != 0 {
                        let rest = mask ^ b;
                        for mb in 1..=m {
                            if b == mask && mb == m {
                                continue;
                            }
                            let c = &conn[b][mb];
                            let a = &all[rest][m - mb];
                            if !c.is_zero() && !a.is_zero() {
                                s -= c * a;
                            }
                        }
                    }
                    if b == 0 {
                        break;
                    }
                    b = (b - 1) & mask;
                }
                conn[mask][m] = s;
            }
        }
        conn[full][n].clone()
    }

    /// Transitive pairs with the given commutator cycle lengths.
    pub fn transitive_pairs(&mut self, n: usize, lengths: &[usize]) -> BigInt {
        let c = self.connected_labeled_weighted(n, lengths);
        let v = c * BigRational::from_integer(factorial(n))
            / BigRational::from_integer(labeling(lengths));
        debug_assert!(v.is_integer());
        v.to_integer()
    }
}

/// `prod r_j!` over multiplicities of repeated lengths.
pub(crate) fn labeling(parts: &[usize]) -> BigInt {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut out = BigInt::one();
    let mut i = 0;
    while i < sorted.len() {
        let r = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        out *= factorial(r);
        i += r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(k: u64) -> u64 {
        (1..=k).filter(|d| k.is_multiple_of(*d)).sum()
    }

    #[test]
    fn s3_three_cycles() {
        let mut f = Frobenius::new(Exec::Sequential);
        assert_eq!(f.all_pairs(3, &[3]), BigInt::from(18));
        assert_eq!(f.all_pairs(3, &[]), BigInt::from(18));
        assert_eq!(f.transitive_pairs(3, &[3]), BigInt::from(18));
        assert_eq!(f.all_pairs(3, &[2]), BigInt::zero());
    }

    #[test]
    fn total_over_classes_is_all_pairs() {
        let mut f = Frobenius::new(Exec::Sequential);
        for n in 1..=7usize {
            let total: BigInt = shapes(n)
                .iter()
                .map(|s| {
                    let parts: Vec<usize> =
                        s.iter().map(|&p| p as usize).filter(|&p| p > 1).collect();
                    f.all_pairs(n, &parts)
                })
                .sum();
            assert_eq!(total, factorial(n).pow(2));
        }
    }

    #[test]
    fn torus_covers_are_sigma_over_k() {
        let mut f = Frobenius::new(Exec::Sequential);
        for k in 1..=8u64 {
            let w = f.connected_labeled_weighted(k as usize, &[]);
            assert_eq!(w, BigRational::new(sigma(k).into(), k.into()), "k={k}");
        }
        assert_eq!(f.transitive_pairs(2, &[]), BigInt::from(3));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(4, &[2, 2]), BigInt::from(3));
        assert_eq!(class_size(5, &[3]), BigInt::from(20));
        assert_eq!(class_size(3, &[]), BigInt::one());
    }
}
