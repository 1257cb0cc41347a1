#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqtiled::origami::{Generator, Mat2, Origami, Perm};

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut img: Vec<u32> = (0..n as u32).collect();
    img.shuffle(rng);
    Perm::from_images(img).unwrap()
}

/// A uniformly random connected origami with `n` squares.
pub fn random_origami(seed: u64, n: usize) -> Origami {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let o = Origami::new(random_perm(&mut rng, n), random_perm(&mut rng, n)).unwrap();
        if o.is_connected() {
            return o;
        }
    }
}

/// A random product of `len` generators, returned with the word.
pub fn random_word(seed: u64, len: usize) -> (Vec<Generator>, Mat2) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let gens = [Generator::T, Generator::TInv, Generator::S, Generator::SInv];
    let word: Vec<Generator> = (0..len).map(|_| gens[rng.gen_range(0..4)]).collect();
    let m = word
        .iter()
        .fold(Mat2::IDENTITY, |acc, g| acc.mul(&g.matrix()));
    (word, m)
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
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
