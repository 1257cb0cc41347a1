//! The `SL(2,Z)` action on origamis.
//!
//! Conventions, with `T = [[1,1],[0,1]]` and `S = [[0,-1],[1,0]]` acting on
//! the plane of the surface (a left action):
//!
//! - `T . (h, v) = (h, v h^-1)` (horizontal shear, cut and reglued)
//! - `S . (h, v) = (v^-1, h)` (rotation by a quarter turn counterclockwise)
//!
//! A direction `d` on `o` becomes the direction `M d` on `M . o`, so the
//! horizontal cylinders of `M . o` are the cylinders of `o` in direction
//! `M^-1 (1, 0)`.

use super::{Origami, Perm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T,
    TInv,
    S,
    SInv,
}

impl Generator {
    pub fn matrix(self) -> Mat2 {
        match self {
            Generator::T => Mat2::new(1, 1, 0, 1),
            Generator::TInv => Mat2::new(1, -1, 0, 1),
            Generator::S => Mat2::new(0, -1, 1, 0),
            Generator::SInv => Mat2::new(0, 1, -1, 0),
        }
    }

    pub fn inverse(self) -> Generator {
        match self {
            Generator::T => Generator::TInv,
            Generator::TInv => Generator::T,
            Generator::S => Generator::SInv,
            Generator::SInv => Generator::S,
        }
    }
}

/// A 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn apply(&self, p: i64, q: i64) -> (i64, i64) {
        (self.a * p + self.b * q, self.c * p + self.d * q)
    }

    /// `T^k`
    pub fn shear(k: i64) -> Mat2 {
        Mat2::new(1, k, 0, 1)
    }

    /// Factor a determinant-one matrix as `T^{k_0} S T^{k_1} S ... `, i.e.
    /// a word `[(g, power)]` whose product in order equals `self`.
    pub fn word(&self) -> Vec<(Generator, i64)> {
        assert_eq!(self.det(), 1, "matrix must lie in SL(2,Z)");
        // Reduce L * M to +-T^k by left multiplications, recording L.
        let mut m = *self;
        let mut left: Vec<(Generator, i64)> = Vec::new();
        while m.c != 0 {
            let k = m.a.div_euclid(m.c);
            if k != 0 {
                m = Mat2::shear(-k).mul(&m);
                left.push((Generator::T, -k));
            }
            m = Generator::S.matrix().mul(&m);
            left.push((Generator::S, 1));
        }
        // m = [[a, b], [0, a]] with a = +-1
        let mut tail: Vec<(Generator, i64)> = Vec::new();
        if m.a == -1 {
            tail.push((Generator::S, 2));
            m = Mat2::new(1, -m.b, 0, 1);
        }
        if m.b != 0 {
            tail.push((Generator::T, m.b));
        }
        // self = L^-1 * tail, L = left[last] ... left[0]
        let mut word: Vec<(Generator, i64)> = left.iter().map(|&(g, k)| (g, -k)).collect();
        word.extend(tail);
        word
    }
}

impl Origami {
    /// Action of a single generator.
    pub fn act(&self, g: Generator) -> Origami {
        let (h, v) = (self.h(), self.v());
        let (nh, nv) = match g {
            Generator::T => (h.clone(), v.compose(&h.inverse())),
            Generator::TInv => (h.clone(), v.compose(h)),
            Generator::S => (v.inverse(), h.clone()),
            Generator::SInv => (v.clone(), h.inverse()),
        };
        Origami::from_parts_unchecked(nh, nv)
    }

    /// `T^k . o` in linear time for any `k`.
    pub fn shear(&self, k: i64) -> Origami {
        let hk: Perm = self.h().pow(-k);
        Origami::from_parts_unchecked(self.h().clone(), self.v().compose(&hk))
    }

    fn act_power(&self, g: Generator, k: i64) -> Origami {
        match g {
            Generator::T => self.shear(k),
            Generator::TInv => self.shear(-k),
            Generator::S | Generator::SInv => {
                let sign = if g == Generator::S { 1 } else { -1 };
                let r = (sign * k).rem_euclid(4);
                let mut o = self.clone();
                for _ in 0..r {
                    o = o.act(Generator::S);
                }
                o
            }
        }
    }

    /// Action of an arbitrary matrix of `SL(2,Z)`.
    pub fn act_matrix(&self, m: &Mat2) -> Origami {
        let word = m.word();
        let mut o = self.clone();
        for &(g, k) in word.iter().rev() {
            o = o.act_power(g, k);
        }
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_product(w: &[(Generator, i64)]) -> Mat2 {
        let mut m = Mat2::IDENTITY;
        for &(g, k) in w {
            let base = if k >= 0 {
                g.matrix()
            } else {
                g.inverse().matrix()
            };
            for _ in 0..k.abs() {
                m = m.mul(&base);
            }
        }
        m
    }

    #[test]
    fn words_multiply_back() {
        for (a, b, c, d) in [
            (1, 0, 0, 1),
            (0, -1, 1, 0),
            (-1, 0, 0, -1),
            (2, 1, 1, 1),
            (1, 0, -3, 1),
            (3, 5, 4, 7),
            (-7, 3, -12, 5),
            (13, 8, 8, 5),
        ] {
            let m = Mat2::new(a, b, c, d);
            assert_eq!(m.det(), 1);
            assert_eq!(word_product(&m.word()), m, "{m:?}");
        }
    }

    #[test]
    fn generator_actions() {
        let torus = Origami::torus();
        assert_eq!(torus.act(Generator::T), torus);
        let x: Origami = "3;h=(0,1,2);v=(1,2)".parse().unwrap();
        let s4 = x
            .act(Generator::S)
            .act(Generator::S)
            .act(Generator::S)
            .act(Generator::S);
        assert_eq!(s4.canonical_form(), x.canonical_form());
        assert_eq!(x.act(Generator::T).act(Generator::TInv), x);
        assert_eq!(x.act(Generator::S).act(Generator::SInv), x);
        assert_eq!(
            x.shear(3),
            x.act(Generator::T).act(Generator::T).act(Generator::T)
        );
        assert_eq!(x.shear(-2), x.act(Generator::TInv).act(Generator::TInv));
    }

    #[test]
    fn matrix_action_is_a_left_action() {
        let x: Origami = "5;h=(0,1,2)(3,4);v=(0,3)(1,4,2)".parse().unwrap();
        let a = Mat2::new(2, 1, 1, 1);
        let b = Mat2::new(1, 0, -3, 1);
        let lhs = x.act_matrix(&a.mul(&b)).canonical_form();
        let rhs = x.act_matrix(&b).act_matrix(&a).canonical_form();
        assert_eq!(lhs, rhs);
        // S T S^-1 equals the lower shear [[1,0],[-1,1]]
        let u = x.act(Generator::SInv).act(Generator::T).act(Generator::S);
        assert_eq!(
            u.canonical_form(),
            x.act_matrix(&Mat2::new(1, 0, -1, 1)).canonical_form()
        );
    }

    #[test]
    fn horizontal_cylinders_follow_directions() {
        // vertical cylinders of o are horizontal cylinders of S^-1 . o (up to order)
        let x: Origami = "4;h=(0,1,2);v=(0,3)".parse().unwrap();
        let mut vert: Vec<_> = x
            .act(Generator::SInv)
            .horizontal_cylinders()
            .iter()
            .map(|c| (c.width, c.height))
            .collect();
        let mut via_s: Vec<_> = x
            .act(Generator::S)
            .horizontal_cylinders()
            .iter()
            .map(|c| (c.width, c.height))
            .collect();
        vert.sort();
        via_s.sort();
        assert_eq!(vert, via_s);
        // columns of x: cycles of v are (0,3),(1),(2)
        let cols: usize = vert.iter().map(|&(w, h)| w * h).sum();
        assert_eq!(cols, 4);
    }
}
