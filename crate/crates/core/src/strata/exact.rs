//! Exact rationals times an integer power of pi.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `coeff * pi^pi_exp` with an exact rational coefficient.
///
/// All the closed-form volumes and Siegel-Veech constants of hyperelliptic
/// components live in this form, as does every conjectural value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    pub coeff: BigRational,
    pub pi_exp: i32,
}

impl ExactReal {
    pub fn new(coeff: BigRational, pi_exp: i32) -> Self {
        ExactReal { coeff, pi_exp }
    }

    pub fn rational(coeff: BigRational) -> Self {
        ExactReal { coeff, pi_exp: 0 }
    }

    pub fn from_ratio(num: i64, den: i64, pi_exp: i32) -> Self {
        ExactReal {
            coeff: BigRational::new(num.into(), den.into()),
            pi_exp,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.pi_exp == 0 || self.coeff.is_zero()
    }

    /// Natural log of the absolute value. `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.coeff.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_ln(self.coeff.numer().magnitude()) - big_ln(self.coeff.denom().magnitude())
            + self.pi_exp as f64 * std::f64::consts::PI.ln()
    }

    /// Nearest `f64` (round-to-nearest on each step; relative error a few ulp).
    pub fn to_f64(&self) -> f64 {
        if self.coeff.is_zero() {
            return 0.0;
        }
        // Direct conversion when it is in range keeps full precision.
        if let Some(c) = self.coeff.to_f64() {
            if c.is_finite() && c != 0.0 {
                let p = std::f64::consts::PI.powi(self.pi_exp);
                if p.is_finite() && p != 0.0 {
                    let v = c * p;
                    if v.is_finite() && v != 0.0 {
                        return v;
                    }
                }
            }
        }
        let sign = if self.coeff.is_negative() { -1.0 } else { 1.0 };
        sign * self.ln_abs().exp()
    }

    /// Decimal expansion with `digits` digits after the point, truncated
    /// toward zero. Uses fixed-point big-integer arithmetic, so any precision
    /// can be requested.
    pub fn to_decimal(&self, digits: usize) -> String {
        let guard = 10 + 2 * self.pi_exp.unsigned_abs() as usize;
        let prec = digits + guard;
        let scale = BigInt::from(10u32).pow(prec as u32);
        let pi = pi_fixed(prec);
        // value * 10^prec = coeff * pi^e * 10^prec, with pi given as pi*10^prec
        let mut num = self.coeff.numer().clone() * &scale;
        let mut den = self.coeff.denom().clone();
        if self.pi_exp >= 0 {
            for _ in 0..self.pi_exp {
                num *= &pi;
                den *= &scale;
            }
        } else {
            for _ in 0..(-self.pi_exp) {
                num *= &scale;
                den *= &pi;
            }
        }
        let fixed = num / den;
        let drop = BigInt::from(10u32).pow(guard as u32);
        let fixed = fixed / drop;
        let neg = fixed.is_negative();
        let s = fixed.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// `num/den` for the coefficient, as used in tables and CSV files.
    pub fn coeff_string(&self) -> String {
        format!("{}/{}", self.coeff.numer(), self.coeff.denom())
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(&self.coeff * &rhs.coeff, self.pi_exp + rhs.pi_exp)
    }
}

impl Div for &ExactReal {
    type Output = ExactReal;
    fn div(self, rhs: &ExactReal) -> ExactReal {
        assert!(!rhs.coeff.is_zero(), "division by zero ExactReal");
        ExactReal::new(&self.coeff / &rhs.coeff, self.pi_exp - rhs.pi_exp)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.coeff.denom().is_one() {
            self.coeff.numer().to_string()
        } else {
            self.coeff_string()
        };
        match self.pi_exp {
            0 => write!(f, "{c}"),
            1 => write!(f, "{c}*pi"),
            e => write!(f, "{c}*pi^{e}"),
        }
    }
}

pub(crate) fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `floor(pi * 10^digits)` by Machin's formula.
pub fn pi_fixed(digits: usize) -> BigInt {
    let guard = 10;
    let scale = BigInt::from(10u32).pow((digits + guard) as u32);
    let arctan_inv = |x: u32| -> BigInt {
        // arctan(1/x) * scale
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = &scale / &x;
        let mut sum = term.clone();
        let mut k = 1u32;
        loop {
            term /= &x2;
            if term.is_zero() {
                break;
            }
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            k += 1;
        }
        sum
    };
    let pi = (arctan_inv(5) * 16) - (arctan_inv(239) * 4);
    pi / BigInt::from(10u32).pow(guard as u32)
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!!`, with `0!! = (-1)!! = 1`.
pub(crate) fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        assert_eq!(pi_fixed(30).to_string(), "3141592653589793238462643383279");
    }

    #[test]
    fn decimal_expansion() {
        let x = ExactReal::from_ratio(1, 120, 4);
        assert_eq!(x.to_decimal(10), "0.8117424252");
        assert_eq!(ExactReal::from_ratio(-1, 3, 0).to_decimal(4), "-0.3333");
        assert_eq!(ExactReal::from_ratio(7, 2, 0).to_decimal(0), "3");
        let y = ExactReal::from_ratio(10, 3, -2);
        assert_eq!(y.to_decimal(6), "0.337737");
    }

    #[test]
    fn float_conversion_matches_decimal() {
        let x = ExactReal::from_ratio(1, 270, 4);
        let d: f64 = x.to_decimal(17).parse().unwrap();
        assert!((x.to_f64() - d).abs() < 1e-15);
        // out-of-range coefficient falls back to the log path
        let tiny = ExactReal::new(BigRational::new(1.into(), factorial(200)), 200);
        let expect = (-(1..=200).map(|k| (k as f64).ln()).sum::<f64>()
            + 200.0 * std::f64::consts::PI.ln())
        .exp();
        assert!((tiny.to_f64() / expect - 1.0).abs() < 1e-10);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(double_factorial(0), BigInt::one());
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(6), BigInt::from(48));
    }
}
