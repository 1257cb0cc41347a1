//! Closed-form values attached to strata.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{double_factorial, factorial, ExactReal, Stratum};
use crate::error::{Error, Result};

/// Conjectural large-genus volume `4 / prod (m_i + 1)`.
pub fn conjectural_volume(st: &Stratum) -> ExactReal {
    let den = st
        .zeros()
        .iter()
        .fold(BigInt::one(), |acc, &m| acc * BigInt::from(m + 1));
    ExactReal::rational(BigRational::new(BigInt::from(4), den))
}

/// `2 pi^{2g} / (2g+1)! * (2g-3)!! / (2g-2)!!`: volume of the hyperelliptic
/// component of `H(2g-2)`.
pub fn hyperelliptic_volume_minimal(g: u32) -> ExactReal {
    assert!(g >= 2, "genus must be at least 2");
    let g = g as i64;
    let num = BigInt::from(2) * double_factorial(2 * g - 3);
    let den = factorial((2 * g + 1) as u64) * double_factorial(2 * g - 2);
    ExactReal::new(BigRational::new(num, den), 2 * g as i32)
}

/// `4 pi^{2g} / (2g+2)! * (2g-2)!! / (2g-1)!!`: volume of the hyperelliptic
/// component of `H(g-1, g-1)`, as displayed (zeros not named; multiply by
/// [`Stratum::labeling_factor`] for the named-zero convention).
pub fn hyperelliptic_volume_pair(g: u32) -> ExactReal {
    assert!(g >= 2, "genus must be at least 2");
    let g = g as i64;
    let num = BigInt::from(4) * double_factorial(2 * g - 2);
    let den = factorial((2 * g + 2) as u64) * double_factorial(2 * g - 1);
    ExactReal::new(BigRational::new(num, den), 2 * g as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypKind {
    /// `H^hyp(2g-2)`
    Minimal,
    /// `H^hyp(g-1, g-1)`
    Pair,
}

/// Large-genus asymptotic form `(1/(pi^2 g)) (pi e / k)^k` with `k = 2g+1`
/// (minimal) or `k = 2g+2` (pair). Evaluated in log space.
pub fn hyperelliptic_volume_asymptotic(which: HypKind, g: u32) -> f64 {
    assert!(g >= 2, "genus must be at least 2");
    let gf = g as f64;
    let k = match which {
        HypKind::Minimal => 2.0 * gf + 1.0,
        HypKind::Pair => 2.0 * gf + 2.0,
    };
    let pi = std::f64::consts::PI;
    let ln = -(pi * pi * gf).ln() + k * (pi * std::f64::consts::E / k).ln();
    ln.exp()
}

/// `c_area(H^hyp(2g-2)) = (2g+1) g / (pi^2 (2g-1))`.
pub fn carea_hyperelliptic_minimal(g: u32) -> ExactReal {
    assert!(g >= 2, "genus must be at least 2");
    let g = g as i64;
    ExactReal::from_ratio((2 * g + 1) * g, 2 * g - 1, -2)
}

/// `c_area(H^hyp(g-1, g-1)) = (2g+1)(g+1) / (pi^2 2g)`.
pub fn carea_hyperelliptic_pair(g: u32) -> ExactReal {
    assert!(g >= 2, "genus must be at least 2");
    let g = g as i64;
    ExactReal::from_ratio((2 * g + 1) * (g + 1), 2 * g, -2)
}

/// The conjectured universal large-genus limit of `c_area`: `1/2`.
pub fn sv_conjecture_value() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `(1/12) sum m_i (m_i + 2) / (m_i + 1)`, exactly.
pub fn lyapunov_combinatorial_term(st: &Stratum) -> BigRational {
    let sum = st.zeros().iter().fold(BigRational::zero(), |acc, &m| {
        let m = BigInt::from(m);
        acc + BigRational::new(&m * (&m + 2), &m + 1)
    });
    sum / BigRational::from_integer(BigInt::from(12))
}

/// `lambda_1 + ... + lambda_g = combinatorial term + (pi^2 / 3) c_area`.
pub fn lyapunov_sum(st: &Stratum, carea: f64) -> f64 {
    let comb = ExactReal::rational(lyapunov_combinatorial_term(st)).to_f64();
    comb + std::f64::consts::PI.powi(2) / 3.0 * carea
}

/// Exact Lyapunov sum when `c_area` is a rational multiple of `pi^{-2}` (as
/// for every hyperelliptic component). Other powers of pi do not combine
/// into a single [`ExactReal`].
pub fn lyapunov_sum_exact(st: &Stratum, carea: &ExactReal) -> Result<ExactReal> {
    if carea.pi_exp != -2 && !carea.coeff.is_zero() {
        return Err(Error::Invalid(format!(
            "c_area = {carea} is not a rational multiple of pi^-2"
        )));
    }
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    Ok(ExactReal::rational(
        lyapunov_combinatorial_term(st) + &carea.coeff * third,
    ))
}

/// The Lyapunov sum with `c_area` at its conjectured limit `1/2`, i.e. the
/// combinatorial term plus `pi^2 / 6`.
pub fn lyapunov_sum_conjectural(st: &Stratum) -> f64 {
    lyapunov_sum(st, 0.5)
}

/// `eps_3`: observed Lyapunov sum minus the conjectural one.
pub fn epsilon3(st: &Stratum, observed_sum: f64) -> f64 {
    observed_sum - lyapunov_sum_conjectural(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::Partition;

    fn st(parts: &[u32]) -> Stratum {
        Stratum::from_parts(parts).unwrap()
    }

    #[test]
    fn conjectural_volumes() {
        assert_eq!(
            conjectural_volume(&st(&[1, 1])),
            ExactReal::from_ratio(1, 1, 0)
        );
        assert_eq!(
            conjectural_volume(&st(&[2])),
            ExactReal::from_ratio(4, 3, 0)
        );
        assert_eq!(
            conjectural_volume(&st(&[1, 1, 1, 1])),
            ExactReal::from_ratio(1, 4, 0)
        );
    }

    #[test]
    fn hyperelliptic_volumes() {
        assert_eq!(
            hyperelliptic_volume_minimal(2),
            ExactReal::from_ratio(1, 120, 4)
        );
        assert_eq!(
            hyperelliptic_volume_pair(2),
            ExactReal::from_ratio(1, 270, 4)
        );
        assert_eq!(
            hyperelliptic_volume_minimal(3),
            ExactReal::from_ratio(1, 6720, 6)
        );
        for g in 2..=12 {
            assert_eq!(hyperelliptic_volume_minimal(g).pi_exp, 2 * g as i32);
            assert_eq!(hyperelliptic_volume_pair(g).pi_exp, 2 * g as i32);
        }
    }

    #[test]
    fn asymptotic_ratio_tends_to_one() {
        for which in [HypKind::Minimal, HypKind::Pair] {
            let exact = |g| match which {
                HypKind::Minimal => hyperelliptic_volume_minimal(g),
                HypKind::Pair => hyperelliptic_volume_pair(g),
            };
            let mut prev_dist = f64::INFINITY;
            for g in 2..=60u32 {
                let r = exact(g).ln_abs() - hyperelliptic_volume_asymptotic(which, g).ln();
                let r = r.exp();
                let dist = (r - 1.0).abs();
                assert!(dist < prev_dist, "{which:?} g={g}: ratio {r}");
                prev_dist = dist;
                if g >= 20 {
                    assert!((0.9..=1.1).contains(&r));
                }
            }
        }
        let a = |g| hyperelliptic_volume_asymptotic(HypKind::Minimal, g);
        assert!(a(2) > 0.0);
        for g in 2..30 {
            assert!(a(g + 1) < a(g));
        }
    }

    #[test]
    fn carea_hyperelliptic() {
        let m = carea_hyperelliptic_minimal(2);
        assert_eq!(m, ExactReal::from_ratio(10, 3, -2));
        assert!((m.to_f64() - 0.33773).abs() < 1e-5);
        let p = carea_hyperelliptic_pair(2);
        assert_eq!(p, ExactReal::from_ratio(15, 4, -2));
        assert!((p.to_f64() - 0.37996).abs() < 1e-5);
        // diverges linearly: c / (g / pi^2) -> 1
        let r =
            carea_hyperelliptic_minimal(1000).to_f64() / (1000.0 / std::f64::consts::PI.powi(2));
        assert!((r - 1.0).abs() < 2e-3);
        assert_ne!(m.coeff, sv_conjecture_value());
        assert_eq!(sv_conjecture_value(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn lyapunov_sums() {
        let h2 = st(&[2]);
        let exact = lyapunov_sum_exact(&h2, &carea_hyperelliptic_minimal(2)).unwrap();
        assert_eq!(exact, ExactReal::from_ratio(4, 3, 0));
        let f = lyapunov_sum(&h2, carea_hyperelliptic_minimal(2).to_f64());
        assert!((f - 4.0 / 3.0).abs() < 1e-15);
        assert!((lyapunov_sum(&h2, 0.0) - 2.0 / 9.0).abs() < 1e-15);
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        for s in Stratum::of_genus(4) {
            let comb = ExactReal::rational(lyapunov_combinatorial_term(&s)).to_f64();
            assert_eq!(lyapunov_sum_conjectural(&s), comb + pi2_6);
        }
        // H(1,1) hyperelliptic: 1/12 * 2 * 3/2 + 5/4 = 3/2
        let e = lyapunov_sum_exact(&st(&[1, 1]), &carea_hyperelliptic_pair(2)).unwrap();
        assert_eq!(e, ExactReal::from_ratio(3, 2, 0));
        assert!(lyapunov_sum_exact(&h2, &ExactReal::from_ratio(1, 2, 0)).is_err());
        let _ = Partition::default();
    }
}
