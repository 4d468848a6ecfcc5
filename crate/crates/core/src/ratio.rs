//! Small helpers for exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Parses `p/q` or a plain integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64` to an exact rational. Only used for reports and
/// cross-checks against Monte Carlo data.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let digits = 18u32;
    let scale = BigInt::from(10u64).pow(digits);
    let scaled = (r * Rat::from_integer(scale.clone())).round();
    let approx: f64 = scaled.numer().to_string().parse().unwrap_or(f64::NAN);
    approx / 1e18
}

/// Exact rational equal to the given finite `f64`.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions (convergents and intermediate fractions).
pub fn best_rational_approx(x: f64, max_den: u64) -> Rat {
    debug_assert!(max_den >= 1);
    if x < 0.0 {
        // The convergent walk below assumes floor-style quotients.
        return -best_rational_approx(-x, max_den);
    }
    let target = rat_from_f64(x).unwrap_or_else(|| rat(0));
    // p/q track the current convergent, pp/qq the previous one.
    let (mut pp, mut qq) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q): (BigInt, BigInt) = (target.to_integer(), BigInt::one());
    let mut frac = target.clone() - Rat::from_integer(p.clone());
    let cap = BigInt::from(max_den);
    while !frac.is_zero() {
        let rec = frac.recip();
        let a = rec.to_integer();
        frac = rec - Rat::from_integer(a.clone());
        let np = &a * &p + &pp;
        let nq = &a * &q + &qq;
        if nq > cap {
            // Largest intermediate fraction still within the cap.
            let k = (&cap - &qq) / &q;
            let sp = &k * &p + &pp;
            let sq = &k * &q + &qq;
            if !sq.is_zero() {
                let semi = Rat::new(sp, sq);
                let conv = Rat::new(p, q);
                return if (semi.clone() - &target).abs() < (conv.clone() - &target).abs() {
                    semi
                } else {
                    conv
                };
            }
            return Rat::new(p, q);
        }
        pp = p;
        qq = q;
        p = np;
        q = nq;
    }
    Rat::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rat("-2").unwrap(), rat(-2));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&ratio(-6, 4)), "-3/2");
        assert_eq!(fmt_rat(&rat(5)), "5");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn rational_reconstruction() {
        assert_eq!(best_rational_approx(0.5000003, 96), ratio(1, 2));
        assert_eq!(best_rational_approx(-0.0833331, 96), ratio(-1, 12));
        assert_eq!(best_rational_approx(0.0000004, 96), rat(0));
        assert_eq!(best_rational_approx(1.0, 96), rat(1));
    }

    #[test]
    fn f64_round_trip() {
        let r = ratio(-7, 32);
        assert_eq!(rat_from_f64(rat_to_f64(&r)).unwrap(), r);
    }
}
