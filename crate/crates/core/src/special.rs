//! Special functions for the exact moment formulas: log-gamma, erf,
//! double-factorial ratios and terminating Gauss hypergeometric series.

use std::cmp::Ordering;
use std::ops::{Div, Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ManaError, Result};

/// Largest `m` for which the terminating series is summed in floating point.
pub const LINEAR_SUM_MAX_TERMS: u64 = 30;

/// `sign · exp(log_abs)`; `sign == 0` exactly when the value is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSigned {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogSigned = LogSigned {
        log_abs: 0.0,
        sign: 1,
    };

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => LogSigned {
                log_abs: x.ln(),
                sign: 1,
            },
            Some(Ordering::Less) => LogSigned {
                log_abs: (-x).ln(),
                sign: -1,
            },
            _ => Self::ZERO,
        }
    }

    /// A positive value given by its logarithm.
    pub fn from_ln(log_abs: f64) -> Self {
        LogSigned { log_abs, sign: 1 }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Log-sum-exp with signs.
    pub fn add(self, other: LogSigned) -> LogSigned {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= other.log_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            LogSigned {
                log_abs: big.log_abs + ratio.ln_1p(),
                sign: big.sign,
            }
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogSigned {
                log_abs: big.log_abs + (-ratio).ln_1p(),
                sign: big.sign,
            }
        }
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;
    fn mul(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 || rhs.sign == 0 {
            return LogSigned::ZERO;
        }
        LogSigned {
            log_abs: self.log_abs + rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Div for LogSigned {
    type Output = LogSigned;
    fn div(self, rhs: LogSigned) -> LogSigned {
        assert!(rhs.sign != 0, "division of LogSigned by zero");
        if self.sign == 0 {
            return LogSigned::ZERO;
        }
        LogSigned {
            log_abs: self.log_abs - rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;
    fn neg(self) -> LogSigned {
        LogSigned {
            log_abs: self.log_abs,
            sign: -self.sign,
        }
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ManaError::out_of_range("x", x, "(0, ∞)"));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `ln[d!! / (d−1)!!]` for odd `d ≥ 1`.
///
/// Equals `Σ_{k=1}^{m} ln(1 + 1/(2k))` with `m = (d−1)/2`; the sum is used up
/// to `d = 10⁶`, beyond which the log-gamma form takes over.
pub fn log_double_factorial_ratio(d: u64) -> Result<f64> {
    if d % 2 == 0 {
        return Err(ManaError::out_of_range(
            "d",
            d as f64,
            "odd integers ≥ 1",
        ));
    }
    let m = (d - 1) / 2;
    if d <= 1_000_000 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in 1..=m {
            let term = (0.5 / k as f64).ln_1p();
            let t = sum + term;
            comp += if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
            sum = t;
        }
        Ok(sum + comp)
    } else {
        let m = m as f64;
        Ok(log_gamma(m + 1.5)? - log_gamma(m + 1.0)? - log_gamma(1.5)?)
    }
}

fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite below 1000 bits").abs().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact conversion of a big rational into signed-log form.
pub fn rational_to_log_signed(r: &BigRational) -> LogSigned {
    if r.is_zero() {
        return LogSigned::ZERO;
    }
    let sign = if r.numer().sign() == Sign::Minus {
        -1
    } else {
        1
    };
    LogSigned {
        log_abs: big_ln(r.numer()) - big_ln(r.denom()),
        sign,
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Terminating `₂F₁(a, b; c; z)` with `a = −m` a nonpositive integer.
///
/// Series with at most `LINEAR_SUM_MAX_TERMS` steps are summed in floating
/// point with compensated summation; longer ones are summed exactly over the
/// rationals (every finite `f64` is an exact dyadic rational).
pub fn hyp2f1_terminating(a: f64, b: f64, c: f64, z: f64) -> Result<LogSigned> {
    if !(a <= 0.0) || a.fract() != 0.0 || !a.is_finite() {
        return Err(ManaError::NonTerminating(a));
    }
    let m = (-a) as u64;
    if c <= 0.0 && c.fract() == 0.0 && c > -(m as f64) {
        return Err(ManaError::HypergeometricPole(c));
    }
    if m <= LINEAR_SUM_MAX_TERMS {
        if let Some(v) = hyp2f1_linear(m, b, c, z) {
            return Ok(LogSigned::from_f64(v));
        }
    }
    Ok(rational_to_log_signed(&hyp2f1_rational(m, b, c, z)))
}

fn hyp2f1_linear(m: u64, b: f64, c: f64, z: f64) -> Option<f64> {
    let a = -(m as f64);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 0..m {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    let v = sum + comp;
    v.is_finite().then_some(v)
}

fn hyp2f1_rational(m: u64, b: f64, c: f64, z: f64) -> BigRational {
    let a = -BigRational::from_integer(BigInt::from(m));
    let b = exact(b);
    let c = exact(c);
    let z = exact(z);
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 0..m {
        let k = BigRational::from_integer(BigInt::from(k));
        term = term * (&a + &k) * (&b + &k) * &z / ((&c + &k) * (&k + BigRational::one()));
        sum += &term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        let l5 = log_gamma(5.0).unwrap();
        assert!((l5 - 24f64.ln()).abs() / 24f64.ln() < 1e-12);
        let lh = log_gamma(0.5).unwrap();
        let target = 0.5 * std::f64::consts::PI.ln();
        assert!((lh - target).abs() / target < 1e-12);
        // Γ(101) = 100!
        let fact: f64 = (1..=100).map(|k| (k as f64).ln()).sum();
        assert!((log_gamma(101.0).unwrap() - fact).abs() / fact < 1e-12);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(6.0) - 1.0).abs() < 1e-12);
        assert!((erf(0.25) - 0.276_326_390_168_236_9).abs() < 1e-12);
        assert!((erf(-0.25) + 0.276_326_390_168_236_9).abs() < 1e-12);
    }

    #[test]
    fn double_factorial_ratios() {
        assert!((log_double_factorial_ratio(1).unwrap()).abs() < 1e-15);
        assert!((log_double_factorial_ratio(3).unwrap() - 1.5f64.ln()).abs() < 1e-14);
        assert!((log_double_factorial_ratio(5).unwrap() - (15.0f64 / 8.0).ln()).abs() < 1e-14);
        assert!(log_double_factorial_ratio(4).is_err());
        // the two branches meet at the switch-over
        let d = 1_000_001u64;
        let m = ((d - 1) / 2) as f64;
        let via_gamma =
            log_gamma(m + 1.5).unwrap() - log_gamma(m + 1.0).unwrap() - log_gamma(1.5).unwrap();
        let via_sum = log_double_factorial_ratio(999_999).unwrap() + (1.0 + 0.5 / m).ln();
        assert!((via_gamma - via_sum).abs() < 1e-8);
    }

    #[test]
    fn log_signed_basics() {
        let a = LogSigned::from_f64(3.0);
        let b = LogSigned::from_f64(-5.0);
        assert!(((a * b).to_f64() + 15.0).abs() < 1e-12);
        assert!(((a / b).to_f64() + 0.6).abs() < 1e-12);
        assert!((a.add(b).to_f64() + 2.0).abs() < 1e-12);
        assert!(a.add(-a).is_zero());
        assert_eq!(LogSigned::from_f64(0.0).sign, 0);
        assert!((LogSigned::ZERO.add(a).to_f64() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn hyp2f1_small_cases() {
        assert!((hyp2f1_terminating(0.0, 2.0, 4.0, -1.0).unwrap().to_f64() - 1.0).abs() < 1e-15);
        assert!(
            (hyp2f1_terminating(-1.0, 2.0, 3.0, -1.0).unwrap().to_f64() - 5.0 / 3.0).abs() < 1e-15
        );
        assert_eq!(
            hyp2f1_terminating(-0.5, 2.0, 3.0, -1.0),
            Err(ManaError::NonTerminating(-0.5))
        );
        assert_eq!(
            hyp2f1_terminating(1.0, 2.0, 3.0, -1.0),
            Err(ManaError::NonTerminating(1.0))
        );
        assert_eq!(
            hyp2f1_terminating(-3.0, 2.0, -1.0, -1.0),
            Err(ManaError::HypergeometricPole(-1.0))
        );
        // c = −m is fine: the pole would appear only at term m+1
        assert!(hyp2f1_terminating(-2.0, 1.0, -2.0, 0.5).is_ok());
    }

    #[test]
    fn branches_agree() {
        for m in [5u64, 20, 30] {
            let lin = hyp2f1_linear(m, 7.0, 11.0, -1.0).unwrap();
            let rat = rational_to_log_signed(&hyp2f1_rational(m, 7.0, 11.0, -1.0)).to_f64();
            assert!((lin - rat).abs() / rat.abs() < 1e-13, "m={m}");
        }
    }

    #[test]
    fn big_rational_logs() {
        let huge = BigInt::from(3u32).pow(2000);
        let r = BigRational::new(huge, BigInt::from(7));
        let ls = rational_to_log_signed(&r);
        let target = 2000.0 * 3f64.ln() - 7f64.ln();
        assert!((ls.log_abs - target).abs() / target < 1e-14);
        assert_eq!(ls.sign, 1);
    }
}
