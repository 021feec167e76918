//! Exact scalars: rationals and Gaussian rationals.
//!
//! Coefficients throughout the engine stay small (binomials, factorials and
//! residue algebra), so `Ratio<i128>` is plenty of headroom; overflow checks
//! are on in the test profile.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

pub fn rat_int(n: i128) -> Rat {
    Ratio::from_integer(n)
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Gaussian rational `re + im*i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i128) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    /// `(-i)^p`, the prefactor cycle of the residue sum.
    pub fn minus_i_pow(p: u32) -> Self {
        match p % 4 {
            0 => Self::one(),
            1 => GaussRat {
                re: Rat::zero(),
                im: rat_int(-1),
            },
            2 => Self::from_int(-1),
            _ => Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(&self) -> Rat {
        self.re * self.re + self.im * self.im
    }

    pub fn scale_rat(self, r: Rat) -> Self {
        GaussRat {
            re: self.re * r,
            im: self.im * r,
        }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero GaussRat");
        GaussRat {
            re: self.re / n,
            im: -self.im / n,
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        (rat_to_f64(self.re), rat_to_f64(self.im))
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: GaussRat) -> GaussRat {
        self * o.inv()
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squares_to_minus_one() {
        assert_eq!(GaussRat::i() * GaussRat::i(), GaussRat::from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussRat::new(rat(3, 4), rat(-2, 5));
        assert_eq!(z * z.inv(), GaussRat::one());
    }

    #[test]
    fn minus_i_cycle() {
        assert_eq!(GaussRat::minus_i_pow(3), GaussRat::i());
        assert_eq!(GaussRat::minus_i_pow(4), GaussRat::one());
        let mi = GaussRat::minus_i_pow(1);
        assert_eq!(mi * mi, GaussRat::from_int(-1));
    }
}
