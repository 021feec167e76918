//! Exact integration of polynomials over the unit sphere, as rational
//! multiples of powers of pi.
//!
//! Monomials with any odd exponent vanish by symmetry; even monomials reduce
//! to ratios of half-integer Gamma values, which stay inside the rationals
//! times an integer power of pi. Final engine scalars live in
//! `q * pi^j * h1^e`; sums that mix buckets are kept per `(pi, h1)` pair.

use crate::error::{CoreError, Result};
use crate::poly::{PolyQ, Var};
use crate::scalar::{rat_int, rat_to_f64, GaussRat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Exact value `q * pi^pi_pow * h1^h1_pow`, canonical at zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExactScalar {
    pub q: Rat,
    pub pi_pow: i32,
    pub h1_pow: i32,
}

impl ExactScalar {
    pub fn new(q: Rat, pi_pow: i32, h1_pow: i32) -> ExactScalar {
        if q.is_zero() {
            ExactScalar::zero()
        } else {
            ExactScalar { q, pi_pow, h1_pow }
        }
    }

    pub fn zero() -> ExactScalar {
        ExactScalar {
            q: Rat::zero(),
            pi_pow: 0,
            h1_pow: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_f64_at(&self, h1: f64) -> f64 {
        rat_to_f64(self.q) * std::f64::consts::PI.powi(self.pi_pow) * h1.powi(self.h1_pow)
    }
}

impl fmt::Display for ExactScalar {
    /// Lossless `±p/q · pi^k · h1^e` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sign = if self.q < Rat::zero() { "-" } else { "+" };
        let abs = if self.q < Rat::zero() {
            -self.q
        } else {
            self.q
        };
        write!(
            f,
            "{sign}{}/{} · pi^{} · h1^{}",
            abs.numer(),
            abs.denom(),
            self.pi_pow,
            self.h1_pow
        )
    }
}

/// A finite sum of [`ExactScalar`] values, bucketed by `(pi_pow, h1_pow)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExactSum {
    buckets: BTreeMap<(i32, i32), Rat>,
}

impl ExactSum {
    pub fn zero() -> ExactSum {
        ExactSum::default()
    }

    pub fn from_scalar(s: ExactScalar) -> ExactSum {
        let mut out = ExactSum::zero();
        out.insert(s.pi_pow, s.h1_pow, s.q);
        out
    }

    fn insert(&mut self, pi: i32, h1: i32, q: Rat) {
        if q.is_zero() {
            return;
        }
        let e = self.buckets.entry((pi, h1)).or_insert_with(Rat::zero);
        *e += q;
        if e.is_zero() {
            self.buckets.remove(&(pi, h1));
        }
    }

    pub fn add(&self, other: &ExactSum) -> ExactSum {
        let mut out = self.clone();
        for (&(pi, h1), &q) in &other.buckets {
            out.insert(pi, h1, q);
        }
        out
    }

    pub fn scale(&self, c: Rat) -> ExactSum {
        if c.is_zero() {
            return ExactSum::zero();
        }
        ExactSum {
            buckets: self.buckets.iter().map(|(&k, &q)| (k, q * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, Rat)> + '_ {
        self.buckets.iter().map(|(&(pi, h1), &q)| (pi, h1, q))
    }

    /// The single scalar this sum collapses to, if it has at most one bucket.
    pub fn as_single(&self) -> Option<ExactScalar> {
        match self.buckets.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (&(pi, h1), &q) = self.buckets.iter().next().unwrap();
                Some(ExactScalar::new(q, pi, h1))
            }
            _ => None,
        }
    }

    pub fn h1_linear(&self) -> bool {
        self.buckets.keys().all(|&(_, h1)| h1 == 1)
    }

    pub fn all_pi_pow(&self, pi: i32) -> bool {
        self.buckets.keys().all(|&(p, _)| p == pi)
    }

    /// Substitute a rational for `h1`, folding its power into the rational.
    pub fn eval_h1(&self, h1: Rat) -> ExactSum {
        let mut out = ExactSum::zero();
        for (&(pi, e), &q) in &self.buckets {
            let mut f = q;
            for _ in 0..e {
                f *= h1;
            }
            if e < 0 {
                panic!("negative h1 power");
            }
            out.insert(pi, 0, f);
        }
        out
    }

    pub fn to_f64_at(&self, h1: f64) -> f64 {
        self.buckets
            .iter()
            .map(|(&(pi, e), &q)| rat_to_f64(q) * std::f64::consts::PI.powi(pi) * h1.powi(e))
            .sum()
    }
}

impl fmt::Display for ExactSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(pi, h1), &q) in &self.buckets {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", ExactScalar::new(q, pi, h1))?;
        }
        Ok(())
    }
}

/// Bucketed sum with Gaussian-rational coefficients; the engine realifies at
/// the very end and treats a surviving imaginary part as an error.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussSum {
    buckets: BTreeMap<(i32, i32), GaussRat>,
}

impl GaussSum {
    pub fn zero() -> GaussSum {
        GaussSum::default()
    }

    fn insert(&mut self, pi: i32, h1: i32, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.buckets.entry((pi, h1)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &GaussSum) -> GaussSum {
        let mut out = self.clone();
        for (&(pi, h1), &c) in &other.buckets {
            out.insert(pi, h1, c);
        }
        out
    }

    pub fn scale(&self, c: GaussRat) -> GaussSum {
        if c.is_zero() {
            return GaussSum::zero();
        }
        GaussSum {
            buckets: self.buckets.iter().map(|(&k, &v)| (k, v * c)).collect(),
        }
    }

    /// Shift every bucket's pi power, e.g. by the pi of a line integral.
    pub fn bump_pi(&self, by: i32) -> GaussSum {
        GaussSum {
            buckets: self
                .buckets
                .iter()
                .map(|(&(pi, h1), &v)| ((pi + by, h1), v))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn realify(&self, context: &str) -> Result<ExactSum> {
        let mut out = ExactSum::zero();
        for (&(pi, h1), &c) in &self.buckets {
            if !c.is_real() {
                return Err(CoreError::ResidualImaginary(context.to_string()));
            }
            out.insert(pi, h1, c.re);
        }
        Ok(out)
    }
}

fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// `Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)`, rational part only.
fn gamma_half(m: u32) -> Rat {
    Rat::new(factorial(2 * m), 4i128.pow(m) * factorial(m))
}

/// Exact sphere integral of a monomial `prod xi_i^{alpha_i}` over `S^{d-1}`.
pub fn integrate_monomial(alpha: &[u32], d: usize) -> Result<ExactScalar> {
    if d < 2 {
        return Err(CoreError::DimensionMismatch {
            expected: 2,
            got: d,
        });
    }
    if alpha.len() != d {
        return Err(CoreError::DimensionMismatch {
            expected: d,
            got: alpha.len(),
        });
    }
    if alpha.iter().any(|&a| a % 2 == 1) {
        return Ok(ExactScalar::zero());
    }
    let halves: Vec<u32> = alpha.iter().map(|&a| a / 2).collect();
    let m: u32 = halves.iter().sum();

    // 2 * prod Gamma((alpha_i+1)/2) / Gamma(sum), sqrt(pi) factors counted
    // separately: d of them upstairs, one downstairs when d is odd.
    let mut q = rat_int(2);
    for &mi in &halves {
        q *= gamma_half(mi);
    }
    let (den, pi_pow) = if d % 2 == 0 {
        // Gamma(m + d/2) with integer argument
        (rat_int(factorial(m + d as u32 / 2 - 1)), (d / 2) as i32)
    } else {
        // Gamma(m + d/2) is half-integer: one sqrt(pi) cancels
        (gamma_half(m + (d as u32 - 1) / 2), ((d - 1) / 2) as i32)
    };
    Ok(ExactScalar::new(q / den, pi_pow, 0))
}

/// Monomial-wise sphere integral of a polynomial in the tangential variables
/// `xi_1..xi_d`; `h1` passes through as a formal coefficient, anything else
/// is a stray variable.
pub fn integrate_poly(p: &PolyQ, d: usize) -> Result<GaussSum> {
    let mut out = GaussSum::zero();
    for (mono, &coeff) in p.terms() {
        let mut alpha = vec![0u32; d];
        let mut h1 = 0i32;
        for (v, e) in mono.vars() {
            if v.is_h1() {
                h1 = e as i32;
            } else {
                let mut placed = false;
                for (i, slot) in alpha.iter_mut().enumerate() {
                    if v == Var::xi(i + 1) {
                        *slot = e as u32;
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    return Err(CoreError::StrayVariable {
                        var: v.name(),
                        context: "sphere integrand".into(),
                    });
                }
            }
        }
        let val = integrate_monomial(&alpha, d)?;
        if !val.is_zero() {
            out.insert(val.pi_pow, h1, coeff.scale_rat(val.q));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s2(alpha: [u32; 3]) -> ExactScalar {
        integrate_monomial(&alpha, 3).unwrap()
    }

    #[test]
    fn area_and_moments() {
        assert_eq!(s2([0, 0, 0]), ExactScalar::new(rat_int(4), 1, 0));
        assert_eq!(s2([2, 0, 0]), ExactScalar::new(rat(4, 3), 1, 0));
        assert_eq!(s2([2, 2, 0]), ExactScalar::new(rat(4, 15), 1, 0));
        assert_eq!(s2([1, 0, 0]), ExactScalar::zero());
        assert_eq!(s2([1, 1, 0]), ExactScalar::zero());
    }

    #[test]
    fn norm_consistency() {
        // integral of (|xi'|^2)^k equals the area for every k
        use crate::radial::norm2_xi_prime;
        let area = ExactScalar::new(rat_int(4), 1, 0);
        for k in 1..=4u32 {
            let p = norm2_xi_prime(4).pow(k);
            let got = integrate_poly(&p, 3).unwrap();
            let want = {
                let mut g = GaussSum::zero();
                g.insert(area.pi_pow, 0, GaussRat::from_rat(area.q));
                g
            };
            assert_eq!(got, want, "k = {k}");
        }
    }

    #[test]
    fn rotational_invariance_formal() {
        // integral of <u, xi'>^2 = (4 pi / 3) |u|^2 for formal u
        use crate::exterior::Covector;
        let u = Covector::formal(3, 0);
        let xi3 = Covector::from_components(vec![
            PolyQ::var(Var::xi(1)),
            PolyQ::var(Var::xi(2)),
            PolyQ::var(Var::xi(3)),
        ]);
        let ip = u.inner(&xi3).unwrap();
        let sq = &ip * &ip;
        // integrate in xi only: coefficients carry the formal u-monomials, so
        // check coefficient-wise via integrate_monomial
        let mut acc = PolyQ::zero();
        for (mono, &c) in sq.terms() {
            let mut alpha = [0u32; 3];
            let mut rest = crate::poly::Mono::one();
            for (v, e) in mono.vars() {
                let mut tangential = false;
                for (i, a) in alpha.iter_mut().enumerate() {
                    if v == Var::xi(i + 1) {
                        *a = e as u32;
                        tangential = true;
                    }
                }
                if !tangential {
                    rest = rest.mul(&crate::poly::Mono::var(v, e));
                }
            }
            let val = integrate_monomial(&alpha, 3).unwrap();
            acc = &acc + &PolyQ::monomial(rest, c.scale_rat(val.q));
        }
        let want = u.norm_sq().scale(GaussRat::from_rat(rat(4, 3)));
        assert_eq!(acc, want);
    }

    #[test]
    fn h1_passes_through() {
        let p = (&PolyQ::var(Var::h1()) * &PolyQ::var_pow(Var::xi(1), 2)).clone();
        let got = integrate_poly(&p, 3).unwrap();
        let mut want = GaussSum::zero();
        want.insert(1, 1, GaussRat::from_rat(rat(4, 3)));
        assert_eq!(got, want);
    }

    #[test]
    fn stray_variables_rejected() {
        let p = PolyQ::var(Var::xi_n());
        assert!(matches!(
            integrate_poly(&p, 3),
            Err(CoreError::StrayVariable { .. })
        ));
        let q = PolyQ::var(Var::eta(1));
        assert!(integrate_poly(&q, 3).is_err());
    }

    #[test]
    fn other_dimensions() {
        // S^1: circumference 2 pi, integral of cos^2 = pi
        assert_eq!(
            integrate_monomial(&[0, 0], 2).unwrap(),
            ExactScalar::new(rat_int(2), 1, 0)
        );
        assert_eq!(
            integrate_monomial(&[2, 0], 2).unwrap(),
            ExactScalar::new(rat_int(1), 1, 0)
        );
        // S^3: area 2 pi^2
        assert_eq!(
            integrate_monomial(&[0, 0, 0, 0], 4).unwrap(),
            ExactScalar::new(rat_int(2), 2, 0)
        );
        // S^4: area 8 pi^2 / 3
        assert_eq!(
            integrate_monomial(&[0; 5], 5).unwrap(),
            ExactScalar::new(rat(8, 3), 2, 0)
        );
    }
}
