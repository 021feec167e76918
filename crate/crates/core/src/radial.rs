//! Matrix-valued radial-rational symbols `N(xi) / |xi|^{2k}` and their
//! restriction to the unit tangential sphere.
//!
//! Denominators are powers of `|xi|^2` only; that covers every symbol in the
//! boundary expansion and keeps the normal-variable partial fractions
//! two-pole. The pipeline order is enforced by the types: cotangent
//! derivatives happen here, sphere restriction produces a [`SphereRational`],
//! and only those enter the half-line calculus.

use crate::error::{CoreError, Result};
use crate::exterior::ExtOp;
use crate::poly::{PolyQ, Var};
use crate::scalar::GaussRat;

/// `|xi|^2 = xi_1^2 + .. + xi_{n-1}^2 + xi_n^2`.
pub fn norm2_xi(n: usize) -> PolyQ {
    let mut acc = PolyQ::var_pow(Var::xi_n(), 2);
    for i in 1..n {
        acc = &acc + &PolyQ::var_pow(Var::xi(i), 2);
    }
    acc
}

/// `|xi'|^2`, the tangential part.
pub fn norm2_xi_prime(n: usize) -> PolyQ {
    let mut acc = PolyQ::zero();
    for i in 1..n {
        acc = &acc + &PolyQ::var_pow(Var::xi(i), 2);
    }
    acc
}

/// `N(xi) / |xi|^{2k}` with polynomial numerator, homogeneity tracked.
#[derive(Clone, Debug)]
pub struct RadialRational {
    num: ExtOp,
    k: u32,
    // xi-degree of the numerator minus 2k; None for the zero symbol
    hom: Option<i64>,
}

impl RadialRational {
    /// Validates that every numerator entry is xi-homogeneous of one common
    /// degree, and records the resulting symbol homogeneity.
    pub fn new(num: ExtOp, k: u32) -> Result<RadialRational> {
        let mut deg: Option<u32> = None;
        for r in 0..num.dim() {
            for c in 0..num.dim() {
                let e = num.entry(r, c);
                if e.is_zero() {
                    continue;
                }
                let (lo, hi) = e.xi_degree_range().expect("nonzero entry");
                if lo != hi {
                    return Err(CoreError::HomogeneityMismatch {
                        found: lo as i64,
                        other: hi as i64,
                    });
                }
                match deg {
                    None => deg = Some(lo),
                    Some(d) if d != lo => {
                        return Err(CoreError::HomogeneityMismatch {
                            found: d as i64,
                            other: lo as i64,
                        })
                    }
                    _ => {}
                }
            }
        }
        let hom = deg.map(|d| d as i64 - 2 * k as i64);
        Ok(RadialRational { num, k, hom })
    }

    pub fn zero(n: usize) -> RadialRational {
        RadialRational {
            num: ExtOp::zero(n),
            k: 0,
            hom: None,
        }
    }

    pub fn num(&self) -> &ExtOp {
        &self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn hom(&self) -> Option<i64> {
        self.hom
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn raise_k(&self, k: u32) -> ExtOp {
        assert!(k >= self.k);
        let mut num = self.num.clone();
        let n2 = norm2_xi(self.n());
        for _ in self.k..k {
            num = num.scale_poly(&n2);
        }
        num
    }

    pub fn add(&self, other: &RadialRational) -> Result<RadialRational> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.hom != other.hom {
            return Err(CoreError::HomogeneityMismatch {
                found: self.hom.unwrap_or(0),
                other: other.hom.unwrap_or(0),
            });
        }
        let k = self.k.max(other.k);
        RadialRational::new(&self.raise_k(k) + &other.raise_k(k), k)
    }

    pub fn sub(&self, other: &RadialRational) -> Result<RadialRational> {
        self.add(&other.scale_gauss(GaussRat::from_int(-1)))
    }

    pub fn mul(&self, other: &RadialRational) -> Result<RadialRational> {
        RadialRational::new(&self.num * &other.num, self.k + other.k)
    }

    pub fn scale_gauss(&self, c: GaussRat) -> RadialRational {
        RadialRational {
            num: self.num.scale_gauss(c),
            k: self.k,
            hom: if c.is_zero() { None } else { self.hom },
        }
    }

    /// Multiply by a xi-homogeneous polynomial (e.g. `h1 |xi'|^2`).
    pub fn scale_poly(&self, p: &PolyQ) -> Result<RadialRational> {
        RadialRational::new(self.num.scale_poly(p), self.k)
    }

    /// Exact quotient-rule derivative in a cotangent variable; homogeneity
    /// drops by one.
    pub fn deriv(&self, v: Var) -> RadialRational {
        assert!(v.is_xi_kind(), "derivative variable must be a xi variable");
        let n2 = norm2_xi(self.n());
        let dn2 = n2.deriv(v); // 2 xi_v
        let scale = dn2.scale(GaussRat::from_int(self.k as i128));
        let num = &self.num.map(|p| p.deriv(v)).scale_poly(&n2) - &self.num.scale_poly(&scale);
        RadialRational {
            num,
            k: self.k + 1,
            hom: self.hom.map(|h| h - 1),
        }
    }

    /// Restriction to the unit tangential sphere: `|xi'|^2 -> 1` in the
    /// denominator only, so `N / |xi|^{2k}` becomes `N / (xi_n^2 + 1)^k`.
    /// All cotangent derivatives must be applied beforehand; the types make
    /// the reverse order unrepresentable.
    pub fn restrict_sphere(&self) -> SphereRational {
        SphereRational {
            num: self.num.clone(),
            k: self.k,
        }
    }

    /// Exact equality of the rational symbols (cross-multiplied).
    pub fn eq_symbol(&self, other: &RadialRational) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let k = self.k.max(other.k);
        self.raise_k(k) == other.raise_k(k)
    }
}

/// `N(xi', xi_n) / (xi_n^2 + 1)^k`: a symbol restricted to the unit
/// tangential sphere. The denominator depends on `xi_n` alone.
#[derive(Clone, Debug)]
pub struct SphereRational {
    num: ExtOp,
    k: u32,
}

impl SphereRational {
    pub fn new(num: ExtOp, k: u32) -> SphereRational {
        SphereRational { num, k }
    }

    pub fn num(&self) -> &ExtOp {
        &self.num
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn denom_poly() -> PolyQ {
        &PolyQ::var_pow(Var::xi_n(), 2) + &PolyQ::one()
    }

    fn raise_k(&self, k: u32) -> ExtOp {
        assert!(k >= self.k);
        let mut num = self.num.clone();
        let d = Self::denom_poly();
        for _ in self.k..k {
            num = num.scale_poly(&d);
        }
        num
    }

    pub fn add(&self, other: &SphereRational) -> SphereRational {
        let k = self.k.max(other.k);
        SphereRational {
            num: &self.raise_k(k) + &other.raise_k(k),
            k,
        }
    }

    pub fn mul(&self, other: &SphereRational) -> SphereRational {
        SphereRational {
            num: &self.num * &other.num,
            k: self.k + other.k,
        }
    }

    pub fn scale_gauss(&self, c: GaussRat) -> SphereRational {
        SphereRational {
            num: self.num.scale_gauss(c),
            k: self.k,
        }
    }

    /// `trace_{deg m}(self * other)` as a scalar sphere-rational
    /// (a dimension-zero matrix).
    pub fn trace_product(&self, other: &SphereRational, m: usize) -> Result<SphereRational> {
        let tr = self.num.trace_product(&other.num, m)?;
        let mut num = ExtOp::zero(0);
        num.set(0, 0, tr);
        Ok(SphereRational {
            num,
            k: self.k + other.k,
        })
    }

    /// Quotient-rule derivative in `xi_n`.
    pub fn deriv_xin(&self) -> SphereRational {
        let v = Var::xi_n();
        let d = Self::denom_poly();
        let scale = PolyQ::var(v).scale(GaussRat::from_int(2 * self.k as i128));
        let num = &self.num.map(|p| p.deriv(v)).scale_poly(&d) - &self.num.scale_poly(&scale);
        SphereRational { num, k: self.k + 1 }
    }

    /// Rename the tangential variables `xi_i -> eta_i`, producing the same
    /// symbol written on the eta-sphere. The normal variable is shared.
    pub fn rename_tangential_to_eta(&self) -> SphereRational {
        SphereRational {
            num: self.num.map(|p| {
                let mut q = p.clone();
                for i in 1..=crate::poly::MAX_TANGENTIAL {
                    q = q.rename(Var::xi(i), Var::eta(i));
                }
                q
            }),
            k: self.k,
        }
    }

    pub fn eq_symbol(&self, other: &SphereRational) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let k = self.k.max(other.k);
        self.raise_k(k) == other.raise_k(k)
    }
}
