//! Sparse multivariate polynomials over Gaussian rationals.
//!
//! One fixed variable universe covers every computation in the engine:
//! tangential cotangent components `xi_1..xi_5`, the normal component `xi_n`,
//! a second covector family `eta_*` for bilinear trace identities, the metric
//! jet `h1`, and four generic formal covectors used by brute-force trace fits
//! in dimensions up to six.

use crate::scalar::{GaussRat, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const XI_TAN: u8 = 0; // 5 slots
const XI_N: u8 = 5;
const ETA_TAN: u8 = 6; // 5 slots
const ETA_N: u8 = 11;
const H1: u8 = 12;
const FORMAL: u8 = 13; // 4 covectors * 6 components

pub const N_VARS: usize = 37;
pub const MAX_TANGENTIAL: usize = 5;
const MAX_TAN: usize = MAX_TANGENTIAL;
const MAX_FORMAL_DIM: usize = 6;

/// A variable of the ambient polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u8);

impl Var {
    /// Tangential component `xi_i`, 1-based.
    pub fn xi(i: usize) -> Var {
        assert!((1..=MAX_TAN).contains(&i), "tangential index {i}");
        Var(XI_TAN + (i - 1) as u8)
    }

    pub fn xi_n() -> Var {
        Var(XI_N)
    }

    pub fn eta(i: usize) -> Var {
        assert!((1..=MAX_TAN).contains(&i), "tangential index {i}");
        Var(ETA_TAN + (i - 1) as u8)
    }

    pub fn eta_n() -> Var {
        Var(ETA_N)
    }

    pub fn h1() -> Var {
        Var(H1)
    }

    /// Component `comp` (1-based) of formal covector `vec` (0-based, < 4).
    pub fn formal(vec: usize, comp: usize) -> Var {
        assert!(vec < 4 && (1..=MAX_FORMAL_DIM).contains(&comp));
        Var(FORMAL + (vec * MAX_FORMAL_DIM) as u8 + (comp - 1) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// True for the cotangent variables `xi_*` and `xi_n` that carry the
    /// radial homogeneity weight.
    pub fn is_xi_kind(self) -> bool {
        self.0 <= XI_N
    }

    pub fn is_h1(self) -> bool {
        self.0 == H1
    }

    fn from_index(i: usize) -> Var {
        Var(i as u8)
    }

    pub fn name(self) -> String {
        match self.0 {
            XI_TAN..XI_N => format!("xi{}", self.0 - XI_TAN + 1),
            XI_N => "xin".to_string(),
            ETA_TAN..ETA_N => format!("eta{}", self.0 - ETA_TAN + 1),
            ETA_N => "etan".to_string(),
            H1 => "h1".to_string(),
            _ => {
                let off = (self.0 - FORMAL) as usize;
                let names = ["a", "b", "c", "d"];
                format!(
                    "{}{}",
                    names[off / MAX_FORMAL_DIM],
                    off % MAX_FORMAL_DIM + 1
                )
            }
        }
    }
}

/// Exponent vector over the fixed variable universe.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono([u8; N_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; N_VARS])
    }

    pub fn var(v: Var, e: u8) -> Mono {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v.index()]
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = [0u8; N_VARS];
        for (slot, (a, b)) in r.iter_mut().zip(self.0.iter().zip(&o.0)) {
            *slot = a.checked_add(*b).expect("exponent overflow");
        }
        Mono(r)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree counted over the `xi`-kind variables only.
    pub fn xi_degree(&self) -> u32 {
        self.0[..=XI_N as usize].iter().map(|&e| e as u32).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::from_index(i), e))
    }
}

/// Sparse polynomial in canonical form: sorted monomials, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolyQ {
    terms: BTreeMap<Mono, GaussRat>,
}

impl PolyQ {
    pub fn zero() -> PolyQ {
        PolyQ {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: GaussRat) -> PolyQ {
        let mut p = PolyQ::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn one() -> PolyQ {
        Self::constant(GaussRat::one())
    }

    pub fn from_rat(r: Rat) -> PolyQ {
        Self::constant(GaussRat::from_rat(r))
    }

    pub fn int(n: i128) -> PolyQ {
        Self::constant(GaussRat::from_int(n))
    }

    pub fn var(v: Var) -> PolyQ {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u8) -> PolyQ {
        let mut p = PolyQ::zero();
        p.terms.insert(Mono::var(v, e), GaussRat::one());
        p
    }

    pub fn monomial(m: Mono, c: GaussRat) -> PolyQ {
        let mut p = PolyQ::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> GaussRat {
        self.terms.get(m).copied().unwrap_or_else(GaussRat::zero)
    }

    fn insert(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: GaussRat) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ {
            terms: self.terms.iter().map(|(m, &v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> PolyQ {
        let mut acc = PolyQ::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn deriv(&self, v: Var) -> PolyQ {
        let mut out = PolyQ::zero();
        for (m, &c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut arr = m.0;
            arr[v.index()] = e - 1;
            out.insert(Mono(arr), c * GaussRat::from_int(e as i128));
        }
        out
    }

    /// Substitute zero for a variable.
    pub fn subst_zero(&self, v: Var) -> PolyQ {
        PolyQ {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == 0)
                .map(|(m, &c)| (*m, c))
                .collect(),
        }
    }

    /// Substitute a rational value for a variable.
    pub fn subst_rat(&self, v: Var, val: Rat) -> PolyQ {
        let g = GaussRat::from_rat(val);
        let mut out = PolyQ::zero();
        for (m, &c) in &self.terms {
            let e = m.exp(v);
            let mut arr = m.0;
            arr[v.index()] = 0;
            let mut f = c;
            for _ in 0..e {
                f = f * g;
            }
            out.insert(Mono(arr), f);
        }
        out
    }

    /// Move every exponent of `from` onto `to`.
    pub fn rename(&self, from: Var, to: Var) -> PolyQ {
        let mut out = PolyQ::zero();
        for (m, &c) in &self.terms {
            let e = m.exp(from);
            let mut arr = m.0;
            arr[from.index()] = 0;
            arr[to.index()] = arr[to.index()].checked_add(e).expect("exponent overflow");
            out.insert(Mono(arr), c);
        }
        out
    }

    /// Coefficients as a dense profile in `xi_n`, the variable stripped.
    pub fn xin_coeffs(&self) -> Vec<PolyQ> {
        let v = Var::xi_n();
        let top = self
            .terms
            .keys()
            .map(|m| m.exp(v) as usize)
            .max()
            .unwrap_or(0);
        let mut out = vec![PolyQ::zero(); top + 1];
        for (m, &c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut arr = m.0;
            arr[v.index()] = 0;
            out[e].insert(Mono(arr), c);
        }
        out
    }

    /// `(min, max)` degree over `xi`-kind variables, `None` if zero.
    pub fn xi_degree_range(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| m.xi_degree());
        let first = it.next()?;
        let mut lo = first;
        let mut hi = first;
        for d in it {
            lo = lo.min(d);
            hi = hi.max(d);
        }
        Some((lo, hi))
    }

    pub fn max_degree_in(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.vars()
                    .filter(|(v, _)| pred(*v))
                    .map(|(_, e)| e as u32)
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }

    /// First variable used that fails the predicate.
    pub fn find_var_outside(&self, allowed: impl Fn(Var) -> bool) -> Option<Var> {
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                if !allowed(v) {
                    return Some(v);
                }
            }
        }
        None
    }

    pub fn eval_gauss(&self, assign: impl Fn(Var) -> GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for (v, e) in m.vars() {
                let val = assign(v);
                for _ in 0..e {
                    t = t * val;
                }
            }
            acc = acc + t;
        }
        acc
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, o: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (m, &c) in &o.terms {
            out.insert(*m, c);
        }
        out
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, o: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (m, &c) in &o.terms {
            out.insert(*m, -c);
        }
        out
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, o: &PolyQ) -> PolyQ {
        let mut out = PolyQ::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &o.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ {
            terms: self.terms.iter().map(|(m, &c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (v, e) in m.vars() {
                if e == 1 {
                    write!(f, "*{}", v.name())?;
                } else {
                    write!(f, "*{}^{}", v.name(), e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x() -> PolyQ {
        PolyQ::var(Var::xi(1))
    }

    fn y() -> PolyQ {
        PolyQ::var(Var::xi(2))
    }

    #[test]
    fn ring_smoke() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let q = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, q);
    }

    #[test]
    fn deriv_product_rule() {
        let p = &x() * &(&x() * &y());
        assert_eq!(
            p.deriv(Var::xi(1)),
            (&x() * &y()).scale(GaussRat::from_int(2))
        );
    }

    #[test]
    fn subst_and_rename() {
        let p = &(&x() * &y()) + &PolyQ::var(Var::xi_n());
        assert_eq!(p.subst_zero(Var::xi_n()), &x() * &y());
        let r = p.rename(Var::xi(1), Var::eta(1));
        assert_eq!(
            r,
            &(&PolyQ::var(Var::eta(1)) * &y()) + &PolyQ::var(Var::xi_n())
        );
    }

    #[test]
    fn xin_profile() {
        let p = &(&x() * &PolyQ::var_pow(Var::xi_n(), 2)) + &y();
        let prof = p.xin_coeffs();
        assert_eq!(prof.len(), 3);
        assert_eq!(prof[0], y());
        assert!(prof[1].is_zero());
        assert_eq!(prof[2], x());
    }

    #[test]
    fn degree_bookkeeping() {
        let p = &(&x() * &x()) * &PolyQ::var(Var::h1());
        assert_eq!(p.xi_degree_range(), Some((2, 2)));
        assert_eq!(p.max_degree_in(|v| v.is_h1()), 1);
    }

    #[test]
    fn rational_coefficients_survive() {
        let p = PolyQ::from_rat(rat(2, 3)).scale(GaussRat::from_rat(rat(3, 2)));
        assert_eq!(p, PolyQ::one());
    }
}
