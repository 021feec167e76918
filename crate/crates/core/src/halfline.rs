//! Partial fractions in the normal covariable over Gaussian rationals, the
//! half-plane projections, and exact line integrals by residues.
//!
//! After sphere restriction every denominator is `(xi_n^2 + 1)^k`, so the
//! only poles are `xi_n = +-i`. The plus part (poles at `-i`) consists of the
//! functions extending holomorphically to the upper half-plane; `pi^+` keeps
//! exactly that part and annihilates constants, which is the convention the
//! projection-algebra and vanishing tests pin down.

use crate::error::{CoreError, Result};
use crate::exterior::ExtOp;
use crate::poly::PolyQ;
use crate::radial::SphereRational;
use crate::scalar::{rat_int, GaussRat};

/// Decomposition `c0 + sum_j plus[j-1]/(xi_n+i)^j + sum_j minus[j-1]/(xi_n-i)^j`
/// with matrix coefficients free of `xi_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfDecomp {
    n: usize,
    c0: ExtOp,
    plus: Vec<ExtOp>,
    minus: Vec<ExtOp>,
}

// dense univariate polynomials over GaussRat, little-endian
fn upoly_deriv(p: &[GaussRat]) -> Vec<GaussRat> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(e, &c)| c * GaussRat::from_int(e as i128))
        .collect()
}

fn upoly_eval(p: &[GaussRat], z: GaussRat) -> GaussRat {
    let mut acc = GaussRat::zero();
    for &c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn upoly_scale_shift(p: &[GaussRat], shift: GaussRat) -> Vec<GaussRat> {
    // p(z) * (z + shift)
    let mut out = vec![GaussRat::zero(); p.len() + 1];
    for (e, &c) in p.iter().enumerate() {
        out[e + 1] = out[e + 1] + c;
        out[e] = out[e] + c * shift;
    }
    out
}

fn upoly_sub(a: &[GaussRat], b: &[GaussRat]) -> Vec<GaussRat> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|e| {
            let x = a.get(e).copied().unwrap_or_else(GaussRat::zero);
            let y = b.get(e).copied().unwrap_or_else(GaussRat::zero);
            x - y
        })
        .collect()
}

/// Coefficients at one pole of order `k`: repeated differentiation of
/// `R(z)/(z - other_pole)^k` evaluated at the pole.
fn pole_coeffs(r: &[GaussRat], k: u32, pole: GaussRat, other: GaussRat) -> Vec<GaussRat> {
    let mut coeffs = vec![GaussRat::zero(); k as usize];
    let mut p = r.to_vec();
    let mut m = k as i128;
    let mut fact: i128 = 1;
    let gap = pole - other; // (pole - other) = value of (z - other) at the pole
    for t in 0..k {
        // current derivative is p(z)/(z-other)^m; evaluate at the pole
        let mut den = GaussRat::one();
        for _ in 0..m {
            den = den * gap;
        }
        if t > 0 {
            fact *= t as i128;
        }
        let j = (k - t) as usize; // order of the pole term this fixes
        coeffs[j - 1] = upoly_eval(&p, pole) / den / GaussRat::from_int(fact);
        // next derivative: p'(z)(z-other) - m p(z), order m+1
        let shifted = upoly_scale_shift(&upoly_deriv(&p), -other);
        let scaled: Vec<GaussRat> = p.iter().map(|&c| c * GaussRat::from_int(m)).collect();
        p = upoly_sub(&shifted, &scaled);
        m += 1;
    }
    coeffs
}

/// Exact two-pole decomposition of `xi_n^d / (xi_n^2+1)^k`.
/// Returns `(c0, plus, minus)` with scalar coefficients.
fn scalar_decomp(d: usize, k: u32) -> Result<(GaussRat, Vec<GaussRat>, Vec<GaussRat>)> {
    if d > 2 * k as usize {
        return Err(CoreError::UnboundedSymbol {
            degree: d,
            max: 2 * k as usize,
        });
    }
    if k == 0 {
        return Ok((GaussRat::one(), vec![], vec![]));
    }
    let c0 = if d == 2 * k as usize {
        GaussRat::one()
    } else {
        GaussRat::zero()
    };

    // R(z) = z^d - c0 (z^2+1)^k, proper of degree < 2k
    let mut r = vec![GaussRat::zero(); d + 1];
    r[d] = GaussRat::one();
    if !c0.is_zero() {
        // (z^2+1)^k by binomial expansion
        let mut den = vec![GaussRat::zero(); 2 * k as usize + 1];
        for t in 0..=k as i64 {
            den[2 * t as usize] = GaussRat::from_rat(rat_int(crate::traces::binom(k as i64, t)));
        }
        r = upoly_sub(&r, &den);
    }

    let i = GaussRat::i();
    let minus = pole_coeffs(&r, k, i, -i); // poles at +i
    let plus = pole_coeffs(&r, k, -i, i); // poles at -i
    Ok((c0, plus, minus))
}

impl HalfDecomp {
    pub fn zero(n: usize) -> HalfDecomp {
        HalfDecomp {
            n,
            c0: ExtOp::zero(n),
            plus: vec![],
            minus: vec![],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c0(&self) -> &ExtOp {
        &self.c0
    }

    pub fn plus_terms(&self) -> &[ExtOp] {
        &self.plus
    }

    pub fn minus_terms(&self) -> &[ExtOp] {
        &self.minus
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero()
            && self.plus.iter().all(|m| m.is_zero())
            && self.minus.iter().all(|m| m.is_zero())
    }

    fn trim(mut self) -> HalfDecomp {
        while self.plus.last().is_some_and(|m| m.is_zero()) {
            self.plus.pop();
        }
        while self.minus.last().is_some_and(|m| m.is_zero()) {
            self.minus.pop();
        }
        self
    }

    pub fn add(&self, other: &HalfDecomp) -> HalfDecomp {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let join = |a: &[ExtOp], b: &[ExtOp]| -> Vec<ExtOp> {
            let len = a.len().max(b.len());
            (0..len)
                .map(|j| {
                    let zero = ExtOp::zero(self.n);
                    let x = a.get(j).unwrap_or(&zero);
                    let y = b.get(j).unwrap_or(&zero);
                    x + y
                })
                .collect()
        };
        HalfDecomp {
            n: self.n,
            c0: &self.c0 + &other.c0,
            plus: join(&self.plus, &other.plus),
            minus: join(&self.minus, &other.minus),
        }
        .trim()
    }

    /// Projection onto the part holomorphic in the upper half-plane: keeps
    /// the `(xi_n + i)` poles, drops the constant term and the rest.
    pub fn pi_plus(&self) -> HalfDecomp {
        HalfDecomp {
            n: self.n,
            c0: ExtOp::zero(self.n),
            plus: self.plus.clone(),
            minus: vec![],
        }
    }

    /// Complement `id - pi^+`.
    pub fn pi_minus(&self) -> HalfDecomp {
        HalfDecomp {
            n: self.n,
            c0: self.c0.clone(),
            plus: vec![],
            minus: self.minus.clone(),
        }
    }

    /// Term-by-term derivative in `xi_n`; each pole order goes up by one and
    /// the constant term drops out.
    pub fn deriv_xin(&self) -> HalfDecomp {
        let bump = |terms: &[ExtOp]| -> Vec<ExtOp> {
            let mut out = vec![ExtOp::zero(self.n); terms.len() + 1];
            for (idx, t) in terms.iter().enumerate() {
                let j = (idx + 1) as i128;
                out[idx + 1] = t.scale_gauss(GaussRat::from_int(-j));
            }
            out
        };
        HalfDecomp {
            n: self.n,
            c0: ExtOp::zero(self.n),
            plus: bump(&self.plus),
            minus: bump(&self.minus),
        }
        .trim()
    }

    /// Recombine over the common denominator `(xi_n^2+1)^K`.
    pub fn recombine(&self) -> SphereRational {
        let kk = self.plus.len().max(self.minus.len()) as u32;
        let xin = PolyQ::var(crate::poly::Var::xi_n());
        let zp = &xin + &PolyQ::constant(GaussRat::i()); // xi_n + i
        let zm = &xin - &PolyQ::constant(GaussRat::i()); // xi_n - i
        let d = &zp * &zm; // xi_n^2 + 1

        let mut num = self.c0.scale_poly(&d.pow(kk));
        for (idx, t) in self.plus.iter().enumerate() {
            let j = (idx + 1) as u32;
            num = &num + &t.scale_poly(&(&zp.pow(kk - j) * &zm.pow(kk)));
        }
        for (idx, t) in self.minus.iter().enumerate() {
            let j = (idx + 1) as u32;
            num = &num + &t.scale_poly(&(&zm.pow(kk - j) * &zp.pow(kk)));
        }
        SphereRational::new(num, kk)
    }

    /// `integral over the real line d xi_n`, closing the contour in the upper
    /// half-plane. The value is `2 pi i A_1` with `A_1` the first-order
    /// coefficient at `+i`; the returned matrix is `2 i A_1`, the factor of
    /// `pi`.
    pub fn integrate_line(&self) -> Result<ExtOp> {
        if !self.c0.is_zero() {
            return Err(CoreError::DivergentIntegral(
                "constant term present; integrand does not decay".into(),
            ));
        }
        let zero = ExtOp::zero(self.n);
        let a1 = self.minus.first().unwrap_or(&zero);
        let b1 = self.plus.first().unwrap_or(&zero);
        if !(a1 + b1).is_zero() {
            return Err(CoreError::DivergentIntegral(
                "first-order tails do not cancel; integrand decays only like 1/xi_n".into(),
            ));
        }
        Ok(a1.scale_gauss(GaussRat::from_int(2) * GaussRat::i()))
    }
}

/// Exact partial-fraction decomposition of a sphere-restricted symbol.
/// Fails on symbols that grow in `xi_n`; verifies itself by recombination.
pub fn decompose(s: &SphereRational) -> Result<HalfDecomp> {
    let n = s.n();
    let dim = s.num().dim();
    let k = s.k();
    let mut out = HalfDecomp {
        n,
        c0: ExtOp::zero(n),
        plus: vec![ExtOp::zero(n); k as usize],
        minus: vec![ExtOp::zero(n); k as usize],
    };
    for r in 0..dim {
        for c in 0..dim {
            let entry = s.num().entry(r, c);
            if entry.is_zero() {
                continue;
            }
            for (d, coeff) in entry.xin_coeffs().into_iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (c0, plus, minus) = scalar_decomp(d, k)?;
                if !c0.is_zero() {
                    let cur = &out.c0.get(r, c) + &coeff.scale(c0);
                    out.c0.set(r, c, cur);
                }
                for (j, &g) in plus.iter().enumerate() {
                    if !g.is_zero() {
                        let cur = &out.plus[j].get(r, c) + &coeff.scale(g);
                        out.plus[j].set(r, c, cur);
                    }
                }
                for (j, &g) in minus.iter().enumerate() {
                    if !g.is_zero() {
                        let cur = &out.minus[j].get(r, c) + &coeff.scale(g);
                        out.minus[j].set(r, c, cur);
                    }
                }
            }
        }
    }
    let out = out.trim();
    if !out.recombine().eq_symbol(s) {
        return Err(CoreError::IdentityViolation(
            "partial-fraction recombination does not reproduce the input".into(),
        ));
    }
    Ok(out)
}
