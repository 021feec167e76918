//! Exterior-algebra trace functions: the four-covector traces `a_m`, the
//! alternating binomial constants, and the closed-form coefficients of the
//! degree-m trace of `p(xi) p(eta)` cross-checked against brute force.

use crate::error::{CoreError, Result};
use crate::exterior::{basis, Covector, FormBasis};
use crate::poly::{Mono, PolyQ, Var};
use crate::scalar::{rat_int, GaussRat, Rat};

pub fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let mut r: i128 = 1;
    for t in 0..k {
        r = r * (n - t) as i128 / (t + 1) as i128;
    }
    r
}

/// `A_{n,m} = C(n,m) - C(n,m-1) + .. + (-1)^m C(n,0)`.
pub fn alternating_coeff(n: usize, m: usize) -> Rat {
    let mut acc: i128 = 0;
    for t in 0..=m {
        let sign = if (m - t) % 2 == 0 { 1 } else { -1 };
        acc += sign * binom(n as i64, t as i64);
    }
    rat_int(acc)
}

/// `trace_{deg m}[ eps(x1) iota(x2) eps(y1) iota(y2) ]` as an exact
/// polynomial in the formal components.
pub fn a_m_trace(
    b: &FormBasis,
    m: usize,
    x1: &Covector,
    x2: &Covector,
    y1: &Covector,
    y2: &Covector,
) -> Result<PolyQ> {
    if m == 0 || m > b.n() {
        return Err(CoreError::DegreeOutOfRange {
            degree: m,
            n: b.n(),
        });
    }
    let left = &b.wedge_op(x1)? * &b.contract_op(x2)?;
    let right = &b.wedge_op(y1)? * &b.contract_op(y2)?;
    left.trace_product(&right, m)
}

/// Coefficients of `trace_{deg m}[p(xi) p(eta)] = a <xi,eta>^2 + b |xi|^2 |eta|^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceConstants {
    pub n: usize,
    pub m: usize,
    pub a: Rat,
    pub b: Rat,
}

/// Closed-form constants, verified against the brute-force trace with fully
/// formal covectors. A mismatch is an implementation bug, reported as an
/// identity violation.
pub fn pq_constants(n: usize, m: usize) -> Result<TraceConstants> {
    if m > n {
        return Err(CoreError::DegreeOutOfRange { degree: m, n });
    }
    let nn = n as i64;
    let mm = m as i64;
    let b_formula = rat_int(binom(nn - 2, mm - 2) + binom(nn - 2, mm) - 2 * binom(nn - 2, mm - 1));
    let a_formula = rat_int(binom(nn, mm)) - b_formula;

    // brute force over formal covectors
    let fb = FormBasis::new(n);
    let x = Covector::formal(n, 0);
    let y = Covector::formal(n, 1);
    let trace = fb.p_op(&x)?.trace_product(&fb.p_op(&y)?, m)?;

    let ip = x.inner(&y)?;
    let q1 = &ip * &ip;
    let q2 = &x.norm_sq() * &y.norm_sq();

    // <x,y>^2 has coefficient 2 on x1 x2 y1 y2 and 0 on x1^2 y2^2;
    // |x|^2 |y|^2 the other way around, so two coefficients pin (a, b).
    let cross = Mono::var(Var::formal(0, 1), 1)
        .mul(&Mono::var(Var::formal(0, 2), 1))
        .mul(&Mono::var(Var::formal(1, 1), 1))
        .mul(&Mono::var(Var::formal(1, 2), 1));
    let square = Mono::var(Var::formal(0, 1), 2).mul(&Mono::var(Var::formal(1, 2), 2));

    let a_fit = trace.coeff(&cross) * GaussRat::from_rat(Rat::new(1, 2));
    let b_fit = trace.coeff(&square);
    if !a_fit.is_real() || !b_fit.is_real() {
        return Err(CoreError::IdentityViolation(format!(
            "complex trace coefficients for n={n}, m={m}"
        )));
    }

    let residue = &(&trace - &q1.scale(a_fit)) - &q2.scale(b_fit);
    if !residue.is_zero() {
        return Err(CoreError::IdentityViolation(format!(
            "trace of p(xi)p(eta) is not of the two-invariant form for n={n}, m={m}"
        )));
    }
    if a_fit.re != a_formula || b_fit.re != b_formula {
        return Err(CoreError::IdentityViolation(format!(
            "closed-form (a,b)=({a_formula},{b_formula}) disagrees with brute force ({},{}) for n={n}, m={m}",
            a_fit.re, b_fit.re
        )));
    }

    Ok(TraceConstants {
        n,
        m,
        a: a_formula,
        b: b_formula,
    })
}

/// Checks the argument-swapped recursion
/// `a_{m+1}(y1,x2,x1,y2) = a_m(x1,x2,y1,y2) + <x1,x2><y1,y2>(2 A_{n,m} - C(n,m))`
/// exactly in formal covectors.
pub fn recursion_check(n: usize, m: usize) -> Result<()> {
    let fb = FormBasis::new(n);
    let x1 = Covector::formal(n, 0);
    let x2 = Covector::formal(n, 1);
    let y1 = Covector::formal(n, 2);
    let y2 = Covector::formal(n, 3);

    let lhs = a_m_trace(&fb, m + 1, &y1, &x2, &x1, &y2)?;
    let base = a_m_trace(&fb, m, &x1, &x2, &y1, &y2)?;
    let coeff = rat_int(2) * alternating_coeff(n, m) - rat_int(binom(n as i64, m as i64));
    let extra = (&x1.inner(&x2)? * &y1.inner(&y2)?).scale(GaussRat::from_rat(coeff));
    if lhs != &base + &extra {
        return Err(CoreError::IdentityViolation(format!(
            "a_m recursion failed for n={n}, m={m}"
        )));
    }
    Ok(())
}

/// Outcome of the full non-product trace identity at n = 4, degree 2:
/// `trace[(d/dx_n p(xi)) p(eta)] = h1 (a<xi',eta'>^2 + b|xi'|^2|eta|^2) + 8 h1 xi_n eta_n <xi',eta'>`.
#[derive(Clone, Debug)]
pub struct JetTraceOutcome {
    pub constants: TraceConstants,
    pub trace: PolyQ,
    pub cross_coefficient: Rat,
}

pub fn normal_jet_trace_identity() -> Result<JetTraceOutcome> {
    let n = 4;
    let b = basis(n);
    let xi = Covector::xi(n);
    let xi_p = Covector::xi_prime(n);
    let eta = Covector::eta(n);
    let eta_p = Covector::eta_prime(n);
    let h1 = PolyQ::var(Var::h1());

    // normal jet of p(xi) at the base point: h1 [eps(xi) iota(xi') - iota(xi') eps(xi)]
    let e_xi = b.wedge_op(&xi)?;
    let i_xip = b.contract_op(&xi_p)?;
    let jet_p = (&(&e_xi * &i_xip) - &(&i_xip * &e_xi)).scale_poly(&h1);

    // split jet_p = h1 p(xi',0) + xi_n B with B = h1 [eps(dx_n) iota(xi') - iota(xi') eps(dx_n)]
    let e_n = b.wedge_basis(n)?;
    let bb = (&(&e_n * &i_xip) - &(&i_xip * &e_n)).scale_poly(&h1);
    let split = &b.p_op(&xi_p)?.scale_poly(&h1) + &bb.scale_poly(&PolyQ::var(Var::xi_n()));
    if jet_p != split {
        return Err(CoreError::IdentityViolation(
            "normal jet of p does not split as h1 p(xi',0) + xi_n B".into(),
        ));
    }
    // B collapses to 2 h1 eps(dx_n) iota(xi') since <dx_n, xi'> = 0
    let collapsed = (&e_n * &i_xip)
        .scale_poly(&h1)
        .scale_gauss(GaussRat::from_int(2));
    if bb != collapsed {
        return Err(CoreError::IdentityViolation(
            "eps(dx_n) iota(xi') - iota(xi') eps(dx_n) != 2 eps(dx_n) iota(xi')".into(),
        ));
    }

    let constants = pq_constants(n, 2)?;
    let trace = jet_p.trace_product(&b.p_op(&eta)?, 2)?;

    let ip = xi_p.inner(&eta_p)?;
    let mut rhs = (&ip * &ip).scale(GaussRat::from_rat(constants.a));
    rhs = &rhs + &(&xi_p.norm_sq() * &eta.norm_sq()).scale(GaussRat::from_rat(constants.b));
    let cross = (&(&PolyQ::var(Var::xi_n()) * &PolyQ::var(Var::eta_n())) * &ip)
        .scale(GaussRat::from_int(8));
    rhs = &(&rhs + &cross) * &h1;
    if trace != rhs {
        return Err(CoreError::IdentityViolation(
            "trace[(d/dx_n p(xi)) p(eta)] does not match the two-invariant form plus cross term"
                .into(),
        ));
    }

    // coefficient of h1 xi_n eta_n xi_1 eta_1 is exactly 8
    let mono = Mono::var(Var::h1(), 1)
        .mul(&Mono::var(Var::xi_n(), 1))
        .mul(&Mono::var(Var::eta_n(), 1))
        .mul(&Mono::var(Var::xi(1), 1))
        .mul(&Mono::var(Var::eta(1), 1));
    let cross_coefficient = trace.coeff(&mono);
    if cross_coefficient != GaussRat::from_int(8) {
        return Err(CoreError::IdentityViolation(format!(
            "cross-term coefficient is {cross_coefficient}, expected 8"
        )));
    }

    Ok(JetTraceOutcome {
        constants,
        trace,
        cross_coefficient: cross_coefficient.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_values() {
        assert_eq!(alternating_coeff(4, 0), rat_int(1));
        assert_eq!(alternating_coeff(4, 1), rat_int(3));
        assert_eq!(alternating_coeff(4, 2), rat_int(3));
    }

    #[test]
    fn a1_closed_form() {
        let n = 4;
        let fb = FormBasis::new(n);
        let x1 = Covector::formal(n, 0);
        let x2 = Covector::formal(n, 1);
        let y1 = Covector::formal(n, 2);
        let y2 = Covector::formal(n, 3);
        let got = a_m_trace(&fb, 1, &x1, &x2, &y1, &y2).unwrap();
        let want = &y2.inner(&x1).unwrap() * &x2.inner(&y1).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn recursion_holds_n4_n5() {
        for n in [4usize, 5] {
            for m in 1..=3usize {
                recursion_check(n, m).unwrap();
            }
        }
    }

    #[test]
    fn a2_closed_form() {
        for n in [4usize, 5] {
            let fb = FormBasis::new(n);
            let x1 = Covector::formal(n, 0);
            let x2 = Covector::formal(n, 1);
            let y1 = Covector::formal(n, 2);
            let y2 = Covector::formal(n, 3);
            let lhs = a_m_trace(&fb, 2, &y1, &x2, &x1, &y2).unwrap();
            let coeff = rat_int(2) * alternating_coeff(n, 1) - rat_int(binom(n as i64, 1));
            let rhs = &(&y2.inner(&x1).unwrap() * &x2.inner(&y1).unwrap())
                + &(&x1.inner(&x2).unwrap() * &y1.inner(&y2).unwrap())
                    .scale(GaussRat::from_rat(coeff));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn a2_of_normal_frame_vector() {
        // trace_{deg 2}[eps(dx_n) iota(xi') eps(eta) iota(eta)] = 2 eta_n <xi',eta'>
        let n = 4;
        let fb = basis(n);
        let got = a_m_trace(
            fb,
            2,
            &Covector::dx(n, n),
            &Covector::xi_prime(n),
            &Covector::eta(n),
            &Covector::eta(n),
        )
        .unwrap();
        let want = (&PolyQ::var(Var::eta_n())
            * &Covector::xi_prime(n)
                .inner(&Covector::eta_prime(n))
                .unwrap())
            .scale(GaussRat::from_int(2));
        assert_eq!(got, want);
    }

    #[test]
    fn pq_constants_n4_m2() {
        let c = pq_constants(4, 2).unwrap();
        assert_eq!(c.a, rat_int(8));
        assert_eq!(c.b, rat_int(-2));
        assert_eq!(rat_int(binom(4, 2)), c.a + c.b);
    }

    #[test]
    fn pq_constants_grid() {
        for n in 4..=6usize {
            for m in 0..=n {
                let c = pq_constants(n, m).unwrap();
                assert_eq!(
                    c.a + c.b,
                    rat_int(binom(n as i64, m as i64)),
                    "n={n}, m={m}"
                );
            }
        }
    }

    #[test]
    fn jet_trace_cross_term() {
        let out = normal_jet_trace_identity().unwrap();
        assert_eq!(out.cross_coefficient, rat_int(8));
        // setting xi_n = 0 removes the cross term entirely
        let no_cross = out.trace.subst_zero(Var::xi_n());
        let mono = Mono::var(Var::h1(), 1)
            .mul(&Mono::var(Var::eta_n(), 1))
            .mul(&Mono::var(Var::xi(1), 1))
            .mul(&Mono::var(Var::eta(1), 1));
        // any monomial still containing eta_n to odd order with a single xi'
        // factor would be a cross remnant
        assert_eq!(no_cross.coeff(&mono), GaussRat::zero());
    }
}
