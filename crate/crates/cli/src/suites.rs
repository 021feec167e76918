//! The exact identity suites behind the `identities` command. Every check
//! recomputes its identity from scratch through the library and reports the
//! exact value it verified.

use crate::report::SuiteResult;
use omega3_core::engine::{self, MetricJet};
use omega3_core::exterior::{basis, Covector, ExtOp, FormBasis};
use omega3_core::halfline::decompose;
use omega3_core::poly::{PolyQ, Var};
use omega3_core::radial::{norm2_xi, RadialRational, SphereRational};
use omega3_core::scalar::{rat, rat_int, GaussRat};
use omega3_core::sphere::{integrate_monomial, ExactScalar};
use omega3_core::traces;

fn check(name: &str, body: impl FnOnce() -> Result<String, String>) -> SuiteResult {
    match body() {
        Ok(exact) => SuiteResult::pass(name, exact),
        Err(msg) => SuiteResult::fail(name, msg),
    }
}

fn expect(cond: bool, value: &str, msg: &str) -> Result<String, String> {
    if cond {
        Ok(value.to_string())
    } else {
        Err(msg.to_string())
    }
}

pub fn exterior_suite() -> Vec<SuiteResult> {
    let mut out = vec![];
    for n in [4usize, 5, 6] {
        out.push(check(&format!("ext.anticommutation.n{n}"), || {
            let b = FormBasis::new(n);
            let xi = Covector::formal(n, 0);
            let eta = Covector::formal(n, 1);
            let e = b.wedge_op(&xi).map_err(|e| e.to_string())?;
            let i = b.contract_op(&eta).map_err(|e| e.to_string())?;
            let lhs = &(&e * &i) + &(&i * &e);
            let rhs = ExtOp::scalar(n, &xi.inner(&eta).map_err(|e| e.to_string())?);
            expect(
                lhs == rhs,
                "<xi,eta> I on all degrees",
                "anticommutation failed",
            )
        }));
    }
    out.push(check("ext.wedge_square_zero", || {
        let b = basis(4);
        let e = b.wedge_op(&Covector::xi(4)).map_err(|e| e.to_string())?;
        expect((&e * &e).is_zero(), "0", "eps(xi)^2 != 0")
    }));
    out.push(check("ext.contract_square_zero", || {
        let b = basis(4);
        let i = b.contract_op(&Covector::xi(4)).map_err(|e| e.to_string())?;
        expect((&i * &i).is_zero(), "0", "iota(xi)^2 != 0")
    }));
    out.push(check("ext.p_expansion", || {
        let b = basis(4);
        let xi = Covector::xi(4);
        let p = b.p_op(&xi).map_err(|e| e.to_string())?;
        let e = b.wedge_op(&xi).map_err(|e| e.to_string())?;
        let i = b.contract_op(&xi).map_err(|e| e.to_string())?;
        let rhs = &(&e * &i).scale_gauss(GaussRat::from_int(2)) - &ExtOp::scalar(4, &xi.norm_sq());
        expect(p == rhs, "p = 2 eps iota - |xi|^2 I", "p expansion failed")
    }));
    out.push(check("ext.p_square", || {
        let b = basis(4);
        let xi = Covector::xi(4);
        let p = b.p_op(&xi).map_err(|e| e.to_string())?;
        let n4 = &xi.norm_sq() * &xi.norm_sq();
        expect(&p * &p == ExtOp::scalar(4, &n4), "|xi|^4 I", "p^2 failed")
    }));
    out.push(check("ext.trace_normal_wedge_tangential_contract", || {
        let b = basis(4);
        let op = &b.wedge_basis(4).map_err(|e| e.to_string())?
            * &b.contract_op(&Covector::xi_prime(4))
                .map_err(|e| e.to_string())?;
        let tr = op.graded_trace(2).map_err(|e| e.to_string())?;
        expect(tr.is_zero(), "0", "trace of eps(dx_n) iota(xi') nonzero")
    }));
    out.push(check("ext.graded_dimension", || {
        let id = ExtOp::identity(4);
        let tr = id.graded_trace(2).map_err(|e| e.to_string())?;
        expect(tr == PolyQ::int(6), "6", "wrong middle-degree dimension")
    }));
    out
}

pub fn jet_trace_suite() -> Vec<SuiteResult> {
    let mut out = vec![];
    out.push(check("trace.alternating_coeffs", || {
        let vals: Vec<_> = (0..=2).map(|m| traces::alternating_coeff(4, m)).collect();
        expect(
            vals == vec![rat_int(1), rat_int(3), rat_int(3)],
            "A_{4,0..2} = 1, 3, 3",
            "alternating coefficients wrong",
        )
    }));
    for n in [4usize, 5] {
        for m in 1..=3usize {
            out.push(check(&format!("trace.recursion.n{n}.m{m}"), || {
                traces::recursion_check(n, m).map_err(|e| e.to_string())?;
                Ok("argument-swapped recursion".into())
            }));
        }
    }
    out.push(check("trace.a1_value", || {
        let n = 4;
        let fb = FormBasis::new(n);
        let x1 = Covector::formal(n, 0);
        let x2 = Covector::formal(n, 1);
        let y1 = Covector::formal(n, 2);
        let y2 = Covector::formal(n, 3);
        let got = traces::a_m_trace(&fb, 1, &x1, &x2, &y1, &y2).map_err(|e| e.to_string())?;
        let want = &y2.inner(&x1).map_err(|e| e.to_string())?
            * &x2.inner(&y1).map_err(|e| e.to_string())?;
        expect(got == want, "<y2,x1><x2,y1>", "a_1 closed form failed")
    }));
    out.push(check("trace.a2_of_normal_frame", || {
        let n = 4;
        let fb = basis(n);
        let got = traces::a_m_trace(
            fb,
            2,
            &Covector::dx(n, n),
            &Covector::xi_prime(n),
            &Covector::eta(n),
            &Covector::eta(n),
        )
        .map_err(|e| e.to_string())?;
        let want = (&PolyQ::var(Var::eta_n())
            * &Covector::xi_prime(n)
                .inner(&Covector::eta_prime(n))
                .map_err(|e| e.to_string())?)
            .scale(GaussRat::from_int(2));
        expect(
            got == want,
            "2 eta_n <xi',eta'>",
            "normal-frame trace failed",
        )
    }));
    out.push(check("trace.pq_constants_n4_m2", || {
        let c = traces::pq_constants(4, 2).map_err(|e| e.to_string())?;
        expect(
            c.a == rat_int(8) && c.b == rat_int(-2),
            "(a, b) = (8, -2)",
            "pq constants wrong",
        )
    }));
    out.push(check("trace.pq_grid", || {
        for n in 4..=6usize {
            for m in 2..=n - 2 {
                traces::pq_constants(n, m).map_err(|e| e.to_string())?;
            }
        }
        Ok("closed form = brute force, n = 4..6".into())
    }));
    out.push(check("trace.nonproduct_full_identity", || {
        let r = traces::normal_jet_trace_identity().map_err(|e| e.to_string())?;
        expect(
            r.cross_coefficient == rat_int(8),
            "cross coefficient 8",
            "full identity failed",
        )
    }));
    out
}

pub fn halfline_suite() -> Vec<SuiteResult> {
    let scalar_sr = |num: PolyQ, k: u32| SphereRational::new(ExtOp::scalar(0, &num), k);
    let mut out = vec![];
    out.push(check("half.roundtrip", || {
        let s = engine::sigma_minus1_f().restrict_sphere();
        let h = decompose(&s).map_err(|e| e.to_string())?;
        expect(
            h.recombine().eq_symbol(&s),
            "recombination reproduces the source",
            "round trip failed",
        )
    }));
    out.push(check("half.pi_plus_idempotent", || {
        let h =
            decompose(&scalar_sr(PolyQ::var_pow(Var::xi_n(), 2), 2)).map_err(|e| e.to_string())?;
        expect(
            h.pi_plus().pi_plus() == h.pi_plus(),
            "pi+ pi+ = pi+",
            "idempotence failed",
        )
    }));
    out.push(check("half.pi_complement", || {
        let h =
            decompose(&scalar_sr(PolyQ::var_pow(Var::xi_n(), 2), 2)).map_err(|e| e.to_string())?;
        let ok = h.pi_plus().add(&h.pi_minus()) == h && h.pi_plus().pi_minus().is_zero();
        expect(ok, "pi+ + pi- = id, pi- pi+ = 0", "complement failed")
    }));
    out.push(check("half.pi_plus_cauchy_kernel", || {
        // pi+[1/(xi_n^2+1)] = (i/2)/(xi_n + i)
        let h = decompose(&scalar_sr(PolyQ::one(), 1)).map_err(|e| e.to_string())?;
        let p = h.pi_plus();
        let want = PolyQ::constant(GaussRat::new(rat_int(0), rat(1, 2)));
        let ok = p.plus_terms().len() == 1
            && p.plus_terms()[0].entry(0, 0) == &want
            && p.c0().is_zero()
            && p.minus_terms().is_empty();
        expect(
            ok,
            "(i/2)/(xi_n+i) = 1/(2(1 - i xi_n))",
            "projection value wrong",
        )
    }));
    out.push(check("half.integral_of_kernel", || {
        let h = decompose(&scalar_sr(PolyQ::one(), 1)).map_err(|e| e.to_string())?;
        let v = h.integrate_line().map_err(|e| e.to_string())?;
        expect(
            v.entry(0, 0) == &PolyQ::one(),
            "pi",
            "integral of 1/(xi_n^2+1) wrong",
        )
    }));
    out.push(check("half.integral_of_kernel_squared", || {
        let h = decompose(&scalar_sr(PolyQ::one(), 2)).map_err(|e| e.to_string())?;
        let v = h.integrate_line().map_err(|e| e.to_string())?;
        expect(
            v.entry(0, 0) == &PolyQ::from_rat(rat(1, 2)),
            "pi/2",
            "integral of 1/(xi_n^2+1)^2 wrong",
        )
    }));
    out.push(check("half.plus_plus_vanishing", || {
        let h = decompose(&scalar_sr(PolyQ::one(), 1)).map_err(|e| e.to_string())?;
        let plus = h.pi_plus().recombine();
        let v = decompose(&plus.mul(&plus))
            .map_err(|e| e.to_string())?
            .integrate_line()
            .map_err(|e| e.to_string())?;
        expect(v.is_zero(), "0", "plus-plus product integral nonzero")
    }));
    out.push(check("half.minus_minus_vanishing", || {
        let h = decompose(&scalar_sr(PolyQ::one(), 1)).map_err(|e| e.to_string())?;
        let minus = h.pi_minus().recombine();
        let v = decompose(&minus.mul(&minus))
            .map_err(|e| e.to_string())?
            .integrate_line()
            .map_err(|e| e.to_string())?;
        expect(v.is_zero(), "0", "minus-minus product integral nonzero")
    }));
    out.push(check("half.integration_by_parts", || {
        let f = scalar_sr(PolyQ::var(Var::xi_n()), 1);
        let g = scalar_sr(PolyQ::one(), 1);
        let lhs = decompose(&f.deriv_xin().mul(&g))
            .map_err(|e| e.to_string())?
            .integrate_line()
            .map_err(|e| e.to_string())?;
        let rhs = decompose(&f.mul(&g.deriv_xin()))
            .map_err(|e| e.to_string())?
            .integrate_line()
            .map_err(|e| e.to_string())?;
        expect(
            lhs == rhs.scale_gauss(GaussRat::from_int(-1)),
            "int f' g = -int f g'",
            "integration by parts failed",
        )
    }));
    out
}

pub fn sphere_suite() -> Vec<SuiteResult> {
    let mut out = vec![];
    out.push(check("sphere.area", || {
        let v = integrate_monomial(&[0, 0, 0], 3).map_err(|e| e.to_string())?;
        expect(
            v == ExactScalar::new(rat_int(4), 1, 0),
            "4 pi",
            "area wrong",
        )
    }));
    out.push(check("sphere.second_moment", || {
        let v = integrate_monomial(&[2, 0, 0], 3).map_err(|e| e.to_string())?;
        expect(
            v == ExactScalar::new(rat(4, 3), 1, 0),
            "4 pi / 3",
            "moment wrong",
        )
    }));
    out.push(check("sphere.mixed_moment", || {
        let v = integrate_monomial(&[2, 2, 0], 3).map_err(|e| e.to_string())?;
        expect(
            v == ExactScalar::new(rat(4, 15), 1, 0),
            "4 pi / 15",
            "moment wrong",
        )
    }));
    out.push(check("sphere.odd_vanishing", || {
        let ok = integrate_monomial(&[1, 0, 0], 3)
            .map_err(|e| e.to_string())?
            .is_zero()
            && integrate_monomial(&[1, 2, 1], 3)
                .map_err(|e| e.to_string())?
                .is_zero();
        expect(ok, "0", "odd monomial did not vanish")
    }));
    out.push(check("sphere.norm_consistency", || {
        use omega3_core::radial::norm2_xi_prime;
        use omega3_core::sphere::integrate_poly;
        for k in 1..=4u32 {
            let got = integrate_poly(&norm2_xi_prime(4).pow(k), 3).map_err(|e| e.to_string())?;
            let want = integrate_poly(&PolyQ::one(), 3).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("(|xi'|^2)^{k} integral differs from the area"));
            }
        }
        Ok("area for every power".into())
    }));
    out
}

pub fn symbol_suite() -> Vec<SuiteResult> {
    let mut out = vec![];
    out.push(check("symbol.leading_involution", || {
        let s = engine::sigma_l();
        let sq = s.mul(&s).map_err(|e| e.to_string())?;
        let id = RadialRational::new(ExtOp::scalar(4, &(&norm2_xi(4) * &norm2_xi(4))), 2)
            .map_err(|e| e.to_string())?;
        expect(sq.eq_symbol(&id), "sigma_L^2 = I", "involution failed")
    }));
    out.push(check("symbol.tangential_jets_vanish", || {
        for i in 1..=3 {
            if !engine::dxi_sigma_l(i).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("tangential jet {i} nonzero"));
            }
        }
        Ok("0 for i < n".into())
    }));
    out.push(check("symbol.normal_jet_quotient_rule", || {
        let b = basis(4);
        let xiv = Covector::xi(4);
        let e_xi = b.wedge_op(&xiv).map_err(|e| e.to_string())?;
        let jet_iota = MetricJet::dxn_contract(&xiv).map_err(|e| e.to_string())?;
        let jet_p = &(&e_xi * &jet_iota) - &(&jet_iota * &e_xi);
        let p = b.p_op(&xiv).map_err(|e| e.to_string())?;
        let oracle = RadialRational::new(
            &jet_p.scale_poly(&norm2_xi(4)) - &p.scale_poly(&MetricJet::dxn_norm2()),
            2,
        )
        .map_err(|e| e.to_string())?;
        expect(
            engine::dxn_sigma_l().eq_symbol(&oracle),
            "printed formula = quotient rule with jet dictionary",
            "normal jet mismatch",
        )
    }));
    out.push(check("symbol.order_one_composition_route", || {
        let b = basis(4);
        let xiv = Covector::xi(4);
        let i_g = GaussRat::i();
        let s1d = b
            .wedge_op(&xiv)
            .map_err(|e| e.to_string())?
            .scale_gauss(i_g);
        let s1del = b
            .contract_op(&xiv)
            .map_err(|e| e.to_string())?
            .scale_gauss(-i_g);
        let d_s1d = b
            .wedge_basis(4)
            .map_err(|e| e.to_string())?
            .scale_gauss(i_g);
        let jet_s1del = MetricJet::dxn_contract(&xiv)
            .map_err(|e| e.to_string())?
            .scale_gauss(-i_g);
        let dd = &(&(&s1d * &engine::sigma0_delta()) + &(&engine::sigma0_d() * &s1del))
            - &(&d_s1d * &jet_s1del).scale_gauss(i_g);
        let deld = &(&s1del * &engine::sigma0_d()) + &(&engine::sigma0_delta() * &s1d);
        let ok = dd == engine::sigma1_d_delta() && deld == engine::sigma1_delta_d();
        expect(
            ok,
            "composition route matches closed forms",
            "composition mismatch",
        )
    }));
    out.push(check("symbol.inverse_laplacian_tail", || {
        let s = engine::sigma_minus3_lap_inv();
        expect(
            s.hom() == Some(-3),
            "homogeneity -3, h1-linear",
            "tail structure off",
        )
    }));
    out.push(check("symbol.order_minus_one_h1_divisible", || {
        let s = engine::sigma_minus1_f();
        let div = (0..s.num().dim()).all(|r| {
            (0..s.num().dim()).all(|c| {
                s.num()
                    .entry(r, c)
                    .terms()
                    .all(|(m, _)| m.exp(Var::h1()) >= 1)
            })
        });
        expect(
            div && s.hom() == Some(-1),
            "h1 f(xi), homogeneity -1",
            "order -1 symbol structure off",
        )
    }));
    out
}

pub fn chain_suite() -> Vec<SuiteResult> {
    match engine::projection_parts_chain() {
        Ok(report) => report
            .steps
            .iter()
            .enumerate()
            .map(|(i, (name, ok))| {
                let label = format!("chain.step{}", i + 1);
                if *ok {
                    SuiteResult::pass(&label, name.clone())
                } else {
                    SuiteResult::fail(&label, name.clone())
                }
            })
            .collect(),
        Err(e) => vec![SuiteResult::fail("chain", e.to_string())],
    }
}

pub fn all_identities() -> Vec<SuiteResult> {
    let mut out = vec![];
    out.extend(exterior_suite());
    out.extend(jet_trace_suite());
    out.extend(halfline_suite());
    out.extend(sphere_suite());
    out.extend(symbol_suite());
    out.extend(chain_suite());
    out
}
