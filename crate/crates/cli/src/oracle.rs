//! Floating-point cross-check of the exact case coefficients.
//!
//! The oracle shares only the symbol construction with the exact path.
//! Projection, line integration and sphere integration are all redone
//! numerically: the upper-half-plane part is extracted by trapezoid contour
//! integrals around the lower pole, the normal-variable integral runs through
//! adaptive Gauss-Kronrod quadrature on a tangent-transformed axis, and the
//! sphere integral uses a product rule exact for the polynomial degree at
//! hand. Agreement target is 1e-9 relative at `h1 = 1`.

use num_complex::Complex64;
use omega3_core::engine::{case_entry_factors, case_triples, pipeline_entry, CaseLabel};
use omega3_core::poly::Var;
use omega3_core::radial::SphereRational;
use omega3_core::CoreError;

type C64 = Complex64;

// ---------------------------------------------------------------------------
// compiled polynomial matrices
// ---------------------------------------------------------------------------

// exponents over (xi_1, xi_2, xi_3, xi_n); h1 is fixed to 1
struct CompiledPoly {
    terms: Vec<(C64, [u8; 4])>,
}

impl CompiledPoly {
    fn tangential_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e[0] as u32 + e[1] as u32 + e[2] as u32)
            .max()
            .unwrap_or(0)
    }

    fn xin_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, e)| e[3] as usize)
            .max()
            .unwrap_or(0)
    }

    /// Collapse to a univariate polynomial in `xi_n` at a fixed sphere point.
    fn collapse(&self, u: [f64; 3]) -> UniPoly {
        let mut coeffs = vec![C64::new(0.0, 0.0); self.xin_degree() + 1];
        for (c, e) in &self.terms {
            let scale = u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32) * u[2].powi(e[2] as i32);
            coeffs[e[3] as usize] += c * scale;
        }
        UniPoly(coeffs)
    }
}

struct UniPoly(Vec<C64>);

impl UniPoly {
    fn eval(&self, w: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            acc = acc * w + c;
        }
        acc
    }
}

struct CompiledMatrix {
    dim: usize,
    k: u32,
    entries: Vec<(usize, usize, CompiledPoly)>,
}

fn compile(s: &SphereRational) -> Result<CompiledMatrix, CoreError> {
    let dim = s.num().dim();
    let mut entries = vec![];
    for r in 0..dim {
        for c in 0..dim {
            let p = s.num().entry(r, c);
            if p.is_zero() {
                continue;
            }
            let mut terms = vec![];
            for (mono, coef) in p.terms() {
                let mut exps = [0u8; 4];
                for (v, e) in mono.vars() {
                    if v == Var::xi(1) {
                        exps[0] = e;
                    } else if v == Var::xi(2) {
                        exps[1] = e;
                    } else if v == Var::xi(3) {
                        exps[2] = e;
                    } else if v == Var::xi_n() {
                        exps[3] = e;
                    } else if v.is_h1() {
                        // h1 = 1
                    } else {
                        return Err(CoreError::StrayVariable {
                            var: v.name(),
                            context: "oracle integrand".into(),
                        });
                    }
                }
                let (re, im) = coef.to_complex_f64();
                terms.push((C64::new(re, im), exps));
            }
            entries.push((r, c, CompiledPoly { terms }));
        }
    }
    Ok(CompiledMatrix {
        dim,
        k: s.k(),
        entries,
    })
}

impl CompiledMatrix {
    fn tangential_degree(&self) -> u32 {
        self.entries
            .iter()
            .map(|(_, _, p)| p.tangential_degree())
            .max()
            .unwrap_or(0)
    }

    /// Collapse the kept entries to univariate polynomials at a sphere point.
    fn collapse(
        &self,
        u: [f64; 3],
        keep: impl Fn(usize, usize) -> bool,
    ) -> Vec<(usize, usize, UniPoly)> {
        self.entries
            .iter()
            .filter(|(r, c, _)| keep(*r, *c))
            .map(|(r, c, p)| (*r, *c, p.collapse(u)))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// numeric plus-part extraction
// ---------------------------------------------------------------------------

const CONTOUR_NODES: usize = 64;
const CONTOUR_RADIUS: f64 = 0.7;

/// Laurent coefficients at the pole `-i` for each collapsed entry: the inner
/// vector holds `B_1..B_k`. Trapezoid contour quadrature converges
/// geometrically for functions analytic in an annulus, so 64 nodes are far
/// beyond the 1e-12 needed here.
fn plus_coefficients(entries: &[(usize, usize, UniPoly)], k: u32) -> Vec<Vec<C64>> {
    let kk = k as usize;
    let mut coeffs = vec![vec![C64::new(0.0, 0.0); kk]; entries.len()];
    let center = C64::new(0.0, -1.0);
    for t in 0..CONTOUR_NODES {
        let theta = 2.0 * std::f64::consts::PI * t as f64 / CONTOUR_NODES as f64;
        let phase = C64::new(theta.cos(), theta.sin());
        let w = center + CONTOUR_RADIUS * phase;
        let denom = (w * w + 1.0).powi(k as i32);
        for (slot, (_, _, poly)) in coeffs.iter_mut().zip(entries) {
            let val = poly.eval(w) / denom;
            for (j, out) in slot.iter_mut().enumerate() {
                // a_{-j} = rho^j / N * sum f(theta) e^{i j theta}
                let jj = (j + 1) as i32;
                *out += val * phase.powi(jj) * CONTOUR_RADIUS.powi(jj) / CONTOUR_NODES as f64;
            }
        }
    }
    coeffs
}

// ---------------------------------------------------------------------------
// quadrature rules
// ---------------------------------------------------------------------------

// Gauss-Kronrod 7-15 nodes and weights (positive half; QUADPACK values)
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

fn gk15(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = half * XGK[i];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += (f1 + f2) * WGK[i];
        if i % 2 == 1 {
            gauss += (f1 + f2) * WG[i / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).norm())
}

fn adaptive(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64, depth: u32) -> C64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol.max(1e-13 * val.norm()).max(1e-16) || depth >= 24 {
        return val;
    }
    let mid = 0.5 * (a + b);
    let half_tol = 0.6 * tol;
    adaptive(f, a, mid, half_tol, depth + 1) + adaptive(f, mid, b, half_tol, depth + 1)
}

/// Adaptive integral over the whole real line via `xi_n = tan t`.
fn integrate_line_numeric(f: &mut impl FnMut(f64) -> C64) -> C64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut g = |t: f64| {
        let c = t.cos();
        f(t.tan()) / (c * c)
    };
    // split at zero; the integrand is analytic on each half
    adaptive(&mut g, -half_pi + 1e-12, 0.0, 1e-12, 0)
        + adaptive(&mut g, 0.0, half_pi - 1e-12, 1e-12, 0)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let legendre = |x: f64| -> (f64, f64) {
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, dp)
    };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Product rule on the unit two-sphere, exact for polynomials up to `deg`.
fn sphere_rule(deg: u32) -> Vec<([f64; 3], f64)> {
    let n_phi = (deg as usize + 2).max(4);
    let n_u = (deg as usize / 2 + 2).max(3);
    let gl = gauss_legendre(n_u);
    let mut nodes = vec![];
    for a in 0..n_phi {
        let phi = 2.0 * std::f64::consts::PI * a as f64 / n_phi as f64;
        let w_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
        for &(u, w_u) in &gl {
            let s = (1.0 - u * u).sqrt();
            nodes.push(([s * phi.cos(), s * phi.sin(), u], w_phi * w_u));
        }
    }
    nodes
}

// ---------------------------------------------------------------------------
// case comparison
// ---------------------------------------------------------------------------

pub struct OracleEntry {
    pub case_id: String,
    pub label: String,
    pub exact: String,
    pub exact_f64: f64,
    pub approx: f64,
    pub rel_err: f64,
    pub within_tolerance: bool,
}

pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Off-gradient parity terms sampled per case on top of the full gradient grid.
const PARITY_SAMPLES: usize = 3;

/// Numeric value of one summand: projection by contour, normal integral by
/// adaptive quadrature, sphere integral by the product rule.
fn numeric_entry(
    first: &CompiledMatrix,
    second: &CompiledMatrix,
    post_pi_dxn: u32,
    block: &std::ops::Range<usize>,
) -> C64 {
    let deg = first.tangential_degree() + second.tangential_degree();
    let rule = sphere_rule(deg + 2);
    let dim = second.dim;
    let mut scratch = vec![C64::new(0.0, 0.0); dim * dim];
    let mut total = C64::new(0.0, 0.0);
    for (u, w) in &rule {
        // only rows of the first factor and columns of the second inside the
        // middle-degree block contribute to the graded trace
        let fc = first.collapse(*u, |r, _| block.contains(&r));
        let sc = second.collapse(*u, |_, c| block.contains(&c));
        let plus = plus_coefficients(&fc, first.k);
        let k2 = second.k as i32;
        let mut integrand = |xin: f64| -> C64 {
            let denom2 = (xin * xin + 1.0).powi(k2);
            for slot in scratch.iter_mut() {
                *slot = C64::new(0.0, 0.0);
            }
            for (s, c, poly) in &sc {
                scratch[s * dim + c] = poly.eval(C64::new(xin, 0.0)) / denom2;
            }
            let z = C64::new(xin, 1.0); // xi_n + i
            let mut tr = C64::new(0.0, 0.0);
            for ((r, s, _), orders) in fc.iter().zip(&plus) {
                let mut v1 = C64::new(0.0, 0.0);
                for (idx, b) in orders.iter().enumerate() {
                    let j = (idx + 1) as i32;
                    let mut factor = 1.0;
                    for t in 0..post_pi_dxn as i32 {
                        factor *= -(j + t) as f64;
                    }
                    v1 += b * z.powi(-(j + post_pi_dxn as i32)) * factor;
                }
                tr += v1 * scratch[s * dim + r];
            }
            tr
        };
        total += integrate_line_numeric(&mut integrand) * *w;
    }
    total
}

pub fn oracle_case(label: CaseLabel) -> Result<Vec<OracleEntry>, CoreError> {
    let block = omega3_core::exterior::basis(4).degree_block(2)?;
    let mut out = vec![];
    let mut parity_seen = 0usize;
    for triple in case_triples(label) {
        if triple.slot.is_none() {
            parity_seen += 1;
            if parity_seen > PARITY_SAMPLES {
                continue;
            }
        }
        let factors = case_entry_factors(label, &triple.alpha, &triple.beta, &triple.delta)?;
        let exact_sum = pipeline_entry(&factors)?.realify(&format!("oracle case {label}"))?;
        let exact_f64 = exact_sum.to_f64_at(1.0);

        let first = compile(&factors.first)?;
        let second = compile(&factors.second)?;
        let total = numeric_entry(&first, &second, factors.post_pi_dxn, &block);
        let (pre_re, pre_im) = factors.prefactor.to_complex_f64();
        let value = total * C64::new(pre_re, pre_im);
        let approx = value.re;

        let denom = if exact_f64 == 0.0 {
            1.0
        } else {
            exact_f64.abs()
        };
        let rel_err = ((approx - exact_f64).abs()).max(value.im.abs()) / denom;
        let slot_label = match triple.slot {
            Some((i, j)) => format!("entry ({i},{j})"),
            None => format!(
                "parity term alpha={:?} beta'={:?} delta'={:?}",
                triple.alpha, triple.beta, triple.delta
            ),
        };
        out.push(OracleEntry {
            case_id: label.id().to_string(),
            label: slot_label,
            exact: exact_sum.to_string(),
            exact_f64,
            approx,
            rel_err,
            within_tolerance: rel_err <= ORACLE_TOLERANCE,
        });
    }
    Ok(out)
}

pub fn oracle_all() -> Result<Vec<OracleEntry>, CoreError> {
    let mut out = vec![];
    for label in CaseLabel::all() {
        out.extend(oracle_case(label)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let gl = gauss_legendre(6);
        // integral of x^10 over [-1,1] = 2/11
        let v: f64 = gl.iter().map(|&(x, w)| w * x.powi(10)).sum();
        assert!((v - 2.0 / 11.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_rule_matches_exact_moments() {
        let rule = sphere_rule(6);
        let area: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-11);
        let m22: f64 = rule
            .iter()
            .map(|&(u, w)| w * u[0] * u[0] * u[1] * u[1])
            .sum();
        assert!((m22 - 4.0 * std::f64::consts::PI / 15.0).abs() < 1e-11);
    }

    #[test]
    fn gk_integrates_lorentzian() {
        let mut f = |x: f64| C64::new(1.0 / (x * x + 1.0), 0.0);
        let v = integrate_line_numeric(&mut f);
        assert!((v.re - std::f64::consts::PI).abs() < 1e-11);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn contour_matches_exact_projection() {
        // plus part of 1/(xi_n^2+1) is (i/2)/(xi_n+i), the Cauchy value;
        // check the numeric Laurent extraction at xi_n = 0.3
        let entries = vec![(0usize, 0usize, UniPoly(vec![C64::new(1.0, 0.0)]))];
        let coeffs = plus_coefficients(&entries, 1);
        let z = C64::new(0.3, 1.0);
        let got = coeffs[0][0] / z;
        let want = C64::new(0.0, 0.5) / z;
        assert!((got - want).norm() < 1e-12);
    }
}
