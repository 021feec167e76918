//! Exact matrix model of the full exterior algebra of a cotangent space.
//!
//! Basis elements are index subsets of `{1..n}` ordered degree-major, then
//! lexicographically within a degree; that ordering fixes every matrix
//! representation. Wedge and contraction act with the usual alternating
//! signs, contraction taken with the Euclidean pairing (normal coordinates
//! at the base point).

use crate::error::{CoreError, Result};
use crate::poly::{PolyQ, Var};
use crate::scalar::GaussRat;

pub const MAX_DIM: usize = 6;

fn binom_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for t in 0..k {
        r = r * (n - t) / (t + 1);
    }
    r
}

/// Canonical ordered basis of the exterior algebra plus the generator action
/// tables for wedge and contraction.
pub struct FormBasis {
    n: usize,
    masks: Vec<u32>,
    index_of: Vec<usize>,
    // per frame index j (0-based): source basis index -> (target, sign)
    wedge_tab: Vec<Vec<Option<(usize, i8)>>>,
    contract_tab: Vec<Vec<Option<(usize, i8)>>>,
}

impl FormBasis {
    pub fn new(n: usize) -> FormBasis {
        assert!(n <= MAX_DIM, "dimension {n} above supported maximum");
        let dim = 1usize << n;
        let mut masks: Vec<u32> = (0..dim as u32).collect();
        masks.sort_by_key(|m| (m.count_ones(), subset_key(*m, n)));
        let mut index_of = vec![0usize; dim];
        for (i, &m) in masks.iter().enumerate() {
            index_of[m as usize] = i;
        }
        let mut wedge_tab = Vec::with_capacity(n);
        let mut contract_tab = Vec::with_capacity(n);
        for j in 0..n {
            let bit = 1u32 << j;
            let below = bit - 1;
            let mut w = vec![None; dim];
            let mut c = vec![None; dim];
            for (src, &m) in masks.iter().enumerate() {
                let sign = if (m & below).count_ones() % 2 == 0 {
                    1i8
                } else {
                    -1
                };
                if m & bit == 0 {
                    w[src] = Some((index_of[(m | bit) as usize], sign));
                } else {
                    c[src] = Some((index_of[(m & !bit) as usize], sign));
                }
            }
            wedge_tab.push(w);
            contract_tab.push(c);
        }
        FormBasis {
            n,
            masks,
            index_of,
            wedge_tab,
            contract_tab,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn mask_at(&self, idx: usize) -> u32 {
        self.masks[idx]
    }

    pub fn index_of_mask(&self, mask: u32) -> usize {
        self.index_of[mask as usize]
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.masks[idx].count_ones() as usize
    }

    /// Index range of the degree-`m` block.
    pub fn degree_block(&self, m: usize) -> Result<std::ops::Range<usize>> {
        if m > self.n {
            return Err(CoreError::DegreeOutOfRange {
                degree: m,
                n: self.n,
            });
        }
        let start: usize = (0..m).map(|t| binom_usize(self.n, t)).sum();
        Ok(start..start + binom_usize(self.n, m))
    }

    /// Exterior multiplication by a single frame covector `dx_j` (1-based).
    pub fn wedge_basis(&self, j: usize) -> Result<ExtOp> {
        self.generator(j, true)
    }

    /// Contraction with a single frame covector `dx_j` (1-based).
    pub fn contract_basis(&self, j: usize) -> Result<ExtOp> {
        self.generator(j, false)
    }

    fn generator(&self, j: usize, wedge: bool) -> Result<ExtOp> {
        if j == 0 || j > self.n {
            return Err(CoreError::IndexOutOfRange {
                index: j,
                n: self.n,
            });
        }
        let tab = if wedge {
            &self.wedge_tab[j - 1]
        } else {
            &self.contract_tab[j - 1]
        };
        let mut op = ExtOp::zero(self.n);
        for (src, entry) in tab.iter().enumerate() {
            if let Some((dst, sign)) = entry {
                op.set(*dst, src, PolyQ::int(*sign as i128));
            }
        }
        Ok(op)
    }

    /// `eps(v)`: left wedge by a covector, linear in `v`.
    pub fn wedge_op(&self, v: &Covector) -> Result<ExtOp> {
        self.linear_op(v, true)
    }

    /// `iota(v)`: contraction, the graded adjoint of `eps(v)` for the
    /// Euclidean pairing.
    pub fn contract_op(&self, v: &Covector) -> Result<ExtOp> {
        self.linear_op(v, false)
    }

    fn linear_op(&self, v: &Covector, wedge: bool) -> Result<ExtOp> {
        if v.n() != self.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: v.n(),
            });
        }
        let mut op = ExtOp::zero(self.n);
        for j in 1..=self.n {
            let comp = v.component(j);
            if comp.is_zero() {
                continue;
            }
            let tab = if wedge {
                &self.wedge_tab[j - 1]
            } else {
                &self.contract_tab[j - 1]
            };
            for (src, entry) in tab.iter().enumerate() {
                if let Some((dst, sign)) = entry {
                    let add = if *sign > 0 { comp.clone() } else { -comp };
                    let cur = op.get(*dst, src);
                    op.set(*dst, src, &cur + &add);
                }
            }
        }
        Ok(op)
    }

    /// `p(v) = eps(v) iota(v) - iota(v) eps(v)`, the numerator of the leading
    /// symbol.
    pub fn p_op(&self, v: &Covector) -> Result<ExtOp> {
        let e = self.wedge_op(v)?;
        let i = self.contract_op(v)?;
        Ok(&(&e * &i) - &(&i * &e))
    }

    /// The two anticommuting Clifford actions `c = eps - iota` and
    /// `cbar = eps + iota` on a frame covector.
    pub fn clifford_op(&self, j: usize, kind: CliffordKind) -> Result<ExtOp> {
        let e = self.wedge_basis(j)?;
        let i = self.contract_basis(j)?;
        Ok(match kind {
            CliffordKind::Plain => &e - &i,
            CliffordKind::Bar => &e + &i,
        })
    }
}

// Lexicographic key on the sorted index tuple; within a fixed degree the
// packed numbers have equally many digits, so integer order is tuple order.
fn subset_key(mask: u32, n: usize) -> u32 {
    let mut packed = 0u32;
    for j in 0..n {
        if mask & (1 << j) != 0 {
            packed = packed * (n as u32 + 1) + (j as u32 + 1);
        }
    }
    packed
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CliffordKind {
    Plain,
    Bar,
}

/// A covector with polynomial components; formal components let one matrix
/// computation cover all of cotangent space at once.
#[derive(Clone, PartialEq, Debug)]
pub struct Covector {
    comps: Vec<PolyQ>,
}

impl Covector {
    pub fn from_components(comps: Vec<PolyQ>) -> Covector {
        Covector { comps }
    }

    /// Frame covector `dx_j` (1-based).
    pub fn dx(n: usize, j: usize) -> Covector {
        let mut comps = vec![PolyQ::zero(); n];
        comps[j - 1] = PolyQ::one();
        Covector { comps }
    }

    /// Formal `xi = (xi_1, .., xi_{n-1}, xi_n)`.
    pub fn xi(n: usize) -> Covector {
        let mut comps: Vec<PolyQ> = (1..n).map(|i| PolyQ::var(Var::xi(i))).collect();
        comps.push(PolyQ::var(Var::xi_n()));
        Covector { comps }
    }

    /// Tangential part `xi' = (xi_1, .., xi_{n-1}, 0)`.
    pub fn xi_prime(n: usize) -> Covector {
        let mut comps: Vec<PolyQ> = (1..n).map(|i| PolyQ::var(Var::xi(i))).collect();
        comps.push(PolyQ::zero());
        Covector { comps }
    }

    pub fn eta(n: usize) -> Covector {
        let mut comps: Vec<PolyQ> = (1..n).map(|i| PolyQ::var(Var::eta(i))).collect();
        comps.push(PolyQ::var(Var::eta_n()));
        Covector { comps }
    }

    pub fn eta_prime(n: usize) -> Covector {
        let mut comps: Vec<PolyQ> = (1..n).map(|i| PolyQ::var(Var::eta(i))).collect();
        comps.push(PolyQ::zero());
        Covector { comps }
    }

    /// Fully formal covector built from generic components, for brute-force
    /// trace fits.
    pub fn formal(n: usize, vec: usize) -> Covector {
        Covector {
            comps: (1..=n).map(|c| PolyQ::var(Var::formal(vec, c))).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, j: usize) -> &PolyQ {
        &self.comps[j - 1]
    }

    /// Same covector with the normal component zeroed.
    pub fn tangential(&self) -> Covector {
        let mut comps = self.comps.clone();
        if let Some(last) = comps.last_mut() {
            *last = PolyQ::zero();
        }
        Covector { comps }
    }

    /// Euclidean pairing, exact in the formal components.
    pub fn inner(&self, other: &Covector) -> Result<PolyQ> {
        if self.n() != other.n() {
            return Err(CoreError::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let mut acc = PolyQ::zero();
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc = &acc + &(a * b);
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> PolyQ {
        self.inner(self).expect("same covector")
    }
}

/// Square matrix of dimension `2^n` over the polynomial ring, acting on the
/// ordered form basis by left multiplication.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtOp {
    n: usize,
    dim: usize,
    entries: Vec<PolyQ>,
}

impl ExtOp {
    pub fn zero(n: usize) -> ExtOp {
        let dim = 1usize << n;
        ExtOp {
            n,
            dim,
            entries: vec![PolyQ::zero(); dim * dim],
        }
    }

    pub fn identity(n: usize) -> ExtOp {
        let mut op = Self::zero(n);
        for i in 0..op.dim {
            op.entries[i * op.dim + i] = PolyQ::one();
        }
        op
    }

    /// Scalar polynomial times the identity.
    pub fn scalar(n: usize, p: &PolyQ) -> ExtOp {
        let mut op = Self::zero(n);
        for i in 0..op.dim {
            op.entries[i * op.dim + i] = p.clone();
        }
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> PolyQ {
        self.entries[r * self.dim + c].clone()
    }

    pub fn entry(&self, r: usize, c: usize) -> &PolyQ {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: PolyQ) {
        self.entries[r * self.dim + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn scale_poly(&self, p: &PolyQ) -> ExtOp {
        self.map(|q| q * p)
    }

    pub fn scale_gauss(&self, c: GaussRat) -> ExtOp {
        self.map(|q| q.scale(c))
    }

    pub fn map(&self, f: impl Fn(&PolyQ) -> PolyQ) -> ExtOp {
        ExtOp {
            n: self.n,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Trace of the degree-`m` diagonal block.
    pub fn graded_trace(&self, m: usize) -> Result<PolyQ> {
        let basis = basis(self.n);
        let block = basis.degree_block(m)?;
        let mut acc = PolyQ::zero();
        for i in block {
            acc = &acc + self.entry(i, i);
        }
        Ok(acc)
    }

    /// `trace_{deg m}(self * other)` without forming the product matrix.
    pub fn trace_product(&self, other: &ExtOp, m: usize) -> Result<PolyQ> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let basis = basis(self.n);
        let block = basis.degree_block(m)?;
        let mut acc = PolyQ::zero();
        for r in block {
            for s in 0..self.dim {
                let a = self.entry(r, s);
                if a.is_zero() {
                    continue;
                }
                let b = other.entry(s, r);
                if b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
        }
        Ok(acc)
    }
}

impl std::ops::Add for &ExtOp {
    type Output = ExtOp;
    fn add(self, o: &ExtOp) -> ExtOp {
        assert_eq!(self.n, o.n, "dimension mismatch");
        ExtOp {
            n: self.n,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &ExtOp {
    type Output = ExtOp;
    fn sub(self, o: &ExtOp) -> ExtOp {
        assert_eq!(self.n, o.n, "dimension mismatch");
        ExtOp {
            n: self.n,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &ExtOp {
    type Output = ExtOp;
    fn mul(self, o: &ExtOp) -> ExtOp {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let dim = self.dim;
        let mut out = ExtOp::zero(self.n);
        for r in 0..dim {
            for s in 0..dim {
                let a = self.entry(r, s);
                if a.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    let b = o.entry(s, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = &out.entries[r * dim + c] + &(a * b);
                    out.entries[r * dim + c] = cur;
                }
            }
        }
        out
    }
}

impl std::ops::Neg for &ExtOp {
    type Output = ExtOp;
    fn neg(self) -> ExtOp {
        self.map(|p| -p)
    }
}

use std::sync::OnceLock;

static BASES: [OnceLock<FormBasis>; MAX_DIM + 1] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Shared basis tables per dimension.
pub fn basis(n: usize) -> &'static FormBasis {
    BASES[n].get_or_init(|| FormBasis::new(n))
}
