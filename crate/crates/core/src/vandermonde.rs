//! Square Vandermonde systems `u · V(a) = v` over `R_p`.
//!
//! [`solve_lu`] inverts the sparse bidiagonal factors of `V(a)` directly on
//! the right-hand side, using only additions, cyclic shifts and divisions by
//! binomials `x^a + x^b`. [`solve_cramer`] solves the same system over
//! `F2[x]/M_p(x)` by determinants and serves as the reference answer.

use crate::error::{Error, ParamError, Result};
use crate::ring::{check_modulus, gcd, DivisionForm, QuotientPoly, RingPoly, XorTally};

/// Exponents `a_1..a_r` of a square Vandermonde matrix, reduced mod `p`,
/// with every pairwise difference a unit modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentTuple {
    p: usize,
    exps: Vec<usize>,
}

impl ExponentTuple {
    pub fn new(p: usize, exps: &[i64]) -> Result<Self, ParamError> {
        check_modulus(p)?;
        if exps.is_empty() {
            return Err(ParamError::Dimension("exponent tuple is empty".into()));
        }
        let exps: Vec<usize> = exps.iter().map(|&e| e.rem_euclid(p as i64) as usize).collect();
        for (i, &a) in exps.iter().enumerate() {
            for &b in &exps[i + 1..] {
                let diff = (a + p - b) % p;
                if diff == 0 || gcd(diff, p) != 1 {
                    return Err(ParamError::ExponentsNotCoprime { a, b, p });
                }
            }
        }
        Ok(Self { p, exps })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.exps
    }

    fn exp(&self, i: usize) -> i64 {
        self.exps[i] as i64
    }
}

/// Dense matrix of ring elements sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingPoly>,
}

impl RingMatrix {
    pub fn zeros(p: usize, rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![RingPoly::zero(p); rows * cols] }
    }

    pub fn identity(p: usize, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, RingPoly::one(p));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingPoly) {
        self.entries[i * self.cols + j] = v;
    }

    /// Matrix product over `R_p`. Uncounted.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(ParamError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ))
            .into());
        }
        let p = self.entries.first().map_or(3, RingPoly::p);
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RingPoly::zero(p);
                for l in 0..self.cols {
                    acc.xor_words(&self.get(i, l).mul(other.get(l, j))?);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix over `R_p`. Uncounted.
    pub fn left_mul(&self, u: &[RingPoly]) -> Result<Vec<RingPoly>> {
        if u.len() != self.rows {
            return Err(ParamError::Dimension(format!("vector of {} against {} rows", u.len(), self.rows)).into());
        }
        let mut out = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut acc = RingPoly::zero(u[0].p());
            for (i, ui) in u.iter().enumerate() {
                acc.xor_words(&ui.mul(self.get(i, j))?);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// `rows.len() x cols` matrix with entry `(i, j) = x^(j * rows[i])`.
pub fn vandermonde_matrix(p: usize, rows: &[usize], cols: usize) -> RingMatrix {
    let mut m = RingMatrix::zeros(p, rows.len(), cols);
    for (i, &a) in rows.iter().enumerate() {
        for j in 0..cols {
            m.set(i, j, RingPoly::monomial(p, ((j * a) % p) as i64));
        }
    }
    m
}

pub fn build_vandermonde(e: &ExponentTuple) -> RingMatrix {
    vandermonde_matrix(e.p, &e.exps, e.len())
}

/// The bidiagonal factors of a square Vandermonde matrix, in product order:
/// `V = lower[0] · ... · lower[r-2] · upper[0] · ... · upper[r-2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuFactors {
    pub lower: Vec<RingMatrix>,
    pub upper: Vec<RingMatrix>,
}

impl LuFactors {
    pub fn product(&self, p: usize, r: usize) -> Result<RingMatrix> {
        let mut acc = RingMatrix::identity(p, r);
        for m in self.lower.iter().chain(&self.upper) {
            acc = acc.mul(m)?;
        }
        Ok(acc)
    }
}

pub fn lu_factors(e: &ExponentTuple) -> LuFactors {
    let (p, r) = (e.p, e.len());
    let mono = |x: usize| RingPoly::monomial(p, e.exp(x));
    let lower_factor = |level: usize| {
        let mut m = RingMatrix::identity(p, r);
        let s = r - level - 1;
        for q in s + 1..r {
            m.set(q, q - 1, RingPoly::one(p));
            let mut diag = mono(q);
            diag.xor_words(&mono(s));
            m.set(q, q, diag);
        }
        m
    };
    let upper_factor = |level: usize| {
        let mut m = RingMatrix::identity(p, r);
        let s = r - level - 1;
        for q in s..r - 1 {
            m.set(q, q + 1, mono(q - s));
        }
        m
    };
    LuFactors {
        lower: (1..r).map(lower_factor).collect(),
        upper: (1..r).rev().map(upper_factor).collect(),
    }
}

/// Checks the image condition `v_1(1) = ... = v_r(1)`.
fn check_image(v: &[RingPoly]) -> Result<()> {
    let parity = v[0].parity_at_one();
    if let Some(bad) = v.iter().position(|vi| vi.parity_at_one() != parity) {
        return Err(Error::Input(format!(
            "component {} has parity {} but component 1 has parity {}",
            bad + 1,
            u8::from(!parity),
            u8::from(parity)
        )));
    }
    Ok(())
}

/// One solution of `u · V(e) = v` over `R_p`.
///
/// Runs the forward additions of the upper factors, then the backward
/// divisions of the lower factors. The division producing `u_r` in the first
/// backward pass, and the last division of every later pass, use the
/// any-parity routine; all other divisions use the even-parity routine. With
/// that dispatch the tally grows by exactly
/// `r(r-1)p + (r-1)(p-3) + (r-1)(r-2)(3p-5)/4`, and `u_2..u_r` come back
/// with zero top coefficients.
pub fn solve_lu(e: &ExponentTuple, v: &[RingPoly], tally: &mut XorTally) -> Result<Vec<RingPoly>> {
    let (p, r) = (e.p, e.len());
    if v.len() != r {
        return Err(ParamError::Dimension(format!("{} right-hand sides for a {r}x{r} system", v.len())).into());
    }
    if let Some(bad) = v.iter().find(|vi| vi.p() != p) {
        return Err(ParamError::ModulusMismatch { left: p, right: bad.p() }.into());
    }
    check_image(v)?;
    let a = |m: usize| e.exp(m - 1);
    // 1-based views keep the loop bounds readable
    let mut u: Vec<RingPoly> = v.to_vec();
    for i in 1..r {
        for j in r - i + 1..=r {
            let term = u[j - 2].shift(a(i + j - r));
            u[j - 1].add_assign(&term, tally)?;
        }
    }
    for i in (1..r).rev() {
        let form = if i == 1 { DivisionForm::Any } else { DivisionForm::Even };
        u[r - 1] = u[r - 1].div_binomial(a(r), a(r - i), form, tally)?;
        for j in (r - i + 1..r).rev() {
            let form = if i + j == r + 1 { DivisionForm::Any } else { DivisionForm::Even };
            let next = u[j].clone();
            u[j - 1].add_assign(&next, tally)?;
            u[j - 1] = u[j - 1].div_binomial(a(j), a(r - i), form, tally)?;
        }
        let next = u[r - i].clone();
        u[r - i - 1].add_assign(&next, tally)?;
    }
    Ok(u)
}

/// Precomputed inverse of a square matrix over `F2[x]/M_p(x)`, for solving
/// `u · M = v` by Cramer's rule.
#[derive(Debug, Clone)]
pub struct CramerSystem {
    n: usize,
    // inverse[c][j] = cofactor(j, c) / det
    inverse: Vec<Vec<QuotientPoly>>,
}

impl CramerSystem {
    pub fn new(m: &[Vec<QuotientPoly>]) -> Result<Self, ParamError> {
        let n = m.len();
        if n == 0 || m.iter().any(|row| row.len() != n) {
            return Err(ParamError::Dimension("Cramer system must be square and non-empty".into()));
        }
        let p = m[0][0].p();
        let det_inv = determinant(m).inverse().ok_or(ParamError::Singular)?;
        let mut inverse = vec![vec![QuotientPoly::zero(p); n]; n];
        for (j, row) in m.iter().enumerate() {
            for c in 0..row.len() {
                let cofactor = if n == 1 { QuotientPoly::one(p) } else { determinant(&minor(m, j, c)) };
                inverse[c][j] = cofactor.mul(&det_inv);
            }
        }
        Ok(Self { n, inverse })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `u = v · M^-1`.
    pub fn solve(&self, v: &[QuotientPoly]) -> Vec<QuotientPoly> {
        assert_eq!(v.len(), self.n);
        let p = v[0].p();
        (0..self.n)
            .map(|j| {
                v.iter()
                    .zip(&self.inverse)
                    .fold(QuotientPoly::zero(p), |acc, (vc, row)| acc.add(&vc.mul(&row[j])))
            })
            .collect()
    }
}

fn minor(m: &[Vec<QuotientPoly>], skip_row: usize, skip_col: usize) -> Vec<Vec<QuotientPoly>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip_row)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != skip_col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Determinant over `F2[x]/M_p(x)` by expansion over column subsets; signs
/// vanish in characteristic 2.
pub fn determinant(m: &[Vec<QuotientPoly>]) -> QuotientPoly {
    let n = m.len();
    let p = m[0][0].p();
    let mut dp = vec![QuotientPoly::zero(p); 1 << n];
    dp[0] = QuotientPoly::one(p);
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = QuotientPoly::zero(p);
        for c in (0..n).filter(|c| mask >> c & 1 == 1) {
            let sub = &dp[mask ^ (1 << c)];
            if !sub.is_zero() {
                acc = acc.add(&m[row][c].mul(sub));
            }
        }
        dp[mask] = acc;
    }
    dp[(1 << n) - 1].clone()
}

/// The unique solution of `u · V(e) = v` over `F2[x]/M_p(x)`.
pub fn solve_cramer(e: &ExponentTuple, v: &[QuotientPoly]) -> Result<Vec<QuotientPoly>> {
    if v.len() != e.len() {
        return Err(ParamError::Dimension(format!("{} right-hand sides for {} unknowns", v.len(), e.len())).into());
    }
    let vm = build_vandermonde(e);
    let m: Vec<Vec<QuotientPoly>> = (0..vm.rows())
        .map(|i| (0..vm.cols()).map(|j| QuotientPoly::reduce(vm.get(i, j))).collect())
        .collect();
    Ok(CramerSystem::new(&m)?.solve(v))
}
