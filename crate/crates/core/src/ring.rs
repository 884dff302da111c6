//! Arithmetic in `R_p = F2[x]/(1 + x^p)` and in its quotient `F2[x]/M_p(x)`.
//!
//! A [`RingPoly`] holds the `p` coefficients of one array column. Every
//! routine that performs bit-level exclusive-ors charges them to an explicit
//! [`XorTally`]: adding two length-`L` sequences costs `L`, copies and
//! cyclic shifts are free. General multiplication is uncounted and only
//! serves oracles and tests.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, ParamError, Result};
use crate::gf2x::Gf2Poly;

/// Running count of bit-level XOR operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XorTally {
    count: u64,
}

impl XorTally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn charge(&mut self, xors: u64) {
        self.count += xors;
    }
}

/// Which of the two sparse division routines to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisionForm {
    /// Any solution; the quotient has a zero top coefficient. Costs `p - 3`.
    Any,
    /// The unique solution with an even number of nonzero terms. Costs `(3p - 5) / 2`.
    Even,
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks that `p` is an odd modulus of at least 3.
pub fn check_modulus(p: usize) -> Result<(), ParamError> {
    if p < 3 || p % 2 == 0 {
        return Err(ParamError::BadModulus(p));
    }
    Ok(())
}

/// Reduces a shift amount into `1..p` and checks it is a unit modulo `p`.
pub(crate) fn unit_shift(d: i64, p: usize) -> Result<usize, ParamError> {
    let dm = d.rem_euclid(p as i64) as usize;
    if dm == 0 {
        return Err(ParamError::ZeroShift { d, p });
    }
    if gcd(dm, p) != 1 {
        return Err(ParamError::ShiftNotCoprime { d, p });
    }
    Ok(dm)
}

/// An element of `R_p`, stored as `p` packed coefficient bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPoly {
    p: usize,
    // bit i is the coefficient of x^i; bits at positions >= p are always zero
    words: SmallVec<[u64; 2]>,
}

impl RingPoly {
    /// The zero polynomial. Panics if `p` is not an odd integer >= 3.
    pub fn zero(p: usize) -> Self {
        assert!(check_modulus(p).is_ok(), "invalid ring modulus p={p}");
        Self { p, words: SmallVec::from_elem(0, p.div_ceil(64)) }
    }

    pub fn one(p: usize) -> Self {
        Self::monomial(p, 0)
    }

    /// `x^e`, with `e` taken modulo `p`.
    pub fn monomial(p: usize, e: i64) -> Self {
        let mut out = Self::zero(p);
        out.set_bit(e.rem_euclid(p as i64) as usize, true);
        out
    }

    /// Sum of `x^e` over the given exponents (reduced mod `p`; repeats cancel).
    pub fn from_exponents(p: usize, exps: &[i64]) -> Self {
        let mut out = Self::zero(p);
        for &e in exps {
            out.flip(e.rem_euclid(p as i64) as usize);
        }
        out
    }

    /// Coefficients in order `x^0, x^1, ...`; missing trailing entries are zero.
    pub fn from_coeffs<I: IntoIterator<Item = bool>>(p: usize, coeffs: I) -> Self {
        let mut out = Self::zero(p);
        for (i, c) in coeffs.into_iter().enumerate() {
            assert!(i < p, "more than p={p} coefficients");
            out.set_bit(i, c);
        }
        out
    }

    /// Low `p` bits of `word` as coefficients. Panics if `p > 64`.
    pub fn from_word(p: usize, word: u64) -> Self {
        assert!(p <= 64, "from_word needs p <= 64");
        let mut out = Self::zero(p);
        out.words[0] = word & Self::mask(p);
        out
    }

    /// `M_p(x) = 1 + x + ... + x^(p-1)`.
    pub fn all_ones(p: usize) -> Self {
        let mut out = Self::zero(p);
        let n = out.words.len();
        for (i, w) in out.words.iter_mut().enumerate() {
            *w = if i + 1 == n { Self::mask(p - 64 * i) } else { u64::MAX };
        }
        out
    }

    fn mask(bits: usize) -> u64 {
        if bits >= 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.p);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, v: bool) {
        assert!(i < self.p, "coefficient index {i} out of range for p={}", self.p);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.p, "coefficient index {i} out of range for p={}", self.p);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Coefficient of `x^(p-1)`.
    pub fn top(&self) -> bool {
        self.bit(self.p - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.p).map(|i| self.bit(i))
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..self.p).filter(|&i| self.bit(i)).collect()
    }

    /// Evaluation at `x = 1`: the parity of the number of nonzero terms.
    pub fn parity_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    fn same_ring(&self, other: &Self) -> Result<(), ParamError> {
        if self.p != other.p {
            return Err(ParamError::ModulusMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, tally: &mut XorTally) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign(other, tally)?;
        Ok(out)
    }

    /// `self += other`, charging `p` XORs.
    pub fn add_assign(&mut self, other: &Self, tally: &mut XorTally) -> Result<()> {
        self.same_ring(other)?;
        self.xor_words(other);
        tally.charge(self.p as u64);
        Ok(())
    }

    /// `self += other` where `other` is known to vanish at `zero_at`, so only
    /// `p - 1` positions need an XOR.
    pub(crate) fn add_assign_known_zero(&mut self, other: &Self, zero_at: usize, tally: &mut XorTally) {
        debug_assert_eq!(self.p, other.p);
        debug_assert!(!other.bit(zero_at));
        self.xor_words(other);
        tally.charge(self.p as u64 - 1);
    }

    /// Uncounted coefficientwise XOR, for oracles and algebraic encoding.
    pub(crate) fn xor_words(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Multiplication by `x^d`, a cyclic rotation. Free.
    pub fn shift(&self, d: i64) -> Self {
        let p = self.p;
        let d = d.rem_euclid(p as i64) as usize;
        if d == 0 {
            return self.clone();
        }
        if self.words.len() == 1 {
            let w = self.words[0];
            let rotated = ((w << d) | (w >> (p - d))) & Self::mask(p);
            return Self { p, words: SmallVec::from_elem(rotated, 1) };
        }
        let mut out = Self::zero(p);
        for i in 0..p {
            if self.bit(i) {
                out.set_bit((i + d) % p, true);
            }
        }
        out
    }

    /// Schoolbook product modulo `1 + x^p`. Not tallied.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut acc = Self::zero(self.p);
        for i in 0..self.p {
            if self.bit(i) {
                acc.xor_words(&other.shift(i as i64));
            }
        }
        Ok(acc)
    }

    /// Canonical residue modulo `M_p(x)`: folds the top coefficient into the
    /// others. Costs `p - 1` when the top coefficient is set, nothing otherwise.
    pub fn reduce_mod_mp(&self, tally: &mut XorTally) -> Self {
        let mut out = self.clone();
        if out.top() {
            out.xor_words(&Self::all_ones(self.p));
            tally.charge(self.p as u64 - 1);
        }
        out
    }

    /// Solves `(1 + x^d) g = self` for the quotient with `g_{p-1} = 0`
    /// using `p - 3` XORs.
    pub fn div_one_plus_xd_any(&self, d: i64, tally: &mut XorTally) -> Result<Self> {
        let p = self.p;
        let d = unit_shift(d, p)?;
        self.require_even("(1 + x^d) division")?;
        // walk the coset p-1, p-1-d, p-1-2d, ... which covers every index once
        let idx = |m: usize| (p - 1 + p * p - m * d % p) % p;
        let mut g = Self::zero(p);
        g.set_bit(idx(1), self.bit(idx(0)));
        for i in 1..=p - 3 {
            g.set_bit(idx(i + 1), self.bit(idx(i)) ^ g.bit(idx(i)));
        }
        g.set_bit(idx(p - 1), self.bit(idx(p - 1)));
        tally.charge(p as u64 - 3);
        Ok(g)
    }

    /// Solves `(1 + x^d) g = self` for the quotient with an even number of
    /// nonzero terms using `(3p - 5) / 2` XORs.
    pub fn div_one_plus_xd_even(&self, d: i64, tally: &mut XorTally) -> Result<Self> {
        let p = self.p;
        let d = unit_shift(d, p)?;
        self.require_even("(1 + x^d) division")?;
        let at = |l: usize| (l * d) % p;
        let mut g0 = false;
        for l in (2..p).step_by(2) {
            g0 ^= self.bit(at(l));
        }
        let mut g = Self::zero(p);
        g.set_bit(0, g0);
        for l in 1..p {
            g.set_bit(at(l), self.bit(at(l)) ^ g.bit(at(l - 1)));
        }
        tally.charge(((p - 3) / 2 + (p - 1)) as u64);
        Ok(g)
    }

    /// Solves `(x^a + x^b) g = self` by shifting by `-b` and dividing by
    /// `1 + x^(a-b)` with the requested routine.
    pub fn div_binomial(&self, a: i64, b: i64, form: DivisionForm, tally: &mut XorTally) -> Result<Self> {
        let shifted = self.shift(-b);
        match form {
            DivisionForm::Any => shifted.div_one_plus_xd_any(a - b, tally),
            DivisionForm::Even => shifted.div_one_plus_xd_even(a - b, tally),
        }
    }

    fn require_even(&self, what: &str) -> Result<()> {
        if self.parity_at_one() {
            return Err(Error::Input(format!("{what}: dividend {self} has an odd number of terms")));
        }
        Ok(())
    }

    pub(crate) fn to_gf2(&self) -> Gf2Poly {
        Gf2Poly::from_coeffs(self.coeffs())
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps = self.exponents();
        if exps.is_empty() {
            return write!(f, "0");
        }
        for (n, e) in exps.into_iter().enumerate() {
            if n > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingPoly(p={}, {})", self.p, self)
    }
}

/// A residue modulo `M_p(x)`: degree below `p - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuotientPoly {
    // stored as a ring element whose top coefficient is zero
    inner: RingPoly,
}

impl QuotientPoly {
    pub fn zero(p: usize) -> Self {
        Self { inner: RingPoly::zero(p) }
    }

    pub fn one(p: usize) -> Self {
        Self { inner: RingPoly::one(p) }
    }

    /// Canonical residue of a ring element.
    pub fn reduce(a: &RingPoly) -> Self {
        Self { inner: a.reduce_mod_mp(&mut XorTally::new()) }
    }

    /// The residue as a ring element with zero top coefficient.
    pub fn as_ring(&self) -> &RingPoly {
        &self.inner
    }

    pub fn into_ring(self) -> RingPoly {
        self.inner
    }

    pub fn p(&self) -> usize {
        self.inner.p
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.inner.p - 1).map(|i| self.inner.bit(i))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut inner = self.inner.clone();
        inner.xor_words(&other.inner);
        Self { inner }
    }

    /// Product: multiply in `R_p`, then fold (`M_p` divides `1 + x^p`).
    pub fn mul(&self, other: &Self) -> Self {
        let prod = self.inner.mul(&other.inner).expect("residues share p");
        Self::reduce(&prod)
    }

    /// Multiplicative inverse by extended Euclid against `M_p(x)`.
    pub fn inverse(&self) -> Option<Self> {
        let p = self.p();
        let inv = self.inner.to_gf2().inverse_mod(&Gf2Poly::all_ones(p))?;
        let mut out = RingPoly::zero(p);
        for i in 0..p - 1 {
            out.set_bit(i, inv.coeff(i));
        }
        Some(Self { inner: out })
    }
}

impl fmt::Debug for QuotientPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientPoly(p={}, {})", self.p(), self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(exps: &[i64]) -> RingPoly {
        RingPoly::from_exponents(5, exps)
    }

    #[test]
    fn add_examples() {
        let mut t = XorTally::new();
        assert!(rp(&[0, 1]).add(&rp(&[0, 1]), &mut t).unwrap().is_zero());
        assert_eq!(rp(&[0, 1]).add(&rp(&[1, 2]), &mut t).unwrap(), rp(&[0, 2]));
        assert_eq!(rp(&[3]).add(&RingPoly::zero(5), &mut t).unwrap(), rp(&[3]));
        assert_eq!(t.count(), 15);
    }

    #[test]
    fn add_rejects_mismatched_rings() {
        let err = RingPoly::one(5).add(&RingPoly::one(7), &mut XorTally::new()).unwrap_err();
        assert!(matches!(err, Error::Param(ParamError::ModulusMismatch { left: 5, right: 7 })));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(RingPoly::one(5).shift(1), rp(&[1]));
        assert_eq!(rp(&[4]).shift(2), rp(&[1]));
        assert_eq!(rp(&[0, 2, 3]).shift(0), rp(&[0, 2, 3]));
        assert_eq!(rp(&[0, 2]).shift(-3), rp(&[2, 4]));
    }

    #[test]
    fn multiword_shift_matches_definition() {
        let p = 131;
        let a = RingPoly::from_exponents(p, &[0, 5, 63, 64, 130]);
        assert_eq!(a.shift(70), RingPoly::from_exponents(p, &[70, 75, 133, 134, 200]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(rp(&[0, 1]).mul(&rp(&[1, 2, 3, 4])).unwrap(), rp(&[0, 1]));
        assert_eq!(rp(&[1, 3]).mul(&RingPoly::one(5)).unwrap(), rp(&[1, 3]));
        assert!(RingPoly::all_ones(5).mul(&rp(&[0, 1])).unwrap().is_zero());
    }

    #[test]
    fn parity_examples() {
        assert!(!rp(&[0, 1]).parity_at_one());
        assert!(rp(&[0, 1, 2]).parity_at_one());
        assert!(!RingPoly::zero(5).parity_at_one());
    }

    #[test]
    fn reduce_examples() {
        let mut t = XorTally::new();
        assert!(RingPoly::all_ones(5).reduce_mod_mp(&mut t).is_zero());
        assert_eq!(t.count(), 4);
        assert_eq!(rp(&[4]).reduce_mod_mp(&mut t), rp(&[0, 1, 2, 3]));
        assert_eq!(t.count(), 8);
        assert_eq!(rp(&[0, 3]).reduce_mod_mp(&mut t), rp(&[0, 3]));
        assert_eq!(t.count(), 8);
    }

    #[test]
    fn any_form_division_examples() {
        let mut t = XorTally::new();
        assert_eq!(rp(&[0, 1]).div_one_plus_xd_any(1, &mut t).unwrap(), RingPoly::one(5));
        assert_eq!(rp(&[1, 2]).div_one_plus_xd_any(1, &mut t).unwrap(), rp(&[1]));
        assert!(RingPoly::zero(5).div_one_plus_xd_any(1, &mut t).unwrap().is_zero());
        assert_eq!(t.count(), 6);
    }

    #[test]
    fn even_form_division_examples() {
        let mut t = XorTally::new();
        assert_eq!(rp(&[0, 1]).div_one_plus_xd_even(1, &mut t).unwrap(), rp(&[1, 2, 3, 4]));
        assert_eq!(rp(&[0, 2]).div_one_plus_xd_even(2, &mut t).unwrap(), rp(&[1, 2, 3, 4]));
        assert!(RingPoly::zero(5).div_one_plus_xd_even(3, &mut t).unwrap().is_zero());
        assert_eq!(t.count(), 15);
    }

    #[test]
    fn p3_division_costs() {
        let f = RingPoly::from_exponents(3, &[0, 2]);
        let mut t = XorTally::new();
        let g = f.div_one_plus_xd_any(1, &mut t).unwrap();
        assert_eq!(t.count(), 0);
        assert_eq!(RingPoly::from_exponents(3, &[0, 1]).mul(&g).unwrap(), f);
        let g = f.div_one_plus_xd_even(1, &mut t).unwrap();
        assert_eq!(t.count(), 2);
        assert_eq!(RingPoly::from_exponents(3, &[0, 1]).mul(&g).unwrap(), f);
    }

    #[test]
    fn division_errors() {
        let mut t = XorTally::new();
        let f = rp(&[0, 1]);
        assert!(matches!(f.div_one_plus_xd_any(5, &mut t), Err(Error::Param(ParamError::ZeroShift { .. }))));
        let f9 = RingPoly::from_exponents(9, &[0, 1]);
        assert!(matches!(
            f9.div_one_plus_xd_even(3, &mut t),
            Err(Error::Param(ParamError::ShiftNotCoprime { .. }))
        ));
        assert!(matches!(rp(&[0, 1, 2]).div_one_plus_xd_any(1, &mut t), Err(Error::Input(_))));
        assert!(matches!(
            f.div_binomial(2, 2, DivisionForm::Any, &mut t),
            Err(Error::Param(ParamError::ZeroShift { .. }))
        ));
        assert_eq!(t.count(), 0);
    }

    #[test]
    fn binomial_division_examples() {
        let mut t = XorTally::new();
        assert_eq!(rp(&[1, 2]).div_binomial(1, 0, DivisionForm::Any, &mut t).unwrap(), rp(&[1]));
        assert_eq!(rp(&[2, 3]).div_binomial(2, 1, DivisionForm::Any, &mut t).unwrap(), rp(&[1]));
        assert!(RingPoly::zero(5).div_binomial(3, 1, DivisionForm::Even, &mut t).unwrap().is_zero());
    }

    #[test]
    fn quotient_inverse() {
        let a = QuotientPoly::reduce(&rp(&[0, 1, 3]));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QuotientPoly::one(5));
        assert!(QuotientPoly::zero(5).inverse().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(rp(&[0, 1, 4]).to_string(), "1+x+x^4");
        assert_eq!(RingPoly::zero(5).to_string(), "0");
    }
}
