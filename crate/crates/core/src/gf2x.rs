//! Plain polynomials over F2 with no modulus attached.
//!
//! Only used where a true Euclidean domain is needed: inverting a
//! determinant modulo `M_p(x)` and checking residues by long division.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Gf2Poly {
    // bit i of the concatenated words is the coefficient of x^i; no trailing zero words
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    pub fn from_coeffs<I: IntoIterator<Item = bool>>(coeffs: I) -> Self {
        let mut out = Self::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            if c {
                out.flip(i);
            }
        }
        out
    }

    /// `1 + x + ... + x^(p-1)`.
    pub fn all_ones(p: usize) -> Self {
        Self::from_coeffs((0..p).map(|_| true))
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut out = Self { words };
        out.trim();
        out
    }

    fn shl(&self, s: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (s / 64, s % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut out = Self { words };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        if let Some(d) = other.degree() {
            for i in 0..=d {
                if other.coeff(i) {
                    acc = acc.add(&self.shl(i));
                }
            }
        }
        acc
    }

    /// Quotient and remainder of long division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let s = rd - dd;
            quot.flip(s);
            rem = rem.add(&divisor.shl(s));
        }
        (quot, rem)
    }

    /// Inverse of `self` modulo `modulus`, if the two are coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        // invariant: s_i * self == r_i (mod modulus)
        let (mut r0, mut r1) = (modulus.clone(), self.div_rem(modulus).1);
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.add(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0 == Self::one() {
            Some(s0.div_rem(modulus).1)
        } else {
            None
        }
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let terms: Vec<String> = (0..=d)
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(exps: &[usize]) -> Gf2Poly {
        let mut p = Gf2Poly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = poly(&[0, 3, 7, 9]);
        let b = poly(&[0, 1, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 3);
    }

    #[test]
    fn inverse_mod_m5() {
        let m = Gf2Poly::all_ones(5);
        let a = poly(&[0, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(a.mul(&inv).div_rem(&m).1, Gf2Poly::one());
    }

    #[test]
    fn non_coprime_has_no_inverse() {
        // 1 + x^3 shares the factor 1 + x + x^2 with M_9
        let m = Gf2Poly::all_ones(9);
        assert!(poly(&[0, 3]).inverse_mod(&m).is_none());
    }
}
