//! Integer polynomials in `q` and truncated formal characters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{LatticeVector, RootSystem, Weight};

/// Polynomial in `q` with integer coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial(Vec<i64>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial(coeffs)
    }

    pub fn zero() -> Self {
        IntPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        IntPolynomial(vec![1])
    }

    /// `c·q^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        IntPolynomial(v)
    }

    /// `p(q) ↦ p(−q)`.
    pub fn substitute_neg_q(&self) -> Self {
        IntPolynomial(self.0.iter().enumerate().map(|(k, &c)| if k % 2 == 1 { -c } else { c }).collect())
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.0.len().max(rhs.0.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.0.len().max(rhs.0.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (k, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "q".to_string(),
                (1, m) => format!("{m}q"),
                (k, 1) => format!("q^{k}"),
                (k, m) => format!("{m}q^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// A formal series `Σ_μ c_μ e^{base − μ}` over `μ` in the positive root cone,
/// truncated at height `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedCharacter {
    base: Weight,
    terms: BTreeMap<LatticeVector, i64>,
    cutoff: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTerm {
    pub mu: LatticeVector,
    pub c: i64,
}

impl TruncatedCharacter {
    pub fn zero(base: Weight, cutoff: usize) -> Self {
        TruncatedCharacter { base, terms: BTreeMap::new(), cutoff }
    }

    /// `e^{base}`.
    pub fn monomial(base: Weight, cutoff: usize) -> Self {
        let rank = base.rank();
        let mut ch = Self::zero(base, cutoff);
        ch.terms.insert(LatticeVector::zero(rank), 1);
        ch
    }

    pub fn base(&self) -> &Weight {
        &self.base
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Coefficient of `e^{base − μ}`.
    pub fn coeff(&self, mu: &LatticeVector) -> i64 {
        self.terms.get(mu).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms sorted by height, then in the root-listing order.
    pub fn terms(&self) -> Vec<CharacterTerm> {
        let mut v: Vec<CharacterTerm> =
            self.terms.iter().map(|(mu, &c)| CharacterTerm { mu: mu.clone(), c }).collect();
        v.sort_by(|a, b| a.mu.height_lex_cmp(&b.mu));
        v
    }

    fn insert(&mut self, mu: LatticeVector, c: i64) {
        if c == 0 || mu.height() as usize > self.cutoff {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mu) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Multiplication by `e^{new_base − base}`: only the base moves.
    pub fn translate(&self, new_base: Weight) -> Self {
        TruncatedCharacter { base: new_base, terms: self.terms.clone(), cutoff: self.cutoff }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.base.clone(), self.cutoff);
        if k != 0 {
            for (mu, &c) in &self.terms {
                out.terms.insert(mu.clone(), c * k);
            }
        }
        out
    }

    /// `self + k·other`. The base of `other` must lie below this base by an
    /// element of the positive root cone.
    pub fn add_scaled(&mut self, other: &TruncatedCharacter, k: i64, rs: &RootSystem) -> Result<()> {
        let diff = &self.base - &other.base;
        let offset = rs.weight_to_lattice(&diff).ok_or_else(|| {
            Error::Domain(format!("bases {} and {} differ by a non-lattice weight", self.base, other.base))
        })?;
        if !offset.is_nonnegative() {
            return Err(Error::Domain(format!("base {} is not below {}", other.base, self.base)));
        }
        for (mu, &c) in &other.terms {
            self.insert(mu + &offset, c * k);
        }
        Ok(())
    }

    /// Product, truncated at the smaller cutoff.
    pub fn mul(&self, other: &TruncatedCharacter) -> Self {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = Self::zero(&self.base + &other.base, cutoff);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.insert(a + b, ca * cb);
            }
        }
        out
    }
}

/// `1/(1 − e^{−α}) = Σ_k e^{−kα}` for `sign = −1`, or
/// `1/(1 + e^{−α}) = Σ_k (−1)^k e^{−kα}` for `sign = +1`, to height `cutoff`.
pub fn expand_inverse_factor(alpha: &LatticeVector, sign: i8, cutoff: usize) -> TruncatedCharacter {
    let rank = alpha.0.len();
    let mut ch = TruncatedCharacter::zero(Weight::zero(rank), cutoff);
    let h = alpha.height().max(1) as usize;
    let mut c = 1;
    for k in 0..=cutoff / h {
        ch.insert(alpha.scale(k as i64), c);
        if sign > 0 {
            c = -c;
        }
    }
    ch
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::new(v.to_vec())
    }

    #[test]
    fn polynomial_arithmetic() {
        assert_eq!(p(&[1, 1]) + p(&[1, -1]), p(&[2]));
        assert_eq!(p(&[1, 1]) * p(&[0, 1]), p(&[0, 1, 1]));
        assert_eq!(IntPolynomial::zero() * p(&[1, 1]), IntPolynomial::zero());
        assert_eq!(p(&[1, 1]) - p(&[1, 1]), IntPolynomial::zero());
        assert_eq!(p(&[1, 2, 0, 0]).coeffs(), &[1, 2]);
        assert_eq!(p(&[3]).shift(2), p(&[0, 0, 3]));
        assert_eq!(IntPolynomial::monomial(-2, 1), p(&[0, -2]));
        assert_eq!(p(&[1, 1]).eval(2), 3);
    }

    #[test]
    fn degree_is_additive() {
        let a = p(&[1, 0, 3]);
        let b = p(&[2, 5]);
        assert_eq!((&a * &b).degree(), Some(3));
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn neg_q_substitution() {
        assert_eq!(p(&[1, 1]).substitute_neg_q(), p(&[1, -1]));
        assert_eq!(p(&[1, 0, 1]).substitute_neg_q(), p(&[1, 0, 1]));
        let x = p(&[2, -3, 5, 7]);
        assert_eq!(x.substitute_neg_q().substitute_neg_q(), x);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[1, 1]).to_string(), "1+q");
        assert_eq!(p(&[1, -2, 0, 1]).to_string(), "1-2q+q^3");
        assert_eq!(p(&[0, 0, -1]).to_string(), "-q^2");
    }

    #[test]
    fn serde_as_array() {
        assert_eq!(serde_json::to_string(&p(&[1, 0, 2])).unwrap(), "[1,0,2]");
        let back: IntPolynomial = serde_json::from_str("[1,1]").unwrap();
        assert_eq!(back, p(&[1, 1]));
    }

    fn one_minus(alpha: &LatticeVector, sign: i8, cutoff: usize) -> TruncatedCharacter {
        // 1 ± e^{−α}
        let rank = alpha.0.len();
        let mut ch = TruncatedCharacter::monomial(Weight::zero(rank), cutoff);
        ch.insert(alpha.clone(), if sign > 0 { 1 } else { -1 });
        ch
    }

    #[test]
    fn geometric_series_multiply_back() {
        let alpha = LatticeVector(vec![1]);
        let pk = expand_inverse_factor(&alpha, -1, 3);
        assert_eq!(pk.terms().iter().map(|t| t.c).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let kk = expand_inverse_factor(&alpha, 1, 2);
        assert_eq!(kk.terms().iter().map(|t| t.c).collect::<Vec<_>>(), vec![1, -1, 1]);
        assert_eq!(expand_inverse_factor(&alpha, 1, 0).terms().len(), 1);

        for beta in [LatticeVector(vec![1, 0]), LatticeVector(vec![1, 1]), LatticeVector(vec![2, 3])] {
            for sign in [-1, 1] {
                let prod = expand_inverse_factor(&beta, sign, 7).mul(&one_minus(&beta, sign, 7));
                assert_eq!(prod, TruncatedCharacter::monomial(Weight::zero(2), 7));
            }
        }
    }

    #[test]
    fn truncated_product_commutes_and_associates() {
        let a = expand_inverse_factor(&LatticeVector(vec![1, 0]), 1, 6);
        let b = expand_inverse_factor(&LatticeVector(vec![0, 1]), -1, 6);
        let c = expand_inverse_factor(&LatticeVector(vec![1, 1]), -1, 6);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn add_scaled_shifts_lower_base() {
        let rs = RootSystem::from_label("A1", &[]).unwrap();
        let hi: Weight = "1".parse().unwrap();
        let lo: Weight = "-1".parse().unwrap(); // hi − α
        let mut a = TruncatedCharacter::monomial(hi.clone(), 4);
        let b = TruncatedCharacter::monomial(lo.clone(), 4);
        a.add_scaled(&b, 2, &rs).unwrap();
        assert_eq!(a.coeff(&LatticeVector(vec![1])), 2);
        let mut c = TruncatedCharacter::monomial(lo, 4);
        assert!(c.add_scaled(&TruncatedCharacter::monomial(hi, 4), 1, &rs).is_err());
        let mut d = TruncatedCharacter::monomial("0".parse().unwrap(), 4);
        let half = TruncatedCharacter::monomial("1/2".parse().unwrap(), 4);
        assert!(d.add_scaled(&half, 1, &rs).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let rs = RootSystem::from_label("A1", &[]).unwrap();
        let base: Weight = "0".parse().unwrap();
        let mut a = TruncatedCharacter::monomial(base.clone(), 3);
        a.add_scaled(&TruncatedCharacter::monomial(base, 3), -1, &rs).unwrap();
        assert!(a.is_zero());
    }
}
