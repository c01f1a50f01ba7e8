//! The field `Q(q)` as reduced fractions of Laurent polynomials.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::LaurentInt;
use crate::error::{Error, Result};

/// An element of `Q(q)`.
///
/// The denominator is an ordinary polynomial with nonzero constant term and
/// positive leading coefficient, coprime (in `Z[q]`, content included) to the
/// numerator. Under that normalization equal values are equal structures.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    num: LaurentInt,
    den: LaurentInt,
}

impl RatQ {
    pub fn zero() -> Self {
        RatQ { num: LaurentInt::zero(), den: LaurentInt::one() }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentInt::one())
    }

    pub fn from_laurent(num: LaurentInt) -> Self {
        RatQ { num, den: LaurentInt::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_laurent(LaurentInt::constant(c))
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_laurent(LaurentInt::q_pow(k))
    }

    /// `num / den`, reduced. Errors on a zero denominator.
    pub fn new(num: LaurentInt, den: LaurentInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentInt, den: LaurentInt) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // move the power of q out of the denominator
        let shift = den.lo();
        let mut num = num.shift(-shift);
        let mut den = den.trailing_normalized();
        if den.coeffs().len() == 1 {
            let d = den.coeffs()[0].clone();
            if let Some(n) = num.div_exact_int(&d) {
                return RatQ { num: n, den: LaurentInt::one() };
            }
        }
        let g = LaurentInt::poly_gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
            let s = den.lo();
            num = num.shift(-s);
            den = den.trailing_normalized();
        }
        if den.leading_coeff().is_some_and(|c| c.is_negative()) {
            num = -num;
            den = -den;
        }
        RatQ { num, den }
    }

    pub fn num(&self) -> &LaurentInt {
        &self.num
    }

    pub fn den(&self) -> &LaurentInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, if it is one.
    pub fn as_laurent(&self) -> Option<&LaurentInt> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatQ) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Division by a nonzero Laurent polynomial.
    pub fn div_laurent(&self, d: &LaurentInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.num.clone(), &self.den * d))
    }

    pub fn shift(&self, k: i64) -> Self {
        RatQ { num: self.num.shift(k), den: self.den.clone() }
    }

    pub fn bar(&self) -> Self {
        if self.den.is_one() {
            return RatQ { num: self.num.bar(), den: LaurentInt::one() };
        }
        Self::reduce(self.num.bar(), self.den.bar())
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn mul_laurent(&self, c: &LaurentInt) -> Self {
        if self.den.is_one() {
            return RatQ { num: &self.num * c, den: LaurentInt::one() };
        }
        Self::reduce(&self.num * c, self.den.clone())
    }

    /// Coefficients of the expansion at `q = infinity` for every exponent
    /// `>= min_exp`, in descending order starting at the top exponent.
    ///
    /// `self = sum_k c_k q^k` as a Laurent series in `q^-1`; the returned
    /// vector pairs each exponent with its rational coefficient.
    pub fn expand_at_infinity(&self, min_exp: i64) -> Vec<(i64, BigRational)> {
        if self.is_zero() {
            return Vec::new();
        }
        let n_hi = self.num.hi().unwrap();
        let d_hi = self.den.hi().unwrap();
        let top = n_hi - d_hi;
        if top < min_exp {
            return Vec::new();
        }
        // series in x = q^-1: num = q^n_hi * N(x), den = q^d_hi * D(x)
        let nx: Vec<BigInt> = self.num.coeffs().iter().rev().cloned().collect();
        let dx: Vec<BigInt> = self.den.coeffs().iter().rev().cloned().collect();
        let d0 = BigRational::from_integer(dx[0].clone());
        let count = (top - min_exp + 1) as usize;
        let mut s: Vec<BigRational> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = BigRational::from_integer(nx.get(k).cloned().unwrap_or_default());
            for l in 1..=k.min(dx.len() - 1) {
                acc -= BigRational::from_integer(dx[l].clone()) * &s[k - l];
            }
            s.push(acc / &d0);
        }
        s.into_iter().enumerate().map(|(k, c)| (top - k as i64, c)).collect()
    }
}

impl fmt::Display for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({self})")
    }
}

impl Default for RatQ {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentInt> for RatQ {
    fn from(p: LaurentInt) -> Self {
        RatQ::from_laurent(p)
    }
}

impl From<i64> for RatQ {
    fn from(c: i64) -> Self {
        RatQ::from_int(c)
    }
}

impl Add<&RatQ> for &RatQ {
    type Output = RatQ;
    fn add(self, rhs: &RatQ) -> RatQ {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatQ::from_laurent(&self.num + &rhs.num);
            }
            return RatQ::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatQ::reduce(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl Sub<&RatQ> for &RatQ {
    type Output = RatQ;
    fn sub(self, rhs: &RatQ) -> RatQ {
        self + &(-rhs)
    }
}

impl Mul<&RatQ> for &RatQ {
    type Output = RatQ;
    fn mul(self, rhs: &RatQ) -> RatQ {
        if self.is_zero() || rhs.is_zero() {
            return RatQ::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatQ::from_laurent(&self.num * &rhs.num);
        }
        RatQ::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ { num: -self.num, den: self.den }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatQ> for RatQ {
            type Output = RatQ;
            fn $m(self, rhs: RatQ) -> RatQ {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatQ> for RatQ {
            type Output = RatQ;
            fn $m(self, rhs: &RatQ) -> RatQ {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatQ> for &RatQ {
            type Output = RatQ;
            fn $m(self, rhs: RatQ) -> RatQ {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&RatQ> for RatQ {
    fn add_assign(&mut self, rhs: &RatQ) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RatQ> for RatQ {
    fn sub_assign(&mut self, rhs: &RatQ) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for RatQ {
    fn sum<I: Iterator<Item = RatQ>>(iter: I) -> Self {
        iter.fold(RatQ::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(terms: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(terms.iter().copied())
    }

    #[test]
    fn reduces_common_factor() {
        let x = RatQ::new(l(&[(2, 1), (0, -1)]), l(&[(1, 1), (0, -1)])).unwrap();
        assert_eq!(x.num(), &l(&[(1, 1), (0, 1)]));
        assert!(x.den().is_one());
    }

    #[test]
    fn denominator_normalization() {
        // 1 / (-q) = -q^-1
        let x = RatQ::new(LaurentInt::one(), l(&[(1, -1)])).unwrap();
        assert_eq!(x, RatQ::from_laurent(l(&[(-1, -1)])));
        // 2 / (2q + 2) = 1 / (q + 1)
        let y = RatQ::new(l(&[(0, 2)]), l(&[(1, 2), (0, 2)])).unwrap();
        assert_eq!(y.den(), &l(&[(1, 1), (0, 1)]));
        assert!(y.num().is_one());
        // 3 / (2q + 2) keeps the integer denominator content
        let z = RatQ::new(l(&[(0, 3)]), l(&[(1, 2), (0, 2)])).unwrap();
        assert_eq!(z.den(), &l(&[(1, 2), (0, 2)]));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(RatQ::new(LaurentInt::one(), LaurentInt::zero()), Err(Error::DivisionByZero)));
        assert!(RatQ::one().inv().is_ok());
        assert!(RatQ::zero().inv().is_err());
    }

    #[test]
    fn bar_of_fraction() {
        // 1/(q+2) -> 1/(q^-1+2) = q/(1+2q)
        let x = RatQ::new(LaurentInt::one(), l(&[(1, 1), (0, 2)])).unwrap();
        let b = x.bar();
        assert_eq!(b, RatQ::new(l(&[(1, 1)]), l(&[(1, 2), (0, 1)])).unwrap());
        assert_eq!(b.bar(), x);
    }

    #[test]
    fn expansion_at_infinity() {
        // 1/(1 - q^-2)... use q^2/(q^2-1) = 1 + q^-2 + q^-4 + ...
        let x = RatQ::new(l(&[(2, 1)]), l(&[(2, 1), (0, -1)])).unwrap();
        let e = x.expand_at_infinity(-4);
        let got: Vec<(i64, i64)> = e
            .iter()
            .map(|(k, c)| (*k, c.to_integer().try_into().unwrap()))
            .collect();
        assert_eq!(got, vec![(0, 1), (-1, 0), (-2, 1), (-3, 0), (-4, 1)]);
        // q + q^-1 exactly
        let y = RatQ::from_laurent(l(&[(1, 1), (-1, 1)]));
        let e = y.expand_at_infinity(0);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].0, 1);
    }
}
