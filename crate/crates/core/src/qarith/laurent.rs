//! Laurent polynomials in `q` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element of `Z[q, q^-1]`.
///
/// `coeffs[k]` is the coefficient of `q^(lo + k)`. Zero is the empty vector
/// with `lo == 0`; otherwise both ends of `coeffs` are nonzero. Every
/// constructor goes through `normalize`, so structural equality
/// is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentInt {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentInt {
    pub fn new(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentInt { lo, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        LaurentInt::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::new(0, vec![c.into()])
    }

    /// `c * q^k`.
    pub fn monomial<T: Into<BigInt>>(k: i64, c: T) -> Self {
        Self::new(k, vec![c.into()])
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(k, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<T: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent with a nonzero coefficient; `None` for zero.
    pub fn hi(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    /// Lowest exponent; `None` for zero.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        if k < self.lo {
            return BigInt::zero();
        }
        self.coeffs.get((k - self.lo) as usize).cloned().unwrap_or_default()
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentInt { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// The bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        match self.hi() {
            None => Self::zero(),
            Some(hi) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                LaurentInt { lo: -hi, coeffs }
            }
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// All coefficients nonnegative: membership in `N[q, q^-1]`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Membership in `q^-1 Z[q^-1]`.
    pub fn in_qinv_z(&self) -> bool {
        self.hi().is_none_or(|h| h <= -1)
    }

    /// Membership in `q^-1 N[q^-1]`.
    pub fn in_qinv_n(&self) -> bool {
        self.in_qinv_z() && self.is_nonnegative()
    }

    /// Membership in `delta + q^-1 N[q^-1]` where `delta` is 1 or 0.
    pub fn is_almost_delta(&self, diagonal: bool) -> bool {
        if diagonal {
            (self - &Self::one()).in_qinv_n()
        } else {
            self.in_qinv_n()
        }
    }

    /// The part of the polynomial with strictly negative exponents.
    pub fn negative_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())))
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// The ordinary polynomial `q^-lo * self` (lowest exponent moved to 0).
    pub fn trailing_normalized(&self) -> Self {
        self.shift(-self.lo)
    }

    /// Exact division in `Z[q, q^-1]`; `None` when `divisor` does not divide
    /// `self` or is zero.
    pub fn div_exact(&self, divisor: &LaurentInt) -> Option<LaurentInt> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (mut rem, dlead) = (self.coeffs.clone(), divisor.coeffs.last().unwrap());
        let dn = divisor.coeffs.len();
        if rem.len() < dn {
            return None;
        }
        let qlen = rem.len() - dn + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(LaurentInt::new(self.lo - divisor.lo, quot))
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<LaurentInt> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (qt, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(qt);
        }
        Some(LaurentInt::new(self.lo, out))
    }

    /// Pseudo-remainder of ordinary polynomials (both with `lo == 0`).
    fn pseudo_rem(a: &LaurentInt, b: &LaurentInt) -> LaurentInt {
        let mut r = a.coeffs.clone();
        let bl = b.coeffs.last().unwrap();
        let bn = b.coeffs.len();
        while r.len() >= bn && !r.is_empty() {
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let off = r.len() - bn;
            for c in r.iter_mut() {
                *c *= bl;
            }
            for (j, d) in b.coeffs.iter().enumerate() {
                r[off + j] -= &top * d;
            }
            r.pop();
        }
        LaurentInt::new(0, r)
    }

    fn primitive(&self) -> LaurentInt {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_exact_int(&c).unwrap()
        }
    }

    /// gcd in `Z[q]` of two ordinary polynomials, normalized to a positive
    /// leading coefficient. Units `q^k` are ignored: the inputs are first
    /// shifted to have nonzero constant term.
    pub fn poly_gcd(a: &LaurentInt, b: &LaurentInt) -> LaurentInt {
        if a.is_zero() {
            return b.trailing_normalized().positive_lead();
        }
        if b.is_zero() {
            return a.trailing_normalized().positive_lead();
        }
        let content = a.content().gcd(&b.content());
        let mut x = a.trailing_normalized().primitive();
        let mut y = b.trailing_normalized().primitive();
        if x.coeffs.len() < y.coeffs.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = Self::pseudo_rem(&x, &y);
            x = y;
            y = r.trailing_normalized().primitive();
        }
        x.trailing_normalized().primitive().positive_lead().scale(&content)
    }

    fn positive_lead(self) -> LaurentInt {
        if self.leading_coeff().is_some_and(|c| c.is_negative()) {
            -self
        } else {
            self
        }
    }

    /// Evaluates at an integer point `q = x` (x nonzero) as a rational.
    pub fn eval_rational(&self, x: &num_rational::BigRational) -> num_rational::BigRational {
        use num_rational::BigRational;
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let xe = if e >= 0 { x.pow(e as i32) } else { x.recip().pow((-e) as i32) };
            acc += xe * BigRational::from_integer(c.clone());
        }
        acc
    }
}

impl fmt::Display for LaurentInt {
    /// Descending powers, `q^-k` notation: `q^2 + 1 + q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let show_coeff = !abs.is_one() || e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({self})")
    }
}

impl PartialOrd for LaurentInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only to sort deterministically: by highest exponent,
/// then coefficients from the top down.
impl Ord for LaurentInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hi()
            .cmp(&other.hi())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then_with(|| other.lo.cmp(&self.lo))
    }
}

fn add_impl(a: &LaurentInt, b: &LaurentInt, negate_b: bool) -> LaurentInt {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b.clone() } else { b.clone() };
    }
    let lo = a.lo.min(b.lo);
    let hi = a.hi().unwrap().max(b.hi().unwrap());
    let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (k, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.lo - lo) as usize + k] += c;
    }
    for (k, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.lo - lo) as usize + k];
        if negate_b {
            *slot -= c;
        } else {
            *slot += c;
        }
    }
    LaurentInt::new(lo, coeffs)
}

impl Add<&LaurentInt> for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        add_impl(self, rhs, false)
    }
}

impl Sub<&LaurentInt> for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        add_impl(self, rhs, true)
    }
}

impl Mul<&LaurentInt> for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() || rhs.is_zero() {
            return LaurentInt::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentInt::new(self.lo + rhs.lo, coeffs)
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(mut self) -> LaurentInt {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentInt> for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentInt> for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: &LaurentInt) -> LaurentInt {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentInt> for &LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&LaurentInt> for LaurentInt {
    fn sub_assign(&mut self, rhs: &LaurentInt) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for LaurentInt {
    fn sum<I: Iterator<Item = LaurentInt>>(iter: I) -> Self {
        iter.fold(LaurentInt::zero(), |a, b| a + b)
    }
}

impl From<i64> for LaurentInt {
    fn from(c: i64) -> Self {
        LaurentInt::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(terms: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(terms.iter().copied())
    }

    #[test]
    fn difference_of_squares() {
        let a = l(&[(1, 1), (-1, 1)]);
        let b = l(&[(1, 1), (-1, -1)]);
        assert_eq!(&a * &b, l(&[(2, 1), (-2, -1)]));
    }

    #[test]
    fn zero_is_canonical() {
        let z = l(&[(3, 1), (3, -1)]);
        assert!(z.is_zero());
        assert_eq!(z.lo(), 0);
        assert_eq!(z, LaurentInt::zero());
        let x = l(&[(2, 5)]);
        assert_eq!(&LaurentInt::zero() + &x, x);
    }

    #[test]
    fn bar_reverses_exponents() {
        let x = l(&[(2, 1), (-1, 3)]);
        assert_eq!(x.bar(), l(&[(-2, 1), (1, 3)]));
        assert_eq!(x.bar().bar(), x);
    }

    #[test]
    fn display_descending() {
        assert_eq!(l(&[(2, 1), (0, 1), (-2, 1)]).to_string(), "q^2 + 1 + q^-2");
        assert_eq!(l(&[(1, 1), (-1, -1)]).to_string(), "q - q^-1");
        assert_eq!(l(&[(-1, -2)]).to_string(), "-2q^-1");
        assert_eq!(LaurentInt::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = l(&[(2, 1), (0, -1)]);
        let b = l(&[(1, 1), (0, -1)]);
        assert_eq!(a.div_exact(&b), Some(l(&[(1, 1), (0, 1)])));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(l(&[(0, 1), (1, 1)]).div_exact(&l(&[(0, 2)])), None);
    }

    #[test]
    fn gcd_of_polynomials() {
        // (q-1)(q+1) and (q-1)(q+2)
        let a = l(&[(2, 1), (0, -1)]);
        let b = l(&[(2, 1), (1, 1), (0, -2)]);
        assert_eq!(LaurentInt::poly_gcd(&a, &b), l(&[(1, 1), (0, -1)]));
        // integer content participates
        let c = l(&[(1, 4), (0, 2)]);
        let d = l(&[(1, 6), (0, 3)]);
        assert_eq!(LaurentInt::poly_gcd(&c, &d), l(&[(1, 2), (0, 1)]));
    }
}
