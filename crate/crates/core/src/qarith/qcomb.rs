//! Balanced quantum integers, factorials and binomials.

use super::LaurentInt;
use crate::error::{Error, Result};

/// `[n] = (q^n - q^-n) / (q - q^-1)`, for any integer `n` (`[-n] = -[n]`).
pub fn qint(n: i64) -> LaurentInt {
    if n < 0 {
        return -qint(-n);
    }
    // q^(n-1) + q^(n-3) + ... + q^(1-n)
    LaurentInt::from_terms((0..n).map(|k| (n - 1 - 2 * k, 1)))
}

/// `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn qfact(n: u32) -> LaurentInt {
    (1..=n as i64).fold(LaurentInt::one(), |acc, k| &acc * &qint(k))
}

/// The balanced q-binomial `[m]! / ([n]! [m-n]!)`, computed by exact
/// division. An inexact quotient can only mean an arithmetic bug and is
/// reported as [`Error::InexactDivision`].
pub fn qbinom(m: u32, n: u32) -> Result<LaurentInt> {
    if n > m {
        return Err(Error::Input(format!("qbinom({m}, {n}) requires n <= m")));
    }
    let den = &qfact(n) * &qfact(m - n);
    qfact(m).div_exact(&den).ok_or(Error::InexactDivision)
}
