//! Brute-force search for the canonical basis of a small weight space.
//!
//! Candidates are `Σ c_k 𝓛_k` over a basis of standard vectors, with every
//! `c_k = a_0 + Σ_e a_e (q^e + q^{-e})` bar-symmetric, `e ≤ D` and `|a| ≤ H`.
//! Those of norm in `1 + q^{-1} Z[q^{-1}]` are, up to sign, exactly the
//! canonical elements. `(D, H)` grows by iterative deepening.

use std::cmp::Ordering;

use num_traits::ToPrimitive;

use super::{CanonicalBasis, Source};
use crate::cartan::Content;
use crate::error::{Error, Result};
use crate::involution::bar_basis;
use crate::qarith::linalg::{self, Matrix};
use crate::qarith::{LaurentInt, RatQ};
use crate::tensor::{ModuleVector, TensorModule};

#[derive(Clone, Debug)]
pub struct OracleBounds {
    /// Largest exponent in a coefficient; `None` means the largest exponent
    /// of the standard Gram matrix plus 2.
    pub degree: Option<u32>,
    pub height: u32,
    /// Largest weight-space dimension the oracle accepts.
    pub dim_cap: usize,
    /// Largest number of candidate vectors searched at one level.
    pub budget: u64,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { degree: None, height: 16, dim_cap: 3, budget: 2_000_000 }
    }
}

/// Dense integer Laurent polynomial on a symmetric exponent window.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Small {
    radius: i64,
    c: Vec<i128>,
}

impl Small {
    fn zero(radius: i64) -> Self {
        Small { radius, c: vec![0; (2 * radius + 1) as usize] }
    }

    fn from_laurent(p: &LaurentInt, radius: i64) -> Option<Self> {
        let mut s = Small::zero(radius);
        for (e, x) in p.terms() {
            if e.abs() > radius {
                return None;
            }
            s.c[(e + radius) as usize] = x.to_i128()?;
        }
        Some(s)
    }

    fn symmetric(a: &[i64]) -> Self {
        let d = a.len() as i64 - 1;
        let mut s = Small::zero(d);
        s.c[d as usize] = a[0] as i128;
        for (e, &x) in a.iter().enumerate().skip(1) {
            s.c[(d + e as i64) as usize] = x as i128;
            s.c[(d - e as i64) as usize] = x as i128;
        }
        s
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn mul(&self, o: &Small) -> Small {
        let mut out = Small::zero(self.radius + o.radius);
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                out.c[i + j] += x * y;
            }
        }
        out
    }

    /// `acc += self * o`, restricted to exponents `>= 0` of `acc`.
    fn mul_acc_nonneg(&self, o: &Small, acc: &mut Small) {
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ei = i as i64 - self.radius;
            for (j, &y) in o.c.iter().enumerate() {
                let e = ei + j as i64 - o.radius;
                if e >= 0 && y != 0 {
                    acc.c[(e + acc.radius) as usize] += x * y;
                }
            }
        }
    }

    fn to_laurent(&self) -> LaurentInt {
        LaurentInt::from_terms(
            self.c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k as i64 - self.radius, x as i64)),
        )
    }

    /// Sign of the highest nonzero coefficient.
    fn top_sign(&self) -> Ordering {
        self.c.iter().rev().find(|&&x| x != 0).map_or(Ordering::Equal, |x| x.cmp(&0))
    }
}

fn levels(dcap: u32, hcap: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(0, 1.min(hcap))];
    let mut step = 1u32;
    loop {
        let d = step.div_ceil(2).min(dcap);
        let h = (step / 2 + 1).min(hcap);
        if out.last() != Some(&(d, h)) {
            out.push((d, h));
        }
        if d == dcap && h == hcap {
            return out;
        }
        step += 1;
    }
}

/// The canonical basis of `tm` at `nu` by exhaustive search.
pub fn oracle_basis(tm: &TensorModule, nu: &Content, bounds: &OracleBounds) -> Result<CanonicalBasis> {
    let label = || tm.cartan().format_labels(&nu.0);
    let dim = tm.space(nu).dim();
    if dim > bounds.dim_cap {
        return Err(Error::OracleTooLarge { dim, cap: bounds.dim_cap });
    }
    if dim == 0 {
        return CanonicalBasis::from_pure(nu.clone(), Vec::new(), Source::Oracle);
    }
    let bb = bar_basis(tm, nu)?;
    let ls: Vec<ModuleVector> = bb.selected().iter().map(|m| tm.l_vector(m)).collect::<Result<_>>()?;
    let gram: Matrix<LaurentInt> = ls
        .iter()
        .map(|u| ls.iter().map(|w| tm.form(u, w).as_laurent().cloned()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::LatticeMismatch(label()))?;
    let g_radius = gram.iter().flatten().filter_map(|p| Some(p.lo().abs().max(p.hi()?.abs()))).max().unwrap_or(0);
    let dcap = bounds.degree.unwrap_or(g_radius as u32 + 2);
    let gram_small: Vec<Vec<Small>> = gram
        .iter()
        .map(|row| row.iter().map(|p| Small::from_laurent(p, g_radius).expect("small coefficients")).collect())
        .collect();

    let mut last = (0, 0);
    for (d, h) in levels(dcap, bounds.height) {
        let options = coefficient_options(d, h);
        let size = (options.len() as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
        if size > bounds.budget {
            break;
        }
        last = (d, h);
        let found = search(&options, &gram_small, dim, 2 * d as i64 + g_radius);
        match found.len().cmp(&dim) {
            Ordering::Less => continue,
            Ordering::Greater => {
                return Err(Error::CertificationFailure {
                    content: label(),
                    condition: format!("oracle found {} almost orthonormal vectors in dimension {dim}", found.len()),
                })
            }
            Ordering::Equal => {}
        }
        let coeffs: Matrix<RatQ> = found
            .iter()
            .map(|c| c.iter().map(|&k| RatQ::from_laurent(options[k].to_laurent())).collect())
            .collect();
        return finish(tm, nu, &ls, coeffs);
    }
    Err(Error::BoundExhausted { content: label(), degree: last.0, height: last.1 })
}

/// All bar-symmetric coefficients of degree `≤ d` and height `≤ h`.
fn coefficient_options(d: u32, h: u32) -> Vec<Small> {
    let h = h as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..=d {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<i64>| {
                (-h..=h).map(move |x| {
                    let mut p = pre.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.iter().map(|a| Small::symmetric(a)).collect()
}

/// Index vectors into `options` whose vector has norm in
/// `1 + q^{-1} Z[q^{-1}]`, one per `±` pair.
fn search(options: &[Small], gram: &[Vec<Small>], dim: usize, radius: i64) -> Vec<Vec<usize>> {
    let n = options.len();
    let mut idx = vec![0usize; dim];
    let mut out = Vec::new();
    let mut acc = Small::zero(radius);
    'outer: loop {
        if let Some(first) = idx.iter().position(|&k| !options[k].is_zero()) {
            if options[idx[first]].top_sign() == Ordering::Greater && norm_is_almost_one(options, gram, &idx, &mut acc) {
                out.push(idx.clone());
            }
        }
        for slot in (0..dim).rev() {
            idx[slot] += 1;
            if idx[slot] < n {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        return out;
    }
}

fn norm_is_almost_one(options: &[Small], gram: &[Vec<Small>], idx: &[usize], acc: &mut Small) -> bool {
    acc.c.iter_mut().for_each(|x| *x = 0);
    for (k, &a) in idx.iter().enumerate() {
        if options[a].is_zero() {
            continue;
        }
        for (l, &b) in idx.iter().enumerate() {
            if options[b].is_zero() || gram[k][l].is_zero() {
                continue;
            }
            let ck = options[a].mul(&options[b]);
            ck.mul_acc_nonneg(&gram[k][l], acc);
        }
    }
    let r = acc.radius as usize;
    acc.c[r] == 1 && acc.c[r + 1..].iter().all(|&x| x == 0)
}

/// Fixes signs so that the standard vectors expand positively, and builds
/// the basis in pure coordinates.
fn finish(tm: &TensorModule, nu: &Content, ls: &[ModuleVector], mut coeffs: Matrix<RatQ>) -> Result<CanonicalBasis> {
    let label = || tm.cartan().format_labels(&nu.0);
    let inv = linalg::inverse(&coeffs)?.ok_or_else(|| Error::CertificationFailure {
        content: label(),
        condition: "oracle vectors are dependent".into(),
    })?;
    // inv[k][j]: coefficient of b_j in 𝓛_k
    for (j, row) in coeffs.iter_mut().enumerate() {
        let negative = inv.iter().any(|r| r[j].as_laurent().is_some_and(|l| (-l).is_nonnegative() && !l.is_zero()));
        let positive = inv.iter().any(|r| r[j].as_laurent().is_some_and(|l| l.is_nonnegative() && !l.is_zero()));
        if negative && !positive {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let mut elements: Vec<ModuleVector> = coeffs
        .iter()
        .map(|c| {
            let mut v = ModuleVector::zero(nu.clone(), ls[0].dim());
            for (x, l) in c.iter().zip(ls) {
                if !x.is_zero() {
                    v = v.add(&l.scale(x));
                }
            }
            v
        })
        .collect();
    elements.sort_by_key(|v| v.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    CanonicalBasis::from_pure(nu.clone(), elements, Source::Oracle)
}
