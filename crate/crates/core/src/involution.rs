//! The bar involution `Ψ` on weight spaces of tensor products.
//!
//! Every standard vector `𝓛_μ` is `Ψ`-fixed and they span, so `Ψ` is the
//! antilinear map that fixes a basis of them: write `v` in such a basis, bar
//! the coefficients, and map back.

use std::sync::Arc;

use crate::cartan::Content;
use crate::error::{Error, Result};
use crate::qarith::linalg::{self, Matrix};
use crate::qarith::RatQ;
use crate::tensor::{ModuleVector, MuSeq, TensorModule};

/// A basis of standard vectors for one weight space.
#[derive(Debug)]
pub struct BarBasis {
    content: Content,
    selected: Vec<MuSeq>,
    /// `to_pure[k]` is `𝓛_{selected[k]}` in pure-tensor coordinates.
    to_pure: Matrix<RatQ>,
    /// `from_pure[a]` is the pure basis vector `a` in `𝓛`-coordinates.
    from_pure: Matrix<RatQ>,
}

/// Incremental row echelon form used for the greedy rank scan.
struct Echelon {
    rows: Vec<(usize, Vec<RatQ>)>,
}

impl Echelon {
    /// Reduces `v` and keeps it if independent; returns whether it was kept.
    fn push(&mut self, v: &[RatQ]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&c * y);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        let v: Vec<RatQ> = v.iter().map(|x| x * &inv).collect();
        self.rows.push((p, v));
        true
    }
}

impl BarBasis {
    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn selected(&self) -> &[MuSeq] {
        &self.selected
    }

    pub fn dim(&self) -> usize {
        self.selected.len()
    }

    /// Coordinates of a pure-coordinate vector in the selected `𝓛`-basis.
    pub fn l_coords(&self, v: &ModuleVector) -> Vec<RatQ> {
        combine(&self.from_pure, &v.coeffs, self.dim())
    }

    /// The pure-coordinate vector with the given `𝓛`-coordinates.
    pub fn from_l_coords(&self, c: &[RatQ]) -> ModuleVector {
        ModuleVector { content: self.content.clone(), coeffs: combine(&self.to_pure, c, self.dim()) }
    }

    /// The matrix of `Ψ` on pure tensors: column `a` is `Ψ(e_a)`, stored
    /// as `psi[a]`.
    pub fn psi_matrix(&self) -> Matrix<RatQ> {
        (0..self.dim())
            .map(|a| bar_vector(self, &ModuleVector::unit(self.content.clone(), self.dim(), a)).coeffs)
            .collect()
    }
}

/// `Σ_k c[k] * rows[k]`.
fn combine(rows: &Matrix<RatQ>, c: &[RatQ], dim: usize) -> Vec<RatQ> {
    let mut out = vec![RatQ::zero(); dim];
    for (x, row) in c.iter().zip(rows) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            if !y.is_zero() {
                *o += &(x * y);
            }
        }
    }
    out
}

/// Greedy scan over `enumerate_mu`, keeping every standard vector that
/// raises the rank.
pub fn build_bar_basis(tm: &TensorModule, nu: &Content) -> Result<BarBasis> {
    build_bar_basis_from(tm, nu, tm.enumerate_mu(nu))
}

/// As [`build_bar_basis`], scanning the candidates in the given order.
pub fn build_bar_basis_from(
    tm: &TensorModule,
    nu: &Content,
    candidates: impl IntoIterator<Item = MuSeq>,
) -> Result<BarBasis> {
    let dim = tm.space(nu).dim();
    let mut ech = Echelon { rows: Vec::new() };
    let mut selected = Vec::new();
    let mut to_pure = Vec::new();
    for mu in candidates {
        if selected.len() == dim {
            break;
        }
        let v = tm.l_vector(&mu)?;
        if ech.push(&v.coeffs) {
            selected.push(mu);
            to_pure.push(v.coeffs);
        }
    }
    if selected.len() < dim {
        return Err(Error::SpanningFailure {
            content: tm.cartan().format_labels(&nu.0),
            rank: selected.len(),
            dim,
        });
    }
    let from_pure = if dim == 0 {
        Vec::new()
    } else {
        linalg::inverse(&to_pure)?.expect("selected vectors are independent")
    };
    Ok(BarBasis { content: nu.clone(), selected, to_pure, from_pure })
}

/// `Ψ(v)`.
pub fn bar_vector(bb: &BarBasis, v: &ModuleVector) -> ModuleVector {
    debug_assert_eq!(&v.content, bb.content());
    let c: Vec<RatQ> = bb.l_coords(v).iter().map(RatQ::bar).collect();
    bb.from_l_coords(&c)
}

/// Shared bar bases, cached per content on the module.
pub fn bar_basis(tm: &TensorModule, nu: &Content) -> Result<Arc<BarBasis>> {
    tm.bar_basis_cached(nu, || build_bar_basis(tm, nu).map(Arc::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanData, DominantWeight};
    use crate::qarith::LaurentInt;
    use crate::tensor::QuantumGroup;
    use crate::verma::Generator;

    fn w(v: &[u32]) -> DominantWeight {
        DominantWeight(v.to_vec())
    }

    #[test]
    fn sl2_examples() {
        let qg = QuantumGroup::new(CartanData::from_graph::<&str>(&["i"], &[]).unwrap());
        let tm = qg.tensor(&[w(&[1]), w(&[1])]);
        let nu = Content(vec![1]);
        let bb = build_bar_basis(&tm, &nu).unwrap();
        assert_eq!(bb.selected(), tm.enumerate_mu(&nu).as_slice());
        let s = tm.space(&nu);
        assert_eq!(bar_vector(&bb, &s.unit(0)), s.unit(0));
        let psi = bar_vector(&bb, &s.unit(1));
        let q_minus = RatQ::from_laurent(LaurentInt::from_terms([(1, -1i64), (-1, 1)]));
        assert_eq!(psi.coeffs, vec![q_minus, RatQ::one()]);
        let bb0 = build_bar_basis(&tm, &Content(vec![0])).unwrap();
        assert_eq!(bb0.selected().len(), 1);
        let v0 = tm.space(&Content(vec![0])).unit(0);
        assert_eq!(bar_vector(&bb0, &v0), v0);
    }

    #[test]
    fn involutive_and_commutes_with_f() {
        let qg = QuantumGroup::new(CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap());
        let tm = qg.tensor(&[w(&[1, 0]), w(&[0, 1]), w(&[1, 0])]);
        for nu in qg.cartan().enumerate_contents(2) {
            let bb = build_bar_basis(&tm, &nu).unwrap();
            let rev = build_bar_basis_from(&tm, &nu, tm.enumerate_mu(&nu).into_iter().rev()).unwrap();
            let s = tm.space(&nu);
            for k in 0..s.dim() {
                let v = s.unit(k);
                let pv = bar_vector(&bb, &v);
                assert_eq!(bar_vector(&bb, &pv), v);
                assert_eq!(bar_vector(&rev, &v), pv);
                for i in 0..2 {
                    let fv = tm.act(Generator::f(i), &v).unwrap();
                    let bt = build_bar_basis(&tm, &fv.content).unwrap();
                    assert_eq!(bar_vector(&bt, &fv), tm.act(Generator::f(i), &pv).unwrap());
                }
            }
        }
    }
}
