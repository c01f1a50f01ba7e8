//! Canonical bases `𝓑(ω⃗)`: the bar-fixed, almost orthonormal bases with
//! positive structure constants.
//!
//! * One factor: an almost-orthonormal reduction over the divided-power
//!   standard vectors.
//! * Several factors: a unitriangular correction of the pure tensors of
//!   component canonical elements, in the style of Kazhdan and Lusztig.
//!
//! Every result is checked by [`certify::certify_basis`]; the brute-force
//! [`oracle::oracle_basis`] is the fallback on small weight spaces.

pub mod certify;
pub mod monomial;
pub mod oracle;

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cartan::{Content, DominantWeight};
use crate::error::{Error, Result};
use crate::involution::{bar_basis, bar_vector};
use crate::qarith::linalg::{self, Matrix};
use crate::qarith::{LaurentInt, RatQ};
use crate::tensor::{ModuleVector, PureTensor, QuantumGroup, TensorModule};

pub use certify::{certify_basis, Certificate};
pub use monomial::{monomial_form, MonomialForm};
pub use oracle::{oracle_basis, OracleBounds};

/// How a basis was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Vacuum,
    Reduction,
    KazhdanLusztig,
    Oracle,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Vacuum => "vacuum",
            Source::Reduction => "reduction",
            Source::KazhdanLusztig => "kazhdan-lusztig",
            Source::Oracle => "oracle",
        }
    }
}

/// When the oracle runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OracleMode {
    /// Only as a fallback after a solver failure.
    #[default]
    Off,
    /// Also cross-check every small weight space.
    Check,
    /// Use the oracle on every small weight space.
    Force,
}

#[derive(Clone, Debug)]
pub struct CanonOptions {
    pub depth: u32,
    pub oracle: OracleMode,
    pub bounds: OracleBounds,
}

impl CanonOptions {
    pub fn new(depth: u32) -> Self {
        CanonOptions { depth, oracle: OracleMode::Off, bounds: OracleBounds::default() }
    }
}

/// The canonical basis of one weight space.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    content: Content,
    elements: Vec<ModuleVector>,
    standard: Vec<ModuleVector>,
    standard_expansion: Matrix<RatQ>,
    /// `inverse[a]` is the pure basis vector `a` in `𝓑`-coordinates.
    inverse: Matrix<RatQ>,
    source: Source,
}

impl CanonicalBasis {
    fn new(
        content: Content,
        elements: Vec<ModuleVector>,
        standard: Vec<ModuleVector>,
        standard_expansion: Matrix<RatQ>,
        source: Source,
    ) -> Result<Self> {
        let inverse = if elements.is_empty() {
            Vec::new()
        } else {
            let m: Matrix<RatQ> = elements.iter().map(|b| b.coeffs.clone()).collect();
            linalg::inverse(&m)?.ok_or_else(|| Error::CertificationFailure {
                content: content.to_string(),
                condition: "basis elements are linearly dependent".into(),
            })?
        };
        Ok(CanonicalBasis { content, elements, standard, standard_expansion, inverse, source })
    }

    /// A basis given directly in pure-tensor coordinates.
    fn from_pure(content: Content, elements: Vec<ModuleVector>, source: Source) -> Result<Self> {
        let dim = elements.len();
        let standard = (0..dim).map(|k| ModuleVector::unit(content.clone(), dim, k)).collect();
        let expansion = elements.iter().map(|b| b.coeffs.clone()).collect();
        Self::new(content, elements, standard, expansion, source)
    }

    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    /// The standard basis the elements were solved against.
    pub fn standard(&self) -> &[ModuleVector] {
        &self.standard
    }

    /// `standard_expansion[k][l]`: coefficient of standard vector `l` in `b_k`.
    pub fn standard_expansion(&self) -> &Matrix<RatQ> {
        &self.standard_expansion
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Coordinates of `v` over the basis.
    pub fn coords(&self, v: &ModuleVector) -> Vec<RatQ> {
        let mut out = vec![RatQ::zero(); self.dim()];
        for (x, row) in v.coeffs.iter().zip(&self.inverse) {
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

    /// The elements as a set, for order-independent comparison.
    pub fn element_set(&self) -> HashSet<Vec<RatQ>> {
        self.elements.iter().map(|b| b.coeffs.clone()).collect()
    }

    pub fn to_json(&self, tm: &TensorModule, cert: Option<&Certificate>) -> Value {
        let cd = tm.cartan();
        let space = tm.space(&self.content);
        let basis: Vec<Value> = self
            .elements
            .iter()
            .zip(&self.standard_expansion)
            .map(|(b, std)| {
                let words: Vec<Value> = b
                    .coeffs
                    .iter()
                    .zip(space.basis())
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, pt)| json!({"tensor": pure_tensor_json(tm, pt), "coeff": c}))
                    .collect();
                let std: Vec<Value> = std
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| json!({"index": l, "coeff": c}))
                    .collect();
                json!({"standard_expansion": std, "word_expansion": words})
            })
            .collect();
        let mut out = json!({
            "nu": cd.labels_to_json(&self.content.0),
            "dim": self.dim(),
            "source": self.source.name(),
            "basis": basis,
        });
        if let Some(c) = cert {
            out["certificate"] = c.to_json();
        }
        out
    }
}

/// A pure tensor as a list of pivot words, one per factor.
pub fn pure_tensor_json(tm: &TensorModule, pt: &PureTensor) -> Value {
    let cd = tm.cartan();
    Value::Array(
        pt.0.iter()
            .zip(tm.irreps())
            .map(|((c, k), irrep)| {
                let ws = irrep.space(c);
                crate::verma::FWord::plain(ws.pivot_word(*k)).to_json(cd)
            })
            .collect(),
    )
}

type Key = (Vec<DominantWeight>, Content);
type Certified = (Arc<CanonicalBasis>, Arc<Certificate>);

/// Computes, certifies and caches canonical bases for one quantum group.
pub struct CanonContext {
    qg: Arc<QuantumGroup>,
    opts: CanonOptions,
    raw: Mutex<HashMap<Key, Arc<CanonicalBasis>>>,
    certified: Mutex<HashMap<Key, Certified>>,
}

impl CanonContext {
    pub fn new(qg: Arc<QuantumGroup>, opts: CanonOptions) -> Self {
        CanonContext { qg, opts, raw: Mutex::default(), certified: Mutex::default() }
    }

    pub fn quantum_group(&self) -> &Arc<QuantumGroup> {
        &self.qg
    }

    pub fn options(&self) -> &CanonOptions {
        &self.opts
    }

    /// The solver's basis before certification; oracle fallbacks replace it.
    pub fn raw(&self, tm: &TensorModule, nu: &Content) -> Result<Arc<CanonicalBasis>> {
        let key = (tm.factors().to_vec(), nu.clone());
        if let Some(b) = self.raw.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let dim = tm.space(nu).dim();
        let forced = self.opts.oracle == OracleMode::Force && dim <= self.opts.bounds.dim_cap;
        let b = Arc::new(if forced { oracle_basis(tm, nu, &self.opts.bounds)? } else { self.solve(tm, nu)? });
        Ok(self.raw.lock().unwrap().entry(key).or_insert(b).clone())
    }

    fn solve(&self, tm: &TensorModule, nu: &Content) -> Result<CanonicalBasis> {
        match tm.factors().len() {
            0 => {
                let dim = tm.space(nu).dim();
                let elements = (0..dim).map(|k| ModuleVector::unit(nu.clone(), dim, k)).collect();
                CanonicalBasis::from_pure(nu.clone(), elements, Source::Vacuum)
            }
            1 => reduce_irreducible(tm, nu),
            _ => self.kazhdan_lusztig(tm, nu),
        }
    }

    /// The certified basis, falling back to the oracle when the solver
    /// fails or its output does not certify.
    pub fn canonical_basis(&self, tm: &TensorModule, nu: &Content) -> Result<(Arc<CanonicalBasis>, Arc<Certificate>)> {
        let key = (tm.factors().to_vec(), nu.clone());
        if let Some(hit) = self.certified.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let label = || tm.cartan().format_labels(&nu.0);
        let dim = tm.space(nu).dim();
        let small = dim <= self.opts.bounds.dim_cap;
        let attempt = self.raw(tm, nu).and_then(|b| {
            let cert = certify_basis(self, tm, &b)?;
            Ok((b, cert))
        });
        let (b, cert) = match attempt {
            Ok((b, cert)) if cert.passed() => {
                if self.opts.oracle == OracleMode::Check && small && b.source() != Source::Oracle {
                    let o = oracle_basis(tm, nu, &self.opts.bounds)?;
                    if o.element_set() != b.element_set() {
                        return Err(Error::CertificationFailure {
                            content: label(),
                            condition: "solver and oracle disagree".into(),
                        });
                    }
                }
                (b, cert)
            }
            Ok((b, cert)) if !small || b.source() == Source::Oracle => {
                return Err(Error::CertificationFailure { content: label(), condition: cert.first_failure() });
            }
            Err(e) if !small || !matches!(e, Error::TriangularizationFailure(_) | Error::LatticeMismatch(_) | Error::CertificationFailure { .. }) => {
                return Err(e);
            }
            _ => {
                let o = Arc::new(oracle_basis(tm, nu, &self.opts.bounds)?);
                self.raw.lock().unwrap().insert(key.clone(), o.clone());
                let cert = certify_basis(self, tm, &o)?;
                if !cert.passed() {
                    return Err(Error::CertificationFailure { content: label(), condition: cert.first_failure() });
                }
                (o, cert)
            }
        };
        let entry = (b, Arc::new(cert));
        Ok(self.certified.lock().unwrap().entry(key).or_insert(entry).clone())
    }

    /// Certified bases of every weight space up to the depth, in content
    /// order, computed in parallel.
    pub fn all(&self, tm: &TensorModule) -> Result<Vec<(Arc<CanonicalBasis>, Arc<Certificate>)>> {
        let contents = tm.cartan().enumerate_contents(self.opts.depth);
        // warm the component bases first; they are shared by every content
        if tm.factors().len() > 1 {
            for w in tm.factors() {
                let comp = self.qg.tensor(std::slice::from_ref(w));
                self.all(&comp)?;
            }
        }
        contents.par_iter().map(|nu| self.canonical_basis(tm, nu)).collect()
    }

    fn kazhdan_lusztig(&self, tm: &TensorModule, nu: &Content) -> Result<CanonicalBasis> {
        let label = || tm.cartan().format_labels(&nu.0);
        let space = tm.space(nu);
        let dim = space.dim();
        if dim == 0 {
            return CanonicalBasis::from_pure(nu.clone(), Vec::new(), Source::KazhdanLusztig);
        }
        // standard basis: pure tensors of component canonical elements
        let mut comp: HashMap<(usize, Content), Arc<CanonicalBasis>> = HashMap::new();
        for pt in space.basis() {
            for (a, (c, _)) in pt.0.iter().enumerate() {
                if let Entry::Vacant(slot) = comp.entry((a, c.clone())) {
                    let m = self.qg.tensor(std::slice::from_ref(&tm.factors()[a]));
                    slot.insert(self.canonical_basis(&m, c)?.0);
                }
            }
        }
        let standard: Vec<ModuleVector> = space
            .basis()
            .iter()
            .map(|st| {
                let mut v = space.zero();
                for (p, pt) in space.basis().iter().enumerate() {
                    if pt.0.iter().zip(&st.0).any(|(x, y)| x.0 != y.0) {
                        continue;
                    }
                    let mut c = RatQ::one();
                    for (a, ((cc, k), (_, j))) in pt.0.iter().zip(&st.0).enumerate() {
                        c = &c * &comp[&(a, cc.clone())].elements()[*j].coeffs[*k];
                        if c.is_zero() {
                            break;
                        }
                    }
                    v.coeffs[p] = c;
                }
                v
            })
            .collect();
        let s_mat: Matrix<RatQ> = standard.iter().map(|s| s.coeffs.clone()).collect();
        let s_inv = linalg::inverse(&s_mat)?.ok_or_else(|| Error::LatticeMismatch(label()))?;
        let bb = bar_basis(tm, nu)?;
        // r[j][k]: coefficient of s_j in Ψ(s_k)
        let mut r = vec![vec![LaurentInt::zero(); dim]; dim];
        for (k, s) in standard.iter().enumerate() {
            let psi = bar_vector(&bb, s);
            for (p, x) in psi.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in s_inv[p].iter().enumerate() {
                    if !y.is_zero() {
                        let add = (x * y).as_laurent().cloned();
                        let add = add.ok_or_else(|| Error::LatticeMismatch(label()))?;
                        r[j][k] += &add;
                    }
                }
            }
        }
        let order = unitriangular_order(&r).ok_or_else(|| Error::TriangularizationFailure(label()))?;
        // c[l][k]: coefficient of s_l in b_k
        let mut c = vec![vec![LaurentInt::zero(); dim]; dim];
        for (pos_k, &k) in order.iter().enumerate() {
            c[k][k] = LaurentInt::one();
            for pos_j in (0..pos_k).rev() {
                let j = order[pos_j];
                let mut p = LaurentInt::zero();
                for &l in &order[pos_j + 1..=pos_k] {
                    if !r[j][l].is_zero() && !c[l][k].is_zero() {
                        p += &(&r[j][l] * &c[l][k].bar());
                    }
                }
                if !(&p + &p.bar()).is_zero() {
                    return Err(Error::LatticeMismatch(label()));
                }
                c[j][k] = p.negative_part();
            }
        }
        let expansion: Matrix<RatQ> =
            (0..dim).map(|k| (0..dim).map(|l| RatQ::from_laurent(c[l][k].clone())).collect()).collect();
        let elements = expansion
            .iter()
            .map(|row| {
                let mut v = space.zero();
                for (x, s) in row.iter().zip(&standard) {
                    if !x.is_zero() {
                        v = v.add(&s.scale(x));
                    }
                }
                v
            })
            .collect();
        CanonicalBasis::new(nu.clone(), elements, standard, expansion, Source::KazhdanLusztig)
    }
}

/// An order in which `r` is unitriangular: `r[j][k] != 0` forces `j` before
/// `k`. Kahn's algorithm, smallest index first.
fn unitriangular_order(r: &Matrix<LaurentInt>) -> Option<Vec<usize>> {
    let n = r.len();
    if (0..n).any(|k| !r[k][k].is_one()) {
        return None;
    }
    let mut indeg = vec![0usize; n];
    for (j, row) in r.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if j != k && !x.is_zero() {
                indeg[k] += 1;
            }
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(j) = ready.pop_first() {
        order.push(j);
        for k in 0..n {
            if k != j && !r[j][k].is_zero() {
                indeg[k] -= 1;
                if indeg[k] == 0 {
                    ready.insert(k);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// The bar-symmetric integral Laurent polynomial whose nonnegative part
/// agrees with the expansion of `x` at `q = ∞`, if that part is integral.
fn symmetrize_top(x: &RatQ) -> Option<LaurentInt> {
    let mut terms = Vec::new();
    for (e, c) in x.expand_at_infinity(0) {
        if c.is_zero() {
            continue;
        }
        if !c.is_integer() {
            return None;
        }
        let c = c.to_integer();
        if e > 0 {
            terms.push((-e, c.clone()));
        }
        terms.push((e, c));
    }
    Some(LaurentInt::from_terms(terms))
}

/// Almost-orthonormal reduction for a single factor.
///
/// Each standard vector `m` is reduced against the elements found so far:
/// with `P` their Gram matrix and `g_j = (m, b_j)`, the nonnegative part of
/// `P^{-1} g` fixes bar-symmetric coefficients `α`, and `m - Σ α_j b_j` is
/// kept when its norm lies in `1 + q^{-1} Z[q^{-1}]`.
fn reduce_irreducible(tm: &TensorModule, nu: &Content) -> Result<CanonicalBasis> {
    let dim = tm.space(nu).dim();
    let candidates: Vec<ModuleVector> =
        tm.enumerate_mu(nu).iter().map(|m| tm.l_vector(m)).collect::<Result<_>>()?;
    let mut found: Vec<ModuleVector> = Vec::new();
    let mut p_inv: Matrix<RatQ> = Vec::new();
    let mut used = vec![false; candidates.len()];
    let mut progress = true;
    while found.len() < dim && progress {
        progress = false;
        for (ci, m) in candidates.iter().enumerate() {
            if used[ci] || found.len() == dim || m.is_zero() {
                continue;
            }
            let g: Vec<RatQ> = found.iter().map(|b| tm.form(m, b)).collect();
            let beta = linalg::mat_vec(&p_inv, &g);
            let Some(alpha) = beta.iter().map(symmetrize_top).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let mut r = m.clone();
            for (a, b) in alpha.iter().zip(&found) {
                if !a.is_zero() {
                    r = r.sub(&b.scale(&RatQ::from_laurent(a.clone())));
                }
            }
            if r.is_zero() {
                used[ci] = true;
                continue;
            }
            let norm = tm.form(&r, &r);
            let ok = norm.as_laurent().is_some_and(|n| (n - &LaurentInt::one()).in_qinv_z());
            if !ok {
                continue;
            }
            let mut rows: Matrix<RatQ> = found.iter().map(|b| b.coeffs.clone()).collect();
            rows.push(r.coeffs.clone());
            if linalg::rank(&rows) <= found.len() {
                used[ci] = true;
                continue;
            }
            if leading_sign_negative(&tm.form(m, &r)) {
                r = r.scale(&-RatQ::one());
            }
            used[ci] = true;
            found.push(r);
            let p: Matrix<RatQ> = found.iter().map(|u| found.iter().map(|w| tm.form(u, w)).collect()).collect();
            p_inv = linalg::inverse(&p)?.expect("almost orthonormal Gram matrices are nonsingular");
            progress = true;
        }
    }
    if found.len() < dim {
        return Err(Error::CertificationFailure {
            content: tm.cartan().format_labels(&nu.0),
            condition: format!("reduction stalled at rank {} of {dim}", found.len()),
        });
    }
    CanonicalBasis::from_pure(nu.clone(), found, Source::Reduction)
}

/// Whether the top coefficient of the expansion at `q = ∞` is negative.
fn leading_sign_negative(x: &RatQ) -> bool {
    if x.is_zero() {
        return false;
    }
    let top = x.num().hi().unwrap() - x.den().hi().unwrap();
    x.expand_at_infinity(top).first().is_some_and(|(_, c)| c < &num_rational::BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;
    use crate::verma::{FWord, Generator, Letter};

    fn w(v: &[u32]) -> DominantWeight {
        DominantWeight(v.to_vec())
    }

    fn ctx(cd: CartanData, depth: u32) -> CanonContext {
        CanonContext::new(Arc::new(QuantumGroup::new(cd)), CanonOptions::new(depth))
    }

    fn sl2() -> CartanData {
        CartanData::from_graph::<&str>(&["i"], &[]).unwrap()
    }

    fn sl3() -> CartanData {
        CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap()
    }

    /// `F_{i1}^{(n1)} ... η` in pure coordinates of a single-factor module.
    fn monomial(tm: &TensorModule, letters: &[(usize, u32)]) -> ModuleVector {
        let mut v = tm.space(&tm.cartan().zero_content()).unit(0);
        for &(i, n) in letters.iter().rev() {
            v = tm.act(Generator::F { i, n }, &v).unwrap();
        }
        v
    }

    #[test]
    fn sl2_irreducibles_are_divided_powers() {
        let c = ctx(sl2(), 6);
        for d in 0..=4u32 {
            let tm = c.quantum_group().tensor(&[w(&[d])]);
            for r in 0..=d {
                let (b, cert) = c.canonical_basis(&tm, &Content(vec![r])).unwrap();
                assert!(cert.passed(), "{}", cert.first_failure());
                let expect = monomial(&tm, &[(0, r)]);
                assert_eq!(b.elements(), &[expect]);
            }
        }
    }

    #[test]
    fn sl2_fundamental_square() {
        let c = ctx(sl2(), 2);
        let tm = c.quantum_group().tensor(&[w(&[1]), w(&[1])]);
        let (b, cert) = c.canonical_basis(&tm, &Content(vec![1])).unwrap();
        assert!(cert.passed(), "{}", cert.first_failure());
        let s = tm.space(&Content(vec![1]));
        let vac = tm.space(&Content(vec![0])).unit(0);
        let f = tm.act(Generator::f(0), &vac).unwrap();
        let expect: HashSet<_> = [s.unit(0).coeffs, f.coeffs].into_iter().collect();
        assert_eq!(b.element_set(), expect);
        let (b2, _) = c.canonical_basis(&tm, &Content(vec![2])).unwrap();
        assert_eq!(b2.elements()[0].coeffs, vec![RatQ::one()]);
    }

    #[test]
    fn sl3_adjoint_top_element() {
        let c = ctx(sl3(), 4);
        let tm = c.quantum_group().tensor(&[w(&[1, 1])]);
        let (b, cert) = c.canonical_basis(&tm, &Content(vec![2, 2])).unwrap();
        assert!(cert.passed());
        let expect = monomial(&tm, &[(0, 1), (1, 2), (0, 1)]);
        assert_eq!(b.elements(), &[expect]);
        let irrep = &tm.irreps()[0];
        let top = FWord(vec![Letter { vertex: 0, n: 1 }, Letter { vertex: 1, n: 2 }, Letter { vertex: 0, n: 1 }]);
        assert!(irrep.shapovalov(&top, &top).is_one());
    }

    #[test]
    fn order_helper() {
        let one = LaurentInt::one;
        let z = LaurentInt::zero;
        let r = vec![vec![one(), z()], vec![LaurentInt::q(), one()]];
        assert_eq!(unitriangular_order(&r), Some(vec![1, 0]));
        let cyc = vec![vec![one(), one()], vec![one(), one()]];
        assert_eq!(unitriangular_order(&cyc), None);
    }

    #[test]
    fn symmetrization() {
        let x = RatQ::new(LaurentInt::from_terms([(2, 1i64), (0, 1)]), LaurentInt::from_terms([(0, 1i64)])).unwrap();
        assert_eq!(symmetrize_top(&x), Some(LaurentInt::from_terms([(2, 1i64), (0, 1), (-2, 1)])));
        let half = RatQ::new(LaurentInt::one(), LaurentInt::constant(2)).unwrap();
        assert_eq!(symmetrize_top(&half), None);
        assert_eq!(symmetrize_top(&RatQ::q_pow(-3)), Some(LaurentInt::zero()));
    }
}
