//! Tensor products `Λ(ω¹) ⊗ ... ⊗ Λ(ωᵗ)` and the standard vectors `𝓛_μ`.
//!
//! Generators act through the iterated comultiplication
//! `ΔF_i = F_i ⊗ K_i^{-1} + 1 ⊗ F_i`, `ΔE_i = E_i ⊗ 1 + K_i ⊗ E_i`, so `F_i` at
//! factor `a` picks up `K_i^{-1}` on every later factor and `E_i` picks up
//! `K_i` on every earlier one.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::cartan::{CartanData, Content, DominantWeight};
use crate::error::{Error, Result};
use crate::involution::BarBasis;
use crate::qarith::{qfact, LaurentInt, Matrix, RatQ};
use crate::verma::{FWord, Generator, Irrep};

/// A pure tensor of component basis vectors: `(content, pivot index)` for
/// each factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureTensor(pub Vec<(Content, usize)>);

/// A vector of a single content, in the pure-tensor basis of that content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector {
    pub content: Content,
    pub coeffs: Vec<RatQ>,
}

impl ModuleVector {
    pub fn zero(content: Content, dim: usize) -> Self {
        ModuleVector { content, coeffs: vec![RatQ::zero(); dim] }
    }

    pub fn unit(content: Content, dim: usize, k: usize) -> Self {
        let mut v = Self::zero(content, dim);
        v.coeffs[k] = RatQ::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatQ::is_zero)
    }

    pub fn scale(&self, c: &RatQ) -> Self {
        ModuleVector { content: self.content.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &ModuleVector) -> Self {
        assert_eq!(self.content, other.content, "adding vectors of different contents");
        ModuleVector {
            content: self.content.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> Self {
        self.add(&other.scale(&-RatQ::one()))
    }

    /// Coefficientwise bar; not the involution `Ψ`.
    pub fn bar_coeffs(&self) -> Self {
        ModuleVector { content: self.content.clone(), coeffs: self.coeffs.iter().map(RatQ::bar).collect() }
    }
}

/// One entry of a standard sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MuEntry {
    /// `u ↦ u ⊗ η_ω`
    TypeII(DominantWeight),
    /// `F_vertex^{(n)}`
    TypeI { vertex: usize, n: u32 },
}

/// A sequence `μ` of type I and type II entries, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuSeq(pub Vec<MuEntry>);

impl MuSeq {
    pub fn factors(&self) -> Vec<DominantWeight> {
        self.0
            .iter()
            .filter_map(|e| match e {
                MuEntry::TypeII(w) => Some(w.clone()),
                MuEntry::TypeI { .. } => None,
            })
            .collect()
    }

    /// Total content of the type I entries.
    pub fn content(&self, rank: usize) -> Content {
        let mut c = vec![0; rank];
        for e in &self.0 {
            if let MuEntry::TypeI { vertex, n } = e {
                c[*vertex] += n;
            }
        }
        Content(c)
    }

    pub fn to_json(&self, cd: &CartanData) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|e| match e {
                    MuEntry::TypeII(w) => json!({"type": "II", "omega": cd.labels_to_json(&w.0)}),
                    MuEntry::TypeI { vertex, n } => {
                        json!({"type": "I", "vertex": cd.vertex_name(*vertex), "n": n})
                    }
                })
                .collect(),
        )
    }

    pub fn from_json(cd: &CartanData, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Input("sequence must be a JSON array".into()))?;
        let mut out = Vec::with_capacity(arr.len());
        for e in arr {
            match e.get("type").and_then(Value::as_str) {
                Some("II") => {
                    let omega = e.get("omega").ok_or_else(|| Error::Input("type II entry needs \"omega\"".into()))?;
                    out.push(MuEntry::TypeII(DominantWeight(cd.labels_from_json(omega)?)));
                }
                Some("I") => {
                    let name = e
                        .get("vertex")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Input("type I entry needs \"vertex\"".into()))?;
                    let n = e.get("n").map_or(Some(1), Value::as_u64).filter(|&n| n >= 1).ok_or_else(|| {
                        Error::Input("type I entry needs a positive integer \"n\"".into())
                    })?;
                    out.push(MuEntry::TypeI { vertex: cd.vertex_index(name)?, n: n as u32 });
                }
                _ => return Err(Error::Input(format!("bad sequence entry {e}"))),
            }
        }
        Ok(MuSeq(out))
    }

    /// Compact form: `*` takes the next factor of `factors`, `i` or `j^2`
    /// are type I entries, separated by spaces or commas.
    pub fn parse_compact(cd: &CartanData, factors: &[DominantWeight], s: &str) -> Result<Self> {
        let mut next = factors.iter();
        let mut out = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            if tok == "*" {
                let w = next.next().ok_or(Error::TypeIIMismatch)?;
                out.push(MuEntry::TypeII(w.clone()));
            } else {
                let (name, n) = match tok.split_once('^') {
                    Some((name, n)) => {
                        let n: u32 = n.parse().map_err(|_| Error::Input(format!("bad exponent in {tok:?}")))?;
                        (name, n)
                    }
                    None => (tok, 1),
                };
                if n == 0 {
                    return Err(Error::Input(format!("divided power must be positive in {tok:?}")));
                }
                out.push(MuEntry::TypeI { vertex: cd.vertex_index(name)?, n });
            }
        }
        if next.next().is_some() {
            return Err(Error::TypeIIMismatch);
        }
        Ok(MuSeq(out))
    }

    pub fn display(&self, cd: &CartanData) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| match e {
                MuEntry::TypeII(w) => format!("Λ({})", cd.format_labels(&w.0)),
                MuEntry::TypeI { vertex, n: 1 } => format!("F_{}", cd.vertex_name(*vertex)),
                MuEntry::TypeI { vertex, n } => format!("F_{}^({n})", cd.vertex_name(*vertex)),
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// The weight space of a tensor product at one content.
pub struct TensorSpace {
    content: Content,
    basis: Vec<PureTensor>,
    index: HashMap<PureTensor, usize>,
    gram: Matrix<RatQ>,
}

impl TensorSpace {
    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureTensor] {
        &self.basis
    }

    pub fn index_of(&self, t: &PureTensor) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Gram matrix of the product form on the pure-tensor basis.
    pub fn gram(&self) -> &Matrix<RatQ> {
        &self.gram
    }

    pub fn zero(&self) -> ModuleVector {
        ModuleVector::zero(self.content.clone(), self.dim())
    }

    pub fn unit(&self, k: usize) -> ModuleVector {
        ModuleVector::unit(self.content.clone(), self.dim(), k)
    }
}

impl fmt::Debug for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorSpace").field("content", &self.content).field("dim", &self.dim()).finish()
    }
}

/// `Λ(ω¹) ⊗ ... ⊗ Λ(ωᵗ)`; with no factors it is the trivial module.
pub struct TensorModule {
    cartan: Arc<CartanData>,
    factors: Vec<DominantWeight>,
    irreps: Vec<Arc<Irrep>>,
    prefix: Option<Arc<TensorModule>>,
    spaces: Mutex<HashMap<Content, Arc<TensorSpace>>>,
    l_cache: Mutex<HashMap<MuSeq, ModuleVector>>,
    bar_cache: Mutex<HashMap<Content, Arc<BarBasis>>>,
}

impl fmt::Debug for TensorModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorModule({:?})", self.factors)
    }
}

/// Owns the Cartan datum and shares realized modules between computations.
pub struct QuantumGroup {
    cartan: Arc<CartanData>,
    irreps: Mutex<HashMap<DominantWeight, Arc<Irrep>>>,
    tensors: Mutex<HashMap<Vec<DominantWeight>, Arc<TensorModule>>>,
}

impl fmt::Debug for QuantumGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuantumGroup({:?})", self.cartan.vertices())
    }
}

impl QuantumGroup {
    pub fn new(cartan: CartanData) -> Self {
        QuantumGroup { cartan: Arc::new(cartan), irreps: Mutex::default(), tensors: Mutex::default() }
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn irrep(&self, w: &DominantWeight) -> Arc<Irrep> {
        self.irreps
            .lock()
            .unwrap()
            .entry(w.clone())
            .or_insert_with(|| Arc::new(Irrep::new(self.cartan.clone(), w.clone())))
            .clone()
    }

    pub fn tensor(&self, factors: &[DominantWeight]) -> Arc<TensorModule> {
        if let Some(tm) = self.tensors.lock().unwrap().get(factors) {
            return tm.clone();
        }
        let prefix = factors.split_last().map(|(_, init)| self.tensor(init));
        let tm = Arc::new(TensorModule {
            cartan: self.cartan.clone(),
            factors: factors.to_vec(),
            irreps: factors.iter().map(|w| self.irrep(w)).collect(),
            prefix,
            spaces: Mutex::default(),
            l_cache: Mutex::default(),
            bar_cache: Mutex::default(),
        });
        self.tensors.lock().unwrap().entry(factors.to_vec()).or_insert(tm).clone()
    }
}

/// Contents `c ≤ bound` in descending lexicographic order.
fn sub_contents_desc(bound: &Content) -> Vec<Content> {
    let mut out = vec![Vec::new()];
    for &b in &bound.0 {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<u32>| {
                (0..=b).rev().map(move |x| {
                    let mut p = pre.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Content).collect()
}

impl TensorModule {
    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn factors(&self) -> &[DominantWeight] {
        &self.factors
    }

    pub fn irreps(&self) -> &[Arc<Irrep>] {
        &self.irreps
    }

    pub(crate) fn bar_basis_cached(
        &self,
        nu: &Content,
        build: impl FnOnce() -> Result<Arc<BarBasis>>,
    ) -> Result<Arc<BarBasis>> {
        if let Some(b) = self.bar_cache.lock().unwrap().get(nu) {
            return Ok(b.clone());
        }
        let b = build()?;
        Ok(self.bar_cache.lock().unwrap().entry(nu.clone()).or_insert(b).clone())
    }

    /// The module with the last factor removed.
    pub fn prefix(&self) -> Option<&Arc<TensorModule>> {
        self.prefix.as_ref()
    }

    pub fn space(&self, nu: &Content) -> Arc<TensorSpace> {
        if let Some(s) = self.spaces.lock().unwrap().get(nu) {
            return s.clone();
        }
        let s = Arc::new(self.build_space(nu));
        self.spaces.lock().unwrap().entry(nu.clone()).or_insert(s).clone()
    }

    fn build_space(&self, nu: &Content) -> TensorSpace {
        let mut basis = Vec::new();
        self.collect_basis(0, nu, &mut Vec::new(), &mut basis);
        let index = basis.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        let gram = basis
            .iter()
            .map(|s| basis.iter().map(|t| self.pure_form(s, t)).collect())
            .collect();
        TensorSpace { content: nu.clone(), basis, index, gram }
    }

    fn collect_basis(&self, a: usize, rest: &Content, cur: &mut Vec<(Content, usize)>, out: &mut Vec<PureTensor>) {
        if a == self.factors.len() {
            if rest.is_zero() {
                out.push(PureTensor(cur.clone()));
            }
            return;
        }
        let choices = if a + 1 == self.factors.len() { vec![rest.clone()] } else { sub_contents_desc(rest) };
        for c in choices {
            let dim = self.irreps[a].space(&c).dim();
            let remaining = rest.checked_sub(&c).expect("sub-content");
            for k in 0..dim {
                cur.push((c.clone(), k));
                self.collect_basis(a + 1, &remaining, cur, out);
                cur.pop();
            }
        }
    }

    fn pure_form(&self, s: &PureTensor, t: &PureTensor) -> RatQ {
        let mut acc = RatQ::one();
        for (a, ((cs, ks), (ct, kt))) in s.0.iter().zip(&t.0).enumerate() {
            if cs != ct {
                return RatQ::zero();
            }
            acc = &acc * &self.irreps[a].space(cs).pivot_gram()[*ks][*kt];
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Sum of the `K_i`-exponents of the factors of a pure tensor.
    fn k_total(&self, t: &PureTensor, i: usize, range: std::ops::Range<usize>) -> i64 {
        range.map(|b| self.irreps[b].k_exponent(&t.0[b].0, i)).sum()
    }

    /// Image of a generator acting on a single factor of a pure tensor,
    /// as `(pure tensor, coefficient)` pairs.
    fn factor_image(&self, t: &PureTensor, a: usize, gen: Generator) -> Vec<(PureTensor, RatQ)> {
        let (c, k) = &t.0[a];
        let irrep = &self.irreps[a];
        let dim = irrep.space(c).dim();
        let unit = ModuleVector::unit(c.clone(), dim, *k).coeffs;
        let Some((tc, img)) = irrep.act(gen, c, &unit) else {
            return Vec::new();
        };
        img.into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k2, x)| {
                let mut t2 = t.clone();
                t2.0[a] = (tc.clone(), k2);
                (t2, x)
            })
            .collect()
    }

    /// Applies a generator via the iterated comultiplication. `None` means
    /// the image weight does not exist, so the image is zero.
    pub fn act(&self, gen: Generator, v: &ModuleVector) -> Option<ModuleVector> {
        let target = gen.target(&v.content)?;
        match gen {
            Generator::K { i, power } => {
                let src = self.space(&v.content);
                let coeffs = v
                    .coeffs
                    .iter()
                    .zip(src.basis())
                    .map(|(x, t)| x.shift(power as i64 * self.k_total(t, i, 0..self.factors.len())))
                    .collect();
                Some(ModuleVector { content: target, coeffs })
            }
            Generator::E { i, n } | Generator::F { i, n } => {
                let lower = matches!(gen, Generator::F { .. });
                let mut cur = v.clone();
                for _ in 0..n {
                    cur = self.act_simple(i, lower, &cur)?;
                }
                if n > 1 {
                    let f = qfact(n);
                    cur.coeffs = cur.coeffs.iter().map(|x| x.div_laurent(&f).expect("nonzero factorial")).collect();
                }
                Some(cur)
            }
        }
    }

    fn act_simple(&self, i: usize, lower: bool, v: &ModuleVector) -> Option<ModuleVector> {
        let tnu = if lower { v.content.plus(i, 1) } else { v.content.minus(i, 1)? };
        let src = self.space(&v.content);
        let tgt = self.space(&tnu);
        let t = self.factors.len();
        let mut out = tgt.zero();
        for (x, pt) in v.coeffs.iter().zip(src.basis()) {
            if x.is_zero() {
                continue;
            }
            for a in 0..t {
                let (gen, shift) = if lower {
                    (Generator::f(i), -self.k_total(pt, i, a + 1..t))
                } else {
                    (Generator::e(i), self.k_total(pt, i, 0..a))
                };
                for (pt2, c) in self.factor_image(pt, a, gen) {
                    let k = tgt.index_of(&pt2).expect("image lies in the target basis");
                    out.coeffs[k] += &(x * &c).shift(shift);
                }
            }
        }
        Some(out)
    }

    /// Divided powers through the closed coproduct formulas
    /// `ΔF^{(n)} = Σ q^{ab} F^{(b)} ⊗ F^{(a)} K^{-b}` and
    /// `ΔE^{(n)} = Σ q^{ab} E^{(a)} K^{b} ⊗ E^{(b)}`, iterated over the
    /// factors. Independent of [`TensorModule::act`]; used for cross-checks.
    pub fn act_divided_by_coproduct(&self, gen: Generator, v: &ModuleVector) -> Option<ModuleVector> {
        let (i, n, lower) = match gen {
            Generator::F { i, n } => (i, n, true),
            Generator::E { i, n } => (i, n, false),
            Generator::K { .. } => return self.act(gen, v),
        };
        let tnu = gen.target(&v.content)?;
        let src = self.space(&v.content);
        let tgt = self.space(&tnu);
        let mut out = tgt.zero();
        for (x, pt) in v.coeffs.iter().zip(src.basis()) {
            if x.is_zero() {
                continue;
            }
            for (pt2, c) in self.coproduct_terms(pt, 0, i, n, lower) {
                let k = tgt.index_of(&pt2).expect("image lies in the target basis");
                out.coeffs[k] += &(x * &c);
            }
        }
        Some(out)
    }

    fn coproduct_terms(&self, pt: &PureTensor, a: usize, i: usize, n: u32, lower: bool) -> Vec<(PureTensor, RatQ)> {
        let t = self.factors.len();
        if a == t {
            return if n == 0 { vec![(pt.clone(), RatQ::one())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for here in 0..=n {
            let rest = n - here;
            let q_ab = (here as i64) * (rest as i64);
            let mut heads = if here == 0 {
                vec![(pt.clone(), RatQ::one())]
            } else {
                let gen = if lower { Generator::F { i, n: here } } else { Generator::E { i, n: here } };
                self.factor_image(pt, a, gen)
            };
            // K^{-here} on the later factors (F), or K^{rest} on this factor (E),
            // acting before the divided powers, so on the original contents.
            let shift = if lower {
                -(here as i64) * self.k_total(pt, i, a + 1..t)
            } else {
                rest as i64 * self.irreps[a].k_exponent(&pt.0[a].0, i)
            };
            for (h, c) in heads.drain(..) {
                let c = c.shift(q_ab + shift);
                for (h2, c2) in self.coproduct_terms(&h, a + 1, i, rest, lower) {
                    out.push((h2, &c * &c2));
                }
            }
        }
        out
    }

    /// The product contravariant form.
    pub fn form(&self, u: &ModuleVector, w: &ModuleVector) -> RatQ {
        if u.content != w.content {
            return RatQ::zero();
        }
        let g = self.space(&u.content);
        let mut acc = RatQ::zero();
        for (a, x) in u.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in w.coeffs.iter().enumerate() {
                if !y.is_zero() && !g.gram[a][b].is_zero() {
                    acc += &(&(x * y) * &g.gram[a][b]);
                }
            }
        }
        acc
    }

    /// `φ_ω : u ↦ u ⊗ η_ω` from the prefix module into this one.
    pub fn embed(&self, u: &ModuleVector) -> ModuleVector {
        let prefix = self.prefix.as_ref().expect("the trivial module has no prefix");
        let src = prefix.space(&u.content);
        let tgt = self.space(&u.content);
        let zero = self.cartan.zero_content();
        let mut out = tgt.zero();
        for (x, pt) in u.coeffs.iter().zip(src.basis()) {
            if x.is_zero() {
                continue;
            }
            let mut pt2 = pt.clone();
            pt2.0.push((zero.clone(), 0));
            out.coeffs[tgt.index_of(&pt2).expect("η_ω is a basis vector")] = x.clone();
        }
        out
    }

    /// The monomial `w` applied to `η ⊗ ... ⊗ η`.
    pub fn monomial(&self, w: &FWord) -> ModuleVector {
        let zero = self.cartan.zero_content();
        let mut v = self.space(&zero).unit(0);
        for l in w.0.iter().rev() {
            v = self.act(Generator::F { i: l.vertex, n: l.n }, &v).expect("F has a target");
        }
        v
    }

    /// The pure tensor `w¹η ⊗ ... ⊗ wᵗη` of divided-power monomials.
    pub fn pure_tensor_of_words(&self, words: &[FWord]) -> ModuleVector {
        assert_eq!(words.len(), self.factors.len(), "one word per factor");
        let rank = self.cartan.rank();
        let parts: Vec<(Content, Vec<RatQ>)> = words
            .iter()
            .zip(&self.irreps)
            .map(|(w, irrep)| {
                let mut nu = self.cartan.zero_content();
                let mut v = vec![RatQ::one()];
                for l in w.0.iter().rev() {
                    let (nu2, v2) = irrep.act(Generator::F { i: l.vertex, n: l.n }, &nu, &v).expect("F has a target");
                    nu = nu2;
                    v = v2;
                }
                debug_assert_eq!(nu, w.content(rank));
                (nu, v)
            })
            .collect();
        let mut total = self.cartan.zero_content();
        for (c, _) in &parts {
            total = &total + c;
        }
        let space = self.space(&total);
        let mut out = space.zero();
        for (p, pt) in space.basis().iter().enumerate() {
            if pt.0.iter().zip(&parts).any(|((c, _), (c2, _))| c != c2) {
                continue;
            }
            let mut x = RatQ::one();
            for ((_, k), (_, v)) in pt.0.iter().zip(&parts) {
                x = &x * &v[*k];
            }
            out.coeffs[p] = x;
        }
        out
    }

    /// The standard vector `𝓛_μ`.
    pub fn l_vector(&self, mu: &MuSeq) -> Result<ModuleVector> {
        if mu.factors() != self.factors {
            return Err(Error::TypeIIMismatch);
        }
        Ok(self.l_vector_unchecked(&mu.0))
    }

    fn l_vector_unchecked(&self, entries: &[MuEntry]) -> ModuleVector {
        let key = MuSeq(entries.to_vec());
        if let Some(v) = self.l_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = match entries.split_last() {
            None => self.space(&self.cartan.zero_content()).unit(0),
            Some((MuEntry::TypeII(_), init)) => {
                let prefix = self.prefix.as_ref().expect("type II entries match the factors");
                self.embed(&prefix.l_vector_unchecked(init))
            }
            Some((&MuEntry::TypeI { vertex, n }, init)) => {
                let u = self.l_vector_unchecked(init);
                self.act(Generator::F { i: vertex, n }, &u).expect("F always has a target weight")
            }
        };
        self.l_cache.lock().unwrap().insert(key, v.clone());
        v
    }

    /// All sequences `μ ⊳ ω⃗` of type I content `nu` that can give a nonzero
    /// standard vector, in a fixed order: type I entries only after the first
    /// factor, no two adjacent type I entries on the same vertex, and earlier
    /// slots filled with larger contents first.
    pub fn enumerate_mu(&self, nu: &Content) -> Vec<MuSeq> {
        let t = self.factors.len();
        if t == 0 {
            return if nu.is_zero() { vec![MuSeq::default()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        self.enum_slots(0, nu, &mut Vec::new(), &mut out);
        out
    }

    fn enum_slots(&self, slot: usize, rest: &Content, cur: &mut Vec<MuEntry>, out: &mut Vec<MuSeq>) {
        let t = self.factors.len();
        if slot == t {
            if rest.is_zero() {
                out.push(MuSeq(cur.clone()));
            }
            return;
        }
        cur.push(MuEntry::TypeII(self.factors[slot].clone()));
        let choices = if slot + 1 == t { vec![rest.clone()] } else { sub_contents_desc(rest) };
        for c in choices {
            let remaining = rest.checked_sub(&c).expect("sub-content");
            for word in divided_words(&c) {
                let len = cur.len();
                cur.extend(word.into_iter().map(|(vertex, n)| MuEntry::TypeI { vertex, n }));
                self.enum_slots(slot + 1, &remaining, cur, out);
                cur.truncate(len);
            }
        }
        cur.pop();
    }

    /// Gram matrix `((𝓛_μ, 𝓛_μ'))` over the given sequences.
    pub fn l_gram(&self, mus: &[MuSeq]) -> Result<Matrix<RatQ>> {
        let vs = mus.iter().map(|m| self.l_vector(m)).collect::<Result<Vec<_>>>()?;
        Ok(vs.iter().map(|u| vs.iter().map(|w| self.form(u, w)).collect()).collect())
    }
}

/// Divided-power words `(vertex, n)` of content `c` with no two adjacent
/// letters on the same vertex, ordered by vertex then larger powers first.
pub fn divided_words(c: &Content) -> Vec<Vec<(usize, u32)>> {
    fn rec(left: &mut Vec<u32>, last: Option<usize>, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Vec<(usize, u32)>>) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for v in 0..left.len() {
            if Some(v) == last || left[v] == 0 {
                continue;
            }
            for n in (1..=left[v]).rev() {
                left[v] -= n;
                cur.push((v, n));
                rec(left, Some(v), cur, out);
                cur.pop();
                left[v] += n;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut c.0.clone(), None, &mut Vec::new(), &mut out);
    out
}

/// The Laurent matrix of a `Q(q)` matrix whose entries are all Laurent
/// polynomials.
pub fn laurent_matrix(m: &Matrix<RatQ>) -> Option<Matrix<LaurentInt>> {
    m.iter().map(|row| row.iter().map(|x| x.as_laurent().cloned()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::linalg;

    fn sl2() -> QuantumGroup {
        QuantumGroup::new(CartanData::from_graph::<&str>(&["i"], &[]).unwrap())
    }

    fn sl3() -> QuantumGroup {
        QuantumGroup::new(CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap())
    }

    fn w(v: &[u32]) -> DominantWeight {
        DominantWeight(v.to_vec())
    }

    fn r(terms: &[(i64, i64)]) -> RatQ {
        RatQ::from_laurent(LaurentInt::from_terms(terms.iter().copied()))
    }

    #[test]
    fn sl2_fundamental_square() {
        let qg = sl2();
        let tm = qg.tensor(&[w(&[1]), w(&[1])]);
        let nu0 = Content(vec![0]);
        let nu1 = Content(vec![1]);
        let s1 = tm.space(&nu1);
        assert_eq!(s1.dim(), 2);
        // basis order: Fη⊗η then η⊗Fη
        assert_eq!(s1.basis()[0].0[0].0, nu1);
        let vac = tm.space(&nu0).unit(0);
        let fv = tm.act(Generator::f(0), &vac).unwrap();
        assert_eq!(fv.coeffs, vec![RatQ::q_pow(-1), RatQ::one()]);
        assert_eq!(tm.form(&fv, &fv), r(&[(0, 1), (-2, 1)]));
        let f2 = tm.act(Generator::F { i: 0, n: 2 }, &vac).unwrap();
        assert_eq!(f2.coeffs, vec![RatQ::one()]);
        assert!(tm.form(&vac, &vac).is_one());
        assert!(tm.form(&vac, &fv).is_zero());
    }

    #[test]
    fn sl3_fundamental_pair() {
        let qg = sl3();
        let tm = qg.tensor(&[w(&[1, 0]), w(&[0, 1])]);
        let vac = tm.space(&Content(vec![0, 0])).unit(0);
        let fv = tm.act(Generator::f(0), &vac).unwrap();
        assert_eq!(fv.dim(), 1);
        assert!(fv.coeffs[0].is_one());
    }

    #[test]
    fn k_acts_by_total_exponent() {
        let qg = sl2();
        let tm = qg.tensor(&[w(&[2]), w(&[1])]);
        let nu = Content(vec![1]);
        let s = tm.space(&nu);
        for k in 0..s.dim() {
            let v = tm.act(Generator::k(0), &s.unit(k)).unwrap();
            assert_eq!(v.coeffs[k], RatQ::q_pow(1));
        }
    }

    #[test]
    fn l_vectors() {
        let qg = sl2();
        let cd = qg.cartan().clone();
        let tm = qg.tensor(&[w(&[1]), w(&[1])]);
        let mus = tm.enumerate_mu(&Content(vec![1]));
        let expect = vec![
            MuSeq::parse_compact(&cd, tm.factors(), "* i *").unwrap(),
            MuSeq::parse_compact(&cd, tm.factors(), "* * i").unwrap(),
        ];
        assert_eq!(mus, expect);
        assert_eq!(tm.l_vector(&mus[0]).unwrap().coeffs, vec![RatQ::one(), RatQ::zero()]);
        assert_eq!(tm.l_vector(&mus[1]).unwrap().coeffs, vec![RatQ::q_pow(-1), RatQ::one()]);
        let g = laurent_matrix(&tm.l_gram(&mus).unwrap()).unwrap();
        assert!(g.iter().flatten().all(LaurentInt::is_nonnegative));
        let one = qg.tensor(&[w(&[1])]);
        assert_eq!(one.enumerate_mu(&Content(vec![0])), vec![MuSeq(vec![MuEntry::TypeII(w(&[1]))])]);
        assert!(one.l_vector(&MuSeq(vec![MuEntry::TypeII(w(&[1]))])).unwrap().coeffs[0].is_one());
        let vacuum = qg.tensor(&[]);
        let lone = MuSeq(vec![MuEntry::TypeI { vertex: 0, n: 1 }]);
        assert!(vacuum.l_vector(&lone).unwrap().is_zero());
        assert!(matches!(tm.l_vector(&lone), Err(Error::TypeIIMismatch)));
    }

    #[test]
    fn sl3_enumeration_and_spanning() {
        let qg = sl3();
        let tm = qg.tensor(&[w(&[1, 1])]);
        let nu = Content(vec![1, 1]);
        let mus = tm.enumerate_mu(&nu);
        let cd = qg.cartan().clone();
        let ij = MuSeq::parse_compact(&cd, tm.factors(), "* i j").unwrap();
        let ji = MuSeq::parse_compact(&cd, tm.factors(), "* j i").unwrap();
        assert!(mus.contains(&ij) && mus.contains(&ji));
        for nu in cd.enumerate_contents(4) {
            let mus = tm.enumerate_mu(&nu);
            let m: Matrix<RatQ> = mus.iter().map(|m| tm.l_vector(m).unwrap().coeffs).collect();
            let dim = tm.space(&nu).dim();
            let rank = if dim == 0 { 0 } else { linalg::rank(&m) };
            assert_eq!(rank, dim, "content {nu}");
        }
    }

    #[test]
    fn embedding_preserves_form_and_intertwines_e() {
        let qg = sl3();
        let tm = qg.tensor(&[w(&[1, 0]), w(&[1, 1])]);
        let pre = tm.prefix().unwrap().clone();
        for nu in qg.cartan().enumerate_contents(2) {
            let s = pre.space(&nu);
            for a in 0..s.dim() {
                for b in 0..s.dim() {
                    let (u, v) = (s.unit(a), s.unit(b));
                    assert_eq!(tm.form(&tm.embed(&u), &tm.embed(&v)), pre.form(&u, &v));
                }
                for i in 0..2 {
                    let lhs = tm.act(Generator::e(i), &tm.embed(&s.unit(a)));
                    let rhs = pre.act(Generator::e(i), &s.unit(a)).map(|x| tm.embed(&x));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn divided_powers_agree_with_coproduct_formula() {
        let qg = sl3();
        let tm = qg.tensor(&[w(&[1, 1]), w(&[0, 1]), w(&[2, 0])]);
        for nu in qg.cartan().enumerate_contents(3) {
            let s = tm.space(&nu);
            for k in 0..s.dim() {
                for i in 0..2 {
                    for n in 1..=3 {
                        for gen in [Generator::F { i, n }, Generator::E { i, n }] {
                            let v = s.unit(k);
                            assert_eq!(tm.act(gen, &v), tm.act_divided_by_coproduct(gen, &v), "{gen:?} on {nu}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mu_json_round_trip() {
        let qg = sl3();
        let cd = qg.cartan();
        let mu = MuSeq(vec![MuEntry::TypeII(w(&[1, 0])), MuEntry::TypeI { vertex: 1, n: 2 }]);
        let v = mu.to_json(cd);
        assert_eq!(v, serde_json::json!([{"type":"II","omega":{"i":1,"j":0}},{"type":"I","vertex":"j","n":2}]));
        assert_eq!(MuSeq::from_json(cd, &v).unwrap(), mu);
        assert_eq!(mu.display(cd), "(Λ(i), F_j^(2))");
    }
}
