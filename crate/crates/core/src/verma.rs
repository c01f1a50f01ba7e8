//! Irreducible highest-weight modules `Λ(ω)`, one weight space at a time.
//!
//! A weight space of the Verma module `M(ω)` is spanned by the plain words
//! `F_{i1} F_{i2} ... F_{ik} η` of the given content. The contravariant form
//! on these words is computed by peeling the leftmost letter,
//! `(F_a u, w) = (u, q K_a^{-1} E_a w)`, with `E_a` pushed through the
//! word by the commutation relation. The irreducible quotient `Λ(ω)` is the
//! quotient by the radical of that form; its basis is the set of pivot words
//! (leftmost independent columns of the Gram matrix).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::cartan::{CartanData, Content, DominantWeight};
use crate::error::Result;
use crate::qarith::linalg::{self, Matrix};
use crate::qarith::{qfact, qint, LaurentInt, RatQ};

/// A plain word: `w[0]` is the leftmost letter, so the last entry acts
/// first on `η`.
pub type Word = Vec<usize>;

/// A formal `Q(q)`-combination of plain words.
pub type WordSum = Vec<(Word, RatQ)>;

/// One factor `F_i^{(n)}` of an [`FWord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub vertex: usize,
    pub n: u32,
}

/// A divided-power monomial `F_{i1}^{(n1)} ... F_{ik}^{(nk)}`; the rightmost
/// letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FWord(pub Vec<Letter>);

impl FWord {
    pub fn plain(word: &[usize]) -> Self {
        FWord(word.iter().map(|&v| Letter { vertex: v, n: 1 }).collect())
    }

    pub fn content(&self, rank: usize) -> Content {
        let mut c = vec![0; rank];
        for l in &self.0 {
            c[l.vertex] += l.n;
        }
        Content(c)
    }

    /// The plain word `F_{i1}^{n1} ...` and the scalar `1 / prod [n_k]!`.
    pub fn expand(&self) -> (Word, RatQ) {
        let mut word = Vec::new();
        let mut den = LaurentInt::one();
        for l in &self.0 {
            word.extend(std::iter::repeat_n(l.vertex, l.n as usize));
            den = &den * &qfact(l.n);
        }
        let scale = RatQ::new(LaurentInt::one(), den).expect("factorials are nonzero");
        (word, scale)
    }

    /// JSON form `[["i", 1], ["j", 2]]`.
    pub fn to_json(&self, cd: &CartanData) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|l| serde_json::json!([cd.vertex_name(l.vertex), l.n]))
                .collect(),
        )
    }

    /// e.g. `F_i F_j^(2) η`.
    pub fn display(&self, cd: &CartanData) -> String {
        let mut s = String::new();
        for l in &self.0 {
            s.push_str("F_");
            s.push_str(cd.vertex_name(l.vertex));
            if l.n > 1 {
                s.push_str(&format!("^({})", l.n));
            }
            s.push(' ');
        }
        s.push('η');
        s
    }
}

/// Generators acting on modules: `E_i^{(n)}`, `F_i^{(n)}` and `K_i^{power}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E { i: usize, n: u32 },
    F { i: usize, n: u32 },
    K { i: usize, power: i32 },
}

impl Generator {
    pub fn e(i: usize) -> Self {
        Generator::E { i, n: 1 }
    }

    pub fn f(i: usize) -> Self {
        Generator::F { i, n: 1 }
    }

    pub fn k(i: usize) -> Self {
        Generator::K { i, power: 1 }
    }

    pub fn k_inv(i: usize) -> Self {
        Generator::K { i, power: -1 }
    }

    /// Content of the image of a vector of content `nu`, if that weight
    /// exists.
    pub fn target(&self, nu: &Content) -> Option<Content> {
        match *self {
            Generator::E { i, n } => nu.minus(i, n),
            Generator::F { i, n } => Some(nu.plus(i, n)),
            Generator::K { .. } => Some(nu.clone()),
        }
    }

    pub fn display(&self, cd: &CartanData) -> String {
        match *self {
            Generator::E { i, n: 1 } => format!("E_{}", cd.vertex_name(i)),
            Generator::E { i, n } => format!("E_{}^({n})", cd.vertex_name(i)),
            Generator::F { i, n: 1 } => format!("F_{}", cd.vertex_name(i)),
            Generator::F { i, n } => format!("F_{}^({n})", cd.vertex_name(i)),
            Generator::K { i, power: 1 } => format!("K_{}", cd.vertex_name(i)),
            Generator::K { i, power } => format!("K_{}^{power}", cd.vertex_name(i)),
        }
    }
}

/// A realized weight space `Λ(ω)_ν`.
pub struct WeightSpace {
    weight: DominantWeight,
    content: Content,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    gram: Matrix<LaurentInt>,
    pivots: Vec<usize>,
    pivot_gram: Matrix<RatQ>,
    /// For each word, its coordinates over the pivot words modulo the radical.
    word_coords: Vec<Vec<RatQ>>,
}

impl WeightSpace {
    pub fn weight(&self) -> &DominantWeight {
        &self.weight
    }

    pub fn content(&self) -> &Content {
        &self.content
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Gram matrix of the contravariant form over all spanning words.
    pub fn gram(&self) -> &Matrix<LaurentInt> {
        &self.gram
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn pivot_word(&self, k: usize) -> &Word {
        &self.words[self.pivots[k]]
    }

    /// Gram matrix restricted to the pivot words; nonsingular.
    pub fn pivot_gram(&self) -> &Matrix<RatQ> {
        &self.pivot_gram
    }

    pub fn word_coords(&self, word_idx: usize) -> &[RatQ] {
        &self.word_coords[word_idx]
    }

    /// The quotient map `M(ω)_ν -> Λ(ω)_ν` in pivot coordinates: the unique
    /// `c` with `Gram(piv, piv) c = Gram(piv, v)`.
    pub fn reduce_to_basis(&self, v: &[(Word, RatQ)]) -> Vec<RatQ> {
        let mut out = vec![RatQ::zero(); self.dim()];
        for (w, c) in v {
            if c.is_zero() {
                continue;
            }
            let idx = self.index[w];
            for (o, x) in out.iter_mut().zip(&self.word_coords[idx]) {
                if !x.is_zero() {
                    *o += &(c * x);
                }
            }
        }
        out
    }

    pub fn to_json(&self, cd: &CartanData) -> serde_json::Value {
        serde_json::json!({
            "omega": cd.labels_to_json(&self.weight.0),
            "nu": cd.labels_to_json(&self.content.0),
            "dim": self.dim(),
            "pivot_words": (0..self.dim())
                .map(|k| FWord::plain(self.pivot_word(k)).to_json(cd))
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Debug for WeightSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSpace")
            .field("weight", &self.weight)
            .field("content", &self.content)
            .field("words", &self.words.len())
            .field("dim", &self.dim())
            .finish()
    }
}

type ActionCache = Mutex<HashMap<(Content, usize), Arc<Vec<Vec<RatQ>>>>>;

type EImage = Arc<Vec<(Word, LaurentInt)>>;

/// The irreducible module `Λ(ω)` with lazily realized, cached weight spaces.
pub struct Irrep {
    cartan: Arc<CartanData>,
    weight: DominantWeight,
    spaces: Mutex<HashMap<Content, Arc<WeightSpace>>>,
    e_free_cache: Mutex<HashMap<(usize, Word), EImage>>,
    e_images: ActionCache,
    f_images: ActionCache,
}

impl fmt::Debug for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Irrep({:?})", self.weight.0)
    }
}

/// All plain words of content `nu`, lexicographic in vertex order.
pub fn words_of_content(nu: &Content) -> Vec<Word> {
    fn rec(left: &mut Vec<u32>, cur: &mut Word, out: &mut Vec<Word>, remaining: u32) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..left.len() {
            if left[v] > 0 {
                left[v] -= 1;
                cur.push(v);
                rec(left, cur, out, remaining - 1);
                cur.pop();
                left[v] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut nu.0.clone(), &mut Vec::new(), &mut out, nu.total());
    out
}

fn word_content(rank: usize, w: &[usize]) -> Content {
    let mut c = vec![0; rank];
    for &v in w {
        c[v] += 1;
    }
    Content(c)
}

impl Irrep {
    pub fn new(cartan: Arc<CartanData>, weight: DominantWeight) -> Self {
        assert_eq!(cartan.rank(), weight.0.len(), "weight must be indexed by the vertex set");
        Irrep {
            cartan,
            weight,
            spaces: Mutex::default(),
            e_free_cache: Mutex::default(),
            e_images: Mutex::default(),
            f_images: Mutex::default(),
        }
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn weight(&self) -> &DominantWeight {
        &self.weight
    }

    pub fn k_exponent(&self, nu: &Content, i: usize) -> i64 {
        self.cartan.k_exponent(&self.weight, nu, i)
    }

    /// `E_i` applied to a plain word in the Verma module, as a sum of plain
    /// words: `E_i F_j w η = F_j E_i w η + δ_ij [e] w η` where `e` is the
    /// `K_i`-exponent on `w η`, and `E_i η = 0`.
    pub fn e_action_free(&self, i: usize, word: &[usize]) -> Arc<Vec<(Word, LaurentInt)>> {
        let key = (i, word.to_vec());
        if let Some(hit) = self.e_free_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let mut acc: HashMap<Word, LaurentInt> = HashMap::new();
        if let Some((&j, rest)) = word.split_first() {
            for (w, c) in self.e_action_free(i, rest).iter() {
                let mut nw = Vec::with_capacity(w.len() + 1);
                nw.push(j);
                nw.extend_from_slice(w);
                *acc.entry(nw).or_default() += c;
            }
            if i == j {
                let e = self.k_exponent(&word_content(self.cartan.rank(), rest), i);
                *acc.entry(rest.to_vec()).or_default() += &qint(e);
            }
        }
        let mut out: Vec<(Word, LaurentInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort();
        let out = Arc::new(out);
        self.e_free_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `E_i` on a formal sum of plain words.
    pub fn e_action_sum(&self, i: usize, v: &[(Word, RatQ)]) -> WordSum {
        let mut acc: HashMap<Word, RatQ> = HashMap::new();
        for (w, c) in v {
            for (w2, c2) in self.e_action_free(i, w).iter() {
                *acc.entry(w2.clone()).or_default() += &c.mul_laurent(c2);
            }
        }
        let mut out: WordSum = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The weight space `Λ(ω)_ν`, realized on first use.
    pub fn space(&self, nu: &Content) -> Arc<WeightSpace> {
        if let Some(ws) = self.spaces.lock().unwrap().get(nu) {
            return ws.clone();
        }
        let ws = Arc::new(self.build_space(nu));
        self.spaces.lock().unwrap().entry(nu.clone()).or_insert(ws).clone()
    }

    fn build_space(&self, nu: &Content) -> WeightSpace {
        let words = words_of_content(nu);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let n = words.len();
        let gram: Matrix<LaurentInt> = if nu.is_zero() {
            vec![vec![LaurentInt::one()]]
        } else {
            // (F_a u', w) = q^{1-e'} (u', E_a w), e' the K_a-exponent at nu - a
            let mut gram = vec![vec![LaurentInt::zero(); n]; n];
            for (r, u) in words.iter().enumerate() {
                let a = u[0];
                let lower_nu = nu.minus(a, 1).expect("first letter belongs to the content");
                let lower = self.space(&lower_nu);
                let row_u = &lower.gram[lower.index[&u[1..]]];
                let shift = 1 - self.k_exponent(&lower_nu, a);
                for (c, w) in words.iter().enumerate() {
                    let mut acc = LaurentInt::zero();
                    for (w2, coeff) in self.e_action_free(a, w).iter() {
                        let x = &row_u[lower.index[w2]];
                        if !x.is_zero() {
                            acc += &(coeff * x);
                        }
                    }
                    gram[r][c] = acc.shift(shift);
                }
            }
            gram
        };
        let gram_q: Matrix<RatQ> = gram
            .iter()
            .map(|row| row.iter().map(|x| RatQ::from_laurent(x.clone())).collect())
            .collect();
        let (_, pivots) = linalg::rank_profile(&gram_q);
        let pivot_gram: Matrix<RatQ> =
            pivots.iter().map(|&r| pivots.iter().map(|&c| gram_q[r][c].clone()).collect()).collect();
        let word_coords = if pivots.is_empty() {
            vec![Vec::new(); n]
        } else {
            let rhs: Matrix<RatQ> = pivots.iter().map(|&r| gram_q[r].clone()).collect();
            let x = linalg::solve_exact(&pivot_gram, &rhs)
                .expect("exact arithmetic")
                .into_solution()
                .expect("pivot Gram matrix is nonsingular");
            linalg::transpose(&x)
        };
        WeightSpace {
            weight: self.weight.clone(),
            content: nu.clone(),
            words,
            index,
            gram,
            pivots,
            pivot_gram,
            word_coords,
        }
    }

    /// The contravariant form of two divided-power monomials applied to `η`.
    pub fn shapovalov(&self, u: &FWord, w: &FWord) -> RatQ {
        let rank = self.cartan.rank();
        let nu = u.content(rank);
        if nu != w.content(rank) {
            return RatQ::zero();
        }
        let ws = self.space(&nu);
        let (uw, us) = u.expand();
        let (ww, wsc) = w.expand();
        let g = &ws.gram[ws.index[&uw]][ws.index[&ww]];
        (&us * &wsc).mul_laurent(g)
    }

    /// Images of the pivot basis of `Λ(ω)_ν` under plain `E_i`, in the pivot
    /// basis of the target space.
    pub fn e_images(&self, nu: &Content, i: usize) -> Arc<Vec<Vec<RatQ>>> {
        let key = (nu.clone(), i);
        if let Some(hit) = self.e_images.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let src = self.space(nu);
        let out = match nu.minus(i, 1) {
            None => vec![Vec::new(); src.dim()],
            Some(tnu) => {
                let tgt = self.space(&tnu);
                (0..src.dim())
                    .map(|k| {
                        let lift = vec![(src.pivot_word(k).clone(), RatQ::one())];
                        tgt.reduce_to_basis(&self.e_action_sum(i, &lift))
                    })
                    .collect()
            }
        };
        let out = Arc::new(out);
        self.e_images.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Images of the pivot basis of `Λ(ω)_ν` under plain `F_i`.
    pub fn f_images(&self, nu: &Content, i: usize) -> Arc<Vec<Vec<RatQ>>> {
        let key = (nu.clone(), i);
        if let Some(hit) = self.f_images.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let src = self.space(nu);
        let tgt = self.space(&nu.plus(i, 1));
        let out: Vec<Vec<RatQ>> = (0..src.dim())
            .map(|k| {
                let mut w = vec![i];
                w.extend_from_slice(src.pivot_word(k));
                tgt.word_coords[tgt.index[&w]].clone()
            })
            .collect();
        let out = Arc::new(out);
        self.f_images.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Applies a generator to a vector given in pivot coordinates of `Λ(ω)_ν`.
    /// Returns `None` when the image weight does not exist (the image is 0).
    pub fn act(&self, gen: Generator, nu: &Content, v: &[RatQ]) -> Option<(Content, Vec<RatQ>)> {
        match gen {
            Generator::K { i, power } => {
                let e = self.k_exponent(nu, i) * power as i64;
                Some((nu.clone(), v.iter().map(|x| x.shift(e)).collect()))
            }
            Generator::E { i, n } | Generator::F { i, n } => {
                let raise = matches!(gen, Generator::F { .. });
                let mut cur_nu = nu.clone();
                let mut cur = v.to_vec();
                for _ in 0..n {
                    let next_nu = if raise { cur_nu.plus(i, 1) } else { cur_nu.minus(i, 1)? };
                    let images = if raise { self.f_images(&cur_nu, i) } else { self.e_images(&cur_nu, i) };
                    let dim = self.space(&next_nu).dim();
                    cur = apply_images(&images, &cur, dim);
                    cur_nu = next_nu;
                }
                if n > 1 {
                    let f = qfact(n);
                    cur = cur.iter().map(|x| x.div_laurent(&f).expect("nonzero factorial")).collect();
                }
                Some((cur_nu, cur))
            }
        }
    }

    /// Realizes every weight space with total content at most `depth`.
    pub fn realize(&self, depth: u32) -> Result<Vec<Arc<WeightSpace>>> {
        Ok(self.cartan.enumerate_contents(depth).iter().map(|nu| self.space(nu)).collect())
    }
}

/// `sum_k v[k] * images[k]`, with result dimension `dim`.
pub fn apply_images(images: &[Vec<RatQ>], v: &[RatQ], dim: usize) -> Vec<RatQ> {
    let mut out = vec![RatQ::zero(); dim];
    for (x, img) in v.iter().zip(images) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(img) {
            if !y.is_zero() {
                *o += &(x * y);
            }
        }
    }
    out
}
