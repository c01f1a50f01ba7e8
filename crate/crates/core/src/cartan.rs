//! Quiver input, the symmetric generalized Cartan matrix, dominant weights
//! and contents.
//!
//! A dominant weight `omega` is stored over the vertex set `I`; its component
//! `omega_i` is the framing multiplicity of the framed vertex attached to `i`.
//! A content `nu` labels the weight space `omega - sum_i nu_i alpha_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertices, edges and the matrix `a` with `a_ii = 2`, `a_ij = -#edges(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanData {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    a: Vec<Vec<i64>>,
}

impl CartanData {
    /// The Cartan matrix of a graph without loops.
    pub fn from_graph<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (k, v) in vertices.iter().enumerate() {
            if vertices[..k].contains(v) {
                return Err(Error::Input(format!("duplicate vertex {v:?}")));
            }
        }
        let find = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let n = vertices.len();
        let mut a = vec![vec![0i64; n]; n];
        for (k, row) in a.iter_mut().enumerate() {
            row[k] = 2;
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (x, y) in edges {
            let (i, j) = (find(x.as_ref())?, find(y.as_ref())?);
            if i == j {
                return Err(Error::CircleEdge(vertices[i].clone()));
            }
            a[i][j] -= 1;
            a[j][i] -= 1;
            idx_edges.push((i.min(j), i.max(j)));
        }
        Ok(CartanData { vertices, edges: idx_edges, a })
    }

    /// Accepts an explicit matrix and recovers the edge multiset from it.
    pub fn from_matrix<S: AsRef<str>>(vertices: &[S], a: Vec<Vec<i64>>) -> Result<Self> {
        let n = vertices.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCartan(format!("matrix must be {n} x {n}")));
        }
        let names: Vec<&str> = vertices.iter().map(|v| v.as_ref()).collect();
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("a[{0}][{0}] must be 2", names[i])));
            }
            for j in 0..n {
                if a[i][j] != a[j][i] {
                    return Err(Error::NotSymmetric(names[i].into(), names[j].into()));
                }
                if i != j && a[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "a[{}][{}] must be nonpositive",
                        names[i], names[j]
                    )));
                }
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..(-a[i][j]) {
                    edges.push((names[i], names[j]));
                }
            }
        }
        Self::from_graph(&names, &edges)
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// Exponent of the eigenvalue of `K_i` on the weight space `nu` of
    /// `M(omega)`: `omega_i - sum_j a_ij nu_j`.
    pub fn k_exponent(&self, omega: &DominantWeight, nu: &Content, i: usize) -> i64 {
        omega.0[i] as i64 - (0..self.rank()).map(|j| self.a[i][j] * nu.0[j] as i64).sum::<i64>()
    }

    /// Same quantity computed on the framed quiver: `bar(nu)_i - nu_i`, where
    /// `bar(nu)_i` sums `nu` over the heads of arrows leaving `i` (both
    /// orientations of every edge, plus the framing arrow carrying `omega_i`)
    /// minus `nu_i`.
    pub fn framed_balance(&self, omega: &DominantWeight, nu: &Content, i: usize) -> i64 {
        let mut out_sum = omega.0[i] as i64;
        for &(x, y) in &self.edges {
            if x == i {
                out_sum += nu.0[y] as i64;
            }
            if y == i {
                out_sum += nu.0[x] as i64;
            }
        }
        let bar_nu = out_sum - nu.0[i] as i64;
        bar_nu - nu.0[i] as i64
    }

    /// All contents with total at most `depth`, graded by total; within a
    /// degree, lexicographically descending in the declared vertex order.
    pub fn enumerate_contents(&self, depth: u32) -> Vec<Content> {
        let mut out = Vec::new();
        for d in 0..=depth {
            out.extend(self.contents_of_degree(d));
        }
        out
    }

    /// Contents of total exactly `d`, in the order of [`Self::enumerate_contents`].
    pub fn contents_of_degree(&self, d: u32) -> Vec<Content> {
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Content>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(Content(cur.clone()));
                return;
            }
            for x in (0..=left).rev() {
                cur[pos] = x;
                rec(pos + 1, left - x, cur, out);
            }
        }
        let n = self.rank();
        if n == 0 {
            return if d == 0 { vec![Content(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(0, d, &mut vec![0; n], &mut out);
        out
    }

    pub fn zero_content(&self) -> Content {
        Content(vec![0; self.rank()])
    }

    /// The content `n * i`.
    pub fn simple(&self, i: usize, n: u32) -> Content {
        let mut c = self.zero_content();
        c.0[i] = n;
        c
    }

    pub fn weight<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, u32)>) -> Result<DominantWeight> {
        let mut w = vec![0; self.rank()];
        for (name, v) in pairs {
            w[self.vertex_index(name)?] = v;
        }
        Ok(DominantWeight(w))
    }

    pub fn content<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, u32)>) -> Result<Content> {
        Ok(Content(self.weight(pairs)?.0))
    }

    /// `{"i": 1, "j": 0}` in declared vertex order.
    pub fn labels_to_json(&self, v: &[u32]) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (name, x) in self.vertices.iter().zip(v) {
            m.insert(name.clone(), (*x).into());
        }
        serde_json::Value::Object(m)
    }

    pub fn labels_from_json(&self, v: &serde_json::Value) -> Result<Vec<u32>> {
        let obj = v.as_object().ok_or_else(|| Error::Input(format!("expected an object, got {v}")))?;
        let mut out = vec![0; self.rank()];
        for (k, x) in obj {
            let n = x
                .as_u64()
                .ok_or_else(|| Error::Input(format!("component {k:?} must be a nonnegative integer")))?;
            out[self.vertex_index(k)?] = n as u32;
        }
        Ok(out)
    }

    /// Human-readable label such as `2i+j`, or `0`.
    pub fn format_labels(&self, v: &[u32]) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(k, &x)| {
                if x == 1 {
                    self.vertices[k].clone()
                } else {
                    format!("{x}{}", self.vertices[k])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// A highest weight `omega` in `N[I]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominantWeight(pub Vec<u32>);

/// A weight-space label `nu` in `N[I]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Content(pub Vec<u32>);

impl DominantWeight {
    pub fn zero(rank: usize) -> Self {
        DominantWeight(vec![0; rank])
    }
}

impl Content {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Content) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Content) -> Option<Content> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Content)
    }

    pub fn plus(&self, i: usize, n: u32) -> Content {
        let mut c = self.clone();
        c.0[i] += n;
        c
    }

    pub fn minus(&self, i: usize, n: u32) -> Option<Content> {
        let mut c = self.clone();
        c.0[i] = c.0[i].checked_sub(n)?;
        Some(c)
    }
}

impl Add<&Content> for &Content {
    type Output = Content;
    fn add(self, rhs: &Content) -> Content {
        Content(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Index<usize> for Content {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Index<usize> for DominantWeight {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for Content {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Raw graph description as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<i64>>>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<CartanData> {
        match &self.matrix {
            Some(m) => {
                let cd = CartanData::from_matrix(&self.vertices, m.clone())?;
                if !self.edges.is_empty() {
                    let from_edges = CartanData::from_graph(&self.vertices, &self.edges)?;
                    if from_edges.a != cd.a {
                        return Err(Error::InvalidCartan("matrix disagrees with the edge list".into()));
                    }
                }
                Ok(cd)
            }
            None => CartanData::from_graph(&self.vertices, &self.edges),
        }
    }
}

/// Edge-count summary used in reports.
pub fn edge_multiplicities(cd: &CartanData) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for e in cd.edges() {
        *m.entry(*e).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl3() -> CartanData {
        CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap()
    }

    #[test]
    fn graphs_to_matrices() {
        let sl2 = CartanData::from_graph::<&str>(&["i"], &[]).unwrap();
        assert_eq!(sl2.matrix(), &[vec![2]]);
        assert_eq!(sl3().matrix(), &[vec![2, -1], vec![-1, 2]]);
        let double = CartanData::from_graph(&["i", "j"], &[("i", "j"), ("j", "i")]).unwrap();
        assert_eq!(double.matrix(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(edge_multiplicities(&double).get(&(0, 1)), Some(&2));
    }

    #[test]
    fn loops_and_unknown_vertices_rejected() {
        assert!(matches!(CartanData::from_graph(&["i"], &[("i", "i")]), Err(Error::CircleEdge(_))));
        assert!(matches!(
            CartanData::from_graph(&["i"], &[("i", "k")]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn matrix_validation() {
        let bad = CartanData::from_matrix(&["i", "j"], vec![vec![2, -1], vec![-2, 2]]);
        assert!(matches!(bad, Err(Error::NotSymmetric(..))));
        assert!(bad.unwrap_err().to_string().contains("matrix not symmetric"));
        let ok = CartanData::from_matrix(&["i", "j"], vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(ok.edges().len(), 2);
    }

    #[test]
    fn k_exponents() {
        let sl2 = CartanData::from_graph::<&str>(&["i"], &[]).unwrap();
        for d in 0..5u32 {
            for r in 0..5u32 {
                let e = sl2.k_exponent(&DominantWeight(vec![d]), &Content(vec![r]), 0);
                assert_eq!(e, d as i64 - 2 * r as i64);
            }
        }
        let cd = sl3();
        let omega = DominantWeight(vec![1, 1]);
        let nu = Content(vec![1, 0]);
        assert_eq!(cd.k_exponent(&omega, &nu, 0), -1);
        assert_eq!(cd.k_exponent(&omega, &nu, 1), 2);
    }

    #[test]
    fn framed_quiver_agrees() {
        let cd = CartanData::from_graph(&["i", "j"], &[("i", "j"), ("i", "j")]).unwrap();
        let omega = DominantWeight(vec![2, 1]);
        for nu in cd.enumerate_contents(5) {
            for i in 0..2 {
                assert_eq!(cd.framed_balance(&omega, &nu, i), cd.k_exponent(&omega, &nu, i));
            }
        }
    }

    #[test]
    fn content_enumeration_order() {
        let sl2 = CartanData::from_graph::<&str>(&["i"], &[]).unwrap();
        assert_eq!(sl2.enumerate_contents(0), vec![Content(vec![0])]);
        assert_eq!(
            sl2.enumerate_contents(2),
            vec![Content(vec![0]), Content(vec![1]), Content(vec![2])]
        );
        let got: Vec<String> = sl3().enumerate_contents(2).iter().map(|c| sl3().format_labels(&c.0)).collect();
        assert_eq!(got, ["0", "i", "j", "2i", "i+j", "2j"]);
    }

    #[test]
    fn json_labels() {
        let cd = sl3();
        let v = cd.labels_to_json(&[1, 0]);
        assert_eq!(v.to_string(), r#"{"i":1,"j":0}"#);
        assert_eq!(cd.labels_from_json(&v).unwrap(), vec![1, 0]);
    }
}
