//! Relation checks on realized modules, reported per basis vector.
//!
//! Check ids:
//!
//! | id | statement |
//! |----|-----------|
//! | `kef.1` | `K_i K_j = K_j K_i`, `K_i K_i^{-1} = 1` |
//! | `kef.2` | `K_i E_j = q^{a_ij} E_j K_i` |
//! | `kef.3` | `K_i F_j = q^{-a_ij} F_j K_i` |
//! | `rel.ef` | `E_i F_j - F_j E_i = δ_ij [e]` with `e` the `K_i`-exponent |
//! | `kef.8` | Serre relation in the `E_i` |
//! | `kef.9` | Serre relation in the `F_i` |
//! | `probe.integrable` | `F_i^N v = 0` for `N = e + h + 1`, `h` the largest `m` with `E_i^m v ≠ 0` |
//! | `kef.4` | `E_i^{(n-1)} E_i = [n] E_i^{(n)}`, against the closed coproduct formula |
//! | `kef.5` | `F_i^{(n-1)} F_i = [n] F_i^{(n)}`, likewise |
//! | `kef.6` | `E_i F_i - F_i E_i = [e]` |
//! | `kef.7` | `E_i F_j = F_j E_i` for `i ≠ j` |
//! | `form.sym`, `form.contra`, `form.adjoint`, `form.nondeg`, `form.lgram`, `form.canon` | form properties |
//! | `bar.involutive` | `Ψ² = 1` |
//! | `bar.k` | `Ψ K_i = K_i^{-1} Ψ` |
//! | `bar.e`, `bar.f` | `Ψ` commutes with `E_i^{(n)}` and `F_i^{(n)}` |
//! | `bar.embed` | `Ψ(u ⊗ η) = Ψ(u) ⊗ η` |
//! | `bar.choice` | `Ψ` from the reversed candidate order is the same map |
//!
//! A check that would raise the content more than one step past the depth
//! is skipped.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::canon::CanonContext;
use crate::cartan::Content;
use crate::error::Result;
use crate::involution::{bar_basis, bar_vector, build_bar_basis_from};
use crate::qarith::{linalg, qint, RatQ};
use crate::tensor::{ModuleVector, TensorModule};
use crate::verma::Generator;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub id: &'static str,
    pub content: Content,
    pub index: usize,
    pub detail: String,
    pub pass: bool,
    /// Both sides on failure.
    pub sides: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub module: String,
    pub depth: u32,
    pub checks: Vec<CheckRecord>,
}

impl RelationReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn count(&self, id: &str) -> usize {
        self.checks.iter().filter(|c| c.id == id).count()
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self, tm: &TensorModule) -> Value {
        let cd = tm.cartan();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({
                    "id": c.id,
                    "vector": {"nu": cd.labels_to_json(&c.content.0), "index": c.index},
                    "pass": c.pass,
                });
                if !c.detail.is_empty() {
                    v["detail"] = c.detail.clone().into();
                }
                if let Some((l, r)) = &c.sides {
                    v["lhs"] = l.clone().into();
                    v["rhs"] = r.clone().into();
                }
                v
            })
            .collect();
        json!({
            "module": self.module,
            "depth": self.depth,
            "checks": checks,
            "summary": {"pass": self.passed(), "fail": self.failed()},
        })
    }
}

/// `None` stands for the zero vector.
type Vector = Option<ModuleVector>;

fn nz(v: Vector) -> Vector {
    v.filter(|x| !x.is_zero())
}

fn act(tm: &TensorModule, gen: Generator, v: &Vector) -> Vector {
    nz(v.as_ref().and_then(|x| tm.act(gen, x)))
}

/// `g1 g2 ... gk v`: the last generator acts first.
fn word(tm: &TensorModule, gens: &[Generator], v: &ModuleVector) -> Vector {
    gens.iter().rev().fold(nz(Some(v.clone())), |acc, &g| act(tm, g, &acc))
}

fn scale(v: &Vector, c: &RatQ) -> Vector {
    nz(v.as_ref().map(|x| x.scale(c)))
}

fn add(a: Vector, b: Vector) -> Vector {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => nz(Some(x.add(&y))),
    }
}

fn sub(a: Vector, b: Vector) -> Vector {
    add(a, scale(&b, &-RatQ::one()))
}

fn show(v: &Vector) -> String {
    match v {
        None => "0".into(),
        Some(x) => {
            let parts: Vec<String> = x
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("({c})·e{k}"))
                .collect();
            parts.join(" + ")
        }
    }
}

struct Recorder<'a> {
    content: &'a Content,
    out: Vec<CheckRecord>,
}

impl Recorder<'_> {
    fn vec_eq(&mut self, id: &'static str, index: usize, detail: impl Into<String>, lhs: Vector, rhs: Vector) {
        let pass = lhs == rhs;
        let sides = (!pass).then(|| (show(&lhs), show(&rhs)));
        self.push(id, index, detail.into(), pass, sides);
    }

    fn scalar_eq(&mut self, id: &'static str, index: usize, detail: impl Into<String>, lhs: RatQ, rhs: RatQ) {
        let pass = lhs == rhs;
        let sides = (!pass).then(|| (lhs.to_string(), rhs.to_string()));
        self.push(id, index, detail.into(), pass, sides);
    }

    fn push(&mut self, id: &'static str, index: usize, detail: String, pass: bool, sides: Option<(String, String)>) {
        self.out.push(CheckRecord { id, content: self.content.clone(), index, detail, pass, sides });
    }
}

fn module_name(tm: &TensorModule) -> String {
    let cd = tm.cartan();
    if tm.factors().is_empty() {
        return "Λ(∅)".into();
    }
    tm.factors().iter().map(|w| format!("Λ({})", cd.format_labels(&w.0))).collect::<Vec<_>>().join("⊗")
}

fn per_content(
    tm: &TensorModule,
    depth: u32,
    f: impl Fn(&mut Recorder, &Content) + Sync,
) -> RelationReport {
    let contents = tm.cartan().enumerate_contents(depth);
    let parts: Vec<Vec<CheckRecord>> = contents
        .par_iter()
        .map(|nu| {
            let mut r = Recorder { content: nu, out: Vec::new() };
            f(&mut r, nu);
            r.out
        })
        .collect();
    RelationReport { module: module_name(tm), depth, checks: parts.into_iter().flatten().collect() }
}

/// The defining relations of `U` on every basis vector up to the depth.
pub fn verify_relations(tm: &TensorModule, depth: u32) -> RelationReport {
    let cd = tm.cartan().clone();
    let rank = cd.rank();
    per_content(tm, depth, |r, nu| {
        let space = tm.space(nu);
        let room = (depth + 1).saturating_sub(nu.total());
        for k in 0..space.dim() {
            let v = space.unit(k);
            for i in 0..rank {
                let (ki, kinv) = (Generator::k(i), Generator::k_inv(i));
                r.vec_eq("kef.1", k, format!("K_{0} K_{0}^-1", cd.vertex_name(i)), word(tm, &[ki, kinv], &v), Some(v.clone()));
                for j in 0..rank {
                    let kj = Generator::k(j);
                    let (ej, fj) = (Generator::e(j), Generator::f(j));
                    let (ii, jj) = (cd.vertex_name(i), cd.vertex_name(j));
                    let a = cd.a(i, j);
                    if i < j {
                        r.vec_eq("kef.1", k, format!("K_{ii} K_{jj}"), word(tm, &[ki, kj], &v), word(tm, &[kj, ki], &v));
                    }
                    r.vec_eq(
                        "kef.2",
                        k,
                        format!("K_{ii} E_{jj}"),
                        word(tm, &[ki, ej], &v),
                        scale(&word(tm, &[ej, ki], &v), &RatQ::q_pow(a)),
                    );
                    r.vec_eq(
                        "kef.3",
                        k,
                        format!("K_{ii} F_{jj}"),
                        word(tm, &[ki, fj], &v),
                        scale(&word(tm, &[fj, ki], &v), &RatQ::q_pow(-a)),
                    );
                    let ei = Generator::e(i);
                    let lhs = sub(word(tm, &[ei, fj], &v), word(tm, &[fj, ei], &v));
                    let rhs = if i == j {
                        scale(&Some(v.clone()), &RatQ::from_laurent(qint(k_exp(tm, nu, k, i))))
                    } else {
                        None
                    };
                    r.vec_eq("rel.ef", k, format!("[E_{ii}, F_{jj}]"), lhs, rhs);
                    if i != j {
                        let top = (1 - a) as u32;
                        let serre = |lower: bool| {
                            let mut acc: Vector = None;
                            for m in 0..=top {
                                let mk = |n: u32| if lower { Generator::F { i, n } } else { Generator::E { i, n } };
                                let mid = if lower { fj } else { ej };
                                let mut gens = Vec::new();
                                if m > 0 {
                                    gens.push(mk(m));
                                }
                                gens.push(mid);
                                if top - m > 0 {
                                    gens.push(mk(top - m));
                                }
                                let term = word(tm, &gens, &v);
                                acc = if m % 2 == 0 { add(acc, term) } else { sub(acc, term) };
                            }
                            acc
                        };
                        r.vec_eq("kef.8", k, format!("E-Serre ({ii}, {jj})"), serre(false), None);
                        if top < room {
                            r.vec_eq("kef.9", k, format!("F-Serre ({ii}, {jj})"), serre(true), None);
                        }
                    }
                }
                // integrability probe
                let e = k_exp(tm, nu, k, i);
                let mut h = 0u32;
                let mut cur = nz(Some(v.clone()));
                while let Some(x) = act(tm, Generator::e(i), &cur) {
                    h += 1;
                    cur = Some(x);
                }
                let n = (e + h as i64 + 1).max(1) as u32;
                let lhs = word(tm, &vec![Generator::f(i); n as usize], &v);
                r.vec_eq("probe.integrable", k, format!("F_{}^{n}", cd.vertex_name(i)), lhs, None);
            }
        }
    })
}

/// The `K_i`-exponent of the weight of basis vector `k` at `nu`.
fn k_exp(tm: &TensorModule, nu: &Content, k: usize, i: usize) -> i64 {
    tm.space(nu).basis()[k].0.iter().zip(tm.irreps()).map(|((c, _), irrep)| irrep.k_exponent(c, i)).sum()
}

/// Divided-power and commutator identities, with the divided powers also
/// computed through the closed coproduct formula.
pub fn verify_kef_shadow(tm: &TensorModule, depth: u32) -> RelationReport {
    let cd = tm.cartan().clone();
    let rank = cd.rank();
    per_content(tm, depth, |r, nu| {
        let space = tm.space(nu);
        let room = (depth + 1).saturating_sub(nu.total());
        for k in 0..space.dim() {
            let v = space.unit(k);
            let sv = Some(v.clone());
            for i in 0..rank {
                for n in 1..=nu[i].max(1) {
                    let lhs = word(tm, &[Generator::E { i, n: n - 1 }, Generator::e(i)], &v);
                    let direct = nz(tm.act_divided_by_coproduct(Generator::E { i, n }, &v));
                    let rhs = scale(&direct, &RatQ::from_laurent(qint(n as i64)));
                    r.vec_eq("kef.4", k, format!("E_{}^({n})", cd.vertex_name(i)), lhs, rhs);
                }
                for n in 1..=room {
                    let lhs = word(tm, &[Generator::F { i, n: n - 1 }, Generator::f(i)], &v);
                    let direct = nz(tm.act_divided_by_coproduct(Generator::F { i, n }, &v));
                    let rhs = scale(&direct, &RatQ::from_laurent(qint(n as i64)));
                    r.vec_eq("kef.5", k, format!("F_{}^({n})", cd.vertex_name(i)), lhs, rhs);
                }
                let (ei, fi) = (Generator::e(i), Generator::f(i));
                let lhs = sub(word(tm, &[ei, fi], &v), word(tm, &[fi, ei], &v));
                let rhs = scale(&sv, &RatQ::from_laurent(qint(k_exp(tm, nu, k, i))));
                r.vec_eq("kef.6", k, format!("[E_{0}, F_{0}]", cd.vertex_name(i)), lhs, rhs);
                for j in (0..rank).filter(|&j| j != i) {
                    let fj = Generator::f(j);
                    r.vec_eq(
                        "kef.7",
                        k,
                        format!("E_{} F_{}", cd.vertex_name(i), cd.vertex_name(j)),
                        word(tm, &[ei, fj], &v),
                        word(tm, &[fj, ei], &v),
                    );
                }
            }
        }
    })
}

/// Symmetry, contravariance, divided-power adjunction, nondegeneracy,
/// integrality of standard Gram entries and, given a context, almost
/// orthonormality of the canonical basis.
pub fn verify_forms(tm: &TensorModule, depth: u32, canon: Option<&CanonContext>) -> Result<RelationReport> {
    let cd = tm.cartan().clone();
    let rank = cd.rank();
    let canon_bases = match canon {
        Some(ctx) => Some(cd.enumerate_contents(depth).iter().map(|nu| ctx.canonical_basis(tm, nu)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let mut report = per_content(tm, depth, |r, nu| {
        let space = tm.space(nu);
        let dim = space.dim();
        let room = (depth + 1).saturating_sub(nu.total());
        for a in 0..dim {
            for b in a + 1..dim {
                r.scalar_eq("form.sym", a, format!("with e{b}"), space.gram()[a][b].clone(), space.gram()[b][a].clone());
            }
        }
        if dim > 0 {
            let pass = linalg::rank(space.gram()) == dim;
            r.push("form.nondeg", 0, format!("rank of {dim}x{dim} Gram"), pass, None);
        }
        for a in 0..dim {
            let u = space.unit(a);
            for i in 0..rank {
                let ii = cd.vertex_name(i).to_string();
                // K is self-adjoint
                for b in 0..dim {
                    let w = space.unit(b);
                    let lhs = tm.form(&tm.act(Generator::k(i), &u).unwrap(), &w);
                    let rhs = tm.form(&u, &tm.act(Generator::k(i), &w).unwrap());
                    r.scalar_eq("form.contra", a, format!("K_{ii}, e{b}"), lhs, rhs);
                    let lhs = tm.form(&tm.act(Generator::k_inv(i), &u).unwrap(), &w);
                    let rhs = tm.form(&u, &tm.act(Generator::k_inv(i), &w).unwrap());
                    r.scalar_eq("form.contra", a, format!("K_{ii}^-1, e{b}"), lhs, rhs);
                }
                // (E u, w) = (u, q K F w) and (F u, w) = (u, q K^-1 E w)
                if let Some(lo) = nu.minus(i, 1) {
                    let t = tm.space(&lo);
                    for b in 0..t.dim() {
                        let w = t.unit(b);
                        let eu = tm.act(Generator::e(i), &u).unwrap();
                        let lhs = tm.form(&eu, &w);
                        let kfw = word(tm, &[Generator::k(i), Generator::f(i)], &w);
                        let rhs = kfw.map_or(RatQ::zero(), |x| tm.form(&u, &x).shift(1));
                        r.scalar_eq("form.contra", a, format!("E_{ii}, e{b} at {}", cd.format_labels(&lo.0)), lhs, rhs);
                    }
                }
                if room >= 1 {
                    let hi = nu.plus(i, 1);
                    let t = tm.space(&hi);
                    for b in 0..t.dim() {
                        let w = t.unit(b);
                        let fu = tm.act(Generator::f(i), &u).unwrap();
                        let lhs = tm.form(&fu, &w);
                        let kew = word(tm, &[Generator::k_inv(i), Generator::e(i)], &w);
                        let rhs = kew.map_or(RatQ::zero(), |x| tm.form(&u, &x).shift(1));
                        r.scalar_eq("form.contra", a, format!("F_{ii}, e{b} at {}", cd.format_labels(&hi.0)), lhs, rhs);
                    }
                }
                // divided powers with the q^{n^2} factor
                for n in 1..=nu[i] {
                    let lo = nu.minus(i, n).expect("n <= nu_i");
                    let t = tm.space(&lo);
                    for b in 0..t.dim() {
                        let w = t.unit(b);
                        let lhs = tm.act(Generator::E { i, n }, &u).map_or(RatQ::zero(), |x| tm.form(&x, &w));
                        let kfw = word(tm, &[Generator::K { i, power: n as i32 }, Generator::F { i, n }], &w);
                        let rhs = kfw.map_or(RatQ::zero(), |x| tm.form(&u, &x).shift((n * n) as i64));
                        r.scalar_eq("form.adjoint", a, format!("E_{ii}^({n}), e{b}"), lhs, rhs);
                    }
                }
                for n in 1..=room {
                    let hi = nu.plus(i, n);
                    let t = tm.space(&hi);
                    for b in 0..t.dim() {
                        let w = t.unit(b);
                        let lhs = tm.form(&tm.act(Generator::F { i, n }, &u).unwrap(), &w);
                        let kew = word(tm, &[Generator::K { i, power: -(n as i32) }, Generator::E { i, n }], &w);
                        let rhs = kew.map_or(RatQ::zero(), |x| tm.form(&u, &x).shift((n * n) as i64));
                        r.scalar_eq("form.adjoint", a, format!("F_{ii}^({n}), e{b}"), lhs, rhs);
                    }
                }
            }
        }
        let mus = tm.enumerate_mu(nu);
        let ls: Vec<ModuleVector> = mus.iter().map(|m| tm.l_vector(m).expect("enumerated sequences match")).collect();
        for (a, u) in ls.iter().enumerate() {
            for (b, w) in ls.iter().enumerate().skip(a) {
                let x = tm.form(u, w);
                let pass = x.as_laurent().is_some_and(|l| l.is_nonnegative());
                let sides = (!pass).then(|| (x.to_string(), "N[q, q^-1]".to_string()));
                r.push("form.lgram", a, format!("{} with {}", mus[a].display(&cd), mus[b].display(&cd)), pass, sides);
            }
        }
    });
    if let Some(bases) = canon_bases {
        for (b, _) in bases {
            let mut r = Recorder { content: b.content(), out: Vec::new() };
            for (j, u) in b.elements().iter().enumerate() {
                for (k, w) in b.elements().iter().enumerate().skip(j) {
                    let x = tm.form(u, w);
                    let pass = x.as_laurent().is_some_and(|l| l.is_almost_delta(j == k));
                    let sides = (!pass).then(|| (x.to_string(), if j == k { "1 + q^-1 N[q^-1]" } else { "q^-1 N[q^-1]" }.to_string()));
                    r.push("form.canon", j, format!("(b{j}, b{k})"), pass, sides);
                }
            }
            report.checks.extend(r.out);
        }
    }
    Ok(report)
}

/// Properties of the bar involution on every basis vector up to the depth.
pub fn verify_bar(tm: &TensorModule, depth: u32) -> Result<RelationReport> {
    // build every bar basis up front so that errors surface here
    for nu in tm.cartan().enumerate_contents(depth + 1) {
        bar_basis(tm, &nu)?;
        if let Some(p) = tm.prefix() {
            bar_basis(p, &nu)?;
        }
    }
    let rank = tm.cartan().rank();
    let psi = |v: &ModuleVector| bar_vector(&bar_basis(tm, &v.content).expect("built above"), v);
    let psi_opt = |v: &Vector| v.as_ref().map(psi);
    Ok(per_content(tm, depth, |r, nu| {
        let space = tm.space(nu);
        let room = (depth + 1).saturating_sub(nu.total());
        let reversed = build_bar_basis_from(tm, nu, tm.enumerate_mu(nu).into_iter().rev());
        for k in 0..space.dim() {
            let v = space.unit(k);
            let pv = psi(&v);
            r.vec_eq("bar.involutive", k, "", Some(psi(&pv)), Some(v.clone()));
            for i in 0..rank {
                let gens = [Generator::k(i), Generator::k_inv(i)];
                for (g, ginv) in gens.iter().zip(gens.iter().rev()) {
                    let lhs = psi_opt(&act(tm, *g, &Some(v.clone())));
                    r.vec_eq("bar.k", k, "", lhs, act(tm, *ginv, &Some(pv.clone())));
                }
                for n in 1..=nu[i] {
                    let g = Generator::E { i, n };
                    r.vec_eq("bar.e", k, format!("n = {n}"), psi_opt(&word(tm, &[g], &v)), word(tm, &[g], &pv));
                }
                for n in 1..=room {
                    let g = Generator::F { i, n };
                    r.vec_eq("bar.f", k, format!("n = {n}"), psi_opt(&word(tm, &[g], &v)), word(tm, &[g], &pv));
                }
            }
            match &reversed {
                Ok(bb) => r.vec_eq("bar.choice", k, "", Some(bar_vector(bb, &v)), Some(pv.clone())),
                Err(e) => r.push("bar.choice", k, e.to_string(), false, None),
            }
        }
        if let Some(p) = tm.prefix() {
            let ps = p.space(nu);
            for k in 0..ps.dim() {
                let u = ps.unit(k);
                let pu = bar_vector(&bar_basis(p, nu).expect("built above"), &u);
                r.vec_eq("bar.embed", k, "", Some(psi(&tm.embed(&u))), Some(tm.embed(&pu)));
            }
        }
    }))
}

/// All four suites together.
pub fn verify_all(tm: &TensorModule, depth: u32, canon: Option<&CanonContext>) -> Result<RelationReport> {
    let mut report = verify_relations(tm, depth);
    report.merge(verify_kef_shadow(tm, depth));
    report.merge(verify_forms(tm, depth, canon)?);
    report.merge(verify_bar(tm, depth)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanData, DominantWeight};
    use crate::tensor::QuantumGroup;

    fn w(v: &[u32]) -> DominantWeight {
        DominantWeight(v.to_vec())
    }

    #[test]
    fn sl2_reports_pass() {
        let qg = QuantumGroup::new(CartanData::from_graph::<&str>(&["i"], &[]).unwrap());
        for factors in [vec![w(&[2])], vec![w(&[1]), w(&[1])], vec![]] {
            let tm = qg.tensor(&factors);
            let rep = verify_all(&tm, 3, None).unwrap();
            assert!(rep.all_pass(), "{:?}", rep.first_failure());
        }
    }

    #[test]
    fn sl3_relations_pass() {
        let qg = QuantumGroup::new(CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap());
        let tm = qg.tensor(&[w(&[1, 1])]);
        let rep = verify_relations(&tm, 4);
        assert!(rep.all_pass(), "{:?}", rep.first_failure());
        assert!(rep.count("kef.8") > 0 && rep.count("kef.9") > 0);
    }

    #[test]
    fn failures_carry_witnesses() {
        let qg = QuantumGroup::new(CartanData::from_graph::<&str>(&["i"], &[]).unwrap());
        let tm = qg.tensor(&[w(&[1])]);
        let mut r = Recorder { content: &Content(vec![0]), out: Vec::new() };
        let v = tm.space(&Content(vec![0])).unit(0);
        r.vec_eq("kef.6", 0, "", Some(v), None);
        assert!(!r.out[0].pass);
        assert_eq!(r.out[0].sides.as_ref().unwrap().1, "0");
    }
}
