use std::sync::Arc;

use qcanon::canon::{oracle_basis, CanonContext, CanonOptions, OracleBounds};
use qcanon::cartan::{CartanData, Content, DominantWeight};
use qcanon::qarith::{qfact, qint, LaurentInt, RatQ};
use qcanon::tensor::{MuSeq, QuantumGroup, TensorModule};
use qcanon::verify::verify_all;
use qcanon::verma::{FWord, Generator, Letter};

fn sl2() -> Arc<QuantumGroup> {
    Arc::new(QuantumGroup::new(CartanData::from_graph::<&str>(&["i"], &[]).unwrap()))
}

fn sl3() -> Arc<QuantumGroup> {
    Arc::new(QuantumGroup::new(CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap()))
}

fn w(v: &[u32]) -> DominantWeight {
    DominantWeight(v.to_vec())
}

fn f(vertex: usize, n: u32) -> FWord {
    FWord(vec![Letter { vertex, n }])
}

fn eta() -> FWord {
    FWord(Vec::new())
}

fn laurent(terms: &[(i64, i64)]) -> RatQ {
    RatQ::from_laurent(LaurentInt::from_terms(terms.iter().copied()))
}

/// `(F^(r) η, F^(r) η)` in the sl2 module `Λ(d)`, unrolled from
/// `(F u, w) = q^{1-e}(u, E w)` and `E F^r η = [r][d-r+1] F^{r-1} η`.
fn sl2_norm(d: i64, r: i64) -> RatQ {
    let mut x = RatQ::one();
    for s in 1..=r {
        let e = d - 2 * (s - 1);
        x = x.mul_laurent(&(&qint(s) * &qint(d - s + 1)).shift(1 - e));
    }
    x.div_laurent(&(&qfact(r as u32) * &qfact(r as u32))).unwrap()
}

#[test]
fn sl2_divided_power_norms() {
    let qg = sl2();
    for d in 0..=6u32 {
        let tm = qg.tensor(&[w(&[d])]);
        for r in 1..=d {
            let v = tm.monomial(&f(0, r));
            let x = tm.form(&v, &v);
            assert_eq!(x, sl2_norm(d as i64, r as i64), "d = {d}, r = {r}");
            assert!(x.as_laurent().unwrap().is_almost_delta(true));
        }
        assert_eq!(tm.space(&Content(vec![d + 1])).dim(), 0);
    }
}

#[test]
fn sl2_pair_actions_and_forms() {
    let qg = sl2();
    let tm = qg.tensor(&[w(&[1]), w(&[1])]);
    let top = tm.monomial(&eta());
    let fe = tm.monomial(&f(0, 1));
    // F(η ⊗ η) = q^-1 Fη ⊗ η + η ⊗ Fη
    let expected = tm
        .pure_tensor_of_words(&[f(0, 1), eta()])
        .scale(&RatQ::q_pow(-1))
        .add(&tm.pure_tensor_of_words(&[eta(), f(0, 1)]));
    assert_eq!(fe, expected);
    assert_eq!(tm.form(&fe, &fe), laurent(&[(0, 1), (-2, 1)]));
    assert_eq!(tm.act(Generator::e(0), &fe).unwrap(), top.scale(&RatQ::from_laurent(qint(2))));
    assert_eq!(tm.act(Generator::e(0), &tm.pure_tensor_of_words(&[f(0, 1), eta()])).unwrap(), top);

    let cd = qg.cartan();
    let mus: Vec<MuSeq> = ["* i *", "* * i"].iter().map(|s| MuSeq::parse_compact(cd, tm.factors(), s).unwrap()).collect();
    let g = tm.l_gram(&mus).unwrap();
    assert_eq!(g, vec![vec![RatQ::one(), RatQ::q_pow(-1)], vec![RatQ::q_pow(-1), laurent(&[(0, 1), (-2, 1)])]]);
    assert_eq!(tm.enumerate_mu(&Content(vec![1])), mus);
}

#[test]
fn sl3_pair_first_step() {
    let qg = sl3();
    let tm = qg.tensor(&[w(&[1, 0]), w(&[0, 1])]);
    assert_eq!(tm.monomial(&f(0, 1)), tm.pure_tensor_of_words(&[f(0, 1), eta()]));
}

#[test]
fn sl3_irreducible_examples() {
    let qg = sl3();
    let tm = qg.tensor(&[w(&[1, 1])]);
    let ctx = CanonContext::new(qg.clone(), CanonOptions::new(4));
    let nu = Content(vec![1, 1]);
    let (b, cert) = ctx.canonical_basis(&tm, &nu).unwrap();
    assert!(cert.passed());
    let ji = tm.monomial(&FWord(vec![Letter { vertex: 1, n: 1 }, Letter { vertex: 0, n: 1 }]));
    let ij = tm.monomial(&FWord(vec![Letter { vertex: 0, n: 1 }, Letter { vertex: 1, n: 1 }]));
    assert_eq!(b.element_set(), [ji.coeffs.clone(), ij.coeffs.clone()].into_iter().collect());
    let o = oracle_basis(&tm, &nu, &OracleBounds::default()).unwrap();
    assert_eq!(o.element_set(), b.element_set());

    // E_i on the top element lands positively in the basis at i+2j
    let top = tm.monomial(&FWord(vec![Letter { vertex: 0, n: 1 }, Letter { vertex: 1, n: 2 }, Letter { vertex: 0, n: 1 }]));
    let (below, _) = ctx.canonical_basis(&tm, &Content(vec![1, 2])).unwrap();
    let img = tm.act(Generator::e(0), &top).unwrap();
    assert!(below.coords(&img).iter().all(|x| x.as_laurent().is_some_and(|l| l.is_nonnegative())));

    // the Serre combination in F vanishes on η
    let word = |letters: &[(usize, u32)]| tm.monomial(&FWord(letters.iter().map(|&(vertex, n)| Letter { vertex, n }).collect()));
    let serre = word(&[(0, 2), (1, 1)]).sub(&word(&[(0, 1), (1, 1), (0, 1)])).add(&word(&[(1, 1), (0, 2)]));
    assert!(serre.is_zero());
}

#[test]
fn vacuum_and_small_verifications() {
    let qg = sl3();
    let ctx = CanonContext::new(qg.clone(), CanonOptions::new(3));
    let vac = qg.tensor(&[]);
    assert!(verify_all(&vac, 0, Some(&ctx)).unwrap().all_pass());
    let (b, _) = ctx.canonical_basis(&vac, &Content(vec![0, 0])).unwrap();
    assert_eq!(b.dim(), 1);
    for factors in [vec![w(&[1, 1])], vec![w(&[1, 0]), w(&[0, 1])]] {
        let tm: Arc<TensorModule> = qg.tensor(&factors);
        let r = verify_all(&tm, 3, Some(&ctx)).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
    }
}
