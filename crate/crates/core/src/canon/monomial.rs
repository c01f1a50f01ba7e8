//! Naming canonical elements by divided-power monomials.

use crate::cartan::Content;
use crate::tensor::{divided_words, ModuleVector, TensorModule};
use crate::verma::{FWord, Letter};

/// A monomial on `η ⊗ ... ⊗ η`, or a pure tensor of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialForm {
    Monomial(FWord),
    Pure(Vec<FWord>),
}

impl MonomialForm {
    pub fn display(&self, tm: &TensorModule) -> String {
        let cd = tm.cartan();
        match self {
            MonomialForm::Monomial(w) if tm.factors().len() == 1 => w.display(cd),
            MonomialForm::Monomial(w) => {
                let eta = vec!["η"; tm.factors().len()].join(" ⊗ ");
                let mut s = w.display(cd);
                s.pop();
                if w.0.is_empty() {
                    eta
                } else {
                    format!("{s}({eta})")
                }
            }
            MonomialForm::Pure(ws) => ws.iter().map(|w| w.display(cd)).collect::<Vec<_>>().join(" ⊗ "),
        }
    }
}

fn to_fword(w: &[(usize, u32)]) -> FWord {
    FWord(w.iter().map(|&(vertex, n)| Letter { vertex, n }).collect())
}

/// The first divided-power monomial `M` with `M(η ⊗ ... ⊗ η) = v`, otherwise
/// the first pure tensor of monomials equal to `v`.
pub fn monomial_form(tm: &TensorModule, v: &ModuleVector) -> Option<MonomialForm> {
    let nu = &v.content;
    if let Some(w) = divided_words(nu).iter().map(|w| to_fword(w)).find(|w| &tm.monomial(w) == v) {
        return Some(MonomialForm::Monomial(w));
    }
    if tm.factors().len() < 2 {
        return None;
    }
    let mut found = None;
    splits(tm, nu, 0, &mut Vec::new(), &mut |parts| {
        if found.is_some() {
            return;
        }
        let choices: Vec<Vec<FWord>> =
            parts.iter().map(|c| divided_words(c).iter().map(|w| to_fword(w)).collect()).collect();
        let mut idx = vec![0; choices.len()];
        loop {
            let words: Vec<FWord> = idx.iter().zip(&choices).map(|(&k, ws)| ws[k].clone()).collect();
            if &tm.pure_tensor_of_words(&words) == v {
                found = Some(MonomialForm::Pure(words));
                return;
            }
            let Some(slot) = (0..idx.len()).rev().find(|&s| idx[s] + 1 < choices[s].len()) else { return };
            idx[slot] += 1;
            idx[slot + 1..].iter_mut().for_each(|k| *k = 0);
        }
    });
    found
}

/// Calls `f` on every split of `nu` into per-factor contents with nonzero
/// weight spaces.
fn splits(tm: &TensorModule, nu: &Content, a: usize, cur: &mut Vec<Content>, f: &mut dyn FnMut(&[Content])) {
    let t = tm.factors().len();
    if a + 1 == t {
        if tm.irreps()[a].space(nu).dim() > 0 {
            cur.push(nu.clone());
            f(cur);
            cur.pop();
        }
        return;
    }
    for c in sub_contents(nu) {
        if tm.irreps()[a].space(&c).dim() == 0 {
            continue;
        }
        let rest = Content(nu.0.iter().zip(&c.0).map(|(x, y)| x - y).collect());
        cur.push(c);
        splits(tm, &rest, a + 1, cur, f);
        cur.pop();
    }
}

fn sub_contents(nu: &Content) -> Vec<Content> {
    let mut out = vec![Vec::new()];
    for &x in &nu.0 {
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..=x).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out.into_iter().map(Content).collect()
}
