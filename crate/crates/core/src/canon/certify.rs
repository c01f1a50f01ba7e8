//! Runtime certificate for a candidate canonical basis.

use serde_json::{json, Value};

use super::{CanonContext, CanonicalBasis};
use crate::cartan::Content;
use crate::error::Result;
use crate::involution::{bar_basis, bar_vector};
use crate::qarith::RatQ;
use crate::tensor::{ModuleVector, TensorModule};
use crate::verma::Generator;

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    BarFixed,
    AlmostOrthonormal,
    Positivity,
    TensorCompat,
    StandardPositivity,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::BarFixed,
        Condition::AlmostOrthonormal,
        Condition::Positivity,
        Condition::TensorCompat,
        Condition::StandardPositivity,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Condition::BarFixed => "bar_fixed",
            Condition::AlmostOrthonormal => "almost_orthonormal",
            Condition::Positivity => "positivity",
            Condition::TensorCompat => "tensor_compat",
            Condition::StandardPositivity => "standard_positivity",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub condition: Condition,
    pub checked: usize,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn new(condition: Condition) -> Self {
        CheckResult { condition, checked: 0, witnesses: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.witnesses.is_empty()
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness());
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub content: Content,
    pub checks: Vec<CheckResult>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::pass)
    }

    pub fn check(&self, c: Condition) -> &CheckResult {
        self.checks.iter().find(|r| r.condition == c).expect("every condition is checked")
    }

    /// A description of the first failed condition, or an empty string.
    pub fn first_failure(&self) -> String {
        self.checks
            .iter()
            .find(|r| !r.pass())
            .map(|r| format!("{}: {}", r.condition.key(), r.witnesses[0]))
            .unwrap_or_default()
    }

    /// Number of individual checks performed for a condition.
    pub fn count(&self, c: Condition) -> usize {
        self.check(c).checked
    }

    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        for r in &self.checks {
            out.insert(r.condition.key().into(), r.pass().into());
        }
        let witnesses: Vec<Value> = self
            .checks
            .iter()
            .flat_map(|r| r.witnesses.iter().map(move |w| json!({"condition": r.condition.key(), "witness": w})))
            .collect();
        if !witnesses.is_empty() {
            out.insert("witnesses".into(), witnesses.into());
        }
        Value::Object(out)
    }
}

fn in_n_laurent(x: &RatQ) -> bool {
    x.as_laurent().is_some_and(|l| l.is_nonnegative())
}

/// Checks, for the basis `B` of one weight space:
/// bar-fixedness, `(b, b') ∈ δ + q^{-1} N[q^{-1}]`, positivity of the
/// structure constants of `K_i^{±1}`, `E_i^{(n)}`, `F_i^{(n)}` (targets within
/// the depth), `b' ⊗ η_ω ∈ B` for the prefix basis, and positivity of the
/// expansion of every standard vector.
pub fn certify_basis(ctx: &CanonContext, tm: &TensorModule, b: &CanonicalBasis) -> Result<Certificate> {
    let nu = b.content();
    let cd = tm.cartan();
    let depth = ctx.options().depth;
    let elems = b.elements();

    let mut bar = CheckResult::new(Condition::BarFixed);
    let bb = bar_basis(tm, nu)?;
    for (k, v) in elems.iter().enumerate() {
        bar.record(&bar_vector(&bb, v) == v, || format!("Ψ(b{k}) != b{k}"));
    }

    let mut orth = CheckResult::new(Condition::AlmostOrthonormal);
    for (j, u) in elems.iter().enumerate() {
        for (k, v) in elems.iter().enumerate().skip(j) {
            let x = tm.form(u, v);
            let ok = x.as_laurent().is_some_and(|l| l.is_almost_delta(j == k));
            orth.record(ok, || format!("(b{j}, b{k}) = {x}"));
        }
    }

    let mut pos = CheckResult::new(Condition::Positivity);
    for i in 0..cd.rank() {
        let mut gens = vec![Generator::K { i, power: 1 }, Generator::K { i, power: -1 }];
        gens.extend((1..=nu[i]).map(|n| Generator::E { i, n }));
        gens.extend((1..=depth.saturating_sub(nu.total())).map(|n| Generator::F { i, n }));
        for gen in gens {
            let Some(target) = gen.target(nu) else { continue };
            if tm.space(&target).dim() == 0 {
                continue;
            }
            let tb = if &target == nu { None } else { Some(ctx.raw(tm, &target)?) };
            let tb: &CanonicalBasis = tb.as_deref().unwrap_or(b);
            for (k, v) in elems.iter().enumerate() {
                let img = tm.act(gen, v).expect("target exists");
                for (l, x) in tb.coords(&img).iter().enumerate() {
                    pos.record(in_n_laurent(x), || {
                        format!("{} b{k} has coefficient {x} on b{l} at {}", gen.display(cd), cd.format_labels(&target.0))
                    });
                }
            }
        }
    }

    let mut compat = CheckResult::new(Condition::TensorCompat);
    if let Some(prefix) = tm.prefix() {
        let (pb, _) = ctx.canonical_basis(prefix, nu)?;
        let set = b.element_set();
        for (k, v) in pb.elements().iter().enumerate() {
            let e = tm.embed(v);
            compat.record(set.contains(&e.coeffs), || format!("b{k} ⊗ η is not a basis element"));
        }
    }

    let mut std_pos = CheckResult::new(Condition::StandardPositivity);
    for mu in tm.enumerate_mu(nu) {
        let l: ModuleVector = tm.l_vector(&mu)?;
        let c = b.coords(&l);
        let ok = c.iter().all(in_n_laurent);
        std_pos.record(ok, || format!("{} has a coefficient outside N[q, q^-1]", mu.display(cd)));
    }

    Ok(Certificate { content: nu.clone(), checks: vec![bar, orth, pos, compat, std_pos] })
}
