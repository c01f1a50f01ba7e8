//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qcanon --test acceptance`.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qcanon::canon::{oracle_basis, CanonContext, CanonOptions, OracleBounds, Source};
use qcanon::cartan::{CartanData, Content, DominantWeight};
use qcanon::cli::{cmd_canon, Config, Format, Session};
use qcanon::canon::OracleMode;
use qcanon::qarith::RatQ;
use qcanon::tensor::{ModuleVector, QuantumGroup, TensorModule};
use qcanon::verify::{verify_bar, verify_forms, verify_kef_shadow, verify_relations, RelationReport};
use qcanon::verma::{FWord, Generator, Letter};

type Outcome = std::result::Result<String, String>;

fn sl2() -> CartanData {
    CartanData::from_graph::<&str>(&["i"], &[]).unwrap()
}

fn sl3() -> CartanData {
    CartanData::from_graph(&["i", "j"], &[("i", "j")]).unwrap()
}

fn affine() -> CartanData {
    CartanData::from_matrix(&["i", "j"], vec![vec![2, -2], vec![-2, 2]]).unwrap()
}

fn w(v: &[u32]) -> DominantWeight {
    DominantWeight(v.to_vec())
}

/// `"i j^2 i"` as a divided-power word over the vertices `i = 0`, `j = 1`.
fn word(s: &str) -> FWord {
    FWord(
        s.split_whitespace()
            .map(|t| {
                let (v, n) = t.split_once('^').unwrap_or((t, "1"));
                Letter { vertex: if v == "i" { 0 } else { 1 }, n: n.parse().unwrap() }
            })
            .collect(),
    )
}

/// The eight monomials of the sl3 tables, rightmost letter acting first.
const MONOMIALS: [&str; 8] = ["", "i", "j", "i^2 j", "j^2 i", "i j^2 i", "j i", "i j"];

type ElementSet = HashSet<(Content, Vec<RatQ>)>;

fn basis_set(ctx: &CanonContext, tm: &TensorModule, depth: u32) -> Result<ElementSet, String> {
    let mut out = HashSet::new();
    for nu in tm.cartan().enumerate_contents(depth) {
        let (b, cert) = ctx.canonical_basis(tm, &nu).map_err(|e| e.to_string())?;
        if !cert.passed() {
            return Err(format!("certificate failed at {nu}: {}", cert.first_failure()));
        }
        out.extend(b.elements().iter().map(|v| (v.content.clone(), v.coeffs.clone())));
    }
    Ok(out)
}

fn key(v: ModuleVector) -> (Content, Vec<RatQ>) {
    (v.content, v.coeffs)
}

fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).expect("fixture exists")
}

fn c1() -> Outcome {
    let start = Instant::now();
    let config = Config::from_json(&fixture("sl3_sum.json")).map_err(|e| e.to_string())?;
    let session = Session::new(&config, Some(4), Some(Format::Json), OracleMode::Off).map_err(|e| e.to_string())?;
    let out = cmd_canon(&session).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if out.code != 0 {
        return Err(format!("cmd_canon exited {}", out.code));
    }
    let json: serde_json::Value = serde_json::from_str(&out.output).map_err(|e| e.to_string())?;
    let total = json["total"].as_u64().unwrap_or(0);
    let got = basis_set(&session.ctx, &session.module, 4)?;
    let expected: ElementSet = MONOMIALS.iter().map(|m| key(session.module.monomial(&word(m)))).collect();
    if total != 8 || got != expected {
        return Err(format!("{total} elements emitted; equal to the monomials: {}", got == expected));
    }
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("runtime {elapsed:.2?} >= 10 s"));
    }
    Ok(format!("8 elements, exact equality, {elapsed:.2?} < 10 s"))
}

fn c2() -> Outcome {
    let qg = Arc::new(QuantumGroup::new(sl3()));
    let ctx = CanonContext::new(qg.clone(), CanonOptions::new(4));
    let mut notes = Vec::new();
    for (factors, ninth) in [([w(&[1, 0]), w(&[0, 1])], ["j i", ""]), ([w(&[0, 1]), w(&[1, 0])], ["i j", ""])] {
        let tm = qg.tensor(&factors);
        let got = basis_set(&ctx, &tm, 4)?;
        let mut expected: ElementSet = MONOMIALS.iter().map(|m| key(tm.monomial(&word(m)))).collect();
        expected.insert(key(tm.pure_tensor_of_words(&[word(ninth[0]), word(ninth[1])])));
        if expected.len() != 9 || got != expected {
            return Err(format!("{} elements, expected the 9 listed", got.len()));
        }
        notes.push(format!("F_{} F_{} η ⊗ η present", &ninth[0][0..1], &ninth[0][2..3]));
    }
    Ok(format!("9 + 9 elements, exact equality ({})", notes.join(", ")))
}

fn c3() -> Outcome {
    let qg = QuantumGroup::new(sl3());
    let tm = qg.tensor(&[w(&[1, 1])]);
    let v = tm.monomial(&word("i j^2 i"));
    let x = tm.form(&v, &v);
    if x == RatQ::one() {
        Ok("(F_i F_j^(2) F_i η, F_i F_j^(2) F_i η) = 1 exactly".into())
    } else {
        Err(format!("form value {x}"))
    }
}

fn c4() -> Outcome {
    let qg = Arc::new(QuantumGroup::new(sl2()));
    for d in 0..=6u32 {
        let ctx = CanonContext::new(qg.clone(), CanonOptions::new(d + 1));
        let tm = qg.tensor(&[w(&[d])]);
        let got = basis_set(&ctx, &tm, d + 1)?;
        let expected: ElementSet = (0..=d)
            .map(|r| key(tm.monomial(&FWord(if r == 0 { vec![] } else { vec![Letter { vertex: 0, n: r }] }))))
            .collect();
        if got != expected {
            return Err(format!("Λ({d}): basis differs from the divided powers"));
        }
    }
    let ctx = CanonContext::new(qg.clone(), CanonOptions::new(3));
    let tm = qg.tensor(&[w(&[1]), w(&[1])]);
    let f = || FWord(vec![Letter { vertex: 0, n: 1 }]);
    let e = || FWord(vec![]);
    let expected: ElementSet = [
        tm.pure_tensor_of_words(&[e(), e()]),
        tm.pure_tensor_of_words(&[f(), e()]),
        tm.monomial(&f()),
        tm.pure_tensor_of_words(&[f(), f()]),
    ]
    .into_iter()
    .map(key)
    .collect();
    if basis_set(&ctx, &tm, 3)? != expected {
        return Err("Λ(1) ⊗ Λ(1): basis differs".into());
    }
    let ob = oracle_basis(&tm, &Content(vec![1]), &OracleBounds::default()).map_err(|e| e.to_string())?;
    if !ob.elements().iter().all(|v| expected.contains(&key(v.clone()))) {
        return Err("Λ(1) ⊗ Λ(1): oracle disagrees at ν = i".into());
    }
    Ok("Λ(d) for d ≤ 6 and Λ(1) ⊗ Λ(1) exact".into())
}

struct Entry {
    name: String,
    tm: Arc<TensorModule>,
    ctx: CanonContext,
    depth: u32,
}

fn battery() -> Vec<Entry> {
    let mut out = Vec::new();
    let mut push = |qg: &Arc<QuantumGroup>, factors: Vec<DominantWeight>, depth: u32| {
        let tm = qg.tensor(&factors);
        let cd = qg.cartan();
        let name = if factors.is_empty() {
            "Λ(∅)".to_string()
        } else {
            factors.iter().map(|f| format!("Λ({})", cd.format_labels(&f.0))).collect::<Vec<_>>().join("⊗")
        };
        out.push(Entry { name, tm, ctx: CanonContext::new(qg.clone(), CanonOptions::new(depth)), depth });
    };
    let qg = Arc::new(QuantumGroup::new(sl2()));
    for t in 0..=3u32 {
        for code in 0..3u32.pow(t) {
            let factors = (0..t).map(|k| w(&[code / 3u32.pow(k) % 3])).collect();
            push(&qg, factors, 6);
        }
    }
    let qg = Arc::new(QuantumGroup::new(sl3()));
    push(&qg, vec![w(&[1, 1])], 5);
    push(&qg, vec![w(&[1, 0]), w(&[0, 1])], 5);
    push(&qg, vec![w(&[0, 1]), w(&[1, 0])], 5);
    let qg = Arc::new(QuantumGroup::new(affine()));
    push(&qg, vec![w(&[1, 0])], 4);
    out
}

fn c5(battery: &[Entry]) -> Outcome {
    let start = Instant::now();
    let mut constants = 0usize;
    let mut failures = Vec::new();
    let mut fallbacks = 0;
    for e in battery {
        let cd = e.tm.cartan();
        for nu in cd.enumerate_contents(e.depth) {
            let (b, cert) = e.ctx.canonical_basis(&e.tm, &nu).map_err(|x| format!("{}: {x}", e.name))?;
            if !cert.passed() {
                failures.push(format!("{} at {nu}: certificate {}", e.name, cert.first_failure()));
            }
            if b.source() == Source::Oracle {
                fallbacks += 1;
            }
            for i in 0..cd.rank() {
                let mut gens = vec![Generator::K { i, power: 1 }, Generator::K { i, power: -1 }];
                gens.extend((1..=nu[i]).map(|n| Generator::E { i, n }));
                gens.extend((1..=e.depth - nu.total()).map(|n| Generator::F { i, n }));
                for g in gens {
                    let Some(target) = g.target(&nu) else { continue };
                    if e.tm.space(&target).dim() == 0 {
                        continue;
                    }
                    let (tb, _) = e.ctx.canonical_basis(&e.tm, &target).map_err(|x| x.to_string())?;
                    for v in b.elements() {
                        let img = e.tm.act(g, v).expect("target exists");
                        for x in tb.coords(&img) {
                            constants += 1;
                            if !x.as_laurent().is_some_and(|l| l.is_nonnegative()) {
                                failures.push(format!("{} at {nu}: {} has coefficient {x}", e.name, g.display(cd)));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if !failures.is_empty() {
        return Err(format!("{} failures, first: {}", failures.len(), failures[0]));
    }
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("battery runtime {elapsed:.2?} >= 5 min"));
    }
    Ok(format!(
        "{} modules, {constants} structure constants in N[q, q^-1], {fallbacks} oracle fallbacks, {elapsed:.2?} < 5 min",
        battery.len()
    ))
}

fn suite(battery: &[Entry], f: impl Fn(&Entry) -> Result<RelationReport, String>) -> Outcome {
    let mut total = 0;
    let mut ids = HashSet::new();
    for e in battery {
        let r = f(e)?;
        if let Some(x) = r.first_failure() {
            return Err(format!("{}: {} at {} e{} ({}) {:?}", e.name, x.id, x.content, x.index, x.detail, x.sides));
        }
        total += r.checks.len();
        ids.extend(r.checks.iter().map(|c| c.id));
    }
    let mut ids: Vec<_> = ids.into_iter().collect();
    ids.sort();
    Ok(format!("{total} checks pass [{}]", ids.join(", ")))
}

fn c6(battery: &[Entry]) -> Outcome {
    suite(battery, |e| {
        let mut r = verify_relations(&e.tm, e.depth);
        r.merge(verify_kef_shadow(&e.tm, e.depth));
        Ok(r)
    })
}

fn c7(battery: &[Entry]) -> Outcome {
    suite(battery, |e| verify_bar(&e.tm, e.depth).map_err(|x| x.to_string()))
}

fn c8(battery: &[Entry]) -> Outcome {
    suite(battery, |e| verify_forms(&e.tm, e.depth, Some(&e.ctx)).map_err(|x| x.to_string()))
}

fn c9(battery: &[Entry]) -> Outcome {
    let bounds = OracleBounds::default();
    let mut compared = 0;
    for e in battery {
        for nu in e.tm.cartan().enumerate_contents(e.depth) {
            let dim = e.tm.space(&nu).dim();
            if dim == 0 || dim > bounds.dim_cap {
                continue;
            }
            let solver = e.ctx.raw(&e.tm, &nu).map_err(|x| format!("{} at {nu}: {x}", e.name))?;
            if solver.source() == Source::Oracle {
                return Err(format!("{} at {nu}: solver fell back to the oracle", e.name));
            }
            let oracle = oracle_basis(&e.tm, &nu, &bounds).map_err(|x| format!("{} at {nu}: {x}", e.name))?;
            if oracle.element_set() != solver.element_set() {
                return Err(format!("{} at {nu}: oracle and solver differ", e.name));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} weight spaces of dim ≤ {}, identical sets", bounds.dim_cap))
}

fn report(id: &str, title: &str, r: Outcome) -> bool {
    match r {
        Ok(detail) => {
            println!("PASS [{id}] {title}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL [{id}] {title}: {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report("1", "sl3 Λ(i+j) canonical basis at depth 4", c1());
    ok &= report("2", "sl3 Λ(i)⊗Λ(j) and Λ(j)⊗Λ(i) canonical bases", c2());
    ok &= report("3", "norm of F_i F_j^(2) F_i η", c3());
    ok &= report("4", "sl2 fixtures", c4());
    let battery = battery();
    ok &= report("5", "positivity sweep over the battery", c5(&battery));
    ok &= report("6", "relations and divided-power identities", c6(&battery));
    ok &= report("7", "bar involution suite", c7(&battery));
    ok &= report("8", "form suite", c8(&battery));
    ok &= report("9", "oracle equivalence on small weight spaces", c9(&battery));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
