//! Configuration, command dispatch and rendering behind the `qcanon` binary.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::canon::{monomial_form, CanonContext, CanonOptions, OracleBounds, OracleMode};
use crate::cartan::{CartanData, Content, DominantWeight, GraphSpec};
use crate::error::{Error, Result};
use crate::involution::{bar_basis, bar_vector};
use crate::qarith::RatQ;
use crate::tensor::{ModuleVector, MuSeq, QuantumGroup, TensorModule};
use crate::verify::verify_all;
use crate::verma::{FWord, Generator, Letter};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Pretty,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub degree: Option<u32>,
    pub height: Option<u32>,
    pub dim_cap: Option<usize>,
    pub budget: Option<u64>,
}

impl OracleConfig {
    fn bounds(&self) -> OracleBounds {
        let d = OracleBounds::default();
        OracleBounds {
            degree: self.degree.or(d.degree),
            height: self.height.unwrap_or(d.height),
            dim_cap: self.dim_cap.unwrap_or(d.dim_cap),
            budget: self.budget.unwrap_or(d.budget),
        }
    }
}

/// The JSON configuration file.
///
/// ```json
/// {"vertices": ["i", "j"], "edges": [["i", "j"]],
///  "highest_weights": [{"i": 1}, {"j": 1}], "depth": 4}
/// ```
#[derive(Clone, Debug, Deserialize)]
pub struct Config {
    #[serde(flatten)]
    pub graph: GraphSpec,
    #[serde(default)]
    pub highest_weights: Vec<Value>,
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub format: Format,
}

fn default_depth() -> u32 {
    4
}

impl Config {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("bad config: {e}")))
    }
}

/// Everything a command needs, built once from a [`Config`].
pub struct Session {
    pub cartan: Arc<CartanData>,
    pub factors: Vec<DominantWeight>,
    pub depth: u32,
    pub format: Format,
    pub ctx: CanonContext,
    pub module: Arc<TensorModule>,
}

impl Session {
    pub fn new(config: &Config, depth: Option<u32>, format: Option<Format>, oracle: OracleMode) -> Result<Self> {
        let cartan = config.graph.build()?;
        let factors = config
            .highest_weights
            .iter()
            .map(|v| cartan.labels_from_json(v).map(DominantWeight))
            .collect::<Result<Vec<_>>>()?;
        let depth = depth.unwrap_or(config.depth);
        let qg = Arc::new(QuantumGroup::new(cartan));
        let opts = CanonOptions { depth, oracle, bounds: config.oracle.bounds() };
        let ctx = CanonContext::new(qg.clone(), opts);
        let module = qg.tensor(&factors);
        Ok(Session {
            cartan: qg.cartan().clone(),
            factors,
            depth,
            format: format.unwrap_or(config.format),
            ctx,
            module,
        })
    }

    fn check_depth(&self, nu: &Content) -> Result<()> {
        if nu.total() > self.depth {
            return Err(Error::OutOfDepth { content: self.cartan.format_labels(&nu.0), depth: self.depth });
        }
        Ok(())
    }

    /// Parses a vector given as a sequence (`--mu`) or as words per
    /// factor (`--tensor`).
    pub fn vector(&self, spec: &VectorSpec) -> Result<ModuleVector> {
        let v = match spec {
            VectorSpec::Mu(s) => {
                let mu = if s.trim_start().starts_with('[') {
                    MuSeq::from_json(&self.cartan, &serde_json::from_str(s)?)?
                } else {
                    MuSeq::parse_compact(&self.cartan, &self.factors, s)?
                };
                self.check_depth(&mu.content(self.cartan.rank()))?;
                self.module.l_vector(&mu)?
            }
            VectorSpec::Tensor(s) => {
                let parts: Vec<&str> = if self.factors.is_empty() && s.trim().is_empty() {
                    Vec::new()
                } else {
                    s.split('|').collect()
                };
                if parts.len() != self.factors.len() {
                    return Err(Error::Input(format!(
                        "expected {} factor words separated by '|', got {}",
                        self.factors.len(),
                        parts.len()
                    )));
                }
                let words = parts.iter().map(|p| parse_fword(&self.cartan, p)).collect::<Result<Vec<_>>>()?;
                let total: u32 = words.iter().map(|w| w.content(self.cartan.rank()).total()).sum();
                if total > self.depth {
                    let mut c = self.cartan.zero_content();
                    for w in &words {
                        c = &c + &w.content(self.cartan.rank());
                    }
                    self.check_depth(&c)?;
                }
                self.module.pure_tensor_of_words(&words)
            }
        };
        Ok(v)
    }
}

/// A vector argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VectorSpec {
    Mu(String),
    Tensor(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Canon,
    Verify,
    Gram { vectors: Vec<VectorSpec> },
    Bar { vector: VectorSpec },
    Act { generator: String, vector: Option<VectorSpec>, nu: Option<String> },
}

/// Rendered output and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// Exit code for an error: 2 for input errors, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        1
    }
}

/// `F_i F_j^2 ...` style words: space separated letters, `^n` for divided
/// powers; an empty string is `η`.
pub fn parse_fword(cd: &CartanData, s: &str) -> Result<FWord> {
    s.split_whitespace()
        .map(|tok| {
            let tok = tok.trim_start_matches("F_");
            let (name, n) = match tok.split_once('^') {
                Some((name, n)) => {
                    let n = n.trim_matches(|c| c == '(' || c == ')');
                    (name, n.parse::<u32>().map_err(|_| Error::Input(format!("bad exponent in {tok:?}")))?)
                }
                None => (tok, 1),
            };
            if n == 0 {
                return Err(Error::Input(format!("divided power must be positive in {tok:?}")));
            }
            Ok(Letter { vertex: cd.vertex_index(name)?, n })
        })
        .collect::<Result<Vec<_>>>()
        .map(FWord)
}

/// `E_i`, `F_j^(2)`, `F_j^2`, `K_i`, `K_i^-1`.
pub fn parse_generator(cd: &CartanData, s: &str) -> Result<Generator> {
    let bad = || Error::Input(format!("bad generator {s:?}; expected e.g. E_i, F_j^(2), K_i^-1"));
    let s = s.trim();
    let (head, rest) = s.split_once('_').ok_or_else(bad)?;
    let (name, exp) = match rest.split_once('^') {
        Some((name, e)) => (name, Some(e.trim_matches(|c| c == '(' || c == ')'))),
        None => (rest, None),
    };
    let i = cd.vertex_index(name)?;
    match head {
        "K" => {
            let power = exp.map_or(Ok(1), |e| e.parse::<i32>().map_err(|_| bad()))?;
            Ok(Generator::K { i, power })
        }
        "E" | "F" => {
            let n = exp.map_or(Ok(1), |e| e.parse::<u32>().map_err(|_| bad()))?;
            if n == 0 {
                return Err(bad());
            }
            Ok(if head == "E" { Generator::E { i, n } } else { Generator::F { i, n } })
        }
        _ => Err(bad()),
    }
}

/// `2i+j`, `0`, or a JSON object of labels.
pub fn parse_content(cd: &CartanData, s: &str) -> Result<Content> {
    let s = s.trim();
    if s.starts_with('{') {
        return Ok(Content(cd.labels_from_json(&serde_json::from_str(s)?)?));
    }
    let mut c = cd.zero_content();
    if s == "0" {
        return Ok(c);
    }
    for term in s.split('+').map(str::trim) {
        let digits = term.chars().take_while(char::is_ascii_digit).count();
        let (n, name) = term.split_at(digits);
        let n: u32 = if n.is_empty() { 1 } else { n.parse().map_err(|_| Error::Input(format!("bad content {s:?}")))? };
        c.0[cd.vertex_index(name)?] += n;
    }
    Ok(c)
}

/// `F_i F_j η ⊗ η`, with each nonzero pure tensor and its coefficient.
pub fn render_vector(tm: &TensorModule, v: &ModuleVector) -> String {
    let cd = tm.cartan();
    let space = tm.space(&v.content);
    let terms: Vec<String> = v
        .coeffs
        .iter()
        .zip(space.basis())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, pt)| {
            let tensor = if pt.0.is_empty() {
                "1".to_string()
            } else {
                pt.0.iter()
                    .zip(tm.irreps())
                    .map(|((cc, k), irrep)| FWord::plain(irrep.space(cc).pivot_word(*k)).display(cd))
                    .collect::<Vec<_>>()
                    .join(" ⊗ ")
            };
            if c.is_one() {
                tensor
            } else {
                format!("({c}) {tensor}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn vector_json(tm: &TensorModule, v: &ModuleVector) -> Value {
    let space = tm.space(&v.content);
    let terms: Vec<Value> = v
        .coeffs
        .iter()
        .zip(space.basis())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, pt)| json!({"tensor": crate::canon::pure_tensor_json(tm, pt), "coeff": c}))
        .collect();
    json!({"nu": tm.cartan().labels_to_json(&v.content.0), "terms": terms})
}

fn emit(format: Format, value: &Value, pretty: String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Pretty => pretty,
    }
}

fn module_label(s: &Session) -> String {
    if s.factors.is_empty() {
        return "Λ(∅)".into();
    }
    s.factors.iter().map(|w| format!("Λ({})", s.cartan.format_labels(&w.0))).collect::<Vec<_>>().join(" ⊗ ")
}

/// Runs a command; `Err` only for errors that stop the whole command.
pub fn run(s: &Session, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Canon => cmd_canon(s),
        Command::Verify => cmd_verify(s),
        Command::Gram { vectors } => cmd_gram(s, vectors),
        Command::Bar { vector } => cmd_bar(s, vector),
        Command::Act { generator, vector, nu } => cmd_act(s, generator, vector.as_ref(), nu.as_deref()),
    }
}

pub fn cmd_canon(s: &Session) -> Result<Outcome> {
    let tm = &s.module;
    let cd = &s.cartan;
    let contents = cd.enumerate_contents(s.depth);
    let results: Vec<_> = contents.iter().map(|nu| (nu, s.ctx.canonical_basis(tm, nu))).collect();
    let mut spaces = Vec::new();
    let mut text = format!("{}, depth {}\n", module_label(s), s.depth);
    let mut total = 0;
    let mut ok = true;
    for (nu, r) in &results {
        match r {
            Ok((b, cert)) => {
                if b.dim() == 0 {
                    continue;
                }
                total += b.dim();
                ok &= cert.passed();
                spaces.push(b.to_json(tm, Some(cert)));
                let status = if cert.passed() { "certified" } else { "NOT certified" };
                let _ = writeln!(text, "ν = {} (dim {}, {}, {status})", cd.format_labels(&nu.0), b.dim(), b.source().name());
                for (k, v) in b.elements().iter().enumerate() {
                    match monomial_form(tm, v) {
                        Some(m) => {
                            let (name, expanded) = (m.display(tm), render_vector(tm, v));
                            let _ = writeln!(text, "  b{k} = {name}");
                            if name != expanded {
                                let _ = writeln!(text, "       = {expanded}");
                            }
                        }
                        None => {
                            let _ = writeln!(text, "  b{k} = {}", render_vector(tm, v));
                        }
                    }
                }
            }
            Err(e) => {
                if e.is_input_error() {
                    return Err(Error::Input(e.to_string()));
                }
                ok = false;
                spaces.push(json!({"nu": cd.labels_to_json(&nu.0), "error": e.to_string()}));
                let _ = writeln!(text, "ν = {}: error: {e}", cd.format_labels(&nu.0));
            }
        }
    }
    let _ = writeln!(text, "{total} canonical elements, {}", if ok { "all certified" } else { "certification FAILED" });
    let value = json!({
        "module": s.factors.iter().map(|w| cd.labels_to_json(&w.0)).collect::<Vec<_>>(),
        "depth": s.depth,
        "total": total,
        "certified": ok,
        "weight_spaces": spaces,
    });
    Ok(Outcome { output: emit(s.format, &value, text), code: if ok { 0 } else { 1 } })
}

pub fn cmd_verify(s: &Session) -> Result<Outcome> {
    let tm = &s.module;
    let report = verify_all(tm, s.depth, Some(&s.ctx))?;
    let mut text = format!("{}, depth {}\n", module_label(s), s.depth);
    let mut ids: Vec<&str> = report.checks.iter().map(|c| c.id).collect();
    ids.dedup();
    let mut seen = std::collections::BTreeSet::new();
    for id in ids.into_iter().filter(|id| seen.insert(*id)) {
        let n = report.count(id);
        let fail = report.checks.iter().filter(|c| c.id == id && !c.pass).count();
        let _ = writeln!(text, "{id:18} {:>7} checks  {}", n, if fail == 0 { "pass".to_string() } else { format!("{fail} FAILED") });
    }
    if let Some(f) = report.first_failure() {
        let _ = writeln!(
            text,
            "first failure: {} at ν = {}, e{} ({}): {} vs {}",
            f.id,
            s.cartan.format_labels(&f.content.0),
            f.index,
            f.detail,
            f.sides.as_ref().map_or("", |x| &x.0),
            f.sides.as_ref().map_or("", |x| &x.1)
        );
    }
    let _ = writeln!(text, "{} passed, {} failed", report.passed(), report.failed());
    let code = if report.all_pass() { 0 } else { 1 };
    Ok(Outcome { output: emit(s.format, &report.to_json(tm), text), code })
}

pub fn cmd_gram(s: &Session, specs: &[VectorSpec]) -> Result<Outcome> {
    if specs.is_empty() {
        return Err(Error::Input("gram needs at least one vector".into()));
    }
    let tm = &s.module;
    let vs = specs.iter().map(|v| s.vector(v)).collect::<Result<Vec<_>>>()?;
    let m: Vec<Vec<RatQ>> = vs.iter().map(|u| vs.iter().map(|w| tm.form(u, w)).collect()).collect();
    let mut text = String::new();
    for row in &m {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "{}", cells.join("  |  "));
    }
    let value = json!({"gram": m});
    Ok(Outcome { output: emit(s.format, &value, text), code: 0 })
}

pub fn cmd_bar(s: &Session, spec: &VectorSpec) -> Result<Outcome> {
    let tm = &s.module;
    let v = s.vector(spec)?;
    let bb = bar_basis(tm, &v.content)?;
    let psi = bar_vector(&bb, &v);
    let text = format!("v    = {}\nΨ(v) = {}\n", render_vector(tm, &v), render_vector(tm, &psi));
    let value = json!({"input": vector_json(tm, &v), "bar": vector_json(tm, &psi)});
    Ok(Outcome { output: emit(s.format, &value, text), code: 0 })
}

pub fn cmd_act(s: &Session, generator: &str, spec: Option<&VectorSpec>, nu: Option<&str>) -> Result<Outcome> {
    let tm = &s.module;
    let cd = &s.cartan;
    let gen = parse_generator(cd, generator)?;
    let gname = gen.display(cd);
    match (spec, nu) {
        (Some(spec), None) => {
            let v = s.vector(spec)?;
            let img = match gen.target(&v.content) {
                Some(t) => {
                    s.check_depth(&t)?;
                    tm.act(gen, &v).expect("target exists")
                }
                None => ModuleVector::zero(v.content.clone(), 0),
            };
            let (img_text, img_json) = if img.dim() == 0 {
                ("0".to_string(), Value::Null)
            } else {
                (render_vector(tm, &img), vector_json(tm, &img))
            };
            let text = format!("v = {}\n{gname} v = {img_text}\n", render_vector(tm, &v));
            let value = json!({"generator": gname, "input": vector_json(tm, &v), "image": img_json});
            Ok(Outcome { output: emit(s.format, &value, text), code: 0 })
        }
        (None, Some(nu)) => {
            let nu = parse_content(cd, nu)?;
            s.check_depth(&nu)?;
            let (src, _) = s.ctx.canonical_basis(tm, &nu)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut positive = true;
            let target = gen.target(&nu);
            let tb = match &target {
                Some(t) if tm.space(t).dim() > 0 => {
                    s.check_depth(t)?;
                    Some(s.ctx.canonical_basis(tm, t)?.0)
                }
                _ => None,
            };
            for (k, b) in src.elements().iter().enumerate() {
                let coords = match &tb {
                    Some(tb) => tb.coords(&tm.act(gen, b).expect("target exists")),
                    None => Vec::new(),
                };
                positive &= coords.iter().all(|c| c.as_laurent().is_some_and(|l| l.is_nonnegative()));
                let terms: Vec<String> = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| if c.is_one() { format!("b'{l}") } else { format!("({c}) b'{l}") })
                    .collect();
                let _ = writeln!(text, "{gname} b{k} = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
                rows.push(json!({"source": k, "coords": coords}));
            }
            if let Some(t) = &target {
                let _ = writeln!(text, "(b' = canonical basis at ν = {})", cd.format_labels(&t.0));
            }
            let _ = writeln!(text, "structure constants in N[q, q^-1]: {}", if positive { "yes" } else { "NO" });
            let value = json!({
                "generator": gname,
                "nu": cd.labels_to_json(&nu.0),
                "target": target.map(|t| cd.labels_to_json(&t.0)),
                "rows": rows,
                "positive": positive,
            });
            Ok(Outcome { output: emit(s.format, &value, text), code: if positive { 0 } else { 1 } })
        }
        _ => Err(Error::Input("act needs exactly one of a vector (--mu/--tensor) or --nu".into())),
    }
}
