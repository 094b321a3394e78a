//! Subcommand implementations. Each returns a deterministic JSON report.

use std::collections::BTreeSet;
use std::path::Path;

use christol_core::automaton::{Acceptor, Dfao, Direction};
use christol_core::christol::{
    certify_sparse, classify_series, dfao_to_series, quasi_eval, support_acceptor,
    verify_certificate, Certificate, QuasiAutomatic, SeriesClassification, SeriesSource,
    DEFAULT_KERNEL_DEPTH,
};
use christol_core::digits::{encode_nat, positional_value, validate_expansion};
use christol_core::field::{FieldElement, GaloisField};
use christol_core::series::{
    equation_to_coeffs, gap_sum, gap_sum_neg, solve_artin_schreier, verify_algebraic, GenSeries, Q,
};
use christol_core::sparse::{
    check_dichotomy, closed_form, decompose, is_sparse_in_base, SparsenessVerdict,
};
use christol_core::spset::SpSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::formats::*;

type Res<T> = Result<T, CliError>;

/// Default precision for series computations.
pub const DEFAULT_PRECISION: u64 = 1 << 10;
/// Default upper end of the gap left by negative Artin-Schreier branches.
pub const DEFAULT_WINDOW: &str = "-1/1024";
/// Window bound and fractional digits for set reports.
pub const DEFAULT_SET_BOUND: u64 = 1 << 10;
pub const DEFAULT_SET_FRAC: usize = 6;
/// Largest exponent `n` tried when checking spread images.
const SPREAD_IMAGES: u32 = 8;

#[derive(Clone, Debug)]
pub struct Options {
    pub precision: Option<u64>,
    pub state_cap: usize,
    pub component_cap: usize,
    pub jobs: usize,
}

/// A report and whether all the checks it records passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub verified: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            verified: true,
        }
    }
}

/// Input files read by a command, by role, with content hashes.
#[derive(Default)]
pub struct Inputs(Map<String, Value>);

impl Inputs {
    fn read(&mut self, role: &str, path: &Path) -> Res<Vec<u8>> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("{}: {}", path.display(), e)))?;
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let hash = hex::encode(Sha256::digest(&bytes));
        self.0
            .insert(role.into(), json!({ "file": name, "sha256": hash }));
        Ok(bytes)
    }

    fn json<T: DeserializeOwned>(&mut self, role: &str, path: &Path) -> Res<T> {
        let bytes = self.read(role, path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::input(format!("{}: {}", path.display(), e)))
    }

    fn value(self) -> Value {
        Value::Object(self.0)
    }
}

fn report(command: &str, inputs: Inputs, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), inputs.value());
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn load_machine(inputs: &mut Inputs, role: &str, path: &Path) -> Res<(Machine, Alphabet)> {
    let a: AutomatonJson = inputs.json(role, path)?;
    a.load()
}

/// A digit machine with field outputs; acceptors become indicators over `F_p`.
fn series_machine(m: Machine, alphabet: Alphabet) -> Res<Dfao<FieldElement>> {
    if alphabet.radix {
        return Err(CliError::input("series machines read plain digits"));
    }
    match m {
        Machine::Field(f) => Ok(f),
        Machine::Acceptor(a) => {
            let field = GaloisField::prime(alphabet.digits).map_err(CliError::from)?;
            Ok(a.map_outputs(|&b| if b { field.one() } else { field.zero() }))
        }
    }
}

fn acceptor_of(m: Machine) -> Acceptor {
    match m {
        Machine::Acceptor(a) => a,
        Machine::Field(f) => support_acceptor(&f),
    }
}

// ---------- demo-thue-morse ----------

pub fn thue_morse() -> Dfao<FieldElement> {
    let f = GaloisField::prime(2).expect("F_2");
    Dfao::new(
        2,
        vec![vec![0, 1], vec![1, 0]],
        0,
        vec![f.zero(), f.one()],
        Direction::Lsd,
    )
    .expect("valid machine")
}

pub fn demo_thue_morse(count: u64) -> Res<Outcome> {
    let tm = thue_morse();
    let mut values = String::new();
    let mut agrees = true;
    for n in 0..count {
        let v = tm.run(&encode_nat(n, 2)).map_err(CliError::from)?.index();
        agrees &= v == (n.count_ones() % 2) as u64;
        values.push_str(&v.to_string());
    }
    let text = format!("f(0..{}) = {}", count.saturating_sub(1), values);
    let body = json!({
        "values": values,
        "text": text,
        "checks": [{ "check": "digit-sum parity", "passed": agrees }],
    });
    Ok(Outcome {
        report: report("demo-thue-morse", Inputs::default(), body),
        verified: agrees,
    })
}

// ---------- run / census ----------

pub fn run(dfao: &Path, word: &str) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let (m, alphabet) = load_machine(&mut inputs, "dfao", dfao)?;
    let w = alphabet.parse_word(word)?;
    let output = match &m {
        Machine::Acceptor(a) => json!(*a.run(&w).map_err(CliError::from)?),
        Machine::Field(f) => element_json(*f.run(&w).map_err(CliError::from)?),
    };
    Ok(Outcome::ok(report(
        "run",
        inputs,
        json!({ "word": word, "output": output }),
    )))
}

pub fn census(dfao: &Path, max: usize) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let (m, _) = load_machine(&mut inputs, "dfao", dfao)?;
    let a = acceptor_of(m);
    let table = a.census_table(max);
    let rows: Vec<Value> = table
        .iter()
        .enumerate()
        .map(|(n, c)| json!({ "n": n, "count": c.to_string() }))
        .collect();
    let body = json!({
        "definition": "number of accepted words of length at most n (nonzero output for field machines)",
        "census": rows,
    });
    Ok(Outcome::ok(report("census", inputs, body)))
}

// ---------- classify / certify ----------

pub enum SourceSpec<'a> {
    Dfao(&'a Path),
    Equation {
        equation: &'a Path,
        seed: Option<&'a Path>,
    },
}

struct LoadedSource {
    name: String,
    source: SeriesSource,
    equation_check: Option<(christol_core::series::AlgebraicEquation, Vec<FieldElement>)>,
}

fn load_source(
    inputs: &mut Inputs,
    spec: &SourceSpec,
    index: usize,
    opts: &Options,
) -> Res<LoadedSource> {
    let suffix = if index == 0 {
        String::new()
    } else {
        format!("_{}", index)
    };
    match spec {
        SourceSpec::Dfao(path) => {
            let (m, alphabet) = load_machine(inputs, &format!("dfao{}", suffix), path)?;
            let m = series_machine(m, alphabet)?;
            Ok(LoadedSource {
                name: file_name(path),
                source: SeriesSource::Dfao(m),
                equation_check: None,
            })
        }
        SourceSpec::Equation { equation, seed } => {
            let eq: EquationJson = inputs.json(&format!("equation{}", suffix), equation)?;
            let eq = eq.equation()?;
            let seed = match seed {
                Some(path) => {
                    let s: SeriesJson = inputs.json(&format!("seed{}", suffix), path)?;
                    let s = s.series()?;
                    if s.field() != eq.field() {
                        return Err(CliError::input(
                            "seed and equation live in different fields",
                        ));
                    }
                    seed_coefficients(&s)?
                }
                None => Vec::new(),
            };
            let precision = opts.precision.unwrap_or(DEFAULT_PRECISION);
            let source = SeriesSource::Equation {
                equation: eq.clone(),
                seed: seed.clone(),
                precision,
                depth: DEFAULT_KERNEL_DEPTH,
            };
            Ok(LoadedSource {
                name: file_name(equation),
                source,
                equation_check: Some((eq, seed)),
            })
        }
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Coefficients `f_0, ..., f_{k-1}` of a seed known below `k`.
fn seed_coefficients(s: &GenSeries) -> Res<Vec<FieldElement>> {
    let k = match s.precision() {
        Some(n) if n.is_integer() && !n.is_negative() => n.to_integer() as u64,
        _ => return Err(CliError::input("a seed needs an integer precision")),
    };
    if s.terms().keys().any(|e| !e.is_integer() || e.is_negative()) {
        return Err(CliError::input("a seed has nonnegative integer exponents"));
    }
    Ok((0..k)
        .map(|i| s.coeff(&Q::from_integer(i as i128)))
        .collect())
}

fn classify_one(src: &LoadedSource, opts: &Options) -> Res<(Value, bool, Option<Certificate>)> {
    let precision = opts.precision.unwrap_or(DEFAULT_PRECISION);
    let (class, empirical) = classify_series(&src.source, opts.state_cap, opts.component_cap)?;
    let mut checks = Vec::new();
    let mut verified = true;
    if let Some((eq, seed)) = &src.equation_check {
        let f = equation_to_coeffs(eq, seed, precision)?;
        let r = verify_algebraic(&f, eq)?;
        let ok = r.vanishes_below(precision);
        verified &= ok;
        checks.push(json!({
            "check": "verify_algebraic",
            "precision": precision,
            "residual_order_at_least": r.order_at_least(),
            "passed": ok,
        }));
    }
    let mut out = Map::new();
    out.insert("input".into(), json!(src.name));
    out.insert(
        "empirical".into(),
        match empirical {
            Some(e) => json!({ "precision": e.precision, "depth": e.depth }),
            None => Value::Null,
        },
    );
    let mut certificate = None;
    match class {
        SeriesClassification::Sparse {
            components,
            degree,
            certificate: cert,
        } => {
            out.insert("verdict".into(), json!("sparse"));
            out.insert("degree".into(), json!(degree));
            let comps: Vec<Value> = components
                .iter()
                .map(|c| {
                    json!({
                        "coeff": element_json(c.coeff),
                        "form": form_json(&c.form),
                        "closed_form": closed_form_json(&c.closed_form),
                    })
                })
                .collect();
            out.insert("components".into(), Value::Array(comps));
            out.insert("certificate_steps".into(), json!(cert.len()));
            let (machine, _) = src.source.machine(opts.state_cap)?;
            let target = dfao_to_series(&machine, precision)?;
            let window = parse_rational(DEFAULT_WINDOW)?;
            let v = verify_certificate(&cert, &target, &precision, &window)?;
            let ok = v.matches && v.complete;
            verified &= ok;
            checks.push(json!({
                "check": "certificate replay against the coefficient machine",
                "precision": precision,
                "mismatch": v.mismatch,
                "complete": v.complete,
                "passed": ok,
            }));
            certificate = Some(cert);
        }
        SeriesClassification::NonSparse { witness, alpha } => {
            out.insert("verdict".into(), json!("non-sparse"));
            out.insert(
                "witness".into(),
                json!({ "u": witness.u, "a": witness.a, "b": witness.b, "v": witness.v, "beta": witness.beta() }),
            );
            out.insert("growth_exponent".into(), json!(alpha));
        }
    }
    out.insert("checks".into(), Value::Array(checks));
    Ok((Value::Object(out), verified, certificate))
}

fn pool(jobs: usize) -> Res<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {}", e)))
}

pub fn classify(specs: &[SourceSpec], opts: &Options) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let sources = specs
        .iter()
        .enumerate()
        .map(|(i, s)| load_source(&mut inputs, s, i, opts))
        .collect::<Res<Vec<_>>>()?;
    let results: Vec<Res<(Value, bool, Option<Certificate>)>> =
        pool(opts.jobs)?.install(|| sources.par_iter().map(|s| classify_one(s, opts)).collect());
    let mut reports = Vec::new();
    let mut verified = true;
    for r in results {
        let (v, ok, _) = r?;
        verified &= ok;
        reports.push(v);
    }
    let body = if reports.len() == 1 {
        reports.pop().expect("one report")
    } else {
        json!({ "results": reports })
    };
    Ok(Outcome {
        report: report("classify", inputs, body),
        verified,
    })
}

pub fn certify(
    spec: Option<SourceSpec>,
    form: Option<(&str, u32, u64)>,
    opts: &Options,
) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let (cert, body) = match (spec, form) {
        (Some(spec), None) => {
            let src = load_source(&mut inputs, &spec, 0, opts)?;
            let (v, _, cert) = classify_one(&src, opts)?;
            let cert = cert.ok_or_else(|| {
                CliError::input("the series is not sparse; no certificate exists")
            })?;
            (
                cert,
                json!({ "verdict": v["verdict"], "components": v["components"] }),
            )
        }
        (None, Some((text, p, coeff))) => {
            let f = parse_form(text, p)?;
            let field = GaloisField::prime(p).map_err(CliError::from)?;
            let c = field.from_index(coeff).map_err(CliError::from)?;
            let cert = certify_sparse(&f, c)?;
            (
                cert,
                json!({ "form": form_json(&f), "closed_form": closed_form_json(&closed_form(&f)) }),
            )
        }
        _ => {
            return Err(CliError::input(
                "give exactly one of --dfao, --equation or --form",
            ))
        }
    };
    let mut body = body;
    body["certificate"] = serde_json::to_value(CertificateJson::of(&cert)).expect("serializable");
    Ok(Outcome::ok(report("certify", inputs, body)))
}

pub fn verify_cert(
    cert: &Path,
    dfao: Option<&Path>,
    series: Option<&Path>,
    window: &str,
    opts: &Options,
) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let raw: Value = inputs.json("certificate", cert)?;
    let cj: CertificateJson =
        serde_json::from_value(raw.get("certificate").cloned().unwrap_or(raw))
            .map_err(|e| CliError::input(format!("certificate: {}", e)))?;
    let c = cj.certificate()?;
    let w = parse_rational(window)?;
    let body = match (dfao, series) {
        (Some(path), None) => {
            let (m, alphabet) = load_machine(&mut inputs, "dfao", path)?;
            let m = series_machine(m, alphabet)?;
            let n = opts.precision.unwrap_or(DEFAULT_PRECISION);
            let target = dfao_to_series(&m, n)?;
            let v = verify_certificate(&c, &target, &n, &w)?;
            json!({
                "precision": n,
                "matches": v.matches,
                "mismatch": v.mismatch,
                "complete": v.complete,
                "replay": SeriesJson::of(&v.replay),
            })
        }
        (None, Some(path)) => {
            let s: SeriesJson = inputs.json("series", path)?;
            let target = s.series()?;
            let n = match opts.precision {
                Some(n) => Q::from_integer(n as i128),
                None => *target
                    .precision()
                    .ok_or_else(|| CliError::input("target series needs a precision"))?,
            };
            let v = verify_certificate(&c, &target, &n, &w)?;
            json!({
                "precision": rational(&n),
                "matches": v.matches,
                "mismatch": v.mismatch.map(|e| rational(&e)),
                "complete": v.complete,
                "replay": SeriesJson::of(&v.replay),
            })
        }
        _ => {
            return Err(CliError::input(
                "give exactly one of --dfao or --series as the target",
            ))
        }
    };
    let verified = body["matches"] == json!(true);
    let mut body = body;
    body["window"] = json!(rational(&w));
    body["check"] = json!("replay compared with the target on the replay's known region");
    Ok(Outcome {
        report: report("verify-cert", inputs, body),
        verified,
    })
}

// ---------- decompose ----------

pub fn decompose_cmd(dfao: &Path, opts: &Options) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let (m, alphabet) = load_machine(&mut inputs, "dfao", dfao)?;
    let a = acceptor_of(m);
    let base = alphabet.digits;
    let verdict = is_sparse_in_base(&a, base, opts.component_cap)?;
    let dich = check_dichotomy(&a, &verdict, 20);
    let mut checks = vec![json!({ "check": "census bound for n <= 20", "passed": dich.holds() })];
    let mut verified = dich.holds();
    let body = match &verdict {
        SparsenessVerdict::Sparse { components, degree } => {
            let forms = decompose(&a, base, opts.component_cap)?;
            let mut union = Acceptor::empty(a.alphabet());
            for f in &forms {
                union = union.union(&f.acceptor(a.alphabet())?)?;
            }
            let same = union.equivalent(&a)?;
            verified &= same;
            checks.push(
                json!({ "check": "union of components equals the language", "passed": same }),
            );
            let comps: Vec<Value> = components
                .iter()
                .map(|f| json!({ "form": form_json(f), "closed_form": closed_form_json(&closed_form(f)) }))
                .collect();
            json!({ "verdict": "sparse", "degree": degree, "components": comps })
        }
        SparsenessVerdict::NonSparse { witness, alpha } => json!({
            "verdict": "non-sparse",
            "witness": { "u": witness.u, "a": witness.a, "b": witness.b, "v": witness.v, "beta": witness.beta() },
            "growth_exponent": alpha,
        }),
    };
    let mut body = body;
    body["base"] = json!(base);
    body["checks"] = Value::Array(checks);
    Ok(Outcome {
        report: report("decompose", inputs, body),
        verified,
    })
}

// ---------- spset ----------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Show,
    Union,
    Sum,
    Split,
    SpreadUp,
    SpreadDown,
}

pub struct SetArgs<'a> {
    pub op: SetOp,
    pub a: &'a Path,
    pub b: Option<&'a Path>,
    pub at: Option<u64>,
    pub bound: u64,
    pub frac: usize,
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac_digits(x: &BigRational, p: u32) -> usize {
    let mut k = 0;
    let mut d = x.denom().clone();
    let pb = BigInt::from(p);
    while d > BigInt::from(1) {
        d /= &pb;
        k += 1;
    }
    k
}

/// Members of a set below `bound` with at most `frac` fractional digits,
/// enumerated from the pumped words of its components.
fn enumerate_set(s: &SpSet, bound: &BigRational, frac: usize) -> Res<BTreeSet<BigRational>> {
    let p = s.p();
    let int_len = encode_nat(bound.floor().to_integer().try_into().unwrap_or(u64::MAX), p).len();
    let mut out = BTreeSet::new();
    for f in s.components()? {
        for (_, w) in f.words_up_to(int_len + 1 + frac) {
            if validate_expansion(&w, p).is_err() {
                continue;
            }
            let x = positional_value(&w, p)?;
            if &x <= bound && frac_digits(&x, p) <= frac {
                out.insert(x);
            }
        }
    }
    Ok(out)
}

fn window_json(elems: &[BigRational], bound: u64, frac: usize) -> Value {
    const SHOWN: usize = 256;
    json!({
        "bound": bound,
        "max_frac_digits": frac,
        "count": elems.len(),
        "elements": elems.iter().take(SHOWN).map(|x| x.to_string()).collect::<Vec<_>>(),
        "truncated": elems.len() > SHOWN,
    })
}

fn set_json(s: &SpSet) -> Value {
    serde_json::to_value(SpSetJson::of(s)).expect("serializable")
}

pub fn spset(args: &SetArgs, opts: &Options) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let a: SpSetJson = inputs.json("a", args.a)?;
    let a = a.set(opts.component_cap)?;
    let p = a.p();
    let bound = big(args.bound);
    let guard = args.frac;
    let frac = args.frac;
    let window =
        |s: &SpSet| -> BTreeSet<BigRational> { s.window(&bound, frac).into_iter().collect() };
    let need_at = || {
        args.at
            .ok_or_else(|| CliError::input("this operation needs --at"))
    };
    let (results, check, passed): (Vec<(&str, SpSet)>, &str, bool) = match args.op {
        SetOp::Show => {
            let want: BTreeSet<BigRational> = enumerate_set(&a, &bound, frac)?;
            (
                vec![("result", a.clone())],
                "window equals component enumeration",
                window(&a) == want,
            )
        }
        SetOp::Union | SetOp::Sum => {
            let path = args
                .b
                .ok_or_else(|| CliError::input("this operation needs --b"))?;
            let b: SpSetJson = inputs.json("b", path)?;
            let b = b.set(opts.component_cap)?;
            let wa = enumerate_set(&a, &bound, frac + guard)?;
            let wb = enumerate_set(&b, &bound, frac + guard)?;
            if args.op == SetOp::Union {
                let r = a.union(&b)?;
                let want: BTreeSet<BigRational> = wa
                    .union(&wb)
                    .filter(|x| frac_digits(x, p) <= frac)
                    .cloned()
                    .collect();
                let ok = window(&r) == want;
                (
                    vec![("result", r)],
                    "window equals the union of enumerated inputs",
                    ok,
                )
            } else {
                let r = a.minkowski_sum(&b)?;
                let mut want = BTreeSet::new();
                for x in &wa {
                    for y in &wb {
                        let z = x + y;
                        if z <= bound && frac_digits(&z, p) <= frac {
                            want.insert(z);
                        }
                    }
                }
                let ok = window(&r) == want;
                (
                    vec![("result", r)],
                    "window equals pairwise sums of enumerated inputs",
                    ok,
                )
            }
        }
        SetOp::Split => {
            let at = need_at()?;
            let (lo, hi) = a.split(&BigUint::from(at))?;
            let all = window(&a);
            let b = big(at);
            let ok = window(&lo) == all.iter().filter(|x| **x < b).cloned().collect()
                && window(&hi) == all.iter().filter(|x| **x > b).cloned().collect();
            (
                vec![("below", lo), ("above", hi)],
                "parts are the window restricted to each side",
                ok,
            )
        }
        SetOp::SpreadUp | SetOp::SpreadDown => {
            let at = need_at()?;
            let up = args.op == SetOp::SpreadUp;
            let r = if up {
                a.spread_up(&BigUint::from(at))?
            } else {
                a.spread_down(&BigUint::from(at))?
            };
            let ok = check_spread(&a, &r, at, up, &bound, frac, guard)?;
            (
                vec![("result", r)],
                "window equals the union of images for n <= 8, each element an image",
                ok,
            )
        }
    };
    let mut body = Map::new();
    for (name, s) in &results {
        let elems: Vec<BigRational> = s.window(&bound, frac);
        body.insert((*name).into(), set_json(s));
        body.insert(
            format!("{}_window", name),
            window_json(&elems, args.bound, frac),
        );
    }
    body.insert(
        "checks".into(),
        json!([{ "check": check, "passed": passed }]),
    );
    let op = match args.op {
        SetOp::Show => "show",
        SetOp::Union => "union",
        SetOp::Sum => "sum",
        SetOp::Split => "split",
        SetOp::SpreadUp => "spread-up",
        SetOp::SpreadDown => "spread-down",
    };
    body.insert("operation".into(), json!(op));
    Ok(Outcome {
        report: report("spset", inputs, Value::Object(body)),
        verified: passed,
    })
}

fn check_spread(
    input: &SpSet,
    out: &SpSet,
    at: u64,
    up: bool,
    bound: &BigRational,
    frac: usize,
    guard: usize,
) -> Res<bool> {
    let p = input.p();
    let b = big(at);
    let pr = BigRational::from_integer(BigInt::from(p));
    let got: BTreeSet<BigRational> = out.window(bound, frac).into_iter().collect();
    for x in enumerate_set(input, bound, frac + guard)? {
        for n in 0..=SPREAD_IMAGES {
            if !up && n == 0 {
                continue;
            }
            let pn = pr.pow(n as i32);
            let y = if up {
                (&x - &b) * &pn + &b
            } else {
                (&x - &b) / &pn + &b
            };
            if &y <= bound && frac_digits(&y, p) <= frac && !got.contains(&y) {
                return Ok(false);
            }
        }
    }
    for y in &got {
        let mut found = false;
        for n in 0..64i32 {
            if !up && n == 0 {
                continue;
            }
            let pn = pr.pow(n);
            let x = if up {
                (y - &b) / &pn + &b
            } else {
                (y - &b) * &pn + &b
            };
            if x.is_negative() {
                break;
            }
            if input.contains_ratio(&x) {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------- Artin-Schreier ----------

fn series_limit(f: &GenSeries, opts: &Options) -> Q {
    match opts.precision {
        Some(n) => Q::from_integer(n as i128),
        None => f
            .precision()
            .copied()
            .unwrap_or_else(|| Q::from_integer(DEFAULT_PRECISION as i128)),
    }
}

pub fn as_solve(series: &Path, window: &str, opts: &Options) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let s: SeriesJson = inputs.json("series", series)?;
    let f = s.series()?;
    let limit = series_limit(&f, opts);
    let w = parse_rational(window)?;
    let sols = solve_artin_schreier(&f, &limit, &w)?;
    let mut verified = true;
    let mut solutions = Vec::new();
    for g in &sols {
        let fe = f.embed(g.field())?;
        let r = g.artin_schreier_residual(&fe)?;
        let ok = r.order().is_none();
        verified &= ok;
        solutions.push(json!({
            "series": SeriesJson::of(g),
            "checks": [{
                "check": "G^p - G + F vanishes on the known region",
                "first_nonzero": r.order().map(|e| rational(&e)),
                "passed": ok,
            }],
        }));
    }
    let body = json!({ "limit": rational(&limit), "window": rational(&w), "solutions": solutions });
    Ok(Outcome {
        report: report("as-solve", inputs, body),
        verified,
    })
}

pub fn gap_sum_cmd(series: &Path, d: u32, window: &str, opts: &Options) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let s: SeriesJson = inputs.json("series", series)?;
    let f = s.series()?;
    let zero = Q::zero();
    let positive = f.terms().keys().all(|e| *e > zero);
    let negative = f.terms().keys().all(|e| *e < zero);
    let w = parse_rational(window)?;
    let (g, branch) = if positive {
        (gap_sum(&f, d, &series_limit(&f, opts))?, "positive")
    } else if negative {
        (gap_sum_neg(&f, d, &w)?, "negative")
    } else {
        return Err(CliError::input(
            "gap sums need a support entirely above or entirely below zero",
        ));
    };
    let body = json!({
        "d": d,
        "branch": branch,
        "result": SeriesJson::of(&g),
        "checks": [{ "check": "direct route equals Moore route", "passed": true }],
    });
    Ok(Outcome::ok(report("gap-sum", inputs, body)))
}

// ---------- quasi-eval ----------

pub fn quasi_eval_cmd(dfao: &Path, a: &str, b: &str, alphas: &[String]) -> Res<Outcome> {
    let mut inputs = Inputs::default();
    let (m, alphabet) = load_machine(&mut inputs, "dfao", dfao)?;
    let Machine::Field(m) = m else {
        return Err(CliError::input(
            "quasi-eval needs a machine with field outputs",
        ));
    };
    if !alphabet.radix {
        return Err(CliError::input(
            "quasi-eval reads valid expansions: the alphabet needs \"radix\"",
        ));
    }
    let qa = QuasiAutomatic::new(parse_big_rational(a)?, parse_big_rational(b)?, m)?;
    let values = alphas
        .iter()
        .map(|s| {
            let x = parse_big_rational(s)?;
            Ok(json!({ "alpha": x.to_string(), "coeff": element_json(quasi_eval(&qa, &x)) }))
        })
        .collect::<Res<Vec<_>>>()?;
    let body = json!({ "a": qa.a().to_string(), "b": qa.b().to_string(), "values": values });
    Ok(Outcome::ok(report("quasi-eval", inputs, body)))
}
