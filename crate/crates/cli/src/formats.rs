//! JSON file formats for automata, series, equations, sets and certificates.

use christol_core::christol::{Certificate, Step};
use christol_core::digits::radix;
use christol_core::field::{FieldElement, GaloisField};
use christol_core::series::{AlgebraicEquation, Exponent, GenSeries, Series, Q};
use christol_core::sparse::{rational_string, ClosedForm, SimpleSparseForm};
use christol_core::spset::SpSet;
use christol_core::{Acceptor, Dfao, Direction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

type Res<T> = Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::input(msg)
}

fn core(e: christol_core::Error) -> CliError {
    CliError::from(e)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldJson {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
}

fn one() -> u32 {
    1
}

impl FieldJson {
    pub fn of(f: GaloisField) -> Self {
        FieldJson {
            p: f.characteristic(),
            m: f.degree(),
        }
    }

    pub fn field(&self) -> Res<GaloisField> {
        GaloisField::new(self.p, self.m).map_err(core)
    }
}

/// A field element: its index (digits read in base `p`) or its digit list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ElementJson {
    Index(u64),
    Digits(Vec<u32>),
    Full { p: u32, m: u32, digits: Vec<u32> },
}

impl ElementJson {
    pub fn element(&self, field: GaloisField) -> Res<FieldElement> {
        match self {
            ElementJson::Index(n) => field.from_index(*n).map_err(core),
            ElementJson::Digits(d) => field.from_digits(d).map_err(core),
            ElementJson::Full { p, m, digits } => {
                if *p != field.characteristic() || *m != field.degree() {
                    return Err(input("element lives in a different field"));
                }
                field.from_digits(digits).map_err(core)
            }
        }
    }
}

pub fn element_json(x: FieldElement) -> serde_json::Value {
    serde_json::json!({ "p": x.characteristic(), "m": x.degree(), "digits": x.digits() })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SymbolJson {
    Digit(u32),
    Named(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OutputJson {
    Bool(bool),
    Element(ElementJson),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AutomatonJson {
    pub alphabet: Vec<SymbolJson>,
    pub states: usize,
    pub initial: usize,
    pub transitions: Vec<Vec<usize>>,
    pub outputs: Vec<OutputJson>,
    pub direction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
}

/// A loaded automaton: an acceptor or a machine with field outputs.
#[derive(Clone, Debug)]
pub enum Machine {
    Acceptor(Acceptor),
    Field(Dfao<FieldElement>),
}

/// Digit alphabet `{0..k-1}`, optionally followed by the radix symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub digits: u32,
    pub radix: bool,
}

impl Alphabet {
    pub fn size(&self) -> usize {
        self.digits as usize + self.radix as usize
    }

    fn json(&self) -> Vec<SymbolJson> {
        let mut v: Vec<SymbolJson> = (0..self.digits).map(SymbolJson::Digit).collect();
        if self.radix {
            v.push(SymbolJson::Named("radix".into()));
        }
        v
    }

    /// Reads digits `0-9a-z` and `.` for the radix point.
    pub fn parse_word(&self, text: &str) -> Res<Vec<u8>> {
        text.chars()
            .map(|ch| {
                if ch == '.' {
                    if self.radix {
                        Ok(radix(self.digits))
                    } else {
                        Err(input("radix point in a word over a digit alphabet"))
                    }
                } else {
                    match ch.to_digit(36) {
                        Some(d) if d < self.digits => Ok(d as u8),
                        _ => Err(input(format!("symbol '{}' outside the alphabet", ch))),
                    }
                }
            })
            .collect()
    }
}

fn direction_of(s: &str) -> Res<Direction> {
    match s {
        "lsd" => Ok(Direction::Lsd),
        "msd" => Ok(Direction::Msd),
        _ => Err(input(format!(
            "direction must be \"lsd\" or \"msd\", got {:?}",
            s
        ))),
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Lsd => "lsd",
        Direction::Msd => "msd",
    }
}

impl AutomatonJson {
    pub fn alphabet(&self) -> Res<Alphabet> {
        let mut digits = 0u32;
        let mut radix = false;
        for (i, s) in self.alphabet.iter().enumerate() {
            match s {
                SymbolJson::Digit(d) if !radix && *d == i as u32 => digits += 1,
                SymbolJson::Named(n) if n == "radix" && !radix && i + 1 == self.alphabet.len() => {
                    radix = true
                }
                _ => {
                    return Err(input(
                        "alphabet must be [0, 1, ..., k-1] optionally followed by \"radix\"",
                    ))
                }
            }
        }
        if digits == 0 {
            return Err(input("alphabet has no digits"));
        }
        Ok(Alphabet { digits, radix })
    }

    pub fn load(&self) -> Res<(Machine, Alphabet)> {
        let alphabet = self.alphabet()?;
        if self.states != self.transitions.len() || self.states != self.outputs.len() {
            return Err(input("states, transitions and outputs disagree in length"));
        }
        let direction = direction_of(&self.direction)?;
        let bools: Option<Vec<bool>> = self
            .outputs
            .iter()
            .map(|o| {
                if let OutputJson::Bool(b) = o {
                    Some(*b)
                } else {
                    None
                }
            })
            .collect();
        let machine = match bools {
            Some(out) => Machine::Acceptor(
                Dfao::new(
                    alphabet.size(),
                    self.transitions.clone(),
                    self.initial,
                    out,
                    direction,
                )
                .map_err(core)?,
            ),
            None => {
                let field = self.output_field(alphabet)?;
                let out = self
                    .outputs
                    .iter()
                    .map(|o| match o {
                        OutputJson::Element(e) => e.element(field),
                        OutputJson::Bool(_) => {
                            Err(input("outputs mix booleans and field elements"))
                        }
                    })
                    .collect::<Res<Vec<_>>>()?;
                Machine::Field(
                    Dfao::new(
                        alphabet.size(),
                        self.transitions.clone(),
                        self.initial,
                        out,
                        direction,
                    )
                    .map_err(core)?,
                )
            }
        };
        Ok((machine, alphabet))
    }

    fn output_field(&self, alphabet: Alphabet) -> Res<GaloisField> {
        if let Some(f) = &self.field {
            return f.field();
        }
        for o in &self.outputs {
            if let OutputJson::Element(ElementJson::Full { p, m, .. }) = o {
                return GaloisField::new(*p, *m).map_err(core);
            }
        }
        GaloisField::prime(alphabet.digits)
            .map_err(|_| input("outputs need a \"field\" when the digit count is not prime"))
    }

    pub fn from_acceptor(a: &Acceptor, alphabet: Alphabet) -> Self {
        AutomatonJson {
            alphabet: alphabet.json(),
            states: a.num_states(),
            initial: a.initial(),
            transitions: a.transitions(),
            outputs: a.outputs().iter().map(|&b| OutputJson::Bool(b)).collect(),
            direction: direction_name(a.direction()).into(),
            field: None,
        }
    }

    pub fn from_field_machine(m: &Dfao<FieldElement>, alphabet: Alphabet) -> Self {
        let field = m.outputs()[0].field();
        AutomatonJson {
            alphabet: alphabet.json(),
            states: m.num_states(),
            initial: m.initial(),
            transitions: m.transitions(),
            outputs: m
                .outputs()
                .iter()
                .map(|x| OutputJson::Element(ElementJson::Index(x.index())))
                .collect(),
            direction: direction_name(m.direction()).into(),
            field: Some(FieldJson::of(field)),
        }
    }
}

/// An exponent: an integer or `[num, den]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ExponentJson {
    Int(i64),
    Ratio([i64; 2]),
}

impl ExponentJson {
    pub fn q(&self) -> Res<Q> {
        match self {
            ExponentJson::Int(n) => Ok(Q::from_integer(*n as i128)),
            ExponentJson::Ratio([n, d]) => {
                if *d == 0 {
                    Err(input("zero denominator"))
                } else {
                    Ok(Q::new(*n as i128, *d as i128))
                }
            }
        }
    }

    /// Exponents outside the `i64` range are clamped; they only arise as
    /// far-away precision bounds.
    pub fn of(q: &Q) -> Self {
        let clamp = |x: i128| x.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
        if q.is_integer() {
            ExponentJson::Int(clamp(*q.numer()))
        } else {
            ExponentJson::Ratio([clamp(*q.numer()), clamp(*q.denom())])
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default)]
    pub precision: Option<ExponentJson>,
    /// `[exponent_num, exponent_den, coeff_digits]`.
    pub terms: Vec<(i128, i128, Vec<u32>)>,
    /// Unknown intervals `[lo, hi)` inside the known region.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gaps: Vec<[ExponentJson; 2]>,
}

impl SeriesJson {
    pub fn field(&self) -> Res<GaloisField> {
        GaloisField::new(self.p, self.m).map_err(core)
    }

    pub fn series(&self) -> Res<GenSeries> {
        if !self.gaps.is_empty() {
            return Err(input("input series cannot carry unknown gaps"));
        }
        let field = self.field()?;
        let terms = self
            .terms
            .iter()
            .map(|(n, d, digits)| {
                if *d <= 0 {
                    return Err(input("exponent denominators must be positive"));
                }
                Ok((Q::new(*n, *d), field.from_digits(digits).map_err(core)?))
            })
            .collect::<Res<Vec<_>>>()?;
        let precision = self.precision.as_ref().map(|x| x.q()).transpose()?;
        Series::from_terms(field, terms, precision).map_err(core)
    }

    pub fn of<E: Exponent>(s: &Series<E>) -> Self {
        let field = s.field();
        SeriesJson {
            p: field.characteristic(),
            m: field.degree(),
            precision: s.precision().map(|n| ExponentJson::of(&n.to_q())),
            terms: s
                .terms()
                .iter()
                .map(|(e, c)| {
                    let q = e.to_q();
                    (*q.numer(), *q.denom(), c.digits())
                })
                .collect(),
            gaps: s
                .gaps()
                .iter()
                .map(|(a, b)| [ExponentJson::of(&a.to_q()), ExponentJson::of(&b.to_q())])
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EquationJson {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    /// `[i, j, coeff]`: the term `coeff t^i X^j`.
    pub terms: Vec<(u64, u32, ElementJson)>,
}

impl EquationJson {
    pub fn equation(&self) -> Res<AlgebraicEquation> {
        let field = GaloisField::new(self.p, self.m).map_err(core)?;
        let terms = self
            .terms
            .iter()
            .map(|(i, j, c)| Ok((*i, *j, c.element(field)?)))
            .collect::<Res<Vec<_>>>()?;
        AlgebraicEquation::new(field, terms).map_err(core)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlagsJson {
    pub sparse: String,
    pub well_ordered: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpSetJson {
    pub p: u32,
    pub acceptor: AutomatonJson,
    /// Recomputed on load; present in output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsJson>,
}

impl SpSetJson {
    pub fn set(&self, component_cap: usize) -> Res<SpSet> {
        let (m, alphabet) = self.acceptor.load()?;
        let Machine::Acceptor(a) = m else {
            return Err(input("a set needs a boolean acceptor"));
        };
        if alphabet.digits != self.p || !alphabet.radix {
            return Err(input("a set acceptor reads {0..p-1, radix}"));
        }
        SpSet::with_cap(self.p, &a, component_cap).map_err(core)
    }

    pub fn of(s: &SpSet) -> Self {
        let alphabet = Alphabet {
            digits: s.p(),
            radix: true,
        };
        SpSetJson {
            p: s.p(),
            acceptor: AutomatonJson::from_acceptor(s.acceptor(), alphabet),
            flags: Some(FlagsJson {
                sparse: s.sparse().as_str().into(),
                well_ordered: s.well_ordered().as_str().into(),
            }),
        }
    }
}

pub fn rational(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Res<Q> {
    s.trim()
        .parse::<Q>()
        .map_err(|_| input(format!("not a rational number: {:?}", s)))
}

pub fn parse_big_rational(s: &str) -> Res<num_rational::BigRational> {
    s.trim()
        .parse()
        .map_err(|_| input(format!("not a rational number: {:?}", s)))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepJson {
    Seed { coeff: Vec<u32>, exponent: String },
    ScaleVar { alpha: Vec<u32> },
    SubstPower { c: String, d: String },
    AsPower,
    AsPowerNeg,
    AsSubst,
    GapSum { d: u32 },
    GapSumNeg { d: u32 },
    FrobTwist { j: u32 },
    Add { with: usize },
    Mul { with: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateJson {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    pub steps: Vec<StepJson>,
}

impl CertificateJson {
    pub fn of(c: &Certificate) -> Self {
        let field = c.field();
        let steps = c
            .steps()
            .iter()
            .map(|s| match s {
                Step::Seed { coeff, exponent } => StepJson::Seed {
                    coeff: coeff.digits(),
                    exponent: rational(exponent),
                },
                Step::ScaleVar { alpha } => StepJson::ScaleVar {
                    alpha: alpha.digits(),
                },
                Step::SubstPower { c, d } => StepJson::SubstPower {
                    c: rational(c),
                    d: rational(d),
                },
                Step::AsPower => StepJson::AsPower,
                Step::AsPowerNeg => StepJson::AsPowerNeg,
                Step::AsSubst => StepJson::AsSubst,
                Step::GapSum { d } => StepJson::GapSum { d: *d },
                Step::GapSumNeg { d } => StepJson::GapSumNeg { d: *d },
                Step::FrobTwist { j } => StepJson::FrobTwist { j: *j },
                Step::Add { with } => StepJson::Add { with: *with },
                Step::Mul { with } => StepJson::Mul { with: *with },
            })
            .collect();
        CertificateJson {
            p: field.characteristic(),
            m: field.degree(),
            steps,
        }
    }

    pub fn certificate(&self) -> Res<Certificate> {
        let field = GaloisField::new(self.p, self.m).map_err(core)?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(match s {
                    StepJson::Seed { coeff, exponent } => Step::Seed {
                        coeff: field.from_digits(coeff).map_err(core)?,
                        exponent: parse_rational(exponent)?,
                    },
                    StepJson::ScaleVar { alpha } => Step::ScaleVar {
                        alpha: field.from_digits(alpha).map_err(core)?,
                    },
                    StepJson::SubstPower { c, d } => Step::SubstPower {
                        c: parse_rational(c)?,
                        d: parse_rational(d)?,
                    },
                    StepJson::AsPower => Step::AsPower,
                    StepJson::AsPowerNeg => Step::AsPowerNeg,
                    StepJson::AsSubst => Step::AsSubst,
                    StepJson::GapSum { d } => Step::GapSum { d: *d },
                    StepJson::GapSumNeg { d } => Step::GapSumNeg { d: *d },
                    StepJson::FrobTwist { j } => Step::FrobTwist { j: *j },
                    StepJson::Add { with } => Step::Add { with: *with },
                    StepJson::Mul { with } => Step::Mul { with: *with },
                })
            })
            .collect::<Res<Vec<_>>>()?;
        Certificate::from_steps(field, steps).map_err(core)
    }
}

/// Parses the text form of a simple sparse form, e.g. `10(0)*01.(10)*1`.
pub fn parse_form(text: &str, base: u32) -> Res<SimpleSparseForm> {
    let alphabet = Alphabet {
        digits: base,
        radix: true,
    };
    let mut v: Vec<Vec<u8>> = Vec::new();
    let mut w: Vec<Vec<u8>> = Vec::new();
    let mut rest = text.trim();
    let mut current = String::new();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('(') {
            let close = after
                .find(")*")
                .ok_or_else(|| input("unclosed cycle: expected \")*\""))?;
            v.push(alphabet.parse_word(&current)?);
            current.clear();
            w.push(alphabet.parse_word(&after[..close])?);
            rest = &after[close + 2..];
        } else {
            let ch = rest.chars().next().expect("nonempty");
            current.push(ch);
            rest = &rest[ch.len_utf8()..];
        }
    }
    v.push(alphabet.parse_word(&current)?);
    SimpleSparseForm::new(base, v, w).map_err(core)
}

pub fn word_json(w: &[u8], base: u32) -> Vec<serde_json::Value> {
    w.iter()
        .map(|&s| {
            if s == radix(base) {
                serde_json::json!("radix")
            } else {
                serde_json::json!(s)
            }
        })
        .collect()
}

pub fn form_json(f: &SimpleSparseForm) -> serde_json::Value {
    let b = f.base();
    serde_json::json!({
        "text": f.to_string(),
        "v": f.fixed_words().iter().map(|x| word_json(x, b)).collect::<Vec<_>>(),
        "w": f.cycle_words().iter().map(|x| word_json(x, b)).collect::<Vec<_>>(),
    })
}

pub fn closed_form_json(cf: &ClosedForm) -> serde_json::Value {
    serde_json::json!({
        "base": cf.base(),
        "periods": cf.periods(),
        "pre_cycles": cf.pre_cycles(),
        "c": cf.c().iter().map(rational_string).collect::<Vec<_>>(),
        "d": cf.d().map(|d| d.iter().map(rational_string).collect::<Vec<_>>()),
        "well_ordered": cf.is_well_ordered(),
    })
}
