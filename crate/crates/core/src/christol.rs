//! From automata to series and back: coefficient series of DFAOs, support
//! languages, empirical `p`-kernel automata, and replayable certificates
//! building sparse series out of monomials with the closure operations.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::automaton::{Acceptor, Dfao, Direction};
use crate::digits::{encode_nat, encode_sp, SpRational};
use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::series::{
    as_power_neg, as_power_pos, as_subst, equation_to_coeffs, gap_sum, gap_sum_neg,
    AlgebraicEquation, Exponent, Series, TruncatedSeries, Q,
};
use crate::sparse::{
    closed_form, decompose, is_sparse_in_base, ClosedForm, PumpWitness, SimpleSparseForm,
    SparsenessVerdict,
};

/// `Σ_{n<N} M(n) t^n`, reading `n` in base `p = |Σ|`.
pub fn dfao_to_series(m: &Dfao<FieldElement>, n: u64) -> Result<TruncatedSeries> {
    let field = machine_field(m)?;
    let p = field.characteristic();
    if m.alphabet() != p as usize {
        return Err(Error::AlphabetMismatch);
    }
    let terms = (0..n)
        .map(|i| Ok((i, *m.run(&encode_nat(i, p))?)))
        .collect::<Result<Vec<_>>>()?;
    Series::from_terms(field, terms, Some(n))
}

fn machine_field(m: &Dfao<FieldElement>) -> Result<GaloisField> {
    let field = m.outputs()[0].field();
    if m.outputs().iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch);
    }
    Ok(field)
}

/// Words on which the machine outputs a nonzero value, minimized.
pub fn support_acceptor(m: &Dfao<FieldElement>) -> Acceptor {
    m.map_outputs(|x| !x.is_zero()).minimize()
}

/// Default prefix length used to identify kernel sequences.
pub const DEFAULT_KERNEL_DEPTH: u32 = 32;

/// LSD-first automaton of the `p`-kernel of a finite coefficient stream.
///
/// The kernel sequence `n ↦ f(p^e n + r)` is known on a prefix that shrinks
/// with `e`. Two kernel sequences are identified when they agree on their
/// common known prefix, which must have at least `depth` terms; the result
/// is checked against the whole stream.
pub fn kernel_automaton(
    coeffs: &[FieldElement],
    p: u32,
    depth: u32,
    cap: usize,
) -> Result<Dfao<FieldElement>> {
    let n = coeffs.len() as u64;
    if n == 0 {
        return Err(Error::InvalidArgument("empty coefficient stream"));
    }
    let field = coeffs[0].field();
    let pk = p as u64;
    let known = |e: u32, r: u64| -> u64 {
        let step = pk.pow(e);
        if r >= n {
            0
        } else {
            (n - 1 - r) / step + 1
        }
    };
    let term = |e: u32, r: u64, i: u64| coeffs[(pk.pow(e) * i + r) as usize];
    let mut states: Vec<(u32, u64)> = vec![(0, 0)];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (e, r) = states[i];
        let mut row = Vec::with_capacity(p as usize);
        for a in 0..pk {
            let child = (e + 1, r + a * pk.pow(e));
            let len = known(child.0, child.1);
            if len < depth as u64 || pk.checked_pow(child.0 + 1).is_none() {
                return Err(Error::KernelNotStabilized {
                    states: states.len(),
                    depth,
                });
            }
            let found = states.iter().position(|&(e2, r2)| {
                let common = len.min(known(e2, r2));
                (0..common).all(|j| term(child.0, child.1, j) == term(e2, r2, j))
            });
            let id = match found {
                Some(id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::StateCapExceeded { cap });
                    }
                    states.push(child);
                    states.len() - 1
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states
        .iter()
        .map(|&(_, r)| {
            if r < n {
                coeffs[r as usize]
            } else {
                field.zero()
            }
        })
        .collect();
    let machine = Dfao::new(p as usize, delta, 0, outputs, Direction::Lsd)?.minimize();
    for (i, c) in coeffs.iter().enumerate() {
        if machine.run(&encode_nat(i as u64, p))? != c {
            return Err(Error::KernelMismatch { n: i as u64 });
        }
    }
    Ok(machine)
}

/// Where a series comes from.
#[derive(Clone, Debug)]
pub enum SeriesSource {
    /// Exact: the coefficient machine itself.
    Dfao(Dfao<FieldElement>),
    /// Empirical: coefficients from an equation, automaton from their kernel.
    Equation {
        equation: AlgebraicEquation,
        seed: Vec<FieldElement>,
        precision: u64,
        depth: u32,
    },
}

/// Parameters of an empirically obtained kernel automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Empirical {
    pub precision: u64,
    pub depth: u32,
}

impl SeriesSource {
    /// The coefficient machine, and the empirical parameters when it was guessed.
    pub fn machine(&self, cap: usize) -> Result<(Dfao<FieldElement>, Option<Empirical>)> {
        match self {
            SeriesSource::Dfao(m) => {
                machine_field(m)?;
                Ok((m.clone(), None))
            }
            SeriesSource::Equation {
                equation,
                seed,
                precision,
                depth,
            } => {
                let f = equation_to_coeffs(equation, seed, *precision)?;
                let p = equation.field().characteristic();
                let m = kernel_automaton(&f.dense(*precision), p, *depth, cap)?;
                Ok((
                    m,
                    Some(Empirical {
                        precision: *precision,
                        depth: *depth,
                    }),
                ))
            }
        }
    }
}

/// One simple sparse piece of a support, with the coefficient carried there.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseComponent {
    pub coeff: FieldElement,
    pub form: SimpleSparseForm,
    pub closed_form: ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesClassification {
    Sparse {
        components: Vec<SparseComponent>,
        degree: usize,
        certificate: Certificate,
    },
    NonSparse {
        witness: PumpWitness,
        alpha: f64,
    },
}

impl SeriesClassification {
    pub fn is_sparse(&self) -> bool {
        matches!(self, SeriesClassification::Sparse { .. })
    }
}

/// Sparse or not; sparse series come with their decomposition by
/// coefficient value and a certificate.
pub fn classify_series(
    source: &SeriesSource,
    state_cap: usize,
    component_cap: usize,
) -> Result<(SeriesClassification, Option<Empirical>)> {
    let cap = component_cap;
    let (m, empirical) = source.machine(state_cap)?;
    let field = machine_field(&m)?;
    let p = field.characteristic();
    let canonical = Acceptor::canonical_naturals(p);
    let support = support_acceptor(&m).intersect(&canonical)?;
    let verdict = is_sparse_in_base(&support, p, cap)?;
    let degree = match verdict {
        SparsenessVerdict::NonSparse { witness, alpha } => {
            return Ok((
                SeriesClassification::NonSparse { witness, alpha },
                empirical,
            ))
        }
        SparsenessVerdict::Sparse { degree, .. } => degree,
    };
    let values: BTreeSet<FieldElement> = m
        .outputs()
        .iter()
        .filter(|x| !x.is_zero())
        .copied()
        .collect();
    let mut components = Vec::new();
    let mut certificate = Certificate::new(field);
    for value in values {
        let level = m
            .map_outputs(|x| *x == value)
            .minimize()
            .intersect(&canonical)?;
        for form in decompose(&level, p, cap)? {
            let part = certify_sparse(&form, value)?;
            certificate.add_part(&part)?;
            components.push(SparseComponent {
                coeff: value,
                closed_form: closed_form(&form),
                form,
            });
        }
    }
    Ok((
        SeriesClassification::Sparse {
            components,
            degree,
            certificate,
        },
        empirical,
    ))
}

/// One closure operation. Unary steps act on the value of the previous
/// step; `Add` and `Mul` combine it with the value of an earlier step.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// `c t^e`.
    Seed {
        coeff: FieldElement,
        exponent: Q,
    },
    /// `F(αt)`.
    ScaleVar {
        alpha: FieldElement,
    },
    /// `t^d F(t^c)`.
    SubstPower {
        c: Q,
        d: Q,
    },
    /// `F + F^p + F^{p^2} + ...`.
    AsPower,
    /// `-(F^{1/p} + F^{1/p^2} + ...)` for negatively supported `F`.
    AsPowerNeg,
    /// `F(t) + F(t^p) + F(t^{p^2}) + ...`.
    AsSubst,
    /// `F + F^{p^d} + F^{p^{2d}} + ...`.
    GapSum {
        d: u32,
    },
    /// `F^{p^{-d}} + F^{p^{-2d}} + ...` for negatively supported `F`.
    GapSumNeg {
        d: u32,
    },
    /// `F(t^{p^j})`.
    FrobTwist {
        j: u32,
    },
    Add {
        with: usize,
    },
    Mul {
        with: usize,
    },
}

/// The closure property a step relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    Seed,
    /// Artin-Schreier closure and the gap sums derived from it.
    ArtinSchreier,
    /// `F(t) ↦ F(αt)`.
    ScaleVar,
    /// `F(t) ↦ t^d F(t^c)`.
    Substitution,
    Ring,
}

impl Step {
    pub fn kind(&self) -> StepKind {
        match self {
            Step::Seed { .. } => StepKind::Seed,
            Step::AsPower
            | Step::AsPowerNeg
            | Step::AsSubst
            | Step::GapSum { .. }
            | Step::GapSumNeg { .. } => StepKind::ArtinSchreier,
            Step::ScaleVar { .. } => StepKind::ScaleVar,
            Step::SubstPower { .. } | Step::FrobTwist { .. } => StepKind::Substitution,
            Step::Add { .. } | Step::Mul { .. } => StepKind::Ring,
        }
    }

    fn reference(&self) -> Option<usize> {
        match self {
            Step::Add { with } | Step::Mul { with } => Some(*with),
            _ => None,
        }
    }
}

/// A straight-line program over the closure operations; its value is the
/// value of the last step, or zero when there are no steps.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    field: GaloisField,
    steps: Vec<Step>,
}

impl Certificate {
    pub fn new(field: GaloisField) -> Self {
        Certificate {
            field,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(field: GaloisField, steps: Vec<Step>) -> Result<Self> {
        let mut c = Certificate::new(field);
        for s in steps {
            c.push(s)?;
        }
        Ok(c)
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a step, checking that it has the inputs it needs.
    pub fn push(&mut self, step: Step) -> Result<usize> {
        let i = self.steps.len();
        let bad = |reason: &str| Error::Replay {
            step: i,
            reason: reason.to_string(),
        };
        match &step {
            Step::Seed { coeff, .. } | Step::ScaleVar { alpha: coeff }
                if coeff.field() != self.field =>
            {
                return Err(bad("coefficient outside the certificate field"))
            }
            Step::Seed { .. } => {}
            _ if i == 0 => return Err(bad("no previous value")),
            _ => {}
        }
        if let Some(r) = step.reference() {
            if r >= i {
                return Err(bad("reference to a later step"));
            }
        }
        self.steps.push(step);
        Ok(i)
    }

    /// Adds the value of another certificate to this one.
    pub fn add_part(&mut self, other: &Certificate) -> Result<()> {
        if other.field != self.field {
            return Err(Error::FieldMismatch);
        }
        if other.is_empty() {
            return Ok(());
        }
        let previous = self.steps.len().checked_sub(1);
        let offset = self.steps.len();
        for s in &other.steps {
            let s = match s {
                Step::Add { with } => Step::Add {
                    with: with + offset,
                },
                Step::Mul { with } => Step::Mul {
                    with: with + offset,
                },
                other => other.clone(),
            };
            self.steps.push(s);
        }
        if let Some(prev) = previous {
            self.steps.push(Step::Add { with: prev });
        }
        Ok(())
    }

    /// The distinct kinds of closure operations used.
    pub fn kinds(&self) -> BTreeSet<StepKind> {
        self.steps.iter().map(Step::kind).collect()
    }
}

fn to_q(x: &BigRational) -> Result<Q> {
    let n = x
        .numer()
        .to_i128()
        .ok_or(Error::InvalidArgument("coefficient too large"))?;
    let d = x
        .denom()
        .to_i128()
        .ok_or(Error::InvalidArgument("coefficient too large"))?;
    Ok(Q::new(n, d))
}

fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Pushes `G = Σ_{n ∈ S} t^n` for `S = {c_0 + c_1 p^{δ_m n_m} + ... + c_m p^{δ_1 n_1 + ... + δ_m n_m}}`.
///
/// With `N` coprime to `p` clearing the denominators, `G(t^N) = t^{N c_0}
/// Σ_j H(t)^{p^{j δ_m}}` where `H` is the series of the set with constants
/// `N c_1, ..., N c_m`; the gap sum is followed by the shift and the
/// inverse stretch.
fn push_integer(cert: &mut Certificate, c: &[Q], periods: &[u32]) -> Result<usize> {
    let m = periods.len();
    let one = cert.field.one();
    if m == 0 {
        return cert.push(Step::Seed {
            coeff: one,
            exponent: c[0],
        });
    }
    let n = c.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let nq = qi(n);
    let delta = periods[m - 1];
    if m == 1 {
        cert.push(Step::Seed {
            coeff: one,
            exponent: qi(1),
        })?;
        push_gap_sum(cert, delta)?;
        let (cc, dd) = (c[1] * nq, c[0] * nq);
        if cc != qi(1) || !dd.is_zero() {
            cert.push(Step::SubstPower { c: cc, d: dd })?;
        }
    } else {
        let inner: Vec<Q> = c[1..].iter().map(|x| x * nq).collect();
        push_integer(cert, &inner, &periods[..m - 1])?;
        push_gap_sum(cert, delta)?;
        if !c[0].is_zero() {
            cert.push(Step::SubstPower {
                c: qi(1),
                d: c[0] * nq,
            })?;
        }
    }
    if n > 1 {
        cert.push(Step::SubstPower {
            c: Q::new(1, n),
            d: qi(0),
        })?;
    }
    Ok(cert.len() - 1)
}

fn push_gap_sum(cert: &mut Certificate, delta: u32) -> Result<usize> {
    if delta == 1 {
        cert.push(Step::AsPower)
    } else {
        cert.push(Step::GapSum { d: delta })
    }
}

/// Removes cycles that only pump leading zeros; they leave the value set unchanged.
fn drop_leading_zero_cycles(form: &SimpleSparseForm) -> Result<SimpleSparseForm> {
    let zeros = |w: &[u8]| w.iter().all(|&s| s == 0);
    let v = form.fixed_words();
    let w = form.cycle_words();
    let mut nv = alloc::vec![v[0].clone()];
    let mut nw = Vec::new();
    let mut leading = zeros(&v[0]);
    for i in 0..w.len() {
        if leading && zeros(&w[i]) {
            nv.last_mut()
                .expect("nonempty")
                .extend_from_slice(&v[i + 1]);
        } else {
            nw.push(w[i].clone());
            nv.push(v[i + 1].clone());
        }
        leading = leading && nw.is_empty() && zeros(&v[i + 1]);
    }
    SimpleSparseForm::new(form.base(), nv, nw)
}

/// Certificate for `coeff · Σ_{α ∈ S} t^α`, `S` the set a simple sparse form denotes.
///
/// Integer forms follow the induction on the number of cycles, innermost
/// cycle first. A radix form splits as `t^{d_J} G_1 G_2` with `G_1` the
/// series of the integer part and `G_2` built from the post-radix cycles by
/// negative gap sums.
pub fn certify_sparse(form: &SimpleSparseForm, coeff: FieldElement) -> Result<Certificate> {
    let field = coeff.field();
    if form.base() != field.characteristic() {
        return Err(Error::InvalidArgument(
            "form base differs from the field characteristic",
        ));
    }
    let mut cert = Certificate::new(field);
    if coeff.is_zero() {
        return Ok(cert);
    }
    let form = &drop_leading_zero_cycles(form)?;
    let cf = closed_form(form);
    if !cf.is_well_ordered() {
        return Err(Error::Precondition("form is not well ordered"));
    }
    let c = cf.c().iter().map(to_q).collect::<Result<Vec<_>>>()?;
    let periods = cf.periods();
    let j = cf.pre_cycles();
    match cf.d() {
        None => {
            if periods.is_empty() {
                cert.push(Step::Seed {
                    coeff,
                    exponent: c[0],
                })?;
                return Ok(cert);
            }
            push_integer(&mut cert, &c, periods)?;
        }
        Some(d) => {
            let d = d.iter().map(to_q).collect::<Result<Vec<_>>>()?;
            if d[1..].iter().any(|x| x.is_zero()) {
                return Err(Error::Precondition(
                    "a post-radix cycle contributes nothing",
                ));
            }
            let r = d.len() - 1;
            let shift = d[0];
            if r == 0 {
                let mut c = c.clone();
                c[0] += shift;
                if j == 0 {
                    cert.push(Step::Seed {
                        coeff,
                        exponent: c[0],
                    })?;
                    return Ok(cert);
                }
                push_integer(&mut cert, &c, &periods[..j])?;
            } else {
                cert.push(Step::Seed {
                    coeff: field.one(),
                    exponent: d[r],
                })?;
                for i in (1..r).rev() {
                    let inner = cert.len() - 1;
                    cert.push(Step::GapSumNeg { d: periods[j + i] })?;
                    cert.push(Step::Add { with: inner })?;
                    cert.push(Step::SubstPower { c: qi(1), d: d[i] })?;
                }
                let inner = cert.len() - 1;
                cert.push(Step::GapSumNeg { d: periods[j] })?;
                let g2 = cert.push(Step::Add { with: inner })?;
                if j == 0 {
                    let total = shift + c[0];
                    if !total.is_zero() {
                        cert.push(Step::SubstPower { c: qi(1), d: total })?;
                    }
                } else {
                    push_integer(&mut cert, &c, &periods[..j])?;
                    cert.push(Step::Mul { with: g2 })?;
                    if !shift.is_zero() {
                        cert.push(Step::SubstPower { c: qi(1), d: shift })?;
                    }
                }
            }
        }
    }
    if !coeff.is_one() {
        let last = cert.len() - 1;
        cert.push(Step::Seed {
            coeff,
            exponent: qi(0),
        })?;
        cert.push(Step::Mul { with: last })?;
    }
    Ok(cert)
}

/// Lower bounds on the support of every step value (`None`: the value is zero).
fn support_lower_bounds(cert: &Certificate) -> Vec<Option<Q>> {
    let p = qi(cert.field.characteristic() as i128);
    let mut low: Vec<Option<Q>> = Vec::with_capacity(cert.len());
    for (i, s) in cert.steps.iter().enumerate() {
        let prev = if i > 0 { low[i - 1] } else { None };
        let v = match s {
            Step::Seed { coeff, exponent } => (!coeff.is_zero()).then_some(*exponent),
            Step::SubstPower { c, d } => prev.map(|x| x * c + d),
            Step::FrobTwist { j } => prev.map(|x| x * num_traits::pow(p, *j as usize)),
            Step::Add { with } => match (prev, low[*with]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, None) => a,
                (None, b) => b,
            },
            Step::Mul { with } => match (prev, low[*with]) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            _ => prev,
        };
        low.push(v);
    }
    low
}

/// Precision each step must be computed to for the last one to reach `target`.
fn demands(cert: &Certificate, target: Q) -> Vec<Q> {
    let p = qi(cert.field.characteristic() as i128);
    let low = support_lower_bounds(cert);
    let n = cert.len();
    let mut need: Vec<Option<Q>> = vec![None; n];
    if n > 0 {
        need[n - 1] = Some(target);
    }
    let raise = |need: &mut Vec<Option<Q>>, i: usize, x: Q| {
        need[i] = Some(need[i].map_or(x, |y| y.max(x)));
    };
    for i in (0..n).rev() {
        let di = need[i].unwrap_or(target);
        match &cert.steps[i] {
            Step::Seed { .. } => {}
            Step::SubstPower { c, d } => raise(&mut need, i - 1, (di - d) / c),
            Step::FrobTwist { j } => raise(&mut need, i - 1, di / num_traits::pow(p, *j as usize)),
            Step::Add { with } => {
                raise(&mut need, i - 1, di);
                raise(&mut need, *with, di);
            }
            Step::Mul { with } => {
                let lw = low[*with].unwrap_or(di);
                let lp = low[i - 1].unwrap_or(di);
                raise(&mut need, i - 1, di - lw.min(di));
                raise(&mut need, *with, di - lp.min(di));
            }
            _ => raise(&mut need, i - 1, di),
        }
    }
    need.into_iter().map(|x| x.unwrap_or(target)).collect()
}

/// Replays a certificate into a series known below `precision`; the
/// negative Artin-Schreier steps leave gaps of width at least `|window|`
/// below each accumulation point.
pub fn replay<E: Exponent>(cert: &Certificate, precision: &E, window: &Q) -> Result<Series<E>> {
    let field = cert.field;
    if cert.is_empty() {
        return Ok(Series::zero(field, None));
    }
    let need = demands(cert, precision.to_q());
    let mut values: Vec<Series<E>> = Vec::with_capacity(cert.len());
    for (i, step) in cert.steps.iter().enumerate() {
        let wrap = |e: Error| Error::Replay {
            step: i,
            reason: e.to_string(),
        };
        let limit = E::bound_from_q(&need[i]);
        let prev = || values.last().expect("checked on push");
        let v = match step {
            Step::Seed { coeff, exponent } => {
                let e = E::from_q(exponent).ok_or_else(|| wrap(Error::ExponentNotRepresentable))?;
                Ok(Series::monomial(*coeff, e))
            }
            Step::ScaleVar { alpha } => prev().scale_var(*alpha),
            Step::SubstPower { c, d } => prev().subst_power(c, d),
            Step::FrobTwist { j } => {
                let pj = num_traits::pow(qi(field.characteristic() as i128), *j as usize);
                prev().subst_power(&pj, &qi(0))
            }
            Step::AsPower => as_power_pos(prev(), &limit),
            Step::AsPowerNeg => as_power_neg(prev(), window),
            Step::AsSubst => as_subst(prev(), &limit),
            Step::GapSum { d } => gap_sum(prev(), *d, &limit),
            Step::GapSumNeg { d } => gap_sum_neg(prev(), *d, window),
            Step::Add { with } => prev().add(&values[*with]),
            Step::Mul { with } => prev().mul(&values[*with]),
        }
        .map_err(wrap)?;
        values.push(v);
    }
    Ok(values.pop().expect("nonempty").truncate(precision))
}

/// Outcome of comparing a replay with a target series.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification<E: Exponent> {
    /// No known coefficient differs.
    pub matches: bool,
    /// Smallest exponent known in both where they differ.
    pub mismatch: Option<E>,
    /// The replay is known on all of `(-∞, precision)` (no gaps, full precision).
    pub complete: bool,
    pub replay: Series<E>,
}

/// Replays `cert` and compares it with `target` below `precision`.
pub fn verify_certificate<E: Exponent>(
    cert: &Certificate,
    target: &Series<E>,
    precision: &E,
    window: &Q,
) -> Result<Verification<E>> {
    if cert.field != target.field() {
        return Err(Error::FieldMismatch);
    }
    let replay = replay(cert, precision, window)?;
    let mismatch = replay.first_mismatch(&target.truncate(precision));
    let complete = replay.gaps().is_empty() && replay.precision().is_none_or(|n| n >= precision);
    Ok(Verification {
        matches: mismatch.is_none(),
        mismatch,
        complete,
        replay,
    })
}

/// A generalized series described by an automaton on valid expansions:
/// the coefficient at `α` is `M(aα + b)` when `aα + b ∈ S_p`.
#[derive(Clone, Debug)]
pub struct QuasiAutomatic {
    a: BigRational,
    b: BigRational,
    machine: Dfao<FieldElement>,
}

impl QuasiAutomatic {
    pub fn new(a: BigRational, b: BigRational, machine: Dfao<FieldElement>) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidArgument("the scale a must be positive"));
        }
        let field = machine_field(&machine)?;
        if machine.alphabet() != field.characteristic() as usize + 1 {
            return Err(Error::AlphabetMismatch);
        }
        Ok(QuasiAutomatic { a, b, machine })
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn machine(&self) -> &Dfao<FieldElement> {
        &self.machine
    }
}

/// Coefficient of `t^α`.
pub fn quasi_eval(q: &QuasiAutomatic, alpha: &BigRational) -> FieldElement {
    let field = q.machine.outputs()[0].field();
    let x = &q.a * alpha + &q.b;
    match SpRational::from_ratio(field.characteristic(), &x) {
        Ok(sp) => *q
            .machine
            .run(encode_sp(&sp).symbols())
            .expect("alphabet checked"),
        Err(_) => field.zero(),
    }
}

/// `Σ_{α ∈ S} c t^α` for the values `α` of a form with at most `max_len`
/// symbols, known below `precision`. An enumeration oracle, independent of
/// certificates.
pub fn form_series<E: Exponent>(
    form: &SimpleSparseForm,
    coeff: FieldElement,
    max_len: usize,
    precision: &E,
) -> Result<Series<E>> {
    let mut terms = Vec::new();
    let mut seen = BTreeSet::new();
    for (_, w) in form.words_up_to(max_len) {
        let x = crate::digits::positional_value(&w, form.base())?;
        let q = to_q(&x)?;
        if seen.insert(q) {
            let e = E::from_q(&q).ok_or(Error::ExponentNotRepresentable)?;
            terms.push((e, coeff));
        }
    }
    Series::from_terms(coeff.field(), terms, Some(precision.clone()))
}

/// Converts an exact rational to the series exponent type.
pub fn rational_exponent(x: &BigRational) -> Result<Q> {
    to_q(x)
}

/// Exponent `n / d` as an exact rational.
pub fn exponent_ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Default for Empirical {
    fn default() -> Self {
        Empirical {
            precision: 1024,
            depth: DEFAULT_KERNEL_DEPTH,
        }
    }
}
