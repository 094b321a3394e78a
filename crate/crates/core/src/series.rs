//! Truncated power series over `F_q` with exponents in `ℕ`
//! ([`TruncatedSeries`]) or in `ℤ[1/p]` ([`GenSeries`]), and the
//! Artin-Schreier operators built on them.
//!
//! A series records which of its coefficients are known exactly. Everything
//! strictly below `precision` is known (`None` means every coefficient is
//! known), except on a finite list of gaps `[g0, g1)`. Gaps arise from the
//! negative Artin-Schreier branch, whose terms accumulate at `0⁻`, and
//! travel with products and substitutions. Every
//! operation computes the known region of its result from those of its
//! operands; nothing is truncated silently.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{moore_basis, FieldElement, GaloisField};

/// Rational exponents.
pub type Q = Ratio<i128>;

/// Exponent domain of a series.
pub trait Exponent: Clone + Ord + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn to_q(&self) -> Q;
    /// Exact conversion, `None` outside the domain.
    fn from_q(q: &Q) -> Option<Self>;
    /// The completeness bound equivalent to "known below `q`".
    fn bound_from_q(q: &Q) -> Self;
}

impl Exponent for u64 {
    fn zero() -> Self {
        0
    }

    fn to_q(&self) -> Q {
        Q::from_integer(*self as i128)
    }

    fn from_q(q: &Q) -> Option<Self> {
        (q.is_integer() && !q.is_negative()).then(|| q.to_integer() as u64)
    }

    fn bound_from_q(q: &Q) -> Self {
        if q.is_negative() || q.is_zero() {
            0
        } else {
            q.ceil().to_integer() as u64
        }
    }
}

impl Exponent for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }

    fn to_q(&self) -> Q {
        *self
    }

    fn from_q(q: &Q) -> Option<Self> {
        Some(*q)
    }

    fn bound_from_q(q: &Q) -> Self {
        *q
    }
}

/// A power series known on a region of exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<E: Exponent> {
    field: GaloisField,
    terms: BTreeMap<E, FieldElement>,
    precision: Option<E>,
    gaps: Vec<(E, E)>,
}

/// Series with natural exponents.
pub type TruncatedSeries = Series<u64>;
/// Series with exponents in `ℤ[1/p]`.
pub type GenSeries = Series<Q>;

fn qmin(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Sorted union of half-open intervals, dropping empty ones.
fn merge_intervals(mut v: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    v.retain(|(a, b)| a < b);
    v.sort();
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn qpow(p: u32, k: i32) -> Q {
    let base = Q::from_integer(p as i128);
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

impl<E: Exponent> Series<E> {
    /// The zero series, known below `precision`.
    pub fn zero(field: GaloisField, precision: Option<E>) -> Self {
        Series {
            field,
            terms: BTreeMap::new(),
            precision,
            gaps: Vec::new(),
        }
    }

    /// `c t^e`, known exactly.
    pub fn monomial(c: FieldElement, e: E) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Series {
            field: c.field(),
            terms,
            precision: None,
            gaps: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, E::zero())
    }

    /// A series from explicit terms; terms at or beyond the precision are dropped.
    pub fn from_terms(
        field: GaloisField,
        terms: impl IntoIterator<Item = (E, FieldElement)>,
        precision: Option<E>,
    ) -> Result<Self> {
        let mut map: BTreeMap<E, FieldElement> = BTreeMap::new();
        for (e, c) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            if precision.as_ref().is_some_and(|n| &e >= n) {
                continue;
            }
            let slot = map.entry(e).or_insert_with(|| field.zero());
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Series {
            field,
            terms: map,
            precision,
            gaps: Vec::new(),
        })
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn precision(&self) -> Option<&E> {
        self.precision.as_ref()
    }

    /// Disjoint, sorted intervals of unknown coefficients below the precision.
    pub fn gaps(&self) -> &[(E, E)] {
        &self.gaps
    }

    pub fn terms(&self) -> &BTreeMap<E, FieldElement> {
        &self.terms
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none() && self.gaps.is_empty()
    }

    /// Whether the coefficient at `e` is known.
    pub fn is_known(&self, e: &E) -> bool {
        self.precision.as_ref().is_none_or(|n| e < n)
            && !self.gaps.iter().any(|(g0, g1)| e >= g0 && e < g1)
    }

    pub fn coeff(&self, e: &E) -> FieldElement {
        self.terms
            .get(e)
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<E> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<E> {
        self.terms.keys().next().cloned()
    }

    /// Lowers the precision to `n`.
    pub fn truncate(&self, n: &E) -> Self {
        let precision = match &self.precision {
            Some(p) if p < n => p.clone(),
            _ => n.clone(),
        };
        self.with_region(self.terms.clone(), Some(precision.to_q()), self.gaps_q())
    }

    fn gaps_q(&self) -> Vec<(Q, Q)> {
        self.gaps
            .iter()
            .map(|(a, b)| (a.to_q(), b.to_q()))
            .collect()
    }

    fn precision_q(&self) -> Option<Q> {
        self.precision.as_ref().map(|n| n.to_q())
    }

    /// Smallest exponent that is nonzero or unknown (`None` for the exact zero series).
    fn low_q(&self) -> Option<Q> {
        let mut low = self.valuation().map(|e| e.to_q());
        low = qmin(low, self.gaps.first().map(|g| g.0.to_q()));
        qmin(low, self.precision_q())
    }

    /// Normalizes a known region and drops terms outside it.
    fn with_region(
        &self,
        mut terms: BTreeMap<E, FieldElement>,
        precision: Option<Q>,
        gaps: Vec<(Q, Q)>,
    ) -> Self {
        let mut precision = precision;
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (a, b) in merge_intervals(gaps) {
            if let Some(n) = precision {
                if a >= n {
                    break;
                }
                if b >= n {
                    precision = Some(a);
                    break;
                }
            }
            merged.push((a, b));
        }
        let precision = precision.map(|n| E::bound_from_q(&n));
        let gaps: Vec<(E, E)> = merged
            .into_iter()
            .map(|(a, b)| (E::bound_from_q(&a), E::bound_from_q(&b)))
            .filter(|(a, b)| a < b)
            .collect();
        terms.retain(|e, c| {
            !c.is_zero()
                && precision.as_ref().is_none_or(|n| e < n)
                && !gaps.iter().any(|(g0, g1)| e >= g0 && e < g1)
        });
        Series {
            field: self.field,
            terms,
            precision,
            gaps,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(|| self.field.zero());
            *slot += *c;
        }
        let mut gaps = self.gaps_q();
        gaps.extend(other.gaps_q());
        Ok(self.with_region(terms, qmin(self.precision_q(), other.precision_q()), gaps))
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -*c)).collect();
        Series {
            field: self.field,
            terms,
            precision: self.precision.clone(),
            gaps: self.gaps.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a constant.
    pub fn scale(&self, c: FieldElement) -> Result<Self> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), *x * c))
            .collect();
        Ok(self.with_region(terms, self.precision_q(), self.gaps_q()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (Some(low_f), Some(low_g)) = (self.low_q(), other.low_q()) else {
            return Ok(Series::zero(self.field, None));
        };
        let precision = qmin(
            self.precision_q().map(|n| n + low_g),
            other.precision_q().map(|n| n + low_f),
        );
        // an unknown interval of one factor, shifted by every known term of
        // the other, plus sums of unknown intervals
        let mut gaps = Vec::new();
        let (gf, gg) = (self.gaps_q(), other.gaps_q());
        for (a, b) in &gf {
            gaps.extend(other.terms.keys().map(|e| (a + e.to_q(), b + e.to_q())));
            gaps.extend(gg.iter().map(|(c, d)| (a + c, b + d)));
        }
        for (a, b) in &gg {
            gaps.extend(self.terms.keys().map(|e| (a + e.to_q(), b + e.to_q())));
        }
        let limit = precision.map(|n| E::bound_from_q(&n));
        let mut terms: BTreeMap<E, FieldElement> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let q = e1.to_q() + e2.to_q();
                let e = E::from_q(&q).ok_or(Error::ExponentNotRepresentable)?;
                if limit.as_ref().is_some_and(|n| &e >= n) {
                    // terms are sorted, so later e2 only grow
                    break;
                }
                let slot = terms.entry(e).or_insert_with(|| self.field.zero());
                *slot += *c1 * *c2;
            }
        }
        Ok(self.with_region(terms, precision, gaps))
    }

    /// Maps exponents by `e -> c e + d` with `c > 0`, coefficients by `f`.
    fn remap(&self, c: &Q, d: &Q, f: impl Fn(FieldElement) -> FieldElement) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("exponent scale must be positive"));
        }
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let q = e.to_q() * c + d;
            let e = E::from_q(&q).ok_or(Error::ExponentNotRepresentable)?;
            terms.insert(e, f(*x));
        }
        let precision = self.precision_q().map(|n| n * c + d);
        let gaps = self
            .gaps_q()
            .into_iter()
            .map(|(a, b)| (a * c + d, b * c + d))
            .collect();
        Ok(self.with_region(terms, precision, gaps))
    }

    /// `F^{p^k}`; negative `k` takes `p`-th roots coefficientwise.
    pub fn frobenius(&self, k: i32) -> Result<Self> {
        let p = self.field.characteristic();
        self.remap(&qpow(p, k), &<Q as Zero>::zero(), |x| x.frobenius(k as i64))
    }

    /// `t^d F(t^c)`.
    pub fn subst_power(&self, c: &Q, d: &Q) -> Result<Self> {
        self.remap(c, d, |x| x)
    }

    /// `F(αt)`: the coefficient at `e` is multiplied by `α^e`. Exponents with
    /// denominator `p^k` use the unique `p^k`-th root of `α`.
    pub fn scale_var(&self, alpha: FieldElement) -> Result<Self> {
        if alpha.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let p = self.field.characteristic() as i128;
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let q = e.to_q();
            let mut den = *q.denom();
            let mut k = 0i64;
            while den % p == 0 {
                den /= p;
                k += 1;
            }
            if den != 1 {
                return Err(Error::ExponentNotRepresentable);
            }
            let root = alpha.frobenius(-k);
            let num = *q.numer();
            let factor = if num >= 0 {
                root.pow(num as u64)
            } else {
                root.inv()?.pow((-num) as u64)
            };
            terms.insert(e.clone(), *x * factor);
        }
        Ok(self.with_region(terms, self.precision_q(), self.gaps_q()))
    }

    /// The same series with coefficients in a larger field.
    pub fn embed(&self, field: GaloisField) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            terms.insert(e.clone(), field.embed(*x)?);
        }
        Ok(Series {
            field,
            terms,
            precision: self.precision.clone(),
            gaps: self.gaps.clone(),
        })
    }

    /// The same series over the subfield of degree `m`, if every coefficient lies there.
    pub fn restrict(&self, m: u32) -> Result<Option<Self>> {
        let small = GaloisField::new(self.field.characteristic(), m)?;
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            match self.field.restrict(*x, m)? {
                Some(y) => {
                    terms.insert(e.clone(), y);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(Series {
            field: small,
            terms,
            precision: self.precision.clone(),
            gaps: self.gaps.clone(),
        }))
    }

    /// Smallest exponent known in both series where they differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<E> {
        let keys: alloc::collections::BTreeSet<&E> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .filter(|e| self.is_known(e) && other.is_known(e))
            .find(|e| self.coeff(e) != other.coeff(e))
            .cloned()
    }

    /// Parts with negative, zero and positive exponents.
    pub fn split_by_sign(&self) -> (Self, FieldElement, Self) {
        let zero = E::zero();
        let mut neg = BTreeMap::new();
        let mut pos = BTreeMap::new();
        for (e, c) in &self.terms {
            match e.cmp(&zero) {
                core::cmp::Ordering::Less => {
                    neg.insert(e.clone(), *c);
                }
                core::cmp::Ordering::Greater => {
                    pos.insert(e.clone(), *c);
                }
                core::cmp::Ordering::Equal => {}
            }
        }
        let f_neg = Series {
            field: self.field,
            terms: neg,
            precision: None,
            gaps: Vec::new(),
        };
        let f_pos = Series {
            field: self.field,
            terms: pos,
            precision: self.precision.clone(),
            gaps: Vec::new(),
        };
        (f_neg, self.coeff(&zero), f_pos)
    }

    /// `F^p - F + G`, whose vanishing is the Artin-Schreier equation `X^p - X + G = 0`.
    pub fn artin_schreier_residual(&self, g: &Self) -> Result<Self> {
        self.frobenius(1)?.sub(self)?.add(g)
    }

    /// Smallest known exponent with a nonzero coefficient, or `None` when the
    /// series vanishes on its whole known region.
    pub fn order(&self) -> Option<E> {
        self.valuation()
    }
}

impl TruncatedSeries {
    pub fn to_gen(&self) -> GenSeries {
        Series {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Q::from_integer(*e as i128), *c))
                .collect(),
            precision: self.precision.map(|n| Q::from_integer(n as i128)),
            gaps: Vec::new(),
        }
    }

    /// Coefficients `f(0..n)` as a dense vector.
    pub fn dense(&self, n: u64) -> Vec<FieldElement> {
        (0..n).map(|e| self.coeff(&e)).collect()
    }
}

impl GenSeries {
    /// Converts back to natural exponents when every known term allows it.
    pub fn to_truncated(&self) -> Result<TruncatedSeries> {
        if !self.gaps.is_empty() {
            return Err(Error::ExponentNotRepresentable);
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(u64::from_q(e).ok_or(Error::ExponentNotRepresentable)?, *c);
        }
        let precision = match self.precision {
            Some(n) if n.is_negative() => return Err(Error::ExponentNotRepresentable),
            Some(n) => Some(u64::bound_from_q(&n)),
            None => None,
        };
        Ok(Series {
            field: self.field,
            terms,
            precision,
            gaps: Vec::new(),
        })
    }
}

impl<E: Exponent> fmt::Display for Series<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let coeff = if c.is_one() {
                alloc::string::String::new()
            } else {
                format!("({})", c)
            };
            if e == &E::zero() {
                if c.is_one() {
                    f.write_str("1")?;
                } else {
                    write!(f, "{}", coeff)?;
                }
            } else {
                write!(f, "{}t^{}", coeff, e)?;
            }
        }
        for (a, b) in &self.gaps {
            write!(f, " + O([{}, {}))", a, b)?;
        }
        if let Some(n) = &self.precision {
            write!(f, " + O(t^{})", n)?;
        }
        Ok(())
    }
}

fn ensure_positive<E: Exponent>(f: &Series<E>) -> Result<()> {
    if f.terms.keys().any(|e| e <= &E::zero()) || !f.gaps.is_empty() {
        return Err(Error::Precondition(
            "series must have strictly positive support",
        ));
    }
    Ok(())
}

fn ensure_negative<E: Exponent>(f: &Series<E>) -> Result<()> {
    if f.terms.keys().any(|e| e >= &E::zero()) {
        return Err(Error::Precondition(
            "series must have strictly negative support",
        ));
    }
    Ok(())
}

/// `Σ_{k >= 0} F^{p^{k d}}` for positively supported `F`, known below
/// `min(precision(F), limit)`.
fn power_chain<E: Exponent>(f: &Series<E>, d: i32, limit: &E) -> Result<Series<E>> {
    ensure_positive(f)?;
    let f = f.truncate(limit);
    let bound = f.precision.clone().expect("truncated");
    let mut acc = Series::zero(f.field, Some(bound.clone()));
    let mut term = f;
    while let Some(v) = term.valuation() {
        if v >= bound {
            break;
        }
        acc = acc.add(&term)?;
        term = term.frobenius(d)?.truncate(&bound);
    }
    Ok(acc)
}

/// Start of the unknown region left by summing `p`-th roots of a
/// negatively supported series with window `w`.
fn negative_gap_start<E: Exponent>(f: &Series<E>, window: &Q) -> Q {
    let p = Q::from_integer(f.field.characteristic() as i128);
    let mut start = *window;
    if let Some((g0, _)) = f.gaps_q().first() {
        start = start.min(g0 / p);
    }
    if let Some(n) = f.precision_q() {
        if n.is_negative() {
            start = start.min(n / p);
        }
    }
    start
}

/// `Σ_{j >= 1} F^{p^{-j d}}` for negatively supported `F`: exact below the
/// gap `[g, 0)` where `g <= window`, and everything at or above `0` is zero.
fn root_chain<E: Exponent>(f: &Series<E>, d: i32, window: &Q) -> Result<Series<E>> {
    ensure_negative(f)?;
    if !window.is_negative() {
        return Err(Error::InvalidArgument("window must be negative"));
    }
    if f.is_zero() && f.gaps.is_empty() && f.precision_q().is_none_or(|n| !n.is_negative()) {
        return Ok(Series::zero(f.field, None));
    }
    let start = negative_gap_start(f, window);
    let base = Series {
        field: f.field,
        terms: f.terms.clone(),
        precision: None,
        gaps: Vec::new(),
    };
    let mut acc = Series::zero(f.field, None);
    let mut term = base.frobenius(-d)?;
    while let Some(v) = term.valuation() {
        if v.to_q() >= start {
            break;
        }
        acc = acc.add(&term)?;
        term = term.frobenius(-d)?;
    }
    Ok(acc.with_region(acc.terms.clone(), None, vec![(start, <Q as Zero>::zero())]))
}

/// Power form of the Artin-Schreier operator, positive branch:
/// `G = F + F^p + F^{p^2} + ...`, so that `G^p - G = -F`.
pub fn as_power_pos<E: Exponent>(f: &Series<E>, limit: &E) -> Result<Series<E>> {
    power_chain(f, 1, limit)
}

/// Power form, negative branch: `G = -Σ_{i >= 1} F^{p^{-i}}`, so that
/// `G^p - G = -F` outside the gap `[w', 0)`, `w' <= window`.
pub fn as_power_neg<E: Exponent>(f: &Series<E>, window: &Q) -> Result<Series<E>> {
    Ok(root_chain(f, 1, window)?.neg())
}

/// Substitution form: `F(t) + F(t^p) + F(t^{p^2}) + ...` for `F(0) = 0`.
pub fn as_subst<E: Exponent>(f: &Series<E>, limit: &E) -> Result<Series<E>> {
    if !f.coeff(&E::zero()).is_zero() {
        return Err(Error::Precondition("constant term must vanish"));
    }
    ensure_positive(f)?;
    let f = f.truncate(limit);
    let bound = f.precision.clone().expect("truncated");
    let p = Q::from_integer(f.field.characteristic() as i128);
    let mut acc = Series::zero(f.field, Some(bound.clone()));
    let mut term = f;
    while let Some(v) = term.valuation() {
        if v >= bound {
            break;
        }
        acc = acc.add(&term)?;
        term = term.subst_power(&p, &<Q as Zero>::zero())?.truncate(&bound);
    }
    Ok(acc)
}

/// The `p` solutions of `X^p - X + F = 0`: `G₊ + G₋ + a + i` for `i ∈ F_p`,
/// with `a^p - a = -F(0)`. When that needs a degree-`p` extension, all
/// solutions live in it.
pub fn solve_artin_schreier<E: Exponent>(
    f: &Series<E>,
    limit: &E,
    window: &Q,
) -> Result<Vec<Series<E>>> {
    if !f.gaps.is_empty() {
        return Err(Error::Precondition("input must not have unknown gaps"));
    }
    if f.precision.as_ref().is_some_and(|n| n <= &E::zero()) {
        return Err(Error::Precondition(
            "input must be known through its constant term",
        ));
    }
    let (f_neg, c, f_pos) = f.split_by_sign();
    let field = f.field;
    let mut roots = (-c).artin_schreier_roots();
    let mut target = field;
    if roots.is_empty() {
        let m = field.degree() * field.characteristic();
        target = GaloisField::new(field.characteristic(), m).map_err(|_| {
            Error::ExtensionUnavailable {
                p: field.characteristic(),
                m,
            }
        })?;
        roots = target.embed(-c)?.artin_schreier_roots();
    }
    let f_pos = f_pos.embed(target)?;
    let f_neg = f_neg.embed(target)?;
    let g_pos = as_power_pos(&f_pos, limit)?;
    let g_neg = as_power_neg(&f_neg, window)?;
    let base = g_pos.add(&g_neg)?;
    roots
        .iter()
        .map(|a| base.add(&Series::constant(*a)))
        .collect()
}

/// `F + F^{p^d} + F^{p^{2d}} + ...` for positively supported `F`, computed
/// directly and through `Σ c_i AS(a_i F)` with the Moore data of degree `d`;
/// the two routes must agree.
pub fn gap_sum<E: Exponent>(f: &Series<E>, d: u32, limit: &E) -> Result<Series<E>> {
    if d == 0 {
        return Err(Error::InvalidArgument("gap must be at least 1"));
    }
    let direct = power_chain(f, d as i32, limit)?;
    let moore = moore_route(f, d, |g| as_power_pos(g, limit))?;
    compare_routes(direct, moore)
}

/// `F^{p^{-d}} + F^{p^{-2d}} + ...` for negatively supported `F`, computed
/// directly and as `-Σ c_i AS₋(a_i F)`.
pub fn gap_sum_neg<E: Exponent>(f: &Series<E>, d: u32, window: &Q) -> Result<Series<E>> {
    if d == 0 {
        return Err(Error::InvalidArgument("gap must be at least 1"));
    }
    let direct = root_chain(f, d as i32, window)?;
    let moore = moore_route(f, d, |g| Ok(as_power_neg(g, window)?.neg()))?;
    compare_routes(direct, moore)
}

fn compare_routes<E: Exponent>(direct: Series<E>, moore: Series<E>) -> Result<Series<E>> {
    if let Some(e) = direct.first_mismatch(&moore) {
        return Err(Error::RouteDisagreement {
            exponent: format!("{}", e),
        });
    }
    Ok(direct)
}

fn moore_route<E: Exponent>(
    f: &Series<E>,
    d: u32,
    op: impl Fn(&Series<E>) -> Result<Series<E>>,
) -> Result<Series<E>> {
    let field = f.field;
    let p = field.characteristic();
    let big_m = field.degree().lcm(&d);
    let big =
        GaloisField::new(p, big_m).map_err(|_| Error::ExtensionUnavailable { p, m: big_m })?;
    let data = moore_basis(p, d)?;
    let lifted = f.embed(big)?;
    let mut acc: Option<Series<E>> = None;
    for (a, c) in data.basis.iter().zip(&data.coefficients) {
        let h = op(&lifted.scale(big.embed(*a)?)?)?;
        let term = h.scale(big.embed(*c)?)?;
        acc = Some(match acc {
            None => term,
            Some(x) => x.add(&term)?,
        });
    }
    let acc = acc.expect("degree at least 1");
    acc.restrict(field.degree())?
        .ok_or(Error::RouteDisagreement {
            exponent: "coefficient outside base field".into(),
        })
}

/// `Σ_j B_j(t) X^j` with `B_j = Σ coeff t^i`, from `(i, j, coeff)` triples.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicEquation {
    field: GaloisField,
    terms: Vec<(u64, u32, FieldElement)>,
}

impl AlgebraicEquation {
    pub fn new(field: GaloisField, terms: Vec<(u64, u32, FieldElement)>) -> Result<Self> {
        if terms.iter().any(|t| t.2.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let eq = AlgebraicEquation { field, terms };
        if eq
            .coefficients()
            .iter()
            .all(|b| b.iter().all(|c| c.is_zero()))
        {
            return Err(Error::InvalidArgument("all coefficients vanish"));
        }
        Ok(eq)
    }

    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn terms(&self) -> &[(u64, u32, FieldElement)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| !t.2.is_zero())
            .map(|t| t.1)
            .max()
            .unwrap_or(0)
    }

    /// Dense coefficient polynomials `B_0..B_s`.
    pub fn coefficients(&self) -> Vec<Vec<FieldElement>> {
        let s = self.terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
        let len = self.terms.iter().map(|t| t.0).max().unwrap_or(0) as usize + 1;
        let mut b = vec![vec![self.field.zero(); len]; s + 1];
        for &(i, j, c) in &self.terms {
            b[j as usize][i as usize] += c;
        }
        b
    }

    /// `min_{j >= 1} ord B_j`, or `None` when the equation does not involve `X`.
    pub fn beta(&self) -> Option<u64> {
        let b = self.coefficients();
        b.iter()
            .skip(1)
            .filter_map(|bj| bj.iter().position(|c| !c.is_zero()))
            .min()
            .map(|x| x as u64)
    }

    /// `Σ_j B_j F^j` with its known region.
    pub fn evaluate<E: Exponent>(&self, f: &Series<E>) -> Result<Series<E>> {
        if f.field != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Series::zero(self.field, None);
        let mut power = Series::constant(self.field.one());
        for (j, bj) in self.coefficients().iter().enumerate() {
            if j > 0 {
                power = power.mul(f)?;
            }
            let poly = Series::from_terms(
                self.field,
                bj.iter()
                    .enumerate()
                    .map(|(i, c)| (E::from_q(&Q::from_integer(i as i128)).expect("natural"), *c)),
                None,
            )?;
            if !poly.is_zero() {
                acc = acc.add(&poly.mul(&power)?)?;
            }
        }
        Ok(acc)
    }
}

/// Result of substituting a series into an equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// First exponent with a nonzero residual coefficient, if any is known.
    pub order: Option<u64>,
    /// The residual is known below this exponent (`None`: known everywhere).
    pub checked_below: Option<u64>,
}

impl Residual {
    /// Lower bound on the true order of the residual.
    pub fn order_at_least(&self) -> Option<u64> {
        self.order.or(self.checked_below)
    }

    pub fn vanishes_below(&self, n: u64) -> bool {
        self.order_at_least().is_none_or(|o| o >= n)
    }
}

/// `t`-adic order of `Σ_j B_j F^j` on its known region.
pub fn verify_algebraic(f: &TruncatedSeries, eq: &AlgebraicEquation) -> Result<Residual> {
    let r = eq.evaluate(f)?;
    Ok(Residual {
        order: r.order(),
        checked_below: r.precision().copied(),
    })
}

/// Largest number of partial solutions followed at once.
pub const BRANCH_CAP: usize = 256;

#[derive(Clone)]
struct Branch {
    f: Vec<FieldElement>,
    /// powers[j][m] = coefficient m of F^j for the known prefix
    powers: Vec<Vec<FieldElement>>,
}

impl Branch {
    /// Appends `x` as the next coefficient, updating the power table.
    fn push(&mut self, x: FieldElement, zero: FieldElement) {
        self.f.push(x);
        let n = self.f.len() - 1;
        let s = self.powers.len() - 1;
        self.powers[0].push(if n == 0 { zero.field().one() } else { zero });
        for j in 1..=s {
            let mut acc = zero;
            for i in 0..=n {
                acc += self.powers[j - 1][i] * self.f[n - i];
            }
            self.powers[j].push(acc);
        }
    }
}

/// Coefficient `m` of `Σ_j B_j F^j` from a power table known through index `m - β`.
fn residual_coeff(
    b: &[Vec<FieldElement>],
    powers: &[Vec<FieldElement>],
    m: usize,
    zero: FieldElement,
) -> FieldElement {
    let mut acc = zero;
    for (j, bj) in b.iter().enumerate() {
        for (i, c) in bj.iter().enumerate() {
            if c.is_zero() || i > m {
                continue;
            }
            if let Some(x) = powers[j].get(m - i) {
                acc += *c * *x;
            }
        }
    }
    acc
}

/// Coefficients `f(0..n)` of the solution of `eq` extending `seed`, by
/// undetermined coefficients.
///
/// With `β = min_{j >= 1} ord B_j`, coefficient `m + β` of the residual
/// depends only on `f(0..=m)`, so each new coefficient is fixed by one more
/// residual coefficient. All consistent extensions are followed; the seed
/// must single out exactly one of them.
pub fn equation_to_coeffs(
    eq: &AlgebraicEquation,
    seed: &[FieldElement],
    n: u64,
) -> Result<TruncatedSeries> {
    let field = eq.field;
    let zero = field.zero();
    if seed.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let beta = eq
        .beta()
        .ok_or(Error::Precondition("equation does not involve X"))? as usize;
    let b = eq.coefficients();
    let s = b.len() - 1;
    let mut start = Branch {
        f: Vec::new(),
        powers: vec![Vec::new(); s + 1],
    };
    for (k, &x) in seed.iter().enumerate() {
        if k as u64 >= n {
            break;
        }
        start.push(x, zero);
        let m = k + beta;
        if !residual_coeff(&b, &start.powers, m, zero).is_zero() {
            return Err(Error::NoSolution { index: k as u64 });
        }
    }
    // Residual coefficients below β only involve B_0 and the seed, check them too.
    for m in 0..beta.min(start.f.len() + beta) {
        if !residual_coeff(&b, &start.powers, m, zero).is_zero() {
            return Err(Error::NoSolution { index: 0 });
        }
    }
    let mut branches = vec![start];
    for k in seed.len() as u64..n {
        let mut next = Vec::new();
        for br in &branches {
            for x in field.elements() {
                let mut cand = br.clone();
                cand.push(x, zero);
                let m = k as usize + beta;
                if residual_coeff(&b, &cand.powers, m, zero).is_zero() {
                    if k == 0 {
                        // lower residual coefficients depend on f(0) alone when the seed is empty
                        if (0..beta).any(|i| !residual_coeff(&b, &cand.powers, i, zero).is_zero()) {
                            continue;
                        }
                    }
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::NoSolution { index: k });
        }
        if next.len() > BRANCH_CAP {
            next.truncate(BRANCH_CAP);
            let series = next
                .iter()
                .map(|br| dense_series(field, &br.f, n))
                .collect::<Result<Vec<_>>>()?;
            return Err(Error::AmbiguousBranch { branches: series });
        }
        branches = next;
    }
    if branches.len() > 1 {
        let series = branches
            .iter()
            .map(|br| dense_series(field, &br.f, n))
            .collect::<Result<Vec<_>>>()?;
        return Err(Error::AmbiguousBranch { branches: series });
    }
    dense_series(field, &branches[0].f, n)
}

fn dense_series(field: GaloisField, f: &[FieldElement], n: u64) -> Result<TruncatedSeries> {
    Series::from_terms(
        field,
        f.iter().enumerate().map(|(i, c)| (i as u64, *c)),
        Some(n),
    )
}

/// `Σ_{e ∈ exps} c t^e` known below `n`.
pub fn indicator<E: Exponent>(
    c: FieldElement,
    exps: impl IntoIterator<Item = E>,
    n: Option<E>,
) -> Result<Series<E>> {
    Series::from_terms(c.field(), exps.into_iter().map(|e| (e, c)), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GaloisField {
        GaloisField::prime(2).unwrap()
    }

    fn t(field: GaloisField) -> TruncatedSeries {
        Series::monomial(field.one(), 1)
    }

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    fn x2_x_t() -> AlgebraicEquation {
        let one = f2().one();
        AlgebraicEquation::new(f2(), vec![(0, 2, one), (0, 1, one), (1, 0, one)]).unwrap()
    }

    #[test]
    fn subst_power_example() {
        let f = indicator(f2().one(), (0..10).map(|k| 1u64 << k), Some(1024)).unwrap();
        let g = f.subst_power(&q(2, 1), &q(1, 1)).unwrap();
        assert_eq!(
            g.support(),
            (0..10).map(|k| (1u64 << (k + 1)) + 1).collect::<Vec<_>>()
        );
        assert_eq!(g.precision(), Some(&2049));
        assert!(f.subst_power(&q(1, 2), &q(0, 1)).is_err());
    }

    #[test]
    fn scale_var_identity() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let f = indicator(f4.generator(), [1u64, 2, 5], Some(10)).unwrap();
        assert_eq!(f.scale_var(f4.one()).unwrap(), f);
        let w = f4.generator();
        let g = f.scale_var(w).unwrap();
        assert_eq!(g.coeff(&2), w * w * w);
    }

    #[test]
    fn product_precision() {
        let a = t(f2()).truncate(&10);
        let b = a.mul(&a).unwrap();
        assert_eq!(b.support(), vec![2]);
        assert_eq!(b.precision(), Some(&11));
    }

    #[test]
    fn as_power_of_t() {
        let g = as_power_pos(&t(f2()), &64).unwrap();
        assert_eq!(g.support(), vec![1, 2, 4, 8, 16, 32]);
        assert_eq!(g.precision(), Some(&64));
        let r = verify_algebraic(&g, &x2_x_t()).unwrap();
        assert!(r.vanishes_below(64));
        let zero = TruncatedSeries::zero(f2(), None);
        assert!(as_power_pos(&zero, &64).unwrap().is_zero());
    }

    #[test]
    fn as_power_of_inverse_t() {
        let f: GenSeries = Series::monomial(f2().one(), q(-1, 1));
        let g = as_power_neg(&f, &q(-1, 256)).unwrap();
        let exps: Vec<Q> = (1..=7).map(|k| q(-1, 1 << k)).collect();
        let mut expect = exps.clone();
        expect.sort();
        assert_eq!(g.support(), expect);
        let r = g.artin_schreier_residual(&f.neg()).unwrap();
        // G^2 - G = F, i.e. X^2 - X - F = X^2 + X + F over F_2
        assert!(r.is_zero());
        assert_eq!(g.gaps(), &[(q(-1, 256), q(0, 1))]);
    }

    #[test]
    fn as_subst_examples() {
        let s = as_subst(&t(f2()), &100).unwrap();
        assert_eq!(s, as_power_pos(&t(f2()), &100).unwrap());
        let f4 = GaloisField::new(2, 2).unwrap();
        let w = f4.generator();
        let wt: TruncatedSeries = Series::monomial(w, 1);
        let a = as_subst(&wt, &16).unwrap();
        let b = as_power_pos(&wt, &16).unwrap();
        assert_eq!(a.coeff(&2), w);
        assert_eq!(b.coeff(&2), w * w);
        assert_eq!(a.first_mismatch(&b), Some(2));
        assert!(as_subst(&TruncatedSeries::constant(f2().one()), &16).is_err());
    }

    #[test]
    fn artin_schreier_solutions() {
        let sols = solve_artin_schreier(&t(f2()), &128, &q(-1, 1)).unwrap();
        assert_eq!(sols.len(), 2);
        for g in &sols {
            let r = g.artin_schreier_residual(&t(f2())).unwrap();
            assert!(r.is_zero());
        }
        assert_eq!(sols[0].support(), vec![1, 2, 4, 8, 16, 32, 64]);
        let zero = TruncatedSeries::zero(f2(), None);
        let sols = solve_artin_schreier(&zero, &16, &q(-1, 1)).unwrap();
        assert_eq!(
            sols.iter().map(|g| g.coeff(&0)).collect::<Vec<_>>(),
            vec![f2().zero(), f2().one()]
        );
    }

    #[test]
    fn constant_needs_extension() {
        // a^2 + a = 1 has no root in F_2
        let f = TruncatedSeries::constant(f2().one());
        let sols = solve_artin_schreier(&f, &8, &q(-1, 1)).unwrap();
        assert_eq!(sols[0].field(), GaloisField::new(2, 2).unwrap());
        for g in &sols {
            assert!(g
                .artin_schreier_residual(&f.embed(g.field()).unwrap())
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn gap_sums() {
        let g = gap_sum(&t(f2()), 1, &256).unwrap();
        assert_eq!(g, as_power_pos(&t(f2()), &256).unwrap());
        let g = gap_sum(&t(f2()), 2, &256).unwrap();
        assert_eq!(g.support(), vec![1, 4, 16, 64]);
        let t3: TruncatedSeries = Series::monomial(f2().one(), 3);
        let g = gap_sum(&t3, 2, &256).unwrap();
        assert_eq!(g.support(), vec![3, 12, 48, 192]);
        let inv: GenSeries = Series::monomial(f2().one(), q(-1, 1));
        let g = gap_sum_neg(&inv, 2, &q(-1, 1000)).unwrap();
        assert_eq!(
            g.support(),
            vec![q(-1, 4), q(-1, 16), q(-1, 64), q(-1, 256)]
        );
    }

    #[test]
    fn verify_examples() {
        let f = indicator(f2().one(), (0..6).map(|k| 1u64 << k), Some(64)).unwrap();
        assert!(verify_algebraic(&f, &x2_x_t()).unwrap().vanishes_below(64));
        let one = f2().one();
        let eq = AlgebraicEquation::new(f2(), vec![(0, 2, one), (0, 1, one)]).unwrap();
        let r = verify_algebraic(&TruncatedSeries::zero(f2(), None), &eq).unwrap();
        assert_eq!(
            r,
            Residual {
                order: None,
                checked_below: None
            }
        );
        let r = verify_algebraic(&t(f2()), &x2_x_t()).unwrap();
        assert_eq!(r.order, Some(2));
    }

    #[test]
    fn coefficients_from_equation() {
        let f = equation_to_coeffs(&x2_x_t(), &[f2().zero()], 5).unwrap();
        assert_eq!(
            f.dense(5),
            [0, 1, 1, 0, 1].map(|x| f2().from_int(x)).to_vec()
        );
        let one = f2().one();
        let eq = AlgebraicEquation::new(f2(), vec![(0, 1, one), (1, 0, one)]).unwrap();
        assert_eq!(equation_to_coeffs(&eq, &[], 10).unwrap().support(), vec![1]);
        let g = equation_to_coeffs(&x2_x_t(), &[one], 40).unwrap();
        assert_eq!(g.support(), vec![0, 1, 2, 4, 8, 16, 32]);
        let amb = equation_to_coeffs(&x2_x_t(), &[], 8);
        assert!(matches!(amb, Err(Error::AmbiguousBranch { ref branches }) if branches.len() == 2));
    }
}
