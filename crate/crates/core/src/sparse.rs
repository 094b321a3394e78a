//! Sparseness of regular languages, decomposition into simple sparse
//! languages `v1 w1* v2 w2* ... v_{s+1}`, and the closed forms of the values
//! those languages denote.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::automaton::{Acceptor, DEFAULT_STATE_CAP};
use crate::digits::{digits_value, encode_nat, positional_value, radix, Word};
use crate::error::{Error, Result};
use crate::nfa::Nfa;

/// Default bound on the number of components a decomposition may produce.
pub const DEFAULT_COMPONENT_CAP: usize = 10_000;

/// `v1 w1* v2 w2* ... ws* v_{s+1}` over base `k`, with at most one radix
/// point, which must sit inside some `v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleSparseForm {
    base: u32,
    v: Vec<Word>,
    w: Vec<Word>,
}

impl SimpleSparseForm {
    pub fn new(base: u32, v: Vec<Word>, w: Vec<Word>) -> Result<Self> {
        if !(2..=64).contains(&base) {
            return Err(Error::InvalidArgument("base must lie in 2..=64"));
        }
        if v.len() != w.len() + 1 {
            return Err(Error::InvalidArgument(
                "a form has one more fixed word than cycle words",
            ));
        }
        let r = radix(base);
        for x in v.iter().chain(&w) {
            if let Some(&s) = x.iter().find(|&&s| s > r) {
                return Err(Error::InvalidDigit {
                    digit: s as u32,
                    base,
                });
            }
        }
        if w.iter().any(|x| x.is_empty()) {
            return Err(Error::InvalidArgument("cycle words must be nonempty"));
        }
        if w.iter().any(|x| x.contains(&r)) {
            return Err(Error::InvalidArgument(
                "a cycle word cannot contain the radix point",
            ));
        }
        let radices: usize = v
            .iter()
            .map(|x| x.iter().filter(|&&s| s == r).count())
            .sum();
        if radices > 1 {
            return Err(Error::InvalidArgument("more than one radix point"));
        }
        Ok(SimpleSparseForm { base, v, w })
    }

    /// A single word (`s = 0`).
    pub fn word(base: u32, v: Word) -> Result<Self> {
        Self::new(base, vec![v], Vec::new())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn fixed_words(&self) -> &[Word] {
        &self.v
    }

    pub fn cycle_words(&self) -> &[Word] {
        &self.w
    }

    /// Number of cycle words `s`.
    pub fn cycles(&self) -> usize {
        self.w.len()
    }

    pub fn periods(&self) -> Vec<u32> {
        self.w.iter().map(|x| x.len() as u32).collect()
    }

    /// `(j, i)`: the radix point is symbol `i` of `v_j` (0-based `j`).
    pub fn radix_position(&self) -> Option<(usize, usize)> {
        let r = radix(self.base);
        self.v
            .iter()
            .enumerate()
            .find_map(|(j, x)| x.iter().position(|&s| s == r).map(|i| (j, i)))
    }

    pub fn has_radix(&self) -> bool {
        self.radix_position().is_some()
    }

    /// The word with cycle `i` repeated `n[i]` times.
    pub fn pump(&self, n: &[u32]) -> Word {
        assert_eq!(n.len(), self.w.len(), "one index per cycle word");
        let mut out = self.v[0].clone();
        for i in 0..self.w.len() {
            for _ in 0..n[i] {
                out.extend_from_slice(&self.w[i]);
            }
            out.extend_from_slice(&self.v[i + 1]);
        }
        out
    }

    /// Positional value of the pumped word.
    pub fn decode(&self, n: &[u32]) -> BigRational {
        positional_value(&self.pump(n), self.base).expect("form words are well formed")
    }

    /// Length of the pumped word.
    pub fn pumped_len(&self, n: &[u32]) -> usize {
        self.v.iter().map(|x| x.len()).sum::<usize>()
            + self
                .w
                .iter()
                .zip(n)
                .map(|(x, &c)| x.len() * c as usize)
                .sum::<usize>()
    }

    /// Acceptor of the form's language over an alphabet of the given size.
    pub fn acceptor(&self, alphabet: usize) -> Result<Acceptor> {
        let mut nfa = Nfa::new(alphabet);
        let start = nfa.add_state(false);
        nfa.set_initial(start);
        let check = |s: u8| {
            if s as usize >= alphabet {
                Err(Error::SymbolOutOfAlphabet {
                    symbol: s as usize,
                    alphabet,
                })
            } else {
                Ok(())
            }
        };
        let mut q = start;
        for (i, v) in self.v.iter().enumerate() {
            if i > 0 {
                let w = &self.w[i - 1];
                let mut c = q;
                for (pos, &s) in w.iter().enumerate() {
                    check(s)?;
                    let t = if pos + 1 == w.len() {
                        q
                    } else {
                        nfa.add_state(false)
                    };
                    nfa.add_edge(c, s, t);
                    c = t;
                }
            }
            for &s in v {
                check(s)?;
                let t = nfa.add_state(false);
                nfa.add_edge(q, s, t);
                q = t;
            }
            // Each junction gets a fresh state so the next cycle cannot re-enter earlier ones.
            let t = nfa.add_state(false);
            nfa.add_epsilon(q, t);
            q = t;
        }
        nfa.set_accepting(q, true);
        Ok(nfa.determinize(DEFAULT_STATE_CAP)?.minimize())
    }

    /// All pumped words of length at most `max_len`, with their index tuples.
    pub fn words_up_to(&self, max_len: usize) -> Vec<(Vec<u32>, Word)> {
        let fixed: usize = self.v.iter().map(|x| x.len()).sum();
        let mut out = Vec::new();
        if fixed > max_len {
            return out;
        }
        let mut n = vec![0u32; self.w.len()];
        self.collect_words(0, max_len - fixed, &mut n, &mut out);
        out
    }

    fn collect_words(
        &self,
        i: usize,
        budget: usize,
        n: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Word)>,
    ) {
        if i == self.w.len() {
            out.push((n.clone(), self.pump(n)));
            return;
        }
        let len = self.w[i].len();
        let mut c = 0;
        while c * len <= budget {
            n[i] = c as u32;
            self.collect_words(i + 1, budget - c * len, n, out);
            c += 1;
        }
        n[i] = 0;
    }

    /// True when no pumped word starts with the digit zero.
    pub fn is_canonical_integer(&self) -> bool {
        if self.has_radix() {
            return false;
        }
        // The first symbol of a pumped word comes from v1, or from w1 when v1 is empty, and so on.
        for i in 0..self.v.len() {
            if let Some(&s) = self.v[i].first() {
                return s != 0 && self.w[..i].iter().all(|w| w[0] != 0);
            }
            if i < self.w.len() && self.w[i][0] == 0 {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for SimpleSparseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, x: &[u8]| -> fmt::Result {
            for &s in x {
                if s == radix(self.base) {
                    f.write_str(".")?;
                } else {
                    write!(f, "{}", char::from_digit(s as u32, 36).unwrap_or('?'))?;
                }
            }
            Ok(())
        };
        show(f, &self.v[0])?;
        for i in 0..self.w.len() {
            f.write_str("(")?;
            show(f, &self.w[i])?;
            f.write_str(")*")?;
            show(f, &self.v[i + 1])?;
        }
        Ok(())
    }
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn kpow(k: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(k));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Arithmetic shadow of a simple sparse form.
///
/// With `J` cycles before the radix point (all `s` of them for an integer
/// form) the value at `(n_1, ..., n_s)` is
///
/// `Σ_{i=0}^{J} c_i k^{δ_{J+1-i} n_{J+1-i} + ... + δ_J n_J}
///   + d_{J} + Σ_{l=J+1}^{s} d_l k^{-(δ_{J+1} n_{J+1} + ... + δ_l n_l)}`,
///
/// the `d` terms being absent for integer forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    base: u32,
    periods: Vec<u32>,
    pre_cycles: usize,
    c: Vec<BigRational>,
    d: Option<Vec<BigRational>>,
}

impl ClosedForm {
    pub fn base(&self) -> u32 {
        self.base
    }

    /// `δ_1..δ_s`.
    pub fn periods(&self) -> &[u32] {
        &self.periods
    }

    /// Number of cycles before the radix point.
    pub fn pre_cycles(&self) -> usize {
        self.pre_cycles
    }

    /// `c_0..c_J`.
    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    /// `d_J..d_s` for radix forms.
    pub fn d(&self) -> Option<&[BigRational]> {
        self.d.as_deref()
    }

    pub fn is_integer(&self) -> bool {
        self.d.is_none()
    }

    /// Builds a closed form from explicit coefficients.
    pub fn from_parts(
        base: u32,
        periods: Vec<u32>,
        pre_cycles: usize,
        c: Vec<BigRational>,
        d: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        if c.len() != pre_cycles + 1 || pre_cycles > periods.len() || periods.contains(&0) {
            return Err(Error::InvalidArgument("closed form shape"));
        }
        match &d {
            None if pre_cycles != periods.len() => {
                return Err(Error::InvalidArgument("closed form shape"))
            }
            Some(d) if d.len() != periods.len() - pre_cycles + 1 => {
                return Err(Error::InvalidArgument("closed form shape"))
            }
            _ => {}
        }
        Ok(ClosedForm {
            base,
            periods,
            pre_cycles,
            c,
            d,
        })
    }

    /// Exponent `δ_i n_i + ... + δ_J n_J` paired with `c_{J+1-i}` (1-based `i`).
    fn pre_exponents(&self, n: &[u32]) -> Vec<i64> {
        let j = self.pre_cycles;
        let mut e = vec![0i64; j + 1];
        for i in 1..=j {
            // c_i pairs with the cycles J+1-i ..= J
            e[i] = e[i - 1] + (self.periods[j - i] as i64) * n[j - i] as i64;
        }
        e
    }

    pub fn value(&self, n: &[u32]) -> BigRational {
        assert_eq!(n.len(), self.periods.len(), "one index per cycle");
        let e = self.pre_exponents(n);
        let mut acc = BigRational::zero();
        for (c, &ex) in self.c.iter().zip(&e) {
            acc += c * kpow(self.base, ex);
        }
        if let Some(d) = &self.d {
            acc += &d[0];
            let mut f = 0i64;
            for (i, dl) in d.iter().enumerate().skip(1) {
                let l = self.pre_cycles + i - 1;
                f += self.periods[l] as i64 * n[l] as i64;
                acc += dl * kpow(self.base, -f);
            }
        }
        acc
    }

    /// Scales every coefficient by `a` and shifts the constant by `b`.
    pub fn affine(&self, a: &BigRational, b: &BigRational) -> Self {
        let mut out = self.clone();
        for c in out.c.iter_mut() {
            *c = &*c * a;
        }
        match out.d.as_mut() {
            Some(d) => {
                for x in d.iter_mut() {
                    *x = &*x * a;
                }
                d[0] = &d[0] + b;
            }
            None => out.c[0] = &out.c[0] + b,
        }
        out
    }

    /// The exact well-ordering criterion: every post-radix coefficient
    /// `d_l` with `l > J` is nonpositive. Integer forms are always well ordered.
    pub fn is_well_ordered(&self) -> bool {
        match &self.d {
            None => true,
            Some(d) => d.iter().skip(1).all(|x| !x.is_positive()),
        }
    }
}

/// Integer-part coefficients of `v_1 w_1^* ... w_J^* v_{J+1}`.
fn integer_coefficients(k: u32, v: &[&[u8]], w: &[&[u8]]) -> Vec<BigRational> {
    let j = w.len();
    let a: Vec<BigRational> = v
        .iter()
        .map(|x| big(&digits_value(x, k).expect("digits")))
        .collect();
    let g: Vec<BigRational> = w
        .iter()
        .map(|x| {
            let b = big(&digits_value(x, k).expect("digits"));
            b / (kpow(k, x.len() as i64) - BigRational::one())
        })
        .collect();
    // m[i] = |v_i| + ... + |v_{J+1}| for 1-based i, m[J+2] = 0
    let mut m = vec![0i64; j + 3];
    for i in (1..=j + 1).rev() {
        m[i] = m[i + 1] + v[i - 1].len() as i64;
    }
    let mut c = vec![BigRational::zero(); j + 1];
    for i in 1..=j {
        let mut coeff = (&a[i - 1] + &g[i - 1]) * kpow(k, m[i + 1]);
        if i >= 2 {
            coeff -= &g[i - 2] * kpow(k, m[i]);
        }
        c[j + 1 - i] = coeff;
    }
    c[0] = a[j].clone();
    if j >= 1 {
        c[0] -= &g[j - 1] * kpow(k, m[j + 1]);
    }
    c
}

/// Coefficients `d_J..d_s` of `• v'' w_{J+1}^* v_{J+2} ... w_s^* v_{s+1}`.
fn fraction_coefficients(k: u32, head: &[u8], v: &[&[u8]], w: &[&[u8]]) -> Vec<BigRational> {
    let frac = |x: &[u8]| big(&digits_value(x, k).expect("digits")) * kpow(k, -(x.len() as i64));
    let r = w.len();
    let h: Vec<BigRational> = w
        .iter()
        .map(|x| {
            big(&digits_value(x, k).expect("digits"))
                / (kpow(k, x.len() as i64) - BigRational::one())
        })
        .collect();
    // offsets: l[0] = |head|, l[i] = l[i-1] + |v_i| (v here are the fixed words after each cycle)
    let mut l = vec![head.len() as i64; r + 1];
    for i in 1..=r {
        l[i] = l[i - 1] + v[i - 1].len() as i64;
    }
    let mut d = vec![BigRational::zero(); r + 1];
    d[0] = frac(head);
    if r >= 1 {
        d[0] += &h[0] * kpow(k, -l[0]);
    }
    for i in 1..=r {
        // cycle i (1-based among the post-radix cycles), followed by v[i-1]
        let mut x = (frac(v[i - 1]) - &h[i - 1]) * kpow(k, -l[i - 1]);
        if i < r {
            x += &h[i] * kpow(k, -l[i]);
        }
        d[i] = x;
    }
    d
}

/// The closed form of a simple sparse form.
pub fn closed_form(f: &SimpleSparseForm) -> ClosedForm {
    let k = f.base;
    let periods = f.periods();
    let s = f.cycles();
    match f.radix_position() {
        None => {
            let v: Vec<&[u8]> = f.v.iter().map(|x| x.as_slice()).collect();
            let w: Vec<&[u8]> = f.w.iter().map(|x| x.as_slice()).collect();
            ClosedForm {
                base: k,
                periods,
                pre_cycles: s,
                c: integer_coefficients(k, &v, &w),
                d: None,
            }
        }
        Some((j, i)) => {
            let mut v: Vec<&[u8]> = f.v[..j].iter().map(|x| x.as_slice()).collect();
            v.push(&f.v[j][..i]);
            let w: Vec<&[u8]> = f.w[..j].iter().map(|x| x.as_slice()).collect();
            let c = integer_coefficients(k, &v, &w);
            let head = &f.v[j][i + 1..];
            let tail_v: Vec<&[u8]> = f.v[j + 1..].iter().map(|x| x.as_slice()).collect();
            let tail_w: Vec<&[u8]> = f.w[j..].iter().map(|x| x.as_slice()).collect();
            let d = fraction_coefficients(k, head, &tail_v, &tail_w);
            ClosedForm {
                base: k,
                periods,
                pre_cycles: j,
                c,
                d: Some(d),
            }
        }
    }
}

/// Well-ordering of the set a form denotes (see [`ClosedForm::is_well_ordered`]).
pub fn is_well_ordered(f: &SimpleSparseForm) -> bool {
    !f.has_radix() || closed_form(f).is_well_ordered()
}

/// Distinct member values `<= bound` of a canonical integer form, ascending.
pub fn enumerate(f: &SimpleSparseForm, bound: &BigUint) -> Result<Vec<BigUint>> {
    if !f.is_canonical_integer() {
        return Err(Error::Precondition(
            "enumeration by value needs an integer form without leading zeros",
        ));
    }
    // Without leading zeros, a word longer than the bound's expansion exceeds it.
    let max_len = if bound.is_zero() {
        0
    } else {
        bound.to_radix_be(f.base).len()
    };
    let mut out: Vec<BigUint> = f
        .words_up_to(max_len)
        .into_iter()
        .map(|(_, w)| digits_value(&w, f.base).expect("digits"))
        .filter(|x| x <= bound)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Distinct values of pumped words of length `<= max_len` that are `<= bound`.
pub fn enumerate_window(
    f: &SimpleSparseForm,
    bound: &BigRational,
    max_len: usize,
) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = f
        .words_up_to(max_len)
        .into_iter()
        .map(|(_, w)| positional_value(&w, f.base).expect("form words are well formed"))
        .filter(|x| x <= bound)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A pumping witness `u {a, b}* v ⊆ L` with `a != b` and `|a| = |b|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpWitness {
    pub u: Word,
    pub a: Word,
    pub b: Word,
    pub v: Word,
}

impl PumpWitness {
    /// The word `u x_1 ... x_j v` where `x_i = a` or `b` by the bits of `choice`.
    pub fn word(&self, choice: &[bool]) -> Word {
        let mut w = self.u.clone();
        for &c in choice {
            w.extend_from_slice(if c { &self.b } else { &self.a });
        }
        w.extend_from_slice(&self.v);
        w
    }

    /// `β = 1 / |a|`.
    pub fn beta(&self) -> f64 {
        1.0 / self.a.len() as f64
    }

    /// Length offset `n0` with `f_L(n) >= 2^{β (n - n0)}` for all `n >= n0`.
    pub fn offset(&self) -> usize {
        self.u.len() + self.v.len() + self.a.len() - 1
    }

    /// The guaranteed exponent `floor((n - |u| - |v|) / |a|)` of the lower bound on `f_L(n)`.
    pub fn guaranteed_log2(&self, n: usize) -> Option<usize> {
        let fixed = self.u.len() + self.v.len();
        (n >= fixed).then(|| (n - fixed) / self.a.len())
    }
}

/// Result of the sparseness test.
#[derive(Clone, Debug, PartialEq)]
pub enum SparsenessVerdict {
    Sparse {
        components: Vec<SimpleSparseForm>,
        degree: usize,
    },
    NonSparse {
        witness: PumpWitness,
        alpha: f64,
    },
}

impl SparsenessVerdict {
    pub fn is_sparse(&self) -> bool {
        matches!(self, SparsenessVerdict::Sparse { .. })
    }
}

/// Growth class of a support set.
#[derive(Clone, Debug, PartialEq)]
pub enum Growth {
    /// `f_L(n) = O(n^degree)`.
    Sparse { degree: usize },
    /// Least-squares exponent of `log π_S(x)` against `log x`.
    NonSparse { alpha: f64 },
}

/// Trimmed MSD graph of an acceptor with its strongly connected components.
pub(crate) struct Structure {
    pub dfa: Acceptor,
    pub live: Vec<bool>,
    /// Component id per live state, numbered in topological order.
    pub scc: Vec<usize>,
    pub cyclic: Vec<bool>,
    pub count: usize,
}

impl Structure {
    pub fn new(acceptor: &Acceptor) -> Result<Self> {
        let dfa = acceptor.to_msd()?.minimize();
        let live = dfa.live_states();
        let n = dfa.num_states();
        let k = dfa.alphabet();
        // Kosaraju: finishing order on the graph, then components on the reverse graph.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in (0..n).filter(|&q| live[q]) {
            for s in 0..k as u8 {
                let t = dfa.step(q, s);
                if live[t] {
                    rev[t].push(q);
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in (0..n).filter(|&q| live[q]) {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0u16)];
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                if (*next as usize) < k {
                    let t = dfa.step(q, *next as u8);
                    *next += 1;
                    if live[t] && !seen[t] {
                        seen[t] = true;
                        stack.push((t, 0));
                    }
                } else {
                    order.push(q);
                    stack.pop();
                }
            }
        }
        let mut scc = vec![usize::MAX; n];
        let mut count = 0;
        for &root in order.iter().rev() {
            if scc[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            scc[root] = count;
            while let Some(q) = stack.pop() {
                for &r in &rev[q] {
                    if scc[r] == usize::MAX {
                        scc[r] = count;
                        stack.push(r);
                    }
                }
            }
            count += 1;
        }
        let mut cyclic = vec![false; count];
        for q in (0..n).filter(|&q| live[q]) {
            for s in 0..k as u8 {
                let t = dfa.step(q, s);
                if live[t] && scc[t] == scc[q] {
                    cyclic[scc[q]] = true;
                }
            }
        }
        Ok(Structure {
            dfa,
            live,
            scc,
            cyclic,
            count,
        })
    }

    fn internal_edges(&self, q: usize) -> Vec<(u8, usize)> {
        (0..self.dfa.alphabet() as u8)
            .map(|s| (s, self.dfa.step(q, s)))
            .filter(|&(_, t)| self.live[t] && self.scc[t] == self.scc[q])
            .collect()
    }

    /// Shortest word from `from` to `to` using only states accepted by `allowed`.
    fn path(
        &self,
        from: usize,
        to: impl Fn(usize) -> bool,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Word> {
        let n = self.dfa.num_states();
        let mut prev: Vec<Option<(usize, u8)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = alloc::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            if to(q) {
                let mut w = Vec::new();
                let mut c = q;
                while let Some((p, s)) = prev[c] {
                    w.push(s);
                    c = p;
                }
                w.reverse();
                return Some(w);
            }
            for s in 0..self.dfa.alphabet() as u8 {
                let t = self.dfa.step(q, s);
                if self.live[t] && allowed(t) && !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((q, s));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A state with two internal edges, if any, turned into a pump witness.
    fn witness(&self) -> Option<PumpWitness> {
        let n = self.dfa.num_states();
        for q in (0..n).filter(|&q| self.live[q]) {
            let edges = self.internal_edges(q);
            if edges.len() < 2 {
                continue;
            }
            let c = self.scc[q];
            let back = |start: usize| {
                self.path(start, |x| x == q, |x| self.scc[x] == c)
                    .expect("same component")
            };
            let (s1, t1) = edges[0];
            let (s2, t2) = edges[1];
            let mut c1 = vec![s1];
            c1.extend(back(t1));
            let mut c2 = vec![s2];
            c2.extend(back(t2));
            let mut a = c1.clone();
            a.extend_from_slice(&c2);
            let mut b = c2;
            b.extend_from_slice(&c1);
            let u = self
                .path(self.dfa.initial(), |x| x == q, |_| true)
                .expect("accessible");
            let v = self
                .path(q, |x| *self.dfa.output(x), |_| true)
                .expect("co-accessible");
            return Some(PumpWitness { u, a, b, v });
        }
        None
    }

    /// Maximum number of cyclic components on a path from the initial state
    /// to an accepting state.
    fn degree(&self) -> usize {
        if !self.live[self.dfa.initial()] {
            return 0;
        }
        let n = self.dfa.num_states();
        let mut best: Vec<Option<usize>> = vec![None; self.count];
        let init = self.scc[self.dfa.initial()];
        best[init] = Some(self.cyclic[init] as usize);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.count];
        for q in (0..n).filter(|&q| self.live[q]) {
            members[self.scc[q]].push(q);
        }
        let mut degree = 0;
        for c in 0..self.count {
            let Some(here) = best[c] else { continue };
            for &q in &members[c] {
                if *self.dfa.output(q) {
                    degree = degree.max(here);
                }
                for s in 0..self.dfa.alphabet() as u8 {
                    let t = self.dfa.step(q, s);
                    if self.live[t] && self.scc[t] != c {
                        let d = self.scc[t];
                        let cand = here + self.cyclic[d] as usize;
                        if best[d].is_none_or(|b| b < cand) {
                            best[d] = Some(cand);
                        }
                    }
                }
            }
        }
        degree
    }

    fn decompose(&self, base: u32, cap: usize) -> Result<Vec<SimpleSparseForm>> {
        let mut out = Vec::new();
        if self.live[self.dfa.initial()] {
            self.visit(
                self.dfa.initial(),
                Vec::new(),
                &mut Vec::new(),
                &mut Vec::new(),
                base,
                cap,
                &mut out,
            )?;
        }
        Ok(merge_components(out))
    }

    #[allow(clippy::too_many_arguments)]
    fn visit(
        &self,
        q: usize,
        cur: Word,
        vs: &mut Vec<Word>,
        ws: &mut Vec<Word>,
        base: u32,
        cap: usize,
        out: &mut Vec<SimpleSparseForm>,
    ) -> Result<()> {
        let k = self.dfa.alphabet() as u8;
        let emit = |vs: &Vec<Word>,
                    last: Word,
                    ws: &Vec<Word>,
                    out: &mut Vec<SimpleSparseForm>|
         -> Result<()> {
            if out.len() >= cap {
                return Err(Error::ComponentCapExceeded { cap });
            }
            let mut v = vs.clone();
            v.push(last);
            out.push(SimpleSparseForm::new(base, v, ws.clone())?);
            Ok(())
        };
        if !self.cyclic[self.scc[q]] {
            if *self.dfa.output(q) {
                emit(vs, cur.clone(), ws, out)?;
            }
            for s in 0..k {
                let t = self.dfa.step(q, s);
                if self.live[t] {
                    let mut next = cur.clone();
                    next.push(s);
                    self.visit(t, next, vs, ws, base, cap, out)?;
                }
            }
            return Ok(());
        }
        // A simple cycle entered at q.
        let mut word = Vec::new();
        let mut states = vec![q];
        loop {
            let x = *states.last().expect("nonempty");
            let (s, t) = self.internal_edges(x)[0];
            word.push(s);
            if t == q {
                break;
            }
            states.push(t);
        }
        vs.push(cur);
        ws.push(word.clone());
        for (i, &x) in states.iter().enumerate() {
            let partial = word[..i].to_vec();
            if *self.dfa.output(x) {
                emit(vs, partial.clone(), ws, out)?;
            }
            for s in 0..k {
                let t = self.dfa.step(x, s);
                if self.live[t] && self.scc[t] != self.scc[q] {
                    let mut next = partial.clone();
                    next.push(s);
                    self.visit(t, next, vs, ws, base, cap, out)?;
                }
            }
        }
        vs.pop();
        ws.pop();
        Ok(())
    }
}

/// Folds pairs `pre x z` and `pre x w (w)* z` into `pre x (w)* z` until
/// none is left. The union of such a pair is exactly the folded form and
/// both were disjoint from every other component, so disjointness survives.
fn merge_components(mut forms: Vec<SimpleSparseForm>) -> Vec<SimpleSparseForm> {
    'outer: loop {
        for i in 0..forms.len() {
            for j in 0..forms.len() {
                if i == j {
                    continue;
                }
                if let Some(merged) = try_merge(&forms[i], &forms[j]) {
                    forms[i] = merged;
                    forms.remove(j);
                    continue 'outer;
                }
            }
        }
        return forms;
    }
}

fn try_merge(p: &SimpleSparseForm, q: &SimpleSparseForm) -> Option<SimpleSparseForm> {
    let s = p.cycles();
    if q.cycles() != s + 1 || p.base != q.base || q.w[..s] != p.w[..] || q.v[..s] != p.v[..s] {
        return None;
    }
    let z = &q.v[s + 1];
    let tail = &p.v[s];
    if !tail.ends_with(z) {
        return None;
    }
    let x = &tail[..tail.len() - z.len()];
    let w = &q.w[s];
    if q.v[s].len() != x.len() + w.len() || &q.v[s][..x.len()] != x || q.v[s][x.len()..] != w[..] {
        return None;
    }
    let mut v = p.v[..s].to_vec();
    v.push(x.to_vec());
    v.push(z.clone());
    let mut ws = p.w.clone();
    ws.push(w.clone());
    SimpleSparseForm::new(p.base, v, ws).ok()
}

/// Least-squares slope of `ln y` against `ln x` over the given points.
fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        libm::log(x.to_f64().unwrap_or(f64::MAX))
    } else {
        let shift = bits - 900;
        libm::log((x >> shift).to_f64().unwrap_or(f64::MAX))
            + shift as f64 * core::f64::consts::LN_2
    }
}

/// Number of length steps used by the growth fit.
pub const GROWTH_FIT_LENGTH: usize = 20;

/// Least-squares `α̂` with `π_S(k^n) ≈ (k^n)^α̂`, `n = 1..=20`, where
/// `π_S(k^n) = f_L(n) + [k^n ∈ S]` for canonical base-`k` encodings.
pub fn growth_exponent(acceptor: &Acceptor, base: u32) -> f64 {
    let table = acceptor.census_table(GROWTH_FIT_LENGTH);
    let digits_only = acceptor.alphabet() == base as usize;
    let mut points = Vec::new();
    for n in 1..=GROWTH_FIT_LENGTH {
        let mut count = table[n].clone();
        if digits_only {
            let mut top = encode_nat(1, base);
            top.extend(core::iter::repeat_n(0, n));
            if acceptor.accepts(&top) {
                count += 1u32;
            }
        }
        if count.is_zero() {
            continue;
        }
        points.push((n as f64 * libm::log(base as f64), ln_big(&count)));
    }
    if points.len() < 2 {
        return 0.0;
    }
    fit_slope(&points)
}

/// Sparseness verdict with decomposition for a sparse language. The base is
/// taken to be the alphabet size (digit alphabets); see [`is_sparse_in_base`].
pub fn is_sparse(acceptor: &Acceptor) -> Result<SparsenessVerdict> {
    is_sparse_in_base(acceptor, acceptor.alphabet() as u32, DEFAULT_COMPONENT_CAP)
}

/// Sparseness verdict for an acceptor over base-`base` digits, optionally
/// with the radix symbol `base`.
pub fn is_sparse_in_base(acceptor: &Acceptor, base: u32, cap: usize) -> Result<SparsenessVerdict> {
    let st = Structure::new(acceptor)?;
    if let Some(witness) = st.witness() {
        let alpha = growth_exponent(&st.dfa, base);
        return Ok(SparsenessVerdict::NonSparse { witness, alpha });
    }
    let components = st.decompose(base, cap)?;
    Ok(SparsenessVerdict::Sparse {
        components,
        degree: st.degree(),
    })
}

/// Decomposition of a sparse language into pairwise disjoint simple sparse forms.
///
/// Runs of a deterministic automaton are unique, and each component is the
/// set of words whose run follows one fixed route through the component
/// graph, so the components are disjoint by construction.
pub fn decompose(acceptor: &Acceptor, base: u32, cap: usize) -> Result<Vec<SimpleSparseForm>> {
    let st = Structure::new(acceptor)?;
    if st.witness().is_some() {
        return Err(Error::NotSparse);
    }
    st.decompose(base, cap)
}

/// `d` for sparse languages, `α̂` otherwise.
pub fn classify_growth(acceptor: &Acceptor, base: u32) -> Result<Growth> {
    let st = Structure::new(acceptor)?;
    if st.witness().is_some() {
        Ok(Growth::NonSparse {
            alpha: growth_exponent(&st.dfa, base),
        })
    } else {
        Ok(Growth::Sparse {
            degree: st.degree(),
        })
    }
}

/// Dichotomy bounds checked on the census up to length `n_max`.
#[derive(Clone, Debug, PartialEq)]
pub enum DichotomyCheck {
    /// `f_L(n) <= C n^d` for `1 <= n <= n_max`, with the fitted constant and
    /// the structural constant `P 2^d` (P = number of components).
    Polynomial {
        degree: usize,
        fitted: f64,
        structural: BigUint,
        holds: bool,
    },
    /// `f_L(n) >= 2^{β (n - n0)}` for `n0 <= n <= n_max`.
    Exponential {
        beta: f64,
        offset: usize,
        holds: bool,
    },
}

impl DichotomyCheck {
    pub fn holds(&self) -> bool {
        match self {
            DichotomyCheck::Polynomial { holds, .. }
            | DichotomyCheck::Exponential { holds, .. } => *holds,
        }
    }
}

/// Checks the census against the bound the verdict predicts.
pub fn check_dichotomy(
    acceptor: &Acceptor,
    verdict: &SparsenessVerdict,
    n_max: usize,
) -> DichotomyCheck {
    let table = acceptor.census_table(n_max);
    match verdict {
        SparsenessVerdict::Sparse { components, degree } => {
            let d = *degree;
            let structural = BigUint::from(components.len()) * BigUint::from(2u32).pow(d as u32);
            let mut fitted: f64 = 0.0;
            let mut holds = true;
            for n in 1..=n_max {
                let nd = BigUint::from(n).pow(d as u32);
                if table[n] > &structural * &nd {
                    holds = false;
                }
                let ratio = table[n].to_f64().unwrap_or(f64::INFINITY)
                    / nd.to_f64().unwrap_or(f64::INFINITY);
                fitted = fitted.max(ratio);
            }
            DichotomyCheck::Polynomial {
                degree: d,
                fitted,
                structural,
                holds,
            }
        }
        SparsenessVerdict::NonSparse { witness, .. } => {
            let mut holds = true;
            for n in 0..=n_max {
                if let Some(e) = witness.guaranteed_log2(n) {
                    if table[n] < BigUint::one() << e {
                        holds = false;
                    }
                }
            }
            DichotomyCheck::Exponential {
                beta: witness.beta(),
                offset: witness.offset(),
                holds,
            }
        }
    }
}

/// Renders rationals as `num/den` strings.
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        alloc::format!("{}", x.numer())
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Dfao, Direction};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn form(base: u32, v: &[&[u8]], w: &[&[u8]]) -> SimpleSparseForm {
        SimpleSparseForm::new(
            base,
            v.iter().map(|x| x.to_vec()).collect(),
            w.iter().map(|x| x.to_vec()).collect(),
        )
        .unwrap()
    }

    fn one_zero_star() -> Acceptor {
        Dfao::new(
            2,
            vec![vec![2, 1], vec![1, 2], vec![2, 2]],
            0,
            vec![false, true, false],
            Direction::Msd,
        )
        .unwrap()
    }

    #[test]
    fn closed_forms_of_examples() {
        let f = closed_form(&form(2, &[&[1], &[]], &[&[0]]));
        assert_eq!(f.c(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(f.periods(), &[1]);
        let f = closed_form(&form(2, &[&[1], &[]], &[&[1]]));
        assert_eq!(f.c(), &[rat(-1, 1), rat(2, 1)]);
        let f = closed_form(&form(2, &[&[1], &[1]], &[&[0]]));
        assert_eq!(f.c(), &[rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn radix_closed_forms() {
        let r = 2u8;
        // .1 1*  -> 1 - 2^{-n-1}
        let f = closed_form(&form(2, &[&[r, 1], &[]], &[&[1]]));
        assert_eq!(f.d().unwrap(), &[rat(1, 1), rat(-1, 2)]);
        assert!(f.is_well_ordered());
        // . 0* 1 -> 2^{-n-1}
        let f = closed_form(&form(2, &[&[r], &[1]], &[&[0]]));
        assert_eq!(f.d().unwrap(), &[rat(0, 1), rat(1, 2)]);
        assert!(!f.is_well_ordered());
    }

    #[test]
    fn value_matches_decode_mixed() {
        let r = 3u8;
        let f = form(3, &[&[2], &[1, r, 2], &[0, 1]], &[&[1, 0], &[2]]);
        let c = closed_form(&f);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(c.value(&[a, b]), f.decode(&[a, b]));
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let f = form(2, &[&[1], &[]], &[&[0]]);
        let e = enumerate(&f, &BigUint::from(20u32)).unwrap();
        assert_eq!(e, [1u32, 2, 4, 8, 16].map(BigUint::from).to_vec());
        let f = SimpleSparseForm::word(2, vec![1, 0, 1]).unwrap();
        assert_eq!(
            enumerate(&f, &BigUint::from(20u32)).unwrap(),
            vec![BigUint::from(5u32)]
        );
        let f = form(2, &[&[1], &[1]], &[&[0]]);
        let e = enumerate(&f, &BigUint::from(20u32)).unwrap();
        assert_eq!(e, [3u32, 5, 9, 17].map(BigUint::from).to_vec());
    }

    #[test]
    fn sparse_examples() {
        match is_sparse(&one_zero_star()).unwrap() {
            SparsenessVerdict::Sparse { components, degree } => {
                assert_eq!(components.len(), 1);
                assert_eq!(degree, 1);
                assert_eq!(components[0], form(2, &[&[1], &[]], &[&[0]]));
            }
            v => panic!("{:?}", v),
        }
        match is_sparse(&Acceptor::empty(2)).unwrap() {
            SparsenessVerdict::Sparse { components, degree } => {
                assert!(components.is_empty());
                assert_eq!(degree, 0);
            }
            v => panic!("{:?}", v),
        }
    }

    #[test]
    fn thue_morse_support_is_not_sparse() {
        let tm = Dfao::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            0,
            vec![false, true],
            Direction::Lsd,
        )
        .unwrap();
        let support = tm
            .to_msd()
            .unwrap()
            .intersect(&Acceptor::canonical_naturals(2))
            .unwrap();
        match is_sparse(&support).unwrap() {
            SparsenessVerdict::NonSparse { witness, alpha } => {
                assert_ne!(witness.a, witness.b);
                assert_eq!(witness.a.len(), witness.b.len());
                for bits in 0..16u32 {
                    let choice: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
                    assert!(support.accepts(&witness.word(&choice)));
                }
                assert!((0.9..=1.0).contains(&alpha), "alpha = {}", alpha);
            }
            v => panic!("{:?}", v),
        }
    }

    #[test]
    fn decompositions() {
        let a = form(2, &[&[1], &[1]], &[&[0]]).acceptor(2).unwrap();
        assert_eq!(
            decompose(&a, 2, 100).unwrap(),
            vec![form(2, &[&[1], &[1]], &[&[0]])]
        );
        let a = Acceptor::from_words(2, &[vec![1u8, 0, 1]]).unwrap();
        assert_eq!(
            decompose(&a, 2, 100).unwrap(),
            vec![SimpleSparseForm::word(2, vec![1, 0, 1]).unwrap()]
        );
        let u = form(2, &[&[1], &[]], &[&[0]])
            .acceptor(2)
            .unwrap()
            .union(&form(2, &[&[1, 1], &[]], &[&[1]]).acceptor(2).unwrap())
            .unwrap();
        let parts = decompose(&u, 2, 100).unwrap();
        assert_eq!(parts.len(), 2);
        let accs: Vec<Acceptor> = parts.iter().map(|p| p.acceptor(2).unwrap()).collect();
        assert!(accs[0].intersect(&accs[1]).unwrap().is_empty());
        assert!(accs[0].union(&accs[1]).unwrap().equivalent(&u).unwrap());
    }

    #[test]
    fn degrees() {
        let a = form(2, &[&[1], &[1], &[]], &[&[0], &[0]])
            .acceptor(2)
            .unwrap();
        assert_eq!(
            classify_growth(&a, 2).unwrap(),
            Growth::Sparse { degree: 2 }
        );
        assert_eq!(
            classify_growth(&one_zero_star(), 2).unwrap(),
            Growth::Sparse { degree: 1 }
        );
    }

    #[test]
    fn affine_shift() {
        let f = closed_form(&form(2, &[&[1], &[]], &[&[0]]));
        let g = f.affine(&rat(2, 1), &rat(1, 1));
        for n in 0..6 {
            assert_eq!(g.value(&[n]), rat((1 << (n + 1)) + 1, 1));
        }
    }
}
