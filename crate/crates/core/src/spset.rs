//! Automatic subsets of `S_p` given by acceptors of valid expansions, with
//! union, Minkowski sum, affine images, splitting at a bound and the
//! `p`-power spreads `⋃ (T - b) p^n + b`.
//!
//! Arithmetic on sets is done by one digit automaton: the relation
//! `a x + y = z` on radix-aligned, zero-padded expansions, read most
//! significant column first with a guessed incoming carry, and projected
//! onto whichever of the three tracks is the output.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::automaton::{Acceptor, DEFAULT_STATE_CAP};
use crate::digits::{encode_nat_big, encode_sp, positional_value, radix, SpRational, Word};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::nfa::Nfa;
use crate::sparse::{
    is_sparse_in_base, ClosedForm, SimpleSparseForm, SparsenessVerdict, DEFAULT_COMPONENT_CAP,
};

/// A cached property: known true, known false, or undetermined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    Yes,
    No,
    Unknown,
}

impl Flag {
    pub fn is_yes(self) -> bool {
        self == Flag::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::Unknown => "unknown",
        }
    }
}

/// A `p`-automatic subset of `S_p`.
#[derive(Clone, Debug)]
pub struct SpSet {
    p: u32,
    acceptor: Acceptor,
    sparse: Flag,
    well_ordered: Flag,
}

impl PartialEq for SpSet {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.acceptor == other.acceptor
    }
}

fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p) || p > 64 {
        return Err(Error::InvalidArgument("S_p sets need a prime base p <= 64"));
    }
    Ok(())
}

impl SpSet {
    /// The set of values of the valid expansions an acceptor accepts; words
    /// outside `E_p` are discarded.
    pub fn from_acceptor(p: u32, acceptor: &Acceptor) -> Result<Self> {
        Self::with_cap(p, acceptor, DEFAULT_COMPONENT_CAP)
    }

    pub fn with_cap(p: u32, acceptor: &Acceptor, cap: usize) -> Result<Self> {
        check_prime(p)?;
        if acceptor.alphabet() != p as usize + 1 {
            return Err(Error::AlphabetMismatch);
        }
        let acceptor = acceptor
            .to_msd()?
            .intersect(&Acceptor::valid_expansions(p))?;
        let (sparse, well_ordered) = analyze(p, &acceptor, cap)?;
        Ok(SpSet {
            p,
            acceptor,
            sparse,
            well_ordered,
        })
    }

    pub fn empty(p: u32) -> Result<Self> {
        Self::from_acceptor(p, &Acceptor::empty(p as usize + 1))
    }

    /// A finite set.
    pub fn from_values(p: u32, values: &[SpRational]) -> Result<Self> {
        check_prime(p)?;
        let mut words = Vec::new();
        for x in values {
            if x.base() != p {
                return Err(Error::InvalidArgument("value in a different base"));
            }
            words.push(encode_sp(x).into_symbols());
        }
        Self::from_acceptor(p, &Acceptor::from_words(p as usize + 1, &words)?)
    }

    pub fn singleton(p: u32, x: &SpRational) -> Result<Self> {
        Self::from_values(p, core::slice::from_ref(x))
    }

    /// The natural numbers accepted by a digit acceptor (canonical encodings).
    pub fn from_naturals(p: u32, acceptor: &Acceptor) -> Result<Self> {
        check_prime(p)?;
        if acceptor.alphabet() != p as usize {
            return Err(Error::AlphabetMismatch);
        }
        let msd = acceptor
            .to_msd()?
            .intersect(&Acceptor::canonical_naturals(p))?;
        let mut nfa = Nfa::new(p as usize + 1);
        for _ in 0..msd.num_states() {
            nfa.add_state(false);
        }
        let end = nfa.add_state(true);
        for q in 0..msd.num_states() {
            for s in 0..p as u8 {
                nfa.add_edge(q, s, msd.step(q, s));
            }
            if *msd.output(q) {
                nfa.add_edge(q, radix(p), end);
            }
        }
        nfa.set_initial(msd.initial());
        Self::from_acceptor(p, &nfa.determinize(DEFAULT_STATE_CAP)?)
    }

    /// Union of the languages of some simple sparse forms over `{0..p-1, radix}`.
    pub fn from_forms(p: u32, forms: &[SimpleSparseForm]) -> Result<Self> {
        check_prime(p)?;
        let mut acc = Acceptor::empty(p as usize + 1);
        for f in forms {
            if f.base() != p {
                return Err(Error::InvalidArgument("form in a different base"));
            }
            acc = acc.union(&f.acceptor(p as usize + 1)?)?;
        }
        Self::from_acceptor(p, &acc)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn acceptor(&self) -> &Acceptor {
        &self.acceptor
    }

    pub fn sparse(&self) -> Flag {
        self.sparse
    }

    pub fn well_ordered(&self) -> Flag {
        self.well_ordered
    }

    pub fn is_empty(&self) -> bool {
        self.acceptor.is_empty()
    }

    pub fn contains(&self, x: &SpRational) -> bool {
        x.base() == self.p && self.acceptor.accepts(encode_sp(x).symbols())
    }

    pub fn contains_ratio(&self, x: &BigRational) -> bool {
        SpRational::from_ratio(self.p, x)
            .map(|x| self.contains(&x))
            .unwrap_or(false)
    }

    /// Simple sparse components of a sparse set.
    pub fn components(&self) -> Result<Vec<SimpleSparseForm>> {
        crate::sparse::decompose(&self.acceptor, self.p, DEFAULT_COMPONENT_CAP)
    }

    pub fn verdict(&self) -> Result<SparsenessVerdict> {
        is_sparse_in_base(&self.acceptor, self.p, DEFAULT_COMPONENT_CAP)
    }

    /// Members `<= bound` with at most `max_frac` fractional digits, ascending.
    pub fn window(&self, bound: &BigRational, max_frac: usize) -> Vec<BigRational> {
        let int_len = if bound.is_negative() {
            return Vec::new();
        } else {
            encode_nat_big(
                &bound
                    .floor()
                    .to_integer()
                    .to_biguint()
                    .expect("nonnegative"),
                self.p,
            )
            .len()
        };
        let r = radix(self.p);
        let live = self.acceptor.live_states();
        let mut out = Vec::new();
        // Depth-first over prefixes, tracking whether the radix was read.
        let mut stack: Vec<(usize, Word, Option<usize>)> =
            vec![(self.acceptor.initial(), Vec::new(), None)];
        while let Some((q, w, radix_at)) = stack.pop() {
            if *self.acceptor.output(q) {
                let x = positional_value(&w, self.p).expect("valid");
                if &x <= bound {
                    out.push(x);
                }
            }
            for s in 0..=r {
                let t = self.acceptor.step(q, s);
                if !live[t] {
                    continue;
                }
                let len_ok = match radix_at {
                    None => s == r || w.len() < int_len,
                    Some(at) => s != r && w.len() - at <= max_frac,
                };
                if len_ok {
                    let mut x = w.clone();
                    x.push(s);
                    let at = if s == r { Some(w.len()) } else { radix_at };
                    stack.push((t, x, at));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn derived(&self, acceptor: &Acceptor) -> Result<Self> {
        Self::from_acceptor(self.p, acceptor)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        self.derived(&self.acceptor.union(&other.acceptor)?)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        self.derived(&self.acceptor.intersect(&other.acceptor)?)
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidArgument("sets over different bases"));
        }
        Ok(())
    }

    /// `S + T`; both operands must be known to be well ordered.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        if !self.well_ordered.is_yes() || !other.well_ordered.is_yes() {
            return Err(Error::Precondition(
                "Minkowski sum needs well-ordered operands",
            ));
        }
        self.sum_unchecked(other)
    }

    /// `S + T` without the well-ordering precondition.
    pub fn sum_unchecked(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let acc = linear_relation(
            self.p,
            1,
            [
                Track::Machine(&self.acceptor),
                Track::Machine(&other.acceptor),
                Track::Output,
            ],
            DEFAULT_STATE_CAP,
        )?;
        self.derived(&acc)
    }

    /// `{ t - s : s in S, t in T, t >= s }` for `S = self`.
    pub fn differences_to(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let acc = linear_relation(
            self.p,
            1,
            [
                Track::Machine(&self.acceptor),
                Track::Output,
                Track::Machine(&other.acceptor),
            ],
            DEFAULT_STATE_CAP,
        )?;
        self.derived(&acc)
    }

    /// `{ a x + b : x in S }` for natural `a >= 1` and `b`, at the acceptor level.
    pub fn affine_nat(&self, a: u32, b: &SpRational) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("multiplier must be positive"));
        }
        let shift = SpSet::singleton(self.p, b)?;
        let acc = linear_relation(
            self.p,
            a,
            [
                Track::Machine(&self.acceptor),
                Track::Machine(&shift.acceptor),
                Track::Output,
            ],
            DEFAULT_STATE_CAP,
        )?;
        self.derived(&acc)
    }

    /// `(S ∩ [0, b), S ∩ (b, ∞))`; `b` itself belongs to neither part.
    pub fn split(&self, b: &BigUint) -> Result<(Self, Self)> {
        let cls = interval_classifier(self.p, b);
        let below = cls.map_outputs(|&c| c == Side::Below);
        let above = cls.map_outputs(|&c| c == Side::AboveInt || c == Side::EqualIntWithFraction);
        Ok((
            self.derived(&self.acceptor.intersect(&below)?)?,
            self.derived(&self.acceptor.intersect(&above)?)?,
        ))
    }

    fn check_spread_input(&self) -> Result<()> {
        if !self.sparse.is_yes() || !self.well_ordered.is_yes() {
            return Err(Error::Precondition(
                "spread needs a sparse well-ordered set",
            ));
        }
        Ok(())
    }

    /// `⋃_{n >= 0} ((T - b) p^n + b)` for `T ⊆ (b, ∞)` sparse and well ordered.
    pub fn spread_up(&self, b: &BigUint) -> Result<Self> {
        self.check_spread_input()?;
        let (below, above) = self.split(b)?;
        let bset = SpSet::singleton(self.p, &SpRational::new(self.p, b.clone(), 0)?)?;
        if !below.is_empty()
            || self.contains_ratio(&BigRational::from_integer(BigInt::from(b.clone())))
        {
            return Err(Error::Precondition("spread_up needs T ⊆ (b, ∞)"));
        }
        let shifted = bset.differences_to(&above)?;
        let spread = self.derived(&radix_right_shifts(self.p, &shifted.acceptor)?)?;
        spread.sum_unchecked(&bset)
    }

    /// `⋃_{n >= 1} ((U - b) p^{-n} + b)` for `U ⊆ [0, b)` sparse and well ordered.
    pub fn spread_down(&self, b: &BigUint) -> Result<Self> {
        self.check_spread_input()?;
        let (below, _) = self.split(b)?;
        if !below.acceptor.equivalent(&self.acceptor)? {
            return Err(Error::Precondition("spread_down needs U ⊆ [0, b)"));
        }
        let bset = SpSet::singleton(self.p, &SpRational::new(self.p, b.clone(), 0)?)?;
        // V = b - U, W = ⋃ V p^{-n}, result = b - W
        let v = self.differences_to(&bset)?;
        let w = self.derived(&radix_left_shifts(self.p, &v.acceptor)?)?;
        w.differences_to(&bset)
    }

    /// `#{ a in S : a < p^n, p^n a ∈ ℕ }`: accepted words `u.v` with `|u|, |v| <= n`.
    pub fn weak_sparse_census(&self, n: usize) -> BigUint {
        let acc = &self.acceptor;
        let states = acc.num_states();
        let r = radix(self.p);
        let step_digits = |counts: &Vec<BigUint>| {
            let mut next = vec![BigUint::zero(); states];
            for q in 0..states {
                if counts[q].is_zero() {
                    continue;
                }
                for s in 0..r {
                    next[acc.step(q, s)] += &counts[q];
                }
            }
            next
        };
        let mut counts = vec![BigUint::zero(); states];
        counts[acc.initial()] = BigUint::one();
        let mut before = counts.clone();
        for _ in 0..n {
            counts = step_digits(&counts);
            for q in 0..states {
                before[q] += &counts[q];
            }
        }
        let mut after = vec![BigUint::zero(); states];
        for q in 0..states {
            if !before[q].is_zero() {
                after[acc.step(q, r)] += &before[q];
            }
        }
        let mut total = BigUint::zero();
        let mut counts = after;
        for i in 0..=n {
            if i > 0 {
                counts = step_digits(&counts);
            }
            for q in 0..states {
                if *acc.output(q) {
                    total += &counts[q];
                }
            }
        }
        total
    }
}

fn analyze(p: u32, acceptor: &Acceptor, cap: usize) -> Result<(Flag, Flag)> {
    match is_sparse_in_base(acceptor, p, cap) {
        Ok(SparsenessVerdict::Sparse { components, .. }) => {
            let wo = components.iter().all(crate::sparse::is_well_ordered);
            Ok((Flag::Yes, if wo { Flag::Yes } else { Flag::No }))
        }
        Ok(SparsenessVerdict::NonSparse { .. }) => Ok((Flag::No, Flag::Unknown)),
        // The witness search runs before decomposition, so a cap failure means sparse.
        Err(Error::ComponentCapExceeded { .. }) => Ok((Flag::Yes, Flag::Unknown)),
        Err(e) => Err(e),
    }
}

/// Where a valid expansion lies relative to an integer bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Pending,
    Below,
    EqualInt,
    EqualIntWithFraction,
    AboveInt,
}

/// DFA classifying valid expansions `u.v` against the integer `b` by their
/// integer part: `x < b` iff `[u] < b`, `x > b` iff `[u] > b` or `[u] = b`
/// with a nonempty fraction.
fn interval_classifier(p: u32, b: &BigUint) -> crate::automaton::Dfao<Side> {
    let bw = encode_nat_big(b, p);
    let m = bw.len();
    let a = p as usize + 1;
    let r = radix(p);
    // states: (i, cmp) with i in 0..=m+1 and cmp in {less, equal, greater}, then
    // four fraction states.
    let int_id = |i: usize, cmp: usize| i * 3 + cmp;
    let n_int = (m + 2) * 3;
    let (f_below, f_eq, f_eq_frac, f_above) = (n_int, n_int + 1, n_int + 2, n_int + 3);
    let mut delta = vec![0usize; (n_int + 4) * a];
    let mut outputs = vec![Side::Pending; n_int + 4];
    for i in 0..=m + 1 {
        for cmp in 0..3 {
            let q = int_id(i, cmp);
            for d in 0..p as u8 {
                let ni = (i + 1).min(m + 1);
                let ncmp = if cmp != 1 || i >= m {
                    cmp
                } else {
                    match d.cmp(&bw[i]) {
                        core::cmp::Ordering::Less => 0,
                        core::cmp::Ordering::Equal => 1,
                        core::cmp::Ordering::Greater => 2,
                    }
                };
                delta[q * a + d as usize] = int_id(ni, ncmp);
            }
            let target = if i < m || (i == m && cmp == 0) {
                f_below
            } else if i == m && cmp == 1 {
                f_eq
            } else {
                f_above
            };
            delta[q * a + r as usize] = target;
        }
    }
    for (q, out) in [
        (f_below, Side::Below),
        (f_eq, Side::EqualInt),
        (f_eq_frac, Side::EqualIntWithFraction),
        (f_above, Side::AboveInt),
    ] {
        outputs[q] = out;
        for s in 0..a {
            delta[q * a + s] = if q == f_eq { f_eq_frac } else { q };
        }
    }
    crate::automaton::Dfao::from_parts(
        a,
        delta,
        int_id(0, 1),
        outputs,
        crate::automaton::Direction::Msd,
    )
}

/// One operand of the digit relation.
#[derive(Clone, Copy)]
enum Track<'a> {
    Machine(&'a Acceptor),
    Output,
}

/// Padding phase of one track: leading zeros, real symbols, trailing zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    Lead,
    Run(usize),
    Ended,
}

type RelState = (bool, u32, [Phase; 3]);

/// Options for one track on a digit column: next phase and emitted symbol.
fn digit_moves(
    track: &Track<'_>,
    live: &[bool],
    phase: Phase,
    d: u8,
    after_radix: bool,
) -> Vec<(Phase, Option<u8>)> {
    let mut out = Vec::new();
    match (track, phase) {
        (_, Phase::Ended) => {
            if d == 0 {
                out.push((Phase::Ended, None));
            }
        }
        (Track::Output, Phase::Lead) => {
            if d == 0 {
                out.push((Phase::Lead, None));
            } else {
                out.push((Phase::Run(0), Some(d)));
            }
        }
        (Track::Output, Phase::Run(_)) => {
            out.push((Phase::Run(0), Some(d)));
            if after_radix && d == 0 {
                out.push((Phase::Ended, None));
            }
        }
        (Track::Machine(m), Phase::Lead) => {
            if d == 0 {
                out.push((Phase::Lead, None));
            } else {
                let t = m.step(m.initial(), d);
                if live[t] {
                    out.push((Phase::Run(t), None));
                }
            }
        }
        (Track::Machine(m), Phase::Run(q)) => {
            let t = m.step(q, d);
            if live[t] {
                out.push((Phase::Run(t), None));
            }
            if after_radix && d == 0 && *m.output(q) {
                out.push((Phase::Ended, None));
            }
        }
    }
    out
}

/// MSD-first automaton of the relation `a x + y = z` projected onto the
/// output track, with all other tracks constrained by their machines.
fn linear_relation(p: u32, a: u32, tracks: [Track<'_>; 3], cap: usize) -> Result<Acceptor> {
    let r = radix(p);
    let lives: Vec<Vec<bool>> = tracks
        .iter()
        .map(|t| match t {
            Track::Machine(m) => {
                debug_assert_eq!(m.alphabet(), p as usize + 1);
                m.live_states()
            }
            Track::Output => Vec::new(),
        })
        .collect();
    let out_track = tracks
        .iter()
        .position(|t| matches!(t, Track::Output))
        .expect("one output track");
    let mut nfa = Nfa::new(p as usize + 1);
    let mut index: BTreeMap<RelState, usize> = BTreeMap::new();
    let start: RelState = (false, 0, [Phase::Lead; 3]);
    let accepting = |s: &RelState| {
        s.0 && s.1 == 0
            && tracks.iter().zip(&s.2).all(|(t, ph)| match (t, ph) {
                (Track::Output, _) => true,
                (Track::Machine(_), Phase::Ended) => true,
                (Track::Machine(m), Phase::Run(q)) => *m.output(*q),
                (Track::Machine(_), Phase::Lead) => false,
            })
    };
    let mut work = vec![start];
    index.insert(start, nfa.add_state(accepting(&start)));
    nfa.set_initial(0);
    let intern = |s: RelState,
                  nfa: &mut Nfa,
                  index: &mut BTreeMap<RelState, usize>,
                  work: &mut Vec<RelState>|
     -> Result<usize> {
        if let Some(&id) = index.get(&s) {
            return Ok(id);
        }
        if index.len() >= cap {
            return Err(Error::StateCapExceeded { cap });
        }
        let id = nfa.add_state(accepting(&s));
        index.insert(s, id);
        work.push(s);
        Ok(id)
    };
    while let Some(state) = work.pop() {
        let from = index[&state];
        let (after, carry, phases) = state;
        // digit column: a x + y + c_in = z + p carry
        for x in 0..p {
            for y in 0..p {
                for c_in in 0..=a {
                    let total = a * x + y + c_in;
                    if total < p * carry || total - p * carry >= p {
                        continue;
                    }
                    let z = total - p * carry;
                    let digits = [x as u8, y as u8, z as u8];
                    let opts: Vec<Vec<(Phase, Option<u8>)>> = (0..3)
                        .map(|i| digit_moves(&tracks[i], &lives[i], phases[i], digits[i], after))
                        .collect();
                    for o0 in &opts[0] {
                        for o1 in &opts[1] {
                            for o2 in &opts[2] {
                                let chosen = [o0, o1, o2];
                                let label = chosen[out_track].1;
                                let next: RelState = (after, c_in, [o0.0, o1.0, o2.0]);
                                let to = intern(next, &mut nfa, &mut index, &mut work)?;
                                match label {
                                    Some(s) => nfa.add_edge(from, s, to),
                                    None => nfa.add_epsilon(from, to),
                                }
                            }
                        }
                    }
                }
            }
        }
        // radix column
        if !after {
            let mut next = [Phase::Lead; 3];
            let mut ok = true;
            for i in 0..3 {
                next[i] = match (&tracks[i], phases[i]) {
                    (Track::Output, _) => Phase::Run(0),
                    (Track::Machine(m), Phase::Lead) => Phase::Run(m.step(m.initial(), r)),
                    (Track::Machine(m), Phase::Run(q)) => Phase::Run(m.step(q, r)),
                    (Track::Machine(_), Phase::Ended) => Phase::Ended,
                };
                if let (Phase::Run(q), Track::Machine(_)) = (next[i], &tracks[i]) {
                    ok &= lives[i][q];
                }
            }
            if ok {
                let to = intern((true, carry, next), &mut nfa, &mut index, &mut work)?;
                nfa.add_edge(from, r, to);
            }
        }
    }
    let dfa = nfa.determinize(cap)?;
    dfa.intersect(&Acceptor::valid_expansions(p))
}

/// Explores an NFA from keyed states given a successor function.
fn explore<K: Ord + Clone>(
    alphabet: usize,
    start: K,
    accept: impl Fn(&K) -> bool,
    succ: impl Fn(&K) -> Vec<(Option<u8>, K)>,
    cap: usize,
) -> Result<Acceptor> {
    let mut nfa = Nfa::new(alphabet);
    let mut index: BTreeMap<K, usize> = BTreeMap::new();
    index.insert(start.clone(), nfa.add_state(accept(&start)));
    nfa.set_initial(0);
    let mut work = vec![start];
    while let Some(k) = work.pop() {
        let from = index[&k];
        for (label, next) in succ(&k) {
            let to = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if index.len() >= cap {
                        return Err(Error::StateCapExceeded { cap });
                    }
                    let id = nfa.add_state(accept(&next));
                    index.insert(next.clone(), id);
                    work.push(next);
                    id
                }
            };
            match label {
                Some(s) => nfa.add_edge(from, s, to),
                None => nfa.add_epsilon(from, to),
            }
        }
    }
    nfa.determinize(cap)
}

/// `⋃_{n >= 0} x p^n` over the accepted expansions `x`: the radix point moves
/// right past a prefix of the fraction, or past all of it followed by zeros.
fn radix_right_shifts(p: u32, acc: &Acceptor) -> Result<Acceptor> {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum S {
        Int(usize, bool),
        Moved(usize, bool),
        Frac(usize),
        Zeros(bool),
        Done,
    }
    let r = radix(p);
    let live = acc.live_states();
    let step = |q: usize, s: u8| {
        let t = acc.step(q, s);
        live[t].then_some(t)
    };
    let out = explore(
        p as usize + 1,
        S::Int(acc.initial(), false),
        |k| match k {
            S::Frac(q) => *acc.output(*q),
            S::Done => true,
            _ => false,
        },
        |k| {
            let mut v = Vec::new();
            match *k {
                S::Int(q, started) => {
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            v.push((Some(d), S::Int(t, started || d != 0)));
                        }
                    }
                    if let Some(t) = step(q, r) {
                        v.push((None, S::Moved(t, started)));
                    }
                }
                S::Moved(q, started) => {
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            if !started && d == 0 {
                                v.push((None, S::Moved(t, false)));
                            } else {
                                v.push((Some(d), S::Moved(t, true)));
                            }
                        }
                    }
                    v.push((Some(r), S::Frac(q)));
                    if *acc.output(q) {
                        v.push((None, S::Zeros(started)));
                    }
                }
                S::Frac(q) => {
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            v.push((Some(d), S::Frac(t)));
                        }
                    }
                }
                S::Zeros(started) => {
                    if started {
                        v.push((Some(0), S::Zeros(true)));
                    }
                    v.push((Some(r), S::Done));
                }
                S::Done => {}
            }
            v
        },
        DEFAULT_STATE_CAP,
    )?;
    out.intersect(&Acceptor::valid_expansions(p))
}

/// `⋃_{n >= 1} x p^{-n}` over the accepted expansions `x`: the radix point
/// moves left past a nonempty suffix of the integer part, or past all of it
/// after zero padding; zeros stranded at the end are dropped.
fn radix_left_shifts(p: u32, acc: &Acceptor) -> Result<Acceptor> {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum S {
        Int(usize, bool),
        Moved(usize, bool, bool),
        Trail(usize),
        Frac(usize),
        Done,
    }
    let r = radix(p);
    let live = acc.live_states();
    let step = |q: usize, s: u8| {
        let t = acc.step(q, s);
        live[t].then_some(t)
    };
    let out = explore(
        p as usize + 1,
        S::Int(acc.initial(), true),
        |k| match k {
            S::Frac(q) => *acc.output(*q),
            S::Done => true,
            _ => false,
        },
        |k| {
            let mut v = Vec::new();
            match *k {
                S::Int(q, fresh) => {
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            v.push((Some(d), S::Int(t, false)));
                        }
                    }
                    v.push((Some(r), S::Moved(q, false, fresh)));
                }
                S::Moved(q, moved, pad_ok) => {
                    if pad_ok {
                        v.push((Some(0), S::Moved(q, true, true)));
                    }
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            v.push((Some(d), S::Moved(t, true, false)));
                            if d == 0 {
                                v.push((None, S::Trail(t)));
                            }
                        }
                    }
                    if moved {
                        if let Some(t) = step(q, r) {
                            v.push((None, S::Frac(t)));
                        }
                    }
                }
                S::Trail(q) => {
                    if let Some(t) = step(q, 0) {
                        v.push((None, S::Trail(t)));
                    }
                    if let Some(t) = step(q, r) {
                        if *acc.output(t) {
                            v.push((None, S::Done));
                        }
                    }
                }
                S::Frac(q) => {
                    for d in 0..r {
                        if let Some(t) = step(q, d) {
                            v.push((Some(d), S::Frac(t)));
                        }
                    }
                }
                S::Done => {}
            }
            v
        },
        DEFAULT_STATE_CAP,
    )?;
    out.intersect(&Acceptor::valid_expansions(p))
}

fn p_free_part(mut n: BigInt, p: u32) -> BigInt {
    let pp = BigInt::from(p);
    while !n.is_zero() && (&n % &pp).is_zero() {
        n /= &pp;
    }
    n
}

fn multiplicative_order(p: u32, q: &BigInt) -> Option<u64> {
    if q.is_one() {
        return Some(1);
    }
    let q = q.to_u64()?;
    let mut x = p as u64 % q;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * p as u128) % q as u128) as u64;
        k += 1;
        if k > q {
            return None;
        }
    }
    Some(k)
}

/// Residue of `x ∈ ℤ[1/p]` modulo `q` (coprime to `p`).
fn residue(x: &BigRational, q: &BigInt) -> BigInt {
    let num = x.numer().mod_floor(q);
    let den = x.denom().mod_floor(q);
    // den is a power of p, invertible mod q
    let inv = mod_inverse(&den, q).expect("p-power is a unit");
    (num * inv).mod_floor(q)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Largest number of index tuples the exact `S_p` check will visit.
pub const AFFINE_CHECK_LIMIT: u64 = 1_000_000;

/// Closed forms of `aS + b`, after checking exactly that every image value
/// lies in `S_p` (nonnegative with a `p`-power denominator).
pub fn affine(forms: &[ClosedForm], a: &BigRational, b: &BigRational) -> Result<Vec<ClosedForm>> {
    if !a.is_positive() {
        return Err(Error::InvalidArgument("multiplier must be positive"));
    }
    let mut out = Vec::with_capacity(forms.len());
    for f in forms {
        let g = f.affine(a, b);
        let p = g.base();
        check_prime(p)?;
        // Lower bound: the integer part is smallest at the origin, and every
        // post-radix term d_l p^{-F} lies between min(d_l, 0) and max(d_l, 0).
        let zero = vec![0u32; g.periods().len()];
        let low = if g.is_well_ordered() {
            g.value(&zero)
        } else {
            let pre: BigRational = g.c().iter().cloned().sum();
            let d = g.d().expect("radix form");
            let mut low = pre + &d[0];
            for x in &d[1..] {
                if x.is_negative() {
                    low += x;
                }
            }
            low
        };
        if low.is_negative() {
            return Err(Error::NotInSp(p));
        }
        // p-free denominators: the image is in ℤ[1/p] iff Q·x ≡ 0 mod Q.
        let mut q = BigInt::one();
        let coeffs: Vec<&BigRational> = g.c().iter().chain(g.d().unwrap_or(&[])).collect();
        for c in &coeffs {
            q = q.lcm(&p_free_part(c.denom().clone(), p));
        }
        if q.is_one() {
            out.push(g);
            continue;
        }
        let ord = multiplicative_order(p, &q).ok_or(Error::WindowTooLarge)?;
        let s = g.periods().len() as u32;
        if ord.checked_pow(s).is_none_or(|t| t > AFFINE_CHECK_LIMIT) {
            return Err(Error::WindowTooLarge);
        }
        let qq = BigRational::from_integer(q.clone());
        let total = ord.pow(s);
        for idx in 0..total {
            let mut n = vec![0u32; s as usize];
            let mut t = idx;
            for x in n.iter_mut() {
                *x = (t % ord) as u32;
                t /= ord;
            }
            let v = g.value(&n) * &qq;
            if !is_p_adic(&v, p) || !residue(&v, &q).is_zero() {
                return Err(Error::NotInSp(p));
            }
        }
        out.push(g);
    }
    Ok(out)
}

fn is_p_adic(x: &BigRational, p: u32) -> bool {
    p_free_part(x.denom().clone(), p).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Dfao, Direction};
    use crate::sparse::closed_form;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sp(n: u64, e: u32) -> SpRational {
        SpRational::new(2, BigUint::from(n), e).unwrap()
    }

    fn powers_of_two() -> SpSet {
        // 1 0* .
        let f = SimpleSparseForm::new(2, vec![vec![1], vec![2]], vec![vec![0]]).unwrap();
        SpSet::from_forms(2, &[f]).unwrap()
    }

    fn window(s: &SpSet) -> Vec<BigRational> {
        s.window(&rat(1024, 1), 6)
    }

    #[test]
    fn sum_with_one() {
        let s = powers_of_two();
        let one = SpSet::singleton(2, &sp(1, 0)).unwrap();
        let t = s.minkowski_sum(&one).unwrap();
        let expect: Vec<BigRational> = (0..10).map(|n| rat((1 << n) + 1, 1)).collect();
        assert_eq!(window(&t), expect);
        assert_eq!(t.sparse(), Flag::Yes);
        assert_eq!(t.well_ordered(), Flag::Yes);
        let zero = SpSet::singleton(2, &sp(0, 0)).unwrap();
        assert!(s
            .minkowski_sum(&zero)
            .unwrap()
            .acceptor()
            .equivalent(s.acceptor())
            .unwrap());
    }

    #[test]
    fn union_census_is_additive() {
        let s = powers_of_two();
        let t = s
            .minkowski_sum(&SpSet::singleton(2, &sp(1, 0)).unwrap())
            .unwrap();
        let u = s.union(&t).unwrap();
        // 3 = 2 + 1 is in both, so compare on disjoint sets only: {2^n}, n>=2 vs {2^n+1}
        let both: Vec<_> = window(&s)
            .into_iter()
            .filter(|x| t.contains_ratio(x))
            .collect();
        assert_eq!(
            window(&u).len(),
            window(&s).len() + window(&t).len() - both.len()
        );
    }

    #[test]
    fn split_examples() {
        let s = SpSet::from_values(2, &[sp(1, 1), sp(1, 0), sp(3, 0), sp(5, 0)]).unwrap();
        let (lo, hi) = s.split(&BigUint::from(2u32)).unwrap();
        assert_eq!(window(&lo), vec![rat(1, 2), rat(1, 1)]);
        assert_eq!(window(&hi), vec![rat(3, 1), rat(5, 1)]);
        let (lo, hi) = powers_of_two().split(&BigUint::from(2u32)).unwrap();
        assert_eq!(window(&lo), vec![rat(1, 1)]);
        assert_eq!(window(&hi)[..2], [rat(4, 1), rat(8, 1)]);
        let (lo, _) = powers_of_two().split(&BigUint::from(3u32)).unwrap();
        assert_eq!(window(&lo), vec![rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn split_fraction_above_bound() {
        let s = SpSet::from_values(2, &[sp(5, 1), sp(2, 0)]).unwrap();
        let (lo, hi) = s.split(&BigUint::from(2u32)).unwrap();
        assert!(lo.is_empty());
        assert_eq!(window(&hi), vec![rat(5, 2)]);
    }

    #[test]
    fn spread_up_examples() {
        let t = SpSet::singleton(2, &sp(3, 0)).unwrap();
        let s = t.spread_up(&BigUint::from(1u32)).unwrap();
        let expect: Vec<BigRational> = (0..9).map(|n| rat((1 << (n + 1)) + 1, 1)).collect();
        assert_eq!(window(&s), expect);
        assert_eq!(s.sparse(), Flag::Yes);
        assert_eq!(s.well_ordered(), Flag::Yes);
        // single element b + p^j with j = -2
        let t = SpSet::singleton(2, &sp(5, 2)).unwrap();
        let s = t.spread_up(&BigUint::from(1u32)).unwrap();
        assert!(
            s.contains(&sp(5, 2))
                && s.contains(&sp(3, 1))
                && s.contains(&sp(2, 0))
                && s.contains(&sp(3, 0))
        );
        assert!(!s.contains(&sp(1, 0)));
    }

    #[test]
    fn spread_down_examples() {
        let u = SpSet::singleton(2, &sp(1, 1)).unwrap();
        let s = u.spread_down(&BigUint::from(1u32)).unwrap();
        let expect: Vec<BigRational> = (2..=6).map(|n| rat((1 << n) - 1, 1 << n)).collect();
        assert_eq!(window(&s), expect);
        assert_eq!(s.well_ordered(), Flag::Yes);
        let u = SpSet::singleton(2, &sp(0, 0)).unwrap();
        let s = u.spread_down(&BigUint::from(1u32)).unwrap();
        let expect: Vec<BigRational> = (1..=6).map(|n| rat((1 << n) - 1, 1 << n)).collect();
        assert_eq!(window(&s), expect);
        assert!(SpSet::empty(2)
            .unwrap()
            .spread_down(&BigUint::from(1u32))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn weak_census() {
        let s = powers_of_two();
        for n in 0..10 {
            assert_eq!(s.weak_sparse_census(n), BigUint::from(n));
        }
        assert!(SpSet::empty(2).unwrap().weak_sparse_census(5).is_zero());
        let tm = Dfao::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            0,
            vec![false, true],
            Direction::Lsd,
        )
        .unwrap();
        let s = SpSet::from_naturals(2, &tm).unwrap();
        for n in 1..10 {
            assert_eq!(s.weak_sparse_census(n), BigUint::from(1u64 << (n - 1)));
        }
    }

    #[test]
    fn affine_closed_forms() {
        let f = SimpleSparseForm::new(2, vec![vec![1], vec![]], vec![vec![0]]).unwrap();
        let c = closed_form(&f);
        let g = affine(core::slice::from_ref(&c), &rat(2, 1), &rat(1, 1)).unwrap();
        for n in 0..6 {
            assert_eq!(g[0].value(&[n]), rat((1 << (n + 1)) + 1, 1));
        }
        assert_eq!(
            affine(core::slice::from_ref(&c), &rat(1, 1), &rat(0, 1)).unwrap()[0],
            c
        );
        let half = closed_form(&SimpleSparseForm::word(2, vec![2, 1]).unwrap());
        assert_eq!(
            affine(&[half], &rat(1, 1), &rat(1, 3)),
            Err(Error::NotInSp(2))
        );
        // {2^n} / 3 never lands in S_2, {(4^n - 1)/3} always does
        assert!(affine(&[c], &rat(1, 3), &rat(0, 1)).is_err());
        let ones =
            closed_form(&SimpleSparseForm::new(2, vec![vec![], vec![]], vec![vec![1, 1]]).unwrap());
        assert!(affine(&[ones], &rat(1, 3), &rat(0, 1)).is_ok());
    }

    #[test]
    fn affine_at_acceptor_level() {
        let s = powers_of_two();
        let t = s.affine_nat(2, &sp(1, 0)).unwrap();
        let expect: Vec<BigRational> = (0..9).map(|n| rat((1 << (n + 1)) + 1, 1)).collect();
        assert_eq!(window(&t), expect);
        let s3 =
            SpSet::from_values(3, &[SpRational::new(3, BigUint::from(5u32), 0).unwrap()]).unwrap();
        let t3 = s3
            .affine_nat(7, &SpRational::new(3, BigUint::from(2u32), 1).unwrap())
            .unwrap();
        assert_eq!(t3.window(&rat(100, 1), 4), vec![rat(107, 3)]);
    }
}
