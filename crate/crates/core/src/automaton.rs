//! Deterministic finite automata with output and the regular-language
//! algebra built on them.
//!
//! Symbols are `u8` indices into an alphabet of size [`Dfao::alphabet`]. For
//! base-`k` digit alphabets the symbol `d` is the digit `d`; `S_k` alphabets
//! add the radix point as symbol `k`. Words are stored most significant
//! symbol first; [`Direction`] says in which order a machine consumes them.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::digits::{radix, Word};
use crate::error::{Error, Result};
use crate::nfa::Nfa;

/// Default bound on the number of states any construction may create.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Order in which a machine consumes a stored word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    /// Least significant symbol first, i.e. the stored word right to left.
    #[default]
    Lsd,
    /// Most significant symbol first, the stored word as written.
    Msd,
}

/// A complete DFAO `(Q, Σ, δ, q0, Δ, τ)` with states `0..Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao<O> {
    alphabet: usize,
    delta: Vec<usize>,
    initial: usize,
    outputs: Vec<O>,
    direction: Direction,
}

/// A DFAO with Boolean output; accepts the words mapped to `true`.
pub type Acceptor = Dfao<bool>;

impl<O: Clone + Ord> Dfao<O> {
    /// Builds a machine from one row of successors per state.
    pub fn new(
        alphabet: usize,
        transitions: Vec<Vec<usize>>,
        initial: usize,
        outputs: Vec<O>,
        direction: Direction,
    ) -> Result<Self> {
        if alphabet == 0 || alphabet > 256 {
            return Err(Error::MalformedAutomaton(
                "alphabet size must lie in 1..=256",
            ));
        }
        let n = transitions.len();
        if n == 0 {
            return Err(Error::MalformedAutomaton("no states"));
        }
        if outputs.len() != n {
            return Err(Error::MalformedAutomaton("one output per state required"));
        }
        if initial >= n {
            return Err(Error::MalformedAutomaton("initial state out of range"));
        }
        let mut delta = Vec::with_capacity(n * alphabet);
        for row in transitions {
            if row.len() != alphabet {
                return Err(Error::MalformedAutomaton(
                    "transition row length differs from alphabet size",
                ));
            }
            if row.iter().any(|&t| t >= n) {
                return Err(Error::MalformedAutomaton("transition target out of range"));
            }
            delta.extend(row);
        }
        Ok(Dfao {
            alphabet,
            delta,
            initial,
            outputs,
            direction,
        })
    }

    pub(crate) fn from_parts(
        alphabet: usize,
        delta: Vec<usize>,
        initial: usize,
        outputs: Vec<O>,
        direction: Direction,
    ) -> Self {
        debug_assert_eq!(delta.len(), alphabet * outputs.len());
        Dfao {
            alphabet,
            delta,
            initial,
            outputs,
            direction,
        }
    }

    /// Machine with a single state emitting `value` on every word.
    pub fn constant(alphabet: usize, value: O, direction: Direction) -> Self {
        Dfao {
            alphabet,
            delta: vec![0; alphabet],
            initial: 0,
            outputs: vec![value],
            direction,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn outputs(&self) -> &[O] {
        &self.outputs
    }

    pub fn output(&self, q: usize) -> &O {
        &self.outputs[q]
    }

    #[inline]
    pub fn step(&self, q: usize, a: u8) -> usize {
        self.delta[q * self.alphabet + a as usize]
    }

    pub fn transitions(&self) -> Vec<Vec<usize>> {
        self.delta
            .chunks(self.alphabet)
            .map(|r| r.to_vec())
            .collect()
    }

    fn check_word(&self, word: &[u8]) -> Result<()> {
        match word.iter().find(|&&a| a as usize >= self.alphabet) {
            Some(&a) => Err(Error::SymbolOutOfAlphabet {
                symbol: a as usize,
                alphabet: self.alphabet,
            }),
            None => Ok(()),
        }
    }

    /// State reached from `q` after consuming `word` in the machine's direction.
    pub fn delta_word(&self, q: usize, word: &[u8]) -> Result<usize> {
        self.check_word(word)?;
        let mut q = q;
        match self.direction {
            Direction::Msd => word.iter().for_each(|&a| q = self.step(q, a)),
            Direction::Lsd => word.iter().rev().for_each(|&a| q = self.step(q, a)),
        }
        Ok(q)
    }

    /// `f_M(w) = τ(δ(w, q0))`.
    pub fn run(&self, word: &[u8]) -> Result<&O> {
        let q = self.delta_word(self.initial, word)?;
        Ok(&self.outputs[q])
    }

    pub fn map_outputs<P, F: FnMut(&O) -> P>(&self, f: F) -> Dfao<P> {
        Dfao {
            alphabet: self.alphabet,
            delta: self.delta.clone(),
            initial: self.initial,
            outputs: self.outputs.iter().map(f).collect(),
            direction: self.direction,
        }
    }

    /// Synchronous product on the reachable pairs, outputs combined by `f`.
    pub fn product<P: Clone + Ord, R: Clone + Ord>(
        &self,
        other: &Dfao<P>,
        mut f: impl FnMut(&O, &P) -> R,
    ) -> Result<Dfao<R>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let other = if other.direction == self.direction {
            other.clone()
        } else {
            other.with_direction(self.direction, DEFAULT_STATE_CAP)?
        };
        let k = self.alphabet;
        let mut index = BTreeMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert((self.initial, other.initial), 0usize);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for s in 0..k as u8 {
                let t = (self.step(a, s), other.step(b, s));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                delta.push(id);
            }
            i += 1;
        }
        let outputs = pairs
            .iter()
            .map(|&(a, b)| f(&self.outputs[a], &other.outputs[b]))
            .collect();
        Ok(Dfao::from_parts(k, delta, 0, outputs, self.direction))
    }

    /// States reachable from the initial state, in breadth-first symbol order.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for s in 0..self.alphabet as u8 {
                let t = self.step(q, s);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// The unique minimal machine computing the same function, with states
    /// numbered in breadth-first order from the initial state.
    pub fn minimize(&self) -> Self {
        let n = self.num_states();
        let k = self.alphabet;
        let live = self.reachable();
        // Moore partition refinement, starting from the output partition.
        let mut class = vec![usize::MAX; n];
        let mut keys: BTreeMap<&O, usize> = BTreeMap::new();
        for q in (0..n).filter(|&q| live[q]) {
            let next = keys.len();
            class[q] = *keys.entry(&self.outputs[q]).or_insert(next);
        }
        let mut count = keys.len();
        loop {
            let mut sigs: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut next_class = vec![usize::MAX; n];
            for q in (0..n).filter(|&q| live[q]) {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k as u8).map(|s| class[self.step(q, s)]));
                let fresh = sigs.len();
                next_class[q] = *sigs.entry(sig).or_insert(fresh);
            }
            class = next_class;
            if sigs.len() == count {
                break;
            }
            count = sigs.len();
        }
        // Canonical renumbering by breadth-first search.
        let mut number = vec![usize::MAX; count];
        let mut rep = Vec::with_capacity(count);
        let mut queue = VecDeque::from([self.initial]);
        number[class[self.initial]] = 0;
        rep.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for s in 0..k as u8 {
                let t = self.step(q, s);
                if number[class[t]] == usize::MAX {
                    number[class[t]] = rep.len();
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut delta = Vec::with_capacity(rep.len() * k);
        for &q in &rep {
            delta.extend((0..k as u8).map(|s| number[class[self.step(q, s)]]));
        }
        let outputs = rep.iter().map(|&q| self.outputs[q].clone()).collect();
        Dfao::from_parts(k, delta, 0, outputs, self.direction)
    }

    /// A machine computing the same function on stored words but consuming
    /// them in the opposite order.
    ///
    /// A state of the result is the map `q -> τ(δ(q, x))` for the suffix `x`
    /// consumed so far, so outputs of any type are handled.
    pub fn reversed(&self, cap: usize) -> Result<Self> {
        let n = self.num_states();
        let k = self.alphabet;
        let start: Vec<O> = self.outputs.clone();
        let mut index: BTreeMap<Vec<O>, usize> = BTreeMap::new();
        index.insert(start.clone(), 0);
        let mut states = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for s in 0..k as u8 {
                let g: Vec<O> = (0..n).map(|q| states[i][self.step(q, s)].clone()).collect();
                let id = match index.get(&g) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::StateCapExceeded { cap });
                        }
                        index.insert(g.clone(), states.len());
                        states.push(g);
                        states.len() - 1
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let outputs = states.iter().map(|g| g[self.initial].clone()).collect();
        let direction = match self.direction {
            Direction::Lsd => Direction::Msd,
            Direction::Msd => Direction::Lsd,
        };
        Ok(Dfao::from_parts(k, delta, 0, outputs, direction).minimize())
    }

    pub fn with_direction(&self, direction: Direction, cap: usize) -> Result<Self> {
        if direction == self.direction {
            Ok(self.clone())
        } else {
            self.reversed(cap)
        }
    }

    pub fn to_msd(&self) -> Result<Self> {
        self.with_direction(Direction::Msd, DEFAULT_STATE_CAP)
    }
}

impl Acceptor {
    /// The empty language.
    pub fn empty(alphabet: usize) -> Self {
        Dfao::constant(alphabet, false, Direction::Msd)
    }

    /// All words.
    pub fn universal(alphabet: usize) -> Self {
        Dfao::constant(alphabet, true, Direction::Msd)
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        matches!(self.run(word), Ok(true))
    }

    /// Acceptor of a finite set of words.
    pub fn from_words<W: AsRef<[u8]>>(alphabet: usize, words: &[W]) -> Result<Self> {
        let mut nfa = Nfa::new(alphabet);
        let start = nfa.add_state(false);
        nfa.set_initial(start);
        for w in words {
            let mut q = start;
            for &a in w.as_ref() {
                if a as usize >= alphabet {
                    return Err(Error::SymbolOutOfAlphabet {
                        symbol: a as usize,
                        alphabet,
                    });
                }
                let t = nfa.add_state(false);
                nfa.add_edge(q, a, t);
                q = t;
            }
            nfa.set_accepting(q, true);
        }
        Ok(nfa.determinize(DEFAULT_STATE_CAP)?.minimize())
    }

    pub fn complement(&self) -> Self {
        self.map_outputs(|&b| !b)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other, |&a, &b| a || b)?.minimize())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other, |&a, &b| a && b)?.minimize())
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other, |&a, &b| a && !b)?.minimize())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other, |&a, &b| a != b)?.minimize())
    }

    /// States from which some accepting state is reachable.
    pub fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for s in 0..self.alphabet as u8 {
                preds[self.step(q, s)].push(q);
            }
        }
        let mut seen: Vec<bool> = self.outputs.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &r in &preds[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    /// States that are both accessible and co-accessible.
    pub fn live_states(&self) -> Vec<bool> {
        let a = self.reachable();
        let c = self.coaccessible();
        a.iter().zip(&c).map(|(&x, &y)| x && y).collect()
    }

    /// Same language with every non-live state merged into a single sink.
    pub fn trim(&self) -> Self {
        let live = self.live_states();
        let mut number = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if live[q] {
                number[q] = next;
                next += 1;
            }
        }
        let sink = next;
        let total = if live[self.initial] { next + 1 } else { 1 };
        if !live[self.initial] {
            return Acceptor::empty(self.alphabet).with_direction_unchecked(self.direction);
        }
        let mut delta = vec![sink; total * self.alphabet];
        let mut outputs = vec![false; total];
        for q in 0..self.num_states() {
            if !live[q] {
                continue;
            }
            outputs[number[q]] = self.outputs[q];
            for s in 0..self.alphabet as u8 {
                let t = self.step(q, s);
                if live[t] {
                    delta[number[q] * self.alphabet + s as usize] = number[t];
                }
            }
        }
        Dfao::from_parts(
            self.alphabet,
            delta,
            number[self.initial],
            outputs,
            self.direction,
        )
    }

    fn with_direction_unchecked(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn is_empty(&self) -> bool {
        !self.live_states()[self.initial]
    }

    /// Language equality, by emptiness of the symmetric difference.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        Ok(self.symmetric_difference(other)?.is_empty())
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// `f_L(m)` for every `m in 0..=n`: accepted words of length at most `m`.
    pub fn census_table(&self, n: usize) -> Vec<BigUint> {
        let states = self.num_states();
        let mut counts = vec![BigUint::zero(); states];
        counts[self.initial] = BigUint::from(1u32);
        let mut total = BigUint::zero();
        let mut table = Vec::with_capacity(n + 1);
        // Reading order does not change how many words of each length are accepted.
        let machine = self;
        for len in 0..=n {
            if len > 0 {
                let mut next = vec![BigUint::zero(); states];
                for q in 0..states {
                    if counts[q].is_zero() {
                        continue;
                    }
                    for s in 0..machine.alphabet as u8 {
                        next[machine.step(q, s)] += &counts[q];
                    }
                }
                counts = next;
            }
            for q in 0..states {
                if machine.outputs[q] {
                    total += &counts[q];
                }
            }
            table.push(total.clone());
        }
        table
    }

    /// `f_L(n)`.
    pub fn census(&self, n: usize) -> BigUint {
        self.census_table(n).pop().expect("nonempty table")
    }

    /// All accepted words of length at most `max_len`, shortest first and
    /// lexicographic within a length.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let msd = match self.to_msd() {
            Ok(m) => m,
            Err(_) => return Vec::new(),
        };
        let co = msd.coaccessible();
        let mut out = Vec::new();
        let mut layer: Vec<(usize, Word)> = vec![(msd.initial, Vec::new())];
        for len in 0..=max_len {
            for (q, w) in &layer {
                if msd.outputs[*q] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (q, w) in &layer {
                for s in 0..msd.alphabet as u8 {
                    let t = msd.step(*q, s);
                    if co[t] {
                        let mut x = w.clone();
                        x.push(s);
                        next.push((t, x));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Base-`k` words without a leading zero (the empty word included).
    pub fn canonical_naturals(k: u32) -> Self {
        // 0: start, 1: inside a number, 2: dead
        let k = k as usize;
        let mut delta = vec![2; 3 * k];
        for s in 1..k {
            delta[s] = 1;
        }
        for s in 0..k {
            delta[k + s] = 1;
        }
        Dfao::from_parts(k, delta, 0, vec![true, true, false], Direction::Msd)
    }

    /// The language `E_k` of valid expansions over `{0..k-1} ∪ {radix}`.
    pub fn valid_expansions(k: u32) -> Self {
        // 0 start, 1 integer part, 2 just read radix, 3 fraction ending in nonzero,
        // 4 fraction ending in zero, 5 dead
        let r = radix(k) as usize;
        let a = r + 1;
        let mut delta = vec![5; 6 * a];
        let set = |delta: &mut Vec<usize>, q: usize, s: usize, t: usize| delta[q * a + s] = t;
        for s in 1..r {
            set(&mut delta, 0, s, 1);
        }
        set(&mut delta, 0, r, 2);
        for s in 0..r {
            set(&mut delta, 1, s, 1);
        }
        set(&mut delta, 1, r, 2);
        for q in [2, 3, 4] {
            set(&mut delta, q, 0, 4);
            for s in 1..r {
                set(&mut delta, q, s, 3);
            }
        }
        Dfao::from_parts(
            a,
            delta,
            0,
            vec![false, false, true, true, false, false],
            Direction::Msd,
        )
    }

    /// Words over `{0..k-1} ∪ {radix}` with at most one radix point, any padding.
    pub fn radix_words(k: u32) -> Self {
        let r = radix(k) as usize;
        let a = r + 1;
        let mut delta = vec![2; 3 * a];
        for s in 0..r {
            delta[s] = 0;
            delta[a + s] = 1;
        }
        delta[r] = 1;
        Dfao::from_parts(a, delta, 0, vec![true, true, false], Direction::Msd)
    }

    /// The language `0* L` for an MSD acceptor whose words carry no leading zero.
    pub fn pad_leading_zeros(&self) -> Result<Self> {
        let msd = self.to_msd()?;
        let mut nfa = Nfa::from_dfa(&msd);
        let q = nfa.add_state(false);
        nfa.add_edge(q, 0, q);
        nfa.add_epsilon(q, nfa.initial_states()[0]);
        nfa.set_only_initial(q);
        Ok(nfa.determinize(DEFAULT_STATE_CAP)?.minimize())
    }

    /// Words of the language with every leading zero removed, in MSD order.
    pub fn strip_leading_zeros(&self) -> Result<Self> {
        let msd = self.to_msd()?;
        let mut nfa = Nfa::from_dfa(&msd);
        let mut q = msd.initial;
        let mut starts = vec![q];
        for _ in 0..msd.num_states() {
            q = msd.step(q, 0);
            starts.push(q);
        }
        nfa.set_initial_set(&starts);
        let stripped = nfa.determinize(DEFAULT_STATE_CAP)?;
        let mut nonzero_start = Nfa::new(msd.alphabet);
        let s0 = nonzero_start.add_state(true);
        let s1 = nonzero_start.add_state(true);
        nonzero_start.set_initial(s0);
        for a in 1..msd.alphabet as u8 {
            nonzero_start.add_edge(s0, a, s1);
        }
        for a in 0..msd.alphabet as u8 {
            nonzero_start.add_edge(s1, a, s1);
        }
        stripped.intersect(&nonzero_start.determinize(DEFAULT_STATE_CAP)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::encode_nat;

    pub(crate) fn thue_morse() -> Dfao<u8> {
        Dfao::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            0,
            vec![0, 1],
            Direction::Lsd,
        )
        .unwrap()
    }

    fn one_zero_star() -> Acceptor {
        // 1 0*, MSD
        Dfao::new(
            2,
            vec![vec![2, 1], vec![1, 2], vec![2, 2]],
            0,
            vec![false, true, false],
            Direction::Msd,
        )
        .unwrap()
    }

    fn brute_census(a: &Acceptor, n: usize) -> usize {
        let mut count = 0;
        for len in 0..=n {
            for x in 0..(a.alphabet().pow(len as u32)) {
                let mut w = vec![0u8; len];
                let mut y = x;
                for i in (0..len).rev() {
                    w[i] = (y % a.alphabet()) as u8;
                    y /= a.alphabet();
                }
                if a.accepts(&w) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn thue_morse_worked_example() {
        let tm = thue_morse();
        assert_eq!(tm.run(&[1, 1, 0, 1]), Ok(&1));
        assert_eq!(tm.run(&[1, 1]), Ok(&0));
        assert_eq!(tm.run(&[]), Ok(&0));
        for n in 0..=1024u64 {
            assert_eq!(
                *tm.run(&encode_nat(n, 2)).unwrap() as u32,
                n.count_ones() % 2
            );
        }
    }

    #[test]
    fn symbol_outside_alphabet() {
        assert_eq!(
            thue_morse().run(&[2]),
            Err(Error::SymbolOutOfAlphabet {
                symbol: 2,
                alphabet: 2
            })
        );
    }

    #[test]
    fn reversal_preserves_function() {
        // Least significant digit decides in LSD order: not symmetric.
        let m = Dfao::new(
            2,
            vec![vec![1, 2], vec![1, 1], vec![2, 2]],
            0,
            vec![0u8, 1, 2],
            Direction::Lsd,
        )
        .unwrap();
        let r = m.reversed(100).unwrap();
        assert_eq!(r.direction(), Direction::Msd);
        for n in 0..256u64 {
            let w = encode_nat(n, 2);
            assert_eq!(m.run(&w), r.run(&w));
        }
    }

    #[test]
    fn union_of_two_words() {
        let a = Acceptor::from_words(2, &[vec![1u8]]).unwrap();
        let b = Acceptor::from_words(2, &[vec![1u8, 0]]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.words_up_to(4), vec![vec![1], vec![1, 0]]);
    }

    #[test]
    fn intersect_with_complement_is_empty() {
        let l = one_zero_star();
        assert!(l.intersect(&l.complement()).unwrap().is_empty());
    }

    #[test]
    fn minimize_padded_one_zero_star() {
        // Eight states, duplicates of the three essential ones.
        let t = vec![
            vec![7, 1],
            vec![2, 6],
            vec![3, 5],
            vec![4, 7],
            vec![1, 5],
            vec![5, 5],
            vec![6, 6],
            vec![7, 7],
        ];
        let outs = vec![false, true, true, true, true, false, false, false];
        let a = Dfao::new(2, t, 0, outs, Direction::Msd).unwrap();
        let m = a.minimize();
        assert_eq!(m.num_states(), 3);
        assert!(m.equivalent(&one_zero_star()).unwrap());
        assert_eq!(m.live_states().iter().filter(|&&x| x).count(), 2);
    }

    #[test]
    fn census_examples() {
        let a = one_zero_star();
        assert_eq!(a.census(4), BigUint::from(4u32));
        assert_eq!(Acceptor::empty(2).census(7), BigUint::zero());
        let support = thue_morse().map_outputs(|&o| o != 0);
        let canon = Acceptor::canonical_naturals(2);
        let s = support.to_msd().unwrap().intersect(&canon).unwrap();
        let table = s.census_table(12);
        for n in 1..=12 {
            assert_eq!(table[n], BigUint::from(1u64 << (n - 1)));
            assert_eq!(brute_census(&s, n), 1usize << (n - 1));
        }
    }

    #[test]
    fn valid_expansion_acceptor_matches_checker() {
        let e2 = Acceptor::valid_expansions(2);
        for len in 0..=8 {
            for x in 0..3usize.pow(len) {
                let mut w = vec![0u8; len as usize];
                let mut y = x;
                for i in (0..len as usize).rev() {
                    w[i] = (y % 3) as u8;
                    y /= 3;
                }
                let ok = crate::digits::validate_expansion(&w, 2).is_ok();
                assert_eq!(e2.accepts(&w), ok, "{:?}", w);
            }
        }
    }

    #[test]
    fn leading_zero_normalization() {
        let a = one_zero_star();
        let padded = a.pad_leading_zeros().unwrap();
        assert!(padded.accepts(&[0, 0, 1, 0]));
        assert!(!padded.accepts(&[0, 0]));
        let back = padded.strip_leading_zeros().unwrap();
        assert!(back.equivalent(&a).unwrap());
    }

    #[test]
    fn trim_keeps_language() {
        let a = one_zero_star();
        let t = a.trim();
        assert!(t.equivalent(&a).unwrap());
        assert!(Acceptor::empty(3).trim().is_empty());
    }
}
