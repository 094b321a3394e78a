//! Nondeterministic automata with ε-moves, used only as an intermediate
//! form for subset constructions. All NFAs read words MSD first.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Acceptor, Dfao, Direction};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Nfa {
    alphabet: usize,
    edges: Vec<Vec<(u8, usize)>>,
    epsilon: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    initial: Vec<usize>,
}

impl Nfa {
    pub fn new(alphabet: usize) -> Self {
        Nfa {
            alphabet,
            edges: Vec::new(),
            epsilon: Vec::new(),
            accepting: Vec::new(),
            initial: Vec::new(),
        }
    }

    /// Copy of an MSD acceptor.
    pub fn from_dfa(dfa: &Acceptor) -> Self {
        debug_assert_eq!(dfa.direction(), Direction::Msd);
        let mut nfa = Nfa::new(dfa.alphabet());
        for q in 0..dfa.num_states() {
            nfa.add_state(*dfa.output(q));
        }
        for q in 0..dfa.num_states() {
            for s in 0..dfa.alphabet() as u8 {
                nfa.add_edge(q, s, dfa.step(q, s));
            }
        }
        nfa.set_initial(dfa.initial());
        nfa
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.edges.push(Vec::new());
        self.epsilon.push(Vec::new());
        self.accepting.push(accepting);
        self.accepting.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, symbol: u8, to: usize) {
        self.edges[from].push((symbol, to));
    }

    pub fn add_epsilon(&mut self, from: usize, to: usize) {
        self.epsilon[from].push(to);
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.push(q);
    }

    pub fn set_only_initial(&mut self, q: usize) {
        self.initial = vec![q];
    }

    pub fn set_initial_set(&mut self, qs: &[usize]) {
        self.initial = qs.to_vec();
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.num_states()];
        for &q in set.iter() {
            seen[q] = true;
        }
        let mut stack = set.clone();
        while let Some(q) = stack.pop() {
            for &r in &self.epsilon[q] {
                if !seen[r] {
                    seen[r] = true;
                    set.push(r);
                    stack.push(r);
                }
            }
        }
        set.sort_unstable();
        set.dedup();
    }

    /// Subset construction, refusing to build more than `cap` states.
    pub fn determinize(&self, cap: usize) -> Result<Acceptor> {
        let k = self.alphabet;
        let mut start = self.initial.clone();
        self.closure(&mut start);
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(start.clone(), 0);
        let mut subsets = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); k];
        while i < subsets.len() {
            for b in buckets.iter_mut() {
                b.clear();
            }
            for &q in &subsets[i] {
                for &(s, t) in &self.edges[q] {
                    buckets[s as usize].push(t);
                }
            }
            for b in buckets.iter_mut() {
                let mut set = core::mem::take(b);
                self.closure(&mut set);
                let id = match index.get(&set) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(Error::StateCapExceeded { cap });
                        }
                        index.insert(set.clone(), subsets.len());
                        subsets.push(set);
                        subsets.len() - 1
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let outputs = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        Ok(Dfao::from_parts(k, delta, 0, outputs, Direction::Msd))
    }
}
