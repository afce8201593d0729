//! Labeled-edge automata: construction, reversal, subset construction and
//! bounded language enumeration.
//!
//! Labels are opaque to this module. The class machines label edges with
//! whole affixes rather than characters.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Display, Write as _};

pub type StateId = usize;

/// Nondeterministic automaton; `None` labels are epsilon moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa<L> {
    num_states: usize,
    initial: StateId,
    finals: BTreeSet<StateId>,
    edges: Vec<(StateId, Option<L>, StateId)>,
}

/// Deterministic, epsilon-free automaton. Missing transitions reject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa<L> {
    initial: StateId,
    finals: BTreeSet<StateId>,
    transitions: Vec<BTreeMap<L, StateId>>,
}

impl<L: Ord + Clone> Nfa<L> {
    /// A machine with one non-final initial state.
    pub fn new() -> Self {
        Nfa { num_states: 1, initial: 0, finals: BTreeSet::new(), edges: Vec::new() }
    }

    pub fn add_state(&mut self) -> StateId {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn set_initial(&mut self, s: StateId) {
        assert!(s < self.num_states, "state {s} out of range");
        self.initial = s;
    }

    pub fn set_final(&mut self, s: StateId) {
        assert!(s < self.num_states, "state {s} out of range");
        self.finals.insert(s);
    }

    pub fn add_edge(&mut self, from: StateId, label: L, to: StateId) {
        assert!(from < self.num_states && to < self.num_states, "edge endpoint out of range");
        self.edges.push((from, Some(label), to));
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        assert!(from < self.num_states && to < self.num_states, "edge endpoint out of range");
        self.edges.push((from, None, to));
    }

    /// Build a chain machine accepting exactly `labels`.
    pub fn chain(labels: impl IntoIterator<Item = L>) -> Self {
        let mut m = Nfa::new();
        let mut cur = 0;
        for l in labels {
            let next = m.add_state();
            m.add_edge(cur, l, next);
            cur = next;
        }
        m.set_final(cur);
        m
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn edges(&self) -> &[(StateId, Option<L>, StateId)] {
        &self.edges
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges.iter().any(|e| e.1.is_none())
    }

    /// Distinct non-epsilon labels, sorted.
    pub fn alphabet(&self) -> BTreeSet<L> {
        self.edges.iter().filter_map(|e| e.1.clone()).collect()
    }

    fn adjacency(&self) -> Vec<Vec<(Option<&L>, StateId)>> {
        let mut adj = vec![Vec::new(); self.num_states];
        for (from, label, to) in &self.edges {
            adj[*from].push((label.as_ref(), *to));
        }
        adj
    }

    fn closure_with(adj: &[Vec<(Option<&L>, StateId)>], seed: impl IntoIterator<Item = StateId>) -> BTreeSet<StateId> {
        let mut set: BTreeSet<StateId> = BTreeSet::new();
        let mut stack: Vec<StateId> = seed.into_iter().collect();
        while let Some(s) = stack.pop() {
            if set.insert(s) {
                for (label, to) in &adj[s] {
                    if label.is_none() && !set.contains(to) {
                        stack.push(*to);
                    }
                }
            }
        }
        set
    }

    fn step_with(adj: &[Vec<(Option<&L>, StateId)>], from: &BTreeSet<StateId>, label: &L) -> BTreeSet<StateId> {
        let targets = from.iter().flat_map(|&s| adj[s].iter()).filter(|(l, _)| *l == Some(label)).map(|(_, to)| *to);
        Self::closure_with(adj, targets)
    }

    /// Epsilon closure of a set of states.
    pub fn epsilon_closure(&self, seed: impl IntoIterator<Item = StateId>) -> BTreeSet<StateId> {
        Self::closure_with(&self.adjacency(), seed)
    }

    /// Forward simulation over state sets.
    pub fn accepts(&self, labels: &[L]) -> bool {
        let adj = self.adjacency();
        let mut cur = Self::closure_with(&adj, [self.initial]);
        for l in labels {
            cur = Self::step_with(&adj, &cur, l);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|s| self.finals.contains(s))
    }

    /// Reverse every edge and swap the roles of initial and final states.
    /// With several finals a fresh initial state fans out over epsilon moves.
    pub fn reverse(&self) -> Nfa<L> {
        let mut edges: Vec<(StateId, Option<L>, StateId)> =
            self.edges.iter().map(|(a, l, b)| (*b, l.clone(), *a)).collect();
        let mut num_states = self.num_states;
        let initial = if self.finals.len() == 1 {
            *self.finals.iter().next().unwrap()
        } else {
            let fresh = num_states;
            num_states += 1;
            for &f in &self.finals {
                edges.push((fresh, None, f));
            }
            fresh
        };
        Nfa { num_states, initial, finals: BTreeSet::from([self.initial]), edges }
    }

    /// Subset construction. DFA states are numbered in discovery order
    /// (breadth first, labels ascending); the empty subset is never built.
    pub fn determinize(&self) -> Dfa<L> {
        let adj = self.adjacency();
        let alphabet = self.alphabet();
        let start = Self::closure_with(&adj, [self.initial]);
        let mut index: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut transitions: Vec<BTreeMap<L, StateId>> = Vec::new();
        let mut queue = VecDeque::new();

        index.insert(start.clone(), 0);
        subsets.push(start);
        transitions.push(BTreeMap::new());
        queue.push_back(0);

        while let Some(id) = queue.pop_front() {
            for label in &alphabet {
                let next = Self::step_with(&adj, &subsets[id], label);
                if next.is_empty() {
                    continue;
                }
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        index.insert(next.clone(), t);
                        subsets.push(next);
                        transitions.push(BTreeMap::new());
                        queue.push_back(t);
                        t
                    }
                };
                transitions[id].insert(label.clone(), target);
            }
        }
        let finals = subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|s| self.finals.contains(s)))
            .map(|(i, _)| i)
            .collect();
        Dfa { initial: 0, finals, transitions }
    }

    /// Every accepted label sequence of length at most `max_len`.
    pub fn enumerate_language(&self, max_len: usize) -> BTreeSet<Vec<L>> {
        let adj = self.adjacency();
        let alphabet = self.alphabet();
        let mut out = BTreeSet::new();
        let mut stack = vec![(Self::closure_with(&adj, [self.initial]), Vec::new())];
        while let Some((set, word)) = stack.pop() {
            if set.iter().any(|s| self.finals.contains(s)) {
                out.insert(word.clone());
            }
            if word.len() == max_len {
                continue;
            }
            for label in &alphabet {
                let next = Self::step_with(&adj, &set, label);
                if !next.is_empty() {
                    let mut w = word.clone();
                    w.push(label.clone());
                    stack.push((next, w));
                }
            }
        }
        out
    }
}

impl<L: Ord + Clone> Default for Nfa<L> {
    fn default() -> Self {
        Nfa::new()
    }
}

impl<L: Ord + Clone> Dfa<L> {
    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals.contains(&s)
    }

    pub fn next(&self, s: StateId, label: &L) -> Option<StateId> {
        self.transitions[s].get(label).copied()
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = (&L, StateId)> + '_ {
        self.transitions[s].iter().map(|(l, t)| (l, *t))
    }

    /// All edges as `(from, label, to)`, sorted by source then label.
    pub fn edges(&self) -> Vec<(StateId, L, StateId)> {
        self.transitions.iter().enumerate().flat_map(|(s, m)| m.iter().map(move |(l, t)| (s, l.clone(), *t))).collect()
    }

    /// Unknown labels reject.
    pub fn accepts(&self, labels: &[L]) -> bool {
        let mut s = self.initial;
        for l in labels {
            match self.next(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.is_final(s)
    }

    pub fn enumerate_language(&self, max_len: usize) -> BTreeSet<Vec<L>> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(self.initial, Vec::new())];
        while let Some((s, word)) = stack.pop() {
            if self.is_final(s) {
                out.insert(word.clone());
            }
            if word.len() == max_len {
                continue;
            }
            for (l, t) in self.outgoing(s) {
                let mut w = word.clone();
                w.push(l.clone());
                stack.push((t, w));
            }
        }
        out
    }

    pub fn to_nfa(&self) -> Nfa<L> {
        let mut edges = Vec::new();
        for (s, l, t) in self.edges() {
            edges.push((s, Some(l), t));
        }
        Nfa { num_states: self.num_states(), initial: self.initial, finals: self.finals.clone(), edges }
    }
}

/// Plain-text edge list:
///
/// ```text
/// # states <n>
/// # initial <s>
/// # finals <s> <s> ...
/// <from>\t<label>\t<to>
/// ```
///
/// Epsilon edges print the label `ε`. Edge order is the machine's own order.
pub fn export_edge_list<L>(
    num_states: usize,
    initial: StateId,
    finals: &BTreeSet<StateId>,
    edges: impl IntoIterator<Item = (StateId, Option<L>, StateId)>,
    mut label: impl FnMut(&L) -> String,
) -> String {
    let mut out = String::new();
    let finals: Vec<String> = finals.iter().map(|f| f.to_string()).collect();
    let _ = writeln!(out, "# states {num_states}");
    let _ = writeln!(out, "# initial {initial}");
    let _ = writeln!(out, "# finals {}", finals.join(" "));
    for (from, l, to) in edges {
        let name = l.as_ref().map(&mut label).unwrap_or_else(|| "ε".to_string());
        let _ = writeln!(out, "{from}\t{name}\t{to}");
    }
    out
}

impl<L: Ord + Clone + Display> Display for Nfa<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&export_edge_list(self.num_states, self.initial, &self.finals, self.edges.iter().cloned(), |l| {
            l.to_string()
        }))
    }
}

impl<L: Ord + Clone + Display> Display for Dfa<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&export_edge_list(
            self.num_states(),
            self.initial,
            &self.finals,
            self.edges().into_iter().map(|(a, l, b)| (a, Some(l), b)),
            |l| l.to_string(),
        ))
    }
}
