use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Nondeterministic automaton over edge label codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAutomaton {
    states: u32,
    start: u32,
    accepting: Vec<bool>,
    forward: BTreeMap<(u32, u32), Vec<u32>>,
    backward: BTreeMap<(u32, u32), Vec<u32>>,
}

impl LabelAutomaton {
    /// Builds an automaton from (from, label, to) transitions.
    pub fn new(
        states: u32,
        start: u32,
        accepting: &[u32],
        transitions: &[(u32, u32, u32)],
    ) -> Result<Self> {
        if states == 0 || start >= states {
            return Err(Error::QueryCompile(format!(
                "start state {start} outside {states} states"
            )));
        }
        let mut acc = vec![false; states as usize];
        for &a in accepting {
            *acc.get_mut(a as usize).ok_or_else(|| {
                Error::QueryCompile(format!("accepting state {a} outside {states} states"))
            })? = true;
        }
        let mut forward: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        let mut backward: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for &(q, label, r) in transitions {
            if q >= states || r >= states {
                return Err(Error::QueryCompile(format!(
                    "transition {q} -{label}-> {r} leaves the {states} states"
                )));
            }
            let f = forward.entry((q, label)).or_default();
            if !f.contains(&r) {
                f.push(r);
                backward.entry((r, label)).or_default().push(q);
            }
        }
        Ok(LabelAutomaton {
            states,
            start,
            accepting: acc,
            forward,
            backward,
        })
    }

    /// `a*`
    pub fn q1(a: u32) -> Self {
        LabelAutomaton::new(1, 0, &[0], &[(0, a, 0)]).expect("valid template")
    }

    /// `a ∘ b*`
    pub fn q2(a: u32, b: u32) -> Self {
        LabelAutomaton::new(2, 0, &[1], &[(0, a, 1), (1, b, 1)]).expect("valid template")
    }

    /// `a ∘ b ∘ c ∘ d ∘ e`
    pub fn q3(labels: [u32; 5]) -> Self {
        let t: Vec<(u32, u32, u32)> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as u32, l, i as u32 + 1))
            .collect();
        LabelAutomaton::new(6, 0, &[5], &t).expect("valid template")
    }

    pub fn state_count(&self) -> u32 {
        self.states
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn next(&self, q: u32, label: u32) -> &[u32] {
        self.forward.get(&(q, label)).map_or(&[], Vec::as_slice)
    }

    pub fn prev(&self, q: u32, label: u32) -> &[u32] {
        self.backward.get(&(q, label)).map_or(&[], Vec::as_slice)
    }

    /// Label codes mentioned by any transition.
    pub fn labels(&self) -> impl Iterator<Item = u32> + '_ {
        self.forward.keys().map(|&(_, l)| l)
    }
}
