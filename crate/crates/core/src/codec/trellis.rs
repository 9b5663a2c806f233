use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::{GeneratorSet, ShiftRegisterCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub from: usize,
    pub input: u8,
    pub to: usize,
    /// Packed output bits, first output in the MSB.
    pub output: u8,
}

/// Full branch table of a binary-input shift-register code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    memory: usize,
    width: usize,
    /// Indexed by `2 * state + input`.
    branches: Vec<Branch>,
    /// Branch indices entering each state, ascending by source state.
    incoming: Vec<Vec<usize>>,
}

impl Trellis {
    /// Enumerates every `(state, input)` pair by stepping the encoder once.
    pub fn from_code<C: ShiftRegisterCode + ?Sized>(code: &C) -> Self {
        let states = 1usize << code.memory();
        let mut branches = Vec::with_capacity(2 * states);
        let mut incoming = vec![Vec::new(); states];
        for from in 0..states {
            for input in 0..2u8 {
                let (to, output) = code.step(from as u8, input);
                incoming[to as usize].push(branches.len());
                branches.push(Branch {
                    from,
                    input,
                    to: to as usize,
                    output,
                });
            }
        }
        Trellis {
            memory: code.memory(),
            width: code.output_width(),
            branches,
            incoming,
        }
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn num_states(&self) -> usize {
        self.incoming.len()
    }

    /// Output bits per branch.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, state: usize, input: u8) -> &Branch {
        &self.branches[2 * state + input as usize]
    }

    pub fn incoming(&self, state: usize) -> impl Iterator<Item = &Branch> {
        self.incoming[state].iter().map(|&i| &self.branches[i])
    }
}

/// Trellis of the autoencoder for a given generator set.
pub fn build_trellis(gen: &GeneratorSet) -> Trellis {
    Trellis::from_code(gen)
}

fn weight(output: u8) -> u32 {
    output.count_ones()
}

/// Smallest output weight of a path that leaves state 0 and first returns to
/// it. `None` if no detour ever remerges.
pub fn free_distance(trellis: &Trellis) -> Option<u32> {
    let mut heap = BinaryHeap::new();
    for b in trellis
        .branches()
        .iter()
        .filter(|b| b.from == 0 && b.to != 0)
    {
        heap.push(Reverse((weight(b.output), b.to)));
    }
    let mut done = vec![false; trellis.num_states()];
    while let Some(Reverse((d, s))) = heap.pop() {
        if s == 0 {
            return Some(d);
        }
        if std::mem::replace(&mut done[s], true) {
            continue;
        }
        for input in 0..2 {
            let b = trellis.branch(s, input);
            heap.push(Reverse((d + weight(b.output), b.to)));
        }
    }
    None
}

/// Smallest Hamming distance between any two paths that split from a common
/// state and later remerge.
///
/// For a linear code this equals [`free_distance`]; for the nonlinear
/// autoencoder it can be smaller, since distances depend on the reference
/// path.
pub fn pairwise_free_distance(trellis: &Trellis) -> Option<u32> {
    let mut heap = BinaryHeap::new();
    for s in 0..trellis.num_states() {
        let (a, b) = (trellis.branch(s, 0), trellis.branch(s, 1));
        heap.push(Reverse((weight(a.output ^ b.output), a.to, b.to)));
    }
    let mut done = HashSet::new();
    while let Some(Reverse((d, a, b))) = heap.pop() {
        if a == b {
            return Some(d);
        }
        if !done.insert((a, b)) {
            continue;
        }
        for ia in 0..2 {
            for ib in 0..2 {
                let (x, y) = (trellis.branch(a, ia), trellis.branch(b, ib));
                heap.push(Reverse((d + weight(x.output ^ y.output), x.to, y.to)));
            }
        }
    }
    None
}
