//! Splitter-based partition refinement.
//!
//! Branching refinement works on a τ-acyclic graph (τ-SCCs contracted first,
//! which is sound because the equivalence is divergence-insensitive). A
//! splitter is a pair (block, label); the positive part of a block is the
//! backward closure of the label's sources over inert τ-moves. Splitters are
//! taken from a FIFO queue; when the queue drains, a full pass confirms
//! stability because splitting can turn inert τ-moves into visible ones.

use std::collections::VecDeque;

use super::graph::{Graph, TAU};

struct Refiner<'g> {
    g: &'g Graph,
    branching: bool,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    mark: Vec<bool>,
}

impl<'g> Refiner<'g> {
    fn new(g: &'g Graph, branching: bool) -> Self {
        Refiner {
            g,
            branching,
            block_of: vec![0; g.n],
            blocks: vec![(0..g.n).collect()],
            queue: VecDeque::new(),
            queued: vec![false],
            mark: vec![false; g.n],
        }
    }

    fn enqueue(&mut self, b: usize) {
        if !self.queued[b] {
            self.queued[b] = true;
            self.queue.push_back(b);
        }
    }

    fn inert(&self, a: u32, s: usize, t: usize) -> bool {
        self.branching && a == TAU && self.block_of[s] == self.block_of[t]
    }

    /// Splits every block against (b, a). Returns whether anything split.
    fn split(&mut self, b: usize, a: u32) -> bool {
        let mut marked = Vec::new();
        for &t in &self.blocks[b] {
            for &(l, s) in &self.g.pred[t] {
                if l == a && !self.inert(l, s, t) && !self.mark[s] {
                    self.mark[s] = true;
                    marked.push(s);
                }
            }
        }
        if marked.is_empty() {
            return false;
        }
        if self.branching {
            let mut i = 0;
            while i < marked.len() {
                let v = marked[i];
                i += 1;
                for &(l, u) in &self.g.pred[v] {
                    if l == TAU && !self.mark[u] && self.block_of[u] == self.block_of[v] {
                        self.mark[u] = true;
                        marked.push(u);
                    }
                }
            }
        }
        let mut touched: Vec<usize> = marked.iter().map(|&s| self.block_of[s]).collect();
        touched.sort_unstable();
        touched.dedup();
        let mut changed = false;
        for bb in touched {
            let (pos, neg): (Vec<usize>, Vec<usize>) = self.blocks[bb].iter().partition(|&&s| self.mark[s]);
            if neg.is_empty() {
                continue;
            }
            changed = true;
            let nb = self.blocks.len();
            for &s in &pos {
                self.block_of[s] = nb;
            }
            self.blocks[bb] = neg;
            self.blocks.push(pos);
            self.queued.push(false);
            self.enqueue(bb);
            self.enqueue(nb);
        }
        for s in marked {
            self.mark[s] = false;
        }
        changed
    }

    fn labels_into(&self, b: usize) -> Vec<u32> {
        let mut ls: Vec<u32> = self.blocks[b]
            .iter()
            .flat_map(|&t| self.g.pred[t].iter().map(|&(l, _)| l))
            .collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    fn run(mut self) -> Vec<usize> {
        self.enqueue(0);
        loop {
            while let Some(b) = self.queue.pop_front() {
                self.queued[b] = false;
                for a in self.labels_into(b) {
                    self.split(b, a);
                }
            }
            let mut changed = false;
            for b in 0..self.blocks.len() {
                for a in self.labels_into(b) {
                    changed |= self.split(b, a);
                }
            }
            if !changed {
                return self.block_of;
            }
        }
    }
}

/// Coarsest strong bisimulation on `g`.
pub(crate) fn strong_blocks(g: &Graph) -> Vec<usize> {
    Refiner::new(g, false).run()
}

/// Coarsest divergence-insensitive branching bisimulation on `g`.
pub(crate) fn branching_blocks(g: &Graph) -> Vec<usize> {
    let (comp, c) = g.contract_tau_sccs();
    let blocks = Refiner::new(&c, true).run();
    comp.iter().map(|&k| blocks[k]).collect()
}
