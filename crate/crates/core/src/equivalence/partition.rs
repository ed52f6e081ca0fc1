use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PartitionKind {
    Strong,
    Branching,
}

/// Blocks are numbered in order of their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub kind: PartitionKind,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn identity(kind: PartitionKind, n: usize) -> Partition {
        Partition::from_block_of(kind, (0..n).collect())
    }

    /// Builds a partition from arbitrary block labels, renumbering them.
    pub fn from_block_of(kind: PartitionKind, labels: Vec<usize>) -> Partition {
        let mut renumber = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let block_of = labels
            .iter()
            .enumerate()
            .map(|(s, l)| {
                let b = *renumber.entry(*l).or_insert_with(|| {
                    blocks.push(Vec::new());
                    blocks.len() - 1
                });
                blocks[b].push(s);
                b
            })
            .collect();
        Partition { kind, block_of, blocks }
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn same_block(&self, s: usize, t: usize) -> bool {
        self.block_of[s] == self.block_of[t]
    }

    /// The restriction to states `range`, renumbered from zero.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Partition {
        Partition::from_block_of(self.kind, self.block_of[range].to_vec())
    }
}
