use std::ops::Range;

use crate::geometry::{Cut, Side, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        rank: usize,
    },
    Split {
        cut: Cut,
        /// Ranks of every leaf below this node; contiguous by construction.
        ranks: Range<usize>,
        lower: usize,
        greater: usize,
    },
}

/// Binary tree of oriented cuts. Leaves hold processing-element ranks; the
/// lower-or-equal side of each cut owns the lower half of the rank range.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionTree {
    nodes: Vec<Node>,
    parts: usize,
}

impl PartitionTree {
    pub(crate) fn from_nodes(nodes: Vec<Node>, parts: usize) -> Self {
        debug_assert!(!nodes.is_empty());
        PartitionTree { nodes, parts }
    }

    pub fn single() -> Self {
        PartitionTree {
            nodes: vec![Node::Leaf { rank: 0 }],
            parts: 1,
        }
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn locate(&self, p: Vec2) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { rank } => return *rank,
                Node::Split {
                    cut,
                    lower,
                    greater,
                    ..
                } => {
                    at = match cut.side_of(p) {
                        Side::LowerOrEqual => *lower,
                        Side::Greater => *greater,
                    }
                }
            }
        }
    }

    /// Every cut with the rank range it separates.
    pub fn cuts(&self) -> impl Iterator<Item = (&Cut, Range<usize>)> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Split { cut, ranks, .. } => Some((cut, ranks.clone())),
            Node::Leaf { .. } => None,
        })
    }

    pub fn leaf_ranks(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { rank } => Some(*rank),
                Node::Split { .. } => None,
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { lower, greater, .. } => {
                    1 + walk(nodes, *lower).max(walk(nodes, *greater))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    /// For every leaf, the cuts on its root path and the side it lies on.
    pub fn leaf_regions(&self) -> Vec<(usize, Vec<(Cut, Side)>)> {
        let mut out = Vec::with_capacity(self.parts);
        let mut stack = vec![(0usize, Vec::new())];
        while let Some((at, path)) = stack.pop() {
            match &self.nodes[at] {
                Node::Leaf { rank } => out.push((*rank, path)),
                Node::Split {
                    cut,
                    lower,
                    greater,
                    ..
                } => {
                    let mut l = path.clone();
                    l.push((*cut, Side::LowerOrEqual));
                    let mut g = path;
                    g.push((*cut, Side::Greater));
                    stack.push((*lower, l));
                    stack.push((*greater, g));
                }
            }
        }
        out.sort_by_key(|(r, _)| *r);
        out
    }
}
