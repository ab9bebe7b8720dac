use std::fmt;

use crate::error::Result;

use super::table::Table;

/// A planar rooted tree; a table is read off its leaves.
///
/// Leaf `k` sits at height `i_k`, and the lowest common ancestor of leaves
/// `k` and `k+1` sits at height `i'_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    pub children: Vec<PlanarTree>,
}

impl PlanarTree {
    pub fn leaf() -> Self {
        PlanarTree { children: Vec::new() }
    }

    pub fn from_table(t: &Table) -> PlanarTree {
        fn build(tops: &[usize], bottoms: &[usize]) -> PlanarTree {
            if tops.len() == 1 && tops[0] == 0 {
                return PlanarTree::leaf();
            }
            let mut children = Vec::new();
            let mut start = 0;
            for k in 0..=bottoms.len() {
                if k == bottoms.len() || bottoms[k] == 0 {
                    let sub_tops: Vec<usize> = tops[start..=k].iter().map(|d| d - 1).collect();
                    let sub_bottoms: Vec<usize> = bottoms[start..k].iter().map(|d| d - 1).collect();
                    children.push(build(&sub_tops, &sub_bottoms));
                    start = k + 1;
                }
            }
            PlanarTree { children }
        }
        build(t.tops(), t.bottoms())
    }

    pub fn to_table(&self) -> Result<Table> {
        fn walk(node: &PlanarTree, h: usize, tops: &mut Vec<usize>, bottoms: &mut Vec<usize>) {
            if node.children.is_empty() {
                tops.push(h);
                return;
            }
            for (n, c) in node.children.iter().enumerate() {
                if n > 0 {
                    bottoms.push(h);
                }
                walk(c, h + 1, tops, bottoms);
            }
        }
        let (mut tops, mut bottoms) = (Vec::new(), Vec::new());
        walk(self, 0, &mut tops, &mut bottoms);
        Table::new(tops, bottoms)
    }

    pub fn leaves(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(PlanarTree::leaves).sum()
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::table::enumerate_tables;
    use super::*;

    #[test]
    fn disks_are_linear_trees() {
        let t: Table = "(2)".parse().unwrap();
        assert_eq!(PlanarTree::from_table(&t).to_string(), "[[[]]]");
    }

    #[test]
    fn composite_is_a_cherry() {
        let t: Table = "(1 1 | 0)".parse().unwrap();
        assert_eq!(PlanarTree::from_table(&t).to_string(), "[[][]]");
    }

    #[test]
    fn round_trip() {
        for t in enumerate_tables(3, 4) {
            let tree = PlanarTree::from_table(&t);
            assert_eq!(tree.leaves(), t.len());
            assert_eq!(tree.to_table().unwrap(), t);
        }
    }
}
