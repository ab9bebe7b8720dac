use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::globes::{Dim, GlobeMap, Polarity};

/// A cell of a globular set: its dimension and index among cells of that
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub dim: Dim,
    pub index: usize,
}

impl CellRef {
    pub fn new(dim: Dim, index: usize) -> Self {
        CellRef { dim, index }
    }
}

/// A finite globular set truncated at dimension `trunc`.
///
/// `src[k][c]` and `tgt[k][c]` give the index of the source and target of the
/// `c`-th cell of dimension `k` among the cells of dimension `k - 1`; both are
/// empty for `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobularSet {
    pub trunc: Dim,
    pub cells: Vec<Vec<String>>,
    pub src: Vec<Vec<usize>>,
    pub tgt: Vec<Vec<usize>>,
}

impl GlobularSet {
    /// Checks array shapes and the globular relations.
    pub fn new(cells: Vec<Vec<String>>, src: Vec<Vec<usize>>, tgt: Vec<Vec<usize>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Invalid("a globular set needs at least dimension 0".into()));
        }
        let set = GlobularSet { trunc: cells.len() - 1, cells, src, tgt };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.trunc + 1;
        if self.cells.len() != n || self.src.len() != n || self.tgt.len() != n {
            return Err(Error::Invalid("cells/src/tgt must have trunc + 1 levels".into()));
        }
        if !self.src[0].is_empty() || !self.tgt[0].is_empty() {
            return Err(Error::Invalid("0-cells have no boundary".into()));
        }
        for k in 1..n {
            let count = self.cells[k].len();
            if self.src[k].len() != count || self.tgt[k].len() != count {
                return Err(Error::Invalid(format!("boundary arrays of dimension {k} have wrong length")));
            }
            let below = self.cells[k - 1].len();
            for c in 0..count {
                let (s, t) = (self.src[k][c], self.tgt[k][c]);
                if s >= below || t >= below {
                    return Err(Error::CellOutOfRange { dim: k - 1, index: s.max(t) });
                }
                if k >= 2 {
                    let (ss, st) = (self.src[k - 1][s], self.src[k - 1][t]);
                    let (ts, tt) = (self.tgt[k - 1][s], self.tgt[k - 1][t]);
                    if ss != st || ts != tt {
                        return Err(Error::Invalid(format!("globular relations fail at cell {k}:{c}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn count(&self, dim: Dim) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn src_of(&self, cell: CellRef) -> Option<CellRef> {
        (cell.dim > 0).then(|| CellRef::new(cell.dim - 1, self.src[cell.dim][cell.index]))
    }

    pub fn tgt_of(&self, cell: CellRef) -> Option<CellRef> {
        (cell.dim > 0).then(|| CellRef::new(cell.dim - 1, self.tgt[cell.dim][cell.index]))
    }

    /// The action of a globe map on cells: `G(g)` sends an `n`-cell to its
    /// iterated source or target in dimension `j`.
    pub fn act(&self, g: &GlobeMap, index: usize) -> usize {
        let mut idx = index;
        let mut d = g.tgt_dim();
        while d > g.src_dim() {
            idx = match g.polarity() {
                Polarity::Source => self.src[d][idx],
                _ => self.tgt[d][idx],
            };
            d -= 1;
        }
        idx
    }

    pub fn iter_cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.cells.iter().enumerate().flat_map(|(d, cs)| (0..cs.len()).map(move |i| CellRef::new(d, i)))
    }

    /// Disjoint union, with labels prefixed to stay distinct.
    pub fn disjoint_union(&self, other: &GlobularSet) -> GlobularSet {
        let trunc = self.trunc.max(other.trunc);
        let mut cells = Vec::new();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for d in 0..=trunc {
            let a = self.cells.get(d).cloned().unwrap_or_default();
            let b = other.cells.get(d).cloned().unwrap_or_default();
            let below = if d == 0 { 0 } else { self.count(d - 1) };
            cells.push(a.iter().map(|l| format!("a.{l}")).chain(b.iter().map(|l| format!("b.{l}"))).collect());
            let shift = |v: Option<&Vec<usize>>, k: usize| -> Vec<usize> {
                v.map(|v| v.iter().map(|x| x + k).collect()).unwrap_or_default()
            };
            let mut s = shift(self.src.get(d), 0);
            s.extend(shift(other.src.get(d), below));
            let mut t = shift(self.tgt.get(d), 0);
            t.extend(shift(other.tgt.get(d), below));
            src.push(s);
            tgt.push(t);
        }
        GlobularSet { trunc, cells, src, tgt }
    }
}

/// A morphism of globular sets, given by one cell assignment per dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GSMorphism {
    pub maps: Vec<Vec<usize>>,
}

impl GSMorphism {
    pub fn identity(x: &GlobularSet) -> Self {
        GSMorphism { maps: x.cells.iter().map(|c| (0..c.len()).collect()).collect() }
    }

    pub fn apply(&self, cell: CellRef) -> CellRef {
        CellRef::new(cell.dim, self.maps[cell.dim][cell.index])
    }

    /// Checks that this assignment is a morphism `from -> to`.
    pub fn check(&self, from: &GlobularSet, to: &GlobularSet) -> Result<()> {
        if self.maps.len() != from.trunc + 1 {
            return Err(Error::NotAMorphism("wrong number of dimensions".into()));
        }
        for d in 0..=from.trunc {
            if self.maps[d].len() != from.count(d) {
                return Err(Error::NotAMorphism(format!("dimension {d} assignment has wrong length")));
            }
            for (c, &img) in self.maps[d].iter().enumerate() {
                if img >= to.count(d) {
                    return Err(Error::NotAMorphism(format!("cell {d}:{c} maps out of range")));
                }
                if d > 0 {
                    let s_ok = to.src[d][img] == self.maps[d - 1][from.src[d][c]];
                    let t_ok = to.tgt[d][img] == self.maps[d - 1][from.tgt[d][c]];
                    if !s_ok || !t_ok {
                        return Err(Error::NotAMorphism(format!("cell {d}:{c} does not commute with source/target")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut seen = m.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &GSMorphism) -> GSMorphism {
        GSMorphism {
            maps: inner.maps.iter().enumerate().map(|(d, m)| m.iter().map(|&c| self.maps[d][c]).collect()).collect(),
        }
    }
}

/// Every morphism of globular sets `from -> to`, by exhaustive backtracking
/// over dimension-preserving cell assignments (dimension-major order).
pub fn hom_sets(from: &GlobularSet, to: &GlobularSet) -> Vec<GSMorphism> {
    let order: Vec<CellRef> = from.iter_cells().collect();
    let mut maps: Vec<Vec<usize>> = from.cells.iter().map(|c| vec![usize::MAX; c.len()]).collect();
    let mut out = Vec::new();
    fn go(
        pos: usize,
        order: &[CellRef],
        from: &GlobularSet,
        to: &GlobularSet,
        maps: &mut Vec<Vec<usize>>,
        out: &mut Vec<GSMorphism>,
    ) {
        let Some(&cell) = order.get(pos) else {
            out.push(GSMorphism { maps: maps.clone() });
            return;
        };
        for cand in 0..to.count(cell.dim) {
            if cell.dim > 0 {
                let s = maps[cell.dim - 1][from.src[cell.dim][cell.index]];
                let t = maps[cell.dim - 1][from.tgt[cell.dim][cell.index]];
                if to.src[cell.dim][cand] != s || to.tgt[cell.dim][cand] != t {
                    continue;
                }
            }
            maps[cell.dim][cell.index] = cand;
            go(pos + 1, order, from, to, maps, out);
        }
        maps[cell.dim][cell.index] = usize::MAX;
    }
    go(0, &order, from, to, &mut maps, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> GlobularSet {
        GlobularSet::new(
            vec![vec!["a".into(), "b".into()], vec!["f".into()]],
            vec![vec![], vec![0]],
            vec![vec![], vec![1]],
        )
        .unwrap()
    }

    #[test]
    fn globular_relations_are_enforced() {
        // two 1-cells a -> b, a -> c and a 2-cell between them: not globular
        let bad = GlobularSet::new(
            vec![vec!["a".into(), "b".into(), "c".into()], vec!["f".into(), "g".into()], vec!["x".into()]],
            vec![vec![], vec![0, 0], vec![0]],
            vec![vec![], vec![1, 2], vec![1]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn identity_is_a_morphism() {
        let x = arrow();
        let id = GSMorphism::identity(&x);
        id.check(&x, &x).unwrap();
        assert!(id.is_identity());
        assert_eq!(hom_sets(&x, &x), vec![id]);
    }

    #[test]
    fn disjoint_union_counts() {
        let x = arrow();
        let u = x.disjoint_union(&x);
        u.validate().unwrap();
        assert_eq!(u.count(0), 4);
        assert_eq!(hom_sets(&x, &u).len(), 2);
    }
}
