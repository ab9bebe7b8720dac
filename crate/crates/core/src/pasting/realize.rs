use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::globes::{hom_globes, Dim, GlobeMap};

use super::globular_set::{hom_sets, CellRef, GSMorphism, GlobularSet};
use super::table::{boundary_runs, dimension, Table};

/// The globular sum of a table computed as an explicit colimit.
///
/// Cells are equivalence classes of pairs `(summand, globe map into that
/// summand's disk)`; every such pair is kept in `index` so that arrows out of
/// a disk summand can be resolved to cells.
#[derive(Debug)]
pub struct Realization {
    table: Table,
    set: GlobularSet,
    reps: Vec<Vec<(usize, GlobeMap)>>,
    index: HashMap<(usize, GlobeMap), CellRef>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so representatives are leftmost
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// All cells of `D_n`, seen as the globe maps into it.
fn disk_cells(n: Dim) -> Vec<GlobeMap> {
    (0..=n).flat_map(|j| hom_globes(j, n)).collect()
}

impl Realization {
    fn build(table: &Table) -> Realization {
        let mut nodes: Vec<(usize, GlobeMap)> = Vec::new();
        for (k, &i) in table.tops().iter().enumerate() {
            for g in disk_cells(i) {
                nodes.push((k, g));
            }
        }
        nodes.sort();
        let pos: HashMap<(usize, GlobeMap), usize> = nodes.iter().enumerate().map(|(n, &key)| (key, n)).collect();
        let mut uf = UnionFind::new(nodes.len());
        for (k, &b) in table.bottoms().iter().enumerate() {
            let left = GlobeMap::source(b, table.tops()[k]);
            let right = GlobeMap::target(b, table.tops()[k + 1]);
            for c in disk_cells(b) {
                let l = (k, left.after(&c).expect("composable"));
                let r = (k + 1, right.after(&c).expect("composable"));
                uf.union(pos[&l], pos[&r]);
            }
        }
        let dim = dimension(table);
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for n in 0..nodes.len() {
            classes.entry(uf.find(n)).or_default().push(n);
        }
        let mut reps: Vec<Vec<(usize, GlobeMap)>> = vec![Vec::new(); dim + 1];
        let mut root_cell: HashMap<usize, CellRef> = HashMap::new();
        // roots are the minimal members, and BTreeMap iterates them in order
        for &root in classes.keys() {
            let (k, g) = nodes[root];
            let d = g.src_dim();
            root_cell.insert(root, CellRef::new(d, reps[d].len()));
            reps[d].push((k, g));
        }
        let mut index = HashMap::new();
        for (n, &key) in nodes.iter().enumerate() {
            index.insert(key, root_cell[&uf.find(n)]);
        }
        let mut cells = Vec::new();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (d, level) in reps.iter().enumerate() {
            cells.push(level.iter().map(|(k, g)| format!("{k}:{g}")).collect::<Vec<_>>());
            if d == 0 {
                src.push(Vec::new());
                tgt.push(Vec::new());
                continue;
            }
            let face = |g: &GlobeMap, h: GlobeMap, k: usize| index[&(k, g.after(&h).expect("composable"))];
            src.push(level.iter().map(|(k, g)| face(g, GlobeMap::sigma(d), *k).index).collect());
            tgt.push(level.iter().map(|(k, g)| face(g, GlobeMap::tau(d), *k).index).collect());
        }
        let set = GlobularSet { trunc: dim, cells, src, tgt };
        Realization { table: table.clone(), set, reps, index }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn set(&self) -> &GlobularSet {
        &self.set
    }

    /// The cell `can_k ∘ g`.
    pub fn cell_of(&self, summand: usize, g: &GlobeMap) -> Option<CellRef> {
        self.index.get(&(summand, *g)).copied()
    }

    /// The top cell of summand `k`, i.e. the arrow `can_k`.
    pub fn top(&self, summand: usize) -> CellRef {
        let i = self.table.tops()[summand];
        self.index[&(summand, GlobeMap::identity(i))]
    }

    /// Canonical `(summand, globe map)` representative of a cell (leftmost summand).
    pub fn rep(&self, cell: CellRef) -> (usize, GlobeMap) {
        self.reps[cell.dim][cell.index]
    }

    /// `cell ∘ g`: the face of a cell along a globe map into its dimension.
    pub fn face(&self, cell: CellRef, g: &GlobeMap) -> CellRef {
        debug_assert_eq!(g.tgt_dim(), cell.dim);
        CellRef::new(g.src_dim(), self.set.act(g, cell.index))
    }

    pub fn cell_count(&self) -> usize {
        self.set.total_cells()
    }

    /// All cells in the image of the disk map `D_{cell.dim} -> T` picked by `cell`.
    pub fn closure(&self, cell: CellRef) -> Vec<CellRef> {
        disk_cells(cell.dim).iter().map(|g| self.face(cell, g)).collect()
    }
}

fn cache() -> &'static Mutex<HashMap<Table, Arc<Realization>>> {
    static CACHE: OnceLock<Mutex<HashMap<Table, Arc<Realization>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The realization of a table, truncated at its own dimension (memoized).
pub fn realization(table: &Table) -> Arc<Realization> {
    if let Some(r) = cache().lock().expect("cache poisoned").get(table) {
        return Arc::clone(r);
    }
    let built = Arc::new(Realization::build(table));
    cache().lock().expect("cache poisoned").entry(table.clone()).or_insert(built).clone()
}

/// The globular sum prescribed by `table`, truncated at `trunc`.
pub fn realize(table: &Table, trunc: Dim) -> Result<GlobularSet> {
    let dim = dimension(table);
    if trunc < dim {
        return Err(Error::Truncation { needed: dim, given: trunc });
    }
    let mut set = realization(table).set().clone();
    while set.trunc < trunc {
        set.cells.push(Vec::new());
        set.src.push(Vec::new());
        set.tgt.push(Vec::new());
        set.trunc += 1;
    }
    Ok(set)
}

/// Number of cells of the globular sum, from the table alone.
pub fn cell_count_formula(table: &Table) -> usize {
    let disks: usize = table.tops().iter().map(|i| 2 * i + 1).sum();
    let glued: usize = table.bottoms().iter().map(|b| 2 * b + 1).sum();
    disks - glued
}

/// The morphism `realize(from) -> realize(to)` sending the top cell of summand
/// `k` to `images[k]`; fails when the images do not satisfy the gluing
/// conditions.
pub fn extend_from_tops(from: &Table, to: &Table, images: &[CellRef]) -> Result<GSMorphism> {
    let src = realization(from);
    let dst = realization(to);
    if images.len() != from.len() {
        return Err(Error::NotAMorphism(format!(
            "{} summands need {} images, got {}",
            from.len(),
            from.len(),
            images.len()
        )));
    }
    for (k, img) in images.iter().enumerate() {
        if img.dim != from.tops()[k] || img.index >= dst.set().count(img.dim) {
            return Err(Error::NotAMorphism(format!("image of summand {k} has the wrong shape")));
        }
    }
    let mut maps: Vec<Vec<Option<usize>>> = src.set().cells.iter().map(|c| vec![None; c.len()]).collect();
    for (&(k, g), &cell) in &src.index {
        let img = dst.face(images[k], &g);
        let slot = &mut maps[cell.dim][cell.index];
        match slot {
            Some(prev) if *prev != img.index => {
                return Err(Error::NotAMorphism(format!(
                    "images disagree on the glued cell {}:{}",
                    cell.dim, cell.index
                )));
            }
            _ => *slot = Some(img.index),
        }
    }
    let m = GSMorphism {
        maps: maps
            .into_iter()
            .map(|v| v.into_iter().map(|x| x.expect("every cell has a preimage")).collect())
            .collect(),
    };
    m.check(src.set(), dst.set())?;
    Ok(m)
}

/// The generalized cosource and cotarget `∂T -> T` as top-cell images.
pub fn cosource_cotarget_tops(t: &Table) -> Result<(Table, Vec<CellRef>, Vec<CellRef>)> {
    let (bd, runs) = boundary_runs(t)?;
    let i = dimension(t);
    let real = realization(t);
    let mut sigma = Vec::new();
    let mut tau = Vec::new();
    for &(first, last) in &runs {
        let d = t.tops()[first];
        if d == i {
            sigma.push(real.cell_of(last, &GlobeMap::sigma(i)).expect("face exists"));
            tau.push(real.cell_of(first, &GlobeMap::tau(i)).expect("face exists"));
        } else {
            sigma.push(real.top(first));
            tau.push(real.top(first));
        }
    }
    Ok((bd, sigma, tau))
}

/// The maps `σ_T, τ_T : realize(∂T) -> realize(T)`.
pub fn cosource_cotarget(t: &Table) -> Result<(GSMorphism, GSMorphism)> {
    let (bd, sigma, tau) = cosource_cotarget_tops(t)?;
    Ok((extend_from_tops(&bd, t, &sigma)?, extend_from_tops(&bd, t, &tau)?))
}

/// All morphisms `realize(s) -> realize(t)` of `Θ₀`, by exhaustive search.
pub fn hom_theta0(s: &Table, t: &Table) -> Vec<GSMorphism> {
    hom_sets(realization(s).set(), realization(t).set())
}

/// A globular sum sitting inside another one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubDiagram {
    pub table: Table,
    pub tops: Vec<CellRef>,
    pub image: Vec<CellRef>,
}

fn sub_cache() -> &'static Mutex<HashMap<Table, Arc<Vec<SubDiagram>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Table, Arc<Vec<SubDiagram>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every injective map of `Θ₀` into `t`, one per image (objects are rigid, so
/// the image determines the map). Sorted by image size.
pub fn sub_diagrams(t: &Table) -> Arc<Vec<SubDiagram>> {
    if let Some(r) = sub_cache().lock().expect("cache poisoned").get(t) {
        return Arc::clone(r);
    }
    let real = realization(t);
    let mut out = Vec::new();
    let all: Vec<CellRef> = real.set().iter_cells().collect();
    struct Frame {
        tops: Vec<Dim>,
        bottoms: Vec<Dim>,
        cells: Vec<CellRef>,
        image: std::collections::BTreeSet<CellRef>,
    }
    fn go(real: &Realization, all: &[CellRef], f: &mut Frame, out: &mut Vec<SubDiagram>) {
        let table = Table::new(f.tops.clone(), f.bottoms.clone()).expect("valid by construction");
        out.push(SubDiagram { table, tops: f.cells.clone(), image: f.image.iter().copied().collect() });
        let last = *f.cells.last().expect("non-empty");
        for b in 0..last.dim {
            let anchor = real.face(last, &GlobeMap::source(b, last.dim));
            for &next in all.iter().filter(|c| c.dim > b) {
                if real.face(next, &GlobeMap::target(b, next.dim)) != anchor {
                    continue;
                }
                let added = real.closure(next);
                let fresh = added.iter().filter(|c| !f.image.contains(c)).count();
                // injective iff exactly the cells outside the glued D_b are new
                if fresh != (2 * next.dim + 1) - (2 * b + 1) {
                    continue;
                }
                let before = f.image.clone();
                f.image.extend(added);
                f.tops.push(next.dim);
                f.bottoms.push(b);
                f.cells.push(next);
                go(real, all, f, out);
                f.cells.pop();
                f.bottoms.pop();
                f.tops.pop();
                f.image = before;
            }
        }
    }
    for &c in &all {
        let mut frame = Frame {
            tops: vec![c.dim],
            bottoms: Vec::new(),
            cells: vec![c],
            image: real.closure(c).into_iter().collect(),
        };
        go(&real, &all, &mut frame, &mut out);
    }
    out.sort_by(|a, b| a.image.len().cmp(&b.image.len()).then_with(|| a.table.cmp(&b.table)));
    let out = Arc::new(out);
    sub_cache().lock().expect("cache poisoned").entry(t.clone()).or_insert(out).clone()
}

#[cfg(test)]
mod tests {
    use super::super::table::enumerate_tables;
    use super::*;

    fn t(s: &str) -> Table {
        s.parse().unwrap()
    }

    #[test]
    fn realize_examples() {
        let p = realize(&t("(0)"), 0).unwrap();
        assert_eq!(p.count(0), 1);
        let d2 = realize(&t("(2)"), 2).unwrap();
        assert_eq!((d2.count(0), d2.count(1), d2.count(2)), (2, 2, 1));
        let comp = realize(&t("(1 1 | 0)"), 1).unwrap();
        assert_eq!((comp.count(0), comp.count(1)), (3, 2));
        assert!(matches!(realize(&t("(2)"), 1), Err(Error::Truncation { .. })));
        assert_eq!(realize(&t("(1)"), 3).unwrap().trunc, 3);
    }

    #[test]
    fn cell_counts_match_formula() {
        for table in enumerate_tables(3, 4) {
            assert_eq!(realization(&table).cell_count(), cell_count_formula(&table), "{table}");
        }
    }

    #[test]
    fn gluing_identifies_source_with_target() {
        let r = realization(&t("(1 1 | 0)"));
        let s_first = r.cell_of(0, &GlobeMap::sigma(1)).unwrap();
        let t_second = r.cell_of(1, &GlobeMap::tau(1)).unwrap();
        assert_eq!(s_first, t_second);
        assert_ne!(r.cell_of(0, &GlobeMap::tau(1)), r.cell_of(1, &GlobeMap::sigma(1)));
    }

    #[test]
    fn hom_theta0_examples() {
        assert_eq!(hom_theta0(&t("(0)"), &t("(1)")).len(), 2);
        assert_eq!(hom_theta0(&t("(1)"), &t("(1 1 | 0)")).len(), 2);
        for table in enumerate_tables(2, 3) {
            assert!(hom_theta0(&table, &table).iter().any(GSMorphism::is_identity));
        }
    }

    #[test]
    fn cosource_cotarget_examples() {
        let (s, tt) = cosource_cotarget(&t("(1)")).unwrap();
        assert_eq!(s.maps[0], vec![0]);
        assert_eq!(tt.maps[0], vec![1]);
        let table = t("(2 2 | 0)");
        let (bd, sig, _) = cosource_cotarget_tops(&table).unwrap();
        assert_eq!(bd, t("(1 1 | 0)"));
        let r = realization(&table);
        assert_eq!(sig[0], r.cell_of(0, &GlobeMap::sigma(2)).unwrap());
        assert_eq!(sig[1], r.cell_of(1, &GlobeMap::sigma(2)).unwrap());
    }

    #[test]
    fn composite_boundary_is_outer_source_and_target() {
        let table = t("(1 1 | 0)");
        let (bd, sig, tau) = cosource_cotarget_tops(&table).unwrap();
        assert_eq!(bd, t("(0)"));
        let r = realization(&table);
        assert_eq!(sig[0], r.cell_of(1, &GlobeMap::sigma(1)).unwrap());
        assert_eq!(tau[0], r.cell_of(0, &GlobeMap::tau(1)).unwrap());
    }

    #[test]
    fn cosource_differs_from_cotarget_and_both_are_injective() {
        for table in enumerate_tables(3, 3).into_iter().filter(|x| x.dimension() > 0) {
            let (s, tt) = cosource_cotarget(&table).unwrap();
            assert_ne!(s, tt, "{table}");
            assert!(s.is_injective() && tt.is_injective(), "{table}");
        }
    }

    #[test]
    fn cosource_and_cotarget_agree_below_top_dimension() {
        for table in enumerate_tables(3, 3).into_iter().filter(|x| x.dimension() > 0) {
            let (_, sig, tau) = cosource_cotarget_tops(&table).unwrap();
            let top = table.dimension();
            for (a, b) in sig.iter().zip(&tau) {
                if a.dim + 1 < top || (a.dim + 1 == top && a == b) {
                    assert_eq!(a, b, "{table}");
                }
            }
        }
    }

    #[test]
    fn sub_diagrams_of_small_tables() {
        // D_1 contains two points and itself
        let subs = sub_diagrams(&t("(1)"));
        assert_eq!(subs.len(), 3);
        // the composite of two arrows contains each arrow and the composite
        let subs = sub_diagrams(&t("(1 1 | 0)"));
        assert_eq!(subs.iter().filter(|s| s.table == t("(1)")).count(), 2);
        assert_eq!(subs.iter().filter(|s| s.table == t("(1 1 | 0)")).count(), 1);
    }

    #[test]
    fn sub_diagrams_agree_with_injective_homs() {
        for table in enumerate_tables(2, 3) {
            let subs = sub_diagrams(&table);
            for s in enumerate_tables(2, 4) {
                let brute = hom_theta0(&s, &table).into_iter().filter(|m| m.is_injective()).count();
                let fast = subs.iter().filter(|d| d.table == s).count();
                assert_eq!(brute, fast, "{s} into {table}");
            }
        }
    }
}
