use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::extensions::{boundary_of, precompose, ParallelPair, Signature, SymbolId, Term};
use crate::globes::{Dim, GlobeMap};
use crate::pasting::{enumerate_tables, realization, CellRef, Table};

/// Memoized enumeration of normal-form terms `D_j -> T` of a given size over
/// the symbols of a signature up to some level.
///
/// Sizes are unfolded sizes ([`Signature::weight`]): a lifting node counts
/// the pair it lifts, so each size bound admits finitely many terms across
/// all levels.
type Key = (Dim, Table, usize);

/// Boundary pairs mapped to a lifting with that boundary.
pub type LiftingIndex = HashMap<(Term, Term), Term>;

pub struct TermEnumerator<'a> {
    sig: &'a Signature,
    by_dim: BTreeMap<Dim, Vec<SymbolId>>,
    tables: RefCell<HashMap<Table, Arc<Table>>>,
    cache: RefCell<HashMap<Key, Arc<Vec<Term>>>>,
    liftings: RefCell<HashMap<Key, Arc<LiftingIndex>>>,
}

impl<'a> TermEnumerator<'a> {
    pub fn new(sig: &'a Signature, level: usize) -> Self {
        let mut by_dim: BTreeMap<Dim, Vec<SymbolId>> = BTreeMap::new();
        for s in sig.symbols().iter().filter(|s| s.level <= level) {
            by_dim.entry(s.out_dim()).or_default().push(s.id);
        }
        TermEnumerator {
            sig,
            by_dim,
            tables: RefCell::default(),
            cache: RefCell::default(),
            liftings: RefCell::default(),
        }
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    fn intern(&self, t: &Table) -> Arc<Table> {
        self.tables.borrow_mut().entry(t.clone()).or_insert_with(|| Arc::new(t.clone())).clone()
    }

    /// Terms of exactly `size` nodes, in structural order.
    pub fn of_size(&self, j: Dim, t: &Table, size: usize) -> Arc<Vec<Term>> {
        let key = (j, t.clone(), size);
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Arc::clone(hit);
        }
        let out = Arc::new(self.compute(j, t, size));
        self.cache.borrow_mut().insert(key, Arc::clone(&out));
        out
    }

    /// Terms of at most `max_size` nodes, by size then structure.
    pub fn up_to(&self, j: Dim, t: &Table, max_size: usize) -> Vec<Term> {
        (1..=max_size).flat_map(|s| self.of_size(j, t, s).iter().cloned().collect::<Vec<_>>()).collect()
    }

    fn compute(&self, j: Dim, t: &Table, size: usize) -> Vec<Term> {
        if size == 0 {
            return Vec::new();
        }
        if size == 1 {
            let cod = self.intern(t);
            let n = realization(t).set().count(j);
            return (0..n).map(|i| Term::glob(&cod, CellRef::new(j, i))).collect();
        }
        let mut out = Vec::new();
        let Some(syms) = self.by_dim.get(&j) else {
            return out;
        };
        for &id in syms {
            let x = self.sig.get(id).expect("symbol from this signature").codomain().clone();
            let w = self.sig.symbol_weight(id);
            if w + x.len() > size {
                continue;
            }
            let mut comps = Vec::with_capacity(x.len());
            self.fill(id, j, &x, t, size - w, &mut comps, &mut out);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        id: SymbolId,
        j: Dim,
        x: &Table,
        t: &Table,
        budget: usize,
        comps: &mut Vec<Term>,
        out: &mut Vec<Term>,
    ) {
        let k = comps.len();
        let m = x.len();
        if k == m {
            if budget == 0 {
                out.push(Term::lift(id, comps.clone(), j));
            }
            return;
        }
        let rest = m - k - 1;
        if budget < rest + 1 {
            return;
        }
        // the last component takes whatever budget is left
        let sizes: Vec<usize> = if k + 1 == m { vec![budget] } else { (1..=budget - rest).collect() };
        let anchor = if k > 0 {
            let b = x.bottoms()[k - 1];
            Some((b, precompose(self.sig, &comps[k - 1], &GlobeMap::source(b, x.tops()[k - 1])).expect("face")))
        } else {
            None
        };
        for s in sizes {
            let cands = self.of_size(x.tops()[k], t, s);
            for c in cands.iter() {
                if let Some((b, left)) = &anchor {
                    let right = precompose(self.sig, c, &GlobeMap::target(*b, x.tops()[k])).expect("face");
                    if &right != left {
                        continue;
                    }
                }
                comps.push(c.clone());
                self.fill(id, j, x, t, budget - s, comps, out);
                comps.pop();
            }
        }
    }

    /// Maps each boundary pair to its first lifting among terms `D_j -> T` of
    /// at most `max_size` nodes.
    pub fn lifting_index(&self, j: Dim, t: &Table, max_size: usize) -> Arc<LiftingIndex> {
        let key = (j, t.clone(), max_size);
        if let Some(hit) = self.liftings.borrow().get(&key) {
            return Arc::clone(hit);
        }
        let mut index = HashMap::new();
        if j > 0 {
            for term in self.up_to(j, t, max_size) {
                let bd = boundary_of(self.sig, &term).expect("positive dimension");
                index.entry(bd).or_insert(term);
            }
        }
        let index = Arc::new(index);
        self.liftings.borrow_mut().insert(key, Arc::clone(&index));
        index
    }

    /// Every pair of parallel arrows `D_i -> T` with both sides of at most
    /// `max_size` nodes, `f` outer and `g` inner in term order.
    pub fn parallel_pairs(&self, i: Dim, t: &Table, max_size: usize) -> Vec<ParallelPair> {
        let terms = self.up_to(i, t, max_size);
        let mut out = Vec::new();
        if i == 0 {
            for f in &terms {
                for g in &terms {
                    out.push(ParallelPair { f: f.clone(), g: g.clone() });
                }
            }
            return out;
        }
        let bds: Vec<(Term, Term)> =
            terms.iter().map(|x| boundary_of(self.sig, x).expect("positive dimension")).collect();
        let mut classes: HashMap<&(Term, Term), Vec<usize>> = HashMap::new();
        for (n, b) in bds.iter().enumerate() {
            classes.entry(b).or_default().push(n);
        }
        for (n, f) in terms.iter().enumerate() {
            for &m in &classes[&bds[n]] {
                out.push(ParallelPair { f: f.clone(), g: terms[m].clone() });
            }
        }
        out
    }
}

/// Codomain tables considered by the enumeration bounds.
pub fn codomain_tables(max_dim: Dim, max_len: usize) -> Vec<Table> {
    enumerate_tables(max_dim, max_len)
}
