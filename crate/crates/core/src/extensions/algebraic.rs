use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::Result;
use crate::pasting::{cosource_cotarget_tops, extend_from_tops, realization, sub_diagrams, CellRef, GSMorphism, Table};

use super::signature::ParallelPair;
use super::term::Term;

/// Cells of the codomain reached by the globular leaves of `t`, closed
/// under faces.
pub fn support(t: &Term) -> BTreeSet<CellRef> {
    let mut out = BTreeSet::new();
    fn go(t: &Term, out: &mut BTreeSet<CellRef>) {
        match t {
            Term::Glob { cod, cell } => out.extend(realization(cod).closure(*cell)),
            Term::Lift { post, .. } => post.iter().for_each(|c| go(c, out)),
        }
    }
    go(t, &mut out);
    out
}

/// Rewrites the globular leaves of `t` along a partial inverse of an
/// injective map into `t`'s codomain; `None` if some leaf is outside the image.
fn pull_back(t: &Term, inverse: &HashMap<CellRef, CellRef>, new_cod: &Arc<Table>) -> Option<Term> {
    match t {
        Term::Glob { cell, .. } => inverse.get(cell).map(|&c| Term::glob(new_cod, c)),
        Term::Lift { sym, post, pre } => {
            let comps = post.iter().map(|c| pull_back(c, inverse, new_cod)).collect::<Option<Vec<_>>>()?;
            Some(Term::Lift { sym: *sym, post: comps.into(), pre: *pre })
        }
    }
}

fn inverse_of(m: &GSMorphism) -> HashMap<CellRef, CellRef> {
    let mut inv = HashMap::new();
    for (d, level) in m.maps.iter().enumerate() {
        for (c, &img) in level.iter().enumerate() {
            inv.insert(CellRef::new(d, img), CellRef::new(d, c));
        }
    }
    inv
}

/// `t = m ∘ t'` for the injective globular arrow `m : from -> cod(t)`, if `t`
/// factors through it.
pub fn factor_through(t: &Term, from: &Table, m: &GSMorphism) -> Option<Term> {
    pull_back(t, &inverse_of(m), &Arc::new(from.clone()))
}

/// An arrow is algebraic when it factors through no proper globular sub-sum
/// of its codomain.
pub fn is_algebraic(t: &Term) -> bool {
    let supp = support(t);
    let total = realization(t.cod()).cell_count();
    !sub_diagrams(t.cod())
        .iter()
        .any(|s| s.image.len() < total && supp.iter().all(|c| s.image.binary_search(c).is_ok()))
}

/// `t = g ∘ t'` with `g` globular and `t'` algebraic. The globular part is an
/// injective map of `Θ₀`, returned with its source table.
pub fn algebraic_decompose(t: &Term) -> Result<(Table, GSMorphism, Term)> {
    let supp = support(t);
    let subs = sub_diagrams(t.cod());
    let best = subs
        .iter()
        .find(|s| supp.iter().all(|c| s.image.binary_search(c).is_ok()))
        .expect("the identity sub-diagram contains every support");
    let m = extend_from_tops(&best.table, t.cod(), &best.tops)?;
    let residue = factor_through(t, &best.table, &m).expect("support lies in the image");
    Ok((best.table.clone(), m, residue))
}

/// Both arrows algebraic, or `f = σ_T f'` and `g = τ_T g'` with `f', g'`
/// algebraic.
pub fn is_admissible(p: &ParallelPair) -> bool {
    if is_algebraic(p.f()) && is_algebraic(p.g()) {
        return true;
    }
    let t = p.cod();
    if t.dimension() == 0 {
        return false;
    }
    let Ok((bd, sigma, tau)) = cosource_cotarget_tops(t) else {
        return false;
    };
    let residue = |term: &Term, tops: &[CellRef]| -> Option<Term> {
        let m = extend_from_tops(&bd, t, tops).ok()?;
        factor_through(term, &bd, &m)
    };
    match (residue(p.f(), &sigma), residue(p.g(), &tau)) {
        (Some(f), Some(g)) => is_algebraic(&f) && is_algebraic(&g),
        _ => false,
    }
}
