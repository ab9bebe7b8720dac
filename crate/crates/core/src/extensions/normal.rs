use std::sync::Arc;

use crate::error::{Error, Result};
use crate::globes::{GlobeMap, Polarity};
use crate::pasting::{realization, Table};

use super::signature::{ParallelPair, Signature};
use super::term::Term;

/// `t ∘ g` in normal form, for `t` in normal form.
pub fn precompose(sig: &Signature, t: &Term, g: &GlobeMap) -> Result<Term> {
    if g.tgt_dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: g.tgt_dim() });
    }
    if g.is_identity() {
        return Ok(t.clone());
    }
    match t {
        Term::Glob { cod, cell } => {
            let face = realization(cod).face(*cell, g);
            Ok(Term::Glob { cod: Arc::clone(cod), cell: face })
        }
        Term::Lift { sym, post, pre } => {
            let g = pre.after(g)?;
            if g.is_identity() {
                return Ok(t.clone());
            }
            // h ∘ s^n_j = f ∘ s^{n-1}_j and h ∘ t^n_j = g ∘ t^{n-1}_j
            let s = sig.get(*sym)?;
            let n = s.out_dim();
            let (base, rest) = match g.polarity() {
                Polarity::Source => (&s.pair.f, GlobeMap::new(g.src_dim(), n - 1, Polarity::Source)),
                _ => (&s.pair.g, GlobeMap::new(g.src_dim(), n - 1, Polarity::Target)),
            };
            let inner = if g.src_dim() == n - 1 { base.clone() } else { precompose(sig, base, &rest?)? };
            subst(sig, post, &inner)
        }
    }
}

/// Postcomposition of a term `t : D_j -> X` with the arrow `X -> T` whose
/// summand restrictions are `post`. Both inputs are in normal form.
pub fn subst(sig: &Signature, post: &[Term], t: &Term) -> Result<Term> {
    match t {
        Term::Glob { cod, cell } => {
            let real = realization(cod);
            let (k, g) = real.rep(*cell);
            let comp = post.get(k).ok_or_else(|| Error::IllFormed(format!("no component for summand {k}")))?;
            precompose(sig, comp, &g)
        }
        Term::Lift { sym, post: inner, pre } => {
            let comps = inner.iter().map(|c| subst(sig, post, c)).collect::<Result<Vec<_>>>()?;
            let lifted = Term::Lift { sym: *sym, post: comps.into(), pre: GlobeMap::identity(pre.tgt_dim()) };
            precompose(sig, &lifted, pre)
        }
    }
}

/// Checks the colimit compatibility of `comps` as an arrow out of `dom`.
pub fn check_compatible(sig: &Signature, dom: &Table, comps: &[Term]) -> Result<()> {
    if comps.len() != dom.len() {
        return Err(Error::IllFormed(format!("{dom} needs {} components, got {}", dom.len(), comps.len())));
    }
    let cod = comps[0].cod();
    for (k, c) in comps.iter().enumerate() {
        if c.dim() != dom.tops()[k] {
            return Err(Error::IllFormed(format!(
                "component {k} has domain D_{} but summand {k} of {dom} is D_{}",
                c.dim(),
                dom.tops()[k]
            )));
        }
        if c.cod() != cod {
            return Err(Error::IllFormed(format!("components land in {cod} and {}", c.cod())));
        }
    }
    for (k, &b) in dom.bottoms().iter().enumerate() {
        let left = precompose(sig, &comps[k], &GlobeMap::source(b, dom.tops()[k]))?;
        let right = precompose(sig, &comps[k + 1], &GlobeMap::target(b, dom.tops()[k + 1]))?;
        if left != right {
            return Err(Error::IllFormed(format!("components {k} and {} disagree on D_{b}", k + 1)));
        }
    }
    Ok(())
}

/// Normal form of an arbitrary well-formed term.
pub fn normalize(sig: &Signature, t: &Term) -> Result<Term> {
    match t {
        Term::Glob { cod, cell } => {
            if cell.index >= realization(cod).set().count(cell.dim) {
                return Err(Error::CellOutOfRange { dim: cell.dim, index: cell.index });
            }
            Ok(t.clone())
        }
        Term::Lift { sym, post, pre } => {
            let s = sig.get(*sym)?;
            if pre.tgt_dim() != s.out_dim() {
                return Err(Error::IllFormed(format!(
                    "h#{sym} has domain D_{} but is precomposed with {pre}",
                    s.out_dim()
                )));
            }
            let comps = post.iter().map(|c| normalize(sig, c)).collect::<Result<Vec<_>>>()?;
            check_compatible(sig, s.codomain(), &comps)?;
            let head = Term::Lift { sym: *sym, post: comps.into(), pre: GlobeMap::identity(s.out_dim()) };
            precompose(sig, &head, pre)
        }
    }
}

/// `(t ∘ σ, t ∘ τ)` in normal form.
pub fn boundary_of(sig: &Signature, t: &Term) -> Result<(Term, Term)> {
    let j = t.dim();
    if j == 0 {
        return Err(Error::ZeroDimensional);
    }
    Ok((precompose(sig, t, &GlobeMap::sigma(j))?, precompose(sig, t, &GlobeMap::tau(j))?))
}

pub fn equal(sig: &Signature, a: &Term, b: &Term) -> Result<bool> {
    Ok(normalize(sig, a)? == normalize(sig, b)?)
}

/// Validates `(f, g)` as a pair of parallel arrows.
pub fn make_parallel_pair(sig: &Signature, f: &Term, g: &Term) -> Result<ParallelPair> {
    let f = normalize(sig, f)?;
    let g = normalize(sig, g)?;
    if f.dim() != g.dim() {
        return Err(Error::NotParallel(format!("domains D_{} and D_{} differ", f.dim(), g.dim())));
    }
    if f.cod() != g.cod() {
        return Err(Error::NotParallel(format!("codomains {} and {} differ", f.cod(), g.cod())));
    }
    if f.dim() > 0 {
        let (fs, ft) = boundary_of(sig, &f)?;
        let (gs, gt) = boundary_of(sig, &g)?;
        if fs != gs {
            return Err(Error::NotParallel(format!("sources differ: {fs} vs {gs}")));
        }
        if ft != gt {
            return Err(Error::NotParallel(format!("targets differ: {ft} vs {gt}")));
        }
    }
    Ok(ParallelPair { f, g })
}
