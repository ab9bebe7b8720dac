use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extensions::{make_parallel_pair, precompose, subst, LiftingSymbol, Signature, SymbolId, Term};
use crate::structural::LiftingProvider;

/// Images of the symbols of a tower, one per symbol that the target
/// interprets.
pub type Assignment<A> = BTreeMap<SymbolId, A>;

/// Something a tower can be mapped into, one symbol at a time.
pub trait LiftTarget {
    type Arrow: Clone;

    /// The image of `sym`, given the images of every earlier symbol.
    /// `None` when the symbol is outside what the target can interpret
    /// (for instance beyond a model's truncation).
    fn lift(&mut self, sym: &LiftingSymbol, done: &Assignment<Self::Arrow>) -> Result<Option<Self::Arrow>>;
}

/// Maps every symbol of `sig` into `target`, lowest level first, so each
/// pair is resolved after the symbols it mentions.
pub fn lift_into<T: LiftTarget>(sig: &Signature, target: &mut T) -> Result<Assignment<T::Arrow>> {
    let mut ordered: Vec<&LiftingSymbol> = sig.symbols().iter().collect();
    ordered.sort_by_key(|s| (s.level, s.id));
    let mut done = Assignment::new();
    for s in ordered {
        if let Some(a) = target.lift(s, &done)? {
            done.insert(s.id, a);
        }
    }
    Ok(done)
}

/// A lifting provider seen as a target: symbols go to terms of the
/// provider's signature.
pub struct SyntacticTarget<P: LiftingProvider> {
    pub provider: P,
}

impl<P: LiftingProvider> SyntacticTarget<P> {
    pub fn new(provider: P) -> Self {
        SyntacticTarget { provider }
    }
}

/// Rewrites `t` by replacing each symbol with its image.
pub fn translate(sig: &Signature, t: &Term, done: &Assignment<Term>) -> Result<Term> {
    match t {
        Term::Glob { .. } => Ok(t.clone()),
        Term::Lift { sym, post, pre } => {
            let comps = post.iter().map(|c| translate(sig, c, done)).collect::<Result<Vec<_>>>()?;
            let image = done.get(sym).ok_or(Error::UnknownSymbol(*sym))?;
            let moved = subst(sig, &comps, image)?;
            precompose(sig, &moved, pre)
        }
    }
}

impl<P: LiftingProvider> LiftTarget for SyntacticTarget<P> {
    type Arrow = Term;

    fn lift(&mut self, sym: &LiftingSymbol, done: &Assignment<Term>) -> Result<Option<Term>> {
        let sig = self.provider.signature();
        let f = translate(sig, sym.pair.f(), done)?;
        let g = translate(sig, sym.pair.g(), done)?;
        let pair = make_parallel_pair(sig, &f, &g)?;
        self.provider.lift(&pair).map(Some)
    }
}
