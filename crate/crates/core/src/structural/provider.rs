use std::collections::HashMap;

use crate::coherators::{ExtensionTower, Flavor, TermEnumerator};
use crate::error::{Error, Result};
use crate::extensions::{is_admissible, symbol_term, ParallelPair, Signature, SymbolId, Term};

/// Something that answers parallel pairs with liftings.
pub trait LiftingProvider {
    fn signature(&self) -> &Signature;

    /// A term `h` with `boundary_of(h) = (p.f, p.g)`.
    fn lift(&mut self, p: &ParallelPair) -> Result<Term>;
}

/// One more than the highest level of a symbol occurring in `p`.
fn level_above(sig: &Signature, p: &ParallelPair) -> usize {
    let mut used = Vec::new();
    p.f().symbols(&mut used);
    p.g().symbols(&mut used);
    1 + used.iter().map(|&u| sig.get(u).map_or(0, |s| s.level)).max().unwrap_or(0)
}

/// The free coherator built lazily: every requested pair gets one formal
/// lifting, adjoined at the level just above the symbols it mentions.
#[derive(Debug, Clone)]
pub struct FreeProvider {
    sig: Signature,
    flavor: Flavor,
    memo: HashMap<ParallelPair, SymbolId>,
}

impl FreeProvider {
    pub fn new(flavor: Flavor) -> Self {
        FreeProvider { sig: Signature::new(), flavor, memo: HashMap::new() }
    }

    /// Starts from an existing signature, e.g. a built tower.
    pub fn over(sig: Signature, flavor: Flavor) -> Self {
        FreeProvider { sig, flavor, memo: HashMap::new() }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    fn level_for(&self, p: &ParallelPair) -> usize {
        level_above(&self.sig, p)
    }

    fn check_flavor(&self, p: &ParallelPair) -> Result<()> {
        if self.flavor == Flavor::Category && !is_admissible(p) {
            return Err(Error::NotAdmissible(p.to_string()));
        }
        Ok(())
    }

    /// A second, distinct lifting of `p`; liftings are not unique.
    pub fn fresh_lift(&mut self, p: &ParallelPair) -> Result<Term> {
        self.check_flavor(p)?;
        let level = self.level_for(p);
        let id = self.sig.add_symbol(level, p.clone(), None)?;
        symbol_term(&self.sig, id)
    }
}

impl LiftingProvider for FreeProvider {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn lift(&mut self, p: &ParallelPair) -> Result<Term> {
        if let Some(&id) = self.memo.get(p) {
            return symbol_term(&self.sig, id);
        }
        self.check_flavor(p)?;
        let level = self.level_for(p);
        let id = self.sig.add_symbol(level, p.clone(), None)?;
        self.memo.insert(p.clone(), id);
        symbol_term(&self.sig, id)
    }
}

/// Liftings looked up in a built tower: an adjoined symbol for the pair, or a
/// bounded search over the tower's terms. With `extend`, unanswered pairs are
/// adjoined freely above the tower instead of failing.
#[derive(Debug, Clone)]
pub struct TowerProvider {
    sig: Signature,
    top: usize,
    flavor: Flavor,
    search_bound: usize,
    extend: bool,
}

impl TowerProvider {
    pub fn new(tower: &ExtensionTower, search_bound: usize, extend: bool) -> Self {
        TowerProvider {
            sig: tower.signature().clone(),
            top: tower.top_level(),
            flavor: tower.flavor,
            search_bound,
            extend,
        }
    }
}

impl LiftingProvider for TowerProvider {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn lift(&mut self, p: &ParallelPair) -> Result<Term> {
        if let Some(&id) = self.sig.liftings_of(p).first() {
            return symbol_term(&self.sig, id);
        }
        {
            let en = TermEnumerator::new(&self.sig, usize::MAX);
            if let Some(t) =
                en.lifting_index(p.dim() + 1, p.cod(), self.search_bound).get(&(p.f().clone(), p.g().clone()))
            {
                return Ok(t.clone());
            }
        }
        if !self.extend {
            return Err(Error::ProviderFailure(p.to_string()));
        }
        if self.flavor == Flavor::Category && !is_admissible(p) {
            return Err(Error::NotAdmissible(p.to_string()));
        }
        let level = level_above(&self.sig, p).max(self.top + 1);
        let id = self.sig.add_symbol(level, p.clone(), None)?;
        symbol_term(&self.sig, id)
    }
}
