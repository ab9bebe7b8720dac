use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::globes::Dim;
use crate::pasting::Table;

use super::term::{SymbolId, Term};

/// A validated pair of parallel arrows `f, g : D_i -> T`, both in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParallelPair {
    pub(crate) f: Term,
    pub(crate) g: Term,
}

impl ParallelPair {
    pub fn f(&self) -> &Term {
        &self.f
    }

    pub fn g(&self) -> &Term {
        &self.g
    }

    pub fn dim(&self) -> Dim {
        self.f.dim()
    }

    pub fn cod(&self) -> &Table {
        self.f.cod()
    }

    /// `(g, f)`; parallelism is symmetric.
    pub fn swapped(&self) -> ParallelPair {
        ParallelPair { f: self.g.clone(), g: self.f.clone() }
    }

    pub fn size(&self) -> usize {
        self.f.size() + self.g.size()
    }
}

impl std::fmt::Display for ParallelPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{}, {}>", self.f, self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingSymbol {
    pub id: SymbolId,
    pub level: usize,
    pub pair: ParallelPair,
}

impl LiftingSymbol {
    pub fn out_dim(&self) -> Dim {
        self.pair.dim() + 1
    }

    pub fn codomain(&self) -> &Table {
        self.pair.cod()
    }
}

/// The symbols adjoined at one stage of a tower.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionLevel {
    pub index: usize,
    pub symbols: Vec<SymbolId>,
}

/// All lifting symbols known so far, across levels.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: Vec<LiftingSymbol>,
    index: HashMap<SymbolId, usize>,
    by_pair: HashMap<ParallelPair, Vec<SymbolId>>,
    weights: HashMap<SymbolId, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: SymbolId) -> Result<&LiftingSymbol> {
        self.index.get(&id).map(|&n| &self.symbols[n]).ok_or(Error::UnknownSymbol(id))
    }

    pub fn symbols(&self) -> &[LiftingSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn next_id(&self) -> SymbolId {
        self.symbols.iter().map(|s| s.id + 1).max().unwrap_or(0)
    }

    pub fn max_level(&self) -> usize {
        self.symbols.iter().map(|s| s.level).max().unwrap_or(0)
    }

    /// Symbols adjoined for exactly this pair, in adjunction order.
    pub fn liftings_of(&self, pair: &ParallelPair) -> &[SymbolId] {
        self.by_pair.get(pair).map_or(&[], Vec::as_slice)
    }

    /// The sub-signature of symbols up to `level`.
    pub fn up_to(&self, level: usize) -> Signature {
        let mut out = Signature::new();
        for s in self.symbols.iter().filter(|s| s.level <= level) {
            out.push(s.clone());
        }
        out
    }

    /// Size of a term with every lifting node unfolded into the pair it
    /// lifts: `Glob` weighs 1 and `h` weighs `1 + |f_h| + |g_h|`.
    pub fn weight(&self, t: &Term) -> usize {
        match t {
            Term::Glob { .. } => 1,
            Term::Lift { sym, post, .. } => {
                self.symbol_weight(*sym) + post.iter().map(|c| self.weight(c)).sum::<usize>()
            }
        }
    }

    pub fn symbol_weight(&self, id: SymbolId) -> usize {
        self.weights.get(&id).copied().unwrap_or(1)
    }

    fn push(&mut self, s: LiftingSymbol) {
        let w = 1 + self.weight(&s.pair.f) + self.weight(&s.pair.g);
        self.weights.insert(s.id, w);
        self.index.insert(s.id, self.symbols.len());
        self.by_pair.entry(s.pair.clone()).or_default().push(s.id);
        self.symbols.push(s);
    }

    /// Adjoins one symbol lifting `pair` at `level`.
    pub fn add_symbol(&mut self, level: usize, pair: ParallelPair, id: Option<SymbolId>) -> Result<SymbolId> {
        let id = id.unwrap_or_else(|| self.next_id());
        if self.index.contains_key(&id) {
            return Err(Error::Invalid(format!("symbol h#{id} already exists")));
        }
        let mut used = Vec::new();
        pair.f.symbols(&mut used);
        pair.g.symbols(&mut used);
        for u in used {
            let s = self.get(u)?;
            if s.level >= level {
                return Err(Error::Invalid(format!("pair for level {level} refers to h#{u} of level {}", s.level)));
            }
        }
        self.push(LiftingSymbol { id, level, pair });
        Ok(id)
    }

    /// The free adjunction of one lifting per pair: a new level whose symbols
    /// are numbered consecutively in the order of `pairs`.
    pub fn add_liftings(&mut self, level: usize, pairs: &[ParallelPair]) -> Result<ExtensionLevel> {
        let mut symbols = Vec::with_capacity(pairs.len());
        for p in pairs {
            symbols.push(self.add_symbol(level, p.clone(), None)?);
        }
        Ok(ExtensionLevel { index: level, symbols })
    }

    /// As [`Signature::add_liftings`], with caller-chosen identifiers.
    pub fn add_liftings_with_ids(
        &mut self,
        level: usize,
        pairs: &[(SymbolId, ParallelPair)],
    ) -> Result<ExtensionLevel> {
        let mut symbols = Vec::with_capacity(pairs.len());
        for (id, p) in pairs {
            symbols.push(self.add_symbol(level, p.clone(), Some(*id))?);
        }
        Ok(ExtensionLevel { index: level, symbols })
    }
}
