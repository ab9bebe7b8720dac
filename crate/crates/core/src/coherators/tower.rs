use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::{
    is_admissible, make_parallel_pair, ExtensionLevel, ParallelPair, Signature, SumArrow, SymbolId, Term,
};
use crate::globes::Dim;

use super::enumerate::{codomain_tables, TermEnumerator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Groupoid,
    Category,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "canonical")]
    Canonical,
    #[serde(rename = "bl")]
    BataninLeinster,
    #[serde(rename = "reduced")]
    Reduced,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "groupoid" => Ok(Flavor::Groupoid),
            "category" => Ok(Flavor::Category),
            _ => Err(Error::Parse(format!("unknown flavor `{s}`"))),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Strategy::Canonical),
            "bl" | "batanin-leinster" => Ok(Strategy::BataninLeinster),
            "reduced" => Ok(Strategy::Reduced),
            _ => Err(Error::Parse(format!("unknown strategy `{s}`"))),
        }
    }
}

/// Enumeration bounds: pairs `f, g : D_i -> T` with `i <= max_dim`,
/// `dim T <= max_dim`, at most `max_codomain_length` summands in `T`, and
/// each side of at most `max_term_size` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_dim: Dim,
    pub max_term_size: usize,
    pub max_codomain_length: usize,
    pub levels: usize,
}

pub const DEFAULT_CODOMAIN_LENGTH: usize = 2;

impl Bounds {
    pub fn new(max_dim: Dim, max_term_size: usize, levels: usize) -> Self {
        Bounds { max_dim, max_term_size, max_codomain_length: DEFAULT_CODOMAIN_LENGTH, levels }
    }

    pub fn with_codomain_length(mut self, len: usize) -> Self {
        self.max_codomain_length = len;
        self
    }
}

/// A bounded tower of definition `Θ₀ = C_0 -> C_1 -> ... -> C_n`.
#[derive(Debug, Clone)]
pub struct ExtensionTower {
    pub flavor: Flavor,
    pub strategy: Strategy,
    pub bounds: Bounds,
    sig: Signature,
    levels: Vec<ExtensionLevel>,
}

impl ExtensionTower {
    /// `Θ₀` alone.
    pub fn theta0(flavor: Flavor, strategy: Strategy, bounds: Bounds) -> Self {
        ExtensionTower { flavor, strategy, bounds, sig: Signature::new(), levels: vec![ExtensionLevel::default()] }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn levels(&self) -> &[ExtensionLevel] {
        &self.levels
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// The pairs adjoined at `level`, in symbol order.
    pub fn pairs_at(&self, level: usize) -> Vec<ParallelPair> {
        self.levels[level].symbols.iter().map(|&id| self.sig.get(id).expect("own symbol").pair.clone()).collect()
    }

    /// Adjoins a new level lifting `pairs`, with fresh consecutive ids.
    pub fn push_level(&mut self, pairs: &[ParallelPair]) -> Result<&ExtensionLevel> {
        let n = self.levels.len();
        let level = self.sig.add_liftings(n, pairs)?;
        self.levels.push(level);
        Ok(self.levels.last().expect("just pushed"))
    }

    /// Adjoins a new level with caller-chosen ids.
    pub fn push_level_with_ids(&mut self, pairs: &[(SymbolId, ParallelPair)]) -> Result<&ExtensionLevel> {
        let n = self.levels.len();
        let level = self.sig.add_liftings_with_ids(n, pairs)?;
        self.levels.push(level);
        Ok(self.levels.last().expect("just pushed"))
    }

    /// Packages a signature as a tower, one level per symbol level.
    pub fn from_signature(
        flavor: Flavor,
        strategy: Strategy,
        bounds: Bounds,
        sig: &Signature,
    ) -> Result<ExtensionTower> {
        let mut out = ExtensionTower::theta0(flavor, strategy, bounds);
        for level in 1..=sig.max_level() {
            let pairs: Vec<(SymbolId, ParallelPair)> =
                sig.symbols().iter().filter(|s| s.level == level).map(|s| (s.id, s.pair.clone())).collect();
            out.push_level_with_ids(&pairs)?;
        }
        Ok(out)
    }

    /// Copy of the tower whose last level keeps only its first `keep` symbols.
    pub fn truncate_last_level(&self, keep: usize) -> ExtensionTower {
        let mut out = ExtensionTower::theta0(self.flavor, self.strategy, self.bounds);
        for level in &self.levels[1..] {
            let mut ids = level.symbols.clone();
            if level.index == self.top_level() {
                ids.truncate(keep);
            }
            let pairs: Vec<(SymbolId, ParallelPair)> =
                ids.iter().map(|&id| (id, self.sig.get(id).expect("own symbol").pair.clone())).collect();
            out.push_level_with_ids(&pairs).expect("same pairs as before");
        }
        out
    }

    /// Parallel pairs of `C_level` within `bounds`, in enumeration order; in the
    /// category flavor only the admissible ones.
    pub fn enumerate_parallel_pairs(&self, level: usize, bounds: &Bounds) -> Vec<ParallelPair> {
        let en = TermEnumerator::new(&self.sig, level);
        enumerate_pairs_with(&en, self.flavor, bounds)
    }
}

pub(crate) fn enumerate_pairs_with(en: &TermEnumerator<'_>, flavor: Flavor, bounds: &Bounds) -> Vec<ParallelPair> {
    let mut out = Vec::new();
    for t in codomain_tables(bounds.max_dim, bounds.max_codomain_length) {
        for i in 0..=bounds.max_dim {
            for p in en.parallel_pairs(i, &t, bounds.max_term_size) {
                if flavor == Flavor::Groupoid || is_admissible(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Builds `bounds.levels` levels on top of `Θ₀`, each adjoining one lifting
/// for every pair of the previous level kept by the strategy.
pub fn build_tower(flavor: Flavor, strategy: Strategy, bounds: Bounds) -> ExtensionTower {
    let mut tower = ExtensionTower::theta0(flavor, strategy, bounds);
    let mut adjoined: HashSet<ParallelPair> = HashSet::new();
    for _ in 0..bounds.levels {
        let prev = tower.top_level();
        let pairs: Vec<ParallelPair> = {
            let en = TermEnumerator::new(&tower.sig, prev);
            let all = enumerate_pairs_with(&en, flavor, &bounds);
            match strategy {
                Strategy::Canonical => all,
                Strategy::BataninLeinster => all.into_iter().filter(|p| !adjoined.contains(p)).collect(),
                Strategy::Reduced => all
                    .into_iter()
                    .filter(|p| lifting_with(&en, &tower.sig, prev, p, bounds.max_term_size).is_none())
                    .collect(),
            }
        };
        adjoined.extend(pairs.iter().cloned());
        tower.push_level(&pairs).expect("pairs come from earlier levels");
    }
    tower
}

fn lifting_with(
    en: &TermEnumerator<'_>,
    sig: &Signature,
    level: usize,
    p: &ParallelPair,
    bound: usize,
) -> Option<Term> {
    for &id in sig.liftings_of(p) {
        let s = sig.get(id).expect("own symbol");
        if s.level <= level {
            return Some(Term::lift(id, SumArrow::identity(p.cod()).comps().to_vec(), s.out_dim()));
        }
    }
    en.lifting_index(p.dim() + 1, p.cod(), bound).get(&(p.f.clone(), p.g.clone())).cloned()
}

/// A term `h : D_{i+1} -> T` of the tower's top level with `hσ = f`, `hτ = g`:
/// an adjoined symbol for exactly this pair, or else the first one found
/// among terms of at most `search_bound` nodes.
pub fn has_lifting(tower: &ExtensionTower, p: &ParallelPair, search_bound: usize) -> Option<Term> {
    let en = TermEnumerator::new(&tower.sig, tower.top_level());
    lifting_with(&en, &tower.sig, tower.top_level(), p, search_bound)
}

/// Outcome of a bounded fibrancy check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrancyReport {
    pub fibrant: bool,
    pub enumerated_at_level: usize,
    pub top_level: usize,
    pub bounds: Bounds,
    pub checked: usize,
    pub failures: Vec<String>,
    pub note: String,
}

/// Every pair enumerated within `bounds` at level `max(top - 1, 0)` must have
/// a lifting at the top level.
pub fn is_pseudo_coherator_up_to(tower: &ExtensionTower, bounds: &Bounds) -> FibrancyReport {
    let top = tower.top_level();
    let at = top.saturating_sub(1);
    let pairs = tower.enumerate_parallel_pairs(at, bounds);
    let en = TermEnumerator::new(&tower.sig, top);
    let failures: Vec<String> = pairs
        .iter()
        .filter(|p| lifting_with(&en, &tower.sig, top, p, bounds.max_term_size).is_none())
        .map(ToString::to_string)
        .collect();
    FibrancyReport {
        fibrant: failures.is_empty(),
        enumerated_at_level: at,
        top_level: top,
        bounds: *bounds,
        checked: pairs.len(),
        failures,
        note: format!(
            "pairs of C_{at} with dim <= {}, size <= {}, codomain length <= {}; liftings searched in C_{top} up to size {}",
            bounds.max_dim, bounds.max_term_size, bounds.max_codomain_length, bounds.max_term_size
        ),
    }
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    f: String,
    g: String,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    id: SymbolId,
    pair: PairJson,
    dim: Dim,
}

#[derive(Serialize, Deserialize)]
struct LevelJson {
    index: usize,
    symbols: Vec<SymbolJson>,
}

#[derive(Serialize, Deserialize)]
struct TowerJson {
    flavor: Flavor,
    strategy: Strategy,
    bounds: Bounds,
    levels: Vec<LevelJson>,
}

impl ExtensionTower {
    pub fn to_json(&self) -> serde_json::Value {
        let levels = self
            .levels
            .iter()
            .map(|l| LevelJson {
                index: l.index,
                symbols: l
                    .symbols
                    .iter()
                    .map(|&id| {
                        let s = self.sig.get(id).expect("own symbol");
                        SymbolJson {
                            id,
                            pair: PairJson { f: s.pair.f.to_string(), g: s.pair.g.to_string() },
                            dim: s.out_dim(),
                        }
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_value(TowerJson { flavor: self.flavor, strategy: self.strategy, bounds: self.bounds, levels })
            .expect("plain data")
    }

    /// Rebuilds a tower, revalidating every pair against the earlier levels.
    pub fn from_json(value: &serde_json::Value) -> Result<ExtensionTower> {
        let raw: TowerJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut tower = ExtensionTower::theta0(raw.flavor, raw.strategy, raw.bounds);
        for (n, level) in raw.levels.iter().enumerate() {
            if level.index != n {
                return Err(Error::Parse(format!("level {n} is labelled {}", level.index)));
            }
            if n == 0 {
                if !level.symbols.is_empty() {
                    return Err(Error::Parse("level 0 must be empty".into()));
                }
                continue;
            }
            let mut pairs = Vec::new();
            for s in &level.symbols {
                let f: Term = s.pair.f.parse()?;
                let g: Term = s.pair.g.parse()?;
                let p = make_parallel_pair(&tower.sig, &f, &g)?;
                if p.dim() + 1 != s.dim {
                    return Err(Error::Parse(format!(
                        "h#{} declares dim {} for a pair of dim {}",
                        s.id,
                        s.dim,
                        p.dim()
                    )));
                }
                pairs.push((s.id, p));
            }
            tower.push_level_with_ids(&pairs)?;
        }
        Ok(tower)
    }
}
