use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coherators::ExtensionTower;
use crate::error::{Error, Result};
use crate::extensions::{LiftingSymbol, Signature, SymbolId, Term};
use crate::globes::{Dim, GlobeMap};
use crate::pasting::{globular_product_of, realization, CellRef, GlobularSet, Table};

/// Operation table of one symbol: argument tuple (top cells of the codomain's
/// summands) to output cell.
pub type OpTable = BTreeMap<Vec<usize>, usize>;

/// A finite model truncated at `trunc`: a globular set together with one
/// operation table per interpretable lifting symbol.
#[derive(Debug, Clone)]
pub struct Model {
    pub trunc: Dim,
    pub carrier: GlobularSet,
    pub ops: BTreeMap<SymbolId, OpTable>,
    sig: Arc<Signature>,
}

/// Symbols whose output, codomain and dependencies all fit below `trunc`.
pub fn interpretable(sig: &Signature, trunc: Dim) -> Vec<bool> {
    let mut ok: BTreeMap<SymbolId, bool> = BTreeMap::new();
    let mut ordered: Vec<&LiftingSymbol> = sig.symbols().iter().collect();
    ordered.sort_by_key(|s| (s.level, s.id));
    for s in ordered {
        let mut used = Vec::new();
        s.pair.f().symbols(&mut used);
        s.pair.g().symbols(&mut used);
        let fits = s.out_dim() <= trunc
            && s.codomain().dimension() <= trunc
            && used.iter().all(|u| ok.get(u).copied().unwrap_or(false));
        ok.insert(s.id, fits);
    }
    sig.symbols().iter().map(|s| ok[&s.id]).collect()
}

impl Model {
    pub fn new(
        trunc: Dim,
        carrier: GlobularSet,
        ops: BTreeMap<SymbolId, OpTable>,
        sig: Arc<Signature>,
    ) -> Result<Model> {
        carrier.validate()?;
        if carrier.trunc != trunc {
            return Err(Error::Truncation { needed: trunc, given: carrier.trunc });
        }
        Ok(Model { trunc, carrier, ops, sig })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_interpretable(&self, id: SymbolId) -> bool {
        let flags = interpretable(&self.sig, self.trunc);
        self.sig.symbols().iter().zip(flags).any(|(s, ok)| s.id == id && ok)
    }

    /// `X(T)`: the argument tuples for arrows into `T`.
    pub fn product(&self, t: &Table) -> Result<Vec<Vec<usize>>> {
        if t.dimension() > self.trunc {
            return Err(Error::Truncation { needed: t.dimension(), given: self.trunc });
        }
        Ok(globular_product_of(&self.carrier, t))
    }

    /// Checks that `args` is an element of the globular product over `t`.
    pub fn check_args(&self, t: &Table, args: &[usize]) -> Result<()> {
        if args.len() != t.len() {
            return Err(Error::NotComposable(format!("{t} takes {} arguments, got {}", t.len(), args.len())));
        }
        for (k, (&d, &a)) in t.tops().iter().zip(args).enumerate() {
            if d > self.trunc || a >= self.carrier.count(d) {
                return Err(Error::CellOutOfRange { dim: d, index: a });
            }
            if let Some(&b) = t.bottoms().get(k) {
                let next = t.tops()[k + 1];
                let left = self.carrier.act(&GlobeMap::source(b, d), a);
                let right = self.carrier.act(&GlobeMap::target(b, next), args[k + 1]);
                if left != right {
                    return Err(Error::NotComposable(format!(
                        "argument {k} has {b}-source {left} but argument {} has {b}-target {right}",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The value of `t : D_j -> T` at an element of `X(T)`.
    pub fn eval(&self, t: &Term, args: &[usize]) -> Result<CellRef> {
        self.check_args(t.cod(), args)?;
        self.eval_unchecked(t, args)
    }

    pub(crate) fn eval_unchecked(&self, t: &Term, args: &[usize]) -> Result<CellRef> {
        match t {
            Term::Glob { cod, cell } => {
                let (k, g) = realization(cod).rep(*cell);
                Ok(CellRef::new(g.src_dim(), self.carrier.act(&g, args[k])))
            }
            Term::Lift { sym, post, pre } => {
                let inner: Vec<usize> =
                    post.iter().map(|c| self.eval_unchecked(c, args).map(|v| v.index)).collect::<Result<_>>()?;
                let table = self.ops.get(sym).ok_or(Error::MissingTable(*sym))?;
                let out = *table
                    .get(&inner)
                    .ok_or_else(|| Error::NotComposable(format!("h#{sym} has no entry at {inner:?}")))?;
                Ok(CellRef::new(pre.src_dim(), self.carrier.act(pre, out)))
            }
        }
    }

    /// Renames cells by a bijection per dimension: `perm[d][old] = new`.
    pub fn relabel(&self, perm: &[Vec<usize>]) -> Result<Model> {
        if perm.len() != self.trunc + 1
            || perm.iter().enumerate().any(|(d, p)| {
                let mut seen = p.clone();
                seen.sort_unstable();
                seen != (0..self.carrier.count(d)).collect::<Vec<_>>()
            })
        {
            return Err(Error::Invalid("relabeling must be a bijection in every dimension".into()));
        }
        let mut inv: Vec<Vec<usize>> = perm.iter().map(|p| vec![0; p.len()]).collect();
        for (d, p) in perm.iter().enumerate() {
            for (old, &new) in p.iter().enumerate() {
                inv[d][new] = old;
            }
        }
        let c = &self.carrier;
        let mut cells = Vec::new();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for d in 0..=self.trunc {
            cells.push(inv[d].iter().map(|&old| c.cells[d][old].clone()).collect());
            if d == 0 {
                src.push(Vec::new());
                tgt.push(Vec::new());
            } else {
                src.push(inv[d].iter().map(|&old| perm[d - 1][c.src[d][old]]).collect());
                tgt.push(inv[d].iter().map(|&old| perm[d - 1][c.tgt[d][old]]).collect());
            }
        }
        let carrier = GlobularSet::new(cells, src, tgt)?;
        let mut ops = BTreeMap::new();
        for (&id, table) in &self.ops {
            let s = self.sig.get(id)?;
            let tops = s.codomain().tops().to_vec();
            let out_dim = s.out_dim();
            let moved: OpTable = table
                .iter()
                .map(|(args, &out)| {
                    let a = args.iter().zip(&tops).map(|(&x, &d)| perm[d][x]).collect();
                    (a, perm[out_dim][out])
                })
                .collect();
            ops.insert(id, moved);
        }
        Model::new(self.trunc, carrier, ops, Arc::clone(&self.sig))
    }

    /// Disjoint union of two models over the same signature.
    pub fn disjoint_union(&self, other: &Model) -> Result<Model> {
        if self.trunc != other.trunc || self.sig.symbols() != other.sig.symbols() {
            return Err(Error::Invalid("disjoint union needs models over one signature and truncation".into()));
        }
        let carrier = self.carrier.disjoint_union(&other.carrier);
        let mut ops = self.ops.clone();
        for (&id, table) in &other.ops {
            let s = self.sig.get(id)?;
            let tops = s.codomain().tops().to_vec();
            let out_dim = s.out_dim();
            let entry = ops.entry(id).or_default();
            for (args, &out) in table {
                let a = args.iter().zip(&tops).map(|(&x, &d)| x + self.carrier.count(d)).collect();
                entry.insert(a, out + self.carrier.count(out_dim));
            }
        }
        Model::new(self.trunc, carrier, ops, Arc::clone(&self.sig))
    }

    /// Serializes the carrier and tables, with the tower that defines the
    /// symbols embedded so the file is self-contained.
    pub fn to_json(&self, tower: &ExtensionTower) -> serde_json::Value {
        let ops: BTreeMap<String, Vec<OpEntry>> = self
            .ops
            .iter()
            .map(|(id, table)| {
                let entries = table.iter().map(|(args, &out)| OpEntry { args: args.clone(), out }).collect();
                (format!("h#{id}"), entries)
            })
            .collect();
        json!({
            "trunc": self.trunc,
            "cells": self.carrier.cells,
            "src": self.carrier.src,
            "tgt": self.carrier.tgt,
            "ops": ops,
            "tower": tower.to_json(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<(Model, ExtensionTower)> {
        let raw: ModelJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let tower = ExtensionTower::from_json(&raw.tower)?;
        let carrier = GlobularSet::new(raw.cells, raw.src, raw.tgt)?;
        let mut ops = BTreeMap::new();
        for (key, entries) in raw.ops {
            let id: SymbolId = key
                .strip_prefix("h#")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad symbol key `{key}`")))?;
            tower.signature().get(id)?;
            ops.insert(id, entries.into_iter().map(|e| (e.args, e.out)).collect());
        }
        let model = Model::new(raw.trunc, carrier, ops, Arc::new(tower.signature().clone()))?;
        Ok((model, tower))
    }
}

#[derive(Serialize, Deserialize)]
struct OpEntry {
    args: Vec<usize>,
    out: usize,
}

#[derive(Deserialize)]
struct ModelJson {
    trunc: Dim,
    cells: Vec<Vec<String>>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
    ops: BTreeMap<String, Vec<OpEntry>>,
    tower: serde_json::Value,
}

/// Checks that every interpretable symbol has a table defined on exactly
/// `X(T)` for its codomain `T`, with outputs whose source and target are the
/// values of the lifted pair. The first violation is returned as an error.
pub fn check_segal(model: &Model) -> Result<()> {
    model.carrier.validate()?;
    let sig = model.signature();
    let flags = interpretable(sig, model.trunc);
    let mut ordered: Vec<(&LiftingSymbol, bool)> = sig.symbols().iter().zip(flags).collect();
    ordered.sort_by_key(|(s, _)| (s.level, s.id));
    for (s, ok) in ordered {
        let violation = |args: Vec<usize>, reason: String| Error::SegalViolation { symbol: s.id, args, reason };
        let table = model.ops.get(&s.id);
        if !ok {
            if table.is_some_and(|t| !t.is_empty()) {
                return Err(violation(Vec::new(), "table for a symbol beyond the truncation".into()));
            }
            continue;
        }
        let table = table.ok_or_else(|| violation(Vec::new(), "missing table".into()))?;
        let domain = model.product(s.codomain())?;
        if table.len() != domain.len() {
            let extra = table.keys().find(|k| model.check_args(s.codomain(), k).is_err());
            if let Some(k) = extra {
                return Err(violation(k.clone(), "entry outside the globular product".into()));
            }
        }
        let d = s.out_dim();
        for args in domain {
            let Some(&out) = table.get(&args) else {
                return Err(violation(args, "no entry for this argument tuple".into()));
            };
            if out >= model.carrier.count(d) {
                return Err(violation(args, format!("output {out} is not a {d}-cell")));
            }
            let f = model.eval_unchecked(s.pair.f(), &args)?;
            let g = model.eval_unchecked(s.pair.g(), &args)?;
            if model.carrier.src[d][out] != f.index {
                return Err(violation(args, format!("source of {out} is not the value {} of f", f.index)));
            }
            if model.carrier.tgt[d][out] != g.index {
                return Err(violation(args, format!("target of {out} is not the value {} of g", g.index)));
            }
        }
    }
    Ok(())
}

pub fn is_segal(model: &Model) -> bool {
    check_segal(model).is_ok()
}
