use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extensions::{LiftingSymbol, Signature, SymbolId, Term};
use crate::globes::Dim;
use crate::pasting::{realization, CellRef, GlobularSet, Table};
use crate::structural::LiftingProvider;
use crate::wfs::{lift_into, Assignment, LiftTarget, SyntacticTarget};

use super::group::FiniteGroup;
use super::model::{interpretable, Model, OpTable};

/// How a model computes the output of a symbol at one argument tuple.
pub trait OpRule {
    fn value(&self, model: &Model, sym: &LiftingSymbol, args: &[usize]) -> Result<usize>;
}

/// Fills the tables of a model symbol by symbol.
pub struct ModelTarget<R: OpRule> {
    model: Model,
    rule: R,
    fits: HashMap<SymbolId, bool>,
}

impl<R: OpRule> ModelTarget<R> {
    pub fn new(sig: Arc<Signature>, carrier: GlobularSet, trunc: Dim, rule: R) -> Result<Self> {
        let fits = sig.symbols().iter().map(|s| s.id).zip(interpretable(&sig, trunc)).collect();
        let model = Model::new(trunc, carrier, BTreeMap::new(), sig)?;
        Ok(ModelTarget { model, rule, fits })
    }

    pub fn into_model(self) -> Model {
        self.model
    }
}

impl<R: OpRule> LiftTarget for ModelTarget<R> {
    type Arrow = OpTable;

    fn lift(&mut self, sym: &LiftingSymbol, _done: &Assignment<OpTable>) -> Result<Option<OpTable>> {
        if !self.fits.get(&sym.id).copied().unwrap_or(false) {
            return Ok(None);
        }
        let mut table = OpTable::new();
        for args in self.model.product(sym.codomain())? {
            let out = self.rule.value(&self.model, sym, &args)?;
            table.insert(args, out);
        }
        self.model.ops.insert(sym.id, table.clone());
        Ok(Some(table))
    }
}

/// Interprets every symbol of `sig` that fits below `trunc`.
pub fn interpret<R: OpRule>(sig: Arc<Signature>, carrier: GlobularSet, trunc: Dim, rule: R) -> Result<Model> {
    let mut target = ModelTarget::new(Arc::clone(&sig), carrier, trunc, rule)?;
    lift_into(&sig, &mut target)?;
    Ok(target.into_model())
}

/// Every operation returns the common value of its arguments.
pub struct ConstantRule;

impl OpRule for ConstantRule {
    fn value(&self, _model: &Model, _sym: &LiftingSymbol, args: &[usize]) -> Result<usize> {
        Ok(args[0])
    }
}

/// `n` elements in every dimension up to `trunc`, each cell bounded by the
/// cells with the same index.
pub fn constant_carrier(n: usize, trunc: Dim) -> GlobularSet {
    let cells = (0..=trunc).map(|_| (0..n).map(|k| k.to_string()).collect()).collect();
    let ids: Vec<usize> = (0..n).collect();
    let bd = (0..=trunc).map(|d| if d == 0 { Vec::new() } else { ids.clone() }).collect::<Vec<_>>();
    GlobularSet { trunc, cells, src: bd.clone(), tgt: bd }
}

pub fn constant_model(n: usize, trunc: Dim, sig: Arc<Signature>) -> Result<Model> {
    if n == 0 {
        return Err(Error::Invalid("a constant model needs at least one element".into()));
    }
    interpret(sig, constant_carrier(n, trunc), trunc, ConstantRule)
}

pub fn one_point_model(trunc: Dim, sig: Arc<Signature>) -> Result<Model> {
    constant_model(1, trunc, sig)
}

/// The strict 2-groupoid with one object, the elements of `G` as arrows and
/// only identity 2-cells.
///
/// A 1-dimensional operation is read off the 1-skeleton of its codomain: its
/// value is the product of the arguments along a path from the value of `f`
/// to the value of `g`, later arrows on the left. Parallel arrows of a
/// globular sum are joined by 2-cells, so they carry equal values and the
/// path does not matter. A 2-dimensional operation exists only when both
/// boundary values agree.
///
/// With `connected` set there is instead exactly one 2-cell between any two
/// arrows, and 2-dimensional operations pick it.
pub struct GroupRule {
    pub group: FiniteGroup,
    pub connected: bool,
    paths: std::sync::Mutex<HashMap<SymbolId, Vec<(usize, bool)>>>,
}

impl GroupRule {
    pub fn new(group: FiniteGroup) -> Self {
        GroupRule { group, connected: false, paths: Default::default() }
    }

    pub fn connected(group: FiniteGroup) -> Self {
        GroupRule { group, connected: true, paths: Default::default() }
    }
}

/// Path in the 1-skeleton of `t` between two 0-cells, as steps
/// `(arrow of the realization, forward?)`.
fn skeleton_path(t: &Table, from: usize, to: usize) -> Result<Vec<(usize, bool)>> {
    let real = realization(t);
    let set = real.set();
    let mut prev: HashMap<usize, (usize, usize, bool)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; set.count(0)];
    seen[from] = true;
    while let Some(p) = queue.pop_front() {
        if p == to {
            break;
        }
        for e in 0..set.count(1) {
            let (s, tt) = (set.src[1][e], set.tgt[1][e]);
            for (a, b, forward) in [(s, tt, true), (tt, s, false)] {
                if a == p && !seen[b] {
                    seen[b] = true;
                    prev.insert(b, (p, e, forward));
                    queue.push_back(b);
                }
            }
        }
    }
    if !seen[to] {
        return Err(Error::Invalid(format!("no path between 0-cells {from} and {to} of {t}")));
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, e, forward) = prev[&cur];
        path.push((e, forward));
        cur = p;
    }
    path.reverse();
    Ok(path)
}

fn point_of(t: &Term) -> Result<usize> {
    match t {
        Term::Glob { cell, .. } if cell.dim == 0 => Ok(cell.index),
        _ => Err(Error::IllFormed(format!("{t} is not a 0-cell"))),
    }
}

impl OpRule for GroupRule {
    fn value(&self, model: &Model, sym: &LiftingSymbol, args: &[usize]) -> Result<usize> {
        match sym.out_dim() {
            1 => {
                let path = {
                    let mut cache = self.paths.lock().expect("path cache");
                    match cache.get(&sym.id) {
                        Some(p) => p.clone(),
                        None => {
                            let p = skeleton_path(sym.codomain(), point_of(sym.pair.f())?, point_of(sym.pair.g())?)?;
                            cache.insert(sym.id, p.clone());
                            p
                        }
                    }
                };
                let real = realization(sym.codomain());
                let g = &self.group;
                let mut acc = g.identity;
                for (e, forward) in path {
                    let (k, map) = real.rep(CellRef::new(1, e));
                    let x = model.carrier.act(&map, args[k]);
                    let x = if forward { x } else { g.inverse[x] };
                    acc = g.product(x, acc);
                }
                Ok(acc)
            }
            2 => {
                let f = model.eval_unchecked(sym.pair.f(), args)?;
                let g = model.eval_unchecked(sym.pair.g(), args)?;
                if self.connected {
                    return Ok(f.index * self.group.order() + g.index);
                }
                if f != g {
                    return Err(Error::CoherenceFailure { pair: sym.pair.to_string(), args: args.to_vec() });
                }
                Ok(f.index)
            }
            d => Err(Error::Truncation { needed: d, given: 2 }),
        }
    }
}

/// One 0-cell, the group elements as 1-cells and one identity 2-cell on each.
pub fn group_carrier(group: &FiniteGroup) -> GlobularSet {
    let n = group.order();
    let cells =
        vec![vec!["*".to_string()], group.names.clone(), group.names.iter().map(|x| format!("1_{x}")).collect()];
    let ids: Vec<usize> = (0..n).collect();
    GlobularSet { trunc: 2, cells, src: vec![vec![], vec![0; n], ids.clone()], tgt: vec![vec![], vec![0; n], ids] }
}

pub fn group_model(group: &FiniteGroup, sig: Arc<Signature>) -> Result<Model> {
    interpret(sig, group_carrier(group), 2, GroupRule::new(group.clone()))
}

/// The group elements as arrows with one 2-cell `x => y` for every pair.
pub fn connected_group_carrier(group: &FiniteGroup) -> GlobularSet {
    let n = group.order();
    let mut two = Vec::new();
    let (mut src, mut tgt) = (Vec::new(), Vec::new());
    for x in 0..n {
        for y in 0..n {
            two.push(format!("{}=>{}", group.names[x], group.names[y]));
            src.push(x);
            tgt.push(y);
        }
    }
    let cells = vec![vec!["*".to_string()], group.names.clone(), two];
    GlobularSet { trunc: 2, cells, src: vec![vec![], vec![0; n], src], tgt: vec![vec![], vec![0; n], tgt] }
}

pub fn connected_group_model(group: &FiniteGroup, sig: Arc<Signature>) -> Result<Model> {
    interpret(sig, connected_group_carrier(group), 2, GroupRule::connected(group.clone()))
}

/// Sends the symbols that fit under a truncation to liftings found by a
/// provider, skipping the rest.
struct Truncated<P: LiftingProvider> {
    inner: SyntacticTarget<P>,
    fits: HashMap<SymbolId, bool>,
}

impl<P: LiftingProvider> LiftTarget for Truncated<P> {
    type Arrow = Term;

    fn lift(&mut self, sym: &LiftingSymbol, done: &Assignment<Term>) -> Result<Option<Term>> {
        if !self.fits.get(&sym.id).copied().unwrap_or(false) {
            return Ok(None);
        }
        self.inner.lift(sym, done)
    }
}

/// Interprets `sig` in an existing model: each symbol that fits under the
/// model's truncation goes to a lifting of its translated pair in `provider`
/// (a provider over the model's own signature) and takes the values of that
/// term.
pub fn pull_back<P: LiftingProvider>(model: &Model, provider: P, sig: Arc<Signature>) -> Result<Model> {
    let fits: HashMap<SymbolId, bool> =
        sig.symbols().iter().map(|s| s.id).zip(interpretable(&sig, model.trunc)).collect();
    let mut target = Truncated { inner: SyntacticTarget::new(provider), fits };
    let images = lift_into(&sig, &mut target)?;
    let mut ops = BTreeMap::new();
    for (id, image) in &images {
        let s = sig.get(*id)?;
        let mut table = OpTable::new();
        for args in model.product(s.codomain())? {
            let out = model.eval(image, &args)?.index;
            table.insert(args, out);
        }
        ops.insert(*id, table);
    }
    Model::new(model.trunc, model.carrier.clone(), ops, sig)
}
