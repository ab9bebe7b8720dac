use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::Term;
use crate::globes::Dim;
use crate::pasting::{CellRef, GSMorphism};
use crate::structural::{LiftingProvider, StructuralCatalog};

use super::model::Model;

/// The liftings used to witness that `∼_i` is an equivalence relation and
/// to compose in `ϖ_i`: `unit[j] = κ_j`, `inverse[j] = ω¹_j` and
/// `comp[j] = ∇¹_j` (entry 0 of the last two is unused).
#[derive(Debug, Clone)]
pub struct Witnesses {
    pub unit: Vec<Term>,
    pub inverse: Vec<Option<Term>>,
    pub comp: Vec<Option<Term>>,
}

impl Witnesses {
    /// Everything needed for a model truncated at `trunc`.
    pub fn from_catalog<P: LiftingProvider>(cat: &mut StructuralCatalog<P>, trunc: Dim) -> Result<Witnesses> {
        let mut unit = Vec::new();
        let mut inverse = vec![None];
        let mut comp = vec![None];
        for j in 0..trunc {
            unit.push(cat.unit(j)?);
        }
        for j in 1..=trunc {
            inverse.push(Some(cat.inverse(1, j)?));
            comp.push(Some(cat.comp(1, j)?));
        }
        Ok(Witnesses { unit, inverse, comp })
    }

    fn unit(&self, j: Dim) -> Result<&Term> {
        self.unit.get(j).ok_or_else(|| Error::Invalid(format!("no unit witness in dimension {j}")))
    }

    fn inverse(&self, j: Dim) -> Result<&Term> {
        self.inverse
            .get(j)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Invalid(format!("no inverse in dimension {j}")))
    }

    fn comp(&self, j: Dim) -> Result<&Term> {
        self.comp
            .get(j)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Invalid(format!("no composition in dimension {j}")))
    }
}

fn below_trunc(model: &Model, i: Dim) -> Result<()> {
    if i >= model.trunc {
        return Err(Error::Truncation { needed: i + 1, given: model.trunc });
    }
    Ok(())
}

/// An `(i+1)`-cell from `x` to `y`, if there is one.
pub fn homotopy_related(model: &Model, x: usize, y: usize, i: Dim) -> Result<Option<usize>> {
    below_trunc(model, i)?;
    let c = &model.carrier;
    for k in [x, y] {
        if k >= c.count(i) {
            return Err(Error::CellOutOfRange { dim: i, index: k });
        }
    }
    Ok((0..c.count(i + 1)).find(|&h| c.src[i + 1][h] == x && c.tgt[i + 1][h] == y))
}

/// Checks, over all cells of dimension `i`, that `κ`, `ω` and `∇` produce
/// reflexivity, symmetry and transitivity witnesses for `∼_i`, and that
/// homotopic cells share their boundary.
pub fn check_equivalence_relation(model: &Model, w: &Witnesses, i: Dim) -> Result<()> {
    below_trunc(model, i)?;
    let c = &model.carrier;
    let fail = |what: String| Err(Error::Invalid(format!("∼_{i}: {what}")));
    for x in 0..c.count(i) {
        let r = model.eval(w.unit(i)?, &[x])?;
        if c.src[i + 1][r.index] != x || c.tgt[i + 1][r.index] != x {
            return fail(format!("unit on {x} is not a loop"));
        }
    }
    let omega = w.inverse(i + 1)?;
    let nabla = w.comp(i + 1)?;
    let n = c.count(i + 1);
    for h in 0..n {
        let (x, y) = (c.src[i + 1][h], c.tgt[i + 1][h]);
        if i > 0 && (c.src[i][x] != c.src[i][y] || c.tgt[i][x] != c.tgt[i][y]) {
            return fail(format!("{x} ~ {y} but their boundaries differ"));
        }
        let inv = model.eval(omega, &[h])?;
        if c.src[i + 1][inv.index] != y || c.tgt[i + 1][inv.index] != x {
            return fail(format!("inverse of {h} does not reverse it"));
        }
        for h2 in (0..n).filter(|&h2| c.src[i + 1][h2] == y) {
            let z = c.tgt[i + 1][h2];
            let comp = model.eval(nabla, &[h2, h])?;
            if c.src[i + 1][comp.index] != x || c.tgt[i + 1][comp.index] != z {
                return fail(format!("composite of {h2} and {h} does not go from {x} to {z}"));
            }
        }
    }
    Ok(())
}

/// Classes of `∼_i` on the `i`-cells, as a class index per cell.
pub fn classes(model: &Model, i: Dim) -> Result<Vec<usize>> {
    below_trunc(model, i)?;
    let c = &model.carrier;
    let n = c.count(i);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for h in 0..c.count(i + 1) {
        let (a, b) = (find(&mut parent, c.src[i + 1][h]), find(&mut parent, c.tgt[i + 1][h]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = BTreeMap::new();
    Ok((0..n)
        .map(|x| {
            let r = find(&mut parent, x);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect())
}

/// `π_0`: the classes of 0-cells, each listed by its members.
pub fn pi0(model: &Model) -> Result<Vec<Vec<usize>>> {
    let cls = classes(model, 0)?;
    let count = cls.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (x, &k) in cls.iter().enumerate() {
        out[k].push(x);
    }
    Ok(out)
}

/// `ϖ_i`: objects are `(i-1)`-cells, arrows are classes of `i`-cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiGroupoid {
    pub dim: Dim,
    pub objects: Vec<usize>,
    /// A representative `i`-cell per arrow.
    pub arrows: Vec<usize>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// `compose[a][b] = a ∘ b`, defined when `src(a) = tgt(b)`.
    pub compose: Vec<Vec<Option<usize>>>,
    pub identity: Vec<usize>,
    pub inverse: Vec<usize>,
}

impl PiGroupoid {
    pub fn comp(&self, a: usize, b: usize) -> Option<usize> {
        self.compose.get(a).and_then(|row| row.get(b)).copied().flatten()
    }

    /// Category axioms and inverse laws on the finite tables.
    pub fn check_axioms(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Invalid(format!("ϖ_{} is not a groupoid: {what}", self.dim)));
        let n = self.arrows.len();
        for a in 0..n {
            for b in (0..n).filter(|&b| self.src[a] == self.tgt[b]) {
                let Some(ab) = self.comp(a, b) else {
                    return fail("composition not total");
                };
                if self.src[ab] != self.src[b] || self.tgt[ab] != self.tgt[a] {
                    return fail("composite has the wrong ends");
                }
                for c in (0..n).filter(|&c| self.src[b] == self.tgt[c]) {
                    if self.comp(ab, c) != self.comp(b, c).and_then(|bc| self.comp(a, bc)) {
                        return fail("composition is not associative");
                    }
                }
            }
            if self.comp(self.identity[self.tgt[a]], a) != Some(a)
                || self.comp(a, self.identity[self.src[a]]) != Some(a)
            {
                return fail("identities are not neutral");
            }
            let inv = self.inverse[a];
            if self.comp(inv, a) != Some(self.identity[self.src[a]])
                || self.comp(a, inv) != Some(self.identity[self.tgt[a]])
            {
                return fail("inverse law fails");
            }
        }
        Ok(())
    }
}

/// Builds `ϖ_i` with composition induced by `∇¹_i`. Fails when the induced
/// operations are not well defined on classes.
pub fn varpi(model: &Model, w: &Witnesses, i: Dim) -> Result<PiGroupoid> {
    if i == 0 {
        return Err(Error::ZeroDimensional);
    }
    let cls = classes(model, i)?;
    let c = &model.carrier;
    let count = cls.iter().max().map_or(0, |m| m + 1);
    let mut arrows = vec![usize::MAX; count];
    for (x, &k) in cls.iter().enumerate() {
        if arrows[k] == usize::MAX {
            arrows[k] = x;
        }
    }
    let src: Vec<usize> = arrows.iter().map(|&x| c.src[i][x]).collect();
    let tgt: Vec<usize> = arrows.iter().map(|&x| c.tgt[i][x]).collect();
    let nabla = w.comp(i)?;
    let mut compose = vec![vec![None; count]; count];
    // every pair of members is composed, which re-verifies independence of
    // the chosen representatives
    for x in 0..c.count(i) {
        for y in (0..c.count(i)).filter(|&y| c.src[i][x] == c.tgt[i][y]) {
            let xy = cls[model.eval(nabla, &[x, y])?.index];
            match compose[cls[x]][cls[y]].replace(xy) {
                Some(prev) if prev != xy => {
                    return Err(Error::Invalid(format!("composition in ϖ_{i} depends on representatives")));
                }
                _ => {}
            }
        }
    }
    let unit = w.unit(i - 1)?;
    let objects: Vec<usize> = (0..c.count(i - 1)).collect();
    let identity = objects.iter().map(|&o| model.eval(unit, &[o]).map(|u| cls[u.index])).collect::<Result<Vec<_>>>()?;
    let omega = w.inverse(i)?;
    let mut inverse = vec![usize::MAX; count];
    for x in 0..c.count(i) {
        let v = cls[model.eval(omega, &[x])?.index];
        if inverse[cls[x]] != usize::MAX && inverse[cls[x]] != v {
            return Err(Error::Invalid(format!("inverse in ϖ_{i} depends on representatives")));
        }
        inverse[cls[x]] = v;
    }
    Ok(PiGroupoid { dim: i, objects, arrows, src, tgt, compose, identity, inverse })
}

/// A finite group presented by class representatives and a product table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    /// Arrow indices of `ϖ_i` forming the group.
    pub elements: Vec<usize>,
    /// A representative `i`-cell per element.
    pub cells: Vec<usize>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `u_0 = x`, `u_{k+1} = κ_k(u_k)`: the iterated unit on `x` in dimension `i - 1`.
fn iterated_unit(model: &Model, w: &Witnesses, x: usize, i: Dim) -> Result<usize> {
    let mut u = x;
    for k in 0..i - 1 {
        u = model.eval(w.unit(k)?, &[u])?.index;
    }
    Ok(u)
}

/// `π_i(G; x)`: the automorphisms of the iterated unit of `x` in `ϖ_i`.
pub fn pi_n(model: &Model, w: &Witnesses, x: usize, i: Dim) -> Result<GroupTable> {
    if x >= model.carrier.count(0) {
        return Err(Error::CellOutOfRange { dim: 0, index: x });
    }
    let g = varpi(model, w, i)?;
    let base = iterated_unit(model, w, x, i)?;
    let elements: Vec<usize> = (0..g.arrows.len()).filter(|&a| g.src[a] == base && g.tgt[a] == base).collect();
    let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let mul = elements
        .iter()
        .map(|&a| elements.iter().map(|&b| pos[&g.comp(a, b).expect("loops compose")]).collect())
        .collect();
    Ok(GroupTable {
        cells: elements.iter().map(|&a| g.arrows[a]).collect(),
        identity: pos[&g.identity[base]],
        elements,
        mul,
    })
}

/// A morphism of models: a map of carriers commuting with every table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMorphism {
    pub cells: GSMorphism,
}

impl ModelMorphism {
    pub fn identity(model: &Model) -> ModelMorphism {
        ModelMorphism { cells: GSMorphism::identity(&model.carrier) }
    }

    pub fn apply(&self, dim: Dim, index: usize) -> usize {
        self.cells.apply(CellRef::new(dim, index)).index
    }

    pub fn check(&self, from: &Model, to: &Model) -> Result<()> {
        if from.trunc != to.trunc {
            return Err(Error::NotAMorphism("models have different truncations".into()));
        }
        if from.signature().symbols() != to.signature().symbols() {
            return Err(Error::NotAMorphism("models interpret different signatures".into()));
        }
        self.cells.check(&from.carrier, &to.carrier)?;
        for (&id, table) in &from.ops {
            let s = from.signature().get(id)?;
            let Some(other) = to.ops.get(&id) else {
                return Err(Error::NotAMorphism(format!("target has no table for h#{id}")));
            };
            let tops = s.codomain().tops();
            for (args, &out) in table {
                let moved: Vec<usize> = args.iter().zip(tops).map(|(&a, &d)| self.apply(d, a)).collect();
                if other.get(&moved) != Some(&self.apply(s.out_dim(), out)) {
                    return Err(Error::NotAMorphism(format!("h#{id} is not preserved at {args:?}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeqReport {
    pub weak_equivalence: bool,
    /// Homotopy groups were compared for `1 <= i <= checked_up_to`.
    pub checked_up_to: Dim,
    pub reason: Option<String>,
    pub caveat: String,
}

/// Checks that `f` induces a bijection on `π_0` and isomorphisms on `π_i` at
/// every 0-cell, for all `i` the truncation allows.
pub fn is_weak_equivalence(f: &ModelMorphism, from: &Model, to: &Model, w: &Witnesses) -> Result<WeqReport> {
    f.check(from, to)?;
    let top = from.trunc.saturating_sub(1);
    let caveat = format!(
        "only π_0 and π_i for 1 <= i <= {top} are compared; higher groups are invisible at truncation {}",
        from.trunc
    );
    let report = |ok: bool, reason: Option<String>| WeqReport {
        weak_equivalence: ok,
        checked_up_to: top,
        reason,
        caveat: caveat.clone(),
    };
    if from.trunc == 0 {
        return Ok(report(false, Some("truncation 0 has no π_0".into())));
    }
    let (c0, d0) = (classes(from, 0)?, classes(to, 0)?);
    let mut image: BTreeMap<usize, usize> = BTreeMap::new();
    for (x, &k) in c0.iter().enumerate() {
        image.insert(k, d0[f.apply(0, x)]);
    }
    let mut hit: Vec<usize> = image.values().copied().collect();
    hit.sort_unstable();
    hit.dedup();
    if hit.len() != image.len() {
        return Ok(report(false, Some("π_0 is not injective".into())));
    }
    if hit.len() != d0.iter().max().map_or(0, |m| m + 1) {
        return Ok(report(false, Some("π_0 is not surjective".into())));
    }
    for i in 1..=top {
        let di = classes(to, i)?;
        for x in 0..from.carrier.count(0) {
            let a = pi_n(from, w, x, i)?;
            let b = pi_n(to, w, f.apply(0, x), i)?;
            let map: Vec<usize> = a
                .cells
                .iter()
                .map(|&cell| {
                    let target = di[f.apply(i, cell)];
                    b.cells.iter().position(|&c| di[c] == target).expect("morphisms preserve units")
                })
                .collect();
            let mut seen = map.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != a.order() {
                return Ok(report(false, Some(format!("π_{i} at 0-cell {x} is not injective"))));
            }
            if a.order() != b.order() {
                return Ok(report(false, Some(format!("π_{i} at 0-cell {x} is not surjective"))));
            }
            for p in 0..a.order() {
                for q in 0..a.order() {
                    if map[a.mul[p][q]] != b.mul[map[p]][map[q]] {
                        return Ok(report(false, Some(format!("π_{i} at 0-cell {x} is not a homomorphism"))));
                    }
                }
            }
        }
    }
    Ok(report(true, None))
}
