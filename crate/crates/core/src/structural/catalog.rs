use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::extensions::{disk_identity, globe_term, make_parallel_pair, ParallelPair, SumArrow, Term};
use crate::globes::{Dim, GlobeMap};
use crate::pasting::{realization, Table};

use super::provider::LiftingProvider;

/// Named structural operations, one chosen lifting each, memoized.
pub struct StructuralCatalog<P: LiftingProvider> {
    provider: P,
    memo: HashMap<String, Term>,
}

fn need(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(what.to_string()))
    }
}

/// `can_k ∘ g` as a term into `t`.
fn can(t: &Table, k: usize, g: &GlobeMap) -> Term {
    let cell = realization(t).cell_of(k, g).expect("globe map into summand k");
    Term::glob(&std::sync::Arc::new(t.clone()), cell)
}

impl<P: LiftingProvider> StructuralCatalog<P> {
    pub fn new(provider: P) -> Self {
        StructuralCatalog { provider, memo: HashMap::new() }
    }

    pub fn provider(&self) -> &P {
        &self.provider
    }

    pub fn provider_mut(&mut self) -> &mut P {
        &mut self.provider
    }

    pub fn into_provider(self) -> P {
        self.provider
    }

    fn pair(&self, f: &Term, g: &Term) -> Result<ParallelPair> {
        make_parallel_pair(self.provider.signature(), f, g)
    }

    fn memoized(&mut self, key: String, build: impl FnOnce(&mut Self) -> Result<ParallelPair>) -> Result<Term> {
        if let Some(t) = self.memo.get(&key) {
            return Ok(t.clone());
        }
        let p = build(self)?;
        let t = self.provider.lift(&p)?;
        self.memo.insert(key, t.clone());
        Ok(t)
    }

    fn sum(&self, parts: &[SumArrow], bottoms: &[Dim]) -> Result<SumArrow> {
        SumArrow::sum(self.provider.signature(), parts, bottoms)
    }

    fn arrow(&self, dom: Table, comps: Vec<Term>) -> Result<SumArrow> {
        SumArrow::new(self.provider.signature(), dom, comps)
    }

    fn apply(&self, a: &SumArrow, t: &Term) -> Result<Term> {
        a.apply(self.provider.signature(), t)
    }

    /// `g ∘ t` for a globe map `g`.
    fn globe_after(&self, g: &GlobeMap, t: &Term) -> Result<Term> {
        self.apply(&SumArrow::globe(g), t)
    }

    /// `g ⨿ ... ⨿ g` (`m` copies) glued along `D_b`.
    fn globe_sum(&self, g: &GlobeMap, b: Dim, m: usize) -> Result<SumArrow> {
        let parts = vec![SumArrow::globe(g); m];
        self.sum(&parts, &vec![b; m - 1])
    }

    // ---- pairs ----

    /// `(can_2 σ_i, can_1 τ_i)` for `l = 1`; for `l > 1`,
    /// `((σ_i ⨿ σ_i) ∇^{l-1}_{i-1}, (τ_i ⨿ τ_i) ∇^{l-1}_{i-1})`.
    pub fn comp_pair(&mut self, l: usize, i: Dim) -> Result<ParallelPair> {
        need(l >= 1 && i >= l, "composition needs 1 <= l <= i")?;
        if l == 1 {
            return self.comp_mary_pair(i, 2);
        }
        let lower = self.comp(l - 1, i - 1)?;
        let b = i - l;
        let f = self.apply(&self.globe_sum(&GlobeMap::sigma(i), b, 2)?, &lower)?;
        let g = self.apply(&self.globe_sum(&GlobeMap::tau(i), b, 2)?, &lower)?;
        self.pair(&f, &g)
    }

    /// `(can_m σ_i, can_1 τ_i)` into `m` copies of `D_i` glued along `D_{i-1}`.
    pub fn comp_mary_pair(&mut self, i: Dim, m: usize) -> Result<ParallelPair> {
        need(i >= 1 && m >= 2, "m-ary composition needs i >= 1, m >= 2")?;
        let t = Table::repeated(i, i - 1, m)?;
        self.pair(&can(&t, m - 1, &GlobeMap::sigma(i)), &can(&t, 0, &GlobeMap::tau(i)))
    }

    /// `∇ ⨿ id` and `id ⨿ ∇` for a binary composition `∇` glued along `D_b`.
    fn whiskers(&self, nabla: &Term, i: Dim, b: Dim) -> Result<(SumArrow, SumArrow)> {
        let n = SumArrow::from_term(nabla.clone());
        let id = SumArrow::identity(&Table::disk(i));
        Ok((self.sum(&[n.clone(), id.clone()], &[b])?, self.sum(&[id, n], &[b])?))
    }

    /// `((∇_i ⨿ id) ∇_i, (id ⨿ ∇_i) ∇_i)`.
    pub fn assoc1_pair(&mut self, i: Dim) -> Result<ParallelPair> {
        need(i >= 1, "associativity needs i >= 1")?;
        let nabla = self.comp(1, i)?;
        let (left, right) = self.whiskers(&nabla, i, i - 1)?;
        let f = self.apply(&left, &nabla)?;
        let g = self.apply(&right, &nabla)?;
        self.pair(&f, &g)
    }

    /// `((∇²_i ⨿ id) ∇²_i, (id ⨿ ∇²_i) ∇²_i)`: not parallel.
    pub fn naive_assoc2_pair(&mut self, i: Dim) -> Result<ParallelPair> {
        need(i >= 2, "level-2 associativity needs i >= 2")?;
        let (f, g) = self.naive_assoc2_arrows(i)?;
        self.pair(&f, &g)
    }

    fn naive_assoc2_arrows(&mut self, i: Dim) -> Result<(Term, Term)> {
        let nabla2 = self.comp(2, i)?;
        let (left, right) = self.whiskers(&nabla2, i, i - 2)?;
        Ok((self.apply(&left, &nabla2)?, self.apply(&right, &nabla2)?))
    }

    /// Source and target of `A²_i`:
    /// `((τ⨿τ⨿τ)A¹_{i-1}, (∇²⨿id)∇²) ∘ ∇¹_i` and
    /// `((id⨿∇²)∇², (σ⨿σ⨿σ)A¹_{i-1}) ∘ ∇¹_i`.
    pub fn assoc2_pair(&mut self, i: Dim) -> Result<ParallelPair> {
        need(i >= 2, "level-2 associativity needs i >= 2")?;
        let (left2, right2) = self.naive_assoc2_arrows(i)?;
        let a1 = self.assoc1(i - 1)?;
        let nabla1 = self.comp(1, i)?;
        let tau3 = self.globe_sum(&GlobeMap::tau(i), i - 2, 3)?;
        let sigma3 = self.globe_sum(&GlobeMap::sigma(i), i - 2, 3)?;
        let dom = Table::repeated(i, i - 1, 2)?;
        let src_arrow = self.arrow(dom.clone(), vec![self.apply(&tau3, &a1)?, left2])?;
        let tgt_arrow = self.arrow(dom, vec![right2, self.apply(&sigma3, &a1)?])?;
        let f = self.apply(&src_arrow, &nabla1)?;
        let g = self.apply(&tgt_arrow, &nabla1)?;
        self.pair(&f, &g)
    }

    /// `(id, id)` on `D_i`.
    pub fn unit_pair(&mut self, i: Dim) -> Result<ParallelPair> {
        let id = disk_identity(i);
        self.pair(&id, &id)
    }

    /// `((τ_i κ_{i-1}, id) ∇_i, id)` and `((id, σ_i κ_{i-1}) ∇_i, id)`.
    pub fn unit_constraint_pairs(&mut self, i: Dim) -> Result<(ParallelPair, ParallelPair)> {
        need(i >= 1, "unit constraints need i >= 1")?;
        let kappa = self.unit(i - 1)?;
        let nabla = self.comp(1, i)?;
        let id = disk_identity(i);
        let dom = Table::repeated(i, i - 1, 2)?;
        let tk = self.globe_after(&GlobeMap::tau(i), &kappa)?;
        let sk = self.globe_after(&GlobeMap::sigma(i), &kappa)?;
        let left = self.apply(&self.arrow(dom.clone(), vec![tk, id.clone()])?, &nabla)?;
        let right = self.apply(&self.arrow(dom, vec![id.clone(), sk])?, &nabla)?;
        Ok((self.pair(&left, &id)?, self.pair(&right, &id)?))
    }

    /// `(τ_i, σ_i)` for `l = 1`; `(σ_i ω^{l-1}_{i-1}, τ_i ω^{l-1}_{i-1})` above.
    pub fn inverse_pair(&mut self, l: usize, i: Dim) -> Result<ParallelPair> {
        need(l >= 1 && i >= l, "inverses need 1 <= l <= i")?;
        if l == 1 {
            return self.pair(&globe_term(&GlobeMap::tau(i)), &globe_term(&GlobeMap::sigma(i)));
        }
        let lower = self.inverse(l - 1, i - 1)?;
        let f = self.globe_after(&GlobeMap::sigma(i), &lower)?;
        let g = self.globe_after(&GlobeMap::tau(i), &lower)?;
        self.pair(&f, &g)
    }

    /// `((ω_i, id) ∇_i, σ_i κ_{i-1})` and `((id, ω_i) ∇_i, τ_i κ_{i-1})`.
    pub fn inverse_constraint_pairs(&mut self, i: Dim) -> Result<(ParallelPair, ParallelPair)> {
        need(i >= 1, "inverse constraints need i >= 1")?;
        let omega = self.inverse(1, i)?;
        let kappa = self.unit(i - 1)?;
        let nabla = self.comp(1, i)?;
        let id = disk_identity(i);
        let dom = Table::repeated(i, i - 1, 2)?;
        let left = self.apply(&self.arrow(dom.clone(), vec![omega.clone(), id.clone()])?, &nabla)?;
        let right = self.apply(&self.arrow(dom, vec![id, omega])?, &nabla)?;
        let sk = self.globe_after(&GlobeMap::sigma(i), &kappa)?;
        let tk = self.globe_after(&GlobeMap::tau(i), &kappa)?;
        Ok((self.pair(&left, &sk)?, self.pair(&right, &tk)?))
    }

    // ---- liftings ----

    /// `∇^l_i : D_i -> D_i ⨿_{D_{i-l}} D_i`.
    pub fn comp(&mut self, l: usize, i: Dim) -> Result<Term> {
        self.memoized(format!("comp:{l}:{i}"), |c| c.comp_pair(l, i))
    }

    pub fn comp_mary(&mut self, i: Dim, m: usize) -> Result<Term> {
        if m == 2 {
            return self.comp(1, i);
        }
        self.memoized(format!("comp_mary:{i}:{m}"), |c| c.comp_mary_pair(i, m))
    }

    /// `A¹_i : D_{i+1} -> D_i ⨿ D_i ⨿ D_i`.
    pub fn assoc1(&mut self, i: Dim) -> Result<Term> {
        self.memoized(format!("assoc1:{i}"), |c| c.assoc1_pair(i))
    }

    pub fn assoc2(&mut self, i: Dim) -> Result<Term> {
        self.memoized(format!("assoc2:{i}"), |c| c.assoc2_pair(i))
    }

    /// `κ_i : D_{i+1} -> D_i`.
    pub fn unit(&mut self, i: Dim) -> Result<Term> {
        self.memoized(format!("unit:{i}"), |c| c.unit_pair(i))
    }

    /// `(λ_i, ρ_i)`.
    pub fn unit_constraints(&mut self, i: Dim) -> Result<(Term, Term)> {
        let (lp, rp) = self.unit_constraint_pairs(i)?;
        let l = self.memoized(format!("lambda:{i}"), |_| Ok(lp))?;
        let r = self.memoized(format!("rho:{i}"), |_| Ok(rp))?;
        Ok((l, r))
    }

    /// `ω^l_i : D_i -> D_i`.
    pub fn inverse(&mut self, l: usize, i: Dim) -> Result<Term> {
        self.memoized(format!("inverse:{l}:{i}"), |c| c.inverse_pair(l, i))
    }

    pub fn inverse_constraints(&mut self, i: Dim) -> Result<(Term, Term)> {
        let (lp, rp) = self.inverse_constraint_pairs(i)?;
        let l = self.memoized(format!("inv_left:{i}"), |_| Ok(lp))?;
        let r = self.memoized(format!("inv_right:{i}"), |_| Ok(rp))?;
        Ok((l, r))
    }
}
