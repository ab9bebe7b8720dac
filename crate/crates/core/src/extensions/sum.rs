use std::sync::Arc;

use crate::error::{Error, Result};
use crate::globes::{Dim, GlobeMap};
use crate::pasting::{realization, CellRef, Table};

use super::normal::{check_compatible, subst};
use super::signature::Signature;
use super::term::Term;

/// An arrow out of a globular sum, given by its restrictions to the summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumArrow {
    dom: Table,
    comps: Vec<Term>,
}

impl SumArrow {
    pub fn new(sig: &Signature, dom: Table, comps: Vec<Term>) -> Result<SumArrow> {
        check_compatible(sig, &dom, &comps)?;
        Ok(SumArrow { dom, comps })
    }

    /// The identity of `t`: summand `k` goes to the top cell `can_k`.
    pub fn identity(t: &Table) -> SumArrow {
        let cod = Arc::new(t.clone());
        let real = realization(t);
        let comps = (0..t.len()).map(|k| Term::glob(&cod, real.top(k))).collect();
        SumArrow { dom: t.clone(), comps }
    }

    /// A globular arrow `dom -> cod` sending top cells to `tops`.
    pub fn globular(sig: &Signature, dom: &Table, cod: &Table, tops: &[CellRef]) -> Result<SumArrow> {
        let cod = Arc::new(cod.clone());
        let comps = tops.iter().map(|&c| Term::glob(&cod, c)).collect();
        SumArrow::new(sig, dom.clone(), comps)
    }

    /// A globe map `D_i -> D_j` as an arrow of `Θ₀`.
    pub fn globe(g: &GlobeMap) -> SumArrow {
        let cod = Table::disk(g.tgt_dim());
        let cell = realization(&cod).face(CellRef::new(g.tgt_dim(), 0), g);
        SumArrow { dom: Table::disk(g.src_dim()), comps: vec![Term::glob(&Arc::new(cod), cell)] }
    }

    /// A single term `D_i -> T` as an arrow out of the disk.
    pub fn from_term(t: Term) -> SumArrow {
        SumArrow { dom: Table::disk(t.dim()), comps: vec![t] }
    }

    pub fn dom(&self) -> &Table {
        &self.dom
    }

    pub fn cod(&self) -> &Table {
        self.comps[0].cod()
    }

    pub fn comps(&self) -> &[Term] {
        &self.comps
    }

    /// The single component of an arrow out of a disk.
    pub fn as_term(&self) -> Result<&Term> {
        match self.comps.as_slice() {
            [t] => Ok(t),
            _ => Err(Error::IllFormed(format!("arrow out of {} is not disk-shaped", self.dom))),
        }
    }

    pub fn into_term(self) -> Result<Term> {
        self.as_term().cloned()
    }

    /// `self ∘ t`.
    pub fn apply(&self, sig: &Signature, t: &Term) -> Result<Term> {
        if t.cod() != &self.dom {
            return Err(Error::IllFormed(format!(
                "cannot postcompose a term into {} with an arrow out of {}",
                t.cod(),
                self.dom
            )));
        }
        subst(sig, &self.comps, t)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, sig: &Signature, inner: &SumArrow) -> Result<SumArrow> {
        let comps = inner.comps.iter().map(|c| self.apply(sig, c)).collect::<Result<Vec<_>>>()?;
        Ok(SumArrow { dom: inner.dom.clone(), comps })
    }

    /// `can_{offset+k}` for each summand `k` of `part`, as an arrow into `whole`.
    pub fn inclusion(part: &Table, whole: &Table, offset: usize) -> SumArrow {
        let cod = Arc::new(whole.clone());
        let real = realization(whole);
        let comps = (0..part.len()).map(|k| Term::glob(&cod, real.top(offset + k))).collect();
        SumArrow { dom: part.clone(), comps }
    }

    /// `p_1 ⨿ ... ⨿ p_m`, glued along `D_{bottoms[k]}` on both sides.
    pub fn sum(sig: &Signature, parts: &[SumArrow], bottoms: &[Dim]) -> Result<SumArrow> {
        if parts.is_empty() || bottoms.len() + 1 != parts.len() {
            return Err(Error::IllFormed("a sum needs one gluing dimension between consecutive parts".into()));
        }
        let mut dom = parts[0].dom.clone();
        let mut cod = parts[0].cod().clone();
        for (p, &b) in parts[1..].iter().zip(bottoms) {
            dom = dom.concat(b, &p.dom)?;
            cod = cod.concat(b, p.cod())?;
        }
        let mut comps = Vec::new();
        let mut offset = 0;
        for p in parts {
            let inc = SumArrow::inclusion(p.cod(), &cod, offset);
            for c in &p.comps {
                comps.push(inc.apply(sig, c)?);
            }
            offset += p.cod().len();
        }
        SumArrow::new(sig, dom, comps)
    }
}
