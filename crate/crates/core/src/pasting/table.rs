use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::globes::Dim;

/// A table of dimensions `(i_1 ... i_m | i'_1 ... i'_{m-1})`, indexing a
/// globular sum of disks `D_{i_1} ⨿_{D_{i'_1}} D_{i_2} ⨿ ... ⨿ D_{i_m}`.
///
/// Summand `k` is glued to summand `k+1` by identifying the iterated source of
/// the former with the iterated target of the latter in dimension `i'_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    tops: Vec<Dim>,
    bottoms: Vec<Dim>,
}

impl Table {
    pub fn new(tops: Vec<Dim>, bottoms: Vec<Dim>) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::InvalidTable("a table needs at least one summand".into()));
        }
        if bottoms.len() + 1 != tops.len() {
            return Err(Error::InvalidTable(format!(
                "{} summands need {} gluing dimensions, got {}",
                tops.len(),
                tops.len() - 1,
                bottoms.len()
            )));
        }
        for (k, &b) in bottoms.iter().enumerate() {
            if b >= tops[k] || b >= tops[k + 1] {
                return Err(Error::InvalidTable(format!(
                    "gluing dimension {b} must be below {} and {}",
                    tops[k],
                    tops[k + 1]
                )));
            }
        }
        Ok(Table { tops, bottoms })
    }

    /// The single disk `D_i`.
    pub fn disk(i: Dim) -> Self {
        Table { tops: vec![i], bottoms: Vec::new() }
    }

    /// `m` copies of `D_i` glued along `D_b`.
    pub fn repeated(i: Dim, b: Dim, m: usize) -> Result<Self> {
        Table::new(vec![i; m], vec![b; m.saturating_sub(1)])
    }

    pub fn tops(&self) -> &[Dim] {
        &self.tops
    }

    pub fn bottoms(&self) -> &[Dim] {
        &self.bottoms
    }

    pub fn len(&self) -> usize {
        self.tops.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_disk(&self) -> bool {
        self.tops.len() == 1
    }

    pub fn dimension(&self) -> Dim {
        dimension(self)
    }

    /// `self ⨿_{D_b} other`: glue the first summand of `other` below the last
    /// summand of `self`.
    pub fn concat(&self, b: Dim, other: &Table) -> Result<Table> {
        let mut tops = self.tops.clone();
        tops.extend_from_slice(&other.tops);
        let mut bottoms = self.bottoms.clone();
        bottoms.push(b);
        bottoms.extend_from_slice(&other.bottoms);
        Table::new(tops, bottoms)
    }
}

/// Maximum of the top dimensions.
pub fn dimension(t: &Table) -> Dim {
    t.tops.iter().copied().max().unwrap_or(0)
}

/// The source/target boundary `∂T` of a positive-dimensional table.
///
/// Summands of maximal dimension `i` are lowered to `i - 1`. Two lowered
/// summands glued along `D_{i-1}` become a single summand, since the amalgamated
/// sum over an identity is the disk itself.
pub fn boundary(t: &Table) -> Result<Table> {
    Ok(boundary_runs(t)?.0)
}

/// `∂T` together with, for each of its summands, the range of summands of `T`
/// it comes from.
pub(crate) fn boundary_runs(t: &Table) -> Result<(Table, Vec<(usize, usize)>)> {
    let i = dimension(t);
    if i == 0 {
        return Err(Error::ZeroDimensional);
    }
    let lowered: Vec<Dim> = t.tops.iter().map(|&d| if d == i { i - 1 } else { d }).collect();
    let mut tops = vec![lowered[0]];
    let mut bottoms = Vec::new();
    let mut runs = vec![(0usize, 0usize)];
    for (k, &b) in t.bottoms.iter().enumerate() {
        if b == i - 1 {
            // both neighbours have dimension i: merge
            runs.last_mut().expect("non-empty").1 = k + 1;
        } else {
            bottoms.push(b);
            tops.push(lowered[k + 1]);
            runs.push((k + 1, k + 1));
        }
    }
    Ok((Table::new(tops, bottoms)?, runs))
}

/// Every valid table with dimensions at most `max_dim` and at most `max_len`
/// summands, in lexicographic order of `(tops, bottoms)`.
pub fn enumerate_tables(max_dim: Dim, max_len: usize) -> Vec<Table> {
    let mut out = Vec::new();
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    fn grow(max_dim: Dim, max_len: usize, tops: &mut Vec<Dim>, bottoms: &mut Vec<Dim>, out: &mut Vec<Table>) {
        out.push(Table { tops: tops.clone(), bottoms: bottoms.clone() });
        if tops.len() == max_len {
            return;
        }
        let last = *tops.last().expect("non-empty");
        for next in 1..=max_dim {
            for b in 0..last.min(next) {
                tops.push(next);
                bottoms.push(b);
                grow(max_dim, max_len, tops, bottoms, out);
                tops.pop();
                bottoms.pop();
            }
        }
    }
    if max_len == 0 {
        return out;
    }
    for first in 0..=max_dim {
        tops.push(first);
        grow(max_dim, max_len, &mut tops, &mut bottoms, &mut out);
        tops.pop();
    }
    out.sort();
    out
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Dim]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        if self.bottoms.is_empty() {
            write!(f, "({})", join(&self.tops))
        } else {
            write!(f, "({} | {})", join(&self.tops), join(&self.bottoms))
        }
    }
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("table `{s}` must be parenthesised")))?;
        let (tops, bottoms) = match inner.split_once('|') {
            Some((a, b)) => (a, b),
            None => (inner, ""),
        };
        let parse = |part: &str| -> Result<Vec<Dim>> {
            part.split_whitespace()
                .map(|w| w.parse::<Dim>().map_err(|_| Error::Parse(format!("bad dimension `{w}`"))))
                .collect()
        };
        Table::new(parse(tops)?, parse(bottoms)?)
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
