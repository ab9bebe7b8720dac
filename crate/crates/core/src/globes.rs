//! The category of globes.
//!
//! Objects are the globes `D_i`, generated by the cosource and cotarget maps
//! `s_i, t_i : D_{i-1} -> D_i`. Under the coglobular relations every composite
//! collapses to one of at most two arrows per hom-set, so an arrow is stored by
//! its endpoints and a polarity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Dimension of a globe.
pub type Dim = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Identity,
    Source,
    Target,
}

/// An arrow `D_i -> D_j` of the globe category in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlobeMap {
    src_dim: Dim,
    tgt_dim: Dim,
    polarity: Polarity,
}

impl GlobeMap {
    pub fn identity(i: Dim) -> Self {
        GlobeMap { src_dim: i, tgt_dim: i, polarity: Polarity::Identity }
    }

    /// The iterated cosource `D_i -> D_j`, `i < j`.
    pub fn source(i: Dim, j: Dim) -> Self {
        assert!(i < j, "iterated cosource needs i < j (got {i}, {j})");
        GlobeMap { src_dim: i, tgt_dim: j, polarity: Polarity::Source }
    }

    /// The iterated cotarget `D_i -> D_j`, `i < j`.
    pub fn target(i: Dim, j: Dim) -> Self {
        assert!(i < j, "iterated cotarget needs i < j (got {i}, {j})");
        GlobeMap { src_dim: i, tgt_dim: j, polarity: Polarity::Target }
    }

    /// `s_j : D_{j-1} -> D_j`.
    pub fn sigma(j: Dim) -> Self {
        Self::source(j - 1, j)
    }

    /// `t_j : D_{j-1} -> D_j`.
    pub fn tau(j: Dim) -> Self {
        Self::target(j - 1, j)
    }

    /// Builds a map from its parts, checking the dimension constraint.
    pub fn new(src_dim: Dim, tgt_dim: Dim, polarity: Polarity) -> Result<Self, Error> {
        let ok = match polarity {
            Polarity::Identity => src_dim == tgt_dim,
            Polarity::Source | Polarity::Target => src_dim < tgt_dim,
        };
        if ok {
            Ok(GlobeMap { src_dim, tgt_dim, polarity })
        } else {
            Err(Error::InvalidGlobeMap { src_dim, tgt_dim })
        }
    }

    pub fn src_dim(&self) -> Dim {
        self.src_dim
    }

    pub fn tgt_dim(&self) -> Dim {
        self.tgt_dim
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_identity(&self) -> bool {
        self.polarity == Polarity::Identity
    }

    /// `self ∘ inner`, where `inner` lands in the source of `self`.
    pub fn after(&self, inner: &GlobeMap) -> Result<GlobeMap, Error> {
        compose_globe(self, inner)
    }
}

/// All arrows `D_i -> D_j`, in the order identity, source, target.
pub fn hom_globes(i: Dim, j: Dim) -> Vec<GlobeMap> {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Equal => vec![GlobeMap::identity(i)],
        Less => vec![GlobeMap::source(i, j), GlobeMap::target(i, j)],
        Greater => Vec::new(),
    }
}

/// Composite `g2 ∘ g1`. The lowest non-identity factor fixes the polarity.
pub fn compose_globe(g2: &GlobeMap, g1: &GlobeMap) -> Result<GlobeMap, Error> {
    if g1.tgt_dim != g2.src_dim {
        return Err(Error::DimensionMismatch { expected: g2.src_dim, found: g1.tgt_dim });
    }
    let polarity = if g1.is_identity() { g2.polarity } else { g1.polarity };
    Ok(GlobeMap { src_dim: g1.src_dim, tgt_dim: g2.tgt_dim, polarity })
}

impl fmt::Display for GlobeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Identity => write!(f, "id_{}", self.src_dim),
            Polarity::Source => write!(f, "s^{}_{}", self.tgt_dim, self.src_dim),
            Polarity::Target => write!(f, "t^{}_{}", self.tgt_dim, self.src_dim),
        }
    }
}

impl FromStr for GlobeMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("bad globe map `{s}`"));
        if let Some(rest) = s.strip_prefix("id_") {
            let i: Dim = rest.parse().map_err(|_| bad())?;
            return Ok(GlobeMap::identity(i));
        }
        let polarity = match s.chars().next() {
            Some('s') => Polarity::Source,
            Some('t') => Polarity::Target,
            _ => return Err(bad()),
        };
        let rest = s[1..].strip_prefix('^').ok_or_else(bad)?;
        let (j, i) = rest.split_once('_').ok_or_else(bad)?;
        let j: Dim = j.parse().map_err(|_| bad())?;
        let i: Dim = i.parse().map_err(|_| bad())?;
        GlobeMap::new(i, j, polarity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expected_hom_size(i: Dim, j: Dim) -> usize {
        if i < j {
            2
        } else if i == j {
            1
        } else {
            0
        }
    }

    #[test]
    fn hom_examples() {
        assert_eq!(hom_globes(2, 2), vec![GlobeMap::identity(2)]);
        assert!(hom_globes(3, 1).is_empty());
        assert_eq!(hom_globes(0, 2), vec![GlobeMap::source(0, 2), GlobeMap::target(0, 2)]);
    }

    #[test]
    fn hom_sizes_up_to_six() {
        for i in 0..=6 {
            for j in 0..=6 {
                assert_eq!(hom_globes(i, j).len(), expected_hom_size(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn composition_examples() {
        let s2s1 = compose_globe(&GlobeMap::sigma(2), &GlobeMap::sigma(1)).unwrap();
        assert_eq!(s2s1, GlobeMap::source(0, 2));
        // t_2 s_1 = s_2 s_1 under the coglobular relations
        let t2s1 = compose_globe(&GlobeMap::tau(2), &GlobeMap::sigma(1)).unwrap();
        assert_eq!(t2s1, GlobeMap::source(0, 2));
        let id = compose_globe(&GlobeMap::identity(2), &GlobeMap::target(0, 2)).unwrap();
        assert_eq!(id, GlobeMap::target(0, 2));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = compose_globe(&GlobeMap::sigma(3), &GlobeMap::sigma(1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn associative_and_unital_up_to_five() {
        let all: Vec<GlobeMap> = (0..=5).flat_map(|i| (0..=5).flat_map(move |j| hom_globes(i, j))).collect();
        for a in &all {
            let left = compose_globe(&GlobeMap::identity(a.tgt_dim()), a).unwrap();
            let right = compose_globe(a, &GlobeMap::identity(a.src_dim())).unwrap();
            assert_eq!(&left, a);
            assert_eq!(&right, a);
            for b in all.iter().filter(|b| b.src_dim() == a.tgt_dim()) {
                for c in all.iter().filter(|c| c.src_dim() == b.tgt_dim()) {
                    let x = compose_globe(c, &compose_globe(b, a).unwrap()).unwrap();
                    let y = compose_globe(&compose_globe(c, b).unwrap(), a).unwrap();
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn generator_words_normalize_by_lowest_factor() {
        // Every word of generators D_0 -> D_4 whose first letter is sigma is s^4_0.
        for mask in 0u32..8 {
            let mut acc = GlobeMap::sigma(1);
            for step in 0..3 {
                let j = step + 2;
                let g = if mask & (1 << step) == 0 { GlobeMap::sigma(j) } else { GlobeMap::tau(j) };
                acc = compose_globe(&g, &acc).unwrap();
            }
            assert_eq!(acc, GlobeMap::source(0, 4));
        }
    }

    #[test]
    fn text_round_trip() {
        for g in [GlobeMap::identity(3), GlobeMap::source(1, 4), GlobeMap::target(0, 2)] {
            assert_eq!(g.to_string().parse::<GlobeMap>().unwrap(), g);
        }
        assert_eq!(GlobeMap::source(0, 2).to_string(), "s^2_0");
        assert!("s^1_2".parse::<GlobeMap>().is_err());
    }
}
