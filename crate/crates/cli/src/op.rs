use std::collections::BTreeMap;

use coherator::extensions::{ParallelPair, Term};
use coherator::structural::{LiftingProvider, StructuralCatalog};
use coherator::{Error, Result};

/// A catalog entry named on the command line, e.g. `comp:l=2,i=3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSpec {
    pub name: String,
    pub params: BTreeMap<String, usize>,
}

impl std::str::FromStr for OpSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<OpSpec> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            let v: usize = v.trim().parse().map_err(|_| Error::Parse(format!("`{v}` is not a number")))?;
            if params.insert(k.trim().to_string(), v).is_some() {
                return Err(Error::Parse(format!("`{k}` given twice")));
            }
        }
        let spec = OpSpec { name: name.trim().to_string(), params };
        spec.check_keys()?;
        Ok(spec)
    }
}

/// Operation names with the parameters each one takes.
pub const OPS: &[(&str, &[&str])] = &[
    ("comp", &["l", "i"]),
    ("comp-mary", &["i", "m"]),
    ("assoc1", &["i"]),
    ("assoc2", &["i"]),
    ("naive-assoc2", &["i"]),
    ("unit", &["i"]),
    ("unit-left", &["i"]),
    ("unit-right", &["i"]),
    ("inverse", &["l", "i"]),
    ("inverse-left", &["i"]),
    ("inverse-right", &["i"]),
];

impl OpSpec {
    fn check_keys(&self) -> Result<()> {
        let (_, keys) = OPS.iter().find(|(n, _)| *n == self.name).ok_or_else(|| {
            let names: Vec<&str> = OPS.iter().map(|(n, _)| *n).collect();
            Error::Parse(format!("unknown operation `{}`; expected one of {}", self.name, names.join(", ")))
        })?;
        for k in self.params.keys() {
            if !keys.contains(&k.as_str()) && !(k == "l" && keys.contains(&"i")) {
                return Err(Error::Parse(format!("`{}` takes no parameter `{k}`", self.name)));
            }
        }
        for k in keys.iter().filter(|k| **k != "l") {
            if !self.params.contains_key(*k) {
                return Err(Error::Parse(format!("`{}` needs `{k}=`", self.name)));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> usize {
        self.params.get(key).copied().unwrap_or(1)
    }

    /// The pair the entry lifts and the lifting itself.
    pub fn derive<P: LiftingProvider>(&self, cat: &mut StructuralCatalog<P>) -> Result<(ParallelPair, Term)> {
        let (i, l) = (self.get("i"), self.get("l"));
        match self.name.as_str() {
            "comp" => Ok((cat.comp_pair(l, i)?, cat.comp(l, i)?)),
            "comp-mary" => {
                let m = self.get("m");
                Ok((cat.comp_mary_pair(i, m)?, cat.comp_mary(i, m)?))
            }
            "assoc1" => Ok((cat.assoc1_pair(i)?, cat.assoc1(i)?)),
            "assoc2" => Ok((cat.assoc2_pair(i)?, cat.assoc2(i)?)),
            "naive-assoc2" => {
                let p = cat.naive_assoc2_pair(i)?;
                let t = cat.provider_mut().lift(&p)?;
                Ok((p, t))
            }
            "unit" => Ok((cat.unit_pair(i)?, cat.unit(i)?)),
            "unit-left" => Ok((cat.unit_constraint_pairs(i)?.0, cat.unit_constraints(i)?.0)),
            "unit-right" => Ok((cat.unit_constraint_pairs(i)?.1, cat.unit_constraints(i)?.1)),
            "inverse" => Ok((cat.inverse_pair(l, i)?, cat.inverse(l, i)?)),
            "inverse-left" => Ok((cat.inverse_constraint_pairs(i)?.0, cat.inverse_constraints(i)?.0)),
            "inverse-right" => Ok((cat.inverse_constraint_pairs(i)?.1, cat.inverse_constraints(i)?.1)),
            other => Err(Error::Parse(format!("unknown operation `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let op: OpSpec = "comp:l=2,i=3".parse().unwrap();
        assert_eq!(op.name, "comp");
        assert_eq!((op.get("l"), op.get("i")), (2, 3));
        let op: OpSpec = "unit:i=0".parse().unwrap();
        assert_eq!(op.get("i"), 0);
        let op: OpSpec = "comp:i=2".parse().unwrap();
        assert_eq!(op.get("l"), 1);
        assert!("unit".parse::<OpSpec>().is_err());
        assert!("unit:i=x".parse::<OpSpec>().is_err());
        assert!("unit:i=1,m=2".parse::<OpSpec>().is_err());
        assert!("pentagon:i=1".parse::<OpSpec>().is_err());
        assert!("comp:i=1,i=2".parse::<OpSpec>().is_err());
    }
}
