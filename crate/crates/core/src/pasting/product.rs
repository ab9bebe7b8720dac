use crate::globes::GlobeMap;

use super::globular_set::GlobularSet;
use super::table::Table;

/// Matching condition between adjacent factors: the tuple keeps `(x_k, x_{k+1})`
/// only when `left(x_k) == right(x_{k+1})`.
pub struct Glue<'a, V, K> {
    pub left: Box<dyn Fn(&V) -> K + 'a>,
    pub right: Box<dyn Fn(&V) -> K + 'a>,
}

/// The iterated fiber product of `values` over the given glue maps, as the
/// list of compatible tuples in lexicographic order of factor positions.
pub fn globular_product<V: Clone, K: PartialEq>(values: &[Vec<V>], glue: &[Glue<'_, V, K>]) -> Vec<Vec<V>> {
    assert_eq!(glue.len() + 1, values.len().max(1), "one glue map per adjacent pair of factors");
    let mut out = Vec::new();
    if values.is_empty() {
        return out;
    }
    let mut tuple: Vec<V> = Vec::with_capacity(values.len());
    fn go<V: Clone, K: PartialEq>(
        values: &[Vec<V>],
        glue: &[Glue<'_, V, K>],
        tuple: &mut Vec<V>,
        out: &mut Vec<Vec<V>>,
    ) {
        let k = tuple.len();
        if k == values.len() {
            out.push(tuple.clone());
            return;
        }
        for v in &values[k] {
            if k > 0 && (glue[k - 1].left)(&tuple[k - 1]) != (glue[k - 1].right)(v) {
                continue;
            }
            tuple.push(v.clone());
            go(values, glue, tuple, out);
            tuple.pop();
        }
    }
    go(values, glue, &mut tuple, &mut out);
    out
}

/// `X(T)` for a finite globular set: tuples of cells of dimensions `i_k` with
/// the iterated source of each cell equal to the iterated target of the next.
pub fn globular_product_of(set: &GlobularSet, table: &Table) -> Vec<Vec<usize>> {
    let values: Vec<Vec<usize>> = table.tops().iter().map(|&d| (0..set.count(d)).collect()).collect();
    let glue: Vec<Glue<'_, usize, usize>> = table
        .bottoms()
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let (l, r) = (table.tops()[k], table.tops()[k + 1]);
            Glue {
                left: Box::new(move |x: &usize| set.act(&GlobeMap::source(b, l), *x)),
                right: Box::new(move |y: &usize| set.act(&GlobeMap::target(b, r), *y)),
            }
        })
        .collect();
    globular_product(&values, &glue)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial<'a>() -> Glue<'a, u32, ()> {
        Glue { left: Box::new(|_| ()), right: Box::new(|_| ()) }
    }

    #[test]
    fn singleton_factors() {
        let p = globular_product(&[vec![7u32], vec![8]], &[trivial()]);
        assert_eq!(p, vec![vec![7, 8]]);
    }

    #[test]
    fn composable_pairs_over_a_point() {
        let g: Vec<u32> = (0..4).collect();
        let p = globular_product(&[g.clone(), g], &[trivial()]);
        assert_eq!(p.len(), 16);
    }

    #[test]
    fn empty_factor_kills_the_product() {
        let p = globular_product(&[vec![1u32], vec![], vec![2]], &[trivial(), trivial()]);
        assert!(p.is_empty());
    }

    #[test]
    fn matching_condition_is_applied() {
        let parity = || Glue::<u32, u32> { left: Box::new(|x| x % 2), right: Box::new(|y| y % 2) };
        let p = globular_product(&[vec![0, 1, 2], vec![0, 1]], &[parity()]);
        assert_eq!(p, vec![vec![0, 0], vec![1, 1], vec![2, 0]]);
    }
}
