use proptest::prelude::*;

use coherator::pasting::{
    boundary, cell_count_formula, cosource_cotarget, dimension, enumerate_tables, extend_from_tops, hom_theta0,
    realization, PlanarTree,
};
use coherator::{CellRef, GSMorphism, Table};

fn table() -> impl Strategy<Value = Table> {
    prop::sample::select(enumerate_tables(3, 4))
}

fn small_table() -> impl Strategy<Value = Table> {
    prop::sample::select(enumerate_tables(2, 3))
}

proptest! {
    #[test]
    fn cell_count_matches_the_formula(t in table()) {
        prop_assert_eq!(realization(&t).set().total_cells(), cell_count_formula(&t));
    }

    #[test]
    fn text_and_tree_round_trips(t in table()) {
        prop_assert_eq!(t.to_string().parse::<Table>().unwrap(), t.clone());
        let tree = PlanarTree::from_table(&t);
        prop_assert_eq!(tree.leaves(), t.len());
        prop_assert_eq!(tree.to_table().unwrap(), t);
    }

    #[test]
    fn boundary_drops_one_dimension(t in table()) {
        let d = dimension(&t);
        if d == 0 {
            prop_assert!(boundary(&t).is_err());
        } else {
            let b = boundary(&t).unwrap();
            prop_assert_eq!(dimension(&b), d - 1);
            let (s, tt) = cosource_cotarget(&t).unwrap();
            let (from, to) = (realization(&b), realization(&t));
            s.check(from.set(), to.set()).unwrap();
            tt.check(from.set(), to.set()).unwrap();
            prop_assert!(s.is_injective() && tt.is_injective());
        }
    }

    #[test]
    fn arrows_compose(a in small_table(), b in small_table(), c in small_table()) {
        let (ra, rc) = (realization(&a), realization(&c));
        for f in hom_theta0(&a, &b) {
            for g in hom_theta0(&b, &c) {
                g.after(&f).check(ra.set(), rc.set()).unwrap();
            }
        }
        let id = GSMorphism::identity(ra.set());
        prop_assert!(hom_theta0(&a, &a).contains(&id));
    }

    #[test]
    fn arrows_are_determined_by_top_cells(a in small_table(), b in small_table()) {
        let ra = realization(&a);
        for f in hom_theta0(&a, &b) {
            let tops: Vec<CellRef> = (0..a.len()).map(|k| f.apply(ra.top(k))).collect();
            prop_assert_eq!(extend_from_tops(&a, &b, &tops).unwrap(), f);
        }
    }
}
