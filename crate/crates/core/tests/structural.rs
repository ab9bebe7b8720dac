use coherator::coherators::Flavor;
use coherator::extensions::{boundary_of, make_parallel_pair, ParallelPair, Term};
use coherator::structural::{FreeProvider, LiftingProvider, StructuralCatalog};
use coherator::Error;

fn catalog(flavor: Flavor) -> StructuralCatalog<FreeProvider> {
    StructuralCatalog::new(FreeProvider::new(flavor))
}

fn assert_boundary(c: &StructuralCatalog<FreeProvider>, t: &Term, p: &ParallelPair) {
    let (s, tt) = boundary_of(c.provider().signature(), t).unwrap();
    assert_eq!(&s, p.f());
    assert_eq!(&tt, p.g());
}

#[test]
fn compositions_have_their_displayed_boundaries() {
    let mut c = catalog(Flavor::Groupoid);
    for i in 1..=4 {
        for l in 1..=i {
            let t = c.comp(l, i).unwrap();
            let p = c.comp_pair(l, i).unwrap();
            assert_boundary(&c, &t, &p);
            assert_eq!(t.dim(), i);
        }
        for m in 2..=4 {
            let t = c.comp_mary(i, m).unwrap();
            let p = c.comp_mary_pair(i, m).unwrap();
            assert_boundary(&c, &t, &p);
            assert_eq!(t.cod().len(), m);
        }
    }
}

#[test]
fn naive_level_two_associativity_is_not_parallel() {
    let mut c = catalog(Flavor::Groupoid);
    for i in 2..=4 {
        assert!(matches!(c.naive_assoc2_pair(i), Err(Error::NotParallel(_))), "i = {i}");
        let p = c.assoc2_pair(i).unwrap();
        let t = c.assoc2(i).unwrap();
        assert_boundary(&c, &t, &p);
    }
}

#[test]
fn units_inverses_and_constraints() {
    let mut c = catalog(Flavor::Groupoid);
    for i in 0..=4 {
        let k = c.unit(i).unwrap();
        assert_eq!(k.dim(), i + 1);
        let p = c.unit_pair(i).unwrap();
        assert_boundary(&c, &k, &p);
    }
    for i in 1..=4 {
        let a = c.assoc1(i).unwrap();
        let p = c.assoc1_pair(i).unwrap();
        assert_boundary(&c, &a, &p);
        let (l, r) = c.unit_constraints(i).unwrap();
        let (lp, rp) = c.unit_constraint_pairs(i).unwrap();
        assert_boundary(&c, &l, &lp);
        assert_boundary(&c, &r, &rp);
        for lv in 1..=i {
            let w = c.inverse(lv, i).unwrap();
            let p = c.inverse_pair(lv, i).unwrap();
            assert_boundary(&c, &w, &p);
        }
        let (l, r) = c.inverse_constraints(i).unwrap();
        let (lp, rp) = c.inverse_constraint_pairs(i).unwrap();
        assert_boundary(&c, &l, &lp);
        assert_boundary(&c, &r, &rp);
    }
}

#[test]
fn category_flavor_rejects_inverses_only() {
    let mut c = catalog(Flavor::Category);
    for i in 1..=3 {
        c.comp(1, i).unwrap();
        c.assoc1(i).unwrap();
        c.unit_constraints(i).unwrap();
        assert!(matches!(c.inverse(1, i), Err(Error::NotAdmissible(_))));
        assert!(matches!(c.inverse_constraints(i), Err(Error::NotAdmissible(_))));
    }
    c.comp(2, 2).unwrap();
    c.assoc2(2).unwrap();
}

#[test]
fn two_liftings_of_one_pair_are_parallel() {
    let mut c = catalog(Flavor::Groupoid);
    for i in 1..=3 {
        let p = c.comp_pair(1, i).unwrap();
        let a = c.comp(1, i).unwrap();
        let b = c.provider_mut().fresh_lift(&p).unwrap();
        assert_ne!(a, b);
        let h = make_parallel_pair(c.provider().signature(), &a, &b).unwrap();
        let homotopy = c.provider_mut().lift(&h).unwrap();
        assert_eq!(homotopy.dim(), i + 1);
    }
}
