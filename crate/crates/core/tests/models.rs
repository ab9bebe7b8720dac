use std::sync::Arc;

use coherator::coherators::{Bounds, ExtensionTower, Flavor, Strategy};
use coherator::extensions::{ParallelPair, Signature, Term};
use coherator::models::{
    check_equivalence_relation, check_segal, classes, connected_group_model, constant_model, group_model,
    homotopy_related, is_weak_equivalence, one_point_model, pi0, pi_n, varpi, FiniteGroup, Model, ModelMorphism,
    Witnesses,
};
use coherator::structural::{FreeProvider, LiftingProvider, StructuralCatalog};
use coherator::{CellRef, Error, GSMorphism};

/// A catalog with the witnesses for `trunc` and the extra operations the
/// tests evaluate, all adjoined before any model is built.
struct Setup {
    cat: StructuralCatalog<FreeProvider>,
    w: Witnesses,
}

impl Setup {
    fn new(trunc: usize) -> Setup {
        let mut cat = StructuralCatalog::new(FreeProvider::new(Flavor::Groupoid));
        let w = Witnesses::from_catalog(&mut cat, trunc).unwrap();
        Setup { cat, w }
    }

    fn sig(&self) -> Arc<Signature> {
        Arc::new(self.cat.provider().signature().clone())
    }
}

/// The symbol a lifting term stands for, with identity components.
fn table_of<'a>(model: &'a Model, t: &Term) -> &'a coherator::models::OpTable {
    match t {
        Term::Lift { sym, .. } => &model.ops[sym],
        _ => panic!("not a lifting"),
    }
}

#[test]
fn group_tables_for_the_basic_operations() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 1).unwrap();
    let omega = s.cat.inverse(1, 1).unwrap();
    let kappa = s.cat.unit(0).unwrap();
    let z2 = FiniteGroup::cyclic(2);
    let m = group_model(&z2, s.sig()).unwrap();
    for x in 0..2 {
        for y in 0..2 {
            assert_eq!(table_of(&m, &nabla)[&vec![x, y]], (x + y) % 2);
        }
        assert_eq!(table_of(&m, &omega)[&vec![x]], x);
    }
    assert_eq!(table_of(&m, &kappa)[&vec![0]], 0);
    let z3 = FiniteGroup::cyclic(3);
    let m = group_model(&z3, s.sig()).unwrap();
    for x in 0..3 {
        assert_eq!(m.eval(&omega, &[x]).unwrap().index, (3 - x) % 3);
    }
}

#[test]
fn composition_is_the_group_law_in_s3() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 1).unwrap();
    let triple = s.cat.comp_mary(1, 3).unwrap();
    let g = FiniteGroup::symmetric3();
    let m = group_model(&g, s.sig()).unwrap();
    // permutations as arrays, composed directly
    let perm = |k: usize| -> Vec<usize> { g.names[k].chars().map(|c| c.to_digit(10).unwrap() as usize).collect() };
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
    for x in 0..6 {
        for y in 0..6 {
            let xy = m.eval(&nabla, &[x, y]).unwrap().index;
            assert_eq!(perm(xy), compose(&perm(x), &perm(y)));
            for z in 0..6 {
                let xyz = m.eval(&triple, &[x, y, z]).unwrap().index;
                assert_eq!(perm(xyz), compose(&perm(x), &compose(&perm(y), &perm(z))));
            }
        }
    }
}

#[test]
fn two_dimensional_constraints_are_identity_witnesses() {
    let mut s = Setup::new(2);
    let assoc = s.cat.assoc1(1).unwrap();
    let (lambda, rho) = s.cat.unit_constraints(1).unwrap();
    let (inv_l, inv_r) = s.cat.inverse_constraints(1).unwrap();
    let g = FiniteGroup::symmetric3();
    let m = group_model(&g, s.sig()).unwrap();
    for x in 0..6 {
        for y in 0..6 {
            for z in 0..6 {
                let a = m.eval(&assoc, &[x, y, z]).unwrap();
                assert_eq!(a, CellRef::new(2, g.product(g.product(x, y), z)));
            }
        }
        assert_eq!(m.eval(&lambda, &[x]).unwrap(), CellRef::new(2, x));
        assert_eq!(m.eval(&rho, &[x]).unwrap(), CellRef::new(2, x));
        assert_eq!(m.eval(&inv_l, &[x]).unwrap(), CellRef::new(2, g.identity));
        assert_eq!(m.eval(&inv_r, &[x]).unwrap(), CellRef::new(2, g.identity));
    }
}

#[test]
fn boundaries_of_evaluated_operations() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 2).unwrap();
    let kappa = s.cat.unit(1).unwrap();
    let omega = s.cat.inverse(1, 2).unwrap();
    let (lambda, _) = s.cat.unit_constraints(1).unwrap();
    let kappa0 = s.cat.unit(0).unwrap();
    let nabla1 = s.cat.comp(1, 1).unwrap();
    let g = FiniteGroup::cyclic(3);
    let m = connected_group_model(&g, s.sig()).unwrap();
    let c = &m.carrier;
    let n = c.count(2);
    for x in 0..n {
        for y in (0..n).filter(|&y| c.src[2][x] == c.tgt[2][y]) {
            let xy = m.eval(&nabla, &[x, y]).unwrap().index;
            assert_eq!(c.src[2][xy], c.src[2][y]);
            assert_eq!(c.tgt[2][xy], c.tgt[2][x]);
        }
        let inv = m.eval(&omega, &[x]).unwrap().index;
        assert_eq!((c.src[2][inv], c.tgt[2][inv]), (c.tgt[2][x], c.src[2][x]));
    }
    for x in 0..c.count(1) {
        let one = m.eval(&kappa, &[x]).unwrap().index;
        assert_eq!((c.src[2][one], c.tgt[2][one]), (x, x));
        // s(λ(x)) = 1_{t(x)} * x and t(λ(x)) = x
        let l = m.eval(&lambda, &[x]).unwrap().index;
        let unit_t = m.eval(&kappa0, &[c.tgt[1][x]]).unwrap().index;
        assert_eq!(c.src[2][l], m.eval(&nabla1, &[unit_t, x]).unwrap().index);
        assert_eq!(c.tgt[2][l], x);
    }
}

#[test]
fn segal_condition_on_shipped_models() {
    let mut s = Setup::new(3);
    s.cat.assoc1(1).unwrap();
    s.cat.unit_constraints(1).unwrap();
    check_segal(&constant_model(5, 3, s.sig()).unwrap()).unwrap();
    for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        check_segal(&group_model(&g, s.sig()).unwrap()).unwrap();
        check_segal(&connected_group_model(&g, s.sig()).unwrap()).unwrap();
    }
}

#[test]
fn corrupted_product_is_detected_with_a_witness() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 1).unwrap();
    s.cat.assoc1(1).unwrap();
    let g = FiniteGroup::cyclic(3);
    let mut m = group_model(&g, s.sig()).unwrap();
    let Term::Lift { sym, .. } = &nabla else { unreachable!() };
    let entry = m.ops.get_mut(sym).unwrap().get_mut(&vec![1, 1]).unwrap();
    *entry = (*entry + 1) % 3;
    match check_segal(&m) {
        Err(Error::SegalViolation { args, .. }) => {
            assert_eq!(args.len(), 3);
            assert!(args.windows(2).any(|w| w == [1, 1]), "{args:?}");
        }
        other => panic!("expected a violation, got {other:?}"),
    }
    // a 2-cell with the wrong boundary is caught at its own symbol
    let mut m = group_model(&g, s.sig()).unwrap();
    let assoc = s.cat.assoc1(1).unwrap();
    let Term::Lift { sym, .. } = &assoc else { unreachable!() };
    *m.ops.get_mut(sym).unwrap().get_mut(&vec![0, 1, 2]).unwrap() = 1;
    assert!(matches!(check_segal(&m), Err(Error::SegalViolation { symbol, .. }) if symbol == *sym));
}

#[test]
fn missing_tables_are_reported() {
    let s = Setup::new(2);
    let mut m = group_model(&FiniteGroup::cyclic(2), s.sig()).unwrap();
    let first = *m.ops.keys().next().unwrap();
    m.ops.remove(&first);
    assert!(matches!(check_segal(&m), Err(Error::SegalViolation { symbol, .. }) if symbol == first));
}

#[test]
fn evaluation_rejects_non_composable_arguments() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 1).unwrap();
    let m = constant_model(2, 2, s.sig()).unwrap();
    assert!(matches!(m.eval(&nabla, &[0, 1]), Err(Error::NotComposable(_))));
    assert!(matches!(m.eval(&nabla, &[0]), Err(Error::NotComposable(_))));
    assert_eq!(m.eval(&nabla, &[1, 1]).unwrap(), CellRef::new(1, 1));
}

#[test]
fn homotopy_is_an_equivalence_relation() {
    let s = Setup::new(3);
    let m = constant_model(5, 3, s.sig()).unwrap();
    for i in 0..3 {
        check_equivalence_relation(&m, &s.w, i).unwrap();
    }
    let s = Setup::new(2);
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        for m in [group_model(&g, s.sig()).unwrap(), connected_group_model(&g, s.sig()).unwrap()] {
            for i in 0..2 {
                check_equivalence_relation(&m, &s.w, i).unwrap();
            }
        }
    }
}

#[test]
fn homotopy_witnesses() {
    let s = Setup::new(2);
    let g = FiniteGroup::cyclic(3);
    let m = group_model(&g, s.sig()).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let h = homotopy_related(&m, x, y, 1).unwrap();
            assert_eq!(h.is_some(), x == y);
        }
        let refl = m.eval(&s.w.unit[1], &[x]).unwrap();
        assert_eq!((m.carrier.src[2][refl.index], m.carrier.tgt[2][refl.index]), (x, x));
    }
    assert!(matches!(homotopy_related(&m, 0, 0, 2), Err(Error::Truncation { .. })));
    let m = connected_group_model(&g, s.sig()).unwrap();
    let omega = s.w.inverse[2].clone().unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let h = homotopy_related(&m, x, y, 1).unwrap().unwrap();
            let back = m.eval(&omega, &[h]).unwrap().index;
            assert_eq!((m.carrier.src[2][back], m.carrier.tgt[2][back]), (y, x));
        }
    }
}

#[test]
fn connected_components() {
    let s = Setup::new(2);
    let a = group_model(&FiniteGroup::cyclic(2), s.sig()).unwrap();
    let b = group_model(&FiniteGroup::cyclic(3), s.sig()).unwrap();
    assert_eq!(pi0(&a).unwrap().len(), 1);
    assert_eq!(pi0(&one_point_model(2, s.sig()).unwrap()).unwrap().len(), 1);
    let u = a.disjoint_union(&b).unwrap();
    check_segal(&u).unwrap();
    assert_eq!(pi0(&u).unwrap().len(), 2);
    assert_eq!(pi0(&constant_model(4, 2, s.sig()).unwrap()).unwrap().len(), 4);
}

#[test]
fn fundamental_groupoid_of_a_group() {
    let s = Setup::new(2);
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        let m = group_model(&g, s.sig()).unwrap();
        let pg = varpi(&m, &s.w, 1).unwrap();
        pg.check_axioms().unwrap();
        assert_eq!(pg.objects.len(), 1);
        assert_eq!(pg.arrows.len(), g.order());
        let cm = connected_group_model(&g, s.sig()).unwrap();
        let pc = varpi(&cm, &s.w, 1).unwrap();
        pc.check_axioms().unwrap();
        assert_eq!(pc.arrows.len(), 1);
    }
}

#[test]
fn pi_one_of_a_group_model_is_the_group() {
    let s = Setup::new(2);
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        let m = group_model(&g, s.sig()).unwrap();
        let p = pi_n(&m, &s.w, 0, 1).unwrap();
        assert_eq!(p.order(), g.order());
        // element k of the table is the class of the arrow p.cells[k]
        for a in 0..p.order() {
            for b in 0..p.order() {
                assert_eq!(p.cells[p.mul[a][b]], g.product(p.cells[a], p.cells[b]));
            }
        }
        assert_eq!(p.cells[p.identity], g.identity);
        let trivial = pi_n(&connected_group_model(&g, s.sig()).unwrap(), &s.w, 0, 1).unwrap();
        assert_eq!(trivial.order(), 1);
    }
}

#[test]
fn homotopy_groups_of_trivial_models() {
    let s = Setup::new(3);
    let c = constant_model(3, 3, s.sig()).unwrap();
    let one = one_point_model(3, s.sig()).unwrap();
    for i in 1..3 {
        for x in 0..3 {
            assert_eq!(pi_n(&c, &s.w, x, i).unwrap().order(), 1);
        }
        assert_eq!(pi_n(&one, &s.w, 0, i).unwrap().order(), 1);
    }
    assert!(pi_n(&one, &s.w, 0, 3).is_err());
}

#[test]
fn composition_does_not_depend_on_the_chosen_lifting() {
    let mut s = Setup::new(2);
    let pair: ParallelPair = s.cat.comp_pair(1, 1).unwrap();
    let other = s.cat.provider_mut().fresh_lift(&pair).unwrap();
    let mut w2 = s.w.clone();
    assert_ne!(Some(other.clone()), w2.comp[1]);
    w2.comp[1] = Some(other);
    for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        for m in [group_model(&g, s.sig()).unwrap(), connected_group_model(&g, s.sig()).unwrap()] {
            assert_eq!(varpi(&m, &s.w, 1).unwrap(), varpi(&m, &w2, 1).unwrap());
        }
    }
}

#[test]
fn quotient_composition_respects_homotopy() {
    let mut s = Setup::new(2);
    let nabla = s.cat.comp(1, 1).unwrap();
    let m = connected_group_model(&FiniteGroup::symmetric3(), s.sig()).unwrap();
    let cls = classes(&m, 1).unwrap();
    for x1 in 0..6 {
        for x2 in 0..6 {
            if homotopy_related(&m, x1, x2, 1).unwrap().is_none() {
                continue;
            }
            for y in 0..6 {
                let a = m.eval(&nabla, &[x1, y]).unwrap().index;
                let b = m.eval(&nabla, &[x2, y]).unwrap().index;
                assert!(homotopy_related(&m, a, b, 1).unwrap().is_some());
                assert_eq!(cls[a], cls[b]);
            }
        }
    }
}

#[test]
fn weak_equivalences() {
    let s = Setup::new(2);
    let z2 = group_model(&FiniteGroup::cyclic(2), s.sig()).unwrap();
    let id = ModelMorphism::identity(&z2);
    assert!(is_weak_equivalence(&id, &z2, &z2, &s.w).unwrap().weak_equivalence);

    let point = one_point_model(2, s.sig()).unwrap();
    let collapse = ModelMorphism { cells: GSMorphism { maps: vec![vec![0], vec![0, 0], vec![0, 0]] } };
    let report = is_weak_equivalence(&collapse, &z2, &point, &s.w).unwrap();
    assert!(!report.weak_equivalence);
    assert!(report.reason.unwrap().contains("π_1"));
    assert_eq!(report.checked_up_to, 1);

    let z4 = group_model(&FiniteGroup::cyclic(4), s.sig()).unwrap();
    let perm = vec![vec![0], vec![2, 0, 3, 1], vec![2, 0, 3, 1]];
    let moved = z4.relabel(&perm).unwrap();
    check_segal(&moved).unwrap();
    let iso = ModelMorphism { cells: GSMorphism { maps: perm } };
    assert!(is_weak_equivalence(&iso, &z4, &moved, &s.w).unwrap().weak_equivalence);

    // not even a morphism: a relabeling that breaks the group law
    let bad = ModelMorphism { cells: GSMorphism { maps: vec![vec![0], vec![1, 0, 2, 3], vec![1, 0, 2, 3]] } };
    assert!(matches!(is_weak_equivalence(&bad, &z4, &z4, &s.w), Err(Error::NotAMorphism(_))));
}

#[test]
fn trivial_group_is_the_point() {
    let s = Setup::new(2);
    let e = group_model(&FiniteGroup::cyclic(1), s.sig()).unwrap();
    let point = one_point_model(2, s.sig()).unwrap();
    let iso = ModelMorphism { cells: GSMorphism::identity(&e.carrier) };
    iso.check(&e, &point).unwrap();
    iso.check(&point, &e).unwrap();
    assert!(is_weak_equivalence(&iso, &e, &point, &s.w).unwrap().weak_equivalence);
}

#[test]
fn model_json_round_trip() {
    let s = Setup::new(2);
    let sig = s.sig();
    let tower =
        ExtensionTower::from_signature(Flavor::Groupoid, Strategy::Canonical, Bounds::new(2, 6, sig.max_level()), &sig)
            .unwrap();
    let m = group_model(&FiniteGroup::cyclic(3), Arc::new(tower.signature().clone())).unwrap();
    let text = serde_json::to_string(&m.to_json(&tower)).unwrap();
    let (back, tower2) = Model::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.ops, m.ops);
    assert_eq!(back.carrier, m.carrier);
    assert_eq!(tower2.signature().len(), tower.signature().len());
    check_segal(&back).unwrap();
}

#[test]
fn pulling_a_model_back_along_a_tower_map() {
    use coherator::coherators::build_tower;
    use coherator::models::pull_back;
    use coherator::structural::TowerProvider;
    let bounds = Bounds::new(2, 4, 2);
    let canonical = build_tower(Flavor::Groupoid, Strategy::Canonical, bounds);
    let bl = build_tower(Flavor::Groupoid, Strategy::BataninLeinster, bounds);
    let g = FiniteGroup::symmetric3();
    let there = group_model(&g, Arc::new(canonical.signature().clone())).unwrap();
    let sig = Arc::new(bl.signature().clone());
    let back = pull_back(&there, TowerProvider::new(&canonical, 0, false), Arc::clone(&sig)).unwrap();
    check_segal(&back).unwrap();
    // the group model is determined by the group, so both routes agree
    assert_eq!(back.ops, group_model(&g, sig).unwrap().ops);
    // a provider over a smaller signature cannot answer every pair
    let small = Setup::new(2);
    let m = group_model(&g, small.sig()).unwrap();
    let err = pull_back(&m, small.cat.into_provider(), Arc::new(bl.signature().clone())).unwrap_err();
    assert!(err.is_domain_error() || matches!(err, Error::MissingTable(_)), "{err}");
}
