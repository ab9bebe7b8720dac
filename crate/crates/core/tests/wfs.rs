use std::collections::BTreeSet;
use std::sync::Arc;

use coherator::coherators::{build_tower, Bounds, ExtensionTower, Flavor, Strategy};
use coherator::extensions::{make_parallel_pair, symbol_term, ParallelPair};
use coherator::models::{group_model, FiniteGroup};
use coherator::structural::{FreeProvider, LiftingProvider, StructuralCatalog, TowerProvider};
use coherator::wfs::{
    check_coherator_tower, lift_into, omega_layering, pushout_layer, same_tower, Attachment, CellularPresentation,
    SyntacticTarget,
};
use coherator::Table;

fn small(flavor: Flavor, strategy: Strategy) -> ExtensionTower {
    build_tower(flavor, strategy, Bounds::new(1, 4, 2))
}

/// Three layers: units and compositions, then pairs over them, then one more.
fn three_layer_presentation() -> CellularPresentation {
    CellularPresentation::of_tower(&build_tower(Flavor::Groupoid, Strategy::BataninLeinster, Bounds::new(1, 4, 3)))
}

#[test]
fn empty_layer_is_an_identity_step() {
    let mut tower = small(Flavor::Groupoid, Strategy::Canonical);
    let before = tower.signature().symbols().to_vec();
    let level = pushout_layer(&mut tower, &[]).unwrap();
    assert!(level.symbols.is_empty());
    assert_eq!(tower.signature().symbols(), before.as_slice());
}

#[test]
fn one_attachment_adds_one_symbol() {
    let mut cat = StructuralCatalog::new(FreeProvider::new(Flavor::Groupoid));
    let pair = cat.comp_pair(1, 1).unwrap();
    let mut tower = ExtensionTower::theta0(Flavor::Groupoid, Strategy::Canonical, Bounds::new(1, 4, 1));
    let level = pushout_layer(&mut tower, &[Attachment::new(pair.clone(), 7)]).unwrap();
    assert_eq!(level.symbols, vec![7]);
    let s = tower.signature().get(7).unwrap();
    assert_eq!((s.pair.clone(), s.out_dim()), (pair.clone(), 1));
    assert_eq!(Attachment::new(pair, 7).cofibration.table, "(1 1 | 0)".parse::<Table>().unwrap());
}

#[test]
fn a_layer_equals_sequential_single_pushouts() {
    let pres = CellularPresentation::of_tower(&small(Flavor::Groupoid, Strategy::Canonical));
    let layer = &pres.layers[0];
    let mut at_once = ExtensionTower::theta0(Flavor::Groupoid, Strategy::Canonical, Bounds::new(1, 4, 1));
    pushout_layer(&mut at_once, layer).unwrap();
    let mut one_by_one = ExtensionTower::theta0(Flavor::Groupoid, Strategy::Canonical, Bounds::new(1, 4, 1));
    for a in layer {
        pushout_layer(&mut one_by_one, std::slice::from_ref(a)).unwrap();
    }
    let pairs = |t: &ExtensionTower| -> BTreeSet<(u32, ParallelPair)> {
        t.signature().symbols().iter().map(|s| (s.id, s.pair.clone())).collect()
    };
    assert_eq!(pairs(&at_once), pairs(&one_by_one));
    assert_eq!(one_by_one.top_level(), layer.len());
}

#[test]
fn built_towers_are_cellular() {
    for flavor in [Flavor::Groupoid, Flavor::Category] {
        for strategy in [Strategy::Canonical, Strategy::BataninLeinster, Strategy::Reduced] {
            let tower = small(flavor, strategy);
            let rebuilt = CellularPresentation::of_tower(&tower).realize(flavor, strategy, tower.bounds).unwrap();
            assert!(same_tower(&rebuilt, &tower), "{flavor:?} {strategy:?}");
        }
    }
}

#[test]
fn coherator_check_on_a_built_tower() {
    let bounds = Bounds::new(1, 4, 2);
    let tower = build_tower(Flavor::Groupoid, Strategy::Canonical, bounds);
    let report = check_coherator_tower(&tower, &bounds);
    assert!(report.cellular && report.fibrant && report.by_construction && report.consistent, "{report:?}");
}

#[test]
fn coherator_check_on_theta0() {
    let bounds = Bounds::new(1, 4, 0);
    let tower = ExtensionTower::theta0(Flavor::Groupoid, Strategy::Canonical, bounds);
    let report = check_coherator_tower(&tower, &bounds);
    assert!(report.cellular);
    assert!(!report.fibrant);
    assert!(!report.by_construction);
}

#[test]
fn coherator_check_on_a_truncated_tower() {
    let bounds = Bounds::new(1, 4, 2);
    let tower = build_tower(Flavor::Groupoid, Strategy::Canonical, bounds);
    let cut = tower.truncate_last_level(3);
    let report = check_coherator_tower(&cut, &bounds);
    assert!(report.cellular);
    assert!(!report.fibrant);
    assert!(!report.fibrancy.failures.is_empty());
    assert!(!report.by_construction);
}

#[test]
fn tower_into_its_own_provider() {
    // without repeated pairs every symbol goes to itself
    let tower = small(Flavor::Groupoid, Strategy::BataninLeinster);
    let mut target = SyntacticTarget::new(TowerProvider::new(&tower, 0, false));
    let images = lift_into(tower.signature(), &mut target).unwrap();
    assert_eq!(images.len(), tower.signature().len());
    for (&id, t) in &images {
        assert_eq!(t, &symbol_term(tower.signature(), id).unwrap());
    }
    // the canonical tower repeats pairs; repeats go to the first lifting
    let tower = small(Flavor::Groupoid, Strategy::Canonical);
    let sig = tower.signature();
    let mut target = SyntacticTarget::new(TowerProvider::new(&tower, 0, false));
    let images = lift_into(sig, &mut target).unwrap();
    for s in sig.symbols() {
        let first = sig.liftings_of(&s.pair)[0];
        assert_eq!(images[&s.id], symbol_term(sig, first).unwrap());
    }
}

#[test]
fn category_tower_into_a_provider_without_inverses() {
    let tower = small(Flavor::Category, Strategy::Canonical);
    let mut target = SyntacticTarget::new(FreeProvider::new(Flavor::Category));
    let images = lift_into(tower.signature(), &mut target).unwrap();
    assert_eq!(images.len(), tower.signature().len());
    // the same provider refuses the inverse pair
    let inv = make_parallel_pair(
        target.provider.signature(),
        &coherator::extensions::globe_term(&coherator::GlobeMap::tau(1)),
        &coherator::extensions::globe_term(&coherator::GlobeMap::sigma(1)),
    )
    .unwrap();
    assert!(target.provider.lift(&inv).is_err());
}

#[test]
fn groupoid_tower_into_the_group_model() {
    let tower = build_tower(Flavor::Groupoid, Strategy::Canonical, Bounds::new(2, 4, 2));
    let sig = Arc::new(tower.signature().clone());
    let g = FiniteGroup::symmetric3();
    let direct = group_model(&g, Arc::clone(&sig)).unwrap();
    // every symbol with a table is evaluated by the model through its own term
    for s in sig.symbols() {
        if let Some(table) = direct.ops.get(&s.id) {
            let t = symbol_term(&sig, s.id).unwrap();
            for (args, &out) in table {
                assert_eq!(direct.eval(&t, args).unwrap().index, out);
            }
        }
    }
    assert!(!direct.ops.is_empty());
}

#[test]
fn interpretation_paths_commute() {
    let tower = build_tower(Flavor::Groupoid, Strategy::Canonical, Bounds::new(1, 4, 2));
    let mut target = SyntacticTarget::new(FreeProvider::new(Flavor::Groupoid));
    let images = lift_into(tower.signature(), &mut target).unwrap();
    let there = Arc::new(target.provider.signature().clone());
    let here = Arc::new(tower.signature().clone());
    let g = FiniteGroup::cyclic(3);
    let model_there = group_model(&g, there).unwrap();
    let model_here = group_model(&g, Arc::clone(&here)).unwrap();
    let mut compared = 0;
    for s in here.symbols() {
        let Some(table) = model_here.ops.get(&s.id) else {
            continue;
        };
        for (args, &out) in table {
            assert_eq!(model_there.eval(&images[&s.id], args).unwrap().index, out);
            compared += 1;
        }
    }
    assert!(compared > 0);
}

#[test]
fn layering_by_depth_is_a_fixed_point() {
    let pres = three_layer_presentation();
    assert_eq!(pres.layers.len(), 3);
    let once = omega_layering(&pres).unwrap();
    assert_eq!(omega_layering(&once).unwrap(), once);
    assert_eq!(once.attachment_set(), pres.attachment_set());
}

#[test]
fn late_attachment_moves_to_its_earliest_layer() {
    let pres = three_layer_presentation();
    let first = &pres.layers[0];
    // a pair of globular sums only, placed late
    let late = first[0].clone();
    let mut layers = vec![first[1..].to_vec(), vec![late.clone()]];
    layers[1].extend(
        pres.layers[1]
            .iter()
            .filter(|a| {
                let mut used = Vec::new();
                a.pair.f().symbols(&mut used);
                a.pair.g().symbols(&mut used);
                !used.contains(&late.id)
            })
            .cloned(),
    );
    let interleaved = CellularPresentation { layers };
    interleaved.validate().unwrap();
    let fixed = omega_layering(&interleaved).unwrap();
    assert!(fixed.layers[0].iter().any(|a| a.id == late.id));
    assert_eq!(fixed.attachment_set(), interleaved.attachment_set());
    // dependency depth: layer n needs something from layer n - 1
    for (n, layer) in fixed.layers.iter().enumerate().skip(1) {
        let prev: BTreeSet<u32> = fixed.layers[n - 1].iter().map(|a| a.id).collect();
        for a in layer {
            let mut used = Vec::new();
            a.pair.f().symbols(&mut used);
            a.pair.g().symbols(&mut used);
            assert!(used.iter().any(|u| prev.contains(u)), "h#{} could move down", a.id);
        }
    }
}

#[test]
fn layering_round_trip_through_pushouts() {
    let pres = three_layer_presentation();
    let layered = omega_layering(&pres).unwrap();
    let bounds = Bounds::new(1, 4, 3);
    let a = pres.realize(Flavor::Groupoid, Strategy::BataninLeinster, bounds).unwrap();
    let b = layered.realize(Flavor::Groupoid, Strategy::BataninLeinster, bounds).unwrap();
    let pairs = |t: &ExtensionTower| -> BTreeSet<(u32, ParallelPair, usize)> {
        t.signature().symbols().iter().map(|s| (s.id, s.pair.clone(), s.out_dim())).collect()
    };
    assert_eq!(pairs(&a), pairs(&b));
    assert_eq!(omega_layering(&CellularPresentation::of_tower(&b)).unwrap(), layered);
}

#[test]
fn presentation_json_round_trip() {
    let pres = three_layer_presentation();
    let text = serde_json::to_string(&pres.to_json()).unwrap();
    let back = CellularPresentation::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, pres);
}

#[test]
fn out_of_order_presentations_are_rejected() {
    let pres = three_layer_presentation();
    let mut layers = pres.layers.clone();
    layers.swap(0, 1);
    assert!(CellularPresentation { layers }.validate().is_err());
    let dup = CellularPresentation { layers: vec![pres.layers[0].clone(), pres.layers[0].clone()] };
    assert!(dup.validate().is_err());
}
