use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coherators::{is_pseudo_coherator_up_to, Bounds, ExtensionTower, FibrancyReport, Flavor, Strategy};
use crate::error::{Error, Result};
use crate::extensions::{make_parallel_pair, ExtensionLevel, ParallelPair, Signature, SymbolId, Term};
use crate::globes::Dim;
use crate::pasting::Table;

/// The generating arrow `S(T, i) -> B(T, i)`: `S(T, i)` is `Θ₀` with two
/// parallel arrows `D_i -> T` adjoined, `B(T, i)` adds a lifting of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenCofibration {
    pub table: Table,
    pub dim: Dim,
}

impl GenCofibration {
    pub fn of_pair(p: &ParallelPair) -> GenCofibration {
        GenCofibration { table: p.cod().clone(), dim: p.dim() }
    }
}

/// One pushout of a generating arrow: the pair the formal arrows are sent to
/// and the name of the resulting lifting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub cofibration: GenCofibration,
    pub pair: ParallelPair,
    pub id: SymbolId,
}

impl Attachment {
    pub fn new(pair: ParallelPair, id: SymbolId) -> Attachment {
        Attachment { cofibration: GenCofibration::of_pair(&pair), pair, id }
    }

    fn uses(&self) -> Vec<SymbolId> {
        let mut used = Vec::new();
        self.pair.f().symbols(&mut used);
        self.pair.g().symbols(&mut used);
        used.sort_unstable();
        used.dedup();
        used
    }
}

/// Layers of attachments; layer `n` becomes level `n + 1` of a tower.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellularPresentation {
    pub layers: Vec<Vec<Attachment>>,
}

impl CellularPresentation {
    /// The presentation a tower is built from, one layer per level.
    pub fn of_tower(tower: &ExtensionTower) -> CellularPresentation {
        let sig = tower.signature();
        let layers = tower.levels()[1..]
            .iter()
            .map(|level| {
                level
                    .symbols
                    .iter()
                    .map(|&id| Attachment::new(sig.get(id).expect("own symbol").pair.clone(), id))
                    .collect()
            })
            .collect();
        CellularPresentation { layers }
    }

    /// Checks that every attachment only mentions symbols of earlier layers
    /// and that names are unique.
    pub fn validate(&self) -> Result<()> {
        let mut known: BTreeSet<SymbolId> = BTreeSet::new();
        for (n, layer) in self.layers.iter().enumerate() {
            for a in layer {
                if a.cofibration != GenCofibration::of_pair(&a.pair) {
                    return Err(Error::Invalid(format!("h#{} attaches along the wrong generating arrow", a.id)));
                }
                if let Some(u) = a.uses().into_iter().find(|u| !known.contains(u)) {
                    return Err(Error::Invalid(format!("h#{} in layer {n} uses h#{u} from no earlier layer", a.id)));
                }
            }
            for a in layer {
                if !known.insert(a.id) {
                    return Err(Error::Invalid(format!("h#{} is attached twice", a.id)));
                }
            }
        }
        Ok(())
    }

    /// Every attachment as `(id, pair, output dimension)`.
    pub fn attachment_set(&self) -> BTreeSet<(SymbolId, ParallelPair, Dim)> {
        self.layers.iter().flatten().map(|a| (a.id, a.pair.clone(), a.pair.dim() + 1)).collect()
    }

    /// Sequential pushouts on top of `Θ₀`.
    pub fn realize(&self, flavor: Flavor, strategy: Strategy, bounds: Bounds) -> Result<ExtensionTower> {
        self.validate()?;
        let mut tower = ExtensionTower::theta0(flavor, strategy, bounds);
        for layer in &self.layers {
            pushout_layer(&mut tower, layer)?;
        }
        Ok(tower)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let layers: Vec<Vec<AttachmentJson>> = self
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|a| AttachmentJson {
                        table: a.cofibration.table.clone(),
                        dim: a.cofibration.dim,
                        id: a.id,
                        f: a.pair.f().to_string(),
                        g: a.pair.g().to_string(),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "layers": layers })
    }

    /// Parses and revalidates a presentation, layer by layer.
    pub fn from_json(value: &serde_json::Value) -> Result<CellularPresentation> {
        let raw: PresentationJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut sig = Signature::new();
        let mut layers = Vec::new();
        for (n, layer) in raw.layers.into_iter().enumerate() {
            let mut out = Vec::new();
            for a in layer {
                let f: Term = a.f.parse()?;
                let g: Term = a.g.parse()?;
                let pair = make_parallel_pair(&sig, &f, &g)?;
                let att = Attachment::new(pair, a.id);
                if att.cofibration != (GenCofibration { table: a.table, dim: a.dim }) {
                    return Err(Error::Parse(format!(
                        "h#{} declares a generating arrow that does not match its pair",
                        a.id
                    )));
                }
                out.push(att);
            }
            for a in &out {
                sig.add_symbol(n + 1, a.pair.clone(), Some(a.id))?;
            }
            layers.push(out);
        }
        let pres = CellularPresentation { layers };
        pres.validate()?;
        Ok(pres)
    }
}

#[derive(Serialize, Deserialize)]
struct AttachmentJson {
    table: Table,
    dim: Dim,
    id: SymbolId,
    f: String,
    g: String,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    layers: Vec<Vec<AttachmentJson>>,
}

/// The pushout of `⨿ S(T_k, i_k) -> ⨿ B(T_k, i_k)` along the attaching pairs:
/// a new level with one lifting per attachment. An empty layer adds an empty
/// level and leaves the signature unchanged.
pub fn pushout_layer(tower: &mut ExtensionTower, layer: &[Attachment]) -> Result<ExtensionLevel> {
    for a in layer {
        if a.cofibration != GenCofibration::of_pair(&a.pair) {
            return Err(Error::Invalid(format!("h#{} attaches along the wrong generating arrow", a.id)));
        }
    }
    let pairs: Vec<(SymbolId, ParallelPair)> = layer.iter().map(|a| (a.id, a.pair.clone())).collect();
    tower.push_level_with_ids(&pairs).cloned()
}

/// Moves every attachment to the earliest layer its dependencies allow:
/// one past the latest layer of a symbol it mentions. Attachments keep
/// their names and their relative order.
pub fn omega_layering(pres: &CellularPresentation) -> Result<CellularPresentation> {
    pres.validate()?;
    let mut layer_of: BTreeMap<SymbolId, usize> = BTreeMap::new();
    let mut layers: Vec<Vec<Attachment>> = Vec::new();
    for a in pres.layers.iter().flatten() {
        let n = a.uses().iter().map(|u| layer_of[u] + 1).max().unwrap_or(0);
        layer_of.insert(a.id, n);
        if layers.len() <= n {
            layers.resize(n + 1, Vec::new());
        }
        layers[n].push(a.clone());
    }
    Ok(CellularPresentation { layers })
}

/// Bounded consistency check of "fibrant and cellular iff coherator".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoheratorReport {
    /// The tower's own presentation rebuilds it exactly.
    pub cellular: bool,
    pub fibrant: bool,
    pub fibrancy: FibrancyReport,
    /// Built by one of the coherator strategies at bounds covering the check.
    pub by_construction: bool,
    /// `by_construction` implies `cellular && fibrant`.
    pub consistent: bool,
}

/// Same symbols, levels and pairs.
pub fn same_tower(a: &ExtensionTower, b: &ExtensionTower) -> bool {
    a.levels() == b.levels() && a.signature().symbols() == b.signature().symbols()
}

pub fn check_coherator_tower(tower: &ExtensionTower, bounds: &Bounds) -> CoheratorReport {
    let pres = CellularPresentation::of_tower(tower);
    let cellular = pres
        .realize(tower.flavor, tower.strategy, tower.bounds)
        .map(|rebuilt| same_tower(&rebuilt, tower))
        .unwrap_or(false);
    let fibrancy = is_pseudo_coherator_up_to(tower, bounds);
    let fibrant = fibrancy.fibrant;
    let tb = tower.bounds;
    let by_construction = tower.top_level() >= 1
        && tower.top_level() == tb.levels
        && tb.max_dim >= bounds.max_dim
        && tb.max_term_size >= bounds.max_term_size
        && tb.max_codomain_length >= bounds.max_codomain_length
        && is_complete(tower);
    CoheratorReport {
        cellular,
        fibrant,
        fibrancy,
        by_construction,
        consistent: !by_construction || (cellular && fibrant),
    }
}

/// Whether every level holds exactly what the tower's strategy would adjoin.
fn is_complete(tower: &ExtensionTower) -> bool {
    let rebuilt = crate::coherators::build_tower(tower.flavor, tower.strategy, tower.bounds);
    same_tower(&rebuilt, tower)
}
