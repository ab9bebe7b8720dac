use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use clap::ValueEnum;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use coherator::coherators::{build_tower, is_pseudo_coherator_up_to, Bounds, ExtensionTower, Flavor, Strategy};
use coherator::extensions::{boundary_of, symbol_term, Term};
use coherator::models::{
    check_segal, connected_group_model, constant_model, group_model, is_weak_equivalence, one_point_model, pi0, pi_n,
    pull_back, FiniteGroup, Model, ModelMorphism, Witnesses,
};
use coherator::pasting::{dimension, enumerate_tables, hom_theta0, realization, realize};
use coherator::structural::{FreeProvider, LiftingProvider, StructuralCatalog, TowerProvider};
use coherator::wfs::{omega_layering, CellularPresentation};
use coherator::{Error, GSMorphism, Table};

use crate::op::OpSpec;
use crate::{CliError, Command, Global};

type Res<T> = std::result::Result<T, CliError>;

/// What a command prints: plain text, or JSON under `--json`.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output { text, json, passed: true }
    }

    fn dry(what: &str) -> Output {
        Output::ok(format!("dry run: {what} ok\n"), json!({ "dry_run": true, "valid": true, "checked": what }))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    Group,
    ConnectedGroup,
    Constant,
    Point,
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Parse(format!("{}: {e}", path.display()))))
}

fn write_json(path: &Path, value: &Value) -> Res<()> {
    let text = serde_json::to_string_pretty(value).expect("plain data") + "\n";
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn distinct(inputs: &[&Path], out: &Path) -> Res<()> {
    let same =
        |a: &Path| a == out || (a.exists() && out.exists() && fs::canonicalize(a).ok() == fs::canonicalize(out).ok());
    match inputs.iter().find(|a| same(a)) {
        Some(a) => Err(CliError::Usage(format!("output {} would overwrite an input", a.display()))),
        None => Ok(()),
    }
}

fn load_tower(path: &Path) -> Res<ExtensionTower> {
    Ok(ExtensionTower::from_json(&read_json(path)?)?)
}

fn load_model(path: &Path) -> Res<(Model, ExtensionTower)> {
    Ok(Model::from_json(&read_json(path)?)?)
}

fn group_by_name(name: &str) -> Res<FiniteGroup> {
    let lower = name.to_ascii_lowercase();
    if lower == "s3" {
        return Ok(FiniteGroup::symmetric3());
    }
    match lower.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
        Some(n) if n >= 1 => Ok(FiniteGroup::cyclic(n)),
        _ => Err(CliError::Usage(format!("unknown group `{name}`; expected zN or s3"))),
    }
}

/// `id_i`, `s^j_i`, `t^j_i` for a cell of a disk, else the s-expression.
fn show(t: &Term) -> String {
    if let Term::Glob { cod, cell } = t {
        if cod.is_disk() {
            return realization(cod).rep(*cell).1.to_string();
        }
    }
    t.to_string()
}

fn bounds(g: &Global, max_dim: usize, max_size: usize, levels: usize) -> Bounds {
    Bounds::new(g.max_dim.unwrap_or(max_dim), g.max_size.unwrap_or(max_size), g.levels.unwrap_or(levels))
}

/// Unit, inverse and composition witnesses taken from a model's own tower.
fn witnesses(tower: &ExtensionTower, trunc: usize, g: &Global) -> Res<Witnesses> {
    let search = g.max_size.unwrap_or(tower.bounds.max_term_size);
    let mut cat = StructuralCatalog::new(TowerProvider::new(tower, search, false));
    Ok(Witnesses::from_catalog(&mut cat, trunc)?)
}

pub fn run(g: &Global, cmd: Command) -> Res<Output> {
    match cmd {
        Command::EnumerateTables { max_len } => enumerate(g, max_len),
        Command::Hom { from, to } => hom(g, &from, &to),
        Command::Realize { table, trunc, out } => realize_table(g, &table, trunc, out.as_deref()),
        Command::BuildCoherator { flavor, strategy, max_len, out } => {
            build(g, flavor, strategy, max_len, out.as_deref())
        }
        Command::Derive { tower, flavor, op, extend, print_boundary } => {
            derive(g, tower.as_deref(), flavor, &op, extend, print_boundary)
        }
        Command::Eval { model, term, symbol, args, samples } => eval(g, &model, term, symbol, args, samples),
        Command::Pi { model, i, base } => pi(g, &model, i, base),
        Command::Weq { from, to, map } => weq(g, &from, &to, map.as_deref()),
        Command::CheckFibrant { tower } => check_fibrant(g, &tower),
        Command::Relayer { input, out } => relayer(g, &input, &out),
        Command::Lift { tower, model, out } => lift(g, &tower, &model, out.as_deref()),
        Command::MakeModel { kind, group, n, trunc, tower, out } => {
            make_model(g, kind, &group, n, trunc, tower.as_deref(), &out)
        }
        Command::CheckSegal { model } => segal(g, &model),
    }
}

fn enumerate(g: &Global, max_len: usize) -> Res<Output> {
    let max_dim = g.max_dim.unwrap_or(2);
    if g.dry_run {
        return Ok(Output::dry("bounds"));
    }
    let tables: Vec<String> = enumerate_tables(max_dim, max_len).iter().map(ToString::to_string).collect();
    let mut text = String::new();
    for t in &tables {
        writeln!(text, "{t}").unwrap();
    }
    writeln!(text, "{} tables with dim <= {max_dim} and length <= {max_len}", tables.len()).unwrap();
    Ok(Output::ok(text, json!({ "max_dim": max_dim, "max_len": max_len, "count": tables.len(), "tables": tables })))
}

fn hom(g: &Global, from: &Table, to: &Table) -> Res<Output> {
    if g.dry_run {
        return Ok(Output::dry("tables"));
    }
    let arrows = hom_theta0(from, to);
    let mut text = format!("{} morphisms {from} -> {to}\n", arrows.len());
    for (k, f) in arrows.iter().enumerate() {
        writeln!(text, "  #{k}: {}", serde_json::to_string(&f.maps).expect("plain data")).unwrap();
    }
    let json = json!({ "from": from.to_string(), "to": to.to_string(), "count": arrows.len(), "morphisms": arrows });
    Ok(Output::ok(text, json))
}

fn realize_table(g: &Global, table: &Table, trunc: Option<usize>, out: Option<&Path>) -> Res<Output> {
    let trunc = trunc.unwrap_or_else(|| dimension(table));
    if g.dry_run {
        return Ok(Output::dry("table"));
    }
    let set = realize(table, trunc)?;
    let counts: Vec<usize> = (0..=trunc).map(|d| set.count(d)).collect();
    let mut text = format!("{table} truncated at {trunc}: cells per dimension {counts:?}\n");
    if let Some(path) = out {
        write_json(path, &serde_json::to_value(&set).expect("plain data"))?;
        writeln!(text, "wrote {}", path.display()).unwrap();
    }
    Ok(Output::ok(text, json!({ "table": table.to_string(), "trunc": trunc, "counts": counts, "set": set })))
}

fn tower_summary(tower: &ExtensionTower) -> (String, Value) {
    let counts: Vec<usize> = tower.levels().iter().map(|l| l.symbols.len()).collect();
    let b = tower.bounds;
    let text = format!(
        "{:?} {:?} tower, max_dim {} max_size {} max_len {}: {} symbols, per level {:?}\n",
        tower.flavor,
        tower.strategy,
        b.max_dim,
        b.max_term_size,
        b.max_codomain_length,
        tower.signature().len(),
        counts
    );
    let json = json!({
        "flavor": tower.flavor,
        "strategy": tower.strategy,
        "bounds": b,
        "symbols": tower.signature().len(),
        "per_level": counts,
    });
    (text, json)
}

fn build(g: &Global, flavor: Flavor, strategy: Strategy, max_len: Option<usize>, out: Option<&Path>) -> Res<Output> {
    let mut b = bounds(g, 1, 4, 2);
    if let Some(len) = max_len {
        b = b.with_codomain_length(len);
    }
    if b.levels == 0 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    if g.dry_run {
        return Ok(Output::dry("bounds"));
    }
    let tower = build_tower(flavor, strategy, b);
    let (mut text, mut json) = tower_summary(&tower);
    if let Some(path) = out {
        write_json(path, &tower.to_json())?;
        writeln!(text, "wrote {}", path.display()).unwrap();
        json["out"] = json!(path.display().to_string());
    }
    Ok(Output::ok(text, json))
}

fn derive(
    g: &Global,
    tower: Option<&Path>,
    flavor: Flavor,
    op: &OpSpec,
    extend: bool,
    print_boundary: bool,
) -> Res<Output> {
    let tower = tower.map(load_tower).transpose()?;
    if g.dry_run {
        return Ok(Output::dry("operation and tower"));
    }
    let (pair, term, sig) = match &tower {
        Some(t) => {
            let search = g.max_size.unwrap_or(t.bounds.max_term_size);
            let mut cat = StructuralCatalog::new(TowerProvider::new(t, search, extend));
            let (p, h) = op.derive(&mut cat)?;
            (p, h, cat.into_provider().signature().clone())
        }
        None => {
            let mut cat = StructuralCatalog::new(FreeProvider::new(flavor));
            let (p, h) = op.derive(&mut cat)?;
            (p, h, cat.into_provider().signature().clone())
        }
    };
    let mut text = format!("{}: {term}\n", op.name);
    let mut json = json!({ "op": op.name, "params": op.params, "term": term.to_string(), "dim": term.dim(), "pair": pair.to_string() });
    if print_boundary {
        let (s, t) = boundary_of(&sig, &term)?;
        writeln!(text, "source: {}\ntarget: {}", show(&s), show(&t)).unwrap();
        json["source"] = json!(show(&s));
        json["target"] = json!(show(&t));
    }
    Ok(Output::ok(text, json))
}

fn eval(
    g: &Global,
    model: &Path,
    term: Option<String>,
    symbol: Option<u32>,
    args: Option<Vec<usize>>,
    samples: usize,
) -> Res<Output> {
    let (m, _) = load_model(model)?;
    let term: Term = match (term, symbol) {
        (Some(s), _) => s.parse()?,
        (None, Some(id)) => symbol_term(m.signature(), id)?,
        (None, None) => return Err(CliError::Usage("give --term or --symbol".into())),
    };
    if let Some(a) = &args {
        m.check_args(term.cod(), a)?;
    }
    if g.dry_run {
        return Ok(Output::dry("model and term"));
    }
    let tuples = match args {
        Some(a) => vec![a],
        None => {
            let mut all = m.product(term.cod())?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            all.shuffle(&mut rng);
            all.truncate(samples);
            all
        }
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for a in tuples {
        let cell = m.eval(&term, &a)?;
        let name = &m.carrier.cells[cell.dim][cell.index];
        writeln!(text, "{a:?} -> {}:{} ({name})", cell.dim, cell.index).unwrap();
        rows.push(json!({ "args": a, "dim": cell.dim, "index": cell.index, "name": name }));
    }
    Ok(Output::ok(text, json!({ "term": term.to_string(), "seed": g.seed, "values": rows })))
}

fn pi(g: &Global, model: &Path, i: usize, base: usize) -> Res<Output> {
    let (m, tower) = load_model(model)?;
    if base >= m.carrier.count(0) {
        return Err(Error::CellOutOfRange { dim: 0, index: base }.into());
    }
    if g.dry_run {
        return Ok(Output::dry("model"));
    }
    if i == 0 {
        let comps = pi0(&m)?;
        let mut text = format!("π_0: {} components\n", comps.len());
        for (k, c) in comps.iter().enumerate() {
            let names: Vec<&str> = c.iter().map(|&x| m.carrier.cells[0][x].as_str()).collect();
            writeln!(text, "  [{k}] {}", names.join(" ")).unwrap();
        }
        return Ok(Output::ok(text, json!({ "i": 0, "count": comps.len(), "components": comps })));
    }
    let w = witnesses(&tower, m.trunc, g)?;
    let table = pi_n(&m, &w, base, i)?;
    let names: Vec<&str> = table.cells.iter().map(|&c| m.carrier.cells[i][c].as_str()).collect();
    let mut text = format!("π_{i} at 0-cell {base} ({}): order {}\n", m.carrier.cells[0][base], table.order());
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1);
    writeln!(text, "{:>width$} | {}", "*", names.iter().map(|n| format!("{n:>width$}")).collect::<Vec<_>>().join(" "))
        .unwrap();
    for (a, row) in table.mul.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&b| format!("{:>width$}", names[b])).collect();
        writeln!(text, "{:>width$} | {}", names[a], cells.join(" ")).unwrap();
    }
    let json = json!({
        "i": i,
        "base": base,
        "order": table.order(),
        "names": names,
        "identity": table.identity,
        "table": table,
    });
    Ok(Output::ok(text, json))
}

fn weq(g: &Global, from: &Path, to: &Path, map: Option<&Path>) -> Res<Output> {
    let (a, tower) = load_model(from)?;
    let (b, _) = load_model(to)?;
    let f = match map {
        Some(p) => {
            let cells: GSMorphism =
                serde_json::from_value(read_json(p)?).map_err(|e| CliError::Core(Error::Parse(e.to_string())))?;
            ModelMorphism { cells }
        }
        None => ModelMorphism::identity(&a),
    };
    f.check(&a, &b)?;
    if g.dry_run {
        return Ok(Output::dry("models and map"));
    }
    let w = witnesses(&tower, a.trunc, g)?;
    let r = is_weak_equivalence(&f, &a, &b, &w)?;
    let mut text = format!("weak equivalence: {}\n", r.weak_equivalence);
    if let Some(reason) = &r.reason {
        writeln!(text, "reason: {reason}").unwrap();
    }
    writeln!(text, "note: {}", r.caveat).unwrap();
    Ok(Output { text, passed: r.weak_equivalence, json: serde_json::to_value(&r).expect("plain data") })
}

fn check_fibrant(g: &Global, path: &Path) -> Res<Output> {
    let tower = load_tower(path)?;
    let tb = tower.bounds;
    let b = Bounds::new(g.max_dim.unwrap_or(tb.max_dim), g.max_size.unwrap_or(tb.max_term_size), tb.levels)
        .with_codomain_length(tb.max_codomain_length);
    if g.dry_run {
        return Ok(Output::dry("tower"));
    }
    let r = is_pseudo_coherator_up_to(&tower, &b);
    let mut text = format!(
        "fibrant: {} ({} pairs from level {} checked against level {})\n",
        r.fibrant, r.checked, r.enumerated_at_level, r.top_level
    );
    for f in r.failures.iter().take(10) {
        writeln!(text, "  no lifting: {f}").unwrap();
    }
    if r.failures.len() > 10 {
        writeln!(text, "  ... {} more", r.failures.len() - 10).unwrap();
    }
    Ok(Output { text, passed: r.fibrant, json: serde_json::to_value(&r).expect("plain data") })
}

fn relayer(g: &Global, input: &Path, out: &Path) -> Res<Output> {
    distinct(&[input], out)?;
    let value = read_json(input)?;
    let pres = if value.get("layers").is_some() {
        CellularPresentation::from_json(&value)?
    } else {
        CellularPresentation::of_tower(&ExtensionTower::from_json(&value)?)
    };
    if g.dry_run {
        return Ok(Output::dry("presentation"));
    }
    let layered = omega_layering(&pres)?;
    let sizes: Vec<usize> = layered.layers.iter().map(Vec::len).collect();
    write_json(out, &layered.to_json())?;
    let text = format!("{} layers, sizes {sizes:?}; wrote {}\n", sizes.len(), out.display());
    Ok(Output::ok(text, json!({ "layers": sizes.len(), "sizes": sizes, "out": out.display().to_string() })))
}

fn lift(g: &Global, tower: &Path, model: &Path, out: Option<&Path>) -> Res<Output> {
    if let Some(o) = out {
        distinct(&[tower, model], o)?;
    }
    let target = load_tower(tower)?;
    let (m, own) = load_model(model)?;
    if g.dry_run {
        return Ok(Output::dry("tower and model"));
    }
    let search = g.max_size.unwrap_or(own.bounds.max_term_size);
    let sig = Arc::new(target.signature().clone());
    let pulled = pull_back(&m, TowerProvider::new(&own, search, false), sig)?;
    check_segal(&pulled)?;
    let mut text =
        format!("interpreted {} of {} symbols; Segal condition holds\n", pulled.ops.len(), target.signature().len());
    let mut json = json!({ "symbols": target.signature().len(), "interpreted": pulled.ops.len(), "segal": true });
    if let Some(path) = out {
        write_json(path, &pulled.to_json(&target))?;
        writeln!(text, "wrote {}", path.display()).unwrap();
        json["out"] = json!(path.display().to_string());
    }
    Ok(Output::ok(text, json))
}

fn make_model(
    g: &Global,
    kind: ModelKind,
    group: &str,
    n: usize,
    trunc: usize,
    tower: Option<&Path>,
    out: &Path,
) -> Res<Output> {
    if let Some(t) = tower {
        distinct(&[t], out)?;
    }
    let trunc = match kind {
        ModelKind::Group | ModelKind::ConnectedGroup => 2,
        _ => trunc,
    };
    let grp = group_by_name(group)?;
    let tower = match tower {
        Some(p) => Some(load_tower(p)?),
        None => None,
    };
    if g.dry_run {
        return Ok(Output::dry("model parameters"));
    }
    let tower = match tower {
        Some(t) => t,
        None => build_tower(Flavor::Groupoid, Strategy::Canonical, bounds(g, trunc, 4, 1)),
    };
    let sig = Arc::new(tower.signature().clone());
    let m = match kind {
        ModelKind::Group => group_model(&grp, sig)?,
        ModelKind::ConnectedGroup => connected_group_model(&grp, sig)?,
        ModelKind::Constant => constant_model(n, trunc, sig)?,
        ModelKind::Point => one_point_model(trunc, sig)?,
    };
    check_segal(&m)?;
    write_json(out, &m.to_json(&tower))?;
    let counts: Vec<usize> = (0..=m.trunc).map(|d| m.carrier.count(d)).collect();
    let text = format!(
        "{kind:?} model, truncation {}, cells per dimension {counts:?}, {} tables; wrote {}\n",
        m.trunc,
        m.ops.len(),
        out.display()
    );
    Ok(Output::ok(
        text,
        json!({ "trunc": m.trunc, "counts": counts, "tables": m.ops.len(), "out": out.display().to_string() }),
    ))
}

fn segal(g: &Global, model: &Path) -> Res<Output> {
    let (m, _) = load_model(model)?;
    if g.dry_run {
        return Ok(Output::dry("model"));
    }
    check_segal(&m)?;
    let per_dim: BTreeMap<usize, usize> = m.ops.keys().fold(BTreeMap::new(), |mut acc, &id| {
        if let Ok(s) = m.signature().get(id) {
            *acc.entry(s.out_dim()).or_insert(0) += 1;
        }
        acc
    });
    let text = format!("Segal condition holds for {} tables\n", m.ops.len());
    Ok(Output::ok(text, json!({ "segal": true, "tables": m.ops.len(), "tables_by_dim": per_dim })))
}
