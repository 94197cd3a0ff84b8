//! One function per subcommand, each producing a report draft.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use helly_core::crystal::{affine_linf_action, cubical_tiling_action, point_group, CrystalSpec};
use helly_core::exactcore::rational::format_rational;
use helly_core::extension::{example_inputs, pushout_extension, verify_ses_morphism, PushoutInput};
use helly_core::hellygraph::{
    builtin_graph, cayley_graph, grid_box_helly, is_helly, is_helly_unpruned, scaled_helly_check,
    FiniteGraph, GraphVerdict, HellyGraphError, HellySearchConfig, ScaledHellyInput,
};
use helly_core::hyperoct::{decide_helly, hyperoctahedral_orders, HellyDecision, SearchConfig};
use helly_core::nilpotent::{
    associated_graded, is_nilpotent, lower_central_series, random_suite, trivial_bracket_transfer,
    LieAlgebra,
};
use helly_core::stablenorm::{
    directional_limit, orbit_metric, polytope_invariance, rough_equivalence_probe,
    stable_norm_polytope, WordMetricSpec,
};

use crate::error::{CliError, EXIT_NOT_HELLY, EXIT_OK};
use crate::report::{digest, read_file, to_value, Draft};

/// Limits and seeds shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Settings {
    pub max_group_size: usize,
    pub max_dim: usize,
    pub max_generators: usize,
    pub bfs_budget: usize,
    pub workers: usize,
    pub seed: u64,
}

impl Settings {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            max_dim: self.max_dim,
            max_generators: self.max_generators,
            workers: self.workers,
            seed: self.seed,
        }
    }
}

pub struct Loaded<T> {
    pub value: T,
    pub text: String,
}

pub fn load_crystal(path: &Path) -> Result<Loaded<CrystalSpec>, CliError> {
    let text = read_file(path)?;
    let value = CrystalSpec::from_json(&text)?;
    value.validate()?;
    Ok(Loaded { value, text })
}

fn load_metric(path: &Path) -> Result<Loaded<WordMetricSpec>, CliError> {
    let text = read_file(path)?;
    let value = WordMetricSpec::from_json(&text)?;
    Ok(Loaded { value, text })
}

fn json_of(text: &str) -> Result<Value, CliError> {
    Ok(serde_json::from_str(text)?)
}

/// The decision pipeline on a parsed spec, shared with `verify`.
pub struct DecideOutcome {
    pub decision: HellyDecision,
    pub result: Value,
}

pub fn run_decide(spec: &CrystalSpec, settings: &Settings) -> Result<DecideOutcome, CliError> {
    let pg = point_group(spec, settings.max_group_size)?;
    let group = pg.group();
    let bn_orders = hyperoctahedral_orders(spec.dim, settings.max_dim)?;
    let decision = decide_helly(group, &settings.search_config())?;
    let mut result = json!({
        "crystal": spec.name,
        "dim": spec.dim,
        "point_group": {
            "order": group.len(),
            "element_orders": group.element_orders(),
            "order_set": group.order_set(),
        },
        "hyperoctahedral_orders": bn_orders,
        "decision": to_value(&decision),
    });
    if let Some(cert) = decision.certificate() {
        let action = affine_linf_action(spec, cert)?;
        result["affine_linf_action"] = to_value(&action);
        result["tiling_action"] = match cubical_tiling_action(&action) {
            Ok(t) => to_value(&t),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    Ok(DecideOutcome {
        decision,
        result,
    })
}

fn search_parameters(settings: &Settings) -> Value {
    json!({
        "max_group_size": settings.max_group_size,
        "max_dim": settings.max_dim,
        "max_generators": settings.max_generators,
        "seed": settings.seed,
    })
}

pub fn decide(path: &Path, settings: &Settings) -> Result<Draft, CliError> {
    let spec = load_crystal(path)?;
    let outcome = run_decide(&spec.value, settings)?;
    Ok(Draft {
        command: "decide",
        digest: digest(&[spec.text.as_bytes()]),
        parameters: search_parameters(settings),
        input: json_of(&spec.text)?,
        exit: if outcome.decision.is_helly() { EXIT_OK } else { EXIT_NOT_HELLY },
        result: outcome.result,
    })
}

pub struct StableNormArgs {
    pub metric: Option<PathBuf>,
    pub orbit: Option<PathBuf>,
    pub point_group: Option<PathBuf>,
    pub compare: Option<PathBuf>,
    pub directions: Vec<Vec<i64>>,
    pub k_max: u64,
    pub radius: u32,
    pub csv: Option<PathBuf>,
}

pub fn parse_directions(raw: &[String]) -> Result<Vec<Vec<i64>>, CliError> {
    raw.iter()
        .flat_map(|s| s.split(';'))
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::input(format!("bad direction '{s}': {e}")))
        })
        .collect()
}

pub fn stablenorm(args: &StableNormArgs, settings: &Settings) -> Result<Draft, CliError> {
    let mut parts: Vec<String> = Vec::new();
    let mut input = json!({});
    let orbit_crystal = args.orbit.as_deref().map(load_crystal).transpose()?;
    let (spec, group) = match (&args.metric, &orbit_crystal) {
        (Some(path), None) => {
            let m = load_metric(path)?;
            input["metric"] = json_of(&m.text)?;
            parts.push(m.text);
            (m.value, None)
        }
        (None, Some(c)) => {
            let pg = point_group(&c.value, settings.max_group_size)?;
            let seeds: Vec<Vec<i64>> = (0..c.value.dim)
                .map(|i| (0..c.value.dim).map(|k| i64::from(k == i)).collect())
                .collect();
            let spec = orbit_metric(pg.group(), &seeds)?;
            input["orbit_of"] = json_of(&c.text)?;
            input["metric"] = json_of(&spec.to_json())?;
            parts.push(c.text.clone());
            (spec, Some(pg.group().clone()))
        }
        _ => return Err(CliError::input("give exactly one of a metric file or --orbit CRYSTAL")),
    };
    let group = match &args.point_group {
        Some(path) => {
            let c = load_crystal(path)?;
            input["point_group_of"] = json_of(&c.text)?;
            parts.push(c.text.clone());
            Some(point_group(&c.value, settings.max_group_size)?.group().clone())
        }
        None => group,
    };
    let dim = spec.dim();
    let directions = if args.directions.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|k| i64::from(k == i)).collect())
            .collect()
    } else {
        args.directions.clone()
    };
    let polytope = match &spec {
        WordMetricSpec::Abelian { .. } => Some(stable_norm_polytope(&spec)?),
        WordMetricSpec::PulledBack { .. } => None,
    };
    let mut estimates = Vec::new();
    let mut csv = String::from("direction,k,distance\n");
    for z in &directions {
        let est = directional_limit(&spec, z, args.k_max, settings.bfs_budget)?;
        let label: Vec<String> = z.iter().map(i64::to_string).collect();
        for (k, d) in &est.samples {
            csv.push_str(&format!("\"{}\",{k},{d}\n", label.join(",")));
        }
        let mut entry = to_value(&est);
        entry["width"] = json!(format_rational(&est.width()));
        if let Some(poly) = &polytope {
            let norm = poly.norm_int(z);
            entry["stable_norm"] = json!(format_rational(&norm));
            entry["bracket_contains_norm"] = json!(est.contains(&norm));
        }
        estimates.push(entry);
    }
    let mut result = json!({
        "kind": match spec { WordMetricSpec::Abelian { .. } => "abelian", WordMetricSpec::PulledBack { .. } => "pulled_back" },
        "dim": dim,
        "k_max": args.k_max,
        "directions": estimates,
        "polytope": polytope.as_ref().map(to_value),
    });
    if let Some(g) = &group {
        let poly = polytope
            .as_ref()
            .ok_or_else(|| CliError::input("point-group invariance needs an abelian metric"))?;
        result["invariance"] = to_value(&polytope_invariance(poly, g));
    }
    if let Some(path) = &args.compare {
        let other = load_metric(path)?;
        input["compare"] = json_of(&other.text)?;
        parts.push(other.text.clone());
        let probe = rough_equivalence_probe(&spec, &other.value, args.radius, settings.bfs_budget)?;
        result["rough_probe"] = to_value(&probe);
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    let byte_parts: Vec<&[u8]> = parts.iter().map(|p| p.as_bytes()).collect();
    Ok(Draft {
        command: "stablenorm",
        digest: digest(&byte_parts),
        parameters: json!({
            "k_max": args.k_max,
            "directions": directions,
            "radius": args.compare.as_ref().map(|_| args.radius),
            "bfs_budget": settings.bfs_budget,
            "max_group_size": settings.max_group_size,
        }),
        input,
        result,
        exit: EXIT_OK,
    })
}

pub enum GraphSource {
    File(PathBuf),
    Builtin(String),
    Cayley { spec: PathBuf, radius: u32 },
    Grid { dim: usize, side: usize },
}

pub struct GraphArgs {
    pub source: GraphSource,
    pub vertex_cap: usize,
    pub unpruned: bool,
}

fn verdict_exit(v: &GraphVerdict) -> u8 {
    if v.is_helly() {
        EXIT_OK
    } else {
        EXIT_NOT_HELLY
    }
}

fn graph_summary(g: &FiniteGraph) -> Value {
    json!({
        "vertex_count": g.vertex_count(),
        "edge_count": g.edge_count(),
        "connected": g.is_connected(),
        "diameter": g.is_connected().then(|| g.diameter()),
    })
}

pub fn helly_graph(args: &GraphArgs, settings: &Settings) -> Result<Draft, CliError> {
    let config = HellySearchConfig {
        vertex_cap: args.vertex_cap,
        workers: settings.workers,
    };
    let search = |g: &FiniteGraph| -> Result<GraphVerdict, HellyGraphError> {
        if args.unpruned {
            is_helly_unpruned(g, args.vertex_cap)
        } else {
            is_helly(g, &config)
        }
    };
    let parameters = json!({
        "vertex_cap": args.vertex_cap,
        "unpruned": args.unpruned,
        "bfs_budget": settings.bfs_budget,
    });
    let draft = |digest: String, input: Value, result: Value, exit: u8| Draft {
        command: "helly-graph",
        digest,
        parameters: parameters.clone(),
        input,
        result,
        exit,
    };
    match &args.source {
        GraphSource::File(path) => {
            let text = read_file(path)?;
            let g: FiniteGraph = serde_json::from_str(&text)?;
            let verdict = search(&g)?;
            let mut result = graph_summary(&g);
            result["verdict"] = to_value(&verdict);
            Ok(draft(
                digest(&[text.as_bytes()]),
                json!({ "graph": to_value(&g) }),
                result,
                verdict_exit(&verdict),
            ))
        }
        GraphSource::Builtin(name) => {
            let g = builtin_graph(name)?;
            let verdict = search(&g)?;
            let mut result = graph_summary(&g);
            result["verdict"] = to_value(&verdict);
            Ok(draft(
                digest(&[b"builtin", name.as_bytes()]),
                json!({ "builtin": name, "graph": to_value(&g) }),
                result,
                verdict_exit(&verdict),
            ))
        }
        GraphSource::Cayley { spec, radius } => {
            let m = load_metric(spec)?;
            let ball = cayley_graph(&m.value, *radius, settings.bfs_budget)?;
            let verdict = search(&ball.graph)?;
            let mut result = graph_summary(&ball.graph);
            result["verdict"] = to_value(&verdict);
            result["cayley_ball"] = json!({
                "radius": ball.radius,
                "word_length": ball.word_length,
                "interior": ball.interior,
                "boundary_caveat": ball.boundary_caveat,
            });
            Ok(draft(
                digest(&[m.text.as_bytes(), &radius.to_le_bytes()]),
                json!({ "metric": json_of(&m.text)?, "radius": radius, "graph": to_value(&ball.graph) }),
                result,
                verdict_exit(&verdict),
            ))
        }
        GraphSource::Grid { dim, side } => {
            let cap = args.vertex_cap.max(helly_core::hellygraph::DEFAULT_GRID_CAP);
            let report = grid_box_helly(*dim, *side, cap)?;
            let verdict = if report.helly { "Helly" } else { "Undetermined" };
            let result = json!({ "grid": to_value(&report), "verdict": { "verdict": verdict } });
            Ok(draft(
                digest(&[b"grid", &(*dim as u64).to_le_bytes(), &(*side as u64).to_le_bytes()]),
                json!({ "grid": { "dim": dim, "side": side } }),
                result,
                if report.helly { EXIT_OK } else { EXIT_NOT_HELLY },
            ))
        }
    }
}

pub fn scaled_helly(
    path: &Path,
    d: Option<u64>,
    j: Option<u64>,
    _settings: &Settings,
) -> Result<Draft, CliError> {
    let text = read_file(path)?;
    let mut input = ScaledHellyInput::from_json(&text)?;
    if let Some(d) = d {
        input.d = d;
    }
    if let Some(j) = j {
        input.j = j;
    }
    let inst = input.instantiate()?;
    let mut result = json!({
        "vertex_count": inst.base.vertex_count(),
        "scaled_radii": inst.scaled_radii(),
        "slack": format_rational(&inst.slack()),
    });
    let exit = match scaled_helly_check(&inst) {
        Ok(sol) => {
            result["outcome"] = json!("solution");
            result["solution"] = to_value(&sol);
            EXIT_OK
        }
        Err(HellyGraphError::NoSolution) => {
            result["outcome"] = json!("no_solution");
            result["solution"] = Value::Null;
            EXIT_NOT_HELLY
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Draft {
        command: "scaled-helly",
        digest: digest(&[text.as_bytes()]),
        parameters: json!({ "d": input.d, "j": input.j }),
        input: to_value(&input),
        result,
        exit,
    })
}

pub fn pushout(path: Option<&Path>, example: Option<&str>) -> Result<Draft, CliError> {
    let (input, digest_parts): (PushoutInput, String) = match (path, example) {
        (Some(p), None) => {
            let text = read_file(p)?;
            (PushoutInput::from_json(&text)?, text)
        }
        (None, Some(name)) => {
            let input = example_inputs()
                .into_iter()
                .find(|(n, _)| *n == name)
                .map(|(_, i)| i)
                .ok_or_else(|| CliError::input(format!("unknown example '{name}'")))?;
            let text = input.to_json();
            (input, text)
        }
        _ => return Err(CliError::input("give exactly one of an input file or --example NAME")),
    };
    let ext = pushout_extension(&input)?;
    let ses = verify_ses_morphism(&ext.morphism(&input));
    let expected = input.m.order() * input.g.order() / input.n.len();
    let result = json!({
        "order_g_phi": ext.g_phi.order(),
        "order_formula": { "m": input.m.order(), "g": input.g.order(), "n": input.n.len(), "value": expected },
        "order_matches": ext.g_phi.order() == expected,
        "extension": to_value(&ext),
        "diagram": to_value(&ses),
    });
    let exit = if ses.holds {
        EXIT_OK
    } else {
        crate::error::EXIT_FAILURE
    };
    Ok(Draft {
        command: "pushout",
        digest: digest(&[digest_parts.as_bytes()]),
        parameters: json!({ "example": example }),
        input: to_value(&input),
        result,
        exit,
    })
}

pub struct LieArgs {
    pub input: Option<PathBuf>,
    pub random: Option<usize>,
    pub max_dim: usize,
    pub max_class: usize,
}

fn lie_result(g: &LieAlgebra) -> Result<Value, CliError> {
    let series = lower_central_series(g);
    let nilpotency = is_nilpotent(g);
    let mut result = json!({
        "dim": g.dim(),
        "jacobi_zero": g.jacobi_holds(),
        "lower_central_series": series.dims,
        "nilpotency": to_value(&nilpotency),
        "graded": Value::Null,
    });
    if nilpotency.nilpotent {
        let graded = associated_graded(g)?;
        result["graded"] = to_value(&graded);
        result["graded_bracket_nonzero"] = json!(!graded.algebra.is_abelian());
        result["trivial_bracket"] = to_value(&trivial_bracket_transfer(g)?);
    }
    Ok(result)
}

pub fn lie(args: &LieArgs, settings: &Settings) -> Result<Draft, CliError> {
    use rand_chacha::rand_core::SeedableRng;
    match (&args.input, args.random) {
        (Some(path), None) => {
            let text = read_file(path)?;
            let g = LieAlgebra::from_json(&text)?;
            Ok(Draft {
                command: "lie",
                digest: digest(&[text.as_bytes()]),
                parameters: json!({}),
                input: to_value(&g),
                result: lie_result(&g)?,
                exit: EXIT_OK,
            })
        }
        (None, Some(samples)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(settings.seed);
            let summary = random_suite(&mut rng, samples, args.max_dim, args.max_class);
            Ok(Draft {
                command: "lie",
                digest: digest(&[b"random", &settings.seed.to_le_bytes()]),
                parameters: json!({
                    "random": samples,
                    "seed": settings.seed,
                    "max_dim": args.max_dim,
                    "max_class": args.max_class,
                }),
                input: Value::Null,
                exit: if summary.clean() { EXIT_OK } else { crate::error::EXIT_FAILURE },
                result: json!({ "clean": summary.clean(), "summary": to_value(&summary) }),
            })
        }
        _ => Err(CliError::input("give exactly one of an input file or --random N")),
    }
}
