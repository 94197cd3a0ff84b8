//! Re-checks the certificates inside a saved report.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use helly_core::crystal::{affine_linf_action, cubical_tiling_action, CrystalSpec};
use helly_core::exactcore::rational::{format_rational, Rational};
use helly_core::extension::{verify_ses_morphism, FiniteGroupTable, PushoutInput, SesMorphism};
use helly_core::hellygraph::{
    grid_box_helly, is_helly, verify_counterexample, FiniteGraph, GraphVerdict, HellySearchConfig,
    ScaledHellyInput, DEFAULT_GRID_CAP,
};
use helly_core::hyperoct::{ConjugacyCertificate, ObstructionWitness};

use crate::commands::{run_decide, Settings};
use crate::error::{CliError, EXIT_OK};
use crate::report::{digest, read_file, Draft, RunReport};

fn field<T: DeserializeOwned>(v: &Value, path: &str) -> Result<T, CliError> {
    let node = path
        .split('.')
        .try_fold(v, |node, key| node.get(key))
        .ok_or_else(|| CliError::Verify(format!("report has no '{path}'")))?;
    serde_json::from_value(node.clone())
        .map_err(|e| CliError::Verify(format!("'{path}' is malformed: {e}")))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Verify(msg.into()))
    }
}

fn verify_decide(report: &RunReport, settings: &Settings) -> Result<Vec<String>, CliError> {
    let spec: CrystalSpec = serde_json::from_value(report.input.clone())?;
    spec.validate()?;
    let r = &report.result;
    let mut checks = Vec::new();
    // the group itself is recomputed from the embedded input; φ and homs come from the report
    let pg = helly_core::crystal::point_group(&spec, settings.max_group_size)?;
    let group = pg.group();
    ensure(
        field::<usize>(r, "point_group.order")? == group.len(),
        "point group order differs",
    )?;
    checks.push(format!("point group recomputed, order {}", group.len()));
    let verdict: String = field(r, "decision.verdict")?;
    match verdict.as_str() {
        "Helly" => {
            let cert: ConjugacyCertificate = field(r, "decision.certificate")?;
            cert.verify(group)
                .map_err(|e| CliError::Verify(e.to_string()))?;
            checks.push("φ conjugates every element into Bₙ; hom is an injective homomorphism".into());
            let action = affine_linf_action(&spec, &cert)?;
            ensure(
                serde_json::to_value(&action)? == r["affine_linf_action"],
                "affine ℓ∞ action does not match φ",
            )?;
            checks.push("affine ℓ∞ action matches φ".into());
            if r["tiling_action"].get("error").is_none() {
                let tiling = cubical_tiling_action(&action)?;
                ensure(
                    serde_json::to_value(&tiling)? == r["tiling_action"],
                    "tiling action does not match",
                )?;
                ensure(tiling.preserves_lattice_box(2), "tiling action leaves Zⁿ")?;
                checks.push("tiling action preserves Zⁿ".into());
            }
        }
        "NotHelly" => {
            let obstruction: ObstructionWitness = field(r, "decision.obstruction")?;
            match obstruction {
                ObstructionWitness::OrderObstruction {
                    element,
                    order,
                    hyperoctahedral_orders,
                } => {
                    ensure(element < group.len(), "obstruction element out of range")?;
                    ensure(group.order_of(element) == order, "element order differs")?;
                    let bn = helly_core::hyperoct::hyperoctahedral_orders(spec.dim, settings.max_dim)?;
                    ensure(bn == hyperoctahedral_orders, "Bₙ order list differs")?;
                    ensure(!bn.contains(&order), "Bₙ has an element of that order")?;
                    checks.push(format!("element {element} has order {order}, absent from Bₙ"));
                }
                ObstructionWitness::CharacterObstruction { .. } => {
                    let again = run_decide(&spec, settings)?;
                    ensure(
                        again.result["decision"] == r["decision"],
                        "re-running the search gives a different decision",
                    )?;
                    checks.push("exhaustive character search re-run".into());
                }
            }
        }
        other => return Err(CliError::Verify(format!("unknown verdict '{other}'"))),
    }
    Ok(checks)
}

fn verify_graph(report: &RunReport, settings: &Settings) -> Result<Vec<String>, CliError> {
    let r = &report.result;
    if let Some(grid) = report.input.get("grid") {
        let dim: usize = field(grid, "dim")?;
        let side: usize = field(grid, "side")?;
        let again = grid_box_helly(dim, side, DEFAULT_GRID_CAP.max((side + 1).pow(dim as u32)))?;
        ensure(serde_json::to_value(&again)? == r["grid"], "grid report differs")?;
        return Ok(vec![format!("grid box {dim}x{side} re-checked")]);
    }
    let g: FiniteGraph = field(&report.input, "graph")?;
    let verdict: GraphVerdict = field(r, "verdict")?;
    match &verdict {
        GraphVerdict::NotHelly { witness } => {
            verify_counterexample(&g, witness).map_err(|e| CliError::Verify(e.to_string()))?;
            Ok(vec![format!(
                "{} balls meet pairwise with empty intersection",
                witness.len()
            )])
        }
        GraphVerdict::Helly => {
            let config = HellySearchConfig {
                vertex_cap: g.vertex_count(),
                workers: settings.workers,
            };
            ensure(is_helly(&g, &config)?.is_helly(), "graph has a counterexample")?;
            Ok(vec!["exhaustive search re-run".into()])
        }
    }
}

fn verify_scaled(report: &RunReport) -> Result<Vec<String>, CliError> {
    let input: ScaledHellyInput = serde_json::from_value(report.input.clone())?;
    let inst = input.instantiate()?;
    let radii = inst.scaled_radii();
    let r = &report.result;
    if r["solution"].is_null() {
        let again = helly_core::hellygraph::scaled_helly_check(&inst);
        ensure(
            matches!(again, Err(helly_core::hellygraph::HellyGraphError::NoSolution)),
            "a solution exists",
        )?;
        return Ok(vec!["no vertex lies in every scaled ball (re-run)".into()]);
    }
    let point: usize = field(r, "solution.point")?;
    let residuals: Vec<String> = field(r, "solution.residuals")?;
    ensure(point < inst.base.vertex_count(), "point out of range")?;
    let d = Rational::from_integer(inst.d.into());
    let bound = inst.slack() + d.recip();
    ensure(residuals.len() == inst.centers.len(), "wrong number of residuals")?;
    for (i, &c) in inst.centers.iter().enumerate() {
        let dist = inst.base.bfs(c)[point];
        ensure(u64::from(dist) <= radii[i], format!("point outside ball {i}"))?;
        let res = Rational::from_integer(dist.into()) / &d - &inst.radii[i];
        ensure(format_rational(&res) == residuals[i], format!("residual {i} differs"))?;
        ensure(res <= bound, format!("residual {i} exceeds 1/(2j) + 1/d"))?;
    }
    Ok(vec![format!(
        "point {point} lies in all {} balls with residuals at most {}",
        inst.centers.len(),
        format_rational(&bound)
    )])
}

fn verify_pushout(report: &RunReport) -> Result<Vec<String>, CliError> {
    let input: PushoutInput = serde_json::from_value(report.input.clone())?;
    input.validate()?;
    let r = &report.result;
    let g_phi: FiniteGroupTable = field(r, "extension.g_phi")?;
    let q: FiniteGroupTable = field(r, "extension.q")?;
    let g_to_q: Vec<usize> = field(r, "extension.g_to_q")?;
    let m_to_gphi: Vec<usize> = field(r, "extension.m_to_gphi")?;
    let phi_hat: Vec<usize> = field(r, "extension.phi_hat")?;
    let gphi_to_q: Vec<usize> = field(r, "extension.gphi_to_q")?;
    let ses = verify_ses_morphism(&SesMorphism {
        g: &input.g,
        n: &input.n,
        q: &q,
        g_to_q: &g_to_q,
        m: &input.m,
        g_phi: &g_phi,
        m_to_gphi: &m_to_gphi,
        gphi_to_q: &gphi_to_q,
        phi: &input.phi,
        phi_hat: &phi_hat,
        action: &input.action,
    });
    if let Some(v) = ses.violation {
        return Err(CliError::Verify(format!("{}", serde_json::to_string(&v)?)));
    }
    ensure(
        g_phi.order() * input.n.len() == input.m.order() * input.g.order(),
        "|G_φ| ≠ |M|·|G|/|N|",
    )?;
    Ok(vec![
        "both rows exact, both squares commute, action matches conjugation".into(),
        format!("|G_φ| = {}", g_phi.order()),
    ])
}

pub fn verify(path: &Path, settings: &Settings) -> Result<Draft, CliError> {
    let text = read_file(path)?;
    let report = RunReport::from_json(&text)?;
    let checks = match report.command.as_str() {
        "decide" => verify_decide(&report, settings)?,
        "helly-graph" => verify_graph(&report, settings)?,
        "scaled-helly" => verify_scaled(&report)?,
        "pushout" => verify_pushout(&report)?,
        other => {
            return Err(CliError::input(format!(
                "reports from '{other}' carry no certificate to verify"
            )))
        }
    };
    Ok(Draft {
        command: "verify",
        digest: digest(&[text.as_bytes()]),
        parameters: json!({}),
        input: json!({ "command": report.command, "input_digest": report.input_digest }),
        result: json!({ "valid": true, "checks": checks }),
        exit: EXIT_OK,
    })
}
