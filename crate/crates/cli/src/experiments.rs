//! Named experiments: each one reproduces a finite-scale structural claim
//! end to end and emits a deterministic JSON report. The runtime lives in
//! its own field so the verdict body is byte-stable across runs.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use hat_core::cayley::{
    cayley_coset_graph, clone_expansion_check, generate_group, left_translations_are_automorphisms,
    ConnectionSet, Permutation,
};
use hat_core::constructions::{
    mckay_praeger, template_product, tensor_z_kbar, tree_edge_graph, LeveledTemplate,
};
use hat_core::digraph::{
    degree_profile, tile, underlying_components, window, FiniteDigraph,
};
use hat_core::export::{to_dot, to_json};
use hat_core::geometry::incidence_template;
use hat_core::reachability::{
    is_complete_bipartite, r_digraph, reach_partition, universality_certificate, BipartiteVerdict,
    UniversalityVerdict,
};
use hat_core::symmetry::{
    clone_classes, find_isomorphism, property_z_check, s_arc_transitivity_report, LevelingResult,
    SearchOutcome, TransitivityVerdict,
};

const CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Serialize)]
pub struct ExperimentReport {
    experiment: String,
    params: BTreeMap<String, String>,
    verdicts: BTreeMap<String, Value>,
    metrics: BTreeMap<String, Value>,
    files: Vec<String>,
    runtime_ms: u128,
}

pub struct Outcome {
    pub report: ExperimentReport,
    pub status: Status,
}

/// Report under construction: verdicts are named booleans (or strings for
/// inconclusive outcomes) that decide the exit status.
struct Builder {
    verdicts: BTreeMap<String, Value>,
    metrics: BTreeMap<String, Value>,
    files: Vec<String>,
    inconclusive: bool,
}

impl Builder {
    fn new() -> Self {
        Self {
            verdicts: BTreeMap::new(),
            metrics: BTreeMap::new(),
            files: Vec::new(),
            inconclusive: false,
        }
    }

    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.to_string(), Value::Bool(ok));
    }

    fn inconclusive(&mut self, name: &str, reason: &str) {
        self.verdicts
            .insert(name.to_string(), json!(format!("inconclusive: {reason}")));
        self.inconclusive = true;
    }

    fn metric(&mut self, name: &str, value: Value) {
        self.metrics.insert(name.to_string(), value);
    }

    fn artifact(&mut self, out: Option<&Path>, name: &str, body: &str) -> Result<()> {
        if let Some(dir) = out {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(name);
            std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn status(&self) -> Status {
        let failed = self
            .verdicts
            .values()
            .any(|v| matches!(v, Value::Bool(false)));
        if failed {
            Status::Fail
        } else if self.inconclusive {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

fn get_usize(params: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        Some(v) => v.parse().with_context(|| format!("parameter {key}={v}")),
        None => Ok(default),
    }
}

pub fn run(name: &str, params: &BTreeMap<String, String>, out: Option<&Path>) -> Result<Outcome> {
    let start = Instant::now();
    let mut b = Builder::new();
    let mut params = params.clone();
    match name {
        "hat-universal" => hat_universal(&mut params, &mut b, out)?,
        "conjecture-counterexample" => conjecture_counterexample(&mut params, &mut b, out)?,
        "mckay-tiles" => mckay_tiles(&mut params, &mut b, out)?,
        "clones-geometry" => clones_geometry(&mut params, &mut b, out)?,
        "s-arc-window" => s_arc_window(&mut params, &mut b, out)?,
        "cayley-clone" => cayley_clone(&mut params, &mut b, out)?,
        "property-z" => property_z(&mut params, &mut b, out)?,
        other => bail!(
            "unknown experiment {other:?}; names: hat-universal, conjecture-counterexample, \
             mckay-tiles, clones-geometry, s-arc-window, cayley-clone, property-z"
        ),
    }
    let status = b.status();
    let report = ExperimentReport {
        experiment: name.to_string(),
        params,
        verdicts: b.verdicts,
        metrics: b.metrics,
        files: b.files,
        runtime_ms: start.elapsed().as_millis(),
    };
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome { report, status })
}

fn hat_universal(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let a = get_usize(params, "a", 3)?;
    let bb = get_usize(params, "b", 3)?;
    let radius = get_usize(params, "radius", 5)?;
    params.insert("a".into(), a.to_string());
    params.insert("b".into(), bb.to_string());
    params.insert("radius".into(), radius.to_string());

    let t = tree_edge_graph(a, bb, radius)?;
    let g = &t.graph;
    let expected = (a - 1) * (bb - 1);
    let degrees = degree_profile(g);
    let core = g.core_vertices();
    b.metric("vertices", json!(g.vertex_count()));
    b.metric("arcs", json!(g.arc_count()));
    b.metric("core_size", json!(core.len()));
    b.metric("expected_degree", json!(expected));
    b.verdict(
        "core_degrees_match",
        degrees.uniform_over(&core) == Some((expected, expected)),
    );

    match universality_certificate(g)? {
        UniversalityVerdict::UniversalOnCore { core_arcs, margin } => {
            b.metric("core_arcs", json!(core_arcs));
            b.metric("margin", json!(margin));
            b.verdict("universal_on_core", true);
        }
        UniversalityVerdict::Refuted { .. } => b.verdict("universal_on_core", false),
        UniversalityVerdict::Inconclusive { reason } => {
            b.inconclusive("universal_on_core", &reason)
        }
    }

    match property_z_check(g) {
        LevelingResult::Conflict(walk) => {
            b.metric("conflict_displacement", json!(walk.replay(g)?));
            b.metric("conflict_length", json!(walk.steps.len()));
            b.verdict("property_z_refuted", true);
        }
        LevelingResult::Consistent(_) => b.verdict("property_z_refuted", false),
    }

    b.artifact(out, "hat-universal-graph.json", &to_json(g))?;
    Ok(())
}

fn conjecture_counterexample(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let levels = get_usize(params, "levels", 5)?;
    params.insert("levels".into(), levels.to_string());
    if levels < 3 {
        bail!("need at least 3 levels");
    }

    let template = LeveledTemplate::six_cycle();
    let p = template_product(&template)?;
    let t = tile(&p);
    b.verdict("tile_connected", underlying_components(&t).len() == 1);

    let w = window(&p, 0, levels as i64 - 1)?;
    let partition = reach_partition(&w);
    b.metric("class_count", json!(partition.class_count()));
    b.verdict(
        "one_class_per_transition",
        partition.class_count() == levels - 1
            && partition
                .classes()
                .iter()
                .all(|c| c.len() == p.tile_arcs().len()),
    );

    let r = r_digraph(&w, CAP)?;
    let rep = &r.representative;
    let sources: Vec<u32> = (0..rep.vertex_count() as u32)
        .filter(|&v| rep.out_degree(v) > 0)
        .collect();
    let sinks: Vec<u32> = (0..rep.vertex_count() as u32)
        .filter(|&v| rep.in_degree(v) > 0)
        .collect();
    b.metric("r_parts", json!([sources.len(), sinks.len()]));
    b.verdict("r_parts_9_9", sources.len() == 9 && sinks.len() == 9);
    b.verdict(
        "r_out_degree_6",
        sources.iter().all(|&v| rep.out_degree(v) == 6),
    );
    match is_complete_bipartite(rep)? {
        BipartiteVerdict::Missing { source, sink } => {
            b.metric("missing_pair", json!([source, sink]));
            b.verdict("complete_bipartite_refuted", true);
        }
        BipartiteVerdict::Complete { .. } => b.verdict("complete_bipartite_refuted", false),
    }

    b.artifact(out, "conjecture-counterexample-r.dot", &to_dot(rep))?;
    Ok(())
}

fn mckay_tiles(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let s = get_usize(params, "s", 2)?;
    let n = get_usize(params, "n", 3)?;
    params.insert("s".into(), s.to_string());
    params.insert("n".into(), n.to_string());

    let p = mckay_praeger(s, n)?;
    let t = tile(&p);
    let expected_components = s.pow(n as u32 - 1);
    let components = underlying_components(&t);
    b.metric("component_count", json!(components.len()));
    b.verdict("component_count_matches", components.len() == expected_components);

    // Each component must be the complete bipartite digraph on s + s
    // vertices.
    let mut complete_arcs = Vec::new();
    for u in 0..s as u32 {
        for v in 0..s as u32 {
            complete_arcs.push((u, s as u32 + v));
        }
    }
    let kss = FiniteDigraph::new(2 * s, complete_arcs)?;
    b.verdict(
        "components_complete_bipartite",
        components.iter().all(|c| {
            matches!(
                find_isomorphism(&t.vertex_induced_subgraph(c), &kss, CAP),
                SearchOutcome::Found(_)
            )
        }),
    );

    let partition = reach_partition(&t);
    b.metric("class_count", json!(partition.class_count()));
    b.verdict("class_count_matches", partition.class_count() == expected_components);

    let r = r_digraph(&t, CAP)?;
    match r.all_classes_isomorphic {
        Some(ok) => b.verdict("classes_pairwise_isomorphic", ok),
        None => b.inconclusive("classes_pairwise_isomorphic", "isomorphism search cap hit"),
    }
    b.verdict(
        "r_is_complete_bipartite_tile",
        matches!(find_isomorphism(&r.representative, &kss, CAP), SearchOutcome::Found(_)),
    );

    b.artifact(out, "mckay-tiles-r.dot", &to_dot(&r.representative))?;
    Ok(())
}

fn clones_geometry(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let n = get_usize(params, "n", 3)?;
    let q = get_usize(params, "q", 2)? as u64;
    params.insert("n".into(), n.to_string());
    params.insert("q".into(), q.to_string());

    let geometry = incidence_template(n, q)?;
    let sizes = geometry.template.level_sizes().to_vec();
    let p = template_product(&geometry.template)?;
    let w = window(&p, 0, 2)?;
    let report = clone_classes(&w, true);
    let c_plus = report.c_plus;
    let c_minus = report.c_minus;
    b.metric("level_sizes", json!(sizes));
    b.metric("tile_level_size", json!(p.level_size()));
    b.metric("c_plus", json!(c_plus));
    b.metric("c_minus", json!(c_minus));
    b.verdict("c_plus_is_top_level", c_plus == Some(sizes[sizes.len() - 1]));
    b.verdict("c_minus_is_bottom_level", c_minus == Some(sizes[0]));
    match (c_plus, c_minus) {
        (Some(cp), Some(cm)) => {
            b.metric("clone_product", json!(cp * cm));
            b.verdict("clone_product_below_level_size", cp * cm < p.level_size());
        }
        _ => b.verdict("clone_product_below_level_size", false),
    }

    // The two-level comparison point: products of bipartite templates have
    // clone product at least the level size.
    let six = template_product(&LeveledTemplate::six_cycle())?;
    let w6 = window(&six, 0, 2)?;
    let r6 = clone_classes(&w6, true);
    match (r6.c_plus, r6.c_minus) {
        (Some(cp), Some(cm)) => {
            b.metric("two_level_clone_product", json!(cp * cm));
            b.verdict(
                "two_level_clone_product_at_least_level_size",
                cp * cm >= six.level_size(),
            );
        }
        _ => b.verdict("two_level_clone_product_at_least_level_size", false),
    }

    let _ = out;
    Ok(())
}

fn s_arc_window(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let s_max = get_usize(params, "s_max", 3)?;
    let levels = get_usize(params, "levels", 6)?;
    let cap = get_usize(params, "cap", CAP as usize)? as u64;
    params.insert("s_max".into(), s_max.to_string());
    params.insert("levels".into(), levels.to_string());
    params.insert("cap".into(), cap.to_string());

    let subjects: Vec<(&str, hat_core::digraph::PeriodicDigraph)> = vec![
        ("tensor_k2", tensor_z_kbar(2)?),
        (
            "complete_template_2_2_2",
            template_product(&LeveledTemplate::complete(&[2, 2, 2])?)?,
        ),
    ];
    for (label, p) in &subjects {
        let w = window(p, 0, levels as i64 - 1)?;
        for s in 1..=s_max {
            let report = s_arc_transitivity_report(&w, s, cap)?;
            let key = format!("{label}_s{s}_transitive");
            match &report.verdict {
                TransitivityVerdict::Transitive => b.verdict(&key, true),
                TransitivityVerdict::NotTransitive => b.verdict(&key, false),
                TransitivityVerdict::Inconclusive { reason } => b.inconclusive(&key, reason),
            }
            b.metric(
                &format!("{label}_s{s}_orbits"),
                json!(report.orbit_count),
            );
            b.metric(
                &format!("{label}_s{s}_searches"),
                json!(report.searches),
            );
        }
    }
    let _ = out;
    Ok(())
}

fn cayley_clone(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let _ = params;
    // Symmetric group on three points with an order-two subgroup and the
    // double coset of a rotation.
    let s3 = generate_group(
        &[
            Permutation::from_cycles(3, "(0 1)")?,
            Permutation::from_cycles(3, "(0 1 2)")?,
        ],
        100,
    )?;
    let lambda = s3.subgroup(&[Permutation::from_cycles(3, "(0 1)")?])?;
    let rot = s3
        .id_of(&Permutation::from_cycles(3, "(0 1 2)")?)
        .ok_or_else(|| anyhow!("rotation missing"))?;
    let a = ConnectionSet::new(&s3, &lambda, s3.double_coset(&lambda, rot))?;

    let trivial = clone_expansion_check(&s3, &lambda, &lambda, &a)?;
    b.verdict("trivial_refinement_passes", trivial.passed);
    b.metric("trivial_refinement_index", json!(trivial.index));

    let c4 = generate_group(&[Permutation::from_cycles(4, "(0 1 2 3)")?], 100)?;
    let half = c4.subgroup(&[Permutation::from_cycles(4, "(0 2)(1 3)")?])?;
    let step = c4
        .id_of(&Permutation::from_cycles(4, "(0 1 2 3)")?)
        .ok_or_else(|| anyhow!("step missing"))?;
    let a4 = ConnectionSet::new(&c4, &half, c4.double_coset(&half, step))?;
    let cyclic = clone_expansion_check(&c4, &half, &c4.trivial(), &a4)?;
    b.verdict("cyclic4_refinement_passes", cyclic.passed);
    b.metric("cyclic4_refinement_index", json!(cyclic.index));

    let s3_case = clone_expansion_check(&s3, &lambda, &s3.trivial(), &a)?;
    b.verdict("s3_refinement_passes", s3_case.passed);
    b.metric("s3_refinement_index", json!(s3_case.index));

    let mut replay_ok = true;
    for (group, sub, conn) in [(&s3, &lambda, &a), (&c4, &half, &a4)] {
        let coarse = cayley_coset_graph(group, sub, conn)?;
        replay_ok &= left_translations_are_automorphisms(group, &coarse);
        let fine = cayley_coset_graph(group, &group.trivial(), conn)?;
        replay_ok &= left_translations_are_automorphisms(group, &fine);
    }
    b.verdict("left_translation_replay", replay_ok);

    let cay = cayley_coset_graph(&s3, &lambda, &a)?;
    b.metric("s3_coset_graph_arcs", json!(cay.graph.arc_count()));
    b.artifact(out, "cayley-clone-s3.dot", &to_dot(&cay.graph))?;
    Ok(())
}

fn property_z(
    params: &mut BTreeMap<String, String>,
    b: &mut Builder,
    out: Option<&Path>,
) -> Result<()> {
    let construction = params
        .get("construction")
        .cloned()
        .unwrap_or_else(|| "tensor".to_string());
    params.insert("construction".into(), construction.clone());

    // Leveled periodic windows must be consistent; the tree-edge digraph
    // must conflict.
    let (g, expect_consistent): (FiniteDigraph, bool) = match construction.as_str() {
        "tensor" => {
            let k = get_usize(params, "k", 2)?;
            params.insert("k".into(), k.to_string());
            (window(&tensor_z_kbar(k)?, 0, 4)?, true)
        }
        "mckay" => {
            let s = get_usize(params, "s", 2)?;
            let n = get_usize(params, "n", 3)?;
            params.insert("s".into(), s.to_string());
            params.insert("n".into(), n.to_string());
            (window(&mckay_praeger(s, n)?, 0, 4)?, true)
        }
        "six-cycle" => (
            window(&template_product(&LeveledTemplate::six_cycle())?, 0, 4)?,
            true,
        ),
        "tree" => {
            let a = get_usize(params, "a", 3)?;
            let bb = get_usize(params, "b", 3)?;
            let radius = get_usize(params, "radius", 4)?;
            params.insert("a".into(), a.to_string());
            params.insert("b".into(), bb.to_string());
            params.insert("radius".into(), radius.to_string());
            (tree_edge_graph(a, bb, radius)?.graph, false)
        }
        other => bail!("unknown property-z construction {other:?}"),
    };

    match property_z_check(&g) {
        LevelingResult::Consistent(_) => {
            b.metric("leveling", json!("consistent"));
            b.verdict("leveling_as_expected", expect_consistent);
        }
        LevelingResult::Conflict(walk) => {
            b.metric("leveling", json!("conflict"));
            b.metric("conflict_displacement", json!(walk.replay(&g)?));
            b.verdict("leveling_as_expected", !expect_consistent);
        }
    }
    let _ = out;
    Ok(())
}
