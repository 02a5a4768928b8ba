//! Batch tool binding the constructions to the verification machinery.
//! Exit codes are CI-friendly: 0 all verdicts pass, 1 a verdict failed,
//! 2 inconclusive, 3 and up errors.

mod experiments;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hat_core::cayley::{
    cayley_coset_graph, clone_expansion_check, generate_group, left_translations_are_automorphisms,
    ConnectionSet, GeneratedGroup, Permutation, Subgroup,
};
use hat_core::constructions::{
    mckay_praeger, template_product, tensor_z_kbar, tree_edge_graph, LeveledTemplate,
};
use hat_core::digraph::{window_with_margin, FiniteDigraph, PeriodicDigraph};
use hat_core::export::{to_dot, to_json};
use hat_core::geometry::incidence_template;
use hat_core::reachability::{r_digraph, reach_partition};
use hat_core::symmetry::{s_arc_transitivity_report, TransitivityVerdict};

#[derive(Parser)]
#[command(
    name = "hat",
    version,
    about = "Builds finite windows of arc-transitive digraph families and machine-checks their structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction window and export it as DOT or JSON.
    Build {
        #[command(flatten)]
        construction: ConstructionArgs,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Output path, or `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Reachability classes of a window: counts, sizes, class digraph.
    Reach {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Write the DOT of one reachability class here.
        #[arg(long)]
        dot_class: Option<PathBuf>,
    },
    /// s-arc orbit transitivity over the window core.
    Symmetry {
        #[command(flatten)]
        construction: ConstructionArgs,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Core margin in levels (overrides the construction's default).
        #[arg(long)]
        core_margin: Option<i64>,
        /// Backtrack node budget per seeded search.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Cayley coset graph of an explicitly generated permutation group.
    Cayley {
        /// Number of points the permutations act on.
        #[arg(long)]
        degree: usize,
        /// Semicolon-separated generators in cycle notation, e.g. "(0 1);(0 1 2)".
        #[arg(long)]
        gens: String,
        /// Generators of the subgroup whose cosets become vertices.
        #[arg(long, default_value = "")]
        subgroup: String,
        /// Optional finer subgroup for the clone-expansion check.
        #[arg(long)]
        subgroup_prime: Option<String>,
        /// Connection set: "dcoset:<perm>[;<perm>..]" for unions of double
        /// cosets, or "elems:<perm>[;<perm>..]" for explicit elements.
        #[arg(long)]
        connection: String,
        /// Group element cap.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        /// Write the coset graph DOT here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run a named experiment and emit its JSON report.
    Experiment {
        /// One of: hat-universal, conjecture-counterexample, mckay-tiles,
        /// clones-geometry, s-arc-window, cayley-clone, property-z.
        name: String,
        /// Experiment parameters as key=value.
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        /// Directory for the report and artifact files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Construction selector shared by the window-based subcommands.
#[derive(Args)]
struct ConstructionArgs {
    /// tensor | tree | mckay | template | coloured | geometry
    /// ("2" is accepted as a shorthand for two-level template products).
    #[arg(long)]
    construction: String,
    /// Clone count for tensor.
    #[arg(long)]
    k: Option<usize>,
    /// Tree side degrees and truncation radius.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    /// Alphabet size for mckay.
    #[arg(long)]
    alphabet: Option<usize>,
    /// Tuple length for mckay, or projective dimension for geometry.
    #[arg(long)]
    n: Option<usize>,
    /// Field order for geometry (prime).
    #[arg(long)]
    q: Option<u64>,
    /// Template source: a JSON file path, "six-cycle", or "complete:2,2,2".
    #[arg(long)]
    template: Option<String>,
    /// Window as lo:hi (periodic constructions only).
    #[arg(long, default_value = "0:4")]
    window: String,
    /// Core margin in levels.
    #[arg(long, default_value_t = 1)]
    margin: i64,
}

impl ConstructionArgs {
    fn parse_window(&self) -> Result<(i64, i64)> {
        let (lo, hi) = self
            .window
            .split_once(':')
            .ok_or_else(|| anyhow!("--window expects lo:hi"))?;
        Ok((lo.parse()?, hi.parse()?))
    }

    fn load_template(&self) -> Result<LeveledTemplate> {
        let source = self
            .template
            .as_deref()
            .ok_or_else(|| anyhow!("--template is required for template products"))?;
        load_template(source)
    }

    /// Builds the finite digraph this selector describes, with core flags.
    fn build(&self, margin_override: Option<i64>) -> Result<FiniteDigraph> {
        let margin = margin_override.unwrap_or(self.margin);
        let periodic: PeriodicDigraph = match self.construction.as_str() {
            "tensor" => tensor_z_kbar(self.k.ok_or_else(|| anyhow!("tensor needs --k"))?)?,
            "tree" => {
                let a = self.a.ok_or_else(|| anyhow!("tree needs --a"))?;
                let b = self.b.ok_or_else(|| anyhow!("tree needs --b"))?;
                let radius = self.radius.ok_or_else(|| anyhow!("tree needs --radius"))?;
                return Ok(tree_edge_graph(a, b, radius)?.graph);
            }
            "mckay" => {
                let s = self
                    .alphabet
                    .ok_or_else(|| anyhow!("mckay needs --alphabet"))?;
                let n = self.n.ok_or_else(|| anyhow!("mckay needs --n"))?;
                mckay_praeger(s, n)?
            }
            "template" | "2" => template_product(&self.load_template()?)?,
            "coloured" => {
                hat_core::constructions::coloured_template_product(&self.load_template()?)?
            }
            "geometry" => {
                let n = self.n.ok_or_else(|| anyhow!("geometry needs --n"))?;
                let q = self.q.ok_or_else(|| anyhow!("geometry needs --q"))?;
                template_product(&incidence_template(n, q)?.template)?
            }
            other => bail!("unknown construction {other:?}"),
        };
        let (lo, hi) = self.parse_window()?;
        Ok(window_with_margin(&periodic, lo, hi, margin)?)
    }
}

/// Resolves a template argument: builtin name, builtin family, or file.
fn load_template(source: &str) -> Result<LeveledTemplate> {
    if source == "six-cycle" {
        return Ok(LeveledTemplate::six_cycle());
    }
    if let Some(sizes) = source.strip_prefix("complete:") {
        let sizes: Vec<usize> = sizes
            .split(',')
            .map(|s| s.trim().parse().context("level size"))
            .collect::<Result<_>>()?;
        return Ok(LeveledTemplate::complete(&sizes)?);
    }
    let body = std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    Ok(LeveledTemplate::from_json_str(&body)?)
}

fn write_or_print(path: &str, body: &str) -> Result<()> {
    if path == "-" {
        print!("{body}");
    } else {
        std::fs::write(path, body).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReachReport {
    class_count: usize,
    class_sizes: Vec<usize>,
    r_vertices: usize,
    r_arcs: usize,
    all_classes_isomorphic: Option<bool>,
}

#[derive(Serialize)]
struct SymmetryReport {
    verdict: String,
    orbit_count: usize,
    s: usize,
    core_size: usize,
    searches: usize,
    cap_hit: bool,
}

fn parse_permutations(degree: usize, list: &str) -> Result<Vec<Permutation>> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok(Permutation::from_cycles(degree, s)?))
        .collect()
}

fn parse_subgroup(group: &GeneratedGroup, list: &str) -> Result<Subgroup> {
    let gens = parse_permutations(group.degree(), list)?;
    Ok(group.subgroup(&gens)?)
}

fn parse_connection(group: &GeneratedGroup, sub: &Subgroup, arg: &str) -> Result<ConnectionSet> {
    let (kind, body) = arg
        .split_once(':')
        .ok_or_else(|| anyhow!("--connection expects dcoset:<perms> or elems:<perms>"))?;
    let perms = parse_permutations(group.degree(), body)?;
    let mut ids = Vec::new();
    for p in &perms {
        let id = group
            .id_of(p)
            .ok_or_else(|| anyhow!("{} is not in the group", p.cycle_string()))?;
        match kind {
            "dcoset" => ids.extend(group.double_coset(sub, id)),
            "elems" => ids.push(id),
            other => bail!("unknown connection kind {other:?}"),
        }
    }
    Ok(ConnectionSet::new(group, sub, ids)?)
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build {
            construction,
            format,
            out,
        } => {
            let g = construction.build(None)?;
            let body = match format {
                Format::Dot => to_dot(&g),
                Format::Json => format!("{}\n", to_json(&g)),
            };
            write_or_print(&out, &body)?;
            Ok(0)
        }
        Command::Reach {
            construction,
            dot_class,
        } => {
            let g = construction.build(None)?;
            let partition = reach_partition(&g);
            let r = r_digraph(&g, 1_000_000)?;
            let report = ReachReport {
                class_count: partition.class_count(),
                class_sizes: partition.class_sizes(),
                r_vertices: r.representative.vertex_count(),
                r_arcs: r.representative.arc_count(),
                all_classes_isomorphic: r.all_classes_isomorphic,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(path) = dot_class {
                std::fs::write(&path, to_dot(&r.representative))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        Command::Symmetry {
            construction,
            s,
            core_margin,
            cap,
        } => {
            let g = construction.build(core_margin)?;
            let report = s_arc_transitivity_report(&g, s, cap)?;
            let (verdict, code) = match &report.verdict {
                TransitivityVerdict::Transitive => ("Transitive".to_string(), 0),
                TransitivityVerdict::NotTransitive => ("NotTransitive".to_string(), 1),
                TransitivityVerdict::Inconclusive { reason } => {
                    (format!("Inconclusive: {reason}"), 2)
                }
            };
            let out = SymmetryReport {
                verdict,
                orbit_count: report.orbit_count,
                s: report.s,
                core_size: report.core_size,
                searches: report.searches,
                cap_hit: report.cap_hit,
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(code)
        }
        Command::Cayley {
            degree,
            gens,
            subgroup,
            subgroup_prime,
            connection,
            cap,
            dot,
        } => {
            let generators = parse_permutations(degree, &gens)?;
            let group = generate_group(&generators, cap)?;
            let sub = parse_subgroup(&group, &subgroup)?;
            let conn = parse_connection(&group, &sub, &connection)?;
            let cayley = cayley_coset_graph(&group, &sub, &conn)?;
            let transitive = left_translations_are_automorphisms(&group, &cayley);

            let mut verdicts = BTreeMap::new();
            verdicts.insert("left_translations_preserve_arcs", transitive);
            let mut failed = !transitive;

            println!("group order {}", group.order());
            println!(
                "cosets {} arcs {} removed_loops {}",
                cayley.cosets.len(),
                cayley.graph.arc_count(),
                cayley.removed_loops
            );
            if let Some(prime) = subgroup_prime {
                let finer = parse_subgroup(&group, &prime)?;
                let report = clone_expansion_check(&group, &sub, &finer, &conn)?;
                println!(
                    "clone expansion: index {} blocks_are_clones {} quotient_matches {}",
                    report.index, report.blocks_are_clones, report.quotient_matches
                );
                verdicts.insert("clone_expansion", report.passed);
                failed |= !report.passed;
            }
            for (name, ok) in &verdicts {
                println!("verdict {name}: {ok}");
            }
            if let Some(path) = dot {
                std::fs::write(&path, to_dot(&cayley.graph))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if failed { 1 } else { 0 })
        }
        Command::Experiment { name, params, out } => {
            let mut map = BTreeMap::new();
            for p in &params {
                let (key, value) = p
                    .split_once('=')
                    .ok_or_else(|| anyhow!("--param expects key=value, got {p:?}"))?;
                map.insert(key.to_string(), value.to_string());
            }
            let outcome = experiments::run(&name, &map, out.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&outcome.report)?);
            Ok(outcome.status.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}
