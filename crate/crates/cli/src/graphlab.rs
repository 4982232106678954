use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use symprod::decider::classify;
use symprod::graphs::io::{format_rooted, parse_graph, parse_rooted, parse_weighted};
use symprod::graphs::{
    generate_rigid_family, hom_count, neighborhood_degree_sequence, random_graph,
    walk_tree_canonical_partition, walk_tree_partition, EdgeRootedGraph, FamilyOptions, Graph,
    WeightedGraph,
};
use symprod::linalg::io::TextScalar;
use symprod::positivity::{
    default_epsilon, find_sun_block, positivity_sampler, random_float_target,
    random_rational_target, rational_seed_matrix, sun_negativity_check, BlockTally,
    CounterexampleTarget, Placement, SamplerReport, SamplerSource, SunReport,
};
use symprod::Error;

use crate::{parse, Outcome, SymArgs, EXIT_FAILED, EXIT_OK};

#[derive(Subcommand)]
pub enum Task {
    /// Refute positivity of a sun graph with its designed target.
    SunCheck {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        ell: usize,
        /// Exact rational arithmetic with the rational placement.
        #[arg(long)]
        exact: bool,
        /// Edge-rooted block; sampled when absent.
        #[arg(long)]
        block: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Override of the edge weight of the block copies.
        #[arg(long)]
        epsilon: Option<String>,
        /// Float-mode weight placement.
        #[arg(long, value_enum, default_value_t = PlacementArg::Spread)]
        placement: PlacementArg,
        /// Also enumerate block maps and tally aligned ones.
        #[arg(long)]
        tally: bool,
        /// Write the target with its manifest.
        #[arg(long)]
        target_out: Option<PathBuf>,
    },
    /// Minimum of `hom(G^2, H)` over random targets.
    GsquareSample {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        sym: SymArgs,
        /// Edge-rooted block used for every variable; a rooted triangle by
        /// default.
        #[arg(long)]
        block: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        targets: usize,
        #[arg(long, default_value_t = 4)]
        max_h: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exact: bool,
    },
    /// Sample a rigid edge-rooted family and check its properties.
    RigidGen {
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 10)]
        n0: usize,
        #[arg(long, default_value_t = 2000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        step: usize,
    },
    /// Colour refinement against truncated walk-tree classes.
    Walktree {
        /// Graph edge-list file; a random graph when absent.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Walk-tree depth; `2n` by default.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Weighted homomorphism count.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    Rational,
    Spread,
}

pub fn run(task: &Task) -> Result<Outcome, Error> {
    match task {
        Task::SunCheck {
            k,
            ell,
            exact,
            block,
            seed,
            n_min,
            n_max,
            p,
            budget,
            epsilon,
            placement,
            tally,
            target_out,
        } => {
            let (f, origin) = match block {
                Some(path) => (parse_rooted(&fs::read_to_string(path)?)?, json!({"file": path})),
                None => {
                    let s = find_sun_block(*n_min..=*n_max, *p, *seed, *budget)?.ok_or_else(|| {
                        Error::Precondition(format!("no admissible block within {budget} samples"))
                    })?;
                    let origin = json!({
                        "seed": seed,
                        "p": p,
                        "index": s.index,
                        "sample_seed": s.sample_seed,
                        "tried": s.tried,
                    });
                    (s.f, origin)
                }
            };
            let block_json = json!({
                "n": f.n(),
                "edges": f.graph.edges(),
                "root": [f.a, f.b],
                "origin": origin,
            });
            if *exact {
                let eps = match epsilon {
                    Some(e) => BigRational::parse_text(e)?,
                    None => default_epsilon(&f, *k, *ell),
                };
                let target = CounterexampleTarget::rational(&f, *k, *ell, eps, rational_seed_matrix(*k))?;
                sun_outcome(&target, *tally, target_out, block_json, &f)
            } else {
                let eps = match epsilon {
                    Some(e) => f64::parse_text(e)?,
                    None => 1e-3,
                };
                let target = match placement {
                    PlacementArg::Spread => CounterexampleTarget::spread(&f, *k, *ell, eps)?,
                    PlacementArg::Rational => {
                        let m = symprod::linalg::rotation_matrix(std::f64::consts::PI / (2.0 * *k as f64));
                        CounterexampleTarget::rational(&f, *k, *ell, eps, m)?
                    }
                };
                sun_outcome(&target, *tally, target_out, block_json, &f)
            }
        }
        Task::GsquareSample {
            word,
            sym,
            block,
            targets,
            max_h,
            seed,
            exact,
        } => {
            let w = parse(word, sym)?;
            let f = match block {
                Some(path) => parse_rooted(&fs::read_to_string(path)?)?,
                None => EdgeRootedGraph::triangle(),
            };
            let family: BTreeMap<String, EdgeRootedGraph> =
                w.vars().iter().map(|v| (v.name.clone(), f.clone())).collect();
            let real = classify(&w).is_real_eigenvalued();
            let src = SamplerSource::GSquare { word: w.clone(), family };
            let (seed, max_h) = (*seed, *max_h);
            let (report, min_ok) = if *exact {
                let r = positivity_sampler(&src, *targets, seed, |i| random_rational_target(max_h, seed, i))?;
                let ok = !r.negative;
                (sampler_json(&r), ok)
            } else {
                let r = positivity_sampler(&src, *targets, seed, |i| random_float_target(max_h, seed, i))?;
                let ok = r.min_value >= -1e-9 * (1.0 + r.min_value.abs());
                (sampler_json(&r), ok)
            };
            let code = if real && !min_ok { EXIT_FAILED } else { EXIT_OK };
            let text = format!(
                "word: {}\nreal-eigenvalued: {real}\nblock vertices: {}\ntargets: {targets} (max {max_h} vertices, seed {seed})\nmin: {}\nargmin: {}\nnon-negative: {min_ok}\n",
                w.product_string(),
                f.n(),
                report["min_value"],
                report["argmin"],
            );
            let json = json!({
                "schema": 1,
                "word": w.product_string(),
                "real_eigenvalued": real,
                "exact": exact,
                "sample": report,
                "non_negative": min_ok,
            });
            Ok(Outcome { code, json, text })
        }
        Task::RigidGen {
            ell,
            n0,
            budget,
            seed,
            step,
        } => {
            let r = generate_rigid_family(&FamilyOptions {
                ell: *ell,
                n0: *n0,
                budget: *budget,
                seed: *seed,
                step: *step,
            })?;
            let mut text = format!(
                "sizes: {:?}\nseed: {}\nbudget: {}\ncomplete: {}\n",
                r.sizes, r.seed, r.budget, r.complete
            );
            for m in &r.members {
                let f = m.rooted();
                text.push_str(&format!(
                    "member n={} sample {} root ({},{}) S={:?}\n{}",
                    m.n,
                    m.sample_index,
                    m.a,
                    m.b,
                    m.s,
                    format_rooted(&f)
                ));
            }
            for p in &r.properties {
                text.push_str(&format!(
                    "({}) {}: {} {}\n",
                    p.id,
                    p.name,
                    if p.passed { "pass" } else { "FAIL" },
                    p.detail
                ));
            }
            let code = if r.all_passed { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome {
                code,
                json: serde_json::to_value(&r).expect("serializable"),
                text,
            })
        }
        Task::Walktree {
            graph,
            n,
            p,
            seed,
            depth,
        } => {
            let (g, origin) = match graph {
                Some(path) => (parse_graph(&fs::read_to_string(path)?)?.0, json!({"file": path})),
                None => (random_graph(*n, *p, *seed), json!({"n": n, "p": p, "seed": seed})),
            };
            Ok(walktree_outcome(&g, depth.unwrap_or(2 * g.n()), origin))
        }
        Task::Hom {
            source,
            target,
            exact,
        } => {
            let (g, _) = parse_graph(&fs::read_to_string(source)?)?;
            let text = fs::read_to_string(target)?;
            let value = if *exact {
                hom_value::<BigRational>(&g, &text)?
            } else {
                hom_value::<f64>(&g, &text)?
            };
            Ok(Outcome {
                code: EXIT_OK,
                json: json!({"schema": 1, "source_vertices": g.n(), "exact": exact, "hom": value}),
                text: format!("hom: {value}\n"),
            })
        }
    }
}

fn hom_value<T: TextScalar>(g: &Graph, text: &str) -> Result<String, Error> {
    let h: WeightedGraph<T> = parse_weighted(text)?;
    if h.is_directed() {
        return Err(Error::Precondition("hom expects an undirected target".into()));
    }
    Ok(hom_count(g, &h)?.format_text())
}

fn sampler_json<T: TextScalar>(r: &SamplerReport<T>) -> Value {
    let m = r.target.matrix();
    let weights: Vec<Vec<String>> = (0..m.n())
        .map(|i| m.row(i).iter().map(TextScalar::format_text).collect())
        .collect();
    json!({
        "min_value": r.min_value.format_text(),
        "negative": r.negative,
        "argmin": r.argmin,
        "samples": r.samples,
        "seed": r.seed,
        "target": weights,
    })
}

fn tally_json<T: TextScalar + PartialOrd>(t: &BlockTally<T>) -> Value {
    json!({
        "aligned": t.aligned.format_text(),
        "aligned_expected": t.aligned_expected.format_text(),
        "aligned_matches": t.aligned == t.aligned_expected,
        "aligned_weights_are_m_entries": t.aligned_weights_are_m_entries,
        "misaligned": t.misaligned.format_text(),
        "max_misaligned": t.max_misaligned.format_text(),
        "misaligned_bound": t.misaligned_bound.format_text(),
        "misaligned_within_bound": t.max_misaligned <= t.misaligned_bound,
        "aligned_block_maps": t.aligned_block_maps,
        "misaligned_block_maps": t.misaligned_block_maps,
    })
}

fn sun_outcome<T>(
    target: &CounterexampleTarget<T>,
    tally: bool,
    target_out: &Option<PathBuf>,
    block: Value,
    f: &EdgeRootedGraph,
) -> Result<Outcome, Error>
where
    T: TextScalar + PartialOrd + num_traits::Signed,
{
    let r: SunReport<T> = sun_negativity_check(target, tally)?;
    if let Some(path) = target_out {
        fs::write(path, target.to_text())?;
    }
    let placement = match target.placement {
        Placement::Rational => "rational",
        Placement::Spread => "spread",
    };
    let tally_ok = r.tally.as_ref().is_none_or(|t| {
        t.aligned == t.aligned_expected
            && t.aligned_weights_are_m_entries
            && t.max_misaligned <= t.misaligned_bound
    });
    let code = if r.negative && tally_ok { EXIT_OK } else { EXIT_FAILED };
    let value = r.value.format_text();
    let short = if value.len() > 80 {
        format!("{}... ({} chars)", &value[..60], value.len())
    } else {
        value.clone()
    };
    let mut text = format!(
        "block: {} vertices, {} edges, root ({},{})\nk: {}  ell: {}  placement: {placement}\ntarget: {} vertices\nmultiplicity: {}\nhom: {short}\nnegative: {}\n",
        f.n(),
        f.graph.edge_count(),
        f.a,
        f.b,
        r.k,
        r.ell,
        target.n(),
        r.multiplicity,
        r.negative
    );
    let tally_json = r.tally.as_ref().map(tally_json);
    if let Some(t) = &tally_json {
        text.push_str(&format!(
            "aligned: {} (expected {})\naligned weights are M entries: {}\nmisaligned within bound: {}\n",
            t["aligned"], t["aligned_expected"], t["aligned_weights_are_m_entries"], t["misaligned_within_bound"]
        ));
    }
    let eps = target.epsilon.format_text();
    let json = json!({
        "schema": 1,
        "block": block,
        "k": r.k,
        "ell": r.ell,
        "placement": placement,
        "epsilon": eps,
        "target_vertices": target.n(),
        "multiplicity": r.multiplicity,
        "hom": value,
        "negative": r.negative,
        "tally": tally_json,
    });
    Ok(Outcome { code, json, text })
}

fn walktree_outcome(g: &Graph, depth: usize, origin: Value) -> Outcome {
    let wl = walk_tree_partition(g);
    let canon = walk_tree_canonical_partition(g, depth);
    let agree = wl == canon;
    let degrees = g.degrees();
    let mut invariant_ok = true;
    for class in &wl.classes {
        let first = class[0];
        let nds = neighborhood_degree_sequence(g, first);
        for &v in &class[1..] {
            if degrees[v] != degrees[first] || neighborhood_degree_sequence(g, v) != nds {
                invariant_ok = false;
            }
        }
    }
    let code = if agree && invariant_ok { EXIT_OK } else { EXIT_FAILED };
    let text = format!(
        "vertices: {}\ndepth: {depth}\nrefinement classes: {:?}\nwalk-tree classes: {:?}\nagree: {agree}\ndegree checks: {invariant_ok}\n",
        g.n(),
        wl.classes,
        canon.classes
    );
    let json = json!({
        "schema": 1,
        "graph": origin,
        "vertices": g.n(),
        "depth": depth,
        "refinement": wl.classes,
        "walk_tree": canon.classes,
        "agree": agree,
        "degree_checks": invariant_ok,
    });
    Outcome { code, json, text }
}
