//! End-to-end acceptance checks. Each criterion prints one line and the
//! binary exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use symprod::cycle::{
    check_reflection_hypothesis, check_rotation_hypothesis, reflection_conclusion,
    rotation_conclusion, ColoredCycle, DirectedColor, Orientation,
};
use symprod::decider::{classify, Verdict};
use symprod::graphs::{
    endomorphisms, glue_cycle, hom_count, hom_count_directed, hom_sym_check,
    neighborhood_degree_sequence, random_graph, sample_rigid, walk_tree_canonical_partition,
    walk_tree_partition, Digraph, EdgeRootedGraph, Graph,
};
use symprod::linalg::{
    default_tol, evaluate, rotation_matrix, spectrum, Matrix, DEFAULT_RESIDUAL_TOL,
};
use symprod::positivity::{
    default_epsilon, find_sun_block, glued_hom_via_transfer, random_rational_target,
    rational_seed_matrix, sun_negativity_check, t_gsquare, CounterexampleTarget,
};
use symprod::witness::{
    find_witness, psd_scalar_witness, random_assignment, structured_witness, verify_witness,
    SearchOptions, Tolerances, WitnessKind,
};
use symprod::word::{parse_word, Factor, Marker, VarId, Variable, Word};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

const NONE: &[&str] = &[];

type ReferenceCase = (&'static str, &'static [&'static str], Verdict, Option<usize>, Option<&'static str>);

fn reference_examples() -> Outcome {
    let cases: [ReferenceCase; 3] = [
        ("A B B^T A^T", NONE, Verdict::Symmetric, Some(0), Some("A B")),
        ("B^T C C^T B A A^T", NONE, Verdict::Symmetric, Some(5), Some("A^T B^T C")),
        ("X1 X2", &["X1", "X2"], Verdict::NotRealEigenvalued, None, None),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (text, sym, verdict, shift, half) in cases {
        let t = Instant::now();
        let w = parse_word(text, sym).expect("parses");
        let c = classify(&w);
        let elapsed = t.elapsed();
        let half_str = c.half.as_ref().map(Word::product_string);
        let good = c.verdict == verdict
            && c.shift == shift
            && half_str.as_deref() == half
            && elapsed < Duration::from_millis(1);
        ok &= good;
        notes.push(format!(
            "{text}: {:?} shift {:?} L {:?} in {:?}",
            c.verdict, c.shift, half_str, elapsed
        ));
    }
    outcome(ok, notes.join("; "))
}

fn trichotomy() -> Outcome {
    let t = Instant::now();
    let words = common::word_corpus(6);
    let failures: Vec<String> = words
        .par_iter()
        .filter_map(|w| {
            let c = classify(w);
            match c.verdict {
                Verdict::Symmetric | Verdict::SymTimesPsd => {
                    for trial in 0..1000u64 {
                        let dim = 2 + (trial % 2) as usize;
                        let a = random_assignment(w, dim, 0, trial);
                        let p = evaluate(w, &a).expect("evaluates");
                        let s = spectrum(&p, DEFAULT_RESIDUAL_TOL).expect("spectrum");
                        let tol = default_tol(&p);
                        if s.max_imag() > tol {
                            return Some(format!("{w}: |Im| {:.2e} > {tol:.2e}", s.max_imag()));
                        }
                        if c.verdict == Verdict::Symmetric && s.min_real() < -tol {
                            return Some(format!("{w}: Re {:.2e} < -{tol:.2e}", s.min_real()));
                        }
                    }
                    None
                }
                Verdict::NotRealEigenvalued => {
                    let opts = SearchOptions {
                        dims: vec![2, 3],
                        trials: 10_000,
                        seed: 0,
                        tol: Tolerances::default(),
                    };
                    match find_witness(w, &opts) {
                        Ok(Some(r)) => {
                            let v = verify_witness(w, &r, &Tolerances::default()).expect("verifies");
                            (!v.passed).then(|| format!("{w}: witness does not verify"))
                        }
                        _ => Some(format!("{w}: no witness")),
                    }
                }
            }
        })
        .collect();
    let elapsed = t.elapsed();
    let counts = words.iter().fold([0usize; 3], |mut acc, w| {
        acc[classify(w).verdict as usize] += 1;
        acc
    });
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(600),
        format!(
            "{} words ({} symmetric, {} sym-times-psd, {} not real-eigenvalued), {} failures{} in {:.1?}",
            words.len(),
            counts[0],
            counts[1],
            counts[2],
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            elapsed
        ),
    )
}

fn rotation_anchors() -> Outcome {
    let mut worst_trace: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    for k in 1..=6u32 {
        let m = rotation_matrix(PI / (2.0 * k as f64));
        worst_trace = worst_trace.max((m.pow(2 * k).trace() + 2.0).abs());
        let s = spectrum(&m.pow(k), DEFAULT_RESIDUAL_TOL).expect("spectrum");
        let dist = |target: f64| {
            s.eigenvalues
                .iter()
                .map(|z| (z.re.powi(2) + (z.im - target).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        };
        worst_eig = worst_eig.max(dist(1.0)).max(dist(-1.0));
    }
    outcome(
        worst_trace <= 1e-12 && worst_eig <= 1e-10,
        format!("max |tr + 2| = {worst_trace:.1e}, max distance to +-i = {worst_eig:.1e}"),
    )
}

fn sym_pair_anchor() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [2usize, 4, 6] {
        let theta = PI / (2.0 * k as f64);
        let (c, s) = (theta.cos(), theta.sin());
        let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]);
        let b = Matrix::from_rows(vec![vec![c, s], vec![s, -c]]);
        let p = a.mul(&b).pow(k as u32 / 2);
        let spec = spectrum(&p, DEFAULT_RESIDUAL_TOL).expect("spectrum");
        let text = vec!["X Y"; k / 2].join(" ");
        let w = parse_word(&text, &["X", "Y"]).expect("parses");
        let r = structured_witness(&w).expect("template").expect("pair template applies");
        let same = r.kind == WitnessKind::SymPair
            && r.assignment["X"].max_abs_diff(&a) < 1e-15
            && r.assignment["Y"].max_abs_diff(&b) < 1e-15;
        let z = spec
            .eigenvalues
            .iter()
            .max_by(|x, y| x.im.partial_cmp(&y.im).expect("finite"))
            .copied()
            .expect("two eigenvalues");
        ok &= spec.max_imag() > 0.1 && same;
        notes.push(format!("k={k}: eigenvalue {:.6}{:+.6}i, template matches {same}", z.re, z.im));
    }
    outcome(ok, notes.join("; "))
}

fn scalar_witnesses() -> Outcome {
    let words: Vec<Word> = common::word_corpus(6)
        .into_iter()
        .filter(|w| classify(w).verdict == Verdict::SymTimesPsd)
        .collect();
    let minus_one = Matrix::from_rows(vec![vec![-1.0]]);
    let bad = words
        .iter()
        .filter(|w| match psd_scalar_witness(w) {
            Ok(Some(r)) => {
                r.kind != WitnessKind::Scalar || evaluate(w, &r.assignment).ok() != Some(minus_one.clone())
            }
            _ => true,
        })
        .count();
    outcome(bad == 0, format!("{} sym-times-psd words, {bad} without product (-1)", words.len()))
}

fn transfer_oracle() -> Outcome {
    let mut rng = common::rng(6);
    let mut mismatches = 0;
    let mut nonzero = 0;
    for _ in 0..50 {
        let blocks = rng.gen_range(2..=4);
        let fs: Vec<EdgeRootedGraph> = (0..blocks)
            .map(|_| {
                let n = rng.gen_range(2..=4);
                common::random_block(&mut rng, n)
            })
            .collect();
        let n = rng.gen_range(1..=4);
        let h = common::rational_target(&mut rng, n);
        let via = glued_hom_via_transfer(&fs, &h).expect("transfer");
        let brute = hom_count(&glue_cycle(&fs).expect("glues").graph, &h).expect("brute force");
        if via != brute {
            mismatches += 1;
        }
        if !via.is_zero() {
            nonzero += 1;
        }
    }
    outcome(mismatches == 0, format!("50 instances, {mismatches} mismatches, {nonzero} non-zero values"))
}

fn directed_cycles() -> Outcome {
    let mut rng = common::rng(7);
    let mut mismatches = 0;
    for k in 3..=6usize {
        let c = Digraph::directed_cycle(k);
        for _ in 0..20 {
            let n = rng.gen_range(1..=5);
            let h = common::rational_digraph(&mut rng, n);
            let hom = hom_count_directed(&c, &h).expect("count");
            if hom != h.matrix().pow(k as u32).trace() {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("80 digraphs, {mismatches} mismatches"))
}

fn gsquare_positivity() -> Outcome {
    let words: Vec<Word> = common::word_corpus(4)
        .into_iter()
        .filter(|w| classify(w).verdict == Verdict::Symmetric)
        .collect();
    let zero = BigRational::zero();
    let failures: usize = words
        .par_iter()
        .map(|w| {
            let family: BTreeMap<String, EdgeRootedGraph> = w
                .vars()
                .iter()
                .map(|v| (v.name.clone(), EdgeRootedGraph::triangle()))
                .collect();
            (0..100)
                .filter(|&i| {
                    let h = random_rational_target(4, 8, i);
                    t_gsquare(w, &family, &h).expect("evaluates") < zero
                })
                .count()
        })
        .sum();
    outcome(
        failures == 0 && !words.is_empty(),
        format!("{} symmetric words x 100 targets, {failures} negative values", words.len()),
    )
}

fn sun_certificate() -> Outcome {
    let t = Instant::now();
    let Some(sample) = find_sun_block(8..=12, 0.5, 0, 100_000).expect("sampling") else {
        return outcome(false, "no admissible block found");
    };
    let f = &sample.f;
    let eps = default_epsilon(f, 2, 3);
    let target =
        CounterexampleTarget::rational(f, 2, 3, eps, rational_seed_matrix(2)).expect("target");
    let r = sun_negativity_check(&target, true).expect("evaluates");
    let tally = r.tally.as_ref().expect("tally requested");
    let elapsed = t.elapsed();
    let ok = r.negative
        && tally.aligned == tally.aligned_expected
        && tally.aligned_weights_are_m_entries
        && tally.max_misaligned <= tally.misaligned_bound
        && elapsed < Duration::from_secs(1800);
    let digits = r.value.numer().to_string().len();
    outcome(
        ok,
        format!(
            "block n={} e={} (sample {}), H has {} vertices, hom < 0 with {digits}-digit numerator, aligned sum {} = c tr(M^4) with c={}, in {:.1?}",
            f.n(),
            f.graph.edge_count(),
            sample.index,
            target.n(),
            tally.aligned,
            r.multiplicity,
            elapsed
        ),
    )
}

fn rigidity_pipeline() -> Outcome {
    let found = sample_rigid(10, 0.5, 1, 50).expect("sampling");
    let Some(s) = found else {
        let first = sample_rigid(10, 0.5, 1, 10_000)
            .expect("sampling")
            .map(|s| s.index.to_string())
            .unwrap_or_else(|| "none".into());
        return outcome(
            false,
            format!("no rigid graph among the first 50 samples of G(10, 1/2) at seed 1 (first rigid sample index: {first})"),
        );
    };
    let ends = endomorphisms(&s.graph).expect("enumerates").len();
    let (a, b) = s.graph.edges()[0];
    let f = EdgeRootedGraph::new(s.graph.clone(), a, b).expect("rooted");
    let sym = hom_sym_check(&f).expect("enumerates");
    outcome(
        ends == 1 && sym,
        format!("sample {} rigid (|End| = {ends}), symmetrization check {sym}", s.index),
    )
}

fn same_class_invariants(g: &Graph, classes: &[Vec<usize>]) -> bool {
    classes.iter().all(|class| {
        let d = g.degree(class[0]);
        let nds = neighborhood_degree_sequence(g, class[0]);
        class[1..]
            .iter()
            .all(|&v| g.degree(v) == d && neighborhood_degree_sequence(g, v) == nds)
    })
}

fn walk_tree_oracle() -> Outcome {
    let t = Instant::now();
    let exhaustive: Vec<(usize, u64)> = (1..=7usize)
        .flat_map(|n| (0..1u64 << (n * (n - 1) / 2)).map(move |m| (n, m)))
        .collect();
    let (checked, bad) = exhaustive
        .par_iter()
        .map(|&(n, mask)| {
            let g = common::graph_from_mask(n, mask);
            if !g.is_connected() {
                return (0usize, 0usize);
            }
            let p = walk_tree_partition(&g);
            let ok = p == walk_tree_canonical_partition(&g, 2 * n) && same_class_invariants(&g, &p.classes);
            (1, usize::from(!ok))
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let random_bad = (0..200u64)
        .filter(|&i| {
            let n = 1 + (i % 10) as usize;
            let g = random_graph(n, 0.5, 1000 + i);
            let p = walk_tree_partition(&g);
            !(p == walk_tree_canonical_partition(&g, 2 * n) && same_class_invariants(&g, &p.classes))
        })
        .count();
    outcome(
        bad == 0 && random_bad == 0,
        format!(
            "{checked} connected labelled graphs on <= 7 vertices ({bad} disagreements), 200 random graphs ({random_bad} disagreements) in {:.1?}",
            t.elapsed()
        ),
    )
}

fn colour(code: usize) -> DirectedColor {
    let o = match code % 3 {
        0 => Orientation::Forward,
        1 => Orientation::Backward,
        _ => Orientation::Neutral,
    };
    DirectedColor::new(o, code / 3)
}

/// `(rotation hypotheses, rotation violations, reflection hypotheses,
/// reflection violations)`.
fn cycle_counts(c: &ColoredCycle) -> [usize; 4] {
    let n = c.n();
    let mut out = [0; 4];
    for i in 0..n {
        for j in 0..n {
            if check_rotation_hypothesis(c, i, j) {
                out[0] += 1;
                out[1] += usize::from(!rotation_conclusion(c, i, j));
            }
        }
        if check_reflection_hypothesis(c, i) {
            out[2] += 1;
            out[3] += usize::from(!reflection_conclusion(c, i));
        }
    }
    out
}

fn add4(a: [usize; 4], b: [usize; 4]) -> [usize; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn cycle_symmetries() -> Outcome {
    let exhaustive: Vec<ColoredCycle> = (1..=5u32)
        .flat_map(|n| {
            (0..6usize.pow(n)).map(move |mut code| {
                ColoredCycle::new(
                    (0..n)
                        .map(|_| {
                            let c = colour(code % 6);
                            code /= 6;
                            c
                        })
                        .collect(),
                )
            })
        })
        .collect();
    let ex = exhaustive
        .par_iter()
        .map(cycle_counts)
        .reduce(|| [0; 4], add4);
    let sampled = (0..100_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = common::rng(i);
            let n = rng.gen_range(1..=8);
            let c = ColoredCycle::new((0..n).map(|_| colour(rng.gen_range(0..6))).collect());
            cycle_counts(&c)
        })
        .reduce(|| [0; 4], add4);
    let total = add4(ex, sampled);
    outcome(
        total[1] == 0 && total[3] == 0,
        format!(
            "{} exhaustive + 100000 sampled cycles: {} rotation hypotheses ({} violations), {} reflection hypotheses ({} violations)",
            exhaustive.len(),
            total[0],
            total[1],
            total[2],
            total[3]
        ),
    )
}

/// `(A A^T)^(k/2)` with its last factor replaced by `B`.
fn near_symmetric_word(k: usize) -> Word {
    let vars = vec![
        Variable {
            name: "A".into(),
            symmetric: false,
        },
        Variable {
            name: "B".into(),
            symmetric: false,
        },
    ];
    let mut factors: Vec<Factor> = (0..k)
        .map(|i| Factor::new(VarId(0), if i % 2 == 0 { Marker::Plain } else { Marker::Transpose }))
        .collect();
    factors[k - 1] = Factor::new(VarId(1), Marker::Plain);
    Word::new(factors, vars).expect("valid")
}

fn performance() -> Outcome {
    let w = near_symmetric_word(10_000);
    let t = Instant::now();
    let c = classify(&w);
    let big = t.elapsed();
    let counts: Vec<u64> = (7..=10).map(|e| classify(&near_symmetric_word(1 << e)).comparisons).collect();
    let ratios: Vec<f64> = counts.windows(2).map(|p| p[1] as f64 / p[0] as f64).collect();
    let quadratic = ratios.iter().all(|&r| (4.0 / 1.5..=4.0 * 1.5).contains(&r));
    outcome(
        c.verdict == Verdict::NotRealEigenvalued && big < Duration::from_secs(1) && quadratic,
        format!(
            "degree 10^4 in {big:.1?} ({} comparisons); comparisons at 2^7..2^10 = {counts:?}, doubling ratios {:?}",
            c.comparisons,
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("reference products decide correctly", reference_examples),
        ("trichotomy cross-validation", trichotomy),
        ("rotation anchors", rotation_anchors),
        ("sym-pair anchor", sym_pair_anchor),
        ("scalar PSD violation", scalar_witnesses),
        ("transfer-matrix oracle equivalence", transfer_oracle),
        ("directed-cycle identity", directed_cycles),
        ("G^2 positivity", gsquare_positivity),
        ("sun non-positivity certificate", sun_certificate),
        ("rigidity pipeline", rigidity_pipeline),
        ("walk-tree oracle", walk_tree_oracle),
        ("cycle-symmetry propositions", cycle_symmetries),
        ("decider performance", performance),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{tag}] {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("all 13 criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
