//! One line per acceptance criterion, then a single assertion that all of
//! them passed.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use graphconf::complex::{build_abrams_oracle, build_model, subcomplex_supported_in, BuildOptions, CubeComplex};
use graphconf::graph::{
    glue, make_cycle_graph, make_h_graph, make_path_graph, make_star, make_two_center_tree, Correspondence,
    FamilyDescriptor, Graph, Subgraph,
};
use graphconf::homology::{homology_groups, induced_inclusion_map, HomologyGroup};
use graphconf::lab::{dimension_polynomial_check, generation_degree_check, verify_tree_generators};
use graphconf::rep::{character_report, partitions, stability_verdict, CharacterTable};

type Check = std::result::Result<String, String>;

fn opts() -> BuildOptions {
    BuildOptions::default()
}

fn none() -> BTreeSet<usize> {
    BTreeSet::new()
}

fn model(g: &Graph, n: usize) -> CubeComplex {
    build_model(g, n, &none(), &opts()).expect("model within budget")
}

fn betti(c: &CubeComplex) -> Vec<usize> {
    homology_groups(c).into_iter().map(|h| h.betti).collect()
}

fn at(v: &[usize], q: usize) -> usize {
    v.get(q).copied().unwrap_or(0)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn triangle() -> Graph {
    make_cycle_graph(3).unwrap()
}

fn star_wedge_interval() -> Graph {
    glue(&make_star(3).unwrap(), &make_path_graph(1).unwrap(), &Correspondence::point(0, 0))
        .unwrap()
        .graph
}

fn corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = vec![
        ("interval".into(), make_path_graph(1).unwrap()),
        ("path(3)".into(), make_path_graph(3).unwrap()),
        ("Star_3".into(), make_star(3).unwrap()),
        ("Star_4".into(), make_star(4).unwrap()),
        ("Star_5".into(), make_star(5).unwrap()),
        ("H".into(), make_h_graph()),
        ("cycle(3)".into(), make_cycle_graph(3).unwrap()),
        ("cycle(4)".into(), make_cycle_graph(4).unwrap()),
        ("Star_3 v interval".into(), star_wedge_interval()),
    ];
    for k in 1..=4 {
        let r = FamilyDescriptor::interval(triangle()).unwrap().realize(&[k]).unwrap();
        out.push((format!("interval family k={k}"), r.graph.normalize_loops().0));
        let r = FamilyDescriptor::circle(triangle()).unwrap().realize(&[k]).unwrap();
        out.push((format!("circle family k={k}"), r.graph.normalize_loops().0));
    }
    out
}

struct CorpusRun {
    name: String,
    n: usize,
    sound: bool,
    model: Vec<HomologyGroup>,
    oracle: Vec<HomologyGroup>,
}

fn corpus_runs() -> Vec<CorpusRun> {
    let jobs: Vec<(String, Graph, usize)> = corpus()
        .into_iter()
        .flat_map(|(name, g)| (1..=3).map(move |n| (name.clone(), g.clone(), n)))
        .collect();
    jobs.into_par_iter()
        .map(|(name, g, n)| {
            let c = model(&g, n);
            let o = build_abrams_oracle(&g, n, &opts()).expect("oracle within budget");
            CorpusRun {
                name,
                n,
                sound: c.boundary_squares_to_zero() && o.boundary_squares_to_zero(),
                model: homology_groups(&c),
                oracle: homology_groups(&o),
            }
        })
        .collect()
}

fn criterion_1(runs: &[CorpusRun], secs: f64) -> Check {
    let bad: Vec<String> = runs.iter().filter(|r| !r.sound).map(|r| format!("{} n={}", r.name, r.n)).collect();
    ensure(bad.is_empty(), || format!("boundary does not square to zero for {bad:?}"))?;
    ensure(secs < 300.0, || format!("corpus took {secs:.0}s"))?;
    Ok(format!("∂∂ = 0 on {} model and oracle complexes, built in {secs:.1}s", 2 * runs.len()))
}

fn criterion_2() -> Check {
    let c = build_model(&make_path_graph(1).unwrap(), 2, &BTreeSet::from([0, 1]), &opts()).map_err(|e| e.to_string())?;
    let h = homology_groups(&c);
    let f = c.f_vector();
    ensure(f == vec![10, 12, 2], || format!("f-vector {f:?}"))?;
    ensure(c.euler_characteristic() == 0, || format!("χ = {}", c.euler_characteristic()))?;
    ensure(h.len() == 3 && h[0].betti == 1 && h[1].betti == 1 && h[2].betti == 0, || format!("homology {h:?}"))?;
    ensure(h.iter().all(|g| g.torsion.is_empty()), || "torsion present".into())?;
    Ok("f = (10, 12, 2), χ = 0, b = (1, 1, 0), torsion-free".into())
}

fn criterion_3(runs: &[CorpusRun]) -> Check {
    let mut compared = 0;
    for r in runs {
        for q in 0..=2 {
            let zero = HomologyGroup {
                betti: 0,
                torsion: Vec::new(),
            };
            let (a, b) = (r.model.get(q).unwrap_or(&zero), r.oracle.get(q).unwrap_or(&zero));
            ensure(a.betti == b.betti, || format!("{} n={} q={q}: {} vs {}", r.name, r.n, a.betti, b.betti))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} (graph, n, q) triples agree"))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn criterion_4() -> Check {
    let interval = make_path_graph(1).unwrap();
    for n in 1..=4 {
        let expected: Vec<usize> = std::iter::once(factorial(n)).collect();
        for (kind, b) in [
            ("model", betti(&model(&interval, n))),
            ("oracle", betti(&build_abrams_oracle(&interval, n, &opts()).unwrap())),
        ] {
            let trimmed: Vec<usize> = b.iter().copied().filter(|&x| x != 0).collect();
            ensure(at(&b, 0) == expected[0] && trimmed.len() == 1, || format!("interval n={n} {kind}: {b:?}"))?;
        }
    }
    for m in [3, 4] {
        let cycle = make_cycle_graph(m).unwrap();
        for n in 1..=3 {
            let a = betti(&model(&cycle, n));
            let b = betti(&build_abrams_oracle(&cycle, n, &opts()).unwrap());
            let e = factorial(n - 1);
            ensure(a == b, || format!("cycle({m}) n={n}: models disagree {a:?} vs {b:?}"))?;
            ensure(at(&a, 0) == e && at(&a, 1) == e && a.iter().skip(2).all(|&x| x == 0), || {
                format!("cycle({m}) n={n}: {a:?}")
            })?;
        }
    }
    Ok("interval b0 = n! for n <= 4; cycle b0 = b1 = (n-1)! for n <= 3, both models".into())
}

fn criterion_5() -> Check {
    let jobs: Vec<(String, Graph, usize)> = corpus()
        .into_iter()
        .flat_map(|(name, g)| (1..=2).map(move |n| (name.clone(), g.clone(), n)))
        .collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|(name, g, n)| {
            let a = betti(&model(g, *n));
            let b = betti(&model(&g.subdivide(2).unwrap(), *n));
            (a != b).then(|| format!("{name} n={n}: {a:?} vs {b:?}"))
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} complexes unchanged by subdivision", jobs.len()))
}

fn criterion_6() -> Check {
    let trees = [
        ("Star_3", make_star(3).unwrap()),
        ("Star_4", make_star(4).unwrap()),
        ("Star_5", make_star(5).unwrap()),
        ("H", make_h_graph()),
        ("spider", make_two_center_tree(3, 2).unwrap()),
    ];
    let jobs: Vec<(&str, &Graph, usize, usize)> = trees
        .iter()
        .flat_map(|(name, g)| (1..=3).flat_map(move |n| (0..=2).map(move |q| (*name, g, n, q))))
        .collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(name, g, n, q)| match verify_tree_generators(g, n, q) {
            Ok(true) => None,
            Ok(false) => Some(format!("{name} n={n} q={q}")),
            Err(e) => Some(format!("{name} n={n} q={q}: {e}")),
        })
        .collect();
    ensure(bad.is_empty(), || format!("not generated: {}", bad.join(", ")))?;
    Ok(format!("{} (tree, n, q) cases generated over Z", jobs.len()))
}

fn check_at(f: &FamilyDescriptor, n: usize, q: usize, d: usize, k: usize) -> std::result::Result<graphconf::lab::GenerationReport, String> {
    let sizes = vec![k; f.arity()];
    let r = generation_degree_check(f, n, q, d, &sizes, &opts()).map_err(|e| e.to_string())?;
    ensure(r.over_z, || format!("not generated over Z at d={d}, K={k} (missing rank {})", r.verdicts.iter().find(|v| v.degree == d).map_or(0, |v| v.missing_rank)))?;
    Ok(r)
}

fn criterion_7() -> Check {
    let f = FamilyDescriptor::star_family();
    let mut d_mins = Vec::new();
    for k in [5, 6] {
        for d in [4, 5] {
            let r = check_at(&f, 2, 1, d, k)?;
            d_mins.push(r.d_min.expect("passing degree has a d_min"));
        }
    }
    ensure(d_mins.iter().all(|&d| d <= 4), || format!("d_min {d_mins:?}"))?;
    Ok(format!("passes at d = 4 and 5 for K = 5, 6; d_min = {}", d_mins[0]))
}

fn criterion_8() -> Check {
    let f = FamilyDescriptor::wedge(triangle(), vec![(make_path_graph(1).unwrap(), Correspondence::point(0, 0))])
        .map_err(|e| e.to_string())?;
    let r = check_at(&f, 2, 1, 6, 6)?;
    let d_min = r.d_min.expect("passing degree has a d_min");
    ensure(d_min <= 6 && r.bound_passes, || format!("d_min {d_min}"))?;
    Ok(format!("passes at d = 6, K = 6; d_min = {d_min}"))
}

fn criterion_9() -> Check {
    let tripod = make_star(3).unwrap();
    // tripod edge 0 = (0, 1) onto the middle edge (1, 2) of the path
    let glue_along = Correspondence {
        vertices: vec![(0, 1), (1, 2)],
        edges: vec![(0, 1)],
    };
    let f = FamilyDescriptor::wedge(make_path_graph(3).unwrap(), vec![(tripod, glue_along)]).map_err(|e| e.to_string())?;
    let r = check_at(&f, 2, 1, 4, 5)?;
    Ok(format!("passes at d = 4, K = 5; d_min = {}", r.d_min.expect("passing")))
}

fn criterion_10() -> Check {
    let f = FamilyDescriptor::interval(triangle()).map_err(|e| e.to_string())?;
    let r = check_at(&f, 2, 1, 2, 4)?;
    Ok(format!("passes at d = 2, K = 4; d_min = {}", r.d_min.expect("passing")))
}

fn criterion_11() -> Check {
    let f = FamilyDescriptor::circle(triangle()).map_err(|e| e.to_string())?;
    let r = check_at(&f, 2, 1, 5, 5)?;
    let d_min = r.d_min.expect("passing degree has a d_min");
    ensure(d_min <= 5, || format!("d_min {d_min}"))?;
    Ok(format!("d_min = {d_min} <= 5 at K = 5"))
}

fn criterion_12() -> Check {
    let big = model(&star_wedge_interval(), 2);
    let star = make_star(3).unwrap();
    let sub = Subgraph::from_edges(big.graph(), 0..star.num_edges());
    let inc = subcomplex_supported_in(&big, &sub).map_err(|e| e.to_string())?;
    let b1 = at(&betti(&model(&star, 2)), 1);
    ensure(at(&betti(&inc.sub), 1) == b1, || "subcomplex differs from the star model".into())?;
    let m = induced_inclusion_map(&inc, &big, 1).map_err(|e| e.to_string())?;
    ensure(m.rank == b1 && b1 == 1, || format!("rank {} vs b1 {b1}", m.rank))?;
    Ok(format!("rank {} = b1(Conf_2(Star_3))", m.rank))
}

fn criterion_13() -> Check {
    let f = FamilyDescriptor::star_family();
    let reports = [5, 6, 7]
        .par_iter()
        .map(|&k| character_report(&f, 2, 1, &[k], &opts()))
        .collect::<graphconf::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    for r in &reports {
        let mut total = BigInt::zero();
        for m in &r.multiplicities {
            ensure(m.multiplicity >= BigInt::zero(), || format!("negative multiplicity at k={:?}", r.k))?;
            let dim = hook_length_dimension(m.padded[0].parts());
            total += &m.multiplicity * dim;
        }
        ensure(total == BigInt::from(r.betti), || format!("Σ c·dim = {total} vs betti {} at k={:?}", r.betti, r.k))?;
    }
    let v = stability_verdict(&reports).map_err(|e| e.to_string())?;
    ensure(v.stable, || format!("unstable rows {:?}", v.rows))?;
    let rows: Vec<String> = v
        .rows
        .iter()
        .map(|r| format!("{}:{}", r.unpadded[0], r.values[0]))
        .collect();
    Ok(format!("stable over k = 5..7 with multiplicities {}", rows.join(" ")))
}

fn criterion_14() -> Check {
    let f = FamilyDescriptor::star_family();
    let window = [3, 4, 5, 6, 7];
    let fit = dimension_polynomial_check(&f, 2, 1, &window, 2, 2, &opts()).map_err(|e| e.to_string())?;
    ensure(fit.fits, || format!("holdout mismatch: {:?}", fit.points))?;
    ensure(fit.degree().is_some_and(|d| d <= 3), || "degree above 3".into())?;
    // the Betti numbers themselves, from the other model
    for &(k, b) in &fit.points {
        let o = betti(&build_abrams_oracle(&make_star(k).unwrap(), 2, &opts()).unwrap());
        ensure(at(&o, 1) == b, || format!("k={k}: model {b}, oracle {}", at(&o, 1)))?;
    }
    let coeffs: Vec<String> = fit.coefficients.iter().map(ToString::to_string).collect();
    Ok(format!("b1 = {:?} fits coefficients [{}] exactly", fit.points.iter().map(|p| p.1).collect::<Vec<_>>(), coeffs.join(", ")))
}

fn hook_length_dimension(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    let mut hooks = BigInt::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r > j).count();
            hooks *= arm + leg + 1;
        }
    }
    (1..=n).fold(BigInt::one(), |a, x| a * x) / hooks
}

fn criterion_15() -> Check {
    for k in 1..=7 {
        let t = CharacterTable::new(k);
        let p = t.partitions.len();
        let order: BigInt = (1..=k).fold(BigInt::one(), |a, x| a * x);
        for a in 0..p {
            for b in 0..p {
                let rows: BigInt = (0..p).map(|c| &t.class_sizes[c] * &t.values[a][c] * &t.values[b][c]).sum();
                let expect = if a == b { order.clone() } else { BigInt::zero() };
                ensure(rows == expect, || format!("k={k}: row relation fails at ({a}, {b})"))?;
                // Σ_λ χ_λ(μ) χ_λ(ν) = δ · |centralizer of μ|
                let cols: BigInt = (0..p).map(|l| &t.values[l][a] * &t.values[l][b]).sum();
                let expect = if a == b { &order / &t.class_sizes[a] } else { BigInt::zero() };
                ensure(cols == expect, || format!("k={k}: column relation fails at ({a}, {b})"))?;
            }
        }
        let regular: Vec<BigInt> = t
            .partitions
            .iter()
            .map(|mu| if mu.parts().iter().all(|&x| x == 1) { order.clone() } else { BigInt::zero() })
            .collect();
        for (lambda, c) in t.decompose(&regular).map_err(|e| e.to_string())? {
            let dim = hook_length_dimension(lambda.parts());
            ensure(c == dim, || format!("k={k}: c_{lambda} = {c}, dim = {dim}"))?;
        }
        ensure(partitions(k).len() == p, || "partition count".into())?;
    }
    Ok("row and column relations and regular decomposition hold for k <= 7".into())
}

/// Bypasses the test harness's output capture so the lines always show.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn evaluate(id: usize, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            report(&format!("criterion {id:>2}: PASS ({secs:.1}s) {detail}"));
            true
        }
        Err(detail) => {
            report(&format!("criterion {id:>2}: FAIL ({secs:.1}s) {detail}"));
            false
        }
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let runs = corpus_runs();
    let corpus_secs = start.elapsed().as_secs_f64();
    let results = [
        evaluate(1, || criterion_1(&runs, corpus_secs)),
        evaluate(2, criterion_2),
        evaluate(3, || criterion_3(&runs)),
        evaluate(4, criterion_4),
        evaluate(5, criterion_5),
        evaluate(6, criterion_6),
        evaluate(7, criterion_7),
        evaluate(8, criterion_8),
        evaluate(9, criterion_9),
        evaluate(10, criterion_10),
        evaluate(11, criterion_11),
        evaluate(12, criterion_12),
        evaluate(13, criterion_13),
        evaluate(14, criterion_14),
        evaluate(15, criterion_15),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
