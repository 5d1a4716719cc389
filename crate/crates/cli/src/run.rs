use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use graphconf::cache::ComplexCache;
use graphconf::complex::{build_abrams_oracle, build_model, BuildOptions, CubeComplex, ModelKind};
use graphconf::graph::{FamilyDescriptor, Graph};
use graphconf::homology::{homology_groups, HomologyGroup, HomologyReport};
use graphconf::lab::{dimension_polynomial_check, generation_degree_check, tree_generator_report};
use graphconf::rep::{character_report, stability_verdict, CharacterReport, StabilityVerdict};
use graphconf::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{parse_window, Command, GenerationArgs, HomologyArgs, ModelArgs, OracleArgs, PolyArgs, StabilityArgs, TreeArgs};

/// The outcome of a command: a JSON report, a CSV table, and whether the
/// checks it asserts hold.
pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
}

pub struct Context {
    pub cache: Option<ComplexCache>,
    pub opts: BuildOptions,
}

impl Context {
    fn complex(&self, g: &Graph, n: usize, sinks: &BTreeSet<usize>, kind: ModelKind) -> Result<CubeComplex> {
        match &self.cache {
            Some(cache) => {
                let (c, status) = cache.load_or_build(g, n, sinks, kind, &self.opts)?;
                log::info!("cache {status:?} in {}", cache.dir().display());
                Ok(c)
            }
            None => match kind {
                ModelKind::Cubical => build_model(g, n, sinks, &self.opts),
                ModelKind::AbramsOracle => build_abrams_oracle(g, n, &self.opts),
            },
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_json(&read(path)?).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn read_family(path: &Path) -> Result<FamilyDescriptor> {
    FamilyDescriptor::from_json(&read(path)?).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub fn run(command: &Command, ctx: &Context) -> Result<Report> {
    match command {
        Command::Model(a) => model(a, ctx),
        Command::Homology(a) => homology(a, ctx),
        Command::OracleCompare(a) => oracle_compare(a, ctx),
        Command::GenerationCheck(a) => generation(a, ctx),
        Command::RepStability(a) => rep_stability(a, ctx),
        Command::TreeGenerators(a) => tree_generators(a, ctx),
        Command::PolyFit(a) => poly_fit(a, ctx),
    }
}

fn load_model(a: &ModelArgs, ctx: &Context) -> Result<(Graph, BTreeSet<usize>, ModelKind, CubeComplex)> {
    let g = read_graph(&a.input.graph)?;
    let sinks: BTreeSet<usize> = a.sinks.iter().copied().collect();
    if let Some(v) = sinks.iter().find(|&&v| v >= g.num_vertices()) {
        return Err(Error::InvalidArgument(format!("sink {v} is not a vertex")));
    }
    let kind = if a.oracle {
        if !sinks.is_empty() {
            return Err(Error::InvalidArgument("the discretized model has no sinks".into()));
        }
        ModelKind::AbramsOracle
    } else {
        ModelKind::Cubical
    };
    let c = ctx.complex(&g, a.input.n, &sinks, kind)?;
    Ok((g, sinks, kind, c))
}

fn model(a: &ModelArgs, ctx: &Context) -> Result<Report> {
    let (g, sinks, kind, c) = load_model(a, ctx)?;
    let f = c.f_vector();
    let sound = c.boundary_squares_to_zero();
    Ok(Report {
        command: "model",
        json: json!({
            "n": a.input.n,
            "sinks": sinks,
            "kind": kind,
            "vertices": g.num_vertices(),
            "edges": g.num_edges(),
            "f_vector": f,
            "euler_characteristic": c.euler_characteristic(),
            "boundary_squares_to_zero": sound,
        }),
        header: header(&["q", "cells"]),
        rows: f.iter().enumerate().map(|(q, x)| vec![q.to_string(), x.to_string()]).collect(),
        passed: sound,
    })
}

fn group_report(q: usize, h: &HomologyGroup, cells: &[usize]) -> HomologyReport {
    HomologyReport {
        q,
        betti: h.betti,
        torsion: h.torsion.clone(),
        cells: cells.to_vec(),
    }
}

fn homology(a: &HomologyArgs, ctx: &Context) -> Result<Report> {
    let (_, _, _, c) = load_model(&a.model, ctx)?;
    let groups = homology_groups(&c);
    let f = c.f_vector();
    let zero = HomologyGroup {
        betti: 0,
        torsion: Vec::new(),
    };
    let reports: Vec<HomologyReport> = match a.q {
        Some(q) => vec![group_report(q, groups.get(q).unwrap_or(&zero), &f)],
        None => groups.iter().enumerate().map(|(q, h)| group_report(q, h, &f)).collect(),
    };
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.q.to_string(),
                r.betti.to_string(),
                joined(&r.torsion),
                f.get(r.q).copied().unwrap_or(0).to_string(),
            ]
        })
        .collect();
    let json = match a.q {
        Some(_) => to_value(&reports[0]),
        None => to_value(&reports),
    };
    Ok(Report {
        command: "homology",
        json,
        header: header(&["q", "betti", "torsion", "cells"]),
        rows,
        passed: true,
    })
}

fn oracle_compare(a: &OracleArgs, ctx: &Context) -> Result<Report> {
    let g = read_graph(&a.input.graph)?;
    let none = BTreeSet::new();
    let m = homology_groups(&ctx.complex(&g, a.input.n, &none, ModelKind::Cubical)?);
    let o = homology_groups(&ctx.complex(&g, a.input.n, &none, ModelKind::AbramsOracle)?);
    let zero = HomologyGroup {
        betti: 0,
        torsion: Vec::new(),
    };
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut all = true;
    for q in 0..=a.max_q {
        let (x, y) = (m.get(q).unwrap_or(&zero), o.get(q).unwrap_or(&zero));
        let ok = x == y;
        all &= ok;
        rows.push(json!({
            "q": q,
            "model_betti": x.betti,
            "oracle_betti": y.betti,
            "model_torsion": to_value(x)["torsion"],
            "oracle_torsion": to_value(y)["torsion"],
            "match": ok,
        }));
        table.push(vec![
            q.to_string(),
            x.betti.to_string(),
            y.betti.to_string(),
            joined(&x.torsion),
            joined(&y.torsion),
            ok.to_string(),
        ]);
    }
    Ok(Report {
        command: "oracle-compare",
        json: json!({
            "n": a.input.n,
            "max_q": a.max_q,
            "rows": rows,
            "verdict": if all { "MATCH" } else { "MISMATCH" },
        }),
        header: header(&["q", "model_betti", "oracle_betti", "model_torsion", "oracle_torsion", "match"]),
        rows: table,
        passed: all,
    })
}

fn sizes_for(f: &FamilyDescriptor, sizes: &[usize]) -> Result<Vec<usize>> {
    match (sizes.len(), f.arity()) {
        (1, k) => Ok(vec![sizes[0]; k]),
        (a, k) if a == k => Ok(sizes.to_vec()),
        (a, k) => Err(Error::InvalidArgument(format!("{a} sizes given for a family with {k} coordinates"))),
    }
}

fn generation(a: &GenerationArgs, ctx: &Context) -> Result<Report> {
    let f = read_family(&a.input.family)?;
    let sizes = sizes_for(&f, &a.sizes)?;
    let r = generation_degree_check(&f, a.input.n, a.input.q, a.degree, &sizes, &ctx.opts)?;
    let rows = r
        .verdicts
        .iter()
        .map(|v| {
            vec![
                v.degree.to_string(),
                v.supports.to_string(),
                v.candidates.to_string(),
                v.over_q.to_string(),
                v.over_z.to_string(),
                v.missing_rank.to_string(),
            ]
        })
        .collect();
    if r.over_q && !r.over_z {
        log::warn!("generated over Q but not over Z at degree {}: torsion obstruction", r.degree);
    }
    Ok(Report {
        command: "generation-check",
        json: to_value(&r),
        header: header(&["degree", "supports", "candidates", "over_q", "over_z", "missing_rank"]),
        rows,
        passed: r.bound_passes,
    })
}

#[derive(Serialize)]
struct StabilityOutput {
    n: usize,
    q: usize,
    reports: Vec<CharacterReport>,
    verdict: StabilityVerdict,
}

fn rep_stability(a: &StabilityArgs, ctx: &Context) -> Result<Report> {
    let f = read_family(&a.input.family)?;
    let window = parse_window(&a.window).map_err(Error::InvalidArgument)?;
    let reports = window
        .iter()
        .map(|&k| character_report(&f, a.input.n, a.input.q, &vec![k; f.arity()], &ctx.opts))
        .collect::<Result<Vec<_>>>()?;
    let verdict = stability_verdict(&reports)?;
    let mut head = vec!["partition".to_string()];
    head.extend(window.iter().map(|k| format!("k={k}")));
    let rows = verdict
        .rows
        .iter()
        .map(|r| {
            let name: Vec<String> = r.unpadded.iter().map(ToString::to_string).collect();
            let mut row = vec![name.join("x")];
            row.extend(r.values.iter().map(ToString::to_string));
            row
        })
        .collect();
    let passed = verdict.stable;
    Ok(Report {
        command: "rep-stability",
        json: to_value(&StabilityOutput {
            n: a.input.n,
            q: a.input.q,
            reports,
            verdict,
        }),
        header: head,
        rows,
        passed,
    })
}

fn tree_generators(a: &TreeArgs, ctx: &Context) -> Result<Report> {
    let g = read_graph(&a.input.graph)?;
    let r = tree_generator_report(&g, a.input.n, a.q, &ctx.opts)?;
    let v = &r.verdict;
    Ok(Report {
        command: "tree-generators",
        json: to_value(&r),
        header: header(&["n", "q", "candidates", "over_q", "over_z", "missing_rank"]),
        rows: vec![vec![
            r.n.to_string(),
            r.q.to_string(),
            r.candidates.to_string(),
            v.generates_over_q.to_string(),
            v.generates_over_z.to_string(),
            v.missing_rank.to_string(),
        ]],
        passed: v.generates_over_z,
    })
}

fn poly_fit(a: &PolyArgs, ctx: &Context) -> Result<Report> {
    let f = read_family(&a.input.family)?;
    let window = parse_window(&a.window).map_err(Error::InvalidArgument)?;
    let r = dimension_polynomial_check(&f, a.input.n, a.input.q, &window, a.degree, a.holdout, &ctx.opts)?;
    let rows = r
        .points
        .iter()
        .enumerate()
        .map(|(i, &(k, b))| {
            vec![
                k.to_string(),
                b.to_string(),
                r.eval(k).to_string(),
                if i < r.fit_points { "fit" } else { "holdout" }.to_string(),
            ]
        })
        .collect();
    Ok(Report {
        command: "poly-fit",
        json: to_value(&r),
        header: header(&["k", "betti", "predicted", "role"]),
        rows,
        passed: r.fits,
    })
}
