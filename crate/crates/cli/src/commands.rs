use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use cycloschur::cyclotomic::{cyclotomic_poly, euler_phi, inverse_cyclotomic_series};
use cycloschur::reduction::{verify_theorem, StructuralMode, VerifyOptions};
use cycloschur::symfunc::{partitions_in_box, schur_at_roots};
use cycloschur::unimodular::{
    bipartite_construction, find_nonunimodular_witness, is_totally_unimodular, maximal_circuit,
    network_matrix, tensor_product, TuConfig, TuMode, DEFAULT_SUBSET_BUDGET,
    DEFAULT_WITNESS_BUDGET,
};
use cycloschur::RationalMatrix;

use crate::output::{Report, Status};

pub const DEFAULT_VERIFY_MAX_PART: usize = 6;

fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => x.into(),
        Err(_) => v.to_string().into(),
    }
}

fn joined<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn phi(n: u64, terms: usize) -> anyhow::Result<Report> {
    let p = cyclotomic_poly(n)?;
    let series = inverse_cyclotomic_series(n, terms)?;
    let coeffs = p.coeffs();
    let offending: Vec<usize> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.magnitude() > &1u32.into())
        .map(|(k, _)| k)
        .collect();
    let flat = offending.is_empty();

    let mut text = String::new();
    writeln!(text, "Phi_{n}(x) = {p}")?;
    writeln!(text, "coefficients (ascending): {}", joined(coeffs, " "))?;
    writeln!(text, "1/Phi_{n}(x) through x^{terms}: {}", joined(&series, " "))?;
    writeln!(text, "all coefficients in {{1,0,-1}}: {flat}")?;
    if !flat {
        writeln!(text, "offending degrees: {}", joined(&offending, ", "))?;
    }

    let mut csv = vec![vec!["series".into(), "degree".into(), "coefficient".into()]];
    for (k, c) in coeffs.iter().enumerate() {
        csv.push(vec!["phi".into(), k.to_string(), c.to_string()]);
    }
    for (k, c) in series.iter().enumerate() {
        csv.push(vec!["inverse".into(), k.to_string(), c.to_string()]);
    }

    Ok(Report {
        status: Status::Pass,
        json: json!({
            "command": "phi",
            "n": n,
            "degree": coeffs.len() - 1,
            "polynomial": p.to_string(),
            "coefficients": coeffs.iter().map(int).collect::<Vec<_>>(),
            "inverse_series": series.iter().map(int).collect::<Vec<_>>(),
            "flat": flat,
            "offending_degrees": offending,
        }),
        csv,
        text,
    })
}

pub fn schur_table(n: u64, max_len: usize, max_part: usize) -> anyhow::Result<Report> {
    let d = euler_phi(n)? as usize;
    if max_len > d {
        bail!(
            "max-len {max_len} exceeds phi({n}) = {d}; values are only defined for partitions \
             with at most phi(n) parts"
        );
    }
    let lambdas: Vec<_> = partitions_in_box(max_len, max_part).collect();
    let values = lambdas
        .par_iter()
        .map(|lam| schur_at_roots(n, lam))
        .collect::<Result<Vec<_>, _>>()?;

    let mut histogram: BTreeMap<BigInt, u64> = BTreeMap::new();
    for v in &values {
        *histogram.entry(v.clone()).or_insert(0) += 1;
    }
    let unit = histogram.keys().all(|v| v.magnitude() <= &1u32.into());

    let mut text = String::new();
    let mut csv = vec![vec!["lambda".to_string(), "value".to_string()]];
    let mut rows = Vec::with_capacity(values.len());
    for (lam, v) in lambdas.iter().zip(&values) {
        writeln!(text, "{lam}\t{v}")?;
        csv.push(vec![lam.to_string(), v.to_string()]);
        rows.push(json!({ "lambda": lam.parts(), "value": int(v) }));
    }
    let summary: Vec<String> = histogram.iter().map(|(v, c)| format!("{v}: {c}")).collect();
    writeln!(
        text,
        "{} partitions; values {}; all in {{-1,0,1}}: {unit}",
        values.len(),
        summary.join(", ")
    )?;

    Ok(Report {
        status: Status::Pass,
        json: json!({
            "command": "schur-table",
            "n": n,
            "max_len": max_len,
            "max_part": max_part,
            "rows": rows,
            "summary": {
                "partitions": values.len(),
                "values": histogram.iter().map(|(v, c)| (v.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
                "all_in_unit_set": unit,
            },
        }),
        csv,
        text,
    })
}

pub fn verify(n: u64, max_part: usize, budget: Option<u64>, seed: u64) -> anyhow::Result<Report> {
    let options = VerifyOptions {
        subset_budget: budget.unwrap_or(DEFAULT_SUBSET_BUDGET),
        seed,
        ..VerifyOptions::default()
    };
    let r = verify_theorem(n, max_part, &options)?;
    let pass = r.direct.pass && r.structural.pass;

    let mut text = String::new();
    writeln!(text, "n = {n}, max part {max_part}")?;
    writeln!(
        text,
        "gate: at most two odd prime factors: {} (odd primes: {})",
        r.star,
        joined(&r.odd_prime_factors, ", ")
    )?;
    write!(
        text,
        "direct: {} ({} partitions, {} with |s| > 1)",
        verdict(r.direct.pass),
        r.direct.partitions,
        r.direct.violations
    )?;
    if let Some(c) = &r.direct.counterexample {
        write!(text, "; first counterexample {} -> {}", c.lambda, c.value)?;
    }
    writeln!(text)?;
    write!(
        text,
        "structural: {} ({}, a = {}, conclusive: {})",
        verdict(r.structural.pass),
        match r.structural.mode {
            StructuralMode::Exhaustive => "exhaustive",
            StructuralMode::Sampled => "sampled",
        },
        r.structural.a,
        r.structural.conclusive
    )?;
    if let Some(w) = &r.structural.witness {
        write!(text, "; |det| {} vs {}", w.first_abs_det, w.second_abs_det)?;
    }
    writeln!(text)?;
    writeln!(text, "consistent: {}", r.consistent)?;

    let csv = vec![
        vec!["check".into(), "pass".into()],
        vec!["gate".into(), r.star.to_string()],
        vec!["direct".into(), r.direct.pass.to_string()],
        vec!["structural".into(), r.structural.pass.to_string()],
    ];
    let mut json = serde_json::to_value(&r)?;
    json["command"] = "verify".into();
    Ok(Report {
        status: Status::from_bool(pass),
        json,
        csv,
        text,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn read_matrix(path: &Path) -> anyhow::Result<RationalMatrix> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn tu_check(path: &Path, budget: Option<u64>, seed: u64, exhaustive: bool) -> anyhow::Result<Report> {
    let m = read_matrix(path)?;
    let mut cfg = if exhaustive {
        TuConfig::exhaustive()
    } else {
        TuConfig::default()
    };
    cfg.seed = seed;
    if let Some(b) = budget {
        cfg.samples = b;
    }
    let r = is_totally_unimodular(&m, &cfg);

    let mode = match &r.mode {
        TuMode::Exhaustive => "exhaustive".to_string(),
        TuMode::Sampled { samples, coverage } => format!("sampled ({samples} draws, coverage {coverage:.3e})"),
    };
    let mut text = format!(
        "{}x{} matrix, {mode}, {} submatrices checked\ntotally unimodular: {}\n",
        m.rows(),
        m.cols(),
        r.submatrices_checked,
        r.totally_unimodular
    );
    if let Some(w) = &r.witness {
        writeln!(text, "witness: rows {:?}, cols {:?}, det {}", w.rows, w.cols, w.det)?;
    }
    let csv = vec![
        vec!["rows".into(), "cols".into(), "totally_unimodular".into(), "submatrices_checked".into()],
        vec![
            m.rows().to_string(),
            m.cols().to_string(),
            r.totally_unimodular.to_string(),
            r.submatrices_checked.to_string(),
        ],
    ];
    let mut json = serde_json::to_value(&r)?;
    json["command"] = "tu-check".into();
    json["rows"] = m.rows().into();
    json["cols"] = m.cols().into();
    Ok(Report {
        status: Status::from_bool(r.totally_unimodular),
        json,
        csv,
        text,
    })
}

pub fn witness(dims: &[usize], budget: Option<u64>, seed: u64) -> anyhow::Result<Report> {
    let mut x = None;
    for &d in dims {
        let c = maximal_circuit(d)?;
        x = Some(match x {
            None => c,
            Some(acc) => tensor_product(&acc, &c),
        });
    }
    let x = x.ok_or_else(|| anyhow!("at least one dimension is required"))?;
    let budget = budget.unwrap_or(DEFAULT_WITNESS_BUDGET);
    let w = find_nonunimodular_witness(&x, budget, seed);

    let mut text = format!(
        "tensor product of maximal circuits of dimensions {}: {} vectors in dimension {}\n",
        joined(dims, ", "),
        x.len(),
        x.ambient_dim()
    );
    let mut csv = vec![vec!["basis".to_string(), "indices".to_string(), "abs_det".to_string()]];
    match &w {
        Some(w) => {
            writeln!(text, "basis 1: {:?}\n  |det| = {}", w.first, w.first_abs_det)?;
            writeln!(text, "basis 2: {:?}\n  |det| = {}", w.second, w.second_abs_det)?;
            writeln!(text, "ratio: {}", &w.second_abs_det / &w.first_abs_det)?;
            csv.push(vec!["1".into(), joined(&w.first, " "), w.first_abs_det.to_string()]);
            csv.push(vec!["2".into(), joined(&w.second, " "), w.second_abs_det.to_string()]);
        }
        None => writeln!(text, "no witness within {budget} exchanges (seed {seed})")?,
    }
    Ok(Report {
        status: Status::from_bool(w.is_some()),
        json: json!({
            "command": "witness",
            "dims": dims,
            "vectors": x.len(),
            "ambient_dim": x.ambient_dim(),
            "budget": budget,
            "seed": seed,
            "found": w.is_some(),
            "witness": w,
            "ratio": w.as_ref().map(|w| (&w.second_abs_det / &w.first_abs_det).to_string()),
        }),
        csv,
        text,
    })
}

pub fn network_demo(m: usize, n: usize) -> anyhow::Result<Report> {
    let (a, inst) = bipartite_construction(m, n)?;
    let nm = network_matrix(&inst);
    let matches = nm == a.transpose();
    let arcs = |xs: &[(String, String)]| -> String {
        xs.iter().map(|(u, v)| format!("({u},{v})")).collect::<Vec<_>>().join(" ")
    };

    let mut text = String::new();
    write!(text, "A ({} x {}) =\n{a}", a.rows(), a.cols())?;
    writeln!(text, "vertices: {}", inst.vertices().join(" "))?;
    writeln!(text, "tree arcs: {}", arcs(inst.tree_arcs()))?;
    writeln!(text, "graph arcs: {}", arcs(inst.graph_arcs()))?;
    write!(text, "network matrix ({} x {}) =\n{nm}", nm.rows(), nm.cols())?;
    writeln!(text, "transpose matches: {matches}")?;

    let mut csv = vec![vec!["matrix".to_string(), "row".to_string(), "entries".to_string()]];
    for (name, mat) in [("A", &a), ("network", &nm)] {
        for i in 0..mat.rows() {
            csv.push(vec![name.into(), i.to_string(), joined(mat.row(i), " ")]);
        }
    }
    Ok(Report {
        status: Status::from_bool(matches),
        json: json!({
            "command": "network-demo",
            "m": m,
            "n": n,
            "a": a,
            "instance": inst,
            "network_matrix": nm,
            "transpose_matches": matches,
        }),
        csv,
        text,
    })
}
