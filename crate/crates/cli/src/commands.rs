use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use lrc_core::analysis::{
    composite_distance, erasure_correctable, erasure_monte_carlo, min_distance, theorem4_dimension,
    verify_availability,
};
use lrc_core::artifact::{ArtifactKind, CodeArtifact, LoadedCode, Provenance};
use lrc_core::bounds::{
    concat_expander_crossover, corollary1_bound, curves as curve_rows, rate_cap, tbf_bound, wang_rawat_bound,
    write_curves_csv, yaakobi_bound, BoundQuery, Singleton,
};
use lrc_core::constructions::{
    assemble_concatenated, assemble_expander_code, build_expander_parity, build_wzl, sample_biregular,
    sample_biregular_simple,
};
use lrc_core::shortening::{shorten as run_shorten, theorem2_bounds};
use lrc_core::{build_base_field, Error, FieldTower};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{BoundsArgs, ConstructCommand, CurvesArgs, ShortenArgs, VerifyArgs};

/// `Ok(true)` passes, `Ok(false)` is a verification failure, `Err` an input error.
pub type Outcome = Result<bool, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(err),
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON value serializes"));
}

pub fn bounds(a: &BoundsArgs) -> Outcome {
    if a.n < 1 || a.k < 1 || a.r < 1 || a.q < 2 {
        return Err("n, k and r must be positive and q at least 2".into());
    }
    if a.t < 1 {
        return Err("availability bounds need t >= 1".into());
    }
    let q = BoundQuery::new(a.n, a.k, a.r, a.t).map_err(err)?.with_q(a.q);
    let cap = rate_cap(a.r as u64, a.t as u64);
    let cap_k = (cap * num_rational::Ratio::from_integer(a.n as u64)).to_integer();
    let shortening = theorem2_bounds(a.n, a.k, a.d.unwrap_or(1), a.r, a.q, &Singleton, &Singleton).ok();
    let rows: Vec<(&str, &str, Option<i64>)> = vec![
        ("wang_rawat", "Wang-Rawat distance bound", Some(wang_rawat_bound(&q).map_err(err)?)),
        ("tbf", "Tamo-Barg-Frolov distance bound", Some(tbf_bound(&q))),
        (
            "yaakobi",
            "Yaakobi shortening distance bound (Singleton oracle)",
            yaakobi_bound(&q, &Singleton).map_err(err)?,
        ),
        ("corollary1", "shortening distance bound, closed form", corollary1_bound(a.n, a.k, a.r).ok()),
        (
            "shortening_d",
            "shortening distance bound, minimized over s (Singleton oracle)",
            shortening.as_ref().and_then(|b| b.d_upper).map(|b| b.value),
        ),
        (
            "shortening_k",
            "shortening dimension bound, minimized over s (Singleton oracle, needs --d)",
            a.d.and(shortening.as_ref().and_then(|b| b.k_upper)).map(|b| b.value),
        ),
        ("rate_cap_k", "rate cap floor(n R*(r,t)) on the dimension", Some(cap_k as i64)),
    ];
    if a.json {
        let mut obj = serde_json::Map::new();
        for (key, _, v) in &rows {
            obj.insert((*key).into(), json!(v));
        }
        obj.insert("rate_cap".into(), json!(format!("{}/{}", cap.numer(), cap.denom())));
        obj.insert("params".into(), json!({"n": a.n, "k": a.k, "r": a.r, "t": a.t, "q": a.q, "d": a.d}));
        print_json(&Value::Object(obj));
    } else {
        println!("n={} k={} r={} t={} q={}", a.n, a.k, a.r, a.t, a.q);
        for (key, label, v) in &rows {
            let shown = v.map_or_else(|| "n/a".to_string(), |x| x.to_string());
            println!("{key:<14} {shown:>6}  {label}");
        }
        println!("{:<14} {:>6}  rate cap R*(r,t)", "rate_cap", format!("{}/{}", cap.numer(), cap.denom()));
    }
    Ok(true)
}

pub fn curves(a: &CurvesArgs) -> Outcome {
    let rows = curve_rows(a.r, a.t, a.grid).map_err(err)?;
    let mut buf = Vec::new();
    write_curves_csv(&rows, &mut buf).map_err(err)?;
    let text = String::from_utf8(buf).expect("CSV is ASCII");
    write_output(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!("wrote {} rows", rows.len());
    }
    match concat_expander_crossover(&rows) {
        Some(dc) => eprintln!("crossover delta_c = {dc:.6}"),
        None => eprintln!("no crossover on this grid"),
    }
    Ok(true)
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect()
}

pub fn construct(c: &ConstructCommand) -> Outcome {
    let (artifact, out) = match c {
        ConstructCommand::Wzl { r, t, out } => {
            let code = build_wzl(*r, *t).map_err(err)?;
            let prov = Provenance {
                seed: None,
                parameters: params(&[("r", json!(r)), ("t", json!(t))]),
            };
            (
                CodeArtifact::from_linear(ArtifactKind::Wzl, &code, prov).with_distance(t + 1),
                out,
            )
        }
        ConstructCommand::Expander {
            n,
            r,
            t,
            w,
            m,
            k,
            seed,
            max_tries,
            allow_4_cycles,
            out,
        } => {
            let graph = if *allow_4_cycles {
                sample_biregular_simple(*n, *t, r + 1, *seed, *max_tries)
            } else {
                sample_biregular(*n, *t, r + 1, *seed, *max_tries)
            }
            .map_err(|e| match e {
                Error::GirthInfeasible(_) => format!("{e}; pass --allow-4-cycles to keep 4-cycles"),
                other => other.to_string(),
            })?;
            let base = build_base_field(*w).map_err(err)?;
            let parity = build_expander_parity(&graph, &base, *seed);
            let n_g = n - lrc_core::linalg::rank(&base, &parity);
            let m = m.unwrap_or(n_g);
            let k = k.unwrap_or(n_g.saturating_sub(*t));
            let tower = FieldTower::with_seed(*w, m, *seed).map_err(err)?;
            let code = assemble_expander_code(&tower, &parity, k).map_err(err)?;
            let prov = Provenance {
                seed: Some(*seed),
                parameters: params(&[
                    ("n", json!(n)),
                    ("r", json!(r)),
                    ("t", json!(t)),
                    ("w", json!(w)),
                    ("m", json!(m)),
                    ("k", json!(k)),
                    ("allow_4_cycles", json!(allow_4_cycles)),
                ]),
            };
            (CodeArtifact::from_composite(&code, *r, *t, Some(&graph), prov), out)
        }
        ConstructCommand::Concat {
            r,
            t,
            blocks,
            m,
            d,
            seed,
            out,
        } => {
            let inner = build_wzl(*r, *t).map_err(err)?;
            let n = (blocks * inner.n()) as u64;
            let dim = theorem4_dimension(n, *d, *r as u64, *t as u64).map_err(err)?;
            let n_g = blocks * inner.k();
            if dim.k < 1 || dim.k as usize > n_g {
                return Err(format!("target distance {d} gives dimension {} outside 1..={n_g}", dim.k));
            }
            let tower = FieldTower::with_seed(1, *m, *seed).map_err(err)?;
            let code = assemble_concatenated(&tower, *r, *t, *blocks, dim.k as usize).map_err(err)?;
            let prov = Provenance {
                seed: Some(*seed),
                parameters: params(&[
                    ("r", json!(r)),
                    ("t", json!(t)),
                    ("blocks", json!(blocks)),
                    ("m", json!(m)),
                    ("d", json!(d)),
                    ("e_inner", json!(dim.e_inner)),
                    ("l_star", json!(dim.l_star)),
                ]),
            };
            (
                CodeArtifact::from_composite(&code, *r, *t, None, prov).with_distance(*d as usize),
                out,
            )
        }
    };
    write_output(out.as_deref(), &artifact.to_json())?;
    if out.is_some() {
        eprintln!("n={} k={}", artifact.n, artifact.k);
    }
    Ok(true)
}

fn load_artifact(path: &Path) -> Result<(CodeArtifact, LoadedCode), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let artifact = CodeArtifact::from_json(&text).map_err(err)?;
    let code = artifact.load().map_err(err)?;
    Ok((artifact, code))
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let (artifact, code) = load_artifact(&a.code)?;
    if a.erasures.is_some() && a.seed.is_none() {
        return Err("--erasures needs --seed".into());
    }
    let mut report = serde_json::Map::new();
    let mut pass = true;
    report.insert("n".into(), json!(artifact.n));
    report.insert("k".into(), json!(artifact.k));

    if a.distance {
        let d = match &code {
            LoadedCode::Linear(c) => min_distance(c),
            LoadedCode::Composite(c) => composite_distance(c),
        }
        .map_err(err)?;
        let ok = artifact.d.is_none_or(|claimed| d >= claimed);
        pass &= ok;
        report.insert("distance".into(), json!({"value": d, "claimed": artifact.d, "pass": ok}));
    }
    if a.availability {
        let r = a.r.or(artifact.r).ok_or("availability needs --r or an artifact r")?;
        let t = a.t.or(artifact.t).ok_or("availability needs --t or an artifact t")?;
        let rep = verify_availability(&code.base_code(), r, t).map_err(err)?;
        pass &= rep.pass;
        report.insert(
            "availability".into(),
            json!({
                "r": r,
                "t": t,
                "pass": rep.pass,
                "failing_coordinates": rep.failing_coordinates(),
                "recovering_sets": rep.recovering_sets,
            }),
        );
    }
    if let (Some(e), Some(seed)) = (a.erasures, a.seed) {
        if e >= artifact.n {
            return Err(format!("{e} erasures for length {}", artifact.n));
        }
        let stats = match &code {
            LoadedCode::Composite(c) => {
                let s = erasure_monte_carlo(c, e, a.trials, seed).map_err(err)?;
                let ok = s.all_decoded();
                json!({"pass": ok, "success_rate": s.success_rate(), "stats": s})
            }
            LoadedCode::Linear(c) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let successes = (0..a.trials)
                    .filter(|_| erasure_correctable(c, &index::sample(&mut rng, c.n(), e).into_vec()))
                    .count();
                let ok = successes == a.trials;
                json!({"pass": ok, "trials": a.trials, "successes": successes, "erasures": e, "seed": seed})
            }
        };
        pass &= stats["pass"].as_bool().unwrap_or(false);
        report.insert("erasures".into(), stats);
    }
    report.insert("pass".into(), json!(pass));
    print_json(&Value::Object(report));
    Ok(pass)
}

pub fn shorten(a: &ShortenArgs) -> Outcome {
    let (artifact, code) = load_artifact(&a.code)?;
    let base = code.base_code();
    let out = run_shorten(&base, a.r, a.s).map_err(err)?;
    let d = match artifact.d {
        Some(d) => Some(d),
        None => min_distance(&base).ok(),
    };
    let table = theorem2_bounds(
        base.n() as i64,
        base.k() as i64,
        d.unwrap_or(1) as i64,
        a.r as i64,
        base.field().q() as u64,
        &Singleton,
        &Singleton,
    )
    .map_err(err)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            json!({
                "s": row.s,
                "k_bound": if d.is_some() { row.k_bound } else { None },
                "d_bound": row.d_bound,
            })
        })
        .collect();
    let res = &out.result;
    print_json(&json!({
        "n": base.n(),
        "k": base.k(),
        "d": d,
        "r": a.r,
        "s": res.s,
        "I": res.i_set,
        "J": res.j_set,
        "closure": out.closure,
        "size_I": res.i_set.len(),
        "size_closure": out.closure.len(),
        "s1": res.s1,
        "j": res.j,
        "l": res.l,
        "bounds": {
            "k_upper": if d.is_some() { table.k_upper.map(|b| json!({"value": b.value, "s": b.s})) } else { None },
            "d_upper": table.d_upper.map(|b| json!({"value": b.value, "s": b.s})),
            "rows": rows,
        },
    }));
    Ok(true)
}
