//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each.
//!
//! Run with `cargo test -p lrc-core --test acceptance -- --nocapture` to see
//! the report. Criteria listed in `KNOWN_INFEASIBLE` are mathematically
//! unattainable as stated; they are still evaluated literally and reported,
//! and the run fails if any other criterion fails or if a pinned one passes.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lrc_core::analysis::{
    composite_distance, erased_submatrix_full_rank_frequency, erasure_monte_carlo, min_distance, theorem4_dimension,
    verify_availability,
};
use lrc_core::bounds::{
    concat_expander_crossover, corollary1_bound, curves, gamma_of_delta, lemma1_delta, lemma1_residual, rate_cap,
    tbf_bound, wang_rawat_bound, BoundQuery,
};
use lrc_core::constructions::{
    assemble_concatenated, assemble_expander_code, binomial, build_expander_parity, build_wzl, check_expansion,
    composite_erasure_decode, min_neighborhoods, sample_biregular, sample_biregular_simple, DecodeOutcome,
};
use lrc_core::gabidulin::{gab_encode, lin_eval, moore_interpolate, rank_weight, GabidulinSpec, LinearizedPoly};
use lrc_core::linalg::{rank, rank_over_base};
use lrc_core::shortening::{closure, enumerate_local_checks, algorithm1};
use lrc_core::{build_base_field, Error, Field, FieldTower};

const KNOWN_INFEASIBLE: &[u32] = &[7, 10];

const WZL_PARAMS: [(usize, usize); 4] = [(2, 2), (3, 2), (2, 3), (4, 2)];

const C1_RUNTIME: Duration = Duration::from_secs(60);
const C4_RUNTIME: Duration = Duration::from_secs(1);
const C6_TRIALS: usize = 1000;
const C6_SEED: u64 = 2024;
const C7_SAMPLER_SEED: u64 = 7;
const C7_MAX_TRIES: usize = 10_000;
const C7_TRIALS: usize = 500;
const C7_FULL_RANK_TRIALS: usize = 1000;
const C7_FULL_RANK_THRESHOLD: f64 = 0.99;
const C8_RESIDUAL_TOL: f64 = 1e-12;
const C8_BOUNDARY_TOL: f64 = 1e-9;
const C9_GRID: usize = 200;
const C9_ENDPOINT_TOL: f64 = 1e-12;
const C9_RUNTIME: Duration = Duration::from_secs(10);

struct Verdict {
    pass: bool,
    /// For known-infeasible criteria, whether the attainable part holds.
    attainable: Option<bool>,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        attainable: None,
        detail: detail.into(),
    }
}

fn partial_verdict(pass: bool, attainable: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        attainable: Some(attainable),
        detail: detail.into(),
    }
}

fn criterion1() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for (r, t) in WZL_PARAMS {
        let code = build_wzl(r, t).unwrap();
        let n = binomial((r + t) as u64, t as u64) as usize;
        let k = n * r / (r + t);
        let d = min_distance(&code).unwrap();
        let avail = verify_availability(&code, r, t).unwrap();
        let ok = code.n() == n && code.k() == k && n * r % (r + t) == 0 && d == t + 1 && avail.pass;
        pass &= ok;
        notes.push(format!("WZL({r},{t}): n={} k={} d={d} avail={}", code.n(), code.k(), avail.pass));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < C1_RUNTIME;
    verdict(pass, format!("{}; {:.2?}", notes.join(", "), elapsed))
}

fn criterion2() -> Verdict {
    let q = BoundQuery::new(24, 12, 3, 2).unwrap();
    let (c1, wr, tbf) = (corollary1_bound(24, 12, 3).unwrap(), wang_rawat_bound(&q).unwrap(), tbf_bound(&q));
    let mut pass = c1 == 8 && wr == 9 && tbf == 9 && c1 < wr && c1 < tbf;
    let mut points = 0;
    let mut worst: Option<(i64, i64, i64, i64)> = None;
    for n in 1..=40i64 {
        for r in 2..=6i64 {
            for t in [2i64, 3] {
                let cap = rate_cap(r as u64, t as u64) * Ratio::from_integer(n as u64);
                let k_max = cap.to_integer() as i64;
                for k in 2..=k_max {
                    let q = BoundQuery::new(n, k, r, t).unwrap();
                    let c1 = corollary1_bound(n, k, r).unwrap();
                    let best = wang_rawat_bound(&q).unwrap().min(tbf_bound(&q));
                    points += 1;
                    if c1 > best {
                        pass = false;
                        worst.get_or_insert((n, k, r, t));
                    }
                }
            }
        }
    }
    verdict(
        pass,
        format!("(24,12,3,2): shortening={c1} wang_rawat={wr} tbf={tbf}; grid points={points}, first violation={worst:?}"),
    )
}

fn criterion3() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (r, t) in [(2, 2), (3, 2)] {
        let code = build_wzl(r, t).unwrap();
        let d = min_distance(&code).unwrap() as i64;
        let bound = corollary1_bound(code.n() as i64, code.k() as i64, r as i64).unwrap();
        pass &= d == bound;
        notes.push(format!("WZL({r},{t}): d={d} bound={bound}"));
    }
    verdict(pass, notes.join(", "))
}

fn criterion4() -> Verdict {
    let start = Instant::now();
    let tower = FieldTower::with_seed(1, 4, 0).unwrap();
    let spec = GabidulinSpec::with_default_points(tower.clone(), 4, 2).unwrap();
    let mut min = usize::MAX;
    let mut count = 0;
    for i in 1..256u64 {
        let msg = vec![tower.element(i & 15), tower.element(i >> 4)];
        let c = gab_encode(&spec, &msg).unwrap();
        min = min.min(rank_weight(&tower, &c));
        count += 1;
    }
    let elapsed = start.elapsed();
    verdict(
        min == 3 && count == 255 && elapsed < C4_RUNTIME,
        format!("min rank distance {min} over {count} codewords; {elapsed:.2?}"),
    )
}

fn criterion5() -> Verdict {
    let tower = FieldTower::with_seed(2, 8, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut recovered = 0;
    for trial in 0..100 {
        let k = 1 + trial % 6;
        let n = k + 2;
        let f = LinearizedPoly::new(&tower, (0..k).map(|_| tower.random_element(&mut rng)).collect());
        let points = loop {
            let p: Vec<_> = (0..n).map(|_| tower.random_element(&mut rng)).collect();
            if rank_over_base(&tower, &p) == n {
                break p;
            }
        };
        let values: Vec<_> = points.iter().map(|p| lin_eval(&tower, &f, p)).collect();
        let keep = index::sample(&mut rng, n, k).into_vec();
        let pts: Vec<_> = keep.iter().map(|&i| points[i].clone()).collect();
        let vals: Vec<_> = keep.iter().map(|&i| values[i].clone()).collect();
        if moore_interpolate(&tower, &pts, &vals).map(|g| g == f).unwrap_or(false) {
            recovered += 1;
        }
    }
    verdict(recovered == 100, format!("{recovered}/100 exact recoveries"))
}

fn criterion6() -> Verdict {
    let dim = theorem4_dimension(30, 15, 3, 2).unwrap();
    let tower = FieldTower::with_seed(1, 18, 0).unwrap();
    let code = assemble_concatenated(&tower, 3, 2, 3, dim.k as usize).unwrap();
    let stats = erasure_monte_carlo(&code, 14, C6_TRIALS, C6_SEED).unwrap();
    let adv = stats.adversarial.clone().unwrap();
    let pass = dim.k == 9 && stats.successes == C6_TRIALS && adv.decoded && stats.min_survivor_rank >= 9;
    verdict(
        pass,
        format!(
            "k={}; random 14-erasures decoded {}/{} (rate {:.3}), min survivor rank {}; whole-block pattern rank {} decoded={}",
            dim.k,
            stats.successes,
            stats.trials,
            stats.success_rate(),
            stats.min_survivor_rank,
            adv.survivor_rank,
            adv.decoded
        ),
    )
}

fn criterion7() -> Verdict {
    let (n, t, rp1) = (14, 3, 7);
    let girth = sample_biregular(n, t, rp1, C7_SAMPLER_SEED, C7_MAX_TRIES);
    let girth_ok = girth.as_ref().is_ok_and(|g| g.has_girth_above_4());
    let girth_note = match &girth {
        Ok(_) => "girth>4 graph found".to_string(),
        Err(Error::GirthInfeasible(why)) => format!("girth>4 impossible ({why})"),
        Err(e) => format!("girth>4 sampling failed ({e})"),
    };

    // Remaining parts on a simple graph (4-cycles allowed).
    let g = sample_biregular_simple(n, t, rp1, C7_SAMPLER_SEED, C7_MAX_TRIES).unwrap();
    let min_nb = min_neighborhoods(&g, 3).unwrap();
    let expands = check_expansion(&g, Ratio::new(3, 14), Ratio::new(1, 3)).unwrap();
    let base = build_base_field(4).unwrap();
    let parity = build_expander_parity(&g, &base, C7_SAMPLER_SEED);
    let n_g = n - rank(&base, &parity);
    let tower = FieldTower::with_seed(4, n_g, C7_SAMPLER_SEED).unwrap();
    let code = assemble_expander_code(&tower, &parity, n_g - t).unwrap();
    let d = composite_distance(&code).unwrap();
    let stats = erasure_monte_carlo(&code, d - 1, C7_TRIALS, C7_SAMPLER_SEED).unwrap();
    let freq = erased_submatrix_full_rank_frequency(&g, &base, 3, C7_FULL_RANK_TRIALS, C7_SAMPLER_SEED).unwrap();
    let rest_ok = expands && stats.successes == C7_TRIALS && freq >= C7_FULL_RANK_THRESHOLD;
    partial_verdict(
        girth_ok && rest_ok,
        rest_ok,
        format!(
            "{girth_note}; on a simple graph: min |N(V')| for |V'|=1..3 {min_nb:?}, expansion(|V'|<=3, t*gamma=1)={expands}, \
             n_G={n_g} k={}, survivor-rank threshold d={d}, {}/{} random {}-erasures decoded, \
             full-rank frequency {freq:.3} (threshold {C7_FULL_RANK_THRESHOLD})",
            code.k(),
            stats.successes,
            stats.trials,
            d - 1
        ),
    )
}

fn criterion8() -> Verdict {
    let mut max_residual: f64 = 0.0;
    let mut boundary_err: f64 = 0.0;
    let mut monotone = true;
    for (t, r) in [(3u32, 6u32), (2, 5)] {
        let lo = 1.0 / (r as f64 + 1.0);
        let hi = 1.0 - 1.0 / t as f64;
        boundary_err = boundary_err.max((lemma1_delta(lo, t, r).unwrap() - 1.0).abs());
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let gamma = lo + (hi - lo) * i as f64 / 20.0;
            let root = lemma1_delta(gamma, t, r).unwrap();
            max_residual = max_residual.max(lemma1_residual(root, gamma, t, r).abs());
            monotone &= root <= prev;
            prev = root;
        }
        for i in 1..C9_GRID {
            let delta = i as f64 / (C9_GRID - 1) as f64;
            let gamma = gamma_of_delta(delta, t, r).unwrap();
            let root = lemma1_delta(gamma, t, r).unwrap();
            max_residual = max_residual.max(lemma1_residual(root, gamma, t, r).abs());
        }
    }
    verdict(
        max_residual < C8_RESIDUAL_TOL && boundary_err < C8_BOUNDARY_TOL && monotone,
        format!("max |F(delta*)| = {max_residual:.2e}, boundary |delta*-1| = {boundary_err:.1e}, nonincreasing = {monotone}"),
    )
}

fn criterion9() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for (t, r) in [(3u32, 6u32), (2, 5)] {
        let rows = curves(r, t, C9_GRID).unwrap();
        let upper_ok = rows.iter().all(|row| row.upper_new <= row.upper_tbf);
        let dc = concat_expander_crossover(&rows);
        let ordered = dc.is_some_and(|dc| {
            rows.iter().all(|row| {
                let diff = row.lower_concat - row.lower_expander;
                if row.delta < dc {
                    diff > 0.0
                } else if row.delta == 1.0 {
                    diff.abs() <= C9_ENDPOINT_TOL
                } else {
                    diff < 0.0
                }
            })
        });
        pass &= rows.len() == C9_GRID && upper_ok && ordered;
        notes.push(format!(
            "(t={t},r={r}): upper_new<=upper_tbf {upper_ok}, crossover {}, ordered {ordered}",
            dc.map_or("none".to_string(), |d| format!("{d:.4}"))
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < C9_RUNTIME;
    verdict(pass, format!("{}; {elapsed:.2?}", notes.join(", ")))
}

/// Independent closure oracle: `j` is determined by `I` iff adding its
/// generator column does not raise the rank.
fn rank_closure(code: &lrc_core::constructions::LinearCode<lrc_core::BaseField>, i_set: &[usize]) -> Vec<usize> {
    let g = code.generator();
    let base = rank(code.field(), &g.select_columns(i_set));
    (0..code.n())
        .filter(|&j| {
            let mut cols = i_set.to_vec();
            cols.push(j);
            rank(code.field(), &g.select_columns(&cols)) == base
        })
        .collect()
}

fn criterion10() -> Verdict {
    let mut literal = true;
    let mut restricted = true;
    let mut oracle_agrees = true;
    let mut first_miss = None;
    let mut runs = 0;
    for (r, t) in WZL_PARAMS {
        let code = build_wzl(r, t).unwrap();
        let checks = enumerate_local_checks(&code, r).unwrap();
        for s in 1..=(code.n() - code.k()) {
            let res = algorithm1(code.field(), &checks, s, code.n(), r).unwrap();
            let cl = closure(&code, &res.i_set).unwrap();
            oracle_agrees &= cl == rank_closure(&code, &res.i_set);
            let size_ok = res.i_set.len() <= 1 + (r - 1) * s;
            let closure_ok = cl.len() >= 1 + r * s;
            runs += 1;
            if !(size_ok && closure_ok) {
                literal = false;
                first_miss.get_or_insert(format!(
                    "WZL({r},{t}) s={s}: |I|={} |Cl(I)|={} needs {} (n={})",
                    res.i_set.len(),
                    cl.len(),
                    1 + r * s,
                    code.n()
                ));
            }
            restricted &= size_ok && (closure_ok || cl.len() == code.n());
        }
    }
    partial_verdict(
        literal && oracle_agrees,
        restricted && oracle_agrees,
        format!(
            "{runs} runs; literal={literal} (first miss: {}); with |Cl(I)| capped at n: {restricted}; subcode closure = rank oracle: {oracle_agrees}",
            first_miss.unwrap_or_else(|| "none".into())
        ),
    )
}

#[test]
fn acceptance_suite() {
    let criteria: [(u32, &str, fn() -> Verdict); 10] = [
        (1, "WZL parameter reproduction", criterion1),
        (2, "shortening bound improves on Wang-Rawat and Tamo-Barg-Frolov", criterion2),
        (3, "WZL tightness witnesses", criterion3),
        (4, "Gabidulin MRD at q=2, m=4", criterion4),
        (5, "Moore interpolation round trip", criterion5),
        (6, "concatenated construction erasure decoding", criterion6),
        (7, "expander pipeline", criterion7),
        (8, "expansion-equation solver", criterion8),
        (9, "rate-distance curve comparison", criterion9),
        (10, "greedy shortening guarantees", criterion10),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let v = run();
        let pinned = KNOWN_INFEASIBLE.contains(&id);
        let tag = if v.pass { "PASS" } else { "FAIL" };
        let note = if pinned { " [known infeasible]" } else { "" };
        println!("[{tag}] criterion {id}: {name}{note}: {}", v.detail);
        if v.pass == pinned || (pinned && v.attainable != Some(true)) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcome for criteria {unexpected:?}");
}

#[test]
fn expander_decoding_matches_message() {
    // Constructive decoding on the criterion-7 code, beyond the survivor-rank count.
    let g = sample_biregular_simple(14, 3, 7, C7_SAMPLER_SEED, C7_MAX_TRIES).unwrap();
    let base = build_base_field(4).unwrap();
    let parity = build_expander_parity(&g, &base, C7_SAMPLER_SEED);
    let n_g = 14 - rank(&base, &parity);
    let tower = FieldTower::with_seed(4, n_g, C7_SAMPLER_SEED).unwrap();
    let code = assemble_expander_code(&tower, &parity, n_g - 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let message: Vec<_> = (0..code.k()).map(|_| tower.random_element(&mut rng)).collect();
        let word = code.encode(&message).unwrap();
        let keep: Vec<usize> = (0..14).filter(|_| rng.gen_bool(0.8)).collect();
        let received: Vec<_> = keep.iter().map(|&j| (j, word[j].clone())).collect();
        match composite_erasure_decode(&code, &received).unwrap() {
            DecodeOutcome::Decoded(m) => assert_eq!(m, message),
            DecodeOutcome::Failed { survivor_rank, needed } => assert!(survivor_rank < needed),
        }
    }
}
