//! Brute-force verification: minimum distance, availability, erasure
//! correction and the dimension estimate for concatenated codes.

use itertools::Itertools;
use num_rational::Ratio;
use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::rate_cap;
use crate::constructions::{
    binomial, build_wzl, composite_erasure_decode, BipartiteGraph, CompositeCode, CompositeKind, DecodeOutcome,
    LinearCode,
};
use crate::error::{Error, Result};
use crate::galois::{BaseField, Field};
use crate::linalg::{rank, EchelonBasis, Matrix};
use crate::shortening::{enumerate_local_checks, support};

/// Upper limit on `q^k` for the exhaustive distance scan.
pub const EXHAUSTIVE_CODEWORD_LIMIT: u64 = 1 << 22;

/// Upper limit on the number of erasure sets inspected by subset searches.
pub const ERASURE_SUBSET_BUDGET: u64 = 20_000_000;

fn weight<F: Field>(field: &F, v: &[F::Elem]) -> usize {
    v.iter().filter(|x| !field.is_zero(x)).count()
}

/// Exact minimum Hamming weight over all nonzero codewords. `n + 1` is
/// returned for the zero code.
pub fn min_distance<F: Field>(code: &LinearCode<F>) -> Result<usize> {
    let field = code.field();
    let g = code.generator();
    let k = g.rows();
    let n = code.n();
    if k == 0 {
        return Ok(n + 1);
    }
    let q = field
        .order()
        .ok_or_else(|| Error::BudgetExceeded("field too large for an exhaustive scan".into()))?;
    let total = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&v| v <= EXHAUSTIVE_CODEWORD_LIMIT));
    if total.is_none() {
        return Err(Error::BudgetExceeded(format!(
            "q^k = {q}^{k} exceeds {EXHAUSTIVE_CODEWORD_LIMIT}"
        )));
    }
    let rows = g.row_vecs();
    let mut digits = vec![0u64; k];
    let mut word = vec![field.zero(); n];
    let mut best = n + 1;
    // Odometer over message digits; each step adds (new - old) g_i.
    'outer: loop {
        let mut i = 0;
        loop {
            if i == k {
                break 'outer;
            }
            let old = field.element(digits[i]);
            digits[i] = (digits[i] + 1) % q;
            let delta = field.sub(&field.element(digits[i]), &old);
            for (w, gij) in word.iter_mut().zip(&rows[i]) {
                *w = field.add(w, &field.mul(&delta, gij));
            }
            if digits[i] != 0 {
                break;
            }
            i += 1;
        }
        let wt = weight(field, &word);
        if wt > 0 && wt < best {
            best = wt;
            if best == 1 {
                break;
            }
        }
    }
    Ok(best)
}

/// Upper estimate of the minimum distance from systematic generators on
/// random information sets (rows and pairwise sums of rows).
pub fn min_distance_sampled<F: Field>(code: &LinearCode<F>, trials: usize, seed: u64) -> usize {
    let field = code.field();
    let g = code.generator();
    let n = code.n();
    let mut best = n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..trials.max(1) {
        perm.shuffle(&mut rng);
        let permuted = g.select_columns(&perm);
        let reduced = crate::linalg::rref(field, &permuted).matrix;
        let rows: Vec<Vec<F::Elem>> = reduced.row_vecs().into_iter().filter(|r| weight(field, r) > 0).collect();
        for (a, row) in rows.iter().enumerate() {
            best = best.min(weight(field, row));
            for other in &rows[a + 1..] {
                let sum: Vec<F::Elem> = row.iter().zip(other).map(|(x, y)| field.add(x, y)).collect();
                let wt = weight(field, &sum);
                if wt > 0 {
                    best = best.min(wt);
                }
            }
        }
    }
    best
}

/// Disjoint recovering sets found for every coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvailabilityReport {
    pub r: usize,
    pub t: usize,
    /// `None` marks a coordinate without `t` disjoint recovering sets.
    pub recovering_sets: Vec<Option<Vec<Vec<usize>>>>,
    pub pass: bool,
}

impl AvailabilityReport {
    pub fn failing_coordinates(&self) -> Vec<usize> {
        self.recovering_sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

fn disjoint_family(candidates: &[Vec<usize>], t: usize, n: usize) -> Option<Vec<Vec<usize>>> {
    fn go(
        candidates: &[Vec<usize>],
        start: usize,
        t: usize,
        used: &mut [bool],
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == t {
            return true;
        }
        for c in start..candidates.len() {
            if candidates.len() - c < t - chosen.len() {
                return false;
            }
            if candidates[c].iter().any(|&p| used[p]) {
                continue;
            }
            for &p in &candidates[c] {
                used[p] = true;
            }
            chosen.push(c);
            if go(candidates, c + 1, t, used, chosen) {
                return true;
            }
            chosen.pop();
            for &p in &candidates[c] {
                used[p] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    let mut chosen = Vec::new();
    go(candidates, 0, t, &mut used, &mut chosen).then(|| chosen.iter().map(|&c| candidates[c].clone()).collect())
}

/// Searches every coordinate for `t` pairwise disjoint recovering sets of size
/// at most `r`, each the support of a local check through the coordinate.
pub fn verify_availability<F: Field>(code: &LinearCode<F>, r: usize, t: usize) -> Result<AvailabilityReport> {
    let n = code.n();
    let checks = enumerate_local_checks(code, r)?;
    let supports: Vec<Vec<usize>> = checks.checks.iter().map(|h| support(code.field(), h)).collect();
    let mut recovering_sets = Vec::with_capacity(n);
    for i in 0..n {
        let mut candidates: Vec<Vec<usize>> = supports
            .iter()
            .filter(|s| s.contains(&i))
            .map(|s| s.iter().copied().filter(|&p| p != i).collect())
            .collect();
        // Smaller sets first; a smaller set never blocks more than its superset.
        candidates.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        candidates.dedup();
        recovering_sets.push(disjoint_family(&candidates, t, n));
    }
    let pass = recovering_sets.iter().all(Option::is_some);
    Ok(AvailabilityReport {
        r,
        t,
        recovering_sets,
        pass,
    })
}

/// True iff no nonzero codeword is supported inside `erased`.
pub fn erasure_correctable<F: Field>(code: &LinearCode<F>, erased: &[usize]) -> bool {
    rank(code.field(), &code.parity().select_columns(erased)) == erased.len()
}

/// `L*(e) = e` for `e <= t`, otherwise `max(ceil((1 - R*(r-1, t)) e), t)`.
pub fn l_star(e: u64, r: u64, t: u64) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("L* needs r >= 2 (got {r})")));
    }
    if e <= t {
        return Ok(e);
    }
    let frac = (Ratio::from_integer(1) - rate_cap(r - 1, t)) * Ratio::from_integer(e);
    Ok(frac.ceil().to_integer().max(t))
}

/// Terms of the dimension estimate for the concatenated construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem4Dimension {
    pub n_inner: u64,
    pub k_inner: u64,
    pub full_blocks: u64,
    pub e_inner: u64,
    pub l_star: u64,
    pub k: i64,
}

/// `k = k_I floor((n-d+1)/n_I) + k_I - e_I + L*(e_I)` with `e_I = (n-d+1) mod n_I`.
pub fn theorem4_dimension(n: u64, d: u64, r: u64, t: u64) -> Result<Theorem4Dimension> {
    if r < 2 || t < 1 {
        return Err(Error::InvalidParameters(format!("need r >= 2 and t >= 1 (r={r}, t={t})")));
    }
    let n_inner = binomial(r + t, t);
    if !n.is_multiple_of(n_inner) {
        return Err(Error::InvalidParameters(format!(
            "length {n} is not a multiple of the inner length {n_inner}"
        )));
    }
    if !(1..=n).contains(&d) {
        return Err(Error::InvalidParameters(format!("distance {d} outside 1..={n}")));
    }
    let k_inner = n_inner * r / (r + t);
    let m = n - d + 1;
    let (full_blocks, e_inner) = (m / n_inner, m % n_inner);
    let l = l_star(e_inner, r, t)?;
    Ok(Theorem4Dimension {
        n_inner,
        k_inner,
        full_blocks,
        e_inner,
        l_star: l,
        k: (k_inner * full_blocks + k_inner) as i64 - e_inner as i64 + l as i64,
    })
}

/// Outcome of the whole-block erasure pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdversarialOutcome {
    pub erased: Vec<usize>,
    pub survivor_rank: usize,
    pub decoded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErasureTrialStats {
    pub erasures: usize,
    pub trials: usize,
    pub successes: usize,
    pub min_survivor_rank: usize,
    pub seed: u64,
    pub adversarial: Option<AdversarialOutcome>,
}

impl ErasureTrialStats {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn all_decoded(&self) -> bool {
        self.successes == self.trials && self.adversarial.as_ref().is_none_or(|a| a.decoded)
    }
}

fn decode_pattern(code: &CompositeCode, erased: &[usize], rng: &mut ChaCha8Rng) -> Result<(bool, usize)> {
    let tower = code.tower();
    let message: Vec<_> = (0..code.k()).map(|_| tower.random_element(rng)).collect();
    let word = code.encode(&message)?;
    let mut gone = vec![false; code.n()];
    for &j in erased {
        gone[j] = true;
    }
    let received: Vec<_> = (0..code.n()).filter(|&j| !gone[j]).map(|j| (j, word[j].clone())).collect();
    let survivors: Vec<usize> = received.iter().map(|(j, _)| *j).collect();
    let survivor_rank = code.survivor_rank(&survivors);
    let ok = match composite_erasure_decode(code, &received)? {
        DecodeOutcome::Decoded(m) => m == message,
        DecodeOutcome::Failed { .. } => false,
    };
    Ok((ok, survivor_rank))
}

/// Whole inner blocks erased first, the remainder placed in the next block
/// where it removes the most survivor rank.
pub fn whole_block_pattern(code: &CompositeCode, e: usize) -> Option<Vec<usize>> {
    let CompositeKind::Concatenated { n_inner, blocks, .. } = code.kind() else {
        return None;
    };
    if e > n_inner * blocks {
        return None;
    }
    let (full, rest) = (e / n_inner, e % n_inner);
    let mut erased: Vec<usize> = (0..full * n_inner).collect();
    if rest > 0 {
        let offset = full * n_inner;
        let worst = (offset..offset + n_inner)
            .combinations(rest)
            .min_by_key(|subset| {
                let survivors: Vec<usize> = (offset..offset + n_inner).filter(|j| !subset.contains(j)).collect();
                code.survivor_rank(&survivors)
            })
            .expect("rest < n_inner");
        erased.extend(worst);
    }
    Some(erased)
}

/// Encodes random messages, erases uniformly random `e`-subsets and decodes.
/// Concatenated codes additionally get the whole-block pattern.
pub fn erasure_monte_carlo(code: &CompositeCode, e: usize, trials: usize, seed: u64) -> Result<ErasureTrialStats> {
    let n = code.n();
    if e >= n {
        return Err(Error::InvalidParameters(format!("{e} erasures leave nothing of length {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0;
    let mut min_rank = usize::MAX;
    for _ in 0..trials {
        let erased = index::sample(&mut rng, n, e).into_vec();
        let (ok, rank) = decode_pattern(code, &erased, &mut rng)?;
        successes += usize::from(ok);
        min_rank = min_rank.min(rank);
    }
    let adversarial = match whole_block_pattern(code, e) {
        Some(erased) => {
            let (decoded, survivor_rank) = decode_pattern(code, &erased, &mut rng)?;
            min_rank = min_rank.min(survivor_rank);
            Some(AdversarialOutcome {
                erased,
                survivor_rank,
                decoded,
            })
        }
        None => None,
    };
    if min_rank == usize::MAX {
        min_rank = code.survivor_rank(&(0..n).collect::<Vec<_>>());
    }
    Ok(ErasureTrialStats {
        erasures: e,
        trials,
        successes,
        min_survivor_rank: min_rank,
        seed,
        adversarial,
    })
}

/// Smallest survivor rank over all erasure sets of each size `0..=n`.
///
/// Concatenated codes are handled blockwise, since their evaluation points in
/// different blocks are independent; other codes need an exhaustive scan.
pub fn worst_survivor_ranks(code: &CompositeCode) -> Result<Vec<usize>> {
    let n = code.n();
    if let CompositeKind::Concatenated { n_inner, blocks, .. } = code.kind() {
        let total = blocks as u64 * (1u64 << n_inner.min(63));
        if n_inner > 24 || total > ERASURE_SUBSET_BUDGET {
            return Err(Error::BudgetExceeded(format!("inner length {n_inner}")));
        }
        let mut acc = vec![0usize];
        for b in 0..blocks {
            let offset = b * n_inner;
            let mut local = vec![usize::MAX; n_inner + 1];
            for mask in 0u32..(1 << n_inner) {
                let survivors: Vec<usize> =
                    (0..n_inner).filter(|i| mask & (1 << i) == 0).map(|i| offset + i).collect();
                let e = mask.count_ones() as usize;
                local[e] = local[e].min(code.survivor_rank(&survivors));
            }
            let mut next = vec![usize::MAX; acc.len() + n_inner];
            for (e1, &r1) in acc.iter().enumerate() {
                for (e2, &r2) in local.iter().enumerate() {
                    next[e1 + e2] = next[e1 + e2].min(r1 + r2);
                }
            }
            acc = next;
        }
        return Ok(acc);
    }
    let total = 1u64.checked_shl(n as u32).unwrap_or(u64::MAX);
    if n > 40 || total > ERASURE_SUBSET_BUDGET {
        return Err(Error::BudgetExceeded(format!("2^{n} erasure sets")));
    }
    let mut worst = vec![usize::MAX; n + 1];
    for mask in 0u64..total {
        let survivors: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        let e = mask.count_ones() as usize;
        worst[e] = worst[e].min(code.survivor_rank(&survivors));
    }
    Ok(worst)
}

/// Smallest number of erasures that can leave fewer than `k` independent
/// evaluation points, i.e. the minimum distance of the composite code.
pub fn composite_distance(code: &CompositeCode) -> Result<usize> {
    let worst = worst_survivor_ranks(code)?;
    Ok(worst.iter().position(|&r| r < code.k()).unwrap_or(code.n() + 1))
}

/// Fraction of random erasure sets `E` of size `e` for which the parity
/// submatrix on rows `Gamma(E)` and columns `E` has full rank, with the
/// nonzero entries redrawn for every trial.
pub fn erased_submatrix_full_rank_frequency(
    graph: &BipartiteGraph,
    base: &BaseField,
    e: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = graph.n_left();
    if e == 0 || e > n {
        return Err(Error::InvalidParameters(format!("erasure size {e} outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut full = 0usize;
    for _ in 0..trials {
        let erased = index::sample(&mut rng, n, e).into_vec();
        let rows: Vec<usize> = graph.neighborhood(&erased).into_iter().collect();
        let mut sub = Matrix::filled(rows.len(), e, 0u16);
        for (ci, &v) in erased.iter().enumerate() {
            for &c in graph.neighbors(v) {
                let ri = rows.binary_search(&c).expect("neighbour row present");
                sub.set(ri, ci, base.random_nonzero(&mut rng));
            }
        }
        full += usize::from(rank(base, &sub) == rows.len().min(e));
    }
    Ok(full as f64 / trials.max(1) as f64)
}

/// Violations of `rank(H_E) >= L*(|E|)` over every erasure set `E` of one
/// WZL(r, t) block, where `H_E` is the inner parity restricted to `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LStarAudit {
    pub sets_checked: u64,
    pub violations: Vec<Vec<usize>>,
    /// Smallest `rank(H_E)` observed per erasure size.
    pub min_rank: Vec<usize>,
}

pub fn audit_l_star(r: usize, t: usize) -> Result<LStarAudit> {
    let code = build_wzl(r, t)?;
    let n = code.n();
    if n > 24 {
        return Err(Error::BudgetExceeded(format!("2^{n} erasure sets")));
    }
    let h = code.parity();
    let base = code.field();
    let mut violations = Vec::new();
    let mut min_rank = vec![usize::MAX; n + 1];
    for mask in 1u32..(1 << n) {
        let erased: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut basis = EchelonBasis::new(base.clone());
        for &j in &erased {
            basis.insert(&h.column(j));
        }
        let rk = basis.rank();
        let e = erased.len();
        min_rank[e] = min_rank[e].min(rk);
        if (rk as u64) < l_star(e as u64, r as u64, t as u64)? {
            violations.push(erased);
        }
    }
    min_rank[0] = 0;
    Ok(LStarAudit {
        sets_checked: (1u64 << n) - 1,
        violations,
        min_rank,
    })
}
