//! Local checks, closures and the greedy shortening procedure behind the
//! `(r, t)`-LRC dimension and distance bounds.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;

use crate::bounds::{DimensionOracle, DistanceOracle};
use crate::constructions::{binomial, LinearCode};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::linalg::{nullspace, rref, EchelonBasis, Matrix};

/// Upper limit on `binom(n, r+1) (r+1)^3` for local-check enumeration.
pub const LOCAL_CHECK_BUDGET: u64 = 2_000_000_000;

/// Dual codewords of weight at most `r + 1`, each scaled so that its first
/// nonzero entry is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCheckSet<E> {
    pub n: usize,
    pub r: usize,
    pub checks: Vec<Vec<E>>,
}

impl<E> LocalCheckSet<E> {
    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

pub fn support<F: Field>(field: &F, v: &[F::Elem]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, _)| i)
        .collect()
}

fn normalize<F: Field>(field: &F, v: &mut [F::Elem]) {
    if let Some(lead) = v.iter().find(|x| !field.is_zero(x)) {
        let inv = field.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
    }
}

/// Every support `S` with `|S| <= r + 1` contributes a basis of the dual
/// codewords living inside `S`. Supports are visited by increasing size.
pub fn enumerate_local_checks<F: Field>(code: &LinearCode<F>, r: usize) -> Result<LocalCheckSet<F::Elem>> {
    let n = code.n();
    let max_size = (r + 1).min(n);
    let cost = binomial(n as u64, max_size as u64).saturating_mul((max_size as u64).pow(3));
    if cost > LOCAL_CHECK_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "local-check enumeration cost {cost} exceeds {LOCAL_CHECK_BUDGET}"
        )));
    }
    let field = code.field();
    let g = code.generator();
    let mut seen = HashSet::new();
    let mut checks = Vec::new();
    for size in 1..=max_size {
        for subset in (0..n).combinations(size) {
            for local in nullspace(field, &g.select_columns(&subset)) {
                let mut h = vec![field.zero(); n];
                for (&j, x) in subset.iter().zip(local) {
                    h[j] = x;
                }
                normalize(field, &mut h);
                if seen.insert(h.clone()) {
                    checks.push(h);
                }
            }
        }
    }
    Ok(LocalCheckSet { n, r, checks })
}

/// `I` together with every coordinate on which all codewords vanishing on `I`
/// also vanish.
pub fn closure<F: Field>(code: &LinearCode<F>, i_set: &[usize]) -> Result<Vec<usize>> {
    let n = code.n();
    if let Some(&bad) = i_set.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    let field = code.field();
    let g = code.generator();
    let restricted = g.select_columns(i_set).transpose();
    let combos = if restricted.rows() == 0 {
        (0..g.rows())
            .map(|i| {
                let mut e = vec![field.zero(); g.rows()];
                e[i] = field.one();
                e
            })
            .collect()
    } else {
        nullspace(field, &restricted)
    };
    let mut vanishing = vec![true; n];
    for u in &combos {
        for (j, flag) in vanishing.iter_mut().enumerate() {
            if !*flag {
                continue;
            }
            let mut acc = field.zero();
            for (i, ui) in u.iter().enumerate() {
                if !field.is_zero(ui) {
                    acc = field.add(&acc, &field.mul(ui, g.get(i, j)));
                }
            }
            if !field.is_zero(&acc) {
                *flag = false;
            }
        }
    }
    Ok((0..n).filter(|&j| vanishing[j]).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorteningResult {
    /// Indices into the local-check set, in selection order.
    pub x: Vec<usize>,
    pub i_set: Vec<usize>,
    /// Union of the supports of the selected checks.
    pub j_set: Vec<usize>,
    pub s: usize,
    /// Independent-check count at the first disjoint selection.
    pub s1: Option<usize>,
    /// Number of selected checks at the first disjoint selection.
    pub j: Option<usize>,
    /// Total number of selected checks.
    pub l: usize,
}

/// Greedy selection of `s` independent local checks with maximal overlap,
/// followed by removal of the pivot coordinates of the selected checks.
pub fn algorithm1<F: Field>(
    field: &F,
    checks: &LocalCheckSet<F::Elem>,
    s: usize,
    n: usize,
    r: usize,
) -> Result<ShorteningResult> {
    if s == 0 || checks.is_empty() {
        return Err(Error::InvalidParameters("need s >= 1 and a nonempty check set".into()));
    }
    if checks.checks.iter().any(|h| h.len() != n) {
        return Err(Error::DimensionMismatch(format!("check length differs from n = {n}")));
    }
    let supports: Vec<Vec<usize>> = checks.checks.iter().map(|h| support(field, h)).collect();
    let mut basis = EchelonBasis::new(field.clone());
    let mut used = vec![false; checks.len()];
    let mut covered = vec![false; n];
    let mut x = Vec::new();
    let (mut s1, mut j) = (None, None);
    while basis.rank() < s {
        let best = (0..checks.len())
            .filter(|&c| !used[c] && !basis.contains(&checks.checks[c]))
            .map(|c| (supports[c].iter().filter(|&&p| covered[p]).count(), c))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((overlap, c)) = best else {
            return Err(Error::NotEnoughChecks {
                available: basis.rank(),
                requested: s,
            });
        };
        if overlap == 0 && !x.is_empty() && s1.is_none() {
            s1 = Some(basis.rank());
            j = Some(x.len());
        }
        used[c] = true;
        basis.insert(&checks.checks[c]);
        x.push(c);
        for &p in &supports[c] {
            covered[p] = true;
        }
    }
    let j_set: Vec<usize> = (0..n).filter(|&p| covered[p]).collect();
    let rows: Vec<Vec<F::Elem>> = x.iter().map(|&c| checks.checks[c].clone()).collect();
    let pivots: BTreeSet<usize> = rref(field, &Matrix::from_rows(n, rows)?).pivots.into_iter().collect();
    let mut i_set: Vec<usize> = j_set.iter().copied().filter(|p| !pivots.contains(p)).collect();
    let target = 1 + (r.saturating_sub(1)) * s;
    let fresh = (0..n).filter(|p| !covered[*p]).chain(pivots.iter().copied());
    for p in fresh {
        if i_set.len() >= target {
            break;
        }
        i_set.push(p);
    }
    i_set.sort_unstable();
    Ok(ShorteningResult {
        l: x.len(),
        x,
        i_set,
        j_set,
        s,
        s1,
        j,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shortened {
    pub result: ShorteningResult,
    pub closure: Vec<usize>,
}

/// Enumerates the local checks, runs the greedy selection and closes `I`.
pub fn shorten<F: Field>(code: &LinearCode<F>, r: usize, s: usize) -> Result<Shortened> {
    let checks = enumerate_local_checks(code, r)?;
    if checks.is_empty() {
        return Err(Error::NotEnoughChecks { available: 0, requested: s });
    }
    let result = algorithm1(code.field(), &checks, s, code.n(), r)?;
    let closure = closure(code, &result.i_set)?;
    Ok(Shortened { result, closure })
}

/// `k <= |I| + k*(q, n - |Cl(I)|, d)`.
pub fn theorem1_k_bound(
    size_i: usize,
    size_cl: usize,
    n: usize,
    d: usize,
    q: u64,
    oracle: &dyn DimensionOracle,
) -> Result<i64> {
    if size_cl + d > n || size_i > size_cl {
        return Err(Error::InvalidParameters(format!(
            "need |I| <= |Cl(I)| <= n - d (|I|={size_i}, |Cl(I)|={size_cl}, n={n}, d={d})"
        )));
    }
    Ok(size_i as i64 + oracle.k_star(q, (n - size_cl) as i64, d as i64))
}

/// Value of a minimized bound and the `s` attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundAt {
    pub value: i64,
    pub s: i64,
}

/// Per-`s` terms of both shortening bounds. `None` outside the admissible range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShorteningRow {
    pub s: i64,
    pub k_bound: Option<i64>,
    pub d_bound: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Bounds {
    /// `None` when no `s >= 1` satisfies `s r + 1 <= n - d`.
    pub k_upper: Option<BoundAt>,
    /// `None` when no `s >= 1` satisfies `1 + (r-1) s < k`.
    pub d_upper: Option<BoundAt>,
    pub rows: Vec<ShorteningRow>,
}

/// `k <= min_{s r + 1 <= n - d} 1 + (r-1) s + k*(q, n - 1 - s r, d)` and
/// `d <= min_{1 + (r-1) s < k} d*(q, n - 1 - s r, k - 1 - (r-1) s)`.
pub fn theorem2_bounds(
    n: i64,
    k: i64,
    d: i64,
    r: i64,
    q: u64,
    k_oracle: &dyn DimensionOracle,
    d_oracle: &dyn DistanceOracle,
) -> Result<Theorem2Bounds> {
    if r < 2 || n < 1 || k < 1 || d < 1 {
        return Err(Error::InvalidParameters(format!(
            "need r >= 2 and positive n, k, d (n={n}, k={k}, d={d}, r={r})"
        )));
    }
    let mut rows = Vec::new();
    let (mut k_upper, mut d_upper): (Option<BoundAt>, Option<BoundAt>) = (None, None);
    let mut s = 1;
    loop {
        let k_term = (s * r < n - d).then(|| 1 + (r - 1) * s + k_oracle.k_star(q, n - 1 - s * r, d));
        let d_term = (1 + (r - 1) * s < k).then(|| d_oracle.d_star(q, n - 1 - s * r, k - 1 - (r - 1) * s));
        if k_term.is_none() && d_term.is_none() {
            break;
        }
        for (term, best) in [(k_term, &mut k_upper), (d_term, &mut d_upper)] {
            if let Some(value) = term {
                if best.is_none_or(|b| value < b.value) {
                    *best = Some(BoundAt { value, s });
                }
            }
        }
        rows.push(ShorteningRow {
            s,
            k_bound: k_term,
            d_bound: d_term,
        });
        s += 1;
    }
    Ok(Theorem2Bounds { k_upper, d_upper, rows })
}
