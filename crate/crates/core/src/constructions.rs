//! Code builders: subset-incidence (WZL) codes, random biregular graphs and
//! their parity matrices, and the two Gabidulin-based composite codes.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gabidulin::{gab_encode, moore_interpolate, GabidulinSpec};
use crate::galois::{BaseField, ExtElement, Field, FieldTower};
use crate::linalg::{nullspace, rank, EchelonBasis, Matrix};

/// A linear code given by a parity-check matrix whose rows may be redundant.
#[derive(Clone, Debug)]
pub struct LinearCode<F: Field> {
    field: F,
    n: usize,
    k: usize,
    parity: Matrix<F::Elem>,
    claimed_r: Option<usize>,
    claimed_t: Option<usize>,
}

impl<F: Field> LinearCode<F> {
    pub fn from_parity(field: F, parity: Matrix<F::Elem>) -> Self {
        let n = parity.cols();
        let k = n - rank(&field, &parity);
        LinearCode {
            field,
            n,
            k,
            parity,
            claimed_r: None,
            claimed_t: None,
        }
    }

    pub fn from_generator(field: F, generator: &Matrix<F::Elem>) -> Self {
        let n = generator.cols();
        let parity = Matrix::from_rows(n, nullspace(&field, generator)).expect("rows of length n");
        Self::from_parity(field, parity)
    }

    pub fn with_locality(mut self, r: usize, t: usize) -> Self {
        self.claimed_r = Some(r);
        self.claimed_t = Some(t);
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parity(&self) -> &Matrix<F::Elem> {
        &self.parity
    }

    pub fn claimed_r(&self) -> Option<usize> {
        self.claimed_r
    }

    pub fn claimed_t(&self) -> Option<usize> {
        self.claimed_t
    }

    /// Systematic generator (`k x n`), identity on the non-pivot columns of the
    /// reduced parity matrix.
    pub fn generator(&self) -> Matrix<F::Elem> {
        Matrix::from_rows(self.n, nullspace(&self.field, &self.parity)).expect("rows of length n")
    }

    pub fn encode(&self, message: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let g = self.generator();
        if message.len() != g.rows() {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for dimension {}",
                message.len(),
                g.rows()
            )));
        }
        Ok(crate::linalg::mul_vec(&self.field, &g.transpose(), message).expect("checked length"))
    }
}

/// Coordinate and check labels of the subset-incidence code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WzlLayout {
    pub r: usize,
    pub t: usize,
    /// t-subsets of `0..r+t`, one per coordinate, in lexicographic order.
    pub coordinates: Vec<Vec<usize>>,
    /// (t-1)-subsets, one per parity row.
    pub checks: Vec<Vec<usize>>,
}

pub const WZL_MAX_LENGTH: u64 = 100_000;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

pub fn wzl_layout(r: usize, t: usize) -> Result<WzlLayout> {
    if r == 0 || t == 0 {
        return Err(Error::InvalidParameters("WZL codes need r >= 1 and t >= 1".into()));
    }
    let n = binomial((r + t) as u64, t as u64);
    if n > WZL_MAX_LENGTH {
        return Err(Error::BudgetExceeded(format!(
            "WZL length {n} exceeds {WZL_MAX_LENGTH}"
        )));
    }
    Ok(WzlLayout {
        r,
        t,
        coordinates: (0..r + t).combinations(t).collect(),
        checks: (0..r + t).combinations(t - 1).collect(),
    })
}

/// Binary `(r, t)` code on the t-subsets of `r + t` points, one check per
/// (t-1)-subset covering the t-subsets that contain it.
pub fn build_wzl(r: usize, t: usize) -> Result<LinearCode<BaseField>> {
    let layout = wzl_layout(r, t)?;
    let index: HashMap<&[usize], usize> = layout
        .coordinates
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let n = layout.coordinates.len();
    let mut parity = Matrix::filled(layout.checks.len(), n, 0u16);
    for (row, s) in layout.checks.iter().enumerate() {
        for x in (0..r + t).filter(|x| !s.contains(x)) {
            let mut subset = s.clone();
            subset.push(x);
            subset.sort_unstable();
            parity.set(row, index[subset.as_slice()], 1);
        }
    }
    let gf2 = crate::galois::build_base_field(1)?;
    Ok(LinearCode::from_parity(gf2, parity).with_locality(r, t))
}

/// Bipartite graph with left vertices (code coordinates) and right vertices (checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(n_right: usize, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for nb in adjacency.iter_mut() {
            nb.sort_unstable();
            if let Some(&c) = nb.iter().find(|&&c| c >= n_right) {
                return Err(Error::IndexOutOfRange { index: c, n: n_right });
            }
        }
        Ok(BipartiteGraph {
            n_left: adjacency.len(),
            n_right,
            adjacency,
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn right_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_right];
        for (v, nb) in self.adjacency.iter().enumerate() {
            for &c in nb {
                out[c].push(v);
            }
        }
        out
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        self.right_adjacency().iter().map(Vec::len).collect()
    }

    /// No parallel edges.
    pub fn is_simple(&self) -> bool {
        self.adjacency.iter().all(|nb| nb.windows(2).all(|w| w[0] != w[1]))
    }

    /// No 4-cycles: distinct left vertices share at most one right neighbor.
    pub fn has_girth_above_4(&self) -> bool {
        if !self.is_simple() {
            return false;
        }
        let mut seen_pairs = BTreeSet::new();
        for nb in &self.adjacency {
            for pair in nb.iter().tuple_combinations::<(_, _)>() {
                if !seen_pairs.insert(pair) {
                    return false;
                }
            }
        }
        true
    }

    /// `Gamma(V')`.
    pub fn neighborhood(&self, left: &[usize]) -> BTreeSet<usize> {
        left.iter().flat_map(|&v| self.adjacency[v].iter().copied()).collect()
    }
}

fn sample_configuration(
    n: usize,
    t: usize,
    rp1: usize,
    seed: u64,
    max_tries: usize,
    need_girth: bool,
) -> Result<BipartiteGraph> {
    if n == 0 || t == 0 || rp1 == 0 {
        return Err(Error::InvalidParameters("degrees and size must be positive".into()));
    }
    if !(n * t).is_multiple_of(rp1) {
        return Err(Error::InvalidParameters(format!(
            "right degree {rp1} does not divide n*t = {}",
            n * t
        )));
    }
    let n_right = n * t / rp1;
    if t > n_right || rp1 > n {
        return Err(Error::InvalidParameters(format!(
            "no simple ({t}, {rp1})-biregular graph on {n} + {n_right} vertices"
        )));
    }
    if need_girth {
        // Each left vertex uses t(t-1)/2 distinct pairs of right vertices.
        let pairs_needed = n as u64 * binomial(t as u64, 2);
        let pairs_available = binomial(n_right as u64, 2);
        if pairs_needed > pairs_available {
            return Err(Error::GirthInfeasible(format!(
                "{n} left vertices need {pairs_needed} distinct right pairs, only {pairs_available} exist"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut right_stubs: Vec<usize> = (0..n_right).flat_map(|c| std::iter::repeat_n(c, rp1)).collect();
    for _ in 0..max_tries {
        right_stubs.shuffle(&mut rng);
        let adjacency: Vec<Vec<usize>> = right_stubs.chunks(t).map(<[usize]>::to_vec).collect();
        let g = BipartiteGraph::new(n_right, adjacency)?;
        let ok = if need_girth { g.has_girth_above_4() } else { g.is_simple() };
        if ok {
            return Ok(g);
        }
    }
    Err(Error::SamplingFailed(max_tries))
}

/// Configuration-model sample of a `(t, rp1)`-biregular graph with `n` left
/// vertices, resampled until it is simple and free of 4-cycles.
pub fn sample_biregular(n: usize, t: usize, rp1: usize, seed: u64, max_tries: usize) -> Result<BipartiteGraph> {
    sample_configuration(n, t, rp1, seed, max_tries, true)
}

/// Like [`sample_biregular`] but only rejects parallel edges; 4-cycles are kept.
pub fn sample_biregular_simple(
    n: usize,
    t: usize,
    rp1: usize,
    seed: u64,
    max_tries: usize,
) -> Result<BipartiteGraph> {
    sample_configuration(n, t, rp1, seed, max_tries, false)
}

/// Parameters of a `(t, r+1, alpha, t*gamma)`-expander.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpanderParams {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl ExpanderParams {
    pub fn new(alpha: f64, gamma: f64, r: usize, t: usize) -> Result<Self> {
        let lo = 1.0 / (r as f64 + 1.0);
        let hi = 1.0 - 1.0 / t as f64;
        if !(lo..hi).contains(&gamma) {
            return Err(Error::InvalidParameters(format!(
                "gamma {gamma} outside [{lo}, {hi})"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameters(format!("alpha {alpha} outside (0, 1]")));
        }
        Ok(ExpanderParams {
            alpha,
            gamma,
            beta: t as f64 * (1.0 - gamma) - 1.0,
        })
    }
}

pub const EXPANSION_SUBSET_BUDGET: u64 = 50_000_000;

/// Smallest `|Gamma(V')|` over all left subsets of each size `1..=max_size`
/// (index 0 of the result is size 1).
pub fn min_neighborhoods(g: &BipartiteGraph, max_size: usize) -> Result<Vec<usize>> {
    let max_size = max_size.min(g.n_left);
    let total: u64 = (1..=max_size as u64)
        .map(|s| binomial(g.n_left as u64, s))
        .fold(0u64, u64::saturating_add);
    if max_size > 24 || total > EXPANSION_SUBSET_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{total} subsets of size <= {max_size}"
        )));
    }
    let words = g.n_right.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = g
        .adjacency
        .iter()
        .map(|nb| {
            let mut m = vec![0u64; words];
            for &c in nb {
                m[c / 64] |= 1 << (c % 64);
            }
            m
        })
        .collect();
    let mut best = vec![usize::MAX; max_size];

    fn visit(
        masks: &[Vec<u64>],
        start: usize,
        depth: usize,
        union: &[u64],
        best: &mut [usize],
    ) {
        for v in start..masks.len() {
            let next: Vec<u64> = union.iter().zip(&masks[v]).map(|(a, b)| a | b).collect();
            let size = next.iter().map(|w| w.count_ones() as usize).sum();
            if size < best[depth] {
                best[depth] = size;
            }
            if depth + 1 < best.len() {
                visit(masks, v + 1, depth + 1, &next, best);
            }
        }
    }

    if max_size > 0 {
        visit(&masks, 0, 0, &vec![0u64; words], &mut best);
    }
    Ok(best)
}

/// Exhaustively checks `|V'| <= alpha n  =>  |Gamma(V')| > t gamma |V'|`
/// over nonempty left subsets, where `t` is the left degree.
pub fn check_expansion(g: &BipartiteGraph, alpha: Ratio<u64>, gamma: Ratio<u64>) -> Result<bool> {
    let max_size = (alpha * Ratio::from_integer(g.n_left as u64)).to_integer() as usize;
    let t = g.adjacency.first().map_or(0, Vec::len) as u64;
    let best = min_neighborhoods(g, max_size)?;
    Ok(best.iter().enumerate().all(|(i, &gamma_size)| {
        let s = i as u64 + 1;
        // |Gamma| > t * gamma * s, cleared of denominators.
        gamma_size as u64 * gamma.denom() > t * gamma.numer() * s
    }))
}

/// One row per right vertex, nonzero uniformly random entries on its edges.
pub fn build_expander_parity(g: &BipartiteGraph, base: &BaseField, seed: u64) -> Matrix<u16> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = Matrix::filled(g.n_right(), g.n_left(), 0u16);
    for (c, left) in g.right_adjacency().iter().enumerate() {
        for &v in left {
            h.set(c, v, base.random_nonzero(&mut rng));
        }
    }
    h
}

/// Which outer code the Gabidulin symbols were encoded with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositeKind {
    Expander,
    Concatenated {
        n_inner: usize,
        k_inner: usize,
        blocks: usize,
    },
}

/// A Gabidulin code over the extension field followed by a base-field linear
/// encoder applied coordinate-wise.
#[derive(Clone, Debug)]
pub struct CompositeCode {
    kind: CompositeKind,
    tower: FieldTower,
    gab: GabidulinSpec,
    outer_map: Matrix<u16>,
    parity: Matrix<u16>,
}

/// Result of an erasure decoding attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Vec<ExtElement>),
    /// The surviving evaluation points span fewer than `needed` dimensions.
    Failed { survivor_rank: usize, needed: usize },
}

impl CompositeCode {
    /// Reassembles a composite code from its parts, checking consistency.
    pub fn from_parts(
        kind: CompositeKind,
        gab: GabidulinSpec,
        outer_map: Matrix<u16>,
        parity: Matrix<u16>,
    ) -> Result<Self> {
        let tower = gab.tower().clone();
        let base = tower.base();
        if outer_map.rows() != gab.n() {
            return Err(Error::DimensionMismatch(format!(
                "outer map has {} rows for Gabidulin length {}",
                outer_map.rows(),
                gab.n()
            )));
        }
        if parity.cols() != outer_map.cols() {
            return Err(Error::DimensionMismatch("parity and outer map lengths differ".into()));
        }
        if rank(base, &outer_map) != outer_map.rows() {
            return Err(Error::InvalidParameters("outer map is not of full row rank".into()));
        }
        let check = crate::linalg::mul(base, &parity, &outer_map.transpose())?;
        if (0..check.rows()).any(|r| check.row(r).iter().any(|&x| x != 0)) {
            return Err(Error::InvalidParameters("outer map rows violate the parity checks".into()));
        }
        if outer_map.rows() + rank(base, &parity) != outer_map.cols() {
            return Err(Error::InvalidParameters("outer map does not span the parity's code".into()));
        }
        if let CompositeKind::Concatenated { n_inner, k_inner, blocks } = kind {
            if n_inner * blocks != outer_map.cols() || k_inner * blocks != outer_map.rows() {
                return Err(Error::InvalidParameters("block structure does not match dimensions".into()));
            }
        }
        Ok(CompositeCode {
            kind,
            tower,
            gab,
            outer_map,
            parity,
        })
    }

    pub fn kind(&self) -> CompositeKind {
        self.kind
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn gabidulin(&self) -> &GabidulinSpec {
        &self.gab
    }

    pub fn outer_map(&self) -> &Matrix<u16> {
        &self.outer_map
    }

    pub fn parity(&self) -> &Matrix<u16> {
        &self.parity
    }

    pub fn n(&self) -> usize {
        self.outer_map.cols()
    }

    pub fn k(&self) -> usize {
        self.gab.k()
    }

    pub fn n_g(&self) -> usize {
        self.gab.n()
    }

    /// `beta_j = sum_i outer[i][j] alpha_i`, the point coordinate `j` evaluates.
    pub fn betas(&self) -> Vec<ExtElement> {
        (0..self.n()).map(|j| self.beta(j)).collect()
    }

    pub fn beta(&self, j: usize) -> ExtElement {
        let points = self.gab.eval_points();
        (0..self.n_g()).fold(self.tower.zero(), |acc, i| {
            let c = *self.outer_map.get(i, j);
            if c == 0 {
                acc
            } else {
                self.tower.ext_add(&acc, &self.tower.scale(c, &points[i]))
            }
        })
    }

    pub fn encode(&self, message: &[ExtElement]) -> Result<Vec<ExtElement>> {
        let g = gab_encode(&self.gab, message)?;
        Ok((0..self.n())
            .map(|j| {
                (0..self.n_g()).fold(self.tower.zero(), |acc, i| {
                    let c = *self.outer_map.get(i, j);
                    if c == 0 {
                        acc
                    } else {
                        self.tower.ext_add(&acc, &self.tower.scale(c, &g[i]))
                    }
                })
            })
            .collect())
    }

    /// Base-field rank of the evaluation points at `surviving` coordinates.
    pub fn survivor_rank(&self, surviving: &[usize]) -> usize {
        let mut basis = EchelonBasis::new(self.tower.base().clone());
        for &j in surviving {
            basis.insert(&self.outer_map.column(j));
            if basis.rank() == self.n_g() {
                break;
            }
        }
        basis.rank()
    }

    /// The base-field code whose checks the outer encoder satisfies.
    pub fn outer_code(&self) -> LinearCode<BaseField> {
        LinearCode::from_parity(self.tower.base().clone(), self.parity.clone())
    }

    /// The composite code as an extension-field linear code, generated by the
    /// Moore matrix `beta_j^(q^i)`, `i < k`.
    pub fn as_linear_code(&self) -> LinearCode<FieldTower> {
        let betas = self.betas();
        let mut g = Matrix::zeros(&self.tower, self.k(), self.n());
        for (j, b) in betas.iter().enumerate() {
            let mut p = b.clone();
            for i in 0..self.k() {
                if i > 0 {
                    p = self.tower.frobenius_once(&p);
                }
                g.set(i, j, p.clone());
            }
        }
        LinearCode::from_generator(self.tower.clone(), &g)
    }
}

/// Gabidulin code of dimension `k` followed by the code of `parity`.
pub fn assemble_expander_code(tower: &FieldTower, parity: &Matrix<u16>, k: usize) -> Result<CompositeCode> {
    let base = tower.base();
    let rho = rank(base, parity);
    if rho < parity.rows() {
        return Err(Error::RankDeficientParity {
            rank: rho,
            rows: parity.rows(),
        });
    }
    let n = parity.cols();
    let n_g = n - rho;
    if n_g > tower.m() {
        return Err(Error::InvalidParameters(format!(
            "outer dimension {n_g} exceeds extension degree {}",
            tower.m()
        )));
    }
    let outer = Matrix::from_rows(n, nullspace(base, parity))?;
    let gab = GabidulinSpec::with_default_points(tower.clone(), n_g, k)?;
    CompositeCode::from_parts(CompositeKind::Expander, gab, outer, parity.clone())
}

/// Gabidulin code whose `blocks * k_I` symbols are split into groups of `k_I`
/// and each group encoded by the binary WZL(r, t) code.
pub fn assemble_concatenated(
    tower: &FieldTower,
    r: usize,
    t: usize,
    blocks: usize,
    k: usize,
) -> Result<CompositeCode> {
    if tower.base().w() != 1 {
        return Err(Error::InvalidParameters("concatenated construction needs a binary base field".into()));
    }
    if blocks == 0 {
        return Err(Error::InvalidParameters("at least one block required".into()));
    }
    let inner = build_wzl(r, t)?;
    let (n_i, k_i) = (inner.n(), inner.k());
    let n_g = blocks * k_i;
    if n_g > tower.m() {
        return Err(Error::InvalidParameters(format!(
            "outer length {n_g} exceeds extension degree {}",
            tower.m()
        )));
    }
    let g_inner = inner.generator();
    let h_inner = inner.parity();
    let n = blocks * n_i;
    let mut outer = Matrix::filled(n_g, n, 0u16);
    let mut parity = Matrix::filled(blocks * h_inner.rows(), n, 0u16);
    for b in 0..blocks {
        for i in 0..k_i {
            for j in 0..n_i {
                outer.set(b * k_i + i, b * n_i + j, *g_inner.get(i, j));
            }
        }
        for i in 0..h_inner.rows() {
            for j in 0..n_i {
                parity.set(b * h_inner.rows() + i, b * n_i + j, *h_inner.get(i, j));
            }
        }
    }
    let gab = GabidulinSpec::with_default_points(tower.clone(), n_g, k)?;
    let kind = CompositeKind::Concatenated {
        n_inner: n_i,
        k_inner: k_i,
        blocks,
    };
    CompositeCode::from_parts(kind, gab, outer, parity)
}

/// Recovers the message from surviving `(index, value)` pairs by Moore
/// interpolation over a greedily chosen independent subset of the points.
pub fn composite_erasure_decode(code: &CompositeCode, received: &[(usize, ExtElement)]) -> Result<DecodeOutcome> {
    let n = code.n();
    let mut seen = vec![false; n];
    for (j, v) in received {
        if *j >= n {
            return Err(Error::IndexOutOfRange { index: *j, n });
        }
        if seen[*j] {
            return Err(Error::DuplicateIndex(*j));
        }
        if v.coords().len() != code.tower.m() {
            return Err(Error::DimensionMismatch("received symbol with wrong coordinate count".into()));
        }
        seen[*j] = true;
    }
    let mut order: Vec<&(usize, ExtElement)> = received.iter().collect();
    order.sort_by_key(|(j, _)| *j);

    let k = code.k();
    let mut basis = EchelonBasis::new(code.tower.base().clone());
    let mut points = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for (j, v) in &order {
        if points.len() == k {
            break;
        }
        if basis.insert(&code.outer_map.column(*j)) {
            points.push(code.beta(*j));
            values.push(v.clone());
        }
    }
    if points.len() < k {
        let all: Vec<usize> = order.iter().map(|(j, _)| *j).collect();
        return Ok(DecodeOutcome::Failed {
            survivor_rank: code.survivor_rank(&all),
            needed: k,
        });
    }
    let f = moore_interpolate(&code.tower, &points, &values)?;
    Ok(DecodeOutcome::Decoded(f.padded_coeffs(&code.tower, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::build_base_field;
    use crate::linalg::mul_vec;
    use rand::Rng;

    fn random_message<R: Rng>(t: &FieldTower, k: usize, rng: &mut R) -> Vec<ExtElement> {
        (0..k).map(|_| t.random_element(rng)).collect()
    }

    #[test]
    fn wzl_repetition_case() {
        for t in 1..5 {
            let c = build_wzl(1, t).unwrap();
            assert_eq!((c.n(), c.k()), (t + 1, 1));
            let g = c.generator();
            assert!(g.row(0).iter().all(|&x| x == 1));
        }
    }

    #[test]
    fn wzl_dimensions() {
        for (r, t, n, k) in [(2, 2, 6, 3), (3, 2, 10, 6), (2, 3, 10, 4), (4, 2, 15, 10), (3, 3, 20, 10)] {
            let c = build_wzl(r, t).unwrap();
            assert_eq!((c.n(), c.k()), (n, k), "WZL({r},{t})");
            assert_eq!(rank(c.field(), c.parity()), n - k);
        }
    }

    #[test]
    fn wzl_row_and_column_weights() {
        let c = build_wzl(3, 3).unwrap();
        let h = c.parity();
        for r in 0..h.rows() {
            assert_eq!(h.row(r).iter().filter(|&&x| x == 1).count(), 4);
        }
        for col in 0..h.cols() {
            assert_eq!(h.column(col).iter().filter(|&&x| x == 1).count(), 3);
        }
    }

    #[test]
    fn wzl_checks_through_a_coordinate_are_disjoint_elsewhere() {
        for (r, t) in [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3)] {
            let c = build_wzl(r, t).unwrap();
            let h = c.parity();
            for col in 0..c.n() {
                let rows: Vec<usize> = (0..h.rows()).filter(|&i| *h.get(i, col) == 1).collect();
                assert_eq!(rows.len(), t);
                for (a, b) in rows.iter().tuple_combinations() {
                    let shared: Vec<usize> = (0..c.n())
                        .filter(|&j| *h.get(*a, j) == 1 && *h.get(*b, j) == 1)
                        .collect();
                    assert_eq!(shared, vec![col]);
                }
            }
        }
    }

    #[test]
    fn wzl_size_cap() {
        assert!(matches!(build_wzl(30, 10), Err(Error::BudgetExceeded(_))));
        assert!(build_wzl(0, 2).is_err());
    }

    #[test]
    fn sampler_degree_audit() {
        let g = sample_biregular(6, 2, 3, 1, 10_000).unwrap();
        assert_eq!(g.n_right(), 4);
        assert!(g.left_degrees().iter().all(|&d| d == 2));
        assert!(g.right_degrees().iter().all(|&d| d == 3));
        for a in 0..6 {
            for b in a + 1..6 {
                let shared = g.neighbors(a).iter().filter(|c| g.neighbors(b).contains(c)).count();
                assert!(shared <= 1);
            }
        }
    }

    #[test]
    fn sampler_matching_case() {
        let g = sample_biregular(5, 1, 5, 3, 10).unwrap();
        assert_eq!(g.n_right(), 1);
        assert!(g.has_girth_above_4());
    }

    #[test]
    fn sampler_is_deterministic_and_validates() {
        assert_eq!(
            sample_biregular(12, 2, 3, 9, 10_000).unwrap(),
            sample_biregular(12, 2, 3, 9, 10_000).unwrap()
        );
        assert!(sample_biregular(7, 2, 3, 0, 10).is_err());
        assert!(matches!(sample_biregular(14, 3, 7, 0, 10), Err(Error::GirthInfeasible(_))));
        let g = sample_biregular_simple(14, 3, 7, 7, 10_000).unwrap();
        assert_eq!(g.n_right(), 6);
        assert!(g.is_simple());
        assert!(g.right_degrees().iter().all(|&d| d == 7));
    }

    #[test]
    fn singleton_expansion_needs_gamma_below_one() {
        let g = sample_biregular(6, 2, 3, 1, 10_000).unwrap();
        let alpha = Ratio::new(1, 6);
        assert!(check_expansion(&g, alpha, Ratio::new(9, 10)).unwrap());
        assert!(!check_expansion(&g, alpha, Ratio::new(1, 1)).unwrap());
    }

    #[test]
    fn expansion_on_pairs_matches_enumeration() {
        let g = sample_biregular(6, 2, 3, 1, 10_000).unwrap();
        // Oracle: every pair of left vertices, union sizes by hand.
        let mut min_pair = usize::MAX;
        for a in 0..6 {
            for b in a + 1..6 {
                min_pair = min_pair.min(g.neighborhood(&[a, b]).len());
            }
        }
        assert_eq!(min_pair, 3);
        assert_eq!(min_neighborhoods(&g, 2).unwrap(), vec![2, 3]);
        // 1.8 * 2 = 3.6 > 3 fails at pairs; 1.8 * 1 = 1.8 < 2 passes singletons.
        assert!(!check_expansion(&g, Ratio::new(1, 3), Ratio::new(9, 10)).unwrap());
        // t*gamma = 1: pairs need more than 2 neighbours.
        assert!(check_expansion(&g, Ratio::new(1, 3), Ratio::new(1, 2)).unwrap());
    }

    #[test]
    fn expander_parity_support_and_weights() {
        let g = sample_biregular(12, 2, 3, 4, 10_000).unwrap();
        let gf2 = build_base_field(1).unwrap();
        let h = build_expander_parity(&g, &gf2, 1);
        for (c, left) in g.right_adjacency().iter().enumerate() {
            for v in 0..12 {
                assert_eq!(*h.get(c, v) == 1, left.contains(&v));
            }
        }
        let gf16 = build_base_field(4).unwrap();
        let h = build_expander_parity(&g, &gf16, 1);
        for c in 0..h.rows() {
            assert_eq!(h.row(c).iter().filter(|&&x| x != 0).count(), 3);
        }
        for v in 0..h.cols() {
            assert_eq!(h.column(v).iter().filter(|&&x| x != 0).count(), 2);
        }
        let code = LinearCode::from_parity(gf16, h.clone());
        // k/n >= 1 - t/(r+1), equality at full rank.
        assert!(3 * code.k() >= 12);
        assert_eq!(code.k() == 4, rank(code.field(), &h) == h.rows());
    }

    #[test]
    fn plain_gabidulin_when_no_checks() {
        let tower = FieldTower::with_seed(2, 5, 1).unwrap();
        let parity = Matrix::from_rows(5, vec![]).unwrap();
        let code = assemble_expander_code(&tower, &parity, 3).unwrap();
        assert_eq!(code.n_g(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let msg = random_message(&tower, 3, &mut rng);
        assert_eq!(code.encode(&msg).unwrap(), gab_encode(code.gabidulin(), &msg).unwrap());
    }

    fn expander_composite() -> CompositeCode {
        let g = sample_biregular(12, 2, 3, 4, 10_000).unwrap();
        let tower = FieldTower::with_seed(4, 4, 2).unwrap();
        let h = build_expander_parity(&g, tower.base(), 5);
        assemble_expander_code(&tower, &h, 3).unwrap()
    }

    #[test]
    fn composite_codewords_satisfy_parity_and_linearity() {
        let code = expander_composite();
        let tower = code.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let betas = code.betas();
        for _ in 0..100 {
            let msg = random_message(&tower, code.k(), &mut rng);
            let c = code.encode(&msg).unwrap();
            let lifted = code.parity().clone();
            for row in 0..lifted.rows() {
                let s = (0..code.n()).fold(tower.zero(), |acc, j| {
                    tower.ext_add(&acc, &tower.scale(*lifted.get(row, j), &c[j]))
                });
                assert!(tower.is_zero(&s));
            }
            let f = crate::gabidulin::LinearizedPoly::new(&tower, msg.clone());
            for j in 0..code.n() {
                assert_eq!(c[j], crate::gabidulin::lin_eval(&tower, &f, &betas[j]));
            }
        }
    }

    #[test]
    fn rank_deficient_parity_rejected() {
        let tower = FieldTower::with_seed(1, 8, 0).unwrap();
        let wzl = build_wzl(2, 2).unwrap();
        assert!(matches!(
            assemble_expander_code(&tower, wzl.parity(), 2),
            Err(Error::RankDeficientParity { rank: 3, rows: 4 })
        ));
    }

    #[test]
    fn decode_without_erasures_and_with_exactly_k_survivors() {
        let code = expander_composite();
        let tower = code.tower().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let msg = random_message(&tower, code.k(), &mut rng);
            let c = code.encode(&msg).unwrap();
            let all: Vec<_> = c.iter().cloned().enumerate().collect();
            assert_eq!(composite_erasure_decode(&code, &all).unwrap(), DecodeOutcome::Decoded(msg.clone()));
            // Keep only a greedy independent set of size k.
            let mut basis = EchelonBasis::new(tower.base().clone());
            let mut keep = Vec::new();
            let mut idx: Vec<usize> = (0..code.n()).collect();
            idx.shuffle(&mut rng);
            for j in idx {
                if keep.len() < code.k() && basis.insert(&code.outer_map().column(j)) {
                    keep.push((j, c[j].clone()));
                }
            }
            assert_eq!(code.survivor_rank(&keep.iter().map(|p| p.0).collect::<Vec<_>>()), code.k());
            assert_eq!(composite_erasure_decode(&code, &keep).unwrap(), DecodeOutcome::Decoded(msg));
        }
    }

    #[test]
    fn decode_rejects_duplicates() {
        let code = expander_composite();
        let z = code.tower().zero();
        assert_eq!(
            composite_erasure_decode(&code, &[(1, z.clone()), (1, z)]).unwrap_err(),
            Error::DuplicateIndex(1)
        );
    }

    #[test]
    fn concatenated_layout() {
        let tower = FieldTower::with_seed(1, 18, 0).unwrap();
        let code = assemble_concatenated(&tower, 3, 2, 3, 9).unwrap();
        assert_eq!((code.n(), code.n_g(), code.k()), (30, 18, 9));
        let wzl = build_wzl(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let msg = random_message(&tower, 9, &mut rng);
            let c = code.encode(&msg).unwrap();
            for b in 0..3 {
                for row in 0..wzl.parity().rows() {
                    let s = (0..10).fold(tower.zero(), |acc, j| {
                        tower.ext_add(&acc, &tower.scale(*wzl.parity().get(row, j), &c[b * 10 + j]))
                    });
                    assert!(tower.is_zero(&s));
                }
            }
        }
    }

    #[test]
    fn concatenated_repetition_blocks() {
        let tower = FieldTower::with_seed(1, 4, 0).unwrap();
        let code = assemble_concatenated(&tower, 1, 3, 1, 1).unwrap();
        assert_eq!(code.n(), 4);
        let msg = vec![tower.basis(2)];
        let c = code.encode(&msg).unwrap();
        assert!(c.iter().all(|x| *x == c[0]));
    }

    #[test]
    fn concatenated_whole_block_loss_fails_when_rank_short() {
        let tower = FieldTower::with_seed(1, 18, 0).unwrap();
        let code = assemble_concatenated(&tower, 3, 2, 3, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let msg = random_message(&tower, 9, &mut rng);
        let c = code.encode(&msg).unwrap();
        // Erase blocks 0 and 1 entirely plus one symbol of block 2: rank 6 < 9.
        let survivors: Vec<_> = (21..30).map(|j| (j, c[j].clone())).collect();
        assert_eq!(
            composite_erasure_decode(&code, &survivors).unwrap(),
            DecodeOutcome::Failed { survivor_rank: 6, needed: 9 }
        );
    }

    #[test]
    fn encode_linear_code() {
        let c = build_wzl(2, 2).unwrap();
        let cw = c.encode(&[1, 0, 1]).unwrap();
        assert!(mul_vec(c.field(), c.parity(), &cw).unwrap().iter().all(|&x| x == 0));
        assert!(c.encode(&[1]).is_err());
    }
}
