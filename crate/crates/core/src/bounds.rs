//! Distance and rate bounds for `(r, t)`-LRC codes.
//!
//! Finite-length bounds use exact integer arithmetic. The asymptotic curves
//! use `f64` and the expander expansion coefficient comes from a bisection
//! solver on a binary-entropy equation.

use std::io::{self, Write};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Upper bound `k*(q, n, d)` on the dimension of any linear code.
pub trait DimensionOracle {
    fn k_star(&self, q: u64, n: i64, d: i64) -> i64;
}

/// Upper bound `d*(q, n, k)` on the minimum distance of any linear code.
pub trait DistanceOracle {
    fn d_star(&self, q: u64, n: i64, k: i64) -> i64;
}

/// `k <= n - d + 1` and `d <= n - k + 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Singleton;

impl DimensionOracle for Singleton {
    fn k_star(&self, _q: u64, n: i64, d: i64) -> i64 {
        n - d + 1
    }
}

impl DistanceOracle for Singleton {
    fn d_star(&self, _q: u64, n: i64, k: i64) -> i64 {
        n - k + 1
    }
}

/// `n >= sum_{i<k} ceil(d / q^i)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Griesmer;

fn griesmer_length(q: u64, k: i64, d: i64) -> i64 {
    let mut total = 0i64;
    let mut qi: i64 = 1;
    for _ in 0..k {
        total += (d + qi - 1) / qi;
        qi = qi.saturating_mul(q as i64);
    }
    total
}

impl DimensionOracle for Griesmer {
    fn k_star(&self, q: u64, n: i64, d: i64) -> i64 {
        if d <= 0 {
            return n.max(0);
        }
        let mut k = 0;
        while k < n && griesmer_length(q, k + 1, d) <= n {
            k += 1;
        }
        k
    }
}

impl DistanceOracle for Griesmer {
    fn d_star(&self, q: u64, n: i64, k: i64) -> i64 {
        if k <= 0 {
            return n.max(0);
        }
        let mut d = 0;
        while d < n && griesmer_length(q, k, d + 1) <= n {
            d += 1;
        }
        d
    }
}

/// Code parameters fed to the bound calculators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub r: i64,
    pub t: i64,
    pub q: u64,
}

impl BoundQuery {
    pub fn new(n: i64, k: i64, r: i64, t: i64) -> Result<Self> {
        if !(1..=n).contains(&k) || r < 1 || t < 0 {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= n, r >= 1, t >= 0 (n={n}, k={k}, r={r}, t={t})"
            )));
        }
        Ok(BoundQuery { n, k, d: 1, r, t, q: 2 })
    }

    pub fn with_d(mut self, d: i64) -> Self {
        self.d = d;
        self
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = q;
        self
    }
}

/// `R*(r, t) = prod_{i=1..t} 1 / (1 + 1/(i r))`.
pub fn rate_cap(r: u64, t: u64) -> Ratio<u64> {
    (1..=t).fold(Ratio::from_integer(1), |acc, i| acc * Ratio::new(i * r, i * r + 1))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `d <= n - k + 2 - ceil((t(k-1)+1) / (t(r-1)+1))`.
pub fn wang_rawat_bound(q: &BoundQuery) -> Result<i64> {
    if q.t < 1 {
        return Err(Error::InvalidParameters("availability t must be at least 1".into()));
    }
    Ok(q.n - q.k + 2 - ceil_div(q.t * (q.k - 1) + 1, q.t * (q.r - 1) + 1))
}

/// `d <= n - sum_{i=0..t} floor((k-1) / r^i)`.
pub fn tbf_bound(q: &BoundQuery) -> i64 {
    let mut sum = 0;
    let mut ri: i64 = 1;
    for _ in 0..=q.t {
        sum += (q.k - 1) / ri;
        ri = ri.saturating_mul(q.r);
    }
    q.n - sum
}

/// Alphabet-dependent shortening bound: minimum of `d*(n - B, k - A)` over
/// `1 <= x <= ceil((k-1)/((r-1)t+1))`, `1 <= y_j <= t`, `A < k`, where
/// `A = sum (r-1) y_j + x` and `B = sum r y_j + x`.
///
/// Both `A` and `B` depend on the `y_j` only through `Y = sum y_j`, which
/// ranges over `x..=x t`, so the scan runs over `(x, Y)`. `None` when no
/// admissible `(x, Y)` exists.
pub fn yaakobi_bound(q: &BoundQuery, oracle: &dyn DistanceOracle) -> Result<Option<i64>> {
    if q.t < 1 {
        return Err(Error::InvalidParameters("availability t must be at least 1".into()));
    }
    let x_max = ceil_div(q.k - 1, (q.r - 1) * q.t + 1);
    let mut best: Option<i64> = None;
    for x in 1..=x_max {
        for y in x..=x * q.t {
            let a = (q.r - 1) * y + x;
            if a >= q.k {
                break;
            }
            let b = q.r * y + x;
            let v = oracle.d_star(q.q, q.n - b, q.k - a);
            best = Some(best.map_or(v, |cur| cur.min(v)));
        }
    }
    Ok(best)
}

/// `d <= n - (k-1) - floor((k-2)/(r-1))`.
pub fn corollary1_bound(n: i64, k: i64, r: i64) -> Result<i64> {
    if r < 2 || k < 2 {
        return Err(Error::InvalidParameters(format!(
            "shortening distance bound needs r >= 2 and k >= 2 (r={r}, k={k})"
        )));
    }
    Ok(n - (k - 1) - (k - 2) / (r - 1))
}

/// Binary entropy in bits, `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Left-hand side of the expansion equation at `delta`.
pub fn lemma1_residual(delta: f64, gamma: f64, t: u32, r: u32) -> f64 {
    let c = gamma * (r as f64 + 1.0);
    let t = t as f64;
    (t - 1.0) / t * binary_entropy(delta)
        - binary_entropy((delta * c).clamp(0.0, 1.0)) / (r as f64 + 1.0)
        - delta * c * binary_entropy(1.0 / c)
}

fn gamma_range(t: u32, r: u32) -> Result<(f64, f64)> {
    if t < 2 || r < 1 {
        return Err(Error::InvalidParameters(format!("need t >= 2 and r >= 1 (t={t}, r={r})")));
    }
    let lo = 1.0 / (r as f64 + 1.0);
    let hi = 1.0 - 1.0 / t as f64;
    if lo >= hi {
        return Err(Error::InvalidParameters(format!(
            "empty gamma range [{lo}, {hi}) for t={t}, r={r}"
        )));
    }
    Ok((lo, hi))
}

/// Positive root `delta` of the expansion equation for the given `gamma`.
///
/// At the lower end `gamma = 1/(r+1)` the root is exactly 1. Otherwise the
/// root lies below `1/(gamma (r+1))`, where the residual is negative; the
/// positive side is found by halving towards zero.
pub fn lemma1_delta(gamma: f64, t: u32, r: u32) -> Result<f64> {
    let (lo_g, hi_g) = gamma_range(t, r)?;
    if !(gamma >= lo_g - 1e-15 && gamma < hi_g) {
        return Err(Error::InvalidParameters(format!(
            "gamma {gamma} outside [{lo_g}, {hi_g})"
        )));
    }
    let c = gamma * (r as f64 + 1.0);
    if c <= 1.0 + 1e-15 {
        return Ok(1.0);
    }
    let f = |d: f64| lemma1_residual(d, gamma, t, r);
    let mut hi = 1.0 / c;
    let mut lo = hi / 2.0;
    let mut halvings = 0;
    while f(lo) <= 0.0 {
        hi = lo;
        lo /= 2.0;
        halvings += 1;
        if halvings > 1100 || lo == 0.0 {
            return Err(Error::NoSignChange);
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

/// Largest `gamma` in `[1/(r+1), 1 - 1/t)` whose root is at least `delta`.
pub fn gamma_of_delta(delta: f64, t: u32, r: u32) -> Result<f64> {
    let (mut lo, mut hi) = gamma_range(t, r)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameters(format!("delta {delta} outside (0, 1]")));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match lemma1_delta(mid, t, r) {
            Ok(root) if root >= delta => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(lo)
}

/// One grid point of the rate-versus-relative-distance comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub delta: f64,
    /// Shortening upper bound, `(r-1)/r (1 - delta)`.
    pub upper_new: f64,
    /// Asymptotic floor-sum bound `(1 - delta) / sum_{i=0..t} r^-i`.
    pub upper_tbf: f64,
    /// Expander construction, `1 - t/(r+1) - max(delta (1 - t gamma), 0)`.
    pub lower_expander: f64,
    /// Concatenated construction, `r/(r+t) (1 - delta)`.
    pub lower_concat: f64,
    pub rate_cap: f64,
}

pub const CURVES_CSV_HEADER: &str = "delta,upper_new,upper_tbf,lower_expander,lower_concat,rate_cap";

pub fn expander_rate(delta: f64, t: u32, r: u32) -> Result<f64> {
    let base = 1.0 - t as f64 / (r as f64 + 1.0);
    if delta <= 0.0 {
        return Ok(base.clamp(0.0, 1.0));
    }
    let gamma = gamma_of_delta(delta, t, r)?;
    let penalty = (delta * (1.0 - t as f64 * gamma)).max(0.0);
    Ok((base - penalty).clamp(0.0, 1.0))
}

pub fn curves(r: u32, t: u32, grid: usize) -> Result<Vec<CurveRow>> {
    if grid < 2 || r < 2 || t < 2 {
        return Err(Error::InvalidParameters(format!(
            "curves need grid >= 2, r >= 2, t >= 2 (grid={grid}, r={r}, t={t})"
        )));
    }
    let (rf, tf) = (r as f64, t as f64);
    let tbf_den: f64 = (0..=t).map(|i| rf.powi(-(i as i32))).sum();
    let cap = {
        let c = rate_cap(r as u64, t as u64);
        *c.numer() as f64 / *c.denom() as f64
    };
    (0..grid)
        .map(|i| {
            let delta = i as f64 / (grid - 1) as f64;
            Ok(CurveRow {
                delta,
                upper_new: ((rf - 1.0) / rf * (1.0 - delta)).clamp(0.0, 1.0),
                upper_tbf: ((1.0 - delta) / tbf_den).clamp(0.0, 1.0),
                lower_expander: expander_rate(delta, t, r)?,
                lower_concat: (rf / (rf + tf) * (1.0 - delta)).clamp(0.0, 1.0),
                rate_cap: cap.clamp(0.0, 1.0),
            })
        })
        .collect()
}

/// First relative distance at which the expander curve catches up with the
/// concatenated one, linearly interpolated between grid points. `None` if the
/// concatenated curve is not ahead at the first point or never falls behind.
pub fn concat_expander_crossover(rows: &[CurveRow]) -> Option<f64> {
    let diff = |row: &CurveRow| row.lower_concat - row.lower_expander;
    let first = rows.first()?;
    if diff(first) <= 0.0 {
        return None;
    }
    rows.windows(2).find_map(|w| {
        let (a, b) = (diff(&w[0]), diff(&w[1]));
        (a > 0.0 && b <= 0.0).then(|| w[0].delta + (w[1].delta - w[0].delta) * a / (a - b))
    })
}

/// Formats `x` with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_curves_csv<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CURVES_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig12(row.delta),
            format_sig12(row.upper_new),
            format_sig12(row.upper_tbf),
            format_sig12(row.lower_expander),
            format_sig12(row.lower_concat),
            format_sig12(row.rate_cap),
        )?;
    }
    Ok(())
}
