//! Linearized polynomials and Gabidulin codes over a [`FieldTower`].

use crate::error::{Error, Result};
use crate::galois::{ExtElement, Field, FieldTower};
use crate::linalg::{rank_over_base, solve, Matrix};

/// `f(x) = sum_i a_i x^(q^i)` with coefficients in the extension field.
///
/// Trailing zero coefficients are dropped, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    coeffs: Vec<ExtElement>,
}

impl LinearizedPoly {
    pub fn new(tower: &FieldTower, mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(|c| tower.is_zero(c)) {
            coeffs.pop();
        }
        LinearizedPoly { coeffs }
    }

    pub fn zero() -> Self {
        LinearizedPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    /// q-degree, `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients padded with zeros to exactly `len` entries.
    pub fn padded_coeffs(&self, tower: &FieldTower, len: usize) -> Vec<ExtElement> {
        let mut out = self.coeffs.clone();
        out.resize(len.max(out.len()), tower.zero());
        out
    }
}

pub fn lin_eval(tower: &FieldTower, f: &LinearizedPoly, x: &ExtElement) -> ExtElement {
    let mut acc = tower.zero();
    let mut power = x.clone();
    for (i, a) in f.coeffs.iter().enumerate() {
        if i > 0 {
            power = tower.frobenius_once(&power);
        }
        if !tower.is_zero(a) {
            acc = tower.ext_add(&acc, &tower.ext_mul(a, &power));
        }
    }
    acc
}

/// Evaluation points and dimensions of an `[n_G, k_G]` Gabidulin code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabidulinSpec {
    tower: FieldTower,
    n: usize,
    k: usize,
    eval_points: Vec<ExtElement>,
}

impl GabidulinSpec {
    /// Evaluation points `1, x, ..., x^(n-1)` of the polynomial basis.
    pub fn with_default_points(tower: FieldTower, n: usize, k: usize) -> Result<Self> {
        if n > tower.m() {
            return Err(Error::InvalidParameters(format!(
                "Gabidulin length {n} exceeds extension degree {}",
                tower.m()
            )));
        }
        let points = (0..n).map(|i| tower.basis(i)).collect();
        Self::new(tower, k, points)
    }

    pub fn new(tower: FieldTower, k: usize, eval_points: Vec<ExtElement>) -> Result<Self> {
        let n = eval_points.len();
        if k > n {
            return Err(Error::InvalidParameters(format!("dimension {k} exceeds length {n}")));
        }
        if n > tower.m() {
            return Err(Error::InvalidParameters(format!(
                "Gabidulin length {n} exceeds extension degree {}",
                tower.m()
            )));
        }
        if eval_points.iter().any(|p| p.coords().len() != tower.m()) {
            return Err(Error::DimensionMismatch("evaluation point with wrong coordinate count".into()));
        }
        if rank_over_base(&tower, &eval_points) != n {
            return Err(Error::DependentPoints);
        }
        Ok(GabidulinSpec {
            tower,
            n,
            k,
            eval_points,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eval_points(&self) -> &[ExtElement] {
        &self.eval_points
    }
}

/// Evaluates the message polynomial (coefficients = message) at every point.
pub fn gab_encode(spec: &GabidulinSpec, message: &[ExtElement]) -> Result<Vec<ExtElement>> {
    if message.len() != spec.k {
        return Err(Error::DimensionMismatch(format!(
            "message of length {} for dimension {}",
            message.len(),
            spec.k
        )));
    }
    let f = LinearizedPoly::new(&spec.tower, message.to_vec());
    Ok(spec
        .eval_points
        .iter()
        .map(|a| lin_eval(&spec.tower, &f, a))
        .collect())
}

pub fn rank_weight(tower: &FieldTower, v: &[ExtElement]) -> usize {
    rank_over_base(tower, v)
}

/// The unique `f` of q-degree below `k = points.len()` with `f(points_i) = values_i`.
pub fn moore_interpolate(
    tower: &FieldTower,
    points: &[ExtElement],
    values: &[ExtElement],
) -> Result<LinearizedPoly> {
    let k = points.len();
    if values.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "{k} points but {} values",
            values.len()
        )));
    }
    if rank_over_base(tower, points) != k {
        return Err(Error::DependentPoints);
    }
    let mut moore = Matrix::zeros(tower, k, k);
    for (i, p) in points.iter().enumerate() {
        let mut power = p.clone();
        for j in 0..k {
            if j > 0 {
                power = tower.frobenius_once(&power);
            }
            moore.set(i, j, power.clone());
        }
    }
    let coeffs = solve(tower, &moore, values)?
        .ok_or_else(|| Error::Internal("Moore system inconsistent for independent points".into()))?;
    Ok(LinearizedPoly::new(tower, coeffs))
}
