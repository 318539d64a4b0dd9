//! Uniform radial grid, quadrature, and finite-difference operators.
//!
//! Everything downstream reduces 2-D radial integrals to one dimension,
//!
//!   ∫_{ℝ²} f dx = 2π ∫₀^∞ f(r) r dr,
//!
//! discretized on the uniform mesh r_j = j·dr, j = 0..n−1, dr = r_max/(n−1).
//! The quadrature is the trapezoid rule on g(r) = f(r)·r with Euler–Maclaurin
//! end corrections,
//!
//!   ∫₀^{r_max} g dr ≈ T[g] − dr²/12 · (g′(r_max) − g′(0)),
//!
//! which upgrades the rule to O(dr⁴). At the origin the correction is exact:
//! g′(0) = f(0) since g = f·r. At the outer end g′(r_max) is estimated with a
//! one-sided second-order stencil; for fields that decay before r_max (the
//! only regime in which the outer boundary is meaningful here) that term is
//! negligible. The same correction is applied inside the cumulative prefix
//! and suffix integrals that feed the gauge potentials.
//!
//! Differential operators follow the usual radial conventions: Δu = u_rr +
//! u_r/r with the regularity limit Δu(0) = 4(u(r₁) − u(0))/r₁² at the origin
//! (u_r(0) = 0 forces u_rr + u_r/r → 2u_rr) and a homogeneous Dirichlet ghost
//! value at r_max.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform radial mesh on [0, r_max] with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n: usize,
    r_max: f64,
    dr: f64,
    nodes: Vec<f64>,
    /// Quadrature weights for ∫_{ℝ²} f dx = Σ_j w_j f(r_j); 2π folded in.
    quad_w: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, r_max: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::contract(format!("grid needs n >= 3, got {n}")));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::contract(format!("r_max must be positive, got {r_max}")));
        }
        let dr = r_max / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|j| j as f64 * dr).collect();

        // Trapezoid on g = f·r (node 0 carries weight 0 since r_0 = 0), then
        // Euler–Maclaurin end corrections distributed onto nearby nodes.
        let mut w: Vec<f64> = nodes.iter().map(|&r| r * dr).collect();
        w[n - 1] *= 0.5;
        // Origin: +dr²/12 · g'(0), g'(0) = f(0).
        w[0] += dr * dr / 12.0;
        // Outer end: −dr²/12 · g'(r_max) with
        // g'(r_max) ≈ r_max (3f_{n-1} − 4f_{n-2} + f_{n-3})/(2dr) + f_{n-1}.
        let c = dr * dr / 12.0;
        w[n - 1] -= c * (3.0 * r_max / (2.0 * dr) + 1.0);
        w[n - 2] += c * (4.0 * r_max / (2.0 * dr));
        w[n - 3] -= c * (r_max / (2.0 * dr));
        for wj in &mut w {
            *wj *= 2.0 * std::f64::consts::PI;
        }

        Ok(RadialGrid { n, r_max, dr, nodes, quad_w: w })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn dr(&self) -> f64 {
        self.dr
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }
    /// Quadrature weights of `integrate_radial` (2π included).
    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_w
    }

    fn check_samples(&self, f: &[f64], what: &str) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::contract(format!(
                "{what}: sample length {} does not match grid n = {}",
                f.len(),
                self.n
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::corrupted(format!("{what}: non-finite sample")));
        }
        Ok(())
    }

    /// 2π ∫₀^{r_max} f(r) r dr for real samples f(r_j).
    pub fn integrate_radial(&self, f: &[f64]) -> Result<f64> {
        self.check_samples(f, "integrate_radial")?;
        Ok(f.iter().zip(&self.quad_w).map(|(x, w)| x * w).sum())
    }

    /// Cumulative ∫₀^{r_j} f(ρ) ρ dρ (no 2π), end-corrected at every prefix.
    pub fn prefix_integral_r(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_samples(f, "prefix_integral_r")?;
        let n = self.n;
        let dr = self.dr;
        let g: Vec<f64> = f.iter().zip(&self.nodes).map(|(x, r)| x * r).collect();
        // derivative samples of g; g'(0) = f(0) exactly
        let mut gp = vec![0.0; n];
        gp[0] = f[0];
        for j in 1..n - 1 {
            gp[j] = (g[j + 1] - g[j - 1]) / (2.0 * dr);
        }
        gp[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * dr);

        let c = dr * dr / 12.0;
        let mut out = vec![0.0; n];
        let mut trap = 0.0;
        for j in 1..n {
            trap += 0.5 * dr * (g[j - 1] + g[j]);
            out[j] = trap - c * (gp[j] - gp[0]);
        }
        Ok(out)
    }

    /// Cumulative ∫_{r_j}^{r_max} h(ρ) dρ (plain measure), end-corrected.
    /// The tail beyond r_max is treated as zero.
    pub fn suffix_integral(&self, h: &[f64]) -> Result<Vec<f64>> {
        self.check_samples(h, "suffix_integral")?;
        let n = self.n;
        let dr = self.dr;
        let mut hp = vec![0.0; n];
        hp[0] = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * dr);
        for j in 1..n - 1 {
            hp[j] = (h[j + 1] - h[j - 1]) / (2.0 * dr);
        }
        hp[n - 1] = (3.0 * h[n - 1] - 4.0 * h[n - 2] + h[n - 3]) / (2.0 * dr);

        let c = dr * dr / 12.0;
        let mut out = vec![0.0; n];
        let mut trap = 0.0;
        out[n - 1] = 0.0;
        for j in (0..n - 1).rev() {
            trap += 0.5 * dr * (h[j] + h[j + 1]);
            out[j] = trap - c * (hp[n - 1] - hp[j]);
        }
        Ok(out)
    }
}

/// Complex radial profile u(r_j) on a shared grid; the dynamical state.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
    label: Option<String>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::contract(format!(
                "field length {} does not match grid n = {}",
                values.len(),
                grid.n()
            )));
        }
        let f = RadialField { grid, values, label: None };
        f.check_finite()?;
        Ok(f)
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let n = grid.n();
        RadialField { grid, values: vec![Complex64::new(0.0, 0.0); n], label: None }
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values: Vec<Complex64> = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::corrupted("field contains non-finite values"));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// |u(r_j)|² samples.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Linear interpolation at radius `r`; zero outside [0, r_max].
    pub fn sample_linear(&self, r: f64) -> Complex64 {
        let g = &self.grid;
        if r < 0.0 || r > g.r_max() {
            return Complex64::new(0.0, 0.0);
        }
        let x = r / g.dr();
        let j = (x.floor() as usize).min(g.n() - 2);
        let frac = x - j as f64;
        self.values[j] * (1.0 - frac) + self.values[j + 1] * frac
    }

    pub fn scaled(&self, c: Complex64) -> RadialField {
        let values = self.values.iter().map(|z| z * c).collect();
        RadialField { grid: self.grid.clone(), values, label: self.label.clone() }
    }
}

/// L^q norm: (∫ |u|^q dx)^{1/q}; q = ∞ gives sup_j |u(r_j)|.
pub fn lq_norm(u: &RadialField, q: f64) -> Result<f64> {
    if q.is_infinite() {
        return Ok(u.values().iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if !(q >= 1.0) {
        return Err(Error::contract(format!("lq_norm requires q >= 1, got {q}")));
    }
    let samples: Vec<f64> = u.values().iter().map(|z| z.norm().powf(q)).collect();
    Ok(u.grid().integrate_radial(&samples)?.max(0.0).powf(1.0 / q))
}

/// Δu = u_rr + u_r/r, second order; L'Hôpital limit at r = 0, homogeneous
/// Dirichlet ghost at r_max.
pub fn laplacian_radial(u: &RadialField) -> Result<RadialField> {
    let g = u.grid();
    let n = g.n();
    if n < 3 {
        return Err(Error::contract("laplacian_radial needs n >= 3"));
    }
    u.check_finite()?;
    let dr = g.dr();
    let v = u.values();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[0] = 4.0 * (v[1] - v[0]) / (dr * dr);
    for j in 1..n - 1 {
        let r = g.node(j);
        out[j] = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (dr * dr)
            + (v[j + 1] - v[j - 1]) / (2.0 * r * dr);
    }
    // ghost u(r_max + dr) = 0
    let r = g.node(n - 1);
    out[n - 1] = (-2.0 * v[n - 1] + v[n - 2]) / (dr * dr) + (-v[n - 2]) / (2.0 * r * dr);
    RadialField::new(g.clone(), out)
}

/// u_r by centered differences, one-sided second order at both ends.
pub fn radial_derivative(u: &RadialField) -> Result<RadialField> {
    let g = u.grid();
    let n = g.n();
    if n < 3 {
        return Err(Error::contract("radial_derivative needs n >= 3"));
    }
    u.check_finite()?;
    let dr = g.dr();
    let v = u.values();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dr);
    for j in 1..n - 1 {
        out[j] = (v[j + 1] - v[j - 1]) / (2.0 * dr);
    }
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dr);
    RadialField::new(g.clone(), out)
}

/// Fourth-order u_r used by the kinetic-energy quadrature. One-sided stencils
/// at the two nodes on each end keep it general (no evenness assumed).
pub(crate) fn apply_d4(grid: &RadialGrid, v: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let c = 1.0 / (12.0 * grid.dr());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * c;
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * c;
    for j in 2..n - 2 {
        out[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) * c;
    }
    out[n - 2] =
        (-v[n - 5] + 6.0 * v[n - 4] - 18.0 * v[n - 3] + 10.0 * v[n - 2] + 3.0 * v[n - 1]) * c;
    out[n - 1] =
        (3.0 * v[n - 5] - 16.0 * v[n - 4] + 36.0 * v[n - 3] - 48.0 * v[n - 2] + 25.0 * v[n - 1])
            * c;
    out
}

/// Exact transpose of `apply_d4` (plain, unweighted pairing): the gradient of
/// the discrete kinetic quadrature is D₄ᵀ(w ∘ D₄u), so differentiation checks
/// against finite differences close exactly.
pub(crate) fn apply_d4_transpose(grid: &RadialGrid, v: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let c = 1.0 / (12.0 * grid.dr());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut add = |col: usize, coeff: f64, row_val: Complex64| {
        out[col] += coeff * row_val * c;
    };
    // row 0 and 1 (one-sided)
    for (col, coeff) in [(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)] {
        add(col, coeff, v[0]);
    }
    for (col, coeff) in [(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)] {
        add(col, coeff, v[1]);
    }
    for j in 2..n - 2 {
        add(j - 2, 1.0, v[j]);
        add(j - 1, -8.0, v[j]);
        add(j + 1, 8.0, v[j]);
        add(j + 2, -1.0, v[j]);
    }
    for (col, coeff) in
        [(n - 5, -1.0), (n - 4, 6.0), (n - 3, -18.0), (n - 2, 10.0), (n - 1, 3.0)]
    {
        add(col, coeff, v[n - 2]);
    }
    for (col, coeff) in
        [(n - 5, 3.0), (n - 4, -16.0), (n - 3, 36.0), (n - 2, -48.0), (n - 1, 25.0)]
    {
        add(col, coeff, v[n - 1]);
    }
    out
}

/// ∫ |∇u|² dx with the fourth-order derivative and the grid quadrature.
pub fn grad_kinetic(u: &RadialField) -> Result<f64> {
    let g = u.grid();
    if g.n() < 8 {
        return Err(Error::contract("grad_kinetic needs n >= 8"));
    }
    u.check_finite()?;
    let du = apply_d4(g, u.values());
    Ok(du.iter().zip(g.quad_weights()).map(|(z, w)| z.norm_sqr() * w).sum())
}

/// ‖u‖_{H¹} = ‖u‖_{L²} + ‖∇u‖_{L²}.
pub fn h1_norm(u: &RadialField) -> Result<f64> {
    Ok(lq_norm(u, 2.0)? + grad_kinetic(u)?.max(0.0).sqrt())
}

/// sup_r r^{1/2}|u(r)| / (‖u‖_{L²}^{1/2} ‖∇u‖_{L²}^{1/2}).
///
/// The scale-critical denominator makes the ratio invariant under
/// u ↦ λu(λ·); since ab ≤ ((a+b)/2)², a bound on this ratio implies the
/// H¹-norm form of the weighted sup estimate.
pub fn strauss_ratio(u: &RadialField) -> Result<f64> {
    let sup = u
        .values()
        .iter()
        .zip(u.grid().nodes())
        .map(|(z, &r)| r.sqrt() * z.norm())
        .fold(0.0, f64::max);
    let l2 = lq_norm(u, 2.0)?;
    let gd = grad_kinetic(u)?.max(0.0).sqrt();
    if l2 == 0.0 || gd == 0.0 {
        return Err(Error::contract("strauss_ratio requires a nonzero field"));
    }
    Ok(sup / (l2.sqrt() * gd.sqrt()))
}
