//! Uniform cell-centered grid on [−L, L]², field storage, midpoint
//! quadrature, centered finite differences, and the norms
//!
//! ```text
//!   ‖u‖²  = ∫ [|∇u|² + V(x)u²] dx          (potential-weighted H¹ norm)
//!   ‖u‖_* = (∫ ln(1+|x|)|u|^p dx)^{1/p}     (logarithmic weight norm)
//!   ‖u‖_q = (∫ |u|^q dx)^{1/q}
//!   ‖u‖_{X_p} = ‖u‖ + ‖u‖_*
//! ```
//!
//! ℝ² is truncated to [−L, L]² with zero extension; all integrals are the
//! midpoint rule h²Σ over cell centers. Cell-centered nodes with even N make
//! x ↦ −x, the axis/diagonal mirrors, and 90° rotations exact index
//! permutations, which the symmetry module relies on.

use crate::constants::DECAY_TOL;
use crate::error::{CoreError, Result};
use std::io::Write;
use std::sync::Arc;

/// Uniform cell-centered grid on [−L, L]² with N×N nodes, spacing h = 2L/N.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    l: f64,
    n: usize,
    h: f64,
}

impl Grid2D {
    /// Build a grid. N must be even and ≥ 8 so the symmetry group of the
    /// square acts by exact index permutations.
    pub fn new(l: f64, n: usize) -> Result<Arc<Self>> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(CoreError::NonPositiveLength(l));
        }
        if n % 2 != 0 {
            return Err(CoreError::OddGridSize(n));
        }
        if n < 8 {
            return Err(CoreError::GridTooSmall(n));
        }
        let h = 2.0 * l / n as f64;
        Ok(Arc::new(Grid2D { l, n, h }))
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Cell-center coordinate of index i along either axis:
    /// x_i = −L + (i + ½)h. Nodes are symmetric under x ↦ −x (i ↦ N−1−i).
    pub fn coord(&self, i: usize) -> f64 {
        -self.l + (i as f64 + 0.5) * self.h
    }

    /// Row-major flat index of node (ix, iy).
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.n + iy
    }

    /// Cell area h², the midpoint quadrature weight.
    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    pub fn num_nodes(&self) -> usize {
        self.n * self.n
    }
}

/// Real-valued samples of a function on a [`Grid2D`]; the discrete stand-in
/// for an element of X_p. Stored row-major: `values[ix * N + iy] = u(x_ix, y_iy)`.
#[derive(Debug, Clone)]
pub struct GridField {
    grid: Arc<Grid2D>,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: &Arc<Grid2D>) -> Self {
        GridField {
            grid: grid.clone(),
            values: vec![0.0; grid.num_nodes()],
        }
    }

    /// Sample a closed-form function at every node.
    pub fn from_fn(grid: &Arc<Grid2D>, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.size();
        let mut values = Vec::with_capacity(n * n);
        for ix in 0..n {
            let x = grid.coord(ix);
            for iy in 0..n {
                values.push(f(x, grid.coord(iy)));
            }
        }
        GridField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_values(grid: &Arc<Grid2D>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(CoreError::GridMismatch(
                grid.size(),
                (values.len() as f64).sqrt() as usize,
            ));
        }
        Ok(GridField {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &GridField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(CoreError::GridMismatch(self.grid.size(), other.grid.size()))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest |u| on the outermost ring of nodes. Fields entering kernel
    /// operations should keep this below `DECAY_TOL` (compact-support proxy).
    pub fn max_boundary_abs(&self) -> f64 {
        let n = self.grid.size();
        let mut m: f64 = 0.0;
        for i in 0..n {
            m = m.max(self.values[self.grid.idx(0, i)].abs());
            m = m.max(self.values[self.grid.idx(n - 1, i)].abs());
            m = m.max(self.values[self.grid.idx(i, 0)].abs());
            m = m.max(self.values[self.grid.idx(i, n - 1)].abs());
        }
        m
    }

    pub fn decay_ok(&self) -> bool {
        self.max_boundary_abs() < DECAY_TOL
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> GridField {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// self += c·other
    pub fn axpy(&mut self, c: f64, other: &GridField) -> Result<()> {
        self.same_grid(other)?;
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += c * w;
        }
        Ok(())
    }

    /// Pointwise |u|^p with the convention 0^p = 0.
    pub fn abs_pow(&self, p: f64) -> GridField {
        let mut out = self.clone();
        if p == 2.0 {
            for v in &mut out.values {
                *v *= *v;
            }
        } else {
            for v in &mut out.values {
                *v = v.abs().powf(p);
            }
        }
        out
    }

    /// L² inner product h²Σ u·v (quadrature pairing, not the H-form).
    pub fn dot_l2(&self, other: &GridField) -> Result<f64> {
        self.same_grid(other)?;
        let s = row_sum(self.grid.size(), |ix, iy| {
            let k = self.grid.idx(ix, iy);
            self.values[k] * other.values[k]
        });
        finite(s * self.grid.cell_area(), "dot_l2")
    }

    pub fn norm_l2(&self) -> f64 {
        let s = row_sum(self.grid.size(), |ix, iy| {
            let v = self.values[self.grid.idx(ix, iy)];
            v * v
        });
        (s * self.grid.cell_area()).sqrt()
    }

    /// Dump as CSV rows `x,y,u` in row-major node order, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "x,y,u")?;
        let n = self.grid.size();
        for ix in 0..n {
            let x = self.grid.coord(ix);
            for iy in 0..n {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e}",
                    x,
                    self.grid.coord(iy),
                    self.values[self.grid.idx(ix, iy)]
                )?;
            }
        }
        Ok(())
    }
}

/// Row-wise accumulation with a fixed summation order: each row is summed
/// left to right, rows are combined in index order. Keeps quadrature
/// bit-stable regardless of worker count.
fn row_sum(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for ix in 0..n {
        let mut row = 0.0;
        for iy in 0..n {
            row += f(ix, iy);
        }
        total += row;
    }
    total
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CoreError::NonFinite(what))
    }
}

/// Midpoint quadrature h² Σ_{ij} w(x_ij) standing in for ∫_{ℝ²} w dx.
pub fn integrate(w: &GridField) -> Result<f64> {
    let s = row_sum(w.grid.size(), |ix, iy| w.values[w.grid.idx(ix, iy)]);
    finite(s * w.grid.cell_area(), "integrate")
}

/// Centered difference along x with zero Dirichlet extension:
/// (∂u/∂x)_ij ≈ (u_{i+1,j} − u_{i−1,j}) / 2h.
pub fn diff_x(u: &GridField) -> GridField {
    let n = u.grid.size();
    let inv2h = 0.5 / u.grid.spacing();
    let mut out = GridField::zeros(&u.grid);
    for ix in 0..n {
        for iy in 0..n {
            let up = if ix + 1 < n {
                u.values[u.grid.idx(ix + 1, iy)]
            } else {
                0.0
            };
            let dn = if ix > 0 {
                u.values[u.grid.idx(ix - 1, iy)]
            } else {
                0.0
            };
            out.values[u.grid.idx(ix, iy)] = (up - dn) * inv2h;
        }
    }
    out
}

/// Centered difference along y with zero Dirichlet extension.
pub fn diff_y(u: &GridField) -> GridField {
    let n = u.grid.size();
    let inv2h = 0.5 / u.grid.spacing();
    let mut out = GridField::zeros(&u.grid);
    for ix in 0..n {
        for iy in 0..n {
            let up = if iy + 1 < n {
                u.values[u.grid.idx(ix, iy + 1)]
            } else {
                0.0
            };
            let dn = if iy > 0 {
                u.values[u.grid.idx(ix, iy - 1)]
            } else {
                0.0
            };
            out.values[u.grid.idx(ix, iy)] = (up - dn) * inv2h;
        }
    }
    out
}

/// Negative discrete Laplacian −Δ_h = Dₓᵀ Dₓ + D_yᵀ D_y, the exact adjoint
/// composition of the centered differences used by the norms. With it,
/// h²Σ (−Δ_h u)·v = ∫ ∇_h u · ∇_h v holds to roundoff including boundary
/// rows, which the finite-difference gradient checks depend on.
pub fn neg_laplacian(u: &GridField) -> GridField {
    // Dᵀ = −D for the centered difference with zero extension, so
    // DᵀD u = −D(D u); apply the difference twice and negate.
    let dxx = diff_x(&diff_x(u));
    let dyy = diff_y(&diff_y(u));
    let mut out = GridField::zeros(&u.grid);
    for (o, (a, b)) in out
        .values
        .iter_mut()
        .zip(dxx.values.iter().zip(dyy.values.iter()))
    {
        *o = -(a + b);
    }
    out
}

/// Scalar potential V(x) ≥ 0 with a selectable shape. All built-ins satisfy
/// the discrete positivity condition: V ≥ 0 everywhere and inf V > 0 on the
/// outer boundary ring.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// V ≡ v0
    Constant { v0: f64 },
    /// V(x) = v0 + c2·r²/(1+r²); radial, bounded, V → v0 + c2 at infinity.
    Radial { v0: f64, c2: f64 },
    /// V(x) = v0·(1 + eps·cos(kθ)·r²/(1+r²)); invariant under the k-fold
    /// rotation group and the mirror z ↦ z̄. Requires |eps| < 1.
    KSymmetric { v0: f64, eps: f64, k: usize },
}

impl Potential {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Potential::Constant { v0 } => v0,
            Potential::Radial { v0, c2 } => {
                let r2 = x * x + y * y;
                v0 + c2 * r2 / (1.0 + r2)
            }
            Potential::KSymmetric { v0, eps, k } => {
                let r2 = x * x + y * y;
                let theta = y.atan2(x);
                v0 * (1.0 + eps * (k as f64 * theta).cos() * r2 / (1.0 + r2))
            }
        }
    }

    /// Validate parameters and the discrete positivity condition on a grid:
    /// V ≥ 0 at every node, inf V > 0 on the outer ring.
    pub fn validate(&self, grid: &Arc<Grid2D>) -> Result<()> {
        match *self {
            Potential::Constant { v0 } => {
                if !(v0 > 0.0) {
                    return Err(CoreError::BadPotential(format!(
                        "constant potential needs v0 > 0, got {v0}"
                    )));
                }
            }
            Potential::Radial { v0, c2 } => {
                if !(v0 > 0.0) || !(v0 + c2 >= 0.0) {
                    return Err(CoreError::BadPotential(format!(
                        "radial potential needs v0 > 0 and v0 + c2 ≥ 0, got v0={v0}, c2={c2}"
                    )));
                }
            }
            Potential::KSymmetric { v0, eps, k } => {
                if !(v0 > 0.0) || !(eps.abs() < 1.0) || k < 2 {
                    return Err(CoreError::BadPotential(format!(
                        "k-symmetric potential needs v0 > 0, |eps| < 1, k ≥ 2; got v0={v0}, eps={eps}, k={k}"
                    )));
                }
            }
        }
        let n = grid.size();
        let mut ring_min = f64::INFINITY;
        for ix in 0..n {
            for iy in 0..n {
                let v = self.eval(grid.coord(ix), grid.coord(iy));
                if !(v >= 0.0) {
                    return Err(CoreError::BadPotential(format!(
                        "V({:.4},{:.4}) = {v} < 0",
                        grid.coord(ix),
                        grid.coord(iy)
                    )));
                }
                if ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1 {
                    ring_min = ring_min.min(v);
                }
            }
        }
        if !(ring_min > 0.0) {
            return Err(CoreError::BadPotential(
                "V vanishes somewhere on the outer boundary ring".into(),
            ));
        }
        Ok(())
    }

    /// Sample V at every node of a grid.
    pub fn sample(&self, grid: &Arc<Grid2D>) -> GridField {
        GridField::from_fn(grid, |x, y| self.eval(x, y))
    }

    /// sup of V over the closed ball of the given radius (dense polar sweep;
    /// exact for the constant shape).
    pub fn max_on_ball(&self, radius: f64) -> f64 {
        match *self {
            Potential::Constant { v0 } => v0,
            _ => {
                let mut m = self.eval(0.0, 0.0);
                let nr = 400;
                let nt = 256;
                for ir in 1..=nr {
                    let r = radius * ir as f64 / nr as f64;
                    for it in 0..nt {
                        let th = 2.0 * std::f64::consts::PI * it as f64 / nt as f64;
                        m = m.max(self.eval(r * th.cos(), r * th.sin()));
                    }
                }
                m
            }
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(
            self,
            Potential::Constant { .. } | Potential::Radial { .. }
        )
    }
}

/// ‖u‖² = ∫ [|∇_h u|² + V u²] dx with centered differences.
pub fn norm_h_sq(u: &GridField, v: &Potential) -> Result<f64> {
    inner_h(u, u, v)
}

/// ‖u‖ = (∫ [|∇_h u|² + V u²])^{1/2}.
pub fn norm_h(u: &GridField, v: &Potential) -> Result<f64> {
    Ok(norm_h_sq(u, v)?.sqrt())
}

/// ⟨u,v⟩ = ∫ (∇_h u · ∇_h w + V u w); bilinear and symmetric.
pub fn inner_h(u: &GridField, w: &GridField, v: &Potential) -> Result<f64> {
    u.same_grid(w)?;
    let gux = diff_x(u);
    let guy = diff_y(u);
    let (gwx, gwy);
    let same = std::ptr::eq(u, w);
    if same {
        gwx = None;
        gwy = None;
    } else {
        gwx = Some(diff_x(w));
        gwy = Some(diff_y(w));
    }
    let grid = &u.grid;
    let s = row_sum(grid.size(), |ix, iy| {
        let k = grid.idx(ix, iy);
        let vxy = v.eval(grid.coord(ix), grid.coord(iy));
        let gx2 = match &gwx {
            Some(g) => gux.values[k] * g.values[k],
            None => gux.values[k] * gux.values[k],
        };
        let gy2 = match &gwy {
            Some(g) => guy.values[k] * g.values[k],
            None => guy.values[k] * guy.values[k],
        };
        gx2 + gy2 + vxy * (u.values[k] * w.values[k])
    });
    finite(s * grid.cell_area(), "inner_h")
}

/// ‖u‖_* = (∫ ln(1+|x|)|u|^p dx)^{1/p}, p ≥ 2.
pub fn norm_star(u: &GridField, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(CoreError::OutOfRange(format!("norm_star needs p ≥ 2, got {p}")));
    }
    Ok(norm_star_pow(u, p)?.powf(1.0 / p))
}

/// ∫ ln(1+|x|)|u|^p dx (the p-th power of ‖u‖_*).
pub fn norm_star_pow(u: &GridField, p: f64) -> Result<f64> {
    let grid = &u.grid;
    let s = row_sum(grid.size(), |ix, iy| {
        let x = grid.coord(ix);
        let y = grid.coord(iy);
        let r = (x * x + y * y).sqrt();
        let a = u.values[grid.idx(ix, iy)].abs();
        let ap = if p == 2.0 { a * a } else { a.powf(p) };
        (1.0 + r).ln() * ap
    });
    finite(s * grid.cell_area(), "norm_star")
}

/// ‖u‖_q = (∫ |u|^q)^{1/q}, q ≥ 1.
pub fn norm_lq(u: &GridField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(CoreError::OutOfRange(format!("norm_lq needs q ≥ 1, got {q}")));
    }
    Ok(norm_lq_pow(u, q)?.powf(1.0 / q))
}

/// ∫ |u|^q dx.
pub fn norm_lq_pow(u: &GridField, q: f64) -> Result<f64> {
    let grid = &u.grid;
    let s = row_sum(grid.size(), |ix, iy| {
        let a = u.values[grid.idx(ix, iy)].abs();
        if q == 2.0 {
            a * a
        } else {
            a.powf(q)
        }
    });
    finite(s * grid.cell_area(), "norm_lq")
}

/// ‖u‖_{X_p} = ‖u‖ + ‖u‖_*.
pub fn norm_xp(u: &GridField, v: &Potential, p: f64) -> Result<f64> {
    Ok(norm_h(u, v)? + norm_star(u, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: &Arc<Grid2D>, sigma2: f64) -> GridField {
        GridField::from_fn(grid, |x, y| (-(x * x + y * y) / (2.0 * sigma2)).exp())
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(matches!(Grid2D::new(1.0, 5), Err(CoreError::OddGridSize(5))));
        assert!(matches!(Grid2D::new(1.0, 9), Err(CoreError::OddGridSize(9))));
        assert!(matches!(Grid2D::new(1.0, 4), Err(CoreError::GridTooSmall(4))));
        assert!(matches!(
            Grid2D::new(0.0, 8),
            Err(CoreError::NonPositiveLength(_))
        ));
    }

    #[test]
    fn cell_centered_spacing() {
        let g = Grid2D::new(1.0, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.coord(0), -0.875);
        assert_eq!(g.coord(7), 0.875);
        // negation symmetry of the node set
        for i in 0..8 {
            assert_eq!(g.coord(i), -g.coord(7 - i));
        }
        let g = Grid2D::new(8.0, 256).unwrap();
        assert_eq!(g.spacing(), 0.0625);
    }

    #[test]
    fn integrate_constant_is_box_area() {
        let g = Grid2D::new(1.0, 8).unwrap();
        let one = GridField::from_fn(&g, |_, _| 1.0);
        assert_eq!(integrate(&one).unwrap(), 4.0);
        let zero = GridField::zeros(&g);
        assert_eq!(integrate(&zero).unwrap(), 0.0);
    }

    #[test]
    fn integrate_gaussian_matches_pi() {
        let g = Grid2D::new(8.0, 256).unwrap();
        let w = GridField::from_fn(&g, |x, y| (-(x * x + y * y)).exp());
        let v = integrate(&w).unwrap();
        assert!((v - PI).abs() < 1e-8, "got {v}, want π = {PI}");
    }

    #[test]
    fn integrate_rejects_nonfinite() {
        let g = Grid2D::new(1.0, 8).unwrap();
        let mut w = GridField::zeros(&g);
        w.values_mut()[3] = f64::NAN;
        assert!(matches!(integrate(&w), Err(CoreError::NonFinite(_))));
    }

    #[test]
    fn integrate_linear_monotone() {
        let g = Grid2D::new(2.0, 16).unwrap();
        let w1 = GridField::from_fn(&g, |x, y| (x + y).sin());
        let w2 = GridField::from_fn(&g, |x, y| (x + y).sin() + 0.5);
        let a = integrate(&w1).unwrap();
        let b = integrate(&w2).unwrap();
        assert!(a <= b);
        // linearity
        let mut w3 = w1.clone();
        w3.axpy(2.0, &w2).unwrap();
        let c = integrate(&w3).unwrap();
        assert!((c - (a + 2.0 * b)).abs() <= 1e-12 * (1.0 + c.abs()));
    }

    #[test]
    fn norm_h_gaussian_analytic() {
        // u = e^{−|x|²/2}, V ≡ 1: ∫|∇u|² = π, ∫u² = π, so ‖u‖ = √(2π).
        let g = Grid2D::new(8.0, 256).unwrap();
        let u = gaussian(&g, 1.0);
        let v = Potential::Constant { v0: 1.0 };
        let got = norm_h(&u, &v).unwrap();
        let want = (2.0 * PI).sqrt();
        assert!(
            (got - want).abs() / want < 1e-3,
            "got {got}, want {want}, rel {}",
            (got - want).abs() / want
        );
    }

    #[test]
    fn norm_h_zero_field() {
        let g = Grid2D::new(8.0, 64).unwrap();
        let v = Potential::Constant { v0: 1.0 };
        assert_eq!(norm_h(&GridField::zeros(&g), &v).unwrap(), 0.0);
    }

    #[test]
    fn norm_h_monotone_in_potential() {
        let g = Grid2D::new(8.0, 128).unwrap();
        let u = gaussian(&g, 1.0);
        let a = norm_h(&u, &Potential::Constant { v0: 1.0 }).unwrap();
        let b = norm_h(&u, &Potential::Constant { v0: 4.0 }).unwrap();
        assert!(b > a);
    }

    #[test]
    fn inner_h_is_symmetric_and_consistent() {
        let g = Grid2D::new(4.0, 64).unwrap();
        let u = gaussian(&g, 0.5);
        let w = GridField::from_fn(&g, |x, y| x * (-(x * x + y * y)).exp());
        let v = Potential::Constant { v0: 1.5 };
        let uv = inner_h(&u, &w, &v).unwrap();
        let vu = inner_h(&w, &u, &v).unwrap();
        assert_eq!(uv, vu);
        let uu = inner_h(&u, &u, &v).unwrap();
        let nn = norm_h(&u, &v).unwrap();
        assert!((uu - nn * nn).abs() <= 1e-12 * uu.abs());
        let z = GridField::zeros(&g);
        assert_eq!(inner_h(&u, &z, &v).unwrap(), 0.0);
    }

    #[test]
    fn inner_h_rejects_grid_mismatch() {
        let g1 = Grid2D::new(4.0, 64).unwrap();
        let g2 = Grid2D::new(4.0, 32).unwrap();
        let u = GridField::zeros(&g1);
        let w = GridField::zeros(&g2);
        assert!(matches!(
            inner_h(&u, &w, &Potential::Constant { v0: 1.0 }),
            Err(CoreError::GridMismatch(_, _))
        ));
    }

    #[test]
    fn norm_star_zero_and_support_bound() {
        let g = Grid2D::new(8.0, 128).unwrap();
        assert_eq!(norm_star(&GridField::zeros(&g), 2.0).unwrap(), 0.0);
        // u supported in B_ρ ⇒ ‖u‖_*^p ≤ ln(1+ρ)·‖u‖_p^p
        let rho = 1.5;
        let u = GridField::from_fn(&g, |x, y| {
            let r2 = x * x + y * y;
            if r2 < rho * rho {
                (1.0 - r2 / (rho * rho)).powi(2)
            } else {
                0.0
            }
        });
        for p in [2.0, 3.0] {
            let lhs = norm_star_pow(&u, p).unwrap();
            let rhs = (1.0 + rho).ln() * norm_lq_pow(&u, p).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-12), "p={p}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn norm_star_grid_refinement() {
        // ‖u‖_* at N=256 matches a fine-grid (N=1024) reference to 1e−4 rel.
        let u_fn = |x: f64, y: f64| (-(x * x + y * y)).exp();
        let coarse = Grid2D::new(8.0, 256).unwrap();
        let fine = Grid2D::new(8.0, 1024).unwrap();
        let a = norm_star(&GridField::from_fn(&coarse, u_fn), 2.0).unwrap();
        let b = norm_star(&GridField::from_fn(&fine, u_fn), 2.0).unwrap();
        assert!((a - b).abs() / b < 1e-4, "coarse {a} fine {b}");
    }

    #[test]
    fn norm_lq_constant() {
        let g = Grid2D::new(1.0, 8).unwrap();
        let one = GridField::from_fn(&g, |_, _| 1.0);
        assert_eq!(norm_lq(&one, 2.0).unwrap(), 2.0);
        assert_eq!(norm_lq(&GridField::zeros(&g), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn norm_xp_is_sum() {
        let g = Grid2D::new(8.0, 64).unwrap();
        let u = gaussian(&g, 1.0);
        let v = Potential::Constant { v0: 1.0 };
        let x = norm_xp(&u, &v, 2.0).unwrap();
        let s = norm_h(&u, &v).unwrap() + norm_star(&u, 2.0).unwrap();
        assert_eq!(x, s);
    }

    #[test]
    fn norms_absolutely_homogeneous() {
        let g = Grid2D::new(8.0, 64).unwrap();
        let u = gaussian(&g, 0.7);
        let v = Potential::Constant { v0: 2.0 };
        for c in [-3.5, 0.25, 7.0] {
            let cu = u.scaled(c);
            let a = norm_h(&cu, &v).unwrap();
            let b = c.abs() * norm_h(&u, &v).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            let a = norm_star(&cu, 2.0).unwrap();
            let b = c.abs() * norm_star(&u, 2.0).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            let a = norm_lq(&cu, 4.0).unwrap();
            let b = c.abs() * norm_lq(&u, 4.0).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn grid_refinement_second_order() {
        // doubling N changes ‖u‖ by O(h²): successive error ratio in [3, 5]
        let u_fn = |x: f64, y: f64| (-(x * x + y * y) / 2.0).exp();
        let v = Potential::Constant { v0: 1.0 };
        let norm_at = |n: usize| {
            let g = Grid2D::new(8.0, n).unwrap();
            norm_h(&GridField::from_fn(&g, u_fn), &v).unwrap()
        };
        let reference = norm_at(1024);
        let e64 = (norm_at(64) - reference).abs();
        let e128 = (norm_at(128) - reference).abs();
        let ratio = e64 / e128;
        assert!(
            (3.0..=5.0).contains(&ratio),
            "error ratio {ratio} outside [3,5] (e64={e64:.3e}, e128={e128:.3e})"
        );
    }

    #[test]
    fn laplacian_is_adjoint_of_differences() {
        // h²Σ (−Δ_h u)·w == ∫ ∇_h u·∇_h w exactly (summation by parts)
        let g = Grid2D::new(2.0, 16).unwrap();
        let u = GridField::from_fn(&g, |x, y| (x * 1.3).sin() * (0.7 * y).cos());
        let w = GridField::from_fn(&g, |x, y| x * y + 0.1 * x);
        let lu = neg_laplacian(&u);
        let lhs = lu.dot_l2(&w).unwrap();
        let gux = diff_x(&u);
        let guy = diff_y(&u);
        let gwx = diff_x(&w);
        let gwy = diff_y(&w);
        let rhs = gux.dot_l2(&gwx).unwrap() + guy.dot_l2(&gwy).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn potential_validation() {
        let g = Grid2D::new(4.0, 32).unwrap();
        assert!(Potential::Constant { v0: 1.0 }.validate(&g).is_ok());
        assert!(Potential::Constant { v0: 0.0 }.validate(&g).is_err());
        assert!(Potential::Radial { v0: 1.0, c2: -0.5 }.validate(&g).is_ok());
        assert!(Potential::Radial { v0: 1.0, c2: -2.0 }.validate(&g).is_err());
        assert!(Potential::KSymmetric {
            v0: 1.0,
            eps: 0.5,
            k: 4
        }
        .validate(&g)
        .is_ok());
        assert!(Potential::KSymmetric {
            v0: 1.0,
            eps: 1.5,
            k: 4
        }
        .validate(&g)
        .is_err());
    }

    #[test]
    fn csv_dump_shape() {
        let g = Grid2D::new(1.0, 8).unwrap();
        let u = GridField::from_fn(&g, |x, y| x + y);
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,u");
        assert_eq!(lines.len(), 1 + 64);
        // row-major: first data row is node (0,0)
        let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(first[0], -0.875);
        assert_eq!(first[1], -0.875);
    }
}
