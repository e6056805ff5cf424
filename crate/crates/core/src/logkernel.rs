//! The logarithmic bilinear forms and their fast evaluation:
//!
//! ```text
//!   A₁(w₁,w₂) = ∬ ln(1+|x−y|)   w₁(x)w₂(y) dxdy
//!   A₂(w₁,w₂) = ∬ ln(1+1/|x−y|) w₁(x)w₂(y) dxdy
//!   A₀(w₁,w₂) = A₁ − A₂ = ∬ ln|x−y| w₁(x)w₂(y) dxdy
//!   I_i(u)    = A_i(|u|^p, |u|^p)
//! ```
//!
//! plus the 2-D Newton potential φ_u = (1/2π) ln|·| ∗ |u|^p, the
//! Hardy–Littlewood–Sobolev ratio |I₂(u)|/‖u‖_{4p/3}^{2p}, the coercivity
//! ratio A₁(|u|^p,|v|^p)/(‖u‖_*^p‖v‖_p^p) ≥ 1/k² on k-fold symmetric fields,
//! and the Riesz-family kernel G_α(r) = (r^{−α}−1)/α with G_α → −ln r as
//! α → 0⁺.
//!
//! Evaluation paths: a reference O(N⁴) double sum over the precomputed
//! difference-lattice kernel samples, and a fast path that zero-pads to
//! (2N)² and uses cyclic convolution via FFT — both read the *same* kernel
//! samples, so their agreement checks only the transform algebra.
//!
//! The r = 0 sample of the singular kernels is replaced by the exact cell
//! average of ln r over one h×h cell, ln(h/√2) − 3/2 + π/4, which keeps the
//! midpoint quadrature second-order and finite. The r = 0 sample of
//! ln(1+1/r) is chosen so that the splitting ln r = ln(1+r) − ln(1+1/r)
//! holds exactly sample-by-sample.

use crate::constants::SYM_TOL;
use crate::error::{CoreError, Result};
use crate::grid::{self, Grid2D, GridField};
use crate::symmetry::SymmetryGroup;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// ln(1+r); positive, grows at infinity.
    Ln1Plus,
    /// ln(1+1/r); positive, singular at the origin.
    Ln1PlusInv,
    /// ln r; the 2-D Newton kernel up to 1/2π.
    Ln,
    /// (r^{−α}−1)/α, α ∈ (0,1); converges to −ln r as α → 0⁺.
    GAlpha,
}

/// G_α(r) = (r^{−α} − 1)/α.
pub fn g_alpha_kernel(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(CoreError::OutOfRange(format!(
            "g_alpha_kernel needs r > 0, got {r}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::OutOfRange(format!(
            "g_alpha_kernel needs α ∈ (0,1), got {alpha}"
        )));
    }
    Ok((r.powf(-alpha) - 1.0) / alpha)
}

/// Exact average of ln|x| over the h×h cell centered at the origin:
/// (1/h²)∬ ln√(x²+y²) dxdy = ln(h/√2) − 3/2 + π/4.
pub fn ln_cell_average(h: f64) -> f64 {
    (h / std::f64::consts::SQRT_2).ln() - 1.5 + PI / 4.0
}

/// Average of |x|^{−α} over the h×h cell centered at the origin, via the
/// polar reduction ∬_{[0,1]²}|x|^{−α} = (2/(2−α))∫₀^{π/4}(cosθ)^{α−2}dθ.
fn r_pow_cell_average(h: f64, alpha: f64) -> f64 {
    let a = h / 2.0;
    // composite Simpson on the smooth θ-integrand
    let m = 4096;
    let dt = PI / 4.0 / m as f64;
    let f = |t: f64| t.cos().powf(alpha - 2.0);
    let mut s = f(0.0) + f(PI / 4.0);
    for j in 1..m {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(j as f64 * dt);
    }
    let integral = s * dt / 3.0;
    a.powf(-alpha) * 2.0 / (2.0 - alpha) * integral
}

fn kernel_point(kind: KernelKind, alpha: f64, r: f64) -> f64 {
    match kind {
        KernelKind::Ln1Plus => r.ln_1p(),
        KernelKind::Ln1PlusInv => (1.0 / r).ln_1p(),
        KernelKind::Ln => r.ln(),
        KernelKind::GAlpha => (r.powf(-alpha) - 1.0) / alpha,
    }
}

fn kernel_singular(kind: KernelKind, alpha: f64, h: f64) -> f64 {
    match kind {
        KernelKind::Ln1Plus => 0.0,
        // K₂(0) := K₁(0) − K₀(0) keeps A₀ = A₁ − A₂ exact per sample
        KernelKind::Ln1PlusInv => -ln_cell_average(h),
        KernelKind::Ln => ln_cell_average(h),
        KernelKind::GAlpha => (r_pow_cell_average(h, alpha) - 1.0) / alpha,
    }
}

/// Two-dimensional complex FFT of side M (rows, transpose, rows, transpose).
/// Row batches may be split across worker threads; each row transform is
/// independent, so results are identical for any worker count.
pub struct Fft2 {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(m: usize) -> Arc<Self> {
        let mut planner = FftPlanner::new();
        Arc::new(Fft2 {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        })
    }

    pub fn side(&self) -> usize {
        self.m
    }

    fn rows(&self, data: &mut [Complex64], forward: bool) {
        let fft = if forward { &self.fwd } else { &self.inv };
        let threads = crate::max_threads().min(self.m).max(1);
        if threads == 1 {
            fft.process(data);
            return;
        }
        let rows_per = self.m.div_ceil(threads);
        std::thread::scope(|s| {
            for chunk in data.chunks_mut(rows_per * self.m) {
                let fft = fft.clone();
                s.spawn(move || fft.process(chunk));
            }
        });
    }

    fn pass(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.m * self.m);
        self.rows(data, forward);
        transpose_square(data, self.m);
        self.rows(data, forward);
        transpose_square(data, self.m);
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.pass(data, true);
    }

    /// Unnormalized inverse: inverse(forward(x)) = M²·x.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.pass(data, false);
    }
}

fn transpose_square(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

/// Precomputed kernel data for repeated bilinear-form evaluation on one grid:
/// point samples on the (2N−1)² difference lattice for the reference double
/// sum, and the padded kernel transform for the fast path. Immutable after
/// construction and shareable across threads.
pub struct ConvolutionPlan {
    grid: Arc<Grid2D>,
    kind: KernelKind,
    alpha: Option<f64>,
    /// K(|d|h) on the difference lattice, index (di+N−1)·(2N−1) + (dj+N−1).
    samples: Vec<f64>,
    /// FFT of the kernel embedded in the (2N)² cyclic lattice (real to
    /// roundoff since the embedding is symmetric under negation).
    kernel_hat: Vec<Complex64>,
    fft: Arc<Fft2>,
}

impl ConvolutionPlan {
    pub fn new(grid: &Arc<Grid2D>, kind: KernelKind) -> Result<Self> {
        if kind == KernelKind::GAlpha {
            return Err(CoreError::OutOfRange(
                "G_α plan requires an α; use ConvolutionPlan::new_g_alpha".into(),
            ));
        }
        Self::build(grid, kind, None, Fft2::new(2 * grid.size()))
    }

    pub fn new_g_alpha(grid: &Arc<Grid2D>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CoreError::OutOfRange(format!(
                "G_α kernel needs α ∈ (0,1), got {alpha}"
            )));
        }
        Self::build(grid, KernelKind::GAlpha, Some(alpha), Fft2::new(2 * grid.size()))
    }

    fn build(
        grid: &Arc<Grid2D>,
        kind: KernelKind,
        alpha: Option<f64>,
        fft: Arc<Fft2>,
    ) -> Result<Self> {
        let n = grid.size();
        let m = 2 * n;
        let h = grid.spacing();
        let a = alpha.unwrap_or(0.0);
        let side = 2 * n - 1;
        let mut samples = vec![0.0; side * side];
        for di in -(n as isize - 1)..=(n as isize - 1) {
            for dj in -(n as isize - 1)..=(n as isize - 1) {
                let v = if di == 0 && dj == 0 {
                    kernel_singular(kind, a, h)
                } else {
                    let r = h * ((di * di + dj * dj) as f64).sqrt();
                    kernel_point(kind, a, r)
                };
                samples[(di + n as isize - 1) as usize * side + (dj + n as isize - 1) as usize] =
                    v;
            }
        }
        // cyclic embedding: pad index p ↦ displacement p (p ≤ N) or p − M
        let mut kernel_hat = vec![Complex64::new(0.0, 0.0); m * m];
        for px in 0..m {
            let dx = if px <= n { px as isize } else { px as isize - m as isize };
            for py in 0..m {
                let dy = if py <= n { py as isize } else { py as isize - m as isize };
                let v = if dx == 0 && dy == 0 {
                    kernel_singular(kind, a, h)
                } else {
                    let r = h * ((dx * dx + dy * dy) as f64).sqrt();
                    kernel_point(kind, a, r)
                };
                kernel_hat[px * m + py] = Complex64::new(v, 0.0);
            }
        }
        fft.forward(&mut kernel_hat);
        Ok(ConvolutionPlan {
            grid: grid.clone(),
            kind,
            alpha,
            samples,
            kernel_hat,
            fft,
        })
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Kernel sample at lattice displacement (di, dj).
    pub fn kernel_sample(&self, di: isize, dj: isize) -> f64 {
        let n = self.grid.size() as isize;
        let side = (2 * n - 1) as usize;
        self.samples[(di + n - 1) as usize * side + (dj + n - 1) as usize]
    }

    fn check_field(&self, w: &GridField) -> Result<()> {
        if !(Arc::ptr_eq(w.grid(), &self.grid) || **w.grid() == *self.grid) {
            return Err(CoreError::GridMismatch(self.grid.size(), w.grid().size()));
        }
        if !w.is_finite() {
            return Err(CoreError::NonFinite("convolution input"));
        }
        Ok(())
    }

    fn pad(&self, w: &GridField) -> Vec<Complex64> {
        let n = self.grid.size();
        let m = self.fft.side();
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
        for ix in 0..n {
            for iy in 0..n {
                buf[ix * m + iy] = Complex64::new(w.values()[self.grid.idx(ix, iy)], 0.0);
            }
        }
        buf
    }

    /// Fast path: quadrature approximation of ∬ K(|x−y|) w₁(x) w₂(y) dxdy
    /// via the padded cyclic convolution, summed spectrally. Exactly
    /// symmetric under w₁ ↔ w₂.
    pub fn bilinear(&self, w1: &GridField, w2: &GridField) -> Result<f64> {
        self.check_field(w1)?;
        let same = std::ptr::eq(w1, w2);
        if !same {
            self.check_field(w2)?;
        }
        let mut b1 = self.pad(w1);
        self.fft.forward(&mut b1);
        let b2;
        let b2_ref: &[Complex64] = if same {
            &b1
        } else {
            let mut t = self.pad(w2);
            self.fft.forward(&mut t);
            b2 = t;
            &b2
        };
        let m = self.fft.side();
        let mut total = 0.0;
        for row in 0..m {
            let mut rs = 0.0;
            for col in 0..m {
                let i = row * m + col;
                let cross = b1[i].re * b2_ref[i].re + b1[i].im * b2_ref[i].im;
                rs += self.kernel_hat[i].re * cross;
            }
            total += rs;
        }
        let h2 = self.grid.cell_area();
        let v = total * h2 * h2 / (m * m) as f64;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CoreError::NonFinite("bilinear"))
        }
    }

    /// Reference path: direct O(N⁴) double sum over the kernel samples.
    pub fn bilinear_direct(&self, w1: &GridField, w2: &GridField) -> Result<f64> {
        self.check_field(w1)?;
        self.check_field(w2)?;
        let n = self.grid.size();
        let side = 2 * n - 1;
        let samples = &self.samples;
        let v1 = w1.values();
        let v2 = w2.values();
        let row_values = ordered_row_values(n, |ix| {
            let mut row_total = 0.0;
            for iy in 0..n {
                let a = v1[ix * n + iy];
                if a == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for jx in 0..n {
                    let krow = &samples[(ix + n - 1 - jx) * side..];
                    let wrow = &v2[jx * n..jx * n + n];
                    let mut s = 0.0;
                    for (jy, &w) in wrow.iter().enumerate() {
                        s += krow[iy + n - 1 - jy] * w;
                    }
                    inner += s;
                }
                row_total += a * inner;
            }
            row_total
        });
        let total: f64 = row_values.iter().sum();
        let h2 = self.grid.cell_area();
        let v = total * h2 * h2;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CoreError::NonFinite("bilinear_direct"))
        }
    }

    /// h²(K ⊛ w) on the grid: the quadrature approximation of
    /// ∫ K(|x−y|) w(y) dy at every node.
    pub fn convolve_quad(&self, w: &GridField) -> Result<GridField> {
        self.check_field(w)?;
        let mut buf = self.pad(w);
        self.fft.forward(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k.re; // kernel transform is real up to roundoff
        }
        self.fft.inverse(&mut buf);
        let n = self.grid.size();
        let m = self.fft.side();
        let scale = self.grid.cell_area() / (m * m) as f64;
        let mut out = GridField::zeros(&self.grid);
        for ix in 0..n {
            for iy in 0..n {
                out.values_mut()[self.grid.idx(ix, iy)] = buf[ix * m + iy].re * scale;
            }
        }
        if !out.is_finite() {
            return Err(CoreError::NonFinite("convolve"));
        }
        Ok(out)
    }

    /// Spectral quadratic sum for a transformed field: used to evaluate all
    /// three I_i with a single forward transform.
    fn spectral_quadratic(&self, what: &[Complex64]) -> f64 {
        let m = self.fft.side();
        let mut total = 0.0;
        for row in 0..m {
            let mut rs = 0.0;
            for col in 0..m {
                let i = row * m + col;
                let z = what[i];
                rs += self.kernel_hat[i].re * (z.re * z.re + z.im * z.im);
            }
            total += rs;
        }
        let h2 = self.grid.cell_area();
        total * h2 * h2 / (m * m) as f64
    }
}

fn ordered_row_values<F>(rows: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync,
{
    let threads = crate::max_threads().min(rows).max(1);
    if threads == 1 {
        return (0..rows).map(f).collect();
    }
    let chunk = rows.div_ceil(threads);
    let mut out = vec![0.0; rows];
    std::thread::scope(|s| {
        for (t, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            s.spawn(move || {
                for (i, o) in slice.iter_mut().enumerate() {
                    *o = f(t * chunk + i);
                }
            });
        }
    });
    out
}

/// The three logarithmic kernels on one grid, sharing a single FFT plan.
pub struct LogKernelPlans {
    pub a1: ConvolutionPlan,
    pub a2: ConvolutionPlan,
    pub a0: ConvolutionPlan,
}

impl LogKernelPlans {
    pub fn new(grid: &Arc<Grid2D>) -> Result<Self> {
        let fft = Fft2::new(2 * grid.size());
        Ok(LogKernelPlans {
            a1: ConvolutionPlan::build(grid, KernelKind::Ln1Plus, None, fft.clone())?,
            a2: ConvolutionPlan::build(grid, KernelKind::Ln1PlusInv, None, fft.clone())?,
            a0: ConvolutionPlan::build(grid, KernelKind::Ln, None, fft)?,
        })
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.a1.grid()
    }

    pub fn plan(&self, which: usize) -> &ConvolutionPlan {
        match which {
            1 => &self.a1,
            2 => &self.a2,
            _ => &self.a0,
        }
    }

    /// I_i(u) = A_i(|u|^p, |u|^p) for the selected kernel i ∈ {0,1,2}.
    pub fn functional_i(&self, u: &GridField, p: f64, which: usize) -> Result<f64> {
        let w = u.abs_pow(p);
        self.plan(which).bilinear(&w, &w)
    }

    /// (I₀, I₁, I₂) with one forward transform of |u|^p.
    pub fn functionals(&self, u: &GridField, p: f64) -> Result<(f64, f64, f64)> {
        let w = u.abs_pow(p);
        self.a0.check_field(&w)?;
        let mut buf = self.a0.pad(&w);
        self.a0.fft.forward(&mut buf);
        let i0 = self.a0.spectral_quadratic(&buf);
        let i1 = self.a1.spectral_quadratic(&buf);
        let i2 = self.a2.spectral_quadratic(&buf);
        for (name, v) in [("I0", i0), ("I1", i1), ("I2", i2)] {
            if !v.is_finite() {
                return Err(CoreError::NonFinite(match name {
                    "I0" => "functional I0",
                    "I1" => "functional I1",
                    _ => "functional I2",
                }));
            }
        }
        Ok((i0, i1, i2))
    }

    /// Newton potential φ_u(x) = (1/2π) ∫ ln|x−y| |u(y)|^p dy, with the
    /// singular cell replaced by its exact average. Satisfies
    /// ∫ φ_u |u|^p = (1/2π) I₀(u) up to transform roundoff.
    pub fn newton_potential(&self, u: &GridField, p: f64) -> Result<GridField> {
        let w = u.abs_pow(p);
        let mut phi = self.a0.convolve_quad(&w)?;
        phi.scale(1.0 / (2.0 * PI));
        Ok(phi)
    }

    /// (I₀(u), φ_u) sharing a single forward transform of |u|^p — the pair
    /// every energy/gradient evaluation needs.
    pub fn i0_and_newton(&self, u: &GridField, p: f64) -> Result<(f64, GridField)> {
        let w = u.abs_pow(p);
        self.a0.check_field(&w)?;
        let mut buf = self.a0.pad(&w);
        self.a0.fft.forward(&mut buf);
        let i0 = self.a0.spectral_quadratic(&buf);
        if !i0.is_finite() {
            return Err(CoreError::NonFinite("functional I0"));
        }
        for (b, k) in buf.iter_mut().zip(&self.a0.kernel_hat) {
            *b *= k.re;
        }
        self.a0.fft.inverse(&mut buf);
        let grid = self.a0.grid();
        let n = grid.size();
        let m = self.a0.fft.side();
        let scale = grid.cell_area() / ((m * m) as f64 * 2.0 * PI);
        let mut phi = GridField::zeros(grid);
        for ix in 0..n {
            for iy in 0..n {
                phi.values_mut()[grid.idx(ix, iy)] = buf[ix * m + iy].re * scale;
            }
        }
        if !phi.is_finite() {
            return Err(CoreError::NonFinite("newton potential"));
        }
        Ok((i0, phi))
    }

    /// |I₂(u)| / ‖u‖_{4p/3}^{2p}, the empirical Hardy–Littlewood–Sobolev
    /// ratio; finite with a p-independent bound for u ∈ L^{4p/3}.
    pub fn hls_ratio(&self, u: &GridField, p: f64) -> Result<f64> {
        let i2 = self.functional_i(u, p, 2)?;
        let nq = grid::norm_lq(u, 4.0 * p / 3.0)?;
        if nq == 0.0 {
            return Err(CoreError::ZeroField("hls_ratio"));
        }
        Ok(i2.abs() / nq.powf(2.0 * p))
    }

    /// A₁(|u|^p,|v|^p) / (‖u‖_*^p ‖v‖_p^p) for G-invariant u, v; the
    /// quadrant argument behind the coercivity bound gives ≥ 1/k².
    pub fn coercivity_ratio(
        &self,
        u: &GridField,
        v: &GridField,
        p: f64,
        group: &SymmetryGroup,
    ) -> Result<f64> {
        for (f, name) in [(u, "coercivity_ratio u"), (v, "coercivity_ratio v")] {
            let d = group.defect(f);
            if d > SYM_TOL {
                return Err(CoreError::AsymmetricInput {
                    op: name,
                    defect: d,
                    tol: SYM_TOL,
                });
            }
        }
        let wu = u.abs_pow(p);
        let wv = v.abs_pow(p);
        let a1 = self.a1.bilinear(&wu, &wv)?;
        let star = grid::norm_star_pow(u, p)?;
        let mass = grid::norm_lq_pow(v, p)?;
        if star == 0.0 || mass == 0.0 {
            return Err(CoreError::ZeroField("coercivity_ratio"));
        }
        Ok(a1 / (star * mass))
    }
}
