//! Pointwise differential geometry of a surface patch in H²×R ⊂ R³₁×R.
//!
//! The ambient R⁴₁ = R³₁×R carries the metric `diag(1, 1, -1, 1)`. For an
//! immersion `F = (F_H, F_4)` the vector `ξ̃ = (F_H, 0)` is the unit normal of
//! H²×R, and `ξ` is the unit normal of the surface inside H²×R. The angle
//! function is `θ = arccos ξ₄` and `∂t = T + cos θ ξ`.
//!
//! Every operation validates up front that its finite-difference stencil
//! stays inside the immersion's declared domain.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::LorentzVec3;
use crate::numeric::{check_stencil, diff1, diff2, richardson4};

/// A vector of R⁴₁ = R³₁ × R as a plain array.
pub type Vec4 = [f64; 4];

/// 2×2 matrix in the coordinate basis `(∂x, ∂y)`; column `j` is the image of `∂_j`.
pub type Mat2 = [[f64; 2]; 2];

/// Ambient inner product with signature `(+, +, -, +)`.
pub fn inner4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2] + a[3] * b[3]
}

fn add4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn sub4(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn scale4(s: f64, a: &Vec4) -> Vec4 {
    [s * a[0], s * a[1], s * a[2], s * a[3]]
}

/// A point of R³₁ × R: the H² component and the height `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point4 {
    pub h: LorentzVec3,
    pub t: f64,
}

impl Point4 {
    pub fn to_array(self) -> Vec4 {
        [self.h.x1, self.h.x2, self.h.x3, self.t]
    }
}

impl From<Vec4> for Point4 {
    fn from(v: Vec4) -> Self {
        Point4 {
            h: LorentzVec3 {
                x1: v[0],
                x2: v[1],
                x3: v[2],
            },
            t: v[3],
        }
    }
}

/// Parameter rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let r = Rect { x0, x1, y0, y1 };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite());
        if !finite || !(self.x0 < self.x1) || !(self.y0 < self.y1) {
            return Err(Error::EmptyDomain(format!(
                "rectangle [{}, {}] x [{}, {}] is empty",
                self.x0, self.x1, self.y0, self.y1
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// The rectangle shrunk by `margin` on every side.
    pub fn shrink(&self, margin: f64) -> Result<Rect> {
        Rect::new(self.x0 + margin, self.x1 - margin, self.y0 + margin, self.y1 - margin)
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }
}

/// A parametric surface `(x, y) -> R⁴₁`.
pub type SurfaceFn = Arc<dyn Fn(f64, f64) -> Vec4 + Send + Sync>;

/// An immersed patch with optional analytic first partials.
///
/// Cloning is cheap: evaluators are shared.
#[derive(Clone)]
pub struct Immersion {
    eval: SurfaceFn,
    partials: Option<(SurfaceFn, SurfaceFn)>,
    domain: Rect,
    tag: String,
    orientation: Arc<OnceLock<f64>>,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("tag", &self.tag)
            .field("domain", &self.domain)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl Immersion {
    pub fn new<F>(tag: impl Into<String>, domain: Rect, eval: F) -> Self
    where
        F: Fn(f64, f64) -> Vec4 + Send + Sync + 'static,
    {
        Immersion {
            eval: Arc::new(eval),
            partials: None,
            domain,
            tag: tag.into(),
            orientation: Arc::new(OnceLock::new()),
        }
    }

    /// Attaches analytic `∂x F` and `∂y F`.
    pub fn with_partials<Fx, Fy>(mut self, fx: Fx, fy: Fy) -> Self
    where
        Fx: Fn(f64, f64) -> Vec4 + Send + Sync + 'static,
        Fy: Fn(f64, f64) -> Vec4 + Send + Sync + 'static,
    {
        self.partials = Some((Arc::new(fx), Arc::new(fy)));
        self.orientation = Arc::new(OnceLock::new());
        self
    }

    /// Drops the analytic partials so every derivative is taken numerically.
    pub fn without_partials(mut self) -> Self {
        self.partials = None;
        self.orientation = Arc::new(OnceLock::new());
        self
    }

    /// Same surface on a different parameter rectangle.
    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = domain;
        self.orientation = Arc::new(OnceLock::new());
        self
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.partials.is_some()
    }

    pub fn eval(&self, x: f64, y: f64) -> Vec4 {
        (self.eval)(x, y)
    }

    pub fn point(&self, x: f64, y: f64) -> Point4 {
        self.eval(x, y).into()
    }

    /// Analytic partials at `(x, y)`, if attached.
    pub fn analytic_partials(&self, x: f64, y: f64) -> Option<(Vec4, Vec4)> {
        self.partials.as_ref().map(|(fx, fy)| (fx(x, y), fy(x, y)))
    }
}

/// Finite-difference steps and degeneracy thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Step for first-derivative quantities.
    pub h1: f64,
    /// Step for second-derivative quantities (used with Richardson at `h2`, `h2/2`).
    pub h2: f64,
    /// `sin θ` at or below this marks T-dependent outputs indeterminate.
    pub sin_tol: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            h1: 1e-3,
            h2: 1e-2,
            sin_tol: 1e-6,
        }
    }
}

impl EngineConfig {
    /// Distance from the domain edge needed by the widest stencil in this module.
    pub fn margin(&self) -> f64 {
        2.0 * self.h2 + 4.0 * self.h1
    }

    fn partial_reach(&self, imm: &Immersion) -> f64 {
        if imm.partials.is_some() {
            0.0
        } else {
            2.0 * self.h1
        }
    }
}

fn check_point(imm: &Immersion, x: f64, y: f64, reach: f64) -> Result<()> {
    let d = imm.domain;
    check_stencil(x, reach, d.x0, d.x1)?;
    check_stencil(y, reach, d.y0, d.y1)
}

/// Five-point derivative of a vector-valued function of one variable.
fn d1<const N: usize, F>(f: F, t: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let m2 = f(t - 2.0 * h)?;
    let m1 = f(t - h)?;
    let p1 = f(t + h)?;
    let p2 = f(t + 2.0 * h)?;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
    }
    Ok(out)
}

/// [`d1`] at `h` and `h/2` combined by Richardson extrapolation.
fn d1_rich<const N: usize, F>(f: F, t: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let coarse = d1(&f, t, h)?;
    let fine = d1(&f, t, 0.5 * h)?;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = richardson4(coarse[i], fine[i]);
    }
    Ok(out)
}

fn partials_unchecked(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> (Vec4, Vec4) {
    if let Some(p) = imm.analytic_partials(x, y) {
        return p;
    }
    let h = cfg.h1;
    let mut fx = [0.0; 4];
    let mut fy = [0.0; 4];
    let px = [imm.eval(x - 2.0 * h, y), imm.eval(x - h, y), imm.eval(x + h, y), imm.eval(x + 2.0 * h, y)];
    let py = [imm.eval(x, y - 2.0 * h), imm.eval(x, y - h), imm.eval(x, y + h), imm.eval(x, y + 2.0 * h)];
    for i in 0..4 {
        fx[i] = (px[0][i] - 8.0 * px[1][i] + 8.0 * px[2][i] - px[3][i]) / (12.0 * h);
        fy[i] = (py[0][i] - 8.0 * py[1][i] + 8.0 * py[2][i] - py[3][i]) / (12.0 * h);
    }
    (fx, fy)
}

/// `(∂x F, ∂y F)`: analytic if attached, otherwise five-point differences at `h1`.
pub fn partials(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<(Vec4, Vec4)> {
    check_point(imm, x, y, cfg.partial_reach(imm))?;
    Ok(partials_unchecked(imm, x, y, cfg))
}

/// First fundamental form `(E, F, G)`.
pub fn metric_of(fx: &Vec4, fy: &Vec4) -> (f64, f64, f64) {
    (inner4(fx, fx), inner4(fx, fy), inner4(fy, fy))
}

/// 3×3 determinant of rows `a`, `b`, `c` restricted to the columns in `cols`.
fn det3(a: &Vec4, b: &Vec4, c: &Vec4, cols: [usize; 3]) -> f64 {
    let [i, j, k] = cols;
    a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
        + a[k] * (b[i] * c[j] - b[j] * c[i])
}

/// Vector Lorentz-orthogonal to `a`, `b`, `c` with
/// `det(a, b, c, w) = <w, w>`; its orientation is continuous in the inputs.
fn raw_normal(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    // Cofactor covector: det(a, b, c, v) = Σ cof_i v_i.
    let cof = [
        -det3(a, b, c, [1, 2, 3]),
        det3(a, b, c, [0, 2, 3]),
        -det3(a, b, c, [0, 1, 3]),
        det3(a, b, c, [0, 1, 2]),
    ];
    // Raise the index with diag(1, 1, -1, 1).
    [cof[0], cof[1], -cof[2], cof[3]]
}

fn unit_normal_raw(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<(Vec4, Vec4)> {
    let p = imm.eval(x, y);
    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    let xt = [p[0], p[1], p[2], 0.0];
    let w = raw_normal(&fx, &fy, &xt);
    let n2 = inner4(&w, &w);
    let scale = inner4(&fx, &fx).abs() * inner4(&fy, &fy).abs() * inner4(&xt, &xt).abs();
    if !(n2 > 1e-24 * scale.max(f64::MIN_POSITIVE)) || !n2.is_finite() {
        return Err(Error::DegeneratePoint {
            x,
            y,
            reason: format!("orthogonality system is rank deficient (<w,w> = {n2:e})"),
        });
    }
    Ok((xt, scale4(1.0 / n2.sqrt(), &w)))
}

/// Global sign making `ξ₄ ≥ 0` at the centre of the domain.
fn orientation(imm: &Immersion, cfg: &EngineConfig) -> Result<f64> {
    if let Some(&s) = imm.orientation.get() {
        return Ok(s);
    }
    let (cx, cy) = imm.domain.center();
    let (_, xi) = unit_normal_raw(imm, cx, cy, cfg)?;
    let s = if xi[3] < 0.0 { -1.0 } else { 1.0 };
    Ok(*imm.orientation.get_or_init(|| s))
}

fn normals_unchecked(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<(Vec4, Vec4)> {
    let sign = orientation(imm, cfg)?;
    let (xt, xi) = unit_normal_raw(imm, x, y, cfg)?;
    Ok((xt, scale4(sign, &xi)))
}

/// `(ξ̃, ξ)`: the normal of H²×R and the unit normal of the surface in H²×R.
///
/// The sign of `ξ` is fixed once per immersion (`ξ₄ ≥ 0` at the domain
/// centre) and is continuous across the patch.
pub fn normals(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<(Vec4, Vec4)> {
    check_point(imm, x, y, cfg.partial_reach(imm))?;
    normals_unchecked(imm, x, y, cfg)
}

/// `θ = arccos ξ₄` and `T = ∂t − cos θ ξ`.
pub fn angle_and_t(xi: &Vec4) -> (f64, Vec4) {
    let c = xi[3].clamp(-1.0, 1.0);
    let theta = c.acos();
    let t = sub4(&[0.0, 0.0, 0.0, 1.0], &scale4(c, xi));
    (theta, t)
}

/// Coefficients of the tangential projection of `v` onto `span{fx, fy}`.
fn tangent_coords(v: &Vec4, fx: &Vec4, fy: &Vec4) -> [f64; 2] {
    let (e, f, g) = metric_of(fx, fy);
    let (bx, by) = (inner4(v, fx), inner4(v, fy));
    let det = e * g - f * f;
    [(g * bx - f * by) / det, (e * by - f * bx) / det]
}

fn check_regular(x: f64, y: f64, fx: &Vec4, fy: &Vec4) -> Result<()> {
    let (e, f, g) = metric_of(fx, fy);
    let det = e * g - f * f;
    if !(det > 1e-14 * (e * g).abs()) || !(e > 0.0) || !(g > 0.0) {
        return Err(Error::DegeneratePoint {
            x,
            y,
            reason: format!("induced metric is not positive definite (E G - F^2 = {det:e})"),
        });
    }
    Ok(())
}

fn shape_unchecked(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<Mat2> {
    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    check_regular(x, y, &fx, &fy)?;
    let h = cfg.h1;
    let xi_x = d1(|s| normals_unchecked(imm, s, y, cfg).map(|n| n.1), x, h)?;
    let xi_y = d1(|s| normals_unchecked(imm, x, s, cfg).map(|n| n.1), y, h)?;
    let c0 = tangent_coords(&xi_x, &fx, &fy);
    let c1 = tangent_coords(&xi_y, &fx, &fy);
    Ok([[-c0[0], -c1[0]], [-c0[1], -c1[1]]])
}

/// Shape operator `A X = −(D_X ξ)^T` in the coordinate basis.
pub fn shape_operator(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<Mat2> {
    check_point(imm, x, y, 2.0 * cfg.h1 + cfg.partial_reach(imm))?;
    shape_unchecked(imm, x, y, cfg)
}

/// Principal and derived curvatures at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvatures {
    /// Eigenvalue whose eigendirection is closer to T.
    pub k1: f64,
    pub k2: f64,
    /// Extrinsic Gaussian curvature `det A − cos²θ`.
    pub gauss: f64,
    pub mean: f64,
    /// True when `sin θ` is too small for T to pick out `k1`.
    pub t_indeterminate: bool,
}

/// Eigenvalues of `A`, `K = det A − cos²θ` and `H = tr A / 2`.
///
/// `t_coords` are the coordinates of T in the `(∂x, ∂y)` basis.
pub fn curvatures(
    shape: &Mat2,
    metric: (f64, f64, f64),
    t_coords: [f64; 2],
    theta: f64,
    sin_tol: f64,
) -> Curvatures {
    let tr = shape[0][0] + shape[1][1];
    let det = shape[0][0] * shape[1][1] - shape[0][1] * shape[1][0];
    let half = 0.5 * tr;
    let disc = (half * half - det).max(0.0).sqrt();
    let (hi, lo) = (half + disc, half - disc);
    let cos = theta.cos();

    let (e, f, g) = metric;
    let gdot = |u: [f64; 2], v: [f64; 2]| e * u[0] * v[0] + f * (u[0] * v[1] + u[1] * v[0]) + g * u[1] * v[1];
    let indeterminate = theta.sin() <= sin_tol;
    let (k1, k2) = if indeterminate {
        (hi, lo)
    } else {
        // Rayleigh quotient of T lies nearer to the eigenvalue whose
        // eigenvector makes the smaller angle with T.
        let at = [
            shape[0][0] * t_coords[0] + shape[0][1] * t_coords[1],
            shape[1][0] * t_coords[0] + shape[1][1] * t_coords[1],
        ];
        let rho = gdot(at, t_coords) / gdot(t_coords, t_coords);
        if (rho - hi).abs() <= (rho - lo).abs() {
            (hi, lo)
        } else {
            (lo, hi)
        }
    };
    Curvatures {
        k1,
        k2,
        gauss: det - cos * cos,
        mean: half,
        t_indeterminate: indeterminate,
    }
}

/// All pointwise data at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySample {
    pub x: f64,
    pub y: f64,
    pub point: Point4,
    pub f_x: Vec4,
    pub f_y: Vec4,
    /// `(E, F, G)`.
    pub metric: (f64, f64, f64),
    pub xi_tilde: Vec4,
    pub xi: Vec4,
    pub theta: f64,
    /// T as an ambient vector.
    pub t_vec: Vec4,
    /// T in the `(∂x, ∂y)` basis.
    pub t_coords: [f64; 2],
    pub shape: Mat2,
    pub k1: f64,
    pub k2: f64,
    pub gauss: f64,
    pub mean: f64,
    pub t_indeterminate: bool,
}

fn t_coords_of(fx: &Vec4, fy: &Vec4) -> [f64; 2] {
    // <∂t, v> = v₄.
    tangent_coords(&[0.0, 0.0, 0.0, 1.0], fx, fy)
}

/// Evaluates every pointwise quantity at `(x, y)`.
pub fn sample(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<GeometrySample> {
    check_point(imm, x, y, 2.0 * cfg.h1 + cfg.partial_reach(imm))?;
    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    check_regular(x, y, &fx, &fy)?;
    let (xi_tilde, xi) = normals_unchecked(imm, x, y, cfg)?;
    let (theta, t_vec) = angle_and_t(&xi);
    let shape = shape_unchecked(imm, x, y, cfg)?;
    let metric = metric_of(&fx, &fy);
    let t_coords = t_coords_of(&fx, &fy);
    let c = curvatures(&shape, metric, t_coords, theta, cfg.sin_tol);
    Ok(GeometrySample {
        x,
        y,
        point: imm.point(x, y),
        f_x: fx,
        f_y: fy,
        metric,
        xi_tilde,
        xi,
        theta,
        t_vec,
        t_coords,
        shape,
        k1: c.k1,
        k2: c.k2,
        gauss: c.gauss,
        mean: c.mean,
        t_indeterminate: c.t_indeterminate,
    })
}

/// `|g(A e₁, e₂)|` with `e₁ = T/|T|` and `e₂` its g-orthogonal unit complement.
pub fn principal_direction_defect(s: &GeometrySample) -> f64 {
    let (e, f, g) = s.metric;
    let gdot = |u: [f64; 2], v: [f64; 2]| e * u[0] * v[0] + f * (u[0] * v[1] + u[1] * v[0]) + g * u[1] * v[1];
    let t = s.t_coords;
    let nt = gdot(t, t).sqrt();
    let e1 = [t[0] / nt, t[1] / nt];
    // Rotate by the area form: e₂ = J e₁ with J the g-rotation by π/2.
    let area = (e * g - f * f).sqrt();
    let raw = [-(f * e1[0] + g * e1[1]) / area, (e * e1[0] + f * e1[1]) / area];
    let a = &s.shape;
    let ae1 = [a[0][0] * e1[0] + a[0][1] * e1[1], a[1][0] * e1[0] + a[1][1] * e1[1]];
    gdot(ae1, raw).abs()
}

/// Gaussian curvature of a metric `(E, F, G)(u, v)` by the Brioschi formula.
///
/// Derivatives use five-point stencils at `h` and `h/2`, combined by Richardson.
pub fn brioschi<M>(metric: M, u: f64, v: f64, h: f64) -> f64
where
    M: Fn(f64, f64) -> (f64, f64, f64),
{
    let at = |h: f64| brioschi_at_step(&metric, u, v, h);
    richardson4(at(h), at(0.5 * h))
}

fn brioschi_at_step<M>(metric: &M, u: f64, v: f64, h: f64) -> f64
where
    M: Fn(f64, f64) -> (f64, f64, f64),
{
    let e_of = |a: f64, b: f64| metric(a, b).0;
    let f_of = |a: f64, b: f64| metric(a, b).1;
    let g_of = |a: f64, b: f64| metric(a, b).2;
    let (e, f, g) = metric(u, v);

    let e_u = diff1(|s| e_of(s, v), u, h);
    let e_v = diff1(|s| e_of(u, s), v, h);
    let f_u = diff1(|s| f_of(s, v), u, h);
    let f_v = diff1(|s| f_of(u, s), v, h);
    let g_u = diff1(|s| g_of(s, v), u, h);
    let g_v = diff1(|s| g_of(u, s), v, h);
    let e_vv = diff2(|s| e_of(u, s), v, h);
    let g_uu = diff2(|s| g_of(s, v), u, h);
    let f_uv = diff1(|s| diff1(|r| f_of(s, r), v, h), u, h);

    let m1 = [
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ];
    let m2 = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let w = e * g - f * f;
    (det(m1) - det(m2)) / (w * w)
}

/// Intrinsic Gaussian curvature of the induced metric at `(x, y)`.
pub fn gauss_intrinsic(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<f64> {
    check_point(imm, x, y, 2.0 * cfg.h2 + cfg.partial_reach(imm))?;
    let metric = |a: f64, b: f64| {
        let (fx, fy) = partials_unchecked(imm, a, b, cfg);
        metric_of(&fx, &fy)
    };
    Ok(brioschi(metric, x, y, cfg.h2))
}

/// Christoffel symbols `Γ[i][j][k] = Γ^i_{jk}` of the induced metric.
fn christoffel(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<[[[f64; 2]; 2]; 2]> {
    let metric = |a: f64, b: f64| -> Result<[f64; 3]> {
        let (fx, fy) = partials_unchecked(imm, a, b, cfg);
        let (e, f, g) = metric_of(&fx, &fy);
        Ok([e, f, g])
    };
    let dx = d1_rich(|s| metric(s, y), x, cfg.h2)?;
    let dy = d1_rich(|s| metric(x, s), y, cfg.h2)?;
    let [e, f, g] = metric(x, y)?;
    // dg[l][j][k] = ∂_l g_{jk}
    let as_mat = |m: [f64; 3]| [[m[0], m[1]], [m[1], m[2]]];
    let dg = [as_mat(dx), as_mat(dy)];
    let det = e * g - f * f;
    let inv = [[g / det, -f / det], [-f / det, e / det]];
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut s = 0.0;
                for l in 0..2 {
                    s += inv[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]);
                }
                gamma[i][j][k] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// Norm in the induced metric of the Codazzi defect
/// `(∇_x A)∂y − (∇_y A)∂x − cos θ (g(∂x,T)∂y − g(∂y,T)∂x)`.
pub fn codazzi_residual(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<f64> {
    check_point(imm, x, y, 2.0 * cfg.h2 + 2.0 * cfg.h1 + cfg.partial_reach(imm))?;
    let flat = |m: Mat2| [m[0][0], m[0][1], m[1][0], m[1][1]];
    let a_x = d1_rich(|s| shape_unchecked(imm, s, y, cfg).map(flat), x, cfg.h2)?;
    let a_y = d1_rich(|s| shape_unchecked(imm, x, s, cfg).map(flat), y, cfg.h2)?;
    let a = shape_unchecked(imm, x, y, cfg)?;
    let gamma = christoffel(imm, x, y, cfg)?;
    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    let (_, xi) = normals_unchecked(imm, x, y, cfg)?;
    let cos = xi[3];
    // g(∂_k, T) = (f_k)₄
    let t_low = [fx[3], fy[3]];

    let mut r = [0.0; 2];
    for i in 0..2 {
        // ∂x A^i_1 − ∂y A^i_0; flat index is 2 i + j.
        let mut v = a_x[2 * i + 1] - a_y[2 * i];
        for j in 0..2 {
            v += a[j][1] * gamma[i][0][j] - a[j][0] * gamma[i][1][j];
        }
        let rhs = cos * (t_low[0] * if i == 1 { 1.0 } else { 0.0 } - t_low[1] * if i == 0 { 1.0 } else { 0.0 });
        r[i] = v - rhs;
    }
    let (e, f, g) = metric_of(&fx, &fy);
    Ok((e * r[0] * r[0] + 2.0 * f * r[0] * r[1] + g * r[1] * r[1]).max(0.0).sqrt())
}

/// Residuals of `∇_X T = cos θ A X` and `X(cos θ) = −g(AX, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureResiduals {
    /// Max over `X ∈ {∂x, ∂y}` of `|∇_X T − cos θ A X|` in the induced metric.
    pub nabla_t: f64,
    /// Max over `X ∈ {∂x, ∂y}` of `|X(cos θ) + g(AX, T)|`.
    pub d_cos: f64,
}

/// Evaluates both structure equations; `∇T` is the Levi-Civita derivative of
/// the tangent field T, computed from its coordinates and the Christoffel
/// symbols of the induced metric.
pub fn structure_residuals(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<StructureResiduals> {
    check_point(imm, x, y, 2.0 * cfg.h2 + 2.0 * cfg.h1 + cfg.partial_reach(imm))?;
    let t_field = |a: f64, b: f64| -> Result<[f64; 2]> {
        let (fx, fy) = partials_unchecked(imm, a, b, cfg);
        Ok(t_coords_of(&fx, &fy))
    };
    let cos_field = |a: f64, b: f64| -> Result<[f64; 1]> { Ok([normals_unchecked(imm, a, b, cfg)?.1[3]]) };
    let h = cfg.h1;
    let dt = [d1(|s| t_field(s, y), x, h)?, d1(|s| t_field(x, s), y, h)?];
    let dcos = [d1(|s| cos_field(s, y), x, h)?[0], d1(|s| cos_field(x, s), y, h)?[0]];

    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    let (e, f, g) = metric_of(&fx, &fy);
    let t = t_coords_of(&fx, &fy);
    let a = shape_unchecked(imm, x, y, cfg)?;
    let gamma = christoffel(imm, x, y, cfg)?;
    let cos = normals_unchecked(imm, x, y, cfg)?.1[3];
    let t_low = [fx[3], fy[3]];

    let mut nabla_t = 0.0f64;
    let mut d_cos = 0.0f64;
    for j in 0..2 {
        let mut r = [0.0; 2];
        for i in 0..2 {
            let mut v = dt[j][i];
            for k in 0..2 {
                v += gamma[i][j][k] * t[k];
            }
            r[i] = v - cos * a[i][j];
        }
        let norm = (e * r[0] * r[0] + 2.0 * f * r[0] * r[1] + g * r[1] * r[1]).max(0.0).sqrt();
        nabla_t = nabla_t.max(norm);
        let g_at = a[0][j] * t_low[0] + a[1][j] * t_low[1];
        d_cos = d_cos.max((dcos[j] + g_at).abs());
    }
    Ok(StructureResiduals { nabla_t, d_cos })
}

/// `R⊥(∂x, ∂y) ξ` and the value predicted from the angle function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalCurvature {
    /// The ambient vector `R⊥(∂x, ∂y) ξ`.
    pub vector: Vec4,
    /// Coefficients of `vector` on `ξ` and `ξ̃`.
    pub xi_coeff: f64,
    pub xi_tilde_coeff: f64,
    /// Predicted `ξ̃` coefficient `sin θ (θ_x F4_y − θ_y F4_x)`; the `ξ`
    /// coefficient is predicted to vanish.
    pub predicted_xi_tilde_coeff: f64,
    pub theta_x: f64,
    pub theta_y: f64,
}

impl NormalCurvature {
    /// Euclidean norm of the coefficients in the `(ξ, ξ̃)` frame.
    pub fn norm(&self) -> f64 {
        self.xi_coeff.hypot(self.xi_tilde_coeff)
    }

    /// Distance between the computed and predicted curvature, same frame norm.
    pub fn identity_defect(&self) -> f64 {
        self.xi_coeff.hypot(self.xi_tilde_coeff - self.predicted_xi_tilde_coeff)
    }
}

/// Projection of `v` onto `span{ξ, ξ̃}` as coefficients `(a, b)` of `a ξ + b ξ̃`.
fn normal_coords(v: &Vec4, xi: &Vec4, xt: &Vec4) -> [f64; 2] {
    let (g00, g01, g11) = (inner4(xi, xi), inner4(xi, xt), inner4(xt, xt));
    let (b0, b1) = (inner4(v, xi), inner4(v, xt));
    let det = g00 * g11 - g01 * g01;
    [(g11 * b0 - g01 * b1) / det, (g00 * b1 - g01 * b0) / det]
}

/// Curvature of the normal connection applied to `ξ`, by finite differences
/// of the normal projections of `∂ξ`.
pub fn normal_curvature(imm: &Immersion, x: f64, y: f64, cfg: &EngineConfig) -> Result<NormalCurvature> {
    check_point(imm, x, y, 2.0 * cfg.h2 + 2.0 * cfg.h1 + cfg.partial_reach(imm))?;
    let h = cfg.h1;
    // D⊥_j ξ as an ambient vector at (a, b).
    let dperp = |a: f64, b: f64, dir: usize| -> Result<Vec4> {
        let (xt, xi) = normals_unchecked(imm, a, b, cfg)?;
        let d = if dir == 0 {
            d1(|s| normals_unchecked(imm, s, b, cfg).map(|n| n.1), a, h)?
        } else {
            d1(|s| normals_unchecked(imm, a, s, cfg).map(|n| n.1), b, h)?
        };
        let c = normal_coords(&d, &xi, &xt);
        Ok(add4(&scale4(c[0], &xi), &scale4(c[1], &xt)))
    };
    let dx_vy = d1_rich(|s| dperp(s, y, 1), x, cfg.h2)?;
    let dy_vx = d1_rich(|s| dperp(x, s, 0), y, cfg.h2)?;
    let (xt, xi) = normals_unchecked(imm, x, y, cfg)?;
    let c_a = normal_coords(&dx_vy, &xi, &xt);
    let c_b = normal_coords(&dy_vx, &xi, &xt);
    let coeff = [c_a[0] - c_b[0], c_a[1] - c_b[1]];
    let vector = add4(&scale4(coeff[0], &xi), &scale4(coeff[1], &xt));

    let theta = |a: f64, b: f64| -> Result<[f64; 1]> {
        Ok([normals_unchecked(imm, a, b, cfg)?.1[3].clamp(-1.0, 1.0).acos()])
    };
    let theta_x = d1(|s| theta(s, y), x, h)?[0];
    let theta_y = d1(|s| theta(x, s), y, h)?[0];
    let (fx, fy) = partials_unchecked(imm, x, y, cfg);
    let sin = xi[3].clamp(-1.0, 1.0).acos().sin();
    Ok(NormalCurvature {
        vector,
        xi_coeff: coeff[0],
        xi_tilde_coeff: coeff[1],
        predicted_xi_tilde_coeff: sin * (theta_x * fy[3] - theta_y * fx[3]),
        theta_x,
        theta_y,
    })
}
