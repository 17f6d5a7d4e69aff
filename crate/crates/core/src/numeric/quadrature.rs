//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature with absolute error control.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

use super::Grid1D;

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_INTERVALS: usize = 4000;

// Positive Kronrod abscissae, largest first; index 7 is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One K15 estimate on `[a, b]` with `|K15 - G7|` as the error bound.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive estimate of `∫_a^b f` with absolute error at most `tol`.
///
/// Exactly antisymmetric under swapping the limits and exactly zero on an
/// empty interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }

    let first = kronrod15(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::NoConvergence(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while total_err > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence(format!(
                "quadrature on [{a}, {b}] reached {MAX_INTERVALS} subintervals with error {total_err:e} > {tol:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::NoConvergence(format!(
                "subinterval near {mid} cannot be bisected further (error {total_err:e})"
            )));
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves; the running total accumulates cancellation error.
    let mut leaves: Vec<Segment> = heap.into_vec();
    leaves.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = leaves.iter().map(|s| s.value).sum();
    if !value.is_finite() {
        return Err(Error::NoConvergence("integrand produced a non-finite value".into()));
    }
    Ok(value)
}

/// Values of `∫_{x0}^{x_i} f` at every node of `grid`.
///
/// The grid must start at `x0` or contain it; pieces between consecutive
/// nodes are integrated to `tol / n` so every node stays within `tol`.
pub fn cumulative<F: Fn(f64) -> f64>(f: F, x0: f64, grid: &Grid1D, tol: f64) -> Result<Vec<f64>> {
    let nodes = grid.nodes();
    if x0 < grid.start || x0 > grid.stop {
        return Err(Error::InvalidParameter(format!(
            "anchor {x0} is outside the grid [{}, {}]",
            grid.start, grid.stop
        )));
    }
    let piece_tol = tol / nodes.len() as f64;
    // Index of the first node at or after the anchor.
    let pivot = nodes.partition_point(|&x| x < x0);
    let mut out = vec![0.0; nodes.len()];

    let mut acc = 0.0;
    let mut prev = x0;
    for i in pivot..nodes.len() {
        acc += integrate(&f, prev, nodes[i], piece_tol)?;
        out[i] = acc;
        prev = nodes[i];
    }
    let mut acc = 0.0;
    let mut prev = x0;
    for i in (0..pivot).rev() {
        acc += integrate(&f, prev, nodes[i], piece_tol)?;
        out[i] = acc;
        prev = nodes[i];
    }
    Ok(out)
}

/// One Kronrod panel on `[a, b]`: `(estimate, |K15 - G7|)`.
pub fn gauss_kronrod15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    let s = kronrod15(&f, a, b);
    (s.value, s.error)
}

/// Node spacing of [`Antiderivative`] tables.
const TABLE_STEP: f64 = 1e-2;

/// `x ↦ ∫_{anchor}^x f` evaluated from a table of node values plus one
/// Kronrod panel from the nearest node.
///
/// Unlike calling [`integrate`] per point, the result is a smooth function
/// of `x` within each table cell, so finite differences of it are clean.
/// Outside the tabulated span it falls back to adaptive quadrature.
#[derive(Clone)]
pub struct Antiderivative<F> {
    f: F,
    nodes: Grid1D,
    values: Vec<f64>,
    tol: f64,
}

impl<F: Fn(f64) -> f64> Antiderivative<F> {
    /// Tabulates on `[lo, hi]` (extended to include `anchor`).
    pub fn new(f: F, anchor: f64, lo: f64, hi: f64, tol: f64) -> Result<Self> {
        let start = lo.min(anchor);
        let stop = hi.max(anchor);
        if !(start < stop) {
            return Err(Error::InvalidParameter(format!("empty span [{start}, {stop}]")));
        }
        let n = ((stop - start) / TABLE_STEP).ceil() as usize + 1;
        let nodes = Grid1D::new(start, stop, n.max(2))?;
        let values = cumulative(&f, anchor, &nodes, tol)?;
        Ok(Self { f, nodes, values, tol })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.nodes;
        if x < g.start || x > g.stop {
            let (edge, base) = if x < g.start {
                (g.start, self.values[0])
            } else {
                (g.stop, self.values[g.n - 1])
            };
            return base + integrate(&self.f, edge, x, self.tol).unwrap_or(f64::NAN);
        }
        let k = (((x - g.start) / g.step()).round() as usize).min(g.n - 1);
        let node = g.node(k);
        if x == node {
            return self.values[k];
        }
        self.values[k] + kronrod15(&self.f, node, x).value
    }
}
