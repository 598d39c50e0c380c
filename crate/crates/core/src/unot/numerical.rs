//! Brute-force minimization of the covariant NOT error over the CP
//! tetrahedron, used as an oracle for the closed-form optimum.
//!
//! Stage one scans a regular `(V, X, Y)` grid. Stage two takes every facet
//! whose margin at the best grid point is small, fits the error restricted
//! to that triangular facet with a quadratic model, and minimizes the model
//! over the triangle (interior stationary point plus clamped parabolic fits
//! along the three edges).

use rayon::prelude::*;

use super::optimal::{covariant_error, ErrorReport, OptimalFamily};
use crate::channel::{ChannelParams, CORNER_A, CORNER_B, CORNER_C, CORNER_D};
use crate::operator::check_alpha;
use crate::{Result, CP_TOL};

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub step: f64,
    /// Facets with margin below this at the best grid point are refined.
    pub facet_margin: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            step: 0.02,
            facet_margin: 0.6,
        }
    }
}

/// Facet `k` is the zero set of margin `k`, spanned by three corners.
const FACETS: [[ChannelParams; 3]; 4] = [
    [CORNER_A, CORNER_B, CORNER_C],
    [CORNER_A, CORNER_B, CORNER_D],
    [CORNER_B, CORNER_C, CORNER_D],
    [CORNER_A, CORNER_C, CORNER_D],
];

fn axis(step: f64) -> Vec<f64> {
    let lo = -1.0 / 3.0;
    let mut out: Vec<f64> = (0..)
        .map(|i| lo + i as f64 * step)
        .take_while(|&v| v < 1.0 - 1e-12)
        .collect();
    out.push(1.0);
    out
}

fn objective(p: &ChannelParams, alpha: f64) -> f64 {
    covariant_error(p.z(), p.y, alpha)
}

fn is_cp(p: &ChannelParams) -> bool {
    p.margins().iter().all(|&m| m >= -CP_TOL)
}

fn better(a: (f64, [usize; 3]), b: (f64, [usize; 3])) -> (f64, [usize; 3]) {
    // Lowest value, ties broken by grid index, so the reduction order does
    // not matter.
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn grid_minimum(alpha: f64, step: f64) -> (f64, ChannelParams) {
    let ax = axis(step);
    let best = (0..ax.len())
        .into_par_iter()
        .filter_map(|i| {
            let mut local: Option<(f64, [usize; 3])> = None;
            for (j, &x) in ax.iter().enumerate() {
                for (k, &y) in ax.iter().enumerate() {
                    let p = ChannelParams::new(ax[i], x, y);
                    if !is_cp(&p) {
                        continue;
                    }
                    let cand = (objective(&p, alpha), [i, j, k]);
                    local = Some(local.map_or(cand, |l| better(l, cand)));
                }
            }
            local
        })
        .reduce_with(better)
        .expect("grid contains the identity corner");
    let [i, j, k] = best.1;
    (best.0, ChannelParams::new(ax[i], ax[j], ax[k]))
}

fn lerp3(a: &ChannelParams, b: &ChannelParams, t: f64) -> ChannelParams {
    b.mix(a, t)
}

/// Point `p0 + u (p1 − p0) + w (p2 − p0)` of a facet.
fn facet_point(f: &[ChannelParams; 3], u: f64, w: f64) -> ChannelParams {
    ChannelParams::new(
        f[0].v + u * (f[1].v - f[0].v) + w * (f[2].v - f[0].v),
        f[0].x + u * (f[1].x - f[0].x) + w * (f[2].x - f[0].x),
        f[0].y + u * (f[1].y - f[0].y) + w * (f[2].y - f[0].y),
    )
}

/// Minimizes a parabola through `f(0), f(½), f(1)` over `[0, 1]`.
fn edge_minimum(a: &ChannelParams, b: &ChannelParams, alpha: f64) -> (f64, ChannelParams) {
    let at = |t: f64| lerp3(a, b, t);
    let f0 = objective(&at(0.0), alpha);
    let fh = objective(&at(0.5), alpha);
    let f1 = objective(&at(1.0), alpha);
    // f(t) = f0 + g t + h t²
    let h = 2.0 * (f0 - 2.0 * fh + f1);
    let g = f1 - f0 - h;
    let mut best = if f0 <= f1 { (f0, 0.0) } else { (f1, 1.0) };
    if h > 0.0 {
        let t = (-g / (2.0 * h)).clamp(0.0, 1.0);
        let ft = objective(&at(t), alpha);
        if ft < best.0 {
            best = (ft, t);
        }
    }
    (best.0, at(best.1))
}

fn facet_minimum(f: &[ChannelParams; 3], alpha: f64) -> (f64, ChannelParams) {
    // The objective is quadratic, so central differences at the centroid
    // give the exact model up to rounding.
    let (u0, w0, d) = (1.0 / 3.0, 1.0 / 3.0, 0.1);
    let e = |u: f64, w: f64| objective(&facet_point(f, u, w), alpha);
    let f00 = e(u0, w0);
    let gu = (e(u0 + d, w0) - e(u0 - d, w0)) / (2.0 * d);
    let gw = (e(u0, w0 + d) - e(u0, w0 - d)) / (2.0 * d);
    let huu = (e(u0 + d, w0) - 2.0 * f00 + e(u0 - d, w0)) / (d * d);
    let hww = (e(u0, w0 + d) - 2.0 * f00 + e(u0, w0 - d)) / (d * d);
    let huw = (e(u0 + d, w0 + d) - e(u0 + d, w0 - d) - e(u0 - d, w0 + d) + e(u0 - d, w0 - d))
        / (4.0 * d * d);

    let mut best = (f64::INFINITY, f[0]);
    let mut consider = |cand: (f64, ChannelParams)| {
        if cand.0 < best.0 {
            best = cand;
        }
    };

    // Stationary point of the model via the pseudo-inverse of the Hessian.
    let tr = huu + hww;
    let det = huu * hww - huw * huw;
    let scale = tr.abs().max(1e-300);
    let step = if det.abs() > 1e-12 * scale * scale {
        Some(((hww * gu - huw * gw) / det, (huu * gw - huw * gu) / det))
    } else if tr.abs() > 1e-14 {
        // Rank one: move along the single curved direction.
        let g_proj = (huu * gu + huw * gw, huw * gu + hww * gw);
        let denom = tr * tr;
        Some((g_proj.0 / denom, g_proj.1 / denom))
    } else {
        None
    };
    if let Some((du, dw)) = step {
        let (u, w) = (u0 - du, w0 - dw);
        if u >= -1e-12 && w >= -1e-12 && u + w <= 1.0 + 1e-12 {
            let p = facet_point(f, u.max(0.0), w.max(0.0));
            consider((objective(&p, alpha), p));
        }
    }
    consider(edge_minimum(&f[0], &f[1], alpha));
    consider(edge_minimum(&f[1], &f[2], alpha));
    consider(edge_minimum(&f[0], &f[2], alpha));
    best
}

/// Numerical optimum with the default grid.
pub fn numerical_optimal_not(alpha: f64) -> Result<ErrorReport> {
    numerical_optimal_not_with(alpha, GridOptions::default())
}

pub fn numerical_optimal_not_with(alpha: f64, opts: GridOptions) -> Result<ErrorReport> {
    check_alpha(alpha)?;
    let (grid_value, grid_point) = grid_minimum(alpha, opts.step);
    let margins = grid_point.margins();

    let mut best = (grid_value, grid_point);
    for (k, facet) in FACETS.iter().enumerate() {
        if margins[k] <= opts.facet_margin {
            let cand = facet_minimum(facet, alpha);
            if cand.0 < best.0 && is_cp(&cand.1) {
                best = cand;
            }
        }
    }
    Ok(ErrorReport {
        alpha,
        delta: best.0,
        point: best.1,
        family: OptimalFamily::Numerical,
    })
}
