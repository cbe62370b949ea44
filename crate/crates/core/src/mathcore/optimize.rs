//! Derivative-free maximisation over intervals and small boxes.
//!
//! Nothing here assumes unimodality: every search starts with an exhaustive
//! grid scan, and local refinement only ever improves on the best grid node.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_GRID_NODES_1D: usize = 2049;
pub const DEFAULT_GRID_NODES_PER_AXIS: usize = 65;
pub const REFINEMENT_STARTS: usize = 8;

const GOLDEN_ITERATIONS: usize = 120;
const SIMPLEX_MAX_ITERATIONS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximizeResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub refinements: usize,
    /// Largest grid spacing over all axes.
    pub grid_resolution: f64,
    /// Locally refined optima, one per refinement start, best first.
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub point: Vec<f64>,
    pub value: f64,
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("search interval [{lo}, {hi}]")))
    }
}

fn grid_node(lo: f64, hi: f64, i: usize, intervals: usize) -> f64 {
    if i == intervals {
        hi
    } else {
        lo + (hi - lo) * i as f64 / intervals as f64
    }
}

/// Maximises `f` on `[a, b]` with the default grid of 2049 nodes.
pub fn maximize_1d<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<MaximizeResult> {
    maximize_1d_grid(f, a, b, DEFAULT_GRID_NODES_1D)
}

/// Grid scan with `nodes` equispaced nodes, then golden-section refinement
/// on the two cells around the best node.
pub fn maximize_1d_grid<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, nodes: usize) -> Result<MaximizeResult> {
    check_interval(a, b)?;
    let intervals = nodes.max(2) - 1;
    let h = (b - a) / intervals as f64;

    let (mut best_x, mut best_v) = (a, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..=intervals {
        let x = grid_node(a, b, i, intervals);
        let v = f(x);
        if v > best_v {
            (best_x, best_v, best_i) = (x, v, i);
        }
    }
    if !best_v.is_finite() {
        return Err(Error::Domain(format!("objective has no finite value on [{a}, {b}]")));
    }

    let mut lo = grid_node(a, b, best_i.saturating_sub(1), intervals);
    let mut hi = grid_node(a, b, (best_i + 1).min(intervals), intervals);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut refinements = 0;
    while refinements < GOLDEN_ITERATIONS && hi - lo > 4.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
        if f1 >= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
        refinements += 1;
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            (best_x, best_v) = (x, v);
        }
    }
    Ok(MaximizeResult {
        argmax: vec![best_x],
        value: best_v,
        refinements,
        grid_resolution: h,
        candidates: vec![Candidate { point: vec![best_x], value: best_v }],
    })
}

/// Maximises `f` over a box of one to three dimensions with the default grid.
pub fn maximize_box<F: FnMut(&[f64]) -> f64>(f: F, bounds: &[(f64, f64)]) -> Result<MaximizeResult> {
    maximize_box_grid(f, bounds, DEFAULT_GRID_NODES_PER_AXIS)
}

/// Grid scan with `nodes_per_axis` nodes along each axis, followed by a
/// bounded Nelder–Mead refinement from each of the best grid nodes.
pub fn maximize_box_grid<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    bounds: &[(f64, f64)],
    nodes_per_axis: usize,
) -> Result<MaximizeResult> {
    let dim = bounds.len();
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidParameter(format!("box must have 1 to 3 axes, got {dim}")));
    }
    for &(lo, hi) in bounds {
        check_interval(lo, hi)?;
    }
    let intervals = nodes_per_axis.max(2) - 1;
    let steps: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) / intervals as f64).collect();

    // best REFINEMENT_STARTS grid nodes, kept sorted descending
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(REFINEMENT_STARTS + 1);
    let total = (intervals + 1).pow(dim as u32);
    let mut point = vec![0.0; dim];
    for flat in 0..total {
        let mut rem = flat;
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            point[axis] = grid_node(lo, hi, rem % (intervals + 1), intervals);
            rem /= intervals + 1;
        }
        let v = f(&point);
        if !v.is_finite() {
            continue;
        }
        if top.len() < REFINEMENT_STARTS || v > top[top.len() - 1].0 {
            let pos = top.partition_point(|(tv, _)| *tv >= v);
            top.insert(pos, (v, point.clone()));
            top.truncate(REFINEMENT_STARTS);
        }
    }
    if top.is_empty() {
        return Err(Error::Domain("objective has no finite value on the box".into()));
    }

    let mut refinements = 0;
    let mut candidates = Vec::with_capacity(top.len());
    for (v0, x0) in &top {
        let (x, v, iters) = nelder_mead(&mut f, x0, *v0, &steps, bounds);
        refinements += iters;
        candidates.push(Candidate { point: x, value: v });
    }
    candidates.sort_by(|a, b| b.value.total_cmp(&a.value));
    let best = candidates[0].clone();
    Ok(MaximizeResult {
        argmax: best.point,
        value: best.value,
        refinements,
        grid_resolution: steps.iter().copied().fold(0.0, f64::max),
        candidates,
    })
}

fn clamp_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *xi = xi.clamp(lo, hi);
    }
}

/// Maximising Nelder–Mead with every trial point projected into the box.
/// The returned value never falls below `v0`.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    v0: f64,
    steps: &[f64],
    bounds: &[(f64, f64)],
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        // step inward when the start sits on the upper face
        x[i] += if x[i] + steps[i] <= bounds[i].1 { steps[i] } else { -steps[i] };
        clamp_into(&mut x, bounds);
        let v = f(&x);
        simplex.push((x, v));
    }
    let eval = |f: &mut F, x: &mut Vec<f64>| {
        clamp_into(x, bounds);
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };

    let mut iters = 0;
    while iters < SIMPLEX_MAX_ITERATIONS {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread = (best - worst).abs();
        if spread <= 1e-16 * best.abs().max(1e-300) && size <= 1e-11 {
            break;
        }
        if size <= 1e-14 {
            break;
        }
        iters += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect() };

        let mut xr = along(1.0);
        let vr = eval(f, &mut xr);
        if vr > simplex[0].1 {
            let mut xe = along(2.0);
            let ve = eval(f, &mut xe);
            simplex[n] = if ve > vr { (xe, ve) } else { (xr, vr) };
        } else if vr > simplex[n - 1].1 {
            simplex[n] = (xr, vr);
        } else {
            let (mut xc, t) = if vr > simplex[n].1 { (along(0.5), 0) } else { (along(-0.5), 1) };
            let vc = eval(f, &mut xc);
            let threshold = if t == 0 { vr } else { simplex[n].1 };
            if vc > threshold {
                simplex[n] = (xc, vc);
            } else {
                let anchor = simplex[0].0.clone();
                for (x, v) in simplex[1..].iter_mut() {
                    for (xi, ai) in x.iter_mut().zip(&anchor) {
                        *xi = ai + 0.5 * (*xi - ai);
                    }
                    *v = eval(f, x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (x, v) = simplex.swap_remove(0);
    if v >= v0 {
        (x, v, iters)
    } else {
        (x0.to_vec(), v0, iters)
    }
}
