//! Adaptive quadrature on the unit disc and on circles.
//!
//! Disc cells are polar tensor products of 15-point Gauss-Kronrod rules. The
//! radial variable `ξ` is the radius itself on `[0, 1/2]` and
//! `1 - ρ = e^{-(ξ-1/2)}/2` beyond, so singular factors like `(1-|z|²)^{p-1}`
//! become exponentials in `ξ`. Angles are stored as an anchor (a hinted
//! singular direction) plus an exact offset, so distances to boundary points
//! stay accurate down to the smallest representable gaps.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_4, PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{arg_normalized, normalize_angle, wrap_pi, Complex, Sum};

// Kronrod abscissae (descending) and weights; the 7-point Gauss rule lives on
// the odd entries.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Rule {
    t: [f64; 15],
    wk: [f64; 15],
    wg: [f64; 15],
}

const fn rule() -> Rule {
    let mut t = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    let mut i = 0;
    while i < 7 {
        t[i] = -XGK[i];
        t[14 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
        i += 1;
    }
    t[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    Rule { t, wk, wg }
}

const GK: Rule = rule();

/// Largest value of the log-radial coordinate; `1-ρ` is about `e^{-690}/2`.
const X_LIMIT: f64 = 690.0;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_cells: usize,
    /// Singularity hints. Points on the unit circle grade the angular
    /// partition; interior points also add a radial breakpoint.
    pub grading_points: Vec<Complex>,
    /// Ratio between successive initial radial breakpoints in `1-ρ`.
    pub boundary_grading_exponent: f64,
    /// Stop the radial range where `1-ρ` reaches this value (0 integrates to
    /// the float limit). Needed when the integrand evaluates a function that
    /// rejects `|z| = 1` after rounding.
    pub min_gap: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            max_cells: 2_000_000,
            grading_points: Vec::new(),
            boundary_grading_exponent: 0.5,
            min_gap: 0.0,
        }
    }
}

impl QuadratureConfig {
    pub fn with_grading(mut self, pts: impl IntoIterator<Item = Complex>) -> Self {
        self.grading_points.extend(pts);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_cells < 16 {
            return Err(Error::domain("max_cells must be at least 16"));
        }
        let r = self.boundary_grading_exponent;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain("boundary grading ratio must lie in (0, 1)"));
        }
        if !(self.min_gap >= 0.0 && self.min_gap < 0.5) {
            return Err(Error::domain("min_gap must lie in [0, 1/2)"));
        }
        if self.grading_points.iter().any(|p| !(p.norm() <= 1.0 + 1e-12)) {
            return Err(Error::domain("grading point outside the closed disc"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
    pub converged: bool,
}

/// A quadrature node with its exact polar description.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscPoint {
    pub z: Complex,
    pub rho: f64,
    /// `1 - ρ`, exact even when `ρ` rounds to 1.
    pub gap: f64,
    pub anchor: f64,
    /// Angle is `anchor + offset`; the offset is exact.
    pub offset: f64,
}

impl DiscPoint {
    pub fn new(z: Complex) -> Self {
        let rho = z.norm();
        Self {
            z,
            rho,
            gap: 1.0 - rho,
            anchor: arg_normalized(z),
            offset: 0.0,
        }
    }

    fn polar(rho: f64, gap: f64, anchor: f64, offset: f64, cs: (f64, f64)) -> Self {
        Self {
            z: Complex::new(rho * cs.0, rho * cs.1),
            rho,
            gap,
            anchor,
            offset,
        }
    }

    pub fn theta(&self) -> f64 {
        self.anchor + self.offset
    }

    /// `1 - |z|²`
    pub fn one_minus_abs2(&self) -> f64 {
        self.gap * (1.0 + self.rho)
    }

    /// `|z - e^{iφ}|` for an angle `φ` in `[0, 2π)`.
    pub fn distance_to_boundary(&self, phi: f64) -> f64 {
        let delta = if phi == self.anchor {
            self.offset
        } else {
            wrap_pi(self.anchor - phi + self.offset)
        };
        let s = (0.5 * delta).sin();
        (self.gap * self.gap + 4.0 * self.rho * s * s).sqrt()
    }
}

/// `(ρ, 1-ρ, dρ/dξ)` for the radial coordinate.
#[inline]
fn radial(xi: f64) -> (f64, f64, f64) {
    if xi <= 0.5 {
        (xi, 1.0 - xi, 1.0)
    } else {
        let gap = 0.5 * (-(xi - 0.5)).exp();
        (1.0 - gap, gap, gap)
    }
}

fn xi_of_rho(rho: f64) -> f64 {
    if rho <= 0.5 {
        rho
    } else {
        0.5 - (2.0 * (1.0 - rho)).ln()
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    r: (f64, f64),
    anchor: f64,
    o: (f64, f64),
    value: f64,
    err: f64,
    err_r: f64,
    err_a: f64,
    alive: bool,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    err: f64,
    id: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.id.cmp(&self.id))
    }
}

fn check_finite(v: f64, z: Complex) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { re: z.re, im: z.im })
    }
}

fn eval_cell<F>(f: &mut F, r: (f64, f64), anchor: f64, o: (f64, f64)) -> Result<Cell>
where
    F: FnMut(&DiscPoint) -> Result<f64>,
{
    let (cr, hr) = (0.5 * (r.0 + r.1), 0.5 * (r.1 - r.0));
    let (co, ho) = (0.5 * (o.0 + o.1), 0.5 * (o.1 - o.0));
    let mut offs = [0.0; 15];
    let mut trig = [(0.0, 0.0); 15];
    for j in 0..15 {
        offs[j] = co + ho * GK.t[j];
        let th = anchor + offs[j];
        trig[j] = (th.cos(), th.sin());
    }
    let (mut kk, mut kg, mut gk, mut gg) = (Sum::new(), Sum::new(), Sum::new(), Sum::new());
    for i in 0..15 {
        let (rho, gap, d) = radial(cr + hr * GK.t[i]);
        let jac = rho * d;
        let (mut rk, mut rg) = (0.0, 0.0);
        for j in 0..15 {
            let pt = DiscPoint::polar(rho, gap, anchor, offs[j], trig[j]);
            let v = check_finite(f(&pt)?, pt.z)?;
            rk += GK.wk[j] * v;
            rg += GK.wg[j] * v;
        }
        kk.add(GK.wk[i] * jac * rk);
        kg.add(GK.wk[i] * jac * rg);
        if GK.wg[i] != 0.0 {
            gk.add(GK.wg[i] * jac * rk);
            gg.add(GK.wg[i] * jac * rg);
        }
    }
    let scale = hr * ho;
    let value = kk.value() * scale;
    let err_r = ((kk.value() - gk.value()) * scale).abs();
    let err_a = ((kk.value() - kg.value()) * scale).abs();
    let err_gg = ((kk.value() - gg.value()) * scale).abs();
    Ok(Cell {
        r,
        anchor,
        o,
        value,
        err: (err_r + err_a).max(err_gg),
        err_r,
        err_a,
        alive: true,
    })
}

fn radial_breakpoints(cfg: &QuadratureConfig) -> (Vec<f64>, f64) {
    let step = -cfg.boundary_grading_exponent.ln();
    let mut x_max = X_LIMIT;
    if cfg.min_gap > 0.0 {
        x_max = x_max.min(-(2.0 * cfg.min_gap).ln());
    }
    let xi_max = 0.5 + x_max;
    let mut bps = alloc::vec![0.0, 0.5];
    let mut m = 1.0;
    while step * m < x_max - 1.0 {
        bps.push(0.5 + step * m);
        m *= 2.0;
    }
    bps.push(xi_max - 1.0);
    bps.push(xi_max);
    for p in &cfg.grading_points {
        let rho = p.norm();
        if rho > 0.0 && rho < 1.0 - 1e-12 {
            let xi = xi_of_rho(rho);
            if xi < xi_max - 1.0 {
                bps.push(xi);
            }
        }
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs().max(1.0));
    (bps, xi_max - 1.0)
}

/// Angular pieces `(anchor, lo, hi)`, each at most `π/4` wide and anchored at
/// the nearest hinted angle.
fn angular_pieces(cfg: &QuadratureConfig) -> Vec<(f64, f64, f64)> {
    let mut hints: Vec<f64> = cfg
        .grading_points
        .iter()
        .filter(|p| p.norm() > 0.0)
        .map(|&p| arg_normalized(p))
        .collect();
    hints.sort_by(f64::total_cmp);
    hints.dedup();
    if hints.is_empty() {
        hints.push(0.0);
    }
    let n = hints.len();
    let mut out = Vec::new();
    for k in 0..n {
        let a = hints[k];
        let b = if k + 1 < n { hints[k + 1] } else { hints[0] + TAU };
        let half = 0.5 * (b - a);
        let pieces = (half / FRAC_PI_4).ceil().max(1.0) as usize;
        let w = half / pieces as f64;
        for i in 0..pieces {
            let hi = if i + 1 == pieces { half } else { w * (i + 1) as f64 };
            out.push((a, w * i as f64, hi));
        }
        let anchor_b = if k + 1 < n { hints[k + 1] } else { hints[0] };
        for i in 0..pieces {
            let lo = if i + 1 == pieces { -half } else { -w * (i + 1) as f64 };
            out.push((anchor_b, lo, -w * i as f64));
        }
    }
    out
}

/// `∫_𝔻 f dm` for an integrand that may fail.
pub fn try_integrate_disc<F>(mut f: F, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(&DiscPoint) -> Result<f64>,
{
    cfg.validate()?;
    let (rb, tail_start) = radial_breakpoints(cfg);
    let pieces = angular_pieces(cfg);
    let mut cells: Vec<Cell> = Vec::new();
    let mut heap = BinaryHeap::new();
    for w in rb.windows(2) {
        for &(anchor, lo, hi) in &pieces {
            let cell = eval_cell(&mut f, (w[0], w[1]), anchor, (lo, hi))?;
            heap.push(Entry {
                err: cell.err,
                id: cells.len(),
            });
            cells.push(cell);
        }
    }
    let mut leaves = cells.len();
    let mut value = cells.iter().map(|c| c.value).collect::<Sum>();
    let mut err = cells.iter().map(|c| c.err).collect::<Sum>();
    let mut frozen = Sum::new();
    let status = |cells: &[Cell]| -> (f64, f64, f64) {
        let mut v = Sum::new();
        let mut e = Sum::new();
        let mut tail = Sum::new();
        for c in cells.iter().filter(|c| c.alive) {
            v.add(c.value);
            e.add(c.err);
            if c.r.0 >= tail_start {
                tail.add(c.value);
            }
        }
        (v.value(), e.value(), tail.value().abs())
    };
    let mut converged = false;
    loop {
        let total = err.value() + frozen.value();
        if total <= cfg.target(value.value()) {
            let (v, e, tail) = status(&cells);
            value = Sum::new();
            value.add(v);
            err = Sum::new();
            err.add(e);
            if e + frozen.value() + tail <= cfg.target(v) {
                converged = true;
                break;
            }
            if e + frozen.value() <= cfg.target(v) {
                // only the truncated tail is left and it will not shrink
                break;
            }
        }
        if leaves + 1 > cfg.max_cells {
            break;
        }
        let Some(top) = heap.pop() else { break };
        let cell = cells[top.id];
        let mid_r = 0.5 * (cell.r.0 + cell.r.1);
        let mid_o = 0.5 * (cell.o.0 + cell.o.1);
        let can_r = mid_r > cell.r.0 && mid_r < cell.r.1;
        let can_o = mid_o > cell.o.0 && mid_o < cell.o.1;
        let radial_split = match (can_r, can_o) {
            (false, false) => {
                frozen.add(cell.err);
                err.add(-cell.err);
                cells[top.id].err = 0.0;
                continue;
            }
            (true, false) => true,
            (false, true) => false,
            (true, true) => cell.err_r >= cell.err_a,
        };
        let (a, b) = if radial_split {
            (
                eval_cell(&mut f, (cell.r.0, mid_r), cell.anchor, cell.o)?,
                eval_cell(&mut f, (mid_r, cell.r.1), cell.anchor, cell.o)?,
            )
        } else {
            (
                eval_cell(&mut f, cell.r, cell.anchor, (cell.o.0, mid_o))?,
                eval_cell(&mut f, cell.r, cell.anchor, (mid_o, cell.o.1))?,
            )
        };
        cells[top.id].alive = false;
        value.add(-cell.value);
        err.add(-cell.err);
        for child in [a, b] {
            value.add(child.value);
            err.add(child.err);
            heap.push(Entry {
                err: child.err,
                id: cells.len(),
            });
            cells.push(child);
        }
        leaves += 1;
    }
    let (v, e, tail) = status(&cells);
    Ok(QuadratureResult {
        value: v,
        error_estimate: e + frozen.value() + tail,
        cells_used: leaves,
        converged,
    })
}

/// `∫_𝔻 f dm`.
pub fn integrate_disc<F>(mut f: F, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(&DiscPoint) -> f64,
{
    try_integrate_disc(|p| Ok(f(p)), cfg)
}

#[derive(Clone, Copy, Debug)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    alive: bool,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Interval>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let (mut k, mut g) = (Sum::new(), Sum::new());
    for i in 0..15 {
        let x = c + h * GK.t[i];
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { re: x, im: 0.0 });
        }
        k.add(GK.wk[i] * v);
        if GK.wg[i] != 0.0 {
            g.add(GK.wg[i] * v);
        }
    }
    Ok(Interval {
        a,
        b,
        value: k.value() * h,
        err: ((k.value() - g.value()) * h).abs(),
        alive: true,
    })
}

/// Adaptive Gauss-Kronrod over consecutive breakpoints (at least two, sorted).
pub fn try_integrate_interval<F>(
    mut f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("breakpoints must be strictly increasing"));
    }
    let mut ivs = Vec::new();
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        let iv = gk15(&mut f, w[0], w[1])?;
        heap.push(Entry {
            err: iv.err,
            id: ivs.len(),
        });
        ivs.push(iv);
    }
    let target = |v: f64| (rel_tol * v.abs()).max(abs_tol);
    let mut leaves = ivs.len();
    let mut value = ivs.iter().map(|c| c.value).collect::<Sum>();
    let mut err = ivs.iter().map(|c| c.err).collect::<Sum>();
    let mut frozen = 0.0;
    let mut converged = false;
    loop {
        if err.value() + frozen <= target(value.value()) {
            let v = ivs.iter().filter(|c| c.alive).map(|c| c.value).collect::<Sum>();
            let e = ivs.iter().filter(|c| c.alive).map(|c| c.err).collect::<Sum>();
            value = v;
            err = e;
            if err.value() + frozen <= target(value.value()) {
                converged = true;
                break;
            }
        }
        if leaves + 1 > max_intervals {
            break;
        }
        let Some(top) = heap.pop() else { break };
        let iv = ivs[top.id];
        let mid = 0.5 * (iv.a + iv.b);
        if !(mid > iv.a && mid < iv.b) {
            frozen += iv.err;
            err.add(-iv.err);
            ivs[top.id].err = 0.0;
            continue;
        }
        let l = gk15(&mut f, iv.a, mid)?;
        let r = gk15(&mut f, mid, iv.b)?;
        ivs[top.id].alive = false;
        value.add(-iv.value);
        err.add(-iv.err);
        for child in [l, r] {
            value.add(child.value);
            err.add(child.err);
            heap.push(Entry {
                err: child.err,
                id: ivs.len(),
            });
            ivs.push(child);
        }
        leaves += 1;
    }
    let v = ivs.iter().filter(|c| c.alive).map(|c| c.value).collect::<Sum>();
    let e = ivs.iter().filter(|c| c.alive).map(|c| c.err).collect::<Sum>();
    Ok(QuadratureResult {
        value: v.value(),
        error_estimate: e.value() + frozen,
        cells_used: leaves,
        converged,
    })
}

fn circle_breakpoints(cfg: &QuadratureConfig) -> Vec<f64> {
    let mut bps: Vec<f64> = cfg
        .grading_points
        .iter()
        .filter(|p| p.norm() > 0.0)
        .map(|&p| arg_normalized(p))
        .collect();
    for k in 0..8 {
        bps.push(k as f64 * FRAC_PI_4);
    }
    bps.push(TAU);
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    bps
}

/// `∫_0^{2π} f(θ) dθ` on the circle of radius `s`; hinted angles become
/// breakpoints.
pub fn try_integrate_circle<F>(f: F, s: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(0.0..1.0).contains(&s) {
        return Err(Error::domain("circle radius must lie in [0, 1)"));
    }
    try_integrate_interval(f, &circle_breakpoints(cfg), cfg.rel_tol, cfg.abs_tol, cfg.max_cells)
}

pub fn integrate_circle<F>(mut f: F, s: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_circle(|t| Ok(f(t)), s, cfg)
}

/// `sup` of `f` over a strictly increasing grid in `[0, 1)` and the smallest
/// grid point attaining it.
pub fn sup_over_s<F>(grid: &[f64], mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_grid(grid)?;
    let mut best = (f64::NEG_INFINITY, grid[0]);
    for &s in grid {
        let v = f(s)?;
        if v > best.0 || v.is_nan() {
            best = (v, s);
        }
    }
    Ok(best)
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("empty s grid"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("s grid must be strictly increasing"));
    }
    if !(grid[0] >= 0.0 && grid[grid.len() - 1] < 1.0) {
        return Err(Error::domain("s grid must lie in [0, 1)"));
    }
    Ok(())
}

/// `1 - δ 2^{-k}` for `k = 0..n`.
pub fn geometric_s_grid(delta: f64, n: usize) -> Result<Vec<f64>> {
    if !(delta > 0.0 && delta < 1.0) || n == 0 {
        return Err(Error::domain("need 0 < δ < 1 and a nonempty grid"));
    }
    Ok((0..n).map(|k| 1.0 - delta * 0.5f64.powi(k as i32)).collect())
}

/// Midpoint of the largest angular gap between hints, a safe direction for
/// sampling away from singularities.
pub fn quiet_angle(hints: &[f64]) -> f64 {
    let mut a: Vec<f64> = hints.iter().map(|&t| normalize_angle(t)).collect();
    if a.is_empty() {
        return PI / 3.0;
    }
    a.sort_by(f64::total_cmp);
    let mut best = (0.0, 0.0);
    for k in 0..a.len() {
        let next = if k + 1 < a.len() { a[k + 1] } else { a[0] + TAU };
        if next - a[k] > best.0 {
            best = (next - a[k], a[k] + 0.5 * (next - a[k]));
        }
    }
    normalize_angle(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::unit;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let wk: f64 = GK.wk.iter().sum();
        let wg: f64 = GK.wg.iter().sum();
        assert!((wk - 2.0).abs() < 1e-15 && (wg - 2.0).abs() < 1e-15);
        for deg in 0..=22 {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let k: f64 = (0..15).map(|i| GK.wk[i] * GK.t[i].powi(deg)).sum();
            assert!((k - exact).abs() < 1e-14, "kronrod deg {deg}");
            if deg <= 13 {
                let g: f64 = (0..15).map(|i| GK.wg[i] * GK.t[i].powi(deg)).sum();
                assert!((g - exact).abs() < 1e-14, "gauss deg {deg}");
            }
        }
    }

    #[test]
    fn disc_area() {
        let r = integrate_disc(|_| 1.0, &QuadratureConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - PI).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn radial_power_laws() {
        for p in [0.25, 0.5, 1.0, 2.0] {
            let r = integrate_disc(|pt| pt.one_minus_abs2().powf(p - 1.0), &QuadratureConfig::default()).unwrap();
            assert!(r.converged, "p={p}: {r:?}");
            assert!((r.value / (PI / p) - 1.0).abs() < 1e-6, "p={p}: {r:?}");
        }
    }

    #[test]
    fn log_divergent_is_not_converged() {
        let cfg = QuadratureConfig {
            max_cells: 20_000,
            ..Default::default()
        };
        let r = integrate_disc(|pt| 1.0 / pt.one_minus_abs2(), &cfg).unwrap();
        assert!(!r.converged, "{r:?}");
    }

    #[test]
    fn boundary_point_singularity_converges() {
        let cfg = QuadratureConfig::default().with_grading([Complex::new(1.0, 0.0)]);
        let r = integrate_disc(|pt| pt.one_minus_abs2().powf(-0.5) / pt.distance_to_boundary(0.0), &cfg).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.value.is_finite() && r.value > 0.0);
    }

    #[test]
    fn nan_integrand_reports_point() {
        let e = integrate_disc(|pt| if pt.rho > 0.6 { f64::NAN } else { 1.0 }, &Default::default());
        assert!(matches!(e, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let cfg = QuadratureConfig {
            max_cells: 300,
            ..Default::default()
        };
        let r = integrate_disc(|pt| (pt.z.re * 40.0).sin().abs(), &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.cells_used <= 300);
    }

    #[test]
    fn deterministic_bits() {
        let cfg = QuadratureConfig::default().with_grading([unit(1.0), unit(2.5)]);
        let f = |pt: &DiscPoint| pt.distance_to_boundary(1.0).powf(-0.7) * pt.z.im.exp();
        let a = integrate_disc(f, &cfg).unwrap();
        let b = integrate_disc(f, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn halving_tolerance_does_not_raise_error() {
        let base = QuadratureConfig::default().with_grading([unit(0.4)]);
        let f = |pt: &DiscPoint| pt.one_minus_abs2().powf(-0.3) * pt.distance_to_boundary(0.4).powf(-0.5);
        let mut prev = f64::INFINITY;
        for k in 0..4 {
            let cfg = QuadratureConfig {
                rel_tol: 1e-6 / f64::from(1 << k),
                ..base.clone()
            };
            let r = integrate_disc(f, &cfg).unwrap();
            assert!(r.converged);
            assert!(r.error_estimate <= prev, "{k}: {} > {prev}", r.error_estimate);
            prev = r.error_estimate;
        }
    }

    #[test]
    fn circle_examples() {
        let cfg = QuadratureConfig::default();
        let r = integrate_circle(|_| 1.0, 0.5, &cfg).unwrap();
        assert!((r.value - TAU).abs() < 1e-12);
        let r = integrate_circle(f64::cos, 0.5, &cfg).unwrap();
        assert!(r.value.abs() < 1e-12);
        let s = 0.99;
        let f = |t: f64| (unit(t) * s - 1.0).norm().powf(-0.5);
        let cfg = cfg.with_grading([Complex::new(1.0, 0.0)]);
        let r = integrate_circle(f, s, &cfg).unwrap();
        let n = 1_000_000;
        let trap: f64 = (0..n).map(|k| f(TAU * k as f64 / n as f64)).sum::<f64>() * TAU / n as f64;
        assert!((r.value - trap).abs() < 1e-6, "{} vs {trap}", r.value);
    }

    #[test]
    fn sup_examples() {
        let g = geometric_s_grid(0.5, 16).unwrap();
        assert_eq!(sup_over_s(&g, |_| Ok(3.0)).unwrap(), (3.0, 0.5));
        assert_eq!(sup_over_s(&[0.9, 0.95], Ok).unwrap(), (0.95, 0.95));
        assert!(sup_over_s(&[], Ok).is_err());
        assert!(sup_over_s(&[0.9, 0.8], Ok).is_err());
        // interior peak against a ten times denser grid
        let peak = |s: f64| Ok(-(s - 0.77f64).powi(2));
        let coarse: Vec<f64> = (0..20).map(|k| 0.5 + 0.025 * k as f64).collect();
        let dense: Vec<f64> = (0..200).map(|k| 0.5 + 0.0025 * k as f64).collect();
        let (a, _) = sup_over_s(&coarse, peak).unwrap();
        let (b, _) = sup_over_s(&dense, peak).unwrap();
        assert!((a - b).abs() <= 2.0 * 0.0125 * 0.0125);
    }

    #[test]
    fn point_distance_matches_direct() {
        let cfg = QuadratureConfig::default().with_grading([unit(2.0)]);
        let mut worst: f64 = 0.0;
        integrate_disc(
            |pt| {
                if pt.gap > 1e-3 {
                    let d = (pt.z - unit(arg_normalized(unit(2.0)))).norm();
                    worst = worst.max((pt.distance_to_boundary(arg_normalized(unit(2.0))) / d - 1.0).abs());
                }
                1.0
            },
            &cfg,
        )
        .unwrap();
        assert!(worst < 1e-10, "{worst}");
    }
}
