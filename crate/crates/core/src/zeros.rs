//! Zero counting by the argument principle and zero location by recursive
//! polar subdivision with Newton polishing.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcs::{AnalyticFunctionSpec, Zero};
use crate::math::{normalize_angle, unit, Complex};
use crate::quad::{try_integrate_interval, QuadratureConfig};

/// Relative floor below which `|f|` on a contour counts as vanishing. The
/// local scale is `|f'| · diam`, i.e. the test is `|f/f'| < 1e-9 · diam`.
const CONTOUR_FLOOR: f64 = 1e-9;
const RESIDUAL_LIMIT: f64 = 0.25;
/// Edge perturbations (in units of the cell extent) tried when a zero sits on
/// a subdivision edge.
const JITTER: [f64; 9] = [0.0, -1e-4, 1e-4, -3e-4, 3e-4, -1e-3, 1e-3, -3e-3, 3e-3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Disc {
        center: Complex,
        radius: f64,
    },
    /// `{ρe^{iθ} : r_inner ≤ ρ ≤ r_outer, θ_start ≤ θ ≤ θ_end}` about the origin.
    AnnulusSector {
        r_inner: f64,
        r_outer: f64,
        theta_start: f64,
        theta_end: f64,
    },
}

impl Region {
    pub fn disc(center: Complex, radius: f64) -> Self {
        Region::Disc { center, radius }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::Disc { center, radius } => {
                if !(radius > 0.0) || !(center.norm() + radius < 1.0) {
                    return Err(Error::domain(
                        "disc region must have positive radius and lie inside the unit disc",
                    ));
                }
            }
            Region::AnnulusSector {
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            } => {
                if !(r_inner >= 0.0 && r_inner < r_outer && r_outer < 1.0) {
                    return Err(Error::domain("annulus sector needs 0 <= r_inner < r_outer < 1"));
                }
                let span = theta_end - theta_start;
                if !(span > 0.0 && span <= TAU) {
                    return Err(Error::domain("annulus sector needs 0 < θ_end - θ_start <= 2π"));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.cell().contains(z, 0.0)
    }

    pub fn cell(&self) -> SectorCell {
        match *self {
            Region::Disc { center, radius } => SectorCell {
                center,
                r_inner: 0.0,
                r_outer: radius,
                theta_start: 0.0,
                theta_end: TAU,
            },
            Region::AnnulusSector {
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            } => SectorCell {
                center: Complex::new(0.0, 0.0),
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            },
        }
    }

    /// The same region with its outer radius moved by `dr`.
    pub fn perturbed(&self, dr: f64) -> Self {
        match *self {
            Region::Disc { center, radius } => Region::Disc {
                center,
                radius: radius + dr,
            },
            Region::AnnulusSector {
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            } => Region::AnnulusSector {
                r_inner,
                r_outer: r_outer + dr,
                theta_start,
                theta_end,
            },
        }
    }
}

/// A polar cell about an arbitrary center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorCell {
    pub center: Complex,
    pub r_inner: f64,
    pub r_outer: f64,
    pub theta_start: f64,
    pub theta_end: f64,
}

enum Edge {
    Arc { r: f64, from: f64, to: f64 },
    Ray { theta: f64, from: f64, to: f64 },
}

impl SectorCell {
    fn full(&self) -> bool {
        self.theta_end - self.theta_start >= TAU
    }

    pub fn diameter(&self) -> f64 {
        if self.full() {
            return 2.0 * self.r_outer;
        }
        let half = (0.5 * (self.theta_end - self.theta_start)).min(0.5 * PI);
        (self.r_outer - self.r_inner).hypot(2.0 * self.r_outer * half.sin())
    }

    pub fn midpoint(&self) -> Complex {
        if self.full() && self.r_inner == 0.0 {
            return self.center;
        }
        let r = 0.5 * (self.r_inner + self.r_outer);
        self.center + unit(0.5 * (self.theta_start + self.theta_end)) * r
    }

    pub fn contains(&self, z: Complex, slack: f64) -> bool {
        let w = z - self.center;
        let r = w.norm();
        if r > self.r_outer + slack || r < self.r_inner - slack {
            return false;
        }
        if self.full() || r == 0.0 {
            return true;
        }
        let t = normalize_angle(w.im.atan2(w.re) - self.theta_start);
        let span = self.theta_end - self.theta_start;
        t * r <= span * r + slack || (TAU - t) * r <= slack
    }

    fn edges(&self) -> Vec<Edge> {
        let (a, b) = (self.theta_start, self.theta_end);
        let mut e = Vec::with_capacity(4);
        e.push(Edge::Arc {
            r: self.r_outer,
            from: a,
            to: b,
        });
        if !self.full() {
            e.push(Edge::Ray {
                theta: b,
                from: self.r_outer,
                to: self.r_inner,
            });
        }
        if self.r_inner > 0.0 {
            e.push(Edge::Arc {
                r: self.r_inner,
                from: b,
                to: a,
            });
        }
        if !self.full() {
            e.push(Edge::Ray {
                theta: a,
                from: self.r_inner,
                to: self.r_outer,
            });
        }
        e
    }

    /// Polar quadrisection; a full disc splits into an inner disc of half the
    /// radius and four quadrant sectors. `jitter` shifts the split lines.
    fn split(&self, jitter: f64) -> Vec<SectorCell> {
        let rm = 0.5 * (self.r_inner + self.r_outer) + jitter * (self.r_outer - self.r_inner);
        let base = SectorCell { ..*self };
        let mut out = Vec::with_capacity(5);
        if self.full() && self.r_inner == 0.0 {
            out.push(SectorCell { r_outer: rm, ..base });
            let t0 = self.theta_start + jitter * TAU;
            for k in 0..4 {
                out.push(SectorCell {
                    r_inner: rm,
                    theta_start: t0 + 0.5 * PI * k as f64,
                    theta_end: if k == 3 {
                        t0 + TAU
                    } else {
                        t0 + 0.5 * PI * (k + 1) as f64
                    },
                    ..base
                });
            }
            return out;
        }
        let span = self.theta_end - self.theta_start;
        let tm = self.theta_start + 0.5 * span + jitter * span;
        for (r0, r1) in [(self.r_inner, rm), (rm, self.r_outer)] {
            for (t0, t1) in [(self.theta_start, tm), (tm, self.theta_end)] {
                out.push(SectorCell {
                    center: self.center,
                    r_inner: r0,
                    r_outer: r1,
                    theta_start: t0,
                    theta_end: t1,
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    pub region: Region,
    pub certified_count: u32,
    /// Cells left unresolved at the depth limit, with their winding numbers.
    pub unresolved: Vec<(SectorCell, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSearchConfig {
    pub tol: f64,
    pub max_depth: usize,
    pub contour: QuadratureConfig,
}

impl Default for ZeroSearchConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_depth: 60,
            contour: QuadratureConfig {
                rel_tol: 1e-10,
                abs_tol: 1e-6,
                max_cells: 20_000,
                ..QuadratureConfig::default()
            },
        }
    }
}

fn edge_integral(f: &AnalyticFunctionSpec, cell: &SectorCell, edge: &Edge, cfg: &QuadratureConfig) -> Result<f64> {
    let c = cell.center;
    let diam = cell.diameter();
    let h = 1e-7 * diam;
    let check = |z: Complex| -> Result<Complex> {
        let ld = f.log_derivative(z, h)?;
        if !(ld.re.is_finite() && ld.im.is_finite()) || ld.norm() * diam * CONTOUR_FLOOR > 1.0 {
            return Err(Error::ContourTooClose {
                min_modulus: 1.0 / ld.norm(),
                scale: diam,
            });
        }
        Ok(ld)
    };
    match *edge {
        Edge::Arc { r, from, to } => {
            let (lo, hi, sign) = if to > from { (from, to, 1.0) } else { (to, from, -1.0) };
            let n = (((hi - lo) / (PI / 16.0)).ceil() as usize).max(2);
            let bps: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
            let res = try_integrate_interval(
                |t| {
                    let e = unit(t);
                    let ld = check(c + e * r)?;
                    // Im(f'/f · i r e^{it})
                    Ok((ld * e).re * r)
                },
                &bps,
                cfg.rel_tol,
                cfg.abs_tol,
                cfg.max_cells,
            )?;
            Ok(sign * res.value)
        }
        Edge::Ray { theta, from, to } => {
            let (lo, hi, sign) = if to > from { (from, to, 1.0) } else { (to, from, -1.0) };
            let e = unit(theta);
            let bps: Vec<f64> = (0..=8).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect();
            let res = try_integrate_interval(
                |r| {
                    let ld = check(c + e * r)?;
                    Ok((ld * e).im)
                },
                &bps,
                cfg.rel_tol,
                cfg.abs_tol,
                cfg.max_cells,
            )?;
            Ok(sign * res.value)
        }
    }
}

fn cell_winding(f: &AnalyticFunctionSpec, cell: &SectorCell, cfg: &QuadratureConfig) -> Result<i64> {
    let mut total = 0.0;
    for e in cell.edges() {
        total += edge_integral(f, cell, &e, cfg)?;
    }
    let w = total / TAU;
    let k = w.round();
    if (w - k).abs() > RESIDUAL_LIMIT {
        return Err(Error::NonIntegralWinding(w));
    }
    Ok(k as i64)
}

/// `(1/2πi)∮ f'/f` over the boundary of the region.
pub fn winding_count(f: &AnalyticFunctionSpec, region: &Region, cfg: &QuadratureConfig) -> Result<i64> {
    region.validate()?;
    cell_winding(f, &region.cell(), cfg)
}

/// Retry [`winding_count`] with the outer radius perturbed by
/// `+1e-4, -1e-4, +3e-4, ...` of itself. Returns the region actually used.
pub fn winding_count_jittered(
    f: &AnalyticFunctionSpec,
    region: &Region,
    cfg: &QuadratureConfig,
) -> Result<(i64, Region)> {
    let r = match *region {
        Region::Disc { radius, .. } => radius,
        Region::AnnulusSector { r_outer, .. } => r_outer,
    };
    let mut last = None;
    for j in JITTER.iter().map(|j| -j) {
        let reg = region.perturbed(j * r);
        if reg.validate().is_err() {
            continue;
        }
        match winding_count(f, &reg, cfg) {
            Ok(w) => return Ok((w, reg)),
            Err(e @ (Error::ContourTooClose { .. } | Error::NonIntegralWinding(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::domain("no admissible perturbation of the region")))
}

fn newton(f: &AnalyticFunctionSpec, start: Complex, cell: &SectorCell) -> Option<Complex> {
    let diam = cell.diameter();
    let mut z = start;
    for _ in 0..60 {
        let ld = f.log_derivative(z, 1e-7 * diam).ok()?;
        if !(ld.re.is_finite() && ld.im.is_finite()) {
            // landed exactly on the zero
            return cell.contains(z, 0.0).then_some(z);
        }
        let step = 1.0 / ld;
        z -= step;
        if !(z.norm() < 1.0) {
            return None;
        }
        if step.norm() <= 1e-13 * diam.max(1e-3) {
            let ld = f.log_derivative(z, 1e-7 * diam).ok()?;
            if ld.re.is_finite() && ld.im.is_finite() && ld.norm() > 0.0 {
                z -= 1.0 / ld;
            }
            return cell.contains(z, 1e-12).then_some(z);
        }
    }
    None
}

struct Search<'a> {
    f: &'a AnalyticFunctionSpec,
    cfg: &'a ZeroSearchConfig,
    zeros: Vec<Zero>,
    unresolved: Vec<(SectorCell, u32)>,
}

impl Search<'_> {
    fn run(&mut self, cell: SectorCell, count: u32, depth: usize) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if cell.diameter() < self.cfg.tol {
            self.zeros.push(Zero {
                point: cell.midpoint(),
                multiplicity: count,
            });
            return Ok(());
        }
        if count == 1 {
            if let Some(z) = newton(self.f, cell.midpoint(), &cell) {
                self.zeros.push(Zero::simple(z));
                return Ok(());
            }
        }
        if depth >= self.cfg.max_depth {
            self.unresolved.push((cell, count));
            return Ok(());
        }
        let mut last = None;
        for &j in &JITTER {
            let kids = cell.split(j);
            match self.children(&kids) {
                Ok(counts) if counts.iter().sum::<i64>() == i64::from(count) => {
                    for (k, c) in kids.into_iter().zip(counts) {
                        self.run(k, c as u32, depth + 1)?;
                    }
                    return Ok(());
                }
                Ok(counts) => {
                    last = Some(Error::NonIntegralWinding(counts.iter().sum::<i64>() as f64));
                }
                Err(e @ (Error::ContourTooClose { .. } | Error::NonIntegralWinding(_))) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    fn children(&self, kids: &[SectorCell]) -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(kids.len());
        for k in kids {
            let w = cell_winding(self.f, k, &self.cfg.contour)?;
            if w < 0 {
                return Err(Error::NonIntegralWinding(w as f64));
            }
            out.push(w);
        }
        Ok(out)
    }
}

/// Full argument-principle search, ignoring any stored zero list.
pub fn search_zeros(f: &AnalyticFunctionSpec, region: &Region, cfg: &ZeroSearchConfig) -> Result<ZeroSet> {
    region.validate()?;
    let total = cell_winding(f, &region.cell(), &cfg.contour)?;
    if total < 0 {
        return Err(Error::NonIntegralWinding(total as f64));
    }
    let mut s = Search {
        f,
        cfg,
        zeros: Vec::new(),
        unresolved: Vec::new(),
    };
    s.run(region.cell(), total as u32, 0)?;
    Ok(ZeroSet {
        zeros: s.zeros,
        region: *region,
        certified_count: total as u32,
        unresolved: s.unresolved,
    })
}

/// Zeros in the region: the stored list filtered to the region when the
/// function carries one, else a full search.
pub fn locate_zeros(f: &AnalyticFunctionSpec, region: &Region, cfg: &ZeroSearchConfig) -> Result<ZeroSet> {
    region.validate()?;
    match f.known_zeros() {
        Some(list) => {
            let zeros: Vec<Zero> = list.iter().filter(|a| region.contains(a.point)).copied().collect();
            Ok(ZeroSet {
                certified_count: zeros.iter().map(|a| a.multiplicity).sum(),
                zeros,
                region: *region,
                unresolved: Vec::new(),
            })
        }
        None => search_zeros(f, region, cfg),
    }
}

/// Zeros of `f` in `D(0, s)`, retrying the search with a slightly perturbed
/// radius if a zero sits on the circle.
pub fn zeros_in_disc(f: &AnalyticFunctionSpec, s: f64, cfg: &ZeroSearchConfig) -> Result<ZeroSet> {
    let region = Region::disc(Complex::new(0.0, 0.0), s);
    if f.known_zeros().is_some() {
        return locate_zeros(f, &region, cfg);
    }
    let mut last = None;
    for j in JITTER.iter().map(|j| -j) {
        let reg = region.perturbed(j * s);
        if reg.validate().is_err() {
            continue;
        }
        match search_zeros(f, &reg, cfg) {
            Ok(z) => return Ok(z),
            Err(e @ (Error::ContourTooClose { .. } | Error::NonIntegralWinding(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::domain("no admissible perturbation of the region")))
}
