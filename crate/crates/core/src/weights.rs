//! Boundary weights: rational weights `|R(z)| = ∏|z-η_j|^{q_j}`, distance to a
//! closed arc set `E`, and the mixed weight `|R|² h^q`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{arg_normalized, normalize_angle, pos, unit, wrap_pi, Complex};
use crate::quad::DiscPoint;

const UNIMODULAR_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalWeightSpec {
    points: Vec<Complex>,
    angles: Vec<f64>,
    exponents: Vec<f64>,
    separation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TildeMode {
    /// `q̃ = q` when `q > -p/2`, else `-p/2 + κ`; used with `|R|` and `p > 0`.
    PPositive,
    /// `q̃ = max(q, 0)`.
    PZero,
    /// `q̃ = q` when `q - 1 > -p/2`, else `1 - p/2 + κ`; returns exponents `q̃ - 1`.
    LinftyPPositive,
}

impl RationalWeightSpec {
    pub fn new(points: Vec<Complex>, exponents: Vec<f64>) -> Result<Self> {
        if points.len() != exponents.len() {
            return Err(Error::domain("points and exponents differ in length"));
        }
        for (j, eta) in points.iter().enumerate() {
            if !(eta.re.is_finite() && eta.im.is_finite()) {
                return Err(Error::domain("non-finite boundary point"));
            }
            if (eta.norm() - 1.0).abs() > UNIMODULAR_TOL {
                return Err(Error::domain(alloc::format!(
                    "boundary point {j} is not unimodular (|eta| = {})",
                    eta.norm()
                )));
            }
        }
        if exponents.iter().any(|q| !q.is_finite()) {
            return Err(Error::domain("non-finite exponent"));
        }
        let angles: Vec<f64> = points.iter().map(|&e| arg_normalized(e)).collect();
        let separation = min_separation(&angles);
        if separation <= 0.0 {
            return Err(Error::domain("boundary points are not distinct"));
        }
        Ok(Self {
            points,
            angles,
            exponents,
            separation,
        })
    }

    pub fn from_angles(angles: &[f64], exponents: Vec<f64>) -> Result<Self> {
        Self::new(angles.iter().map(|&t| unit(t)).collect(), exponents)
    }

    pub fn empty() -> Self {
        Self {
            points: Vec::new(),
            angles: Vec::new(),
            exponents: Vec::new(),
            separation: PI,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    /// Angles of the points in `[0, 2π)`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    /// `Σ|q_j|`
    pub fn abs_q(&self) -> f64 {
        self.exponents.iter().map(|q| q.abs()).sum()
    }

    /// `max|q_j|`, zero for the empty weight.
    pub fn sup_q(&self) -> f64 {
        self.exponents.iter().fold(0.0, |m, q| m.max(q.abs()))
    }

    /// Minimal pairwise arc distance; `π` when there are fewer than two points.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn with_exponents(&self, exponents: Vec<f64>) -> Result<Self> {
        if exponents.len() != self.points.len() || exponents.iter().any(|q| !q.is_finite()) {
            return Err(Error::domain("exponent list does not match the points"));
        }
        Ok(Self {
            exponents,
            ..self.clone()
        })
    }

    /// `∏|z-η_j|^{power q_j}`.
    pub fn modulus(&self, z: Complex, power: f64) -> Result<f64> {
        let mut log = 0.0;
        for (eta, q) in self.points.iter().zip(&self.exponents) {
            let e = power * q;
            if e == 0.0 {
                continue;
            }
            let d = (z - eta).norm();
            if d == 0.0 {
                if e < 0.0 {
                    return Err(Error::singular(z));
                }
                return Ok(0.0);
            }
            log += e * d.ln();
        }
        Ok(log.exp())
    }

    /// As [`modulus`](Self::modulus) but with boundary distances taken from the
    /// exact polar representation of the quadrature point.
    pub fn modulus_at(&self, pt: &DiscPoint, power: f64) -> Result<f64> {
        let mut log = 0.0;
        for (phi, q) in self.angles.iter().zip(&self.exponents) {
            let e = power * q;
            if e == 0.0 {
                continue;
            }
            let d = pt.distance_to_boundary(*phi);
            if d == 0.0 {
                if e < 0.0 {
                    return Err(Error::singular(pt.z));
                }
                return Ok(0.0);
            }
            log += e * d.ln();
        }
        Ok(log.exp())
    }

    /// `Σ|q_j| |z-η_j|^{-1}`
    pub fn gamma(&self, z: Complex) -> Result<f64> {
        let mut acc = 0.0;
        for (eta, q) in self.points.iter().zip(&self.exponents) {
            let d = (z - eta).norm();
            if d == 0.0 {
                return Err(Error::singular(z));
            }
            acc += q.abs() / d;
        }
        Ok(acc)
    }

    /// `|Σ q_j (z-η_j)^{-1}|`, never larger than [`gamma`](Self::gamma).
    pub fn gamma_intro(&self, z: Complex) -> Result<f64> {
        if self.points.contains(&z) {
            return Err(Error::singular(z));
        }
        Ok(self.log_derivative(z).norm())
    }

    /// `Σ q_j / (w - η_j)`, the logarithmic derivative of `R`.
    pub fn log_derivative(&self, w: Complex) -> Complex {
        self.points
            .iter()
            .zip(&self.exponents)
            .fold(Complex::new(0.0, 0.0), |acc, (eta, q)| acc + *q / (w - eta))
    }

    pub fn tilde(&self, p: f64, mode: TildeMode, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::domain("margin kappa must be positive"));
        }
        let exps = match mode {
            TildeMode::PZero => self.exponents.iter().map(|&q| pos(q)).collect(),
            TildeMode::PPositive => {
                require_positive_p(p)?;
                self.exponents
                    .iter()
                    .map(|&q| if q > -p / 2.0 { q } else { -p / 2.0 + kappa })
                    .collect()
            }
            TildeMode::LinftyPPositive => {
                require_positive_p(p)?;
                self.exponents
                    .iter()
                    .map(|&q| {
                        let qt = if q - 1.0 > -p / 2.0 { q } else { 1.0 - p / 2.0 + kappa };
                        qt - 1.0
                    })
                    .collect()
            }
        };
        self.with_exponents(exps)
    }

    /// Exponents `q_j - 1 + ε`, clamped at zero from below when `clamp` is set.
    pub fn epsilon_shift(&self, eps: f64, clamp: bool) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::domain("epsilon must be positive"));
        }
        let exps = self
            .exponents
            .iter()
            .map(|&q| {
                let e = q - 1.0 + eps;
                if clamp {
                    pos(e)
                } else {
                    e
                }
            })
            .collect();
        self.with_exponents(exps)
    }
}

fn require_positive_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("this transform needs p > 0"))
    }
}

fn min_separation(angles: &[f64]) -> f64 {
    let mut sep = PI;
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            sep = sep.min(wrap_pi(angles[i] - angles[j]).abs());
        }
    }
    sep
}

/// One closed arc `{e^{iθ} : start ≤ θ ≤ start + len}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcInterval {
    pub start: f64,
    pub len: f64,
}

impl ArcInterval {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    fn contains_angle(&self, theta: f64) -> bool {
        normalize_angle(theta - self.start) <= self.len
    }
}

/// Which part of `E` is nearest to a point: the interior of an arc (distance
/// `1-|z|`) or one of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NearestPiece {
    Interior(usize),
    Start(usize),
    End(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedArcSet {
    arcs: Vec<ArcInterval>,
    contiguous: Vec<(f64, f64)>,
}

impl ClosedArcSet {
    /// Arcs are given as `(θ_start, θ_end)` radian pairs traversed
    /// counter-clockwise; they must be pairwise disjoint.
    pub fn new(arcs: &[(f64, f64)]) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::domain("closed set must contain at least one arc"));
        }
        let mut list = Vec::with_capacity(arcs.len());
        for &(a, b) in arcs {
            if !(a.is_finite() && b.is_finite()) || b < a {
                return Err(Error::domain("arc endpoints must be finite with end >= start"));
            }
            if b - a >= TAU {
                return Err(Error::domain("arc covers the whole circle"));
            }
            list.push(ArcInterval {
                start: normalize_angle(a),
                len: b - a,
            });
        }
        list.sort_by(|x, y| x.start.total_cmp(&y.start));
        let n = list.len();
        let mut contiguous = Vec::with_capacity(n);
        for i in 0..n {
            let cur = list[i];
            let next = list[(i + 1) % n];
            let mut gap = next.start - cur.end();
            if i + 1 == n {
                gap += TAU;
            }
            if gap <= 0.0 {
                return Err(Error::domain("arcs overlap or touch"));
            }
            contiguous.push((normalize_angle(cur.end()), normalize_angle(cur.end()) + gap));
        }
        Ok(Self { arcs: list, contiguous })
    }

    pub fn arcs(&self) -> &[ArcInterval] {
        &self.arcs
    }

    /// Open complementary arcs `(α_j, β_j)` with `α_j < β_j`, angles in radians.
    pub fn contiguous(&self) -> &[(f64, f64)] {
        &self.contiguous
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains_angle(theta))
    }

    /// Endpoint angles, useful as quadrature hints.
    pub fn endpoints(&self) -> Vec<f64> {
        self.arcs
            .iter()
            .flat_map(|a| [a.start, normalize_angle(a.end())])
            .collect()
    }

    pub fn nearest(&self, z: Complex) -> (f64, NearestPiece) {
        let r = z.norm();
        let theta = if r > 0.0 { arg_normalized(z) } else { f64::NAN };
        let mut best = (f64::INFINITY, NearestPiece::Interior(0));
        for (k, a) in self.arcs.iter().enumerate() {
            if r > 0.0 && a.contains_angle(theta) {
                let d = (1.0 - r).abs();
                if d < best.0 {
                    best = (d, NearestPiece::Interior(k));
                }
                continue;
            }
            let ds = (z - unit(a.start)).norm();
            let de = (z - unit(a.end())).norm();
            if ds < best.0 {
                best = (ds, NearestPiece::Start(k));
            }
            if de < best.0 {
                best = (de, NearestPiece::End(k));
            }
        }
        best
    }

    /// Euclidean distance `d(z, E)`.
    pub fn distance(&self, z: Complex) -> f64 {
        self.nearest(z).0
    }

    /// `h(z) = sqrt(d(z,E)² + (1-|z|²)²)`.
    pub fn h(&self, z: Complex) -> f64 {
        let d = self.distance(z);
        let w = 1.0 - z.norm_sqr();
        d.hypot(w)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedWeightSpec {
    rational: RationalWeightSpec,
    closed_set: ClosedArcSet,
    q_dist: f64,
    mu: f64,
}

impl MixedWeightSpec {
    /// With no boundary points `μ` is set to 1, the largest value it can take.
    pub fn new(rational: RationalWeightSpec, closed_set: ClosedArcSet, q_dist: f64) -> Result<Self> {
        if !q_dist.is_finite() {
            return Err(Error::domain("non-finite distance exponent"));
        }
        let mut two_mu = 2.0f64;
        for &eta in rational.points() {
            let d = closed_set.distance(eta);
            if !(d > 0.0) {
                return Err(Error::domain("a boundary point of R lies in E"));
            }
            two_mu = two_mu.min(d);
        }
        Ok(Self {
            rational,
            closed_set,
            q_dist,
            mu: two_mu / 2.0,
        })
    }

    pub fn rational(&self) -> &RationalWeightSpec {
        &self.rational
    }

    pub fn closed_set(&self) -> &ClosedArcSet {
        &self.closed_set
    }

    pub fn q_dist(&self) -> f64 {
        self.q_dist
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `|R(z)|² h(z)^q`
    pub fn eval(&self, z: Complex) -> Result<f64> {
        let r2 = self.rational.modulus(z, 2.0)?;
        if self.q_dist == 0.0 {
            return Ok(r2);
        }
        Ok(r2 * self.closed_set.h(z).powf(self.q_dist))
    }
}
