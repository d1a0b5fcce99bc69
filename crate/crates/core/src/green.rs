//! Test fields `g_s(z) = (1-|z|²)^{1+p} φ(sz)`, closed-form Laplacians, and
//! the Green identity that turns zero sums into area integrals.
//!
//! With `Δ log|f| = 2π Σ δ_a` the identity reads
//! `2π Σ_{a ∈ Z(f_s)} g_s(a) = ∫_𝔻 log|f_s| Δg_s dm + B(s)`, where the
//! boundary term `B(s) = 2∫_𝕋 φ(se^{iθ}) log|f(se^{iθ})| dθ` only appears for
//! `p = 0`.

use alloc::vec::Vec;
use core::f64::consts::TAU;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcs::AnalyticFunctionSpec;
use crate::math::{log_minus, log_plus, unit, Complex};
use crate::quad::{try_integrate_circle, try_integrate_disc, DiscPoint, QuadratureConfig, QuadratureResult};
use crate::weights::{ClosedArcSet, MixedWeightSpec, RationalWeightSpec};
use crate::zeros::{zeros_in_disc, ZeroSearchConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum FieldWeight {
    /// `|R|²`
    Rational(RationalWeightSpec),
    /// `|R|² h^q`; the distance-only weight is the case without points.
    Mixed(MixedWeightSpec),
}

impl FieldWeight {
    pub fn distance_only(set: ClosedArcSet, q: f64) -> Result<Self> {
        Ok(FieldWeight::Mixed(MixedWeightSpec::new(
            RationalWeightSpec::empty(),
            set,
            q,
        )?))
    }

    pub fn rational(&self) -> &RationalWeightSpec {
        match self {
            FieldWeight::Rational(r) => r,
            FieldWeight::Mixed(m) => m.rational(),
        }
    }

    pub fn eval(&self, w: Complex) -> Result<f64> {
        match self {
            FieldWeight::Rational(r) => r.modulus(w, 2.0),
            FieldWeight::Mixed(m) => m.eval(w),
        }
    }

    /// Boundary directions where the weight is singular or not smooth.
    pub fn hint_points(&self) -> Vec<Complex> {
        let mut out: Vec<Complex> = self.rational().points().to_vec();
        if let FieldWeight::Mixed(m) = self {
            out.extend(m.closed_set().endpoints().into_iter().map(unit));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub weight: FieldWeight,
    pub p: f64,
    pub s: f64,
}

impl FieldSpec {
    pub fn new(weight: FieldWeight, p: f64, s: f64) -> Result<Self> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::domain("field exponent p must be >= 0"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain("dilation s must lie in (0, 1)"));
        }
        Ok(Self { weight, p, s })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplacianSplit {
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub delta_mixed: f64,
}

impl LaplacianSplit {
    pub fn total(&self) -> f64 {
        self.delta_plus - self.delta_minus + self.delta_mixed
    }
}

fn check_z(z: Complex) -> Result<()> {
    if z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc { modulus: z.norm() })
    }
}

pub fn eval_g(field: &FieldSpec, z: Complex) -> Result<f64> {
    check_z(z)?;
    let om = 1.0 - z.norm_sqr();
    Ok(om.powf(1.0 + field.p) * field.weight.eval(z * field.s)?)
}

pub fn eval_g_at(field: &FieldSpec, pt: &DiscPoint) -> Result<f64> {
    Ok(pt.one_minus_abs2().powf(1.0 + field.p) * field.weight.eval(pt.z * field.s)?)
}

fn split_rational(r: &RationalWeightSpec, p: f64, s: f64, z: Complex, om: f64) -> Result<LaplacianSplit> {
    let psi = r.modulus(z * s, 2.0)?;
    let sum = r.log_derivative(z * s);
    let r2 = z.norm_sqr();
    let plus = 4.0 * om.powf(p - 1.0) * (p * (p + 1.0) * r2 + s * s * om * om * sum.norm_sqr()) * psi;
    let minus = 4.0 * (p + 1.0) * om.powf(p) * psi;
    let mixed = -8.0 * s * (p + 1.0) * om.powf(p) * (z.conj() * sum.conj()).re * psi;
    Ok(LaplacianSplit {
        delta_plus: plus,
        delta_minus: minus,
        delta_mixed: mixed,
    })
}

/// `Δg_s = Δ₊ - Δ₋ + Δ∓` for the rational field `(1-|z|²)^{1+p}|R(sz)|²`.
pub fn laplacian_split_rational(field: &FieldSpec, z: Complex) -> Result<LaplacianSplit> {
    check_z(z)?;
    let FieldWeight::Rational(r) = &field.weight else {
        return Err(Error::domain("rational split needs a rational field"));
    };
    split_rational(r, field.p, field.s, z, 1.0 - z.norm_sqr())
}

/// `H(z) = h(sz)^q` with its `∂_z` and Laplacian.
struct HData {
    value: f64,
    dz: Complex,
    lap: f64,
}

/// `H` and its derivatives in closed form on the active piece of `d(·,E)`:
/// `d² = (1-|w|)²` over an arc, `|w - e^{iα}|²` near an endpoint.
fn h_closed(m: &MixedWeightSpec, s: f64, z: Complex) -> HData {
    let set = m.closed_set();
    let q = m.q_dist();
    let w = z * s;
    let (d, piece) = set.nearest(w);
    let r2 = w.norm_sqr();
    let t = 1.0 - r2;
    let big_f = d * d + t * t;
    let value = big_f.powf(0.5 * q);
    if q == 0.0 {
        return HData {
            value,
            dz: Complex::new(0.0, 0.0),
            lap: 0.0,
        };
    }
    // ∂_w and Δ_w of F = d² + (1-|w|²)²
    let (mut df, mut lf) = (-2.0 * t * w.conj(), 8.0 * (2.0 * r2 - 1.0));
    match piece {
        crate::weights::NearestPiece::Interior(_) => {
            let rho = r2.sqrt();
            df += -(1.0 - rho) * w.conj() / rho;
            lf += 4.0 - 2.0 / rho;
        }
        crate::weights::NearestPiece::Start(k) | crate::weights::NearestPiece::End(k) => {
            let a = set.arcs()[k];
            let e = unit(if matches!(piece, crate::weights::NearestPiece::Start(_)) {
                a.start
            } else {
                a.end()
            });
            df += (w - e).conj();
            lf += 4.0;
        }
    }
    let g1 = 0.5 * q * big_f.powf(0.5 * q - 1.0);
    let g2 = 0.5 * q * (0.5 * q - 1.0) * big_f.powf(0.5 * q - 2.0);
    HData {
        value,
        dz: g1 * df * s,
        lap: (g1 * lf + 4.0 * g2 * df.norm_sqr()) * s * s,
    }
}

fn split_mixed(m: &MixedWeightSpec, p: f64, s: f64, z: Complex, om: f64) -> Result<[f64; 7]> {
    if m.q_dist() != 0.0 {
        let set = m.closed_set();
        let (d, piece) = set.nearest(z * s);
        let k = 1e-3 * (1.0 - z.norm()).min(d / s).min(z.norm()).min(1.0);
        let moved = (0..16).any(|j| set.nearest((z + unit(TAU * j as f64 / 16.0) * k) * s).1 != piece);
        if moved || k == 0.0 {
            return Err(Error::NonSmoothPoint { re: z.re, im: z.im });
        }
    }
    split_mixed_with(m, p, s, z, om, h_closed(m, s, z))
}

fn split_mixed_with(m: &MixedWeightSpec, p: f64, s: f64, z: Complex, om: f64, h: HData) -> Result<[f64; 7]> {
    let r = m.rational();
    let psi = r.modulus(z * s, 2.0)?;
    let dpsi = psi * s * r.log_derivative(z * s);
    let lap_psi = 4.0 * dpsi.norm_sqr() / psi.max(f64::MIN_POSITIVE) * f64::from(psi > 0.0);
    let u = om.powf(p + 1.0);
    let du = -(p + 1.0) * om.powf(p) * z.conj();
    let lap_u = 4.0 * (p + 1.0) * om.powf(p - 1.0) * (p * z.norm_sqr() - om);
    let a12 = 0.5 * lap_u * psi * h.value;
    Ok([
        a12,
        a12,
        u * h.value * lap_psi,
        u * psi * h.lap,
        8.0 * u * (dpsi.conj() * h.dz).re,
        8.0 * h.value * (du * dpsi.conj()).re,
        8.0 * psi * (du * h.dz.conj()).re,
    ])
}

/// `Δg_s = A₁ + … + A₇` for a mixed field.
pub fn laplacian_split_mixed(field: &FieldSpec, z: Complex) -> Result<[f64; 7]> {
    check_z(z)?;
    let FieldWeight::Mixed(m) = &field.weight else {
        return Err(Error::domain("mixed split needs a mixed field"));
    };
    split_mixed(m, field.p, field.s, z, 1.0 - z.norm_sqr())
}

/// Closed-form `Δg_s` at a quadrature node, using its exact `1-|z|²`. For
/// mixed fields this is the pointwise Laplacian on each smooth piece of
/// `d(·,E)`; the kinks of `d` along bisectors carry an extra line measure
/// that is not included.
pub fn laplacian_g_at(field: &FieldSpec, pt: &DiscPoint) -> Result<f64> {
    let om = pt.one_minus_abs2();
    match &field.weight {
        FieldWeight::Rational(r) => Ok(split_rational(r, field.p, field.s, pt.z, om)?.total()),
        FieldWeight::Mixed(m) => {
            let h = h_closed(m, field.s, pt.z);
            Ok(split_mixed_with(m, field.p, field.s, pt.z, om, h)?.iter().sum())
        }
    }
}

/// Five-point finite-difference Laplacian of `g_s` with step `h`.
pub fn fd_laplacian(field: &FieldSpec, z: Complex, h: f64) -> Result<f64> {
    let c = eval_g(field, z)?;
    let mut acc = -4.0 * c;
    for d in [
        Complex::new(h, 0.0),
        Complex::new(-h, 0.0),
        Complex::new(0.0, h),
        Complex::new(0.0, -h),
    ] {
        acc += eval_g(field, z + d)?;
    }
    Ok(acc / (h * h))
}

/// True when the weight is smooth on the disc of radius `radius` about `z`
/// (the nearest part of `E` to `sz` does not change there).
pub fn smooth_near(field: &FieldSpec, z: Complex, radius: f64) -> bool {
    let FieldWeight::Mixed(m) = &field.weight else {
        return true;
    };
    if m.q_dist() == 0.0 {
        return true;
    }
    let set = m.closed_set();
    let piece = set.nearest(z * field.s).1;
    (0..24).all(|k| {
        let w = z + unit(TAU * k as f64 / 24.0) * radius;
        set.nearest(w * field.s).1 == piece
    }) && (0..24).all(|k| {
        let w = z + unit(TAU * (k as f64 + 0.5) / 24.0) * (0.5 * radius);
        set.nearest(w * field.s).1 == piece
    })
}

fn quad_cfg(f: &AnalyticFunctionSpec, field: &FieldSpec, cfg: &QuadratureConfig) -> QuadratureConfig {
    let s = field.s;
    let mut c = cfg.clone().with_grading(field.weight.hint_points());
    if let Some(zs) = f.known_zeros() {
        c.grading_points
            .extend(zs.iter().filter(|a| a.point.norm() < s).map(|a| a.point / s));
    }
    c
}

fn require_converged(r: QuadratureResult, what: &str) -> Result<QuadratureResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::domain(alloc::format!(
            "{what} did not converge (error estimate {:e})",
            r.error_estimate
        )))
    }
}

/// `(B₊, B₋)` with `B± = 2∫_𝕋 φ(se^{iθ}) log^±|f(se^{iθ})| dθ`, for `p = 0`.
pub fn boundary_term(f: &AnalyticFunctionSpec, field: &FieldSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (plus, minus) = boundary_parts(f, field, cfg)?;
    Ok((plus.value, minus.value))
}

fn boundary_parts(
    f: &AnalyticFunctionSpec,
    field: &FieldSpec,
    cfg: &QuadratureConfig,
) -> Result<(QuadratureResult, QuadratureResult)> {
    if field.p != 0.0 {
        return Err(Error::domain("the boundary term belongs to p = 0"));
    }
    let s = field.s;
    let c = quad_cfg(f, field, cfg);
    let term = |sign: f64| {
        try_integrate_circle(
            |t| {
                let w = unit(t) * s;
                let l = f.log_abs(w)?;
                let part = if sign > 0.0 { log_plus(l) } else { log_minus(l) };
                if part == 0.0 {
                    return Ok(0.0);
                }
                Ok(2.0 * field.weight.eval(w)? * part)
            },
            s,
            &c,
        )
        .and_then(|r| require_converged(r, "boundary term"))
    };
    Ok((term(1.0)?, term(-1.0)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenResidual {
    /// `Σ_{a ∈ Z(f_s)} g_s(a)` with multiplicity.
    pub zero_sum: f64,
    /// `∫_𝔻 log|f_s| Δg_s dm`.
    pub integral: QuadratureResult,
    /// `(B₊, B₋)`, present for `p = 0`.
    pub boundary: Option<(f64, f64)>,
    /// `(∫ log|f_s| Δg_s + B₊ - B₋) / 2π`.
    pub integral_side: f64,
    pub residual: f64,
    /// Quadrature error estimate carried to the scale of the residual.
    pub budget: f64,
}

pub fn green_identity_residual(
    f: &AnalyticFunctionSpec,
    field: &FieldSpec,
    cfg: &QuadratureConfig,
) -> Result<GreenResidual> {
    let s = field.s;
    let zs = zeros_in_disc(f, s, &ZeroSearchConfig::default())?;
    let mut zero_sum = 0.0;
    for a in &zs.zeros {
        let b = a.point / s;
        if b.norm() < 1.0 {
            zero_sum += f64::from(a.multiplicity) * eval_g(field, b)?;
        }
    }
    let c = quad_cfg(f, field, cfg).with_grading(zs.zeros.iter().map(|a| a.point / s));
    let integral = try_integrate_disc(
        |pt| {
            let lap = laplacian_g_at(field, pt)?;
            if lap == 0.0 {
                return Ok(0.0);
            }
            Ok(f.log_abs(pt.z * s)? * lap)
        },
        &c,
    )?;
    let integral = require_converged(integral, "Green integral")?;
    let mut budget = integral.error_estimate;
    let mut rhs = integral.value;
    let boundary = if field.p == 0.0 {
        let (bp, bm) = boundary_parts(f, field, cfg)?;
        rhs += bp.value - bm.value;
        budget += bp.error_estimate + bm.error_estimate;
        Some((bp.value, bm.value))
    } else {
        None
    };
    let integral_side = rhs / TAU;
    Ok(GreenResidual {
        zero_sum,
        integral,
        boundary,
        integral_side,
        residual: zero_sum - integral_side,
        budget: budget / TAU,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::Zero;
    use crate::math::c;
    use core::f64::consts::PI;

    fn rational(angles: &[f64], q: &[f64], p: f64, s: f64) -> FieldSpec {
        let r = RationalWeightSpec::from_angles(angles, q.to_vec()).unwrap();
        FieldSpec::new(FieldWeight::Rational(r), p, s).unwrap()
    }

    #[test]
    fn eval_g_examples() {
        let f = rational(&[0.0], &[1.0], 1.0, 0.5);
        assert!((eval_g(&f, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((eval_g(&f, c(0.5, 0.0)).unwrap() - 0.31640625).abs() < 1e-15);
        let e = ClosedArcSet::new(&[(1.0, 2.0)]).unwrap();
        let m = MixedWeightSpec::new(
            RationalWeightSpec::from_angles(&[4.0], alloc::vec![0.5]).unwrap(),
            e,
            1.5,
        )
        .unwrap();
        let fm = FieldSpec::new(FieldWeight::Mixed(m), 1.0, 0.7).unwrap();
        assert!((eval_g(&fm, c(0.0, 0.0)).unwrap() - 2f64.sqrt().powf(1.5)).abs() < 1e-14);
        assert!(eval_g(&f, unit(0.3) * (1.0 - 1e-9)).unwrap() < 1e-16);
    }

    #[test]
    fn rational_split_examples() {
        let f = rational(&[0.0], &[1.0], 1.0, 0.5);
        let sp = laplacian_split_rational(&f, c(0.0, 0.0)).unwrap();
        assert!((sp.delta_plus - 1.0).abs() < 1e-15);
        assert!((sp.delta_minus - 8.0).abs() < 1e-15);
        assert_eq!(sp.delta_mixed, 0.0);
        // φ ≡ 1: Δ₊ - Δ₋ = Δ(1-|z|²)^{p+1}
        let p = 1.7;
        let f = rational(&[0.0, 2.0], &[0.0, 0.0], p, 0.8);
        let z = c(0.3, -0.45);
        let sp = laplacian_split_rational(&f, z).unwrap();
        let om = 1.0 - z.norm_sqr();
        let lap_u = 4.0 * (p + 1.0) * om.powf(p - 1.0) * (p * z.norm_sqr() - om);
        assert_eq!(sp.delta_mixed, 0.0);
        assert!((sp.delta_plus - sp.delta_minus - lap_u).abs() < 1e-12);
    }

    #[test]
    fn mixed_split_reductions() {
        let e = ClosedArcSet::new(&[(2.0, 3.5)]).unwrap();
        let r = RationalWeightSpec::from_angles(&[0.3, 5.0], alloc::vec![1.0, 0.4]).unwrap();
        let z = c(0.2, 0.3);
        let m0 = MixedWeightSpec::new(r.clone(), e.clone(), 0.0).unwrap();
        let f0 = FieldSpec::new(FieldWeight::Mixed(m0), 0.8, 0.9).unwrap();
        let a = laplacian_split_mixed(&f0, z).unwrap();
        assert_eq!([a[3], a[4], a[6]], [0.0, 0.0, 0.0]);
        let rat = FieldSpec::new(FieldWeight::Rational(r), 0.8, 0.9).unwrap();
        let total: f64 = a.iter().sum();
        assert!((total - laplacian_split_rational(&rat, z).unwrap().total()).abs() < 1e-12);
        let fd = FieldSpec::new(FieldWeight::distance_only(e, 1.3).unwrap(), 0.8, 0.9).unwrap();
        let a = laplacian_split_mixed(&fd, z).unwrap();
        assert_eq!([a[2], a[4], a[5]], [0.0, 0.0, 0.0]);
        let reference = fd_laplacian(&fd, z, 1e-3).unwrap();
        assert!((a.iter().sum::<f64>() - reference).abs() < 1e-4 * reference.abs().max(1.0));
    }

    #[test]
    fn closed_form_h_matches_differences() {
        let e = ClosedArcSet::new(&[(2.0, 3.5), (5.0, 5.5)]).unwrap();
        let r = RationalWeightSpec::from_angles(&[0.3, 4.2], alloc::vec![1.0, -0.3]).unwrap();
        let m = MixedWeightSpec::new(r, e, 1.7).unwrap();
        let field = FieldSpec::new(FieldWeight::Mixed(m), 0.6, 0.85).unwrap();
        let mut checked = 0;
        for k in 0..400 {
            let z = unit(0.77 * k as f64) * (0.95 * ((0.123 + k as f64 * 0.618) % 1.0));
            if z.norm() < 0.05 {
                continue;
            }
            let FieldWeight::Mixed(m) = &field.weight else {
                unreachable!()
            };
            let Ok(h) = h_data(m, field.s, z) else { continue };
            let om = 1.0 - z.norm_sqr();
            let fd: f64 = split_mixed_with(m, field.p, field.s, z, om, h).unwrap().iter().sum();
            let b = laplacian_g_at(&field, &DiscPoint::new(z)).unwrap();
            assert!((fd - b).abs() <= 1e-6 * (1.0 + b.abs()), "{z}: {fd} vs {b}");
            checked += 1;
        }
        assert!(checked > 300);
    }

    #[test]
    fn mixed_split_rejects_medial_points() {
        // the bisector between the two endpoints of E
        let e = ClosedArcSet::new(&[(0.0, 1.0)]).unwrap();
        let fd = FieldSpec::new(FieldWeight::distance_only(e, 1.0).unwrap(), 1.0, 0.9).unwrap();
        let z = unit(0.5 + PI) * 0.3;
        assert!(matches!(
            laplacian_split_mixed(&fd, z),
            Err(Error::NonSmoothPoint { .. })
        ));
        assert!(!smooth_near(&fd, z, 1e-2));
    }

    #[test]
    fn signs_of_split() {
        let f = rational(&[0.5, 2.5], &[1.3, -0.4], 0.5, 0.9);
        for k in 0..200 {
            let z = unit(0.61 * k as f64) * (0.99 * ((k as f64 * 0.37) % 1.0));
            let sp = laplacian_split_rational(&f, z).unwrap();
            assert!(sp.delta_plus >= 0.0 && sp.delta_minus >= 0.0);
        }
    }

    #[test]
    fn normal_derivative_decays() {
        let p = 0.5;
        let f = rational(&[0.0], &[1.0], p, 0.9);
        let dir = unit(1.0);
        let slope = |eps: f64| {
            let h = 1e-3 * eps;
            (eval_g(&f, dir * (1.0 - eps + h)).unwrap() - eval_g(&f, dir * (1.0 - eps - h)).unwrap()) / (2.0 * h)
        };
        let (a, b) = (slope(1e-2).abs(), slope(1e-4).abs());
        // ratio ~ (1e-2)^p
        assert!((b / a).log10() / -2.0 > p - 0.1, "{a} {b}");
    }

    #[test]
    fn boundary_term_examples() {
        let cfg = QuadratureConfig::default();
        let field = rational(&[0.0], &[0.0], 0.0, 0.6);
        let e = AnalyticFunctionSpec::constant(c(1f64.exp(), 0.0)).unwrap();
        let (bp, bm) = boundary_term(&e, &field, &cfg).unwrap();
        assert!((bp - 4.0 * PI).abs() < 1e-10 && bm == 0.0);
        assert_eq!(
            boundary_term(&AnalyticFunctionSpec::one(), &field, &cfg).unwrap(),
            (0.0, 0.0)
        );
        let b = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.5, 0.0))], true).unwrap();
        let field = rational(&[0.0], &[0.0], 0.0, 0.9);
        let (bp, bm) = boundary_term(&b, &field, &cfg.with_grading([c(1.0, 0.0)])).unwrap();
        // Jensen: ∫ log|f(se^{iθ})| dθ = 2π log(s/0.5) + 2π log(1/0.5)·0 for the normalized product
        let jensen = TAU * (0.9f64 / 0.5).ln();
        assert!(
            (0.5 * (bp - bm) - jensen).abs() < 1e-7,
            "{} vs {jensen}",
            0.5 * (bp - bm)
        );
    }

    #[test]
    fn identity_for_constant_is_exact() {
        let field = rational(&[0.0], &[1.0], 1.0, 0.7);
        let r = green_identity_residual(&AnalyticFunctionSpec::one(), &field, &QuadratureConfig::default()).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn identity_for_z() {
        let f = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.0, 0.0))], false).unwrap();
        let field = rational(&[0.0], &[0.0], 1.0, 0.5);
        let r = green_identity_residual(&f, &field, &QuadratureConfig::default()).unwrap();
        assert!((r.zero_sum - 1.0).abs() < 1e-15);
        assert!((r.integral_side - 1.0).abs() < 1e-6, "{r:?}");
        let field = rational(&[0.0], &[0.0], 0.0, 0.5);
        let r = green_identity_residual(&f, &field, &QuadratureConfig::default()).unwrap();
        assert!(r.residual.abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn identity_with_weights_and_mixed() {
        let zs = [
            Zero::simple(c(0.3, 0.2)),
            Zero::simple(c(-0.5, 0.4)),
            Zero {
                point: c(0.1, -0.6),
                multiplicity: 2,
            },
        ];
        let f = AnalyticFunctionSpec::blaschke(&zs, true).unwrap();
        let cfg = QuadratureConfig::default();
        for p in [0.0, 0.5, 2.0] {
            let field = rational(&[0.4, 3.0], &[1.5, 0.5], p, 0.9);
            let r = green_identity_residual(&f, &field, &cfg).unwrap();
            assert!(r.residual.abs() <= 1e-5 * (1.0 + r.integral_side.abs()), "p={p}: {r:?}");
        }
    }

    fn h_data(m: &MixedWeightSpec, s: f64, z: Complex) -> Result<HData> {
        let set = m.closed_set();
        let q = m.q_dist();
        let hq = |w: Complex| set.h(w * s).powf(q);
        let value = hq(z);
        if q == 0.0 {
            return Ok(HData {
                value,
                dz: Complex::new(0.0, 0.0),
                lap: 0.0,
            });
        }
        let (d, piece) = set.nearest(z * s);
        // the arc-interior distance 1-|w| has a cone point at w = 0
        let scale = (1.0 - z.norm()).min(d / s).min(z.norm()).min(1.0);
        let k = 3e-3 * scale;
        for dir in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)] {
            for j in [-2.0, -1.0, 1.0, 2.0] {
                if set.nearest((z + dir * (j * k)) * s).1 != piece {
                    return Err(Error::NonSmoothPoint { re: z.re, im: z.im });
                }
            }
        }
        let mut d1 = [0.0; 2];
        let mut lap = 0.0;
        for (i, dir) in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)].into_iter().enumerate() {
            let (m2, m1, p1, p2) = (
                hq(z - dir * (2.0 * k)),
                hq(z - dir * k),
                hq(z + dir * k),
                hq(z + dir * (2.0 * k)),
            );
            d1[i] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * k);
            lap += (-m2 + 16.0 * m1 - 30.0 * value + 16.0 * p1 - p2) / (12.0 * k * k);
        }
        Ok(HData {
            value,
            dz: Complex::new(0.5 * d1[0], -0.5 * d1[1]),
            lap,
        })
    }
}
