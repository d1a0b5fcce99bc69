//! Numerical checks of the auxiliary lemmas: substitution bounds, the
//! half-disc sign test, continuity of circle means, an integrability bound,
//! the limit argument over dilations and the change of variables `u = sz`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcs::AnalyticFunctionSpec;
use crate::math::{log_minus, unit, Complex};
use crate::nevan::{
    blaschke_sum, check_normalization, log_plus_at, norm_p_positive, partial_sums, ratio, zero_list, CheckId,
    NormEstimate, RadialBase, VerificationReport,
};
use crate::quad::{check_grid, try_integrate_circle, try_integrate_disc, QuadratureConfig, QuadratureResult};
use crate::weights::RationalWeightSpec;
use crate::zeros::{search_zeros, zeros_in_disc, Region, ZeroSearchConfig};

/// Width of the band around `|z - η/2| = 1/2` left unclassified.
pub const HALFDISC_BAND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubstitutionParams {
    pub delta_exp: f64,
    pub u: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `Σ|q_j|`
    pub abs_q: f64,
    pub c_delta_u: f64,
}

impl SubstitutionParams {
    /// `2·4^{|q|}(1-u)^{δ-α-β}`
    pub fn closed_form(&self) -> f64 {
        2.0 * 4f64.powf(self.abs_q) * (1.0 - self.u).powf(self.delta_exp - self.alpha - self.beta)
    }
}

/// `α = -2 max(0, -q_j)`, `β = 2 max q_j`; both maxima are 0 over an empty
/// weight.
pub fn substitution_constants(weight: &RationalWeightSpec, delta_exp: f64, u: f64) -> Result<SubstitutionParams> {
    if !(delta_exp > 0.0 && delta_exp.is_finite()) {
        return Err(Error::domain("substitution exponent δ must be positive"));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("u must lie in (0, 1)"));
    }
    let q = weight.exponents();
    let alpha = -2.0 * q.iter().fold(0.0f64, |m, &x| m.max(-x));
    let beta = if q.is_empty() {
        0.0
    } else {
        2.0 * q.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    };
    let mut params = SubstitutionParams {
        delta_exp,
        u,
        alpha,
        beta,
        abs_q: weight.abs_q(),
        c_delta_u: 0.0,
    };
    params.c_delta_u = params.closed_form();
    Ok(params)
}

fn log_minus_at(f: &AnalyticFunctionSpec, w: Complex) -> Result<f64> {
    let l = f.log_abs(w)?;
    if l.is_nan() {
        return Err(Error::NonFiniteIntegrand { re: w.re, im: w.im });
    }
    Ok((-l).max(0.0))
}

/// Hints for integrands in `z` that involve `log|f(sz)|`: the zeros of `f_s`
/// and the weight's boundary points.
fn hints(f: &AnalyticFunctionSpec, weight: &RationalWeightSpec, s: f64) -> Result<Vec<Complex>> {
    let zs = zeros_in_disc(f, s, &ZeroSearchConfig::default())?;
    let mut h: Vec<Complex> = zs
        .zeros
        .iter()
        .map(|a| a.point / s)
        .filter(|b| b.norm() < 1.0)
        .collect();
    h.extend_from_slice(weight.points());
    Ok(h)
}

fn converged(r: &QuadratureResult) -> bool {
    r.converged
}

/// `∫(1-|z|²)^{p-1+δ}|R(sz)|² log⁻|f(sz)| ≤ (1-u²)^δ u^{-2} P₋(s) + c(δ,u) P₊(s)`
/// with `P₋` carrying the factor `|z|²`.
pub fn substitution_check(
    f: &AnalyticFunctionSpec,
    weight: &RationalWeightSpec,
    p: f64,
    delta_exp: f64,
    u: f64,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain("substitution check needs p > 0"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("dilation s must lie in (0, 1)"));
    }
    check_normalization(f)?;
    let k = substitution_constants(weight, delta_exp, u)?;
    let c = cfg.clone().with_grading(hints(f, weight, s)?);
    let lhs = try_integrate_disc(
        |pt| {
            let lm = log_minus_at(f, pt.z * s)?;
            if lm == 0.0 {
                return Ok(0.0);
            }
            Ok(pt.one_minus_abs2().powf(p - 1.0 + delta_exp) * weight.modulus(pt.z * s, 2.0)? * lm)
        },
        &c,
    )?;
    let p_minus = try_integrate_disc(
        |pt| {
            let lm = log_minus_at(f, pt.z * s)?;
            if lm == 0.0 {
                return Ok(0.0);
            }
            Ok(pt.one_minus_abs2().powf(p - 1.0) * pt.z.norm_sqr() * weight.modulus(pt.z * s, 2.0)? * lm)
        },
        &c,
    )?;
    let p_plus = try_integrate_disc(
        |pt| {
            let lp = log_plus_at(f, pt.z * s)?;
            if lp == 0.0 {
                return Ok(0.0);
            }
            Ok(pt.one_minus_abs2().powf(p - 1.0) * weight.modulus(pt.z * s, 2.0)? * lp)
        },
        &c,
    )?;
    let a = (1.0 - u * u).powf(delta_exp) / (u * u);
    let rhs = a * p_minus.value + k.c_delta_u * p_plus.value;
    let budget = lhs.error_estimate + a * p_minus.error_estimate + k.c_delta_u * p_plus.error_estimate;
    let conv = converged(&lhs) && converged(&p_minus) && converged(&p_plus);
    Ok(VerificationReport {
        check: CheckId::Substitution,
        statement: "int (1-|z|^2)^(p-1+d) |R(sz)|^2 log-|f(sz)| <= (1-u^2)^d u^-2 P-(s) + c(d,u) P+(s)".into(),
        lhs: lhs.value,
        rhs,
        ratio: ratio(lhs.value, rhs),
        constant_used: k.c_delta_u,
        pass: conv && lhs.value <= rhs + budget,
        converged: conv,
        diagnostics: vec![
            format!("P- = {}, P+ = {}", p_minus.value, p_plus.value),
            format!("alpha = {}, beta = {}, budget = {budget:e}", k.alpha, k.beta),
        ],
    })
}

/// Circle means `∫_𝕋 |R(se^{iθ})|² log^±|f(se^{iθ})| dθ`.
fn circle_parts(
    f: &AnalyticFunctionSpec,
    weight: &RationalWeightSpec,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<(QuadratureResult, QuadratureResult)> {
    if s == 0.0 {
        let l = f.log_abs(Complex::new(0.0, 0.0))?;
        let w = weight.modulus(Complex::new(0.0, 0.0), 2.0)?;
        let r = |v: f64| QuadratureResult {
            value: 2.0 * PI * w * v,
            error_estimate: 0.0,
            cells_used: 0,
            converged: true,
        };
        return Ok((r(l.max(0.0)), r((-l).max(0.0))));
    }
    let zs = zeros_in_disc(f, (s * 1.001).min(0.999_999), &ZeroSearchConfig::default())?;
    let c = cfg
        .clone()
        .with_grading(zs.zeros.iter().map(|a| a.point))
        .with_grading(weight.points().iter().copied());
    let plus = try_integrate_circle(
        |t| {
            let w = unit(t) * s;
            let lp = log_plus_at(f, w)?;
            if lp == 0.0 {
                return Ok(0.0);
            }
            Ok(weight.modulus(w, 2.0)? * lp)
        },
        s,
        &c,
    )?;
    let minus = try_integrate_circle(
        |t| {
            let w = unit(t) * s;
            let lm = log_minus_at(f, w)?;
            if lm == 0.0 {
                return Ok(0.0);
            }
            Ok(weight.modulus(w, 2.0)? * lm)
        },
        s,
        &c,
    )?;
    Ok((plus, minus))
}

/// For every `s` of an `n`-point grid on `[0, t₀]`,
/// `∫(1-|z|²)^{δ-1}|R(sz)|² log⁻|f(sz)| ≤ c(δ,u) P_{𝕋,+}(t₀) + (2δ)^{-1}(1-u²)^δ P_{𝕋,-}(t₀)`,
/// the suprema `P_{𝕋,±}` taken over the same grid. The reported `lhs` is the
/// largest left side.
pub fn substitution_check_torus(
    f: &AnalyticFunctionSpec,
    weight: &RationalWeightSpec,
    delta_exp: f64,
    u: f64,
    t0: f64,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport> {
    if !(t0 > 0.0 && t0 < 1.0) || n < 2 {
        return Err(Error::domain("need 0 < t0 < 1 and at least two grid points"));
    }
    check_normalization(f)?;
    let k = substitution_constants(weight, delta_exp, u)?;
    let grid: Vec<f64> = (0..n).map(|j| t0 * j as f64 / (n - 1) as f64).collect();
    let (mut pt_plus, mut pt_minus) = (0.0f64, 0.0f64);
    let mut lhs_max = 0.0f64;
    let mut budget = 0.0f64;
    let mut conv = true;
    for &s in &grid {
        let (plus, minus) = circle_parts(f, weight, s, cfg)?;
        pt_plus = pt_plus.max(plus.value);
        pt_minus = pt_minus.max(minus.value);
        conv &= plus.converged && minus.converged;
        budget = budget.max(plus.error_estimate + minus.error_estimate);
        if s == 0.0 {
            continue;
        }
        let c = cfg.clone().with_grading(hints(f, weight, s)?);
        let l = try_integrate_disc(
            |pt| {
                let lm = log_minus_at(f, pt.z * s)?;
                if lm == 0.0 {
                    return Ok(0.0);
                }
                Ok(pt.one_minus_abs2().powf(delta_exp - 1.0) * weight.modulus(pt.z * s, 2.0)? * lm)
            },
            &c,
        )?;
        conv &= l.converged;
        budget = budget.max(l.error_estimate);
        lhs_max = lhs_max.max(l.value);
    }
    let b = (1.0 - u * u).powf(delta_exp) / (2.0 * delta_exp);
    let rhs = k.c_delta_u * pt_plus + b * pt_minus;
    let budget = budget * (1.0 + k.c_delta_u + b);
    Ok(VerificationReport {
        check: CheckId::SubstitutionTorus,
        statement: "int (1-|z|^2)^(d-1) |R(sz)|^2 log-|f(sz)| <= c(d,u) PT+(t0) + (1-u^2)^d PT-(t0) / (2d)".into(),
        lhs: lhs_max,
        rhs,
        ratio: ratio(lhs_max, rhs),
        constant_used: k.c_delta_u,
        pass: conv && lhs_max <= rhs + budget,
        converged: conv,
        diagnostics: vec![format!("PT+ = {pt_plus}, PT- = {pt_minus}, budget = {budget:e}")],
    })
}

/// `(Re(z̄(z-η)) ≤ 0, |z - η/2| ≤ 1/2)`.
pub fn halfdisc_sign(z: Complex, eta: Complex) -> (bool, bool) {
    ((z.conj() * (z - eta)).re <= 0.0, (z - eta * 0.5).norm() <= 0.5)
}

/// True when `z` lies within [`HALFDISC_BAND`] of the circle `|z - η/2| = 1/2`.
pub fn in_halfdisc_band(z: Complex, eta: Complex) -> bool {
    ((z - eta * 0.5).norm() - 0.5).abs() <= HALFDISC_BAND
}

/// Counts `(checked, violations)` over the pairs, skipping the boundary band.
pub fn halfdisc_sweep(pairs: impl IntoIterator<Item = (Complex, Complex)>) -> (usize, usize) {
    let (mut n, mut bad) = (0, 0);
    for (z, eta) in pairs {
        if in_halfdisc_band(z, eta) {
            continue;
        }
        n += 1;
        let (a, b) = halfdisc_sign(z, eta);
        bad += usize::from(a != b);
    }
    (n, bad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityLevel {
    pub spacing: f64,
    pub max_jump: f64,
    pub values: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityTable {
    pub levels: Vec<ContinuityLevel>,
    /// `max_jump` of each level over the previous one; 0 when both vanish.
    pub ratios: Vec<f64>,
    pub threshold: f64,
    pub pass: bool,
}

/// `γ(s) = ∫_𝕋 φ(se^{iθ}) log⁻|f(se^{iθ})| dθ` on `s = t k / n`, with `n`
/// doubled at each level starting from `n0`.
pub fn continuity_probe<W>(
    f: &AnalyticFunctionSpec,
    weight: W,
    hints_on_circle: &[Complex],
    t: f64,
    n0: usize,
    levels: usize,
    cfg: &QuadratureConfig,
) -> Result<ContinuityTable>
where
    W: Fn(Complex) -> Result<f64>,
{
    if !(t > 0.0 && t < 1.0) || n0 == 0 || levels < 2 {
        return Err(Error::domain("need 0 < t < 1, n0 > 0 and at least two levels"));
    }
    check_normalization(f)?;
    let zs = zeros_in_disc(f, (t * 1.001).min(0.999_999), &ZeroSearchConfig::default())?;
    let c = cfg
        .clone()
        .with_grading(zs.zeros.iter().map(|a| a.point))
        .with_grading(hints_on_circle.iter().copied());
    let gamma = |s: f64| -> Result<f64> {
        if s == 0.0 {
            return Ok(2.0 * PI * weight(Complex::new(0.0, 0.0))? * log_minus(f.eval(Complex::new(0.0, 0.0))?.norm()));
        }
        let r = try_integrate_circle(
            |th| {
                let w = unit(th) * s;
                let lm = log_minus_at(f, w)?;
                if lm == 0.0 {
                    return Ok(0.0);
                }
                Ok(weight(w)? * lm)
            },
            s,
            &c,
        )?;
        if !r.converged {
            return Err(Error::domain(format!("circle mean at s = {s} did not converge")));
        }
        Ok(r.value)
    };
    let mut out = Vec::with_capacity(levels);
    for l in 0..levels {
        let n = n0 << l;
        let mut values = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = t * k as f64 / n as f64;
            values.push((s, gamma(s)?));
        }
        let max_jump = values.windows(2).fold(0.0f64, |m, w| m.max((w[1].1 - w[0].1).abs()));
        out.push(ContinuityLevel {
            spacing: t / n as f64,
            max_jump,
            values,
        });
    }
    let threshold = 0.6;
    let ratios: Vec<f64> = out
        .windows(2)
        .map(|w| {
            if w[1].max_jump == 0.0 {
                0.0
            } else {
                w[1].max_jump / w[0].max_jump
            }
        })
        .collect();
    let pass = ratios.iter().all(|&r| r <= threshold);
    Ok(ContinuityTable {
        levels: out,
        ratios,
        threshold,
        pass,
    })
}

/// `∫_𝔻 (1-|z|²)^{p-1} ∏|z-η_j|^{-1} dm(z)`.
pub fn inverse_distance_integral(points: &[Complex], p: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain("integrability bound needs p > 0"));
    }
    let w = RationalWeightSpec::new(points.to_vec(), vec![-1.0; points.len()])?;
    let c = cfg.clone().with_grading(points.iter().copied());
    try_integrate_disc(|pt| Ok(pt.one_minus_abs2().powf(p - 1.0) * w.modulus_at(pt, 1.0)?), &c)
}

/// [`inverse_distance_integral`] at `cfg.rel_tol` and at `halvings` successive halvings; the
/// report's `lhs` is the largest relative change between neighbours, checked
/// against `stability`.
pub fn integrability_check(
    points: &[Complex],
    p: f64,
    halvings: usize,
    stability: f64,
    cfg: &QuadratureConfig,
) -> Result<(VerificationReport, Vec<QuadratureResult>)> {
    let mut runs = Vec::with_capacity(halvings + 1);
    let mut c = cfg.clone();
    for _ in 0..=halvings {
        runs.push(inverse_distance_integral(points, p, &c)?);
        c.rel_tol *= 0.5;
    }
    let change = runs
        .windows(2)
        .fold(0.0f64, |m, w| m.max((w[1].value - w[0].value).abs() / w[1].value.abs()));
    let conv = runs.iter().all(|r| r.converged && r.value.is_finite());
    Ok((
        VerificationReport {
            check: CheckId::Integrability,
            statement: "int (1-|z|^2)^(p-1) prod |z-eta_j|^-1 is finite and refinement-stable".into(),
            lhs: change,
            rhs: stability,
            ratio: ratio(change, stability),
            constant_used: stability,
            pass: conv && change < stability,
            converged: conv,
            diagnostics: runs
                .iter()
                .map(|r| format!("{} +- {:e}", r.value, r.error_estimate))
                .collect(),
        },
        runs,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSumDetail {
    /// `(r, S(r))`
    pub partial: Vec<(f64, f64)>,
    /// `(s, Σ_{Z(f_s)} (1-|a|²)^{p+1} φ(sa), ∫(1-|z|²)^{p-1} φ(sz) log⁺|f(sz)|)`
    pub dilated: Vec<(f64, f64, f64)>,
    /// Smallest constant for which the dilated bound holds on the grid and in
    /// the limit `s → 1`.
    pub hypothesis_constant: f64,
    pub norm: NormEstimate,
    pub dilation_identity: bool,
}

/// Radius of the zero search used to compare `Z(f_s)` with `Z(f) ∩ D(0,s)`.
const DILATION_RADIUS: f64 = 0.98;

/// The limit argument over dilations: `S(r)` is nondecreasing, the zeros of
/// `f_s` are `Z(f) ∩ D(0,s)` scaled by `1/s`, and the full sum obeys the
/// supremum bound with the constant that makes the dilated bound hold.
pub fn limit_sum_check<W>(
    f: &AnalyticFunctionSpec,
    weight: W,
    hints_on_circle: &[Complex],
    p: f64,
    delta: f64,
    s_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(VerificationReport, LimitSumDetail)>
where
    W: Fn(Complex) -> Result<f64>,
{
    check_grid(s_grid)?;
    let zcfg = ZeroSearchConfig::default();
    let (zeros, complete) = zero_list(f, 0.99, &zcfg)?;
    let mut radii: Vec<f64> = zeros.iter().map(|a| a.point.norm()).collect();
    radii.extend(s_grid.iter().copied());
    radii.push(1.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    // include each zero radius itself and a point just past it
    let radii: Vec<f64> = radii
        .iter()
        .flat_map(|&r| [r, f64::from_bits(r.to_bits() + 1)])
        .collect();
    let s_vals = partial_sums(&zeros, &weight, 1.0 + p, RadialBase::OneMinusAbs2, &radii)?;
    let monotone = s_vals.windows(2).all(|w| w[1] >= w[0]);
    let total = blaschke_sum(&zeros, &weight, p)?;
    let final_matches = (s_vals[s_vals.len() - 1] - total).abs() <= 1e-12 * total.abs().max(1e-300);

    let norm = norm_p_positive(f, &weight, hints_on_circle, p, delta, s_grid, cfg)?;
    let mut dilated = Vec::with_capacity(s_grid.len());
    let mut identity = true;
    let mut notes = Vec::new();
    for (k, &s) in s_grid.iter().enumerate() {
        let fs = f.dilate(s)?;
        let zs_fs = zeros_in_disc(&fs, 0.999_999, &zcfg)?;
        let h = blaschke_sum(&zs_fs.zeros, |b| weight(b * s), p)?;
        dilated.push((s, h, norm.per_s[k].1));
        // search f_s afresh, without its stored zero list
        let found = search_zeros(
            &fs.clone().without_known_zeros(),
            &Region::disc(Complex::new(0.0, 0.0), DILATION_RADIUS),
            &zcfg,
        );
        let expected: Vec<Complex> = zeros
            .iter()
            .flat_map(|a| core::iter::repeat_n(a.point / s, a.multiplicity as usize))
            .filter(|b| b.norm() < DILATION_RADIUS)
            .collect();
        match found {
            Ok(set) => {
                let got: Vec<Complex> = set
                    .zeros
                    .iter()
                    .flat_map(|a| core::iter::repeat_n(a.point, a.multiplicity as usize))
                    .collect();
                if !same_points(&got, &expected, 1e-8) {
                    identity = false;
                    notes.push(format!("s = {s}: zeros of f_s differ from Z(f)/s"));
                }
            }
            Err(e) => {
                identity = false;
                notes.push(format!("s = {s}: zero search failed: {e}"));
            }
        }
    }
    let mut c_hyp = 0.0f64;
    for &(_, h, i) in &dilated {
        c_hyp = c_hyp.max(ratio(h, i));
    }
    // the hypothesis runs over all of [1-δ, 1); H(s) → S(1) as s → 1, with
    // I(s) taken at the last grid point
    if let Some(&(_, _, i_last)) = dilated.last() {
        c_hyp = c_hyp.max(ratio(total, i_last));
    }
    let h_rising = dilated.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12))
        && dilated.iter().all(|d| d.1 <= total * (1.0 + 1e-12));
    if !h_rising {
        notes.push("dilated sums do not increase to S(1)".into());
    }
    let rhs = c_hyp * norm.value;
    let budget = c_hyp * norm.error_estimate;
    let bounded = s_vals.iter().all(|&v| v <= rhs * (1.0 + 1e-12) + budget);
    if !monotone {
        notes.push("S(r) decreases somewhere".into());
    }
    if !final_matches {
        notes.push("S(1) differs from the full zero sum".into());
    }
    if !complete {
        notes.push("zero search left unresolved cells".into());
    }
    let pass = monotone && h_rising && final_matches && identity && bounded && norm.converged;
    let detail = LimitSumDetail {
        partial: radii.iter().copied().zip(s_vals.iter().copied()).collect(),
        dilated,
        hypothesis_constant: c_hyp,
        norm,
        dilation_identity: identity,
    };
    Ok((
        VerificationReport {
            check: CheckId::LimitSum,
            statement: "S(r) nondecreasing and sum over Z(f) <= C sup_s int (1-|z|^2)^(p-1) phi(sz) log+|f(sz)|".into(),
            lhs: total,
            rhs,
            ratio: ratio(total, rhs),
            constant_used: c_hyp,
            pass,
            converged: detail.norm.converged,
            diagnostics: notes,
        },
        detail,
    ))
}

/// Greedy matching of two point multisets within `tol`.
fn same_points(a: &[Complex], b: &[Complex], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|&x| {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, u), (_, v)| (*u - x).norm().total_cmp(&(*v - x).norm()));
        match best {
            Some((j, &y)) if (y - x).norm() <= tol => {
                used[j] = true;
                true
            }
            _ => false,
        }
    })
}

/// Radial cut-off for the undilated integral, where `|f|` stops being
/// evaluable as `|z|` rounds to 1.
const UNDILATED_GAP: f64 = 1e-13;

/// `sup_s ∫(1-|z|²)^{p-1}φ(sz)log⁺|f(sz)| ≤ (1-δ)^{-2} ∫(1-|z|²)^{p-1}φ(z)log⁺|f(z)|`
/// for `p ≥ 1`; the constant is the Jacobian of `u = sz` at `s = 1-δ`.
pub fn remark_change_of_variables<W>(
    f: &AnalyticFunctionSpec,
    weight: W,
    hints_on_circle: &[Complex],
    p: f64,
    delta: f64,
    s_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<VerificationReport>
where
    W: Fn(Complex) -> Result<f64>,
{
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain("the change of variables bound needs p >= 1"));
    }
    let lhs = norm_p_positive(f, &weight, hints_on_circle, p, delta, s_grid, cfg)?;
    let mut c = cfg.clone().with_grading(hints_on_circle.iter().copied());
    c.min_gap = c.min_gap.max(UNDILATED_GAP);
    let rhs = try_integrate_disc(
        |pt| {
            let lp = log_plus_at(f, pt.z)?;
            if lp == 0.0 {
                return Ok(0.0);
            }
            Ok(pt.one_minus_abs2().powf(p - 1.0) * weight(pt.z)? * lp)
        },
        &c,
    )?;
    let k = (1.0 - delta).powi(-2);
    let conv = lhs.converged && rhs.converged;
    let budget = lhs.error_estimate + k * rhs.error_estimate;
    let bound = k * rhs.value;
    Ok(VerificationReport {
        check: CheckId::ChangeOfVariables,
        statement: "sup_s int (1-|z|^2)^(p-1) phi(sz) log+|f(sz)| <= (1-delta)^-2 int (1-|z|^2)^(p-1) phi log+|f|"
            .into(),
        lhs: lhs.value,
        rhs: bound,
        ratio: ratio(lhs.value, bound),
        constant_used: k,
        pass: conv && lhs.value <= bound + budget,
        converged: conv,
        diagnostics: vec![format!(
            "undilated integral {} cut at 1-|z| = {:e}",
            rhs.value, c.min_gap
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{GrowthBound, Zero};
    use crate::math::c;
    use proptest::prelude::*;

    fn b05() -> AnalyticFunctionSpec {
        AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.5, 0.0))], true).unwrap()
    }

    fn growth() -> AnalyticFunctionSpec {
        let r = RationalWeightSpec::from_angles(&[0.0], alloc::vec![1.0]).unwrap();
        AnalyticFunctionSpec::growth(&GrowthBound::new(1.0, 0.0, r).unwrap(), c(-1.0, 0.0)).unwrap()
    }

    #[test]
    fn substitution_constant_examples() {
        let one = RationalWeightSpec::from_angles(&[0.0], alloc::vec![1.0]).unwrap();
        let k = substitution_constants(&one, 1.0, 0.9).unwrap();
        assert_eq!((k.alpha, k.beta), (0.0, 2.0));
        assert!((k.c_delta_u - 80.0).abs() < 1e-12);
        let neg = RationalWeightSpec::from_angles(&[0.0], alloc::vec![-1.0]).unwrap();
        let k = substitution_constants(&neg, 1.0, 0.5).unwrap();
        assert_eq!((k.alpha, k.beta), (-2.0, -2.0));
        assert!((k.c_delta_u - 0.25).abs() < 1e-15);
        for u in [0.1, 0.5, 0.99] {
            let k = substitution_constants(&RationalWeightSpec::empty(), 1.0, u).unwrap();
            assert_eq!((k.alpha, k.beta, k.abs_q), (0.0, 0.0, 0.0));
            assert!((k.c_delta_u - 2.0 * (1.0 - u)).abs() < 1e-15);
        }
        assert!(substitution_constants(&one, 0.0, 0.5).is_err());
        assert!(substitution_constants(&one, 1.0, 1.0).is_err());
    }

    #[test]
    fn substitution_trivial_cases() {
        let cfg = QuadratureConfig::default();
        let r = RationalWeightSpec::empty();
        let rep = substitution_check(&AnalyticFunctionSpec::one(), &r, 1.0, 1.0, 0.9, 0.9, &cfg).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
        assert!(rep.pass);
        let g = growth().normalized().unwrap();
        let w = RationalWeightSpec::from_angles(&[0.0], alloc::vec![1.0]).unwrap();
        let e = AnalyticFunctionSpec::constant(c(core::f64::consts::E, 0.0)).unwrap();
        assert!(substitution_check_torus(&e, &w, 1.0, 0.9, 0.9, 4, &cfg).is_err());
        let rep = substitution_check_torus(&AnalyticFunctionSpec::one(), &w, 1.0, 0.9, 0.9, 4, &cfg).unwrap();
        assert!(rep.pass && rep.lhs == 0.0);
        let rep = substitution_check(&g, &w, 1.0, 1.0, 0.9, 0.9, &cfg).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn substitution_holds_for_a_blaschke_factor() {
        let cfg = QuadratureConfig::default();
        let rep = substitution_check(&b05(), &RationalWeightSpec::empty(), 1.0, 1.0, 0.9, 0.9, &cfg).unwrap();
        assert!(rep.pass && rep.lhs > 0.0, "{rep:?}");
        let rep = substitution_check_torus(&b05(), &RationalWeightSpec::empty(), 1.0, 0.9, 0.9, 6, &cfg).unwrap();
        assert!(rep.pass && rep.lhs > 0.0, "{rep:?}");
    }

    #[test]
    fn halfdisc_examples() {
        for th in [0.0, 1.0, 4.0] {
            let eta = unit(th);
            assert_eq!(halfdisc_sign(eta * 0.5, eta), (true, true));
            assert_eq!(halfdisc_sign(-eta * 0.5, eta), (false, false));
        }
    }

    proptest! {
        #[test]
        fn halfdisc_equivalence(r in 0.0f64..1.0, t in 0.0f64..6.3, th in 0.0f64..6.3) {
            let z = unit(t) * r;
            let eta = unit(th);
            prop_assume!(!in_halfdisc_band(z, eta));
            let (a, b) = halfdisc_sign(z, eta);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn substitution_constant_monotone_in_u(
            qs in proptest::collection::vec(-2.0f64..2.0, 0..4),
            d in 0.1f64..3.0,
            u1 in 0.05f64..0.9,
        ) {
            let angles: Vec<f64> = (0..qs.len()).map(|k| k as f64 * 1.3).collect();
            let w = RationalWeightSpec::from_angles(&angles, qs).unwrap();
            let u2 = u1 + 0.05;
            let a = substitution_constants(&w, d, u1).unwrap();
            let b = substitution_constants(&w, d, u2).unwrap();
            prop_assert!((a.c_delta_u - a.closed_form()).abs() <= 1e-12 * a.c_delta_u);
            let e = d - a.alpha - a.beta;
            if e < 0.0 {
                prop_assert!(b.c_delta_u > a.c_delta_u);
            } else if e > 0.0 {
                prop_assert!(b.c_delta_u < a.c_delta_u);
            }
        }
    }

    #[test]
    fn continuity_examples() {
        let cfg = QuadratureConfig::default();
        let e = AnalyticFunctionSpec::constant(c(core::f64::consts::E, 0.0))
            .unwrap()
            .normalized()
            .unwrap();
        let t = continuity_probe(&e, |_| Ok(1.0), &[], 0.8, 4, 3, &cfg).unwrap();
        assert!(t.pass && t.levels.iter().all(|l| l.max_jump == 0.0));
        let t = continuity_probe(&b05(), |_| Ok(1.0), &[], 0.8, 8, 4, &cfg).unwrap();
        assert!(t.pass, "{:?}", t.ratios);
        assert!(t.levels[3].values.iter().all(|&(_, v)| v.is_finite() && v >= 0.0));
    }

    #[test]
    fn inverse_distance_examples() {
        let cfg = QuadratureConfig::default();
        for p in [0.25, 0.5, 1.0, 2.0] {
            let r = inverse_distance_integral(&[], p, &cfg).unwrap();
            assert!((r.value - PI / p).abs() <= 1e-6 * PI / p);
        }
        let (rep, runs) = integrability_check(&[c(1.0, 0.0)], 1.0, 2, 1e-5, &cfg).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(runs[0].value > PI);
        let (rep, _) = integrability_check(&[c(1.0, 0.0), c(-1.0, 0.0)], 0.5, 2, 1e-5, &cfg).unwrap();
        assert!(rep.pass, "{rep:?}");
        let one = inverse_distance_integral(&[c(1.0, 0.0)], 0.5, &cfg).unwrap().value;
        let two = inverse_distance_integral(&[c(1.0, 0.0)], 1.0, &cfg).unwrap().value;
        assert!(two < one);
    }

    #[test]
    fn limit_sum_examples() {
        let cfg = QuadratureConfig::default();
        let grid = crate::quad::geometric_s_grid(0.5, 5).unwrap();
        let (rep, d) = limit_sum_check(&AnalyticFunctionSpec::one(), |_| Ok(1.0), &[], 1.0, 0.5, &grid, &cfg).unwrap();
        assert!(rep.pass && rep.lhs == 0.0 && d.partial.iter().all(|x| x.1 == 0.0));
        let f = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.3, 0.0)), Zero::simple(c(0.0, 0.6))], true).unwrap();
        let (rep, d) = limit_sum_check(&f, |_| Ok(1.0), &[], 1.0, 0.5, &grid, &cfg).unwrap();
        assert!(d.dilation_identity && d.partial.windows(2).all(|w| w[1].1 >= w[0].1));
        let step = |r: f64| d.partial.iter().find(|x| x.0 == r).unwrap().1;
        assert_eq!(step(0.3), 0.0);
        assert!(step(f64::from_bits(0.3f64.to_bits() + 1)) > 0.0);
        assert!((rep.lhs - (0.91f64.powi(2) + 0.64f64.powi(2))).abs() < 1e-14);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn change_of_variables_examples() {
        let cfg = QuadratureConfig::default();
        let grid = crate::quad::geometric_s_grid(0.5, 4).unwrap();
        let e = AnalyticFunctionSpec::constant(c(core::f64::consts::E, 0.0)).unwrap();
        let rep = remark_change_of_variables(&e, |_| Ok(1.0), &[], 1.0, 0.5, &grid, &cfg).unwrap();
        assert!((rep.lhs - PI).abs() < 1e-8 && (rep.rhs - 4.0 * PI).abs() < 1e-7 && rep.pass);
        let rep =
            remark_change_of_variables(&AnalyticFunctionSpec::one(), |_| Ok(1.0), &[], 1.0, 0.5, &grid, &cfg).unwrap();
        assert!(rep.pass && rep.lhs == 0.0);
        let rep = remark_change_of_variables(
            &growth().normalized().unwrap(),
            |_| Ok(1.0),
            &[c(1.0, 0.0)],
            1.0,
            0.5,
            &grid,
            &cfg,
        )
        .unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(remark_change_of_variables(&e, |_| Ok(1.0), &[], 0.5, 0.5, &grid, &cfg).is_err());
    }
}
