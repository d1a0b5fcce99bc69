//! Weighted zero sums, generalized Nevanlinna norms and the per-mode
//! Blaschke-type checks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::funcs::{AnalyticFunctionSpec, GrowthBound, Zero};
use crate::math::{pos, unit, Complex, Sum};
use crate::quad::{check_grid, geometric_s_grid, try_integrate_circle, try_integrate_disc, QuadratureConfig};
use crate::weights::{ClosedArcSet, MixedWeightSpec, RationalWeightSpec, TildeMode};
use crate::zeros::{zeros_in_disc, ZeroSearchConfig};

const NORMALIZATION_TOL: f64 = 1e-12;

/// Radial factor of a zero sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialBase {
    /// `1 - |a|²`
    OneMinusAbs2,
    /// `1 - |a|`
    OneMinusAbs,
}

impl RadialBase {
    fn at(self, a: Complex) -> f64 {
        let r = a.norm();
        match self {
            RadialBase::OneMinusAbs2 => (1.0 - r) * (1.0 + r),
            RadialBase::OneMinusAbs => 1.0 - r,
        }
    }
}

/// `Σ base(a)^exponent w(a) m_a`.
pub fn weighted_zero_sum<W>(zeros: &[Zero], mut weight: W, exponent: f64, base: RadialBase) -> Result<f64>
where
    W: FnMut(Complex) -> Result<f64>,
{
    let mut acc = Sum::new();
    for a in zeros {
        acc.add(f64::from(a.multiplicity) * base.at(a.point).powf(exponent) * weight(a.point)?);
    }
    Ok(acc.value())
}

/// `Σ (1-|a|²)^{p+1} w(a) m_a`.
pub fn blaschke_sum<W>(zeros: &[Zero], weight: W, p: f64) -> Result<f64>
where
    W: FnMut(Complex) -> Result<f64>,
{
    weighted_zero_sum(zeros, weight, 1.0 + p, RadialBase::OneMinusAbs2)
}

/// `S(r)` over `Z ∩ D(0, r)` for each radius, in the order given.
pub fn partial_sums<W>(
    zeros: &[Zero],
    mut weight: W,
    exponent: f64,
    base: RadialBase,
    radii: &[f64],
) -> Result<Vec<f64>>
where
    W: FnMut(Complex) -> Result<f64>,
{
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(zeros.len());
    for a in zeros {
        let t = f64::from(a.multiplicity) * base.at(a.point).powf(exponent) * weight(a.point)?;
        terms.push((a.point.norm(), t));
    }
    terms.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(radii
        .iter()
        .map(|&r| {
            let mut acc = Sum::new();
            for &(_, t) in terms.iter().take_while(|(m, _)| *m < r) {
                acc.add(t);
            }
            acc.value()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// `(s, integral)`; for `p = 0` the integral is the sum of both parts.
    pub per_s: Vec<(f64, f64)>,
    /// `(sup of the torus part, sup of the γ part)` for `p = 0`.
    pub parts: Option<(f64, f64)>,
    /// `(torus, γ)` at each `s`, for `p = 0`.
    pub parts_per_s: Vec<(f64, f64)>,
    pub error_estimate: f64,
    pub converged: bool,
}

impl NormEstimate {
    fn zero(grid: &[f64], split: bool) -> Self {
        Self {
            value: 0.0,
            per_s: grid.iter().map(|&s| (s, 0.0)).collect(),
            parts: split.then_some((0.0, 0.0)),
            parts_per_s: if split {
                grid.iter().map(|_| (0.0, 0.0)).collect()
            } else {
                Vec::new()
            },
            error_estimate: 0.0,
            converged: true,
        }
    }
}

fn check_s_grid(delta: f64, grid: &[f64]) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("class parameter δ must lie in (0, 1)"));
    }
    check_grid(grid)?;
    if grid[0] < 1.0 - delta - 1e-15 {
        return Err(Error::domain("s grid must lie in [1-δ, 1)"));
    }
    Ok(())
}

fn bounded_by_one(f: &AnalyticFunctionSpec) -> bool {
    f.log_sup().is_some_and(|l| l <= 0.0)
}

/// `sup_s ∫_𝔻 (1-|z|²)^{p-1} φ(sz) log⁺|f(sz)| dm(z)`, `φ` evaluated at `w = sz`.
/// A non-converged integral leaves `converged` unset and the value stands as a
/// lower bound.
pub fn norm_p_positive<W>(
    f: &AnalyticFunctionSpec,
    weight: W,
    hints: &[Complex],
    p: f64,
    delta: f64,
    s_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<NormEstimate>
where
    W: Fn(Complex) -> Result<f64>,
{
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain("norm_p_positive needs p > 0"));
    }
    check_s_grid(delta, s_grid)?;
    if bounded_by_one(f) {
        return Ok(NormEstimate::zero(s_grid, false));
    }
    let c = cfg.clone().with_grading(hints.iter().copied());
    let mut out = NormEstimate::zero(s_grid, false);
    out.value = f64::NEG_INFINITY;
    for (k, &s) in s_grid.iter().enumerate() {
        let r = try_integrate_disc(
            |pt| {
                let lp = log_plus_at(f, pt.z * s)?;
                if lp == 0.0 {
                    return Ok(0.0);
                }
                Ok(pt.one_minus_abs2().powf(p - 1.0) * weight(pt.z * s)? * lp)
            },
            &c,
        )?;
        out.per_s[k].1 = r.value;
        out.converged &= r.converged;
        out.error_estimate = out.error_estimate.max(r.error_estimate);
        out.value = out.value.max(r.value);
    }
    Ok(out)
}

/// `log⁺|f(w)|`, with NaN reported as an error.
pub(crate) fn log_plus_at(f: &AnalyticFunctionSpec, w: Complex) -> Result<f64> {
    let l = f.log_abs(w)?;
    if l.is_nan() {
        return Err(Error::NonFiniteIntegrand { re: w.re, im: w.im });
    }
    Ok(l.max(0.0))
}

/// `sup_s ∫_𝕋 φ(se^{iθ}) log⁺|f(se^{iθ})| dθ + sup_s ∫_𝔻 ψ(sz) log⁺|f(sz)| dm(z)`,
/// the two suprema taken separately.
pub fn norm_p_zero_with<T, D>(
    f: &AnalyticFunctionSpec,
    torus_weight: T,
    disc_weight: D,
    hints: &[Complex],
    delta: f64,
    s_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<NormEstimate>
where
    T: Fn(Complex) -> Result<f64>,
    D: Fn(Complex) -> Result<f64>,
{
    check_s_grid(delta, s_grid)?;
    if bounded_by_one(f) {
        return Ok(NormEstimate::zero(s_grid, true));
    }
    let c = cfg.clone().with_grading(hints.iter().copied());
    let mut out = NormEstimate::zero(s_grid, true);
    let (mut err_t, mut err_g) = (0.0f64, 0.0f64);
    let (mut sup_t, mut sup_g) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (k, &s) in s_grid.iter().enumerate() {
        let t = try_integrate_circle(
            |theta| {
                let w = unit(theta) * s;
                let lp = log_plus_at(f, w)?;
                if lp == 0.0 {
                    return Ok(0.0);
                }
                Ok(torus_weight(w)? * lp)
            },
            s,
            &c,
        )?;
        let g = try_integrate_disc(
            |pt| {
                let lp = log_plus_at(f, pt.z * s)?;
                if lp == 0.0 {
                    return Ok(0.0);
                }
                Ok(disc_weight(pt.z * s)? * lp)
            },
            &c,
        )?;
        out.parts_per_s[k] = (t.value, g.value);
        out.per_s[k].1 = t.value + g.value;
        out.converged &= t.converged && g.converged;
        err_t = err_t.max(t.error_estimate);
        err_g = err_g.max(g.error_estimate);
        sup_t = sup_t.max(t.value);
        sup_g = sup_g.max(g.value);
    }
    out.parts = Some((sup_t, sup_g));
    out.value = sup_t + sup_g;
    out.error_estimate = err_t + err_g;
    Ok(out)
}

/// The `p = 0` norm for the weight `|R|^power`: torus part with `|R|^power`
/// and disc part with `γ |R|^power`, `γ(z) = Σ|q_j| |z-η_j|^{-1}`.
pub fn norm_p_zero(
    f: &AnalyticFunctionSpec,
    weight: &RationalWeightSpec,
    power: f64,
    delta: f64,
    s_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    norm_p_zero_with(
        f,
        |w| weight.modulus(w, power),
        |w| Ok(weight.gamma(w)? * weight.modulus(w, power)?),
        weight.points(),
        delta,
        s_grid,
        cfg,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremMode {
    /// `Σ(1-|a|²)^{1+p}|R(a)|² ≤ c‖f‖` for `p > 0`, `q_j > -p/4`.
    RationalPPositive,
    /// `Σ(1-|a|²)^{1+p}|R̃(a)| ≤ c‖f‖_{|R|,p}` for `p > 0`.
    RationalModulusPPositive,
    /// `Σ(1-|a|²)|R(a)|² ≤ c‖f‖_{|R|²,0}` for `q_j ≥ 0`.
    RationalPZero,
    /// `Σ(1-|a|²)|R̃(a)| ≤ c‖f‖_{|R|,0}` with `q̃ = (q)₊`.
    RationalModulusPZero,
    /// `Σ(1-|a|)|R̃_ε(a)| ≤ c‖f‖_{|R_ε|,0}` under `log⁺|f| ≤ D/|R|`.
    GrowthPZero,
    /// `Σ(1-|a|)^{1+p+ε}|R̃₀(a)| ≤ c‖f‖_{|R₀|,p+ε}` under
    /// `log⁺|f| ≤ D/((1-|z|²)^p|R|)`.
    GrowthPPositive,
    /// `Σ(1-|a|²)^{1+p}|R(a)|² h(a)^q ≤ c‖f‖_{φ,p}` for `p > 0`.
    MixedPPositive,
    /// `Σ(1-|a|²)|R(a)|² h(a)^q ≤ c‖f‖_{φ,0}`.
    MixedPZero,
    /// `Σ(1-|a|²)^{…}|R̃(a)| d(a,E)^{(q-α(E)+ε)₊} ≤ cK` under
    /// `log⁺|f| ≤ K/((1-|z|²)^p|R| d(z,E)^q)`.
    MixedGrowth,
}

impl TheoremMode {
    pub const ALL: [TheoremMode; 9] = [
        TheoremMode::RationalPPositive,
        TheoremMode::RationalModulusPPositive,
        TheoremMode::RationalPZero,
        TheoremMode::RationalModulusPZero,
        TheoremMode::GrowthPZero,
        TheoremMode::GrowthPPositive,
        TheoremMode::MixedPPositive,
        TheoremMode::MixedPZero,
        TheoremMode::MixedGrowth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremMode::RationalPPositive => "rational_p_positive",
            TheoremMode::RationalModulusPPositive => "rational_modulus_p_positive",
            TheoremMode::RationalPZero => "rational_p_zero",
            TheoremMode::RationalModulusPZero => "rational_modulus_p_zero",
            TheoremMode::GrowthPZero => "growth_p_zero",
            TheoremMode::GrowthPPositive => "growth_p_positive",
            TheoremMode::MixedPPositive => "mixed_p_positive",
            TheoremMode::MixedPZero => "mixed_p_zero",
            TheoremMode::MixedGrowth => "mixed_growth",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    /// The inequality checked, in words.
    pub fn statement(self) -> &'static str {
        match self {
            TheoremMode::RationalPPositive => "sum (1-|a|^2)^(1+p) |R(a)|^2 <= c ||f||_{|R|^2,p}, p > 0, q_j > -p/4",
            TheoremMode::RationalModulusPPositive => {
                "sum (1-|a|^2)^(1+p) |R~(a)| <= c ||f||_{|R|,p}, q~_j = q_j if q_j > -p/2 else -p/2 + kappa"
            }
            TheoremMode::RationalPZero => "sum (1-|a|^2) |R(a)|^2 <= c ||f||_{|R|^2,0}, q_j >= 0",
            TheoremMode::RationalModulusPZero => "sum (1-|a|^2) |R~(a)| <= c ||f||_{|R|,0}, q~_j = (q_j)_+",
            TheoremMode::GrowthPZero => {
                "sum (1-|a|) |R~_eps(a)| <= c ||f||_{|R_eps|,0}, exponents (q_j-1+eps)_+, log+|f| <= D/|R|"
            }
            TheoremMode::GrowthPPositive => {
                "sum (1-|a|)^(1+p+eps) |R~_0(a)| <= c ||f||_{|R_0|,p+eps}, log+|f| <= D/((1-|z|^2)^p |R|)"
            }
            TheoremMode::MixedPPositive => "sum (1-|a|^2)^(1+p) |R(a)|^2 h(a)^q <= c ||f||_{phi,p}, q > 0",
            TheoremMode::MixedPZero => "sum (1-|a|^2) |R(a)|^2 h(a)^q <= c ||f||_{phi,0}, q > 0",
            TheoremMode::MixedGrowth => {
                "sum (1-|a|^2)^e |R~(a)| d(a,E)^((q-alpha(E)+eps)_+) <= c K, log+|f| <= K/((1-|z|^2)^p |R| d^q)"
            }
        }
    }
}

impl core::fmt::Display for TheoremMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// What a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    Theorem(TheoremMode),
    Substitution,
    SubstitutionTorus,
    HalfDisc,
    Continuity,
    Integrability,
    LimitSum,
    ChangeOfVariables,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::Theorem(m) => m.name(),
            CheckId::Substitution => "substitution",
            CheckId::SubstitutionTorus => "substitution_torus",
            CheckId::HalfDisc => "half_disc",
            CheckId::Continuity => "continuity",
            CheckId::Integrability => "integrability",
            CheckId::LimitSum => "limit_sum",
            CheckId::ChangeOfVariables => "change_of_variables",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check: CheckId,
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / norm` for theorem checks, `lhs / rhs` otherwise; 0 when both
    /// sides vanish.
    pub ratio: f64,
    pub constant_used: f64,
    pub pass: bool,
    pub converged: bool,
    pub diagnostics: Vec<String>,
}

pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

#[derive(Clone, Debug)]
pub struct TheoremScenario {
    pub f: AnalyticFunctionSpec,
    pub weight: RationalWeightSpec,
    pub closed_set: Option<ClosedArcSet>,
    /// Exponent of the distance weight `h^q` or `d(·,E)^q`.
    pub q_dist: f64,
    pub p: f64,
    pub mode: TheoremMode,
    pub epsilon: f64,
    pub kappa: f64,
    pub delta: f64,
    pub alpha_e: Option<f64>,
    pub s_grid_size: usize,
    pub constant_used: f64,
    /// Radius of the zero search when `f` carries no zero list.
    pub zero_radius: f64,
    pub zero_search: ZeroSearchConfig,
}

impl TheoremScenario {
    pub fn new(f: AnalyticFunctionSpec, weight: RationalWeightSpec, p: f64, mode: TheoremMode) -> Self {
        Self {
            f,
            weight,
            closed_set: None,
            q_dist: 0.0,
            p,
            mode,
            epsilon: 0.1,
            kappa: 0.01,
            delta: 0.5,
            alpha_e: None,
            s_grid_size: 6,
            constant_used: 1.0,
            zero_radius: 0.99,
            zero_search: ZeroSearchConfig::default(),
        }
    }

    pub fn with_closed_set(mut self, set: ClosedArcSet, q: f64) -> Self {
        self.closed_set = Some(set);
        self.q_dist = q;
        self
    }

    pub fn s_grid(&self) -> Result<Vec<f64>> {
        geometric_s_grid(self.delta, self.s_grid_size)
    }
}

/// Zeros of `f`: the stored list, else those found in `D(0, radius)`.
pub fn zero_list(f: &AnalyticFunctionSpec, radius: f64, cfg: &ZeroSearchConfig) -> Result<(Vec<Zero>, bool)> {
    if let Some(zs) = f.known_zeros() {
        return Ok((zs.to_vec(), true));
    }
    let set = zeros_in_disc(f, radius, cfg)?;
    let complete = set.unresolved.is_empty();
    Ok((set.zeros, complete))
}

pub fn check_normalization(f: &AnalyticFunctionSpec) -> Result<()> {
    let l0 = f.log_abs(Complex::new(0.0, 0.0))?;
    if !(l0.abs() <= NORMALIZATION_TOL) {
        return Err(Error::rejected(format!(
            "normalization |f(0)| = 1 violated (log|f(0)| = {l0:e})"
        )));
    }
    Ok(())
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::rejected(format!("hypothesis {what} violated")))
    }
}

/// Growth constant `D` for `log⁺|f| ≤ D/((1-|z|²)^p|R|)`, zero for `|f| ≤ 1`.
fn growth_constant(sc: &TheoremScenario) -> Result<f64> {
    if bounded_by_one(&sc.f) {
        return Ok(0.0);
    }
    let Some(GrowthBound { d, p, weight }) = sc.f.growth_bound() else {
        return Err(Error::rejected(
            "a growth bound log+|f| <= D/((1-|z|^2)^p |R|) is required",
        ));
    };
    if weight != &sc.weight {
        return Err(Error::rejected("the growth bound uses a different weight R"));
    }
    if *p > sc.p {
        return Err(Error::rejected(format!(
            "the growth bound has exponent {p}, larger than the scenario's p = {}",
            sc.p
        )));
    }
    Ok(*d)
}

fn mixed(sc: &TheoremScenario) -> Result<MixedWeightSpec> {
    let Some(set) = &sc.closed_set else {
        return Err(Error::rejected("a closed set E is required"));
    };
    MixedWeightSpec::new(sc.weight.clone(), set.clone(), sc.q_dist).map_err(|e| Error::rejected(format!("{e}")))
}

struct Plan {
    lhs: f64,
    partial: Vec<f64>,
    norm: f64,
    norm_detail: Option<NormEstimate>,
    converged: bool,
    notes: Vec<String>,
}

/// Runs one mode: hypotheses, zero sum, norm side and the `S(r)` checks.
pub fn verify_theorem(sc: &TheoremScenario, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let (report, _) = verify_theorem_detailed(sc, cfg)?;
    Ok(report)
}

/// As [`verify_theorem`], also returning the norm estimate when one was
/// computed.
pub fn verify_theorem_detailed(
    sc: &TheoremScenario,
    cfg: &QuadratureConfig,
) -> Result<(VerificationReport, Option<NormEstimate>)> {
    if !(sc.p >= 0.0 && sc.p.is_finite()) {
        return Err(Error::rejected("p must be finite and >= 0"));
    }
    if !(sc.constant_used >= 0.0) {
        return Err(Error::domain("constant_used must be >= 0"));
    }
    check_normalization(&sc.f)?;
    let plan = plan_mode(sc, cfg)?;
    let rhs = sc.constant_used * plan.norm;
    let mut notes = plan.notes;
    let monotone = plan.partial.windows(2).all(|w| w[1] >= w[0]);
    let bounded = plan.partial.iter().all(|&s| s <= rhs);
    if !monotone {
        notes.push("partial sums S(r) not monotone".into());
    }
    let pass = plan.converged && monotone && bounded && plan.lhs <= rhs;
    if !plan.converged {
        notes.push("norm quadrature did not converge; the value is a lower bound".into());
    }
    Ok((
        VerificationReport {
            check: CheckId::Theorem(sc.mode),
            statement: sc.mode.statement().into(),
            lhs: plan.lhs,
            rhs,
            ratio: ratio(plan.lhs, plan.norm),
            constant_used: sc.constant_used,
            pass,
            converged: plan.converged,
            diagnostics: notes,
        },
        plan.norm_detail,
    ))
}

fn plan_mode(sc: &TheoremScenario, cfg: &QuadratureConfig) -> Result<Plan> {
    let p = sc.p;
    let r = &sc.weight;
    let q = r.exponents();
    let need_p_positive = || require(p > 0.0, "p > 0");
    let need_p_zero = || require(p == 0.0, "p = 0");
    // hypotheses first so rejected scenarios never reach the quadrature
    match sc.mode {
        TheoremMode::RationalPPositive => {
            need_p_positive()?;
            require(q.iter().all(|&qj| qj > -p / 4.0), "qⱼ > −p/4")?;
        }
        TheoremMode::RationalModulusPPositive | TheoremMode::GrowthPPositive => need_p_positive()?,
        TheoremMode::RationalPZero => {
            need_p_zero()?;
            require(q.iter().all(|&qj| qj >= 0.0), "qⱼ ≥ 0")?;
        }
        TheoremMode::RationalModulusPZero | TheoremMode::GrowthPZero => need_p_zero()?,
        TheoremMode::MixedPPositive => {
            need_p_positive()?;
            require(q.iter().all(|&qj| qj > -p / 4.0), "qⱼ > −p/4")?;
            require(sc.q_dist > 0.0, "q > 0")?;
        }
        TheoremMode::MixedPZero => {
            need_p_zero()?;
            require(q.iter().all(|&qj| qj >= 0.0), "qⱼ ≥ 0")?;
            require(sc.q_dist > 0.0, "q > 0")?;
        }
        TheoremMode::MixedGrowth => {
            if sc.alpha_e.is_none() {
                return Err(Error::rejected("α(E) is required for the mixed growth mode"));
            }
            require(sc.q_dist >= 0.0, "q ≥ 0")?;
        }
    }
    if matches!(
        sc.mode,
        TheoremMode::GrowthPZero | TheoremMode::GrowthPPositive | TheoremMode::MixedGrowth
    ) && !(sc.epsilon > 0.0)
    {
        return Err(Error::rejected("ε must be positive"));
    }
    let mixed_w = match sc.mode {
        TheoremMode::MixedPPositive | TheoremMode::MixedPZero | TheoremMode::MixedGrowth => Some(mixed(sc)?),
        _ => None,
    };
    let growth_d = match sc.mode {
        TheoremMode::GrowthPZero | TheoremMode::GrowthPPositive | TheoremMode::MixedGrowth => {
            Some(growth_constant(sc)?)
        }
        _ => None,
    };

    let (zeros, complete) = zero_list(&sc.f, sc.zero_radius, &sc.zero_search)?;
    let mut notes = Vec::new();
    if sc.f.known_zeros().is_none() {
        notes.push(format!("zeros located in |z| < {}", sc.zero_radius));
    }
    if !complete {
        notes.push("zero search left unresolved cells".into());
    }
    let grid = sc.s_grid()?;
    let eps = sc.epsilon;
    let two = RadialBase::OneMinusAbs2;
    let radii = radius_grid(&zeros);

    macro_rules! sums {
        ($w:expr, $e:expr, $b:expr) => {{
            let lhs = weighted_zero_sum(&zeros, $w, $e, $b)?;
            let partial = partial_sums(&zeros, $w, $e, $b, &radii)?;
            (lhs, partial)
        }};
    }

    let (lhs, partial, est) = match sc.mode {
        TheoremMode::RationalPPositive => {
            let (l, ps) = sums!(|a| r.modulus(a, 2.0), 1.0 + p, two);
            let n = norm_p_positive(&sc.f, |w| r.modulus(w, 2.0), r.points(), p, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::RationalModulusPPositive => {
            let rt = r.tilde(p, TildeMode::PPositive, sc.kappa)?;
            notes.push(format!("q~ = {:?}", rt.exponents()));
            let (l, ps) = sums!(|a| rt.modulus(a, 1.0), 1.0 + p, two);
            let n = norm_p_positive(&sc.f, |w| r.modulus(w, 1.0), r.points(), p, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::RationalPZero => {
            let (l, ps) = sums!(|a| r.modulus(a, 2.0), 1.0, two);
            let n = norm_p_zero(&sc.f, r, 2.0, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::RationalModulusPZero => {
            let rt = r.tilde(0.0, TildeMode::PZero, sc.kappa)?;
            let (l, ps) = sums!(|a| rt.modulus(a, 1.0), 1.0, two);
            let n = norm_p_zero(&sc.f, r, 1.0, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::GrowthPZero => {
            let rt = r.epsilon_shift(eps, true)?;
            let re = r.epsilon_shift(eps, false)?;
            notes.push(format!("D = {}", growth_d.unwrap_or(0.0)));
            let (l, ps) = sums!(|a| rt.modulus(a, 1.0), 1.0, RadialBase::OneMinusAbs);
            let n = norm_p_zero(&sc.f, &re, 1.0, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::GrowthPPositive => {
            let rt = r.tilde(p, TildeMode::LinftyPPositive, sc.kappa)?;
            let r0 = r.with_exponents(q.iter().map(|&qj| qj - 1.0).collect())?;
            notes.push(format!("D = {}", growth_d.unwrap_or(0.0)));
            let (l, ps) = sums!(|a| rt.modulus(a, 1.0), 1.0 + p + eps, RadialBase::OneMinusAbs);
            let n = norm_p_positive(&sc.f, |w| r0.modulus(w, 1.0), r.points(), p + eps, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::MixedPPositive => {
            let m = mixed_w.as_ref().expect("checked");
            let hints = mixed_hints(m);
            let (l, ps) = sums!(|a| m.eval(a), 1.0 + p, two);
            let n = norm_p_positive(&sc.f, |w| m.eval(w), &hints, p, sc.delta, &grid, cfg)?;
            (l, ps, Some(n))
        }
        TheoremMode::MixedPZero => {
            let m = mixed_w.as_ref().expect("checked");
            let hints = mixed_hints(m);
            let (l, ps) = sums!(|a| m.eval(a), 1.0, two);
            let qd = m.q_dist();
            let n = norm_p_zero_with(
                &sc.f,
                |w| m.eval(w),
                |w| Ok(m.eval(w)? * (m.rational().gamma(w)? + qd / m.closed_set().h(w))),
                &hints,
                sc.delta,
                &grid,
                cfg,
            )?;
            (l, ps, Some(n))
        }
        TheoremMode::MixedGrowth => {
            let m = mixed_w.as_ref().expect("checked");
            let alpha = sc.alpha_e.expect("checked");
            let e_dist = pos(sc.q_dist - alpha + eps);
            let set = m.closed_set();
            let k = growth_d.unwrap_or(0.0) * 2f64.powf(sc.q_dist);
            notes.push(format!("K = {k}"));
            let (l, ps) = if p > 0.0 {
                let rt = r.tilde(p, TildeMode::LinftyPPositive, sc.kappa)?;
                sums!(
                    |a| Ok(rt.modulus(a, 1.0)? * set.distance(a).powf(e_dist)),
                    1.0 + p + eps,
                    two
                )
            } else {
                let rt = r.epsilon_shift(eps, true)?;
                sums!(|a| Ok(rt.modulus(a, 1.0)? * set.distance(a).powf(e_dist)), 1.0, two)
            };
            (l, ps, None)
        }
    };
    let (norm, converged) = match &est {
        Some(n) => (n.value, n.converged),
        None => (growth_d.unwrap_or(0.0) * 2f64.powf(sc.q_dist), true),
    };
    Ok(Plan {
        lhs,
        partial,
        norm,
        norm_detail: est,
        converged,
        notes,
    })
}

fn mixed_hints(m: &MixedWeightSpec) -> Vec<Complex> {
    let mut h: Vec<Complex> = m.rational().points().to_vec();
    h.extend(m.closed_set().endpoints().into_iter().map(unit));
    h
}

/// Radii just past each zero modulus, plus 1.
fn radius_grid(zeros: &[Zero]) -> Vec<f64> {
    let mut r: Vec<f64> = zeros.iter().map(|a| next_up(a.point.norm())).collect();
    r.push(1.0);
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// How this family of theorems compares with the earlier `L^∞` result of
/// threshold `-p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    OursBetter,
    BgkBetter,
    Identical,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::OursBetter => "ours_better",
            Regime::BgkBetter => "bgk_better",
            Regime::Identical => "identical",
        }
    }
}

/// `p ≤ 0` counts as the `p = 0` case.
pub fn threshold_comparison(p: f64, q: f64) -> Regime {
    if !(p > 0.0) {
        Regime::Identical
    } else if q > -p / 2.0 {
        Regime::OursBetter
    } else {
        Regime::BgkBetter
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    Untilded,
    Tilded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    /// `(parameter, S)` for each family member.
    pub sums: Vec<(usize, f64)>,
    pub exponents: Vec<f64>,
}

impl ProbeResult {
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.sums
            .iter()
            .map(|&(_, s)| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }
}

/// `Σ(1-|a|²)^{1+p}|R(a)|²` over the zeros of each family member; the tilded
/// mode replaces `q_j ≤ -p/2` by `-p/2 + κ`. Every member must carry its
/// zero list.
pub fn divergence_probe<G>(
    mut family: G,
    params: &[usize],
    weight: &RationalWeightSpec,
    p: f64,
    mode: ProbeMode,
    kappa: f64,
) -> Result<ProbeResult>
where
    G: FnMut(usize) -> Result<AnalyticFunctionSpec>,
{
    let w = match mode {
        ProbeMode::Untilded => weight.clone(),
        ProbeMode::Tilded => weight.tilde(p, TildeMode::PPositive, kappa)?,
    };
    let mut sums = Vec::with_capacity(params.len());
    for &k in params {
        let f = family(k)?;
        let Some(zs) = f.known_zeros() else {
            return Err(Error::domain("divergence probe needs functions with known zeros"));
        };
        sums.push((k, blaschke_sum(zs, |a| w.modulus(a, 2.0), p)?));
    }
    Ok(ProbeResult {
        sums,
        exponents: w.exponents().to_vec(),
    })
}

/// `a_k = (1 - 2^{-k}) η` for `k = 1..=count`.
pub fn geometric_zeros(eta: Complex, count: usize) -> Vec<Zero> {
    (1..=count)
        .map(|k| Zero::simple(eta * (1.0 - 0.5f64.powi(k as i32))))
        .collect()
}
