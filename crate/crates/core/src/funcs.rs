//! Holomorphic test functions on the unit disc.
//!
//! Blaschke factors use the convention `b_a(z) = (a - z)/(1 - ā z)` with no
//! unimodular phase; only moduli matter downstream.

use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{pos, Complex};
use crate::weights::RationalWeightSpec;

pub type Evaluator = Arc<dyn Fn(Complex) -> Complex + Send + Sync>;
pub type LogModulus = Arc<dyn Fn(Complex) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    BlaschkeProduct,
    GrowthExponential,
    Product,
    Constant,
    User,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub point: Complex,
    pub multiplicity: u32,
}

impl Zero {
    pub fn simple(point: Complex) -> Self {
        Self { point, multiplicity: 1 }
    }
}

/// `log⁺|f(z)| ≤ d / ((1-|z|²)^p |R(z)|)` on the disc.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthBound {
    pub d: f64,
    pub p: f64,
    pub weight: RationalWeightSpec,
}

impl GrowthBound {
    pub fn new(d: f64, p: f64, weight: RationalWeightSpec) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) || !(p >= 0.0 && p.is_finite()) {
            return Err(Error::domain("growth bound needs D > 0 and p >= 0"));
        }
        Ok(Self { d, p, weight })
    }

    /// Sum of the weight exponents, all positive for the growth family.
    fn q_total(&self) -> f64 {
        self.weight.exponents().iter().map(|&q| pos(q)).sum()
    }
}

#[derive(Clone)]
pub struct AnalyticFunctionSpec {
    value: Evaluator,
    derivative: Option<Evaluator>,
    log_derivative: Option<Evaluator>,
    log_modulus: LogModulus,
    known_zeros: Option<Vec<Zero>>,
    family: FamilyTag,
    normalization: f64,
    growth: Option<GrowthBound>,
    log_sup: Option<f64>,
}

impl core::fmt::Debug for AnalyticFunctionSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("AnalyticFunctionSpec")
            .field("family", &self.family)
            .field("normalization", &self.normalization)
            .field("known_zeros", &self.known_zeros)
            .field("growth", &self.growth)
            .field("log_sup", &self.log_sup)
            .finish_non_exhaustive()
    }
}

fn check_inside(z: Complex) -> Result<()> {
    let r2 = z.norm_sqr();
    if r2 < 1.0 {
        Ok(())
    } else if r2.is_nan() {
        Err(Error::domain("non-finite evaluation point"))
    } else {
        Err(Error::OutsideDisc { modulus: r2.sqrt() })
    }
}

impl AnalyticFunctionSpec {
    /// Arbitrary holomorphic function given by closures.
    pub fn from_fn(value: impl Fn(Complex) -> Complex + Send + Sync + 'static, derivative: Option<Evaluator>) -> Self {
        let value: Evaluator = Arc::new(value);
        let v = value.clone();
        let log_derivative = derivative.clone().map(|d| {
            let v = value.clone();
            let e: Evaluator = Arc::new(move |z| d(z) / v(z));
            e
        });
        Self {
            value,
            derivative,
            log_derivative,
            log_modulus: Arc::new(move |z| v(z).norm().ln()),
            known_zeros: None,
            family: FamilyTag::User,
            normalization: 1.0,
            growth: None,
            log_sup: None,
        }
    }

    pub fn constant(c: Complex) -> Result<Self> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::domain("non-finite constant"));
        }
        let lc = c.norm().ln();
        Ok(Self {
            value: Arc::new(move |_| c),
            derivative: Some(Arc::new(|_| Complex::new(0.0, 0.0))),
            log_derivative: Some(Arc::new(|_| Complex::new(0.0, 0.0))),
            log_modulus: Arc::new(move |_| lc),
            known_zeros: if c == Complex::new(0.0, 0.0) {
                None
            } else {
                Some(Vec::new())
            },
            family: FamilyTag::Constant,
            normalization: 1.0,
            growth: None,
            log_sup: Some(lc),
        })
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(1.0, 0.0)).expect("finite")
    }

    /// `∏((a_j - z)/(1 - ā_j z))^{m_j}`, divided by `∏|a_j|^{m_j}` when
    /// `normalize` is set.
    pub fn blaschke(zeros: &[Zero], normalize: bool) -> Result<Self> {
        let mut list = Vec::with_capacity(zeros.len());
        let mut log_abs0 = 0.0;
        for z in zeros {
            if !(z.point.norm() < 1.0) {
                return Err(Error::domain("Blaschke zero outside the open disc"));
            }
            if z.multiplicity == 0 {
                continue;
            }
            if normalize && z.point == Complex::new(0.0, 0.0) {
                return Err(Error::UnsatisfiableNormalization);
            }
            if z.point != Complex::new(0.0, 0.0) {
                log_abs0 += f64::from(z.multiplicity) * z.point.norm().ln();
            }
            list.push(*z);
        }
        let shift = if normalize { -log_abs0 } else { 0.0 };
        let scale = shift.exp();
        let zs: Arc<[Zero]> = list.clone().into();

        let zv = zs.clone();
        let value: Evaluator = Arc::new(move |z| {
            let mut acc = Complex::new(scale, 0.0);
            for a in zv.iter() {
                let b = (a.point - z) / (Complex::new(1.0, 0.0) - a.point.conj() * z);
                acc *= b.powu(a.multiplicity);
            }
            acc
        });
        let zd = zs.clone();
        let derivative: Evaluator = Arc::new(move |z| {
            // f' = f Σ m b'/b with b'/b = -1/(a-z) + ā/(1-āz) = (|a|²-1)/((a-z)(1-āz))
            let mut f = Complex::new(scale, 0.0);
            let mut ld = Complex::new(0.0, 0.0);
            let mut zero_hit: Option<(usize, u32)> = None;
            for (k, a) in zd.iter().enumerate() {
                let num = a.point - z;
                let den = Complex::new(1.0, 0.0) - a.point.conj() * z;
                if num == Complex::new(0.0, 0.0) {
                    zero_hit = Some((k, a.multiplicity));
                    continue;
                }
                f *= (num / den).powu(a.multiplicity);
                ld += f64::from(a.multiplicity) * (a.point.norm_sqr() - 1.0) / (num * den);
            }
            match zero_hit {
                None => f * ld,
                Some((k, 1)) => {
                    let a = zd[k].point;
                    // d/dz (a-z)/(1-āz) at z = a equals -1/(1-|a|²)
                    f * (-1.0 / (1.0 - a.norm_sqr()))
                }
                Some(_) => Complex::new(0.0, 0.0),
            }
        });
        let zq = zs.clone();
        let log_derivative: Evaluator = Arc::new(move |z| {
            zq.iter().fold(Complex::new(0.0, 0.0), |acc, a| {
                let den = (a.point - z) * (Complex::new(1.0, 0.0) - a.point.conj() * z);
                acc + f64::from(a.multiplicity) * (a.point.norm_sqr() - 1.0) / den
            })
        });
        let zl = zs.clone();
        let log_modulus: LogModulus = Arc::new(move |z| {
            let mut acc = shift;
            for a in zl.iter() {
                let num = (a.point - z).norm();
                let den = (Complex::new(1.0, 0.0) - a.point.conj() * z).norm();
                acc += f64::from(a.multiplicity) * (num.ln() - den.ln());
            }
            acc
        });
        Ok(Self {
            value,
            derivative: Some(derivative),
            log_derivative: Some(log_derivative),
            log_modulus,
            known_zeros: Some(list),
            family: FamilyTag::BlaschkeProduct,
            normalization: scale,
            growth: None,
            log_sup: Some(shift),
        })
    }

    /// `exp(D w(z))` with `w(z) = (2/(1 - z ζ̄))^p ∏(η_j/(η_j - z))^{q_j}`.
    /// The recorded growth constant is `D 4^p`: `|1 - zζ̄| ≥ (1-|z|²)/2`.
    pub fn growth(bound: &GrowthBound, zeta: Complex) -> Result<Self> {
        Self::growth_with_phase(bound, zeta, 0.0)
    }

    /// `exp(D e^{iθ} w(z))`, same bound as [`Self::growth`]. At `p = 0`,
    /// `θ = π/2` gives `|f(0)| = 1` without rescaling.
    pub fn growth_with_phase(bound: &GrowthBound, zeta: Complex, theta: f64) -> Result<Self> {
        if bound.weight.exponents().iter().any(|&q| !(q > 0.0)) {
            return Err(Error::UnsupportedFamily(
                "growth family needs every weight exponent positive".into(),
            ));
        }
        if !((zeta.norm() - 1.0).abs() <= 1e-14) {
            return Err(Error::domain("growth direction must be unimodular"));
        }
        let d = bound.d;
        let p = bound.p;
        let lambda = Complex::from_polar(1.0, theta);
        let pts: Arc<[(Complex, f64)]> = bound
            .weight
            .points()
            .iter()
            .copied()
            .zip(bound.weight.exponents().iter().copied())
            .collect();
        let w = move |z: Complex| -> (Complex, Complex) {
            let one = Complex::new(1.0, 0.0);
            let base = 2.0 / (one - z * zeta.conj());
            let mut ln_w = if p == 0.0 {
                Complex::new(0.0, 0.0)
            } else {
                p * base.ln()
            };
            let mut ld = p * zeta.conj() / (one - z * zeta.conj());
            for &(eta, q) in pts.iter() {
                ln_w += q * (eta / (eta - z)).ln();
                ld += q / (eta - z);
            }
            (lambda * ln_w.exp(), ld)
        };
        let w = Arc::new(w);
        let wv = w.clone();
        let value: Evaluator = Arc::new(move |z| (d * wv(z).0).exp());
        let wd = w.clone();
        let derivative: Evaluator = Arc::new(move |z| {
            let (wz, ld) = wd(z);
            (d * wz).exp() * d * wz * ld
        });
        let wq = w.clone();
        let log_derivative: Evaluator = Arc::new(move |z| {
            let (wz, ld) = wq(z);
            d * wz * ld
        });
        let wl = w.clone();
        let log_modulus: LogModulus = Arc::new(move |z| d * wl(z).0.re);
        let effective = GrowthBound {
            d: d * 4f64.powf(p),
            p,
            weight: bound.weight.clone(),
        };
        Ok(Self {
            value,
            derivative: Some(derivative),
            log_derivative: Some(log_derivative),
            log_modulus,
            known_zeros: Some(Vec::new()),
            family: FamilyTag::GrowthExponential,
            normalization: 1.0,
            growth: Some(effective),
            log_sup: None,
        })
    }

    /// `f g`, optionally divided by `|f(0) g(0)|`.
    pub fn multiply(f: &Self, g: &Self, renormalize: bool) -> Result<Self> {
        let (fv, gv) = (f.value.clone(), g.value.clone());
        let (fl, gl) = (f.log_modulus.clone(), g.log_modulus.clone());
        let shift = if renormalize {
            let l0 = fl(Complex::new(0.0, 0.0)) + gl(Complex::new(0.0, 0.0));
            if !l0.is_finite() {
                return Err(Error::UnsatisfiableNormalization);
            }
            -l0
        } else {
            0.0
        };
        let scale = shift.exp();
        let value: Evaluator = Arc::new(move |z| fv(z) * gv(z) * scale);
        let derivative = match (&f.derivative, &g.derivative) {
            (Some(fd), Some(gd)) => {
                let (fv, gv, fd, gd) = (f.value.clone(), g.value.clone(), fd.clone(), gd.clone());
                let d: Evaluator = Arc::new(move |z| (fd(z) * gv(z) + fv(z) * gd(z)) * scale);
                Some(d)
            }
            _ => None,
        };
        let log_derivative = match (&f.log_derivative, &g.log_derivative) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                let e: Evaluator = Arc::new(move |z| a(z) + b(z));
                Some(e)
            }
            _ => None,
        };
        let log_modulus: LogModulus = Arc::new(move |z| fl(z) + gl(z) + shift);
        let known_zeros = match (&f.known_zeros, &g.known_zeros) {
            (Some(a), Some(b)) => Some(merge_zeros(a, b)),
            _ => None,
        };
        let log_sup = match (f.log_sup, g.log_sup) {
            (Some(a), Some(b)) => Some(a + b + shift),
            _ => None,
        };
        let growth = product_growth(f, g, shift);
        Ok(Self {
            value,
            derivative,
            log_derivative,
            log_modulus,
            known_zeros,
            family: FamilyTag::Product,
            normalization: f.normalization * g.normalization * scale,
            growth,
            log_sup,
        })
    }

    /// Divide by `|f(0)|`.
    pub fn normalized(&self) -> Result<Self> {
        Self::multiply(self, &Self::one(), true).map(|mut s| {
            s.family = self.family;
            s
        })
    }

    /// `f_s(z) = f(sz)`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::domain("dilation factor must lie in (0, 1]"));
        }
        let v = self.value.clone();
        let l = self.log_modulus.clone();
        let derivative = self.derivative.clone().map(|d| {
            let e: Evaluator = Arc::new(move |z| d(z * s) * s);
            e
        });
        let log_derivative = self.log_derivative.clone().map(|d| {
            let e: Evaluator = Arc::new(move |z| d(z * s) * s);
            e
        });
        let known_zeros = self.known_zeros.as_ref().map(|zs| {
            zs.iter()
                .filter(|a| a.point.norm() < s)
                .map(|a| Zero {
                    point: a.point / s,
                    multiplicity: a.multiplicity,
                })
                .collect()
        });
        Ok(Self {
            value: Arc::new(move |z| v(z * s)),
            derivative,
            log_derivative,
            log_modulus: Arc::new(move |z| l(z * s)),
            known_zeros,
            family: self.family,
            normalization: self.normalization,
            growth: None,
            log_sup: self.log_sup,
        })
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        check_inside(z)?;
        Ok((self.value)(z))
    }

    pub fn derivative(&self, z: Complex) -> Result<Option<Complex>> {
        check_inside(z)?;
        Ok(self.derivative.as_ref().map(|d| d(z)))
    }

    /// Closed-form derivative when available, else a central difference of
    /// step `h`.
    pub fn derivative_or_fd(&self, z: Complex, h: f64) -> Result<Complex> {
        check_inside(z)?;
        if let Some(d) = &self.derivative {
            return Ok(d(z));
        }
        let hx = Complex::new(h, 0.0);
        let (a, b) = ((self.value)(z + hx), (self.value)(z - hx));
        Ok((a - b) / (2.0 * h))
    }

    /// `f'/f`, from closed forms when available, else by a central difference
    /// of step `h`.
    pub fn log_derivative(&self, z: Complex, h: f64) -> Result<Complex> {
        check_inside(z)?;
        if let Some(d) = &self.log_derivative {
            return Ok(d(z));
        }
        let hx = Complex::new(h, 0.0);
        let (a, b) = ((self.value)(z + hx), (self.value)(z - hx));
        Ok((a - b) / (2.0 * h * (self.value)(z)))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// `log|f(z)|` accumulated as a sum of logarithms.
    pub fn log_abs(&self, z: Complex) -> Result<f64> {
        check_inside(z)?;
        Ok((self.log_modulus)(z))
    }

    pub fn known_zeros(&self) -> Option<&[Zero]> {
        self.known_zeros.as_deref()
    }

    pub fn family(&self) -> FamilyTag {
        self.family
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Effective growth bound, when one is known.
    pub fn growth_bound(&self) -> Option<&GrowthBound> {
        self.growth.as_ref()
    }

    /// Upper bound for `sup log|f|` over the disc, when `f` is bounded.
    pub fn log_sup(&self) -> Option<f64> {
        self.log_sup
    }

    pub fn with_known_zeros(mut self, zeros: Vec<Zero>) -> Self {
        self.known_zeros = Some(zeros);
        self
    }

    pub fn without_known_zeros(mut self) -> Self {
        self.known_zeros = None;
        self
    }

    pub fn with_growth_bound(mut self, bound: GrowthBound) -> Self {
        self.growth = Some(bound);
        self
    }
}

fn merge_zeros(a: &[Zero], b: &[Zero]) -> Vec<Zero> {
    let mut out: Vec<Zero> = a.to_vec();
    for z in b {
        match out.iter_mut().find(|x| x.point == z.point) {
            Some(x) => x.multiplicity += z.multiplicity,
            None => out.push(*z),
        }
    }
    out
}

/// Growth metadata of `f g` scaled by `e^{shift}`.
fn product_growth(f: &AnalyticFunctionSpec, g: &AnalyticFunctionSpec, shift: f64) -> Option<GrowthBound> {
    let (grow, other) = match (&f.growth, &g.growth, f.log_sup, g.log_sup) {
        (Some(a), None, _, Some(lg)) => (a.clone(), lg),
        (None, Some(b), Some(lf), _) => (b.clone(), lf),
        (Some(a), Some(b), _, _) if a.p == b.p && a.weight == b.weight => {
            return Some(GrowthBound {
                d: a.d + b.d + pos(shift) * 2f64.powf(a.p + a.q_total()),
                ..a.clone()
            })
        }
        _ => return None,
    };
    // (1-|z|²)^p |R(z)| ≤ 2^{Σq} on the disc, so a bounded additive term fits
    let k = 2f64.powf(grow.q_total());
    let d = grow.d + pos(other + shift) * k;
    Some(GrowthBound { d, ..grow })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, unit};
    use core::f64::consts::TAU;
    use proptest::prelude::*;

    fn gb(d: f64, p: f64) -> GrowthBound {
        let w = RationalWeightSpec::from_angles(&[0.0], alloc::vec![1.0]).unwrap();
        GrowthBound::new(d, p, w).unwrap()
    }

    #[test]
    fn blaschke_examples() {
        let one = AnalyticFunctionSpec::blaschke(&[], true).unwrap();
        assert_eq!(one.eval(c(0.3, 0.1)).unwrap(), c(1.0, 0.0));
        let z = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.0, 0.0))], false).unwrap();
        assert_eq!(z.eval(c(0.0, 0.0)).unwrap().norm(), 0.0);
        assert!((z.eval(c(0.3, 0.0)).unwrap() + c(0.3, 0.0)).norm() < 1e-15);
        let f = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.5, 0.0))], true).unwrap();
        assert!((f.eval(c(0.0, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(f.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);
        assert_eq!(
            AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.0, 0.0))], true).unwrap_err(),
            Error::UnsatisfiableNormalization
        );
        assert!(AnalyticFunctionSpec::blaschke(&[Zero::simple(c(1.0, 0.0))], false).is_err());
    }

    #[test]
    fn rejects_outside_disc() {
        let f = AnalyticFunctionSpec::one();
        assert!(matches!(f.eval(c(1.0, 0.0)), Err(Error::OutsideDisc { .. })));
        assert!(f.log_abs(c(0.0, -1.2)).is_err());
    }

    #[test]
    fn growth_examples() {
        let f = AnalyticFunctionSpec::growth(&gb(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((f.eval(c(0.0, 0.0)).unwrap() - c(1f64.exp(), 0.0)).norm() < 1e-14);
        assert_eq!(f.known_zeros().unwrap().len(), 0);
        // log|f| ≤ 1/|z-1| on a grid of 10³ points
        for i in 0..40 {
            for j in 0..25 {
                let z = unit(TAU * i as f64 / 40.0) * (0.999 * (j as f64 + 0.5) / 25.0);
                let l = f.log_abs(z).unwrap();
                assert!(l <= 1.0 / (z - 1.0).norm() * (1.0 + 1e-12));
            }
        }
        let bad = RationalWeightSpec::from_angles(&[0.0], alloc::vec![-1.0]).unwrap();
        let bad = GrowthBound::new(1.0, 0.0, bad).unwrap();
        assert!(matches!(
            AnalyticFunctionSpec::growth(&bad, c(1.0, 0.0)),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn growth_obeys_recorded_bound() {
        let w = RationalWeightSpec::from_angles(&[0.4, 2.0], alloc::vec![0.7, 1.3]).unwrap();
        let f = AnalyticFunctionSpec::growth(&GrowthBound::new(1.5, 0.8, w).unwrap(), unit(3.0)).unwrap();
        let g = f.growth_bound().unwrap();
        assert!((g.d - 1.5 * 4f64.powf(0.8)).abs() < 1e-14);
        for i in 0..50 {
            for j in 0..20 {
                let z = unit(TAU * i as f64 / 50.0) * (0.995 * (j as f64 + 0.5) / 20.0);
                let bound = g.d / ((1.0 - z.norm_sqr()).powf(g.p) * g.weight.modulus(z, 1.0).unwrap());
                assert!(f.log_abs(z).unwrap() <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn growth_phase_rotates_exponent() {
        let f =
            AnalyticFunctionSpec::growth_with_phase(&gb(2.0, 0.0), c(1.0, 0.0), core::f64::consts::FRAC_PI_2).unwrap();
        assert!((f.eval(c(0.0, 0.0)).unwrap() - c(0.0, 2.0).exp()).norm() < 1e-14);
        let z = c(0.3, -0.5);
        let w = 1.0 / (1.0 - z);
        assert!((f.log_abs(z).unwrap() + 2.0 * w.im).abs() < 1e-13);
        let h = 1e-6;
        let fd = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
        assert!((f.derivative(z).unwrap().unwrap() - fd).norm() < 1e-6 * fd.norm());
    }

    #[test]
    fn product_examples() {
        let b = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.5, 0.0))], true).unwrap();
        let g = AnalyticFunctionSpec::growth(&gb(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let p = AnalyticFunctionSpec::multiply(&b, &g, true).unwrap();
        assert!((p.eval(c(0.0, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
        assert_eq!(p.known_zeros().unwrap(), &[Zero::simple(c(0.5, 0.0))]);
        let id = AnalyticFunctionSpec::multiply(&AnalyticFunctionSpec::one(), &g, false).unwrap();
        let z = c(0.2, -0.6);
        assert!((id.eval(z).unwrap() - g.eval(z).unwrap()).norm() < 1e-13 * g.eval(z).unwrap().norm());
        let zero = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.0, 0.0))], false).unwrap();
        assert!(AnalyticFunctionSpec::multiply(&zero, &g, true).is_err());
    }

    #[test]
    fn product_growth_bound_holds() {
        let b = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.3, 0.4)), Zero::simple(c(-0.5, 0.1))], true).unwrap();
        let g = AnalyticFunctionSpec::growth(&gb(2.0, 0.5), unit(1.0)).unwrap();
        let p = AnalyticFunctionSpec::multiply(&b, &g, true).unwrap();
        let gbnd = p.growth_bound().unwrap();
        for i in 0..60 {
            for j in 0..30 {
                let z = unit(TAU * i as f64 / 60.0) * (0.998 * (j as f64 + 0.5) / 30.0);
                let bound = gbnd.d / ((1.0 - z.norm_sqr()).powf(gbnd.p) * gbnd.weight.modulus(z, 1.0).unwrap());
                assert!(crate::math::log_plus(p.log_abs(z).unwrap()) <= bound);
            }
        }
    }

    #[test]
    fn dilation_maps_zeros() {
        let f = AnalyticFunctionSpec::blaschke(&[Zero::simple(c(0.3, 0.0)), Zero::simple(c(0.0, 0.8))], true).unwrap();
        let fs = f.dilate(0.5).unwrap();
        assert_eq!(fs.known_zeros().unwrap().len(), 1);
        assert!((fs.known_zeros().unwrap()[0].point - c(0.6, 0.0)).norm() < 1e-15);
        let z = c(0.4, 0.3);
        assert_eq!(fs.eval(z).unwrap(), f.eval(z * 0.5).unwrap());
    }

    fn zeros_strategy() -> impl Strategy<Value = Vec<Zero>> {
        proptest::collection::vec((0.05..0.95f64, 0.0..TAU, 1u32..3), 0..6).prop_map(|v| {
            v.into_iter()
                .map(|(r, t, m)| Zero {
                    point: unit(t) * r,
                    multiplicity: m,
                })
                .collect()
        })
    }

    fn point() -> impl Strategy<Value = Complex> {
        (0.0..0.97f64, 0.0..TAU).prop_map(|(r, t)| unit(t) * r)
    }

    fn richardson_slope(f: &AnalyticFunctionSpec, z: Complex) -> Option<f64> {
        let d = f.derivative(z).unwrap().unwrap();
        let fd = |h: f64| (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
        let e1 = (fd(1e-3) - d).norm();
        let e2 = (fd(5e-4) - d).norm();
        // roundoff floor: too accurate to measure a slope
        if e1 < 1e-9 * d.norm().max(1.0) {
            return None;
        }
        Some((e1 / e2).log2())
    }

    proptest! {
        #[test]
        fn normalized_blaschke_is_normalized(zs in zeros_strategy()) {
            let f = AnalyticFunctionSpec::blaschke(&zs, true).unwrap();
            prop_assert!((f.eval(c(0.0, 0.0)).unwrap().norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn normalized_blaschke_bounded(zs in zeros_strategy(), z in point()) {
            let f = AnalyticFunctionSpec::blaschke(&zs, true).unwrap();
            let bound: f64 = zs.iter().map(|a| a.point.norm().powi(a.multiplicity as i32)).product();
            if zs.is_empty() {
                prop_assert!(f.eval(z).unwrap().norm() == 1.0);
            } else {
                prop_assert!(f.eval(z).unwrap().norm() < 1.0 / bound);
            }
            let lm = f.log_abs(z).unwrap();
            let direct = f.eval(z).unwrap().norm().ln();
            prop_assert!((lm - direct).abs() <= 1e-9 * (1.0 + direct.abs()) || direct < -30.0);
        }

        #[test]
        fn blaschke_derivative_second_order(zs in zeros_strategy(), z in (0.0..0.9f64, 0.0..TAU).prop_map(|(r, t)| unit(t) * r)) {
            let f = AnalyticFunctionSpec::blaschke(&zs, true).unwrap();
            if zs.iter().all(|a| (a.point - z).norm() > 0.05) {
                if let Some(slope) = richardson_slope(&f, z) {
                    prop_assert!((slope - 2.0).abs() <= 0.3, "slope {slope}");
                }
            }
        }

        #[test]
        fn growth_derivative_second_order(d in 0.2..3.0f64, p in 0.0..2.0f64, q in 0.1..2.0f64, z in (0.0..0.8f64, 0.0..TAU).prop_map(|(r, t)| unit(t) * r)) {
            let w = RationalWeightSpec::from_angles(&[0.0], alloc::vec![q]).unwrap();
            let f = AnalyticFunctionSpec::growth(&GrowthBound::new(d, p, w).unwrap(), unit(2.0)).unwrap();
            if let Some(slope) = richardson_slope(&f, z) {
                prop_assert!((slope - 2.0).abs() <= 0.3, "slope {slope}");
            }
        }

        #[test]
        fn product_modulus_multiplies(zs in zeros_strategy(), z in point(), d in 0.1..2.0f64) {
            let b = AnalyticFunctionSpec::blaschke(&zs, false).unwrap();
            let g = AnalyticFunctionSpec::growth(&gb(d, 0.5), unit(0.7)).unwrap();
            let p = AnalyticFunctionSpec::multiply(&b, &g, false).unwrap();
            let lhs = p.eval(z).unwrap().norm();
            let rhs = b.eval(z).unwrap().norm() * g.eval(z).unwrap().norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
        }
    }
}
