//! Turning a [`ScenarioConfig`] into core objects.

use std::f64::consts::TAU;

use blaschke_core::nevan::{TheoremMode, TheoremScenario};
use blaschke_core::{AnalyticFunctionSpec, ClosedArcSet, Complex, Error, GrowthBound, RationalWeightSpec, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{FunctionConfig, LemmaConfig, ScenarioConfig, WeightConfig};

pub fn complex(v: [f64; 2]) -> Complex {
    Complex::new(v[0], v[1])
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub family: String,
    pub f: AnalyticFunctionSpec,
    pub weight: RationalWeightSpec,
    pub closed: Option<(ClosedArcSet, f64)>,
    pub p: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub alpha_e: Option<f64>,
    pub s_grid_size: usize,
    pub zero_radius: f64,
    pub modes: Vec<TheoremMode>,
    pub seed: u64,
    pub green_s: Vec<f64>,
    pub lemmas: LemmaConfig,
}

impl Scenario {
    /// `seed` is the run seed; a scenario without its own seed gets
    /// `seed + index`.
    pub fn build(cfg: &ScenarioConfig, index: usize, seed: u64, s_grid_override: Option<usize>) -> Result<Self, Error> {
        let seed = cfg.seed.unwrap_or(seed.wrapping_add(index as u64));
        let weight = rational(&cfg.weight)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = function(&cfg.function, &weight, &mut rng)?;
        let closed = match &cfg.closed_set {
            Some(c) => {
                let arcs: Vec<(f64, f64)> = c.arcs.iter().map(|a| (a[0], a[1])).collect();
                Some((ClosedArcSet::new(&arcs)?, c.q))
            }
            None => None,
        };
        let modes = cfg
            .modes
            .iter()
            .map(|m| TheoremMode::from_name(m).ok_or_else(|| Error::domain(format!("unknown mode {m}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            name: cfg.name.clone(),
            family: cfg.family.clone().unwrap_or_else(|| "default".into()),
            f,
            weight,
            closed,
            p: cfg.p,
            delta: cfg.delta.unwrap_or(0.5),
            epsilon: cfg.epsilon.unwrap_or(0.1),
            kappa: cfg.kappa.unwrap_or(0.01),
            alpha_e: cfg.alpha_e,
            s_grid_size: s_grid_override.or(cfg.s_grid_size).unwrap_or(6),
            zero_radius: cfg.zero_radius.unwrap_or(0.99),
            modes,
            seed,
            green_s: cfg
                .green
                .as_ref()
                .map(|g| g.s.clone())
                .unwrap_or_else(|| vec![0.7, 0.9]),
            lemmas: cfg.lemmas.clone().unwrap_or_default(),
        })
    }

    pub fn theorem(&self, mode: TheoremMode, constant: f64) -> TheoremScenario {
        let mut t = TheoremScenario::new(self.f.clone(), self.weight.clone(), self.p, mode);
        if let Some((set, q)) = &self.closed {
            t = t.with_closed_set(set.clone(), *q);
        }
        t.delta = self.delta;
        t.epsilon = self.epsilon;
        t.kappa = self.kappa;
        t.alpha_e = self.alpha_e;
        t.s_grid_size = self.s_grid_size;
        t.zero_radius = self.zero_radius;
        t.constant_used = constant;
        t
    }
}

pub fn rational(w: &WeightConfig) -> Result<RationalWeightSpec, Error> {
    if w.angles.len() != w.exponents.len() {
        return Err(Error::domain("weight angles and exponents differ in length"));
    }
    if w.angles.is_empty() {
        return Ok(RationalWeightSpec::empty());
    }
    RationalWeightSpec::from_angles(&w.angles, w.exponents.clone())
}

fn function(
    cfg: &FunctionConfig,
    weight: &RationalWeightSpec,
    rng: &mut ChaCha8Rng,
) -> Result<AnalyticFunctionSpec, Error> {
    match cfg {
        FunctionConfig::Blaschke { zeros, normalize } => {
            let z: Vec<Zero> = zeros.iter().map(|&a| Zero::simple(complex(a))).collect();
            AnalyticFunctionSpec::blaschke(&z, *normalize)
        }
        FunctionConfig::RandomBlaschke {
            degree,
            min_separation,
            max_radius,
            normalize,
        } => {
            let z = random_zeros(rng, *degree, *min_separation, *max_radius)?;
            AnalyticFunctionSpec::blaschke(&z, *normalize)
        }
        FunctionConfig::Growth {
            d,
            p,
            zeta,
            phase,
            weight: own,
            normalize,
        } => {
            let w = match own {
                Some(w) => rational(w)?,
                None => weight.clone(),
            };
            let f = AnalyticFunctionSpec::growth_with_phase(&GrowthBound::new(*d, *p, w)?, complex(*zeta), *phase)?;
            if *normalize {
                f.normalized()
            } else {
                Ok(f)
            }
        }
        FunctionConfig::Constant { value } => AnalyticFunctionSpec::constant(complex(*value)),
        FunctionConfig::Product { factors, renormalize } => {
            let mut acc = AnalyticFunctionSpec::one();
            for fc in factors {
                let g = function(fc, weight, rng)?;
                acc = AnalyticFunctionSpec::multiply(&acc, &g, false)?;
            }
            if *renormalize {
                acc.normalized()
            } else {
                Ok(acc)
            }
        }
    }
}

/// Zeros uniform in `D(0, max_radius)` with pairwise distance at least
/// `min_separation`, by rejection.
pub fn random_zeros<R: Rng>(
    rng: &mut R,
    degree: usize,
    min_separation: f64,
    max_radius: f64,
) -> Result<Vec<Zero>, Error> {
    if !(max_radius > 0.0 && max_radius < 1.0) {
        return Err(Error::domain("max_radius must lie in (0, 1)"));
    }
    let mut pts: Vec<Complex> = Vec::with_capacity(degree);
    let mut tries = 0usize;
    while pts.len() < degree {
        tries += 1;
        if tries > 100_000 {
            return Err(Error::domain("could not place zeros with the requested separation"));
        }
        let r = max_radius * rng.random::<f64>().sqrt();
        let t = TAU * rng.random::<f64>();
        let z = Complex::from_polar(r, t);
        if pts.iter().all(|w| (w - z).norm() >= min_separation) {
            pts.push(z);
        }
    }
    Ok(pts.into_iter().map(Zero::simple).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_zeros_are_seeded_and_separated() {
        let a = random_zeros(&mut ChaCha8Rng::seed_from_u64(5), 10, 0.05, 0.9).unwrap();
        let b = random_zeros(&mut ChaCha8Rng::seed_from_u64(5), 10, 0.05, 0.9).unwrap();
        assert_eq!(a, b);
        for (i, x) in a.iter().enumerate() {
            assert!(x.point.norm() < 0.9);
            for y in &a[i + 1..] {
                assert!((x.point - y.point).norm() >= 0.05);
            }
        }
    }
}
