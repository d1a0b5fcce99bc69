//! One function per command, each turning a built scenario into a
//! [`ScenarioReport`].

use blaschke_core::green::{green_identity_residual, FieldSpec, FieldWeight};
use blaschke_core::lemmas::{
    continuity_probe, halfdisc_sweep, integrability_check, limit_sum_check, remark_change_of_variables,
    substitution_check, substitution_check_torus,
};
use blaschke_core::nevan::{norm_p_positive, norm_p_zero, verify_theorem_detailed, zero_list, CheckId};
use blaschke_core::quad::geometric_s_grid;
use blaschke_core::zeros::{search_zeros, Region, ZeroSearchConfig};
use blaschke_core::{Complex, Error, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calibration::Calibration;
use crate::report::{CheckRecord, GreenRecord, NormRecord, ScenarioReport, Status, ZeroSetRecord};
use crate::scenario::Scenario;

/// Location tolerance of the zeros suite.
pub const ZERO_TOL: f64 = 1e-8;
/// Relative tolerance of the Green identity, scaled by `1 + |∫ log|f_s| Δg_s|`.
pub const GREEN_TOL: f64 = 1e-3;

pub fn status_of(e: &Error) -> Status {
    match e {
        Error::ScenarioRejected(_) => Status::Rejected,
        _ => Status::Error,
    }
}

fn fail(sc: &Scenario, e: Error) -> ScenarioReport {
    ScenarioReport::failed(&sc.name, status_of(&e), e.to_string())
}

pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

fn record(
    mode: &str,
    statement: &str,
    lhs: f64,
    rhs: f64,
    pass: bool,
    converged: bool,
    diagnostics: Vec<String>,
) -> CheckRecord {
    CheckRecord {
        mode: mode.into(),
        statement: statement.into(),
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        constant_used: 1.0,
        pass,
        converged,
        diagnostics,
    }
}

pub fn verify(sc: &Scenario, cal: Option<&Calibration>, cfg: &QuadratureConfig) -> ScenarioReport {
    let mut out = ScenarioReport::new(&sc.name);
    for &mode in &sc.modes {
        let found = cal.and_then(|c| c.lookup(mode.name(), &sc.family));
        let t = sc.theorem(mode, found.unwrap_or(1.0));
        match verify_theorem_detailed(&t, cfg) {
            Ok((rep, norm)) => {
                let mut rec = CheckRecord::from(&rep);
                if found.is_none() {
                    rec.diagnostics.push("no calibrated constant, using 1".into());
                }
                out.checks.push(rec);
                if let Some(n) = norm {
                    out.norms.push(NormRecord::new(mode.name(), &n));
                }
            }
            Err(e) => return fail(sc, e),
        }
    }
    match zero_list(&sc.f, sc.zero_radius, &ZeroSearchConfig::default()) {
        Ok((zeros, complete)) => out
            .zero_sets
            .push(ZeroSetRecord::from_list(sc.zero_radius, &zeros, complete)),
        Err(e) => return fail(sc, e),
    }
    out
}

/// Fresh argument-principle search, compared against the stored zeros when
/// the family has them.
pub fn zeros(sc: &Scenario, _cfg: &QuadratureConfig) -> ScenarioReport {
    let mut out = ScenarioReport::new(&sc.name);
    let region = Region::disc(Complex::new(0.0, 0.0), sc.zero_radius);
    let set = match search_zeros(
        &sc.f.clone().without_known_zeros(),
        &region,
        &ZeroSearchConfig::default(),
    ) {
        Ok(s) => s,
        Err(e) => return fail(sc, e),
    };
    let certified = set.unresolved.is_empty();
    let mut diagnostics = Vec::new();
    let (err, count_ok) = match sc.f.known_zeros() {
        Some(known) => {
            let expected: Vec<Complex> = known
                .iter()
                .filter(|z| z.point.norm() < sc.zero_radius)
                .flat_map(|z| std::iter::repeat_n(z.point, z.multiplicity as usize))
                .collect();
            let expected_count = expected.len() as u32;
            let mut worst = 0.0f64;
            for z in &set.zeros {
                let d = expected
                    .iter()
                    .map(|e| (e - z.point).norm())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
            if expected_count != set.certified_count {
                diagnostics.push(format!(
                    "expected {expected_count} zeros, certified {}",
                    set.certified_count
                ));
            }
            (worst, expected_count == set.certified_count)
        }
        None => (0.0, true),
    };
    if !certified {
        diagnostics.push(format!("{} cells unresolved", set.unresolved.len()));
    }
    out.checks.push(record(
        "zeros",
        "certified zero count and locations in D(0, r)",
        err,
        ZERO_TOL,
        certified && count_ok && err <= ZERO_TOL,
        certified,
        diagnostics,
    ));
    out.zero_sets.push(ZeroSetRecord::from_set(sc.zero_radius, &set));
    out
}

/// The `|R|²`-weighted norm of `f`.
pub fn norm(sc: &Scenario, cfg: &QuadratureConfig) -> ScenarioReport {
    let mut out = ScenarioReport::new(&sc.name);
    let grid = match geometric_s_grid(sc.delta, sc.s_grid_size) {
        Ok(g) => g,
        Err(e) => return fail(sc, e),
    };
    let w = &sc.weight;
    let n = if sc.p > 0.0 {
        norm_p_positive(&sc.f, |z| w.modulus(z, 2.0), w.points(), sc.p, sc.delta, &grid, cfg)
    } else {
        norm_p_zero(&sc.f, w, 2.0, sc.delta, &grid, cfg)
    };
    match n {
        Ok(n) => {
            out.checks.push(record(
                "norm",
                "sup over the s grid of the |R|^2 weighted log+ integral; rhs is the upper bracket",
                n.value,
                n.value + n.error_estimate,
                n.converged,
                n.converged,
                Vec::new(),
            ));
            out.norms.push(NormRecord::new("norm", &n));
        }
        Err(e) => return fail(sc, e),
    }
    out
}

pub fn green(sc: &Scenario, cfg: &QuadratureConfig) -> ScenarioReport {
    let mut out = ScenarioReport::new(&sc.name);
    for &s in &sc.green_s {
        let res = FieldSpec::new(FieldWeight::Rational(sc.weight.clone()), sc.p, s)
            .and_then(|field| green_identity_residual(&sc.f, &field, cfg));
        match res {
            Ok(g) => {
                let tol = GREEN_TOL * (1.0 + g.integral.value.abs());
                out.checks.push(record(
                    "green_identity",
                    "sum of g_s over Z(f_s) = (int log|f_s| lap g_s + B+ - B-) / 2pi",
                    g.residual.abs(),
                    tol,
                    g.integral.converged && g.residual.abs() <= tol,
                    g.integral.converged,
                    vec![format!("s = {s}")],
                ));
                out.green.push(GreenRecord::new(s, &g));
            }
            Err(e) => return fail(sc, e),
        }
    }
    out
}

pub fn lemmas(sc: &Scenario, cfg: &QuadratureConfig) -> ScenarioReport {
    match lemma_checks(sc, cfg) {
        Ok(checks) => ScenarioReport {
            checks,
            ..ScenarioReport::new(&sc.name)
        },
        Err(e) => fail(sc, e),
    }
}

fn lemma_checks(sc: &Scenario, cfg: &QuadratureConfig) -> Result<Vec<CheckRecord>, Error> {
    let l = &sc.lemmas;
    let (de, u, s, t0) = (
        l.delta_exp.unwrap_or(1.0),
        l.u.unwrap_or(0.9),
        l.s.unwrap_or(0.9),
        l.t0.unwrap_or(0.9),
    );
    let w = &sc.weight;
    let phi = |z: Complex| w.modulus(z, 2.0);
    let grid = geometric_s_grid(sc.delta, sc.s_grid_size)?;
    let mut out: Vec<CheckRecord> = Vec::new();
    if sc.p > 0.0 {
        out.push(CheckRecord::from(&substitution_check(&sc.f, w, sc.p, de, u, s, cfg)?));
    }
    out.push(CheckRecord::from(&substitution_check_torus(
        &sc.f, w, de, u, t0, 6, cfg,
    )?));

    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let n = l.halfdisc_samples.unwrap_or(10_000);
    let pairs: Vec<(Complex, Complex)> = (0..n)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let z = Complex::from_polar(r, std::f64::consts::TAU * rng.random::<f64>());
            let eta = Complex::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>());
            (z, eta)
        })
        .collect();
    let (checked, bad) = halfdisc_sweep(pairs);
    out.push(record(
        CheckId::HalfDisc.name(),
        "Re(conj(z)(z-eta)) <= 0 iff |z - eta/2| <= 1/2",
        bad as f64,
        0.0,
        bad == 0,
        true,
        vec![format!("{checked} of {n} samples outside the boundary band")],
    ));

    let t = l.continuity_t.unwrap_or(0.9);
    // γ bends on the scale of the smallest zero modulus; start finer than that
    let (zs, _) = zero_list(&sc.f, t, &ZeroSearchConfig::default())?;
    let r_min = zs.iter().map(|z| z.point.norm()).fold(1.0f64, f64::min);
    let n0 = ((4.0 * t / r_min).ceil() as usize).next_power_of_two().clamp(32, 512);
    let table = continuity_probe(&sc.f, phi, w.points(), t, n0, 4, cfg)?;
    let worst = table.ratios.iter().copied().fold(0.0f64, f64::max);
    out.push(record(
        CheckId::Continuity.name(),
        "s -> int_T |R(se)|^2 log-|f(se)| is continuous on [0, t]: max jump shrinks under halving",
        worst,
        table.threshold,
        table.pass,
        true,
        table
            .levels
            .iter()
            .map(|v| format!("spacing {}: max jump {}", v.spacing, v.max_jump))
            .collect(),
    ));

    let p_int = if sc.p > 0.0 { sc.p } else { 0.5 };
    out.push(CheckRecord::from(
        &integrability_check(w.points(), p_int, 2, 1e-5, cfg)?.0,
    ));
    if sc.p > 0.0 {
        out.push(CheckRecord::from(
            &limit_sum_check(&sc.f, phi, w.points(), sc.p, sc.delta, &grid, cfg)?.0,
        ));
    }
    if sc.p >= 1.0 {
        out.push(CheckRecord::from(&remark_change_of_variables(
            &sc.f,
            phi,
            w.points(),
            sc.p,
            sc.delta,
            &grid,
            cfg,
        )?));
    }
    Ok(out)
}
