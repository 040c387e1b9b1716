//! One function per command. Each returns the unsorted report and, for PDE
//! runs, the snapshots to emit as plot data.

use std::f64::consts::PI;

use log::{debug, info};
use num_complex::Complex64;

use miura_core::evolution::{
    choose_kappa, evolution_operator, log_representation, reconstruct_generator, GeneratorSpec,
};
use miura_core::fixtures::Fixtures;
use miura_core::matfun::{expm, logm_principal, riesz_dunford, spectrum, sqrtm_principal, Contour, ScalarFunction};
use miura_core::second_order::{
    abstract_miura, choose_kappa_at, decompose_solution, pair_log_representation, solve_companion,
    sqrt_generators, two_mode_solution, verify_factorization, FactorOrder, SecondOrderGenerator,
};
use miura_core::soliton::{
    cole_hopf, energy, hirota_identity_residual, integrate, kdv_soliton, kdv_soliton_at, mass, miura,
    miura_maps_solutions, mkdv_kink, mkdv_kink_antikink, riccati_residual, solve_linear_x, Equation,
    Field, Grid1D, PdeRun, Snapshot,
};
use miura_core::{ComplexMatrix, Report};

use crate::config::{
    fixture_matrices, AbstractMiuraParams, ExperimentConfig, FactorizeParams, InitialData, Lemma1Params,
    MatfunCheckParams, Parameters, SolitonParams, TransformChainParams,
};
use crate::error::CliError;

pub struct Outcome {
    pub report: Report,
    pub snapshots: Option<Vec<Snapshot>>,
}

pub fn run(config: &ExperimentConfig) -> std::result::Result<Outcome, CliError> {
    let mut fx = Fixtures::new(config.seed);
    let name = config.command.name();
    let mut snapshots = None;
    let mut report = match &config.parameters {
        Parameters::MatfunCheck(p) => matfun_check(p, &mut fx, name)?,
        Parameters::Lemma1(p) => lemma1(p, &mut fx, name)?,
        Parameters::AbstractMiura(p) => abstract_miura_suite(p, &mut fx, name)?,
        Parameters::Factorize(p) => factorize(p, &mut fx, name)?,
        Parameters::Soliton(p) => {
            let (report, snaps) = soliton(p, name)?;
            snapshots = Some(snaps);
            report
        }
        Parameters::TransformChain(p) => transform_chain(p, &mut fx, name)?,
    };
    report.command = name.to_string();
    Ok(Outcome { report, snapshots })
}

fn rel(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.relative_distance(reference)
}

/// Appends `other`'s cases under `prefix/`.
fn merge(into: &mut Report, prefix: &str, other: Report) {
    for mut case in other.cases {
        case.name = format!("{prefix}/{}", case.name);
        into.push(case);
    }
}

/// Fixture matrices if given, otherwise `count` draws from `draw`.
fn instances(
    fixtures: Option<Vec<(String, ComplexMatrix)>>,
    count: usize,
    fx: &mut Fixtures,
    mut draw: impl FnMut(&mut Fixtures) -> ComplexMatrix,
) -> Vec<(String, ComplexMatrix)> {
    fixtures.unwrap_or_else(|| {
        (0..count)
            .map(|i| (format!("random-{i:03}"), draw(fx)))
            .collect()
    })
}

fn check_dim(max_dim: usize) -> std::result::Result<(), CliError> {
    if max_dim == 0 {
        return Err(CliError::Config("max_dim must be at least 1".into()));
    }
    Ok(())
}

fn sectorial_draw(max_dim: usize) -> impl FnMut(&mut Fixtures) -> ComplexMatrix {
    move |fx| {
        let n = fx.dim(max_dim);
        let shift = fx.uniform(0.5, 2.0);
        fx.sectorial(n, shift, 0.1)
    }
}

fn matfun_check(p: &MatfunCheckParams, fx: &mut Fixtures, name: &str) -> std::result::Result<Report, CliError> {
    check_dim(p.max_dim)?;
    check_dim(p.roundtrip_max_dim)?;
    let mut report = Report::new(name);
    let fixtures = fixture_matrices(&p.matrices)?;
    let user_supplied = fixtures.is_some();
    let matrices = instances(fixtures, p.instances, fx, |fx| {
        let n = fx.dim(p.max_dim);
        // far enough right that a circle clears the cut
        let shift = fx.uniform(2.5, 4.0);
        fx.sectorial(n, shift, 0.5)
    });
    for (label, m) in &matrices {
        debug!("{label}: dim {}", m.dim());
        let contour = Contour::enclosing(&spectrum(m)?.eigenvalues, ScalarFunction::Log, p.quadrature_nodes)?;
        let rd = riesz_dunford(ScalarFunction::Log, m, &contour)?;
        let log = logm_principal(m)?;
        report.check(format!("{label}/logm_vs_contour"), rel(&log, &rd), p.contour_tolerance);
        if user_supplied {
            report.check(
                format!("{label}/exp_of_log"),
                rel(&expm(&log)?, m),
                p.roundtrip_tolerance,
            );
        }
    }
    if !user_supplied {
        for i in 0..p.roundtrip_instances {
            let n = fx.dim(p.roundtrip_max_dim);
            let a = fx.log_admissible(n, 2.0, 0.3);
            let back = logm_principal(&expm(&a)?)?;
            report.check(format!("roundtrip-{i:03}/log_of_exp"), rel(&back, &a), p.roundtrip_tolerance);
        }
    }
    Ok(report)
}

fn lemma1(p: &Lemma1Params, fx: &mut Fixtures, name: &str) -> std::result::Result<Report, CliError> {
    check_dim(p.max_dim)?;
    if p.times.is_empty() {
        return Err(CliError::Config("times must not be empty".into()));
    }
    let mut report = Report::new(name);
    let generators = instances(fixture_matrices(&p.generators)?, p.instances, fx, |fx| {
        let n = fx.dim(p.max_dim);
        fx.generator(n)
    });
    for (label, a) in generators {
        let g = GeneratorSpec::new(a, label.clone());
        let mut worst: f64 = 0.0;
        for &(t, s) in &p.times {
            let u = evolution_operator(&g, t, s)?.propagator;
            let kappa = choose_kappa(&u)?;
            debug!("{label}: t = {t}, s = {s}, kappa = {kappa}");
            let recon = reconstruct_generator(&log_representation(&g, kappa, t, s)?)?;
            worst = worst.max(rel(&recon, &g.generator));
        }
        report.check(format!("{label}/reconstruction"), worst, p.tolerance);
    }
    Ok(report)
}

fn abstract_miura_suite(
    p: &AbstractMiuraParams,
    fx: &mut Fixtures,
    name: &str,
) -> std::result::Result<Report, CliError> {
    check_dim(p.max_dim)?;
    let mut report = Report::new(name);
    let generators = instances(fixture_matrices(&p.generators)?, p.instances, fx, sectorial_draw(p.max_dim));
    for (label, a) in generators {
        let g = SecondOrderGenerator::new(a);
        let kappa = choose_kappa_at(&g, p.t, p.s)?;
        let rep = pair_log_representation(&g, kappa, p.t, p.s)?;
        let direct_root = sqrtm_principal(g.acal())?;
        let mut products = Vec::new();
        for order in FactorOrder::BOTH {
            let product = abstract_miura(&rep, order)?;
            report.check(format!("{label}/{order}/product"), rel(&product, g.acal()), p.tolerance);
            let (plus, minus) = sqrt_generators(&rep, order)?;
            let squared = rel(&(&plus * &plus), &product).max(rel(&(&minus * &minus), &product));
            report.check(format!("{label}/{order}/root_squared"), squared, p.agreement_tolerance);
            report.check(format!("{label}/{order}/root_vs_sqrtm"), rel(&plus, &direct_root), p.sqrt_tolerance);
            products.push(product);
        }
        report.check(
            format!("{label}/orders_agree"),
            rel(&products[0], &products[1]),
            p.agreement_tolerance,
        );
    }
    Ok(report)
}

fn factorize(p: &FactorizeParams, fx: &mut Fixtures, name: &str) -> std::result::Result<Report, CliError> {
    check_dim(p.max_dim)?;
    if p.time_points < 2 {
        return Err(CliError::Config("time_points must be at least 2".into()));
    }
    let mut report = Report::new(name);
    let generators = instances(fixture_matrices(&p.generators)?, p.instances, fx, sectorial_draw(p.max_dim));
    for (label, a) in generators {
        let g = SecondOrderGenerator::new(a);
        merge(&mut report, &label, verify_factorization(&g, &p.t_samples)?);
        let n = g.dim();
        let (u0, v0) = (fx.complex_vector(n), fx.complex_vector(n));
        let modes = decompose_solution(&g, &u0, &v0)?;
        let mut worst: f64 = 0.0;
        for i in 0..p.time_points {
            let t = p.t_max * i as f64 / (p.time_points - 1) as f64;
            let (oracle, _) = solve_companion(&g, &u0, &v0, t, 0.0)?;
            let two = two_mode_solution(&g, &modes, t, 0.0)?;
            worst = worst.max((two - &oracle).norm() / (1.0 + oracle.norm()));
        }
        report.check(format!("{label}/two_mode_vs_companion"), worst, p.tolerance);
    }
    Ok(report)
}

/// `|b − a| / |a|`, or `|b|` when `a = 0`.
fn drift(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        b.abs()
    } else {
        (b - a).abs() / a.abs()
    }
}

fn soliton(p: &SolitonParams, name: &str) -> std::result::Result<(Report, Vec<Snapshot>), CliError> {
    let grid = Grid1D::periodic(p.n_points, p.length)?;
    let u0 = match p.initial {
        InitialData::Zero {} => Field::zeros(grid),
        InitialData::Constant { value } => Field::constant(grid, value),
        InitialData::KdvSoliton { c, x0 } => kdv_soliton(grid, c, x0)?,
        InitialData::KinkAntikink { b, x1, x2 } => mkdv_kink_antikink(grid, b, x1, x2)?,
    };
    let run = PdeRun::new(p.equation, p.dt, p.t_end, p.snapshot_every)?;
    info!("{} run: {} steps on n = {}", p.equation, run.step_count()?, p.n_points);
    let run = integrate(run, &u0)?;

    let mut report = Report::new(name);
    let (m0, e0) = (mass(&u0), energy(&u0));
    let (mut dm, mut de, mut imag): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in &run.snapshots {
        dm = dm.max(drift(m0, mass(&s.field)));
        de = de.max(drift(e0, energy(&s.field)));
        imag = imag.max(s.field.max_abs_imag());
    }
    report.check("mass_drift", dm, p.mass_tolerance);
    report.check("energy_drift", de, p.energy_tolerance);
    report.check("imaginary_part", imag, 1e-12);
    if let (Equation::KdV, InitialData::KdvSoliton { c, x0 }) = (p.equation, &p.initial) {
        let last = run.snapshots.last().expect("integrate stores the final state");
        let exact = kdv_soliton_at(grid, *c, *x0, last.time)?;
        report.check("profile_linf", last.field.linf_distance(&exact), p.profile_tolerance);
    }
    if p.equation == Equation::MKdV && run.snapshots.len() >= 5 {
        merge(&mut report, "miura", miura_maps_solutions(&run, p.miura_tolerance)?);
    }
    Ok((report, run.snapshots))
}

fn transform_chain(
    p: &TransformChainParams,
    fx: &mut Fixtures,
    name: &str,
) -> std::result::Result<Report, CliError> {
    let grid = Grid1D::window(p.n_points, p.x_min, p.length)?;
    let mut report = Report::new(name);
    for &b in &p.kink_b {
        let u = miura(&mkdv_kink(grid, b, p.x_min + p.length / 2.0)?);
        report.check(
            format!("kink b={b}/constant_image"),
            u.linf_distance(&Field::constant(grid, b * b)),
            p.kink_tolerance,
        );
        let psi = Field::from_fn(grid, |x| (b * (x - p.x_min - p.length / 2.0)).cosh());
        merge(&mut report, &format!("kink b={b}"), hirota_identity_residual(&psi, p.hirota_tolerance)?);
    }
    for i in 0..p.fields {
        let label = format!("field-{i:03}");
        let modes: Vec<(f64, f64, f64)> = (0..p.modes)
            .map(|_| (fx.uniform(-0.5, 0.5), fx.uniform(0.5, 2.0), fx.uniform(0.0, 2.0 * PI)))
            .collect();
        let v = |x: f64| modes.iter().map(|&(a, w, ph)| a * (w * x + ph).sin()).sum::<f64>();
        let dv = |x: f64| modes.iter().map(|&(a, w, ph)| a * w * (w * x + ph).cos()).sum::<f64>();
        let u = Field::from_fn(grid, |x| dv(x) + v(x) * v(x));
        let psi = solve_linear_x(&u, Complex64::new(1.0, 0.0), Complex64::new(v(grid.x_min), 0.0))?;
        let v_rec = cole_hopf(&psi)?;
        report.check(
            format!("{label}/v_recovered"),
            v_rec.linf_distance(&Field::from_fn(grid, v)),
            p.riccati_tolerance,
        );
        merge(&mut report, &label, riccati_residual(&u, &v_rec, p.riccati_tolerance)?);
        merge(&mut report, &label, hirota_identity_residual(&psi, p.hirota_tolerance)?);
    }
    Ok(report)
}
