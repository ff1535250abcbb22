use std::f64::consts::PI;
use std::path::PathBuf;

use catmetro_core::bounds::{self, curve, ProbeFamily};
use catmetro_core::coherent::make_entangled_cat;
use catmetro_core::estimation::{
    estimate_eps, ramsey_empirical_spread, ramsey_fisher, sample_homodyne, snr_estimate, HomodyneExperiment,
    HomodyneProbe, RamseyModel, RamseyScheme,
};
use catmetro_core::fock::{self, force_family, qfi_fidelity_fd, qfi_pure, required_dim, to_fock, OperatorMatrix};

use crate::config::FileConfig;
use crate::output::{loglog_svg, num, write_text, Series, Table};
use crate::{BoundsArgs, CliError, Figure1Args, GridArgs, MonteCarloArgs, QfiCheckArgs, RamseyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spacing {
    Linear,
    Log,
}

fn parse_spacing(s: &str) -> Result<Spacing, CliError> {
    match s {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        other => Err(CliError::Usage(format!("unknown spacing `{other}` (linear or log)"))),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Sweep over `n_tot`; both endpoints are hit exactly.
fn n_tot_grid(args: &GridArgs, file: &FileConfig) -> Result<Vec<f64>, CliError> {
    let min = args.ntot_min.or(file.ntot_min).unwrap_or(0.1);
    let max = args.ntot_max.or(file.ntot_max).unwrap_or(100.0);
    let points = args.points.or(file.points).unwrap_or(200);
    let spacing = parse_spacing(args.spacing.as_deref().or(file.spacing.as_deref()).unwrap_or("log"))?;
    if points < 2 {
        return Err(usage(format!("need at least 2 points, got {points}")));
    }
    if !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(usage(format!("need finite ntot-min < ntot-max, got {min} and {max}")));
    }
    if min < 0.0 {
        return Err(usage("ntot-min must be >= 0"));
    }
    if spacing == Spacing::Log && min <= 0.0 {
        return Err(usage("log spacing needs ntot-min > 0"));
    }
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => 10f64.powf(min.log10() + (max.log10() - min.log10()) * t),
            }
        })
        .collect();
    grid[0] = min;
    grid[points - 1] = max;
    Ok(grid)
}

fn out_path(flag: &Option<PathBuf>, file: &FileConfig) -> PathBuf {
    flag.clone().or_else(|| file.out.clone()).unwrap_or_else(|| PathBuf::from("-"))
}

pub fn figure1(args: &Figure1Args, file: &FileConfig) -> Result<(), CliError> {
    let n = args.n.or(file.n).unwrap_or(10);
    if n < 1 {
        return Err(usage("N must be >= 1"));
    }
    let grid = n_tot_grid(&args.grid, file)?;
    let entangled = curve(ProbeFamily::EntangledCat(n), &grid)?;
    let separable = curve(ProbeFamily::SeparableCats(n), &grid)?;
    let single = curve(ProbeFamily::SingleModeCat, &grid)?;

    let mut table = Table::new(&["n_tot", "eps_entangled", "eps_separable", "eps_single_cat", "alpha_entangled"]);
    for (((x, e), s), c) in grid.iter().zip(&entangled).zip(&separable).zip(&single) {
        table.row(&[
            num(*x),
            num(e.eps_min),
            num(s.eps_min),
            num(c.eps_min),
            num(e.alpha.unwrap_or(f64::NAN)),
        ]);
    }
    write_text(&out_path(&args.out, file), table.as_str())?;

    if let Some(svg_path) = args.svg.clone().or_else(|| file.svg.clone()) {
        let pts = |rows: &[bounds::BoundResult]| rows.iter().map(|r| (r.n_tot, r.eps_min)).collect();
        let entangled_label = format!("{n}-mode entangled cat");
        let separable_label = format!("{n} separable cats");
        let svg = loglog_svg(
            &format!("Minimum detectable displacement, N = {n}"),
            "n_tot",
            "eps_min",
            &[
                Series { label: &entangled_label, dash: None, points: pts(&entangled) },
                Series { label: &separable_label, dash: Some("2,4"), points: pts(&separable) },
                Series { label: "single-mode cat", dash: Some("8,5"), points: pts(&single) },
            ],
        );
        write_text(&svg_path, &svg)?;
    }
    Ok(())
}

fn parse_family(name: &str, n: usize) -> Result<ProbeFamily, CliError> {
    Ok(match name {
        "coherent" => ProbeFamily::CoherentSql,
        "squeezed" => ProbeFamily::Squeezed,
        "single_cat" => ProbeFamily::SingleModeCat,
        "separable_cats" => ProbeFamily::SeparableCats(n),
        "entangled_cat" => ProbeFamily::EntangledCat(n),
        other => return Err(usage(format!("unknown family `{other}`"))),
    })
}

pub fn bounds(args: &BoundsArgs, file: &FileConfig) -> Result<(), CliError> {
    let n = args.n.or(file.n).unwrap_or(10);
    let family = parse_family(args.family.as_deref().or(file.family.as_deref()).unwrap_or("entangled_cat"), n)?;
    let grid = n_tot_grid(&args.grid, file)?;
    let rows = curve(family, &grid)?;
    let mut table = Table::new(&["family", "N", "n_tot", "alpha", "eps_min", "qfi"]);
    for r in rows {
        table.row(&[
            r.family.name().to_string(),
            r.family.modes().to_string(),
            num(r.n_tot),
            num(r.alpha.unwrap_or(f64::NAN)),
            num(r.eps_min),
            num(r.qfi),
        ]);
    }
    write_text(&out_path(&args.out, file), table.as_str())
}

pub fn qfi_check(args: &QfiCheckArgs, file: &FileConfig) -> Result<(), CliError> {
    match args.grid.as_deref().or(file.grid.as_deref()).unwrap_or("default") {
        "default" => {}
        other => return Err(usage(format!("unknown grid `{other}`; only `default` is defined"))),
    }
    let ns = args.n_list.clone().or_else(|| file.n_list.clone()).unwrap_or_else(|| vec![1, 2, 3]);
    let alphas = args
        .alpha_list
        .clone()
        .or_else(|| file.alpha_list.clone())
        .unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
    let pure_tol = args.pure_tol.or(file.pure_tol).unwrap_or(1e-6);
    let fd_tol = args.fd_tol.or(file.fd_tol).unwrap_or(1e-3);
    let step = args.fd_step.or(file.fd_step).unwrap_or(1e-3);
    if let Some(&n) = ns.iter().find(|&&n| n > fock::MAX_MODES) {
        return Err(CliError::Capacity(format!(
            "N = {n} exceeds the oracle's {} modes",
            fock::MAX_MODES
        )));
    }

    let mut table = Table::new(&[
        "N",
        "alpha",
        "generator_variance",
        "qfi_analytic",
        "qfi_pure",
        "qfi_fd",
        "rel_err_pure",
        "rel_err_fd",
        "pass",
    ]);
    let mut failures = 0;
    for &n in &ns {
        for &alpha in &alphas {
            let variance = bounds::entangled_cat_generator_variance(alpha, n);
            let analytic = 4.0 * variance;
            let dim = required_dim(alpha);
            let state = to_fock(&make_entangled_cat(alpha, n)?, dim)?;
            let generator = OperatorMatrix::collective_generator(dim, n)?;
            let pure = qfi_pure(&state, &generator)?;
            let fd = qfi_fidelity_fd(force_family(state), 0.0, step)?;
            let err_pure = (pure / analytic - 1.0).abs();
            let err_fd = (fd / analytic - 1.0).abs();
            let pass = err_pure < pure_tol && err_fd < fd_tol;
            failures += usize::from(!pass);
            table.row(&[
                n.to_string(),
                num(alpha),
                num(variance),
                num(analytic),
                num(pure),
                num(fd),
                num(err_pure),
                num(err_fd),
                u8::from(pass).to_string(),
            ]);
        }
    }
    write_text(&out_path(&args.out, file), table.as_str())?;
    if failures > 0 {
        return Err(CliError::Capacity(format!("{failures} grid points outside tolerance")));
    }
    Ok(())
}

pub fn ramsey(args: &RamseyArgs, file: &FileConfig) -> Result<(), CliError> {
    let ns = args.n_list.clone().or_else(|| file.n_list.clone()).unwrap_or_else(|| vec![1, 2, 4, 8, 16]);
    let shots = args.shots.or(file.shots).unwrap_or(100_000);
    let seed = args.seed.or(file.seed).unwrap_or(42);
    let reps = args.replications.or(file.replications).unwrap_or(1000);
    let theta = args.theta.or(file.theta);

    let mut table = Table::new(&[
        "N",
        "scheme",
        "FI",
        "trials",
        "delta_theta",
        "empirical_stderr",
        "scaling_law",
    ]);
    let mut series = [Vec::new(), Vec::new()];
    for (row, (&n, scheme)) in ns
        .iter()
        .flat_map(|n| [(n, RamseyScheme::ProductState), (n, RamseyScheme::Ghz)])
        .enumerate()
    {
        let model = RamseyModel::new(scheme, n, theta.unwrap_or(PI / (4.0 * n as f64)))?;
        let fisher = ramsey_fisher(&model)?;
        let trials = shots * model.trials_per_shot();
        let predicted = 1.0 / (fisher * trials as f64).sqrt();
        let spread = ramsey_empirical_spread(&model, shots, reps, seed.wrapping_add(row as u64))?;
        let law = match scheme {
            RamseyScheme::ProductState => 1.0 / (n as f64).sqrt(),
            RamseyScheme::Ghz => 1.0 / n as f64,
        };
        series[usize::from(scheme == RamseyScheme::Ghz)].push((n as f64, spread));
        table.row(&[
            n.to_string(),
            scheme.name().to_string(),
            num(fisher),
            trials.to_string(),
            num(predicted),
            num(spread),
            num(law),
        ]);
    }
    write_text(&out_path(&args.out, file), table.as_str())?;
    if let Some(svg_path) = args.svg.clone().or_else(|| file.svg.clone()) {
        let [product, ghz] = series;
        let svg = loglog_svg(
            "Ramsey phase uncertainty",
            "N",
            "empirical delta_theta",
            &[
                Series { label: "product state", dash: Some("2,4"), points: product },
                Series { label: "GHZ", dash: None, points: ghz },
            ],
        );
        write_text(&svg_path, &svg)?;
    }
    Ok(())
}

pub fn montecarlo(args: &MonteCarloArgs, file: &FileConfig) -> Result<(), CliError> {
    let probe = match args.probe.as_deref().or(file.probe.as_deref()).unwrap_or("coherent") {
        "coherent" => HomodyneProbe::Coherent {
            alpha: args.alpha.or(file.alpha).unwrap_or(1.0),
        },
        "squeezed" => HomodyneProbe::Squeezed {
            r: args.r.or(file.r).unwrap_or(1.0),
        },
        other => return Err(usage(format!("unknown probe `{other}` (coherent or squeezed)"))),
    };
    let exp = HomodyneExperiment::new(
        probe,
        args.eps.or(file.eps).unwrap_or(0.3),
        args.shots.or(file.shots).unwrap_or(1_000_000),
        args.seed.or(file.seed).unwrap_or(7),
    )?;
    let samples = sample_homodyne(&exp);
    let est = estimate_eps(&samples, &probe)?;
    let snr = snr_estimate(&samples)?;
    let (name, parameter) = match probe {
        HomodyneProbe::Coherent { alpha } => ("coherent", alpha),
        HomodyneProbe::Squeezed { r } => ("squeezed", r),
    };
    let mut table = Table::new(&[
        "probe",
        "parameter",
        "n_tot",
        "true_eps",
        "shots",
        "seed",
        "eps_hat",
        "stderr",
        "model_stderr",
        "snr",
    ]);
    table.row(&[
        name.to_string(),
        num(parameter),
        num(probe.mean_photon_number()),
        num(exp.true_eps),
        exp.shots.to_string(),
        exp.seed.to_string(),
        num(est.eps_hat),
        num(est.stderr),
        num(est.model_stderr),
        num(snr),
    ]);
    write_text(&out_path(&args.out, file), table.as_str())
}
