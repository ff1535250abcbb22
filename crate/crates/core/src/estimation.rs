//! Seeded measurement-level simulations.
//!
//! Random streams come from ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded with
//! `seed_from_u64(seed)`; replication `k` of an experiment uses stream `k` of
//! that seed via `set_stream(k)`. Gaussian draws use `rand_distr::Normal`,
//! outcome counts `rand_distr::Binomial`. Given the same seed, stream and crate
//! versions, every sample sequence is bit-identical.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};

use crate::error::{Error, Result};

/// RNG for replication `stream` of the experiment seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Gaussian probe read out by homodyne detection of `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HomodyneProbe {
    /// Coherent state with real amplitude `alpha`.
    Coherent { alpha: f64 },
    /// Momentum-squeezed vacuum with squeeze parameter `r`.
    Squeezed { r: f64 },
}

impl HomodyneProbe {
    /// `Var(Y)` of the undisplaced probe.
    pub fn quadrature_variance(&self) -> f64 {
        match self {
            HomodyneProbe::Coherent { .. } => 1.0,
            HomodyneProbe::Squeezed { r } => (-2.0 * r).exp(),
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        match self {
            HomodyneProbe::Coherent { alpha } => alpha * alpha,
            HomodyneProbe::Squeezed { r } => r.sinh().powi(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneExperiment {
    pub probe: HomodyneProbe,
    pub true_eps: f64,
    pub shots: usize,
    pub seed: u64,
}

impl HomodyneExperiment {
    pub fn new(probe: HomodyneProbe, true_eps: f64, shots: usize, seed: u64) -> Result<Self> {
        if shots < 1 {
            return Err(Error::domain("need at least one shot"));
        }
        if !(true_eps >= 0.0) || !true_eps.is_finite() {
            return Err(Error::domain(format!("true_eps must be finite and >= 0, got {true_eps}")));
        }
        let finite = match probe {
            HomodyneProbe::Coherent { alpha } => alpha.is_finite(),
            HomodyneProbe::Squeezed { r } => r.is_finite(),
        };
        if !finite {
            return Err(Error::domain("probe parameter must be finite"));
        }
        Ok(HomodyneExperiment {
            probe,
            true_eps,
            shots,
            seed,
        })
    }
}

/// `Y` outcomes after `D(iε)`: Gaussian with mean `2ε` and the probe's `Var(Y)`.
pub fn sample_homodyne(exp: &HomodyneExperiment) -> Vec<f64> {
    sample_homodyne_stream(exp, 0)
}

/// As [`sample_homodyne`], on replication stream `stream`.
pub fn sample_homodyne_stream(exp: &HomodyneExperiment, stream: u64) -> Vec<f64> {
    let mut rng = stream_rng(exp.seed, stream);
    let normal = Normal::new(2.0 * exp.true_eps, exp.probe.quadrature_variance().sqrt())
        .expect("standard deviation is finite and positive");
    (0..exp.shots).map(|_| normal.sample(&mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsEstimate {
    /// `mean / 2`.
    pub eps_hat: f64,
    /// `√(s² / shots) / 2` with the unbiased sample variance `s²`.
    pub stderr: f64,
    /// `√(Var(Y) / shots) / 2` from the probe model.
    pub model_stderr: f64,
}

fn mean_and_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, ss / (n - 1.0))
}

/// Moment estimator of the displacement from `Y` samples.
pub fn estimate_eps(samples: &[f64], probe: &HomodyneProbe) -> Result<EpsEstimate> {
    if samples.len() < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {}", samples.len())));
    }
    let shots = samples.len() as f64;
    let (mean, var) = mean_and_variance(samples);
    Ok(EpsEstimate {
        eps_hat: 0.5 * mean,
        stderr: 0.5 * (var / shots).sqrt(),
        model_stderr: 0.5 * (probe.quadrature_variance() / shots).sqrt(),
    })
}

/// Per-shot signal-to-noise ratio `mean / √variance`.
pub fn snr_estimate(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::domain("need at least 2 samples"));
    }
    let (mean, var) = mean_and_variance(samples);
    Ok(mean / var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RamseyScheme {
    /// `N` independent qubits in `(|0> + |1>)/√2`, each read out separately.
    ProductState,
    /// `(|0…0> + |1…1>)/√2`, one parity-type readout per shot.
    Ghz,
}

impl RamseyScheme {
    pub fn name(&self) -> &'static str {
        match self {
            RamseyScheme::ProductState => "product",
            RamseyScheme::Ghz => "ghz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyModel {
    pub scheme: RamseyScheme,
    pub n: usize,
    pub theta: f64,
}

impl RamseyModel {
    pub fn new(scheme: RamseyScheme, n: usize, theta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("Ramsey model needs N >= 1"));
        }
        if !theta.is_finite() {
            return Err(Error::domain("theta must be finite"));
        }
        Ok(RamseyModel { scheme, n, theta })
    }

    /// Factor multiplying `θ` in the fringe: 1 for product states, `N` for GHZ.
    pub fn phase_multiplier(&self) -> usize {
        match self.scheme {
            RamseyScheme::ProductState => 1,
            RamseyScheme::Ghz => self.n,
        }
    }

    /// Binary trials per shot: `N` single-qubit readouts, or one GHZ readout.
    pub fn trials_per_shot(&self) -> usize {
        match self.scheme {
            RamseyScheme::ProductState => self.n,
            RamseyScheme::Ghz => 1,
        }
    }

    /// `P(+|θ) = cos²(mθ)`.
    pub fn prob_plus(&self) -> f64 {
        (self.phase_multiplier() as f64 * self.theta).cos().powi(2)
    }

    /// Open window `(0, π/(2m))` on which `θ ↦ P(+|θ)` is invertible.
    pub fn identifiable_window(&self) -> (f64, f64) {
        (0.0, std::f64::consts::FRAC_PI_2 / self.phase_multiplier() as f64)
    }
}

/// Classical Fisher information of one binary trial at `θ`.
///
/// For `p = cos²(mθ)`, `(dp/dθ)² / (p(1-p)) = m² sin²(2mθ) / (sin²(mθ) cos²(mθ)) = 4m²`
/// wherever `p ∉ {0, 1}`; the closed form is returned.
pub fn ramsey_fisher(model: &RamseyModel) -> Result<f64> {
    let (s, c) = (model.phase_multiplier() as f64 * model.theta).sin_cos();
    if s.abs() < 1e-12 || c.abs() < 1e-12 {
        return Err(Error::SingularPoint(format!(
            "P(+|θ) is 0 or 1 at θ = {} for {:?}",
            model.theta, model.scheme
        )));
    }
    let m = model.phase_multiplier() as f64;
    Ok(4.0 * m * m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyEstimate {
    pub theta_hat: f64,
    /// `1/√(trials · FI(θ̂))` from the observed information.
    pub stderr: f64,
    pub successes: u64,
    pub trials: u64,
}

/// Simulates `shots` shots and inverts the observed `+` frequency.
pub fn ramsey_simulate(model: &RamseyModel, shots: usize, seed: u64) -> Result<RamseyEstimate> {
    ramsey_simulate_stream(model, shots, seed, 0)
}

/// As [`ramsey_simulate`], on replication stream `stream`.
pub fn ramsey_simulate_stream(model: &RamseyModel, shots: usize, seed: u64, stream: u64) -> Result<RamseyEstimate> {
    let (lo, hi) = model.identifiable_window();
    if !(model.theta > lo && model.theta < hi) {
        return Err(Error::domain(format!(
            "theta {} outside the identifiable window ({lo}, {hi})",
            model.theta
        )));
    }
    if shots < 1 {
        return Err(Error::domain("need at least one shot"));
    }
    let trials = (shots * model.trials_per_shot()) as u64;
    let binomial = Binomial::new(trials, model.prob_plus())
        .map_err(|e| Error::Numerical(format!("binomial law: {e}")))?;
    let successes = binomial.sample(&mut stream_rng(seed, stream));
    let p_hat = successes as f64 / trials as f64;
    if successes == 0 || successes == trials {
        return Err(Error::Boundary { frequency: p_hat });
    }
    let m = model.phase_multiplier() as f64;
    let theta_hat = p_hat.sqrt().acos() / m;
    let fisher = ramsey_fisher(&RamseyModel { theta: theta_hat, ..*model })?;
    Ok(RamseyEstimate {
        theta_hat,
        stderr: 1.0 / (trials as f64 * fisher).sqrt(),
        successes,
        trials,
    })
}

/// Sample standard deviation of `θ̂` over `replications` independent runs.
pub fn ramsey_empirical_spread(model: &RamseyModel, shots: usize, replications: usize, seed: u64) -> Result<f64> {
    if replications < 2 {
        return Err(Error::domain("need at least 2 replications"));
    }
    let estimates = (0..replications as u64)
        .map(|k| ramsey_simulate_stream(model, shots, seed, k).map(|e| e.theta_hat))
        .collect::<Result<Vec<_>>>()?;
    Ok(mean_and_variance(&estimates).1.sqrt())
}
