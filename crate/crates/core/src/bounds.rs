//! Closed-form displacement bounds for the five probe families.
//!
//! Two normalisations appear and are kept apart by name:
//!
//! - [`eps_from_qfi`]: the single-shot Cramér–Rao form `1/√QFI`, with
//!   `QFI = 4 Var(G)`. The coherent-probe limit of 1/2 and
//!   [`eps_min_squeezed_exact`] use it.
//! - [`eps_from_generator_variance`]: `1/√Var(G)`, which is the normalisation
//!   of the printed squeezed, single-cat, separable-cat and entangled-cat
//!   formulas. The curve functions return those formulas as printed.
//!
//! The two differ by exactly a factor of two. [`BoundResult::qfi`] is always
//! `1/eps_min²`, i.e. the Fisher quantity in the normalisation of the row's
//! `eps_min`.

use crate::error::{Error, Result};

/// Suppression factor `exp(-x)` for the cat interference term; returns exactly
/// zero past `x = 700`.
pub fn cat_suppression(x: f64) -> f64 {
    if x > 700.0 {
        0.0
    } else {
        (-x).exp()
    }
}

pub fn eps_from_qfi(qfi: f64) -> f64 {
    1.0 / qfi.sqrt()
}

pub fn eps_from_generator_variance(variance: f64) -> f64 {
    1.0 / variance.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeFamily {
    CoherentSql,
    Squeezed,
    SingleModeCat,
    SeparableCats(usize),
    EntangledCat(usize),
}

impl ProbeFamily {
    /// Number of modes; 1 for the single-mode families.
    pub fn modes(&self) -> usize {
        match self {
            ProbeFamily::SeparableCats(n) | ProbeFamily::EntangledCat(n) => *n,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProbeFamily::CoherentSql => "coherent",
            ProbeFamily::Squeezed => "squeezed",
            ProbeFamily::SingleModeCat => "single_cat",
            ProbeFamily::SeparableCats(_) => "separable_cats",
            ProbeFamily::EntangledCat(_) => "entangled_cat",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ProbeFamily::SeparableCats(0) | ProbeFamily::EntangledCat(0) => {
                Err(Error::domain("multi-mode families need N >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// One point on a bound curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub family: ProbeFamily,
    pub n_tot: f64,
    /// Per-mode coherent amplitude, where the family has one.
    pub alpha: Option<f64>,
    pub eps_min: f64,
    /// `1/eps_min²`.
    pub qfi: f64,
}

impl BoundResult {
    fn new(family: ProbeFamily, n_tot: f64, alpha: Option<f64>, eps_min: f64) -> Self {
        BoundResult {
            family,
            n_tot,
            alpha,
            eps_min,
            qfi: 1.0 / (eps_min * eps_min),
        }
    }
}

/// Coherent-probe (standard quantum) limit.
pub fn eps_min_sql() -> f64 {
    0.5
}

/// `1/√(4 n_tot)`, the printed large-squeezing form.
pub fn eps_min_squeezed(n_tot: f64) -> Result<f64> {
    if !(n_tot > 0.0) {
        return Err(Error::domain(format!("squeezed bound needs n_tot > 0, got {n_tot}")));
    }
    Ok(1.0 / (4.0 * n_tot).sqrt())
}

/// Cramér–Rao value `1/√(4 Var X) = e^{-r}/2` for squeeze parameter `r`.
pub fn eps_min_squeezed_exact(r: f64) -> f64 {
    0.5 * (-r).exp()
}

/// `1/√Var(X) = e^{-r}`, the exact value in the printed normalisation.
pub fn eps_min_squeezed_exact_printed(r: f64) -> f64 {
    (-r).exp()
}

/// Mean photon number `sinh² r` of squeezed vacuum.
pub fn squeezed_photon_number(r: f64) -> f64 {
    r.sinh().powi(2)
}

/// `1/√(1 + 4 n_tot)`.
pub fn eps_min_single_cat(n_tot: f64) -> Result<f64> {
    if !(n_tot >= 0.0) {
        return Err(Error::domain(format!("n_tot must be >= 0, got {n_tot}")));
    }
    Ok(1.0 / (1.0 + 4.0 * n_tot).sqrt())
}

/// `1/√(N + 4 n_tot)` for `N` independent single-mode cats.
pub fn eps_min_separable_cats(n_tot: f64, n_modes: usize) -> Result<f64> {
    if n_modes < 1 {
        return Err(Error::domain("separable cats need N >= 1"));
    }
    if !(n_tot >= 0.0) {
        return Err(Error::domain(format!("n_tot must be >= 0, got {n_tot}")));
    }
    Ok(1.0 / (n_modes as f64 + 4.0 * n_tot).sqrt())
}

/// Generator variance `N [1 + 4Nα² / (1 + e^{-2Nα²})]` of the `N`-mode
/// entangled cat; the quantum Fisher information is four times this.
pub fn entangled_cat_generator_variance(alpha: f64, n_modes: usize) -> f64 {
    let n = n_modes as f64;
    let x = n * alpha * alpha;
    n * (1.0 + 4.0 * x / (1.0 + cat_suppression(2.0 * x)))
}

/// Total mean photon number `Nα² (1 - e^{-2Nα²}) / (1 + e^{-2Nα²})` of the
/// entangled cat.
pub fn entangled_cat_photon_number(alpha: f64, n_modes: usize) -> f64 {
    let x = n_modes as f64 * alpha * alpha;
    let s = cat_suppression(2.0 * x);
    x * (1.0 - s) / (1.0 + s)
}

/// Generator variance of a single-mode cat `|a> + |-a>`.
pub fn single_cat_generator_variance(alpha: f64) -> f64 {
    entangled_cat_generator_variance(alpha, 1)
}

/// Entangled-cat bound and photon number at amplitude `alpha`.
pub fn eps_min_entangled_cat(alpha: f64, n_modes: usize) -> Result<BoundResult> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if n_modes < 1 {
        return Err(Error::domain("entangled cat needs N >= 1"));
    }
    let eps = eps_from_generator_variance(entangled_cat_generator_variance(alpha, n_modes));
    Ok(BoundResult::new(
        ProbeFamily::EntangledCat(n_modes),
        entangled_cat_photon_number(alpha, n_modes),
        Some(alpha),
        eps,
    ))
}

/// Exact generator variance of `N` independent cats sharing `n_tot` equally,
/// each at the amplitude that gives it `n_tot / N` photons.
pub fn separable_cats_generator_variance_exact(n_tot: f64, n_modes: usize) -> Result<f64> {
    let alpha = invert_ntot(n_tot / n_modes as f64, 1)?;
    Ok(n_modes as f64 * single_cat_generator_variance(alpha))
}

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_WIDTH: f64 = 1e-14;

/// Per-mode amplitude `α >= 0` of the entangled cat with total photon number
/// `n_tot`.
///
/// The photon number equals `x tanh x` with `x = Nα²`, strictly increasing in
/// `α`, so bisection on `[0, √(n_tot/N) + 1]` always converges.
pub fn invert_ntot(n_tot: f64, n_modes: usize) -> Result<f64> {
    if n_modes < 1 {
        return Err(Error::domain("inversion needs N >= 1"));
    }
    if !(n_tot >= 0.0) || !n_tot.is_finite() {
        return Err(Error::domain(format!("n_tot must be finite and >= 0, got {n_tot}")));
    }
    if n_tot == 0.0 {
        return Ok(0.0);
    }
    let f = |a: f64| entangled_cat_photon_number(a, n_modes) - n_tot;
    let (mut lo, mut hi) = (0.0, (n_tot / n_modes as f64).sqrt() + 1.0);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= BISECTION_WIDTH * hi.max(1.0) {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if f(hi).abs() < f(lo).abs() { hi } else { lo })
}

/// One bound per grid point, in grid order.
pub fn curve(family: ProbeFamily, n_tot_grid: &[f64]) -> Result<Vec<BoundResult>> {
    family.validate()?;
    for (index, w) in n_tot_grid.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::Grid {
                index: index + 1,
                source: Box::new(Error::domain("grid must be strictly increasing")),
            });
        }
    }
    n_tot_grid
        .iter()
        .enumerate()
        .map(|(index, &n)| {
            point(family, n).map_err(|e| Error::Grid {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

fn point(family: ProbeFamily, n_tot: f64) -> Result<BoundResult> {
    if !(n_tot >= 0.0) || !n_tot.is_finite() {
        return Err(Error::domain(format!("n_tot must be finite and >= 0, got {n_tot}")));
    }
    Ok(match family {
        ProbeFamily::CoherentSql => BoundResult::new(family, n_tot, Some(n_tot.sqrt()), eps_min_sql()),
        ProbeFamily::Squeezed => BoundResult::new(family, n_tot, None, eps_min_squeezed(n_tot)?),
        ProbeFamily::SingleModeCat => {
            BoundResult::new(family, n_tot, Some(invert_ntot(n_tot, 1)?), eps_min_single_cat(n_tot)?)
        }
        ProbeFamily::SeparableCats(n) => BoundResult::new(
            family,
            n_tot,
            Some(invert_ntot(n_tot / n as f64, 1)?),
            eps_min_separable_cats(n_tot, n)?,
        ),
        ProbeFamily::EntangledCat(n) => {
            let alpha = invert_ntot(n_tot, n)?;
            let mut result = eps_min_entangled_cat(alpha, n)?;
            // report the requested n_tot rather than the round-tripped one
            result.n_tot = n_tot;
            result
        }
    })
}
