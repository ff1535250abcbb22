//! Exact algebra of finite superpositions of multimode coherent states.
//!
//! A [`SuperpositionState`] is a list of `(coefficient, label)` pairs where each
//! [`CoherentLabel`] carries one complex amplitude per mode. Everything here is
//! evaluated from the coherent-state inner product
//!
//! ```text
//! <β|γ> = Π_k exp(-|β_k|²/2 - |γ_k|²/2 + conj(β_k) γ_k)
//! ```
//!
//! so no Fock-space truncation is involved. States are not required to be
//! normalised; every moment divides by the true norm.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Component-wise absolute tolerance under which two labels are merged.
pub const TOL_LABEL: f64 = 1e-12;

/// Relative tolerance on the imaginary part of physically real quantities.
pub const TOL_HERM: f64 = 1e-9;

/// Quadrature operators, fixed once for the whole crate.
///
/// `X = a + a†` generates the force displacement `D(iε) = exp(iεX)`;
/// `Y = -i(a - a†)` is the quadrature that is read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    Y,
}

impl Quadrature {
    /// Expectation value on the coherent state `|alpha>`.
    pub fn coherent_mean(self, alpha: Complex64) -> f64 {
        match self {
            Quadrature::X => 2.0 * alpha.re,
            Quadrature::Y => 2.0 * alpha.im,
        }
    }
}

/// Amplitudes of a multimode coherent state `|α_1, …, α_N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentLabel {
    amplitudes: Vec<Complex64>,
}

impl CoherentLabel {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("a coherent label needs at least one mode"));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("coherent amplitudes must be finite"));
        }
        Ok(CoherentLabel { amplitudes })
    }

    /// The same amplitude on each of `modes` modes.
    pub fn uniform(amplitude: Complex64, modes: usize) -> Result<Self> {
        Self::new(vec![amplitude; modes])
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::uniform(Complex64::new(0.0, 0.0), modes)
    }

    pub fn mode_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Largest `|α_k|` over the modes.
    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    fn coincides(&self, other: &CoherentLabel) -> bool {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a - b).norm() <= TOL_LABEL)
    }
}

/// Inner product `<a|b>` of two multimode coherent states.
pub fn overlap(a: &CoherentLabel, b: &CoherentLabel) -> Result<Complex64> {
    if a.mode_count() != b.mode_count() {
        return Err(Error::Dimension {
            expected: a.mode_count(),
            found: b.mode_count(),
        });
    }
    Ok(overlap_unchecked(a, b))
}

fn overlap_unchecked(a: &CoherentLabel, b: &CoherentLabel) -> Complex64 {
    // single exp of the summed exponent keeps the product from underflowing early
    let exponent: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| -0.5 * x.norm_sqr() - 0.5 * y.norm_sqr() + x.conj() * y)
        .sum();
    exponent.exp()
}

/// A finite superposition `Σ_i c_i |label_i>` of multimode coherent states.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    terms: Vec<(Complex64, CoherentLabel)>,
    mode_count: usize,
}

impl SuperpositionState {
    /// Builds a state, merging labels that coincide within [`TOL_LABEL`] and
    /// dropping terms whose coefficient is exactly zero.
    pub fn new(terms: Vec<(Complex64, CoherentLabel)>) -> Result<Self> {
        let mode_count = match terms.first() {
            Some((_, label)) => label.mode_count(),
            None => return Err(Error::Degenerate("empty superposition".into())),
        };
        let mut merged: Vec<(Complex64, CoherentLabel)> = Vec::with_capacity(terms.len());
        for (coeff, label) in terms {
            if label.mode_count() != mode_count {
                return Err(Error::Dimension {
                    expected: mode_count,
                    found: label.mode_count(),
                });
            }
            if !coeff.re.is_finite() || !coeff.im.is_finite() {
                return Err(Error::domain("coefficients must be finite"));
            }
            match merged.iter_mut().find(|(_, l)| l.coincides(&label)) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, label)),
            }
        }
        merged.retain(|(c, _)| *c != Complex64::new(0.0, 0.0));
        if merged.is_empty() {
            return Err(Error::Degenerate("all coefficients cancel".into()));
        }
        let state = SuperpositionState {
            terms: merged,
            mode_count,
        };
        state.norm_squared()?;
        Ok(state)
    }

    /// The single coherent state `|label>` with unit coefficient.
    pub fn coherent(label: CoherentLabel) -> Self {
        let mode_count = label.mode_count();
        SuperpositionState {
            terms: vec![(Complex64::new(1.0, 0.0), label)],
            mode_count,
        }
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Ok(Self::coherent(CoherentLabel::vacuum(modes)?))
    }

    pub fn terms(&self) -> &[(Complex64, CoherentLabel)] {
        &self.terms
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Largest amplitude magnitude over all labels and modes.
    pub fn max_abs_amplitude(&self) -> f64 {
        self.terms.iter().map(|(_, l)| l.max_abs()).fold(0.0, f64::max)
    }

    /// `Σ_ij conj(c_i) c_j f(β_i, γ_j) <β_i|γ_j>` together with the sum of
    /// magnitudes, which sets the scale for the hermiticity check.
    fn gram_sum<F>(&self, f: F) -> (Complex64, f64)
    where
        F: Fn(&[Complex64], &[Complex64]) -> Complex64,
    {
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (ci, li) in &self.terms {
            for (cj, lj) in &self.terms {
                let term = ci.conj() * cj * overlap_unchecked(li, lj) * f(&li.amplitudes, &lj.amplitudes);
                scale += term.norm();
                total += term;
            }
        }
        (total, scale)
    }

    fn real_part(value: Complex64, scale: f64, what: &str) -> Result<f64> {
        if value.im.abs() > TOL_HERM * scale.max(1.0) {
            return Err(Error::Consistency(format!(
                "{what} has imaginary part {:e} (real part {:e})",
                value.im, value.re
            )));
        }
        Ok(value.re)
    }

    /// `<s|s>`.
    pub fn norm_squared(&self) -> Result<f64> {
        let (value, scale) = self.gram_sum(|_, _| Complex64::new(1.0, 0.0));
        let norm = Self::real_part(value, scale, "norm")?;
        if norm <= TOL_HERM * scale {
            return Err(Error::Degenerate(format!(
                "norm squared {norm:e} is not resolvable against term scale {scale:e}"
            )));
        }
        Ok(norm)
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &SuperpositionState) -> Result<Complex64> {
        if self.mode_count != other.mode_count {
            return Err(Error::Dimension {
                expected: self.mode_count,
                found: other.mode_count,
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (ci, li) in &self.terms {
            for (cj, lj) in &other.terms {
                total += ci.conj() * cj * overlap_unchecked(li, lj);
            }
        }
        Ok(total)
    }

    /// `|<a|b>|² / (<a|a><b|b>)`, insensitive to global phase.
    pub fn fidelity(&self, other: &SuperpositionState) -> Result<f64> {
        let ip = self.inner_product(other)?;
        Ok(ip.norm_sqr() / (self.norm_squared()? * other.norm_squared()?))
    }

    /// Applies `D(β_1) ⊗ … ⊗ D(β_N)`.
    ///
    /// Uses `D(β)|γ> = exp(i Im(β conj(γ))) |γ + β>` term by term.
    pub fn displace(&self, betas: &[Complex64]) -> Result<SuperpositionState> {
        if betas.len() != self.mode_count {
            return Err(Error::Dimension {
                expected: self.mode_count,
                found: betas.len(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, label)| {
                let phase: f64 = betas
                    .iter()
                    .zip(&label.amplitudes)
                    .map(|(b, g)| (b * g.conj()).im)
                    .sum();
                let shifted = label
                    .amplitudes
                    .iter()
                    .zip(betas)
                    .map(|(g, b)| g + b)
                    .collect();
                (c * Complex64::from_polar(1.0, phase), CoherentLabel { amplitudes: shifted })
            })
            .collect();
        // a common shift cannot make distinct labels coincide
        Ok(SuperpositionState {
            terms,
            mode_count: self.mode_count,
        })
    }

    /// `<G> / <s|s>` for the collective generator `G = Σ_k (a_k + a_k†)`.
    ///
    /// `<β|(a_k + a_k†)|γ> = (γ_k + conj(β_k)) <β|γ>`.
    pub fn expect_generator(&self) -> Result<f64> {
        let norm = self.norm_squared()?;
        let (value, scale) = self.gram_sum(collective_shift);
        Ok(Self::real_part(value, scale, "<G>")? / norm)
    }

    /// `<G²> / <s|s>`.
    ///
    /// Normal ordering, with `a_k a_l† = a_l† a_k + δ_kl`:
    ///
    /// ```text
    /// G² = Σ_kl (a_k + a_k†)(a_l + a_l†)
    ///    = Σ_kl (a_k a_l + a_k† a_l† + a_k† a_l + a_l† a_k) + N
    /// ```
    ///
    /// Between coherent states every normal-ordered product becomes a product
    /// of amplitudes, so with `S = Σ_k (γ_k + conj(β_k))` the double sum
    /// collapses to `<β|G²|γ> = (S² + N) <β|γ>`.
    pub fn second_moment_generator(&self) -> Result<f64> {
        let norm = self.norm_squared()?;
        let n = self.mode_count as f64;
        let (value, scale) = self.gram_sum(|b, g| {
            let s = collective_shift(b, g);
            s * s + n
        });
        Ok(Self::real_part(value, scale, "<G²>")? / norm)
    }

    /// `Var(G) = <G²> - <G>²`; equals a quarter of the quantum Fisher
    /// information for the family `exp(iεG)|s>`.
    pub fn variance_generator(&self) -> Result<f64> {
        let mean = self.expect_generator()?;
        let second = self.second_moment_generator()?;
        let var = second - mean * mean;
        if var < -TOL_HERM * second.abs().max(1.0) {
            return Err(Error::Consistency(format!("negative generator variance {var:e}")));
        }
        Ok(var.max(0.0))
    }

    /// Total mean photon number `Σ_k <a_k† a_k> / <s|s>`.
    pub fn mean_photon_number(&self) -> Result<f64> {
        let norm = self.norm_squared()?;
        let (value, scale) = self.gram_sum(|b, g| b.iter().zip(g).map(|(x, y)| x.conj() * y).sum());
        let n = Self::real_part(value, scale, "<n>")? / norm;
        Ok(n.max(0.0))
    }
}

fn collective_shift(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(b, g)| g + b.conj()).sum()
}

/// The `N`-mode entangled cat `(|α,…,α> + |-α,…,-α>)/√2`.
///
/// The `1/√2` prefactor is kept as written; the true norm squared is
/// `1 + exp(-2Nα²)`. At `α = 0` both branches merge into the vacuum.
pub fn make_entangled_cat(alpha: f64, n_modes: usize) -> Result<SuperpositionState> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("cat amplitude must be finite and >= 0, got {alpha}")));
    }
    if n_modes == 0 {
        return Err(Error::domain("cat needs at least one mode"));
    }
    let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let a = Complex64::new(alpha, 0.0);
    SuperpositionState::new(vec![
        (c, CoherentLabel::uniform(a, n_modes)?),
        (c, CoherentLabel::uniform(-a, n_modes)?),
    ])
}
