//! Brute-force oracle in a truncated number basis.
//!
//! Vectors live in `C^(dim^N)` for `N ≤ 3` modes. Tensor ordering: mode 0 is
//! the slowest-varying index, so the basis state `|n_0, …, n_{N-1}>` sits at
//! `Σ_k n_k · dim^(N-1-k)`.
//!
//! Operators are kept as single-mode dense matrices together with their tensor
//! structure (one local factor, a product over modes, or a sum of local terms)
//! and applied fibre by fibre. A three-mode vector at `dim = 40` already has
//! 64000 entries, so the full `dim^N × dim^N` matrix is only materialised on
//! request for small sizes.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::coherent::{Quadrature, SuperpositionState};
use crate::error::{Error, Result};

pub const MAX_MODES: usize = 3;
pub const MAX_DIM: usize = 128;

/// Largest admissible probability mass on the top two number states.
pub const TAIL_TOL: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-10;
const DENSE_LIMIT: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Truncation dimension `ceil(|α|² + 8|α| + 20)` for amplitudes up to
/// `alpha_max`.
pub fn required_dim(alpha_max: f64) -> usize {
    let a = alpha_max.abs();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// A state vector in a truncated (tensor-product) number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
    dim: usize,
    mode_count: usize,
}

impl FockVector {
    pub fn new(amplitudes: Vec<Complex64>, dim: usize, mode_count: usize) -> Result<Self> {
        check_capacity(dim, mode_count)?;
        let expected = dim.pow(mode_count as u32);
        if amplitudes.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(FockVector {
            amplitudes,
            dim,
            mode_count,
        })
    }

    /// `|0, …, 0>`.
    pub fn vacuum(dim: usize, mode_count: usize) -> Result<Self> {
        check_capacity(dim, mode_count)?;
        let mut amplitudes = vec![ZERO; dim.pow(mode_count as u32)];
        amplitudes[0] = ONE;
        Self::new(amplitudes, dim, mode_count)
    }

    /// Tensor product `v_0 ⊗ v_1 ⊗ …` of single-mode vectors.
    pub fn tensor(factors: &[FockVector]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::domain("tensor product of no factors"))?;
        let dim = first.dim;
        let mut amplitudes = vec![ONE];
        for f in factors {
            if f.mode_count != 1 || f.dim != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: f.dim,
                });
            }
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| f.amplitudes.iter().map(move |b| a * b))
                .collect();
        }
        Self::new(amplitudes, dim, factors.len())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    fn check_same_space(&self, other: &FockVector) -> Result<()> {
        if self.dim != other.dim || self.mode_count != other.mode_count {
            return Err(Error::Dimension {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<FockVector> {
        let norm = self.norm_squared().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Degenerate("zero Fock vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> FockVector {
        FockVector {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
            dim: self.dim,
            mode_count: self.mode_count,
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        self.check_same_space(other)?;
        Ok(FockVector {
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
            dim: self.dim,
            mode_count: self.mode_count,
        })
    }

    /// `|<self|other>|² / (‖self‖² ‖other‖²)`.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr() / (self.norm_squared() * other.norm_squared()))
    }

    /// Largest relative probability, over modes, of finding that mode in one
    /// of its top two number states.
    pub fn tail_mass(&self) -> f64 {
        let total = self.norm_squared();
        if total == 0.0 || self.dim < 2 {
            return 0.0;
        }
        (0..self.mode_count)
            .map(|k| {
                let stride = self.dim.pow((self.mode_count - 1 - k) as u32);
                self.amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (i / stride) % self.dim >= self.dim - 2)
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>()
                    / total
            })
            .fold(0.0, f64::max)
    }
}

fn check_capacity(dim: usize, mode_count: usize) -> Result<()> {
    if mode_count == 0 || mode_count > MAX_MODES {
        return Err(Error::Capacity(format!(
            "{mode_count} modes; the oracle handles 1 to {MAX_MODES}"
        )));
    }
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Capacity(format!("dim {dim}; the oracle handles 1 to {MAX_DIM}")));
    }
    Ok(())
}

/// Truncated expansion `e^{-|α|²/2} Σ α^n/√n! |n>` of a coherent state.
pub fn coherent_vector(alpha: Complex64, dim: usize) -> Result<FockVector> {
    check_capacity(dim, 1)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::domain("coherent amplitude must be finite"));
    }
    // c_n = c_{n-1} α/√n; the recursion is continued past the cut so the
    // tail mass counts everything from n = dim - 2 upwards
    let mut amps = Vec::with_capacity(dim);
    let mut current = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut tail = 0.0;
    let mut n = 0usize;
    loop {
        if n < dim {
            amps.push(current);
        }
        if n + 2 >= dim {
            tail += current.norm_sqr();
        }
        n += 1;
        if n >= dim && n as f64 > alpha.norm_sqr() && current.norm_sqr() < 1e-32 {
            break;
        }
        current *= alpha / (n as f64).sqrt();
    }
    if tail >= TAIL_TOL {
        return Err(Error::Truncation { dim, tail });
    }
    FockVector::new(amps, dim, 1)
}

/// Momentum-squeezed vacuum with `Var(Y) = e^{-2r}` and `Var(X) = e^{2r}`.
///
/// Only even number states are populated:
/// `c_{2n} = tanh(r)^n √((2n)!) / (2^n n!) / √cosh(r)`.
pub fn squeezed_vector(r: f64, dim: usize) -> Result<FockVector> {
    check_capacity(dim, 1)?;
    if !r.is_finite() {
        return Err(Error::domain("squeeze parameter must be finite"));
    }
    let t = r.tanh();
    let first = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut amps = vec![ZERO; dim];
    let mut current = first;
    for m in 0..dim.div_ceil(2) {
        if m > 0 {
            let mf = m as f64;
            current *= t * ((2.0 * mf - 1.0) / (2.0 * mf)).sqrt();
        }
        amps[2 * m] = current;
    }
    // exact tail: total norm is one, so the tail is one minus the mass kept
    // below dim - 2, accumulated from the small end
    let kept: f64 = amps[..dim.saturating_sub(2)].iter().map(|a| a.norm_sqr()).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail >= TAIL_TOL {
        return Err(Error::Truncation { dim, tail });
    }
    FockVector::new(amps, dim, 1)
}

/// Expands a coherent superposition in the truncated basis.
pub fn to_fock(state: &SuperpositionState, dim: usize) -> Result<FockVector> {
    if state.mode_count() > MAX_MODES {
        return Err(Error::Capacity(format!(
            "{} modes; the oracle handles at most {MAX_MODES}",
            state.mode_count()
        )));
    }
    let mut total: Option<FockVector> = None;
    for (coeff, label) in state.terms() {
        let factors = label
            .amplitudes()
            .iter()
            .map(|a| coherent_vector(*a, dim))
            .collect::<Result<Vec<_>>>()?;
        let term = FockVector::tensor(&factors)?.scaled(*coeff);
        total = Some(match total {
            Some(acc) => acc.add(&term)?,
            None => term,
        });
    }
    total.ok_or_else(|| Error::Degenerate("empty superposition".into()))
}

/// What an [`OperatorMatrix`] represents.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorLabel {
    Annihilate(usize),
    Create(usize),
    QuadX(usize),
    QuadY(usize),
    Number(usize),
    Displacement(Vec<Complex64>),
    CollectiveG,
}

#[derive(Debug, Clone, PartialEq)]
enum Structure {
    /// `I ⊗ … ⊗ M ⊗ … ⊗ I` with `M` on one mode.
    Local { mode: usize, matrix: DMatrix<Complex64> },
    /// `M_0 ⊗ M_1 ⊗ …`.
    Product(Vec<DMatrix<Complex64>>),
    /// `Σ_k I ⊗ … ⊗ M_k ⊗ … ⊗ I`.
    Sum(Vec<DMatrix<Complex64>>),
}

/// A truncated operator on `dim^N`-dimensional vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    label: OperatorLabel,
    dim: usize,
    mode_count: usize,
    structure: Structure,
}

/// Single-mode annihilation operator, `a[n-1, n] = √n`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn quadrature_matrix(q: Quadrature, dim: usize) -> DMatrix<Complex64> {
    let a = annihilation(dim);
    let ad = a.adjoint();
    match q {
        Quadrature::X => &a + &ad,
        Quadrature::Y => (&a - &ad) * Complex64::new(0.0, -1.0),
    }
}

/// `D(β) = exp(β a† - conj(β) a)` on one truncated mode.
///
/// The exponent is anti-Hermitian, so `H = i(β a† - conj(β) a)` is Hermitian
/// and `D = V exp(-iΛ) V†` from its eigendecomposition; the truncated result is
/// unitary to working precision.
pub fn displacement_matrix(beta: Complex64, dim: usize) -> Result<OperatorMatrix> {
    check_capacity(dim, 1)?;
    Ok(OperatorMatrix {
        label: OperatorLabel::Displacement(vec![beta]),
        dim,
        mode_count: 1,
        structure: Structure::Product(vec![displacement_factor(beta, dim)?]),
    })
}

fn displacement_factor(beta: Complex64, dim: usize) -> Result<DMatrix<Complex64>> {
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::domain("displacement amplitude must be finite"));
    }
    let a = annihilation(dim);
    let generator = (a.adjoint() * beta - &a * beta.conj()) * Complex64::new(0.0, 1.0);
    // symmetrise away rounding so the eigensolver sees an exactly Hermitian input
    let hermitian = (&generator + generator.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(hermitian, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l)),
    );
    let v = eig.eigenvectors;
    Ok(&v * phases * v.adjoint())
}

impl OperatorMatrix {
    fn local(label: OperatorLabel, mode: usize, dim: usize, modes: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_capacity(dim, modes)?;
        if mode >= modes {
            return Err(Error::Dimension {
                expected: modes,
                found: mode + 1,
            });
        }
        Ok(OperatorMatrix {
            label,
            dim,
            mode_count: modes,
            structure: Structure::Local { mode, matrix },
        })
    }

    pub fn annihilate(mode: usize, dim: usize, modes: usize) -> Result<Self> {
        Self::local(OperatorLabel::Annihilate(mode), mode, dim, modes, annihilation(dim))
    }

    pub fn create(mode: usize, dim: usize, modes: usize) -> Result<Self> {
        Self::local(OperatorLabel::Create(mode), mode, dim, modes, annihilation(dim).adjoint())
    }

    pub fn quadrature(q: Quadrature, mode: usize, dim: usize, modes: usize) -> Result<Self> {
        let label = match q {
            Quadrature::X => OperatorLabel::QuadX(mode),
            Quadrature::Y => OperatorLabel::QuadY(mode),
        };
        Self::local(label, mode, dim, modes, quadrature_matrix(q, dim))
    }

    pub fn number(mode: usize, dim: usize, modes: usize) -> Result<Self> {
        let n = DMatrix::from_fn(dim, dim, |r, c| if r == c { Complex64::new(r as f64, 0.0) } else { ZERO });
        Self::local(OperatorLabel::Number(mode), mode, dim, modes, n)
    }

    /// `D(β_0) ⊗ D(β_1) ⊗ …`.
    pub fn displacement(betas: &[Complex64], dim: usize) -> Result<Self> {
        check_capacity(dim, betas.len())?;
        let factors = betas
            .iter()
            .map(|b| displacement_factor(*b, dim))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorMatrix {
            label: OperatorLabel::Displacement(betas.to_vec()),
            dim,
            mode_count: betas.len(),
            structure: Structure::Product(factors),
        })
    }

    /// The collective force generator `G = Σ_k (a_k + a_k†)`.
    pub fn collective_generator(dim: usize, modes: usize) -> Result<Self> {
        check_capacity(dim, modes)?;
        Ok(OperatorMatrix {
            label: OperatorLabel::CollectiveG,
            dim,
            mode_count: modes,
            structure: Structure::Sum(vec![quadrature_matrix(Quadrature::X, dim); modes]),
        })
    }

    pub fn label(&self) -> &OperatorLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    fn factors(&self) -> Vec<&DMatrix<Complex64>> {
        match &self.structure {
            Structure::Local { matrix, .. } => vec![matrix],
            Structure::Product(ms) | Structure::Sum(ms) => ms.iter().collect(),
        }
    }

    /// Hermitian iff every single-mode factor is (sufficient for all three
    /// structures).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.factors().iter().all(|m| max_abs_diff(m, &m.adjoint()) <= tol)
    }

    /// `max_k ‖U_k† U_k - I‖_max` over the single-mode factors.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors()
            .iter()
            .map(|m| max_abs_diff(&(m.adjoint() * *m), &DMatrix::identity(self.dim, self.dim)))
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.dim != self.dim || v.mode_count != self.mode_count {
            return Err(Error::Dimension {
                expected: self.dim.pow(self.mode_count as u32),
                found: v.amplitudes.len(),
            });
        }
        let amplitudes = match &self.structure {
            Structure::Local { mode, matrix } => apply_on_mode(&v.amplitudes, self.dim, self.mode_count, *mode, matrix),
            Structure::Product(ms) => ms.iter().enumerate().fold(v.amplitudes.clone(), |acc, (k, m)| {
                apply_on_mode(&acc, self.dim, self.mode_count, k, m)
            }),
            Structure::Sum(ms) => {
                let mut out = vec![ZERO; v.amplitudes.len()];
                for (k, m) in ms.iter().enumerate() {
                    for (o, x) in out.iter_mut().zip(apply_on_mode(&v.amplitudes, self.dim, self.mode_count, k, m)) {
                        *o += x;
                    }
                }
                out
            }
        };
        Ok(FockVector {
            amplitudes,
            dim: self.dim,
            mode_count: self.mode_count,
        })
    }

    /// Full `dim^N × dim^N` matrix; refused above 4096 rows.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let size = self.dim.pow(self.mode_count as u32);
        if size > DENSE_LIMIT {
            return Err(Error::Capacity(format!("dense operator of size {size}")));
        }
        let mut out = DMatrix::zeros(size, size);
        for col in 0..size {
            let mut e = vec![ZERO; size];
            e[col] = ONE;
            let image = self.apply(&FockVector::new(e, self.dim, self.mode_count)?)?;
            for (row, x) in image.amplitudes.into_iter().enumerate() {
                out[(row, col)] = x;
            }
        }
        Ok(out)
    }
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn apply_on_mode(amps: &[Complex64], dim: usize, modes: usize, mode: usize, m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let stride = dim.pow((modes - 1 - mode) as u32);
    let outer = dim.pow(mode as u32);
    // drop structural zeros once; ladder operators are bidiagonal
    let rows: Vec<Vec<(usize, Complex64)>> = (0..dim)
        .map(|r| (0..dim).filter_map(|c| (m[(r, c)] != ZERO).then(|| (c, m[(r, c)]))).collect())
        .collect();
    let mut out = vec![ZERO; amps.len()];
    for o in 0..outer {
        for i in 0..stride {
            let base = o * dim * stride + i;
            for (r, row) in rows.iter().enumerate() {
                let mut acc = ZERO;
                for &(c, x) in row {
                    acc += x * amps[base + c * stride];
                }
                out[base + r * stride] = acc;
            }
        }
    }
    out
}

/// `<v|O|v> / <v|v>`.
pub fn expectation(v: &FockVector, op: &OperatorMatrix) -> Result<Complex64> {
    let image = op.apply(v)?;
    Ok(v.inner(&image)? / v.norm_squared())
}

/// `<O²> - <O>²` for Hermitian `O`, with `<O²> = ‖O v‖² / ‖v‖²`.
pub fn variance(v: &FockVector, op: &OperatorMatrix) -> Result<f64> {
    if !op.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Contract(format!("{:?} is not Hermitian", op.label)));
    }
    let norm = v.norm_squared();
    if !(norm > 0.0) {
        return Err(Error::Degenerate("zero Fock vector".into()));
    }
    let image = op.apply(v)?;
    let mean = v.inner(&image)?.re / norm;
    let second = image.norm_squared() / norm;
    Ok((second - mean * mean).max(0.0))
}

/// Quantum Fisher information `4 Var(G)` of the pure family `exp(iεG)|v>`.
pub fn qfi_pure(state: &FockVector, generator: &OperatorMatrix) -> Result<f64> {
    Ok(4.0 * variance(state, generator)?)
}

/// Fidelity-based finite-difference estimate of the quantum Fisher information
/// of `family` at `eps0`.
///
/// `Q(δ) = 8 (1 - |<ψ(ε0)|ψ(ε0+δ)>|) / δ²` is even in `δ` up to `O(δ²)`
/// corrections, so one Richardson step over `δ` and `δ/2` removes them.
pub fn qfi_fidelity_fd<F>(family: F, eps0: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<FockVector>,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let base = family(eps0)?.normalized()?;
    let estimate = |delta: f64| -> Result<f64> {
        let moved = family(eps0 + delta)?.normalized()?;
        let deficit = 1.0 - base.inner(&moved)?.norm();
        if deficit < 1e-13 {
            return Err(Error::StepTooSmall { deficit });
        }
        Ok(8.0 * deficit / (delta * delta))
    };
    let coarse = estimate(step)?;
    let fine = estimate(0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `ε ↦ D(iε)^{⊗N} |v>`: the weak force acting on every mode of `v`.
pub fn force_family(v: FockVector) -> impl Fn(f64) -> Result<FockVector> {
    move |eps| {
        let betas = vec![Complex64::new(0.0, eps); v.mode_count()];
        OperatorMatrix::displacement(&betas, v.dim())?.apply(&v)
    }
}
