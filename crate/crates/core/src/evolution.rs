//! Unitary propagators `U(z) = exp(-iHz)` of real symmetric Hamiltonians.
//!
//! The exponential is taken through the eigendecomposition `H = Q Λ Qᵀ`, so
//! `U(z) = Q exp(-iΛz) Qᵀ`. A [`Spectrum`] keeps `(Q, Λ)` around so that scans
//! over many propagation lengths diagonalise only once.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest tolerated `|H - Hᵀ|` entry before a matrix is rejected.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Eigendecomposition of a real symmetric Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Real> {
    eigenvalues: DVector<T>,
    eigenvectors: DMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(h: &DMatrix<T>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch(format!("Hamiltonian is {}x{}", h.nrows(), h.ncols())));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("Hamiltonian has non-finite entries"));
        }
        let asymmetry = max_asymmetry(h);
        if asymmetry > T::lit(HERMITICITY_TOLERANCE) {
            return Err(Error::NotHermitian { asymmetry: asymmetry.as_f64() });
        }
        // symmetrise away sub-tolerance noise so Q is exactly orthogonal
        let sym = (h + h.transpose()) * T::lit(0.5);
        let eig = sym.symmetric_eigen();
        Ok(Spectrum { eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns.
    pub fn eigenvectors(&self) -> &DMatrix<T> {
        &self.eigenvectors
    }

    /// `U(z)` for this spectrum. `z = 0` returns the identity exactly.
    pub fn propagator(&self, z: T) -> Result<Propagator<T>> {
        if !(z >= T::zero()) || !z.is_finite() {
            return Err(Error::invalid("propagation length must be finite and non-negative"));
        }
        let n = self.dim();
        let u = if z == T::zero() {
            DMatrix::identity(n, n)
        } else {
            let q = self.eigenvectors.map(|x| Complex::new(x, T::zero()));
            let phases: Vec<Complex<T>> = self
                .eigenvalues
                .iter()
                .map(|&lambda| {
                    let theta = -lambda * z;
                    Complex::new(theta.cos(), theta.sin())
                })
                .collect();
            let mut scaled = q.clone();
            for (k, mut col) in scaled.column_iter_mut().enumerate() {
                col *= phases[k];
            }
            scaled * q.transpose()
        };
        Ok(Propagator { u, z, spectrum: Some(self.clone()) })
    }
}

/// Unitary transfer matrix from input-guide to output-guide amplitudes.
///
/// `u[(q_out, q_in)]` is the amplitude for a photon launched in `q_in` to leave
/// from `q_out`; creation operators evolve as `a†_{q'}(z) = Σ_q U_{q',q} a†_q(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator<T: Real> {
    u: DMatrix<Complex<T>>,
    z: T,
    spectrum: Option<Spectrum<T>>,
}

impl<T: Real> Propagator<T> {
    /// Wraps an arbitrary unitary (no spectrum attached, `z` set to zero).
    /// Fails if `u` is not square or deviates from unitarity by more than `tol`.
    pub fn from_unitary(u: DMatrix<Complex<T>>, tol: T) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch(format!("unitary is {}x{}", u.nrows(), u.ncols())));
        }
        let err = unitarity_error(&u);
        if !(err <= tol) {
            return Err(Error::invalid(format!("matrix is not unitary (error {:e})", err.as_f64())));
        }
        Ok(Propagator { u, z: T::zero(), spectrum: None })
    }

    pub fn identity(n: usize) -> Self {
        Propagator { u: DMatrix::identity(n, n), z: T::zero(), spectrum: None }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.u
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn spectrum(&self) -> Option<&Spectrum<T>> {
        self.spectrum.as_ref()
    }

    #[inline]
    pub fn amplitude(&self, out: usize, input: usize) -> Complex<T> {
        self.u[(out, input)]
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, len: self.dim() })
        }
    }
}

/// `exp(-i h z)` via a fresh eigendecomposition of `h`.
pub fn propagator<T: Real>(h: &DMatrix<T>, z: T) -> Result<Propagator<T>> {
    Spectrum::new(h)?.propagator(z)
}

/// Output intensities `|U_{q',input}|²` for one photon launched into `input`.
pub fn single_photon_distribution<T: Real>(p: &Propagator<T>, input: usize) -> Result<Vec<T>> {
    p.check_index(input)?;
    Ok(p.u.column(input).iter().map(|a| a.norm_sqr()).collect())
}

/// `max |U U† - I|` over all entries.
pub fn unitarity_error<T: Real>(u: &DMatrix<Complex<T>>) -> T {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) };
            worst = worst.max((prod[(i, j)] - target).norm_sqr().sqrt());
        }
    }
    worst
}

fn max_asymmetry<T: Real>(h: &DMatrix<T>) -> T {
    let n = h.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    worst
}
