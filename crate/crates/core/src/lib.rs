//! Spectral-Galerkin kernel for the 2D space-periodic Navier-Stokes equations
//! driven by a single-eigenvector force.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! - [`spectral`]: truncated Fourier fields, the Stokes operator powers and the
//!   bilinear term `B(u, v)`.
//! - [`dynamics`]: the truncated and shell-compressed Galerkin systems, an
//!   exponential RK4 integrator, balance residuals and the chained-ghost check.
//! - [`geometry`]: energy/enstrophy/palinstrophy diagnostics, moving frames,
//!   the Gram matrix of `(g, u, Au)`, chained coefficients and the `e`-`E` curves.
//! - [`constraints`]: the wavevector constraint system for forcing on the
//!   `|k|^2 = 2` shell and its zero/nonzero support propagation.
//!
//! Units are dimensionless with `nu = 1`, `kappa_0 = 1`, period `2 pi`. The
//! inner product is `(u, v) = sum_k u(k) . conj(v(k))`, i.e. the `L^2` product
//! divided by `(2 pi)^2`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod constraints;
pub mod dynamics;
pub mod geometry;
pub mod linalg;
pub mod sampling;
pub mod spectral;

pub use num_complex::Complex64;

pub use spectral::{
    apply_stokes_power, bilinear, eigenspace_project, inner, make_eigenforce, norm_as,
    EigenforceSpec, FieldError, ForceError, ScalarAmplitudeField, SpectralField, WaveVector,
};
