use alloc::vec::Vec;


#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{norm_as, SpectralField};

use super::system::{Etdrk4, GalerkinSystem, RhsKind};
use super::DynamicsError;

/// Sampled solution `u(t)` together with `du/dt` at each sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub derivatives: Vec<SpectralField>,
}

impl Trajectory {
    /// Checks equal lengths and strictly increasing times.
    pub fn new(times: Vec<f64>, states: Vec<SpectralField>, derivatives: Vec<SpectralField>) -> Result<Self, DynamicsError> {
        if states.len() != times.len() || derivatives.len() != times.len() {
            return Err(DynamicsError::TooFewSamples {
                needed: times.len(),
                got: states.len().min(derivatives.len()),
            });
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(DynamicsError::InvalidParameter { name: "time", value: w[1] });
        }
        Ok(Self {
            times,
            states,
            derivatives,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn check_finite(state: &[num_complex::Complex64], t: f64) -> Result<(), DynamicsError> {
    if state.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
        Ok(())
    } else {
        Err(DynamicsError::NonFinite { t })
    }
}

/// Integrates from `u0` to `t_end` with fixed step `dt`, sampling every
/// `sample_every` steps and at the final time.
pub fn integrate(
    u0: &SpectralField,
    kind: RhsKind<'_>,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory, DynamicsError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidParameter { name: "T", value: t_end });
    }
    if sample_every == 0 {
        return Err(DynamicsError::InvalidParameter {
            name: "sample_every",
            value: 0.0,
        });
    }
    let (radius, force) = match kind {
        RhsKind::Full(g) => (u0.radius_sq().max(g.radius_sq()), g),
        RhsKind::Compressed(spec) => (spec.radius_sq(), spec.force()),
    };
    let sys = GalerkinSystem::new(kind, radius)?;
    let scheme = Etdrk4::new(&sys, dt)?;
    let mut state = sys.to_state(u0)?;
    check_finite(&state, 0.0)?;
    let guard = 1e3 * norm_as(force, 0.0).max(norm_as(u0, 0.0));
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut derivatives = Vec::new();
    let mut record = |t: f64, s: &[num_complex::Complex64]| {
        times.push(t);
        states.push(sys.to_field(s));
        derivatives.push(sys.to_field(&sys.rhs(s)));
    };
    record(0.0, &state);
    for n in 1..=steps {
        scheme.step(&sys, &mut state);
        let t = n as f64 * dt;
        check_finite(&state, t)?;
        if n % sample_every == 0 || n == steps {
            let norm = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > guard && guard > 0.0 {
                return Err(DynamicsError::BlowUp { t, norm });
            }
            record(t, &state);
        }
    }
    Ok(Trajectory {
        times,
        states,
        derivatives,
    })
}
