//! Randomized radial test fields: Gaussian mixtures with randomized
//! amplitudes, widths, centers, and quadratic phase chirps.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{RadialField, RadialGrid};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Shape of the random family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub bumps_min: usize,
    pub bumps_max: usize,
    pub amp_range: (f64, f64),
    pub width_range: (f64, f64),
    /// max bump center; 0 keeps every bump at the origin (smooth even fields)
    pub center_max: f64,
    /// max |β| of a global chirp e^{iβr²}; 0 for real-valued fields
    pub chirp_max: f64,
}

impl MixtureSpec {
    /// Even, real, origin-centered mixtures (regular radial profiles).
    pub fn even_real() -> Self {
        MixtureSpec {
            bumps_min: 2,
            bumps_max: 4,
            amp_range: (0.1, 1.2),
            width_range: (0.6, 3.0),
            center_max: 0.0,
            chirp_max: 0.0,
        }
    }

    /// General harness family: off-center bumps and chirps allowed.
    pub fn general() -> Self {
        MixtureSpec {
            bumps_min: 2,
            bumps_max: 4,
            amp_range: (0.1, 1.2),
            width_range: (0.5, 2.5),
            center_max: 4.0,
            chirp_max: 0.5,
        }
    }
}

/// Draw one mixture field on `grid`.
pub fn sample_mixture(
    grid: &Arc<RadialGrid>,
    spec: &MixtureSpec,
    rng: &mut ChaCha8Rng,
) -> Result<RadialField> {
    let bumps = rng.gen_range(spec.bumps_min..=spec.bumps_max);
    let mut parts = Vec::with_capacity(bumps);
    for _ in 0..bumps {
        let a = rng.gen_range(spec.amp_range.0..spec.amp_range.1);
        let w = rng.gen_range(spec.width_range.0..spec.width_range.1);
        let c = if spec.center_max > 0.0 { rng.gen_range(0.0..spec.center_max) } else { 0.0 };
        parts.push((a, w, c));
    }
    let beta = if spec.chirp_max > 0.0 {
        rng.gen_range(-spec.chirp_max..spec.chirp_max)
    } else {
        0.0
    };
    RadialField::from_fn(grid.clone(), move |r| {
        let mut v = 0.0;
        for &(a, w, c) in &parts {
            v += a * (-(r - c) * (r - c) / (2.0 * w * w)).exp();
        }
        Complex64::from_polar(v, beta * r * r)
    })
}
