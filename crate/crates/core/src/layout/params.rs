use serde::{Deserialize, Serialize};

use super::LayoutError;
use crate::scalar::Scalar;

/// Force model knobs. Repulsion between every pair is `|charge| / d²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams<F> {
    /// Non-positive; its magnitude sets pairwise repulsion.
    pub charge: F,
    pub spring_constant: F,
    /// Spring rest length in pixels.
    pub rest_length: F,
    /// Pull toward `center`, proportional to distance.
    pub gravity: F,
    /// Velocity retention per step, in `(0, 1]`.
    pub damping: F,
    pub dt: F,
    pub center: [F; 2],
}

impl<F: Scalar> Default for LayoutParams<F> {
    /// Charge −30 in units of `rest_length²`, spring 0.1, rest length 30,
    /// gravity 0.05, damping 0.6, unit time step, centered on the origin.
    fn default() -> Self {
        let rest_length = F::of(30.0);
        LayoutParams {
            charge: F::of(-30.0) * rest_length * rest_length,
            spring_constant: F::of(0.1),
            rest_length,
            gravity: F::of(0.05),
            damping: F::of(0.6),
            dt: F::one(),
            center: [F::zero(), F::zero()],
        }
    }
}

impl<F: Scalar> LayoutParams<F> {
    /// Closest two nodes are treated as being when computing forces.
    pub fn min_separation(&self) -> F {
        F::of(1e-3) * self.rest_length
    }

    /// Per-node speed ceiling, 100 rest lengths per unit time.
    pub fn max_speed(&self) -> F {
        F::of(100.0) * self.rest_length / self.dt
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        let finite = [
            self.charge,
            self.spring_constant,
            self.rest_length,
            self.gravity,
            self.damping,
            self.dt,
            self.center[0],
            self.center[1],
        ]
        .iter()
        .all(|v| v.is_finite());
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(LayoutError::InvalidParams(what.to_owned()))
            }
        };
        check(finite, "all parameters must be finite")?;
        check(self.charge <= F::zero(), "charge must be <= 0")?;
        check(self.spring_constant > F::zero(), "spring_constant must be > 0")?;
        check(self.rest_length > F::zero(), "rest_length must be > 0")?;
        check(self.gravity >= F::zero(), "gravity must be >= 0")?;
        check(
            self.damping > F::zero() && self.damping <= F::one(),
            "damping must be in (0, 1]",
        )?;
        check(self.dt > F::zero(), "dt must be > 0")
    }
}
