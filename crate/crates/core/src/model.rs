//! Coupling constants and two-point correlators of the XY chain with
//! Dzyaloshinsky-Moriya coupling.

use crate::error::{Error, Result};

/// Tolerance applied to the `|value| <= 1` bound of correlators.
pub const CORRELATOR_BOUND_TOL: f64 = 1e-9;

/// Point in the (J, gamma, D) coupling space.
///
/// `j` is the inverse transverse-field strength, `gamma` the xx/yy
/// anisotropy and `d` the Dzyaloshinsky-Moriya coupling along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub gamma: f64,
    pub d: f64,
}

impl ModelParams {
    pub fn new(j: f64, gamma: f64, d: f64) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::InvalidParameter {
                name: "J",
                value: j,
                reason: "must be finite",
            });
        }
        if !d.is_finite() {
            return Err(Error::InvalidParameter {
                name: "D",
                value: d,
                reason: "must be finite",
            });
        }
        if !(-1.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must lie in [-1, 1]",
            });
        }
        Ok(Self { j, gamma, d })
    }

    /// Same couplings with the anisotropy reversed.
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.j, gamma, self.d)
    }

    pub fn with_j(self, j: f64) -> Result<Self> {
        Self::new(j, self.gamma, self.d)
    }

    pub fn with_d(self, d: f64) -> Result<Self> {
        Self::new(self.j, self.gamma, d)
    }
}

/// Magnetization and the three diagonal two-point correlators at separation `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSet {
    pub r: usize,
    /// `<sigma^z_i>`
    pub mz: f64,
    /// `<sigma^x_i sigma^x_{i+r}>`
    pub xx: f64,
    /// `<sigma^y_i sigma^y_{i+r}>`
    pub yy: f64,
    /// `<sigma^z_i sigma^z_{i+r}>`
    pub zz: f64,
}

impl CorrelationSet {
    pub fn new(r: usize, mz: f64, xx: f64, yy: f64, zz: f64) -> Self {
        Self { r, mz, xx, yy, zz }
    }

    /// Checks `|field| <= 1` up to [`CORRELATOR_BOUND_TOL`].
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("mz", self.mz),
            ("xx", self.xx),
            ("yy", self.yy),
            ("zz", self.zz),
        ] {
            if !value.is_finite() || value.abs() > 1.0 + CORRELATOR_BOUND_TOL {
                return Err(Error::CorrelatorOutOfRange { name, value });
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> [f64; 4] {
        [self.mz, self.xx, self.yy, self.zz]
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &CorrelationSet) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_outside_unit_interval_rejected() {
        assert!(ModelParams::new(1.0, 1.0, 0.0).is_ok());
        assert!(ModelParams::new(1.0, -1.0, 3.0).is_ok());
        assert!(matches!(
            ModelParams::new(1.0, 1.5, 0.0),
            Err(Error::InvalidParameter { name: "gamma", .. })
        ));
        assert!(ModelParams::new(f64::NAN, 0.5, 0.0).is_err());
        assert!(ModelParams::new(0.5, 0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn negative_couplings_accepted() {
        let p = ModelParams::new(-2.0, -0.3, -1.0).unwrap();
        assert_eq!(p.j, -2.0);
    }

    #[test]
    fn correlation_bounds() {
        assert!(CorrelationSet::new(1, 1.0, 0.0, 0.0, 1.0).validate().is_ok());
        assert!(CorrelationSet::new(1, 1.0 + 1e-10, 0.0, 0.0, 1.0)
            .validate()
            .is_ok());
        assert!(matches!(
            CorrelationSet::new(1, 0.0, -1.1, 0.0, 1.0).validate(),
            Err(Error::CorrelatorOutOfRange { name: "xx", .. })
        ));
    }
}
