//! Coin matrices and position-dependent coin families.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg3::{c64, cis, Complex64, Mat3};
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoinError {
    #[error("base coin is not unitary (defect {defect:e} > {tol:e})")]
    NotUnitary { defect: f64, tol: f64 },
    #[error("theta must lie strictly inside (0, 1), got {0}")]
    ThetaOutOfRange(f64),
}

/// The Grover coin `(1/3)(−1 2 2; 2 −1 2; 2 2 −1)`.
pub fn grover() -> Mat3 {
    let third = 1.0 / 3.0;
    let two_thirds = 2.0 / 3.0;
    Mat3::from_real([
        [-third, two_thirds, two_thirds],
        [two_thirds, -third, two_thirds],
        [two_thirds, two_thirds, -third],
    ])
}

/// Generalized Grover coin `G^(φ)`; equals [`grover`] at `φ = 0`.
pub fn generalized_grover(phi: f64) -> Mat3 {
    let (s, c) = phi.sin_cos();
    let diag = c64(-c / 3.0, 0.0);
    let off = c64(2.0 * c / 3.0, 0.0);
    let anti = c64(2.0 * c / 3.0, -s);
    let center = c64(-c / 3.0, -s);
    Mat3::from_rows([[diag, off, anti], [off, center, off], [anti, off, diag]])
}

/// The one-parameter coin `A^(γ)`; equals [`grover`] at `γ = 0`.
///
/// Note `A^(γ) = e^{iγ} G^(γ)` entrywise.
pub fn model_a(gamma: f64) -> Mat3 {
    let w = cis(2.0 * gamma);
    let one = c64(1.0, 0.0);
    let sixth = 1.0 / 6.0;
    let corner = (-one - w) * sixth;
    let edge = (one + w) * (2.0 * sixth);
    let anti = (c64(5.0, 0.0) - w) * sixth;
    let center = (one - w * 2.0) * (2.0 * sixth);
    Mat3::from_rows([[corner, edge, anti], [edge, center, edge], [anti, edge, corner]])
}

/// Row split `M = upper + middle + lower`; each part keeps one row of `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinDecomposition {
    pub upper: Mat3,
    pub middle: Mat3,
    pub lower: Mat3,
}

impl CoinDecomposition {
    pub fn sum(&self) -> Mat3 {
        self.upper + self.middle + self.lower
    }
}

pub fn decompose(m: &Mat3) -> CoinDecomposition {
    let keep = |row: usize| {
        let mut part = Mat3::ZERO;
        part.0[row] = m.0[row];
        part
    };
    CoinDecomposition { upper: keep(0), middle: keep(1), lower: keep(2) }
}

/// Phase defect `e^{2πiθ}` at the origin, `θ ∈ (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefectSpec {
    theta: f64,
}

impl DefectSpec {
    pub fn new(theta: f64) -> Result<Self, CoinError> {
        // No tolerance: θ ∈ {0, 1} is the homogeneous walk.
        if theta > 0.0 && theta < 1.0 {
            Ok(DefectSpec { theta })
        } else {
            Err(CoinError::ThetaOutOfRange(theta))
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `η = e^{2πiθ}`.
    pub fn phase(&self) -> Complex64 {
        cis(2.0 * PI * self.theta)
    }
}

/// Anything that assigns a coin to every lattice site.
pub trait CoinField {
    fn coin(&self, x: i64) -> Mat3;
}

/// Homogeneous coin, optionally with a single phase defect at `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinFamily {
    base: Mat3,
    defect: Option<DefectSpec>,
    origin: Mat3,
}

impl CoinFamily {
    pub fn homogeneous(base: Mat3) -> Result<Self, CoinError> {
        check_unitary(&base)?;
        Ok(CoinFamily { base, defect: None, origin: base })
    }

    pub fn with_defect(base: Mat3, defect: DefectSpec) -> Result<Self, CoinError> {
        check_unitary(&base)?;
        Ok(CoinFamily { base, defect: Some(defect), origin: base.scale(defect.phase()) })
    }

    pub fn base(&self) -> &Mat3 {
        &self.base
    }

    pub fn defect(&self) -> Option<DefectSpec> {
        self.defect
    }
}

impl CoinField for CoinFamily {
    #[inline]
    fn coin(&self, x: i64) -> Mat3 {
        if x == 0 {
            self.origin
        } else {
            self.base
        }
    }
}

/// `x ↦ e^{2πiθ δ_{x,0}} · base`.
pub fn defect_family(base: Mat3, theta: DefectSpec) -> Result<CoinFamily, CoinError> {
    CoinFamily::with_defect(base, theta)
}

fn check_unitary(m: &Mat3) -> Result<(), CoinError> {
    let defect = m.unitarity_defect();
    if defect <= tolerance::UNITARY {
        Ok(())
    } else {
        Err(CoinError::NotUnitary { defect, tol: tolerance::UNITARY })
    }
}

/// Arbitrary position-dependent assignment. Not validated; intended for tests
/// and experiments outside the one-defect models.
#[derive(Clone)]
pub struct PositionCoins(Arc<dyn Fn(i64) -> Mat3 + Send + Sync>);

impl PositionCoins {
    pub fn new(f: impl Fn(i64) -> Mat3 + Send + Sync + 'static) -> Self {
        PositionCoins(Arc::new(f))
    }
}

impl CoinField for PositionCoins {
    fn coin(&self, x: i64) -> Mat3 {
        (self.0)(x)
    }
}

impl fmt::Debug for PositionCoins {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PositionCoins(..)")
    }
}
