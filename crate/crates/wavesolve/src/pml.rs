//! Uniaxial complex coordinate stretch and the material coefficient bundles
//! it induces in each ultraweak formulation.
//!
//! The stretch is identity on (0, l] and x + i (C/omega) ((x-l)/(L-l))^n
//! beyond, so its Jacobian is diagonal with entries of unit real part. All
//! coefficient bundles reduce to the identity wherever both Jacobian entries
//! are 1, which is what makes the layer reflectionless at the discrete
//! coefficient level.

use crate::error::{Result, SolverError};
use crate::{c64, C64};
use nalgebra::DMatrix;

/// Parameters of the uniaxial stretch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchProfile {
    /// Interior length: no stretching for coordinates in (0, l].
    pub l: f64,
    /// Domain length.
    pub big_l: f64,
    /// Amplitude C (dimensionless); C = 0 disables the layer.
    pub amplitude: f64,
    /// Exponent n >= 2 keeps the stretch C^1 at the interface.
    pub exponent: u32,
    pub omega: f64,
}

impl StretchProfile {
    pub fn new(l: f64, big_l: f64, amplitude: f64, exponent: u32, omega: f64) -> Result<Self> {
        if !(l > 0.0) || big_l < l {
            return Err(SolverError::Config(format!(
                "stretch needs 0 < l <= L, got l = {l}, L = {big_l}"
            )));
        }
        if amplitude < 0.0 {
            return Err(SolverError::Config("stretch amplitude C must be >= 0".into()));
        }
        if exponent < 2 && amplitude > 0.0 {
            return Err(SolverError::Config(
                "stretch exponent n must be >= 2 for a C^1 profile".into(),
            ));
        }
        if !(omega > 0.0) {
            return Err(SolverError::Config("omega must be positive".into()));
        }
        Ok(StretchProfile {
            l,
            big_l,
            amplitude,
            exponent,
            omega,
        })
    }

    /// Identity stretch (C = 0) over the same geometry.
    pub fn identity(l: f64, big_l: f64, omega: f64) -> Self {
        StretchProfile {
            l,
            big_l,
            amplitude: 0.0,
            exponent: 2,
            omega,
        }
    }

    /// Stretched coordinate and its derivative at a 1D coordinate.
    pub fn stretch_point(&self, x: f64) -> Result<(C64, C64)> {
        if !(x > 0.0) || x > self.big_l + 1e-12 * self.big_l {
            return Err(SolverError::Domain(format!(
                "coordinate {x} outside (0, {}]",
                self.big_l
            )));
        }
        if x <= self.l || self.amplitude == 0.0 {
            return Ok((c64(x, 0.0), c64(1.0, 0.0)));
        }
        let width = self.big_l - self.l;
        let t = (x - self.l) / width;
        let n = self.exponent;
        let f = self.amplitude / self.omega * t.powi(n as i32);
        let df = self.amplitude / self.omega * n as f64 * t.powi(n as i32 - 1) / width;
        Ok((c64(x, f), c64(1.0, df)))
    }

    /// Diagonal Jacobian of the 2D stretch at a point.
    pub fn jacobian_at(&self, point: (f64, f64)) -> Result<PmlPointData> {
        let (_, j1) = self.stretch_point(point.0)?;
        let (_, j2) = self.stretch_point(point.1)?;
        Ok(PmlPointData {
            j: [j1, j2],
            det_j: j1 * j2,
        })
    }
}

/// Diagonal Jacobian entries (j1, j2) and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmlPointData {
    pub j: [C64; 2],
    pub det_j: C64,
}

impl PmlPointData {
    pub fn is_identity(&self) -> bool {
        self.j[0] == c64(1.0, 0.0) && self.j[1] == c64(1.0, 0.0)
    }
}

/// Which variational formulation a coefficient bundle feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    #[serde(rename = "acoustics_A")]
    AcousticsA,
    #[serde(rename = "acoustics_B")]
    AcousticsB,
    #[serde(rename = "maxwell2d")]
    Maxwell2d,
    #[serde(rename = "elasticity2d")]
    Elasticity2d,
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Formulation::AcousticsA => "acoustics_A",
            Formulation::AcousticsB => "acoustics_B",
            Formulation::Maxwell2d => "maxwell2d",
            Formulation::Elasticity2d => "elasticity2d",
        };
        write!(f, "{s}")
    }
}

/// Per-point material coefficients of one formulation. Entries are stored
/// for a diagonal Jacobian; `dense_*` test oracles below validate them
/// against generic matrix evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientBundle {
    /// A_u = J^{-1} J^T J (diagonal: j1/j2, j2/j1) and a_p = det J.
    AcousticsA { a_u: [C64; 2], a_p: C64 },
    /// A = J^{-1} J (diagonal: 1/j2, 1/j1), b = 1/det J, and the
    /// test-gradient weight J^{-T} (diagonal: 1/j1, 1/j2).
    AcousticsB {
        a: [C64; 2],
        b: C64,
        grad_w: [C64; 2],
    },
    /// In-plane block m_e = diag(j2/j1, j1/j2) and out-of-plane entry
    /// m_h = det J of the 3D tensor det(J) J^{-1} J^{-T} with j3 = 1.
    Maxwell2d { m_e: [C64; 2], m_h: C64 },
    /// Raw Jacobian data; the elasticity assembly applies the scalar
    /// 1/det J, the inner J weight, the outer row weight, and the mass
    /// weight det J rho omega^2 through the Voigt contraction directly.
    Elasticity2d { j: [C64; 2], det_j: C64 },
}

pub fn coefficients(formulation: Formulation, pd: &PmlPointData) -> Result<CoefficientBundle> {
    let [j1, j2] = pd.j;
    if j1 == c64(0.0, 0.0) || j2 == c64(0.0, 0.0) {
        return Err(SolverError::Domain(
            "singular stretch: zero Jacobian entry".into(),
        ));
    }
    Ok(match formulation {
        Formulation::AcousticsA => CoefficientBundle::AcousticsA {
            a_u: [j1 / j2, j2 / j1],
            a_p: pd.det_j,
        },
        Formulation::AcousticsB => CoefficientBundle::AcousticsB {
            a: [c64(1.0, 0.0) / j2, c64(1.0, 0.0) / j1],
            b: c64(1.0, 0.0) / pd.det_j,
            grad_w: [c64(1.0, 0.0) / j1, c64(1.0, 0.0) / j2],
        },
        Formulation::Maxwell2d => CoefficientBundle::Maxwell2d {
            m_e: [j2 / j1, j1 / j2],
            m_h: pd.det_j,
        },
        Formulation::Elasticity2d => CoefficientBundle::Elasticity2d {
            j: pd.j,
            det_j: pd.det_j,
        },
    })
}

/// Dense-path oracle: A_u = J^{-1} J^T J evaluated with generic complex
/// matrices (no diagonal shortcuts).
pub fn dense_acoustics_a_weight(pd: &PmlPointData) -> DMatrix<C64> {
    let j = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![pd.j[0], pd.j[1]]));
    let det = pd.det_j;
    j.transpose() * &j / det
}

/// Dense-path oracle for the 3D Maxwell tensor det(J) J^{-1} J^{-T} with the
/// third stretch direction held at identity.
pub fn dense_maxwell_weight_3d(pd: &PmlPointData) -> DMatrix<C64> {
    let j = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        pd.j[0],
        pd.j[1],
        c64(1.0, 0.0),
    ]));
    let det = pd.det_j;
    let j_inv = j.clone().try_inverse().expect("diagonal with nonzero entries");
    j_inv.clone() * j_inv.transpose() * det
}
