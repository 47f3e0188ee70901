//! Generalized eigenvectors and closed-form stationary measures.
//!
//! Two reduced-matrix constructions are provided for a homogeneous walk
//! `U_A`, plus the four-case piecewise constructions for the one-defect
//! models built on `G^(φ)` (model I) and `A^(γ)` (model II).
//!
//! # Orientation
//!
//! The classical reduced-matrix formulas are written for the walk in which the
//! upper row of the coin feeds in from the right neighbour. [`crate::walk`]
//! uses the opposite orientation (upper row from the left neighbour). The two
//! operators are conjugate under chirality reversal `J`:
//! `U_A = J · Ũ_{JAJ} · J`. Every vector built here is therefore the classical
//! formula evaluated on `JAJ`, with its first and last components swapped
//! afterwards. Measures are unaffected, so the closed forms below are the
//! classical ones verbatim. For the persymmetric coins used by the models
//! (`JAJ = A`) this is just a component swap.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coins::{defect_family, generalized_grover, model_a, CoinError, CoinFamily, DefectSpec};
use crate::linalg3::{c64, cis, Complex64, Mat3, Vec3};
use crate::tolerance;
use crate::walk::{self, Generator, Measure, WalkError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StationaryError {
    #[error("coin entry a{row}{col} vanishes")]
    ZeroEntry { row: usize, col: usize },
    #[error("|a22| = 1 (got {modulus})")]
    CenterUnitModulus { modulus: f64 },
    #[error("eigenvalue formulas disagree: {first} vs {second}")]
    EigenvalueMismatch { first: Complex64, second: Complex64 },
    #[error("eigenvalue {lambda} is not on the unit circle")]
    EigenvalueNotUnit { lambda: Complex64 },
    #[error("λ² = {lambda_sq} differs from ã1·ã2 = {product}")]
    SquareCondition { lambda_sq: Complex64, product: Complex64 },
    #[error("seed is identically zero")]
    NullSeed,
    #[error("cos({name}) vanishes at {name} = {value}")]
    CosineVanishes { name: &'static str, value: f64 },
    #[error(transparent)]
    Coin(#[from] CoinError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

impl StationaryError {
    /// Short machine-readable name of the failed condition.
    pub fn condition(&self) -> &'static str {
        match self {
            StationaryError::ZeroEntry { .. } => "nonzero_entries",
            StationaryError::CenterUnitModulus { .. } => "center_entry_not_unimodular",
            StationaryError::EigenvalueMismatch { .. } => "eigenvalue_formulas_agree",
            StationaryError::EigenvalueNotUnit { .. } => "eigenvalue_unimodular",
            StationaryError::SquareCondition { .. } => "eigenvalue_square_condition",
            StationaryError::NullSeed => "nonzero_seed",
            StationaryError::CosineVanishes { .. } => "cosine_nonzero",
            StationaryError::Coin(CoinError::ThetaOutOfRange(_)) => "theta_in_open_unit_interval",
            StationaryError::Coin(CoinError::NotUnitary { .. }) => "coin_unitary",
            StationaryError::Walk(_) => "window",
        }
    }
}

/// Half-width of the window on which function seeds are probed for being
/// identically zero.
pub const SEED_PROBE: i64 = 1024;

/// Free function `x ↦ φ_x` for the function-seeded construction.
#[derive(Clone)]
pub enum AmplitudeSeq {
    /// Listed values; every other position takes `default`.
    Table { values: BTreeMap<i64, Complex64>, default: Complex64 },
    Function(Arc<dyn Fn(i64) -> Complex64 + Send + Sync>),
}

impl AmplitudeSeq {
    pub fn constant(value: Complex64) -> Self {
        AmplitudeSeq::Table { values: BTreeMap::new(), default: value }
    }

    /// 1 at `x0`, 0 elsewhere.
    pub fn delta(x0: i64) -> Self {
        AmplitudeSeq::Table { values: BTreeMap::from([(x0, c64(1.0, 0.0))]), default: c64(0.0, 0.0) }
    }

    pub fn table(values: BTreeMap<i64, Complex64>, default: Complex64) -> Self {
        AmplitudeSeq::Table { values, default }
    }

    pub fn from_fn(f: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Self {
        AmplitudeSeq::Function(Arc::new(f))
    }

    #[inline]
    pub fn at(&self, x: i64) -> Complex64 {
        match self {
            AmplitudeSeq::Table { values, default } => values.get(&x).copied().unwrap_or(*default),
            AmplitudeSeq::Function(f) => f(x),
        }
    }

    /// Exact for tables; function seeds are probed on `[−SEED_PROBE, SEED_PROBE]`.
    pub fn is_null(&self) -> bool {
        let zero = c64(0.0, 0.0);
        match self {
            AmplitudeSeq::Table { values, default } => *default == zero && values.values().all(|v| *v == zero),
            AmplitudeSeq::Function(f) => (-SEED_PROBE..=SEED_PROBE).all(|x| f(x) == zero),
        }
    }
}

impl fmt::Debug for AmplitudeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmplitudeSeq::Table { values, default } => {
                f.debug_struct("Table").field("values", values).field("default", default).finish()
            }
            AmplitudeSeq::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// The two free amplitudes `(φ₁, φ₃)`, not both zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoParamSeed {
    phi1: Complex64,
    phi3: Complex64,
}

impl TwoParamSeed {
    pub fn new(phi1: Complex64, phi3: Complex64) -> Result<Self, StationaryError> {
        if phi1.norm() + phi3.norm() > 0.0 {
            Ok(TwoParamSeed { phi1, phi3 })
        } else {
            Err(StationaryError::NullSeed)
        }
    }

    pub fn phi1(&self) -> Complex64 {
        self.phi1
    }

    pub fn phi3(&self) -> Complex64 {
        self.phi3
    }
}

/// A constructed candidate eigenpair together with the scalars used to
/// build it.
#[derive(Clone, Debug)]
pub struct EigenConstruction {
    pub lambda: Complex64,
    pub a1_tilde: Complex64,
    pub a2_tilde: Complex64,
    /// τ (model I) or ξ (model II), radians in `[0, 2π)`.
    pub angle: Option<f64>,
    /// `e^{2πiθ}` for the defect models.
    pub eta: Option<Complex64>,
    /// Eigenvalue quoted for the origin case of the piecewise constructions
    /// (`η e^{iτ}`). Diagnostic only.
    pub origin_lambda: Option<Complex64>,
    /// The walk the vector belongs to.
    pub family: CoinFamily,
    pub psi: Generator,
}

impl EigenConstruction {
    /// `ν(Ψ)` on `[lo, hi]`.
    pub fn measure(&self, lo: i64, hi: i64) -> Result<Measure, WalkError> {
        Ok(walk::measure(&walk::materialize(&self.psi, lo, hi)?))
    }

    pub fn stationarity_residual(&self, lo: i64, hi: i64, n_max: usize) -> Result<f64, WalkError> {
        walk::stationarity_residual(&self.family, &self.psi, lo, hi, n_max)
    }

    /// `‖UΨ − λΨ‖_max` on `[lo, hi]`.
    pub fn eigen_residual(&self, lo: i64, hi: i64) -> Result<f64, WalkError> {
        walk::eigen_residual(&self.family, &self.psi, self.lambda, lo, hi)
    }

    pub fn eigen_residuals(&self, lo: i64, hi: i64) -> Result<Vec<(i64, f64)>, WalkError> {
        walk::eigen_residuals(&self.family, &self.psi, self.lambda, lo, hi)
    }
}

/// Which closed form a [`ClosedFormMeasure`] implements, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureParams {
    Prop31 { phi: f64 },
    Model1 { phi: f64, theta: f64, phi1: Complex64, phi3: Complex64, tau: f64 },
    Model2 { gamma: f64, theta: f64, phi1: Complex64, phi3: Complex64, xi: f64 },
}

/// An explicit `x ↦ μ(x)`.
#[derive(Clone)]
pub struct ClosedFormMeasure {
    pub params: MeasureParams,
    eval: Arc<dyn Fn(i64) -> f64 + Send + Sync>,
}

impl ClosedFormMeasure {
    #[inline]
    pub fn at(&self, x: i64) -> f64 {
        (self.eval)(x)
    }

    pub fn on(&self, lo: i64, hi: i64) -> Measure {
        Measure::new(lo, (lo..=hi).map(|x| self.at(x)).collect())
    }
}

impl fmt::Debug for ClosedFormMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedFormMeasure").field("params", &self.params).finish()
    }
}

fn check_entries(a: &Mat3) -> Result<(), StationaryError> {
    for row in 0..3 {
        for col in 0..3 {
            if a[(row, col)].norm() <= tolerance::NONZERO_ENTRY {
                return Err(StationaryError::ZeroEntry { row: row + 1, col: col + 1 });
            }
        }
    }
    let modulus = a[(1, 1)].norm();
    if (modulus - 1.0).abs() <= tolerance::LEMMA {
        return Err(StationaryError::CenterUnitModulus { modulus });
    }
    Ok(())
}

fn check_eigenvalue_pair(first: Complex64, second: Complex64) -> Result<Complex64, StationaryError> {
    if (first - second).norm() > tolerance::LEMMA {
        return Err(StationaryError::EigenvalueMismatch { first, second });
    }
    if (first.norm() - 1.0).abs() > tolerance::LEMMA {
        return Err(StationaryError::EigenvalueNotUnit { lambda: first });
    }
    Ok(first)
}

fn check_cos(name: &'static str, value: f64) -> Result<(), StationaryError> {
    if value.cos().abs() > tolerance::COS_FLOOR {
        Ok(())
    } else {
        Err(StationaryError::CosineVanishes { name, value })
    }
}

/// `(ã₁, ã₂)` for the two-amplitude construction:
/// `ã₁ = a11 − a13 a21 / a23`, `ã₂ = a33 − a23 a31 / a21`.
fn tildes_two_amplitude(a: &Mat3) -> (Complex64, Complex64) {
    let t1 = a[(0, 0)] - a[(0, 2)] * a[(1, 0)] / a[(1, 2)];
    let t2 = a[(2, 2)] - a[(1, 2)] * a[(2, 0)] / a[(1, 0)];
    (t1, t2)
}

/// `(ã₁, ã₂)` for the function-seeded construction:
/// `ã₁ = a13 − a11 a23 / a21`, `ã₂ = a31 − a21 a33 / a23`.
fn tildes_function(a: &Mat3) -> (Complex64, Complex64) {
    let t1 = a[(0, 2)] - a[(0, 0)] * a[(1, 2)] / a[(1, 0)];
    let t2 = a[(2, 0)] - a[(1, 0)] * a[(2, 2)] / a[(1, 2)];
    (t1, t2)
}

/// Two-amplitude eigenvector of the homogeneous walk `U_A`, eigenvalue
/// `λ = −C/a13 = −D/a31`.
pub fn eigvec_lemma21(a: &Mat3, phi1: Complex64, phi3: Complex64) -> Result<EigenConstruction, StationaryError> {
    check_entries(a)?;
    let mn = a.minors();
    let lambda = check_eigenvalue_pair(-mn.c / a[(0, 2)], -mn.d / a[(2, 0)])?;
    let seed = TwoParamSeed::new(phi1, phi3)?;
    let family = CoinFamily::homogeneous(*a)?;
    let (a1_tilde, a2_tilde) = tildes_two_amplitude(a);

    let r = a.chirality_reversed();
    let lambda_r = -r.minors().c / r[(0, 2)];
    let (t1, t2) = tildes_two_amplitude(&r);
    let grow = lambda_r / t1;
    let decay = t2 / lambda_r;
    let pref = -r[(0, 2)] / (r[(0, 1)] * r[(1, 2)]);
    let (r21, r23) = (r[(1, 0)], r[(1, 2)]);
    let psi = Generator::new(move |x| {
        let p = grow.powi(x as i32) * seed.phi1;
        let q = decay.powi(x as i32) * seed.phi3;
        Vec3::new(p, pref * (r21 * p + r23 * q), q).reversed()
    });

    Ok(EigenConstruction {
        lambda,
        a1_tilde,
        a2_tilde,
        angle: None,
        eta: None,
        origin_lambda: None,
        family,
        psi,
    })
}

/// Function-seeded eigenvector of the homogeneous walk `U_A`, eigenvalue
/// `λ = B/a11 = E/a33` with `λ² = ã₁ ã₂`.
pub fn eigvec_lemma22(a: &Mat3, seq: &AmplitudeSeq) -> Result<EigenConstruction, StationaryError> {
    check_entries(a)?;
    let mn = a.minors();
    let lambda = check_eigenvalue_pair(mn.b / a[(0, 0)], mn.e / a[(2, 2)])?;
    let (a1_tilde, a2_tilde) = tildes_function(a);
    let lambda_sq = lambda * lambda;
    let product = a1_tilde * a2_tilde;
    if (lambda_sq - product).norm() > tolerance::LEMMA {
        return Err(StationaryError::SquareCondition { lambda_sq, product });
    }
    if seq.is_null() {
        return Err(StationaryError::NullSeed);
    }
    let family = CoinFamily::homogeneous(*a)?;

    let r = a.chirality_reversed();
    let lambda_r = r.minors().b / r[(0, 0)];
    let (t1, _) = tildes_function(&r);
    let ratio = lambda_r / t1;
    let pref = -r[(0, 0)] / (r[(0, 1)] * r[(1, 0)]);
    let (r21, r23) = (r[(1, 0)], r[(1, 2)]);
    let seq = seq.clone();
    let psi = Generator::new(move |x| {
        let here = seq.at(x);
        let prev = ratio * seq.at(x - 1);
        Vec3::new(here, pref * (r21 * here + r23 * prev), prev).reversed()
    });

    Ok(EigenConstruction {
        lambda,
        a1_tilde,
        a2_tilde,
        angle: None,
        eta: None,
        origin_lambda: None,
        family,
        psi,
    })
}

/// Eigenvector of the homogeneous `G^(φ)` walk seeded by `φ_x`; eigenvalue
/// `e^{−iφ}`.
pub fn prop31_eigvec(phi: f64, seq: &AmplitudeSeq) -> Result<EigenConstruction, StationaryError> {
    check_cos("phi", phi)?;
    eigvec_lemma22(&generalized_grover(phi), seq)
}

/// `μ(x) = 5/4 (|φ_x|² + |φ_{x−1}|²) + 1/2 Re(φ_x conj(φ_{x−1}))`.
pub fn prop31_measure(phi: f64, seq: &AmplitudeSeq) -> Result<ClosedFormMeasure, StationaryError> {
    check_cos("phi", phi)?;
    if seq.is_null() {
        return Err(StationaryError::NullSeed);
    }
    let seq = seq.clone();
    Ok(ClosedFormMeasure {
        params: MeasureParams::Prop31 { phi },
        eval: Arc::new(move |x| {
            let (cur, prev) = (seq.at(x), seq.at(x - 1));
            1.25 * (cur.norm_sqr() + prev.norm_sqr()) + 0.5 * (cur * prev.conj()).re
        }),
    })
}

/// Defect phase correction: `e^{2πiθ}` at `x = −1`, `e^{−2πiθ}` at `x = 1`,
/// `1` elsewhere.
pub fn delta(x: i64, theta: f64) -> Result<Complex64, StationaryError> {
    let d = DefectSpec::new(theta)?;
    Ok(delta_of(x, d))
}

fn delta_of(x: i64, d: DefectSpec) -> Complex64 {
    match x {
        -1 => d.phase(),
        1 => d.phase().conj(),
        _ => c64(1.0, 0.0),
    }
}

/// Outcome of the τ selection for model I.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauSelection {
    /// Radians in `[0, 2π)`.
    pub tau: f64,
    pub lambda: Complex64,
    /// Distance from `e^{iτ}` to the closest eigenvalue of the 3×3 coin.
    /// Zero only at `cos φ = ±1`.
    pub coin_eigenvalue_gap: f64,
}

/// `τ = arg(−C/a13)` of `G^(φ)`: the unimodular eigenvalue of the
/// homogeneous `G^(φ)` walk whose two-amplitude eigenvector has the bulk form
/// used by model I.
pub fn model1_tau(phi: f64) -> Result<TauSelection, StationaryError> {
    check_cos("phi", phi)?;
    let g = generalized_grover(phi);
    let raw = -g.minors().c / g[(0, 2)];
    if (raw.norm() - 1.0).abs() > tolerance::LEMMA {
        return Err(StationaryError::EigenvalueNotUnit { lambda: raw });
    }
    let tau = raw.arg().rem_euclid(2.0 * PI);
    let lambda = cis(tau);
    let coin_eigenvalue_gap = g
        .eigenvalues()
        .iter()
        .map(|ev| (ev - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    Ok(TauSelection { tau, lambda, coin_eigenvalue_gap })
}

/// `ξ ∈ [0, 2π)` with `e^{iξ} = (10 − 26 cos 2γ − 24 i sin 2γ) / (26 − 10 cos 2γ)`.
pub fn model2_xi(gamma: f64) -> Result<f64, StationaryError> {
    check_cos("gamma", gamma)?;
    Ok(model2_phase(gamma).arg().rem_euclid(2.0 * PI))
}

/// The unimodular number `e^{iξ(γ)}` straight from the rational formula.
pub fn model2_phase(gamma: f64) -> Complex64 {
    let (s2, c2) = (2.0 * gamma).sin_cos();
    c64(10.0 - 26.0 * c2, -24.0 * s2) / (26.0 - 10.0 * c2)
}

/// Four-case vector shared by both defect models.
///
/// `grow` is the bulk factor of the first amplitude and `decay` that of the
/// third; `η` enters the third amplitude at `x = 1` and the first at
/// `x = −1`.
fn four_case_generator(
    grow: Complex64,
    decay: Complex64,
    eta: Complex64,
    tan: f64,
    seed: TwoParamSeed,
) -> Generator {
    let pref = -c64(1.0, -1.5 * tan);
    let (f1, f3) = (seed.phi1, seed.phi3);
    Generator::new(move |x| {
        let (p, q) = match x {
            0 => (f1, f3),
            1 => (grow * f1, eta * decay * f3),
            -1 => (eta * decay * f1, grow * f3),
            _ => (grow.powi(x as i32) * f1, decay.powi(x as i32) * f3),
        };
        Vec3::new(p, pref * (p + q), q).reversed()
    })
}

/// Piecewise vector of the model I walk `x ↦ e^{2πiθδ_{x0}} G^(φ)`.
pub fn model1_eigvec(phi: f64, theta: f64, seed: TwoParamSeed) -> Result<EigenConstruction, StationaryError> {
    check_cos("phi", phi)?;
    let defect = DefectSpec::new(theta)?;
    let sel = model1_tau(phi)?;
    let base = generalized_grover(phi);
    let family = defect_family(base, defect)?;
    let eta = defect.phase();
    let grow = -cis(phi + sel.tau);
    let decay = -cis(-(phi + sel.tau));
    let (a1_tilde, a2_tilde) = tildes_two_amplitude(&base);
    Ok(EigenConstruction {
        lambda: sel.lambda,
        a1_tilde,
        a2_tilde,
        angle: Some(sel.tau),
        eta: Some(eta),
        origin_lambda: Some(eta * sel.lambda),
        family,
        psi: four_case_generator(grow, decay, eta, phi.tan(), seed),
    })
}

/// `μ(x) = (2 + 9/4 tan²φ)(|φ₁|² + |φ₃|²) + (2 + 9/2 tan²φ) Re(Δ(x) e^{2i(φ+τ)x} φ₁ conj(φ₃))`.
pub fn model1_measure(phi: f64, theta: f64, seed: TwoParamSeed) -> Result<ClosedFormMeasure, StationaryError> {
    check_cos("phi", phi)?;
    let defect = DefectSpec::new(theta)?;
    let tau = model1_tau(phi)?.tau;
    let eval = defect_measure(phi.tan(), phi + tau, defect, seed);
    Ok(ClosedFormMeasure {
        params: MeasureParams::Model1 { phi, theta, phi1: seed.phi1, phi3: seed.phi3, tau },
        eval,
    })
}

/// Piecewise vector of the model II walk `x ↦ e^{2πiθδ_{x0}} A^(γ)`.
pub fn model2_eigvec(gamma: f64, theta: f64, seed: TwoParamSeed) -> Result<EigenConstruction, StationaryError> {
    let xi = model2_xi(gamma)?;
    let defect = DefectSpec::new(theta)?;
    let base = model_a(gamma);
    let family = defect_family(base, defect)?;
    let eta = defect.phase();
    let lambda = cis(xi);
    let (a1_tilde, a2_tilde) = tildes_two_amplitude(&base);
    Ok(EigenConstruction {
        lambda,
        a1_tilde,
        a2_tilde,
        angle: Some(xi),
        eta: Some(eta),
        origin_lambda: Some(eta * lambda),
        family,
        psi: four_case_generator(-lambda, -lambda.conj(), eta, gamma.tan(), seed),
    })
}

/// `μ(x) = (2 + 9/4 tan²γ)(|φ₁|² + |φ₃|²) + (2 + 9/2 tan²γ) Re(Δ(x) e^{2iξx} φ₁ conj(φ₃))`.
pub fn model2_measure(gamma: f64, theta: f64, seed: TwoParamSeed) -> Result<ClosedFormMeasure, StationaryError> {
    let xi = model2_xi(gamma)?;
    let defect = DefectSpec::new(theta)?;
    let eval = defect_measure(gamma.tan(), xi, defect, seed);
    Ok(ClosedFormMeasure {
        params: MeasureParams::Model2 { gamma, theta, phi1: seed.phi1, phi3: seed.phi3, xi },
        eval,
    })
}

fn defect_measure(
    tan: f64,
    half_rate: f64,
    defect: DefectSpec,
    seed: TwoParamSeed,
) -> Arc<dyn Fn(i64) -> f64 + Send + Sync> {
    let t2 = tan * tan;
    let diag = (2.0 + 2.25 * t2) * (seed.phi1.norm_sqr() + seed.phi3.norm_sqr());
    let cross_coef = 2.0 + 4.5 * t2;
    let cross = seed.phi1 * seed.phi3.conj();
    Arc::new(move |x| {
        let phase = delta_of(x, defect) * cis(2.0 * half_rate * x as f64);
        diag + cross_coef * (phase * cross).re
    })
}

/// Closed form vs. constructed vector on a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOutcome {
    /// `max_x |μ(x) − ν(Ψ)(x)|`.
    pub agreement: f64,
    /// See [`walk::stationarity_residual`].
    pub stationarity: f64,
}

impl CheckOutcome {
    pub fn passes(&self, tol_agree: f64, tol_stat: f64) -> bool {
        self.agreement <= tol_agree && self.stationarity <= tol_stat
    }
}

pub fn check_construction(
    construction: &EigenConstruction,
    closed_form: &ClosedFormMeasure,
    lo: i64,
    hi: i64,
    n_max: usize,
) -> Result<CheckOutcome, StationaryError> {
    let nu = construction.measure(lo, hi)?;
    let agreement = nu
        .iter()
        .map(|(x, v)| (v - closed_form.at(x)).abs())
        .fold(0.0, f64::max);
    let stationarity = construction.stationarity_residual(lo, hi, n_max)?;
    Ok(CheckOutcome { agreement, stationarity })
}
