//! Evolution of wavefunctions on finite windows of ℤ.
//!
//! The one-step operator is
//!
//! ```text
//! [UΨ](x) = C_{x−1}^(u) Ψ(x−1) + C_x^(m) Ψ(x) + C_{x+1}^(l) Ψ(x+1)
//! ```
//!
//! i.e. the first chirality component of `UΨ(x)` is row 0 of `C_{x−1}`
//! applied to `Ψ(x−1)`, the middle one is row 1 of `C_x` applied to `Ψ(x)`,
//! and the last one is row 2 of `C_{x+1}` applied to `Ψ(x+1)`.
//!
//! Windows are never padded: applying `U` to values known on `[lo, hi]`
//! yields values known exactly on `[lo+1, hi−1]`. Wavefunctions that are not
//! square-summable (generalized eigenvectors) are handled through
//! [`Generator`], which is materialized on whatever window the light cone
//! requires.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coins::CoinField;
use crate::linalg3::{Complex64, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("empty window: lo = {lo} > hi = {hi}")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("window of length {len} cannot be stepped (need at least 3 sites)")]
    WindowTooShort { len: usize },
    #[error("window [{lo}, {hi}] too small for {steps} steps")]
    TooManySteps { lo: i64, hi: i64, steps: usize },
    #[error("n_max must be at least 1")]
    NoSteps,
    #[error("initial measure vanishes on [{lo}, {hi}]")]
    NullMeasure { lo: i64, hi: i64 },
}

/// A wavefunction on all of ℤ, given analytically.
#[derive(Clone)]
pub struct Generator(Arc<dyn Fn(i64) -> Vec3 + Send + Sync>);

impl Generator {
    pub fn new(f: impl Fn(i64) -> Vec3 + Send + Sync + 'static) -> Self {
        Generator(Arc::new(f))
    }

    #[inline]
    pub fn at(&self, x: i64) -> Vec3 {
        (self.0)(x)
    }

    /// `(1, 0, 0)`-type point mass at `x0`.
    pub fn point_mass(x0: i64, value: Vec3) -> Self {
        Generator::new(move |x| if x == x0 { value } else { Vec3::ZERO })
    }

    /// Same amplitudes with chirality components 0 and 2 exchanged.
    pub fn reversed(&self) -> Self {
        let inner = self.clone();
        Generator::new(move |x| inner.at(x).reversed())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Generator(..)")
    }
}

/// Values of a wavefunction on the inclusive window `[lo, lo + len − 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    lo: i64,
    values: Vec<Vec3>,
}

impl Window {
    pub fn new(lo: i64, values: Vec<Vec3>) -> Result<Self, WalkError> {
        if values.is_empty() {
            return Err(WalkError::EmptyWindow { lo, hi: lo - 1 });
        }
        Ok(Window { lo, values })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    pub fn get(&self, x: i64) -> Option<Vec3> {
        if x < self.lo || x > self.hi() {
            None
        } else {
            Some(self.values[(x - self.lo) as usize])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Vec3)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.lo + i as i64, *v))
    }

    /// Restriction to `[lo, hi]`, which must lie inside this window.
    pub fn slice(&self, lo: i64, hi: i64) -> Option<Window> {
        if lo > hi || lo < self.lo || hi > self.hi() {
            return None;
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Some(Window { lo, values: self.values[a..=b].to_vec() })
    }

    pub fn scale(&self, s: Complex64) -> Window {
        Window { lo: self.lo, values: self.values.iter().map(|v| v.scale(s)).collect() }
    }
}

/// Nonnegative weights `ν(x) = ‖Ψ(x)‖²` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    lo: i64,
    values: Vec<f64>,
}

impl Measure {
    pub fn new(lo: i64, values: Vec<f64>) -> Self {
        Measure { lo, values }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: i64) -> Option<f64> {
        if x < self.lo || x > self.hi() {
            None
        } else {
            Some(self.values[(x - self.lo) as usize])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.lo + i as i64, *v))
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `values[i] = gen(lo + i)`.
pub fn materialize(gen: &Generator, lo: i64, hi: i64) -> Result<Window, WalkError> {
    if lo > hi {
        return Err(WalkError::EmptyWindow { lo, hi });
    }
    Ok(Window { lo, values: (lo..=hi).map(|x| gen.at(x)).collect() })
}

/// One step of the walk. The result lives on `[lo+1, hi−1]`.
pub fn apply<F: CoinField + ?Sized>(family: &F, psi: &Window) -> Result<Window, WalkError> {
    let n = psi.len();
    if n < 3 {
        return Err(WalkError::WindowTooShort { len: n });
    }
    let v = &psi.values;
    let lo = psi.lo;
    // Coins are looked up once per site.
    let coins: Vec<_> = (0..n).map(|i| family.coin(lo + i as i64)).collect();
    let out = (1..n - 1)
        .map(|i| {
            Vec3([
                coins[i - 1].row_dot(0, &v[i - 1]),
                coins[i].row_dot(1, &v[i]),
                coins[i + 1].row_dot(2, &v[i + 1]),
            ])
        })
        .collect();
    Ok(Window { lo: lo + 1, values: out })
}

/// Apply `steps` times; every intermediate window is returned, starting with
/// `psi` itself.
pub fn trajectory<F: CoinField + ?Sized>(family: &F, psi: &Window, steps: usize) -> Result<Vec<Window>, WalkError> {
    if psi.len() < 2 * steps + 1 {
        return Err(WalkError::TooManySteps { lo: psi.lo(), hi: psi.hi(), steps });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(psi.clone());
    for _ in 0..steps {
        let next = apply(family, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Exact values of `Uⁿ Ψ` on `[center_lo, center_hi]`.
pub fn evolve_n<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    center_lo: i64,
    center_hi: i64,
    n: usize,
) -> Result<Window, WalkError> {
    evolve_padded(family, gen, center_lo, center_hi, n, n)
}

/// Like [`evolve_n`] but materializes `pad ≥ n` extra sites per side before
/// evolving. Results on the center window do not depend on `pad`.
pub fn evolve_padded<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    center_lo: i64,
    center_hi: i64,
    n: usize,
    pad: usize,
) -> Result<Window, WalkError> {
    if center_lo > center_hi {
        return Err(WalkError::EmptyWindow { lo: center_lo, hi: center_hi });
    }
    let pad = pad.max(n) as i64;
    let mut psi = materialize(gen, center_lo - pad, center_hi + pad)?;
    for _ in 0..n {
        psi = apply(family, &psi)?;
    }
    Ok(psi.slice(center_lo, center_hi).expect("light cone covers the center window"))
}

/// Pointwise squared norms.
pub fn measure(psi: &Window) -> Measure {
    Measure { lo: psi.lo, values: psi.values.iter().map(Vec3::norm_sqr).collect() }
}

/// `max_{1≤n≤n_max, x∈[lo,hi]} |ν(UⁿΨ)(x) − ν(Ψ)(x)| / max(1, ν(Ψ)(x))`.
pub fn stationarity_residual<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    lo: i64,
    hi: i64,
    n_max: usize,
) -> Result<f64, WalkError> {
    Ok(stationarity_profile(family, gen, lo, hi, n_max)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-step worst relative deviation; entry `n − 1` belongs to step `n`.
pub fn stationarity_profile<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    lo: i64,
    hi: i64,
    n_max: usize,
) -> Result<Vec<f64>, WalkError> {
    if n_max == 0 {
        return Err(WalkError::NoSteps);
    }
    if lo > hi {
        return Err(WalkError::EmptyWindow { lo, hi });
    }
    let pad = n_max as i64;
    let mut psi = materialize(gen, lo - pad, hi + pad)?;
    let nu0 = measure(&psi.slice(lo, hi).expect("inside"));
    if nu0.values().iter().all(|&v| v == 0.0) {
        return Err(WalkError::NullMeasure { lo, hi });
    }
    let mut per_step = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        psi = apply(family, &psi)?;
        // Each step shrinks the window by one site per side, which is exactly
        // what one application of U consumes.
        let nu = measure(&psi.slice(lo, hi).expect("inside light cone"));
        let worst = nu
            .values()
            .iter()
            .zip(nu0.values())
            .map(|(now, start)| (now - start).abs() / start.max(1.0))
            .fold(0.0, f64::max);
        per_step.push(worst);
    }
    Ok(per_step)
}

/// `|[UΨ](x) − λΨ(x)|_max` for every `x ∈ [lo, hi]`.
pub fn eigen_residuals<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    lambda: Complex64,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, f64)>, WalkError> {
    let psi = materialize(gen, lo - 1, hi + 1)?;
    let next = apply(family, &psi)?;
    Ok(next
        .iter()
        .map(|(x, v)| (x, v.max_abs_diff(&psi.get(x).expect("inside").scale(lambda))))
        .collect())
}

/// Largest entry of [`eigen_residuals`].
pub fn eigen_residual<F: CoinField + ?Sized>(
    family: &F,
    gen: &Generator,
    lambda: Complex64,
    lo: i64,
    hi: i64,
) -> Result<f64, WalkError> {
    Ok(eigen_residuals(family, gen, lambda, lo, hi)?
        .into_iter()
        .map(|(_, r)| r)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{grover, CoinFamily, PositionCoins};
    use crate::linalg3::{c64, cis, Mat3};
    use proptest::prelude::*;

    fn grover_walk() -> CoinFamily {
        CoinFamily::homogeneous(grover()).unwrap()
    }

    #[test]
    fn materialize_constant_and_linear() {
        let one = Generator::new(|_| Vec3::real(1.0, 0.0, 0.0));
        let w = materialize(&one, -2, 2).unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.values().iter().all(|v| *v == Vec3::real(1.0, 0.0, 0.0)));

        let lin = Generator::new(|x| Vec3::real(x as f64, 0.0, 0.0));
        let w = materialize(&lin, 0, 1).unwrap();
        assert_eq!(w.values(), &[Vec3::real(0.0, 0.0, 0.0), Vec3::real(1.0, 0.0, 0.0)]);

        assert!(matches!(materialize(&one, 3, 2), Err(WalkError::EmptyWindow { .. })));
    }

    #[test]
    fn apply_point_mass_under_grover() {
        let psi = materialize(&Generator::point_mass(0, Vec3::real(1.0, 0.0, 0.0)), -3, 3).unwrap();
        let out = apply(&grover_walk(), &psi).unwrap();
        assert_eq!((out.lo(), out.hi()), (-2, 2));
        let close = |a: Vec3, b: Vec3| a.max_abs_diff(&b) < 1e-15;
        assert!(close(out.get(1).unwrap(), Vec3::real(-1.0 / 3.0, 0.0, 0.0)));
        assert!(close(out.get(0).unwrap(), Vec3::real(0.0, 2.0 / 3.0, 0.0)));
        assert!(close(out.get(-1).unwrap(), Vec3::real(0.0, 0.0, 2.0 / 3.0)));
        assert!((measure(&out).total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn apply_identity_routes_components() {
        let id = CoinFamily::homogeneous(Mat3::IDENTITY).unwrap();
        let gen = Generator::new(|x| {
            let t = x as f64;
            Vec3::new(c64(t, 1.0), c64(2.0 * t, -t), c64(t * t, 0.5))
        });
        let psi = materialize(&gen, -4, 4).unwrap();
        let out = apply(&id, &psi).unwrap();
        for (x, v) in out.iter() {
            let want = Vec3::new(gen.at(x - 1)[0], gen.at(x)[1], gen.at(x + 1)[2]);
            assert_eq!(v, want);
        }
    }

    #[test]
    fn apply_rejects_short_windows() {
        let psi = Window::new(0, vec![Vec3::ZERO; 2]).unwrap();
        assert_eq!(apply(&grover_walk(), &psi), Err(WalkError::WindowTooShort { len: 2 }));
    }

    #[test]
    fn evolve_zero_steps_is_materialize() {
        let gen = Generator::new(|x| Vec3::real(x as f64, 1.0, -1.0));
        assert_eq!(evolve_n(&grover_walk(), &gen, -3, 4, 0).unwrap(), materialize(&gen, -3, 4).unwrap());
    }

    #[test]
    fn evolve_two_steps_point_mass() {
        let gen = Generator::point_mass(0, Vec3::real(1.0, 0.0, 0.0));
        let out = evolve_n(&grover_walk(), &gen, -4, 4, 2).unwrap();
        for (x, v) in out.iter() {
            if x.abs() > 2 {
                assert_eq!(v, Vec3::ZERO);
            }
        }
        assert!((measure(&out).total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_values() {
        let psi = Window::new(0, vec![Vec3::new(c64(1.0, 0.0), c64(0.0, 2.0), c64(0.0, 0.0))]).unwrap();
        assert_eq!(measure(&psi).values(), &[5.0]);
        let ones = materialize(&Generator::new(|_| Vec3::real(1.0, 0.0, 0.0)), -3, 3).unwrap();
        assert!(measure(&ones).values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn point_mass_is_not_stationary() {
        let gen = Generator::point_mass(0, Vec3::real(0.0, 1.0, 0.0));
        let r = stationarity_residual(&grover_walk(), &gen, -3, 3, 1).unwrap();
        // ν(0) drops from 1 to 1/9.
        assert!(r >= 0.5, "{r}");
    }

    #[test]
    fn stationarity_residual_errors() {
        let gen = Generator::point_mass(0, Vec3::real(1.0, 0.0, 0.0));
        assert_eq!(stationarity_residual(&grover_walk(), &gen, -2, 2, 0), Err(WalkError::NoSteps));
        assert!(matches!(
            stationarity_residual(&grover_walk(), &gen, 5, 9, 2),
            Err(WalkError::NullMeasure { .. })
        ));
    }

    #[test]
    fn trajectory_guards_window() {
        let psi = Window::new(0, vec![Vec3::ZERO; 5]).unwrap();
        assert!(trajectory(&grover_walk(), &psi, 2).is_ok());
        assert!(matches!(trajectory(&grover_walk(), &psi, 3), Err(WalkError::TooManySteps { .. })));
    }

    #[test]
    fn scaled_eigenvector_measure_is_stationary() {
        // Constant (1, 1, 1) is a λ = 1 eigenvector of the Grover walk.
        let gen = Generator::new(|_| Vec3::real(1.0, 1.0, 1.0));
        let eps = eigen_residual(&grover_walk(), &gen, c64(1.0, 0.0), -5, 5).unwrap();
        assert!(eps < 1e-15);
        let r = stationarity_residual(&grover_walk(), &gen, -5, 5, 10).unwrap();
        assert!(r <= 3.0 * eps.max(1e-16) + 1e-14);
    }

    fn random_coin(phases: [f64; 4]) -> Mat3 {
        let d = Mat3([
            [cis(phases[0]), c64(0.0, 0.0), c64(0.0, 0.0)],
            [c64(0.0, 0.0), cis(phases[1]), c64(0.0, 0.0)],
            [c64(0.0, 0.0), c64(0.0, 0.0), cis(phases[2])],
        ]);
        d * crate::coins::generalized_grover(phases[3]) * d.adjoint()
    }

    proptest! {
        #[test]
        fn norm_is_preserved(
            amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
            phases in prop::array::uniform4(0.0f64..6.3),
            steps in 1usize..6,
        ) {
            // Site-dependent coins; finite support [0, 2] padded with zeros.
            let coins = PositionCoins::new(move |x| random_coin([
                phases[0] + x as f64, phases[1] * x as f64, phases[2], phases[3] + 0.1 * x as f64,
            ]));
            let support: Vec<Vec3> = amps
                .chunks(3)
                .map(|c| Vec3::new(c64(c[0].0, c[0].1), c64(c[1].0, c[1].1), c64(c[2].0, c[2].1)))
                .collect();
            let gen = Generator::new(move |x| if (0..3).contains(&x) { support[x as usize] } else { Vec3::ZERO });
            let before = measure(&materialize(&gen, 0, 2).unwrap()).total();
            let pad = steps as i64;
            let after = measure(&evolve_n(&coins, &gen, -pad - 1, 3 + pad, steps).unwrap()).total();
            prop_assert!((after - before).abs() <= 1e-12 * before.max(1.0));
        }

        #[test]
        fn light_cone_is_exact(
            a in -2.0f64..2.0, b in -2.0f64..2.0, k in 0.1f64..1.0,
            n in 0usize..8, theta in 0.01f64..0.99,
        ) {
            let fam = CoinFamily::with_defect(
                crate::coins::generalized_grover(a),
                crate::coins::DefectSpec::new(theta).unwrap(),
            ).unwrap();
            let gen = Generator::new(move |x| {
                let t = x as f64;
                Vec3::new(cis(k * t), c64(b, t.sin()), cis(-k * t * t))
            });
            let near = evolve_padded(&fam, &gen, -4, 4, n, n).unwrap();
            let far = evolve_padded(&fam, &gen, -4, 4, n, n + 5).unwrap();
            for (u, v) in near.values().iter().zip(far.values()) {
                prop_assert!(u.max_abs_diff(v) <= 1e-15);
            }
        }

        #[test]
        fn measures_are_nonnegative(amps in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..30)) {
            let vals: Vec<Vec3> = amps.chunks(1).map(|c| Vec3::new(c64(c[0].0, c[0].1), c64(c[0].1, 0.0), c64(0.0, c[0].0))).collect();
            let w = Window::new(-3, vals).unwrap();
            prop_assert!(measure(&w).values().iter().all(|&v| v >= 0.0));
        }
    }
}
