//! Reference implementations used by the integration suites.
//!
//! Written directly from the defining formulas, without going through the
//! library's evolution or coin constructors, so that they can serve as
//! oracles for them.

#![allow(dead_code)]

use std::f64::consts::PI;

pub use qwalk3::Complex64 as C;

pub type Coin = [[C; 3]; 3];
pub type Amp = [C; 3];

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

pub fn cis(t: f64) -> C {
    C::new(t.cos(), t.sin())
}

pub fn grover_literal() -> Coin {
    let a = C::new(-1.0 / 3.0, 0.0);
    let b = C::new(2.0 / 3.0, 0.0);
    [[a, b, b], [b, a, b], [b, b, a]]
}

/// `cos φ · G − i sin φ · J`, with `J` the exchange matrix.
pub fn gphi_literal(phi: f64) -> Coin {
    let g = grover_literal();
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = g[i][j] * phi.cos();
            if i + j == 2 {
                out[i][j] -= I * phi.sin();
            }
        }
    }
    out
}

/// `e^{iγ} G^(γ)`.
pub fn agamma_literal(gamma: f64) -> Coin {
    let mut m = gphi_literal(gamma);
    for row in &mut m {
        for z in row.iter_mut() {
            *z *= cis(gamma);
        }
    }
    m
}

pub fn scaled(m: Coin, s: C) -> Coin {
    m.map(|row| row.map(|z| z * s))
}

fn row_dot(row: &[C; 3], v: &Amp) -> C {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2]
}

pub fn nu(a: &Amp) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One step of the walk on values known over `[lo, lo + psi.len())`.
/// Returns the values on the one-site-shrunk window.
pub fn step(coin: &dyn Fn(i64) -> Coin, lo: i64, psi: &[Amp]) -> (i64, Vec<Amp>) {
    let mut out = Vec::new();
    for k in 1..psi.len().saturating_sub(1) {
        let x = lo + k as i64;
        out.push([
            row_dot(&coin(x - 1)[0], &psi[k - 1]),
            row_dot(&coin(x)[1], &psi[k]),
            row_dot(&coin(x + 1)[2], &psi[k + 1]),
        ]);
    }
    (lo + 1, out)
}

/// `max_{1≤n≤n_max, x∈[lo,hi]} |ν(UⁿΨ)(x) − ν(Ψ)(x)| / max(1, ν(Ψ)(x))`.
pub fn stationarity(coin: &dyn Fn(i64) -> Coin, psi: &dyn Fn(i64) -> Amp, lo: i64, hi: i64, n_max: usize) -> f64 {
    let pad = n_max as i64;
    let mut wlo = lo - pad;
    let mut w: Vec<Amp> = (lo - pad..=hi + pad).map(psi).collect();
    let nu0: Vec<f64> = (lo..=hi).map(|x| nu(&psi(x))).collect();
    let mut worst = 0.0f64;
    for _ in 0..n_max {
        let (nlo, nw) = step(coin, wlo, &w);
        wlo = nlo;
        w = nw;
        for (k, x) in (lo..=hi).enumerate() {
            let now = nu(&w[(x - wlo) as usize]);
            worst = worst.max((now - nu0[k]).abs() / nu0[k].max(1.0));
        }
    }
    worst
}

/// `max_{x∈[lo,hi]} |[UΨ](x) − λΨ(x)|_max`.
pub fn eigen_residual(coin: &dyn Fn(i64) -> Coin, psi: &dyn Fn(i64) -> Amp, lambda: C, lo: i64, hi: i64) -> f64 {
    let w: Vec<Amp> = (lo - 1..=hi + 1).map(psi).collect();
    let (_, next) = step(coin, lo - 1, &w);
    let mut worst = 0.0f64;
    for (k, x) in (lo..=hi).enumerate() {
        let want = psi(x);
        for c in 0..3 {
            worst = worst.max((next[k][c] - lambda * want[c]).norm());
        }
    }
    worst
}

/// `−C / a13` with `C = a12 a23 − a13 a22`.
pub fn reduced_eigenvalue(m: &Coin) -> C {
    let c = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    -c / m[0][2]
}

/// `Δ(x)` for a defect of strength `θ`.
pub fn delta(x: i64, theta: f64) -> C {
    match x {
        -1 => cis(2.0 * PI * theta),
        1 => cis(-2.0 * PI * theta),
        _ => ONE,
    }
}

/// `(5/4)(|φ_x|² + |φ_{x−1}|²) + (1/2) Re(φ_x conj φ_{x−1})`.
pub fn measure_prop31(seq: &dyn Fn(i64) -> C, x: i64) -> f64 {
    let (a, b) = (seq(x), seq(x - 1));
    1.25 * (a.norm_sqr() + b.norm_sqr()) + 0.5 * (a * b.conj()).re
}

/// `(2 + 9/4 t²)(|φ₁|² + |φ₃|²) + (2 + 9/2 t²) Re(Δ(x) e^{2iκx} φ₁ conj φ₃)`,
/// with `t = tan` of the coin parameter and `κ` the phase rate
/// (`φ + τ` for model I, `ξ` for model II).
pub fn measure_defect(t: f64, kappa: f64, theta: f64, f1: C, f3: C, x: i64) -> f64 {
    let t2 = t * t;
    (2.0 + 2.25 * t2) * (f1.norm_sqr() + f3.norm_sqr())
        + (2.0 + 4.5 * t2) * (delta(x, theta) * cis(2.0 * kappa * x as f64) * f1 * f3.conj()).re
}

pub const PHI_GRID: [f64; 4] = [0.0, PI / 6.0, PI / 4.0, 1.0];
pub const GAMMA_GRID: [f64; 3] = [0.0, PI / 6.0, 1.0];
pub const THETA_GRID: [f64; 3] = [0.25, 1.0 / 3.0, 0.7];
pub const SEED_GRID: [(C, C); 3] = [(ONE, ZERO), (ZERO, ONE), (ONE, I)];
