//! Fixed-size complex linear algebra for the three chirality states.
//!
//! Everything here is `Copy` and allocation-free. Matrices are row-major with
//! entries named after the coin convention
//!
//! ```text
//! a b c
//! d e f
//! g h k
//! ```

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64;

/// Complex amplitude type used across the crate.
pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand for `Complex64::new`.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{i t}`.
#[inline]
pub fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Value of one lattice site: the three chirality amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3(pub [Complex64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([ZERO; 3]);

    pub const fn new(c0: Complex64, c1: Complex64, c2: Complex64) -> Self {
        Vec3([c0, c1, c2])
    }

    pub fn real(c0: f64, c1: f64, c2: f64) -> Self {
        Vec3([c64(c0, 0.0), c64(c1, 0.0), c64(c2, 0.0)])
    }

    /// `|c0|² + |c1|² + |c2|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Vec3(self.0.map(|z| z * s))
    }

    /// Swap the first and last chirality components.
    pub fn reversed(&self) -> Self {
        Vec3([self.0[2], self.0[1], self.0[0]])
    }

    /// Largest componentwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Vec3) -> f64 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for Vec3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

/// The four 2×2 determinants used by the reduced-matrix eigenvector formulas.
///
/// With `A = (a_ij)`:
/// `B = a11 a22 − a12 a21`, `C = a12 a23 − a13 a22`,
/// `D = a21 a32 − a22 a31`, `E = a22 a33 − a23 a32`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minors {
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
}

/// Dense 3×3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[Complex64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[ZERO; 3]; 3]);

    pub const IDENTITY: Mat3 = Mat3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]);

    pub const fn from_rows(rows: [[Complex64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows.map(|r| r.map(|x| c64(x, 0.0))))
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    /// Dot product of row `i` with `v`.
    #[inline]
    pub fn row_dot(&self, i: usize, v: &Vec3) -> Complex64 {
        let r = &self.0[i];
        r[0] * v.0[0] + r[1] * v.0[1] + r[2] * v.0[2]
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3([self.row_dot(0, v), self.row_dot(1, v), self.row_dot(2, v)])
    }

    pub fn scale(&self, s: Complex64) -> Mat3 {
        Mat3(self.0.map(|r| r.map(|z| z * s)))
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat3 {
        let m = &self.0;
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].conj())))
    }

    /// `J M J` where `J` is the exchange matrix: reverses both row and column
    /// order. Corresponds to relabelling chirality 0 ↔ 2.
    pub fn chirality_reversed(&self) -> Mat3 {
        let m = &self.0;
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| m[2 - i][2 - j])))
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> Complex64 {
        let [[a, b, c], [d, e, f], [g, h, k]] = self.0;
        a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)
    }

    /// Max-norm of `M M† − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Mat3::IDENTITY).max_norm()
    }

    pub fn minors(&self) -> Minors {
        let m = &self.0;
        Minors {
            b: m[0][0] * m[1][1] - m[0][1] * m[1][0],
            c: m[0][1] * m[1][2] - m[0][2] * m[1][1],
            d: m[1][0] * m[2][1] - m[1][1] * m[2][0],
            e: m[1][1] * m[2][2] - m[1][2] * m[2][1],
        }
    }

    /// Characteristic polynomial `det(M − λI)` evaluated at `lambda`.
    pub fn char_poly(&self, lambda: Complex64) -> Complex64 {
        (*self - Mat3::IDENTITY.scale(lambda)).det()
    }

    /// The three roots of `det(M − λI) = 0`, repeated roots included.
    ///
    /// Closed-form Cardano on the depressed cubic, then a single Newton
    /// step per root which is kept only when it lowers `|det(M − λI)|`.
    pub fn eigenvalues(&self) -> [Complex64; 3] {
        // λ³ + p2 λ² + p1 λ + p0 with p2 = −tr, p1 = Σ principal 2×2 minors, p0 = −det.
        let m = &self.0;
        let tr = self.trace();
        let sum_minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
        let det = self.det();
        let (p2, p1, p0) = (-tr, sum_minors, -det);

        // λ = t − p2/3 gives t³ + p t + q = 0.
        let shift = -p2 / 3.0;
        let p = p1 - p2 * p2 / 3.0;
        let q = p2 * p2 * p2 * (2.0 / 27.0) - p2 * p1 / 3.0 + p0;

        let scale = self.max_norm().max(1.0);
        let roots_t = if p.norm() <= 1e-14 * scale * scale && q.norm() <= 1e-14 * scale.powi(3) {
            [ZERO; 3]
        } else {
            let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
            // Pick the sign that avoids cancellation.
            let w1 = -q / 2.0 + disc;
            let w2 = -q / 2.0 - disc;
            let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
            let u = w.cbrt();
            let omega = cis(2.0 * std::f64::consts::PI / 3.0);
            let mut out = [ZERO; 3];
            let mut uk = u;
            for slot in out.iter_mut() {
                *slot = if uk.norm() == 0.0 { ZERO } else { uk - p / (3.0 * uk) };
                uk *= omega;
            }
            out
        };

        roots_t.map(|t| self.newton_polish(t + shift, p2, p1, p0))
    }

    fn newton_polish(&self, lambda: Complex64, p2: Complex64, p1: Complex64, p0: Complex64) -> Complex64 {
        let f = |z: Complex64| ((z + p2) * z + p1) * z + p0;
        let df = |z: Complex64| (3.0 * z + 2.0 * p2) * z + p1;
        let fz = f(lambda);
        let dfz = df(lambda);
        if dfz.norm() == 0.0 || !dfz.is_finite() {
            return lambda;
        }
        let cand = lambda - fz / dfz;
        if cand.is_finite() && f(cand).norm() < fz.norm() {
            cand
        } else {
            lambda
        }
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(c64(-1.0, 0.0))
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        self.mul_vec(&rhs)
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|z| format!("({:+.6}, {:+.6})", z.re, z.im)).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Matrix–vector product `M v`.
pub fn mat_mul(m: &Mat3, v: &Vec3) -> Vec3 {
    m.mul_vec(v)
}

/// Max-norm of `M M† − I`.
pub fn unitarity_defect(m: &Mat3) -> f64 {
    m.unitarity_defect()
}

pub fn minors(m: &Mat3) -> Minors {
    m.minors()
}

pub fn eigenvalues(m: &Mat3) -> [Complex64; 3] {
    m.eigenvalues()
}

/// Match two 3-element multisets of complex numbers within `tol`.
///
/// Greedy assignment is sufficient for three elements when `tol` is smaller
/// than half the gap between distinct values.
pub fn multiset_matches(found: &[Complex64; 3], expected: &[Complex64; 3], tol: f64) -> bool {
    let mut used = [false; 3];
    for z in found {
        let hit = (0..3).find(|&j| !used[j] && (expected[j] - z).norm() <= tol);
        match hit {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}
