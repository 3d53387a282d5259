//! Matrix polynomials in the spectral parameter, Lax pairs for each
//! catalog system, spectral-polynomial extraction, and isospectrality /
//! r-matrix verification.
//!
//! A pair `(L(λ), A(λ))` with `Ldot = [L, A]` makes the spectrum of `L(λ)`
//! constant in time: the coefficients of `p(λ,μ) = det(L(λ) - μ·1)` are
//! first integrals (or invariant relations where they vanish identically
//! on the invariant manifold).

pub mod rmatrix;

use crate::algebra::{hat3, SkewMat, Vec3};
use crate::integrate::Trajectory;
use crate::poisson::{PhasePoint, SmoothFn};
use crate::report::{ChannelReport, ConservationReport};
use crate::systems::{
    FamilySpec, HeavyTopCase, HeavyTopSpec, KirchhoffCase, KirchhoffSpec, SystemSpec,
};
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use thiserror::Error;

type CMat = DMatrix<Complex64>;

#[derive(Debug, Error)]
pub enum LaxError {
    #[error("no Lax pair is implemented for case `{0}`")]
    NoLaxPair(String),
    #[error("phase point kind does not match the spec")]
    KindMismatch,
    #[error("synthetic division remainder {0} exceeds 1e-12")]
    DivisionRemainder(f64),
    #[error("Chaplygin Lax gauge factor (c3-c1)/(a3-a1) is degenerate: {0}")]
    BadNormalization(f64),
    #[error(transparent)]
    System(#[from] crate::systems::SystemError),
}

/// `L(λ) = λ^order · Σ_k C_k λ^k` with square matrix coefficients; `order`
/// is 0 for plain polynomials and −2 for the 2×2 Laurent pair.
#[derive(Clone, Debug)]
pub struct MatrixPoly {
    coeffs: Vec<CMat>,
    order: i32,
}

impl MatrixPoly {
    pub fn new(coeffs: Vec<CMat>) -> Self {
        assert!(!coeffs.is_empty());
        let n = coeffs[0].nrows();
        assert!(coeffs.iter().all(|c| c.nrows() == n && c.ncols() == n));
        MatrixPoly { coeffs, order: 0 }
    }

    pub fn laurent(coeffs: Vec<CMat>, order: i32) -> Self {
        let mut p = Self::new(coeffs);
        p.order = order;
        p
    }

    pub fn from_real(coeffs: Vec<DMatrix<f64>>) -> Self {
        Self::new(coeffs.into_iter().map(|c| c.map(|v| Complex64::new(v, 0.0))).collect())
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    /// Formal degree of the polynomial part (top coefficient may be zero).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &CMat {
        &self.coeffs[k]
    }

    /// Value of the polynomial part `Σ C_k λ^k` (no Laurent prefactor).
    pub fn eval_poly(&self, lambda: Complex64) -> CMat {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * lambda + c;
        }
        acc
    }

    pub fn eval(&self, lambda: Complex64) -> CMat {
        self.eval_poly(lambda) * lambda.powi(self.order)
    }

    /// Coefficientwise `[self, other] = self·other - other·self`.
    pub fn commutator(&self, other: &MatrixPoly) -> MatrixPoly {
        let n = self.dim();
        let deg = self.degree() + other.degree();
        let mut out = vec![CMat::zeros(n, n); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b - b * a;
            }
        }
        MatrixPoly { coeffs: out, order: self.order + other.order }
    }

    pub fn sub(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.order, other.order);
        let n = self.dim();
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![CMat::zeros(n, n); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        MatrixPoly { coeffs: out, order: self.order }
    }

    fn with_order(mut self, order: i32) -> MatrixPoly {
        self.order = order;
        self
    }

    /// Max over coefficients of the Frobenius norm.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficient table of `p(λ,μ) = det(L(λ) - μ·1)`, multiplied through by
/// `λ^{-n·order}` for Laurent input so the table is polynomial.
///
/// `coeffs[k][j]` is the coefficient of `μ^k λ^j`.
#[derive(Clone, Debug)]
pub struct SpectralPoly {
    pub mu_degree: usize,
    pub lambda_degree: usize,
    pub coeffs: Vec<Vec<f64>>,
}

impl SpectralPoly {
    pub fn get(&self, mu_pow: usize, lambda_pow: usize) -> f64 {
        self.coeffs
            .get(mu_pow)
            .and_then(|row| row.get(lambda_pow))
            .copied()
            .unwrap_or(0.0)
    }

    /// Row of λ-coefficients for one μ power (ascending).
    pub fn mu_row(&self, mu_pow: usize) -> &[f64] {
        &self.coeffs[mu_pow]
    }
}

/// Characteristic coefficients of `det(A - x·1)` in ascending powers of `x`
/// via the Faddeev–LeVerrier recursion (fine at these tiny dimensions).
fn charpoly_asc(a: &CMat) -> Vec<Complex64> {
    let n = a.nrows();
    // det(x·1 - A) = x^n + c_1 x^{n-1} + ... + c_n
    let mut cs = vec![Complex64::new(1.0, 0.0)];
    let mut m = CMat::zeros(n, n);
    for k in 1..=n {
        m = a * &m + CMat::identity(n, n) * cs[k - 1];
        let c = -(a * &m).trace() / Complex64::new(k as f64, 0.0);
        cs.push(c);
    }
    // det(A - x·1) = (-1)^n det(x·1 - A); cs[i] multiplies x^{n-i}
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = vec![Complex64::default(); n + 1];
    for (i, c) in cs.iter().enumerate() {
        out[n - i] = c * sign;
    }
    out
}

/// Exact bivariate extraction by evaluation–interpolation: the determinant
/// is expanded in `μ` at integer nodes `λ = 0..d·n`, then each `μ`-row is
/// interpolated in `λ` (Newton form; exact for polynomial data at these
/// tiny degrees).
pub fn spectral(l: &MatrixPoly) -> SpectralPoly {
    let n = l.dim();
    let shift = (-l.order).max(0) as usize;
    let lam_deg = n * (l.degree() + shift);
    let half = (lam_deg as i64) / 2;
    let nodes: Vec<f64> = (0..=lam_deg).map(|i| (i as i64 - half) as f64).collect();
    // det(L - mu) * l^{n*shift} = q(l^shift * mu) with q the charpoly of the
    // polynomial part, so the mu^k coefficient picks up l^{shift*k}
    let mut values = vec![vec![0.0f64; nodes.len()]; n + 1];
    for (i, &node) in nodes.iter().enumerate() {
        let lam = Complex64::new(node, 0.0);
        let p = l.eval_poly(lam);
        let q = charpoly_asc(&p);
        for (k, qk) in q.iter().enumerate() {
            let scaled = qk * lam.powu((shift * k) as u32);
            values[k][i] = scaled.re;
        }
    }
    let coeffs: Vec<Vec<f64>> =
        values.into_iter().map(|row| newton_interpolate(&nodes, &row)).collect();
    SpectralPoly { mu_degree: n, lambda_degree: lam_deg, coeffs }
}

/// Monomial coefficients (ascending) of the polynomial through the nodes.
fn newton_interpolate(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut coeffs = vec![0.0; n];
    let mut basis = vec![0.0; n];
    basis[0] = 1.0;
    let mut basis_len = 1;
    for (i, &c) in dd.iter().enumerate() {
        for (k, b) in basis.iter().enumerate().take(basis_len) {
            coeffs[k] += c * b;
        }
        if i + 1 < n {
            let mut next = vec![0.0; n];
            for k in 0..basis_len {
                next[k + 1] += basis[k];
                next[k] -= xs[i] * basis[k];
            }
            basis = next;
            basis_len += 1;
        }
    }
    coeffs
}

/// A Lax pair at a phase point; `off_manifold` is set when the invariant
/// relation the pair requires is violated (`|F4| > 1e-10`).
#[derive(Clone, Debug)]
pub struct LaxPair {
    pub l: MatrixPoly,
    pub a: MatrixPoly,
    pub off_manifold: bool,
}

fn hat_c(v: &Vec3) -> DMatrix<f64> {
    hat3(v).as_matrix().clone()
}

fn skew_to_dyn(m: &SkewMat) -> DMatrix<f64> {
    m.as_matrix().clone()
}

/// Assembles the system's Lax pair at `x`.
///
/// Implemented pairs: the classical Hess–Appel'rot `L = λ² I2 χ + λM + Γ`
/// (3×3), the bitop and 4-/n-dimensional Hess–Appel'rot pencils
/// `L = λ²C + λM + Γ`, the 2×2 Laurent pair of the `e(3)` family, and the
/// Chaplygin rigid-body-in-fluid pair (`B = 0`).
pub fn build_lax(spec: &SystemSpec, x: &PhasePoint) -> Result<LaxPair, LaxError> {
    match spec {
        SystemSpec::HeavyTop(ht) if ht.case == HeavyTopCase::HessAppelrot => {
            let (m, g) = expect_e3(x)?;
            let c = hat_c(&(ht.chi * ht.inertia.y));
            let l = MatrixPoly::from_real(vec![hat_c(g), hat_c(m), c]);
            let a = MatrixPoly::from_real(vec![hat_c(&ht.omega(m)), hat_c(&ht.chi)]);
            Ok(LaxPair { l, a, off_manifold: off_manifold(spec, x) })
        }
        SystemSpec::Bitop(b) => {
            let (m, g) = expect_son(x)?;
            let c = b.chi().scale(b.a + b.b);
            let l = MatrixPoly::from_real(vec![skew_to_dyn(g), skew_to_dyn(m), skew_to_dyn(&c)]);
            let a = MatrixPoly::from_real(vec![skew_to_dyn(&b.omega(m)), skew_to_dyn(&b.chi())]);
            Ok(LaxPair { l, a, off_manifold: false })
        }
        SystemSpec::Ha4(h) => {
            let (m, g) = expect_son(x)?;
            let c = h.chi().scale(1.0 / (h.j1 + h.j3));
            let l = MatrixPoly::from_real(vec![skew_to_dyn(g), skew_to_dyn(m), skew_to_dyn(&c)]);
            let a = MatrixPoly::from_real(vec![skew_to_dyn(&h.omega(m)), skew_to_dyn(&h.chi())]);
            Ok(LaxPair { l, a, off_manifold: off_manifold(spec, x) })
        }
        SystemSpec::Han(h) => {
            let (m, g) = expect_son(x)?;
            let c = h.chi().scale(1.0 / (h.j1 + h.j3));
            let l = MatrixPoly::from_real(vec![skew_to_dyn(g), skew_to_dyn(m), skew_to_dyn(&c)]);
            let a = MatrixPoly::from_real(vec![skew_to_dyn(&h.omega(m)), skew_to_dyn(&h.chi())]);
            Ok(LaxPair { l, a, off_manifold: off_manifold(spec, x) })
        }
        SystemSpec::Family(f) => {
            let (l, a) = family_pair(f, x, f.a_value(x))?;
            Ok(LaxPair { l, a, off_manifold: false })
        }
        SystemSpec::Kirchhoff(k) if matches!(k.case, KirchhoffCase::Chaplygin2 { .. }) => {
            let (m, g) = expect_e3(x)?;
            let fr = chaplygin_frame(k)?;
            let (l, q) = chaplygin_matrices(&fr, m, g);
            Ok(LaxPair { l, a: q, off_manifold: off_manifold(spec, x) })
        }
        other => Err(LaxError::NoLaxPair(other.case_name())),
    }
}

fn off_manifold(spec: &SystemSpec, x: &PhasePoint) -> bool {
    spec.invariant_relations().iter().any(|r| r.eval(x).abs() > 1e-10)
}

fn expect_e3(x: &PhasePoint) -> Result<(&Vec3, &Vec3), LaxError> {
    match x {
        PhasePoint::E3 { m, g } => Ok((m, g)),
        _ => Err(LaxError::KindMismatch),
    }
}

fn expect_son(x: &PhasePoint) -> Result<(&SkewMat, &SkewMat), LaxError> {
    match x {
        PhasePoint::SoN { m, g } => Ok((m, g)),
        _ => Err(LaxError::KindMismatch),
    }
}

// ---------------------------------------------------------------------------
// The 2x2 Laurent pair of the e(3) family (also the classical HA system)
// ---------------------------------------------------------------------------

/// `λ² L(λ) = N0 + N1 λ + N2 λ²` of the 2×2 pair, with
/// `N = [[ω, √2 i Δ], [√2 i Δ*, -ω]]`, `Δ = y + λx`, and the uncancelled
/// `ω = -i[α(C1λ² + M1λ + Γ1) + β(C3λ² + M3λ + Γ3)]` (the `M`-terms cancel
/// only on the invariant manifold).
pub fn family_n_poly(x0: f64, z0: f64, i2: f64, m: &Vec3, g: &Vec3) -> MatrixPoly {
    let d = (x0 * x0 + z0 * z0).sqrt();
    let (al, be) = (x0 / d, z0 / d);
    let (c1, c3) = (i2 * x0, i2 * z0);
    let i = Complex64::new(0.0, 1.0);
    let s2i = Complex64::new(0.0, 2.0f64.sqrt());
    let rt2 = 2.0f64.sqrt();
    let xx = Complex64::new((be * m.x - al * m.z) / rt2, -m.y / rt2);
    let yy = Complex64::new((be * g.x - al * g.z) / rt2, -g.y / rt2);
    let xb = xx.conj();
    let yb = yy.conj();
    let w0 = -i * (al * g.x + be * g.z);
    let w1 = -i * (al * m.x + be * m.z);
    let w2 = -i * (al * c1 + be * c3);
    let zero = Complex64::default();
    let mk = |w: Complex64, dd: Complex64, ds: Complex64| {
        CMat::from_row_slice(2, 2, &[w, s2i * dd, s2i * ds, -w])
    };
    MatrixPoly::laurent(vec![mk(w0, yy, yb), mk(w1, xx, xb), mk(w2, zero, zero)], -2)
}

/// The scalar spectral point of the classical Hess–Appel'rot system in the
/// 2×2 representation: `a = (α Ω1 + β Ω3)/sqrt(X0²+Z0²)`.
pub fn hess_a_scalar(ht: &HeavyTopSpec, m: &Vec3) -> f64 {
    let d = (ht.chi.x * ht.chi.x + ht.chi.z * ht.chi.z).sqrt();
    let (al, be) = (ht.chi.x / d, ht.chi.z / d);
    (al * m.x / ht.inertia.x + be * m.z / ht.inertia.z) / d
}

/// `A(λ) = (λ²L(λ) - a²L(a)) / (λ - a) / (2 I2)` by synthetic division of
/// `N(λ) - N(a)`; the remainder vanishes identically and is asserted
/// ≤ 1e-12.
fn family_pair(
    f: &FamilySpec,
    x: &PhasePoint,
    a_scalar: f64,
) -> Result<(MatrixPoly, MatrixPoly), LaxError> {
    let (m, g) = expect_e3(x)?;
    let n = family_n_poly(f.x0, f.z0, f.i2, m, g);
    let a = Complex64::new(a_scalar, 0.0);
    let na = n.eval_poly(a);
    // divide N(λ) - N(a) by (λ - a): quotient q1 λ + q0
    let q1 = n.coeff(2).clone();
    let q0 = n.coeff(1) + n.coeff(2) * a;
    let rem = (n.coeff(0) - &na) + &q0 * a;
    let rem_norm = rem.norm();
    if rem_norm > 1e-12 {
        return Err(LaxError::DivisionRemainder(rem_norm));
    }
    let scale = Complex64::new(1.0 / (2.0 * f.i2), 0.0);
    let a_poly = MatrixPoly::new(vec![q0 * scale, q1 * scale]);
    Ok((n, a_poly))
}

// ---------------------------------------------------------------------------
// Chaplygin pair (B = 0) in the a1 = a2 rotated basis
// ---------------------------------------------------------------------------

/// Rotation to the `a1 = a2` basis plus the gauge factor
/// `σ = (c3' - c1')/(a3' - a1')` that normalizes the pair: the printed
/// matrices satisfy the commutator identity only when `c3 - c1 = a3 - a1`,
/// and `L0 = σ ΓΓ^T`, `L2 = diag(c1,c1,c3)/(σ a1)` restores it for any
/// `σ != 0` (for `σ > 0` this is the Poisson automorphism `Γ -> √σ Γ`).
pub(crate) struct ChaplyginFrame {
    pub rot: Matrix3<f64>,
    pub sigma: f64,
    pub a1: f64,
    pub a3: f64,
    pub a13: f64,
    pub c1: f64,
    pub c3: f64,
}

pub(crate) fn chaplygin_frame(k: &KirchhoffSpec) -> Result<ChaplyginFrame, LaxError> {
    if k.b.norm() != 0.0 {
        return Err(LaxError::NoLaxPair("chaplygin2 with B != 0".into()));
    }
    let (a1, a2, a3) = (k.a[(0, 0)], k.a[(1, 1)], k.a[(2, 2)]);
    // rotation about axis 2 sending diag(a1,a2,a3) to the a1' = a2' form
    let sin2 = (a2 - a1) / (a3 - a1);
    let (s, c) = (sin2.sqrt(), (1.0 - sin2).sqrt());
    let rot = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c);
    let a_rot = rot * k.a * rot.transpose();
    let c_rot = rot * k.c * rot.transpose();
    let (ra1, ra3, ra13) = (a_rot[(0, 0)], a_rot[(2, 2)], a_rot[(0, 2)]);
    let (rc1, rc3) = (c_rot[(0, 0)], c_rot[(2, 2)]);
    let sigma = (rc3 - rc1) / (ra3 - ra1);
    if sigma.abs() < 1e-14 {
        return Err(LaxError::BadNormalization(sigma));
    }
    Ok(ChaplyginFrame {
        rot,
        sigma,
        a1: ra1,
        a3: ra3,
        a13: ra13,
        c1: rc1 / sigma,
        c3: rc3 / sigma,
    })
}

pub(crate) fn chaplygin_matrices(
    fr: &ChaplyginFrame,
    m: &Vec3,
    g: &Vec3,
) -> (MatrixPoly, MatrixPoly) {
    let mr = fr.rot * m;
    let gr = fr.rot * g;
    let l2 = Matrix3::from_diagonal(&Vec3::new(fr.c1 / fr.a1, fr.c1 / fr.a1, fr.c3 / fr.a1));
    let l0 = gr * gr.transpose() * fr.sigma;
    let to_dyn = |m: &Matrix3<f64>| DMatrix::from_fn(3, 3, |i, j| m[(i, j)]);
    let l = MatrixPoly::from_real(vec![to_dyn(&(-l0)), hat_c(&mr), to_dyn(&l2)]);
    let q1 = Matrix3::from_diagonal(&Vec3::new(fr.a1, fr.a1, fr.a3));
    let omega = Vec3::new(
        fr.a1 * mr.x + fr.a13 * mr.z,
        fr.a1 * mr.y,
        fr.a13 * mr.x + fr.a3 * mr.z,
    );
    let q = MatrixPoly::from_real(vec![hat_c(&omega), to_dyn(&q1)]);
    (l, q)
}

// ---------------------------------------------------------------------------
// Residuals and drift
// ---------------------------------------------------------------------------

/// `max_k ||(Ldot)_k - [L,A]_k||_F`, with `Ldot` assembled by pushing the
/// right-hand side through the L-builder coefficients (constant blocks drop
/// out) — an algebraic identity test, not a finite-difference one.
pub fn lax_residual(spec: &SystemSpec, x: &PhasePoint) -> Result<f64, LaxError> {
    let dot = spec.rhs(x)?;
    let xdot = PhasePoint::from_flat(x.kind(), &dot);
    match spec {
        SystemSpec::HeavyTop(_) | SystemSpec::Bitop(_) | SystemSpec::Ha4(_) | SystemSpec::Han(_) => {
            let pair = build_lax(spec, x)?;
            let (dm, dg) = match &xdot {
                PhasePoint::E3 { m, g } => (hat_c(m), hat_c(g)),
                PhasePoint::SoN { m, g } => (skew_to_dyn(m), skew_to_dyn(g)),
                _ => return Err(LaxError::KindMismatch),
            };
            let n = dm.nrows();
            let ldot = MatrixPoly::from_real(vec![dg, dm, DMatrix::zeros(n, n)]);
            Ok(ldot.sub(&pair.l.commutator(&pair.a)).coeff_norm())
        }
        SystemSpec::Family(f) => {
            let (dmv, dgv) = match &xdot {
                PhasePoint::E3 { m, g } => (*m, *g),
                _ => return Err(LaxError::KindMismatch),
            };
            let (l, a) = family_pair(f, x, f.a_value(x))?;
            // the state-independent C-block of Ndot drops; building with
            // i2 = 0 zeroes exactly that block
            let ndot = family_n_poly(f.x0, f.z0, 0.0, &dmv, &dgv);
            Ok(ndot.sub(&l.commutator(&a).with_order(-2)).coeff_norm())
        }
        SystemSpec::Kirchhoff(k) if matches!(k.case, KirchhoffCase::Chaplygin2 { .. }) => {
            let (m, g) = expect_e3(x)?;
            let (dmv, dgv) = match &xdot {
                PhasePoint::E3 { m, g } => (*m, *g),
                _ => return Err(LaxError::KindMismatch),
            };
            let fr = chaplygin_frame(k)?;
            let (l, q) = chaplygin_matrices(&fr, m, g);
            let gr = fr.rot * g;
            let dgr = fr.rot * dgv;
            let dmr = fr.rot * dmv;
            let dl0 = (dgr * gr.transpose() + gr * dgr.transpose()) * fr.sigma;
            let to_dyn = |m: &Matrix3<f64>| DMatrix::from_fn(3, 3, |i, j| m[(i, j)]);
            let ldot =
                MatrixPoly::from_real(vec![to_dyn(&(-dl0)), hat_c(&dmr), DMatrix::zeros(3, 3)]);
            Ok(ldot.sub(&l.commutator(&q)).coeff_norm())
        }
        other => Err(LaxError::NoLaxPair(other.case_name())),
    }
}

/// Residual of the classical HA system written through the 2×2 family pair
/// with the scalar `a = (αΩ1 + βΩ3)/δ`, against the Euler–Poisson flow.
pub fn hess_2x2_residual(ht: &HeavyTopSpec, x: &PhasePoint) -> Result<f64, LaxError> {
    let (m, _) = expect_e3(x)?;
    let fam = FamilySpec {
        x0: ht.chi.x,
        z0: ht.chi.z,
        i2: ht.inertia.y,
        a_case: crate::systems::FamilyCase::H2,
    };
    let (l, a) = family_pair(&fam, x, hess_a_scalar(ht, m))?;
    let dot = SystemSpec::HeavyTop(ht.clone()).rhs(x)?;
    let dm = Vec3::new(dot[0], dot[1], dot[2]);
    let dg = Vec3::new(dot[3], dot[4], dot[5]);
    let ndot = family_n_poly(ht.chi.x, ht.chi.z, 0.0, &dm, &dg);
    Ok(ndot.sub(&l.commutator(&a).with_order(-2)).coeff_norm())
}

/// Named spectral coefficients of the system's pencil at one state.
///
/// Heavy-top HA: `cfA..cfF` of `p = -μ(μ² + Aλ⁴+Bλ³+Dλ²+Eλ+F)`; bitop:
/// `cfA..cfK` of `μ⁴ + P(λ)μ² + Q(λ)²` (the `Q` row via the Pfaffian);
/// HA-4: `cfa..cfj`; other systems: the raw state-dependent table entries.
pub fn named_coefficients(
    spec: &SystemSpec,
    x: &PhasePoint,
) -> Result<Vec<(String, f64)>, LaxError> {
    let pair = build_lax(spec, x)?;
    let sp = spectral(&pair.l);
    let out = match spec {
        SystemSpec::HeavyTop(_) => {
            let names = ["cfF", "cfE", "cfD", "cfB", "cfA"];
            names.iter().enumerate().map(|(j, n)| (n.to_string(), -sp.get(1, j))).collect()
        }
        SystemSpec::Bitop(_) => {
            let p_names = ["cfF", "cfE", "cfD", "cfB", "cfA"];
            let q_names = ["cfK", "cfJ", "cfI", "cfH", "cfG"];
            let mut out: Vec<(String, f64)> =
                p_names.iter().enumerate().map(|(j, n)| (n.to_string(), sp.get(2, j))).collect();
            let pfs = pfaffian_poly(&pair.l);
            for (j, n) in q_names.iter().enumerate() {
                out.push((n.to_string(), pfs[j]));
            }
            out
        }
        SystemSpec::Ha4(_) => {
            let p_names = ["cfe", "cfd", "cfc", "cfb", "cfa"];
            let q_names = ["cfj", "cfi", "cfh", "cfg", "cff"];
            let mut out: Vec<(String, f64)> =
                p_names.iter().enumerate().map(|(j, n)| (n.to_string(), sp.get(2, j))).collect();
            let pfs = pfaffian_poly(&pair.l);
            for (j, n) in q_names.iter().enumerate() {
                out.push((n.to_string(), pfs[j]));
            }
            out
        }
        SystemSpec::Han(_) | SystemSpec::Family(_) | SystemSpec::Kirchhoff(_) => {
            let mut out = Vec::new();
            for k in 0..sp.mu_degree {
                for j in 0..=sp.lambda_degree {
                    out.push((format!("p[mu^{k},l^{j}]"), sp.get(k, j)));
                }
            }
            out
        }
        other => return Err(LaxError::NoLaxPair(other.case_name())),
    };
    Ok(out)
}

/// Coefficients (ascending in λ) of the Pfaffian of a 4×4 pencil.
fn pfaffian_poly(l: &MatrixPoly) -> Vec<f64> {
    assert_eq!(l.dim(), 4);
    let deg = 2 * l.degree();
    let half = (deg as i64) / 2;
    let nodes: Vec<f64> = (0..=deg).map(|i| (i as i64 - half) as f64).collect();
    let vals: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            let m = l.eval_poly(Complex64::new(t, 0.0));
            (m[(0, 1)] * m[(2, 3)] - m[(0, 2)] * m[(1, 3)] + m[(0, 3)] * m[(1, 2)]).re
        })
        .collect();
    newton_interpolate(&nodes, &vals)
}

/// Per-coefficient max drift of the named spectral coefficients along a
/// trajectory.
pub fn spectral_drift(
    spec: &SystemSpec,
    traj: &Trajectory,
) -> Result<ConservationReport, LaxError> {
    let base = named_coefficients(spec, &traj.states[0])?;
    let mut max_drift = vec![0.0f64; base.len()];
    let mut t_at = vec![traj.times[0]; base.len()];
    for (t, x) in traj.times.iter().zip(traj.states.iter()) {
        let now = named_coefficients(spec, x)?;
        for (i, ((_, v0), (_, v))) in base.iter().zip(now.iter()).enumerate() {
            let d = (v - v0).abs();
            if d > max_drift[i] {
                max_drift[i] = d;
                t_at[i] = *t;
            }
        }
    }
    Ok(ConservationReport {
        channels: base
            .iter()
            .enumerate()
            .map(|(i, (n, v0))| ChannelReport {
                name: n.clone(),
                initial: *v0,
                max_drift: max_drift[i],
                t_at_max: t_at[i],
                conditional: false,
            })
            .collect(),
    })
}

/// The named spectral coefficients wrapped as monitor functions.
pub fn spectral_fns(spec: &SystemSpec) -> Result<Vec<SmoothFn>, LaxError> {
    let probe = match spec.kind() {
        crate::poisson::PhaseKind::E3 => {
            PhasePoint::e3(Vec3::new(0.1, 0.2, 0.3), Vec3::new(0.0, 0.0, 1.0))
        }
        crate::poisson::PhaseKind::SoN(n) => PhasePoint::son(
            SkewMat::from_upper(n, &vec![0.1; n * (n - 1) / 2]),
            SkewMat::from_upper(n, &vec![0.2; n * (n - 1) / 2]),
        ),
        crate::poisson::PhaseKind::E4 => return Err(LaxError::NoLaxPair(spec.case_name())),
    };
    let names: Vec<String> =
        named_coefficients(spec, &probe)?.into_iter().map(|(n, _)| n).collect();
    Ok(names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let spec = spec.clone();
            SmoothFn::new(name, move |x: &PhasePoint| {
                named_coefficients(&spec, x).map(|v| v[i].1).unwrap_or(f64::NAN)
            })
        })
        .collect())
}

pub use rmatrix::rmatrix_residual;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec4;
    use crate::systems::{BitopSpec, FamilyCase, Ha4Spec, HanSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ha_spec() -> HeavyTopSpec {
        HeavyTopSpec::hess_appelrot(Vec3::new(3.0, 2.0, 1.0), 1.0)
    }

    fn bitop() -> SystemSpec {
        SystemSpec::Bitop(BitopSpec { a: 1.3, b: 0.7, chi12: 0.9, chi34: 0.4 })
    }

    fn ha4() -> SystemSpec {
        SystemSpec::Ha4(Ha4Spec { j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9, chi34: 0.4 })
    }

    fn han5() -> SystemSpec {
        SystemSpec::Han(HanSpec { n: 5, j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9 })
    }

    fn chap2() -> SystemSpec {
        SystemSpec::Kirchhoff(KirchhoffSpec::chaplygin2([1.0, 2.0, 3.5], 0.0, 0.0, -0.1, -0.3, 1))
    }

    fn family(case: FamilyCase) -> SystemSpec {
        SystemSpec::Family(FamilySpec { x0: 0.8, z0: -0.5, i2: 1.7, a_case: case })
    }

    #[test]
    fn spectral_of_simple_pencil() {
        // L = λ · hat(e1): p(λ, μ) = -μ³ - λ²μ
        let l = MatrixPoly::from_real(vec![DMatrix::zeros(3, 3), hat_c(&Vec3::new(1.0, 0.0, 0.0))]);
        let sp = spectral(&l);
        assert!((sp.get(3, 0) + 1.0).abs() < 1e-12);
        assert!((sp.get(1, 2) + 1.0).abs() < 1e-12);
        let mut total = 0.0;
        for k in 0..=3 {
            for j in 0..=sp.lambda_degree {
                if (k, j) != (3, 0) && (k, j) != (1, 2) {
                    total += sp.get(k, j).abs();
                }
            }
        }
        assert!(total < 1e-10);
    }

    #[test]
    fn spectral_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        let spec = bitop();
        for _ in 0..5 {
            let x = spec.sample_state(&mut rng);
            let pair = build_lax(&spec, &x).unwrap();
            let sp = spectral(&pair.l);
            let a = DMatrix::from_fn(4, 4, |_, _| rng.gen::<f64>() - 0.5);
            let q = a.qr().q().map(|v| Complex64::new(v, 0.0));
            let conj = MatrixPoly::new(
                (0..=pair.l.degree()).map(|k| &q * pair.l.coeff(k) * q.transpose()).collect(),
            );
            let sp2 = spectral(&conj);
            for k in 0..=4 {
                for j in 0..=sp.lambda_degree {
                    assert!(
                        (sp.get(k, j) - sp2.get(k, j)).abs() <= 1e-9,
                        "mu^{k} l^{j}: {} vs {}",
                        sp.get(k, j),
                        sp2.get(k, j)
                    );
                }
            }
        }
    }

    #[test]
    fn skew_parity_in_mu() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        // 3×3 skew pencil: p odd in μ; 4×4: even
        let ht = SystemSpec::HeavyTop(ha_spec());
        let x = ht.sample_state(&mut rng);
        let sp = spectral(&build_lax(&ht, &x).unwrap().l);
        for j in 0..=sp.lambda_degree {
            assert!(sp.get(0, j).abs() < 1e-10 && sp.get(2, j).abs() < 1e-10);
        }
        let b = bitop();
        let y = b.sample_state(&mut rng);
        let sp = spectral(&build_lax(&b, &y).unwrap().l);
        for j in 0..=sp.lambda_degree {
            assert!(sp.get(1, j).abs() < 1e-10 && sp.get(3, j).abs() < 1e-10);
        }
    }

    #[test]
    fn hess_lax_entries_and_special_states() {
        let ht = ha_spec();
        let spec = SystemSpec::HeavyTop(ht.clone());
        let x = spec.sample_invariant_state(&mut ChaCha8Rng::seed_from_u64(82)).unwrap();
        let pair = build_lax(&spec, &x).unwrap();
        // L(1) = I2·hat(χ) + hat(M) + hat(Γ)
        let (m, g) = match &x {
            PhasePoint::E3 { m, g } => (*m, *g),
            _ => unreachable!(),
        };
        let want = hat_c(&(ht.chi * ht.inertia.y)) + hat_c(&m) + hat_c(&g);
        let got = pair.l.eval(Complex64::new(1.0, 0.0));
        for i in 0..3 {
            for j in 0..3 {
                assert!((got[(i, j)].re - want[(i, j)]).abs() < 1e-14);
                assert!(got[(i, j)].im.abs() < 1e-14);
            }
        }
        // bitop at M = Γ = 0: L = λ²(a+b)χ
        let b = BitopSpec { a: 1.3, b: 0.7, chi12: 0.9, chi34: 0.4 };
        let zero = PhasePoint::son(SkewMat::zeros(4), SkewMat::zeros(4));
        let pair = build_lax(&SystemSpec::Bitop(b.clone()), &zero).unwrap();
        let want = b.chi().scale(b.a + b.b);
        assert_eq!(pair.l.coeff(0).norm(), 0.0);
        assert_eq!(pair.l.coeff(1).norm(), 0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert!((pair.l.coeff(2)[(i, j)].re - want.get(i, j)).abs() < 1e-15);
            }
        }
        // Chaplygin L0 = ΓΓ^T: with Γ chosen so the rotated/rescaled Γ' = e1
        let k = KirchhoffSpec::chaplygin2([1.0, 2.0, 3.5], 0.0, 0.0, -0.1, -0.3, 1);
        let fr = chaplygin_frame(&k).unwrap();
        assert!(fr.sigma > 0.0);
        let g1 = fr.rot.transpose() * Vec3::new(1.0, 0.0, 0.0) / fr.sigma.sqrt();
        let y = PhasePoint::e3(Vec3::zeros(), g1);
        let pair = build_lax(&SystemSpec::Kirchhoff(k), &y).unwrap();
        let l0 = pair.l.coeff(0);
        assert!((l0[(0, 0)].re + 1.0).abs() < 1e-12);
        let rest: f64 = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| (i, j) != (0, 0))
            .map(|(i, j)| l0[(i, j)].norm())
            .sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn lax_residuals_on_manifold_all_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let ht = SystemSpec::HeavyTop(ha_spec());
        for _ in 0..100 {
            let x = ht.sample_invariant_state(&mut rng).unwrap();
            assert!(lax_residual(&ht, &x).unwrap() <= 1e-10);
        }
        let b = bitop();
        for _ in 0..100 {
            let x = b.sample_state(&mut rng);
            assert!(lax_residual(&b, &x).unwrap() <= 1e-10);
        }
        for spec in [ha4(), han5()] {
            for _ in 0..100 {
                let x = spec.sample_invariant_state(&mut rng).unwrap();
                assert!(lax_residual(&spec, &x).unwrap() <= 1e-10, "{}", spec.case_name());
            }
        }
        for case in [
            FamilyCase::CasimirF1,
            FamilyCase::CasimirF2,
            FamilyCase::H2,
            FamilyCase::GammaChi,
            FamilyCase::MSquare,
        ] {
            let spec = family(case);
            for _ in 0..100 {
                let x = spec.sample_state(&mut rng);
                assert!(lax_residual(&spec, &x).unwrap() <= 1e-10, "{}", spec.case_name());
            }
        }
        let ch = chap2();
        for _ in 0..100 {
            let x = ch.sample_invariant_state(&mut rng).unwrap();
            assert!(lax_residual(&ch, &x).unwrap() <= 1e-10);
        }
        let ht_spec = ha_spec();
        for _ in 0..100 {
            let x =
                SystemSpec::HeavyTop(ht_spec.clone()).sample_invariant_state(&mut rng).unwrap();
            assert!(hess_2x2_residual(&ht_spec, &x).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn off_manifold_residual_is_large() {
        let ht = SystemSpec::HeavyTop(ha_spec());
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        let x = ht.sample_invariant_state(&mut rng).unwrap();
        let (m, g) = match &x {
            PhasePoint::E3 { m, g } => (*m, *g),
            _ => unreachable!(),
        };
        // push F4 to 0.1
        let chi = ha_spec().chi;
        let off = PhasePoint::e3(m + chi * (0.1 / chi.dot(&chi)), g);
        let pair = build_lax(&ht, &off).unwrap();
        assert!(pair.off_manifold);
        assert!(lax_residual(&ht, &off).unwrap() > 1e-3);
        let ch = chap2();
        let y = PhasePoint::e3(Vec3::new(1.0, 0.3, 0.0), Vec3::new(0.0, 0.6, 0.8));
        assert!(lax_residual(&ch, &y).unwrap() > 1e-3);
    }

    #[test]
    fn no_lax_pair_for_unsupported_cases() {
        let spec = SystemSpec::Kirchhoff4(crate::systems::Kirchhoff4Spec {
            a1212: 1.0,
            a1313: 1.0,
            a3434: 1.0,
            a1234: 0.0,
            c11: 0.5,
            c33: 0.2,
        });
        let x = PhasePoint::e4(SkewMat::zeros(4), Vec4::new(1.0, 0.0, 0.0, 0.0));
        assert!(matches!(build_lax(&spec, &x), Err(LaxError::NoLaxPair(_))));
    }

    #[test]
    fn named_coefficients_match_printed_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        // HA: A = I2²(X0²+Z0²), B = 2I2(M1X0 + M3Z0), D, E, F
        let ht = ha_spec();
        let spec = SystemSpec::HeavyTop(ht.clone());
        let x = spec.sample_state(&mut rng);
        let (m, g) = match &x {
            PhasePoint::E3 { m, g } => (*m, *g),
            _ => unreachable!(),
        };
        let co: std::collections::HashMap<String, f64> =
            named_coefficients(&spec, &x).unwrap().into_iter().collect();
        let d2 = ht.chi.x * ht.chi.x + ht.chi.z * ht.chi.z;
        assert!((co["cfA"] - ht.inertia.y * ht.inertia.y * d2).abs() < 1e-9);
        assert!((co["cfB"] - 2.0 * ht.inertia.y * (m.x * ht.chi.x + m.z * ht.chi.z)).abs() < 1e-9);
        assert!(
            (co["cfD"] - (m.dot(&m) + 2.0 * ht.inertia.y * (ht.chi.x * g.x + ht.chi.z * g.z)))
                .abs()
                < 1e-9
        );
        assert!((co["cfE"] - 2.0 * m.dot(&g)).abs() < 1e-9);
        assert!((co["cfF"] - g.dot(&g)).abs() < 1e-9);

        // bitop: the full printed table
        let b = BitopSpec { a: 1.3, b: 0.7, chi12: 0.9, chi34: 0.4 };
        let spec = bitop();
        let y = spec.sample_state(&mut rng);
        let (mm, gg) = match &y {
            PhasePoint::SoN { m, g } => (m.clone(), g.clone()),
            _ => unreachable!(),
        };
        let co: std::collections::HashMap<String, f64> =
            named_coefficients(&spec, &y).unwrap().into_iter().collect();
        let (c12, c34) = ((b.a + b.b) * b.chi12, (b.a + b.b) * b.chi34);
        let msq = crate::algebra::inner(&mm, &mm).unwrap();
        let gsq = crate::algebra::inner(&gg, &gg).unwrap();
        let mg = crate::algebra::inner(&mm, &gg).unwrap();
        assert!((co["cfA"] - (c12 * c12 + c34 * c34)).abs() < 1e-9);
        assert!((co["cfB"] - 2.0 * (c12 * mm.get(0, 1) + c34 * mm.get(2, 3))).abs() < 1e-9);
        assert!((co["cfD"] - (msq + 2.0 * (c12 * gg.get(0, 1) + c34 * gg.get(2, 3)))).abs() < 1e-9);
        assert!((co["cfE"] - 2.0 * mg).abs() < 1e-9);
        assert!((co["cfF"] - gsq).abs() < 1e-9);
        assert!((co["cfG"] - c12 * c34).abs() < 1e-9);
        assert!((co["cfH"] - (c34 * mm.get(0, 1) + c12 * mm.get(2, 3))).abs() < 1e-9);
        let pf_mixed = mm.get(0, 1) * gg.get(2, 3) + gg.get(0, 1) * mm.get(2, 3)
            - mm.get(0, 2) * gg.get(1, 3)
            - gg.get(0, 2) * mm.get(1, 3)
            + mm.get(0, 3) * gg.get(1, 2)
            + gg.get(0, 3) * mm.get(1, 2);
        assert!((co["cfJ"] - pf_mixed).abs() < 1e-9);
        assert!((co["cfK"] - crate::algebra::pfaffian4(&gg)).abs() < 1e-9);
        let pf_m =
            mm.get(0, 1) * mm.get(2, 3) + mm.get(0, 3) * mm.get(1, 2) - mm.get(0, 2) * mm.get(1, 3);
        assert!((co["cfI"] - (c34 * gg.get(0, 1) + c12 * gg.get(2, 3) + pf_m)).abs() < 1e-9);
    }

    #[test]
    fn ha4_zero_coefficients_on_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(86);
        let spec = ha4();
        let x = spec.sample_invariant_state(&mut rng).unwrap();
        let co: std::collections::HashMap<String, f64> =
            named_coefficients(&spec, &x).unwrap().into_iter().collect();
        assert!(co["cfb"].abs() <= 1e-9, "b = {}", co["cfb"]);
        assert!(co["cfg"].abs() <= 1e-9, "g = {}", co["cfg"]);
    }

    #[test]
    fn chaplygin_spectral_curve_printed_form() {
        // -det(L-μ) equals the printed polynomial with the notation
        // (F1, F2, F3) = (H, <M,Γ>, <Γ,Γ>) of the normalized system
        let k = KirchhoffSpec::chaplygin2([1.0, 2.0, 3.5], 0.0, 0.0, -0.1, -0.3, 1);
        let spec = SystemSpec::Kirchhoff(k.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(87);
        let x = spec.sample_invariant_state(&mut rng).unwrap();
        let fr = chaplygin_frame(&k).unwrap();
        let (m, g) = match &x {
            PhasePoint::E3 { m, g } => (*m, *g),
            _ => unreachable!(),
        };
        let mr = fr.rot * m;
        let gr = (fr.rot * g) * fr.sigma.sqrt();
        let (a1, c1, c3) = (fr.a1, fr.c1, fr.c3);
        let f1 = 0.5
            * (a1 * (mr.x * mr.x + mr.y * mr.y)
                + 2.0 * fr.a13 * mr.x * mr.z
                + fr.a3 * mr.z * mr.z
                + c1 * (gr.x * gr.x + gr.y * gr.y)
                + c3 * gr.z * gr.z);
        let f2 = mr.dot(&gr);
        let f3 = gr.dot(&gr);
        let pair = build_lax(&spec, &x).unwrap();
        for _ in 0..4 {
            let lam = rng.gen::<f64>() * 3.0 - 1.5;
            let mu = rng.gen::<f64>() * 3.0 - 1.5;
            let det = {
                let q = charpoly_asc(&pair.l.eval(Complex64::new(lam, 0.0)));
                q.iter()
                    .enumerate()
                    .map(|(kk, c)| c * Complex64::new(mu, 0.0).powu(kk as u32))
                    .sum::<Complex64>()
            };
            let l1 = lam / a1.sqrt();
            let printed = mu.powi(3) + mu * mu * f3 - l1 * l1 * mu * mu * (c3 + 2.0 * c1)
                + l1 * l1 * mu * (2.0 * f1 - (2.0 * c1 + c3) * f3)
                + l1.powi(4) * mu * c1 * (c1 + 2.0 * c3)
                - l1.powi(6) * c1 * c1 * c3
                - l1.powi(4) * (2.0 * c1 * f1 - c1 * (c1 + c3) * f3)
                + l1 * l1 * a1 * f2 * f2;
            assert!(
                (det.re + printed).abs() <= 1e-9,
                "curve mismatch: det = {}, printed = {printed}",
                det.re
            );
        }
    }
}
