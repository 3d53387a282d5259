//! Higher-dimensional rigid bodies on `so(n)×so(n)`: the Lagrange bitop and
//! the four- and n-dimensional Hess–Appel'rot systems.
//!
//! The equations of motion are `Mdot = [M,Ω] + [Γ,χ]`, `Γdot = [Γ,Ω]`; the
//! two metrics in play are `M = IΩ + ΩI` (bitop, diagonal mass tensor) and
//! `Ω = JM + MJ` (Hess–Appel'rot, inverse-metric block form). For `n = 4`
//! every right-hand side also has an independent split-form code path
//! through the `so(3)×so(3)` isomorphism, used as a cross-check.

use super::{sample_unit3, ConditionChecker, ViolationReport};
use crate::algebra::{commutator, inner, join4, split4, SkewMat, SplitPair, Vec3};
use crate::poisson::{PhasePoint, SmoothFn};
use nalgebra::{DMatrix, DVector};

fn expect_son(x: &PhasePoint) -> (&SkewMat, &SkewMat) {
    match x {
        PhasePoint::SoN { m, g } => (m, g),
        _ => panic!("expected an so(n)xso(n) phase point"),
    }
}

fn son_tangent(mdot: SkewMat, gdot: SkewMat) -> DVector<f64> {
    let mut v = mdot.upper();
    v.extend(gdot.upper());
    DVector::from_vec(v)
}

/// χ with only the (1,2) and (3,4) entries set.
pub(crate) fn block_chi(n: usize, chi12: f64, chi34: f64) -> SkewMat {
    let mut chi = SkewMat::zeros(n);
    chi.set(0, 1, chi12);
    if n >= 4 && chi34 != 0.0 {
        chi.set(2, 3, chi34);
    }
    chi
}

/// Split vectors of the block χ: `χ_i = (0, 0, -(χ12 ± χ34)/2)`.
pub(crate) fn chi_split(chi12: f64, chi34: f64) -> (Vec3, Vec3) {
    (
        Vec3::new(0.0, 0.0, -(chi12 + chi34) / 2.0),
        Vec3::new(0.0, 0.0, -(chi12 - chi34) / 2.0),
    )
}

// ---------------------------------------------------------------------------
// Lagrange bitop
// ---------------------------------------------------------------------------

/// Mass tensor `I = diag(a,a,b,b)` and block χ, with `a≠b`, `χ12,χ34 ≠ 0`,
/// `|χ12| ≠ |χ34|`.
#[derive(Clone, Debug)]
pub struct BitopSpec {
    pub a: f64,
    pub b: f64,
    pub chi12: f64,
    pub chi34: f64,
}

impl BitopSpec {
    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        c.positive("a > 0", self.a);
        c.positive("b > 0", self.b);
        c.nonzero("a != b", self.a - self.b);
        c.nonzero("chi12 != 0", self.chi12);
        c.nonzero("chi34 != 0", self.chi34);
        c.nonzero("|chi12| != |chi34|", self.chi12.abs() - self.chi34.abs());
        c.finish("bitop")
    }

    pub fn chi(&self) -> SkewMat {
        block_chi(4, self.chi12, self.chi34)
    }

    /// Entrywise inverse of `M_ij = (I_i + I_j) Ω_ij`.
    pub fn omega(&self, m: &SkewMat) -> SkewMat {
        let iv = [self.a, self.a, self.b, self.b];
        let mut om = SkewMat::zeros(4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                om.set(i, j, m.get(i, j) / (iv[i] + iv[j]));
            }
        }
        om
    }

    pub fn rhs_matrix(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_son(x);
        let om = self.omega(m);
        let chi = self.chi();
        let mdot = commutator(m, &om).unwrap().add(&commutator(g, &chi).unwrap());
        let gdot = commutator(g, &om).unwrap();
        son_tangent(mdot, gdot)
    }

    /// Split angular velocities `(Ω1, Ω2)` from the split momenta, through
    /// the diagonal factors `I± = diag(I2+I3, I1+I3, I1+I2)` etc.
    pub fn omega_split(&self, m1: &Vec3, m2: &Vec3) -> (Vec3, Vec3) {
        let apb = self.a + self.b;
        let amb = self.a - self.b;
        // components 1,2 decouple; component 3 solves a 2x2 system
        let det = apb * apb - amb * amb; // = 4ab
        let o13 = (apb * m1.z - amb * m2.z) / det;
        let o23 = (apb * m2.z - amb * m1.z) / det;
        (
            Vec3::new(m1.x / apb, m1.y / apb, o13),
            Vec3::new(m2.x / apb, m2.y / apb, o23),
        )
    }

    /// The split-form right-hand side `Mdot_i = 2(M_i×Ω_i + Γ_i×χ_i)`,
    /// `Γdot_i = 2 Γ_i×Ω_i` — an independent code path from
    /// [`Self::rhs_matrix`].
    pub fn rhs_split(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_son(x);
        let ms = split4(m).unwrap();
        let gs = split4(g).unwrap();
        let (o1, o2) = self.omega_split(&ms.first, &ms.second);
        let (c1, c2) = chi_split(self.chi12, self.chi34);
        let mdot = join4(&SplitPair {
            first: 2.0 * (ms.first.cross(&o1) + gs.first.cross(&c1)),
            second: 2.0 * (ms.second.cross(&o2) + gs.second.cross(&c2)),
        });
        let gdot = join4(&SplitPair {
            first: 2.0 * gs.first.cross(&o1),
            second: 2.0 * gs.second.cross(&o2),
        });
        son_tangent(mdot, gdot)
    }

    /// `H = 1/2 <M,Ω> + <χ,Γ>`.
    pub fn hamiltonian(&self) -> SmoothFn {
        let spec = self.clone();
        let chi = self.chi();
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_son(x);
            0.5 * inner(m, &spec.omega(m)).unwrap() + inner(&chi, g).unwrap()
        })
        .with_gradient({
            let spec = self.clone();
            let chi = self.chi();
            move |x: &PhasePoint| {
                let (m, _) = expect_son(x);
                let mut v = spec.omega(m).upper();
                v.extend(chi.upper());
                DVector::from_vec(v)
            }
        })
    }

    /// Hamiltonian plus the non-Casimir spectral coefficients `B, D, H, I`
    /// of the `L(λ) = λ²C + λM + Γ` pencil with `C = (a+b)χ`.
    pub fn integrals(&self) -> Vec<SmoothFn> {
        let c12 = (self.a + self.b) * self.chi12;
        let c34 = (self.a + self.b) * self.chi34;
        let mut out = vec![self.hamiltonian()];
        out.extend(pencil_coefficient_fns(c12, c34, &["cfB", "cfD", "cfH", "cfI"]));
        out
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        sample_son_state(rng)
    }
}

// ---------------------------------------------------------------------------
// Four-dimensional Hess–Appel'rot
// ---------------------------------------------------------------------------

/// Metric `Ω = JM + MJ` with the block inverse-inertia
/// `J = [[J1,0,J13,0],[0,J1,0,J24],[J13,0,J3,0],[0,J24,0,J3]]` and block χ.
#[derive(Clone, Debug)]
pub struct Ha4Spec {
    pub j1: f64,
    pub j3: f64,
    pub j13: f64,
    pub j24: f64,
    pub chi12: f64,
    pub chi34: f64,
}

impl Ha4Spec {
    pub fn j_matrix(&self) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(4, 4);
        j[(0, 0)] = self.j1;
        j[(1, 1)] = self.j1;
        j[(2, 2)] = self.j3;
        j[(3, 3)] = self.j3;
        j[(0, 2)] = self.j13;
        j[(2, 0)] = self.j13;
        j[(1, 3)] = self.j24;
        j[(3, 1)] = self.j24;
        j
    }

    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        c.positive("J1 > 0", self.j1);
        c.positive("J3 > 0", self.j3);
        c.positive("J1*J3 - J13^2 > 0", self.j1 * self.j3 - self.j13 * self.j13);
        c.positive("J1*J3 - J24^2 > 0", self.j1 * self.j3 - self.j24 * self.j24);
        c.finish("ha4")
    }

    pub fn chi(&self) -> SkewMat {
        block_chi(4, self.chi12, self.chi34)
    }

    pub fn omega(&self, m: &SkewMat) -> SkewMat {
        let j = self.j_matrix();
        let prod = &j * m.as_matrix() + m.as_matrix() * &j;
        SkewMat::from_matrix_tol(prod, 1e-9).expect("JM + MJ is skew")
    }

    pub fn rhs_matrix(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_son(x);
        let om = self.omega(m);
        let chi = self.chi();
        let mdot = commutator(m, &om).unwrap().add(&commutator(g, &chi).unwrap());
        let gdot = commutator(g, &om).unwrap();
        son_tangent(mdot, gdot)
    }

    /// The split angular velocities printed for the classical integration.
    pub fn omega_split(&self, m1: &Vec3, m2: &Vec3) -> (Vec3, Vec3) {
        let (j1, j3, j13, j24) = (self.j1, self.j3, self.j13, self.j24);
        let o1 = Vec3::new(
            (j1 + j3) * m1.x - (j13 - j24) * m2.z,
            (j1 + j3) * m1.y,
            (j1 + j3) * m1.z + (j1 - j3) * m2.z - (j13 + j24) * m2.x,
        );
        let o2 = Vec3::new(
            (j1 + j3) * m2.x - (j13 + j24) * m1.z,
            (j1 + j3) * m2.y,
            (j1 + j3) * m2.z + (j1 - j3) * m1.z - (j13 - j24) * m1.x,
        );
        (o1, o2)
    }

    /// Split-form right-hand side (independent path from the matrix form).
    pub fn rhs_split(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_son(x);
        let ms = split4(m).unwrap();
        let gs = split4(g).unwrap();
        let (o1, o2) = self.omega_split(&ms.first, &ms.second);
        let (c1, c2) = chi_split(self.chi12, self.chi34);
        let mdot = join4(&SplitPair {
            first: 2.0 * (ms.first.cross(&o1) + gs.first.cross(&c1)),
            second: 2.0 * (ms.second.cross(&o2) + gs.second.cross(&c2)),
        });
        let gdot = join4(&SplitPair {
            first: 2.0 * gs.first.cross(&o1),
            second: 2.0 * gs.second.cross(&o2),
        });
        son_tangent(mdot, gdot)
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let spec = self.clone();
        let chi = self.chi();
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_son(x);
            0.5 * inner(m, &spec.omega(m)).unwrap() + inner(&chi, g).unwrap()
        })
        .with_gradient({
            let spec = self.clone();
            let chi = self.chi();
            move |x: &PhasePoint| {
                let (m, _) = expect_son(x);
                let mut v = spec.omega(m).upper();
                v.extend(chi.upper());
                DVector::from_vec(v)
            }
        })
    }

    /// `C = χ/(J1+J3)` entries of the Lax pencil.
    pub fn c_entries(&self) -> (f64, f64) {
        (self.chi12 / (self.j1 + self.j3), self.chi34 / (self.j1 + self.j3))
    }

    /// Hamiltonian, the pencil integrals `c, h`, and the split energies
    /// `h_i = <M_i,M_i> + 2<χ_i,Γ_i>/(J1+J3)`.
    pub fn integrals(&self) -> Vec<SmoothFn> {
        let (c12, c34) = self.c_entries();
        let mut out = vec![self.hamiltonian()];
        out.extend(pencil_coefficient_fns(c12, c34, &["cfc", "cfh"]));
        for i in 0..2 {
            let (j1, j3) = (self.j1, self.j3);
            let (chi1, chi2) = chi_split(self.chi12, self.chi34);
            let chi_i = if i == 0 { chi1 } else { chi2 };
            out.push(SmoothFn::new(format!("h{}", i + 1), move |x: &PhasePoint| {
                let (m, g) = expect_son(x);
                let ms = split4(m).unwrap();
                let gs = split4(g).unwrap();
                let (mi, gi) = if i == 0 { (ms.first, gs.first) } else { (ms.second, gs.second) };
                mi.dot(&mi) + 2.0 / (j1 + j3) * chi_i.dot(&gi)
            }));
        }
        out
    }

    /// `M12` and `M34` vanish on the invariant manifold.
    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        vec![
            SmoothFn::new("M12", |x: &PhasePoint| expect_son(x).0.get(0, 1)),
            SmoothFn::new("M34", |x: &PhasePoint| expect_son(x).0.get(2, 3)),
        ]
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        sample_son_state(rng)
    }

    /// State with `M_(1)3 = M_(2)3 = 0`, i.e. `M12 = M34 = 0`.
    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let mut m1 = super::sample_box3(rng, 1.2);
        let mut m2 = super::sample_box3(rng, 1.2);
        m1.z = 0.0;
        m2.z = 0.0;
        let g = join4(&SplitPair { first: sample_unit3(rng), second: sample_unit3(rng) });
        PhasePoint::son(join4(&SplitPair { first: m1, second: m2 }), g)
    }
}

// ---------------------------------------------------------------------------
// n-dimensional Hess–Appel'rot
// ---------------------------------------------------------------------------

/// `J = diag(J1,J1,J3,...,J3)` plus `J13`, `J24` off-diagonal couplings and
/// χ with only the (1,2) entry; defined for `n >= 5`.
#[derive(Clone, Debug)]
pub struct HanSpec {
    pub n: usize,
    pub j1: f64,
    pub j3: f64,
    pub j13: f64,
    pub j24: f64,
    pub chi12: f64,
}

impl HanSpec {
    pub fn j_matrix(&self) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.n, self.n);
        j[(0, 0)] = self.j1;
        j[(1, 1)] = self.j1;
        for k in 2..self.n {
            j[(k, k)] = self.j3;
        }
        j[(0, 2)] = self.j13;
        j[(2, 0)] = self.j13;
        j[(1, 3)] = self.j24;
        j[(3, 1)] = self.j24;
        j
    }

    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        if self.n < 5 {
            c.positive("n >= 5", self.n as f64 - 4.0);
        }
        c.positive("J1 > 0", self.j1);
        c.positive("J3 > 0", self.j3);
        c.positive("J1*J3 - J13^2 > 0", self.j1 * self.j3 - self.j13 * self.j13);
        c.positive("J1*J3 - J24^2 > 0", self.j1 * self.j3 - self.j24 * self.j24);
        c.finish("han")
    }

    pub fn chi(&self) -> SkewMat {
        block_chi(self.n, self.chi12, 0.0)
    }

    pub fn omega(&self, m: &SkewMat) -> SkewMat {
        let j = self.j_matrix();
        let prod = &j * m.as_matrix() + m.as_matrix() * &j;
        SkewMat::from_matrix_tol(prod, 1e-9).expect("JM + MJ is skew")
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_son(x);
        let om = self.omega(m);
        let chi = self.chi();
        let mdot = commutator(m, &om).unwrap().add(&commutator(g, &chi).unwrap());
        let gdot = commutator(g, &om).unwrap();
        son_tangent(mdot, gdot)
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let spec = self.clone();
        let chi = self.chi();
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_son(x);
            0.5 * inner(m, &spec.omega(m)).unwrap() + inner(&chi, g).unwrap()
        })
    }

    pub fn integrals(&self) -> Vec<SmoothFn> {
        vec![self.hamiltonian()]
    }

    /// `M12 = 0` and `M_lp = 0` for `l,p >= 3`.
    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        let mut out = vec![SmoothFn::new("M12", |x: &PhasePoint| expect_son(x).0.get(0, 1))];
        for l in 2..self.n {
            for p in (l + 1)..self.n {
                out.push(SmoothFn::new(format!("M{}{}", l + 1, p + 1), move |x: &PhasePoint| {
                    expect_son(x).0.get(l, p)
                }));
            }
        }
        out
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let k = self.n * (self.n - 1) / 2;
        let upper: Vec<f64> = (0..2 * k).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        PhasePoint::son(
            SkewMat::from_upper(self.n, &upper[..k]),
            SkewMat::from_upper(self.n, &upper[k..]),
        )
    }

    /// State on the manifold: only `M_1p`, `M_2p` (p >= 3) nonzero.
    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let mut m = SkewMat::zeros(self.n);
        for p in 2..self.n {
            m.set(0, p, rng.gen::<f64>() * 2.0 - 1.0);
            m.set(1, p, rng.gen::<f64>() * 2.0 - 1.0);
        }
        let k = self.n * (self.n - 1) / 2;
        let upper: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        PhasePoint::son(m, SkewMat::from_upper(self.n, &upper))
    }
}

/// State with both split Γ components normalized to unit length (the
/// classical-integration constants assume `<Γ_i,Γ_i> = 1`).
fn sample_son_state(rng: &mut impl rand::Rng) -> PhasePoint {
    let m = join4(&SplitPair {
        first: super::sample_box3(rng, 1.2),
        second: super::sample_box3(rng, 1.2),
    });
    let g = join4(&SplitPair { first: sample_unit3(rng), second: sample_unit3(rng) });
    PhasePoint::son(m, g)
}

/// Named coefficient functions of the spectral pencil `λ²C + λM + Γ` for a
/// block `C` (entries `c12`, `c34`). Only the requested names are returned;
/// see [`crate::lax`] for the full table.
fn pencil_coefficient_fns(c12: f64, c34: f64, names: &[&str]) -> Vec<SmoothFn> {
    names
        .iter()
        .map(|&name| {
            let n = name.to_string();
            match name {
                "cfB" | "cfb" => SmoothFn::new(n, move |x: &PhasePoint| {
                    let (m, _) = expect_son(x);
                    2.0 * c12 * m.get(0, 1) + 2.0 * c34 * m.get(2, 3)
                }),
                "cfD" | "cfc" => SmoothFn::new(n, move |x: &PhasePoint| {
                    let (m, g) = expect_son(x);
                    inner(m, m).unwrap() + 2.0 * (c12 * g.get(0, 1) + c34 * g.get(2, 3))
                }),
                "cfH" | "cfg" => SmoothFn::new(n, move |x: &PhasePoint| {
                    let (m, _) = expect_son(x);
                    c34 * m.get(0, 1) + c12 * m.get(2, 3)
                }),
                "cfI" | "cfh" => SmoothFn::new(n, move |x: &PhasePoint| {
                    let (m, g) = expect_son(x);
                    c34 * g.get(0, 1)
                        + c12 * g.get(2, 3)
                        + m.get(0, 1) * m.get(2, 3)
                        + m.get(1, 2) * m.get(0, 3)
                        - m.get(0, 2) * m.get(1, 3)
                }),
                other => panic!("unknown pencil coefficient {other}"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::ham_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bitop() -> BitopSpec {
        BitopSpec { a: 1.3, b: 0.7, chi12: 0.9, chi34: 0.4 }
    }

    fn ha4() -> Ha4Spec {
        Ha4Spec { j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9, chi34: 0.4 }
    }

    #[test]
    fn validators() {
        assert!(bitop().validate(1e-12).ok());
        assert!(!BitopSpec { a: 1.0, b: 1.0, chi12: 1.0, chi34: 0.5 }.validate(1e-12).ok());
        assert!(!BitopSpec { a: 1.0, b: 2.0, chi12: 0.5, chi34: 0.5 }.validate(1e-12).ok());
        assert!(ha4().validate(1e-12).ok());
        assert!(HanSpec { n: 5, j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9 }
            .validate(1e-12)
            .ok());
        assert!(!HanSpec { n: 4, j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9 }
            .validate(1e-12)
            .ok());
    }

    #[test]
    fn matrix_and_split_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let b = bitop();
        let h = ha4();
        for _ in 0..100 {
            let x = b.sample_state(&mut rng);
            let d = (b.rhs_matrix(&x) - b.rhs_split(&x)).amax();
            assert!(d <= 1e-12, "bitop paths differ by {d}");
            let y = h.sample_state(&mut rng);
            let d = (h.rhs_matrix(&y) - h.rhs_split(&y)).amax();
            assert!(d <= 1e-12, "ha4 paths differ by {d}");
        }
    }

    #[test]
    fn zero_state_zero_field() {
        let z = PhasePoint::son(SkewMat::zeros(4), SkewMat::zeros(4));
        assert_eq!(bitop().rhs_matrix(&z).norm(), 0.0);
        assert_eq!(ha4().rhs_matrix(&z).norm(), 0.0);
    }

    #[test]
    fn hamiltonian_generates_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let b = bitop();
        let h4 = ha4();
        let hn = HanSpec { n: 5, j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9 };
        for _ in 0..10 {
            let x = b.sample_state(&mut rng);
            assert!((ham_field(&b.hamiltonian(), &x) - b.rhs_matrix(&x)).norm() <= 1e-8);
            let y = h4.sample_state(&mut rng);
            assert!((ham_field(&h4.hamiltonian(), &y) - h4.rhs_matrix(&y)).norm() <= 1e-8);
            let z = hn.sample_state(&mut rng);
            assert!((ham_field(&hn.hamiltonian(), &z) - hn.rhs(&z)).norm() <= 1e-7);
        }
    }

    #[test]
    fn ha4_invariant_relations_on_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let h = ha4();
        let x = h.sample_invariant_state(&mut rng);
        for rel in h.invariant_relations() {
            assert!(rel.eval(&x).abs() <= 1e-15);
        }
        // Mdot12 and Mdot34 vanish there too
        let d = h.rhs_matrix(&x);
        assert!(d[0].abs() <= 1e-14 && d[5].abs() <= 1e-14);
    }

    #[test]
    fn han_invariant_relations_stationary_on_manifold() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let hn = HanSpec { n: 5, j1: 0.8, j3: 0.5, j13: 0.3, j24: 0.2, chi12: 0.9 };
        let x = hn.sample_invariant_state(&mut rng);
        let d = x.kind().dim();
        let tangent = hn.rhs(&x);
        let names = x.kind().coord_names();
        for rel in hn.invariant_relations() {
            assert!(rel.eval(&x).abs() <= 1e-15);
            // the time derivative of each relation coordinate vanishes
            let idx = names.iter().position(|n| n == rel.name()).unwrap();
            assert!(idx < d);
            assert!(tangent[idx].abs() <= 1e-13, "{} moves: {}", rel.name(), tangent[idx]);
        }
    }
}
