//! Four-dimensional Kirchhoff and Chaplygin cases on `e(4)`.
//!
//! The Kirchhoff case is the quadratic Hamiltonian with `M12`, `M34` as
//! linear first integrals (which forces the mixed `B` terms to vanish);
//! it is Liouville-integrable with the additional quadratic integral `F5`.
//! The Chaplygin case perturbs it so `M12`, `M34` survive only as invariant
//! relations.

use super::{sample_unit3, ConditionChecker, ViolationReport};
use crate::algebra::{SkewMat, Vec4};
use crate::poisson::{e4_casimir_components, ham_field, PhasePoint, SmoothFn};
use nalgebra::DVector;

fn expect_e4(x: &PhasePoint) -> (&SkewMat, &Vec4) {
    match x {
        PhasePoint::E4 { m, g } => (m, g),
        _ => panic!("expected an e(4) phase point"),
    }
}

/// `2H = A1212 M12² + A1313 (M13²+M14²+M23²+M24²) + A3434 M34²
///      + A1234 M12 M34 + C11 (Γ1²+Γ2²) + C33 (Γ3²+Γ4²)`.
#[derive(Clone, Debug)]
pub struct Kirchhoff4Spec {
    pub a1212: f64,
    pub a1313: f64,
    pub a3434: f64,
    pub a1234: f64,
    pub c11: f64,
    pub c33: f64,
}

impl Kirchhoff4Spec {
    pub fn validate(&self, _tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(_tol);
        for (name, v) in [
            ("A1212", self.a1212),
            ("A1313", self.a1313),
            ("A3434", self.a3434),
            ("A1234", self.a1234),
            ("C11", self.c11),
            ("C33", self.c33),
        ] {
            if !v.is_finite() {
                c.nonzero(&format!("{name} finite"), f64::NAN);
            }
        }
        c.finish("kirchhoff4")
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let s = self.clone();
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_e4(x);
            let (m12, m34) = (m.get(0, 1), m.get(2, 3));
            let mid = m.get(0, 2).powi(2) + m.get(0, 3).powi(2) + m.get(1, 2).powi(2)
                + m.get(1, 3).powi(2);
            0.5 * (s.a1212 * m12 * m12
                + s.a1313 * mid
                + s.a3434 * m34 * m34
                + s.a1234 * m12 * m34
                + s.c11 * (g.x * g.x + g.y * g.y)
                + s.c33 * (g.z * g.z + g.w * g.w))
        })
        .with_gradient({
            let s = self.clone();
            move |x: &PhasePoint| {
                let (m, g) = expect_e4(x);
                DVector::from_vec(vec![
                    s.a1212 * m.get(0, 1) + 0.5 * s.a1234 * m.get(2, 3),
                    s.a1313 * m.get(0, 2),
                    s.a1313 * m.get(0, 3),
                    s.a1313 * m.get(1, 2),
                    s.a1313 * m.get(1, 3),
                    s.a3434 * m.get(2, 3) + 0.5 * s.a1234 * m.get(0, 1),
                    s.c11 * g.x,
                    s.c11 * g.y,
                    s.c33 * g.z,
                    s.c33 * g.w,
                ])
            }
        })
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        ham_field(&self.hamiltonian(), x)
    }

    /// `H, F3 = M12, F4 = M34` and the quadratic `F5` (with `a1 = A1313`,
    /// `c1 = C11`, `c3 = C33`); all in involution.
    pub fn integrals(&self) -> Vec<SmoothFn> {
        let mut out = vec![self.hamiltonian()];
        out.push(SmoothFn::new("F3", |x: &PhasePoint| expect_e4(x).0.get(0, 1)));
        out.push(SmoothFn::new("F4", |x: &PhasePoint| expect_e4(x).0.get(2, 3)));
        let (a1, c1, c3) = (self.a1313, self.c11, self.c33);
        out.push(SmoothFn::new("F5", move |x: &PhasePoint| {
            let (m, g) = expect_e4(x);
            let pf_m = m.get(0, 1) * m.get(2, 3) + m.get(0, 3) * m.get(1, 2)
                - m.get(0, 2) * m.get(1, 3);
            let w = e4_casimir_components(m, g);
            a1 * pf_m * pf_m - c1 * (w[0] * w[0] + w[3] * w[3]) - c3 * (w[1] * w[1] + w[2] * w[2])
        }));
        out
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        sample_e4_state(rng)
    }
}

/// The 4D Chaplygin Hamiltonian: the Kirchhoff terms plus all mixed
/// `M12 M_xy`, `M_xy M34` couplings and linear `M12 Γ_k`, `M34 Γ_k` terms.
#[derive(Clone, Debug)]
pub struct Chaplygin4Spec {
    pub base: Kirchhoff4Spec,
    /// `A1213, A1214, A1223, A1224`
    pub a12: [f64; 4],
    /// `A1334, A1434, A2334, A2434`
    pub a34: [f64; 4],
    /// `B121, B122, B123, B124`
    pub b12: [f64; 4],
    /// `B341, B342, B343, B344`
    pub b34: [f64; 4],
}

impl Chaplygin4Spec {
    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        let all = self
            .a12
            .iter()
            .chain(self.a34.iter())
            .chain(self.b12.iter())
            .chain(self.b34.iter());
        for (i, v) in all.enumerate() {
            if !v.is_finite() {
                c.nonzero(&format!("coefficient {i} finite"), f64::NAN);
            }
        }
        let mut rep = self.base.validate(tol);
        rep.case = "chaplygin4".into();
        rep.violations.extend(c.finish("chaplygin4").violations);
        rep
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let base = self.base.hamiltonian();
        let s = self.clone();
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_e4(x);
            let m12 = m.get(0, 1);
            let m34 = m.get(2, 3);
            let mid = [m.get(0, 2), m.get(0, 3), m.get(1, 2), m.get(1, 3)];
            let gv = [g.x, g.y, g.z, g.w];
            let mut h2 = 0.0;
            for k in 0..4 {
                h2 += s.a12[k] * m12 * mid[k] + s.a34[k] * mid[k] * m34;
                h2 += s.b12[k] * m12 * gv[k] + s.b34[k] * m34 * gv[k];
            }
            base.eval(x) + 0.5 * h2
        })
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        ham_field(&self.hamiltonian(), x)
    }

    pub fn integrals(&self) -> Vec<SmoothFn> {
        vec![self.hamiltonian()]
    }

    /// `M12` and `M34` are invariant relations (not integrals) here.
    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        vec![
            SmoothFn::new("M12", |x: &PhasePoint| expect_e4(x).0.get(0, 1)),
            SmoothFn::new("M34", |x: &PhasePoint| expect_e4(x).0.get(2, 3)),
        ]
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        sample_e4_state(rng)
    }

    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        match sample_e4_state(rng) {
            PhasePoint::E4 { mut m, g } => {
                m.set(0, 1, 0.0);
                m.set(2, 3, 0.0);
                PhasePoint::e4(m, g)
            }
            _ => unreachable!(),
        }
    }
}

fn sample_e4_state(rng: &mut impl rand::Rng) -> PhasePoint {
    let upper: Vec<f64> = (0..6).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let m = SkewMat::from_upper(4, &upper);
    // unit impulsive force
    let u = sample_unit3(rng);
    let w = rng.gen::<f64>() * 2.0 - 1.0;
    let norm = (1.0 + w * w).sqrt();
    let g = Vec4::new(u.x / norm, u.y / norm, u.z / norm, w / norm);
    PhasePoint::e4(m, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::{bracket, casimirs, PhaseKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k4() -> Kirchhoff4Spec {
        Kirchhoff4Spec { a1212: 0.9, a1313: 0.6, a3434: 1.2, a1234: 0.3, c11: 0.5, c33: -0.4 }
    }

    fn ch4() -> Chaplygin4Spec {
        Chaplygin4Spec {
            base: k4(),
            a12: [0.11, -0.07, 0.05, 0.13],
            a34: [-0.09, 0.08, 0.12, -0.06],
            b12: [0.21, -0.17, 0.1, 0.05],
            b34: [-0.12, 0.07, 0.2, -0.18],
        }
    }

    #[test]
    fn involution_of_kirchhoff4_integrals() {
        let spec = k4();
        let ints = spec.integrals();
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..100 {
            let x = spec.sample_state(&mut rng);
            for i in 0..ints.len() {
                for j in (i + 1)..ints.len() {
                    let b = bracket(&ints[i], &ints[j], &x);
                    assert!(
                        b.abs() <= 1e-8,
                        "{{{}, {}}} = {b}",
                        ints[i].name(),
                        ints[j].name()
                    );
                }
            }
        }
    }

    #[test]
    fn casimirs_conserved_pointwise() {
        let spec = k4();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for c in casimirs(PhaseKind::E4) {
            for _ in 0..20 {
                let x = spec.sample_state(&mut rng);
                let rate = c.gradient(&x).dot(&spec.rhs(&x));
                assert!(rate.abs() <= 1e-7, "{} rate {rate}", c.name());
            }
        }
    }

    #[test]
    fn chaplygin4_relations_invariant_on_manifold() {
        let spec = ch4();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..20 {
            let x = spec.sample_invariant_state(&mut rng);
            for rel in spec.invariant_relations() {
                assert!(rel.eval(&x).abs() <= 1e-15);
                let rate = rel.gradient(&x).dot(&spec.rhs(&x));
                assert!(rate.abs() <= 1e-8, "{} rate {rate}", rel.name());
            }
        }
        // generically off the manifold they move
        let x = spec.sample_state(&mut rng);
        let rates: Vec<f64> = spec
            .invariant_relations()
            .iter()
            .map(|r| r.gradient(&x).dot(&spec.rhs(&x)).abs())
            .collect();
        assert!(rates.iter().any(|&r| r > 1e-4), "{rates:?}");
    }
}
