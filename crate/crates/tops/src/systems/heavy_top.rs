//! The heavy rigid body fixed at a point: Euler–Poisson equations on `e(3)`
//! and the classical case catalog.

use super::{sample_box3, sample_unit3, ConditionChecker, ViolationReport};
use crate::algebra::Vec3;
use crate::poisson::{PhasePoint, SmoothFn};
use nalgebra::DVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeavyTopCase {
    Generic,
    Euler,
    Lagrange,
    Kowalevski,
    GoryachevChaplygin,
    HessAppelrot,
}

impl HeavyTopCase {
    pub fn tag(&self) -> &'static str {
        match self {
            HeavyTopCase::Generic => "heavy-top",
            HeavyTopCase::Euler => "euler",
            HeavyTopCase::Lagrange => "lagrange",
            HeavyTopCase::Kowalevski => "kowalevski",
            HeavyTopCase::GoryachevChaplygin => "goryachev-chaplygin",
            HeavyTopCase::HessAppelrot => "hess-appelrot",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "heavy-top" | "generic" => HeavyTopCase::Generic,
            "euler" => HeavyTopCase::Euler,
            "lagrange" => HeavyTopCase::Lagrange,
            "kowalevski" => HeavyTopCase::Kowalevski,
            "goryachev-chaplygin" => HeavyTopCase::GoryachevChaplygin,
            "hess-appelrot" => HeavyTopCase::HessAppelrot,
            _ => return None,
        })
    }
}

/// `Mdot = M×Ω + Γ×χ`, `Γdot = Γ×Ω` with `M = IΩ`, `I = diag(I1,I2,I3)`,
/// `χ = mg`·(center-of-mass vector).
#[derive(Clone, Debug)]
pub struct HeavyTopSpec {
    pub inertia: Vec3,
    pub chi: Vec3,
    pub case: HeavyTopCase,
}

impl HeavyTopSpec {
    pub fn new(inertia: Vec3, chi: Vec3, case: HeavyTopCase) -> Self {
        HeavyTopSpec { inertia, chi, case }
    }

    pub fn omega(&self, m: &Vec3) -> Vec3 {
        m.component_div(&self.inertia)
    }

    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        let (i1, i2, i3) = (self.inertia.x, self.inertia.y, self.inertia.z);
        let (x0, y0, z0) = (self.chi.x, self.chi.y, self.chi.z);
        c.positive("I1 > 0", i1);
        c.positive("I2 > 0", i2);
        c.positive("I3 > 0", i3);
        let mut branch = None;
        match self.case {
            HeavyTopCase::Generic => {}
            HeavyTopCase::Euler => {
                c.eq("X0 == 0", x0, 0.0);
                c.eq("Y0 == 0", y0, 0.0);
                c.eq("Z0 == 0", z0, 0.0);
            }
            HeavyTopCase::Lagrange => {
                c.eq("I1 == I2", i1, i2);
                c.eq("X0 == 0", x0, 0.0);
                c.eq("Y0 == 0", y0, 0.0);
            }
            HeavyTopCase::Kowalevski => {
                c.eq("I1 == I2", i1, i2);
                c.eq("I1 == 2*I3", i1, 2.0 * i3);
                c.eq("Y0 == 0", y0, 0.0);
                c.eq("Z0 == 0", z0, 0.0);
            }
            HeavyTopCase::GoryachevChaplygin => {
                c.eq("I1 == I2", i1, i2);
                c.eq("I1 == 4*I3", i1, 4.0 * i3);
                c.eq("Y0 == 0", y0, 0.0);
                c.eq("Z0 == 0", z0, 0.0);
            }
            HeavyTopCase::HessAppelrot => {
                c.eq("Y0 == 0", y0, 0.0);
                let r1 = i1 * (i2 - i3);
                let r2 = i3 * (i1 - i2);
                if r1 < 0.0 || r2 < 0.0 {
                    c.positive("I1(I2-I3) >= 0 and I3(I1-I2) >= 0 (ordering I1>=I2>=I3)", r1.min(r2));
                } else {
                    // either sign branch of the square-root condition is
                    // accepted; the satisfied one is recorded
                    let plus = x0 * r1.sqrt() + z0 * r2.sqrt();
                    let minus = x0 * r1.sqrt() - z0 * r2.sqrt();
                    if plus.abs() <= minus.abs() {
                        branch = Some(1);
                        c.eq("X0*sqrt(I1(I2-I3)) + Z0*sqrt(I3(I1-I2)) == 0", plus, 0.0);
                    } else {
                        branch = Some(-1);
                        c.eq("X0*sqrt(I1(I2-I3)) - Z0*sqrt(I3(I1-I2)) == 0", minus, 0.0);
                    }
                }
            }
        }
        let mut report = c.finish(self.case.tag());
        report.branch = branch;
        report
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_e3(x);
        let om = self.omega(m);
        let mdot = m.cross(&om) + g.cross(&self.chi);
        let gdot = g.cross(&om);
        DVector::from_vec(vec![mdot.x, mdot.y, mdot.z, gdot.x, gdot.y, gdot.z])
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let inertia = self.inertia;
        let chi = self.chi;
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            0.5 * m.dot(&m.component_div(&inertia)) + g.dot(&chi)
        })
        .with_gradient(move |x: &PhasePoint| {
            let (m, _) = expect_e3(x);
            let om = m.component_div(&inertia);
            DVector::from_vec(vec![om.x, om.y, om.z, chi.x, chi.y, chi.z])
        })
    }

    pub fn integrals(&self) -> Vec<SmoothFn> {
        let mut out = vec![self.hamiltonian()];
        let i3 = self.inertia.z;
        let x0 = self.chi.x;
        match self.case {
            HeavyTopCase::Euler => {
                out.push(SmoothFn::new("F4", |x: &PhasePoint| {
                    let (m, _) = expect_e3(x);
                    m.dot(m)
                }));
            }
            HeavyTopCase::Lagrange => {
                out.push(SmoothFn::new("F4", |x: &PhasePoint| expect_e3(x).0.z));
            }
            HeavyTopCase::Kowalevski => {
                // (Ω1²-Ω2²-κΓ1)² + (2Ω1Ω2-κΓ2)², κ = X0/I3, with Ω_i = M_i/(2 I3)
                let kap = x0 / i3;
                let i12 = self.inertia.x;
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    let o1 = m.x / i12;
                    let o2 = m.y / i12;
                    (o1 * o1 - o2 * o2 - kap * g.x).powi(2) + (2.0 * o1 * o2 - kap * g.y).powi(2)
                }));
            }
            HeavyTopCase::GoryachevChaplygin => {
                // M3(M1²+M2²) - 4 I3 X0 M1 Γ3, valid on the leaf F1 = 0
                let co = -4.0 * i3 * x0;
                let f4 = SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    m.z * (m.x * m.x + m.y * m.y) + co * m.x * g.z
                })
                .with_leaf(crate::poisson::LeafCondition {
                    name: "F1 == 0".into(),
                    f: std::sync::Arc::new(|x: &PhasePoint| {
                        let (m, g) = expect_e3(x);
                        m.dot(g)
                    }),
                    tol: 1e-9,
                });
                out.push(f4);
            }
            HeavyTopCase::Generic | HeavyTopCase::HessAppelrot => {}
        }
        out
    }

    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        if self.case != HeavyTopCase::HessAppelrot {
            return Vec::new();
        }
        let chi = self.chi;
        vec![SmoothFn::new("F4", move |x: &PhasePoint| {
            let (m, _) = expect_e3(x);
            m.x * chi.x + m.z * chi.z
        })]
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let m = sample_box3(rng, 1.5);
        let mut g = sample_unit3(rng);
        if self.case == HeavyTopCase::GoryachevChaplygin {
            // project onto the F1 = 0 leaf, then renormalize
            g -= m * (m.dot(&g) / m.dot(&m));
            g = g.normalize();
        }
        PhasePoint::e3(m, g)
    }

    /// A state with the Hess–Appel'rot relation `M·χ = 0` satisfied exactly.
    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> Option<PhasePoint> {
        if self.case != HeavyTopCase::HessAppelrot {
            return None;
        }
        let s = rng.gen::<f64>() * 2.0 - 1.0;
        let m2 = rng.gen::<f64>() * 2.0 - 1.0;
        let m = Vec3::new(self.chi.z * s, m2, -self.chi.x * s);
        Some(PhasePoint::e3(m, sample_unit3(rng)))
    }

    /// Convenience constructor for valid Hess–Appel'rot parameters:
    /// given `I1 >= I2 >= I3` and `X0`, solves the case condition for `Z0`.
    pub fn hess_appelrot(inertia: Vec3, x0: f64) -> Self {
        let (i1, i2, i3) = (inertia.x, inertia.y, inertia.z);
        let z0 = -x0 * (i1 * (i2 - i3)).sqrt() / (i3 * (i1 - i2)).sqrt();
        HeavyTopSpec::new(inertia, Vec3::new(x0, 0.0, z0), HeavyTopCase::HessAppelrot)
    }
}

/// The Hess–Appel'rot system in the Zhukovski frame: the third axis is the
/// normal of the circular cross-section plane, the inverse inertia becomes
/// `J = [[J1,0,J13],[0,J1,0],[J13,0,J3]]`, `χ = (0,0,Z0)` and the invariant
/// relation is `M3 = 0`.
#[derive(Clone, Debug)]
pub struct ZhukovskiSpec {
    pub j1: f64,
    pub j3: f64,
    pub j13: f64,
    pub z0: f64,
}

impl ZhukovskiSpec {
    pub fn omega(&self, m: &Vec3) -> Vec3 {
        Vec3::new(
            self.j1 * m.x + self.j13 * m.z,
            self.j1 * m.y,
            self.j13 * m.x + self.j3 * m.z,
        )
    }

    pub fn validate(&self, _tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(_tol);
        c.positive("J1 > 0", self.j1);
        c.positive("J3 > 0", self.j3);
        c.positive("J1*J3 - J13^2 > 0", self.j1 * self.j3 - self.j13 * self.j13);
        c.finish("hess-appelrot-zhukovski")
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_e3(x);
        let om = self.omega(m);
        let chi = Vec3::new(0.0, 0.0, self.z0);
        let mdot = m.cross(&om) + g.cross(&chi);
        let gdot = g.cross(&om);
        DVector::from_vec(vec![mdot.x, mdot.y, mdot.z, gdot.x, gdot.y, gdot.z])
    }

    /// `H = H_Lagrange + J13 M1 M3` — the perturbation form of the
    /// Hess–Appel'rot Hamiltonian.
    pub fn hamiltonian(&self) -> SmoothFn {
        let (j1, j3, j13, z0) = (self.j1, self.j3, self.j13, self.z0);
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            0.5 * (j1 * (m.x * m.x + m.y * m.y) + j3 * m.z * m.z) + z0 * g.z + j13 * m.x * m.z
        })
        .with_gradient(move |x: &PhasePoint| {
            let (m, _) = expect_e3(x);
            DVector::from_vec(vec![
                j1 * m.x + j13 * m.z,
                j1 * m.y,
                j3 * m.z + j13 * m.x,
                0.0,
                0.0,
                z0,
            ])
        })
    }

    pub fn integrals(&self) -> Vec<SmoothFn> {
        vec![self.hamiltonian()]
    }

    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        vec![SmoothFn::new("F4", |x: &PhasePoint| expect_e3(x).0.z)]
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        PhasePoint::e3(sample_box3(rng, 1.5), sample_unit3(rng))
    }

    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let m = Vec3::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0, 0.0);
        PhasePoint::e3(m, sample_unit3(rng))
    }
}

pub(crate) fn expect_e3(x: &PhasePoint) -> (&Vec3, &Vec3) {
    match x {
        PhasePoint::E3 { m, g } => (m, g),
        _ => panic!("expected an e(3) phase point"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::ham_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_catalog_examples() {
        let ok = HeavyTopSpec::new(
            Vec3::new(2.0, 2.0, 1.0),
            Vec3::new(1.0, 0.0, 0.0),
            HeavyTopCase::Kowalevski,
        );
        assert!(ok.validate(1e-12).ok());

        // I=(3,2,1), chi=(1,0,-sqrt(3)): 1*sqrt(3*1) - sqrt(3)*sqrt(1*1) = 0
        let ha = HeavyTopSpec::new(
            Vec3::new(3.0, 2.0, 1.0),
            Vec3::new(1.0, 0.0, -(3.0f64).sqrt()),
            HeavyTopCase::HessAppelrot,
        );
        let rep = ha.validate(1e-12);
        assert!(rep.ok(), "{rep}");

        let bad = HeavyTopSpec::new(
            Vec3::new(2.0, 3.0, 3.0),
            Vec3::new(0.0, 0.0, 1.0),
            HeavyTopCase::Lagrange,
        );
        let rep = bad.validate(1e-12);
        assert!(!rep.ok());
        assert!(rep.violations.iter().any(|v| v.condition.contains("I1 == I2")));
    }

    #[test]
    fn euler_rhs_frozen_example() {
        let spec = HeavyTopSpec::new(Vec3::new(1.0, 2.0, 3.0), Vec3::zeros(), HeavyTopCase::Euler);
        let x = PhasePoint::e3(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.0, 0.0, 1.0));
        let d = spec.rhs(&x);
        let want = [-1.0, 2.0, -1.0, -1.0, 1.0, 0.0];
        for (a, b) in d.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-14, "{d:?}");
        }
        // zero state gives the zero field
        let z = PhasePoint::e3(Vec3::zeros(), Vec3::zeros());
        assert_eq!(spec.rhs(&z).norm(), 0.0);
    }

    #[test]
    fn hamiltonian_frozen_value_and_field_match() {
        let spec = HeavyTopSpec::new(
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(0.0, 0.0, 1.0),
            HeavyTopCase::Generic,
        );
        let x = PhasePoint::e3(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.0, 0.0, 1.0));
        assert!((spec.hamiltonian().eval(&x) - 4.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let x = spec.sample_state(&mut rng);
            let lhs = ham_field(&spec.hamiltonian(), &x);
            let rhs = spec.rhs(&x);
            assert!((lhs - rhs).norm() <= 1e-8);
        }
    }

    #[test]
    fn euler_and_gc_integral_values() {
        let x = PhasePoint::e3(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.0, 0.0, 1.0));
        let euler =
            HeavyTopSpec::new(Vec3::new(1.0, 2.0, 3.0), Vec3::zeros(), HeavyTopCase::Euler);
        let f4 = &euler.integrals()[1];
        assert_eq!(f4.eval(&x), 14.0);

        // with -4 I3 X0 = 2 the G-C integral takes the normalized value 4
        let gc = HeavyTopSpec::new(
            Vec3::new(2.0, 2.0, 0.5),
            Vec3::new(-1.0, 0.0, 0.0),
            HeavyTopCase::GoryachevChaplygin,
        );
        assert!(gc.validate(1e-12).ok());
        let x = PhasePoint::e3(Vec3::new(1.0, 1.0, 1.0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(gc.integrals()[1].eval(&x), 4.0);
    }

    #[test]
    fn hess_relation_values() {
        let spec = HeavyTopSpec::hess_appelrot(Vec3::new(3.0, 2.0, 1.0), 1.0);
        assert!(spec.validate(1e-12).ok());
        let rel = &spec.invariant_relations()[0];
        // M = (Z0, 5, -X0): constructed orthogonal to (X0, 0, Z0)
        let on = PhasePoint::e3(Vec3::new(spec.chi.z, 5.0, -spec.chi.x), Vec3::new(0.0, 0.0, 1.0));
        assert!(rel.eval(&on).abs() < 1e-14);
        let off = PhasePoint::e3(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        // X0 = 1, Z0 derived: F4 = M1 X0 = 1
        assert!((rel.eval(&off) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zhukovski_field_matches_hamiltonian_and_keeps_m3() {
        let spec = ZhukovskiSpec { j1: 0.9, j3: 0.5, j13: 0.2, z0: 1.1 };
        assert!(spec.validate(1e-12).ok());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let x = spec.sample_state(&mut rng);
            let lhs = ham_field(&spec.hamiltonian(), &x);
            let rhs = spec.rhs(&x);
            assert!((lhs - rhs).norm() <= 1e-8);
        }
        // on M3 = 0 the third component of Mdot vanishes
        let x = spec.sample_invariant_state(&mut rng);
        let d = spec.rhs(&x);
        assert!(d[2].abs() < 1e-14);
    }
}
