//! A family of dynamical systems on `e(3)` built from a second Lax
//! representation of the Hess–Appel'rot case: the flow is
//! `xdot = {x, H1} + a(x) {x, H2}` with
//! `H1 = <M,M>/(2 I2) + X0 Γ1 + Z0 Γ3`, `H2 = X0 M1 + Z0 M3`
//! and `a` a polynomial in `(M, Γ)`.
//!
//! The standard measure is preserved iff `{a, H2} = 0`; the five preserved
//! cases are `a = F1, F2, H2, X0 Γ1 + Z0 Γ3, <M,M>`, the first three being
//! Hamiltonian (`H = H1 + a H2` for Casimir `a`, `H = H1 + H2²/2` for
//! `a = H2`).

use super::heavy_top::expect_e3;
use super::{sample_box3, sample_unit3, ConditionChecker, SystemError, ViolationReport};
use crate::algebra::Vec3;
use crate::expr::Expr;
use crate::poisson::{PhasePoint, SmoothFn};
use nalgebra::DVector;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub enum FamilyCase {
    /// (i) `a = F1 = <M,Γ>`
    CasimirF1,
    /// (ii) `a = F2 = <Γ,Γ>`
    CasimirF2,
    /// (iii) `a = H2 = X0 M1 + Z0 M3`
    H2,
    /// (iv) `a = X0 Γ1 + Z0 Γ3`
    GammaChi,
    /// (v) `a = <M,M>`
    MSquare,
    /// a user-supplied polynomial in `M1..M3, G1..G3`
    Custom(Expr),
}

impl FamilyCase {
    pub fn tag(&self) -> String {
        match self {
            FamilyCase::CasimirF1 => "i".into(),
            FamilyCase::CasimirF2 => "ii".into(),
            FamilyCase::H2 => "iii".into(),
            FamilyCase::GammaChi => "iv".into(),
            FamilyCase::MSquare => "v".into(),
            FamilyCase::Custom(e) => format!("custom:{}", e.source),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "i" | "f1" => FamilyCase::CasimirF1,
            "ii" | "f2" => FamilyCase::CasimirF2,
            "iii" | "h2" => FamilyCase::H2,
            "iv" | "gamma" => FamilyCase::GammaChi,
            "v" | "msquare" => FamilyCase::MSquare,
            other => {
                let expr = other.strip_prefix("custom:").unwrap_or(other);
                FamilyCase::Custom(Expr::parse(expr).ok()?)
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub x0: f64,
    pub z0: f64,
    pub i2: f64,
    pub a_case: FamilyCase,
}

impl FamilySpec {
    pub fn delta(&self) -> f64 {
        (self.x0 * self.x0 + self.z0 * self.z0).sqrt()
    }

    /// `(α, β) = (X0, Z0)/sqrt(X0² + Z0²)`.
    pub fn alpha_beta(&self) -> (f64, f64) {
        let d = self.delta();
        (self.x0 / d, self.z0 / d)
    }

    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut c = ConditionChecker::new(tol);
        c.positive("I2 > 0", self.i2);
        c.nonzero("X0, Z0 not both zero", self.delta());
        if let FamilyCase::Custom(e) = &self.a_case {
            let allowed = ["M1", "M2", "M3", "G1", "G2", "G3"];
            for v in e.variables() {
                if !allowed.contains(&v.as_str()) {
                    c.nonzero(&format!("unknown variable `{v}` in polynomial a"), 0.0);
                }
            }
        }
        c.finish(&format!("family({})", self.a_case.tag()))
    }

    /// The multiplier polynomial `a(M, Γ)`.
    pub fn a_value(&self, x: &PhasePoint) -> f64 {
        let (m, g) = expect_e3(x);
        match &self.a_case {
            FamilyCase::CasimirF1 => m.dot(g),
            FamilyCase::CasimirF2 => g.dot(g),
            FamilyCase::H2 => self.x0 * m.x + self.z0 * m.z,
            FamilyCase::GammaChi => self.x0 * g.x + self.z0 * g.z,
            FamilyCase::MSquare => m.dot(m),
            FamilyCase::Custom(e) => {
                let mut vars = HashMap::new();
                for (name, v) in
                    [("M1", m.x), ("M2", m.y), ("M3", m.z), ("G1", g.x), ("G2", g.y), ("G3", g.z)]
                {
                    vars.insert(name.to_string(), v);
                }
                e.eval(&vars).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn h1(&self) -> SmoothFn {
        let (x0, z0, i2) = (self.x0, self.z0, self.i2);
        SmoothFn::new("H1", move |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            m.dot(m) / (2.0 * i2) + x0 * g.x + z0 * g.z
        })
        .with_gradient(move |x: &PhasePoint| {
            let (m, _) = expect_e3(x);
            DVector::from_vec(vec![m.x / i2, m.y / i2, m.z / i2, x0, 0.0, z0])
        })
    }

    pub fn h2(&self) -> SmoothFn {
        let (x0, z0) = (self.x0, self.z0);
        SmoothFn::new("H2", move |x: &PhasePoint| {
            let (m, _) = expect_e3(x);
            x0 * m.x + z0 * m.z
        })
        .with_gradient(move |_x: &PhasePoint| DVector::from_vec(vec![x0, 0.0, z0, 0.0, 0.0, 0.0]))
    }

    /// Right-hand side of the family equations (the explicit printed form).
    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_e3(x);
        let (x0, z0, i2) = (self.x0, self.z0, self.i2);
        let a = self.a_value(x);
        DVector::from_vec(vec![
            z0 * g.y + a * z0 * m.y,
            x0 * g.z - z0 * g.x + a * (x0 * m.z - z0 * m.x),
            -x0 * g.y - a * x0 * m.y,
            (g.y * m.z - g.z * m.y) / i2 + a * z0 * g.y,
            (g.z * m.x - g.x * m.z) / i2 + a * (x0 * g.z - z0 * g.x),
            (g.x * m.y - g.y * m.x) / i2 - a * x0 * g.y,
        ])
    }

    /// `F1, F2, H1, H2` are first integrals for every polynomial `a`.
    pub fn integrals(&self) -> Vec<SmoothFn> {
        let f1 = SmoothFn::new("F1", |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            m.dot(g)
        });
        let f2 = SmoothFn::new("F2", |x: &PhasePoint| {
            let (_, g) = expect_e3(x);
            g.dot(g)
        });
        vec![f1, f2, self.h1(), self.h2()]
    }

    /// Hamiltonian for cases (i)-(iii); the other cases preserve the
    /// measure ((iv), (v)) or not at all, but are not Hamiltonian.
    pub fn hamiltonian(&self) -> Result<SmoothFn, SystemError> {
        let h1 = self.h1();
        let h2 = self.h2();
        match &self.a_case {
            FamilyCase::CasimirF1 => {
                let a = self.clone();
                Ok(SmoothFn::new("H", move |x: &PhasePoint| {
                    h1.eval(x) + a.a_value(x) * h2.eval(x)
                }))
            }
            FamilyCase::CasimirF2 => {
                let a = self.clone();
                Ok(SmoothFn::new("H", move |x: &PhasePoint| {
                    h1.eval(x) + a.a_value(x) * h2.eval(x)
                }))
            }
            FamilyCase::H2 => Ok(SmoothFn::new("H", move |x: &PhasePoint| {
                let v = h2.eval(x);
                h1.eval(x) + 0.5 * v * v
            })),
            _ => Err(SystemError::NotHamiltonian(format!("family({})", self.a_case.tag()))),
        }
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        PhasePoint::e3(sample_box3(rng, 1.2), sample_unit3(rng))
    }

    /// The `(X, Y)` rotated coordinates of the classical integration:
    /// `X1 = αM1 + βM3`, `X2 = M2`, `X3 = -βM1 + αM3`, same for `Y` from Γ.
    pub fn xy_coords(&self, x: &PhasePoint) -> (Vec3, Vec3) {
        let (m, g) = expect_e3(x);
        let (al, be) = self.alpha_beta();
        (
            Vec3::new(al * m.x + be * m.z, m.y, -be * m.x + al * m.z),
            Vec3::new(al * g.x + be * g.z, g.y, -be * g.x + al * g.z),
        )
    }
}
