//! The catalog of concrete systems: validated parameter sets, equations of
//! motion, named first integrals and invariant relations.

mod family;
mod heavy_top;
mod kirchhoff;
mod kirchhoff4;
mod so4;

pub use family::{FamilyCase, FamilySpec};
pub use heavy_top::{HeavyTopCase, HeavyTopSpec, ZhukovskiSpec};
pub use kirchhoff::{KirchhoffCase, KirchhoffSpec};
pub use kirchhoff4::{Chaplygin4Spec, Kirchhoff4Spec};
pub use so4::{BitopSpec, Ha4Spec, HanSpec};

use crate::poisson::{PhaseKind, PhasePoint, SmoothFn};
use nalgebra::DVector;
use thiserror::Error;

/// Default tolerance for exact case conditions; `--loose` relaxes to 1e-6.
pub const VALIDATE_TOL: f64 = 1e-12;
pub const VALIDATE_TOL_LOOSE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("phase point of kind {got:?} does not match system kind {expected:?}")]
    KindMismatch { expected: PhaseKind, got: PhaseKind },
    #[error("system `{0}` is not Hamiltonian in the Poisson structure")]
    NotHamiltonian(String),
    #[error("singular inertia recovery: {0}")]
    SingularInertia(String),
}

/// One violated case condition with both evaluated sides.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Violation {
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// The outcome of validating a spec against its case tag.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ViolationReport {
    pub case: String,
    pub violations: Vec<Violation>,
    /// Which sign branch validated, for conditions printed with `∓/±`.
    pub branch: Option<i8>,
}

impl ViolationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            write!(f, "{}: ok", self.case)?;
            if let Some(b) = self.branch {
                write!(f, " (branch {})", if b > 0 { "+" } else { "-" })?;
            }
            Ok(())
        } else {
            writeln!(f, "{}: {} violated condition(s)", self.case, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {}: lhs = {:.17e}, rhs = {:.17e}", v.condition, v.lhs, v.rhs)?;
            }
            Ok(())
        }
    }
}

pub(crate) struct ConditionChecker {
    tol: f64,
    violations: Vec<Violation>,
}

impl ConditionChecker {
    pub fn new(tol: f64) -> Self {
        ConditionChecker { tol, violations: Vec::new() }
    }

    pub fn eq(&mut self, condition: &str, lhs: f64, rhs: f64) {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        if (lhs - rhs).abs() > self.tol * scale {
            self.violations.push(Violation { condition: condition.to_string(), lhs, rhs });
        }
    }

    pub fn positive(&mut self, condition: &str, v: f64) {
        if !(v > 0.0) {
            self.violations.push(Violation { condition: condition.to_string(), lhs: v, rhs: 0.0 });
        }
    }

    pub fn nonzero(&mut self, condition: &str, v: f64) {
        if v.abs() <= self.tol {
            self.violations.push(Violation { condition: condition.to_string(), lhs: v, rhs: 0.0 });
        }
    }

    pub fn finish(self, case: &str) -> ViolationReport {
        ViolationReport { case: case.to_string(), violations: self.violations, branch: None }
    }
}

/// A validated parameter set identifying one catalog case.
#[derive(Clone, Debug)]
pub enum SystemSpec {
    HeavyTop(HeavyTopSpec),
    Zhukovski(ZhukovskiSpec),
    Bitop(BitopSpec),
    Ha4(Ha4Spec),
    Han(HanSpec),
    Family(FamilySpec),
    Kirchhoff(KirchhoffSpec),
    Kirchhoff4(Kirchhoff4Spec),
    Chaplygin4(Chaplygin4Spec),
}

impl SystemSpec {
    pub fn kind(&self) -> PhaseKind {
        match self {
            SystemSpec::HeavyTop(_) | SystemSpec::Zhukovski(_) | SystemSpec::Family(_) => {
                PhaseKind::E3
            }
            SystemSpec::Kirchhoff(_) => PhaseKind::E3,
            SystemSpec::Bitop(_) | SystemSpec::Ha4(_) => PhaseKind::SoN(4),
            SystemSpec::Han(s) => PhaseKind::SoN(s.n),
            SystemSpec::Kirchhoff4(_) | SystemSpec::Chaplygin4(_) => PhaseKind::E4,
        }
    }

    /// The catalog case tag (as used in configs and the catalog listing).
    pub fn case_name(&self) -> String {
        match self {
            SystemSpec::HeavyTop(s) => s.case.tag().to_string(),
            SystemSpec::Zhukovski(_) => "hess-appelrot-zhukovski".into(),
            SystemSpec::Bitop(_) => "bitop".into(),
            SystemSpec::Ha4(_) => "ha4".into(),
            SystemSpec::Han(s) => format!("han(n={})", s.n),
            SystemSpec::Family(s) => format!("family({})", s.a_case.tag()),
            SystemSpec::Kirchhoff(s) => s.case.tag().to_string(),
            SystemSpec::Kirchhoff4(_) => "kirchhoff4".into(),
            SystemSpec::Chaplygin4(_) => "chaplygin4".into(),
        }
    }

    pub fn validate(&self) -> ViolationReport {
        self.validate_with_tol(VALIDATE_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> ViolationReport {
        match self {
            SystemSpec::HeavyTop(s) => s.validate(tol),
            SystemSpec::Zhukovski(s) => s.validate(tol),
            SystemSpec::Bitop(s) => s.validate(tol),
            SystemSpec::Ha4(s) => s.validate(tol),
            SystemSpec::Han(s) => s.validate(tol),
            SystemSpec::Family(s) => s.validate(tol),
            SystemSpec::Kirchhoff(s) => s.validate(tol),
            SystemSpec::Kirchhoff4(s) => s.validate(tol),
            SystemSpec::Chaplygin4(s) => s.validate(tol),
        }
    }

    fn check_kind(&self, x: &PhasePoint) -> Result<(), SystemError> {
        if x.kind() != self.kind() {
            return Err(SystemError::KindMismatch { expected: self.kind(), got: x.kind() });
        }
        Ok(())
    }

    /// The exact right-hand side of the equations of motion, flattened.
    pub fn rhs(&self, x: &PhasePoint) -> Result<DVector<f64>, SystemError> {
        self.check_kind(x)?;
        Ok(match self {
            SystemSpec::HeavyTop(s) => s.rhs(x),
            SystemSpec::Zhukovski(s) => s.rhs(x),
            SystemSpec::Bitop(s) => s.rhs_matrix(x),
            SystemSpec::Ha4(s) => s.rhs_matrix(x),
            SystemSpec::Han(s) => s.rhs(x),
            SystemSpec::Family(s) => s.rhs(x),
            SystemSpec::Kirchhoff(s) => s.rhs(x),
            SystemSpec::Kirchhoff4(s) => s.rhs(x),
            SystemSpec::Chaplygin4(s) => s.rhs(x),
        })
    }

    /// Named first integrals (the Hamiltonian included where one exists).
    pub fn integrals(&self) -> Vec<SmoothFn> {
        match self {
            SystemSpec::HeavyTop(s) => s.integrals(),
            SystemSpec::Zhukovski(s) => s.integrals(),
            SystemSpec::Bitop(s) => s.integrals(),
            SystemSpec::Ha4(s) => s.integrals(),
            SystemSpec::Han(s) => s.integrals(),
            SystemSpec::Family(s) => s.integrals(),
            SystemSpec::Kirchhoff(s) => s.integrals(),
            SystemSpec::Kirchhoff4(s) => s.integrals(),
            SystemSpec::Chaplygin4(s) => s.integrals(),
        }
    }

    /// Functions vanishing on the invariant manifold (empty for systems
    /// with a complete set of integrals instead).
    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        match self {
            SystemSpec::HeavyTop(s) => s.invariant_relations(),
            SystemSpec::Zhukovski(s) => s.invariant_relations(),
            SystemSpec::Ha4(s) => s.invariant_relations(),
            SystemSpec::Han(s) => s.invariant_relations(),
            SystemSpec::Kirchhoff(s) => s.invariant_relations(),
            SystemSpec::Chaplygin4(s) => s.invariant_relations(),
            _ => Vec::new(),
        }
    }

    /// The Hamiltonian, where the system is Hamiltonian in its structure.
    pub fn hamiltonian(&self) -> Result<SmoothFn, SystemError> {
        match self {
            SystemSpec::HeavyTop(s) => Ok(s.hamiltonian()),
            SystemSpec::Zhukovski(s) => Ok(s.hamiltonian()),
            SystemSpec::Bitop(s) => Ok(s.hamiltonian()),
            SystemSpec::Ha4(s) => Ok(s.hamiltonian()),
            SystemSpec::Han(s) => Ok(s.hamiltonian()),
            SystemSpec::Family(s) => s.hamiltonian(),
            SystemSpec::Kirchhoff(s) => Ok(s.hamiltonian()),
            SystemSpec::Kirchhoff4(s) => Ok(s.hamiltonian()),
            SystemSpec::Chaplygin4(s) => Ok(s.hamiltonian()),
        }
    }

    /// Casimirs of the underlying Poisson structure.
    pub fn casimir_fns(&self) -> Vec<SmoothFn> {
        crate::poisson::casimirs(self.kind())
    }

    /// A generic valid state (leaf conditions honored where integrals need
    /// them, e.g. `F1 = 0` for Goryachev–Chaplygin).
    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        match self {
            SystemSpec::HeavyTop(s) => s.sample_state(rng),
            SystemSpec::Zhukovski(s) => s.sample_state(rng),
            SystemSpec::Bitop(s) => s.sample_state(rng),
            SystemSpec::Ha4(s) => s.sample_state(rng),
            SystemSpec::Han(s) => s.sample_state(rng),
            SystemSpec::Family(s) => s.sample_state(rng),
            SystemSpec::Kirchhoff(s) => s.sample_state(rng),
            SystemSpec::Kirchhoff4(s) => s.sample_state(rng),
            SystemSpec::Chaplygin4(s) => s.sample_state(rng),
        }
    }

    /// A state on the invariant manifold, for systems carrying invariant
    /// relations.
    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> Option<PhasePoint> {
        match self {
            SystemSpec::HeavyTop(s) => s.sample_invariant_state(rng),
            SystemSpec::Zhukovski(s) => Some(s.sample_invariant_state(rng)),
            SystemSpec::Ha4(s) => Some(s.sample_invariant_state(rng)),
            SystemSpec::Han(s) => Some(s.sample_invariant_state(rng)),
            SystemSpec::Kirchhoff(s) => s.sample_invariant_state(rng),
            SystemSpec::Chaplygin4(s) => Some(s.sample_invariant_state(rng)),
            _ => None,
        }
    }
}

/// Random unit 3-vector.
pub(crate) fn sample_unit3(rng: &mut impl rand::Rng) -> crate::algebra::Vec3 {
    loop {
        let v = crate::algebra::Vec3::new(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        );
        let n = v.norm();
        if n > 1e-3 && n < 1.0 {
            return v / n;
        }
    }
}

pub(crate) fn sample_box3(rng: &mut impl rand::Rng, half_width: f64) -> crate::algebra::Vec3 {
    crate::algebra::Vec3::new(
        (rng.gen::<f64>() * 2.0 - 1.0) * half_width,
        (rng.gen::<f64>() * 2.0 - 1.0) * half_width,
        (rng.gen::<f64>() * 2.0 - 1.0) * half_width,
    )
}
