//! Integrable rigid-body dynamics on `e(3)`, `so(n)×so(n)` and `e(4)`.
//!
//! The crate covers the classical heavy top (Euler, Lagrange, Kowalevski,
//! Goryachev–Chaplygin, Hess–Appel'rot), the four-dimensional Lagrange bitop
//! and Hess–Appel'rot systems together with their `n`-dimensional relatives,
//! a one-parameter family of flows on `e(3)` sharing an elliptic spectral
//! curve, and the Kirchhoff equations for a rigid body in an ideal fluid
//! (including the four-dimensional Kirchhoff and Chaplygin cases).
//!
//! For every system in the catalog the crate provides
//!
//! * the equations of motion ([`systems::SystemSpec::rhs`]),
//! * named first integrals, Casimirs and invariant relations,
//! * Lax pairs with spectral-polynomial extraction ([`lax`]),
//! * classical elliptic reductions used as independent cross-checks
//!   ([`reduction`]),
//! * fixed-step and adaptive integration with conservation monitoring
//!   ([`integrate`]).
//!
//! Start with the `examples/` directory: each example exercises one major
//! capability end to end. A thin CLI (`tops validate|simulate|catalog`)
//! drives batch runs from TOML configs.

pub mod algebra;
pub mod catalog;
pub mod config;
pub mod expr;
pub mod integrate;
pub mod lax;
pub mod poisson;
pub mod reduction;
pub mod report;
pub mod runner;
pub mod systems;

pub use algebra::{hat3, vee3, SkewMat, SplitPair, Vec3, Vec4};
pub use integrate::{simulate, IntegrateMethod, StepperConfig, Trajectory};
pub use poisson::{PhaseKind, PhasePoint, SmoothFn};
pub use report::ConservationReport;
pub use systems::SystemSpec;
