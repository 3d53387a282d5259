//! Kirchhoff equations for a rigid body in an ideal incompressible fluid:
//! Hamiltonian flow on `e(3)` with `H = 1/2<AM,M> + <BM,Γ> + 1/2<CΓ,Γ>`,
//! `A` positive definite, `B`, `C` symmetric, and the catalog of integrable
//! cases.

use super::heavy_top::expect_e3;
use super::{sample_box3, sample_unit3, ConditionChecker, ViolationReport};
use crate::algebra::Vec3;
use crate::poisson::{LeafCondition, PhasePoint, SmoothFn};
use nalgebra::{DVector, Matrix3};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub enum KirchhoffCase {
    Generic,
    /// axially symmetric `A`, `B`, `C`; extra integral `M3`
    Kirchhoff,
    /// `A = a·1`, `B = 0`; extra integral `a<CM,M> - <adj(C)Γ,Γ>`
    Clebsch1 { a: f64 },
    /// diagonal `A`, `B = 0`, `C` with the θ-condition; extra integral
    /// `<M,M> + θ<AΓ,Γ>`
    Clebsch2 { theta: f64, offset: f64 },
    Steklov { mu: f64 },
    Lyapunov { mu: f64, d: [f64; 3] },
    Sokolov { alpha: f64, beta: f64 },
    /// extra integral on the leaf `<M,Γ> = 0`
    Chaplygin1 { c: f64 },
    /// invariant relation `M1 sqrt(a2-a1) ∓ M3 sqrt(a3-a2) = 0`
    Chaplygin2 { branch: i8 },
}

impl KirchhoffCase {
    pub fn tag(&self) -> &'static str {
        match self {
            KirchhoffCase::Generic => "kirchhoff-generic",
            KirchhoffCase::Kirchhoff => "kirchhoff",
            KirchhoffCase::Clebsch1 { .. } => "clebsch1",
            KirchhoffCase::Clebsch2 { .. } => "clebsch2",
            KirchhoffCase::Steklov { .. } => "steklov",
            KirchhoffCase::Lyapunov { .. } => "lyapunov",
            KirchhoffCase::Sokolov { .. } => "sokolov",
            KirchhoffCase::Chaplygin1 { .. } => "chaplygin1",
            KirchhoffCase::Chaplygin2 { .. } => "chaplygin2",
        }
    }
}

#[derive(Clone, Debug)]
pub struct KirchhoffSpec {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub c: Matrix3<f64>,
    pub case: KirchhoffCase,
}

impl KirchhoffSpec {
    pub fn generic(a: Matrix3<f64>, b: Matrix3<f64>, c: Matrix3<f64>) -> Self {
        KirchhoffSpec { a, b, c, case: KirchhoffCase::Generic }
    }

    /// `A = diag(a1,a1,a3)`, `B = diag(b1,b1,b3)`, `C = diag(c1,c1,c3)`.
    pub fn kirchhoff(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Self {
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(a.0, a.0, a.1)),
            b: Matrix3::from_diagonal(&Vec3::new(b.0, b.0, b.1)),
            c: Matrix3::from_diagonal(&Vec3::new(c.0, c.0, c.1)),
            case: KirchhoffCase::Kirchhoff,
        }
    }

    pub fn clebsch1(a: f64, c: Matrix3<f64>) -> Self {
        KirchhoffSpec {
            a: Matrix3::identity() * a,
            b: Matrix3::zeros(),
            c,
            case: KirchhoffCase::Clebsch1 { a },
        }
    }

    /// The θ-parameterization: `c3 = offset`, `c2 = c3 + θ a1(a2-a3)`,
    /// `c1 = c2 + θ a3(a1-a2)`; the three printed ratios are then equal to
    /// θ automatically.
    pub fn clebsch2(a: [f64; 3], theta: f64, offset: f64) -> Self {
        let c3 = offset;
        let c2 = c3 + theta * a[0] * (a[1] - a[2]);
        let c1 = c2 + theta * a[2] * (a[0] - a[1]);
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(a[0], a[1], a[2])),
            b: Matrix3::zeros(),
            c: Matrix3::from_diagonal(&Vec3::new(c1, c2, c3)),
            case: KirchhoffCase::Clebsch2 { theta, offset },
        }
    }

    pub fn steklov(a: [f64; 3], mu: f64) -> Self {
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(a[0], a[1], a[2])),
            b: Matrix3::from_diagonal(&Vec3::new(mu * a[1] * a[2], mu * a[2] * a[0], mu * a[0] * a[1])),
            c: Matrix3::from_diagonal(&Vec3::new(
                mu * mu * a[0] * (a[1] - a[2]).powi(2),
                mu * mu * a[1] * (a[2] - a[0]).powi(2),
                mu * mu * a[2] * (a[0] - a[1]).powi(2),
            )),
            case: KirchhoffCase::Steklov { mu },
        }
    }

    /// `A = 1`, `B = -2μ diag(d)`, `C = 4μ² diag((d2-d3)², (d3-d1)², (d1-d2)²)`.
    pub fn lyapunov(d: [f64; 3], mu: f64) -> Self {
        KirchhoffSpec {
            a: Matrix3::identity(),
            b: Matrix3::from_diagonal(&Vec3::new(-2.0 * mu * d[0], -2.0 * mu * d[1], -2.0 * mu * d[2])),
            c: Matrix3::from_diagonal(&Vec3::new(
                4.0 * mu * mu * (d[1] - d[2]).powi(2),
                4.0 * mu * mu * (d[2] - d[0]).powi(2),
                4.0 * mu * mu * (d[0] - d[1]).powi(2),
            )),
            case: KirchhoffCase::Lyapunov { mu, d },
        }
    }

    pub fn sokolov(alpha: f64, beta: f64) -> Self {
        let mut b = Matrix3::zeros();
        b[(0, 2)] = alpha;
        b[(2, 0)] = alpha;
        b[(1, 2)] = beta;
        b[(2, 1)] = beta;
        let mut c = Matrix3::zeros();
        c[(0, 0)] = 4.0 * beta * beta;
        c[(1, 1)] = 4.0 * alpha * alpha;
        c[(0, 1)] = -4.0 * alpha * beta;
        c[(1, 0)] = -4.0 * alpha * beta;
        c[(2, 2)] = -4.0 * (alpha * alpha + beta * beta);
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, 2.0)),
            b,
            c,
            case: KirchhoffCase::Sokolov { alpha, beta },
        }
    }

    pub fn chaplygin1(a: f64, c: f64) -> Self {
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(a, a, 2.0 * a)),
            b: Matrix3::zeros(),
            c: Matrix3::from_diagonal(&Vec3::new(c, -c, 0.0)),
            case: KirchhoffCase::Chaplygin1 { c },
        }
    }

    /// Diagonal-`A` basis with `a1 < a2 < a3`; `b13`, `c13` couple axes 1,3
    /// and the diagonal differences follow from the branch sign:
    /// `b2-b1 = ±b13 √(a2-a1)/√(a3-a2)`, `b3-b2 = ∓b13 √(a3-a2)/√(a2-a1)`.
    pub fn chaplygin2(
        a: [f64; 3],
        b1: f64,
        b13: f64,
        c1: f64,
        c13: f64,
        branch: i8,
    ) -> Self {
        let s = branch.signum() as f64;
        let s21 = (a[1] - a[0]).sqrt();
        let s32 = (a[2] - a[1]).sqrt();
        let b2 = b1 + s * b13 * s21 / s32;
        let b3 = b2 - s * b13 * s32 / s21;
        let c2 = c1 + s * c13 * s21 / s32;
        let c3 = c2 - s * c13 * s32 / s21;
        let mut bm = Matrix3::from_diagonal(&Vec3::new(b1, b2, b3));
        bm[(0, 2)] = b13;
        bm[(2, 0)] = b13;
        let mut cm = Matrix3::from_diagonal(&Vec3::new(c1, c2, c3));
        cm[(0, 2)] = c13;
        cm[(2, 0)] = c13;
        KirchhoffSpec {
            a: Matrix3::from_diagonal(&Vec3::new(a[0], a[1], a[2])),
            b: bm,
            c: cm,
            case: KirchhoffCase::Chaplygin2 { branch: if branch >= 0 { 1 } else { -1 } },
        }
    }

    pub fn validate(&self, tol: f64) -> ViolationReport {
        let mut ck = ConditionChecker::new(tol);
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
            let asym = (m - m.transpose()).norm();
            ck.eq(&format!("{name} symmetric"), asym, 0.0);
        }
        // A positive definite (leading principal minors)
        ck.positive("A[11] > 0", self.a[(0, 0)]);
        ck.positive(
            "det A[1..2] > 0",
            self.a[(0, 0)] * self.a[(1, 1)] - self.a[(0, 1)] * self.a[(1, 0)],
        );
        ck.positive("det A > 0", self.a.determinant());
        let diag_zero = |ck: &mut ConditionChecker, name: &str, m: &Matrix3<f64>| {
            ck.eq(&format!("{name} off-diagonal == 0"), offdiag_norm(m), 0.0);
        };
        let (a1, a2, a3) = (self.a[(0, 0)], self.a[(1, 1)], self.a[(2, 2)]);
        let (c1, c2, c3) = (self.c[(0, 0)], self.c[(1, 1)], self.c[(2, 2)]);
        let mut branch = None;
        match &self.case {
            KirchhoffCase::Generic => {}
            KirchhoffCase::Kirchhoff => {
                for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
                    diag_zero(&mut ck, name, m);
                    ck.eq(&format!("{name}[11] == {name}[22]"), m[(0, 0)], m[(1, 1)]);
                }
            }
            KirchhoffCase::Clebsch1 { a } => {
                diag_zero(&mut ck, "A", &self.a);
                ck.eq("A == a*1 (11)", a1, *a);
                ck.eq("A == a*1 (22)", a2, *a);
                ck.eq("A == a*1 (33)", a3, *a);
                ck.eq("B == 0", self.b.norm(), 0.0);
            }
            KirchhoffCase::Clebsch2 { .. } => {
                diag_zero(&mut ck, "A", &self.a);
                diag_zero(&mut ck, "C", &self.c);
                ck.eq("B == 0", self.b.norm(), 0.0);
                ck.nonzero("a1 != a2", a1 - a2);
                ck.nonzero("a2 != a3", a2 - a3);
                ck.nonzero("a1 != a3", a1 - a3);
                ck.eq(
                    "(c2-c3)/a1 + (c3-c1)/a2 + (c1-c2)/a3 == 0",
                    (c2 - c3) / a1 + (c3 - c1) / a2 + (c1 - c2) / a3,
                    0.0,
                );
            }
            KirchhoffCase::Steklov { mu } => {
                diag_zero(&mut ck, "B", &self.b);
                diag_zero(&mut ck, "C", &self.c);
                ck.eq("B11 == mu a2 a3", self.b[(0, 0)], mu * a2 * a3);
                ck.eq("B22 == mu a3 a1", self.b[(1, 1)], mu * a3 * a1);
                ck.eq("B33 == mu a1 a2", self.b[(2, 2)], mu * a1 * a2);
                ck.eq("C11 == mu^2 a1 (a2-a3)^2", c1, mu * mu * a1 * (a2 - a3).powi(2));
                ck.eq("C22 == mu^2 a2 (a3-a1)^2", c2, mu * mu * a2 * (a3 - a1).powi(2));
                ck.eq("C33 == mu^2 a3 (a1-a2)^2", c3, mu * mu * a3 * (a1 - a2).powi(2));
            }
            KirchhoffCase::Lyapunov { mu, d } => {
                diag_zero(&mut ck, "B", &self.b);
                diag_zero(&mut ck, "C", &self.c);
                ck.eq("A == 1", (self.a - Matrix3::identity()).norm(), 0.0);
                for (i, di) in d.iter().enumerate() {
                    ck.eq(&format!("B{0}{0} == -2 mu d{0}", i + 1), self.b[(i, i)], -2.0 * mu * di);
                }
                ck.eq("C11 == 4 mu^2 (d2-d3)^2", c1, 4.0 * mu * mu * (d[1] - d[2]).powi(2));
                ck.eq("C22 == 4 mu^2 (d3-d1)^2", c2, 4.0 * mu * mu * (d[2] - d[0]).powi(2));
                ck.eq("C33 == 4 mu^2 (d1-d2)^2", c3, 4.0 * mu * mu * (d[0] - d[1]).powi(2));
            }
            KirchhoffCase::Sokolov { alpha, beta } => {
                ck.eq("A == diag(1,1,2) (11)", a1, 1.0);
                ck.eq("A == diag(1,1,2) (22)", a2, 1.0);
                ck.eq("A == diag(1,1,2) (33)", a3, 2.0);
                ck.eq("B13 == alpha", self.b[(0, 2)], *alpha);
                ck.eq("B23 == beta", self.b[(1, 2)], *beta);
                ck.eq("B diag == 0", self.b[(0, 0)].abs() + self.b[(1, 1)].abs() + self.b[(2, 2)].abs(), 0.0);
                ck.eq("B12 == 0", self.b[(0, 1)], 0.0);
                ck.eq("C11 == 4 beta^2", c1, 4.0 * beta * beta);
                ck.eq("C22 == 4 alpha^2", c2, 4.0 * alpha * alpha);
                ck.eq("C12 == -4 alpha beta", self.c[(0, 1)], -4.0 * alpha * beta);
                ck.eq("C33 == -4(alpha^2+beta^2)", c3, -4.0 * (alpha * alpha + beta * beta));
                ck.eq("C13 == 0", self.c[(0, 2)], 0.0);
                ck.eq("C23 == 0", self.c[(1, 2)], 0.0);
            }
            KirchhoffCase::Chaplygin1 { c } => {
                diag_zero(&mut ck, "A", &self.a);
                diag_zero(&mut ck, "C", &self.c);
                ck.eq("B == 0", self.b.norm(), 0.0);
                ck.eq("A11 == A22", a1, a2);
                ck.eq("A33 == 2 A11", a3, 2.0 * a1);
                ck.eq("C11 == c", c1, *c);
                ck.eq("C22 == -c", c2, -*c);
                ck.eq("C33 == 0", c3, 0.0);
            }
            KirchhoffCase::Chaplygin2 { .. } => {
                ck.positive("a2 - a1 > 0", a2 - a1);
                ck.positive("a3 - a2 > 0", a3 - a2);
                ck.eq("A off-diagonal == 0", offdiag_norm(&self.a), 0.0);
                ck.eq("B12 == 0", self.b[(0, 1)], 0.0);
                ck.eq("B23 == 0", self.b[(1, 2)], 0.0);
                ck.eq("C12 == 0", self.c[(0, 1)], 0.0);
                ck.eq("C23 == 0", self.c[(1, 2)], 0.0);
                let s21 = (a2 - a1).max(0.0).sqrt();
                let s32 = (a3 - a2).max(0.0).sqrt();
                // try both sign branches; keep the better one
                let mut best: Option<(i8, Vec<(String, f64)>)> = None;
                for s in [1.0f64, -1.0] {
                    let conds = vec![
                        (
                            format!("b13 sqrt(a2-a1) {} (b2-b1) sqrt(a3-a2) == 0", pm(-s)),
                            self.b[(0, 2)] * s21 - s * (self.b[(1, 1)] - self.b[(0, 0)]) * s32,
                        ),
                        (
                            format!("b13 sqrt(a3-a2) {} (b3-b2) sqrt(a2-a1) == 0", pm(s)),
                            self.b[(0, 2)] * s32 + s * (self.b[(2, 2)] - self.b[(1, 1)]) * s21,
                        ),
                        (
                            format!("c13 sqrt(a2-a1) {} (c2-c1) sqrt(a3-a2) == 0", pm(-s)),
                            self.c[(0, 2)] * s21 - s * (c2 - c1) * s32,
                        ),
                        (
                            format!("c13 sqrt(a3-a2) {} (c3-c2) sqrt(a2-a1) == 0", pm(s)),
                            self.c[(0, 2)] * s32 + s * (c3 - c2) * s21,
                        ),
                    ];
                    let worst = conds.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
                    if best.is_none()
                        || worst
                            < best
                                .as_ref()
                                .unwrap()
                                .1
                                .iter()
                                .map(|(_, v)| v.abs())
                                .fold(0.0, f64::max)
                    {
                        best = Some((s as i8, conds));
                    }
                }
                let (bsign, conds) = best.unwrap();
                branch = Some(bsign);
                for (name, v) in conds {
                    ck.eq(&name, v, 0.0);
                }
            }
        }
        let mut report = ck.finish(self.case.tag());
        report.branch = branch;
        report
    }

    pub fn rhs(&self, x: &PhasePoint) -> DVector<f64> {
        let (m, g) = expect_e3(x);
        let hm = self.a * m + self.b * g;
        let hg = self.b * m + self.c * g;
        let mdot = m.cross(&hm) + g.cross(&hg);
        let gdot = g.cross(&hm);
        DVector::from_vec(vec![mdot.x, mdot.y, mdot.z, gdot.x, gdot.y, gdot.z])
    }

    pub fn hamiltonian(&self) -> SmoothFn {
        let (a, b, c) = (self.a, self.b, self.c);
        SmoothFn::new("H", move |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            0.5 * (a * m).dot(m) + (b * m).dot(g) + 0.5 * (c * g).dot(g)
        })
        .with_gradient(move |x: &PhasePoint| {
            let (m, g) = expect_e3(x);
            let hm = a * m + b * g;
            let hg = b * m + c * g;
            DVector::from_vec(vec![hm.x, hm.y, hm.z, hg.x, hg.y, hg.z])
        })
    }

    pub fn integrals(&self) -> Vec<SmoothFn> {
        let mut out = vec![self.hamiltonian()];
        match &self.case {
            KirchhoffCase::Generic | KirchhoffCase::Chaplygin2 { .. } => {}
            KirchhoffCase::Kirchhoff => {
                out.push(SmoothFn::new("F4", |x: &PhasePoint| expect_e3(x).0.z));
            }
            KirchhoffCase::Clebsch1 { a } => {
                let a = *a;
                let c = self.c;
                let adj = adjugate(&c);
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    a * (c * m).dot(m) - (adj * g).dot(g)
                }));
            }
            KirchhoffCase::Clebsch2 { theta, .. } => {
                let theta = *theta;
                let a = self.a;
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    m.dot(m) + theta * (a * g).dot(g)
                }));
            }
            KirchhoffCase::Steklov { mu } => {
                let mu = *mu;
                let av = Vec3::new(self.a[(0, 0)], self.a[(1, 1)], self.a[(2, 2)]);
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    let sq = |v: f64| v * v;
                    m.x * m.x - 2.0 * mu * av.x * m.x * g.x + m.y * m.y
                        - 2.0 * mu * av.y * m.y * g.y
                        + m.z * m.z
                        - 2.0 * mu * av.z * m.z * g.z
                        + mu * mu
                            * (sq(av.y - av.z) * g.x * g.x
                                + sq(av.z - av.x) * g.y * g.y
                                + sq(av.x - av.y) * g.z * g.z)
                }));
            }
            KirchhoffCase::Lyapunov { mu, d } => {
                let mu = *mu;
                let d = *d;
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    let sq = |v: f64| v * v;
                    d[0] * m.x * m.x + d[1] * m.y * m.y + d[2] * m.z * m.z
                        + 4.0 * mu * (d[1] * d[2] * m.x * g.x + d[2] * d[0] * m.y * g.y + d[0] * d[1] * m.z * g.z)
                        + 4.0 * mu * mu
                            * (d[0] * sq(d[1] - d[2]) * g.x * g.x
                                + d[1] * sq(d[2] - d[0]) * g.y * g.y
                                + d[2] * sq(d[0] - d[1]) * g.z * g.z)
                }));
            }
            KirchhoffCase::Sokolov { alpha, beta } => {
                let (al, be) = (*alpha, *beta);
                out.push(SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    let w = m.z + 2.0 * al * g.x + 2.0 * be * g.y;
                    let v = be * m.x - al * m.y;
                    let p = (al * al + be * be) * w * w + v * v;
                    let q = (al * m.x + be * m.y + (al * al + be * be) * g.z) * w
                        + 3.0 * v * (be * g.x - al * g.y);
                    (m.z - al * g.x - be * g.y).powi(2) * p + q * q
                }));
            }
            KirchhoffCase::Chaplygin1 { c } => {
                let coa = c / self.a[(0, 0)];
                let f4 = SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, g) = expect_e3(x);
                    (m.x * m.x - m.y * m.y + coa * g.z * g.z).powi(2)
                        + 4.0 * m.x * m.x * m.y * m.y
                })
                .with_leaf(LeafCondition {
                    name: "F1 == 0".into(),
                    f: Arc::new(|x: &PhasePoint| {
                        let (m, g) = expect_e3(x);
                        m.dot(g)
                    }),
                    tol: 1e-9,
                });
                out.push(f4);
            }
        }
        out
    }

    pub fn invariant_relations(&self) -> Vec<SmoothFn> {
        match &self.case {
            KirchhoffCase::Chaplygin2 { branch } => {
                let s = *branch as f64;
                let s21 = (self.a[(1, 1)] - self.a[(0, 0)]).sqrt();
                let s32 = (self.a[(2, 2)] - self.a[(1, 1)]).sqrt();
                vec![SmoothFn::new("F4", move |x: &PhasePoint| {
                    let (m, _) = expect_e3(x);
                    m.x * s21 - s * m.z * s32
                })]
            }
            _ => Vec::new(),
        }
    }

    pub fn sample_state(&self, rng: &mut impl rand::Rng) -> PhasePoint {
        let m = sample_box3(rng, 1.2);
        let mut g = sample_unit3(rng);
        if matches!(self.case, KirchhoffCase::Chaplygin1 { .. }) {
            g -= m * (m.dot(&g) / m.dot(&m));
            g = g.normalize();
        }
        PhasePoint::e3(m, g)
    }

    pub fn sample_invariant_state(&self, rng: &mut impl rand::Rng) -> Option<PhasePoint> {
        match &self.case {
            KirchhoffCase::Chaplygin2 { branch } => {
                let s = *branch as f64;
                let s21 = (self.a[(1, 1)] - self.a[(0, 0)]).sqrt();
                let s32 = (self.a[(2, 2)] - self.a[(1, 1)]).sqrt();
                // F4 = M1 s21 - s M3 s32 = 0: take M1 = s*t*s32, M3 = t*s21
                let t = rng.gen::<f64>() * 2.0 - 1.0;
                let m = Vec3::new(s * t * s32, rng.gen::<f64>() * 2.0 - 1.0, t * s21);
                Some(PhasePoint::e3(m, sample_unit3(rng)))
            }
            _ => None,
        }
    }
}

fn pm(s: f64) -> char {
    if s >= 0.0 {
        '+'
    } else {
        '-'
    }
}

fn offdiag_norm(m: &Matrix3<f64>) -> f64 {
    (m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2)).sqrt()
}

/// Adjugate of a symmetric 3x3 matrix (`det(C) C^{-1}` without the inverse).
fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let cof = |i: usize, j: usize| -> f64 {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
            - m[(rows[0], cols[1])] * m[(rows[1], cols[0])];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // adj = transpose of cofactor matrix
    Matrix3::from_fn(|i, j| cof(j, i))
}
