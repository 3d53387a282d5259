//! Lie–Poisson brackets, Hamiltonian vector fields, Casimirs and divergence
//! on the three phase spaces `e(3)*`, `(so(n)×so(n))*` and `e(4)*`.
//!
//! Sign convention: the structure constants are the printed ones
//! (`{M_i,M_j} = -eps_ijk M_k` on `e(3)`, the delta relations on `e(4)`,
//! the semidirect-product two-form on `so(n)×so(n)`) and flows are generated
//! by `xdot = {x, H}`, which reproduces the body-frame equations
//! `Mdot = M×∂H/∂M + Γ×∂H/∂Γ`, `Γdot = Γ×∂H/∂M` exactly.

use crate::algebra::{commutator, inner, SkewMat, Vec3, Vec4};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    /// `(M, Γ)` with both 3-vectors.
    E3,
    /// `(M, Γ)` with both in `so(n)`; `n = 4` for the bitop and HA-4.
    SoN(usize),
    /// `(M, Γ)` with `M` in `so(4)` and `Γ` a 4-vector.
    E4,
}

impl PhaseKind {
    /// Flattened coordinate count.
    pub fn dim(&self) -> usize {
        match *self {
            PhaseKind::E3 => 6,
            PhaseKind::SoN(n) => n * (n - 1),
            PhaseKind::E4 => 10,
        }
    }

    /// Coordinate names in flattening order (used for CSV headers).
    pub fn coord_names(&self) -> Vec<String> {
        match *self {
            PhaseKind::E3 => ["M1", "M2", "M3", "G1", "G2", "G3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            PhaseKind::SoN(n) => {
                let mut out = Vec::new();
                for p in ["M", "G"] {
                    for i in 0..n {
                        for j in (i + 1)..n {
                            out.push(format!("{p}{}{}", i + 1, j + 1));
                        }
                    }
                }
                out
            }
            PhaseKind::E4 => {
                let mut out = Vec::new();
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        out.push(format!("M{}{}", i + 1, j + 1));
                    }
                }
                for k in 0..4 {
                    out.push(format!("G{}", k + 1));
                }
                out
            }
        }
    }
}

/// A point of one of the three phase spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum PhasePoint {
    E3 { m: Vec3, g: Vec3 },
    SoN { m: SkewMat, g: SkewMat },
    E4 { m: SkewMat, g: Vec4 },
}

impl PhasePoint {
    pub fn e3(m: Vec3, g: Vec3) -> Self {
        PhasePoint::E3 { m, g }
    }

    pub fn son(m: SkewMat, g: SkewMat) -> Self {
        assert_eq!(m.dim(), g.dim());
        PhasePoint::SoN { m, g }
    }

    pub fn e4(m: SkewMat, g: Vec4) -> Self {
        assert_eq!(m.dim(), 4);
        PhasePoint::E4 { m, g }
    }

    pub fn kind(&self) -> PhaseKind {
        match self {
            PhasePoint::E3 { .. } => PhaseKind::E3,
            PhasePoint::SoN { m, .. } => PhaseKind::SoN(m.dim()),
            PhasePoint::E4 { .. } => PhaseKind::E4,
        }
    }

    /// Canonical flattening: `M` block then `Γ` block, upper triangles
    /// row-major for matrix parts.
    pub fn flatten(&self) -> DVector<f64> {
        match self {
            PhasePoint::E3 { m, g } => {
                DVector::from_vec(vec![m.x, m.y, m.z, g.x, g.y, g.z])
            }
            PhasePoint::SoN { m, g } => {
                let mut v = m.upper();
                v.extend(g.upper());
                DVector::from_vec(v)
            }
            PhasePoint::E4 { m, g } => {
                let mut v = m.upper();
                v.extend_from_slice(&[g.x, g.y, g.z, g.w]);
                DVector::from_vec(v)
            }
        }
    }

    pub fn from_flat(kind: PhaseKind, v: &DVector<f64>) -> Self {
        assert_eq!(v.len(), kind.dim());
        match kind {
            PhaseKind::E3 => PhasePoint::E3 {
                m: Vec3::new(v[0], v[1], v[2]),
                g: Vec3::new(v[3], v[4], v[5]),
            },
            PhaseKind::SoN(n) => {
                let k = n * (n - 1) / 2;
                PhasePoint::SoN {
                    m: SkewMat::from_upper(n, &v.as_slice()[..k]),
                    g: SkewMat::from_upper(n, &v.as_slice()[k..]),
                }
            }
            PhaseKind::E4 => PhasePoint::E4 {
                m: SkewMat::from_upper(4, &v.as_slice()[..6]),
                g: Vec4::new(v[6], v[7], v[8], v[9]),
            },
        }
    }

    pub fn norm(&self) -> f64 {
        self.flatten().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.flatten().iter().all(|x| x.is_finite())
    }
}

type ScalarFn = Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&PhasePoint) -> DVector<f64> + Send + Sync>;

/// Condition under which a conditional first integral is valid
/// (e.g. the Goryachev–Chaplygin integral on the leaf `F1 = 0`).
#[derive(Clone)]
pub struct LeafCondition {
    pub name: String,
    pub f: ScalarFn,
    pub tol: f64,
}

/// A scalar observable with an optional analytic gradient in the flattened
/// coordinates; without one, central finite differences are used with step
/// `1e-6 * max(1, |x|)`.
#[derive(Clone)]
pub struct SmoothFn {
    name: String,
    f: ScalarFn,
    grad: Option<GradFn>,
    leaf: Option<LeafCondition>,
}

impl std::fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothFn").field("name", &self.name).finish()
    }
}

pub const FD_STEP_SCALE: f64 = 1e-6;

impl SmoothFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SmoothFn {
            name: name.into(),
            f: Arc::new(f),
            grad: None,
            leaf: None,
        }
    }

    pub fn with_gradient(
        mut self,
        g: impl Fn(&PhasePoint) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        self.grad = Some(Arc::new(g));
        self
    }

    pub fn with_leaf(mut self, leaf: LeafCondition) -> Self {
        self.leaf = Some(leaf);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn leaf(&self) -> Option<&LeafCondition> {
        self.leaf.as_ref()
    }

    pub fn eval(&self, x: &PhasePoint) -> f64 {
        (self.f)(x)
    }

    pub fn gradient(&self, x: &PhasePoint) -> DVector<f64> {
        match &self.grad {
            Some(g) => g(x),
            None => fd_gradient(self.f.as_ref(), x),
        }
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }
}

/// Central finite-difference gradient in the flattened coordinates.
pub fn fd_gradient(f: &dyn Fn(&PhasePoint) -> f64, x: &PhasePoint) -> DVector<f64> {
    let kind = x.kind();
    let flat = x.flatten();
    let h = FD_STEP_SCALE * flat.norm().max(1.0);
    let n = flat.len();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        let mut up = flat.clone();
        let mut dn = flat.clone();
        up[i] += h;
        dn[i] -= h;
        out[i] = ((f)(&PhasePoint::from_flat(kind, &up)) - (f)(&PhasePoint::from_flat(kind, &dn)))
            / (2.0 * h);
    }
    out
}

/// Splits a flattened gradient into its `M`/`Γ` halves for matrix kinds.
fn gradient_halves_son(grad: &DVector<f64>, n: usize) -> (SkewMat, SkewMat) {
    let k = n * (n - 1) / 2;
    (
        SkewMat::from_upper(n, &grad.as_slice()[..k]),
        SkewMat::from_upper(n, &grad.as_slice()[k..]),
    )
}

/// `{f,g}` on `e(3)`: `-<M, f_M × g_M> - <Γ, f_M × g_Γ + f_Γ × g_M>`.
pub fn bracket_e3(f: &SmoothFn, g: &SmoothFn, x: &PhasePoint) -> f64 {
    let (m, gam) = match x {
        PhasePoint::E3 { m, g } => (m, g),
        _ => panic!("bracket_e3 needs an e(3) point"),
    };
    let fg = f.gradient(x);
    let gg = g.gradient(x);
    let fm = Vec3::new(fg[0], fg[1], fg[2]);
    let fgam = Vec3::new(fg[3], fg[4], fg[5]);
    let gm = Vec3::new(gg[0], gg[1], gg[2]);
    let ggam = Vec3::new(gg[3], gg[4], gg[5]);
    -m.dot(&fm.cross(&gm)) - gam.dot(&(fm.cross(&ggam) + fgam.cross(&gm)))
}

/// `{f,g}` on `so(n)×so(n)` (semidirect-product structure):
/// `-<Γ,[f_M,g_Γ]> - <Γ,[f_Γ,g_M]> - <M,[f_M,g_M]>`
/// with k-gradients taken against the invariant pairing.
pub fn bracket_son(f: &SmoothFn, g: &SmoothFn, x: &PhasePoint) -> f64 {
    let (m, gam) = match x {
        PhasePoint::SoN { m, g } => (m, g),
        _ => panic!("bracket_son needs an so(n)xso(n) point"),
    };
    let n = m.dim();
    let (fm, fgam) = gradient_halves_son(&f.gradient(x), n);
    let (gm, ggam) = gradient_halves_son(&g.gradient(x), n);
    -inner(gam, &commutator(&fm, &ggam).unwrap()).unwrap()
        - inner(gam, &commutator(&fgam, &gm).unwrap()).unwrap()
        - inner(m, &commutator(&fm, &gm).unwrap()).unwrap()
}

/// `{f,g}` on `e(4)` from the delta relations
/// `{M_ij,M_kl} = δ_ik M_jl + δ_jl M_ik - δ_il M_jk - δ_jk M_il`,
/// `{M_ij,Γ_k} = δ_ik Γ_j - δ_jk Γ_i`.
pub fn bracket_e4(f: &SmoothFn, g: &SmoothFn, x: &PhasePoint) -> f64 {
    let fg = f.gradient(x);
    let gg = g.gradient(x);
    let p = structure_matrix(x);
    (fg.transpose() * p * gg)[(0, 0)]
}

/// `{f,g}` dispatching on the phase-space kind.
pub fn bracket(f: &SmoothFn, g: &SmoothFn, x: &PhasePoint) -> f64 {
    match x.kind() {
        PhaseKind::E3 => bracket_e3(f, g, x),
        PhaseKind::SoN(_) => bracket_son(f, g, x),
        PhaseKind::E4 => bracket_e4(f, g, x),
    }
}

/// The Poisson tensor `P_ab = {x_a, x_b}` in flattened coordinates.
pub fn structure_matrix(x: &PhasePoint) -> DMatrix<f64> {
    match x {
        PhasePoint::E3 { m, g } => {
            let mut p = DMatrix::zeros(6, 6);
            let eps = |i: usize, j: usize, k: usize| -> f64 {
                (((i as i64 - j as i64) * (j as i64 - k as i64) * (k as i64 - i as i64)) as f64)
                // normalized Levi-Civita on {0,1,2}: value in {-2,2} -> {-1,1}
                / 2.0
            };
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let e = eps(i, j, k);
                        if e != 0.0 {
                            p[(i, j)] += -e * m[k];
                            p[(i, 3 + j)] += -e * g[k];
                            p[(3 + j, i)] -= -e * g[k];
                        }
                    }
                }
            }
            p
        }
        PhasePoint::SoN { m, .. } => {
            // derive from the bracket on coordinate functions
            let n = m.dim();
            let kind = PhaseKind::SoN(n);
            let dim = kind.dim();
            let coords: Vec<SmoothFn> = (0..dim).map(|i| coordinate_fn(kind, i)).collect();
            let mut p = DMatrix::zeros(dim, dim);
            for a in 0..dim {
                for b in (a + 1)..dim {
                    let v = bracket_son(&coords[a], &coords[b], x);
                    p[(a, b)] = v;
                    p[(b, a)] = -v;
                }
            }
            p
        }
        PhasePoint::E4 { m, g } => {
            let pairs: Vec<(usize, usize)> = (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .collect();
            let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
            let mm = |i: usize, j: usize| m.get(i, j);
            let mut p = DMatrix::zeros(10, 10);
            for (a, &(i, j)) in pairs.iter().enumerate() {
                for (b, &(k, l)) in pairs.iter().enumerate() {
                    p[(a, b)] = d(i, k) * mm(j, l) + d(j, l) * mm(i, k)
                        - d(i, l) * mm(j, k)
                        - d(j, k) * mm(i, l);
                }
                for k in 0..4 {
                    let v = d(i, k) * g[j] - d(j, k) * g[i];
                    p[(a, 6 + k)] = v;
                    p[(6 + k, a)] = -v;
                }
            }
            p
        }
    }
}

/// Coordinate function `x_i` with its (constant) analytic gradient.
pub fn coordinate_fn(kind: PhaseKind, index: usize) -> SmoothFn {
    let dim = kind.dim();
    assert!(index < dim);
    let name = kind.coord_names()[index].clone();
    SmoothFn::new(name, move |x: &PhasePoint| x.flatten()[index]).with_gradient(move |_0| {
        let mut g = DVector::zeros(dim);
        g[index] = 1.0;
        g
    })
}

/// The Hamiltonian vector field `xdot = {x, H}` as a flattened tangent.
///
/// On `e(3)` this is `Mdot = M×H_M + Γ×H_Γ`, `Γdot = Γ×H_M`; on
/// `so(n)×so(n)` it is `Mdot = [M,H_M] + [Γ,H_Γ]`, `Γdot = [Γ,H_M]`; on
/// `e(4)` it is `Mdot = [M,H_M] + H_Γ∧Γ`, `Γdot = -H_M Γ`.
pub fn ham_field(h: &SmoothFn, x: &PhasePoint) -> DVector<f64> {
    let grad = h.gradient(x);
    match x {
        PhasePoint::E3 { m, g } => {
            let hm = Vec3::new(grad[0], grad[1], grad[2]);
            let hg = Vec3::new(grad[3], grad[4], grad[5]);
            let mdot = m.cross(&hm) + g.cross(&hg);
            let gdot = g.cross(&hm);
            DVector::from_vec(vec![mdot.x, mdot.y, mdot.z, gdot.x, gdot.y, gdot.z])
        }
        PhasePoint::SoN { m, g } => {
            let n = m.dim();
            let (hm, hg) = gradient_halves_son(&grad, n);
            let mdot = commutator(m, &hm).unwrap().add(&commutator(g, &hg).unwrap());
            let gdot = commutator(g, &hm).unwrap();
            let mut v = mdot.upper();
            v.extend(gdot.upper());
            DVector::from_vec(v)
        }
        PhasePoint::E4 { m, g } => {
            let hm = SkewMat::from_upper(4, &grad.as_slice()[..6]);
            let hg = Vec4::new(grad[6], grad[7], grad[8], grad[9]);
            let mut mdot = commutator(m, &hm).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    mdot.set(i, j, mdot.get(i, j) + hg[i] * g[j] - hg[j] * g[i]);
                }
            }
            let gd = -hm.mul_vec(&DVector::from_vec(vec![g.x, g.y, g.z, g.w]));
            let mut v = mdot.upper();
            v.extend_from_slice(gd.as_slice());
            DVector::from_vec(v)
        }
    }
}

/// The Casimir functions of each structure, verified at construction on a
/// few deterministic pseudo-random points (fail fast on transcription
/// slips).
pub fn casimirs(kind: PhaseKind) -> Vec<SmoothFn> {
    let fns = casimirs_unchecked(kind);
    let mut state = 0x9e3779b97f4a7c15u64;
    for _ in 0..10 {
        let pt = pseudo_random_point(kind, &mut state);
        let scale = pt.norm().max(1.0);
        for c in &fns {
            for i in 0..kind.dim() {
                let xi = coordinate_fn(kind, i);
                let b = bracket(c, &xi, &pt);
                assert!(
                    b.abs() <= 1e-8 * scale * scale,
                    "casimir {} fails to commute with {} ({b:.3e})",
                    c.name(),
                    xi.name()
                );
            }
        }
    }
    fns
}

fn casimirs_unchecked(kind: PhaseKind) -> Vec<SmoothFn> {
    match kind {
        PhaseKind::E3 => vec![
            SmoothFn::new("F1", |x| match x {
                PhasePoint::E3 { m, g } => m.dot(g),
                _ => unreachable!(),
            })
            .with_gradient(|x| match x {
                PhasePoint::E3 { m, g } => {
                    DVector::from_vec(vec![g.x, g.y, g.z, m.x, m.y, m.z])
                }
                _ => unreachable!(),
            }),
            SmoothFn::new("F2", |x| match x {
                PhasePoint::E3 { g, .. } => g.dot(g),
                _ => unreachable!(),
            })
            .with_gradient(|x| match x {
                PhasePoint::E3 { g, .. } => {
                    DVector::from_vec(vec![0.0, 0.0, 0.0, 2.0 * g.x, 2.0 * g.y, 2.0 * g.z])
                }
                _ => unreachable!(),
            }),
        ],
        PhaseKind::SoN(n) => {
            let mut out = vec![
                // E and F: coefficients of λ and λ^0 in -1/2 Tr L(λ)^2
                SmoothFn::new("E", |x| match x {
                    PhasePoint::SoN { m, g } => 2.0 * inner(m, g).unwrap(),
                    _ => unreachable!(),
                }),
                SmoothFn::new("F", |x| match x {
                    PhasePoint::SoN { g, .. } => inner(g, g).unwrap(),
                    _ => unreachable!(),
                }),
            ];
            if n == 4 {
                // J and K: coefficients of λ and λ^0 in Pf L(λ)
                out.push(SmoothFn::new("J", |x| match x {
                    PhasePoint::SoN { m, g } => {
                        m.get(0, 1) * g.get(2, 3) + g.get(0, 1) * m.get(2, 3)
                            - m.get(0, 2) * g.get(1, 3)
                            - g.get(0, 2) * m.get(1, 3)
                            + m.get(0, 3) * g.get(1, 2)
                            + g.get(0, 3) * m.get(1, 2)
                    }
                    _ => unreachable!(),
                }));
                out.push(SmoothFn::new("K", |x| match x {
                    PhasePoint::SoN { g, .. } => crate::algebra::pfaffian4(g),
                    _ => unreachable!(),
                }));
            }
            out
        }
        PhaseKind::E4 => vec![
            SmoothFn::new("F1", |x| match x {
                PhasePoint::E4 { g, .. } => g.dot(g),
                _ => unreachable!(),
            }),
            SmoothFn::new("F2", |x| match x {
                PhasePoint::E4 { m, g } => e4_second_casimir(m, g),
                _ => unreachable!(),
            }),
        ],
    }
}

/// The components whose squares sum to the second `e(4)` Casimir.
pub fn e4_casimir_components(m: &SkewMat, g: &Vec4) -> [f64; 4] {
    [
        m.get(0, 2) * g.w - m.get(0, 3) * g.z + m.get(2, 3) * g.x,
        m.get(1, 2) * g.x + m.get(0, 1) * g.z - m.get(0, 2) * g.y,
        m.get(1, 3) * g.x - m.get(0, 3) * g.y + m.get(0, 1) * g.w,
        m.get(1, 2) * g.w + m.get(2, 3) * g.y - m.get(1, 3) * g.z,
    ]
}

fn e4_second_casimir(m: &SkewMat, g: &Vec4) -> f64 {
    e4_casimir_components(m, g).iter().map(|w| w * w).sum()
}

/// Central finite-difference divergence of a flattened field.
pub fn divergence(field: &dyn Fn(&PhasePoint) -> DVector<f64>, x: &PhasePoint) -> f64 {
    let kind = x.kind();
    let flat = x.flatten();
    let h = FD_STEP_SCALE * flat.norm().max(1.0);
    let mut div = 0.0;
    for i in 0..flat.len() {
        let mut up = flat.clone();
        let mut dn = flat.clone();
        up[i] += h;
        dn[i] -= h;
        div += (field(&PhasePoint::from_flat(kind, &up))[i]
            - field(&PhasePoint::from_flat(kind, &dn))[i])
            / (2.0 * h);
    }
    div
}

/// Deterministic pseudo-random phase points for construction-time checks.
pub(crate) fn pseudo_random_point(kind: PhaseKind, state: &mut u64) -> PhasePoint {
    let mut next = || {
        // splitmix64
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z as f64 / u64::MAX as f64) * 4.0 - 2.0
    };
    let v = DVector::from_fn(kind.dim(), |_, _| next());
    PhasePoint::from_flat(kind, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_point(kind: PhaseKind, rng: &mut impl Rng) -> PhasePoint {
        let v = DVector::from_fn(kind.dim(), |_, _| 2.0 * (rng.gen::<f64>() - 0.5));
        PhasePoint::from_flat(kind, &v)
    }

    #[test]
    fn flatten_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::SoN(5), PhaseKind::E4] {
            for _ in 0..10 {
                let x = rand_point(kind, &mut rng);
                assert_eq!(PhasePoint::from_flat(kind, &x.flatten()), x);
            }
        }
    }

    #[test]
    fn bracket_e3_frozen_example() {
        // {M1, M2} = -M3 = -5 at M = (0,0,5)
        let x = PhasePoint::e3(Vec3::new(0.0, 0.0, 5.0), Vec3::new(0.3, -0.2, 0.9));
        let m1 = coordinate_fn(PhaseKind::E3, 0);
        let m2 = coordinate_fn(PhaseKind::E3, 1);
        assert!((bracket_e3(&m1, &m2, &x) + 5.0).abs() < 1e-12);
        // antisymmetry: {f,f} = 0
        assert_eq!(bracket_e3(&m1, &m1, &x), 0.0);
    }

    #[test]
    fn bracket_e4_frozen_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = rand_point(PhaseKind::E4, &mut rng);
        // {M12, M34} = 0 (all deltas vanish)
        let m12 = coordinate_fn(PhaseKind::E4, 0);
        let m34 = coordinate_fn(PhaseKind::E4, 5);
        assert!(bracket_e4(&m12, &m34, &x).abs() < 1e-12);
        // {M12, G1} = G2 at G = (0,1,0,0)
        let x2 = PhasePoint::e4(
            match &x {
                PhasePoint::E4 { m, .. } => m.clone(),
                _ => unreachable!(),
            },
            Vec4::new(0.0, 1.0, 0.0, 0.0),
        );
        let g1 = coordinate_fn(PhaseKind::E4, 6);
        assert!((bracket_e4(&m12, &g1, &x2) - 1.0).abs() < 1e-12);
        assert_eq!(bracket_e4(&g1, &g1, &x2), 0.0);
    }

    #[test]
    fn bracket_axioms_all_kinds() {
        // antisymmetry, bilinearity spot checks, Leibniz on coordinate
        // products, Jacobi on coordinate triples
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::E4] {
            let dim = kind.dim();
            let coords: Vec<SmoothFn> = (0..dim).map(|i| coordinate_fn(kind, i)).collect();
            for _ in 0..3 {
                let x = rand_point(kind, &mut rng);
                let p = structure_matrix(&x);
                // antisymmetry of the tensor
                assert!((&p + p.transpose()).norm() <= 1e-9);
                // Leibniz: {x_a x_b, x_c} = x_a {x_b, x_c} + x_b {x_a, x_c}
                let flat = x.flatten();
                for _ in 0..8 {
                    let a = rng.gen_range(0..dim);
                    let b = rng.gen_range(0..dim);
                    let c = rng.gen_range(0..dim);
                    let prod = {
                        let (fa, fb) = (coords[a].clone(), coords[b].clone());
                        SmoothFn::new("prod", move |y: &PhasePoint| fa.eval(y) * fb.eval(y))
                            .with_gradient({
                                let (fa, fb) = (coords[a].clone(), coords[b].clone());
                                move |y: &PhasePoint| {
                                    fa.gradient(y) * fb.eval(y) + fb.gradient(y) * fa.eval(y)
                                }
                            })
                    };
                    let lhs = bracket(&prod, &coords[c], &x);
                    let rhs = flat[a] * p[(b, c)] + flat[b] * p[(a, c)];
                    assert!(
                        (lhs - rhs).abs() <= 1e-9,
                        "leibniz {kind:?} ({a},{b},{c}): {lhs} vs {rhs}"
                    );
                }
                // Jacobi on coordinate triples via the tensor:
                // sum_d P_ad d P_bc/dx_d + cyclic = 0; coordinate brackets are
                // linear so d{x_b,x_c}/dx_d is the constant tensor gradient.
                let h = 1e-6 * x.norm().max(1.0);
                for _ in 0..6 {
                    let a = rng.gen_range(0..dim);
                    let b = rng.gen_range(0..dim);
                    let c = rng.gen_range(0..dim);
                    let mut jac = 0.0;
                    for d in 0..dim {
                        let mut up = flat.clone();
                        let mut dn = flat.clone();
                        up[d] += h;
                        dn[d] -= h;
                        let pu = structure_matrix(&PhasePoint::from_flat(kind, &up));
                        let pd = structure_matrix(&PhasePoint::from_flat(kind, &dn));
                        let dbc = (pu[(b, c)] - pd[(b, c)]) / (2.0 * h);
                        let dca = (pu[(c, a)] - pd[(c, a)]) / (2.0 * h);
                        let dab = (pu[(a, b)] - pd[(a, b)]) / (2.0 * h);
                        jac += p[(a, d)] * dbc + p[(b, d)] * dca + p[(c, d)] * dab;
                    }
                    assert!(jac.abs() <= 1e-9, "jacobi {kind:?}: {jac}");
                }
            }
        }
    }

    #[test]
    fn casimirs_commute_with_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::E4] {
            let cs = casimirs(kind);
            for _ in 0..100 {
                let x = rand_point(kind, &mut rng);
                for c in &cs {
                    for i in 0..kind.dim() {
                        let xi = coordinate_fn(kind, i);
                        assert!(
                            bracket(c, &xi, &x).abs() <= 1e-9,
                            "{:?} casimir {} vs {}",
                            kind,
                            c.name(),
                            xi.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn casimir_e3_frozen_values() {
        let x = PhasePoint::e3(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.0, 0.0, 1.0));
        let cs = casimirs(PhaseKind::E3);
        assert_eq!(cs[0].eval(&x), 3.0); // F1 = <M,G>
        assert_eq!(cs[1].eval(&x), 1.0); // F2 = <G,G>
    }

    #[test]
    fn ham_field_of_casimir_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::E4] {
            for c in casimirs(kind) {
                for _ in 0..10 {
                    let x = rand_point(kind, &mut rng);
                    let v = ham_field(&c, &x);
                    assert!(v.norm() <= 1e-7 * x.norm().max(1.0).powi(2), "{}", c.name());
                }
            }
        }
    }

    #[test]
    fn ham_field_matches_structure_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::SoN(5), PhaseKind::E4] {
            for _ in 0..5 {
                let x = rand_point(kind, &mut rng);
                // a random quadratic Hamiltonian
                let dim = kind.dim();
                let q: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
                let h = {
                    let q = q.clone();
                    SmoothFn::new("H", move |y: &PhasePoint| {
                        let f = y.flatten();
                        0.5 * f.iter().zip(&q).map(|(v, w)| w * v * v).sum::<f64>()
                    })
                };
                let direct = ham_field(&h, &x);
                let via_p = structure_matrix(&x) * h.gradient(&x);
                assert!(
                    (&direct - &via_p).norm() <= 1e-7 * direct.norm().max(1.0),
                    "{kind:?}: {}",
                    (&direct - &via_p).norm()
                );
            }
        }
    }

    #[test]
    fn gradient_check_analytic_vs_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::E4] {
            let cs = casimirs(kind);
            for _ in 0..20 {
                let x = rand_point(kind, &mut rng);
                for c in &cs {
                    if !c.has_analytic_gradient() {
                        continue;
                    }
                    let a = c.gradient(&x);
                    let f = fd_gradient(&|y: &PhasePoint| c.eval(y), &x);
                    let rel = (&a - &f).norm() / a.norm().max(1.0);
                    assert!(rel <= 1e-5, "{} gradient rel err {rel}", c.name());
                }
            }
        }
    }

    #[test]
    fn divergence_of_hamiltonian_fields_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for kind in [PhaseKind::E3, PhaseKind::SoN(4), PhaseKind::E4] {
            let dim = kind.dim();
            for _ in 0..20 {
                let x = rand_point(kind, &mut rng);
                let q: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
                let h = {
                    let q = q.clone();
                    SmoothFn::new("H", move |y: &PhasePoint| {
                        let f = y.flatten();
                        0.5 * f.iter().zip(&q).map(|(v, w)| w * v * v).sum::<f64>()
                    })
                };
                let h = {
                    let q = q.clone();
                    h.with_gradient(move |y: &PhasePoint| {
                        let f = y.flatten();
                        DVector::from_fn(f.len(), |i, _| q[i] * f[i])
                    })
                };
                let d = divergence(&|y: &PhasePoint| ham_field(&h, y), &x);
                assert!(d.abs() <= 1e-5, "{kind:?} divergence {d}");
            }
        }
    }
}
