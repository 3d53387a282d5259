//! The classical r-matrix relation of the 2×2 family pair:
//! `{L(λ) ⊗ 1, 1 ⊗ L(μ)} = [r(λ-μ), L(λ)⊗1 + 1⊗L(μ)]`
//! with `r(λ) = -P/λ`, `P` the permutation matrix.
//!
//! The entrywise Poisson brackets of `L` are computed from the coordinate
//! brackets of `x, y, x̄, ȳ, x1, y1`, which themselves follow from the
//! `e(3)` structure by complex bilinearity; both routes are cross-checked
//! in the tests.

use super::LaxError;
use crate::algebra::Vec3;
use crate::poisson::PhasePoint;
use crate::systems::FamilySpec;
use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;
type CMat = DMatrix<C>;

/// The six coordinates at a state: `x, y, x̄, ȳ, x1, y1` per the rotated
/// complex frame of the family Lax matrix.
pub fn z_coordinates(spec: &FamilySpec, m: &Vec3, g: &Vec3) -> [C; 6] {
    let (al, be) = spec.alpha_beta();
    let rt2 = 2.0f64.sqrt();
    let x = C::new((be * m.x - al * m.z) / rt2, -m.y / rt2);
    let y = C::new((be * g.x - al * g.z) / rt2, -g.y / rt2);
    [
        x,
        y,
        x.conj(),
        y.conj(),
        C::new(al * m.x + be * m.z, 0.0),
        C::new(al * g.x + be * g.z, 0.0),
    ]
}

/// The printed coordinate bracket table `{z_a, z_b}` evaluated at `z`
/// (each bracket is a linear function of the coordinates).
pub fn z_bracket_table(z: &[C; 6]) -> [[C; 6]; 6] {
    let i = C::new(0.0, 1.0);
    let [x, y, xb, yb, x1, y1] = *z;
    let _ = x1;
    let mut t = [[C::default(); 6]; 6];
    let mut set = |a: usize, b: usize, v: C| {
        t[a][b] = v;
        t[b][a] = -v;
    };
    // indices: 0 = x, 1 = y, 2 = x̄, 3 = ȳ, 4 = x1, 5 = y1
    set(0, 1, C::default()); // {x,y} = 0
    set(2, 3, C::default()); // {x̄,ȳ} = 0
    set(0, 4, i * x); // {x,x1} = ix
    set(2, 4, -i * xb); // {x̄,x1} = -ix̄
    set(1, 4, i * y); // {y,x1} = iy
    set(3, 4, -i * yb); // {ȳ,x1} = -iȳ
    set(5, 4, C::default()); // {y1,x1} = 0
    set(2, 5, -i * yb); // {x̄,y1} = -iȳ
    set(0, 5, i * y); // {x,y1} = iy
    set(5, 1, C::default()); // {y1,y} = 0
    set(5, 3, C::default()); // {y1,ȳ} = 0
    set(0, 2, -i * z[4]); // {x,x̄} = -ix1
    set(1, 3, C::default()); // {y,ȳ} = 0
    set(0, 3, -i * y1); // {x,ȳ} = -iy1
    set(2, 1, i * y1); // {x̄,y} = iy1
    t
}

/// Decomposition of `L(λ)` entries as `const(λ) + Σ_c coeff_c(λ) z_c`.
fn l_entry_coeffs(spec: &FamilySpec, lambda: C) -> ([[C; 6]; 4], [C; 4]) {
    let (al, be) = spec.alpha_beta();
    let (c1, c3) = (spec.i2 * spec.x0, spec.i2 * spec.z0);
    let i = C::new(0.0, 1.0);
    let s2i = C::new(0.0, 2.0f64.sqrt());
    let il2 = C::new(1.0, 0.0) / (lambda * lambda);
    // row-major 2x2 entries: (0,0), (0,1), (1,0), (1,1)
    let mut coeff = [[C::default(); 6]; 4];
    let mut konst = [C::default(); 4];
    // ω(λ)/λ² = -i[ (αc1+βc3)λ² + x1 λ + y1 ] / λ²
    let w2 = -i * (al * c1 + be * c3);
    konst[0] = w2;
    coeff[0][4] = -i * lambda * il2;
    coeff[0][5] = -i * il2;
    konst[3] = -w2;
    coeff[3][4] = i * lambda * il2;
    coeff[3][5] = i * il2;
    // √2 i Δ/λ² = √2 i (y + λ x)/λ²
    coeff[1][1] = s2i * il2;
    coeff[1][0] = s2i * lambda * il2;
    // √2 i Δ*/λ² = √2 i (ȳ + λ x̄)/λ²
    coeff[2][3] = s2i * il2;
    coeff[2][2] = s2i * lambda * il2;
    (coeff, konst)
}

/// Max absolute entry of the 4×4 identity
/// `{L(λ)⊗1, 1⊗L(μ)} - [r(λ-μ), L(λ)⊗1 + 1⊗L(μ)]`.
pub fn rmatrix_residual(
    spec: &FamilySpec,
    x: &PhasePoint,
    lambda: f64,
    mu: f64,
) -> Result<f64, LaxError> {
    if lambda == mu {
        return Err(LaxError::NoLaxPair("r-matrix pole at lambda == mu".into()));
    }
    let (m, g) = match x {
        PhasePoint::E3 { m, g } => (m, g),
        _ => return Err(LaxError::KindMismatch),
    };
    let z = z_coordinates(spec, m, g);
    let table = z_bracket_table(&z);
    let lam = C::new(lambda, 0.0);
    let muu = C::new(mu, 0.0);
    let (cl, kl) = l_entry_coeffs(spec, lam);
    let (cm, km) = l_entry_coeffs(spec, muu);

    // bracket matrix B[(i,a),(j,b)] = {L(λ)_ij, L(μ)_ab}
    let mut bmat = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let mut v = C::default();
                    for c in 0..6 {
                        for d in 0..6 {
                            let w = cl[2 * i + j][c] * cm[2 * a + b][d];
                            if w != C::default() {
                                v += w * table[c][d];
                            }
                        }
                    }
                    bmat[(2 * i + a, 2 * j + b)] = v;
                }
            }
        }
    }

    // L(λ)⊗1 + 1⊗L(μ)
    let lv = |coeff: &[[C; 6]; 4], konst: &[C; 4], e: usize| -> C {
        konst[e] + (0..6).map(|c| coeff[e][c] * z[c]).sum::<C>()
    };
    let mut lsum = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for a in 0..2 {
                lsum[(2 * i + a, 2 * j + a)] += lv(&cl, &kl, 2 * i + j);
            }
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..2 {
                lsum[(2 * i + a, 2 * i + b)] += lv(&cm, &km, 2 * a + b);
            }
        }
    }

    // r(λ-μ) = -P/(λ-μ)
    let mut p = CMat::zeros(4, 4);
    p[(0, 0)] = C::new(1.0, 0.0);
    p[(1, 2)] = C::new(1.0, 0.0);
    p[(2, 1)] = C::new(1.0, 0.0);
    p[(3, 3)] = C::new(1.0, 0.0);
    let r = p * C::new(-1.0 / (lambda - mu), 0.0);

    let resid = bmat - (&r * &lsum - &lsum * &r);
    Ok(resid.iter().map(|v| v.norm()).fold(0.0, f64::max))
}
