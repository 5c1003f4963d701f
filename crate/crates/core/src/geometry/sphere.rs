//! Quadrature on the unit sphere by uniform refinement of the icosahedron.
//!
//! Each level splits every spherical triangle into four; the rule evaluates
//! the integrand at the normalised centroid and weights it by the exact
//! spherical area, so the weights sum to `4π` at every level. Estimates from
//! consecutive levels are Richardson-extrapolated assuming `O(h²)` error.

use rayon::prelude::*;

use super::VertexSet;
use crate::error::{Error, Result};

pub const QUADRATURE_REL_TOL: f64 = 1e-4;
const FIRST_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 9;

type V3 = [f64; 3];

fn normalize(v: V3) -> V3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn midpoint(a: V3, b: V3) -> V3 {
    normalize([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

/// Solid angle of the spherical triangle with unit vertices `a, b, c`.
fn spherical_area(a: V3, b: V3, c: V3) -> f64 {
    let num = dot(a, cross(b, c)).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

fn icosahedron() -> (Vec<V3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let verts = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .map(normalize)
    .to_vec();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

fn integrate_triangle<F: Fn(V3) -> f64>(f: &F, a: V3, b: V3, c: V3, depth: u32) -> f64 {
    if depth == 0 {
        let g = normalize([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]]);
        return f(g) * spherical_area(a, b, c);
    }
    let ab = midpoint(a, b);
    let bc = midpoint(b, c);
    let ca = midpoint(c, a);
    integrate_triangle(f, a, ab, ca, depth - 1)
        + integrate_triangle(f, ab, b, bc, depth - 1)
        + integrate_triangle(f, ca, bc, c, depth - 1)
        + integrate_triangle(f, ab, bc, ca, depth - 1)
}

/// Centroid-rule integral of `f` over the sphere with `20·4^level` cells.
/// Deterministic: per-face partial sums are added in face order.
pub fn integrate_sphere<F: Fn([f64; 3]) -> f64 + Sync>(f: F, level: u32) -> f64 {
    let (v, faces) = icosahedron();
    let parts: Vec<f64> = faces
        .par_iter()
        .map(|t| integrate_triangle(&f, v[t[0]], v[t[1]], v[t[2]], level))
        .collect();
    parts.iter().sum()
}

/// `∫_{S²} (−h(B ⊕ W̌, u))⁺ σ(du)` for disjoint nonempty vertex sets.
///
/// Since `h(B ⊕ W̌, u) = max_B ⟨b,u⟩ − min_W ⟨w,u⟩`, the integrand is the
/// width of the gap separating `B` below `W` in direction `u`.
pub fn support_deficit_integral(black: VertexSet, white: VertexSet) -> Result<f64> {
    let b: Vec<V3> = black.points().iter().map(|p| p.map(|c| c as f64)).collect();
    let w: Vec<V3> = white.points().iter().map(|p| p.map(|c| c as f64)).collect();
    let integrand = |u: V3| {
        let hb = b.iter().map(|&p| dot(p, u)).fold(f64::NEG_INFINITY, f64::max);
        let lw = w.iter().map(|&p| dot(p, u)).fold(f64::INFINITY, f64::min);
        (lw - hb).max(0.0)
    };
    let tolerance = |x: f64| QUADRATURE_REL_TOL * x.abs().max(1e-8);

    let mut coarse = integrate_sphere(integrand, FIRST_LEVEL);
    let mut previous: Option<f64> = None;
    for level in FIRST_LEVEL + 1..=MAX_LEVEL {
        let fine = integrate_sphere(integrand, level);
        if coarse == 0.0 && fine == 0.0 {
            return Ok(0.0);
        }
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        if let Some(prev) = previous {
            if (extrapolated - prev).abs() <= tolerance(extrapolated) {
                return Ok(extrapolated);
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
    let current = previous.unwrap_or(coarse);
    Err(Error::QuadratureNotConverged {
        previous: coarse,
        current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_sphere_area() {
        for level in 0..4 {
            assert_abs_diff_eq!(integrate_sphere(|_| 1.0, level), 4.0 * PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn polynomial_moments() {
        // ∫ z² dσ = 4π/3
        let i = integrate_sphere(|u| u[2] * u[2], 6);
        assert_abs_diff_eq!(i, 4.0 * PI / 3.0, epsilon = 1e-4);
        // odd functions vanish by the icosahedron's central symmetry
        assert_abs_diff_eq!(integrate_sphere(|u| u[0] * u[1] * u[1], 4), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn non_separable_pair_integrates_to_zero() {
        // black: two opposite corners; white: the remaining six
        let black = VertexSet::new(0b1000_0001).unwrap();
        let white = VertexSet::new(0b0111_1110).unwrap();
        assert_eq!(support_deficit_integral(black, white).unwrap(), 0.0);
    }

    #[test]
    fn opposite_faces() {
        let black = VertexSet::new(0b0000_1111).unwrap();
        let white = VertexSet::new(0b1111_0000).unwrap();
        let value = support_deficit_integral(black, white).unwrap();
        assert_abs_diff_eq!(value, PI * (2.0 * 3f64.sqrt() / 3.0 - 1.0), epsilon = 1e-4);
    }
}
