//! Convex geometry of subsets of the unit-cube vertex set.
//!
//! Hulls are built combinatorially with exact integer predicates; the
//! resulting [`SmallPolytope`] evaluates its measures in any [`Scalar`].

mod hull;
mod sphere;

pub use hull::{convex_hull, Edge, EdgeAngle, Facet, SmallPolytope};
pub use sphere::{integrate_sphere, support_deficit_integral, QUADRATURE_REL_TOL};

use crate::scalar::Scalar;

pub type Point = [i64; 3];

/// Lattice coordinates of cube vertex `i`, with `i = x + 2y + 4z`.
#[inline]
pub const fn cube_vertex(i: usize) -> Point {
    [(i & 1) as i64, ((i >> 1) & 1) as i64, ((i >> 2) & 1) as i64]
}

/// A nonempty subset of the eight vertices of `{0,1}³`, stored as a bit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u8);

impl VertexSet {
    pub const FULL: VertexSet = VertexSet(0xff);

    /// Returns `None` for the empty set.
    pub fn new(bits: u8) -> Option<Self> {
        (bits != 0).then_some(VertexSet(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..8).filter(move |&i| self.contains(i))
    }

    pub fn points(self) -> Vec<Point> {
        self.indices().map(cube_vertex).collect()
    }

    /// Vertices scaled by an integer factor.
    pub fn scaled_points(self, s: i64) -> Vec<Point> {
        self.indices()
            .map(|i| cube_vertex(i).map(|c| c * s))
            .collect()
    }

    pub fn hull(self) -> SmallPolytope {
        convex_hull(&self.points())
    }
}

/// `(V_1, V_2, V_3)` of the polytope.
pub fn intrinsic_volumes<T: Scalar>(p: &SmallPolytope) -> (T, T, T) {
    (p.v1(), p.v2(), p.v3())
}

/// Intrinsic power volume `V_1^(3)` of a finite point set, via its hull's
/// 1-faces: `(1/12) Σ γ(e) ℓ(e)³` with exterior angle `γ = α / 4π`.
pub fn power_volume_v13<T: Scalar>(points: &[Point]) -> T {
    convex_hull(points).power_volume_v13()
}

/// `h(F, u) = max_{p ∈ F} ⟨p, u⟩`.
pub fn support_function<T: Scalar>(points: &[Point], u: [T; 3]) -> T {
    points
        .iter()
        .map(|p| {
            T::from_int(p[0]) * u[0] + T::from_int(p[1]) * u[1] + T::from_int(p[2]) * u[2]
        })
        .fold(T::neg_infinity(), T::max)
}
