//! 2×2×2 lattice configurations and their motion-equivalence classes.
//!
//! A configuration is an 8-bit mask over the cube vertices `x_i`,
//! `i = x + 2y + 4z`; bit `i` set means `x_i` is foreground (black). Classes
//! are orbits of the white set under the 48 symmetries of the cube and are
//! numbered `1..=22` following the usual catalogue, class 22 being the
//! all-black configuration (empty white set).

use std::sync::OnceLock;

use crate::geometry::{cube_vertex, VertexSet};

/// Number of classes including the empty white set.
pub const NUM_CLASSES: usize = 22;
/// Classes with a nonempty white set.
pub const NUM_PROPER_CLASSES: usize = 21;
/// Class id of the all-black configuration.
pub const EMPTY_CLASS: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigMask(pub u8);

impl ConfigMask {
    pub const ALL_WHITE: ConfigMask = ConfigMask(0);
    pub const ALL_BLACK: ConfigMask = ConfigMask(0xff);

    pub fn black(self) -> Option<VertexSet> {
        VertexSet::new(self.0)
    }

    pub fn white(self) -> Option<VertexSet> {
        VertexSet::new(!self.0)
    }

    pub fn white_count(self) -> usize {
        8 - self.0.count_ones() as usize
    }
}

/// A vertex permutation: vertex `i` is sent to `perm[i]`.
pub type VertexPerm = [u8; 8];

/// The full symmetry group of the cube (rotations and reflections) acting on
/// vertex indices.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    elements: Vec<VertexPerm>,
}

impl SymmetryGroup {
    /// All signed permutations of the coordinate axes, acting on `{0,1}³`.
    pub fn build() -> Self {
        const AXES: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut elements = Vec::with_capacity(48);
        for axes in AXES {
            for flips in 0..8u8 {
                let mut perm = [0u8; 8];
                for (i, slot) in perm.iter_mut().enumerate() {
                    let c = cube_vertex(i);
                    let mut image = 0;
                    for (k, &axis) in axes.iter().enumerate() {
                        let bit = c[axis] as u8 ^ (flips >> k & 1);
                        image |= bit << k;
                    }
                    *slot = image;
                }
                elements.push(perm);
            }
        }
        SymmetryGroup { elements }
    }

    pub fn elements(&self) -> &[VertexPerm] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity() -> VertexPerm {
        [0, 1, 2, 3, 4, 5, 6, 7]
    }

    /// `(g ∘ h)(i) = g(h(i))`.
    pub fn compose(g: &VertexPerm, h: &VertexPerm) -> VertexPerm {
        let mut out = [0u8; 8];
        for i in 0..8 {
            out[i] = g[h[i] as usize];
        }
        out
    }

    pub fn apply(perm: &VertexPerm, mask: ConfigMask) -> ConfigMask {
        let mut out = 0u8;
        for i in 0..8 {
            if mask.0 >> i & 1 == 1 {
                out |= 1 << perm[i];
            }
        }
        ConfigMask(out)
    }

    /// All images of `mask` under the group, sorted and deduplicated.
    pub fn orbit(&self, mask: ConfigMask) -> Vec<ConfigMask> {
        let mut out: Vec<ConfigMask> = self.elements.iter().map(|g| Self::apply(g, mask)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Geometric signature of a class: white-point count, orbit size and the
/// intrinsic volumes `(V_1, V_2, V_3)` of the hull of the white set.
#[derive(Clone, Copy, Debug)]
struct Signature {
    white: usize,
    size: usize,
    v: [f64; 3],
}

/// Reference signatures of classes 1..=21, in catalogue order.
fn catalogue() -> [Signature; NUM_PROPER_CLASSES] {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let xi = r2.atan() / (2.0 * std::f64::consts::PI);
    let s = |white, size, v1: f64, v2: f64, v3: f64| Signature {
        white,
        size,
        v: [v1, v2, v3],
    };
    [
        s(8, 1, 3.0, 3.0, 1.0),
        s(7, 8, 9.0 / 4.0 + 3.0 * r2 * xi, 9.0 / 4.0 + r3 / 4.0, 5.0 / 6.0),
        s(6, 12, 2.0 + r2 / 2.0, 1.5 + r2 / 2.0, 0.5),
        s(6, 12, 1.5 + 6.0 * r2 * xi, 1.5 + r3 / 2.0, 2.0 / 3.0),
        s(6, 4, 1.5 + 6.0 * r2 * xi, 1.5 + r3 / 2.0, 2.0 / 3.0),
        s(5, 24, 1.5 + r2 / 2.0 + r3 / 6.0, 1.0 + r2 / 2.0, 1.0 / 3.0),
        s(5, 24, 1.25 + r2 / 2.0 + 3.0 * r2 * xi, 0.75 + r2 / 2.0 + r3 / 4.0, 1.0 / 3.0),
        s(5, 8, 0.75 + 9.0 * r2 * xi, 0.75 + 3.0 * r3 / 4.0, 0.5),
        s(4, 6, 2.0, 1.0, 0.0),
        s(4, 8, 0.75 + 1.5 * r2 - 3.0 * r2 * xi, 0.75 + r3 / 4.0, 1.0 / 6.0),
        s(4, 24, 1.0 + r2 / 2.0 + r3 / 3.0, 0.5 + r2 / 2.0, 1.0 / 6.0),
        s(4, 6, 1.0 + r2, r2, 0.0),
        s(4, 2, 12.0 * r2 * xi, r3, 1.0 / 3.0),
        s(4, 24, 0.75 + r2 / 2.0 + r3 / 6.0 + 3.0 * r2 * xi, 0.25 + r2 / 2.0 + r3 / 4.0, 1.0 / 6.0),
        s(3, 8, 1.5 * r2, r3 / 2.0, 0.0),
        s(3, 24, 0.5 + r2 / 2.0 + r3 / 2.0, r2 / 2.0, 0.0),
        s(3, 24, 1.0 + r2 / 2.0, 0.5, 0.0),
        s(2, 4, r3, 0.0, 0.0),
        s(2, 12, r2, 0.0, 0.0),
        s(2, 12, 1.0, 0.0, 0.0),
        s(1, 8, 0.0, 0.0, 0.0),
    ]
}

/// The 22 classes, their multiplicities and the inclusion–exclusion matrix.
#[derive(Clone, Debug)]
pub struct ClassTable {
    class_of: [u8; 256],
    representatives: [ConfigMask; NUM_CLASSES],
    multiplicities: [u32; NUM_CLASSES],
    m: [[i32; NUM_PROPER_CLASSES]; NUM_PROPER_CLASSES],
}

impl ClassTable {
    /// Builds the table from scratch: orbits under the cube group, labelled
    /// by matching hull signatures against the reference catalogue.
    ///
    /// # Panics
    /// If an orbit matches no catalogue row or more than one.
    pub fn build() -> Self {
        let group = SymmetryGroup::build();
        let reference = catalogue();
        let mut class_of = [0u8; 256];
        let mut representatives = [ConfigMask::ALL_BLACK; NUM_CLASSES];
        let mut multiplicities = [0u32; NUM_CLASSES];

        for mask in 0..=255u8 {
            if class_of[mask as usize] != 0 {
                continue;
            }
            let orbit = group.orbit(ConfigMask(mask));
            let class = match ConfigMask(mask).white() {
                None => EMPTY_CLASS,
                Some(white) => {
                    let hull = white.hull();
                    let v = [hull.v1::<f64>(), hull.v2::<f64>(), hull.v3::<f64>()];
                    let hits: Vec<usize> = reference
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| {
                            s.white == white.len()
                                && s.size == orbit.len()
                                && s.v.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-9)
                        })
                        .map(|(j, _)| j + 1)
                        .collect();
                    assert_eq!(hits.len(), 1, "orbit of mask {mask} matched classes {hits:?}");
                    hits[0]
                }
            };
            // orbit is sorted, so the first element is the smallest mask
            representatives[class - 1] = orbit[0];
            multiplicities[class - 1] = orbit.len() as u32;
            for m in &orbit {
                class_of[m.0 as usize] = class as u8;
            }
        }
        assert!(multiplicities.iter().all(|&d| d > 0), "every class is inhabited");

        let mut table = ClassTable {
            class_of,
            representatives,
            multiplicities,
            m: [[0; NUM_PROPER_CLASSES]; NUM_PROPER_CLASSES],
        };
        for i in 0..NUM_PROPER_CLASSES {
            let row = table.inclusion_exclusion_row(table.representatives[i]);
            table.m[i].copy_from_slice(&row[..NUM_PROPER_CLASSES]);
        }
        table
    }

    /// Process-wide instance, built on first use.
    pub fn shared() -> &'static ClassTable {
        static TABLE: OnceLock<ClassTable> = OnceLock::new();
        TABLE.get_or_init(ClassTable::build)
    }

    /// Class id `1..=22` of a configuration.
    pub fn classify(&self, mask: ConfigMask) -> usize {
        self.class_of[mask.0 as usize] as usize
    }

    /// Lookup table mask → class id, for the counting kernels.
    pub fn lookup(&self) -> &[u8; 256] {
        &self.class_of
    }

    pub fn representative(&self, class: usize) -> ConfigMask {
        self.representatives[class - 1]
    }

    /// `|η_j|` for `j = 1..=22`; the last entry (empty white set) is 1.
    pub fn class_sizes(&self) -> &[u32; NUM_CLASSES] {
        &self.multiplicities
    }

    /// Diagonal of `D`: `|η_j|` for `j = 1..=21`.
    pub fn multiplicities(&self) -> [u32; NUM_PROPER_CLASSES] {
        let mut d = [0; NUM_PROPER_CLASSES];
        d.copy_from_slice(&self.multiplicities[..NUM_PROPER_CLASSES]);
        d
    }

    pub fn members(&self, class: usize) -> Vec<ConfigMask> {
        (0..=255u8)
            .map(ConfigMask)
            .filter(|&m| self.classify(m) == class)
            .collect()
    }

    /// `M`, 21×21: `M_ij = Σ_{S ⊆ B_i} (−1)^{|S|} 1{W_i ∪ S ∈ η_j}`.
    pub fn m_matrix(&self) -> &[[i32; NUM_PROPER_CLASSES]; NUM_PROPER_CLASSES] {
        &self.m
    }

    /// Inclusion–exclusion coefficients of one configuration over all 22
    /// classes: entry `j − 1` is `Σ_{S ⊆ B} (−1)^{|S|} 1{W ∪ S ∈ η_j}`. For the
    /// all-black configuration the `S = ∅` term lands on class 22.
    pub fn inclusion_exclusion_row(&self, mask: ConfigMask) -> [i32; NUM_CLASSES] {
        let black = mask.0;
        let white = !mask.0;
        let mut row = [0i32; NUM_CLASSES];
        // enumerate subsets S of the black set
        let mut s = black;
        loop {
            let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
            let union_white = white | s;
            // a white set W' is the configuration with black set !W'
            let class = self.classify(ConfigMask(!union_white));
            row[class - 1] += sign;
            if s == 0 {
                break;
            }
            s = (s - 1) & black;
        }
        row
    }
}
