use super::Point;
use crate::scalar::Scalar;

/// Angular measure of an edge's normal cone, measured in the plane
/// perpendicular to the edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeAngle {
    /// The polytope is the segment itself: the cone is the full plane, `2π`.
    Segment,
    /// Edge of a planar polygon: a half plane, `π`.
    Flat,
    /// Edge shared by two facets with these (unnormalised) outward normals.
    Dihedral { n1: Point, n2: Point },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: [Point; 2],
    pub len2: i64,
    pub angle: EdgeAngle,
}

/// A 2-face (or the polygon itself for a planar hull).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Outward normal for 3-dimensional hulls; an arbitrary plane normal for
    /// planar ones. Not normalised.
    pub normal: Point,
    /// Vertices in cyclic order, counter-clockwise about `normal`.
    pub cycle: Vec<Point>,
    /// `Σ ⟨v_i × v_{i+1}, normal⟩ = 2 · area · |normal|`, nonnegative.
    pub shoelace: i64,
}

impl Facet {
    pub fn area<T: Scalar>(&self) -> T {
        T::from_int(self.shoelace) / (T::lit(2.0) * T::from_int(dot(self.normal, self.normal)).sqrt())
    }
}

/// Convex hull of a small integer point set, with all faces of dimension ≤ 2.
#[derive(Clone, Debug)]
pub struct SmallPolytope {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub facets: Vec<Facet>,
    /// Six times the volume; exact. Zero unless `dim == 3`.
    pub six_volume: i64,
}

impl SmallPolytope {
    pub fn volume<T: Scalar>(&self) -> T {
        T::from_int(self.six_volume) / T::lit(6.0)
    }

    pub fn edge_length<T: Scalar>(e: &Edge) -> T {
        T::from_int(e.len2).sqrt()
    }

    pub fn edge_angle<T: Scalar>(e: &Edge) -> T {
        match e.angle {
            EdgeAngle::Segment => T::TAU(),
            EdgeAngle::Flat => T::PI(),
            EdgeAngle::Dihedral { n1, n2 } => {
                let c = T::from_int(dot(n1, n2))
                    / (T::from_int(dot(n1, n1)) * T::from_int(dot(n2, n2))).sqrt();
                c.max(-T::one()).min(T::one()).acos()
            }
        }
    }

    /// `V_1 = (1/2π) Σ ℓ(e) α(e)`.
    pub fn v1<T: Scalar>(&self) -> T {
        self.edges
            .iter()
            .map(|e| Self::edge_length::<T>(e) * Self::edge_angle::<T>(e))
            .sum::<T>()
            / T::TAU()
    }

    /// Half the surface area for solids, the area for polygons.
    pub fn v2<T: Scalar>(&self) -> T {
        let total: T = self.facets.iter().map(Facet::area::<T>).sum();
        match self.dim {
            3 => total / T::lit(2.0),
            2 => total,
            _ => T::zero(),
        }
    }

    pub fn v3<T: Scalar>(&self) -> T {
        self.volume()
    }

    /// `V_1^(3) = (1/12) Σ (α/4π) ℓ³` over the 1-faces.
    pub fn power_volume_v13<T: Scalar>(&self) -> T {
        let four_pi = T::lit(4.0) * T::PI();
        self.edges
            .iter()
            .map(|e| {
                let l = Self::edge_length::<T>(e);
                Self::edge_angle::<T>(e) / four_pi * l * l * l
            })
            .sum::<T>()
            / T::lit(12.0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        match self.dim {
            3 => self.vertices.len() as i64 - self.edges.len() as i64 + self.facets.len() as i64,
            2 => self.vertices.len() as i64 - self.edges.len() as i64 + 1,
            1 => 1,
            _ => 1,
        }
    }
}

#[inline]
fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross(a: Point, b: Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn dot(a: Point, b: Point) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn reduce(n: Point) -> Point {
    let g = gcd(gcd(n[0], n[1]), n[2]);
    n.map(|c| c / g)
}

fn ordered_edge(a: Point, b: Point) -> [Point; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Hull of an arbitrary small integer point set (duplicates allowed).
///
/// Facets come from brute force over point triples: a triple spans a facet
/// plane iff every point lies on one closed side of it.
///
/// # Panics
/// On an empty input.
pub fn convex_hull(points: &[Point]) -> SmallPolytope {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();

    let p0 = pts[0];
    let Some(p1) = pts.iter().copied().find(|&p| p != p0) else {
        return SmallPolytope {
            dim: 0,
            vertices: pts,
            edges: Vec::new(),
            facets: Vec::new(),
            six_volume: 0,
        };
    };
    let d1 = sub(p1, p0);
    let Some(p2) = pts
        .iter()
        .copied()
        .find(|&p| cross(d1, sub(p, p0)) != [0, 0, 0])
    else {
        return segment_hull(pts);
    };
    let normal = cross(d1, sub(p2, p0));
    if pts.iter().all(|&p| dot(normal, sub(p, p0)) == 0) {
        return planar_hull(pts, normal);
    }
    solid_hull(pts)
}

fn segment_hull(pts: Vec<Point>) -> SmallPolytope {
    let mut best = (0, pts[0], pts[0]);
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = sub(a, b);
            let l2 = dot(d, d);
            if l2 > best.0 {
                best = (l2, a, b);
            }
        }
    }
    let (len2, a, b) = best;
    SmallPolytope {
        dim: 1,
        vertices: vec![a.min(b), a.max(b)],
        edges: vec![Edge {
            ends: ordered_edge(a, b),
            len2,
            angle: EdgeAngle::Segment,
        }],
        facets: Vec::new(),
        six_volume: 0,
    }
}

/// Convex polygon through coplanar `pts` with plane normal `normal`.
/// Returns the boundary cycle (counter-clockwise about `normal`) and its
/// nonnegative shoelace sum.
fn polygon(pts: &[Point], normal: Point) -> (Vec<Point>, i64) {
    let mut adjacency: Vec<(Point, Point)> = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let d = sub(q, p);
            let mut pos = false;
            let mut neg = false;
            let mut inside = true;
            for &r in pts {
                let s = dot(normal, cross(d, sub(r, p)));
                if s > 0 {
                    pos = true;
                } else if s < 0 {
                    neg = true;
                } else {
                    let t = dot(sub(r, p), d);
                    if t < 0 || t > dot(d, d) {
                        inside = false;
                    }
                }
            }
            if !(pos && neg) && inside {
                adjacency.push((p, q));
            }
        }
    }

    let mut cycle = vec![adjacency[0].0, adjacency[0].1];
    let mut used = vec![false; adjacency.len()];
    used[0] = true;
    while cycle.len() < adjacency.len() {
        let last = *cycle.last().unwrap();
        let (k, next) = adjacency
            .iter()
            .enumerate()
            .find_map(|(k, &(a, b))| {
                if used[k] {
                    None
                } else if a == last {
                    Some((k, b))
                } else if b == last {
                    Some((k, a))
                } else {
                    None
                }
            })
            .expect("polygon boundary is a single cycle");
        used[k] = true;
        cycle.push(next);
    }

    let mut shoelace: i64 = (0..cycle.len())
        .map(|i| dot(cross(cycle[i], cycle[(i + 1) % cycle.len()]), normal))
        .sum();
    if shoelace < 0 {
        cycle.reverse();
        shoelace = -shoelace;
    }
    (cycle, shoelace)
}

fn planar_hull(pts: Vec<Point>, normal: Point) -> SmallPolytope {
    let normal = reduce(normal);
    let (cycle, shoelace) = polygon(&pts, normal);
    let edges = (0..cycle.len())
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let d = sub(a, b);
            Edge {
                ends: ordered_edge(a, b),
                len2: dot(d, d),
                angle: EdgeAngle::Flat,
            }
        })
        .collect();
    let mut vertices = cycle.clone();
    vertices.sort_unstable();
    SmallPolytope {
        dim: 2,
        vertices,
        edges,
        facets: vec![Facet {
            normal,
            cycle,
            shoelace,
        }],
        six_volume: 0,
    }
}

fn solid_hull(pts: Vec<Point>) -> SmallPolytope {
    let n = pts.len();
    let mut planes: Vec<(Point, i64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let side = |p: Point| dot(nrm, sub(p, pts[i])).signum();
                let any_pos = pts.iter().any(|&p| side(p) > 0);
                let any_neg = pts.iter().any(|&p| side(p) < 0);
                let outward = match (any_pos, any_neg) {
                    (false, true) => nrm,
                    (true, false) => nrm.map(|c| -c),
                    _ => continue,
                };
                let outward = reduce(outward);
                let plane = (outward, dot(outward, pts[i]));
                if !planes.contains(&plane) {
                    planes.push(plane);
                }
            }
        }
    }

    let facets: Vec<Facet> = planes
        .into_iter()
        .map(|(normal, offset)| {
            let on: Vec<Point> = pts
                .iter()
                .copied()
                .filter(|&p| dot(normal, p) == offset)
                .collect();
            let (cycle, shoelace) = polygon(&on, normal);
            Facet {
                normal,
                cycle,
                shoelace,
            }
        })
        .collect();

    let mut edges: Vec<(Point, Point, Vec<Point>)> = Vec::new();
    for f in &facets {
        for i in 0..f.cycle.len() {
            let [a, b] = ordered_edge(f.cycle[i], f.cycle[(i + 1) % f.cycle.len()]);
            match edges.iter_mut().find(|(x, y, _)| *x == a && *y == b) {
                Some(entry) => entry.2.push(f.normal),
                None => edges.push((a, b, vec![f.normal])),
            }
        }
    }
    let edges: Vec<Edge> = edges
        .into_iter()
        .map(|(a, b, normals)| {
            assert_eq!(normals.len(), 2, "each hull edge bounds two facets");
            let d = sub(a, b);
            Edge {
                ends: [a, b],
                len2: dot(d, d),
                angle: EdgeAngle::Dihedral {
                    n1: normals[0],
                    n2: normals[1],
                },
            }
        })
        .collect();

    // Fan each counter-clockwise facet cycle from a fixed apex.
    let apex = pts[0];
    let six_volume: i64 = facets
        .iter()
        .map(|f| {
            let c = &f.cycle;
            (1..c.len() - 1)
                .map(|i| {
                    dot(
                        sub(c[0], apex),
                        cross(sub(c[i], apex), sub(c[i + 1], apex)),
                    )
                })
                .sum::<i64>()
        })
        .sum();

    let mut vertices: Vec<Point> = facets.iter().flat_map(|f| f.cycle.iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();

    SmallPolytope {
        dim: 3,
        vertices,
        edges,
        facets,
        six_volume,
    }
}
