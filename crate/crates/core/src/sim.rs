//! Stationary Boolean models of balls: sampling, membership and Monte-Carlo
//! probability oracles.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{BallModel, RadiusLaw};
use crate::geometry::{cube_vertex, VertexSet};
use crate::lattice::{ClassTable, ConfigMask};
use crate::rng::{stream, Domain};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: [f64; 3],
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, x: [f64; 3]) -> bool {
        dist2(self.center, x) <= self.radius * self.radius
    }
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Draws `Poisson(mean)`; `rand_distr` rejects a zero mean.
pub(crate) fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

pub(crate) fn draw_radius(rng: &mut ChaCha8Rng, law: &RadiusLaw<f64>) -> f64 {
    match *law {
        RadiusLaw::Constant(r) => r,
        RadiusLaw::Uniform { min, max } => rng.random_range(min..=max),
    }
}

/// Uniform grid of cells with side at least the largest radius, storing
/// ball indices by the cell of their centre (compressed rows).
#[derive(Clone, Debug)]
struct SpatialHash {
    origin: f64,
    cell: f64,
    n: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl SpatialHash {
    fn build(balls: &[Ball], origin: f64, extent: f64, cell: f64) -> Self {
        let n = ((extent / cell).ceil() as usize).max(1);
        let mut hash = SpatialHash {
            origin,
            cell,
            n,
            start: vec![0; n * n * n + 1],
            items: vec![0; balls.len()],
        };
        let keys: Vec<usize> = balls.iter().map(|b| hash.key(b.center)).collect();
        for &k in &keys {
            hash.start[k + 1] += 1;
        }
        for i in 0..n * n * n {
            hash.start[i + 1] += hash.start[i];
        }
        let mut fill = hash.start.clone();
        for (i, &k) in keys.iter().enumerate() {
            hash.items[fill[k] as usize] = i as u32;
            fill[k] += 1;
        }
        hash
    }

    fn coord(&self, x: f64) -> usize {
        let c = ((x - self.origin) / self.cell).floor();
        (c.max(0.0) as usize).min(self.n - 1)
    }

    fn key(&self, p: [f64; 3]) -> usize {
        (self.coord(p[2]) * self.n + self.coord(p[1])) * self.n + self.coord(p[0])
    }
}

/// One realization of `Z` observed in `[0, L]³`. Centres are sampled in the
/// box dilated by the largest radius, so every ball meeting the window is
/// present.
#[derive(Clone, Debug)]
pub struct Realization {
    balls: Vec<Ball>,
    side: f64,
    margin: f64,
    hash: SpatialHash,
}

impl Realization {
    /// Wraps explicit balls; `margin` must bound every radius.
    pub fn new(balls: Vec<Ball>, side: f64, margin: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) || !(margin > 0.0 && margin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window side {side} and margin {margin} must be positive"
            )));
        }
        if let Some(b) = balls.iter().find(|b| !(b.radius > 0.0 && b.radius <= margin)) {
            return Err(Error::InvalidParameter(format!(
                "ball radius {} outside (0, {margin}]",
                b.radius
            )));
        }
        let hash = SpatialHash::build(&balls, -margin, side + 2.0 * margin, margin);
        Ok(Realization {
            balls,
            side,
            margin,
            hash,
        })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Whether `x` lies in `Z`, scanning the 27 cells around `x`.
    pub fn contains(&self, x: [f64; 3]) -> bool {
        let h = &self.hash;
        let c = [h.coord(x[0]), h.coord(x[1]), h.coord(x[2])];
        let range = |i: usize| i.saturating_sub(1)..=(i + 1).min(h.n - 1);
        for z in range(c[2]) {
            for y in range(c[1]) {
                let row = (z * h.n + y) * h.n;
                let (x0, x1) = (c[0].saturating_sub(1), (c[0] + 1).min(h.n - 1));
                let lo = h.start[row + x0] as usize;
                let hi = h.start[row + x1 + 1] as usize;
                if h.items[lo..hi].iter().any(|&i| self.balls[i as usize].contains(x)) {
                    return true;
                }
            }
        }
        false
    }

    /// Reference scan over all balls.
    pub fn contains_naive(&self, x: [f64; 3]) -> bool {
        self.balls.iter().any(|b| b.contains(x))
    }
}

/// Samples `Z ∩ [0, L]³` with Poisson many centres in `[−r_max, L + r_max]³`.
pub fn sample_realization(model: &BallModel<f64>, side: f64, seed: u64) -> Result<Realization> {
    let margin = model.radius.max_radius();
    let extent = side + 2.0 * margin;
    if !(side > 0.0 && side.is_finite()) {
        return Err(Error::InvalidParameter(format!("window side {side} must be positive")));
    }
    let mut rng = stream(seed, Domain::Realization, 0);
    let count = poisson(&mut rng, model.gamma * extent.powi(3));
    let balls = (0..count)
        .map(|_| {
            let center = [(); 3].map(|_| rng.random::<f64>() * extent - margin);
            Ball {
                center,
                radius: draw_radius(&mut rng, &model.radius),
            }
        })
        .collect();
    Realization::new(balls, side, margin)
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl McEstimate {
    fn binomial(hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        McEstimate {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }
}

const BLOCK: u64 = 4096;

/// Counts of the 256 configurations of `a·{0,1}³` over independent local
/// realizations of `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskFrequencies {
    pub counts: [u64; 256],
    pub replications: u64,
}

impl MaskFrequencies {
    pub fn mask(&self, mask: ConfigMask) -> McEstimate {
        McEstimate::binomial(self.counts[mask.0 as usize], self.replications)
    }

    /// Hit-and-miss event of the representative configuration of `class`.
    pub fn class(&self, class: usize) -> McEstimate {
        self.mask(ClassTable::shared().representative(class))
    }

    /// `P(aS ⊆ Zᶜ)`: total frequency of masks whose black set avoids `S`.
    pub fn miss(&self, white: VertexSet) -> McEstimate {
        let hits = (0..256)
            .filter(|&m| m as u8 & white.bits() == 0)
            .map(|m| self.counts[m])
            .sum();
        McEstimate::binomial(hits, self.replications)
    }
}

/// Samples a fresh Poisson neighbourhood per replication: balls that can
/// reach the cube `a·[0,1]³` have centres within `r_max + a√3/2` of its
/// midpoint, so only that ball of space is populated.
pub fn mask_frequencies(model: &BallModel<f64>, a: f64, replications: u64, seed: u64) -> Result<MaskFrequencies> {
    if replications == 0 || !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need replications ≥ 1 and a > 0, got {replications} and {a}"
        )));
    }
    let reach = model.radius.max_radius() + a * 3f64.sqrt() / 2.0;
    let mean = model.gamma * 4.0 / 3.0 * std::f64::consts::PI * reach.powi(3);
    let mid = a / 2.0;
    let points: [[f64; 3]; 8] = std::array::from_fn(|i| cube_vertex(i).map(|c| c as f64 * a));

    let blocks = replications.div_ceil(BLOCK);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = stream(seed, Domain::HitMiss, block);
            let n = BLOCK.min(replications - block * BLOCK);
            let mut counts = [0u64; 256];
            let mut balls = Vec::new();
            for _ in 0..n {
                balls.clear();
                for _ in 0..poisson(&mut rng, mean) {
                    let offset = loop {
                        let p = [(); 3].map(|_| rng.random_range(-1.0..1.0));
                        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= 1.0 {
                            break p;
                        }
                    };
                    balls.push(Ball {
                        center: offset.map(|c| mid + reach * c),
                        radius: draw_radius(&mut rng, &model.radius),
                    });
                }
                let mut mask = 0u8;
                for (i, &p) in points.iter().enumerate() {
                    if balls.iter().any(|b| b.contains(p)) {
                        mask |= 1 << i;
                    }
                }
                counts[mask as usize] += 1;
            }
            counts
        })
        .reduce(
            || [0u64; 256],
            |mut acc, c| {
                for (x, y) in acc.iter_mut().zip(c) {
                    *x += y;
                }
                acc
            },
        );
    Ok(MaskFrequencies { counts, replications })
}

/// Monte-Carlo estimate of `P(aB_j ⊆ Z, aW_j ⊆ Zᶜ)` for the representative
/// configuration of `class`.
pub fn hit_miss_mc(class: usize, model: &BallModel<f64>, a: f64, replications: u64, seed: u64) -> Result<McEstimate> {
    if !(1..=crate::lattice::NUM_CLASSES).contains(&class) {
        return Err(Error::InvalidParameter(format!("class {class} outside 1..=22")));
    }
    Ok(mask_frequencies(model, a, replications, seed)?.class(class))
}

/// `P(aS ⊆ Zᶜ) = exp(−γ E V_3(rB³ ⊕ aŠ))`, with the mean volume of the union
/// of balls around `−aS` estimated by hit-or-miss integration over its
/// bounding box. Independent of the process sampler.
pub fn miss_probability_oracle(
    white: VertexSet,
    model: &BallModel<f64>,
    a: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 || !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need samples ≥ 1 and a > 0, got {samples} and {a}"
        )));
    }
    let centers: Vec<[f64; 3]> = white.points().iter().map(|p| p.map(|c| -a * c as f64)).collect();
    let lo = [0, 1, 2].map(|k| centers.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min));
    let hi = [0, 1, 2].map(|k| centers.iter().map(|c| c[k]).fold(f64::NEG_INFINITY, f64::max));

    let blocks = samples.div_ceil(BLOCK);
    let (sum, sum2) = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = stream(seed, Domain::MissOracle, block);
            let n = BLOCK.min(samples - block * BLOCK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let r = draw_radius(&mut rng, &model.radius);
                let side = [0, 1, 2].map(|k| hi[k] - lo[k] + 2.0 * r);
                let x = [0, 1, 2].map(|k| lo[k] - r + side[k] * rng.random::<f64>());
                if centers.iter().any(|&c| dist2(c, x) <= r * r) {
                    let v = side[0] * side[1] * side[2];
                    s += v;
                    s2 += v * v;
                }
            }
            (s, s2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    let volume_se = (var / n).sqrt();
    let p = (-model.gamma * mean).exp();
    Ok(McEstimate {
        estimate: p,
        std_error: p * model.gamma * volume_se,
    })
}
