//! Digitization on the lattice `aℤ³ ∩ [0, L]³`, 2×2×2 configuration counts
//! and the local estimators built from them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{BallModel, ExpansionTables};
use crate::lattice::{ClassTable, ConfigMask, NUM_CLASSES};
use crate::rng::{child_seed, Domain};
use crate::sim::{sample_realization, Realization};
use crate::weights::WeightVector;

/// Occupancy of the lattice points `(ia, ja, ka)`, packed along `x` into
/// 64-bit words. Bits past `nx` in the last word of a row are always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    dims: [usize; 3],
    a: f64,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl VoxelGrid {
    pub fn zeros(dims: [usize; 3], a: f64) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter(format!("grid dims {dims:?} must be ≥ 2 per axis")));
        }
        let words_per_row = dims[0].div_ceil(64);
        Ok(VoxelGrid {
            dims,
            a,
            words_per_row,
            bits: vec![0; words_per_row * dims[1] * dims[2]],
        })
    }

    pub fn ones(dims: [usize; 3], a: f64) -> Result<Self> {
        let mut g = Self::zeros(dims, a)?;
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                g.fill_row(y, z, 0, dims[0]);
            }
        }
        Ok(g)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn width(&self) -> f64 {
        self.a
    }

    fn row_index(&self, y: usize, z: usize) -> usize {
        (z * self.dims[1] + y) * self.words_per_row
    }

    fn row(&self, y: usize, z: usize) -> &[u64] {
        let start = self.row_index(y, z);
        &self.bits[start..start + self.words_per_row]
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.row(y, z)[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        assert!(x < self.dims[0] && y < self.dims[1] && z < self.dims[2]);
        let i = self.row_index(y, z) + x / 64;
        if value {
            self.bits[i] |= 1 << (x % 64);
        } else {
            self.bits[i] &= !(1 << (x % 64));
        }
    }

    /// Sets bits `lo..hi` of row `(y, z)`.
    fn fill_row(&mut self, y: usize, z: usize, lo: usize, hi: usize) {
        let start = self.row_index(y, z);
        fill_bits(&mut self.bits[start..start + self.words_per_row], lo, hi);
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Applies a permutation-with-reflection of the axes to a cubic grid:
    /// point `p` moves to `q` with `q[perm[k]] = p[k]` or its mirror.
    pub fn transformed(&self, perm: [usize; 3], flip: [bool; 3]) -> VoxelGrid {
        let mut dims = [0; 3];
        for k in 0..3 {
            dims[perm[k]] = self.dims[k];
        }
        let mut out = VoxelGrid::zeros(dims, self.a).expect("same sizes");
        for z in 0..self.dims[2] {
            for y in 0..self.dims[1] {
                for x in 0..self.dims[0] {
                    if self.get(x, y, z) {
                        let p = [x, y, z];
                        let mut q = [0; 3];
                        for k in 0..3 {
                            q[perm[k]] = if flip[k] { self.dims[k] - 1 - p[k] } else { p[k] };
                        }
                        out.set(q[0], q[1], q[2], true);
                    }
                }
            }
        }
        out
    }
}

fn fill_bits(row: &mut [u64], lo: usize, hi: usize) {
    if lo >= hi {
        return;
    }
    let (w0, w1) = (lo / 64, (hi - 1) / 64);
    let head = !0u64 << (lo % 64);
    let tail = !0u64 >> (63 - (hi - 1) % 64);
    if w0 == w1 {
        row[w0] |= head & tail;
    } else {
        row[w0] |= head;
        for w in &mut row[w0 + 1..w1] {
            *w = !0;
        }
        row[w1] |= tail;
    }
}

/// Number of grid steps `L / a`, rejecting widths that do not divide `L`.
pub fn grid_steps(side: f64, a: f64) -> Result<usize> {
    if !(a > 0.0 && a.is_finite() && side > 0.0) {
        return Err(Error::InvalidParameter(format!("grid width {a} must be positive")));
    }
    let n = side / a;
    let rounded = n.round();
    if rounded < 1.0 || (n - rounded).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::NonIntegerGrid { side, a });
    }
    Ok(rounded as usize)
}

/// Rasterizes `Z ∩ aℤ³ ∩ [0, L]³`: bit `(i, j, k)` is set iff the point
/// `(ia, ja, ka)` lies in `Z`, using the same closed-ball test as
/// [`Realization::contains`].
pub fn digitize(real: &Realization, a: f64) -> Result<VoxelGrid> {
    let n = grid_steps(real.side(), a)? + 1;
    let mut grid = VoxelGrid::zeros([n; 3], a)?;
    let wpr = grid.words_per_row;
    let plane_len = wpr * n;
    let balls = real.balls();

    grid.bits
        .par_chunks_mut(plane_len)
        .enumerate()
        .for_each(|(k, plane)| {
            let z = k as f64 * a;
            for ball in balls {
                let dz = ball.center[2] - z;
                let r2 = ball.radius * ball.radius;
                if dz * dz > r2 {
                    continue;
                }
                let [cx, cy, _] = ball.center;
                let rz = (r2 - dz * dz).sqrt();
                let j_lo = ((cy - rz) / a).ceil().max(0.0) as usize;
                let j_hi = (((cy + rz) / a).floor()).min((n - 1) as f64);
                if j_hi < 0.0 {
                    continue;
                }
                for j in j_lo..=j_hi as usize {
                    let y = j as f64 * a;
                    let ryz2 = r2 - dz * dz - (cy - y) * (cy - y);
                    if ryz2 < 0.0 {
                        continue;
                    }
                    let inside = |i: i64| {
                        let dx = cx - i as f64 * a;
                        dx * dx + (cy - y) * (cy - y) + dz * dz <= r2
                    };
                    let h = ryz2.sqrt();
                    let mut lo = ((cx - h) / a).ceil() as i64;
                    let mut hi = ((cx + h) / a).floor() as i64;
                    // settle rounding so the interval matches the exact test
                    while inside(lo - 1) {
                        lo -= 1;
                    }
                    while lo <= hi && !inside(lo) {
                        lo += 1;
                    }
                    while inside(hi + 1) {
                        hi += 1;
                    }
                    while hi >= lo && !inside(hi) {
                        hi -= 1;
                    }
                    let lo = lo.max(0);
                    let hi = hi.min(n as i64 - 1);
                    if lo <= hi {
                        let row = &mut plane[j * wpr..(j + 1) * wpr];
                        fill_bits(row, lo as usize, hi as usize + 1);
                    }
                }
            }
        });
    Ok(grid)
}

/// Counts of the 256 window configurations, aggregated by class
/// (class 22 is the all-black window).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigHistogram {
    mask_counts: [u64; 256],
    class_counts: [u64; NUM_CLASSES],
    windows: u64,
}

impl ConfigHistogram {
    pub fn from_mask_counts(mask_counts: [u64; 256]) -> Self {
        let table = ClassTable::shared();
        let mut class_counts = [0; NUM_CLASSES];
        for (m, &c) in mask_counts.iter().enumerate() {
            class_counts[table.classify(ConfigMask(m as u8)) - 1] += c;
        }
        ConfigHistogram {
            mask_counts,
            class_counts,
            windows: mask_counts.iter().sum(),
        }
    }

    pub fn mask_counts(&self) -> &[u64; 256] {
        &self.mask_counts
    }

    pub fn class_counts(&self) -> &[u64; NUM_CLASSES] {
        &self.class_counts
    }

    /// Count of class `j`, `1 ≤ j ≤ 22`.
    pub fn class_count(&self, class: usize) -> u64 {
        self.class_counts[class - 1]
    }

    /// `N(A)`, the number of windows inside the observation window.
    pub fn windows(&self) -> u64 {
        self.windows
    }
}

fn add_counts(mut acc: [u64; 256], other: [u64; 256]) -> [u64; 256] {
    for (x, y) in acc.iter_mut().zip(other) {
        *x += y;
    }
    acc
}

/// Counts windows `x ∈ 0..nx−1` spanned by rows `(y, z)`, `(y+1, z)`,
/// `(y, z+1)`, `(y+1, z+1)`.
fn count_row_quad(rows: [&[u64]; 4], windows: usize, banks: &mut [[u64; 256]; 4]) {
    let words = windows.div_ceil(64);
    for w in 0..words {
        let len = (windows - 64 * w).min(64);
        let cur = rows.map(|r| r[w]);
        let next = rows.map(|r| r.get(w + 1).map_or(0, |v| v & 1));
        // bit i of a mask is vertex i = x + 2y + 4z; rows hold y + 2z
        let all_zero = cur.iter().chain(&next).all(|&v| v == 0);
        if all_zero {
            banks[0][0] += len as u64;
            continue;
        }
        // windows 0..len read bits 0..=len of each row
        let all_one = if len == 64 {
            cur.iter().all(|&v| v == !0) && next.iter().all(|&v| v == 1)
        } else {
            let span = if len == 63 { !0 } else { (1u64 << (len + 1)) - 1 };
            cur.iter().all(|&v| v & span == span)
        };
        if all_one {
            banks[0][255] += len as u64;
            continue;
        }
        let [mut s0, mut s1, mut s2, mut s3] = cur;
        let col = |s0: u64, s1: u64, s2: u64, s3: u64| {
            ((s0 & 1) | (s1 & 1) << 2 | (s2 & 1) << 4 | (s3 & 1) << 6) as u8
        };
        let mut mask = col(s0, s1, s2, s3);
        for t in 0..len {
            s0 >>= 1;
            s1 >>= 1;
            s2 >>= 1;
            s3 >>= 1;
            let c = if t == 63 {
                col(next[0], next[1], next[2], next[3])
            } else {
                col(s0, s1, s2, s3)
            };
            mask = (mask & 0x55) | c << 1;
            banks[t & 3][mask as usize] += 1;
            mask >>= 1;
        }
    }
}

fn count_plane_pair(grid: &VoxelGrid, z: usize) -> [u64; 256] {
    let mut banks = [[0u64; 256]; 4];
    for y in 0..grid.dims[1] - 1 {
        let rows = [grid.row(y, z), grid.row(y + 1, z), grid.row(y, z + 1), grid.row(y + 1, z + 1)];
        count_row_quad(rows, grid.dims[0] - 1, &mut banks);
    }
    banks.into_iter().fold([0; 256], add_counts)
}

/// Configuration histogram over all windows lying in the grid, in parallel
/// over z-slabs. Integer sums make the result independent of scheduling.
pub fn count_configurations(grid: &VoxelGrid) -> ConfigHistogram {
    let counts = (0..grid.dims[2] - 1)
        .into_par_iter()
        .map(|z| count_plane_pair(grid, z))
        .reduce(|| [0; 256], add_counts);
    ConfigHistogram::from_mask_counts(counts)
}

/// Single-threaded version of [`count_configurations`].
pub fn count_configurations_serial(grid: &VoxelGrid) -> ConfigHistogram {
    let counts = (0..grid.dims[2] - 1)
        .map(|z| count_plane_pair(grid, z))
        .fold([0; 256], add_counts);
    ConfigHistogram::from_mask_counts(counts)
}

/// Reference counting, one window and one bit at a time.
pub fn count_configurations_naive(grid: &VoxelGrid) -> ConfigHistogram {
    let [nx, ny, nz] = grid.dims;
    let mut counts = [0u64; 256];
    for z in 0..nz - 1 {
        for y in 0..ny - 1 {
            for x in 0..nx - 1 {
                let mut mask = 0u8;
                for i in 0..8 {
                    if grid.get(x + (i & 1), y + (i >> 1 & 1), z + (i >> 2)) {
                        mask |= 1 << i;
                    }
                }
                counts[mask as usize] += 1;
            }
        }
    }
    ConfigHistogram::from_mask_counts(counts)
}

/// `V̂_q = a^{q−3} Σ_j w_j N_j / N(A)`.
pub fn estimate(hist: &ConfigHistogram, w: &WeightVector<f64>, a: f64) -> Result<f64> {
    if hist.windows == 0 {
        return Err(Error::EmptyWindow);
    }
    let total: f64 = (1..=NUM_CLASSES)
        .map(|j| w.get(j) * hist.class_count(j) as f64)
        .sum();
    Ok(a.powi(w.q() as i32 - 3) * total / hist.windows as f64)
}

/// Realizations of one experiment: `histograms[i][r]` belongs to width
/// `widths[i]` and replication `r`.
#[derive(Clone, Debug)]
pub struct HistogramSet {
    pub model: BallModel<f64>,
    pub side: f64,
    pub widths: Vec<f64>,
    pub histograms: Vec<Vec<ConfigHistogram>>,
}

/// Seed of replication `rep` at the `width_index`-th grid width. Each pair
/// gets its own realization.
pub fn replication_seed(seed: u64, width_index: usize, rep: usize) -> u64 {
    child_seed(seed, Domain::Experiment, ((width_index as u64) << 32) | rep as u64)
}

/// Samples, digitizes and counts `replications` fresh realizations for every
/// width.
pub fn collect_histograms(
    model: &BallModel<f64>,
    side: f64,
    widths: &[f64],
    replications: usize,
    seed: u64,
) -> Result<HistogramSet> {
    if replications < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 replications, got {replications}"
        )));
    }
    if widths.is_empty() {
        return Err(Error::InvalidParameter("no grid widths given".into()));
    }
    for &a in widths {
        grid_steps(side, a)?;
    }
    let mut histograms = Vec::with_capacity(widths.len());
    for (i, &a) in widths.iter().enumerate() {
        let row = (0..replications)
            .into_par_iter()
            .map(|rep| {
                let real = sample_realization(model, side, replication_seed(seed, i, rep))?;
                Ok(count_configurations(&digitize(&real, a)?))
            })
            .collect::<Result<Vec<_>>>()?;
        histograms.push(row);
    }
    Ok(HistogramSet {
        model: *model,
        side,
        widths: widths.to_vec(),
        histograms,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub q: usize,
    pub a: f64,
    pub side: f64,
    pub replications: usize,
    pub mean: f64,
    pub std_error: f64,
    pub predicted_mean: f64,
    pub miles_truth: f64,
    pub abs_bias: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    /// Least-squares slope of `log |bias|` against `log a`; present with at
    /// least three widths.
    pub convergence_order: Option<f64>,
}

/// Least-squares slope of `log y` on `log x`, skipping zero `y`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&u, &v)| (u.ln(), v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Evaluates one estimator on every histogram of `set`.
pub fn report(set: &HistogramSet, w: &WeightVector<f64>, tables: &ExpansionTables<f64>) -> Result<ExperimentReport> {
    let q = w.q();
    let truth = set.model.miles_values()[q];
    let mut rows = Vec::with_capacity(set.widths.len());
    for (&a, hists) in set.widths.iter().zip(&set.histograms) {
        let values = hists
            .iter()
            .map(|h| estimate(h, w, a))
            .collect::<Result<Vec<_>>>()?;
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        rows.push(ExperimentRow {
            q,
            a,
            side: set.side,
            replications: values.len(),
            mean,
            std_error: (var / n).sqrt(),
            predicted_mean: tables.predict_estimator_mean(w, &set.model, a),
            miles_truth: truth,
            abs_bias: (mean - truth).abs(),
        });
    }
    let a: Vec<f64> = rows.iter().map(|r| r.a).collect();
    let bias: Vec<f64> = rows.iter().map(|r| r.abs_bias).collect();
    Ok(ExperimentReport {
        convergence_order: log_log_slope(&a, &bias),
        rows,
    })
}

/// Fresh realizations per width, digitized, counted and evaluated with `w`.
pub fn run_experiment(
    model: &BallModel<f64>,
    w: &WeightVector<f64>,
    widths: &[f64],
    side: f64,
    replications: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let set = collect_histograms(model, side, widths, replications, seed)?;
    report(&set, w, &ExpansionTables::build(ClassTable::shared()))
}
