//! Box-counting dimension of point clouds.
//!
//! Occupied cells of the origin-anchored `ε`-grid are counted through packed
//! integer keys; torus coordinates are reduced mod 1 first. The dimension is
//! the least-squares slope of `log N(ε)` against `-log ε` over a window of
//! scales that avoids saturation at both ends.

use std::io::Write;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::manifold::{attractor_cloud, slice_cloud, PointCloud, DEDUP_TOLERANCE};
use crate::model::{reduce_mod1, SolenoidSpec};

/// Largest ambient dimension the packed keys support.
pub const MAX_DIM: usize = 8;

type CellKey = [i64; MAX_DIM];

fn cell_keys(points: &[f64], dim: usize, base_dims: usize, eps: f64) -> Result<Vec<CellKey>> {
    points
        .chunks_exact(dim)
        .map(|pt| {
            let mut key = [0i64; MAX_DIM];
            for (j, (&c, k)) in pt.iter().zip(key.iter_mut()).enumerate() {
                let c = if j < base_dims { reduce_mod1(c) } else { c };
                let idx = lattice_floor(c / eps);
                if !idx.is_finite() || idx.abs() > 9.0e15 {
                    return Err(Error::InvalidArgument(format!(
                        "scale {eps} too fine for coordinate {c}"
                    )));
                }
                *k = idx as i64;
            }
            Ok(key)
        })
        .collect()
}

/// Relative distance to a grid hyperplane below which a coordinate is
/// treated as lying on it.
const SNAP: f64 = 1e-12;

/// `floor(q)`, except that quotients within [`SNAP`] of an integer are
/// rounded to it first, so that points exactly on a grid line are not split
/// between two cells by rounding in `c / ε`.
fn lattice_floor(q: f64) -> f64 {
    let r = q.round();
    if (q - r).abs() <= SNAP * r.abs().max(1.0) {
        r
    } else {
        q.floor()
    }
}

fn check_count_args(cloud: &PointCloud, eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("box size must be positive, got {eps}")));
    }
    if cloud.dim() > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "ambient dimension {} exceeds {MAX_DIM}",
            cloud.dim()
        )));
    }
    Ok(())
}

/// Sorted, deduplicated occupied-cell keys of one chunk of points.
fn occupied(points: &[f64], dim: usize, base_dims: usize, eps: f64) -> Result<Vec<CellKey>> {
    let mut keys = cell_keys(points, dim, base_dims, eps)?;
    keys.par_sort_unstable();
    keys.dedup();
    Ok(keys)
}

/// Number of `ε`-grid cells containing at least one point.
pub fn box_count(cloud: &PointCloud, eps: f64) -> Result<u64> {
    check_count_args(cloud, eps)?;
    Ok(occupied(cloud.coords(), cloud.dim(), cloud.base_dims(), eps)?.len() as u64)
}

/// Same count, computed over `chunks` disjoint point ranges merged by set union.
pub fn box_count_chunked(cloud: &PointCloud, eps: f64, chunks: usize) -> Result<u64> {
    check_count_args(cloud, eps)?;
    let chunks = chunks.max(1);
    let per = cloud.len().div_ceil(chunks).max(1) * cloud.dim();
    let parts: Vec<Vec<CellKey>> = cloud
        .coords()
        .par_chunks(per)
        .map(|c| occupied(c, cloud.dim(), cloud.base_dims(), eps))
        .collect::<Result<_>>()?;
    let mut union: Vec<CellKey> = parts.into_iter().flatten().collect();
    union.par_sort_unstable();
    union.dedup();
    Ok(union.len() as u64)
}

/// Geometric ladder `ε_k = coarsest · ratio^{-k}`, `k = 0..rungs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleLadder {
    pub coarsest: f64,
    pub rungs: usize,
    pub ratio: f64,
}

impl Default for ScaleLadder {
    fn default() -> Self {
        Self {
            coarsest: 0.125,
            rungs: 8,
            ratio: 2.0,
        }
    }
}

impl ScaleLadder {
    pub fn dyadic(coarsest: f64, rungs: usize) -> Self {
        Self {
            coarsest,
            rungs,
            ratio: 2.0,
        }
    }

    pub fn scales(&self) -> Vec<f64> {
        (0..self.rungs)
            .map(|k| self.coarsest * self.ratio.powi(-(k as i32)))
            .collect()
    }
}

/// Occupied-cell counts over decreasing scales.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSeries {
    pub scales: Vec<f64>,
    pub counts: Vec<u64>,
    pub resolution: f64,
    pub cardinality: usize,
    pub extent: f64,
}

impl ScaleSeries {
    /// Counts `cloud` at every scale (which must be decreasing).
    pub fn measure(cloud: &PointCloud, scales: &[f64]) -> Result<Self> {
        if scales.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument("scales must be strictly decreasing".into()));
        }
        let counts = scales
            .iter()
            .map(|&eps| box_count(cloud, eps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scales: scales.to_vec(),
            counts,
            resolution: cloud.resolution,
            cardinality: cloud.len(),
            extent: cloud.extent(),
        })
    }

    /// Scales inside `[2 · resolution, extent / 8]` (upper end ignored for
    /// zero-extent clouds).
    pub fn auto_window(&self) -> Range<usize> {
        let upper = if self.extent > 0.0 { self.extent / 8.0 } else { f64::INFINITY };
        let ok = |e: f64| e >= 2.0 * self.resolution && e <= upper;
        let start = self.scales.iter().position(|&e| ok(e)).unwrap_or(self.scales.len());
        let end = self.scales[start..]
            .iter()
            .position(|&e| !ok(e))
            .map_or(self.scales.len(), |k| start + k);
        start..end
    }
}

/// Least-squares fit of `log N` against `-log ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub window: Range<usize>,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares over `window`; refuses fewer than 3 scales and
/// scales finer than twice the cloud resolution.
pub fn dim_fit(series: &ScaleSeries, window: Range<usize>) -> Result<DimFit> {
    if window.end > series.scales.len() || window.len() < 3 {
        return Err(Error::InvalidWindow(format!(
            "window {window:?} must hold at least 3 of {} scales",
            series.scales.len()
        )));
    }
    if let Some(&eps) = series.scales[window.clone()]
        .iter()
        .find(|&&e| e < 2.0 * series.resolution)
    {
        return Err(Error::InvalidWindow(format!(
            "scale {eps} is below twice the cloud resolution {}",
            series.resolution
        )));
    }
    let xs: Vec<f64> = series.scales[window.clone()].iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = series.counts[window.clone()].iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(DimFit {
        slope,
        intercept,
        stderr,
        window,
        residuals,
    })
}

/// A counted ladder and its fit.
#[derive(Debug, Clone)]
pub struct DimensionReport {
    pub series: ScaleSeries,
    pub fit: DimFit,
    /// Distinct points after merging coincident ones.
    pub distinct_points: usize,
}

impl DimensionReport {
    /// Rows `eps,count`, then the fit summary as `#` comment rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eps,count")?;
        for (e, c) in self.series.scales.iter().zip(&self.series.counts) {
            writeln!(w, "{e},{c}")?;
        }
        writeln!(w, "# slope = {}", self.fit.slope)?;
        writeln!(w, "# stderr = {}", self.fit.stderr)?;
        writeln!(w, "# window = {}..{}", self.fit.window.start, self.fit.window.end)?;
        writeln!(w, "# distinct_points = {}", self.distinct_points)?;
        Ok(())
    }
}

/// Counts a cloud along `ladder` and fits over the automatic window.
/// Points closer than the cloud's resolution are merged first.
pub fn cloud_dimension(cloud: &PointCloud, ladder: &ScaleLadder) -> Result<DimensionReport> {
    let distinct = cloud.deduplicated(DEDUP_TOLERANCE.max(cloud.resolution));
    let series = ScaleSeries::measure(&distinct, &ladder.scales())?;
    let fit = if distinct.len() == 1 {
        // a single point occupies one cell at every scale
        dim_fit(&series, 0..series.scales.len())?
    } else {
        dim_fit(&series, series.auto_window())?
    };
    Ok(DimensionReport {
        series,
        fit,
        distinct_points: distinct.len(),
    })
}

/// Box dimension estimate of the stable slice over `x`.
pub fn slice_dimension(
    spec: &SolenoidSpec,
    x: &[f64],
    depth: usize,
    ladder: &ScaleLadder,
    budget: u64,
) -> Result<DimensionReport> {
    cloud_dimension(&slice_cloud(spec, x, depth, budget)?, ladder)
}

/// Box dimension estimate of the attractor sampled over a uniform base grid
/// with `cells` points per axis.
pub fn attractor_dimension(
    spec: &SolenoidSpec,
    depth: usize,
    cells: u64,
    ladder: &ScaleLadder,
    budget: u64,
) -> Result<DimensionReport> {
    let cloud = attractor_cloud(spec, depth, cells, budget)?;
    let series = ScaleSeries::measure(&cloud, &ladder.scales())?;
    let fit = dim_fit(&series, series.auto_window())?;
    Ok(DimensionReport {
        series,
        fit,
        distinct_points: cloud.len(),
    })
}
