//! Unstable graphs `S(x, ā)` of the attractor, their base derivatives, and
//! deterministic point clouds for stable slices and the whole attractor.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};
use crate::linalg::Matrix;
use crate::model::SolenoidSpec;
use crate::symbolic::{branch_orbit, inverse_branch_in, word_count, Word};

/// Points closer than this (max-norm) are merged by [`PointCloud::deduplicated`].
pub const DEDUP_TOLERANCE: f64 = 1e-12;

/// Value and `ρ`-derivative of an unstable graph at a base point.
#[derive(Debug, Clone)]
pub struct GraphPatch {
    pub x: Vec<f64>,
    pub word: Word,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    /// `ρDS(x, ā)`, a `p × l` matrix.
    pub rho_derivative: Matrix,
    /// Bound on the distance to the graph of any infinite extension.
    pub resolution: f64,
}

fn check_word(spec: &SolenoidSpec, word: &Word) -> Result<()> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("graph evaluation needs a nonempty word".into()));
    }
    Word::checked(word.symbols().to_vec(), spec.degree()).map(|_| ())
}

/// `λ̄ⁿ (diam E + diam F)`
pub fn truncation_bound(spec: &SolenoidSpec, n: usize) -> f64 {
    spec.rate_bounds().lambda_bar.powi(n as i32) * (spec.e_diameter() + spec.f_diameter())
}

/// `S(x, ā)`: starts at `(0, 0)` over the deepest preimage and applies the
/// fiber maps forward along the branch orbit.
pub fn graph_value(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Result<(Vec<f64>, Vec<f64>)> {
    check_word(spec, word)?;
    let orbit = branch_orbit(spec.base(), word, x);
    let mut y = vec![0.0; spec.p()];
    let mut z = vec![0.0; spec.d()];
    for xi in orbit.iter().rev() {
        z = spec.psi(xi, &z);
        y = spec.nu(xi, &y);
    }
    Ok((y, z))
}

/// `ρDS(x, ā)` by the backward recursion
/// `J ← (D_xν(x_i, y_i) + D_yν(x_i) J) M⁻¹`, `J = 0` at the deepest level.
pub fn graph_rho_derivative(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Result<Matrix> {
    check_word(spec, word)?;
    Ok(rho_derivative_unchecked(spec, x, word))
}

fn rho_derivative_unchecked(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Matrix {
    let orbit = branch_orbit(spec.base(), word, x);
    let inv_m = Matrix::diag(
        &spec
            .base()
            .iter()
            .map(|&m| 1.0 / f64::from(m))
            .collect::<Vec<_>>(),
    );
    let mut y = vec![0.0; spec.p()];
    let mut jac = Matrix::zeros(spec.p(), spec.l());
    for xi in orbit.iter().rev() {
        let step = &spec.nu_dx(xi, &y) + &(&spec.fiber_linear(xi) * &jac);
        jac = &step * &inv_m;
        y = spec.nu(xi, &y);
    }
    jac
}

pub fn graph_patch(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Result<GraphPatch> {
    let (y, z) = graph_value(spec, x, word)?;
    Ok(GraphPatch {
        x: x.to_vec(),
        word: word.clone(),
        y,
        z,
        rho_derivative: rho_derivative_unchecked(spec, x, word),
        resolution: truncation_bound(spec, word.len()),
    })
}

/// Where a cloud came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub spec_hash: String,
    pub depth: usize,
    /// `"point:x0,x1,…"` for slices, `"uniform:<cells>^<l>"` for attractor grids.
    pub base_grid: String,
}

/// A finite point cloud in `T^l × R^p × R^d` (or a projection of it).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    base_dims: usize,
    word_index: Vec<u64>,
    grid_index: Vec<u64>,
    pub resolution: f64,
    pub provenance: Provenance,
}

impl PointCloud {
    /// Builds a cloud from flat coordinates; the first `base_dims`
    /// coordinates of each point are torus coordinates.
    pub fn from_coords(coords: Vec<f64>, dim: usize, base_dims: usize, resolution: f64) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) || base_dims > dim {
            return Err(Error::Shape(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        let n = coords.len() / dim;
        Ok(Self {
            coords,
            dim,
            base_dims,
            word_index: (0..n as u64).collect(),
            grid_index: vec![0; n],
            resolution,
            provenance: Provenance {
                spec_hash: String::new(),
                depth: 0,
                base_grid: "external".into(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.word_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word_index.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_dims(&self) -> usize {
        self.base_dims
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn word_index(&self, i: usize) -> u64 {
        self.word_index[i]
    }

    pub fn grid_index(&self, i: usize) -> u64 {
        self.grid_index[i]
    }

    /// Largest coordinate range over all axes.
    pub fn extent(&self) -> f64 {
        (0..self.dim)
            .map(|j| {
                let (lo, hi) = self.points().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[j]), hi.max(p[j]))
                });
                if hi >= lo {
                    hi - lo
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    /// Drops the inner-fiber coordinates (the `ρ` projection). `p` is the
    /// middle-fiber dimension.
    pub fn rho_projection(&self, p: usize) -> PointCloud {
        let keep = self.base_dims + p;
        let coords = self
            .points()
            .flat_map(|pt| pt[..keep].iter().copied())
            .collect();
        PointCloud {
            coords,
            dim: keep,
            ..self.clone()
        }
    }

    /// Merges points within `tol` (max-norm) of an already kept point, after
    /// a lexicographic sort. Kept points retain their original order.
    pub fn deduplicated(&self, tol: f64) -> PointCloud {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut keep = vec![false; self.len()];
        let mut last: Option<usize> = None;
        for &i in &order {
            let dup = last.is_some_and(|j| {
                self.point(i)
                    .iter()
                    .zip(self.point(j))
                    .all(|(u, v)| (u - v).abs() <= tol)
            });
            if !dup {
                keep[i] = true;
                last = Some(i);
            }
        }
        let mut out = PointCloud {
            coords: Vec::new(),
            word_index: Vec::new(),
            grid_index: Vec::new(),
            ..self.clone()
        };
        for i in (0..self.len()).filter(|&i| keep[i]) {
            out.coords.extend_from_slice(self.point(i));
            out.word_index.push(self.word_index[i]);
            out.grid_index.push(self.grid_index[i]);
        }
        out
    }

    /// CSV with a header row: coordinates, then word and base-grid indices.
    pub fn write_csv<W: Write>(&self, mut w: W, p: usize) -> Result<()> {
        let mut header: Vec<String> = (0..self.base_dims).map(|i| format!("x{i}")).collect();
        let fiber = self.dim - self.base_dims;
        header.extend((0..fiber.min(p)).map(|i| format!("y{i}")));
        header.extend((0..fiber.saturating_sub(p)).map(|i| format!("z{i}")));
        header.push("word_index".into());
        header.push("grid_index".into());
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row: Vec<String> = self.point(i).iter().map(|v| v.to_string()).collect();
            row.push(self.word_index[i].to_string());
            row.push(self.grid_index[i].to_string());
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Sidecar metadata, one `key = value` per line.
    pub fn write_metadata<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "spec_hash = {}", self.provenance.spec_hash)?;
        writeln!(w, "depth = {}", self.provenance.depth)?;
        writeln!(w, "base_grid = {}", self.provenance.base_grid)?;
        writeln!(w, "resolution = {}", self.resolution)?;
        writeln!(w, "points = {}", self.len())?;
        writeln!(w, "dim = {}", self.dim)?;
        Ok(())
    }
}

/// Walks the branch tree over `x` from the shallowest level down, with
/// affine accumulation of the fiber value:
/// `y = Σ_i (A_1⋯A_{i-1}) f(x_i)`, `z = Σ_i λ̃^{i-1} g(x_i)`.
/// Leaves are written at their lexicographic word index.
fn slice_points_into(spec: &SolenoidSpec, x: &[f64], depth: usize, out: &mut [f64]) {
    let (l, p, d) = (spec.l(), spec.p(), spec.d());
    let dim = l + p + d;
    let alphabet = spec.degree();
    struct Frame<'a> {
        spec: &'a SolenoidSpec,
        x: &'a [f64],
        depth: usize,
        alphabet: u64,
        dim: usize,
        f_buf: Vec<f64>,
        g_buf: Vec<f64>,
    }
    fn walk(
        fr: &mut Frame<'_>,
        level: usize,
        xi: &[f64],
        prod: &Matrix,
        y: &[f64],
        z: &[f64],
        ztilde: f64,
        index: u64,
        weight: u64,
        out: &mut [f64],
    ) {
        if level == fr.depth {
            let base = index as usize * fr.dim;
            let row = &mut out[base..base + fr.dim];
            let l = fr.x.len();
            row[..l].copy_from_slice(fr.x);
            row[l..l + y.len()].copy_from_slice(y);
            row[l + y.len()..].copy_from_slice(z);
            return;
        }
        for s in 0..fr.alphabet as u32 {
            let child = inverse_branch_in(fr.spec.base(), s, xi);
            fr.spec.params().f.eval_into(&child, &mut fr.f_buf);
            fr.spec.params().g.eval_into(&child, &mut fr.g_buf);
            let fy = prod.apply(&fr.f_buf);
            let ny: Vec<f64> = y.iter().zip(&fy).map(|(a, b)| a + b).collect();
            let nz: Vec<f64> = z.iter().zip(&fr.g_buf).map(|(a, b)| a + ztilde * b).collect();
            let nprod = prod * &fr.spec.fiber_linear(&child);
            let lt = fr.spec.lambda_tilde();
            walk(
                fr,
                level + 1,
                &child,
                &nprod,
                &ny,
                &nz,
                ztilde * lt,
                index + u64::from(s) * weight,
                weight * fr.alphabet,
                out,
            );
        }
    }
    let mut fr = Frame {
        spec,
        x,
        depth,
        alphabet,
        dim,
        f_buf: vec![0.0; p],
        g_buf: vec![0.0; d],
    };
    walk(
        &mut fr,
        0,
        x,
        &Matrix::identity(p),
        &vec![0.0; p],
        &vec![0.0; d],
        1.0,
        0,
        1,
        out,
    );
}

fn check_base_point(spec: &SolenoidSpec, x: &[f64]) -> Result<()> {
    if x.len() != spec.l() {
        return Err(Error::Shape(format!(
            "base point of dimension {} for l = {}",
            x.len(),
            spec.l()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite base point".into()));
    }
    Ok(())
}

/// One point `(x, S(x, ā))` per word of length `depth`, in lexicographic
/// word order.
pub fn slice_cloud(spec: &SolenoidSpec, x: &[f64], depth: usize, budget: u64) -> Result<PointCloud> {
    check_base_point(spec, x)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let count = word_count(spec.degree(), depth, budget)?;
    let dim = spec.l() + spec.p() + spec.d();
    let mut coords = vec![0.0; count as usize * dim];
    slice_points_into(spec, x, depth, &mut coords);
    let desc: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    Ok(PointCloud {
        coords,
        dim,
        base_dims: spec.l(),
        word_index: (0..count).collect(),
        grid_index: vec![0; count as usize],
        resolution: truncation_bound(spec, depth),
        provenance: Provenance {
            spec_hash: spec.hash(),
            depth,
            base_grid: format!("point:{}", desc.join(",")),
        },
    })
}

/// Upper bound on the Lipschitz constant of every component graph
/// `x ↦ S(x, ā)`, fiber coordinates `(y, z)` together.
pub fn component_lipschitz_bound(spec: &SolenoidSpec) -> f64 {
    let prm = spec.params();
    let b = spec.rate_bounds();
    let theta = prm.theta.as_ref().map_or(0.0, |t| t.jacobian_norm_bound());
    let nu_x = prm.f.jacobian_norm_bound() + prm.e_radius * (prm.lambda.jacobian_norm_bound() + b.lambda_bar * theta);
    let y = nu_x / (b.beta_low - b.lambda_bar);
    let z = prm.g.jacobian_norm_bound() / (b.beta_low - b.lambda_tilde);
    y.hypot(z)
}

/// Uniform base grid with `cells` points per axis, spacing `1 / cells`.
pub fn base_grid(l: usize, cells: u64) -> Vec<Vec<f64>> {
    let total = cells.pow(l as u32);
    (0..total)
        .map(|idx| {
            let mut rem = idx;
            let mut x = vec![0.0; l];
            for xi in x.iter_mut().rev() {
                *xi = (rem % cells) as f64 / cells as f64;
                rem /= cells;
            }
            x
        })
        .collect()
}

/// Union of slice clouds over a uniform base grid with `cells` points per
/// axis. Grid-major, then word order; identical at any thread count.
pub fn attractor_cloud(spec: &SolenoidSpec, depth: usize, cells: u64, budget: u64) -> Result<PointCloud> {
    if depth == 0 || cells == 0 {
        return Err(Error::InvalidArgument("depth and grid cells must be >= 1".into()));
    }
    let words = word_count(spec.degree(), depth, u64::MAX)?;
    let grid_points = (cells as u128).checked_pow(spec.l() as u32).unwrap_or(u128::MAX);
    check_budget("attractor cloud points", grid_points.saturating_mul(u128::from(words)), u128::from(budget))?;
    let dim = spec.l() + spec.p() + spec.d();
    let per = words as usize * dim;
    let grid = base_grid(spec.l(), cells);
    let mut coords = vec![0.0; grid.len() * per];
    coords
        .par_chunks_mut(per)
        .zip(grid.par_iter())
        .for_each(|(chunk, x)| slice_points_into(spec, x, depth, chunk));
    let n = grid.len() * words as usize;
    let h = 1.0 / cells as f64;
    Ok(PointCloud {
        coords,
        dim,
        base_dims: spec.l(),
        word_index: (0..n as u64).map(|i| i % words).collect(),
        grid_index: (0..n as u64).map(|i| i / words).collect(),
        resolution: (h * component_lipschitz_bound(spec).max(1.0)).max(truncation_bound(spec, depth)),
        provenance: Provenance {
            spec_hash: spec.hash(),
            depth,
            base_grid: format!("uniform:{cells}^{}", spec.l()),
        },
    })
}
