//! Numerical probe of intrinsic transversality.
//!
//! Over a grid of base points, depth-`k` components whose one-step branches
//! differ are paired when their `ρ`-projections come within `δ₁`; each such
//! near-overlap records the smallest singular value of the difference of the
//! `ρ`-derivatives. A positive minimum over a finite grid is evidence, not a
//! proof, and the verdict vocabulary says exactly that.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};
use crate::linalg::{smallest_singular_value, Matrix};
use crate::manifold::{base_grid, graph_rho_derivative, graph_value};
use crate::model::SolenoidSpec;
use crate::symbolic::{word_count, Word};

/// Margins below this are reported as degenerate.
pub const MARGIN_FLOOR: f64 = 1e-9;
/// Components are resolved until their truncation error is below this.
pub const COMPONENT_RESOLUTION: f64 = 1e-12;
/// Default scan depth.
pub const DEFAULT_SCAN_DEPTH: usize = 8;
/// Default cap on `(word pairs) × (grid points)`.
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 24;

fn check_shape(spec: &SolenoidSpec) -> Result<()> {
    if spec.p() > spec.l() {
        return Err(Error::Shape(format!(
            "p = {} > l = {}: derivative differences cannot be surjective",
            spec.p(),
            spec.l()
        )));
    }
    Ok(())
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

/// `(gap, margin)` for a pair of equal-length words whose one-step
/// branches differ.
pub fn margin_at(spec: &SolenoidSpec, x: &[f64], word_a: &Word, word_b: &Word) -> Result<(f64, f64)> {
    check_shape(spec)?;
    if word_a.len() != word_b.len() || word_a.is_empty() {
        return Err(Error::InvalidArgument("words must be nonempty and of equal length".into()));
    }
    if word_a.shallowest() == word_b.shallowest() {
        return Err(Error::InvalidArgument(
            "words lie in the same component of T(V)".into(),
        ));
    }
    let (ya, _) = graph_value(spec, x, word_a)?;
    let (yb, _) = graph_value(spec, x, word_b)?;
    let da = graph_rho_derivative(spec, x, word_a)?;
    let db = graph_rho_derivative(spec, x, word_b)?;
    Ok((distance(&ya, &yb), smallest_singular_value(&(&da - &db))?))
}

/// Scan parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub depth: usize,
    /// Gap threshold; defaults to `4 λ̄^k diam E`.
    pub delta1: Option<f64>,
    /// Base-grid points per axis.
    pub grid_cells: u64,
    pub budget: u64,
    pub margin_floor: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            depth: DEFAULT_SCAN_DEPTH,
            delta1: None,
            grid_cells: 1 << 8,
            budget: DEFAULT_PAIR_BUDGET,
            margin_floor: MARGIN_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCandidate {
    pub x: Vec<f64>,
    pub grid_index: u64,
    /// Lexicographic ranks of the two depth-`k` words, `word_a < word_b`.
    pub word_a: u64,
    pub word_b: u64,
    pub gap: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoOverlapsFound,
    TransversalMarginPositive,
    DegenerateMargin,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NoOverlapsFound => "no-overlaps-found",
            Verdict::TransversalMarginPositive => "transversal-margin-positive",
            Verdict::DegenerateMargin => "degenerate-margin",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TransversalityReport {
    pub depth: usize,
    pub delta1: f64,
    pub grid_cells: u64,
    /// Word length actually evaluated (depth plus the deep padding).
    pub eval_depth: usize,
    pub candidates: Vec<OverlapCandidate>,
    /// Pairs with distinct one-step branches and gap above `δ₁`.
    pub far_pairs: u128,
    pub min_margin: Option<f64>,
    /// Half the minimum margin; `None` when nothing was recorded.
    pub c1_estimate: Option<f64>,
    pub verdict: Verdict,
}

impl TransversalityReport {
    /// One row per candidate, then the summary as `#` comment rows.
    pub fn write_csv<W: Write>(&self, mut w: W, l: usize) -> Result<()> {
        let mut header: Vec<String> = (0..l).map(|i| format!("x{i}")).collect();
        header.extend(["grid_index", "word_a", "word_b", "gap", "margin"].map(String::from));
        writeln!(w, "{}", header.join(","))?;
        for c in &self.candidates {
            let mut row: Vec<String> = c.x.iter().map(|v| v.to_string()).collect();
            row.push(c.grid_index.to_string());
            row.push(c.word_a.to_string());
            row.push(c.word_b.to_string());
            row.push(c.gap.to_string());
            row.push(c.margin.to_string());
            writeln!(w, "{}", row.join(","))?;
        }
        writeln!(w, "# depth = {}", self.depth)?;
        writeln!(w, "# delta1 = {}", self.delta1)?;
        writeln!(w, "# eval_depth = {}", self.eval_depth)?;
        writeln!(w, "# candidates = {}", self.candidates.len())?;
        writeln!(w, "# far_pairs = {}", self.far_pairs)?;
        match self.c1_estimate {
            Some(c1) => writeln!(w, "# c1_estimate = {c1}")?,
            None => writeln!(w, "# c1_estimate = none")?,
        }
        writeln!(w, "# verdict = {}", self.verdict)?;
        Ok(())
    }
}

/// Depth at which `λ̄^n (diam E + diam F)` drops below [`COMPONENT_RESOLUTION`].
fn resolving_depth(spec: &SolenoidSpec, depth: usize) -> usize {
    let lb = spec.rate_bounds().lambda_bar;
    let scale = spec.e_diameter() + spec.f_diameter();
    let need = ((COMPONENT_RESOLUTION / scale).ln() / lb.ln()).ceil().max(0.0) as usize;
    need.max(depth)
}

fn pair_counts(alphabet: u64, k: usize) -> u128 {
    let words = u128::from(alphabet).pow(k as u32);
    let per_branch = words / u128::from(alphabet);
    let all = words * (words - 1) / 2;
    let same = u128::from(alphabet) * per_branch * per_branch.saturating_sub(1) / 2;
    all - same
}

/// Scans the base grid for near-overlaps between depth-`k` components.
///
/// Each depth-`k` word is padded at its deep end with zeros until the
/// graph it names is resolved to [`COMPONENT_RESOLUTION`], so that values
/// and derivatives describe components of the attractor itself rather than
/// the centres of depth-`k` tubes.
pub fn overlap_scan(spec: &SolenoidSpec, opts: &ScanOptions) -> Result<TransversalityReport> {
    check_shape(spec)?;
    let k = opts.depth;
    if k == 0 || opts.grid_cells == 0 {
        return Err(Error::InvalidArgument("depth and grid cells must be >= 1".into()));
    }
    let alphabet = spec.degree();
    let words = word_count(alphabet, k, u64::MAX)?;
    let total_pairs = pair_counts(alphabet, k);
    let grid_points = u128::from(opts.grid_cells).pow(spec.l() as u32);
    check_budget(
        "overlap scan pairs x grid points",
        total_pairs.saturating_mul(grid_points),
        u128::from(opts.budget),
    )?;
    let lb = spec.rate_bounds().lambda_bar;
    let delta1 = opts
        .delta1
        .unwrap_or(4.0 * lb.powi(k as i32) * spec.e_diameter());
    if !(delta1 > 0.0) {
        return Err(Error::InvalidArgument(format!("delta1 must be positive, got {delta1}")));
    }
    let eval_depth = resolving_depth(spec, k);
    let padding = vec![0u32; eval_depth - k];
    let padded: Vec<Word> = (0..words)
        .map(|i| Word::from_index(i, k, alphabet).deepen(&padding))
        .collect();

    let grid = base_grid(spec.l(), opts.grid_cells);
    let per_point: Vec<Result<Vec<OverlapCandidate>>> = grid
        .par_iter()
        .enumerate()
        .map(|(gi, x)| scan_point(spec, x, gi as u64, &padded, alphabet, delta1))
        .collect();
    let mut candidates = Vec::new();
    for c in per_point {
        candidates.extend(c?);
    }
    let near = candidates.len() as u128;
    let min_margin = candidates.iter().map(|c| c.margin).reduce(f64::min);
    let verdict = match min_margin {
        None => Verdict::NoOverlapsFound,
        Some(m) if m < opts.margin_floor => Verdict::DegenerateMargin,
        Some(_) => Verdict::TransversalMarginPositive,
    };
    Ok(TransversalityReport {
        depth: k,
        delta1,
        grid_cells: opts.grid_cells,
        eval_depth,
        far_pairs: total_pairs * grid_points - near,
        c1_estimate: min_margin.map(|m| m / 2.0),
        min_margin,
        candidates,
        verdict,
    })
}

fn scan_point(
    spec: &SolenoidSpec,
    x: &[f64],
    grid_index: u64,
    padded: &[Word],
    alphabet: u64,
    delta1: f64,
) -> Result<Vec<OverlapCandidate>> {
    let values: Vec<Vec<f64>> = padded
        .iter()
        .map(|w| graph_value(spec, x, w).map(|(y, _)| y))
        .collect::<Result<_>>()?;
    // spatial hash with cell size delta1: near pairs sit in adjacent cells
    let key = |y: &[f64]| -> Vec<i64> { y.iter().map(|v| (v / delta1).floor() as i64).collect() };
    let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, y) in values.iter().enumerate() {
        cells.entry(key(y)).or_default().push(i);
    }
    let p = spec.p();
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(p as u32))
        .map(|mut m| {
            (0..p)
                .map(|_| {
                    let o = (m % 3) as i64 - 1;
                    m /= 3;
                    o
                })
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, y) in values.iter().enumerate() {
        let base = key(y);
        for off in &offsets {
            let probe: Vec<i64> = base.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(members) = cells.get(&probe) {
                for &j in members.iter().filter(|&&j| j > i) {
                    // the one-step branch is the least significant digit
                    if i as u64 % alphabet == j as u64 % alphabet {
                        continue;
                    }
                    let gap = distance(y, &values[j]);
                    if gap <= delta1 {
                        pairs.push((i, j, gap));
                    }
                }
            }
        }
    }
    pairs.sort_by_key(|a| (a.0, a.1));
    let mut derivs: HashMap<usize, Matrix> = HashMap::new();
    let mut out = Vec::with_capacity(pairs.len());
    for (i, j, gap) in pairs {
        for w in [i, j] {
            if let std::collections::hash_map::Entry::Vacant(e) = derivs.entry(w) {
                e.insert(graph_rho_derivative(spec, x, &padded[w])?);
            }
        }
        let diff = &derivs[&i] - &derivs[&j];
        out.push(OverlapCandidate {
            x: x.to_vec(),
            grid_index,
            word_a: i as u64,
            word_b: j as u64,
            gap,
            margin: smallest_singular_value(&diff)?,
        });
    }
    Ok(out)
}
