//! Deterministic parallel reductions.

use rayon::prelude::*;

/// Fixed chunk size: the reduction tree depends only on the input length,
/// never on the number of worker threads.
const CHUNK: usize = 4096;

/// Partial `(max, Σ exp(v - max))`.
#[derive(Debug, Clone, Copy)]
struct Partial {
    max: f64,
    sum: f64,
}

impl Partial {
    const EMPTY: Partial = Partial {
        max: f64::NEG_INFINITY,
        sum: 0.0,
    };

    fn of(values: &[f64]) -> Partial {
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Partial::EMPTY;
        }
        Partial {
            max,
            sum: values.iter().map(|v| (v - max).exp()).sum(),
        }
    }

    fn merge(self, other: Partial) -> Partial {
        if self.max == f64::NEG_INFINITY {
            return other;
        }
        if other.max == f64::NEG_INFINITY {
            return self;
        }
        let max = self.max.max(other.max);
        Partial {
            max,
            sum: self.sum * (self.max - max).exp() + other.sum * (other.max - max).exp(),
        }
    }
}

fn tree_merge(mut parts: Vec<Partial>) -> Partial {
    if parts.is_empty() {
        return Partial::EMPTY;
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| if c.len() == 2 { c[0].merge(c[1]) } else { c[0] })
            .collect();
    }
    parts[0]
}

/// `log Σ exp(v)`, overflow-safe, bit-identical at any thread count.
///
/// Empty input (or all `-inf`) yields `-inf`. NaN inputs propagate.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let parts: Vec<Partial> = values.par_chunks(CHUNK).map(Partial::of).collect();
    let total = tree_merge(parts);
    total.max + total.sum.ln()
}

/// `log Σ exp(scale · v)` without materializing the scaled vector.
pub fn log_sum_exp_scaled(values: &[f64], scale: f64) -> f64 {
    let parts: Vec<Partial> = values
        .par_chunks(CHUNK)
        .map(|c| {
            let scaled: Vec<f64> = c.iter().map(|v| scale * v).collect();
            Partial::of(&scaled)
        })
        .collect();
    let total = tree_merge(parts);
    total.max + total.sum.ln()
}
