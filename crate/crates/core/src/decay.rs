//! Extrapolation of the distance-decay trace.
//!
//! The logged squared distances follow a stretched-exponential approach to a
//! limit `a`: for the right `(a, b)`, `|log(D_c^2 - a)|^b` is linear in the
//! correction count `c`. The fit therefore searches `(a, b)` for the pair
//! maximizing the magnitude of the Pearson correlation between those two
//! quantities, and reads off `a` as the squared-distance limit. States whose
//! `a` clears the solver's precision floor are classified entangled; the
//! method cannot certify separability, so everything else is inconclusive.

use crate::error::{Error, Result};
use crate::gilbert::GilbertTrace;

/// Solver precision: `a` above this is evidence of entanglement.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-5;
/// Leading fraction of the trace excluded as initialization transient.
const TRANSIENT_FRACTION: f64 = 0.10;
/// The `a` search domain is capped at this fraction of the smallest observed
/// squared distance, which keeps every `log(D_c^2 - a)` defined.
const LIMIT_DOMAIN_FACTOR: f64 = 0.999;
const COARSE_LIMIT_STEPS: usize = 200;
const COARSE_EXPONENT_STEPS: usize = 50;
const EXPONENT_RANGE: (f64, f64) = (0.1, 5.0);
/// Absolute resolution of the refined search on `a`.
const LIMIT_RESOLUTION: f64 = 1e-10;
const EXPONENT_RESOLUTION: f64 = 1e-8;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Entangled,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Entangled => write!(f, "entangled"),
            Classification::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Result of the decay fit.
#[derive(Debug, Clone)]
pub struct DecayFit {
    /// Estimated squared-distance limit (`a`).
    pub limit: f64,
    /// Stretch exponent (`b`); reported for diagnostics only.
    pub exponent: f64,
    /// Pearson correlation achieved at the optimum (signed).
    pub correlation: f64,
    pub classification: Classification,
}

impl DecayFit {
    /// Estimated distance to the separable set.
    pub fn extrapolated_distance(&self) -> f64 {
        self.limit.max(0.0).sqrt()
    }
}

/// `entangled` iff the limit strictly exceeds the solver precision.
pub fn classify(limit: f64) -> Classification {
    if limit > ENTANGLEMENT_THRESHOLD {
        Classification::Entangled
    } else {
        Classification::Inconclusive
    }
}

/// Fit the decay of a trace and classify the state.
///
/// The leading 10% of the points is dropped as transient, consecutive equal
/// values are deduplicated, and the remainder must be strictly decreasing.
/// The search runs a deterministic coarse grid over `(a, b)` followed by
/// coordinate-wise golden-section refinement; ties prefer the smaller `a`.
pub fn fit_decay(trace: &GilbertTrace) -> Result<DecayFit> {
    if trace.points.len() < 10 {
        return Err(Error::FitRejected(format!(
            "need at least 10 trace points, got {}",
            trace.points.len()
        )));
    }
    let skip = trace.points.len() / 10;
    debug_assert!(skip as f64 <= TRANSIENT_FRACTION * trace.points.len() as f64);

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(c, sq) in &trace.points[skip..] {
        if ys.last() == Some(&sq) {
            continue;
        }
        if let Some(&prev) = ys.last() {
            if sq >= prev {
                return Err(Error::FitRejected(format!(
                    "squared distances are not strictly decreasing at correction {c}"
                )));
            }
        }
        xs.push(c as f64);
        ys.push(sq);
    }
    if xs.len() < 8 {
        return Err(Error::FitRejected(format!(
            "only {} distinct points after transient removal",
            xs.len()
        )));
    }
    let min_sq = *ys.last().expect("nonempty");
    if !(min_sq > 0.0) {
        return Err(Error::FitRejected(
            "squared distances must stay strictly positive".into(),
        ));
    }

    let limit_max = LIMIT_DOMAIN_FACTOR * min_sq;
    let score = |a: f64, b: f64| -> f64 {
        let r = correlation(&xs, &ys, a, b);
        if r.is_nan() {
            f64::NEG_INFINITY
        } else {
            r.abs()
        }
    };

    // Coarse grid; scanning `a` ascending keeps the smallest `a` on ties.
    let mut best = (0.0f64, EXPONENT_RANGE.0, f64::NEG_INFINITY);
    for ai in 0..COARSE_LIMIT_STEPS {
        let a = limit_max * ai as f64 / (COARSE_LIMIT_STEPS - 1) as f64;
        for bi in 0..COARSE_EXPONENT_STEPS {
            let b = EXPONENT_RANGE.0
                + (EXPONENT_RANGE.1 - EXPONENT_RANGE.0) * bi as f64
                    / (COARSE_EXPONENT_STEPS - 1) as f64;
            let s = score(a, b);
            if s > best.2 {
                best = (a, b, s);
            }
        }
    }

    let limit_step = limit_max / (COARSE_LIMIT_STEPS - 1) as f64;
    let exponent_step =
        (EXPONENT_RANGE.1 - EXPONENT_RANGE.0) / (COARSE_EXPONENT_STEPS - 1) as f64;
    let (mut a, mut b) = (best.0, best.1);
    for _ in 0..2 {
        a = golden_max(
            (a - limit_step).max(0.0),
            (a + limit_step).min(limit_max),
            LIMIT_RESOLUTION,
            |x| score(x, b),
        );
        b = golden_max(
            (b - exponent_step).max(EXPONENT_RANGE.0),
            (b + exponent_step).min(EXPONENT_RANGE.1),
            EXPONENT_RESOLUTION,
            |x| score(a, x),
        );
    }

    let correlation = correlation(&xs, &ys, a, b);
    Ok(DecayFit {
        limit: a,
        exponent: b,
        correlation,
        classification: classify(a),
    })
}

/// Pearson correlation between `x` and `|log(y - a)|^b`; NaN when degenerate.
fn correlation(xs: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    let n = xs.len() as f64;
    let mut tx = Vec::with_capacity(xs.len());
    for &y in ys {
        let shifted = y - a;
        if shifted <= 0.0 {
            return f64::NAN;
        }
        tx.push(shifted.ln().abs().powf(b));
    }
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = tx.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(tx.iter()) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x <= 0.0 || var_y <= 0.0 {
        return f64::NAN;
    }
    cov / (var_x * var_y).sqrt()
}

/// Golden-section maximization; on equal values the interval shrinks toward
/// the lower end.
fn golden_max(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}
