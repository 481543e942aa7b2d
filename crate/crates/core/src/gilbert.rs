//! Iterative Hilbert–Schmidt projection onto the separable set.
//!
//! One round of the loop: draw a random product state, polish it with a
//! seesaw ascent of `tr[(rho0 - rho1) rho2]`, keep it only if it improves the
//! correction direction, then minimize the distance along the segment from
//! the current approximant to the polished product state. The approximant
//! stays a convex combination of product projectors by construction and is
//! never re-verified spectrally.
//!
//! A single run is strictly sequential; parallelism belongs across runs.

mod checkpoint;

pub use checkpoint::{load_checkpoint, save_checkpoint};

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::herm::{
    eig_hermitian, operator_hash, random_product_vector, BipartiteDims, Complex64, DensityMatrix,
    HermitianOp, ProductVector,
};

/// Stall tolerance for the seesaw ascent.
pub const SEESAW_STALL_TOL: f64 = 1e-12;
/// Trials whose step operator has squared norm below this are degenerate.
pub const DEGENERATE_TRIAL_TOL: f64 = 1e-15;
/// Slack allowed on the per-correction distance monotonicity check.
const MONOTONICITY_SLACK: f64 = 1e-14;

/// Limits and knobs for one projection run.
///
/// The loop stops at whichever limit fires first. For references at or very
/// near the separable set the correction budget can become unreachable (once
/// the approximant lands on the reference, every further trial is rejected),
/// so such runs need a finite trial or time budget alongside it.
#[derive(Debug, Clone)]
pub struct GilbertConfig {
    pub max_corrections: u64,
    pub max_trials: u64,
    pub max_seconds: f64,
    /// Squared distance is logged every this many corrections.
    pub log_every: u64,
    /// Iteration cap for each seesaw ascent.
    pub seesaw_iters: u32,
    /// Restrict trial states to real local vectors.
    pub real_only: bool,
    pub seed: u64,
}

impl Default for GilbertConfig {
    fn default() -> Self {
        Self {
            max_corrections: 4000,
            max_trials: u64::MAX,
            max_seconds: f64::INFINITY,
            log_every: 50,
            seesaw_iters: 200,
            real_only: false,
            seed: 1,
        }
    }
}

impl GilbertConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_corrections == 0 || self.max_trials == 0 {
            return Err(Error::Config("correction and trial limits must be positive".into()));
        }
        if !(self.max_seconds > 0.0) {
            return Err(Error::Config("time limit must be positive".into()));
        }
        if self.log_every == 0 {
            return Err(Error::Config("log_every must be at least 1".into()));
        }
        if self.seesaw_iters == 0 {
            return Err(Error::Config("seesaw_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Which halt condition fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    Corrections,
    Trials,
    TimeLimit,
}

/// Decay log of one run: squared distance sampled every `log_every`
/// corrections, plus the final point.
#[derive(Debug, Clone, PartialEq)]
pub struct GilbertTrace {
    /// `(correction index, tr(rho1 - rho0)^2)` pairs.
    pub points: Vec<(u64, f64)>,
    pub trials_used: u64,
    pub corrections_done: u64,
}

impl GilbertTrace {
    pub fn from_points(points: Vec<(u64, f64)>) -> Self {
        let corrections_done = points.last().map_or(0, |p| p.0);
        Self {
            points,
            trials_used: 0,
            corrections_done,
        }
    }

    pub fn final_squared_distance(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }

    /// Check the structural invariants; used by tests and the harness.
    pub fn check(&self, log_every: u64) -> Result<()> {
        let mut prev: Option<(u64, f64)> = None;
        for &(c, sq) in &self.points {
            if !(sq > 0.0) {
                return Err(Error::Numerical(format!(
                    "trace point ({c}, {sq}) is not strictly positive"
                )));
            }
            if let Some((pc, psq)) = prev {
                if c <= pc {
                    return Err(Error::Numerical(format!(
                        "correction indices not increasing at {c}"
                    )));
                }
                if sq > psq + MONOTONICITY_SLACK {
                    return Err(Error::Numerical(format!(
                        "squared distance increased at correction {c}"
                    )));
                }
            }
            let is_last = c == self.corrections_done;
            if !c.is_multiple_of(log_every) && !is_last {
                return Err(Error::Numerical(format!(
                    "interior point at correction {c} is not a multiple of {log_every}"
                )));
            }
            prev = Some((c, sq));
        }
        Ok(())
    }
}

/// Full state of a projection run; resumable via the checkpoint format.
#[derive(Debug, Clone)]
pub struct GilbertState {
    pub(crate) dims: BipartiteDims,
    pub(crate) rho0: DensityMatrix,
    pub(crate) rho1: DensityMatrix,
    pub(crate) trace: GilbertTrace,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) rng_seed: [u8; 32],
    pub(crate) elapsed_seconds: f64,
    pub(crate) halt: Option<HaltReason>,
    pub(crate) rho0_hash: u64,
    pub(crate) label: String,
}

impl GilbertState {
    fn new(rho0: DensityMatrix, dims: BipartiteDims, seed: u64, label: String) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(seed);
        let rng_seed = rng.get_seed();
        let rho0_hash = operator_hash(rho0.op());
        let dim = rho0.dim();
        Self {
            dims,
            rho1: DensityMatrix::maximally_mixed(dim),
            rho0,
            trace: GilbertTrace {
                points: Vec::new(),
                trials_used: 0,
                corrections_done: 0,
            },
            rng,
            rng_seed,
            elapsed_seconds: 0.0,
            halt: None,
            rho0_hash,
            label,
        }
    }

    pub fn reference(&self) -> &DensityMatrix {
        &self.rho0
    }

    /// Current separable approximant.
    pub fn approximant(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn trace(&self) -> &GilbertTrace {
        &self.trace
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn halt_reason(&self) -> Option<HaltReason> {
        self.halt
    }

    pub fn elapsed_seconds(&self) -> f64 {
        self.elapsed_seconds
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn final_distance(&self) -> f64 {
        self.trace
            .final_squared_distance()
            .map_or(f64::NAN, f64::sqrt)
    }
}

/// Alternating maximization of `<a x b| M |a x b>` from a given start.
///
/// With `b` fixed the optimal `a` is the top eigenvector of the effective
/// operator `O_A[i][i'] = sum_{j,j'} conj(b_j) M[(i,j),(i',j')] b_{j'}`, and
/// symmetrically; each half-step cannot decrease the value, so the iteration
/// is monotone and stalls at a local maximum.
pub fn seesaw_max(
    m: &HermitianOp,
    dims: BipartiteDims,
    start: &ProductVector,
    max_iters: u32,
) -> (f64, ProductVector) {
    debug_assert_eq!(m.dim(), dims.total());
    let mut a = start.first().to_vec();
    let mut b = start.second().to_vec();
    let mut value = m.expectation(&joint(&a, &b));
    for _ in 0..max_iters {
        let oa = effective_on_first(m, dims, &b);
        a = top_eigenvector(&oa);
        let ob = effective_on_second(m, dims, &a);
        let eig = eig_hermitian(&ob);
        b = eig.vectors[0].clone();
        let new_value = eig.values[0];
        let stalled = new_value - value <= SEESAW_STALL_TOL;
        value = new_value;
        if stalled {
            break;
        }
    }
    // Return the exact expectation of the vectors handed back.
    let value = m.expectation(&joint(&a, &b));
    (value, ProductVector::new_unchecked(a, b))
}

/// Best of `restarts` independent seesaw ascents from Haar-random starts.
///
/// Restart seeds are drawn from `rng` up front so the outcome does not depend
/// on scheduling; the reduction takes the largest value, breaking ties toward
/// the smaller restart index.
pub fn seesaw_multistart(
    m: &HermitianOp,
    dims: BipartiteDims,
    restarts: u32,
    seesaw_iters: u32,
    real_only: bool,
    rng: &mut ChaCha8Rng,
) -> (f64, ProductVector) {
    assert!(restarts >= 1, "at least one restart is required");
    let seeds: Vec<u64> = (0..restarts).map(|_| rng.next_u64()).collect();
    seeds
        .into_par_iter()
        .enumerate()
        .map(|(idx, seed)| {
            let mut local = ChaCha8Rng::seed_from_u64(seed);
            let start = random_product_vector(dims, real_only, &mut local);
            let (value, arg) = seesaw_max(m, dims, &start, seesaw_iters);
            (idx, value, arg)
        })
        .reduce_with(|x, y| {
            if y.1 > x.1 || (y.1 == x.1 && y.0 < x.0) {
                y
            } else {
                x
            }
        })
        .map(|(_, value, arg)| (value, arg))
        .expect("restarts >= 1")
}

fn joint(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for ai in a {
        for bj in b {
            v.push(ai * bj);
        }
    }
    v
}

fn weight_table(v: &[Complex64]) -> Vec<Complex64> {
    let d = v.len();
    let mut w = Vec::with_capacity(d * d);
    for x in v {
        for y in v {
            w.push(x.conj() * y);
        }
    }
    w
}

fn effective_on_first(m: &HermitianOp, dims: BipartiteDims, b: &[Complex64]) -> HermitianOp {
    let (d1, d2) = (dims.d1(), dims.d2());
    let w = weight_table(b);
    HermitianOp::from_upper(d1, |i, ip| {
        let mut acc = Complex64::ZERO;
        for j in 0..d2 {
            for jp in 0..d2 {
                acc += w[j * d2 + jp] * m.entry(i * d2 + j, ip * d2 + jp);
            }
        }
        acc
    })
}

fn effective_on_second(m: &HermitianOp, dims: BipartiteDims, a: &[Complex64]) -> HermitianOp {
    let (d1, d2) = (dims.d1(), dims.d2());
    let w = weight_table(a);
    HermitianOp::from_upper(d2, |j, jp| {
        let mut acc = Complex64::ZERO;
        for i in 0..d1 {
            for ip in 0..d1 {
                acc += w[i * d1 + ip] * m.entry(i * d2 + j, ip * d2 + jp);
            }
        }
        acc
    })
}

fn top_eigenvector(m: &HermitianOp) -> Vec<Complex64> {
    eig_hermitian(m).vectors.swap_remove(0)
}

/// Draw one trial product state and polish it; `Some` iff the polished state
/// improves the correction direction, i.e. `tr[(rho0 - rho1)(rho2 - rho1)] > 0`.
pub fn propose_trial(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    dims: BipartiteDims,
    real_only: bool,
    seesaw_iters: u32,
    rng: &mut ChaCha8Rng,
) -> Option<ProductVector> {
    let diff = rho0.op() - rho1.op();
    let start = random_product_vector(dims, real_only, rng);
    let (value, polished) = seesaw_max(&diff, dims, &start, seesaw_iters);
    // tr[(rho0 - rho1)(rho2 - rho1)] = <ab|diff|ab> - tr[diff rho1].
    let gain = value - diff.hs_inner(rho1.op()).expect("same dims");
    if gain > 0.0 {
        Some(polished)
    } else {
        None
    }
}

/// Minimize the distance to `rho0` along the segment from `rho1` to `rho2`.
///
/// The squared distance is quadratic in the mixing weight, so the minimizer
/// has the closed form `t* = tr[(rho0-rho1)(rho2-rho1)] / tr[(rho2-rho1)^2]`,
/// clamped to [0, 1].
pub fn line_minimize(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<(f64, DensityMatrix)> {
    let step = rho2.op() - rho1.op();
    let denom = step.hs_norm_sq();
    if denom < DEGENERATE_TRIAL_TOL {
        return Err(Error::DegenerateTrial(denom));
    }
    let numer = (rho0.op() - rho1.op()).hs_inner(&step)?;
    let t = (numer / denom).clamp(0.0, 1.0);
    let mixed = &rho1.op().scale(1.0 - t) + &rho2.op().scale(t);
    Ok((t, DensityMatrix::trusted(mixed)))
}

/// Run the projection loop from the maximally mixed state until a halt
/// condition fires.
pub fn run(rho0: &DensityMatrix, dims: BipartiteDims, cfg: &GilbertConfig) -> Result<GilbertState> {
    run_labeled(rho0, dims, cfg, "custom")
}

pub fn run_labeled(
    rho0: &DensityMatrix,
    dims: BipartiteDims,
    cfg: &GilbertConfig,
    label: &str,
) -> Result<GilbertState> {
    cfg.validate()?;
    if rho0.dim() != dims.total() {
        return Err(Error::DimMismatch(rho0.dim(), dims.total()));
    }
    let mut state = GilbertState::new(rho0.clone(), dims, cfg.seed, label.to_string());
    advance(&mut state, cfg)?;
    Ok(state)
}

/// Continue a (fresh or checkpointed) run until a halt condition fires.
///
/// Budgets are totals: a resumed state with 500 corrections done and
/// `max_corrections = 1000` performs 500 more. With the time limit left at
/// infinity, a resumed run reproduces the uninterrupted trace exactly.
pub fn advance(state: &mut GilbertState, cfg: &GilbertConfig) -> Result<()> {
    cfg.validate()?;
    let started = Instant::now();
    let base_elapsed = state.elapsed_seconds;
    let mut current_sq = state.rho0.hs_distance(state.rho1.op())?.powi(2);
    if state.trace.points.is_empty() {
        state.trace.points.push((0, current_sq));
    }
    state.halt = None;

    let halt = loop {
        if state.trace.corrections_done >= cfg.max_corrections {
            break HaltReason::Corrections;
        }
        if state.trace.trials_used >= cfg.max_trials {
            break HaltReason::Trials;
        }
        if base_elapsed + started.elapsed().as_secs_f64() >= cfg.max_seconds {
            break HaltReason::TimeLimit;
        }

        state.trace.trials_used += 1;
        let Some(trial) = propose_trial(
            &state.rho0,
            &state.rho1,
            state.dims,
            cfg.real_only,
            cfg.seesaw_iters,
            &mut state.rng,
        ) else {
            continue;
        };
        let rho2 = trial.projector();
        let (_, updated) = match line_minimize(&state.rho0, &state.rho1, &rho2) {
            Ok(res) => res,
            Err(Error::DegenerateTrial(_)) => continue,
            Err(e) => return Err(e),
        };
        let new_sq = state.rho0.hs_distance(updated.op())?.powi(2);
        if new_sq > current_sq + MONOTONICITY_SLACK {
            return Err(Error::Numerical(format!(
                "squared distance increased from {current_sq:.6e} to {new_sq:.6e} at correction {}",
                state.trace.corrections_done + 1
            )));
        }
        state.rho1 = updated;
        current_sq = new_sq;
        state.trace.corrections_done += 1;
        if state.trace.corrections_done.is_multiple_of(cfg.log_every) {
            state.trace.points.push((state.trace.corrections_done, current_sq));
        }
    };

    state.elapsed_seconds = base_elapsed + started.elapsed().as_secs_f64();
    state.halt = Some(halt);
    let last_logged = state.trace.points.last().map(|p| p.0);
    if last_logged != Some(state.trace.corrections_done) {
        state
            .trace
            .points
            .push((state.trace.corrections_done, current_sq));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::hs_inner;
    use crate::tiles::{build_state, enumerate_layouts};
    use rand::{Rng, SeedableRng};

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    fn basis_product(dims: BipartiteDims) -> ProductVector {
        let mut a = vec![Complex64::ZERO; dims.d1()];
        let mut b = vec![Complex64::ZERO; dims.d2()];
        a[0] = Complex64::ONE;
        b[0] = Complex64::ONE;
        ProductVector::new(a, b).unwrap()
    }

    #[test]
    fn seesaw_finds_rank_one_product_target() {
        let dims = dims22();
        let target = basis_product(dims);
        let m = target.projector().op().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Any start that is not orthogonal to the target converges to it.
        let start = random_product_vector(dims, false, &mut rng);
        let (value, arg) = seesaw_max(&m, dims, &start, 200);
        assert!((value - 1.0).abs() < 1e-10);
        assert!((arg.first()[0].norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn seesaw_on_identity_is_one() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        let m = HermitianOp::identity(9);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let start = random_product_vector(dims, false, &mut rng);
        let (value, _) = seesaw_max(&m, dims, &start, 50);
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seesaw_values_monotone_in_iteration_budget() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let state = build_state(&layout).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let start = random_product_vector(dims, false, &mut rng);
        let mut prev = f64::NEG_INFINITY;
        for iters in 1..=12 {
            let (value, _) = seesaw_max(state.rho.op(), dims, &start, iters);
            assert!(value >= prev - 1e-13, "value dropped at budget {iters}");
            prev = value;
        }
    }

    #[test]
    fn seesaw_multistart_matches_sampling_oracle() {
        // Oracle: a ~10^7-draw random product search (scatter plus zoom, no
        // eigensolver). Multi-start seesaw from 10^4 starts must agree with
        // it to 1e-4.
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let state = build_state(&layout).unwrap();
        let m = state.rho.op();

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (seesaw_value, _) = seesaw_multistart(m, dims, 10_000, 200, false, &mut rng);

        let best = crate::test_support::sampled_product_max(m, dims, 18);
        assert!(
            (seesaw_value - best).abs() < 1e-4,
            "seesaw {seesaw_value} vs sampling oracle {best}"
        );
    }

    #[test]
    fn propose_rejects_everything_at_fixed_point() {
        let dims = dims22();
        let rho = DensityMatrix::maximally_mixed(4);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            assert!(propose_trial(&rho, &rho, dims, false, 50, &mut rng).is_none());
        }
    }

    #[test]
    fn run_counts_rejections_as_trials() {
        let dims = dims22();
        let rho = DensityMatrix::maximally_mixed(4);
        let cfg = GilbertConfig {
            max_trials: 25,
            max_corrections: 10,
            ..Default::default()
        };
        let state = run(&rho, dims, &cfg).unwrap();
        assert_eq!(state.trace().trials_used, 25);
        assert_eq!(state.trace().corrections_done, 0);
        assert_eq!(state.halt_reason(), Some(HaltReason::Trials));
    }

    #[test]
    fn line_minimize_hits_product_target_exactly() {
        let dims = dims22();
        let target = basis_product(dims).projector();
        let rho1 = DensityMatrix::maximally_mixed(4);
        let (t, updated) = line_minimize(&target, &rho1, &target).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert!(updated.hs_distance(target.op()).unwrap() < 1e-12);
    }

    #[test]
    fn line_minimize_rejects_degenerate_step() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            line_minimize(&rho, &rho, &rho),
            Err(Error::DegenerateTrial(_))
        ));
    }

    #[test]
    fn line_minimize_matches_scalar_scan() {
        // Oracle: 10^4-point scan of D(rho0, (1-t) rho1 + t rho2) over [0, 1].
        let dims = BipartiteDims::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let rho0 = random_mixed_state(9, &mut rng);
            let rho1 = random_mixed_state(9, &mut rng);
            let rho2 = random_product_vector(dims, false, &mut rng).projector();
            let (t_star, _) = match line_minimize(&rho0, &rho1, &rho2) {
                Ok(r) => r,
                Err(Error::DegenerateTrial(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let mut best_t = 0.0;
            let mut best_d = f64::INFINITY;
            let steps = 10_000;
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                let mix = &rho1.op().scale(1.0 - t) + &rho2.op().scale(t);
                let d = rho0.hs_distance(&mix).unwrap();
                if d < best_d {
                    best_d = d;
                    best_t = t;
                }
            }
            assert!(
                (t_star - best_t).abs() <= 1.0e-4,
                "closed form {t_star} vs scan {best_t}"
            );
        }
    }

    pub(crate) fn random_mixed_state(dim: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        // Wishart construction: G G^dag / tr, full rank almost surely.
        use crate::herm::random_local_state;
        let mut acc = HermitianOp::zeros(dim);
        for _ in 0..dim {
            let v = random_local_state(dim, false, rng);
            let w: f64 = rng.random::<f64>() + 0.1;
            acc = &acc + &HermitianOp::outer(&v).scale(w);
        }
        DensityMatrix::new(acc.scale(1.0 / acc.trace())).unwrap()
    }

    #[test]
    fn separable_reference_converges() {
        // The trial cap doubles as the halt: once the approximant collapses
        // onto the target, no further correction is possible.
        let dims = BipartiteDims::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let target = random_product_vector(dims, false, &mut rng).projector();
        let cfg = GilbertConfig {
            max_corrections: 2000,
            max_trials: 300_000,
            seed: 7,
            ..Default::default()
        };
        let state = run(&target, dims, &cfg).unwrap();
        assert!(
            state.final_distance() < 1e-3,
            "distance {} after {} corrections",
            state.final_distance(),
            state.trace().corrections_done
        );
    }

    #[test]
    fn bound_entangled_plateau_stays_positive() {
        // Entanglement shows as a gap: the projection stalls orders of
        // magnitude above the level a separable reference reaches.
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let upb = build_state(&layout).unwrap();
        let cfg = GilbertConfig {
            max_corrections: 2000,
            seed: 23,
            real_only: true,
            ..Default::default()
        };
        let state = run(&upb.rho, dims, &cfg).unwrap();
        assert!(
            state.final_distance() > 0.03,
            "plateau {} collapsed",
            state.final_distance()
        );
    }

    #[test]
    fn trace_is_monotone_and_respects_logging() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let upb = build_state(&layout).unwrap();
        let cfg = GilbertConfig {
            max_corrections: 730,
            seed: 11,
            real_only: true,
            ..Default::default()
        };
        let state = run(&upb.rho, dims, &cfg).unwrap();
        assert_eq!(state.halt_reason(), Some(HaltReason::Corrections));
        assert_eq!(state.trace().corrections_done, 730);
        state.trace().check(cfg.log_every).unwrap();
        // 0, 50, ..., 700, then the final point at 730.
        assert_eq!(state.trace().points.len(), 16);
        assert_eq!(state.trace().points.last().unwrap().0, 730);
    }

    #[test]
    fn identical_seed_reproduces_trace() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let upb = build_state(&layout).unwrap();
        let cfg = GilbertConfig {
            max_corrections: 300,
            seed: 13,
            ..Default::default()
        };
        let a = run(&upb.rho, dims, &cfg).unwrap();
        let b = run(&upb.rho, dims, &cfg).unwrap();
        assert_eq!(a.trace().points, b.trace().points);
        assert_eq!(a.trace().trials_used, b.trace().trials_used);
    }

    #[test]
    fn approximant_stays_unit_trace() {
        let dims = BipartiteDims::new(3, 3).unwrap();
        let layout = enumerate_layouts(dims).unwrap()[0];
        let upb = build_state(&layout).unwrap();
        let cfg = GilbertConfig {
            max_corrections: 500,
            seed: 5,
            ..Default::default()
        };
        let state = run(&upb.rho, dims, &cfg).unwrap();
        assert!((state.approximant().trace() - 1.0).abs() < 1e-10);
        assert!(state.approximant().min_eigenvalue() > -1e-10);
        // The improvement direction keeps positive overlap with the gap.
        let gap = upb.rho.op() - state.approximant().op();
        assert!(hs_inner(&gap, &gap).unwrap() > 0.0);
    }
}
