//! Entanglement witnesses and hyperplane distances.
//!
//! Both witness families here share one shape: take an operator `M` whose
//! mean value separates the reference state from the product states, find
//! `lambda = max <ab|M|ab>` over product states, and form `W = lambda 1 - M`.
//! Then `tr(W sigma) >= 0` for every separable `sigma` (up to the heuristic
//! quality of `lambda`), with equality at the maximizer, and the witness
//! detects the reference iff `tr(W rho0) < 0`.
//!
//! - The projection-based witness uses `M = rho0 - rho1`, the direction from
//!   the separable approximant to the reference. Validity is not automatic:
//!   a poor approximant tilts the hyperplane until the reference crosses it.
//! - The support-projector witness uses `M = rho0` itself, i.e. the weight is
//!   the maximal mean value of the state in a separable state.
//!
//! The distance from the reference to a witness's hyperplane needs the
//! traceless part of `W` (the hyperplane normal anchored at the origin of
//! trace-zero directions): `D = |tr M~ (rho0 - rho')| / ||M~||` with
//! `M~ = W - (tr W / D) 1` and `rho'` the saturating product state. The
//! distance is invariant under positive scaling of the witness and under
//! shifts proportional to the identity.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gilbert::seesaw_multistart;
use crate::herm::{
    product_projector, traceless_part, BipartiteDims, DensityMatrix, HermitianOp, ProductVector,
};
use crate::tiles::UpbState;

/// A witness is reported valid when its mean on the reference is below this.
pub const VALIDITY_TOL: f64 = 1e-10;
/// `||rho1 - rho0||` below this makes the projection witness degenerate.
pub const DEGENERACY_GUARD: f64 = 1e-8;
/// Allowed residual of the saturation condition `tr(W rho') = 0`.
pub const SATURATION_TOL: f64 = 1e-9;
/// Traceless parts with HS norm below this define no hyperplane.
pub const NORMAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Gilbert,
    Bgr,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::Gilbert => "gilbert",
            WitnessKind::Bgr => "bgr",
        }
    }
}

/// A constructed witness together with everything needed to re-audit it.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub witness: HermitianOp,
    /// The product-state maximum used as the identity weight.
    pub lambda: f64,
    /// Product state achieving `lambda`; saturates `tr(W rho') = 0`.
    pub saturator: ProductVector,
    /// `tr(W rho0)`.
    pub value_on_rho0: f64,
    pub valid: bool,
    pub hyperplane_distance: f64,
}

/// Metadata record written next to each exported witness.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessMetadata {
    pub layout: String,
    pub kind: String,
    pub lambda: f64,
    pub value_on_rho0: f64,
    pub hyperplane_distance: f64,
    pub valid: bool,
    pub seed: u64,
}

impl WitnessReport {
    pub fn metadata(&self, layout: &str, seed: u64) -> WitnessMetadata {
        WitnessMetadata {
            layout: layout.to_string(),
            kind: self.kind.as_str().to_string(),
            lambda: self.lambda,
            value_on_rho0: self.value_on_rho0,
            hyperplane_distance: self.hyperplane_distance,
            valid: self.valid,
            seed,
        }
    }
}

/// Best product-state mean value of `M` over `restarts` seesaw ascents.
///
/// A heuristic global maximum: the returned value is a lower bound on the
/// true maximum, so callers that use it as a witness weight over-trust it by
/// exactly that gap. Restart counts are chosen accordingly.
pub fn lambda_max(
    m: &HermitianOp,
    dims: BipartiteDims,
    restarts: u32,
    seesaw_iters: u32,
    rng: &mut ChaCha8Rng,
) -> (f64, ProductVector) {
    seesaw_multistart(m, dims, restarts, seesaw_iters, false, rng)
}

/// Witness from a projection run: `W = rho1 - rho0 + lambda 1` with
/// `lambda = max <ab|rho0 - rho1|ab>`.
///
/// An invalid witness (`tr(W rho0) >= 0`) is not an error; it is reported
/// with `valid = false`. A vanishing gap `rho1 ~ rho0` yields a degenerate
/// report flagged invalid.
pub fn gilbert_witness(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    dims: BipartiteDims,
    restarts: u32,
    seesaw_iters: u32,
    rng: &mut ChaCha8Rng,
) -> Result<WitnessReport> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimMismatch(rho0.dim(), rho1.dim()));
    }
    if rho0.dim() != dims.total() {
        return Err(Error::DimMismatch(rho0.dim(), dims.total()));
    }
    let gap = rho0.op() - rho1.op();
    let degenerate = gap.hs_norm() < DEGENERACY_GUARD;
    let (lambda, saturator) = lambda_max(&gap, dims, restarts, seesaw_iters, rng);
    let witness = &HermitianOp::identity(rho0.dim()).scale(lambda) - &gap;
    let value_on_rho0 = witness.hs_inner(rho0.op())?;
    let valid = !degenerate && value_on_rho0 < -VALIDITY_TOL;
    let hyperplane_distance = if degenerate {
        0.0
    } else {
        hyperplane_distance(&witness, rho0, &saturator)?
    };
    Ok(WitnessReport {
        kind: WitnessKind::Gilbert,
        witness,
        lambda,
        saturator,
        value_on_rho0,
        valid,
        hyperplane_distance,
    })
}

/// Support-projector witness: `W' = lambda 1 - rho0` with `lambda` the
/// maximal mean value of the state in a separable state.
pub fn bgr_witness(
    state: &UpbState,
    restarts: u32,
    seesaw_iters: u32,
    rng: &mut ChaCha8Rng,
) -> Result<WitnessReport> {
    let dims = state.dims();
    let rho0 = &state.rho;
    let (lambda, saturator) = lambda_max(rho0.op(), dims, restarts, seesaw_iters, rng);
    let witness = &HermitianOp::identity(rho0.dim()).scale(lambda) - rho0.op();
    let value_on_rho0 = witness.hs_inner(rho0.op())?;
    let valid = value_on_rho0 < -VALIDITY_TOL;
    let hyperplane_distance = hyperplane_distance(&witness, rho0, &saturator)?;
    Ok(WitnessReport {
        kind: WitnessKind::Bgr,
        witness,
        lambda,
        saturator,
        value_on_rho0,
        valid,
        hyperplane_distance,
    })
}

/// Distance from `rho0` to the witness hyperplane through the saturating
/// product state.
pub fn hyperplane_distance(
    witness: &HermitianOp,
    rho0: &DensityMatrix,
    saturator: &ProductVector,
) -> Result<f64> {
    let rho_prime = product_projector(saturator);
    let saturation = witness.hs_inner(rho_prime.op())?;
    if saturation.abs() > SATURATION_TOL {
        return Err(Error::SaturationViolated(saturation));
    }
    let normal = traceless_part(witness);
    let norm = normal.hs_norm();
    if norm < NORMAL_FLOOR {
        return Err(Error::HyperplaneUndefined(norm));
    }
    let displacement = rho0.op() - rho_prime.op();
    Ok(normal.hs_inner(&displacement)?.abs() / norm)
}
