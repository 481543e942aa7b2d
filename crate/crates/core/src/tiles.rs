//! Five-tile pinwheel layouts and the bound entangled states they generate.
//!
//! A layout is fixed by the grid dimensions and the central tile bounds
//! `(l, n), (m, o)` with `1 < l <= n < d1` and `1 < m <= o < d2` (1-based,
//! matching the usual presentation). The four outer tiles wind around the
//! central one with a fixed chirality:
//!
//! ```text
//!   Top    = [1 .. l-1] x [1 .. o]
//!   Right  = [1 .. n]   x [o+1 .. d2]
//!   Bottom = [n+1 .. d1] x [m .. d2]
//!   Left   = [l .. d1]  x [1 .. m-1]
//! ```
//!
//! The five rectangles always partition the grid. Each tile contributes its
//! subspace minus the uniform superposition over its cells to the kernel;
//! together with the full-grid uniform superposition (the stopper) this
//! leaves a rank-4 supported, PPT, entangled state. The mirrored chirality
//! is locally unitarily equivalent and not enumerated.

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gilbert::seesaw_multistart;
use crate::herm::{
    partial_transpose, BipartiteDims, Complex64, DensityMatrix, HermitianOp, DERIVED_TOL,
};

/// Number of tiles in the pinwheel covering.
pub const TILE_COUNT: usize = 5;

/// Axis-aligned rectangle of grid cells, 1-based inclusive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub r1: usize,
    pub r2: usize,
    pub c1: usize,
    pub c2: usize,
}

impl Rect {
    pub fn new(r1: usize, r2: usize, c1: usize, c2: usize) -> Result<Self> {
        if r1 == 0 || c1 == 0 || r1 > r2 || c1 > c2 {
            return Err(Error::RectOutOfBounds(format!(
                "rows [{r1}..{r2}], cols [{c1}..{c2}]"
            )));
        }
        Ok(Self { r1, r2, c1, c2 })
    }

    pub fn area(&self) -> usize {
        (self.r2 - self.r1 + 1) * (self.c2 - self.c1 + 1)
    }

    /// Grid cells as 1-based (row, col) pairs, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.r1..=self.r2).flat_map(move |i| (self.c1..=self.c2).map(move |j| (i, j)))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (self.r1..=self.r2).contains(&i) && (self.c1..=self.c2).contains(&j)
    }

    fn check_in_grid(&self, dims: BipartiteDims) -> Result<()> {
        if self.r2 > dims.d1() || self.c2 > dims.d2() {
            return Err(Error::RectOutOfBounds(format!(
                "rows [{}..{}], cols [{}..{}] in {}x{} grid",
                self.r1,
                self.r2,
                self.c1,
                self.c2,
                dims.d1(),
                dims.d2()
            )));
        }
        Ok(())
    }
}

/// Central-tile parameterization of one pinwheel layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileLayout {
    dims: BipartiteDims,
    l: usize,
    n: usize,
    m: usize,
    o: usize,
}

impl TileLayout {
    pub fn new(dims: BipartiteDims, l: usize, n: usize, m: usize, o: usize) -> Result<Self> {
        if !(1 < l && l <= n && n < dims.d1()) {
            return Err(Error::InvalidLayout(format!(
                "row bounds must satisfy 1 < l <= n < d1 (got l={l}, n={n}, d1={})",
                dims.d1()
            )));
        }
        if !(1 < m && m <= o && o < dims.d2()) {
            return Err(Error::InvalidLayout(format!(
                "column bounds must satisfy 1 < m <= o < d2 (got m={m}, o={o}, d2={})",
                dims.d2()
            )));
        }
        Ok(Self { dims, l, n, m, o })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn row_bounds(&self) -> (usize, usize) {
        (self.l, self.n)
    }

    pub fn col_bounds(&self) -> (usize, usize) {
        (self.m, self.o)
    }

    pub fn central_area(&self) -> usize {
        (self.n - self.l + 1) * (self.o - self.m + 1)
    }

    /// Canonical name `d1xd2-l.n-m.o`, used in filenames, CSV rows and CLI
    /// arguments.
    pub fn name(&self) -> String {
        format!(
            "{}x{}-{}.{}-{}.{}",
            self.dims.d1(),
            self.dims.d2(),
            self.l,
            self.n,
            self.m,
            self.o
        )
    }

    pub fn parse(name: &str) -> Result<Self> {
        let bad = || Error::InvalidLayout(format!("cannot parse layout name `{name}`"));
        let mut parts = name.split('-');
        let dims_part = parts.next().ok_or_else(bad)?;
        let rows_part = parts.next().ok_or_else(bad)?;
        let cols_part = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (d1, d2) = dims_part.split_once('x').ok_or_else(bad)?;
        let (l, n) = rows_part.split_once('.').ok_or_else(bad)?;
        let (m, o) = cols_part.split_once('.').ok_or_else(bad)?;
        let parse = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let dims = BipartiteDims::new(parse(d1)?, parse(d2)?)?;
        Self::new(dims, parse(l)?, parse(n)?, parse(m)?, parse(o)?)
    }
}

/// All layouts for the given grid, lexicographic in `(l, n, m, o)`.
///
/// The count is `[(d1-1)(d1-2)/2] * [(d2-1)(d2-2)/2]`: 1, 9, 36, 100 for
/// square grids of side 3, 4, 5, 6.
pub fn enumerate_layouts(dims: BipartiteDims) -> Result<Vec<TileLayout>> {
    if dims.d1() < 3 || dims.d2() < 3 {
        return Err(Error::InvalidLayout(format!(
            "no valid central tile in a {}x{} grid; both sides must be at least 3",
            dims.d1(),
            dims.d2()
        )));
    }
    let mut out = Vec::new();
    for l in 2..dims.d1() {
        for n in l..dims.d1() {
            for m in 2..dims.d2() {
                for o in m..dims.d2() {
                    out.push(TileLayout { dims, l, n, m, o });
                }
            }
        }
    }
    Ok(out)
}

/// The five tiles, ordered Central, Top, Right, Bottom, Left.
pub fn pinwheel(layout: &TileLayout) -> [Rect; TILE_COUNT] {
    let (d1, d2) = (layout.dims.d1(), layout.dims.d2());
    let (l, n, m, o) = (layout.l, layout.n, layout.m, layout.o);
    [
        Rect { r1: l, r2: n, c1: m, c2: o },
        Rect { r1: 1, r2: l - 1, c1: 1, c2: o },
        Rect { r1: 1, r2: n, c1: o + 1, c2: d2 },
        Rect { r1: n + 1, r2: d1, c1: m, c2: d2 },
        Rect { r1: l, r2: d1, c1: 1, c2: m - 1 },
    ]
}

/// Projector onto the span of the computational basis states in `rect`.
pub fn tile_projector(rect: &Rect, dims: BipartiteDims) -> Result<HermitianOp> {
    rect.check_in_grid(dims)?;
    let total = dims.total();
    let mut op = HermitianOp::zeros(total);
    for (i, j) in rect.cells() {
        let idx = dims.composite(i - 1, j - 1);
        op = &op + &basis_projector(total, idx);
    }
    Ok(op)
}

/// Rank-one projector onto the uniform superposition of the cells in `rect`;
/// for the full grid this is the stopper.
pub fn tile_sym_projector(rect: &Rect, dims: BipartiteDims) -> Result<HermitianOp> {
    rect.check_in_grid(dims)?;
    let total = dims.total();
    let amp = 1.0 / (rect.area() as f64).sqrt();
    let mut v = vec![Complex64::ZERO; total];
    for (i, j) in rect.cells() {
        v[dims.composite(i - 1, j - 1)] = Complex::new(amp, 0.0);
    }
    Ok(HermitianOp::outer(&v))
}

fn basis_projector(dim: usize, k: usize) -> HermitianOp {
    let mut v = vec![Complex64::ZERO; dim];
    v[k] = Complex64::ONE;
    HermitianOp::outer(&v)
}

/// A pinwheel bound entangled state: the unit-trace normalization of the
/// rank-4 projector complementary to the tile kernel.
#[derive(Debug, Clone)]
pub struct UpbState {
    pub layout: TileLayout,
    pub rho: DensityMatrix,
    /// Rank-4 projector onto the support of `rho`.
    pub support: HermitianOp,
}

impl UpbState {
    pub fn dims(&self) -> BipartiteDims {
        self.layout.dims()
    }
}

/// Rank of the support projector; one less than the tile count.
pub const SUPPORT_RANK: usize = TILE_COUNT - 1;

/// Build the state for a layout.
///
/// The support is `1 - Pi_sym - sum_k (Pi^(k) - Pi^(k)_sym)`; because the
/// tiles partition the grid this collapses to `sum_k Pi^(k)_sym - Pi_sym`,
/// a rank-4 projector. The state is normalized to unit trace by dividing by
/// the rank (the bare `1/K` prefactor would leave trace `(K-1)/K`).
pub fn build_state(layout: &TileLayout) -> Result<UpbState> {
    let dims = layout.dims();
    let total = dims.total();
    let full_grid = Rect::new(1, dims.d1(), 1, dims.d2())?;
    let stopper = tile_sym_projector(&full_grid, dims)?;

    let mut support = &HermitianOp::identity(total) - &stopper;
    for rect in pinwheel(layout) {
        let tile = tile_projector(&rect, dims)?;
        let tile_sym = tile_sym_projector(&rect, dims)?;
        support = &support - &(&tile - &tile_sym);
    }

    let idem = support.square().hs_distance(&support)?;
    if idem > DERIVED_TOL {
        return Err(Error::ConstructionFault(format!(
            "support is not a projector: ||P^2 - P|| = {idem:.3e}"
        )));
    }
    let rank = support.projector_rank();
    if rank != SUPPORT_RANK {
        return Err(Error::ConstructionFault(format!(
            "support has rank {rank}, expected {SUPPORT_RANK}"
        )));
    }

    let rho = DensityMatrix::new(support.scale(1.0 / SUPPORT_RANK as f64))
        .map_err(|e| Error::ConstructionFault(e.to_string()))?;
    Ok(UpbState {
        layout: *layout,
        rho,
        support,
    })
}

/// Structural validation report for a constructed state.
#[derive(Debug, Clone)]
pub struct StateValidation {
    pub rank: usize,
    pub ppt_min_eigenvalue: f64,
    /// `||rho * Pi_sym||_HS`.
    pub stopper_residual: f64,
    /// `||rho * (Pi^(k) - Pi^(k)_sym)||_HS` per tile.
    pub tile_residuals: Vec<f64>,
    /// Seesaw-estimated maximum of `<ab|P|ab>` over product states, where `P`
    /// is the support projector; strictly below 1 iff the range contains no
    /// product state within the heuristic's reach.
    pub max_product_overlap: f64,
    pub ppt: bool,
    pub entangled_support: bool,
}

/// Threshold on the product overlap with the support: overlaps above
/// `1 - 1e-3` are treated as a failed entanglement check.
pub const PRODUCT_OVERLAP_MARGIN: f64 = 1e-3;

pub fn validate_state(
    state: &UpbState,
    restarts: u32,
    seesaw_iters: u32,
    rng: &mut ChaCha8Rng,
) -> Result<StateValidation> {
    let dims = state.dims();
    let rank = state.support.projector_rank();
    let pt = partial_transpose(state.rho.op(), dims)?;
    let ppt_min_eigenvalue = pt.min_eigenvalue();

    let full_grid = Rect::new(1, dims.d1(), 1, dims.d2())?;
    let stopper = tile_sym_projector(&full_grid, dims)?;
    let stopper_residual = state.rho.product_hs_norm(&stopper)?;

    let mut tile_residuals = Vec::with_capacity(TILE_COUNT);
    for rect in pinwheel(&state.layout) {
        let removed = &tile_projector(&rect, dims)? - &tile_sym_projector(&rect, dims)?;
        tile_residuals.push(state.rho.product_hs_norm(&removed)?);
    }

    let (max_product_overlap, _) =
        seesaw_multistart(&state.support, dims, restarts, seesaw_iters, false, rng);

    Ok(StateValidation {
        rank,
        ppt_min_eigenvalue,
        stopper_residual,
        tile_residuals,
        max_product_overlap,
        ppt: ppt_min_eigenvalue >= -DERIVED_TOL,
        entangled_support: max_product_overlap < 1.0 - PRODUCT_OVERLAP_MARGIN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::hs_inner;
    use rand::SeedableRng;

    fn square(d: usize) -> BipartiteDims {
        BipartiteDims::new(d, d).unwrap()
    }

    #[test]
    fn enumeration_counts_match_family() {
        for (d, expected) in [(3, 1usize), (4, 9), (5, 36), (6, 100)] {
            let layouts = enumerate_layouts(square(d)).unwrap();
            assert_eq!(layouts.len(), expected, "d = {d}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let layouts = enumerate_layouts(square(4)).unwrap();
        let keys: Vec<_> = layouts
            .iter()
            .map(|t| (t.l, t.n, t.m, t.o))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn enumeration_rejects_small_grids() {
        assert!(enumerate_layouts(BipartiteDims::new(2, 5).unwrap()).is_err());
        assert!(enumerate_layouts(BipartiteDims::new(5, 2).unwrap()).is_err());
    }

    #[test]
    fn three_by_three_is_unique_layout() {
        let layouts = enumerate_layouts(square(3)).unwrap();
        assert_eq!(layouts.len(), 1);
        let t = layouts[0];
        assert_eq!((t.l, t.n, t.m, t.o), (2, 2, 2, 2));
        assert_eq!(t.name(), "3x3-2.2-2.2");
    }

    #[test]
    fn layout_name_round_trip() {
        for d in 3..=6 {
            for layout in enumerate_layouts(square(d)).unwrap() {
                assert_eq!(TileLayout::parse(&layout.name()).unwrap(), layout);
            }
        }
    }

    #[test]
    fn layout_parse_rejects_garbage() {
        assert!(TileLayout::parse("3x3").is_err());
        assert!(TileLayout::parse("3x3-1.2-2.2").is_err());
        assert!(TileLayout::parse("3x3-2.2-2.9").is_err());
    }

    #[test]
    fn pinwheel_areas_three_by_three() {
        let layout = enumerate_layouts(square(3)).unwrap()[0];
        let areas: Vec<usize> = pinwheel(&layout).iter().map(Rect::area).collect();
        assert_eq!(areas, vec![1, 2, 2, 2, 2]);
        assert_eq!(areas.iter().sum::<usize>(), 9);
    }

    #[test]
    fn pinwheel_central_area_example() {
        let layout = TileLayout::new(square(4), 2, 2, 2, 3).unwrap();
        assert_eq!(layout.central_area(), 2);
        assert_eq!(pinwheel(&layout)[0].area(), 2);
    }

    #[test]
    fn pinwheel_partitions_every_grid() {
        for d in 3..=6 {
            for layout in enumerate_layouts(square(d)).unwrap() {
                let tiles = pinwheel(&layout);
                assert_eq!(tiles.iter().map(Rect::area).sum::<usize>(), d * d);
                for i in 1..=d {
                    for j in 1..=d {
                        let hits = tiles.iter().filter(|r| r.contains(i, j)).count();
                        assert_eq!(hits, 1, "cell ({i},{j}) of {} covered {hits} times", layout.name());
                    }
                }
            }
        }
    }

    #[test]
    fn no_proper_tile_union_is_a_rectangle() {
        // Unextendibility of the covering: merging two, three, or four tiles
        // never yields an axis-aligned rectangle (the full union is the grid
        // itself and does not count).
        for d in 3..=6 {
            for layout in enumerate_layouts(square(d)).unwrap() {
                let tiles = pinwheel(&layout);
                for mask in 1u32..31 {
                    if mask.count_ones() < 2 {
                        continue;
                    }
                    let members: Vec<&Rect> = (0..5)
                        .filter(|k| mask & (1 << k) != 0)
                        .map(|k| &tiles[k])
                        .collect();
                    let area: usize = members.iter().map(|r| r.area()).sum();
                    let r1 = members.iter().map(|r| r.r1).min().unwrap();
                    let r2 = members.iter().map(|r| r.r2).max().unwrap();
                    let c1 = members.iter().map(|r| r.c1).min().unwrap();
                    let c2 = members.iter().map(|r| r.c2).max().unwrap();
                    let bounding = (r2 - r1 + 1) * (c2 - c1 + 1);
                    assert_ne!(
                        area,
                        bounding,
                        "{}: tile subset {mask:05b} merges into a rectangle",
                        layout.name()
                    );
                }
            }
        }
    }

    #[test]
    fn tile_projector_full_grid_is_identity() {
        let dims = square(3);
        let rect = Rect::new(1, 3, 1, 3).unwrap();
        let p = tile_projector(&rect, dims).unwrap();
        assert!(p.hs_distance(&HermitianOp::identity(9)).unwrap() < 1e-14);
    }

    #[test]
    fn tile_projector_single_cell() {
        let dims = square(3);
        let rect = Rect::new(2, 2, 2, 2).unwrap();
        let p = tile_projector(&rect, dims).unwrap();
        assert!((p.trace() - 1.0).abs() < 1e-15);
        assert!((p.entry(4, 4).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tile_projector_trace_is_area() {
        let dims = square(5);
        let rect = Rect::new(2, 4, 3, 5).unwrap();
        let p = tile_projector(&rect, dims).unwrap();
        assert!((p.trace() - rect.area() as f64).abs() < 1e-13);
    }

    #[test]
    fn tile_projector_rejects_out_of_grid() {
        let dims = square(3);
        let rect = Rect::new(1, 4, 1, 2).unwrap();
        assert!(tile_projector(&rect, dims).is_err());
    }

    #[test]
    fn sym_projector_single_cell_equals_tile_projector() {
        let dims = square(3);
        let rect = Rect::new(2, 2, 2, 2).unwrap();
        let p = tile_projector(&rect, dims).unwrap();
        let s = tile_sym_projector(&rect, dims).unwrap();
        assert!(p.hs_distance(&s).unwrap() < 1e-14);
    }

    #[test]
    fn sym_projector_has_unit_trace() {
        let dims = square(4);
        let rect = Rect::new(1, 2, 2, 4).unwrap();
        let s = tile_sym_projector(&rect, dims).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn stopper_has_uniform_entries() {
        let dims = square(3);
        let rect = Rect::new(1, 3, 1, 3).unwrap();
        let s = tile_sym_projector(&rect, dims).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let z = s.entry(i, j);
                assert!((z.re - 1.0 / 9.0).abs() < 1e-15 && z.im == 0.0);
            }
        }
    }

    #[test]
    fn sym_projector_below_tile_projector() {
        let dims = square(4);
        let rect = Rect::new(2, 3, 2, 3).unwrap();
        let p = tile_projector(&rect, dims).unwrap();
        let s = tile_sym_projector(&rect, dims).unwrap();
        // Pi_sym^(k) <= Pi^(k): their difference is PSD.
        assert!((&p - &s).min_eigenvalue() > -1e-12);
    }

    #[test]
    fn built_state_satisfies_invariants() {
        for d in 3..=4 {
            for layout in enumerate_layouts(square(d)).unwrap() {
                let state = build_state(&layout).unwrap();
                assert!((state.rho.trace() - 1.0).abs() < 1e-10);
                assert_eq!(state.support.projector_rank(), 4);
                assert!(state.rho.min_eigenvalue() > -1e-10);

                let dims = layout.dims();
                let full = Rect::new(1, d, 1, d).unwrap();
                let stopper = tile_sym_projector(&full, dims).unwrap();
                assert!(hs_inner(state.rho.op(), &stopper).unwrap().abs() < 1e-12);
                for rect in pinwheel(&layout) {
                    let tile = tile_projector(&rect, dims).unwrap();
                    let sym = tile_sym_projector(&rect, dims).unwrap();
                    assert!(
                        state.rho.product_hs_norm(&(&tile - &sym)).unwrap() < 1e-12,
                        "tile residual too large for {}",
                        layout.name()
                    );
                }

                let pt = partial_transpose(state.rho.op(), dims).unwrap();
                assert!(pt.min_eigenvalue() > -1e-10, "{} is not PPT", layout.name());
            }
        }
    }

    #[test]
    fn validation_report_three_by_three() {
        let layout = enumerate_layouts(square(3)).unwrap()[0];
        let state = build_state(&layout).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let report = validate_state(&state, 1000, 200, &mut rng).unwrap();
        assert_eq!(report.rank, 4);
        assert!(report.ppt);
        assert!(report.stopper_residual < 1e-12);
        assert!(report.tile_residuals.iter().all(|&r| r < 1e-12));
        assert!(
            report.entangled_support,
            "max product overlap {} not below threshold",
            report.max_product_overlap
        );
        // The overlap is a genuine maximum strictly inside (0, 1).
        assert!(report.max_product_overlap > 0.5);
    }
}
