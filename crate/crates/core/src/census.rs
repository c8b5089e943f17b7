//! Plain and certified nodal-domain counts on a square cell grid.
//!
//! The window is a disk `B(center, R)` sampled by square cells of side `h`
//! centred at `center + (i·h, j·h)`. A cell is *inside* when its centre lies
//! in the disk and *interior* when it and its eight neighbours are inside.
//!
//! A cell is certified positive when `f(c) > ε + L·h·√2/2` at its centre `c`,
//! `L` being the ensemble's Lipschitz bound. Then `f + g > 0` on the closed
//! cell for every perturbation with `‖g‖∞ ≤ ε`, and symmetrically for
//! negative cells.
//!
//! Two cells straddling a sign change can never both be certified, since
//! that would need a jump larger than the Lipschitz bound allows. So a
//! certified domain is built from the 4-connected components of the cells
//! *not* certified with the opposite sign. Such a component is counted when
//! it holds at least one cell certified with its own sign, every 8-neighbour
//! outside it is certified opposite, and all its cells are interior. For any
//! admissible `g`, the certified cell lies in a domain of `f + g` that cannot
//! cross the surrounding ring, so the domain is compact. Distinct components
//! are separated by rings, so they give distinct domains.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::Vec2;
use crate::math;
use crate::unionfind::{label_components, NO_LABEL};
use crate::wave::WaveEnsemble;
use crate::{Error, Result};

/// Largest admissible `2·half_width/step`.
pub const MAX_CELLS_PER_AXIS: f64 = 2e4;

/// Centre of a disk window, its radius and the cell side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub center: Vec2,
    pub half_width: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(center: Vec2, half_width: f64, step: f64) -> Result<Self> {
        let spec = GridSpec {
            center,
            half_width,
            step,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() || !self.half_width.is_finite() || !self.step.is_finite() {
            return Err(Error::NonFinite("grid parameters"));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidParameter("step must be > 0"));
        }
        if !(self.half_width > 0.0) {
            return Err(Error::InvalidParameter("half_width must be > 0"));
        }
        let cells = 2.0 * self.half_width / self.step;
        if cells > MAX_CELLS_PER_AXIS {
            return Err(Error::GridTooLarge {
                cells_per_axis: cells,
                max: MAX_CELLS_PER_AXIS,
            });
        }
        Ok(())
    }

    /// Number of cells on each side of the centre cell, including a one-cell
    /// border beyond the disk.
    pub fn half_cells(&self) -> usize {
        math::ceil(self.half_width / self.step) as usize + 1
    }

    /// Cells per axis of the sampled square.
    pub fn side(&self) -> usize {
        2 * self.half_cells() + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Verdict for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    CertPos,
    CertNeg,
    /// Not certified; `positive` is the sign of `f` at the centre (`f > 0`).
    Uncertain {
        positive: bool,
    },
}

impl Cell {
    /// Sign of `f` at the cell centre.
    pub fn center_sign(self) -> Sign {
        match self {
            Cell::CertPos | Cell::Uncertain { positive: true } => Sign::Positive,
            Cell::CertNeg | Cell::Uncertain { positive: false } => Sign::Negative,
        }
    }

    pub fn certified(self) -> Option<Sign> {
        match self {
            Cell::CertPos => Some(Sign::Positive),
            Cell::CertNeg => Some(Sign::Negative),
            Cell::Uncertain { .. } => None,
        }
    }

    pub fn gray_level(self) -> u8 {
        match self {
            Cell::CertPos => 160,
            Cell::CertNeg => 255,
            Cell::Uncertain { .. } => 0,
        }
    }
}

/// Cell verdicts over the square `side × side` grid of a [`GridSpec`],
/// stored row-major from the bottom row (`j = -n`) up.
#[derive(Debug, Clone, PartialEq)]
pub struct SignField {
    spec: GridSpec,
    margin: f64,
    cert_radius: f64,
    threshold: f64,
    half: usize,
    cells: Vec<Cell>,
}

impl SignField {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// `L·h·√2/2`: how far `f` can move from its centre value inside a cell.
    pub fn cert_radius(&self) -> f64 {
        self.cert_radius
    }

    /// Centre value a cell must exceed in absolute value to be certified.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn side(&self) -> usize {
        2 * self.half + 1
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Verdict of the cell with offset `(i, j)` from the centre cell.
    pub fn get(&self, i: i64, j: i64) -> Option<Cell> {
        self.index(i, j).map(|idx| self.cells[idx])
    }

    fn index(&self, i: i64, j: i64) -> Option<usize> {
        let n = self.half as i64;
        if i < -n || i > n || j < -n || j > n {
            return None;
        }
        Some(((j + n) as usize) * self.side() + (i + n) as usize)
    }

    fn offsets(&self, idx: usize) -> (i64, i64) {
        let side = self.side();
        let n = self.half as i64;
        ((idx % side) as i64 - n, (idx / side) as i64 - n)
    }

    pub fn cell_center(&self, idx: usize) -> Vec2 {
        let (i, j) = self.offsets(idx);
        let h = self.spec.step;
        Vec2::new(
            self.spec.center.x + i as f64 * h,
            self.spec.center.y + j as f64 * h,
        )
    }

    /// Row-major index of the cell whose square contains `p`.
    pub fn locate(&self, p: Vec2) -> Option<usize> {
        let h = self.spec.step;
        let i = math::floor((p.x - self.spec.center.x) / h + 0.5);
        let j = math::floor((p.y - self.spec.center.y) / h + 0.5);
        if !i.is_finite() || !j.is_finite() {
            return None;
        }
        self.index(i as i64, j as i64)
    }

    pub fn count(&self, cell: Cell) -> usize {
        self.cells.iter().filter(|&&c| c == cell).count()
    }

    /// 8-bit gray levels, row-major with the top row (largest `y`) first:
    /// certified positive 160, certified negative 255, uncertain 0.
    pub fn graymap(&self) -> Vec<u8> {
        let side = self.side();
        let mut out = Vec::with_capacity(self.cells.len());
        for row in (0..side).rev() {
            out.extend(
                self.cells[row * side..(row + 1) * side]
                    .iter()
                    .map(|c| c.gray_level()),
            );
        }
        out
    }
}

/// Ensemble values on the grid `origin + (i·h, j·h)`, `0 ≤ i, j < side`.
/// Each term splits as `cos(A_i + B_j)`, so the cost is one multiply-add pair
/// per term and cell.
fn grid_values<F>(ensemble: &WaveEnsemble, origin: Vec2, step: f64, side: usize, mut visit: F)
where
    F: FnMut(usize, f64),
{
    let n = ensemble.len();
    let mut col_cos = vec![0.0; n * side];
    let mut col_sin = vec![0.0; n * side];
    let mut row_cos = vec![0.0; n * side];
    let mut row_sin = vec![0.0; n * side];
    for (t, term) in ensemble.terms().iter().enumerate() {
        let k = term.wavevector();
        let base = k.dot(origin) + term.phase();
        for i in 0..side {
            let a = base + k.x * (i as f64 * step);
            col_cos[t * side + i] = term.amplitude() * math::cos(a);
            col_sin[t * side + i] = term.amplitude() * math::sin(a);
            let b = k.y * (i as f64 * step);
            row_cos[t * side + i] = math::cos(b);
            row_sin[t * side + i] = math::sin(b);
        }
    }
    for j in 0..side {
        for i in 0..side {
            let mut v = 0.0;
            for t in 0..n {
                v += col_cos[t * side + i] * row_cos[t * side + j]
                    - col_sin[t * side + i] * row_sin[t * side + j];
            }
            visit(j * side + i, v);
        }
    }
}

/// Classifies every cell of `spec` by the centre value of `ensemble`.
pub fn sample_field(ensemble: &WaveEnsemble, spec: &GridSpec, eps: f64) -> Result<SignField> {
    spec.validate()?;
    if !eps.is_finite() {
        return Err(Error::NonFinite("eps"));
    }
    if eps < 0.0 {
        return Err(Error::InvalidParameter("eps must be >= 0"));
    }
    let half = spec.half_cells();
    let side = 2 * half + 1;
    let cert_radius = ensemble.lipschitz_bound() * spec.step * core::f64::consts::FRAC_1_SQRT_2;
    // absorbs rounding in the split evaluation
    let slack = 64.0 * f64::EPSILON * (ensemble.sup_bound() + 1.0) * (ensemble.len() as f64 + 1.0);
    let threshold = eps + cert_radius + slack;
    let origin = Vec2::new(
        spec.center.x - half as f64 * spec.step,
        spec.center.y - half as f64 * spec.step,
    );
    let mut cells = vec![Cell::Uncertain { positive: false }; side * side];
    grid_values(ensemble, origin, spec.step, side, |idx, v| {
        cells[idx] = if v > threshold {
            Cell::CertPos
        } else if v < -threshold {
            Cell::CertNeg
        } else {
            Cell::Uncertain { positive: v > 0.0 }
        };
    });
    Ok(SignField {
        spec: *spec,
        margin: eps,
        cert_radius,
        threshold,
        half,
        cells,
    })
}

/// The window disk in field index coordinates.
struct Disk {
    ci: i64,
    cj: i64,
    /// `reach[j + r]`: largest `|i|` inside on row `j`, or -1 when the row is empty.
    reach: Vec<i64>,
    r: i64,
}

impl Disk {
    fn new(field: &SignField, window: &GridSpec) -> Result<Disk> {
        window.validate()?;
        let h = field.spec.step;
        if (window.step - h).abs() > 1e-12 * h {
            return Err(Error::WindowMismatch);
        }
        let di = (window.center.x - field.spec.center.x) / h;
        let dj = (window.center.y - field.spec.center.y) / h;
        let (ci, cj) = (math::round(di), math::round(dj));
        if (di - ci).abs() > 1e-6 || (dj - cj).abs() > 1e-6 {
            return Err(Error::WindowMismatch);
        }
        let (ci, cj) = (ci as i64, cj as i64);
        let r = math::floor(window.half_width / h) as i64;
        let rr = window.half_width * window.half_width;
        let reach: Vec<i64> = (-r..=r)
            .map(|j| {
                let dy = j as f64 * h;
                let mut m = -1i64;
                while {
                    let dx = (m + 1) as f64 * h;
                    dx * dx + dy * dy <= rr
                } {
                    m += 1;
                }
                m
            })
            .collect();
        // the disk and its one-cell border must be sampled
        let n = field.half as i64;
        if ci.abs() + r + 1 > n || cj.abs() + r + 1 > n {
            return Err(Error::WindowMismatch);
        }
        Ok(Disk { ci, cj, reach, r })
    }

    fn row_reach(&self, j: i64) -> i64 {
        let dj = j - self.cj;
        if dj < -self.r || dj > self.r {
            -1
        } else {
            self.reach[(dj + self.r) as usize]
        }
    }

    /// Inside with all eight neighbours inside.
    fn interior(&self, i: i64, j: i64) -> bool {
        let di = (i - self.ci).abs() + 1;
        (j - 1..=j + 1).all(|jj| self.row_reach(jj) >= di)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BoundingBox {
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// A connected set of cells. `cells` holds sorted row-major indices into the
/// sampled field. `bbox` covers the closed cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub sign: Sign,
    pub cells: Vec<u32>,
    pub bbox: BoundingBox,
    /// Every 8-neighbour outside the component is certified with the
    /// opposite sign.
    pub enclosed: bool,
    /// Cells certified with the component's own sign.
    pub certified_cells: usize,
}

impl Component {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, idx: usize) -> bool {
        self.cells.binary_search(&(idx as u32)).is_ok()
    }
}

/// Compact sign components of a field inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PlainCount {
    pub count: usize,
    pub components: Vec<Component>,
}

struct Summary {
    interior: bool,
    enclosed: bool,
    certified: usize,
    cells: Vec<u32>,
    min: (i64, i64),
    max: (i64, i64),
}

/// Labels the components of `member` and keeps those whose cells are all
/// interior to the disk, along with their enclosure status.
fn interior_components<M>(field: &SignField, disk: &Disk, sign: Sign, member: M) -> Vec<Component>
where
    M: Fn(Cell) -> bool,
{
    let side = field.side();
    let (labels, count) = label_components(side, side, false, |idx| member(field.cells[idx]));
    let mut sums: Vec<Summary> = (0..count)
        .map(|_| Summary {
            interior: true,
            enclosed: true,
            certified: 0,
            cells: Vec::new(),
            min: (i64::MAX, i64::MAX),
            max: (i64::MIN, i64::MIN),
        })
        .collect();
    let opposite = sign.opposite();
    for (idx, &label) in labels.iter().enumerate() {
        if label == NO_LABEL {
            continue;
        }
        let s = &mut sums[label as usize];
        if !s.interior {
            continue;
        }
        let (i, j) = field.offsets(idx);
        if !disk.interior(i, j) {
            s.interior = false;
            s.cells = Vec::new();
            continue;
        }
        let cell = field.cells[idx];
        if cell.certified() == Some(sign) {
            s.certified += 1;
        }
        if s.enclosed {
            // interior cells have all neighbours on the grid
            for (di, dj) in [
                (-1, -1),
                (0, -1),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (0, 1),
                (1, 1),
            ] {
                let nidx = field.index(i + di, j + dj).expect("interior neighbour");
                if labels[nidx] != label && field.cells[nidx].certified() != Some(opposite) {
                    s.enclosed = false;
                    break;
                }
            }
        }
        s.cells.push(idx as u32);
        s.min = (s.min.0.min(i), s.min.1.min(j));
        s.max = (s.max.0.max(i), s.max.1.max(j));
    }
    let h = field.spec.step;
    let c = field.spec.center;
    sums.into_iter()
        .filter(|s| s.interior)
        .map(|s| Component {
            sign,
            bbox: BoundingBox {
                min: Vec2::new(
                    c.x + (s.min.0 as f64 - 0.5) * h,
                    c.y + (s.min.1 as f64 - 0.5) * h,
                ),
                max: Vec2::new(
                    c.x + (s.max.0 as f64 + 0.5) * h,
                    c.y + (s.max.1 as f64 + 0.5) * h,
                ),
            },
            enclosed: s.enclosed,
            certified_cells: s.certified,
            cells: s.cells,
        })
        .collect()
}

/// Counts the 4-connected components of the positive and the negative
/// centre-sign cells whose cells are all interior to `window`, ignoring the
/// margin. `window` must share the field's step and alignment and fit on the
/// field with a one-cell border.
pub fn plain_count(field: &SignField, window: &GridSpec) -> Result<PlainCount> {
    let disk = Disk::new(field, window)?;
    let mut components = interior_components(field, &disk, Sign::Positive, |c| {
        c.center_sign() == Sign::Positive
    });
    components.extend(interior_components(field, &disk, Sign::Negative, |c| {
        c.center_sign() == Sign::Negative
    }));
    components.sort_by_key(|c| c.cells[0]);
    Ok(PlainCount {
        count: components.len(),
        components,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodalCensus {
    pub window: GridSpec,
    pub margin: f64,
    pub plain_count: usize,
    pub certified_count: usize,
    /// The certified components, sorted by first cell.
    pub components: Vec<Component>,
    field: SignField,
}

impl NodalCensus {
    pub fn field(&self) -> &SignField {
        &self.field
    }

    /// The certified component whose cells contain `p`, if any.
    pub fn component_containing(&self, p: Vec2) -> Option<&Component> {
        let idx = self.field.locate(p)?;
        self.components.iter().find(|c| c.contains_cell(idx))
    }
}

/// Certified components of the cells not certified opposite.
fn certified_components(field: &SignField, disk: &Disk) -> Vec<Component> {
    let mut out: Vec<Component> = [Sign::Positive, Sign::Negative]
        .into_iter()
        .flat_map(|sign| {
            interior_components(field, disk, sign, move |c| {
                c.certified() != Some(sign.opposite())
            })
            .into_iter()
            .filter(|c| c.enclosed && c.certified_cells > 0)
        })
        .collect();
    out.sort_by_key(|c| c.cells[0]);
    out
}

/// Samples `window` at margin `eps` and counts both compact sign components
/// and certified stable compact components.
pub fn certified_count(
    ensemble: &WaveEnsemble,
    window: &GridSpec,
    eps: f64,
) -> Result<NodalCensus> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be > 0"));
    }
    let field = sample_field(ensemble, window, eps)?;
    census_of_field(field, window)
}

/// Census of an already sampled field over `window`.
pub fn census_of_field(field: SignField, window: &GridSpec) -> Result<NodalCensus> {
    let disk = Disk::new(&field, window)?;
    let plain = plain_count(&field, window)?.count;
    let components = certified_components(&field, &disk);
    Ok(NodalCensus {
        window: *window,
        margin: field.margin,
        plain_count: plain,
        certified_count: components.len(),
        components,
        field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementStep {
    pub step: f64,
    pub plain_count: usize,
    pub certified_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub census: NodalCensus,
    pub trace: Vec<RefinementStep>,
}

/// Runs [`certified_count`] on `B(center, radius)` from step `h0`, halving
/// the step until the count settles.
///
/// The run stops when the certified count equals the plain count (nothing
/// left to certify), when a positive certified count repeats at two
/// consecutive steps, or at once when `eps ≥ sup_bound` (nothing can be
/// certified). Otherwise it fails with [`Error::NoConvergence`] once the step
/// drops below `h_min` or the grid outgrows [`MAX_CELLS_PER_AXIS`].
pub fn refine_until_stable(
    ensemble: &WaveEnsemble,
    center: Vec2,
    radius: f64,
    eps: f64,
    h0: f64,
    h_min: f64,
) -> Result<Refinement> {
    if !(h_min > 0.0) || !(h0 > h_min) {
        return Err(Error::InvalidParameter("need h0 > h_min > 0"));
    }
    let mut trace = Vec::new();
    let mut h = h0;
    let mut previous: Option<usize> = None;
    loop {
        let window = GridSpec::new(center, radius, h);
        let census = match window.and_then(|w| certified_count(ensemble, &w, eps)) {
            Ok(c) => c,
            Err(Error::GridTooLarge { .. }) if !trace.is_empty() => {
                return Err(no_convergence(&trace));
            }
            Err(e) => return Err(e),
        };
        let row = RefinementStep {
            step: h,
            plain_count: census.plain_count,
            certified_count: census.certified_count,
        };
        trace.push(row);
        let settled = eps >= ensemble.sup_bound()
            || census.certified_count == census.plain_count
            || (census.certified_count > 0 && previous == Some(census.certified_count));
        if settled {
            return Ok(Refinement { census, trace });
        }
        previous = Some(census.certified_count);
        h /= 2.0;
        if h < h_min {
            return Err(no_convergence(&trace));
        }
    }
}

fn no_convergence(trace: &[RefinementStep]) -> Error {
    let last = trace.last().expect("nonempty trace");
    Error::NoConvergence {
        last_step: last.step,
        last_certified: last.certified_count,
    }
}

/// Number of nodal domains of a `period`-periodic ensemble on the torus
/// `[0, period)²`, by wrap-around 4-connected components of centre signs on a
/// `cells × cells` grid.
pub fn periodic_count(ensemble: &WaveEnsemble, period: f64, cells: usize) -> Result<usize> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidParameter("period must be > 0"));
    }
    if cells == 0 {
        return Err(Error::InvalidParameter("cells must be >= 1"));
    }
    if cells as f64 > MAX_CELLS_PER_AXIS {
        return Err(Error::GridTooLarge {
            cells_per_axis: cells as f64,
            max: MAX_CELLS_PER_AXIS,
        });
    }
    let mut positive = vec![false; cells * cells];
    grid_values(
        ensemble,
        Vec2::ZERO,
        period / cells as f64,
        cells,
        |idx, v| {
            positive[idx] = v > 0.0;
        },
    );
    let (_, pos) = label_components(cells, cells, true, |i| positive[i]);
    let (_, neg) = label_components(cells, cells, true, |i| !positive[i]);
    Ok((pos + neg) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(triples: &[(f64, [f64; 2], f64)]) -> WaveEnsemble {
        WaveEnsemble::from_triples(triples.iter().map(|&(a, k, t)| (a, Vec2::from(k), t))).unwrap()
    }

    #[test]
    fn grid_guard() {
        assert!(GridSpec::new(Vec2::ZERO, 10.0, 0.001).is_ok());
        assert!(matches!(
            GridSpec::new(Vec2::ZERO, 10.0, 0.0009),
            Err(Error::GridTooLarge { .. })
        ));
        assert!(GridSpec::new(Vec2::ZERO, 1.0, 0.0).is_err());
    }

    #[test]
    fn split_evaluation_matches_direct() {
        let e = ens(&[
            (1.0, [1.3, -0.4], 0.2),
            (0.7, [0.1, 2.0], 5.0),
            (-0.3, [-1.0, 1.0], 1.0),
        ]);
        let spec = GridSpec::new(Vec2::new(3.0, -2.0), 2.0, 0.1).unwrap();
        let field = sample_field(&e, &spec, 0.0).unwrap();
        let origin = Vec2::new(3.0 - 21.0 * 0.1, -2.0 - 21.0 * 0.1);
        grid_values(&e, origin, 0.1, field.side(), |idx, v| {
            let direct = e.evaluate(field.cell_center(idx));
            assert!((v - direct).abs() < 1e-12);
        });
    }

    #[test]
    fn near_crest_cells_certified() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0)]);
        let spec = GridSpec::new(Vec2::ZERO, 1.0, 0.1).unwrap();
        let field = sample_field(&e, &spec, 0.5).unwrap();
        assert_eq!(field.get(0, 0), Some(Cell::CertPos));
        // cos(1.0) ≈ 0.54 < 0.5 + 0.0707
        assert_eq!(field.get(10, 0), Some(Cell::Uncertain { positive: true }));
    }

    #[test]
    fn unreachable_margin_leaves_everything_uncertain() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0), (0.5, [0.0, 1.0], 0.3)]);
        let spec = GridSpec::new(Vec2::ZERO, 5.0, 0.05).unwrap();
        let field = sample_field(&e, &spec, 1.5).unwrap();
        assert!(field.cells().iter().all(|c| c.certified().is_none()));
    }

    #[test]
    fn locate_round_trips() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0)]);
        let spec = GridSpec::new(Vec2::new(1.0, 2.0), 1.0, 0.25).unwrap();
        let field = sample_field(&e, &spec, 0.1).unwrap();
        for idx in [0, 17, field.cells().len() - 1] {
            let c = field.cell_center(idx);
            assert_eq!(field.locate(c), Some(idx));
            assert_eq!(field.locate(c + Vec2::new(0.12, -0.12)), Some(idx));
        }
        assert_eq!(field.locate(Vec2::new(100.0, 0.0)), None);
    }

    #[test]
    fn graymap_top_row_first() {
        let e = ens(&[(1.0, [0.0, 1.0], 0.0)]);
        let spec = GridSpec::new(Vec2::new(0.0, 1.0), 1.0, 0.5).unwrap();
        let field = sample_field(&e, &spec, 0.1).unwrap();
        let side = field.side();
        let g = field.graymap();
        assert_eq!(g.len(), side * side);
        // top row y = 3: cos 3 < 0, bottom row y = -1: cos(-1) > 0
        assert_eq!(g[0], 255);
        assert_eq!(g[g.len() - 1], 160);
    }

    #[test]
    fn plane_wave_has_no_compact_domain() {
        let e = ens(&[(1.0, [1.0, 0.3], 0.4)]);
        let w = GridSpec::new(Vec2::ZERO, 10.0, 0.05).unwrap();
        let census = certified_count(&e, &w, 0.05).unwrap();
        assert_eq!(census.plain_count, 0);
        assert_eq!(census.certified_count, 0);
    }

    #[test]
    fn checkerboard_plain_count_matches_brute_force() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.3), (1.0, [0.0, 1.0], -0.2)]);
        let w = GridSpec::new(Vec2::ZERO, 10.0, 0.04).unwrap();
        let field = sample_field(&e, &w, 0.0).unwrap();
        let plain = plain_count(&field, &w).unwrap();
        assert!(plain.count > 0);
        assert!(plain.components.iter().all(|c| !c.cells.is_empty()));
        // each counted component is a sign-constant 4-connected set
        for c in &plain.components {
            assert!(c
                .cells
                .iter()
                .all(|&i| field.cells()[i as usize].center_sign() == c.sign));
        }
    }

    #[test]
    fn unequal_two_cosine_has_no_compact_domain() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0), (1.05, [0.0, 1.0], 0.0)]);
        let w = GridSpec::new(Vec2::ZERO, 10.0, 0.02).unwrap();
        let census = certified_count(&e, &w, 0.01).unwrap();
        assert_eq!(census.plain_count, 0);
        assert_eq!(census.certified_count, 0);
    }

    #[test]
    fn window_must_align() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0)]);
        let spec = GridSpec::new(Vec2::ZERO, 5.0, 0.1).unwrap();
        let field = sample_field(&e, &spec, 0.1).unwrap();
        let off = GridSpec::new(Vec2::new(0.05, 0.0), 2.0, 0.1).unwrap();
        assert_eq!(plain_count(&field, &off), Err(Error::WindowMismatch));
        let big = GridSpec::new(Vec2::ZERO, 6.0, 0.1).unwrap();
        assert_eq!(plain_count(&field, &big), Err(Error::WindowMismatch));
        let shifted = GridSpec::new(Vec2::new(1.0, -1.0), 3.0, 0.1).unwrap();
        assert!(plain_count(&field, &shifted).is_ok());
    }

    #[test]
    fn enclosed_bump_is_certified() {
        // three waves at 120°: isolated maxima of height 3 on a triangular lattice
        let s = 3f64.sqrt() / 2.0;
        let e = ens(&[
            (1.0, [1.0, 0.0], 0.0),
            (1.0, [-0.5, s], 0.0),
            (1.0, [-0.5, -s], 0.0),
        ]);
        let w = GridSpec::new(Vec2::ZERO, 6.0, 0.02).unwrap();
        let census = certified_count(&e, &w, 0.05).unwrap();
        assert!(census.certified_count >= 1);
        assert!(census.certified_count <= census.plain_count);
        let c = census
            .component_containing(Vec2::ZERO)
            .expect("origin component");
        assert_eq!(c.sign, Sign::Positive);
        assert!(c.enclosed);
        assert!(c.bbox.contains(Vec2::ZERO));
    }

    #[test]
    fn refinement_stops_immediately_for_plane_wave() {
        let e = ens(&[(1.0, [1.0, 0.0], 0.0)]);
        let r = refine_until_stable(&e, Vec2::ZERO, 5.0, 0.01, 0.1, 0.01).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.census.certified_count, 0);
        let r = refine_until_stable(&e, Vec2::ZERO, 5.0, 2.0, 0.1, 0.01).unwrap();
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn refinement_reports_no_convergence() {
        // the bumps peak at 3, so a margin of 2.99 is out of reach at these steps
        let s = 3f64.sqrt() / 2.0;
        let e = ens(&[
            (1.0, [1.0, 0.0], 0.0),
            (1.0, [-0.5, s], 0.0),
            (1.0, [-0.5, -s], 0.0),
        ]);
        let r = refine_until_stable(&e, Vec2::ZERO, 8.0, 2.99, 0.1, 0.02);
        assert!(matches!(
            r,
            Err(Error::NoConvergence {
                last_certified: 0,
                ..
            })
        ));
    }

    #[test]
    fn periodic_counts() {
        // two wrapped strips
        let e = ens(&[(1.0, [1.0, 0.0], 0.0)]);
        assert_eq!(periodic_count(&e, math::TAU, 250).unwrap(), 2);
        // cos x · cos y: four rectangles per period
        let e = ens(&[(0.5, [1.0, 1.0], 0.0), (0.5, [1.0, -1.0], 0.0)]);
        assert_eq!(periodic_count(&e, math::TAU, 250).unwrap(), 4);
    }
}
