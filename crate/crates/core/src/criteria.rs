//! Hypothesis checks for the quadratic lower bound on stable nodal domains.
//!
//! Two properties of an ensemble `Σ aᵢ cos(kᵢ·x + θᵢ)` are checked here:
//!
//! - **Independence of the wavevectors.** The family is independent in the
//!   required sense when some direction `u` makes the scalars `kᵢ·u` free of
//!   integer relations of small height. The height bound is not explicit in
//!   the theory, so the check is a finite certificate: it enumerates every
//!   nonzero integer vector `p` with `‖p‖∞ ≤ H` and reports either a vanishing
//!   combination `Σ pᵢkᵢ = 0` or a witness direction `u` avoiding every
//!   hyperplane `v_p^⊥`. For up to three vectors it also estimates how long
//!   the phase flow `θ + t(kᵢ·u)ᵢ mod 1` takes to visit every cell of a mesh.
//! - **Non-domination of amplitudes in each direction bucket.** Amplitudes are
//!   non-dominated when a choice of signs brings `|Σ uᵢaᵢ|` below a tolerance;
//!   the minimum is found exactly by meet-in-the-middle.
//!
//! [`decompose_pairing`] turns a near-balanced bipartition of a bucket into
//! pieces that can be paired with (almost) equal amplitudes, which is what the
//! sum-to-product collapse needs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::Vec2;
use crate::math::{self, PI, TAU};
use crate::wave::WaveEnsemble;
use crate::{Error, Result};

/// Residual below which an integer combination of wavevectors counts as zero.
pub const RELATION_TOLERANCE: f64 = 1e-9;

/// Largest number of amplitudes handled by the exact sign search.
pub const MAX_DOMINATION_TERMS: usize = 40;

/// Cap on the number of half coefficient vectors in the relation search.
pub const MAX_HALF_ENUMERATION: u128 = 1 << 22;

/// Candidate witness directions tried on the half circle.
pub const WITNESS_CANDIDATES: usize = 64;

/// Largest torus grid used for the covering-time estimate.
const MAX_COVER_CELLS: usize = 1 << 24;

/// Tolerances and budgets for the hypothesis checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams {
    /// Mesh tolerance of the phase-flow covering check.
    pub eps0: f64,
    /// Angular diameter bound of the direction buckets (radians).
    pub eps1: f64,
    /// Non-domination tolerance.
    pub eps2: f64,
    /// Stability margin used for counting.
    pub eps3: f64,
    pub search_height: u32,
    /// Time horizon for the covering-time estimate.
    pub orbit_budget: f64,
}

impl CriterionParams {
    pub fn new(
        eps0: f64,
        eps1: f64,
        eps2: f64,
        eps3: f64,
        search_height: u32,
        orbit_budget: f64,
    ) -> Result<Self> {
        let p = CriterionParams {
            eps0,
            eps1,
            eps2,
            eps3,
            search_height,
            orbit_budget,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.eps0, "eps0 must be > 0"),
            (self.eps1, "eps1 must be > 0"),
            (self.eps2, "eps2 must be > 0"),
            (self.eps3, "eps3 must be > 0"),
            (self.orbit_budget, "orbit_budget must be > 0"),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(name));
            }
        }
        if self.search_height == 0 {
            return Err(Error::InvalidParameter("search_height must be >= 1"));
        }
        Ok(())
    }
}

impl Default for CriterionParams {
    fn default() -> Self {
        CriterionParams {
            eps0: 0.1,
            eps1: 0.15,
            eps2: 0.01,
            eps3: 0.01,
            search_height: 50,
            orbit_budget: 1e4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IndependenceOutcome {
    /// No integer relation of height at most `height`. `witness` lies on no
    /// hyperplane `v_p^⊥`; `separation` is `min_p |v_p·u|` over the search.
    IndependentUpToHeight {
        height: u32,
        witness: Vec2,
        separation: f64,
    },
    /// `Σ pᵢkᵢ = residual` with `‖residual‖ ≤ RELATION_TOLERANCE`.
    RelationFound {
        coefficients: Vec<i64>,
        residual: Vec2,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceVerdict {
    pub outcome: IndependenceOutcome,
    /// Time for the phase flow from 0 to visit every mesh cell, when
    /// independent, `n ≤ 3`, and the budget suffices.
    pub empirical_t: Option<f64>,
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(
            self.outcome,
            IndependenceOutcome::IndependentUpToHeight { .. }
        )
    }
}

/// Every coefficient vector in `[-h, h]^len`, in odometer order starting from
/// all `-h`.
fn coefficient_vectors(len: usize, h: i64) -> Vec<Vec<i64>> {
    let side = (2 * h + 1) as usize;
    let count = side.pow(len as u32);
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![-h; len];
    for _ in 0..count {
        out.push(cur.clone());
        for c in cur.iter_mut() {
            if *c < h {
                *c += 1;
                break;
            }
            *c = -h;
        }
    }
    out
}

fn half_size(len: usize, h: u32) -> u128 {
    (2 * h as u128 + 1).pow(len as u32)
}

fn combine(coeffs: &[i64], vectors: &[Vec2]) -> Vec2 {
    coeffs
        .iter()
        .zip(vectors)
        .fold(Vec2::ZERO, |acc, (&p, &k)| acc + (p as f64) * k)
}

/// Sign-normalizes `p` so the first nonzero entry is positive.
fn canonical(mut p: Vec<i64>) -> Vec<i64> {
    if p.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        p.iter_mut().for_each(|c| *c = -*c);
    }
    p
}

fn height_of(p: &[i64]) -> i64 {
    p.iter().map(|c| c.abs()).max().unwrap_or(0)
}

fn relation_order(a: &[i64], b: &[i64]) -> Ordering {
    height_of(a).cmp(&height_of(b)).then_with(|| a.cmp(b))
}

fn validate_vectors(vectors: &[Vec2]) -> Result<()> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, k) in vectors.iter().enumerate() {
        if !k.is_finite() {
            return Err(Error::NonFinite("wavevector"));
        }
        if k.norm() == 0.0 {
            return Err(Error::ZeroWavevector { index });
        }
    }
    Ok(())
}

/// Searches for a nonzero `p ∈ ℤⁿ`, `‖p‖∞ ≤ height`, with
/// `‖Σ pᵢkᵢ‖ ≤ RELATION_TOLERANCE`. Among all such `p` returns the one of
/// least height, ties broken lexicographically after making the first nonzero
/// entry positive.
pub fn find_relation(vectors: &[Vec2], height: u32) -> Result<Option<(Vec<i64>, Vec2)>> {
    validate_vectors(vectors)?;
    let n = vectors.len();
    let (left, right) = vectors.split_at(n / 2);
    let biggest = half_size(right.len(), height);
    if biggest > MAX_HALF_ENUMERATION {
        return Err(Error::SearchTooLarge {
            half_size: biggest,
            max: MAX_HALF_ENUMERATION,
        });
    }
    let h = height as i64;
    let left_coeffs = coefficient_vectors(left.len(), h);
    let right_coeffs = coefficient_vectors(right.len(), h);

    // right half-sums sorted by (x, y)
    let mut right_sums: Vec<(Vec2, usize)> = right_coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (combine(c, right), i))
        .collect();
    right_sums.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));

    let mut best: Option<Vec<i64>> = None;
    for lc in &left_coeffs {
        let target = -combine(lc, left);
        let lo = right_sums.partition_point(|s| s.0.x < target.x - RELATION_TOLERANCE);
        let hi = right_sums.partition_point(|s| s.0.x <= target.x + RELATION_TOLERANCE);
        let mut j = lo;
        while j < hi {
            // run of equal x, sorted by y
            let x = right_sums[j].0.x;
            let run_end = j + right_sums[j..hi].partition_point(|s| s.0.x == x);
            let run = &right_sums[j..run_end];
            let start = run.partition_point(|s| s.0.y < target.y - RELATION_TOLERANCE);
            for &(sum, ri) in run[start..].iter() {
                if sum.y > target.y + RELATION_TOLERANCE {
                    break;
                }
                if (sum - target).norm() > RELATION_TOLERANCE {
                    continue;
                }
                let mut p = lc.clone();
                p.extend_from_slice(&right_coeffs[ri]);
                if p.iter().all(|&c| c == 0) {
                    continue;
                }
                let p = canonical(p);
                if best
                    .as_ref()
                    .is_none_or(|b| relation_order(&p, b) == Ordering::Less)
                {
                    best = Some(p);
                }
            }
            j = run_end;
        }
    }
    Ok(best.map(|p| {
        let residual = combine(&p, vectors);
        (p, residual)
    }))
}

/// `min |Σ pᵢsᵢ|` over nonzero `p` with `‖p‖∞ ≤ height`.
fn min_scalar_combination(scalars: &[f64], height: u32) -> f64 {
    let n = scalars.len();
    let (left, right) = scalars.split_at(n / 2);
    let h = height as i64;
    let sums = |part: &[f64]| -> Vec<(f64, bool)> {
        coefficient_vectors(part.len(), h)
            .iter()
            .map(|c| {
                let s = c.iter().zip(part).map(|(&p, &v)| p as f64 * v).sum::<f64>();
                (s, c.iter().all(|&x| x == 0))
            })
            .collect()
    };
    let left_sums = sums(left);
    let mut right_sums = sums(right);
    right_sums.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = f64::INFINITY;
    for &(a, a_zero) in &left_sums {
        let pos = right_sums.partition_point(|s| s.0 < -a);
        let from = pos.saturating_sub(2);
        let to = (pos + 2).min(right_sums.len());
        for &(b, b_zero) in &right_sums[from..to] {
            if a_zero && b_zero {
                continue;
            }
            best = best.min((a + b).abs());
        }
    }
    best
}

/// Visits of the linear flow `t ↦ t·rates mod 1` on a mesh of side `mesh`.
/// Returns the first time every cell was entered, if within `budget`.
fn covering_time(rates: &[f64], mesh: f64, budget: f64) -> Option<f64> {
    let n = rates.len();
    let per_axis = math::ceil(1.0 / mesh) as usize;
    let total = per_axis.checked_pow(n as u32)?;
    if total > MAX_COVER_CELLS {
        return None;
    }
    let max_rate = rates.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if max_rate == 0.0 {
        return None;
    }
    let dt = 0.25 * mesh / max_rate;
    let mut seen = vec![false; total];
    let mut remaining = total;
    let mut step: u64 = 0;
    loop {
        let t = step as f64 * dt;
        if t > budget {
            return None;
        }
        let mut idx = 0usize;
        for &r in rates.iter().rev() {
            let phase = r * t;
            let frac = phase - math::floor(phase);
            let cell = ((frac * per_axis as f64) as usize).min(per_axis - 1);
            idx = idx * per_axis + cell;
        }
        if !seen[idx] {
            seen[idx] = true;
            remaining -= 1;
            if remaining == 0 {
                return Some(t);
            }
        }
        step += 1;
    }
}

/// Finite-height independence check; see the module docs.
pub fn check_independence(
    wavevectors: &[Vec2],
    params: &CriterionParams,
) -> Result<IndependenceVerdict> {
    params.validate()?;
    if let Some((coefficients, residual)) = find_relation(wavevectors, params.search_height)? {
        return Ok(IndependenceVerdict {
            outcome: IndependenceOutcome::RelationFound {
                coefficients,
                residual,
            },
            empirical_t: None,
        });
    }

    // u and −u give the same hyperplane test, so scan the half circle. The
    // half-step offset keeps candidates off the coordinate axes.
    let mut witness = Vec2::new(1.0, 0.0);
    let mut separation = -1.0;
    for j in 0..WITNESS_CANDIDATES {
        let u = Vec2::from_angle((j as f64 + 0.5) * PI / WITNESS_CANDIDATES as f64);
        let scalars: Vec<f64> = wavevectors.iter().map(|k| k.dot(u)).collect();
        let s = min_scalar_combination(&scalars, params.search_height);
        if s > separation {
            separation = s;
            witness = u;
        }
    }

    let empirical_t = if wavevectors.len() <= 3 {
        let rates: Vec<f64> = wavevectors.iter().map(|k| k.dot(witness)).collect();
        covering_time(&rates, params.eps0 / 2.0, params.orbit_budget)
    } else {
        None
    };
    Ok(IndependenceVerdict {
        outcome: IndependenceOutcome::IndependentUpToHeight {
            height: params.search_height,
            witness,
            separation,
        },
        empirical_t,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationVerdict {
    /// Signs `uᵢ ∈ {−1, +1}` minimizing `|Σ uᵢaᵢ|`, with `u₀ = +1`.
    pub signs: Vec<i8>,
    /// `|Σ uᵢaᵢ|`, summed in index order.
    pub residual: f64,
    pub non_dominated: bool,
}

fn signed_sum(amplitudes: &[f64], signs: &[i8]) -> f64 {
    amplitudes
        .iter()
        .zip(signs)
        .map(|(&a, &s)| s as f64 * a)
        .sum()
}

fn signs_from_masks(n: usize, split: usize, left: u64, right: u64) -> Vec<i8> {
    (0..n)
        .map(|i| {
            let bit = if i < split {
                left >> i & 1
            } else {
                right >> (i - split) & 1
            };
            if bit == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// Minimizes `|Σ uᵢaᵢ|` over sign vectors by meet-in-the-middle and compares
/// the minimum to `eps2`. The first sign is fixed to `+1`; ties keep the first
/// candidate found in mask order, so results are deterministic.
pub fn check_non_domination(amplitudes: &[f64], eps2: f64) -> Result<DominationVerdict> {
    let n = amplitudes.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > MAX_DOMINATION_TERMS {
        return Err(Error::TooManyTerms {
            n,
            max: MAX_DOMINATION_TERMS,
        });
    }
    if amplitudes.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite("amplitude"));
    }
    if !(eps2 >= 0.0) {
        return Err(Error::InvalidParameter("eps2 must be >= 0"));
    }

    // Left half holds index 0 with its sign fixed to +.
    let split = n.div_ceil(2);
    let half_sums = |part: &[f64], fixed_first: bool| -> Vec<(f64, u64)> {
        let free = if fixed_first {
            part.len() - 1
        } else {
            part.len()
        };
        let offset = if fixed_first { 1 } else { 0 };
        (0..1u64 << free)
            .map(|m| {
                let mask = m << offset;
                let s = part
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if mask >> i & 1 == 1 { -a } else { a })
                    .sum::<f64>();
                (s, mask)
            })
            .collect()
    };
    let left = half_sums(&amplitudes[..split], true);
    let mut right = half_sums(&amplitudes[split..], false);
    right.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut best: Option<(f64, Vec<i8>)> = None;
    for &(a, lmask) in &left {
        let pos = right.partition_point(|s| s.0 < -a);
        let from = pos.saturating_sub(1);
        let to = (pos + 1).min(right.len());
        for &(_, rmask) in &right[from..to] {
            let signs = signs_from_masks(n, split, lmask, rmask);
            let r = signed_sum(amplitudes, &signs).abs();
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, signs));
            }
        }
    }
    let (residual, signs) = best.expect("at least one sign vector");
    Ok(DominationVerdict {
        signs,
        residual,
        non_dominated: residual <= eps2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bipartition {
    /// The heavier (or equal) side.
    pub heavy: Vec<usize>,
    pub light: Vec<usize>,
    /// `Σ_heavy aᵢ − Σ_light aᵢ ≥ 0`, minimal over all bipartitions.
    pub residual: f64,
}

/// Splits positive amplitudes into two sides whose sums differ as little as
/// possible.
pub fn partition_balance(amplitudes: &[f64]) -> Result<Bipartition> {
    if amplitudes.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::InvalidParameter("amplitudes must be positive"));
    }
    let verdict = check_non_domination(amplitudes, 0.0)?;
    let signed = signed_sum(amplitudes, &verdict.signs);
    let (plus, minus): (Vec<usize>, Vec<usize>) =
        (0..amplitudes.len()).partition(|&i| verdict.signs[i] > 0);
    let (heavy, light) = if signed >= 0.0 {
        (plus, minus)
    } else {
        (minus, plus)
    };
    Ok(Bipartition {
        heavy,
        light,
        residual: verdict.residual,
    })
}

/// One matched pair of pieces: `t_src·a_src = t_dst·a_dst + residual`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecePair {
    /// `(index, piece number)` on the first side.
    pub source: (usize, usize),
    /// `(index, piece number)` on the second side.
    pub target: (usize, usize),
    pub residual: f64,
}

/// Pieces `t_j^i` of every amplitude and the bijection between the pieces of
/// the two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingDecomposition {
    /// `weights[i][j] = t_j^i`; every row sums to 1.
    pub weights: Vec<Vec<f64>>,
    pub pairs: Vec<PiecePair>,
}

impl PairingDecomposition {
    pub fn piece_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn total_abs_residual(&self) -> f64 {
        self.pairs.iter().map(|p| p.residual.abs()).sum()
    }
}

struct Item {
    index: usize,
    first_side: bool,
    /// remaining fraction of the amplitude
    fraction: f64,
}

/// Breaks both sides of `Σ_J aᵢ = Σ_J′ aᵢ + r` into pieces matched one to one
/// with equal amplitudes, except for residuals summing to `|r|`.
///
/// While both sides hold at least two pieces, the globally smallest piece
/// (ties: lowest index) is matched in full against a carve of equal size from
/// the largest piece on the other side (ties: lowest index). Once a side is
/// down to one piece, that piece is split in proportion to the remaining
/// pieces opposite, which spreads the imbalance `r` over the final pairs.
pub fn decompose_pairing(
    amplitudes: &[f64],
    first: &[usize],
    second: &[usize],
) -> Result<PairingDecomposition> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::EmptySide);
    }
    let n = amplitudes.len();
    let mut seen = vec![false; n];
    for &i in first.iter().chain(second) {
        if i >= n || seen[i] {
            return Err(Error::InvalidPartition);
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidPartition);
    }
    if amplitudes.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter("amplitudes must be positive"));
    }

    let mut weights: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut pairs = Vec::new();
    let mut items: Vec<Item> = first
        .iter()
        .map(|&index| Item {
            index,
            first_side: true,
            fraction: 1.0,
        })
        .chain(second.iter().map(|&index| Item {
            index,
            first_side: false,
            fraction: 1.0,
        }))
        .collect();
    let value = |it: &Item| it.fraction * amplitudes[it.index];

    let mut record =
        |weights: &mut Vec<Vec<f64>>, a: (usize, f64), b: (usize, f64), first_is_a: bool| {
            let (src, dst) = if first_is_a { (a, b) } else { (b, a) };
            weights[src.0].push(src.1);
            weights[dst.0].push(dst.1);
            pairs.push(PiecePair {
                source: (src.0, weights[src.0].len() - 1),
                target: (dst.0, weights[dst.0].len() - 1),
                residual: src.1 * amplitudes[src.0] - dst.1 * amplitudes[dst.0],
            });
        };

    loop {
        let first_count = items.iter().filter(|it| it.first_side).count();
        let second_count = items.len() - first_count;
        if first_count < 2 || second_count < 2 {
            break;
        }
        let small = (0..items.len())
            .min_by(|&a, &b| {
                value(&items[a])
                    .total_cmp(&value(&items[b]))
                    .then(items[a].index.cmp(&items[b].index))
            })
            .unwrap();
        let side = items[small].first_side;
        let large = (0..items.len())
            .filter(|&j| items[j].first_side != side)
            .max_by(|&a, &b| {
                value(&items[a])
                    .total_cmp(&value(&items[b]))
                    .then(items[b].index.cmp(&items[a].index))
            })
            .unwrap();
        let v = value(&items[small]);
        let carve = v / amplitudes[items[large].index];
        let carve = carve.min(items[large].fraction);
        record(
            &mut weights,
            (items[small].index, items[small].fraction),
            (items[large].index, carve),
            side,
        );
        items[large].fraction -= carve;
        let large_index = items[large].index;
        let large_done = items[large].fraction <= 1e-15 * carve.max(1.0);
        items.remove(small);
        if large_done {
            let pos = items.iter().position(|it| it.index == large_index).unwrap();
            // absorb rounding dust into the piece just carved
            let last = weights[large_index].last_mut().unwrap();
            *last += items[pos].fraction;
            items.remove(pos);
        }
        if items.iter().all(|it| it.first_side) || items.iter().all(|it| !it.first_side) {
            break;
        }
    }

    // Final step: one piece on at least one side.
    let first_items: Vec<&Item> = items.iter().filter(|it| it.first_side).collect();
    let second_items: Vec<&Item> = items.iter().filter(|it| !it.first_side).collect();
    if !first_items.is_empty() && !second_items.is_empty() {
        let (single, many, single_first) = if first_items.len() == 1 {
            (first_items[0], second_items, true)
        } else {
            (second_items[0], first_items, false)
        };
        let total: f64 = many.iter().map(|it| value(it)).sum();
        let mut used = 0.0;
        for (j, it) in many.iter().enumerate() {
            let t = if j + 1 == many.len() {
                single.fraction - used
            } else {
                single.fraction * value(it) / total
            };
            used += t;
            record(
                &mut weights,
                (single.index, t),
                (it.index, it.fraction),
                single_first,
            );
        }
    }

    Ok(PairingDecomposition { weights, pairs })
}

/// A half-open arc `[start, end)` of directions and the terms pointing into it.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionBucket {
    pub start: f64,
    pub end: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionPartition {
    /// All arcs in angular order, empty ones included.
    pub buckets: Vec<DirectionBucket>,
    pub arc_length: f64,
}

impl DirectionPartition {
    pub fn nonempty(&self) -> impl Iterator<Item = &DirectionBucket> {
        self.buckets.iter().filter(|b| !b.members.is_empty())
    }
}

/// Cuts the circle into `⌈2π/eps1⌉ + 1` equal half-open arcs anchored at
/// angle 0 and assigns each wavevector by its direction.
pub fn partition_directions(wavevectors: &[Vec2], eps1: f64) -> Result<DirectionPartition> {
    if !(eps1 > 0.0) || !eps1.is_finite() {
        return Err(Error::InvalidParameter("eps1 must be > 0"));
    }
    let count = math::ceil(TAU / eps1) as usize + 1;
    let arc_length = TAU / count as f64;
    let mut buckets: Vec<DirectionBucket> = (0..count)
        .map(|l| DirectionBucket {
            start: l as f64 * arc_length,
            end: (l + 1) as f64 * arc_length,
            members: Vec::new(),
        })
        .collect();
    for (index, k) in wavevectors.iter().enumerate() {
        if k.norm() == 0.0 {
            return Err(Error::ZeroWavevector { index });
        }
        buckets[bucket_of(k.angle(), arc_length, count)]
            .members
            .push(index);
    }
    Ok(DirectionPartition {
        buckets,
        arc_length,
    })
}

fn bucket_of(angle: f64, arc_length: f64, count: usize) -> usize {
    ((angle / arc_length) as usize).min(count - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketReport {
    pub start: f64,
    pub end: f64,
    pub members: Vec<usize>,
    pub verdict: DominationVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    pub support_count: usize,
    pub support_ok: bool,
    pub independence: IndependenceVerdict,
    /// One report per nonempty bucket.
    pub buckets: Vec<BucketReport>,
    pub passed: bool,
}

impl Theorem2Report {
    pub fn buckets_ok(&self) -> bool {
        self.buckets.iter().all(|b| b.verdict.non_dominated)
    }

    /// Reasons the check failed, one line each.
    pub fn failures(&self) -> Vec<alloc::string::String> {
        use alloc::format;
        let mut out = Vec::new();
        if !self.support_ok {
            out.push(format!("support {} < {}", self.support_count, MIN_SUPPORT));
        }
        if let IndependenceOutcome::RelationFound { coefficients, .. } = &self.independence.outcome
        {
            out.push(format!("integer relation {coefficients:?}"));
        }
        for b in self.buckets.iter().filter(|b| !b.verdict.non_dominated) {
            out.push(format!(
                "bucket [{:.4}, {:.4}) dominated, residual {}",
                b.start, b.end, b.verdict.residual
            ));
        }
        out
    }
}

/// Support size the spectral measure needs.
pub const MIN_SUPPORT: usize = 6;

/// Runs all three hypothesis checks on an ensemble.
pub fn theorem2_check(ensemble: &WaveEnsemble, params: &CriterionParams) -> Result<Theorem2Report> {
    params.validate()?;
    let measure = ensemble.spectral_measure()?;
    let support_count = measure.support_count();
    let support_ok = support_count >= MIN_SUPPORT;

    let wavevectors = ensemble.wavevectors();
    let independence = check_independence(&wavevectors, params)?;

    let amplitudes = ensemble.amplitudes();
    let partition = partition_directions(&wavevectors, params.eps1)?;
    let mut grouped: BTreeMap<usize, &DirectionBucket> = BTreeMap::new();
    for (l, b) in partition.buckets.iter().enumerate() {
        if !b.members.is_empty() {
            grouped.insert(l, b);
        }
    }
    let buckets = grouped
        .values()
        .map(|b| {
            let amps: Vec<f64> = b.members.iter().map(|&i| amplitudes[i]).collect();
            check_non_domination(&amps, params.eps2).map(|verdict| BucketReport {
                start: b.start,
                end: b.end,
                members: b.members.clone(),
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let passed = support_ok
        && independence.is_independent()
        && buckets.iter().all(|b| b.verdict.non_dominated);
    Ok(Theorem2Report {
        support_count,
        support_ok,
        independence,
        buckets,
        passed,
    })
}
