//! Ensembles with a stable compact nodal domain by construction.
//!
//! # Three waves
//!
//! Take unit wavevectors `k₁, k₂, k₃`, no two collinear, and relabel them so
//! `k₃ = λ′k₁ + μ′k₂` with `|λ′|, |μ′| ≤ 1`. For `a₁ = 1` and `a₂` just below
//! `a₁`, the function `cos(k₁·x) + a₂cos(k₂·x)` has a positive cell around
//! the origin that is almost closed: its boundary carries two narrow passages
//! where `f` is only `±(a₁ − a₂)` away from zero. On those passages
//! `cos(k₃·x)` takes the values `cos(λ′π)` and `cos(μ′π)`, so a third term
//! `a₃cos(k₃·x)` with `a₃` in the right window pushes both passages negative
//! and closes the cell. [`lemma3_window`] computes that window as a function
//! of the gap `a₁ − a₂`:
//!
//! - `cos(λ′π)` and `cos(μ′π)` of the same sign:
//!   `a₃ ∈ [2g/|cos λ′π|, g + 2g/min(|cos λ′π|, |cos μ′π|)]`;
//! - opposite signs, arranged so `|cos λ′π| < |cos μ′π|`: `a₃` between
//!   `−sgn(cos μ′π)·g/(⅓|cos μ′π| + ⅔|cos λ′π|)` and
//!   `−sgn(cos μ′π)·g/(⅔|cos μ′π| + ⅓|cos λ′π|)`.
//!
//! The window is exactly linear in `g`, which is the conical property:
//! scaling all amplitudes by `t` keeps the domain and scales its margin by `t`.
//!
//! # Torus modes
//!
//! Integer wavevectors on one circle `p² + q² = m` give eigenfunctions of the
//! flat torus `ℝ²/2πℤ²` with eigenvalue `m`. [`torus_eigenfunction`] picks two
//! lattice points near each target direction, rejecting circles whose choice
//! carries a small integer relation.

use alloc::vec::Vec;

use crate::criteria::find_relation;
use crate::geom::Vec2;
use crate::math::{self, PI};
use crate::wave::{PlaneWaveTerm, WaveEnsemble};
use crate::{Error, Result};

/// Two lattice vectors on the same circle, `(k, k̂)`.
pub type LatticePair = ((i64, i64), (i64, i64));

const COLLINEAR_TOLERANCE: f64 = 1e-12;
const UNIT_TOLERANCE: f64 = 1e-9;
const COEFFICIENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowCase {
    /// `cos(λ′π)` and `cos(μ′π)` have the same sign.
    SameSign,
    OppositeSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Window {
    pub lambda_prime: f64,
    pub mu_prime: f64,
    pub case: WindowCase,
    /// The gap `a₁ − a₂` the window was computed for (with `a₁ = 1`).
    pub epsilon: f64,
    /// Admissible `a₃`, `lo < hi`.
    pub a3_interval: (f64, f64),
    /// Input indices in normalized order: `k[order[2]] = λ′k[order[0]] + μ′k[order[1]]`.
    pub order: [usize; 3],
}

impl Lemma3Window {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a3_interval.0 + self.a3_interval.1)
    }

    pub fn contains(&self, a3: f64) -> bool {
        a3 >= self.a3_interval.0 && a3 <= self.a3_interval.1
    }
}

fn check_unit(k: Vec2) -> Result<()> {
    if !k.is_finite() {
        return Err(Error::NonFinite("wavevector"));
    }
    if (k.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::InvalidParameter("wavevectors must be unit vectors"));
    }
    Ok(())
}

/// Solves `c₀a + c₁b = t`.
fn cramer(a: Vec2, b: Vec2, t: Vec2) -> (f64, f64) {
    let det = a.cross(b);
    (t.cross(b) / det, a.cross(t) / det)
}

/// The window of third amplitudes closing the origin's cell, for the gap
/// `epsilon = a₁ − a₂` at `a₁ = 1`.
pub fn lemma3_window(k1: Vec2, k2: Vec2, k3: Vec2, epsilon: f64) -> Result<Lemma3Window> {
    let ks = [k1, k2, k3];
    for k in ks {
        check_unit(k)?;
    }
    if !epsilon.is_finite() {
        return Err(Error::NonFinite("epsilon"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be > 0"));
    }
    for (first, second) in [(0, 1), (0, 2), (1, 2)] {
        if ks[first].cross(ks[second]).abs() <= COLLINEAR_TOLERANCE {
            return Err(Error::CollinearVectors { first, second });
        }
    }

    // Dividing λk₁ + μk₂ + νk₃ = 0 by its largest coefficient expresses one
    // vector through the other two with coefficients in [-1, 1].
    let mut found = None;
    for expressed in [2usize, 1, 0] {
        let (a, b) = match expressed {
            2 => (0, 1),
            1 => (0, 2),
            _ => (1, 2),
        };
        let (l, m) = cramer(ks[a], ks[b], ks[expressed]);
        if l.abs() <= 1.0 + COEFFICIENT_SLACK && m.abs() <= 1.0 + COEFFICIENT_SLACK {
            found = Some(([a, b, expressed], l.clamp(-1.0, 1.0), m.clamp(-1.0, 1.0)));
            break;
        }
    }
    let (mut order, mut lambda, mut mu) = found.ok_or(Error::DegenerateCase)?;

    let mut cl = math::cos(lambda * PI);
    let mut cm = math::cos(mu * PI);
    if cl * cm < 0.0 && cl.abs() > cm.abs() {
        order.swap(0, 1);
        core::mem::swap(&mut lambda, &mut mu);
        core::mem::swap(&mut cl, &mut cm);
    }
    if ((lambda.abs() - 0.5) - (0.5 - mu.abs())).abs() <= COLLINEAR_TOLERANCE {
        return Err(Error::DegenerateCase);
    }

    let g = epsilon;
    let (case, lo, hi) = if cl * cm < 0.0 {
        let s = if cm > 0.0 { 1.0 } else { -1.0 };
        let p = -s * g / (cm.abs() / 3.0 + 2.0 * cl.abs() / 3.0);
        let q = -s * g / (2.0 * cm.abs() / 3.0 + cl.abs() / 3.0);
        (WindowCase::OppositeSign, p.min(q), p.max(q))
    } else {
        let smallest = cl.abs().min(cm.abs());
        if smallest < COLLINEAR_TOLERANCE {
            return Err(Error::DegenerateCase);
        }
        (
            WindowCase::SameSign,
            2.0 * g / cl.abs(),
            g + 2.0 * g / smallest,
        )
    };
    Ok(Lemma3Window {
        lambda_prime: lambda,
        mu_prime: mu,
        case,
        epsilon,
        a3_interval: (lo, hi),
        order,
    })
}

/// `a₁cos(k₁′·x) + a₂cos(k₂′·x) + a₃cos(k₃′·x)` in normalized order, with
/// `a₂ = a₁(1 − ε/2)` and `a₃` at the middle of the window for the gap
/// `a₁ε/2`. Phases are zero. The origin lies in a stable compact domain once
/// `ε` is small enough; confirm with a census.
pub fn build_three_wave(
    k1: Vec2,
    k2: Vec2,
    k3: Vec2,
    epsilon: f64,
    a1: f64,
) -> Result<WaveEnsemble> {
    if !a1.is_finite() {
        return Err(Error::NonFinite("a1"));
    }
    if !(a1 > 0.0) {
        return Err(Error::InvalidParameter("a1 must be > 0"));
    }
    if !(epsilon > 0.0) || epsilon >= 2.0 {
        return Err(Error::InvalidParameter("epsilon must be in (0, 2)"));
    }
    let w = lemma3_window(k1, k2, k3, epsilon / 2.0)?;
    let ks = [k1, k2, k3];
    let amps = [a1, a1 * (1.0 - epsilon / 2.0), a1 * w.midpoint()];
    let terms = (0..3)
        .map(|i| PlaneWaveTerm::new(amps[i], ks[w.order[i]], 0.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(WaveEnsemble::new(terms))
}

/// Largest amplitude `ε₆/(4N)` for `N` extra terms such that appending them
/// with any phases keeps an `ε₆/4`-stable compact domain of a base ensemble
/// whose domain is `ε₆`-stable. With no extras there is no constraint and the
/// cap is infinite.
pub fn pad_with_small_terms(
    base: &WaveEnsemble,
    extra_wavevectors: &[Vec2],
    eps6: f64,
) -> Result<f64> {
    let _ = base;
    if !eps6.is_finite() || !(eps6 > 0.0) {
        return Err(Error::InvalidParameter("eps6 must be > 0"));
    }
    if extra_wavevectors.is_empty() {
        return Ok(f64::INFINITY);
    }
    Ok(eps6 / (4.0 * extra_wavevectors.len() as f64))
}

fn isqrt(n: u64) -> u64 {
    let mut r = math::sqrt(n as f64) as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn lattice_angle(v: (i64, i64)) -> f64 {
    Vec2::new(v.0 as f64, v.1 as f64).angle()
}

/// Every `(p, q) ∈ ℤ²` with `p² + q² = m`, sorted by angle in `[0, 2π)`.
pub fn lattice_circle_points(m: u64) -> Vec<(i64, i64)> {
    let r = isqrt(m);
    let mut out = Vec::new();
    for p in 0..=r {
        let q2 = m - p * p;
        let q = isqrt(q2);
        if q * q != q2 {
            continue;
        }
        let (p, q) = (p as i64, q as i64);
        for sp in [1, -1] {
            for sq in [1, -1] {
                let v = (sp * p, sq * q);
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort_by(|a, b| lattice_angle(*a).total_cmp(&lattice_angle(*b)));
    out
}

/// `φ_p(x) = Σᵢ aᵢ(cos(p kᵢ·x + θᵢ) + cos(p k̂ᵢ·x + θ̂ᵢ))` with every `kᵢ`, `k̂ᵢ`
/// on the circle of squared radius `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMode {
    m: u64,
    /// `(kᵢ, k̂ᵢ)` pairs.
    vectors: Vec<LatticePair>,
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
    phases_hat: Vec<f64>,
    p: u32,
}

impl TorusMode {
    pub fn new(
        m: u64,
        vectors: Vec<LatticePair>,
        amplitudes: Vec<f64>,
        phases: Vec<f64>,
        phases_hat: Vec<f64>,
        p: u32,
    ) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::InvalidParameter("m and p must be >= 1"));
        }
        if vectors.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = vectors.len();
        if amplitudes.len() != n || phases.len() != n || phases_hat.len() != n {
            return Err(Error::InvalidParameter(
                "one amplitude and two phases per vector pair",
            ));
        }
        for &(k, kh) in &vectors {
            for v in [k, kh] {
                let found = (v.0 * v.0 + v.1 * v.1) as u64;
                if found != m {
                    return Err(Error::NormMismatch { expected: m, found });
                }
            }
        }
        if amplitudes
            .iter()
            .chain(&phases)
            .chain(&phases_hat)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("torus mode coefficients"));
        }
        Ok(TorusMode {
            m,
            vectors,
            amplitudes,
            phases,
            phases_hat,
            p,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn vectors(&self) -> &[LatticePair] {
        &self.vectors
    }

    /// `p·√m`.
    pub fn lambda_p(&self) -> f64 {
        self.p as f64 * math::sqrt(self.m as f64)
    }

    /// `p²m`, the Laplace eigenvalue.
    pub fn eigenvalue(&self) -> u64 {
        (self.p as u64).pow(2) * self.m
    }

    /// Same mode at another scaling `p`.
    pub fn with_p(&self, p: u32) -> Result<TorusMode> {
        if p == 0 {
            return Err(Error::InvalidParameter("m and p must be >= 1"));
        }
        Ok(TorusMode { p, ..self.clone() })
    }

    /// Torus period, `2π` for integer wavevectors.
    pub fn period(&self) -> f64 {
        math::TAU
    }

    pub fn ensemble(&self) -> WaveEnsemble {
        let p = self.p as f64;
        let lift = |v: (i64, i64)| Vec2::new(p * v.0 as f64, p * v.1 as f64);
        let mut terms = Vec::with_capacity(2 * self.vectors.len());
        for (i, &(k, kh)) in self.vectors.iter().enumerate() {
            let a = self.amplitudes[i];
            terms.push(PlaneWaveTerm::new(a, lift(k), self.phases[i]).expect("validated"));
            terms.push(PlaneWaveTerm::new(a, lift(kh), self.phases_hat[i]).expect("validated"));
        }
        WaveEnsemble::new(terms)
    }
}

/// A circle rejected by the torus search.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedCircle {
    pub m: u64,
    pub relation: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusSearch {
    pub mode: TorusMode,
    /// Circles that had candidates near every target but carried a relation.
    pub rejected: Vec<RejectedCircle>,
}

/// The two lattice points of `points` closest in angle to `target`, within
/// `eps`, ties broken by angle order.
fn nearest_pair(points: &[(i64, i64)], target: f64, eps: f64) -> Option<LatticePair> {
    let mut near: Vec<(f64, (i64, i64))> = points
        .iter()
        .map(|&v| (math::angular_distance(lattice_angle(v), target), v))
        .filter(|&(d, _)| d < eps)
        .collect();
    if near.len() < 2 {
        return None;
    }
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some((near[0].1, near[1].1))
}

/// Searches `m = 1, 2, …, m_max` for the smallest circle carrying two lattice
/// points within angle `eps` of every target, with no integer relation of
/// height at most `search_height` among the chosen `2n` vectors.
///
/// Integer vectors always satisfy relations of height about `m^{1/4}`, so
/// only small heights are meaningful here.
#[allow(clippy::too_many_arguments)]
pub fn torus_eigenfunction(
    targets: &[Vec2],
    eps: f64,
    amplitudes: &[f64],
    phases: &[f64],
    phases_hat: &[f64],
    p: u32,
    m_max: u64,
    search_height: u32,
) -> Result<TorusSearch> {
    if targets.len() < 3 {
        return Err(Error::InvalidParameter(
            "need at least three target directions",
        ));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter("eps must be > 0"));
    }
    if amplitudes.contains(&0.0) {
        return Err(Error::InvalidParameter("amplitudes must be nonzero"));
    }
    let angles: Vec<f64> = targets
        .iter()
        .map(|t| {
            if !t.is_finite() || t.norm() == 0.0 {
                Err(Error::InvalidParameter("target directions must be nonzero"))
            } else {
                Ok(t.angle())
            }
        })
        .collect::<Result<_>>()?;
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            let d = math::angular_distance(angles[i], angles[j]);
            if d < 1e-12 || (PI - d) < 1e-12 {
                return Err(Error::InvalidParameter(
                    "target directions must be distinct and non-antipodal",
                ));
            }
        }
    }
    let n = targets.len();
    if amplitudes.len() != n || phases.len() != n || phases_hat.len() != n {
        return Err(Error::InvalidParameter(
            "one amplitude and two phases per target",
        ));
    }

    let mut rejected = Vec::new();
    for m in 1..=m_max {
        let points = lattice_circle_points(m);
        if points.len() < 2 * n {
            continue;
        }
        let Some(pairs) = angles
            .iter()
            .map(|&t| nearest_pair(&points, t, eps))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let flat: Vec<Vec2> = pairs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .map(|v| Vec2::new(v.0 as f64, v.1 as f64))
            .collect();
        match find_relation(&flat, search_height)? {
            Some((relation, _)) => rejected.push(RejectedCircle { m, relation }),
            None => {
                let mode = TorusMode::new(
                    m,
                    pairs,
                    amplitudes.to_vec(),
                    phases.to_vec(),
                    phases_hat.to_vec(),
                    p,
                )?;
                return Ok(TorusSearch { mode, rejected });
            }
        }
    }
    Err(Error::NoCircleFound { m_max })
}
