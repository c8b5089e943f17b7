//! Finite sums of planar cosine waves.
//!
//! A [`WaveEnsemble`] represents `f(x) = Σ aᵢ cos(kᵢ·x + θᵢ)`. It carries the
//! two global bounds every certification step relies on:
//!
//! - `sup_bound = Σ |aᵢ|`, so `|f(x)| ≤ sup_bound` everywhere;
//! - `lipschitz_bound = Σ |aᵢ|·‖kᵢ‖`, so `‖∇f(x)‖ ≤ lipschitz_bound` everywhere.
//!
//! Both bounds are recomputed whenever the term list changes. Term order is
//! stable and identifies the index `i` of a term across every operation.

use alloc::vec::Vec;

use crate::geom::Vec2;
use crate::math::{self, TAU};
use crate::{Error, Result};

/// Angular tolerance (radians) under which two spectral atoms are merged.
pub const ATOM_MERGE_TOLERANCE: f64 = 1e-9;

/// Amplitudes closer than this count as equal in [`pair_collapse`].
pub const AMPLITUDE_MATCH_TOLERANCE: f64 = 1e-12;

/// One term `a cos(k·x + θ)`. The phase is stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveTerm {
    amplitude: f64,
    wavevector: Vec2,
    phase: f64,
}

impl PlaneWaveTerm {
    pub fn new(amplitude: f64, wavevector: Vec2, phase: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::NonFinite("amplitude"));
        }
        if !wavevector.is_finite() {
            return Err(Error::NonFinite("wavevector"));
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite("phase"));
        }
        Ok(PlaneWaveTerm {
            amplitude,
            wavevector,
            phase: math::wrap_angle(phase),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn wavevector(&self) -> Vec2 {
        self.wavevector
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    #[inline]
    pub fn evaluate(&self, x: Vec2) -> f64 {
        self.amplitude * math::cos(self.wavevector.dot(x) + self.phase)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveEnsemble {
    terms: Vec<PlaneWaveTerm>,
    sup_bound: f64,
    lipschitz_bound: f64,
}

impl Default for WaveEnsemble {
    fn default() -> Self {
        WaveEnsemble::new(Vec::new())
    }
}

impl WaveEnsemble {
    pub fn new(terms: Vec<PlaneWaveTerm>) -> Self {
        let mut ensemble = WaveEnsemble {
            terms,
            sup_bound: 0.0,
            lipschitz_bound: 0.0,
        };
        ensemble.recompute_bounds();
        ensemble
    }

    /// Builds an ensemble from `(amplitude, wavevector, phase)` triples.
    pub fn from_triples<I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, Vec2, f64)>,
    {
        let terms = triples
            .into_iter()
            .map(|(a, k, theta)| PlaneWaveTerm::new(a, k, theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(WaveEnsemble::new(terms))
    }

    fn recompute_bounds(&mut self) {
        self.sup_bound = self.terms.iter().map(|t| t.amplitude.abs()).sum();
        self.lipschitz_bound = self
            .terms
            .iter()
            .map(|t| t.amplitude.abs() * t.wavevector.norm())
            .sum();
    }

    pub fn push(&mut self, term: PlaneWaveTerm) {
        self.terms.push(term);
        self.recompute_bounds();
    }

    pub fn extend<I: IntoIterator<Item = PlaneWaveTerm>>(&mut self, terms: I) {
        self.terms.extend(terms);
        self.recompute_bounds();
    }

    pub fn terms(&self) -> &[PlaneWaveTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    pub fn wavevectors(&self) -> Vec<Vec2> {
        self.terms.iter().map(|t| t.wavevector).collect()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.amplitude).collect()
    }

    /// `Σ aᵢ cos(kᵢ·x + θᵢ)`.
    #[inline]
    pub fn evaluate(&self, x: Vec2) -> f64 {
        self.terms.iter().map(|t| t.evaluate(x)).sum()
    }

    /// `−Σ aᵢ sin(kᵢ·x + θᵢ) kᵢ`.
    pub fn gradient(&self, x: Vec2) -> Vec2 {
        self.terms.iter().fold(Vec2::ZERO, |acc, t| {
            let s = -t.amplitude * math::sin(t.wavevector.dot(x) + t.phase);
            acc + s * t.wavevector
        })
    }

    /// The ensemble `y ↦ f(x0 + y)`: same amplitudes and wavevectors, phases
    /// shifted by `kᵢ·x0`.
    pub fn translate(&self, x0: Vec2) -> WaveEnsemble {
        let terms = self
            .terms
            .iter()
            .map(|t| PlaneWaveTerm {
                amplitude: t.amplitude,
                wavevector: t.wavevector,
                phase: math::wrap_angle(t.phase + t.wavevector.dot(x0)),
            })
            .collect();
        WaveEnsemble::new(terms)
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: f64) -> WaveEnsemble {
        let terms = self
            .terms
            .iter()
            .map(|t| PlaneWaveTerm {
                amplitude: t.amplitude * factor,
                ..*t
            })
            .collect();
        WaveEnsemble::new(terms)
    }

    /// The symmetric measure `Σ |aᵢ|² (δ_{kᵢ/|kᵢ|} + δ_{−kᵢ/|kᵢ|})`, normalized
    /// to total mass 1. The raw mass `2Σ|aᵢ|²` is kept in
    /// [`DirectionMeasure::scale`].
    ///
    /// Atoms closer than [`ATOM_MERGE_TOLERANCE`] radians are merged and
    /// zero-mass atoms are dropped, so `atoms().len()` is the support size.
    pub fn spectral_measure(&self) -> Result<DirectionMeasure> {
        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(2 * self.terms.len());
        for (index, t) in self.terms.iter().enumerate() {
            if t.wavevector.norm() == 0.0 {
                return Err(Error::ZeroWavevector { index });
            }
            let mass = t.amplitude * t.amplitude;
            if mass == 0.0 {
                continue;
            }
            let angle = t.wavevector.angle();
            raw.push((angle, mass));
            raw.push((math::wrap_angle(angle + math::PI), mass));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (angle, mass) in raw {
            match merged.last_mut() {
                Some(last) if angle - last.0 <= ATOM_MERGE_TOLERANCE => last.1 += mass,
                _ => merged.push((angle, mass)),
            }
        }
        // atoms straddling angle 0
        if merged.len() > 1 {
            let first = merged[0].0;
            let last = merged[merged.len() - 1].0;
            if first + TAU - last <= ATOM_MERGE_TOLERANCE {
                let (_, mass) = merged.pop().unwrap();
                merged[0].1 += mass;
            }
        }

        let scale: f64 = merged.iter().map(|a| a.1).sum();
        let atoms = merged
            .into_iter()
            .map(|(angle, mass)| Atom {
                direction: Vec2::from_angle(angle),
                angle,
                mass: if scale > 0.0 { mass / scale } else { 0.0 },
            })
            .collect::<Vec<_>>();
        let total_mass = atoms.iter().map(|a| a.mass).sum();
        Ok(DirectionMeasure {
            atoms,
            total_mass,
            scale,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub direction: Vec2,
    /// Angle of `direction` in `[0, 2π)`.
    pub angle: f64,
    pub mass: f64,
}

/// Atomic measure on the unit circle, symmetric under `v ↦ −v`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionMeasure {
    atoms: Vec<Atom>,
    total_mass: f64,
    scale: f64,
}

impl DirectionMeasure {
    /// Atoms sorted by angle.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn support_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Mass before normalization, `2 Σ |aᵢ|²`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Mass of the atom at `direction`, or 0 when there is none.
    pub fn mass_at(&self, direction: Vec2) -> f64 {
        let angle = direction.angle();
        self.atoms
            .iter()
            .filter(|a| math::angular_distance(a.angle, angle) <= ATOM_MERGE_TOLERANCE)
            .map(|a| a.mass)
            .sum()
    }
}

/// Collapses two equal-amplitude terms with the sum-to-product identity
///
/// ```text
/// cos(k_a·y + θ_a) + cos(k_b·y + θ_b)
///     = 2 cos((θ_a − θ_b)/2 + (k_a − k_b)·y/2) cos((k_a + k_b)·y/2 + (θ_a + θ_b)/2)
/// ```
///
/// dropping the slow `(k_a − k_b)·y/2` modulation. The returned term has
/// wavevector `(k_a + k_b)/2`, amplitude `2a cos((θ_a − θ_b)/2)` and phase
/// `(θ_a + θ_b)/2`. The second value bounds the error `a ‖k_a − k_b‖ R` on the
/// ball `‖y‖ ≤ radius`; it is zero when the wavevectors coincide.
pub fn pair_collapse(
    term_a: &PlaneWaveTerm,
    term_b: &PlaneWaveTerm,
    radius: f64,
) -> Result<(PlaneWaveTerm, f64)> {
    if (term_a.amplitude - term_b.amplitude).abs() > AMPLITUDE_MATCH_TOLERANCE {
        return Err(Error::AmplitudeMismatch {
            a: term_a.amplitude,
            b: term_b.amplitude,
        });
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter("radius must be finite and >= 0"));
    }
    let a = term_a.amplitude;
    let half_diff = (term_a.phase - term_b.phase) / 2.0;
    let mean_phase = (term_a.phase + term_b.phase) / 2.0;
    let mean_k = 0.5 * (term_a.wavevector + term_b.wavevector);
    let collapsed = PlaneWaveTerm::new(2.0 * a * math::cos(half_diff), mean_k, mean_phase)?;
    let spread = (term_a.wavevector - term_b.wavevector).norm();
    let bound = if spread == 0.0 {
        0.0
    } else {
        a.abs() * spread * radius
    };
    Ok((collapsed, bound))
}
