use std::fs;
use std::path::Path;

use nodal_core::wave::WaveEnsemble;
use nodal_core::Vec2;
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub a: f64,
    pub kx: f64,
    pub ky: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub terms: Vec<TermRecord>,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &WaveEnsemble) -> Self {
        let terms = e
            .terms()
            .iter()
            .map(|t| TermRecord {
                a: t.amplitude(),
                kx: t.wavevector().x,
                ky: t.wavevector().y,
                theta: t.phase(),
            })
            .collect();
        EnsembleFile { terms }
    }

    pub fn to_ensemble(&self) -> Result<WaveEnsemble> {
        let e = WaveEnsemble::from_triples(
            self.terms
                .iter()
                .map(|t| (t.a, Vec2::new(t.kx, t.ky), t.theta)),
        )?;
        Ok(e)
    }
}

pub fn parse_ensemble(text: &str) -> Result<WaveEnsemble> {
    serde_json::from_str::<EnsembleFile>(text)?.to_ensemble()
}

pub fn ensemble_to_json(e: &WaveEnsemble) -> String {
    serde_json::to_string_pretty(&EnsembleFile::from_ensemble(e)).expect("plain data serializes")
}

pub fn read_ensemble(path: &Path) -> Result<WaveEnsemble> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_ensemble(&text)
}

pub fn write_ensemble(path: &Path, e: &WaveEnsemble) -> Result<()> {
    fs::write(path, ensemble_to_json(e) + "\n").map_err(|err| LabError::io(path, err))
}
