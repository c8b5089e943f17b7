//! JSON views of hypothesis reports and censuses.

use nodal_core::census::{NodalCensus, Refinement, Sign};
use nodal_core::criteria::{
    DominationVerdict, IndependenceOutcome, IndependenceVerdict, Theorem2Report,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IndependenceJson {
    IndependentUpToHeight {
        height: u32,
        witness: [f64; 2],
        separation: f64,
        empirical_t: Option<f64>,
    },
    RelationFound {
        coefficients: Vec<i64>,
        residual: [f64; 2],
    },
}

impl From<&IndependenceVerdict> for IndependenceJson {
    fn from(v: &IndependenceVerdict) -> Self {
        match &v.outcome {
            IndependenceOutcome::IndependentUpToHeight {
                height,
                witness,
                separation,
            } => IndependenceJson::IndependentUpToHeight {
                height: *height,
                witness: [witness.x, witness.y],
                separation: *separation,
                empirical_t: v.empirical_t,
            },
            IndependenceOutcome::RelationFound {
                coefficients,
                residual,
            } => IndependenceJson::RelationFound {
                coefficients: coefficients.clone(),
                residual: [residual.x, residual.y],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationJson {
    pub signs: Vec<i8>,
    pub residual: f64,
    pub non_dominated: bool,
}

impl From<&DominationVerdict> for DominationJson {
    fn from(v: &DominationVerdict) -> Self {
        DominationJson {
            signs: v.signs.clone(),
            residual: v.residual,
            non_dominated: v.non_dominated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketJson {
    pub start: f64,
    pub end: f64,
    pub members: Vec<usize>,
    #[serde(flatten)]
    pub verdict: DominationJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckJson {
    pub support_count: usize,
    pub support_ok: bool,
    pub independence: IndependenceJson,
    pub buckets: Vec<BucketJson>,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl From<&Theorem2Report> for CheckJson {
    fn from(r: &Theorem2Report) -> Self {
        CheckJson {
            support_count: r.support_count,
            support_ok: r.support_ok,
            independence: (&r.independence).into(),
            buckets: r
                .buckets
                .iter()
                .map(|b| BucketJson {
                    start: b.start,
                    end: b.end,
                    members: b.members.clone(),
                    verdict: (&b.verdict).into(),
                })
                .collect(),
            passed: r.passed,
            failures: r.failures(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentJson {
    pub sign: &'static str,
    /// `[xmin, ymin, xmax, ymax]`
    pub bbox: [f64; 4],
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepJson {
    pub step: f64,
    pub plain_count: usize,
    pub certified_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusJson {
    pub center: [f64; 2],
    pub radius: f64,
    pub step: f64,
    pub margin: f64,
    pub plain_count: usize,
    pub certified_count: usize,
    pub components: Vec<ComponentJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepJson>>,
}

impl From<&NodalCensus> for CensusJson {
    fn from(c: &NodalCensus) -> Self {
        CensusJson {
            center: [c.window.center.x, c.window.center.y],
            radius: c.window.half_width,
            step: c.window.step,
            margin: c.margin,
            plain_count: c.plain_count,
            certified_count: c.certified_count,
            components: c
                .components
                .iter()
                .map(|comp| ComponentJson {
                    sign: match comp.sign {
                        Sign::Positive => "+",
                        Sign::Negative => "-",
                    },
                    bbox: [
                        comp.bbox.min.x,
                        comp.bbox.min.y,
                        comp.bbox.max.x,
                        comp.bbox.max.y,
                    ],
                    cells: comp.len(),
                })
                .collect(),
            trace: None,
        }
    }
}

impl From<&Refinement> for CensusJson {
    fn from(r: &Refinement) -> Self {
        let mut json = CensusJson::from(&r.census);
        json.trace = Some(
            r.trace
                .iter()
                .map(|s| StepJson {
                    step: s.step,
                    plain_count: s.plain_count,
                    certified_count: s.certified_count,
                })
                .collect(),
        );
        json
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}
