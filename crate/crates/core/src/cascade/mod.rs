//! Heuristic cascades.
//!
//! A cascade is an ordered list of heuristics. Each instance goes to the
//! first one; whenever a heuristic abstains the instance moves on to the
//! next. The first answer is final.

mod dsl;
mod heuristics;
mod instance;
mod scoring;
mod vector;


use std::fmt;

pub use dsl::{parse_cascade, CascadeSpec, CascadeStep, HeuristicKind, ParamKind, ParamValue};
pub use heuristics::{
    build_supervised_vectors, h_enriched, h_first_sense, h_monosemous, h_relevance_filter, h_statistical, sense_vector,
    EnrichmentCache, Heuristic, HeuristicDefaults, HeuristicParams, PosRadii, Resources, DEFAULT_CUTOFF,
    DEFAULT_MAX_SENSES,
};
pub use instance::{parse_instances, write_instances, DisambiguationInstance, InstanceHeader};
pub use scoring::{context_frequencies, document_frequencies, score_enriched, score_relevance, ContextFilter};
pub use vector::{enrich_vector, SenseVector};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Answer { sense_key: String, score: f64 },
    Abstain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicVerdict {
    pub heuristic: String,
    pub outcome: Outcome,
    /// Why the heuristic abstained, when it says.
    pub note: Option<String>,
}

impl HeuristicVerdict {
    pub fn sense_key(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Answer { sense_key, .. } => Some(sense_key),
            Outcome::Abstain => None,
        }
    }

    pub fn is_answer(&self) -> bool {
        matches!(self.outcome, Outcome::Answer { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepStatus {
    Answered { sense_key: String, score: f64 },
    Abstained { note: Option<String> },
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    /// 1-based position in the cascade.
    pub step: usize,
    pub heuristic: String,
    pub status: StepStatus,
}

impl fmt::Display for StepTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} {}: ", self.step, self.heuristic)?;
        match &self.status {
            StepStatus::Answered { sense_key, score } => write!(f, "ANSWER {sense_key} score={score}"),
            StepStatus::Abstained { note: Some(n) } => write!(f, "ABSTAIN ({n})"),
            StepStatus::Abstained { note: None } => f.write_str("ABSTAIN"),
            StepStatus::NotEvaluated => f.write_str("not evaluated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    pub verdict: HeuristicVerdict,
    /// 1-based step that answered.
    pub answered_by: Option<usize>,
    pub trace: Vec<StepTrace>,
}

/// A compiled cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    steps: Vec<Heuristic>,
}

impl Cascade {
    pub fn compile(spec: &CascadeSpec, defaults: &HeuristicDefaults) -> Result<Self> {
        if spec.steps.is_empty() {
            return Err(Error::Invalid("cascade has no steps".into()));
        }
        Ok(Cascade {
            steps: spec.steps.iter().map(|s| Heuristic::compile(s, defaults)).collect(),
        })
    }

    pub fn steps(&self) -> &[Heuristic] {
        &self.steps
    }

    pub fn run(&self, res: Resources<'_>, inst: &DisambiguationInstance) -> CascadeResult {
        let mut trace = Vec::with_capacity(self.steps.len());
        let mut result: Option<(HeuristicVerdict, usize)> = None;
        for (i, h) in self.steps.iter().enumerate() {
            let step = i + 1;
            if result.is_some() {
                trace.push(StepTrace {
                    step,
                    heuristic: h.name().to_string(),
                    status: StepStatus::NotEvaluated,
                });
                continue;
            }
            let verdict = h.evaluate(inst, res);
            let status = match &verdict.outcome {
                Outcome::Answer { sense_key, score } => StepStatus::Answered {
                    sense_key: sense_key.clone(),
                    score: *score,
                },
                Outcome::Abstain => StepStatus::Abstained {
                    note: verdict.note.clone(),
                },
            };
            trace.push(StepTrace {
                step,
                heuristic: verdict.heuristic.clone(),
                status,
            });
            if verdict.is_answer() {
                result = Some((verdict, step));
            }
        }
        match result {
            Some((verdict, step)) => CascadeResult {
                verdict,
                answered_by: Some(step),
                trace,
            },
            None => CascadeResult {
                verdict: HeuristicVerdict {
                    heuristic: "cascade".into(),
                    outcome: Outcome::Abstain,
                    note: Some("every step abstained".into()),
                },
                answered_by: None,
                trace,
            },
        }
    }
}

/// Compile `spec` with default parameters and run it on one instance.
pub fn run_cascade(spec: &CascadeSpec, inst: &DisambiguationInstance, res: Resources<'_>) -> Result<CascadeResult> {
    Ok(Cascade::compile(spec, &HeuristicDefaults::default())?.run(res, inst))
}
