use crate::EvalError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorError {
    Perceptual,
    Comprehension,
    Reasoning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasoningError {
    RuleApplication,
    MentalSimulation,
    HolisticLocal,
}

/// Why a model got an item wrong. Sub-categories refine reasoning errors only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAnnotation")]
pub struct ErrorAnnotation {
    pub item_id: String,
    pub major: MajorError,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub: Option<ReasoningError>,
    #[serde(default)]
    pub note: String,
}

#[derive(Deserialize)]
struct RawAnnotation {
    item_id: String,
    major: MajorError,
    #[serde(default)]
    sub: Option<ReasoningError>,
    #[serde(default)]
    note: String,
}

impl TryFrom<RawAnnotation> for ErrorAnnotation {
    type Error = EvalError;
    fn try_from(r: RawAnnotation) -> Result<Self, EvalError> {
        ErrorAnnotation::new(r.item_id, r.major, r.sub, r.note)
    }
}

impl ErrorAnnotation {
    pub fn new(
        item_id: impl Into<String>,
        major: MajorError,
        sub: Option<ReasoningError>,
        note: impl Into<String>,
    ) -> Result<Self, EvalError> {
        if sub.is_some() && major != MajorError::Reasoning {
            return Err(EvalError::Annotation(format!("{major:?} errors take no sub-category")));
        }
        Ok(ErrorAnnotation {
            item_id: item_id.into(),
            major,
            sub,
            note: note.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_only_under_reasoning() {
        assert!(ErrorAnnotation::new("x", MajorError::Reasoning, Some(ReasoningError::RuleApplication), "").is_ok());
        assert!(ErrorAnnotation::new("x", MajorError::Perceptual, Some(ReasoningError::HolisticLocal), "").is_err());
        let bad = r#"{"item_id":"x","major":"comprehension","sub":"mental_simulation"}"#;
        assert!(serde_json::from_str::<ErrorAnnotation>(bad).is_err());
        let good = r#"{"item_id":"x","major":"reasoning","sub":"mental_simulation","note":"lost track"}"#;
        let a: ErrorAnnotation = serde_json::from_str(good).unwrap();
        assert_eq!(serde_json::from_str::<ErrorAnnotation>(&serde_json::to_string(&a).unwrap()).unwrap(), a);
    }
}
