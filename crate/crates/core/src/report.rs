//! Report files (`wcalc.report/v1`).

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Evidence, Verdict};
use crate::lattice::Window;
use crate::scenario::{Scenario, ScenarioKind};

pub const REPORT_SCHEMA: &str = "wcalc.report/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    /// Wall-clock time of the certificate pipeline in microseconds.
    #[serde(with = "crate::rational::int_string")]
    pub elapsed_us: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub scenario_id: String,
    pub kind: ScenarioKind,
    pub synthetic: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    /// Outcome of re-checking a `certified` verdict from the evidence.
    pub evidence_verified: bool,
    pub evidence: Evidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(s: &Scenario, window: Option<Window>, cert: Certificate) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            scenario_id: s.id.clone(),
            kind: s.kind,
            synthetic: s.synthetic,
            verdict: cert.verdict,
            window,
            evidence_verified: cert.verify(),
            evidence: cert.evidence,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Certified => "CERTIFIED",
            Verdict::NotCertified => "NOT CERTIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        let detail = match &self.evidence {
            Evidence::Independence { count, rank, .. } => format!("rank {rank} of {count} classes"),
            Evidence::Antisymmetry { checked, failures } => format!("{} of {checked} classes fail", failures.len()),
            Evidence::Irreducible { k, reduced, closed_form_holds, .. } => format!(
                "k = {k}, closed form {}, reduced retraction has {} terms",
                if *closed_form_holds { "holds" } else { "fails" },
                reduced.len()
            ),
            Evidence::Reducible { direct, .. } => match direct.obstructions.first() {
                Some(o) => format!(
                    "{} obstruction orbit(s), first at {} with sum {}",
                    direct.obstructions.len(),
                    o.representative,
                    o.sum
                ),
                None => "loops are conjugate".to_string(),
            },
            Evidence::WindowTooSmall { bound, required } => format!("window bound {bound} too small, need {required}"),
            Evidence::StepLimit { reason } => reason.clone(),
        };
        let tag = if self.synthetic { " [synthetic]" } else { "" };
        format!("{}{tag}: {verdict} ({detail})", self.scenario_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenarios() -> Vec<Scenario> {
        [
            r#"{"schema": "wcalc.scenario/v1", "id": "r", "kind": "reducible",
                "presentation": {"factor_orders": [0, 3]}, "alpha1": [[0, 1]], "alpha2": [[1, 1]],
                "coefficients": ["2", "-1"]}"#,
            r#"{"schema": "wcalc.scenario/v1", "id": "i", "kind": "irreducible", "synthetic": true,
                "window": {"rank": 1, "bound": 2},
                "classes": [[{"a": [1], "b": [-2], "coeff": "1"}, {"a": [-1], "b": [2], "coeff": "-1"}]],
                "coefficients": ["1"],
                "curves": [{"image_class": [1, 0], "intersection": "2", "relation": "equal"},
                           {"image_class": [-1, 0], "intersection": "-2", "relation": "negated"},
                           {"image_class": [0, 1], "intersection": "1", "relation": "independent"}]}"#,
            r#"{"schema": "wcalc.scenario/v1", "id": "n", "kind": "independence",
                "window": {"rank": 1, "bound": 2},
                "classes": [[{"a": [1], "b": [-2], "coeff": "1/2"}], [{"a": [2], "b": [1], "coeff": "3"}]]}"#,
            r#"{"schema": "wcalc.scenario/v1", "id": "a", "kind": "antisymmetry",
                "window": {"rank": 1, "bound": 2}, "classes": [[{"a": [1], "b": [-2], "coeff": "1"}]]}"#,
        ]
        .iter()
        .map(|t| Scenario::parse(t).unwrap())
        .collect()
    }

    #[test]
    fn reports_round_trip() {
        for s in scenarios() {
            let cert = s.run(None).unwrap();
            let mut r = Report::new(&s, s.effective_window(None), cert);
            assert_eq!(Report::parse(&r.to_json()).unwrap(), r, "{}", r.to_json());
            r.timing = Some(Timing { elapsed_us: 1234 });
            assert_eq!(Report::parse(&r.to_json()).unwrap(), r);
            assert!(!r.summary().is_empty());
        }
    }

    #[test]
    fn certified_reports_verify() {
        for s in scenarios() {
            let r = Report::new(&s, s.effective_window(None), s.run(None).unwrap());
            assert!(r.evidence_verified, "{}", r.summary());
        }
    }
}
