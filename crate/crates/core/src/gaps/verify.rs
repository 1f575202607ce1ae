use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::predict::{sigma_recursion, three_gap_predict, ThreeGapPrediction};
use super::report::{gap_report, Cluster};
use crate::error::Result;
use crate::iet::{dplus1_condition, is_arc_exchange, keane_check, Iet, KeaneOutcome};
use crate::numerics::RealValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// The result of a check, carrying both sides of the comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub check: String,
    pub status: VerificationStatus,
    pub expected: Value,
    pub observed: Value,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub message: String,
}

impl VerificationOutcome {
    pub fn new(
        check: &str,
        ok: bool,
        expected: Value,
        observed: Value,
        message: impl Into<String>,
    ) -> Self {
        Self {
            check: check.to_string(),
            status: if ok {
                VerificationStatus::Pass
            } else {
                VerificationStatus::Fail
            },
            expected,
            observed,
            message: message.into(),
        }
    }

    pub fn not_applicable(check: &str, message: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            status: VerificationStatus::NotApplicable,
            expected: Value::Null,
            observed: Value::Null,
            message: message.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == VerificationStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == VerificationStatus::Fail
    }
}

pub(crate) fn clusters_match(expected: &[Cluster], observed: &[Cluster], eps: f64) -> bool {
    expected.len() == observed.len()
        && expected
            .iter()
            .zip(observed)
            .all(|(e, o)| e.count == o.count && (e.length - o.length).abs() <= eps)
}

/// Compares the gap report of the rotation by `alpha` with the three gap
/// prediction, and the sorting permutation with the recursion.
pub fn verify_three_gap(alpha: &RealValue, n: usize, eps: f64) -> Result<VerificationOutcome> {
    let pred = three_gap_predict(alpha, n as u64)?;
    let rot = Iet::rotation(alpha.value())?;
    let rep = gap_report(&rot, n, eps, false)?;
    let expected = pred.expected_clusters(eps);
    let mut ok = clusters_match(&expected, &rep.clusters, eps) && rep.clusters.len() <= 3;
    let mut msg = String::new();
    let mut sigma_expected = Value::Null;
    if let ThreeGapPrediction::Generic { left, right, .. } = pred {
        let sigma = sigma_recursion(n, left.q as usize, right.q as usize)?;
        if sigma != rep.sigma {
            ok = false;
            msg = "sorting permutation differs from the recursion".into();
        }
        sigma_expected = json!(sigma);
    }
    if !ok && msg.is_empty() {
        msg = "gap clusters differ from the prediction".into();
    }
    Ok(VerificationOutcome::new(
        "three-gap",
        ok,
        json!({"prediction": pred, "clusters": expected, "sigma": sigma_expected}),
        json!({"clusters": rep.clusters, "sigma": rep.sigma}),
        msg,
    ))
}

/// Checks the bound on distinct gap lengths: `d + 1` when
/// `pi^{-1}(pi(1) - 1) = d`, else `d + 2`; and in either case `3(d - 1)`.
///
/// Minimality is certified by a bounded Keane check first; when that fails
/// the outcome is not applicable.
pub fn verify_dplus2(t: &Iet, n: usize, eps: f64) -> Result<VerificationOutcome> {
    let d = t.d();
    if d < 2 {
        return Ok(VerificationOutcome::not_applicable(
            "dplus2",
            "identity map is not minimal",
        ));
    }
    let keane = keane_check(t, n.max(1000), 1e-10 / d as f64);
    if let KeaneOutcome::Violated { .. } = keane {
        return Ok(VerificationOutcome {
            observed: json!({"keane": keane}),
            ..VerificationOutcome::not_applicable(
                "dplus2",
                "Keane condition fails; minimality not certified",
            )
        });
    }
    let rep = gap_report(t, n, eps, false)?;
    let sharp = dplus1_condition(t.pi());
    let bound = if sharp { d + 1 } else { d + 2 };
    let graph_bound = 3 * (d - 1);
    let count = rep.clusters.len();
    let ok = count <= bound && count <= graph_bound;
    Ok(VerificationOutcome::new(
        "dplus2",
        ok,
        json!({"bound": bound, "graph_bound": graph_bound}),
        json!({
            "distinct_lengths": count,
            "clusters": rep.clusters,
            "dplus1_condition": sharp,
            "arc_exchange": is_arc_exchange(t.pi()).ok(),
        }),
        if ok {
            String::new()
        } else {
            format!("{count} distinct lengths exceed the bound")
        },
    ))
}
