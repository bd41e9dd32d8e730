//! Per-claim verification records.

use serde::{Deserialize, Serialize};

use crate::exactlin::FieldSpec;
use crate::modcalc::{Status, Verdict};

/// One checked claim. `anchor` names the result being certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub anchor: String,
    pub status: Status,
    pub bound: usize,
    pub witness: serde_json::Value,
}

impl ClaimRecord {
    pub fn new(claim_id: impl Into<String>, anchor: impl Into<String>, status: Status, bound: usize, witness: serde_json::Value) -> Self {
        ClaimRecord {
            claim_id: claim_id.into(),
            anchor: anchor.into(),
            status,
            bound,
            witness,
        }
    }

    pub fn from_verdict(claim_id: impl Into<String>, anchor: impl Into<String>, v: &Verdict) -> Self {
        Self::new(claim_id, anchor, v.status, v.bound, serde_json::json!({ "details": v.details }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub exponents: Vec<usize>,
    pub field: FieldSpec,
    pub dim: usize,
    pub n: usize,
    pub nilpotency_index: usize,
    pub bound: usize,
    pub order: usize,
    pub identity_order: usize,
    pub seed: u64,
    pub status: Status,
    pub claims: Vec<ClaimRecord>,
}

impl Report {
    pub fn push(&mut self, c: ClaimRecord) {
        self.status = self.status.and(c.status);
        self.claims.push(c);
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.claim_id == id)
    }

    /// 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        status_exit_code(self.status)
    }

    /// Plain-text table with the same content as the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "exponents {:?}  field {}  dim {}  n {}  nilpotency {}\nbound {}  order {}  identity_order {}  seed {}\n",
            self.exponents, self.field, self.dim, self.n, self.nilpotency_index, self.bound, self.order, self.identity_order, self.seed
        );
        let w = self.claims.iter().map(|c| c.claim_id.len()).max().unwrap_or(0);
        for c in &self.claims {
            out.push_str(&format!(
                "{:<13} {:<w$}  bound {:<2} {}  {}\n",
                format!("{:?}", c.status).to_lowercase(),
                c.claim_id,
                c.bound,
                c.anchor,
                c.witness
            ));
        }
        out.push_str(&format!("overall {}\n", format!("{:?}", self.status).to_lowercase()));
        out
    }
}

pub fn status_exit_code(s: Status) -> i32 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inconclusive => 2,
    }
}
