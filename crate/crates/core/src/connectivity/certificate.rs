use serde::{Deserialize, Serialize};

use crate::tree::EpWordJson;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    Disconnected,
    /// Connected by verified relations whose letter graph is connected; for
    /// the dendrite heuristic, "consistent with a dendrite".
    Connected,
    Excluded,
    NotExcluded,
    Inconclusive,
}

/// Outcome of a geometric test, together with the evidence behind it.
///
/// Partitions and witness words use one-based letters, like every other
/// serialized word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Cover level or search depth at which the verdict was reached.
    pub level: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<EpWordJson>,
    /// Set when a resource cap cut the search short.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub low_confidence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn new(kind: CertificateKind, level: usize) -> Self {
        Self {
            kind,
            level,
            partition: Vec::new(),
            witness: None,
            low_confidence: false,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is(&self, kind: CertificateKind) -> bool {
        self.kind == kind
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
