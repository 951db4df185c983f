use serde::Serialize;

/// Serializable certificate attached to a decided verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cert {
    pub reason: String,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

impl Cert {
    pub fn new(reason: impl Into<String>) -> Cert {
        Cert { reason: reason.into(), data: serde_json::Value::Null }
    }

    pub fn with(reason: impl Into<String>, data: impl Serialize) -> Cert {
        Cert { reason: reason.into(), data: serde_json::to_value(data).unwrap_or(serde_json::Value::Null) }
    }
}

/// Three-valued verdict. Decided values carry evidence; Unknown records why
/// the computation stopped.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "evidence")]
pub enum TriBool {
    True(Cert),
    False(Cert),
    Unknown(Cert),
}

impl TriBool {
    pub fn yes(reason: impl Into<String>) -> TriBool {
        TriBool::True(Cert::new(reason))
    }

    pub fn no(reason: impl Into<String>) -> TriBool {
        TriBool::False(Cert::new(reason))
    }

    pub fn unknown(reason: impl Into<String>) -> TriBool {
        TriBool::Unknown(Cert::new(reason))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, TriBool::True(_))
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TriBool::False(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriBool::Unknown(_))
    }

    pub fn as_option(&self) -> Option<bool> {
        match self {
            TriBool::True(_) => Some(true),
            TriBool::False(_) => Some(false),
            TriBool::Unknown(_) => None,
        }
    }

    pub fn cert(&self) -> &Cert {
        match self {
            TriBool::True(c) | TriBool::False(c) | TriBool::Unknown(c) => c,
        }
    }

    /// Kleene conjunction; the first deciding conjunct supplies the evidence.
    pub fn and(&self, other: &TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False(_), _) => self.clone(),
            (_, TriBool::False(_)) => other.clone(),
            (TriBool::Unknown(_), _) => self.clone(),
            (_, TriBool::Unknown(_)) => other.clone(),
            (TriBool::True(a), TriBool::True(b)) => {
                TriBool::True(Cert::new(format!("{}; {}", a.reason, b.reason)))
            }
        }
    }

    pub fn short(&self) -> &'static str {
        match self {
            TriBool::True(_) => "true",
            TriBool::False(_) => "false",
            TriBool::Unknown(_) => "unknown",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kleene_and() {
        let t = TriBool::yes("a");
        let f = TriBool::no("b");
        let u = TriBool::unknown("c");
        assert!(t.and(&f).is_false());
        assert!(u.and(&f).is_false());
        assert!(t.and(&u).is_unknown());
        assert!(t.and(&t).is_true());
    }

    #[test]
    fn serializes_with_tag() {
        let s = serde_json::to_string(&TriBool::yes("ok")).unwrap();
        assert_eq!(s, r#"{"verdict":"True","evidence":{"reason":"ok"}}"#);
    }
}
