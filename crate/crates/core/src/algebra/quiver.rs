use serde::{Deserialize, Deserializer, Serialize};

use crate::exactla::Field;

/// Quiver with relations. Paths are written in traversal order, first
/// arrow first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverPresentation {
    #[serde(default = "default_field")]
    pub field: Field,
    #[serde(deserialize_with = "labels")]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub relations: Vec<Vec<RelationTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    #[serde(deserialize_with = "label")]
    pub source: String,
    #[serde(deserialize_with = "label")]
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTerm {
    #[serde(default = "one")]
    pub coeff: String,
    pub path: Vec<String>,
}

fn default_field() -> Field {
    Field::Rationals
}

fn one() -> String {
    "1".to_string()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Label {
    S(String),
    N(i64),
}

impl Label {
    fn into_string(self) -> String {
        match self {
            Label::S(s) => s,
            Label::N(n) => n.to_string(),
        }
    }
}

fn label<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Ok(Label::deserialize(d)?.into_string())
}

fn labels<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    Ok(Vec::<Label>::deserialize(d)?.into_iter().map(Label::into_string).collect())
}

impl QuiverPresentation {
    pub fn new(field: Field, vertices: &[&str]) -> QuiverPresentation {
        QuiverPresentation {
            field,
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn arrow(mut self, name: &str, source: &str, target: &str) -> Self {
        self.arrows.push(Arrow { name: name.into(), source: source.into(), target: target.into() });
        self
    }

    /// Adds a monomial relation given in traversal order.
    pub fn zero_path(mut self, path: &[&str]) -> Self {
        self.relations.push(vec![RelationTerm { coeff: "1".into(), path: path.iter().map(|s| s.to_string()).collect() }]);
        self
    }

    pub fn relation(mut self, terms: &[(&str, &[&str])]) -> Self {
        self.relations.push(
            terms
                .iter()
                .map(|(c, p)| RelationTerm { coeff: c.to_string(), path: p.iter().map(|s| s.to_string()).collect() })
                .collect(),
        );
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn from_json(s: &str) -> Result<QuiverPresentation, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(|r| r.len() == 1)
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    pub fn arrow_index(&self, a: &str) -> Option<usize> {
        self.arrows.iter().position(|x| x.name == a)
    }

    /// Longest path occurring in a relation.
    pub fn max_relation_length(&self) -> usize {
        self.relations.iter().flat_map(|r| r.iter().map(|t| t.path.len())).max().unwrap_or(0)
    }

    /// Conventional name of a path given in traversal order: last arrow first.
    pub fn render_path(&self, path: &[usize]) -> String {
        let sep = if self.arrows.iter().all(|a| a.name.chars().count() == 1) { "" } else { "*" };
        path.iter().rev().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(sep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_schema() {
        let js = r#"{"field":{"Fp":2},"vertices":[1,"2"],
            "arrows":[{"name":"a","source":"2","target":1},{"name":"b","source":2,"target":2}],
            "relations":[[{"coeff":"1","path":["b","b"]}],[{"coeff":"1","path":["b","a"]}]]}"#;
        let q = QuiverPresentation::from_json(js).unwrap();
        assert_eq!(q.field, Field::Prime(2));
        assert_eq!(q.vertices, vec!["1", "2"]);
        assert_eq!(q.arrows[0].target, "1");
        assert_eq!(q.render_path(&[1, 0]), "ab");
        assert!(q.is_monomial());
    }
}
