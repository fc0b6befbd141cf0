use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat_at};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub c: String,
    pub e: Vec<u32>,
}

/// Serialized form `{"vars": [...], "terms": [{"c": "p/q", "e": [...]}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub vars: Vec<String>,
    pub terms: Vec<TermDoc>,
}

impl From<&Poly> for PolyDoc {
    fn from(p: &Poly) -> Self {
        PolyDoc {
            vars: p.vars().to_vec(),
            terms: p.terms().map(|(m, c)| TermDoc { c: format_rat(c), e: m.0.clone() }).collect(),
        }
    }
}

impl PolyDoc {
    pub fn to_poly(&self) -> Result<Poly> {
        let mut seen = std::collections::HashSet::new();
        for v in &self.vars {
            if !seen.insert(v) {
                return Err(Error::parse("vars", format!("duplicate variable '{v}'")));
            }
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            if t.e.len() != self.vars.len() {
                return Err(Error::parse(
                    format!("terms[{i}].e"),
                    format!("expected {} exponents, got {}", self.vars.len(), t.e.len()),
                ));
            }
            terms.push((t.e.clone(), parse_rat_at(&t.c, format!("terms[{i}].c"))?));
        }
        Ok(Poly::from_terms(&self.vars, terms))
    }
}

impl Poly {
    pub fn to_doc(&self) -> PolyDoc {
        PolyDoc::from(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Poly> {
        let doc: PolyDoc = serde_json::from_str(s).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        doc.to_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_expr, var_names};

    #[test]
    fn round_trip() {
        let vars = var_names("u", 3);
        let f = parse_expr(&vars, "u0^2 - 3/4*u1*u2 + 7").unwrap();
        let s = serde_json::to_string(&f.to_doc()).unwrap();
        assert_eq!(Poly::from_json_str(&s).unwrap(), f);
        assert!(s.starts_with(r#"{"vars":["u0","u1","u2"],"terms":[{"c":"1","e":[2,0,0]}"#));
    }

    #[test]
    fn bad_arity_reports_location() {
        let s = r#"{"vars":["x"],"terms":[{"c":"1","e":[1,2]}]}"#;
        match Poly::from_json_str(s) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "terms[0].e"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
