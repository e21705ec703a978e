//! Model JSON:
//!
//! ```json
//! {"domain_size":2,"identity":[[0,0]],"names":{"a":0},"predicates":{"P/1":[[0]],"Q/0":true}}
//! ```
//!
//! Keys are sorted, tuples and pairs are in lexicographic order, undenoting
//! names are left out of `names`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{Extension, Model};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid model JSON: {0}")]
pub struct ModelJsonError(pub String);

fn bad(message: impl Into<String>) -> ModelJsonError {
    ModelJsonError(message.into())
}

impl Model {
    pub fn to_json(&self) -> Value {
        let names: Map<String, Value> = self
            .names
            .iter()
            .filter_map(|(n, d)| d.map(|d| (n.clone(), json!(d))))
            .collect();
        let predicates: Map<String, Value> = self
            .predicates
            .iter()
            .map(|(symbol, ext)| {
                let value = if ext.arity == 0 {
                    Value::Bool(!ext.tuples.is_empty())
                } else {
                    json!(ext.tuples)
                };
                (format!("{symbol}/{}", ext.arity), value)
            })
            .collect();
        let identity: Vec<[usize; 2]> = self.identity.iter().map(|&(d, e)| [d, e]).collect();
        json!({
            "domain_size": self.domain_size,
            "identity": identity,
            "names": names,
            "predicates": predicates,
        })
    }

    /// Compact rendering, stable byte for byte.
    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    /// Read a model back. Names left out are undenoting, which only the
    /// partial profile accepts.
    pub fn from_json(value: &Value) -> Result<Model, ModelJsonError> {
        let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
        if let Some(key) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "domain_size" | "identity" | "names" | "predicates"))
        {
            return Err(bad(format!("unexpected key `{key}`")));
        }
        let domain_size = obj
            .get("domain_size")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("`domain_size` must be a non-negative integer"))?
            as usize;
        let mut m = Model::new(domain_size);

        if let Some(names) = obj.get("names") {
            let names = names.as_object().ok_or_else(|| bad("`names` must be an object"))?;
            for (n, d) in names {
                let d = d
                    .as_u64()
                    .ok_or_else(|| bad(format!("name {n} must map to an element")))?;
                m.names.insert(n.clone(), Some(d as usize));
            }
        }

        if let Some(preds) = obj.get("predicates") {
            let preds = preds
                .as_object()
                .ok_or_else(|| bad("`predicates` must be an object"))?;
            for (key, value) in preds {
                let (symbol, arity) = key
                    .rsplit_once('/')
                    .and_then(|(s, a)| Some((s, a.parse::<usize>().ok()?)))
                    .ok_or_else(|| bad(format!("predicate key `{key}` is not SYMBOL/ARITY")))?;
                let ext = if arity == 0 {
                    let truth = value
                        .as_bool()
                        .ok_or_else(|| bad(format!("{key} must be true or false")))?;
                    Extension::truth(truth)
                } else {
                    let tuples = value
                        .as_array()
                        .ok_or_else(|| bad(format!("{key} must be a list of tuples")))?
                        .iter()
                        .map(|t| element_list(t, arity))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| bad(format!("{key} tuples must have {arity} elements")))?;
                    Extension::with_tuples(arity, tuples)
                };
                m.predicates.insert(symbol.to_string(), ext);
            }
        }

        if let Some(identity) = obj.get("identity") {
            for pair in identity
                .as_array()
                .ok_or_else(|| bad("`identity` must be a list of pairs"))?
            {
                let pair = element_list(pair, 2).ok_or_else(|| bad("identity entries are pairs"))?;
                m.identity.insert((pair[0], pair[1]));
            }
        }
        Ok(m)
    }

    pub fn from_json_str(text: &str) -> Result<Model, ModelJsonError> {
        let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        Model::from_json(&value)
    }
}

fn element_list(v: &Value, len: usize) -> Option<Vec<usize>> {
    let items = v.as_array()?;
    if items.len() != len {
        return None;
    }
    items.iter().map(|d| d.as_u64().map(|d| d as usize)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_sorted_and_compact() {
        let m = Model::new(3)
            .with_name("b", Some(2))
            .with_name("a", Some(0))
            .with_name("c", None)
            .with_predicate("Q", Extension::truth(true))
            .with_predicate("P", Extension::with_tuples(1, [vec![2], vec![0]]))
            .with_identity([(2, 1), (1, 2), (1, 1), (2, 2), (0, 0)]);
        assert_eq!(
            m.to_json_string(),
            r#"{"domain_size":3,"identity":[[0,0],[1,1],[1,2],[2,1],[2,2]],"names":{"a":0,"b":2},"predicates":{"P/1":[[0],[2]],"Q/0":true}}"#
        );
    }

    #[test]
    fn reads_back_what_it_writes() {
        let m = Model::new(2)
            .with_name("a", Some(1))
            .with_predicate("R", Extension::with_tuples(2, [vec![0, 1]]))
            .with_predicate("S", Extension::truth(false))
            .with_identity([(0, 0)]);
        assert_eq!(Model::from_json_str(&m.to_json_string()).unwrap(), m);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Model::from_json_str(r#"{"names":{}}"#).is_err());
        assert!(Model::from_json_str(r#"{"domain_size":1,"predicates":{"P":[[0]]}}"#).is_err());
        assert!(Model::from_json_str(r#"{"domain_size":1,"identity":[[0]]}"#).is_err());
        assert!(Model::from_json_str(r#"{"domain_size":1,"colour":1}"#).is_err());
    }
}
