//! Module files:
//! `{"algebra": <config or path>, "dims": {"1": 2}, "epsilon": {"1": [[...]]}, "arrows": {"a_1_2_1": [[...]]}}`.
//! Missing loops and arrows are zero.

use std::path::Path;
use std::sync::Arc;

use serde_json::{Map, Value};

use super::ModuleRep;
use crate::cartan::{Algebra, AlgebraConfig};
use crate::linalg::json::{mat_from_json, mat_to_json};
use crate::linalg::Mat;
use crate::{Error, Result};

pub fn module_to_json(m: &ModuleRep) -> Value {
    let alg = m.algebra();
    let datum = alg.datum();
    let mut dims = Map::new();
    let mut eps = Map::new();
    for i in 0..alg.n() {
        dims.insert(datum.label(i).to_string(), Value::from(m.dims()[i]));
        eps.insert(datum.label(i).to_string(), mat_to_json(m.eps(i)));
    }
    let mut arrows = Map::new();
    for k in 0..alg.arrows().len() {
        arrows.insert(alg.arrow_key(k), mat_to_json(m.arrow(k)));
    }
    let mut obj = Map::new();
    obj.insert("algebra".into(), serde_json::to_value(datum.to_config()).expect("config serializes"));
    obj.insert("dims".into(), Value::Object(dims));
    obj.insert("epsilon".into(), Value::Object(eps));
    obj.insert("arrows".into(), Value::Object(arrows));
    Value::Object(obj)
}

/// Read the algebra of a module file: inline config or a path relative to `base`.
pub fn algebra_from_json(v: &Value, base: Option<&Path>) -> Result<Arc<Algebra>> {
    let cfg_value = match v {
        Value::String(p) => {
            let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Format(format!("cannot read algebra file {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
        }
        other => other.clone(),
    };
    let cfg: AlgebraConfig =
        serde_json::from_value(cfg_value).map_err(|e| Error::Format(format!("algebra config: {e}")))?;
    Ok(Algebra::new(cfg.to_datum()?))
}

pub fn module_from_json(v: &Value, base: Option<&Path>) -> Result<ModuleRep> {
    let obj = v.as_object().ok_or_else(|| Error::Format("module must be a JSON object".into()))?;
    let alg = algebra_from_json(obj.get("algebra").ok_or_else(|| Error::Format("missing \"algebra\"".into()))?, base)?;
    module_over(&alg, v)
}

/// Parse the module part of a file over a given algebra, ignoring its `"algebra"` field.
pub fn module_over(alg: &Arc<Algebra>, v: &Value) -> Result<ModuleRep> {
    let obj = v.as_object().ok_or_else(|| Error::Format("module must be a JSON object".into()))?;
    for key in obj.keys() {
        if !["algebra", "dims", "epsilon", "arrows"].contains(&key.as_str()) {
            return Err(Error::Format(format!("unknown field {key:?}")));
        }
    }
    let n = alg.n();
    let section = |name: &str| -> Result<Map<String, Value>> {
        match obj.get(name) {
            None => Ok(Map::new()),
            Some(Value::Object(m)) => Ok(m.clone()),
            Some(_) => Err(Error::Format(format!("\"{name}\" must be an object"))),
        }
    };
    let mut dims = vec![0usize; n];
    for (label, d) in section("dims")? {
        let i = alg.vertex(&label)?;
        dims[i] = d
            .as_u64()
            .ok_or_else(|| Error::Format(format!("dimension at {label} must be a non-negative integer")))?
            as usize;
    }
    let mut eps: Vec<Mat> = dims.iter().map(|&d| Mat::zeros(d, d)).collect();
    for (label, m) in section("epsilon")? {
        let i = alg.vertex(&label)?;
        eps[i] = mat_from_json(&m, dims[i], dims[i]).map_err(|e| Error::Shape(format!("loop at {label}: {e}")))?;
    }
    let mut arrows: Vec<Mat> = alg.arrows().iter().map(|a| Mat::zeros(dims[a.target], dims[a.source])).collect();
    for (key, m) in section("arrows")? {
        let k = alg.arrow_by_key(&key).ok_or_else(|| Error::Format(format!("unknown arrow {key}")))?;
        let a = alg.arrows()[k];
        arrows[k] = mat_from_json(&m, dims[a.target], dims[a.source]).map_err(|e| Error::Shape(format!("{key}: {e}")))?;
    }
    ModuleRep::checked(alg.clone(), dims, eps, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;

    #[test]
    fn roundtrip() {
        let alg = Algebra::new(CartanDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1], vec![(0, 1)]).unwrap());
        let e1 = ModuleRep::generalized_simple(&alg, 0);
        let text = module_to_json(&e1).to_string();
        let back = module_from_json(&serde_json::from_str(&text).unwrap(), None).unwrap();
        assert_eq!(back.dims(), e1.dims());
        assert_eq!(back.eps(0), e1.eps(0));
        assert_eq!(module_to_json(&back).to_string(), text);
    }

    #[test]
    fn rejects_unknown_arrow_and_bad_relations() {
        let v = serde_json::json!({
            "algebra": {"vertices": [1, 2], "cartan": [[2, -1], [-1, 2]], "symmetrizer": "minimal"},
            "dims": {"1": 1},
            "arrows": {"a_3_1_1": [["1"]]}
        });
        assert!(matches!(module_from_json(&v, None), Err(Error::Format(_))));
        let v = serde_json::json!({
            "algebra": {"vertices": [1], "cartan": [[2]], "symmetrizer": [2]},
            "dims": {"1": 2},
            "epsilon": {"1": [["1", "0"], ["0", "1"]]}
        });
        assert!(matches!(module_from_json(&v, None), Err(Error::Relations(_))));
    }
}
