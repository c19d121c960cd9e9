//! JSON wire formats. Rationals travel as `"p/q"` strings.

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::arith::{self, Rational};
use crate::cusps::{CuspClass, CuspLabel, Star};
use crate::cyclotomic::CyclotomicNumber;
use crate::divisors::{BoundaryDivisor, SpecialCertificate};
use crate::error::{Error, Result};
use crate::fqm::{DiscriminantForm, FqmElement, FqmSubgroup};
use crate::invariants::GroupAlgebraVector;
use crate::qeta::PuiseuxSeries;

pub fn rational(r: &Rational) -> Value {
    Value::String(arith::rat_to_string(r))
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    let parsed = match v {
        Value::String(s) => arith::parse_rational(s),
        Value::Number(n) => n.as_i64().map(arith::rat_int),
        _ => None,
    };
    parsed.ok_or_else(|| Error::param(format!("not a rational: {v}")))
}

fn int(v: &Value, key: &str) -> Result<i64> {
    v.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::param(format!("missing integer field \"{key}\"")))
}

/// `[w, x, y, z]`.
pub fn element(e: &FqmElement) -> Value {
    json!(e.components())
}

pub fn parse_element(form: &DiscriminantForm, v: &Value) -> Result<FqmElement> {
    let parts: Vec<i64> = v
        .as_array()
        .filter(|a| a.len() == 4)
        .and_then(|a| a.iter().map(Value::as_i64).collect())
        .ok_or_else(|| Error::param(format!("an element is [w, x, y, z], got {v}")))?;
    Ok(form.element(parts[0], parts[1], parts[2], parts[3]))
}

pub fn form(f: &DiscriminantForm) -> Value {
    json!({"N": f.n(), "Nprime": f.nprime()})
}

pub fn parse_form(v: &Value) -> Result<DiscriminantForm> {
    DiscriminantForm::new(int(v, "N")?, int(v, "Nprime")?)
}

/// `{"N", "Nprime", "generators"}` with generators in echelon form.
pub fn subgroup(h: &FqmSubgroup) -> Value {
    let f = h.form();
    json!({
        "N": f.n(),
        "Nprime": f.nprime(),
        "generators": h.generators().iter().map(element).collect::<Vec<_>>(),
    })
}

pub fn parse_subgroup(v: &Value) -> Result<FqmSubgroup> {
    let f = parse_form(v)?;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::param("missing array \"generators\""))?
        .iter()
        .map(|g| parse_element(&f, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(FqmSubgroup::from_generators(f, &gens))
}

pub fn label(l: &CuspLabel) -> Value {
    json!({"star": l.star.index(), "a": l.a, "c": l.c})
}

pub fn parse_label(v: &Value) -> Result<CuspLabel> {
    let star = u8::try_from(int(v, "star")?)
        .ok()
        .and_then(|s| Star::try_from(s).ok())
        .ok_or_else(|| Error::param("star must be 1 or 2"))?;
    CuspLabel::normalized(star, int(v, "a")?, int(v, "c")?)
}

/// `{"N", "Nprime", "entries": [{"star", "a", "c", "mult"}]}`.
pub fn divisor(d: &BoundaryDivisor) -> Value {
    let entries: Vec<Value> = d
        .entries()
        .map(|(l, m)| {
            let mut e = label(l);
            e["mult"] = rational(m);
            e
        })
        .collect();
    let mut out = form(&d.form());
    out["entries"] = Value::Array(entries);
    out
}

/// Reads a divisor; labels are mapped to their classes and repeated classes accumulate.
pub fn parse_divisor(form: &DiscriminantForm, classes: &[CuspClass], v: &Value) -> Result<BoundaryDivisor> {
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::param("missing array \"entries\""))?
        .iter()
        .map(|e| {
            let m = e.get("mult").ok_or_else(|| Error::param("missing field \"mult\""))?;
            Ok((parse_label(e)?, parse_rational(m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    BoundaryDivisor::from_entries(*form, classes, entries)
}

fn element_key(g: &FqmElement) -> String {
    let [w, x, y, z] = g.components();
    format!("[{w},{x},{y},{z}]")
}

/// `{"[w,x,y,z]": "p/q", ...}`, zero coefficients omitted.
pub fn group_algebra_vector(v: &GroupAlgebraVector) -> Value {
    let entries: Map<String, Value> = v.entries().map(|(g, c)| (element_key(g), rational(c))).collect();
    Value::Object(entries)
}

pub fn parse_group_algebra_vector(form: &DiscriminantForm, v: &Value) -> Result<GroupAlgebraVector> {
    let map = v.as_object().ok_or_else(|| Error::param("a vector is an object keyed by \"[w,x,y,z]\""))?;
    let entries = map
        .iter()
        .map(|(k, c)| {
            let key: Value = serde_json::from_str(k).map_err(|_| Error::param(format!("bad element key {k}")))?;
            Ok((parse_element(form, &key)?, parse_rational(c)?))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAlgebraVector::from_coefficients(*form, entries)
}

/// `{"special", "coefficients": {"<type index>": "p/q"}, "invariant_vector"}`.
pub fn certificate(c: Option<&SpecialCertificate>) -> Value {
    match c {
        None => json!({"special": false}),
        Some(c) => {
            let coefficients: Map<String, Value> = c
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, (_, r))| !r.is_zero())
                .map(|(i, (_, r))| (i.to_string(), rational(r)))
                .collect();
            json!({
                "special": true,
                "coefficients": coefficients,
                "invariant_vector": group_algebra_vector(&c.invariant_vector),
            })
        }
    }
}

/// Coefficients on the power basis of `Q(zeta_k)`.
pub fn cyclotomic(c: &CyclotomicNumber) -> Value {
    json!(c.to_strings())
}

/// `{"m", "conductor", "precision", "terms": [{"exp", "coeff"}]}`.
pub fn series(s: &PuiseuxSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| json!({"exp": rational(&e), "coeff": cyclotomic(c)}))
        .collect();
    json!({
        "m": s.denominator(),
        "conductor": s.conductor(),
        "precision": rational(&s.precision()),
        "terms": terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cusps;
    use crate::guard::Guard;

    #[test]
    fn round_trips() {
        let f = DiscriminantForm::new(4, 2).unwrap();
        for (h, _) in cusps::enumerate_types(&f) {
            assert_eq!(parse_subgroup(&subgroup(&h)).unwrap(), h);
        }
        let classes = cusps::cusp_classes(&f, &Guard::new(10_000)).unwrap();
        let entries = classes.iter().enumerate().map(|(i, c)| (c.representative, rat(i as i64 + 1, 3)));
        let d = BoundaryDivisor::from_entries(f, &classes, entries).unwrap();
        assert_eq!(parse_divisor(&f, &classes, &divisor(&d)).unwrap(), d);
        assert_eq!(parse_rational(&json!("-3/6")).unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(&json!(4)).unwrap(), rat(4, 1));
        assert!(parse_rational(&json!("1/0")).is_err());
        assert!(parse_element(&f, &json!([1, 2, 3])).is_err());
        let h = &cusps::enumerate_types(&f)[0].0;
        let v = crate::invariants::char_vector(h);
        let wire = group_algebra_vector(&v);
        assert_eq!(wire["[0,0,0,0]"], json!("1/1"));
        assert_eq!(parse_group_algebra_vector(&f, &wire).unwrap(), v);
    }

    #[test]
    fn divisor_wire_format() {
        let f = DiscriminantForm::new(2, 1).unwrap();
        let classes = cusps::cusp_classes(&f, &Guard::new(10_000)).unwrap();
        let v = json!({"entries": [{"star": 1, "a": 1, "c": 0, "mult": "2/1"}]});
        let d = parse_divisor(&f, &classes, &v).unwrap();
        assert_eq!(d.multiplicity(&CuspLabel::infinity(Star::One)), rat(2, 1));
        assert_eq!(divisor(&d)["entries"][0]["mult"], json!("2/1"));
    }
}
