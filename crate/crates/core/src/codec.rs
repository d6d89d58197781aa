//! JSON encodings.
//!
//! A rational is the string `"p/q"` (bare integers are accepted on input), a
//! scalar is `{"re": …, "im": …}`, a matrix is
//! `{"rows", "cols", "entries": [[r, c, scalar], …]}`, a spinor is
//! `{"l", "terms": [{"exp": [..], "coef": scalar}, …]}` and a spinor form adds a
//! 1-based `"form": [..]` to every term. Dense tensors are nested arrays of
//! scalars. Encoders iterate ordered maps only, so output is deterministic.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field};
use crate::forms::{FormIndex, SpinorForm};
use crate::linalg::OperatorMatrix;
use crate::spinor::{Monomial, Spinor};

pub fn encode_scalar<T: Field>(x: &T) -> Value {
    let (re, im) = x.re_im();
    json!({ "re": format_rational(&re), "im": format_rational(&im) })
}

fn decode_rational(v: &Value, what: &str) -> Result<num_rational::BigRational> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        _ => None,
    };
    parsed.ok_or_else(|| Error::decode(format!("{what}: expected a rational \"p/q\", found {v}")))
}

pub fn decode_scalar<T: Field>(v: &Value) -> Result<T> {
    let obj = v.as_object().ok_or_else(|| Error::decode(format!("expected a scalar object, found {v}")))?;
    let part = |k: &str| match obj.get(k) {
        Some(x) => decode_rational(x, k),
        None => Err(Error::decode(format!("scalar is missing \"{k}\""))),
    };
    let (re, im) = (part("re")?, part("im")?);
    T::try_from_re_im(&re, &im).ok_or_else(|| Error::decode("scalar does not fit the field"))
}

pub fn encode_scalars<T: Field>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(encode_scalar).collect())
}

pub fn decode_scalars<T: Field>(v: &Value) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| Error::decode(format!("expected an array of scalars, found {v}")))?
        .iter()
        .map(decode_scalar)
        .collect()
}

pub fn encode_matrix<T: Field>(m: &OperatorMatrix<T>) -> Value {
    let entries: Vec<Value> = m.entries().map(|(r, c, x)| json!([r, c, encode_scalar(x)])).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

fn get_usize(obj: &serde_json::Map<String, Value>, k: &str) -> Result<usize> {
    obj.get(k)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::decode(format!("missing or non-integer \"{k}\"")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::decode(format!("expected a {what} object")))
}

fn as_array<'a>(v: Option<&'a Value>, what: &str) -> Result<&'a Vec<Value>> {
    v.and_then(Value::as_array).ok_or_else(|| Error::decode(format!("missing or non-array \"{what}\"")))
}

pub fn decode_matrix<T: Field>(v: &Value) -> Result<OperatorMatrix<T>> {
    let obj = as_object(v, "matrix")?;
    let (rows, cols) = (get_usize(obj, "rows")?, get_usize(obj, "cols")?);
    let mut m = OperatorMatrix::zeros(rows, cols);
    for e in as_array(obj.get("entries"), "entries")? {
        let triple = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| Error::decode("matrix entry must be [row, col, scalar]"))?;
        let idx = |k: usize| triple[k].as_u64().map(|x| x as usize).ok_or_else(|| Error::decode("matrix index must be an integer"));
        let (r, c) = (idx(0)?, idx(1)?);
        if r >= rows || c >= cols {
            return Err(Error::decode(format!("matrix entry ({r}, {c}) out of bounds")));
        }
        m.add_to(r, c, decode_scalar(&triple[2])?);
    }
    Ok(m)
}

fn decode_exponents(v: Option<&Value>, l: usize) -> Result<Monomial> {
    let exps = as_array(v, "exp")?
        .iter()
        .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| Error::decode("exponents must be small non-negative integers")))
        .collect::<Result<Vec<u32>>>()?;
    if exps.len() != l {
        return Err(Error::decode(format!("exponent tuple has length {} instead of l = {l}", exps.len())));
    }
    Ok(Monomial(exps))
}

pub fn encode_spinor<T: Field>(s: &Spinor<T>) -> Value {
    let terms: Vec<Value> = s.terms().map(|(m, c)| json!({ "exp": m.0, "coef": encode_scalar(c) })).collect();
    json!({ "l": s.l(), "terms": terms })
}

pub fn decode_spinor<T: Field>(v: &Value) -> Result<Spinor<T>> {
    let obj = as_object(v, "spinor")?;
    let l = get_usize(obj, "l")?;
    let mut s = Spinor::zero(l);
    for t in as_array(obj.get("terms"), "terms")? {
        let t = as_object(t, "term")?;
        let coef = decode_scalar(t.get("coef").ok_or_else(|| Error::decode("term is missing \"coef\""))?)?;
        s.add_term(decode_exponents(t.get("exp"), l)?, coef);
    }
    Ok(s)
}

pub fn encode_form<T: Field>(psi: &SpinorForm<T>) -> Value {
    let terms: Vec<Value> = psi
        .terms()
        .map(|(f, m, c)| {
            let form: Vec<usize> = f.indices().map(|i| i + 1).collect();
            json!({ "form": form, "exp": m.0, "coef": encode_scalar(c) })
        })
        .collect();
    json!({ "l": psi.l(), "r": psi.form_degree(), "terms": terms })
}

pub fn decode_form<T: Field>(v: &Value) -> Result<SpinorForm<T>> {
    let obj = as_object(v, "spinor form")?;
    let l = get_usize(obj, "l")?;
    let r = get_usize(obj, "r")?;
    let mut psi = SpinorForm::zero(l, r);
    for t in as_array(obj.get("terms"), "terms")? {
        let t = as_object(t, "term")?;
        let idx = as_array(t.get("form"), "form")?
            .iter()
            .map(|x| match x.as_u64() {
                Some(i) if i >= 1 && i as usize <= 2 * l => Ok(i as usize - 1),
                _ => Err(Error::decode(format!("form index {x} outside 1..={}", 2 * l))),
            })
            .collect::<Result<Vec<usize>>>()?;
        if idx.len() != r || idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::decode("form indices must be strictly increasing with length r"));
        }
        let f = FormIndex::from_indices(&idx).expect("strictly increasing");
        let coef = decode_scalar(t.get("coef").ok_or_else(|| Error::decode("term is missing \"coef\""))?)?;
        psi.add_term(f, decode_exponents(t.get("exp"), l)?, coef);
    }
    Ok(psi)
}

/// A dense array of any rank as nested JSON arrays.
pub fn encode_dense<T: Field>(shape: &[usize], data: &[T]) -> Value {
    match shape.split_first() {
        None => encode_scalar(&data[0]),
        Some((&n, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array((0..n).map(|k| encode_dense(rest, &data[k * stride..(k + 1) * stride])).collect())
        }
    }
}

/// Inverse of [`encode_dense`]; checks every level against `shape`.
pub fn decode_dense<T: Field>(shape: &[usize], v: &Value) -> Result<Vec<T>> {
    match shape.split_first() {
        None => Ok(vec![decode_scalar(v)?]),
        Some((&n, rest)) => {
            let items = v.as_array().ok_or_else(|| Error::decode("expected a nested array"))?;
            if items.len() != n {
                return Err(Error::decode(format!("array has length {} where {n} was expected", items.len())));
            }
            let mut out = Vec::new();
            for item in items {
                out.extend(decode_dense(rest, item)?);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    #[test]
    fn scalar_round_trip() {
        let x = Scalar::from_ratio(-3, 4) + Scalar::imag_unit() * Scalar::from_ratio(5, 2);
        let v = encode_scalar(&x);
        assert_eq!(v, json!({"re": "-3/4", "im": "5/2"}));
        assert_eq!(decode_scalar::<Scalar>(&v).unwrap(), x);
        assert_eq!(decode_scalar::<Scalar>(&json!({"re": 2, "im": "0/1"})).unwrap(), Scalar::from_int(2));
        assert!(decode_scalar::<Scalar>(&json!({"re": "1/0", "im": "0"})).is_err());
        assert!(decode_scalar::<Scalar>(&json!({"re": "1"})).is_err());
    }

    #[test]
    fn form_round_trip() {
        let s = Spinor::from_terms(2, [(Monomial(vec![1, 2]), Scalar::imag_unit()), (Monomial(vec![0, 0]), Scalar::from_int(3))]);
        let psi = SpinorForm::tensor(FormIndex::from_indices(&[0, 3]).unwrap(), &s);
        let v = encode_form(&psi);
        assert_eq!(decode_form::<Scalar>(&v).unwrap(), psi);
        assert_eq!(decode_spinor::<Scalar>(&encode_spinor(&s)).unwrap(), s);
        let bad = json!({"l": 1, "r": 1, "terms": [{"form": [3], "exp": [0], "coef": {"re": "1", "im": "0"}}]});
        assert!(decode_form::<Scalar>(&bad).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = OperatorMatrix::from_dense(&[vec![Scalar::from_int(1), Scalar::from_int(0)], vec![Scalar::imag_unit(), Scalar::from_ratio(1, 3)]]);
        assert_eq!(decode_matrix::<Scalar>(&encode_matrix(&m)).unwrap().to_dense(), m.to_dense());
    }

    #[test]
    fn dense_round_trip_and_shape_errors() {
        let data: Vec<Scalar> = (0..8).map(Scalar::from_int).collect();
        let v = encode_dense(&[2, 2, 2], &data);
        assert_eq!(decode_dense::<Scalar>(&[2, 2, 2], &v).unwrap(), data);
        assert!(decode_dense::<Scalar>(&[2, 4], &v).is_err());
    }
}
