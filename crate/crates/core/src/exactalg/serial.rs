//! JSON encoding of exact values.
//!
//! A polynomial is a list of `[a, b, c, numerator, denominator]` records.
//! Integers are written as plain JSON numbers of any size.

use super::poly::HomPoly3;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{Number, Value};
use std::str::FromStr;

pub fn int_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal is a JSON number"))
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| Error::Schema(format!("not an integer: {n}"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Schema(format!("not an integer: {s}"))),
        other => Err(Error::Schema(format!("expected integer, found {other}"))),
    }
}

/// Rationals as `"p/q"` strings, or plain integers when the denominator is one.
pub fn rational_to_json(r: &BigRational) -> Value {
    if r.denom().is_one() {
        int_to_json(r.numer())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(BigRational::from(int_from_json(v)?)),
        other => Err(Error::Schema(format!("expected rational, found {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Schema(format!("not a rational: {s}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_positive() || d.is_negative() {
                Ok(BigRational::new(n, d))
            } else {
                Err(bad())
            }
        }
        None => Ok(BigRational::from(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

pub fn poly_to_json(p: &HomPoly3) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| {
                Value::Array(vec![
                    Value::from(e[0]),
                    Value::from(e[1]),
                    Value::from(e[2]),
                    int_to_json(c.numer()),
                    int_to_json(c.denom()),
                ])
            })
            .collect(),
    )
}

/// Parse a polynomial; `degree` is required to type the zero polynomial and
/// to check homogeneity.
pub fn poly_from_json(v: &Value, degree: u32) -> Result<HomPoly3> {
    let Value::Array(records) = v else {
        return Err(Error::Schema("polynomial must be a list of records".into()));
    };
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let fields = r.as_array().filter(|f| f.len() == 5).ok_or_else(|| Error::Schema(format!("bad term {r}")))?;
        let mut e = [0u32; 3];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = fields[i]
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| Error::Schema(format!("bad exponent in {r}")))?;
        }
        let num = int_from_json(&fields[3])?;
        let den = int_from_json(&fields[4])?;
        if den.sign() == num_bigint::Sign::NoSign {
            return Err(Error::Schema(format!("zero denominator in {r}")));
        }
        terms.push((e, BigRational::new(num, den)));
    }
    HomPoly3::from_rational_terms(degree, terms).map_err(|e| Error::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    #[test]
    fn round_trip_with_large_coefficients() {
        let big = BigInt::from_str("123456789012345678901234567890").unwrap();
        let p = HomPoly3::from_rational_terms(
            2,
            vec![([2, 0, 0], BigRational::new(big.clone(), 7.into())), ([0, 1, 1], ratio(-3, 4))],
        )
        .unwrap();
        let text = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert!(text.contains(&p.coeff(&[2, 0, 0]).numer().to_string()));
        assert!(p.coeff(&[2, 0, 0]).numer().bits() > 64);
        let back = poly_from_json(&serde_json::from_str(&text).unwrap(), 2).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&poly_to_json(&back)).unwrap(), text);
    }

    #[test]
    fn rejects_inhomogeneous() {
        let v: Value = serde_json::from_str("[[1,0,0,1,1],[2,0,0,1,1]]").unwrap();
        assert!(poly_from_json(&v, 1).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(rational_to_json(&ratio(4, 2)), serde_json::json!(2));
    }
}
