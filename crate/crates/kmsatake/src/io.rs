//! Versioned JSON forms for series, group elements and reports.
//!
//! Schema 1. A series is
//! `{"schema": 1, "ceiling": [...], "depth": N | "exact", "terms": [...]}`
//! with terms sorted by exponent and each coefficient a list of
//! `{"mono": {"s0": 2, ...}, "int": k}` monomials in the canonical
//! monomial order. Integers that overflow 53-bit JSON safety, and exact
//! rationals, are carried as strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::dl::GroupSeries;
use crate::param::{big, Mono, ParamCoeff, Var};
use crate::root_datum::RootDatum;
use crate::satake::{DeltaHalf, SatakeResult};
use crate::series::{Depth, TruncSeries};
use crate::symm::CherednikReport;
use crate::tables::TablesReport;
use crate::{Error, Result};

fn rational_to_json(r: &BigRational) -> Value {
    if r.is_integer() {
        let n = r.to_integer();
        if let Ok(small) = i64::try_from(&n) {
            if small.abs() < (1i64 << 53) {
                return json!(small);
            }
        }
        return json!(n.to_string());
    }
    json!(format!("{}/{}", r.numer(), r.denom()))
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    if let Some(i) = v.as_i64() {
        return Ok(big(i));
    }
    let s = v
        .as_str()
        .ok_or_else(|| Error::Config(format!("expected a number or string, got {v}")))?;
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad integer {t:?}")))
    };
    match s.split_once('/') {
        Some((a, b)) => Ok(BigRational::new(parse_int(a)?, parse_int(b)?)),
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn mono_to_json(m: &Mono) -> Value {
    let mut obj = Map::new();
    for (v, e) in m.iter() {
        obj.insert(v.name(), json!(e));
    }
    Value::Object(obj)
}

fn mono_from_json(v: &Value) -> Result<Mono> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Config("monomial must be an object".into()))?;
    let mut m = Mono::one();
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    for k in keys {
        let var = Var::parse(k).ok_or_else(|| Error::Config(format!("unknown variable {k}")))?;
        let e = obj[k]
            .as_i64()
            .ok_or_else(|| Error::Config(format!("exponent of {k} must be an integer")))?;
        m = m.mul(&Mono::power(var, e));
    }
    Ok(m)
}

pub fn coeff_to_json(c: &ParamCoeff) -> Value {
    Value::Array(
        c.iter()
            .map(|(m, r)| json!({"mono": mono_to_json(m), "int": rational_to_json(r)}))
            .collect(),
    )
}

pub fn coeff_from_json(v: &Value) -> Result<ParamCoeff> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Config("coefficient must be an array".into()))?;
    let mut out = ParamCoeff::zero();
    for item in arr {
        let m = mono_from_json(
            item.get("mono")
                .ok_or_else(|| Error::Config("missing \"mono\"".into()))?,
        )?;
        let r = rational_from_json(
            item.get("int")
                .ok_or_else(|| Error::Config("missing \"int\"".into()))?,
        )?;
        out.add_assign_term(m, r);
    }
    Ok(out)
}

fn depth_to_json(d: Depth) -> Value {
    match d {
        Depth::Exact => json!("exact"),
        Depth::At(n) => json!(n),
    }
}

fn depth_from_json(v: &Value) -> Result<Depth> {
    if v.as_str() == Some("exact") {
        return Ok(Depth::Exact);
    }
    v.as_i64()
        .map(Depth::At)
        .ok_or_else(|| Error::Config(format!("bad depth {v}")))
}

pub fn series_to_json(s: &TruncSeries) -> Value {
    let terms: Vec<Value> = s
        .iter()
        .map(|(mu, c)| json!({"exp": mu, "coeff": coeff_to_json(c)}))
        .collect();
    json!({
        "schema": 1,
        "ceiling": s.ceiling(),
        "depth": depth_to_json(s.depth()),
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Result<TruncSeries> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Config("series must be an object".into()))?;
    if let Some(s) = obj.get("schema") {
        if s.as_i64() != Some(1) {
            return Err(Error::Config(format!("unsupported schema {s}")));
        }
    }
    let depth = depth_from_json(
        obj.get("depth")
            .ok_or_else(|| Error::Config("missing \"depth\"".into()))?,
    )?;
    let ceiling: Option<Vec<i64>> = match obj.get("ceiling") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => Some(
            a.iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::Config("ceiling entries must be integers".into()))
                })
                .collect::<Result<_>>()?,
        ),
        Some(other) => return Err(Error::Config(format!("bad ceiling {other}"))),
    };
    let mut out = match (&ceiling, depth) {
        (Some(c), d) => TruncSeries::zero_window(c.clone(), d),
        (None, Depth::Exact) => TruncSeries::from_exact_parts(None, Default::default()),
        (None, _) => {
            return Err(Error::Config(
                "a truncated series needs a ceiling".into(),
            ))
        }
    };
    let terms = obj
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Config("missing \"terms\" array".into()))?;
    let mut raw = std::collections::BTreeMap::new();
    for t in terms {
        let exp: Vec<i64> = t
            .get("exp")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Config("term missing \"exp\"".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::Config("exponents must be integers".into()))
            })
            .collect::<Result<_>>()?;
        let coeff = coeff_from_json(
            t.get("coeff")
                .ok_or_else(|| Error::Config("term missing \"coeff\"".into()))?,
        )?;
        raw.insert(exp, coeff);
    }
    match ceiling {
        Some(_) => {
            for (exp, c) in raw {
                out.push_term_pub(exp, c);
            }
        }
        None => out = TruncSeries::from_exact_parts(None, raw),
    }
    Ok(out)
}

pub fn group_series_to_json(g: &GroupSeries) -> Value {
    let elements: Vec<Value> = g
        .terms
        .iter()
        .map(|(word, (_, s))| json!({"word": word, "series": series_to_json(s)}))
        .collect();
    json!({
        "schema": 1,
        "len_bound": g.len_bound,
        "depth": g.depth,
        "elements": elements,
    })
}

pub fn delta_half_to_json(d: &DeltaHalf) -> Value {
    match d {
        DeltaHalf::TwoRhoPower(t) => {
            if t % 2 == 0 {
                json!(t / 2)
            } else {
                json!(format!("{t}/2"))
            }
        }
        DeltaHalf::ClassMonomial(m) => mono_to_json(m),
        DeltaHalf::Symbolic => Value::Null,
    }
}

pub fn satake_to_json(r: &SatakeResult) -> Value {
    json!({
        "schema": 1,
        "route": r.route.name(),
        "delta_half_exponent": delta_half_to_json(&r.delta_half),
        "depth": r.depth,
        "series": series_to_json(&r.series),
    })
}

pub fn cherednik_to_json(r: &CherednikReport) -> Value {
    json!({
        "schema": 1,
        "ok": r.all_ok(),
        "rows": r.rows.iter().map(|row| json!({
            "word": row.word,
            "checked_depth": row.checked_depth,
            "ok": row.ok,
            "first_discrepancy": row.discrepancy,
        })).collect::<Vec<_>>(),
    })
}

pub fn tables_to_json(r: &TablesReport) -> Value {
    json!({
        "schema": 1,
        "ok": r.all_ok(),
        "checks": r.checks.iter().map(|c| json!({
            "n": c.n,
            "case": c.case,
            "ok": c.ok,
            "rows": c.rows.len(),
        })).collect::<Vec<_>>(),
    })
}

/// Summary of a root datum for the `inspect` command.
pub fn root_datum_to_json(rd: &RootDatum) -> Value {
    let classes: Vec<Value> = (0..rd.classes.count)
        .map(|c| {
            let mut members = Vec::new();
            for i in 0..rd.index_count {
                if rd.classes.sigma[i] == c {
                    members.push(format!("sigma_{i}"));
                }
                if rd.classes.sigma_prime[i] == c {
                    members.push(format!("sigma'_{i}"));
                }
            }
            json!({"variable": Var::Sigma(c).name(), "members": members})
        })
        .collect();
    let rho: Vec<Value> = rd
        .two_rho
        .iter()
        .map(|&t| {
            if t % 2 == 0 {
                json!(t / 2)
            } else {
                json!(format!("{t}/2"))
            }
        })
        .collect();
    json!({
        "schema": 1,
        "index_count": rd.index_count,
        "lattice_dim": rd.lattice_dim,
        "cartan": rd.cartan,
        "coroots": rd.coroots,
        "roots_on_basis": rd.roots_on_basis,
        "rho": rho,
        "parameter_classes": classes,
        "equal_parameters": rd.classes.is_equal_mode(),
    })
}

/// Deterministic rendering: keys in objects are emitted in sorted order by
/// `serde_json`'s default map (preserving our construction order), and all
/// arrays are already sorted on construction.
pub fn to_string_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON serialization cannot fail")
}
