//! JSON encodings of instances, grids, torus instances and rectangle unions.
//!
//! Scalars are read from JSON numbers or `"p/q"` strings without rounding.
//! On output, integers become JSON numbers and other rationals `"p/q"`
//! strings; floats use the shortest representation that round-trips.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::continuous::{Rect, RectUnion, StepProfile};
use crate::direction::{Direction, DirectionSet};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lines::LineSumTable;
use crate::rational::{self, q, Q};
use crate::torus::{TorusDirection, TorusInstance};

/// A rectangular line-sum problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub m: usize,
    pub n: usize,
    pub set: DirectionSet,
    pub table: LineSumTable<Q>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| parse_err("expected a JSON object"))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn q_list(v: &Value, what: &str) -> Result<Vec<Q>> {
    as_array(v, what)?
        .iter()
        .map(rational::q_from_json)
        .collect()
}

/// Integers as JSON numbers, everything else as `"p/q"`.
pub fn q_value(x: &Q) -> Value {
    if x.is_integer() {
        if let Some(i) = x.numer().to_i64() {
            return Value::from(i);
        }
    }
    rational::q_to_json(x)
}

/// `[a, b]` pairs.
fn parse_pairs(v: &Value) -> Result<Vec<(i64, i64)>> {
    as_array(v, "directions")?
        .iter()
        .map(|d| match d.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((as_i64(a, "direction a")?, as_i64(b, "direction b")?)),
            _ => Err(parse_err(format!("direction must be [a, b], got {d}"))),
        })
        .collect()
}

/// `"a,b"` map key.
fn parse_key(key: &str) -> Result<(i64, i64)> {
    let bad = || parse_err(format!("line-sum key must look like \"a,b\", got {key:?}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn direction_key(d: Direction) -> String {
    format!("{},{}", d.a(), d.b())
}

/// Parses the full form `{m, n, directions, line_sums}` or the shorthand
/// `{m, n, row_sums, col_sums}`.
pub fn parse_instance(v: &Value) -> Result<Instance> {
    let obj = as_object(v)?;
    if obj.contains_key("row_sums") || obj.contains_key("col_sums") {
        let rows = q_list(field(obj, "row_sums")?, "row_sums")?;
        let cols = q_list(field(obj, "col_sums")?, "col_sums")?;
        for (key, len) in [("m", cols.len()), ("n", rows.len())] {
            if let Some(given) = obj.get(key) {
                if as_usize(given, key)? != len {
                    return Err(Error::DimensionMismatch(format!(
                        "{key} = {given} but {len} sums were given"
                    )));
                }
            }
        }
        let table = LineSumTable::simple(rows, cols)?;
        return Ok(Instance {
            m: table.m(),
            n: table.n(),
            set: DirectionSet::simple(),
            table,
        });
    }
    let m = as_usize(field(obj, "m")?, "m")?;
    let n = as_usize(field(obj, "n")?, "n")?;
    let set = DirectionSet::from_pairs(&parse_pairs(field(obj, "directions")?)?)?;
    let given = as_object(field(obj, "line_sums")?)?;
    let mut by_direction: BTreeMap<Direction, BTreeMap<i64, Q>> = BTreeMap::new();
    for (key, sums) in given {
        let (a, b) = parse_key(key)?;
        let d = Direction::new(a, b)?;
        if !set.directions().contains(&d) {
            return Err(Error::DimensionMismatch(format!(
                "line sums given for ({d}) which is not in the direction list"
            )));
        }
        let mut parsed = BTreeMap::new();
        for (t, value) in as_object(sums)? {
            let t: i64 = t
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("line index must be an integer, got {t:?}")))?;
            parsed.insert(t, rational::q_from_json(value)?);
        }
        by_direction.insert(d, parsed);
    }
    let sums = set
        .iter()
        .map(|d| by_direction.remove(d).unwrap_or_default())
        .collect();
    let table = LineSumTable::new(&set, m, n, sums)?;
    Ok(Instance { m, n, set, table })
}

/// Full-form JSON of a line-sum table.
pub fn table_to_json(table: &LineSumTable<Q>) -> Value {
    let mut sums = Map::new();
    for ds in table.directions() {
        let lines: Map<String, Value> = ds
            .sums
            .iter()
            .map(|(t, v)| (t.to_string(), q_value(v)))
            .collect();
        sums.insert(direction_key(ds.direction), Value::Object(lines));
    }
    let directions: Vec<Value> = table
        .directions()
        .iter()
        .map(|ds| json!([ds.direction.a(), ds.direction.b()]))
        .collect();
    json!({
        "m": table.m(),
        "n": table.n(),
        "directions": directions,
        "line_sums": sums,
    })
}

/// Row-major array of rows, or `{"grid": rows}`.
pub fn parse_grid(v: &Value) -> Result<Grid<Q>> {
    let rows = match v {
        Value::Object(obj) => field(obj, "grid")?,
        other => other,
    };
    let rows = as_array(rows, "grid")?
        .iter()
        .map(|r| q_list(r, "grid row"))
        .collect::<Result<Vec<_>>>()?;
    Grid::from_rows(rows)
}

pub fn grid_to_json(g: &Grid<Q>) -> Value {
    Value::Array(
        g.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(q_value).collect()))
            .collect(),
    )
}

pub fn grid_i64_to_json(g: &Grid<i64>) -> Value {
    json!(g.rows())
}

/// Floats in shortest round-trip form; non-finite values become `null`.
pub fn grid_f64_to_json(g: &Grid<f64>) -> Value {
    json!(g.rows())
}

/// Comma-separated rows, row `j = 0` first.
pub fn grid_to_csv<T: Clone>(g: &Grid<T>, fmt: impl Fn(&T) -> String) -> String {
    let mut out = String::new();
    for row in g.rows() {
        let cells: Vec<String> = row.iter().map(&fmt).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `{n, directions, line_sums}` where `line_sums` is either a list of
/// per-direction lists or a map from `"a,b"` to a list or to `{"t": v}`.
pub fn parse_torus_instance(v: &Value) -> Result<TorusInstance<Q>> {
    let obj = as_object(v)?;
    let n = as_usize(field(obj, "n")?, "n")?;
    let directions = parse_pairs(field(obj, "directions")?)?
        .into_iter()
        .map(|(a, b)| TorusDirection::new(a, b, n))
        .collect::<Result<Vec<_>>>()?;
    let given = field(obj, "line_sums")?;
    let sums =
        match given {
            Value::Array(lists) => lists
                .iter()
                .map(|l| q_list(l, "torus line sums"))
                .collect::<Result<Vec<_>>>()?,
            Value::Object(map) => directions
                .iter()
                .map(|d| {
                    let key = map
                        .iter()
                        .find(|(k, _)| parse_key(k).ok() == Some((d.a() as i64, d.b() as i64)))
                        .map(|(_, v)| v)
                        .ok_or_else(|| parse_err(format!("no torus line sums for \"{d}\"")))?;
                    match key {
                        Value::Object(by_t) => {
                            let mut out = vec![q(0); n];
                            for (t, value) in by_t {
                                let t: usize =
                                    t.trim().parse().ok().filter(|&t| t < n).ok_or_else(|| {
                                        parse_err(format!("torus line index {t:?}"))
                                    })?;
                                out[t] = rational::q_from_json(value)?;
                            }
                            Ok(out)
                        }
                        other => q_list(other, "torus line sums"),
                    }
                })
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(parse_err("line_sums must be an array or an object")),
        };
    TorusInstance::new(n, directions, sums)
}

pub fn torus_instance_to_json(inst: &TorusInstance<Q>) -> Value {
    let sums: Map<String, Value> = inst
        .directions()
        .iter()
        .zip(inst.line_sums())
        .map(|(d, s)| (d.to_string(), Value::Array(s.iter().map(q_value).collect())))
        .collect();
    let directions: Vec<Value> = inst
        .directions()
        .iter()
        .map(|d| json!([d.a(), d.b()]))
        .collect();
    json!({ "n": inst.n(), "directions": directions, "line_sums": sums })
}

/// `{m, n, rects: [[x1, y1, x2, y2], ...]}`.
pub fn parse_rect_union(v: &Value) -> Result<RectUnion> {
    let obj = as_object(v)?;
    let m = rational::q_from_json(field(obj, "m")?)?;
    let n = rational::q_from_json(field(obj, "n")?)?;
    let rects = as_array(field(obj, "rects")?, "rects")?
        .iter()
        .map(|r| {
            let c = q_list(r, "rectangle")?;
            match <[Q; 4]>::try_from(c) {
                Ok([x1, y1, x2, y2]) => Ok(Rect::new(x1, y1, x2, y2)),
                Err(_) => Err(parse_err("rectangle must be [x1, y1, x2, y2]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    RectUnion::new(m, n, rects)
}

/// `{"breakpoints": [...], "values": [...]}`.
pub fn profile_to_json(p: &StepProfile) -> Value {
    json!({
        "breakpoints": p.breakpoints().iter().map(q_value).collect::<Vec<_>>(),
        "values": p.values().iter().map(q_value).collect::<Vec<_>>(),
    })
}
