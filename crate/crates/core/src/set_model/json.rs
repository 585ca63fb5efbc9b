//! JSON encoding of compact sets.
//!
//! ```json
//! {"schema_version": 1, "kind": "points", "dimension": 2,
//!  "points": [["0", "1/2"], ["3/4", "-1"]]}
//! ```
//!
//! Coordinates are `"p/q"` strings for exact scalars and numbers for
//! floats. Grids carry `"h"` and `"cells"` (integer tuples); a grid known
//! only up to a sandwich stores its outer cells in `"cells"` and the inner
//! ones in `"inner_cells"`.

use serde_json::{json, Map, Value};

use super::runs::{Cell, RunSet};
use super::{CompactSet, ConvexPolytope, GridSandwich, GridSet, IntervalUnion, PointSet};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: u32 = 1;

pub fn encode_set<T: Scalar>(k: &CompactSet<T>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("kind".into(), json!(k.kind()));
    m.insert("dimension".into(), json!(k.dim()));
    match k {
        CompactSet::Intervals(x) => {
            let iv: Vec<Value> = x.components().iter().map(|(a, b)| json!([a.encode(), b.encode()])).collect();
            m.insert("intervals".into(), Value::Array(iv));
        }
        CompactSet::Grid(g) => {
            m.insert("h".into(), g.h().encode());
            m.insert("cells".into(), encode_cells(g.cells()));
        }
        CompactSet::Sandwich(s) => {
            m.insert("h".into(), s.h().encode());
            m.insert("cells".into(), encode_cells(s.outer().cells()));
            m.insert("inner_cells".into(), encode_cells(s.inner().cells()));
        }
        CompactSet::Points(p) => {
            m.insert("points".into(), encode_points(p.points()));
        }
        CompactSet::Polytope(p) => {
            m.insert("vertices".into(), encode_points(p.vertices()));
        }
    }
    Value::Object(m)
}

fn encode_points<T: Scalar>(pts: &[Point<T>]) -> Value {
    Value::Array(pts.iter().map(|p| Value::Array(p.0.iter().map(Scalar::encode).collect())).collect())
}

fn encode_cells(cells: &RunSet) -> Value {
    let d = cells.dim();
    Value::Array(cells.cells().map(|c| json!(c[..d])).collect())
}

pub fn decode_set<T: Scalar>(v: &Value) -> Result<CompactSet<T>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("set must be a JSON object".into()))?;
    if let Some(ver) = obj.get("schema_version") {
        if ver.as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(Error::Parse(format!("unsupported schema_version {ver}")));
        }
    }
    let field = |name: &str| obj.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
    let kind = field("kind")?.as_str().ok_or_else(|| Error::Parse("\"kind\" must be a string".into()))?;
    let dim = match obj.get("dimension") {
        Some(d) => d.as_u64().ok_or_else(|| Error::Parse("\"dimension\" must be an integer".into()))? as usize,
        None if kind == "intervals" => 1,
        None => return Err(Error::Parse("missing field \"dimension\"".into())),
    };
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(match kind {
        "intervals" => {
            if dim != 1 {
                return Err(Error::DimensionMismatch { expected: 1, found: dim });
            }
            let list = array(field("intervals")?, "intervals")?;
            let mut parts = Vec::with_capacity(list.len());
            for iv in list {
                let ends = array(iv, "interval")?;
                if ends.len() != 2 {
                    return Err(Error::Parse("an interval needs exactly two endpoints".into()));
                }
                parts.push((T::decode(&ends[0])?, T::decode(&ends[1])?));
            }
            CompactSet::Intervals(IntervalUnion::canonicalize(parts)?)
        }
        "points" => CompactSet::Points(PointSet::new(dim, decode_points(field("points")?, dim)?)?),
        "polytope" => CompactSet::Polytope(ConvexPolytope::hull(&decode_points(field("vertices")?, dim)?)?),
        "grid" => {
            let h = T::decode(field("h")?)?;
            if h <= T::zero() {
                return Err(Error::InvalidParameter("cell size must be positive".into()));
            }
            let outer = GridSet::new(h.clone(), decode_cells(field("cells")?, dim)?)?;
            match obj.get("inner_cells") {
                Some(ic) => {
                    let inner = GridSet::possibly_empty(h, decode_cells(ic, dim)?)?;
                    CompactSet::Sandwich(GridSandwich::new(inner, outer)?)
                }
                None => CompactSet::Grid(outer),
            }
        }
        other => return Err(Error::Parse(format!("unknown set kind {other:?}"))),
    })
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn decode_points<T: Scalar>(v: &Value, dim: usize) -> Result<Vec<Point<T>>> {
    array(v, "point list")?
        .iter()
        .map(|p| {
            let c = array(p, "point")?;
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
            }
            Ok(Point(c.iter().map(T::decode).collect::<Result<_>>()?))
        })
        .collect()
}

fn decode_cells(v: &Value, dim: usize) -> Result<RunSet> {
    let mut cells = Vec::new();
    for c in array(v, "cells")? {
        let c = array(c, "cell")?;
        if c.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
        let mut cell: Cell = [0; 3];
        for (i, x) in c.iter().enumerate() {
            cell[i] = x.as_i64().ok_or_else(|| Error::Parse("cell indices must be integers".into()))?;
        }
        cells.push(cell);
    }
    Ok(RunSet::from_cells(dim, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn exact_round_trip() {
        let k: CompactSet<Rational> = CompactSet::Points(
            PointSet::new(2, vec![Point(vec![q(1, 3), q(-2, 1)]), Point(vec![q(0, 1), q(5, 7)])]).unwrap(),
        );
        let v = encode_set(&k);
        assert_eq!(v["points"][0][0], json!("0"));
        assert_eq!(decode_set::<Rational>(&v).unwrap(), k);
    }

    #[test]
    fn grid_and_interval_round_trip() {
        let g: CompactSet<Rational> =
            GridSet::from_cells(2, q(1, 4), [[0, 0, 0], [1, 0, 0], [5, -2, 0]]).unwrap().into();
        assert_eq!(decode_set::<Rational>(&encode_set(&g)).unwrap(), g);
        let iv: CompactSet<Rational> = IntervalUnion::canonicalize(vec![(q(-1, 2), q(0, 1)), (q(3, 1), q(4, 1))])
            .unwrap()
            .into();
        assert_eq!(decode_set::<Rational>(&encode_set(&iv)).unwrap(), iv);
    }

    #[test]
    fn float_mode_uses_numbers() {
        let v = json!({"kind": "intervals", "dimension": 1, "intervals": [[-0.5, 1.0]]});
        let k = decode_set::<f64>(&v).unwrap();
        assert_eq!(encode_set(&k)["intervals"][0][0], json!(-0.5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decode_set::<Rational>(&json!({"kind": "blob", "dimension": 2})).is_err());
        assert!(decode_set::<Rational>(&json!({"kind": "points", "dimension": 2, "points": [["1"]]})).is_err());
        assert!(decode_set::<Rational>(&json!({"kind": "points", "dimension": 4, "points": []})).is_err());
    }
}
