//! JSON encodings of fish and decompositions (`"format": "ff-v1"`).
//!
//! ```text
//! {"format": "ff-v1", "head": 0,
//!  "cells": [{"id": 0, "UL": null, "UR": [1, "LL"], "LL": null, "LR": null}, ...],
//!  "stats": {"size": .., "lsize": .., "rsize": .., "fin": .., "tails": ..}}
//! ```
//!
//! The empty fish is `{"head": null, "cells": []}`. `format` and `stats` are
//! optional on input; `stats` is ignored when reading.

use serde_json::{json, Map, Value};

use crate::construct::WaspwaistDecomposition;
use crate::decomp::DecompKind;
use crate::error::{Error, Result};
use crate::fish::{Cell, Fish, Gluing, Slot};

pub const FORMAT: &str = "ff-v1";

fn slot_from_name(name: &str) -> Option<Slot> {
    Slot::ALL.into_iter().find(|s| s.name() == name)
}

/// Encodes `f`; `stats` is included when it can be computed and requested.
pub fn fish_to_json(f: &Fish, with_stats: bool) -> Value {
    let cells: Vec<Value> = f
        .cells()
        .iter()
        .enumerate()
        .map(|(id, cell)| {
            let mut obj = Map::new();
            obj.insert("id".into(), json!(id));
            for slot in Slot::ALL {
                let v = match cell.get(slot) {
                    Some(g) => json!([g.cell, g.slot.name()]),
                    None => Value::Null,
                };
                obj.insert(slot.name().into(), v);
            }
            Value::Object(obj)
        })
        .collect();
    let mut out = json!({
        "format": FORMAT,
        "head": f.head(),
        "cells": cells,
    });
    if with_stats {
        if let Ok(st) = f.stats() {
            out["stats"] = serde_json::to_value(st).expect("plain struct");
        }
    }
    out
}

fn bad(msg: String) -> Error {
    Error::InvalidInput(msg)
}

/// Decodes a fish. Only the shape is checked here; call
/// [`Fish::validate`] for the gluing and growth conditions.
pub fn fish_from_json(text: &str) -> Result<Fish> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("malformed fish JSON: {e}")))?;
    fish_from_value(&value)
}

pub fn fish_from_value(value: &Value) -> Result<Fish> {
    let obj = value
        .as_object()
        .ok_or_else(|| bad("fish JSON must be an object".into()))?;
    match obj.get("format") {
        None => {}
        Some(Value::String(s)) if s == FORMAT => {}
        Some(other) => return Err(bad(format!("unsupported format {other}"))),
    }
    let head = match obj.get("head") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| bad(format!("head: expected a cell id or null, got {v}")))?
                as usize,
        ),
    };
    let raw_cells = obj
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("cells: expected an array".into()))?;
    let n = raw_cells.len();
    let mut cells: Vec<Option<Cell>> = vec![None; n];
    for (pos, raw) in raw_cells.iter().enumerate() {
        let at = |what: &str| format!("cells[{pos}]: {what}");
        let id = raw
            .get("id")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad(at("missing integer id")))? as usize;
        if id >= n {
            return Err(bad(at(&format!("id {id} is not below the cell count {n}"))));
        }
        if cells[id].is_some() {
            return Err(bad(at(&format!("id {id} appears twice"))));
        }
        let mut cell = Cell::default();
        for slot in Slot::ALL {
            let g = match raw.get(slot.name()) {
                None | Some(Value::Null) => None,
                Some(Value::Array(pair)) if pair.len() == 2 => {
                    let target = pair[0].as_u64().ok_or_else(|| {
                        bad(at(&format!("{}: target must be a cell id", slot.name())))
                    })? as usize;
                    let other = pair[1]
                        .as_str()
                        .and_then(slot_from_name)
                        .ok_or_else(|| bad(at(&format!("{}: unknown slot {}", slot.name(), pair[1]))))?;
                    Some(Gluing {
                        cell: target,
                        slot: other,
                    })
                }
                Some(v) => {
                    return Err(bad(at(&format!(
                        "{}: expected null or [id, slot], got {v}",
                        slot.name()
                    ))))
                }
            };
            cell.set(slot, g);
        }
        cells[id] = Some(cell);
    }
    let cells = cells.into_iter().map(|c| c.expect("ids are dense")).collect();
    if let Some(h) = head {
        if h >= n {
            return Err(bad(format!("head {h} is not below the cell count {n}")));
        }
    }
    Ok(Fish::from_parts(cells, head))
}

pub fn decomposition_to_json(d: &WaspwaistDecomposition) -> Value {
    let (kind, i) = match d.kind {
        DecompKind::C1 => ("C1", None),
        DecompKind::C2(i) => ("C2", Some(i)),
    };
    json!({
        "kind": kind,
        "i": i,
        "p1": fish_to_json(&d.p1, false),
        "p2": fish_to_json(&d.p2, false),
    })
}
