//! SVG drawing of a fish: one diamond per cell at its lattice position.

use std::fmt::Write;

use stackfish::fish::{Fish, Slot};
use stackfish::Result;

const UNIT: f64 = 30.0;
const MARGIN: f64 = 20.0;
/// Shift applied per extra cell stacked on the same lattice point.
const STACK_OFFSET: f64 = 4.0;

struct Frame {
    min_x: i64,
    max_y: i64,
}

impl Frame {
    fn point(&self, x: f64, y: f64, depth: usize) -> (f64, f64) {
        let d = depth as f64 * STACK_OFFSET;
        (
            MARGIN + (x - self.min_x as f64 + 1.0) * UNIT + d,
            MARGIN + (self.max_y as f64 + 1.0 - y) * UNIT + d,
        )
    }
}

fn vertex(slot_start: Slot) -> (f64, f64) {
    match slot_start {
        Slot::LL => (-1.0, 0.0),
        Slot::LR => (0.0, -1.0),
        Slot::UR => (1.0, 0.0),
        Slot::UL => (0.0, 1.0),
    }
}

/// Endpoints of `slot` relative to the cell centre, counter-clockwise.
fn edge(slot: Slot) -> ((f64, f64), (f64, f64)) {
    (vertex(slot), vertex(slot.next_ccw()))
}

pub fn render_svg(f: &Fish) -> Result<String> {
    let mut out = String::new();
    if f.is_empty() {
        let (w, h) = (2.0 * MARGIN + 6.0 * UNIT, 2.0 * MARGIN + 2.0 * UNIT);
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
        writeln!(out, r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="14">empty fish</text>"#, MARGIN, MARGIN + UNIT).unwrap();
        out.push_str("</svg>\n");
        return Ok(out);
    }
    let pos = f.embed()?;
    let fin = f.fin()?;
    let tails = f.tail_cells();
    let head = f.head().expect("nonempty");

    let min_x = pos.iter().map(|p| p.0).min().unwrap();
    let max_x = pos.iter().map(|p| p.0).max().unwrap();
    let min_y = pos.iter().map(|p| p.1).min().unwrap();
    let max_y = pos.iter().map(|p| p.1).max().unwrap();
    let mut depth = vec![0usize; pos.len()];
    let mut max_depth = 0;
    for c in 0..pos.len() {
        depth[c] = pos[..c].iter().filter(|&&p| p == pos[c]).count();
        max_depth = max_depth.max(depth[c]);
    }
    let frame = Frame { min_x, max_y };
    let extra = max_depth as f64 * STACK_OFFSET;
    let w = 2.0 * MARGIN + (max_x - min_x + 2) as f64 * UNIT + extra;
    let h = 2.0 * MARGIN + (max_y - min_y + 2) as f64 * UNIT + extra;
    let opacity = if max_depth > 0 { 0.45 } else { 0.8 };

    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    out.push_str("  <g id=\"cells\" stroke=\"#334\" stroke-width=\"1\">\n");
    for (c, &(x, y)) in pos.iter().enumerate() {
        let pts: Vec<String> = [Slot::LL, Slot::LR, Slot::UR, Slot::UL]
            .iter()
            .map(|&s| {
                let (dx, dy) = vertex(s);
                let (px, py) = frame.point(x as f64 + dx, y as f64 + dy, depth[c]);
                format!("{px:.1},{py:.1}")
            })
            .collect();
        writeln!(
            out,
            r##"    <polygon data-cell="{c}" points="{}" fill="#9cc3e6" fill-opacity="{opacity}"/>"##,
            pts.join(" ")
        )
        .unwrap();
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"fin\" stroke=\"#d43\" stroke-width=\"3\" stroke-linecap=\"round\">\n");
    for e in &fin {
        let (x, y) = pos[e.cell];
        let ((ax, ay), (bx, by)) = edge(e.slot);
        let (x1, y1) = frame.point(x as f64 + ax, y as f64 + ay, depth[e.cell]);
        let (x2, y2) = frame.point(x as f64 + bx, y as f64 + by, depth[e.cell]);
        writeln!(
            out,
            r#"    <line data-edge="{}.{}" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#,
            e.cell, e.slot
        )
        .unwrap();
    }
    out.push_str("  </g>\n");

    let (hx, hy) = pos[head];
    let (nx, ny) = frame.point(hx as f64 - 1.0, hy as f64, depth[head]);
    writeln!(out, r##"  <circle id="nose" cx="{nx:.1}" cy="{ny:.1}" r="4" fill="#2a2"/>"##).unwrap();
    out.push_str("  <g id=\"tails\" fill=\"#d43\">\n");
    for &t in &tails {
        let (x, y) = pos[t];
        let (tx, ty) = frame.point(x as f64 + 1.0, y as f64, depth[t]);
        writeln!(out, r#"    <circle data-cell="{t}" cx="{tx:.1}" cy="{ty:.1}" r="4"/>"#).unwrap();
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}
