//! SVG pictures of numbered patterns.

use std::fmt::Write;

use crate::pattern::NumberedPattern;

const SIDE: f64 = 120.0;
const GAP: f64 = 24.0;
const MARGIN: f64 = 12.0;
const CAPTION: f64 = 18.0;

/// Draws the squares `S_0 .. S_{squares-1}` side by side, each with its
/// rectangles outlined and numbered. The y-axis points up, so the bottom
/// half of a square is drawn below its top half.
pub fn render_pattern(p: &NumberedPattern, squares: u32) -> String {
    let squares = squares.max(1);
    let width = 2.0 * MARGIN + f64::from(squares) * SIDE + f64::from(squares - 1) * GAP;
    let height = 2.0 * MARGIN + SIDE + CAPTION;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="1">"#);
    for s in 0..squares {
        let left = MARGIN + f64::from(s) * (SIDE + GAP);
        for r in p.square(s) {
            let (x0, y0, x1, y1) = r.rect.bounds();
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                num(left + x0 * SIDE),
                num(MARGIN + (1.0 - y1) * SIDE),
                num((x1 - x0) * SIDE),
                num((y1 - y0) * SIDE)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" text-anchor="middle" dominant-baseline="central">"#
    );
    for s in 0..squares {
        let left = MARGIN + f64::from(s) * (SIDE + GAP);
        for r in p.square(s) {
            let (x0, y0, x1, y1) = r.rect.bounds();
            let size = (((x1 - x0).min(y1 - y0)) * SIDE * 0.5).clamp(2.0, 28.0);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="{}">{}</text>"#,
                num(left + (x0 + x1) / 2.0 * SIDE),
                num(MARGIN + (1.0 - (y0 + y1) / 2.0) * SIDE),
                num(size),
                r.number
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="gray">S{s}</text>"#,
            num(left + SIDE / 2.0),
            num(MARGIN + SIDE + CAPTION / 2.0 + 2.0)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

/// Fixed precision with trailing zeros removed.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
