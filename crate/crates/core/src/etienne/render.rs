use std::fmt::Write;

use super::EtienneDiagram;

/// Rows top-down, one character per cell: `#` occupied, `.` empty.
pub fn to_text_grid(d: &EtienneDiagram) -> String {
    let mut out = String::new();
    for i in (1..=d.height()).rev() {
        for j in 1..=i {
            out.push(if d.is_occupied(i, j) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// SVG snapshot. Cell `(i, j)` is drawn at column `j` and height `i`, with the
/// reference row `theta` marked by a dashed line when given.
pub fn to_svg(d: &EtienneDiagram, theta: Option<u64>) -> String {
    const CELL: usize = 12;
    let h = d.height().max(1);
    let size = (h + 2) * CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for i in 1..=d.height() {
        for j in 1..=i {
            let x = j * CELL;
            let y = (h + 1 - i) * CELL;
            let fill = if d.is_occupied(i, j) { "black" } else { "none" };
            let _ = writeln!(
                out,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#bbb" stroke-width="0.5"/>"##
            );
        }
    }
    if let Some(t) = theta.filter(|&t| t >= 1) {
        let y = (h + 1 - t as usize) * CELL;
        let _ = writeln!(
            out,
            r#"<line x1="0" y1="{y}" x2="{size}" y2="{y}" stroke="red" stroke-dasharray="4 3"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
