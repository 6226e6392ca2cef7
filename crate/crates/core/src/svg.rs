//! SVG rendering of a patchwork on the diamond `|x| + |y| ≤ d`.
//!
//! The picture shows the triangles of the four symmetric copies, the sign of
//! every lattice point, the curve as segments joining edge midpoints, and
//! shades the parts of the diamond lying in regions of odd depth (inside an
//! odd number of ovals).  Points of the root region are drawn as rings and
//! the pseudo-line is dashed.

use std::fmt::Write as _;

use crate::patchwork::{LoopKind, Patchwork};

/// Pixels per lattice unit.
const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;

struct Frame {
    degree: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x + self.degree) * SCALE
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.degree - y) * SCALE
    }

    fn polygon(&self, out: &mut String, points: &[(f64, f64)], class: &str) {
        let coords: Vec<String> =
            points.iter().map(|&(x, y)| format!("{:.1},{:.1}", self.x(x), self.y(y))).collect();
        let _ = writeln!(out, r#"<polygon class="{class}" points="{}"/>"#, coords.join(" "));
    }
}

fn mid(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// Renders a patchwork as a standalone SVG document.
pub fn render(pw: &Patchwork) -> String {
    let surface = pw.surface();
    let dia = surface.diamond();
    let frame = Frame { degree: pw.degree() as f64 };
    let size = 2.0 * MARGIN + 2.0 * frame.degree * SCALE;
    let signs = pw.position_signs();
    let depth_of = |pos: u16| pw.regions()[pw.region_of(dia.vertex_of(pos as usize))].depth;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"#
    );
    out.push_str(concat!(
        "<style>",
        ".inside{fill:#c9dcf2;stroke:none}",
        ".mesh{fill:none;stroke:#b0b0b0;stroke-width:0.6}",
        ".oval{stroke:#c0392b;stroke-width:2.5;stroke-linecap:round}",
        ".pseudo-line{stroke:#1f6f3f;stroke-width:2.5;stroke-dasharray:6 4;stroke-linecap:round}",
        ".plus{fill:#222}.minus{fill:#fff;stroke:#222;stroke-width:1}",
        ".root{fill:none;stroke:#e6a100;stroke-width:1.5}",
        "</style>\n"
    ));

    let _ = writeln!(out, r#"<g id="regions">"#);
    for t in surface.triangles() {
        let pts = t.positions.map(|p| {
            let (x, y) = surface.point(p);
            (x as f64, y as f64)
        });
        let odd = t.positions.map(|p| depth_of(p) % 2 == 1);
        let lone = (0..3).find(|&k| {
            let s = signs[t.positions[k] as usize];
            s != signs[t.positions[(k + 1) % 3] as usize] && s != signs[t.positions[(k + 2) % 3] as usize]
        });
        match lone {
            None => {
                if odd[0] {
                    frame.polygon(&mut out, &pts, "inside");
                }
            }
            Some(k) => {
                let (a, b, c) = (pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]);
                let (ab, ac) = (mid(a, b), mid(a, c));
                if odd[k] {
                    frame.polygon(&mut out, &[a, ab, ac], "inside");
                }
                if odd[(k + 1) % 3] {
                    frame.polygon(&mut out, &[ab, b, c, ac], "inside");
                }
            }
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="triangles">"#);
    for t in surface.triangles() {
        let pts = t.positions.map(|p| {
            let (x, y) = surface.point(p);
            (x as f64, y as f64)
        });
        frame.polygon(&mut out, &pts, "mesh");
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="curve">"#);
    for (index, l) in pw.loops().iter().enumerate() {
        let class = match l.kind {
            LoopKind::Oval => "oval",
            LoopKind::PseudoLine => "pseudo-line",
        };
        let _ = writeln!(out, r#"<g class="{class}" data-loop="{index}">"#);
        for [a, b] in pw.loop_segments(index) {
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
                frame.x(a.0),
                frame.y(a.1),
                frame.x(b.0),
                frame.y(b.1)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="signs">"#);
    let root = pw.root_region();
    for (pos, &sign) in signs.iter().enumerate() {
        let (x, y) = dia.point(pos);
        let (cx, cy) = (frame.x(x as f64), frame.y(y as f64));
        let class = if sign == 0 { "plus" } else { "minus" };
        let _ = writeln!(out, r#"<circle class="{class}" cx="{cx:.1}" cy="{cy:.1}" r="4"/>"#);
        if pw.region_of(dia.vertex_of(pos)) == root {
            let _ = writeln!(out, r#"<circle class="root" cx="{cx:.1}" cy="{cy:.1}" r="7"/>"#);
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::SignDistribution;
    use crate::triangulation::honeycomb;

    #[test]
    fn draws_every_part() {
        let t = honeycomb(3).unwrap();
        let pw = Patchwork::new(&t, SignDistribution::harnack(3).unwrap()).unwrap();
        let svg = render(&pw);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches(r#"class="mesh""#).count(), 4 * 9);
        assert_eq!(
            svg.matches("<circle class=\"plus\"").count() + svg.matches("<circle class=\"minus\"").count(),
            25
        );
        assert_eq!(svg.matches(r#"<g class="pseudo-line""#).count(), 1);
        assert_eq!(svg.matches(r#"<g class="oval""#).count(), 1);
        assert!(svg.contains(r#"class="inside""#));
        assert!(svg.contains(r#"class="root""#));
    }

    #[test]
    fn no_shading_without_ovals() {
        let t = honeycomb(1).unwrap();
        let pw = Patchwork::new(&t, SignDistribution::ones(1).unwrap()).unwrap();
        let svg = render(&pw);
        assert!(!svg.contains(r#"class="inside""#));
        assert_eq!(svg.matches(r#"<g class="pseudo-line""#).count(), 1);
    }
}
