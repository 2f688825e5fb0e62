//! SVG 1.1 rendering of the decomposition, slits, discs and axis intervals.

use std::fmt::Write;

use num_complex::Complex64;

use crate::carleson::CarlesonDecomposition;
use crate::halfplane::BlaschkeProduct;
use crate::slits::{SlitKind, SlitSystem};

/// Pixel width of the drawing.
const WIDTH: f64 = 800.0;

struct View {
    half_width: f64,
    height: f64,
    scale: f64,
}

impl View {
    fn px(&self, z: Complex64) -> (f64, f64) {
        ((z.re + self.half_width) * self.scale, (self.height - z.im) * self.scale)
    }
}

/// Renders the box `[-X, X] x [0, Y]`; points outside are clipped by the viewport.
pub fn render_svg(
    f1: &BlaschkeProduct,
    f2: &BlaschkeProduct,
    decomposition: Option<&CarlesonDecomposition>,
    slits: Option<&SlitSystem>,
    half_width: f64,
    height: f64,
) -> String {
    let view = View { half_width, height, scale: WIDTH / (2.0 * half_width) };
    let (w, h) = (WIDTH, height * view.scale);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ =
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.3} {h:.3}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#);
    let (ax, _) = view.px(Complex64::new(0.0, 0.0));
    let _ = writeln!(s, r##"<line x1="{ax:.3}" y1="0" x2="{ax:.3}" y2="{h:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##);

    if let Some(d) = decomposition {
        let _ = writeln!(s, r#"<g id="regions" fill="steelblue" fill-opacity="0.15" stroke="steelblue" stroke-width="0.5">"#);
        for (i, r) in d.regions.iter().enumerate() {
            for rect in &r.rects {
                let corners = [
                    Complex64::new(rect.x0, rect.y0),
                    Complex64::new(rect.x1, rect.y0),
                    Complex64::new(rect.x1, rect.y1),
                    Complex64::new(rect.x0, rect.y1),
                ];
                let pts: Vec<String> = corners
                    .iter()
                    .map(|z| {
                        let (x, y) = view.px(*z);
                        format!("{x:.3},{y:.3}")
                    })
                    .collect();
                let _ = writeln!(s, r#"<polygon data-region="{i}" data-generation="{}" points="{}"/>"#, r.generation, pts.join(" "));
            }
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(sys) = slits {
        let _ = writeln!(s, r#"<g id="z-intervals" stroke="orange" stroke-width="4" stroke-opacity="0.6">"#);
        for (lo, hi) in &sys.z_intervals {
            let (x, y0) = view.px(Complex64::new(0.0, *lo));
            let (_, y1) = view.px(Complex64::new(0.0, *hi));
            let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{y1:.3}"/>"#);
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g id="slits" fill="none" stroke-width="1">"#);
        let all = sys.slits.iter().chain(sys.pairings.iter().flat_map(|p| p.connectors.iter()));
        for slit in all {
            let colour = match slit.kind {
                SlitKind::Vertical => "black",
                SlitKind::Gamma => "darkgreen",
                SlitKind::AxisConnector => "crimson",
            };
            let mut d = String::new();
            for (k, seg) in slit.polyline.iter().enumerate() {
                let (x0, y0) = view.px(seg.a);
                let (x1, y1) = view.px(seg.b);
                if k == 0 {
                    let _ = write!(d, "M {x0:.3} {y0:.3} ");
                }
                let _ = write!(d, "L {x1:.3} {y1:.3} ");
            }
            let _ = writeln!(s, r#"<path data-rank="{}" stroke="{colour}" d="{}"/>"#, slit.rank, d.trim_end());
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g id="discs" fill="none" stroke="purple" stroke-width="0.75">"#);
        for p in &sys.pairings {
            for disc in &p.discs {
                let (cx, cy) = view.px(disc.center);
                let _ = writeln!(s, r#"<circle data-pairing="{}" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, p.id, disc.radius * view.scale);
            }
        }
        let _ = writeln!(s, "</g>");
    }

    for (id, product, colour) in [("zeros-f1", f1, "blue"), ("zeros-f2", f2, "red")] {
        let _ = writeln!(s, r#"<g id="{id}" fill="{colour}">"#);
        for a in product.zeros() {
            let (x, y) = view.px(*a);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
