//! Deterministic SVG 1.1 rendering of polar drawings.
//!
//! Arcs are rendered as circular `A` path segments centered at the origin,
//! radial edges as straight lines, vertices as dots. Layer circles are
//! drawn as light guides. Output is canvas-fitted and byte-stable for a
//! fixed drawing.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::draw::{radius_f64, theta_radians, EdgeGeometry, PolarDrawing};

/// Pixels per unit of drawing radius.
const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;

fn fmt(x: f64) -> String {
    // Fixed-point with stable rounding keeps the output deterministic.
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Cartesian point of a polar pair; the y axis points down in SVG, so the
/// mathematical orientation is mirrored and clockwise arcs sweep positive.
fn xy(r: f64, theta: f64, c: f64) -> (f64, f64) {
    (c + r * SCALE * theta.cos(), c - r * SCALE * theta.sin())
}

/// Renders a drawing; the caller is expected to have verified it.
pub fn render_svg(d: &PolarDrawing) -> String {
    let rmax = d
        .radius
        .iter()
        .map(radius_f64)
        .fold(1.0f64, f64::max);
    let size = 2.0 * (rmax * SCALE + MARGIN);
    let c = size / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        fmt(size)
    );
    // Layer guides: one light circle per distinct radius, plus the origin.
    let mut radii: BTreeSet<String> = BTreeSet::new();
    for r in &d.radius {
        radii.insert(fmt(radius_f64(r) * SCALE));
    }
    for r in &radii {
        let _ = writeln!(
            out,
            r##"  <circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#ddd" stroke-width="0.5"/>"##,
            c = fmt(c)
        );
    }
    let _ = writeln!(
        out,
        r##"  <circle cx="{c}" cy="{c}" r="2" fill="#999"/>"##,
        c = fmt(c)
    );
    for g in &d.geometry {
        match g {
            EdgeGeometry::Arc { r, from, to } => {
                let rf = radius_f64(r);
                let (a, b) = (theta_radians(from), theta_radians(to));
                let (x1, y1) = xy(rf, a, c);
                let (x2, y2) = xy(rf, b, c);
                // Clockwise angular span decides the large-arc flag; screen
                // coordinates flip the sweep direction to positive.
                let span = (a - b).rem_euclid(std::f64::consts::TAU);
                let large = u8::from(span > std::f64::consts::PI);
                if span == 0.0 {
                    // Full circle: a single path of two half arcs.
                    let (xm, ym) = xy(rf, a + std::f64::consts::PI, c);
                    let _ = writeln!(
                        out,
                        r##"  <path d="M {x1} {y1} A {rr} {rr} 0 0 1 {xm} {ym} A {rr} {rr} 0 0 1 {x1} {y1}" fill="none" stroke="#000" stroke-width="1.5"/>"##,
                        x1 = fmt(x1),
                        y1 = fmt(y1),
                        xm = fmt(xm),
                        ym = fmt(ym),
                        rr = fmt(rf * SCALE)
                    );
                } else {
                    let _ = writeln!(
                        out,
                        r##"  <path d="M {x1} {y1} A {rr} {rr} 0 {large} 1 {x2} {y2}" fill="none" stroke="#000" stroke-width="1.5"/>"##,
                        x1 = fmt(x1),
                        y1 = fmt(y1),
                        x2 = fmt(x2),
                        y2 = fmt(y2),
                        rr = fmt(rf * SCALE)
                    );
                }
            }
            EdgeGeometry::Radial {
                theta,
                inner,
                outer,
            } => {
                let t = theta_radians(theta);
                let (x1, y1) = xy(radius_f64(inner), t, c);
                let (x2, y2) = xy(radius_f64(outer), t, c);
                let _ = writeln!(
                    out,
                    r##"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#000" stroke-width="1.5"/>"##,
                    x1 = fmt(x1),
                    y1 = fmt(y1),
                    x2 = fmt(x2),
                    y2 = fmt(y2)
                );
            }
        }
    }
    for (r, t) in d.radius.iter().zip(&d.theta) {
        let (x, y) = xy(radius_f64(r), theta_radians(t), c);
        let _ = writeln!(
            out,
            r##"  <circle cx="{x}" cy="{y}" r="2.5" fill="#000"/>"##,
            x = fmt(x),
            y = fmt(y)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::draw::Coord;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Coord {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unit_circle_polygon_renders_one_arc_per_edge() {
        // A unit-circle "square": four vertices, four quarter arcs.
        let t = 4usize;
        let theta: Vec<Coord> = (0..t).map(|i| q(i as i64, t as i64)).collect();
        let radius: Vec<Coord> = (0..t).map(|_| Coord::one()).collect();
        let geometry = (0..t)
            .map(|i| EdgeGeometry::Arc {
                r: Coord::one(),
                from: q(((i + 1) % t) as i64, t as i64),
                to: q(i as i64, t as i64),
            })
            .collect();
        let d = PolarDrawing {
            theta,
            radius,
            geometry,
            layers: 1,
        };
        let svg = render_svg(&d);
        assert_eq!(svg.matches("<path").count(), t);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        // Deterministic.
        assert_eq!(svg, render_svg(&d));
    }

    #[test]
    fn radial_edges_render_as_lines() {
        let d = PolarDrawing {
            theta: vec![Coord::zero(), Coord::zero()],
            radius: vec![Coord::one(), q(2, 1)],
            geometry: vec![EdgeGeometry::Radial {
                theta: Coord::zero(),
                inner: Coord::one(),
                outer: q(2, 1),
            }],
            layers: 2,
        };
        let svg = render_svg(&d);
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(svg.matches("<path").count(), 0);
    }
}
