//! Plot data written next to a report: lemniscate grids as CSV and covers as SVG.

use std::fmt::Write as _;

use lemlab_core::ball::pseudo_ball_hull;
use lemlab_core::{BallCover, CPoint, Metric};

/// A named text file produced by a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: &str, contents: String) -> Self {
        Artifact { name: name.to_string(), contents }
    }
}

/// One row of a lemniscate grid.
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub in_exceptional: bool,
}

/// `x,y,value,in_exceptional`; `-inf` values are written as `-inf`.
pub fn lemniscate_csv(rows: &[GridRow]) -> String {
    let mut s = String::from("x,y,value,in_exceptional\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.x, r.y, r.value, r.in_exceptional as u8);
    }
    s
}

/// A square grid of `m x m` points of `[-w, w]^2`, endpoints included.
pub fn square_grid(m: usize, w: f64) -> impl Iterator<Item = (f64, f64)> {
    let m = m.max(2);
    let step = 2.0 * w / (m - 1) as f64;
    (0..m).flat_map(move |i| (0..m).map(move |j| (-w + i as f64 * step, -w + j as f64 * step)))
}

/// Generic two-column series.
pub fn series_csv(header: (&str, &str), rows: &[(f64, f64)]) -> String {
    let mut s = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        let _ = writeln!(s, "{a},{b}");
    }
    s
}

const SIZE: f64 = 800.0;

/// The cover projected to the first coordinate. Euclidean discs are solid; invariant
/// pseudo-balls are drawn dashed through their Euclidean hulls. Points are small dots.
pub fn cover_svg(cover: &BallCover, points: &[CPoint]) -> String {
    let discs: Vec<(f64, f64, f64, bool)> = cover
        .balls
        .iter()
        .map(|b| match b.metric {
            Metric::Euclidean => (b.center.coords()[0].re, b.center.coords()[0].im, b.radius, false),
            Metric::Invariant => {
                let (c, r) = pseudo_ball_hull(&b.center, b.radius);
                (c.coords()[0].re, c.coords()[0].im, r, true)
            }
        })
        .collect();
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64, r: f64| {
        lo = (lo.0.min(x - r), lo.1.min(y - r));
        hi = (hi.0.max(x + r), hi.1.max(y + r));
    };
    for &(x, y, r, _) in &discs {
        grow(x, y, r);
    }
    for p in points {
        grow(p.coords()[0].re, p.coords()[0].im, 0.0);
    }
    if !lo.0.is_finite() {
        lo = (-1.0, -1.0);
        hi = (1.0, 1.0);
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9) * 1.05;
    let scale = SIZE / span;
    let (cx, cy) = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let px = |x: f64| (x - cx) * scale + SIZE / 2.0;
    let py = |y: f64| SIZE / 2.0 - (y - cy) * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (x, y, r, dashed) in discs {
        let style = if dashed {
            r#"stroke="firebrick" stroke-dasharray="6 4""#
        } else {
            r#"stroke="steelblue""#
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" {style} stroke-width="1.5"/>"#,
            px(x),
            py(y),
            r * scale
        );
    }
    for p in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="1.5" fill="black"/>"#,
            px(p.coords()[0].re),
            py(p.coords()[0].im)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use lemlab_core::MetricBall;

    #[test]
    fn svg_styles_follow_the_metric() {
        let euclid = BallCover::new(
            vec![
                MetricBall::euclidean(CPoint::c1_parts(0.0, 0.0), 1.0).unwrap(),
                MetricBall::euclidean(CPoint::c1_parts(3.0, 0.0), 0.5).unwrap(),
            ],
            None,
        )
        .unwrap();
        let svg = cover_svg(&euclid, &[CPoint::c1_parts(0.1, 0.1)]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke-dasharray").count(), 0);
        assert_eq!(svg.matches("<circle").count(), 3);
        let inv = BallCover::new(vec![MetricBall::new(CPoint::c1_parts(0.5, 0.0), 0.2, Metric::Invariant).unwrap()], None)
            .unwrap();
        assert_eq!(cover_svg(&inv, &[]).matches("stroke-dasharray").count(), 1);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = [GridRow { x: 0.0, y: 1.0, value: f64::NEG_INFINITY, in_exceptional: true }];
        assert_eq!(lemniscate_csv(&rows), "x,y,value,in_exceptional\n0,1,-inf,1\n");
        assert_eq!(square_grid(3, 1.0).count(), 9);
    }
}
