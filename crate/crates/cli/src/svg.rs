//! Standalone SVG 1.1 pictures of `K_{k,t}` and `L_{k,t}` for `k ∈ {2, 3}`.

use std::fmt::Write;

use freecomp_core::tnorm::beta_vector;
use freecomp_core::SimplexPoint;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct SvgStyle {
    pub size: f64,
    pub margin: f64,
    pub point_radius: f64,
    pub boundary_color: String,
    pub polytope_color: String,
    pub cloud_color: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            size: 480.0,
            margin: 40.0,
            point_radius: 1.6,
            boundary_color: "#d62728".into(),
            polytope_color: "#1f77b4".into(),
            cloud_color: "#7f7f7f".into(),
        }
    }
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Pixel position of `λ₁ ∈ [½, 1]` on the two-dimensional chamber segment.
pub fn segment_x(lambda1: f64, style: &SvgStyle) -> f64 {
    style.margin + (lambda1 - 0.5) / 0.5 * (style.size - 2.0 * style.margin)
}

/// Ternary projection `(λ₂ + λ₃/2, (√3/2)λ₃)`, scaled to pixels with the
/// `y` axis pointing down.
pub fn ternary_xy(lambda: &[f64], style: &SvgStyle) -> (f64, f64) {
    let side = style.size - 2.0 * style.margin;
    let x = lambda[1] + 0.5 * lambda[2];
    let y = SQRT3_2 * lambda[2];
    (style.margin + side * x, style.margin + side * (SQRT3_2 - y))
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Draws the chamber of `Δ_k`, the polytope `L_{k,t}`, the boundary points of
/// `K_{k,t}` and, optionally, an empirical cloud of Schmidt vectors.
pub fn emit_svg(
    k: usize,
    t: f64,
    boundary: &[SimplexPoint],
    cloud: Option<&[SimplexPoint]>,
    style: &SvgStyle,
) -> Result<Vec<u8>, CliError> {
    let beta = beta_vector(k, t)?;
    let svg = match k {
        2 => segment_plot(t, &beta, boundary, cloud, style),
        3 => ternary_plot(t, &beta, boundary, cloud, style),
        _ => return Err(CliError::UnsupportedK(k)),
    };
    Ok(svg.into_bytes())
}

fn segment_plot(
    t: f64,
    beta: &[f64],
    boundary: &[SimplexPoint],
    cloud: Option<&[SimplexPoint]>,
    style: &SvgStyle,
) -> String {
    let height = 160.0;
    let axis_y = 80.0;
    let mut out = String::new();
    header(&mut out, style.size, height, &format!("K and L for k = 2, t = {t}"));
    let (x0, x1) = (segment_x(0.5, style), segment_x(1.0, style));
    let _ = writeln!(
        out,
        r##"<line id="chamber" x1="{x0}" y1="{axis_y}" x2="{x1}" y2="{axis_y}" stroke="black" stroke-width="1"/>"##
    );
    let xb = segment_x(beta[0], style);
    let _ = writeln!(
        out,
        r##"<line id="polytope" x1="{x0}" y1="{axis_y}" x2="{xb}" y2="{axis_y}" stroke="{}" stroke-width="4" stroke-opacity="0.5"/>"##,
        style.polytope_color
    );
    for (label, x) in [("1/2", x0), ("1", x1)] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-size="12" text-anchor="middle">{label}</text>"#,
            axis_y + 24.0
        );
    }
    if let Some(cloud) = cloud {
        let _ = writeln!(out, r#"<g id="cloud" fill="{}">"#, style.cloud_color);
        for p in cloud {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                segment_x(p.coords()[0], style),
                axis_y - 12.0,
                style.point_radius
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, r#"<g id="boundary" fill="{}">"#, style.boundary_color);
    for p in boundary {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{axis_y}" r="{}" data-lambda1="{}"/>"#,
            segment_x(p.coords()[0], style),
            style.point_radius * 3.0,
            p.coords()[0]
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

fn permutations(v: &[f64]) -> Vec<Vec<f64>> {
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    ORDERS.iter().map(|o| o.iter().map(|&i| v[i]).collect()).collect()
}

fn points_attr(points: &[(f64, f64)]) -> String {
    points.iter().map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(" ")
}

fn ternary_plot(
    t: f64,
    beta: &[f64],
    boundary: &[SimplexPoint],
    cloud: Option<&[SimplexPoint]>,
    style: &SvgStyle,
) -> String {
    let height = 2.0 * style.margin + (style.size - 2.0 * style.margin) * SQRT3_2;
    let mut out = String::new();
    header(&mut out, style.size, height.ceil(), &format!("K and L for k = 3, t = {t}"));

    let corners: Vec<(f64, f64)> =
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].iter().map(|v| ternary_xy(v, style)).collect();
    let _ = writeln!(
        out,
        r#"<polygon id="simplex" points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        points_attr(&corners)
    );

    let mut hexagon: Vec<(f64, f64)> = permutations(beta).iter().map(|v| ternary_xy(v, style)).collect();
    let (cx, cy) = ternary_xy(&[1.0 / 3.0; 3], style);
    hexagon.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    hexagon.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    let _ = writeln!(
        out,
        r#"<polygon id="polytope" points="{}" fill="{}" fill-opacity="0.12" stroke="{}" stroke-width="1"/>"#,
        points_attr(&hexagon),
        style.polytope_color,
        style.polytope_color
    );

    if let Some(cloud) = cloud {
        let _ = writeln!(out, r#"<g id="cloud" fill="{}">"#, style.cloud_color);
        for p in cloud {
            for v in permutations(p.coords()) {
                let (x, y) = ternary_xy(&v, style);
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{}"/>"#, style.point_radius);
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, r#"<g id="boundary" fill="{}">"#, style.boundary_color);
    for p in boundary {
        for v in permutations(p.coords()) {
            let (x, y) = ternary_xy(&v, style);
            let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{}"/>"#, style.point_radius);
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}
