//! SVG drawings and CSV tables of geodesic polygons.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use dupin_core::polygon::{links, GeodesicPolygon};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Width and height in user units.
    pub size: f64,
    pub labels: bool,
    pub chords: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 400.0, labels: true, chords: true }
    }
}

/// The unit circle, the `2g` vertices `e^{iφ_t}` labelled `p1..p2g`, and one
/// chord per link relation.
pub fn polygon_svg(poly: &GeodesicPolygon, opts: &SvgOptions) -> String {
    let s = opts.size;
    let c = s / 2.0;
    let r = 0.4 * s;
    let at = |t: usize| {
        let [x, y] = poly.position(t);
        (c + r * x, c - r * y)
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s:.0}" height="{s:.0}" viewBox="0 0 {s:.0} {s:.0}">"#
    );
    let _ = writeln!(out, r#"<circle cx="{c:.3}" cy="{c:.3}" r="{r:.3}" fill="none" stroke="black" stroke-width="1"/>"#);
    if opts.chords {
        let _ = writeln!(out, r#"<g class="links" stroke="steelblue" stroke-width="0.75">"#);
        for l in links(poly.g()) {
            let (x1, y1) = at(l.odd_vertex);
            let (x2, y2) = at(l.even_vertex);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" data-index="{}"/>"#,
                l.index
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, r#"<g class="vertices">"#);
    for t in 1..=poly.vertex_count() {
        let (x, y) = at(t);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
        if opts.labels {
            let [ux, uy] = poly.position(t);
            let (lx, ly) = (c + 1.12 * r * ux, c - 1.12 * r * uy);
            let _ = writeln!(
                out,
                r#"<text x="{lx:.3}" y="{ly:.3}" font-size="12" text-anchor="middle" dominant-baseline="middle">p{t}</text>"#
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

pub fn emit_polygon_svg(poly: &GeodesicPolygon, path: &Path, opts: &SvgOptions) -> Result<(), CliError> {
    fs::write(path, polygon_svg(poly, opts)).map_err(|e| CliError::Write { path: path.to_path_buf(), source: e })
}

/// One row per vertex: `t, phi, theta_1 .. theta_g`.
pub fn write_radius_table<W: Write>(poly: &GeodesicPolygon, writer: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["t".to_string(), "phi".to_string()];
    header.extend((1..=poly.g()).map(|i| format!("theta_{i}")));
    w.write_record(&header)?;
    for t in 1..=poly.vertex_count() {
        let mut row = vec![t.to_string(), poly.angle(t).to_string()];
        row.extend(poly.radii(t).iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_radius_table(poly: &GeodesicPolygon, path: &Path) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::Write { path: path.to_path_buf(), source: e })?;
    write_radius_table(poly, file)
}
