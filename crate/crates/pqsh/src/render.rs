//! Static images of `f(D)`: the image of a polar grid (circles and rays)
//! under a harmonic map, as binary PPM (P6) or SVG 1.1.
//!
//! Output bytes are a pure function of the inputs: curve sampling, the
//! bounding box, rasterization, and text formatting are all deterministic.

use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use num_complex::Complex64;

use crate::config::{RenderFormat, RenderSpec};
use crate::series::HarmonicFunction;

#[derive(Debug)]
pub enum RenderError {
    Io { path: String, source: io::Error },
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::Io { path, source } => write!(f, "cannot write `{path}`: {source}"),
        }
    }
}

impl std::error::Error for RenderError {}

const CIRCLE_COLOR: [u8; 3] = [31, 81, 160];
const RAY_COLOR: [u8; 3] = [170, 70, 40];
const BACKGROUND: [u8; 3] = [255, 255, 255];

/// One mapped grid curve: image samples plus its drawing role.
struct Curve {
    points: Vec<Complex64>,
    is_circle: bool,
}

fn sample_curves(f: &HarmonicFunction, spec: &RenderSpec) -> Vec<Curve> {
    let mut curves = Vec::with_capacity(spec.circles + spec.rays);
    for ci in 1..=spec.circles {
        let r = spec.r_max * ci as f64 / spec.circles as f64;
        let points = (0..=spec.samples)
            .map(|s| {
                let theta = 2.0 * PI * s as f64 / spec.samples as f64;
                f.evaluate_unchecked(Complex64::from_polar(r, theta))
            })
            .collect();
        curves.push(Curve { points, is_circle: true });
    }
    for ri in 0..spec.rays {
        let theta = 2.0 * PI * ri as f64 / spec.rays as f64;
        let points = (0..=spec.samples)
            .map(|s| {
                let r = spec.r_max * s as f64 / spec.samples as f64;
                f.evaluate_unchecked(Complex64::from_polar(r, theta))
            })
            .collect();
        curves.push(Curve { points, is_circle: false });
    }
    curves
}

struct Bbox {
    min_x: f64,
    min_y: f64,
    width: f64,
    height: f64,
}

fn bounding_box(curves: &[Curve]) -> Bbox {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for curve in curves {
        for p in &curve.points {
            min_x = min_x.min(p.re);
            max_x = max_x.max(p.re);
            min_y = min_y.min(p.im);
            max_y = max_y.max(p.im);
        }
    }
    let width = (max_x - min_x).max(1e-9);
    let height = (max_y - min_y).max(1e-9);
    // 5% margin on each side.
    Bbox {
        min_x: min_x - 0.05 * width,
        min_y: min_y - 0.05 * height,
        width: width * 1.1,
        height: height * 1.1,
    }
}

/// Render to bytes in the requested format.
pub fn render(f: &HarmonicFunction, spec: &RenderSpec) -> Vec<u8> {
    match spec.format {
        RenderFormat::Ppm => render_ppm(f, spec),
        RenderFormat::Svg => render_svg(f, spec).into_bytes(),
    }
}

/// Render and write to `path`; returns the byte count.
pub fn render_to_file(
    f: &HarmonicFunction,
    spec: &RenderSpec,
    path: &Path,
) -> Result<usize, RenderError> {
    let bytes = render(f, spec);
    std::fs::write(path, &bytes).map_err(|source| RenderError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(bytes.len())
}

/// Binary P6 image: polyline rasterization over a white canvas.
pub fn render_ppm(f: &HarmonicFunction, spec: &RenderSpec) -> Vec<u8> {
    let curves = sample_curves(f, spec);
    let bbox = bounding_box(&curves);
    let (w, h) = (spec.width as usize, spec.height as usize);

    // Aspect-preserving map into pixel space; y runs downward.
    let scale = ((w - 1) as f64 / bbox.width).min((h - 1) as f64 / bbox.height);
    let x_off = ((w - 1) as f64 - bbox.width * scale) / 2.0;
    let y_off = ((h - 1) as f64 - bbox.height * scale) / 2.0;
    let to_pixel = |p: Complex64| -> (i64, i64) {
        let x = (p.re - bbox.min_x) * scale + x_off;
        let y = (bbox.min_y + bbox.height - p.im) * scale + y_off;
        (x.round() as i64, y.round() as i64)
    };

    let mut pixels = vec![BACKGROUND; w * h];
    for curve in &curves {
        let color = if curve.is_circle { CIRCLE_COLOR } else { RAY_COLOR };
        for seg in curve.points.windows(2) {
            let (x0, y0) = to_pixel(seg[0]);
            let (x1, y1) = to_pixel(seg[1]);
            draw_line(&mut pixels, w, h, (x0, y0), (x1, y1), color);
        }
    }

    let mut out = Vec::with_capacity(w * h * 3 + 32);
    out.extend_from_slice(format!("P6\n{w} {h}\n255\n").as_bytes());
    for px in pixels {
        out.extend_from_slice(&px);
    }
    out
}

/// Integer Bresenham segment rasterizer.
fn draw_line(
    pixels: &mut [[u8; 3]],
    w: usize,
    h: usize,
    from: (i64, i64),
    to: (i64, i64),
    color: [u8; 3],
) {
    let (mut x0, mut y0) = from;
    let (x1, y1) = to;
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if (0..w as i64).contains(&x0) && (0..h as i64).contains(&y0) {
            pixels[y0 as usize * w + x0 as usize] = color;
        }
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// SVG 1.1 document with one path per grid curve, fixed 6-decimal
/// formatting.
pub fn render_svg(f: &HarmonicFunction, spec: &RenderSpec) -> String {
    let curves = sample_curves(f, spec);
    let bbox = bounding_box(&curves);
    let stroke = 0.004 * bbox.width.max(bbox.height);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        bbox.min_x,
        -(bbox.min_y + bbox.height),
        bbox.width,
        bbox.height
    );
    let _ = writeln!(
        svg,
        r#"  <rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="white"/>"#,
        bbox.min_x,
        -(bbox.min_y + bbox.height),
        bbox.width,
        bbox.height
    );
    for curve in &curves {
        let color = if curve.is_circle { "#1f51a0" } else { "#aa4628" };
        let mut d = String::new();
        for (idx, p) in curve.points.iter().enumerate() {
            let cmd = if idx == 0 { 'M' } else { 'L' };
            // SVG y axis points down; negate the imaginary part.
            let _ = write!(d, "{cmd}{:.6} {:.6} ", p.re, -p.im);
        }
        let _ = writeln!(
            svg,
            r#"  <path d="{}" fill="none" stroke="{color}" stroke-width="{stroke:.6}"/>"#,
            d.trim_end()
        );
    }
    svg.push_str("</svg>\n");
    svg
}
