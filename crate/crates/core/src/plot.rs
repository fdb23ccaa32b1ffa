//! SVG panels showing the fixed-point set of planar compositions.
//!
//! One panel per composition, at most six, laid out three per row. Input
//! lines are drawn thin in a per-subspace color, the fixed line thick and
//! black. A fixed set `{0}` is a marked origin annotated with the rotation
//! angle; a fixed set ℝ² shades the panel.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::Tolerance;
use crate::operators::{fixed_subspace, OperatorChain};
use crate::plane::{self, PlaneIsometry};
use crate::scene::{Scene, SceneError};
use crate::subspace::Subspace;

pub const MAX_PANELS: usize = 6;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("plots need ambient dimension 2, scene has {0}")]
    NotPlanar(usize),
    #[error("figure has no compositions")]
    Empty,
    #[error("figure has {0} compositions, at most {MAX_PANELS} fit")]
    TooMany(usize),
    #[error("canvas must be positive and range finite and positive")]
    BadCanvas,
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Numeric(#[from] crate::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub compositions: Vec<String>,
    pub width: u32,
    pub height: u32,
    /// Half-width of the square viewport in world units.
    pub range: f64,
}

impl FigureSpec {
    /// Figure settings from the scene's `[figure]` table, defaulting to every
    /// composition on a 900×600 canvas.
    pub fn from_scene(scene: &Scene) -> Self {
        let fig = scene.figure().cloned().unwrap_or_default();
        let compositions = if fig.compositions.is_empty() {
            scene.composition_names().map(str::to_string).collect()
        } else {
            fig.compositions
        };
        FigureSpec {
            compositions,
            width: fig.width.unwrap_or(900),
            height: fig.height.unwrap_or(600),
            range: fig.range.unwrap_or(1.5),
        }
    }

    fn validate(&self) -> Result<(), PlotError> {
        if self.compositions.is_empty() {
            return Err(PlotError::Empty);
        }
        if self.compositions.len() > MAX_PANELS {
            return Err(PlotError::TooMany(self.compositions.len()));
        }
        if self.width == 0 || self.height == 0 || !(self.range > 0.0 && self.range.is_finite()) {
            return Err(PlotError::BadCanvas);
        }
        Ok(())
    }
}

/// What a single panel shows.
#[derive(Debug, Clone, PartialEq)]
pub enum PanelFix {
    Line { axis: f64 },
    Origin { rotation: f64 },
    Plane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub composition: String,
    pub notation: String,
    pub inputs: Vec<String>,
    pub fix: PanelFix,
}

/// Fixed-set summary of one composition in a planar scene.
pub fn panel(scene: &Scene, composition: &str, tol: &Tolerance) -> Result<Panel, PlotError> {
    if scene.ambient() != 2 {
        return Err(PlotError::NotPlanar(scene.ambient()));
    }
    let chain = scene.chain(composition)?;
    let t = OperatorChain::reflectors(&chain)?.compose();
    let fix = fixed_subspace(&t, tol)?.subspace;
    let fix = match fix.dim() {
        0 => {
            let iso = chain.iter().try_fold(PlaneIsometry::identity(), |acc, s| {
                PlaneIsometry::reflector_of(s).map(|r| acc.then(r))
            })?;
            PanelFix::Origin {
                rotation: iso.angle(),
            }
        }
        1 => PanelFix::Line {
            axis: plane::axis_angle(&fix)?,
        },
        _ => PanelFix::Plane,
    };
    let mut inputs: Vec<String> = Vec::new();
    for name in scene.composition(composition)? {
        if !inputs.contains(name) {
            inputs.push(name.clone());
        }
    }
    Ok(Panel {
        composition: composition.to_string(),
        notation: scene.notation(composition)?,
        inputs,
        fix,
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn color_of(scene: &Scene, name: &str) -> &'static str {
    let idx = scene.subspace_names().position(|n| n == name).unwrap_or(0);
    PALETTE[idx % PALETTE.len()]
}

struct Viewport {
    cx: f64,
    cy: f64,
    half: f64,
    range: f64,
}

impl Viewport {
    fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.cx + x / self.range * self.half,
            self.cy - y / self.range * self.half,
        )
    }

    fn line(&self, axis: f64) -> (f64, f64, f64, f64) {
        let l = self.range * 1.5;
        let (s, c) = axis.sin_cos();
        let (x1, y1) = self.to_px(-l * c, -l * s);
        let (x2, y2) = self.to_px(l * c, l * s);
        (x1, y1, x2, y2)
    }
}

fn deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

/// Renders the figure as a standalone SVG 1.1 document.
pub fn render_svg(scene: &Scene, spec: &FigureSpec, tol: &Tolerance) -> Result<String, PlotError> {
    if scene.ambient() != 2 {
        return Err(PlotError::NotPlanar(scene.ambient()));
    }
    spec.validate()?;
    let panels = spec
        .compositions
        .iter()
        .map(|c| panel(scene, c, tol))
        .collect::<Result<Vec<_>, _>>()?;

    let cols = panels.len().min(3);
    let rows = panels.len().div_ceil(3);
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let pw = w / cols as f64;
    let ph = h / rows as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        spec.width, spec.height
    );

    for (i, p) in panels.iter().enumerate() {
        let x0 = (i % 3) as f64 * pw;
        let y0 = (i / 3) as f64 * ph;
        let title_h = 34.0;
        let foot_h = 20.0;
        let side = (pw - 20.0).min(ph - title_h - foot_h - 10.0).max(10.0);
        let vp = Viewport {
            cx: x0 + pw / 2.0,
            cy: y0 + title_h + side / 2.0,
            half: side / 2.0,
            range: spec.range,
        };
        let (bx, by) = (vp.cx - side / 2.0, vp.cy - side / 2.0);

        let _ = writeln!(out, r#"<g id="panel-{i}">"#);
        let _ = writeln!(
            out,
            r#"<clipPath id="clip-{i}"><rect x="{bx:.3}" y="{by:.3}" width="{side:.3}" height="{side:.3}"/></clipPath>"#
        );
        let shade = if p.fix == PanelFix::Plane {
            "#dde8f5"
        } else {
            "none"
        };
        let _ = writeln!(
            out,
            r##"<rect x="{bx:.3}" y="{by:.3}" width="{side:.3}" height="{side:.3}" fill="{shade}" stroke="#444" stroke-width="1"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="13" text-anchor="middle">{}: {}</text>"#,
            vp.cx,
            y0 + 14.0,
            escape(&p.composition),
            escape(&p.notation)
        );

        let _ = writeln!(out, r#"<g clip-path="url(#clip-{i})">"#);
        let (ax1, ay1) = vp.to_px(-spec.range, 0.0);
        let (ax2, ay2) = vp.to_px(spec.range, 0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{ax1:.3}" y1="{ay1:.3}" x2="{ax2:.3}" y2="{ay2:.3}" stroke="#ccc" stroke-width="0.5"/>"##
        );
        let (ax1, ay1) = vp.to_px(0.0, -spec.range);
        let (ax2, ay2) = vp.to_px(0.0, spec.range);
        let _ = writeln!(
            out,
            r##"<line x1="{ax1:.3}" y1="{ay1:.3}" x2="{ax2:.3}" y2="{ay2:.3}" stroke="#ccc" stroke-width="0.5"/>"##
        );

        let mut notes = Vec::new();
        for (j, name) in p.inputs.iter().enumerate() {
            let s: &Subspace = scene.subspace(name)?;
            match s.dim() {
                1 => {
                    let axis = plane::axis_angle(s)?;
                    let (x1, y1, x2, y2) = vp.line(axis);
                    let color = color_of(scene, name);
                    let _ = writeln!(
                        out,
                        r#"<line class="input" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="1.2"/>"#
                    );
                    // label near the rim, staggered so labels of close lines separate
                    let r = spec.range * (0.92 - 0.12 * j as f64);
                    let (lx, ly) = vp.to_px(r * axis.cos(), r * axis.sin());
                    let _ = writeln!(
                        out,
                        r#"<text x="{lx:.3}" y="{ly:.3}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
                        escape(name)
                    );
                }
                0 => notes.push(format!("{name} = {{0}}")),
                _ => notes.push(format!("{name} = R²")),
            }
        }

        let caption = match p.fix {
            PanelFix::Line { axis } => {
                let (x1, y1, x2, y2) = vp.line(axis);
                let _ = writeln!(
                    out,
                    r##"<line class="fixed" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#000" stroke-width="3.5" stroke-opacity="0.75"/>"##
                );
                format!("Fix: axis {axis:.6} rad ({:.3}°)", deg(axis))
            }
            PanelFix::Origin { rotation } => {
                let (ox, oy) = vp.to_px(0.0, 0.0);
                let _ = writeln!(
                    out,
                    r##"<circle class="fixed" cx="{ox:.3}" cy="{oy:.3}" r="5" fill="#000"/>"##
                );
                format!(
                    "Fix = {{0}}; rotation {rotation:.6} rad ({:.3}°)",
                    deg(rotation)
                )
            }
            PanelFix::Plane => "Fix = R²".to_string(),
        };
        let _ = writeln!(out, "</g>");
        if !notes.is_empty() {
            let _ = writeln!(
                out,
                r##"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" fill="#555">{}</text>"##,
                bx + 4.0,
                by + 14.0,
                escape(&notes.join(", "))
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            vp.cx,
            by + side + 15.0,
            escape(&caption)
        );
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
