//! Deterministic SVG 1.1 figure rendering over exact rationals.
//!
//! Rendering never feeds back into verification: every geometric
//! decision (visibility, clipping, viewport) is made with exact
//! rational arithmetic, and decimal conversion happens only at the very
//! last step, when coordinates are written into the SVG text. Decimals
//! are fixed at six places with round-half-even, so the same input
//! yields byte-identical output on every platform.
//!
//! Layers are drawn in a fixed canonical order regardless of how they
//! were requested; element order inside a layer is fixed as well. Lines
//! are drawn as full lines clipped exactly against the viewport
//! rectangle; points become markers with text labels. The `conic` layer
//! traces the conic through `A`, `B`, `C`, `P`, `G` as a deterministic
//! family of exactly computed sample dots (second intersections of
//! chords through `A`).

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::conic::conic_through;
use crate::construct::{
    cevian_feet, g_points, necktie_points, primed_points, q_points, t_points,
    DegenerateConfiguration,
};
use crate::projective::{join, Line, Point, ProjectiveMap};
use crate::scalar::{Rational, Scalar};
use crate::suite::{transform_input, SuiteInput};

// ---------------------------------------------------------------------------
// Charts, layers, figure spec.
// ---------------------------------------------------------------------------

/// Affine chart of the projective plane used for drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chart {
    X,
    Y,
    #[default]
    Z,
}

impl Chart {
    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::X => "x",
            Chart::Y => "y",
            Chart::Z => "z",
        }
    }

    /// Affine coordinates of a point in this chart; `None` when the
    /// point lies on the chart's infinity line. Charts are cyclic:
    /// `z → (x/z, y/z)`, `x → (y/x, z/x)`, `y → (z/y, x/y)`.
    fn point(&self, p: &Point<Rational>) -> Option<(Rational, Rational)> {
        let [x, y, z] = p.coords().clone();
        let (u, v, w) = match self {
            Chart::Z => (x, y, z),
            Chart::X => (y, z, x),
            Chart::Y => (z, x, y),
        };
        let inv = w.inv()?;
        Some((u * inv.clone(), v * inv))
    }

    /// Coefficients `[a, b, c]` of the line as `a·u + b·v + c = 0` in
    /// this chart's affine coordinates.
    fn line(&self, l: &Line<Rational>) -> [Rational; 3] {
        let [l0, l1, l2] = l.coeffs().clone();
        match self {
            Chart::Z => [l0, l1, l2],
            Chart::X => [l1, l2, l0],
            Chart::Y => [l2, l0, l1],
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for an unrecognized chart name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown chart {0:?} (expected x, y, or z)")]
pub struct UnknownChart(pub String);

impl FromStr for Chart {
    type Err = UnknownChart;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" => Ok(Chart::X),
            "y" => Ok(Chart::Y),
            "z" => Ok(Chart::Z),
            other => Err(UnknownChart(other.to_string())),
        }
    }
}

/// A drawable group of construction elements. Variants are declared in
/// canonical drawing order (background geometry first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    /// Triangle sides and the base points `A`, `B`, `C`, `P`.
    Triangle,
    /// Cevian lines `AP`, `BP`, `CP`, their feet, and `A1`, `B1`, `C1`.
    Cevians,
    /// Sample dots tracing the conic through `A`, `B`, `C`, `P`, `G`.
    Conic,
    /// The necktie points `W_A`, `W_B`, `W_C`, `W` and the concurrent
    /// lines `AW_A`, `BW_B`, `CW_C`.
    W,
    /// The auxiliary collinearity points `J_A`, `J_B`, `J_C`.
    J,
    /// `T_A`, `T_B`, `T_C`, `T` with lines `AT_A`, `BT_B`, `CT_C`.
    T,
    /// `G_A`, `G_B`, `G_C`, `G`, `R` with lines `AG_A`, `BG_B`, `CG_C`.
    G,
    /// The `Q`-family `A_Q`, `B_Q`, `C_Q`, `V_A`, `V_B`, `V_C`, `V` with
    /// lines `AV_A`, `BV_B`, `CV_C` (requires a scene with `Q`).
    V,
    /// `A'_P`, `W'_B`, `W'_C`, `N` (requires a scene with `APrime`).
    Primed,
}

impl Layer {
    pub const ALL: [Layer; 9] = [
        Layer::Triangle,
        Layer::Cevians,
        Layer::Conic,
        Layer::W,
        Layer::J,
        Layer::T,
        Layer::G,
        Layer::V,
        Layer::Primed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Layer::Triangle => "triangle",
            Layer::Cevians => "cevians",
            Layer::Conic => "conic",
            Layer::W => "w",
            Layer::J => "j",
            Layer::T => "t",
            Layer::G => "g",
            Layer::V => "v",
            Layer::Primed => "primed",
        }
    }

    fn color(&self) -> &'static str {
        match self {
            Layer::Triangle => "#222222",
            Layer::Cevians => "#8a8a8a",
            Layer::Conic => "#b8860b",
            Layer::W => "#c0392b",
            Layer::J => "#8e44ad",
            Layer::T => "#2980b9",
            Layer::G => "#27ae60",
            Layer::V => "#d35400",
            Layer::Primed => "#16a085",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for an unrecognized layer name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown layer {0:?} (expected a comma-separated subset of: triangle, cevians, conic, w, j, t, g, v, primed)")]
pub struct UnknownLayer(pub String);

impl FromStr for Layer {
    type Err = UnknownLayer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Layer::ALL
            .iter()
            .find(|l| l.as_str() == s)
            .copied()
            .ok_or_else(|| UnknownLayer(s.to_string()))
    }
}

/// Parse a comma-separated layer list (duplicates collapse).
pub fn parse_layers(s: &str) -> Result<BTreeSet<Layer>, UnknownLayer> {
    s.split(',')
        .map(|part| part.trim().parse::<Layer>())
        .collect()
}

/// What to draw and how to map it onto the canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureSpec {
    pub layers: BTreeSet<Layer>,
    pub chart: Chart,
    /// Precompose the projective map sending `A`, `B`, `C`, `P` to
    /// `(0,0)`, `(1,0)`, `(0,1)`, `(1/3, 1/3)` so any scene lands in a
    /// standard affine frame.
    pub normalize: bool,
    pub width: u32,
    pub height: u32,
    /// Viewport margin as a fraction of the drawn bounding box
    /// (numerator, denominator).
    pub margin: (u32, u32),
}

impl Default for FigureSpec {
    fn default() -> Self {
        FigureSpec {
            layers: [Layer::Triangle, Layer::Cevians, Layer::W].into(),
            chart: Chart::Z,
            normalize: false,
            width: 800,
            height: 600,
            margin: (1, 10),
        }
    }
}

/// Rendering failure. Verification is unaffected by any of these; they
/// concern only the drawing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("point {name} lies on the infinity line of the {chart} chart; choose a different chart or pass --normalize")]
    PointAtInfinity { name: String, chart: Chart },
    #[error("cannot draw layer {layer}: degenerate construction: {step}")]
    Degenerate { layer: Layer, step: String },
    #[error("layer v requires a scene with Q")]
    MissingQ,
    #[error("layer primed requires a scene with APrime")]
    MissingAPrime,
    #[error("figure canvas must have positive width, height, and margin denominator")]
    BadCanvas,
}

// ---------------------------------------------------------------------------
// Exact decimal formatting.
// ---------------------------------------------------------------------------

/// Format a rational with exactly six decimal places, rounding
/// half-to-even. Exact: no float is involved.
fn dec6(x: &Rational) -> String {
    let numer = x.numer();
    let denom = x.denom(); // always positive after normalization
    let scaled = numer * BigInt::from(1_000_000u32);
    let negative = scaled.sign() == num_bigint::Sign::Minus;
    let (mut q, r) = scaled.magnitude().div_rem(denom.magnitude());
    let twice = &r * 2u32;
    let round_up = match twice.cmp(denom.magnitude()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => q.is_odd(),
    };
    if round_up {
        q += 1u32;
    }
    let digits = q.to_string();
    let digits = if digits.len() < 7 {
        format!("{digits:0>7}")
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - 6);
    let sign = if negative && digits.bytes().any(|b| b != b'0') {
        "-"
    } else {
        ""
    };
    format!("{sign}{int_part}.{frac_part}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

// ---------------------------------------------------------------------------
// Element collection.
// ---------------------------------------------------------------------------

struct LayerContent {
    layer: Layer,
    lines: Vec<(String, Line<Rational>)>,
    points: Vec<(String, Point<Rational>)>,
    /// Unlabeled exact sample dots (conic layer only).
    dots: Vec<Point<Rational>>,
}

fn degenerate(layer: Layer) -> impl Fn(DegenerateConfiguration) -> SvgError {
    move |e| SvgError::Degenerate { layer, step: e.step }
}

fn line_between(
    layer: Layer,
    label: &str,
    p: &Point<Rational>,
    q: &Point<Rational>,
) -> Result<Line<Rational>, SvgError> {
    join(p, q).map_err(|_| SvgError::Degenerate {
        layer,
        step: format!("join {label}"),
    })
}

/// Second intersection with `conic` of the chord through `a` (a point
/// of the conic) and `d`: writing `q` for the conic's quadratic form,
/// the point is `q(d)·a − (q(a+d) − q(d))·d`. `None` when the chord is
/// tangent at `a` or lies inside a degenerate conic.
fn second_intersection(
    conic: &crate::conic::Conic<Rational>,
    a: &Point<Rational>,
    d: &Point<Rational>,
) -> Option<Point<Rational>> {
    let qd = conic.evaluate(d);
    let sum: [Rational; 3] =
        std::array::from_fn(|i| a.coords()[i].clone() + d.coords()[i].clone());
    let qad = conic.evaluate(&Point::new(sum).ok()?);
    let polar2 = qad - qd.clone(); // 2·B(a, d) since q(a) = 0
    let triple: [Rational; 3] = std::array::from_fn(|i| {
        qd.clone() * a.coords()[i].clone() - polar2.clone() * d.coords()[i].clone()
    });
    Point::new(triple).ok()
}

fn collect_layers(
    input: &SuiteInput<Rational>,
    spec: &FigureSpec,
) -> Result<Vec<LayerContent>, SvgError> {
    let cfg = &input.cfg;
    let mut contents = Vec::new();
    // Construction families are shared across layers; compute each at
    // most once, only when some requested layer needs it.
    let needs_frame = spec
        .layers
        .iter()
        .any(|l| !matches!(l, Layer::Triangle | Layer::Cevians));
    let frame = if needs_frame {
        Some(necktie_points(cfg).map_err(|e| SvgError::Degenerate {
            layer: *spec
                .layers
                .iter()
                .find(|l| !matches!(l, Layer::Triangle | Layer::Cevians))
                .expect("needs_frame implies such a layer"),
            step: e.step,
        })?)
    } else {
        None
    };

    for &layer in &spec.layers {
        let mut lines = Vec::new();
        let mut points = Vec::new();
        let mut dots = Vec::new();
        match layer {
            Layer::Triangle => {
                lines.push(("AB".into(), line_between(layer, "AB", cfg.a(), cfg.b())?));
                lines.push(("BC".into(), line_between(layer, "BC", cfg.b(), cfg.c())?));
                lines.push(("CA".into(), line_between(layer, "CA", cfg.c(), cfg.a())?));
                points.push(("A".into(), cfg.a().clone()));
                points.push(("B".into(), cfg.b().clone()));
                points.push(("C".into(), cfg.c().clone()));
                points.push(("P".into(), cfg.p().clone()));
            }
            Layer::Cevians => {
                let (a_p, b_p, c_p) = cevian_feet(cfg).map_err(degenerate(layer))?;
                lines.push(("AP".into(), line_between(layer, "AP", cfg.a(), cfg.p())?));
                lines.push(("BP".into(), line_between(layer, "BP", cfg.b(), cfg.p())?));
                lines.push(("CP".into(), line_between(layer, "CP", cfg.c(), cfg.p())?));
                points.push(("A_P".into(), a_p));
                points.push(("B_P".into(), b_p));
                points.push(("C_P".into(), c_p));
                points.push(("A1".into(), cfg.a1()));
                points.push(("B1".into(), cfg.b1()));
                points.push(("C1".into(), cfg.c1()));
            }
            Layer::Conic => {
                let f = frame.as_ref().expect("frame computed for this layer");
                let gp = g_points(cfg, f).map_err(degenerate(layer))?;
                let five = [
                    cfg.a().clone(),
                    cfg.b().clone(),
                    cfg.c().clone(),
                    cfg.p().clone(),
                    gp.g.clone(),
                ];
                let conic = conic_through(&five).map_err(|_| SvgError::Degenerate {
                    layer,
                    step: "conic through A, B, C, P, G is not unique".into(),
                })?;
                // Chord directions D = u·B + v·C sweep the pencil
                // through A as (u : v) sweeps the projective line; the
                // fixed (u, v) list below is part of the determinism
                // contract.
                let mut directions = Vec::new();
                for j in 0..=64i64 {
                    directions.push((64 - j, j));
                }
                for j in 1..64i64 {
                    directions.push((j - 64, j));
                }
                for (u, v) in directions {
                    let d: Option<Point<Rational>> = {
                        let t: [Rational; 3] = std::array::from_fn(|i| {
                            Rational::from_int(u) * cfg.b().coords()[i].clone()
                                + Rational::from_int(v) * cfg.c().coords()[i].clone()
                        });
                        Point::new(t).ok()
                    };
                    let Some(d) = d else { continue };
                    if let Some(x) = second_intersection(&conic, cfg.a(), &d) {
                        dots.push(x);
                    }
                }
            }
            Layer::W => {
                let f = frame.as_ref().expect("frame computed for this layer");
                lines.push(("AW_A".into(), line_between(layer, "AW_A", cfg.a(), &f.w_a)?));
                lines.push(("BW_B".into(), line_between(layer, "BW_B", cfg.b(), &f.w_b)?));
                lines.push(("CW_C".into(), line_between(layer, "CW_C", cfg.c(), &f.w_c)?));
                points.push(("W_A".into(), f.w_a.clone()));
                points.push(("W_B".into(), f.w_b.clone()));
                points.push(("W_C".into(), f.w_c.clone()));
                points.push(("W".into(), f.w.clone()));
            }
            Layer::J => {
                let f = frame.as_ref().expect("frame computed for this layer");
                points.push(("J_A".into(), f.j_a.clone()));
                points.push(("J_B".into(), f.j_b.clone()));
                points.push(("J_C".into(), f.j_c.clone()));
            }
            Layer::T => {
                let f = frame.as_ref().expect("frame computed for this layer");
                let tp = t_points(cfg, f).map_err(degenerate(layer))?;
                lines.push(("AT_A".into(), line_between(layer, "AT_A", cfg.a(), &tp.t_a)?));
                lines.push(("BT_B".into(), line_between(layer, "BT_B", cfg.b(), &tp.t_b)?));
                lines.push(("CT_C".into(), line_between(layer, "CT_C", cfg.c(), &tp.t_c)?));
                points.push(("T_A".into(), tp.t_a));
                points.push(("T_B".into(), tp.t_b));
                points.push(("T_C".into(), tp.t_c));
                points.push(("T".into(), tp.t));
            }
            Layer::G => {
                let f = frame.as_ref().expect("frame computed for this layer");
                let gp = g_points(cfg, f).map_err(degenerate(layer))?;
                lines.push(("AG_A".into(), line_between(layer, "AG_A", cfg.a(), &gp.g_a)?));
                lines.push(("BG_B".into(), line_between(layer, "BG_B", cfg.b(), &gp.g_b)?));
                lines.push(("CG_C".into(), line_between(layer, "CG_C", cfg.c(), &gp.g_c)?));
                points.push(("G_A".into(), gp.g_a));
                points.push(("G_B".into(), gp.g_b));
                points.push(("G_C".into(), gp.g_c));
                points.push(("G".into(), gp.g));
                points.push(("R".into(), gp.r));
            }
            Layer::V => {
                let f = frame.as_ref().expect("frame computed for this layer");
                let Some(q) = cfg.q() else {
                    return Err(SvgError::MissingQ);
                };
                let qp = q_points(cfg, f).map_err(degenerate(layer))?;
                lines.push(("AV_A".into(), line_between(layer, "AV_A", cfg.a(), &qp.v_a)?));
                lines.push(("BV_B".into(), line_between(layer, "BV_B", cfg.b(), &qp.v_b)?));
                lines.push(("CV_C".into(), line_between(layer, "CV_C", cfg.c(), &qp.v_c)?));
                let v = {
                    let la = &lines[lines.len() - 3].1;
                    let lb = &lines[lines.len() - 2].1;
                    crate::projective::meet(la, lb).map_err(|_| SvgError::Degenerate {
                        layer,
                        step: "meet of AV_A and BV_B".into(),
                    })?
                };
                points.push(("Q".into(), q.clone()));
                points.push(("A_Q".into(), qp.a_q));
                points.push(("B_Q".into(), qp.b_q));
                points.push(("C_Q".into(), qp.c_q));
                points.push(("V_A".into(), qp.v_a));
                points.push(("V_B".into(), qp.v_b));
                points.push(("V_C".into(), qp.v_c));
                points.push(("V".into(), v));
            }
            Layer::Primed => {
                let f = frame.as_ref().expect("frame computed for this layer");
                if cfg.t_a_prime().is_none() {
                    return Err(SvgError::MissingAPrime);
                }
                let pr = primed_points(cfg, f).map_err(degenerate(layer))?;
                points.push(("A'_P".into(), pr.a_prime_p));
                points.push(("W'_B".into(), pr.w_prime_b));
                points.push(("W'_C".into(), pr.w_prime_c));
                points.push(("N".into(), pr.n));
            }
        }
        contents.push(LayerContent {
            layer,
            lines,
            points,
            dots,
        });
    }
    Ok(contents)
}

// ---------------------------------------------------------------------------
// Exact viewport geometry.
// ---------------------------------------------------------------------------

struct Viewport {
    x_lo: Rational,
    x_hi: Rational,
    y_lo: Rational,
    y_hi: Rational,
    scale: Rational,
    pad_x: Rational,
    pad_y: Rational,
}

impl Viewport {
    /// Fit the bounding box (with margin) into the canvas, preserving
    /// aspect ratio and centering.
    fn fit(
        points: &[(Rational, Rational)],
        spec: &FigureSpec,
    ) -> Result<Viewport, SvgError> {
        if spec.width == 0 || spec.height == 0 || spec.margin.1 == 0 {
            return Err(SvgError::BadCanvas);
        }
        let (first, rest) = points.split_first().expect("at least one drawn point");
        let mut x_lo = first.0.clone();
        let mut x_hi = first.0.clone();
        let mut y_lo = first.1.clone();
        let mut y_hi = first.1.clone();
        for (x, y) in rest {
            if *x < x_lo {
                x_lo = x.clone();
            }
            if *x > x_hi {
                x_hi = x.clone();
            }
            if *y < y_lo {
                y_lo = y.clone();
            }
            if *y > y_hi {
                y_hi = y.clone();
            }
        }
        // Degenerate extents get unit breadth so the figure stays
        // drawable (single point, or all points on an axis-parallel
        // line).
        let half = Rational::new(1, 2);
        if x_lo == x_hi {
            x_lo = x_lo - half.clone();
            x_hi = x_hi + half.clone();
        }
        if y_lo == y_hi {
            y_lo = y_lo - half.clone();
            y_hi = y_hi + half;
        }
        let margin = Rational::new(spec.margin.0 as i64, spec.margin.1 as i64);
        let mx = margin.clone() * (x_hi.clone() - x_lo.clone());
        let my = margin * (y_hi.clone() - y_lo.clone());
        x_lo = x_lo - mx.clone();
        x_hi = x_hi + mx;
        y_lo = y_lo - my.clone();
        y_hi = y_hi + my;

        let bw = x_hi.clone() - x_lo.clone();
        let bh = y_hi.clone() - y_lo.clone();
        let w = Rational::from_int(spec.width as i64);
        let h = Rational::from_int(spec.height as i64);
        let sx = w.clone() * bw.inv().expect("positive width");
        let sy = h.clone() * bh.inv().expect("positive height");
        let scale = if sx < sy { sx } else { sy };
        let pad_x = (w - bw * scale.clone()) * Rational::new(1, 2);
        let pad_y = (h - bh * scale.clone()) * Rational::new(1, 2);
        Ok(Viewport {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            scale,
            pad_x,
            pad_y,
        })
    }

    fn contains(&self, x: &Rational, y: &Rational) -> bool {
        self.x_lo <= *x && *x <= self.x_hi && self.y_lo <= *y && *y <= self.y_hi
    }

    /// Chart coordinates to SVG canvas coordinates (y axis flipped).
    fn to_canvas(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        let sx = self.pad_x.clone() + (x.clone() - self.x_lo.clone()) * self.scale.clone();
        let sy = self.pad_y.clone() + (self.y_hi.clone() - y.clone()) * self.scale.clone();
        (sx, sy)
    }

    /// Clip the chart line `a·x + b·y + c = 0` against the viewport
    /// rectangle, exactly. Returns the visible segment's endpoints in
    /// chart coordinates, or `None` when the line misses the rectangle
    /// (or is the chart's infinity line).
    fn clip_line(&self, coeffs: &[Rational; 3]) -> Option<((Rational, Rational), (Rational, Rational))> {
        let [a, b, c] = coeffs;
        let mut candidates: Vec<(Rational, Rational)> = Vec::new();
        if let Some(a_inv) = a.inv() {
            for y in [&self.y_lo, &self.y_hi] {
                let x = -(b.clone() * y.clone() + c.clone()) * a_inv.clone();
                if self.x_lo <= x && x <= self.x_hi {
                    candidates.push((x, y.clone()));
                }
            }
        }
        if let Some(b_inv) = b.inv() {
            for x in [&self.x_lo, &self.x_hi] {
                let y = -(a.clone() * x.clone() + c.clone()) * b_inv.clone();
                if self.y_lo <= y && y <= self.y_hi {
                    candidates.push((x.clone(), y));
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        if candidates.len() < 2 {
            return None;
        }
        let last = candidates.len() - 1;
        Some((candidates[0].clone(), candidates[last].clone()))
    }
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

/// Render a figure for the given instantiated scene. The returned bytes
/// are a complete standalone SVG 1.1 document and are identical across
/// runs and platforms for identical inputs.
pub fn render_figure(
    input: &SuiteInput<Rational>,
    spec: &FigureSpec,
) -> Result<Vec<u8>, SvgError> {
    let normalized;
    let input = if spec.normalize {
        let cfg = &input.cfg;
        let src = [
            cfg.a().clone(),
            cfg.b().clone(),
            cfg.c().clone(),
            cfg.p().clone(),
        ];
        let dst = [
            Point::affine(Rational::from_int(0), Rational::from_int(0)),
            Point::affine(Rational::from_int(1), Rational::from_int(0)),
            Point::affine(Rational::from_int(0), Rational::from_int(1)),
            Point::affine(Rational::new(1, 3), Rational::new(1, 3)),
        ];
        let m = ProjectiveMap::between_quads(&src, &dst).expect(
            "A, B, C are not collinear and P is off every side, so both quads are frames",
        );
        normalized = transform_input(&m, input);
        &normalized
    } else {
        input
    };

    let contents = collect_layers(input, spec)?;

    // Every labeled point must be finite in the chart; their chart
    // coordinates define the viewport.
    let mut chart_points: Vec<(Rational, Rational)> = Vec::new();
    for content in &contents {
        for (name, p) in &content.points {
            match spec.chart.point(p) {
                Some(xy) => chart_points.push(xy),
                None => {
                    return Err(SvgError::PointAtInfinity {
                        name: name.clone(),
                        chart: spec.chart,
                    })
                }
            }
        }
    }
    if chart_points.is_empty() {
        // Only reachable with a layer set that draws no labeled points
        // (bare `conic`); anchor the viewport on the triangle instead.
        for p in [input.cfg.a(), input.cfg.b(), input.cfg.c()] {
            if let Some(xy) = spec.chart.point(p) {
                chart_points.push(xy);
            }
        }
        if chart_points.is_empty() {
            return Err(SvgError::PointAtInfinity {
                name: "A".into(),
                chart: spec.chart,
            });
        }
    }
    let viewport = Viewport::fit(&chart_points, spec)?;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = spec.width,
        h = spec.height
    );
    let _ = write!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
        w = spec.width,
        h = spec.height
    );

    for content in &contents {
        let color = content.layer.color();
        let _ = write!(svg, "  <g id=\"layer-{}\">\n", content.layer);
        for (label, line) in &content.lines {
            let coeffs = spec.chart.line(line);
            let Some(((x1, y1), (x2, y2))) = viewport.clip_line(&coeffs) else {
                continue;
            };
            let (sx1, sy1) = viewport.to_canvas(&x1, &y1);
            let (sx2, sy2) = viewport.to_canvas(&x2, &y2);
            let _ = write!(
                svg,
                "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1\"><title>{}</title></line>\n",
                dec6(&sx1),
                dec6(&sy1),
                dec6(&sx2),
                dec6(&sy2),
                xml_escape(label)
            );
        }
        for dot in &content.dots {
            let Some((x, y)) = spec.chart.point(dot) else {
                continue;
            };
            if !viewport.contains(&x, &y) {
                continue;
            }
            let (sx, sy) = viewport.to_canvas(&x, &y);
            let _ = write!(
                svg,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"1.5\" fill=\"{color}\"/>\n",
                dec6(&sx),
                dec6(&sy)
            );
        }
        for (name, p) in &content.points {
            let (x, y) = spec
                .chart
                .point(p)
                .expect("checked finite when collecting the viewport");
            let (sx, sy) = viewport.to_canvas(&x, &y);
            let _ = write!(
                svg,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>\n",
                dec6(&sx),
                dec6(&sy)
            );
            let _ = write!(
                svg,
                "    <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
                dec6(&(sx + Rational::from_int(5))),
                dec6(&(sy - Rational::from_int(5))),
                xml_escape(name)
            );
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg.into_bytes())
}
