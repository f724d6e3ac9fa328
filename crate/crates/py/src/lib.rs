//! Python bindings for the necktie verifier.
//!
//! The module mirrors the library's exact-arithmetic surface: points,
//! lines, and conics over the rationals, the incidence predicates with
//! their witness determinants as text, and the three high-level entry
//! points (`verify`, `fuzz`, `figure`) that return the same reports the
//! CLI prints. Scalars cross the boundary as strings like `"15/7"`, so
//! no precision is lost in either direction.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use necktie::conic::{self, Conic as CoreConic};
use necktie::projective::{
    self, cross_ratio_points, Line as CoreLine, Point as CorePoint,
};
use necktie::report::{fuzz_report, verify_report};
use necktie::scalar::{Mersenne61, Rational, Scalar};
use necktie::scene::SceneFile;
use necktie::suite::{self, Claim, FieldChoice, FuzzPlan, SuiteInput, Verdict};
use necktie::svg::{parse_layers, render_figure, Chart, FigureSpec};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rational> {
    Rational::parse_text(s).map_err(value_err)
}

/// A projective point over the exact rationals.
#[pyclass(frozen, from_py_object, module = "necktie_py")]
#[derive(Clone)]
struct Point {
    inner: CorePoint<Rational>,
}

#[pymethods]
impl Point {
    /// Affine point `(x, y)` from rational strings like `"15/7"`.
    #[new]
    fn new(x: &str, y: &str) -> PyResult<Self> {
        Ok(Point {
            inner: CorePoint::affine(rat(x)?, rat(y)?),
        })
    }

    /// Point from a homogeneous triple (not all zero).
    #[staticmethod]
    fn homogeneous(x: &str, y: &str, z: &str) -> PyResult<Self> {
        CorePoint::new([rat(x)?, rat(y)?, rat(z)?])
            .map(|inner| Point { inner })
            .map_err(value_err)
    }

    /// Canonical representative, last nonzero coordinate scaled to 1.
    fn canonical(&self) -> [String; 3] {
        self.inner.canonical_text()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.proj_eq(&other.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.canonical_text().hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        let [x, y, z] = self.inner.canonical_text();
        format!("Point({x} : {y} : {z})")
    }
}

/// A projective line over the exact rationals.
#[pyclass(frozen, from_py_object, module = "necktie_py")]
#[derive(Clone)]
struct Line {
    inner: CoreLine<Rational>,
}

fn line_text(l: &CoreLine<Rational>) -> [String; 3] {
    let [a, b, c] = l.canonical();
    [a.to_text(), b.to_text(), c.to_text()]
}

#[pymethods]
impl Line {
    /// Line with coefficients `(a, b, c)` (not all zero), incidence
    /// `a·x + b·y + c·z = 0`.
    #[new]
    fn new(a: &str, b: &str, c: &str) -> PyResult<Self> {
        CoreLine::new([rat(a)?, rat(b)?, rat(c)?])
            .map(|inner| Line { inner })
            .map_err(value_err)
    }

    /// Canonical coefficient triple, last nonzero coefficient scaled to 1.
    fn canonical(&self) -> [String; 3] {
        line_text(&self.inner)
    }

    fn incident(&self, p: Point) -> bool {
        self.inner.incident(&p.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.proj_eq(&other.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        line_text(&self.inner).hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = line_text(&self.inner);
        format!("Line[{a} : {b} : {c}]")
    }
}

/// A point conic over the exact rationals.
#[pyclass(frozen, from_py_object, module = "necktie_py")]
#[derive(Clone)]
struct Conic {
    inner: CoreConic<Rational>,
}

#[pymethods]
impl Conic {
    /// The unique conic through five points; raises `ValueError` when
    /// the five do not determine one.
    #[staticmethod]
    fn through(points: Vec<Point>) -> PyResult<Self> {
        let five: [CorePoint<Rational>; 5] = points
            .into_iter()
            .map(|p| p.inner)
            .collect::<Vec<_>>()
            .try_into()
            .map_err(|v: Vec<_>| {
                PyValueError::new_err(format!("expected 5 points, got {}", v.len()))
            })?;
        conic::conic_through(&five)
            .map(|inner| Conic { inner })
            .map_err(value_err)
    }

    /// Coefficients `(x², y², z², xy, xz, yz)` as text, up to scale.
    fn coefficients(&self) -> [String; 6] {
        let c = self.inner.coeffs();
        std::array::from_fn(|i| c[i].to_text())
    }

    /// The quadratic form evaluated at `p`, as text. Zero iff `p` lies
    /// on the conic.
    fn evaluate(&self, p: Point) -> String {
        self.inner.evaluate(&p.inner).to_text()
    }

    fn contains(&self, p: Point) -> bool {
        self.inner.contains(&p.inner)
    }

    fn is_degenerate(&self) -> bool {
        self.inner.is_degenerate()
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d, e, f] = self.coefficients();
        format!("Conic({a}, {b}, {c}, {d}, {e}, {f})")
    }
}

/// The line through two distinct points.
#[pyfunction]
fn join(p: Point, q: Point) -> PyResult<Line> {
    projective::join(&p.inner, &q.inner)
        .map(|inner| Line { inner })
        .map_err(value_err)
}

/// The intersection point of two distinct lines.
#[pyfunction]
fn meet(l: Line, m: Line) -> PyResult<Point> {
    projective::meet(&l.inner, &m.inner)
        .map(|inner| Point { inner })
        .map_err(value_err)
}

#[pyfunction]
fn collinear(p: Point, q: Point, r: Point) -> bool {
    projective::collinear(&p.inner, &q.inner, &r.inner)
}

/// The 3×3 collinearity determinant as text; zero iff collinear.
#[pyfunction]
fn collinear_det(p: Point, q: Point, r: Point) -> String {
    projective::det_points(&p.inner, &q.inner, &r.inner).to_text()
}

#[pyfunction]
fn concurrent(l: Line, m: Line, n: Line) -> bool {
    projective::concurrent(&l.inner, &m.inner, &n.inner)
}

/// The 3×3 concurrency determinant as text; zero iff concurrent.
#[pyfunction]
fn concurrent_det(l: Line, m: Line, n: Line) -> String {
    projective::det_lines(&l.inner, &m.inner, &n.inner).to_text()
}

/// Whether six points lie on a common conic (6×6 Veronese determinant).
#[pyfunction]
fn six_on_conic(points: Vec<Point>) -> PyResult<bool> {
    Ok(coconic_det(points)? == "0")
}

/// The 6×6 coconicity determinant as text; zero iff some conic passes
/// through all six points.
#[pyfunction]
fn coconic_det(points: Vec<Point>) -> PyResult<String> {
    let six: [CorePoint<Rational>; 6] = points
        .into_iter()
        .map(|p| p.inner)
        .collect::<Vec<_>>()
        .try_into()
        .map_err(|v: Vec<_>| {
            PyValueError::new_err(format!("expected 6 points, got {}", v.len()))
        })?;
    Ok(conic::coconic_det(&six).to_text())
}

/// The cross-ratio of four collinear points as text (`"inf"` when the
/// ratio has a zero denominator).
#[pyfunction]
fn cross_ratio(p1: Point, p2: Point, p3: Point, p4: Point) -> PyResult<String> {
    cross_ratio_points(&p1.inner, &p2.inner, &p3.inner, &p4.inner)
        .map(|r| r.to_text())
        .map_err(value_err)
}

fn parse_scene(scene_json: &str) -> PyResult<(SceneFile, SuiteInput<Rational>)> {
    let scene = SceneFile::parse(scene_json.as_bytes()).map_err(value_err)?;
    let input = SuiteInput::<Rational>::from_scene(&scene).map_err(value_err)?;
    Ok((scene, input))
}

fn parse_claims(spec: &str) -> PyResult<Vec<Claim>> {
    if spec == "all" {
        return Ok(Claim::ALL.to_vec());
    }
    spec.parse::<Claim>().map(|c| vec![c]).map_err(value_err)
}

/// Verify claims against a scene document and return the JSON report the
/// CLI would print. `claim` is a claim id or `"all"`.
#[pyfunction]
#[pyo3(signature = (scene_json, claim = "all"))]
fn verify(scene_json: &str, claim: &str) -> PyResult<String> {
    let claims = parse_claims(claim)?;
    let (scene, input) = parse_scene(scene_json)?;
    let verdicts: Vec<(Claim, Verdict<Rational>)> = claims
        .iter()
        .map(|&c| (c, suite::verify_claim(c, &input)))
        .collect();
    let bytes = verify_report(&scene, &verdicts);
    String::from_utf8(bytes).map_err(value_err)
}

/// Run the randomized verifier and return the JSON report the CLI would
/// print. `claim = None` runs every claim; `field` is `"rational"` or
/// `"prime"`.
#[pyfunction]
#[pyo3(signature = (claim = None, trials = 100, seed = 42, bound = 100, field = "rational"))]
fn fuzz(
    claim: Option<&str>,
    trials: u32,
    seed: u64,
    bound: i64,
    field: &str,
) -> PyResult<String> {
    let claim = match claim {
        None | Some("all") => None,
        Some(id) => Some(id.parse::<Claim>().map_err(value_err)?),
    };
    let field = match field {
        "rational" => FieldChoice::Rational,
        "prime" => FieldChoice::Prime,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown field {other:?}; expected \"rational\" or \"prime\""
            )))
        }
    };
    let plan = FuzzPlan {
        claim,
        trials,
        seed,
        bound,
        field,
    };
    let bytes = match field {
        FieldChoice::Rational => fuzz_report(&suite::fuzz::<Rational>(&plan).map_err(value_err)?),
        FieldChoice::Prime => fuzz_report(&suite::fuzz::<Mersenne61>(&plan).map_err(value_err)?),
    };
    String::from_utf8(bytes).map_err(value_err)
}

/// Render a scene to a standalone SVG document. `layers` is a
/// comma-separated subset of
/// `triangle,cevians,conic,w,j,t,g,v,primed`; `chart` is `x`, `y`, or
/// `z`.
#[pyfunction]
#[pyo3(signature = (scene_json, layers = "triangle,cevians,w", chart = "z",
                    width = 800, height = 600, normalize = false))]
fn figure(
    scene_json: &str,
    layers: &str,
    chart: &str,
    width: u32,
    height: u32,
    normalize: bool,
) -> PyResult<String> {
    let (_, input) = parse_scene(scene_json)?;
    let spec = FigureSpec {
        layers: parse_layers(layers).map_err(value_err)?,
        chart: chart.parse::<Chart>().map_err(value_err)?,
        normalize,
        width,
        height,
        ..FigureSpec::default()
    };
    let bytes = render_figure(&input, &spec).map_err(value_err)?;
    String::from_utf8(bytes).map_err(value_err)
}

#[pymodule]
fn necktie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Point>()?;
    m.add_class::<Line>()?;
    m.add_class::<Conic>()?;
    m.add_function(wrap_pyfunction!(join, m)?)?;
    m.add_function(wrap_pyfunction!(meet, m)?)?;
    m.add_function(wrap_pyfunction!(collinear, m)?)?;
    m.add_function(wrap_pyfunction!(collinear_det, m)?)?;
    m.add_function(wrap_pyfunction!(concurrent, m)?)?;
    m.add_function(wrap_pyfunction!(concurrent_det, m)?)?;
    m.add_function(wrap_pyfunction!(six_on_conic, m)?)?;
    m.add_function(wrap_pyfunction!(coconic_det, m)?)?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    let claims: Vec<String> = Claim::ALL.iter().map(|c| c.to_string()).collect();
    m.add("CLAIMS", claims)?;
    Ok(())
}
