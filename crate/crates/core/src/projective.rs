//! The projective plane over an exact field.
//!
//! Points and lines are nonzero homogeneous triples, kept exactly as
//! computed — never normalized behind the caller's back, because every
//! predicate here is scale-invariant. Join and meet are cross products;
//! collinearity and concurrency are 3×3 determinants; a claim "holds"
//! exactly when its determinant is the field's zero.
//!
//! Everything except explicit inverses ([`Point::canonical`],
//! [`ProjectiveMap::from_frame`]'s precondition checks, cross-ratio
//! *values*) is division-free, which keeps the same code paths valid over
//! both the rationals and a prime field.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

/// Degenerate inputs to projective operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    /// `(0, 0, 0)` does not name a point.
    #[error("zero triple does not define a point")]
    ZeroPoint,
    /// `(0, 0, 0)` does not name a line.
    #[error("zero triple does not define a line")]
    ZeroLine,
    /// Join of a point with itself.
    #[error("join of coincident points is undefined")]
    CoincidentPoints,
    /// Meet of a line with itself.
    #[error("meet of coincident lines is undefined")]
    CoincidentLines,
    /// Cross-ratio of points that do not lie on one line.
    #[error("cross-ratio requires four collinear points")]
    NotCollinear,
    /// Cross-ratio of lines that do not pass through one point.
    #[error("cross-ratio requires four concurrent lines")]
    NotConcurrent,
    /// Cross-ratio where at least three of the four elements coincide.
    #[error("cross-ratio of a degenerate quadruple is undefined")]
    DegenerateQuadruple,
    /// Four frame points with three of them collinear.
    #[error("frame points must be in general position")]
    DegenerateFrame,
}

// ---------------------------------------------------------------------------
// Raw triple arithmetic (shared with the conic and construction modules).
// ---------------------------------------------------------------------------

pub(crate) fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub(crate) fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub(crate) fn triple_is_zero<S: Scalar>(a: &[S; 3]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Determinant of the 3×3 matrix with rows `a`, `b`, `c`.
pub(crate) fn det3<S: Scalar>(a: &[S; 3], b: &[S; 3], c: &[S; 3]) -> S {
    dot(&cross(a, b), c)
}

/// Adjugate (transposed cofactor matrix): `m · adj(m) = det(m) · I`.
pub(crate) fn adjugate3<S: Scalar>(m: &[[S; 3]; 3]) -> [[S; 3]; 3] {
    let e = |r: usize, c: usize| m[r][c].clone();
    let m2 = |r0: usize, c0: usize, r1: usize, c1: usize| e(r0, c0) * e(r1, c1) - e(r0, c1) * e(r1, c0);
    [
        [m2(1, 1, 2, 2), m2(0, 2, 2, 1), m2(0, 1, 1, 2)],
        [m2(1, 2, 2, 0), m2(0, 0, 2, 2), m2(0, 2, 1, 0)],
        [m2(1, 0, 2, 1), m2(0, 1, 2, 0), m2(0, 0, 1, 1)],
    ]
}

/// Scale a triple so its *last* nonzero coordinate becomes one. This is the
/// canonical representative used by reports and witness comparison; for an
/// affine point `(x, y, 1)` it is the identity.
pub(crate) fn canonical_triple<S: Scalar>(t: &[S; 3]) -> [S; 3] {
    let k = (0..3)
        .rev()
        .find(|&i| !t[i].is_zero())
        .expect("canonical_triple of a zero triple");
    let inv = t[k].inv().expect("nonzero coordinate has an inverse");
    [
        t[0].clone() * inv.clone(),
        t[1].clone() * inv.clone(),
        t[2].clone() * inv,
    ]
}

// ---------------------------------------------------------------------------
// Points and lines.
// ---------------------------------------------------------------------------

/// A projective point: a nonzero homogeneous triple `(x : y : z)`, stored
/// exactly as constructed.
#[derive(Clone, PartialEq, Eq)]
pub struct Point<S: Scalar> {
    coords: [S; 3],
}

/// A projective line: a nonzero coefficient triple `[a : b : c]` of
/// `a·x + b·y + c·z = 0`, stored exactly as constructed.
#[derive(Clone, PartialEq, Eq)]
pub struct Line<S: Scalar> {
    coeffs: [S; 3],
}

impl<S: Scalar> fmt::Debug for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl<S: Scalar> fmt::Debug for Line<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} : {} : {}]",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

impl<S: Scalar> Point<S> {
    /// Build from a homogeneous triple; rejects the zero triple.
    pub fn new(coords: [S; 3]) -> Result<Self, ProjectiveError> {
        if triple_is_zero(&coords) {
            Err(ProjectiveError::ZeroPoint)
        } else {
            Ok(Point { coords })
        }
    }

    /// The affine point `(x, y)` as `(x : y : 1)`.
    pub fn affine(x: S, y: S) -> Self {
        Point {
            coords: [x, y, S::one()],
        }
    }

    /// Borrow the stored triple (not normalized).
    pub fn coords(&self) -> &[S; 3] {
        &self.coords
    }

    /// Equality as projective points: the triples are proportional.
    pub fn proj_eq(&self, other: &Self) -> bool {
        triple_is_zero(&cross(&self.coords, &other.coords))
    }

    /// Canonical representative: last nonzero coordinate scaled to one.
    pub fn canonical(&self) -> [S; 3] {
        canonical_triple(&self.coords)
    }

    /// Canonical coordinates as text, for reports.
    pub fn canonical_text(&self) -> [String; 3] {
        let c = self.canonical();
        [c[0].to_text(), c[1].to_text(), c[2].to_text()]
    }
}

impl<S: Scalar> Line<S> {
    /// Build from a coefficient triple; rejects the zero triple.
    pub fn new(coeffs: [S; 3]) -> Result<Self, ProjectiveError> {
        if triple_is_zero(&coeffs) {
            Err(ProjectiveError::ZeroLine)
        } else {
            Ok(Line { coeffs })
        }
    }

    /// Borrow the stored coefficients (not normalized).
    pub fn coeffs(&self) -> &[S; 3] {
        &self.coeffs
    }

    /// Equality as projective lines: the triples are proportional.
    pub fn proj_eq(&self, other: &Self) -> bool {
        triple_is_zero(&cross(&self.coeffs, &other.coeffs))
    }

    /// Exact incidence test `a·x + b·y + c·z == 0`.
    pub fn incident(&self, p: &Point<S>) -> bool {
        dot(&self.coeffs, &p.coords).is_zero()
    }

    /// Canonical representative: last nonzero coefficient scaled to one.
    pub fn canonical(&self) -> [S; 3] {
        canonical_triple(&self.coeffs)
    }
}

/// The line through two distinct points (cross product of triples).
pub fn join<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<Line<S>, ProjectiveError> {
    let c = cross(&p.coords, &q.coords);
    if triple_is_zero(&c) {
        Err(ProjectiveError::CoincidentPoints)
    } else {
        Ok(Line { coeffs: c })
    }
}

/// The intersection point of two distinct lines (cross product of triples).
pub fn meet<S: Scalar>(l: &Line<S>, m: &Line<S>) -> Result<Point<S>, ProjectiveError> {
    let c = cross(&l.coeffs, &m.coeffs);
    if triple_is_zero(&c) {
        Err(ProjectiveError::CoincidentLines)
    } else {
        Ok(Point { coords: c })
    }
}

/// The collinearity determinant `det(p, q, r)`; zero iff the three points
/// lie on one line (including any coincidences).
pub fn det_points<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>) -> S {
    det3(&p.coords, &q.coords, &r.coords)
}

/// The concurrency determinant `det(l, m, n)` of three lines' coefficient
/// rows; zero iff the lines share a point (including any coincidences).
pub fn det_lines<S: Scalar>(l: &Line<S>, m: &Line<S>, n: &Line<S>) -> S {
    det3(&l.coeffs, &m.coeffs, &n.coeffs)
}

/// `true` iff the three points lie on one line.
pub fn collinear<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>) -> bool {
    det_points(p, q, r).is_zero()
}

/// `true` iff the three lines pass through one point.
pub fn concurrent<S: Scalar>(l: &Line<S>, m: &Line<S>, n: &Line<S>) -> bool {
    det_lines(l, m, n).is_zero()
}

/// Perspectivity: the image of `p` on `target` as seen from `center`,
/// i.e. `target ∩ (center ∨ p)`. Fails if `p` coincides with the center or
/// if the ray already is the target line.
pub fn project_through<S: Scalar>(
    center: &Point<S>,
    p: &Point<S>,
    target: &Line<S>,
) -> Result<Point<S>, ProjectiveError> {
    let ray = join(center, p)?;
    meet(&ray, target)
}

// ---------------------------------------------------------------------------
// Cross-ratio.
// ---------------------------------------------------------------------------

/// The value of a cross-ratio: an element of the field, or the point at
/// infinity of the projective line of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossRatio<S: Scalar> {
    /// An ordinary field value.
    Finite(S),
    /// The reciprocal of zero: exactly one pair of the quadruple coincides
    /// in the pattern that sends the ratio to infinity.
    Infinity,
}

impl<S: Scalar> CrossRatio<S> {
    /// Canonical text: the scalar's text form, or `"inf"`.
    pub fn to_text(&self) -> String {
        match self {
            CrossRatio::Finite(v) => v.to_text(),
            CrossRatio::Infinity => "inf".to_string(),
        }
    }
}

/// Core of the cross-ratio: returns the exact `(numerator, denominator)`
/// pair before division, so callers can compare two cross-ratios as a
/// determinant identity without ever dividing.
///
/// The four triples must represent elements of one pencil: points on the
/// line spanned by the first two, with `not_incident` reporting a failure
/// of that containment. Parameters are extracted division-free: with
/// `n = t0 × t1 ≠ 0` and `k` the first index where `n` is nonzero, element
/// `i` gets homogeneous parameters `αᵢ = (tᵢ × t1)[k]`, `βᵢ = (t0 × tᵢ)[k]`
/// (so `tᵢ ∝ αᵢ·t0 + βᵢ·t1`), and with `d(i,j) = αᵢβⱼ − αⱼβᵢ` the value is
/// `(d(0,2)·d(1,3)) / (d(0,3)·d(1,2))`.
pub(crate) fn cross_ratio_pair<S: Scalar>(
    t: [&[S; 3]; 4],
    not_incident: ProjectiveError,
) -> Result<(S, S), ProjectiveError> {
    let n = cross(t[0], t[1]);
    if triple_is_zero(&n) {
        // First two elements coincide: at least two of four coincide in a
        // way that leaves no pencil to parameterize.
        return Err(ProjectiveError::DegenerateQuadruple);
    }
    if !dot(&n, t[2]).is_zero() || !dot(&n, t[3]).is_zero() {
        return Err(not_incident);
    }
    let k = (0..3).find(|&i| !n[i].is_zero()).expect("n is nonzero");
    let params = |x: &[S; 3]| -> (S, S) {
        let alpha = cross(x, t[1])[k].clone();
        let beta = cross(t[0], x)[k].clone();
        (alpha, beta)
    };
    let ps: Vec<(S, S)> = t.iter().map(|x| params(x)).collect();
    let d = |i: usize, j: usize| -> S {
        ps[i].0.clone() * ps[j].1.clone() - ps[j].0.clone() * ps[i].1.clone()
    };
    let num = d(0, 2) * d(1, 3);
    let den = d(0, 3) * d(1, 2);
    if num.is_zero() && den.is_zero() {
        return Err(ProjectiveError::DegenerateQuadruple);
    }
    Ok((num, den))
}

/// Cross-ratio `(p1, p2; p3, p4)` of four collinear points.
///
/// With affine parameters `tᵢ` on the common line, the value is
/// `((t1−t3)(t2−t4)) / ((t1−t4)(t2−t3))`.
pub fn cross_ratio_points<S: Scalar>(
    p1: &Point<S>,
    p2: &Point<S>,
    p3: &Point<S>,
    p4: &Point<S>,
) -> Result<CrossRatio<S>, ProjectiveError> {
    let (num, den) = cross_ratio_pair(
        [&p1.coords, &p2.coords, &p3.coords, &p4.coords],
        ProjectiveError::NotCollinear,
    )?;
    Ok(match den.inv() {
        Some(i) => CrossRatio::Finite(num * i),
        None => CrossRatio::Infinity,
    })
}

/// Cross-ratio `(l1, l2; l3, l4)` of four concurrent lines; equals the
/// cross-ratio their intersections cut on any transversal line.
pub fn cross_ratio_lines<S: Scalar>(
    l1: &Line<S>,
    l2: &Line<S>,
    l3: &Line<S>,
    l4: &Line<S>,
) -> Result<CrossRatio<S>, ProjectiveError> {
    let (num, den) = cross_ratio_pair(
        [&l1.coeffs, &l2.coeffs, &l3.coeffs, &l4.coeffs],
        ProjectiveError::NotConcurrent,
    )?;
    Ok(match den.inv() {
        Some(i) => CrossRatio::Finite(num * i),
        None => CrossRatio::Infinity,
    })
}

// ---------------------------------------------------------------------------
// Projective maps.
// ---------------------------------------------------------------------------

/// An invertible projective transformation, stored as a 3×3 matrix of
/// row triples, up to scale.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjectiveMap<S: Scalar> {
    rows: [[S; 3]; 3],
}

impl<S: Scalar> fmt::Debug for ProjectiveMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ProjectiveMap{:?}",
            [
                [&self.rows[0][0], &self.rows[0][1], &self.rows[0][2]],
                [&self.rows[1][0], &self.rows[1][1], &self.rows[1][2]],
                [&self.rows[2][0], &self.rows[2][1], &self.rows[2][2]],
            ]
        )
    }
}

impl<S: Scalar> ProjectiveMap<S> {
    /// Build from matrix rows; rejects singular matrices.
    pub fn new(rows: [[S; 3]; 3]) -> Result<Self, ProjectiveError> {
        if det3(&rows[0], &rows[1], &rows[2]).is_zero() {
            Err(ProjectiveError::DegenerateFrame)
        } else {
            Ok(ProjectiveMap { rows })
        }
    }

    /// Borrow the matrix rows.
    pub fn rows(&self) -> &[[S; 3]; 3] {
        &self.rows
    }

    /// The identity map.
    pub fn identity() -> Self {
        let o = S::one;
        let z = S::zero;
        ProjectiveMap {
            rows: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]],
        }
    }

    /// The unique map sending the standard frame
    /// `e1, e2, e3, (1:1:1)` to `a, b, c, d`. Fails iff any three of the
    /// four target points are collinear.
    ///
    /// Division-free: with `λ1 = det(d,b,c)`, `λ2 = det(a,d,c)`,
    /// `λ3 = det(a,b,d)`, the columns are `λᵢ` times the respective point;
    /// general position is exactly `det(a,b,c) ≠ 0` and all `λᵢ ≠ 0`.
    pub fn from_frame(
        a: &Point<S>,
        b: &Point<S>,
        c: &Point<S>,
        d: &Point<S>,
    ) -> Result<Self, ProjectiveError> {
        let l1 = det3(&d.coords, &b.coords, &c.coords);
        let l2 = det3(&a.coords, &d.coords, &c.coords);
        let l3 = det3(&a.coords, &b.coords, &d.coords);
        let base = det3(&a.coords, &b.coords, &c.coords);
        if base.is_zero() || l1.is_zero() || l2.is_zero() || l3.is_zero() {
            return Err(ProjectiveError::DegenerateFrame);
        }
        let cols = [a.coords(), b.coords(), c.coords()];
        let lambda = [l1, l2, l3];
        let mut rows: [[S; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for (j, (col, lam)) in cols.iter().zip(&lambda).enumerate() {
            for i in 0..3 {
                rows[i][j] = lam.clone() * col[i].clone();
            }
        }
        Ok(ProjectiveMap { rows })
    }

    /// The unique map sending the four source points to the four
    /// destination points (each quadruple in general position).
    pub fn between_quads(
        src: &[Point<S>; 4],
        dst: &[Point<S>; 4],
    ) -> Result<Self, ProjectiveError> {
        let to_dst = Self::from_frame(&dst[0], &dst[1], &dst[2], &dst[3])?;
        let to_src = Self::from_frame(&src[0], &src[1], &src[2], &src[3])?;
        Ok(to_dst.compose(&to_src.inverse()))
    }

    /// The inverse map (adjugate matrix; equal up to scale, which is all a
    /// projective map is defined up to).
    pub fn inverse(&self) -> Self {
        ProjectiveMap {
            rows: adjugate3(&self.rows),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut rows: [[S; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = S::zero();
                for (k, other_row) in other.rows.iter().enumerate() {
                    acc = acc + self.rows[i][k].clone() * other_row[j].clone();
                }
                rows[i][j] = acc;
            }
        }
        ProjectiveMap { rows }
    }

    /// Image of a point. Total: an invertible matrix cannot send a nonzero
    /// triple to zero.
    pub fn apply(&self, p: &Point<S>) -> Point<S> {
        let coords = std::array::from_fn(|i| dot(&self.rows[i], &p.coords));
        Point { coords }
    }

    /// Image of a line: coefficient rows transform by the inverse
    /// transpose, here realized as the adjugate transpose so no division
    /// is needed.
    pub fn apply_line(&self, l: &Line<S>) -> Line<S> {
        let adj = adjugate3(&self.rows);
        let coeffs = std::array::from_fn(|i| {
            let col = [adj[0][i].clone(), adj[1][i].clone(), adj[2][i].clone()];
            dot(&col, &l.coeffs)
        });
        Line { coeffs }
    }
}
