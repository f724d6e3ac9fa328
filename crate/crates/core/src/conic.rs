//! Conics as quadratic forms, on both sides of duality.
//!
//! A point conic is `a·x² + b·y² + c·z² + d·xy + e·xz + f·yz = 0`; a dual
//! (line) conic is the same form read on line coefficients, its zero set
//! the set of tangent lines of some point conic when nondegenerate.
//!
//! Two exact questions drive the verifier:
//!
//! * **Six points on one conic** — the 6×6 determinant of their Veronese
//!   images `(x², y², z², xy, xz, yz)` vanishes. Computed division-free by
//!   dynamic programming over column subsets, so it is valid over any
//!   [`Scalar`] with no pivoting concerns.
//! * **The conic through five points** — the one-dimensional nullspace of
//!   the 5×6 Veronese matrix, by Gauss–Jordan elimination (field division
//!   is fine here). Five points in sufficiently general position determine
//!   the conic uniquely; otherwise [`ConicError::NonUniqueConic`].
//!
//! Degenerate conics (line pairs, double lines) are ordinary values:
//! membership still makes exact sense. Only tangency refuses them,
//! because the adjugate-based tangency test is meaningless there.

use thiserror::Error;

use crate::projective::{adjugate3, det3, dot, Line, Point};
use crate::scalar::Scalar;

/// Errors from conic construction and tangency.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    /// The five constraints have rank below five, so no unique conic.
    #[error("five points/lines do not determine a unique conic")]
    NonUniqueConic,
    /// Tangency was asked of a degenerate conic.
    #[error("tangency is undefined for a degenerate conic")]
    DegenerateConic,
    /// All six coefficients are zero.
    #[error("the zero form is not a conic")]
    ZeroConic,
}

/// Veronese image `(x², y², z², xy, xz, yz)` of a triple.
fn veronese<S: Scalar>(t: &[S; 3]) -> [S; 6] {
    let [x, y, z] = t;
    [
        x.clone() * x.clone(),
        y.clone() * y.clone(),
        z.clone() * z.clone(),
        x.clone() * y.clone(),
        x.clone() * z.clone(),
        y.clone() * z.clone(),
    ]
}

/// Determinant of a 6×6 matrix, division-free.
///
/// Dynamic programming over column subsets: after processing rows
/// `0..r`, `minors[mask]` holds the minor on those rows and the columns in
/// `mask`. Placing column `j` as row `r`'s column contributes the Laplace
/// sign `(-1)^(r + |{cols in mask below j}|)`.
pub(crate) fn det6<S: Scalar>(rows: &[[S; 6]; 6]) -> S {
    let mut minors: Vec<S> = vec![S::zero(); 64];
    minors[0] = S::one();
    for (r, row) in rows.iter().enumerate() {
        let mut next: Vec<S> = vec![S::zero(); 64];
        for (mask, cur) in minors.iter().enumerate() {
            if mask.count_ones() as usize != r || cur.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                let bit = 1usize << j;
                if mask & bit != 0 || a.is_zero() {
                    continue;
                }
                let term = cur.clone() * a.clone();
                let below = (mask & (bit - 1)).count_ones() as usize;
                let idx = mask | bit;
                next[idx] = if (r + below) % 2 == 0 {
                    next[idx].clone() + term
                } else {
                    next[idx].clone() - term
                };
            }
        }
        minors = next;
    }
    minors[63].clone()
}

/// The one-dimensional nullspace of a rank-5 5×6 matrix, via Gauss–Jordan
/// elimination; `NonUniqueConic` when the rank is below five.
fn nullspace_5x6<S: Scalar>(rows: &[[S; 6]; 5]) -> Result<[S; 6], ConicError> {
    let mut m: Vec<[S; 6]> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::with_capacity(5);
    let mut row = 0usize;
    for col in 0..6 {
        let Some(pr) = (row..5).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for c in col..6 {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..5 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..6 {
                    m[r][c] = m[r][c].clone() - f.clone() * m[row][c].clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == 5 {
            break;
        }
    }
    if pivots.len() < 5 {
        return Err(ConicError::NonUniqueConic);
    }
    let free = (0..6)
        .find(|c| !pivots.contains(c))
        .expect("five pivots leave one free column");
    let mut sol: [S; 6] = std::array::from_fn(|_| S::zero());
    sol[free] = S::one();
    for (i, &pc) in pivots.iter().enumerate() {
        sol[pc] = -m[i][free].clone();
    }
    Ok(sol)
}

/// A point conic, stored by its six form coefficients
/// `(a, b, c, d, e, f)` for `a·x² + b·y² + c·z² + d·xy + e·xz + f·yz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conic<S: Scalar> {
    coeffs: [S; 6],
}

/// A dual conic: the same form read on line coefficient triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualConic<S: Scalar> {
    coeffs: [S; 6],
}

/// Doubled symmetric matrix of a form: `tᵀ M t = 2·q(t)`, avoiding any
/// division by two so prime fields and rationals share the code.
fn form_matrix<S: Scalar>(q: &[S; 6]) -> [[S; 3]; 3] {
    let [a, b, c, d, e, f] = q.clone();
    let two = |v: S| v.clone() + v;
    [
        [two(a), d.clone(), e.clone()],
        [d, two(b), f.clone()],
        [e, f, two(c)],
    ]
}

/// Coefficients of the form `t ↦ tᵀ M t` for a symmetric matrix `M`.
fn matrix_form<S: Scalar>(m: &[[S; 3]; 3]) -> [S; 6] {
    let two = |v: &S| v.clone() + v.clone();
    [
        m[0][0].clone(),
        m[1][1].clone(),
        m[2][2].clone(),
        two(&m[0][1]),
        two(&m[0][2]),
        two(&m[1][2]),
    ]
}

fn eval_form<S: Scalar>(q: &[S; 6], t: &[S; 3]) -> S {
    dot3_6(q, &veronese(t))
}

fn dot3_6<S: Scalar>(a: &[S; 6], b: &[S; 6]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

impl<S: Scalar> Conic<S> {
    /// Build from the six form coefficients; rejects the zero form.
    pub fn from_coeffs(coeffs: [S; 6]) -> Result<Self, ConicError> {
        if coeffs.iter().all(Scalar::is_zero) {
            Err(ConicError::ZeroConic)
        } else {
            Ok(Conic { coeffs })
        }
    }

    /// The six form coefficients `(a, b, c, d, e, f)`.
    pub fn coeffs(&self) -> &[S; 6] {
        &self.coeffs
    }

    /// Value of the form at a point; zero iff the point lies on the conic.
    pub fn evaluate(&self, p: &Point<S>) -> S {
        eval_form(&self.coeffs, p.coords())
    }

    /// Exact membership test.
    pub fn contains(&self, p: &Point<S>) -> bool {
        self.evaluate(p).is_zero()
    }

    /// A conic is degenerate iff its matrix is singular (the form factors
    /// into two lines, possibly equal).
    pub fn is_degenerate(&self) -> bool {
        let m = form_matrix(&self.coeffs);
        det3(&m[0], &m[1], &m[2]).is_zero()
    }

    /// Exact tangency of a line to a *nondegenerate* conic: the line `l`
    /// is tangent iff `lᵀ · adj(M) · l = 0`. Degenerate conics are
    /// refused — every line through a vertex of a line pair would pass the
    /// algebraic test without being tangent in any useful sense.
    pub fn tangent_line(&self, l: &Line<S>) -> Result<bool, ConicError> {
        let m = form_matrix(&self.coeffs);
        if det3(&m[0], &m[1], &m[2]).is_zero() {
            return Err(ConicError::DegenerateConic);
        }
        let adj = adjugate3(&m);
        let img: [S; 3] = std::array::from_fn(|i| dot(&adj[i], l.coeffs()));
        Ok(dot(&img, l.coeffs()).is_zero())
    }

    /// The dual conic (set of tangent lines), via the adjugate matrix.
    /// Requires nondegeneracy.
    pub fn dual(&self) -> Result<DualConic<S>, ConicError> {
        let m = form_matrix(&self.coeffs);
        if det3(&m[0], &m[1], &m[2]).is_zero() {
            return Err(ConicError::DegenerateConic);
        }
        let coeffs = matrix_form(&adjugate3(&m));
        Ok(DualConic { coeffs })
    }
}

impl<S: Scalar> DualConic<S> {
    /// Build from the six form coefficients; rejects the zero form.
    pub fn from_coeffs(coeffs: [S; 6]) -> Result<Self, ConicError> {
        if coeffs.iter().all(Scalar::is_zero) {
            Err(ConicError::ZeroConic)
        } else {
            Ok(DualConic { coeffs })
        }
    }

    /// The six form coefficients.
    pub fn coeffs(&self) -> &[S; 6] {
        &self.coeffs
    }

    /// Value of the form at a line; zero iff the line belongs to the dual
    /// conic (is tangent to the primal conic, when that exists).
    pub fn evaluate(&self, l: &Line<S>) -> S {
        eval_form(&self.coeffs, l.coeffs())
    }

    /// Exact membership test for a line.
    pub fn contains(&self, l: &Line<S>) -> bool {
        self.evaluate(l).is_zero()
    }

    /// Degenerate iff the matrix of the dual form is singular.
    pub fn is_degenerate(&self) -> bool {
        let m = form_matrix(&self.coeffs);
        det3(&m[0], &m[1], &m[2]).is_zero()
    }

    /// The point conic whose tangent lines this dual conic collects, via
    /// the adjugate. Requires nondegeneracy.
    pub fn primal(&self) -> Result<Conic<S>, ConicError> {
        let m = form_matrix(&self.coeffs);
        if det3(&m[0], &m[1], &m[2]).is_zero() {
            return Err(ConicError::DegenerateConic);
        }
        let coeffs = matrix_form(&adjugate3(&m));
        Ok(Conic { coeffs })
    }
}

/// The 6×6 Veronese determinant of six points; zero iff some conic
/// (possibly degenerate) passes through all six.
pub fn coconic_det<S: Scalar>(ps: &[Point<S>; 6]) -> S {
    let rows: [[S; 6]; 6] = std::array::from_fn(|i| veronese(ps[i].coords()));
    det6(&rows)
}

/// `true` iff the six points lie on one conic.
pub fn six_on_conic<S: Scalar>(ps: &[Point<S>; 6]) -> bool {
    coconic_det(ps).is_zero()
}

/// The dual Veronese determinant of six lines; zero iff some dual conic
/// contains all six (for a nondegenerate one: six tangents of one conic).
pub fn dual_coconic_det<S: Scalar>(ls: &[Line<S>; 6]) -> S {
    let rows: [[S; 6]; 6] = std::array::from_fn(|i| veronese(ls[i].coeffs()));
    det6(&rows)
}

/// `true` iff the six lines belong to one dual conic.
pub fn six_on_dual_conic<S: Scalar>(ls: &[Line<S>; 6]) -> bool {
    dual_coconic_det(ls).is_zero()
}

/// The unique conic through five points, when it exists.
pub fn conic_through<S: Scalar>(ps: &[Point<S>; 5]) -> Result<Conic<S>, ConicError> {
    let rows: [[S; 6]; 5] = std::array::from_fn(|i| veronese(ps[i].coords()));
    let coeffs = nullspace_5x6(&rows)?;
    Ok(Conic { coeffs })
}

/// The unique dual conic through five lines, when it exists.
pub fn dual_conic_through<S: Scalar>(ls: &[Line<S>; 5]) -> Result<DualConic<S>, ConicError> {
    let rows: [[S; 6]; 5] = std::array::from_fn(|i| veronese(ls[i].coeffs()));
    let coeffs = nullspace_5x6(&rows)?;
    Ok(DualConic { coeffs })
}
