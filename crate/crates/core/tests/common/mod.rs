//! Independent affine-elimination oracle.
#![allow(dead_code)] // each test binary uses its own subset of the oracle
//!
//! Recomputes every golden value from first principles so the kernel is
//! checked against a genuinely separate code path: affine points as
//! `BigRational` pairs, lines as explicit `ax + by + c = 0` equations
//! from pairwise differences, intersections as bare 2×2 Cramer solves,
//! and coconicity as a 6×6 determinant evaluated by fraction-free-style
//! Gaussian elimination. Nothing in here touches the library's
//! homogeneous types.

use num_rational::BigRational;

pub type Pt = (BigRational, BigRational);

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn pt(x: i64, y: i64) -> Pt {
    (q(x, 1), q(y, 1))
}

/// `a·x + b·y + c = 0`.
#[derive(Clone)]
pub struct OLine {
    a: BigRational,
    b: BigRational,
    c: BigRational,
}

pub fn line(p: &Pt, r: &Pt) -> OLine {
    let a = &r.1 - &p.1;
    let b = &p.0 - &r.0;
    let c = -(&a * &p.0) - &b * &p.1;
    assert!(
        !(a == q(0, 1) && b == q(0, 1)),
        "oracle line through coincident points"
    );
    OLine { a, b, c }
}

pub fn meet(l: &OLine, m: &OLine) -> Pt {
    let det = &l.a * &m.b - &m.a * &l.b;
    assert!(det != q(0, 1), "oracle meet of parallel lines");
    let x = (&l.b * &m.c - &m.b * &l.c) / &det;
    let y = (&m.a * &l.c - &l.a * &m.c) / &det;
    (x, y)
}

pub fn collinear(p: &Pt, r: &Pt, s: &Pt) -> bool {
    (&r.0 - &p.0) * (&s.1 - &p.1) == (&r.1 - &p.1) * (&s.0 - &p.0)
}

/// The point `λ·p + μ·r` in homogeneous terms, i.e. the affine point
/// dividing per the weights (requires `λ + μ ≠ 0`).
pub fn mix(lambda: i64, p: &Pt, mu: i64, r: &Pt) -> Pt {
    let l = q(lambda, 1);
    let m = q(mu, 1);
    let s = &l + &m;
    assert!(s != q(0, 1), "oracle mix weights sum to zero");
    ((&l * &p.0 + &m * &r.0) / &s, (&l * &p.1 + &m * &r.1) / &s)
}

/// Determinant by Gaussian elimination over exact rationals.
fn det_n(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = q(1, 1);
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| m[r][col] != q(0, 1)) else {
            return q(0, 1);
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - delta;
            }
        }
    }
    det
}

/// 6×6 coconicity determinant of affine points (rows are the Veronese
/// images `x², y², 1, xy, x, y`).
pub fn coconic_det6(points: &[Pt; 6]) -> BigRational {
    let rows = points
        .iter()
        .map(|(x, y)| {
            vec![
                x * x,
                y * y,
                q(1, 1),
                x * y,
                x.clone(),
                y.clone(),
            ]
        })
        .collect();
    det_n(rows)
}

/// Every golden point of the K1 configuration (with its `Q`, `A'_P`,
/// and lemma-2 extensions), recomputed independently.
pub struct K1Oracle {
    pub a: Pt,
    pub b: Pt,
    pub c: Pt,
    pub p: Pt,
    pub a1: Pt,
    pub b1: Pt,
    pub c1: Pt,
    pub a_p: Pt,
    pub b_p: Pt,
    pub c_p: Pt,
    pub w_a: Pt,
    pub w_b: Pt,
    pub w_c: Pt,
    pub w: Pt,
    pub j_a: Pt,
    pub j_b: Pt,
    pub j_c: Pt,
    pub t_a: Pt,
    pub t_b: Pt,
    pub t_c: Pt,
    pub t: Pt,
    pub g_a: Pt,
    pub g_b: Pt,
    pub g_c: Pt,
    pub g: Pt,
    pub r: Pt,
    pub a_prime_p: Pt,
    pub w_prime_b: Pt,
    pub w_prime_c: Pt,
    pub n: Pt,
    pub a_q: Pt,
    pub b_q: Pt,
    pub c_q: Pt,
    pub v_a: Pt,
    pub v_b: Pt,
    pub v_c: Pt,
    pub v: Pt,
    pub lemma2_a_b: Pt,
    pub lemma2_b_a: Pt,
    pub lemma2_b_c: Pt,
    pub lemma2_c_b: Pt,
    pub lemma2_a_c: Pt,
    pub lemma2_c_a: Pt,
    pub lemma2_x: Pt,
}

/// Necktie-family points for an arbitrary base, as the oracle computes
/// them. Cevian parameters are weights on (vertex, P); `a_prime` are
/// weights on (A, P).
#[allow(clippy::too_many_arguments)]
pub struct OracleFrame {
    pub a_p: Pt,
    pub b_p: Pt,
    pub c_p: Pt,
    pub a1: Pt,
    pub b1: Pt,
    pub c1: Pt,
    pub w_a: Pt,
    pub w_b: Pt,
    pub w_c: Pt,
    pub w: Pt,
}

pub fn oracle_frame(
    a: &Pt,
    b: &Pt,
    c: &Pt,
    p: &Pt,
    pair_a1: (i64, i64),
    pair_b1: (i64, i64),
    pair_c1: (i64, i64),
) -> OracleFrame {
    let a_p = meet(&line(a, p), &line(b, c));
    let b_p = meet(&line(b, p), &line(c, a));
    let c_p = meet(&line(c, p), &line(a, b));
    let a1 = mix(pair_a1.0, a, pair_a1.1, p);
    let b1 = mix(pair_b1.0, b, pair_b1.1, p);
    let c1 = mix(pair_c1.0, c, pair_c1.1, p);
    let w_c = meet(&line(&a1, &b_p), &line(&b1, &a_p));
    let w_a = meet(&line(&b1, &c_p), &line(&c1, &b_p));
    let w_b = meet(&line(&c1, &a_p), &line(&a1, &c_p));
    let w = meet(&line(a, &w_a), &line(b, &w_b));
    OracleFrame {
        a_p,
        b_p,
        c_p,
        a1,
        b1,
        c1,
        w_a,
        w_b,
        w_c,
        w,
    }
}

/// The primed-family point `N` under the corrected pairing
/// (`W'_B = A1C_P ∩ C1A'_P`, `W'_C = A1B_P ∩ B1A'_P`), which is the one
/// with `W'_X` specializing to `W_X` at `A'_P = A_P`.
pub fn oracle_n_corrected(b: &Pt, c: &Pt, f: &OracleFrame, a_prime_p: &Pt) -> (Pt, Pt, Pt) {
    let w_prime_b = meet(&line(&f.a1, &f.c_p), &line(&f.c1, a_prime_p));
    let w_prime_c = meet(&line(&f.a1, &f.b_p), &line(&f.b1, a_prime_p));
    let n = meet(&line(b, &w_prime_b), &line(c, &w_prime_c));
    (w_prime_b, w_prime_c, n)
}

/// The same construction with the names attached the other way around
/// (`W'_B = A1B_P ∩ B1A'_P`, `W'_C = A1C_P ∩ C1A'_P`). Kept so tests can
/// demonstrate that this pairing does not satisfy the coconicity claim
/// on asymmetric configurations.
pub fn oracle_n_swapped(b: &Pt, c: &Pt, f: &OracleFrame, a_prime_p: &Pt) -> Pt {
    let w_prime_b = meet(&line(&f.a1, &f.b_p), &line(&f.b1, a_prime_p));
    let w_prime_c = meet(&line(&f.a1, &f.c_p), &line(&f.c1, a_prime_p));
    meet(&line(b, &w_prime_b), &line(c, &w_prime_c))
}

pub fn compute_k1() -> K1Oracle {
    let a = pt(0, 0);
    let b = pt(4, 0);
    let c = pt(0, 4);
    let p = pt(1, 1);
    let f = oracle_frame(&a, &b, &c, &p, (-2, 3), (1, 1), (1, 1));

    let j_c = meet(&line(&a, &f.b1), &line(&b, &f.a1));
    let j_a = meet(&line(&b, &f.c1), &line(&c, &f.b1));
    let j_b = meet(&line(&c, &f.a1), &line(&a, &f.c1));

    let t_a = meet(&line(&f.w, &f.a1), &line(&b, &c));
    let t_b = meet(&line(&f.w, &f.b1), &line(&c, &a));
    let t_c = meet(&line(&f.w, &f.c1), &line(&a, &b));
    let t = meet(&line(&a, &t_a), &line(&b, &t_b));

    let g_a = meet(&line(&f.w_a, &p), &line(&b, &c));
    let g_b = meet(&line(&f.w_b, &p), &line(&c, &a));
    let g_c = meet(&line(&f.w_c, &p), &line(&a, &b));
    let g = meet(&line(&a, &g_a), &line(&b, &g_b));
    let r = meet(&line(&f.w_a, &f.a_p), &line(&f.w_b, &f.b_p));

    let a_prime_p = mix(-3, &a, 4, &p);
    let (w_prime_b, w_prime_c, n) = oracle_n_corrected(&b, &c, &f, &a_prime_p);

    let q_pt = pt(2, 3);
    let a_q = meet(&line(&q_pt, &f.a1), &line(&b, &c));
    let b_q = meet(&line(&q_pt, &f.b1), &line(&c, &a));
    let c_q = meet(&line(&q_pt, &f.c1), &line(&a, &b));
    let v_c = meet(&line(&a_q, &f.b1), &line(&b_q, &f.a1));
    let v_a = meet(&line(&b_q, &f.c1), &line(&c_q, &f.b1));
    let v_b = meet(&line(&c_q, &f.a1), &line(&a_q, &f.c1));
    let v = meet(&line(&a, &v_a), &line(&b, &v_b));

    let q2 = pt(1, 2);
    let lemma2_a_b = meet(&line(&a, &p), &line(&b, &q2));
    let lemma2_b_a = meet(&line(&a, &q2), &line(&b, &p));
    let lemma2_b_c = meet(&line(&b, &p), &line(&c, &q2));
    let lemma2_c_b = meet(&line(&b, &q2), &line(&c, &p));
    let lemma2_a_c = meet(&line(&a, &p), &line(&c, &q2));
    let lemma2_c_a = meet(&line(&a, &q2), &line(&c, &p));
    let lemma2_x = meet(
        &line(&lemma2_a_b, &lemma2_b_a),
        &line(&lemma2_b_c, &lemma2_c_b),
    );

    K1Oracle {
        a,
        b,
        c,
        p,
        a1: f.a1.clone(),
        b1: f.b1.clone(),
        c1: f.c1.clone(),
        a_p: f.a_p.clone(),
        b_p: f.b_p.clone(),
        c_p: f.c_p.clone(),
        w_a: f.w_a.clone(),
        w_b: f.w_b.clone(),
        w_c: f.w_c.clone(),
        w: f.w.clone(),
        j_a,
        j_b,
        j_c,
        t_a,
        t_b,
        t_c,
        t,
        g_a,
        g_b,
        g_c,
        g,
        r,
        a_prime_p,
        w_prime_b,
        w_prime_c,
        n,
        a_q,
        b_q,
        c_q,
        v_a,
        v_b,
        v_c,
        v,
        lemma2_a_b,
        lemma2_b_a,
        lemma2_b_c,
        lemma2_c_b,
        lemma2_a_c,
        lemma2_c_a,
        lemma2_x,
    }
}

/// Render an oracle point the way the library renders canonical
/// homogeneous coordinates of a finite point: `[x, y, "1"]`.
pub fn as_canonical(p: &Pt) -> [String; 3] {
    [p.0.to_string(), p.1.to_string(), "1".to_string()]
}
