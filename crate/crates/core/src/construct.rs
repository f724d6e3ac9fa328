//! The named constructions: from a triangle `A B C` with a distinguished
//! point `P` and points `A1, B1, C1` on its cevians, every derived point
//! that the verified claims speak about.
//!
//! Conventions, fixed once here so no caller re-derives them:
//!
//! * Cevian points are given by homogeneous parameter pairs:
//!   `A1 = α·A + β·P` on line `AP` (computed on the stored representatives
//!   of `A` and `P`, which commutes with any projective map applied to the
//!   configuration). Likewise `B1`, `C1`, and the optional `A'_P`.
//! * Cevian feet: `A_P = AP ∩ BC`, `B_P = BP ∩ CA`, `C_P = CP ∩ AB`.
//! * All "and cyclically" constructions apply the substitution
//!   `A → B → C → A` to the explicit formula; every resolved formula is
//!   written out below rather than implied.
//!
//! Input invariants live in [`Configuration::new`] (and `with_q`); they
//! make the *frame* constructions total. Deeper constructions can still
//! degenerate (two defining lines coinciding, a join of equal points);
//! those return [`DegenerateConfiguration`] naming the offending step, so
//! a fuzzer can distinguish "theorem false" from "input degenerate".

use thiserror::Error;

use crate::projective::{det_points, join, meet, Line, Point, ProjectiveMap};
use crate::projective::{cross_ratio_pair, ProjectiveError};
use crate::scalar::Scalar;

/// A violated input invariant (bad scene or bad generator draw).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    /// A cevian parameter pair is `(0, 0)`.
    #[error("cevian parameter pair for {0} must not be (0, 0)")]
    ZeroCevianPair(&'static str),
    /// `A`, `B`, `C` collinear (or coincident).
    #[error("A, B, C are collinear")]
    CollinearBase,
    /// `P` lies on a side line of the triangle (covers coincidences too).
    #[error("P on side {0}")]
    POnSide(&'static str),
    /// A cevian point coincides with its cevian foot.
    #[error("{0} coincides with the cevian foot {1}")]
    CevianAtFoot(&'static str, &'static str),
    /// A cevian point coincides with an endpoint of its cevian (the
    /// triangle vertex or `P`), where the constructions collapse.
    #[error("{0} coincides with {1}")]
    CevianAtEndpoint(&'static str, &'static str),
    /// `Q` lies on a side line of the triangle.
    #[error("Q on side {0}")]
    QOnSide(&'static str),
    /// `Q` coincides with a cevian point.
    #[error("Q coincides with {0}")]
    QAtCevianPoint(&'static str),
    /// `Q` lies on a side line of the cevian triangle.
    #[error("Q on line {0}")]
    QOnCevianLine(&'static str),
    /// A lemma-1 pencil line does not pass through `E`.
    #[error("lemma-1 line {0} must pass through E")]
    LemmaLineMissesE(&'static str),
    /// A lemma-1 pencil line passes through one of `A`, `B`, `C`, `D`.
    #[error("lemma-1 line {0} must not pass through {1}")]
    LemmaLineThroughPoint(&'static str, &'static str),
    /// Fewer than the minimum number of lemma-1 samples.
    #[error("lemma-1 sample count {0} is below the minimum of 6")]
    LemmaTooFewSamples(u32),
}

/// A construction step that degenerated at run time (a join of coincident
/// points or a meet of coincident lines), named for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("degenerate construction: {step}")]
pub struct DegenerateConfiguration {
    /// Human-readable name of the failing step.
    pub step: String,
}

impl DegenerateConfiguration {
    pub(crate) fn at(step: impl Into<String>) -> Self {
        DegenerateConfiguration { step: step.into() }
    }
}

fn named_join<S: Scalar>(
    label: &str,
    p: &Point<S>,
    q: &Point<S>,
) -> Result<Line<S>, DegenerateConfiguration> {
    join(p, q).map_err(|_| DegenerateConfiguration::at(format!("join {label}")))
}

fn named_meet<S: Scalar>(
    label: &str,
    l: &Line<S>,
    m: &Line<S>,
) -> Result<Point<S>, DegenerateConfiguration> {
    meet(l, m).map_err(|_| DegenerateConfiguration::at(format!("meet {label}")))
}

/// `α·p + β·q` on the stored representatives; `None` for the zero triple
/// (which requires `p ∝ q`).
fn combine<S: Scalar>(alpha: &S, p: &Point<S>, beta: &S, q: &Point<S>) -> Option<Point<S>> {
    let t: [S; 3] = std::array::from_fn(|i| {
        alpha.clone() * p.coords()[i].clone() + beta.clone() * q.coords()[i].clone()
    });
    Point::new(t).ok()
}

// ---------------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------------

/// The validated input scene: triangle `A B C`, cevian point `P`, cevian
/// parameters for `A1`, `B1`, `C1`, and the optional extras `Q` (a second
/// cevian-like point) and the parameter pair of `A'_P` on line `AP`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration<S: Scalar> {
    a: Point<S>,
    b: Point<S>,
    c: Point<S>,
    p: Point<S>,
    t_a1: (S, S),
    t_b1: (S, S),
    t_c1: (S, S),
    q: Option<Point<S>>,
    t_a_prime: Option<(S, S)>,
}

impl<S: Scalar> Configuration<S> {
    /// Validate and build the core configuration (no `Q`, no `A'_P`).
    ///
    /// Checks, in order: nonzero parameter pairs; each cevian point
    /// distinct from the endpoints of its cevian (a zero parameter
    /// component puts it at the triangle vertex or at `P`, collapsing the
    /// constructions); `A, B, C` not collinear; `P` on no side line (this
    /// covers every coincidence among the four base points); each cevian
    /// point distinct from its cevian foot. `A1 ∉ {B, C}` needs no check:
    /// `A1` lies on line `AP`, which meets `{B, C}` only if the base
    /// invariants already failed.
    pub fn new(
        a: Point<S>,
        b: Point<S>,
        c: Point<S>,
        p: Point<S>,
        t_a1: (S, S),
        t_b1: (S, S),
        t_c1: (S, S),
    ) -> Result<Self, ConfigError> {
        for (name, vertex, pair) in [
            ("A1", "A", &t_a1),
            ("B1", "B", &t_b1),
            ("C1", "C", &t_c1),
        ] {
            if pair.0.is_zero() && pair.1.is_zero() {
                return Err(ConfigError::ZeroCevianPair(name));
            }
            if pair.1.is_zero() {
                return Err(ConfigError::CevianAtEndpoint(name, vertex));
            }
            if pair.0.is_zero() {
                return Err(ConfigError::CevianAtEndpoint(name, "P"));
            }
        }
        if det_points(&a, &b, &c).is_zero() {
            return Err(ConfigError::CollinearBase);
        }
        if det_points(&a, &b, &p).is_zero() {
            return Err(ConfigError::POnSide("AB"));
        }
        if det_points(&b, &c, &p).is_zero() {
            return Err(ConfigError::POnSide("BC"));
        }
        if det_points(&c, &a, &p).is_zero() {
            return Err(ConfigError::POnSide("CA"));
        }
        let cfg = Configuration {
            a,
            b,
            c,
            p,
            t_a1,
            t_b1,
            t_c1,
            q: None,
            t_a_prime: None,
        };
        let (a_p, b_p, c_p) = cevian_feet(&cfg).expect("feet are total on a valid base");
        for (name, foot_name, pt, foot) in [
            ("A1", "A_P", cfg.a1(), &a_p),
            ("B1", "B_P", cfg.b1(), &b_p),
            ("C1", "C_P", cfg.c1(), &c_p),
        ] {
            if pt.proj_eq(foot) {
                return Err(ConfigError::CevianAtFoot(name, foot_name));
            }
        }
        Ok(cfg)
    }

    /// Attach `Q`, validating its invariants: off every side of `ABC`,
    /// distinct from `A1`, `B1`, `C1`, and off the cevian-triangle lines
    /// `B1C1`, `C1A1`, `A1B1` (checked only where the two endpoints are
    /// distinct — a collapsed side constrains nothing).
    pub fn with_q(mut self, q: Point<S>) -> Result<Self, ConfigError> {
        let sides = [
            ("AB", join(&self.a, &self.b).expect("distinct vertices")),
            ("BC", join(&self.b, &self.c).expect("distinct vertices")),
            ("CA", join(&self.c, &self.a).expect("distinct vertices")),
        ];
        for (name, l) in &sides {
            if l.incident(&q) {
                return Err(ConfigError::QOnSide(name));
            }
        }
        let (a1, b1, c1) = (self.a1(), self.b1(), self.c1());
        for (name, pt) in [("A1", &a1), ("B1", &b1), ("C1", &c1)] {
            if q.proj_eq(pt) {
                return Err(ConfigError::QAtCevianPoint(name));
            }
        }
        for (name, u, v) in [
            ("B1C1", &b1, &c1),
            ("C1A1", &c1, &a1),
            ("A1B1", &a1, &b1),
        ] {
            if let Ok(l) = join(u, v) {
                if l.incident(&q) {
                    return Err(ConfigError::QOnCevianLine(name));
                }
            }
        }
        self.q = Some(q);
        Ok(self)
    }

    /// Attach the `A'_P` parameter pair (a point on line `AP`). Only the
    /// pair itself is validated here; `A'_P ≠ A1` is a precondition of
    /// [`primed_points`], which reports it as a degeneracy.
    pub fn with_a_prime(mut self, t: (S, S)) -> Result<Self, ConfigError> {
        if t.0.is_zero() && t.1.is_zero() {
            return Err(ConfigError::ZeroCevianPair("APrime"));
        }
        self.t_a_prime = Some(t);
        Ok(self)
    }

    pub fn a(&self) -> &Point<S> {
        &self.a
    }
    pub fn b(&self) -> &Point<S> {
        &self.b
    }
    pub fn c(&self) -> &Point<S> {
        &self.c
    }
    pub fn p(&self) -> &Point<S> {
        &self.p
    }
    pub fn q(&self) -> Option<&Point<S>> {
        self.q.as_ref()
    }
    pub fn t_a1(&self) -> &(S, S) {
        &self.t_a1
    }
    pub fn t_b1(&self) -> &(S, S) {
        &self.t_b1
    }
    pub fn t_c1(&self) -> &(S, S) {
        &self.t_c1
    }
    pub fn t_a_prime(&self) -> Option<&(S, S)> {
        self.t_a_prime.as_ref()
    }

    /// `A1 = α·A + β·P`. Total on a valid configuration.
    pub fn a1(&self) -> Point<S> {
        combine(&self.t_a1.0, &self.a, &self.t_a1.1, &self.p)
            .expect("A and P are projectively independent")
    }

    /// `B1 = α·B + β·P`.
    pub fn b1(&self) -> Point<S> {
        combine(&self.t_b1.0, &self.b, &self.t_b1.1, &self.p)
            .expect("B and P are projectively independent")
    }

    /// `C1 = α·C + β·P`.
    pub fn c1(&self) -> Point<S> {
        combine(&self.t_c1.0, &self.c, &self.t_c1.1, &self.p)
            .expect("C and P are projectively independent")
    }

    /// `A'_P = α·A + β·P` from the optional parameter pair.
    pub fn a_prime_p(&self) -> Option<Point<S>> {
        self.t_a_prime.as_ref().map(|(al, be)| {
            combine(al, &self.a, be, &self.p).expect("A and P are projectively independent")
        })
    }
}

/// Apply a projective map to a configuration. Cevian parameter pairs are
/// kept verbatim: the combination `α·A + β·P` commutes with any linear
/// map on representatives, so the mapped pairs name the mapped points.
pub fn transform_configuration<S: Scalar>(
    m: &ProjectiveMap<S>,
    cfg: &Configuration<S>,
) -> Configuration<S> {
    let mapped = Configuration {
        a: m.apply(&cfg.a),
        b: m.apply(&cfg.b),
        c: m.apply(&cfg.c),
        p: m.apply(&cfg.p),
        t_a1: cfg.t_a1.clone(),
        t_b1: cfg.t_b1.clone(),
        t_c1: cfg.t_c1.clone(),
        q: cfg.q.as_ref().map(|q| m.apply(q)),
        t_a_prime: cfg.t_a_prime.clone(),
    };
    debug_assert!(
        !det_points(&mapped.a, &mapped.b, &mapped.c).is_zero(),
        "invertible maps preserve general position"
    );
    mapped
}

// ---------------------------------------------------------------------------
// Derived point families.
// ---------------------------------------------------------------------------

/// The base frame every theorem builds on: cevian points and feet, the
/// three necktie points `W_A, W_B, W_C`, their common point `W`, and the
/// auxiliary points `J_A, J_B, J_C`.
#[derive(Debug, Clone)]
pub struct NecktieFrame<S: Scalar> {
    pub a_p: Point<S>,
    pub b_p: Point<S>,
    pub c_p: Point<S>,
    pub a1: Point<S>,
    pub b1: Point<S>,
    pub c1: Point<S>,
    pub w_a: Point<S>,
    pub w_b: Point<S>,
    pub w_c: Point<S>,
    pub w: Point<S>,
    pub j_a: Point<S>,
    pub j_b: Point<S>,
    pub j_c: Point<S>,
}

/// The `T` family: `T_A = WA1 ∩ BC` (cyclically) and their asserted
/// common point `T = AT_A ∩ BT_B`.
#[derive(Debug, Clone)]
pub struct TPoints<S: Scalar> {
    pub t_a: Point<S>,
    pub t_b: Point<S>,
    pub t_c: Point<S>,
    pub t: Point<S>,
}

/// The `G` family: `G_A = W_AP ∩ BC` (cyclically), `G = AG_A ∩ BG_B`,
/// and `R = W_AA_P ∩ W_BB_P`.
#[derive(Debug, Clone)]
pub struct GPoints<S: Scalar> {
    pub g_a: Point<S>,
    pub g_b: Point<S>,
    pub g_c: Point<S>,
    pub g: Point<S>,
    pub r: Point<S>,
}

/// The primed family built from a second point `A'_P` on line `AP`:
/// `W'_B, W'_C` and their induced point `N`.
#[derive(Debug, Clone)]
pub struct PrimedPoints<S: Scalar> {
    pub a_prime_p: Point<S>,
    pub w_prime_b: Point<S>,
    pub w_prime_c: Point<S>,
    pub n: Point<S>,
}

/// The `Q` family: `A_Q, B_Q, C_Q` (feet of the `Q`-cevians through
/// `A1, B1, C1`) and the points `V_A, V_B, V_C`.
#[derive(Debug, Clone)]
pub struct QPoints<S: Scalar> {
    pub a_q: Point<S>,
    pub b_q: Point<S>,
    pub c_q: Point<S>,
    pub v_a: Point<S>,
    pub v_b: Point<S>,
    pub v_c: Point<S>,
}

/// The two-cevian-point lemma's six intersection points.
#[derive(Debug, Clone)]
pub struct Lemma2Points<S: Scalar> {
    pub a_b: Point<S>,
    pub b_a: Point<S>,
    pub b_c: Point<S>,
    pub c_b: Point<S>,
    pub a_c: Point<S>,
    pub c_a: Point<S>,
}

/// Cevian feet: `A_P = AP ∩ BC`, `B_P = BP ∩ CA`, `C_P = CP ∩ AB`.
/// Total on a valid configuration; the `Result` guards direct misuse.
pub fn cevian_feet<S: Scalar>(
    cfg: &Configuration<S>,
) -> Result<(Point<S>, Point<S>, Point<S>), DegenerateConfiguration> {
    let ap = named_join("AP", &cfg.a, &cfg.p)?;
    let bp = named_join("BP", &cfg.b, &cfg.p)?;
    let cp = named_join("CP", &cfg.c, &cfg.p)?;
    let bc = named_join("BC", &cfg.b, &cfg.c)?;
    let ca = named_join("CA", &cfg.c, &cfg.a)?;
    let ab = named_join("AB", &cfg.a, &cfg.b)?;
    let a_p = named_meet("of AP and BC", &ap, &bc)?;
    let b_p = named_meet("of BP and CA", &bp, &ca)?;
    let c_p = named_meet("of CP and AB", &cp, &ab)?;
    Ok((a_p, b_p, c_p))
}

/// The necktie frame:
/// `W_C = A1B_P ∩ B1A_P`, `W_A = B1C_P ∩ C1B_P`, `W_B = C1A_P ∩ A1C_P`,
/// `W = AW_A ∩ BW_B`,
/// `J_C = AB1 ∩ BA1`, `J_A = BC1 ∩ CB1`, `J_B = CA1 ∩ AC1`.
pub fn necktie_points<S: Scalar>(
    cfg: &Configuration<S>,
) -> Result<NecktieFrame<S>, DegenerateConfiguration> {
    let (a_p, b_p, c_p) = cevian_feet(cfg)?;
    let a1 = cfg.a1();
    let b1 = cfg.b1();
    let c1 = cfg.c1();

    let w_c = named_meet(
        "of A1B_P and B1A_P",
        &named_join("A1B_P", &a1, &b_p)?,
        &named_join("B1A_P", &b1, &a_p)?,
    )?;
    let w_a = named_meet(
        "of B1C_P and C1B_P",
        &named_join("B1C_P", &b1, &c_p)?,
        &named_join("C1B_P", &c1, &b_p)?,
    )?;
    let w_b = named_meet(
        "of C1A_P and A1C_P",
        &named_join("C1A_P", &c1, &a_p)?,
        &named_join("A1C_P", &a1, &c_p)?,
    )?;
    let w = named_meet(
        "of AW_A and BW_B",
        &named_join("AW_A", &cfg.a, &w_a)?,
        &named_join("BW_B", &cfg.b, &w_b)?,
    )?;

    let j_c = named_meet(
        "of AB1 and BA1",
        &named_join("AB1", &cfg.a, &b1)?,
        &named_join("BA1", &cfg.b, &a1)?,
    )?;
    let j_a = named_meet(
        "of BC1 and CB1",
        &named_join("BC1", &cfg.b, &c1)?,
        &named_join("CB1", &cfg.c, &b1)?,
    )?;
    let j_b = named_meet(
        "of CA1 and AC1",
        &named_join("CA1", &cfg.c, &a1)?,
        &named_join("AC1", &cfg.a, &c1)?,
    )?;

    Ok(NecktieFrame {
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
        j_a,
        j_b,
        j_c,
    })
}

/// `T_A = WA1 ∩ BC`, `T_B = WB1 ∩ CA`, `T_C = WC1 ∩ AB`,
/// `T = AT_A ∩ BT_B`. Degenerates when `W` coincides with a cevian point.
pub fn t_points<S: Scalar>(
    cfg: &Configuration<S>,
    frame: &NecktieFrame<S>,
) -> Result<TPoints<S>, DegenerateConfiguration> {
    let bc = named_join("BC", &cfg.b, &cfg.c)?;
    let ca = named_join("CA", &cfg.c, &cfg.a)?;
    let ab = named_join("AB", &cfg.a, &cfg.b)?;
    let t_a = named_meet(
        "of WA1 and BC",
        &named_join("WA1", &frame.w, &frame.a1)?,
        &bc,
    )?;
    let t_b = named_meet(
        "of WB1 and CA",
        &named_join("WB1", &frame.w, &frame.b1)?,
        &ca,
    )?;
    let t_c = named_meet(
        "of WC1 and AB",
        &named_join("WC1", &frame.w, &frame.c1)?,
        &ab,
    )?;
    let t = named_meet(
        "of AT_A and BT_B",
        &named_join("AT_A", &cfg.a, &t_a)?,
        &named_join("BT_B", &cfg.b, &t_b)?,
    )?;
    Ok(TPoints { t_a, t_b, t_c, t })
}

/// `G_A = W_AP ∩ BC`, `G_B = W_BP ∩ CA`, `G_C = W_CP ∩ AB`,
/// `G = AG_A ∩ BG_B`, `R = W_AA_P ∩ W_BB_P`.
pub fn g_points<S: Scalar>(
    cfg: &Configuration<S>,
    frame: &NecktieFrame<S>,
) -> Result<GPoints<S>, DegenerateConfiguration> {
    let bc = named_join("BC", &cfg.b, &cfg.c)?;
    let ca = named_join("CA", &cfg.c, &cfg.a)?;
    let ab = named_join("AB", &cfg.a, &cfg.b)?;
    let g_a = named_meet(
        "of W_AP and BC",
        &named_join("W_AP", &frame.w_a, &cfg.p)?,
        &bc,
    )?;
    let g_b = named_meet(
        "of W_BP and CA",
        &named_join("W_BP", &frame.w_b, &cfg.p)?,
        &ca,
    )?;
    let g_c = named_meet(
        "of W_CP and AB",
        &named_join("W_CP", &frame.w_c, &cfg.p)?,
        &ab,
    )?;
    let g = named_meet(
        "of AG_A and BG_B",
        &named_join("AG_A", &cfg.a, &g_a)?,
        &named_join("BG_B", &cfg.b, &g_b)?,
    )?;
    let r = named_meet(
        "of W_AA_P and W_BB_P",
        &named_join("W_AA_P", &frame.w_a, &frame.a_p)?,
        &named_join("W_BB_P", &frame.w_b, &frame.b_p)?,
    )?;
    Ok(GPoints { g_a, g_b, g_c, g, r })
}

/// The primed family from `A'_P` on line `AP`:
/// `W'_B = A1C_P ∩ C1A'_P`, `W'_C = A1B_P ∩ B1A'_P`,
/// `N = BW'_B ∩ CW'_C`.
///
/// The vertex pairing is chosen so each primed point degenerates to its
/// same-named frame point: at `A'_P = A_P`, `W'_B = W_B` and `W'_C = W_C`,
/// hence `N = BW_B ∩ CW_C = W`; and at `A'_P = P`, `N = A`. Both
/// identities are exercised by tests, and the coconicity claim this
/// family feeds holds under (and only under) this pairing across
/// randomized configurations.
pub fn primed_points<S: Scalar>(
    cfg: &Configuration<S>,
    frame: &NecktieFrame<S>,
) -> Result<PrimedPoints<S>, DegenerateConfiguration> {
    let Some(a_prime_p) = cfg.a_prime_p() else {
        return Err(DegenerateConfiguration::at("missing A'_P parameter"));
    };
    if a_prime_p.proj_eq(&frame.a1) {
        return Err(DegenerateConfiguration::at("A'_P coincides with A1"));
    }
    let w_prime_b = named_meet(
        "of A1C_P and C1A'_P",
        &named_join("A1C_P", &frame.a1, &frame.c_p)?,
        &named_join("C1A'_P", &frame.c1, &a_prime_p)?,
    )?;
    let w_prime_c = named_meet(
        "of A1B_P and B1A'_P",
        &named_join("A1B_P", &frame.a1, &frame.b_p)?,
        &named_join("B1A'_P", &frame.b1, &a_prime_p)?,
    )?;
    let n = named_meet(
        "of BW'_B and CW'_C",
        &named_join("BW'_B", &cfg.b, &w_prime_b)?,
        &named_join("CW'_C", &cfg.c, &w_prime_c)?,
    )?;
    Ok(PrimedPoints {
        a_prime_p,
        w_prime_b,
        w_prime_c,
        n,
    })
}

/// The `Q` family: `A_Q = QA1 ∩ BC`, `B_Q = QB1 ∩ CA`, `C_Q = QC1 ∩ AB`;
/// `V_C = A_QB1 ∩ B_QA1`, `V_A = B_QC1 ∩ C_QB1`, `V_B = C_QA1 ∩ A_QC1`.
///
/// With `Q = P` this reproduces the frame: the feet become the cevian
/// feet and each `V` point equals the same-named `W` point.
pub fn q_points<S: Scalar>(
    cfg: &Configuration<S>,
    frame: &NecktieFrame<S>,
) -> Result<QPoints<S>, DegenerateConfiguration> {
    let Some(q) = cfg.q() else {
        return Err(DegenerateConfiguration::at("missing Q"));
    };
    let bc = named_join("BC", &cfg.b, &cfg.c)?;
    let ca = named_join("CA", &cfg.c, &cfg.a)?;
    let ab = named_join("AB", &cfg.a, &cfg.b)?;
    let a_q = named_meet("of QA1 and BC", &named_join("QA1", q, &frame.a1)?, &bc)?;
    let b_q = named_meet("of QB1 and CA", &named_join("QB1", q, &frame.b1)?, &ca)?;
    let c_q = named_meet("of QC1 and AB", &named_join("QC1", q, &frame.c1)?, &ab)?;
    let v_c = named_meet(
        "of A_QB1 and B_QA1",
        &named_join("A_QB1", &a_q, &frame.b1)?,
        &named_join("B_QA1", &b_q, &frame.a1)?,
    )?;
    let v_a = named_meet(
        "of B_QC1 and C_QB1",
        &named_join("B_QC1", &b_q, &frame.c1)?,
        &named_join("C_QB1", &c_q, &frame.b1)?,
    )?;
    let v_b = named_meet(
        "of C_QA1 and A_QC1",
        &named_join("C_QA1", &c_q, &frame.a1)?,
        &named_join("A_QC1", &a_q, &frame.c1)?,
    )?;
    Ok(QPoints {
        a_q,
        b_q,
        c_q,
        v_a,
        v_b,
        v_c,
    })
}

/// Intersections of two cevian pencils on five points in general
/// position: `A_B = AP ∩ BQ`, `B_A = AQ ∩ BP`, `B_C = BP ∩ CQ`,
/// `C_B = BQ ∩ CP`, `A_C = AP ∩ CQ`, `C_A = AQ ∩ CP`.
pub fn lemma2_points<S: Scalar>(
    pts: &[Point<S>; 5],
) -> Result<Lemma2Points<S>, DegenerateConfiguration> {
    let names = ["A", "B", "C", "P", "Q"];
    for i in 0..5 {
        for j in (i + 1)..5 {
            for k in (j + 1)..5 {
                if det_points(&pts[i], &pts[j], &pts[k]).is_zero() {
                    return Err(DegenerateConfiguration::at(format!(
                        "{}, {}, {} are collinear",
                        names[i], names[j], names[k]
                    )));
                }
            }
        }
    }
    let [a, b, c, p, q] = pts;
    let ap = named_join("AP", a, p)?;
    let aq = named_join("AQ", a, q)?;
    let bp = named_join("BP", b, p)?;
    let bq = named_join("BQ", b, q)?;
    let cp = named_join("CP", c, p)?;
    let cq = named_join("CQ", c, q)?;
    Ok(Lemma2Points {
        a_b: named_meet("of AP and BQ", &ap, &bq)?,
        b_a: named_meet("of AQ and BP", &aq, &bp)?,
        b_c: named_meet("of BP and CQ", &bp, &cq)?,
        c_b: named_meet("of BQ and CP", &bq, &cp)?,
        a_c: named_meet("of AP and CQ", &ap, &cq)?,
        c_a: named_meet("of AQ and CP", &aq, &cp)?,
    })
}

// ---------------------------------------------------------------------------
// The pencil-projection lemma (three lines through E).
// ---------------------------------------------------------------------------

/// A validated instance of the pencil-projection lemma: five base points
/// `A, B, C, D, E` and three lines `l1, l2, l3` through `E`, each
/// avoiding `A, B, C, D`. A point `P` moving along `l3` induces
/// `X = AA' ∩ BB'` with `A' = CP ∩ l1`, `B' = DP ∩ l2`; the lemma asserts
/// all such `X` lie on one conic through `A`, `B`, `E`.
#[derive(Debug, Clone)]
pub struct LemmaOneInstance<S: Scalar> {
    pub a: Point<S>,
    pub b: Point<S>,
    pub c: Point<S>,
    pub d: Point<S>,
    pub e: Point<S>,
    pub l1: Line<S>,
    pub l2: Line<S>,
    pub l3: Line<S>,
}

impl<S: Scalar> LemmaOneInstance<S> {
    /// Validate the preconditions: every line passes through `E` and
    /// through none of `A, B, C, D`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: Point<S>,
        b: Point<S>,
        c: Point<S>,
        d: Point<S>,
        e: Point<S>,
        l1: Line<S>,
        l2: Line<S>,
        l3: Line<S>,
    ) -> Result<Self, ConfigError> {
        for (name, l) in [("l1", &l1), ("l2", &l2), ("l3", &l3)] {
            if !l.incident(&e) {
                return Err(ConfigError::LemmaLineMissesE(name));
            }
            for (pn, pt) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
                if l.incident(pt) {
                    return Err(ConfigError::LemmaLineThroughPoint(name, pn));
                }
            }
        }
        Ok(LemmaOneInstance {
            a,
            b,
            c,
            d,
            e,
            l1,
            l2,
            l3,
        })
    }

    /// The induced point `X` for a position `P` on `l3`:
    /// `A' = CP ∩ l1`, `B' = DP ∩ l2`, `X = AA' ∩ BB'`.
    /// At `P = E` both primed points collapse to `E`, so `X = E` whenever
    /// `AE` and `BE` are distinct lines.
    pub fn induced_point(&self, p: &Point<S>) -> Result<Point<S>, DegenerateConfiguration> {
        if !self.l3.incident(p) {
            return Err(DegenerateConfiguration::at("P not on l3"));
        }
        let a_prime = named_meet("of CP and l1", &named_join("CP", &self.c, p)?, &self.l1)?;
        let b_prime = named_meet("of DP and l2", &named_join("DP", &self.d, p)?, &self.l2)?;
        named_meet(
            "of AA' and BB'",
            &named_join("AA'", &self.a, &a_prime)?,
            &named_join("BB'", &self.b, &b_prime)?,
        )
    }

    /// Deterministic sample positions on `l3`: `E + j·F` for
    /// `j = 1..=count`, where `F` is the first intersection of `l3` with a
    /// coordinate line that is distinct from `E`. All samples are
    /// pairwise distinct, lie on `l3`, and avoid `E`.
    pub fn sample_positions(&self, count: u32) -> Vec<Point<S>> {
        let partner = self.span_partner();
        (1..=count)
            .map(|j| {
                combine(&S::one(), &self.e, &S::from_int(j as i64), &partner)
                    .expect("E and the span partner are independent")
            })
            .collect()
    }

    /// A point of `l3` projectively distinct from `E`: among the meets of
    /// `l3` with the three coordinate lines at least two are distinct, so
    /// at most one can coincide with `E`.
    fn span_partner(&self) -> Point<S> {
        for k in 0..3 {
            let mut axis = [S::zero(), S::zero(), S::zero()];
            axis[k] = S::one();
            let Ok(axis) = Line::new(axis) else {
                unreachable!("unit triple is nonzero")
            };
            if let Ok(m) = meet(&self.l3, &axis) {
                if !m.proj_eq(&self.e) {
                    return m;
                }
            }
        }
        unreachable!("a projective line meets the coordinate triangle in at least two points")
    }
}

// ---------------------------------------------------------------------------
// The cross-ratio trace of the conic theorem's proof.
// ---------------------------------------------------------------------------

/// Errors of [`theorem_1_5_trace`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    /// A join/meet inside the trace degenerated.
    #[error(transparent)]
    Construction(#[from] DegenerateConfiguration),
    /// One of the two cross-ratio quadruples has fewer than three
    /// distinct points, so its cross-ratio is undefined.
    #[error("degenerate trace: quadruple {0} collapses")]
    DegenerateTrace(&'static str),
}

/// The proof-trace record of the conic theorem: the foot of `PJ_A` on
/// `BC` (asserted equal to `T_A`), four auxiliary intersection points,
/// and the two cross-ratios (kept as exact numerator/denominator pairs)
/// asserted equal.
#[derive(Debug, Clone)]
pub struct TraceRecord<S: Scalar> {
    /// `PJ_A ∩ BC`.
    pub foot: Point<S>,
    /// `B1C ∩ BA`.
    pub c_u: Point<S>,
    /// `B1A ∩ BC`.
    pub a_u: Point<S>,
    /// `BP ∩ CW`.
    pub c_b_star: Point<S>,
    /// `BP ∩ AW`.
    pub a_b_star: Point<S>,
    /// `(B, G_A; A_P, T_A)` as an exact (numerator, denominator) pair.
    pub ratio_left: (S, S),
    /// `(B, G_C; C_P, T_C)` as an exact (numerator, denominator) pair.
    pub ratio_right: (S, S),
}

impl<S: Scalar> TraceRecord<S> {
    /// The cross-multiplied equality determinant of the two ratios:
    /// zero iff `(B, G_A; A_P, T_A) = (B, G_C; C_P, T_C)` (with the value
    /// at infinity compared correctly).
    pub fn ratio_equality_det(&self) -> S {
        self.ratio_left.0.clone() * self.ratio_right.1.clone()
            - self.ratio_right.0.clone() * self.ratio_left.1.clone()
    }
}

/// Compute the proof trace of the conic theorem: the concurrency foot
/// `PJ_A ∩ BC` (equal to `T_A` exactly, on every non-degenerate
/// configuration), the auxiliary points, and the two cross-ratios.
pub fn theorem_1_5_trace<S: Scalar>(
    cfg: &Configuration<S>,
    frame: &NecktieFrame<S>,
    tp: &TPoints<S>,
    gp: &GPoints<S>,
) -> Result<TraceRecord<S>, TraceError> {
    let bc = named_join("BC", &cfg.b, &cfg.c)?;
    let foot = named_meet(
        "of PJ_A and BC",
        &named_join("PJ_A", &cfg.p, &frame.j_a)?,
        &bc,
    )?;
    let c_u = named_meet(
        "of B1C and BA",
        &named_join("B1C", &frame.b1, &cfg.c)?,
        &named_join("BA", &cfg.b, &cfg.a)?,
    )?;
    let a_u = named_meet(
        "of B1A and BC",
        &named_join("B1A", &frame.b1, &cfg.a)?,
        &bc,
    )?;
    let bp = named_join("BP", &cfg.b, &cfg.p)?;
    let c_b_star = named_meet("of BP and CW", &bp, &named_join("CW", &cfg.c, &frame.w)?)?;
    let a_b_star = named_meet("of BP and AW", &bp, &named_join("AW", &cfg.a, &frame.w)?)?;

    let left = cross_ratio_pair(
        [
            cfg.b.coords(),
            gp.g_a.coords(),
            frame.a_p.coords(),
            tp.t_a.coords(),
        ],
        ProjectiveError::NotCollinear,
    )
    .map_err(|_| TraceError::DegenerateTrace("(B, G_A, A_P, T_A)"))?;
    let right = cross_ratio_pair(
        [
            cfg.b.coords(),
            gp.g_c.coords(),
            frame.c_p.coords(),
            tp.t_c.coords(),
        ],
        ProjectiveError::NotCollinear,
    )
    .map_err(|_| TraceError::DegenerateTrace("(B, G_C, C_P, T_C)"))?;

    Ok(TraceRecord {
        foot,
        c_u,
        a_u,
        c_b_star,
        a_b_star,
        ratio_left: left,
        ratio_right: right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::collinear;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        Rational::parse_text(s).unwrap()
    }

    fn pt(x: &str, y: &str) -> Point<Rational> {
        Point::affine(r(x), r(y))
    }

    fn ri(n: i64) -> Rational {
        Rational::from_int(n)
    }

    /// The golden configuration used across the test suite:
    /// right triangle with a symmetric interior point.
    fn k1() -> Configuration<Rational> {
        Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(-2), ri(3)),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
        )
        .unwrap()
    }

    fn assert_affine(p: &Point<Rational>, x: &str, y: &str) {
        assert!(
            p.proj_eq(&pt(x, y)),
            "expected ({x}, {y}), got {:?}",
            p.canonical_text()
        );
    }

    #[test]
    fn validation_rejects_bad_bases() {
        let zero_pair = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(0), ri(0)),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
        );
        assert_eq!(zero_pair.unwrap_err(), ConfigError::ZeroCevianPair("A1"));

        let collinear_base = Configuration::new(
            pt("0", "0"),
            pt("1", "1"),
            pt("2", "2"),
            pt("1", "0"),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
        );
        assert_eq!(collinear_base.unwrap_err(), ConfigError::CollinearBase);

        let p_on_side = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("2", "2"),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
        );
        assert_eq!(p_on_side.unwrap_err(), ConfigError::POnSide("BC"));

        // A1 at the cevian foot: with A=(0,0), P=(1,1), the foot of the
        // A-cevian is (2,2) = 0·A + 2·P ∝ (-1)·A + ... choose the pair
        // that lands exactly on it: α·A + β·P = (β, β, α+β) ∝ (2,2,1)
        // needs β/(α+β) = 2, e.g. (α, β) = (-1, 2).
        let at_foot = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(-1), ri(2)),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
        );
        assert_eq!(at_foot.unwrap_err(), ConfigError::CevianAtFoot("A1", "A_P"));

        // A zero parameter component puts the cevian point at an endpoint
        // of its cevian: (λ, 0) is the vertex, (0, μ) is P.
        let at_vertex = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(1), ri(1)),
            (ri(7), ri(0)),
            (ri(1), ri(1)),
        );
        assert_eq!(
            at_vertex.unwrap_err(),
            ConfigError::CevianAtEndpoint("B1", "B")
        );
        let at_p = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(1), ri(1)),
            (ri(1), ri(1)),
            (ri(0), ri(-3)),
        );
        assert_eq!(at_p.unwrap_err(), ConfigError::CevianAtEndpoint("C1", "P"));
    }

    #[test]
    fn q_validation() {
        let q_on_side = k1().with_q(pt("2", "0"));
        assert_eq!(q_on_side.unwrap_err(), ConfigError::QOnSide("AB"));

        let q_at_cevian = k1().with_q(pt("3", "3"));
        assert_eq!(q_at_cevian.unwrap_err(), ConfigError::QAtCevianPoint("A1"));

        // B1=(5/2,1/2), C1=(1/2,5/2): line B1C1 is x + y = 3.
        let q_on_line = k1().with_q(pt("1", "2"));
        assert_eq!(q_on_line.unwrap_err(), ConfigError::QOnCevianLine("B1C1"));

        assert!(k1().with_q(pt("2", "3")).is_ok());
    }

    #[test]
    fn golden_cevian_feet() {
        let (a_p, b_p, c_p) = cevian_feet(&k1()).unwrap();
        assert_affine(&a_p, "2", "2");
        assert_affine(&b_p, "0", "4/3");
        assert_affine(&c_p, "4/3", "0");
    }

    #[test]
    fn golden_necktie_frame() {
        let cfg = k1();
        let f = necktie_points(&cfg).unwrap();
        assert_affine(&f.a1, "3", "3");
        assert_affine(&f.b1, "5/2", "1/2");
        assert_affine(&f.c1, "1/2", "5/2");
        assert_affine(&f.w_c, "15/8", "19/8");
        assert_affine(&f.w_a, "-1", "-1");
        assert_affine(&f.w_b, "19/8", "15/8");
        assert_affine(&f.w, "15/7", "15/7");
        assert_affine(&f.j_c, "15/4", "3/4");
        assert_affine(&f.j_a, "5/3", "5/3");
        // The W-defining incidences hold exactly.
        let a1bp = join(&f.a1, &f.b_p).unwrap();
        let b1ap = join(&f.b1, &f.a_p).unwrap();
        assert!(a1bp.incident(&f.w_c) && b1ap.incident(&f.w_c));
        // Third concurrent line through W.
        assert!(collinear(cfg.c(), &f.w_c, &f.w));
        // Pappus certificates.
        assert!(collinear(cfg.c(), &f.w_c, &f.j_c));
        assert!(collinear(cfg.a(), &f.w_a, &f.j_a));
        assert!(collinear(cfg.b(), &f.w_b, &f.j_b));
    }

    #[test]
    fn golden_t_points() {
        let cfg = k1();
        let f = necktie_points(&cfg).unwrap();
        let t = t_points(&cfg, &f).unwrap();
        assert_affine(&t.t_a, "2", "2");
        assert_affine(&t.t_b, "0", "12");
        assert_affine(&t.t_c, "12", "0");
        assert_affine(&t.t, "3", "3");
    }

    #[test]
    fn golden_g_points() {
        let cfg = k1();
        let f = necktie_points(&cfg).unwrap();
        let g = g_points(&cfg, &f).unwrap();
        assert_affine(&g.g_a, "2", "2");
        assert_affine(&g.g_b, "0", "4/11");
        assert_affine(&g.g_c, "4/11", "0");
        assert_affine(&g.g, "1/3", "1/3");
        assert_affine(&g.r, "19/11", "19/11");
        // Corollary: G, R, P collinear (all on y = x here).
        assert!(collinear(&g.g, &g.r, cfg.p()));
    }

    #[test]
    fn golden_primed_points() {
        // A'_P = (4,4) = -3·A + 4·P.
        let cfg = k1().with_a_prime((ri(-3), ri(4))).unwrap();
        let f = necktie_points(&cfg).unwrap();
        let pr = primed_points(&cfg, &f).unwrap();
        assert_affine(&pr.a_prime_p, "4", "4");
        assert_affine(&pr.w_prime_b, "41/12", "15/4");
        assert_affine(&pr.w_prime_c, "15/4", "41/12");
        assert_affine(&pr.n, "45/13", "45/13");
    }

    #[test]
    fn primed_points_specialize_to_frame() {
        // A'_P = A_P = (2,2) is the pair (-1, 2); each primed point must
        // collapse to its same-named frame point and N to W.
        let cfg = k1().with_a_prime((ri(-1), ri(2))).unwrap();
        let f = necktie_points(&cfg).unwrap();
        let pr = primed_points(&cfg, &f).unwrap();
        assert!(pr.a_prime_p.proj_eq(&f.a_p));
        assert!(pr.w_prime_b.proj_eq(&f.w_b));
        assert!(pr.w_prime_c.proj_eq(&f.w_c));
        assert!(pr.n.proj_eq(&f.w));

        // A'_P = P is the pair (0, 1); N must collapse to A.
        let cfg = k1().with_a_prime((ri(0), ri(1))).unwrap();
        let f = necktie_points(&cfg).unwrap();
        let pr = primed_points(&cfg, &f).unwrap();
        assert!(pr.n.proj_eq(cfg.a()));

        // A'_P = A1 violates the precondition.
        let cfg = k1().with_a_prime((ri(-2), ri(3))).unwrap();
        let f = necktie_points(&cfg).unwrap();
        assert_eq!(
            primed_points(&cfg, &f).unwrap_err(),
            DegenerateConfiguration::at("A'_P coincides with A1")
        );
    }

    #[test]
    fn golden_q_points() {
        let cfg = k1().with_q(pt("2", "3")).unwrap();
        let f = necktie_points(&cfg).unwrap();
        let qp = q_points(&cfg, &f).unwrap();
        assert_affine(&qp.a_q, "1", "3");
        assert_affine(&qp.b_q, "0", "13");
        assert_affine(&qp.c_q, "-7", "0");
        assert_affine(&qp.v_c, "5", "-11/3");
        assert_affine(&qp.v_a, "3/5", "2/5");
        assert_affine(&qp.v_b, "1/7", "15/7");
    }

    #[test]
    fn q_points_specialize_to_frame_at_p() {
        let cfg = k1().with_q(pt("1", "1")).unwrap();
        let f = necktie_points(&cfg).unwrap();
        let qp = q_points(&cfg, &f).unwrap();
        assert!(qp.a_q.proj_eq(&f.a_p));
        assert!(qp.b_q.proj_eq(&f.b_p));
        assert!(qp.c_q.proj_eq(&f.c_p));
        assert!(qp.v_a.proj_eq(&f.w_a));
        assert!(qp.v_b.proj_eq(&f.w_b));
        assert!(qp.v_c.proj_eq(&f.w_c));
    }

    #[test]
    fn cevian_points_at_p_are_rejected() {
        // A1 = B1 = C1 = P would collapse every necktie point onto P and
        // leave the deeper constructions undefined; validation refuses
        // the configuration up front.
        let cfg = Configuration::new(
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            (ri(0), ri(1)),
            (ri(0), ri(1)),
            (ri(0), ri(1)),
        );
        assert_eq!(
            cfg.unwrap_err(),
            ConfigError::CevianAtEndpoint("A1", "P")
        );
    }

    #[test]
    fn golden_lemma2() {
        let pts = [
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            pt("1", "2"),
        ];
        let l = lemma2_points(&pts).unwrap();
        assert_affine(&l.a_b, "8/5", "8/5");
        assert_affine(&l.b_a, "4/7", "8/7");
        assert_affine(&l.b_c, "8/5", "4/5");
        assert_affine(&l.c_b, "4/7", "16/7");
        assert_affine(&l.a_c, "4/3", "4/3");
        assert_affine(&l.c_a, "4/5", "8/5");
    }

    #[test]
    fn lemma2_swap_involution() {
        let pts = [
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            pt("1", "2"),
        ];
        let swapped = [
            pts[0].clone(),
            pts[1].clone(),
            pts[2].clone(),
            pts[4].clone(),
            pts[3].clone(),
        ];
        let l = lemma2_points(&pts).unwrap();
        let m = lemma2_points(&swapped).unwrap();
        assert!(l.a_b.proj_eq(&m.b_a));
        assert!(l.b_a.proj_eq(&m.a_b));
        assert!(l.b_c.proj_eq(&m.c_b));
        assert!(l.c_b.proj_eq(&m.b_c));
        assert!(l.a_c.proj_eq(&m.c_a));
        assert!(l.c_a.proj_eq(&m.a_c));
    }

    #[test]
    fn lemma2_rejects_collinear_triples() {
        let pts = [
            pt("0", "0"),
            pt("4", "0"),
            pt("0", "4"),
            pt("1", "1"),
            pt("2", "2"), // on line AP
        ];
        let err = lemma2_points(&pts).unwrap_err();
        assert_eq!(err.step, "A, P, Q are collinear");
    }

    fn lemma1_fixture() -> LemmaOneInstance<Rational> {
        let e = pt("2", "2");
        let l1 = join(&e, &pt("5", "1")).unwrap();
        let l2 = join(&e, &pt("0", "5")).unwrap();
        let l3 = join(&e, &pt("5", "6")).unwrap();
        LemmaOneInstance::new(
            pt("0", "0"),
            pt("6", "0"),
            pt("1", "5"),
            pt("7", "4"),
            e,
            l1,
            l2,
            l3,
        )
        .unwrap()
    }

    #[test]
    fn lemma1_validation() {
        let e = pt("2", "2");
        let l_ok = join(&e, &pt("5", "1")).unwrap();
        let l_misses_e = join(&pt("0", "1"), &pt("5", "1")).unwrap();
        let bad = LemmaOneInstance::new(
            pt("0", "0"),
            pt("6", "0"),
            pt("1", "5"),
            pt("7", "4"),
            e.clone(),
            l_misses_e,
            l_ok.clone(),
            l_ok.clone(),
        );
        assert_eq!(bad.unwrap_err(), ConfigError::LemmaLineMissesE("l1"));

        // A line through A = (0,0): y = x passes through E and A.
        let l_through_a = join(&e, &pt("0", "0")).unwrap();
        let bad = LemmaOneInstance::new(
            pt("0", "0"),
            pt("6", "0"),
            pt("1", "5"),
            pt("7", "4"),
            e,
            l_through_a,
            l_ok.clone(),
            l_ok,
        );
        assert_eq!(
            bad.unwrap_err(),
            ConfigError::LemmaLineThroughPoint("l1", "A")
        );
    }

    #[test]
    fn lemma1_point_at_e_is_e() {
        let inst = lemma1_fixture();
        let x = inst.induced_point(&inst.e.clone()).unwrap();
        assert!(x.proj_eq(&inst.e));
    }

    #[test]
    fn lemma1_samples_are_distinct_points_of_l3() {
        let inst = lemma1_fixture();
        let samples = inst.sample_positions(8);
        assert_eq!(samples.len(), 8);
        for (i, s) in samples.iter().enumerate() {
            assert!(inst.l3.incident(s));
            assert!(!s.proj_eq(&inst.e));
            for t in &samples[i + 1..] {
                assert!(!s.proj_eq(t));
            }
        }
    }

    #[test]
    fn trace_on_symmetric_scene_degenerates() {
        let cfg = k1();
        let f = necktie_points(&cfg).unwrap();
        let tp = t_points(&cfg, &f).unwrap();
        let gp = g_points(&cfg, &f).unwrap();
        let err = theorem_1_5_trace(&cfg, &f, &tp, &gp).unwrap_err();
        assert_eq!(
            err,
            TraceError::DegenerateTrace("(B, G_A, A_P, T_A)")
        );
    }

    #[test]
    fn trace_on_asymmetric_scene() {
        let cfg = Configuration::new(
            pt("0", "0"),
            pt("6", "0"),
            pt("1", "5"),
            pt("2", "1"),
            (ri(1), ri(2)),
            (ri(2), ri(1)),
            (ri(1), ri(3)),
        )
        .unwrap();
        let f = necktie_points(&cfg).unwrap();
        let tp = t_points(&cfg, &f).unwrap();
        let gp = g_points(&cfg, &f).unwrap();
        let trace = theorem_1_5_trace(&cfg, &f, &tp, &gp).unwrap();
        // The foot of PJ_A on BC is exactly T_A.
        assert!(trace.foot.proj_eq(&tp.t_a));
        // The two cross-ratios agree exactly.
        assert!(trace.ratio_equality_det().is_zero());
        // And neither ratio is trivially 0/0.
        assert!(!trace.ratio_left.0.is_zero() || !trace.ratio_left.1.is_zero());
    }

    // -- property tests ----------------------------------------------------

    fn arb_cfg() -> impl Strategy<Value = Configuration<Rational>> {
        let coord = -8i64..9;
        let par = -4i64..5;
        (
            (coord.clone(), coord.clone()),
            (coord.clone(), coord.clone()),
            (coord.clone(), coord.clone()),
            (coord.clone(), coord.clone()),
            ((par.clone(), par.clone()), (par.clone(), par.clone()), (par.clone(), par.clone())),
        )
            .prop_filter_map("valid configuration", |(a, b, c, p, (t1, t2, t3))| {
                Configuration::new(
                    pt(&a.0.to_string(), &a.1.to_string()),
                    pt(&b.0.to_string(), &b.1.to_string()),
                    pt(&c.0.to_string(), &c.1.to_string()),
                    pt(&p.0.to_string(), &p.1.to_string()),
                    (ri(t1.0), ri(t1.1)),
                    (ri(t2.0), ri(t2.1)),
                    (ri(t3.0), ri(t3.1)),
                )
                .ok()
            })
    }

    fn arb_map() -> impl Strategy<Value = ProjectiveMap<Rational>> {
        let e = -5i64..6;
        (
            (e.clone(), e.clone(), e.clone()),
            (e.clone(), e.clone(), e.clone()),
            (e.clone(), e.clone(), e.clone()),
        )
            .prop_filter_map("invertible", |(r0, r1, r2)| {
                let row = |(a, b, c): (i64, i64, i64)| [ri(a), ri(b), ri(c)];
                ProjectiveMap::new([row(r0), row(r1), row(r2)]).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn defining_incidences_hold(cfg in arb_cfg()) {
            if let Ok(f) = necktie_points(&cfg) {
                let a1bp = join(&f.a1, &f.b_p).unwrap();
                let b1ap = join(&f.b1, &f.a_p).unwrap();
                prop_assert!(a1bp.incident(&f.w_c));
                prop_assert!(b1ap.incident(&f.w_c));
                let bc = join(cfg.b(), cfg.c()).unwrap();
                let ap_line = join(cfg.a(), cfg.p()).unwrap();
                prop_assert!(bc.incident(&f.a_p));
                prop_assert!(ap_line.incident(&f.a_p));
                prop_assert!(ap_line.incident(&f.a1));
                // Pappus certificates hold on every constructible frame.
                prop_assert!(collinear(cfg.c(), &f.w_c, &f.j_c));
                prop_assert!(collinear(cfg.a(), &f.w_a, &f.j_a));
                prop_assert!(collinear(cfg.b(), &f.w_b, &f.j_b));
            }
        }

        #[test]
        fn construction_commutes_with_maps(cfg in arb_cfg(), m in arb_map()) {
            let mapped = transform_configuration(&m, &cfg);
            match (necktie_points(&cfg), necktie_points(&mapped)) {
                (Ok(f), Ok(g)) => {
                    prop_assert!(m.apply(&f.a_p).proj_eq(&g.a_p));
                    prop_assert!(m.apply(&f.w_a).proj_eq(&g.w_a));
                    prop_assert!(m.apply(&f.w_b).proj_eq(&g.w_b));
                    prop_assert!(m.apply(&f.w_c).proj_eq(&g.w_c));
                    prop_assert!(m.apply(&f.w).proj_eq(&g.w));
                    prop_assert!(m.apply(&f.j_a).proj_eq(&g.j_a));
                }
                // Degeneracy is projectively invariant, so both sides
                // must agree about it.
                (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
                (a, b) => prop_assert!(false, "mismatch: {:?} vs {:?}", a.is_ok(), b.is_ok()),
            }
        }

        #[test]
        fn q_at_p_reproduces_frame(cfg in arb_cfg()) {
            let with_q = cfg.clone().with_q(cfg.p().clone());
            if let (Ok(cfg_q), Ok(f)) = (with_q, necktie_points(&cfg)) {
                if let Ok(qp) = q_points(&cfg_q, &f) {
                    prop_assert!(qp.a_q.proj_eq(&f.a_p));
                    prop_assert!(qp.b_q.proj_eq(&f.b_p));
                    prop_assert!(qp.c_q.proj_eq(&f.c_p));
                    prop_assert!(qp.v_a.proj_eq(&f.w_a));
                    prop_assert!(qp.v_b.proj_eq(&f.w_b));
                    prop_assert!(qp.v_c.proj_eq(&f.w_c));
                }
            }
        }
    }
}
