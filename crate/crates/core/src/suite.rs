//! The claim suite: each verified statement as an exact determinant
//! identity, with built-in negative controls and a deterministic fuzzer.
//!
//! Every claim evaluates to a [`Verdict`]: `Holds` iff all of its
//! determinants are exactly zero, `Violated` if any is nonzero, and
//! `Degenerate` (naming the failing step) when the instance cannot
//! support the construction. Verdicts carry the determinant values and
//! the constructed witness points, so reports are self-contained.
//!
//! Negative controls guard against a kernel that is accidentally
//! trivial (a determinant routine that always returns zero would pass
//! every positive check): [`negative_control`] re-runs a claim with one
//! designated constructed point nudged by `(1, 0, 0)` before the final
//! determinants, which must flip the verdict to `Violated` on all but
//! the rare instances where the nudge itself degenerates.
//!
//! The fuzzer draws integer scenes (field-independent text, replayed
//! through the same [`SceneFile`] path the CLI uses), resamples
//! degenerate draws without counting them as trials, and — in prime
//! field mode — automatically rechecks any `Violated` witness over the
//! rationals to separate modular coincidences from real failures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::conic::{coconic_det, conic_through, dual_coconic_det};
use crate::construct::{
    g_points, lemma2_points, necktie_points, primed_points, q_points, t_points,
    theorem_1_5_trace, transform_configuration, Configuration, LemmaOneInstance, TraceError,
};
use crate::projective::{cross, det_lines, det_points, join, meet, Line, Point, ProjectiveMap};
use crate::scalar::{Rational, Scalar};
use crate::scene::{LemmaOneScene, LineSpec, PointSpec, SceneError, SceneFile};

/// Number of moving-point samples used for the pencil-conic lemma when a
/// scene does not specify its own count.
pub const DEFAULT_LEMMA1_SAMPLES: u32 = 8;

/// Maximum raw draws per generated instance before the generator gives
/// up (the rejection probability per draw is small at sane bounds).
const GENERATION_RETRY_BUDGET: u32 = 1024;

/// Maximum degenerate instances a single claim may skip within one trial
/// before that trial is abandoned for the claim.
const RESAMPLE_WALK_CAP: u32 = 64;

// ---------------------------------------------------------------------------
// Claims and verdicts.
// ---------------------------------------------------------------------------

/// The verified claims. Variants are declared in the lexicographic
/// order of their textual ids, so the derived `Ord` matches report
/// ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// `1.1` — lines `AW_A`, `BW_B`, `CW_C` are concurrent (at `W`).
    NecktieConcurrency,
    /// `1.2` — `A`, `B`, `C`, `W`, `A1`, `N` lie on one conic.
    PrimedCoconic,
    /// `1.3` — lines `AT_A`, `BT_B`, `CT_C` are concurrent.
    TConcurrency,
    /// `1.4` — lines `AG_A`, `BG_B`, `CG_C` are concurrent, as are
    /// `W_AA_P`, `W_BB_P`, `W_CC_P` (at `R`).
    GConcurrency,
    /// `1.4-corollary` — `G`, `R`, `P` are collinear.
    GrpCollinear,
    /// `1.5` — `A`, `B`, `C`, `P`, `G`, `T` lie on one conic.
    GtConic,
    /// `1.5-trace` — the proof trace: `PJ_A` meets `BC` at `T_A` and the
    /// two cross-ratios agree.
    TraceEquality,
    /// `1.6` — lines `AV_A`, `BV_B`, `CV_C` are concurrent.
    VConcurrency,
    /// `1.6-brianchon` — the proof's certificate: `A1V_A`, `B1V_B`,
    /// `C1V_C` concurrent and the hexagon `A1 B_Q C1 A_Q B1 C_Q`
    /// circumscribes a conic.
    VBrianchon,
    /// `brianchon-cert` — hexagons `A C1 B A1 C B1` and
    /// `A_P B1 C_P A1 B_P C1` circumscribe conics.
    BrianchonCert,
    /// `lemma1` — all induced points of the moving-point pencil lemma
    /// lie on the conic through `A`, `B`, `E` fitted from two samples.
    PencilConic,
    /// `lemma2` — lines `A_BB_A`, `B_CC_B`, `A_CC_A` are concurrent.
    TwoPivotConcurrency,
    /// `pappus-cert` — `A W_A J_A`, `B W_B J_B`, `C W_C J_C` collinear.
    PappusCert,
}

impl Claim {
    /// All claims in id order.
    pub const ALL: [Claim; 13] = [
        Claim::NecktieConcurrency,
        Claim::PrimedCoconic,
        Claim::TConcurrency,
        Claim::GConcurrency,
        Claim::GrpCollinear,
        Claim::GtConic,
        Claim::TraceEquality,
        Claim::VConcurrency,
        Claim::VBrianchon,
        Claim::BrianchonCert,
        Claim::PencilConic,
        Claim::TwoPivotConcurrency,
        Claim::PappusCert,
    ];

    /// The textual id used by the CLI and in reports.
    pub fn id(&self) -> &'static str {
        match self {
            Claim::NecktieConcurrency => "1.1",
            Claim::PrimedCoconic => "1.2",
            Claim::TConcurrency => "1.3",
            Claim::GConcurrency => "1.4",
            Claim::GrpCollinear => "1.4-corollary",
            Claim::GtConic => "1.5",
            Claim::TraceEquality => "1.5-trace",
            Claim::VConcurrency => "1.6",
            Claim::VBrianchon => "1.6-brianchon",
            Claim::BrianchonCert => "brianchon-cert",
            Claim::PencilConic => "lemma1",
            Claim::TwoPivotConcurrency => "lemma2",
            Claim::PappusCert => "pappus-cert",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Error for an unrecognized claim id.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown claim id {0:?} (expected one of: 1.1, 1.2, 1.3, 1.4, 1.4-corollary, 1.5, 1.5-trace, 1.6, 1.6-brianchon, brianchon-cert, lemma1, lemma2, pappus-cert)")]
pub struct UnknownClaim(pub String);

impl FromStr for Claim {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .iter()
            .find(|c| c.id() == s)
            .copied()
            .ok_or_else(|| UnknownClaim(s.to_string()))
    }
}

/// Outcome classification of one claim on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Holds,
    Violated,
    Degenerate,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The result of evaluating one claim on one instance: the status, every
/// final determinant by name, the constructed witness points, and any
/// informational flags. `Holds` means *all* determinants are exactly
/// zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<S: Scalar> {
    pub claim: Claim,
    pub status: Status,
    pub determinants: BTreeMap<String, S>,
    pub points: BTreeMap<String, Point<S>>,
    pub flags: BTreeMap<String, bool>,
    /// The failing construction step, present iff `status` is
    /// `Degenerate`.
    pub degenerate_step: Option<String>,
}

impl<S: Scalar> Verdict<S> {
    fn settled(
        claim: Claim,
        determinants: BTreeMap<String, S>,
        points: BTreeMap<String, Point<S>>,
        flags: BTreeMap<String, bool>,
    ) -> Self {
        let status = if determinants.values().all(S::is_zero) {
            Status::Holds
        } else {
            Status::Violated
        };
        Verdict {
            claim,
            status,
            determinants,
            points,
            flags,
            degenerate_step: None,
        }
    }

    fn degenerate(claim: Claim, step: impl Into<String>) -> Self {
        Verdict {
            claim,
            status: Status::Degenerate,
            determinants: BTreeMap::new(),
            points: BTreeMap::new(),
            flags: BTreeMap::new(),
            degenerate_step: Some(step.into()),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite input.
// ---------------------------------------------------------------------------

/// A pencil-lemma instance together with its explicit sample positions
/// on `l3`. Positions are materialized (rather than re-derived from a
/// count) so that transforming the input maps them along, keeping every
/// claim status projectively invariant.
#[derive(Debug, Clone)]
pub struct Lemma1Input<S: Scalar> {
    pub instance: LemmaOneInstance<S>,
    pub positions: Vec<Point<S>>,
}

/// Everything a full suite run needs: the configuration plus the
/// optional lemma instances.
#[derive(Debug, Clone)]
pub struct SuiteInput<S: Scalar> {
    pub cfg: Configuration<S>,
    pub lemma1: Option<Lemma1Input<S>>,
    pub lemma2: Option<[Point<S>; 5]>,
}

impl<S: Scalar> SuiteInput<S> {
    /// Instantiate a parsed scene over a concrete field. This is the
    /// single entry point for both the CLI and the fuzzer, so generated
    /// and hand-written scenes are validated identically. When the scene
    /// has no explicit lemma-2 block but does have `Q`, the five points
    /// `A, B, C, P, Q` serve as the lemma-2 instance.
    pub fn from_scene(scene: &SceneFile) -> Result<Self, SceneError> {
        let cfg = scene.configuration::<S>()?;
        let lemma1 = scene.lemma_one::<S>()?.map(|(instance, samples)| {
            let positions = instance.sample_positions(samples);
            Lemma1Input {
                instance,
                positions,
            }
        });
        let lemma2 = match scene.lemma_two::<S>()? {
            Some(five) => Some(five),
            None => cfg.q().map(|q| {
                [
                    cfg.a().clone(),
                    cfg.b().clone(),
                    cfg.c().clone(),
                    cfg.p().clone(),
                    q.clone(),
                ]
            }),
        };
        Ok(SuiteInput {
            cfg,
            lemma1,
            lemma2,
        })
    }
}

/// Apply a projective map to every part of a suite input. Claim
/// statuses are invariant under this operation.
pub fn transform_input<S: Scalar>(m: &ProjectiveMap<S>, input: &SuiteInput<S>) -> SuiteInput<S> {
    SuiteInput {
        cfg: transform_configuration(m, &input.cfg),
        lemma1: input.lemma1.as_ref().map(|l| Lemma1Input {
            instance: LemmaOneInstance {
                a: m.apply(&l.instance.a),
                b: m.apply(&l.instance.b),
                c: m.apply(&l.instance.c),
                d: m.apply(&l.instance.d),
                e: m.apply(&l.instance.e),
                l1: m.apply_line(&l.instance.l1),
                l2: m.apply_line(&l.instance.l2),
                l3: m.apply_line(&l.instance.l3),
            },
            positions: l.positions.iter().map(|p| m.apply(p)).collect(),
        }),
        lemma2: input
            .lemma2
            .as_ref()
            .map(|five| std::array::from_fn(|i| m.apply(&five[i]))),
    }
}

// ---------------------------------------------------------------------------
// Claim evaluators.
// ---------------------------------------------------------------------------

/// Evaluate one claim on an instance.
pub fn verify_claim<S: Scalar>(claim: Claim, input: &SuiteInput<S>) -> Verdict<S> {
    eval(claim, input, None)
}

/// Evaluate one claim with its negative control active: the designated
/// constructed point is nudged by a standard basis vector before the
/// final determinants. A single direction can coincidentally stay inside
/// the claim's zero set (for a collinearity, nudging parallel to the
/// line), so each basis direction is tried in turn: the first `Violated`
/// wins; failing that, the first `Degenerate`; if every direction
/// preserves the claim, the instance cannot be displaced by the control
/// and the result is `Degenerate` — a control never reports `Holds`.
pub fn negative_control<S: Scalar>(claim: Claim, input: &SuiteInput<S>) -> Verdict<S> {
    let mut fallback = None;
    for axis in 0..3 {
        let v = eval(claim, input, Some(axis));
        match v.status {
            Status::Violated => return v,
            Status::Degenerate => fallback = fallback.or(Some(v)),
            Status::Holds => {}
        }
    }
    fallback.unwrap_or_else(|| {
        Verdict::degenerate(claim, "every negative-control nudge preserves the claim")
    })
}

/// Evaluate every claim.
pub fn verify_all<S: Scalar>(input: &SuiteInput<S>) -> BTreeMap<Claim, Verdict<S>> {
    Claim::ALL
        .iter()
        .map(|&c| (c, verify_claim(c, input)))
        .collect()
}

fn eval<S: Scalar>(claim: Claim, input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    match claim {
        Claim::NecktieConcurrency => eval_1_1(input, control),
        Claim::PrimedCoconic => eval_1_2(input, control),
        Claim::TConcurrency => eval_1_3(input, control),
        Claim::GConcurrency => eval_1_4(input, control),
        Claim::GrpCollinear => eval_1_4_corollary(input, control),
        Claim::GtConic => eval_1_5(input, control),
        Claim::TraceEquality => eval_1_5_trace(input, control),
        Claim::VConcurrency => eval_1_6(input, control),
        Claim::VBrianchon => eval_1_6_brianchon(input, control),
        Claim::BrianchonCert => eval_brianchon_cert(input, control),
        Claim::PencilConic => eval_lemma1(input, control),
        Claim::TwoPivotConcurrency => eval_lemma2(input, control),
        Claim::PappusCert => eval_pappus_cert(input, control),
    }
}

/// `p` plus the standard basis vector for `axis`; `None` when the sum is
/// the zero triple.
fn nudge<S: Scalar>(p: &Point<S>, axis: usize) -> Option<Point<S>> {
    let mut c = p.coords().clone();
    c[axis] = c[axis].clone() + S::one();
    Point::new(c).ok()
}

/// Apply the negative-control nudge if requested.
fn maybe_nudge<S: Scalar>(
    claim: Claim,
    control: Option<usize>,
    p: &Point<S>,
) -> Result<Point<S>, Verdict<S>> {
    let Some(axis) = control else {
        return Ok(p.clone());
    };
    nudge(p, axis).ok_or_else(|| {
        Verdict::degenerate(claim, "negative-control nudge yields the zero triple")
    })
}

/// Join two points inside an evaluator, degenerating the verdict on
/// coincidence.
fn vjoin<S: Scalar>(
    claim: Claim,
    label: &str,
    p: &Point<S>,
    q: &Point<S>,
) -> Result<Line<S>, Verdict<S>> {
    join(p, q).map_err(|_| Verdict::degenerate(claim, format!("join {label}")))
}

/// Meet two lines inside an evaluator, degenerating the verdict on
/// coincidence.
fn vmeet<S: Scalar>(
    claim: Claim,
    label: &str,
    l: &Line<S>,
    m: &Line<S>,
) -> Result<Point<S>, Verdict<S>> {
    meet(l, m).map_err(|_| Verdict::degenerate(claim, format!("meet {label}")))
}

fn pts<S: Scalar, const N: usize>(entries: [(&str, &Point<S>); N]) -> BTreeMap<String, Point<S>> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn dets<S: Scalar, const N: usize>(entries: [(&str, S); N]) -> BTreeMap<String, S> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn eval_1_1<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::NecktieConcurrency;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let w_c = maybe_nudge(claim, control, &f.w_c)?;
        let determinants = dets([
            ("collinear(C, W_C, W)", det_points(cfg.c(), &w_c, &f.w)),
            ("collinear(A, W_A, J_A)", det_points(cfg.a(), &f.w_a, &f.j_a)),
            ("collinear(B, W_B, J_B)", det_points(cfg.b(), &f.w_b, &f.j_b)),
            ("collinear(C, W_C, J_C)", det_points(cfg.c(), &w_c, &f.j_c)),
        ]);
        let points = pts([
            ("A_P", &f.a_p),
            ("B_P", &f.b_p),
            ("C_P", &f.c_p),
            ("A1", &f.a1),
            ("B1", &f.b1),
            ("C1", &f.c1),
            ("W_A", &f.w_a),
            ("W_B", &f.w_b),
            ("W_C", &w_c),
            ("W", &f.w),
            ("J_A", &f.j_a),
            ("J_B", &f.j_b),
            ("J_C", &f.j_c),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_2<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::PrimedCoconic;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let pr = primed_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let n = maybe_nudge(claim, control, &pr.n)?;
        // The claim is about THE conic through the five base points; if
        // they do not determine one (rank deficiency, e.g. a repeated
        // point), the 6×6 test would accept any sixth point vacuously.
        let five = [
            cfg.a().clone(),
            cfg.b().clone(),
            cfg.c().clone(),
            f.w.clone(),
            f.a1.clone(),
        ];
        conic_through(&five).map_err(|_| {
            Verdict::degenerate(claim, "conic through A, B, C, W, A1 is not unique")
        })?;
        let six = [
            cfg.a().clone(),
            cfg.b().clone(),
            cfg.c().clone(),
            f.w.clone(),
            f.a1.clone(),
            n.clone(),
        ];
        let determinants = dets([("six_on_conic(A, B, C, W, A1, N)", coconic_det(&six))]);
        let points = pts([
            ("A'_P", &pr.a_prime_p),
            ("W'_B", &pr.w_prime_b),
            ("W'_C", &pr.w_prime_c),
            ("N", &n),
            ("W", &f.w),
            ("A1", &f.a1),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_3<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::TConcurrency;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let tp = t_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let t_a = maybe_nudge(claim, control, &tp.t_a)?;
        let l_a = vjoin(claim, "AT_A", cfg.a(), &t_a)?;
        let l_b = vjoin(claim, "BT_B", cfg.b(), &tp.t_b)?;
        let l_c = vjoin(claim, "CT_C", cfg.c(), &tp.t_c)?;
        let t = vmeet(claim, "of AT_A and BT_B", &l_a, &l_b)?;
        let determinants = dets([(
            "concurrent(AT_A, BT_B, CT_C)",
            det_lines(&l_a, &l_b, &l_c),
        )]);
        let points = pts([
            ("T_A", &t_a),
            ("T_B", &tp.t_b),
            ("T_C", &tp.t_c),
            ("T", &t),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_4<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::GConcurrency;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let gp = g_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let g_b = maybe_nudge(claim, control, &gp.g_b)?;
        let l_a = vjoin(claim, "AG_A", cfg.a(), &gp.g_a)?;
        let l_b = vjoin(claim, "BG_B", cfg.b(), &g_b)?;
        let l_c = vjoin(claim, "CG_C", cfg.c(), &gp.g_c)?;
        let m_a = vjoin(claim, "W_AA_P", &f.w_a, &f.a_p)?;
        let m_b = vjoin(claim, "W_BB_P", &f.w_b, &f.b_p)?;
        let m_c = vjoin(claim, "W_CC_P", &f.w_c, &f.c_p)?;
        let determinants = dets([
            ("concurrent(AG_A, BG_B, CG_C)", det_lines(&l_a, &l_b, &l_c)),
            (
                "concurrent(W_AA_P, W_BB_P, W_CC_P)",
                det_lines(&m_a, &m_b, &m_c),
            ),
        ]);
        let points = pts([
            ("G_A", &gp.g_a),
            ("G_B", &g_b),
            ("G_C", &gp.g_c),
            ("G", &gp.g),
            ("R", &gp.r),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_4_corollary<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::GrpCollinear;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let gp = g_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let r = maybe_nudge(claim, control, &gp.r)?;
        let determinants = dets([("collinear(G, R, P)", det_points(&gp.g, &r, cfg.p()))]);
        let points = pts([("G", &gp.g), ("R", &r), ("P", cfg.p())]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_5<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::GtConic;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let tp = t_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let gp = g_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let t = maybe_nudge(claim, control, &tp.t)?;
        // As in 1.2: the conic is the one through the five base points,
        // so they must actually determine one.
        let five = [
            cfg.a().clone(),
            cfg.b().clone(),
            cfg.c().clone(),
            cfg.p().clone(),
            gp.g.clone(),
        ];
        conic_through(&five).map_err(|_| {
            Verdict::degenerate(claim, "conic through A, B, C, P, G is not unique")
        })?;
        let six = [
            cfg.a().clone(),
            cfg.b().clone(),
            cfg.c().clone(),
            cfg.p().clone(),
            gp.g.clone(),
            t.clone(),
        ];
        let mut determinants = dets([("six_on_conic(A, B, C, P, G, T)", coconic_det(&six))]);
        let mut points = pts([("G", &gp.g), ("T", &t)]);
        let mut flags = BTreeMap::new();
        // The proof trace rides along as an informational sub-check; a
        // degenerate trace (possible on symmetric scenes) never blocks
        // the conic claim itself.
        match theorem_1_5_trace(cfg, &f, &tp, &gp) {
            Ok(trace) => {
                flags.insert("trace_degenerate".to_string(), false);
                determinants.insert(
                    "trace: cross_ratio_equality".to_string(),
                    trace.ratio_equality_det(),
                );
                let foot_vs = cross(trace.foot.coords(), tp.t_a.coords());
                for (i, d) in foot_vs.into_iter().enumerate() {
                    determinants.insert(format!("trace: foot_vs_T_A[{i}]"), d);
                }
                points.insert("foot".to_string(), trace.foot);
            }
            Err(_) => {
                flags.insert("trace_degenerate".to_string(), true);
            }
        }
        Ok(Verdict::settled(claim, determinants, points, flags))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_1_5_trace<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::TraceEquality;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let mut f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let tp = t_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let gp = g_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
        // The control target is J_A, which feeds only the foot.
        f.j_a = maybe_nudge(claim, control, &f.j_a)?;
        let trace = theorem_1_5_trace(cfg, &f, &tp, &gp).map_err(|e| match e {
            TraceError::Construction(d) => Verdict::degenerate(claim, d.step),
            TraceError::DegenerateTrace(q) => {
                Verdict::degenerate(claim, format!("cross-ratio quadruple {q} collapses"))
            }
        })?;
        let mut determinants = dets([("cross_ratio_equality", trace.ratio_equality_det())]);
        let foot_vs = cross(trace.foot.coords(), tp.t_a.coords());
        for (i, d) in foot_vs.into_iter().enumerate() {
            determinants.insert(format!("foot_vs_T_A[{i}]"), d);
        }
        let points = pts([
            ("foot", &trace.foot),
            ("T_A", &tp.t_a),
            ("C_U", &trace.c_u),
            ("A_U", &trace.a_u),
            ("C_B*", &trace.c_b_star),
            ("A_B*", &trace.a_b_star),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

/// Shared construction of the `V`-family determinants for the two `Q`
/// claims. Returns (determinants, points).
#[allow(clippy::type_complexity)]
fn v_family<S: Scalar>(
    claim: Claim,
    input: &SuiteInput<S>,
    control: Option<usize>,
    include_main: bool,
) -> Result<(BTreeMap<String, S>, BTreeMap<String, Point<S>>), Verdict<S>> {
    let cfg = &input.cfg;
    let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
    let qp = q_points(cfg, &f).map_err(|e| Verdict::degenerate(claim, e.step))?;
    let v_a = maybe_nudge(claim, control, &qp.v_a)?;
    let mut determinants = BTreeMap::new();
    let mut points = pts([
        ("A_Q", &qp.a_q),
        ("B_Q", &qp.b_q),
        ("C_Q", &qp.c_q),
        ("V_A", &v_a),
        ("V_B", &qp.v_b),
        ("V_C", &qp.v_c),
    ]);
    if include_main {
        let l_a = vjoin(claim, "AV_A", cfg.a(), &v_a)?;
        let l_b = vjoin(claim, "BV_B", cfg.b(), &qp.v_b)?;
        let l_c = vjoin(claim, "CV_C", cfg.c(), &qp.v_c)?;
        determinants.insert(
            "concurrent(AV_A, BV_B, CV_C)".to_string(),
            det_lines(&l_a, &l_b, &l_c),
        );
        let v = vmeet(claim, "of AV_A and BV_B", &l_a, &l_b)?;
        points.insert("V".to_string(), v);
    }
    let m_a = vjoin(claim, "A1V_A", &f.a1, &v_a)?;
    let m_b = vjoin(claim, "B1V_B", &f.b1, &qp.v_b)?;
    let m_c = vjoin(claim, "C1V_C", &f.c1, &qp.v_c)?;
    determinants.insert(
        "concurrent(A1V_A, B1V_B, C1V_C)".to_string(),
        det_lines(&m_a, &m_b, &m_c),
    );
    let hexagon = [
        (&f.a1, &qp.b_q, "A1B_Q"),
        (&qp.b_q, &f.c1, "B_QC1"),
        (&f.c1, &qp.a_q, "C1A_Q"),
        (&qp.a_q, &f.b1, "A_QB1"),
        (&f.b1, &qp.c_q, "B1C_Q"),
        (&qp.c_q, &f.a1, "C_QA1"),
    ];
    let mut sides = Vec::with_capacity(6);
    for (u, v, label) in hexagon {
        sides.push(vjoin(claim, label, u, v)?);
    }
    let sides: [Line<S>; 6] = sides.try_into().expect("six sides");
    determinants.insert(
        "dual_six(A1, B_Q, C1, A_Q, B1, C_Q)".to_string(),
        dual_coconic_det(&sides),
    );
    Ok((determinants, points))
}

fn eval_1_6<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::VConcurrency;
    match v_family(claim, input, control, true) {
        Ok((determinants, points)) => {
            Verdict::settled(claim, determinants, points, BTreeMap::new())
        }
        Err(v) => v,
    }
}

fn eval_1_6_brianchon<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::VBrianchon;
    match v_family(claim, input, control, false) {
        Ok((determinants, points)) => {
            Verdict::settled(claim, determinants, points, BTreeMap::new())
        }
        Err(v) => v,
    }
}

fn eval_brianchon_cert<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::BrianchonCert;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let a_p = maybe_nudge(claim, control, &f.a_p)?;
        let hex1 = [
            (cfg.a(), &f.c1, "AC1"),
            (&f.c1, cfg.b(), "C1B"),
            (cfg.b(), &f.a1, "BA1"),
            (&f.a1, cfg.c(), "A1C"),
            (cfg.c(), &f.b1, "CB1"),
            (&f.b1, cfg.a(), "B1A"),
        ];
        let hex2 = [
            (&a_p, &f.b1, "A_PB1"),
            (&f.b1, &f.c_p, "B1C_P"),
            (&f.c_p, &f.a1, "C_PA1"),
            (&f.a1, &f.b_p, "A1B_P"),
            (&f.b_p, &f.c1, "B_PC1"),
            (&f.c1, &a_p, "C1A_P"),
        ];
        let mut sides1 = Vec::with_capacity(6);
        for (u, v, label) in hex1 {
            sides1.push(vjoin(claim, label, u, v)?);
        }
        let mut sides2 = Vec::with_capacity(6);
        for (u, v, label) in hex2 {
            sides2.push(vjoin(claim, label, u, v)?);
        }
        let sides1: [Line<S>; 6] = sides1.try_into().expect("six sides");
        let sides2: [Line<S>; 6] = sides2.try_into().expect("six sides");
        let determinants = dets([
            ("dual_six(A, C1, B, A1, C, B1)", dual_coconic_det(&sides1)),
            (
                "dual_six(A_P, B1, C_P, A1, B_P, C1)",
                dual_coconic_det(&sides2),
            ),
        ]);
        let points = pts([
            ("A_P", &a_p),
            ("B_P", &f.b_p),
            ("C_P", &f.c_p),
            ("A1", &f.a1),
            ("B1", &f.b1),
            ("C1", &f.c1),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_lemma1<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::PencilConic;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let Some(lemma) = &input.lemma1 else {
            return Err(Verdict::degenerate(claim, "missing lemma-1 instance"));
        };
        if lemma.positions.len() < 6 {
            return Err(Verdict::degenerate(claim, "fewer than 6 lemma-1 samples"));
        }
        let inst = &lemma.instance;
        let mut induced = Vec::with_capacity(lemma.positions.len());
        for (i, p) in lemma.positions.iter().enumerate() {
            let x = inst.induced_point(p).map_err(|e| {
                Verdict::degenerate(claim, format!("sample {}: {}", i + 1, e.step))
            })?;
            induced.push(x);
        }
        // Fit the conic through A, B, E and the first two induced
        // points; the remaining induced points are the claim.
        let base = [
            inst.a.clone(),
            inst.b.clone(),
            inst.e.clone(),
            induced[0].clone(),
            induced[1].clone(),
        ];
        let conic = conic_through(&base).map_err(|_| {
            Verdict::degenerate(claim, "conic through A, B, E, X1, X2 is not unique")
        })?;
        let last = induced.len() - 1;
        induced[last] = maybe_nudge(claim, control, &induced[last])?;
        let mut determinants = BTreeMap::new();
        let mut points = BTreeMap::new();
        for (i, x) in induced.iter().enumerate() {
            points.insert(format!("X{}", i + 1), x.clone());
            if i >= 2 {
                determinants.insert(format!("on_conic(X{})", i + 1), conic.evaluate(x));
            }
        }
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_lemma2<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::TwoPivotConcurrency;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let Some(five) = &input.lemma2 else {
            return Err(Verdict::degenerate(claim, "missing lemma-2 points"));
        };
        let l = lemma2_points(five).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let a_b = maybe_nudge(claim, control, &l.a_b)?;
        let l1 = vjoin(claim, "A_BB_A", &a_b, &l.b_a)?;
        let l2 = vjoin(claim, "B_CC_B", &l.b_c, &l.c_b)?;
        let l3 = vjoin(claim, "A_CC_A", &l.a_c, &l.c_a)?;
        let x = vmeet(claim, "of A_BB_A and B_CC_B", &l1, &l2)?;
        let determinants = dets([(
            "concurrent(A_BB_A, B_CC_B, A_CC_A)",
            det_lines(&l1, &l2, &l3),
        )]);
        let points = pts([
            ("A_B", &a_b),
            ("B_A", &l.b_a),
            ("B_C", &l.b_c),
            ("C_B", &l.c_b),
            ("A_C", &l.a_c),
            ("C_A", &l.c_a),
            ("X", &x),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

fn eval_pappus_cert<S: Scalar>(input: &SuiteInput<S>, control: Option<usize>) -> Verdict<S> {
    let claim = Claim::PappusCert;
    let cfg = &input.cfg;
    let run = || -> Result<Verdict<S>, Verdict<S>> {
        let f = necktie_points(cfg).map_err(|e| Verdict::degenerate(claim, e.step))?;
        let j_c = maybe_nudge(claim, control, &f.j_c)?;
        let determinants = dets([
            ("collinear(A, W_A, J_A)", det_points(cfg.a(), &f.w_a, &f.j_a)),
            ("collinear(B, W_B, J_B)", det_points(cfg.b(), &f.w_b, &f.j_b)),
            ("collinear(C, W_C, J_C)", det_points(cfg.c(), &f.w_c, &j_c)),
        ]);
        let points = pts([
            ("W_A", &f.w_a),
            ("W_B", &f.w_b),
            ("W_C", &f.w_c),
            ("J_A", &f.j_a),
            ("J_B", &f.j_b),
            ("J_C", &j_c),
        ]);
        Ok(Verdict::settled(claim, determinants, points, BTreeMap::new()))
    };
    run().unwrap_or_else(|v| v)
}

// ---------------------------------------------------------------------------
// Fuzzing.
// ---------------------------------------------------------------------------

/// Field choice for a fuzz run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime,
}

impl FieldChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldChoice::Rational => "rational",
            FieldChoice::Prime => "prime",
        }
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fuzz run's parameters. `claim: None` runs every claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzPlan {
    pub claim: Option<Claim>,
    pub trials: u32,
    pub seed: u64,
    pub bound: i64,
    pub field: FieldChoice,
}

/// Per-claim tallies of a fuzz run. `holds + violated` equals the trial
/// count unless a trial exhausted its degeneracy-resample budget for
/// this claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimTally<S: Scalar> {
    pub holds: u32,
    pub violated: u32,
    /// Number of degenerate instances skipped (resample events), not a
    /// trial count.
    pub degenerate: u32,
    pub witnesses: Vec<FuzzWitness<S>>,
}

impl<S: Scalar> Default for ClaimTally<S> {
    fn default() -> Self {
        ClaimTally {
            holds: 0,
            violated: 0,
            degenerate: 0,
            witnesses: Vec::new(),
        }
    }
}

/// A reproducible `Violated` finding: the trial index, the exact scene
/// (replayable through the CLI), the verdict, and — for prime-field
/// runs — the status of the same scene re-verified over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzWitness<S: Scalar> {
    pub trial: u32,
    pub scene: SceneFile,
    pub verdict: Verdict<S>,
    pub rational_recheck: Option<Status>,
}

/// The full result of a fuzz run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport<S: Scalar> {
    pub plan: FuzzPlan,
    /// Raw draws discarded by input validation across the whole run.
    pub generator_rejections: u64,
    pub claims: BTreeMap<Claim, ClaimTally<S>>,
    /// Per-trial settled status of each claim (`Degenerate` only when a
    /// trial exhausted its resample budget). Not serialized into
    /// reports; used by consistency checks across fields.
    pub per_trial: Vec<BTreeMap<Claim, Status>>,
}

/// Fuzzing failure: the generator could not produce a valid instance
/// within its retry budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("instance generation exhausted {budget} draws at trial {trial} (bound too small?)")]
pub struct GenerationExhausted {
    pub trial: u32,
    pub budget: u32,
}

/// Draw one integer scene. All coordinates are uniform in
/// `[-bound, bound]`; the scene always carries `Q`, an `A'_P` parameter
/// pair, and a lemma-1 block (three pencil lines through `E` anchored at
/// fresh points `F1, F2, F3`) with the default sample count. The
/// lemma-2 instance is derived from `A, B, C, P, Q`. Draw order is part
/// of the determinism contract; do not reorder.
fn draw_scene(rng: &mut ChaCha8Rng, bound: i64) -> SceneFile {
    let int = |rng: &mut ChaCha8Rng| rng.random_range(-bound..=bound).to_string();
    let point = |rng: &mut ChaCha8Rng| PointSpec::Affine(int(rng), int(rng));
    let pair = |rng: &mut ChaCha8Rng| (int(rng), int(rng));

    let mut points = BTreeMap::new();
    for name in ["A", "B", "C", "P"] {
        points.insert(name.to_string(), point(rng));
    }
    let q = Some(point(rng));

    let mut cevian_params = BTreeMap::new();
    for name in ["A1", "B1", "C1"] {
        cevian_params.insert(name.to_string(), pair(rng));
    }
    let a_prime = Some(pair(rng));

    let mut lemma1_points = BTreeMap::new();
    for name in ["A", "B", "C", "D", "E", "F1", "F2", "F3"] {
        lemma1_points.insert(name.to_string(), point(rng));
    }
    let lemma1 = Some(LemmaOneScene {
        points: lemma1_points,
        lines: [
            LineSpec::Through("E".into(), "F1".into()),
            LineSpec::Through("E".into(), "F2".into()),
            LineSpec::Through("E".into(), "F3".into()),
        ],
        samples: DEFAULT_LEMMA1_SAMPLES,
    });

    SceneFile {
        points,
        cevian_params,
        q,
        a_prime,
        lemma1,
        lemma2: None,
    }
}

/// The lazily grown instance sequence of one trial: instance 0 is the
/// trial's primary draw; claims that hit a degenerate verdict walk
/// forward along the same sequence.
struct TrialInstances<S: Scalar> {
    rng: ChaCha8Rng,
    bound: i64,
    trial: u32,
    drawn: Vec<(SceneFile, SuiteInput<S>)>,
    rejections: u64,
}

impl<S: Scalar> TrialInstances<S> {
    fn new(seed: u64, trial: u32, bound: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        TrialInstances {
            rng,
            bound,
            trial,
            drawn: Vec::new(),
            rejections: 0,
        }
    }

    fn get(&mut self, idx: usize) -> Result<&(SceneFile, SuiteInput<S>), GenerationExhausted> {
        while self.drawn.len() <= idx {
            let next = self.draw_valid()?;
            self.drawn.push(next);
        }
        Ok(&self.drawn[idx])
    }

    fn draw_valid(&mut self) -> Result<(SceneFile, SuiteInput<S>), GenerationExhausted> {
        for _ in 0..GENERATION_RETRY_BUDGET {
            let scene = draw_scene(&mut self.rng, self.bound);
            match SuiteInput::<S>::from_scene(&scene) {
                Ok(input) => return Ok((scene, input)),
                Err(_) => self.rejections += 1,
            }
        }
        Err(GenerationExhausted {
            trial: self.trial,
            budget: GENERATION_RETRY_BUDGET,
        })
    }
}

/// Draw a single valid fuzz instance (the primary instance of the given
/// trial under the given seed). Used by consistency checks that need the
/// same instances the fuzzer would see.
pub fn sample_input<S: Scalar>(
    seed: u64,
    trial: u32,
    bound: i64,
) -> Result<(SceneFile, SuiteInput<S>), GenerationExhausted> {
    let mut instances = TrialInstances::<S>::new(seed, trial, bound);
    instances.get(0)?;
    Ok(instances.drawn.into_iter().next().expect("drawn above"))
}

/// Run a fuzz plan over scalar field `S`. Deterministic in the plan:
/// identical plans yield identical reports.
pub fn fuzz<S: Scalar>(plan: &FuzzPlan) -> Result<FuzzReport<S>, GenerationExhausted> {
    let claims: Vec<Claim> = match plan.claim {
        Some(c) => vec![c],
        None => Claim::ALL.to_vec(),
    };
    let mut tallies: BTreeMap<Claim, ClaimTally<S>> = claims
        .iter()
        .map(|&c| (c, ClaimTally::default()))
        .collect();
    let mut per_trial = Vec::with_capacity(plan.trials as usize);
    let mut generator_rejections = 0u64;

    for trial in 0..plan.trials {
        let mut instances = TrialInstances::<S>::new(plan.seed, trial, plan.bound);
        let mut outcomes = BTreeMap::new();
        for &claim in &claims {
            let tally = tallies.get_mut(&claim).expect("initialized above");
            let mut settled = Status::Degenerate;
            for idx in 0..RESAMPLE_WALK_CAP {
                let (scene, input) = instances.get(idx as usize)?;
                let verdict = verify_claim(claim, input);
                match verdict.status {
                    Status::Degenerate => {
                        tally.degenerate += 1;
                        continue;
                    }
                    Status::Holds => {
                        tally.holds += 1;
                        settled = Status::Holds;
                    }
                    Status::Violated => {
                        tally.violated += 1;
                        settled = Status::Violated;
                        let rational_recheck = if S::MODEL == Rational::MODEL {
                            None
                        } else {
                            Some(recheck_over_rationals(claim, scene))
                        };
                        tally.witnesses.push(FuzzWitness {
                            trial,
                            scene: scene.clone(),
                            verdict,
                            rational_recheck,
                        });
                    }
                }
                break;
            }
            outcomes.insert(claim, settled);
        }
        generator_rejections += instances.rejections;
        per_trial.push(outcomes);
    }

    // Witness lists are already in trial order (trials run in order);
    // keep the contract explicit against future parallel evaluation.
    for tally in tallies.values_mut() {
        tally.witnesses.sort_by_key(|w| w.trial);
    }

    Ok(FuzzReport {
        plan: plan.clone(),
        generator_rejections,
        claims: tallies,
        per_trial,
    })
}

/// Re-verify a witness scene over the rationals (used to classify
/// prime-field violations: a modular coincidence holds rationally).
fn recheck_over_rationals(claim: Claim, scene: &SceneFile) -> Status {
    match SuiteInput::<Rational>::from_scene(scene) {
        Ok(input) => verify_claim(claim, &input).status,
        Err(_) => Status::Degenerate,
    }
}
