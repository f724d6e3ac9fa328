//! Exact projective geometry over the rationals (and a large prime
//! field), built to verify a family of concurrency, collinearity, and
//! coconicity statements about cevian configurations — the necktie
//! point `W` and its relatives `J`, `T`, `G`, `R`, `V`, `N` — as exact
//! determinant identities.
//!
//! Every verdict is exact: no floating point is involved anywhere in a
//! verification path. Points and lines are unnormalized homogeneous
//! triples over a [`scalar::Scalar`] field; joins and meets are cross
//! products; collinearity, concurrency, and coconicity are 3×3 and 6×6
//! determinants that are identically zero precisely when the claim
//! holds.
//!
//! Module map:
//!
//! - [`scalar`] — the exact field abstraction: arbitrary-precision
//!   rationals and the prime field modulo 2^61 − 1.
//! - [`projective`] — points, lines, join/meet, determinant predicates,
//!   cross-ratios, and projective maps.
//! - [`conic`] — conics and dual conics: 6×6 coconicity determinants,
//!   five-point fits, tangents.
//! - [`construct`] — the named configuration: cevian feet, the necktie
//!   frame `W_A, W_B, W_C, W`, the `J`/`T`/`G`/`R` points, the primed
//!   family and `N`, the `Q`-family `V` points, and the two lemma
//!   configurations.
//! - [`suite`] — each claim as a checkable statement with verdicts,
//!   negative controls, and a deterministic fuzzer.
//! - [`scene`] — the JSON scene format (exact scalars as strings).
//! - [`report`] — canonical, byte-deterministic JSON reports.
//! - [`svg`] — deterministic SVG figures; decimals appear only here,
//!   after all geometry is settled exactly.

pub mod conic;
pub mod construct;
pub mod projective;
pub mod report;
pub mod scalar;
pub mod scene;
pub mod suite;
pub mod svg;
