//! Exact group-ring computations for the Alon-Jaeger-Tarsi conjecture over
//! prime fields.
//!
//! For a nonsingular `M` over F_p with rows `a_1..a_n`, the product
//! `prod (1 - g^{e_i}) prod (1 - g^{a_i})` in `Z[F_p^n]` vanishes exactly
//! when `M` is a counterexample (no `x` with `x` and `Mx` both nowhere
//! zero). The crate evaluates that product over Z and over F_p, checks each
//! against an independent oracle, and scans all of `GL_n(F_p)` for small
//! `p` and `n`.
//!
//! - [`group`], [`ring`]: dense arithmetic in `Z[F_p^n]` and `F_p[F_p^n]`.
//! - [`binomial`], [`truncated`]: binomial products, the character test,
//!   the t-adic decomposition and the derivation.
//! - [`ajt`]: the per-matrix verdict.
//! - [`lemma`]: concrete checks of the reduction along one coordinate.
//! - [`scan`]: sharded, checkpointed enumeration of `GL_n(F_p)`.
//! - [`suites`], [`report`]: seeded self-test suites and JSON reports.
//!
//! ```
//! use ajt_lab::{ajt::verdict, report::parse_matrix};
//!
//! let m = parse_matrix(3, "1,1;1,2").unwrap();
//! let v = verdict(&m).unwrap();
//! assert!(v.fp_identity && v.z_identity && v.ajt_witness.is_none());
//! ```

pub mod ajt;
pub mod binomial;
pub mod error;
pub mod group;
pub mod lemma;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod ring;
pub mod scan;
pub mod suites;
pub mod truncated;
