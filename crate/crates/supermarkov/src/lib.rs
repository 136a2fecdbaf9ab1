//! # `supermarkov`
//!
//! Exact super Markov numbers and annulus super λ-lengths.
//!
//! A super Markov number is a Grassmann-valued refinement of a classical
//! Markov number: for each rational slope p/q it has the shape
//! `body + soul·σθ`, where the body is the classical Markov number
//! m\[p/q\] and the soul is a nonnegative integer coefficient on the
//! quadratic Grassmann word σθ. This crate computes these values — and
//! their one-holed-annulus cousins — by three independent algorithms and
//! compares the results coefficient by coefficient:
//!
//! 1. **matrix** — a holonomy product of 3×3 supermatrices over the
//!    Grassmann algebra, one factor per step of the Christoffel word of
//!    p/q ([`osp::sm_via_matrix`]);
//! 2. **dimer** — a signed enumeration of double-dimer covers of the
//!    snake graph of p/q, organized by the cycle they carry
//!    ([`snake::sm_via_dimers`]);
//! 3. **ptolemy** — a super Ptolemy (Vieta-style) recurrence walked down
//!    the Stern–Brocot tree ([`dynamics::sm_via_ptolemy`]).
//!
//! All arithmetic is exact: arbitrary-precision rationals for unit
//! computations and Laurent polynomials in half-integer powers of the
//! initial λ-lengths x, y, z for weighted ones. There are no floats
//! anywhere in the crate.
//!
//! ## Modules
//!
//! - [`scalars`] — exact coefficient rings: [`scalars::Rational`] and
//!   [`scalars::LaurentPoly`] behind the [`scalars::Scalar`] /
//!   [`scalars::WeightScalar`] traits.
//! - [`grassmann`] — finite Grassmann algebras over those rings:
//!   contexts, elements, parity, inversion, exact division.
//! - [`words`] — slopes, Christoffel words, snake words, mediant descent
//!   and flip paths on the Stern–Brocot tree.
//! - [`osp`] — 3×3 supermatrices, the holonomy factors, and the
//!   orthosymplectic constraint checker.
//! - [`snake`] — snake graphs for torus slopes and annuli, perfect
//!   matchings, signed single-cycle covers, and brute-force double-dimer
//!   enumeration oracles.
//! - [`dynamics`] — the super Markov triple dynamics (Vieta jumps), the
//!   annulus recurrence with its odd companions, the super Fibonacci
//!   sequence, and conserved-quantity checks.
//! - [`report`] — everything the command line prints: per-method
//!   reports with agreement flags, tables, invariant suites,
//!   deterministic exports, and the monotonicity scan.
//!
//! ## Examples
//!
//! The examples directory is the guided tour; each file is runnable and
//! prints exact values.
//!
//! ```text
//! examples/
//! ├── markov_numbers.rs          # Three methods, one exact answer
//! ├── holonomy_matrices.rs       # Supermatrix holonomies and their constraint
//! ├── snake_dimers.rs            # Snake graphs, matchings, signed cycle tallies
//! ├── double_dimer_covers.rs     # Brute-force cover enumeration vs the structured count
//! ├── annulus_sequence.rs        # The annulus sequence two independent ways
//! ├── conserved_quantities.rs    # Invariants of the annulus recurrence
//! ├── weighted_lambda_lengths.rs # Symbolic λ-lengths and specialization
//! └── christoffel_words.rs       # Slopes, words, and descent paths
//! ```
//!
//! ### Computing values
//!
//! - **`markov_numbers`** — compute a super Markov number by all three
//!   methods and check exact agreement
//! - **`weighted_lambda_lengths`** — the same values as Laurent
//!   polynomials in x, y, z, specialized back to the unit case
//!
//! ```bash
//! cargo run -p supermarkov --example markov_numbers
//! cargo run -p supermarkov --example weighted_lambda_lengths
//! ```
//!
//! ### The three machines
//!
//! - **`holonomy_matrices`** — the supermatrix factors, full holonomies
//!   for small slopes, and the six orthosymplectic residuals
//! - **`snake_dimers`** — tiles and μ-labels of a snake graph, matching
//!   counts, and the signed tally of single-cycle covers
//! - **`double_dimer_covers`** — every double-dimer cover of a small
//!   graph by brute force, grouped by its cycle interval
//!
//! ```bash
//! cargo run -p supermarkov --example holonomy_matrices
//! cargo run -p supermarkov --example snake_dimers
//! cargo run -p supermarkov --example double_dimer_covers
//! ```
//!
//! ### Dynamics
//!
//! - **`annulus_sequence`** — the q = 2 annulus super λ-lengths by the
//!   recurrence and by dimers, index by index
//! - **`conserved_quantities`** — the quantity the annulus recurrence
//!   conserves, plus the super Fibonacci bridge to torus values
//! - **`christoffel_words`** — the combinatorics under everything:
//!   Christoffel words, snake words, mediant descent, flip paths
//!
//! ```bash
//! cargo run -p supermarkov --example annulus_sequence
//! cargo run -p supermarkov --example conserved_quantities
//! cargo run -p supermarkov --example christoffel_words
//! ```
//!
//! ## Command line
//!
//! The thin `supermarkov` binary (crate `supermarkov-cli`) wraps
//! [`report`]:
//!
//! ```bash
//! cargo run -p supermarkov-cli -- markov -p 2 -q 3 --method all
//! cargo run -p supermarkov-cli -- table --max-sum 10 --format csv
//! cargo run -p supermarkov-cli -- annulus --q 2 --n 12 --method both
//! cargo run -p supermarkov-cli -- check --suite cross --bound 8
//! cargo run -p supermarkov-cli -- export snake-dot -p 3 -q 5
//! cargo run -p supermarkov-cli -- scan-monotonicity --bound 12
//! ```
//!
//! Exit codes: 0 success, 2 usage error, 3 method disagreement,
//! 4 invariant failure. `SUPERMARKOV_THREADS` caps parallelism for
//! table generation.
//!
//! ## Quick start
//!
//! ```
//! use supermarkov::scalars::Rational;
//! use supermarkov::words::Slope;
//!
//! let s = Slope::new(2, 3).unwrap();
//! let m = supermarkov::osp::sm_via_matrix::<Rational>(s).unwrap();
//! let d = supermarkov::snake::sm_via_dimers::<Rational>(s).unwrap();
//! let p = supermarkov::dynamics::sm_via_ptolemy::<Rational>(s).unwrap();
//! assert_eq!(m, d);
//! assert_eq!(d, p);
//! assert_eq!(m.render(), "29 + 74*sigma*theta");
//! ```

pub mod dynamics;
pub mod error;
pub mod grassmann;
pub mod osp;
pub mod report;
pub mod scalars;
pub mod snake;
pub mod words;
