//! Compute super Markov numbers by three independent algorithms and
//! check that they agree exactly.
//!
//! A super Markov number SM[p/q] = body + soul·σθ refines the classical
//! Markov number m[p/q]: the body *is* m[p/q], and the soul is a new
//! nonnegative integer. This example computes SM[p/q] for a handful of
//! slopes by
//!
//!   1. a holonomy product of 3×3 supermatrices,
//!   2. a signed double-dimer enumeration on the snake graph,
//!   3. a super Ptolemy (Vieta-style) descent recurrence,
//!
//! and asserts coefficient-by-coefficient agreement. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example markov_numbers
//! ```

use supermarkov::dynamics::{classical_markov, sm_via_ptolemy};
use supermarkov::osp::sm_via_matrix;
use supermarkov::report::{markov_report, Method, Mode};
use supermarkov::scalars::Rational;
use supermarkov::snake::sm_via_dimers;
use supermarkov::words::Slope;

fn main() {
    println!("super Markov numbers, three ways\n");
    println!("{:>6} {:>12} {:>12}   value", "slope", "body", "soul");

    for (p, q) in [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 4), (3, 5)] {
        let s = Slope::new(p, q).unwrap();
        let matrix = sm_via_matrix::<Rational>(s).unwrap();
        let dimer = sm_via_dimers::<Rational>(s).unwrap();
        let ptolemy = sm_via_ptolemy::<Rational>(s).unwrap();
        assert_eq!(matrix, dimer, "matrix and dimer disagree at {s}");
        assert_eq!(dimer, ptolemy, "dimer and ptolemy disagree at {s}");

        // The body is the classical Markov number of the slope.
        assert_eq!(matrix.body(), classical_markov(s).into());

        println!(
            "{:>6} {:>12} {:>12}   {}",
            s.to_string(),
            matrix.body().to_string(),
            matrix.coefficient(0b11).to_string(),
            matrix.render()
        );
    }

    // The report layer wraps the same computation with an agreement flag
    // and advisory notes; 3/4 is the slope where published tables
    // conflict, so its report carries a note recording the consensus.
    println!("\nfull report for 3/4:");
    let report = markov_report(3, 4, &Method::ALL, Mode::Unit).unwrap();
    print!("{}", report.to_text());
    assert!(report.agreement);
}
