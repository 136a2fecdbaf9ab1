//! Super Markov values as exact Laurent polynomials in the initial
//! λ-lengths, specialized back to numbers.
//!
//! Instead of setting the three initial λ-lengths to 1, carry them as
//! symbols x, y, z (with half-integer exponents, since odd couplings
//! involve square roots of weights). Every coefficient stays a Laurent
//! polynomial with positive integer coefficients, and substituting
//! x = y = z = 1 recovers the unit values. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example weighted_lambda_lengths
//! ```

use std::collections::BTreeMap;

use supermarkov::dynamics::sm_via_ptolemy;
use supermarkov::osp::sm_via_matrix;
use supermarkov::scalars::{rat, LaurentPoly, Rational, Scalar};
use supermarkov::snake::sm_via_dimers;
use supermarkov::words::Slope;

fn main() {
    for (p, q) in [(1, 1), (1, 2), (2, 3)] {
        let s = Slope::new(p, q).unwrap();
        let weighted = sm_via_matrix::<LaurentPoly>(s).unwrap();

        // All three methods produce the same polynomial.
        assert_eq!(weighted, sm_via_dimers::<LaurentPoly>(s).unwrap());
        assert_eq!(weighted, sm_via_ptolemy::<LaurentPoly>(s).unwrap());

        println!("SM[{s}] as a Laurent polynomial in x, y, z:");
        println!("  body: {}", weighted.body().render());
        println!("  soul: {}", weighted.coefficient(0b11).render());

        // Substitute x = y = z = 1: the unit super Markov number.
        let ones: BTreeMap<String, Rational> = [("x", 1), ("y", 1), ("z", 1)]
            .into_iter()
            .map(|(v, n)| (v.to_string(), rat(n)))
            .collect();
        let unit = weighted.substitute(&ones).unwrap();
        assert_eq!(unit, sm_via_matrix::<Rational>(s).unwrap());
        println!("  at x = y = z = 1: {}", unit.render());

        // Any other positive point works too; squares keep the odd
        // couplings rational.
        let point: BTreeMap<String, Rational> = [("x", 4), ("y", 1), ("z", 9)]
            .into_iter()
            .map(|(v, n)| (v.to_string(), rat(n)))
            .collect();
        let evaluated = weighted.substitute(&point).unwrap();
        println!("  at (x, y, z) = (4, 1, 9): {}\n", evaluated.render());
    }
}
