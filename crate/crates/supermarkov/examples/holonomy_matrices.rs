//! Build holonomy supermatrices and check the constraint they satisfy.
//!
//! The matrix method assigns each slope p/q a 3×3 matrix over the
//! Grassmann algebra: a product of step factors read off the Christoffel
//! word of the slope. The super Markov number sits in the (0,1) entry,
//! and the whole matrix satisfies an orthosymplectic constraint — six
//! entry residuals plus an internal consistency condition on the (2,2)
//! entry, all of which must vanish identically. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example holonomy_matrices
//! ```

use supermarkov::osp::{markov_holonomy, markov_step_matrix, osp_check, sm_via_matrix, StepBit};
use supermarkov::scalars::Rational;
use supermarkov::words::{upper_christoffel, Slope};

fn main() {
    // The three step factors every holonomy is built from.
    println!("step factors over the torus Grassmann algebra:\n");
    for (name, bit) in [
        ("east step ", StepBit::Zero),
        ("north step", StepBit::One),
        ("final step", StepBit::Final),
    ] {
        let m = markov_step_matrix::<Rational>(bit).unwrap();
        println!("{name}:\n{}\n", m.render());
    }

    for (p, q) in [(1, 2), (2, 3), (3, 5)] {
        let s = Slope::new(p, q).unwrap();
        let word = upper_christoffel(s);
        println!("slope {s}: Christoffel word {word}");

        let h = markov_holonomy::<Rational>(s).unwrap();
        println!("holonomy:\n{}", h.render());

        // The (0,1) entry is the super Markov number.
        let sm = sm_via_matrix::<Rational>(s).unwrap();
        assert_eq!(h.entry(0, 1), &sm);
        println!("(0,1) entry = SM[{s}] = {}", sm.render());

        // The orthosymplectic constraint: six residuals and the dual
        // form of the corner entry, all exactly zero.
        let report = osp_check(&h).unwrap();
        assert!(report.all_zero(), "constraint residual at {s}");
        assert!(report.dual_gap.is_zero(), "corner-entry gap at {s}");
        println!("orthosymplectic residuals: all six zero, corner gap zero\n");
    }
}
