//! Check the quantity the annulus recurrence conserves, and the bridge
//! from the q = 1 annulus to the torus.
//!
//! Writing the recurrence in its normalized odd variables, the product
//! x_n·σ̃_n·θ̃_{n−1} is independent of n — each step's residual against
//! the previous step vanishes identically. For q = 1 the odd product
//! stays a scalar multiple of a fixed Grassmann word, which pins the
//! scalar against the even variables as well. And the q = 1 even
//! sequence is exactly the super Fibonacci sequence, whose values are
//! the torus super Markov numbers SM[1/k]. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example conserved_quantities
//! ```

use supermarkov::dynamics::{annulus_run, conserved_check, super_fibonacci};
use supermarkov::osp::sm_via_matrix;
use supermarkov::scalars::Rational;
use supermarkov::words::Slope;

fn main() {
    for q in [1usize, 2] {
        let states = annulus_run(q, 12).unwrap();
        let report = conserved_check(&states).unwrap();
        println!(
            "annulus q = {q}: {} step residuals of x_n sigma~_n theta~_(n-1), all zero: {}",
            report.step_residuals.len(),
            report.all_zero()
        );
        assert!(report.all_zero());
        if let Some(scalar) = &report.scalar_residuals {
            println!(
                "  q = 1 scalar form: {} residuals against the even variables, all zero",
                scalar.len()
            );
            assert!(scalar
                .iter()
                .all(|(_, purity, ratio)| purity.is_zero() && num::Zero::is_zero(ratio)));
        }
    }

    // The q = 1 sequence is the super Fibonacci sequence, and its values
    // are torus super Markov numbers along the 1/k family.
    println!("\nsuper Fibonacci bridge: x_n = SM[1/(n-2)]\n");
    for n in 3..=10usize {
        let fib = super_fibonacci(n).unwrap();
        let s = Slope::new(1, (n - 2) as u32).unwrap();
        let sm = sm_via_matrix::<Rational>(s).unwrap();
        assert_eq!(fib, sm, "x_{n} vs SM[{s}]");
        println!("x_{n:<2} = SM[{s}] = {}", fib.render());
    }
}
