//! Compute annulus super λ-lengths two independent ways.
//!
//! On an annulus with one marked point on the outer boundary and q on the
//! inner one, the λ-lengths x_n of a spiraling arc family satisfy a
//! recurrence that mixes the even variables with two odd companions
//! σ̃, θ̃. The same values fall out of a signed double-dimer enumeration
//! on annulus snake graphs. This example runs the q = 2 sequence to
//! x_12 both ways and prints the agreement, plus the recurrence-only
//! q = 3 sequence no dimer model covers. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example annulus_sequence
//! ```

use supermarkov::dynamics::annulus_run;
use supermarkov::report::{annulus_report, AnnulusMethod};
use supermarkov::snake::{annulus_via_dimers, build_annulus_snake};

fn main() {
    // The q = 2 sequence by the recurrence, with dimer cross-checks.
    println!("annulus q = 2: x_4 .. x_12\n");
    let states = annulus_run(2, 12).unwrap();
    for st in states.iter().filter(|st| st.index() >= 4) {
        let n = st.index();
        let dimer = annulus_via_dimers(n as u32).unwrap();
        assert_eq!(st.value(), &dimer, "recurrence vs dimers at x_{n}");
        let tiles = build_annulus_snake(n as u32).unwrap().tile_count();
        println!("x_{n:<2} = {}", st.value().render());
        println!("       (= signed dimer tally on the {tiles}-tile annulus graph)");
    }

    // The odd companions that drive the recurrence, at the first step.
    let first = states.iter().find(|st| st.index() == 4).unwrap();
    println!("\nodd companions after the first step:");
    println!("  sigma~_4 = {}", first.sigma().render());
    println!("  theta~_3 = {}", first.thetas().last().unwrap().render());

    // The report layer bundles both methods with an agreement flag.
    let report = annulus_report(2, 8, &AnnulusMethod::BOTH).unwrap();
    assert!(report.agreement);
    println!("\nreport for q = 2, n = 8:");
    print!("{}", report.to_text());

    // For q >= 3 there is no dimer model; the recurrence still runs.
    println!("\nannulus q = 3 (recurrence only): x_5 .. x_9\n");
    for st in annulus_run(3, 9).unwrap().iter().filter(|st| st.index() >= 5) {
        println!("x_{:<2} = {}", st.index(), st.value().render());
    }
}
