//! Walk through the snake graph of a slope and the signed double-dimer
//! tally that produces its super Markov number.
//!
//! The snake graph of p/q is a strip of 2(p+q)−3 square tiles whose
//! labels follow the snake word of the slope. Perfect matchings count the
//! body; double-dimer covers carrying one closed cycle contribute to the
//! soul with a sign read off the cycle's tile interval. This example
//! prints the tiles, the matching count, and the full signed tally for
//! the slope 2/3, whose positive contributions famously sum to 78 while
//! the negative ones sum to 4: soul = 78 − 4 = 74. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example snake_dimers
//! ```

use supermarkov::scalars::{rat, Rational};
use supermarkov::snake::{
    build_torus_snake, count_matchings, sm_via_dimers, torus_cycle_contributions,
};
use supermarkov::words::{snake_word, Slope};

fn main() {
    let s = Slope::new(2, 3).unwrap();
    let g = build_torus_snake(s);

    println!("snake graph of {s}");
    println!(
        "snake word: {}",
        snake_word(s).iter().map(|a| a.letter()).collect::<String>()
    );
    println!("tiles ({} total):", g.tile_count());
    for (i, t) in g.tiles().iter().enumerate() {
        println!(
            "  tile {}: label {} at {:?}, mu = ({}, {})",
            i + 1,
            t.label.render(),
            t.position,
            t.lower_left.name(),
            t.upper_right.name()
        );
    }

    // Perfect matchings count the classical Markov number.
    let matchings: Rational = count_matchings(&g).unwrap();
    println!("\nperfect matchings: {matchings} (= body of SM[{s}])");
    assert_eq!(matchings, rat(29));

    // Single-cycle double-dimer covers, tallied with signs.
    println!("\nsigned single-cycle tally:");
    let mut positive = rat(0);
    let mut negative = rat(0);
    for c in torus_cycle_contributions::<Rational>(s).unwrap() {
        println!(
            "  interval [{}, {}]: sign {:+}, covers {}",
            c.interval.0,
            c.interval.1,
            c.sign,
            c.covers
        );
        if c.sign > 0 {
            positive += c.covers;
        } else {
            negative += c.covers;
        }
    }
    println!("positive total: {positive}");
    println!("negative total: {negative}");
    assert_eq!(positive, rat(78));
    assert_eq!(negative, rat(4));

    let sm = sm_via_dimers::<Rational>(s).unwrap();
    println!(
        "\nsoul = {positive} - {negative} = {}",
        positive.clone() - negative.clone()
    );
    println!("SM[{s}] = {}", sm.render());
    assert_eq!(sm.coefficient(0b11), rat(74));
}
