//! Enumerate every double-dimer cover of small snake graphs by brute
//! force and confirm the structured count.
//!
//! A double-dimer cover assigns each edge multiplicity 0, 1, or 2 so
//! every vertex has total degree 2. Doubled edges pair up into a perfect
//! matching; multiplicity-1 edges form disjoint closed cycles, and on a
//! snake graph every such cycle is the boundary of a contiguous tile
//! interval. The brute-force enumerator here is the oracle the fast
//! interval-based counting is checked against. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example double_dimer_covers
//! ```

use supermarkov::scalars::rat;
use supermarkov::snake::{
    all_simple_cycles, brute_force_covers, build_annulus_snake, build_torus_snake,
    interval_for_cycle, structured_cover_total,
};
use supermarkov::words::Slope;

fn main() {
    // The annulus graph with two tiles: six covers in total.
    let g = build_annulus_snake(5).unwrap();
    println!("annulus n = 5 snake graph: {} tiles", g.tile_count());
    let covers = brute_force_covers(&g).unwrap();
    for (i, c) in covers.iter().enumerate() {
        let doubled: Vec<usize> = c
            .multiplicities
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m == 2)
            .map(|(id, _)| id)
            .collect();
        println!(
            "  cover {}: doubled edges {:?}, cycles {:?}",
            i + 1,
            doubled,
            c.cycles
        );
    }
    println!("total: {} covers", covers.len());
    assert_eq!(covers.len(), 6);
    assert_eq!(structured_cover_total(&g).unwrap(), rat(6));

    // The slope 1/2 strip has three tiles and fourteen covers, exactly
    // one of which carries two disjoint cycles.
    let s = Slope::new(1, 2).unwrap();
    let g = build_torus_snake(s);
    println!("\ntorus {s} snake graph: {} tiles", g.tile_count());
    let covers = brute_force_covers(&g).unwrap();
    let mut by_shape: Vec<(Vec<(usize, usize)>, usize)> = Vec::new();
    for c in &covers {
        match by_shape.iter_mut().find(|(shape, _)| *shape == c.cycles) {
            Some((_, count)) => *count += 1,
            None => by_shape.push((c.cycles.clone(), 1)),
        }
    }
    by_shape.sort();
    for (shape, count) in &by_shape {
        let desc = if shape.is_empty() {
            "no cycle (doubled matching)".to_string()
        } else {
            format!("cycles {shape:?}")
        };
        println!("  {count} covers with {desc}");
    }
    println!("total: {} covers", covers.len());
    assert_eq!(covers.len(), 14);
    assert_eq!(structured_cover_total(&g).unwrap(), rat(14));
    let two_cycle: Vec<_> = covers.iter().filter(|c| c.cycles.len() == 2).collect();
    assert_eq!(two_cycle.len(), 1);
    assert_eq!(two_cycle[0].cycles, vec![(1, 1), (3, 3)]);

    // Every simple cycle in the graph is an interval boundary.
    let cycles = all_simple_cycles(&g);
    println!("\nsimple cycles in the {s} graph: {}", cycles.len());
    for c in &cycles {
        let (first, last) = interval_for_cycle(&g, c).expect("cycle bounds a tile interval");
        println!("  {} vertices -> tile interval [{first}, {last}]", c.len());
    }
    let t = g.tile_count();
    assert_eq!(cycles.len(), t * (t + 1) / 2);
}
