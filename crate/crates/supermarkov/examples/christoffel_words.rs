//! The word combinatorics under every computation: Christoffel words,
//! snake words, mediant descent, and flip paths.
//!
//! Each slope p/q owns a Christoffel word (the lattice staircase closest
//! to the line of slope p/q), a snake word of arc labels obtained by
//! reading the word through the three arcs of a triangulated torus, and
//! a descent path through the Stern–Brocot tree that the Ptolemy
//! recurrence walks. Run with
//!
//! ```bash
//! cargo run -p supermarkov --example christoffel_words
//! ```

use supermarkov::words::{
    flip_path, lower_christoffel, mediant_descent, residues, snake_word, truncated_of,
    upper_christoffel, Slope,
};

fn main() {
    for (p, q) in [(2, 3), (3, 5)] {
        let s = Slope::new(p, q).unwrap();
        println!("slope {s}");
        println!("  residues n*q mod (p+q): {:?}", residues(s));
        println!("  upper Christoffel word: {}", upper_christoffel(s));
        println!("  lower Christoffel word: {}", lower_christoffel(s));
        println!("  truncated word:         {}", truncated_of(s));
        let word: String = snake_word(s).iter().map(|a| a.letter()).collect();
        println!("  snake word ({} letters): {word}", word.len());
        assert_eq!(word.len(), 2 * (p + q) as usize - 3);
        println!();
    }

    // Mediant descent: the interval walk from the root of the
    // Stern–Brocot tree down to a slope.
    let s = Slope::new(3, 5).unwrap();
    println!("mediant descent to {s}: {:?}", mediant_descent(s));

    // The flip path tracks the full triple of slopes at each step; each
    // move replaces exactly one slot by a new mediant.
    let path = flip_path(s);
    println!("\nflip path to {s} ({} moves):", path.moves.len());
    for (i, triple) in path.triples.iter().enumerate() {
        let labels: Vec<String> = triple.iter().map(|f| f.to_string()).collect();
        if i == 0 {
            println!("  start  {{{}}}", labels.join(", "));
        } else {
            println!("  {:?}  {{{}}}", path.moves[i - 1], labels.join(", "));
        }
    }
    for w in path.triples.windows(2) {
        let changed = (0..3).filter(|&j| w[0][j] != w[1][j]).count();
        assert_eq!(changed, 1, "each move changes exactly one slot");
    }
}
