//! Christoffel-word and lattice-path machinery for rational slopes:
//! residues, upper/lower/truncated words, snake words, and the mediant
//! flip path from the root Farey triple to a given slope.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A rational slope p/q with 0 < p/q ≤ 1 and gcd(p,q) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: u32,
    q: u32,
}

impl Slope {
    pub fn new(p: u32, q: u32) -> Result<Slope> {
        if p == 0 || q == 0 || p > q || gcd(p, q) != 1 {
            return Err(Error::InvalidSlope(p, q));
        }
        Ok(Slope { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sum(&self) -> u32 {
        self.p + self.q
    }

    pub fn frac(&self) -> Frac {
        Frac::new(self.p, self.q)
    }

    /// Every valid slope with p + q ≤ max_sum, ordered by (p+q, p).
    pub fn all_with_sum_at_most(max_sum: u32) -> Vec<Slope> {
        let mut out = Vec::new();
        for sum in 2..=max_sum {
            for p in 1..sum {
                let q = sum - p;
                if p <= q && gcd(p, q) == 1 {
                    out.push(Slope { p, q });
                }
            }
        }
        out
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A nonnegative fraction in lowest terms; 1/0 (infinity) is allowed as a
/// formal vertex of Farey triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Frac {
    pub num: u32,
    pub den: u32,
}

impl Frac {
    pub fn new(num: u32, den: u32) -> Frac {
        let g = gcd(num, den);
        if g == 0 {
            Frac { num: 0, den: 0 }
        } else {
            Frac {
                num: num / g,
                den: den / g,
            }
        }
    }

    pub fn mediant(a: Frac, b: Frac) -> Frac {
        Frac::new(a.num + b.num, a.den + b.den)
    }

    /// |ad − bc| — equals 1 exactly when the fractions are Farey neighbors.
    pub fn farey_determinant(a: Frac, b: Frac) -> i64 {
        (i64::from(a.num) * i64::from(b.den) - i64::from(b.num) * i64::from(a.den)).abs()
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// What a bit sequence over {0,1} represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordKind {
    Upper,
    Lower,
    Truncated,
}

/// A Christoffel word (or its truncation): 1 = north step, 0 = east step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelWord {
    pub bits: Vec<u8>,
    pub kind: WordKind,
}

impl ChristoffelWord {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for ChristoffelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The residue sequence a_n = n·q mod (p+q) for n = 0..p+q.
pub fn residues(s: Slope) -> Vec<u32> {
    let m = s.sum();
    (0..=m).map(|n| n * s.q() % m).collect()
}

/// Upper Christoffel word of the slope: bit n is 1 iff a_{n−1} < a_n.
pub fn upper_christoffel(s: Slope) -> ChristoffelWord {
    let a = residues(s);
    let bits = a.windows(2).map(|w| u8::from(w[0] < w[1])).collect();
    ChristoffelWord {
        bits,
        kind: WordKind::Upper,
    }
}

/// Lower Christoffel word, built geometrically as the greedy monotone
/// lattice path that stays on or below the line of slope p/q.
pub fn lower_christoffel(s: Slope) -> ChristoffelWord {
    let (p, q) = (u64::from(s.p()), u64::from(s.q()));
    let (mut x, mut y) = (0u64, 0u64);
    let mut bits = Vec::with_capacity((p + q) as usize);
    while x < q || y < p {
        if y < p && (y + 1) * q <= x * p {
            bits.push(1);
            y += 1;
        } else {
            bits.push(0);
            x += 1;
        }
    }
    ChristoffelWord {
        bits,
        kind: WordKind::Lower,
    }
}

/// Strip the initial 1 and final 0 from an upper Christoffel word.
pub fn truncated_word(w: &ChristoffelWord) -> Result<ChristoffelWord> {
    if w.kind != WordKind::Upper {
        return Err(Error::MalformedWord(format!(
            "truncation applies to upper words, got {:?}",
            w.kind
        )));
    }
    if w.bits.first() != Some(&1) || w.bits.last() != Some(&0) {
        return Err(Error::MalformedWord(format!(
            "upper word must start with 1 and end with 0, got {w}"
        )));
    }
    Ok(ChristoffelWord {
        bits: w.bits[1..w.bits.len() - 1].to_vec(),
        kind: WordKind::Truncated,
    })
}

/// Truncated word of a slope, straight from the upper word.
pub fn truncated_of(s: Slope) -> ChristoffelWord {
    truncated_word(&upper_christoffel(s)).expect("upper words always truncate")
}

/// Labels of the three initial arcs of the once-punctured torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArcLabel {
    X,
    Y,
    Z,
}

impl ArcLabel {
    pub fn letter(self) -> char {
        match self {
            ArcLabel::X => 'x',
            ArcLabel::Y => 'y',
            ArcLabel::Z => 'z',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArcLabel::X => "x",
            ArcLabel::Y => "y",
            ArcLabel::Z => "z",
        }
    }
}

/// The crossing sequence of the slope-p/q curve through the initial
/// triangulation: starts with z, then each truncated-word letter
/// contributes `y z` (east) or `x z` (north); length 2(p+q) − 3.
pub fn snake_word(s: Slope) -> Vec<ArcLabel> {
    let tw = truncated_of(s);
    let mut out = vec![ArcLabel::Z];
    for b in tw.bits {
        out.push(if b == 1 { ArcLabel::X } else { ArcLabel::Y });
        out.push(ArcLabel::Z);
    }
    out
}

/// One step of the mediant descent toward a slope: narrow the Stern–Brocot
/// interval to its left or right half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntervalMove {
    Left,
    Right,
}

/// The (unique, non-backtracking) interval moves from the root interval
/// (0/1, 1/1) down to the triple containing p/q. Empty for slopes already
/// in the root triple (1/1 and 1/2).
pub fn mediant_descent(s: Slope) -> Vec<IntervalMove> {
    let target = s.frac();
    let mut lo = Frac::new(0, 1);
    let mut hi = Frac::new(1, 1);
    let mut moves = Vec::new();
    loop {
        let mid = Frac::mediant(lo, hi);
        if target == lo || target == hi || target == mid {
            return moves;
        }
        // target < mid ⇔ num·mid.den < mid.num·den
        if target.num * mid.den < mid.num * target.den {
            moves.push(IntervalMove::Left);
            hi = mid;
        } else {
            moves.push(IntervalMove::Right);
            lo = mid;
        }
    }
}

/// The sequence of Farey triples visited while descending to a slope.
///
/// Each triple occupies three stable slots starting at (0/1, 1/1, 1/2);
/// a move replaces the slot holding the interval endpoint that drops out
/// (the right endpoint for a left move, the left endpoint for a right
/// move) with the new mediant. The final triple contains the slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipPath {
    pub moves: Vec<IntervalMove>,
    pub triples: Vec<[Frac; 3]>,
}

pub fn flip_path(s: Slope) -> FlipPath {
    let moves = mediant_descent(s);
    let mut lo = Frac::new(0, 1);
    let mut hi = Frac::new(1, 1);
    let mut slots = [lo, hi, Frac::mediant(lo, hi)];
    let mut triples = vec![slots];
    for &mv in &moves {
        let mid = Frac::mediant(lo, hi);
        let dropped = match mv {
            IntervalMove::Left => {
                let d = hi;
                hi = mid;
                d
            }
            IntervalMove::Right => {
                let d = lo;
                lo = mid;
                d
            }
        };
        let new_mediant = Frac::mediant(lo, hi);
        let slot = slots
            .iter()
            .position(|&f| f == dropped)
            .expect("dropped endpoint is in the current triple");
        slots[slot] = new_mediant;
        triples.push(slots);
    }
    FlipPath { moves, triples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn slope(p: u32, q: u32) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn slope_validation() {
        assert!(Slope::new(3, 5).is_ok());
        assert!(matches!(Slope::new(2, 4), Err(Error::InvalidSlope(2, 4))));
        assert!(matches!(Slope::new(0, 1), Err(Error::InvalidSlope(0, 1))));
        assert!(matches!(Slope::new(3, 2), Err(Error::InvalidSlope(3, 2))));
    }

    #[test]
    fn residue_sequences() {
        assert_eq!(residues(slope(3, 5)), vec![0, 5, 2, 7, 4, 1, 6, 3, 0]);
        assert_eq!(residues(slope(1, 1)), vec![0, 1, 0]);
        assert_eq!(residues(slope(1, 2)), vec![0, 2, 1, 0]);
    }

    #[test]
    fn upper_words() {
        assert_eq!(upper_christoffel(slope(3, 5)).to_string(), "10100100");
        assert_eq!(upper_christoffel(slope(1, 1)).to_string(), "10");
        assert_eq!(upper_christoffel(slope(2, 3)).to_string(), "10100");
    }

    #[test]
    fn truncations() {
        assert_eq!(truncated_of(slope(3, 5)).to_string(), "010010");
        assert_eq!(truncated_of(slope(1, 1)).to_string(), "");
        assert_eq!(truncated_of(slope(2, 3)).to_string(), "010");
        let lower = lower_christoffel(slope(2, 3));
        assert!(matches!(
            truncated_word(&lower),
            Err(Error::MalformedWord(_))
        ));
    }

    #[test]
    fn snake_words() {
        use ArcLabel::*;
        assert_eq!(
            snake_word(slope(3, 5)),
            vec![Z, Y, Z, X, Z, Y, Z, Y, Z, X, Z, Y, Z]
        );
        assert_eq!(snake_word(slope(1, 1)), vec![Z]);
        assert_eq!(snake_word(slope(2, 3)), vec![Z, Y, Z, X, Z, Y, Z]);
    }

    #[test]
    fn flip_paths_match_worked_triples() {
        let f = |n, d| Frac::new(n, d);
        let path = flip_path(slope(1, 3));
        assert_eq!(path.moves, vec![IntervalMove::Left]);
        assert_eq!(
            path.triples,
            vec![[f(0, 1), f(1, 1), f(1, 2)], [f(0, 1), f(1, 3), f(1, 2)]]
        );

        let path = flip_path(slope(2, 3));
        assert_eq!(path.moves, vec![IntervalMove::Right]);
        assert_eq!(
            path.triples,
            vec![[f(0, 1), f(1, 1), f(1, 2)], [f(2, 3), f(1, 1), f(1, 2)]]
        );

        let path = flip_path(slope(3, 5));
        assert_eq!(path.moves.len(), 2);
        let last = path.triples.last().unwrap();
        assert!(last.contains(&f(3, 5)));

        assert!(flip_path(slope(1, 1)).moves.is_empty());
        assert!(flip_path(slope(1, 2)).moves.is_empty());
    }

    #[test]
    fn flip_path_triples_are_farey_triangles() {
        for s in Slope::all_with_sum_at_most(10) {
            for t in flip_path(s).triples {
                for a in 0..3 {
                    for b in a + 1..3 {
                        assert_eq!(
                            Frac::farey_determinant(t[a], t[b]),
                            1,
                            "non-adjacent pair in triple for {s}"
                        );
                    }
                }
            }
        }
    }

    /// Breadth-first search over interval moves: the deterministic descent
    /// must realize the shortest path to a triple containing the slope.
    #[test]
    fn descent_is_shortest_path() {
        for s in Slope::all_with_sum_at_most(10) {
            let target = s.frac();
            let mut seen = HashSet::new();
            let mut queue = VecDeque::new();
            queue.push_back((Frac::new(0, 1), Frac::new(1, 1), 0usize));
            let mut dist = None;
            while let Some((lo, hi, d)) = queue.pop_front() {
                if !seen.insert((lo, hi)) {
                    continue;
                }
                let mid = Frac::mediant(lo, hi);
                if target == lo || target == hi || target == mid {
                    dist = Some(d);
                    break;
                }
                if mid.num + mid.den <= s.sum() {
                    queue.push_back((lo, mid, d + 1));
                    queue.push_back((mid, hi, d + 1));
                }
            }
            assert_eq!(Some(mediant_descent(s).len()), dist, "slope {s}");
        }
    }

    fn arb_slope() -> impl Strategy<Value = Slope> {
        (1u32..=12, 1u32..=12).prop_filter_map("valid slope", |(p, q)| Slope::new(p, q).ok())
    }

    proptest! {
        #[test]
        fn upper_word_counts_and_geometry(s in arb_slope()) {
            let w = upper_christoffel(s);
            let ones = w.bits.iter().filter(|&&b| b == 1).count() as u32;
            let zeros = w.bits.len() as u32 - ones;
            prop_assert_eq!(ones, s.p());
            prop_assert_eq!(zeros, s.q());
            // Path vertices stay on or above the slope line, touching it
            // only at the endpoints.
            let (mut e, mut n) = (0i64, 0i64);
            for (i, &b) in w.bits.iter().enumerate() {
                if b == 1 { n += 1 } else { e += 1 }
                let v = n * i64::from(s.q()) - e * i64::from(s.p());
                prop_assert!(v >= 0);
                if i + 1 < w.bits.len() {
                    prop_assert!(v > 0, "interior vertex on the line");
                }
            }
        }

        #[test]
        fn upper_and_lower_words_share_interior(s in arb_slope()) {
            let u = upper_christoffel(s);
            let l = lower_christoffel(s);
            prop_assert_eq!(l.bits.first(), Some(&0u8));
            prop_assert_eq!(l.bits.last(), Some(&1u8));
            prop_assert_eq!(&u.bits[1..u.bits.len()-1], &l.bits[1..l.bits.len()-1]);
        }

        #[test]
        fn snake_word_shape(s in arb_slope()) {
            let sw = snake_word(s);
            prop_assert_eq!(sw.len() as u32, 2 * s.sum() - 3);
            let zs = sw.iter().filter(|&&a| a == ArcLabel::Z).count() as u32;
            prop_assert_eq!(zs, s.sum() - 1);
        }
    }
}
