//! Snake graphs for torus slopes and annulus arcs: construction, perfect
//! matching and double-dimer enumeration, cycle classification with signs,
//! and the combinatorial super-value formulas.
//!
//! A snake graph is a strip of unit-square tiles, each tile sharing one
//! edge with the next. Double dimer covers assign every edge multiplicity
//! 0, 1, or 2 so each vertex has total incident multiplicity 2; the
//! multiplicity-1 edges always decompose into boundaries of contiguous
//! tile intervals, which is what makes the structured enumeration here
//! polynomial instead of exponential (a brute-force oracle guards it).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::grassmann::{AlgebraContext, GrassmannElement};
use crate::scalars::{Rational, Scalar, WeightScalar};
use crate::words::{snake_word, upper_christoffel, ArcLabel, Slope};

/// What a tile is labeled with: an initial arc (torus graphs) or the
/// cyclic label 1, 2, 3 (annulus graphs).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileLabel {
    Arc(ArcLabel),
    Cyclic(u8),
}

impl TileLabel {
    pub fn render(&self) -> String {
        match self {
            TileLabel::Arc(a) => a.name().to_string(),
            TileLabel::Cyclic(k) => k.to_string(),
        }
    }
}

/// A μ-invariant generator attached to a tile corner (1-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuGenerator {
    Sigma(usize),
    Theta(usize),
}

impl MuGenerator {
    pub fn name(&self) -> String {
        match self {
            MuGenerator::Sigma(k) => format!("sigma{k}"),
            MuGenerator::Theta(k) => format!("theta{k}"),
        }
    }
}

/// One unit-square tile of a snake graph.
#[derive(Clone, Debug)]
pub struct Tile {
    /// Grid coordinate of the lower-left corner.
    pub position: (i64, i64),
    pub label: TileLabel,
    /// μ-invariant in the lower-left triangle.
    pub lower_left: MuGenerator,
    /// μ-invariant in the upper-right triangle.
    pub upper_right: MuGenerator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Arc variable weighting this edge; `None` means weight 1.
    pub weight: Option<ArcLabel>,
}

/// Which family a snake graph belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Torus(Slope),
    Annulus(u32),
}

/// A snake graph: tiles, corner vertices, and weighted edges.
#[derive(Clone, Debug)]
pub struct SnakeGraph {
    kind: GraphKind,
    tiles: Vec<Tile>,
    vertices: Vec<(i64, i64)>,
    edges: Vec<Edge>,
    /// vertex → (edge id, other endpoint)
    adjacency: Vec<Vec<(usize, usize)>>,
    /// tile → [bottom, top, left, right] edge ids
    tile_edge_ids: Vec<[usize; 4]>,
}

/// Incremental builder shared by the torus and annulus constructions.
struct GraphBuilder {
    vertices: Vec<(i64, i64)>,
    vertex_ids: HashMap<(i64, i64), usize>,
    edges: Vec<Edge>,
    edge_ids: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    fn new() -> Self {
        GraphBuilder {
            vertices: Vec::new(),
            vertex_ids: HashMap::new(),
            edges: Vec::new(),
            edge_ids: HashMap::new(),
        }
    }

    fn vertex(&mut self, p: (i64, i64)) -> usize {
        if let Some(&id) = self.vertex_ids.get(&p) {
            return id;
        }
        let id = self.vertices.len();
        self.vertices.push(p);
        self.vertex_ids.insert(p, id);
        id
    }

    fn edge(&mut self, a: usize, b: usize, weight: Option<ArcLabel>) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.edge_ids.get(&key) {
            assert_eq!(
                self.edges[id].weight, weight,
                "shared edge carries two different weights"
            );
            return id;
        }
        let id = self.edges.len();
        self.edges.push(Edge {
            a: key.0,
            b: key.1,
            weight,
        });
        self.edge_ids.insert(key, id);
        id
    }

    /// Register one tile's four edges. Weights: (horizontal, vertical).
    fn tile(&mut self, pos: (i64, i64), weights: Option<(ArcLabel, ArcLabel)>) -> [usize; 4] {
        let (cx, cy) = pos;
        let bl = self.vertex((cx, cy));
        let br = self.vertex((cx + 1, cy));
        let tl = self.vertex((cx, cy + 1));
        let tr = self.vertex((cx + 1, cy + 1));
        let (h, v) = match weights {
            Some((h, v)) => (Some(h), Some(v)),
            None => (None, None),
        };
        [
            self.edge(bl, br, h),
            self.edge(tl, tr, h),
            self.edge(bl, tl, v),
            self.edge(br, tr, v),
        ]
    }

    fn finish(self, kind: GraphKind, tiles: Vec<Tile>, tile_edge_ids: Vec<[usize; 4]>) -> SnakeGraph {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for (id, e) in self.edges.iter().enumerate() {
            adjacency[e.a].push((id, e.b));
            adjacency[e.b].push((id, e.a));
        }
        SnakeGraph {
            kind,
            tiles,
            vertices: self.vertices,
            edges: self.edges,
            adjacency,
            tile_edge_ids,
        }
    }
}

/// Edge weights of a torus tile, by arc label: (horizontal, vertical).
fn torus_tile_weights(label: ArcLabel) -> (ArcLabel, ArcLabel) {
    match label {
        ArcLabel::X => (ArcLabel::Y, ArcLabel::Z),
        ArcLabel::Y => (ArcLabel::Z, ArcLabel::X),
        ArcLabel::Z => (ArcLabel::Y, ArcLabel::X),
    }
}

/// μ-invariants of torus tile k (1-based): the μ-sequence along the strip
/// is σ1, θ1, σ2, θ2, ..., with tile k carrying entries k and k+1.
fn torus_tile_mu(k: usize) -> (MuGenerator, MuGenerator) {
    let entry = |m: usize| {
        if m % 2 == 1 {
            MuGenerator::Sigma(m.div_ceil(2))
        } else {
            MuGenerator::Theta(m / 2)
        }
    };
    (entry(k), entry(k + 1))
}

/// Build the snake graph of a torus slope: one tile per snake-word letter,
/// placed N after an x, E after a y, straight after a z.
pub fn build_torus_snake(s: Slope) -> SnakeGraph {
    let word = snake_word(s);
    let mut b = GraphBuilder::new();
    let mut tiles = Vec::with_capacity(word.len());
    let mut tile_edge_ids = Vec::with_capacity(word.len());
    let mut pos = (0i64, 0i64);
    let mut east = true;
    for (i, &label) in word.iter().enumerate() {
        if i > 0 {
            match label {
                ArcLabel::X => east = false,
                ArcLabel::Y => east = true,
                ArcLabel::Z => {}
            }
            pos = if east { (pos.0 + 1, pos.1) } else { (pos.0, pos.1 + 1) };
        }
        let (ll, ur) = torus_tile_mu(i + 1);
        tiles.push(Tile {
            position: pos,
            label: TileLabel::Arc(label),
            lower_left: ll,
            upper_right: ur,
        });
        tile_edge_ids.push(b.tile(pos, Some(torus_tile_weights(label))));
    }
    b.finish(GraphKind::Torus(s), tiles, tile_edge_ids)
}

/// Tile count of the annulus graph for arc index n.
pub fn annulus_tile_count(n: u32) -> Result<usize> {
    if n < 4 {
        return Err(Error::Unsupported(format!(
            "annulus snake graphs start at n = 4, got {n}"
        )));
    }
    Ok((n as usize - 3) + (n as usize - 4) / 2)
}

/// μ corner pair of an annulus tile by its cyclic label.
fn annulus_tile_mu(label: u8) -> (MuGenerator, MuGenerator) {
    match label {
        1 => (MuGenerator::Sigma(3), MuGenerator::Theta(1)),
        2 => (MuGenerator::Theta(1), MuGenerator::Theta(2)),
        3 => (MuGenerator::Theta(2), MuGenerator::Sigma(3)),
        other => unreachable!("annulus labels cycle 1..3, got {other}"),
    }
}

/// Build the annulus snake graph for arc index n (two marked points on the
/// inner boundary): tile labels cycle 1,2,3,..., and the strip grows in a
/// period-six staircase (one east step, three north steps, three east
/// steps, three north steps, ...), the unique placement consistent with
/// the published super λ-length values.
pub fn build_annulus_snake(n: u32) -> Result<SnakeGraph> {
    let count = annulus_tile_count(n)?;
    let mut b = GraphBuilder::new();
    let mut tiles = Vec::with_capacity(count);
    let mut tile_edge_ids = Vec::with_capacity(count);
    let mut pos = (0i64, 0i64);
    for i in 0..count {
        if i > 0 {
            let east = (i + 4) / 3 % 2 == 1;
            pos = if east { (pos.0 + 1, pos.1) } else { (pos.0, pos.1 + 1) };
        }
        let label = (i % 3 + 1) as u8;
        let (ll, ur) = annulus_tile_mu(label);
        tiles.push(Tile {
            position: pos,
            label: TileLabel::Cyclic(label),
            lower_left: ll,
            upper_right: ur,
        });
        tile_edge_ids.push(b.tile(pos, None));
    }
    Ok(b.finish(GraphKind::Annulus(n), tiles, tile_edge_ids))
}

impl SnakeGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn edge_weight<S: WeightScalar>(&self, edge: usize) -> S {
        match self.edges[edge].weight {
            Some(a) => S::lambda(a.name()),
            None => S::one(),
        }
    }

    fn full_mask(&self) -> Result<u64> {
        let n = self.vertices.len();
        if n > 64 {
            return Err(Error::SizeLimit(n, 64));
        }
        Ok(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    /// Weighted sum over perfect matchings of the vertex subset `active`,
    /// by eliminating the lowest active vertex (memoized on the subset).
    fn matching_sum<S: WeightScalar>(&self, active: u64, memo: &mut HashMap<u64, S>) -> S {
        if active == 0 {
            return S::one();
        }
        if let Some(v) = memo.get(&active) {
            return v.clone();
        }
        let v = active.trailing_zeros() as usize;
        let mut total = S::zero();
        for &(eid, u) in &self.adjacency[v] {
            if active >> u & 1 == 1 {
                let rest = active & !(1 << v) & !(1 << u);
                let sub = self.matching_sum(rest, memo);
                total = total.add(&self.edge_weight::<S>(eid).mul(&sub));
            }
        }
        memo.insert(active, total.clone());
        total
    }

    fn check_interval(&self, first: usize, last: usize) -> Result<()> {
        if first < 1 || last < first || last > self.tiles.len() {
            return Err(Error::IntervalOutOfRange(first, last, self.tiles.len()));
        }
        Ok(())
    }

    /// Edge ids of the boundary cycle of tiles first..=last: the edges
    /// incident to exactly one tile of the interval.
    pub fn interval_boundary(&self, first: usize, last: usize) -> Result<Vec<usize>> {
        self.check_interval(first, last)?;
        let mut incidence: BTreeMap<usize, usize> = BTreeMap::new();
        for t in first..=last {
            for &e in &self.tile_edge_ids[t - 1] {
                *incidence.entry(e).or_insert(0) += 1;
            }
        }
        Ok(incidence
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(e, _)| e)
            .collect())
    }

    /// Vertex bitmask of the boundary cycle of an interval.
    fn interval_vertex_mask(&self, first: usize, last: usize) -> Result<u64> {
        let mut mask = 0u64;
        for e in self.interval_boundary(first, last)? {
            mask |= 1 << self.edges[e].a;
            mask |= 1 << self.edges[e].b;
        }
        Ok(mask)
    }

    /// Product of the boundary-cycle edge weights of an interval.
    pub fn cycle_weight<S: WeightScalar>(&self, first: usize, last: usize) -> Result<S> {
        let mut w = S::one();
        for e in self.interval_boundary(first, last)? {
            w = w.mul(&self.edge_weight::<S>(e));
        }
        Ok(w)
    }

    /// Deterministic DOT rendering: corner vertices with grid positions,
    /// weighted edges, and one cluster per tile whose node carries the μ
    /// labels as attributes.
    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            GraphKind::Torus(s) => format!("torus_{}_{}", s.p(), s.q()),
            GraphKind::Annulus(n) => format!("annulus_{n}"),
        };
        let mut out = format!("graph snake_{name} {{\n  node [shape=point];\n");
        for (i, &(x, y)) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [pos=\"{x},{y}!\"];\n"));
        }
        for e in &self.edges {
            let label = e.weight.map(|w| w.name()).unwrap_or("1");
            out.push_str(&format!("  v{} -- v{} [label=\"{label}\"];\n", e.a, e.b));
        }
        for (i, t) in self.tiles.iter().enumerate() {
            out.push_str(&format!(
                "  subgraph cluster_tile_{k} {{\n    label=\"tile {k}: {lab}\";\n    t{k} [shape=plaintext, label=\"{ll} | {ur}\", mu_lower_left=\"{ll}\", mu_upper_right=\"{ur}\", pos=\"{x}.5,{y}.5!\"];\n  }}\n",
                k = i + 1,
                lab = t.label.render(),
                ll = t.lower_left.name(),
                ur = t.upper_right.name(),
                x = t.position.0,
                y = t.position.1,
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Deterministic JSON description: family, tiles with μ labels,
    /// vertices, and weighted edges.
    pub fn to_json(&self) -> serde_json::Value {
        let family = match self.kind {
            GraphKind::Torus(s) => serde_json::json!({
                "family": "torus", "p": s.p(), "q": s.q(),
            }),
            GraphKind::Annulus(n) => serde_json::json!({
                "family": "annulus", "n": n,
            }),
        };
        let tiles: Vec<serde_json::Value> = self
            .tiles
            .iter()
            .map(|t| {
                serde_json::json!({
                    "position": [t.position.0, t.position.1],
                    "label": t.label.render(),
                    "mu_lower_left": t.lower_left.name(),
                    "mu_upper_right": t.upper_right.name(),
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                serde_json::json!({
                    "id": id,
                    "ends": [e.a, e.b],
                    "weight": e.weight.map(|w| w.name()),
                })
            })
            .collect();
        let mut obj = family;
        obj["tiles"] = serde_json::Value::Array(tiles);
        obj["vertices"] = serde_json::json!(self.vertices);
        obj["edges"] = serde_json::Value::Array(edges);
        obj
    }
}

/// Number (unit mode) or weighted sum (Laurent mode) of perfect matchings.
pub fn count_matchings<S: WeightScalar>(g: &SnakeGraph) -> Result<S> {
    let full = g.full_mask()?;
    let mut memo = HashMap::new();
    Ok(g.matching_sum(full, &mut memo))
}

/// Covers whose unique cycle is the boundary of tiles first..=last:
/// matchings of the graph minus the cycle's vertices (remaining edges are
/// doubled, each contributing its weight once under the square-root
/// convention).
pub fn single_cycle_covers<S: WeightScalar>(
    g: &SnakeGraph,
    first: usize,
    last: usize,
) -> Result<S> {
    let full = g.full_mask()?;
    let cycle = g.interval_vertex_mask(first, last)?;
    let mut memo = HashMap::new();
    Ok(g.matching_sum(full & !cycle, &mut memo))
}

/// Sign of an interval cycle on a torus snake graph, from its endpoint
/// tile labels: 0 for even tile counts (the μ product repeats a
/// generator), +1 for X..X, Y..Y, Z..Z, −1 for X..Y and Y..X; a Z
/// endpoint paired with a non-Z endpoint also gives 0 (it cannot occur
/// on odd intervals, where endpoints share parity).
pub fn cycle_sign_torus(g: &SnakeGraph, first: usize, last: usize) -> Result<i64> {
    g.check_interval(first, last)?;
    if (last - first + 1) % 2 == 0 {
        return Ok(0);
    }
    let arc = |t: usize| -> Result<ArcLabel> {
        match g.tiles[t - 1].label {
            TileLabel::Arc(a) => Ok(a),
            TileLabel::Cyclic(_) => Err(Error::Unsupported(
                "cycle signs by arc label apply to torus graphs only".into(),
            )),
        }
    };
    let (a, b) = (arc(first)?, arc(last)?);
    Ok(match (a, b) {
        (x, y) if x == y => 1,
        (ArcLabel::X, ArcLabel::Y) | (ArcLabel::Y, ArcLabel::X) => -1,
        _ => 0,
    })
}

/// The positive-ordering sign table for the products σ_j·θ_k of a slope.
///
/// Built from the upper Christoffel word: Σ_x collects the positions of
/// non-initial 1s, Θ_x = Σ_x − 1, and the sign of σ_j θ_k depends on which
/// of j, k are exceptional.
#[derive(Clone, Debug)]
pub struct PositiveOrdering {
    pub sigma_x: BTreeSet<usize>,
    pub theta_x: BTreeSet<usize>,
}

impl PositiveOrdering {
    /// Sign of the product σ_j θ_k (written σ-first), 1-based indices.
    pub fn sign(&self, j: usize, k: usize) -> i64 {
        let js = self.sigma_x.contains(&j);
        let kt = self.theta_x.contains(&k);
        match (js, kt) {
            (false, false) | (true, true) => 1,
            _ => {
                if j <= k {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Construct the positive-ordering sign table of a slope.
pub fn positive_ordering_oracle(s: Slope) -> PositiveOrdering {
    let w = upper_christoffel(s);
    let sigma_x: BTreeSet<usize> = (2..=w.bits.len())
        .filter(|&i| w.bits[i - 1] == 1)
        .collect();
    let theta_x = sigma_x.iter().map(|&i| i - 1).collect();
    PositiveOrdering { sigma_x, theta_x }
}

/// The (j, k) indices of the μ product σ_j θ_k picked up by the boundary
/// cycle of torus tiles first..=last (odd tile count): the lower-left
/// μ-invariant of the first tile and the upper-right one of the last.
pub fn torus_interval_pair(first: usize, last: usize) -> (usize, usize) {
    if first % 2 == 1 {
        ((first + 1) / 2, (last + 1) / 2)
    } else {
        (last / 2 + 1, first / 2)
    }
}

/// One odd-interval cycle's contribution to a torus soul.
#[derive(Clone, Debug)]
pub struct CycleContribution<S: Scalar> {
    /// 1-based inclusive tile interval.
    pub interval: (usize, usize),
    /// Positive-ordering sign of the cycle's μ pair.
    pub sign: i64,
    /// Number (or weighted sum) of covers containing this cycle.
    pub covers: S,
    /// Square root of the cycle's edge-weight product (1 in unit mode).
    pub weight_sqrt: S,
}

/// All odd-interval cycle contributions of a torus slope, with the sign
/// table cross-checked against the endpoint-label rule on every interval.
pub fn torus_cycle_contributions<S: WeightScalar>(s: Slope) -> Result<Vec<CycleContribution<S>>> {
    let g = build_torus_snake(s);
    let table = positive_ordering_oracle(s);
    let full = g.full_mask()?;
    let mut memo: HashMap<u64, S> = HashMap::new();
    let t = g.tile_count();
    let mut out = Vec::new();
    for first in 1..=t {
        for last in (first..=t).step_by(2) {
            let (j, k) = torus_interval_pair(first, last);
            let sign = table.sign(j, k);
            let rule = cycle_sign_torus(&g, first, last)?;
            assert_eq!(
                sign, rule,
                "positive-ordering table disagrees with the endpoint rule on [{first},{last}] of {s}"
            );
            let cycle = g.interval_vertex_mask(first, last)?;
            let covers = g.matching_sum(full & !cycle, &mut memo);
            let weight_sqrt = g.cycle_weight::<S>(first, last)?.monomial_sqrt()?;
            out.push(CycleContribution {
                interval: (first, last),
                sign,
                covers,
                weight_sqrt,
            });
        }
    }
    Ok(out)
}

/// Super Markov value of a slope by signed double-dimer enumeration:
/// body = matchings, soul = Σ sign · √wt(cycle) · covers over odd
/// intervals; in weighted mode the total is normalized by the crossing
/// monomial (the product of the slope's snake-word arc variables).
pub fn sm_via_dimers<S: WeightScalar>(s: Slope) -> Result<GrassmannElement<S>> {
    let g = build_torus_snake(s);
    let ctx = AlgebraContext::torus();
    let body = count_matchings::<S>(&g)?;
    let mut soul = S::zero();
    for c in torus_cycle_contributions::<S>(s)? {
        if c.sign == 0 {
            continue;
        }
        let term = c.weight_sqrt.mul(&c.covers);
        soul = if c.sign > 0 {
            soul.add(&term)
        } else {
            soul.sub(&term)
        };
    }
    let raw = GrassmannElement::from_scalar(&ctx, body)
        .add(&GrassmannElement::<S>::sigma_theta().scale(&soul));
    let mut norm = S::one();
    for a in snake_word(s) {
        norm = norm.mul(&S::lambda(a.name()));
    }
    Ok(raw.scale(&norm.inv()?))
}

/// Soul word of an annulus cycle, in the printed display order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AnnulusWord {
    Sigma3Theta1,
    Theta2Theta1,
    Sigma3Theta2,
}

/// Contribution rule for an annulus interval cycle, keyed by the endpoint
/// tile labels: (sign, word) of the μ product it carries, or None when
/// the product vanishes by generator repetition.
fn annulus_pair_rule(first: u8, last: u8) -> Option<(i64, AnnulusWord)> {
    match (first, last) {
        (1, 1) | (2, 3) => Some((1, AnnulusWord::Sigma3Theta1)),
        (2, 2) => Some((1, AnnulusWord::Theta2Theta1)),
        (3, 1) => Some((-1, AnnulusWord::Theta2Theta1)),
        (3, 3) | (1, 2) => Some((1, AnnulusWord::Sigma3Theta2)),
        (1, 3) | (2, 1) | (3, 2) => None,
        _ => unreachable!("annulus labels cycle 1..3"),
    }
}

/// Super λ-length of the annulus arc n by signed double-dimer enumeration
/// on the n-th annulus snake graph: body = matchings, soul = Σ over all
/// tile intervals of the endpoint rule's sign times the covers containing
/// that cycle. Lives in the algebra on θ1, θ2, σ3.
pub fn annulus_via_dimers(n: u32) -> Result<GrassmannElement<Rational>> {
    let g = build_annulus_snake(n)?;
    let ctx = AlgebraContext::annulus(2)?;
    let th1 = GrassmannElement::<Rational>::generator_named(&ctx, "theta1")?;
    let th2 = GrassmannElement::<Rational>::generator_named(&ctx, "theta2")?;
    let s3 = GrassmannElement::<Rational>::generator_named(&ctx, "sigma3")?;
    let word = |w: AnnulusWord| match w {
        AnnulusWord::Sigma3Theta1 => s3.mul(&th1),
        AnnulusWord::Theta2Theta1 => th2.mul(&th1),
        AnnulusWord::Sigma3Theta2 => s3.mul(&th2),
    };
    let full = g.full_mask()?;
    let mut memo: HashMap<u64, Rational> = HashMap::new();
    let body = g.matching_sum::<Rational>(full, &mut memo);
    let mut acc = GrassmannElement::from_scalar(&ctx, body);
    let label = |t: usize| match g.tiles[t - 1].label {
        TileLabel::Cyclic(k) => k,
        TileLabel::Arc(_) => unreachable!("annulus graphs carry cyclic labels"),
    };
    let t = g.tile_count();
    for first in 1..=t {
        for last in first..=t {
            if let Some((sign, w)) = annulus_pair_rule(label(first), label(last)) {
                let cycle = g.interval_vertex_mask(first, last)?;
                let covers = g.matching_sum::<Rational>(full & !cycle, &mut memo);
                let coeff = if sign > 0 { covers } else { -covers };
                acc = acc.add(&word(w).scale(&coeff));
            }
        }
    }
    Ok(acc)
}

/// A double dimer cover: per-edge multiplicities summing to 2 at every
/// vertex, with the multiplicity-1 edges decomposed into boundary cycles
/// of tile intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDimerCover {
    /// Multiplicity of each edge, indexed by edge id.
    pub multiplicities: Vec<u8>,
    /// Tile intervals (1-based, inclusive) whose boundaries the
    /// multiplicity-1 edges form, in ascending order.
    pub cycles: Vec<(usize, usize)>,
}

impl DoubleDimerCover {
    /// JSON dump: `{"doubled": [edge ids], "cycles": [[first, last], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let doubled: Vec<usize> = self
            .multiplicities
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m == 2)
            .map(|(i, _)| i)
            .collect();
        serde_json::json!({
            "doubled": doubled,
            "cycles": self.cycles,
        })
    }
}

/// Maximum tile count accepted by the brute-force cover enumeration.
pub const BRUTE_FORCE_TILE_LIMIT: usize = 8;

/// Exhaustively enumerate all double dimer covers by assigning every edge
/// a multiplicity in {0,1,2} under the degree-2 constraint, then decompose
/// the multiplicity-1 edges into interval-boundary cycles.
pub fn brute_force_covers(g: &SnakeGraph) -> Result<Vec<DoubleDimerCover>> {
    if g.tile_count() > BRUTE_FORCE_TILE_LIMIT {
        return Err(Error::SizeLimit(g.tile_count(), BRUTE_FORCE_TILE_LIMIT));
    }
    let nv = g.vertices.len();
    let ne = g.edges.len();
    // Remaining unassigned incident edges per vertex, for pruning.
    let mut remaining: Vec<u8> = vec![0; nv];
    for e in &g.edges {
        remaining[e.a] += 1;
        remaining[e.b] += 1;
    }
    let mut sums: Vec<u8> = vec![0; nv];
    let mut mults: Vec<u8> = vec![0; ne];
    let mut covers = Vec::new();
    // Precompute every interval boundary for cycle recognition.
    let mut boundaries: HashMap<BTreeSet<usize>, (usize, usize)> = HashMap::new();
    for first in 1..=g.tile_count() {
        for last in first..=g.tile_count() {
            let b: BTreeSet<usize> = g.interval_boundary(first, last)?.into_iter().collect();
            boundaries.insert(b, (first, last));
        }
    }

    fn feasible(v: usize, sums: &[u8], remaining: &[u8]) -> bool {
        sums[v] <= 2 && u32::from(sums[v]) + 2 * u32::from(remaining[v]) >= 2
    }

    fn recurse(
        g: &SnakeGraph,
        e: usize,
        sums: &mut [u8],
        remaining: &mut [u8],
        mults: &mut [u8],
        boundaries: &HashMap<BTreeSet<usize>, (usize, usize)>,
        covers: &mut Vec<DoubleDimerCover>,
    ) {
        if e == g.edges.len() {
            if sums.iter().all(|&s| s == 2) {
                covers.push(finish_cover(g, mults, boundaries));
            }
            return;
        }
        let (a, b) = (g.edges[e].a, g.edges[e].b);
        remaining[a] -= 1;
        remaining[b] -= 1;
        for m in 0..=2u8 {
            sums[a] += m;
            sums[b] += m;
            let ok = feasible(a, sums, remaining)
                && feasible(b, sums, remaining)
                && (remaining[a] > 0 || sums[a] == 2)
                && (remaining[b] > 0 || sums[b] == 2);
            if ok {
                mults[e] = m;
                recurse(g, e + 1, sums, remaining, mults, boundaries, covers);
            }
            sums[a] -= m;
            sums[b] -= m;
        }
        mults[e] = 0;
        remaining[a] += 1;
        remaining[b] += 1;
    }

    fn finish_cover(
        g: &SnakeGraph,
        mults: &[u8],
        boundaries: &HashMap<BTreeSet<usize>, (usize, usize)>,
    ) -> DoubleDimerCover {
        // Walk the multiplicity-1 edges into vertex-disjoint cycles.
        let mut unused: BTreeSet<usize> = mults
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m == 1)
            .map(|(i, _)| i)
            .collect();
        let mut cycles = Vec::new();
        while let Some(&start) = unused.iter().next() {
            let mut cycle = BTreeSet::new();
            let mut cur = start;
            let mut at = g.edges[start].a;
            loop {
                cycle.insert(cur);
                unused.remove(&cur);
                let e = &g.edges[cur];
                let next_v = if at == e.a { e.b } else { e.a };
                let next = g.adjacency[next_v]
                    .iter()
                    .find(|&&(eid, _)| mults[eid] == 1 && !cycle.contains(&eid));
                match next {
                    Some(&(eid, _)) => {
                        cur = eid;
                        at = next_v;
                    }
                    None => break,
                }
            }
            let interval = boundaries
                .get(&cycle)
                .copied()
                .expect("multiplicity-1 cycle is the boundary of a tile interval");
            cycles.push(interval);
        }
        cycles.sort_unstable();
        for pair in cycles.windows(2) {
            assert!(
                pair[1].0 > pair[0].1 + 1,
                "cycles must be separated by at least one tile"
            );
        }
        DoubleDimerCover {
            multiplicities: mults.to_vec(),
            cycles,
        }
    }

    recurse(
        g,
        0,
        &mut sums,
        &mut remaining,
        &mut mults,
        &boundaries,
        &mut covers,
    );
    Ok(covers)
}

/// Total number of double dimer covers by the structured enumeration:
/// sum over every set of pairwise-separated tile intervals of the
/// matchings of the residual graph.
pub fn structured_cover_total(g: &SnakeGraph) -> Result<Rational> {
    let full = g.full_mask()?;
    let t = g.tile_count();
    let mut memo: HashMap<u64, Rational> = HashMap::new();
    // Interval vertex masks, reused across set choices.
    let mut masks: Vec<(usize, usize, u64)> = Vec::new();
    for first in 1..=t {
        for last in first..=t {
            masks.push((first, last, g.interval_vertex_mask(first, last)?));
        }
    }
    fn recurse(
        g: &SnakeGraph,
        full: u64,
        removed: u64,
        min_start: usize,
        masks: &[(usize, usize, u64)],
        memo: &mut HashMap<u64, Rational>,
    ) -> Rational {
        let mut total = g.matching_sum::<Rational>(full & !removed, memo);
        for &(first, last, mask) in masks {
            if first >= min_start {
                total += recurse(g, full, removed | mask, last + 2, masks, memo);
            }
        }
        total
    }
    Ok(recurse(g, full, 0, 1, &masks, &mut memo))
}

/// Every simple cycle of the graph, as a set of edge ids (each cycle
/// reported once). Intended for small oracle graphs.
pub fn all_simple_cycles(g: &SnakeGraph) -> Vec<BTreeSet<usize>> {
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let nv = g.vertices.len();
    let mut path_edges: Vec<usize> = Vec::new();
    let mut visited = vec![false; nv];

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        g: &SnakeGraph,
        root: usize,
        v: usize,
        visited: &mut [bool],
        path_edges: &mut Vec<usize>,
        found: &mut BTreeSet<BTreeSet<usize>>,
    ) {
        for &(eid, u) in &g.adjacency[v] {
            if Some(&eid) == path_edges.last() {
                continue;
            }
            if u == root && path_edges.len() >= 2 {
                let mut cycle: BTreeSet<usize> = path_edges.iter().copied().collect();
                cycle.insert(eid);
                found.insert(cycle);
            } else if u > root && !visited[u] {
                visited[u] = true;
                path_edges.push(eid);
                dfs(g, root, u, visited, path_edges, found);
                path_edges.pop();
                visited[u] = false;
            }
        }
    }

    for root in 0..nv {
        visited[root] = true;
        dfs(g, root, root, &mut visited, &mut path_edges, &mut found);
        visited[root] = false;
    }
    found.into_iter().collect()
}

/// The tile interval whose boundary equals the given edge set, if any.
pub fn interval_for_cycle(g: &SnakeGraph, cycle: &BTreeSet<usize>) -> Option<(usize, usize)> {
    for first in 1..=g.tile_count() {
        for last in first..=g.tile_count() {
            let b: BTreeSet<usize> = g
                .interval_boundary(first, last)
                .expect("valid interval")
                .into_iter()
                .collect();
            if &b == cycle {
                return Some((first, last));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, LaurentPoly};

    fn slope(p: u32, q: u32) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn unit_sm(p: u32, q: u32) -> GrassmannElement<Rational> {
        sm_via_dimers::<Rational>(slope(p, q)).unwrap()
    }

    fn torus_value(body: i64, soul: i64) -> GrassmannElement<Rational> {
        GrassmannElement::from_int(&AlgebraContext::torus(), body)
            .add(&GrassmannElement::sigma_theta().scale(&rat(soul)))
    }

    #[test]
    fn torus_graph_shapes() {
        let g = build_torus_snake(slope(3, 5));
        assert_eq!(g.tile_count(), 13);
        let labels: String = g
            .tiles()
            .iter()
            .map(|t| t.label.render())
            .collect::<Vec<_>>()
            .join("");
        assert_eq!(labels, "zyzxzyzyzxzyz");

        let g = build_torus_snake(slope(1, 1));
        assert_eq!(g.tile_count(), 1);
        assert_eq!(g.tiles()[0].lower_left, MuGenerator::Sigma(1));
        assert_eq!(g.tiles()[0].upper_right, MuGenerator::Theta(1));

        let g = build_torus_snake(slope(2, 3));
        assert_eq!(g.tile_count(), 7);
        assert_eq!(g.vertices().len(), 16);
    }

    #[test]
    fn matching_counts() {
        assert_eq!(
            count_matchings::<Rational>(&build_torus_snake(slope(2, 3))).unwrap(),
            rat(29)
        );
        assert_eq!(
            count_matchings::<Rational>(&build_torus_snake(slope(1, 2))).unwrap(),
            rat(5)
        );
        assert_eq!(
            count_matchings::<Rational>(&build_torus_snake(slope(1, 1))).unwrap(),
            rat(2)
        );
    }

    #[test]
    fn single_cycle_cover_counts() {
        let g = build_torus_snake(slope(2, 3));
        assert_eq!(single_cycle_covers::<Rational>(&g, 1, 1).unwrap(), rat(12));
        assert_eq!(single_cycle_covers::<Rational>(&g, 3, 5).unwrap(), rat(4));
        assert_eq!(single_cycle_covers::<Rational>(&g, 1, 7).unwrap(), rat(1));
        assert!(matches!(
            single_cycle_covers::<Rational>(&g, 3, 9),
            Err(Error::IntervalOutOfRange(3, 9, 7))
        ));
    }

    #[test]
    fn cycle_signs() {
        let g = build_torus_snake(slope(2, 3));
        assert_eq!(cycle_sign_torus(&g, 1, 1).unwrap(), 1);
        assert_eq!(cycle_sign_torus(&g, 2, 4).unwrap(), -1);
        assert_eq!(cycle_sign_torus(&g, 1, 2).unwrap(), 0);
        assert_eq!(cycle_sign_torus(&g, 2, 2).unwrap(), 1);
    }

    #[test]
    fn positive_ordering_tables() {
        let t = positive_ordering_oracle(slope(3, 5));
        assert_eq!(t.sigma_x, BTreeSet::from([3, 6]));
        assert_eq!(t.theta_x, BTreeSet::from([2, 5]));
        assert_eq!(t.sign(3, 1), -1);
        assert_eq!(t.sign(1, 3), 1);

        let t = positive_ordering_oracle(slope(1, 1));
        assert!(t.sigma_x.is_empty());
        assert_eq!(t.sign(1, 1), 1);
    }

    #[test]
    fn dimer_super_markov_values() {
        assert_eq!(unit_sm(1, 1), torus_value(2, 1));
        assert_eq!(unit_sm(2, 3), torus_value(29, 74));
        assert_eq!(unit_sm(3, 5), torus_value(433, 2032));
    }

    #[test]
    fn two_thirds_tally() {
        let contributions = torus_cycle_contributions::<Rational>(slope(2, 3)).unwrap();
        let mut positives = Vec::new();
        let mut negative_total = rat(0);
        let mut positive_total = rat(0);
        for c in &contributions {
            match c.sign {
                1 => {
                    positive_total += c.covers.clone();
                    positives.push(c.covers.clone());
                }
                -1 => negative_total += c.covers.clone(),
                _ => unreachable!("odd intervals never vanish by label"),
            }
        }
        assert_eq!(positive_total, rat(78));
        assert_eq!(negative_total, rat(4));
        let mut multiset: Vec<Rational> = positives;
        multiset.sort();
        let mut expect: Vec<Rational> = [12, 5, 10, 4, 10, 5, 12, 5, 4, 5, 2, 1, 2, 1]
            .iter()
            .map(|&n| rat(n))
            .collect();
        expect.sort();
        assert_eq!(multiset, expect);
    }

    #[test]
    fn weighted_dimer_values() {
        let m = |c: i64, hx: i64, hy: i64, hz: i64| {
            LaurentPoly::monomial(rat(c), &[("x", 2 * hx), ("y", 2 * hy), ("z", 2 * hz)])
        };
        // SM_{1/1} = (x² + y²)/z + (xy/z)σθ
        let v = sm_via_dimers::<LaurentPoly>(slope(1, 1)).unwrap();
        assert_eq!(v.body(), m(1, 2, 0, -1).add(&m(1, 0, 2, -1)));
        assert_eq!(v.coefficient(0b11), m(1, 1, 1, -1));
        // SM_{1/2}: body x⁴/(yz²) + 2x²y/z² + x²/y + y³/z²,
        //           soul 2x³/z² + x³/(yz) + 2xy²/z² + xy/z
        let v = sm_via_dimers::<LaurentPoly>(slope(1, 2)).unwrap();
        let body = m(1, 4, -1, -2)
            .add(&m(2, 2, 1, -2))
            .add(&m(1, 2, -1, 0))
            .add(&m(1, 0, 3, -2));
        let soul = m(2, 3, 0, -2)
            .add(&m(1, 3, -1, -1))
            .add(&m(2, 1, 2, -2))
            .add(&m(1, 1, 1, -1));
        assert_eq!(v.body(), body);
        assert_eq!(v.coefficient(0b11), soul);
    }

    #[test]
    fn weighted_specializes_to_unit() {
        let mut assign = BTreeMap::new();
        for v in ["x", "y", "z"] {
            assign.insert(v.to_string(), rat(1));
        }
        for s in Slope::all_with_sum_at_most(5) {
            let w = sm_via_dimers::<LaurentPoly>(s).unwrap();
            assert_eq!(w.substitute(&assign).unwrap(), unit_sm(s.p(), s.q()));
        }
    }

    #[test]
    fn annulus_graph_shapes() {
        assert_eq!(annulus_tile_count(4).unwrap(), 1);
        assert_eq!(annulus_tile_count(5).unwrap(), 2);
        assert_eq!(annulus_tile_count(7).unwrap(), 5);
        assert_eq!(annulus_tile_count(8).unwrap(), 7);
        assert!(annulus_tile_count(3).is_err());

        let g = build_annulus_snake(5).unwrap();
        assert_eq!(g.tile_count(), 2);
        let labels: Vec<u8> = g
            .tiles()
            .iter()
            .map(|t| match t.label {
                TileLabel::Cyclic(k) => k,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(labels, vec![1, 2]);
        // The two tiles sit in a row.
        assert_eq!(g.tiles()[0].position, (0, 0));
        assert_eq!(g.tiles()[1].position, (1, 0));

        // Period-six staircase: E, then three N, then three E, ...
        let g = build_annulus_snake(12).unwrap();
        assert_eq!(g.tile_count(), 13);
        let steps: Vec<(i64, i64)> = g
            .tiles()
            .windows(2)
            .map(|w| {
                (
                    w[1].position.0 - w[0].position.0,
                    w[1].position.1 - w[0].position.1,
                )
            })
            .collect();
        let east = (1, 0);
        let north = (0, 1);
        assert_eq!(
            steps,
            vec![
                east, north, north, north, east, east, east, north, north, north, east, east
            ]
        );
    }

    #[test]
    fn annulus_dimer_values() {
        let ctx = AlgebraContext::annulus(2).unwrap();
        let th1 = GrassmannElement::<Rational>::generator_named(&ctx, "theta1").unwrap();
        let th2 = GrassmannElement::<Rational>::generator_named(&ctx, "theta2").unwrap();
        let s3 = GrassmannElement::<Rational>::generator_named(&ctx, "sigma3").unwrap();
        let value = |b: i64, t2t1: i64, s3t1: i64, s3t2: i64| {
            GrassmannElement::from_int(&ctx, b)
                .add(&th2.mul(&th1).scale(&rat(t2t1)))
                .add(&s3.mul(&th1).scale(&rat(s3t1)))
                .add(&s3.mul(&th2).scale(&rat(s3t2)))
        };
        assert_eq!(annulus_via_dimers(4).unwrap(), value(2, 0, 1, 0));
        assert_eq!(annulus_via_dimers(6).unwrap(), value(7, 1, 7, 3));
        assert_eq!(annulus_via_dimers(12).unwrap(), value(362, 342, 969, 760));
    }

    #[test]
    fn brute_force_small_graphs() {
        // Single tile: two doubled matchings plus the 4-cycle.
        let g = build_torus_snake(slope(1, 1));
        let covers = brute_force_covers(&g).unwrap();
        assert_eq!(covers.len(), 3);
        let with_cycle: Vec<_> = covers.iter().filter(|c| !c.cycles.is_empty()).collect();
        assert_eq!(with_cycle.len(), 1);
        assert_eq!(with_cycle[0].cycles, vec![(1, 1)]);

        // Two tiles (annulus n = 5): three doubled matchings plus three
        // single cycles; the adjacent pair [1,1] + [2,2] is impossible
        // because those cycles share the middle edge's vertices.
        let g = build_annulus_snake(5).unwrap();
        let covers = brute_force_covers(&g).unwrap();
        assert_eq!(covers.len(), 6);
        let mut cycle_multiset: Vec<Vec<(usize, usize)>> =
            covers.iter().map(|c| c.cycles.clone()).collect();
        cycle_multiset.sort();
        assert_eq!(
            cycle_multiset,
            vec![
                vec![],
                vec![],
                vec![],
                vec![(1, 1)],
                vec![(1, 2)],
                vec![(2, 2)],
            ]
        );
        assert_eq!(structured_cover_total(&g).unwrap(), rat(6));

        // Three tiles in a row (slope 1/2): five doubled matchings, six
        // single cycles totalling eight, and one two-cycle cover.
        let g = build_torus_snake(slope(1, 2));
        let covers = brute_force_covers(&g).unwrap();
        assert_eq!(covers.len(), 14);
        let two_cycle: Vec<_> = covers.iter().filter(|c| c.cycles.len() == 2).collect();
        assert_eq!(two_cycle.len(), 1);
        assert_eq!(two_cycle[0].cycles, vec![(1, 1), (3, 3)]);
    }

    #[test]
    fn brute_force_matches_structured_enumeration() {
        for s in [slope(1, 2), slope(1, 3), slope(2, 3)] {
            let g = build_torus_snake(s);
            let covers = brute_force_covers(&g).unwrap();
            assert_eq!(rat(covers.len() as i64), structured_cover_total(&g).unwrap());
            // Zero-cycle covers are doubled perfect matchings.
            let doubled = covers.iter().filter(|c| c.cycles.is_empty()).count();
            assert_eq!(rat(doubled as i64), count_matchings(&g).unwrap());
            // Single-cycle covers per interval match the residual counts.
            for first in 1..=g.tile_count() {
                for last in first..=g.tile_count() {
                    let brute = covers
                        .iter()
                        .filter(|c| c.cycles == vec![(first, last)])
                        .count();
                    assert_eq!(
                        rat(brute as i64),
                        single_cycle_covers(&g, first, last).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn every_simple_cycle_is_an_interval_boundary() {
        for g in [
            build_torus_snake(slope(2, 3)),
            build_annulus_snake(8).unwrap(),
        ] {
            let cycles = all_simple_cycles(&g);
            // Exactly one cycle per tile interval.
            assert_eq!(cycles.len(), g.tile_count() * (g.tile_count() + 1) / 2);
            for c in cycles {
                assert!(interval_for_cycle(&g, &c).is_some());
            }
        }
    }

    #[test]
    fn exports_are_deterministic() {
        let g = build_torus_snake(slope(1, 2));
        assert_eq!(g.to_dot(), g.to_dot());
        let json = g.to_json();
        assert_eq!(json["family"], "torus");
        assert_eq!(json["tiles"].as_array().unwrap().len(), 3);
        assert_eq!(json["tiles"][0]["mu_lower_left"], "sigma1");
        let covers = brute_force_covers(&g).unwrap();
        let dump = covers
            .iter()
            .find(|c| !c.cycles.is_empty())
            .unwrap()
            .to_json();
        assert!(dump["cycles"].as_array().is_some());
    }
}
