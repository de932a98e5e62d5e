//! Brute-force ground truth: enumerates every interpretation at small domain
//! sizes, checks satisfaction directly (including counting quantifiers,
//! cardinality constraints, and evidence), and computes the definitional
//! polynomial sums the engines must reproduce.
//!
//! The oracle exists to validate, not to compute; instances beyond the
//! ground-atom guard are rejected loudly.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fol::{AxiomAnnotation, AxiomKind, PredId, Sentence};
use crate::poly::{rat, Poly, Rational, Symbol};

/// Hard limit on the number of ground atoms the oracle will enumerate.
pub const MAX_GROUND_ATOMS: usize = 30;

/// A total truth assignment to every ground atom over `[n]`, packed into a
/// bitmask laid out by [`Oracle`]'s schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PossibleWorld {
    pub bits: u64,
}

/// Enumerator for the models of a sentence over a fixed domain size.
pub struct Oracle<'a> {
    sentence: &'a Sentence,
    n: usize,
    offsets: Vec<usize>,
    atom_counts: Vec<usize>,
    total_bits: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(sentence: &'a Sentence, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::DomainTooSmall);
        }
        let mut offsets = Vec::new();
        let mut atom_counts = Vec::new();
        let mut total = 0usize;
        for p in sentence.vocab.ids() {
            offsets.push(total);
            let count = match sentence.vocab.arity(p) {
                1 => n,
                2 => n * n,
                a => unreachable!("arity {a} is excluded at declaration"),
            };
            atom_counts.push(count);
            total += count;
        }
        if total > MAX_GROUND_ATOMS {
            return Err(Error::OracleTooLarge(total, MAX_GROUND_ATOMS));
        }
        for lit in &sentence.evidence {
            if lit.element > n {
                return Err(Error::EvidenceOutOfRange(lit.element, n));
            }
        }
        Ok(Oracle {
            sentence,
            n,
            offsets,
            atom_counts,
            total_bits: total,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    fn bit(&self, pred: PredId, args: &[usize]) -> usize {
        let base = self.offsets[pred.0];
        match args {
            [e] => base + (e - 1),
            [a, b] => base + (a - 1) * self.n + (b - 1),
            _ => unreachable!("arity is 1 or 2"),
        }
    }

    pub fn holds(&self, world: &PossibleWorld, pred: PredId, args: &[usize]) -> bool {
        world.bits >> self.bit(pred, args) & 1 == 1
    }

    fn weight(&self, bits: u64) -> Result<Rational> {
        let mut acc = Rational::one();
        for p in self.sentence.vocab.ids() {
            let (pos, neg) = self.sentence.weights.get(p)?;
            let count = self.atom_counts[p.0];
            let range = bits >> self.offsets[p.0] & mask_of(count);
            let ones = range.count_ones() as usize;
            acc *= rat_pow(pos, ones) * rat_pow(neg, count - ones);
        }
        Ok(acc)
    }

    fn satisfies(&self, bits: u64) -> bool {
        for lit in &self.sentence.evidence {
            let b = self.bit(lit.pred, &[lit.element]);
            if (bits >> b & 1 == 1) != lit.sign {
                return false;
            }
        }
        for c in &self.sentence.cardinality {
            let count = self.atom_counts[c.pred.0];
            let range = bits >> self.offsets[c.pred.0] & mask_of(count);
            if !c.cmp.holds(range.count_ones() as i64, c.bound.eval(self.n)) {
                return false;
            }
        }
        self.sentence
            .core
            .eval_closed(self.n, &|pred, args| bits >> self.bit(pred, args) & 1 == 1)
    }

    /// Streams every model together with its exact weight.
    pub fn models(&self) -> impl Iterator<Item = (PossibleWorld, Rational)> + '_ {
        let end = 1u64 << self.total_bits;
        (0..end).filter_map(move |bits| {
            if self.satisfies(bits) {
                let w = self.weight(bits).expect("weight map is total");
                Some((PossibleWorld { bits }, w))
            } else {
                None
            }
        })
    }

    /// The interpretation of a binary relation in a world, as a digraph.
    pub fn graph_of(&self, world: &PossibleWorld, relation: PredId) -> DirectedGraph {
        let mut adj = vec![vec![false; self.n]; self.n];
        for (a, row) in adj.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = self.holds(world, relation, &[a + 1, b + 1]);
            }
        }
        DirectedGraph { n: self.n, adj }
    }

    fn unary_column(&self, world: &PossibleWorld, pred: PredId) -> Vec<bool> {
        (1..=self.n)
            .map(|e| self.holds(world, pred, &[e]))
            .collect()
    }
}

fn mask_of(count: usize) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

fn rat_pow(base: &Rational, mut k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Collects all models with weights; guarded by [`MAX_GROUND_ATOMS`].
pub fn enumerate_models(s: &Sentence, n: usize) -> Result<Vec<(PossibleWorld, Rational)>> {
    let oracle = Oracle::new(s, n)?;
    Ok(oracle.models().collect())
}

/// The weighted model count by direct summation.
pub fn wfomc_by_enumeration(s: &Sentence, n: usize) -> Result<Rational> {
    let oracle = Oracle::new(s, n)?;
    let mut acc = Rational::zero();
    for (_, w) in oracle.models() {
        acc += w;
    }
    Ok(acc)
}

/// Definitional weak connectedness polynomial: the sum of
/// `W(model) * (u+1)^cc` over all models, where `cc` counts weakly connected
/// components of the relation's graph.
pub fn wcp_by_enumeration(s: &Sentence, n: usize, relation: PredId) -> Result<Poly> {
    s.vocab.require_binary(relation)?;
    let oracle = Oracle::new(s, n)?;
    let u = Poly::var(Symbol::new("u"));
    let u1 = u.add(&Poly::one());
    let upow: Vec<Poly> = (0..=n).map(|k| u1.pow(k as u32)).collect();
    let mut acc = Poly::zero();
    for (world, w) in oracle.models() {
        let g = oracle.graph_of(&world, relation);
        acc = acc.add(&upow[g.weak_components()].scale(&w));
    }
    Ok(acc)
}

/// Definitional extended WCP: additionally weighs each model by `v` to the
/// number of positive ground literals of the relation (twice the undirected
/// edge count when the relation is symmetric and irreflexive).
pub fn extended_wcp_by_enumeration(s: &Sentence, n: usize, relation: PredId) -> Result<Poly> {
    s.vocab.require_binary(relation)?;
    let oracle = Oracle::new(s, n)?;
    let u1 = Poly::var(Symbol::new("u")).add(&Poly::one());
    let v = Poly::var(Symbol::new("v"));
    let upow: Vec<Poly> = (0..=n).map(|k| u1.pow(k as u32)).collect();
    let mut acc = Poly::zero();
    for (world, w) in oracle.models() {
        let g = oracle.graph_of(&world, relation);
        let term = upow[g.weak_components()]
            .mul(&v.pow(g.positive_literals() as u32))
            .scale(&w);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Definitional strict/non-strict connectedness polynomial: each model is
/// weighed by its directed chromatic polynomial evaluated at `v + 1`,
/// recovered from brute-force coloring counts by interpolation and verified
/// at three holdout points.
pub fn scp_by_enumeration(s: &Sentence, n: usize, relation: PredId, strict: bool) -> Result<Poly> {
    s.vocab.require_binary(relation)?;
    let oracle = Oracle::new(s, n)?;
    let u1 = Poly::var(Symbol::new("u")).add(&Poly::one());
    let upow: Vec<Poly> = (0..=n).map(|k| u1.pow(k as u32)).collect();
    let mut chi_cache: HashMap<Vec<Vec<bool>>, Poly> = HashMap::new();
    let mut acc = Poly::zero();
    for (world, w) in oracle.models() {
        let g = oracle.graph_of(&world, relation);
        let chi_at_v1 = match chi_cache.get(&g.adj) {
            Some(p) => p.clone(),
            None => {
                let p = chromatic_poly_in_v(&g, strict)?;
                chi_cache.insert(g.adj.clone(), p.clone());
                p
            }
        };
        acc = acc.add(&upow[g.weak_components()].mul(&chi_at_v1).scale(&w));
    }
    Ok(acc)
}

/// The strict or non-strict directed chromatic polynomial of a digraph, as a
/// polynomial in the color count `x`, from brute-force coloring counts at
/// `x = 1..=n+1` plus interpolation.
pub fn chromatic_poly(g: &DirectedGraph, strict: bool) -> Result<Poly> {
    let x = Symbol::new("x");
    let points: Vec<(Rational, Poly)> = (1..=g.n as i64 + 1)
        .map(|k| (rat(k), Poly::from_int(g.coloring_count(k as usize, strict))))
        .collect();
    let poly = crate::poly::interpolate_1d(&points, &x, g.n)?;
    for k in (g.n as i64 + 2)..=(g.n as i64 + 4) {
        let mut point = std::collections::BTreeMap::new();
        point.insert(x.clone(), rat(k));
        let predicted = poly.eval_constant(&point)?;
        if predicted != rat(g.coloring_count(k as usize, strict)) {
            return Err(Error::DegreeExceeded);
        }
    }
    Ok(poly)
}

fn chromatic_poly_in_v(g: &DirectedGraph, strict: bool) -> Result<Poly> {
    let x = Symbol::new("x");
    let v1 = Poly::var(Symbol::new("v")).add(&Poly::one());
    Ok(chromatic_poly(g, strict)?.subst(&x, &v1))
}

/// Number of colorings with colors `1..=i` using every color at least once.
pub fn surjective_coloring_count(g: &DirectedGraph, colors: usize, strict: bool) -> i64 {
    g.colorings(colors, strict, true)
}

/// A digraph over `n` vertices; loops permitted unless a checked property
/// forbids them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = DirectedGraph::new(n);
        for &(a, b) in edges {
            g.adj[a][b] = true;
        }
        g
    }

    pub fn positive_literals(&self) -> usize {
        self.adj.iter().flatten().filter(|&&b| b).count()
    }

    /// Unordered pairs of distinct vertices adjacent in either direction.
    pub fn undirected_edges(&self) -> usize {
        let mut count = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adj[a][b] || self.adj[b][a] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn weak_components(&self) -> usize {
        let mut repr: Vec<usize> = (0..self.n).collect();
        fn find(repr: &mut Vec<usize>, a: usize) -> usize {
            if repr[a] != a {
                let r = find(repr, repr[a]);
                repr[a] = r;
            }
            repr[a]
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if self.adj[a][b] {
                    let (ra, rb) = (find(&mut repr, a), find(&mut repr, b));
                    repr[ra] = rb;
                }
            }
        }
        (0..self.n).filter(|&a| find(&mut repr, a) == a).count()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.adj[a][b] == self.adj[b][a]))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|a| !self.adj[a][a])
    }

    pub fn is_acyclic(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.n];
        fn dfs(g: &DirectedGraph, a: usize, state: &mut Vec<u8>) -> bool {
            state[a] = 1;
            for b in 0..g.n {
                if !g.adj[a][b] {
                    continue;
                }
                if state[b] == 1 || (state[b] == 0 && !dfs(g, b, state)) {
                    return false;
                }
            }
            state[a] = 2;
            true
        }
        for a in 0..self.n {
            if state[a] == 0 && !dfs(self, a, &mut state) {
                return false;
            }
        }
        true
    }

    pub fn is_strongly_connected(&self) -> bool {
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(a) = stack.pop() {
                for b in 0..self.n {
                    let edge = if forward { self.adj[a][b] } else { self.adj[b][a] };
                    if edge && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen.iter().filter(|&&s| s).count()
        };
        reach(true) == self.n && reach(false) == self.n
    }

    pub fn underlying_bipartite(&self) -> bool {
        let mut color = vec![-1i8; self.n];
        for start in 0..self.n {
            if color[start] != -1 {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for b in 0..self.n {
                    if a != b && (self.adj[a][b] || self.adj[b][a]) {
                        if color[b] == -1 {
                            color[b] = 1 - color[a];
                            stack.push(b);
                        } else if color[b] == color[a] {
                            return false;
                        }
                    }
                }
                if self.adj[a][a] {
                    return false;
                }
            }
        }
        true
    }

    pub fn underlying_connected(&self) -> bool {
        self.weak_components() == 1
    }

    /// The simple undirected projection is acyclic.
    pub fn underlying_forest(&self) -> bool {
        self.is_irreflexive() && self.undirected_edges() + self.weak_components() == self.n
    }

    pub fn underlying_tree(&self) -> bool {
        self.underlying_forest() && self.underlying_connected()
    }

    pub fn indegree(&self, b: usize) -> usize {
        (0..self.n).filter(|&a| self.adj[a][b]).count()
    }

    pub fn outdegree(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.adj[a][b]).count()
    }

    pub fn is_tournament(&self) -> bool {
        self.is_irreflexive()
            && (0..self.n)
                .all(|a| (a + 1..self.n).all(|b| self.adj[a][b] != self.adj[b][a]))
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|v| self.indegree(v) == 1 && self.outdegree(v) == 1)
    }

    pub fn is_linear_order(&self) -> bool {
        if !(0..self.n).all(|a| self.adj[a][a]) {
            return false;
        }
        let mut off_diagonal = self.clone();
        for a in 0..self.n {
            off_diagonal.adj[a][a] = false;
        }
        off_diagonal.is_tournament() && off_diagonal.is_acyclic()
    }

    fn colorings(&self, colors: usize, strict: bool, surjective: bool) -> i64 {
        let mut count = 0i64;
        let mut assignment = vec![0usize; self.n];
        loop {
            let ok = (0..self.n).all(|a| {
                (0..self.n).all(|b| {
                    !self.adj[a][b]
                        || if strict {
                            assignment[a] < assignment[b]
                        } else {
                            assignment[a] <= assignment[b]
                        }
                })
            });
            if ok {
                let used_all = !surjective
                    || (0..colors).all(|c| assignment.contains(&c));
                if used_all {
                    count += 1;
                }
            }
            // odometer over colors^n
            let mut i = 0;
            loop {
                if i == self.n {
                    return count;
                }
                assignment[i] += 1;
                if assignment[i] < colors {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    pub fn coloring_count(&self, colors: usize, strict: bool) -> i64 {
        if colors == 0 {
            return if self.n == 0 { 1 } else { 0 };
        }
        self.colorings(colors, strict, false)
    }
}

fn multigraph_components(edges: &[(usize, usize)], n: usize) -> usize {
    let mut repr: Vec<usize> = (0..n).collect();
    fn find(repr: &mut Vec<usize>, a: usize) -> usize {
        if repr[a] != a {
            let r = find(repr, repr[a]);
            repr[a] = r;
        }
        repr[a]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut repr, a), find(&mut repr, b));
        repr[ra] = rb;
    }
    (0..n).filter(|&v| find(&mut repr, v) == v).count()
}

/// Tutte polynomial of an undirected multigraph by deletion-contraction;
/// exponential, for small ground-truth instances only.
pub fn tutte_by_deletion_contraction(n: usize, edges: &[(usize, usize)]) -> Poly {
    fn recurse(n: usize, edges: &[(usize, usize)]) -> Poly {
        let Some((&(a, b), rest)) = edges.split_last() else {
            return Poly::one();
        };
        if a == b {
            return recurse(n, rest).mul(&Poly::var(Symbol::new("y")));
        }
        let bridge =
            multigraph_components(rest, n) > multigraph_components(edges, n);
        let contracted: Vec<(usize, usize)> = rest
            .iter()
            .map(|&(p, q)| {
                let p = if p == b { a } else { p };
                let q = if q == b { a } else { q };
                (p, q)
            })
            .collect();
        if bridge {
            recurse(n, &contracted).mul(&Poly::var(Symbol::new("x")))
        } else {
            recurse(n, rest).add(&recurse(n, &contracted))
        }
    }
    recurse(n, edges)
}

/// Number of edge subsets of size `n - 1` that connect all vertices.
pub fn spanning_tree_count(n: usize, edges: &[(usize, usize)]) -> u64 {
    if n == 0 {
        return 0;
    }
    let m = edges.len();
    let mut count = 0u64;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let subset: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if multigraph_components(&subset, n) == 1 {
            count += 1;
        }
    }
    count
}

/// Number of orientations of the undirected edges that yield a strongly
/// connected digraph.
pub fn strongly_connected_orientation_count(n: usize, edges: &[(usize, usize)]) -> u64 {
    let m = edges.len();
    let mut count = 0u64;
    for mask in 0u32..(1 << m) {
        let mut g = DirectedGraph::new(n);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.adj[a][b] = true;
            } else {
                g.adj[b][a] = true;
            }
        }
        if g.is_strongly_connected() {
            count += 1;
        }
    }
    count
}

/// Direct algorithmic check of the graph property behind an axiom kind;
/// kinds that need a root interpretation take it separately.
pub fn graph_property_check(g: &DirectedGraph, kind: AxiomKind) -> bool {
    let symmetric_simple = g.is_symmetric() && g.is_irreflexive();
    match kind {
        AxiomKind::ConnectedK(k) => symmetric_simple && g.weak_components() == k as usize,
        AxiomKind::Bipartite => symmetric_simple && g.underlying_bipartite(),
        AxiomKind::Tree => {
            symmetric_simple && g.underlying_connected() && g.undirected_edges() == g.n - 1
        }
        AxiomKind::Forest => symmetric_simple && g.underlying_forest(),
        AxiomKind::Sc => g.is_strongly_connected(),
        AxiomKind::Sct => g.is_tournament() && g.is_strongly_connected(),
        AxiomKind::Ac => g.is_acyclic(),
        AxiomKind::AcK(k) => g.is_acyclic() && g.weak_components() == k as usize,
        AxiomKind::Df => g.is_acyclic() && (0..g.n).all(|v| g.indegree(v) <= 1),
        AxiomKind::Lo => g.is_linear_order(),
        AxiomKind::PermK(k) => g.is_permutation() && g.weak_components() == k as usize,
        AxiomKind::BipartiteK(k) => {
            symmetric_simple && g.underlying_bipartite() && g.weak_components() == k as usize
        }
        AxiomKind::ForestK(k) => {
            symmetric_simple && g.underlying_forest() && g.weak_components() == k as usize
        }
        AxiomKind::BiAc => g.is_acyclic() && g.underlying_bipartite(),
        AxiomKind::Polytree => g.is_acyclic() && g.underlying_tree(),
        AxiomKind::Polyforest => g.is_acyclic() && g.underlying_forest(),
        AxiomKind::Dt => unreachable!("directed tree check needs the root interpretation"),
    }
}

fn directed_tree_check(g: &DirectedGraph, root_holds: &[bool]) -> bool {
    let roots: Vec<usize> = (0..g.n).filter(|&v| root_holds[v]).collect();
    let [root] = roots.as_slice() else {
        return false;
    };
    g.is_acyclic()
        && g.indegree(*root) == 0
        && (0..g.n).all(|v| v == *root || g.indegree(v) == 1)
}

/// Ground truth for the axiom layer: the weighted count of models whose
/// relation graph satisfies the axiom's property.
pub fn axiom_count_by_enumeration(
    s: &Sentence,
    axiom: &AxiomAnnotation,
    n: usize,
) -> Result<Rational> {
    let mut base = s.clone();
    base.axioms.clear();
    let oracle = Oracle::new(&base, n)?;
    let mut acc = Rational::zero();
    for (world, w) in oracle.models() {
        let g = oracle.graph_of(&world, axiom.relation);
        let holds = match axiom.kind {
            AxiomKind::Dt => {
                let root = axiom.root.expect("dt axiom carries a root predicate");
                directed_tree_check(&g, &oracle.unary_column(&world, root))
            }
            kind => graph_property_check(&g, kind),
        };
        if holds {
            acc += w;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_sentence;
    use crate::poly::ratio;

    #[test]
    fn weighted_count_of_implication_sentence() {
        // forall x forall y (R(x,y) -> S(y)) with w(R) = 2 counts (3^n + 1)^n
        let text = "predicate R/2, S/1\nweight R = 2, 1\nsentence: forall x. forall y. (R(x,y) -> S(y))";
        let s = parse_sentence(text).unwrap();
        assert_eq!(wfomc_by_enumeration(&s, 1).unwrap(), rat(4));
        assert_eq!(wfomc_by_enumeration(&s, 2).unwrap(), rat(100));
    }

    #[test]
    fn existential_sentence_counts() {
        // forall x exists y R(x,y) has (2^n - 1)^n models
        let s = parse_sentence("forall x. exists y. R(x,y)").unwrap();
        assert_eq!(wfomc_by_enumeration(&s, 2).unwrap(), rat(9));
        assert_eq!(wfomc_by_enumeration(&s, 3).unwrap(), rat(343));
    }

    #[test]
    fn unsatisfiable_sentence_has_no_models() {
        let s = parse_sentence("forall x. (P(x) & ~P(x))").unwrap();
        assert!(enumerate_models(&s, 2).unwrap().is_empty());
    }

    #[test]
    fn oracle_guards_large_instances() {
        let s = parse_sentence("forall x. ~R(x,x)").unwrap();
        assert!(matches!(
            Oracle::new(&s, 6),
            Err(Error::OracleTooLarge(36, MAX_GROUND_ATOMS))
        ));
    }

    #[test]
    fn wcp_of_simple_graphs_matches_table() {
        // shifted f_2(u-1) = u + u^2 for the simple-graph sentence
        let s = parse_sentence(
            "sentence: forall x. ~R(x,x)\nsentence: forall x. forall y. (R(x,y) -> R(y,x))",
        )
        .unwrap();
        let r = s.vocab.lookup("R").unwrap();
        let f = wcp_by_enumeration(&s, 2, r).unwrap();
        let u = Symbol::new("u");
        let shifted = f.subst(&u, &Poly::var(u.clone()).sub(&Poly::one()));
        assert_eq!(shifted.coefficient(&[(u.clone(), 1)]), rat(1));
        assert_eq!(shifted.coefficient(&[(u.clone(), 2)]), rat(1));
        assert_eq!(shifted.coefficient(&[]), rat(0));
    }

    #[test]
    fn nonstrict_scp_of_digraphs_n1() {
        // shifted: u + uv
        let s = parse_sentence("forall x. ~R(x,x)").unwrap();
        let r = s.vocab.lookup("R").unwrap();
        let g = scp_by_enumeration(&s, 1, r, false).unwrap();
        let (u, v) = (Symbol::new("u"), Symbol::new("v"));
        let shifted = g.subst(&u, &Poly::var(u.clone()).sub(&Poly::one()));
        assert_eq!(shifted.coefficient(&[(u.clone(), 1)]), rat(1));
        assert_eq!(shifted.coefficient(&[(u.clone(), 1), (v.clone(), 1)]), rat(1));
        assert_eq!(shifted.num_terms(), 2);
    }

    #[test]
    fn strict_scp_of_digraphs_n3_matches_table_row() {
        let s = parse_sentence("forall x. ~R(x,x)").unwrap();
        let r = s.vocab.lookup("R").unwrap();
        let g = scp_by_enumeration(&s, 3, r, true).unwrap();
        let (u, v) = (Symbol::new("u"), Symbol::new("v"));
        let shifted = g.subst(&u, &Poly::var(u.clone()).sub(&Poly::one()));
        // -uv + 3uv^2 + 4uv^3 + 3u^2v + 6u^2v^2 + 3u^2v^3 + 3u^3v + 3u^3v^2 + u^3v^3 + u^3
        let expect = [
            (1, 1, -1),
            (1, 2, 3),
            (1, 3, 4),
            (2, 1, 3),
            (2, 2, 6),
            (2, 3, 3),
            (3, 1, 3),
            (3, 2, 3),
            (3, 3, 1),
            (3, 0, 1),
        ];
        for (du, dv, c) in expect {
            assert_eq!(
                shifted.coefficient(&[(u.clone(), du), (v.clone(), dv)]),
                rat(c),
                "coefficient of u^{du} v^{dv}"
            );
        }
        assert_eq!(shifted.num_terms(), expect.len());
    }

    #[test]
    fn graph_property_basics() {
        // triangle, undirected
        let tri = DirectedGraph::from_edges(
            3,
            &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)],
        );
        assert!(!graph_property_check(&tri, AxiomKind::Bipartite));
        assert!(graph_property_check(&tri, AxiomKind::ConnectedK(1)));
        // path on 3 vertices is a tree
        let path = DirectedGraph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(graph_property_check(&path, AxiomKind::Tree));
        // directed 3-cycle: strongly connected, not acyclic
        let cycle = DirectedGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(graph_property_check(&cycle, AxiomKind::Sc));
        assert!(!graph_property_check(&cycle, AxiomKind::Ac));
    }

    #[test]
    fn coloring_counts_single_edge() {
        let g = DirectedGraph::from_edges(2, &[(0, 1)]);
        // strict: pairs c0 < c1 among x colors
        assert_eq!(g.coloring_count(3, true), 3);
        assert_eq!(g.coloring_count(3, false), 6);
        let chi = chromatic_poly(&g, true).unwrap();
        let x = Symbol::new("x");
        assert_eq!(chi.coefficient(&[(x.clone(), 2)]), ratio(1, 2));
        assert_eq!(chi.coefficient(&[(x.clone(), 1)]), ratio(-1, 2));
    }

    #[test]
    fn evidence_and_cardinality_filter_models() {
        let text = "\
predicate R/2, S/1
sentence: forall x. forall y. (R(x,y) -> S(y))
cardinality: |R| = 1
evidence: S(1), ~S(2)
";
        let s = parse_sentence(text).unwrap();
        // n = 2: S fixed to {1}; exactly one R literal, and it must target 1
        let models = enumerate_models(&s, 2).unwrap();
        assert_eq!(models.len(), 2);
    }
}
