//! Maps each graph-structural axiom to its polynomial query: a possibly
//! augmented sentence, an engine, and an extraction recipe (shift,
//! coefficient, evaluation point, sign).
//!
//! Sign conventions are applied here, never left to callers. Queries that
//! only need the `u = 0` point of the strict polynomial (acyclicity-style
//! axioms) use the vertical-pass shortcut.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::fol::{
    AxiomKind, CardinalityConstraint, Comparator, Formula, NExpr, PredId, Quantifier, Sentence,
    Var,
};
use crate::normalize::{
    attach_joint_cardinality, close_symmetric_irreflexive, normalize, NormalizedSentence,
};
use crate::poly::{rat, ratio, Poly, Rational, Symbol};
use crate::scp::{compute_nscp, compute_sscp, compute_sscp_u0};
use crate::wcp::{compute_extended_wcp, compute_wcp};

fn usym() -> Symbol {
    Symbol::new("u")
}

fn vsym() -> Symbol {
    Symbol::new("v")
}

/// `p(u - 1)`: the shifted presentation used by coefficient queries.
pub fn shift_u(p: &Poly) -> Poly {
    let u = usym();
    p.subst(&u, &Poly::var(u.clone()).sub(&Poly::one()))
}

fn eval1(p: &Poly, sym: &Symbol, value: Rational) -> Poly {
    let mut point = BTreeMap::new();
    point.insert(sym.clone(), value);
    p.eval(&point)
}

fn expect_rational(p: Poly) -> Rational {
    p.as_constant()
        .expect("axiom query reduces to a rational value")
}

fn sign_of(n: usize) -> Rational {
    if n % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

fn half_pow(k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= ratio(1, 2);
    }
    acc
}

fn base_without_axioms(s: &Sentence) -> Sentence {
    let mut base = s.clone();
    base.axioms.clear();
    base
}

/// Adds the two-sided bipartite encoding: fresh unary block predicates with
/// unit weights partition the domain, and same-block pairs carry no edge of
/// the relation in either direction.
fn bipartite_encoding(s: &Sentence, relation: PredId) -> Sentence {
    let mut out = s.clone();
    let p1 = out.vocab.fresh("__p1", 1);
    let p2 = out.vocab.fresh("__p2", 1);
    out.weights.ensure_len(out.vocab.len());
    let atom1 = |v: Var| Formula::Atom(p1, vec![v]);
    let atom2 = |v: Var| Formula::Atom(p2, vec![v]);
    let partition = Formula::forall(
        Var::X,
        Formula::and(
            Formula::or(atom1(Var::X), atom2(Var::X)),
            Formula::or(Formula::not(atom1(Var::X)), Formula::not(atom2(Var::X))),
        ),
    );
    let same_side = Formula::or(
        Formula::and(atom1(Var::X), atom1(Var::Y)),
        Formula::and(atom2(Var::X), atom2(Var::Y)),
    );
    let no_edge = Formula::and(
        Formula::not(Formula::Atom(relation, vec![Var::X, Var::Y])),
        Formula::not(Formula::Atom(relation, vec![Var::Y, Var::X])),
    );
    let separation = Formula::forall(
        Var::X,
        Formula::forall(Var::Y, Formula::implies(same_side, no_edge)),
    );
    out.core = Formula::and(out.core, Formula::and(partition, separation));
    out
}

/// Restricts the relation to a tournament: a fresh identity relation `Eq`
/// (diagonal forced true, cardinality n) guards the completeness and
/// antisymmetry clauses to distinct pairs.
fn tournament_encoding(s: &Sentence, relation: PredId) -> Sentence {
    let mut out = s.clone();
    let eq = out.vocab.fresh("__eq", 2);
    out.weights.ensure_len(out.vocab.len());
    let rel = |a: Var, b: Var| Formula::Atom(relation, vec![a, b]);
    let eq_atom = |a: Var, b: Var| Formula::Atom(eq, vec![a, b]);
    let diagonal = Formula::forall(
        Var::X,
        Formula::and(
            Formula::not(rel(Var::X, Var::X)),
            eq_atom(Var::X, Var::X),
        ),
    );
    let tournament = Formula::forall(
        Var::X,
        Formula::forall(
            Var::Y,
            Formula::implies(
                Formula::not(eq_atom(Var::X, Var::Y)),
                Formula::and(
                    Formula::or(rel(Var::X, Var::Y), rel(Var::Y, Var::X)),
                    Formula::or(
                        Formula::not(rel(Var::X, Var::Y)),
                        Formula::not(rel(Var::Y, Var::X)),
                    ),
                ),
            ),
        ),
    );
    out.core = Formula::and(out.core, Formula::and(diagonal, tournament));
    out.cardinality.push(CardinalityConstraint {
        pred: eq,
        cmp: Comparator::Eq,
        bound: NExpr::n(),
    });
    out
}

/// Linear orders: a fresh relation is restricted to an acyclic tournament
/// that agrees with the queried relation off the diagonal, while the queried
/// relation carries every self-loop.
fn linear_order_encoding(s: &Sentence, relation: PredId) -> (Sentence, PredId) {
    let mut out = s.clone();
    let fresh_rel = out.vocab.fresh("__lo", 2);
    out.weights.ensure_len(out.vocab.len());
    let mut out = tournament_encoding(&out, fresh_rel);
    let eq = out.vocab.lookup("__eq").expect("tournament adds __eq");
    let reflexive = Formula::forall(Var::X, Formula::Atom(relation, vec![Var::X, Var::X]));
    let agree = Formula::forall(
        Var::X,
        Formula::forall(
            Var::Y,
            Formula::implies(
                Formula::not(Formula::Atom(eq, vec![Var::X, Var::Y])),
                Formula::iff(
                    Formula::Atom(relation, vec![Var::X, Var::Y]),
                    Formula::Atom(fresh_rel, vec![Var::X, Var::Y]),
                ),
            ),
        ),
    );
    out.core = Formula::and(out.core, Formula::and(reflexive, agree));
    (out, fresh_rel)
}

/// Directed-tree encoding: every non-root element has exactly one incoming
/// edge (via the guarded counting template) and the root marker is unique.
fn directed_tree_encoding(s: &Sentence, relation: PredId, root: PredId) -> Sentence {
    let mut out = s.clone();
    let guard = Formula::forall(
        Var::X,
        Formula::implies(
            Formula::not(Formula::Atom(root, vec![Var::X])),
            Formula::Quant(
                Quantifier::ExistsEq(1),
                Var::Y,
                Box::new(Formula::Atom(relation, vec![Var::Y, Var::X])),
            ),
        ),
    );
    out.core = Formula::and(out.core, guard);
    let root_unique = CardinalityConstraint {
        pred: root,
        cmp: Comparator::Eq,
        bound: NExpr::constant(1),
    };
    if !out.cardinality.iter().any(|c| {
        c.pred == root_unique.pred && c.cmp == root_unique.cmp && c.bound == root_unique.bound
    }) {
        out.cardinality.push(root_unique);
    }
    out
}

/// Directed-forest encoding: a fresh marker holds on elements with no
/// incoming edge; non-marked elements get an existential lower bound, and the
/// joint rule `|R| + |marker| = n` forces indegrees into {0, 1}.
fn directed_forest_encoding(
    s: &Sentence,
    relation: PredId,
) -> Result<NormalizedSentence> {
    let mut out = s.clone();
    let marker = out.vocab.fresh("__root", 1);
    out.weights.ensure_len(out.vocab.len());
    let guard = Formula::forall(
        Var::X,
        Formula::implies(
            Formula::not(Formula::Atom(marker, vec![Var::X])),
            Formula::exists(Var::Y, Formula::Atom(relation, vec![Var::Y, Var::X])),
        ),
    );
    out.core = Formula::and(out.core, guard);
    let mut ns = normalize(&out)?;
    attach_joint_cardinality(&mut ns, &[relation, marker], NExpr::n());
    Ok(ns)
}

/// Coefficient sum `sum_k [u^k v^(2(n-k))]` over `k in keep`, on the shifted
/// bivariate polynomial.
fn forest_style_sum(shifted: &Poly, n: usize, keep: impl Fn(usize) -> bool) -> Rational {
    let mut acc = Rational::from_integer(0.into());
    for k in 1..=n {
        if keep(k) {
            acc += shifted.coefficient(&[(usym(), k as u32), (vsym(), 2 * (n - k) as u32)]);
        }
    }
    acc
}

/// Exact weighted model count of the sentence conjoined with its single
/// axiom annotation.
pub fn wfomc_with_axiom(s: &Sentence, n: usize) -> Result<Rational> {
    if n < 1 {
        return Err(Error::DomainTooSmall);
    }
    let [axiom] = s.axioms.as_slice() else {
        return Err(Error::AxiomCount(s.axioms.len()));
    };
    let axiom = axiom.clone();
    s.vocab.require_binary(axiom.relation)?;
    let base = base_without_axioms(s);
    let relation = axiom.relation;
    match axiom.kind {
        AxiomKind::ConnectedK(k) => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let f = compute_wcp(&normalize(&closed)?, n, relation)?;
            Ok(shift_u(&f).coefficient(&[(usym(), k)]))
        }
        AxiomKind::Bipartite => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let encoded = bipartite_encoding(&closed, relation);
            let f = compute_wcp(&normalize(&encoded)?, n, relation)?;
            Ok(expect_rational(eval1(&f, &usym(), ratio(-1, 2))))
        }
        AxiomKind::BipartiteK(k) => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let encoded = bipartite_encoding(&closed, relation);
            let f = compute_wcp(&normalize(&encoded)?, n, relation)?;
            Ok(half_pow(k) * shift_u(&f).coefficient(&[(usym(), k)]))
        }
        AxiomKind::Tree => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let f = compute_extended_wcp(&normalize(&closed)?, n, relation)?;
            Ok(shift_u(&f).coefficient(&[(usym(), 1), (vsym(), 2 * (n as u32 - 1))]))
        }
        AxiomKind::Forest => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let f = compute_extended_wcp(&normalize(&closed)?, n, relation)?;
            Ok(forest_style_sum(&shift_u(&f), n, |_| true))
        }
        AxiomKind::ForestK(k) => {
            let closed = close_symmetric_irreflexive(&base, relation)?;
            let f = compute_extended_wcp(&normalize(&closed)?, n, relation)?;
            Ok(forest_style_sum(&shift_u(&f), n, |i| i == k as usize))
        }
        AxiomKind::PermK(k) => {
            let mut perm = base.clone();
            for (a, b) in [(Var::X, Var::Y), (Var::Y, Var::X)] {
                perm.core = Formula::and(
                    perm.core,
                    Formula::forall(
                        Var::X,
                        Formula::Quant(
                            Quantifier::ExistsEq(1),
                            Var::Y,
                            Box::new(Formula::Atom(relation, vec![a, b])),
                        ),
                    ),
                );
            }
            let f = compute_wcp(&normalize(&perm)?, n, relation)?;
            Ok(shift_u(&f).coefficient(&[(usym(), k)]))
        }
        AxiomKind::Sc => {
            let g = compute_nscp(&normalize(&base)?, n, relation)?;
            let at = shift_u(&eval1(&g, &vsym(), rat(-2)));
            Ok(-at.coefficient(&[(usym(), 1)]))
        }
        AxiomKind::Sct => {
            let encoded = tournament_encoding(&base, relation);
            let g = compute_nscp(&normalize(&encoded)?, n, relation)?;
            let at = shift_u(&eval1(&g, &vsym(), rat(-2)));
            Ok(-at.coefficient(&[(usym(), 1)]))
        }
        AxiomKind::Ac => {
            let g0 = compute_sscp_u0(&normalize(&base)?, n, relation)?;
            Ok(sign_of(n) * expect_rational(eval1(&g0, &vsym(), rat(-2))))
        }
        AxiomKind::AcK(k) => {
            let g = compute_sscp(&normalize(&base)?, n, relation)?;
            let at = shift_u(&eval1(&g, &vsym(), rat(-2)));
            Ok(sign_of(n) * at.coefficient(&[(usym(), k)]))
        }
        AxiomKind::Dt => {
            let root = axiom.root.ok_or_else(|| Error::AxiomParameter {
                kind: "dt".into(),
                what: "a root predicate as its second argument".into(),
            })?;
            s.vocab.require_unary(root)?;
            let encoded = directed_tree_encoding(&base, relation, root);
            let g0 = compute_sscp_u0(&normalize(&encoded)?, n, relation)?;
            Ok(sign_of(n) * expect_rational(eval1(&g0, &vsym(), rat(-2))))
        }
        AxiomKind::Df => {
            let ns = directed_forest_encoding(&base, relation)?;
            let g0 = compute_sscp_u0(&ns, n, relation)?;
            Ok(sign_of(n) * expect_rational(eval1(&g0, &vsym(), rat(-2))))
        }
        AxiomKind::Lo => {
            let (encoded, fresh_rel) = linear_order_encoding(&base, relation);
            let g0 = compute_sscp_u0(&normalize(&encoded)?, n, fresh_rel)?;
            Ok(sign_of(n) * expect_rational(eval1(&g0, &vsym(), rat(-2))))
        }
        AxiomKind::BiAc => {
            let encoded = bipartite_encoding(&base, relation);
            let g = compute_sscp(&normalize(&encoded)?, n, relation)?;
            let at_v = eval1(&g, &vsym(), rat(-2));
            Ok(sign_of(n) * expect_rational(eval1(&at_v, &usym(), ratio(-1, 2))))
        }
        AxiomKind::Polytree => {
            let p = strict_edge_tracking_poly(&base, n, relation)?;
            Ok(sign_of(n)
                * p.coefficient(&[(usym(), 1), (edge_symbol(), n as u32 - 1)]))
        }
        AxiomKind::Polyforest => {
            let p = strict_edge_tracking_poly(&base, n, relation)?;
            let mut acc = Rational::from_integer(0.into());
            for k in 1..=n {
                acc += p.coefficient(&[(usym(), k as u32), (edge_symbol(), (n - k) as u32)]);
            }
            Ok(sign_of(n) * acc)
        }
    }
}

fn edge_symbol() -> Symbol {
    Symbol::new("t")
}

/// The strict polynomial with an extra edge-tracking variable, evaluated at
/// `v = -2` and shifted in `u`: the coefficient of `u^k t^e` is the weighted
/// count of models with an acyclic relation graph of `k` weak components and
/// `e` edges, up to the `(-1)^n` sign applied by the callers.
fn strict_edge_tracking_poly(base: &Sentence, n: usize, relation: PredId) -> Result<Poly> {
    let mut ns = normalize(base)?;
    crate::normalize::attach_edge_symbol(&mut ns, relation, "t", NExpr::n());
    let g = compute_sscp(&ns, n, relation)?;
    Ok(shift_u(&eval1(&g, &vsym(), rat(-2))))
}

/// Evaluates the weak connectedness polynomial at a caller-supplied rational
/// point; with `point = exp(-d) - 1` this realizes soft connected-component
/// penalties. The caller computes the (generally irrational) point
/// externally; the library stays exact.
pub fn soft_cc_evaluate(
    s: &Sentence,
    n: usize,
    relation: PredId,
    point: &Rational,
) -> Result<Rational> {
    let base = base_without_axioms(s);
    let f = compute_wcp(&normalize(&base)?, n, relation)?;
    Ok(expect_rational(eval1(&f, &usym(), point.clone())))
}

/// Convenience used by tests and the CLI: the plain weighted model count of
/// the sentence (no axiom).
pub fn plain_wfomc(s: &Sentence, n: usize) -> Result<Rational> {
    crate::wcp::wfomc_value(&normalize(&base_without_axioms(s))?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_sentence, AxiomAnnotation};

    fn query(text: &str, n: usize) -> Rational {
        let s = parse_sentence(text).unwrap();
        wfomc_with_axiom(&s, n).unwrap()
    }

    #[test]
    fn connected_components_of_simple_graphs() {
        let text = "predicate R/2\nsentence: true\naxiom: connected_1(R)";
        assert_eq!(query(text, 4), rat(38));
        assert_eq!(query(text, 1), rat(1));
    }

    #[test]
    fn bipartite_counts() {
        let text = "predicate R/2\nsentence: true\naxiom: bipartite(R)";
        assert_eq!(query(text, 3), rat(7));
        assert_eq!(query(text, 1), rat(1));
    }

    #[test]
    fn tree_counts() {
        let text = "predicate R/2\nsentence: true\naxiom: tree(R)";
        assert_eq!(query(text, 5), rat(125));
        assert_eq!(query(text, 2), rat(1));
    }

    #[test]
    fn forest_counts() {
        let text = "predicate R/2\nsentence: true\naxiom: forest(R)";
        assert_eq!(query(text, 4), rat(38));
    }

    #[test]
    fn forest_with_two_trees() {
        let text = "predicate R/2\nsentence: true\naxiom: forest_2(R)";
        assert_eq!(query(text, 3), rat(3));
    }

    #[test]
    fn strongly_connected_counts() {
        let text = "predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: sc(R)";
        assert_eq!(query(text, 3), rat(18));
        assert_eq!(query(text, 2), rat(1));
    }

    #[test]
    fn strongly_connected_tournament_counts() {
        let text = "predicate R/2\nsentence: true\naxiom: sct(R)";
        assert_eq!(query(text, 2), rat(0));
        assert_eq!(query(text, 5), rat(544));
    }

    #[test]
    fn acyclic_counts() {
        let text = "predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: ac(R)";
        assert_eq!(query(text, 4), rat(543));
    }

    #[test]
    fn weakly_connected_acyclic_counts() {
        let text = "predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: ac_1(R)";
        assert_eq!(query(text, 5), rat(26430));
    }

    #[test]
    fn directed_tree_fixture_via_explicit_encoding() {
        // the guarded counting clause plus acyclicity counts rooted trees
        let text = "\
predicate E/2, root/1
sentence: forall x. (~root(x) -> exists_eq 1 y. E(y,x))
cardinality: |root| = 1
axiom: ac(E)
";
        assert_eq!(query(text, 5), rat(625));
    }

    #[test]
    fn directed_tree_axiom_kind() {
        let text = "predicate E/2, root/1\nsentence: true\naxiom: dt(E, root)";
        assert_eq!(query(text, 4), rat(64));
    }

    #[test]
    fn directed_forest_axiom_kind() {
        let text = "predicate R/2\nsentence: true\naxiom: df(R)";
        // oracle-verified: (n+1)^(n-1) rooted forests
        assert_eq!(query(text, 1), rat(1));
        assert_eq!(query(text, 2), rat(3));
        assert_eq!(query(text, 3), rat(16));
        assert_eq!(query(text, 4), rat(125));
    }

    #[test]
    fn linear_order_counts_factorials() {
        let text = "predicate R/2\nsentence: true\naxiom: lo(R)";
        assert_eq!(query(text, 4), rat(24));
        let mut expected = 1i64;
        for n in 1..=6 {
            expected *= n as i64;
            assert_eq!(query(text, n), rat(expected), "n={n}");
        }
    }

    #[test]
    fn permutation_cycle_counts_are_stirling_numbers() {
        let text = "predicate R/2\nsentence: true\naxiom: perm_2(R)";
        assert_eq!(query(text, 3), rat(3));
        let text1 = "predicate R/2\nsentence: true\naxiom: perm_1(R)";
        assert_eq!(query(text1, 4), rat(6));
    }

    #[test]
    fn connected_k_sums_to_unconstrained_count() {
        let s = parse_sentence("predicate R/2\nsentence: true").unwrap();
        let r = s.vocab.lookup("R").unwrap();
        let n = 4;
        let closed = close_symmetric_irreflexive(&s, r).unwrap();
        let total = plain_wfomc(&closed, n).unwrap();
        let mut acc = Rational::from_integer(0.into());
        for k in 1..=n {
            let mut q = s.clone();
            q.axioms.push(AxiomAnnotation {
                kind: AxiomKind::ConnectedK(k as u32),
                relation: r,
                root: None,
            });
            acc += wfomc_with_axiom(&q, n).unwrap();
        }
        assert_eq!(acc, total);
    }

    #[test]
    fn soft_evaluation_examples() {
        let s = parse_sentence(
            "sentence: forall x. ~R(x,x)\nsentence: forall x. forall y. (R(x,y) -> R(y,x))",
        )
        .unwrap();
        let r = s.vocab.lookup("R").unwrap();
        // at 0 the evaluation is the plain count
        assert_eq!(
            soft_cc_evaluate(&s, 2, r, &rat(0)).unwrap(),
            plain_wfomc(&s, 2).unwrap()
        );
        // at 1 each model counts 2^components: 2*1 + 4*1 = 6 on two vertices
        assert_eq!(soft_cc_evaluate(&s, 2, r, &rat(1)).unwrap(), rat(6));
    }

    #[test]
    fn axiom_annotation_count_is_validated() {
        let s = parse_sentence("predicate R/2\nsentence: true").unwrap();
        assert!(matches!(wfomc_with_axiom(&s, 2), Err(Error::AxiomCount(0))));
    }
}
