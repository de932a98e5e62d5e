//! Every axiom kind against the brute-force oracle: the engine-side query
//! must equal the weighted count of models whose relation graph satisfies
//! the axiom's property, exactly.

use liftpoly::axioms::wfomc_with_axiom;
use liftpoly::fol::{parse_sentence, Sentence};
use liftpoly::oracle::axiom_count_by_enumeration;

fn check_kinds(base: &str, axioms: &[&str], max_n: usize) {
    for axiom_line in axioms {
        let text = format!("{base}\naxiom: {axiom_line}\n");
        let s: Sentence = parse_sentence(&text).unwrap();
        for n in 1..=max_n {
            let engine = wfomc_with_axiom(&s, n).unwrap();
            let truth = axiom_count_by_enumeration(&s, &s.axioms[0], n).unwrap();
            assert_eq!(engine, truth, "{axiom_line} at n={n}");
        }
    }
}

#[test]
fn undirected_axioms_on_free_relation() {
    check_kinds(
        "predicate R/2\nsentence: true",
        &[
            "connected_1(R)",
            "connected_2(R)",
            "connected_3(R)",
            "bipartite(R)",
            "bipartite_1(R)",
            "bipartite_2(R)",
            "tree(R)",
            "forest(R)",
            "forest_1(R)",
            "forest_2(R)",
        ],
        4,
    );
}

#[test]
fn directed_axioms_on_free_relation() {
    check_kinds(
        "predicate R/2\nsentence: true",
        &[
            "sc(R)", "sct(R)", "ac(R)", "ac_1(R)", "ac_2(R)", "df(R)", "lo(R)", "biac(R)",
            "polytree(R)", "polyforest(R)", "perm_1(R)", "perm_2(R)",
        ],
        4,
    );
}

#[test]
fn directed_tree_axiom_with_root_marker() {
    check_kinds(
        "predicate E/2, root/1\nsentence: true",
        &["dt(E, root)"],
        4,
    );
}

#[test]
fn axioms_on_a_nontrivial_base_sentence() {
    // base restricts edges to touch a marked vertex; weights are non-unit
    let base = "\
predicate R/2, S/1
weight S = 2, 1
sentence: forall x. forall y. (R(x,y) -> (S(x) | S(y)))";
    check_kinds(
        base,
        &["connected_1(R)", "forest(R)", "bipartite(R)"],
        3,
    );
    check_kinds(base, &["ac(R)", "sc(R)", "df(R)"], 3);
}

#[test]
fn axioms_with_evidence_groups() {
    let base = "\
predicate R/2, S/1
sentence: forall x. forall y. (R(x,y) -> (S(x) | S(y)))
evidence: S(1), ~S(2)";
    for axiom_line in ["connected_1(R)", "forest(R)", "ac(R)"] {
        let text = format!("{base}\naxiom: {axiom_line}\n");
        let s: Sentence = parse_sentence(&text).unwrap();
        for n in 2..=3 {
            let engine = wfomc_with_axiom(&s, n).unwrap();
            let truth = axiom_count_by_enumeration(&s, &s.axioms[0], n).unwrap();
            assert_eq!(engine, truth, "{axiom_line} with evidence at n={n}");
        }
    }
}

#[test]
fn forest_and_acyclic_component_counts_sum_up() {
    // summing the k-indexed variants recovers the unindexed axiom
    let forest = "predicate R/2\nsentence: true\naxiom: forest(R)";
    let ac = "predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: ac(R)";
    for n in 1..=4usize {
        let s = parse_sentence(forest).unwrap();
        let total = wfomc_with_axiom(&s, n).unwrap();
        let mut acc = liftpoly::poly::rat(0);
        for k in 1..=n {
            let part =
                parse_sentence(&format!("predicate R/2\nsentence: true\naxiom: forest_{k}(R)"))
                    .unwrap();
            acc += wfomc_with_axiom(&part, n).unwrap();
        }
        assert_eq!(acc, total, "forest_k sum at n={n}");

        let s = parse_sentence(ac).unwrap();
        let total = wfomc_with_axiom(&s, n).unwrap();
        let mut acc = liftpoly::poly::rat(0);
        for k in 1..=n {
            let part = parse_sentence(&format!(
                "predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: ac_{k}(R)"
            ))
            .unwrap();
            acc += wfomc_with_axiom(&part, n).unwrap();
        }
        assert_eq!(acc, total, "ac_k sum at n={n}");
    }
}

#[test]
fn tree_matches_connected_with_edge_count() {
    // a tree is a connected graph with n - 1 edges; cross-check through the
    // cardinality-constrained connectedness query
    for n in 2..=4usize {
        let tree = parse_sentence("predicate R/2\nsentence: true\naxiom: tree(R)").unwrap();
        let tree_count = wfomc_with_axiom(&tree, n).unwrap();
        let constrained = parse_sentence(
            "predicate R/2\nsentence: true\ncardinality: |R| = 2*n - 2\naxiom: connected_1(R)",
        )
        .unwrap();
        let connected_count = wfomc_with_axiom(&constrained, n).unwrap();
        assert_eq!(tree_count, connected_count, "n={n}");
    }
}
