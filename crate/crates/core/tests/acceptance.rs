//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Everything is exact arithmetic, so every comparison is equality.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use liftpoly::axioms::{plain_wfomc, shift_u, wfomc_with_axiom};
use liftpoly::fol::{parse_sentence, Sentence};
use liftpoly::graphpoly::{parse_block_spec, tutte, EncodedGraphFamily};
use liftpoly::normalize::{close_symmetric_irreflexive, normalize};
use liftpoly::oracle;
use liftpoly::poly::{parse_rational, rat, Poly, Rational, Symbol};
use liftpoly::scp::{compute_nscp, compute_sscp, compute_sscp_u0};
use liftpoly::wcp::{compute_extended_wcp, compute_wcp, wfomc_value};

fn fixture(name: &str) -> Sentence {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {name}: {e}"));
    parse_sentence(&text).unwrap_or_else(|e| panic!("parse {name}: {e}"))
}

fn report(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance {criterion}: PASS");
    } else {
        println!("acceptance {criterion}: FAIL");
        panic!("{criterion} failed:\n{}", failures.join("\n"));
    }
}

fn usym() -> Symbol {
    Symbol::new("u")
}

fn vsym() -> Symbol {
    Symbol::new("v")
}

fn poly_from(terms: &[(&str, u32, u32)]) -> Poly {
    let mut acc = Poly::zero();
    for (c, du, dv) in terms {
        let t = Poly::constant(parse_rational(c).unwrap())
            .mul(&Poly::var(usym()).pow(*du))
            .mul(&Poly::var(vsym()).pow(*dv));
        acc = acc.add(&t);
    }
    acc
}

fn axiom_sentence(axiom_line: &str) -> Sentence {
    let text = format!("predicate R/2\nsentence: true\naxiom: {axiom_line}\n");
    parse_sentence(&text).unwrap()
}

fn dg_axiom_sentence(axiom_line: &str) -> Sentence {
    let text = format!("predicate R/2\nsentence: forall x. ~R(x,x)\naxiom: {axiom_line}\n");
    parse_sentence(&text).unwrap()
}

#[test]
fn criterion_1_oeis_regressions() {
    let mut failures = Vec::new();
    let sequences: Vec<(&str, Sentence, [i64; 6])> = vec![
        (
            "occ A001187",
            axiom_sentence("connected_1(R)"),
            [1, 1, 4, 38, 728, 26704],
        ),
        (
            "b A047864",
            axiom_sentence("bipartite(R)"),
            [1, 2, 7, 41, 376, 5177],
        ),
        (
            "tr A000272",
            axiom_sentence("tree(R)"),
            [1, 1, 3, 16, 125, 1296],
        ),
        (
            "fo A001858",
            axiom_sentence("forest(R)"),
            [1, 2, 7, 38, 291, 2932],
        ),
        (
            "sc A003030",
            dg_axiom_sentence("sc(R)"),
            [1, 1, 18, 1606, 565080, 734774776],
        ),
        (
            "sct A054946",
            dg_axiom_sentence("sct(R)"),
            [1, 0, 2, 24, 544, 22320],
        ),
        (
            "ac A003024",
            dg_axiom_sentence("ac(R)"),
            [1, 3, 25, 543, 29281, 3781503],
        ),
        (
            "cac A082402",
            dg_axiom_sentence("ac_1(R)"),
            [1, 2, 18, 446, 26430, 3596762],
        ),
        ("dt A000169", fixture("dt.lp"), [1, 2, 9, 64, 625, 7776]),
    ];
    for (name, sentence, expected) in &sequences {
        for n in 1..=6usize {
            match wfomc_with_axiom(sentence, n) {
                Ok(value) => {
                    if value != rat(expected[n - 1]) {
                        failures.push(format!("{name} n={n}: got {value}, want {}", expected[n - 1]));
                    }
                }
                Err(e) => failures.push(format!("{name} n={n}: {e}")),
            }
        }
    }
    report("criterion 1 (OEIS regressions n=1..6)", failures);
}

#[test]
fn criterion_2_polynomial_fixtures() {
    let mut failures = Vec::new();
    let mut check = |label: &str, got: &Poly, want: &Poly| {
        if got != want {
            failures.push(format!("{label}: got {got}, want {want}"));
        }
    };

    // shifted weak connectedness polynomial of simple undirected graphs
    let ug = normalize(&fixture("ug.lp")).unwrap();
    let r = ug.vocab.lookup("R").unwrap();
    let wcp_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 1, 0)],
        &[("1", 1, 0), ("1", 2, 0)],
        &[("4", 1, 0), ("3", 2, 0), ("1", 3, 0)],
        &[("38", 1, 0), ("19", 2, 0), ("6", 3, 0), ("1", 4, 0)],
    ];
    for (i, row) in wcp_rows.iter().enumerate() {
        let f = shift_u(&compute_wcp(&ug, i + 1, r).unwrap());
        check(&format!("wcp row n={}", i + 1), &f, &poly_from(row));
    }

    // unshifted weak connectedness polynomial of the bipartite encoding
    let ug_b = normalize(&fixture("ug_b.lp")).unwrap();
    let rb = ug_b.vocab.lookup("R").unwrap();
    let b_rows: [&[(&str, u32, u32)]; 4] = [
        &[("2", 0, 0), ("2", 1, 0)],
        &[("6", 0, 0), ("10", 1, 0), ("4", 2, 0)],
        &[("26", 0, 0), ("54", 1, 0), ("36", 2, 0), ("8", 3, 0)],
        &[
            ("162", 0, 0),
            ("366", 1, 0),
            ("300", 2, 0),
            ("112", 3, 0),
            ("16", 4, 0),
        ],
    ];
    for (i, row) in b_rows.iter().enumerate() {
        let f = compute_wcp(&ug_b, i + 1, rb).unwrap();
        check(&format!("bipartite wcp row n={}", i + 1), &f, &poly_from(row));
    }

    // shifted extended weak connectedness polynomial
    let ext_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 1, 0)],
        &[("1", 1, 2), ("1", 2, 0)],
        &[("3", 1, 4), ("1", 1, 6), ("3", 2, 2), ("1", 3, 0)],
        &[
            ("16", 1, 6),
            ("15", 1, 8),
            ("6", 1, 10),
            ("1", 1, 12),
            ("15", 2, 4),
            ("4", 2, 6),
            ("6", 3, 2),
            ("1", 4, 0),
        ],
    ];
    for (i, row) in ext_rows.iter().enumerate() {
        let f = shift_u(&compute_extended_wcp(&ug, i + 1, r).unwrap());
        check(&format!("extended wcp row n={}", i + 1), &f, &poly_from(row));
    }

    // shifted non-strict polynomial of simple digraphs
    let dg = normalize(&fixture("dg.lp")).unwrap();
    let rd = dg.vocab.lookup("R").unwrap();
    let nscp_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 1, 0), ("1", 1, 1)],
        &[
            ("3", 1, 0),
            ("4", 1, 1),
            ("1", 1, 2),
            ("2", 2, 1),
            ("1", 2, 2),
            ("1", 2, 0),
        ],
        &[
            ("54", 1, 0),
            ("80", 1, 1),
            ("30", 1, 2),
            ("4", 1, 3),
            ("21", 2, 1),
            ("15", 2, 2),
            ("3", 2, 3),
            ("3", 3, 1),
            ("3", 3, 2),
            ("1", 3, 3),
            ("9", 2, 0),
            ("1", 3, 0),
        ],
        &[
            ("3834", 1, 0),
            ("5600", 1, 1),
            ("2168", 1, 2),
            ("440", 1, 3),
            ("38", 1, 4),
            ("608", 2, 1),
            ("506", 2, 2),
            ("160", 2, 3),
            ("19", 2, 4),
            ("60", 3, 1),
            ("72", 3, 2),
            ("36", 3, 3),
            ("6", 3, 4),
            ("4", 4, 1),
            ("6", 4, 2),
            ("4", 4, 3),
            ("1", 4, 4),
            ("243", 2, 0),
            ("18", 3, 0),
            ("1", 4, 0),
        ],
    ];
    for (i, row) in nscp_rows.iter().enumerate() {
        let g = shift_u(&compute_nscp(&dg, i + 1, rd).unwrap());
        check(&format!("nscp row n={}", i + 1), &g, &poly_from(row));
    }

    // shifted non-strict polynomial of tournaments
    let tn = normalize(&fixture("dg_tn.lp")).unwrap();
    let rt = tn.vocab.lookup("R").unwrap();
    let tn_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 1, 0), ("1", 1, 1)],
        &[("2", 1, 0), ("3", 1, 1), ("1", 1, 2)],
        &[("8", 1, 0), ("13", 1, 1), ("6", 1, 2), ("1", 1, 3)],
        &[
            ("64", 1, 0),
            ("98", 1, 1),
            ("43", 1, 2),
            ("10", 1, 3),
            ("1", 1, 4),
        ],
    ];
    for (i, row) in tn_rows.iter().enumerate() {
        let g = shift_u(&compute_nscp(&tn, i + 1, rt).unwrap());
        check(&format!("tournament nscp row n={}", i + 1), &g, &poly_from(row));
    }

    // shifted strict polynomial of simple digraphs
    let sscp_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 1, 0), ("1", 1, 1)],
        &[
            ("1", 1, 1),
            ("1", 1, 2),
            ("2", 2, 1),
            ("1", 2, 2),
            ("1", 2, 0),
        ],
        &[
            ("-1", 1, 1),
            ("3", 1, 2),
            ("4", 1, 3),
            ("3", 2, 1),
            ("6", 2, 2),
            ("3", 2, 3),
            ("3", 3, 1),
            ("3", 3, 2),
            ("1", 3, 3),
            ("1", 3, 0),
        ],
        &[
            ("11", 1, 1),
            ("-19", 1, 2),
            ("8", 1, 3),
            ("38", 1, 4),
            ("-4", 2, 1),
            ("11", 2, 2),
            ("34", 2, 3),
            ("19", 2, 4),
            ("6", 3, 1),
            ("18", 3, 2),
            ("18", 3, 3),
            ("6", 3, 4),
            ("4", 4, 1),
            ("6", 4, 2),
            ("4", 4, 3),
            ("1", 4, 4),
            ("1", 4, 0),
        ],
    ];
    for (i, row) in sscp_rows.iter().enumerate() {
        let g = shift_u(&compute_sscp(&dg, i + 1, rd).unwrap());
        check(&format!("sscp row n={}", i + 1), &g, &poly_from(row));
    }

    // strict polynomial of the rooted-tree encoding at u = 0
    let mut dt_sentence = fixture("dt.lp");
    dt_sentence.axioms.clear();
    let dt = normalize(&dt_sentence).unwrap();
    let e = dt.vocab.lookup("E").unwrap();
    let dt_rows: [&[(&str, u32, u32)]; 4] = [
        &[("1", 0, 0), ("1", 0, 1)],
        &[("1", 0, 1), ("1", 0, 2)],
        &[("-1/2", 0, 1), ("3/2", 0, 2), ("2", 0, 3)],
        &[("-4", 0, 2), ("2", 0, 3), ("6", 0, 4)],
    ];
    for (i, row) in dt_rows.iter().enumerate() {
        let g0 = compute_sscp_u0(&dt, i + 1, e).unwrap();
        check(&format!("dt strict row n={}", i + 1), &g0, &poly_from(row));
    }

    report("criterion 2 (polynomial fixtures n=1..4)", failures);
}

/// The validation corpus: fixture file, distinguished relation, and the
/// range of domain sizes to compare on. Evidence fixtures start at the
/// largest mentioned element; the ground-atom guard caps the tournament
/// encoding and the bipartite encoding below n = 4.
fn corpus() -> Vec<(&'static str, &'static str, usize, usize)> {
    vec![
        ("ug.lp", "R", 1, 4),
        ("dg.lp", "R", 1, 4),
        ("fs.lp", "fr", 1, 4),
        ("fs_1f.lp", "fr", 1, 4),
        ("ug_card.lp", "R", 1, 4),
        ("dg_card.lp", "R", 1, 4),
        ("ug_ev.lp", "R", 2, 4),
        ("fs_ev.lp", "fr", 2, 4),
        ("exists.lp", "R", 1, 4),
        ("impl.lp", "R", 1, 4),
        ("perm.lp", "R", 1, 4),
        ("ug_b.lp", "R", 1, 3),
        ("dg_tn.lp", "R", 1, 3),
    ]
}

#[test]
fn criterion_3_oracle_equivalence() {
    let mut failures = Vec::new();
    for (name, relation, min_n, max_n) in corpus() {
        let s = fixture(name);
        let rel = s.vocab.lookup(relation).unwrap();
        let ns = normalize(&s).unwrap();
        for n in min_n..=max_n {
            let engine = compute_wcp(&ns, n, rel).unwrap();
            let truth = oracle::wcp_by_enumeration(&s, n, rel).unwrap();
            if engine != truth {
                failures.push(format!("{name} wcp n={n}: engine {engine} vs oracle {truth}"));
            }
        }
        for n in min_n..=3usize.min(max_n) {
            let engine = compute_nscp(&ns, n, rel).unwrap();
            let truth = oracle::scp_by_enumeration(&s, n, rel, false).unwrap();
            if engine != truth {
                failures.push(format!("{name} nscp n={n}: engine {engine} vs oracle {truth}"));
            }
            let engine = compute_sscp(&ns, n, rel).unwrap();
            let truth = oracle::scp_by_enumeration(&s, n, rel, true).unwrap();
            if engine != truth {
                failures.push(format!("{name} sscp n={n}: engine {engine} vs oracle {truth}"));
            }
        }
    }
    report("criterion 3 (oracle equivalence, 13-sentence corpus)", failures);
}

#[test]
fn criterion_4_definitional_identities() {
    let mut failures = Vec::new();
    for (name, relation, min_n, max_n) in corpus() {
        let s = fixture(name);
        let rel = s.vocab.lookup(relation).unwrap();
        let ns = normalize(&s).unwrap();
        for n in min_n..=max_n {
            let f = compute_wcp(&ns, n, rel).unwrap();
            // f_n(0) = wfomc
            let mut at0 = BTreeMap::new();
            at0.insert(usym(), rat(0));
            let left = f.eval_constant(&at0).unwrap();
            let right = wfomc_value(&ns, n).unwrap();
            if left != right {
                failures.push(format!("{name} n={n}: f(0)={left} but wfomc={right}"));
            }
            // degree bound
            if f.degree(&usym()) as usize > n {
                failures.push(format!("{name} n={n}: wcp degree exceeds n"));
            }
        }
        for n in min_n..=3usize.min(max_n) {
            // nonstrict polynomial collapses to the wcp at v = 0
            let g = compute_nscp(&ns, n, rel).unwrap();
            let mut v0 = BTreeMap::new();
            v0.insert(vsym(), rat(0));
            if g.eval(&v0) != compute_wcp(&ns, n, rel).unwrap() {
                failures.push(format!("{name} n={n}: nscp(u,0) differs from wcp"));
            }
            if g.degree(&usym()) as usize > n || g.degree(&vsym()) as usize > n {
                failures.push(format!("{name} n={n}: scp degree exceeds n"));
            }
        }
    }
    // even v-powers of the extended polynomial on closed relations
    for name in ["ug.lp", "ug_card.lp", "ug_ev.lp", "fs.lp", "fs_1f.lp", "ug_b.lp"] {
        let s = fixture(name);
        let rel = s.vocab.binary_ids()[0];
        let ns = normalize(&s).unwrap();
        let start = if name == "ug_ev.lp" { 2 } else { 1 };
        for n in start..=3usize {
            let f = compute_extended_wcp(&ns, n, rel).unwrap();
            if f.halve_exponents(&vsym()).is_err() {
                failures.push(format!("{name} n={n}: odd v-power in extended wcp"));
            }
        }
    }
    // connected components partition the model count
    let base = parse_sentence("predicate R/2\nsentence: true").unwrap();
    let r = base.vocab.lookup("R").unwrap();
    for n in 1..=4usize {
        let closed = close_symmetric_irreflexive(&base, r).unwrap();
        let total = plain_wfomc(&closed, n).unwrap();
        let mut acc = Rational::from_integer(0.into());
        for k in 1..=n {
            let q = axiom_sentence(&format!("connected_{k}(R)"));
            acc += wfomc_with_axiom(&q, n).unwrap();
        }
        if acc != total {
            failures.push(format!("sum over connected_k at n={n}: {acc} vs {total}"));
        }
    }
    report("criterion 4 (definitional identities)", failures);
}

#[test]
fn criterion_5_tutte_checks() {
    let mut failures = Vec::new();
    let eval2 = |p: &Poly, xv: i64, yv: i64| {
        let mut point = BTreeMap::new();
        point.insert(Symbol::new("x"), rat(xv));
        point.insert(Symbol::new("y"), rat(yv));
        p.eval_constant(&point).unwrap()
    };
    // triangle
    let t3 = tutte(&EncodedGraphFamily::Complete, 3).unwrap();
    let want = {
        let x = Poly::var(Symbol::new("x"));
        let y = Poly::var(Symbol::new("y"));
        x.pow(2).add(&x).add(&y)
    };
    if t3 != want {
        failures.push(format!("tutte(K3) = {t3}, want {want}"));
    }
    // spanning trees of complete graphs follow Cayley's formula
    for n in 3..=6usize {
        let t = tutte(&EncodedGraphFamily::Complete, n).unwrap();
        let trees = eval2(&t, 1, 1);
        let cayley = rat((n as i64).pow(n as u32 - 2));
        if trees != cayley {
            failures.push(format!("T_K{n}(1,1) = {trees}, want {cayley}"));
        }
        // T(2,2) counts all edge subsets
        let subsets = eval2(&t, 2, 2);
        let edges = n * (n - 1) / 2;
        if subsets != rat(2i64.pow(edges as u32)) {
            failures.push(format!("T_K{n}(2,2) = {subsets}, want 2^{edges}"));
        }
    }
    // block-structured family against deletion-contraction
    let family = parse_block_spec("sizes=2,2;adj=01,10").unwrap();
    let t = tutte(&family, 4).unwrap();
    let dc = oracle::tutte_by_deletion_contraction(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
    if t != dc {
        failures.push(format!("blocks(2,2) tutte {t} vs deletion-contraction {dc}"));
    }
    report("criterion 5 (Tutte checks)", failures);
}

#[test]
fn criterion_6_directed_chromatic_identities() {
    let mut failures = Vec::new();
    let x = Symbol::new("x");
    let mut check_graph = |g: &oracle::DirectedGraph, label: String| {
        let strict = oracle::chromatic_poly(g, true).unwrap();
        let nonstrict = oracle::chromatic_poly(g, false).unwrap();
        // strict chi(x) = (-1)^n nonstrict chi(-x) for DAGs, zero otherwise
        if g.is_acyclic() {
            let neg = nonstrict.subst(&x, &Poly::var(x.clone()).neg());
            let sign = if g.n % 2 == 0 { rat(1) } else { rat(-1) };
            if strict != neg.scale(&sign) {
                failures.push(format!("{label}: acyclic reflection identity fails"));
            }
        } else if !strict.is_zero() {
            failures.push(format!("{label}: cyclic digraph has nonzero strict polynomial"));
        }
        // expansion over surjective colorings
        let mut sum = Poly::zero();
        for i in 1..=g.n {
            let stars = oracle::surjective_coloring_count(g, i, true);
            if stars == 0 {
                continue;
            }
            let mut falling = Poly::one();
            for j in 0..i {
                falling = falling.mul(&Poly::var(x.clone()).sub(&Poly::from_int(j as i64)));
            }
            let factorial: i64 = (1..=i as i64).product();
            sum = sum.add(&falling.scale(&liftpoly::poly::ratio(stars, factorial)));
        }
        if strict != sum {
            failures.push(format!("{label}: surjective expansion fails"));
        }
    };
    for n in 1..=3usize {
        for mask in 0u32..(1 << (n * n)) {
            let mut g = oracle::DirectedGraph::new(n);
            for a in 0..n {
                for b in 0..n {
                    g.adj[a][b] = mask >> (a * n + b) & 1 == 1;
                }
            }
            check_graph(&g, format!("n={n} mask={mask}"));
        }
    }
    // 50 pseudorandom digraphs on 4 vertices
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for i in 0..50 {
        let mask = next() & 0xffff;
        let mut g = oracle::DirectedGraph::new(4);
        for a in 0..4 {
            for b in 0..4 {
                g.adj[a][b] = mask >> (a * 4 + b) & 1 == 1;
            }
        }
        check_graph(&g, format!("random {i} mask={mask}"));
    }
    report("criterion 6 (directed chromatic identities)", failures);
}

#[test]
fn criterion_7_runtime_bend() {
    let mut failures = Vec::new();
    let ug = normalize(&fixture("ug.lp")).unwrap();
    let r = ug.vocab.lookup("R").unwrap();
    // measure inside a dedicated single-thread pool so the intra-layer
    // parallelism does not contend with concurrently running tests, and
    // interleave attempts over the sizes keeping per-size minima
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let sizes = [4usize, 8, 12, 16];
    let reps = [40usize, 16, 8, 4];
    let mut times = [f64::INFINITY; 4];
    pool.install(|| {
        for &n in &sizes {
            let _ = compute_wcp(&ug, n, r).unwrap(); // warm up
        }
        for _ in 0..7 {
            for (i, &n) in sizes.iter().enumerate() {
                let start = Instant::now();
                for _ in 0..reps[i] {
                    let _ = compute_wcp(&ug, n, r).unwrap();
                }
                times[i] = times[i].min(start.elapsed().as_secs_f64() / reps[i] as f64);
            }
        }
    });
    let logs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let d1 = logs[2] - 2.0 * logs[1] + logs[0];
    let d2 = logs[3] - 2.0 * logs[2] + logs[1];
    println!(
        "wcp times (s): n=4 {:.2e}, n=8 {:.2e}, n=12 {:.2e}, n=16 {:.2e}; log second differences {d1:.3}, {d2:.3}",
        times[0], times[1], times[2], times[3]
    );
    // polynomial growth bends the log-runtime curve downward over the
    // arithmetic progression of sizes; exponential 2^n growth would not
    if d2 >= 0.0 {
        failures.push(format!(
            "log-runtime second difference is not eventually negative: {d1:.3}, {d2:.3}"
        ));
    }
    report("criterion 7 (sub-exponential runtime bend)", failures);
}
