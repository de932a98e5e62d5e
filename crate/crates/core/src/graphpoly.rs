//! Tutte and directed chromatic polynomials of graph families encodable by a
//! fixed sentence plus cardinality constraints and unary evidence.
//!
//! For a family whose every model induces the same graph, the extended weak
//! connectedness polynomial of the subset relation recovers the Tutte
//! polynomial after the substitutions `u -> (x-1)(y-1) - 1` and
//! `v^2 -> y - 1`, divided exactly by `(x-1)^cc (y-1)^n` times the family's
//! model count. The square root never materializes: the closure forces only
//! even powers of the edge variable, which are halved termwise.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fol::{
    CardinalityConstraint, Comparator, Formula, GroundUnaryLiteral, NExpr, PredId, Sentence, Var,
    Vocabulary,
};
use crate::normalize::normalize;
use crate::oracle::DirectedGraph;
use crate::poly::{rat, Poly, Symbol};
use crate::scp::{compute_scp_u0, ScpMode};
use crate::wcp::{compute_extended_wcp, wfomc_value};

/// A graph family given by a fixed sentence with per-size augmentation.
/// Every model of an instance must induce the same graph up to isomorphism;
/// the component count enters the Tutte denominator.
#[derive(Clone, Debug)]
pub enum EncodedGraphFamily {
    /// Complete simple graphs of any size.
    Complete,
    /// Block-structured graphs: a constant number of blocks with fixed
    /// block-level adjacency; block sizes give the instance size.
    Blocks {
        sizes: Vec<usize>,
        adjacency: Vec<Vec<bool>>,
    },
    /// A caller-supplied encoding with a known component count.
    Custom {
        sentence: Sentence,
        edge: PredId,
        components: usize,
    },
}

impl EncodedGraphFamily {
    pub fn blocks(sizes: Vec<usize>, adjacency: Vec<Vec<bool>>) -> Result<Self> {
        let k = sizes.len();
        if k == 0 || adjacency.len() != k || adjacency.iter().any(|row| row.len() != k) {
            return Err(Error::BadBlockSpec(
                "need one adjacency row per block".into(),
            ));
        }
        for i in 0..k {
            for j in 0..k {
                if adjacency[i][j] != adjacency[j][i] {
                    return Err(Error::BadBlockSpec(
                        "block adjacency must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(EncodedGraphFamily::Blocks { sizes, adjacency })
    }

    /// The sentence, component count, and edge predicate at size `n`.
    pub fn instance(&self, n: usize) -> Result<(Sentence, usize, PredId)> {
        match self {
            EncodedGraphFamily::Complete => {
                let mut vocab = Vocabulary::new();
                let e = vocab.declare("E", 2)?;
                let irreflexive = Formula::forall(
                    Var::X,
                    Formula::not(Formula::Atom(e, vec![Var::X, Var::X])),
                );
                let mut s = Sentence::new(vocab, irreflexive);
                s.cardinality.push(CardinalityConstraint {
                    pred: e,
                    cmp: Comparator::Eq,
                    bound: NExpr::n().mul(&NExpr::n().sub(&NExpr::constant(1))),
                });
                Ok((s, 1, e))
            }
            EncodedGraphFamily::Blocks { sizes, adjacency } => {
                let total: usize = sizes.iter().sum();
                if total != n {
                    return Err(Error::BlockSizeMismatch { sum: total, n });
                }
                Ok(block_instance(sizes, adjacency)?)
            }
            EncodedGraphFamily::Custom {
                sentence,
                edge,
                components,
            } => Ok((sentence.clone(), *components, *edge)),
        }
    }
}

fn block_instance(
    sizes: &[usize],
    adjacency: &[Vec<bool>],
) -> Result<(Sentence, usize, PredId)> {
    let k = sizes.len();
    let mut vocab = Vocabulary::new();
    let e = vocab.declare("E", 2)?;
    let blocks: Vec<PredId> = (0..k)
        .map(|i| vocab.declare(&format!("B{}", i + 1), 1))
        .collect::<Result<_>>()?;
    let needs_eq = (0..k).any(|i| adjacency[i][i]);
    let eq = if needs_eq {
        Some(vocab.declare("Eq", 2)?)
    } else {
        None
    };

    let mut parts: Vec<Formula> = Vec::new();
    parts.push(Formula::forall(
        Var::X,
        Formula::not(Formula::Atom(e, vec![Var::X, Var::X])),
    ));
    if let Some(eq) = eq {
        parts.push(Formula::forall(
            Var::X,
            Formula::Atom(eq, vec![Var::X, Var::X]),
        ));
    }
    for i in 0..k {
        for j in 0..k {
            let members = Formula::and(
                Formula::Atom(blocks[i], vec![Var::X]),
                Formula::Atom(blocks[j], vec![Var::Y]),
            );
            let edge = Formula::Atom(e, vec![Var::X, Var::Y]);
            let clause = if adjacency[i][j] {
                if i == j {
                    // distinct same-block pairs only; Eq guards the diagonal
                    let eq = eq.expect("Eq present when a block is self-adjacent");
                    Formula::implies(
                        Formula::and(
                            members,
                            Formula::not(Formula::Atom(eq, vec![Var::X, Var::Y])),
                        ),
                        edge,
                    )
                } else {
                    Formula::implies(members, edge)
                }
            } else {
                Formula::implies(members, Formula::not(edge))
            };
            parts.push(Formula::forall(Var::X, Formula::forall(Var::Y, clause)));
        }
    }
    let mut s = Sentence::new(vocab, Formula::conjoin_all(parts));
    if let Some(eq) = eq {
        s.cardinality.push(CardinalityConstraint {
            pred: eq,
            cmp: Comparator::Eq,
            bound: NExpr::n(),
        });
    }
    // evidence pins every element to its block
    let mut element = 1usize;
    for (b, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            for (j, &bp) in blocks.iter().enumerate() {
                s.evidence.push(GroundUnaryLiteral {
                    pred: bp,
                    element,
                    sign: j == b,
                });
            }
            element += 1;
        }
    }
    let components = block_graph(sizes, adjacency).weak_components();
    Ok((s, components, e))
}

/// The concrete vertex-level graph of a block structure.
pub fn block_graph(sizes: &[usize], adjacency: &[Vec<bool>]) -> DirectedGraph {
    let n: usize = sizes.iter().sum();
    let block_of = |v: usize| -> usize {
        let mut acc = 0;
        for (b, &s) in sizes.iter().enumerate() {
            acc += s;
            if v < acc {
                return b;
            }
        }
        unreachable!("vertex within total size")
    };
    let mut g = DirectedGraph::new(n);
    for a in 0..n {
        for b in 0..n {
            if a != b && adjacency[block_of(a)][block_of(b)] {
                g.adj[a][b] = true;
            }
        }
    }
    g
}

/// The Tutte polynomial of the family's size-`n` member, in variables x, y.
pub fn tutte(family: &EncodedGraphFamily, n: usize) -> Result<Poly> {
    let (sentence, components, edge) = family.instance(n)?;
    let ns = normalize(&sentence)?;
    let base_count = wfomc_value(&ns, n)?;
    if base_count.is_zero() {
        return Err(Error::EmptyFamily);
    }

    // subset relation: symmetric sub-multiset of the edge relation
    let mut augmented = sentence.clone();
    let subset = augmented.vocab.fresh("__r", 2);
    augmented.weights.ensure_len(augmented.vocab.len());
    let r_atom = |a: Var, b: Var| Formula::Atom(subset, vec![a, b]);
    let clause = Formula::forall(
        Var::X,
        Formula::forall(
            Var::Y,
            Formula::and(
                Formula::implies(r_atom(Var::X, Var::Y), Formula::Atom(edge, vec![Var::X, Var::Y])),
                Formula::implies(r_atom(Var::X, Var::Y), r_atom(Var::Y, Var::X)),
            ),
        ),
    );
    augmented.core = Formula::and(augmented.core, clause);

    let f = compute_extended_wcp(&normalize(&augmented)?, n, subset)?;
    let (usv, vsv) = (Symbol::new("u"), Symbol::new("v"));
    let halved = f.halve_exponents(&vsv)?;
    let (x, y) = (Symbol::new("x"), Symbol::new("y"));
    let xm1 = Poly::var(x.clone()).sub(&Poly::one());
    let ym1 = Poly::var(y.clone()).sub(&Poly::one());
    let u_subst = xm1.mul(&ym1).sub(&Poly::one());
    let numerator = halved.subst(&usv, &u_subst).subst(&vsv, &ym1);

    let mut result = numerator;
    for _ in 0..components {
        result = result.div_linear(&x, &rat(1))?;
    }
    for _ in 0..n {
        result = result.div_linear(&y, &rat(1))?;
    }
    result.div_scalar(&base_count)
}

/// The strict or non-strict directed chromatic polynomial of the digraph
/// encoded by the sentence, in the color-count variable x.
pub fn directed_chromatic(
    sentence: &Sentence,
    edge: PredId,
    n: usize,
    mode: ScpMode,
) -> Result<Poly> {
    let ns = normalize(sentence)?;
    let base_count = wfomc_value(&ns, n)?;
    if base_count.is_zero() {
        return Err(Error::EmptyFamily);
    }
    let column = compute_scp_u0(&ns, n, edge, mode)?;
    let x = Symbol::new("x");
    let chi = column.subst(
        &Symbol::new("v"),
        &Poly::var(x.clone()).sub(&Poly::one()),
    );
    chi.div_scalar(&base_count)
}

/// Parses a CLI block specification like `sizes=2,3;adj=01,10`.
pub fn parse_block_spec(spec: &str) -> Result<EncodedGraphFamily> {
    let bad = |msg: &str| Error::BadBlockSpec(msg.to_string());
    let mut sizes: Option<Vec<usize>> = None;
    let mut adj: Option<Vec<Vec<bool>>> = None;
    for part in spec.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad("expected key=value parts separated by `;`"))?;
        match key.trim() {
            "sizes" => {
                let parsed: std::result::Result<Vec<usize>, _> =
                    value.split(',').map(|s| s.trim().parse::<usize>()).collect();
                sizes = Some(parsed.map_err(|_| bad("sizes must be integers"))?);
            }
            "adj" => {
                let rows: Vec<Vec<bool>> = value
                    .split(',')
                    .map(|row| row.trim().chars().map(|c| c == '1').collect())
                    .collect();
                adj = Some(rows);
            }
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    let sizes = sizes.ok_or_else(|| bad("missing sizes"))?;
    let adj = adj.ok_or_else(|| bad("missing adj"))?;
    EncodedGraphFamily::blocks(sizes, adj)
}
