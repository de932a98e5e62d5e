//! 1-type (cell) enumeration and the WMC-based coefficients consumed by the
//! dynamic-programming engines.
//!
//! A cell assigns a sign to every unary atom `P(x)` and reflexive binary atom
//! `Q(x,x)`. Cells that falsify the matrix at `y := x` admit no elements and
//! are pruned. Exact 1-type validity (satisfiability in some model) is not
//! decided; dead cells only cost time, never correctness.

use crate::error::Result;
use crate::fol::{Formula, PredId, Var, WeightMap};
use crate::normalize::NormalizedSentence;
use crate::poly::Poly;

/// A unary or reflexive-binary atom appearing in cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellAtom {
    pub pred: PredId,
    pub binary: bool,
}

/// One 1-type: a sign per cell atom plus its canonical index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub signs: Vec<bool>,
    pub index: usize,
}

/// The enumerated cells of a normalized sentence.
#[derive(Clone, Debug)]
pub struct CellSpace {
    pub atoms: Vec<CellAtom>,
    pub cells: Vec<Cell>,
}

impl CellSpace {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn sign_of(&self, cell: &Cell, pred: PredId) -> bool {
        let idx = self
            .atoms
            .iter()
            .position(|a| a.pred == pred)
            .expect("cell atom exists for predicate");
        cell.signs[idx]
    }

    /// Whether the cell carries a positive reflexive atom of `relation`.
    pub fn has_loop(&self, cell: &Cell, relation: PredId) -> bool {
        self.atoms
            .iter()
            .position(|a| a.pred == relation && a.binary)
            .map(|i| cell.signs[i])
            .unwrap_or(false)
    }

    /// Whether a cell is consistent with an evidence signature.
    pub fn allows(&self, cell: &Cell, signature: &[(PredId, bool)]) -> bool {
        signature
            .iter()
            .all(|&(pred, sign)| self.sign_of(cell, pred) == sign)
    }
}

/// Enumerates all maximally consistent sign assignments that pass the local
/// `psi(x,x)` check, in canonical (binary counter) order.
pub fn enumerate_cells(ns: &NormalizedSentence) -> CellSpace {
    let mut atoms = Vec::new();
    for p in ns.vocab.ids() {
        atoms.push(CellAtom {
            pred: p,
            binary: ns.vocab.arity(p) == 2,
        });
    }
    let k = atoms.len();
    let mut cells = Vec::new();
    for mask in 0..(1u64 << k) {
        let signs: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let locally_consistent = ns.matrix.eval_qf(&mut |pred, _args| {
            // with y := x every atom collapses to the cell's own atom
            let idx = atoms
                .iter()
                .position(|a| a.pred == pred)
                .expect("atom predicate is declared");
            signs[idx]
        });
        if locally_consistent {
            cells.push(Cell {
                signs,
                index: cells.len(),
            });
        }
    }
    CellSpace { atoms, cells }
}

/// All coefficient families of Equation-style pair decompositions:
/// `cell_weight[i]` is W(C_i); `s[i]` weighs an unordered pair inside cell i;
/// `r[i][j]` a pair across cells; the `arrow` variant forbids the edge from
/// the second element back to the first; the `nonadj` variants forbid both
/// directions.
#[derive(Clone, Debug)]
pub struct CellCoefficients {
    pub cell_weight: Vec<Poly>,
    pub s: Vec<Poly>,
    pub s_nonadj: Vec<Poly>,
    pub r: Vec<Vec<Poly>>,
    pub r_arrow: Vec<Vec<Poly>>,
    pub r_nonadj: Vec<Vec<Poly>>,
    pub has_loop: Vec<bool>,
}

/// Atom roles when grounding the matrix over two elements a, b.
#[derive(Clone, Copy, PartialEq, Eq)]
enum PairAtom {
    CellA(usize),
    CellB(usize),
    Cross { pred_pos: usize, forward: bool },
}

struct PairEvaluator<'a> {
    ns: &'a NormalizedSentence,
    binary_preds: Vec<PredId>,
}

impl<'a> PairEvaluator<'a> {
    fn new(ns: &'a NormalizedSentence) -> Self {
        PairEvaluator {
            ns,
            binary_preds: ns.vocab.binary_ids(),
        }
    }

    fn classify(&self, space: &CellSpace, pred: PredId, args: &[Var], swap: bool) -> PairAtom {
        let map = |v: Var| -> Var {
            if swap {
                match v {
                    Var::X => Var::Y,
                    Var::Y => Var::X,
                }
            } else {
                v
            }
        };
        let atom_index = |p: PredId| {
            space
                .atoms
                .iter()
                .position(|a| a.pred == p)
                .expect("atom predicate is declared")
        };
        match args {
            [v] => match map(*v) {
                Var::X => PairAtom::CellA(atom_index(pred)),
                Var::Y => PairAtom::CellB(atom_index(pred)),
            },
            [v, w] => {
                let (v, w) = (map(*v), map(*w));
                if v == w {
                    match v {
                        Var::X => PairAtom::CellA(atom_index(pred)),
                        Var::Y => PairAtom::CellB(atom_index(pred)),
                    }
                } else {
                    let pred_pos = self
                        .binary_preds
                        .iter()
                        .position(|&p| p == pred)
                        .expect("binary predicate is declared");
                    PairAtom::Cross {
                        pred_pos,
                        forward: v == Var::X,
                    }
                }
            }
            _ => unreachable!("arity is 1 or 2"),
        }
    }

    /// Truth of `psi(a,b)` (or `psi(b,a)` when `swap`) for two elements in
    /// cells `ca`, `cb` and a cross-atom assignment: bit 2k encodes
    /// `Q_k(a,b)`, bit 2k+1 encodes `Q_k(b,a)`.
    fn eval(&self, space: &CellSpace, ca: &Cell, cb: &Cell, cross: u32, swap: bool) -> bool {
        self.ns.matrix.eval_qf(&mut |pred, args| {
            match self.classify(space, pred, args, swap) {
                PairAtom::CellA(i) => ca.signs[i],
                PairAtom::CellB(i) => cb.signs[i],
                PairAtom::Cross { pred_pos, forward } => {
                    let bit = 2 * pred_pos + usize::from(!forward);
                    cross >> bit & 1 == 1
                }
            }
        })
    }

    fn cross_weight(&self, cross: u32) -> Result<Poly> {
        let mut acc = Poly::one();
        for (k, &pred) in self.binary_preds.iter().enumerate() {
            for bit in [2 * k, 2 * k + 1] {
                let w = if cross >> bit & 1 == 1 {
                    self.ns.weights.pos_poly(pred)?
                } else {
                    self.ns.weights.neg_poly(pred)?
                };
                acc = acc.mul(&w);
            }
        }
        Ok(acc)
    }
}

/// Computes every coefficient family for the distinguished relation by truth
/// tables over the non-reflexive binary atoms between two elements.
pub fn compute_coefficients(
    ns: &NormalizedSentence,
    space: &CellSpace,
    relation: PredId,
) -> Result<CellCoefficients> {
    ns.vocab.require_binary(relation)?;
    compute_coefficients_inner(ns, space, Some(relation))
}

/// Coefficients without a distinguished relation; the arrow/nonadj families
/// coincide with the plain ones and are not meaningful. Used for plain
/// weighted model counts.
pub(crate) fn compute_coefficients_plain(
    ns: &NormalizedSentence,
    space: &CellSpace,
) -> Result<CellCoefficients> {
    compute_coefficients_inner(ns, space, None)
}

fn compute_coefficients_inner(
    ns: &NormalizedSentence,
    space: &CellSpace,
    relation: Option<PredId>,
) -> Result<CellCoefficients> {
    let evaluator = PairEvaluator::new(ns);
    let l = space.len();
    let nbits = 2 * evaluator.binary_preds.len();
    let rel_pos = relation.map(|relation| {
        evaluator
            .binary_preds
            .iter()
            .position(|&p| p == relation)
            .expect("relation is binary")
    });
    let fwd_bit = rel_pos.map(|p| 2 * p);
    let bwd_bit = rel_pos.map(|p| 2 * p + 1);

    let mut cell_weight = Vec::with_capacity(l);
    for cell in &space.cells {
        let mut acc = Poly::one();
        for (atom, &sign) in space.atoms.iter().zip(&cell.signs) {
            let w = if sign {
                ns.weights.pos_poly(atom.pred)?
            } else {
                ns.weights.neg_poly(atom.pred)?
            };
            acc = acc.mul(&w);
        }
        cell_weight.push(acc);
    }

    let zero_matrix = vec![vec![Poly::zero(); l]; l];
    let mut r = zero_matrix.clone();
    let mut r_arrow = zero_matrix.clone();
    let mut r_nonadj = zero_matrix;
    for (i, ca) in space.cells.iter().enumerate() {
        for (j, cb) in space.cells.iter().enumerate() {
            for cross in 0..(1u32 << nbits) {
                if !evaluator.eval(space, ca, cb, cross, false)
                    || !evaluator.eval(space, ca, cb, cross, true)
                {
                    continue;
                }
                let w = evaluator.cross_weight(cross)?;
                r[i][j] = r[i][j].add(&w);
                let bwd_clear = bwd_bit.map(|b| cross >> b & 1 == 0).unwrap_or(true);
                let fwd_clear = fwd_bit.map(|b| cross >> b & 1 == 0).unwrap_or(true);
                if bwd_clear {
                    r_arrow[i][j] = r_arrow[i][j].add(&w);
                    if fwd_clear {
                        r_nonadj[i][j] = r_nonadj[i][j].add(&w);
                    }
                }
            }
        }
    }

    let s: Vec<Poly> = (0..l).map(|i| r[i][i].clone()).collect();
    let s_nonadj: Vec<Poly> = (0..l).map(|i| r_nonadj[i][i].clone()).collect();
    let has_loop: Vec<bool> = match relation {
        Some(relation) => space
            .cells
            .iter()
            .map(|c| space.has_loop(c, relation))
            .collect(),
        None => vec![false; l],
    };
    Ok(CellCoefficients {
        cell_weight,
        s,
        s_nonadj,
        r,
        r_arrow,
        r_nonadj,
        has_loop,
    })
}

/// Checks that the matrix semantically forces `relation` to be symmetric and
/// irreflexive: no surviving cell carries a loop, and no satisfying pair
/// assignment has the two directions disagree.
pub fn verify_closure(
    ns: &NormalizedSentence,
    space: &CellSpace,
    relation: PredId,
) -> Result<()> {
    ns.vocab.require_binary(relation)?;
    let evaluator = PairEvaluator::new(ns);
    let nbits = 2 * evaluator.binary_preds.len();
    let rel_pos = evaluator
        .binary_preds
        .iter()
        .position(|&p| p == relation)
        .expect("relation is binary");
    for cell in &space.cells {
        if space.has_loop(cell, relation) {
            return Err(crate::error::Error::ClosureMissing(
                ns.vocab.name(relation).to_string(),
            ));
        }
    }
    for ca in &space.cells {
        for cb in &space.cells {
            for cross in 0..(1u32 << nbits) {
                let fwd = cross >> (2 * rel_pos) & 1;
                let bwd = cross >> (2 * rel_pos + 1) & 1;
                if fwd == bwd {
                    continue;
                }
                if evaluator.eval(space, ca, cb, cross, false)
                    && evaluator.eval(space, ca, cb, cross, true)
                {
                    return Err(crate::error::Error::ClosureMissing(
                        ns.vocab.name(relation).to_string(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// WMC of a ground quantifier-free formula over two constants, reading the
/// variables x, y as the constants a, b. Sums `literal_set_weight` over all
/// satisfying total assignments of the mentioned atoms.
pub fn wmc_ground(formula: &Formula, weights: &WeightMap) -> Result<Poly> {
    // collect distinct ground atoms (pred, grounded args)
    let mut atoms: Vec<(PredId, Vec<Var>)> = Vec::new();
    collect_atoms(formula, &mut atoms);
    let k = atoms.len();
    let mut total = Poly::zero();
    for mask in 0..(1u64 << k) {
        let holds = formula.eval_qf(&mut |pred, args| {
            let idx = atoms
                .iter()
                .position(|(p, a)| *p == pred && a == args)
                .expect("atom was collected");
            mask >> idx & 1 == 1
        });
        if !holds {
            continue;
        }
        let mut w = Poly::one();
        for (idx, (pred, _)) in atoms.iter().enumerate() {
            let factor = if mask >> idx & 1 == 1 {
                weights.pos_poly(*pred)?
            } else {
                weights.neg_poly(*pred)?
            };
            w = w.mul(&factor);
        }
        total = total.add(&w);
    }
    Ok(total)
}

fn collect_atoms(f: &Formula, atoms: &mut Vec<(PredId, Vec<Var>)>) {
    match f {
        Formula::Atom(p, args) => {
            if !atoms.iter().any(|(q, a)| q == p && a == args) {
                atoms.push((*p, args.clone()));
            }
        }
        Formula::Not(g) => collect_atoms(g, atoms),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        Formula::Quant(_, _, g) => collect_atoms(g, atoms),
        Formula::Top | Formula::Bottom => {}
    }
}

/// Human-readable cell and coefficient tables for `--dump-cells`.
pub fn describe(ns: &NormalizedSentence, space: &CellSpace, coeffs: &CellCoefficients) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for (i, cell) in space.cells.iter().enumerate() {
        let lits: Vec<String> = space
            .atoms
            .iter()
            .zip(&cell.signs)
            .map(|(atom, &sign)| {
                let name = ns.vocab.name(atom.pred);
                let atom_text = if atom.binary {
                    format!("{name}(x,x)")
                } else {
                    format!("{name}(x)")
                };
                format!("{}{atom_text}", if sign { "" } else { "~" })
            })
            .collect();
        writeln!(
            out,
            "cell {i}: {}  weight {}",
            lits.join(" & "),
            coeffs.cell_weight[i]
        )
        .unwrap();
    }
    for (label, vals) in [("s", &coeffs.s), ("s_nonadj", &coeffs.s_nonadj)] {
        let rendered: Vec<String> = vals.iter().map(|p| p.to_string()).collect();
        writeln!(out, "{label}: [{}]", rendered.join(", ")).unwrap();
    }
    for (label, matrix) in [
        ("r", &coeffs.r),
        ("r_arrow", &coeffs.r_arrow),
        ("r_nonadj", &coeffs.r_nonadj),
    ] {
        writeln!(out, "{label}:").unwrap();
        for row in matrix.iter() {
            let rendered: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(out, "  [{}]", rendered.join(", ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_sentence;
    use crate::normalize::normalize;
    use crate::poly::rat;

    fn constant(p: &Poly) -> crate::poly::Rational {
        p.as_constant().expect("coefficient is constant")
    }

    // every coefficient is a nonnegative integer under unit weights
    fn all_nonnegative_integers(coeffs: &CellCoefficients) -> bool {
        use num_traits::Signed;
        let ok = |p: &Poly| {
            p.as_constant()
                .map(|c| !c.numer().is_negative() && c.denom() == &num_bigint::BigInt::from(1))
                .unwrap_or(false)
        };
        coeffs.cell_weight.iter().all(&ok)
            && coeffs.s.iter().all(&ok)
            && coeffs.s_nonadj.iter().all(&ok)
            && coeffs.r.iter().flatten().all(&ok)
            && coeffs.r_arrow.iter().flatten().all(&ok)
            && coeffs.r_nonadj.iter().flatten().all(&ok)
    }

    fn cells_of(text: &str) -> (NormalizedSentence, CellSpace) {
        let s = parse_sentence(text).unwrap();
        let ns = normalize(&s).unwrap();
        let space = enumerate_cells(&ns);
        (ns, space)
    }

    #[test]
    fn conjunction_sentence_keeps_single_cell() {
        // F(x) & G(x,y) has four raw 1-types; only F(x) & G(x,x) passes the
        // local check.
        let (_, space) = cells_of("forall x. forall y. (F(x) & G(x,y))");
        assert_eq!(space.len(), 1);
        assert!(space.cells[0].signs.iter().all(|&b| b));
    }

    #[test]
    fn unconstrained_unary_gives_two_cells() {
        let (_, space) = cells_of("forall x. (P(x) | ~P(x))");
        assert_eq!(space.len(), 2);
    }

    #[test]
    fn simple_graph_sentence_has_one_cell() {
        let (_, space) = cells_of(
            "sentence: forall x. ~R(x,x)\nsentence: forall x. forall y. (R(x,y) -> R(y,x))",
        );
        assert_eq!(space.len(), 1);
        assert!(!space.cells[0].signs[0]);
    }

    #[test]
    fn wmc_of_ground_implication() {
        // R(a,b) -> S(a) with w(R) = 2: satisfying assignments weigh 2+1+1.
        let s = parse_sentence("predicate R/2, S/1\nweight R = 2, 1\nsentence: forall x. forall y. (R(x,y) -> S(x))").unwrap();
        let ns = normalize(&s).unwrap();
        let w = wmc_ground(&ns.matrix, &ns.weights).unwrap();
        assert_eq!(constant(&w), rat(4));
    }

    #[test]
    fn wmc_tautology_and_contradiction() {
        let s = parse_sentence("forall x. (P(x) | ~P(x))").unwrap();
        let ns = normalize(&s).unwrap();
        assert_eq!(constant(&wmc_ground(&ns.matrix, &ns.weights).unwrap()), rat(2));
        let s = parse_sentence("forall x. (P(x) & ~P(x))").unwrap();
        let ns = normalize(&s).unwrap();
        assert_eq!(constant(&wmc_ground(&ns.matrix, &ns.weights).unwrap()), rat(0));
    }

    #[test]
    fn undirected_graph_coefficients() {
        let (ns, space) = cells_of(
            "sentence: forall x. ~R(x,x)\nsentence: forall x. forall y. (R(x,y) -> R(y,x))",
        );
        let r = ns.vocab.lookup("R").unwrap();
        let coeffs = compute_coefficients(&ns, &space, r).unwrap();
        assert_eq!(constant(&coeffs.s[0]), rat(2));
        assert_eq!(constant(&coeffs.r_nonadj[0][0]), rat(1));
        assert!(all_nonnegative_integers(&coeffs));
    }

    #[test]
    fn directed_graph_coefficients() {
        let (ns, space) = cells_of("forall x. ~R(x,x)");
        let r = ns.vocab.lookup("R").unwrap();
        let coeffs = compute_coefficients(&ns, &space, r).unwrap();
        assert_eq!(constant(&coeffs.s[0]), rat(4));
        assert_eq!(constant(&coeffs.r_arrow[0][0]), rat(2));
        assert_eq!(constant(&coeffs.r_nonadj[0][0]), rat(1));
        assert_eq!(constant(&coeffs.s_nonadj[0]), rat(1));
    }

    #[test]
    fn coefficient_chain_inequality_under_nonnegative_weights() {
        let (ns, space) = cells_of(
            "predicate fr/2, sm/1\nsentence: forall x. ~fr(x,x)\nsentence: forall x. forall y. (fr(x,y) -> fr(y,x))\nsentence: forall x. forall y. ((fr(x,y) & sm(x)) -> sm(y))",
        );
        let fr = ns.vocab.lookup("fr").unwrap();
        let coeffs = compute_coefficients(&ns, &space, fr).unwrap();
        for i in 0..space.len() {
            for j in 0..space.len() {
                let rn = constant(&coeffs.r_nonadj[i][j]);
                let ra = constant(&coeffs.r_arrow[i][j]);
                let rr = constant(&coeffs.r[i][j]);
                assert!(rn <= ra && ra <= rr, "chain fails at ({i},{j})");
            }
        }
    }

    #[test]
    fn closure_verification() {
        let (ns, space) = cells_of(
            "sentence: forall x. ~R(x,x)\nsentence: forall x. forall y. (R(x,y) -> R(y,x))",
        );
        let r = ns.vocab.lookup("R").unwrap();
        assert!(verify_closure(&ns, &space, r).is_ok());
        let (ns, space) = cells_of("forall x. ~R(x,x)");
        let r = ns.vocab.lookup("R").unwrap();
        assert!(verify_closure(&ns, &space, r).is_err());
    }
}
