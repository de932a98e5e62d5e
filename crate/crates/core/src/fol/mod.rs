//! Sentence AST, vocabulary, weights, cardinality constraints, ground unary
//! evidence, and axiom annotations, plus the textual parser and printer.
//!
//! The fragment is two-variable: every formula mentions at most the logical
//! variables `x` and `y`. Constants appear only as domain-element indices
//! inside ground unary evidence literals.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, Symbol};

pub use parser::parse_sentence;

/// One of the two logical variables of the fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub arity: usize,
}

/// The declared predicates of a sentence; names are unique.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vocabulary {
    preds: Vec<Predicate>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    pub fn declare(&mut self, name: &str, arity: usize) -> Result<PredId> {
        if self.lookup(name).is_some() {
            return Err(Error::Parse {
                line: 0,
                col: 0,
                msg: format!("predicate `{name}` declared twice"),
            });
        }
        self.preds.push(Predicate {
            name: name.to_string(),
            arity,
        });
        Ok(PredId(self.preds.len() - 1))
    }

    pub fn lookup(&self, name: &str) -> Option<PredId> {
        self.preds.iter().position(|p| p.name == name).map(PredId)
    }

    /// Declares `prefix`, `prefix1`, ... whichever is free first.
    pub fn fresh(&mut self, prefix: &str, arity: usize) -> PredId {
        let mut name = prefix.to_string();
        let mut i = 0usize;
        while self.lookup(&name).is_some() {
            i += 1;
            name = format!("{prefix}{i}");
        }
        self.declare(&name, arity).expect("fresh name is unused")
    }

    pub fn name(&self, id: PredId) -> &str {
        &self.preds[id.0].name
    }

    pub fn arity(&self, id: PredId) -> usize {
        self.preds[id.0].arity
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PredId> {
        (0..self.preds.len()).map(PredId)
    }

    pub fn unary_ids(&self) -> Vec<PredId> {
        self.ids().filter(|&p| self.arity(p) == 1).collect()
    }

    pub fn binary_ids(&self) -> Vec<PredId> {
        self.ids().filter(|&p| self.arity(p) == 2).collect()
    }

    pub fn require_binary(&self, id: PredId) -> Result<()> {
        if self.arity(id) != 2 {
            return Err(Error::NotBinary(self.name(id).to_string()));
        }
        Ok(())
    }

    pub fn require_unary(&self, id: PredId) -> Result<()> {
        if self.arity(id) != 1 {
            return Err(Error::NotUnary(self.name(id).to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
    ExistsEq(u32),
}

/// Recursive formula node over at most two logical variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bottom,
    Atom(PredId, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v, Box::new(f))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v, Box::new(f))
    }

    /// Conjunction of all parts; `Top` when empty.
    pub fn conjoin_all(parts: Vec<Formula>) -> Formula {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::Top,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Splits nested conjunctions into a flat list.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut out = a.conjuncts();
                out.extend(b.conjuncts());
                out
            }
            _ => vec![self],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Formula::Top | Formula::Bottom => BTreeSet::new(),
            Formula::Atom(_, args) => args.iter().copied().collect(),
            Formula::Not(f) => f.free_vars(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Formula::Quant(_, v, f) => {
                let mut s = f.free_vars();
                s.remove(v);
                s
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(..) => false,
            Formula::Not(f) => f.has_quantifier(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.has_quantifier() || b.has_quantifier(),
            Formula::Quant(..) => true,
        }
    }

    /// Swaps the roles of x and y everywhere, including quantifiers.
    pub fn swap_vars(&self) -> Formula {
        let sw = |v: Var| match v {
            Var::X => Var::Y,
            Var::Y => Var::X,
        };
        match self {
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p, args) => Formula::Atom(*p, args.iter().map(|&v| sw(v)).collect()),
            Formula::Not(f) => Formula::not(f.swap_vars()),
            Formula::And(a, b) => Formula::and(a.swap_vars(), b.swap_vars()),
            Formula::Or(a, b) => Formula::or(a.swap_vars(), b.swap_vars()),
            Formula::Implies(a, b) => Formula::implies(a.swap_vars(), b.swap_vars()),
            Formula::Iff(a, b) => Formula::iff(a.swap_vars(), b.swap_vars()),
            Formula::Quant(q, v, f) => Formula::Quant(*q, sw(*v), Box::new(f.swap_vars())),
        }
    }

    /// Evaluates a quantifier-free formula against an atom valuation.
    pub fn eval_qf(&self, val: &mut impl FnMut(PredId, &[Var]) -> bool) -> bool {
        match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(p, args) => val(*p, args),
            Formula::Not(f) => !f.eval_qf(val),
            Formula::And(a, b) => a.eval_qf(val) && b.eval_qf(val),
            Formula::Or(a, b) => a.eval_qf(val) || b.eval_qf(val),
            Formula::Implies(a, b) => !a.eval_qf(val) || b.eval_qf(val),
            Formula::Iff(a, b) => a.eval_qf(val) == b.eval_qf(val),
            Formula::Quant(..) => panic!("eval_qf on quantified formula"),
        }
    }

    /// Evaluates a closed formula over the domain `1..=n`, with ground atoms
    /// resolved by `val` (arguments are domain elements).
    pub fn eval_closed(&self, n: usize, val: &impl Fn(PredId, &[usize]) -> bool) -> bool {
        fn go(
            f: &Formula,
            n: usize,
            binding: &mut [Option<usize>; 2],
            val: &impl Fn(PredId, &[usize]) -> bool,
        ) -> bool {
            match f {
                Formula::Top => true,
                Formula::Bottom => false,
                Formula::Atom(p, args) => {
                    let grounded: Vec<usize> = args
                        .iter()
                        .map(|&v| binding[v as usize].expect("unbound variable in closed formula"))
                        .collect();
                    val(*p, &grounded)
                }
                Formula::Not(g) => !go(g, n, binding, val),
                Formula::And(a, b) => go(a, n, binding, val) && go(b, n, binding, val),
                Formula::Or(a, b) => go(a, n, binding, val) || go(b, n, binding, val),
                Formula::Implies(a, b) => !go(a, n, binding, val) || go(b, n, binding, val),
                Formula::Iff(a, b) => go(a, n, binding, val) == go(b, n, binding, val),
                Formula::Quant(q, v, body) => {
                    let slot = *v as usize;
                    let saved = binding[slot];
                    let mut count = 0usize;
                    let mut all = true;
                    let mut any = false;
                    for e in 1..=n {
                        binding[slot] = Some(e);
                        let holds = go(body, n, binding, val);
                        all &= holds;
                        any |= holds;
                        count += holds as usize;
                        // short circuit where legal
                        match q {
                            Quantifier::Forall if !all => break,
                            Quantifier::Exists if any => break,
                            Quantifier::ExistsEq(k) if count > *k as usize => break,
                            _ => {}
                        }
                    }
                    binding[slot] = saved;
                    match q {
                        Quantifier::Forall => all,
                        Quantifier::Exists => any,
                        Quantifier::ExistsEq(k) => count == *k as usize,
                    }
                }
            }
        }
        let mut binding = [None, None];
        go(self, n, &mut binding, val)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparator {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Eq => "=",
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
        }
    }
}

/// Integer polynomial in the domain-size symbol `n`, e.g. `n*(n-1)`.
/// Coefficients are stored ascending by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NExpr(pub Vec<i64>);

impl NExpr {
    pub fn constant(c: i64) -> Self {
        NExpr(if c == 0 { vec![] } else { vec![c] })
    }

    pub fn n() -> Self {
        NExpr(vec![0, 1])
    }

    pub fn add(&self, other: &NExpr) -> NExpr {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![0i64; len];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        NExpr(trim_zeros(out))
    }

    pub fn sub(&self, other: &NExpr) -> NExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NExpr {
        NExpr(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &NExpr) -> NExpr {
        if self.0.is_empty() || other.0.is_empty() {
            return NExpr(vec![]);
        }
        let mut out = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        NExpr(trim_zeros(out))
    }

    pub fn eval(&self, n: usize) -> i64 {
        let mut acc = 0i64;
        for c in self.0.iter().rev() {
            acc = acc * n as i64 + c;
        }
        acc
    }
}

fn trim_zeros(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl fmt::Display for NExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
                first = false;
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match deg {
                0 => write!(f, "{mag}")?,
                1 if mag == 1 => write!(f, "n")?,
                1 => write!(f, "{mag}*n")?,
                _ if mag == 1 => write!(f, "n^{deg}")?,
                _ => write!(f, "{mag}*n^{deg}")?,
            }
        }
        Ok(())
    }
}

/// `|P| ⋈ bound(n)`: a restriction on the number of positive ground literals
/// of `P` in a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityConstraint {
    pub pred: PredId,
    pub cmp: Comparator,
    pub bound: NExpr,
}

/// A fixed truth value for a unary atom on a named domain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundUnaryLiteral {
    pub pred: PredId,
    pub element: usize,
    pub sign: bool,
}

/// Which graph-structural constraint a query places on a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomKind {
    ConnectedK(u32),
    Bipartite,
    Tree,
    Forest,
    Sc,
    Sct,
    Ac,
    AcK(u32),
    Dt,
    Df,
    Lo,
    PermK(u32),
    BipartiteK(u32),
    ForestK(u32),
    BiAc,
    Polytree,
    Polyforest,
}

impl AxiomKind {
    pub fn label(&self) -> String {
        match self {
            AxiomKind::ConnectedK(k) => format!("connected_{k}"),
            AxiomKind::Bipartite => "bipartite".into(),
            AxiomKind::Tree => "tree".into(),
            AxiomKind::Forest => "forest".into(),
            AxiomKind::Sc => "sc".into(),
            AxiomKind::Sct => "sct".into(),
            AxiomKind::Ac => "ac".into(),
            AxiomKind::AcK(k) => format!("ac_{k}"),
            AxiomKind::Dt => "dt".into(),
            AxiomKind::Df => "df".into(),
            AxiomKind::Lo => "lo".into(),
            AxiomKind::PermK(k) => format!("perm_{k}"),
            AxiomKind::BipartiteK(k) => format!("bipartite_{k}"),
            AxiomKind::ForestK(k) => format!("forest_{k}"),
            AxiomKind::BiAc => "biac".into(),
            AxiomKind::Polytree => "polytree".into(),
            AxiomKind::Polyforest => "polyforest".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomAnnotation {
    pub kind: AxiomKind,
    pub relation: PredId,
    /// Root predicate for the directed-tree axiom.
    pub root: Option<PredId>,
}

/// Per-predicate pair of weights `(w, w̄)`, with optional symbolic tags
/// multiplied into the positive weight of cardinality-constrained or
/// edge-tracked predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMap {
    entries: Vec<(Rational, Rational)>,
    tags: Vec<Vec<Symbol>>,
}

impl WeightMap {
    /// Unit weights for every predicate of a vocabulary of length `len`.
    pub fn unit(len: usize) -> Self {
        WeightMap {
            entries: vec![(Rational::one(), Rational::one()); len],
            tags: vec![Vec::new(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Extends the map with unit entries when the vocabulary grows.
    pub fn ensure_len(&mut self, len: usize) {
        while self.entries.len() < len {
            self.entries.push((Rational::one(), Rational::one()));
            self.tags.push(Vec::new());
        }
    }

    pub fn set(&mut self, id: PredId, pos: Rational, neg: Rational) {
        self.ensure_len(id.0 + 1);
        self.entries[id.0] = (pos, neg);
    }

    pub fn get(&self, id: PredId) -> Result<&(Rational, Rational)> {
        self.entries
            .get(id.0)
            .ok_or_else(|| Error::MissingWeight(format!("#{}", id.0)))
    }

    pub fn tag(&mut self, id: PredId, sym: Symbol) {
        self.ensure_len(id.0 + 1);
        if !self.tags[id.0].contains(&sym) {
            self.tags[id.0].push(sym);
        }
    }

    pub fn tags_of(&self, id: PredId) -> &[Symbol] {
        self.tags.get(id.0).map(|t| t.as_slice()).unwrap_or(&[])
    }

    /// Positive weight including the symbolic tags, as a polynomial.
    pub fn pos_poly(&self, id: PredId) -> Result<Poly> {
        let (pos, _) = self.get(id)?;
        let mut acc = Poly::constant(pos.clone());
        for sym in self.tags_of(id) {
            acc = acc.mul(&Poly::var(sym.clone()));
        }
        Ok(acc)
    }

    pub fn neg_poly(&self, id: PredId) -> Result<Poly> {
        let (_, neg) = self.get(id)?;
        Ok(Poly::constant(neg.clone()))
    }
}

/// A ground literal over arbitrary domain elements, used by the weighting
/// operation and the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundLiteral {
    pub pred: PredId,
    pub args: Vec<usize>,
    pub sign: bool,
}

/// Product of `w(pred)` over positive literals and `w̄(pred)` over negative
/// ones; the empty set weighs 1.
pub fn literal_set_weight(literals: &[GroundLiteral], weights: &WeightMap) -> Result<Rational> {
    let mut acc = Rational::one();
    for lit in literals {
        let (pos, neg) = weights.get(lit.pred)?;
        acc *= if lit.sign { pos } else { neg };
    }
    Ok(acc)
}

/// A two-variable sentence with cardinality constraints, unary evidence,
/// axiom annotations, and its weight map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub vocab: Vocabulary,
    pub core: Formula,
    pub cardinality: Vec<CardinalityConstraint>,
    pub evidence: Vec<GroundUnaryLiteral>,
    pub axioms: Vec<AxiomAnnotation>,
    pub weights: WeightMap,
}

impl Sentence {
    /// An axiom-free sentence with unit weights over the given vocabulary.
    pub fn new(vocab: Vocabulary, core: Formula) -> Self {
        let weights = WeightMap::unit(vocab.len());
        Sentence {
            vocab,
            core,
            cardinality: Vec::new(),
            evidence: Vec::new(),
            axioms: Vec::new(),
            weights,
        }
    }

    /// A sentence with empty core over an empty vocabulary.
    pub fn empty() -> Self {
        Sentence::new(Vocabulary::new(), Formula::Top)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.core.free_vars().into_iter().next() {
            return Err(Error::FreeVariable(v.name().to_string()));
        }
        for lit in &self.evidence {
            self.vocab.require_unary(lit.pred)?;
            if self
                .evidence
                .iter()
                .any(|o| o.pred == lit.pred && o.element == lit.element && o.sign != lit.sign)
            {
                return Err(Error::ContradictoryEvidence {
                    pred: self.vocab.name(lit.pred).to_string(),
                    element: lit.element,
                });
            }
        }
        for c in &self.cardinality {
            // constraint applies to any predicate; nothing to check beyond id
            let _ = self.weights.get(c.pred)?;
        }
        Ok(())
    }

    /// Renders the sentence back in the input file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        if !self.vocab.is_empty() {
            let decls: Vec<String> = self
                .vocab
                .ids()
                .map(|p| format!("{}/{}", self.vocab.name(p), self.vocab.arity(p)))
                .collect();
            out.push_str(&format!("predicate {}\n", decls.join(", ")));
        }
        for p in self.vocab.ids() {
            let (pos, neg) = self.weights.get(p).expect("weight map is total");
            if !pos.is_one() || !neg.is_one() {
                out.push_str(&format!(
                    "weight {} = {}, {}\n",
                    self.vocab.name(p),
                    crate::poly::format_rational(pos),
                    crate::poly::format_rational(neg)
                ));
            }
        }
        out.push_str(&format!("sentence: {}\n", FormulaDisplay(&self.core, &self.vocab)));
        for c in &self.cardinality {
            out.push_str(&format!(
                "cardinality: |{}| {} {}\n",
                self.vocab.name(c.pred),
                c.cmp.symbol(),
                c.bound
            ));
        }
        if !self.evidence.is_empty() {
            let lits: Vec<String> = self
                .evidence
                .iter()
                .map(|l| {
                    format!(
                        "{}{}({})",
                        if l.sign { "" } else { "~" },
                        self.vocab.name(l.pred),
                        l.element
                    )
                })
                .collect();
            out.push_str(&format!("evidence: {}\n", lits.join(", ")));
        }
        for a in &self.axioms {
            let mut args = self.vocab.name(a.relation).to_string();
            if let Some(root) = a.root {
                args.push_str(", ");
                args.push_str(self.vocab.name(root));
            }
            out.push_str(&format!("axiom: {}({})\n", a.kind.label(), args));
        }
        out
    }
}

/// Precedence-aware formula printer; needs the vocabulary for names.
pub struct FormulaDisplay<'a>(pub &'a Formula, pub &'a Vocabulary);

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.0, self.1, 0)
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) => 5,
        Formula::Quant(..) => 0,
        _ => 6,
    }
}

fn write_formula(
    f: &mut fmt::Formatter<'_>,
    node: &Formula,
    vocab: &Vocabulary,
    parent_prec: u8,
) -> fmt::Result {
    let prec = precedence(node);
    let needs_parens = prec < parent_prec || (matches!(node, Formula::Quant(..)) && parent_prec > 0);
    if needs_parens {
        f.write_str("(")?;
    }
    match node {
        Formula::Top => f.write_str("true")?,
        Formula::Bottom => f.write_str("false")?,
        Formula::Atom(p, args) => {
            let names: Vec<&str> = args.iter().map(|v| v.name()).collect();
            write!(f, "{}({})", vocab.name(*p), names.join(","))?;
        }
        Formula::Not(g) => {
            f.write_str("~")?;
            write_formula(f, g, vocab, 5)?;
        }
        Formula::And(a, b) => {
            write_formula(f, a, vocab, 4)?;
            f.write_str(" & ")?;
            write_formula(f, b, vocab, 5)?;
        }
        Formula::Or(a, b) => {
            write_formula(f, a, vocab, 3)?;
            f.write_str(" | ")?;
            write_formula(f, b, vocab, 4)?;
        }
        Formula::Implies(a, b) => {
            write_formula(f, a, vocab, 3)?;
            f.write_str(" -> ")?;
            write_formula(f, b, vocab, 2)?;
        }
        Formula::Iff(a, b) => {
            write_formula(f, a, vocab, 2)?;
            f.write_str(" <-> ")?;
            write_formula(f, b, vocab, 2)?;
        }
        Formula::Quant(q, v, body) => {
            match q {
                Quantifier::Forall => write!(f, "forall {}. ", v.name())?,
                Quantifier::Exists => write!(f, "exists {}. ", v.name())?,
                Quantifier::ExistsEq(k) => write!(f, "exists_eq {k} {}. ", v.name())?,
            }
            write_formula(f, body, vocab, 0)?;
        }
    }
    if needs_parens {
        f.write_str(")")?;
    }
    Ok(())
}
