//! Reduction of a sentence to the form `forall x forall y psi(x,y)` with
//! auxiliary weighted predicates.
//!
//! The pipeline is:
//! 1. [`encode_counting_templates`] rewrites the supported `exists_eq 1`
//!    patterns into plain existentials plus cardinality constraints,
//! 2. [`skolemize`] eliminates existentials with fresh unary predicates
//!    carrying weights `(1, -1)`, preserving the weighted model count,
//! 3. [`attach_cardinality_symbols`] moves cardinality constraints into
//!    symbolic weights with extraction rules applied to final results.
//!
//! Only `forall`, `exists`, and three `exists_eq 1` templates are supported;
//! anything else is rejected with a clear error. General counting-quantifier
//! elimination is out of scope.

use crate::error::{Error, Result};
use crate::fol::{
    CardinalityConstraint, Comparator, Formula, GroundUnaryLiteral, NExpr, PredId, Quantifier,
    Sentence, Var, WeightMap,
};
use crate::poly::{rat, Poly, Symbol};

/// How many distinct evidence signatures the configuration lattice accepts.
pub const MAX_EVIDENCE_GROUPS: usize = 8;

/// One symbolic weight tag: which predicate carries it, the extraction rules
/// derived from cardinality constraints, and an optional exponent cap that is
/// sound to truncate at.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    pub symbol: Symbol,
    pub pred: PredId,
    pub rules: Vec<(Comparator, NExpr)>,
    /// Symbols with `keep` survive extraction (used for edge tracking).
    pub keep: bool,
    pub caps: Vec<NExpr>,
}

/// Extraction constraint relating several symbols: the exponents must sum to
/// `total(n)`.
#[derive(Clone, Debug)]
pub struct JointRule {
    pub symbols: Vec<Symbol>,
    pub total: NExpr,
}

/// A ground-unary-literal signature: signs assigned to unary predicates.
pub type Signature = Vec<(PredId, bool)>;

/// An evidence group: elements of the domain sharing one ground-unary-literal
/// signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAtN {
    pub signature: Signature,
    pub size: usize,
}

/// A sentence reduced to `forall x forall y psi(x,y)` plus bookkeeping for
/// symbolic weights and evidence groups.
#[derive(Clone, Debug)]
pub struct NormalizedSentence {
    pub vocab: crate::fol::Vocabulary,
    pub matrix: Formula,
    pub weights: WeightMap,
    pub cardinality: Vec<CardinalityConstraint>,
    pub symbols: Vec<SymbolSpec>,
    pub joint_rules: Vec<JointRule>,
    /// (signature, number of mentioned elements) per distinct signature.
    pub explicit_groups: Vec<(Signature, usize)>,
    max_evidence_element: usize,
}

impl NormalizedSentence {
    /// Evidence groups instantiated at domain size `n`; the anonymous group
    /// of unmentioned elements comes first when nonempty.
    pub fn groups_at(&self, n: usize) -> Result<Vec<GroupAtN>> {
        if n < 1 {
            return Err(Error::DomainTooSmall);
        }
        if self.max_evidence_element > n {
            return Err(Error::EvidenceOutOfRange(self.max_evidence_element, n));
        }
        let mentioned: usize = self.explicit_groups.iter().map(|(_, m)| m).sum();
        let mut groups = Vec::new();
        if n > mentioned {
            groups.push(GroupAtN {
                signature: Vec::new(),
                size: n - mentioned,
            });
        }
        for (sig, members) in &self.explicit_groups {
            groups.push(GroupAtN {
                signature: sig.clone(),
                size: *members,
            });
        }
        Ok(groups)
    }

    /// Truncation caps for symbolic exponents at domain size `n`.
    pub fn caps_at(&self, n: usize) -> std::collections::BTreeMap<Symbol, u32> {
        let mut caps = std::collections::BTreeMap::new();
        for spec in &self.symbols {
            let mut cap: Option<i64> = None;
            for c in &spec.caps {
                let v = c.eval(n).max(0);
                cap = Some(match cap {
                    Some(old) => old.min(v),
                    None => v,
                });
            }
            if let Some(v) = cap {
                caps.insert(spec.symbol.clone(), v as u32);
            }
        }
        for rule in &self.joint_rules {
            let total = rule.total.eval(n).max(0) as u32;
            for sym in &rule.symbols {
                let entry = caps.entry(sym.clone()).or_insert(total);
                *entry = (*entry).min(total);
            }
        }
        caps
    }

    /// Applies all extraction rules at domain size `n` and erases the ruled
    /// symbols from `p`. Symbols marked `keep` are left untouched.
    pub fn extract_at(&self, p: &Poly, n: usize) -> Poly {
        let ruled: Vec<&SymbolSpec> = self.symbols.iter().filter(|s| !s.keep).collect();
        if ruled.is_empty() && self.joint_rules.is_empty() {
            return p.clone();
        }
        let syms: Vec<Symbol> = ruled.iter().map(|s| s.symbol.clone()).collect();
        let bounds: Vec<Vec<(Comparator, i64)>> = ruled
            .iter()
            .map(|s| s.rules.iter().map(|(c, b)| (*c, b.eval(n))).collect())
            .collect();
        let joints: Vec<(Vec<usize>, i64)> = self
            .joint_rules
            .iter()
            .map(|r| {
                let idx = r
                    .symbols
                    .iter()
                    .map(|s| syms.iter().position(|t| t == s).expect("joint rule symbol"))
                    .collect();
                (idx, r.total.eval(n))
            })
            .collect();
        p.extract(&syms, |exps| {
            for (e, rules) in exps.iter().zip(&bounds) {
                for (cmp, bound) in rules {
                    if !cmp.holds(*e as i64, *bound) {
                        return false;
                    }
                }
            }
            for (idx, total) in &joints {
                let sum: i64 = idx.iter().map(|&i| exps[i] as i64).sum();
                if sum != *total {
                    return false;
                }
            }
            true
        })
    }

    /// Human-readable dump for `--dump-normalized`.
    pub fn describe(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(
            out,
            "matrix: {}",
            crate::fol::FormulaDisplay(&self.matrix, &self.vocab)
        )
        .unwrap();
        for p in self.vocab.ids() {
            let (pos, neg) = self.weights.get(p).expect("total weight map");
            let tag: String = self
                .weights
                .tags_of(p)
                .iter()
                .map(|s| format!(" * {s}"))
                .collect();
            writeln!(
                out,
                "weight {} = {}{}, {}",
                self.vocab.name(p),
                crate::poly::format_rational(pos),
                tag,
                crate::poly::format_rational(neg)
            )
            .unwrap();
        }
        for spec in &self.symbols {
            for (cmp, bound) in &spec.rules {
                writeln!(
                    out,
                    "extract {}: exponent {} {}",
                    spec.symbol,
                    cmp.symbol(),
                    bound
                )
                .unwrap();
            }
        }
        for rule in &self.joint_rules {
            let syms: Vec<String> = rule.symbols.iter().map(|s| s.to_string()).collect();
            writeln!(out, "extract joint: {} sum to {}", syms.join(" + "), rule.total).unwrap();
        }
        for (sig, members) in &self.explicit_groups {
            let lits: Vec<String> = sig
                .iter()
                .map(|(p, s)| format!("{}{}", if *s { "" } else { "~" }, self.vocab.name(*p)))
                .collect();
            writeln!(out, "evidence group [{}]: {} elements", lits.join(", "), members).unwrap();
        }
        out
    }
}

/// Convenience pipeline: counting templates, skolemization, symbol
/// attachment.
pub fn normalize(s: &Sentence) -> Result<NormalizedSentence> {
    let encoded = encode_counting_templates(s)?;
    let ns = skolemize(&encoded)?;
    attach_cardinality_symbols(ns)
}

/// Conjoins `forall x ~R(x,x)` and `forall x forall y (R(x,y) -> R(y,x))`.
pub fn close_symmetric_irreflexive(s: &Sentence, relation: PredId) -> Result<Sentence> {
    s.vocab.require_binary(relation)?;
    let mut out = s.clone();
    let irref = Formula::forall(
        Var::X,
        Formula::not(Formula::Atom(relation, vec![Var::X, Var::X])),
    );
    let sym = Formula::forall(
        Var::X,
        Formula::forall(
            Var::Y,
            Formula::implies(
                Formula::Atom(relation, vec![Var::X, Var::Y]),
                Formula::Atom(relation, vec![Var::Y, Var::X]),
            ),
        ),
    );
    out.core = Formula::and(out.core, Formula::and(irref, sym));
    Ok(out)
}

/// Rewrites the supported `exists_eq 1` templates:
///
/// * `forall x exists_eq 1 y R(x,y)` (and the mirrored `R(y,x)` form) becomes
///   the plain existential plus `|R| = n`; when both orientations occur for
///   the same relation a single `|R| = n` suffices,
/// * `forall x (~G(x) -> exists_eq 1 y R(y,x))`, in the presence of
///   `|G| = 1`, becomes the guarded existential plus `|R| = n - 1`.
///
/// The existential lower bound plus the exact total force exactly-one.
pub fn encode_counting_templates(s: &Sentence) -> Result<Sentence> {
    let conjuncts: Vec<Formula> = s.core.conjuncts().into_iter().cloned().collect();
    let mut parts: Vec<Formula> = Vec::new();
    let mut added: Vec<CardinalityConstraint> = Vec::new();
    for conjunct in conjuncts {
        match match_counting_template(&conjunct, s)? {
            Some((replacement, constraint)) => {
                parts.push(replacement);
                let dup = added.iter().chain(s.cardinality.iter()).any(|c| {
                    c.pred == constraint.pred
                        && c.cmp == constraint.cmp
                        && c.bound == constraint.bound
                });
                if !dup {
                    added.push(constraint);
                }
            }
            None => {
                ensure_no_counting(&conjunct, s)?;
                parts.push(conjunct);
            }
        }
    }
    let mut out = s.clone();
    out.core = Formula::conjoin_all(parts);
    out.cardinality.extend(added);
    Ok(out)
}

fn describe_formula(f: &Formula, s: &Sentence) -> String {
    crate::fol::FormulaDisplay(f, &s.vocab).to_string()
}

fn ensure_no_counting(f: &Formula, s: &Sentence) -> Result<()> {
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(..) => Ok(()),
        Formula::Not(g) => ensure_no_counting(g, s),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            ensure_no_counting(a, s)?;
            ensure_no_counting(b, s)
        }
        Formula::Quant(Quantifier::ExistsEq(_), ..) => {
            Err(Error::UnsupportedCounting(describe_formula(f, s)))
        }
        Formula::Quant(_, _, g) => ensure_no_counting(g, s),
    }
}

fn match_counting_template(
    conjunct: &Formula,
    s: &Sentence,
) -> Result<Option<(Formula, CardinalityConstraint)>> {
    let Formula::Quant(Quantifier::Forall, outer, body) = conjunct else {
        return Ok(None);
    };
    // forall x exists_eq 1 y R(x,y)  /  forall x exists_eq 1 y R(y,x)
    if let Formula::Quant(Quantifier::ExistsEq(k), inner, atom) = body.as_ref() {
        if *k != 1 {
            return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
        }
        let Formula::Atom(rel, args) = atom.as_ref() else {
            return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
        };
        if args.len() != 2 || inner == outer {
            return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
        }
        let replacement = Formula::Quant(
            Quantifier::Forall,
            *outer,
            Box::new(Formula::Quant(
                Quantifier::Exists,
                *inner,
                Box::new(atom.as_ref().clone()),
            )),
        );
        let constraint = CardinalityConstraint {
            pred: *rel,
            cmp: Comparator::Eq,
            bound: NExpr::n(),
        };
        return Ok(Some((replacement, constraint)));
    }
    // forall x (~G(x) -> exists_eq 1 y R(y,x)), guarded form
    if let Formula::Implies(guard, then) = body.as_ref() {
        if let Formula::Quant(Quantifier::ExistsEq(k), inner, atom) = then.as_ref() {
            if *k != 1 {
                return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
            }
            let Formula::Not(g) = guard.as_ref() else {
                return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
            };
            let Formula::Atom(gpred, gargs) = g.as_ref() else {
                return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
            };
            let Formula::Atom(rel, args) = atom.as_ref() else {
                return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
            };
            let guarded_ok =
                gargs == &vec![*outer] && args == &vec![*inner, *outer] && inner != outer;
            if !guarded_ok {
                return Err(Error::UnsupportedCounting(describe_formula(conjunct, s)));
            }
            // the guard predicate must be pinned to a single positive literal
            let has_g1 = s.cardinality.iter().any(|c| {
                c.pred == *gpred && c.cmp == Comparator::Eq && c.bound == NExpr::constant(1)
            });
            if !has_g1 {
                return Err(Error::UnsupportedCounting(format!(
                    "guarded template needs |{}| = 1 alongside {}",
                    s.vocab.name(*gpred),
                    describe_formula(conjunct, s)
                )));
            }
            let replacement = Formula::Quant(
                Quantifier::Forall,
                *outer,
                Box::new(Formula::implies(
                    guard.as_ref().clone(),
                    Formula::Quant(Quantifier::Exists, *inner, Box::new(atom.as_ref().clone())),
                )),
            );
            let constraint = CardinalityConstraint {
                pred: *rel,
                cmp: Comparator::Eq,
                bound: NExpr::n().sub(&NExpr::constant(1)),
            };
            return Ok(Some((replacement, constraint)));
        }
    }
    Ok(None)
}

/// Eliminates existential quantifiers, producing the quantifier-free matrix.
/// Each `forall x exists y phi` conjunct becomes `Sk(x) | ~phi(x,y)` with a
/// fresh unary predicate weighted `(1, -1)`; models without a witness cancel.
pub fn skolemize(s: &Sentence) -> Result<NormalizedSentence> {
    let mut vocab = s.vocab.clone();
    let mut weights = s.weights.clone();
    weights.ensure_len(vocab.len());
    let mut matrix_parts: Vec<Formula> = Vec::new();

    for conjunct in s.core.conjuncts() {
        let mut stripped = conjunct.clone();
        let mut outer_vars: Vec<Var> = Vec::new();
        while let Formula::Quant(Quantifier::Forall, v, body) = stripped {
            if !outer_vars.contains(&v) {
                outer_vars.push(v);
            }
            stripped = *body;
        }
        if !stripped.has_quantifier() {
            matrix_parts.push(stripped);
            continue;
        }
        if outer_vars.len() != 1 {
            return Err(Error::UnsupportedShape(format!(
                "existential under {} universal quantifiers in {}",
                outer_vars.len(),
                describe_formula(conjunct, s)
            )));
        }
        let outer = outer_vars[0];
        let (guard, exists_body, inner) = decompose_existential(&stripped)
            .ok_or_else(|| Error::UnsupportedShape(describe_formula(conjunct, s)))?;
        if inner == outer {
            return Err(Error::UnsupportedShape(describe_formula(conjunct, s)));
        }
        // forall outer (guard | exists inner phi) == forall outer exists inner (guard | phi)
        let phi = match guard {
            Some(g) => Formula::or(g, exists_body),
            None => exists_body,
        };
        if phi.has_quantifier() {
            return Err(Error::UnsupportedShape(describe_formula(conjunct, s)));
        }
        let sk = vocab.fresh("__sk", 1);
        weights.ensure_len(vocab.len());
        weights.set(sk, rat(1), rat(-1));
        matrix_parts.push(Formula::or(
            Formula::Atom(sk, vec![outer]),
            Formula::not(phi),
        ));
    }

    let (explicit_groups, max_evidence_element) = build_groups(&s.evidence)?;
    Ok(NormalizedSentence {
        vocab,
        matrix: Formula::conjoin_all(matrix_parts),
        weights,
        cardinality: s.cardinality.clone(),
        symbols: Vec::new(),
        joint_rules: Vec::new(),
        explicit_groups,
        max_evidence_element,
    })
}

/// Splits a body into (optional guard over the outer variable, existential
/// body, inner variable). Accepts `exists y phi`, `gamma -> exists y phi`,
/// and `gamma | exists y phi` with a quantifier-free `gamma` not using the
/// inner variable.
fn decompose_existential(body: &Formula) -> Option<(Option<Formula>, Formula, Var)> {
    let guard_ok =
        |g: &Formula, inner: Var| !g.has_quantifier() && !g.free_vars().contains(&inner);
    match body {
        Formula::Quant(Quantifier::Exists, inner, phi) => Some((None, phi.as_ref().clone(), *inner)),
        Formula::Implies(gamma, rest) => {
            if let Formula::Quant(Quantifier::Exists, inner, phi) = rest.as_ref() {
                if guard_ok(gamma, *inner) {
                    return Some((
                        Some(Formula::not(gamma.as_ref().clone())),
                        phi.as_ref().clone(),
                        *inner,
                    ));
                }
            }
            None
        }
        Formula::Or(a, b) => {
            for (gamma, rest) in [(a, b), (b, a)] {
                if let Formula::Quant(Quantifier::Exists, inner, phi) = rest.as_ref() {
                    if guard_ok(gamma, *inner) {
                        return Some((Some(gamma.as_ref().clone()), phi.as_ref().clone(), *inner));
                    }
                }
            }
            None
        }
        _ => None,
    }
}

fn build_groups(evidence: &[GroundUnaryLiteral]) -> Result<(Vec<(Signature, usize)>, usize)> {
    use std::collections::BTreeMap;
    let mut per_element: BTreeMap<usize, Signature> = BTreeMap::new();
    let mut max_element = 0usize;
    for lit in evidence {
        max_element = max_element.max(lit.element);
        let sig = per_element.entry(lit.element).or_default();
        if !sig.contains(&(lit.pred, lit.sign)) {
            sig.push((lit.pred, lit.sign));
        }
    }
    let mut groups: Vec<(Signature, usize)> = Vec::new();
    for (_, mut sig) in per_element {
        sig.sort();
        match groups.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, count)) => *count += 1,
            None => groups.push((sig, 1)),
        }
    }
    if groups.len() > MAX_EVIDENCE_GROUPS {
        return Err(Error::TooManyEvidenceGroups(
            groups.len(),
            MAX_EVIDENCE_GROUPS,
        ));
    }
    Ok((groups, max_element))
}

/// Multiplies the positive weight of each cardinality-constrained predicate
/// by a fresh symbol and records extraction rules. Summing the kept exponents
/// recovers the unconstrained count, so extraction commutes with all later
/// polynomial operations.
pub fn attach_cardinality_symbols(mut ns: NormalizedSentence) -> Result<NormalizedSentence> {
    let constraints = std::mem::take(&mut ns.cardinality);
    for c in &constraints {
        let sym = Symbol::new(&format!("#{}", ns.vocab.name(c.pred)));
        let spec = match ns.symbols.iter_mut().find(|s| s.pred == c.pred && !s.keep) {
            Some(existing) => existing,
            None => {
                ns.weights.tag(c.pred, sym.clone());
                ns.symbols.push(SymbolSpec {
                    symbol: sym.clone(),
                    pred: c.pred,
                    rules: Vec::new(),
                    keep: false,
                    caps: Vec::new(),
                });
                ns.symbols.last_mut().unwrap()
            }
        };
        spec.rules.push((c.cmp, c.bound.clone()));
        match c.cmp {
            Comparator::Eq | Comparator::Le => spec.caps.push(c.bound.clone()),
            Comparator::Lt => spec.caps.push(c.bound.sub(&NExpr::constant(1))),
            _ => {}
        }
    }
    ns.cardinality = constraints;
    Ok(ns)
}

/// Ensures each predicate carries a counting symbol (reusing an existing
/// extraction symbol when present) and records the joint rule that their
/// exponents sum to `total(n)`.
pub fn attach_joint_cardinality(ns: &mut NormalizedSentence, preds: &[PredId], total: NExpr) {
    let mut symbols = Vec::new();
    for &pred in preds {
        let existing = ns
            .symbols
            .iter()
            .find(|s| s.pred == pred && !s.keep)
            .map(|s| s.symbol.clone());
        let sym = match existing {
            Some(sym) => sym,
            None => {
                let sym = Symbol::new(&format!("#{}", ns.vocab.name(pred)));
                ns.weights.tag(pred, sym.clone());
                ns.symbols.push(SymbolSpec {
                    symbol: sym.clone(),
                    pred,
                    rules: Vec::new(),
                    keep: false,
                    caps: vec![total.clone()],
                });
                sym
            }
        };
        symbols.push(sym);
    }
    ns.joint_rules.push(JointRule { symbols, total });
}

/// Tags `relation` with a fresh kept symbol whose exponent counts positive
/// ground literals; used for edge tracking in trivariate queries.
pub fn attach_edge_symbol(
    ns: &mut NormalizedSentence,
    relation: PredId,
    name: &str,
    cap: NExpr,
) -> Symbol {
    let sym = Symbol::new(name);
    ns.weights.tag(relation, sym.clone());
    ns.symbols.push(SymbolSpec {
        symbol: sym.clone(),
        pred: relation,
        rules: Vec::new(),
        keep: true,
        caps: vec![cap],
    });
    sym
}
