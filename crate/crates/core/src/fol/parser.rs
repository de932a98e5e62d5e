//! Line-oriented parser for the sentence file format.
//!
//! ```text
//! predicate R/2, S/1
//! weight R = 2, 1          # w, w̄ as rationals "p/q" or integers
//! sentence: forall x. forall y. (R(x,y) -> S(y))
//! cardinality: |R| = n*(n-1)
//! evidence: S(1), ~S(2)
//! axiom: tree(R)
//! ```
//!
//! Comments start with `#`. A text whose first line starts with none of the
//! directive keywords is parsed as a bare formula with predicates declared
//! implicitly at first use.

use num_bigint::BigInt;
use num_traits::One;

use super::*;
use crate::error::{Error, Result};
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Equal,
    Pipe,
    Tilde,
    Amp,
    Arrow,
    DArrow,
    Lt,
    Le,
    Ge,
    Gt,
    Star,
    Plus,
    Minus,
    Colon,
    Caret,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            t => format!("`{}`", t.glyph()),
        }
    }

    fn glyph(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Slash => "/",
            Tok::Equal => "=",
            Tok::Pipe => "|",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Colon => ":",
            Tok::Caret => "^",
            _ => "?",
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let mut push = |tok: Tok, len: usize| {
            out.push(Lexed {
                tok,
                line: lineno,
                col,
            });
            len
        };
        i += match c {
            '#' => break,
            c if c.is_whitespace() => 1,
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                push(Tok::Ident(word), j - start)
            }
            c if c.is_ascii_digit() => {
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let n: u64 = word
                    .parse()
                    .map_err(|_| err(lineno, col, format!("integer `{word}` out of range")))?;
                push(Tok::Int(n), j - start)
            }
            '(' => push(Tok::LParen, 1),
            ')' => push(Tok::RParen, 1),
            ',' => push(Tok::Comma, 1),
            '.' => push(Tok::Dot, 1),
            '/' => push(Tok::Slash, 1),
            '=' => push(Tok::Equal, 1),
            '|' => push(Tok::Pipe, 1),
            '~' => push(Tok::Tilde, 1),
            '&' => push(Tok::Amp, 1),
            '*' => push(Tok::Star, 1),
            '+' => push(Tok::Plus, 1),
            ':' => push(Tok::Colon, 1),
            '^' => push(Tok::Caret, 1),
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    push(Tok::Arrow, 2)
                } else {
                    push(Tok::Minus, 1)
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    push(Tok::DArrow, 3)
                } else if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Le, 2)
                } else {
                    push(Tok::Lt, 1)
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    push(Tok::Ge, 2)
                } else {
                    push(Tok::Gt, 1)
                }
            }
            other => return Err(err(lineno, col, format!("unexpected character `{other}`"))),
        };
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Lexed>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(toks: Vec<Lexed>, line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(l) => (l.line, l.col),
            None => (
                self.line,
                self.toks.last().map(|l| l.col + 1).unwrap_or(1),
            ),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<()> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if &t == want => Ok(()),
            Some(t) => Err(err(
                line,
                col,
                format!("expected {} but found {}", want.describe(), t.describe()),
            )),
            None => Err(err(
                line,
                col,
                format!("expected {} but the line ended", want.describe()),
            )),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(err(
                line,
                col,
                format!("expected an identifier but found {}", t.describe()),
            )),
            None => Err(err(line, col, "expected an identifier")),
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            Some(t) => Err(err(
                line,
                col,
                format!("expected an integer but found {}", t.describe()),
            )),
            None => Err(err(line, col, "expected an integer")),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            let (line, col) = self.here();
            return Err(err(
                line,
                col,
                format!("unexpected trailing {}", self.toks[self.pos].tok.describe()),
            ));
        }
        Ok(())
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

struct SentenceBuilder {
    vocab: Vocabulary,
    weights: Vec<(PredId, Rational, Rational)>,
    parts: Vec<Formula>,
    cardinality: Vec<CardinalityConstraint>,
    evidence: Vec<GroundUnaryLiteral>,
    axioms: Vec<AxiomAnnotation>,
}

impl SentenceBuilder {
    fn new() -> Self {
        SentenceBuilder {
            vocab: Vocabulary::new(),
            weights: Vec::new(),
            parts: Vec::new(),
            cardinality: Vec::new(),
            evidence: Vec::new(),
            axioms: Vec::new(),
        }
    }

    fn declare(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<PredId> {
        if !(1..=2).contains(&arity) {
            return Err(err(
                line,
                col,
                format!("predicate `{name}` must have arity 1 or 2, got {arity}"),
            ));
        }
        self.vocab
            .declare(name, arity)
            .map_err(|_| err(line, col, format!("predicate `{name}` declared twice")))
    }

    fn resolve(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<PredId> {
        match self.vocab.lookup(name) {
            Some(id) => {
                if self.vocab.arity(id) != arity {
                    Err(Error::ArityMismatch {
                        pred: name.to_string(),
                        declared: self.vocab.arity(id),
                        got: arity,
                    })
                } else {
                    Ok(id)
                }
            }
            None => self.declare(name, arity, line, col),
        }
    }

    fn finish(self) -> Result<Sentence> {
        let mut weights = WeightMap::unit(self.vocab.len());
        for (id, pos, neg) in self.weights {
            weights.set(id, pos, neg);
        }
        let sentence = Sentence {
            vocab: self.vocab,
            core: Formula::conjoin_all(self.parts),
            cardinality: self.cardinality,
            evidence: self.evidence,
            axioms: self.axioms,
            weights,
        };
        sentence.validate()?;
        Ok(sentence)
    }
}

const DIRECTIVES: [&str; 6] = [
    "predicate",
    "weight",
    "sentence",
    "cardinality",
    "evidence",
    "axiom",
];

/// Parses the sentence file format (or a bare formula) into a [`Sentence`].
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let mut builder = SentenceBuilder::new();
    let mut lines: Vec<(usize, Vec<Lexed>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks = tokenize_line(raw, i + 1)?;
        if !toks.is_empty() {
            lines.push((i + 1, toks));
        }
    }
    let file_mode = match lines.first() {
        Some((_, toks)) => matches!(&toks[0].tok, Tok::Ident(w) if DIRECTIVES.contains(&w.as_str())),
        None => false,
    };
    if !file_mode {
        // Bare formula: all tokens form one sentence.
        let all: Vec<Lexed> = lines.into_iter().flat_map(|(_, t)| t).collect();
        let lineno = 1;
        let mut cur = Cursor::new(all, lineno);
        let formula = parse_formula(&mut cur, &mut builder)?;
        cur.expect_end()?;
        builder.parts.push(formula);
        return builder.finish();
    }
    for (lineno, toks) in lines {
        let mut cur = Cursor::new(toks, lineno);
        let word = cur.expect_ident()?;
        match word.as_str() {
            "predicate" => {
                cur.eat(&Tok::Colon);
                loop {
                    let (line, col) = cur.here();
                    let name = cur.expect_ident()?;
                    cur.expect(&Tok::Slash)?;
                    let arity = cur.expect_int()? as usize;
                    builder.declare(&name, arity, line, col)?;
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                cur.expect_end()?;
            }
            "weight" => {
                cur.eat(&Tok::Colon);
                let (line, col) = cur.here();
                let name = cur.expect_ident()?;
                let id = builder
                    .vocab
                    .lookup(&name)
                    .ok_or_else(|| err(line, col, format!("predicate `{name}` not declared")))?;
                cur.expect(&Tok::Equal)?;
                let pos = parse_rational_tokens(&mut cur)?;
                cur.expect(&Tok::Comma)?;
                let neg = parse_rational_tokens(&mut cur)?;
                cur.expect_end()?;
                builder.weights.push((id, pos, neg));
            }
            "sentence" => {
                cur.expect(&Tok::Colon)?;
                let formula = parse_formula(&mut cur, &mut builder)?;
                cur.expect_end()?;
                builder.parts.push(formula);
            }
            "cardinality" => {
                cur.expect(&Tok::Colon)?;
                cur.expect(&Tok::Pipe)?;
                let (line, col) = cur.here();
                let name = cur.expect_ident()?;
                let pred = builder
                    .vocab
                    .lookup(&name)
                    .ok_or_else(|| err(line, col, format!("predicate `{name}` not declared")))?;
                cur.expect(&Tok::Pipe)?;
                let cmp = parse_comparator(&mut cur)?;
                let bound = parse_nexpr(&mut cur)?;
                cur.expect_end()?;
                builder
                    .cardinality
                    .push(CardinalityConstraint { pred, cmp, bound });
            }
            "evidence" => {
                cur.expect(&Tok::Colon)?;
                loop {
                    let sign = !cur.eat(&Tok::Tilde);
                    let (line, col) = cur.here();
                    let name = cur.expect_ident()?;
                    let pred = builder
                        .vocab
                        .lookup(&name)
                        .ok_or_else(|| err(line, col, format!("predicate `{name}` not declared")))?;
                    cur.expect(&Tok::LParen)?;
                    let element = cur.expect_int()? as usize;
                    cur.expect(&Tok::RParen)?;
                    builder.evidence.push(GroundUnaryLiteral {
                        pred,
                        element,
                        sign,
                    });
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                cur.expect_end()?;
            }
            "axiom" => {
                cur.expect(&Tok::Colon)?;
                let (line, col) = cur.here();
                let kind_word = cur.expect_ident()?;
                let kind = parse_axiom_kind(&kind_word, line, col)?;
                cur.expect(&Tok::LParen)?;
                let (rline, rcol) = cur.here();
                let rel_name = cur.expect_ident()?;
                let relation = builder.vocab.lookup(&rel_name).ok_or_else(|| {
                    err(rline, rcol, format!("predicate `{rel_name}` not declared"))
                })?;
                let mut root = None;
                if cur.eat(&Tok::Comma) {
                    let (gline, gcol) = cur.here();
                    let root_name = cur.expect_ident()?;
                    root = Some(builder.vocab.lookup(&root_name).ok_or_else(|| {
                        err(gline, gcol, format!("predicate `{root_name}` not declared"))
                    })?);
                }
                cur.expect(&Tok::RParen)?;
                cur.expect_end()?;
                if matches!(kind, AxiomKind::Dt) && root.is_none() {
                    return Err(Error::AxiomParameter {
                        kind: "dt".into(),
                        what: "a root predicate as its second argument".into(),
                    });
                }
                builder.axioms.push(AxiomAnnotation {
                    kind,
                    relation,
                    root,
                });
            }
            other => {
                return Err(err(
                    lineno,
                    1,
                    format!("unknown directive `{other}` (expected one of {DIRECTIVES:?})"),
                ))
            }
        }
    }
    builder.finish()
}

fn parse_axiom_kind(word: &str, line: usize, col: usize) -> Result<AxiomKind> {
    let lower = word.to_ascii_lowercase();
    if let Some((prefix, suffix)) = lower.rsplit_once('_') {
        if let Ok(k) = suffix.parse::<u32>() {
            return match prefix {
                "connected" => Ok(AxiomKind::ConnectedK(k)),
                "perm" => Ok(AxiomKind::PermK(k)),
                "bipartite" => Ok(AxiomKind::BipartiteK(k)),
                "forest" => Ok(AxiomKind::ForestK(k)),
                "ac" => Ok(AxiomKind::AcK(k)),
                _ => Err(err(line, col, format!("unknown axiom `{word}`"))),
            };
        }
    }
    match lower.as_str() {
        "bipartite" => Ok(AxiomKind::Bipartite),
        "tree" => Ok(AxiomKind::Tree),
        "forest" => Ok(AxiomKind::Forest),
        "sc" => Ok(AxiomKind::Sc),
        "sct" => Ok(AxiomKind::Sct),
        "ac" => Ok(AxiomKind::Ac),
        "dt" => Ok(AxiomKind::Dt),
        "df" => Ok(AxiomKind::Df),
        "lo" => Ok(AxiomKind::Lo),
        "biac" => Ok(AxiomKind::BiAc),
        "polytree" => Ok(AxiomKind::Polytree),
        "polyforest" => Ok(AxiomKind::Polyforest),
        _ => Err(err(line, col, format!("unknown axiom `{word}`"))),
    }
}

fn parse_comparator(cur: &mut Cursor) -> Result<Comparator> {
    let (line, col) = cur.here();
    match cur.next() {
        Some(Tok::Lt) => Ok(Comparator::Lt),
        Some(Tok::Le) => Ok(Comparator::Le),
        Some(Tok::Equal) => Ok(Comparator::Eq),
        Some(Tok::Ge) => Ok(Comparator::Ge),
        Some(Tok::Gt) => Ok(Comparator::Gt),
        other => Err(err(
            line,
            col,
            format!(
                "expected a comparison operator, found {}",
                other.map(|t| t.describe()).unwrap_or_else(|| "end of line".into())
            ),
        )),
    }
}

fn parse_rational_tokens(cur: &mut Cursor) -> Result<Rational> {
    let negative = cur.eat(&Tok::Minus);
    let num = cur.expect_int()?;
    let mut num = BigInt::from(num);
    if negative {
        num = -num;
    }
    let den = if cur.eat(&Tok::Slash) {
        BigInt::from(cur.expect_int()?)
    } else {
        BigInt::one()
    };
    if den == BigInt::from(0) {
        let (line, col) = cur.here();
        return Err(err(line, col, "rational with zero denominator"));
    }
    Ok(Rational::new(num, den))
}

// n-expression grammar: sum of products of (INT | n | parenthesized), with
// optional ^INT powers and unary minus.
fn parse_nexpr(cur: &mut Cursor) -> Result<NExpr> {
    parse_nexpr_sum(cur)
}

fn parse_nexpr_sum(cur: &mut Cursor) -> Result<NExpr> {
    let mut acc = if cur.eat(&Tok::Minus) {
        parse_nexpr_product(cur)?.neg()
    } else {
        parse_nexpr_product(cur)?
    };
    loop {
        if cur.eat(&Tok::Plus) {
            acc = acc.add(&parse_nexpr_product(cur)?);
        } else if cur.eat(&Tok::Minus) {
            acc = acc.sub(&parse_nexpr_product(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_nexpr_product(cur: &mut Cursor) -> Result<NExpr> {
    let mut acc = parse_nexpr_power(cur)?;
    while cur.eat(&Tok::Star) {
        acc = acc.mul(&parse_nexpr_power(cur)?);
    }
    Ok(acc)
}

fn parse_nexpr_power(cur: &mut Cursor) -> Result<NExpr> {
    let base = parse_nexpr_primary(cur)?;
    if cur.eat(&Tok::Caret) {
        let k = cur.expect_int()?;
        let mut acc = NExpr::constant(1);
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }
    Ok(base)
}

fn parse_nexpr_primary(cur: &mut Cursor) -> Result<NExpr> {
    let (line, col) = cur.here();
    match cur.next() {
        Some(Tok::Int(v)) => Ok(NExpr::constant(v as i64)),
        Some(Tok::Ident(w)) if w == "n" => Ok(NExpr::n()),
        Some(Tok::LParen) => {
            let inner = parse_nexpr_sum(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(inner)
        }
        other => Err(err(
            line,
            col,
            format!(
                "expected an integer, `n`, or `(` in a cardinality bound, found {}",
                other.map(|t| t.describe()).unwrap_or_else(|| "end of line".into())
            ),
        )),
    }
}

// Formula grammar, lowest to highest precedence:
//   iff := impl ('<->' impl)*            left associative
//   impl := or ['->' impl]               right associative
//   or := and ('|' and)*
//   and := unary ('&' unary)*
//   unary := '~' unary | quantifier | primary
//   quantifier body extends as far right as possible
fn parse_formula(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    parse_iff(cur, b)
}

fn parse_iff(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    let mut acc = parse_impl(cur, b)?;
    while cur.eat(&Tok::DArrow) {
        let rhs = parse_impl(cur, b)?;
        acc = Formula::iff(acc, rhs);
    }
    Ok(acc)
}

fn parse_impl(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    let lhs = parse_or(cur, b)?;
    if cur.eat(&Tok::Arrow) {
        let rhs = parse_impl(cur, b)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    let mut acc = parse_and(cur, b)?;
    while cur.eat(&Tok::Pipe) {
        let rhs = parse_and(cur, b)?;
        acc = Formula::or(acc, rhs);
    }
    Ok(acc)
}

fn parse_and(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    let mut acc = parse_unary(cur, b)?;
    while cur.eat(&Tok::Amp) {
        let rhs = parse_unary(cur, b)?;
        acc = Formula::and(acc, rhs);
    }
    Ok(acc)
}

fn parse_var(cur: &mut Cursor) -> Result<Var> {
    let (line, col) = cur.here();
    let name = cur.expect_ident()?;
    match name.as_str() {
        "x" => Ok(Var::X),
        "y" => Ok(Var::Y),
        _ => Err(Error::VariableLimit(format!(
            "{name} at {line}:{col}"
        ))),
    }
}

fn parse_unary(cur: &mut Cursor, b: &mut SentenceBuilder) -> Result<Formula> {
    let (line, col) = cur.here();
    match cur.peek() {
        Some(Tok::Tilde) => {
            cur.next();
            Ok(Formula::not(parse_unary(cur, b)?))
        }
        Some(Tok::Ident(w)) if w == "forall" || w == "exists" || w == "exists_eq" => {
            let word = cur.expect_ident()?;
            let q = match word.as_str() {
                "forall" => Quantifier::Forall,
                "exists" => Quantifier::Exists,
                _ => {
                    let k = cur.expect_int()? as u32;
                    Quantifier::ExistsEq(k)
                }
            };
            let v = parse_var(cur)?;
            cur.expect(&Tok::Dot)?;
            let body = parse_formula(cur, b)?;
            Ok(Formula::Quant(q, v, Box::new(body)))
        }
        Some(Tok::Ident(w)) if w == "true" => {
            cur.next();
            Ok(Formula::Top)
        }
        Some(Tok::Ident(w)) if w == "false" => {
            cur.next();
            Ok(Formula::Bottom)
        }
        Some(Tok::Ident(_)) => {
            let name = cur.expect_ident()?;
            cur.expect(&Tok::LParen)?;
            let mut args = vec![parse_var(cur)?];
            while cur.eat(&Tok::Comma) {
                args.push(parse_var(cur)?);
            }
            cur.expect(&Tok::RParen)?;
            let pred = b.resolve(&name, args.len(), line, col)?;
            Ok(Formula::Atom(pred, args))
        }
        Some(Tok::LParen) => {
            cur.next();
            let inner = parse_formula(cur, b)?;
            cur.expect(&Tok::RParen)?;
            Ok(inner)
        }
        other => Err(err(
            line,
            col,
            format!(
                "expected a formula, found {}",
                other
                    .map(|t| t.describe())
                    .unwrap_or_else(|| "end of line".into())
            ),
        )),
    }
}
