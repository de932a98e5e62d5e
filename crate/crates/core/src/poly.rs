//! Exact sparse multivariate polynomial arithmetic over arbitrary-precision
//! rationals, plus univariate and bivariate Lagrange interpolation.
//!
//! A [`Poly`] maps exponent vectors to nonzero rational coefficients. The
//! variable list is kept sorted and minimal (variables that no term uses are
//! stripped), so structural equality coincides with mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Exponent vector, positionally aligned with a polynomial's variable list.
pub type Exps = SmallVec<[u32; 4]>;

/// An interned variable name such as `u`, `v`, or a cardinality symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 0,
        col: 0,
        msg: format!("invalid rational `{text}`"),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `p` when integral, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `(sum parts)! / prod parts!` as an exact integer.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0usize;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p as usize;
        acc *= binomial(total, p as usize);
    }
    acc
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vec<Symbol>,
    terms: BTreeMap<Exps, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exps::new(), c);
        }
        Poly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(sym: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Exps::from_slice(&[1]), Rational::one());
        Poly {
            vars: vec![sym],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value if no variable occurs, `None` otherwise.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.vars.is_empty() {
            Some(
                self.terms
                    .get(&Exps::new())
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    pub fn degree(&self, sym: &Symbol) -> u32 {
        match self.vars.iter().position(|v| v == sym) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        // Strip variables no term uses so equality is canonical.
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars: Vec<Symbol> = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(e, c)| {
                let e2: Exps = e
                    .iter()
                    .zip(&used)
                    .filter(|(_, &u)| u)
                    .map(|(&x, _)| x)
                    .collect();
                (e2, c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    /// Re-expresses `self` over the union of both variable lists.
    fn aligned(&self, other: &Poly) -> (Vec<Symbol>, BTreeMap<Exps, Rational>, BTreeMap<Exps, Rational>) {
        if self.vars == other.vars {
            return (self.vars.clone(), self.terms.clone(), other.terms.clone());
        }
        let mut vars: Vec<Symbol> = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort();
        let remap = |p: &Poly| -> BTreeMap<Exps, Rational> {
            let idx: Vec<usize> = p
                .vars
                .iter()
                .map(|v| vars.iter().position(|w| w == v).unwrap())
                .collect();
            p.terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = Exps::from_elem(0, vars.len());
                    for (j, &x) in e.iter().enumerate() {
                        e2[idx[j]] = x;
                    }
                    (e2, c.clone())
                })
                .collect()
        };
        (vars.clone(), remap(self), remap(other))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (vars, mut a, b) = self.aligned(other);
        for (e, c) in b {
            let entry = a.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        let mut p = Poly { vars, terms: a };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (vars, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let mut e = ea.clone();
                for (i, x) in eb.iter().enumerate() {
                    e[i] += x;
                }
                let entry = terms.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        let mut p = Poly { vars, terms };
        p.normalize();
        p
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes rationals for a subset of variables; the rest remain.
    pub fn eval(&self, point: &BTreeMap<Symbol, Rational>) -> Poly {
        let mut result = self.clone();
        for (sym, val) in point {
            result = result.subst(sym, &Poly::constant(val.clone()));
        }
        result
    }

    pub fn eval_constant(&self, point: &BTreeMap<Symbol, Rational>) -> Result<Rational> {
        self.eval(point).as_constant().ok_or(Error::DegreeExceeded)
    }

    /// Substitutes a polynomial for one variable.
    pub fn subst(&self, sym: &Symbol, replacement: &Poly) -> Poly {
        let Some(i) = self.vars.iter().position(|v| v == sym) else {
            return self.clone();
        };
        // Group terms by the exponent of `sym`, then apply Horner in powers of
        // the replacement.
        let mut by_exp: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut e2 = e.clone();
            e2.remove(i);
            let mut vars2 = self.vars.clone();
            vars2.remove(i);
            let mut terms2 = BTreeMap::new();
            terms2.insert(e2, c.clone());
            let mut piece = Poly {
                vars: vars2,
                terms: terms2,
            };
            piece.normalize();
            let entry = by_exp.entry(k).or_insert_with(Poly::zero);
            *entry = entry.add(&piece);
        }
        let mut acc = Poly::zero();
        let mut last_exp = None;
        for (k, coeff) in by_exp.into_iter().rev() {
            if let Some(prev) = last_exp {
                acc = acc.mul(&replacement.pow(prev - k));
            }
            acc = acc.add(&coeff);
            last_exp = Some(k);
        }
        if let Some(k) = last_exp {
            acc = acc.mul(&replacement.pow(k));
        }
        acc
    }

    /// The coefficient of an exact monomial; variables not listed must have
    /// exponent zero.
    pub fn coefficient(&self, monomial: &[(Symbol, u32)]) -> Rational {
        let mut target = Exps::from_elem(0, self.vars.len());
        for (sym, k) in monomial {
            match self.vars.iter().position(|v| v == sym) {
                Some(i) => target[i] = *k,
                None if *k == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&target).cloned().unwrap_or_else(Rational::zero)
    }

    /// `[sym^k] self` as a polynomial in the remaining variables.
    pub fn coeff_poly(&self, sym: &Symbol, k: u32) -> Poly {
        let Some(i) = self.vars.iter().position(|v| v == sym) else {
            return if k == 0 { self.clone() } else { Poly::zero() };
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] == k)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.remove(i);
                (e2, c.clone())
            })
            .collect();
        let mut p = Poly { vars, terms };
        p.normalize();
        p
    }

    /// Keeps only terms whose exponents in `syms` satisfy `keep`, then erases
    /// those variables (substitutes 1 for them).
    pub fn extract(&self, syms: &[Symbol], keep: impl Fn(&[u32]) -> bool) -> Poly {
        let idx: Vec<Option<usize>> = syms
            .iter()
            .map(|s| self.vars.iter().position(|v| v == s))
            .collect();
        let drop: Vec<usize> = idx.iter().flatten().copied().collect();
        let mut vars = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            if !drop.contains(&i) {
                vars.push(v.clone());
            }
        }
        let mut terms: BTreeMap<Exps, Rational> = BTreeMap::new();
        let mut exps_buf = vec![0u32; syms.len()];
        for (e, c) in &self.terms {
            for (j, oi) in idx.iter().enumerate() {
                exps_buf[j] = oi.map(|i| e[i]).unwrap_or(0);
            }
            if !keep(&exps_buf) {
                continue;
            }
            let e2: Exps = e
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, &x)| x)
                .collect();
            let entry = terms.entry(e2).or_insert_with(Rational::zero);
            *entry += c.clone();
        }
        let mut p = Poly { vars, terms };
        p.normalize();
        p
    }

    /// Drops terms whose exponent in any capped variable exceeds its cap.
    /// Sound when the final consumer discards those exponents anyway, since
    /// ring operations never lower exponents.
    pub fn truncate(&mut self, caps: &BTreeMap<Symbol, u32>) {
        if caps.is_empty() || self.vars.is_empty() {
            return;
        }
        let capped: Vec<(usize, u32)> = self
            .vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| caps.get(v).map(|&c| (i, c)))
            .collect();
        if capped.is_empty() {
            return;
        }
        self.terms
            .retain(|e, _| capped.iter().all(|&(i, cap)| e[i] <= cap));
        self.normalize();
    }

    /// Replaces `sym^(2k)` by `sym^k`; errors when an odd power occurs.
    pub fn halve_exponents(&self, sym: &Symbol) -> Result<Poly> {
        let Some(i) = self.vars.iter().position(|v| v == sym) else {
            return Ok(self.clone());
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] % 2 != 0 {
                return Err(Error::OddVPower);
            }
            let mut e2 = e.clone();
            e2[i] /= 2;
            terms.insert(e2, c.clone());
        }
        let mut p = Poly {
            vars: self.vars.clone(),
            terms,
        };
        p.normalize();
        Ok(p)
    }

    /// Exact division by `(sym - c)`; errors when the remainder is nonzero.
    pub fn div_linear(&self, sym: &Symbol, c: &Rational) -> Result<Poly> {
        let Some(_) = self.vars.iter().position(|v| v == sym) else {
            return if self.is_zero() {
                Ok(Poly::zero())
            } else {
                Err(Error::InexactDivision)
            };
        };
        let deg = self.degree(sym);
        // Synthetic division viewing self as a polynomial in `sym` with
        // polynomial coefficients.
        let coeffs: Vec<Poly> = (0..=deg).map(|k| self.coeff_poly(sym, k)).collect();
        let mut quotient_coeffs: Vec<Poly> = vec![Poly::zero(); deg as usize];
        let mut carry = Poly::zero();
        for k in (1..=deg).rev() {
            carry = carry.add(&coeffs[k as usize]);
            quotient_coeffs[(k - 1) as usize] = carry.clone();
            carry = carry.scale(c);
        }
        let remainder = carry.add(&coeffs[0]);
        if !remainder.is_zero() {
            return Err(Error::InexactDivision);
        }
        let x = Poly::var(sym.clone());
        let mut q = Poly::zero();
        for (k, qc) in quotient_coeffs.into_iter().enumerate() {
            q = q.add(&qc.mul(&x.pow(k as u32)));
        }
        Ok(q)
    }

    pub fn div_scalar(&self, c: &Rational) -> Result<Poly> {
        if c.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(self.scale(&(Rational::one() / c)))
    }

    /// Iterates over `(monomial, coefficient)` pairs with named exponents.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(Symbol, u32)>, &Rational)> {
        self.terms.iter().map(move |(e, c)| {
            let mono: Vec<(Symbol, u32)> = self
                .vars
                .iter()
                .cloned()
                .zip(e.iter().copied())
                .filter(|(_, k)| *k > 0)
                .collect();
            (mono, c)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = PolyJson {
            vars: self.vars.iter().map(|v| v.as_str().to_string()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.to_vec(),
                    coeff: format_rational(c),
                })
                .collect(),
        };
        serde_json::to_value(repr).expect("poly serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Poly> {
        let repr: PolyJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            line: 0,
            col: 0,
            msg: format!("invalid polynomial JSON: {e}"),
        })?;
        let vars: Vec<Symbol> = repr.vars.iter().map(|v| Symbol::new(v)).collect();
        let mut p = Poly::zero();
        for t in &repr.terms {
            if t.exp.len() != vars.len() {
                return Err(Error::Parse {
                    line: 0,
                    col: 0,
                    msg: "exponent vector length differs from vars".into(),
                });
            }
            let mut term = Poly::constant(parse_rational(&t.coeff)?);
            for (v, &k) in vars.iter().zip(&t.exp) {
                term = term.mul(&Poly::var(v.clone()).pow(k));
            }
            p = p.add(&term);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coeff: String,
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Exact Lagrange interpolation through `points`, producing the unique
/// polynomial in `var` of degree at most `degree`. Values may themselves be
/// polynomials in other variables.
pub fn interpolate_1d(points: &[(Rational, Poly)], var: &Symbol, degree: usize) -> Result<Poly> {
    if points.len() < degree + 1 {
        return Err(Error::InsufficientPoints {
            need: degree + 1,
            got: points.len(),
        });
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in &points[i + 1..] {
            if xi == xj {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    let x = Poly::var(var.clone());
    // master = prod (X - x_j); each basis numerator is master / (X - x_i)
    let mut master = Poly::one();
    for (xi, _) in points {
        master = master.mul(&x.sub(&Poly::constant(xi.clone())));
    }
    let mut result = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let numerator = master.div_linear(var, xi)?;
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                denom *= xi - xj;
            }
        }
        result = result.add(&numerator.mul(yi).scale(&(Rational::one() / denom)));
    }
    if result.degree(var) as usize > degree {
        return Err(Error::DegreeExceeded);
    }
    Ok(result)
}

/// Exact bivariate interpolation over a complete grid of nodes.
pub fn interpolate_2d(
    points: &[(Rational, Rational, Poly)],
    uvar: &Symbol,
    vvar: &Symbol,
    degree_u: usize,
    degree_v: usize,
) -> Result<Poly> {
    let mut us: Vec<Rational> = Vec::new();
    let mut vs: Vec<Rational> = Vec::new();
    for (u, v, _) in points {
        if !us.contains(u) {
            us.push(u.clone());
        }
        if !vs.contains(v) {
            vs.push(v.clone());
        }
    }
    if us.len() * vs.len() != points.len() {
        return Err(Error::IncompleteGrid);
    }
    let mut grid: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for (u, v, y) in points {
        let i = us.iter().position(|x| x == u).unwrap();
        let j = vs.iter().position(|x| x == v).unwrap();
        if grid.insert((i, j), y.clone()).is_some() {
            return Err(Error::DuplicateNodes);
        }
    }
    if grid.len() != us.len() * vs.len() {
        return Err(Error::IncompleteGrid);
    }
    // Interpolate along v for each u node, then along u.
    let mut column_polys: Vec<(Rational, Poly)> = Vec::with_capacity(us.len());
    for (i, u) in us.iter().enumerate() {
        let pts: Vec<(Rational, Poly)> = vs
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), grid[&(i, j)].clone()))
            .collect();
        column_polys.push((u.clone(), interpolate_1d(&pts, vvar, degree_v)?));
    }
    interpolate_1d(&column_polys, uvar, degree_u)
}
