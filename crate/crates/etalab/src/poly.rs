//! Sparse multivariate polynomials over a [`Field`], with the standard
//! grading (every variable has degree one).
//!
//! Monomials are compared in graded lexicographic order, fixed globally so
//! that bases and matrices are reproducible across runs and backends.

use crate::field::Field;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then lexicographic on the
    /// exponent vector (so x^2 > xy > y^2 within one degree).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `nvars` variables, in descending graded
/// lexicographic order (the basis order used everywhere). The count is
/// C(d + nvars - 1, nvars - 1).
pub fn monomial_basis(nvars: usize, d: usize) -> Vec<Monomial> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: usize) {
        if pos + 1 == current.len() {
            current[pos] = remaining as u32;
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e as u32;
            rec(out, current, pos + 1, remaining - e);
        }
    }
    rec(&mut out, &mut current, 0, d);
    out
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: usize) -> usize {
    // C(d + nvars - 1, nvars - 1), kept in u128 to be safe
    let n = d + nvars - 1;
    let k = nvars - 1;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Degree classification of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(usize),
    Mixed,
}

/// A sparse polynomial: a map from monomials to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(nvars);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn variable(field: &F, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn monomial(field: &F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(m.nvars());
        if !field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&F::Elem> {
        self.terms.get(m)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// The common degree if homogeneous and nonzero.
    pub fn degree_if_homogeneous(&self) -> Option<usize> {
        match self.homogeneity() {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }

    fn insert_term(&mut self, field: &F, m: Monomial, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(field, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, field: &F) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = field.neg(c);
        }
        out
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        if field.is_zero(s) {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = field.mul(c, s);
        }
        out
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(field, m1.mul(m2), field.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1.clone());
        }
        out
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, field: &F, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] = e - 1;
            let coeff = field.mul(c, &field.from_i64(e as i64));
            out.insert_term(field, Monomial::new(exps), coeff);
        }
        out
    }

    /// Render with the given variable names, leading term first.
    pub fn render(&self, field: &F, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = field.render(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            let mono = render_monomial(m, vars);
            if mono.is_empty() {
                let _ = write!(s, "{mag}");
            } else if mag == "1" {
                let _ = write!(s, "{mono}");
            } else {
                let _ = write!(s, "{mag}*{mono}");
            }
        }
        s
    }
}

fn render_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

/// Error from the shared polynomial text syntax, with a byte offset into
/// the source fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (at offset {})", self.message, self.offset)
    }
}

impl std::error::Error for PolyParseError {}

/// Parse the shared polynomial syntax: sums of terms, each term a `*`
/// product of factors; a factor is an integer, a rational `p/q`, or a
/// variable with an optional `^` power. Examples: `x*u + y*v`, `3/2*x^2`,
/// `-z`, `0`.
pub fn parse_polynomial<F: Field>(
    field: &F,
    vars: &[String],
    src: &str,
) -> Result<Polynomial<F>, PolyParseError> {
    Parser {
        field,
        vars,
        src: src.as_bytes(),
        pos: 0,
    }
    .parse()
}

struct Parser<'a, F: Field> {
    field: &'a F,
    vars: &'a [String],
    src: &'a [u8],
    pos: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyParseError> {
        Err(PolyParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial<F>, PolyParseError> {
        let nvars = self.vars.len();
        let mut total = Polynomial::zero(nvars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None if first => return self.err("empty polynomial"),
                None => return self.err("trailing operator"),
                Some(_) if first => 1,
                Some(c) => {
                    return self.err(format!("expected '+' or '-', found '{}'", c as char))
                }
            };
            let term = self.parse_term()?;
            let term = if sign < 0 { term.neg(self.field) } else { term };
            total = total.add(self.field, &term);
            first = false;
            if self.peek().is_none() {
                return Ok(total);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial<F>, PolyParseError> {
        let mut acc = self.parse_factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = acc.mul(self.field, &f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Polynomial<F>, PolyParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_integer()?;
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    let start = self.pos;
                    let den = self.parse_integer()?;
                    if den <= 0 {
                        self.pos = start;
                        return self.err("denominator must be a positive integer");
                    }
                    Ok(Polynomial::constant(
                        self.field,
                        self.vars.len(),
                        self.field.from_ratio(num, den as u64),
                    ))
                } else {
                    Ok(Polynomial::constant(
                        self.field,
                        self.vars.len(),
                        self.field.from_i64(num),
                    ))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.parse_ident();
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    self.pos -= name.len();
                    return self.err(format!("unknown variable '{name}'"));
                };
                let mut exp = 1u32;
                if let Some(b'^') = self.peek() {
                    self.pos += 1;
                    let e = self.parse_integer()?;
                    if e < 0 {
                        return self.err("negative exponent");
                    }
                    exp = e as u32;
                }
                let mut exps = vec![0u32; self.vars.len()];
                exps[i] = exp;
                Ok(Polynomial::monomial(
                    self.field,
                    Monomial::new(exps),
                    self.field.one(),
                ))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("expected a factor"),
        }
    }

    fn parse_integer(&mut self) -> Result<i64, PolyParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| PolyParseError {
                offset: start,
                message: "integer literal out of range".into(),
            })
    }

    fn parse_ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
