//! Monomials and polynomials in the x- and p-coordinates, the expression
//! parser, and validated model data.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::Rational;

/// Exponents on the n x-coordinates followed by the r p-coordinates.
///
/// Ordered by total degree first, then reverse lexicographically from the
/// last coordinate: a smaller exponent on the last differing coordinate is
/// the smaller monomial. So `x1^3 < x2^3 < x3^3` and `p1*x1*x2*x3 < p1*X1^3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub p: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize, r: usize) -> Self {
        Monomial {
            x: vec![0; n],
            p: vec![0; r],
        }
    }

    pub fn nvars(&self) -> usize {
        self.x.len() + self.p.len()
    }

    /// Exponent of the coordinate with combined index `j` (x first, then p).
    pub fn exp(&self, j: usize) -> u32 {
        if j < self.x.len() {
            self.x[j]
        } else {
            self.p[j - self.x.len()]
        }
    }

    pub fn exp_mut(&mut self, j: usize) -> &mut u32 {
        let n = self.x.len();
        if j < n {
            &mut self.x[j]
        } else {
            &mut self.p[j - n]
        }
    }

    pub fn exps(&self) -> impl DoubleEndedIterator<Item = u32> + '_ {
        self.x.iter().chain(self.p.iter()).copied()
    }

    pub fn degree(&self) -> u32 {
        self.exps().sum()
    }

    pub fn p_degree(&self) -> u32 {
        self.p.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps().zip(other.exps()).all(|(a, b)| a <= b)
    }

    /// Weighted x-degree minus weighted p-degree.
    pub fn torus_weight(&self, weights: &[u64], degrees: &[u64]) -> i64 {
        let xw: i64 = self
            .x
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum();
        let pw: i64 = self
            .p
            .iter()
            .zip(degrees)
            .map(|(&e, &d)| e as i64 * d as i64)
            .sum();
        xw - pw
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> MonomialDisplay<'a> {
        MonomialDisplay {
            m: self,
            vars,
            sep: "*",
        }
    }

    /// Juxtaposed form without `*`, e.g. `p1X1X3^2`.
    pub fn compact<'a>(&'a self, vars: &'a VarTable) -> MonomialDisplay<'a> {
        MonomialDisplay {
            m: self,
            vars,
            sep: "",
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.exps().rev().zip(other.exps().rev()) {
                    if a != b {
                        return a.cmp(&b);
                    }
                }
                Ordering::Equal
            })
            .then_with(|| (self.x.len(), self.p.len()).cmp(&(other.x.len(), other.p.len())))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a VarTable,
    sep: &'static str,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // p-coordinates lead, matching the usual way of writing p1*x1^3
        let order = (self.m.x.len()..self.m.nvars()).chain(0..self.m.x.len());
        for j in order {
            let e = self.m.exp(j);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(self.sep)?;
            }
            first = false;
            f.write_str(self.vars.name(j))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Names of the x-coordinates and p-coordinates of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    pub x: Vec<String>,
    pub p: Vec<String>,
}

impl VarTable {
    pub fn new(x: Vec<String>, p: Vec<String>) -> Self {
        VarTable { x, p }
    }

    /// p-names are `p` for a single polynomial and `p1..pr` otherwise.
    pub fn with_default_p(x: Vec<String>, r: usize) -> Self {
        let p = if r == 1 {
            vec!["p".to_string()]
        } else {
            (1..=r).map(|i| format!("p{i}")).collect()
        };
        VarTable { x, p }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn r(&self) -> usize {
        self.p.len()
    }

    pub fn name(&self, j: usize) -> &str {
        if j < self.x.len() {
            &self.x[j]
        } else {
            &self.p[j - self.x.len()]
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.x.iter().chain(self.p.iter()).position(|s| s == name)
    }

    /// The same table with no p-coordinates (for the polynomials W_i).
    pub fn x_only(&self) -> VarTable {
        VarTable {
            x: self.x.clone(),
            p: Vec::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable '{name}' at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not quasi-homogeneous; offending terms: {terms:?}")]
    NotQuasiHomogeneous { terms: Vec<String> },
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Polynomial with exact rational coefficients, kept normalized: no zero
/// coefficients and at most one term per monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    r: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(n: usize, r: usize) -> Self {
        Poly {
            n,
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        r: usize,
        terms: impl IntoIterator<Item = (Rational, Monomial)>,
    ) -> Self {
        let mut p = Poly::zero(n, r);
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        assert_eq!((m.x.len(), m.p.len()), (self.n, self.r), "monomial shape");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_terms(
            self.n,
            self.r,
            self.terms().map(|(m, v)| (v * c, m.clone())),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n, self.r);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly::from_terms(
            self.n,
            self.r,
            self.terms().map(|(k, c)| (c.clone(), k.mul(m))),
        )
    }

    /// The same polynomial regarded in a ring with `r` p-coordinates.
    /// Fails when a p-coordinate that would be dropped is in use.
    pub fn with_p_count(&self, r: usize) -> Option<Poly> {
        let mut out = Poly::zero(self.n, r);
        for (m, c) in self.terms() {
            if m.p.iter().skip(r).any(|&e| e > 0) {
                return None;
            }
            let mut p = m.p.clone();
            p.resize(r, 0);
            out.add_term(c.clone(), Monomial { x: m.x.clone(), p });
        }
        Some(out)
    }

    /// Formal partial derivative in the coordinate with combined index `j`.
    pub fn partial(&self, j: usize) -> Poly {
        let mut out = Poly::zero(self.n, self.r);
        for (m, c) in self.terms() {
            let e = m.exp(j);
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            *d.exp_mut(j) -= 1;
            out.add_term(c * Rational::from_integer(BigInt::from(e)), d);
        }
        out
    }

    /// Sets every coordinate outside `keep` to zero.
    pub fn restrict(&self, keep: &[bool]) -> Poly {
        let terms = self
            .terms()
            .filter(|(m, _)| m.exps().zip(keep).all(|(e, &k)| k || e == 0))
            .map(|(m, c)| (c.clone(), m.clone()));
        Poly::from_terms(self.n, self.r, terms)
    }

    pub fn eval(&self, x: &[Rational], p: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (e, v) in m.exps().zip(x.iter().chain(p.iter())) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a VarTable,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let constant = m.degree() == 0;
            if constant {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", m.display(self.vars))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a VarTable,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        s.parse().ok()
    }

    fn name(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
            Some((start, s))
        } else {
            None
        }
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<bool, ParseError> {
        let Some((offset, name)) = self.name() else {
            return Ok(false);
        };
        let j = self
            .vars
            .lookup(name)
            .ok_or_else(|| ParseError::UnknownVariable {
                name: name.to_string(),
                offset,
            })?;
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                return Err(ParseError::NegativeExponent { offset: self.pos });
            }
            let v = self
                .uint()
                .ok_or_else(|| self.syntax("expected exponent"))?;
            e = v
                .to_u32()
                .ok_or_else(|| self.syntax("exponent too large"))?;
        }
        *m.exp_mut(j) += e;
        Ok(true)
    }

    fn term(&mut self) -> Result<(Rational, Monomial), ParseError> {
        let mut m = Monomial::one(self.vars.n(), self.vars.r());
        let mut coeff = Rational::one();
        let mut have_coeff = false;
        if let Some(num) = self.uint() {
            have_coeff = true;
            let mut den = BigInt::one();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                den = self
                    .uint()
                    .ok_or_else(|| self.syntax("expected denominator"))?;
                if den.is_zero() {
                    return Err(self.syntax("zero denominator"));
                }
            }
            coeff = Rational::new(num, den);
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if !self.factor(&mut m)? {
                    return Err(self.syntax("expected variable after '*'"));
                }
            } else {
                self.factor(&mut m)?;
            }
        } else if !self.factor(&mut m)? {
            return Err(self.syntax("expected coefficient or variable"));
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    if !self.factor(&mut m)? {
                        return Err(self.syntax("expected variable after '*'"));
                    }
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    self.factor(&mut m)?;
                }
                Some(c) if c.is_ascii_digit() && have_coeff => {
                    return Err(self.syntax("unexpected number"));
                }
                _ => break,
            }
        }
        Ok((coeff, m))
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut poly = Poly::zero(self.vars.n(), self.vars.r());
        let mut sign = Rational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (c, m) = self.term()?;
            poly.add_term(sign * c, m);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                None => break,
                Some(_) => return Err(self.syntax("expected '+', '-' or end of input")),
            }
        }
        Ok(poly)
    }
}

/// Parses `expr := term (('+'|'-') term)*` over the variables in `vars`.
///
/// Reads a monomial written without separators, such as `p1x2X1^2`, by
/// matching the longest variable name at each position. `1` is the unit.
pub fn parse_compact_monomial(text: &str, vars: &VarTable) -> Result<Monomial, ParseError> {
    let s = text.trim();
    let mut m = Monomial::one(vars.n(), vars.r());
    if s == "1" {
        return Ok(m);
    }
    let mut names: Vec<(usize, &str)> = (0..vars.n() + vars.r())
        .map(|j| (j, vars.name(j)))
        .collect();
    names.sort_by_key(|(_, nm)| std::cmp::Reverse(nm.len()));
    let mut pos = 0;
    while pos < s.len() {
        let rest = &s[pos..];
        let Some(&(j, nm)) = names.iter().find(|(_, nm)| rest.starts_with(nm)) else {
            let name: String = rest
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric())
                .collect();
            if name.is_empty() {
                return Err(ParseError::Syntax {
                    offset: pos,
                    message: "expected a variable".into(),
                });
            }
            return Err(ParseError::UnknownVariable { name, offset: pos });
        };
        pos += nm.len();
        let mut e = 1u32;
        if s[pos..].starts_with('^') {
            let digits: String = s[pos + 1..]
                .chars()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            if s[pos + 1..].starts_with('-') {
                return Err(ParseError::NegativeExponent { offset: pos + 1 });
            }
            e = digits.parse().map_err(|_| ParseError::Syntax {
                offset: pos + 1,
                message: "expected exponent".into(),
            })?;
            pos += 1 + digits.len();
        }
        *m.exp_mut(j) += e;
    }
    Ok(m)
}

/// A term is an optional coefficient (`int` or `int/uint`, optionally
/// followed by `*`) and factors `name` or `name^uint`, separated by `*` or
/// whitespace. A bare coefficient is a constant term.
pub fn parse_polynomial(text: &str, vars: &VarTable) -> Result<Poly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    if p.peek().is_none() {
        return Err(p.syntax("empty expression"));
    }
    p.expr()
}

/// The weighted degree shared by every term, ignoring p-coordinates.
pub fn quasi_degree(poly: &Poly, weights: &[u64]) -> Result<u64, PolyError> {
    let mut degs: BTreeMap<u64, Vec<&Monomial>> = BTreeMap::new();
    for (m, _) in poly.terms() {
        let d: u64 = m.x.iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum();
        degs.entry(d).or_default().push(m);
    }
    match degs.len() {
        0 => Err(PolyError::ZeroPolynomial),
        1 => Ok(*degs.keys().next().unwrap()),
        _ => {
            // the most common degree is taken as intended; the rest offend
            let (&major, _) = degs
                .iter()
                .max_by_key(|(d, v)| (v.len(), std::cmp::Reverse(**d)))
                .unwrap();
            let vars = VarTable::with_default_p(
                (1..=poly.n()).map(|i| format!("z{i}")).collect(),
                poly.r(),
            );
            let terms = degs
                .iter()
                .filter(|(d, _)| **d != major)
                .flat_map(|(_, ms)| ms.iter().map(|m| m.display(&vars).to_string()))
                .collect();
            Err(PolyError::NotQuasiHomogeneous { terms })
        }
    }
}

/// A diagonal generator given in a model file: x-phases, and either explicit
/// p-phases or none (then they are derived from the polynomials).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub x: Vec<Rational>,
    pub p: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSelector {
    J,
    SL,
    Max,
    Generators(Vec<GeneratorSpec>),
}

impl fmt::Display for GroupSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSelector::J => f.write_str("J"),
            GroupSelector::SL => f.write_str("SL"),
            GroupSelector::Max => f.write_str("MAX"),
            GroupSelector::Generators(g) => write!(f, "GEN({})", g.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelWarning {
    NotCalabiYau { weight_sum: u64, degree_sum: u64 },
    NondegeneracyUnchecked,
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::NotCalabiYau {
                weight_sum,
                degree_sum,
            } => write!(
                f,
                "weights sum to {weight_sum} but degrees sum to {degree_sum}; not Calabi-Yau"
            ),
            ModelWarning::NondegeneracyUnchecked => {
                f.write_str("non-degeneracy (smoothness away from the origin) is not verified")
            }
        }
    }
}

/// A validated hybrid model: weights, polynomials W_i and their degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelData {
    pub name: String,
    pub vars: VarTable,
    pub weights: Vec<u64>,
    pub degrees: Vec<u64>,
    /// W_i, with no p-coordinates in use, stored in the n+r ring.
    pub polys: Vec<Poly>,
    pub group: GroupSelector,
    pub warnings: Vec<ModelWarning>,
}

impl ModelData {
    /// Validates and infers degrees. `polys` are over `vars.x_only()` or
    /// the full table; either way they may not use p-coordinates.
    pub fn new(
        name: impl Into<String>,
        vars: VarTable,
        weights: Vec<u64>,
        polys: Vec<Poly>,
        declared_degrees: Option<Vec<u64>>,
        group: GroupSelector,
    ) -> Result<Self, PolyError> {
        let n = vars.n();
        let r = vars.r();
        if weights.len() != n {
            return Err(PolyError::InvalidModel(format!(
                "{} weights for {} variables",
                weights.len(),
                n
            )));
        }
        if weights.contains(&0) {
            return Err(PolyError::InvalidModel("weights must be positive".into()));
        }
        if polys.len() != r {
            return Err(PolyError::InvalidModel(format!(
                "{} polynomials for {} p-coordinates",
                polys.len(),
                r
            )));
        }
        let mut lifted = Vec::with_capacity(r);
        let mut degrees = Vec::with_capacity(r);
        for (i, w) in polys.iter().enumerate() {
            if w.n() != n {
                return Err(PolyError::InvalidModel(format!(
                    "polynomial {} has wrong arity",
                    i + 1
                )));
            }
            if w.terms().any(|(m, _)| m.p_degree() > 0) {
                return Err(PolyError::InvalidModel(format!(
                    "polynomial {} uses a p-coordinate",
                    i + 1
                )));
            }
            let lw = w.with_p_count(r).expect("no p-coordinates in use");
            let d = quasi_degree(&lw, &weights)?;
            if d == 0 {
                return Err(PolyError::InvalidModel(format!(
                    "polynomial {} is constant",
                    i + 1
                )));
            }
            degrees.push(d);
            lifted.push(lw);
        }
        if let Some(decl) = declared_degrees {
            if decl != degrees {
                return Err(PolyError::InvalidModel(format!(
                    "declared degrees {decl:?} differ from inferred {degrees:?}"
                )));
            }
        }
        let mut warnings = vec![ModelWarning::NondegeneracyUnchecked];
        let weight_sum: u64 = weights.iter().sum();
        let degree_sum: u64 = degrees.iter().sum();
        if weight_sum != degree_sum {
            warnings.push(ModelWarning::NotCalabiYau {
                weight_sum,
                degree_sum,
            });
        }
        Ok(ModelData {
            name: name.into(),
            vars,
            weights,
            degrees,
            polys: lifted,
            group,
            warnings,
        })
    }

    pub fn n(&self) -> usize {
        self.vars.n()
    }

    pub fn r(&self) -> usize {
        self.vars.r()
    }

    /// n - r - 1, the top degree of the state space.
    pub fn dim(&self) -> i64 {
        self.n() as i64 - self.r() as i64 - 1
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.degrees.iter().sum::<u64>()
    }

    /// Torus weights of all n+r coordinates: w on x, -d on p.
    pub fn torus_weights(&self) -> Vec<i64> {
        self.weights
            .iter()
            .map(|&w| w as i64)
            .chain(self.degrees.iter().map(|&d| -(d as i64)))
            .collect()
    }

    pub fn degree_gcd(&self) -> u64 {
        self.degrees.iter().fold(0u64, |a, &b| a.gcd(&b))
    }
}

/// `p_1 W_1 + ... + p_r W_r`.
pub fn build_superpotential(model: &ModelData) -> Result<Poly, PolyError> {
    let (n, r) = (model.n(), model.r());
    if r == 0 {
        return Err(PolyError::InvalidModel("no polynomials (r = 0)".into()));
    }
    let mut out = Poly::zero(n, r);
    for (i, w) in model.polys.iter().enumerate() {
        let mut pi = Monomial::one(n, r);
        pi.p[i] = 1;
        out = out.add(&w.mul_monomial(&pi));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn lt_vars() -> VarTable {
        VarTable::with_default_p(
            ["x1", "x2", "x3", "X1", "X2", "X3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        )
    }

    fn quintic_vars() -> VarTable {
        VarTable::with_default_p((1..=5).map(|i| format!("x{i}")).collect(), 1)
    }

    fn mono(x: &[u32], p: &[u32]) -> Monomial {
        Monomial {
            x: x.to_vec(),
            p: p.to_vec(),
        }
    }

    #[test]
    fn compact_monomials() {
        let v = lt_vars();
        let m = parse_compact_monomial("p2x3X1X3", &v).unwrap();
        assert_eq!(m, mono(&[0, 0, 1, 1, 0, 1], &[0, 1]));
        assert_eq!(m.compact(&v).to_string(), "p2x3X1X3");
        assert_eq!(
            parse_compact_monomial("p1X1X3^2", &v).unwrap(),
            mono(&[0, 0, 0, 1, 0, 2], &[1, 0])
        );
        assert_eq!(
            parse_compact_monomial("1", &v).unwrap(),
            Monomial::one(6, 2)
        );
        let q = quintic_vars();
        assert_eq!(
            parse_compact_monomial("p^2x2x3^2", &q).unwrap(),
            mono(&[0, 1, 2, 0, 0], &[2])
        );
        assert!(matches!(
            parse_compact_monomial("p1y2", &v),
            Err(ParseError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn parse_lt_cubic() {
        let v = lt_vars();
        let w = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &v).unwrap();
        assert_eq!(w.len(), 4);
        let coeffs: Vec<Rational> = w.terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(coeffs, vec![int(1), int(1), int(1), int(-3)]);
    }

    #[test]
    fn parse_quintic() {
        let w = parse_polynomial("x1^5+x2^5+x3^5+x4^5+x5^5", &quintic_vars()).unwrap();
        assert_eq!(w.len(), 5);
    }

    #[test]
    fn parse_errors() {
        let v = quintic_vars();
        assert!(matches!(
            parse_polynomial("x1^-2", &v),
            Err(ParseError::NegativeExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 + y", &v),
            Err(ParseError::UnknownVariable { offset: 5, .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 +", &v),
            Err(ParseError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse_polynomial("", &v),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x1 ) x2", &v),
            Err(ParseError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse_polynomial("3/0 x1", &v),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn parse_rational_and_juxtaposition() {
        let v = quintic_vars();
        let a = parse_polynomial("3/2 x1 x2^2 - 1/2*x3 + 7", &v).unwrap();
        let b = parse_polynomial("7 + 3/2*x1*x2^2 - 1/2 x3", &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff(&mono(&[1, 2, 0, 0, 0], &[0])), rat(3, 2));
        assert!(parse_polynomial("x1 - x1", &v).unwrap().is_zero());
    }

    #[test]
    fn print_round_trip() {
        let v = lt_vars();
        for s in [
            "x1^3 + x2^3 + x3^3 - 3*X1*X2*X3",
            "-2/3*p1*x1 + p2 - 5",
            "x1*x1*x1 - 3 X1 X2 X3",
            "0",
        ] {
            let p = parse_polynomial(s, &v).unwrap();
            let printed = p.display(&v).to_string();
            assert_eq!(
                parse_polynomial(&printed, &v).unwrap(),
                p,
                "{s} -> {printed}"
            );
        }
        let w = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &v).unwrap();
        assert_eq!(w.display(&v).to_string(), "x1^3 + x2^3 + x3^3 - 3*X1*X2*X3");
    }

    #[test]
    fn monomial_order() {
        let a = mono(&[3, 0, 0, 0, 0, 0], &[0, 0]);
        let b = mono(&[0, 3, 0, 0, 0, 0], &[0, 0]);
        assert!(a < b);
        let c = mono(&[1, 1, 1, 0, 0, 0], &[1, 0]);
        let d = mono(&[0, 0, 0, 3, 0, 0], &[1, 0]);
        let e = mono(&[0, 0, 0, 0, 3, 0], &[1, 0]);
        assert!(c < d && d < e);
        assert!(mono(&[1, 0, 0, 0, 0, 0], &[0, 0]) < a);
    }

    #[test]
    fn quasi_degrees() {
        let v = lt_vars();
        let w1 = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &v).unwrap();
        assert_eq!(quasi_degree(&w1, &[1; 6]), Ok(3));
        let xy = VarTable::new(vec!["x".into(), "y".into()], vec![]);
        let f = parse_polynomial("x^2 + y^3", &xy).unwrap();
        assert_eq!(quasi_degree(&f, &[3, 2]), Ok(6));
        assert!(matches!(
            quasi_degree(&f, &[1, 1]),
            Err(PolyError::NotQuasiHomogeneous { .. })
        ));
    }

    fn lt_model() -> ModelData {
        let v = lt_vars();
        let xo = v.x_only();
        let w1 = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &xo).unwrap();
        let w2 = parse_polynomial("X1^3 + X2^3 + X3^3 - 3*x1*x2*x3", &xo).unwrap();
        ModelData::new("lt", v, vec![1; 6], vec![w1, w2], None, GroupSelector::J).unwrap()
    }

    #[test]
    fn model_validation() {
        let m = lt_model();
        assert_eq!(m.degrees, vec![3, 3]);
        assert!(m.is_calabi_yau());
        assert!(!m
            .warnings
            .iter()
            .any(|w| matches!(w, ModelWarning::NotCalabiYau { .. })));
        let v = VarTable::with_default_p(vec!["x".into(), "y".into()], 1);
        let f = parse_polynomial("x^2 + y^2", &v.x_only()).unwrap();
        let m2 = ModelData::new(
            "conic",
            v.clone(),
            vec![1, 1],
            vec![f.clone()],
            None,
            GroupSelector::Max,
        )
        .unwrap();
        assert!(m2.is_calabi_yau());
        let g = parse_polynomial("x^3 + y^3", &v.x_only()).unwrap();
        let m3 = ModelData::new(
            "cubic",
            v.clone(),
            vec![1, 1],
            vec![g],
            None,
            GroupSelector::Max,
        )
        .unwrap();
        assert!(m3
            .warnings
            .iter()
            .any(|w| matches!(w, ModelWarning::NotCalabiYau { .. })));
        assert!(ModelData::new(
            "bad",
            v.clone(),
            vec![1],
            vec![f.clone()],
            None,
            GroupSelector::J
        )
        .is_err());
        assert!(ModelData::new(
            "bad",
            v,
            vec![1, 1],
            vec![f],
            Some(vec![3]),
            GroupSelector::J
        )
        .is_err());
    }

    #[test]
    fn superpotential_and_partials() {
        let m = lt_model();
        let v = &m.vars;
        let wbar = build_superpotential(&m).unwrap();
        assert_eq!(wbar.len(), 8);
        assert!(wbar.terms().all(|(mm, _)| mm.p_degree() == 1));
        let d = wbar.partial(0);
        assert_eq!(d, parse_polynomial("3*p1*x1^2 - 3*p2*x2*x3", v).unwrap());

        let qv = quintic_vars();
        let w = parse_polynomial("x1^5+x2^5+x3^5+x4^5+x5^5", &qv.x_only()).unwrap();
        let q = ModelData::new(
            "quintic",
            qv.clone(),
            vec![1; 5],
            vec![w.clone()],
            None,
            GroupSelector::J,
        )
        .unwrap();
        let pw = build_superpotential(&q).unwrap();
        assert_eq!(pw.partial(5), w.with_p_count(1).unwrap());

        let c = parse_polynomial("7", &qv).unwrap();
        assert!(c.partial(0).is_zero());

        let empty = ModelData::new(
            "none",
            VarTable::new(vec!["x".into()], vec![]),
            vec![1],
            vec![],
            None,
            GroupSelector::J,
        )
        .unwrap();
        assert!(matches!(
            build_superpotential(&empty),
            Err(PolyError::InvalidModel(_))
        ));
    }

    #[test]
    fn eval_and_restrict() {
        let m = lt_model();
        let wbar = build_superpotential(&m).unwrap();
        let ones = vec![int(1); 6];
        assert!(wbar.eval(&ones, &[int(1), int(1)]).is_zero());
        let keep = [true, true, true, false, false, false, true, true];
        let rv = wbar.restrict(&keep);
        assert_eq!(
            rv,
            parse_polynomial("p1*x1^3 + p1*x2^3 + p1*x3^3 - 3*p2*x1*x2*x3", &m.vars).unwrap()
        );
    }
}
