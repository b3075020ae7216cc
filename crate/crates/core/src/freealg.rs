//! Words, noncommutative polynomials, monomial orders and presentations of
//! graded algebras `K<x1..xn> / (f_1, ..., f_d)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::coeffs::{Field, FieldError, FieldSpec, Rationals};
use crate::linalg::rank;
use crate::with_field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeAlgError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: generator x{index} out of range 1..{n}")]
    GeneratorOutOfRange {
        line: usize,
        col: usize,
        index: usize,
        n: usize,
    },
    #[error("line {line}: relation is not homogeneous (degrees {degrees:?})")]
    Inhomogeneous { line: usize, degrees: Vec<usize> },
    #[error("line {line}: relation has degree {degree}; quadratic mode requires degree 2")]
    NotQuadratic { line: usize, degree: usize },
    #[error("line {line}: relation is zero over {field}")]
    ZeroRelation { line: usize, field: FieldSpec },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("unknown builtin presentation {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A word in the generators, stored as 0-based indices (`x1` is index 0).
///
/// The derived order on monomials is degree-lexicographic with
/// `x1 > x2 > ... > xn`; other variable rankings go through [`MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// From 1-based generator indices, as written `x_i`.
    pub fn from_generators(gens: &[usize]) -> Self {
        Monomial(gens.iter().map(|&g| (g - 1) as u16).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = Vec::with_capacity(self.0.len() + other.0.len());
        w.extend_from_slice(&self.0);
        w.extend_from_slice(&other.0);
        Monomial(w)
    }

    /// Whether `factor` occurs as a contiguous subword.
    pub fn contains_factor(&self, factor: &[u16]) -> bool {
        factor.is_empty() || self.0.windows(factor.len()).any(|w| w == factor)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// `x3^2*x1`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == g {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", g + 1)?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Degree-lexicographic order with a chosen ranking of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    /// `ranking[r]` is the generator (0-based) of rank `r`; rank 0 is greatest.
    ranking: Vec<u16>,
    rank_of: Vec<u16>,
}

impl MonomialOrder {
    /// `x1 > x2 > ... > xn`.
    pub fn deglex(n: usize) -> Self {
        let ranking: Vec<u16> = (0..n as u16).collect();
        MonomialOrder {
            rank_of: ranking.clone(),
            ranking,
        }
    }

    /// From 0-based generators listed greatest first. Must be a permutation.
    pub fn with_ranking(ranking: Vec<u16>) -> Option<Self> {
        let n = ranking.len();
        let mut rank_of = vec![u16::MAX; n];
        for (r, &g) in ranking.iter().enumerate() {
            if (g as usize) >= n || rank_of[g as usize] != u16::MAX {
                return None;
            }
            rank_of[g as usize] = r as u16;
        }
        Some(MonomialOrder { ranking, rank_of })
    }

    /// Reads `x2 > x1 > x3` (or `2>1>3`); every generator must appear once.
    pub fn parse(text: &str, n: usize) -> Option<Self> {
        let ranking = text
            .split('>')
            .map(|t| t.trim().trim_start_matches('x').parse::<u16>().ok().filter(|&g| g >= 1).map(|g| g - 1))
            .collect::<Option<Vec<u16>>>()?;
        Self::with_ranking(ranking).filter(|o| o.n() == n)
    }

    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[u16] {
        &self.ranking
    }

    pub fn is_default(&self) -> bool {
        self.ranking.iter().enumerate().all(|(i, &g)| i as u16 == g)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0) {
                if x != y {
                    // smaller rank means greater variable
                    return self.rank_of[*y as usize].cmp(&self.rank_of[*x as usize]);
                }
            }
            Ordering::Equal
        })
    }

    /// Rewrites a word so that the default order on the result agrees with
    /// this order on the input.
    pub fn to_ranked(&self, m: &Monomial) -> Monomial {
        Monomial(m.0.iter().map(|&g| self.rank_of[g as usize]).collect())
    }

    pub fn from_ranked(&self, m: &Monomial) -> Monomial {
        Monomial(m.0.iter().map(|&r| self.ranking[r as usize]).collect())
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.ranking.iter().map(|g| format!("x{}", g + 1)).collect();
        write!(f, "{}", names.join(" > "))
    }
}

/// A noncommutative polynomial with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F) -> Self {
        Polynomial {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(field: &F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
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

    pub fn coefficient(&self, m: &Monomial) -> Option<&F::Elem> {
        self.terms.get(m)
    }

    /// Terms in decreasing default order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, F::Elem> {
        &self.terms
    }

    pub(crate) fn into_term_map(self) -> BTreeMap<Monomial, F::Elem> {
        self.terms
    }

    pub(crate) fn from_term_map(field: &F, terms: BTreeMap<Monomial, F::Elem>) -> Self {
        Polynomial {
            field: field.clone(),
            terms,
        }
    }

    /// Greatest term under the default order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Monomial::degree).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// Degree of a homogeneous polynomial (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_field(&self, other: &Self) -> Result<(), FreeAlgError> {
        if self.field.spec() != other.field.spec() {
            return Err(FreeAlgError::FieldMismatch(self.field.spec(), other.field.spec()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::from_terms(f, self.terms.iter().map(|(m, x)| (m.clone(), f.mul(c, x))))
    }

    /// Concatenation product, extended bilinearly.
    pub fn multiply(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.check_field(other)?;
        let f = &self.field;
        let mut out = Self::zero(f);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), f.mul(x, y));
            }
        }
        Ok(out)
    }

    /// `left * self * right` for words `left`, `right`.
    pub fn sandwich(&self, left: &Monomial, right: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (left.concat(m).concat(right), c.clone()))
            .collect();
        Polynomial {
            field: self.field.clone(),
            terms,
        }
    }

    /// Applies a letter substitution to every word (used for relabelings).
    pub fn map_words(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self::from_terms(
            &self.field,
            self.terms.iter().map(|(m, c)| (f(m), c.clone())),
        )
    }

    /// Canonical text with terms in decreasing `order`.
    pub fn format_with(&self, order: &MonomialOrder) -> String {
        let mut terms: Vec<(&Monomial, &F::Elem)> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.compare(b.0, a.0));
        format_terms(&self.field, terms)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(&self.field, self.terms().collect()))
    }
}

fn format_terms<F: Field>(field: &F, terms: Vec<(&Monomial, &F::Elem)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let text = field.format(c);
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let is_unit_word = m.degree() == 0;
        if mag == "1" && !is_unit_word {
            out.push_str(&m.to_string());
        } else if is_unit_word {
            out.push_str(&mag);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&m.to_string());
        }
    }
    out
}

/// Whether relations must be quadratic or may be homogeneous of any degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quadratic,
    Homogeneous,
}

/// A finitely presented graded algebra.
///
/// Relation coefficients are stored as exact rationals; over GF(p) they are
/// canonical residues `0..p`. Use [`Presentation::relations_in`] to obtain
/// polynomials over a concrete field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    field: FieldSpec,
    order: MonomialOrder,
    mode: Mode,
    relations: Vec<Polynomial<Rationals>>,
    effective_d: usize,
    warnings: Vec<String>,
}

impl Presentation {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
    pub fn raw_relations(&self) -> &[Polynomial<Rationals>] {
        &self.relations
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        assert_eq!(order.n(), self.n);
        self.order = order;
        self
    }

    pub fn max_degree(&self) -> usize {
        self.relations.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    /// Relations as polynomials over `field`, which must be the declared one.
    pub fn relations_in<F: Field>(&self, field: &F) -> Result<Vec<Polynomial<F>>, FreeAlgError> {
        if field.spec() != self.field {
            return Err(FreeAlgError::FieldMismatch(self.field, field.spec()));
        }
        self.relations
            .iter()
            .map(|r| {
                let mut p = Polynomial::zero(field);
                for (m, c) in r.term_map() {
                    p.add_term(m.clone(), field.from_ratio(c.numer(), c.denom())?);
                }
                Ok(p)
            })
            .collect()
    }

    /// Degree-2 relations as coefficient vectors in `E ⊗ E` (coordinate
    /// `a * n + b` for `x_a x_b`, 0-based).
    pub fn quadratic_vectors<F: Field>(&self, field: &F) -> Result<Vec<Vec<F::Elem>>, FreeAlgError> {
        let n = self.n;
        Ok(self
            .relations_in(field)?
            .into_iter()
            .filter(|r| r.degree() == 2)
            .map(|r| {
                let mut v = vec![field.zero(); n * n];
                for (m, c) in r.term_map() {
                    let w = m.letters();
                    v[w[0] as usize * n + w[1] as usize] = c.clone();
                }
                v
            })
            .collect())
    }

    /// Canonical presentation text.
    pub fn to_text(&self) -> String {
        let mut out = format!("field {}\ngens {}\n", self.field, self.n);
        if !self.order.is_default() {
            out.push_str(&format!("order {}\n", self.order));
        }
        if self.mode == Mode::Homogeneous {
            out.push_str("mode homogeneous\n");
        }
        for r in &self.relations {
            out.push_str(&format!("rel {}\n", r.format_with(&self.order)));
        }
        out
    }
}

/// Number of linearly independent relations: the rank of the relation
/// coefficient matrix, counted degree by degree.
pub fn effective_relation_count(p: &Presentation) -> usize {
    p.effective_d
}

fn compute_effective_d(
    field: FieldSpec,
    n: usize,
    relations: &[Polynomial<Rationals>],
) -> Result<usize, FieldError> {
    let mut by_degree: BTreeMap<usize, Vec<&Polynomial<Rationals>>> = BTreeMap::new();
    for r in relations {
        by_degree.entry(r.degree()).or_default().push(r);
    }
    let mut total = 0;
    for (deg, rels) in by_degree {
        let width = n.pow(deg as u32);
        total += with_field!(field, f => {
            let rows: Vec<Vec<_>> = rels
                .iter()
                .map(|r| {
                    let mut v = vec![f.zero(); width];
                    for (m, c) in r.term_map() {
                        let idx = m.letters().iter().fold(0usize, |acc, &g| acc * n + g as usize);
                        v[idx] = f.from_ratio(c.numer(), c.denom())?;
                    }
                    Ok::<_, FieldError>(v)
                })
                .collect::<Result<_, _>>()?;
            rank(&f, &rows).expect("equal row lengths")
        });
    }
    Ok(total)
}

// ---------------------------------------------------------------- parsing

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            col0,
            _src: src,
        }
    }

    fn col(&self) -> usize {
        self.col0 + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> FreeAlgError {
        FreeAlgError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<BigInt, FreeAlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small_integer(&mut self) -> Result<usize, FreeAlgError> {
        let col = self.col();
        let v = self.integer()?;
        v.try_into().map_err(|_| FreeAlgError::Syntax {
            line: self.line,
            col,
            msg: "integer too large".into(),
        })
    }
}

struct ParseCtx<'p> {
    n: usize,
    aliases: &'p [(String, usize)],
}

impl ParseCtx<'_> {
    /// var := 'x'INT ['^'INT] | alias ['^'INT]
    fn var(&self, cur: &mut Cursor) -> Result<Vec<u16>, FreeAlgError> {
        cur.skip_ws();
        let col = cur.col();
        let c = cur.chars.get(cur.pos).copied().ok_or_else(|| cur.err("expected a variable"))?;
        let next_is_digit = cur.chars.get(cur.pos + 1).is_some_and(|c| c.is_ascii_digit());
        let g = if c == 'x' && next_is_digit {
            cur.pos += 1;
            let i = cur.small_integer()?;
            if i == 0 || i > self.n {
                return Err(FreeAlgError::GeneratorOutOfRange {
                    line: cur.line,
                    col,
                    index: i,
                    n: self.n,
                });
            }
            i - 1
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = cur.pos;
            while cur
                .chars
                .get(cur.pos)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
            {
                cur.pos += 1;
            }
            let name: String = cur.chars[start..cur.pos].iter().collect();
            self.aliases
                .iter()
                .find(|(a, _)| *a == name)
                .map(|(_, g)| *g)
                .ok_or(FreeAlgError::Syntax {
                    line: cur.line,
                    col,
                    msg: format!("unknown variable {name:?}"),
                })?
        } else {
            return Err(cur.err(format!("expected a variable, found {c:?}")));
        };
        let mut reps = 1;
        if cur.peek() == Some('^') {
            cur.pos += 1;
            reps = cur.small_integer()?;
        }
        Ok(vec![g as u16; reps])
    }

    fn starts_var(cur: &mut Cursor) -> bool {
        matches!(cur.peek(), Some(c) if c.is_ascii_alphabetic() || c == '_')
    }

    /// term := [coeff ['*']] mono | coeff
    fn term(&self, cur: &mut Cursor) -> Result<(Monomial, BigRational), FreeAlgError> {
        let mut coeff = BigRational::from_integer(1.into());
        let mut word = Vec::new();
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            let num = cur.integer()?;
            let mut den = BigInt::from(1);
            if cur.peek() == Some('/') {
                cur.pos += 1;
                den = cur.integer()?;
                if den == BigInt::from(0) {
                    return Err(cur.err("zero denominator"));
                }
            }
            coeff = BigRational::new(num, den);
            if cur.peek() == Some('*') {
                cur.pos += 1;
            } else if !Self::starts_var(cur) {
                return Ok((Monomial(word), coeff));
            }
        }
        word.extend(self.var(cur)?);
        loop {
            if cur.peek() == Some('*') {
                cur.pos += 1;
                word.extend(self.var(cur)?);
            } else if Self::starts_var(cur) {
                word.extend(self.var(cur)?);
            } else {
                break;
            }
        }
        Ok((Monomial(word), coeff))
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&self, cur: &mut Cursor) -> Result<Vec<(Monomial, BigRational)>, FreeAlgError> {
        let mut out = Vec::new();
        let mut sign = 1;
        match cur.peek() {
            Some('-') => {
                sign = -1;
                cur.pos += 1;
            }
            Some('+') => cur.pos += 1,
            _ => {}
        }
        loop {
            let (m, c) = self.term(cur)?;
            out.push((m, if sign < 0 { -c } else { c }));
            match cur.peek() {
                None => break,
                Some('+') => {
                    sign = 1;
                    cur.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    cur.pos += 1;
                }
                Some(c) => return Err(cur.err(format!("unexpected {c:?}"))),
            }
        }
        Ok(out)
    }
}

/// Reduces a rational coefficient into the canonical representative for `field`.
fn canonical_coeff(field: FieldSpec, c: &BigRational) -> Result<BigRational, FieldError> {
    match field {
        FieldSpec::Rational => Ok(c.clone()),
        FieldSpec::Prime(p) => {
            let f = crate::coeffs::PrimeField::new(p)?;
            let r = f.from_ratio(c.numer(), c.denom())?;
            Ok(BigRational::from_integer(BigInt::from(r)))
        }
    }
}

/// Splits text into statements: `(line, column of statement start, text)`.
fn statements(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for part in body.split(';') {
            let lead = part.len() - part.trim_start().len();
            let trimmed = part.trim();
            if !trimmed.is_empty() {
                out.push((i + 1, offset + lead + 1, trimmed));
            }
            offset += part.len() + 1;
        }
    }
    out
}

/// Parses presentation text. See the crate README for the format.
pub fn parse_presentation(text: &str) -> Result<Presentation, FreeAlgError> {
    parse_presentation_with_field(text, None)
}

/// Like [`parse_presentation`] but `field_override`, when given, replaces the
/// `field` line.
pub fn parse_presentation_with_field(
    text: &str,
    field_override: Option<FieldSpec>,
) -> Result<Presentation, FreeAlgError> {
    let mut field = FieldSpec::Rational;
    let mut n: Option<usize> = None;
    let mut order: Option<MonomialOrder> = None;
    let mut mode = Mode::Quadratic;
    let mut aliases: Vec<(String, usize)> = Vec::new();
    let mut raw: Vec<(usize, usize, &str)> = Vec::new();

    for (line, col, stmt) in statements(text) {
        let (kw, rest) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
        let rest_col = col + kw.len() + (stmt.len() - kw.len() - rest.len()).min(1);
        let syntax = |msg: String| FreeAlgError::Syntax { line, col, msg };
        match kw {
            "field" => field = rest.parse::<FieldSpec>()?,
            "gens" => {
                let v: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad generator count {rest:?}")))?;
                if v == 0 || v > u16::MAX as usize {
                    return Err(syntax(format!("generator count {v} out of range")));
                }
                n = Some(v);
            }
            "mode" => {
                mode = match rest.trim() {
                    "quadratic" => Mode::Quadratic,
                    "homogeneous" => Mode::Homogeneous,
                    other => return Err(syntax(format!("unknown mode {other:?}"))),
                }
            }
            "alias" => {
                let n = n.ok_or_else(|| syntax("`alias` before `gens`".into()))?;
                let toks: Vec<&str> = rest.split(|c: char| c.is_whitespace() || c == '=').filter(|s| !s.is_empty()).collect();
                if toks.len() != 2 {
                    return Err(syntax("expected `alias <name> x<i>`".into()));
                }
                let name = toks[0];
                let is_generator_name = name.starts_with('x') && name[1..].chars().all(|c| c.is_ascii_digit()) && name.len() > 1;
                if is_generator_name || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(syntax(format!("invalid alias name {name:?}")));
                }
                let mut cur = Cursor::new(toks[1], line, rest_col);
                let ctx = ParseCtx { n, aliases: &[] };
                let w = ctx.var(&mut cur)?;
                if w.len() != 1 {
                    return Err(syntax("alias must name one generator".into()));
                }
                aliases.push((name.to_string(), w[0] as usize));
            }
            "order" => {
                let n = n.ok_or_else(|| syntax("`order` before `gens`".into()))?;
                let ctx = ParseCtx { n, aliases: &aliases };
                let mut ranking = Vec::new();
                for part in rest.split('>') {
                    let mut cur = Cursor::new(part, line, rest_col);
                    let w = ctx.var(&mut cur)?;
                    if w.len() != 1 || cur.peek().is_some() {
                        return Err(syntax(format!("bad order entry {:?}", part.trim())));
                    }
                    ranking.push(w[0]);
                }
                order = Some(
                    MonomialOrder::with_ranking(ranking)
                        .filter(|o| o.n() == n)
                        .ok_or_else(|| syntax("order must rank every generator exactly once".into()))?,
                );
            }
            "rel" => raw.push((line, rest_col, rest)),
            other => return Err(syntax(format!("unknown keyword {other:?}"))),
        }
    }
    if let Some(f) = field_override {
        field = f;
    }
    field.validate()?;
    let n = n.ok_or(FreeAlgError::Syntax {
        line: 1,
        col: 1,
        msg: "missing `gens` line".into(),
    })?;

    let ctx = ParseCtx { n, aliases: &aliases };
    let mut relations = Vec::new();
    for (line, col, body) in raw {
        let mut cur = Cursor::new(body, line, col);
        let terms = ctx.expr(&mut cur)?;
        let mut poly = Polynomial::zero(&Rationals);
        for (m, c) in terms {
            poly.add_term(m, c);
        }
        // reduce into the target field
        let mut canon = Polynomial::zero(&Rationals);
        for (m, c) in poly.term_map() {
            canon.add_term(m.clone(), canonical_coeff(field, c)?);
        }
        if canon.is_zero() {
            return Err(FreeAlgError::ZeroRelation { line, field });
        }
        let degrees = canon.degrees();
        if degrees.len() > 1 {
            return Err(FreeAlgError::Inhomogeneous { line, degrees });
        }
        if mode == Mode::Quadratic && degrees[0] != 2 {
            return Err(FreeAlgError::NotQuadratic {
                line,
                degree: degrees[0],
            });
        }
        if degrees[0] == 0 {
            return Err(FreeAlgError::NotQuadratic { line, degree: 0 });
        }
        relations.push(canon);
    }
    let effective_d = compute_effective_d(field, n, &relations)?;
    let mut warnings = Vec::new();
    if effective_d < relations.len() {
        warnings.push(format!(
            "relations are linearly dependent: effective d = {effective_d} of {} listed",
            relations.len()
        ));
    }
    Ok(Presentation {
        n,
        field,
        order: order.unwrap_or_else(|| MonomialOrder::deglex(n)),
        mode,
        relations,
        effective_d,
        warnings,
    })
}

// ---------------------------------------------------------------- builtins

const LEMMA_3_4: &str = "\
field rational
gens 3
rel x1*x2
rel x1*x3
rel x2*x3
rel x1^2 + x2^2 + x3^2
";

const LEMMA_3_3: &str = "\
field rational
gens 3
rel x3^2 - x1*x2
rel x3*x2 - x2*x3 + x2*x1 - x1*x3 - x1*x2 + x1^2
rel x3*x1 + x2^2 - x1^2
";

const EX_7_19: &str = "\
field gf 2
gens 7
rel x1*x7
rel x3*x7 + x4*x6 + x6*x2
rel x5*x7 + x6*x4 + x3*x5 + x2*x1 + x4*x3
rel x7*x1 + x1*x6
rel x7*x2 + x6*x1 + x1*x5
rel x1^2 + x2^2 + x3^2 + x4^2 + x5^2 + x6^2 + x7^2
rel x2*x7 + x7*x3
rel x6*x7 + x3*x6 + x4*x5 + x5*x2
rel x7*x5 + x2*x6 + x5*x3 + x1*x4 + x3*x2
rel x5*x7 + x7*x6
rel x7*x6 + x6*x2 + x5*x1 + x3*x4
rel x7*x4 + x6*x3 + x2*x5 + x3*x2 + x4*x1
rel x7*x5 + x4*x7
rel x7*x2 + x3*x6 + x6*x4
rel x2*x7 + x6*x5 + x5*x4 + x3*x1 + x4*x2
rel x3*x7 + x7*x4
rel x4*x7 + x2*x6 + x6*x3
rel x7*x3 + x4*x6 + x5*x2 + x2*x4 + x3*x1
rel x6*x7 + x6*x4 + x2*x6 + x2*x5 + x3*x5 + x4*x5
";

const EX_4_6: &str = "\
field gf 2
gens 4
rel x1*x2
rel x1*x4 + x4*x2 + x2*x3
rel x1*x3 + x3*x4 + x4*x1
rel x1^2 + x2^2 + x3^2 + x4^2
rel x3*x4 + x4*x2 + x2*x4
rel x2*x3 + x3*x1 + x1*x3
";

const EX_4_5: &str = "\
field gf 2
gens 4
rel x1^2 + x2^2 + x3^2 + x4^2
rel x1*x2 + x2*x3 + x3*x4
rel x4*x1 + x1*x3 + x3*x2
rel x1*x3 + x3*x2 + x2*x4
rel x1*x4 + x4*x3 + x3*x2 + x2*x4
";

/// Names accepted by [`builtin_presentation`].
pub const BUILTIN_NAMES: &[&str] = &["lemma3-4", "lemma3-3", "ex7-19", "ex4-6", "ex4-5", "commutative(n)"];

/// The presentation text of a builtin, before any field override.
pub fn builtin_text(name: &str) -> Result<String, FreeAlgError> {
    let key = name.trim().to_ascii_lowercase();
    let text = match key.as_str() {
        "lemma3-4" => LEMMA_3_4.to_string(),
        "lemma3-3" => LEMMA_3_3.to_string(),
        "ex7-19" => EX_7_19.to_string(),
        "ex4-6" => EX_4_6.to_string(),
        "ex4-5" => EX_4_5.to_string(),
        _ => {
            let n = key
                .strip_prefix("commutative")
                .map(|s| s.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == ' '))
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| FreeAlgError::UnknownBuiltin(name.to_string()))?;
            let mut t = format!("field rational\ngens {n}\nmode homogeneous\n");
            for i in 1..=n {
                for j in i + 1..=n {
                    t.push_str(&format!("rel x{i}*x{j} - x{j}*x{i}\n"));
                }
            }
            t
        }
    };
    Ok(text)
}

/// One of the named presentations, optionally over another field.
pub fn builtin_presentation(
    name: &str,
    field_override: Option<FieldSpec>,
) -> Result<Presentation, FreeAlgError> {
    let text = builtin_text(name)?;
    let mut p = parse_presentation_with_field(&text, field_override)?;
    if p.relations.iter().all(|r| r.degree() == 2) {
        p.mode = Mode::Quadratic;
    }
    Ok(p)
}
