//! A small text format for multivalued logical models.
//!
//! ```text
//! model Example
//! gene Der arity 3 input
//! gene Drk arity 3 { 1 <- Der:1  2 <- Der:2 }
//! ```
//!
//! Literals: `G` means `x_G >= 1`, `G:v` means `x_G = v`, `G>=v` and `G<v`
//! are thresholds, and `!` negates the following atom (so `!G` is `x_G = 0`).
//! `&` binds tighter than `|`. `#` starts a comment. A gene that is not an
//! input has one `level <- expr` clause per non-zero level it can reach;
//! points matching no clause map to 0.
//!
//! The optional `indegree <int>` annotation on a gene records the number of
//! regulators it has in its source model when the written rule mentions
//! fewer of them. It does not change the compiled function.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::domain::{Level, MixedRadixDomain, MultivaluedFunction};
use crate::error::Result;

/// Source position, 1-based. Positions never take part in equality, so a
/// re-parsed model compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            line: span.line,
            column: span.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("gene {0} is not declared")]
    UnknownGene(String),
    #[error("gene {0} is an input and has no rule")]
    NoRule(String),
    #[error("the rule of {0} references no regulator")]
    NoRegulators(String),
    #[error("{gene}: levels {first} and {second} both match at {point}")]
    Overlap {
        gene: String,
        first: Level,
        second: Level,
        point: String,
    },
}

/// Comparison applied to one gene's level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Test {
    AtLeast(usize),
    Equal(usize),
    Below(usize),
}

impl Test {
    pub fn holds(self, level: usize) -> bool {
        match self {
            Test::AtLeast(v) => level >= v,
            Test::Equal(v) => level == v,
            Test::Below(v) => level < v,
        }
    }

    fn bound(self) -> usize {
        match self {
            Test::AtLeast(v) | Test::Equal(v) | Test::Below(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Literal { gene: String, test: Test, span: Span },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn visit_literals<'a>(&'a self, out: &mut impl FnMut(&'a str, Test, Span)) {
        match self {
            Expr::Literal { gene, test, span } => out(gene, *test, *span),
            Expr::Not(e) => e.visit_literals(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.visit_literals(out);
                b.visit_literals(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub level: Level,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gene {
    pub name: String,
    pub arity: usize,
    pub indegree: Option<usize>,
    /// `None` for inputs.
    pub clauses: Option<Vec<Clause>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleModel {
    pub name: String,
    pub genes: Vec<Gene>,
}

impl RuleModel {
    pub fn gene(&self, name: &str) -> Option<&Gene> {
        self.genes.iter().find(|g| g.name == name)
    }

    /// Genes that carry a rule, in declaration order.
    pub fn ruled_genes(&self) -> impl Iterator<Item = &Gene> {
        self.genes.iter().filter(|g| g.clauses.is_some())
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Colon,
    Ge,
    Lt,
    Arrow,
    And,
    Or,
    Not,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Arrow => f.write_str("`<-`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Not => f.write_str("`!`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    for (row, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = Span {
                line: row + 1,
                column: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = if c.is_ascii_alphabetic() || c == '_' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| ParseError::at(span, format!("integer `{digits}` is too large")))?;
                Tok::Int(n)
            } else {
                let next = chars.get(i + 1).copied();
                let (tok, len) = match (c, next) {
                    ('<', Some('-')) => (Tok::Arrow, 2),
                    ('>', Some('=')) => (Tok::Ge, 2),
                    ('<', _) => (Tok::Lt, 1),
                    (':', _) => (Tok::Colon, 1),
                    ('&', _) => (Tok::And, 1),
                    ('|', _) => (Tok::Or, 1),
                    ('!', _) => (Tok::Not, 1),
                    ('(', _) => (Tok::LParen, 1),
                    (')', _) => (Tok::RParen, 1),
                    ('{', _) => (Tok::LBrace, 1),
                    ('}', _) => (Tok::RBrace, 1),
                    _ => return Err(ParseError::at(span, format!("unexpected character `{c}`"))),
                };
                i += len;
                tok
            };
            out.push((tok, span));
        }
    }
    let end = Span {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(ParseError::at(
            self.span(),
            format!("expected {wanted}, found {}", self.peek()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Span> {
        match self.peek() {
            Tok::Ident(s) if s == word => Ok(self.bump().1),
            _ => self.unexpected(&format!("`{word}`")),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().1)),
            _ => self.unexpected("an identifier"),
        }
    }

    fn int(&mut self) -> PResult<(usize, Span)> {
        match *self.peek() {
            Tok::Int(n) => Ok((n, self.bump().1)),
            _ => self.unexpected("an integer"),
        }
    }

    fn model(&mut self) -> PResult<RuleModel> {
        self.keyword("model")?;
        let (name, _) = self.ident()?;
        let mut genes = Vec::new();
        while *self.peek() != Tok::Eof {
            genes.push(self.gene()?);
        }
        Ok(RuleModel { name, genes })
    }

    fn gene(&mut self) -> PResult<Gene> {
        let span = self.keyword("gene")?;
        let (name, _) = self.ident()?;
        self.keyword("arity")?;
        let (arity, arity_span) = self.int()?;
        if arity < 2 {
            return Err(ParseError::at(
                arity_span,
                format!("gene {name} needs arity at least 2"),
            ));
        }
        let indegree = if self.at_keyword("indegree") {
            self.bump();
            Some(self.int()?.0)
        } else {
            None
        };
        let clauses = if self.at_keyword("input") {
            self.bump();
            None
        } else if *self.peek() == Tok::LBrace {
            self.bump();
            let mut clauses = Vec::new();
            while *self.peek() != Tok::RBrace {
                let (level, span) = self.int()?;
                self.expect(Tok::Arrow)?;
                let expr = self.expr()?;
                clauses.push(Clause {
                    level: level as Level,
                    expr,
                    span,
                });
            }
            self.bump();
            Some(clauses)
        } else {
            None
        };
        Ok(Gene {
            name,
            arity,
            indegree,
            clauses,
            span,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Expr::Not(Box::new(self.atom()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) => {
                let (gene, span) = self.ident()?;
                let test = match self.peek() {
                    Tok::Colon => {
                        self.bump();
                        Test::Equal(self.int()?.0)
                    }
                    Tok::Ge => {
                        self.bump();
                        Test::AtLeast(self.int()?.0)
                    }
                    Tok::Lt => {
                        self.bump();
                        Test::Below(self.int()?.0)
                    }
                    _ => Test::AtLeast(1),
                };
                Ok(Expr::Literal { gene, test, span })
            }
            _ => self.unexpected("a literal, `!` or `(`"),
        }
    }
}

/// Parses and checks a model: names resolve, literal values and clause
/// levels fit the arities, and no level is defined twice.
pub fn parse(text: &str) -> std::result::Result<RuleModel, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let model = parser.model()?;
    check(&model)?;
    Ok(model)
}

fn check(model: &RuleModel) -> PResult<()> {
    let mut arities = HashMap::new();
    for g in &model.genes {
        if arities.insert(g.name.as_str(), g.arity).is_some() {
            return Err(ParseError::at(g.span, format!("gene {} is declared twice", g.name)));
        }
    }
    for g in &model.genes {
        let Some(clauses) = &g.clauses else { continue };
        let mut levels = HashSet::new();
        for c in clauses {
            if c.level == 0 || c.level as usize >= g.arity {
                return Err(ParseError::at(
                    c.span,
                    format!("level {} of {} is outside 1..{}", c.level, g.name, g.arity),
                ));
            }
            if !levels.insert(c.level) {
                return Err(ParseError::at(
                    c.span,
                    format!("level {} of {} has two clauses", c.level, g.name),
                ));
            }
            let mut err = None;
            c.expr.visit_literals(&mut |name, test, span| {
                if err.is_some() {
                    return;
                }
                match arities.get(name) {
                    None => err = Some(ParseError::at(span, format!("undeclared gene {name}"))),
                    Some(&k) if test.bound() >= k => {
                        err = Some(ParseError::at(
                            span,
                            format!("value {} is outside the range of {name} (arity {k})", test.bound()),
                        ))
                    }
                    _ => {}
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pretty printing

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: u8) -> fmt::Result {
    // ctx: 0 = top / inside `|`, 1 = operand of `&`, 2 = operand of `!`
    match e {
        Expr::Literal { gene, test, .. } => match test {
            Test::AtLeast(1) => write!(f, "{gene}"),
            Test::AtLeast(v) => write!(f, "{gene}>={v}"),
            Test::Equal(v) => write!(f, "{gene}:{v}"),
            Test::Below(v) => write!(f, "{gene}<{v}"),
        },
        Expr::Not(inner) => {
            f.write_str("!")?;
            write_expr(f, inner, 2)
        }
        Expr::Or(a, b) => {
            let wrap = ctx > 0;
            if wrap {
                f.write_str("(")?;
            }
            write_expr(f, a, 0)?;
            f.write_str(" | ")?;
            // Right operands of a left-associated chain need parentheses.
            if matches!(**b, Expr::Or(..)) {
                f.write_str("(")?;
                write_expr(f, b, 0)?;
                f.write_str(")")?;
            } else {
                write_expr(f, b, 0)?;
            }
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
        Expr::And(a, b) => {
            let wrap = ctx > 1;
            if wrap {
                f.write_str("(")?;
            }
            write_expr(f, a, 1)?;
            f.write_str(" & ")?;
            if matches!(**b, Expr::And(..)) {
                f.write_str("(")?;
                write_expr(f, b, 1)?;
                f.write_str(")")?;
            } else {
                write_expr(f, b, 1)?;
            }
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl fmt::Display for RuleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.name)?;
        for g in &self.genes {
            write!(f, "gene {} arity {}", g.name, g.arity)?;
            if let Some(d) = g.indegree {
                write!(f, " indegree {d}")?;
            }
            match &g.clauses {
                None => writeln!(f, " input")?,
                Some(clauses) => {
                    writeln!(f, " {{")?;
                    for c in clauses {
                        writeln!(f, "  {} <- {}", c.level, c.expr)?;
                    }
                    writeln!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Compilation

/// What to do when two clauses of one gene match the same point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapPolicy {
    #[default]
    Reject,
    HighestLevel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledGene {
    pub name: String,
    pub regulators: Vec<String>,
    pub function: MultivaluedFunction,
}

enum Resolved {
    Lit(usize, Test),
    Not(Box<Resolved>),
    And(Box<Resolved>, Box<Resolved>),
    Or(Box<Resolved>, Box<Resolved>),
}

impl Resolved {
    fn new(e: &Expr, index: &HashMap<&str, usize>) -> Self {
        match e {
            Expr::Literal { gene, test, .. } => Resolved::Lit(index[gene.as_str()], *test),
            Expr::Not(a) => Resolved::Not(Box::new(Self::new(a, index))),
            Expr::And(a, b) => Resolved::And(Box::new(Self::new(a, index)), Box::new(Self::new(b, index))),
            Expr::Or(a, b) => Resolved::Or(Box::new(Self::new(a, index)), Box::new(Self::new(b, index))),
        }
    }

    fn eval(&self, x: &[usize]) -> bool {
        match self {
            Resolved::Lit(i, t) => t.holds(x[*i]),
            Resolved::Not(a) => !a.eval(x),
            Resolved::And(a, b) => a.eval(x) && b.eval(x),
            Resolved::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }
}

/// Regulators of a ruled gene in order of first appearance.
pub fn regulators(gene: &Gene) -> Vec<String> {
    let mut seen = Vec::<String>::new();
    for c in gene.clauses.iter().flatten() {
        c.expr.visit_literals(&mut |name, _, _| {
            if !seen.iter().any(|s| s == name) {
                seen.push(name.to_string());
            }
        });
    }
    seen
}

pub fn compile(model: &RuleModel, gene: &str, policy: OverlapPolicy) -> Result<CompiledGene> {
    let g = model
        .gene(gene)
        .ok_or_else(|| CompileError::UnknownGene(gene.to_string()))?;
    let clauses = g
        .clauses
        .as_ref()
        .ok_or_else(|| CompileError::NoRule(gene.to_string()))?;
    let regs = regulators(g);
    if regs.is_empty() {
        return Err(CompileError::NoRegulators(gene.to_string()).into());
    }
    let mut arities = Vec::with_capacity(regs.len());
    for r in &regs {
        let decl = model.gene(r).ok_or_else(|| CompileError::UnknownGene(r.clone()))?;
        arities.push(decl.arity);
    }
    let index: HashMap<&str, usize> = regs.iter().enumerate().map(|(i, r)| (r.as_str(), i)).collect();
    let rules: Vec<(Level, Resolved)> = clauses
        .iter()
        .map(|c| (c.level, Resolved::new(&c.expr, &index)))
        .collect();

    let domain = MixedRadixDomain::new(arities)?;
    let mut values = Vec::with_capacity(domain.cardinality());
    for x in domain.points() {
        let mut value: Option<Level> = None;
        for (level, rule) in &rules {
            if !rule.eval(&x) {
                continue;
            }
            match value {
                Some(prev) if policy == OverlapPolicy::Reject => {
                    let point = regs
                        .iter()
                        .zip(&x)
                        .map(|(r, v)| format!("{r}={v}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    return Err(CompileError::Overlap {
                        gene: gene.to_string(),
                        first: prev,
                        second: *level,
                        point,
                    }
                    .into());
                }
                Some(prev) => value = Some(prev.max(*level)),
                None => value = Some(*level),
            }
        }
        values.push(value.unwrap_or(0));
    }
    let function = MultivaluedFunction::new(domain, g.arity, values)?;
    Ok(CompiledGene {
        name: g.name.clone(),
        regulators: regs,
        function,
    })
}

// ---------------------------------------------------------------------------
// Single-switch structure

/// `f(x) = 1` iff `x_B ∈ s1 ∧ φ(x_{−B})` and `f(x) = 2` iff `x_B ∈ s2 ∧ φ(x_{−B})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureS {
    pub switch: usize,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    /// φ over the other coordinates, flat-indexed in their original order.
    pub context: Vec<bool>,
}

/// Every coordinate that acts as a switch for `f`, in ascending order.
pub fn structure_s_candidates(f: &MultivaluedFunction) -> Vec<StructureS> {
    if f.codomain() != 3 {
        return Vec::new();
    }
    let domain = f.domain();
    let n = domain.dimension();
    let mut found = Vec::new();
    'coord: for b in 0..n {
        let kb = domain.arity(b);
        let stride = domain.strides()[b];
        let rest = domain.cardinality() / kb;
        let mut pattern: Option<Vec<Level>> = None;
        let mut context = Vec::with_capacity(rest);
        // Points with x_b = 0 enumerate the other coordinates in order.
        for idx in 0..domain.cardinality() {
            if !(idx / stride).is_multiple_of(kb) {
                continue;
            }
            let row: Vec<Level> = (0..kb).map(|v| f.value(idx + v * stride)).collect();
            let active = row.iter().any(|&v| v != 0);
            if active {
                match &pattern {
                    None => pattern = Some(row),
                    Some(p) if *p == row => {}
                    Some(_) => continue 'coord,
                }
            }
            context.push(active);
        }
        let Some(p) = pattern else { continue };
        let s1: Vec<usize> = (0..kb).filter(|&v| p[v] == 1).collect();
        let s2: Vec<usize> = (0..kb).filter(|&v| p[v] == 2).collect();
        if !s1.is_empty() && !s2.is_empty() {
            found.push(StructureS {
                switch: b,
                s1,
                s2,
                context,
            });
        }
    }
    found
}

pub fn detect_structure_s(f: &MultivaluedFunction) -> Option<StructureS> {
    structure_s_candidates(f).into_iter().next()
}
