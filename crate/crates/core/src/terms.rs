//! Terms of the external language, identities and quasi-identities: parser,
//! printer, evaluator over a [`FiniteAlgebra`] and exhaustive validity
//! checks.
//!
//! Concrete syntax: variables `[a-z][a-z0-9]*`, constants `0` and `1`,
//! prefix `-` (negation) and `J0`, `J1`, `J2`, infix `&` and `|`. Unary
//! operators bind tightest, then `&`, then `|`; binary operators associate
//! to the left. An identity is written `s = t` and a quasi-identity
//! `s1 = t1 , s2 = t2 => s = t`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error("`{0}` has no J2 operation")]
    NoJ2(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Not(Box<Term>),
    J0(Box<Term>),
    J1(Box<Term>),
    J2(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn j2(t: Term) -> Term {
        Term::J2(Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    /// Rewrites `J0 t` to `J2 -t` and `J1 t` to `-(J2 t | J2 -t)`.
    pub fn expand(&self) -> Term {
        match self {
            Term::Var(_) | Term::Zero | Term::One => self.clone(),
            Term::Not(t) => Term::not(t.expand()),
            Term::J2(t) => Term::j2(t.expand()),
            Term::J0(t) => Term::j2(Term::not(t.expand())),
            Term::J1(t) => {
                let t = t.expand();
                Term::not(Term::or(Term::j2(t.clone()), Term::j2(Term::not(t))))
            }
            Term::And(a, b) => Term::and(a.expand(), b.expand()),
            Term::Or(a, b) => Term::or(a.expand(), b.expand()),
        }
    }

    pub fn uses_j(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero | Term::One => false,
            Term::J0(_) | Term::J1(_) | Term::J2(_) => true,
            Term::Not(t) => t.uses_j(),
            Term::And(a, b) | Term::Or(a, b) => a.uses_j() || b.uses_j(),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::Zero | Term::One => {}
            Term::Not(t) | Term::J0(t) | Term::J1(t) | Term::J2(t) => t.collect_vars(out),
            Term::And(a, b) | Term::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Distinct variables in alphabetical order.
    pub fn variables(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        set.into_iter().map(String::from).collect()
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Or(..) => 0,
            Term::And(..) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, t: &Term, parens: bool| {
            if parens {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Not(t) => {
                write!(f, "-")?;
                wrap(f, t, t.precedence() < 2)
            }
            Term::J0(t) | Term::J1(t) | Term::J2(t) => {
                let k = match self {
                    Term::J0(_) => 0,
                    Term::J1(_) => 1,
                    _ => 2,
                };
                write!(f, "J{k} ")?;
                wrap(f, t, t.precedence() < 2)
            }
            Term::And(a, b) => {
                wrap(f, a, a.precedence() < 1)?;
                write!(f, " & ")?;
                wrap(f, b, b.precedence() < 2)
            }
            Term::Or(a, b) => {
                wrap(f, a, false)?;
                write!(f, " | ")?;
                wrap(f, b, b.precedence() < 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: BTreeSet<String> = self.lhs.variables().into_iter().collect();
        v.extend(self.rhs.variables());
        v.into_iter().collect()
    }

    pub fn uses_j(&self) -> bool {
        self.lhs.uses_j() || self.rhs.uses_j()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn variables(&self) -> Vec<String> {
        let mut v: BTreeSet<String> = self.conclusion.variables().into_iter().collect();
        for p in &self.premises {
            v.extend(p.variables());
        }
        v.into_iter().collect()
    }

    pub fn uses_j(&self) -> bool {
        self.conclusion.uses_j() || self.premises.iter().any(Identity::uses_j)
    }
}

impl From<Identity> for QuasiIdentity {
    fn from(id: Identity) -> Self {
        QuasiIdentity { premises: Vec::new(), conclusion: id }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "{} => ", ps.join(" , "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Var(&'a str),
    Zero,
    One,
    Minus,
    J(u8),
    Amp,
    Bar,
    LParen,
    RParen,
    Eq,
    Comma,
    Implies,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>, TermError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push((start, Tok::Var(&text[start..i])));
                continue;
            }
            b'J' => match bytes.get(i + 1) {
                Some(d @ b'0'..=b'2') if !bytes.get(i + 2).is_some_and(|b| b.is_ascii_alphanumeric()) => {
                    i += 1;
                    Tok::J(d - b'0')
                }
                _ => {
                    return Err(TermError::Syntax { pos: start, message: "expected J0, J1 or J2".into() })
                }
            },
            b'0' | b'1' => {
                if bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric()) {
                    return Err(TermError::Syntax { pos: start, message: "malformed constant".into() });
                }
                if c == b'0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            b'-' => Tok::Minus,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'=' => Tok::Eq,
            _ => {
                return Err(TermError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, TermError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax { pos: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok<'a>, what: &str) -> Result<(), TermError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<(), TermError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.error("unexpected trailing input"),
        }
    }

    // or := and ('|' and)*
    fn or(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(Tok::Bar) {
            self.pos += 1;
            lhs = Term::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    // and := unary ('&' unary)*
    fn and(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::Amp) {
            self.pos += 1;
            lhs = Term::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term, TermError> {
        let tok = match self.peek() {
            Some(t) => t,
            None => return self.error("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Var(v) => Ok(Term::var(v)),
            Tok::Zero => Ok(Term::Zero),
            Tok::One => Ok(Term::One),
            Tok::Minus => Ok(Term::not(self.unary()?)),
            Tok::J(k) => {
                let t = Box::new(self.unary()?);
                Ok(match k {
                    0 => Term::J0(t),
                    1 => Term::J1(t),
                    _ => Term::J2(t),
                })
            }
            Tok::LParen => {
                let t = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => {
                self.pos -= 1;
                self.error("expected a term")
            }
        }
    }

    fn identity(&mut self) -> Result<Identity, TermError> {
        let lhs = self.or()?;
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.or()?;
        Ok(Identity::new(lhs, rhs))
    }

    fn quasi_identity(&mut self) -> Result<QuasiIdentity, TermError> {
        let mut ids = vec![self.identity()?];
        while self.peek() == Some(Tok::Comma) {
            self.pos += 1;
            ids.push(self.identity()?);
        }
        if self.peek() == Some(Tok::Implies) {
            self.pos += 1;
            let conclusion = self.identity()?;
            return Ok(QuasiIdentity { premises: ids, conclusion });
        }
        if ids.len() > 1 {
            return self.error("expected `=>`");
        }
        Ok(ids.pop().unwrap().into())
    }
}

pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let mut p = Parser::new(text)?;
    let t = p.or()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(text: &str) -> Result<Identity, TermError> {
    let mut p = Parser::new(text)?;
    let id = p.identity()?;
    p.finish()?;
    Ok(id)
}

/// Accepts a plain identity as well (no premises).
pub fn parse_quasi_identity(text: &str) -> Result<QuasiIdentity, TermError> {
    let mut p = Parser::new(text)?;
    let q = p.quasi_identity()?;
    p.finish()?;
    Ok(q)
}

/// Variable assignment into some algebra; variables are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    vars: Vec<String>,
    values: Vec<Elem>,
}

impl Valuation {
    pub fn new(pairs: &[(&str, Elem)]) -> Self {
        let mut pairs: Vec<(String, Elem)> = pairs.iter().map(|(v, e)| (v.to_string(), *e)).collect();
        pairs.sort();
        let (vars, values) = pairs.into_iter().unzip();
        Valuation { vars, values }
    }

    pub fn get(&self, var: &str) -> Option<Elem> {
        self.vars.iter().position(|v| v == var).map(|i| self.values[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, Elem)> {
        self.vars.iter().map(String::as_str).zip(self.values.iter().copied())
    }

    /// `x=half,y=0` style rendering with element names of `a`.
    pub fn render(&self, a: &FiniteAlgebra) -> String {
        self.pairs().map(|(v, e)| format!("{v}={}", a.element_name(e))).collect::<Vec<_>>().join(",")
    }
}

/// A term with `J0`/`J1` expanded and variables replaced by slots.
#[derive(Debug, Clone)]
pub(crate) enum Node {
    Var(usize),
    Zero,
    One,
    Not(Box<Node>),
    J2(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

impl Node {
    pub(crate) fn compile(t: &Term, vars: &[String]) -> Node {
        fn go(t: &Term, vars: &[String]) -> Node {
            match t {
                Term::Var(v) => Node::Var(vars.iter().position(|w| w == v).expect("variable slot")),
                Term::Zero => Node::Zero,
                Term::One => Node::One,
                Term::Not(t) => Node::Not(Box::new(go(t, vars))),
                Term::J2(t) => Node::J2(Box::new(go(t, vars))),
                Term::And(a, b) => Node::And(Box::new(go(a, vars)), Box::new(go(b, vars))),
                Term::Or(a, b) => Node::Or(Box::new(go(a, vars)), Box::new(go(b, vars))),
                Term::J0(_) | Term::J1(_) => unreachable!("expanded"),
            }
        }
        go(&t.expand(), vars)
    }

    /// Evaluates with `J2` taken from `j2`; `None` when `j2` is undefined
    /// somewhere along the way.
    pub(crate) fn eval_with(&self, a: &FiniteAlgebra, j2: &dyn Fn(Elem) -> Option<Elem>, vals: &[Elem]) -> Option<Elem> {
        Some(match self {
            Node::Var(i) => vals[*i],
            Node::Zero => a.zero(),
            Node::One => a.one(),
            Node::Not(t) => a.not(t.eval_with(a, j2, vals)?),
            Node::J2(t) => j2(t.eval_with(a, j2, vals)?)?,
            Node::And(x, y) => a.and(x.eval_with(a, j2, vals)?, y.eval_with(a, j2, vals)?),
            Node::Or(x, y) => a.or(x.eval_with(a, j2, vals)?, y.eval_with(a, j2, vals)?),
        })
    }

    pub(crate) fn eval(&self, a: &FiniteAlgebra, vals: &[Elem]) -> Elem {
        self.eval_with(a, &|e| a.j2(e), vals).expect("J2 presence checked before evaluation")
    }
}

/// A quasi-identity compiled against a fixed variable order.
#[derive(Debug, Clone)]
pub(crate) struct CompiledQuasi {
    pub vars: Vec<String>,
    pub premises: Vec<(Node, Node)>,
    pub conclusion: (Node, Node),
}

impl CompiledQuasi {
    pub(crate) fn new(q: &QuasiIdentity) -> Self {
        let vars = q.variables();
        let pair = |id: &Identity| (Node::compile(&id.lhs, &vars), Node::compile(&id.rhs, &vars));
        CompiledQuasi {
            premises: q.premises.iter().map(pair).collect(),
            conclusion: pair(&q.conclusion),
            vars,
        }
    }

    /// `Some(true)` if the instance holds, `Some(false)` if it fails and
    /// `None` if the partial `J2` table leaves it undetermined.
    pub(crate) fn instance(&self, a: &FiniteAlgebra, j2: &dyn Fn(Elem) -> Option<Elem>, vals: &[Elem]) -> Option<bool> {
        let mut undetermined = false;
        for (l, r) in &self.premises {
            match (l.eval_with(a, j2, vals), r.eval_with(a, j2, vals)) {
                (Some(x), Some(y)) if x != y => return Some(true),
                (Some(_), Some(_)) => {}
                _ => undetermined = true,
            }
        }
        let (l, r) = &self.conclusion;
        match (l.eval_with(a, j2, vals), r.eval_with(a, j2, vals)) {
            (Some(x), Some(y)) if x == y => Some(true),
            (Some(_), Some(_)) if !undetermined => Some(false),
            _ => None,
        }
    }

    /// First valuation (lexicographic in element order, first variable
    /// most significant) at which the quasi-identity fails.
    pub(crate) fn first_failure(&self, a: &FiniteAlgebra) -> Option<Vec<Elem>> {
        let j2 = |e: Elem| a.j2(e);
        valuations(a.size(), self.vars.len()).find(|vals| self.instance(a, &j2, vals) == Some(false))
    }
}

/// All assignments of `k` variables into `0..n`, in lexicographic order.
pub(crate) fn valuations(n: usize, k: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = if n == 0 && k > 0 { 0 } else { n.pow(k as u32) };
    (0..total).map(move |mut code| {
        let mut vals = vec![0; k];
        for slot in (0..k).rev() {
            vals[slot] = code % n;
            code /= n;
        }
        vals
    })
}

fn require_j2(a: &FiniteAlgebra, uses_j: bool) -> Result<(), TermError> {
    if uses_j && !a.has_j2() {
        Err(TermError::NoJ2(a.name().to_string()))
    } else {
        Ok(())
    }
}

pub fn evaluate(t: &Term, a: &FiniteAlgebra, v: &Valuation) -> Result<Elem, TermError> {
    require_j2(a, t.uses_j())?;
    let vars = t.variables();
    let vals = vars
        .iter()
        .map(|x| v.get(x).ok_or_else(|| TermError::MissingVariable(x.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Node::compile(t, &vars).eval(a, &vals))
}

/// Outcome of an exhaustive validity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Valuation),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Valuation> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(v) => Some(v),
        }
    }
}

pub fn check_quasi_identity(a: &FiniteAlgebra, q: &QuasiIdentity) -> Result<Verdict, TermError> {
    require_j2(a, q.uses_j())?;
    let c = CompiledQuasi::new(q);
    Ok(match c.first_failure(a) {
        None => Verdict::Holds,
        Some(vals) => Verdict::Fails(Valuation { vars: c.vars, values: vals }),
    })
}

pub fn check_identity(a: &FiniteAlgebra, id: &Identity) -> Result<Verdict, TermError> {
    check_quasi_identity(a, &id.clone().into())
}

/// Designated value sets over the three-element generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    /// Bochvar's external logic: `{1}`.
    Be,
    /// External paraconsistent weak Kleene logic: `{1, half}`.
    PWKe,
}

impl Logic {
    pub fn designated(self, wke: &FiniteAlgebra) -> BTreeSet<Elem> {
        let one = wke.one();
        match self {
            Logic::Be => [one].into_iter().collect(),
            Logic::PWKe => [one, wke.element("half").expect("WKe fixture")].into_iter().collect(),
        }
    }
}

impl std::str::FromStr for Logic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Be" | "be" | "B" => Ok(Logic::Be),
            "PWKe" | "pwke" | "PWK" => Ok(Logic::PWKe),
            other => Err(format!("unknown logic `{other}` (expected Be or PWKe)")),
        }
    }
}

/// Whether every valuation into the three-element generator sends `t` into
/// `designated`; otherwise the first valuation that does not.
pub fn tautology(t: &Term, designated: &BTreeSet<Elem>) -> (bool, Option<Valuation>) {
    let wke = crate::fixtures::wke();
    let vars = t.variables();
    let node = Node::compile(t, &vars);
    for vals in valuations(wke.size(), vars.len()) {
        if !designated.contains(&node.eval(&wke, &vals)) {
            return (false, Some(Valuation { vars, values: vals }));
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_term("J2 x | -J2 x").unwrap(),
            Term::or(Term::j2(Term::var("x")), Term::not(Term::j2(Term::var("x"))))
        );
        assert_eq!(
            parse_term("x & (y | z)").unwrap(),
            Term::and(Term::var("x"), Term::or(Term::var("y"), Term::var("z")))
        );
        let j1 = parse_term("J1 x").unwrap();
        assert_eq!(j1, Term::J1(Box::new(Term::var("x"))));
        assert_eq!(
            j1.expand(),
            Term::not(Term::or(Term::j2(Term::var("x")), Term::j2(Term::not(Term::var("x")))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_term("x | y & z").unwrap(), Term::or(Term::var("x"), Term::and(Term::var("y"), Term::var("z"))));
        assert_eq!(parse_term("x | y | z").unwrap(), Term::or(Term::or(Term::var("x"), Term::var("y")), Term::var("z")));
        assert_eq!(parse_term("-x & y").unwrap(), Term::and(Term::not(Term::var("x")), Term::var("y")));
        assert_eq!(parse_term("J2 -x").unwrap(), Term::j2(Term::not(Term::var("x"))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_term("x &").unwrap_err(), TermError::Syntax { pos: 3, message: "unexpected end of input".into() });
        assert!(matches!(parse_term("x ^ y"), Err(TermError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_term("(x | y"), Err(TermError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_term("J3 x"), Err(TermError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_term("X"), Err(TermError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_quasi_identity("x = y , y = z"), Err(TermError::Syntax { .. })));
    }

    #[test]
    fn quasi_identity_syntax() {
        let q = parse_quasi_identity("x = -x , y = -y => x = y").unwrap();
        assert_eq!(q.premises.len(), 2);
        assert_eq!(q.to_string(), "x = -x , y = -y => x = y");
        assert!(parse_quasi_identity("x | x = x").unwrap().premises.is_empty());
    }

    #[test]
    fn evaluation_on_wke() {
        let a = wke();
        let (z, h) = (a.element("0").unwrap(), a.element("half").unwrap());
        let v = Valuation::new(&[("x", h)]);
        assert_eq!(evaluate(&parse_term("-x").unwrap(), &a, &v).unwrap(), h);
        assert_eq!(evaluate(&parse_term("J2 x").unwrap(), &a, &v).unwrap(), z);
        let v = Valuation::new(&[("x", z), ("y", h)]);
        assert_eq!(evaluate(&parse_term("x & y").unwrap(), &a, &v).unwrap(), h);
        assert_eq!(
            evaluate(&parse_term("x & z").unwrap(), &a, &v),
            Err(TermError::MissingVariable("z".into()))
        );
        assert!(matches!(evaluate(&parse_term("J2 x").unwrap(), &wk(), &v), Err(TermError::NoJ2(_))));
    }

    #[test]
    fn derived_externals_on_wke() {
        let a = wke();
        let e = |n: &str| a.element(n).unwrap();
        let j0 = parse_term("J0 x").unwrap();
        let j1 = parse_term("J1 x").unwrap();
        let at = |t: &Term, x: &str| a.element_name(evaluate(t, &a, &Valuation::new(&[("x", e(x))])).unwrap()).to_string();
        assert_eq!([at(&j0, "0"), at(&j0, "half"), at(&j0, "1")], ["1", "0", "0"]);
        assert_eq!([at(&j1, "0"), at(&j1, "half"), at(&j1, "1")], ["0", "1", "0"]);
    }

    #[test]
    fn identity_checks() {
        let a = wke();
        let h = a.element("half").unwrap();
        let v = check_identity(&a, &parse_identity("x | -x = 1").unwrap()).unwrap();
        assert_eq!(v, Verdict::Fails(Valuation::new(&[("x", h)])));
        assert!(check_identity(&b2_bochvar(), &parse_identity("J2 x = x").unwrap()).unwrap().holds());
        let v = check_identity(&a, &parse_identity("J2 -x = -J2 x").unwrap()).unwrap();
        assert_eq!(v.counterexample().unwrap().render(&a), "x=half");
    }

    #[test]
    fn quasi_identity_checks() {
        let q = parse_quasi_identity("J0 x = J0 y , J2 x = J2 y => x = y").unwrap();
        assert!(check_quasi_identity(&wke(), &q).unwrap().holds());
        let fix = parse_quasi_identity("x = -x , y = -y => x = y").unwrap();
        let v = check_quasi_identity(&sl2_bochvar(), &fix).unwrap();
        assert_eq!(v.counterexample().unwrap().render(&sl2_bochvar()), "x=0,y=e");
        let id = parse_identity("x | -x = 1").unwrap();
        for a in [wke(), b2_bochvar(), sl2_bochvar()] {
            assert_eq!(check_quasi_identity(&a, &id.clone().into()).unwrap(), check_identity(&a, &id).unwrap());
        }
    }

    #[test]
    fn tautologies() {
        let a = wke();
        let be = Logic::Be.designated(&a);
        let pwk = Logic::PWKe.designated(&a);
        assert_eq!(tautology(&parse_term("J2 x | -J2 x").unwrap(), &be), (true, None));
        let (ok, cex) = tautology(&parse_term("x | -x").unwrap(), &be);
        assert!(!ok);
        assert_eq!(cex.unwrap().render(&a), "x=half");
        assert!(tautology(&parse_term("x | -x").unwrap(), &pwk).0);
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::Zero),
            Just(Term::One),
            "[a-z][a-z0-9]{0,2}".prop_map(Term::Var),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Term::not),
                inner.clone().prop_map(|t| Term::J0(Box::new(t))),
                inner.clone().prop_map(|t| Term::J1(Box::new(t))),
                inner.clone().prop_map(Term::j2),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::or(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_term()) {
            let printed = t.to_string();
            prop_assert_eq!(parse_term(&printed).unwrap(), t);
        }

        #[test]
        fn printing_ignores_whitespace(t in arb_term()) {
            let squeezed: String = t.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
            prop_assert_eq!(parse_term(&squeezed).unwrap(), t);
        }
    }
}
