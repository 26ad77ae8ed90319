//! Terms of the deterministic lambda-calculus.
//!
//! The calculus restricts application so that arguments are always values
//! (variables or abstractions) and evaluation is weak: it never goes under
//! an abstraction. Membership is checkable with [`Term::is_lamdet`].
//!
//! Terms are immutable and cheaply clonable (reference-counted nodes), so
//! substitution can share every unchanged subtree.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

/// Node shape of a term. Obtained from a [`Term`] via [`Term::kind`].
#[derive(Debug)]
pub enum TermKind {
    Var(String),
    Abs(String, Term),
    App(Term, Term),
}

/// A lambda-term. Equality (`==`) is syntactic, names included; use
/// [`Term::alpha_eq`] for equality up to renaming of bound variables.
#[derive(Clone, Debug)]
pub struct Term(Rc<TermKind>);

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term(Rc::new(TermKind::Var(name.into())))
    }

    pub fn abs(param: impl Into<String>, body: Term) -> Term {
        Term(Rc::new(TermKind::Abs(param.into(), body)))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term(Rc::new(TermKind::App(fun, arg)))
    }

    /// Left-nested application `head a1 a2 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Nested abstraction `\p1. \p2. ... body`.
    pub fn lams<S: Into<String>>(params: impl IntoIterator<Item = S>, body: Term) -> Term {
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        params.into_iter().rev().fold(body, |b, p| Term::abs(p, b))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0
    }

    /// A value is a variable or an abstraction.
    pub fn is_value(&self) -> bool {
        !matches!(self.kind(), TermKind::App(..))
    }

    /// True iff every application subterm has a value in argument position,
    /// i.e. the term fits the grammar `t ::= v | t v`.
    pub fn is_lamdet(&self) -> bool {
        match self.kind() {
            TermKind::Var(_) => true,
            TermKind::Abs(_, body) => body.is_lamdet(),
            TermKind::App(fun, arg) => arg.is_value() && fun.is_lamdet() && arg.is_lamdet(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.kind() {
            TermKind::Var(_) => 1,
            TermKind::Abs(_, body) => 1 + body.size(),
            TermKind::App(fun, arg) => 1 + fun.size() + arg.size(),
        }
    }

    pub fn free_vars(&self) -> HashSet<String> {
        let mut free = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut free);
        free.into_iter().map(str::to_owned).collect()
    }

    pub fn is_closed(&self) -> bool {
        let mut free = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut free);
        free.is_empty()
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut HashSet<&'a str>) {
        match self.kind() {
            TermKind::Var(name) => {
                if !bound.iter().any(|b| *b == name) {
                    out.insert(name);
                }
            }
            TermKind::Abs(param, body) => {
                bound.push(param);
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::App(fun, arg) => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
        }
    }

    /// Capture-avoiding substitution of `value` for the free occurrences of
    /// `var`. Binders that would capture a free variable of `value` are
    /// renamed with primes (`y` becomes `y'`).
    pub fn substitute(&self, var: &str, value: &Term) -> Term {
        let mut free = HashSet::new();
        value.collect_free(&mut Vec::new(), &mut free);
        let free: HashSet<String> = free.into_iter().map(str::to_owned).collect();
        self.subst(var, value, &free)
            .unwrap_or_else(|| self.clone())
    }

    /// Returns `None` when nothing was replaced, so callers can keep sharing
    /// the original node.
    fn subst(&self, var: &str, value: &Term, value_free: &HashSet<String>) -> Option<Term> {
        match self.kind() {
            TermKind::Var(name) => (name == var).then(|| value.clone()),
            TermKind::App(fun, arg) => {
                let fun2 = fun.subst(var, value, value_free);
                let arg2 = arg.subst(var, value, value_free);
                if fun2.is_none() && arg2.is_none() {
                    return None;
                }
                Some(Term::app(
                    fun2.unwrap_or_else(|| fun.clone()),
                    arg2.unwrap_or_else(|| arg.clone()),
                ))
            }
            TermKind::Abs(param, body) => {
                if param == var {
                    return None;
                }
                if value_free.contains(param) && body.occurs_free(var) {
                    let mut avoid = body.free_vars();
                    avoid.extend(value_free.iter().cloned());
                    let mut renamed = format!("{param}'");
                    while avoid.contains(&renamed) {
                        renamed.push('\'');
                    }
                    let body = body.substitute(param, &Term::var(&renamed));
                    let body = body.subst(var, value, value_free).unwrap_or(body);
                    Some(Term::abs(renamed, body))
                } else {
                    body.subst(var, value, value_free)
                        .map(|b| Term::abs(param.clone(), b))
                }
            }
        }
    }

    fn occurs_free(&self, var: &str) -> bool {
        match self.kind() {
            TermKind::Var(name) => name == var,
            TermKind::Abs(param, body) => param != var && body.occurs_free(var),
            TermKind::App(fun, arg) => fun.occurs_free(var) || arg.occurs_free(var),
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(a: &Term, b: &Term, env_a: &mut Vec<String>, env_b: &mut Vec<String>) -> bool {
            match (a.kind(), b.kind()) {
                (TermKind::Var(x), TermKind::Var(y)) => {
                    let ia = env_a.iter().rposition(|n| n == x);
                    let ib = env_b.iter().rposition(|n| n == y);
                    match (ia, ib) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (TermKind::Abs(xa, ba), TermKind::Abs(xb, bb)) => {
                    env_a.push(xa.clone());
                    env_b.push(xb.clone());
                    let r = go(ba, bb, env_a, env_b);
                    env_a.pop();
                    env_b.pop();
                    r
                }
                (TermKind::App(fa, aa), TermKind::App(fb, ab)) => {
                    go(fa, fb, env_a, env_b) && go(aa, ab, env_a, env_b)
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if Rc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(a), TermKind::Var(b)) => a == b,
            (TermKind::Abs(pa, ba), TermKind::Abs(pb, bb)) => pa == pb && ba == bb,
            (TermKind::App(fa, aa), TermKind::App(fb, ab)) => fa == fb && aa == ab,
            _ => false,
        }
    }
}

impl Eq for Term {}

/// Turing's fixpoint combinator in its call-by-value variant: the term
/// `theta theta` with `theta = \x. \y. y (\z. x x y z)`. For any closed
/// value `u`, `fix u` reaches `u (\z. fix u z)` in exactly 2 steps.
pub fn fixpoint() -> Term {
    let theta = Term::abs(
        "x",
        Term::abs(
            "y",
            Term::app(
                Term::var("y"),
                Term::abs(
                    "z",
                    Term::apps(
                        Term::app(Term::var("x"), Term::var("x")),
                        [Term::var("y"), Term::var("z")],
                    ),
                ),
            ),
        ),
    );
    Term::app(theta.clone(), theta)
}

/// The canonical diverging term `(\w. w w) (\w. w w)`. It is a member of
/// the deterministic calculus and loops forever under weak evaluation.
pub fn omega() -> Term {
    let dup = Term::abs("w", Term::app(Term::var("w"), Term::var("w")));
    Term::app(dup.clone(), dup)
}

// --- printing -------------------------------------------------------------

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(name) => f.write_str(name),
            TermKind::Abs(param, body) => write!(f, "\\{param}. {body}"),
            TermKind::App(fun, arg) => {
                match fun.kind() {
                    TermKind::Abs(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                f.write_str(" ")?;
                match arg.kind() {
                    TermKind::Var(name) => f.write_str(name),
                    _ => write!(f, "({arg})"),
                }
            }
        }
    }
}

// --- parsing --------------------------------------------------------------

#[derive(Debug, thiserror::Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseTermError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseTermError> {
        Err(ParseTermError {
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

    fn ident(&mut self) -> Result<String, ParseTermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return self.err("expected identifier");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term, ParseTermError> {
        if self.peek() == Some(b'\\') {
            self.pos += 1;
            let param = self.ident()?;
            if self.peek() != Some(b'.') {
                return self.err("expected '.' after binder");
            }
            self.pos += 1;
            return Ok(Term::abs(param, self.term()?));
        }
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(b')') | None => break,
                Some(b'\\') => {
                    // a trailing abstraction extends to the end of the term
                    acc = Term::app(acc, self.term()?);
                    break;
                }
                Some(_) => acc = Term::app(acc, self.atom()?),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseTermError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Ok(Term::var(self.ident()?)),
        }
    }
}

/// Parses the textual syntax produced by [`Term`]'s `Display`: `\x. t` for
/// abstraction, juxtaposition for application, parentheses for grouping.
pub fn parse_term(src: &str) -> Result<Term, ParseTermError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn id(n: &str) -> Term {
        Term::abs(n, v(n))
    }

    #[test]
    fn lamdet_membership() {
        assert!(id("x").is_lamdet());
        assert!(Term::app(id("x"), id("y")).is_lamdet());
        // x ((\y. y) (\z. z)) has an application in argument position
        let bad = Term::app(v("x"), Term::app(id("y"), id("z")));
        assert!(!bad.is_lamdet());
    }

    #[test]
    fn substitute_free_occurrence() {
        assert_eq!(v("x").substitute("x", &id("y")), id("y"));
    }

    #[test]
    fn substitute_bound_occurrence_untouched() {
        assert_eq!(id("x").substitute("x", &id("y")), id("x"));
    }

    #[test]
    fn substitute_renames_capturing_binder() {
        // (\y. x){x <- y} must not capture: the binder is renamed.
        let t = Term::abs("y", v("x"));
        let r = t.substitute("x", &v("y"));
        assert_eq!(r, Term::abs("y'", v("y")));
        assert!(r.alpha_eq(&Term::abs("q", v("y"))));
    }

    #[test]
    fn alpha_equality() {
        assert!(id("x").alpha_eq(&id("y")));
        let k = Term::abs("x", Term::abs("y", v("x")));
        let flip = Term::abs("a", Term::abs("b", v("b")));
        assert!(!k.alpha_eq(&flip));
        // free variables must match by name
        assert!(v("x").alpha_eq(&v("x")));
        assert!(!v("x").alpha_eq(&v("y")));
    }

    #[test]
    fn fixpoint_is_closed_lamdet() {
        let fix = fixpoint();
        assert!(fix.is_closed());
        assert!(fix.is_lamdet());
    }

    #[test]
    fn display_parse_roundtrip() {
        let cases = [
            id("x"),
            Term::app(id("x"), id("y")),
            fixpoint(),
            Term::abs(
                "f",
                Term::app(v("f"), Term::abs("x", Term::app(v("f"), v("x")))),
            ),
            Term::apps(v("f"), [v("a"), v("b"), v("c")]),
        ];
        for t in cases {
            let printed = t.to_string();
            let back = parse_term(&printed).unwrap();
            assert_eq!(back, t, "roundtrip failed for {printed}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_term("").is_err());
        assert!(parse_term("(x").is_err());
        assert!(parse_term("\\x x").is_err());
        assert!(parse_term("x )").is_err());
    }
}
