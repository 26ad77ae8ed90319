//! Scott encodings of finite alphabets and strings, and the constant-time
//! append combinator.
//!
//! A symbol `a_i` of an n-symbol alphabet is the i-th projection
//! `\x1...\xn. xi`. A string is a Scott list using n+1 abstractions, the
//! extra one standing for the empty string: `<eps> = \x1...\xn.\xe. xe` and
//! `<a_i . r> = \x1...\xn.\xe. xi <r>`. The order of the alphabet is part
//! of the datum; every decoder and the compiled transition tables rely on
//! it.

use crate::term::{Term, TermKind};

#[derive(Debug, thiserror::Error)]
pub enum EncodeError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("malformed alphabet: {0}")]
    BadAlphabet(String),
    #[error("term is not a valid encoding: {0}")]
    Malformed(String),
}

/// 1-based position of a symbol within its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolIndex(pub usize);

/// An ordered finite alphabet. The order is total and fixed: it determines
/// projection indices and the branch order of every compiled table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

/// Blank symbol of the work alphabet, written `_` in the textual formats.
pub const BLANK: char = '_';

impl Alphabet {
    pub fn new(symbols: &[char]) -> Result<Alphabet, EncodeError> {
        if symbols.is_empty() {
            return Err(EncodeError::BadAlphabet("empty alphabet".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(EncodeError::BadAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet {
            symbols: symbols.to_vec(),
        })
    }

    /// Input-tape alphabet `0 < 1 < L < R`.
    pub fn input() -> Alphabet {
        Alphabet {
            symbols: vec!['0', '1', 'L', 'R'],
        }
    }

    /// Work-tape alphabet `0 < 1 < blank`.
    pub fn work() -> Alphabet {
        Alphabet {
            symbols: vec!['0', '1', BLANK],
        }
    }

    /// Binary alphabet `0 < 1`, used for the head-position counter.
    pub fn binary() -> Alphabet {
        Alphabet {
            symbols: vec!['0', '1'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// 1-based position of `c`.
    pub fn position(&self, c: char) -> Result<SymbolIndex, EncodeError> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| SymbolIndex(i + 1))
            .ok_or(EncodeError::UnknownSymbol(c))
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    /// `<a_i> = \x1...\xn. xi`.
    pub fn encode_symbol(&self, c: char) -> Result<Term, EncodeError> {
        let SymbolIndex(i) = self.position(c)?;
        Ok(projection(self.len(), i - 1))
    }

    /// Inverse of [`Alphabet::encode_symbol`], up to alpha.
    pub fn decode_symbol(&self, t: &Term) -> Result<char, EncodeError> {
        let i = decode_projection(t, self.len())?;
        Ok(self.symbols[i])
    }

    /// Scott list over `self` with an extra empty-string abstraction.
    pub fn encode_string(&self, s: &str) -> Result<Term, EncodeError> {
        let mut acc = Term::lams(self.binders(), Term::var("xe"));
        for c in s.chars().rev() {
            let SymbolIndex(i) = self.position(c)?;
            acc = Term::lams(self.binders(), Term::app(Term::var(format!("x{i}")), acc));
        }
        Ok(acc)
    }

    /// Inverse of [`Alphabet::encode_string`], up to alpha.
    pub fn decode_string(&self, t: &Term) -> Result<String, EncodeError> {
        let mut out = String::new();
        let mut cur = t.clone();
        loop {
            let (names, body) = strip_abs(&cur, self.len() + 1)?;
            match body.kind() {
                TermKind::Var(name) => {
                    if nearest_binder(&names, name) == Some(self.len()) {
                        return Ok(out);
                    }
                    return Err(EncodeError::Malformed(format!(
                        "string tail ends in unexpected variable {name} after {out:?}"
                    )));
                }
                TermKind::App(fun, rest) => {
                    let head = match fun.kind() {
                        TermKind::Var(name) => name,
                        _ => {
                            return Err(EncodeError::Malformed(format!(
                                "string cell head is not a variable after {out:?}"
                            )))
                        }
                    };
                    match nearest_binder(&names, head) {
                        Some(i) if i < self.len() => out.push(self.symbols[i]),
                        _ => {
                            return Err(EncodeError::Malformed(format!(
                                "string cell selects binder {head} after {out:?}"
                            )))
                        }
                    }
                    cur = rest.clone();
                }
                TermKind::Abs(..) => {
                    return Err(EncodeError::Malformed(format!(
                        "string body is an abstraction after {out:?}"
                    )))
                }
            }
        }
    }

    /// The append combinator of this alphabet for the character `a`:
    /// `\k. \s. k (\x1...\xn.\xe. xi s)`. For every closed value `k` and
    /// string `s` it takes exactly 2 steps to `k <a . s>`.
    pub fn append_char_term(&self, c: char) -> Result<Term, EncodeError> {
        let SymbolIndex(i) = self.position(c)?;
        let cell = Term::lams(
            self.binders(),
            Term::app(Term::var(format!("x{i}")), Term::var("s")),
        );
        Ok(Term::abs(
            "k",
            Term::abs("s", Term::app(Term::var("k"), cell)),
        ))
    }

    fn binders(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.len()).map(|i| format!("x{i}")).collect();
        names.push("xe".into());
        names
    }
}

/// `\x1...\xn. x(i+1)` (0-based `i`).
pub(crate) fn projection(n: usize, i: usize) -> Term {
    debug_assert!(i < n);
    let names: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    Term::lams(names, Term::var(format!("x{}", i + 1)))
}

/// Recognizes an n-ary projection up to alpha; returns the 0-based index.
pub(crate) fn decode_projection(t: &Term, n: usize) -> Result<usize, EncodeError> {
    let (names, body) = strip_abs(t, n)?;
    match body.kind() {
        TermKind::Var(name) => nearest_binder(&names, name).ok_or_else(|| {
            EncodeError::Malformed(format!("projection body is a free variable {name}"))
        }),
        _ => Err(EncodeError::Malformed(
            "projection body is not a variable".into(),
        )),
    }
}

fn strip_abs(t: &Term, n: usize) -> Result<(Vec<String>, Term), EncodeError> {
    let mut names = Vec::with_capacity(n);
    let mut cur = t.clone();
    for _ in 0..n {
        match cur.kind() {
            TermKind::Abs(param, body) => {
                names.push(param.clone());
                cur = body.clone();
            }
            _ => {
                return Err(EncodeError::Malformed(format!(
                    "expected {n} leading abstractions, found {}",
                    names.len()
                )))
            }
        }
    }
    Ok((names, cur))
}

/// Index of the binder a variable refers to, honoring shadowing.
fn nearest_binder(names: &[String], name: &str) -> Option<usize> {
    names.iter().rposition(|b| b == name)
}
