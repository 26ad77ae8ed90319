//! Reversed binary numerals and their lambda-level arithmetic.
//!
//! A natural number is stored least-significant-bit first with every
//! all-zero suffix collapsed, so the empty string is 0, `1` is one, `01` is
//! two, `11` is three, `001` is four. The reversed order lets successor and
//! predecessor process the string once, left to right.
//!
//! The reference functions ([`succ_rb`], [`pred_rb`], [`lookup_rb`]) are
//! plain Rust; [`succ_term`], [`pred_term`] and [`lookup_term`] are closed
//! lambda-terms in continuation-passing style whose evaluation agrees with
//! them, consuming one Scott constructor per recursive call so the step
//! count stays linear in the bit length (times the alphabet scan for
//! lookup).

use crate::encode::Alphabet;
use crate::term::{fixpoint, omega, Term};

#[derive(Debug, thiserror::Error)]
pub enum RevbinError {
    #[error("trailing zero in reversed binary string")]
    TrailingZero,
    #[error("predecessor of zero is undefined")]
    PredOfZero,
    #[error("lookup index {index} out of range for string of length {len}")]
    IndexOutOfRange { index: u64, len: usize },
}

/// A reversed-binary numeral: bits least-significant first, no trailing
/// zeros (the last stored bit, if any, is 1). The empty sequence is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zero() -> BitString {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<BitString, RevbinError> {
        if bits.last() == Some(&false) {
            return Err(RevbinError::TrailingZero);
        }
        Ok(BitString(bits))
    }

    pub fn from_nat(mut n: u64) -> BitString {
        let mut bits = Vec::new();
        while n > 0 {
            bits.push(n & 1 == 1);
            n >>= 1;
        }
        BitString(bits)
    }

    pub fn to_nat(&self) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rendering as a character string, LSB first: 2 prints as `01`.
    pub fn to_digits(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// `succ eps = 1; succ 0.s = 1.s; succ 1.s = 0.(succ s)`.
pub fn succ_rb(b: &BitString) -> BitString {
    let mut bits = b.0.clone();
    let mut i = 0;
    while i < bits.len() && bits[i] {
        bits[i] = false;
        i += 1;
    }
    if i == bits.len() {
        bits.push(true);
    } else {
        bits[i] = true;
    }
    BitString(bits)
}

/// `pred 0.s = 1.(pred s); pred 1.eps = eps; pred 1.b.s = 0.b.s`. Only
/// defined on nonzero numerals; never introduces a trailing zero.
pub fn pred_rb(b: &BitString) -> Result<BitString, RevbinError> {
    if b.is_empty() {
        return Err(RevbinError::PredOfZero);
    }
    let mut bits = b.0.clone();
    let mut i = 0;
    while !bits[i] {
        bits[i] = true;
        i += 1;
    }
    if i == bits.len() - 1 {
        bits.truncate(i);
    } else {
        bits[i] = false;
    }
    Ok(BitString(bits))
}

/// Extracts the (n+1)-th character of a non-empty string:
/// `lookup 0 (c.s) = c; lookup n (c.s) = lookup (pred n) s` for n > 0.
pub fn lookup_rb(n: &BitString, s: &str) -> Result<char, RevbinError> {
    let index = n.to_nat();
    s.chars()
        .nth(index as usize)
        .ok_or(RevbinError::IndexOutOfRange {
            index,
            len: s.chars().count(),
        })
}

/// Scott encoding of a numeral over the binary alphabet.
pub fn bitstring_term(b: &BitString) -> Term {
    Alphabet::binary()
        .encode_string(&b.to_digits())
        .expect("digits are binary")
}

/// Inverse of [`bitstring_term`], validating the no-trailing-zero
/// invariant.
pub fn decode_bitstring(t: &Term) -> Result<BitString, RevbinError> {
    let digits = Alphabet::binary()
        .decode_string(t)
        .map_err(|_| RevbinError::TrailingZero)?;
    BitString::from_bits(digits.chars().map(|c| c == '1').collect())
}

fn v(n: &str) -> Term {
    Term::var(n)
}

/// Closed term with `succ k <n> ->det^O(log n) k <n+1>` for every closed
/// value `k`. One Scott constructor is consumed per recursive call.
pub fn succ_term() -> Term {
    let bin = Alphabet::binary();
    let app0 = bin.append_char_term('0').unwrap();
    let app1 = bin.append_char_term('1').unwrap();
    let one = bitstring_term(&BitString::from_nat(1));
    // carry-free bit: 0.s becomes 1.s
    let b0 = Term::lams(["s", "x", "k"], Term::apps(app1, [v("k"), v("s")]));
    // carry: 1.s becomes 0.(succ s)
    let b1 = Term::lams(
        ["s", "x", "k"],
        Term::apps(
            v("x"),
            [Term::abs("r", Term::apps(app0, [v("k"), v("r")])), v("s")],
        ),
    );
    // empty numeral: 0 becomes 1
    let be = Term::lams(["x", "k"], Term::app(v("k"), one));
    let aux = Term::lams(
        ["x", "k", "n"],
        Term::apps(v("n"), [b0, b1, be, v("x"), v("k")]),
    );
    Term::app(fixpoint(), aux)
}

/// Closed term with `pred k <n> ->det^O(log n) k <n-1>` for every closed
/// value `k` and n >= 1. Suppressing a rightmost zero needs one symbol of
/// lookahead, so the 1-branch inspects the tail before deciding.
pub fn pred_term() -> Term {
    let bin = Alphabet::binary();
    let app0 = bin.append_char_term('0').unwrap();
    let app1 = bin.append_char_term('1').unwrap();
    let empty = bitstring_term(&BitString::zero());
    // borrow: 0.s becomes 1.(pred s)
    let b0 = Term::lams(
        ["s", "x", "k"],
        Term::apps(
            v("x"),
            [Term::abs("r", Term::apps(app1, [v("k"), v("r")])), v("s")],
        ),
    );
    // 1.eps becomes eps, 1.b.s becomes 0.b.s: branch on the tail, which is
    // threaded again after the selectors so the non-empty cases can reuse it
    let q_nonempty = Term::lams(["t", "k", "s"], Term::apps(app0, [v("k"), v("s")]));
    let q_empty = Term::lams(["k", "s"], Term::app(v("k"), empty.clone()));
    let b1 = Term::lams(
        ["s", "x", "k"],
        Term::apps(
            v("s"),
            [q_nonempty.clone(), q_nonempty, q_empty, v("k"), v("s")],
        ),
    );
    // never reached under the n >= 1 precondition; maps 0 to 0
    let be = Term::lams(["x", "k"], Term::app(v("k"), empty));
    let aux = Term::lams(
        ["x", "k", "n"],
        Term::apps(v("n"), [b0, b1, be, v("x"), v("k")]),
    );
    Term::app(fixpoint(), aux)
}

/// Closed term with `lookup k <n> <s> ->det^O(n log n) k <s_n>` for a
/// string `s` over `alphabet`. Mirrors the recursive definition: destruct
/// the string, then either return the head or decrement the counter with
/// [`pred_term`] and recurse on the tail. An out-of-range index diverges.
pub fn lookup_term(alphabet: &Alphabet) -> Term {
    let pred = pred_term();
    // counter branches, threaded as n B0 B1 Be x k s n
    let recurse = Term::lams(
        ["t", "x", "k", "s", "n"],
        Term::apps(
            pred,
            [
                Term::abs("m", Term::apps(v("x"), [v("k"), v("m"), v("s")])),
                v("n"),
            ],
        ),
    );
    let mut string_branches = Vec::new();
    for &c in alphabet.symbols() {
        let hit = Term::lams(
            ["x", "k", "s", "n"],
            Term::app(v("k"), alphabet.encode_symbol(c).unwrap()),
        );
        string_branches.push(Term::lams(
            ["s", "x", "k", "n"],
            Term::apps(
                v("n"),
                [
                    recurse.clone(),
                    recurse.clone(),
                    hit,
                    v("x"),
                    v("k"),
                    v("s"),
                    v("n"),
                ],
            ),
        ));
    }
    // empty string: the partial function is undefined, so diverge
    string_branches.push(Term::lams(["x", "k", "n"], omega()));
    let mut body_args = string_branches;
    body_args.extend([v("x"), v("k"), v("n")]);
    let aux = Term::lams(["x", "k", "n", "i"], Term::apps(v("i"), body_args));
    Term::app(fixpoint(), aux)
}
