//! Generators and words over the two alphabets.
//!
//! The `pi` alphabet has `v_i`, `h_i` and `s_i` (the transposition of `i`
//! and `i+1`). The `2v` alphabet has `A_i`, `B_i`, `C_i`, `p_i` and `P_i`
//! (the last two are `pi_i` and `pibar_i`).
//!
//! Text form: letters separated by whitespace, each a kind character, a
//! decimal index and an optional `^-1`. The empty word prints as `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    #[serde(rename = "pi")]
    Pi,
    #[serde(rename = "2v")]
    TwoV,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::Pi => "pi",
            Alphabet::TwoV => "2v",
        })
    }
}

impl FromStr for Alphabet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pi" => Ok(Alphabet::Pi),
            "2v" => Ok(Alphabet::TwoV),
            _ => Err(ParseError::new(s, 0, "unknown alphabet")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    V,
    H,
    Sigma,
    A,
    B,
    C,
    Pi,
    PiBar,
}

impl Kind {
    pub fn alphabet(self) -> Alphabet {
        match self {
            Kind::V | Kind::H | Kind::Sigma => Alphabet::Pi,
            _ => Alphabet::TwoV,
        }
    }

    /// Involutive generators are always stored with positive sign.
    pub fn is_involution(self) -> bool {
        matches!(self, Kind::Sigma | Kind::Pi | Kind::PiBar)
    }

    pub fn symbol(self) -> char {
        match self {
            Kind::V => 'v',
            Kind::H => 'h',
            Kind::Sigma => 's',
            Kind::A => 'A',
            Kind::B => 'B',
            Kind::C => 'C',
            Kind::Pi => 'p',
            Kind::PiBar => 'P',
        }
    }

    pub fn from_symbol(c: char) -> Option<Kind> {
        Some(match c {
            'v' => Kind::V,
            'h' => Kind::H,
            's' => Kind::Sigma,
            'A' => Kind::A,
            'B' => Kind::B,
            'C' => Kind::C,
            'p' => Kind::Pi,
            'P' => Kind::PiBar,
            _ => return None,
        })
    }

    fn json_name(self) -> &'static str {
        match self {
            Kind::V => "v",
            Kind::H => "h",
            Kind::Sigma => "s",
            Kind::A => "A",
            Kind::B => "B",
            Kind::C => "C",
            Kind::Pi => "p",
            Kind::PiBar => "P",
        }
    }
}

impl Serialize for Kind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.json_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: Kind,
    pub index: u32,
    pub sign: Sign,
}

impl Generator {
    pub fn new(kind: Kind, index: u32) -> Self {
        Generator {
            kind,
            index,
            sign: Sign::Positive,
        }
    }

    pub fn inverse_of(kind: Kind, index: u32) -> Self {
        Generator::new(kind, index).inverse()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.kind.alphabet()
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }

    pub fn inverse(self) -> Self {
        if self.kind.is_involution() {
            self
        } else {
            Generator {
                sign: self.sign.flip(),
                ..self
            }
        }
    }

    pub fn with_index(self, index: u32) -> Self {
        Generator { index, ..self }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)?;
        if self.sign == Sign::Negative {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{token}` at byte {position}: {reason}")]
pub struct ParseError {
    pub token: String,
    pub position: usize,
    pub reason: String,
}

impl ParseError {
    pub fn new(token: &str, position: usize, reason: &str) -> Self {
        ParseError {
            token: token.to_string(),
            position,
            reason: reason.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub alphabet: Alphabet,
    pub letters: Vec<Generator>,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(alphabet: Alphabet, letters: Vec<Generator>) -> Self {
        debug_assert!(letters.iter().all(|g| g.alphabet() == alphabet));
        Word { alphabet, letters }
    }

    /// Parses the text form; see the module docs.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word, ParseError> {
        parse_word(text, alphabet)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(Generator::is_positive)
    }

    pub fn push(&mut self, g: Generator) {
        debug_assert_eq!(g.alphabet(), self.alphabet);
        self.letters.push(g);
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.alphabet, other.alphabet);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// Cancels adjacent `g g^-1` pairs, including `s_i s_i` style squares of
    /// involutions.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Generator> = Vec::with_capacity(self.letters.len());
        for &g in &self.letters {
            if out.last().is_some_and(|&last| last == g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word {
            alphabet: self.alphabet,
            letters: out,
        }
    }

    pub fn max_index(&self) -> Option<u32> {
        self.letters.iter().map(|g| g.index).max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WordJson::from(self)).expect("word serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Word, ParseError> {
        let json: WordJson = serde_json::from_value(value.clone())
            .map_err(|e| ParseError::new(&value.to_string(), 0, &e.to_string()))?;
        Word::try_from(json)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn parse_word(text: &str, alphabet: Alphabet) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    let trimmed = text.trim();
    if trimmed == "1" || trimmed.is_empty() {
        return Ok(Word::empty(alphabet));
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        if bytes[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let token = &text[start..pos];
        letters.push(parse_letter(token, start, alphabet)?);
    }
    Ok(Word { alphabet, letters })
}

fn parse_letter(token: &str, position: usize, alphabet: Alphabet) -> Result<Generator, ParseError> {
    let mut chars = token.chars();
    let head = chars.next().expect("token is non-empty");
    let kind = Kind::from_symbol(head)
        .ok_or_else(|| ParseError::new(token, position, "unknown generator symbol"))?;
    if kind.alphabet() != alphabet {
        return Err(ParseError::new(
            token,
            position,
            &format!(
                "mixed alphabets: letter belongs to `{}`, word is `{alphabet}`",
                kind.alphabet()
            ),
        ));
    }
    let rest = chars.as_str();
    let (digits, exponent) = match rest.find('^') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(token, position, "expected a decimal index"));
    }
    let index: u32 = digits
        .parse()
        .map_err(|_| ParseError::new(token, position, "index out of range"))?;
    let sign = match exponent {
        None | Some("1") => Sign::Positive,
        Some("-1") => Sign::Negative,
        Some(_) => return Err(ParseError::new(token, position, "exponent must be 1 or -1")),
    };
    Ok(Generator {
        kind,
        index,
        sign: if kind.is_involution() {
            Sign::Positive
        } else {
            sign
        },
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LetterJson {
    pub kind: String,
    pub index: u32,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordJson {
    pub alphabet: Alphabet,
    pub letters: Vec<LetterJson>,
}

impl From<&Word> for WordJson {
    fn from(w: &Word) -> Self {
        WordJson {
            alphabet: w.alphabet,
            letters: w
                .letters
                .iter()
                .map(|g| LetterJson {
                    kind: g.kind.json_name().to_string(),
                    index: g.index,
                    sign: if g.is_positive() { 1 } else { -1 },
                })
                .collect(),
        }
    }
}

impl TryFrom<WordJson> for Word {
    type Error = ParseError;

    fn try_from(json: WordJson) -> Result<Self, Self::Error> {
        let mut letters = Vec::with_capacity(json.letters.len());
        for (i, l) in json.letters.iter().enumerate() {
            let mut chars = l.kind.chars();
            let kind = match (chars.next(), chars.next()) {
                (Some(c), None) => Kind::from_symbol(c),
                _ => None,
            }
            .ok_or_else(|| ParseError::new(&l.kind, i, "unknown generator kind"))?;
            if kind.alphabet() != json.alphabet {
                return Err(ParseError::new(&l.kind, i, "mixed alphabets"));
            }
            let sign = match l.sign {
                1 => Sign::Positive,
                -1 if !kind.is_involution() => Sign::Negative,
                -1 => Sign::Positive,
                _ => return Err(ParseError::new(&l.kind, i, "sign must be 1 or -1")),
            };
            letters.push(Generator {
                kind,
                index: l.index,
                sign,
            });
        }
        Ok(Word {
            alphabet: json.alphabet,
            letters,
        })
    }
}

/// Shorthand used throughout the crate and tests. Panics on malformed input.
pub fn pi(text: &str) -> Word {
    parse_word(text, Alphabet::Pi).unwrap_or_else(|e| panic!("{e}"))
}

/// Shorthand for a `2v` word. Panics on malformed input.
pub fn tv(text: &str) -> Word {
    parse_word(text, Alphabet::TwoV).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let w = pi("v0 h3 s1 v2^-1");
        assert_eq!(w.to_string(), "v0 h3 s1 v2^-1");
        assert_eq!(w.len(), 4);
        assert_eq!(pi("1"), Word::empty(Alphabet::Pi));
        assert_eq!(Word::empty(Alphabet::TwoV).to_string(), "1");
    }

    #[test]
    fn involution_signs_are_normalized() {
        assert_eq!(pi("s2^-1"), pi("s2"));
        assert_eq!(tv("p0^-1 P1^-1"), tv("p0 P1"));
    }

    #[test]
    fn mixed_alphabets_are_rejected() {
        let err = parse_word("v0 A1", Alphabet::Pi).unwrap_err();
        assert!(err.reason.contains("mixed alphabets"));
        assert_eq!(err.position, 3);
        assert!(parse_word("x0", Alphabet::Pi).is_err());
        assert!(parse_word("v", Alphabet::Pi).is_err());
        assert!(parse_word("v1^2", Alphabet::Pi).is_err());
    }

    #[test]
    fn free_reduction_cancels_pairs() {
        assert_eq!(pi("v0 v1 v1^-1 v0^-1 h2").free_reduce(), pi("h2"));
        assert_eq!(pi("s1 s1").free_reduce(), pi("1"));
        assert_eq!(tv("A0 A0^-1 C1").free_reduce(), tv("C1"));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(tv("A0 B1^-1 p2").inverse(), tv("p2 B1 A0^-1"));
    }

    #[test]
    fn json_round_trip() {
        let w = tv("C0 A1^-1 P2");
        let j = w.to_json();
        assert_eq!(j["alphabet"], "2v");
        assert_eq!(j["letters"][1]["sign"], -1);
        assert_eq!(Word::from_json(&j).unwrap(), w);
    }
}
