//! The group `2V` inside `2V-hat`: generators as fractions, membership, the
//! tree built from a word `C* {A,B}* pi*`, and the canonical `L M R` word.

use thiserror::Error;

use crate::forest::{
    normalized_forest_of_pattern, sorted_word_of_shapes, ForestError, LabeledTree, Tree,
};
use crate::fractions::{psi, FractionError, FractionPair};
use crate::pattern::{NumberedPattern, PatternError};
use crate::rect::Label;
use crate::words::{pi, Alphabet, Generator, Kind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoVError {
    #[error("`{0}` is not a letter of the `2v` alphabet")]
    WrongAlphabet(Generator),
    #[error("word is not of the form C* {{A,B}}* pi*: {0}")]
    NotLForm(String),
    #[error("element does not lie in 2V")]
    NotInTwoV,
    #[error(transparent)]
    Fraction(#[from] FractionError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

fn vh(kind: Kind, i: u32) -> Generator {
    Generator::new(kind, i)
}

fn v0_power(n: u32) -> Vec<Generator> {
    vec![vh(Kind::V, 0); n as usize]
}

/// The fraction pair of a positive `2v` generator:
/// `A_i = (v0^{i+1} v1, v0^{i+2})`, `B_i = (v0^{i+1} h1, v0^{i+2})`,
/// `C_i = (v0^i h0, v0^{i+1})`, `pi_i = (v0^{i+2} s1, v0^{i+2})`,
/// `pibar_i = (v0^{i+1} s0, v0^{i+1})`.
pub fn generator_words(kind: Kind, i: u32) -> Result<(Word, Word), TwoVError> {
    let (mut range, domain) = match kind {
        Kind::A | Kind::B | Kind::Pi => (v0_power(i + 2), v0_power(i + 2)),
        Kind::C | Kind::PiBar => (v0_power(i + 1), v0_power(i + 1)),
        _ => return Err(TwoVError::WrongAlphabet(Generator::new(kind, i))),
    };
    match kind {
        Kind::A => *range.last_mut().expect("nonempty") = vh(Kind::V, 1),
        Kind::B => *range.last_mut().expect("nonempty") = vh(Kind::H, 1),
        Kind::C => *range.last_mut().expect("nonempty") = vh(Kind::H, 0),
        Kind::Pi => range.push(vh(Kind::Sigma, 1)),
        Kind::PiBar => range.push(vh(Kind::Sigma, 0)),
        _ => unreachable!(),
    }
    Ok((
        Word::from_letters(Alphabet::Pi, range),
        Word::from_letters(Alphabet::Pi, domain),
    ))
}

pub fn generator_pair(g: Generator) -> Result<FractionPair, TwoVError> {
    if g.alphabet() != Alphabet::TwoV {
        return Err(TwoVError::WrongAlphabet(g));
    }
    let (r, d) = generator_words(g.kind, g.index)?;
    let f = FractionPair::new(NumberedPattern::of_word(&r)?, NumberedPattern::of_word(&d)?);
    Ok(if g.is_positive() { f } else { f.invert() })
}

/// Evaluates a group word over the `2v` alphabet in `2V-hat`.
pub fn eval_word(word: &Word) -> Result<FractionPair, TwoVError> {
    let mut acc = FractionPair::identity();
    for &g in &word.letters {
        acc = acc.compose(&generator_pair(g)?)?;
    }
    Ok(acc)
}

/// Whether the element fixes every square other than `S_0` pointwise.
pub fn in_two_v(f: &FractionPair) -> bool {
    if f.range.tail_offset() != f.domain.tail_offset() {
        return false;
    }
    let n = f.range.explicit_count().max(f.domain.explicit_count());
    let range = f.range.rect_table(n);
    let domain = f.domain.rect_table(n);
    (0..n as usize).all(|i| domain[i].square == 0 || domain[i] == range[i])
}

/// The result of building the tree of a word `C* {A,B}* pi*` letter by
/// letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LTree {
    /// `v`/`h` word whose tree is the primary tree of the `C`, `A`, `B` part.
    pub t: Word,
    /// Length of `t`.
    pub k: u32,
    /// Carets on the trunk predicted from the subscripts.
    pub trunk: u32,
    /// Padding `r` and transpositions so that the whole word equals
    /// `(t v0^r s, v0^(k+r))`.
    pub pad: u32,
    pub sigmas: Word,
}

impl LTree {
    pub fn range_word(&self) -> Word {
        let mut letters = self.t.letters.clone();
        letters.extend(v0_power(self.pad));
        letters.extend_from_slice(&self.sigmas.letters);
        Word::from_letters(Alphabet::Pi, letters)
    }

    pub fn domain_word(&self) -> Word {
        Word::from_letters(Alphabet::Pi, v0_power(self.k + self.pad))
    }

    pub fn pair(&self) -> Result<FractionPair, TwoVError> {
        Ok(FractionPair::new(
            NumberedPattern::of_word(&self.range_word())?,
            NumberedPattern::of_word(&self.domain_word())?,
        ))
    }

    pub fn tree(&self) -> Result<LabeledTree, TwoVError> {
        let f = crate::forest::NumberedForest::of_word(&self.t)?;
        Ok(f.tree(0).shape())
    }
}

/// Trunk length from the subscripts: the largest of `i_j + n + 2 - j` over
/// the positions `j` of `A`/`B` letters and `i_n + 1`, where `n` is the
/// position of the last `C` (`-1` if none).
pub fn trunk_length(word: &Word) -> u32 {
    let cs: Vec<u32> = word
        .letters
        .iter()
        .filter(|g| g.kind == Kind::C)
        .map(|g| g.index)
        .collect();
    let n = cs.len() as i64 - 1;
    let mut m: i64 = cs.last().map_or(0, |&i| i as i64 + 1);
    for (j, g) in word.letters.iter().enumerate() {
        if matches!(g.kind, Kind::A | Kind::B) {
            m = m.max(g.index as i64 + n + 2 - j as i64);
        }
    }
    m.max(0) as u32
}

/// Builds `t`, `k` and the trailing transpositions of a word in the form
/// `C_{i_0} .. C_{i_n} w(A, B) w(pi)` with increasing `C` subscripts.
pub fn tree_from_l(word: &Word) -> Result<LTree, TwoVError> {
    let mut t: Vec<Generator> = Vec::new();
    let mut k: u32 = 0;
    let mut phase = 0;
    let mut last_c: Option<u32> = None;
    let mut pis = Vec::new();
    for (pos, &g) in word.letters.iter().enumerate() {
        if !g.is_positive() || g.alphabet() != Alphabet::TwoV {
            return Err(TwoVError::NotLForm(format!("letter {pos} is `{g}`")));
        }
        let order = match g.kind {
            Kind::C => 0,
            Kind::A | Kind::B => 1,
            Kind::Pi => 2,
            _ => return Err(TwoVError::NotLForm(format!("letter {pos} is `{g}`"))),
        };
        if order < phase {
            return Err(TwoVError::NotLForm(format!(
                "letter {pos} `{g}` is out of order"
            )));
        }
        phase = order;
        let i = g.index;
        match g.kind {
            Kind::C => {
                if last_c.is_some_and(|c| c >= i) {
                    return Err(TwoVError::NotLForm("C subscripts must increase".into()));
                }
                t.extend(v0_power(i - k));
                t.push(vh(Kind::H, 0));
                k = i + 1;
                last_c = Some(i);
            }
            Kind::A | Kind::B => {
                let x = if g.kind == Kind::A { Kind::V } else { Kind::H };
                if k <= i + 1 {
                    t.extend(v0_power(i + 1 - k));
                    t.push(vh(x, 1));
                    k = i + 2;
                } else {
                    t.push(vh(x, k - i));
                    k += 1;
                }
            }
            _ => pis.push(i),
        }
    }
    let pad = pis
        .iter()
        .map(|&i| (i + 2).saturating_sub(k))
        .max()
        .unwrap_or(0);
    let top = (k + pad).saturating_sub(1);
    let sigmas = pis.iter().map(|&i| vh(Kind::Sigma, top - i)).collect();
    Ok(LTree {
        t: Word::from_letters(Alphabet::Pi, t),
        k,
        trunk: trunk_length(word),
        pad,
        sigmas: Word::from_letters(Alphabet::Pi, sigmas),
    })
}

/// Trunk carets of a tree from the root down (following left children):
/// labels and the subtrees hanging on their right children.
fn trunk_of(tree: &LabeledTree) -> Vec<(Label, LabeledTree)> {
    let mut out = Vec::new();
    let mut cur = tree;
    while let Tree::Node { label, left, right } = cur {
        out.push((*label, (**right).clone()));
        cur = left;
    }
    out
}

fn from_trunk(trunk: &[(Label, LabeledTree)]) -> LabeledTree {
    trunk
        .iter()
        .rev()
        .fold(Tree::Leaf(()), |acc, (label, right)| {
            Tree::node(*label, acc, right.clone())
        })
}

/// Removes bottom trunk carets labeled `v` with nothing attached.
pub fn primary_tree(tree: &LabeledTree) -> LabeledTree {
    let mut trunk = trunk_of(tree);
    while let Some((Label::V, Tree::Leaf(()))) = trunk.last() {
        trunk.pop();
    }
    from_trunk(&trunk)
}

/// A word `C* w(A, B)` whose tree is `tree`, when `tree` is primary:
/// `C_i` for each trunk caret `i` labeled `h`, then the sorted word of the
/// mirrored attached forest with `v`, `h` read as `A`, `B`.
pub fn l_from_tree(tree: &LabeledTree) -> Word {
    let trunk = trunk_of(tree);
    let mut letters: Vec<Generator> = trunk
        .iter()
        .enumerate()
        .filter(|(_, (label, _))| *label == Label::H)
        .map(|(i, _)| Generator::new(Kind::C, i as u32))
        .collect();
    let forest: Vec<LabeledTree> = trunk.iter().map(|(_, f)| f.mirror()).collect();
    for g in sorted_word_of_shapes(&forest).letters {
        let kind = if g.kind == Kind::V { Kind::A } else { Kind::B };
        letters.push(Generator::new(kind, g.index));
    }
    Word::from_letters(Alphabet::TwoV, letters)
}

/// The canonical word of an element of `2V` as `L M R`: `L` and `R^-1` are
/// words `C* w(A, B)` for the primary trees of the normalized range and
/// domain trees of the canonical pair, and `M` is a word in
/// `pi_0 .. pi_{p-2}, pibar_{p-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTwoVWord {
    pub l: Word,
    pub m: Word,
    pub r: Word,
}

impl CanonicalTwoVWord {
    pub fn to_word(&self) -> Word {
        self.l.concat(&self.m).concat(&self.r)
    }
}

pub fn canonical_form(f: &FractionPair) -> Result<CanonicalTwoVWord, TwoVError> {
    if !in_two_v(f) {
        return Err(TwoVError::NotInTwoV);
    }
    let c = f.canonical()?;
    let n = c.domain.square(0).len() as u32;
    let empty = Word::empty(Alphabet::TwoV);
    if n == 1 {
        return Ok(CanonicalTwoVWord {
            l: empty.clone(),
            m: empty.clone(),
            r: empty,
        });
    }
    let lmr = c.lmr_form()?;
    let range_tree = normalized_forest_of_pattern(&c.range)?.tree(0).shape();
    let domain_tree = normalized_forest_of_pattern(&c.domain)?.tree(0).shape();
    Ok(CanonicalTwoVWord {
        l: l_from_tree(&primary_tree(&range_tree)),
        m: psi(&lmr.u, n - 1)?,
        r: l_from_tree(&primary_tree(&domain_tree)).inverse(),
    })
}

pub fn canonical_word(word: &Word) -> Result<Word, TwoVError> {
    Ok(canonical_form(&eval_word(word)?)?.to_word())
}

/// Decides whether a word over the `2v` alphabet is the identity.
pub fn word_problem(word: &Word) -> Result<bool, TwoVError> {
    Ok(canonical_word(word)?.is_empty())
}

/// The element `v0^p s_{p-1-i} v0^-p` that `pi_i` (or `pibar_{p-1}`) should
/// equal.
pub fn conjugated_transposition(k: u32, p: u32) -> Result<FractionPair, TwoVError> {
    let v0p = "v0 ".repeat(p as usize);
    Ok(FractionPair::of_word(&pi(&format!(
        "{v0p} s{k} {}",
        "v0^-1 ".repeat(p as usize)
    )))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tv;

    fn ev(w: &str) -> FractionPair {
        eval_word(&tv(w)).unwrap()
    }

    #[test]
    fn generators_lie_in_2v() {
        for w in ["A0", "B2", "C1", "p0", "P3", "A1^-1 C0"] {
            assert!(in_two_v(&ev(w)), "{w}");
        }
        assert!(!in_two_v(&FractionPair::of_word(&pi("v0")).unwrap()));
        assert!(!in_two_v(&FractionPair::of_word(&pi("s0")).unwrap()));
    }

    #[test]
    fn builder_matches_evaluation() {
        for w in ["A0", "C0 A1 B0", "C1 C3 A0 B4 A2", "B2 A0 p1 p3", "C0 p0"] {
            let built = tree_from_l(&tv(w)).unwrap();
            assert!(built.pair().unwrap().equals(&ev(w)).unwrap(), "{w}");
        }
        assert!(tree_from_l(&tv("A0 C1")).is_err());
        assert!(tree_from_l(&tv("C2 C1")).is_err());
    }

    #[test]
    fn trunk_formula_on_small_words() {
        assert_eq!(trunk_length(&tv("A0")), 1);
        assert_eq!(trunk_length(&tv("C0 C2")), 3);
        assert_eq!(trunk_length(&tv("C0 A3")), 4);
    }

    #[test]
    fn l_from_tree_inverts_builder() {
        for w in ["A0", "C0 A1 B0", "C1 C3 A0 B4 A2", "B2 A0", "C0"] {
            let built = tree_from_l(&tv(w)).unwrap();
            let tree = built.tree().unwrap();
            let back = l_from_tree(&primary_tree(&tree));
            assert!(
                eval_word(&back).unwrap().equals(&ev(w)).unwrap(),
                "{w} -> {back}"
            );
        }
    }

    #[test]
    fn canonical_words_decide_equality() {
        assert!(word_problem(&tv("A0 A0^-1")).unwrap());
        assert!(word_problem(&tv("C0 A0 p1 C2^-1 B0^-1")).unwrap());
        assert!(!word_problem(&tv("A0")).unwrap());
        let a = canonical_word(&tv("p0 A0")).unwrap();
        let b = canonical_word(&tv("A1 p0 p1")).unwrap();
        assert_eq!(a, b);
        assert!(eval_word(&a).unwrap().equals(&ev("p0 A0")).unwrap());
    }

    #[test]
    fn translation_of_transpositions() {
        for p in 2..5 {
            for i in 0..p - 1 {
                let lhs = ev(&format!("p{i}"));
                assert!(lhs
                    .equals(&conjugated_transposition(p - 1 - i, p).unwrap())
                    .unwrap());
            }
            let bar = ev(&format!("P{}", p - 1));
            assert!(bar
                .equals(&conjugated_transposition(0, p).unwrap())
                .unwrap());
        }
    }
}
