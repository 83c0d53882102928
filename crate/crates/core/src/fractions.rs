//! The group `2V-hat` of right fractions of `Pi`.
//!
//! A pair `(P, Q)` stands for `P Q^-1`: the map sending the rectangle of `Q`
//! numbered `i` affinely onto the rectangle of `P` numbered `i`. Pairs
//! `(P, Q)` and `(P M, Q M)` are the same element.

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::forest::{normalized_forest_of_pattern, sorted_word_of_shapes, ForestError, Tree};
use crate::pattern::{NumberedPattern, NumberedRect, PatternError};
use crate::pi_monoid::sigma_word_between;
use crate::rect::{DyadicRect, Label};
use crate::words::{Alphabet, Generator, Kind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error("`{0}` is not a letter of the `pi` alphabet")]
    WrongAlphabet(Generator),
    #[error("letter `{letter}` is not in the domain of the translation for p = {p}")]
    OutsideTranslation { letter: Generator, p: u32 },
    #[error("malformed fraction: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FractionPair {
    pub range: NumberedPattern,
    pub domain: NumberedPattern,
}

impl FractionPair {
    pub fn identity() -> Self {
        FractionPair {
            range: NumberedPattern::trivial(),
            domain: NumberedPattern::trivial(),
        }
    }

    pub fn new(range: NumberedPattern, domain: NumberedPattern) -> Self {
        FractionPair { range, domain }
    }

    /// The element `P` of `Pi` as the fraction `(P, 1)`.
    pub fn from_pi(p: NumberedPattern) -> Self {
        FractionPair {
            range: p,
            domain: NumberedPattern::trivial(),
        }
    }

    /// The fraction of a single `pi` letter, possibly inverted.
    pub fn of_letter(g: Generator) -> Result<Self, FractionError> {
        if g.alphabet() != Alphabet::Pi {
            return Err(FractionError::WrongAlphabet(g));
        }
        let p = NumberedPattern::trivial().apply(Generator {
            sign: crate::words::Sign::Positive,
            ..g
        })?;
        let f = FractionPair::from_pi(p);
        Ok(if g.is_positive() { f } else { f.invert() })
    }

    /// Evaluates a group word over the `pi` alphabet.
    pub fn of_word(word: &Word) -> Result<Self, FractionError> {
        word.letters
            .iter()
            .try_fold(FractionPair::identity(), |acc, &g| {
                acc.compose(&FractionPair::of_letter(g)?)
            })
    }

    /// The product `self * other`: apply `other` first.
    pub fn compose(&self, other: &FractionPair) -> Result<Self, FractionError> {
        let tiling = self.domain.superpose(&other.range);
        let common = self.domain.refine_numbering(&tiling);
        let m = self.domain.quotient(&common)?;
        let m2 = other.range.quotient(&common)?;
        Ok(FractionPair {
            range: self.range.multiply(&m)?,
            domain: other.domain.multiply(&m2)?,
        })
    }

    pub fn invert(&self) -> Self {
        FractionPair {
            range: self.domain.clone(),
            domain: self.range.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.range == self.domain
    }

    /// Whether both pairs are the same map. On each overlap of a domain tile
    /// of `self` with one of `other` both maps are affine, so it suffices
    /// that they send the overlap to the same rectangle. Past the explicit
    /// squares both maps are translations by whole squares.
    pub fn equals(&self, other: &FractionPair) -> Result<bool, FractionError> {
        let shift =
            |f: &FractionPair| i64::from(f.domain.tail_offset()) - i64::from(f.range.tail_offset());
        if shift(self) != shift(other) {
            return Ok(false);
        }
        let reach = |f: &FractionPair| {
            let range_end = i64::from(f.range.tail_start()) - shift(f);
            f.domain.tail_start().max(range_end.max(0) as u32)
        };
        let squares = reach(self).max(reach(other));
        let r1 = self.range.rect_table(squares + self.domain.tail_offset());
        let r2 = other.range.rect_table(squares + other.domain.tail_offset());
        for s in 0..squares {
            let (a, b) = (self.domain.square(s), other.domain.square(s));
            for x in &a {
                for y in &b {
                    let Some(z) = x.rect.intersect(&y.rect) else {
                        continue;
                    };
                    let p = r1[x.number as usize].place(&z.relative_to(&x.rect));
                    let q = r2[y.number as usize].place(&z.relative_to(&y.rect));
                    if p.ok_or(PatternError::Overflow)? != q.ok_or(PatternError::Overflow)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Repeatedly merges two numbers whose rectangles are the two halves of
    /// a common parent, cut the same way and in the same order, in both
    /// patterns.
    pub fn reduce(&self) -> Self {
        let mut f = self.clone();
        while let Some(next) = f.reduce_once() {
            f = next;
        }
        f
    }

    fn reduce_once(&self) -> Option<Self> {
        let squares = self.range.tail_start().max(self.domain.tail_start());
        let n = self
            .range
            .explicit_count()
            .max(self.domain.explicit_count());
        let upto = squares.max(n);
        let range = self.range.rect_table(upto + self.range.tail_offset());
        let domain = self.domain.rect_table(upto + self.domain.tail_offset());
        for a in 0..n as usize {
            for b in 0..n as usize {
                if a == b {
                    continue;
                }
                let (Some((rp, rl)), Some((dp, dl))) = (
                    range[a].merge_with(&range[b]),
                    domain[a].merge_with(&domain[b]),
                ) else {
                    continue;
                };
                if rl != dl {
                    continue;
                }
                let (hi, lo) = (a.max(b) as u32, a.min(b) as u32);
                let merge = |table: &[DyadicRect], parent: DyadicRect, offset: u32| {
                    let rects = table
                        .iter()
                        .enumerate()
                        .map(|(i, r)| (i as u32, *r))
                        .filter(|&(i, _)| i != hi && i != lo)
                        .map(|(i, rect)| NumberedRect {
                            rect,
                            number: if i > hi { i - 1 } else { i },
                        })
                        .chain(std::iter::once(NumberedRect {
                            rect: parent,
                            number: lo,
                        }))
                        .collect();
                    NumberedPattern::assemble(rects, offset - 1)
                };
                return Some(FractionPair {
                    range: merge(&range, rp, self.range.tail_offset()),
                    domain: merge(&domain, dp, self.domain.tail_offset()),
                });
            }
        }
        None
    }

    /// `(s, u, t)` with `self == s u t^-1`: `s`, `t` sorted `v`/`h` words of
    /// the normalized forests of the two patterns and `u` a word in
    /// transpositions.
    pub fn lmr_form(&self) -> Result<LmrForm, FractionError> {
        let s = sorted_word_of_shapes(&normalized_forest_of_pattern(&self.range)?.shape());
        let t = sorted_word_of_shapes(&normalized_forest_of_pattern(&self.domain)?.shape());
        let sp = NumberedPattern::of_word(&s)?;
        let tp = NumberedPattern::of_word(&t)?;
        let to_t = sigma_word_between(&self.domain, &tp).expect("same tiling");
        let moved = self.range.multiply(&NumberedPattern::of_word(&to_t)?)?;
        let u = sigma_word_between(&sp, &moved).expect("same tiling");
        Ok(LmrForm { s, u, t })
    }

    /// The canonical representative of the element; see [`canonical_pair`].
    pub fn canonical(&self) -> Result<Self, FractionError> {
        canonical_pair(self)
    }

    /// The canonical word `s u t^-1` of the element.
    pub fn canonical_word(&self) -> Result<Word, FractionError> {
        let lmr = self.canonical()?.lmr_form()?;
        Ok(lmr.s.concat(&lmr.u).concat(&lmr.t.inverse()))
    }

    pub fn to_json(&self) -> Value {
        json!({ "range": self.range.to_json(), "domain": self.domain.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self, FractionError> {
        let range = value
            .get("range")
            .ok_or_else(|| FractionError::Malformed("missing `range`".into()))?;
        let domain = value
            .get("domain")
            .ok_or_else(|| FractionError::Malformed("missing `domain`".into()))?;
        Ok(FractionPair {
            range: NumberedPattern::from_json(range)?,
            domain: NumberedPattern::from_json(domain)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmrForm {
    pub s: Word,
    pub u: Word,
    pub t: Word,
}

impl LmrForm {
    pub fn to_word(&self) -> Word {
        self.s.concat(&self.u).concat(&self.t.inverse())
    }
}

/// A representative that depends only on the element.
///
/// In each square the domain tiling is the one with fewest tiles among the
/// dyadic tilings on whose tiles the map is affine with dyadic image; ties
/// are broken top-down, preferring a vertical cut whenever it is no worse.
/// Domain tiles are numbered in the leaf order of the normalized forest of
/// the domain tiling and the range is the image numbered alike.
pub fn canonical_pair(f: &FractionPair) -> Result<FractionPair, FractionError> {
    let f = f.reduce();
    let (p, q) = (&f.range, &f.domain);
    let mut tiles: Vec<(DyadicRect, DyadicRect)> = Vec::new();
    for s in 0..q.tail_start() {
        let pieces: Vec<(DyadicRect, DyadicRect)> = q
            .square(s)
            .iter()
            .map(|r| (r.rect, p.rect_of(r.number)))
            .collect();
        let mut search = TilingSearch::new(&pieces);
        search.build(DyadicRect::unit(s), &mut tiles);
    }
    let squares = q.tail_start();
    let count = tiles.len() as u32;
    let offset = count - squares;
    let mut domain_rects: Vec<NumberedRect> = tiles
        .iter()
        .map(|t| NumberedRect {
            rect: t.0,
            number: 0,
        })
        .collect();
    let domain_order = standard_order(&domain_rects, squares)?;
    let mut range_rects = Vec::with_capacity(tiles.len());
    for (number, &i) in domain_order.iter().enumerate() {
        domain_rects[i].number = number as u32;
        range_rects.push(NumberedRect {
            rect: tiles[i].1,
            number: number as u32,
        });
    }
    for j in q.explicit_count()..p.explicit_count().max(q.explicit_count()) {
        range_rects.push(NumberedRect {
            rect: p.rect_of(j),
            number: j - q.tail_offset() + offset,
        });
    }
    let domain = NumberedPattern::from_rects(domain_rects, offset)?;
    let range_offset = offset + p.tail_offset() - q.tail_offset();
    let range = NumberedPattern::from_rects(range_rects, range_offset)?;
    Ok(FractionPair { range, domain })
}

/// Indices of `rects` in the leaf order of the normalized forest of their
/// tiling (squares `0..squares`).
fn standard_order(rects: &[NumberedRect], squares: u32) -> Result<Vec<usize>, FractionError> {
    let numbered: Vec<NumberedRect> = rects
        .iter()
        .enumerate()
        .map(|(i, r)| NumberedRect {
            rect: r.rect,
            number: i as u32,
        })
        .collect();
    let offset = rects.len() as u32 - squares;
    let pattern = NumberedPattern::from_rects(numbered, offset)?;
    let forest = normalized_forest_of_pattern(&pattern)?;
    let mut order = Vec::with_capacity(rects.len());
    for t in forest.trees() {
        order.extend(t.leaves().into_iter().map(|n| n as usize));
    }
    for s in forest.trees().len() as u32..squares {
        order.push(match forest.tree(s) {
            Tree::Leaf(n) => n as usize,
            Tree::Node { .. } => unreachable!("trailing trees are leaves"),
        });
    }
    Ok(order)
}

#[derive(Clone, Copy)]
enum Cost {
    Exact(u32),
    AtLeast(u32),
}

/// Memoized search for the fewest affine tiles covering a rectangle.
struct TilingSearch<'a> {
    pieces: &'a [(DyadicRect, DyadicRect)],
    affine: HashMap<DyadicRect, Option<DyadicRect>>,
    cost: HashMap<DyadicRect, Cost>,
}

impl<'a> TilingSearch<'a> {
    fn new(pieces: &'a [(DyadicRect, DyadicRect)]) -> Self {
        TilingSearch {
            pieces,
            affine: HashMap::new(),
            cost: HashMap::new(),
        }
    }

    /// The image of `d` if the map is affine on `d` with dyadic image.
    fn affine_image(&mut self, d: DyadicRect) -> Option<DyadicRect> {
        if let Some(&hit) = self.affine.get(&d) {
            return hit;
        }
        let mut outer: Option<DyadicRect> = None;
        let mut ok = true;
        for (q, p) in self.pieces {
            let Some(piece) = q.intersect(&d) else {
                continue;
            };
            let Some(image) = p.place(&piece.relative_to(q)) else {
                ok = false;
                break;
            };
            let rel = piece.relative_to(&d);
            match outer {
                None => match DyadicRect::solve_outer(&image, &rel) {
                    Some(r) => outer = Some(r),
                    None => {
                        ok = false;
                        break;
                    }
                },
                Some(r) => {
                    if r.place(&rel) != Some(image) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        let result = if ok { outer } else { None };
        self.affine.insert(d, result);
        result
    }

    fn upper_bound(&self, d: DyadicRect) -> u32 {
        self.pieces.iter().filter(|(q, _)| q.overlaps(&d)).count() as u32
    }

    fn min_tiles(&mut self, d: DyadicRect, budget: u32) -> Option<u32> {
        if budget == 0 {
            return None;
        }
        if self.affine_image(d).is_some() {
            return Some(1);
        }
        match self.cost.get(&d) {
            Some(Cost::Exact(c)) => return (*c <= budget).then_some(*c),
            Some(Cost::AtLeast(c)) if *c > budget => return None,
            _ => {}
        }
        let mut best = None;
        let mut limit = budget;
        for label in [Label::V, Label::H] {
            if limit < 2 {
                break;
            }
            let Some((a, b)) = d.halves(label) else {
                continue;
            };
            if let Some(ca) = self.min_tiles(a, limit - 1) {
                if let Some(cb) = self.min_tiles(b, limit - ca) {
                    best = Some(ca + cb);
                    limit = ca + cb - 1;
                }
            }
        }
        let entry = match best {
            Some(c) => Cost::Exact(c),
            None => Cost::AtLeast(budget + 1),
        };
        self.cost.insert(d, entry);
        best
    }

    fn exact(&mut self, d: DyadicRect) -> u32 {
        let ub = self.upper_bound(d).max(1);
        self.min_tiles(d, ub)
            .expect("the pieces themselves are affine tiles")
    }

    fn build(&mut self, d: DyadicRect, out: &mut Vec<(DyadicRect, DyadicRect)>) {
        if let Some(image) = self.affine_image(d) {
            out.push((d, image));
            return;
        }
        let (l, r) = d.halves(Label::V).expect("pieces bound the depth");
        let (b, t) = d.halves(Label::H).expect("pieces bound the depth");
        let cost_v = self.exact(l) + self.exact(r);
        let cost_h = self.exact(b) + self.exact(t);
        if cost_v <= cost_h {
            self.build(l, out);
            self.build(r, out);
        } else {
            self.build(b, out);
            self.build(t, out);
        }
    }
}

/// The translation from words in transpositions `s_0 .. s_{p-1}` to words
/// in `pi_0 .. pi_{p-2}, pibar_{p-1}`: `s_k` goes to the letter with
/// subscript `p-1-k`, barred when that subscript is `p-1`.
pub fn psi(word: &Word, p: u32) -> Result<Word, FractionError> {
    let mut letters = Vec::with_capacity(word.len());
    for &g in &word.letters {
        if g.kind != Kind::Sigma || g.index >= p {
            return Err(FractionError::OutsideTranslation { letter: g, p });
        }
        let i = p - 1 - g.index;
        let kind = if i == p - 1 { Kind::PiBar } else { Kind::Pi };
        letters.push(Generator::new(kind, i));
    }
    Ok(Word::from_letters(Alphabet::TwoV, letters))
}

/// Inverse of [`psi`].
pub fn psi_inverse(word: &Word, p: u32) -> Result<Word, FractionError> {
    let mut letters = Vec::with_capacity(word.len());
    for &g in &word.letters {
        let ok = match g.kind {
            Kind::Pi => p >= 2 && g.index <= p - 2,
            Kind::PiBar => p >= 1 && g.index == p - 1,
            _ => false,
        };
        if !ok {
            return Err(FractionError::OutsideTranslation { letter: g, p });
        }
        letters.push(Generator::new(Kind::Sigma, p - 1 - g.index));
    }
    Ok(Word::from_letters(Alphabet::Pi, letters))
}
