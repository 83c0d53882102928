//! Numbered patterns: dyadic tilings of `S_0, S_1, ...` whose rectangles
//! carry a bijective numbering by the naturals.
//!
//! Only finitely many squares are subdivided. Squares with index at least
//! `tail_start` are whole and square `i` carries the number
//! `i + tail_offset`. The stored form is canonical: `tail_start` is as
//! small as possible and each square's rectangles are sorted by number, so
//! derived equality is equality in `Pi`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rect::{DyadicRect, Label};
use crate::words::{Alphabet, Generator, Kind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("dyadic exponent exceeds the supported range")]
    Overflow,
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("invalid numbering: {0}")]
    InvalidNumbering(String),
    #[error("tiling is not a refinement of the given pattern")]
    NotRefinement,
    #[error("`{0}` is not a positive `pi` letter")]
    UnsupportedLetter(Generator),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumberedRect {
    pub rect: DyadicRect,
    pub number: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumberedPattern {
    squares: Vec<Vec<NumberedRect>>,
    tail_offset: u32,
}

impl Default for NumberedPattern {
    fn default() -> Self {
        Self::trivial()
    }
}

impl NumberedPattern {
    /// The identity of `Pi`: every square whole and numbered by its index.
    pub fn trivial() -> Self {
        NumberedPattern {
            squares: Vec::new(),
            tail_offset: 0,
        }
    }

    pub fn tail_start(&self) -> u32 {
        self.squares.len() as u32
    }

    pub fn tail_offset(&self) -> u32 {
        self.tail_offset
    }

    /// Number of rectangles minus number of squares, which always equals
    /// the tail offset.
    pub fn surplus(&self) -> u32 {
        self.tail_offset
    }

    /// The explicit squares, each sorted by number.
    pub fn squares(&self) -> &[Vec<NumberedRect>] {
        &self.squares
    }

    /// Count of explicitly numbered rectangles: `tail_start + tail_offset`.
    pub fn explicit_count(&self) -> u32 {
        self.tail_start() + self.tail_offset
    }

    pub fn is_trivial(&self) -> bool {
        self.squares.is_empty() && self.tail_offset == 0
    }

    /// Rectangles of square `s` sorted by number, including tail squares.
    pub fn square(&self, s: u32) -> Vec<NumberedRect> {
        match self.squares.get(s as usize) {
            Some(rects) => rects.clone(),
            None => vec![NumberedRect {
                rect: DyadicRect::unit(s),
                number: s + self.tail_offset,
            }],
        }
    }

    /// The rectangle carrying number `n`.
    pub fn rect_of(&self, n: u32) -> DyadicRect {
        if n >= self.explicit_count() {
            return DyadicRect::unit(n - self.tail_offset);
        }
        self.squares
            .iter()
            .flatten()
            .find(|r| r.number == n)
            .map(|r| r.rect)
            .expect("explicit numbers are present")
    }

    /// Rectangles indexed by number for all numbers below `upto`.
    pub fn rect_table(&self, upto: u32) -> Vec<DyadicRect> {
        let mut table = vec![DyadicRect::unit(0); upto as usize];
        let explicit = self.explicit_count();
        for r in self.squares.iter().flatten() {
            if r.number < upto {
                table[r.number as usize] = r.rect;
            }
        }
        for n in explicit..upto {
            table[n as usize] = DyadicRect::unit(n - self.tail_offset);
        }
        table
    }

    pub fn rects(&self) -> impl Iterator<Item = &NumberedRect> {
        self.squares.iter().flatten()
    }

    /// Builds a pattern from explicit rectangles, validating the tiling and
    /// the numbering. Whole squares beyond the given ones follow the tail.
    pub fn from_rects(rects: Vec<NumberedRect>, tail_offset: u32) -> Result<Self, PatternError> {
        let mut by_square: BTreeMap<u32, Vec<DyadicRect>> = BTreeMap::new();
        for r in &rects {
            by_square.entry(r.rect.square).or_default().push(r.rect);
        }
        let squares = by_square.keys().next_back().map_or(0, |s| s + 1);
        for s in 0..squares {
            let tiles = by_square.get(&s).ok_or_else(|| {
                PatternError::InvalidTiling(format!("square {s} has no rectangles"))
            })?;
            check_tiling(tiles)
                .map_err(|e| PatternError::InvalidTiling(format!("square {s}: {e}")))?;
        }
        let expected = squares + tail_offset;
        let mut seen = vec![false; expected as usize];
        for r in &rects {
            let slot = seen.get_mut(r.number as usize).ok_or_else(|| {
                PatternError::InvalidNumbering(format!(
                    "number {} exceeds {}",
                    r.number,
                    expected - 1
                ))
            })?;
            if *slot {
                return Err(PatternError::InvalidNumbering(format!(
                    "number {} repeated",
                    r.number
                )));
            }
            *slot = true;
        }
        if rects.len() as u32 != expected {
            return Err(PatternError::InvalidNumbering(format!(
                "{} rectangles in {squares} squares need tail offset {}",
                rects.len(),
                rects.len() as i64 - squares as i64
            )));
        }
        Ok(Self::assemble(rects, tail_offset))
    }

    /// Builds the canonical form from rectangles known to be valid.
    pub(crate) fn assemble(rects: Vec<NumberedRect>, tail_offset: u32) -> Self {
        let count = rects.iter().map(|r| r.rect.square + 1).max().unwrap_or(0);
        let mut squares = vec![Vec::new(); count as usize];
        for r in rects {
            squares[r.rect.square as usize].push(r);
        }
        for sq in &mut squares {
            sq.sort_by_key(|r| r.number);
        }
        while let Some(last) = squares.last() {
            let s = squares.len() as u32 - 1;
            if last.len() == 1 && last[0].rect.is_unit() && last[0].number == s + tail_offset {
                squares.pop();
            } else {
                break;
            }
        }
        NumberedPattern {
            squares,
            tail_offset,
        }
    }

    fn materialized(&self, squares: u32) -> Vec<NumberedRect> {
        let mut out: Vec<NumberedRect> = self.rects().copied().collect();
        for s in self.tail_start()..squares {
            out.push(NumberedRect {
                rect: DyadicRect::unit(s),
                number: s + self.tail_offset,
            });
        }
        out
    }

    /// Right multiplication by one positive `pi` letter.
    pub fn apply(&self, g: Generator) -> Result<Self, PatternError> {
        if g.kind.alphabet() != Alphabet::Pi || !g.is_positive() {
            return Err(PatternError::UnsupportedLetter(g));
        }
        let i = g.index;
        match g.kind {
            Kind::V | Kind::H => {
                let label = if g.kind == Kind::V {
                    Label::V
                } else {
                    Label::H
                };
                let target = self.rect_of(i);
                let (first, second) = target.halves(label).ok_or(PatternError::Overflow)?;
                let mut rects = self.materialized(target.square + 1);
                for r in &mut rects {
                    if r.number > i {
                        r.number += 1;
                    }
                }
                rects.retain(|r| r.number != i);
                rects.push(NumberedRect {
                    rect: first,
                    number: i,
                });
                rects.push(NumberedRect {
                    rect: second,
                    number: i + 1,
                });
                Ok(Self::assemble(rects, self.tail_offset + 1))
            }
            Kind::Sigma => {
                let upto = self.rect_of(i + 1).square.max(self.rect_of(i).square) + 1;
                let mut rects = self.materialized(upto);
                for r in &mut rects {
                    if r.number == i {
                        r.number = i + 1;
                    } else if r.number == i + 1 {
                        r.number = i;
                    }
                }
                Ok(Self::assemble(rects, self.tail_offset))
            }
            _ => Err(PatternError::UnsupportedLetter(g)),
        }
    }

    /// The pattern of a positive `pi` word.
    pub fn of_word(word: &Word) -> Result<Self, PatternError> {
        word.letters
            .iter()
            .try_fold(Self::trivial(), |p, &g| p.apply(g))
    }

    /// The product `self * other`: square `j` of `other` is substituted into
    /// the rectangle of `self` numbered `j`, keeping the numbers of `other`.
    pub fn multiply(&self, other: &NumberedPattern) -> Result<Self, PatternError> {
        let n = other.tail_start().max(self.explicit_count());
        let table = self.rect_table(n);
        let mut rects = Vec::new();
        for j in 0..n {
            for r in other.square(j) {
                let placed = table[j as usize]
                    .place(&r.rect)
                    .ok_or(PatternError::Overflow)?;
                rects.push(NumberedRect {
                    rect: placed,
                    number: r.number,
                });
            }
        }
        Ok(Self::assemble(rects, self.tail_offset + other.tail_offset))
    }

    /// The pattern `M` with `self * M == refined`.
    pub fn quotient(&self, refined: &NumberedPattern) -> Result<Self, PatternError> {
        if refined.tail_offset < self.tail_offset {
            return Err(PatternError::NotRefinement);
        }
        let n = self.tail_start().max(refined.tail_start()) + self.tail_offset;
        let table = self.rect_table(n);
        let mut by_square: BTreeMap<u32, Vec<NumberedRect>> = BTreeMap::new();
        for r in refined.materialized(self.tail_start().max(refined.tail_start())) {
            by_square.entry(r.rect.square).or_default().push(r);
        }
        let mut out = Vec::new();
        let mut used = 0usize;
        for (j, outer) in table.iter().enumerate() {
            let mut area = 0u128;
            let inside = by_square.get(&outer.square).into_iter().flatten();
            for r in inside.filter(|r| outer.contains(&r.rect)) {
                area += r.rect.scaled_area();
                used += 1;
                let rel = r.rect.relative_to(outer);
                out.push(NumberedRect {
                    rect: DyadicRect {
                        square: j as u32,
                        ..rel
                    },
                    number: r.number,
                });
            }
            if area != outer.scaled_area() {
                return Err(PatternError::NotRefinement);
            }
        }
        if used != by_square.values().map(Vec::len).sum::<usize>() {
            return Err(PatternError::NotRefinement);
        }
        Ok(Self::assemble(out, refined.tail_offset - self.tail_offset))
    }

    /// The pattern `C` with `C * self == target`, if it exists.
    pub fn left_cofactor(&self, target: &NumberedPattern) -> Option<Self> {
        let offset = target.tail_offset.checked_sub(self.tail_offset)?;
        let n = self
            .tail_start()
            .max(target.explicit_count().saturating_sub(self.tail_offset));
        let table = target.rect_table(
            target
                .explicit_count()
                .max(self.explicit_count().max(n + self.tail_offset)),
        );
        let mut rects = Vec::with_capacity(n as usize);
        for j in 0..n {
            let tiles = self.square(j);
            let first = &tiles[0];
            let image = table[first.number as usize];
            let outer =
                DyadicRect::solve_outer(&image, &first.rect.relative_to(&DyadicRect::unit(j)))?;
            for t in &tiles[1..] {
                let rel = t.rect.relative_to(&DyadicRect::unit(j));
                if outer.place(&rel)? != table[t.number as usize] {
                    return None;
                }
            }
            rects.push(NumberedRect {
                rect: outer,
                number: j,
            });
        }
        let c = Self::assemble(rects, offset);
        debug_assert!(c.multiply(self).as_ref() == Ok(target));
        Some(c)
    }

    /// All pairwise intersections of the tilings of `self` and `other` in
    /// the squares where either is subdivided, sorted.
    pub fn superpose(&self, other: &NumberedPattern) -> Vec<DyadicRect> {
        let squares = self.tail_start().max(other.tail_start());
        let mut out = Vec::new();
        for s in 0..squares {
            let a = self.square(s);
            let b = other.square(s);
            for x in &a {
                for y in &b {
                    if let Some(z) = x.rect.intersect(&y.rect) {
                        out.push(z);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Numbers a tiling refining `self`: pieces follow the numbers of
    /// `self`, and pieces inside one rectangle follow positional order.
    pub fn refine_numbering(&self, tiling: &[DyadicRect]) -> Self {
        let squares = tiling
            .iter()
            .map(|r| r.square + 1)
            .max()
            .unwrap_or(0)
            .max(self.tail_start());
        let parents = self.rect_table(squares + self.tail_offset);
        let mut groups: Vec<Vec<DyadicRect>> = vec![Vec::new(); parents.len()];
        for r in tiling {
            let owner = parents
                .iter()
                .position(|p| p.contains(r))
                .expect("tiling refines the pattern");
            groups[owner].push(*r);
        }
        let mut rects = Vec::new();
        let mut next = 0;
        for (j, group) in groups.iter_mut().enumerate() {
            if group.is_empty() {
                group.push(parents[j]);
            }
            group.sort();
            for r in group.iter() {
                rects.push(NumberedRect {
                    rect: *r,
                    number: next,
                });
                next += 1;
            }
        }
        Self::assemble(rects, next - squares)
    }

    /// The same tiling with the rectangle numbered `n` renumbered
    /// `perm(n)`. `perm` must be a bijection that fixes every number from
    /// `bound` on.
    pub fn renumber(&self, bound: u32, perm: impl Fn(u32) -> u32) -> Self {
        let squares = self
            .tail_start()
            .max(bound.saturating_sub(self.tail_offset));
        let rects = self
            .materialized(squares)
            .into_iter()
            .map(|r| NumberedRect {
                number: perm(r.number),
                ..r
            })
            .collect();
        Self::assemble(rects, self.tail_offset)
    }

    /// Rectangles sorted by number, squares materialized up to `squares`.
    pub fn rects_upto(&self, squares: u32) -> Vec<NumberedRect> {
        let mut all = self.materialized(squares.max(self.tail_start()));
        all.sort_by_key(|r| r.number);
        all
    }

    pub fn same_tiling(&self, other: &NumberedPattern) -> bool {
        let n = self.tail_start().max(other.tail_start());
        let mut a: Vec<DyadicRect> = self.materialized(n).into_iter().map(|r| r.rect).collect();
        let mut b: Vec<DyadicRect> = other.materialized(n).into_iter().map(|r| r.rect).collect();
        a.sort();
        b.sort();
        a == b
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PatternJson::from(self)).expect("pattern serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PatternError> {
        let json: PatternJson = serde_json::from_value(value.clone())
            .map_err(|e| PatternError::InvalidTiling(e.to_string()))?;
        Self::try_from(json)
    }
}

/// Checks that dyadic rectangles of one square tile it.
pub fn check_tiling(tiles: &[DyadicRect]) -> Result<(), String> {
    let mut area = 0u128;
    for (i, a) in tiles.iter().enumerate() {
        area += a.scaled_area();
        if let Some(b) = tiles[i + 1..].iter().find(|b| a.overlaps(b)) {
            return Err(format!("rectangles {a:?} and {b:?} overlap"));
        }
    }
    if area != DyadicRect::unit(0).scaled_area() {
        return Err("rectangles do not cover the square".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectJson {
    pub xn: u64,
    pub xe: u32,
    pub yn: u64,
    pub ye: u32,
    pub num: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SquareJson {
    pub index: u32,
    pub rects: Vec<RectJson>,
}

/// Squares with index at least `tail_start` are whole and numbered
/// `index + tail_offset`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternJson {
    pub tail_start: u32,
    pub tail_offset: u32,
    pub squares: Vec<SquareJson>,
}

impl From<&NumberedPattern> for PatternJson {
    fn from(p: &NumberedPattern) -> Self {
        PatternJson {
            tail_start: p.tail_start(),
            tail_offset: p.tail_offset,
            squares: p
                .squares
                .iter()
                .enumerate()
                .map(|(i, rects)| SquareJson {
                    index: i as u32,
                    rects: rects
                        .iter()
                        .map(|r| RectJson {
                            xn: r.rect.xn,
                            xe: r.rect.xe,
                            yn: r.rect.yn,
                            ye: r.rect.ye,
                            num: r.number,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PatternJson> for NumberedPattern {
    type Error = PatternError;

    fn try_from(json: PatternJson) -> Result<Self, Self::Error> {
        let mut rects = Vec::new();
        let mut listed = HashSet::new();
        for sq in &json.squares {
            if sq.index >= json.tail_start || !listed.insert(sq.index) {
                return Err(PatternError::InvalidTiling(format!(
                    "unexpected square index {}",
                    sq.index
                )));
            }
            for r in &sq.rects {
                let rect = DyadicRect::new(sq.index, r.xn, r.xe, r.yn, r.ye).ok_or_else(|| {
                    PatternError::InvalidTiling(format!("bad rectangle in square {}", sq.index))
                })?;
                rects.push(NumberedRect {
                    rect,
                    number: r.num,
                });
            }
        }
        if listed.len() as u32 != json.tail_start {
            return Err(PatternError::InvalidTiling(
                "every square below tail_start must be listed".into(),
            ));
        }
        NumberedPattern::from_rects(rects, json.tail_offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::pi;

    fn pat(w: &str) -> NumberedPattern {
        NumberedPattern::of_word(&pi(w)).unwrap()
    }

    #[test]
    fn trivial_pattern_is_canonical() {
        let e = NumberedPattern::trivial();
        assert_eq!(e.tail_start(), 0);
        assert_eq!(e.tail_offset(), 0);
        assert_eq!(pat("s0 s0"), e);
        assert_eq!(pat("1"), e);
    }

    #[test]
    fn v0_splits_the_first_square() {
        let p = pat("v0");
        assert_eq!(p.tail_start(), 1);
        assert_eq!(p.tail_offset(), 1);
        let sq = &p.squares()[0];
        assert_eq!(sq[0].rect, DyadicRect::new(0, 0, 1, 0, 0).unwrap());
        assert_eq!(sq[1].rect, DyadicRect::new(0, 1, 1, 0, 0).unwrap());
        assert_eq!(p.rect_of(2), DyadicRect::unit(1));
    }

    #[test]
    fn generator_on_tail_materializes_squares() {
        let p = pat("h3");
        assert_eq!(p.tail_start(), 4);
        assert_eq!(p.rect_of(4).square, 3);
        assert_eq!(p.rect_of(5), DyadicRect::unit(4));
    }

    #[test]
    fn sorted_and_unsorted_words_agree() {
        assert_eq!(pat("v2 v1"), pat("v1 v3"));
        assert_eq!(pat("h2 v0"), pat("v0 h3"));
        assert_ne!(pat("v0 h1"), pat("h0 v1"));
    }

    #[test]
    fn multiply_matches_concatenation() {
        for (a, b) in [("v0 h1", "s0 v2"), ("h0 s1", "v1 h0 s3"), ("s2", "v0 v0")] {
            assert_eq!(pat(a).multiply(&pat(b)).unwrap(), pat(&format!("{a} {b}")));
        }
    }

    #[test]
    fn quotient_inverts_multiply() {
        let p = pat("v0 h1 s0");
        let m = pat("h2 v0 s1 v4");
        let r = p.multiply(&m).unwrap();
        assert_eq!(p.quotient(&r).unwrap(), m);
        assert_eq!(m.left_cofactor(&r), Some(p.clone()));
        assert_eq!(
            pat("h0").quotient(&pat("v0")),
            Err(PatternError::NotRefinement)
        );
        assert_eq!(pat("h0").left_cofactor(&pat("v0")), None);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = pat("v0 h2 s1");
        let j = p.to_json();
        assert_eq!(NumberedPattern::from_json(&j).unwrap(), p);
        let bad = serde_json::json!({"tail_start":1,"tail_offset":0,
            "squares":[{"index":0,"rects":[{"xn":0,"xe":1,"yn":0,"ye":0,"num":0}]}]});
        assert!(NumberedPattern::from_json(&bad).is_err());
    }

    #[test]
    fn refinement_numbering_is_deterministic() {
        let q = pat("v0");
        let tiling = q.superpose(&pat("h0"));
        let r = q.refine_numbering(&tiling);
        assert_eq!(r.tail_offset(), 3);
        assert_eq!(r.rect_of(0), DyadicRect::new(0, 0, 1, 0, 1).unwrap());
        assert_eq!(r.rect_of(1), DyadicRect::new(0, 0, 1, 1, 1).unwrap());
        assert_eq!(q.quotient(&r).unwrap(), pat("h0 h2"));
    }
}
