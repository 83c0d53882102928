//! Arithmetic in the monoid `Pi`: products, canonical words, left
//! divisibility and bounded searches for common left multiples.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::forest::{normalized_forest_of_pattern, sorted_word_of_shapes, ForestError};
use crate::pattern::{NumberedPattern, PatternError};
use crate::words::{Alphabet, Generator, Kind, Word};

pub use crate::pattern::NumberedPattern as PiElement;

/// The transpositions `s_i` sorting `arr` by bubble sort: each pass scans
/// from index 0 and swaps adjacent out-of-order entries.
pub fn bubble_sort_word(arr: &[u32]) -> Vec<u32> {
    let mut a = arr.to_vec();
    let mut out = Vec::new();
    loop {
        let mut swapped = false;
        for i in 0..a.len().saturating_sub(1) {
            if a[i] > a[i + 1] {
                a.swap(i, i + 1);
                out.push(i as u32);
                swapped = true;
            }
        }
        if !swapped {
            return out;
        }
    }
}

/// A word `q` in transpositions with `from * q == to`, when both patterns
/// have the same tiling.
pub fn sigma_word_between(from: &NumberedPattern, to: &NumberedPattern) -> Option<Word> {
    if !from.same_tiling(to) {
        return None;
    }
    let n = from.explicit_count().max(to.explicit_count());
    let squares = n.saturating_sub(from.tail_offset().min(to.tail_offset()));
    let target: BTreeMap<_, u32> = to
        .rects_upto(squares)
        .into_iter()
        .map(|r| (r.rect, r.number))
        .collect();
    let arr: Vec<u32> = from
        .rects_upto(squares)
        .iter()
        .take(n as usize)
        .map(|r| target[&r.rect])
        .collect();
    let letters = bubble_sort_word(&arr)
        .into_iter()
        .map(|i| Generator::new(Kind::Sigma, i))
        .collect();
    Some(Word::from_letters(Alphabet::Pi, letters))
}

/// The canonical word `p q` of an element: `p` is the sorted `v`/`h` word
/// of its normalized forest and `q` the bubble-sort word in transpositions.
pub fn canonical_word(p: &NumberedPattern) -> Result<Word, ForestError> {
    let forest = normalized_forest_of_pattern(p)?;
    let head = sorted_word_of_shapes(&forest.shape());
    let standard = NumberedPattern::of_word(&head)?;
    let tail =
        sigma_word_between(&standard, p).expect("normalized forest has the tiling of the pattern");
    Ok(head.concat(&tail))
}

/// Product in `Pi`.
pub fn multiply(p: &NumberedPattern, q: &NumberedPattern) -> Result<NumberedPattern, PatternError> {
    p.multiply(q)
}

/// `C` with `C * k == l`, if any.
pub fn left_divides(k: &NumberedPattern, l: &NumberedPattern) -> Option<NumberedPattern> {
    k.left_cofactor(l)
}

/// The candidate window for bounded searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchWindow {
    /// Largest surplus (rectangles minus squares) of a multiple.
    pub surplus: u32,
    /// Largest subscript in the sorted `v`/`h` word of a cofactor.
    pub max_index: u32,
    /// Cofactor numberings range over permutations of `0..perm_points`.
    pub perm_points: u32,
}

impl SearchWindow {
    pub fn for_surplus(surplus: u32) -> Self {
        SearchWindow {
            surplus,
            max_index: surplus,
            perm_points: surplus + 2,
        }
    }
}

/// Sorted (non-decreasing index) `v`/`h` words of exactly `len` letters.
pub fn sorted_vh_words(len: u32, max_index: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(len: u32, min: u32, max: u32, cur: &mut Vec<Generator>, out: &mut Vec<Word>) {
        if cur.len() as u32 == len {
            out.push(Word::from_letters(Alphabet::Pi, cur.clone()));
            return;
        }
        for i in min..=max {
            for kind in [Kind::V, Kind::H] {
                cur.push(Generator::new(kind, i));
                go(len, i, max, cur, out);
                cur.pop();
            }
        }
    }
    go(len, 0, max_index, &mut cur, &mut out);
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    let mut current: Vec<u32> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..current.len())
            .rev()
            .find(|&i| current[i - 1] < current[i])
        else {
            return out;
        };
        let j = (i..current.len())
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// Every element whose sorted word fits the window, for surplus up to
/// `surplus`, with each admissible renumbering of its first numbers.
pub fn enumerate_elements(surplus: u32, window: &SearchWindow) -> Vec<NumberedPattern> {
    let perms = permutations(window.perm_points);
    let mut out = Vec::new();
    for len in 0..=surplus {
        for w in sorted_vh_words(len, window.max_index) {
            let base = NumberedPattern::of_word(&w).expect("small words stay in range");
            for perm in &perms {
                let bound = window.perm_points;
                out.push(base.renumber(bound, |n| if n < bound { perm[n as usize] } else { n }));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All `L = A * y` in the window with `z` also dividing `L` on the right,
/// sorted by canonical word.
pub fn common_left_multiples(
    y: &NumberedPattern,
    z: &NumberedPattern,
    window: &SearchWindow,
) -> Vec<NumberedPattern> {
    let Some(room) = window.surplus.checked_sub(y.surplus()) else {
        return Vec::new();
    };
    let mut found: Vec<NumberedPattern> = enumerate_elements(room, window)
        .iter()
        .filter_map(|a| a.multiply(y).ok())
        .filter(|l| z.left_cofactor(l).is_some())
        .collect();
    found.sort();
    found.dedup();
    sort_by_canonical_word(&mut found);
    found
}

fn sort_by_canonical_word(items: &mut [NumberedPattern]) {
    items.sort_by_cached_key(|p| {
        let w = canonical_word(p).expect("patterns built from words are guillotine");
        (w.len(), w.to_string())
    });
}

/// The member that divides every member on the right, if any.
pub fn has_least(candidates: &[NumberedPattern]) -> Option<NumberedPattern> {
    candidates
        .iter()
        .find(|l| {
            candidates
                .iter()
                .all(|other| l.left_cofactor(other).is_some())
        })
        .cloned()
}

/// One member from each class of minimal members. Since the `s_i` are
/// units, `M <= L` is only a preorder: `L` is minimal when every member
/// below it is also above it, and members above each other form a class.
pub fn minimal_elements(candidates: &[NumberedPattern]) -> Vec<NumberedPattern> {
    let below = |m: &NumberedPattern, l: &NumberedPattern| m.left_cofactor(l).is_some();
    let mut out: Vec<NumberedPattern> = Vec::new();
    for l in candidates {
        let minimal = candidates.iter().all(|m| !below(m, l) || below(l, m));
        if minimal && !out.iter().any(|o| below(o, l)) {
            out.push(l.clone());
        }
    }
    out
}

/// The two elements `Y = v0`, `Z = h0 s1` and their common left multiples
/// `L1 = h0 v1 v0 s3` and `L2 = h0 v1 v0`, each written both ways.
pub fn lclm_example() -> [(Word, Word); 2] {
    let pi = |t: &str| Word::parse(t, Alphabet::Pi).expect("fixed words parse");
    [
        (pi("h0 v1 s2 v0"), pi("v0 h1 s2 h0 s1")),
        (pi("h0 v1 v0"), pi("v0 h1 h0 s1")),
    ]
}

/// Outcome of the search for a least common left multiple of `v0` and
/// `h0 s1`.
#[derive(Debug, Clone, Serialize)]
pub struct LclmReport {
    pub y: String,
    pub z: String,
    pub window: SearchWindow,
    /// Each displayed identity with whether both sides agree.
    pub identities: Vec<(String, String, bool)>,
    pub common_left_multiples: usize,
    pub minimal: Vec<String>,
    /// Common left multiples `M` with `L1 = C1 M` and `L2 = C2 M`.
    pub below_both: Vec<String>,
    pub least: Option<String>,
    pub passed: bool,
}

/// Searches the window for a common left multiple of `v0` and `h0 s1`
/// dividing both displayed multiples on the right.
pub fn lclm_report(window: &SearchWindow) -> LclmReport {
    let of = |w: &Word| NumberedPattern::of_word(w).expect("fixed words evaluate");
    let y = of(&Word::parse("v0", Alphabet::Pi).expect("parses"));
    let z = of(&Word::parse("h0 s1", Alphabet::Pi).expect("parses"));
    let [l1, l2] = lclm_example();
    let identities: Vec<(String, String, bool)> = [&l1, &l2]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string(), of(a) == of(b)))
        .collect();
    let targets = [of(&l1.0), of(&l2.0)];
    let candidates = common_left_multiples(&y, &z, window);
    let in_window = targets.iter().all(|t| candidates.contains(t));
    let show = |p: &NumberedPattern| canonical_word(p).map(|w| w.to_string()).unwrap_or_default();
    let below_both: Vec<NumberedPattern> = candidates
        .iter()
        .filter(|m| targets.iter().all(|t| m.left_cofactor(t).is_some()))
        .cloned()
        .collect();
    let least = has_least(&candidates);
    let passed =
        identities.iter().all(|i| i.2) && in_window && below_both.is_empty() && least.is_none();
    LclmReport {
        y: "v0".into(),
        z: "h0 s1".into(),
        window: *window,
        identities,
        common_left_multiples: candidates.len(),
        minimal: minimal_elements(&candidates).iter().map(show).collect(),
        below_both: below_both.iter().map(show).collect(),
        least: least.as_ref().map(show),
        passed,
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
    fn bubble_sort_records_swaps() {
        assert_eq!(bubble_sort_word(&[1, 0, 2]), vec![0]);
        assert_eq!(bubble_sort_word(&[2, 1, 0]), vec![0, 1, 0]);
        assert!(bubble_sort_word(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn canonical_word_evaluates_back() {
        for w in ["s0", "h0 v1 v0", "v2 s1 h0 s3", "v0 h1 h0 s1", "s3 s2"] {
            let p = pat(w);
            let c = canonical_word(&p).unwrap();
            assert_eq!(NumberedPattern::of_word(&c).unwrap(), p, "{w} -> {c}");
        }
        assert_eq!(
            canonical_word(&pat("h0 v1 v0")).unwrap(),
            canonical_word(&pat("v0 h1 h0 s1")).unwrap()
        );
    }

    #[test]
    fn left_division_examples() {
        let k = pat("v0");
        assert_eq!(left_divides(&k, &k), Some(NumberedPattern::trivial()));
        let c = pat("h0 v1 s2");
        let l = c.multiply(&k).unwrap();
        assert_eq!(l, pat("h0 v1 v0 s3"));
        assert_eq!(left_divides(&k, &l), Some(c));
        assert_eq!(left_divides(&pat("v0"), &pat("h0")), None);
    }

    #[test]
    fn permutations_are_complete() {
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        assert_eq!(p[1], vec![0, 1, 3, 2]);
    }

    #[test]
    fn displayed_multiples_agree() {
        for (a, b) in lclm_example() {
            assert_eq!(
                NumberedPattern::of_word(&a).unwrap(),
                NumberedPattern::of_word(&b).unwrap()
            );
        }
    }

    #[test]
    fn small_window_has_no_lclm() {
        let r = lclm_report(&SearchWindow::for_surplus(3));
        assert!(r.passed, "{r:?}");
        assert!(r.minimal.len() >= 2, "{r:?}");
    }

    #[test]
    fn least_of_chain() {
        let p = pat("v0");
        let q = pat("h1 s0").multiply(&p).unwrap();
        assert_eq!(has_least(std::slice::from_ref(&p)), Some(p.clone()));
        assert_eq!(has_least(&[q.clone(), p.clone()]), Some(p));
    }
}
