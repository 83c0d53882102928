//! Labeled binary forests, their relation to words and patterns, and the
//! normalized forest of a pattern.
//!
//! Tree `i` describes how square `S_i` is cut. Only finitely many trees are
//! stored; tree `i` beyond them is a single leaf numbered `i + tail_offset`.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::pattern::{NumberedPattern, NumberedRect, PatternError};
use crate::rect::{DyadicRect, Label};
use crate::words::{Alphabet, Generator, Kind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("`{0}` is not a positive `pi` letter")]
    UnsupportedLetter(Generator),
    #[error("square {0} is not a union of halves")]
    NotGuillotine(u32),
    #[error("malformed forest: {0}")]
    Malformed(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("rewriting did not finish within {0} steps")]
    Exhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree<T> {
    Leaf(T),
    Node {
        label: Label,
        left: Box<Tree<T>>,
        right: Box<Tree<T>>,
    },
}

/// A labeled binary tree without leaf numbers.
pub type LabeledTree = Tree<()>;

impl<T: Clone> Tree<T> {
    pub fn node(label: Label, left: Tree<T>, right: Tree<T>) -> Self {
        Tree::Node {
            label,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn caret_count(&self) -> usize {
        self.leaf_count() - 1
    }

    pub fn leaves(&self) -> Vec<T> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<T>) {
        match self {
            Tree::Leaf(x) => out.push(x.clone()),
            Tree::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    pub fn shape(&self) -> LabeledTree {
        match self {
            Tree::Leaf(_) => Tree::Leaf(()),
            Tree::Node { label, left, right } => Tree::node(*label, left.shape(), right.shape()),
        }
    }

    /// The subtree reached by `path` (`false` is left).
    pub fn at(&self, path: &[bool]) -> Option<&Tree<T>> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((&step, rest)), Tree::Node { left, right, .. }) => {
                if step {
                    right.at(rest)
                } else {
                    left.at(rest)
                }
            }
            _ => None,
        }
    }

    /// Exchanges left and right at every vertex.
    pub fn mirror(&self) -> Self {
        match self {
            Tree::Leaf(x) => Tree::Leaf(x.clone()),
            Tree::Node { label, left, right } => Tree::node(*label, right.mirror(), left.mirror()),
        }
    }

    /// Paths of the internal vertices in preorder.
    pub fn carets(&self) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        self.collect_carets(&mut Vec::new(), &mut out);
        out
    }

    fn collect_carets(&self, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if let Tree::Node { left, right, .. } = self {
            out.push(prefix.clone());
            prefix.push(false);
            left.collect_carets(prefix, out);
            prefix.pop();
            prefix.push(true);
            right.collect_carets(prefix, out);
            prefix.pop();
        }
    }
}

impl fmt::Display for Tree<u32> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(x) => write!(f, "{x}"),
            Tree::Node { label, left, right } => write!(f, "{label}({left}, {right})"),
        }
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(()) => f.write_str("."),
            Tree::Node { label, left, right } => write!(f, "{label}({left}, {right})"),
        }
    }
}

/// A vertex of a forest: tree index and the path from its root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPath {
    pub tree: u32,
    pub path: Vec<bool>,
}

impl fmt::Display for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.tree)?;
        for &step in &self.path {
            f.write_str(if step { "R" } else { "L" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberedForest {
    trees: Vec<Tree<u32>>,
    tail_offset: u32,
}

impl Default for NumberedForest {
    fn default() -> Self {
        Self::trivial()
    }
}

impl NumberedForest {
    pub fn trivial() -> Self {
        NumberedForest {
            trees: Vec::new(),
            tail_offset: 0,
        }
    }

    /// Builds a forest, trimming trailing trivial trees. Numbers are not
    /// validated here; see [`NumberedForest::to_pattern`].
    pub fn new(mut trees: Vec<Tree<u32>>, tail_offset: u32) -> Self {
        while let Some(Tree::Leaf(n)) = trees.last() {
            if *n == trees.len() as u32 - 1 + tail_offset {
                trees.pop();
            } else {
                break;
            }
        }
        NumberedForest { trees, tail_offset }
    }

    pub fn trees(&self) -> &[Tree<u32>] {
        &self.trees
    }

    pub fn tail_offset(&self) -> u32 {
        self.tail_offset
    }

    pub fn tree(&self, i: u32) -> Tree<u32> {
        self.trees
            .get(i as usize)
            .cloned()
            .unwrap_or(Tree::Leaf(i + self.tail_offset))
    }

    pub fn caret_count(&self) -> usize {
        self.trees.iter().map(Tree::caret_count).sum()
    }

    fn materialize(&mut self, count: usize) {
        while self.trees.len() < count {
            let i = self.trees.len() as u32;
            self.trees.push(Tree::Leaf(i + self.tail_offset));
        }
    }

    fn square_of_number(&self, n: u32) -> usize {
        let explicit = self.trees.len() as u32 + self.tail_offset;
        if n >= explicit {
            return (n - self.tail_offset) as usize;
        }
        self.trees
            .iter()
            .position(|t| t.leaves().contains(&n))
            .expect("explicit numbers occur in the stored trees")
    }

    /// Right multiplication by a positive `pi` letter.
    pub fn apply(&mut self, g: Generator) -> Result<(), ForestError> {
        if g.alphabet() != Alphabet::Pi || !g.is_positive() {
            return Err(ForestError::UnsupportedLetter(g));
        }
        let i = g.index;
        match g.kind {
            Kind::V | Kind::H => {
                let label = if g.kind == Kind::V {
                    Label::V
                } else {
                    Label::H
                };
                let sq = self.square_of_number(i);
                self.materialize(sq + 1);
                for t in &mut self.trees {
                    split_leaf(t, i, label);
                }
                self.tail_offset += 1;
            }
            Kind::Sigma => {
                let sq = self.square_of_number(i).max(self.square_of_number(i + 1));
                self.materialize(sq + 1);
                for t in &mut self.trees {
                    map_leaves(t, &|n| {
                        if n == i {
                            i + 1
                        } else if n == i + 1 {
                            i
                        } else {
                            n
                        }
                    });
                }
            }
            _ => return Err(ForestError::UnsupportedLetter(g)),
        }
        *self = NumberedForest::new(std::mem::take(&mut self.trees), self.tail_offset);
        Ok(())
    }

    /// The forest built by a positive `pi` word from the trivial forest.
    pub fn of_word(word: &Word) -> Result<Self, ForestError> {
        let mut f = Self::trivial();
        for &g in &word.letters {
            f.apply(g)?;
        }
        Ok(f)
    }

    /// The pattern described by the forest.
    pub fn to_pattern(&self) -> Result<NumberedPattern, ForestError> {
        let mut rects = Vec::new();
        for (s, t) in self.trees.iter().enumerate() {
            place_tree(t, DyadicRect::unit(s as u32), &mut rects)?;
        }
        Ok(NumberedPattern::from_rects(rects, self.tail_offset)?)
    }

    /// Vertices labeled `h` whose rectangle is also divided vertically.
    pub fn secondary_labels(&self) -> Vec<VertexPath> {
        let mut out = Vec::new();
        for (i, t) in self.trees.iter().enumerate() {
            let mut tiles = Vec::new();
            let _ = place_tree(t, DyadicRect::unit(i as u32), &mut tiles);
            let rects: Vec<DyadicRect> = tiles.iter().map(|r| r.rect).collect();
            walk_secondary(
                t,
                DyadicRect::unit(i as u32),
                &rects,
                &mut Vec::new(),
                i as u32,
                &mut out,
            );
        }
        out
    }

    pub fn is_normalized(&self) -> bool {
        self.secondary_labels().is_empty()
    }

    /// Leaf-order numbering shape only.
    pub fn shape(&self) -> Vec<LabeledTree> {
        self.trees.iter().map(Tree::shape).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "trees": self.trees.iter().map(tree_json).collect::<Vec<_>>(),
            "tail_offset": self.tail_offset,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, ForestError> {
        let trees = value["trees"]
            .as_array()
            .ok_or_else(|| ForestError::Malformed("missing `trees`".into()))?
            .iter()
            .map(tree_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let offset = value["tail_offset"]
            .as_u64()
            .ok_or_else(|| ForestError::Malformed("missing `tail_offset`".into()))?;
        let f = NumberedForest::new(trees, offset as u32);
        f.to_pattern()?;
        Ok(f)
    }
}

impl fmt::Display for NumberedForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "] +{}", self.tail_offset)
    }
}

fn split_leaf(t: &mut Tree<u32>, i: u32, label: Label) {
    match t {
        Tree::Leaf(n) if *n == i => *t = Tree::node(label, Tree::Leaf(i), Tree::Leaf(i + 1)),
        Tree::Leaf(n) => {
            if *n > i {
                *n += 1;
            }
        }
        Tree::Node { left, right, .. } => {
            split_leaf(left, i, label);
            split_leaf(right, i, label);
        }
    }
}

fn map_leaves(t: &mut Tree<u32>, f: &dyn Fn(u32) -> u32) {
    match t {
        Tree::Leaf(n) => *n = f(*n),
        Tree::Node { left, right, .. } => {
            map_leaves(left, f);
            map_leaves(right, f);
        }
    }
}

fn place_tree(
    t: &Tree<u32>,
    rect: DyadicRect,
    out: &mut Vec<NumberedRect>,
) -> Result<(), ForestError> {
    match t {
        Tree::Leaf(n) => out.push(NumberedRect { rect, number: *n }),
        Tree::Node { label, left, right } => {
            let (a, b) = rect.halves(*label).ok_or(PatternError::Overflow)?;
            place_tree(left, a, out)?;
            place_tree(right, b, out)?;
        }
    }
    Ok(())
}

fn divided(rect: &DyadicRect, tiles: &[DyadicRect], label: Label) -> bool {
    tiles
        .iter()
        .filter(|t| rect.contains(t))
        .all(|t| match label {
            Label::V => t.xe > rect.xe,
            Label::H => t.ye > rect.ye,
        })
}

fn walk_secondary(
    t: &Tree<u32>,
    rect: DyadicRect,
    tiles: &[DyadicRect],
    path: &mut Vec<bool>,
    tree: u32,
    out: &mut Vec<VertexPath>,
) {
    if let Tree::Node { label, left, right } = t {
        if *label == Label::H && divided(&rect, tiles, Label::V) {
            out.push(VertexPath {
                tree,
                path: path.clone(),
            });
        }
        let (a, b) = rect.halves(*label).expect("placed trees have valid halves");
        path.push(false);
        walk_secondary(left, a, tiles, path, tree, out);
        path.pop();
        path.push(true);
        walk_secondary(right, b, tiles, path, tree, out);
        path.pop();
    }
}

fn tree_json(t: &Tree<u32>) -> Value {
    match t {
        Tree::Leaf(n) => json!({ "leaf": n }),
        Tree::Node { label, left, right } => json!({
            "label": label.to_string(),
            "left": tree_json(left),
            "right": tree_json(right),
        }),
    }
}

fn tree_from_json(v: &Value) -> Result<Tree<u32>, ForestError> {
    if let Some(n) = v.get("leaf") {
        let n = n
            .as_u64()
            .ok_or_else(|| ForestError::Malformed("leaf must be a number".into()))?;
        return Ok(Tree::Leaf(n as u32));
    }
    let label = match v.get("label").and_then(Value::as_str) {
        Some("v") => Label::V,
        Some("h") => Label::H,
        _ => {
            return Err(ForestError::Malformed(
                "node label must be `v` or `h`".into(),
            ))
        }
    };
    let left = tree_from_json(
        v.get("left")
            .ok_or_else(|| ForestError::Malformed("missing `left`".into()))?,
    )?;
    let right = tree_from_json(
        v.get("right")
            .ok_or_else(|| ForestError::Malformed("missing `right`".into()))?,
    )?;
    Ok(Tree::node(label, left, right))
}

/// The unique forest of `p` with no secondary labels: every vertex whose
/// rectangle is divided vertically is labeled `v`.
pub fn normalized_forest_of_pattern(p: &NumberedPattern) -> Result<NumberedForest, ForestError> {
    let mut trees = Vec::with_capacity(p.squares().len());
    for (s, rects) in p.squares().iter().enumerate() {
        trees.push(normalized_tree(
            DyadicRect::unit(s as u32),
            rects,
            s as u32,
        )?);
    }
    Ok(NumberedForest::new(trees, p.tail_offset()))
}

fn normalized_tree(
    rect: DyadicRect,
    rects: &[NumberedRect],
    square: u32,
) -> Result<Tree<u32>, ForestError> {
    let inside: Vec<NumberedRect> = rects
        .iter()
        .filter(|r| rect.contains(&r.rect))
        .copied()
        .collect();
    if let [only] = inside.as_slice() {
        if only.rect == rect {
            return Ok(Tree::Leaf(only.number));
        }
    }
    let tiles: Vec<DyadicRect> = inside.iter().map(|r| r.rect).collect();
    let label = if divided(&rect, &tiles, Label::V) {
        Label::V
    } else if divided(&rect, &tiles, Label::H) {
        Label::H
    } else {
        return Err(ForestError::NotGuillotine(square));
    };
    let (a, b) = rect.halves(label).ok_or(PatternError::Overflow)?;
    Ok(Tree::node(
        label,
        normalized_tree(a, &inside, square)?,
        normalized_tree(b, &inside, square)?,
    ))
}

/// A `v`/`h` word whose forest has the given shapes with standard
/// (left to right) numbering. Trees are expanded from the last one down, each
/// vertex before its right subtree and that before its left subtree.
pub fn word_of_shapes(trees: &[LabeledTree]) -> Word {
    let mut letters = Vec::new();
    for (i, t) in trees.iter().enumerate().rev() {
        emit_preorder(t, i as u32, &mut letters);
    }
    Word::from_letters(Alphabet::Pi, letters)
}

fn emit_preorder(t: &LabeledTree, leaf: u32, out: &mut Vec<Generator>) {
    if let Tree::Node { label, left, right } = t {
        let kind = if *label == Label::V { Kind::V } else { Kind::H };
        out.push(Generator::new(kind, leaf));
        emit_preorder(right, leaf + 1, out);
        emit_preorder(left, leaf, out);
    }
}

/// The irreducible word of the rewriting system
/// `x_j y_i -> y_i x_{j+1}` (`i < j`) building the given shapes.
pub fn sorted_word_of_shapes(trees: &[LabeledTree]) -> Word {
    rewrite_sorted(&word_of_shapes(trees))
}

/// Rewrites `x_j y_i -> y_i x_{j+1}` for `i < j` until no rule applies,
/// always at the leftmost descent. The result has non-decreasing indices.
pub fn rewrite_sorted(word: &Word) -> Word {
    let mut letters = word.letters.clone();
    let mut k = 1;
    while k < letters.len() {
        if k > 0 && letters[k - 1].index > letters[k].index {
            let moved = letters[k - 1];
            letters[k - 1] = letters[k];
            letters[k] = moved.with_index(moved.index + 1);
            k -= 1;
            if k == 0 {
                k = 1;
            }
        } else {
            k += 1;
        }
    }
    Word::from_letters(word.alphabet, letters)
}

/// All words reachable from `word` by one application of
/// `x_j y_i -> y_i x_{j+1}` (`i < j`).
pub fn rewrite_successors(word: &Word) -> Vec<Word> {
    (1..word.len())
        .filter(|&k| word.letters[k - 1].index > word.letters[k].index)
        .map(|k| rewrite_at(word, k - 1))
        .collect()
}

/// Applies the rule to the pair at positions `k, k+1`.
pub fn rewrite_at(word: &Word, k: usize) -> Word {
    let mut letters = word.letters.clone();
    let moved = letters[k];
    letters[k] = letters[k + 1];
    letters[k + 1] = moved.with_index(moved.index + 1);
    Word::from_letters(word.alphabet, letters)
}

/// A `v`/`h` word building `forest` (which must carry standard numbering)
/// whose letters create the carets in the given order. The order must list
/// every caret once and each caret after its parent.
pub fn word_realizing_order(forest: &NumberedForest, order: &[VertexPath]) -> Word {
    let mut placed: Vec<Vec<Vec<bool>>> = vec![Vec::new(); forest.trees().len()];
    let mut letters = Vec::with_capacity(order.len());
    for v in order {
        let t = v.tree as usize;
        let tree = &forest.trees()[t];
        let before: usize = placed[..t].iter().map(|p| p.len() + 1).sum();
        let within = leaves_left_of(&placed[t], &v.path);
        let label = match tree.at(&v.path) {
            Some(Tree::Node { label, .. }) => *label,
            _ => panic!("vertex {v} is not a caret"),
        };
        let kind = if label == Label::V { Kind::V } else { Kind::H };
        letters.push(Generator::new(kind, (before + within) as u32));
        placed[t].push(v.path.clone());
    }
    Word::from_letters(Alphabet::Pi, letters)
}

/// Leaves of the partial tree made of `placed` carets that lie strictly to
/// the left of the leaf at `path`.
fn leaves_left_of(placed: &[Vec<bool>], path: &[bool]) -> usize {
    fn count(placed: &[Vec<bool>], prefix: &mut Vec<bool>, path: &[bool]) -> usize {
        if !placed.contains(prefix) {
            return 0;
        }
        let depth = prefix.len();
        if depth < path.len() && path[..depth] == prefix[..] {
            if path[depth] {
                prefix.push(false);
                let left = leaf_total(placed, prefix);
                prefix.pop();
                prefix.push(true);
                let r = count(placed, prefix, path);
                prefix.pop();
                return left + r;
            }
            prefix.push(false);
            let r = count(placed, prefix, path);
            prefix.pop();
            return r;
        }
        0
    }
    fn leaf_total(placed: &[Vec<bool>], prefix: &mut Vec<bool>) -> usize {
        if !placed.contains(prefix) {
            return 1;
        }
        prefix.push(false);
        let a = leaf_total(placed, prefix);
        prefix.pop();
        prefix.push(true);
        let b = leaf_total(placed, prefix);
        prefix.pop();
        a + b
    }
    count(placed, &mut Vec::new(), path)
}

/// `s_j x_i = x_{s_j(i)} (s_j)^{x_i}`: the letters replacing `s_j x_i`.
pub fn sigma_past(j: u32, x: Generator) -> Vec<Generator> {
    let i = x.index;
    let moved = if i == j {
        j + 1
    } else if i == j + 1 {
        j
    } else {
        i
    };
    let s = |k| Generator::new(Kind::Sigma, k);
    let mut out = vec![x.with_index(moved)];
    if i < j {
        out.push(s(j + 1));
    } else if i == j {
        out.extend([s(j), s(j + 1)]);
    } else if i == j + 1 {
        out.extend([s(j + 1), s(j)]);
    } else {
        out.push(s(j));
    }
    out
}

/// Moves every transposition to the right end with `sigma_past`.
pub fn move_sigmas_right(word: &Word) -> Word {
    let mut letters = word.letters.clone();
    loop {
        let pos = (1..letters.len()).find(|&k| {
            letters[k - 1].kind == Kind::Sigma && matches!(letters[k].kind, Kind::V | Kind::H)
        });
        let Some(k) = pos else { break };
        let replacement = sigma_past(letters[k - 1].index, letters[k]);
        letters.splice(k - 1..=k, replacement);
    }
    Word::from_letters(word.alphabet, letters)
}

/// Rewrites a positive `pi` word, using only the defining relations, into a
/// word `p q` with `p` a `v`/`h` word whose forest has no secondary labels
/// and `q` a word in transpositions.
///
/// Secondary labels are removed one at a time, deepest first, by reordering
/// carets so that the offending vertex and its two children are built by
/// consecutive letters `h_i v_{i+1} v_i`, then replacing those letters by
/// `v_i h_{i+1} h_i s_{i+1}`.
pub fn normalize_by_relations(word: &Word, max_steps: usize) -> Result<Word, ForestError> {
    let mut w = move_sigmas_right(word);
    for _ in 0..max_steps {
        let split = w
            .letters
            .iter()
            .position(|g| g.kind == Kind::Sigma)
            .unwrap_or(w.len());
        let p = Word::from_letters(Alphabet::Pi, w.letters[..split].to_vec());
        let q = &w.letters[split..];
        let forest = NumberedForest::of_word(&p)?;
        let secondary = forest.secondary_labels();
        let Some(u) = secondary.iter().max_by_key(|v| v.path.len()).cloned() else {
            return Ok(w);
        };
        let mut order = Vec::new();
        let mut rest = Vec::new();
        for (t, tree) in forest.trees().iter().enumerate() {
            for path in tree.carets() {
                let v = VertexPath {
                    tree: t as u32,
                    path,
                };
                if v.tree == u.tree && v.path.starts_with(&u.path) {
                    if v.path.len() > u.path.len() + 1 {
                        rest.push(v);
                    }
                } else {
                    order.push(v);
                }
            }
        }
        let k = order.len();
        let child = |step: bool| {
            let mut path = u.path.clone();
            path.push(step);
            VertexPath { tree: u.tree, path }
        };
        order.extend([u.clone(), child(true), child(false)]);
        order.extend(rest);
        let realized = word_realizing_order(&forest, &order);
        let i = realized.letters[k].index;
        debug_assert_eq!(realized.letters[k], Generator::new(Kind::H, i));
        debug_assert_eq!(realized.letters[k + 1], Generator::new(Kind::V, i + 1));
        debug_assert_eq!(realized.letters[k + 2], Generator::new(Kind::V, i));
        let mut letters = realized.letters[..k].to_vec();
        letters.extend([
            Generator::new(Kind::V, i),
            Generator::new(Kind::H, i + 1),
            Generator::new(Kind::H, i),
            Generator::new(Kind::Sigma, i + 1),
        ]);
        letters.extend_from_slice(&realized.letters[k + 3..]);
        letters.extend_from_slice(q);
        w = move_sigmas_right(&Word::from_letters(Alphabet::Pi, letters));
    }
    Err(ForestError::Exhausted(max_steps))
}
