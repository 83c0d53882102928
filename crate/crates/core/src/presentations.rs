//! Relation tables for `Pi`, `2V-hat` and `2V`: the infinite families, the
//! two printed finite presentations, derivation and shape checks for the
//! interchange identities, and checks of the rewriting rule
//! `x_j y_i -> y_i x_{j+1}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::forest::{rewrite_sorted, rewrite_successors};
use crate::fractions::FractionPair;
use crate::pattern::NumberedPattern;
use crate::pi_monoid;
use crate::two_v::{self, canonical_form, eval_word, in_two_v};
use crate::words::{Alphabet, Generator, Kind, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown relation family `{0}`")]
pub struct UnknownFamily(pub String);

/// Identifies one relation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// One of the numbered infinite families: 3 to 8 for `Pi`, 10 to 26
    /// for `2V`.
    Numbered(u8),
    Finite40,
    Finite30,
    Definitional,
}

impl FamilyId {
    pub const PI_FAMILIES: [u8; 6] = [3, 4, 5, 6, 7, 8];
    pub const TWO_V_FAMILIES: [u8; 17] = [
        10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26,
    ];

    /// Every table, each family appearing exactly once.
    pub fn all() -> Vec<FamilyId> {
        let mut out: Vec<FamilyId> = Self::PI_FAMILIES
            .iter()
            .chain(Self::TWO_V_FAMILIES.iter())
            .map(|&n| FamilyId::Numbered(n))
            .collect();
        out.extend([
            FamilyId::Finite40,
            FamilyId::Finite30,
            FamilyId::Definitional,
        ]);
        out
    }

    /// The evaluator a table is checked with.
    pub fn evaluator(self) -> Evaluator {
        match self {
            FamilyId::Numbered(n) if n <= 8 => Evaluator::Pi,
            FamilyId::Numbered(_) | FamilyId::Finite30 => Evaluator::TwoV,
            FamilyId::Finite40 | FamilyId::Definitional => Evaluator::TwoVHat,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Numbered(n) => write!(f, "{n}"),
            FamilyId::Finite40 => f.write_str("finite-40"),
            FamilyId::Finite30 => f.write_str("finite-30"),
            FamilyId::Definitional => f.write_str("definitional"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        match t {
            "finite-40" => return Ok(FamilyId::Finite40),
            "finite-30" => return Ok(FamilyId::Finite30),
            "definitional" => return Ok(FamilyId::Definitional),
            _ => {}
        }
        match t.parse::<u8>() {
            Ok(n)
                if FamilyId::PI_FAMILIES.contains(&n) || FamilyId::TWO_V_FAMILIES.contains(&n) =>
            {
                Ok(FamilyId::Numbered(n))
            }
            _ => Err(UnknownFamily(s.to_string())),
        }
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One relation `lhs = rhs` with a human readable label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: String,
    #[serde(serialize_with = "word_text")]
    pub lhs: Word,
    #[serde(serialize_with = "word_text")]
    pub rhs: Word,
}

fn word_text<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(w)
}

impl Relation {
    pub fn new(label: impl Into<String>, lhs: Word, rhs: Word) -> Self {
        Relation {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    /// The image under `v -> A`, `h -> B`, `s -> pi`.
    pub fn to_two_v(&self) -> Relation {
        Relation::new(
            format!("image of {}", self.label),
            homomorphic_image(&self.lhs),
            homomorphic_image(&self.rhs),
        )
    }

    fn sides_match(&self, other: &Relation) -> bool {
        (self.lhs == other.lhs && self.rhs == other.rhs)
            || (self.lhs == other.rhs && self.rhs == other.lhs)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Applies `v -> A`, `h -> B`, `s -> pi` letterwise.
pub fn homomorphic_image(word: &Word) -> Word {
    let letters = word
        .letters
        .iter()
        .map(|g| {
            let kind = match g.kind {
                Kind::V => Kind::A,
                Kind::H => Kind::B,
                Kind::Sigma => Kind::Pi,
                other => other,
            };
            Generator { kind, ..*g }
        })
        .collect();
    Word::from_letters(Alphabet::TwoV, letters)
}

fn word(alphabet: Alphabet, letters: &[(Kind, u32)]) -> Word {
    Word::from_letters(
        alphabet,
        letters.iter().map(|&(k, i)| Generator::new(k, i)).collect(),
    )
}

fn pw(letters: &[(Kind, u32)]) -> Word {
    word(Alphabet::Pi, letters)
}

fn tw(letters: &[(Kind, u32)]) -> Word {
    word(Alphabet::TwoV, letters)
}

/// A single member of an infinite family. `a` and `b` are the two
/// subscript parameters in the order the family names them: `(i, j)` for
/// `Pi` families and `(m, q)` for `2V` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub family: u8,
    pub x: Option<Kind>,
    pub y: Option<Kind>,
    pub a: u32,
    pub b: u32,
}

impl Instance {
    const fn new(family: u8, x: Option<Kind>, y: Option<Kind>, a: u32, b: u32) -> Self {
        Instance { family, x, y, a, b }
    }

    fn label(&self) -> String {
        let mut s = format!("({})", self.family);
        if let Some(x) = self.x {
            s.push_str(&format!(" x={}", x.symbol()));
        }
        if let Some(y) = self.y {
            s.push_str(&format!(" y={}", y.symbol()));
        }
        let (na, nb) = if self.family <= 8 {
            ("i", "j")
        } else {
            ("m", "q")
        };
        s.push_str(&format!(" {na}={}", self.a));
        if has_second_parameter(self.family) {
            s.push_str(&format!(" {nb}={}", self.b));
        }
        s
    }

    /// The relation this instance names.
    pub fn relation(&self) -> Relation {
        use Kind::*;
        let (a, b) = (self.a, self.b);
        let x = self.x.unwrap_or(V);
        let y = self.y.unwrap_or(V);
        let (lhs, rhs) = match self.family {
            3 => (pw(&[(x, b), (y, a)]), pw(&[(y, a), (x, b + 1)])),
            4 => (pw(&[(Sigma, a), (Sigma, a)]), pw(&[])),
            5 => (pw(&[(Sigma, a), (Sigma, b)]), pw(&[(Sigma, b), (Sigma, a)])),
            6 => (
                pw(&[(Sigma, a), (Sigma, a + 1), (Sigma, a)]),
                pw(&[(Sigma, a + 1), (Sigma, a), (Sigma, a + 1)]),
            ),
            7 => {
                let (i, j) = (a, b);
                let moved = if i == j {
                    j + 1
                } else if i == j + 1 {
                    j
                } else {
                    i
                };
                let mut rhs = vec![(x, moved)];
                rhs.extend(sigma_exponent(i, j).into_iter().map(|k| (Sigma, k)));
                (pw(&[(Sigma, j), (x, i)]), pw(&rhs))
            }
            8 => (
                pw(&[(V, a), (H, a + 1), (H, a)]),
                pw(&[(H, a), (V, a + 1), (V, a), (Sigma, a + 1)]),
            ),
            10 => (tw(&[(x, b), (y, a)]), tw(&[(y, a), (x, b + 1)])),
            11 => (tw(&[(Pi, b), (x, a)]), tw(&[(x, a), (Pi, b + 1)])),
            12 => (
                tw(&[(Pi, a), (x, a)]),
                tw(&[(x, a + 1), (Pi, a), (Pi, a + 1)]),
            ),
            13 => (tw(&[(Pi, b), (x, a)]), tw(&[(x, a), (Pi, b)])),
            14 => (tw(&[(PiBar, b), (x, a)]), tw(&[(x, a), (PiBar, b + 1)])),
            15 => (tw(&[(PiBar, a), (A, a)]), tw(&[(Pi, a), (PiBar, a + 1)])),
            16 => (
                tw(&[(PiBar, a), (B, a)]),
                tw(&[(C, a + 1), (Pi, a), (PiBar, a + 1)]),
            ),
            17 => (tw(&[(C, b), (x, a)]), tw(&[(x, a), (C, b + 1)])),
            18 => (
                tw(&[(C, a), (A, a)]),
                tw(&[(B, a), (C, a + 2), (Pi, a + 1)]),
            ),
            19 => (tw(&[(Pi, b), (C, a)]), tw(&[(C, a), (Pi, b)])),
            20 => (
                tw(&[(A, a), (B, a + 1), (B, a)]),
                tw(&[(B, a), (A, a + 1), (A, a), (Pi, a + 1)]),
            ),
            21 => (tw(&[(Pi, b), (Pi, a)]), tw(&[(Pi, a), (Pi, b)])),
            22 => (
                tw(&[(Pi, a), (Pi, a + 1), (Pi, a)]),
                tw(&[(Pi, a + 1), (Pi, a), (Pi, a + 1)]),
            ),
            23 => (tw(&[(PiBar, b), (Pi, a)]), tw(&[(Pi, a), (PiBar, b)])),
            24 => (
                tw(&[(Pi, a), (PiBar, a + 1), (Pi, a)]),
                tw(&[(PiBar, a + 1), (Pi, a), (PiBar, a + 1)]),
            ),
            25 => (tw(&[(Pi, a), (Pi, a)]), tw(&[])),
            26 => (tw(&[(PiBar, a), (PiBar, a)]), tw(&[])),
            other => unreachable!("no family ({other})"),
        };
        Relation::new(self.label(), lhs, rhs)
    }
}

fn has_second_parameter(family: u8) -> bool {
    matches!(family, 3 | 5 | 7 | 10 | 11 | 13 | 14 | 17 | 19 | 21 | 23)
}

/// The transposition `sigma-bar_j` acting on `i`.
pub fn transposition(j: u32, i: u32) -> u32 {
    if i == j {
        j + 1
    } else if i == j + 1 {
        j
    } else {
        i
    }
}

/// Subscripts of the word `(s_j)^{x_i}` with `s_j x_i = x_{sigma-bar_j(i)} (s_j)^{x_i}`.
pub fn sigma_exponent(i: u32, j: u32) -> Vec<u32> {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Less => vec![j + 1],
        Equal => vec![j, j + 1],
        Greater if i == j + 1 => vec![j + 1, j],
        Greater => vec![j],
    }
}

/// All members of a numbered family with every subscript parameter at
/// most `bound`.
pub fn family_instances(family: u8, bound: u32) -> Vec<Instance> {
    use Kind::*;
    let mut out = Vec::new();
    let pairs = |cond: &dyn Fn(u32, u32) -> bool| -> Vec<(u32, u32)> {
        (0..=bound)
            .flat_map(|a| (0..=bound).map(move |b| (a, b)))
            .filter(|&(a, b)| cond(a, b))
            .collect()
    };
    let singles = |out: &mut Vec<Instance>| {
        for a in 0..=bound {
            out.push(Instance::new(family, None, None, a, 0));
        }
    };
    match family {
        3 | 10 => {
            let letters = if family == 3 { [V, H] } else { [A, B] };
            for x in letters {
                for y in letters {
                    for (a, b) in pairs(&|i, j| i < j) {
                        out.push(Instance::new(family, Some(x), Some(y), a, b));
                    }
                }
            }
        }
        5 | 21 => {
            for (a, b) in pairs(&|i, j| i.abs_diff(j) >= 2) {
                out.push(Instance::new(family, None, None, a, b));
            }
        }
        7 => {
            for x in [V, H] {
                for (a, b) in pairs(&|_, _| true) {
                    out.push(Instance::new(family, Some(x), None, a, b));
                }
            }
        }
        11 | 14 | 17 => {
            for x in [A, B] {
                for (a, b) in pairs(&|m, q| m < q) {
                    out.push(Instance::new(family, Some(x), None, a, b));
                }
            }
        }
        12 => {
            for x in [A, B] {
                for a in 0..=bound {
                    out.push(Instance::new(family, Some(x), None, a, 0));
                }
            }
        }
        13 => {
            for x in [A, B] {
                for (a, b) in pairs(&|m, q| m > q + 1) {
                    out.push(Instance::new(family, Some(x), None, a, b));
                }
            }
        }
        19 => {
            for (a, b) in pairs(&|m, q| m > q + 1) {
                out.push(Instance::new(family, None, None, a, b));
            }
        }
        23 => {
            for (a, b) in pairs(&|m, q| q >= m + 2) {
                out.push(Instance::new(family, None, None, a, b));
            }
        }
        4 | 6 | 8 | 15 | 16 | 18 | 20 | 22 | 24 | 25 | 26 => singles(&mut out),
        _ => {}
    }
    out
}

/// Fully expanded relations of a table. The finite lists are returned as
/// verified or corrected entries with their abbreviations expanded; see
/// [`finite_lists`] for the raw entries and the correction report.
pub fn instantiate_family(id: FamilyId, bound: u32) -> Vec<Relation> {
    match id {
        FamilyId::Numbered(n) => family_instances(n, bound)
            .iter()
            .map(Instance::relation)
            .collect(),
        FamilyId::Finite40 => {
            let lists = finite_lists();
            lists
                .forty
                .iter()
                .chain(lists.forty_image.iter())
                .map(FiniteEntry::expanded_relation)
                .collect()
        }
        FamilyId::Finite30 => finite_lists()
            .thirty
            .iter()
            .map(FiniteEntry::expanded_relation)
            .collect(),
        FamilyId::Definitional => definitional_relations(bound),
    }
}

// ---------------------------------------------------------------------------
// Printed finite presentations.

/// How a printed entry was handled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EntryStatus {
    /// Parsed and verified exactly as printed.
    Verified,
    /// Verified after reading a typographic slip the obvious way.
    VerifiedWithTypography { note: String },
    /// Unparseable or false as printed; the family instance is used instead.
    Corrected {
        reason: String,
        corrected: String,
        corrected_holds: bool,
    },
}

/// One entry of a printed finite list.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteEntry {
    pub printed: String,
    pub instance: Instance,
    /// The parsed relation when the printed text is readable.
    pub parsed: Option<Relation>,
    pub status: EntryStatus,
    /// Whether the parsed relation is literally the family instance.
    pub matches_family: bool,
    #[serde(skip)]
    alphabet: Alphabet,
}

impl FiniteEntry {
    /// The relation that is part of the presentation after correction.
    pub fn relation(&self) -> Relation {
        match (&self.status, &self.parsed) {
            (EntryStatus::Corrected { .. }, _) | (_, None) => {
                let mut r = self.instance.relation();
                if self.alphabet == Alphabet::TwoV && self.instance.family <= 8 {
                    r = r.to_two_v();
                }
                r
            }
            (_, Some(r)) => r.clone(),
        }
    }

    /// [`FiniteEntry::relation`] with every generator rewritten in terms of
    /// subscripts 0 and 1.
    pub fn expanded_relation(&self) -> Relation {
        let r = self.relation();
        Relation::new(
            format!("{} [{}]", self.printed, r),
            expand_to_base(&r.lhs),
            expand_to_base(&r.rhs),
        )
    }

    pub fn holds(&self) -> bool {
        match &self.status {
            EntryStatus::Corrected {
                corrected_holds, ..
            } => *corrected_holds,
            _ => true,
        }
    }
}

/// The printed lists and the correction report.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteLists {
    /// The 40 relations over `v_i, h_i, s_i` with `i` in {0, 1}.
    pub forty: Vec<FiniteEntry>,
    /// Their images under `v -> A`, `h -> B`, `s -> pi`.
    pub forty_image: Vec<FiniteEntry>,
    /// The 30 additional relations for `2V`.
    pub thirty: Vec<FiniteEntry>,
    pub corrections: Vec<Correction>,
    pub typography: Vec<Correction>,
}

/// A line of the correction report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub list: String,
    pub printed: String,
    pub reason: String,
    pub replacement: String,
}

impl FiniteLists {
    pub fn all_hold(&self) -> bool {
        self.forty
            .iter()
            .chain(&self.forty_image)
            .chain(&self.thirty)
            .all(FiniteEntry::holds)
    }
}

const V: Option<Kind> = Some(Kind::V);
const H: Option<Kind> = Some(Kind::H);
const A: Option<Kind> = Some(Kind::A);
const B: Option<Kind> = Some(Kind::B);

/// The 40 relations as printed, each tagged with the family member it
/// abbreviates.
pub const FORTY: [(&str, Instance); 40] = [
    ("v_2v_1=v_1v_3", Instance::new(3, V, V, 1, 2)),
    ("v_3v_1=v_1v_4", Instance::new(3, V, V, 1, 3)),
    ("h_2v_1=v_1h_3", Instance::new(3, H, V, 1, 2)),
    ("h_3v_1=v_1h_4", Instance::new(3, H, V, 1, 3)),
    ("v_1h_0=h_0v_2", Instance::new(3, V, H, 0, 1)),
    ("v_2h_0=h_0v_3", Instance::new(3, V, H, 0, 2)),
    ("v_2h_1=h_1v_3", Instance::new(3, V, H, 1, 2)),
    ("v_3h_1=h_1v_4", Instance::new(3, V, H, 1, 3)),
    ("h_1h_0=h_0h_2", Instance::new(3, H, H, 0, 1)),
    ("h_2h_0=h_0h_3", Instance::new(3, H, H, 0, 2)),
    ("h_2h_1=h_1h_3", Instance::new(3, H, H, 1, 2)),
    ("h_3h_1=h_1h_4", Instance::new(3, H, H, 1, 3)),
    ("\\sigma_0v_2=v_2\\sigma_0", Instance::new(7, V, None, 2, 0)),
    ("\\sigma_0v_3=v_3\\sigma_0", Instance::new(7, V, None, 3, 0)),
    ("\\sigma_1v_3=v_3\\sigma_1", Instance::new(7, V, None, 3, 1)),
    ("\\sigma_1v_4=v_4\\sigma_1", Instance::new(7, V, None, 4, 1)),
    ("\\sigma_0h_2=h_2\\sigma_0", Instance::new(7, H, None, 2, 0)),
    ("\\sigma_0h_3=h_3\\sigma_0", Instance::new(7, H, None, 3, 0)),
    ("\\sigma_1h_3=h_3\\sigma_1", Instance::new(7, H, None, 3, 1)),
    ("\\sigma_1h_4=h_4\\sigma_1", Instance::new(7, H, None, 4, 1)),
    (
        "\\sigma_0v_0=v_1\\sigma_0\\sigma_1",
        Instance::new(7, V, None, 0, 0),
    ),
    (
        "\\sigma_1v_1=v_2\\sigma_1\\sigma_2",
        Instance::new(7, V, None, 1, 1),
    ),
    (
        "\\sigma_0h_0=h_1\\sigma_0\\sigma_1",
        Instance::new(7, H, None, 0, 0),
    ),
    (
        "\\sigma_1h_1=h_2\\sigma_1\\sigma_2",
        Instance::new(7, H, None, 1, 1),
    ),
    ("\\sigma_1h_0=h_0\\sigma_2", Instance::new(7, H, None, 0, 1)),
    ("\\sigma_2h_0=h_0\\sigma_3", Instance::new(7, H, None, 0, 2)),
    ("\\sigma_2h_1=h_1\\sigma_3", Instance::new(7, H, None, 1, 2)),
    ("\\sigma_3h_1=h_1\\sigma_4", Instance::new(7, H, None, 1, 3)),
    ("\\sigma_2v_1=v_1\\sigma_3", Instance::new(7, V, None, 1, 2)),
    ("\\sigma_3v_1=v_1\\sigma_4", Instance::new(7, V, None, 1, 3)),
    ("\\sigma_0^2=1", Instance::new(4, None, None, 0, 0)),
    ("\\sigma_1^2=1", Instance::new(4, None, None, 1, 0)),
    (
        "\\sigma_0\\sigma_2=\\sigma_2\\sigma_0",
        Instance::new(5, None, None, 0, 2),
    ),
    (
        "\\sigma_0\\sigma_3=\\sigma_3\\sigma_0",
        Instance::new(5, None, None, 0, 3),
    ),
    (
        "\\sigma_1\\sigma_3=\\sigma_3\\sigma_1",
        Instance::new(5, None, None, 1, 3),
    ),
    (
        "\\sigma_1\\sigma_4=\\sigma_4\\sigma_1",
        Instance::new(5, None, None, 1, 4),
    ),
    (
        "\\sigma_0\\sigma_1\\sigma_0=\\sigma_1\\sigma_0\\sigma_1",
        Instance::new(6, None, None, 0, 0),
    ),
    (
        "\\sigma_1\\sigma_2\\sigma_1=\\sigma_2\\sigma_1\\sigma_2",
        Instance::new(6, None, None, 1, 0),
    ),
    (
        "v_0h_1h_0 =h_0v_1v_0\\sigma1",
        Instance::new(8, None, None, 0, 0),
    ),
    (
        "v_1h_2h_1=h_1v_2v_1\\sigma_2",
        Instance::new(8, None, None, 1, 0),
    ),
];

/// The 30 additional relations for `2V` as printed.
pub const THIRTY: [(&str, Instance); 30] = [
    (
        "\\overline{\\pi}_2A_1=A_1\\overline{\\pi}_3",
        Instance::new(14, A, None, 1, 2),
    ),
    (
        "\\overline{\\pi}_3A_1=A_1\\overline{\\pi}_4",
        Instance::new(14, A, None, 1, 3),
    ),
    (
        "\\overline{\\pi}_!B_0=B_0\\overline{\\pi}_2",
        Instance::new(14, B, None, 0, 1),
    ),
    (
        "\\overline{\\pi}_2B_0=B_0\\overline{\\pi}_3",
        Instance::new(14, B, None, 0, 2),
    ),
    (
        "\\overline{\\pi}_2B_1=B_1\\overline{\\pi}_3",
        Instance::new(14, B, None, 1, 2),
    ),
    (
        "\\overline{\\pi}_3B_1=B_1\\overline{\\pi}_4",
        Instance::new(14, B, None, 1, 3),
    ),
    (
        "\\overline{\\pi}_0A_0=\\pi_0\\overline{\\pi}_1",
        Instance::new(15, None, None, 0, 0),
    ),
    (
        "\\overline{\\pi}_1A_1=\\pi_1\\overline{\\pi}_2",
        Instance::new(15, None, None, 1, 0),
    ),
    (
        "\\overline{\\pi}_0B_0=C_1\\pi_0\\overline{\\pi}_1",
        Instance::new(16, None, None, 0, 0),
    ),
    (
        "\\overline{\\pi}_1B_1=C_2\\pi_1\\overline{\\pi}_2",
        Instance::new(16, None, None, 1, 0),
    ),
    ("C_2A_1=A_1C_3", Instance::new(17, A, None, 1, 2)),
    ("C_1A_1=A_1C_4", Instance::new(17, A, None, 1, 3)),
    ("C_1B_0=B_0C_2", Instance::new(17, B, None, 0, 1)),
    ("C_2B_0=B_0C_3", Instance::new(17, B, None, 0, 2)),
    ("C_2B_1=B_1C_3", Instance::new(17, B, None, 1, 2)),
    ("C_3B_1=B_1C_4", Instance::new(17, B, None, 1, 3)),
    ("C_0A_0=B_0C_2\\pi_1", Instance::new(18, None, None, 0, 0)),
    ("C_1A_1=B_1C_3\\pi_2", Instance::new(18, None, None, 1, 0)),
    (
        "\\overline{\\pi}_0^2=1",
        Instance::new(26, None, None, 0, 0),
    ),
    (
        "\\overline{\\pi}_1^2=1",
        Instance::new(26, None, None, 1, 0),
    ),
    ("\\pi_0C_2=C_2\\pi_0", Instance::new(19, None, None, 2, 0)),
    ("\\pi_0C_3=C_3\\pi_0", Instance::new(19, None, None, 3, 0)),
    ("\\pi_1C_3=C_3\\pi_1", Instance::new(19, None, None, 3, 1)),
    ("\\pi_1C_4=C_4\\pi_1", Instance::new(19, None, None, 4, 1)),
    (
        "\\pi_0\\overline{\\pi}_2=\\overline{\\pi}_2\\pi_0",
        Instance::new(23, None, None, 0, 2),
    ),
    (
        "\\pi_0\\overline{\\pi}_3=\\overline{\\pi}_3\\pi_0",
        Instance::new(23, None, None, 0, 3),
    ),
    (
        "\\pi_1\\overline{\\pi}_3=\\overline{\\pi}_3\\pi_1",
        Instance::new(23, None, None, 1, 3),
    ),
    (
        "\\pi_1\\overline{\\pi}_4=\\overline{\\pi}_4\\pi_1",
        Instance::new(23, None, None, 1, 4),
    ),
    (
        "\\pi_0\\overline{\\pi}_1\\pi_0=\\overline{\\pi}_1\\pi_0\\overline{\\pi}_1",
        Instance::new(24, None, None, 0, 0),
    ),
    (
        "\\pi_1\\overline{\\pi}_2\\pi_1=\\overline{\\pi}_2\\pi_1\\overline{\\pi}_2",
        Instance::new(24, None, None, 1, 0),
    ),
];

/// A relation in printed notation that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unreadable at byte {position}: {reason}")]
pub struct PrintedError {
    pub position: usize,
    pub reason: String,
}

/// A parsed printed relation together with any typographic slips that
/// were read charitably.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintedRelation {
    pub relation: Relation,
    pub typography: Vec<String>,
}

/// Parses relations in the printed notation, e.g. `\sigma_0v_0=v_1\sigma_0\sigma_1`,
/// `\overline{\pi}_0^2=1` or `C_{12}A_1=A_1C_{13}`.
pub fn parse_printed(text: &str, alphabet: Alphabet) -> Result<PrintedRelation, PrintedError> {
    let mut typography = Vec::new();
    let (l, r) = text.split_once('=').ok_or(PrintedError {
        position: 0,
        reason: "missing `=`".into(),
    })?;
    let lhs = parse_printed_side(l, 0, alphabet, &mut typography)?;
    let rhs = parse_printed_side(r, l.len() + 1, alphabet, &mut typography)?;
    Ok(PrintedRelation {
        relation: Relation::new(text.to_string(), lhs, rhs),
        typography,
    })
}

fn parse_printed_side(
    text: &str,
    offset: usize,
    alphabet: Alphabet,
    typography: &mut Vec<String>,
) -> Result<Word, PrintedError> {
    let bytes = text.as_bytes();
    let err = |pos: usize, reason: &str| PrintedError {
        position: offset + pos,
        reason: reason.to_string(),
    };
    let mut pos = 0;
    let mut letters = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if text.trim() == "1" {
        return Ok(Word::empty(alphabet));
    }
    while pos < bytes.len() {
        let rest = &text[pos..];
        let (kind, len) = if let Some(r) = rest.strip_prefix("\\overline{\\pi}") {
            let _ = r;
            (Kind::PiBar, "\\overline{\\pi}".len())
        } else if rest.starts_with("\\sigma") {
            (Kind::Sigma, "\\sigma".len())
        } else if rest.starts_with("\\pi") {
            (Kind::Pi, "\\pi".len())
        } else {
            match Kind::from_symbol(bytes[pos] as char)
                .filter(|k| !matches!(k, Kind::Sigma | Kind::Pi | Kind::PiBar))
            {
                Some(k) => (k, 1),
                None => return Err(err(pos, "expected a generator")),
            }
        };
        if kind.alphabet() != alphabet {
            return Err(err(pos, "generator from the other alphabet"));
        }
        let start = pos;
        pos += len;
        let index = if bytes.get(pos) == Some(&b'_') {
            pos += 1;
            if bytes.get(pos) == Some(&b'{') {
                let close = text[pos..]
                    .find('}')
                    .ok_or_else(|| err(pos, "unclosed subscript"))?;
                let digits = &text[pos + 1..pos + close];
                pos += close + 1;
                digits
                    .parse::<u32>()
                    .map_err(|_| err(pos, "subscript is not a number"))?
            } else {
                match bytes.get(pos) {
                    Some(c) if c.is_ascii_digit() => {
                        pos += 1;
                        u32::from(c - b'0')
                    }
                    _ => return Err(err(pos, "subscript is not a number")),
                }
            }
        } else {
            match bytes.get(pos) {
                Some(c) if c.is_ascii_digit() => {
                    typography.push(format!(
                        "`{}` read as subscript {}",
                        &text[start..pos + 1],
                        char::from(*c)
                    ));
                    pos += 1;
                    u32::from(c - b'0')
                }
                _ => return Err(err(pos, "missing subscript")),
            }
        };
        let g = Generator::new(kind, index);
        let mut count = 1;
        let mut inverse = false;
        if bytes.get(pos) == Some(&b'^') {
            pos += 1;
            let exponent = if bytes.get(pos) == Some(&b'{') {
                let close = text[pos..]
                    .find('}')
                    .ok_or_else(|| err(pos, "unclosed exponent"))?;
                let e = &text[pos + 1..pos + close];
                pos += close + 1;
                e.to_string()
            } else {
                let e = text[pos..]
                    .chars()
                    .next()
                    .ok_or_else(|| err(pos, "missing exponent"))?;
                pos += e.len_utf8();
                e.to_string()
            };
            match exponent.parse::<i32>() {
                Ok(-1) => inverse = true,
                Ok(n) if n >= 1 => count = n as usize,
                _ => return Err(err(pos, "unsupported exponent")),
            }
        }
        for _ in 0..count {
            letters.push(if inverse { g.inverse() } else { g });
        }
        skip_ws(&mut pos);
    }
    Ok(Word::from_letters(alphabet, letters))
}

/// Rewrites every generator with subscript at least 2 by conjugating the
/// subscript 1 generator with powers of `v_0` (or `A_0`), and every `C_m`
/// by its expression in `pibar`, `B`, `pi` and `A`.
pub fn expand_to_base(word: &Word) -> Word {
    let mut out = Vec::new();
    for &g in &word.letters {
        let e = expand_letter(Generator {
            sign: Sign::Positive,
            ..g
        });
        if g.is_positive() {
            out.extend(e.letters);
        } else {
            out.extend(e.inverse().letters);
        }
    }
    Word::from_letters(word.alphabet, out)
}

fn expand_letter(g: Generator) -> Word {
    let alphabet = g.alphabet();
    if g.kind == Kind::C {
        return expand_to_base(&c_definition(g.index));
    }
    if g.index <= 1 {
        return Word::from_letters(alphabet, vec![g]);
    }
    let base = if alphabet == Alphabet::Pi {
        Kind::V
    } else {
        Kind::A
    };
    let power = (g.index - 1) as usize;
    let mut letters = vec![Generator::inverse_of(base, 0); power];
    letters.push(g.with_index(1));
    letters.extend(vec![Generator::new(base, 0); power]);
    Word::from_letters(alphabet, letters)
}

/// `C_m = (pibar_m B_m pibar_{m+1} pi_m)(B_m pi_{m+1} A_m^-1)`.
pub fn c_definition(m: u32) -> Word {
    use Kind::*;
    let mut w = tw(&[
        (PiBar, m),
        (B, m),
        (PiBar, m + 1),
        (Pi, m),
        (B, m),
        (Pi, m + 1),
    ]);
    w.push(Generator::inverse_of(A, m));
    w
}

fn finite_entry(printed: &str, instance: Instance, alphabet: Alphabet) -> FiniteEntry {
    let target = {
        let r = instance.relation();
        if alphabet == Alphabet::TwoV && instance.family <= 8 {
            r.to_two_v()
        } else {
            r
        }
    };
    let corrected_holds = Evaluator::for_alphabet(alphabet)
        .check(&expand_relation(&target))
        .holds;
    match parse_printed(printed, alphabet) {
        Err(e) => FiniteEntry {
            printed: printed.to_string(),
            instance,
            parsed: None,
            status: EntryStatus::Corrected {
                reason: e.to_string(),
                corrected: target.to_string(),
                corrected_holds,
            },
            matches_family: false,
            alphabet,
        },
        Ok(p) => {
            let holds = Evaluator::for_alphabet(alphabet)
                .check(&expand_relation(&p.relation))
                .holds;
            let matches_family = p.relation.sides_match(&target);
            let status = if !holds {
                EntryStatus::Corrected {
                    reason: "fails under evaluation".to_string(),
                    corrected: target.to_string(),
                    corrected_holds,
                }
            } else if p.typography.is_empty() {
                EntryStatus::Verified
            } else {
                EntryStatus::VerifiedWithTypography {
                    note: p.typography.join("; "),
                }
            };
            FiniteEntry {
                printed: printed.to_string(),
                instance,
                parsed: Some(p.relation),
                status,
                matches_family,
                alphabet,
            }
        }
    }
}

fn expand_relation(r: &Relation) -> Relation {
    Relation::new(
        r.label.clone(),
        expand_to_base(&r.lhs),
        expand_to_base(&r.rhs),
    )
}

/// Maps printed `Pi` notation to the corresponding `2V` notation.
fn printed_image(printed: &str) -> String {
    printed
        .replace("\\sigma", "\\pi")
        .replace('v', "A")
        .replace('h', "B")
}

/// The printed finite lists, each entry verified as printed (after
/// expanding abbreviations) or replaced by its family member.
pub fn finite_lists() -> FiniteLists {
    let forty: Vec<FiniteEntry> = FORTY
        .iter()
        .map(|&(p, inst)| finite_entry(p, inst, Alphabet::Pi))
        .collect();
    let forty_image: Vec<FiniteEntry> = FORTY
        .iter()
        .map(|&(p, inst)| finite_entry(&printed_image(p), inst, Alphabet::TwoV))
        .collect();
    let thirty: Vec<FiniteEntry> = THIRTY
        .iter()
        .map(|&(p, inst)| finite_entry(p, inst, Alphabet::TwoV))
        .collect();
    let mut corrections = Vec::new();
    let mut typography = Vec::new();
    for (list, entries) in [
        ("finite-40", &forty),
        ("finite-40 image", &forty_image),
        ("finite-30", &thirty),
    ] {
        for e in entries.iter() {
            match &e.status {
                EntryStatus::Corrected {
                    reason, corrected, ..
                } => corrections.push(Correction {
                    list: list.to_string(),
                    printed: e.printed.clone(),
                    reason: reason.clone(),
                    replacement: format!("{corrected} from {}", e.instance.label()),
                }),
                EntryStatus::VerifiedWithTypography { note } => typography.push(Correction {
                    list: list.to_string(),
                    printed: e.printed.clone(),
                    reason: note.clone(),
                    replacement: e
                        .parsed
                        .as_ref()
                        .map(|r| format!("{} = {}", r.lhs, r.rhs))
                        .unwrap_or_default(),
                }),
                EntryStatus::Verified => {}
            }
        }
    }
    FiniteLists {
        forty,
        forty_image,
        thirty,
        corrections,
        typography,
    }
}

// ---------------------------------------------------------------------------
// Definitions and inductive steps.

fn gen(kind: Kind, i: u32, sign: Sign) -> Generator {
    Generator {
        kind,
        index: i,
        sign,
    }
}

fn conj(alphabet: Alphabet, outer: Generator, inner: Vec<Generator>) -> Word {
    let mut letters = vec![outer.inverse()];
    letters.extend(inner);
    letters.push(outer);
    Word::from_letters(alphabet, letters)
}

fn chain(label: &str, lines: &[Word]) -> Vec<Relation> {
    lines
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            Relation::new(
                format!("{label}: line {k} = line {}", k + 1),
                w[0].clone(),
                w[1].clone(),
            )
        })
        .collect()
}

/// Definitions of higher generators, the conjugation identities they imply,
/// and the inductive steps that reduce the infinite families to the finite
/// lists.
pub fn definitional_relations(bound: u32) -> Vec<Relation> {
    use Kind::*;
    use Sign::*;
    let mut out = Vec::new();
    for i in 2..=bound {
        for kind in [V, H, Sigma, A, B, Pi, PiBar] {
            let g = Generator::new(kind, i);
            out.push(Relation::new(
                format!("definition of {g}"),
                Word::from_letters(kind.alphabet(), vec![g]),
                expand_letter(g),
            ));
        }
    }
    for m in 0..=bound {
        out.push(Relation::new(
            format!("definition of C{m}"),
            tw(&[(C, m)]),
            c_definition(m),
        ));
    }
    let p = Alphabet::Pi;
    for j in 2..=bound.max(2) {
        let lines = [
            conj(p, gen(V, 1, Positive), vec![gen(V, j + 2, Positive)]),
            conj(
                p,
                gen(V, 1, Positive),
                conj(p, gen(V, 2, Positive), vec![gen(V, j + 1, Positive)]).letters,
            ),
            conj(p, gen(V, 3, Positive), vec![gen(V, j + 2, Positive)]),
            pw(&[(V, j + 3)]),
        ];
        out.extend(chain(&format!("v-raising step j={j}"), &lines));
    }
    for j in 0..=bound {
        for i in j + 4..=bound + 4 {
            for inner in [V, Sigma] {
                let x = |k| gen(inner, k, Positive);
                let s = gen(Sigma, j, Positive);
                let lines = [
                    conj(p, s, vec![x(i)]),
                    conj(
                        p,
                        s,
                        conj(p, gen(V, i - 2, Positive), vec![x(i - 1)]).letters,
                    ),
                    conj(p, gen(V, i - 2, Positive), vec![x(i - 1)]),
                    Word::from_letters(p, vec![x(i)]),
                ];
                out.extend(chain(
                    &format!("{}-commuting step i={i} j={j}", inner.symbol()),
                    &lines,
                ));
            }
        }
    }
    for outer in [V, H] {
        for inner in [V, H] {
            for i in 0..=bound {
                for k in 1..=bound {
                    out.push(Relation::new(
                        format!(
                            "{o}{i}^-1 {n}{} {o}{i} = {n}{}",
                            i + k,
                            i + k + 1,
                            o = outer.symbol(),
                            n = inner.symbol()
                        ),
                        conj(
                            p,
                            gen(outer, i, Positive),
                            vec![gen(inner, i + k, Positive)],
                        ),
                        pw(&[(inner, i + k + 1)]),
                    ));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Evaluation.

/// The semantic model a table is checked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluator {
    /// Positive words over `v, h, s` as numbered patterns.
    Pi,
    /// Group words as fraction pairs; `2v` words use their `2V-hat` pairs.
    TwoVHat,
    /// Words over `A, B, C, pi, pibar` as fraction pairs, with both sides
    /// required to lie in `2V`.
    TwoV,
}

/// The outcome for one relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub label: String,
    pub relation: String,
    pub holds: bool,
    /// Canonical words of both sides, filled in on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Evaluator {
    pub fn for_alphabet(alphabet: Alphabet) -> Self {
        match alphabet {
            Alphabet::Pi => Evaluator::TwoVHat,
            Alphabet::TwoV => Evaluator::TwoV,
        }
    }

    fn pair(self, w: &Word) -> Result<FractionPair, String> {
        match w.alphabet {
            Alphabet::Pi => FractionPair::of_word(w).map_err(|e| e.to_string()),
            Alphabet::TwoV => eval_word(w).map_err(|e| e.to_string()),
        }
    }

    fn canonical(self, w: &Word) -> String {
        let text = match (self, w.alphabet) {
            (Evaluator::Pi, _) => NumberedPattern::of_word(w)
                .map_err(|e| e.to_string())
                .and_then(|p| pi_monoid::canonical_word(&p).map_err(|e| e.to_string()))
                .map(|c| c.to_string()),
            (Evaluator::TwoV, Alphabet::TwoV) => two_v::canonical_word(w)
                .map(|c| c.to_string())
                .map_err(|e| e.to_string()),
            _ => self.pair(w).and_then(|f| {
                f.canonical_word()
                    .map(|c| c.to_string())
                    .map_err(|e| e.to_string())
            }),
        };
        text.unwrap_or_else(|e| format!("<{e}>"))
    }

    fn holds(self, r: &Relation) -> Result<bool, String> {
        match self {
            Evaluator::Pi => {
                if !r.lhs.is_positive() || !r.rhs.is_positive() {
                    return Err("the Pi evaluator takes positive words".into());
                }
                let l = NumberedPattern::of_word(&r.lhs).map_err(|e| e.to_string())?;
                let rr = NumberedPattern::of_word(&r.rhs).map_err(|e| e.to_string())?;
                Ok(l == rr)
            }
            Evaluator::TwoVHat | Evaluator::TwoV => {
                let l = self.pair(&r.lhs)?;
                let rr = self.pair(&r.rhs)?;
                if self == Evaluator::TwoV && !(in_two_v(&l) && in_two_v(&rr)) {
                    return Err("a side does not lie in 2V".into());
                }
                l.equals(&rr).map_err(|e| e.to_string())
            }
        }
    }

    pub fn check(self, r: &Relation) -> RelationCheck {
        let result = self.holds(r);
        let holds = result == Ok(true);
        RelationCheck {
            label: r.label.clone(),
            relation: r.to_string(),
            holds,
            canonical: (!holds).then(|| (self.canonical(&r.lhs), self.canonical(&r.rhs))),
            error: result.err(),
        }
    }
}

/// Results for one table.
#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub name: String,
    pub evaluator: Evaluator,
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
    pub failures: Vec<RelationCheck>,
}

pub fn verify_table(name: &str, relations: &[Relation], evaluator: Evaluator) -> TableReport {
    let failures: Vec<RelationCheck> = relations
        .iter()
        .map(|r| evaluator.check(r))
        .filter(|c| !c.holds)
        .collect();
    TableReport {
        name: name.to_string(),
        evaluator,
        total: relations.len(),
        failed: failures.len(),
        passed: failures.is_empty(),
        failures,
    }
}

/// Verifies one table at the given bound. `Pi` families are checked both
/// as patterns and as fractions.
pub fn verify_family(id: FamilyId, bound: u32) -> Vec<TableReport> {
    let relations = instantiate_family(id, bound);
    let name = format!("({id})");
    match id.evaluator() {
        Evaluator::Pi => vec![
            verify_table(&format!("{name} in Pi"), &relations, Evaluator::Pi),
            verify_table(&format!("{name} in 2V-hat"), &relations, Evaluator::TwoVHat),
        ],
        e => vec![verify_table(&name, &relations, e)],
    }
}

/// The images of families 3 to 8 under `v -> A`, `h -> B`, `s -> pi`,
/// checked in `2V`.
pub fn homomorphism_check(bound: u32) -> TableReport {
    let relations: Vec<Relation> = FamilyId::PI_FAMILIES
        .iter()
        .flat_map(|&n| instantiate_family(FamilyId::Numbered(n), bound))
        .map(|r| r.to_two_v())
        .collect();
    verify_table("images of (3)-(8) in 2V", &relations, Evaluator::TwoV)
}

// ---------------------------------------------------------------------------
// Derived identities and shapes.

fn raw(letters: Vec<Generator>) -> Word {
    Word::from_letters(Alphabet::TwoV, letters)
}

fn p(kind: Kind, i: u32) -> Generator {
    Generator::new(kind, i)
}

fn n(kind: Kind, i: u32) -> Generator {
    Generator::inverse_of(kind, i)
}

/// Exact identities displayed in the subscript raising and interchange
/// arguments, as consecutive equalities.
pub fn derivation_identities(bound: u32) -> Vec<Relation> {
    use Kind::*;
    let mut out = Vec::new();
    for r in 0..=bound {
        out.push(Relation::new(
            format!("C raising r={r}"),
            raw(vec![p(C, r)]),
            raw(vec![p(C, r + 1), p(B, r), p(Pi, r + 1), n(A, r)]),
        ));
        out.push(Relation::new(
            format!("pibar raising r={r}"),
            raw(vec![p(PiBar, r)]),
            raw(vec![p(Pi, r), p(PiBar, r + 1), n(A, r)]),
        ));
        out.push(Relation::new(
            format!("pibar raising, second form r={r}"),
            raw(vec![p(PiBar, r)]),
            raw(vec![p(A, r), p(PiBar, r + 1), p(Pi, r)]),
        ));
        out.push(Relation::new(
            format!("C_m A_m m={r}"),
            raw(vec![p(C, r), p(A, r)]),
            raw(vec![p(C, r + 1), p(B, r), p(Pi, r + 1)]),
        ));
        out.push(Relation::new(
            format!("C elimination m={r}"),
            raw(vec![p(C, r)]),
            c_definition(r),
        ));
        out.push(Relation::new(
            format!("pibar_q A_q q={r}"),
            raw(vec![p(PiBar, r), p(A, r)]),
            raw(vec![p(Pi, r), p(PiBar, r + 1)]),
        ));
        out.push(Relation::new(
            format!("pibar_q C_(q+1) q={r}"),
            raw(vec![p(PiBar, r), p(C, r + 1)]),
            raw(vec![p(B, r), p(PiBar, r + 1), p(Pi, r)]),
        ));
    }
    for q in 0..=bound {
        for r in q..=bound {
            // C_q^-1 A_r for r >= q.
            let mut prefix = Vec::new();
            for k in q..=r {
                prefix.extend([p(A, k), p(Pi, k + 1), n(B, k)]);
            }
            let l0 = raw(vec![n(C, q), p(A, r)]);
            let mut l1 = prefix.clone();
            l1.extend([n(C, r + 1), p(A, r)]);
            let mut l2 = prefix;
            l2.extend([p(A, r), n(C, r + 2)]);
            out.extend(chain(
                &format!("C_q^-1 A_r q={q} r={r}"),
                &[l0, raw(l1), raw(l2)],
            ));
        }
        for r in q + 1..=bound {
            // pibar_q A_r for r > q.
            let a_run: Vec<Generator> = (q..r).map(|k| p(A, k)).collect();
            let pis_down =
                |from: u32| -> Vec<Generator> { (q..=from).rev().map(|k| p(Pi, k)).collect() };
            let l0 = raw(vec![p(PiBar, q), p(A, r)]);
            let mut l1 = a_run.clone();
            l1.push(p(PiBar, r));
            l1.extend(pis_down(r - 1));
            l1.push(p(A, r));
            let mut l2 = a_run.clone();
            l2.extend([p(PiBar, r), p(Pi, r - 1), p(A, r)]);
            if r >= q + 2 {
                l2.extend(pis_down(r - 2));
            }
            let mut l3 = a_run.clone();
            l3.extend([p(PiBar, r), p(A, r - 1), p(Pi, r), p(Pi, r - 1)]);
            if r >= q + 2 {
                l3.extend(pis_down(r - 2));
            }
            let mut l4 = a_run;
            l4.extend([p(A, r - 1), p(PiBar, r + 1)]);
            l4.extend(pis_down(r));
            out.extend(chain(
                &format!("pibar_q A_r q={q} r={r}"),
                &[l0, raw(l1), raw(l2), raw(l3), raw(l4)],
            ));
        }
        for r in 0..=(q + 1).min(bound) {
            // pi_q C_r for r <= q+1.
            let mut groups = Vec::new();
            for k in (r..=q + 1).rev() {
                groups.extend([p(B, k), p(Pi, k + 1), n(A, k)]);
            }
            let l0 = raw(vec![p(Pi, q), p(C, r)]);
            let mut l1 = vec![p(Pi, q), p(C, q + 2)];
            l1.extend(groups.iter().copied());
            let mut l2 = vec![p(C, q + 2), p(Pi, q)];
            l2.extend(groups);
            out.extend(chain(
                &format!("pi_q C_r q={q} r={r}"),
                &[l0, raw(l1), raw(l2)],
            ));
        }
        for r in q + 2..=bound {
            // pibar_q C_r for r > q+1.
            let a_run: Vec<Generator> = (q..=r - 2).map(|k| p(A, k)).collect();
            let pis_down =
                |from: u32| -> Vec<Generator> { (q..=from).rev().map(|k| p(Pi, k)).collect() };
            let l0 = raw(vec![p(PiBar, q), p(C, r)]);
            let mut l1 = a_run.clone();
            l1.push(p(PiBar, r - 1));
            l1.extend(pis_down(r - 2));
            l1.push(p(C, r));
            let mut l2 = a_run.clone();
            l2.extend([p(PiBar, r - 1), p(C, r)]);
            l2.extend(pis_down(r - 2));
            let mut l3 = a_run;
            l3.extend([p(B, r - 1), p(PiBar, r)]);
            l3.extend(pis_down(r - 1));
            out.extend(chain(
                &format!("pibar_q C_r q={q} r={r}"),
                &[l0, raw(l1), raw(l2), raw(l3)],
            ));
        }
        for r in 0..=q {
            out.extend(pibar_c_low_chain(q, r));
        }
    }
    out
}

/// The chain for `pibar_q C_r` with `r <= q`.
fn pibar_c_low_chain(q: u32, r: u32) -> Vec<Relation> {
    use Kind::*;
    let top = 2 * q - r;
    // (pi_{top+1} A_top^-1)(pi_{top-1} A_{top-2}^-1) ... (pi_{r+1} A_r^-1)
    let groups: Vec<Vec<Generator>> = (0..=q - r)
        .map(|k| vec![p(Pi, top + 1 - 2 * k), n(A, top - 2 * k)])
        .collect();
    let g_all: Vec<Generator> = groups.concat();
    let g_rest: Vec<Generator> = groups[1..].concat();
    let bs_from = |hi: u32| -> Vec<Generator> {
        if hi < r {
            Vec::new()
        } else {
            (r..=hi).rev().map(|k| p(B, k)).collect()
        }
    };
    let b_low = if q == 0 { Vec::new() } else { bs_from(q - 1) };

    let mut raised = vec![p(C, q + 1)];
    for k in (r..=q).rev() {
        raised.extend([p(B, k), p(Pi, k + 1), n(A, k)]);
    }
    let mut c0 = vec![p(C, q + 1)];
    c0.extend(bs_from(q));
    c0.extend(g_all.iter().copied());
    let mut out = chain(
        &format!("C_r raised to C_(q+1) q={q} r={r}"),
        &[raw(vec![p(C, r)]), raw(raised), raw(c0)],
    );

    let mut m1 = vec![p(PiBar, q), p(C, q + 1)];
    m1.extend(bs_from(q));
    m1.extend(g_all.iter().copied());
    let mut m2 = vec![p(B, q), p(PiBar, q + 1), p(Pi, q)];
    m2.extend(bs_from(q));
    m2.extend(g_all.iter().copied());
    let mut m3 = vec![
        p(B, q),
        p(PiBar, q + 1),
        p(B, q + 1),
        p(Pi, q),
        p(Pi, q + 1),
    ];
    m3.extend(b_low.iter().copied());
    m3.extend(g_all.iter().copied());
    let mut m4 = vec![p(B, q), p(PiBar, q + 1), p(B, q + 1)];
    m4.extend(b_low.iter().copied());
    m4.extend([p(Pi, top), p(Pi, top + 1)]);
    m4.extend(g_all.iter().copied());
    let mut m5 = vec![p(B, q), p(PiBar, q + 1), p(B, q + 1)];
    m5.extend(b_low.iter().copied());
    m5.extend([p(Pi, top), n(A, top)]);
    m5.extend(g_rest.iter().copied());
    let mut m6 = vec![p(B, q), p(C, q + 2), p(Pi, q + 1), p(PiBar, q + 2)];
    m6.extend(b_low.iter().copied());
    m6.extend([p(Pi, top), n(A, top)]);
    m6.extend(g_rest.iter().copied());
    let m0 = vec![p(PiBar, q), p(C, r)];
    out.extend(chain(
        &format!("pibar_q C_r q={q} r={r}"),
        &[
            raw(m0),
            raw(m1),
            raw(m2),
            raw(m3),
            raw(m4),
            raw(m5),
            raw(m6),
            pibar_c_low_witness(q, r),
        ],
    ));
    out
}

/// The last line of the chain for `pibar_q C_r`, `r <= q`:
/// `B_q..B_r C_{2q-r+2} pi_{2q-r+1} pibar_{2q-r+2} pi_{2q-r} A_{2q-r}^-1`
/// followed by `(pi_{2q-r-1} A_{2q-r-2}^-1) .. (pi_{r+1} A_r^-1)`.
fn pibar_c_low_witness(q: u32, r: u32) -> Word {
    use Kind::*;
    let top = 2 * q - r;
    let mut w: Vec<Generator> = (r..=q).rev().map(|k| p(B, k)).collect();
    w.extend([
        p(C, top + 2),
        p(Pi, top + 1),
        p(PiBar, top + 2),
        p(Pi, top),
        n(A, top),
    ]);
    for k in 1..=q - r {
        w.extend([p(Pi, top + 1 - 2 * k), n(A, top - 2 * k)]);
    }
    raw(w)
}

/// A pattern over letter classes: `w(A,p,B^-1)` matches any word in those
/// letters and a bare letter such as `P` or `C^-1` matches exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    text: String,
    segments: Vec<(Vec<(Kind, Sign)>, bool)>,
}

impl Shape {
    pub fn parse(text: &str) -> Shape {
        let mut segments = Vec::new();
        let mut rest = text.trim();
        let letter = |t: &str| -> (Kind, Sign) {
            let (sym, sign) = match t.strip_suffix("^-1") {
                Some(s) => (s, Sign::Negative),
                None => (t, Sign::Positive),
            };
            let kind =
                Kind::from_symbol(sym.chars().next().expect("letter")).expect("known letter");
            (kind, sign)
        };
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("w(") {
                let close = r.find(')').expect("closed w(");
                let set = r[..close].split(',').map(|t| letter(t.trim())).collect();
                segments.push((set, true));
                rest = r[close + 1..].trim_start();
            } else {
                let end = rest.find(' ').unwrap_or(rest.len());
                segments.push((vec![letter(&rest[..end])], false));
                rest = rest[end..].trim_start();
            }
        }
        Shape {
            text: text.to_string(),
            segments,
        }
    }

    pub fn matches(&self, word: &Word) -> bool {
        fn go(segs: &[(Vec<(Kind, Sign)>, bool)], letters: &[Generator]) -> bool {
            let Some(((set, star), rest)) = segs.split_first() else {
                return letters.is_empty();
            };
            let fits = |g: &Generator| {
                set.iter()
                    .any(|&(k, s)| k == g.kind && (s == g.sign || k.is_involution()))
            };
            if *star {
                let mut k = 0;
                loop {
                    if go(rest, &letters[k..]) {
                        return true;
                    }
                    if k < letters.len() && fits(&letters[k]) {
                        k += 1;
                    } else {
                        return false;
                    }
                }
            } else {
                letters.first().is_some_and(fits) && go(rest, &letters[1..])
            }
        }
        go(&self.segments, &word.letters)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A schematic interchange claim: `word` equals some word of the given
/// shape. `witness`, when present, is an explicit word of that shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeClaim {
    pub word: Word,
    pub shape: Shape,
    pub witness: Option<Word>,
}

/// Schematic interchange claims for all subscripts up to `bound`, each
/// with the shape selected by the condition on its subscripts.
pub fn shape_claims(bound: u32) -> Vec<ShapeClaim> {
    use Kind::*;
    let mut out = Vec::new();
    fn add(out: &mut Vec<ShapeClaim>, w: Vec<Generator>, shape: &str) {
        out.push(ShapeClaim {
            word: raw(w),
            shape: Shape::parse(shape),
            witness: None,
        })
    }
    for q in 0..=bound {
        for r in 0..=bound {
            // Moving A to the left.
            add(
                &mut out,
                vec![n(A, q), p(A, r)],
                if r == q { "" } else { "A A^-1" },
            );
            add(
                &mut out,
                vec![n(B, q), p(A, r)],
                if r == q { "w(A) p w(B^-1)" } else { "A B^-1" },
            );
            add(
                &mut out,
                vec![n(C, q), p(A, r)],
                if r < q { "A C^-1" } else { "w(A,p,B^-1) C^-1" },
            );
            add(&mut out, vec![p(Pi, q), p(A, r)], "A w(p)");
            add(
                &mut out,
                vec![p(PiBar, q), p(A, r)],
                match r.cmp(&q) {
                    std::cmp::Ordering::Less => "A P",
                    std::cmp::Ordering::Equal => "p P",
                    std::cmp::Ordering::Greater => "w(A) P w(p)",
                },
            );
            // Moving B to the left.
            add(
                &mut out,
                vec![n(A, q), p(B, r)],
                if r == q { "w(B) p w(A^-1)" } else { "B A^-1" },
            );
            add(
                &mut out,
                vec![n(B, q), p(B, r)],
                if r == q { "" } else { "B B^-1" },
            );
            add(
                &mut out,
                vec![n(C, q), p(B, r)],
                if r < q { "B C^-1" } else { "w(A,p,B^-1) C^-1" },
            );
            add(&mut out, vec![p(Pi, q), p(B, r)], "B w(p)");
            add(
                &mut out,
                vec![p(PiBar, q), p(B, r)],
                match r.cmp(&q) {
                    std::cmp::Ordering::Less => "B P",
                    std::cmp::Ordering::Equal => "C p P",
                    std::cmp::Ordering::Greater => "w(A) B P w(p)",
                },
            );
            // Moving C to the left.
            add(
                &mut out,
                vec![n(A, q), p(C, r)],
                if q < r { "C A^-1" } else { "C w(A^-1,p,B)" },
            );
            add(
                &mut out,
                vec![n(B, q), p(C, r)],
                if q < r { "C B^-1" } else { "C w(A^-1,p,B)" },
            );
            add(
                &mut out,
                vec![n(C, q), p(C, r)],
                match r.cmp(&q) {
                    std::cmp::Ordering::Less => "w(A^-1,p,B)",
                    std::cmp::Ordering::Equal => "",
                    std::cmp::Ordering::Greater => "w(A,p,B^-1)",
                },
            );
            add(
                &mut out,
                vec![p(Pi, q), p(C, r)],
                if r > q + 1 { "C p" } else { "C w(A^-1,p,B)" },
            );
            add(
                &mut out,
                vec![p(PiBar, q), p(C, r)],
                if r == q + 1 {
                    "B P p"
                } else if r > q + 1 {
                    "w(A) B P w(p)"
                } else {
                    "w(B) C p P w(p,A^-1)"
                },
            );
            if r <= q {
                out.last_mut().expect("just pushed").witness = Some(pibar_c_low_witness(q, r));
            }
        }
    }
    out
}

/// The outcome of one shape claim. The claim holds when the canonical word
/// has the shape, or when the witness has the shape and evaluates to the
/// same element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeCheck {
    pub word: String,
    pub shape: String,
    pub canonical: String,
    pub canonical_matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub holds: bool,
}

pub fn check_shape(claim: &ShapeClaim) -> ShapeCheck {
    let value = eval_word(&claim.word);
    let canonical = value.as_ref().map_err(|e| e.to_string()).and_then(|f| {
        canonical_form(f)
            .map(|c| c.to_word())
            .map_err(|e| e.to_string())
    });
    let (canonical, canonical_matches) = match canonical {
        Ok(c) => (c.to_string(), claim.shape.matches(&c)),
        Err(e) => (format!("<{e}>"), false),
    };
    let witness_holds = |w: &Word| {
        claim.shape.matches(w)
            && match (&value, eval_word(w)) {
                (Ok(f), Ok(g)) => in_two_v(&g) && f.equals(&g).unwrap_or(false),
                _ => false,
            }
    };
    let holds = canonical_matches || claim.witness.as_ref().is_some_and(witness_holds);
    ShapeCheck {
        word: claim.word.to_string(),
        shape: claim.shape.to_string(),
        canonical,
        canonical_matches,
        witness: claim.witness.as_ref().map(Word::to_string),
        holds,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivationReport {
    pub identities: TableReport,
    pub shapes_total: usize,
    pub shape_failures: Vec<ShapeCheck>,
    pub passed: bool,
}

/// Exact identities checked semantically and schematic claims checked as
/// shapes of canonical words, for subscripts up to `bound`.
pub fn verify_derivations(bound: u32) -> DerivationReport {
    let identities = verify_table(
        "derived identities",
        &derivation_identities(bound),
        Evaluator::TwoV,
    );
    let claims = shape_claims(bound);
    let shape_failures: Vec<ShapeCheck> = claims
        .iter()
        .map(check_shape)
        .filter(|c| !c.holds)
        .collect();
    let passed = identities.passed && shape_failures.is_empty();
    DerivationReport {
        identities,
        shapes_total: claims.len(),
        shape_failures,
        passed,
    }
}

// ---------------------------------------------------------------------------
// Rewriting.

/// Termination and local confluence of `x_j y_i -> y_i x_{j+1}` (`i < j`)
/// over all `v`/`h` words up to the given length and subscript.
#[derive(Debug, Clone, Serialize)]
pub struct RewritingReport {
    pub length_bound: usize,
    pub index_bound: u32,
    pub words: usize,
    pub steps: usize,
    /// Steps where the subscript sequence did not decrease
    /// lexicographically.
    pub measure_violations: usize,
    /// Steps where the number of inverted subscript pairs did not
    /// decrease. Informational: this count is not a termination measure.
    pub inversion_count_non_decreasing: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inversion_count_witness: Option<(String, String)>,
    pub critical_pairs: usize,
    pub max_join_steps: usize,
    pub confluence_failures: Vec<(String, String, String)>,
    /// Words with more than one irreducible descendant, or whose unique one
    /// differs from the leftmost strategy.
    pub normal_form_failures: Vec<String>,
    pub passed: bool,
}

fn inversions(w: &Word) -> usize {
    let l = &w.letters;
    (0..l.len())
        .flat_map(|a| (a + 1..l.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| l[a].index > l[b].index)
        .count()
}

fn index_sequence(w: &Word) -> Vec<u32> {
    w.letters.iter().map(|g| g.index).collect()
}

/// Words reachable from `w` in at most `steps` rewrites.
fn within(w: &Word, steps: usize) -> BTreeSet<Word> {
    let mut seen = BTreeSet::from([w.clone()]);
    let mut frontier = vec![w.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for x in &frontier {
            for y in rewrite_successors(x) {
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Smallest `k <= limit` with the two `k`-step neighborhoods meeting.
fn join_steps(a: &Word, b: &Word, limit: usize) -> Option<usize> {
    (0..=limit).find(|&k| !within(a, k).is_disjoint(&within(b, k)))
}

/// All `v`/`h` words with `len` letters and subscripts at most `max_index`.
pub fn all_vh_words(len: usize, max_index: u32) -> Vec<Word> {
    let mut out = vec![Word::empty(Alphabet::Pi)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 2 * (max_index as usize + 1));
        for w in &out {
            for i in 0..=max_index {
                for kind in [Kind::V, Kind::H] {
                    let mut x = w.clone();
                    x.push(Generator::new(kind, i));
                    next.push(x);
                }
            }
        }
        out = next;
    }
    out
}

pub fn check_rewriting(length_bound: usize, index_bound: u32) -> RewritingReport {
    let mut report = RewritingReport {
        length_bound,
        index_bound,
        words: 0,
        steps: 0,
        measure_violations: 0,
        inversion_count_non_decreasing: 0,
        inversion_count_witness: None,
        critical_pairs: 0,
        max_join_steps: 0,
        confluence_failures: Vec::new(),
        normal_form_failures: Vec::new(),
        passed: false,
    };
    let mut normal_forms: HashMap<Word, Option<Word>> = HashMap::new();
    for len in 0..=length_bound {
        for w in all_vh_words(len, index_bound) {
            report.words += 1;
            let succ = rewrite_successors(&w);
            for s in &succ {
                report.steps += 1;
                if index_sequence(s) >= index_sequence(&w) {
                    report.measure_violations += 1;
                }
                if inversions(s) >= inversions(&w) {
                    report.inversion_count_non_decreasing += 1;
                    report
                        .inversion_count_witness
                        .get_or_insert_with(|| (w.to_string(), s.to_string()));
                }
            }
            for a in 0..succ.len() {
                for b in a + 1..succ.len() {
                    report.critical_pairs += 1;
                    match join_steps(&succ[a], &succ[b], 2) {
                        Some(k) => report.max_join_steps = report.max_join_steps.max(k),
                        None => report.confluence_failures.push((
                            w.to_string(),
                            succ[a].to_string(),
                            succ[b].to_string(),
                        )),
                    }
                }
            }
            let nf = unique_normal_form(&w, &mut normal_forms);
            if nf.as_ref() != Some(&rewrite_sorted(&w)) {
                report.normal_form_failures.push(w.to_string());
            }
        }
    }
    report.passed = report.measure_violations == 0
        && report.confluence_failures.is_empty()
        && report.normal_form_failures.is_empty();
    report
}

/// The irreducible descendant of `w` if every rewriting path ends at the
/// same one.
fn unique_normal_form(w: &Word, memo: &mut HashMap<Word, Option<Word>>) -> Option<Word> {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let succ = rewrite_successors(w);
    let result = if succ.is_empty() {
        Some(w.clone())
    } else {
        let forms: Vec<Option<Word>> = succ.iter().map(|s| unique_normal_form(s, memo)).collect();
        let first = forms[0].clone();
        if first.is_some() && forms.iter().all(|f| *f == first) {
            first
        } else {
            None
        }
    };
    memo.insert(w.clone(), result.clone());
    result
}

// ---------------------------------------------------------------------------
// Combined report.

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub bound: u32,
    pub tables: Vec<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrections: Option<Vec<Correction>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub typography: Option<Vec<Correction>>,
    pub passed: bool,
}

/// Verifies the selected tables, or every table plus the homomorphism and
/// derivation checks when `family` is `None`.
pub fn verify(family: Option<FamilyId>, bound: u32) -> VerificationReport {
    let ids = match family {
        Some(id) => vec![id],
        None => FamilyId::all(),
    };
    let mut tables: Vec<TableReport> = ids
        .iter()
        .flat_map(|&id| verify_family(id, bound))
        .collect();
    let finite = ids
        .iter()
        .any(|id| matches!(id, FamilyId::Finite40 | FamilyId::Finite30));
    let (corrections, typography) = if finite {
        let lists = finite_lists();
        let keep = |c: &Correction| ids.iter().any(|id| c.list.starts_with(&id.to_string()));
        (
            Some(lists.corrections.into_iter().filter(keep).collect()),
            Some(lists.typography.into_iter().filter(keep).collect()),
        )
    } else {
        (None, None)
    };
    if family.is_none() {
        tables.push(homomorphism_check(bound));
        let d = verify_derivations(bound);
        tables.push(d.identities.clone());
        tables.push(TableReport {
            name: "interchange shapes".into(),
            evaluator: Evaluator::TwoV,
            total: d.shapes_total,
            failed: d.shape_failures.len(),
            passed: d.shape_failures.is_empty(),
            failures: d
                .shape_failures
                .iter()
                .map(|s| RelationCheck {
                    label: format!("{} ~ {}", s.word, s.shape),
                    relation: s.canonical.clone(),
                    holds: false,
                    canonical: None,
                    error: None,
                })
                .collect(),
        });
    }
    let passed = tables.iter().all(|t| t.passed);
    VerificationReport {
        bound,
        tables,
        corrections,
        typography,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{pi, tv};

    #[test]
    fn family_examples() {
        let five = instantiate_family(FamilyId::Numbered(5), 6);
        assert!(five
            .iter()
            .any(|r| r.lhs == pi("s2 s0") && r.rhs == pi("s0 s2")));
        let seven = Instance::new(7, Some(Kind::V), None, 3, 3).relation();
        assert_eq!((seven.lhs, seven.rhs), (pi("s3 v3"), pi("v4 s3 s4")));
        let nineteen = Instance::new(19, None, None, 2, 0).relation();
        assert_eq!((nineteen.lhs, nineteen.rhs), (tv("p0 C2"), tv("C2 p0")));
    }

    #[test]
    fn side_conditions_respected() {
        for inst in family_instances(13, 6) {
            assert!(inst.a > inst.b + 1);
        }
        for inst in family_instances(23, 6) {
            assert!(inst.b >= inst.a + 2);
        }
        assert_eq!(family_instances(3, 6).len(), 4 * 21);
    }

    #[test]
    fn printed_notation() {
        let r = parse_printed("\\sigma_1h_1=h_2\\sigma_1\\sigma_2", Alphabet::Pi).unwrap();
        assert_eq!(r.relation.lhs, pi("s1 h1"));
        assert_eq!(r.relation.rhs, pi("h2 s1 s2"));
        assert!(r.typography.is_empty());
        let sq = parse_printed("\\overline{\\pi}_0^2=1", Alphabet::TwoV).unwrap();
        assert_eq!(sq.relation.lhs, tv("P0 P0"));
        assert!(sq.relation.rhs.is_empty());
        let slip = parse_printed("v_0h_1h_0 =h_0v_1v_0\\sigma1", Alphabet::Pi).unwrap();
        assert_eq!(slip.relation.rhs, pi("h0 v1 v0 s1"));
        assert_eq!(slip.typography.len(), 1);
        assert!(parse_printed(
            "\\overline{\\pi}_!B_0=B_0\\overline{\\pi}_2",
            Alphabet::TwoV
        )
        .is_err());
        assert_eq!(
            parse_printed("C_{12}A_1^{-1}=1", Alphabet::TwoV)
                .unwrap()
                .relation
                .lhs,
            tv("C12 A1^-1")
        );
    }

    #[test]
    fn expansion_reaches_base_subscripts() {
        let w = expand_to_base(&tv("C3 P4^-1 A2"));
        assert!(w.max_index().unwrap() <= 1);
        assert!(eval_word(&w)
            .unwrap()
            .equals(&eval_word(&tv("C3 P4 A2")).unwrap())
            .unwrap());
    }

    #[test]
    fn corrupted_pair_fails() {
        let bad = Relation::new("corrupted", pi("s0 v2"), pi("v3 s0"));
        assert!(!Evaluator::Pi.check(&bad).holds);
        assert!(Evaluator::Pi.check(&bad).canonical.is_some());
        assert!(!Evaluator::TwoVHat.check(&bad).holds);
    }

    #[test]
    fn small_families_hold() {
        for id in [3, 7, 8] {
            for t in verify_family(FamilyId::Numbered(id), 3) {
                assert!(t.passed, "{:?}", t.failures);
            }
        }
        for id in [16, 18, 20] {
            for t in verify_family(FamilyId::Numbered(id), 2) {
                assert!(t.passed, "{:?}", t.failures);
            }
        }
    }

    #[test]
    fn shapes_match_words() {
        let s = Shape::parse("w(A) P w(p)");
        assert!(s.matches(&tv("A0 A1 P2 p1 p0")));
        assert!(s.matches(&tv("P2")));
        assert!(!s.matches(&tv("p0 P2")));
        assert!(Shape::parse("").matches(&Word::empty(Alphabet::TwoV)));
        assert!(Shape::parse("A C^-1").matches(&tv("A2 C4^-1")));
    }

    #[test]
    fn raising_identities() {
        let r = Relation::new("", tv("C0"), tv("C1 B0 p1 A0^-1"));
        assert!(Evaluator::TwoV.check(&r).holds);
        let r = Relation::new("", tv("P0 A0"), tv("p0 P1"));
        assert!(Evaluator::TwoV.check(&r).holds);
    }

    #[test]
    fn shape_claims_hold() {
        let d = verify_derivations(2);
        assert!(
            d.passed,
            "{:?} {:?}",
            d.identities.failures, d.shape_failures
        );
        let claim = ShapeClaim {
            word: tv("P1 A3"),
            shape: Shape::parse("w(A) P w(p)"),
            witness: None,
        };
        assert!(check_shape(&claim).canonical_matches);
    }

    #[test]
    fn rewriting_small() {
        let r = check_rewriting(3, 3);
        assert!(r.passed, "{r:?}");
        assert!(r.max_join_steps <= 2);
        let w = pi("h3 v2 v1");
        let mut memo = HashMap::new();
        assert_eq!(unique_normal_form(&w, &mut memo), Some(rewrite_sorted(&w)));
        assert!(rewrite_successors(&pi("v0 h1 v1 h4")).is_empty());
    }

    #[test]
    fn family_ids_round_trip() {
        for id in FamilyId::all() {
            assert_eq!(id.to_string().parse::<FamilyId>().unwrap(), id);
        }
        assert!("9".parse::<FamilyId>().is_err());
    }
}
