//! Seeded random words and relation-driven rewriting, for randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fractions::FractionPair;
use crate::pattern::NumberedPattern;
use crate::pi_monoid::canonical_word;
use crate::presentations::{
    instantiate_family, Evaluator, FamilyId, Relation, RelationCheck, TableReport,
};
use crate::two_v;
use crate::words::{Alphabet, Generator, Kind, Word};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive word over `v, h, s` with length in `0..=max_len`.
pub fn random_pi_word(rng: &mut SampleRng, max_len: usize, max_index: u32) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let kind = *[Kind::V, Kind::H, Kind::Sigma]
                .choose(rng)
                .expect("nonempty");
            Generator::new(kind, rng.gen_range(0..=max_index))
        })
        .collect();
    Word::from_letters(Alphabet::Pi, letters)
}

/// A group word over `v, h, s` and inverses.
pub fn random_pi_group_word(rng: &mut SampleRng, max_len: usize, max_index: u32) -> Word {
    let w = random_pi_word(rng, max_len, max_index);
    let letters = w
        .letters
        .into_iter()
        .map(|g| if rng.gen_bool(0.5) { g } else { g.inverse() })
        .collect();
    Word::from_letters(Alphabet::Pi, letters)
}

/// A group word over `A, B, C, pi, pibar` and inverses.
pub fn random_two_v_word(rng: &mut SampleRng, max_len: usize, max_index: u32) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let kind = *[Kind::A, Kind::B, Kind::C, Kind::Pi, Kind::PiBar]
                .choose(rng)
                .expect("nonempty");
            let g = Generator::new(kind, rng.gen_range(0..=max_index));
            if rng.gen_bool(0.5) {
                g
            } else {
                g.inverse()
            }
        })
        .collect();
    Word::from_letters(Alphabet::TwoV, letters)
}

/// Rewrites a positive `Pi` word with randomly chosen relations of the
/// families 3 to 8, used in either direction, so the result names the same
/// element.
#[derive(Debug, Clone)]
pub struct RelationShuffler {
    rules: Vec<(Vec<Generator>, Vec<Generator>)>,
}

impl RelationShuffler {
    pub fn new(bound: u32) -> Self {
        let relations: Vec<Relation> = FamilyId::PI_FAMILIES
            .iter()
            .flat_map(|&n| instantiate_family(FamilyId::Numbered(n), bound))
            .collect();
        let mut rules = Vec::new();
        for r in relations {
            rules.push((r.lhs.letters.clone(), r.rhs.letters.clone()));
            rules.push((r.rhs.letters, r.lhs.letters));
        }
        RelationShuffler { rules }
    }

    /// Applies up to `steps` random relation moves. Moves that would push a
    /// subscript above `max_index` or the length above `max_len` are skipped.
    pub fn shuffle(
        &self,
        word: &Word,
        steps: usize,
        max_index: u32,
        max_len: usize,
        rng: &mut SampleRng,
    ) -> Word {
        let mut letters = word.letters.clone();
        for _ in 0..steps {
            let mut moves = Vec::new();
            for (k, (from, to)) in self.rules.iter().enumerate() {
                if letters.len() + to.len() > max_len + from.len() {
                    continue;
                }
                if to.iter().any(|g| g.index > max_index) {
                    continue;
                }
                if from.is_empty() {
                    if rng.gen_bool(0.05) {
                        moves.push((k, rng.gen_range(0..=letters.len())));
                    }
                    continue;
                }
                for pos in 0..=letters.len().saturating_sub(from.len()) {
                    if letters.len() >= from.len() && letters[pos..pos + from.len()] == from[..] {
                        moves.push((k, pos));
                    }
                }
            }
            let Some(&(k, pos)) = moves.choose(rng) else {
                break;
            };
            let (from, to) = &self.rules[k];
            letters.splice(pos..pos + from.len(), to.iter().copied());
        }
        Word::from_letters(Alphabet::Pi, letters)
    }
}

/// Seeded spot checks of the normal forms: random positive `Pi` words
/// re-evaluate from their canonical words, and random `2v` words times the
/// inverse of their canonical word are trivial.
pub fn normal_form_spot_checks(samples: usize, seed: u64) -> TableReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    let mut fail = |label: String, relation: String, error: Option<String>| {
        failures.push(RelationCheck {
            label,
            relation,
            holds: false,
            canonical: None,
            error,
        })
    };
    for k in 0..samples {
        let w = random_pi_word(&mut r, 12, 4);
        let p = NumberedPattern::of_word(&w).expect("small words evaluate");
        match canonical_word(&p) {
            Ok(c) if NumberedPattern::of_word(&c).ok().as_ref() == Some(&p) => {}
            Ok(c) => fail(format!("pi sample {k}"), format!("{w} -> {c}"), None),
            Err(e) => fail(format!("pi sample {k}"), w.to_string(), Some(e.to_string())),
        }
        let g = random_pi_group_word(&mut r, 8, 3);
        let ok = FractionPair::of_word(&g)
            .and_then(|f| f.canonical_word().map(|c| (f, c)))
            .and_then(|(f, c)| FractionPair::of_word(&c).and_then(|h| h.equals(&f)));
        if ok != Ok(true) {
            fail(
                format!("2vhat sample {k}"),
                g.to_string(),
                ok.err().map(|e| e.to_string()),
            );
        }
        let t = random_two_v_word(&mut r, 8, 4);
        let ok =
            two_v::canonical_word(&t).and_then(|c| two_v::word_problem(&t.concat(&c.inverse())));
        if ok != Ok(true) {
            fail(
                format!("2v sample {k}"),
                t.to_string(),
                ok.err().map(|e| e.to_string()),
            );
        }
    }
    TableReport {
        name: format!("normal form spot checks (seed {seed})"),
        evaluator: Evaluator::TwoV,
        total: 3 * samples,
        failed: failures.len(),
        passed: failures.is_empty(),
        failures,
    }
}
