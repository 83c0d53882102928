//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Build with `cargo test -p twov-core --test acceptance`.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use twov_core::forest::{
    normalize_by_relations, normalized_forest_of_pattern, NumberedForest, Tree,
};
use twov_core::fractions::{psi, psi_inverse, FractionPair};
use twov_core::pi_monoid::{canonical_word, lclm_report, SearchWindow};
use twov_core::presentations::{
    check_rewriting, finite_lists, instantiate_family, verify_family, EntryStatus, FamilyId,
    TableReport,
};
use twov_core::sampling::{random_pi_word, random_two_v_word, rng, RelationShuffler};
use twov_core::two_v::{
    self, conjugated_transposition, primary_tree, tree_from_l, trunk_length, LTree,
};
use twov_core::{Alphabet, Generator, Kind, NumberedPattern, Word};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn tables_outcome(tables: &[TableReport]) -> Outcome {
    let total: usize = tables.iter().map(|t| t.total).sum();
    let failed: usize = tables.iter().map(|t| t.failed).sum();
    let mut detail = format!(
        "{} tables, {total} relations, {failed} failures",
        tables.len()
    );
    for f in tables.iter().flat_map(|t| &t.failures).take(5) {
        detail.push_str(&format!("; {}: {}", f.label, f.relation));
    }
    outcome(failed == 0 && total > 0, detail)
}

fn families_pi() -> Outcome {
    let tables: Vec<TableReport> = FamilyId::PI_FAMILIES
        .iter()
        .flat_map(|&n| verify_family(FamilyId::Numbered(n), 6))
        .collect();
    tables_outcome(&tables)
}

fn families_two_v() -> Outcome {
    let tables: Vec<TableReport> = FamilyId::TWO_V_FAMILIES
        .iter()
        .flat_map(|&n| verify_family(FamilyId::Numbered(n), 6))
        .collect();
    tables_outcome(&tables)
}

fn finite_presentations() -> Outcome {
    let lists = finite_lists();
    let corrected: Vec<&str> = lists
        .corrections
        .iter()
        .map(|c| c.printed.as_str())
        .collect();
    let expected_corrections = corrected.len() == 2
        && corrected.iter().any(|p| p.contains(r"\overline{\pi}_!B_0"))
        && corrected.iter().any(|p| p.contains("C_1A_1=A_1C_4"));
    let typography_ok = !lists.typography.is_empty()
        && lists
            .typography
            .iter()
            .all(|c| c.printed.contains(r"\sigma1") || c.printed.contains(r"\pi1"));
    let unexplained = lists
        .forty
        .iter()
        .chain(&lists.forty_image)
        .chain(&lists.thirty)
        .filter(|e| {
            matches!(
                e.status,
                EntryStatus::Corrected {
                    corrected_holds: false,
                    ..
                }
            )
        })
        .count();
    outcome(
        lists.all_hold() && expected_corrections && typography_ok && unexplained == 0,
        format!(
            "{} + {} image + {} entries; corrections: {}; typography notes: {}; unexplained failures: {unexplained}",
            lists.forty.len(),
            lists.forty_image.len(),
            lists.thirty.len(),
            corrected.join(", "),
            lists.typography.len()
        ),
    )
}

fn rewriting() -> Outcome {
    let r = check_rewriting(5, 4);
    let ok = r.passed
        && r.measure_violations == 0
        && r.confluence_failures.is_empty()
        && r.normal_form_failures.is_empty()
        && r.max_join_steps <= 2;
    outcome(
        ok,
        format!(
            "{} words, {} steps, {} measure violations, {} critical pairs, longest join {}, {} confluence failures",
            r.words,
            r.steps,
            r.measure_violations,
            r.critical_pairs,
            r.max_join_steps,
            r.confluence_failures.len()
        ),
    )
}

fn pi_normal_form() -> Outcome {
    let mut r = rng(SEED);
    let shuffler = RelationShuffler::new(6);
    let (mut failures, mut equal_pairs) = (Vec::new(), 0);
    for k in 0..1000 {
        let w = random_pi_word(&mut r, 12, 4);
        let partner = if k % 2 == 0 {
            shuffler.shuffle(&w, 6, 6, 12, &mut r)
        } else {
            random_pi_word(&mut r, 12, 4)
        };
        let (p, q) = (
            NumberedPattern::of_word(&w).unwrap(),
            NumberedPattern::of_word(&partner).unwrap(),
        );
        let (cp, cq) = (canonical_word(&p).unwrap(), canonical_word(&q).unwrap());
        if (cp == cq) != (p == q) || NumberedPattern::of_word(&cp).unwrap() != p {
            failures.push(format!("{w} / {partner}"));
        }
        equal_pairs += usize::from(p == q);
    }
    outcome(
        failures.is_empty(),
        format!(
            "1000 words, {equal_pairs} equal pairs, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn sigma_free(w: &Word) -> Word {
    let letters = w
        .letters
        .iter()
        .copied()
        .filter(|g| g.kind != Kind::Sigma)
        .collect();
    Word::from_letters(Alphabet::Pi, letters)
}

/// Forest shapes without the trailing trivial trees.
fn trimmed(mut trees: Vec<Tree<()>>) -> Vec<Tree<()>> {
    while trees.last().is_some_and(Tree::is_leaf) {
        trees.pop();
    }
    trees
}

fn forest_uniqueness() -> Outcome {
    let mut r = rng(SEED + 1);
    let shuffler = RelationShuffler::new(6);
    let mut failures = Vec::new();
    for _ in 0..500 {
        let w = random_pi_word(&mut r, 10, 4);
        let p = NumberedPattern::of_word(&w).unwrap();
        let f = normalized_forest_of_pattern(&p).unwrap();
        if !f.is_normalized() || f.to_pattern().unwrap() != p {
            failures.push(format!("{w}: forest does not round-trip"));
            continue;
        }
        let words = [
            w.clone(),
            shuffler.shuffle(&w, 8, 6, 14, &mut r),
            canonical_word(&p).unwrap(),
        ];
        for x in &words {
            let n = normalize_by_relations(x, 10_000).unwrap();
            let g = NumberedForest::of_word(&sigma_free(&n)).unwrap();
            if NumberedPattern::of_word(&n).unwrap() != p
                || !g.is_normalized()
                || trimmed(g.shape()) != trimmed(f.shape())
            {
                failures.push(format!("{w}: {x} normalizes to {n}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "500 patterns, 3 words each, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn trunk_carets(tree: &Tree<()>) -> u32 {
    let mut n = 0;
    let mut cur = tree;
    while let Tree::Node { left, .. } = cur {
        n += 1;
        cur = left;
    }
    n
}

/// Every word `C* w(A, B) w(pi)` in the exhaustive family, visited once.
struct LWords {
    c_sets: Vec<Vec<u32>>,
    ab_words: Vec<Vec<Generator>>,
    pi_words: Vec<Vec<Generator>>,
}

impl LWords {
    fn new(max_c: usize, max_ab: usize, max_pi: usize, max_index: u32) -> Self {
        let mut c_sets = vec![vec![]];
        for mask in 1u32..(1 << (max_index + 1)) {
            if mask.count_ones() as usize <= max_c {
                c_sets.push((0..=max_index).filter(|i| mask & (1 << i) != 0).collect());
            }
        }
        let seqs = |kinds: &[Kind], max_len: usize| {
            let letters: Vec<Generator> = kinds
                .iter()
                .flat_map(|&k| (0..=max_index).map(move |i| Generator::new(k, i)))
                .collect();
            let mut out = vec![vec![]];
            let mut layer: Vec<Vec<Generator>> = vec![vec![]];
            for _ in 0..max_len {
                layer = layer
                    .iter()
                    .flat_map(|w| letters.iter().map(move |&g| [w.as_slice(), &[g]].concat()))
                    .collect();
                out.extend(layer.iter().cloned());
            }
            out
        };
        LWords {
            c_sets,
            ab_words: seqs(&[Kind::A, Kind::B], max_ab),
            pi_words: seqs(&[Kind::Pi], max_pi),
        }
    }
}

/// Evaluates builder outputs `(t v0^pad s.., v0^(k + pad))`, caching the
/// patterns of `t v0^pad` and `v0^n`.
struct BuiltPairs {
    padded: Vec<NumberedPattern>,
    powers: HashMap<u32, NumberedPattern>,
}

impl BuiltPairs {
    fn new(t: &Word) -> Self {
        BuiltPairs {
            padded: vec![NumberedPattern::of_word(t).unwrap()],
            powers: HashMap::new(),
        }
    }

    fn pair(&mut self, built: &LTree) -> FractionPair {
        let v0 = Generator::new(Kind::V, 0);
        while self.padded.len() <= built.pad as usize {
            let next = self.padded.last().unwrap().apply(v0).unwrap();
            self.padded.push(next);
        }
        let range = built
            .sigmas
            .letters
            .iter()
            .fold(self.padded[built.pad as usize].clone(), |p, &g| {
                p.apply(g).unwrap()
            });
        let n = built.k + built.pad;
        let domain = self
            .powers
            .entry(n)
            .or_insert_with(|| {
                NumberedPattern::of_word(&Word::from_letters(Alphabet::Pi, vec![v0; n as usize]))
                    .unwrap()
            })
            .clone();
        FractionPair::new(range, domain)
    }
}

fn tree_from_l_exhaustive() -> Outcome {
    let family = LWords::new(3, 4, 2, 4);
    let pi_pairs: Vec<FractionPair> = family
        .pi_words
        .iter()
        .map(|w| two_v::eval_word(&Word::from_letters(Alphabet::TwoV, w.clone())).unwrap())
        .collect();
    let (mut words, mut failures) = (0usize, Vec::new());
    for cs in &family.c_sets {
        let c_letters: Vec<Generator> = cs.iter().map(|&i| Generator::new(Kind::C, i)).collect();
        for ab in &family.ab_words {
            let head = Word::from_letters(Alphabet::TwoV, [c_letters.as_slice(), ab].concat());
            let head_pair = two_v::eval_word(&head).unwrap();
            let head_tree = tree_from_l(&head).unwrap();
            let carets = trunk_carets(&primary_tree(&head_tree.tree().unwrap()));
            if !head.is_empty() && (carets != trunk_length(&head) || carets != head_tree.trunk) {
                failures.push(format!(
                    "{head}: trunk {carets} vs formula {}",
                    head_tree.trunk
                ));
            }
            let mut pairs = BuiltPairs::new(&head_tree.t);
            for (pis, pi_pair) in family.pi_words.iter().zip(&pi_pairs) {
                let word = head.concat(&Word::from_letters(Alphabet::TwoV, pis.clone()));
                let built = tree_from_l(&word).unwrap();
                let semantic = head_pair.compose(pi_pair).unwrap();
                if built.t != head_tree.t || !pairs.pair(&built).equals(&semantic).unwrap() {
                    failures.push(format!("{word}: builder disagrees with evaluation"));
                }
                words += 1;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{words} words, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn two_v_word_problem() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut failures = Vec::new();
    for _ in 0..500 {
        let w = random_two_v_word(&mut r, 8, 4);
        let c = two_v::canonical_word(&w).unwrap();
        if !two_v::word_problem(&w.concat(&c.inverse())).unwrap() {
            failures.push(format!("{w} -> {c}"));
        }
    }
    let relations: Vec<_> = FamilyId::TWO_V_FAMILIES
        .iter()
        .flat_map(|&n| instantiate_family(FamilyId::Numbered(n), 4))
        .collect();
    let mut equal_pairs = 0;
    for k in 0..200 {
        let a = random_two_v_word(&mut r, 8, 4);
        let b = if k % 2 == 0 {
            let rel = relations.choose(&mut r).unwrap();
            let at = r.gen_range(0..=a.len());
            let mut letters = a.letters[..at].to_vec();
            letters.extend(rel.lhs.letters.iter().copied());
            letters.extend(rel.rhs.inverse().letters);
            letters.extend_from_slice(&a.letters[at..]);
            Word::from_letters(Alphabet::TwoV, letters)
        } else {
            random_two_v_word(&mut r, 8, 4)
        };
        let (f, g) = (two_v::eval_word(&a).unwrap(), two_v::eval_word(&b).unwrap());
        let semantic = f.compose(&g.invert()).unwrap().is_identity();
        let syntactic = two_v::canonical_word(&a).unwrap() == two_v::canonical_word(&b).unwrap();
        if semantic != syntactic {
            failures.push(format!("{a} / {b}"));
        }
        equal_pairs += usize::from(semantic);
    }
    outcome(
        failures.is_empty(),
        format!(
            "500 words, 200 pairs ({equal_pairs} equal), {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn lclm() -> Outcome {
    let report = lclm_report(&SearchWindow::for_surplus(4));
    let identities = report.identities.iter().all(|(_, _, ok)| *ok);
    outcome(
        report.passed && identities && report.below_both.is_empty() && report.least.is_none(),
        format!(
            "{} displayed identities hold: {identities}; {} common left multiples, {} minimal classes, {} below both, least: {}",
            report.identities.len(),
            report.common_left_multiples,
            report.minimal.len(),
            report.below_both.len(),
            report.least.as_deref().unwrap_or("none")
        ),
    )
}

fn translation() -> Outcome {
    let mut failures = Vec::new();
    let mut letters = 0;
    for p in 1..=6u32 {
        for i in 0..p {
            let (g, k) = if i + 1 == p {
                (Generator::new(Kind::PiBar, i), 0)
            } else {
                (Generator::new(Kind::Pi, i), p - 1 - i)
            };
            let lhs = two_v::generator_pair(g).unwrap();
            if !lhs
                .equals(&conjugated_transposition(k, p).unwrap())
                .unwrap()
            {
                failures.push(format!("p = {p}: {g}"));
            }
            letters += 1;
        }
    }
    let mut r = rng(SEED + 3);
    for _ in 0..200 {
        let p = r.gen_range(1..=6u32);
        let len = r.gen_range(0..=8);
        let w = Word::from_letters(
            Alphabet::Pi,
            (0..len)
                .map(|_| Generator::new(Kind::Sigma, r.gen_range(0..p)))
                .collect(),
        );
        let image = psi(&w, p).unwrap();
        let v0 = Generator::new(Kind::V, 0);
        let mut conj = vec![v0; p as usize];
        conj.extend(w.letters.iter().copied());
        conj.extend(vec![v0.inverse(); p as usize]);
        let conj = FractionPair::of_word(&Word::from_letters(Alphabet::Pi, conj)).unwrap();
        if psi_inverse(&image, p).unwrap() != w
            || !two_v::eval_word(&image).unwrap().equals(&conj).unwrap()
        {
            failures.push(format!("p = {p}: {w}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{letters} letters, 200 words, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

/// Name, time limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "relation families (3)-(8) in Pi and 2V-hat, indices <= 6",
            Some(10),
            families_pi,
        ),
        (
            "relation families (10)-(26) in 2V, indices <= 6",
            Some(60),
            families_two_v,
        ),
        (
            "finite presentations with correction report",
            None,
            finite_presentations,
        ),
        (
            "rewriting termination and local confluence",
            None,
            rewriting,
        ),
        ("Pi normal form on 1000 seeded words", None, pi_normal_form),
        (
            "normalized forest uniqueness on 500 seeded patterns",
            None,
            forest_uniqueness,
        ),
        (
            "tree-from-L builder and trunk formula, exhaustive",
            Some(120),
            tree_from_l_exhaustive,
        ),
        ("2V word problem on seeded words", None, two_v_word_problem),
        (
            "no least common left multiple of v0 and h0 s1, surplus <= 4",
            Some(300),
            lclm,
        ),
        ("translation of transpositions, p <= 6", None, translation),
    ];
    let mut all = true;
    for (n, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|s| took <= Duration::from_secs(s));
        let passed = o.passed && in_time;
        all &= passed;
        let budget = limit.map_or(String::new(), |s| format!(", limit {s}s"));
        println!(
            "{} {:>2} {name}: {} ({:.2}s{budget})",
            if passed { "PASS" } else { "FAIL" },
            n + 1,
            o.detail,
            took.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
