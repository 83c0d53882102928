use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use twov_core::fractions::FractionPair;
use twov_core::pi_monoid::{self, lclm_report, SearchWindow};
use twov_core::presentations::{verify, FamilyId, TableReport};
use twov_core::render::render_pattern;
use twov_core::sampling::normal_form_spot_checks;
use twov_core::two_v;
use twov_core::{Alphabet, NumberedPattern, Word};

/// Text output is collected and written once, so a closed pipe downstream
/// is noticed in one place.
macro_rules! out {
    ($buf:expr, $($arg:tt)*) => {{
        let _ = write!($buf, $($arg)*);
    }};
}

macro_rules! outln {
    ($buf:expr) => {
        $buf.push('\n')
    };
    ($buf:expr, $($arg:tt)*) => {{
        let _ = writeln!($buf, $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "twov",
    version,
    about = "Words, normal forms and relation checks for Pi, 2V-hat and 2V"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    /// The monoid of numbered patterns; positive words in v, h, s.
    Pi,
    /// The group of fractions; words in v, h, s and inverses.
    #[value(name = "2vhat")]
    TwoVHat,
    /// Words in A, B, C, p (pi), P (pibar) and inverses.
    #[value(name = "2v")]
    TwoV,
}

impl Group {
    fn alphabet(self) -> Alphabet {
        match self {
            Group::Pi | Group::TwoVHat => Alphabet::Pi,
            Group::TwoV => Alphabet::TwoV,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the pattern (pi) or fraction pair (2vhat, 2v) of a word as JSON.
    Eval {
        #[arg(long, value_enum, default_value = "pi")]
        group: Group,
        word: String,
    },
    /// Print the canonical word of the element a word names.
    Normalize {
        #[arg(long, value_enum, default_value = "pi")]
        group: Group,
        word: String,
    },
    /// Print whether two words name the same element.
    Equal {
        #[arg(long, value_enum, default_value = "pi")]
        group: Group,
        left: String,
        right: String,
    },
    /// Check relation tables; exits with status 1 if any relation fails.
    Verify {
        /// A family number (3-8, 10-26), finite-40, finite-30 or definitional.
        /// All tables plus the derived identities when omitted.
        #[arg(long)]
        family: Option<FamilyId>,
        #[arg(long, env = "BRIN2V_BOUND", default_value_t = 6)]
        bound: u32,
        #[arg(long)]
        json: bool,
        /// Also run this many seeded random normal-form checks.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Search for a least common left multiple of v0 and h0 s1.
    Lclm {
        #[arg(long, default_value_t = 4)]
        surplus: u32,
        #[arg(long)]
        json: bool,
    },
    /// Draw the first squares of a pattern as SVG.
    Render {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        squares: u32,
        /// Read the pattern as JSON from a file, or `-` for stdin.
        #[arg(long, conflicts_with = "word")]
        pattern: Option<PathBuf>,
        /// A positive word in v, h, s.
        #[arg(required_unless_present = "pattern")]
        word: Option<String>,
    },
}

/// Errors in the input rather than in the mathematics.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse(text: &str, group: Group) -> Result<Word, Usage> {
    let w = Word::parse(text, group.alphabet())?;
    if group == Group::Pi && !w.is_positive() {
        return Err(Usage(format!(
            "`{text}` has inverse letters; use --group 2vhat"
        )));
    }
    Ok(w)
}

fn pair(w: &Word, group: Group) -> Result<FractionPair, Usage> {
    Ok(match group {
        Group::TwoV => two_v::eval_word(w)?,
        _ => FractionPair::of_word(w)?,
    })
}

fn canonical(w: &Word, group: Group) -> Result<Word, Usage> {
    Ok(match group {
        Group::Pi => pi_monoid::canonical_word(&NumberedPattern::of_word(w)?)?,
        Group::TwoVHat => FractionPair::of_word(w)?.canonical_word()?,
        Group::TwoV => two_v::canonical_word(w)?,
    })
}

fn print_table(out: &mut String, t: &TableReport) {
    let status = if t.passed { "PASS" } else { "FAIL" };
    outln!(out, 
        "{status} {}: {} relations, {} failed",
        t.name, t.total, t.failed
    );
    for f in &t.failures {
        out!(out, "    {}: {}", f.label, f.relation);
        if let Some((l, r)) = &f.canonical {
            out!(out, "  [{l} vs {r}]");
        }
        if let Some(e) = &f.error {
            out!(out, "  ({e})");
        }
        outln!(out);
    }
}

fn run(cli: Cli, out: &mut String) -> Result<ExitCode, Usage> {
    match cli.command {
        Command::Eval { group, word } => {
            let w = parse(&word, group)?;
            let json = match group {
                Group::Pi => NumberedPattern::of_word(&w)?.to_json(),
                _ => pair(&w, group)?.canonical()?.to_json(),
            };
            outln!(out, "{}", serde_json::to_string_pretty(&json)?);
        }
        Command::Normalize { group, word } => {
            outln!(out, "{}", canonical(&parse(&word, group)?, group)?);
        }
        Command::Equal { group, left, right } => {
            let (l, r) = (parse(&left, group)?, parse(&right, group)?);
            let same = match group {
                Group::Pi => NumberedPattern::of_word(&l)? == NumberedPattern::of_word(&r)?,
                _ => pair(&l, group)?.equals(&pair(&r, group)?)?,
            };
            outln!(out, "{same}");
        }
        Command::Verify {
            family,
            bound,
            json,
            samples,
            seed,
        } => {
            let mut report = verify(family, bound);
            if samples > 0 {
                report.tables.push(normal_form_spot_checks(samples, seed));
                report.passed = report.tables.iter().all(|t| t.passed);
            }
            if json {
                outln!(out, "{}", serde_json::to_string_pretty(&report)?);
            } else {
                for t in &report.tables {
                    print_table(out, t);
                }
                for c in report.typography.iter().flatten() {
                    outln!(out, 
                        "typography {}: {} ({}) read as {}",
                        c.list, c.printed, c.reason, c.replacement
                    );
                }
                for c in report.corrections.iter().flatten() {
                    outln!(out, 
                        "corrected {}: {} ({}) replaced by {}",
                        c.list, c.printed, c.reason, c.replacement
                    );
                }
                outln!(out, 
                    "{}",
                    if report.passed {
                        "all relations hold"
                    } else {
                        "some relations failed"
                    }
                );
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Lclm { surplus, json } => {
            let report = lclm_report(&SearchWindow::for_surplus(surplus));
            if json {
                outln!(out, "{}", serde_json::to_string_pretty(&report)?);
            } else {
                outln!(out, "Y = {}, Z = {}", report.y, report.z);
                for (a, b, ok) in &report.identities {
                    outln!(out, "{a} = {b}: {}", if *ok { "holds" } else { "FAILS" });
                }
                let w = report.window;
                outln!(out, 
                    "window: surplus <= {}, subscripts <= {}, renumbering of 0..{}",
                    w.surplus, w.max_index, w.perm_points
                );
                outln!(out, "common left multiples: {}", report.common_left_multiples);
                outln!(out, "minimal classes: {}", report.minimal.len());
                for m in &report.minimal {
                    outln!(out, "    {m}");
                }
                outln!(out, 
                    "multiples below both displayed ones: {}",
                    report.below_both.len()
                );
                match &report.least {
                    Some(l) => outln!(out, "least common left multiple: {l}"),
                    None => outln!(out, "no least common left multiple in the window"),
                }
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render {
            squares,
            pattern,
            word,
        } => {
            let p = match (pattern, word) {
                (Some(path), _) => {
                    let text = if path.as_os_str() == "-" {
                        let mut s = String::new();
                        io::stdin().read_to_string(&mut s)?;
                        s
                    } else {
                        fs::read_to_string(&path)?
                    };
                    NumberedPattern::from_json(&serde_json::from_str::<Value>(&text)?)?
                }
                (None, Some(w)) => NumberedPattern::of_word(&parse(&w, Group::Pi)?)?,
                (None, None) => return Err(Usage("give a word or --pattern".into())),
            };
            out!(out, "{}", render_pattern(&p, squares));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let mut out = String::new();
    let code = match run(Cli::parse(), &mut out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    };
    let mut stdout = io::stdout().lock();
    match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => code,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
