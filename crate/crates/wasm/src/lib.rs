//! Browser bindings: draw a pattern, normalize a word, compare two words.
//!
//! The plain functions return `Result<_, String>` so they can be tested on
//! the host; the `#[wasm_bindgen]` wrappers turn errors into exceptions.

use wasm_bindgen::prelude::*;

use twov_core::fractions::FractionPair;
use twov_core::pi_monoid::canonical_word;
use twov_core::render::render_pattern;
use twov_core::two_v;
use twov_core::{Alphabet, NumberedPattern, Word};

fn parse(group: &str, text: &str) -> Result<Word, String> {
    let alphabet = match group {
        "pi" | "2vhat" => Alphabet::Pi,
        "2v" => Alphabet::TwoV,
        other => return Err(format!("unknown group `{other}`")),
    };
    let w = Word::parse(text, alphabet).map_err(|e| e.to_string())?;
    if group == "pi" && !w.is_positive() {
        return Err("the monoid takes positive words only".into());
    }
    Ok(w)
}

pub fn render_word(word: &str, squares: u32) -> Result<String, String> {
    let w = parse("pi", word)?;
    let p = NumberedPattern::of_word(&w).map_err(|e| e.to_string())?;
    Ok(render_pattern(&p, squares.clamp(1, 12)))
}

pub fn normalize_word(group: &str, word: &str) -> Result<String, String> {
    let w = parse(group, word)?;
    let c = match group {
        "pi" => NumberedPattern::of_word(&w)
            .map_err(|e| e.to_string())
            .and_then(|p| canonical_word(&p).map_err(|e| e.to_string()))?,
        "2vhat" => FractionPair::of_word(&w)
            .and_then(|f| f.canonical_word())
            .map_err(|e| e.to_string())?,
        _ => two_v::canonical_word(&w).map_err(|e| e.to_string())?,
    };
    Ok(c.to_string())
}

pub fn equal_words(group: &str, left: &str, right: &str) -> Result<bool, String> {
    let (l, r) = (parse(group, left)?, parse(group, right)?);
    if group == "pi" {
        let p = |w: &Word| NumberedPattern::of_word(w).map_err(|e| e.to_string());
        return Ok(p(&l)? == p(&r)?);
    }
    let eval = |w: &Word| match group {
        "2v" => two_v::eval_word(w).map_err(|e| e.to_string()),
        _ => FractionPair::of_word(w).map_err(|e| e.to_string()),
    };
    eval(&l)?.equals(&eval(&r)?).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn render(word: &str, squares: u32) -> Result<String, JsError> {
    render_word(word, squares).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn normalize(group: &str, word: &str) -> Result<String, JsError> {
    normalize_word(group, word).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn equal(group: &str, left: &str, right: &str) -> Result<bool, JsError> {
    equal_words(group, left, right).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operations() {
        assert_eq!(normalize_word("pi", "h2 v1").unwrap(), "v1 h3");
        assert!(equal_words("2v", "P0 A0", "p0 P1").unwrap());
        assert!(!equal_words("pi", "v0", "h0").unwrap());
        assert!(render_word("v0 h1 h0", 2).unwrap().starts_with("<?xml"));
        assert!(normalize_word("pi", "v0^-1").is_err());
        assert!(normalize_word("3v", "v0").is_err());
    }
}
