//! Symbolic structural patterns of strings.
//!
//! Tokenization collapses each maximal run of digits into `<d>+` and each
//! maximal run of alphabetic characters into `<a>+`, copying every other
//! character (separators, punctuation, spaces) verbatim:
//!
//! ```
//! use copra::tokenize::tokenize;
//!
//! assert_eq!(
//!     tokenize("99 Beacon Rd, Port Melbourne, VIC 3207, Australia").as_str(),
//!     "<d>+ <a>+ <a>+, <a>+ <a>+, <a>+ <d>+, <a>+"
//! );
//! ```
//!
//! Two values with the same pattern have the same structure, so a
//! transformation program discovered from one of them is a strong candidate
//! for the other; the pipeline groups transformation examples by pattern on
//! that basis.

use crate::extract::TransformationExample;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DIGIT_TOKEN: &str = "<d>+";
pub const ALPHA_TOKEN: &str = "<a>+";

/// Separator between per-input patterns in a multi-input group key. The unit
/// separator is unprintable and can never occur inside a pattern.
pub const PATTERN_JOIN: char = '\u{1F}';

/// Symbolic structural representation of a string: `<d>+` and `<a>+` tokens
/// with literal separator characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TokenPattern(String);

impl TokenPattern {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Number of symbols: each token counts as one, separators count per
    /// character. Never exceeds the character count of the source string.
    pub fn symbol_count(&self) -> usize {
        let mut rest = self.0.as_str();
        let mut count = 0;
        while !rest.is_empty() {
            if let Some(stripped) = rest.strip_prefix(DIGIT_TOKEN) {
                rest = stripped;
            } else if let Some(stripped) = rest.strip_prefix(ALPHA_TOKEN) {
                rest = stripped;
            } else {
                let c = rest.chars().next().expect("rest is non-empty");
                rest = &rest[c.len_utf8()..];
            }
            count += 1;
        }
        count
    }
}

impl fmt::Display for TokenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(PartialEq, Clone, Copy)]
enum CharClass {
    Digit,
    Alpha,
    Separator,
}

fn classify(c: char) -> CharClass {
    if c.is_numeric() {
        CharClass::Digit
    } else if c.is_alphabetic() {
        CharClass::Alpha
    } else {
        CharClass::Separator
    }
}

/// Computes the structural pattern of a string in one left-to-right pass.
pub fn tokenize(value: &str) -> TokenPattern {
    let mut pattern = String::with_capacity(value.len());
    let mut run: Option<CharClass> = None;
    for c in value.chars() {
        let class = classify(c);
        match class {
            CharClass::Separator => {
                pattern.push(c);
                run = None;
            }
            CharClass::Digit | CharClass::Alpha => {
                if run != Some(class) {
                    pattern.push_str(if class == CharClass::Digit {
                        DIGIT_TOKEN
                    } else {
                        ALPHA_TOKEN
                    });
                    run = Some(class);
                }
            }
        }
    }
    TokenPattern(pattern)
}

/// Group key for an example: the per-input patterns joined with
/// [`PATTERN_JOIN`], order-sensitive.
pub fn tokenize_inputs(example: &TransformationExample) -> String {
    let mut key = String::new();
    for (i, (_, value)) in example.inputs.iter().enumerate() {
        if i > 0 {
            key.push(PATTERN_JOIN);
        }
        key.push_str(tokenize(value).as_str());
    }
    key
}
