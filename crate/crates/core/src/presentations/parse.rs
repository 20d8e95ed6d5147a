//! Text format:
//!
//! ```text
//! # comment
//! gens: a b
//! rel: abAB
//! oracle: abelian          # before any periph line: ambient oracle
//! periph: A : a
//! oracle: abelian          # after a periph line: that peripheral's oracle
//! ```

use std::fmt;

use thiserror::Error;

use super::oracle::WordOracle;
use super::presentation::{Peripheral, Presentation, PresentationError, RelativePresentation};
use super::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    MissingGenerators,
    RepeatedGenerators,
    InvalidGeneratorName(String),
    UnknownLetter(char),
    EmptyWord,
    BadOracle(String),
    MalformedPeripheral,
    Invalid(PresentationError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            ParseErrorKind::MissingGenerators => write!(f, "missing `gens:` line"),
            ParseErrorKind::RepeatedGenerators => write!(f, "`gens:` given more than once"),
            ParseErrorKind::InvalidGeneratorName(n) => {
                write!(f, "generator `{n}` must be a single lowercase ASCII letter")
            }
            ParseErrorKind::UnknownLetter(c) => write!(f, "letter `{c}` is not a declared generator"),
            ParseErrorKind::EmptyWord => write!(f, "empty relator after reduction"),
            ParseErrorKind::BadOracle(o) => write!(f, "unknown oracle `{o}`"),
            ParseErrorKind::MalformedPeripheral => {
                write!(f, "expected `periph: <name> : <word> <word> ...`")
            }
            ParseErrorKind::Invalid(e) => write!(f, "{e}"),
        }
    }
}

/// Syntax or validation error, with 1-based line and column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(body: &str, body_column: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &body[s..i],
                    column: body_column + s,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &body[s..],
            column: body_column + s,
        });
    }
    out
}

fn parse_word_token(
    token: &Token<'_>,
    generators: &[String],
    line: usize,
) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    for (i, c) in token.text.char_indices() {
        let lower = c.to_ascii_lowercase().to_string();
        let g = generators
            .iter()
            .position(|g| *g == lower)
            .filter(|_| c.is_ascii_alphabetic())
            .ok_or_else(|| err(line, token.column + i, ParseErrorKind::UnknownLetter(c)))?;
        letters.push(if c.is_ascii_uppercase() {
            -(g as i32 + 1)
        } else {
            g as i32 + 1
        });
    }
    Ok(Word::new(letters))
}

/// Parses a presentation file, including optional peripheral data.
pub fn parse_relative_presentation(text: &str) -> Result<RelativePresentation, ParseError> {
    let mut generators: Option<Vec<String>> = None;
    let mut relators: Vec<Word> = Vec::new();
    let mut peripherals: Vec<Peripheral> = Vec::new();
    let mut ambient_oracle: Option<WordOracle> = None;
    let mut peripheral_oracle_set: Vec<bool> = Vec::new();

    for (line_index, raw) in text.lines().enumerate() {
        let line = line_index + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let Some(colon) = content.find(':') else {
            return Err(err(
                line,
                lead + 1,
                ParseErrorKind::UnknownDirective(content.trim().to_string()),
            ));
        };
        let directive = content[..colon].trim();
        let body = &content[colon + 1..];
        let body_column = colon + 2;
        match directive {
            "gens" => {
                if generators.is_some() {
                    return Err(err(line, lead + 1, ParseErrorKind::RepeatedGenerators));
                }
                let mut names = Vec::new();
                for t in tokens(body, body_column) {
                    let ok = t.text.len() == 1
                        && t.text.chars().all(|c| c.is_ascii_lowercase());
                    if !ok {
                        return Err(err(
                            line,
                            t.column,
                            ParseErrorKind::InvalidGeneratorName(t.text.to_string()),
                        ));
                    }
                    if names.iter().any(|n| n == t.text) {
                        return Err(err(
                            line,
                            t.column,
                            ParseErrorKind::Invalid(PresentationError::DuplicateGenerator(
                                t.text.to_string(),
                            )),
                        ));
                    }
                    names.push(t.text.to_string());
                }
                generators = Some(names);
            }
            "rel" => {
                let gens = generators
                    .as_ref()
                    .ok_or_else(|| err(line, lead + 1, ParseErrorKind::MissingGenerators))?;
                let toks = tokens(body, body_column);
                if toks.is_empty() {
                    return Err(err(line, body_column, ParseErrorKind::EmptyWord));
                }
                for t in toks {
                    let w = parse_word_token(&t, gens, line)?;
                    if w.cyclic_reduce().is_empty() {
                        return Err(err(line, t.column, ParseErrorKind::EmptyWord));
                    }
                    relators.push(w);
                }
            }
            "periph" => {
                let gens = generators
                    .as_ref()
                    .ok_or_else(|| err(line, lead + 1, ParseErrorKind::MissingGenerators))?;
                let Some(sep) = body.find(':') else {
                    return Err(err(line, body_column, ParseErrorKind::MalformedPeripheral));
                };
                let name = body[..sep].trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err(line, body_column, ParseErrorKind::MalformedPeripheral));
                }
                let words = tokens(&body[sep + 1..], body_column + sep + 1)
                    .iter()
                    .map(|t| parse_word_token(t, gens, line))
                    .collect::<Result<Vec<_>, _>>()?;
                if words.is_empty() {
                    return Err(err(line, body_column + sep + 1, ParseErrorKind::MalformedPeripheral));
                }
                peripherals.push(Peripheral {
                    name: name.to_string(),
                    generators: words,
                    oracle: ambient_oracle.unwrap_or(WordOracle::FreeReduction),
                });
                peripheral_oracle_set.push(false);
            }
            "oracle" => {
                let spec = body.trim();
                let oracle: WordOracle = spec
                    .parse()
                    .map_err(|_| err(line, body_column, ParseErrorKind::BadOracle(spec.to_string())))?;
                match peripherals.last_mut() {
                    Some(p) if !*peripheral_oracle_set.last().unwrap() => {
                        p.oracle = oracle;
                        *peripheral_oracle_set.last_mut().unwrap() = true;
                    }
                    Some(_) => {
                        return Err(err(
                            line,
                            lead + 1,
                            ParseErrorKind::BadOracle("oracle already set for this peripheral".into()),
                        ))
                    }
                    None => ambient_oracle = Some(oracle),
                }
            }
            other => {
                return Err(err(
                    line,
                    lead + 1,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }

    let generators = generators.ok_or_else(|| err(1, 1, ParseErrorKind::MissingGenerators))?;
    let ambient = Presentation::new(generators, relators)
        .map_err(|e| err(1, 1, ParseErrorKind::Invalid(e)))?;
    RelativePresentation::new(ambient, peripherals, ambient_oracle)
        .map_err(|e| err(1, 1, ParseErrorKind::Invalid(e)))
}

/// Parses a presentation file; peripheral lines, if any, are validated and
/// then dropped.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    parse_relative_presentation(text).map(|rp| rp.ambient().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_presentation() {
        let p = parse_presentation("gens: a b\nrel: abAB").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators(), &[Word::new(vec![1, 2, -1, -2])]);
    }

    #[test]
    fn cyclic_group() {
        let p = parse_presentation("gens: a\nrel: aaaaa").unwrap();
        assert_eq!(p.relators(), &[Word::generator(0).power(5)]);
    }

    #[test]
    fn empty_relator_after_reduction() {
        let e = parse_presentation("gens: a\nrel: aA").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyWord);
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse_presentation("gens: a b\nrel: abc").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownLetter('c'));
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_presentation("gens: a a").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = parse_presentation("# nothing\nfoo: x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownDirective("foo".into()));
        assert!(parse_presentation("rel: a").is_err());
        assert!(parse_presentation("gens: ab").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_presentation("# Z^2\n\ngens: a b # two\nrel: abAB # commutator\n").unwrap();
        assert_eq!(p.relators().len(), 1);
    }

    #[test]
    fn relative_presentation_with_oracles() {
        let text = "gens: a b\nrel: abAB\noracle: abelian\nperiph: A : a\noracle: finite:10\nperiph: B : b ab\n";
        let rp = parse_relative_presentation(text).unwrap();
        assert_eq!(rp.ambient_oracle(), Some(WordOracle::AbelianNormalForm));
        assert_eq!(rp.peripherals().len(), 2);
        assert_eq!(rp.peripherals()[0].oracle, WordOracle::FiniteEnumeration { bound: 10 });
        // inherits the ambient oracle
        assert_eq!(rp.peripherals()[1].oracle, WordOracle::AbelianNormalForm);
        assert_eq!(rp.peripherals()[1].generators.len(), 2);
        let again = parse_relative_presentation(&rp.to_text()).unwrap();
        assert_eq!(again, rp);
    }

    #[test]
    fn malformed_peripheral() {
        assert!(parse_relative_presentation("gens: a\nperiph: A a").is_err());
        assert!(parse_relative_presentation("gens: a\nperiph: A :").is_err());
        assert!(parse_relative_presentation("gens: a\noracle: magic").is_err());
    }
}
