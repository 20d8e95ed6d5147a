use std::collections::HashSet;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::oracle::WordOracle;
use super::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("generator name is empty")]
    EmptyGeneratorName,
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {0} uses a generator outside the declared list")]
    UnknownGenerator(usize),
    #[error("relator {0} is empty after reduction")]
    EmptyRelator(usize),
    #[error("peripheral `{0}` has no generating words")]
    EmptyPeripheral(String),
    #[error("peripheral `{name}` word {index} uses a generator outside the ambient list")]
    PeripheralOutOfRange { name: String, index: usize },
    #[error("could not synthesize {0} fresh single-letter generator names")]
    NameSynthesisExhausted(usize),
}

/// Finite presentation `⟨S | R⟩` with cyclically reduced, nonempty relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = HashSet::new();
        for name in &generators {
            if name.is_empty() {
                return Err(PresentationError::EmptyGeneratorName);
            }
            if !seen.insert(name.clone()) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let relators = relators
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                if r.generator_span() > generators.len() {
                    return Err(PresentationError::UnknownGenerator(i));
                }
                let reduced = r.cyclic_reduce();
                if reduced.is_empty() {
                    Err(PresentationError::EmptyRelator(i))
                } else {
                    Ok(reduced)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            generators,
            relators,
        })
    }

    /// Free group on the given names.
    pub fn free(generators: &[&str]) -> Self {
        Self::new(generators.iter().map(|s| s.to_string()).collect(), vec![])
            .expect("valid free presentation")
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn max_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.generators)
    }

    /// Parses a word in this presentation's alphabet (uppercase = inverse).
    /// Requires single-letter generator names.
    pub fn parse_word(&self, text: &str) -> Option<Word> {
        let mut letters = Vec::new();
        for c in text.chars() {
            let lower = c.to_ascii_lowercase().to_string();
            let g = self.generator_index(&lower)?;
            letters.push(if c.is_ascii_uppercase() {
                -(g as i32 + 1)
            } else {
                g as i32 + 1
            });
        }
        Some(Word::new(letters))
    }

    /// Canonical file rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relators {
            out.push_str(&format!("rel: {}\n", self.render_word(r)));
        }
        out
    }

    /// SHA-256 of the canonical rendering, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// A peripheral subgroup given by generating words in the ambient alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Peripheral {
    pub name: String,
    pub generators: Vec<Word>,
    pub oracle: WordOracle,
}

/// Ambient presentation plus a (possibly empty) list of peripheral subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativePresentation {
    ambient: Presentation,
    peripherals: Vec<Peripheral>,
    ambient_oracle: Option<WordOracle>,
}

impl RelativePresentation {
    pub fn new(
        ambient: Presentation,
        peripherals: Vec<Peripheral>,
        ambient_oracle: Option<WordOracle>,
    ) -> Result<Self, PresentationError> {
        for p in &peripherals {
            if p.generators.is_empty() {
                return Err(PresentationError::EmptyPeripheral(p.name.clone()));
            }
            for (index, w) in p.generators.iter().enumerate() {
                if w.generator_span() > ambient.generator_count() {
                    return Err(PresentationError::PeripheralOutOfRange {
                        name: p.name.clone(),
                        index,
                    });
                }
            }
        }
        Ok(Self {
            ambient,
            peripherals,
            ambient_oracle,
        })
    }

    pub fn ambient(&self) -> &Presentation {
        &self.ambient
    }

    pub fn peripherals(&self) -> &[Peripheral] {
        &self.peripherals
    }

    /// Oracle declared before any `periph:` line, if any.
    pub fn ambient_oracle(&self) -> Option<WordOracle> {
        self.ambient_oracle
    }

    pub fn to_text(&self) -> String {
        let mut out = self.ambient.to_text();
        if let Some(o) = self.ambient_oracle {
            out.push_str(&format!("oracle: {o}\n"));
        }
        for p in &self.peripherals {
            let words: Vec<String> = p
                .generators
                .iter()
                .map(|w| self.ambient.render_word(w))
                .collect();
            out.push_str(&format!("periph: {} : {}\n", p.name, words.join(" ")));
            out.push_str(&format!("oracle: {}\n", p.oracle));
        }
        out
    }

    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

const FRESH_NAME_ORDER: &str = "tuvwxyzabcdefghijklmnopqrs";

/// Presentation of `Zⁿ × ⟨p⟩`: `n` fresh generators commuting with each
/// other and with every generator of `p`; the relators of `p` come first.
pub fn zn_product(p: &Presentation, n: usize) -> Result<Presentation, PresentationError> {
    if n == 0 {
        return Ok(p.clone());
    }
    let mut names = p.generators.clone();
    let mut fresh = Vec::with_capacity(n);
    for c in FRESH_NAME_ORDER.chars() {
        if fresh.len() == n {
            break;
        }
        let name = c.to_string();
        if !names.contains(&name) {
            names.push(name);
            fresh.push(names.len() - 1);
        }
    }
    if fresh.len() < n {
        return Err(PresentationError::NameSynthesisExhausted(n));
    }
    let mut relators = p.relators.clone();
    for (i, &ti) in fresh.iter().enumerate() {
        for &tj in &fresh[i + 1..] {
            relators.push(Word::commutator(&Word::generator(ti), &Word::generator(tj)));
        }
    }
    for &ti in &fresh {
        for s in 0..p.generator_count() {
            relators.push(Word::commutator(&Word::generator(ti), &Word::generator(s)));
        }
    }
    Presentation::new(names, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> Presentation {
        Presentation::new(vec!["a".into()], vec![Word::generator(0).power(5)]).unwrap()
    }

    #[test]
    fn zn_product_of_cyclic_group() {
        let p = zn_product(&z5(), 1).unwrap();
        assert_eq!(p.generators(), &["a".to_string(), "t".to_string()]);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.render_word(&p.relators()[0]), "aaaaa");
        assert_eq!(p.render_word(&p.relators()[1]), "taTA");
    }

    #[test]
    fn zn_product_identity_case() {
        assert_eq!(zn_product(&z5(), 0).unwrap(), z5());
    }

    #[test]
    fn zn_product_relator_count() {
        let f2 = Presentation::free(&["a", "b"]);
        let p = zn_product(&f2, 2).unwrap();
        assert_eq!(p.generator_count(), 4);
        // n(n-1)/2 + n|S| = 1 + 4
        assert_eq!(p.relators().len(), 5);
    }

    #[test]
    fn zn_product_exhausts_names() {
        let f = Presentation::free(&["a"]);
        assert_eq!(
            zn_product(&f, 26),
            Err(PresentationError::NameSynthesisExhausted(26))
        );
        assert!(zn_product(&f, 25).is_ok());
    }

    #[test]
    fn relators_stored_cyclically_reduced() {
        let p = Presentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::new(vec![2, 1, 1, 1, -2])],
        )
        .unwrap();
        assert_eq!(p.relators()[0], Word::new(vec![1, 1, 1]));
    }

    #[test]
    fn rejects_duplicates_and_empty_relators() {
        assert_eq!(
            Presentation::new(vec!["a".into(), "a".into()], vec![]),
            Err(PresentationError::DuplicateGenerator("a".into()))
        );
        assert_eq!(
            Presentation::new(vec!["a".into()], vec![Word::new(vec![1, -1])]),
            Err(PresentationError::EmptyRelator(0))
        );
    }
}
