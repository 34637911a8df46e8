//! Free-group words, finitely presented groups, and the built-in catalog.
//!
//! A [`Word`] is a freely reduced sequence of signed generator letters; a
//! [`Presentation`] is a generator list plus relator words. Presentations
//! are parsed from the text grammar described at [`parse_presentation`] and
//! serialize back through [`Presentation::to_text`].

mod catalog;
mod parse;
mod word;

pub use catalog::{catalog_lookup, catalog_names, CatalogEntry, CatalogError};
pub use parse::{parse_presentation, ParseError};
pub use word::Word;

use std::fmt;
use thiserror::Error;

/// Errors raised when assembling a [`Presentation`] from parts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("presentation must declare at least one generator")]
    EmptyGenerators,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("word uses generator #{letter} but only {declared} are declared")]
    LetterOutOfRange { letter: usize, declared: usize },
}

/// A finitely presented group: named generators and relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Build a presentation, checking that generator names are distinct and
    /// every relator stays within the declared generators.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if names.is_empty() {
            return Err(PresentationError::EmptyGenerators);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PresentationError::DuplicateGenerator(n.clone()));
            }
        }
        for r in &relators {
            if let Some(letter) = r.letters().iter().find(|l| l.unsigned_abs() as usize > names.len()) {
                return Err(PresentationError::LetterOutOfRange {
                    letter: letter.unsigned_abs() as usize,
                    declared: names.len(),
                });
            }
        }
        Ok(Presentation { names, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Canonical text form; `parse_presentation` round-trips it.
    pub fn to_text(&self) -> String {
        let rels = if self.relators.is_empty() {
            "1".to_string()
        } else {
            self.relators
                .iter()
                .map(|r| r.display_with(&self.names).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!("< {} | {} >", self.names.join(", "), rels)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Generators of a subgroup `H`, given as words in the ambient group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Word>) -> Self {
        SubgroupSpec { generators }
    }

    /// The whole-group subgroup: one word per generator.
    pub fn full(generator_count: usize) -> Self {
        SubgroupSpec {
            generators: (1..=generator_count).map(|g| Word::generator(g as i32)).collect(),
        }
    }

    pub fn trivial() -> Self {
        SubgroupSpec { generators: Vec::new() }
    }
}
