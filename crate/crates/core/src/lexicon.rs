//! Candidate-category list used to restrict the final report.
//!
//! Entries go through the same normalization pipeline as corpus text.
//! Multi-word entries are split, and every surviving token becomes a member.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::normalize::{normalize_token, tokenize, NormalizationConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    terms: BTreeSet<String>,
    source: String,
}

impl Lexicon {
    /// Builds a lexicon from already-normalized terms.
    pub fn from_terms<I, S>(terms: I, source: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Lexicon {
            terms: terms.into_iter().map(Into::into).collect(),
            source: source.into(),
        }
    }

    /// Normalizes raw lexicon text. Errors if nothing survives normalization.
    pub fn parse(text: &str, source: &str, config: &NormalizationConfig) -> Result<Self> {
        let mut terms = BTreeSet::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for token in tokenize(line) {
                match normalize_token(token, config) {
                    Some(term) => {
                        terms.insert(term);
                    }
                    None => {
                        log::warn!("{source}: lexicon token `{token}` dropped by normalization")
                    }
                }
            }
        }
        if terms.is_empty() {
            return Err(Error::validation(format!(
                "{source}: lexicon is empty after normalization"
            )));
        }
        Ok(Lexicon {
            terms,
            source: source.to_string(),
        })
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn terms(&self) -> &BTreeSet<String> {
        &self.terms
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn load_lexicon(path: &Path, config: &NormalizationConfig) -> Result<Lexicon> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::validation(format!("{}: not valid UTF-8", path.display())))?;
    Lexicon::parse(&text, &path.display().to_string(), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Lexicon> {
        Lexicon::parse(text, "test", &NormalizationConfig::english())
    }

    fn members(lex: &Lexicon) -> Vec<&str> {
        lex.terms().iter().map(String::as_str).collect()
    }

    #[test]
    fn normalizes_and_dedupes() {
        assert_eq!(
            members(&parse("Zeaxanthin\nCopper\n").unwrap()),
            vec!["copper", "zeaxanthin"]
        );
        assert_eq!(members(&parse("copper\nCopper\n").unwrap()), vec!["copper"]);
    }

    #[test]
    fn multiword_entries_are_split() {
        let lex = parse("Omega-3 fatty acids\n").unwrap();
        assert_eq!(members(&lex), vec!["acid", "fatty", "omega-3"]);
    }

    #[test]
    fn comments_and_stopwords_skipped() {
        let lex = parse("# header\nthe copper\n\n").unwrap();
        assert_eq!(members(&lex), vec!["copper"]);
    }

    #[test]
    fn empty_after_normalization_is_an_error() {
        assert!(parse("the\nand\n# x\n").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn contains() {
        let lex = parse("copper\nomega-3\n").unwrap();
        assert!(lex.contains("copper"));
        assert!(!lex.contains("zinc"));
        assert!(lex.contains("omega-3"));
    }

    #[test]
    fn members_are_normalization_fixed_points() {
        let c = NormalizationConfig::english();
        let lex = parse("Nitrates\nStudied compounds\nResearching\n").unwrap();
        for t in lex.terms() {
            assert_eq!(normalize_token(t, &c).as_deref(), Some(t.as_str()));
        }
    }
}
