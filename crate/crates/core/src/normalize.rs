//! Text normalization: tokenize, lowercase, trim punctuation, drop stopwords,
//! lemmatize.
//!
//! Stopwords are checked on the lowercased surface form and again on the
//! lemma, so no stopword can reach a term count. Lemmatization is a table
//! lookup with an ordered suffix-rule fallback; rules are re-applied until the
//! word stops changing, which makes every lemma a fixed point.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use crate::corpus::{RawDocument, TokenizedDocument};
use crate::error::{Error, Result};

pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");
pub const DEFAULT_LEMMAS: &str = include_str!("../data/lemmas_en.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationConfig {
    stopwords: HashSet<String>,
    lemma_table: HashMap<String, String>,
    pub suffix_rules_enabled: bool,
    pub min_token_length: usize,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self::english()
    }
}

impl NormalizationConfig {
    /// Validates the lemma table and pins every lemma as a fixed point.
    ///
    /// Stopwords and table entries are lowercased. A lemma that is itself a key
    /// mapping elsewhere is rejected, since lookups would then not be idempotent.
    pub fn new<S, L>(
        stopwords: S,
        lemma_table: L,
        suffix_rules_enabled: bool,
        min_token_length: usize,
    ) -> Result<Self>
    where
        S: IntoIterator<Item = String>,
        L: IntoIterator<Item = (String, String)>,
    {
        let stopwords: HashSet<String> = stopwords
            .into_iter()
            .map(|w| w.trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();

        let mut table = HashMap::new();
        for (surface, lemma) in lemma_table {
            let surface = surface.trim().to_lowercase();
            let lemma = lemma.trim().to_lowercase();
            if !is_clean_term(&surface) || !is_clean_term(&lemma) {
                return Err(Error::validation(format!(
                    "lemma table entry `{surface}` -> `{lemma}` is not a single token"
                )));
            }
            table.insert(surface, lemma);
        }
        let lemmas: Vec<String> = table.values().cloned().collect();
        for lemma in lemmas {
            match table.get(&lemma) {
                Some(target) if *target != lemma => {
                    return Err(Error::validation(format!(
                        "lemma `{lemma}` is itself mapped to `{target}`"
                    )));
                }
                Some(_) => {}
                None => {
                    table.insert(lemma.clone(), lemma);
                }
            }
        }

        Ok(NormalizationConfig {
            stopwords,
            lemma_table: table,
            suffix_rules_enabled,
            min_token_length: min_token_length.max(1),
        })
    }

    /// The bundled English stopword list and lemma table, suffix rules on.
    pub fn english() -> Self {
        let lemmas = parse_lemma_table(DEFAULT_LEMMAS, "built-in lemma table")
            .expect("built-in lemma table parses");
        Self::new(parse_stopwords(DEFAULT_STOPWORDS), lemmas, true, 1)
            .expect("built-in lemma table is consistent")
    }

    /// Loads the stopword list and lemma table from files, falling back to the
    /// bundled data for whichever path is `None`.
    pub fn from_files(stopwords: Option<&Path>, lemmas: Option<&Path>) -> Result<Self> {
        let stop_text = match stopwords {
            Some(p) => read_utf8(p)?,
            None => DEFAULT_STOPWORDS.to_string(),
        };
        let lemma_entries = match lemmas {
            Some(p) => parse_lemma_table(&read_utf8(p)?, &p.display().to_string())?,
            None => parse_lemma_table(DEFAULT_LEMMAS, "built-in lemma table")?,
        };
        Self::new(parse_stopwords(&stop_text), lemma_entries, true, 1)
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn lemma_table(&self) -> &HashMap<String, String> {
        &self.lemma_table
    }
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes)
        .map_err(|_| Error::validation(format!("{}: not valid UTF-8", path.display())))
}

/// One word per line; blank lines and `#` comments skipped.
pub fn parse_stopwords(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// `surface<TAB>lemma` per line; blank lines and `#` comments skipped.
pub fn parse_lemma_table(text: &str, origin: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (surface, lemma) = line.split_once('\t').ok_or_else(|| {
            Error::validation(format!("{origin}:{}: expected `surface<TAB>lemma`", i + 1))
        })?;
        out.push((surface.to_string(), lemma.to_string()));
    }
    Ok(out)
}

fn is_clean_term(s: &str) -> bool {
    match (s.chars().next(), s.chars().last()) {
        (Some(first), Some(last)) => {
            first.is_alphanumeric() && last.is_alphanumeric() && !s.chars().any(char::is_whitespace)
        }
        _ => false,
    }
}

fn trim_boundary(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Splits on Unicode whitespace and trims non-alphanumeric characters from
/// both ends of each piece. Internal hyphens, apostrophes and digits survive.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(trim_boundary)
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn lemmatize(token: &str, config: &NormalizationConfig) -> String {
    let mut current = token.to_string();
    loop {
        if let Some(lemma) = config.lemma_table.get(&current) {
            return lemma.clone();
        }
        if !config.suffix_rules_enabled {
            return current;
        }
        match apply_suffix_rule(&current) {
            Some(next) => current = next,
            None => return current,
        }
    }
}

/// Full per-token pipeline. `None` when the token is dropped.
pub fn normalize_token(raw: &str, config: &NormalizationConfig) -> Option<String> {
    let lower = raw.to_lowercase();
    let trimmed = trim_boundary(&lower);
    if trimmed.is_empty() || config.is_stopword(trimmed) {
        return None;
    }
    let lemma = lemmatize(trimmed, config);
    if config.is_stopword(&lemma) || lemma.chars().count() < config.min_token_length {
        return None;
    }
    Some(lemma)
}

pub fn normalize_document(raw: &RawDocument, config: &NormalizationConfig) -> TokenizedDocument {
    // normalize each distinct surface form once
    let mut surface: HashMap<&str, u64> = HashMap::new();
    for token in tokenize(&raw.text) {
        *surface.entry(token).or_insert(0) += 1;
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (token, n) in surface {
        if let Some(term) = normalize_token(token, config) {
            *counts.entry(term).or_insert(0) += n;
        }
    }
    TokenizedDocument::from_counts(raw.id.clone(), counts)
}

// --- suffix rules -----------------------------------------------------------

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn has_vowel(stem: &str) -> bool {
    stem.chars()
        .enumerate()
        .any(|(i, c)| is_vowel(c) || (c == 'y' && i > 0))
}

fn ends_alphabetic(stem: &str) -> bool {
    stem.chars().last().is_some_and(char::is_alphabetic)
}

/// Minimum shape for anything a rule is allowed to produce.
fn viable(stem: &str) -> bool {
    stem.chars().count() >= 3 && ends_alphabetic(stem) && has_vowel(stem)
}

/// Stem endings after which a dropped `-ed`/`-ing` took a silent `e` with it
/// ("evaluat" -> "evaluate", "reduc" -> "reduce"). Each entry is checked with
/// `restore_e`, which also looks at the preceding character for some endings.
fn restore_e(stem: &str) -> bool {
    let tail: Vec<char> = stem.chars().rev().take(4).collect();
    let at = |i: usize| tail.get(i).copied();
    let consonant_at = |i: usize| at(i).is_some_and(|c| c.is_alphabetic() && !is_vowel(c));

    if stem.ends_with("eat") || stem.ends_with("oat") {
        return false;
    }
    if stem.ends_with("at")
        || stem.ends_with("bl")
        || stem.ends_with("iz")
        || stem.ends_with("dg")
        || stem.ends_with("rg")
        || stem.ends_with("quir")
        || stem.ends_with("eas")
        || stem.ends_with("aus")
        || stem.ends_with("ais")
        || stem.ends_with("ang")
        || stem.ends_with("eng")
        || stem.ends_with("os")
        || stem.ends_with("ys")
        || stem.ends_with('c')
        || stem.ends_with('v')
        || stem.ends_with('u')
    {
        return true;
    }
    // consonant + {ar, ir, ur, in, um, id, ud, ok, is, ut}
    let pairs = ["ra", "ri", "ru", "ni", "mu", "di", "du", "ko", "si", "tu"];
    let last_two: String = [at(0), at(1)].iter().flatten().collect();
    pairs.contains(&last_two.as_str()) && consonant_at(2)
}

/// Short consonant-vowel-consonant stem such as "hop" or "mak".
fn is_short_cvc(stem: &str) -> bool {
    let c: Vec<char> = stem.chars().collect();
    c.len() == 3
        && !is_vowel(c[0])
        && is_vowel(c[1])
        && !is_vowel(c[2])
        && !matches!(c[2], 'w' | 'x' | 'y')
        && c.iter().all(|ch| ch.is_ascii_alphabetic())
}

fn repair_stem(mut stem: String) -> String {
    let chars: Vec<char> = stem.chars().rev().take(2).collect();
    if chars.len() == 2
        && chars[0] == chars[1]
        && chars[0].is_ascii_alphabetic()
        && !is_vowel(chars[0])
        && !matches!(chars[0], 'l' | 's' | 'z')
    {
        stem.pop();
    } else if restore_e(&stem) || is_short_cvc(&stem) {
        stem.push('e');
    }
    stem
}

fn strip(word: &str, suffix: &str) -> Option<String> {
    word.strip_suffix(suffix).map(str::to_string)
}

/// Applies the first rule whose suffix and guard both match.
///
/// Every rule shortens the word, so repeated application terminates.
fn apply_suffix_rule(word: &str) -> Option<String> {
    // possessive
    for suffix in ["'s", "\u{2019}s"] {
        if let Some(stem) = strip(word, suffix) {
            if viable(&stem) {
                return Some(stem);
            }
        }
    }

    if word.ends_with("sses") {
        let stem = strip(word, "es")?;
        if viable(&stem) {
            return Some(stem);
        }
    }

    for suffix in ["ies", "ied"] {
        if let Some(base) = strip(word, suffix) {
            let lemma = format!("{base}y");
            if ends_alphabetic(&base) && viable(&lemma) {
                return Some(lemma);
            }
        }
    }

    if word.ends_with("es") {
        let drops_es = ["ches", "shes", "xes", "zzes"]
            .iter()
            .any(|s| word.ends_with(s));
        let stem = if drops_es {
            strip(word, "es")?
        } else {
            strip(word, "s")?
        };
        if viable(&stem) {
            return Some(stem);
        }
    }

    if word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) {
        let stem = strip(word, "s")?;
        if viable(&stem) {
            return Some(stem);
        }
    }

    if let Some(stem) = strip(word, "ing") {
        if viable(&stem) {
            return Some(repair_stem(stem));
        }
    }

    if word.ends_with("ed") && !word.ends_with("eed") {
        let stem = strip(word, "ed")?;
        if viable(&stem) {
            return Some(repair_stem(stem));
        }
    }

    None
}
