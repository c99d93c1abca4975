//! Documents, corpora and the positive/negative corpus pair.
//!
//! A corpus lives on disk as a manifest plus plain-text files. Each manifest
//! line is `id<TAB>relative/path.txt`; blank lines and lines starting with `#`
//! are skipped. Relative paths resolve against the manifest's directory.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalize::{normalize_document, NormalizationConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// A document reduced to a multiset of normalized terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDocument {
    id: String,
    term_counts: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl TokenizedDocument {
    /// Builds a document from explicit counts. Zero counts are dropped.
    pub fn from_counts<I, S>(id: impl Into<String>, counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut term_counts = BTreeMap::new();
        for (term, count) in counts {
            if count > 0 {
                *term_counts.entry(term.into()).or_insert(0) += count;
            }
        }
        let total_tokens = term_counts.values().sum();
        TokenizedDocument {
            id: id.into(),
            term_counts,
            total_tokens,
        }
    }

    /// Builds a document by counting each occurrence in `terms`.
    pub fn from_terms<I, S>(id: impl Into<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_counts(id, terms.into_iter().map(|t| (t, 1)))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn term_counts(&self) -> &BTreeMap<String, u64> {
        &self.term_counts
    }

    pub fn count(&self, term: &str) -> u64 {
        self.term_counts.get(term).copied().unwrap_or(0)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.term_counts.contains_key(term)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn is_empty(&self) -> bool {
        self.term_counts.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusLabel {
    Positive,
    Negative,
}

impl fmt::Display for CorpusLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusLabel::Positive => f.write_str("positive"),
            CorpusLabel::Negative => f.write_str("negative"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    label: CorpusLabel,
    documents: Vec<TokenizedDocument>,
}

impl Corpus {
    /// Fails if two documents share an id.
    pub fn new(label: CorpusLabel, documents: Vec<TokenizedDocument>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if doc.id.is_empty() {
                return Err(Error::validation(format!(
                    "{label} corpus contains a document with an empty id"
                )));
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::validation(format!(
                    "duplicate document id `{}` in {label} corpus",
                    doc.id
                )));
            }
        }
        Ok(Corpus { label, documents })
    }

    pub fn label(&self) -> CorpusLabel {
        self.label
    }

    pub fn documents(&self) -> &[TokenizedDocument] {
        &self.documents
    }

    /// Number of documents (DC for this corpus).
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn document(&self, id: &str) -> Option<&TokenizedDocument> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn total_tokens(&self) -> u64 {
        self.documents.iter().map(|d| d.total_tokens).sum()
    }
}

/// The labeled (positive, negative) pair that scoring runs over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPair {
    positive: Corpus,
    negative: Corpus,
}

impl CorpusPair {
    pub fn positive(&self) -> &Corpus {
        &self.positive
    }

    pub fn negative(&self) -> &Corpus {
        &self.negative
    }

    /// Looks a document up in either corpus.
    pub fn document(&self, id: &str) -> Option<(CorpusLabel, &TokenizedDocument)> {
        self.positive
            .document(id)
            .map(|d| (CorpusLabel::Positive, d))
            .or_else(|| {
                self.negative
                    .document(id)
                    .map(|d| (CorpusLabel::Negative, d))
            })
    }

    /// Relative difference between the two corpora's token totals, as a
    /// fraction of the larger one. Zero when both are empty.
    pub fn length_imbalance(&self) -> f64 {
        let p = self.positive.total_tokens();
        let n = self.negative.total_tokens();
        let max = p.max(n);
        if max == 0 {
            0.0
        } else {
            p.abs_diff(n) as f64 / max as f64
        }
    }
}

pub fn build_pair(pos: Corpus, neg: Corpus) -> Result<CorpusPair> {
    if pos.label != CorpusLabel::Positive {
        return Err(Error::validation(format!(
            "expected a positive corpus in the positive slot, got {}",
            pos.label
        )));
    }
    if neg.label != CorpusLabel::Negative {
        return Err(Error::validation(format!(
            "expected a negative corpus in the negative slot, got {}",
            neg.label
        )));
    }
    if pos.is_empty() {
        return Err(Error::validation(
            "positive corpus empty: scoring is undefined without positive documents",
        ));
    }
    let pos_ids: HashSet<&str> = pos.documents.iter().map(|d| d.id.as_str()).collect();
    if let Some(shared) = neg
        .documents
        .iter()
        .find(|d| pos_ids.contains(d.id.as_str()))
    {
        return Err(Error::validation(format!(
            "document id `{}` appears in both corpora",
            shared.id
        )));
    }
    Ok(CorpusPair {
        positive: pos,
        negative: neg,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
}

/// Parses manifest text. `base` is the directory relative paths resolve against;
/// `origin` names the manifest in error messages.
pub fn parse_manifest(text: &str, base: &Path, origin: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, rel)) = line.split_once('\t') else {
            return Err(Error::validation(format!(
                "{}:{}: expected `id<TAB>path`",
                origin.display(),
                lineno + 1
            )));
        };
        let (id, rel) = (id.trim(), rel.trim());
        if id.is_empty() || rel.is_empty() {
            return Err(Error::validation(format!(
                "{}:{}: empty id or path",
                origin.display(),
                lineno + 1
            )));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::validation(format!(
                "{}:{}: duplicate document id `{id}`",
                origin.display(),
                lineno + 1
            )));
        }
        entries.push(ManifestEntry {
            id: id.to_string(),
            path: base.join(rel),
        });
    }
    Ok(entries)
}

pub fn read_manifest(manifest_path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let text = String::from_utf8(text).map_err(|_| {
        Error::validation(format!(
            "{}: manifest is not valid UTF-8",
            manifest_path.display()
        ))
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new(""));
    parse_manifest(&text, base, manifest_path)
}

pub fn read_document(entry: &ManifestEntry) -> Result<RawDocument> {
    let bytes = std::fs::read(&entry.path).map_err(|e| Error::io(&entry.path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Encoding {
        document: entry.id.clone(),
        path: entry.path.clone(),
    })?;
    Ok(RawDocument::new(entry.id.clone(), text))
}

/// Loads and normalizes every document listed in a manifest, in manifest order.
///
/// Documents are read and normalized on the current rayon pool. When several
/// documents fail, the error reported is the one earliest in the manifest.
pub fn load_corpus(
    manifest_path: &Path,
    label: CorpusLabel,
    norm: &NormalizationConfig,
) -> Result<Corpus> {
    let entries = read_manifest(manifest_path)?;
    let loaded: Vec<Result<TokenizedDocument>> = entries
        .par_iter()
        .map(|entry| read_document(entry).map(|raw| normalize_document(&raw, norm)))
        .collect();
    let documents = loaded.into_iter().collect::<Result<Vec<_>>>()?;
    Corpus::new(label, documents)
}
