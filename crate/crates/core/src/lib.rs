//! Comparative topic scoring.
//!
//! Given a corpus of reports with positive findings and one with negative or
//! insignificant findings, score every term of the positive corpus by how much
//! of its usage falls there and how widely it is spread across positive
//! documents. Terms that clear the score percentile, lean toward the positive
//! corpus and belong to a candidate lexicon form the final report.
//!
//! ```
//! use determinant::corpus::{build_pair, Corpus, CorpusLabel, TokenizedDocument};
//! use determinant::scoring::score_all;
//!
//! let pos = Corpus::new(CorpusLabel::Positive, vec![
//!     TokenizedDocument::from_terms("p1", ["copper", "zinc"]),
//!     TokenizedDocument::from_terms("p2", ["copper"]),
//! ]).unwrap();
//! let neg = Corpus::new(CorpusLabel::Negative, vec![
//!     TokenizedDocument::from_terms("n1", ["zinc"]),
//! ]).unwrap();
//! let table = score_all(&build_pair(pos, neg).unwrap()).unwrap();
//! assert_eq!(table.get("copper").unwrap().a, 1.0);
//! assert_eq!(table.get("zinc").unwrap().a, 0.5);
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod export;
pub mod lexicon;
pub mod normalize;
pub mod report;
pub mod scoring;
pub mod tfidf;

pub use corpus::{
    build_pair, load_corpus, Corpus, CorpusLabel, CorpusPair, RawDocument, TokenizedDocument,
};
pub use error::{Error, Result};
pub use lexicon::{load_lexicon, Lexicon};
pub use normalize::{lemmatize, normalize_document, tokenize, NormalizationConfig};
pub use report::{
    distribution_summary, filter_candidates, percentile_threshold, DeterminantReport, FilterConfig,
    ScoreDistribution,
};
pub use scoring::{count_stats, score, score_all, term_universe, ScoreTable, TermStats};
pub use tfidf::{mean_rank, rank_terms, tf_idf, MeanRank, TfidfScore};
