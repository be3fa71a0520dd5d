//! Bundled word-class lexicon and stop-word list.
//!
//! The lexicon maps a lowercase word to its most frequent coarse class;
//! the tagger's shape rules and heuristics cover everything else. Both
//! files ship with the crate so tagging is reproducible, and can be
//! overridden from disk (see the CLI's `RAPROP_LEXICON`).

use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::PosClass;
use thiserror::Error;

const BUNDLED_LEXICON: &str = include_str!("../../assets/lexicon.tsv");
const BUNDLED_STOPWORDS: &str = include_str!("../../assets/stopwords.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {what}")]
    Malformed {
        path: String,
        line: usize,
        what: String,
    },
}

/// Word -> coarse class table, TSV-backed.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, PosClass>,
}

impl Lexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON, "<bundled>").expect("bundled lexicon parses")
    }

    pub fn from_path(path: &Path) -> Result<Self, LexiconError> {
        let content = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&content, &path.display().to_string())
    }

    fn parse(content: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, class) = line
                .split_once('\t')
                .ok_or_else(|| LexiconError::Malformed {
                    path: origin.to_string(),
                    line: lineno + 1,
                    what: "expected word<TAB>class".into(),
                })?;
            let class: PosClass = class.trim().parse().map_err(|e| LexiconError::Malformed {
                path: origin.to_string(),
                line: lineno + 1,
                what: e,
            })?;
            entries.insert(word.trim().to_lowercase(), class);
        }
        Ok(Self { entries })
    }

    pub fn lookup(&self, word: &str) -> Option<PosClass> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Stop-word set, one word per line.
#[derive(Debug, Clone)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    pub fn from_path(path: &Path) -> Result<Self, LexiconError> {
        let content = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&content))
    }

    fn parse(content: &str) -> Self {
        Self {
            words: content
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicon_has_no_duplicate_words() {
        let mut seen = HashSet::new();
        for line in BUNDLED_LEXICON.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let word = line.split('\t').next().unwrap();
            assert!(
                seen.insert(word.to_string()),
                "duplicate lexicon entry {word:?}"
            );
        }
    }

    #[test]
    fn bundled_tables_load() {
        let lex = Lexicon::bundled();
        assert!(lex.len() > 300);
        assert_eq!(lex.lookup("the"), Some(PosClass::Determiner));
        assert_eq!(lex.lookup("cuts"), Some(PosClass::Verb));
        assert_eq!(lex.lookup("house"), Some(PosClass::CommonNoun));
        assert_eq!(lex.lookup("obama"), None);

        let stops = StopWords::bundled();
        assert!(
            stops.len() > 140,
            "expected ~150 stop words, got {}",
            stops.len()
        );
        assert!(stops.contains("the"));
        assert!(!stops.contains("house"));
    }
}
