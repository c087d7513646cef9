//! Loading the symbol table and lexicon from disk.

use std::fs;
use std::path::{Path, PathBuf};

use fieldnorm_core::normalizer::{ForeignMatcher, SuffixPolicy, SuffixPolicyError};
use fieldnorm_core::{Lexicon, LexiconError, NormalizerConfig, SymbolClassTable, TableError};
use regex::Regex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("symbol table {}", path.display())]
    Table {
        path: PathBuf,
        #[source]
        source: TableError,
    },
    #[error("lexicon {}", path.display())]
    Lexicon {
        path: PathBuf,
        #[source]
        source: LexiconError,
    },
    #[error("suffix policy: {0}")]
    SuffixPolicy(#[from] SuffixPolicyError),
    #[error("threshold must be within [0, 1], got {0}")]
    Threshold(f64),
    #[error("foreign pattern: {0}")]
    ForeignPattern(#[from] regex::Error),
}

pub fn read_text(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// The symbol table and lexicon a normalizer runs against.
#[derive(Debug)]
pub struct Resources {
    pub table: SymbolClassTable,
    pub lexicon: Lexicon,
}

impl Resources {
    /// Without `symbols`, the bundled starter table is used.
    pub fn load(lexicon: &Path, symbols: Option<&Path>) -> Result<Self, ConfigError> {
        let table = match symbols {
            Some(path) => SymbolClassTable::parse(&read_text(path)?).map_err(|source| ConfigError::Table {
                path: path.to_path_buf(),
                source,
            })?,
            None => SymbolClassTable::starter(),
        };
        let lexicon = Lexicon::parse(&read_text(lexicon)?, &table).map_err(|source| ConfigError::Lexicon {
            path: lexicon.to_path_buf(),
            source,
        })?;
        Ok(Resources { table, lexicon })
    }
}

/// Tokens fully matched by a regular expression are foreign material.
#[derive(Debug, Clone)]
pub struct RegexForeign(Regex);

impl RegexForeign {
    pub fn new(pattern: &str) -> Result<Self, ConfigError> {
        Ok(RegexForeign(Regex::new(&format!("^(?:{pattern})$"))?))
    }
}

impl ForeignMatcher for RegexForeign {
    fn is_foreign(&self, raw: &str) -> bool {
        self.0.is_match(raw)
    }
}

pub fn normalizer_config(threshold: f64, suffix_policy: Option<&str>) -> Result<NormalizerConfig, ConfigError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ConfigError::Threshold(threshold));
    }
    let suffix_policy = match suffix_policy {
        Some(text) => text.parse::<SuffixPolicy>()?,
        None => SuffixPolicy::default(),
    };
    Ok(NormalizerConfig {
        threshold,
        suffix_policy,
        ..NormalizerConfig::default()
    })
}
