//! Parsing of pre-sessionized page-category logs in the UCI msnbc.com
//! "anonymous web data" sequence format.
//!
//! The format is line oriented. Lines whose first non-whitespace character is
//! `%` are comments. A header line of whitespace-separated category names may
//! precede the data rows; every data row is one user session, written as
//! whitespace-separated 1-based category codes in visit order:
//!
//! ```text
//! % Different categories found in input file:
//!
//! frontpage news tech local opinion on-air misc weather msn-news health ...
//!
//! % Sequences:
//!
//! 1 1
//! 2
//! 3 2 2 4 2 2 2 3 3
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Category code. Codes are 1-based positions in a [`CategoryDictionary`].
pub type CategoryCode = u16;

/// The thirteen-session msnbc worked example, with
/// the msnbc header, in the canonical sequence format.
pub const TABLE1_SEQ: &str = include_str!("../fixtures/table1.seq");

/// Category names of the msnbc.com log, in the order used by the UCI file header.
pub const MSNBC_CATEGORIES: [&str; 17] = [
    "frontpage",
    "news",
    "tech",
    "local",
    "opinion",
    "on-air",
    "misc",
    "weather",
    "msn-news",
    "health",
    "living",
    "business",
    "msn-sports",
    "sports",
    "summary",
    "bbs",
    "travel",
];

/// Ordered list of category names. The code of a category is its 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDictionary {
    names: Vec<String>,
}

impl CategoryDictionary {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Dictionary("no category names".into()));
        }
        if names.len() > CategoryCode::MAX as usize {
            return Err(Error::Dictionary(format!(
                "{} categories exceed the supported maximum {}",
                names.len(),
                CategoryCode::MAX
            )));
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Dictionary(format!("bad category name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Dictionary(format!("duplicate category name {name:?}")));
            }
        }
        Ok(Self { names })
    }

    /// The 17-category msnbc.com dictionary.
    pub fn msnbc() -> Self {
        Self {
            names: MSNBC_CATEGORIES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name for a 1-based code.
    pub fn name(&self, code: CategoryCode) -> Option<&str> {
        (code as usize)
            .checked_sub(1)
            .and_then(|i| self.names.get(i))
            .map(String::as_str)
    }

    /// 1-based code for a name.
    pub fn code(&self, name: &str) -> Option<CategoryCode> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| (i + 1) as CategoryCode)
    }
}

/// One user's ordered page-category visits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    /// 1-based ordinal in file order.
    pub id: usize,
    pub visits: Vec<CategoryCode>,
}

impl Session {
    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionDataset {
    dictionary: CategoryDictionary,
    sessions: Vec<Session>,
}

impl SessionDataset {
    /// Builds a dataset from visit lists, assigning ids 1..=n in order.
    pub fn new(dictionary: CategoryDictionary, rows: Vec<Vec<CategoryCode>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let max = dictionary.len();
        let mut sessions = Vec::with_capacity(rows.len());
        for (idx, visits) in rows.into_iter().enumerate() {
            if visits.is_empty() {
                return Err(Error::Domain(format!("session {} has no visits", idx + 1)));
            }
            if let Some(&code) = visits.iter().find(|&&c| c == 0 || c as usize > max) {
                return Err(Error::CodeOutOfRange {
                    line: idx + 1,
                    code: code as u64,
                    max,
                });
            }
            sessions.push(Session { id: idx + 1, visits });
        }
        Ok(Self { dictionary, sessions })
    }

    pub fn dictionary(&self) -> &CategoryDictionary {
        &self.dictionary
    }

    pub fn sessions(&self) -> &[Session] {
        &self.sessions
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn num_categories(&self) -> usize {
        self.dictionary.len()
    }

    /// Writes the dataset back out in the sequence format, with an embedded
    /// dictionary header.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        out.push_str("% Different categories found in input file:\n\n");
        out.push_str(&self.dictionary.names.join(" "));
        out.push_str("\n\n% Sequences:\n\n");
        for s in &self.sessions {
            let mut first = true;
            for code in &s.visits {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{code}");
            }
            out.push('\n');
        }
        out
    }
}

/// Where category names come from when parsing.
#[derive(Clone, Debug)]
pub enum DictionaryMode {
    /// Take the last non-comment, non-integer line before the first data row.
    Embedded,
    /// Use the given dictionary; any name line in the file is ignored.
    External(CategoryDictionary),
}

/// Parses a sequence log.
///
/// Fails with a line-numbered error on non-integer tokens in data rows, on
/// codes outside the dictionary, on invalid UTF-8, and when the input holds
/// no data rows.
pub fn parse_log(input: &[u8], mode: &DictionaryMode) -> Result<SessionDataset> {
    let mut dictionary = match mode {
        DictionaryMode::External(d) => Some(d.clone()),
        DictionaryMode::Embedded => None,
    };
    let mut name_line: Option<(usize, &str)> = None;
    let mut rows: Vec<Vec<CategoryCode>> = Vec::new();

    for (idx, raw) in input.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|e| Error::Parse {
            line: line_no,
            message: format!("invalid UTF-8 at byte {}", e.valid_up_to()),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }

        let all_integer = trimmed
            .split_ascii_whitespace()
            .all(|tok| tok.bytes().all(|b| b.is_ascii_digit()));

        if !all_integer {
            if rows.is_empty() {
                if matches!(mode, DictionaryMode::Embedded) {
                    name_line = Some((line_no, trimmed));
                }
                continue;
            }
            let bad = trimmed
                .split_ascii_whitespace()
                .find(|tok| !tok.bytes().all(|b| b.is_ascii_digit()))
                .unwrap_or(trimmed);
            return Err(Error::Parse {
                line: line_no,
                message: format!("non-integer token {bad:?}"),
            });
        }

        if dictionary.is_none() {
            let (dict_line, names) = name_line.ok_or(Error::MissingDictionary)?;
            let dict = CategoryDictionary::new(names.split_ascii_whitespace())
                .map_err(|e| Error::Parse {
                    line: dict_line,
                    message: e.to_string(),
                })?;
            dictionary = Some(dict);
        }
        let max = dictionary.as_ref().map_or(0, CategoryDictionary::len);

        let mut visits = Vec::new();
        for tok in trimmed.split_ascii_whitespace() {
            let code: u64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("integer {tok:?} out of range"),
            })?;
            if code == 0 || code > max as u64 {
                return Err(Error::CodeOutOfRange {
                    line: line_no,
                    code,
                    max,
                });
            }
            visits.push(code as CategoryCode);
        }
        rows.push(visits);
    }

    match dictionary {
        Some(dictionary) if !rows.is_empty() => SessionDataset::new(dictionary, rows),
        _ => Err(Error::EmptyDataset),
    }
}

/// Reads the whole stream and parses it with [`parse_log`].
pub fn read_log<R: Read>(mut reader: R, mode: &DictionaryMode) -> std::io::Result<Result<SessionDataset>> {
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    Ok(parse_log(&buf, mode))
}

/// Corpus summary: size, mean session length, and length extremes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub num_sessions: usize,
    pub total_visits: u64,
    pub avg_visits: f64,
    pub num_categories: usize,
    pub length_min: usize,
    pub length_max: usize,
}

pub fn dataset_stats(data: &SessionDataset) -> DatasetStats {
    let mut total = 0u64;
    let mut min = usize::MAX;
    let mut max = 0usize;
    for s in data.sessions() {
        let len = s.len();
        total += len as u64;
        min = min.min(len);
        max = max.max(len);
    }
    let n = data.len();
    DatasetStats {
        num_sessions: n,
        total_visits: total,
        avg_visits: total as f64 / n as f64,
        num_categories: data.num_categories(),
        length_min: min,
        length_max: max,
    }
}
