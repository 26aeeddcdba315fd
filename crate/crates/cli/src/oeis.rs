//! OEIS b-files: parsing, the bundled prefixes, and fetching with a cache.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigUint;

use crate::Failure;

pub type Terms = BTreeMap<u64, BigUint>;

pub struct Sequence {
    pub id: &'static str,
    snapshot: &'static str,
    /// Crossing number of the link count stored at sequence index `m`.
    pub crossings: fn(u64) -> u64,
    /// First index that corresponds to a link count.
    pub first_index: u64,
}

// a(m) = (2^m + 1)(2^(m-1) + 1)/3 counts links with 2m crossings. Index 0
// is the dropped leading term.
const A007581: Sequence = Sequence {
    id: "A007581",
    snapshot: include_str!("../data/b007581.txt"),
    crossings: |m| 2 * m,
    first_index: 1,
};

// Pinned so that a(1) = 2 is the count of 3-crossing links.
const A192466: Sequence = Sequence {
    id: "A192466",
    snapshot: include_str!("../data/b192466.txt"),
    crossings: |m| 2 * m + 1,
    first_index: 1,
};

pub fn lookup(id: &str) -> Option<&'static Sequence> {
    match id.to_ascii_uppercase().as_str() {
        "A007581" => Some(&A007581),
        "A192466" => Some(&A192466),
        _ => None,
    }
}

/// Parses lines of `index value`; blank lines and `#` comments are skipped.
pub fn parse_bfile(text: &str) -> Result<Terms, String> {
    let mut terms = Terms::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(i), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("line {}: expected \"index value\"", line_no + 1));
        };
        let i: u64 = i.parse().map_err(|_| format!("line {}: bad index {i:?}", line_no + 1))?;
        let v: BigUint = v.parse().map_err(|_| format!("line {}: bad value {v:?}", line_no + 1))?;
        terms.insert(i, v);
    }
    Ok(terms)
}

impl Sequence {
    pub fn snapshot(&self) -> Terms {
        parse_bfile(self.snapshot).expect("bundled snapshot parses")
    }

    fn bfile_name(&self) -> String {
        format!("b{}.txt", &self.id[1..])
    }

    fn url(&self) -> String {
        format!("https://oeis.org/{}/{}", self.id, self.bfile_name())
    }

    fn cache_path(&self, dir: &Path) -> PathBuf {
        dir.join(self.bfile_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Snapshot,
    Cache,
    Network,
    /// Snapshot used because the network was unreachable.
    Fallback,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Snapshot => "snapshot",
            Source::Cache => "cache",
            Source::Network => "network",
            Source::Fallback => "snapshot-fallback",
        }
    }
}

fn fetch(url: &str) -> Result<String, String> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(15)))
        .build()
        .into();
    agent
        .get(url)
        .call()
        .map_err(|e| e.to_string())?
        .body_mut()
        .read_to_string()
        .map_err(|e| e.to_string())
}

/// Terms from the cache, the network, or the bundled prefix, in that order.
pub fn load(
    seq: &Sequence,
    offline: bool,
    fallback: bool,
    cache_dir: &Path,
) -> Result<(Terms, Source), Failure> {
    let snapshot = seq.snapshot();
    if offline {
        return Ok((snapshot, Source::Snapshot));
    }
    let path = seq.cache_path(cache_dir);
    let (terms, source) = match fs::read_to_string(&path) {
        Ok(text) => (
            parse_bfile(&text).map_err(|e| Failure::new(6, format!("{}: {e}", path.display())))?,
            Source::Cache,
        ),
        Err(_) => match fetch(&seq.url()) {
            Ok(text) => {
                let terms = parse_bfile(&text)
                    .map_err(|e| Failure::new(6, format!("{}: {e}", seq.url())))?;
                if fs::create_dir_all(cache_dir).is_ok() {
                    let _ = fs::write(&path, &text);
                }
                (terms, Source::Network)
            }
            Err(e) if fallback => {
                eprintln!("warning: fetching {} failed ({e}); using bundled prefix", seq.url());
                return Ok((snapshot, Source::Fallback));
            }
            Err(e) => return Err(Failure::new(6, format!("fetching {} failed: {e}", seq.url()))),
        },
    };
    for (i, v) in &snapshot {
        if let Some(w) = terms.get(i) {
            if v != w {
                return Err(Failure::new(
                    7,
                    format!("{} a({i}): bundled prefix has {v}, {} has {w}", seq.id, source.name()),
                ));
            }
        }
    }
    Ok((terms, source))
}
