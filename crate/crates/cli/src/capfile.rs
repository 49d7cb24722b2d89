//! Plain-text cap files.
//!
//! ```text
//! capfile v1 n=7
//! 0000000
//! 1000000
//! ...
//! ```
//!
//! One point per line after the header, as an `n`-character binary string
//! whose first character is coordinate 1. Points are written in ascending
//! order of their integer value.

use capclass::gf2::{bit_string, parse_bit_string};
use capclass::PointSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapFileError {
    #[error("missing header line")]
    MissingHeader,
    #[error("bad header {0:?}, expected \"capfile v1 n=<n>\"")]
    BadHeader(String),
    #[error("line {line}: {text:?} is not a binary string of length {n}")]
    BadPoint { line: usize, text: String, n: usize },
    #[error("line {line}: duplicate point {text:?}")]
    Duplicate { line: usize, text: String },
}

pub fn render(set: &PointSet) -> String {
    let mut out = format!("capfile v1 n={}\n", set.n());
    for &m in set.masks() {
        out.push_str(&bit_string(m, set.n()));
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<PointSet, CapFileError> {
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate();
    let (_, header) = lines.next().filter(|(_, h)| !h.trim().is_empty()).ok_or(CapFileError::MissingHeader)?;
    let n = header
        .trim()
        .strip_prefix("capfile v1 n=")
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| (1..=capclass::gf2::MAX_DIM).contains(&n))
        .ok_or_else(|| CapFileError::BadHeader(header.to_string()))?;
    let mut set = PointSet::empty(n).expect("n checked");
    for (idx, raw) in lines {
        let text = raw.trim();
        if text.is_empty() {
            continue;
        }
        let line = idx + 1;
        let mask = match parse_bit_string(text) {
            Some((m, len)) if len == n => m,
            _ => return Err(CapFileError::BadPoint { line, text: text.to_string(), n }),
        };
        if !set.insert_mask(mask).expect("mask fits n") {
            return Err(CapFileError::Duplicate { line, text: text.to_string() });
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let set = PointSet::from_masks(7, [124, 0, 15, 1]).unwrap();
        let text = render(&set);
        assert_eq!(text, "capfile v1 n=7\n0000000\n1000000\n1111000\n0011111\n");
        assert_eq!(parse(&text).unwrap(), set);
        assert_eq!(render(&parse(&text).unwrap()), text);
    }

    #[test]
    fn errors() {
        assert_eq!(parse(""), Err(CapFileError::MissingHeader));
        assert!(matches!(parse("capfile v2 n=3\n"), Err(CapFileError::BadHeader(_))));
        assert!(matches!(parse("capfile v1 n=17\n"), Err(CapFileError::BadHeader(_))));
        assert_eq!(
            parse("capfile v1 n=3\n101\n11\n"),
            Err(CapFileError::BadPoint { line: 3, text: "11".into(), n: 3 })
        );
        assert_eq!(parse("capfile v1 n=3\n101\n101\n"), Err(CapFileError::Duplicate { line: 3, text: "101".into() }));
        assert!(matches!(parse("capfile v1 n=2\n1a\n"), Err(CapFileError::BadPoint { .. })));
    }

    #[test]
    fn tolerates_crlf_and_any_order() {
        let set = parse("capfile v1 n=3\r\n111\r\n000\r\n").unwrap();
        assert_eq!(set.masks(), &[0, 7]);
    }
}
