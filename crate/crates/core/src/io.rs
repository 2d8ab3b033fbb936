//! Set files: UTF-8 text, one element per line, either an integer or
//! `p/q` with positive q. Lines starting with `#` are comments. Duplicates
//! are allowed and removed on load.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::setcore::GroundSet;

pub fn load_set(path: &Path) -> Result<(GroundSet, usize)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_set_text(&text)
}

pub fn parse_set_text(text: &str) -> Result<(GroundSet, usize)> {
    let mut values: Vec<Rational> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = parse_rational(line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        values.push(v);
    }
    GroundSet::from_values(values)
}

pub fn save_set(set: &GroundSet, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for e in set.iter() {
        writeln!(f, "{}", format_rational(e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_set_files() {
        let (set, dupes) = parse_set_text("# comment\n3\n1/2\n2/4\n\n-7\n").unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(dupes, 1);
        assert!(parse_set_text("1/0\n").is_err());
        assert!(parse_set_text("# only a comment\n").is_err());
        assert!(parse_set_text("3/-4\n").is_err());
    }
}
