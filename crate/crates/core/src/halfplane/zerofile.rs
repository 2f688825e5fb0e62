//! Text format for zero sets: one `re im` pair per line, `#` starts a comment line.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::blaschke::BlaschkeProduct;

/// A parsed zero file.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFile {
    pub product: BlaschkeProduct,
    /// Reflections that were missing from the file and were added.
    pub completed: Vec<Complex64>,
}

/// Parses the text of a zero file, adding missing reflections of off-axis zeros.
pub fn parse_zeros(text: &str) -> Result<ZeroFile> {
    let mut zeros = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(format!("expected two numbers, found {}", fields.len())));
        }
        let re: f64 = fields[0].parse().map_err(|e| parse_err(format!("{}: {e}", fields[0])))?;
        let im: f64 = fields[1].parse().map_err(|e| parse_err(format!("{}: {e}", fields[1])))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err("non-finite coordinate".into()));
        }
        zeros.push(Complex64::new(re + 0.0, im));
    }
    let (product, completed) = BlaschkeProduct::symmetric_completion(zeros)?;
    Ok(ZeroFile { product, completed })
}

/// Reads and parses a zero file.
pub fn read_zeros(path: &Path) -> Result<ZeroFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_zeros(&text)
}

/// Formats zeros in the same text format, one per line, using round-trip float formatting.
pub fn format_zeros(b: &BlaschkeProduct) -> String {
    b.zeros().iter().map(|a| format!("{:?} {:?}\n", a.re, a.im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_completes() {
        let f = parse_zeros("# test\n0 1\n\n1.5 2\n").unwrap();
        assert_eq!(f.completed, vec![Complex64::new(-1.5, 2.0)]);
        assert_eq!(f.product.degree(), 3);
    }

    #[test]
    fn reports_bad_line() {
        match parse_zeros("0 1\nfoo 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_zeros("0 -1\n"), Err(Error::NotUpperHalfPlane(_))));
    }

    #[test]
    fn format_round_trips() {
        let f = parse_zeros("0.1 0.3\n0 2.5\n").unwrap();
        let again = parse_zeros(&format_zeros(&f.product)).unwrap();
        assert_eq!(again.product, f.product);
        assert!(again.completed.is_empty());
    }
}
