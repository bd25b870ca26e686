//! Bit-exact text formats: scheme tables, point partitions, weighing
//! matrices and codeword lists.

use crate::gold::GoldCode;
use crate::muwm::SignMatrix;
use crate::scheme::RelationPartition;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_header_pair(
    line: &str,
    lineno: usize,
    first: &str,
    second: &str,
) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let mut grab = |name: &str, col: usize| -> Result<usize, ParseError> {
        let tok = it
            .next()
            .ok_or_else(|| err(lineno, col, format!("missing {name}=<int>")))?;
        let val = tok
            .strip_prefix(name)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| err(lineno, col, format!("expected {name}=<int>, got '{tok}'")))?;
        val.parse::<usize>()
            .map_err(|_| err(lineno, col, format!("bad integer '{val}' for {name}")))
    };
    let a = grab(first, 1)?;
    let b = grab(second, 2)?;
    Ok((a, b))
}

/// Emit a relation table in scheme format v1.
pub fn emit_scheme(rp: &RelationPartition) -> String {
    let n = rp.n();
    let mut out = String::new();
    out.push_str("ASCH v1\n");
    out.push_str(&format!("n={} d={}\n", n, rp.d()));
    let mut row = String::new();
    for x in 0..n {
        row.clear();
        for y in 0..n {
            if y > 0 {
                row.push(' ');
            }
            row.push_str(itoa(rp.rel(x, y)).as_str());
        }
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn itoa(v: usize) -> String {
    v.to_string()
}

/// Parse scheme format v1.
pub fn parse_scheme(text: &str) -> Result<RelationPartition, ParseError> {
    let mut lines = text.lines().enumerate();
    let (ln, magic) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    if magic.trim() != "ASCH v1" {
        return Err(err(ln + 1, 1, "expected header 'ASCH v1'"));
    }
    let (ln, header) = lines
        .next()
        .ok_or_else(|| err(2, 1, "missing 'n=<int> d=<int>' line"))?;
    let (n, d) = parse_header_pair(header, ln + 1, "n", "d")?;
    if d > 255 {
        return Err(err(ln + 1, 2, format!("class count d={d} exceeds 255")));
    }
    let mut rel = Vec::with_capacity(n * n);
    let mut rows = 0usize;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if rows == n {
            return Err(err(ln + 1, 1, format!("more than {n} rows")));
        }
        let mut cols = 0usize;
        for (c, tok) in line.split_whitespace().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(ln + 1, c + 1, format!("bad relation index '{tok}'")))?;
            if v > d {
                return Err(err(
                    ln + 1,
                    c + 1,
                    format!("relation index {v} exceeds d={d}"),
                ));
            }
            rel.push(v as u8);
            cols += 1;
        }
        if cols != n {
            return Err(err(ln + 1, cols + 1, format!("row has {cols} entries, expected {n}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(err(rows + 3, 1, format!("found {rows} rows, expected {n}")));
    }
    RelationPartition::new(n, d, rel).map_err(|e| err(3, 1, e.to_string()))
}

/// Emit a block assignment in partition format v1, one block index per line.
pub fn emit_partition(blocks: &[usize], f: usize) -> String {
    let mut out = String::new();
    out.push_str("PART v1\n");
    out.push_str(&format!("n={} f={}\n", blocks.len(), f));
    for &b in blocks {
        out.push_str(&b.to_string());
        out.push('\n');
    }
    out
}

/// Parse partition format v1. Block indices may be split across lines in
/// any whitespace arrangement.
pub fn parse_partition(text: &str) -> Result<(Vec<usize>, usize), ParseError> {
    let mut lines = text.lines().enumerate();
    let (ln, magic) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    if magic.trim() != "PART v1" {
        return Err(err(ln + 1, 1, "expected header 'PART v1'"));
    }
    let (ln, header) = lines
        .next()
        .ok_or_else(|| err(2, 1, "missing 'n=<int> f=<int>' line"))?;
    let (n, f) = parse_header_pair(header, ln + 1, "n", "f")?;
    let mut blocks = Vec::with_capacity(n);
    for (ln, line) in lines {
        for (c, tok) in line.split_whitespace().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(ln + 1, c + 1, format!("bad block index '{tok}'")))?;
            if v >= f {
                return Err(err(ln + 1, c + 1, format!("block index {v} exceeds f={f}")));
            }
            if blocks.len() == n {
                return Err(err(ln + 1, c + 1, format!("more than {n} entries")));
            }
            blocks.push(v);
        }
    }
    if blocks.len() != n {
        return Err(err(
            1,
            1,
            format!("found {} entries, expected {n}", blocks.len()),
        ));
    }
    Ok((blocks, f))
}

/// Emit one weighing matrix with its header line.
pub fn emit_weighing(a: usize, b: usize, weight: u64, w: &SignMatrix) -> String {
    let dim = w.dim();
    let mut out = format!("W a={a} b={b} w={weight}\n");
    for r in 0..dim {
        for c in 0..dim {
            if c > 0 {
                out.push(' ');
            }
            out.push_str(&w.entry(r, c).to_string());
        }
        out.push('\n');
    }
    out
}

/// Clique pair labels, weight and entry rows of a parsed weighing matrix.
pub type ParsedWeighing = (usize, usize, u64, Vec<Vec<i64>>);

/// Parse a weighing matrix file back into (a, b, weight, entries).
pub fn parse_weighing(text: &str) -> Result<ParsedWeighing, ParseError> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("W") {
        return Err(err(ln + 1, 1, "expected header 'W a=<int> b=<int> w=<int>'"));
    }
    let mut grab = |name: &str, col: usize| -> Result<u64, ParseError> {
        let tok = it
            .next()
            .ok_or_else(|| err(ln + 1, col, format!("missing {name}=<int>")))?;
        let val = tok
            .strip_prefix(name)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| err(ln + 1, col, format!("expected {name}=<int>, got '{tok}'")))?;
        val.parse::<u64>()
            .map_err(|_| err(ln + 1, col, format!("bad integer '{val}'")))
    };
    let a = grab("a", 2)? as usize;
    let b = grab("b", 3)? as usize;
    let weight = grab("w", 4)?;
    let mut rows = Vec::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (c, tok) in line.split_whitespace().enumerate() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(ln + 1, c + 1, format!("bad entry '{tok}'")))?;
            if !(-1..=1).contains(&v) {
                return Err(err(ln + 1, c + 1, format!("entry {v} outside -1..=1")));
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok((a, b, weight, rows))
}

/// Emit the codeword list: one binary string per line with its coset label.
pub fn emit_codewords(code: &GoldCode) -> String {
    let len = code.word_length();
    let mut out = String::new();
    for w in code.words() {
        out.push_str(&w.to_bit_string(len));
        out.push_str(&format!(" b={}\n", w.b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_round_trip() {
        let rp = RelationPartition::from_fn(4, 1, |x, y| usize::from(x != y));
        let text = emit_scheme(&rp);
        assert!(text.starts_with("ASCH v1\nn=4 d=1\n"));
        assert_eq!(parse_scheme(&text).unwrap(), rp);
    }

    #[test]
    fn scheme_parse_errors_name_position() {
        let e = parse_scheme("ASCH v1\nn=2 d=1\n0 1\n1 x\n").unwrap_err();
        assert_eq!((e.line, e.col), (4, 2));
        let e = parse_scheme("ASCH v2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_scheme("ASCH v1\nn=2 d=1\n0 1 1\n1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn partition_round_trip() {
        let blocks = vec![0, 1, 0, 1, 2, 2];
        let text = emit_partition(&blocks, 3);
        assert_eq!(parse_partition(&text).unwrap(), (blocks, 3));
        let e = parse_partition("PART v1\nn=2 f=1\n0\n1\n").unwrap_err();
        assert_eq!(e.line, 4);
    }
}
