//! Plain-text node files: a header `# N=<odd> M=<count>` followed by one
//! position per line, written with enough digits to round-trip exactly.

use std::io::{BufRead, Write};

use super::{NodeError, NodeSet};
use crate::extprec::ExtReal;
use crate::kernel::Bandwidth;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header announces M = {announced} but {found} positions follow")]
    CountMismatch { announced: usize, found: usize },
    #[error(transparent)]
    Nodes(#[from] NodeError),
}

pub fn write_nodes<W: Write>(ns: &NodeSet, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# N={} M={}", ns.bandwidth().N(), ns.len())?;
    for t in ns.positions() {
        writeln!(w, "{}", t.to_roundtrip_string())?;
    }
    w.flush()
}

fn parse_header(line: &str, lineno: usize) -> Result<(u64, usize), FormatError> {
    let syntax = |msg: &str| FormatError::Syntax {
        line: lineno,
        msg: msg.to_string(),
    };
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| syntax("expected header '# N=<odd> M=<count>'"))?;
    let (mut big_n, mut m) = (None, None);
    for field in body.split_whitespace() {
        if let Some(v) = field.strip_prefix("N=") {
            big_n = Some(v.parse::<u64>().map_err(|_| syntax("bad N"))?);
        } else if let Some(v) = field.strip_prefix("M=") {
            m = Some(v.parse::<usize>().map_err(|_| syntax("bad M"))?);
        }
    }
    match (big_n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(syntax("header needs both N= and M=")),
    }
}

/// Blank lines and further `#` comment lines after the header are ignored.
pub fn read_nodes<R: BufRead>(r: R) -> Result<NodeSet, FormatError> {
    let mut header = None;
    let mut t = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(s, idx + 1)?);
            continue;
        }
        if s.starts_with('#') {
            continue;
        }
        let v: ExtReal = s.parse().map_err(|e| FormatError::Syntax {
            line: idx + 1,
            msg: format!("{e}"),
        })?;
        t.push(v);
    }
    let (big_n, m) = header.ok_or(FormatError::Syntax {
        line: 1,
        msg: "missing header".into(),
    })?;
    if t.len() != m {
        return Err(FormatError::CountMismatch {
            announced: m,
            found: t.len(),
        });
    }
    let bw = Bandwidth::from_big_n(big_n).map_err(|e| FormatError::Syntax {
        line: 1,
        msg: e.to_string(),
    })?;
    Ok(NodeSet::new(bw, t)?)
}
