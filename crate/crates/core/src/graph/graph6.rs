//! graph6 reading and writing. Only single-byte order headers (orders up to
//! 62) are accepted on input.

use thiserror::Error;

use super::SimpleGraph;

const HEADER: &str = ">>graph6<<";
const MAX_ORDER: usize = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {offset}: character {found:?} is outside the graph6 range 63..=126")]
    BadCharacter { offset: usize, found: char },
    #[error("byte {offset}: order header encodes more than {MAX_ORDER} vertices")]
    OrderTooLarge { offset: usize },
    #[error("byte {offset}: expected {expected} data bytes for order {order}, found {found}")]
    Truncated { offset: usize, order: usize, expected: usize, found: usize },
    #[error("byte {offset}: {extra} trailing bytes after the adjacency data")]
    Trailing { offset: usize, extra: usize },
    #[error("byte {offset}: padding bits must be zero")]
    NonZeroPadding { offset: usize },
}

/// Parses one graph6 line (an optional `>>graph6<<` header and surrounding
/// whitespace are tolerated).
pub fn parse_graph6(text: &str) -> Result<SimpleGraph, Graph6Error> {
    let trimmed_start = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = trimmed_start;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadCharacter { offset: base + i, found: b as char });
        }
    }
    if bytes[0] == 126 {
        return Err(Graph6Error::OrderTooLarge { offset: base });
    }
    let order = (bytes[0] - 63) as usize;
    let nbits = order * order.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() < expected {
        return Err(Graph6Error::Truncated {
            offset: base + bytes.len(),
            order,
            expected,
            found: data.len(),
        });
    }
    if data.len() > expected {
        return Err(Graph6Error::Trailing {
            offset: base + 1 + expected,
            extra: data.len() - expected,
        });
    }

    let mut g = SimpleGraph::empty(order);
    let mut k = 0usize;
    for v in 1..order {
        for u in 0..v {
            let byte = data[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    if !nbits.is_multiple_of(6) {
        let last = data[expected - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonZeroPadding { offset: base + expected });
        }
    }
    Ok(g)
}

/// Encodes a graph as graph6 (no header). Orders above 62 use the four-byte
/// order prefix.
pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= MAX_ORDER {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}
