//! graph6 encoding (as used by nauty/geng).
//!
//! The vertex count is written as `N(n)`: one byte `n + 63` for `n <= 62`,
//! `126` plus three 6-bit groups for `n <= 258047`, and `126 126` plus six
//! groups above that. The upper triangle is then streamed column by column
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed six bits per byte, padded
//! with zeros, and offset by 63.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

const HEADER: &str = ">>graph6<<";

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Encodes an edge list on `n` vertices (1-based labels).
pub fn encode_edges(n: usize, edges: &[(usize, usize)]) -> Result<String> {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut bitvec = vec![false; pairs];
    for &(i, j) in edges {
        let (i, j) = (i.min(j), i.max(j));
        if i == 0 || j > n || i == j {
            return Err(Error::Graph6(format!("edge ({i},{j}) invalid for n = {n}")));
        }
        let (i, j) = (i - 1, j - 1);
        bitvec[j * (j - 1) / 2 + i] = true;
    }
    let mut out = Vec::with_capacity(8 + pairs / 6 + 1);
    encode_size(n, &mut out);
    for chunk in bitvec.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

pub fn to_graph6(g: &SimpleGraph) -> String {
    encode_edges(g.n(), &g.edges()).expect("SimpleGraph edges are valid")
}

/// Decodes a graph6 string into `(n, edges)`, accepting an optional
/// `>>graph6<<` header and trailing newline.
pub fn decode_edges(s: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside the printable range 63..=126")));
    }
    let group = |slice: &[u8]| slice.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, body) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Error::Graph6("truncated size field".into()));
            }
            (group(&rest[..6]), &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::Graph6("truncated size field".into()));
            }
            (group(&rest[..3]), &rest[3..])
        }
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let expected = pairs.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Graph6(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i + 1, j + 1));
            }
            k += 1;
            if k >= pairs {
                break 'outer;
            }
        }
    }
    if pairs % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        if last & ((1 << (6 - pairs % 6)) - 1) != 0 {
            return Err(Error::Graph6("non-zero padding bits".into()));
        }
    }
    edges.sort_unstable();
    Ok((n, edges))
}

pub fn from_graph6(s: &str) -> Result<SimpleGraph> {
    let (n, edges) = decode_edges(s)?;
    SimpleGraph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_strings() {
        assert_eq!(to_graph6(&SimpleGraph::new(0).unwrap()), "?");
        assert_eq!(to_graph6(&SimpleGraph::new(1).unwrap()), "@");
        assert_eq!(to_graph6(&SimpleGraph::complete(2).unwrap()), "A_");
        assert_eq!(to_graph6(&SimpleGraph::complete(4).unwrap()), "C~");
        assert_eq!(to_graph6(&SimpleGraph::complete(5).unwrap()), "D~{");
        // a-c, a-e, b-d, d-e on vertices a..e
        let g = SimpleGraph::from_edges(5, [(1, 3), (1, 5), (2, 4), (4, 5)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
    }

    #[test]
    fn decodes_with_header() {
        let g = from_graph6(">>graph6<<DQc\n").unwrap();
        assert_eq!(g.edges(), vec![(1, 3), (1, 5), (2, 4), (4, 5)]);
    }

    #[test]
    fn large_size_field() {
        let s = encode_edges(100, &[(1, 100)]).unwrap();
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 99]);
        assert_eq!(decode_edges(&s).unwrap(), (100, vec![(1, 100)]));
        let mut huge = vec![126u8, 126];
        huge.extend([0u8, 0, 0, 63, 0, 0].iter().map(|b| b + 63));
        // only the size field; the body would hold ~3.3e10 bits
        assert!(matches!(decode_edges(std::str::from_utf8(&huge).unwrap()), Err(Error::Graph6(_))));
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode_edges("").is_err());
        assert!(decode_edges("C").is_err());
        assert!(decode_edges("C~~").is_err());
        // n = 2 has one data bit; the five padding bits must be zero.
        assert!(decode_edges("A`").is_err());
        assert!(decode_edges("A\u{7f}").is_err());
    }
}
