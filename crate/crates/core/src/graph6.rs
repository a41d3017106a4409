//! graph6 encoding (short form, up to 62 vertices).
//!
//! Byte `63 + n`, then the upper triangle of the adjacency matrix read column
//! by column (`(0,1), (0,2), (1,2), (0,3), ...`), six bits per byte, each
//! byte offset by 63. Decoding yields edges in lexicographic order.

use crate::error::Graph6Error;
use crate::graph::SimpleGraph;

pub fn encode(g: &SimpleGraph) -> String {
    let n = g.vertex_count();
    assert!(n <= 62, "short graph6 form supports at most 62 vertices");
    let mut out = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut bits = 0;
    for v in 1..n {
        let row = g.neighbors(v);
        for u in 0..v {
            acc = acc << 1 | (row >> u & 1) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn decode(s: &str) -> Result<SimpleGraph, Graph6Error> {
    let bytes = s.trim_end_matches(['\n', '\r']).as_bytes();
    let (&head, body) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    for (offset, &byte) in bytes.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::BadByte { byte, offset });
        }
    }
    if head == 126 {
        return Err(Graph6Error::Unsupported);
    }
    let n = (head - 63) as usize;
    let total = n * n.saturating_sub(1) / 2;
    let expected = total.div_ceil(6);
    if body.len() != expected {
        return Err(Graph6Error::Length { n, expected, found: body.len() });
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    if !total.is_multiple_of(6) {
        let last = body[expected - 1] - 63;
        if last & ((1u8 << (6 - total % 6)) - 1) != 0 {
            return Err(Graph6Error::Padding);
        }
    }
    edges.sort_unstable();
    Ok(SimpleGraph::new(n, &edges).expect("graph6 edges are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_c_tilde() {
        assert_eq!(encode(&SimpleGraph::complete(4)), "C~");
    }

    #[test]
    fn single_vertex() {
        assert_eq!(encode(&SimpleGraph::empty(1)), "@");
        assert_eq!(decode("@").unwrap(), SimpleGraph::empty(1));
        assert_eq!(encode(&SimpleGraph::empty(0)), "?");
    }

    #[test]
    fn matches_published_example() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4
        let g = SimpleGraph::new(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g), "DQc");
        assert_eq!(decode("DQc").unwrap().edges(), &[(0, 2), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert!(matches!(decode("C"), Err(Graph6Error::Length { .. })));
        assert!(matches!(decode("C~~"), Err(Graph6Error::Length { .. })));
        assert!(matches!(decode("C\x7f"), Err(Graph6Error::BadByte { .. })));
        // K3 is "Bw"; "B~" sets padding bits
        assert!(decode("Bw").is_ok());
        assert_eq!(decode("B~"), Err(Graph6Error::Padding));
    }
}
