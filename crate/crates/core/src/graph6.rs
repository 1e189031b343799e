//! graph6 text encoding.
//!
//! Header: one byte `63 + n` for `n <= 62`, or `126` followed by three bytes
//! carrying `n` in 18 bits for `63 <= n <= 258047`. Body: the upper triangle of
//! the adjacency matrix in column order `x(0,1), x(0,2), x(1,2), x(0,3), ...`,
//! six bits per byte, most significant first, each byte offset by 63, with the
//! final byte zero-padded.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const BIAS: u8 = 63;

/// Decodes a graph6 string after removing all ASCII whitespace.
pub fn decode_graph6_text(text: &str) -> Result<Graph> {
    let cleaned: Vec<u8> = text
        .bytes()
        .filter(|b| !b.is_ascii_whitespace())
        .collect();
    decode_bytes(&cleaned)
}

/// Decodes a graph6 string exactly as given.
pub fn decode_graph6(text: &str) -> Result<Graph> {
    decode_bytes(text.as_bytes())
}

fn decode_bytes(bytes: &[u8]) -> Result<Graph> {
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(
            pos,
            format!("byte {} outside the graph6 range 63..=126", bytes[pos]),
        ));
    }
    let (n, body_start) = match bytes.first() {
        None => return Err(Error::parse(0, "empty graph6 string")),
        Some(&126) => {
            if bytes.get(1) == Some(&126) {
                return Err(Error::capacity("graph6 36-bit size header"));
            }
            if bytes.len() < 4 {
                return Err(Error::parse(bytes.len(), "truncated size header"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| acc << 6 | (b - BIAS) as usize);
            (n, 4)
        }
        Some(&b) => ((b - BIAS) as usize, 1),
    };
    if n == 0 {
        return Err(Error::parse(0, "graph6 graph with zero vertices"));
    }
    if n > MAX_VERTICES {
        return Err(Error::capacity(format!(
            "graph6 graph has {n} vertices, at most {MAX_VERTICES} are supported"
        )));
    }
    let nbits = n * (n - 1) / 2;
    let need = nbits.div_ceil(6);
    let body = &bytes[body_start..];
    if body.len() < need {
        return Err(Error::parse(
            bytes.len(),
            format!("truncated adjacency data: expected {need} bytes, found {}", body.len()),
        ));
    }
    if body.len() > need {
        return Err(Error::parse(
            body_start + need,
            format!("trailing data after {need} adjacency bytes"),
        ));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - BIAS;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.link(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes `g` in graph6, using the short header whenever `n <= 62`.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(BIAS + n as u8);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(BIAS + (n >> shift & 0x3f) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let col = g.nbr_mask(j);
        for i in 0..j {
            acc = acc << 1 | (col >> i & 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(BIAS + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(BIAS + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const CAYLEY_G6: &str = "WsOPA?OG?[?E@C?o@??@??O?????????s??k?@@_?Cg??KO";

    #[test]
    fn triangle_encodes_as_bw() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(encode_graph6(&k3), "Bw");
        assert_eq!(decode_graph6("Bw").unwrap(), k3);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1).unwrap();
        assert_eq!(encode_graph6(&g), "@");
        assert_eq!(decode_graph6("@").unwrap(), g);
    }

    #[test]
    fn cayley_graph_is_cubic_on_24_vertices() {
        let g = decode_graph6(CAYLEY_G6).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.is_k_regular(), Some(3));
        assert_eq!(encode_graph6(&g), CAYLEY_G6);
    }

    #[test]
    fn whitespace_is_stripped_from_text() {
        let spaced = "W sOPA?OG?[?E@C?o@??@??O\n?????????s??k?@@_?Cg??KO\n";
        let g = decode_graph6_text(spaced).unwrap();
        assert_eq!(encode_graph6(&g), CAYLEY_G6);
        // the raw decoder does not strip
        assert!(matches!(decode_graph6(spaced), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(decode_graph6("B!"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode_graph6("D"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode_graph6("Bww"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(decode_graph6(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(decode_graph6("?"), Err(Error::Parse { .. })));
    }

    #[test]
    fn extended_header_is_accepted() {
        // n = 63 needs the long header
        let g = Graph::cycle(63).unwrap();
        let s = encode_graph6(&g);
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(decode_graph6(&s).unwrap(), g);
        // n = 5 written with the long header decodes to the same graph
        let c5 = Graph::cycle(5).unwrap();
        let short = encode_graph6(&c5);
        let long = format!("~??D{}", &short[1..]);
        assert_eq!(decode_graph6(&long).unwrap(), c5);
    }

    #[test]
    fn too_large_is_capacity_error() {
        // n = 65 in the long header
        let s = "~?@@";
        assert!(matches!(decode_graph6(s), Err(Error::Capacity(_))));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=30).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut g = Graph::empty(n).unwrap();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            g.link(i, j);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn roundtrip(g in arb_graph()) {
            let s = encode_graph6(&g);
            prop_assert_eq!(decode_graph6(&s).unwrap(), g.clone());
            prop_assert_eq!(encode_graph6(&decode_graph6(&s).unwrap()), s);
        }
    }
}
