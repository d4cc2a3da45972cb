//! Instance acquisition: seeded random graphs, KONECT edge lists and the
//! native `p mbbp` text format.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Vertex};

/// SplitMix64 (Steele, Lea and Flood; public-domain reference by Vigna).
///
/// Frozen as the instance generator: the same seed yields the same stream on
/// every platform, and the algorithm is small enough to port to any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    /// Vertices per side.
    pub n: usize,
    /// Independent edge probability.
    pub p: f64,
    pub seed: u64,
}

/// `G(n, n, p)`: pairs are visited row-major and each one consumes exactly
/// one draw, kept iff the draw is `< p`.
pub fn gen_random(spec: &RandomSpec) -> BipartiteGraph {
    let n = spec.n;
    let mut rng = SplitMix64::new(spec.seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in n + 1..=2 * n {
            if rng.next_f64() < spec.p {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::build(n, n, &edges).expect("generated pairs are in range and distinct")
}

fn parse_id(field: &str, line: usize) -> Result<usize> {
    match field.parse::<usize>() {
        Ok(0) => Err(Error::parse(
            line,
            format!("vertex id must be positive, got `{field}`"),
        )),
        Ok(id) => Ok(id),
        Err(_) => Err(Error::parse(
            line,
            format!("expected a vertex id, got `{field}`"),
        )),
    }
}

/// Reads a bipartite KONECT `out.*` file. Columns one and two are ids in
/// separate 1-based spaces for the two sides; further columns are ignored and
/// repeated pairs are collapsed. Side sizes are the largest id seen.
pub fn parse_konect<R: BufRead>(source: R) -> Result<BipartiteGraph> {
    let mut pairs = Vec::new();
    let (mut u_count, mut v_count) = (0, 0);
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
            return Err(Error::parse(lineno, "expected two vertex ids"));
        };
        let u = parse_id(a, lineno)?;
        let v = parse_id(b, lineno)?;
        u_count = u_count.max(u);
        v_count = v_count.max(v);
        pairs.push((u, v));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let edges: Vec<(Vertex, Vertex)> = pairs.into_iter().map(|(u, v)| (u, u_count + v)).collect();
    BipartiteGraph::build(u_count, v_count, &edges)
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

/// Reads the native format:
///
/// ```text
/// c optional comments anywhere
/// p mbbp <|U|> <|V|> <|E|>
/// e <u> <v>
/// ```
pub fn read_native<R: BufRead>(source: R) -> Result<BipartiteGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || is_comment(trimmed) {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match (fields[0], header) {
            ("p", None) => {
                if fields.len() != 5 || fields[1] != "mbbp" {
                    return Err(Error::parse(lineno, "expected `p mbbp <U> <V> <E>`"));
                }
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::parse(lineno, format!("expected a count, got `{s}`")))
                };
                header = Some((num(fields[2])?, num(fields[3])?, num(fields[4])?));
            }
            ("p", Some(_)) => return Err(Error::parse(lineno, "duplicate problem line")),
            ("e", Some((nu, nv, _))) => {
                if fields.len() != 3 {
                    return Err(Error::parse(lineno, "expected `e <u> <v>`"));
                }
                let u = parse_id(fields[1], lineno)?;
                let v = parse_id(fields[2], lineno)?;
                if u > nu {
                    return Err(Error::parse(lineno, format!("{u} is not a U vertex")));
                }
                if v <= nu || v > nu + nv {
                    return Err(Error::parse(lineno, format!("{v} is not a V vertex")));
                }
                edges.push((u, v, lineno));
            }
            ("e", None) => return Err(Error::parse(lineno, "edge before problem line")),
            (other, _) => return Err(Error::parse(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let Some((nu, nv, ne)) = header else {
        return Err(Error::parse(last_line.max(1), "missing problem line"));
    };
    if edges.len() != ne {
        return Err(Error::parse(
            last_line,
            format!("header declares {ne} edges, found {}", edges.len()),
        ));
    }
    let pairs: Vec<(Vertex, Vertex)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    BipartiteGraph::build(nu, nv, &pairs).map_err(|e| match e {
        Error::DuplicateEdge(a, b) => {
            let line = edges
                .iter()
                .filter(|&&(u, v, _)| (u, v) == (a, b))
                .map(|&(_, _, l)| l)
                .nth(1)
                .unwrap_or(last_line);
            Error::parse(line, format!("duplicate edge ({a}, {b})"))
        }
        other => other,
    })
}

pub fn write_native<W: Write>(g: &BipartiteGraph, sink: &mut W) -> Result<()> {
    writeln!(
        sink,
        "p mbbp {} {} {}",
        g.u_count(),
        g.v_count(),
        g.edge_count()
    )?;
    for (u, v) in g.edges() {
        writeln!(sink, "e {u} {v}")?;
    }
    Ok(())
}

/// Reads either format: a file whose first meaningful line is a `p` line is
/// native, anything else is treated as KONECT.
pub fn read_instance(text: &str) -> Result<BipartiteGraph> {
    let native = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !is_comment(l) && !l.starts_with('%'))
        .is_some_and(|l| l.starts_with("p ") || l == "p");
    if native {
        read_native(text.as_bytes())
    } else {
        parse_konect(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::sample;

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 1234567 from the public reference implementation
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
        assert_eq!(r.next_u64(), 9817491932198370423);
    }

    #[test]
    fn gen_extremes() {
        let g = gen_random(&RandomSpec {
            n: 2,
            p: 1.0,
            seed: 99,
        });
        assert_eq!(g.edge_count(), 4);
        let g = gen_random(&RandomSpec {
            n: 7,
            p: 0.0,
            seed: 99,
        });
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn gen_is_deterministic() {
        let spec = RandomSpec {
            n: 50,
            p: 0.3,
            seed: 1,
        };
        assert_eq!(gen_random(&spec), gen_random(&spec));
        let other = RandomSpec { seed: 2, ..spec };
        assert_ne!(gen_random(&spec), gen_random(&other));
    }

    #[test]
    fn konect_cleaning() {
        let g = parse_konect("% header\n1 1 5 1000\n1 1\n2 1\n".as_bytes()).unwrap();
        assert_eq!((g.u_count(), g.v_count(), g.edge_count()), (2, 1, 2));
        assert!(g.has_edge(1, 3));
        assert!(g.has_edge(2, 3));
    }

    #[test]
    fn konect_errors() {
        match parse_konect("1 x\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_konect("% c\n\n1 2\n0 3\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_konect("5\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        let g = parse_konect("% only comments\n".as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 0);
    }

    #[test]
    fn native_round_trip_is_byte_identical() {
        let mut first = Vec::new();
        write_native(&sample(), &mut first).unwrap();
        let g = read_native(first.as_slice()).unwrap();
        assert_eq!(g, sample());
        let mut second = Vec::new();
        write_native(&g, &mut second).unwrap();
        assert_eq!(first, second);
        assert!(String::from_utf8(first)
            .unwrap()
            .starts_with("p mbbp 5 5 13\ne 1 6\ne 1 7\n"));
    }

    #[test]
    fn native_small_cases() {
        let g = read_native("c a comment\np mbbp 1 1 1\nc another\ne 1 2\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 2));

        let err = read_native("p mbbp 2 2 3\ne 1 3\ne 2 4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = read_native("p mbbp 2 2 1\ne 1 5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_native("p mbbp 2 2 1\ne 3 4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_native("p mbbp 2 2 2\ne 1 3\ne 1 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = read_native("e 1 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(read_native("".as_bytes()).is_err());
    }

    #[test]
    fn format_detection() {
        let g = read_instance("c x\np mbbp 1 1 1\ne 1 2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = read_instance("% bip\n1 1\n2 1\n").unwrap();
        assert_eq!((g.u_count(), g.v_count()), (2, 1));
    }
}
