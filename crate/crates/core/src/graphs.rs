//! Graph generators and the edge-list file format.
//!
//! Edge-list files start with `n <vertex-count>` and then hold one `u v`
//! line per edge, 0-based, `u < v`, LF-terminated.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hardcore::Graph;

/// Star with hub `0` and leaves `1..=n`.
pub fn star(n: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
    Graph::new(n + 1, &edges)
}

/// Path `0 − 1 − … − (n−1)`.
pub fn path(n: usize) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// Size of the seed clique of [`barabasi_albert`].
pub const BA_SEED_CLIQUE: usize = 5;

/// Preferential attachment: a 5-clique, then every new vertex links to two
/// distinct existing vertices chosen with probability proportional to their
/// degree. The second endpoint is redrawn until it differs from the first;
/// degrees are updated once both edges are placed.
pub fn barabasi_albert<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < BA_SEED_CLIQUE {
        return Err(Error::InvalidParameter(format!(
            "Barabási–Albert graphs need at least {BA_SEED_CLIQUE} vertices, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(10 + 2 * (n - BA_SEED_CLIQUE));
    // every endpoint of every edge; a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..BA_SEED_CLIQUE {
        for v in u + 1..BA_SEED_CLIQUE {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for v in BA_SEED_CLIQUE..n {
        let first = endpoints[rng.random_range(0..endpoints.len())];
        let second = loop {
            let w = endpoints[rng.random_range(0..endpoints.len())];
            if w != first {
                break w;
            }
        };
        edges.push((first, v));
        edges.push((second, v));
        endpoints.extend([first, v, second, v]);
    }
    Graph::new(n, &edges)
}

/// Serializes `graph` in edge-list format.
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = format!("n {}\n", graph.vertex_count());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_edge_list(graph))?;
    Ok(())
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Parses edge-list text. Errors carry the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse {
        line: line + 1,
        message,
    };

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing header `n <vertex-count>`".into()))?;
    let mut fields = header.split_whitespace();
    let n = match (fields.next(), fields.next(), fields.next()) {
        (Some("n"), Some(count), None) => count
            .parse::<usize>()
            .map_err(|e| parse_err(header_line, format!("bad vertex count `{count}`: {e}")))?,
        _ => {
            return Err(parse_err(
                header_line,
                format!("expected `n <vertex-count>`, got `{header}`"),
            ))
        }
    };

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let ids: Vec<&str> = line.split_whitespace().collect();
        if ids.len() != 2 {
            return Err(parse_err(i, format!("expected `u v`, got `{line}`")));
        }
        let endpoint = |s: &str| -> Result<usize> {
            let id = s
                .parse::<usize>()
                .map_err(|e| parse_err(i, format!("bad vertex id `{s}`: {e}")))?;
            if id >= n {
                return Err(parse_err(i, format!("vertex {id} out of range for {n} vertices")));
            }
            Ok(id)
        };
        let (u, v) = (endpoint(ids[0])?, endpoint(ids[1])?);
        if u == v {
            return Err(parse_err(i, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(i, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    Graph::new(n, &edges).map_err(|e| parse_err(header_line, e.to_string()))
}

/// Textual graph source: `star:<n>`, `ba:<n>[:<seed>]`, `path:<n>`,
/// `complete:<n>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Star(usize),
    BarabasiAlbert { n: usize, seed: Option<u64> },
    Path(usize),
    Complete(usize),
    File(PathBuf),
}

impl GraphSpec {
    /// Builds the graph. `default_seed` seeds Barabási–Albert specs that do
    /// not carry their own seed.
    pub fn build(&self, default_seed: u64) -> Result<Graph> {
        match self {
            GraphSpec::Star(n) => star(*n),
            GraphSpec::BarabasiAlbert { n, seed } => {
                let mut rng = crate::rng::seeded(seed.unwrap_or(default_seed));
                barabasi_albert(*n, &mut rng)
            }
            GraphSpec::Path(n) => path(*n),
            GraphSpec::Complete(n) => complete(*n),
            GraphSpec::File(p) => read_edge_list(p),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognised graph spec `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let count = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match kind {
            "star" => Ok(GraphSpec::Star(count(rest)?)),
            "path" => Ok(GraphSpec::Path(count(rest)?)),
            "complete" | "k" => Ok(GraphSpec::Complete(count(rest)?)),
            "ba" => match rest.split_once(':') {
                Some((n, seed)) => Ok(GraphSpec::BarabasiAlbert {
                    n: count(n)?,
                    seed: Some(seed.parse().map_err(|_| bad())?),
                }),
                None => Ok(GraphSpec::BarabasiAlbert {
                    n: count(rest)?,
                    seed: None,
                }),
            },
            "file" if !rest.is_empty() => Ok(GraphSpec::File(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Star(n) => write!(f, "star:{n}"),
            GraphSpec::BarabasiAlbert { n, seed: Some(s) } => write!(f, "ba:{n}:{s}"),
            GraphSpec::BarabasiAlbert { n, seed: None } => write!(f, "ba:{n}"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn star_shapes() {
        let g = star(2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2)]);
        assert_eq!(star(1).unwrap().edge_count(), 1);
        let big = star(100).unwrap();
        assert_eq!(
            (big.vertex_count(), big.edge_count(), big.max_degree()),
            (101, 100, 100)
        );
        let lone = star(0).unwrap();
        assert_eq!((lone.vertex_count(), lone.edge_count()), (1, 0));
    }

    #[test]
    fn ba_seed_clique_and_edge_count() {
        let g = barabasi_albert(5, &mut seeded(1)).unwrap();
        assert_eq!(g.edge_count(), 10);
        let g = barabasi_albert(100, &mut seeded(1)).unwrap();
        assert_eq!(g.vertex_count(), 100);
        assert_eq!(g.edge_count(), 10 + 2 * 95);
        assert!(matches!(
            barabasi_albert(3, &mut seeded(1)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn ba_is_deterministic_under_seed() {
        let a = barabasi_albert(60, &mut seeded(9)).unwrap();
        let b = barabasi_albert(60, &mut seeded(9)).unwrap();
        let c = barabasi_albert(60, &mut seeded(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ba_first_growth_step_is_uniform_on_the_clique() {
        // all seed degrees equal 4, so each seed vertex is hit with
        // probability 2/5 as one of two distinct endpoints; per endpoint 1/5
        let reps = 10_000;
        let mut counts = [0usize; 5];
        let mut rng = seeded(3);
        for _ in 0..reps {
            let g = barabasi_albert(6, &mut rng).unwrap();
            for &w in g.neighbors(5) {
                counts[w] += 1;
            }
        }
        for c in counts {
            let freq = c as f64 / (2 * reps) as f64;
            assert!((freq - 0.2).abs() < 0.01, "frequency {freq}");
        }
    }

    #[test]
    fn edge_list_format() {
        assert_eq!(to_edge_list(&star(2).unwrap()), "n 3\n0 1\n0 2\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_edge_list("n 2\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("n 2\n0 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("n 3\n0 1\n1 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_edge_list("n 3\n0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list("m 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn graph_specs_round_trip_through_text() {
        for s in ["star:4", "ba:100:7", "ba:50", "path:5", "complete:3", "file:g.el"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("star".parse::<GraphSpec>().is_err());
        assert!("tree:4".parse::<GraphSpec>().is_err());
    }
}
