//! Extended-DIMACS graph files.
//!
//! ```text
//! c <comment>
//! p cut <n> <m> <directed|undirected>
//! n <id> s
//! n <id> t
//! a <u> <v> <cap>
//! ```
//!
//! Vertex ids are 1-based in files and 0-based in memory. For undirected
//! graphs the `a` lines are unordered pairs. Zero capacities are rejected.

use mincut_core::Graph;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut source: Option<usize> = None;
    let mut sink: Option<usize> = None;
    let mut arcs: Vec<(usize, usize, u64)> = Vec::new();
    let mut last = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err(lineno, "duplicate problem line"));
                }
                if fields.len() != 5 || fields[1] != "cut" {
                    return Err(err(lineno, "expected `p cut <n> <m> <directed|undirected>`"));
                }
                let n: usize = fields[2].parse().map_err(|_| err(lineno, "bad vertex count"))?;
                let m: usize = fields[3].parse().map_err(|_| err(lineno, "bad edge count"))?;
                let directed = match fields[4] {
                    "directed" => true,
                    "undirected" => false,
                    other => return Err(err(lineno, format!("unknown mode `{other}`"))),
                };
                header = Some((n, m, directed));
            }
            "n" => {
                if fields.len() != 3 {
                    return Err(err(lineno, "expected `n <id> <s|t>`"));
                }
                let id: usize = fields[1].parse().map_err(|_| err(lineno, "bad vertex id"))?;
                if id == 0 {
                    return Err(err(lineno, "vertex ids are 1-based"));
                }
                match fields[2] {
                    "s" => {
                        if source.replace(id - 1).is_some() {
                            return Err(err(lineno, "duplicate source line"));
                        }
                    }
                    "t" => {
                        if sink.replace(id - 1).is_some() {
                            return Err(err(lineno, "duplicate sink line"));
                        }
                    }
                    other => return Err(err(lineno, format!("unknown terminal `{other}`"))),
                }
            }
            "a" => {
                if fields.len() != 4 {
                    return Err(err(lineno, "expected `a <u> <v> <cap>`"));
                }
                let u: usize = fields[1].parse().map_err(|_| err(lineno, "bad tail id"))?;
                let v: usize = fields[2].parse().map_err(|_| err(lineno, "bad head id"))?;
                let cap: u64 = fields[3].parse().map_err(|_| err(lineno, "bad capacity"))?;
                if u == 0 || v == 0 {
                    return Err(err(lineno, "vertex ids are 1-based"));
                }
                if cap == 0 {
                    return Err(err(lineno, "zero capacities are rejected"));
                }
                arcs.push((u - 1, v - 1, cap));
            }
            other => return Err(err(lineno, format!("unknown record `{other}`"))),
        }
    }

    let (n, m, directed) = header.ok_or_else(|| err(last, "missing problem line"))?;
    let s = source.ok_or_else(|| err(last, "missing source line"))?;
    let t = sink.ok_or_else(|| err(last, "missing sink line"))?;
    if arcs.len() != m {
        return Err(err(last, format!("problem line declares {m} arcs, found {}", arcs.len())));
    }
    for &(u, v, _) in &arcs {
        if u >= n || v >= n {
            return Err(err(last, format!("arc endpoint out of range 1..={n}")));
        }
    }
    let built = if directed {
        Graph::directed(n, s, t, &arcs)
    } else {
        Graph::undirected(n, s, t, &arcs)
    };
    built.map_err(|e| err(last, e.to_string()))
}

/// Renders a graph back to the file format, mostly for `verify` artifacts.
pub fn render_graph(g: &Graph) -> String {
    let mut out = String::new();
    let mode = if g.is_directed() { "directed" } else { "undirected" };
    out.push_str(&format!("p cut {} {} {}\n", g.n(), g.m(), mode));
    out.push_str(&format!("n {} s\n", g.s() + 1));
    out.push_str(&format!("n {} t\n", g.t() + 1));
    for e in g.edges() {
        out.push_str(&format!("a {} {} {}\n", e.u + 1, e.v + 1, e.cap));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_t1() {
        let text = "c fixture T1\np cut 3 3 directed\nn 1 s\nn 3 t\na 1 2 2\na 2 3 1\na 1 3 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!((g.s(), g.t()), (0, 2));
        assert!(g.is_directed());
    }

    #[test]
    fn missing_sink_is_rejected() {
        let text = "p cut 2 1 directed\nn 1 s\na 1 2 1\n";
        assert!(parse_graph(text).is_err());
    }

    #[test]
    fn zero_capacity_is_rejected() {
        let text = "p cut 2 1 directed\nn 1 s\nn 2 t\na 1 2 0\n";
        let e = parse_graph(text).unwrap_err();
        assert!(e.message.contains("zero"));
    }

    #[test]
    fn roundtrip() {
        let text = "p cut 3 2 undirected\nn 1 s\nn 3 t\na 1 2 1\na 2 3 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(parse_graph(&render_graph(&g)).unwrap(), g);
    }
}
