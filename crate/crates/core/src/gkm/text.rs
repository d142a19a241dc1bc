//! Plain-text graph format.
//!
//! ```text
//! name pn:1
//! rank 2 picard 1
//! v 0
//! v 1
//! e 0 1 a0^1 a1^-1 1
//! ```
//!
//! Edge lines give both endpoint ids, the weight at the first endpoint as
//! `a<k>^<int>` factors, and the curve class as one comma-separated token.
//! Blank lines and `#` comments are ignored.

use crate::algebra::{a_var, ExponentVector};
use crate::error::{Error, Result};

use super::GkmGraph;

pub fn write_graph(g: &GkmGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", g.name));
    out.push_str(&format!("rank {} picard {}\n", g.rank, g.picard));
    for v in &g.vertices {
        out.push_str(&format!("v {v}\n"));
    }
    for e in &g.edges {
        let mut mono = Vec::new();
        for i in 0..e.weight.len() {
            if let Some(p) = e.weight.get_int(i).filter(|&p| p != 0) {
                mono.push(format!("a{}^{}", i - a_var(0), p));
            }
        }
        let class: Vec<String> = e.class.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "e {} {} {} {}\n",
            g.vertices[e.v],
            g.vertices[e.w],
            mono.join(" "),
            class.join(",")
        ));
    }
    out
}

fn parse_err(line: usize, msg: impl AsRef<str>) -> Error {
    Error::Parse(format!("line {}: {}", line + 1, msg.as_ref()))
}

/// Parses a single `a<k>^<p>` (or `a<k>`) factor.
pub fn parse_factor(tok: &str) -> Option<(usize, i64)> {
    let rest = tok.strip_prefix('a')?;
    let (idx, pow) = match rest.split_once('^') {
        Some((i, p)) => (i, p.parse::<i64>().ok()?),
        None => (rest, 1),
    };
    Some((idx.parse::<usize>().ok()?, pow))
}

pub fn parse_graph(text: &str) -> Result<GkmGraph> {
    let mut g: Option<GkmGraph> = None;
    let mut name = String::from("custom");
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "name" => {
                name = toks.get(1).ok_or_else(|| parse_err(ln, "missing name"))?.to_string();
                if let Some(g) = g.as_mut() {
                    g.name = name.clone();
                }
            }
            "rank" => {
                if toks.len() != 4 || toks[2] != "picard" {
                    return Err(parse_err(ln, "expected `rank <m> picard <r>`"));
                }
                let m = toks[1].parse().map_err(|_| parse_err(ln, "bad rank"))?;
                let r = toks[3].parse().map_err(|_| parse_err(ln, "bad picard rank"))?;
                g = Some(GkmGraph::new(name.clone(), m, r));
            }
            "v" => {
                let g = g.as_mut().ok_or_else(|| parse_err(ln, "vertex before header"))?;
                let id = toks.get(1).ok_or_else(|| parse_err(ln, "missing vertex id"))?;
                if g.vertices.iter().any(|v| v == id) {
                    return Err(parse_err(ln, format!("duplicate vertex {id}")));
                }
                g.add_vertex(*id);
            }
            "e" => {
                let g = g.as_mut().ok_or_else(|| parse_err(ln, "edge before header"))?;
                if toks.len() < 5 {
                    return Err(parse_err(ln, "expected `e <v> <v'> <monomial> <class>`"));
                }
                let find = |id: &str| {
                    g.vertices.iter().position(|v| v == id).ok_or_else(|| parse_err(ln, format!("unknown vertex {id}")))
                };
                let v = find(toks[1])?;
                let w = find(toks[2])?;
                let mut weight = ExponentVector::zero();
                for tok in &toks[3..toks.len() - 1] {
                    let (k, p) = parse_factor(tok).ok_or_else(|| parse_err(ln, format!("bad factor {tok}")))?;
                    weight = weight.add(&ExponentVector::var(a_var(k), p));
                }
                let class = toks[toks.len() - 1]
                    .split(',')
                    .map(|c| c.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(ln, "bad class vector"))?;
                g.add_edge(v, w, weight, class);
            }
            other => return Err(parse_err(ln, format!("unknown record `{other}`"))),
        }
    }
    g.ok_or_else(|| Error::Parse("missing `rank <m> picard <r>` header".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::{build_flag_sl, build_projective_space};

    #[test]
    fn round_trip() {
        for g in [build_projective_space(1), build_projective_space(3), build_flag_sl(3), build_flag_sl(4)] {
            let text = write_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(write_graph(&back), text);
        }
    }

    #[test]
    fn parse_example() {
        let g = parse_graph("rank 2 picard 1\nv 0\nv 1\ne 0 1 a0^1 a1^-1 1\n").unwrap();
        assert_eq!(g.edges[0].weight.to_string(), "a0 a1^-1");
        assert!(parse_graph("v 0").is_err());
        assert!(parse_graph("rank 2 picard 1\nv 0\ne 0 1 a0 1\n").is_err());
    }
}
