//! Line-oriented text formats.
//!
//! Instances:
//!
//! ```text
//! colors black white
//! target black
//! k 2
//! v 0 black 1
//! v 1 white 1
//! e 0 1
//! ```
//!
//! Headers come first, then every `v <id> <color> <weight>`, then every
//! `e <a> <b>`. An optional `mode disconnected` header marks a disjoint
//! union of paths that may be evaluated but not solved. Vertex ids must
//! cover `0..n` exactly. `#` starts a comment anywhere on a line.
//!
//! Partitions list one block per line as whitespace-separated vertex ids.
//! Source graphs for the clique construction are `n <count>` followed by
//! `e <a> <b>` lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::eval::Partition;
use crate::instance::{ColorId, Instance, Mode};
use crate::reductions::SourceGraph;

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn int<T: std::str::FromStr>(line: usize, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed integer '{token}'")))
}

fn arity(line: usize, tokens: &[&str], n: usize) -> Result<()> {
    if tokens.len() != n + 1 {
        return Err(Error::parse(
            line,
            format!("'{}' takes {n} argument(s), got {}", tokens[0], tokens.len() - 1),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut colors: Option<Vec<String>> = None;
    let mut target: Option<String> = None;
    let mut k: Option<usize> = None;
    let mut mode = Mode::Connected;
    let mut vertices: Vec<Option<(ColorId, u64)>> = Vec::new();
    let mut edges = Vec::new();
    let mut color_index: HashMap<String, usize> = HashMap::new();
    let mut last_line = 0;

    for (line, tokens) in lines(text) {
        last_line = line;
        let headers_done = !vertices.is_empty() || !edges.is_empty();
        let header = |seen: bool| -> Result<()> {
            if seen {
                return Err(Error::parse(line, format!("repeated header '{}'", tokens[0])));
            }
            if headers_done {
                return Err(Error::parse(
                    line,
                    format!("header '{}' after vertex or edge lines", tokens[0]),
                ));
            }
            Ok(())
        };
        match tokens[0] {
            "colors" => {
                header(colors.is_some())?;
                if tokens.len() < 2 {
                    return Err(Error::parse(line, "'colors' needs at least one name"));
                }
                let names: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                for (i, name) in names.iter().enumerate() {
                    if color_index.insert(name.clone(), i).is_some() {
                        return Err(Error::parse(line, format!("duplicate color '{name}'")));
                    }
                }
                colors = Some(names);
            }
            "target" => {
                header(target.is_some())?;
                arity(line, &tokens, 1)?;
                target = Some(tokens[1].to_string());
            }
            "k" => {
                header(k.is_some())?;
                arity(line, &tokens, 1)?;
                k = Some(int(line, tokens[1])?);
            }
            "mode" => {
                header(mode == Mode::Disconnected)?;
                arity(line, &tokens, 1)?;
                mode = match tokens[1] {
                    "disconnected" => Mode::Disconnected,
                    "connected" => Mode::Connected,
                    other => return Err(Error::parse(line, format!("unknown mode '{other}'"))),
                };
            }
            "v" => {
                if colors.is_none() || target.is_none() || k.is_none() {
                    return Err(Error::parse(line, "missing header before vertex lines"));
                }
                if !edges.is_empty() {
                    return Err(Error::parse(line, "vertex line after edge lines"));
                }
                arity(line, &tokens, 3)?;
                let id: usize = int(line, tokens[1])?;
                let color = *color_index
                    .get(tokens[2])
                    .ok_or_else(|| Error::parse(line, format!("unknown color '{}'", tokens[2])))?;
                let weight: u64 = int(line, tokens[3])?;
                if id >= vertices.len() {
                    if id > 50_000_000 {
                        return Err(Error::parse(line, format!("vertex id {id} is too large")));
                    }
                    vertices.resize(id + 1, None);
                }
                if vertices[id].is_some() {
                    return Err(Error::parse(line, format!("duplicate vertex {id}")));
                }
                vertices[id] = Some((ColorId(color), weight));
            }
            "e" => {
                arity(line, &tokens, 2)?;
                let a: usize = int(line, tokens[1])?;
                let b: usize = int(line, tokens[2])?;
                for x in [a, b] {
                    if vertices.get(x).is_none_or(Option::is_none) {
                        return Err(Error::parse(line, format!("edge references unknown vertex {x}")));
                    }
                }
                edges.push((a, b));
            }
            other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        }
    }

    let (Some(colors), Some(target), Some(k)) = (colors, target, k) else {
        return Err(Error::parse(last_line.max(1), "missing header"));
    };
    let target = ColorId(
        *color_index
            .get(&target)
            .ok_or_else(|| Error::Format(format!("target '{target}' is not a declared color")))?,
    );
    if let Some(gap) = vertices.iter().position(Option::is_none) {
        return Err(Error::Format(format!("vertex ids must cover 0..n; {gap} is missing")));
    }
    let (color_of, weights) = vertices.into_iter().map(Option::unwrap).unzip();
    Ok(Instance {
        colors,
        target,
        k,
        mode,
        weights,
        color_of,
        edges,
    })
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    if inst.mode == Mode::Disconnected {
        out.push_str("# mode disconnected\n");
    }
    let _ = writeln!(out, "colors {}", inst.colors.join(" "));
    let _ = writeln!(out, "target {}", inst.color_name(inst.target));
    let _ = writeln!(out, "k {}", inst.k);
    if inst.mode == Mode::Disconnected {
        out.push_str("mode disconnected\n");
    }
    for (v, (&c, &w)) in inst.color_of.iter().zip(&inst.weights).enumerate() {
        let _ = writeln!(out, "v {v} {} {w}", inst.color_name(c));
    }
    for &(a, b) in &inst.edges {
        let _ = writeln!(out, "e {a} {b}");
    }
    out
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut blocks = Vec::new();
    for (line, tokens) in lines(text) {
        let block = tokens.iter().map(|t| int(line, t)).collect::<Result<Vec<usize>>>()?;
        blocks.push(block);
    }
    Ok(Partition::new(blocks))
}

pub fn write_partition(part: &Partition) -> String {
    let mut out = String::new();
    for block in &part.blocks {
        let ids: Vec<String> = block.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_source_graph(text: &str) -> Result<SourceGraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (line, tokens) in lines(text) {
        match tokens[0] {
            "n" => {
                if n.is_some() {
                    return Err(Error::parse(line, "repeated header 'n'"));
                }
                arity(line, &tokens, 1)?;
                n = Some(int(line, tokens[1])?);
            }
            "e" => {
                let Some(count) = n else {
                    return Err(Error::parse(line, "missing header 'n' before edges"));
                };
                arity(line, &tokens, 2)?;
                let (a, b): (usize, usize) = (int(line, tokens[1])?, int(line, tokens[2])?);
                if a >= count || b >= count {
                    return Err(Error::parse(line, format!("edge {a}-{b} references an unknown vertex")));
                }
                edges.push((a, b));
            }
            other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, "missing header"))?;
    SourceGraph::new(n, edges)
}

pub fn write_source_graph(graph: &SourceGraph) -> String {
    let mut out = format!("n {}\n", graph.n);
    for &(a, b) in &graph.edges {
        let _ = writeln!(out, "e {a} {b}");
    }
    out
}
