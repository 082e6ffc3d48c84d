//! Plain-text edge lists.
//!
//! ```text
//! n 4
//! 0 1
//! 1 3
//! ```
//!
//! The header gives the node count, then one `i j` pair per line with `i < j`,
//! sorted lexicographically on write. Node-id lists (core membership) use the
//! same header followed by one id per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::Graph;

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "n {}", g.n())?;
    for (i, j) in g.edges() {
        writeln!(w, "{i} {j}")?;
    }
    w.flush()
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = r.lines().enumerate();
    let n = read_header(&mut lines)?;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected two node ids, got `{line}`"),
            });
        };
        let (i, j) = (parse_id(a, idx + 1, n)?, parse_id(b, idx + 1, n)?);
        if i == j {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("self-loop at node {i}"),
            });
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("duplicate edge {} {}", key.0, key.1),
            });
        }
        edges.push(key);
    }
    Graph::from_edges(n, edges)
}

pub fn save_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(g, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(BufReader::new(f))
}

pub fn write_id_list<W: Write>(n: usize, ids: &[usize], mut w: W) -> std::io::Result<()> {
    writeln!(w, "n {n}")?;
    for id in ids {
        writeln!(w, "{id}")?;
    }
    w.flush()
}

pub fn read_id_list<R: BufRead>(r: R) -> Result<(usize, Vec<usize>)> {
    let mut lines = r.lines().enumerate();
    let n = read_header(&mut lines)?;
    let mut ids = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if !line.is_empty() {
            ids.push(parse_id(line, idx + 1, n)?);
        }
    }
    Ok((n, ids))
}

fn read_header<I>(lines: &mut I) -> Result<usize>
where
    I: Iterator<Item = (usize, std::io::Result<String>)>,
{
    let (_, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n <count>` header".into(),
    })?;
    let first = first.map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("bad node count `{count}`"),
        }),
        _ => Err(Error::Parse {
            line: 1,
            msg: format!("expected `n <count>`, got `{first}`"),
        }),
    }
}

fn parse_id(s: &str, line: usize, n: usize) -> Result<usize> {
    let v: usize = s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad node id `{s}`"),
    })?;
    if v >= n {
        return Err(Error::Parse {
            line,
            msg: format!("node {v} out of range for n = {n}"),
        });
    }
    Ok(v)
}
