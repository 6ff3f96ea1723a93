//! Plain edge-list format: a header line `n m`, then `m` lines `u v` with
//! 0-based node indices. Blank lines and `#` comments are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Graph, GraphError};

pub fn read_graph<R: Read>(reader: R) -> Result<Graph, GraphError> {
    let reader = BufReader::new(reader);
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields = parse_pair(content, line_no)?;
        match header {
            None => header = Some((fields.0, fields.1, line_no)),
            Some((n, m, _)) => {
                if edges.len() == m {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("more than the {m} edges declared in the header"),
                    });
                }
                let (u, v) = fields;
                if u >= n || v >= n {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("edge ({u}, {v}) outside 0..{n}"),
                    });
                }
                if u == v {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("self-loop at node {u}"),
                    });
                }
                edges.push((u, v));
            }
        }
    }

    let Some((n, m, header_line)) = header else {
        return Err(GraphError::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        });
    };
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: header_line,
            message: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(content: &str, line: usize) -> Result<(usize, usize), GraphError> {
    let mut tokens = content.split_whitespace();
    let mut next = |what: &str| -> Result<usize, GraphError> {
        let tok = tokens.next().ok_or_else(|| GraphError::Parse {
            line,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line,
            message: format!("invalid {what} `{tok}`"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = tokens.next() {
        return Err(GraphError::Parse {
            line,
            message: format!("unexpected trailing field `{extra}`"),
        });
    }
    Ok((a, b))
}

pub fn write_graph<W: Write>(g: &Graph, writer: W) -> Result<(), GraphError> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{} {}", g.node_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

impl Graph {
    pub fn read_from_path(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
        read_graph(File::open(path)?)
    }

    pub fn write_to_path(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        write_graph(self, File::create(path)?)
    }
}
