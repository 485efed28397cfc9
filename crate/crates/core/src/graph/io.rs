use super::{Edge, EdgeUpdate, Graph, Interner, Sign, UpdateBatch, VertexId};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// A parsed edge-list file plus the dictionaries built while reading it.
#[derive(Debug, Clone, Default)]
pub struct EdgeList {
    pub edges: Vec<Edge>,
    pub vertices: Interner,
    pub labels: Interner,
}

impl EdgeList {
    /// Internal id of an external vertex token.
    pub fn vertex(&self, token: &str) -> Option<VertexId> {
        self.vertices.get(token).map(VertexId)
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.vertices.len(), &self.edges)
    }
}

fn parse_weight(token: &str, line: usize) -> Result<u64> {
    let w: i64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("weight `{token}` is not an integer")))?;
    if w < 0 {
        return Err(Error::Validation {
            line,
            message: format!("negative weight {w}"),
        });
    }
    if w == 0 {
        return Err(Error::Validation {
            line,
            message: "weight must be at least 1".into(),
        });
    }
    Ok(w as u64)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

/// Parses `src dst [weight] [label]` lines. Comment lines start with `#`.
pub fn parse_edge_list(text: &str, weighted: bool, labeled: bool) -> Result<EdgeList> {
    let mut out = EdgeList::default();
    for (line, content) in data_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let need = 2 + weighted as usize + labeled as usize;
        if tokens.len() < need {
            return Err(Error::parse(
                line,
                format!("expected at least {need} fields, found {}", tokens.len()),
            ));
        }
        let weight = if weighted {
            parse_weight(tokens[2], line)?
        } else {
            1
        };
        let label = if labeled {
            out.labels.intern(tokens[2 + weighted as usize])
        } else {
            0
        };
        let src = VertexId(out.vertices.intern(tokens[0]));
        let dst = VertexId(out.vertices.intern(tokens[1]));
        out.edges.push(Edge {
            src,
            dst,
            label,
            weight,
        });
    }
    Ok(out)
}

/// Reads an edge-list file and builds the version-0 graph.
pub fn load_edge_list(path: &Path, weighted: bool, labeled: bool) -> Result<(Graph, EdgeList)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let list = parse_edge_list(&text, weighted, labeled)?;
    Ok((list.graph(), list))
}

/// Parses `+|- src dst [weight] [label]` lines; a blank line ends a batch.
///
/// Vertex and label tokens are resolved through (and may extend) the given
/// dictionaries. For unlabeled data the label column, when present, must be
/// the integer code. Versions are assigned consecutively from `first_version`.
pub fn parse_update_stream(
    text: &str,
    vertices: &mut Interner,
    labels: &mut Interner,
    labeled: bool,
    first_version: u64,
) -> Result<Vec<UpdateBatch>> {
    let mut batches = Vec::new();
    let mut current: Vec<EdgeUpdate> = Vec::new();
    let flush = |current: &mut Vec<EdgeUpdate>, batches: &mut Vec<UpdateBatch>| {
        if !current.is_empty() {
            let version = first_version + batches.len() as u64;
            batches.push(UpdateBatch::new(version, std::mem::take(current)));
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            flush(&mut current, &mut batches);
            continue;
        }
        if t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() < 3 || tokens.len() > 5 {
            return Err(Error::parse(line, "expected `+|- src dst [weight] [label]`"));
        }
        let sign = match tokens[0] {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            other => return Err(Error::parse(line, format!("bad sign `{other}`"))),
        };
        let weight = match tokens.get(3) {
            Some(tok) => parse_weight(tok, line)?,
            None => 1,
        };
        let label = match tokens.get(4) {
            Some(tok) if labeled => labels.intern(tok),
            Some(tok) => tok
                .parse()
                .map_err(|_| Error::parse(line, format!("label code `{tok}` is not an integer")))?,
            None => 0,
        };
        let src = VertexId(vertices.intern(tokens[1]));
        let dst = VertexId(vertices.intern(tokens[2]));
        current.push(EdgeUpdate {
            edge: Edge {
                src,
                dst,
                label,
                weight,
            },
            sign,
        });
    }
    flush(&mut current, &mut batches);
    Ok(batches)
}

/// Serializes batches in the update-stream format, using external names
/// where the dictionaries know them.
pub fn write_update_stream(batches: &[UpdateBatch], vertices: &Interner, labels: &Interner) -> String {
    let mut out = String::new();
    for (n, b) in batches.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        for u in &b.entries {
            let v = |id: VertexId| {
                vertices
                    .name(id.0)
                    .map_or_else(|| id.0.to_string(), str::to_string)
            };
            let label = labels
                .name(u.edge.label)
                .map_or_else(|| u.edge.label.to_string(), str::to_string);
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                u.sign.as_char(),
                v(u.edge.src),
                v(u.edge.dst),
                u.edge.weight,
                label
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "a b 30\nb c 10\nc d 10\na d 20\nd e 10\na e 10\nd c 20\n";

    #[test]
    fn loads_running_example() {
        let list = parse_edge_list(FIG2, true, false).unwrap();
        let g = list.graph();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(list.vertex("a"), Some(VertexId(0)));
        assert_eq!(list.vertex("e"), Some(VertexId(4)));
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = parse_edge_list("", true, false).unwrap().graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn malformed_weight_reports_line() {
        let err = parse_edge_list("3 5 x", true, false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn negative_weight_is_validation_error() {
        let err = parse_edge_list("# c\n1 2 4\n3 5 -2\n", true, false).unwrap_err();
        assert!(matches!(err, Error::Validation { line: 3, .. }));
    }

    #[test]
    fn snap_style_extra_columns_are_ignored_when_unweighted() {
        let list = parse_edge_list("1 2 17\n2 3\n", false, false).unwrap();
        assert!(list.edges.iter().all(|e| e.weight == 1));
    }

    #[test]
    fn labels_are_interned_in_first_seen_order() {
        let list = parse_edge_list("s x knows\nx y likes\ny z knows\n", false, true).unwrap();
        assert_eq!(list.labels.get("knows"), Some(0));
        assert_eq!(list.labels.get("likes"), Some(1));
        assert_eq!(list.edges[2].label, 0);
    }

    #[test]
    fn update_stream_round_trips() {
        let list = parse_edge_list(FIG2, true, false).unwrap();
        let (mut v, mut l) = (list.vertices.clone(), list.labels.clone());
        let text = "- a d 20 0\n+ a d 100 0\n\n- b c 10 0\n+ b c 100 0\n";
        let batches = parse_update_stream(text, &mut v, &mut l, false, 1).unwrap();
        assert_eq!(batches.len(), 2);
        assert_eq!(batches[1].version, 2);
        assert_eq!(batches[0].entries[1].edge.weight, 100);
        let back = write_update_stream(&batches, &v, &l);
        assert_eq!(back, text);
    }

    #[test]
    fn update_stream_rejects_bad_sign() {
        let mut v = Interner::new();
        let mut l = Interner::new();
        let err = parse_update_stream("* 1 2 3 0", &mut v, &mut l, false, 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
