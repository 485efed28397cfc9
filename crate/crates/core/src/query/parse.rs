use super::{LabelAutomaton, QuerySpec, DEFAULT_DAMPING, DEFAULT_PAGERANK_ITERATIONS};
use crate::error::{Error, Result};
use crate::graph::{Interner, VertexId};

/// Parses a query file, one query per line:
///
/// ```text
/// spsp <src> <dst>
/// khop <src> <k>
/// rpq <src> Q1 <a> | Q2 <a> <b> | Q3 <a> <b> <c> <d> <e>
/// wcc
/// pagerank [iterations] [damping]
/// ```
///
/// Vertex and label tokens are resolved against the dataset dictionaries.
pub fn parse_query_file(text: &str, vertices: &Interner, labels: &Interner) -> Result<Vec<QuerySpec>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tok: Vec<&str> = t.split_whitespace().collect();
        let vertex = |s: &str| {
            vertices
                .get(s)
                .map(VertexId)
                .ok_or_else(|| Error::QueryCompile(format!("line {line}: unknown vertex `{s}`")))
        };
        let label = |s: &str| {
            labels
                .get(s)
                .ok_or_else(|| Error::QueryCompile(format!("line {line}: unknown label `{s}`")))
        };
        let arity = |n: usize| {
            if tok.len() == n {
                Ok(())
            } else {
                Err(Error::parse(
                    line,
                    format!("`{}` takes {} arguments, found {}", tok[0], n - 1, tok.len() - 1),
                ))
            }
        };
        let number = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("`{s}` is not a non-negative integer")))
        };
        let spec = match tok[0].to_ascii_lowercase().as_str() {
            "spsp" => {
                arity(3)?;
                QuerySpec::Spsp {
                    source: vertex(tok[1])?,
                    target: vertex(tok[2])?,
                }
            }
            "khop" => {
                arity(3)?;
                let k_max = number(tok[2])?;
                if k_max == 0 {
                    return Err(Error::QueryCompile(format!("line {line}: k must be at least 1")));
                }
                QuerySpec::KHop {
                    source: vertex(tok[1])?,
                    k_max,
                }
            }
            "rpq" => {
                if tok.len() < 3 {
                    return Err(Error::parse(line, "rpq needs a source and a template"));
                }
                let source = vertex(tok[1])?;
                let automaton = match tok[2].to_ascii_uppercase().as_str() {
                    "Q1" => {
                        arity(4)?;
                        LabelAutomaton::q1(label(tok[3])?)
                    }
                    "Q2" => {
                        arity(5)?;
                        LabelAutomaton::q2(label(tok[3])?, label(tok[4])?)
                    }
                    "Q3" => {
                        arity(8)?;
                        let mut ls = [0u32; 5];
                        for (slot, t) in ls.iter_mut().zip(&tok[3..8]) {
                            *slot = label(t)?;
                        }
                        LabelAutomaton::q3(ls)
                    }
                    other => {
                        return Err(Error::parse(line, format!("unknown template `{other}`")))
                    }
                };
                QuerySpec::Rpq { source, automaton }
            }
            "wcc" => {
                arity(1)?;
                QuerySpec::Wcc
            }
            "pagerank" => {
                if tok.len() > 3 {
                    return Err(Error::parse(line, "pagerank takes at most 2 arguments"));
                }
                let iterations = match tok.get(1) {
                    Some(s) => number(s)?,
                    None => DEFAULT_PAGERANK_ITERATIONS,
                };
                let damping = match tok.get(2) {
                    Some(s) => s
                        .parse::<f64>()
                        .ok()
                        .filter(|d| (0.0..=1.0).contains(d))
                        .ok_or_else(|| Error::parse(line, format!("bad damping `{s}`")))?,
                    None => DEFAULT_DAMPING,
                };
                QuerySpec::PageRank {
                    iterations,
                    damping,
                }
            }
            other => return Err(Error::parse(line, format!("unknown query kind `{other}`"))),
        };
        out.push(spec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dicts() -> (Interner, Interner) {
        let mut v = Interner::new();
        for name in ["a", "b", "c"] {
            v.intern(name);
        }
        let mut l = Interner::new();
        for name in ["knows", "likes"] {
            l.intern(name);
        }
        (v, l)
    }

    #[test]
    fn parses_every_kind() {
        let (v, l) = dicts();
        let text = "# queries\nspsp a c\nkhop b 5\nrpq a Q2 knows likes\nwcc\npagerank\npagerank 20 0.9\n";
        let qs = parse_query_file(text, &v, &l).unwrap();
        assert_eq!(qs.len(), 6);
        assert_eq!(
            qs[0],
            QuerySpec::Spsp {
                source: VertexId(0),
                target: VertexId(2)
            }
        );
        assert_eq!(
            qs[5],
            QuerySpec::PageRank {
                iterations: 20,
                damping: 0.9
            }
        );
    }

    #[test]
    fn unknown_label_is_compile_error() {
        let (v, l) = dicts();
        let err = parse_query_file("rpq a Q1 hates", &v, &l).unwrap_err();
        assert!(matches!(err, Error::QueryCompile(_)));
    }

    #[test]
    fn wrong_arity_is_parse_error() {
        let (v, l) = dicts();
        assert!(matches!(
            parse_query_file("spsp a", &v, &l).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_query_file("\nrpq a Q3 knows", &v, &l).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
    }
}
