//! Plain-text formats for colorings, latin squares, transversal families and
//! forests, plus DOT export of forests.
//!
//! * coloring: `order N`, then N rows of N integers, diagonal `-1`
//! * latin square: `order q`, then q rows of q symbols
//! * transversal family: one line per member, `r0:c0 r1:c1 ...`
//! * tree: `tree N`, then N - 1 lines `u v c`; a forest is tree blocks
//!   separated by blank lines
//!
//! Lines starting with `#` are comments everywhere.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{make_coloring, Color, ColoredEdge, ColoringError, EdgeColoring};
use crate::latin::{LatinError, LatinSquare, Transversal, TransversalFamily};
use crate::tree::ColoredTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Latin(#[from] LatinError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Non-comment lines with 1-based line numbers; blank lines kept.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.starts_with('#'))
}

fn header(line: usize, text: &str, keyword: &str) -> Result<usize, FormatError> {
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next().map(str::parse::<usize>), parts.next()) {
        (Some(k), Some(Ok(n)), None) if k == keyword => Ok(n),
        _ => Err(parse_err(line, format!("expected `{keyword} <n>`, found `{text}`"))),
    }
}

fn numbers<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("not a number: `{t}`"))))
        .collect()
}

/// Square matrix after an `order`-style header.
fn parse_matrix(text: &str, keyword: &str) -> Result<(usize, Vec<Vec<i64>>), FormatError> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.is_empty());
    let (no, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let n = header(no, first, keyword)?;
    let mut rows = Vec::with_capacity(n);
    for (no, l) in lines {
        let row: Vec<i64> = numbers(no, l)?;
        if row.len() != n {
            return Err(parse_err(no, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(0, format!("found {} rows, expected {n}", rows.len())));
    }
    Ok((n, rows))
}

pub fn write_coloring(phi: &EdgeColoring) -> String {
    let mut out = format!("order {}\n", phi.order());
    for row in phi.to_matrix() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_coloring(text: &str) -> Result<EdgeColoring, FormatError> {
    let (n, rows) = parse_matrix(text, "order")?;
    Ok(make_coloring(n, &rows)?)
}

pub fn write_latin(square: &LatinSquare) -> String {
    let mut out = format!("order {}\n", square.order());
    for i in 0..square.order() {
        let cells: Vec<String> = square.row(i).iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_latin(text: &str) -> Result<LatinSquare, FormatError> {
    let (_, rows) = parse_matrix(text, "order")?;
    let rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter().map(|x| usize::try_from(x).map_err(|_| parse_err(0, "negative symbol"))).collect()
        })
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    Ok(LatinSquare::new(rows)?)
}

pub fn write_family(family: &TransversalFamily) -> String {
    let mut out = String::new();
    for t in &family.members {
        let cells: Vec<String> = t.cells.iter().map(|(r, c)| format!("{r}:{c}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_family(square: LatinSquare, text: &str) -> Result<TransversalFamily, FormatError> {
    let mut members = Vec::new();
    for (no, l) in content_lines(text).filter(|(_, l)| !l.is_empty()) {
        let cells = l
            .split_whitespace()
            .map(|cell| {
                let (r, c) =
                    cell.split_once(':').ok_or_else(|| parse_err(no, format!("bad cell `{cell}`")))?;
                match (r.parse(), c.parse()) {
                    (Ok(r), Ok(c)) => Ok((r, c)),
                    _ => Err(parse_err(no, format!("bad cell `{cell}`"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        members.push(Transversal::new(cells));
    }
    Ok(TransversalFamily { square, members })
}

pub fn write_tree(tree: &ColoredTree) -> String {
    let mut out = format!("tree {}\n", tree.order());
    for e in tree.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.c);
    }
    out
}

pub fn write_forest(trees: &[ColoredTree]) -> String {
    trees.iter().map(write_tree).collect::<Vec<_>>().join("\n")
}

/// Parses tree blocks without checking tree structure, so that malformed
/// trees reach the verifier instead of failing here.
pub fn parse_forest(text: &str) -> Result<Vec<ColoredTree>, FormatError> {
    let mut trees = Vec::new();
    let mut current: Option<(usize, usize, Vec<ColoredEdge>)> = None;
    let finish = |cur: Option<(usize, usize, Vec<ColoredEdge>)>, trees: &mut Vec<ColoredTree>| {
        if let Some((no, n, edges)) = cur {
            if edges.len() + 1 != n {
                return Err(parse_err(no, format!("tree {n} has {} edges", edges.len())));
            }
            trees.push(ColoredTree::from_edges_unchecked(n, edges));
        }
        Ok(())
    };
    for (no, l) in content_lines(text) {
        if l.is_empty() {
            finish(current.take(), &mut trees)?;
            continue;
        }
        if l.starts_with("tree") {
            finish(current.take(), &mut trees)?;
            current = Some((no, header(no, l, "tree")?, Vec::new()));
            continue;
        }
        let Some((_, n, edges)) = current.as_mut() else {
            return Err(parse_err(no, "edge line outside a tree block"));
        };
        let xs: Vec<usize> = numbers(no, l)?;
        let [u, v, c] = xs[..] else {
            return Err(parse_err(no, "expected `u v c`"));
        };
        if u >= *n || v >= *n || u == v {
            return Err(parse_err(no, format!("bad edge {u} {v} for order {n}")));
        }
        let c = u16::try_from(c).map_err(|_| parse_err(no, "color out of range"))?;
        edges.push(ColoredEdge::new(u, v, Color(c)));
    }
    finish(current, &mut trees)?;
    if trees.is_empty() {
        return Err(parse_err(1, "no trees"));
    }
    Ok(trees)
}

/// DOT graph with one cluster per tree; nodes `t{i}_v{x}`, edge labels are
/// color ids.
pub fn write_dot(trees: &[ColoredTree]) -> String {
    let mut out = String::from("graph forest {\n  node [shape=circle];\n");
    for (i, t) in trees.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    label=\"T{i}\";");
        for x in 0..t.order() {
            let _ = writeln!(out, "    t{i}_v{x} [label=\"{x}\"];");
        }
        for e in t.edges() {
            let _ = writeln!(out, "    t{i}_v{} -- t{i}_v{} [label=\"{}\"];", e.u, e.v, e.c);
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn dot_node(no: usize, s: &str) -> Result<(usize, usize), FormatError> {
    let bad = || parse_err(no, format!("bad node `{s}`"));
    let (t, v) = s.trim().strip_prefix('t').and_then(|s| s.split_once("_v")).ok_or_else(bad)?;
    Ok((t.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?))
}

fn dot_label(no: usize, attrs: &str) -> Result<&str, FormatError> {
    attrs
        .split_once("label=\"")
        .and_then(|(_, rest)| rest.split_once('"'))
        .map(|(label, _)| label)
        .ok_or_else(|| parse_err(no, "missing label"))
}

/// Reads back the output of [`write_dot`].
pub fn parse_dot(text: &str) -> Result<Vec<ColoredTree>, FormatError> {
    let mut orders: Vec<usize> = Vec::new();
    let mut edges: Vec<Vec<ColoredEdge>> = Vec::new();
    for (no, l) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if !l.starts_with('t') {
            continue;
        }
        let (head, attrs) = l.split_once('[').ok_or_else(|| parse_err(no, "missing attributes"))?;
        if let Some((a, b)) = head.split_once("--") {
            let ((ta, u), (tb, v)) = (dot_node(no, a)?, dot_node(no, b)?);
            if ta != tb || ta >= edges.len() {
                return Err(parse_err(no, "edge between clusters"));
            }
            let c = dot_label(no, attrs)?.parse().map_err(|_| parse_err(no, "bad color label"))?;
            edges[ta].push(ColoredEdge::new(u, v, Color(c)));
        } else {
            let (t, _) = dot_node(no, head)?;
            if t == orders.len() {
                orders.push(0);
                edges.push(Vec::new());
            }
            if t + 1 != orders.len() {
                return Err(parse_err(no, "clusters out of order"));
            }
            orders[t] += 1;
        }
    }
    Ok(orders.into_iter().zip(edges).map(|(n, e)| ColoredTree::from_edges_unchecked(n, e)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{round_robin_coloring, xor_coloring};
    use crate::latin::{disjoint_transversals, power_square, TransversalStrategy};
    use crate::tree::star;

    #[test]
    fn coloring_round_trip() {
        let phi = round_robin_coloring(4).unwrap();
        let text = write_coloring(&phi);
        assert!(text.starts_with("order 8\n-1 "));
        assert_eq!(parse_coloring(&text).unwrap(), phi);
        let commented = format!("# generated\n{text}");
        assert_eq!(parse_coloring(&commented).unwrap(), phi);
    }

    #[test]
    fn coloring_errors() {
        assert!(matches!(parse_coloring("order 4\n-1 0 1\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse_coloring("rows 4"), Err(FormatError::Parse { .. })));
        let bad = "order 4\n-1 0 0 2\n0 -1 2 1\n0 2 -1 0\n2 1 0 -1\n";
        assert!(matches!(
            parse_coloring(bad),
            Err(FormatError::Coloring(ColoringError::NotProper { vertex: 0, .. }))
        ));
    }

    #[test]
    fn latin_and_family_round_trip() {
        let sq = power_square(3);
        assert_eq!(parse_latin(&write_latin(&sq)).unwrap(), sq);
        let fam = disjoint_transversals(3, TransversalStrategy::Recursive).unwrap();
        let back = parse_family(sq, &write_family(&fam)).unwrap();
        assert_eq!(back, fam);
        back.verify().unwrap();
    }

    #[test]
    fn forest_round_trip() {
        let phi = xor_coloring(8).unwrap();
        let trees = vec![star(&phi, 0), star(&phi, 3)];
        let text = write_forest(&trees);
        assert_eq!(parse_forest(&text).unwrap(), trees);
        assert_eq!(parse_dot(&write_dot(&trees)).unwrap(), trees);
    }

    #[test]
    fn forest_errors() {
        assert!(parse_forest("").is_err());
        assert!(parse_forest("0 1 2\n").is_err());
        assert!(parse_forest("tree 3\n0 1 0\n").is_err());
        assert!(parse_forest("tree 3\n0 1 0\n1 5 1\n").is_err());
    }
}
