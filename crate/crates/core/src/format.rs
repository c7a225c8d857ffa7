//! Structure and map text files.
//!
//! ```text
//! # a 3-chain
//! kind poset
//! n 3
//! le 0 1
//! le 1 2
//! ```
//!
//! Body lines per kind: `le i j` (posets and lattices, reflexive pairs
//! implied), `perm p0 … p(n-1)` (elements in increasing second order),
//! `edge i j` (graphs), `arc i j` (digraphs), `hedge i j …` (hypergraphs),
//! `line i j …` (geometries). Maps are a single `map a0 a1 …` line.
//! Printing is canonical: body lines sorted, so `parse(print(s)) == s`.

use std::fmt::Write;

use crate::certify::{Witness, WitnessTriple};
use crate::decide::Verdict;
use crate::error::{Error, Result};
use crate::oracle::OracleReport;
use crate::structures::{FiniteStructure, Mapping, StructureKind};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-comment lines, numbered from 1, split into words.
fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<usize>> {
    words
        .iter()
        .map(|w| w.parse::<usize>().map_err(|_| parse_err(line, format!("expected an index, found `{w}`"))))
        .collect()
}

fn pair(line: usize, words: &[&str]) -> Result<(usize, usize)> {
    match numbers(line, words)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(parse_err(line, format!("expected two indices, found {}", words.len()))),
    }
}

/// Parses a structure file. The result is checked for shape (indices in
/// range, matching payload) but not for the kind's axioms.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let mut kind: Option<StructureKind> = None;
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut perm: Option<Vec<usize>> = None;
    let mut last_line = 0;

    for (line, words) in tokens(text) {
        last_line = line;
        let (head, rest) = (words[0], &words[1..]);
        match head {
            "kind" => {
                if kind.is_some() {
                    return Err(parse_err(line, "duplicate `kind`"));
                }
                let [name] = rest else {
                    return Err(parse_err(line, "expected `kind <name>`"));
                };
                kind = Some(name.parse().map_err(|e: Error| parse_err(line, e.to_string()))?);
                continue;
            }
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate `n`"));
                }
                match numbers(line, rest)?[..] {
                    [count] => n = Some(count),
                    _ => return Err(parse_err(line, "expected `n <count>`")),
                }
                continue;
            }
            _ => {}
        }
        let Some(k) = kind else {
            return Err(parse_err(line, "`kind` must come before the body"));
        };
        let Some(size) = n else {
            return Err(parse_err(line, "`n` must come before the body"));
        };
        let check = |xs: &[usize]| -> Result<()> {
            match xs.iter().find(|&&x| x >= size) {
                Some(x) => Err(parse_err(line, format!("index {x} out of range 0..{size}"))),
                None => Ok(()),
            }
        };
        let expected = match k {
            StructureKind::Poset | StructureKind::Lattice => "le",
            StructureKind::Permutation => "perm",
            StructureKind::GraphSimple | StructureKind::GraphLoops => "edge",
            StructureKind::DigraphSimple | StructureKind::DigraphLoops => "arc",
            StructureKind::Hypergraph => "hedge",
            StructureKind::Geometry => "line",
        };
        let loop_as_edge = head == "edge" && k.is_graph_like() && k.allows_loops();
        if head != expected && !loop_as_edge {
            return Err(parse_err(line, format!("unexpected `{head}` in a {k} file (expected `{expected}`)")));
        }
        match k {
            StructureKind::Permutation => {
                if perm.is_some() {
                    return Err(parse_err(line, "duplicate `perm`"));
                }
                let seq = numbers(line, rest)?;
                check(&seq)?;
                perm = Some(seq);
            }
            StructureKind::Hypergraph | StructureKind::Geometry => {
                let set = numbers(line, rest)?;
                check(&set)?;
                sets.push(set);
            }
            _ => {
                let (a, b) = pair(line, rest)?;
                check(&[a, b])?;
                if loop_as_edge && !k.is_undirected() && a != b {
                    return Err(parse_err(line, "digraph arcs use `arc`"));
                }
                pairs.push((a, b));
            }
        }
    }

    let kind = kind.ok_or_else(|| parse_err(last_line, "missing `kind`"))?;
    let n = n.ok_or_else(|| parse_err(last_line, "missing `n`"))?;
    let at_end = |e: Error| match e {
        Error::Shape(msg) => parse_err(last_line, msg),
        other => other,
    };
    match kind {
        StructureKind::Poset | StructureKind::Lattice => {
            FiniteStructure::from_pairs(kind, n, (0..n).map(|i| (i, i)).chain(pairs)).map_err(at_end)
        }
        StructureKind::Permutation => {
            let seq = perm.ok_or_else(|| parse_err(last_line, "missing `perm` line"))?;
            if seq.len() != n {
                return Err(parse_err(last_line, format!("`perm` lists {} elements, n is {n}", seq.len())));
            }
            FiniteStructure::permutation(&seq).map_err(at_end)
        }
        StructureKind::Hypergraph | StructureKind::Geometry => {
            FiniteStructure::from_sets(kind, n, sets).map_err(at_end)
        }
        _ => FiniteStructure::graph(kind, n, pairs).map_err(at_end),
    }
}

/// Canonical text of a structure. Permutation structures are written along
/// their first order, which is index order for every parsed or generated one.
pub fn print_structure(s: &FiniteStructure) -> String {
    let mut out = String::new();
    let n = s.len();
    writeln!(out, "kind {}", s.kind()).unwrap();
    writeln!(out, "n {n}").unwrap();
    match s.kind() {
        StructureKind::Poset | StructureKind::Lattice => {
            for (a, b) in s.relation().unwrap().pairs().filter(|(a, b)| a != b) {
                writeln!(out, "le {a} {b}").unwrap();
            }
        }
        StructureKind::GraphSimple | StructureKind::GraphLoops => {
            for (a, b) in s.relation().unwrap().pairs().filter(|(a, b)| a <= b) {
                writeln!(out, "edge {a} {b}").unwrap();
            }
        }
        StructureKind::DigraphSimple | StructureKind::DigraphLoops => {
            for (a, b) in s.relation().unwrap().pairs() {
                writeln!(out, "arc {a} {b}").unwrap();
            }
        }
        StructureKind::Permutation => {
            let (first, second) = s.orders().unwrap();
            // rank along the first order, then list ranks in second-order sequence
            let rank = |m: &crate::structures::BitMatrix, x: usize| (0..n).filter(|&y| y != x && m.get(y, x)).count();
            let mut seq = vec![0; n];
            for x in 0..n {
                seq[rank(second, x)] = rank(first, x);
            }
            let words: Vec<String> = seq.iter().map(|x| x.to_string()).collect();
            writeln!(out, "perm {}", words.join(" ")).unwrap();
        }
        StructureKind::Hypergraph | StructureKind::Geometry => {
            let head = if s.kind() == StructureKind::Hypergraph { "hedge" } else { "line" };
            for e in s.sets().unwrap() {
                let words: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{head} {}", words.join(" ")).unwrap();
            }
        }
    }
    out
}

/// Parses a `map a0 a1 …` file. Range checks happen against structures at
/// the call site.
pub fn parse_map_values(text: &str) -> Result<Vec<usize>> {
    let mut found = None;
    for (line, words) in tokens(text) {
        if words[0] != "map" {
            return Err(parse_err(line, format!("expected `map`, found `{}`", words[0])));
        }
        if found.is_some() {
            return Err(parse_err(line, "more than one `map` line"));
        }
        found = Some(numbers(line, &words[1..])?);
    }
    found.ok_or_else(|| parse_err(0, "no `map` line"))
}

/// Parses a map and checks it against the source and target sizes.
pub fn parse_mapping(text: &str, domain: usize, image: usize) -> Result<Mapping> {
    let values = parse_map_values(text)?;
    if values.len() != domain {
        return Err(Error::Dimension(format!("map has {} entries, source has {domain} elements", values.len())));
    }
    Mapping::new(values, image)
}

pub fn print_mapping(m: &Mapping) -> String {
    let words: Vec<String> = m.values().iter().map(|x| x.to_string()).collect();
    format!("map {}\n", words.join(" "))
}

fn qp_word(qp: bool) -> &'static str {
    if qp {
        "QP"
    } else {
        "NOT_QP"
    }
}

/// `verdict QP Chain`, or `verdict NOT_QP NotCharacterized` followed by a
/// `defect` line.
pub fn render_verdict(v: &Verdict) -> String {
    let mut out = format!("verdict {} {}\n", qp_word(v.qp), v.reason);
    if let Some(d) = v.defect() {
        writeln!(out, "defect {d}").unwrap();
    }
    out
}

/// Target, `f` and `j` as three commented sections; each section is a
/// valid file on its own.
pub fn render_triple(w: &WitnessTriple) -> String {
    format!("# target\n{}# f\n{}# j\n{}", print_structure(&w.target), print_mapping(&w.f), print_mapping(&w.j))
}

pub fn render_witness(w: &Witness) -> String {
    format!("method {}\n{}", w.method.name(), render_triple(&w.triple))
}

pub fn render_oracle_report(r: &OracleReport) -> String {
    let mut out = format!(
        "verdict {}\ntargets_examined {}\npairs_examined {}\n",
        qp_word(r.qp),
        r.targets_examined,
        r.pairs_examined
    );
    if let Some(w) = &r.witness {
        out.push_str(&render_triple(w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_round_trip() {
        let text = "# chain\nkind poset\nn 3\nle 0 1\nle 1 2\nle 0 2\n";
        let s = parse_structure(text).unwrap();
        assert!(s.is_valid());
        assert_eq!(print_structure(&s), "kind poset\nn 3\nle 0 1\nle 0 2\nle 1 2\n");
        assert_eq!(parse_structure(&print_structure(&s)).unwrap(), s);
    }

    #[test]
    fn intransitive_file_parses_but_fails_validation() {
        let s = parse_structure("kind poset\nn 3\nle 0 1\nle 1 2\n").unwrap();
        assert!(!s.is_valid());
    }

    #[test]
    fn out_of_range_index() {
        let e = parse_structure("kind poset\nn 3\nle 0 9\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn graph_and_loops() {
        let s = parse_structure("kind graph-loops\nn 2\nedge 1 0\nedge 1 1 # loop\n").unwrap();
        assert!(s.related(0, 1) && s.related(1, 0) && s.related(1, 1));
        assert_eq!(print_structure(&s), "kind graph-loops\nn 2\nedge 0 1\nedge 1 1\n");
        let d = parse_structure("kind digraph-loops\nn 2\narc 0 1\nedge 1 1\n").unwrap();
        assert_eq!(print_structure(&d), "kind digraph-loops\nn 2\narc 0 1\narc 1 1\n");
        assert!(parse_structure("kind digraph\nn 2\nedge 0 1\n").is_err());
    }

    #[test]
    fn permutation_line() {
        let s = parse_structure("kind permutation\nn 3\nperm 2 0 1\n").unwrap();
        assert_eq!(s, FiniteStructure::permutation(&[2, 0, 1]).unwrap());
        assert_eq!(print_structure(&s), "kind permutation\nn 3\nperm 2 0 1\n");
        assert!(parse_structure("kind permutation\nn 3\nperm 0 1\n").is_err());
    }

    #[test]
    fn set_families_sorted() {
        let s = parse_structure("kind geometry\nn 5\nline 4 3 2\nline 0 1\n").unwrap();
        assert_eq!(print_structure(&s), "kind geometry\nn 5\nline 0 1\nline 2 3 4\n");
        let h = parse_structure("kind hypergraph\nn 3\nhedge 2\nhedge 0 2\nhedge 0 2\n").unwrap();
        assert_eq!(print_structure(&h), "kind hypergraph\nn 3\nhedge 0 2\nhedge 2\n");
    }

    #[test]
    fn header_errors() {
        assert!(parse_structure("n 2\nkind poset\n").is_ok());
        assert!(parse_structure("kind poset\nle 0 1\nn 2\n").is_err());
        assert!(parse_structure("kind tree\nn 2\n").is_err());
        assert!(parse_structure("kind poset\n").is_err());
        assert!(parse_structure("kind poset\nn 0\n").is_err());
    }

    #[test]
    fn maps() {
        let m = parse_mapping("map 0 2 1\n", 3, 3).unwrap();
        assert_eq!(print_mapping(&m), "map 0 2 1\n");
        assert!(parse_mapping("map 0 3\n", 2, 3).is_err());
        assert!(parse_mapping("map 0 1\n", 3, 3).is_err());
        assert!(parse_mapping("f 0 1\n", 2, 3).is_err());
    }
}
