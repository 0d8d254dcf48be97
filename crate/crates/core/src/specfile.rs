//! The cover-pair file format.
//!
//! A file describes the two covers of a pair diagram in a line-oriented
//! grammar; `#` starts a comment, blank lines are ignored:
//!
//! ```text
//! cover g1
//! degree 3
//! branch b01 (1 2)
//! branch b02 (1 2 3)
//!
//! cover g2
//! degree 2
//! branch b01 (1 2)
//! branch b03 ()
//! ```
//!
//! Exactly two `cover` blocks are required; the first plays the role of
//! `g1`. Each block declares its degree once, then one `branch <label>
//! <cycles>` line per branch label, with disjoint cycles written 1-based,
//! `()` for the identity. Branch labels are shared across blocks by name;
//! the global label order is the order of first appearance, and a label
//! missing from a block is read as the identity there. The label-ordered
//! product of each block's permutations must be the identity and each block
//! must generate a transitive group (connected curves).

use crate::covers::{align_labels, BranchedCover, PairDiagram};
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug)]
struct RawCover {
    name: String,
    degree: Option<usize>,
    branches: Vec<(String, Vec<Vec<usize>>, usize)>, // label, 0-based cycles, line
    line: usize,
}

fn parse_cycles(text: &str, line: usize, col0: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut num_start: Option<usize> = None;
    let err = |col: usize, msg: &str| Error::Parse {
        line,
        col: col0 + col + 1,
        msg: msg.to_string(),
    };
    let flush_num = |current: &mut Option<Vec<usize>>,
                     num_start: &mut Option<usize>,
                     i: usize,
                     text: &str|
     -> Result<()> {
        if let Some(s) = num_start.take() {
            let n: usize = text[s..i]
                .parse()
                .map_err(|_| err(s, "invalid sheet number"))?;
            if n == 0 {
                return Err(err(s, "sheet numbers are 1-based"));
            }
            current
                .as_mut()
                .ok_or_else(|| err(s, "number outside a cycle"))?
                .push(n - 1);
        }
        Ok(())
    };
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(err(i, "nested cycle"));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush_num(&mut current, &mut num_start, i, text)?;
                let c = current.take().ok_or_else(|| err(i, "unmatched ')'"))?;
                if !c.is_empty() {
                    cycles.push(c);
                }
            }
            '0'..='9' => {
                if current.is_none() {
                    return Err(err(i, "number outside a cycle"));
                }
                if num_start.is_none() {
                    num_start = Some(i);
                }
            }
            ' ' | '\t' | ',' => flush_num(&mut current, &mut num_start, i, text)?,
            _ => return Err(err(i, "unexpected character in cycle notation")),
        }
    }
    if current.is_some() {
        return Err(err(text.len(), "unclosed cycle"));
    }
    Ok(cycles)
}

/// Splits a line into whitespace-separated words with their byte offsets.
fn words_with_offsets(content: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &content[s..]));
    }
    out
}

/// Parses a cover-pair file into its two covers over the shared label list.
pub fn parse(input: &str) -> Result<(BranchedCover, BranchedCover)> {
    let mut covers: Vec<RawCover> = Vec::new();
    for (idx, raw_line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let raw_line = raw_line.trim_end_matches('\r');
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let words = words_with_offsets(content);
        if words.is_empty() {
            continue;
        }
        let (_, keyword) = words[0];
        match keyword {
            "cover" => {
                let (_, name) = *words.get(1).ok_or(Error::Parse {
                    line: line_no,
                    col: content.len() + 1,
                    msg: "cover requires a name".into(),
                })?;
                covers.push(RawCover {
                    name: name.to_string(),
                    degree: None,
                    branches: Vec::new(),
                    line: line_no,
                });
            }
            "degree" => {
                let cover = covers.last_mut().ok_or(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: "degree before any cover block".into(),
                })?;
                let (col0, word) = *words.get(1).ok_or(Error::Parse {
                    line: line_no,
                    col: content.len() + 1,
                    msg: "degree requires a value".into(),
                })?;
                let value: usize = word.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    col: col0 + 1,
                    msg: "invalid degree".into(),
                })?;
                if value == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        col: col0 + 1,
                        msg: "degree must be positive".into(),
                    });
                }
                if cover.degree.replace(value).is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        col: 1,
                        msg: "degree declared twice".into(),
                    });
                }
            }
            "branch" => {
                let cover = covers.last_mut().ok_or(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: "branch before any cover block".into(),
                })?;
                let (label_col, label) = *words.get(1).ok_or(Error::Parse {
                    line: line_no,
                    col: content.len() + 1,
                    msg: "branch requires a label".into(),
                })?;
                if cover.branches.iter().any(|(l, _, _)| l == label) {
                    return Err(Error::Parse {
                        line: line_no,
                        col: label_col + 1,
                        msg: format!("label {label} repeated in this cover"),
                    });
                }
                let rest_start = label_col + label.len();
                let rest = &content[rest_start..];
                let cycles = parse_cycles(rest, line_no, rest_start)?;
                cover.branches.push((label.to_string(), cycles, line_no));
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    col: words[0].0 + 1,
                    msg: format!("unknown keyword {other:?}"),
                });
            }
        }
    }

    if covers.len() != 2 {
        return Err(Error::Parse {
            line: input.lines().count().max(1),
            col: 1,
            msg: format!("expected exactly 2 cover blocks, found {}", covers.len()),
        });
    }

    let build = |raw: &RawCover| -> Result<BranchedCover> {
        let degree = raw.degree.ok_or(Error::Parse {
            line: raw.line,
            col: 1,
            msg: format!("cover {} has no degree", raw.name),
        })?;
        let mut labels = Vec::new();
        let mut perms = Vec::new();
        for (label, cycles, line) in &raw.branches {
            let p = Perm::from_cycles(degree, cycles).map_err(|e| Error::Parse {
                line: *line,
                col: 1,
                msg: format!("cover {}, label {}: {}", raw.name, label, e),
            })?;
            labels.push(label.clone());
            perms.push(p);
        }
        BranchedCover::from_parts(degree, labels, perms)
            .map_err(|e| Error::InconsistentDiagram(format!("cover {}: {}", raw.name, e)))
    };
    let g1 = build(&covers[0])?;
    let g2 = build(&covers[1])?;
    // validate the pair over the shared, identity-padded label list
    let (a1, a2) = align_labels(&g1, &g2)?;
    Ok((a1, a2))
}

/// Parses a file and assembles the pair diagram on the unique component.
pub fn parse_diagram(input: &str) -> Result<PairDiagram> {
    let (g1, g2) = parse(input)?;
    PairDiagram::build(&g1, &g2)
}

/// Writes a pair of covers in the file format; all shared labels are listed
/// explicitly in both blocks, identities as `()`.
pub fn emit(g1: &BranchedCover, g2: &BranchedCover) -> String {
    let mut out = String::new();
    out.push_str("# pair of coverings of the line\n");
    for (name, g) in [("g1", g1), ("g2", g2)] {
        out.push_str(&format!("\ncover {name}\ndegree {}\n", g.degree()));
        for (label, perm) in g.labels().iter().zip(g.perms()) {
            out.push_str(&format!("branch {label} {perm}\n"));
        }
    }
    out
}

/// Bundled example inputs.
pub mod bundled {
    /// Smallest member of the ramified exponent-6 family.
    pub const FAMILY_RAMIFIED_MIN: &str = include_str!("../inputs/family_ramified_min.cover");
    /// Etale-regime family member of dimension 5.
    pub const FAMILY_ETALE_DIM5: &str = include_str!("../inputs/family_etale_dim5.cover");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_emit_roundtrip() {
        let text = "cover g1\ndegree 3\nbranch a (1 2)\nbranch b (2 3)\nbranch c (1 2 3)\n\
                    \ncover g2\ndegree 2\nbranch a (1 2)\nbranch c (1 2)\n";
        let (g1, g2) = parse(text).unwrap();
        assert_eq!(g1.degree(), 3);
        assert_eq!(g2.degree(), 2);
        assert_eq!(g1.labels(), g2.labels());
        let emitted = emit(&g1, &g2);
        let (h1, h2) = parse(&emitted).unwrap();
        assert_eq!(g1, h1);
        assert_eq!(g2, h2);
    }

    #[test]
    fn rejects_non_bijection_with_position() {
        let text = "cover g1\ndegree 3\nbranch a (1 2)(2 3)\n\ncover g2\ndegree 1\n";
        match parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_sheet() {
        let text = "cover g1\ndegree 2\nbranch a (1 3)\n\ncover g2\ndegree 1\n";
        assert!(matches!(parse(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_zero_entry() {
        let text = "cover g1\ndegree 2\nbranch a (0 1)\n\ncover g2\ndegree 1\n";
        match parse(text) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 3);
                assert!(col > 9);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_nonidentity_product() {
        let text = "cover g1\ndegree 2\nbranch a (1 2)\n\ncover g2\ndegree 1\n";
        assert!(matches!(parse(text), Err(Error::InconsistentDiagram(_))));
    }

    #[test]
    fn tolerates_carriage_returns() {
        let text = "cover g1\r\ndegree 2\r\nbranch a (1 2)\r\nbranch b (1 2)\r\n\r\ncover g2\r\ndegree 1\r\n";
        let (g1, _) = parse(text).unwrap();
        assert_eq!(g1.degree(), 2);
    }

    #[test]
    fn bundled_files_parse() {
        let d = parse_diagram(bundled::FAMILY_RAMIFIED_MIN).unwrap();
        assert_eq!(d.params.as_tuple(), (3, 2, 6, 5, 5, 2));
        let d = parse_diagram(bundled::FAMILY_ETALE_DIM5).unwrap();
        assert_eq!(d.params.as_tuple(), (3, 2, 7, 7, 7, 0));
    }
}
