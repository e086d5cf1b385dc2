//! The line-oriented model file format.
//!
//! ```text
//! # comments run to the end of the line
//! states: u u1 u2 u3
//! labels: t1 t2
//! trans u t1 { u1: 0.2, u2: 0.7 }
//! trans u t1 { u2: 0.9, u3: 1 }
//! ```
//!
//! Repeated `trans` lines for one `(state, label)` add further distributions.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{Degree, DegreeError};
use crate::model::{ModelError, Nfts, NftsBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("`states:` must list at least one state")]
    EmptyStates,
    #[error("missing `states:` section")]
    MissingStates,
    #[error("`{0}` section given twice")]
    DuplicateSection(&'static str),
    #[error("state name `{0}` contains the reserved character `@`")]
    ReservedName(String),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Parser switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept relabeled unfolding states of the form `base@depth`.
    pub allow_relabeled: bool,
}

/// Parses a model with default options (`@` is rejected in state names).
pub fn parse_model(text: &str) -> Result<Nfts, ParseError> {
    parse_model_with(text, ParseOptions::default())
}

pub fn parse_model_with(text: &str, opts: ParseOptions) -> Result<Nfts, ParseError> {
    let mut builder = NftsBuilder::new();
    let mut seen_states = false;
    let mut seen_labels = false;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut cur = Cursor::new(line, line_no);
        cur.skip_ws();
        if cur.at_end() {
            continue;
        }
        let (keyword, kw_col) = cur.word();
        match keyword {
            "states:" | "states" => {
                if keyword == "states" {
                    cur.expect(':')?;
                }
                if seen_states {
                    return Err(cur.error_at(kw_col, ParseErrorKind::DuplicateSection("states")));
                }
                seen_states = true;
                let mut any = false;
                loop {
                    cur.skip_ws();
                    if cur.at_end() {
                        break;
                    }
                    let (name, col) = cur.name()?;
                    check_state_name(name, opts).map_err(|k| cur.error_at(col, k))?;
                    builder
                        .add_state(name)
                        .map_err(|e| cur.error_at(col, e.into()))?;
                    any = true;
                }
                if !any {
                    return Err(cur.error_at(kw_col, ParseErrorKind::EmptyStates));
                }
            }
            "labels:" | "labels" => {
                if keyword == "labels" {
                    cur.expect(':')?;
                }
                if seen_labels {
                    return Err(cur.error_at(kw_col, ParseErrorKind::DuplicateSection("labels")));
                }
                seen_labels = true;
                loop {
                    cur.skip_ws();
                    if cur.at_end() {
                        break;
                    }
                    let (name, col) = cur.name()?;
                    builder
                        .add_label(name)
                        .map_err(|e| cur.error_at(col, e.into()))?;
                }
            }
            "trans" => {
                if !seen_states {
                    return Err(cur.error_at(kw_col, ParseErrorKind::MissingStates));
                }
                cur.skip_ws();
                let (src, src_col) = cur.name()?;
                let src_id = builder
                    .state_id(src)
                    .map_err(|e| cur.error_at(src_col, e.into()))?;
                cur.skip_ws();
                let (label, label_col) = cur.name()?;
                let label_id = builder
                    .label_id(label)
                    .map_err(|e| cur.error_at(label_col, e.into()))?;
                cur.skip_ws();
                cur.expect('{')?;
                let mut entries = Vec::new();
                let mut positions = Vec::new();
                cur.skip_ws();
                if !cur.eat('}') {
                    loop {
                        cur.skip_ws();
                        let (dst, dst_col) = cur.name()?;
                        let dst_id = builder
                            .state_id(dst)
                            .map_err(|e| cur.error_at(dst_col, e.into()))?;
                        cur.skip_ws();
                        cur.expect(':')?;
                        cur.skip_ws();
                        let (lit, lit_col) = cur.literal()?;
                        let degree: Degree = lit
                            .parse()
                            .map_err(|e: DegreeError| cur.error_at(lit_col, e.into()))?;
                        entries.push((dst_id, degree));
                        positions.push(dst_col);
                        cur.skip_ws();
                        if cur.eat(',') {
                            continue;
                        }
                        cur.expect('}')?;
                        break;
                    }
                }
                cur.skip_ws();
                if !cur.at_end() {
                    return Err(cur.error_here("trailing text after `}`"));
                }
                let dist = crate::model::Distribution::new(entries).map_err(|dup| {
                    let name = builder.state_name(dup).to_string();
                    let col = positions.first().copied().unwrap_or(1);
                    cur.error_at(col, ModelError::DuplicateTarget(name).into())
                })?;
                builder.push_transition(src_id, label_id, dist);
            }
            other => {
                return Err(cur.error_at(
                    kw_col,
                    ParseErrorKind::Syntax(format!(
                        "expected `states:`, `labels:` or `trans`, found `{other}`"
                    )),
                ));
            }
        }
    }
    if !seen_states {
        return Err(ParseError {
            line: last_line,
            column: 1,
            kind: ParseErrorKind::MissingStates,
        });
    }
    builder.build().map_err(|e| ParseError {
        line: 1,
        column: 1,
        kind: e.into(),
    })
}

fn check_state_name(name: &str, opts: ParseOptions) -> Result<(), ParseErrorKind> {
    if !name.contains('@') {
        return Ok(());
    }
    if opts.allow_relabeled {
        if let Some((base, depth)) = name.split_once('@') {
            if !base.is_empty()
                && !base.contains('@')
                && !depth.is_empty()
                && depth.bytes().all(|b| b.is_ascii_digit())
            {
                return Ok(());
            }
        }
    }
    Err(ParseErrorKind::ReservedName(name.to_string()))
}

/// Canonical text: states, labels and transitions sorted by name.
pub fn serialize_model(m: &Nfts) -> String {
    let mut states: Vec<&str> = m.states().map(|s| m.state_name(s)).collect();
    states.sort_unstable();
    let mut labels: Vec<&str> = m.labels().map(|a| m.label_name(a)).collect();
    labels.sort_unstable();

    let mut out = String::new();
    let _ = writeln!(out, "states: {}", states.join(" "));
    if labels.is_empty() {
        out.push_str("labels:\n");
    } else {
        let _ = writeln!(out, "labels: {}", labels.join(" "));
    }
    let mut lines = Vec::new();
    for u in m.states() {
        for (a, p) in m.outgoing(u) {
            let mut entries: Vec<(&str, &Degree)> =
                p.entries().iter().map(|(s, d)| (m.state_name(*s), d)).collect();
            entries.sort_by(|x, y| x.0.cmp(y.0));
            let body = entries
                .iter()
                .map(|(s, d)| format!("{s}: {d}"))
                .collect::<Vec<_>>()
                .join(", ");
            let body = if body.is_empty() { "{ }".to_string() } else { format!("{{ {body} }}") };
            lines.push((m.state_name(u), m.label_name(a), body));
        }
    }
    lines.sort();
    for (u, a, body) in lines {
        let _ = writeln!(out, "trans {u} {a} {body}");
    }
    out
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    fn column(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn error_here(&self, msg: &str) -> ParseError {
        self.error_at(self.column(self.pos), ParseErrorKind::Syntax(msg.to_string()))
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.rest().is_empty()
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of line".to_string(), |f| format!("`{f}`"));
            Err(self.error_here(&format!("expected `{c}`, found {found}")))
        }
    }

    /// A whitespace-delimited word (used for keywords).
    fn word(&mut self) -> (&'a str, usize) {
        let start = self.pos;
        let rest = self.rest();
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        self.pos += len;
        (&self.text[start..self.pos], self.column(start))
    }

    /// An identifier: a run of characters other than whitespace and `{}:,`.
    fn name(&mut self) -> Result<(&'a str, usize), ParseError> {
        let start = self.pos;
        let rest = self.rest();
        let len = rest
            .find(|c: char| c.is_whitespace() || matches!(c, '{' | '}' | ':' | ','))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error_here("expected a name"));
        }
        self.pos += len;
        Ok((&self.text[start..self.pos], self.column(start)))
    }

    /// A degree literal, terminated by whitespace, `,` or `}`.
    fn literal(&mut self) -> Result<(&'a str, usize), ParseError> {
        let start = self.pos;
        let rest = self.rest();
        let len = rest
            .find(|c: char| c.is_whitespace() || matches!(c, ',' | '}'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error_here("expected a degree"));
        }
        self.pos += len;
        Ok((&self.text[start..self.pos], self.column(start)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nondeterministic_cells() {
        let m = parse_model(
            "# two distributions on one label\nstates: u u1 u2 u3\nlabels: t1\ntrans u t1 { u1: 0.2, u2: 0.7 }\ntrans u t1 { u2: 0.9, u3: 1 }\n",
        )
        .unwrap();
        assert_eq!(m.transitions_by_name("u", "t1").unwrap().len(), 2);
    }

    #[test]
    fn error_positions() {
        let err = parse_model("states:\nlabels: a\n").unwrap_err();
        assert_eq!((err.line, err.kind.clone()), (1, ParseErrorKind::EmptyStates));

        let err = parse_model("states: a b\nlabels: x\ntrans a x { b: 1.5 }\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 16));
        assert!(matches!(err.kind, ParseErrorKind::Degree(DegreeError::OutOfRange(_))));

        let err = parse_model("states: a\nlabels: x\ntrans a y { a: 1 }").unwrap_err();
        assert_eq!((err.line, err.column), (3, 9));
        assert!(matches!(err.kind, ParseErrorKind::Model(ModelError::UnknownLabel(_))));

        let err = parse_model("states: a\nlabels: x\ntrans a x { b: 1 }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Model(ModelError::UnknownState(_))));

        let err = parse_model("states: a x@1\n").unwrap_err();
        assert_eq!(err.column, 11);
        assert!(matches!(err.kind, ParseErrorKind::ReservedName(_)));

        let err = parse_model("labels: x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingStates);

        let err = parse_model("states: a\nlabels: x\ntrans a x { a: 1 ").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));

        let err = parse_model("states: a\nlabels: x\ntrans a x { a: 1, a: 0.5 }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Model(ModelError::DuplicateTarget(_))));

        let err = parse_model("states: a\nfoo bar").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
    }

    #[test]
    fn relabeled_names_need_opt_in() {
        let text = "states: u@0 v@1\nlabels: a\ntrans u@0 a { v@1: 1/3 }\n";
        assert!(parse_model(text).is_err());
        let m = parse_model_with(text, ParseOptions { allow_relabeled: true }).unwrap();
        assert_eq!(m.num_states(), 2);
        let bad = "states: u@x\n";
        assert!(parse_model_with(bad, ParseOptions { allow_relabeled: true }).is_err());
    }

    #[test]
    fn canonical_serialization() {
        let m = parse_model("states: b a\nlabels: y x\ntrans b y { b: 1/3, a: 0.50 }\ntrans a x { }\n").unwrap();
        assert_eq!(
            serialize_model(&m),
            "states: a b\nlabels: x y\ntrans a x { }\ntrans b y { a: 0.5, b: 1/3 }\n"
        );
    }
}
