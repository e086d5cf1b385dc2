use thiserror::Error;

use super::{DistFormula, StateFormula};
use crate::algebra::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula syntax error at column {column}: {message}")]
pub struct FormulaParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    And,
    Arrow,
    Star,
    Diamond(String),
    Top,
    Lift,
    Const(Degree),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn err(column: usize, message: impl Into<String>) -> FormulaParseError {
    FormulaParseError {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Lexer, FormulaParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => toks.push((col, Tok::Open)),
            ')' => toks.push((col, Tok::Close)),
            '&' => toks.push((col, Tok::And)),
            '*' => toks.push((col, Tok::Star)),
            '-' => {
                if chars.get(i + 1) != Some(&'>') {
                    return Err(err(col, "expected `->`"));
                }
                toks.push((col, Tok::Arrow));
                i += 1;
            }
            '<' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '>' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(err(col, "unterminated label"));
                }
                let label: String = chars[start..j].iter().collect::<String>().trim().to_string();
                if label.is_empty() {
                    return Err(err(col, "empty label"));
                }
                toks.push((col, Tok::Diamond(label)));
                i = j;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || matches!(chars[i + 1], '.' | '/')) {
                    i += 1;
                }
                let lit: String = chars[start..=i].iter().collect();
                let value: Degree = lit.parse().map_err(|e| err(col, format!("bad constant `{lit}`: {e}")))?;
                toks.push((col, Tok::Const(value)));
            }
            _ if c.is_alphabetic() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "T" => toks.push((col, Tok::Top)),
                    "lift" => toks.push((col, Tok::Lift)),
                    _ => return Err(err(col, format!("unexpected word `{word}`"))),
                }
            }
            _ => return Err(err(col, format!("unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.lx.toks.get(self.pos).map_or(self.lx.end, |(c, _)| *c)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), FormulaParseError> {
        let col = self.column();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(err(col, format!("expected {what}"))),
        }
    }

    fn constant(&mut self) -> Result<Degree, FormulaParseError> {
        let col = self.column();
        match self.next() {
            Some(Tok::Const(c)) => Ok(c),
            _ => Err(err(col, "expected a degree constant")),
        }
    }

    fn state(&mut self) -> Result<StateFormula, FormulaParseError> {
        let col = self.column();
        match self.next() {
            Some(Tok::Top) => Ok(StateFormula::Top),
            Some(Tok::Diamond(label)) => Ok(StateFormula::Diamond(label, Box::new(self.dist()?))),
            Some(Tok::Open) => {
                if let Some(Tok::Const(_)) = self.peek() {
                    let c = self.constant()?;
                    self.expect(Tok::Arrow, "`->`")?;
                    let f = self.state()?;
                    self.expect(Tok::Close, "`)`")?;
                    return Ok(StateFormula::ConstImplies(c, Box::new(f)));
                }
                let left = self.state()?;
                let op_col = self.column();
                let out = match self.next() {
                    Some(Tok::And) => StateFormula::and(left, self.state()?),
                    Some(Tok::Arrow) => StateFormula::implies(left, self.constant()?),
                    Some(Tok::Star) => StateFormula::tensor(left, self.constant()?),
                    _ => return Err(err(op_col, "expected `&`, `->` or `*`")),
                };
                self.expect(Tok::Close, "`)`")?;
                Ok(out)
            }
            _ => Err(err(col, "expected a state formula")),
        }
    }

    fn dist(&mut self) -> Result<DistFormula, FormulaParseError> {
        let col = self.column();
        match self.next() {
            Some(Tok::Lift) => {
                self.expect(Tok::Open, "`(` after lift")?;
                let f = self.state()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(DistFormula::lift(f))
            }
            Some(Tok::Open) => {
                if let Some(Tok::Const(_)) = self.peek() {
                    let c = self.constant()?;
                    self.expect(Tok::Arrow, "`->`")?;
                    let d = self.dist()?;
                    self.expect(Tok::Close, "`)`")?;
                    return Ok(DistFormula::const_implies(c, d));
                }
                let left = self.dist()?;
                let op_col = self.column();
                let out = match self.next() {
                    Some(Tok::And) => DistFormula::and(left, self.dist()?),
                    Some(Tok::Arrow) => DistFormula::implies(left, self.constant()?),
                    _ => return Err(err(op_col, "expected `&` or `->`")),
                };
                self.expect(Tok::Close, "`)`")?;
                Ok(out)
            }
            _ => Err(err(col, "expected a distribution formula")),
        }
    }

    fn finish(&self) -> Result<(), FormulaParseError> {
        if self.pos < self.lx.toks.len() {
            Err(err(self.column(), "trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_state_formula(text: &str) -> Result<StateFormula, FormulaParseError> {
    let mut p = Parser { lx: lex(text)?, pos: 0 };
    let f = p.state()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_dist_formula(text: &str) -> Result<DistFormula, FormulaParseError> {
    let mut p = Parser { lx: lex(text)?, pos: 0 };
    let f = p.dist()?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_grammar() {
        for text in [
            "T",
            "(T & T)",
            "(T -> 0.5)",
            "(2/3 -> T)",
            "(T * .25)",
            "<t1> lift(T)",
            "<t1> (lift(T) & lift((T -> 0)))",
            "<a> (0.1 -> (lift(<b> lift(T)) -> 1))",
        ] {
            let f = parse_state_formula(text).unwrap();
            assert_eq!(parse_state_formula(&f.to_string()).unwrap(), f, "{text}");
        }
        assert_eq!(parse_dist_formula("lift(T)").unwrap(), DistFormula::lift(StateFormula::Top));
    }

    #[test]
    fn reports_columns() {
        let e = parse_state_formula("(T & )").unwrap_err();
        assert_eq!(e.column, 6);
        let e = parse_state_formula("(T -> 1.5)").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse_state_formula("T T").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_state_formula("(T * T)").is_err());
        assert!(parse_state_formula("<t1> T").is_err());
        assert!(parse_state_formula("lift(T)").is_err());
        assert!(parse_state_formula("<> lift(T)").is_err());
    }
}
