//! Text format for presentations.
//!
//! ```text
//! quiver R
//! vertex 1 2 3
//! arrow a1 : 1 -> 2
//! arrow b1 : 2 -> 1
//! rel b1.a1            # a1 then b1
//! rel a1.b1 - 2*x.y
//! family zigzag-A-inf window 4..6 suffix '
//! ```
//!
//! Words are written in function order. Vertex ids are arbitrary
//! non-blank tokens; arrow ids start with a letter or `_` and may not
//! contain `.`, `*` or `#`. Signs between terms must be separate tokens.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::family::{add_family, parse_range, FamilyError, FamilyKind, FamilySpec};
use crate::field::{Field, ParseScalarError};
use crate::quiver::{Path, Presentation, Quiver, QuiverError, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub kind: DslErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
}

#[derive(Clone, Copy)]
struct Token<'a> {
    col: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (b, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(b),
            (true, Some(s)) => {
                out.push(Token { col: body[..s].chars().count() + 1, text: &body[s..b] });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { col: body[..s].chars().count() + 1, text: &body[s..] });
    }
    out
}

pub fn is_arrow_id(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && s.chars().all(|c| !c.is_whitespace() && !matches!(c, '.' | '*' | '#'))
}

struct Parser<F> {
    pres: Presentation<F>,
    line: usize,
    admissible: bool,
}

impl<F: Field> Parser<F> {
    fn err(&self, col: usize, kind: impl Into<DslErrorKind>) -> DslError {
        DslError { line: self.line, col, kind: kind.into() }
    }

    fn syntax(&self, col: usize, msg: impl Into<String>) -> DslError {
        self.err(col, DslErrorKind::Syntax(msg.into()))
    }

    fn statement(&mut self, toks: &[Token<'_>]) -> Result<(), DslError> {
        let head = toks[0];
        let rest = &toks[1..];
        match head.text {
            "quiver" => match rest {
                [name] => {
                    self.pres.quiver.set_name(name.text);
                    Ok(())
                }
                _ => Err(self.syntax(head.col, "expected `quiver <name>`")),
            },
            "vertex" => {
                if rest.is_empty() {
                    return Err(self.syntax(head.col, "expected at least one vertex id"));
                }
                for t in rest {
                    self.pres.quiver.add_vertex(t.text).map_err(|e| self.err(t.col, e))?;
                }
                Ok(())
            }
            "arrow" => self.arrow(head, rest),
            "rel" => {
                let r = self.relation(head, rest)?;
                self.pres.add_relation(r);
                Ok(())
            }
            "family" => self.family(head, rest),
            other => Err(self.syntax(head.col, format!("unknown statement `{other}`"))),
        }
    }

    fn arrow(&mut self, head: Token<'_>, rest: &[Token<'_>]) -> Result<(), DslError> {
        let [id, colon, src, arrow, dst] = rest else {
            return Err(self.syntax(head.col, "expected `arrow <id> : <src> -> <dst>`"));
        };
        if colon.text != ":" {
            return Err(self.syntax(colon.col, "expected `:`"));
        }
        if arrow.text != "->" {
            return Err(self.syntax(arrow.col, "expected `->`"));
        }
        if !is_arrow_id(id.text) {
            return Err(self.syntax(id.col, format!("`{}` is not a valid arrow id", id.text)));
        }
        let s = self.pres.quiver.require_vertex(src.text).map_err(|e| self.err(src.col, e))?;
        let t = self.pres.quiver.require_vertex(dst.text).map_err(|e| self.err(dst.col, e))?;
        self.pres.quiver.add_arrow(id.text, s, t).map_err(|e| self.err(id.col, e))?;
        Ok(())
    }

    fn relation(&self, head: Token<'_>, rest: &[Token<'_>]) -> Result<Relation<F>, DslError> {
        if rest.is_empty() {
            return Err(self.syntax(head.col, "empty relation"));
        }
        let mut terms: Vec<(F, Path, usize)> = Vec::new();
        let mut sign: Option<(bool, usize)> = None;
        for (k, t) in rest.iter().enumerate() {
            let mut text = t.text;
            let mut col = t.col;
            if let Some(first) = text.chars().next().filter(|c| *c == '+' || *c == '-') {
                if sign.is_some() {
                    return Err(self.syntax(col, "two signs in a row"));
                }
                sign = Some((first == '-', col));
                text = &text[1..];
                col += 1;
                if text.is_empty() {
                    continue;
                }
            }
            if k > 0 && sign.is_none() {
                return Err(self.syntax(col, "missing `+` or `-` between terms"));
            }
            let negative = sign.take().is_some_and(|(n, _)| n);
            let (coef, word, word_col) = match text.split_once('*') {
                Some((c, w)) => {
                    let c = F::parse_scalar(c).map_err(|e| self.err(col, e))?;
                    (c, w, col + text.find('*').map_or(0, |p| text[..p].chars().count() + 1))
                }
                None => (F::one(), text, col),
            };
            let coef = if negative { coef.neg() } else { coef };
            let path = self.word(word, word_col)?;
            if self.admissible && path.len() < 2 {
                let q = &self.pres.quiver;
                return Err(self.err(word_col, QuiverError::NotAdmissible(path.display(q).to_string(), path.len())));
            }
            if let Some((_, p, _)) = terms.first() {
                if p.source != path.source || p.target != path.target {
                    return Err(self.err(word_col, QuiverError::NotParallel));
                }
            }
            terms.push((coef, path, word_col));
        }
        if let Some((_, col)) = sign {
            return Err(self.syntax(col, "dangling sign"));
        }
        Relation::new(terms.into_iter().map(|(c, p, _)| (c, p)).collect()).map_err(|e| self.err(head.col, e))
    }

    fn word(&self, word: &str, col: usize) -> Result<Path, DslError> {
        if word.is_empty() {
            return Err(self.syntax(col, "expected a path"));
        }
        let q = &self.pres.quiver;
        let mut arrows = Vec::new();
        let mut offset = 0;
        for id in word.split('.') {
            let a = q.require_arrow(id).map_err(|e| self.err(col + offset, e))?;
            arrows.push((a, col + offset));
            offset += id.chars().count() + 1;
        }
        arrows.reverse();
        for w in arrows.windows(2) {
            if q.arrow(w[0].0).target != q.arrow(w[1].0).source {
                let e = QuiverError::NotComposable(q.arrow(w[0].0).id.clone(), q.arrow(w[1].0).id.clone());
                return Err(self.err(w[1].1, e));
            }
        }
        Path::from_arrows(q, arrows.into_iter().map(|(a, _)| a).collect()).map_err(|e| self.err(col, e))
    }

    fn family(&mut self, head: Token<'_>, rest: &[Token<'_>]) -> Result<(), DslError> {
        let [name, window, tail @ ..] = rest else {
            return Err(self.syntax(head.col, "expected `family <id> window <ranges>`"));
        };
        let kind: FamilyKind = name.text.parse().map_err(|e| self.err(name.col, e))?;
        if window.text != "window" {
            return Err(self.syntax(window.col, "expected `window`"));
        }
        let split = tail.iter().position(|t| t.text == "suffix").unwrap_or(tail.len());
        let (range_toks, suffix_toks) = tail.split_at(split);
        let Some(first) = range_toks.first() else {
            return Err(self.syntax(window.col, "missing window ranges"));
        };
        let joined: String = range_toks.iter().map(|t| t.text).collect();
        let ranges = joined
            .split(',')
            .map(parse_range)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| self.err(first.col, e))?;
        let mut spec = FamilySpec::new(kind, ranges);
        match suffix_toks {
            [] => {}
            [_, s] => spec = spec.with_suffix(s.text),
            [kw, ..] => return Err(self.syntax(kw.col, "expected `suffix <text>`")),
        }
        add_family(&mut self.pres, &spec).map_err(|e| self.err(name.col, e))
    }
}

/// Parses a presentation; relations must be admissible.
pub fn parse_presentation<F: Field>(text: &str) -> Result<Presentation<F>, DslError> {
    let mut p = Parser { pres: Presentation::new(Quiver::new("Q")), line: 0, admissible: true };
    for (k, line) in text.lines().enumerate() {
        p.line = k + 1;
        let toks = tokens(line);
        if !toks.is_empty() {
            p.statement(&toks)?;
        }
    }
    Ok(p.pres)
}

/// Parses one relation body such as `phi.b1 - theta` against an existing
/// quiver. Terms of length below two are allowed here.
pub fn parse_relation<F: Field>(pres: &Presentation<F>, text: &str) -> Result<Relation<F>, DslError> {
    let p = Parser { pres: Presentation::new(pres.quiver.clone()), line: 1, admissible: false };
    let toks = tokens(text);
    let head = Token { col: 1, text: "" };
    p.relation(head, &toks)
}

/// Renders a presentation in the text format. Families are expanded, so
/// the output lists every vertex, arrow and relation explicitly.
pub fn format_presentation<F: Field>(p: &Presentation<F>) -> String {
    let q = &p.quiver;
    let mut out = String::new();
    let _ = writeln!(out, "quiver {}", q.name());
    for v in q.vertex_ids() {
        let _ = writeln!(out, "vertex {v}");
    }
    for a in q.arrows() {
        let _ = writeln!(out, "arrow {} : {} -> {}", a.id, q.vertex_id(a.source), q.vertex_id(a.target));
    }
    for r in &p.relations {
        let _ = writeln!(out, "rel {}", r.display(q));
    }
    out
}

/// Wrapper whose `Display` is [`format_presentation`].
pub struct Formatted<'a, F>(pub &'a Presentation<F>);

impl<F: Field> fmt::Display for Formatted<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_presentation(self.0))
    }
}
