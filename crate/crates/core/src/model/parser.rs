//! Line-oriented model format and polynomial expression parser.
//!
//! ```text
//! model <name>
//! species x1 x2 ... xn
//! param <sym> = <decimal or rational>
//! ode <species> = <polynomial expression>
//! conserved <sym> <sym> ...
//! ```
//!
//! `#` starts a comment. Expressions use `+ - * ^ ( )`, integer exponents and
//! division by numeric constants only.

use std::collections::HashSet;

use super::{ModelError, OdeModel};
use crate::algebra::{format_rat, parse_rat, MultiPoly, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ModelError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Spanned {
                tok: Tok::Num(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*/^()=".contains(c) {
            out.push(Spanned { tok: Tok::Op(c), col });
            i += 1;
        } else {
            return Err(ModelError::Syntax {
                line,
                col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.col).unwrap_or(self.end_col)
    }

    fn err(&self, message: impl Into<String>) -> ModelError {
        ModelError::Syntax {
            line: self.line,
            col: self.col(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ModelError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ModelError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let col = self.col();
            let rhs = self.unary()?;
            if c == '*' {
                acc = &acc * &rhs;
            } else {
                if !rhs.is_constant() || rhs.is_zero() {
                    return Err(ModelError::Syntax {
                        line: self.line,
                        col,
                        message: "division only by nonzero numeric constants".into(),
                    });
                }
                acc = acc.scale(&rhs.constant_term().recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, ModelError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ModelError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.chars().all(|c| c.is_ascii_digit()) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| ModelError::Syntax {
                        line: self.line,
                        col,
                        message: format!("exponent `{n}` out of range"),
                    })?;
                    if e == 0 {
                        return Err(ModelError::Syntax {
                            line: self.line,
                            col,
                            message: "exponent must be a positive integer".into(),
                        });
                    }
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("exponent must be a positive integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ModelError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let value = parse_rat(&n).map_err(|_| ModelError::Syntax {
                    line: self.line,
                    col,
                    message: format!("bad number `{n}`"),
                })?;
                Ok(MultiPoly::constant(self.vars, value))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                MultiPoly::var(self.vars, &name).map_err(|_| ModelError::UndeclaredSymbol {
                    line: self.line,
                    col,
                    name,
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {}", describe(&t)))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
    }
}

fn parse_expr_tokens(
    toks: &[Spanned],
    line: usize,
    end_col: usize,
    vars: &[String],
) -> Result<MultiPoly, ModelError> {
    let mut p = ExprParser {
        toks,
        pos: 0,
        line,
        end_col,
        vars,
    };
    let poly = p.expr()?;
    if let Some(t) = p.peek().cloned() {
        return Err(p.err(format!("unexpected token {}", describe(&t))));
    }
    Ok(poly)
}

/// Parses a polynomial expression over `vars`.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<MultiPoly, ModelError> {
    let toks = tokenize(text, 1, 1)?;
    parse_expr_tokens(&toks, 1, text.chars().count() + 1, vars)
}

fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses the model text format.
pub fn parse_model(text: &str) -> Result<OdeModel, ModelError> {
    let mut name: Option<String> = None;
    let mut species: Option<Vec<String>> = None;
    let mut params: Vec<(String, Rat)> = Vec::new();
    let mut conserved: Vec<String> = Vec::new();
    let mut raw_odes: Vec<(usize, usize, String, Vec<Spanned>, usize)> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest_start = indent + keyword.chars().count();
        let rest: String = content.chars().skip(rest_start).collect();
        let syntax = |col: usize, message: String| ModelError::Syntax { line, col, message };
        let words = |rest: &str| -> Result<Vec<(usize, String)>, ModelError> {
            let mut out = Vec::new();
            let mut col = rest_start + 1;
            for piece in rest.split(' ') {
                if !piece.trim().is_empty() {
                    let w = piece.trim().to_string();
                    if !is_symbol(&w) {
                        return Err(syntax(col, format!("invalid symbol `{w}`")));
                    }
                    out.push((col, w));
                }
                col += piece.chars().count() + 1;
            }
            Ok(out)
        };
        let mut declare = |col: usize, sym: &str| -> Result<(), ModelError> {
            if !seen.insert(sym.to_string()) {
                return Err(ModelError::DuplicateSymbol {
                    line,
                    col,
                    name: sym.to_string(),
                });
            }
            Ok(())
        };
        match keyword.as_str() {
            "model" => {
                let ws = words(&rest)?;
                if ws.len() != 1 || name.is_some() {
                    return Err(syntax(indent + 1, "expected `model <name>` once".into()));
                }
                name = Some(ws[0].1.clone());
            }
            "species" => {
                if species.is_some() {
                    return Err(syntax(indent + 1, "species declared twice".into()));
                }
                let ws = words(&rest)?;
                if ws.is_empty() {
                    return Err(syntax(rest_start + 1, "expected species names".into()));
                }
                for (col, w) in &ws {
                    declare(*col, w)?;
                }
                species = Some(ws.into_iter().map(|(_, w)| w).collect());
            }
            "param" => {
                let toks = tokenize(&rest, line, rest_start + 1)?;
                match toks.as_slice() {
                    [Spanned {
                        tok: Tok::Ident(sym),
                        col,
                    }, Spanned {
                        tok: Tok::Op('='),
                        ..
                    }, value @ ..]
                        if !value.is_empty() =>
                    {
                        declare(*col, sym)?;
                        let end = rest_start + rest.chars().count() + 1;
                        let v = parse_expr_tokens(value, line, end, &[])?;
                        params.push((sym.clone(), v.constant_term()));
                    }
                    _ => {
                        return Err(syntax(
                            rest_start + 1,
                            "expected `param <sym> = <value>`".into(),
                        ))
                    }
                }
            }
            "ode" => {
                let toks = tokenize(&rest, line, rest_start + 1)?;
                match toks.as_slice() {
                    [Spanned {
                        tok: Tok::Ident(sp),
                        col,
                    }, Spanned {
                        tok: Tok::Op('='),
                        ..
                    }, body @ ..] => {
                        let end = rest_start + rest.chars().count() + 1;
                        raw_odes.push((line, *col, sp.clone(), body.to_vec(), end));
                    }
                    _ => {
                        return Err(syntax(
                            rest_start + 1,
                            "expected `ode <species> = <expression>`".into(),
                        ))
                    }
                }
            }
            "conserved" => {
                for (col, w) in words(&rest)? {
                    declare(col, &w)?;
                    conserved.push(w);
                }
            }
            other => {
                return Err(syntax(indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }

    let name = name.ok_or(ModelError::Missing("model"))?;
    let species = species.ok_or(ModelError::Missing("species"))?;
    let mut vars = species.clone();
    vars.extend(params.iter().map(|(s, _)| s.clone()));

    let mut odes: Vec<Option<MultiPoly>> = vec![None; species.len()];
    for (line, col, sp, body, end) in raw_odes {
        let idx = species
            .iter()
            .position(|s| *s == sp)
            .ok_or_else(|| ModelError::UndeclaredSymbol {
                line,
                col,
                name: sp.clone(),
            })?;
        if odes[idx].is_some() {
            return Err(ModelError::DuplicateOde { line, species: sp });
        }
        odes[idx] = Some(parse_expr_tokens(&body, line, end, &vars)?);
    }
    let odes = odes
        .into_iter()
        .zip(&species)
        .map(|(o, s)| o.ok_or_else(|| ModelError::MissingOde(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;

    OdeModel::new(name, species, params, odes, conserved)
}

/// Renders a model in the text format; `parse_model` inverts it.
pub fn render_model(m: &OdeModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", m.name));
    out.push_str(&format!("species {}\n", m.species.join(" ")));
    for (sym, v) in &m.rate_params {
        out.push_str(&format!("param {} = {}\n", sym, format_rat(v)));
    }
    for (sp, ode) in m.species.iter().zip(&m.odes) {
        out.push_str(&format!("ode {} = {}\n", sp, ode));
    }
    if !m.conserved.is_empty() {
        out.push_str(&format!("conserved {}\n", m.conserved.join(" ")));
    }
    out
}
