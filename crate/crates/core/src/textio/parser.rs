use crate::error::{Error, Result};
use crate::expr::{PclExpr, PilExpr};
use crate::pcl::Pcl;
use crate::port::{Interaction, Port, PortId, PortUniverse};

/// Deepest nesting of parentheses and prefix operators accepted.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                word.push(d);
                bump(&mut chars);
            }
            Tok::Ident(word)
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                bump(&mut chars);
            }
            Tok::Int(digits)
        } else if "(){}<>,+~!&|".contains(c) {
            bump(&mut chars);
            Tok::Sym(c)
        } else {
            return Err(Error::parse(l, col, format!("unexpected character `{}`", c.escape_default())));
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    ports: &'a PortUniverse,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        Error::parse(t.line, t.column, message)
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn at_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.at_sym(c) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn pcl(&mut self) -> Result<PclExpr> {
        self.enter()?;
        let lhs = self.union()?;
        let e = if self.at_keyword("implies") {
            self.advance();
            lhs.implies(self.pcl()?)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(e)
    }

    fn union(&mut self) -> Result<PclExpr> {
        let mut e = self.intersection()?;
        while self.at_keyword("or") {
            self.advance();
            e = e.union(self.intersection()?);
        }
        Ok(e)
    }

    fn intersection(&mut self) -> Result<PclExpr> {
        let mut e = self.sum()?;
        while self.at_keyword("and") {
            self.advance();
            e = e.intersect(self.sum()?);
        }
        Ok(e)
    }

    fn sum(&mut self) -> Result<PclExpr> {
        let mut e = self.prefixed()?;
        while self.at_sym('+') {
            self.advance();
            e = e.coalesce(self.prefixed()?);
        }
        Ok(e)
    }

    fn prefixed(&mut self) -> Result<PclExpr> {
        if self.at_keyword("not") || self.at_sym('~') {
            let negate = self.at_keyword("not");
            self.advance();
            self.enter()?;
            let inner = self.prefixed()?;
            self.depth -= 1;
            return Ok(if negate { inner.not() } else { inner.closure() });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<PclExpr> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "true" => {
                self.advance();
                Ok(PclExpr::True)
            }
            Tok::Ident(w) if w == "dis" => {
                self.advance();
                self.expect_sym('(')?;
                let mut items = vec![self.pcl()?];
                while self.at_sym(',') {
                    self.advance();
                    items.push(self.pcl()?);
                }
                self.expect_sym(')')?;
                Ok(PclExpr::Dis(items))
            }
            Tok::Sym('{') => {
                self.advance();
                let phi = self.pil()?;
                self.expect_sym('}')?;
                Ok(PclExpr::Pil(phi))
            }
            Tok::Sym('<') => {
                self.advance();
                let mut ids = vec![self.port()?];
                while self.at_sym(',') {
                    self.advance();
                    let (line, column) = (self.tokens[self.pos].line, self.tokens[self.pos].column);
                    let id = self.port()?;
                    if ids.contains(&id) {
                        let name = self.ports.port(id);
                        return Err(Error::parse(line, column, format!("port `{name}` repeated in interaction")));
                    }
                    ids.push(id);
                }
                self.expect_sym('>')?;
                Ok(PclExpr::Interaction(Interaction::from_ids(ids).expect("non-empty")))
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.pcl()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.error(format!("expected a formula, found {}", self.describe()))),
        }
    }

    fn pil(&mut self) -> Result<PilExpr> {
        self.enter()?;
        let mut e = self.pil_and()?;
        while self.at_sym('|') {
            self.advance();
            e = PilExpr::Or(Box::new(e), Box::new(self.pil_and()?));
        }
        self.depth -= 1;
        Ok(e)
    }

    fn pil_and(&mut self) -> Result<PilExpr> {
        let mut e = self.pil_unary()?;
        while self.at_sym('&') {
            self.advance();
            e = PilExpr::And(Box::new(e), Box::new(self.pil_unary()?));
        }
        Ok(e)
    }

    fn pil_unary(&mut self) -> Result<PilExpr> {
        match self.peek().clone() {
            Tok::Sym('!') => {
                self.advance();
                self.enter()?;
                let inner = self.pil_unary()?;
                self.depth -= 1;
                Ok(PilExpr::Not(Box::new(inner)))
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.pil()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(w) if w == "true" => {
                self.advance();
                Ok(PilExpr::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.advance();
                Ok(PilExpr::False)
            }
            Tok::Ident(_) => Ok(PilExpr::Port(self.port()?)),
            _ => Err(self.error(format!("expected an interaction formula, found {}", self.describe()))),
        }
    }

    fn port(&mut self) -> Result<PortId> {
        let Tok::Ident(label) = self.peek().clone() else {
            return Err(self.error(format!("expected a port, found {}", self.describe())));
        };
        if crate::port::RESERVED.contains(&label.as_str()) {
            return Err(self.error(format!("`{label}` is a keyword, not a port")));
        }
        self.advance();
        let port = if self.at_sym('(') && matches!(self.peek_at(1), Tok::Int(_)) {
            self.advance();
            let Tok::Int(digits) = self.advance().tok else {
                unreachable!("checked above")
            };
            let instance: u32 = match digits.parse() {
                Ok(j) if j >= 1 => j,
                _ => return Err(self.error(format!("bad instance number `{digits}`"))),
            };
            self.expect_sym(')')?;
            Port::of_instance(label, instance)
        } else {
            Port::plain(label)
        };
        self.ports.id(&port).ok_or_else(|| Error::UnknownPort(port.to_string()))
    }
}

/// Parses a formula, resolving ports against `ports`.
pub fn parse_formula(text: &str, ports: &PortUniverse) -> Result<PclExpr> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        depth: 0,
        ports,
    };
    let e = parser.pcl()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!("unexpected {} after formula", parser.describe())));
    }
    Ok(e)
}

/// [`parse_formula`] followed by desugaring.
pub fn parse_formula_core(text: &str, ports: &PortUniverse) -> Result<Pcl> {
    Ok(parse_formula(text, ports)?.desugar(ports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pil::Pil;

    fn ms() -> PortUniverse {
        PortUniverse::new([
            Port::of_instance("m", 1),
            Port::of_instance("s", 1),
            Port::plain("a"),
            Port::plain("b"),
        ])
        .unwrap()
    }

    #[test]
    fn interaction_literal() {
        let u = ms();
        let f = parse_formula_core("<m(1),s(1)>", &u).unwrap();
        let a = u.interaction_of_names(&["m(1)", "s(1)"]).unwrap();
        assert_eq!(f, Pcl::Pil(Pil::characteristic(a, &u).unwrap()));
    }

    #[test]
    fn pil_inside_braces() {
        let u = ms();
        let e = parse_formula("{m(1) & !s(1)}", &u).unwrap();
        let (m, s) = (u.resolve("m(1)").unwrap(), u.resolve("s(1)").unwrap());
        let expected = PilExpr::And(
            Box::new(PilExpr::Port(m)),
            Box::new(PilExpr::Not(Box::new(PilExpr::Port(s)))),
        );
        assert_eq!(e, PclExpr::Pil(expected));
    }

    #[test]
    fn precedence() {
        let u = ms();
        let lit = |n: &str| PclExpr::Interaction(u.interaction_of_names(&[n]).unwrap());
        let e = parse_formula("not (<a> or <b>) + ~<a>", &u).unwrap();
        assert_eq!(e, lit("a").union(lit("b")).not().coalesce(lit("a").closure()));
        let e = parse_formula("<a> or <b> and <a> + <b>", &u).unwrap();
        assert_eq!(e, lit("a").union(lit("b").intersect(lit("a").coalesce(lit("b")))));
        let e = parse_formula("<a> implies <b> implies <a>", &u).unwrap();
        assert_eq!(e, lit("a").implies(lit("b").implies(lit("a"))));
        let e = parse_formula("<a> + <b> + <a>", &u).unwrap();
        assert_eq!(e, lit("a").coalesce(lit("b")).coalesce(lit("a")));
    }

    #[test]
    fn errors_carry_positions() {
        let u = ms();
        let err = parse_formula("<a> or\n  + <b>", &u).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 3,
                message: "expected a formula, found `+`".into()
            }
        );
        assert_eq!(parse_formula("<c>", &u).unwrap_err().code(), "UNKNOWN_PORT");
        assert_eq!(parse_formula("<a> <b>", &u).unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(parse_formula("<m(0)>", &u).unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(parse_formula("<m(99999999999)>", &u).unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(parse_formula("", &u).unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(parse_formula("<true>", &u).unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(parse_formula("é", &u).unwrap_err().code(), "PARSE_ERROR");
    }

    #[test]
    fn deep_nesting_is_refused() {
        let u = ms();
        let deep = format!("{}<a>{}", "(".repeat(10_000), ")".repeat(10_000));
        assert_eq!(parse_formula(&deep, &u).unwrap_err().code(), "PARSE_ERROR");
        let negations = format!("{}<a>", "not ".repeat(10_000));
        assert_eq!(parse_formula(&negations, &u).unwrap_err().code(), "PARSE_ERROR");
        let bangs = format!("{{{}a}}", "!".repeat(10_000));
        assert_eq!(parse_formula(&bangs, &u).unwrap_err().code(), "PARSE_ERROR");
        let ok = format!("{}<a>{}", "(".repeat(50), ")".repeat(50));
        assert!(parse_formula(&ok, &u).is_ok());
    }
}
