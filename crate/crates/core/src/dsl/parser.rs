use super::ast::{ActionClause, ActionSpec, AtomKind, Construction, Span, Word};
use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Caret,
    Minus,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            b':' => Some(Tok::Colon),
            b'^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            i += 1;
            out.push(Token { tok, span: Span::new(start, i) });
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'-' {
            if bytes.get(i + 1) == Some(&b'>') {
                i += 2;
                out.push(Token { tok: Tok::Arrow, span: Span::new(start, i) });
            } else {
                i += 1;
                out.push(Token { tok: Tok::Minus, span: Span::new(start, i) });
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Int(text[start..i].to_string()),
                span: Span::new(start, i),
            });
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                span: Span::new(start, i),
            });
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(DslError::Syntax {
                pos: i,
                message: format!("unexpected character {ch:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span.start)
    }

    fn last_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .and_then(|p| self.tokens.get(p))
            .map_or(0, |t| t.span.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn int(&mut self) -> Result<u64, DslError> {
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                s.parse().or_else(|_| self.error("integer out of range"))
            }
            _ => self.error("expected integer"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, DslError> {
        let neg = self.eat(&Tok::Minus);
        let v = self.int()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Construction, DslError> {
        let start = self.offset();
        let mut factors = vec![self.semi()?];
        while self.is_ident("x") {
            self.pos += 1;
            factors.push(self.semi()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        Ok(Construction::Direct {
            factors,
            span: Span::new(start, self.last_end()),
        })
    }

    fn semi(&mut self) -> Result<Construction, DslError> {
        let start = self.offset();
        let mut node = self.unit()?;
        while self.eat(&Tok::Colon) {
            let actor = self.unit()?;
            let action = self.action()?;
            node = Construction::Semidirect {
                normal: Box::new(node),
                actor: Box::new(actor),
                action,
                span: Span::new(start, self.last_end()),
            };
        }
        Ok(node)
    }

    fn unit(&mut self) -> Result<Construction, DslError> {
        let start = self.offset();
        let base = if self.eat(&Tok::LParen) {
            let inner = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            inner
        } else if self.is_ident("perm") {
            self.pos += 1;
            self.perms(start)?
        } else {
            self.atom(start)?
        };
        if self.eat(&Tok::Caret) {
            let k = self.int()?;
            if k == 0 || k > 64 {
                return Err(DslError::Semantic {
                    span: Span::new(start, self.last_end()),
                    message: "power must lie in 1..=64".into(),
                });
            }
            return Ok(Construction::Power {
                base: Box::new(base),
                exponent: k as u32,
                span: Span::new(start, self.last_end()),
            });
        }
        Ok(base)
    }

    fn atom(&mut self, start: usize) -> Result<Construction, DslError> {
        let kind = match self.peek() {
            Some(Tok::Ident(s)) => match AtomKind::parse(s) {
                Some(k) => k,
                None => return self.error(format!("unknown group kind {s:?}")),
            },
            _ => return self.error("expected a group"),
        };
        self.pos += 1;
        self.expect(Tok::LParen, "'('")?;
        let mut params = vec![self.int()?];
        while self.eat(&Tok::Comma) {
            params.push(self.int()?);
        }
        self.expect(Tok::RParen, "')'")?;
        let span = Span::new(start, self.last_end());
        if params.len() != kind.arity() {
            return Err(DslError::Semantic {
                span,
                message: format!("{} takes {} parameter(s)", kind.name(), kind.arity()),
            });
        }
        if params.contains(&0) {
            return Err(DslError::Semantic {
                span,
                message: "parameters must be positive".into(),
            });
        }
        Ok(Construction::Atom { kind, params, span })
    }

    fn perms(&mut self, start: usize) -> Result<Construction, DslError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut generators = Vec::new();
        loop {
            let mut cycles = Vec::new();
            while self.eat(&Tok::LParen) {
                let mut cycle = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        let p = self.int()? as usize;
                        if p == 0 {
                            return self.error("points are numbered from 1");
                        }
                        cycle.push(p);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(Tok::Comma, "',' or ')'")?;
                    }
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            generators.push(cycles);
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        self.expect(Tok::RBracket, "']'")?;
        let degree = generators.iter().flatten().flatten().copied().max().unwrap_or(1);
        Ok(Construction::Perms {
            degree,
            generators,
            span: Span::new(start, self.last_end()),
        })
    }

    fn action(&mut self) -> Result<ActionSpec, DslError> {
        let start = self.offset();
        self.expect(Tok::LBracket, "an action block '['")?;
        let mut clauses = vec![self.clause()?];
        while self.eat(&Tok::Semi) {
            clauses.push(self.clause()?);
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(ActionSpec {
            clauses,
            span: Span::new(start, self.last_end()),
        })
    }

    fn generator(&mut self) -> Result<Vec<usize>, DslError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s.bytes().all(|b| b.is_ascii_lowercase() && b != b'x') => {
                self.pos += 1;
                Ok(s.bytes().map(|b| (b - b'a') as usize).collect())
            }
            _ => self.error("expected a generator name"),
        }
    }

    fn clause(&mut self) -> Result<ActionClause, DslError> {
        let start = self.offset();
        if self.is_ident("act") {
            self.pos += 1;
            let mut maps: Vec<(usize, Word)> = Vec::new();
            if matches!(self.peek(), Some(Tok::Semi | Tok::RBracket)) {
                return Ok(ActionClause::Act(maps));
            }
            loop {
                let lhs = self.generator()?;
                if lhs.len() != 1 {
                    return self.error("expected a single generator before '->'");
                }
                self.expect(Tok::Arrow, "'->'")?;
                let word = self.word()?;
                if maps.iter().any(|(g, _)| *g == lhs[0]) {
                    return Err(DslError::Semantic {
                        span: Span::new(start, self.last_end()),
                        message: format!("generator {} mapped twice", lhs[0]),
                    });
                }
                maps.push((lhs[0], word));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            Ok(ActionClause::Act(maps))
        } else if self.is_ident("mat") {
            self.pos += 1;
            let mut rows = Vec::new();
            let mut single_token = None;
            while matches!(self.peek(), Some(Tok::Int(_) | Tok::Minus)) {
                let before = self.pos;
                let first = self.peek().cloned();
                rows.push(self.row()?);
                single_token = match first {
                    Some(Tok::Int(s)) if rows.len() == 1 && self.pos == before + 1 => Some(s),
                    _ => None,
                };
            }
            // `mat 12` is the 1×1 matrix (12), not a row of two digits
            if let (1, Some(text)) = (rows.len(), single_token) {
                if rows[0].len() > 1 {
                    rows[0] = vec![text.parse().or_else(|_| self.error("integer out of range"))?];
                }
            }
            let span = Span::new(start, self.last_end());
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(DslError::Semantic {
                    span,
                    message: "matrix must be square and non-empty".into(),
                });
            }
            Ok(ActionClause::Mat(rows))
        } else {
            self.error("expected 'act' or 'mat'")
        }
    }

    fn row(&mut self) -> Result<Vec<i64>, DslError> {
        let comma_form = matches!(self.peek(), Some(Tok::Minus))
            || matches!(self.tokens.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Comma));
        if comma_form {
            let mut row = vec![self.signed_int()?];
            while self.eat(&Tok::Comma) {
                row.push(self.signed_int()?);
            }
            Ok(row)
        } else {
            match self.peek().cloned() {
                Some(Tok::Int(s)) => {
                    self.pos += 1;
                    Ok(s.bytes().map(|b| (b - b'0') as i64).collect())
                }
                _ => self.error("expected a matrix row"),
            }
        }
    }

    fn word(&mut self) -> Result<Word, DslError> {
        if matches!(self.peek(), Some(Tok::Int(s)) if s == "1") {
            self.pos += 1;
            return Ok(Word::default());
        }
        let mut letters = Vec::new();
        loop {
            let names = self.generator()?;
            let exp = if self.eat(&Tok::Caret) {
                self.signed_int()?
            } else {
                1
            };
            let last = names.len() - 1;
            for (k, g) in names.into_iter().enumerate() {
                letters.push((g, if k == last { exp } else { 1 }));
            }
            if !matches!(self.peek(), Some(Tok::Ident(s)) if s != "x") {
                break;
            }
        }
        Ok(Word(letters))
    }
}

pub fn parse_construction(text: &str) -> Result<Construction, DslError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let c = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.error("unexpected trailing input");
    }
    Ok(c)
}
