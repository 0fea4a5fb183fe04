use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: [&str; 18] = [
    "<=", ">=", "{", "}", "(", ")", "[", "]", ";", ",", "|", "+", "-", "*", "^", "/", "=", ":",
];
const SINGLE: [&str; 2] = ["<", ">"];

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn take_while(&mut self, s: &mut String, pred: impl Fn(char) -> bool) {
        while self.peek(0).is_some_and(&pred) {
            s.push(self.bump());
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut sc = Scanner { chars: src.chars().collect(), i: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(c) = sc.peek(0) {
        if c.is_whitespace() {
            sc.bump();
            continue;
        }
        if c == '/' && sc.peek(1) == Some('/') {
            while sc.peek(0).is_some_and(|c| c != '\n') {
                sc.bump();
            }
            continue;
        }
        let (line, col) = (sc.line, sc.col);
        if c == '/' && sc.peek(1) == Some('*') {
            sc.bump();
            sc.bump();
            loop {
                match (sc.peek(0), sc.peek(1)) {
                    (None, _) => return Err(syntax(line, col, "unterminated comment")),
                    (Some('*'), Some('/')) => {
                        sc.bump();
                        sc.bump();
                        break;
                    }
                    _ => {
                        sc.bump();
                    }
                }
            }
            continue;
        }
        if c == '"' {
            sc.bump();
            let mut s = String::new();
            sc.take_while(&mut s, |c| c != '"');
            if sc.peek(0).is_none() {
                return Err(syntax(line, col, "unterminated string"));
            }
            sc.bump();
            out.push(Token { tok: Tok::Str(s), line, col });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && sc.peek(1).is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            sc.take_while(&mut s, |c| c.is_ascii_digit() || c == '.');
            if matches!(sc.peek(0), Some('e' | 'E')) {
                let sign = matches!(sc.peek(1), Some('+' | '-'));
                let digit_at = if sign { 2 } else { 1 };
                if sc.peek(digit_at).is_some_and(|d| d.is_ascii_digit()) {
                    for _ in 0..digit_at {
                        s.push(sc.bump());
                    }
                    sc.take_while(&mut s, |c| c.is_ascii_digit());
                }
            }
            // labels such as `2a` are identifiers, not numbers
            if sc.peek(0).is_some_and(is_ident_char) {
                sc.take_while(&mut s, is_ident_char);
                out.push(Token { tok: Tok::Ident(s), line, col });
            } else {
                out.push(Token { tok: Tok::Number(s), line, col });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            sc.take_while(&mut s, is_ident_char);
            out.push(Token { tok: Tok::Ident(s), line, col });
            continue;
        }
        let two: String = [Some(c), sc.peek(1)].iter().flatten().collect();
        if let Some(p) = PUNCT.iter().find(|p| p.len() == 2 && **p == two) {
            sc.bump();
            sc.bump();
            out.push(Token { tok: Tok::Punct(p), line, col });
            continue;
        }
        let one = c.to_string();
        if let Some(p) = PUNCT.iter().chain(SINGLE.iter()).find(|p| **p == one) {
            sc.bump();
            out.push(Token { tok: Tok::Punct(p), line, col });
            continue;
        }
        return Err(syntax(line, col, &format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line: sc.line, col: sc.col });
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

/// Token cursor shared by the model and query parsers.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: &str) -> Result<T> {
        let t = self.peek();
        Err(syntax(t.line, t.col, message))
    }

    pub fn at_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(&format!("expected `{p}`, found {}", describe(&self.peek().tok)))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.error(&format!("expected `{kw}`, found {}", describe(&self.peek().tok)))
        }
    }

    pub fn ident(&mut self) -> Result<Token> {
        match &self.peek().tok {
            Tok::Ident(_) => Ok(self.next()),
            other => self.error(&format!("expected identifier, found {}", describe(other))),
        }
    }

    /// An identifier or bare number, as used for value labels.
    pub fn label(&mut self) -> Result<(String, Token)> {
        match self.peek().tok.clone() {
            Tok::Ident(s) | Tok::Number(s) => Ok((s, self.next())),
            other => self.error(&format!("expected value label, found {}", describe(&other))),
        }
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("number `{s}`"),
        Tok::Str(_) => "string".into(),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".into(),
    }
}
