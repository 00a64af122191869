//! Tokenizer shared by the poset and quiver text formats.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Id(String),
    Punct(&'static str),
}

const PUNCT: [&str; 7] = ["->", ";", "<", ":", "[", "]", ","];

fn is_id_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '~' | '@' | '.')
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut rest = line;
        'outer: while !rest.is_empty() {
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            for p in PUNCT {
                if let Some(r) = rest.strip_prefix(p) {
                    out.push(Tok::Punct(p));
                    rest = r;
                    continue 'outer;
                }
            }
            let end = rest
                .char_indices()
                .find(|&(_, ch)| !is_id_char(ch))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            if end == 0 {
                return Err(Error::Parse {
                    pos: out.len(),
                    msg: format!("unexpected character `{c}`"),
                });
            }
            out.push(Tok::Id(rest[..end].to_string()));
            rest = &rest[end..];
        }
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub(crate) fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    pub(crate) fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    pub(crate) fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`")))
        }
    }

    pub(crate) fn expect_id(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.error("expected identifier".into()))
            }
        }
    }

    pub(crate) fn error(&self, msg: String) -> Error {
        Error::Parse { pos: self.pos, msg }
    }
}
