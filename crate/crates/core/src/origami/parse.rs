use super::{Origami, Perm};
use crate::error::{Error, Result};

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            err(self.pos, format!("expected {lit:?}"))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a non-negative integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| err(start, "integer out of range"))
    }

    fn cycles(&mut self, n: usize) -> Result<Perm> {
        let start = self.pos;
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut used = vec![false; n];
        if self.s[self.pos..].starts_with(b"()") {
            self.pos += 2;
            if self.peek() == Some(b'(') {
                return err(self.pos, "identity \"()\" cannot be followed by cycles");
            }
            return Ok(Perm::identity(n));
        }
        if self.peek() != Some(b'(') {
            return err(self.pos, "expected '(' starting a cycle");
        }
        while self.peek() == Some(b'(') {
            self.pos += 1;
            let mut c = Vec::new();
            loop {
                let at = self.pos;
                let x = self.number()?;
                if x >= n {
                    return err(at, format!("square {x} out of range 0..{n}"));
                }
                if used[x] {
                    return err(at, format!("square {x} appears twice"));
                }
                used[x] = true;
                c.push(x as u32);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return err(self.pos, "expected ',' or ')'"),
                }
            }
            cycles.push(c);
        }
        Perm::from_cycles(n, &cycles).or_else(|e| err(start, e.to_string()))
    }
}

pub(super) fn parse_origami(s: &str) -> Result<Origami> {
    let mut c = Cursor {
        s: s.as_bytes(),
        pos: 0,
    };
    let n = c.number()?;
    if n == 0 {
        return err(0, "square count must be positive");
    }
    c.expect(";h=")?;
    let h = c.cycles(n)?;
    c.expect(";v=")?;
    let v = c.cycles(n)?;
    if c.pos != s.len() {
        return err(c.pos, "trailing input");
    }
    Origami::new(h, v)
}
