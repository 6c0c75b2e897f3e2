//! Lattice expressions:
//!
//! ```text
//! sum     := term ('+' term)*
//! term    := '-'? (INT '*'?)? postfix
//! postfix := primary ('(' INT ')')*
//! primary := 'A' INT | 'D' INT | 'E' INT | 'U' | '[' INT ']' | '[' INT ',' INT ',' INT ']' | '(' sum ')'
//! ```
//!
//! `2U(3)` is two copies of U(3), i.e. (U⊕U)(3); a leading `-` rescales by −1.
//! Whitespace is ignored.

use crate::error::{Error, Result};

use super::Lattice;

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at position {} in \"{text}\"", self.pos))
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn sum(&mut self) -> Result<Lattice> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let t = self.term()?;
            acc = acc.direct_sum(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Lattice> {
        let negate = self.eat('-');
        let copies = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.int()?;
            self.eat('*');
            if k < 1 {
                return Err(self.error("multiplicity must be positive"));
            }
            k as usize
        } else {
            1
        };
        let mut l = self.postfix()?;
        if copies > 1 {
            l = l.power(copies);
        }
        if negate {
            l = l.rescaled(-1)?;
        }
        Ok(l)
    }

    fn postfix(&mut self) -> Result<Lattice> {
        let mut l = self.primary()?;
        while self.eat('(') {
            let n = self.int()?;
            self.expect(')')?;
            l = l.rescaled(n)?;
        }
        Ok(l)
    }

    fn primary(&mut self) -> Result<Lattice> {
        match self.peek() {
            Some(c @ ('A' | 'D' | 'E')) => {
                self.pos += 1;
                let n = self.int()?;
                if n < 1 {
                    return Err(self.error("root lattice index must be positive"));
                }
                let n = n as usize;
                match c {
                    'A' => Lattice::root_a(n),
                    'D' => Lattice::root_d(n),
                    _ => Lattice::root_e(n),
                }
            }
            Some('U') => {
                self.pos += 1;
                Ok(Lattice::hyperbolic_plane())
            }
            Some('[') => {
                self.pos += 1;
                let a = self.int()?;
                if self.eat(']') {
                    return Lattice::rank_one(a);
                }
                self.expect(',')?;
                let b = self.int()?;
                self.expect(',')?;
                let c = self.int()?;
                self.expect(']')?;
                Lattice::binary(a, b, c)
            }
            Some('(') => {
                self.pos += 1;
                let l = self.sum()?;
                self.expect(')')?;
                Ok(l)
            }
            _ => Err(self.error("expected a lattice")),
        }
    }
}

pub fn parse_lattice_spec(spec: &str) -> Result<Lattice> {
    let chars: Vec<char> = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty lattice expression".into()));
    }
    let mut p = Parser { chars, pos: 0 };
    let l = p.sum()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(l)
}
