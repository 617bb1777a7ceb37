//! Canonical element encodings.
//!
//! Every carrier element is a small tagged tree. Two values denote the same
//! element exactly when their trees are identical, so any function that
//! inspects only the tree is automatically extensional.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::carrier::CarrierError;

/// One element of some carrier, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Unit,
    Bool(bool),
    /// Index into a finite carrier (`fin:<n>` and `opaque:<n>`).
    Nat(u32),
    Left(Box<Value>),
    Right(Box<Value>),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn left(v: Value) -> Value {
        Value::Left(Box::new(v))
    }

    pub fn right(v: Value) -> Value {
        Value::Right(Box::new(v))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    /// Parses a comma-separated list of values, splitting only at
    /// parenthesis depth zero so that pairs survive intact.
    pub fn parse_list(text: &str) -> Result<Vec<Value>, CarrierError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(parse_at(&text[start..i], start)?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(parse_at(&text[start..], start)?);
        Ok(out)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Left(v) => write_tagged(f, "left", v),
            Value::Right(v) => write_tagged(f, "right", v),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

// `left()` abbreviates `left(())`.
fn write_tagged(f: &mut fmt::Formatter<'_>, tag: &str, inner: &Value) -> fmt::Result {
    match inner {
        Value::Unit => write!(f, "{tag}()"),
        other => write!(f, "{tag}({other})"),
    }
}

impl FromStr for Value {
    type Err = CarrierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_at(s, 0)
    }
}

fn parse_at(text: &str, offset: usize) -> Result<Value, CarrierError> {
    let mut p = ValueParser {
        src: text.as_bytes(),
        pos: 0,
        offset,
    };
    p.skip_ws();
    let v = p.value()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after value"));
    }
    Ok(v)
}

struct ValueParser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl ValueParser<'_> {
    fn error(&self, message: &str) -> CarrierError {
        CarrierError::Parse {
            position: self.offset + self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: u8) -> Result<(), CarrierError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", ch as char)))
        }
    }

    fn value(&mut self) -> Result<Value, CarrierError> {
        self.skip_ws();
        if self.eat("true") {
            return Ok(Value::Bool(true));
        }
        if self.eat("false") {
            return Ok(Value::Bool(false));
        }
        if self.eat("left(") {
            return self.tagged().map(Value::left);
        }
        if self.eat("right(") {
            return self.tagged().map(Value::right);
        }
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b')') {
                    self.pos += 1;
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                self.expect(b',')?;
                let b = self.value()?;
                self.expect(b')')?;
                Ok(Value::pair(a, b))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                digits
                    .parse::<u32>()
                    .map(Value::Nat)
                    .map_err(|_| self.error("index does not fit in 32 bits"))
            }
            Some(_) => Err(self.error("unrecognised value")),
            None => Err(self.error("unexpected end of value")),
        }
    }

    // After `left(` / `right(`: either `)` (unit payload) or a value then `)`.
    fn tagged(&mut self) -> Result<Value, CarrierError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b')') {
            self.pos += 1;
            return Ok(Value::Unit);
        }
        let inner = self.value()?;
        self.expect(b')')?;
        Ok(inner)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
