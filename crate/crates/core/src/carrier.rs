//! Element universes and the capabilities that gate builders and verifiers.
//!
//! A [`Carrier`] is parsed from a short descriptor (`bool`, `fin:3`,
//! `sum:unit,bool`, `opaque:4`, ...). Its [`Capabilities`] decide which
//! witness builders apply: anything that needs to compare or list elements
//! is refused on carriers whose equality is withheld.
//!
//! Opaque carriers still know their elements internally (the opponent side
//! of a game may hand them out, and exclusion bookkeeping can tell them
//! apart), but [`Carrier::value_eq`] and [`Carrier::enumerate`] refuse to
//! answer for them.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Capability {
    Equality,
    Enumeration,
    Propositional,
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Capability::Equality => "equality",
            Capability::Enumeration => "enumeration",
            Capability::Propositional => "propositional",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("CapabilityMissing: carrier `{carrier}` has no {capability}")]
    CapabilityMissing { carrier: String, capability: Capability },
}

/// Outcome of an equality query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equality {
    Equal,
    NotEqual,
}

impl Equality {
    pub fn is_equal(self) -> bool {
        self == Equality::Equal
    }
}

impl From<bool> for Equality {
    fn from(b: bool) -> Self {
        if b {
            Equality::Equal
        } else {
            Equality::NotEqual
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub has_eq: bool,
    pub has_enum: bool,
    pub size_bound: Option<usize>,
    pub is_prop: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Bool,
    Unit,
    Empty,
    Fin(u32),
    Sum(Box<Shape>, Box<Shape>),
    Prod(Box<Shape>, Box<Shape>),
    Prop(Box<Shape>),
    Opaque(u32),
}

impl Shape {
    fn has_eq(&self) -> bool {
        match self {
            Shape::Opaque(_) => false,
            Shape::Sum(a, b) | Shape::Prod(a, b) => a.has_eq() && b.has_eq(),
            Shape::Prop(s) => s.has_eq(),
            _ => true,
        }
    }

    fn size(&self) -> usize {
        match self {
            Shape::Bool => 2,
            Shape::Unit => 1,
            Shape::Empty => 0,
            Shape::Fin(n) | Shape::Opaque(n) => *n as usize,
            Shape::Sum(a, b) => a.size() + b.size(),
            Shape::Prod(a, b) => a.size() * b.size(),
            Shape::Prop(s) => s.size(),
        }
    }

    fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Shape::Bool, Value::Bool(_)) | (Shape::Unit, Value::Unit) => true,
            (Shape::Fin(n) | Shape::Opaque(n), Value::Nat(i)) => i < n,
            (Shape::Sum(a, _), Value::Left(x)) => a.contains(x),
            (Shape::Sum(_, b), Value::Right(y)) => b.contains(y),
            (Shape::Prod(a, b), Value::Pair(x, y)) => a.contains(x) && b.contains(y),
            (Shape::Prop(s), v) => s.contains(v),
            _ => false,
        }
    }

    fn elements(&self) -> Vec<Value> {
        match self {
            Shape::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Shape::Unit => vec![Value::Unit],
            Shape::Empty => Vec::new(),
            Shape::Fin(n) | Shape::Opaque(n) => (0..*n).map(Value::Nat).collect(),
            Shape::Sum(a, b) => a
                .elements()
                .into_iter()
                .map(Value::left)
                .chain(b.elements().into_iter().map(Value::right))
                .collect(),
            Shape::Prod(a, b) => {
                let rhs = b.elements();
                a.elements()
                    .into_iter()
                    .flat_map(|x| rhs.iter().map(move |y| Value::pair(x.clone(), y.clone())))
                    .collect()
            }
            Shape::Prop(s) => s.elements(),
        }
    }

    // Caller guarantees both values are members.
    fn same(&self, a: &Value, b: &Value) -> bool {
        match (self, a, b) {
            (Shape::Prop(_), _, _) => true,
            (Shape::Sum(l, _), Value::Left(x), Value::Left(y)) => l.same(x, y),
            (Shape::Sum(_, r), Value::Right(x), Value::Right(y)) => r.same(x, y),
            (Shape::Prod(l, r), Value::Pair(x1, y1), Value::Pair(x2, y2)) => l.same(x1, x2) && r.same(y1, y2),
            _ => a == b,
        }
    }
}

/// An immutable element universe.
///
/// Clones share the equality-call counter; [`Carrier::detached`] gives a
/// copy with a fresh one so that concurrent games count independently.
#[derive(Clone, Debug)]
pub struct Carrier {
    spec: String,
    shape: Arc<Shape>,
    caps: Capabilities,
    exclusions: Vec<Value>,
    eq_calls: Arc<AtomicU64>,
}

impl Carrier {
    pub fn parse(spec: &str) -> Result<Carrier, CarrierError> {
        carrier_from_spec(spec)
    }

    fn from_shape(spec: String, shape: Shape) -> Carrier {
        let has_eq = shape.has_eq();
        let opaque = !has_eq;
        let size = shape.size();
        let is_prop = matches!(shape, Shape::Prop(_)) || size <= 1;
        Carrier {
            spec,
            caps: Capabilities {
                has_eq,
                has_enum: !opaque,
                size_bound: Some(size),
                is_prop,
            },
            shape: Arc::new(shape),
            exclusions: Vec::new(),
            eq_calls: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn caps(&self) -> Capabilities {
        self.caps
    }

    pub fn exclusions(&self) -> &[Value] {
        &self.exclusions
    }

    /// Number of `value_eq` calls made through this carrier (and its clones).
    pub fn eq_calls(&self) -> u64 {
        self.eq_calls.load(Ordering::Relaxed)
    }

    /// Same carrier, independent equality-call counter.
    pub fn detached(&self) -> Carrier {
        Carrier {
            eq_calls: Arc::new(AtomicU64::new(0)),
            ..self.clone()
        }
    }

    fn missing(&self, capability: Capability) -> CarrierError {
        CarrierError::CapabilityMissing {
            carrier: self.to_string(),
            capability,
        }
    }

    pub fn require(&self, capability: Capability) -> Result<(), CarrierError> {
        let ok = match capability {
            Capability::Equality => self.caps.has_eq,
            Capability::Enumeration => self.caps.has_enum,
            Capability::Propositional => self.caps.is_prop,
        };
        if ok {
            Ok(())
        } else {
            Err(self.missing(capability))
        }
    }

    fn is_excluded(&self, v: &Value) -> bool {
        self.exclusions.iter().any(|x| x == v)
    }

    /// Shape membership minus exclusions. Works on every carrier, opaque
    /// ones included, since it only inspects encodings.
    pub fn contains(&self, v: &Value) -> bool {
        self.shape.contains(v) && !self.is_excluded(v)
    }

    /// True when the carrier is known to have no elements left.
    pub fn is_exhausted(&self) -> bool {
        self.caps.size_bound == Some(0)
    }

    pub fn enumerate(&self) -> Result<Vec<Value>, CarrierError> {
        self.require(Capability::Enumeration)?;
        Ok(self.opponent_view())
    }

    /// The complete element listing as known to the opponent (and referee)
    /// of a game. Available on opaque carriers too; provers and deciders
    /// must go through [`Carrier::enumerate`] instead.
    pub fn opponent_view(&self) -> Vec<Value> {
        self.shape
            .elements()
            .into_iter()
            .filter(|v| !self.is_excluded(v))
            .collect()
    }

    pub fn value_eq(&self, a: &Value, b: &Value) -> Result<Equality, CarrierError> {
        self.eq_calls.fetch_add(1, Ordering::Relaxed);
        self.require(Capability::Equality)?;
        Ok(self.shape.same(a, b).into())
    }

    /// The carrier with `x` removed.
    pub fn without(&self, x: &Value) -> Carrier {
        let mut next = self.clone();
        if self.is_excluded(x) {
            return next;
        }
        if self.shape.contains(x) {
            next.caps.size_bound = next.caps.size_bound.map(|n| n.saturating_sub(1));
            if next.caps.size_bound.is_some_and(|n| n <= 1) {
                next.caps.is_prop = true;
            }
        }
        next.exclusions.push(x.clone());
        next
    }

    /// Whether an `is_prop` flag agrees with the enumerator: at most one
    /// canonically distinct element. Carriers without enumeration pass.
    pub fn prop_flag_consistent(&self) -> bool {
        !self.caps.is_prop || !self.caps.has_enum || self.opponent_view().len() <= 1
    }
}

pub fn carrier_from_spec(spec: &str) -> Result<Carrier, CarrierError> {
    let mut p = SpecParser {
        src: spec.as_bytes(),
        pos: 0,
    };
    let shape = p.shape()?;
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after carrier"));
    }
    Ok(Carrier::from_shape(spec.to_string(), shape))
}

pub fn enumerate(c: &Carrier) -> Result<Vec<Value>, CarrierError> {
    c.enumerate()
}

pub fn value_eq(c: &Carrier, a: &Value, b: &Value) -> Result<Equality, CarrierError> {
    c.value_eq(a, b)
}

pub fn carrier_without(c: &Carrier, x: &Value) -> Carrier {
    c.without(x)
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)?;
        for x in &self.exclusions {
            write!(f, "\\{x}")?;
        }
        Ok(())
    }
}

struct SpecParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn error(&self, message: &str) -> CarrierError {
        CarrierError::Parse {
            position: self.pos,
            message: message.to_string(),
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

    fn number(&mut self) -> Result<u32, CarrierError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| CarrierError::Parse {
                position: start,
                message: "number too large".into(),
            })
    }

    fn binary(&mut self) -> Result<(Box<Shape>, Box<Shape>), CarrierError> {
        let a = self.shape()?;
        if !self.eat(",") {
            return Err(self.error("expected ','"));
        }
        let b = self.shape()?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn shape(&mut self) -> Result<Shape, CarrierError> {
        if self.eat("bool") {
            Ok(Shape::Bool)
        } else if self.eat("unit") {
            Ok(Shape::Unit)
        } else if self.eat("empty") {
            Ok(Shape::Empty)
        } else if self.eat("fin:") {
            self.number().map(Shape::Fin)
        } else if self.eat("opaque:") {
            self.number().map(Shape::Opaque)
        } else if self.eat("sum:") {
            self.binary().map(|(a, b)| Shape::Sum(a, b))
        } else if self.eat("prod:") {
            self.binary().map(|(a, b)| Shape::Prod(a, b))
        } else if self.eat("prop:") {
            self.shape().map(|s| Shape::Prop(Box::new(s)))
        } else {
            Err(self.error("unknown carrier"))
        }
    }
}
