//! Strict JSON-shaped input documents: objects, arrays, strings and
//! integers only. Unknown fields and duplicate keys are rejected; every
//! error carries a line and column. Rationals are integers or "p/q"
//! strings; floats are rejected everywhere.

use std::fmt;

use num_bigint::BigInt;
use toric::exactlin::{parse_rat, render_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone)]
enum Value {
    Int(BigInt, Pos),
    Str(String, Pos),
    Array(Vec<Value>, Pos),
    Object(Vec<(String, Pos, Value)>, Pos),
}

impl Value {
    fn pos(&self) -> Pos {
        match self {
            Value::Int(_, p) | Value::Str(_, p) | Value::Array(_, p) | Value::Object(_, p) => *p,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Int(..) => "integer",
            Value::Str(..) => "string",
            Value::Array(..) => "array",
            Value::Object(..) => "object",
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    idx: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            idx: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.idx).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.idx += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }
}

fn parse_value(lx: &mut Lexer) -> Result<Value, ParseError> {
    lx.skip_ws();
    let pos = lx.pos();
    match lx.peek() {
        None => err(pos, "unexpected end of input"),
        Some(b'{') => {
            lx.bump();
            let mut fields: Vec<(String, Pos, Value)> = Vec::new();
            lx.skip_ws();
            if lx.peek() == Some(b'}') {
                lx.bump();
                return Ok(Value::Object(fields, pos));
            }
            loop {
                lx.skip_ws();
                let key_pos = lx.pos();
                let key = match parse_value(lx)? {
                    Value::Str(s, _) => s,
                    other => return err(other.pos(), "object key must be a string"),
                };
                if fields.iter().any(|(k, _, _)| k == &key) {
                    return err(key_pos, format!("duplicate key \"{key}\""));
                }
                lx.skip_ws();
                let colon_pos = lx.pos();
                if lx.bump() != Some(b':') {
                    return err(colon_pos, "expected ':'");
                }
                let val = parse_value(lx)?;
                fields.push((key, key_pos, val));
                lx.skip_ws();
                let sep_pos = lx.pos();
                match lx.bump() {
                    Some(b',') => continue,
                    Some(b'}') => break,
                    _ => return err(sep_pos, "expected ',' or '}'"),
                }
            }
            Ok(Value::Object(fields, pos))
        }
        Some(b'[') => {
            lx.bump();
            let mut items = Vec::new();
            lx.skip_ws();
            if lx.peek() == Some(b']') {
                lx.bump();
                return Ok(Value::Array(items, pos));
            }
            loop {
                items.push(parse_value(lx)?);
                lx.skip_ws();
                let sep_pos = lx.pos();
                match lx.bump() {
                    Some(b',') => continue,
                    Some(b']') => break,
                    _ => return err(sep_pos, "expected ',' or ']'"),
                }
            }
            Ok(Value::Array(items, pos))
        }
        Some(b'"') => {
            lx.bump();
            let mut s = String::new();
            loop {
                match lx.bump() {
                    None => return err(pos, "unterminated string"),
                    Some(b'"') => break,
                    Some(b'\\') => return err(lx.pos(), "escape sequences are not supported"),
                    Some(c) => s.push(c as char),
                }
            }
            Ok(Value::Str(s, pos))
        }
        Some(c) if c == b'-' || c.is_ascii_digit() => {
            let mut digits = String::new();
            if c == b'-' {
                digits.push('-');
                lx.bump();
            }
            let mut any = false;
            while let Some(d) = lx.peek() {
                if d.is_ascii_digit() {
                    digits.push(d as char);
                    lx.bump();
                    any = true;
                } else {
                    break;
                }
            }
            if !any {
                return err(pos, "expected digits after '-'");
            }
            if matches!(lx.peek(), Some(b'.' | b'e' | b'E')) {
                return err(pos, "floats are not accepted; use integers or \"p/q\" strings");
            }
            let n: BigInt = digits.parse().expect("digits");
            Ok(Value::Int(n, pos))
        }
        Some(c) => err(pos, format!("unexpected character '{}'", c as char)),
    }
}

/// A validated input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDoc {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
    pub extension: Vec<Vec<BigInt>>,
    pub kahler: Vec<Rat>,
    pub cutoff: Rat,
}

const KNOWN_FIELDS: &[&str] = &[
    "rank",
    "torsion",
    "rays",
    "max_cones",
    "extension",
    "kahler",
    "cutoff",
];

fn expect_int(v: &Value, what: &str) -> Result<BigInt, ParseError> {
    match v {
        Value::Int(n, _) => Ok(n.clone()),
        other => err(other.pos(), format!("{what} must be an integer, found {}", other.kind())),
    }
}

fn expect_usize(v: &Value, what: &str) -> Result<usize, ParseError> {
    let n = expect_int(v, what)?;
    usize::try_from(&n).map_err(|_| ParseError {
        pos: v.pos(),
        msg: format!("{what} must be nonnegative"),
    })
}

fn expect_rat(v: &Value, what: &str) -> Result<Rat, ParseError> {
    match v {
        Value::Int(n, _) => Ok(Rat::from_integer(n.clone())),
        Value::Str(s, pos) => parse_rat(s).ok_or(ParseError {
            pos: *pos,
            msg: format!("invalid rational \"{s}\" for {what}"),
        }),
        other => err(
            other.pos(),
            format!("{what} must be an integer or \"p/q\" string"),
        ),
    }
}

fn expect_array<'v>(v: &'v Value, what: &str) -> Result<&'v [Value], ParseError> {
    match v {
        Value::Array(items, _) => Ok(items),
        other => err(other.pos(), format!("{what} must be an array, found {}", other.kind())),
    }
}

/// Parses and structurally validates a document.
pub fn parse(text: &str) -> Result<InputDoc, ParseError> {
    let mut lx = Lexer::new(text);
    let root = parse_value(&mut lx)?;
    lx.skip_ws();
    if lx.peek().is_some() {
        return err(lx.pos(), "trailing content after document");
    }
    let Value::Object(fields, _) = &root else {
        return err(root.pos(), "document must be an object");
    };
    for (key, pos, _) in fields {
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            return err(*pos, format!("unknown field \"{key}\""));
        }
    }
    let get = |name: &str| fields.iter().find(|(k, _, _)| k == name).map(|(_, _, v)| v);
    let require = |name: &str| {
        get(name).ok_or(ParseError {
            pos: root.pos(),
            msg: format!("missing required field \"{name}\""),
        })
    };

    let rank = expect_usize(require("rank")?, "rank")?;
    let torsion: Vec<BigInt> = match get("torsion") {
        Some(v) => expect_array(v, "torsion")?
            .iter()
            .map(|x| expect_int(x, "torsion entry"))
            .collect::<Result<_, _>>()?,
        None => vec![],
    };
    let dim = rank + torsion.len();

    let rays_v = expect_array(require("rays")?, "rays")?;
    let mut rays = Vec::with_capacity(rays_v.len());
    for (i, rv) in rays_v.iter().enumerate() {
        let entries = expect_array(rv, "ray")?;
        if entries.len() != dim {
            return err(
                rv.pos(),
                format!(
                    "ray {i} has length {} but rank + |torsion| = {dim}",
                    entries.len()
                ),
            );
        }
        rays.push(
            entries
                .iter()
                .map(|x| expect_int(x, "ray entry"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    let cones_v = expect_array(require("max_cones")?, "max_cones")?;
    let mut max_cones = Vec::with_capacity(cones_v.len());
    for cv in cones_v {
        let entries = expect_array(cv, "cone")?;
        let mut cone = Vec::with_capacity(entries.len());
        for e in entries {
            let idx = expect_usize(e, "cone index")?;
            if idx >= rays.len() {
                return err(e.pos(), format!("cone index {idx} out of range"));
            }
            cone.push(idx);
        }
        max_cones.push(cone);
    }

    let extension: Vec<Vec<BigInt>> = match get("extension") {
        Some(v) => {
            let items = expect_array(v, "extension")?;
            let mut out = Vec::with_capacity(items.len());
            for (j, sv) in items.iter().enumerate() {
                let entries = expect_array(sv, "extension element")?;
                if entries.len() != dim {
                    return err(
                        sv.pos(),
                        format!("extension element {j} has length {}", entries.len()),
                    );
                }
                out.push(
                    entries
                        .iter()
                        .map(|x| expect_int(x, "extension entry"))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            out
        }
        None => vec![],
    };

    let kahler_v = require("kahler")?;
    let kahler: Vec<Rat> = expect_array(kahler_v, "kahler")?
        .iter()
        .map(|x| expect_rat(x, "kahler entry"))
        .collect::<Result<_, _>>()?;
    if kahler.len() != rays.len() {
        return err(
            kahler_v.pos(),
            format!("kahler has length {} but there are {} rays", kahler.len(), rays.len()),
        );
    }

    let cutoff = match get("cutoff") {
        Some(v) => expect_rat(v, "cutoff")?,
        None => Rat::from_integer(2.into()),
    };

    Ok(InputDoc {
        rank,
        torsion,
        rays,
        max_cones,
        extension,
        kahler,
        cutoff,
    })
}

fn render_rat_value(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("\"{}\"", render_rat(x))
    }
}

fn render_int_list(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text rendering; `parse(render(doc)) == doc`.
pub fn render(doc: &InputDoc) -> String {
    let rays: Vec<String> = doc.rays.iter().map(|r| render_int_list(r)).collect();
    let cones: Vec<String> = doc
        .max_cones
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            format!("[{}]", parts.join(", "))
        })
        .collect();
    let ext: Vec<String> = doc.extension.iter().map(|r| render_int_list(r)).collect();
    let kahler: Vec<String> = doc.kahler.iter().map(render_rat_value).collect();
    let torsion: Vec<String> = doc.torsion.iter().map(|x| x.to_string()).collect();
    format!(
        "{{\n  \"rank\": {},\n  \"torsion\": [{}],\n  \"rays\": [{}],\n  \"max_cones\": [{}],\n  \"extension\": [{}],\n  \"kahler\": [{}],\n  \"cutoff\": {}\n}}\n",
        doc.rank,
        torsion.join(", "),
        rays.join(", "),
        cones.join(", "),
        ext.join(", "),
        kahler.join(", "),
        render_rat_value(&doc.cutoff),
    )
}
