//! Text grammars for bases, digit strings and small lists.

use std::fmt;

use negacantor::{Basis, DigitSpec, Kind, Rational, Rule, Tail};

/// Syntax error with the byte offset where parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

/// Either a syntax problem or a well-formed input the library rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    Parse(ParseError),
    /// Option combinations the argument parser cannot express.
    Usage(String),
    Library(negacantor::Error),
}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Parse(e)
    }
}

impl From<negacantor::Error> for InputError {
    fn from(e: negacantor::Error) -> Self {
        InputError::Library(e)
    }
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        position,
        message: message.into(),
    }
}

/// Comma-separated unsigned integers starting at byte `offset` of the input.
pub fn parse_list(text: &str, offset: usize) -> Result<Vec<u64>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut at = offset;
    for token in text.split(',') {
        let trimmed = token.trim();
        let value = trimmed
            .parse::<u64>()
            .map_err(|_| err(at, format!("expected an unsigned integer, found {trimmed:?}")))?;
        out.push(value);
        at += token.len() + 1;
    }
    Ok(out)
}

fn nonempty_list(text: &str, offset: usize, what: &str) -> Result<Vec<u64>, ParseError> {
    let list = parse_list(text, offset)?;
    if list.is_empty() {
        return Err(err(offset, format!("{what} must not be empty")));
    }
    Ok(list)
}

/// `const:<d>` | `periodic:<d1,..>` | `prefix:<a,..>;periodic:<..>` |
/// `factorial` | `primes` | `even`.
pub fn parse_basis(text: &str) -> Result<Basis, InputError> {
    let t = text.trim();
    match t {
        "factorial" => return Ok(Basis::rule(Rule::Factorial)),
        "primes" => return Ok(Basis::rule(Rule::Primes)),
        "even" => return Ok(Basis::rule(Rule::Even)),
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("const:") {
        let d = rest
            .trim()
            .parse::<u64>()
            .map_err(|_| err(6, format!("expected an unsigned integer, found {rest:?}")))?;
        return Ok(Basis::constant(d)?);
    }
    if let Some(rest) = t.strip_prefix("periodic:") {
        return Ok(Basis::periodic(nonempty_list(rest, 9, "period")?)?);
    }
    if let Some(rest) = t.strip_prefix("prefix:") {
        let (head, tail) = rest
            .split_once(';')
            .ok_or_else(|| err(t.len(), "expected ';periodic:' after the prefix"))?;
        let prefix = parse_list(head, 7)?;
        let start = 7 + head.len() + 1;
        let period = tail
            .strip_prefix("periodic:")
            .ok_or_else(|| err(start, "expected 'periodic:'"))?;
        let period = nonempty_list(period, start + 9, "period")?;
        return Ok(Basis::eventually_periodic(prefix, period)?);
    }
    Err(err(0, format!("unknown basis {t:?}")).into())
}

/// `<c1,c2,..>[;tail=zeros|periodic:<..>|trunc][;kind=negad|negadn|posd]`.
pub fn parse_digits(text: &str) -> Result<DigitSpec, ParseError> {
    let mut parts = text.split(';');
    let head = parts.next().unwrap_or("");
    let prefix = parse_list(head, 0)?;
    let mut tail = None;
    let mut kind = None;
    let mut at = head.len() + 1;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| err(at, format!("expected key=value, found {part:?}")))?;
        let value_at = at + key.len() + 1;
        match key.trim() {
            "tail" if tail.is_none() => {
                tail = Some(match value.trim() {
                    "zeros" => Tail::Zeros,
                    "trunc" => Tail::Truncated,
                    v => match v.strip_prefix("periodic:") {
                        Some(p) => Tail::Periodic(nonempty_list(p, value_at + 9, "period")?),
                        None => return Err(err(value_at, format!("unknown tail {v:?}"))),
                    },
                })
            }
            "kind" if kind.is_none() => {
                kind = Some(
                    Kind::from_name(value.trim())
                        .ok_or_else(|| err(value_at, format!("unknown kind {value:?}")))?,
                )
            }
            "tail" | "kind" => return Err(err(at, format!("duplicate key {key:?}"))),
            other => return Err(err(at, format!("unknown key {other:?}"))),
        }
        at += part.len() + 1;
    }
    Ok(DigitSpec {
        kind: kind.unwrap_or(Kind::NegaD),
        prefix,
        tail: tail.unwrap_or(Tail::Zeros),
    })
}

/// `p/q` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    negacantor::rational::parse(text).ok_or_else(|| err(0, format!("expected p/q, found {text:?}")))
}

/// `k:c,k:c,..` pairs of position and digit.
pub fn parse_positions(text: &str) -> Result<Vec<(usize, u64)>, ParseError> {
    let mut out = Vec::new();
    let mut at = 0;
    for token in text.split(',') {
        let (k, c) = token
            .split_once(':')
            .ok_or_else(|| err(at, format!("expected position:digit, found {token:?}")))?;
        let k = k
            .trim()
            .parse::<usize>()
            .map_err(|_| err(at, format!("bad position {k:?}")))?;
        let c = c
            .trim()
            .parse::<u64>()
            .map_err(|_| err(at, format!("bad digit {c:?}")))?;
        out.push((k, c));
        at += token.len() + 1;
    }
    Ok(out)
}

/// Comma-separated decimals.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ParseError> {
    let mut out = Vec::new();
    let mut at = 0;
    for token in text.split(',') {
        let v = token
            .trim()
            .parse::<f64>()
            .map_err(|_| err(at, format!("expected a number, found {token:?}")))?;
        out.push(v);
        at += token.len() + 1;
    }
    Ok(out)
}
