//! Parsers for complex numbers, group specs and element specs.
//!
//! Group specs have the form `KIND:BODY`:
//!
//! | kind            | body                         | group                                  |
//! |-----------------|------------------------------|----------------------------------------|
//! | `integer`       | `N`                          | diagonal, `λ_k = k` for `k < N`, `c₀`  |
//! | `integer-linf`  | `N`                          | as above, `ℓ∞` model                   |
//! | `diagonal`      | `λ₀,λ₁,…`                    | diagonal multipliers, `c₀`             |
//! | `diagonal-linf` | `λ₀,λ₁,…`                    | diagonal multipliers, `ℓ∞`             |
//! | `generator`     | rows `a,b;c,d` (Hermitian)   | `x ↦ e^{itH} x e^{-itH}` on `M_d`      |
//! | `modular`       | `p₀,p₁,…`                    | modular group of `diag(p)/Σp`          |
//! | `corner`        | `λ₀,λ₁,…`                    | 2x2 corner of a diagonal group         |
//!
//! Element specs: `delta:k`, `seq:c₀,c₁,…`, `unit:j,k`, `matrix:a,b;c,d`,
//! `block:A|B|C|D` with each block a comma list.

use anagen_core::group::{
    BlockElement, DiagonalGroup, EmbeddedCornerGroup, ImplementedGroup, Sequence, SequenceModel,
};
use anagen_core::{CMatrix, C64};

use crate::error::ParseError;

/// A parsed group spec.
#[derive(Debug, Clone)]
pub enum GroupSpec {
    Diagonal(DiagonalGroup),
    Implemented(ImplementedGroup),
    Corner(EmbeddedCornerGroup),
}

/// A parsed element spec, before it is matched against a group.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementSpec {
    Delta(usize),
    Sequence(Vec<C64>),
    Unit(usize, usize),
    Matrix(CMatrix),
    Block(BlockElement),
}

fn skip_ws(b: &[u8], mut pos: usize) -> usize {
    while pos < b.len() && b[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

fn scan_digits(b: &[u8], mut pos: usize) -> usize {
    while pos < b.len() && b[pos].is_ascii_digit() {
        pos += 1;
    }
    pos
}

/// End of the unsigned decimal literal starting at `start` (`start` if none).
fn scan_number(b: &[u8], start: usize) -> Result<usize, ParseError> {
    let int_end = scan_digits(b, start);
    let mut pos = int_end;
    let mut frac_end = pos;
    if pos < b.len() && b[pos] == b'.' {
        frac_end = scan_digits(b, pos + 1);
        pos = frac_end;
    }
    let mantissa_digits = (int_end - start) + frac_end.saturating_sub(int_end + 1);
    if mantissa_digits == 0 {
        if pos > start {
            return Err(ParseError::at(start, "expected digits"));
        }
        return Ok(start);
    }
    if pos < b.len() && (b[pos] == b'e' || b[pos] == b'E') {
        let mut exp = pos + 1;
        if exp < b.len() && (b[exp] == b'+' || b[exp] == b'-') {
            exp += 1;
        }
        let exp_end = scan_digits(b, exp);
        if exp_end == exp {
            return Err(ParseError::at(exp, "expected exponent digits"));
        }
        pos = exp_end;
    }
    Ok(pos)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (also `j` for `i`) with
/// optional whitespace between terms.
pub fn parse_complex(s: &str) -> Result<C64, ParseError> {
    let b = s.as_bytes();
    let mut pos = skip_ws(b, 0);
    if pos == b.len() {
        return Err(ParseError::at(pos, "expected a complex number"));
    }
    let mut value = C64::new(0.0, 0.0);
    let mut first = true;
    while pos < b.len() {
        let mut sign = 1.0;
        if b[pos] == b'+' || b[pos] == b'-' {
            if b[pos] == b'-' {
                sign = -1.0;
            }
            pos = skip_ws(b, pos + 1);
        } else if !first {
            return Err(ParseError::at(pos, "expected '+' or '-' between terms"));
        }
        let num_start = pos;
        let num_end = scan_number(b, pos)?;
        let magnitude = if num_end > num_start {
            let v: f64 = s[num_start..num_end].parse().map_err(|_| ParseError::at(num_start, "malformed number"))?;
            if !v.is_finite() {
                return Err(ParseError::at(num_start, "number out of range"));
            }
            v
        } else {
            1.0
        };
        pos = num_end;
        if pos < b.len() && (b[pos] == b'i' || b[pos] == b'j') {
            value.im += sign * magnitude;
            pos += 1;
        } else if num_end == num_start {
            return Err(ParseError::at(pos, "expected a number or 'i'"));
        } else {
            value.re += sign * magnitude;
        }
        pos = skip_ws(b, pos);
        first = false;
    }
    Ok(value)
}

/// Parses a finite real number.
pub fn parse_real(s: &str) -> Result<f64, ParseError> {
    let start = s.len() - s.trim_start().len();
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::at(start, "expected a number"));
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(ParseError::at(start, "number out of range")),
        Err(_) => Err(ParseError::at(start, "malformed number")),
    }
}

/// Parses a non-negative integer.
pub fn parse_index(s: &str) -> Result<usize, ParseError> {
    let start = s.len() - s.trim_start().len();
    let t = s.trim();
    t.parse().map_err(|_| ParseError::at(start, "expected a non-negative integer"))
}

/// Splits on `sep`, returning each piece with its byte offset in `s`.
pub fn split_items(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == sep {
            out.push((start, &s[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Parses a `sep`-separated list with `item`, relocating item errors.
pub fn parse_list<T>(
    s: &str,
    sep: char,
    item: impl Fn(&str) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    if s.trim().is_empty() {
        return Err(ParseError::at(s.len(), "expected a non-empty list"));
    }
    split_items(s, sep).into_iter().map(|(off, piece)| item(piece).map_err(|e| e.shift(off))).collect()
}

fn parse_matrix(s: &str) -> Result<CMatrix, ParseError> {
    let rows = split_items(s, ';')
        .into_iter()
        .map(|(off, row)| parse_list(row, ',', parse_complex).map_err(|e| e.shift(off)).map(|r| (off, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let d = rows.len();
    for (off, row) in &rows {
        if row.len() != d {
            return Err(ParseError::at(*off, format!("matrix must be square: row has {} entries, expected {d}", row.len())));
        }
    }
    let data = rows.into_iter().flat_map(|(_, r)| r).collect();
    CMatrix::new(d, d, data).map_err(|e| ParseError::at(0, e.to_string()))
}

/// Splits `KIND:BODY`; the body offset is returned with the body.
fn split_kind(s: &str) -> Result<(&str, usize, &str), ParseError> {
    let lead = s.len() - s.trim_start().len();
    match s.find(':') {
        Some(i) => Ok((s[..i].trim(), i + 1, &s[i + 1..])),
        None => Err(ParseError::at(s.trim_end().len().max(lead), "expected KIND:BODY")),
    }
}

fn model_for(kind: &str) -> SequenceModel {
    if kind.ends_with("-linf") {
        SequenceModel::Linf
    } else {
        SequenceModel::C0
    }
}

pub fn parse_group(s: &str) -> Result<GroupSpec, ParseError> {
    let (kind, off, body) = split_kind(s)?;
    let semantic = |e: anagen_core::Error| ParseError::at(off, e.to_string());
    let reals = || parse_list(body, ',', parse_real).map_err(|e| e.shift(off));
    match kind {
        "integer" | "integer-linf" => {
            let n = parse_index(body).map_err(|e| e.shift(off))?;
            if n == 0 {
                return Err(ParseError::at(off, "carrier size must be positive"));
            }
            Ok(GroupSpec::Diagonal(DiagonalGroup::integer(n, model_for(kind)).map_err(semantic)?))
        }
        "diagonal" | "diagonal-linf" => {
            Ok(GroupSpec::Diagonal(DiagonalGroup::new(reals()?, model_for(kind)).map_err(semantic)?))
        }
        "corner" => Ok(GroupSpec::Corner(EmbeddedCornerGroup::new(
            DiagonalGroup::new(reals()?, SequenceModel::C0).map_err(semantic)?,
        ))),
        "generator" => {
            let h = parse_matrix(body).map_err(|e| e.shift(off))?;
            Ok(GroupSpec::Implemented(ImplementedGroup::new(h).map_err(semantic)?))
        }
        "modular" => {
            let p = reals()?;
            let total: f64 = p.iter().sum();
            if p.iter().any(|&v| v <= 0.0) {
                return Err(ParseError::at(off, "modular weights must be positive"));
            }
            let rho = CMatrix::from_real_diag(&p.iter().map(|v| v / total).collect::<Vec<_>>());
            Ok(GroupSpec::Implemented(ImplementedGroup::modular(&rho).map_err(semantic)?))
        }
        _ => Err(ParseError::at(s.len() - s.trim_start().len(), format!("unknown group kind '{kind}'"))),
    }
}

pub fn parse_element(s: &str) -> Result<ElementSpec, ParseError> {
    let (kind, off, body) = split_kind(s)?;
    match kind {
        "delta" => Ok(ElementSpec::Delta(parse_index(body).map_err(|e| e.shift(off))?)),
        "seq" => Ok(ElementSpec::Sequence(parse_list(body, ',', parse_complex).map_err(|e| e.shift(off))?)),
        "unit" => {
            let ix = parse_list(body, ',', parse_index).map_err(|e| e.shift(off))?;
            match ix.as_slice() {
                [j, k] => Ok(ElementSpec::Unit(*j, *k)),
                _ => Err(ParseError::at(off, "unit needs two indices j,k")),
            }
        }
        "matrix" => Ok(ElementSpec::Matrix(parse_matrix(body).map_err(|e| e.shift(off))?)),
        "block" => {
            let parts = split_items(body, '|');
            if parts.len() != 4 {
                return Err(ParseError::at(off, "block needs four lists A|B|C|D"));
            }
            let lists = parts
                .into_iter()
                .map(|(o, p)| parse_list(p, ',', parse_complex).map_err(|e| e.shift(off + o)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut it = lists.into_iter();
            let (a, b, c, d) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            BlockElement::new(a, b, c, d).map(ElementSpec::Block).map_err(|e| ParseError::at(off, e.to_string()))
        }
        _ => Err(ParseError::at(s.len() - s.trim_start().len(), format!("unknown element kind '{kind}'"))),
    }
}

fn mismatch(element: &ElementSpec, group: &str) -> ParseError {
    ParseError::at(0, format!("element {element:?} does not fit a {group} group"))
}

impl ElementSpec {
    pub fn sequence(&self, len: usize) -> Result<Sequence, ParseError> {
        match self {
            Self::Delta(k) if *k < len => Ok(Sequence::delta(len, *k)),
            Self::Delta(k) => Err(ParseError::at(0, format!("delta index {k} out of range for length {len}"))),
            Self::Sequence(v) if v.len() == len => Ok(Sequence(v.clone())),
            Self::Sequence(v) => Err(ParseError::at(0, format!("sequence has {} entries, carrier has {len}", v.len()))),
            _ => Err(mismatch(self, "diagonal")),
        }
    }

    pub fn matrix(&self, d: usize) -> Result<CMatrix, ParseError> {
        match self {
            Self::Unit(j, k) if *j < d && *k < d => Ok(CMatrix::unit(d, *j, *k)),
            Self::Unit(j, k) => Err(ParseError::at(0, format!("unit ({j},{k}) out of range for dimension {d}"))),
            Self::Matrix(m) if m.rows() == d => Ok(m.clone()),
            Self::Matrix(m) => Err(ParseError::at(0, format!("matrix is {0}x{0}, group acts on {d}x{d}", m.rows()))),
            _ => Err(mismatch(self, "matrix")),
        }
    }

    pub fn block(&self, len: usize) -> Result<BlockElement, ParseError> {
        match self {
            Self::Block(b) if b.len() == len => Ok(b.clone()),
            Self::Block(b) => Err(ParseError::at(0, format!("blocks have length {}, carrier has {len}", b.len()))),
            _ => Err(mismatch(self, "corner")),
        }
    }
}
