//! Fan text format: one ray per line as two space-separated decimal integers
//! in counterclockwise order; blank lines and `#` comments are ignored.

use thiserror::Error;

use super::{v2, Fan, FanError, Vec2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanParseError {
    #[error("line {line}: expected two integers, got {got} fields")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: cannot parse `{token}` as an integer")]
    BadInteger { line: usize, token: String },
    #[error("invalid fan: {0}")]
    Invalid(#[from] FanError),
}

pub fn parse_fan_text(text: &str) -> Result<Fan, FanParseError> {
    let mut rays: Vec<Vec2> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(FanParseError::FieldCount { line, got: fields.len() });
        }
        let parse = |token: &str| {
            token.parse::<i64>().map_err(|_| FanParseError::BadInteger { line, token: token.to_string() })
        };
        rays.push(v2(parse(fields[0])?, parse(fields[1])?));
    }
    Ok(Fan::validate(rays)?)
}

pub fn render_fan_text(fan: &Fan) -> String {
    let mut out = String::new();
    for r in fan.rays() {
        out.push_str(&format!("{} {}\n", r.x, r.y));
    }
    out
}
