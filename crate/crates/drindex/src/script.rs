//! Edit scripts.
//!
//! One edit per line, positions 1-based against the text as it stands when
//! the line is applied:
//!
//! ```text
//! # comment
//! I 6 "b"          insert a quoted string (escapes: \" \\ \n \t \r \xHH)
//! I 1 0x616263     insert hex bytes (the 0x prefix is optional)
//! D 6 1            delete 1 byte starting at position 6
//! ```
//!
//! A one-byte insertion becomes `InsertChar`, longer ones `InsertString`.

use std::fmt::Write as _;

use drindex_core::EditOp;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ScriptError {
    pub line: usize,
    pub msg: String,
}

/// A parsed edit and the script line it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub op: EditOp,
}

pub fn parse_script(src: &str) -> Result<Vec<ScriptLine>, ScriptError> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let op = parse_line(text).map_err(|msg| ScriptError { line, msg })?;
        out.push(ScriptLine { line, op });
    }
    Ok(out)
}

fn parse_line(text: &str) -> Result<EditOp, String> {
    let (cmd, rest) = split_word(text);
    let (pos, rest) = split_word(rest);
    let i: usize = pos.parse().map_err(|_| format!("bad position {pos:?}"))?;
    if i == 0 {
        return Err("positions are 1-based".into());
    }
    match cmd {
        "I" => {
            let p = if rest.starts_with('"') { unquote(rest)? } else { unhex(rest)? };
            match p.len() {
                0 => Err("empty insertion".into()),
                1 => Ok(EditOp::InsertChar { i, ch: p[0] }),
                _ => Ok(EditOp::InsertString { i, p }),
            }
        }
        "D" => {
            let (len, extra) = split_word(rest);
            if !extra.is_empty() {
                return Err(format!("unexpected trailing text {extra:?}"));
            }
            let m: usize = len.parse().map_err(|_| format!("bad length {len:?}"))?;
            if m == 0 {
                return Err("empty deletion".into());
            }
            Ok(EditOp::DeleteSubstring { i, m })
        }
        _ => Err(format!("unknown command {cmd:?}, expected I or D")),
    }
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(k) => (&s[..k], s[k..].trim_start()),
        None => (s, ""),
    }
}

fn unhex(s: &str) -> Result<Vec<u8>, String> {
    let digits = s.trim_end();
    let digits = digits.strip_prefix("0x").unwrap_or(digits);
    if digits.is_empty() || digits.len() % 2 != 0 || digits.contains(char::is_whitespace) {
        return Err(format!("bad hex payload {s:?}"));
    }
    (0..digits.len())
        .step_by(2)
        .map(|k| u8::from_str_radix(&digits[k..k + 2], 16).map_err(|_| format!("bad hex payload {s:?}")))
        .collect()
}

fn unquote(s: &str) -> Result<Vec<u8>, String> {
    let s = s.trim_end();
    if s.len() < 2 || !s.ends_with('"') {
        return Err("unterminated string".into());
    }
    let inner = &s.as_bytes()[1..s.len() - 1];
    let mut out = Vec::with_capacity(inner.len());
    let mut k = 0;
    while k < inner.len() {
        let b = inner[k];
        k += 1;
        match b {
            b'"' => return Err("unescaped quote inside string".into()),
            b'\\' => {
                let e = *inner.get(k).ok_or("dangling backslash")?;
                k += 1;
                out.push(match e {
                    b'"' => b'"',
                    b'\\' => b'\\',
                    b'n' => b'\n',
                    b't' => b'\t',
                    b'r' => b'\r',
                    b'x' => {
                        let hex = inner.get(k..k + 2).ok_or("short \\x escape")?;
                        k += 2;
                        let hex = std::str::from_utf8(hex).map_err(|_| "bad \\x escape")?;
                        u8::from_str_radix(hex, 16).map_err(|_| "bad \\x escape")?
                    }
                    _ => return Err(format!("unknown escape \\{}", e as char)),
                });
            }
            _ => out.push(b),
        }
    }
    Ok(out)
}

/// Renders an edit in script syntax; `parse_script` reads it back unchanged.
pub fn render(op: &EditOp) -> String {
    let quote = |p: &[u8]| {
        let mut s = String::from("\"");
        for &b in p {
            match b {
                b'"' => s.push_str("\\\""),
                b'\\' => s.push_str("\\\\"),
                0x20..=0x7e => s.push(b as char),
                _ => write!(s, "\\x{b:02x}").unwrap(),
            }
        }
        s.push('"');
        s
    };
    match op {
        EditOp::InsertChar { i, ch } => format!("I {i} {}", quote(&[*ch])),
        EditOp::InsertString { i, p } => format!("I {i} {}", quote(p)),
        EditOp::DeleteSubstring { i, m } => format!("D {i} {m}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(src: &str) -> Vec<EditOp> {
        parse_script(src).unwrap().into_iter().map(|l| l.op).collect()
    }

    #[test]
    fn parses_each_form() {
        let got = ops("# header\n\nI 6 \"b\"\nD 6 1\nI 1 0x6162\nI 2 6364\n  I 3 \"a\\\"\\x00\\n\"  \n");
        assert_eq!(
            got,
            vec![
                EditOp::InsertChar { i: 6, ch: b'b' },
                EditOp::DeleteSubstring { i: 6, m: 1 },
                EditOp::InsertString { i: 1, p: b"ab".to_vec() },
                EditOp::InsertString { i: 2, p: b"cd".to_vec() },
                EditOp::InsertString { i: 3, p: b"a\"\0\n".to_vec() },
            ]
        );
        assert_eq!(ops("I 1 \"a b\""), vec![EditOp::InsertString { i: 1, p: b"a b".to_vec() }]);
    }

    #[test]
    fn errors_name_the_line() {
        for (src, line) in [
            ("I 1 \"a\"\nX 1 2", 2),
            ("D 1", 1),
            ("# c\nD 0 1", 2),
            ("I 1 \"abc", 1),
            ("I 1 abc", 1),
            ("I 1 \"\"", 1),
            ("D 1 0", 1),
            ("D 1 2 3", 1),
            ("I x \"a\"", 1),
        ] {
            let err = parse_script(src).unwrap_err();
            assert_eq!(err.line, line, "{src:?}: {err}");
        }
    }

    #[test]
    fn render_round_trips() {
        for op in [
            EditOp::InsertChar { i: 6, ch: b'b' },
            EditOp::InsertChar { i: 2, ch: 0xff },
            EditOp::InsertString { i: 1, p: b"q\"\\\n z".to_vec() },
            EditOp::DeleteSubstring { i: 3, m: 7 },
        ] {
            assert_eq!(ops(&render(&op)), vec![op]);
        }
        assert_eq!(render(&EditOp::InsertChar { i: 6, ch: b'b' }), "I 6 \"b\"");
    }
}
