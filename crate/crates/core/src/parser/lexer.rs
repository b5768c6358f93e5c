use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(Error::Syntax {
                        offset: i,
                        message: "decimal literals are not supported; write a fraction".into(),
                    });
                }
                Tok::Int(text[start..i].parse().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                i += 1;
                match c {
                    b'\'' => Tok::Prime,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'=' => Tok::Eq,
                    _ => {
                        let ch = text[start..].chars().next().unwrap();
                        return Err(Error::Syntax { offset: start, message: format!("unexpected character `{ch}`") });
                    }
                }
            }
        };
        out.push(Token { tok, offset: start });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_offsets() {
        let toks = tokenize("y'' = 6*y^2").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::Ident("y".into()));
        assert_eq!(kinds[1], &Tok::Prime);
        assert_eq!(toks[3].tok, Tok::Eq);
        assert_eq!(toks[3].offset, 4);
        assert!(matches!(tokenize("1.5"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(tokenize("y $"), Err(Error::Syntax { offset: 2, .. })));
    }
}
