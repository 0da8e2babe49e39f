use super::{Diagnostic, Pos, SourceUnit};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// Real literal.
    Number(f64),
    /// Imaginary literal such as `0.8i`.
    Imag(f64),
    /// Ket label between `|` and `>`, e.g. `0+`.
    Ket(String),
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Eq,
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

/// Tokens plus any lexical diagnostics; lexing always runs to the end of input.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub diagnostics: Vec<Diagnostic>,
}

fn valid_ket_label(label: &str) -> bool {
    !label.is_empty() && label.len() <= 4 && label.chars().all(|c| matches!(c, '0' | '1' | '+' | '-'))
}

pub fn tokenize(src: &SourceUnit) -> Lexed {
    let chars: Vec<char> = src.text.chars().collect();
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let ch = chars[i];
        let pos = Pos { line, col };
        if ch.is_whitespace() {
            advance!();
            continue;
        }
        if ch == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let single = match ch {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ';' => Some(TokenKind::Semi),
            ',' => Some(TokenKind::Comma),
            '=' => Some(TokenKind::Eq),
            '+' => Some(TokenKind::Plus),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, pos });
            advance!();
            continue;
        }
        if ch == '-' {
            advance!();
            if i < chars.len() && chars[i] == '>' {
                advance!();
                tokens.push(Token { kind: TokenKind::Arrow, pos });
            } else {
                tokens.push(Token { kind: TokenKind::Minus, pos });
            }
            continue;
        }
        if ch == '|' {
            advance!();
            let mut label = String::new();
            while i < chars.len() && chars[i] != '>' && chars[i] != '\n' && chars[i] != ';' {
                label.push(chars[i]);
                advance!();
            }
            if i < chars.len() && chars[i] == '>' {
                advance!();
                if !valid_ket_label(&label) {
                    diagnostics.push(Diagnostic::error(pos, format!("unknown ket label '|{label}>'")));
                }
                tokens.push(Token {
                    kind: TokenKind::Ket(label),
                    pos,
                });
            } else {
                diagnostics.push(Diagnostic::error(pos, "unterminated ket: expected '>'"));
            }
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut text = String::new();
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                text.push(chars[i]);
                advance!();
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = (i, line, col, text.len());
                let mut exp = String::from("e");
                advance!();
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    exp.push(chars[i]);
                    advance!();
                }
                let digits_start = exp.len();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    exp.push(chars[i]);
                    advance!();
                }
                if exp.len() == digits_start {
                    // Not an exponent after all; rewind.
                    (i, line, col) = (save.0, save.1, save.2);
                } else {
                    text.push_str(&exp);
                }
            }
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imaginary {
                advance!();
            }
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => tokens.push(Token {
                    kind: if imaginary { TokenKind::Imag(v) } else { TokenKind::Number(v) },
                    pos,
                }),
                _ => diagnostics.push(Diagnostic::error(pos, format!("malformed number '{text}'"))),
            }
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut text = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                text.push(chars[i]);
                advance!();
            }
            tokens.push(Token {
                kind: TokenKind::Ident(text),
                pos,
            });
            continue;
        }
        diagnostics.push(Diagnostic::error(pos, format!("unexpected character '{ch}'")));
        advance!();
    }
    Lexed { tokens, diagnostics }
}
