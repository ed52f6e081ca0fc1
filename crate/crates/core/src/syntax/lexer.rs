use super::ast::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    Plus,
    Dot,
    ParBar,
    LeftMerge,
    Bar,
    Ent,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Colon,
    Star,
    At,
    Minus,
    Semi,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Dot => ".",
            Tok::ParBar => "||",
            Tok::LeftMerge => "_|",
            Tok::Bar => "|",
            Tok::Ent => "><",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Colon => ":",
            Tok::Star => "*",
            Tok::At => "@",
            Tok::Minus => "-",
            Tok::Semi => ";",
            _ => "",
        }
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
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
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(chars[i].to_digit(10).unwrap() as u64))
                    .ok_or_else(|| ParseError::syntax("number too large", span))?;
                bump!();
            }
            out.push((Tok::Num(n), span));
            continue;
        }
        let two = match (c, next) {
            ('|', Some('|')) => Some(Tok::ParBar),
            ('_', Some('|')) => Some(Tok::LeftMerge),
            ('>', Some('<')) => Some(Tok::Ent),
            _ => None,
        };
        if let Some(t) = two {
            bump!();
            bump!();
            out.push((t, span));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '.' => Tok::Dot,
            '|' => Tok::Bar,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            '*' => Tok::Star,
            '@' => Tok::At,
            '-' => Tok::Minus,
            ';' => Tok::Semi,
            other => return Err(ParseError::syntax(format!("unexpected character `{other}`"), span)),
        };
        bump!();
        out.push((t, span));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
