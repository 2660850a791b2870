use super::{Calculus, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Lower(String),
    Upper(String),
    Fun,
    Raise,
    End,
    Capture,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Bar,
    Arrow,
    Dot,
    Bang,
    Question,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::Fun => "`fun`".into(),
            Tok::Raise => "`raise`".into(),
            Tok::End => "`end`".into(),
            Tok::Capture => "`capture`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_rest(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '#'
}

pub fn lex(src: &str, calculus: Calculus) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = match c {
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '|' => (Tok::Bar, 1),
            '.' => (Tok::Dot, 1),
            '!' => (Tok::Bang, 1),
            '?' => (Tok::Question, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() && ident_rest(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match (word.as_str(), calculus) {
                    ("fun", _) => Tok::Fun,
                    ("raise", Calculus::Comp) => Tok::Raise,
                    ("end", Calculus::Comp) => Tok::End,
                    ("capture", Calculus::Comp) => Tok::Capture,
                    _ if c.is_ascii_uppercase() => Tok::Upper(word),
                    _ => Tok::Lower(word),
                };
                (tok, j - i)
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    expected: "a token".into(),
                    found: format!("`{other}`"),
                })
            }
        };
        out.push(Token { tok, line: tline, col: tcol });
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str, calculus: Calculus) -> Vec<Tok> {
        lex(src, calculus).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn keywords_depend_on_calculus() {
        assert_eq!(toks("raise", Calculus::Comp), vec![Tok::Raise, Tok::Eof]);
        assert_eq!(toks("raise", Calculus::Mono), vec![Tok::Lower("raise".into()), Tok::Eof]);
    }

    #[test]
    fn comments_and_positions() {
        let ts = lex("-- note\n  x0 -> Head.", Calculus::Mono).unwrap();
        assert_eq!(ts[0].tok, Tok::Lower("x0".into()));
        assert_eq!((ts[0].line, ts[0].col), (2, 3));
        assert_eq!(ts[1].tok, Tok::Arrow);
        assert_eq!(ts[2].tok, Tok::Upper("Head".into()));
        assert_eq!(ts[3].tok, Tok::Dot);
    }
}
