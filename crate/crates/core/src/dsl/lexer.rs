use super::{ParseError, ParseErrorKind, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    LBrace,
    RBrace,
    Semi,
    Lt,
    Eq,
    Arrow,
    BackArrow,
    Colon,
    Slash,
    Comma,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::BackArrow => "`<-`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

pub(crate) fn lex(src: &str, file: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos {
            file: file.to_string(),
            line,
            col,
        };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            '\n' => Some(Tok::Newline),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Token { tok, pos });
            continue;
        }
        match c {
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => bump(&mut chars),
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::BackArrow, pos });
                } else {
                    out.push(Token { tok: Tok::Lt, pos });
                }
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::Arrow, pos });
                } else {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::Syntax {
                            expected: vec!["`->`".into()],
                            found: "`-`".into(),
                        },
                    });
                }
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    w.push(c);
                    bump(&mut chars);
                }
                out.push(Token { tok: Tok::Word(w), pos });
            }
            other => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::Syntax {
                        expected: vec!["a name".into(), "punctuation".into()],
                        found: format!("`{other}`"),
                    },
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos {
            file: file.to_string(),
            line,
            col,
        },
    });
    Ok(out)
}
