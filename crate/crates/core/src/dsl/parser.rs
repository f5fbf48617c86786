use super::lexer::{lex, Tok, Token};
use super::{ParseError, ParseErrorKind, Pos};

/// Groups of names separated by `<`: every name in a group is below every
/// name in the next group.
pub(crate) type Chain = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Entry {
    pub target: String,
    pub parts: Vec<String>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum FrameCtor {
    Chain(usize),
    Boolean(usize),
    Downsets(String),
    Opens(String),
    Order(Vec<Chain>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RingCtor {
    Cyclic(usize),
    Product(String, String),
    Table {
        elements: Vec<String>,
        add: Vec<Vec<String>>,
        mul: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum JoinsCtor {
    Full,
    Finitary,
    FullExcept(Vec<Entry>),
    Only(Vec<Entry>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Body {
    Poset(Vec<Chain>),
    Space {
        points: Vec<String>,
        opens: Vec<Vec<String>>,
    },
    Frame(FrameCtor),
    Ring(RingCtor),
    Map {
        from: String,
        to: String,
        pairs: Vec<(String, String, Pos)>,
    },
    Compose(String, String),
    Joins {
        frame: String,
        ctor: JoinsCtor,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Stmt {
    pub name: String,
    pub pos: Pos,
    pub body: Body,
}

const KEYWORDS: [&str; 6] = ["poset", "space", "frame", "ring", "map", "joins"];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            pos: t.pos.clone(),
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: t.tok.describe(),
            },
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let w = w.clone();
                let pos = self.next().pos;
                Ok((w, pos))
            }
            _ => self.fail(&[what]),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Word(w) if w == kw => {
                self.next();
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Word(w) => match w.parse::<usize>() {
                Ok(n) => {
                    self.next();
                    Ok(n)
                }
                Err(_) => self.fail(&["a number"]),
            },
            _ => self.fail(&["a number"]),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek().tok, Tok::Newline | Tok::Semi) {
            self.next();
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::Newline | Tok::Semi | Tok::Eof => Ok(()),
            _ => self.fail(&["end of line"]),
        }
    }

    /// `{ item (sep item)* }`, where `sep` is `;` or a line break.
    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            if self.peek().tok == Tok::RBrace {
                self.next();
                return Ok(out);
            }
            out.push(item(self)?);
            match self.peek().tok {
                Tok::Semi | Tok::Newline | Tok::RBrace => {}
                _ => return self.fail(&["`;`", "end of line", "`}`"]),
            }
        }
    }

    /// `{ a b c }` with optional commas.
    fn name_set(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            match self.peek().tok {
                Tok::RBrace => {
                    self.next();
                    return Ok(out);
                }
                Tok::Comma => {
                    self.next();
                }
                Tok::Word(_) => out.push(self.word("a name")?.0),
                _ => return self.fail(&["a name", "`}`"]),
            }
        }
    }

    fn chain(&mut self) -> Result<Chain, ParseError> {
        let mut groups = vec![Vec::new()];
        loop {
            match self.peek().tok {
                Tok::Word(_) => groups.last_mut().unwrap().push(self.word("a name")?.0),
                Tok::Lt => {
                    if groups.last().unwrap().is_empty() {
                        return self.fail(&["a name"]);
                    }
                    self.next();
                    groups.push(Vec::new());
                }
                _ => {
                    if groups.last().unwrap().is_empty() {
                        return self.fail(&["a name"]);
                    }
                    return Ok(groups);
                }
            }
        }
    }

    fn entry(&mut self) -> Result<Entry, ParseError> {
        let (target, pos) = self.word("a join target")?;
        self.expect(Tok::BackArrow)?;
        let parts = self.name_set()?;
        Ok(Entry { target, parts, pos })
    }

    fn frame_ctor(&mut self) -> Result<FrameCtor, ParseError> {
        let expected = ["`chain`", "`boolean`", "`downsets`", "`opens`", "`order`"];
        let Tok::Word(w) = self.peek().tok.clone() else {
            return self.fail(&expected);
        };
        match w.as_str() {
            "chain" => {
                self.next();
                Ok(FrameCtor::Chain(self.number()?))
            }
            "boolean" => {
                self.next();
                Ok(FrameCtor::Boolean(self.number()?))
            }
            "downsets" => {
                self.next();
                Ok(FrameCtor::Downsets(self.word("a poset name")?.0))
            }
            "opens" => {
                self.next();
                Ok(FrameCtor::Opens(self.word("a space name")?.0))
            }
            "order" => {
                self.next();
                Ok(FrameCtor::Order(self.block(|p| p.chain())?))
            }
            _ => self.fail(&expected),
        }
    }

    fn rows(&mut self) -> Result<Vec<Vec<String>>, ParseError> {
        let mut rows = vec![Vec::new()];
        loop {
            match self.peek().tok {
                Tok::Word(_) => rows.last_mut().unwrap().push(self.word("a ring element")?.0),
                Tok::Slash => {
                    self.next();
                    rows.push(Vec::new());
                }
                _ => return Ok(rows),
            }
        }
    }

    fn ring_ctor(&mut self) -> Result<RingCtor, ParseError> {
        let expected = ["`Z`", "`product`", "`table`"];
        let Tok::Word(w) = self.peek().tok.clone() else {
            return self.fail(&expected);
        };
        match w.as_str() {
            "Z" => {
                self.next();
                self.expect(Tok::Slash)?;
                Ok(RingCtor::Cyclic(self.number()?))
            }
            "product" => {
                self.next();
                let a = self.word("a ring name")?.0;
                let b = self.word("a ring name")?.0;
                Ok(RingCtor::Product(a, b))
            }
            "table" => {
                self.next();
                let mut elements = None;
                let mut add = None;
                let mut mul = None;
                let items = self.block(|p| {
                    let (kw, pos) = p.word("`elements`, `add` or `mul`")?;
                    match kw.as_str() {
                        "elements" => Ok((kw, pos, p.rows()?)),
                        "add" | "mul" => Ok((kw, pos, p.rows()?)),
                        _ => Err(ParseError {
                            pos,
                            kind: ParseErrorKind::Syntax {
                                expected: vec!["`elements`".into(), "`add`".into(), "`mul`".into()],
                                found: format!("`{kw}`"),
                            },
                        }),
                    }
                })?;
                let pos = self.toks[self.at.saturating_sub(1)].pos.clone();
                for (kw, pos, rows) in items {
                    let slot = match kw.as_str() {
                        "elements" => &mut elements,
                        "add" => &mut add,
                        _ => &mut mul,
                    };
                    if slot.is_some() {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::InvalidDeclaration(format!("`{kw}` given twice")),
                        });
                    }
                    *slot = Some(rows);
                }
                let missing = |what: &str| ParseError {
                    pos: pos.clone(),
                    kind: ParseErrorKind::InvalidDeclaration(format!("ring table has no `{what}`")),
                };
                let elements = elements.ok_or_else(|| missing("elements"))?;
                if elements.len() != 1 {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::InvalidDeclaration("`elements` takes a single row".into()),
                    });
                }
                Ok(RingCtor::Table {
                    elements: elements.into_iter().next().unwrap(),
                    add: add.ok_or_else(|| missing("add"))?,
                    mul: mul.ok_or_else(|| missing("mul"))?,
                })
            }
            _ => self.fail(&expected),
        }
    }

    fn joins_ctor(&mut self) -> Result<JoinsCtor, ParseError> {
        let expected = ["`full`", "`finitary`", "`only`"];
        let Tok::Word(w) = self.peek().tok.clone() else {
            return self.fail(&expected);
        };
        match w.as_str() {
            "full" => {
                self.next();
                if matches!(&self.peek().tok, Tok::Word(w) if w == "except") {
                    self.next();
                    Ok(JoinsCtor::FullExcept(self.block(|p| p.entry())?))
                } else {
                    Ok(JoinsCtor::Full)
                }
            }
            "finitary" => {
                self.next();
                Ok(JoinsCtor::Finitary)
            }
            "only" => {
                self.next();
                Ok(JoinsCtor::Only(self.block(|p| p.entry())?))
            }
            _ => self.fail(&expected),
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let kw_tok = self.peek().clone();
        let kw = match &kw_tok.tok {
            Tok::Word(w) if KEYWORDS.contains(&w.as_str()) => w.clone(),
            _ => return self.fail(&KEYWORDS.map(|k| format!("`{k}`")).iter().map(|s| s.as_str()).collect::<Vec<_>>()),
        };
        self.next();
        let (name, pos) = self.word("a declaration name")?;
        let body = match kw.as_str() {
            "poset" => Body::Poset(self.block(|p| p.chain())?),
            "space" => {
                let mut points: Option<Vec<String>> = None;
                let mut opens = Vec::new();
                let items = self.block(|p| {
                    let (kw, pos) = p.word("`points` or `open`")?;
                    match kw.as_str() {
                        "points" => {
                            let mut names = Vec::new();
                            while let Tok::Word(_) = p.peek().tok {
                                names.push(p.word("a point name")?.0);
                            }
                            Ok((true, names, pos))
                        }
                        "open" => Ok((false, p.name_set()?, pos)),
                        _ => Err(ParseError {
                            pos,
                            kind: ParseErrorKind::Syntax {
                                expected: vec!["`points`".into(), "`open`".into()],
                                found: format!("`{kw}`"),
                            },
                        }),
                    }
                })?;
                for (is_points, names, pos) in items {
                    if is_points {
                        if points.is_some() {
                            return Err(ParseError {
                                pos,
                                kind: ParseErrorKind::InvalidDeclaration("`points` given twice".into()),
                            });
                        }
                        points = Some(names);
                    } else {
                        opens.push(names);
                    }
                }
                Body::Space {
                    points: points.unwrap_or_default(),
                    opens,
                }
            }
            "frame" => {
                self.expect(Tok::Eq)?;
                Body::Frame(self.frame_ctor()?)
            }
            "ring" => {
                self.expect(Tok::Eq)?;
                Body::Ring(self.ring_ctor()?)
            }
            "map" => match self.peek().tok {
                Tok::Colon => {
                    self.next();
                    let from = self.word("a frame name")?.0;
                    self.expect(Tok::Arrow)?;
                    let to = self.word("a frame name")?.0;
                    let pairs = self.block(|p| {
                        let (a, pos) = p.word("an element name")?;
                        p.expect(Tok::Arrow)?;
                        let b = p.word("an element name")?.0;
                        Ok((a, b, pos))
                    })?;
                    Body::Map { from, to, pairs }
                }
                Tok::Eq => {
                    self.next();
                    self.keyword("compose")?;
                    let f = self.word("a map name")?.0;
                    let g = self.word("a map name")?.0;
                    Body::Compose(f, g)
                }
                _ => return self.fail(&["`:`", "`=`"]),
            },
            _ => {
                self.keyword("on")?;
                let frame = self.word("a frame name")?.0;
                self.expect(Tok::Eq)?;
                Body::Joins {
                    frame,
                    ctor: self.joins_ctor()?,
                }
            }
        };
        self.end_of_statement()?;
        Ok(Stmt { name, pos, body })
    }
}

pub(crate) fn parse_statements(src: &str, file: &str) -> Result<Vec<Stmt>, ParseError> {
    let toks = lex(src, file)?;
    let mut p = Parser { toks, at: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_separators();
        if p.peek().tok == Tok::Eof {
            return Ok(out);
        }
        out.push(p.statement()?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements() {
        let src = "# demo\nposet P { a < b < c; d }\nframe S = chain 3\nring R = Z/12\n\
                   map f : S -> S { e1 -> e1 }\nmap g = compose f f\n\
                   joins J on S = full except { e2 <- {e1 e2} }\n";
        let stmts = parse_statements(src, "t").unwrap();
        assert_eq!(stmts.len(), 6);
        assert_eq!(
            stmts[0].body,
            Body::Poset(vec![
                vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
                vec![vec!["d".into()]]
            ])
        );
        assert_eq!(stmts[2].body, Body::Ring(RingCtor::Cyclic(12)));
    }

    #[test]
    fn syntax_errors_carry_position_and_expectations() {
        let err = parse_statements("frame S = chian 3", "t").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (1, 11));
        match err.kind {
            ParseErrorKind::Syntax { expected, found } => {
                assert!(expected.contains(&"`chain`".to_string()));
                assert_eq!(found, "`chian`");
            }
            other => panic!("{other:?}"),
        }
        let err = parse_statements("\n\nposet P { a < }", "t").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (3, 15));
    }
}
