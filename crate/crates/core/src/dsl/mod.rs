//! The declaration language.
//!
//! ```text
//! poset P { a < b < c; d }
//! space X { points p q; open {p} }
//! frame F = chain 3 | boolean 2 | downsets P | opens X | order { a b; a < b }
//! ring R = Z/12 | product R1 R2 | table { elements ...; add ... / ...; mul ... }
//! map f : F -> G { x -> y; ... }
//! map h = compose f g            # f after g
//! joins J on F = full | finitary | full except { t <- {a b} } | only { ... }
//! ```
//!
//! Statements end at a line break. Inside braces items are separated by `;`
//! or line breaks, and `#` starts a comment. Declarations may appear in any
//! order; names are unique per kind.

mod lexer;
mod parser;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Caps, Error};
use crate::hom::FrameMap;
use crate::interp::{GroundJoinFamily, JoinEntry};
use crate::lattice::{FiniteSpace, Frame, Poset};
use crate::ring::FiniteRing;

use parser::{Body, Chain, Entry, FrameCtor, JoinsCtor, RingCtor, Stmt};
pub use print::print_canonical;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pos {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    DuplicateName { kind: &'static str, name: String },
    UnresolvedReference { kind: &'static str, name: String },
    InvalidDeclaration(String),
    /// The declaration is well formed but the object it describes fails
    /// validation.
    Model(Error),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Model(Error::ResourceCap { .. }))
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::DuplicateName { kind, name } => write!(f, "duplicate {kind} `{name}`"),
            ParseErrorKind::UnresolvedReference { kind, name } => write!(f, "unknown {kind} `{name}`"),
            ParseErrorKind::InvalidDeclaration(m) => write!(f, "invalid declaration: {m}"),
            ParseErrorKind::Model(e) => write!(f, "invalid declaration: {e}"),
        }
    }
}

/// A declared object and where it was declared.
#[derive(Clone, Debug)]
pub struct Decl<T> {
    pub value: T,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub from: String,
    pub to: String,
    pub map: FrameMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinSpec {
    Full,
    Finitary,
    FullExcept(Vec<JoinEntry>),
    Only(Vec<JoinEntry>),
}

#[derive(Clone, Debug)]
pub struct JoinsDecl {
    pub frame: String,
    pub spec: JoinSpec,
    pub family: GroundJoinFamily,
}

/// Every declaration of one or more sources, by kind and name.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub posets: BTreeMap<String, Decl<Poset>>,
    pub spaces: BTreeMap<String, Decl<FiniteSpace>>,
    pub frames: BTreeMap<String, Decl<Frame>>,
    pub rings: BTreeMap<String, Decl<FiniteRing>>,
    pub maps: BTreeMap<String, Decl<MapDecl>>,
    pub joins: BTreeMap<String, Decl<JoinsDecl>>,
}

fn kind_of(body: &Body) -> &'static str {
    match body {
        Body::Poset(_) => "poset",
        Body::Space { .. } => "space",
        Body::Frame(_) => "frame",
        Body::Ring(_) => "ring",
        Body::Map { .. } | Body::Compose(..) => "map",
        Body::Joins { .. } => "joins",
    }
}

impl Workspace {
    pub fn parse(src: &str, file: &str, caps: &Caps) -> Result<Workspace, ParseError> {
        Workspace::parse_sources(&[(file.to_string(), src.to_string())], caps)
    }

    /// Parses several files into one workspace; names must be unique across
    /// all of them.
    pub fn parse_sources(sources: &[(String, String)], caps: &Caps) -> Result<Workspace, ParseError> {
        let mut stmts = Vec::new();
        for (file, src) in sources {
            stmts.extend(parser::parse_statements(src, file)?);
        }
        let mut by_kind: BTreeMap<(&'static str, String), Stmt> = BTreeMap::new();
        for s in stmts {
            let key = (kind_of(&s.body), s.name.clone());
            if by_kind.contains_key(&key) {
                return Err(ParseError {
                    pos: s.pos,
                    kind: ParseErrorKind::DuplicateName {
                        kind: key.0,
                        name: key.1,
                    },
                });
            }
            by_kind.insert(key, s);
        }
        let mut r = Resolver {
            stmts: by_kind,
            caps: *caps,
            ws: Workspace::default(),
            active: BTreeSet::new(),
        };
        let keys: Vec<(&'static str, String)> = r.stmts.keys().cloned().collect();
        for (kind, name) in keys {
            r.resolve(kind, &name, None)?;
        }
        Ok(r.ws)
    }

    pub fn is_empty(&self) -> bool {
        self.posets.is_empty()
            && self.spaces.is_empty()
            && self.frames.is_empty()
            && self.rings.is_empty()
            && self.maps.is_empty()
            && self.joins.is_empty()
    }

    /// Number of declarations of each kind, in printing order.
    pub fn counts(&self) -> [(&'static str, usize); 6] {
        [
            ("posets", self.posets.len()),
            ("spaces", self.spaces.len()),
            ("frames", self.frames.len()),
            ("rings", self.rings.len()),
            ("maps", self.maps.len()),
            ("joins", self.joins.len()),
        ]
    }

    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frames.get(name).map(|d| &d.value)
    }

    pub fn ring(&self, name: &str) -> Option<&FiniteRing> {
        self.rings.get(name).map(|d| &d.value)
    }

    pub fn join_family(&self, name: &str) -> Option<&JoinsDecl> {
        self.joins.get(name).map(|d| &d.value)
    }
}

struct Resolver {
    stmts: BTreeMap<(&'static str, String), Stmt>,
    caps: Caps,
    ws: Workspace,
    active: BTreeSet<(&'static str, String)>,
}

fn invalid(pos: &Pos, msg: String) -> ParseError {
    ParseError {
        pos: pos.clone(),
        kind: ParseErrorKind::InvalidDeclaration(msg),
    }
}

fn model(pos: &Pos) -> impl Fn(Error) -> ParseError + '_ {
    move |e| ParseError {
        pos: pos.clone(),
        kind: ParseErrorKind::Model(e),
    }
}

/// Names in order of first appearance and the strict relations of a chain list.
fn order_from_chains(chains: &[Chain]) -> (Vec<String>, Vec<(usize, usize)>) {
    let mut names: Vec<String> = Vec::new();
    let idx = |n: &String, names: &mut Vec<String>| match names.iter().position(|m| m == n) {
        Some(i) => i,
        None => {
            names.push(n.clone());
            names.len() - 1
        }
    };
    let mut less = Vec::new();
    for chain in chains {
        let groups: Vec<Vec<usize>> = chain
            .iter()
            .map(|g| g.iter().map(|n| idx(n, &mut names)).collect())
            .collect();
        for w in groups.windows(2) {
            for &a in &w[0] {
                for &b in &w[1] {
                    less.push((a, b));
                }
            }
        }
    }
    (names, less)
}

impl Resolver {
    fn resolve(&mut self, kind: &'static str, name: &str, from: Option<&Pos>) -> Result<(), ParseError> {
        let done = match kind {
            "poset" => self.ws.posets.contains_key(name),
            "space" => self.ws.spaces.contains_key(name),
            "frame" => self.ws.frames.contains_key(name),
            "ring" => self.ws.rings.contains_key(name),
            "map" => self.ws.maps.contains_key(name),
            _ => self.ws.joins.contains_key(name),
        };
        if done {
            return Ok(());
        }
        let key = (kind, name.to_string());
        let Some(stmt) = self.stmts.get(&key).cloned() else {
            let pos = from.cloned().expect("top-level names exist");
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::UnresolvedReference {
                    kind,
                    name: name.to_string(),
                },
            });
        };
        if !self.active.insert(key.clone()) {
            return Err(invalid(&stmt.pos, format!("{kind} `{name}` is defined in terms of itself")));
        }
        let pos = stmt.pos.clone();
        let caps = self.caps;
        match stmt.body {
            Body::Poset(chains) => {
                let (names, less) = order_from_chains(&chains);
                let p = Poset::from_relations(names, &less).map_err(model(&pos))?;
                self.ws.posets.insert(name.into(), Decl { value: p, pos });
            }
            Body::Space { points, opens } => {
                let n = points.len();
                let mut subbasis = Vec::new();
                for open in &opens {
                    let mut s = BitSet::new(n);
                    for p in open {
                        let i = points
                            .iter()
                            .position(|q| q == p)
                            .ok_or_else(|| invalid(&pos, format!("`{p}` is not a point of `{name}`")))?;
                        s.insert(i);
                    }
                    subbasis.push(s);
                }
                let distinct: BTreeSet<&String> = points.iter().collect();
                if distinct.len() != n {
                    return Err(invalid(&pos, "a point is listed twice".into()));
                }
                let x = FiniteSpace::generated(points, &subbasis).map_err(model(&pos))?;
                self.ws.spaces.insert(name.into(), Decl { value: x, pos });
            }
            Body::Frame(ctor) => {
                let f = match ctor {
                    FrameCtor::Chain(n) => {
                        caps.check_frame(n).map_err(model(&pos))?;
                        Frame::chain(n).map_err(model(&pos))?
                    }
                    FrameCtor::Boolean(k) => Frame::boolean(k, &caps).map_err(model(&pos))?,
                    FrameCtor::Downsets(p) => {
                        self.resolve("poset", &p, Some(&pos))?;
                        Frame::downsets(&self.ws.posets[&p].value, &caps).map_err(model(&pos))?
                    }
                    FrameCtor::Opens(x) => {
                        self.resolve("space", &x, Some(&pos))?;
                        let space = &self.ws.spaces[&x].value;
                        caps.check_frame(space.opens().len()).map_err(model(&pos))?;
                        Frame::opens(space)
                    }
                    FrameCtor::Order(chains) => {
                        let (names, less) = order_from_chains(&chains);
                        caps.check_frame(names.len()).map_err(model(&pos))?;
                        let p = Poset::from_relations(names, &less).map_err(model(&pos))?;
                        Frame::from_order(&p).map_err(model(&pos))?
                    }
                };
                self.ws.frames.insert(name.into(), Decl { value: f, pos });
            }
            Body::Ring(ctor) => {
                let r = match ctor {
                    RingCtor::Cyclic(n) => FiniteRing::cyclic(n, &caps).map_err(model(&pos))?,
                    RingCtor::Product(a, b) => {
                        self.resolve("ring", &a, Some(&pos))?;
                        self.resolve("ring", &b, Some(&pos))?;
                        let (ra, rb) = (&self.ws.rings[&a].value, &self.ws.rings[&b].value);
                        ra.product(rb, &caps).map_err(model(&pos))?
                    }
                    RingCtor::Table { elements, add, mul } => {
                        let n = elements.len();
                        let lookup = |rows: &[Vec<String>], what: &str| -> Result<Vec<usize>, ParseError> {
                            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                                return Err(invalid(&pos, format!("`{what}` must have {n} rows of {n} entries")));
                            }
                            rows.iter()
                                .flatten()
                                .map(|x| {
                                    elements
                                        .iter()
                                        .position(|e| e == x)
                                        .ok_or_else(|| invalid(&pos, format!("`{x}` is not an element of `{name}`")))
                                })
                                .collect()
                        };
                        let add = lookup(&add, "add")?;
                        let mul = lookup(&mul, "mul")?;
                        FiniteRing::new(elements, add, mul, &caps).map_err(model(&pos))?
                    }
                };
                self.ws.rings.insert(name.into(), Decl { value: r, pos });
            }
            Body::Map { from, to, pairs } => {
                self.resolve("frame", &from, Some(&pos))?;
                self.resolve("frame", &to, Some(&pos))?;
                let dom = self.ws.frames[&from].value.clone();
                let cod = self.ws.frames[&to].value.clone();
                let mut image: Vec<Option<usize>> = vec![None; dom.len()];
                for (a, b, p) in &pairs {
                    let ia = dom
                        .index_of(a)
                        .ok_or_else(|| invalid(p, format!("`{a}` is not an element of `{from}`")))?;
                    let ib = cod
                        .index_of(b)
                        .ok_or_else(|| invalid(p, format!("`{b}` is not an element of `{to}`")))?;
                    if image[ia].is_some_and(|old| old != ib) {
                        return Err(invalid(p, format!("`{a}` is given two images")));
                    }
                    image[ia] = Some(ib);
                }
                for (e, target) in [(dom.bottom(), cod.bottom()), (dom.top(), cod.top())] {
                    match image[e] {
                        None => image[e] = Some(target),
                        Some(t) if t != target => {
                            return Err(invalid(
                                &pos,
                                format!(
                                    "`{}` must go to `{}`, not `{}`",
                                    dom.name(e),
                                    cod.name(target),
                                    cod.name(t)
                                ),
                            ))
                        }
                        Some(_) => {}
                    }
                }
                let image = image
                    .iter()
                    .enumerate()
                    .map(|(e, i)| i.ok_or_else(|| invalid(&pos, format!("no image given for `{}`", dom.name(e)))))
                    .collect::<Result<Vec<_>, _>>()?;
                let map = FrameMap::new(dom, cod, image).map_err(model(&pos))?;
                self.ws.maps.insert(name.into(), Decl { value: MapDecl { from, to, map }, pos });
            }
            Body::Compose(f, g) => {
                self.resolve("map", &f, Some(&pos))?;
                self.resolve("map", &g, Some(&pos))?;
                let (fd, gd) = (&self.ws.maps[&f].value, &self.ws.maps[&g].value);
                let map = fd.map.compose(&gd.map).map_err(model(&pos))?;
                let decl = MapDecl {
                    from: gd.from.clone(),
                    to: fd.to.clone(),
                    map,
                };
                self.ws.maps.insert(name.into(), Decl { value: decl, pos });
            }
            Body::Joins { frame, ctor } => {
                self.resolve("frame", &frame, Some(&pos))?;
                let fr = self.ws.frames[&frame].value.clone();
                let entries = |list: &[Entry]| -> Result<Vec<JoinEntry>, ParseError> {
                    list.iter()
                        .map(|e| {
                            let el = |n: &String| {
                                fr.index_of(n)
                                    .ok_or_else(|| invalid(&e.pos, format!("`{n}` is not an element of `{frame}`")))
                            };
                            let target = el(&e.target)?;
                            let parts = e.parts.iter().map(el).collect::<Result<Vec<_>, _>>()?;
                            Ok(JoinEntry {
                                target,
                                parts: BitSet::from_indices(fr.len(), parts),
                            })
                        })
                        .collect()
                };
                let (spec, family) = match ctor {
                    JoinsCtor::Full => (JoinSpec::Full, GroundJoinFamily::full(&fr, &caps).map_err(model(&pos))?),
                    JoinsCtor::Finitary => (JoinSpec::Finitary, GroundJoinFamily::finitary(&fr)),
                    JoinsCtor::FullExcept(list) => {
                        let removed = entries(&list)?;
                        GroundJoinFamily::new(&fr, removed.clone()).map_err(model(&pos))?;
                        let full = GroundJoinFamily::full(&fr, &caps).map_err(model(&pos))?;
                        let family = full.without(&removed);
                        let mut removed = removed;
                        removed.sort();
                        removed.dedup();
                        (JoinSpec::FullExcept(removed), family)
                    }
                    JoinsCtor::Only(list) => {
                        let family = GroundJoinFamily::new(&fr, entries(&list)?).map_err(model(&pos))?;
                        (JoinSpec::Only(family.entries().to_vec()), family)
                    }
                };
                self.ws.joins.insert(name.into(), Decl { value: JoinsDecl { frame, spec, family }, pos });
            }
        }
        self.active.remove(&key);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn parse(src: &str) -> Result<Workspace, ParseError> {
        Workspace::parse(src, "test.floc", &caps())
    }

    #[test]
    fn examples() {
        assert!(parse("").unwrap().is_empty());
        let ws = parse("frame S = chain 3").unwrap();
        assert_eq!(ws.frame("S").unwrap().len(), 3);
        let err = parse("frame S = chain 3\nframe B = boolean 2\nmap f : S -> B { s1 -> a }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::InvalidDeclaration(_)), "{err}");
        let err = parse("frame S = order { 0 < s1 < 1 }\nframe B = boolean 2\nmap f : S -> B { 0 -> e1 }")
            .unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::InvalidDeclaration(_)), "{err}");
        let ok = parse("frame S = order { 0 < s1 < 1 }\nframe B = boolean 2\nmap f : S -> B { s1 -> e1 }");
        assert!(ok.is_ok());
    }

    #[test]
    fn order_independence_and_references() {
        let ws = parse("map h = compose f g\nmap f : T -> U { e1 -> e1 }\nmap g : S -> T { e1 -> e1 }\n\
                        frame S = chain 3\nframe T = chain 3\nframe U = chain 3")
            .unwrap();
        assert_eq!(ws.maps["h"].value.from, "S");
        assert_eq!(ws.maps["h"].value.to, "U");
        let err = parse("frame F = downsets P").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::UnresolvedReference {
                kind: "poset",
                name: "P".into()
            }
        );
        let err = parse("frame F = chain 2\nframe F = chain 3").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DuplicateName { .. }));
        assert_eq!(err.pos.line, 2);
        let err = parse("ring A = product B B\nring B = product A A").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::InvalidDeclaration(_)));
    }

    #[test]
    fn joins_and_rings() {
        let ws = parse(
            "frame B = boolean 2\njoins R on B = full except {\n  e3 <- {e1 e2}\n  e3 <- {e0 e1 e2}\n}\n\
             ring A = Z/2\nring P = product A A\n\
             ring T = table { elements z u; add z u / u z; mul z z / z u }",
        )
        .unwrap();
        assert_eq!(ws.joins["R"].value.family.len(), 14);
        assert_eq!(ws.ring("P").unwrap().len(), 4);
        assert_eq!(ws.ring("T").unwrap().one(), 1);
        let err = parse("frame B = boolean 2\njoins J on B = only { e3 <- {e1} }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Model(Error::InvalidJoinEntry(_))));
        let err = parse("frame C = chain 20\njoins J on C = full").unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn spaces_and_posets() {
        let ws = parse("space X { points p q r; open {p}; open {q} }\nposet P { a b < c }\nframe O = opens X").unwrap();
        assert_eq!(ws.spaces["X"].value.opens().len(), 5);
        assert!(ws.posets["P"].value.leq(0, 2) && ws.posets["P"].value.leq(1, 2));
        assert_eq!(ws.frame("O").unwrap().len(), 5);
        let err = parse("space X { points p; open {q} }").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::InvalidDeclaration(_)));
    }
}
