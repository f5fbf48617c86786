use std::fmt::Write;

use super::{JoinSpec, Workspace};
use crate::interp::JoinEntry;
use crate::lattice::{Frame, Poset};

fn poset_body(p: &Poset) -> String {
    let mut s = String::from("{ ");
    s.push_str(&p.names().join(" "));
    for (a, b) in p.covers() {
        let _ = write!(s, "; {} < {}", p.name(a), p.name(b));
    }
    s.push_str(" }");
    s
}

fn entries_block(f: &Frame, entries: &[JoinEntry]) -> String {
    if entries.is_empty() {
        return "{ }".into();
    }
    let mut s = String::from("{\n");
    for e in entries {
        let parts: Vec<&str> = e.parts.iter().map(|i| f.name(i)).collect();
        let _ = writeln!(s, "  {} <- {{{}}}", f.name(e.target), parts.join(" "));
    }
    s.push('}');
    s
}

/// Prints a workspace so that parsing the output gives the same workspace.
/// Kinds come in a fixed order and names are sorted within each kind.
pub fn print_canonical(ws: &Workspace) -> String {
    let mut out = String::new();
    for (name, d) in &ws.posets {
        let _ = writeln!(out, "poset {name} {}", poset_body(&d.value));
    }
    for (name, d) in &ws.spaces {
        let x = &d.value;
        let _ = write!(out, "space {name} {{ points");
        for p in x.names() {
            let _ = write!(out, " {p}");
        }
        for o in x.opens() {
            if o.is_empty() || o.is_full() {
                continue;
            }
            let pts: Vec<&str> = o.iter().map(|i| x.name(i)).collect();
            let _ = write!(out, "; open {{{}}}", pts.join(" "));
        }
        out.push_str(" }\n");
    }
    for (name, d) in &ws.frames {
        let _ = writeln!(out, "frame {name} = order {}", d.value.canonical_text());
    }
    for (name, d) in &ws.rings {
        let r = &d.value;
        let n = r.len();
        let table = |op: &dyn Fn(usize, usize) -> usize| {
            (0..n)
                .map(|a| (0..n).map(|b| r.name(op(a, b))).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" / ")
        };
        let _ = writeln!(out, "ring {name} = table {{");
        let _ = writeln!(out, "  elements {}", r.names().join(" "));
        let _ = writeln!(out, "  add {}", table(&|a, b| r.add(a, b)));
        let _ = writeln!(out, "  mul {}", table(&|a, b| r.mul(a, b)));
        out.push_str("}\n");
    }
    for (name, d) in &ws.maps {
        let m = &d.value;
        let (dom, cod) = (m.map.dom(), m.map.cod());
        let pairs: Vec<String> = dom
            .elements()
            .map(|e| format!("{} -> {}", dom.name(e), cod.name(m.map.apply(e))))
            .collect();
        let _ = writeln!(out, "map {name} : {} -> {} {{ {} }}", m.from, m.to, pairs.join("; "));
    }
    for (name, d) in &ws.joins {
        let j = &d.value;
        let f = j.family.frame();
        let spec = match &j.spec {
            JoinSpec::Full => "full".to_string(),
            JoinSpec::Finitary => "finitary".to_string(),
            JoinSpec::FullExcept(e) => format!("full except {}", entries_block(f, e)),
            JoinSpec::Only(e) => format!("only {}", entries_block(f, e)),
        };
        let _ = writeln!(out, "joins {name} on {} = {spec}", j.frame);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Caps;

    const SRC: &str = "\
# a bit of everything
poset P { a b < c; d }
space X { points p q; open {p} }
frame S = chain 3
frame D = downsets P
frame O = opens X
frame B = boolean 2
ring A = Z/2
ring Q = product A A
map f : S -> B { e1 -> e1 }
map g = compose f f2
map f2 : S -> S { e1 -> e1 }
joins J on B = full except { e3 <- {e1 e2} }
joins K on S = only { e2 <- {e1 e2} }
joins L on S = finitary
";

    #[test]
    fn round_trip() {
        let caps = Caps::default();
        let ws = Workspace::parse(SRC, "a.floc", &caps).unwrap();
        let text = print_canonical(&ws);
        let again = Workspace::parse(&text, "b.floc", &caps).unwrap();
        assert_eq!(print_canonical(&again), text);
        assert_eq!(again.counts(), ws.counts());
        for (k, d) in &ws.frames {
            assert_eq!(d.value, again.frames[k].value);
        }
        for (k, d) in &ws.joins {
            assert_eq!(d.value.family.entries(), again.joins[k].value.family.entries());
        }
        assert!(text.starts_with("poset P"));
        assert!(text.contains("ring Q = table {\n  elements 0_0 0_1 1_0 1_1\n"), "{text}");
    }
}
