//! Net-source format: parser with positioned diagnostics and the canonical
//! serializer.
//!
//! ```text
//! net ::= "net" IDENT "{" decl* "}"
//! decl ::= "interface" NAT ";" | "cell" IDENT ":" ("delta"|"zeta"|"eps") ";"
//!        | "wire" endpoint endpoint ";" | "loop" ";"
//! endpoint ::= IDENT "." ("p"|"1"|"2") | "free" "." NAT
//! ```
//! `#` starts a comment running to the end of the line.

use std::collections::HashMap;

use crate::canon::canonical_text;
use crate::error::{Error, ParseErrorKind, Result};
use crate::net::{CellId, CellKind, Net, PortRef, Slot};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, kind: ParseErrorKind) -> Result<T> {
    Err(Error::Parse { line, col, kind })
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let n = text.parse().map_err(|_| Error::Parse {
                line: l0,
                col: c0,
                kind: ParseErrorKind::Syntax(format!("number `{text}` too large")),
            })?;
            out.push(Token { tok: Tok::Nat(n), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
        } else if "{};:.".contains(c) {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Punct(c), line: l0, col: c0 });
        } else {
            return err(l0, c0, ParseErrorKind::Syntax(format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, t: &Token, what: &str) -> Result<T> {
        let found = match &t.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        };
        err(t.line, t.col, ParseErrorKind::Syntax(format!("expected {what}, found {found}")))
    }

    fn punct(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            self.fail(&t, &format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => self.fail(&t, "identifier"),
        }
    }

    fn nat(&mut self) -> Result<usize> {
        let t = self.next();
        match t.tok {
            Tok::Nat(n) => Ok(n),
            _ => self.fail(&t, "number"),
        }
    }
}

/// An endpoint as written in the source, before resolution.
#[derive(Debug, Clone)]
enum RawEnd {
    Free(usize),
    Cell(String, Slot),
}

fn raw_name(e: &RawEnd) -> String {
    match e {
        RawEnd::Free(k) => format!("free.{k}"),
        RawEnd::Cell(n, s) => format!("{n}.{}", s.suffix()),
    }
}

fn endpoint(p: &mut Parser) -> Result<(RawEnd, Token)> {
    let (name, t) = p.ident()?;
    p.punct('.')?;
    if name == "free" {
        let k = p.nat()?;
        return Ok((RawEnd::Free(k), t));
    }
    let st = p.next();
    let slot = match &st.tok {
        Tok::Ident(s) if s == "p" => Slot::Principal,
        Tok::Nat(1) => Slot::Aux1,
        Tok::Nat(2) => Slot::Aux2,
        _ => return p.fail(&st, "`p`, `1` or `2`"),
    };
    Ok((RawEnd::Cell(name, slot), t))
}

/// Parses net-source text, returning the declared name and the net.
pub fn parse_named(src: &str) -> Result<(String, Net)> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let (kw, t) = p.ident()?;
    if kw != "net" {
        return p.fail(&t, "`net`");
    }
    let (name, _) = p.ident()?;
    p.punct('{')?;
    let mut interface: Option<usize> = None;
    let mut cells: Vec<(String, CellKind, Token)> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut wires: Vec<(RawEnd, Token, RawEnd, Token)> = Vec::new();
    let mut loops = 0;
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::Punct('}') => {
                p.next();
                break;
            }
            Tok::Ident(kw) if kw == "interface" => {
                p.next();
                if interface.is_some() {
                    return err(t.line, t.col, ParseErrorKind::Interface);
                }
                interface = Some(p.nat()?);
                p.punct(';')?;
            }
            Tok::Ident(kw) if kw == "cell" => {
                p.next();
                let (cname, ct) = p.ident()?;
                if cname == "free" {
                    return p.fail(&ct, "a cell name other than `free`");
                }
                p.punct(':')?;
                let (k, kt) = p.ident()?;
                let kind = match k.as_str() {
                    "delta" => CellKind::Delta,
                    "zeta" => CellKind::Zeta,
                    "eps" => CellKind::Eps,
                    _ => return p.fail(&kt, "`delta`, `zeta` or `eps`"),
                };
                p.punct(';')?;
                if by_name.contains_key(&cname) {
                    return err(ct.line, ct.col, ParseErrorKind::DuplicateCell(cname));
                }
                by_name.insert(cname.clone(), cells.len());
                cells.push((cname, kind, ct));
            }
            Tok::Ident(kw) if kw == "wire" => {
                p.next();
                let (a, ta) = endpoint(&mut p)?;
                let (b, tb) = endpoint(&mut p)?;
                p.punct(';')?;
                wires.push((a, ta, b, tb));
            }
            Tok::Ident(kw) if kw == "loop" => {
                p.next();
                p.punct(';')?;
                loops += 1;
            }
            _ => return p.fail(&t, "a declaration or `}`"),
        }
    }
    let end = p.next();
    if end.tok != Tok::Eof {
        return p.fail(&end, "end of input");
    }
    let Some(n) = interface else {
        return err(end.line, end.col, ParseErrorKind::Interface);
    };
    let mut net = Net::with_interface(n);
    let ids: Vec<CellId> = cells.iter().map(|(_, k, _)| net.add_cell(*k)).collect();
    let mut used: HashMap<PortRef, ()> = HashMap::new();
    let resolve = |e: &RawEnd, t: &Token| -> Result<PortRef> {
        match e {
            RawEnd::Free(k) => {
                if *k == 0 || *k > n {
                    return err(t.line, t.col, ParseErrorKind::FreeIndexOutOfRange(*k));
                }
                Ok(PortRef::Free(*k))
            }
            RawEnd::Cell(name, slot) => {
                let Some(&i) = by_name.get(name) else {
                    return err(t.line, t.col, ParseErrorKind::UnknownCell(name.clone()));
                };
                if cells[i].1 == CellKind::Eps && *slot != Slot::Principal {
                    return err(t.line, t.col, ParseErrorKind::AuxOnEps(raw_name(e)));
                }
                Ok(PortRef::Cell(ids[i], *slot))
            }
        }
    };
    for (a, ta, b, tb) in &wires {
        let pa = resolve(a, ta)?;
        let pb = resolve(b, tb)?;
        if pa == pb {
            return err(ta.line, ta.col, ParseErrorKind::SelfWire(raw_name(a)));
        }
        for (pp, raw, t) in [(pa, a, ta), (pb, b, tb)] {
            if used.insert(pp, ()).is_some() {
                return err(t.line, t.col, ParseErrorKind::DuplicateEndpoint(raw_name(raw)));
            }
        }
        net.link(pa, pb);
    }
    for k in 1..=n {
        if !used.contains_key(&PortRef::Free(k)) {
            return err(end.line, end.col, ParseErrorKind::MissingFreeIndex(k));
        }
    }
    for (i, (cname, kind, t)) in cells.iter().enumerate() {
        for s in 0..=kind.arity() {
            let slot = Slot::from_index(s);
            if !used.contains_key(&PortRef::Cell(ids[i], slot)) {
                return err(t.line, t.col, ParseErrorKind::DanglingPort(format!("{cname}.{}", slot.suffix())));
            }
        }
    }
    net.add_loops(loops);
    net.validate()?;
    Ok((name, net))
}

/// Parses net-source text, discarding the declared name.
pub fn parse_net(src: &str) -> Result<Net> {
    parse_named(src).map(|(_, n)| n)
}

/// Canonical text under the default name `n`.
pub fn serialize_net(net: &Net) -> String {
    canonical_text(net, "n")
}

/// Canonical text under a chosen name.
pub fn serialize_named(net: &Net, name: &str) -> String {
    canonical_text(net, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::alpha_eq;

    #[test]
    fn parses_wire_and_eps2() {
        let w = parse_net("net w { interface 2; wire free.1 free.2; }").unwrap();
        assert_eq!(w.cell_count(), 0);
        assert_eq!(w.wires().len(), 1);
        let e = parse_net("net e2 { interface 2; cell a: eps; cell b: eps; wire a.p free.1; wire b.p free.2; }").unwrap();
        assert!(alpha_eq(&e, &Net::eps_net(2)));
    }

    #[test]
    fn rejects_duplicate_endpoint_with_position() {
        let src = "net x {\n interface 1;\n cell a: delta;\n wire a.1 a.2;\n wire a.1 a.p;\n wire free.1 a.p;\n}";
        match parse_net(src) {
            Err(Error::Parse { line: 5, kind: ParseErrorKind::DuplicateEndpoint(e), .. }) => assert_eq!(e, "a.1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_other_malformed_sources() {
        let cases = [
            ("net x { interface 1; }", "missing"),
            ("net x { interface 1; cell e: eps; wire e.1 free.1; }", "aux"),
            ("net x { interface 1; wire q.p free.1; }", "unknown"),
            ("net x { interface 1; wire free.2 free.1; }", "range"),
            ("net x { interface 0; cell d: delta; wire d.p d.1; }", "dangling"),
            ("net x { interface 0; loop }", "syntax"),
        ];
        for (src, what) in cases {
            let e = parse_net(src).unwrap_err();
            let Error::Parse { kind, .. } = e else { panic!("{what}") };
            let ok = match what {
                "missing" => matches!(kind, ParseErrorKind::MissingFreeIndex(1)),
                "aux" => matches!(kind, ParseErrorKind::AuxOnEps(_)),
                "unknown" => matches!(kind, ParseErrorKind::UnknownCell(_)),
                "range" => matches!(kind, ParseErrorKind::FreeIndexOutOfRange(2)),
                "dangling" => matches!(kind, ParseErrorKind::DanglingPort(_)),
                _ => matches!(kind, ParseErrorKind::Syntax(_)),
            };
            assert!(ok, "{what}: {kind:?}");
        }
    }

    #[test]
    fn comments_and_loops() {
        let n = parse_net("# header\nnet l { interface 0; loop; loop; # two\n}").unwrap();
        assert_eq!(n.loops(), 2);
        assert_eq!(serialize_net(&n), "net n {\n  interface 0;\n  loop;\n  loop;\n}\n");
    }

    #[test]
    fn eps2_canonical_text() {
        let e = parse_net("net e2 { interface 2; cell b: eps; cell a: eps; wire a.p free.1; wire b.p free.2; }").unwrap();
        assert_eq!(
            serialize_named(&e, "e2"),
            "net e2 {\n  interface 2;\n  cell c1: eps;\n  cell c2: eps;\n  wire free.1 c1.p;\n  wire free.2 c2.p;\n}\n"
        );
    }
}
