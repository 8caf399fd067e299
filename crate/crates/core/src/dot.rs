//! Graphviz export of nets.
//!
//! Cells are record nodes whose principal port is drawn as a filled dot;
//! active pairs are drawn as bold red edges.

use std::fmt::Write;

use crate::net::{CellKind, Net, PortRef, Slot};

fn symbol(kind: CellKind) -> &'static str {
    match kind {
        CellKind::Delta => "δ",
        CellKind::Zeta => "ζ",
        CellKind::Eps => "ε",
    }
}

fn endpoint(p: PortRef) -> String {
    match p {
        PortRef::Free(k) => format!("free{k}"),
        PortRef::Cell(c, Slot::Principal) => format!("c{c}:p"),
        PortRef::Cell(c, s) => format!("c{c}:a{}", s.index()),
    }
}

/// Renders a net in the DOT language.
pub fn to_dot(net: &Net, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(out, "  node [fontname=\"Helvetica\"];");
    for k in 1..=net.interface() {
        let _ = writeln!(out, "  free{k} [shape=plaintext, label=\"{k}\"];");
    }
    for (c, cell) in net.cells() {
        let aux = match cell.kind.arity() {
            0 => String::new(),
            _ => "|{<a1> 1|<a2> 2}".to_string(),
        };
        let _ = writeln!(
            out,
            "  c{c} [shape=record, label=\"{{<p> ●|{}{aux}}}\", xlabel=\"principal ●\"];",
            symbol(cell.kind)
        );
    }
    for (a, b) in net.wires() {
        let active = a.is_principal() && b.is_principal();
        let style = if active { " [color=red, penwidth=2.5]" } else { "" };
        let _ = writeln!(out, "  {} -- {}{style};", endpoint(a), endpoint(b));
    }
    if net.loops() > 0 {
        let _ = writeln!(out, "  loops [shape=circle, label=\"{} loop(s)\"];", net.loops());
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marks_principal_ports_and_active_pairs() {
        let d = to_dot(&Net::active_pair(CellKind::Delta, CellKind::Zeta), "pair");
        assert!(d.starts_with("graph \"pair\" {"));
        assert!(d.contains("<p> ●|δ|{<a1> 1|<a2> 2}"));
        assert!(d.contains("c0:p -- c1:p [color=red"));
        assert_eq!(d.matches("shape=record").count(), 2);
    }
}
