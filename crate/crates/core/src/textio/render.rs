use crate::expr::{PclExpr, PilExpr};
use crate::pcl::Pcl;
use crate::port::PortUniverse;

// binding strength, loosest first
const IMPLIES: u8 = 0;
const UNION: u8 = 1;
const INTERSECT: u8 = 2;
const COALESCE: u8 = 3;
const PREFIX: u8 = 4;
const ATOM: u8 = 5;

fn strength(e: &PclExpr) -> u8 {
    match e {
        PclExpr::Implies(..) => IMPLIES,
        PclExpr::Union(..) => UNION,
        PclExpr::Intersect(..) => INTERSECT,
        PclExpr::Coalesce(..) => COALESCE,
        PclExpr::Not(_) | PclExpr::Closure(_) => PREFIX,
        _ => ATOM,
    }
}

/// Canonical text of a formula, with only the parentheses it needs.
pub fn render_formula(e: &PclExpr, ports: &PortUniverse) -> String {
    let mut out = String::new();
    write_pcl(e, ports, &mut out);
    out
}

/// Text of a core formula, showing characteristic monomials as literals.
pub fn render_core(f: &Pcl, ports: &PortUniverse) -> String {
    render_formula(&PclExpr::lift(f, ports), ports)
}

/// Text of an interaction formula, without the enclosing braces.
pub fn render_pil(e: &PilExpr, ports: &PortUniverse) -> String {
    let mut out = String::new();
    write_pil(e, ports, &mut out);
    out
}

fn wrapped(e: &PclExpr, parens: bool, ports: &PortUniverse, out: &mut String) {
    if parens {
        out.push('(');
        write_pcl(e, ports, out);
        out.push(')');
    } else {
        write_pcl(e, ports, out);
    }
}

fn write_pcl(e: &PclExpr, ports: &PortUniverse, out: &mut String) {
    let infix = |l: &PclExpr, r: &PclExpr, op: &str, level: u8, out: &mut String| {
        let right_assoc = level == IMPLIES;
        let left_parens = strength(l) < level || (right_assoc && strength(l) == level);
        let right_parens = strength(r) < level || (!right_assoc && strength(r) == level);
        wrapped(l, left_parens, ports, out);
        out.push_str(op);
        wrapped(r, right_parens, ports, out);
    };
    match e {
        PclExpr::True => out.push_str("true"),
        PclExpr::Pil(phi) => {
            out.push('{');
            write_pil(phi, ports, out);
            out.push('}');
        }
        PclExpr::Interaction(a) => {
            out.push('<');
            out.push_str(&ports.interaction_names(*a).join(","));
            out.push('>');
        }
        PclExpr::Not(f) => {
            out.push_str("not ");
            wrapped(f, strength(f) < PREFIX, ports, out);
        }
        PclExpr::Closure(f) => {
            out.push('~');
            wrapped(f, strength(f) < PREFIX, ports, out);
        }
        PclExpr::Implies(l, r) => infix(l, r, " implies ", IMPLIES, out),
        PclExpr::Union(l, r) => infix(l, r, " or ", UNION, out),
        PclExpr::Intersect(l, r) => infix(l, r, " and ", INTERSECT, out),
        PclExpr::Coalesce(l, r) => infix(l, r, " + ", COALESCE, out),
        PclExpr::Dis(items) => {
            out.push_str("dis(");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_pcl(item, ports, out);
            }
            out.push(')');
        }
    }
}

fn pil_strength(e: &PilExpr) -> u8 {
    match e {
        PilExpr::Or(..) => 0,
        PilExpr::And(..) => 1,
        PilExpr::Not(_) => 2,
        _ => 3,
    }
}

fn write_pil(e: &PilExpr, ports: &PortUniverse, out: &mut String) {
    let sub = |child: &PilExpr, parens: bool, out: &mut String| {
        if parens {
            out.push('(');
            write_pil(child, ports, out);
            out.push(')');
        } else {
            write_pil(child, ports, out);
        }
    };
    match e {
        PilExpr::True => out.push_str("true"),
        PilExpr::False => out.push_str("false"),
        PilExpr::Port(p) => out.push_str(&ports.port(*p).to_string()),
        PilExpr::Not(inner) => {
            out.push('!');
            sub(inner, pil_strength(inner) < 2, out);
        }
        PilExpr::And(l, r) => {
            sub(l, pil_strength(l) < 1, out);
            out.push_str(" & ");
            sub(r, pil_strength(r) <= 1, out);
        }
        PilExpr::Or(l, r) => {
            sub(l, false, out);
            out.push_str(" | ");
            sub(r, pil_strength(r) == 0, out);
        }
    }
}
