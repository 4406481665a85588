use std::fmt;

use super::ast::*;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ratio(n, d) => write!(f, "{n}/{d}"),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Basis(n) => write!(f, "@{n}"),
            Expr::Neg(e) => write!(f, "-{e}"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Sub(a, b) => write!(f, "{a} - {b}"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Pow(e, n) => write!(f, "{e}^{n}"),
            Expr::Paren(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for VolumeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.scale, &self.density) {
            (Some(s), Some(d)) => write!(f, "{s} * exp({d})"),
            (Some(s), None) => write!(f, "{s}"),
            (None, Some(d)) => write!(f, "exp({d})"),
            (None, None) => write!(f, "1"),
        }
    }
}

fn with_volume(volume: &Option<String>) -> String {
    volume.as_ref().map(|v| format!(" with {v}")).unwrap_or_default()
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Modular { field, volume } => write!(f, "modular {field}{}", with_volume(volume)),
            ValueExpr::Divergence { field, volume } => write!(f, "divergence {field} {volume}"),
            ValueExpr::Bracket(a, b) => write!(f, "bracket {a} {b}"),
            ValueExpr::Apply { field, arg } => write!(f, "apply {field} to {arg}"),
            ValueExpr::Bv { elem, volume } => write!(f, "bv {elem}{}", with_volume(volume)),
            ValueExpr::Expr(e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Homological(q) => write!(f, "check homological {q}"),
            Query::Value(v) => write!(f, "{v}"),
            Query::Exact { f: e, by, bound } => write!(f, "exact? {e} by {by} bound {bound}"),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Homological(q) => write!(f, "assert homological {q}"),
            Assertion::Closed { f: e, by } => write!(f, "assert closed {e} by {by}"),
            Assertion::Exact { negated, f: e, by, bound } => {
                let not = if *negated { "not " } else { "" };
                write!(f, "assert {not}exact {e} by {by} bound {bound}")
            }
            Assertion::Equal(a, b) => write!(f, "assert {a} == {b}"),
        }
    }
}

fn decls(d: &[CoordDecl]) -> String {
    if d.is_empty() {
        return "{ }".into();
    }
    let body: Vec<String> = d
        .iter()
        .map(|c| {
            let p = if c.parity.is_odd() { "odd" } else { "even" };
            format!("{p} {};", c.names.join(", "))
        })
        .collect();
    format!("{{ {} }}", body.join(" "))
}

fn components(cs: &[Component]) -> String {
    if cs.is_empty() {
        return "{ }".into();
    }
    let body: Vec<String> = cs
        .iter()
        .map(|c| format!("{} [{}] = {};", c.target, c.lower.join(", "), c.value))
        .collect();
    format!("{{ {} }}", body.join(" "))
}

impl fmt::Display for FieldDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDef::Expr(e) => write!(f, "{e}"),
            FieldDef::DeRham => write!(f, "de_rham"),
            FieldDef::Interior(x) => write!(f, "interior of {x}"),
            FieldDef::LieLift(x) => write!(f, "lie_lift of {x}"),
            FieldDef::CotangentLift(x) => write!(f, "cotangent_lift of {x}"),
            FieldDef::AnticotangentLift(x) => write!(f, "anticotangent_lift of {x}"),
            FieldDef::Hamiltonian(x) => write!(f, "hamiltonian of {x}"),
            FieldDef::Nijenhuis(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect();
                write!(f, "nijenhuis [{}]", rows.join(", "))
            }
            FieldDef::LieAlgebroid(cs) => write!(f, "lie_algebroid {}", components(cs)),
            FieldDef::LinfAlgebroid(cs) => write!(f, "linf_algebroid {}", components(cs)),
            FieldDef::Double(x) => write!(f, "double of {x}"),
            FieldDef::Product(a, b) => write!(f, "product of {a}, {b}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Comment(c) => write!(f, "#{c}"),
            Stmt::Chart { name, truncation, decls: d } => {
                let t = truncation.map(|t| format!(" truncation {t}")).unwrap_or_default();
                write!(f, "chart {name}{t} {}", decls(d))
            }
            Stmt::Bundle { name, kind, base } => write!(f, "chart {name} = {} of {base};", kind.keyword()),
            Stmt::Algebroid { name, over, decls: d } => {
                let over = over.as_deref().unwrap_or("point");
                write!(f, "chart {name} = algebroid over {over} {}", decls(d))
            }
            Stmt::Product { name, left, right } => write!(f, "chart {name} = product of {left}, {right};"),
            Stmt::Element { name, chart, expr } => write!(f, "element {name} on {chart} = {expr};"),
            Stmt::Field { name, chart, def } => write!(f, "field {name} on {chart} = {def};"),
            Stmt::Volume { name, chart, volume } => write!(f, "volume {name} on {chart} = {volume};"),
            Stmt::Query(q) => write!(f, "{q};"),
            Stmt::Assert(a) => write!(f, "{a};"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 && item.blank_before {
                writeln!(f)?;
            }
            writeln!(f, "{}", item.stmt)?;
        }
        Ok(())
    }
}
