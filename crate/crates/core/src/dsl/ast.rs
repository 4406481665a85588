use crate::algebra::Parity;

use super::lexer::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub items: Vec<Item>,
}

/// A statement with its source position; `blank_before` keeps paragraph breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub pos: Pos,
    pub blank_before: bool,
    pub stmt: Stmt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordDecl {
    pub parity: Parity,
    pub names: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bundle {
    Antitangent,
    Cotangent,
    Anticotangent,
}

impl Bundle {
    pub fn keyword(self) -> &'static str {
        match self {
            Bundle::Antitangent => "antitangent",
            Bundle::Cotangent => "cotangent",
            Bundle::Anticotangent => "anticotangent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Comment(String),
    Chart {
        name: String,
        truncation: Option<u32>,
        decls: Vec<CoordDecl>,
    },
    Bundle {
        name: String,
        kind: Bundle,
        base: String,
    },
    /// Total space of an algebroid; `over = None` is a point.
    Algebroid {
        name: String,
        over: Option<String>,
        decls: Vec<CoordDecl>,
    },
    Product {
        name: String,
        left: String,
        right: String,
    },
    Element {
        name: String,
        chart: String,
        expr: Expr,
    },
    Field {
        name: String,
        chart: String,
        def: FieldDef,
    },
    Volume {
        name: String,
        chart: String,
        volume: VolumeExpr,
    },
    Query(Query),
    Assert(Assertion),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDef {
    Expr(Expr),
    DeRham,
    Interior(String),
    LieLift(String),
    CotangentLift(String),
    AnticotangentLift(String),
    Hamiltonian(String),
    Nijenhuis(Vec<Vec<Expr>>),
    LieAlgebroid(Vec<Component>),
    LinfAlgebroid(Vec<Component>),
    Double(String),
    Product(String, String),
}

/// `target [lower…] = value`, lower indices in written order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub target: String,
    pub lower: Vec<String>,
    pub value: Expr,
}

/// `scale * exp(density)`; either part may be absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeExpr {
    pub scale: Option<Expr>,
    pub density: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Homological(String),
    Value(ValueExpr),
    Exact { f: Expr, by: String, bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueExpr {
    Modular { field: String, volume: Option<String> },
    Divergence { field: String, volume: String },
    Bracket(String, String),
    Apply { field: String, arg: Expr },
    Bv { elem: String, volume: Option<String> },
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    Homological(String),
    Closed { f: Expr, by: String },
    Exact { negated: bool, f: Expr, by: String, bound: u32 },
    Equal(ValueExpr, ValueExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(String),
    Ratio(String, String),
    Name(String),
    /// `@x`, the coordinate derivation.
    Basis(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Paren(Box<Expr>),
}

impl Expr {
    /// Names referenced, in order of appearance.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Name(n) | Expr::Basis(n) => out.push(n),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Paren(e) => e.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Expr::Int(_) | Expr::Ratio(..) => {}
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "algebroid",
    "anticotangent",
    "anticotangent_lift",
    "apply",
    "assert",
    "bound",
    "bracket",
    "bv",
    "by",
    "chart",
    "check",
    "closed",
    "cotangent",
    "cotangent_lift",
    "de_rham",
    "divergence",
    "double",
    "element",
    "even",
    "exact",
    "exp",
    "field",
    "hamiltonian",
    "homological",
    "interior",
    "lie_algebroid",
    "lie_lift",
    "linf_algebroid",
    "modular",
    "nijenhuis",
    "not",
    "odd",
    "of",
    "on",
    "over",
    "point",
    "product",
    "to",
    "truncation",
    "volume",
    "with",
    "antitangent",
];
