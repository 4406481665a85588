use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;

use crate::algebra::{Chart, Coord, GradedElem, Parity, Rational};
use crate::berezin::{divergence, BerezinVolume};
use crate::brackets::{bv_laplacian, hamiltonian_vf_even, schouten_vf, AnticotangentChart, CotangentChart};
use crate::constructions::{
    anticotangent_lift, cotangent_lift, double_from_algebroid, l_infinity_algebroid, l_infinity_local_rep,
    lie_algebroid, nijenhuis_field, product, AlgebroidData, Antitangent,
};
use crate::error::Error;
use crate::geometry::{is_homological, MixedField, VectorField};
use crate::modular::{is_closed, local_rep, modular_rep, solve_exactness};

use super::ast::*;
use super::lexer::Pos;
use super::report::{ErrorKind, Record, Report, ScriptError};

/// Execution settings.
#[derive(Clone, Debug)]
pub struct Options {
    /// Truncation for charts that do not declare one.
    pub truncation: u32,
    /// When false only definitions are elaborated (`check`).
    pub queries: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            truncation: 6,
            queries: true,
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Plain,
    Antitangent(Antitangent),
    Cotangent(CotangentChart),
    Anticotangent(AnticotangentChart),
    Algebroid(AlgebroidData),
}

#[derive(Clone, Debug)]
enum Value {
    Elem(GradedElem),
    Field(VectorField),
    Volume(BerezinVolume),
}

/// Intermediate expression value.
#[derive(Clone, Debug)]
enum Ev {
    Elem(GradedElem),
    Field(MixedField),
}

impl Ev {
    fn render(&self) -> String {
        match self {
            Ev::Elem(e) => e.to_string(),
            Ev::Field(f) => f.to_string(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Ev::Elem(e) => e.is_zero(),
            Ev::Field(f) => f.components().iter().all(|c| c.is_zero()),
        }
    }

    fn chart(&self) -> &Chart {
        match self {
            Ev::Elem(e) => e.chart(),
            Ev::Field(f) => f.chart(),
        }
    }
}

type Res<T> = std::result::Result<T, ScriptError>;

fn type_err<T>(pos: Pos, message: impl Into<String>) -> Res<T> {
    Err(ScriptError {
        kind: ErrorKind::Type,
        pos,
        message: message.into(),
    })
}

fn lib(pos: Pos) -> impl Fn(Error) -> ScriptError {
    move |e| {
        let kind = match e {
            Error::ChartMismatch(_)
            | Error::UnknownCoordinate(_)
            | Error::DuplicateCoordinate(_)
            | Error::InvalidChart(_)
            | Error::ParityMismatch(_)
            | Error::Inhomogeneous(_)
            | Error::Dimension(_)
            | Error::TruncationExceeded(_) => ErrorKind::Type,
            _ => ErrorKind::Runtime,
        };
        ScriptError {
            kind,
            pos,
            message: e.to_string(),
        }
    }
}

struct Env {
    opts: Options,
    charts: HashMap<String, (Chart, Kind)>,
    values: HashMap<String, Value>,
    algebroids: HashMap<String, AlgebroidData>,
}

/// Run a parsed script.
pub fn execute(script: &Script, opts: &Options) -> Report {
    let mut env = Env {
        opts: opts.clone(),
        charts: HashMap::new(),
        values: HashMap::new(),
        algebroids: HashMap::new(),
    };
    let mut report = Report::new();
    for item in &script.items {
        let start = Instant::now();
        match env.statement(item, opts.queries) {
            Ok(Some(mut record)) => {
                record.elapsed_us = start.elapsed().as_micros() as u64;
                report.push(record);
            }
            Ok(None) => {}
            Err(e) => {
                report.fail(e);
                break;
            }
        }
    }
    report
}

impl Env {
    fn define(&mut self, pos: Pos, name: &str) -> Res<()> {
        if self.charts.contains_key(name) || self.values.contains_key(name) {
            return type_err(pos, format!("`{name}` is already defined"));
        }
        Ok(())
    }

    fn chart(&self, pos: Pos, name: &str) -> Res<&(Chart, Kind)> {
        match self.charts.get(name) {
            Some(c) => Ok(c),
            None => type_err(pos, format!("unknown chart `{name}`")),
        }
    }

    fn field(&self, pos: Pos, name: &str) -> Res<&VectorField> {
        match self.values.get(name) {
            Some(Value::Field(f)) => Ok(f),
            Some(_) => type_err(pos, format!("`{name}` is not a vector field")),
            None => type_err(pos, format!("unknown name `{name}`")),
        }
    }

    fn elem(&self, pos: Pos, name: &str) -> Res<&GradedElem> {
        match self.values.get(name) {
            Some(Value::Elem(f)) => Ok(f),
            Some(_) => type_err(pos, format!("`{name}` is not an element")),
            None => type_err(pos, format!("unknown name `{name}`")),
        }
    }

    fn volume(&self, pos: Pos, name: &str) -> Res<&BerezinVolume> {
        match self.values.get(name) {
            Some(Value::Volume(v)) => Ok(v),
            Some(_) => type_err(pos, format!("`{name}` is not a volume")),
            None => type_err(pos, format!("unknown name `{name}`")),
        }
    }

    fn build_chart(&self, pos: Pos, decls: &[CoordDecl], truncation: u32, base: &[Coord]) -> Res<Chart> {
        let mut coords = base.to_vec();
        for d in decls {
            for n in &d.names {
                coords.push(Coord::new(n.clone(), d.parity));
            }
        }
        Chart::new(coords, truncation).map_err(lib(pos))
    }

    fn statement(&mut self, item: &Item, queries: bool) -> Res<Option<Record>> {
        let pos = item.pos;
        match &item.stmt {
            Stmt::Comment(_) => Ok(None),
            Stmt::Chart { name, truncation, decls } => {
                self.define(pos, name)?;
                let chart = self.build_chart(pos, decls, truncation.unwrap_or(self.opts.truncation), &[])?;
                self.charts.insert(name.clone(), (chart, Kind::Plain));
                Ok(None)
            }
            Stmt::Bundle { name, kind, base } => {
                self.define(pos, name)?;
                let b = self.chart(pos, base)?.0.clone();
                let entry = match kind {
                    Bundle::Antitangent => {
                        let t = Antitangent::new(&b).map_err(lib(pos))?;
                        (t.chart().clone(), Kind::Antitangent(t))
                    }
                    Bundle::Cotangent => {
                        let t = CotangentChart::new(&b).map_err(lib(pos))?;
                        (t.chart().clone(), Kind::Cotangent(t))
                    }
                    Bundle::Anticotangent => {
                        let t = AnticotangentChart::new(&b).map_err(lib(pos))?;
                        (t.chart().clone(), Kind::Anticotangent(t))
                    }
                };
                self.charts.insert(name.clone(), entry);
                Ok(None)
            }
            Stmt::Algebroid { name, over, decls } => {
                self.define(pos, name)?;
                let base = match over {
                    Some(b) => self.chart(pos, b)?.0.clone(),
                    None => Chart::point(self.opts.truncation),
                };
                let fibre = self.build_chart(pos, decls, base.truncation(), &[])?;
                let data = AlgebroidData::new(&base, fibre.coords().to_vec()).map_err(lib(pos))?;
                self.charts.insert(name.clone(), (data.chart().clone(), Kind::Algebroid(data)));
                Ok(None)
            }
            Stmt::Product { name, left, right } => {
                self.define(pos, name)?;
                let p = product(self.field(pos, left)?, self.field(pos, right)?).map_err(lib(pos))?;
                self.charts.insert(name.clone(), (p.chart, Kind::Plain));
                Ok(None)
            }
            Stmt::Element { name, chart, expr } => {
                self.define(pos, name)?;
                let c = self.chart(pos, chart)?.0.clone();
                match self.eval(pos, expr, &c)? {
                    Ev::Elem(e) => {
                        self.values.insert(name.clone(), Value::Elem(e));
                        Ok(None)
                    }
                    Ev::Field(_) => type_err(pos, format!("`{name}` is declared an element but is a vector field")),
                }
            }
            Stmt::Field { name, chart, def } => {
                self.define(pos, name)?;
                let f = self.field_def(pos, name, chart, def)?;
                self.values.insert(name.clone(), Value::Field(f));
                Ok(None)
            }
            Stmt::Volume { name, chart, volume } => {
                self.define(pos, name)?;
                let c = self.chart(pos, chart)?.0.clone();
                let scale = match &volume.scale {
                    Some(s) => literal(pos, s)?,
                    None => Rational::from_integer(1.into()),
                };
                let density = match &volume.density {
                    Some(d) => self.eval_elem(pos, d, &c)?,
                    None => GradedElem::zero(&c),
                };
                let v = BerezinVolume::new(&c, scale, density).map_err(lib(pos))?;
                self.values.insert(name.clone(), Value::Volume(v));
                Ok(None)
            }
            Stmt::Query(q) if queries => self.query(pos, q).map(Some),
            Stmt::Assert(a) if queries => self.assertion(pos, a).map(Some),
            Stmt::Query(_) | Stmt::Assert(_) => Ok(None),
        }
    }

    fn expect_chart(&self, pos: Pos, declared: &str, got: &Chart) -> Res<()> {
        let want = &self.chart(pos, declared)?.0;
        if want != got {
            return type_err(pos, format!("the result does not live on chart `{declared}`"));
        }
        Ok(())
    }

    fn antitangent_of(&self, pos: Pos, chart: &str) -> Res<Antitangent> {
        match &self.chart(pos, chart)?.1 {
            Kind::Antitangent(t) => Ok(t.clone()),
            _ => type_err(pos, format!("`{chart}` is not an antitangent chart")),
        }
    }

    fn field_def(&mut self, pos: Pos, name: &str, chart: &str, def: &FieldDef) -> Res<VectorField> {
        let c = self.chart(pos, chart)?.0.clone();
        let out = match def {
            FieldDef::Expr(e) => match self.eval(pos, e, &c)? {
                Ev::Field(m) => match m.homogeneous() {
                    Some(f) if f.is_zero() => VectorField::zero(&c, Parity::Odd),
                    Some(f) => f.clone(),
                    None => return type_err(pos, format!("`{name}` has no definite parity")),
                },
                Ev::Elem(e) if e.is_zero() => VectorField::zero(&c, Parity::Odd),
                Ev::Elem(_) => return type_err(pos, format!("`{name}` is declared a field but is an element")),
            },
            FieldDef::DeRham => self.antitangent_of(pos, chart)?.de_rham(),
            FieldDef::Interior(x) => {
                let t = self.antitangent_of(pos, chart)?;
                t.interior(self.field(pos, x)?).map_err(lib(pos))?
            }
            FieldDef::LieLift(x) => {
                let t = self.antitangent_of(pos, chart)?;
                t.lie_derivative_lift(self.field(pos, x)?).map_err(lib(pos))?
            }
            FieldDef::CotangentLift(x) => cotangent_lift(self.field(pos, x)?).map_err(lib(pos))?,
            FieldDef::AnticotangentLift(x) => anticotangent_lift(self.field(pos, x)?).map_err(lib(pos))?,
            FieldDef::Hamiltonian(p) => {
                let h = self.elem(pos, p)?;
                match self.bundle_kind(h.chart()) {
                    Some(Kind::Cotangent(t)) => hamiltonian_vf_even(t, h).map_err(lib(pos))?,
                    Some(Kind::Anticotangent(t)) => schouten_vf(t, h).map_err(lib(pos))?,
                    _ => return type_err(pos, format!("`{p}` does not live on a cotangent or anticotangent chart")),
                }
            }
            FieldDef::Nijenhuis(rows) => {
                let t = self.antitangent_of(pos, chart)?;
                let base = t.base().clone();
                let mut n = Vec::with_capacity(rows.len());
                for r in rows {
                    let mut row = Vec::with_capacity(r.len());
                    for e in r {
                        row.push(self.eval_elem(pos, e, &base)?);
                    }
                    n.push(row);
                }
                nijenhuis_field(&base, &n).map_err(lib(pos))?
            }
            FieldDef::LieAlgebroid(cs) | FieldDef::LinfAlgebroid(cs) => {
                let mut data = match &self.chart(pos, chart)?.1 {
                    Kind::Algebroid(d) => d.clone(),
                    _ => return type_err(pos, format!("`{chart}` is not an algebroid chart")),
                };
                let base = data.base().clone();
                for comp in cs {
                    let v = self.eval_elem(pos, &comp.value, &base)?;
                    let lower: Vec<&str> = comp.lower.iter().map(String::as_str).collect();
                    data.set(&comp.target, &lower, v).map_err(lib(pos))?;
                }
                let q = if matches!(def, FieldDef::LieAlgebroid(_)) {
                    lie_algebroid(&data).map_err(lib(pos))?
                } else {
                    l_infinity_local_rep(&data).map_err(lib(pos))?;
                    l_infinity_algebroid(&data).map_err(lib(pos))?
                };
                self.algebroids.insert(name.to_string(), data);
                q
            }
            FieldDef::Double(x) => {
                let Some(data) = self.algebroids.get(x) else {
                    return type_err(pos, format!("`{x}` is not a Lie algebroid field"));
                };
                double_from_algebroid(data).map_err(lib(pos))?.total()
            }
            FieldDef::Product(a, b) => product(self.field(pos, a)?, self.field(pos, b)?).map_err(lib(pos))?.field,
        };
        self.expect_chart(pos, chart, out.chart())?;
        Ok(out)
    }

    /// The cotangent or anticotangent structure of a declared chart.
    fn bundle_kind(&self, chart: &Chart) -> Option<&Kind> {
        let mut found: Vec<(&String, &Kind)> = self
            .charts
            .iter()
            .filter(|(_, (c, k))| c == chart && matches!(k, Kind::Cotangent(_) | Kind::Anticotangent(_)))
            .map(|(n, (_, k))| (n, k))
            .collect();
        found.sort_by(|a, b| a.0.cmp(b.0));
        found.first().map(|(_, k)| *k)
    }

    /// The chart of the first defined name in `e`.
    fn infer_chart(&self, e: &Expr) -> Option<Chart> {
        e.names().into_iter().find_map(|n| match self.values.get(n) {
            Some(Value::Elem(x)) => Some(x.chart().clone()),
            Some(Value::Field(x)) => Some(x.chart().clone()),
            _ => None,
        })
    }

    fn eval_elem(&self, pos: Pos, e: &Expr, chart: &Chart) -> Res<GradedElem> {
        match self.eval(pos, e, chart)? {
            Ev::Elem(x) => Ok(x),
            Ev::Field(_) => type_err(pos, "expected an element, found a vector field"),
        }
    }

    fn eval(&self, pos: Pos, e: &Expr, chart: &Chart) -> Res<Ev> {
        let l = lib(pos);
        Ok(match e {
            Expr::Int(_) | Expr::Ratio(..) => Ev::Elem(GradedElem::constant(chart, literal(pos, e)?)),
            Expr::Name(n) => {
                if let Ok(i) = chart.index_of(n) {
                    Ev::Elem(GradedElem::coord_at(chart, i))
                } else {
                    match self.values.get(n) {
                        Some(Value::Elem(x)) => Ev::Elem(x.embed(chart).map_err(&l)?),
                        Some(Value::Field(x)) => Ev::Field(MixedField::from_field(&x.embed(chart).map_err(&l)?)),
                        Some(Value::Volume(_)) => return type_err(pos, format!("volume `{n}` used in an expression")),
                        None => return type_err(pos, format!("unknown name `{n}`")),
                    }
                }
            }
            Expr::Basis(n) => match chart.index_of(n) {
                Ok(i) => Ev::Field(MixedField::from_field(&VectorField::basis(chart, i))),
                Err(_) => return type_err(pos, format!("`{n}` is not a coordinate of this chart")),
            },
            Expr::Paren(x) => self.eval(pos, x, chart)?,
            Expr::Neg(x) => match self.eval(pos, x, chart)? {
                Ev::Elem(a) => Ev::Elem(-a),
                Ev::Field(f) => Ev::Field(scale_field(&f, &GradedElem::from_int(chart, -1)).map_err(&l)?),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let x = self.eval(pos, a, chart)?;
                let mut y = self.eval(pos, b, chart)?;
                if matches!(e, Expr::Sub(..)) {
                    y = match y {
                        Ev::Elem(v) => Ev::Elem(-v),
                        Ev::Field(f) => Ev::Field(scale_field(&f, &GradedElem::from_int(chart, -1)).map_err(&l)?),
                    };
                }
                match (x, y) {
                    (Ev::Elem(x), Ev::Elem(y)) => Ev::Elem(&x + &y),
                    (Ev::Field(x), Ev::Field(y)) => Ev::Field(x.try_add(&y).map_err(&l)?),
                    (Ev::Field(f), Ev::Elem(z)) | (Ev::Elem(z), Ev::Field(f)) if z.is_zero() => Ev::Field(f),
                    _ => return type_err(pos, "cannot add an element and a vector field"),
                }
            }
            Expr::Mul(a, b) => match (self.eval(pos, a, chart)?, self.eval(pos, b, chart)?) {
                (Ev::Elem(x), Ev::Elem(y)) => Ev::Elem(&x * &y),
                (Ev::Elem(x), Ev::Field(f)) => Ev::Field(scale_field(&f, &x).map_err(&l)?),
                _ => return type_err(pos, "a vector field can only be multiplied on the left by an element"),
            },
            Expr::Pow(x, n) => match self.eval(pos, x, chart)? {
                Ev::Elem(a) => Ev::Elem(a.pow(*n)),
                Ev::Field(_) => return type_err(pos, "cannot raise a vector field to a power"),
            },
        })
    }

    fn value(&self, pos: Pos, v: &ValueExpr, chart: Option<&Chart>) -> Res<Ev> {
        let l = lib(pos);
        Ok(match v {
            ValueExpr::Modular { field, volume } => {
                let q = self.field(pos, field)?;
                Ev::Elem(match volume {
                    Some(v) => modular_rep(q, self.volume(pos, v)?).map_err(&l)?,
                    None => local_rep(q).map_err(&l)?,
                })
            }
            ValueExpr::Divergence { field, volume } => {
                Ev::Elem(divergence(self.field(pos, field)?, self.volume(pos, volume)?).map_err(&l)?)
            }
            ValueExpr::Bracket(a, b) => {
                let f = self.field(pos, a)?.bracket(self.field(pos, b)?).map_err(&l)?;
                Ev::Field(MixedField::from_field(&f))
            }
            ValueExpr::Apply { field, arg } => {
                let q = self.field(pos, field)?;
                let f = self.eval_elem(pos, arg, q.chart())?;
                Ev::Elem(q.apply(&f).map_err(&l)?)
            }
            ValueExpr::Bv { elem, volume } => {
                let p = self.elem(pos, elem)?;
                let t = match self.bundle_kind(p.chart()) {
                    Some(Kind::Anticotangent(t)) => t,
                    _ => return type_err(pos, format!("`{elem}` does not live on an anticotangent chart")),
                };
                let vol = match volume {
                    Some(v) => Some(self.volume(pos, v)?),
                    None => None,
                };
                Ev::Elem(bv_laplacian(t, p, vol).map_err(&l)?)
            }
            ValueExpr::Expr(e) => {
                let c = match chart.cloned().or_else(|| self.infer_chart(e)) {
                    Some(c) => c,
                    None => return type_err(pos, "cannot tell which chart this expression lives on"),
                };
                self.eval(pos, e, &c)?
            }
        })
    }

    fn value_inputs(v: &ValueExpr) -> Vec<String> {
        match v {
            ValueExpr::Modular { field, volume } | ValueExpr::Bv { elem: field, volume } => {
                std::iter::once(field.clone()).chain(volume.clone()).collect()
            }
            ValueExpr::Divergence { field, volume } => vec![field.clone(), volume.clone()],
            ValueExpr::Bracket(a, b) => vec![a.clone(), b.clone()],
            ValueExpr::Apply { field, arg } => std::iter::once(field.clone())
                .chain(arg.names().into_iter().map(String::from))
                .collect(),
            ValueExpr::Expr(e) => e.names().into_iter().map(String::from).collect(),
        }
    }

    fn query(&self, pos: Pos, q: &Query) -> Res<Record> {
        let mut r = Record::new(pos, q.to_string());
        match q {
            Query::Homological(f) => {
                r.inputs = vec![f.clone()];
                r.value = Some(is_homological(self.field(pos, f)?).to_string());
            }
            Query::Value(v) => {
                r.inputs = Self::value_inputs(v);
                r.value = Some(self.value(pos, v, None)?.render());
            }
            Query::Exact { f, by, bound } => {
                let q = self.field(pos, by)?;
                let target = self.eval_elem(pos, f, q.chart())?;
                let verdict = solve_exactness(&target, q, *bound).map_err(lib(pos))?;
                r.inputs = std::iter::once(by.clone()).chain(f.names().into_iter().map(String::from)).collect();
                r.verdict = Some(verdict.record(*bound));
            }
        }
        Ok(r)
    }

    fn assertion(&self, pos: Pos, a: &Assertion) -> Res<Record> {
        let mut r = Record::new(pos, a.to_string());
        let passed = match a {
            Assertion::Homological(f) => {
                r.inputs = vec![f.clone()];
                let ok = is_homological(self.field(pos, f)?);
                if !ok {
                    r.expected = Some("homological".into());
                    r.actual = Some("[Q, Q] != 0".into());
                }
                ok
            }
            Assertion::Closed { f, by } => {
                let q = self.field(pos, by)?;
                let target = self.eval_elem(pos, f, q.chart())?;
                r.inputs = vec![by.clone()];
                let ok = is_closed(&target, q).map_err(lib(pos))?;
                if !ok {
                    r.expected = Some("0".into());
                    r.actual = Some(q.apply(&target).map_err(lib(pos))?.to_string());
                }
                ok
            }
            Assertion::Exact { negated, f, by, bound } => {
                let q = self.field(pos, by)?;
                let target = self.eval_elem(pos, f, q.chart())?;
                let verdict = solve_exactness(&target, q, *bound).map_err(lib(pos))?;
                r.inputs = vec![by.clone()];
                let ok = verdict.is_exact() != *negated;
                r.verdict = Some(verdict.record(*bound));
                ok
            }
            Assertion::Equal(lhs, rhs) => {
                r.inputs = Self::value_inputs(lhs);
                r.inputs.extend(Self::value_inputs(rhs));
                let (x, y) = if matches!(lhs, ValueExpr::Expr(e) if self.infer_chart(e).is_none()) {
                    let y = self.value(pos, rhs, None)?;
                    (self.value(pos, lhs, Some(y.chart()))?, y)
                } else {
                    let x = self.value(pos, lhs, None)?;
                    let y = self.value(pos, rhs, Some(x.chart()))?;
                    (x, y)
                };
                let ok = match (&x, &y) {
                    (Ev::Elem(a), Ev::Elem(b)) => a.chart() == b.chart() && a == b,
                    (Ev::Field(a), Ev::Field(b)) => a == b,
                    _ => x.is_zero() && y.is_zero(),
                };
                if !ok {
                    r.expected = Some(y.render());
                    r.actual = Some(x.render());
                }
                ok
            }
        };
        r.passed = Some(passed);
        Ok(r)
    }
}

fn scale_field(f: &MixedField, by: &GradedElem) -> crate::Result<MixedField> {
    let comps = f.components().iter().map(|c| by * c).collect();
    MixedField::from_components(f.chart(), comps)
}

fn literal(pos: Pos, e: &Expr) -> Res<Rational> {
    let parse = |s: &str| s.parse::<BigInt>().map_err(|_| ScriptError::type_error(pos, "bad integer literal"));
    match e {
        Expr::Int(n) => Ok(Rational::from_integer(parse(n)?)),
        Expr::Ratio(n, d) => {
            let d = parse(d)?;
            if d == BigInt::from(0) {
                return type_err(pos, "zero denominator");
            }
            Ok(Rational::new(parse(n)?, d))
        }
        _ => type_err(pos, "expected a rational literal"),
    }
}
