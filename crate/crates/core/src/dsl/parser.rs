use crate::algebra::Parity;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;

pub fn parse(src: &str) -> Result<Script, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser {
        tokens,
        at: 0,
        last_line: 0,
    };
    let mut items = Vec::new();
    loop {
        let t = p.tokens[p.at].clone();
        if t.tok == Tok::Eof {
            break;
        }
        let blank_before = !items.is_empty() && t.pos.line > p.last_line + 1;
        let stmt = if let Tok::Comment(c) = &t.tok {
            p.at += 1;
            p.last_line = t.pos.line;
            Stmt::Comment(c.clone())
        } else {
            p.statement()?
        };
        items.push(Item {
            pos: t.pos,
            blank_before,
            stmt,
        });
    }
    Ok(Script { items })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    last_line: usize,
}

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

impl Parser {
    fn skip_comments(&mut self) {
        while matches!(self.tokens[self.at].tok, Tok::Comment(_)) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> &Token {
        self.skip_comments();
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        self.skip_comments();
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
            self.last_line = t.pos.line;
        }
        t
    }

    fn error<T>(&mut self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek().clone();
        Err(ParseError {
            pos: t.pos,
            token: t.tok.to_string(),
            message: message.into(),
        })
    }

    fn is_sym(&mut self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn is_kw(&mut self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == k)
    }

    fn sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    fn kw(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{k}`"))
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => self.error(format!("`{s}` is a reserved word")),
            _ => self.error("expected a name"),
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(s) => match s.parse() {
                Ok(n) => {
                    self.bump();
                    Ok(n)
                }
                Err(_) => self.error("integer out of range"),
            },
            _ => self.error("expected an integer"),
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let head = match self.peek().tok.clone() {
            Tok::Ident(s) => s,
            _ => return self.error("expected a statement"),
        };
        match head.as_str() {
            "chart" => {
                self.bump();
                self.chart()
            }
            "element" => {
                self.bump();
                let (name, chart) = self.header()?;
                let expr = self.expr()?;
                self.sym(";")?;
                Ok(Stmt::Element { name, chart, expr })
            }
            "field" => {
                self.bump();
                let (name, chart) = self.header()?;
                let def = self.field_def()?;
                self.sym(";")?;
                Ok(Stmt::Field { name, chart, def })
            }
            "volume" => {
                self.bump();
                let (name, chart) = self.header()?;
                let volume = self.volume()?;
                self.sym(";")?;
                Ok(Stmt::Volume { name, chart, volume })
            }
            "assert" => {
                self.bump();
                let a = self.assertion()?;
                self.sym(";")?;
                Ok(Stmt::Assert(a))
            }
            "check" => {
                self.bump();
                self.kw("homological")?;
                let q = self.name()?;
                self.sym(";")?;
                Ok(Stmt::Query(Query::Homological(q)))
            }
            "exact" => {
                self.bump();
                self.sym("?")?;
                let (f, by, bound) = self.exact_tail()?;
                self.sym(";")?;
                Ok(Stmt::Query(Query::Exact { f, by, bound }))
            }
            "modular" | "divergence" | "bracket" | "apply" | "bv" => {
                let v = self.value()?;
                self.sym(";")?;
                Ok(Stmt::Query(Query::Value(v)))
            }
            _ => self.error("expected a statement"),
        }
    }

    /// `NAME on CHART =`
    fn header(&mut self) -> Result<(String, String), ParseError> {
        let name = self.name()?;
        self.kw("on")?;
        let chart = self.name()?;
        self.sym("=")?;
        Ok((name, chart))
    }

    fn chart(&mut self) -> Result<Stmt, ParseError> {
        let name = self.name()?;
        if self.is_sym("=") {
            self.bump();
            for kind in [Bundle::Antitangent, Bundle::Cotangent, Bundle::Anticotangent] {
                if self.eat_kw(kind.keyword()) {
                    self.kw("of")?;
                    let base = self.name()?;
                    self.sym(";")?;
                    return Ok(Stmt::Bundle { name, kind, base });
                }
            }
            if self.eat_kw("algebroid") {
                self.kw("over")?;
                let over = if self.eat_kw("point") { None } else { Some(self.name()?) };
                let decls = self.decls()?;
                return Ok(Stmt::Algebroid { name, over, decls });
            }
            if self.eat_kw("product") {
                self.kw("of")?;
                let left = self.name()?;
                self.sym(",")?;
                let right = self.name()?;
                self.sym(";")?;
                return Ok(Stmt::Product { name, left, right });
            }
            return self.error("expected `antitangent`, `cotangent`, `anticotangent`, `algebroid` or `product`");
        }
        let truncation = if self.eat_kw("truncation") { Some(self.int()?) } else { None };
        let decls = self.decls()?;
        Ok(Stmt::Chart { name, truncation, decls })
    }

    fn decls(&mut self) -> Result<Vec<CoordDecl>, ParseError> {
        self.sym("{")?;
        let mut out = Vec::new();
        while !self.is_sym("}") {
            let parity = if self.eat_kw("even") {
                Parity::Even
            } else if self.eat_kw("odd") {
                Parity::Odd
            } else {
                return self.error("expected `even`, `odd` or `}`");
            };
            let mut names = vec![self.name()?];
            while self.is_sym(",") {
                self.bump();
                names.push(self.name()?);
            }
            self.sym(";")?;
            out.push(CoordDecl { parity, names });
        }
        self.sym("}")?;
        Ok(out)
    }

    fn field_def(&mut self) -> Result<FieldDef, ParseError> {
        let of = |p: &mut Parser| -> Result<String, ParseError> {
            p.kw("of")?;
            p.name()
        };
        if self.eat_kw("de_rham") {
            return Ok(FieldDef::DeRham);
        }
        if self.eat_kw("interior") {
            return Ok(FieldDef::Interior(of(self)?));
        }
        if self.eat_kw("lie_lift") {
            return Ok(FieldDef::LieLift(of(self)?));
        }
        if self.eat_kw("cotangent_lift") {
            return Ok(FieldDef::CotangentLift(of(self)?));
        }
        if self.eat_kw("anticotangent_lift") {
            return Ok(FieldDef::AnticotangentLift(of(self)?));
        }
        if self.eat_kw("hamiltonian") {
            return Ok(FieldDef::Hamiltonian(of(self)?));
        }
        if self.eat_kw("double") {
            return Ok(FieldDef::Double(of(self)?));
        }
        if self.eat_kw("product") {
            let a = of(self)?;
            self.sym(",")?;
            return Ok(FieldDef::Product(a, self.name()?));
        }
        if self.eat_kw("nijenhuis") {
            self.sym("[")?;
            let mut rows = vec![self.row()?];
            while self.is_sym(",") {
                self.bump();
                rows.push(self.row()?);
            }
            self.sym("]")?;
            return Ok(FieldDef::Nijenhuis(rows));
        }
        if self.eat_kw("lie_algebroid") {
            return Ok(FieldDef::LieAlgebroid(self.components()?));
        }
        if self.eat_kw("linf_algebroid") {
            return Ok(FieldDef::LinfAlgebroid(self.components()?));
        }
        Ok(FieldDef::Expr(self.expr()?))
    }

    fn row(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.sym("[")?;
        let mut out = vec![self.expr()?];
        while self.is_sym(",") {
            self.bump();
            out.push(self.expr()?);
        }
        self.sym("]")?;
        Ok(out)
    }

    fn components(&mut self) -> Result<Vec<Component>, ParseError> {
        self.sym("{")?;
        let mut out = Vec::new();
        while !self.is_sym("}") {
            let target = self.name()?;
            self.sym("[")?;
            let mut lower = Vec::new();
            if !self.is_sym("]") {
                lower.push(self.name()?);
                while self.is_sym(",") {
                    self.bump();
                    lower.push(self.name()?);
                }
            }
            self.sym("]")?;
            self.sym("=")?;
            let value = self.expr()?;
            self.sym(";")?;
            out.push(Component { target, lower, value });
        }
        self.sym("}")?;
        Ok(out)
    }

    fn volume(&mut self) -> Result<VolumeExpr, ParseError> {
        if self.eat_kw("exp") {
            return Ok(VolumeExpr {
                scale: None,
                density: Some(self.exp_arg()?),
            });
        }
        let scale = self.number()?;
        let density = if self.is_sym("*") {
            self.bump();
            self.kw("exp")?;
            Some(self.exp_arg()?)
        } else {
            None
        };
        Ok(VolumeExpr {
            scale: Some(scale),
            density,
        })
    }

    fn exp_arg(&mut self) -> Result<Expr, ParseError> {
        self.sym("(")?;
        let e = self.expr()?;
        self.sym(")")?;
        Ok(e)
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                if self.is_sym("/") {
                    self.bump();
                    match self.peek().tok.clone() {
                        Tok::Int(d) => {
                            self.bump();
                            Ok(Expr::Ratio(n, d))
                        }
                        _ => self.error("expected a denominator"),
                    }
                } else {
                    Ok(Expr::Int(n))
                }
            }
            _ => self.error("expected a number"),
        }
    }

    fn exact_tail(&mut self) -> Result<(Expr, String, u32), ParseError> {
        let f = self.expr()?;
        self.kw("by")?;
        let by = self.name()?;
        self.kw("bound")?;
        let bound = self.int()?;
        Ok((f, by, bound))
    }

    fn optional_volume(&mut self) -> Result<Option<String>, ParseError> {
        if self.eat_kw("with") {
            Ok(Some(self.name()?))
        } else {
            Ok(None)
        }
    }

    fn value(&mut self) -> Result<ValueExpr, ParseError> {
        if self.eat_kw("modular") {
            let field = self.name()?;
            let volume = self.optional_volume()?;
            return Ok(ValueExpr::Modular { field, volume });
        }
        if self.eat_kw("divergence") {
            let field = self.name()?;
            let volume = self.name()?;
            return Ok(ValueExpr::Divergence { field, volume });
        }
        if self.eat_kw("bracket") {
            let a = self.name()?;
            return Ok(ValueExpr::Bracket(a, self.name()?));
        }
        if self.eat_kw("apply") {
            let field = self.name()?;
            self.kw("to")?;
            return Ok(ValueExpr::Apply { field, arg: self.expr()? });
        }
        if self.eat_kw("bv") {
            let elem = self.name()?;
            let volume = self.optional_volume()?;
            return Ok(ValueExpr::Bv { elem, volume });
        }
        Ok(ValueExpr::Expr(self.expr()?))
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        if self.eat_kw("homological") {
            return Ok(Assertion::Homological(self.name()?));
        }
        if self.eat_kw("closed") {
            let f = self.expr()?;
            self.kw("by")?;
            return Ok(Assertion::Closed { f, by: self.name()? });
        }
        let negated = self.eat_kw("not");
        if negated || self.is_kw("exact") {
            self.kw("exact")?;
            let (f, by, bound) = self.exact_tail()?;
            return Ok(Assertion::Exact { negated, f, by, bound });
        }
        let lhs = self.value()?;
        self.sym("==")?;
        let rhs = self.value()?;
        Ok(Assertion::Equal(lhs, rhs))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.is_sym("-") {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.is_sym("+") {
                self.bump();
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.is_sym("-") {
                self.bump();
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.is_sym("*") {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let atom = self.atom()?;
        if self.is_sym("^") {
            self.bump();
            return Ok(Expr::Pow(Box::new(atom), self.int()?));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(_) => self.number(),
            Tok::Sym("@") => {
                self.bump();
                Ok(Expr::Basis(self.name()?))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.sym(")")?;
                Ok(Expr::Paren(Box::new(e)))
            }
            Tok::Ident(_) => Ok(Expr::Name(self.name()?)),
            _ => self.error("expected an expression"),
        }
    }
}
