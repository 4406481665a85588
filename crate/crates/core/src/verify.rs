//! Built-in self-checks: closed-form formulas against raw divergences, plus the
//! bundled script corpus.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{int, rat, Chart, ChartMorphism, Coord, GradedElem, Parity};
use crate::berezin::{berezinian, divergence, BerezinVolume, SuperMatrix};
use crate::brackets::{bv_laplacian, first_order_qme_check, schouten, schouten_vf, AnticotangentChart};
use crate::constructions::{
    anchor, anticotangent_lift, cotangent_lift, double_from_algebroid, double_modular_rep, l_infinity_local_rep,
    lie_algebroid, nijenhuis_field, q_algebroid_formula, q_algebroid_sum, structure, trace_differential, zoo,
    AlgebroidData, Antitangent,
};
use crate::dsl::{self, Options, Status, Summary};
use crate::error::Result;
use crate::geometry::VectorField;
use crate::modular::{
    inclusion_rep, is_closed, local_rep, modular_rep, relative_rep, solve_exactness, supertrace_odd, Submanifold,
};

/// The bundled scripts, by file name.
pub const CORPUS: [(&str, &str); 8] = [
    ("lie_algebras.qm", include_str!("../scripts/lie_algebras.qm")),
    ("de_rham.qm", include_str!("../scripts/de_rham.qm")),
    ("nijenhuis.qm", include_str!("../scripts/nijenhuis.qm")),
    ("higher_poisson.qm", include_str!("../scripts/higher_poisson.qm")),
    ("double.qm", include_str!("../scripts/double.qm")),
    ("volumes.qm", include_str!("../scripts/volumes.qm")),
    ("lifts.qm", include_str!("../scripts/lifts.qm")),
    ("products.qm", include_str!("../scripts/products.qm")),
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScriptResult {
    pub name: &'static str,
    pub status: Status,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub checks: Vec<CheckResult>,
    pub scripts: Vec<ScriptResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.scripts.iter().all(|s| s.status == Status::Ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite report serialises")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mark = |ok: bool| if ok { "ok  " } else { "FAIL" };
        for c in &self.checks {
            let _ = writeln!(out, "{} {:<28} {}", mark(c.passed), c.name, c.description);
            if let Some(d) = &c.detail {
                let _ = writeln!(out, "       {d}");
            }
        }
        for s in &self.scripts {
            let ok = s.status == Status::Ok;
            let _ = writeln!(
                out,
                "{} {:<28} {} assertions, {} queries",
                mark(ok),
                s.name,
                s.summary.assertions,
                s.summary.queries
            );
            if let Some(d) = &s.detail {
                let _ = writeln!(out, "       {d}");
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count()
            + self.scripts.iter().filter(|s| s.status != Status::Ok).count();
        let _ = writeln!(
            out,
            "{} checks, {} scripts, {failed} failed",
            self.checks.len(),
            self.scripts.len()
        );
        out
    }
}

type Check = fn() -> Result<std::result::Result<(), String>>;

fn expect_eq(got: &GradedElem, want: &GradedElem) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("expected {want}, got {got}"))
    }
}

fn all(results: Vec<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    results.into_iter().collect::<std::result::Result<Vec<_>, _>>().map(|_| ())
}

fn el(chart: &Chart, name: &str) -> Result<GradedElem> {
    GradedElem::coord(chart, name)
}

fn nonabelian() -> Result<AlgebroidData> {
    AlgebroidData::lie_algebra(&["xi1", "xi2"], &structure(&[(0, 1, 1, 1)]), 6)
}

fn drift() -> Result<VectorField> {
    let base = Chart::from_names(&["x"], &["t"], 6)?;
    VectorField::from_named(&base, Parity::Odd, &[("x", &el(&base, "x")? * &el(&base, "t")?)])
}

/// A volume with non-trivial density: scale 3, log density built from the
/// even coordinates and the first pair of odd ones.
fn sample_volume(chart: &Chart) -> Result<BerezinVolume> {
    let mut log = GradedElem::zero(chart);
    let odd: Vec<usize> = (0..chart.dim()).filter(|&i| chart.parity(i).is_odd()).collect();
    for i in 0..chart.dim() {
        if chart.parity(i).is_even() {
            let c = GradedElem::coord_at(chart, i);
            log = &log + &(&c + &c.pow(2).scale(&int(2)));
        }
    }
    if odd.len() >= 2 {
        log = &log + &(&GradedElem::coord_at(chart, odd[0]) * &GradedElem::coord_at(chart, odd[1]));
    }
    BerezinVolume::new(chart, int(3), log)
}

fn de_rham_unimodular() -> Result<std::result::Result<(), String>> {
    let charts = [
        Chart::from_names(&["x"], &[], 6)?,
        Chart::from_names(&["x", "y"], &["t"], 6)?,
        Chart::from_names(&[], &["s", "t"], 6)?,
    ];
    let mut out = Vec::new();
    for c in &charts {
        out.push(expect_eq(&local_rep(&Antitangent::new(c)?.de_rham())?, &GradedElem::zero(&Antitangent::new(c)?.chart().clone())));
    }
    Ok(all(out))
}

fn nijenhuis_trace() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let (x1, x2) = (el(&base, "x1")?, el(&base, "x2")?);
    let zero = GradedElem::zero(&base);
    let cases = [
        vec![vec![x1.clone(), zero.clone()], vec![zero.clone(), x2.clone()]],
        vec![vec![x1.clone(), zero.clone()], vec![zero.clone(), x1.clone()]],
        vec![vec![x1.pow(2), zero.clone()], vec![zero, &x2 + &GradedElem::one(&base)]],
    ];
    let mut out = Vec::new();
    for n in &cases {
        let q = nijenhuis_field(&base, n)?;
        out.push(expect_eq(&local_rep(&q)?, &trace_differential(&base, n)?));
    }
    Ok(all(out))
}

fn lifts_unimodular() -> Result<std::result::Result<(), String>> {
    let mut out = Vec::new();
    for q in [drift()?, lie_algebroid(&nonabelian()?)?] {
        let t = Antitangent::new(q.chart())?;
        let l = t.lie_derivative_lift(&q)?;
        out.push(expect_eq(&local_rep(&l)?, &GradedElem::zero(t.chart())));
        let total = t.de_rham().try_add(&l)?;
        out.push(expect_eq(&local_rep(&total)?, &GradedElem::zero(t.chart())));
        let c = cotangent_lift(&q)?;
        out.push(expect_eq(&local_rep(&c)?, &GradedElem::zero(c.chart())));
    }
    Ok(all(out))
}

fn anticotangent_factor_two() -> Result<std::result::Result<(), String>> {
    let mut out = Vec::new();
    for q in [drift()?, lie_algebroid(&nonabelian()?)?] {
        let t = AnticotangentChart::new(q.chart())?;
        let lifted = anticotangent_lift(&q)?;
        let want = t.lift(&local_rep(&q)?)?.scale(&int(2));
        out.push(expect_eq(&local_rep(&lifted)?, &want));
    }
    Ok(all(out))
}

fn mqk() -> Result<std::result::Result<(), String>> {
    let q = drift()?;
    let t = Antitangent::new(q.chart())?;
    let sum = t.de_rham().try_add(&t.lie_derivative_lift(&q)?)?;
    let mut out = Vec::new();
    for i in 0..t.chart().dim() {
        let f = GradedElem::coord_at(t.chart(), i);
        let g = &f * &f.clone();
        for h in [f, g] {
            out.push(expect_eq(&t.mqk_conjugate(&q, &h)?, &sum.apply(&h)?));
        }
    }
    Ok(all(out))
}

fn lie_algebroid_formula() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x"], &[], 6)?;
    let x = el(&base, "x")?;
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e1"), Coord::odd("e2")])?;
    data.set("x", &["e1"], x)?;
    data.set("e2", &["e2", "e1"], GradedElem::one(&base))?;
    let q = lie_algebroid(&data)?;
    Ok(expect_eq(&local_rep(&q)?, &data.lie_formula()?))
}

fn l_infinity_formula() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x"], &["t"], 6)?;
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e")])?;
    data.set("x", &[], &el(&base, "x")? * &el(&base, "t")?)?;
    let phi = l_infinity_local_rep(&data)?;
    let want = el(&base, "t")?.embed(data.chart())?;
    Ok(expect_eq(&phi, &want))
}

fn q_algebroid() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x"], &["t"], 6)?;
    let fibre = || vec![Coord::odd("xi1"), Coord::odd("xi2")];
    let mut alg = AlgebroidData::new(&base, fibre())?;
    alg.set("xi2", &["xi2", "xi1"], GradedElem::one(&base))?;
    let mut xi = AlgebroidData::new(&base, fibre())?;
    xi.set("x", &[], &el(&base, "x")? * &el(&base, "t")?)?;
    let total = q_algebroid_sum(&lie_algebroid(&alg)?, &xi.assemble()?)?;
    let formula = q_algebroid_formula(&alg, &xi)?;
    let ch = alg.chart();
    let want = &el(ch, "t")? - &el(ch, "xi1")?;
    Ok(all(vec![expect_eq(&local_rep(&total)?, &formula), expect_eq(&formula, &want)]))
}

fn nonabelian_class() -> Result<std::result::Result<(), String>> {
    let q = lie_algebroid(&nonabelian()?)?;
    let phi = local_rep(&q)?;
    let want = -el(q.chart(), "xi1")?;
    let v = solve_exactness(&phi, &q, 4)?;
    if v.is_exact() || !v.record(4).complete {
        return Err(crate::error::Error::InvalidStructure("expected a complete non-exact verdict".into()));
    }
    Ok(expect_eq(&phi, &want))
}

fn factor_two() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x1", "x2"], &["t"], 6)?;
    let t = AnticotangentChart::new(&base)?;
    let ps = [
        &(&t.x(1) * &t.x_star(1)) * &t.x_star(0),
        &(&t.x(2) * &t.x(0)) * &t.x_star(0),
        &(&t.x(0).pow(2) * &t.x_star(0)) * &t.x_star(1),
        &(&t.x(2) * &t.x(0)) * &t.x_star(2),
        &t.x_star(2) * &t.x_star(2),
    ];
    let mut out = Vec::new();
    for p in &ps {
        let even = p.even_part();
        if even.is_zero() {
            continue;
        }
        let qp = schouten_vf(&t, &even)?;
        let raw = divergence(&qp, &BerezinVolume::coordinate(t.chart()))?;
        out.push(expect_eq(&raw, &bv_laplacian(&t, &even, None)?.scale(&int(2))));
    }
    Ok(all(out))
}

fn poisson_quadratic() -> Result<std::result::Result<(), String>> {
    // P = ½ P^{ab} x*_b x*_a  ⇒  ΔP = (∂_a P^{ab}) x*_b
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let t = AnticotangentChart::new(&base)?;
    let (x1, x2) = (t.x(0), t.x(1));
    let p12 = &(&x1 * &x2) + &x2.pow(2);
    // P^{12} = p12, P^{21} = −p12
    let p = &(&p12 * &t.x_star(1)) * &t.x_star(0);
    let d1 = p12.left_partial(0);
    let d2 = p12.left_partial(1);
    let want = &(&d1 * &t.x_star(1)) - &(&d2 * &t.x_star(0));
    Ok(expect_eq(&bv_laplacian(&t, &p, None)?, &want))
}

fn linear_poisson() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let t = AnticotangentChart::new(&base)?;
    let p = &(&t.x(1) * &t.x_star(1)) * &t.x_star(0);
    let qp = schouten_vf(&t, &p)?;
    Ok(all(vec![
        expect_eq(&bv_laplacian(&t, &p, None)?, &-t.x_star(0)),
        expect_eq(&local_rep(&qp)?, &t.x_star(0).scale(&int(-2))),
        expect_eq(&schouten(&t, &p, &p)?, &GradedElem::zero(t.chart())),
    ]))
}

fn double_unimodular() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x"], &[], 6)?;
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e1"), Coord::odd("e2")])?;
    data.set("x", &["e1"], el(&base, "x")?)?;
    data.set("e2", &["e2", "e1"], GradedElem::one(&base))?;
    let mut out = Vec::new();
    for d in [data, nonabelian()?] {
        let s = double_from_algebroid(&d)?;
        out.push(expect_eq(&double_modular_rep(&s)?, &GradedElem::zero(s.chart())));
    }
    Ok(all(out))
}

fn relative_classes() -> Result<std::result::Result<(), String>> {
    let mut out = Vec::new();
    // anchor M → ΠTM against the unimodular de Rham field
    let q = drift()?;
    let t = Antitangent::new(q.chart())?;
    let a = anchor(&q)?;
    let rel = relative_rep(
        &a,
        &q,
        &t.de_rham(),
        &BerezinVolume::coordinate(q.chart()),
        &BerezinVolume::coordinate(t.chart()),
    )?;
    out.push(expect_eq(&rel, &local_rep(&q)?));
    // identity between two volumes gives Div_ρ₁ Q − Div_ρ₂ Q
    let rho = sample_volume(q.chart())?;
    let id = ChartMorphism::identity(q.chart());
    let rel = relative_rep(&id, &q, &q, &rho, &BerezinVolume::coordinate(q.chart()))?;
    out.push(expect_eq(&rel, &(&modular_rep(&q, &rho)? - &local_rep(&q)?)));
    // inclusion of {y = 0}
    let ch = Chart::from_names(&["y"], &["t"], 6)?;
    let qy = VectorField::from_named(&ch, Parity::Odd, &[("y", &el(&ch, "y")? * &el(&ch, "t")?)])?;
    let sub = Submanifold::new(&ch, &["t"], &["y"])?;
    let rep = inclusion_rep(&qy, &sub)?;
    out.push(expect_eq(&rep, &-el(sub.chart(), "t")?));
    out.push(expect_eq(&supertrace_odd(&sub.odd_matrix(&qy)?), &-rep));
    Ok(all(out))
}

fn closed_over_zoo() -> Result<std::result::Result<(), String>> {
    let mut out = Vec::new();
    for entry in zoo()? {
        let rho = sample_volume(entry.field.chart())?;
        let phi = modular_rep(&entry.field, &rho)?;
        if !is_closed(&phi, &entry.field)? {
            out.push(Err(format!("{}: representative not closed", entry.name)));
        }
    }
    Ok(all(out))
}

fn divergence_laws() -> Result<std::result::Result<(), String>> {
    let ch = Chart::from_names(&["x"], &["s", "t"], 6)?;
    let (x, s, t) = (el(&ch, "x")?, el(&ch, "s")?, el(&ch, "t")?);
    let rho = sample_volume(&ch)?;
    let xf = VectorField::from_named(&ch, Parity::Odd, &[("x", &x * &s), ("t", &x + &(&s * &t))])?;
    let yf = VectorField::from_named(&ch, Parity::Even, &[("x", x.pow(2)), ("s", &x * &t)])?;
    let f = &(&x * &t) + &s;
    let mut out = Vec::new();
    // Div [X, Y] = X(Div Y) − (−1)^{X̃Ỹ} Y(Div X)
    let lhs = divergence(&xf.bracket(&yf)?, &rho)?;
    let rhs = &xf.apply(&divergence(&yf, &rho)?)? - &yf.apply(&divergence(&xf, &rho)?)?;
    out.push(expect_eq(&lhs, &rhs));
    // Div(fX) = f Div X + (−1)^{f̃ X̃} X(f), f odd and X odd
    let fx = xf.mul_left(&f.odd_part())?;
    let lhs = divergence(&fx, &rho)?;
    let rhs = &(&f.odd_part() * &divergence(&xf, &rho)?) - &xf.apply(&f.odd_part())?;
    out.push(expect_eq(&lhs, &rhs));
    // change of volume: Div_{e^h ρ} X = Div_ρ X + X(h)
    let h = &x + &(&s * &t);
    let lhs = divergence(&xf, &rho.rescale(&h)?)?;
    let rhs = &divergence(&xf, &rho)? + &xf.apply(&h)?;
    out.push(expect_eq(&lhs, &rhs));
    Ok(all(out))
}

fn berezinian_multiplicative() -> Result<std::result::Result<(), String>> {
    let ch = Chart::from_names(&["x"], &["s", "t"], 6)?;
    let (x, s, t) = (el(&ch, "x")?, el(&ch, "s")?, el(&ch, "t")?);
    let one = GradedElem::one(&ch);
    let m = SuperMatrix::new(
        &ch,
        vec![vec![&one + &x]],
        vec![vec![s.clone()]],
        vec![vec![t.clone()]],
        vec![vec![&one.scale(&int(2)) + &(&s * &t)]],
    )?;
    let n = SuperMatrix::new(
        &ch,
        vec![vec![one.scale(&int(3))]],
        vec![vec![t.clone()]],
        vec![vec![&x * &s]],
        vec![vec![&one - &x]],
    )?;
    let lhs = berezinian(&m.mul(&n)?)?;
    let rhs = &berezinian(&m)? * &berezinian(&n)?;
    Ok(expect_eq(&lhs, &rhs))
}

fn first_order_qme() -> Result<std::result::Result<(), String>> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let t = AnticotangentChart::new(&base)?;
    // constant bivector, volume exp(x1·x2): P₁ = x1·x2/2
    let p = &t.x_star(1) * &t.x_star(0);
    let g = &t.x(0) * &t.x(1);
    let vol = BerezinVolume::exp(g.clone())?;
    if !first_order_qme_check(&t, &p, &g.scale(&rat(1, 2)), Some(&vol))? {
        return Ok(Err("P₁ = x1·x2/2 should solve the equation".into()));
    }
    if first_order_qme_check(&t, &p, &GradedElem::zero(t.chart()), Some(&vol))? {
        return Ok(Err("P₁ = 0 should fail for a non-unimodular volume".into()));
    }
    // x2·x2*·x1* needs P₁ = log x2, outside the algebra
    let linear = &(&t.x(1) * &t.x_star(1)) * &t.x_star(0);
    let lap = bv_laplacian(&t, &linear, None)?;
    if lap != -t.x_star(0) {
        return Ok(Err(format!("ΔP = {lap}")));
    }
    for p1 in [t.x(1), -t.x(1), &t.x(1) * &t.x(1), &t.x(0) * &t.x(1)] {
        if first_order_qme_check(&t, &linear, &p1, None)? {
            return Ok(Err(format!("P₁ = {p1} should fail")));
        }
    }
    Ok(Ok(()))
}

const CHECKS: [(&str, &str, Check); 19] = [
    ("de_rham_unimodular", "d has zero divergence in coordinate volume", de_rham_unimodular),
    ("nijenhuis_trace", "φ of d_N equals d(tr N)", nijenhuis_trace),
    ("lifts_unimodular", "L_Q, d + L_Q and the cotangent lift are unimodular", lifts_unimodular),
    ("anticotangent_factor_two", "anticotangent lift doubles the class", anticotangent_factor_two),
    ("mqk_conjugate", "e^{-i_Q} d e^{i_Q} = d + L_Q", mqk),
    ("lie_algebroid_formula", "Lie algebroid representative formula", lie_algebroid_formula),
    ("l_infinity_formula", "L∞ representative formula", l_infinity_formula),
    ("q_algebroid_formula", "Q-algebroid representative formula", q_algebroid),
    ("nonabelian_class", "[e1,e2] = e2 has class -ξ¹, complete non-exact verdict", nonabelian_class),
    ("schouten_factor_two", "φ of ⟦P,•⟧ equals 2ΔP", factor_two),
    ("poisson_quadratic", "ΔP = ∂_a P^{ab} x*_b for bivectors", poisson_quadratic),
    ("linear_poisson", "linear Poisson bivector has ΔP = -x1*", linear_poisson),
    ("double_unimodular", "doubles of Lie algebroids are unimodular", double_unimodular),
    ("relative_classes", "anchor, identity and inclusion relative classes", relative_classes),
    ("closed_over_zoo", "Div_ρ Q is Q-closed for every zoo field", closed_over_zoo),
    ("divergence_laws", "bracket, Leibniz and change-of-volume laws", divergence_laws),
    ("berezinian_multiplicative", "Ber(MN) = Ber M Ber N", berezinian_multiplicative),
    ("first_order_qme", "first-order quantum master equation", first_order_qme),
    ("heisenberg_unimodular", "Heisenberg algebra is unimodular", heisenberg),
];

fn heisenberg() -> Result<std::result::Result<(), String>> {
    let data = AlgebroidData::lie_algebra(&["xi1", "xi2", "xi3"], &structure(&[(0, 1, 2, 1)]), 6)?;
    let q = lie_algebroid(&data)?;
    Ok(expect_eq(&local_rep(&q)?, &GradedElem::zero(q.chart())))
}

/// Run every formula check and every bundled script.
pub fn verify_examples(opts: &Options) -> SuiteReport {
    let checks = CHECKS
        .iter()
        .map(|(name, description, f)| {
            let (passed, detail) = match f() {
                Ok(Ok(())) => (true, None),
                Ok(Err(d)) => (false, Some(d)),
                Err(e) => (false, Some(e.to_string())),
            };
            CheckResult {
                name,
                description,
                passed,
                detail,
            }
        })
        .collect();
    let scripts = CORPUS
        .iter()
        .map(|(name, src)| {
            let report = dsl::run(src, opts);
            let detail = match (&report.error, report.status) {
                (Some(e), _) => Some(e.to_string()),
                (None, Status::AssertionFailed) => report
                    .records
                    .iter()
                    .find(|r| r.passed == Some(false))
                    .map(|r| format!("line {}: {}", r.line, r.query)),
                _ => None,
            };
            ScriptResult {
                name,
                status: report.status,
                summary: report.summary,
                detail,
            }
        })
        .collect();
    SuiteReport {
        schema: 1,
        checks,
        scripts,
    }
}
