//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.
#![allow(clippy::needless_range_loop)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use common::{laws, oracle};
use qmanifold::algebra::{int, monomials, rat};
use qmanifold::berezin::divergence;
use qmanifold::brackets::{bv_laplacian, hamiltonian_vf_odd, schouten, schouten_vf, AnticotangentChart};
use qmanifold::constructions::{
    anchor, anticotangent_lift, assembled_divergence, cotangent_lift, double_from_algebroid, double_modular_rep,
    l_infinity_local_rep, lie_algebroid, nijenhuis_field, product, q_algebroid_formula, q_algebroid_sum, structure,
    zoo, AlgebroidData, Antitangent,
};
use qmanifold::geometry::is_homological;
use qmanifold::modular::{local_rep, relative_rep, solve_exactness};
use qmanifold::verify::CORPUS;
use qmanifold::{BerezinVolume, Chart, Coord, GradedElem, Parity, VectorField};
use rand::Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn same(got: &GradedElem, want: &GradedElem, what: &str) -> Outcome {
    ensure(got == want, format!("{what}: expected {want}, got {got}"))
}

fn raw_divergence(x: &VectorField) -> GradedElem {
    divergence(x, &BerezinVolume::coordinate(x.chart())).unwrap()
}

fn el(chart: &Chart, name: &str) -> GradedElem {
    GradedElem::coord(chart, name).unwrap()
}

fn nonabelian() -> AlgebroidData {
    AlgebroidData::lie_algebra(&["xi1", "xi2"], &structure(&[(0, 1, 1, 1)]), 6).unwrap()
}

fn heisenberg() -> AlgebroidData {
    AlgebroidData::lie_algebra(&["xi1", "xi2", "xi3"], &structure(&[(0, 1, 2, 1)]), 6).unwrap()
}

fn zoo_field(name: &str) -> VectorField {
    zoo().unwrap().into_iter().find(|e| e.name == name).unwrap().field
}

fn c1_divergence_laws() -> Outcome {
    laws::divergence_laws();
    Ok(())
}

fn c2_closedness() -> Outcome {
    laws::closedness_over_zoo();
    Ok(())
}

/// `Σ_a dx^a ∂_a(tr N)` on the antitangent chart.
fn d_trace(base: &Chart, n: &[Vec<GradedElem>]) -> GradedElem {
    let t = Antitangent::new(base).unwrap();
    let tr = n.iter().enumerate().fold(GradedElem::zero(base), |acc, (i, r)| &acc + &r[i]);
    (0..base.dim()).fold(GradedElem::zero(t.chart()), |acc, a| {
        &acc + &(&t.dx(a) * &t.lift(&tr.left_partial(a)).unwrap())
    })
}

fn c3_nijenhuis() -> Outcome {
    let line = Chart::from_names(&["x"], &[], 6).unwrap();
    let x = el(&line, "x");
    let one = GradedElem::one(&line);
    for f in [x.clone(), &one + &x.pow(2), &x.pow(3).scale(&rat(1, 3)) - &x] {
        let n = vec![vec![f.clone()]];
        let q = nijenhuis_field(&line, &n).map_err(|e| e.to_string())?;
        same(&local_rep(&q).unwrap(), &d_trace(&line, &n), "f(x) Id")?;
    }
    let plane = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
    let (x1, x2) = (el(&plane, "x1"), el(&plane, "x2"));
    let zero = GradedElem::zero(&plane);
    let instances = [
        vec![vec![x1.pow(2), zero.clone()], vec![zero.clone(), &x2 + &x2.pow(2)]],
        vec![vec![x2.clone(), zero.clone()], vec![GradedElem::one(&plane), x2.clone()]],
    ];
    for n in &instances {
        let q = nijenhuis_field(&plane, n).map_err(|e| e.to_string())?;
        same(&local_rep(&q).unwrap(), &d_trace(&plane, n), "2x2")?;
    }
    Ok(())
}

fn c4_lifts_unimodular() -> Outcome {
    for e in zoo().unwrap() {
        let t = Antitangent::new(e.field.chart()).unwrap();
        let l = t.lie_derivative_lift(&e.field).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(local_rep(&l).unwrap().is_zero(), format!("{}: L_Q", e.name))?;
        let total = t.de_rham().try_add(&l).unwrap();
        ensure(local_rep(&total).unwrap().is_zero(), format!("{}: d + L_Q", e.name))?;
        let c = cotangent_lift(&e.field).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(local_rep(&c).unwrap().is_zero(), format!("{}: cotangent lift", e.name))?;
    }
    Ok(())
}

fn c5_factor_two() -> Outcome {
    for e in zoo().unwrap() {
        let t = AnticotangentChart::new(e.field.chart()).unwrap();
        let lifted = anticotangent_lift(&e.field).map_err(|err| format!("{}: {err}", e.name))?;
        let want = t.lift(&local_rep(&e.field).unwrap()).unwrap().scale(&int(2));
        same(&local_rep(&lifted).unwrap(), &want, e.name)?;
    }
    let mut r = common::rng(50);
    let mut nontrivial = 0;
    for i in 0..200 {
        let base = common::chart(&mut r, 2, 2);
        let t = AnticotangentChart::new(&base).unwrap();
        let p = common::elem(&mut r, t.chart(), Parity::Even, 3, 4);
        let qp = hamiltonian_vf_odd(&t, &p).unwrap();
        let lap = bv_laplacian(&t, &p, None).unwrap();
        nontrivial += usize::from(!lap.is_zero());
        same(&raw_divergence(&qp), &lap.scale(&int(2)), &format!("random P #{i}"))?;
        if is_homological(&qp) {
            same(&local_rep(&qp).unwrap(), &lap.scale(&int(2)), &format!("random P #{i}"))?;
        }
    }
    ensure(nontrivial >= 50, format!("only {nontrivial} nonzero Laplacians"))
}

fn c6_mqk() -> Outcome {
    let fields = [zoo_field("drift"), lie_algebroid(&nonabelian()).unwrap(), lie_algebroid(&heisenberg()).unwrap()];
    for q in &fields {
        let t = Antitangent::new(q.chart()).unwrap();
        let sum = t.de_rham().try_add(&t.lie_derivative_lift(q).unwrap()).unwrap();
        let ch = t.chart();
        let mut count = 0;
        for m in monomials(ch.dim(), ch.odd_mask(), 4, 4) {
            let f = GradedElem::from_terms(ch, [(m.exps().to_vec(), int(1))]);
            same(&t.mqk_conjugate(q, &f).unwrap(), &sum.apply(&f).unwrap(), "MQK")?;
            count += 1;
        }
        ensure(count > 10, "too few monomials")?;
    }
    Ok(())
}

fn c7_lie_algebras() -> Outcome {
    let q = lie_algebroid(&nonabelian()).unwrap();
    let phi = local_rep(&q).unwrap();
    same(&phi, &-el(q.chart(), "xi1"), "nonabelian")?;
    let v = solve_exactness(&phi, &q, 4).unwrap();
    ensure(!v.is_exact() && v.record(4).complete, "nonabelian verdict must be complete and negative")?;
    for data in [heisenberg(), AlgebroidData::lie_algebra(&["xi1", "xi2"], &[], 6).unwrap()] {
        let q = lie_algebroid(&data).unwrap();
        let phi = local_rep(&q).unwrap();
        ensure(phi.is_zero(), "unimodular algebra")?;
        let v = solve_exactness(&phi, &q, 4).unwrap();
        ensure(v.witness().map(|w| w.is_zero()) == Some(true), "witness 0")?;
    }
    Ok(())
}

fn random_data(r: &mut rand_chacha::ChaCha8Rng, lie_only: bool) -> AlgebroidData {
    let base = Chart::from_names(&["x"], &[], 6).unwrap();
    let x = el(&base, "x");
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e1"), Coord::odd("e2")]).unwrap();
    let poly = |r: &mut rand_chacha::ChaCha8Rng| {
        (0..3).fold(GradedElem::zero(&base), |acc, k| {
            &acc + &x.pow(k).scale(&rat(r.gen_range(-3..=3), r.gen_range(1..=2)))
        })
    };
    for alpha in 0..2 {
        data.set_index(0, &[alpha], poly(r)).unwrap();
    }
    for gamma in 0..2 {
        data.set_index(1 + gamma, &[1, 0], poly(r)).unwrap();
        if !lie_only {
            data.set_index(1 + gamma, &[], poly(r)).unwrap();
        }
    }
    data
}

fn c8_algebroid_formulas() -> Outcome {
    let mut r = common::rng(80);
    for i in 0..40 {
        let data = random_data(&mut r, false);
        same(&assembled_divergence(&data).unwrap(), &data.l_infinity_formula().unwrap(), &format!("L-infinity #{i}"))?;
        let lie = random_data(&mut r, true);
        same(&assembled_divergence(&lie).unwrap(), &lie.lie_formula().unwrap(), &format!("Lie #{i}"))?;
        same(&lie.l_infinity_formula().unwrap(), &lie.lie_formula().unwrap(), &format!("Lie as L-infinity #{i}"))?;
    }
    // Q-algebroid over (x | t): Lie part plus the weight-zero part Q^a ∂_a + Q_α^γ ξ^α ∂_γ
    let base = Chart::from_names(&["x"], &["t"], 6).unwrap();
    let (x, t) = (el(&base, "x"), el(&base, "t"));
    let fibre = || vec![Coord::odd("e1"), Coord::odd("e2")];
    let poly = |r: &mut rand_chacha::ChaCha8Rng| {
        (0..3).fold(GradedElem::zero(&base), |acc, k| {
            &acc + &x.pow(k).scale(&rat(r.gen_range(-3..=3), r.gen_range(1..=2)))
        })
    };
    for _ in 0..40 {
        let mut lie = AlgebroidData::new(&base, fibre()).unwrap();
        let mut xi = AlgebroidData::new(&base, fibre()).unwrap();
        for alpha in 0..2 {
            lie.set("x", &[["e1", "e2"][alpha]], poly(&mut r)).unwrap();
            lie.set("t", &[["e1", "e2"][alpha]], &t * &poly(&mut r)).unwrap();
        }
        for g in ["e1", "e2"] {
            lie.set(g, &["e2", "e1"], &poly(&mut r) + &(&t * &t)).unwrap();
            for a in ["e1", "e2"] {
                xi.set(g, &[a], &t * &poly(&mut r)).unwrap();
            }
        }
        xi.set("x", &[], &t * &poly(&mut r)).unwrap();
        xi.set("t", &[], poly(&mut r)).unwrap();
        let total = lie.assemble().unwrap().try_add(&xi.assemble().unwrap()).unwrap();
        same(&raw_divergence(&total), &q_algebroid_formula(&lie, &xi).unwrap(), "Q-algebroid")?;
    }
    // homological instances through the checked entry points
    let base = Chart::from_names(&["x"], &[], 6).unwrap();
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e1"), Coord::odd("e2")]).unwrap();
    data.set("x", &["e1"], el(&base, "x")).unwrap();
    data.set("e2", &["e2", "e1"], GradedElem::one(&base)).unwrap();
    let q = lie_algebroid(&data).map_err(|e| e.to_string())?;
    same(&local_rep(&q).unwrap(), &data.lie_formula().unwrap(), "anchored Lie algebroid")?;
    same(&l_infinity_local_rep(&data).unwrap(), &data.lie_formula().unwrap(), "anchored, L-infinity")?;

    let super_base = Chart::from_names(&["x"], &["t"], 6).unwrap();
    let mut alg = AlgebroidData::new(&super_base, vec![Coord::odd("xi1"), Coord::odd("xi2")]).unwrap();
    alg.set("xi2", &["xi2", "xi1"], GradedElem::one(&super_base)).unwrap();
    let mut xi = AlgebroidData::new(&super_base, vec![Coord::odd("xi1"), Coord::odd("xi2")]).unwrap();
    xi.set("x", &[], &el(&super_base, "x") * &el(&super_base, "t")).unwrap();
    let sum = q_algebroid_sum(&lie_algebroid(&alg).unwrap(), &xi.assemble().unwrap()).map_err(|e| e.to_string())?;
    same(&local_rep(&sum).unwrap(), &q_algebroid_formula(&alg, &xi).unwrap(), "Q-algebroid")?;
    Ok(())
}

fn c9_higher_poisson() -> Outcome {
    // quadratic: P = ½ P^{ab} x*_b x*_a on an even base
    let mut r = common::rng(90);
    let base = Chart::from_names(&["x1", "x2", "x3"], &[], 6).unwrap();
    let t = AnticotangentChart::new(&base).unwrap();
    for _ in 0..20 {
        let mut pab = vec![vec![GradedElem::zero(t.chart()); 3]; 3];
        for a in 0..3 {
            for b in a + 1..3 {
                let f = common::elem(&mut r, &base, Parity::Even, 2, 3);
                pab[a][b] = t.lift(&f).unwrap();
                pab[b][a] = -t.lift(&f).unwrap();
            }
        }
        let mut p = GradedElem::zero(t.chart());
        let mut want = GradedElem::zero(t.chart());
        for a in 0..3 {
            for b in 0..3 {
                p = &p + &(&(&pab[a][b] * &t.x_star(b)) * &t.x_star(a)).scale(&rat(1, 2));
                want = &want + &(&pab[a][b].left_partial(a) * &t.x_star(b));
            }
        }
        same(&bv_laplacian(&t, &p, None).unwrap(), &want, "quadratic")?;
    }

    // even P = P0 + P^a x*_a + ½ P^{ab} x*_b x*_a + (1/3!) P^{abc} x*_c x*_b x*_a over (x1,x2,x3 | s),
    // with odd P^a, P^{abc} carried by the parameter s and indices over the even coordinates
    let base = Chart::from_names(&["x1", "x2", "x3"], &["s"], 6).unwrap();
    let t = AnticotangentChart::new(&base).unwrap();
    let s = t.x(3);
    let lift = |f: &GradedElem| t.lift(f).unwrap();
    let eps = |a: usize, b: usize, c: usize| -> i64 {
        if a == b || b == c || a == c {
            return 0;
        }
        let inversions = (a > b) as i64 + (a > c) as i64 + (b > c) as i64;
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    };
    for _ in 0..10 {
        let p0 = lift(&common::elem(&mut r, &base, Parity::Even, 3, 3));
        let pa: Vec<GradedElem> = (0..3).map(|_| &s * &lift(&common::elem(&mut r, &base, Parity::Even, 2, 2))).collect();
        let g = lift(&common::elem(&mut r, &base, Parity::Even, 2, 3));
        let h = lift(&common::elem(&mut r, &base, Parity::Even, 2, 3));
        let mut pab = vec![vec![GradedElem::zero(t.chart()); 3]; 3];
        pab[0][1] = h.clone();
        pab[1][0] = -h.clone();
        pab[1][2] = &h * &t.x(0);
        pab[2][1] = -(&h * &t.x(0));
        let mut p = p0.clone();
        let mut want = GradedElem::zero(t.chart());
        for a in 0..3 {
            p = &p + &(&pa[a] * &t.x_star(a));
            want = &want + &pa[a].left_partial(a);
            for b in 0..3 {
                p = &p + &(&(&pab[a][b] * &t.x_star(b)) * &t.x_star(a)).scale(&rat(1, 2));
                want = &want + &(&pab[a][b].left_partial(a) * &t.x_star(b));
                for c in 0..3 {
                    let e = eps(a, b, c);
                    if e == 0 {
                        continue;
                    }
                    let pabc = (&s * &g).scale_int(e);
                    p = &p + &(&(&(&pabc * &t.x_star(c)) * &t.x_star(b)) * &t.x_star(a)).scale(&rat(1, 6));
                    want = &want + &(&(&pabc.left_partial(a) * &t.x_star(c)) * &t.x_star(b)).scale(&rat(1, 2));
                }
            }
        }
        ensure(p.has_parity(Parity::Even), "P must be even")?;
        same(&bv_laplacian(&t, &p, None).unwrap(), &want, "order three")?;
        ensure(bv_laplacian(&t, &p0, None).unwrap().is_zero(), "order zero contributes")?;
    }
    Ok(())
}

fn c10_linear_poisson() -> Outcome {
    let base = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
    let t = AnticotangentChart::new(&base).unwrap();
    let p = &(&t.x(1) * &t.x_star(1)) * &t.x_star(0);
    ensure(schouten(&t, &p, &p).unwrap().is_zero(), "[[P,P]] = 0")?;
    let qp = schouten_vf(&t, &p).unwrap();
    let phi = bv_laplacian(&t, &p, None).unwrap();
    same(&phi, &-t.x_star(0), "Delta P")?;
    same(&local_rep(&qp).unwrap(), &t.x_star(0).scale(&int(-2)), "phi(Q_P)")?;
    let v = solve_exactness(&phi, &qp, 6).unwrap();
    ensure(!v.is_exact(), "unexpected witness")?;
    ensure(!v.record(6).complete, "verdict must be flagged incomplete")
}

fn c11_double() -> Outcome {
    let line = Chart::from_names(&["x"], &[], 6).unwrap();
    let mut tangent = AlgebroidData::new(&line, vec![Coord::odd("e")]).unwrap();
    tangent.set("x", &["e"], GradedElem::one(&line)).unwrap();
    for (name, data) in [("tangent of the line", tangent), ("[e1,e2] = e2", nonabelian()), ("heisenberg", heisenberg())] {
        let d = double_from_algebroid(&data).map_err(|e| format!("{name}: {e}"))?;
        ensure(d.q01().bracket(d.q10()).unwrap().is_zero(), format!("{name}: commuting"))?;
        ensure(is_homological(&d.total()), format!("{name}: total homological"))?;
        ensure(double_modular_rep(&d).unwrap().is_zero(), format!("{name}: unimodular"))?;
    }
    Ok(())
}

fn c12_additivity_and_anchor() -> Outcome {
    let entries = zoo().unwrap();
    let small: Vec<_> = entries.iter().filter(|e| e.field.chart().dim() <= 4).collect();
    for a in &small {
        for b in &small {
            let p = product(&a.field, &b.field).unwrap();
            let want = &p.pull_first(&local_rep(&a.field).unwrap()).unwrap()
                + &p.pull_second(&local_rep(&b.field).unwrap()).unwrap();
            same(&local_rep(&p.field).unwrap(), &want, &format!("{} x {}", a.name, b.name))?;
        }
    }
    for name in ["drift", "nonabelian_2d", "nijenhuis_diag"] {
        let q = zoo_field(name);
        let t = Antitangent::new(q.chart()).unwrap();
        let rel = relative_rep(
            &anchor(&q).unwrap(),
            &q,
            &t.de_rham(),
            &BerezinVolume::coordinate(q.chart()),
            &BerezinVolume::coordinate(t.chart()),
        )
        .unwrap();
        same(&rel, &local_rep(&q).unwrap(), name)?;
    }
    Ok(())
}

fn c13_brackets() -> Outcome {
    laws::vector_field_jacobi();
    laws::poisson_jacobi();
    laws::schouten_jacobi();
    Ok(())
}

fn c14_oracle() -> Outcome {
    oracle::products_and_derivatives();
    oracle::fields_brackets_and_homological();
    oracle::divergence_by_integration_by_parts();
    oracle::exactness_matches_rank();
    oracle::berezinian_through_operators();
    oracle::poisson_on_odd_cotangent();
    Ok(())
}

fn c15_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qmanifold");
    let out = Command::new(bin).arg("verify-examples").output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), String::from_utf8_lossy(&out.stdout).to_string())?;
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scripts");
    for (name, src) in CORPUS {
        let path = format!("{dir}/{name}");
        let on_disk = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure(on_disk == src, format!("{name}: bundled copy differs from disk"))?;
        let out = Command::new(bin).arg("fmt").arg(&path).output().map_err(|e| e.to_string())?;
        ensure(out.status.success() && out.stdout == on_disk.as_bytes(), format!("{name}: fmt is not byte-stable"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("divergence laws", c1_divergence_laws),
        ("closedness over the zoo", c2_closedness),
        ("nijenhuis trace formula", c3_nijenhuis),
        ("unimodularity of lifts", c4_lifts_unimodular),
        ("factor-two law", c5_factor_two),
        ("MQK identity", c6_mqk),
        ("Lie algebra classes", c7_lie_algebras),
        ("L-infinity and Q-algebroid formulas", c8_algebroid_formulas),
        ("higher Poisson formulas", c9_higher_poisson),
        ("linear Poisson instance", c10_linear_poisson),
        ("double Lie algebroids", c11_double),
        ("additivity and anchor", c12_additivity_and_anchor),
        ("bracket laws", c13_brackets),
        ("oracle equivalence", c14_oracle),
        ("CLI and golden corpus", c15_cli),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(o) => o,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        match outcome {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
