//! Algebraic laws checked on seeded random inputs.

use super::*;
use qmanifold::berezin::{divergence, BerezinVolume};
use qmanifold::brackets::{
    bv_laplacian, first_order_qme_check, hamiltonian_vf_even, poisson, schouten, schouten_vf, AnticotangentChart,
    CotangentChart,
};
use qmanifold::constructions::zoo;
use qmanifold::modular::{is_closed, modular_rep, solve_exactness};
use qmanifold::{GradedElem, Parity};

fn sign(p: Parity, q: Parity) -> i64 {
    if p.is_odd() && q.is_odd() {
        -1
    } else {
        1
    }
}

pub fn divergence_laws() {
    let mut r = rng(1);
    let mut nontrivial = 0;
    for i in 0..600 {
        let ch = chart(&mut r, 3, 3);
        let rho = volume(&mut r, &ch);
        let (px, py, pf) = (parity(&mut r), parity(&mut r), parity(&mut r));
        let x = field(&mut r, &ch, px, 1);
        let y = field(&mut r, &ch, py, 1);
        let f = elem(&mut r, &ch, pf, 1, 3);
        let div_x = divergence(&x, &rho).unwrap();
        let div_y = divergence(&y, &rho).unwrap();

        // Div(fX) = f Div X + (−1)^{f̃X̃} X(f)
        let lhs = divergence(&x.mul_left(&f).unwrap(), &rho).unwrap();
        let rhs = &(&f * &div_x) + &x.apply(&f).unwrap().scale_int(sign(pf, px));
        assert_eq!(lhs, rhs, "instance {i}: Leibniz");

        // Div[X,Y] = X(Div Y) − (−1)^{X̃Ỹ} Y(Div X)
        let lhs = divergence(&x.bracket(&y).unwrap(), &rho).unwrap();
        nontrivial += usize::from(!lhs.is_zero());
        let rhs = &x.apply(&div_y).unwrap() - &y.apply(&div_x).unwrap().scale_int(sign(px, py));
        assert_eq!(lhs, rhs, "instance {i}: bracket");

        // Div_{e^h ρ} X = Div_ρ X + X(h)
        let h = reduced(&mut r, &ch, Parity::Even, 2, 3);
        let lhs = divergence(&x, &rho.rescale(&h).unwrap()).unwrap();
        let rhs = &div_x + &x.apply(&h).unwrap();
        assert_eq!(lhs, rhs, "instance {i}: change of volume");
    }
    assert!(nontrivial >= 300, "{nontrivial}");
}

pub fn vector_field_jacobi() {
    let mut r = rng(2);
    let mut nontrivial = 0;
    for i in 0..250 {
        let ch = chart(&mut r, 2, 3);
        let ps = [parity(&mut r), parity(&mut r), parity(&mut r)];
        let [x, y, z] = ps.map(|p| field(&mut r, &ch, p, 1));
        let lhs = x.bracket(&y.bracket(&z).unwrap()).unwrap();
        let a = x.bracket(&y).unwrap().bracket(&z).unwrap();
        let b = y.bracket(&x.bracket(&z).unwrap()).unwrap();
        let rhs = if sign(ps[0], ps[1]) == 1 { a.try_add(&b) } else { a.try_sub(&b) }.unwrap();
        nontrivial += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "instance {i}");
        // graded skew symmetry
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap().scale(&qmanifold::algebra::int(-sign(ps[0], ps[1])));
        assert_eq!(xy, yx, "instance {i}: skew");
    }
    assert!(nontrivial >= 100, "{nontrivial}");
}

pub fn poisson_jacobi() {
    let mut r = rng(3);
    let mut nontrivial = 0;
    for i in 0..250 {
        let base = chart(&mut r, 2, 1);
        let t = CotangentChart::new(&base).unwrap();
        let ch = t.chart().clone();
        let ps = [parity(&mut r), parity(&mut r), parity(&mut r)];
        let [f, g, h] = ps.map(|p| elem(&mut r, &ch, p, 2, 3));
        let br = |a: &GradedElem, b: &GradedElem| poisson(&t, a, b).unwrap();
        let lhs = br(&f, &br(&g, &h));
        let rhs = &br(&br(&f, &g), &h) + &br(&g, &br(&f, &h)).scale_int(sign(ps[0], ps[1]));
        nontrivial += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "instance {i}");
        assert_eq!(br(&f, &g), br(&g, &f).scale_int(-sign(ps[0], ps[1])), "instance {i}: skew");
    }
    assert!(nontrivial >= 100, "{nontrivial}");
}

pub fn schouten_jacobi() {
    let mut r = rng(4);
    let mut nontrivial = 0;
    for i in 0..250 {
        let base = chart(&mut r, 2, 1);
        let t = AnticotangentChart::new(&base).unwrap();
        let ch = t.chart().clone();
        let ps = [parity(&mut r), parity(&mut r), parity(&mut r)];
        let [f, g, h] = ps.map(|p| elem(&mut r, &ch, p, 2, 3));
        let br = |a: &GradedElem, b: &GradedElem| schouten(&t, a, b).unwrap();
        // ⟦F,⟦G,H⟧⟧ = ⟦⟦F,G⟧,H⟧ + (−1)^{(F̃+1)(G̃+1)} ⟦G,⟦F,H⟧⟧
        let shifted = sign(ps[0].flip(), ps[1].flip());
        let lhs = br(&f, &br(&g, &h));
        let rhs = &br(&br(&f, &g), &h) + &br(&g, &br(&f, &h)).scale_int(shifted);
        nontrivial += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "instance {i}");
        assert_eq!(br(&f, &g), br(&g, &f).scale_int(-shifted), "instance {i}: skew");
    }
    assert!(nontrivial >= 100, "{nontrivial}");
}

pub fn closedness_over_zoo() {
    let mut r = rng(5);
    for entry in zoo().unwrap() {
        for _ in 0..12 {
            let rho = volume(&mut r, entry.field.chart());
            let phi = modular_rep(&entry.field, &rho).unwrap();
            assert!(is_closed(&phi, &entry.field).unwrap(), "{}", entry.name);
            if let Some(unimodular) = entry.unimodular {
                let v = solve_exactness(&phi, &entry.field, 6).unwrap();
                assert_eq!(v.is_exact(), unimodular, "{}: {phi}", entry.name);
            }
        }
    }
}

pub fn laplacian_squares_to_zero() {
    let mut r = rng(6);
    let mut nontrivial = 0;
    for i in 0..200 {
        let base = chart(&mut r, 3, 1);
        let t = AnticotangentChart::new(&base).unwrap();
        let pp = parity(&mut r);
        let p = elem(&mut r, t.chart(), pp, 3, 4);
        let once = bv_laplacian(&t, &p, None).unwrap();
        nontrivial += usize::from(!once.is_zero());
        assert!(bv_laplacian(&t, &once, None).unwrap().is_zero(), "instance {i}: {p}");
    }
    assert!(nontrivial >= 100, "{nontrivial}");
}

pub fn hamiltonian_fields() {
    let mut r = rng(7);
    for i in 0..200 {
        let base = chart(&mut r, 2, 1);
        let ct = CotangentChart::new(&base).unwrap();
        let ps = parity(&mut r);
        let s = elem(&mut r, ct.chart(), ps, 2, 3);
        let pf = parity(&mut r);
        let f = elem(&mut r, ct.chart(), pf, 2, 3);
        let x = hamiltonian_vf_even(&ct, &s).unwrap();
        assert_eq!(x.apply(&f).unwrap(), poisson(&ct, &s, &f).unwrap(), "instance {i}");
        let div = divergence(&x, &BerezinVolume::coordinate(ct.chart())).unwrap();
        assert!(div.is_zero(), "instance {i}: Liouville fails for {s}");

        let at = AnticotangentChart::new(&base).unwrap();
        let pp = parity(&mut r);
        let p = elem(&mut r, at.chart(), pp, 2, 3);
        let pg = parity(&mut r);
        let g = elem(&mut r, at.chart(), pg, 2, 3);
        let q = schouten_vf(&at, &p).unwrap();
        assert_eq!(q.apply(&g).unwrap(), schouten(&at, &p, &g).unwrap(), "instance {i}");
    }
}

pub fn qme_verdicts() {
    let mut r = rng(8);
    let base = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
    let t = AnticotangentChart::new(&base).unwrap();
    let bivector = &t.x_star(1) * &t.x_star(0);
    for i in 0..40 {
        let c = int(r.gen_range(1..=4));
        let p = bivector.scale(&c);
        let g = t.lift(&reduced(&mut r, &base, Parity::Even, 3, 3)).unwrap();
        let rho = BerezinVolume::exp(g.clone()).unwrap();
        let half = g.scale(&rat(1, 2));
        assert!(first_order_qme_check(&t, &p, &half, Some(&rho)).unwrap(), "instance {i}");
        let moved = !schouten(&t, &p, &g).unwrap().is_zero();
        let zero = GradedElem::zero(t.chart());
        assert_eq!(first_order_qme_check(&t, &p, &zero, Some(&rho)).unwrap(), !moved, "instance {i}");
    }

    let linear = &(&t.x(0) * &t.x_star(1)) * &t.x_star(0);
    let lap = bv_laplacian(&t, &linear, None).unwrap();
    assert!(!solve_exactness(&lap, &schouten_vf(&t, &linear).unwrap(), 6).unwrap().is_exact());
    for _ in 0..40 {
        let p1 = t.lift(&elem(&mut r, &base, Parity::Even, 3, 4)).unwrap();
        assert!(!first_order_qme_check(&t, &linear, &p1, None).unwrap(), "{p1}");
    }
    let non_master = &linear + &t.x(1);
    assert!(first_order_qme_check(&t, &non_master, &GradedElem::zero(t.chart()), None).is_err());
}
