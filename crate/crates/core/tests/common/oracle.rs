//! The Grassmann algebra on n generators as a 2^n-dimensional space, with
//! multiplication and left derivatives as explicit matrices.

use num_traits::{One, Zero};
use qmanifold::algebra::int;
use qmanifold::berezin::divergence;
use qmanifold::brackets::{poisson, CotangentChart};
use qmanifold::geometry::is_homological;
use qmanifold::modular::solve_exactness;
use qmanifold::{BerezinVolume, Chart, GradedElem, Parity, Rational, SuperMatrix, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Mat = Vec<Vec<Rational>>;
type Vector = Vec<Rational>;

struct Model {
    n: usize,
    size: usize,
    create: Vec<Mat>,
    annihilate: Vec<Mat>,
}

fn zeros(size: usize) -> Mat {
    vec![vec![Rational::zero(); size]; size]
}

fn identity(size: usize) -> Mat {
    let mut m = zeros(size);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn mat_add(a: &Mat, b: &Mat, sign: i64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * int(sign)).collect())
        .collect()
}

fn mat_scale(a: &Mat, c: &Rational) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn apply(a: &Mat, v: &Vector) -> Vector {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Gauss-Jordan inverse; `None` if singular.
fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut w = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !w[r][col].is_zero())?;
        w.swap(col, piv);
        inv.swap(col, piv);
        let p = w[col][col].clone();
        for j in 0..n {
            w[col][j] = &w[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !w[r][col].is_zero() {
                let f = w[r][col].clone();
                for j in 0..n {
                    let (wc, ic) = (w[col][j].clone(), inv[col][j].clone());
                    w[r][j] -= &f * wc;
                    inv[r][j] -= &f * ic;
                }
            }
        }
    }
    Some(inv)
}

fn rank(cols: &[Vector]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vector> = cols.to_vec();
    let width = rows[0].len();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn below(mask: usize, i: usize) -> u32 {
    (mask & ((1 << i) - 1)).count_ones()
}

impl Model {
    fn new(n: usize) -> Self {
        let size = 1 << n;
        let mut create = Vec::new();
        let mut annihilate = Vec::new();
        for i in 0..n {
            let mut c = zeros(size);
            let mut d = zeros(size);
            for s in 0..size {
                let sign = if below(s, i).is_multiple_of(2) { int(1) } else { int(-1) };
                if s & (1 << i) == 0 {
                    c[s | (1 << i)][s] = sign;
                } else {
                    d[s & !(1 << i)][s] = sign;
                }
            }
            create.push(c);
            annihilate.push(d);
        }
        Model {
            n,
            size,
            create,
            annihilate,
        }
    }

    /// Left multiplication by `f`, given by coefficients on increasing monomials.
    fn mult(&self, f: &Vector) -> Mat {
        let mut out = zeros(self.size);
        for (s, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = identity(self.size);
            for i in (0..self.n).rev() {
                if s & (1 << i) != 0 {
                    m = mat_mul(&self.create[i], &m);
                }
            }
            out = mat_add(&out, &mat_scale(&m, c), 1);
        }
        out
    }

    fn unit(&self) -> Vector {
        let mut v = vec![Rational::zero(); self.size];
        v[0] = Rational::one();
        v
    }

    fn field(&self, comps: &[Vector]) -> Mat {
        let mut out = zeros(self.size);
        for (a, c) in comps.iter().enumerate() {
            out = mat_add(&out, &mat_mul(&self.mult(c), &self.annihilate[a]), 1);
        }
        out
    }

    /// The Berezin integral: the top coefficient.
    fn integral(&self, v: &Vector) -> Rational {
        v[self.size - 1].clone()
    }
}

fn to_vec(f: &GradedElem, size: usize) -> Vector {
    let mut v = vec![Rational::zero(); size];
    for (m, c) in f.terms() {
        let mask = m.exps().iter().enumerate().fold(0, |acc, (i, &e)| if e > 0 { acc | (1 << i) } else { acc });
        v[mask] = c.clone();
    }
    v
}

fn from_vec(chart: &Chart, v: &Vector) -> GradedElem {
    let n = chart.dim();
    GradedElem::from_terms(
        chart,
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| ((0..n).map(|i| ((s >> i) & 1) as u8).collect(), c.clone())),
    )
}

fn random_vec(rng: &mut ChaCha8Rng, size: usize, parity: Option<Parity>, terms: usize) -> Vector {
    let mut v = vec![Rational::zero(); size];
    for _ in 0..terms {
        let s = rng.gen_range(0..size);
        let ok = match parity {
            Some(p) => (s.count_ones() % 2 == 1) == p.is_odd(),
            None => true,
        };
        if ok {
            v[s] = int(rng.gen_range(-3..=3));
        }
    }
    v
}

fn odd_chart(n: usize) -> Chart {
    let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    Chart::from_names(&[], &refs, 6).unwrap()
}

fn parity_of(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

pub fn products_and_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5 {
        let model = Model::new(n);
        let chart = odd_chart(n);
        for _ in 0..20 {
            let fv = random_vec(&mut rng, model.size, None, 4);
            let gv = random_vec(&mut rng, model.size, None, 4);
            let (f, g) = (from_vec(&chart, &fv), from_vec(&chart, &gv));
            let prod = apply(&model.mult(&fv), &gv);
            assert_eq!(to_vec(&(&f * &g), model.size), prod, "n={n}");
            for i in 0..n {
                assert_eq!(to_vec(&f.left_partial(i), model.size), apply(&model.annihilate[i], &fv));
            }
        }
    }
}

pub fn fields_brackets_and_homological() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=5 {
        let model = Model::new(n);
        let chart = odd_chart(n);
        for _ in 0..8 {
            let (px, py) = (parity_of(&mut rng), parity_of(&mut rng));
            let mk = |rng: &mut ChaCha8Rng, p: Parity| -> (Vec<Vector>, VectorField) {
                // component a has parity p + 1 since ∂_a is odd
                let comps: Vec<Vector> = (0..n).map(|_| random_vec(rng, model.size, Some(p.flip()), 2)).collect();
                let f = VectorField::new(&chart, p, comps.iter().map(|c| from_vec(&chart, c)).collect()).unwrap();
                (comps, f)
            };
            let (cx, x) = mk(&mut rng, px);
            let (cy, y) = mk(&mut rng, py);
            let (ox, oy) = (model.field(&cx), model.field(&cy));
            let sign = if px.is_odd() && py.is_odd() { 1 } else { -1 };
            let want = mat_add(&mat_mul(&ox, &oy), &mat_mul(&oy, &ox), sign);
            let got = x.bracket(&y).unwrap();
            let got_op = model.field(&got.components().iter().map(|c| to_vec(c, model.size)).collect::<Vec<_>>());
            assert_eq!(got_op, want, "n={n}");

            let fv = random_vec(&mut rng, model.size, None, 5);
            assert_eq!(to_vec(&x.apply(&from_vec(&chart, &fv)).unwrap(), model.size), apply(&ox, &fv));

            if px.is_odd() {
                let square_zero = mat_mul(&ox, &ox).iter().all(|r| r.iter().all(|c| c.is_zero()));
                assert_eq!(is_homological(&x), square_zero);
            }
        }
    }
}

pub fn divergence_by_integration_by_parts() {
    // ∫ X(g) = −(−1)^{X̃ g̃} ∫ g·Div X for every homogeneous g
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=5 {
        let model = Model::new(n);
        let chart = odd_chart(n);
        let rho = BerezinVolume::coordinate(&chart);
        for _ in 0..6 {
            let p = parity_of(&mut rng);
            let comps: Vec<Vector> = (0..n).map(|_| random_vec(&mut rng, model.size, Some(p.flip()), 3)).collect();
            let x = VectorField::new(&chart, p, comps.iter().map(|c| from_vec(&chart, c)).collect()).unwrap();
            let div = to_vec(&divergence(&x, &rho).unwrap(), model.size);
            let op = model.field(&comps);
            for s in 0..model.size {
                let mut g = vec![Rational::zero(); model.size];
                g[s] = Rational::one();
                let lhs = model.integral(&apply(&op, &g));
                let gd = model.integral(&apply(&model.mult(&g), &div));
                let odd_pair = p.is_odd() && s.count_ones() % 2 == 1;
                let rhs = if odd_pair { gd } else { -gd };
                assert_eq!(lhs, rhs, "n={n} g=basis {s}");
            }
        }
    }
}

pub fn exactness_matches_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut seen = [0usize; 2];
    for n in 2..=5 {
        let model = Model::new(n);
        let chart = odd_chart(n);
        let mut tried = 0;
        while tried < 6 {
            // homological fields from random structure constants of 2-step nilpotent or solvable shape
            let comps: Vec<Vector> = (0..n).map(|_| random_vec(&mut rng, model.size, Some(Parity::Even), 2)).collect();
            let Ok(q) = VectorField::new(&chart, Parity::Odd, comps.iter().map(|c| from_vec(&chart, c)).collect()) else {
                continue;
            };
            if !is_homological(&q) {
                continue;
            }
            tried += 1;
            let op = model.field(&comps);
            for _ in 0..4 {
                let p = parity_of(&mut rng);
                let gv = random_vec(&mut rng, model.size, Some(p.flip()), 3);
                let fv0 = apply(&op, &gv);
                // add a closed but possibly non-exact part: the image of a basis vector under Q is closed
                let hv = random_vec(&mut rng, model.size, Some(p), 2);
                let hv_closed = apply(&op, &hv).iter().all(|c| c.is_zero());
                let fv: Vector = if hv_closed {
                    fv0.iter().zip(&hv).map(|(a, b)| a + b).collect()
                } else {
                    fv0
                };
                let f = from_vec(&chart, &fv);
                let verdict = solve_exactness(&f, &q, 6).unwrap();
                let image: Vec<Vector> = (0..model.size)
                    .filter(|s| (s.count_ones() % 2 == 1) != p.is_odd())
                    .map(|s| {
                        let mut e = vec![Rational::zero(); model.size];
                        e[s] = Rational::one();
                        apply(&op, &e)
                    })
                    .collect();
                let mut with_f = image.clone();
                with_f.push(fv.clone());
                let exact = rank(&with_f) == rank(&image);
                assert_eq!(verdict.is_exact(), exact, "n={n}");
                seen[exact as usize] += 1;
                assert!(verdict.record(6).complete);
                if let Some(w) = verdict.witness() {
                    assert_eq!(apply(&op, &to_vec(w, model.size)), fv);
                }
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "both verdicts exercised: {seen:?}");
}

pub fn berezinian_through_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 2..=5 {
        let model = Model::new(n);
        let chart = odd_chart(n);
        for _ in 0..4 {
            // 1|1 supermatrix with invertible even entries
            let even = |rng: &mut ChaCha8Rng| {
                let mut v = random_vec(rng, model.size, Some(Parity::Even), 3);
                v[0] = int(rng.gen_range(1..=3));
                v
            };
            let (a, d) = (even(&mut rng), even(&mut rng));
            let b = random_vec(&mut rng, model.size, Some(Parity::Odd), 3);
            let c = random_vec(&mut rng, model.size, Some(Parity::Odd), 3);
            let e = |v: &Vector| from_vec(&chart, v);
            let m = SuperMatrix::new(&chart, vec![vec![e(&a)]], vec![vec![e(&b)]], vec![vec![e(&c)]], vec![vec![e(&d)]])
                .unwrap();
            let ber = m.berezinian().unwrap();

            let d_inv = inverse(&model.mult(&d)).unwrap();
            let schur = mat_add(&model.mult(&a), &mat_mul(&mat_mul(&model.mult(&b), &d_inv), &model.mult(&c)), -1);
            let want = apply(&mat_mul(&schur, &d_inv), &model.unit());
            assert_eq!(to_vec(&ber, model.size), want, "n={n}");
        }
    }
}

pub fn poisson_on_odd_cotangent() {
    // T*(0|k) has odd momenta, so the total chart is purely odd
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for k in 1..=2 {
        let base = odd_chart(k);
        let t = CotangentChart::new(&base).unwrap();
        let chart = t.chart().clone();
        let n = chart.dim();
        let model = Model::new(n);
        for _ in 0..10 {
            let (pf, pg) = (parity_of(&mut rng), parity_of(&mut rng));
            let fv = random_vec(&mut rng, model.size, Some(pf), 4);
            let gv = random_vec(&mut rng, model.size, Some(pg), 4);
            let got = poisson(&t, &from_vec(&chart, &fv), &from_vec(&chart, &gv)).unwrap();
            // {F,G} = Σ_a (−1)^{ã(F̃+1)} ∂_{p_a}F ∂_{x^a}G − (−1)^{ãF̃} ∂_{x^a}F ∂_{p_a}G, ã = 1
            let mut want = vec![Rational::zero(); model.size];
            for a in 0..k {
                let (x, p) = (a, t.fibre_index(a));
                let dp_f = apply(&model.annihilate[p], &fv);
                let dx_g = apply(&model.annihilate[x], &gv);
                let dx_f = apply(&model.annihilate[x], &fv);
                let dp_g = apply(&model.annihilate[p], &gv);
                let s1 = if pf.is_odd() { 1 } else { -1 };
                let s2 = if pf.is_odd() { -1 } else { 1 };
                let t1 = apply(&model.mult(&dp_f), &dx_g);
                let t2 = apply(&model.mult(&dx_f), &dp_g);
                for i in 0..model.size {
                    want[i] += &t1[i] * int(s1) - &t2[i] * int(s2);
                }
            }
            assert_eq!(to_vec(&got, model.size), want, "k={k}");
        }
    }
}
