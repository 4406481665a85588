//! Berezin volumes, divergence of vector fields and the Berezinian.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{fmt_rational, Chart, ChartMorphism, GradedElem, Parity, Rational};
use crate::error::{Error, Result};
use crate::geometry::VectorField;

/// A Berezin volume `scale · exp(g) · D[x]`; the exponential is never expanded.
#[derive(Clone, PartialEq, Eq)]
pub struct BerezinVolume {
    chart: Chart,
    scale: Rational,
    log_density: GradedElem,
}

impl BerezinVolume {
    /// The coordinate volume `D[x]`.
    pub fn coordinate(chart: &Chart) -> Self {
        BerezinVolume {
            chart: chart.clone(),
            scale: Rational::one(),
            log_density: GradedElem::zero(chart),
        }
    }

    pub fn new(chart: &Chart, scale: Rational, log_density: GradedElem) -> Result<Self> {
        log_density.chart().ensure_same(chart, "log density")?;
        if !scale.is_positive() {
            return Err(Error::Orientation("volume scale must be positive".into()));
        }
        if !log_density.has_parity(Parity::Even) {
            return Err(Error::ParityMismatch("log density must be even".into()));
        }
        if !log_density.constant_term().is_zero() {
            return Err(Error::InvalidStructure(
                "log density must have zero constant term (put it in the scale)".into(),
            ));
        }
        Ok(BerezinVolume {
            chart: chart.clone(),
            scale,
            log_density,
        })
    }

    /// `exp(g) · D[x]`.
    pub fn exp(log_density: GradedElem) -> Result<Self> {
        let chart = log_density.chart().clone();
        BerezinVolume::new(&chart, Rational::one(), log_density)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn log_density(&self) -> &GradedElem {
        &self.log_density
    }

    /// `exp(h)·ρ` for even `h` with zero constant term.
    pub fn rescale(&self, h: &GradedElem) -> Result<Self> {
        BerezinVolume::new(&self.chart, self.scale.clone(), &self.log_density + h)
    }
}

impl fmt::Display for BerezinVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.chart.coords().iter().map(|c| c.name.as_str()).collect();
        write!(
            f,
            "{} * exp({}) D[{}]",
            fmt_rational(&self.scale),
            self.log_density,
            names.join(", ")
        )
    }
}

impl fmt::Debug for BerezinVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BerezinVolume({})", self)
    }
}

/// `Σ_a (−1)^{ã(X̃+1)} ∂_a X^a`, the divergence for the coordinate volume.
pub(crate) fn coordinate_divergence(x: &VectorField) -> GradedElem {
    let chart = x.chart();
    let mut out = GradedElem::zero(chart);
    for (a, comp) in x.components().iter().enumerate() {
        if comp.is_zero() {
            continue;
        }
        let d = comp.left_partial(a);
        let flip = chart.parity(a).is_odd() && x.parity().is_even();
        out = if flip { &out - &d } else { &out + &d };
    }
    out
}

/// `Div_ρ X`, the density of `L_X ρ` relative to `ρ`: coordinate divergence plus `X(g)`.
pub fn divergence(x: &VectorField, rho: &BerezinVolume) -> Result<GradedElem> {
    x.chart().ensure_same(rho.chart(), "divergence")?;
    let base = coordinate_divergence(x);
    if rho.log_density.is_zero() {
        return Ok(base);
    }
    Ok(&base + &x.apply(&rho.log_density)?)
}

/// The density factor of `L_X ρ` relative to `ρ`; equal to [`divergence`].
pub fn lie_derivative_volume(x: &VectorField, rho: &BerezinVolume) -> Result<GradedElem> {
    divergence(x, rho)
}

type Block = Vec<Vec<GradedElem>>;

/// An even supermatrix in block form `[[A, B], [C, D]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperMatrix {
    chart: Chart,
    a: Block,
    b: Block,
    c: Block,
    d: Block,
}

fn check_block(block: &Block, rows: usize, cols: usize, parity: Parity, chart: &Chart, name: &str) -> Result<()> {
    if block.len() != rows || block.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension(format!("block {name} must be {rows}x{cols}")));
    }
    for e in block.iter().flatten() {
        e.chart().ensure_same(chart, "supermatrix entry")?;
        if !e.has_parity(parity) {
            return Err(Error::ParityMismatch(format!("block {name} entries must be {parity}")));
        }
    }
    Ok(())
}

impl SuperMatrix {
    /// `A` is p×p, `B` p×q, `C` q×p, `D` q×q; `A`, `D` even and `B`, `C` odd.
    pub fn new(chart: &Chart, a: Block, b: Block, c: Block, d: Block) -> Result<Self> {
        let p = a.len();
        let q = d.len();
        check_block(&a, p, p, Parity::Even, chart, "A")?;
        check_block(&b, p, q, Parity::Odd, chart, "B")?;
        check_block(&c, q, p, Parity::Odd, chart, "C")?;
        check_block(&d, q, q, Parity::Even, chart, "D")?;
        Ok(SuperMatrix {
            chart: chart.clone(),
            a,
            b,
            c,
            d,
        })
    }

    pub fn identity(chart: &Chart, p: usize, q: usize) -> Self {
        SuperMatrix {
            chart: chart.clone(),
            a: identity_block(chart, p),
            b: zero_block(chart, p, q),
            c: zero_block(chart, q, p),
            d: identity_block(chart, q),
        }
    }

    pub fn blocks(&self) -> (&Block, &Block, &Block, &Block) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn mul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.chart.ensure_same(&other.chart, "supermatrix product")?;
        if self.a.len() != other.a.len() || self.d.len() != other.d.len() {
            return Err(Error::Dimension("supermatrix formats differ".into()));
        }
        let (p, q, ch) = (self.a.len(), self.d.len(), &self.chart);
        let a = add_blocks(&mat_mul(&self.a, &other.a, p, ch), &mat_mul(&self.b, &other.c, p, ch));
        let b = add_blocks(&mat_mul(&self.a, &other.b, q, ch), &mat_mul(&self.b, &other.d, q, ch));
        let c = add_blocks(&mat_mul(&self.c, &other.a, p, ch), &mat_mul(&self.d, &other.c, p, ch));
        let d = add_blocks(&mat_mul(&self.c, &other.b, q, ch), &mat_mul(&self.d, &other.d, q, ch));
        SuperMatrix::new(&self.chart, a, b, c, d)
    }

    /// `Ber(M) = det(A − B D⁻¹ C) · det(D)⁻¹`.
    pub fn berezinian(&self) -> Result<GradedElem> {
        let d_inv = invert(&self.d, &self.chart)?;
        let (p, q) = (self.a.len(), self.d.len());
        let bd = mat_mul(&self.b, &d_inv, q, &self.chart);
        let bdc = mat_mul(&bd, &self.c, p, &self.chart);
        let schur: Block = self
            .a
            .iter()
            .zip(&bdc)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
            .collect();
        let det_d = determinant(&self.d, &self.chart);
        Ok(&determinant(&schur, &self.chart) * &det_d.inverse()?)
    }
}

/// Free-standing form of [`SuperMatrix::berezinian`].
pub fn berezinian(m: &SuperMatrix) -> Result<GradedElem> {
    m.berezinian()
}

fn zero_block(chart: &Chart, rows: usize, cols: usize) -> Block {
    vec![vec![GradedElem::zero(chart); cols]; rows]
}

fn identity_block(chart: &Chart, n: usize) -> Block {
    let mut m = zero_block(chart, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = GradedElem::one(chart);
    }
    m
}

fn add_blocks(x: &Block, y: &Block) -> Block {
    x.iter()
        .zip(y)
        .map(|(rx, ry)| rx.iter().zip(ry).map(|(a, b)| a + b).collect())
        .collect()
}

fn mat_mul(x: &Block, y: &Block, cols: usize, chart: &Chart) -> Block {
    let rows = x.len();
    let inner = y.len();
    let mut out = zero_block(chart, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = GradedElem::zero(chart);
            for k in 0..inner {
                if !x[i][k].is_zero() && !y[k][j].is_zero() {
                    acc = &acc + &(&x[i][k] * &y[k][j]);
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Determinant of a square block with even (hence commuting) entries, by cofactor expansion.
fn determinant(m: &Block, chart: &Chart) -> GradedElem {
    match m.len() {
        0 => GradedElem::one(chart),
        1 => m[0][0].clone(),
        n => {
            let mut acc = GradedElem::zero(chart);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Block = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor, chart);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Gauss–Jordan inverse of an even block whose reduction mod nilpotents is invertible.
fn invert(m: &Block, chart: &Chart) -> Result<Block> {
    let n = m.len();
    let mut work: Block = m.clone();
    let mut inv = identity_block(chart, n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].constant_term().is_zero())
            .ok_or_else(|| Error::NotInvertible("singular D-block".into()))?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let p_inv = work[col][col].inverse()?;
        for k in 0..n {
            work[col][k] = &work[col][k] * &p_inv;
            inv[col][k] = &inv[col][k] * &p_inv;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for k in 0..n {
                let w = &work[r][k] - &(&factor * &work[col][k]);
                let v = &inv[r][k] - &(&factor * &inv[col][k]);
                work[r][k] = w;
                inv[r][k] = v;
            }
        }
    }
    Ok(inv)
}

/// Jacobian supermatrix of `ψ`: rows are source coordinates, columns target
/// coordinates, entry `∂_a ψ^α`, even coordinates first in both.
pub fn jacobian(psi: &ChartMorphism) -> Result<SuperMatrix> {
    let src = psi.source();
    let tgt = psi.target();
    let split = |ch: &Chart| -> (Vec<usize>, Vec<usize>) {
        (0..ch.dim()).partition(|&i| ch.parity(i).is_even())
    };
    let (se, so) = split(src);
    let (te, to) = split(tgt);
    if se.len() != te.len() || so.len() != to.len() {
        return Err(Error::Dimension(format!(
            "Jacobian of a map {}|{} -> {}|{} is not square",
            se.len(),
            so.len(),
            te.len(),
            to.len()
        )));
    }
    let block = |rows: &[usize], cols: &[usize]| -> Block {
        rows.iter()
            .map(|&a| cols.iter().map(|&al| psi.image(al).left_partial(a)).collect())
            .collect()
    };
    SuperMatrix::new(
        src,
        block(&se, &te),
        block(&se, &to),
        block(&so, &te),
        block(&so, &to),
    )
}

/// Pull back a volume on the target of `ψ` to its source: `D[x] Ber(J) ρ(ψ(x))`.
pub fn pullback_volume(psi: &ChartMorphism, rho: &BerezinVolume) -> Result<BerezinVolume> {
    psi.target().ensure_same(rho.chart(), "pullback volume")?;
    let ber = jacobian(psi)?.berezinian()?;
    let c = ber.constant_term();
    if c.is_zero() {
        return Err(Error::NotInvertible("Jacobian Berezinian has zero constant term".into()));
    }
    if c.is_negative() {
        return Err(Error::Orientation("Jacobian Berezinian is negative".into()));
    }
    let normalised = ber.scale(&c.recip());
    let log_ber = normalised.log_unit()?;
    let g = rho.log_density.substitute(psi)?;
    // g∘ψ may pick up a constant term; fold it into nothing only if zero
    if !g.constant_term().is_zero() {
        return Err(Error::InvalidStructure(
            "pulled-back log density has a constant term (exp of a rational is not exact)".into(),
        ));
    }
    BerezinVolume::new(psi.source(), &rho.scale * &c, &g + &log_ber)
}
