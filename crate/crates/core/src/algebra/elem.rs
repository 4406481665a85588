use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{abs, fmt_rational, int, is_one, Chart, ChartMorphism, Monomial, Parity, Rational};
use crate::error::{Error, Result};

/// An element of the truncated graded function algebra of a chart.
///
/// Terms are kept in canonical order (total degree, then chart order) with
/// no zero coefficients and no even degree above the chart truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedElem {
    chart: Chart,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedElem {
    pub fn zero(chart: &Chart) -> Self {
        GradedElem {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        GradedElem::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Chart, value: Rational) -> Self {
        let mut e = GradedElem::zero(chart);
        e.add_term(Monomial::one(chart.dim()), value);
        e
    }

    pub fn from_int(chart: &Chart, value: i64) -> Self {
        GradedElem::constant(chart, int(value))
    }

    /// The coordinate function at position `index`.
    pub fn coord_at(chart: &Chart, index: usize) -> Self {
        let mut exps = vec![0u8; chart.dim()];
        exps[index] = 1;
        let m = Monomial::from_exps(exps, chart.odd_mask()).expect("single factor");
        let mut e = GradedElem::zero(chart);
        e.add_term(m, Rational::one());
        e
    }

    pub fn coord(chart: &Chart, name: &str) -> Result<Self> {
        Ok(GradedElem::coord_at(chart, chart.index_of(name)?))
    }

    /// Builds an element from `(exponents, coefficient)` pairs; odd exponents
    /// above one vanish and even degrees above the truncation are dropped.
    pub fn from_terms<I>(chart: &Chart, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u8>, Rational)>,
    {
        let mut e = GradedElem::zero(chart);
        for (exps, c) in terms {
            assert_eq!(exps.len(), chart.dim(), "exponent vector length");
            if let Some(m) = Monomial::from_exps(exps, chart.odd_mask()) {
                e.add_term(m, c);
            }
        }
        e
    }

    /// Adds `c·m`, respecting truncation and pruning zeros.
    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.even_degree() > self.chart.truncation() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.chart.dim()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Highest even degree present.
    pub fn even_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::even_degree).max().unwrap_or(0)
    }

    /// Parity of a homogeneous element; zero counts as even, `None` when mixed.
    pub fn parity(&self) -> Option<Parity> {
        let mut bits = self.terms.keys().map(Monomial::parity_bit);
        match bits.next() {
            None => Some(Parity::Even),
            Some(b) => bits.all(|o| o == b).then(|| Parity::from_bit(b)),
        }
    }

    /// True for zero or a homogeneous element of the given parity.
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity_bit() == p.bit())
    }

    pub fn homogeneous_parity(&self, what: &str) -> Result<Parity> {
        self.parity()
            .ok_or_else(|| Error::Inhomogeneous(format!("{what} is not homogeneous")))
    }

    pub fn part(&self, p: Parity) -> GradedElem {
        GradedElem {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity_bit() == p.bit())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn even_part(&self) -> GradedElem {
        self.part(Parity::Even)
    }

    pub fn odd_part(&self) -> GradedElem {
        self.part(Parity::Odd)
    }

    pub fn scale(&self, q: &Rational) -> GradedElem {
        if q.is_zero() {
            return GradedElem::zero(&self.chart);
        }
        GradedElem {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> GradedElem {
        self.scale(&int(n))
    }

    pub fn try_add(&self, other: &GradedElem) -> Result<GradedElem> {
        self.chart.ensure_same(&other.chart, "add")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GradedElem) -> Result<GradedElem> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &GradedElem) -> Result<GradedElem> {
        self.chart.ensure_same(&other.chart, "mul")?;
        let d = self.chart.truncation();
        let mut out = GradedElem::zero(&self.chart);
        for (m1, c1) in &self.terms {
            let d1 = m1.even_degree();
            for (m2, c2) in &other.terms {
                if d1 + m2.even_degree() > d {
                    continue;
                }
                if let Some((m, sign)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> GradedElem {
        let mut acc = GradedElem::one(&self.chart);
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = &acc * self;
        }
        acc
    }

    /// Left partial derivative along the coordinate at `index`.
    pub fn left_partial(&self, index: usize) -> GradedElem {
        let odd = self.chart.parity(index).is_odd();
        let mut out = GradedElem::zero(&self.chart);
        for (m, c) in &self.terms {
            if let Some((dm, k)) = m.left_partial(index, odd) {
                out.add_term(dm, c * int(k));
            }
        }
        out
    }

    pub fn partial(&self, name: &str) -> Result<GradedElem> {
        Ok(self.left_partial(self.chart.index_of(name)?))
    }

    /// Multiplicative inverse of an even element with nonzero constant term,
    /// by the geometric series on the augmentation-nilpotent part.
    pub fn inverse(&self) -> Result<GradedElem> {
        if !self.has_parity(Parity::Even) {
            return Err(Error::NotInvertible("element is not even".into()));
        }
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        let c_inv = c.recip();
        // f = c(1 + u), f^{-1} = c^{-1} Σ (-u)^k
        let minus_u = (self - &GradedElem::constant(&self.chart, c.clone())).scale(&-&c_inv);
        let mut acc = GradedElem::one(&self.chart);
        let mut power = GradedElem::one(&self.chart);
        loop {
            power = &power * &minus_u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&c_inv))
    }

    /// `log(f)` for an even element with constant term 1 (Mercator series).
    pub fn log_unit(&self) -> Result<GradedElem> {
        if !self.has_parity(Parity::Even) || !is_one(&self.constant_term()) {
            return Err(Error::NotInvertible(
                "logarithm needs an even element with constant term 1".into(),
            ));
        }
        let u = self - &GradedElem::one(&self.chart);
        let mut acc = GradedElem::zero(&self.chart);
        let mut power = GradedElem::one(&self.chart);
        let mut k = 1i64;
        loop {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            let term = power.scale(&super::rat(if k % 2 == 1 { 1 } else { -1 }, k));
            acc = &acc + &term;
            k += 1;
        }
        Ok(acc)
    }

    /// Pull back along a chart morphism whose target chart is this element's chart.
    pub fn substitute(&self, rule: &ChartMorphism) -> Result<GradedElem> {
        self.chart.ensure_same(rule.target(), "substitute")?;
        let source = rule.source();
        let images = rule.images();
        // powers[i][e] = images[i]^e, computed on demand
        let mut powers: Vec<Vec<GradedElem>> = images
            .iter()
            .map(|img| vec![GradedElem::one(source), img.clone()])
            .collect();
        let mut out = GradedElem::zero(source);
        for (m, c) in &self.terms {
            let mut prod = GradedElem::constant(source, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e];
                if prod.is_zero() {
                    break;
                }
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Re-express in a chart that contains every coordinate of this one (matched by name and parity).
    pub fn embed(&self, target: &Chart) -> Result<GradedElem> {
        if &self.chart == target {
            return Ok(self.clone());
        }
        let map = embedding_map(&self.chart, target)?;
        let mut out = GradedElem::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.reindex(&map, target.dim(), target.odd_mask()), c.clone());
        }
        Ok(out)
    }

    /// Canonical text rendering.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Renders a monomial with this element's chart.
    pub fn render_monomial(chart: &Chart, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(chart.name(i).to_string()),
                _ => parts.push(format!("{}^{}", chart.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Position map from `source` coordinates into `target` coordinates by name.
pub(crate) fn embedding_map(source: &Chart, target: &Chart) -> Result<Vec<usize>> {
    source
        .coords()
        .iter()
        .map(|c| {
            let j = target.index_of(&c.name)?;
            if target.parity(j) != c.parity {
                return Err(Error::ParityMismatch(format!(
                    "coordinate `{}` changes parity",
                    c.name
                )));
            }
            Ok(j)
        })
        .collect()
}

impl fmt::Display for GradedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = abs(c);
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if is_one(&a) {
                f.write_str(&GradedElem::render_monomial(&self.chart, m))?;
            } else {
                write!(
                    f,
                    "{}*{}",
                    fmt_rational(&a),
                    GradedElem::render_monomial(&self.chart, m)
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElem({})", self)
    }
}

impl<'a> Add<&'a GradedElem> for &'a GradedElem {
    type Output = GradedElem;
    /// Panics on chart mismatch; use [`GradedElem::try_add`] for a checked sum.
    fn add(self, rhs: &'a GradedElem) -> GradedElem {
        self.try_add(rhs).expect("chart mismatch in +")
    }
}

impl<'a> Sub<&'a GradedElem> for &'a GradedElem {
    type Output = GradedElem;
    fn sub(self, rhs: &'a GradedElem) -> GradedElem {
        self.try_sub(rhs).expect("chart mismatch in -")
    }
}

impl<'a> Mul<&'a GradedElem> for &'a GradedElem {
    type Output = GradedElem;
    fn mul(self, rhs: &'a GradedElem) -> GradedElem {
        self.try_mul(rhs).expect("chart mismatch in *")
    }
}

impl Neg for &GradedElem {
    type Output = GradedElem;
    fn neg(self) -> GradedElem {
        GradedElem {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedElem {
    type Output = GradedElem;
    fn neg(self) -> GradedElem {
        -&self
    }
}
