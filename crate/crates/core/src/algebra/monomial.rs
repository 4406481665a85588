use std::cmp::Ordering;

/// A monomial `x^e θ_S`: an exponent per chart coordinate (0/1 on odd ones)
/// plus the mask of odd coordinates present. Odd factors are implicitly in
/// ascending chart order, which is the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u8]>,
    odd: u64,
}

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial {
            exps: vec![0; dim].into_boxed_slice(),
            odd: 0,
        }
    }

    /// Builds a monomial from exponents; `odd_mask` marks the odd positions of the chart.
    /// Returns `None` when an odd exponent exceeds one.
    pub fn from_exps(exps: Vec<u8>, odd_mask: u64) -> Option<Self> {
        let mut odd = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if odd_mask & (1 << i) != 0 {
                match e {
                    0 => {}
                    1 => odd |= 1 << i,
                    _ => return None,
                }
            }
        }
        Some(Monomial {
            exps: exps.into_boxed_slice(),
            odd,
        })
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn even_degree(&self) -> u32 {
        self.total_degree() - self.odd_count()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn parity_bit(&self) -> usize {
        (self.odd_count() % 2) as usize
    }

    /// Product with Koszul sign, `None` if an odd factor repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i64)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let above = if j >= 63 { 0 } else { !((2u64 << j) - 1) };
            swaps += (self.odd & above).count_ones();
        }
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>()
            .into_boxed_slice();
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        Some((
            Monomial {
                exps,
                odd: self.odd | other.odd,
            },
            sign,
        ))
    }

    /// Left derivative along coordinate `i`: the resulting monomial and the
    /// integer factor (exponent for even coordinates, Koszul sign for odd ones).
    pub fn left_partial(&self, i: usize, odd_coordinate: bool) -> Option<(Monomial, i64)> {
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        if odd_coordinate {
            let below = (1u64 << i) - 1;
            let passed = (self.odd & below).count_ones();
            let sign = if passed.is_multiple_of(2) { 1 } else { -1 };
            Some((
                Monomial {
                    exps,
                    odd: self.odd & !(1 << i),
                },
                sign,
            ))
        } else {
            Some((Monomial { exps, odd: self.odd }, i64::from(e)))
        }
    }

    /// Restrict/extend to another chart via a position map (`map[i]` is the new index of coordinate `i`).
    pub fn reindex(&self, map: &[usize], new_dim: usize, new_odd_mask: u64) -> Monomial {
        let mut exps = vec![0u8; new_dim];
        for (i, &e) in self.exps.iter().enumerate() {
            exps[map[i]] = e;
        }
        Monomial::from_exps(exps, new_odd_mask).expect("parities preserved by reindexing")
    }
}

impl Ord for Monomial {
    /// Total degree first, then lexicographically by chart order with higher
    /// powers of earlier coordinates first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials on a chart with `dim` coordinates whose even degree is at most
/// `max_even` and whose total degree is at most `max_total`, in canonical order.
pub fn monomials(dim: usize, odd_mask: u64, max_even: u32, max_total: u32) -> Vec<Monomial> {
    fn go(i: usize, dim: usize, odd_mask: u64, even_left: u32, total_left: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if i == dim {
            out.push(Monomial::from_exps(cur.clone(), odd_mask).expect("odd exponents are 0/1"));
            return;
        }
        let odd = odd_mask & (1 << i) != 0;
        let cap = if odd { 1.min(total_left) } else { even_left.min(total_left) };
        for e in 0..=cap {
            cur.push(e as u8);
            let (el, tl) = if odd { (even_left, total_left - e) } else { (even_left - e, total_left - e) };
            go(i + 1, dim, odd_mask, el, tl, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, dim, odd_mask, max_even, max_total, &mut Vec::with_capacity(dim), &mut out);
    out.sort();
    out
}
