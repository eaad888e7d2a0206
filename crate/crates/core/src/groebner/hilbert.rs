//! Hilbert series of monomial ideals and of graded quotients of free modules.
//!
//! Series are kept as `N(s) / Π (1 - s^{d_i})` with an integer Laurent
//! numerator, so infinite tails are exact and finite length is detected by
//! exact polynomial division.

use std::collections::BTreeMap;

use crate::ring::Monomial;

/// Integer Laurent polynomial in `s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    coeffs: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }

    pub fn monomial(exp: i64, c: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(exp, c);
        l
    }

    pub fn add_term(&mut self, exp: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, -c);
        }
        r
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn shift(&self, by: i64) -> Laurent {
        Laurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + by, c)).collect(),
        }
    }

    /// Exact quotient by `1 - s^w`, if it exists.
    pub fn div_one_minus(&self, w: i64) -> Option<Laurent> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Some(Laurent::zero());
        };
        // N = (1 - s^w) Q  =>  Q_k = N_k + Q_{k-w}
        let mut q: BTreeMap<i64, i64> = BTreeMap::new();
        for k in lo..=hi - w {
            let v = self.coeff(k) + q.get(&(k - w)).copied().unwrap_or(0);
            if v != 0 {
                q.insert(k, v);
            }
        }
        let quotient = Laurent { coeffs: q };
        let back = quotient.sub(&quotient.shift(w));
        if back == *self {
            Some(quotient)
        } else {
            None
        }
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

/// Hilbert series `numerator / Π (1 - s^{w})` over a weighted polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: Laurent,
    weights: Vec<u32>,
}

impl HilbertSeries {
    pub fn new(numerator: Laurent, weights: &[u32]) -> Self {
        HilbertSeries {
            numerator,
            weights: weights.to_vec(),
        }
    }

    pub fn numerator(&self) -> &Laurent {
        &self.numerator
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn sub(&self, o: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.weights, o.weights);
        HilbertSeries::new(self.numerator.sub(&o.numerator), &self.weights)
    }

    pub fn add(&self, o: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.weights, o.weights);
        HilbertSeries::new(self.numerator.add(&o.numerator), &self.weights)
    }

    pub fn shift(&self, by: i64) -> HilbertSeries {
        HilbertSeries::new(self.numerator.shift(by), &self.weights)
    }

    /// The series as a Laurent polynomial when the module has finite length.
    pub fn as_polynomial(&self) -> Option<Laurent> {
        let mut n = self.numerator.clone();
        for &w in &self.weights {
            n = n.div_one_minus(w as i64)?;
        }
        Some(n)
    }

    pub fn is_finite_length(&self) -> bool {
        self.as_polynomial().is_some()
    }

    /// Krull dimension: order of the pole at `s = 1`; `-1` for the zero module.
    pub fn dimension(&self) -> i64 {
        if self.numerator.is_zero() {
            return -1;
        }
        let mut n = self.numerator.clone();
        let mut mult = 0i64;
        while n.eval_at_one() == 0 {
            n = n.div_one_minus(1).expect("root at one divides");
            mult += 1;
        }
        self.weights.len() as i64 - mult
    }

    /// Dimension of the degree-`t` piece.
    pub fn coefficient(&self, t: i64) -> i64 {
        let Some(lo) = self.numerator.min_exp() else {
            return 0;
        };
        if t < lo {
            return 0;
        }
        let counts = monomial_counts(&self.weights, (t - lo) as usize);
        self.numerator
            .terms()
            .filter(|(e, _)| *e <= t)
            .map(|(e, c)| c * counts[(t - e) as usize])
            .sum()
    }

    /// Coefficients for `t` in `lo..=hi`.
    pub fn coefficients(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let Some(nlo) = self.numerator.min_exp() else {
            return (lo..=hi).map(|t| (t, 0)).collect();
        };
        let span = (hi - nlo).max(0) as usize;
        let counts = monomial_counts(&self.weights, span);
        (lo..=hi)
            .map(|t| {
                let v = self
                    .numerator
                    .terms()
                    .filter(|(e, _)| *e <= t)
                    .map(|(e, c)| c * counts[(t - e) as usize])
                    .sum();
                (t, v)
            })
            .collect()
    }

    /// Lowest degree with a nonzero piece.
    pub fn initial_degree(&self) -> Option<i64> {
        self.numerator.min_exp()
    }
}

/// `counts[u]` = number of monomials of weighted degree `u`, for `u ≤ max`.
pub fn monomial_counts(weights: &[u32], max: usize) -> Vec<i64> {
    let mut c = vec![0i64; max + 1];
    c[0] = 1;
    for &w in weights {
        let w = w as usize;
        for u in w..=max {
            c[u] += c[u - w];
        }
    }
    c
}

/// Numerator of `A / (monomials)` over the denominator `Π (1 - s^{d_i})`.
pub fn monomial_ideal_numerator(gens: &[Monomial], weights: &[u32]) -> Laurent {
    let gens = minimize(gens.to_vec());
    numerator_rec(gens, weights)
}

fn minimize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.total_exponent());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn numerator_rec(gens: Vec<Monomial>, weights: &[u32]) -> Laurent {
    if gens.is_empty() {
        return Laurent::one();
    }
    if gens.iter().any(|g| g.is_one()) {
        return Laurent::zero();
    }
    if gens.len() == 1 {
        return Laurent::one().sub(&Laurent::monomial(gens[0].degree(), 1));
    }
    // split into groups with disjoint support
    let groups = support_components(&gens);
    if groups.len() > 1 {
        return groups.into_iter().fold(Laurent::one(), |acc, g| {
            acc.mul(&numerator_rec(g, weights))
        });
    }
    // all pure powers: a complete intersection
    let n = weights.len();
    let is_pure = |g: &Monomial| g.exps().iter().filter(|&&e| e > 0).count() == 1;
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| !is_pure(g)).collect();
    if mixed.is_empty() {
        return gens.iter().fold(Laurent::one(), |acc, g| {
            acc.mul(&Laurent::one().sub(&Laurent::monomial(g.degree(), 1)))
        });
    }
    // Pivot on a power of the variable occurring most often in mixed
    // generators. Its exponent stays below any pure power of that variable,
    // so both I + (p) and I : p strictly grow.
    let mut counts = vec![0usize; n];
    for g in &mixed {
        for (i, &e) in g.exps().iter().enumerate() {
            if e > 0 {
                counts[i] += 1;
            }
        }
    }
    let var = (0..n).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).unwrap();
    let mut exps_of_var: Vec<u16> = mixed.iter().map(|g| g.exps()[var]).filter(|&e| e > 0).collect();
    exps_of_var.sort();
    let e = exps_of_var[(exps_of_var.len() - 1) / 2];
    let mut pe = vec![0u16; n];
    pe[var] = e;
    let pivot = Monomial::new(&pe, weights);

    // I + (p)
    let mut with_p = gens.clone();
    with_p.push(pivot.clone());
    let with_p = minimize(with_p);
    // I : p
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = g.exps().to_vec();
            ex[var] = ex[var].saturating_sub(e);
            Monomial::new(&ex, weights)
        })
        .collect();
    let colon = minimize(colon);
    numerator_rec(with_p, weights).add(&numerator_rec(colon, weights).shift(pivot.degree()))
}

fn support_components(gens: &[Monomial]) -> Vec<Vec<Monomial>> {
    let n = gens.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if !gens[i].is_coprime(&gens[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(gens[i].clone());
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mons(list: &[&[u16]], w: &[u32]) -> Vec<Monomial> {
        list.iter().map(|e| Monomial::new(e, w)).collect()
    }

    #[test]
    fn counts_match_generating_function() {
        // 1/((1-s)(1-s^2)): 1,1,2,2,3,3
        assert_eq!(monomial_counts(&[1, 2], 5), vec![1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn numerator_of_simple_ideals() {
        let w = [1, 1];
        // (x^2): 1 - s^2
        let n = monomial_ideal_numerator(&mons(&[&[2, 0]], &w), &w);
        assert_eq!(n, Laurent::one().sub(&Laurent::monomial(2, 1)));
        // (x, y): (1-s)^2 = 1 - 2s + s^2
        let n = monomial_ideal_numerator(&mons(&[&[1, 0], &[0, 1]], &w), &w);
        assert_eq!((n.coeff(0), n.coeff(1), n.coeff(2)), (1, -2, 1));
        // (x^2, xy): 1 - 2 s^2 + s^3
        let n = monomial_ideal_numerator(&mons(&[&[2, 0], &[1, 1]], &w), &w);
        assert_eq!((n.coeff(0), n.coeff(2), n.coeff(3)), (1, -2, 1));
    }

    #[test]
    fn finite_length_and_dimension() {
        let w = [1, 1];
        let n = monomial_ideal_numerator(&mons(&[&[2, 0], &[0, 3]], &w), &w);
        let hs = HilbertSeries::new(n, &w);
        let poly = hs.as_polynomial().unwrap();
        // 1 + 2s + 2s^2 + s^3
        assert_eq!(poly.terms().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 2), (3, 1)]);
        assert_eq!(hs.dimension(), 0);
        let n = monomial_ideal_numerator(&mons(&[&[2, 0]], &w), &w);
        let hs = HilbertSeries::new(n, &w);
        assert_eq!(hs.dimension(), 1);
        assert_eq!(hs.coefficient(5), 2);
        assert!(!hs.is_finite_length());
    }

    #[test]
    fn brute_force_staircase_count() {
        // compare coefficients with direct enumeration of standard monomials
        let w = [1, 2, 1];
        let g = mons(&[&[2, 1, 0], &[0, 2, 1], &[1, 0, 3], &[3, 0, 0]], &w);
        let hs = HilbertSeries::new(monomial_ideal_numerator(&g, &w), &w);
        for t in 0..9i64 {
            let mut count = 0;
            for a in 0..=t {
                for b in 0..=t / 2 {
                    let c = t - a - 2 * b;
                    if c < 0 {
                        continue;
                    }
                    let m = Monomial::new(&[a as u16, b as u16, c as u16], &w);
                    if !g.iter().any(|x| x.divides(&m)) {
                        count += 1;
                    }
                }
            }
            assert_eq!(hs.coefficient(t), count, "degree {t}");
        }
    }
}
