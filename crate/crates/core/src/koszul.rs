//! Koszul cohomology of `R = A/I` on a homogeneous system of parameters,
//! strand by strand, and its comparison with local cohomology.
//!
//! `K^r = ⊕_{|S| = r} R(e_S)` with `e_S = Σ_{k∈S} deg x_k` and
//! `d(e_S) = Σ_{i∉S} ± x_i e_{S∪i}`, so every strand `[K^•]_t` is a finite
//! complex of vector spaces.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohom::LocalCohomologyTable;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg::{self, Matrix};
use crate::ring::{Field, Monomial, Poly, PolyRing};

pub const DEFAULT_MAX_STRAND_DIM: usize = 5000;

static MAX_STRAND_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_STRAND_DIM);

/// Cap on `dim [K^r]_t` for any single `r`.
pub fn max_strand_dim() -> usize {
    MAX_STRAND_DIM.load(Ordering::Relaxed)
}

pub fn set_max_strand_dim(n: usize) {
    MAX_STRAND_DIM.store(n, Ordering::Relaxed);
}

/// Homogeneous `x_1..x_δ` in `R = A/I`, `δ = dim R`, with `R/(x̲)` of
/// finite length.
#[derive(Clone, Debug)]
pub struct ParameterSequence<F: Field> {
    ideal: Ideal<F>,
    elements: Vec<Poly<F>>,
    degrees: Vec<i64>,
}

impl<F: Field> ParameterSequence<F> {
    pub fn new(ideal: &Ideal<F>, elements: Vec<Poly<F>>) -> Result<Self> {
        let ring = ideal.ring();
        let dim = ideal.krull_dim()?;
        if dim < 0 {
            return Err(Error::domain("the quotient ring is zero"));
        }
        if elements.len() != dim as usize {
            return Err(Error::domain(format!(
                "{} elements given for a ring of dimension {dim}",
                elements.len()
            )));
        }
        let mut degrees = Vec::with_capacity(elements.len());
        for (k, x) in elements.iter().enumerate() {
            if x.is_zero() || !x.is_homogeneous() || x.degree().unwrap() <= 0 {
                return Err(Error::domain(format!(
                    "element {} is not homogeneous of positive degree",
                    k + 1
                )));
            }
            degrees.push(x.degree().unwrap());
        }
        let cut = ideal.sum(&Ideal::new(ring, elements.clone())?)?;
        if cut.krull_dim()? != 0 {
            return Err(Error::domain("R/(x) does not have finite length"));
        }
        Ok(ParameterSequence {
            ideal: ideal.clone(),
            elements,
            degrees,
        })
    }

    pub fn ideal(&self) -> &Ideal<F> {
        &self.ideal
    }

    pub fn ring(&self) -> &PolyRing<F> {
        self.ideal.ring()
    }

    pub fn elements(&self) -> &[Poly<F>] {
        &self.elements
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn format(&self) -> Vec<String> {
        self.elements.iter().map(|x| self.ring().format(x)).collect()
    }
}

/// Searches random combinations of standard monomials of one degree `D`,
/// trying `D = 1, 2, ...` up to `4·lcm(weights)`, `max_attempts` draws each.
pub fn find_hsop<F: Field>(ideal: &Ideal<F>, seed: u64, max_attempts: usize) -> Result<ParameterSequence<F>> {
    let ring = ideal.ring();
    let dim = ideal.krull_dim()?;
    if dim < 0 {
        return Err(Error::domain("the quotient ring is zero"));
    }
    if dim == 0 {
        return ParameterSequence::new(ideal, Vec::new());
    }
    let lcm = ring
        .weights()
        .iter()
        .fold(1u64, |acc, &w| num_integer::lcm(acc, w as u64)) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = ring.field();
    for deg in 1..=4 * lcm {
        let basis = ideal.slice_basis(deg)?;
        if basis.is_empty() {
            continue;
        }
        for _ in 0..max_attempts {
            let elements: Vec<Poly<F>> = (0..dim)
                .map(|_| {
                    let terms = basis.iter().filter_map(|m| {
                        let c: i64 = rng.gen_range(-7..=7);
                        let c = field.from_i64(c);
                        (!field.is_zero(&c)).then(|| (m.clone(), c))
                    });
                    ring.from_terms(terms.collect::<Vec<_>>())
                })
                .collect();
            if elements.iter().any(|x| x.is_zero()) {
                continue;
            }
            if let Ok(x) = ParameterSequence::new(ideal, elements) {
                return Ok(x);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no system of parameters found in degrees up to {}; raise the attempt count or supply one",
        4 * lcm
    )))
}

/// `[K^•(x̲; R)]_t` with its differentials and cohomology.
#[derive(Clone, Debug)]
pub struct KoszulStrand<E> {
    pub t: i64,
    /// `dims[r] = dim [K^r]_t`.
    pub dims: Vec<usize>,
    /// `matrices[r] : [K^r]_t -> [K^{r+1}]_t`, rows indexed by the target.
    pub matrices: Vec<Matrix<E>>,
    pub cohomology: Vec<usize>,
}

impl<E: Clone> KoszulStrand<E> {
    /// `Σ (-1)^r dim K^r`.
    pub fn euler_chain(&self) -> i64 {
        alternating(&self.dims)
    }

    /// `Σ (-1)^r dim H^r`.
    pub fn euler_cohomology(&self) -> i64 {
        alternating(&self.cohomology)
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(r, &x)| if r % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Subsets of `0..n` of size `r`, as bitmasks in lexicographic order.
fn subsets(n: usize, r: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == r).collect()
}

/// Degree-`s` basis of `R` with its index.
struct Slice {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

struct StrandBuilder<'a, F: Field> {
    x: &'a ParameterSequence<F>,
    cap: usize,
    slices: HashMap<i64, Slice>,
}

impl<'a, F: Field> StrandBuilder<'a, F> {
    fn slice(&mut self, s: i64) -> Result<&Slice> {
        if !self.slices.contains_key(&s) {
            let basis = self.x.ideal.slice_basis(s)?;
            let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            self.slices.insert(s, Slice { basis, index });
        }
        Ok(&self.slices[&s])
    }

    /// Matrix of `·x_i : R_s -> R_{s + e_i}`.
    fn multiplication(&mut self, i: usize, s: i64) -> Result<Matrix<F::Elem>> {
        let ring = self.x.ring().clone();
        let field = ring.field().clone();
        let e = self.x.degrees[i];
        let src = self.slice(s)?.basis.clone();
        let tgt_len = self.slice(s + e)?.basis.len();
        let mut m = linalg::zeros(&field, tgt_len, src.len());
        for (c, mon) in src.iter().enumerate() {
            let p = ring.mul_term(&self.x.elements[i], mon, &field.one());
            let nf = self.x.ideal.normal_form(&p)?;
            let tgt = &self.slices[&(s + e)];
            for (mm, coeff) in nf.terms() {
                let r = tgt.index[mm];
                m.set(r, c, coeff.clone());
            }
        }
        Ok(m)
    }

    fn build(&mut self, t: i64) -> Result<KoszulStrand<F::Elem>> {
        let n = self.x.len();
        let field = self.x.ring().field().clone();
        let cap = self.cap;
        let weight = |s: u32| -> i64 { (0..n).filter(|k| s >> k & 1 == 1).map(|k| self.x.degrees[k]).sum() };
        // offsets of each summand R(e_S) inside [K^r]_t
        let mut layout: Vec<Vec<(u32, usize, usize)>> = Vec::with_capacity(n + 1);
        let mut dims = Vec::with_capacity(n + 1);
        for r in 0..=n {
            let mut off = 0;
            let mut parts = Vec::new();
            for s in subsets(n, r) {
                let len = self.slice(t + weight(s))?.basis.len();
                parts.push((s, off, len));
                off += len;
            }
            if off > cap {
                return Err(Error::ResourceCap {
                    cap: "strand dimension",
                    limit: cap,
                });
            }
            layout.push(parts);
            dims.push(off);
        }
        let mut mult: HashMap<(usize, i64), Matrix<F::Elem>> = HashMap::new();
        let mut matrices = Vec::with_capacity(n);
        for r in 0..n {
            let mut d = linalg::zeros(&field, dims[r + 1], dims[r]);
            let targets: HashMap<u32, usize> = layout[r + 1].iter().map(|&(s, off, _)| (s, off)).collect();
            for &(s, off, len) in &layout[r] {
                if len == 0 {
                    continue;
                }
                let base = t + weight(s);
                for i in (0..n).filter(|i| s >> i & 1 == 0) {
                    let sign_neg = (s & ((1u32 << i) - 1)).count_ones() % 2 == 1;
                    let key = (i, base);
                    if let std::collections::hash_map::Entry::Vacant(e) = mult.entry(key) {
                        let m = self.multiplication(i, base)?;
                        e.insert(m);
                    }
                    let m = &mult[&key];
                    let toff = targets[&(s | 1 << i)];
                    for a in 0..m.rows() {
                        for b in 0..m.cols() {
                            let v = m.get(a, b);
                            if field.is_zero(v) {
                                continue;
                            }
                            let v = if sign_neg { field.neg(v) } else { v.clone() };
                            d.set(toff + a, off + b, v);
                        }
                    }
                }
            }
            matrices.push(d);
        }
        let ranks: Vec<usize> = matrices.par_iter().map(|m| linalg::rank(&field, m)).collect();
        let cohomology = (0..=n)
            .map(|r| {
                let out = if r < n { ranks[r] } else { 0 };
                let inc = if r > 0 { ranks[r - 1] } else { 0 };
                dims[r] - out - inc
            })
            .collect();
        Ok(KoszulStrand {
            t,
            dims,
            matrices,
            cohomology,
        })
    }
}

pub fn koszul_strand<F: Field>(x: &ParameterSequence<F>, t: i64) -> Result<KoszulStrand<F::Elem>> {
    koszul_strand_capped(x, t, max_strand_dim())
}

/// As [`koszul_strand`] with an explicit cap on `dim [K^r]_t`.
pub fn koszul_strand_capped<F: Field>(
    x: &ParameterSequence<F>,
    t: i64,
    cap: usize,
) -> Result<KoszulStrand<F::Elem>> {
    StrandBuilder {
        x,
        cap,
        slices: HashMap::new(),
    }
    .build(t)
}

/// `dim [H^r(x̲; R)]_t`.
pub fn koszul_cohomology_slice<F: Field>(x: &ParameterSequence<F>, r: usize, t: i64) -> Result<usize> {
    if r > x.len() {
        return Ok(0);
    }
    Ok(koszul_strand(x, t)?.cohomology[r])
}

/// Degrees that can carry Koszul cohomology: `K^•` vanishes below `-Σ e_k`,
/// and the spectral sequence `H^p(x̲; H^q_m(R)) ⇒ H^{p+q}(x̲; R)` bounds it
/// above by `max_q end H^q_m(R)`.
pub fn support_window<F: Field>(x: &ParameterSequence<F>, table: &LocalCohomologyTable) -> (i64, i64) {
    let lo = -x.degrees().iter().sum::<i64>();
    let hi = table.modules.iter().filter_map(|m| m.upper).max().unwrap_or(lo);
    (lo, hi.max(lo))
}

/// Cohomology dimensions of every strand in the support window.
pub fn window_cohomology<F: Field>(
    x: &ParameterSequence<F>,
    table: &LocalCohomologyTable,
) -> Result<Vec<(i64, Vec<usize>)>> {
    let (lo, hi) = support_window(x, table);
    (lo..=hi)
        .into_par_iter()
        .map(|t| koszul_strand(x, t).map(|s| (t, s.cohomology)))
        .collect()
}

/// Whether `H^r(x̲; R) ≠ 0`, scanning the support window.
pub fn koszul_cohomology_total_nonzero<F: Field>(
    x: &ParameterSequence<F>,
    r: usize,
    table: &LocalCohomologyTable,
) -> Result<bool> {
    if r > x.len() {
        return Ok(false);
    }
    Ok(window_cohomology(x, table)?.iter().any(|(_, h)| h[r] > 0))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HrRow {
    pub r: usize,
    pub t: i64,
    pub koszul_dim: usize,
    /// Total dimension of `H^r_m(R)`; `None` when infinite.
    pub lc_dim: Option<u64>,
    pub equal: bool,
    /// `H^r_m(R) = [H^r_m(R)]_0`.
    pub concentrated_in_degree_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HrTotal {
    pub r: usize,
    pub nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HochsterRobertsReport {
    pub hypotheses: Vec<String>,
    pub parameters: Vec<String>,
    pub rows: Vec<HrRow>,
    /// Indices where `H^r_m` is not concentrated in degree 0, so no equality is claimed.
    pub hypothesis_failures: Vec<usize>,
    pub first_discrepancy: Option<usize>,
    pub all_equal: bool,
    pub koszul_total: Vec<HrTotal>,
    pub window: (i64, i64),
}

/// Compares `dim [H^r(x̲; R)]_0` with `dim H^r_m(R)` for `r < dim R`.
pub fn hochster_roberts_check<F: Field>(
    x: &ParameterSequence<F>,
    table: &LocalCohomologyTable,
) -> Result<HochsterRobertsReport> {
    let delta = x.len();
    let strands = window_cohomology(x, table)?;
    let strand0 = match strands.iter().find(|(t, _)| *t == 0) {
        Some((_, h)) => h.clone(),
        None => koszul_strand(x, 0)?.cohomology,
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in 0..delta {
        let lc = table.total(r);
        let concentrated = match table.support(r) {
            Ok(s) => s.iter().all(|&(t, _)| t == 0),
            Err(_) => false,
        };
        if !concentrated {
            failures.push(r);
        }
        let kd = strand0[r];
        rows.push(HrRow {
            r,
            t: 0,
            koszul_dim: kd,
            lc_dim: lc,
            equal: lc == Some(kd as u64),
            concentrated_in_degree_zero: concentrated,
        });
    }
    let first_discrepancy = rows
        .iter()
        .find(|row| row.concentrated_in_degree_zero && !row.equal)
        .map(|row| row.r);
    let koszul_total = (0..=delta)
        .map(|r| HrTotal {
            r,
            nonzero: strands.iter().any(|(_, h)| h[r] > 0),
        })
        .collect();
    Ok(HochsterRobertsReport {
        hypotheses: vec![
            "R is equidimensional".into(),
            "R is Cohen-Macaulay on the punctured spectrum".into(),
            "R is F-injective or Du Bois".into(),
        ],
        parameters: x.format(),
        all_equal: rows.iter().all(|row| row.equal),
        first_discrepancy,
        hypothesis_failures: failures,
        rows,
        koszul_total,
        window: support_window(x, table),
    })
}
