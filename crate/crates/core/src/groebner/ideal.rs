use std::sync::{Arc, OnceLock};

use super::engine::{groebner, Gb, GbConfig};
use super::hilbert::{monomial_ideal_numerator, HilbertSeries};
use super::module::{top_order, FreeModule, ModuleOrder, VecOps, Vector};
use super::submodule::ModuleGens;
use crate::error::{Error, Result};
use crate::ring::{Field, Monomial, Poly, PolyRing};

/// Homogeneous ideal of a weighted polynomial ring with a lazily computed
/// reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: PolyRing<F>,
    gens: Vec<Poly<F>>,
    gb: OnceLock<Arc<Gb<F>>>,
    /// Set when the ideal came from a zeroth power.
    zero_power: bool,
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped; every other generator must be homogeneous.
    pub fn new(ring: &PolyRing<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        for (k, g) in gens.iter().enumerate() {
            if !g.is_homogeneous() {
                return Err(Error::domain(format!(
                    "generator {} is not homogeneous: {}",
                    k + 1,
                    ring.format(g)
                )));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
            zero_power: false,
        })
    }

    pub fn zero(ring: &PolyRing<F>) -> Self {
        Ideal::new(ring, Vec::new()).expect("no generators")
    }

    pub fn unit(ring: &PolyRing<F>) -> Self {
        Ideal::new(ring, vec![ring.one()]).expect("constant is homogeneous")
    }

    /// Parses generator expressions.
    pub fn parse(ring: &PolyRing<F>, gens: &[&str]) -> Result<Self> {
        let polys = gens
            .iter()
            .map(|s| crate::ring::parse_polynomial(ring, s))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    /// True when produced by `power(0)`.
    pub fn from_zero_power(&self) -> bool {
        self.zero_power
    }

    fn order(&self) -> ModuleOrder {
        top_order(&self.ring, &FreeModule::new(vec![0]))
    }

    /// Reduced Gröbner basis, computed once.
    pub fn gb(&self) -> Result<Arc<Gb<F>>> {
        if let Some(g) = self.gb.get() {
            return Ok(g.clone());
        }
        let order = self.order();
        let ops = VecOps::new(self.ring.field(), &order);
        let inputs: Vec<Vector<F::Elem>> = self.gens.iter().map(|g| ops.from_poly(g, 0)).collect();
        let config = GbConfig::default();
        let mut gb = groebner(self.ring.field(), &order, &inputs, &config)?;
        gb.interreduce();
        let gb = Arc::new(gb);
        Ok(self.gb.get_or_init(|| gb).clone())
    }

    /// Reduced Gröbner basis as polynomials, sorted by leading monomial.
    pub fn groebner_basis(&self) -> Result<Vec<Poly<F>>> {
        let gb = self.gb()?;
        let order = self.order();
        let ops = VecOps::new(self.ring.field(), &order);
        let mut out: Vec<Poly<F>> = gb
            .elements()
            .iter()
            .map(|v| ops.to_components(v, 1).pop().expect("rank one"))
            .collect();
        out.sort_by(|a, b| {
            self.ring
                .order()
                .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
        });
        Ok(out)
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self
            .gb()?
            .elements()
            .iter()
            .map(|v| v.lead().expect("nonzero").mon.clone())
            .collect())
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Result<Poly<F>> {
        let gb = self.gb()?;
        let order = self.order();
        let ops = VecOps::new(self.ring.field(), &order);
        let r = gb.normal_form(&ops.from_poly(f, 0));
        Ok(ops.to_components(&r, 1).pop().expect("rank one"))
    }

    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.leading_monomials()?.iter().any(|m| m.is_one()))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Ideal<F>) -> Result<bool> {
        self.ring.check_same(&other.ring)?;
        for g in &self.gens {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Ideal<F>) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.ring.check_same(&other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.ring.check_same(&other.ring)?;
        let mut gens = Vec::new();
        for f in &self.gens {
            for g in &other.gens {
                gens.push(self.ring.mul(f, g));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I^t`, generated by the `t`-fold products of minimal generators.
    /// `t = 0` yields the unit ideal with [`Ideal::from_zero_power`] set.
    pub fn power(&self, t: u32) -> Result<Ideal<F>> {
        if t == 0 {
            let mut u = Ideal::unit(&self.ring);
            u.zero_power = true;
            return Ok(u);
        }
        let base = self.minimal_generators()?;
        // multisets of size t from base, by nondecreasing index
        let mut gens = Vec::new();
        let mut stack: Vec<(usize, u32, Poly<F>)> = vec![(0, 0, self.ring.one())];
        while let Some((start, used, acc)) = stack.pop() {
            if used == t {
                gens.push(acc);
                continue;
            }
            for k in (start..base.len()).rev() {
                stack.push((k, used + 1, self.ring.mul(&acc, &base[k])));
            }
        }
        let p = Ideal::new(&self.ring, gens)?;
        Ideal::new(&self.ring, p.minimal_generators()?)
    }

    /// `I^[q] = (g^q)`; `q` must be a power of the characteristic.
    pub fn frobenius_power(&self, q: u32) -> Result<Ideal<F>> {
        let gens = self
            .gens
            .iter()
            .map(|g| self.ring.frobenius(g, q))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// `(self : other) = {f : f·other ⊆ self}`.
    pub fn colon(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.ring.check_same(&other.ring)?;
        let gs: Vec<&Poly<F>> = other.gens.iter().collect();
        if gs.is_empty() {
            return Ok(Ideal::unit(&self.ring));
        }
        let ambient = FreeModule::new(gs.iter().map(|g| -g.degree().unwrap()).collect());
        let order = top_order(&self.ring, &ambient);
        let ops = VecOps::new(self.ring.field(), &order);
        let mut vecs = vec![ops.from_components(&gs.iter().map(|g| (*g).clone()).collect::<Vec<_>>())];
        let mut degs = vec![0i64];
        for h in &self.gens {
            for (i, g) in gs.iter().enumerate() {
                vecs.push(ops.from_poly(h, i as u32));
                degs.push(h.degree().unwrap() - g.degree().unwrap());
            }
        }
        let m = ModuleGens::new(&self.ring, ambient, vecs, degs)?;
        let syz = m.syzygies(false)?;
        let gens: Vec<Poly<F>> = syz
            .gens()
            .iter()
            .map(|v| v.component(0))
            .filter(|p| !p.is_zero())
            .collect();
        let c = Ideal::new(&self.ring, gens)?;
        Ideal::new(&self.ring, c.minimal_generators()?)
    }

    /// A minimal homogeneous generating set drawn from the generators.
    pub fn minimal_generators(&self) -> Result<Vec<Poly<F>>> {
        let order = self.order();
        let ops = VecOps::new(self.ring.field(), &order);
        let inputs: Vec<Vector<F::Elem>> = self.gens.iter().map(|g| ops.from_poly(g, 0)).collect();
        let config = GbConfig::default();
        let gb = groebner(self.ring.field(), &order, &inputs, &config)?;
        Ok(gb.minimal_inputs().iter().map(|&i| self.gens[i].clone()).collect())
    }

    /// Hilbert series of `A/I`.
    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        let leads = self.leading_monomials()?;
        let w = self.ring.weights();
        Ok(HilbertSeries::new(monomial_ideal_numerator(&leads, w), w))
    }

    /// Krull dimension of `A/I`; `-1` for the unit ideal.
    pub fn krull_dim(&self) -> Result<i64> {
        let leads = self.leading_monomials()?;
        Ok(independent_set_dimension(&leads, self.ring.nvars()))
    }

    /// Standard monomials of degree `t`: a basis of `[A/I]_t`.
    pub fn slice_basis(&self, t: i64) -> Result<Vec<Monomial>> {
        if t < 0 {
            return Ok(Vec::new());
        }
        let leads = self.leading_monomials()?;
        Ok(self
            .ring
            .monomials_of_degree(t)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect())
    }
}

/// Largest set of variables containing no leading monomial's support, i.e.
/// the dimension of the monomial ideal. `-1` if a leading monomial is 1.
pub fn independent_set_dimension(leads: &[Monomial], n: usize) -> i64 {
    if leads.iter().any(|m| m.is_one()) {
        return -1;
    }
    let supports: Vec<u64> = leads
        .iter()
        .map(|m| {
            m.exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    fn grow(set: u64, next: usize, n: usize, supports: &[u64], best: &mut u32) {
        let size = set.count_ones();
        if size + (n - next) as u32 <= *best {
            return;
        }
        if next == n {
            *best = (*best).max(size);
            return;
        }
        let with = set | (1 << next);
        // a set is independent when no support lies inside it
        if !supports.iter().any(|s| s & !with == 0) {
            grow(with, next + 1, n, supports, best);
        }
        grow(set, next + 1, n, supports, best);
    }
    let mut best = 0;
    grow(0, 0, n, &supports, &mut best);
    best as i64
}
