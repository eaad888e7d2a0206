use super::engine::{groebner, Gb, GbConfig};
use super::hilbert::{monomial_ideal_numerator, HilbertSeries, Laurent};
use super::module::{top_order, FreeModule, ModuleOrder, ModuleOrderKind, Term, VecOps, Vector};
use crate::error::{Error, Result};
use crate::ring::{Field, Monomial, PolyRing};

/// Homogeneous generators of a submodule of a graded free module.
#[derive(Clone, Debug)]
pub struct ModuleGens<F: Field> {
    ring: PolyRing<F>,
    ambient: FreeModule,
    gens: Vec<Vector<F::Elem>>,
    degrees: Vec<i64>,
}

impl<F: Field> ModuleGens<F> {
    /// `degrees[k]` is the degree of `gens[k]`; it is what makes zero
    /// generators meaningful as basis elements of the source module.
    pub fn new(
        ring: &PolyRing<F>,
        ambient: FreeModule,
        gens: Vec<Vector<F::Elem>>,
        degrees: Vec<i64>,
    ) -> Result<Self> {
        if gens.len() != degrees.len() {
            return Err(Error::structural("one degree per generator"));
        }
        let order = top_order(ring, &ambient);
        let ops = VecOps::new(ring.field(), &order);
        let mut sorted = Vec::with_capacity(gens.len());
        for (k, (g, &d)) in gens.iter().zip(&degrees).enumerate() {
            if g.max_comp().is_some_and(|c| c as usize >= ambient.rank()) {
                return Err(Error::structural(format!("generator {} exceeds the ambient rank", k + 1)));
            }
            if !g.is_homogeneous(&ambient) || g.degree(&ambient).is_some_and(|e| e != d) {
                return Err(Error::domain(format!("generator {} is not homogeneous of degree {d}", k + 1)));
            }
            sorted.push(ops.import(g));
        }
        Ok(ModuleGens {
            ring: ring.clone(),
            ambient,
            gens: sorted,
            degrees,
        })
    }

    /// Degrees read off the generators; zero generators are dropped.
    pub fn from_vectors(ring: &PolyRing<F>, ambient: FreeModule, gens: Vec<Vector<F::Elem>>) -> Result<Self> {
        let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let order = top_order(ring, &ambient);
        let ops = VecOps::new(ring.field(), &order);
        let gens: Vec<_> = gens.iter().map(|g| ops.import(g)).collect();
        let degrees = gens.iter().map(|g| g.degree(&ambient).expect("nonzero")).collect();
        ModuleGens::new(ring, ambient, gens, degrees)
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn gens(&self) -> &[Vector<F::Elem>] {
        &self.gens
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The free module mapping onto the span, one basis element per
    /// generator, with the induced Schreyer order when all generators are
    /// nonzero.
    pub fn source(&self) -> FreeModule {
        match self.leads() {
            Some(l) => FreeModule::with_frames(self.degrees.clone(), self.order().induced_frames(&l)),
            None => FreeModule::new(self.degrees.clone()),
        }
    }

    fn leads(&self) -> Option<Vec<(Monomial, u32)>> {
        self.gens
            .iter()
            .map(|g| g.lead().map(|t| (t.mon.clone(), t.comp)))
            .collect()
    }

    pub fn order(&self) -> ModuleOrder {
        top_order(&self.ring, &self.ambient)
    }

    /// Reduced Gröbner basis of the span.
    pub fn gb(&self) -> Result<Gb<F>> {
        let order = self.order();
        let mut gb = groebner(self.ring.field(), &order, &self.gens, &GbConfig::default())?;
        gb.interreduce();
        Ok(gb)
    }

    pub fn contains(&self, v: &Vector<F::Elem>) -> Result<bool> {
        let order = self.order();
        let ops = VecOps::new(self.ring.field(), &order);
        Ok(self.gb()?.contains(&ops.import(v)))
    }

    /// A minimal generating subset, in the original order.
    pub fn minimal(&self) -> Result<ModuleGens<F>> {
        let order = self.order();
        let config = GbConfig {
            full_reduce: false,
            ..GbConfig::default()
        };
        let gb = groebner(self.ring.field(), &order, &self.gens, &config)?;
        let keep = gb.minimal_inputs();
        Ok(ModuleGens {
            ring: self.ring.clone(),
            ambient: self.ambient.clone(),
            gens: keep.iter().map(|&i| self.gens[i].clone()).collect(),
            degrees: keep.iter().map(|&i| self.degrees[i]).collect(),
        })
    }

    fn tagged(&self, complete_tags: bool) -> Result<(ModuleOrder, Gb<F>)> {
        let schreyer = self.leads();
        let order = ModuleOrder::with_tags(
            self.ring.order().clone(),
            &self.ambient,
            ModuleOrderKind::TermOverPosition,
            &self.degrees,
            schreyer,
        );
        let ops = VecOps::new(self.ring.field(), &order);
        let main = self.ambient.rank() as u32;
        let one = self.ring.field().one();
        let inputs: Vec<Vector<F::Elem>> = self
            .gens
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let mut terms = g.terms().to_vec();
                terms.push(Term {
                    mon: Monomial::one(self.ring.nvars()),
                    comp: main + k as u32,
                    coeff: one.clone(),
                });
                ops.from_terms(terms)
            })
            .collect();
        let config = GbConfig {
            complete_tags,
            ..GbConfig::default()
        };
        let gb = groebner(self.ring.field(), &order, &inputs, &config)?;
        Ok((order, gb))
    }

    /// Generators of the kernel of `source() -> ambient`, living in `source()`.
    /// With `minimal` the generating set is minimal.
    pub fn syzygies(&self, minimal: bool) -> Result<ModuleGens<F>> {
        let source = self.source();
        let (_, gb) = self.tagged(minimal)?;
        let sorder = top_order(&self.ring, &source);
        let sops = VecOps::new(self.ring.field(), &sorder);
        let main = self.ambient.rank();
        let total = main + self.gens.len();
        let picked: Vec<&Vector<F::Elem>> = if minimal {
            gb.new_syzygies().iter().map(|&k| &gb.elements()[k]).collect()
        } else {
            gb.tag_elements().collect()
        };
        let mut syz: Vec<Vector<F::Elem>> = picked
            .into_iter()
            .map(|v| sops.import(&v.restrict(main..total)))
            .map(|v| sops.monic(&v))
            .collect();
        syz.sort_by(|a, b| {
            let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
            sorder.cmp_terms(la, lb)
        });
        ModuleGens::from_vectors(&self.ring, source, syz)
    }

    /// Coefficients `c` with `v = Σ c_k gens[k]`, or `None` if `v` is not in the span.
    pub fn lift(&self, v: &Vector<F::Elem>) -> Result<Option<Vector<F::Elem>>> {
        Ok(self.lifter()?.lift(v))
    }

    /// Precomputed data for repeated lifts.
    pub fn lifter(&self) -> Result<Lifter<F>> {
        let (order, gb) = self.tagged(false)?;
        Ok(Lifter {
            order,
            gb,
            source_order: top_order(&self.ring, &self.source()),
            field: self.ring.field().clone(),
        })
    }

    /// Hilbert series of `ambient / span`.
    pub fn quotient_hilbert_series(&self) -> Result<HilbertSeries> {
        let gb = self.gb()?;
        Ok(quotient_series(&gb, &self.ambient, self.ring.weights()))
    }
}

/// Hilbert series of `ambient / M` from a Gröbner basis of `M`.
pub fn quotient_series<F: Field>(gb: &Gb<F>, ambient: &FreeModule, weights: &[u32]) -> HilbertSeries {
    let mut by_comp: Vec<Vec<Monomial>> = vec![Vec::new(); ambient.rank()];
    for v in gb.main_elements() {
        let t = v.lead().expect("nonzero");
        by_comp[t.comp as usize].push(t.mon.clone());
    }
    let mut num = Laurent::zero();
    for (c, leads) in by_comp.iter().enumerate() {
        let n = monomial_ideal_numerator(leads, weights);
        num = num.add(&n.shift(ambient.gen_degrees()[c]));
    }
    HilbertSeries::new(num, weights)
}

/// Tagged Gröbner basis for expressing vectors in terms of fixed generators.
pub struct Lifter<F: Field> {
    order: ModuleOrder,
    gb: Gb<F>,
    source_order: ModuleOrder,
    field: F,
}

impl<F: Field> Lifter<F> {
    pub fn lift(&self, v: &Vector<F::Elem>) -> Option<Vector<F::Elem>> {
        let ops = VecOps::new(&self.field, &self.order);
        let r = self.gb.lift(&ops.import(v))?;
        Some(VecOps::new(&self.field, &self.source_order).import(&r))
    }
}
