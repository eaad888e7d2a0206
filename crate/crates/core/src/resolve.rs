//! Graded free resolutions of `A/I` over the ambient ring, Betti tables and
//! chain maps lifting `A/J ↠ A/I`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{top_order, FreeModule, Ideal, ModuleGens, VecOps, Vector};
use crate::ring::{Field, Poly, PolyRing};

/// Homogeneous degree-0 map of free modules, stored by columns: `cols[c]`
/// is the image of the `c`-th basis element of `source`, as a vector of `target`.
#[derive(Clone, Debug)]
pub struct FreeMap<F: Field> {
    ring: PolyRing<F>,
    source: FreeModule,
    target: FreeModule,
    cols: Vec<Vector<F::Elem>>,
}

impl<F: Field> FreeMap<F> {
    pub fn new(ring: &PolyRing<F>, source: FreeModule, target: FreeModule, cols: Vec<Vector<F::Elem>>) -> Result<Self> {
        if cols.len() != source.rank() {
            return Err(Error::structural("one column per source generator"));
        }
        let order = top_order(ring, &target);
        let ops = VecOps::new(ring.field(), &order);
        let mut sorted = Vec::with_capacity(cols.len());
        for (c, v) in cols.iter().enumerate() {
            if v.max_comp().is_some_and(|k| k as usize >= target.rank()) {
                return Err(Error::structural("column exceeds target rank"));
            }
            if !v.is_homogeneous(&target) || v.degree(&target).is_some_and(|d| d != source.gen_degrees()[c]) {
                return Err(Error::domain(format!("column {} is not homogeneous of degree 0", c + 1)));
            }
            sorted.push(ops.import(v));
        }
        Ok(FreeMap {
            ring: ring.clone(),
            source,
            target,
            cols: sorted,
        })
    }

    pub fn identity(ring: &PolyRing<F>, module: &FreeModule) -> Self {
        let order = top_order(ring, module);
        let ops = VecOps::new(ring.field(), &order);
        let cols = (0..module.rank()).map(|c| ops.from_poly(&ring.one(), c as u32)).collect();
        FreeMap {
            ring: ring.clone(),
            source: module.clone(),
            target: module.clone(),
            cols,
        }
    }

    /// Multiplication by a homogeneous `f` of degree `e`, as a map
    /// `module(-e) -> module`.
    pub fn scalar(ring: &PolyRing<F>, module: &FreeModule, f: &Poly<F>) -> Result<Self> {
        let e = f.degree().unwrap_or(0);
        let source = FreeModule::new(module.gen_degrees().iter().map(|d| d + e).collect());
        let order = top_order(ring, module);
        let ops = VecOps::new(ring.field(), &order);
        let cols = (0..module.rank()).map(|c| ops.from_poly(f, c as u32)).collect();
        FreeMap::new(ring, source, module.clone(), cols)
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn cols(&self) -> &[Vector<F::Elem>] {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> Poly<F> {
        self.cols[c].component(r)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|v| v.is_zero())
    }

    /// Image of a vector of the source.
    pub fn apply(&self, u: &Vector<F::Elem>) -> Vector<F::Elem> {
        let order = top_order(&self.ring, &self.target);
        let ops = VecOps::new(self.ring.field(), &order);
        let sorder = top_order(&self.ring, &self.source);
        let sops = VecOps::new(self.ring.field(), &sorder);
        let parts = sops.to_components(u, self.source.rank());
        let mut acc = Vector::zero();
        for (c, p) in parts.iter().enumerate() {
            if !p.is_zero() {
                acc = ops.add(&acc, &ops.mul_poly(p, &self.cols[c]));
            }
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeMap<F>) -> Result<FreeMap<F>> {
        if other.target != self.source {
            return Err(Error::structural("composition of incompatible maps"));
        }
        let cols = other.cols.iter().map(|v| self.apply(v)).collect();
        FreeMap::new(&self.ring, other.source.clone(), self.target.clone(), cols)
    }

    /// `Hom(-, A)`: a map `target^* -> source^*` whose columns are the rows.
    pub fn transpose(&self) -> FreeMap<F> {
        let src = self.target.dual();
        let tgt = self.source.dual();
        let order = top_order(&self.ring, &tgt);
        let ops = VecOps::new(self.ring.field(), &order);
        let mut rows: Vec<Vec<crate::groebner::Term<F::Elem>>> = vec![Vec::new(); self.target.rank()];
        for (c, v) in self.cols.iter().enumerate() {
            for t in v.terms() {
                rows[t.comp as usize].push(crate::groebner::Term {
                    mon: t.mon.clone(),
                    comp: c as u32,
                    coeff: t.coeff.clone(),
                });
            }
        }
        let cols = rows.into_iter().map(|r| ops.from_terms(r)).collect();
        FreeMap {
            ring: self.ring.clone(),
            source: src,
            target: tgt,
            cols,
        }
    }

    /// Entries as a table of polynomials, rows by target generators.
    pub fn entries(&self) -> Vec<Vec<Poly<F>>> {
        (0..self.target.rank())
            .map(|r| (0..self.source.rank()).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    /// True when every entry lies in the irrelevant ideal.
    pub fn is_minimal(&self) -> bool {
        self.cols
            .iter()
            .all(|v| v.terms().iter().all(|t| !t.mon.is_one()))
    }

    pub fn as_module_gens(&self) -> Result<ModuleGens<F>> {
        ModuleGens::new(
            &self.ring,
            self.target.clone(),
            self.cols.clone(),
            self.source.gen_degrees().to_vec(),
        )
    }
}

/// `0 <- F_0 <- F_1 <- ... <- F_len`, resolving `A/I` with `F_0 = A`.
#[derive(Clone, Debug)]
pub struct GradedFreeResolution<F: Field> {
    ring: PolyRing<F>,
    modules: Vec<FreeModule>,
    /// `diffs[j-1]` is `d_j : F_j -> F_{j-1}`.
    diffs: Vec<FreeMap<F>>,
    minimal: bool,
}

/// One Betti number: `multiplicity` copies of `A(-degree)` at `step`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub step: usize,
    pub degree: i64,
    pub multiplicity: usize,
}

impl<F: Field> GradedFreeResolution<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    /// Index of the last nonzero module.
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, j: usize) -> FreeModule {
        self.modules.get(j).cloned().unwrap_or_else(|| FreeModule::new(Vec::new()))
    }

    /// `d_j : F_j -> F_{j-1}` for `j ≥ 1`; zero maps beyond the length.
    pub fn differential(&self, j: usize) -> FreeMap<F> {
        assert!(j >= 1, "differentials start at d_1");
        match self.diffs.get(j - 1) {
            Some(d) => d.clone(),
            None => FreeMap {
                ring: self.ring.clone(),
                source: self.module(j),
                target: self.module(j - 1),
                cols: vec![Vector::zero(); self.module(j).rank()],
            },
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Graded Betti numbers; only defined for minimal resolutions.
    pub fn betti(&self) -> Result<Vec<BettiEntry>> {
        if !self.minimal {
            return Err(Error::domain("Betti numbers need a minimal resolution"));
        }
        let mut table: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for (j, m) in self.modules.iter().enumerate() {
            for &d in m.gen_degrees() {
                *table.entry((j, d)).or_insert(0) += 1;
            }
        }
        Ok(table
            .into_iter()
            .map(|((step, degree), multiplicity)| BettiEntry {
                step,
                degree,
                multiplicity,
            })
            .collect())
    }

    /// `Σ_j (-1)^j Σ_a s^a β_{j,a}`: the Hilbert numerator of `A/I`.
    pub fn euler_numerator(&self) -> crate::groebner::Laurent {
        let mut n = crate::groebner::Laurent::zero();
        for (j, m) in self.modules.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            for &d in m.gen_degrees() {
                n.add_term(d, sign);
            }
        }
        n
    }

    /// Frobenius pullback: degrees times `q`, entries raised to the `q`-th
    /// power. By flatness of Frobenius it resolves `A/I^[q]` when `self`
    /// resolves `A/I`.
    pub fn frobenius(&self, q: u32) -> Result<GradedFreeResolution<F>> {
        let ring = &self.ring;
        let field = ring.field();
        let modules: Vec<FreeModule> = self
            .modules
            .iter()
            .map(|m| FreeModule::new(m.gen_degrees().iter().map(|d| d * q as i64).collect()))
            .collect();
        if field.characteristic() == 0 || !crate::ring::poly::is_power_of(q as u64, field.characteristic()) {
            return Err(Error::domain(format!(
                "{q} is not a power of the characteristic {}",
                field.characteristic()
            )));
        }
        let mut diffs = Vec::with_capacity(self.diffs.len());
        for (j, d) in self.diffs.iter().enumerate() {
            let order = top_order(ring, &modules[j]);
            let ops = VecOps::new(field, &order);
            let mut cols = Vec::with_capacity(d.cols.len());
            for v in &d.cols {
                let mut terms = Vec::with_capacity(v.len());
                for t in v.terms() {
                    let mon = t
                        .mon
                        .checked_pow(q)
                        .ok_or_else(|| Error::domain("exponent overflow in Frobenius power"))?;
                    terms.push(crate::groebner::Term {
                        mon,
                        comp: t.comp,
                        coeff: field.pow(&t.coeff, q as u64),
                    });
                }
                cols.push(ops.from_terms(terms));
            }
            diffs.push(FreeMap::new(ring, modules[j + 1].clone(), modules[j].clone(), cols)?);
        }
        Ok(GradedFreeResolution {
            ring: ring.clone(),
            modules,
            diffs,
            minimal: self.minimal,
        })
    }

    /// `d_{j} ∘ d_{j+1} = 0` for all `j`.
    pub fn check_complex(&self) -> Result<bool> {
        for j in 1..self.diffs.len() {
            if !self.diffs[j - 1].compose(&self.diffs[j])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Resolution of `A/I` by iterated syzygies. With `minimal`, each step keeps
/// a minimal generating set of the syzygies, which makes the result minimal.
pub fn free_resolution<F: Field>(ideal: &Ideal<F>, minimal: bool) -> Result<GradedFreeResolution<F>> {
    let ring = ideal.ring().clone();
    let f0 = FreeModule::new(vec![0]);
    let gens = if minimal {
        ideal.minimal_generators()?
    } else {
        ideal.gens().to_vec()
    };
    let mut modules = vec![f0.clone()];
    let mut diffs = Vec::new();
    if !gens.is_empty() {
        let order = top_order(&ring, &f0);
        let ops = VecOps::new(ring.field(), &order);
        let mut m = ModuleGens::from_vectors(&ring, f0, gens.iter().map(|g| ops.from_poly(g, 0)).collect())?;
        loop {
            let src = m.source();
            diffs.push(FreeMap::new(&ring, src.clone(), m.ambient().clone(), m.gens().to_vec())?);
            modules.push(src);
            assert!(
                modules.len() - 1 <= ring.nvars(),
                "resolution longer than the number of variables"
            );
            let syz = m.syzygies(minimal)?;
            if syz.is_empty() {
                break;
            }
            m = syz;
        }
    }
    Ok(GradedFreeResolution {
        ring,
        modules,
        diffs,
        minimal,
    })
}

/// Chain map between two resolutions, `maps[j] : F^src_j -> F^dst_j`.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    maps: Vec<FreeMap<F>>,
}

impl<F: Field> ChainMap<F> {
    pub fn step(&self, j: usize) -> &FreeMap<F> {
        &self.maps[j]
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `d^dst_j ∘ φ_j = φ_{j-1} ∘ d^src_j` for every `j`.
    pub fn commutes(&self, src: &GradedFreeResolution<F>, dst: &GradedFreeResolution<F>) -> Result<bool> {
        for j in 1..self.maps.len() {
            let left = dst.differential(j).compose(&self.maps[j])?;
            let right = self.maps[j - 1].compose(&src.differential(j))?;
            for (a, b) in left.cols.iter().zip(&right.cols) {
                if a != b {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Lifts `A/J ↠ A/I` (`1 ↦ 1`, `J ⊆ I`) to `res_j -> res_i`, starting from a
/// given map `φ_0 : A -> A` (the identity for the quotient map).
pub fn lift_chain_map<F: Field>(
    res_j: &GradedFreeResolution<F>,
    res_i: &GradedFreeResolution<F>,
) -> Result<ChainMap<F>> {
    let ring = res_j.ring();
    lift_from(res_j, res_i, FreeMap::identity(ring, &res_j.module(0)))
}

/// Lifts a degree-preserving `φ_0 : F^src_0 -> F^dst_0` with
/// `φ_0(im d^src_1) ⊆ im d^dst_1` to a chain map.
pub fn lift_from<F: Field>(
    src: &GradedFreeResolution<F>,
    dst: &GradedFreeResolution<F>,
    phi0: FreeMap<F>,
) -> Result<ChainMap<F>> {
    let ring = src.ring().clone();
    ring.check_same(dst.ring())?;
    let mut maps = vec![phi0];
    for j in 1..=src.length() {
        let d_src = src.differential(j);
        let d_dst = dst.differential(j);
        let prev = maps.last().expect("nonempty").clone();
        let lifter = if d_dst.source().rank() > 0 {
            Some(d_dst.as_module_gens()?.lifter()?)
        } else {
            None
        };
        let mut cols = Vec::with_capacity(d_src.source().rank());
        for c in 0..d_src.source().rank() {
            let v = prev.apply(&d_src.cols()[c]);
            if v.is_zero() {
                cols.push(Vector::zero());
                continue;
            }
            let lifted = lifter.as_ref().and_then(|l| l.lift(&v)).ok_or_else(|| {
                Error::domain(if j == 1 {
                    "source ideal is not contained in the target ideal".to_string()
                } else {
                    format!("cannot lift the chain map at step {j}")
                })
            })?;
            cols.push(lifted);
        }
        maps.push(FreeMap::new(&ring, d_src.source().clone(), d_dst.source().clone(), cols)?);
    }
    Ok(ChainMap { maps })
}
