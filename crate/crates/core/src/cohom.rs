//! Graded `Ext^j_A(A/I, A)` from a minimal resolution, local cohomology
//! tables through graded local duality, and the degree tests built on them.
//!
//! `dim [H^i_m(A/I)]_t = dim [Ext^{n-i}_A(A/I, A)]_{-t-d}`, `d = Σ deg x_i`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{
    groebner, quotient_series, top_order, FreeModule, Gb, GbConfig, HilbertSeries, Ideal, Laurent, ModuleGens,
    VecOps, Vector,
};
use crate::resolve::{free_resolution, lift_chain_map, FreeMap, GradedFreeResolution};
use crate::ring::{Field, Poly, PolyRing};

/// `Z / B` with `B ⊆ Z ⊆ ambient`, kept unminimized.
///
/// `Z` is the kernel of `next`, so it is computed only when a map or a
/// witness needs explicit cocycles; the Hilbert series never needs it.
#[derive(Debug)]
pub struct GradedModulePresentation<F: Field> {
    ring: PolyRing<F>,
    ambient: FreeModule,
    boundaries: ModuleGens<F>,
    /// Columns are the images of the ambient basis; its kernel is `Z`.
    next: ModuleGens<F>,
    series: HilbertSeries,
    boundary_gb: OnceLock<Arc<Gb<F>>>,
    cocycles: OnceLock<ModuleGens<F>>,
}

impl<F: Field> GradedModulePresentation<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn boundaries(&self) -> &ModuleGens<F> {
        &self.boundaries
    }

    pub fn hilbert_series(&self) -> &HilbertSeries {
        &self.series
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn is_finite_length(&self) -> bool {
        self.series.is_finite_length()
    }

    /// Dimension of the degree-`t` piece.
    pub fn dim(&self, t: i64) -> u64 {
        self.series.coefficient(t) as u64
    }

    /// Lowest degree of a nonzero element.
    pub fn initial_degree(&self) -> Option<i64> {
        self.series.initial_degree()
    }

    /// Highest nonzero degree of a finite-length module.
    pub fn top_degree(&self) -> Option<i64> {
        self.series.as_polynomial().and_then(|p| p.max_exp())
    }

    pub fn boundary_gb(&self) -> Result<Arc<Gb<F>>> {
        if let Some(g) = self.boundary_gb.get() {
            return Ok(g.clone());
        }
        let g = Arc::new(self.boundaries.gb()?);
        Ok(self.boundary_gb.get_or_init(|| g).clone())
    }

    /// Explicit generators of `Z`.
    pub fn cocycles(&self) -> Result<&ModuleGens<F>> {
        if let Some(z) = self.cocycles.get() {
            return Ok(z);
        }
        let order = top_order(&self.ring, &self.ambient);
        let ops = VecOps::new(self.ring.field(), &order);
        let (gens, degrees): (Vec<_>, Vec<_>) = if self.next.ambient().rank() == 0 {
            (0..self.ambient.rank())
                .map(|c| (ops.from_poly(&self.ring.one(), c as u32), self.ambient.gen_degrees()[c]))
                .unzip()
        } else {
            let syz = self.next.syzygies(true)?;
            syz.gens()
                .iter()
                .zip(syz.degrees())
                .map(|(v, &d)| (ops.import(v), d))
                .unzip()
        };
        let z = ModuleGens::new(&self.ring, self.ambient.clone(), gens, degrees)?;
        Ok(self.cocycles.get_or_init(|| z))
    }

    /// Whether `v` (a vector of the ambient module) lies in `B`.
    pub fn is_boundary(&self, v: &Vector<F::Elem>) -> Result<bool> {
        let gb = self.boundary_gb()?;
        let ops = VecOps::new(self.ring.field(), gb.order());
        Ok(gb.contains(&ops.import(v)))
    }

    /// Reduced representative of `v` modulo `B`.
    pub fn reduce(&self, v: &Vector<F::Elem>) -> Result<Vector<F::Elem>> {
        let gb = self.boundary_gb()?;
        let ops = VecOps::new(self.ring.field(), gb.order());
        Ok(gb.normal_form(&ops.import(v)))
    }

    /// `B ⊆ Z`, checked generator by generator.
    pub fn verify(&self) -> Result<bool> {
        let z = self.cocycles()?;
        let zgb = z.gb()?;
        let ops = VecOps::new(self.ring.field(), zgb.order());
        Ok(self.boundaries.gens().iter().all(|b| zgb.contains(&ops.import(b))))
    }

    /// Components of `v` as printable polynomials.
    pub fn format_vector(&self, v: &Vector<F::Elem>) -> Vec<String> {
        let order = top_order(&self.ring, &self.ambient);
        let ops = VecOps::new(self.ring.field(), &order);
        ops.to_components(v, self.ambient.rank())
            .iter()
            .map(|p| self.ring.format(p))
            .collect()
    }
}

/// All `Ext^j_A(A/I, A)`, `j = 0..=n`, from one minimal resolution.
#[derive(Debug)]
pub struct ExtModules<F: Field> {
    ideal: Ideal<F>,
    resolution: GradedFreeResolution<F>,
    modules: Vec<GradedModulePresentation<F>>,
}

impl<F: Field> ExtModules<F> {
    pub fn ideal(&self) -> &Ideal<F> {
        &self.ideal
    }

    pub fn ring(&self) -> &PolyRing<F> {
        self.ideal.ring()
    }

    pub fn resolution(&self) -> &GradedFreeResolution<F> {
        &self.resolution
    }

    pub fn ext(&self, j: usize) -> &GradedModulePresentation<F> {
        &self.modules[j]
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    /// Largest `j` with `Ext^j ≠ 0`.
    pub fn top_index(&self) -> Option<usize> {
        (0..self.modules.len()).rev().find(|&j| !self.modules[j].is_zero())
    }

    /// Largest shift `a` with `A(-a)` in the resolution.
    pub fn max_twist(&self) -> i64 {
        (0..=self.resolution.length())
            .flat_map(|j| self.resolution.module(j).gen_degrees().to_vec())
            .max()
            .unwrap_or(0)
    }
}

fn free_series(module: &FreeModule, weights: &[u32]) -> HilbertSeries {
    let mut num = Laurent::zero();
    for &a in module.gen_degrees() {
        num.add_term(a, 1);
    }
    HilbertSeries::new(num, weights)
}

/// `Ext^j(A/I, A)` as cohomology of `Hom(F_•, A)`, where `F_j^*` has a basis
/// element of degree `-a` for each `A(-a)` in `F_j`.
pub fn ext_modules<F: Field>(ideal: &Ideal<F>) -> Result<ExtModules<F>> {
    let resolution = free_resolution(ideal, true)?;
    ext_from_resolution(ideal, resolution)
}

pub fn ext_from_resolution<F: Field>(
    ideal: &Ideal<F>,
    resolution: GradedFreeResolution<F>,
) -> Result<ExtModules<F>> {
    let ring = ideal.ring().clone();
    let n = ring.nvars();
    let weights = ring.weights().to_vec();
    let duals: Vec<FreeModule> = (0..=n + 1).map(|j| resolution.module(j).dual()).collect();
    // B_j = image of d_j^T inside F_j^*, with its Gröbner basis.
    let boundaries: Vec<(ModuleGens<F>, Arc<Gb<F>>)> = (0..=n + 1)
        .into_par_iter()
        .map(|j| -> Result<_> {
            let gens = if j == 0 {
                Vec::new()
            } else {
                let dt = resolution.differential(j).transpose();
                let order = top_order(&ring, &duals[j]);
                let ops = VecOps::new(ring.field(), &order);
                dt.cols().iter().map(|v| ops.import(v)).collect()
            };
            let b = ModuleGens::from_vectors(&ring, duals[j].clone(), gens)?;
            let order = top_order(&ring, &duals[j]);
            let mut gb = groebner(ring.field(), &order, b.gens(), &GbConfig::default())?;
            gb.interreduce();
            Ok((b, Arc::new(gb)))
        })
        .collect::<Result<_>>()?;
    let quotients: Vec<HilbertSeries> = boundaries
        .iter()
        .enumerate()
        .map(|(j, (_, gb))| quotient_series(gb, &duals[j], &weights))
        .collect();
    let mut modules = Vec::with_capacity(n + 1);
    for j in 0..=n {
        // HS(F_j^*/Z_j) = HS(im d_{j+1}^T) = HS(F_{j+1}^*) - HS(F_{j+1}^*/B_{j+1})
        let image = free_series(&duals[j + 1], &weights).sub(&quotients[j + 1]);
        let series = quotients[j].sub(&image);
        let next_cols = if j < resolution.length() {
            resolution.differential(j + 1).transpose().cols().to_vec()
        } else {
            Vec::new()
        };
        let next = if next_cols.is_empty() {
            ModuleGens::new(&ring, FreeModule::new(Vec::new()), Vec::new(), Vec::new())?
        } else {
            ModuleGens::new(&ring, duals[j + 1].clone(), next_cols, duals[j].gen_degrees().to_vec())?
        };
        let (b, gb) = boundaries[j].clone();
        let cell = OnceLock::new();
        let _ = cell.set(gb);
        modules.push(GradedModulePresentation {
            ring: ring.clone(),
            ambient: duals[j].clone(),
            boundaries: b,
            next,
            series,
            boundary_gb: cell,
            cocycles: OnceLock::new(),
        });
    }
    Ok(ExtModules {
        ideal: ideal.clone(),
        resolution,
        modules,
    })
}

/// Krull dimension of `A/I`; `-1` for the unit ideal.
pub fn krull_dim<F: Field>(ideal: &Ideal<F>) -> Result<i64> {
    ideal.krull_dim()
}

/// `n - max{j : Ext^j ≠ 0}`, cross-checked against `n - pd(A/I)`.
pub fn depth<F: Field>(ext: &ExtModules<F>) -> Result<i64> {
    let n = ext.nvars() as i64;
    let top = ext
        .top_index()
        .ok_or_else(|| Error::domain("depth of the zero ring"))?;
    let pd = ext.resolution().length() as i64;
    if top as i64 != pd {
        return Err(Error::domain(format!(
            "top nonvanishing Ext index {top} differs from the projective dimension {pd}"
        )));
    }
    Ok(n - top as i64)
}

/// `dim [H^i_m(A/I)]_t` for all `(i, t)`, read off the `Ext` series.
#[derive(Clone, Debug, Serialize)]
pub struct LocalCohomologyTable {
    pub n: usize,
    pub d: i64,
    /// Inclusive window used for modules with an infinite tail toward `t → -∞`.
    pub window: (i64, i64),
    pub rows: Vec<LcRow>,
    pub modules: Vec<LcModule>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct LcRow {
    pub i: usize,
    pub t: i64,
    pub dim: u64,
}

/// Support data for one `H^i_m`.
#[derive(Clone, Debug, Serialize)]
pub struct LcModule {
    pub i: usize,
    pub zero: bool,
    pub finite_length: bool,
    /// No nonzero piece above this degree.
    pub upper: Option<i64>,
    /// No nonzero piece below this degree (finite length only).
    pub lower: Option<i64>,
    #[serde(skip)]
    series: HilbertSeries,
}

impl LcModule {
    /// Dimension at degree `t`, given `d`.
    fn dim(&self, t: i64, d: i64) -> u64 {
        self.series.coefficient(-t - d) as u64
    }
}

impl LocalCohomologyTable {
    pub fn dim(&self, i: usize, t: i64) -> u64 {
        self.modules.get(i).map_or(0, |m| m.dim(t, self.d))
    }

    pub fn module(&self, i: usize) -> &LcModule {
        &self.modules[i]
    }

    /// Whole support of `H^i_m`; an infinite tail needs a window.
    pub fn support(&self, i: usize) -> Result<Vec<(i64, u64)>> {
        let m = &self.modules[i];
        if m.zero {
            return Ok(Vec::new());
        }
        if !m.finite_length {
            return Err(Error::WindowRequired(format!(
                "H^{i} is nonzero in infinitely many negative degrees"
            )));
        }
        Ok(self.scan(i, m.lower.unwrap(), m.upper.unwrap()))
    }

    /// Nonzero `(t, dim)` for `lo ≤ t ≤ hi`.
    pub fn scan(&self, i: usize, lo: i64, hi: i64) -> Vec<(i64, u64)> {
        let m = &self.modules[i];
        if m.zero {
            return Vec::new();
        }
        let lo = m.lower.map_or(lo, |l| lo.max(l));
        let hi = m.upper.map_or(hi, |u| hi.min(u));
        (lo..=hi)
            .filter_map(|t| {
                let v = m.dim(t, self.d);
                (v > 0).then_some((t, v))
            })
            .collect()
    }

    /// Sum over all degrees; `None` for an infinite tail.
    pub fn total(&self, i: usize) -> Option<u64> {
        self.support(i).ok().map(|s| s.iter().map(|&(_, v)| v).sum())
    }

    /// Smallest `i` with `H^i_m ≠ 0`.
    pub fn depth(&self) -> Option<usize> {
        self.modules.iter().position(|m| !m.zero)
    }

    /// Largest `i` with `H^i_m ≠ 0`.
    pub fn dimension(&self) -> Option<usize> {
        self.modules.iter().rposition(|m| !m.zero)
    }
}

/// Default window for infinite tails: `-(d + max twist) ..= max twist - d`.
pub fn default_window<F: Field>(ext: &ExtModules<F>) -> (i64, i64) {
    let d = ext.ring().spec().d();
    let a = ext.max_twist();
    (-(d + a), a - d)
}

pub fn local_cohomology_table<F: Field>(ext: &ExtModules<F>, window: Option<(i64, i64)>) -> LocalCohomologyTable {
    let n = ext.nvars();
    let d = ext.ring().spec().d();
    let window = window.unwrap_or_else(|| default_window(ext));
    let modules: Vec<LcModule> = (0..=n)
        .map(|i| {
            let e = ext.ext(n - i);
            let series = e.hilbert_series().clone();
            LcModule {
                i,
                zero: e.is_zero(),
                finite_length: e.is_finite_length(),
                upper: e.initial_degree().map(|s| -s - d),
                lower: e.top_degree().map(|s| -s - d),
                series,
            }
        })
        .collect();
    let mut table = LocalCohomologyTable {
        n,
        d,
        window,
        rows: Vec::new(),
        modules,
    };
    let mut rows = Vec::new();
    for i in 0..=n {
        let found = table
            .support(i)
            .unwrap_or_else(|_| table.scan(i, window.0, window.1));
        rows.extend(found.into_iter().map(|(t, dim)| LcRow { i, t, dim }));
    }
    table.rows = rows;
    table
}

/// A nonzero class of `Ext^j` in a given degree.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExtWitness {
    pub j: usize,
    pub degree: i64,
    pub vector: Vec<String>,
}

/// Degree-shifting map `Ext^j(source) -> Ext^j(target)` induced by a free map
/// `matrix` between the ambient modules, sending degree `t` to `t + shift`.
pub struct ExtMap<'a, F: Field> {
    pub j: usize,
    pub source: &'a GradedModulePresentation<F>,
    pub target: &'a GradedModulePresentation<F>,
    pub matrix: FreeMap<F>,
    pub shift: i64,
}

impl<F: Field> ExtMap<'_, F> {
    /// Generators of `{z ∈ Z_source : matrix(z) ∈ B_target}`.
    pub fn kernel_cocycles(&self) -> Result<ModuleGens<F>> {
        let ring = self.source.ring();
        let z = self.source.cocycles()?;
        let amb = self.target.ambient().clone();
        let torder = top_order(ring, &amb);
        let tops = VecOps::new(ring.field(), &torder);
        let mut gens: Vec<Vector<F::Elem>> = z.gens().iter().map(|v| tops.import(&self.matrix.apply(v))).collect();
        let mut degrees: Vec<i64> = z.degrees().iter().map(|d| d + self.shift).collect();
        for (b, &d) in self.target.boundaries().gens().iter().zip(self.target.boundaries().degrees()) {
            gens.push(b.clone());
            degrees.push(d);
        }
        let sorder = top_order(ring, self.source.ambient());
        let sops = VecOps::new(ring.field(), &sorder);
        let kz = z.len();
        if gens.is_empty() {
            return ModuleGens::new(ring, self.source.ambient().clone(), Vec::new(), Vec::new());
        }
        let syz = ModuleGens::new(ring, amb, gens, degrees)?.syzygies(true)?;
        let cut = FreeModule::new(z.degrees().to_vec());
        let sub = FreeMap::new(ring, cut, self.source.ambient().clone(), z.gens().to_vec())?;
        let mut out = Vec::new();
        for s in syz.gens() {
            let c = s.restrict(0..kz);
            if c.is_zero() {
                continue;
            }
            let v = sops.import(&sub.apply(&c));
            if !v.is_zero() {
                out.push(v);
            }
        }
        ModuleGens::from_vectors(ring, self.source.ambient().clone(), out)
    }

    /// Injectivity, optionally counting only kernel classes of degree
    /// `≥ min_degree`, with a nonzero kernel class when it fails.
    pub fn is_injective(&self, min_degree: Option<i64>) -> Result<Injectivity> {
        is_injective(self, min_degree)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Injectivity {
    pub j: usize,
    pub injective: bool,
    pub witness: Option<ExtWitness>,
}

pub fn is_injective<F: Field>(map: &ExtMap<'_, F>, min_degree: Option<i64>) -> Result<Injectivity> {
    let src = map.source;
    let mut out = Injectivity {
        j: map.j,
        injective: true,
        witness: None,
    };
    if src.is_zero() {
        return Ok(out);
    }
    let k = map.kernel_cocycles()?;
    let ring = src.ring();
    let order = top_order(ring, src.ambient());
    let ops = VecOps::new(ring.field(), &order);
    let maxw = ring.weights().iter().copied().max().unwrap_or(1) as i64;
    for (v, &deg) in k.gens().iter().zip(k.degrees()) {
        let lo = min_degree.unwrap_or(deg);
        if deg >= lo {
            let r = src.reduce(v)?;
            if !r.is_zero() {
                out.injective = false;
                out.witness = Some(ExtWitness {
                    j: map.j,
                    degree: deg,
                    vector: src.format_vector(&r),
                });
                return Ok(out);
            }
            continue;
        }
        // Every monomial of degree ≥ lo - deg is a multiple of one whose
        // degree lies in [lo - deg, lo - deg + maxw).
        for e in (lo - deg)..(lo - deg + maxw) {
            for m in ring.monomials_of_degree(e) {
                let mv = ops.mul_term(v, &m, &ring.field().one());
                let r = src.reduce(&mv)?;
                if !r.is_zero() {
                    out.injective = false;
                    out.witness = Some(ExtWitness {
                        j: map.j,
                        degree: deg + e,
                        vector: src.format_vector(&r),
                    });
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Maps `Ext^j(A/I, A) -> Ext^j(A/J, A)` for all `j`, induced by `A/J ↠ A/I`.
pub struct ExtMaps<'a, F: Field> {
    pub maps: Vec<ExtMap<'a, F>>,
}

/// Dualizes the lift of `A/J ↠ A/I` (requires `J ⊆ I`); `ext_i` and
/// `ext_j` are the Ext data of `I` and `J`.
pub fn induced_ext_maps<'a, F: Field>(ext_i: &'a ExtModules<F>, ext_j: &'a ExtModules<F>) -> Result<ExtMaps<'a, F>> {
    if !ext_j.ideal().is_subset_of(ext_i.ideal())? {
        return Err(Error::domain("the smaller ideal is not contained in the larger one"));
    }
    let chain = lift_chain_map(ext_j.resolution(), ext_i.resolution())?;
    let ring = ext_i.ring();
    let n = ring.nvars();
    let mut maps = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let matrix = if j < chain.len() {
            chain.step(j).transpose()
        } else {
            FreeMap::new(ring, ext_i.ext(j).ambient().clone(), ext_j.ext(j).ambient().clone(), vec![
                Vector::zero();
                ext_i.ext(j).ambient().rank()
            ])?
        };
        maps.push(ExtMap {
            j,
            source: ext_i.ext(j),
            target: ext_j.ext(j),
            matrix,
            shift: 0,
        });
    }
    Ok(ExtMaps { maps })
}

/// Multiplication by a homogeneous `x` on `Ext^j(A/I, A)`, `t ↦ t + deg x`.
pub fn multiplication_map<'a, F: Field>(
    ext: &'a ExtModules<F>,
    j: usize,
    x: &Poly<F>,
) -> Result<ExtMap<'a, F>> {
    let e = ext.ext(j);
    let ring = ext.ring();
    let shift = x.degree().unwrap_or(0);
    let s = FreeMap::scalar(ring, e.ambient(), x)?;
    Ok(ExtMap {
        j,
        source: e,
        target: e,
        matrix: s,
        shift,
    })
}

/// Hypotheses a report states without checking them.
pub type Assertions = Vec<String>;

#[derive(Clone, Debug, Serialize)]
pub struct DegreeVerdict {
    pub hypotheses: Assertions,
    pub satisfied: bool,
    /// Offending `(i, t, dim)`.
    pub offending: Vec<LcRow>,
    pub table: LocalCohomologyTable,
}

/// `[H^i_m(R)]_{>0} = 0` for all `i ≥ 1`.
pub fn du_bois_graded_criterion<F: Field>(ext: &ExtModules<F>) -> DegreeVerdict {
    let table = local_cohomology_table(ext, None);
    let mut offending = Vec::new();
    for i in 1..=table.n {
        let m = table.module(i);
        if let Some(u) = m.upper {
            offending.extend(table.scan(i, 1, u).into_iter().map(|(t, dim)| LcRow { i, t, dim }));
        }
    }
    DegreeVerdict {
        hypotheses: vec!["R_P is Du Bois for every homogeneous prime P other than m".into()],
        satisfied: offending.is_empty(),
        offending,
        table,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingEntry {
    pub i: usize,
    pub finite_length: bool,
    /// `None` when the index is outside the finite-length hypothesis.
    pub vanishes: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub hypotheses: Assertions,
    pub satisfied: bool,
    pub entries: Vec<VanishingEntry>,
    pub offending: Vec<LcRow>,
    pub table: LocalCohomologyTable,
}

/// `[H^i_m(R)]_{<0} = 0` at every `i` whose `H^i_m` has finite length.
pub fn vanishing_check<F: Field>(ext: &ExtModules<F>) -> VanishingReport {
    let table = local_cohomology_table(ext, None);
    let mut entries = Vec::new();
    let mut offending = Vec::new();
    for i in 0..=table.n {
        let m = table.module(i);
        let vanishes = if m.finite_length {
            let bad: Vec<LcRow> = match m.lower {
                Some(l) if l < 0 => table
                    .scan(i, l, -1)
                    .into_iter()
                    .map(|(t, dim)| LcRow { i, t, dim })
                    .collect(),
                _ => Vec::new(),
            };
            let ok = bad.is_empty();
            offending.extend(bad);
            Some(ok)
        } else {
            None
        };
        entries.push(VanishingEntry {
            i,
            finite_length: m.finite_length,
            vanishes,
        });
    }
    VanishingReport {
        hypotheses: vec![
            "R is Du Bois away from m".into(),
            "the checked H^i_m are exactly those of finite length".into(),
        ],
        satisfied: offending.is_empty(),
        entries,
        offending,
        table,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StcmReport {
    pub hypotheses: Assertions,
    pub krull_dim: i64,
    /// `(i, t, dim)` with `i < dim R`, `t ≤ 0` and nonzero dimension.
    pub hits: Vec<LcRow>,
    /// Indices whose hits extend below the window.
    pub infinite_tail: Vec<usize>,
    pub obstructed: bool,
    pub table: LocalCohomologyTable,
}

/// Nonzero `[H^i_m(R)]_t` with `i < dim R` and `t ≤ 0`.
pub fn set_theoretic_cm_obstruction<F: Field>(ext: &ExtModules<F>) -> Result<StcmReport> {
    let table = local_cohomology_table(ext, None);
    let dim = ext.ideal().krull_dim()?;
    let mut hits = Vec::new();
    let mut infinite_tail = Vec::new();
    for i in 0..dim.max(0) as usize {
        let m = table.module(i);
        if m.zero {
            continue;
        }
        let lo = match m.lower {
            Some(l) => l,
            None => {
                infinite_tail.push(i);
                table.window.0
            }
        };
        if lo <= 0 {
            hits.extend(table.scan(i, lo, 0).into_iter().map(|(t, dim)| LcRow { i, t, dim }));
        }
    }
    Ok(StcmReport {
        hypotheses: vec!["R is Du Bois on the punctured spectrum".into()],
        krull_dim: dim,
        obstructed: !hits.is_empty() || !infinite_tail.is_empty(),
        hits,
        infinite_tail,
        table,
    })
}

/// Count of each `(i, t)` row, for comparisons in tests and the corpus.
pub fn table_map(table: &LocalCohomologyTable) -> BTreeMap<(usize, i64), u64> {
    table.rows.iter().map(|r| ((r.i, r.t), r.dim)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::kernel_of_ring_map;
    use crate::ring::{parse_polynomial, FieldSpec, GradedRingSpec, Rationals};

    fn qring(vars: &[&str]) -> PolyRing<Rationals> {
        PolyRing::new(GradedRingSpec::standard(vars, FieldSpec::Rationals).unwrap(), Rationals).unwrap()
    }

    fn pinched() -> Ideal<Rationals> {
        let a = qring(&["x", "y", "z", "w"]);
        let b = qring(&["s", "t"]);
        let imgs: Vec<Poly<Rationals>> = ["s^4", "s^3*t", "s*t^3", "t^4"]
            .iter()
            .map(|s| parse_polynomial(&b, s).unwrap())
            .collect();
        kernel_of_ring_map(&a, &b, &imgs, None).unwrap()
    }

    #[test]
    fn koszul_ext() {
        let r = qring(&["x", "y"]);
        let ext = ext_modules(&Ideal::parse(&r, &["x", "y"]).unwrap()).unwrap();
        assert!(ext.ext(0).is_zero() && ext.ext(1).is_zero());
        assert_eq!(ext.ext(2).dim(-2), 1);
        assert!(ext.ext(2).is_finite_length());
        let nz: Vec<_> = ext.ext(2).hilbert_series().coefficients(-10, 10).into_iter().filter(|c| c.1 != 0).collect();
        assert_eq!(nz, vec![(-2, 1)]);
        assert!(ext.ext(2).verify().unwrap());
    }

    #[test]
    fn zero_ideal() {
        let r = qring(&["x"]);
        let ext = ext_modules(&Ideal::zero(&r)).unwrap();
        assert_eq!(ext.ext(0).dim(5), 1);
        assert!(ext.ext(1).is_zero());
        let t = local_cohomology_table(&ext, Some((-5, 5)));
        assert_eq!(t.dim(1, -1), 1);
        assert_eq!(t.dim(1, -7), 1);
        assert_eq!(t.dim(1, 0), 0);
        assert!(matches!(t.support(1), Err(Error::WindowRequired(_))));
        assert_eq!(depth(&ext).unwrap(), 1);
    }

    #[test]
    fn hypersurface_only_ext1() {
        let r = qring(&["x", "y", "z"]);
        let ext = ext_modules(&Ideal::parse(&r, &["x^3 + y^3 + z^3"]).unwrap()).unwrap();
        let nz: Vec<usize> = (0..=3).filter(|&j| !ext.ext(j).is_zero()).collect();
        assert_eq!(nz, vec![1]);
        assert_eq!(depth(&ext).unwrap(), 2);
    }

    #[test]
    fn pinched_quartic_table() {
        let ext = ext_modules(&pinched()).unwrap();
        assert_eq!(depth(&ext).unwrap(), 1);
        let t = local_cohomology_table(&ext, None);
        assert_eq!(t.support(1).unwrap(), vec![(1, 1)]);
        assert_eq!(t.depth(), Some(1));
        assert_eq!(t.dimension(), Some(2));
        let db = du_bois_graded_criterion(&ext);
        assert!(!db.satisfied);
        assert_eq!(db.offending, vec![LcRow { i: 1, t: 1, dim: 1 }]);
        let st = set_theoretic_cm_obstruction(&ext).unwrap();
        assert!(st.hits.is_empty() && !st.obstructed);
    }

    #[test]
    fn polynomial_ring_checks() {
        let r = qring(&["x", "y"]);
        let ext = ext_modules(&Ideal::zero(&r)).unwrap();
        assert!(du_bois_graded_criterion(&ext).satisfied);
        assert!(set_theoretic_cm_obstruction(&ext).unwrap().hits.is_empty());
        let v = vanishing_check(&ext);
        assert!(v.satisfied);
    }

    #[test]
    fn nonreduced_vanishing_is_computable() {
        let r = qring(&["x", "y"]);
        let ext = ext_modules(&Ideal::parse(&r, &["x^2"]).unwrap()).unwrap();
        let v = vanishing_check(&ext);
        assert_eq!(v.entries.len(), 3);
        assert_eq!(depth(&ext).unwrap(), 1);
    }

    #[test]
    fn identity_and_power_maps() {
        let r = qring(&["x"]);
        let i = Ideal::parse(&r, &["x"]).unwrap();
        let i2 = Ideal::parse(&r, &["x^2"]).unwrap();
        let ei = ext_modules(&i).unwrap();
        let e2 = ext_modules(&i2).unwrap();
        let same = induced_ext_maps(&ei, &ei).unwrap();
        assert!(same.maps.iter().all(|m| m.is_injective(None).unwrap().injective));
        let maps = induced_ext_maps(&ei, &e2).unwrap();
        assert!(maps.maps[1].is_injective(None).unwrap().injective);
        assert!(matches!(induced_ext_maps(&e2, &ei), Err(Error::Domain(_))));

        let r2 = qring(&["x", "y"]);
        let m = Ideal::parse(&r2, &["x", "y"]).unwrap();
        let em = ext_modules(&m).unwrap();
        let em2 = ext_modules(&m.power(2).unwrap()).unwrap();
        let maps = induced_ext_maps(&em, &em2).unwrap();
        assert!(maps.maps[2].is_injective(None).unwrap().injective);
    }

    #[test]
    fn zero_map_has_witness() {
        // multiplication by x kills Ext^1(A/(x), A)
        let r = qring(&["x", "y"]);
        let ext = ext_modules(&Ideal::parse(&r, &["x"]).unwrap()).unwrap();
        let m = multiplication_map(&ext, 1, &r.var(0)).unwrap();
        let res = m.is_injective(None).unwrap();
        assert!(!res.injective);
        assert_eq!(res.witness.unwrap().degree, -1);
        let m = multiplication_map(&ext, 1, &r.var(1)).unwrap();
        assert!(m.is_injective(None).unwrap().injective);
        // restricted to high degrees the kernel of ·x is still there
        let m = multiplication_map(&ext, 1, &r.var(0)).unwrap();
        let res = m.is_injective(Some(3)).unwrap();
        assert!(!res.injective);
        assert!(res.witness.unwrap().degree >= 3);
    }
}
