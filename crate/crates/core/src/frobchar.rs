//! Characteristic-`p` tests on `R = A/I`, `A = F_p[x_1..x_n]`: Fedder's
//! F-purity criterion, F-injectivity through the Frobenius trace on `Ext`,
//! `Ext` injectivity along `A/J ↠ A/I` and the deformation check.
//!
//! F-injectivity is decided on the Matlis-dual side. With `F_•` resolving
//! `A/I` and its Frobenius pullback `F^{e*}F_•` resolving `A/I^[q]`, the dual
//! of Frobenius on `H^{n-j}_m(R)` is
//!
//! `Ψ : Ext^j(A/I, A) -> Ext^j(A/I^[q], A) -> Ext^j(A/I, A)`,
//!
//! the first map induced by `A/I^[q] ↠ A/I`, the second the trace applied
//! entrywise: `Tr(x^β) = x^{(β - (q-1))/q}` when every `β_i ≡ q-1 (mod q)`
//! and 0 otherwise. Frobenius is injective on `H^{n-j}_m(R)` iff `Ψ` is
//! onto. `Ψ` is `q^{-1}`-linear, so its image is the `A`-span of the
//! `Ψ`-images of `x^α z` for generators `z` of `Ext^j` and `α ∈ [0, q-1]^n`.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::cohom::{ext_modules, induced_ext_maps, multiplication_map, ExtModules, ExtWitness};
use crate::error::{Error, Result};
use crate::groebner::{groebner, top_order, GbConfig, Ideal, ModuleGens, Term, VecOps, Vector};
use crate::resolve::lift_chain_map;
use crate::ring::{Field, Monomial, Poly, PolyRing, PrimeField};

/// `I` over `F_p` with cached Frobenius powers `I^[p^e]`.
pub struct FrobeniusContext {
    p: u64,
    ideal: Ideal<PrimeField>,
    powers: Mutex<BTreeMap<u32, Ideal<PrimeField>>>,
    ext: OnceLock<ExtModules<PrimeField>>,
}

impl FrobeniusContext {
    pub fn new(ideal: &Ideal<PrimeField>) -> Result<Self> {
        let p = ideal.ring().field().characteristic();
        if p == 0 {
            return Err(Error::domain("Frobenius tests need a prime characteristic"));
        }
        Ok(FrobeniusContext {
            p,
            ideal: ideal.clone(),
            powers: Mutex::new(BTreeMap::new()),
            ext: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ideal(&self) -> &Ideal<PrimeField> {
        &self.ideal
    }

    pub fn ring(&self) -> &PolyRing<PrimeField> {
        self.ideal.ring()
    }

    pub fn q(&self, e: u32) -> Result<u32> {
        self.p
            .checked_pow(e)
            .and_then(|q| u32::try_from(q).ok())
            .ok_or_else(|| Error::domain(format!("p^{e} is too large")))
    }

    /// `I^[p^e]`, checked to lie in `I`.
    pub fn frobenius_power(&self, e: u32) -> Result<Ideal<PrimeField>> {
        if let Some(i) = self.powers.lock().unwrap().get(&e) {
            return Ok(i.clone());
        }
        let fp = self.ideal.frobenius_power(self.q(e)?)?;
        if !fp.is_subset_of(&self.ideal)? {
            return Err(Error::domain("Frobenius power is not contained in the ideal"));
        }
        self.powers.lock().unwrap().insert(e, fp.clone());
        Ok(fp)
    }

    pub fn ext(&self) -> Result<&ExtModules<PrimeField>> {
        if let Some(e) = self.ext.get() {
            return Ok(e);
        }
        let e = ext_modules(&self.ideal)?;
        Ok(self.ext.get_or_init(|| e))
    }
}

fn frobenius_maximal_ideal(ring: &PolyRing<PrimeField>, q: u32) -> Result<Ideal<PrimeField>> {
    let gens = (0..ring.nvars())
        .map(|i| ring.frobenius(&ring.var(i), q))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ring, gens)
}

/// `(I^[p] : I) ⊄ m^[p]`.
pub fn fedder_fpure(ctx: &FrobeniusContext) -> Result<bool> {
    let ring = ctx.ring();
    if ctx.ideal.is_unit()? {
        return Err(Error::domain("the quotient ring is zero"));
    }
    let colon = ctx.frobenius_power(1)?.colon(&ctx.ideal)?;
    let mp = frobenius_maximal_ideal(ring, ctx.q(1)?)?;
    Ok(!colon.is_subset_of(&mp)?)
}

/// Outcome at one `j`: Frobenius on `H^{n-j}_m(R)` against `Ψ` on `Ext^j`.
#[derive(Clone, Debug, Serialize)]
pub struct FInjRow {
    pub j: usize,
    pub i: usize,
    pub injective: bool,
    pub witness: Option<FWitness>,
}

/// A class of `Ext^j` outside the image of `Ψ`; `t` is the matching degree
/// of `H^{n-j}_m(R)` where Frobenius has a kernel.
#[derive(Clone, Debug, Serialize)]
pub struct FWitness {
    pub j: usize,
    pub ext_degree: i64,
    pub t: i64,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FInjReport {
    pub p: u64,
    pub e: u32,
    pub injective: bool,
    pub rows: Vec<FInjRow>,
}

/// Entrywise trace `x^β ↦ x^{(β - (q-1))/q}`.
fn trace(ops: &VecOps<'_, PrimeField>, v: &Vector<u64>, q: u32, weights: &[u32]) -> Vector<u64> {
    let q16 = q as u16;
    let terms: Vec<Term<u64>> = v
        .terms()
        .iter()
        .filter(|t| t.mon.exps().iter().all(|&b| b % q16 == q16 - 1))
        .map(|t| {
            let exps: Vec<u16> = t.mon.exps().iter().map(|&b| (b - (q16 - 1)) / q16).collect();
            Term {
                mon: Monomial::new(&exps, weights),
                comp: t.comp,
                coeff: t.coeff,
            }
        })
        .collect();
    ops.from_terms(terms)
}

/// Monomials with every exponent below `q`.
fn box_monomials(n: usize, q: u32, weights: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Vec::<u16>::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..q as u16).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    out.iter().map(|e| Monomial::new(e, weights)).collect()
}

/// Frobenius injectivity on every `H^i_m(R)` with `q = p^e`.
pub fn f_injective_check(ctx: &FrobeniusContext, e: u32) -> Result<FInjReport> {
    if e == 0 {
        return Err(Error::domain("the Frobenius exponent must be positive"));
    }
    let ring = ctx.ring();
    if ctx.ideal.is_unit()? {
        return Err(Error::domain("the quotient ring is zero"));
    }
    let q = ctx.q(e)?;
    let n = ring.nvars();
    let d = ring.spec().d();
    let weights = ring.weights().to_vec();
    let ext = ctx.ext()?;
    let pulled = ext.resolution().frobenius(q)?;
    let chain = lift_chain_map(&pulled, ext.resolution())?;
    let boxes = box_monomials(n, q, &weights);
    let field = ring.field();
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let module = ext.ext(j);
        let mut row = FInjRow {
            j,
            i: n - j,
            injective: true,
            witness: None,
        };
        if module.is_zero() {
            rows.push(row);
            continue;
        }
        let nat = chain.step(j).transpose();
        let amb = module.ambient().clone();
        let order = top_order(ring, &amb);
        let ops = VecOps::new(field, &order);
        let porder = top_order(ring, nat.target());
        let pops = VecOps::new(field, &porder);
        let z = module.cocycles()?;
        let mut images: Vec<Vector<u64>> = Vec::new();
        for g in z.gens() {
            let w = pops.import(&nat.apply(g));
            if w.is_zero() {
                continue;
            }
            for m in &boxes {
                let t = trace(&ops, &pops.mul_term(&w, m, &field.one()), q, &weights);
                if !t.is_zero() {
                    images.push(t);
                }
            }
        }
        images.extend(module.boundaries().gens().iter().cloned());
        let span = ModuleGens::from_vectors(ring, amb.clone(), images)?;
        let mut gb = groebner(field, &span.order(), span.gens(), &GbConfig::default())?;
        gb.interreduce();
        for (g, &deg) in z.gens().iter().zip(z.degrees()) {
            if !gb.contains(&ops.import(g)) {
                row.injective = false;
                row.witness = Some(FWitness {
                    j,
                    ext_degree: deg,
                    t: -deg - d,
                    vector: module.format_vector(&module.reduce(g)?),
                });
                break;
            }
        }
        rows.push(row);
    }
    Ok(FInjReport {
        p: ctx.p,
        e,
        injective: rows.iter().all(|r| r.injective),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtInjRow {
    pub j: usize,
    pub injective: bool,
    pub witness: Option<ExtWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub p: u64,
    /// Smallest `e` with `I^[p^e] ⊆ J`.
    pub e: u32,
    pub injective: bool,
    pub rows: Vec<ExtInjRow>,
}

/// Injectivity of `Ext^j(A/I, A) -> Ext^j(A/J, A)` for all `j`, given
/// `I^[q] ⊆ J ⊆ I` for some `q = p^e` with `e ≤ 8`.
pub fn fpure_surjectivity_check(ctx: &FrobeniusContext, j_ideal: &Ideal<PrimeField>) -> Result<SurjectivityReport> {
    if !j_ideal.is_subset_of(&ctx.ideal)? {
        return Err(Error::domain("J is not contained in I"));
    }
    let mut found = None;
    for e in 0..=8u32 {
        let qi = if e == 0 { ctx.ideal.clone() } else { ctx.frobenius_power(e)? };
        if qi.is_subset_of(j_ideal)? {
            found = Some(e);
            break;
        }
    }
    let e = found.ok_or_else(|| Error::domain("no Frobenius power of I up to p^8 lies in J"))?;
    let ext_i = ctx.ext()?;
    let ext_j = ext_modules(j_ideal)?;
    let maps = induced_ext_maps(ext_i, &ext_j)?;
    let mut rows = Vec::new();
    for m in &maps.maps {
        let r = m.is_injective(None)?;
        rows.push(ExtInjRow {
            j: m.j,
            injective: r.injective,
            witness: r.witness,
        });
    }
    Ok(SurjectivityReport {
        p: ctx.p,
        e,
        injective: rows.iter().all(|r| r.injective),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationReport {
    pub p: u64,
    pub element: String,
    /// `x` is a unit or `I + (x)` is the unit ideal.
    pub degenerate: bool,
    pub leg1: bool,
    pub leg2: bool,
    pub pass: bool,
    pub leg1_detail: Option<FInjReport>,
    pub leg2_detail: Vec<ExtInjRow>,
    pub conclusion: String,
}

/// Frobenius injectivity of `A/(I + (x))` and injectivity of `·x` on every
/// `Ext^j(A/I, A)`; together they give injectivity of `x^{p-1}F` on
/// `H^i_m(A/I)`.
pub fn deformation_check(ctx: &FrobeniusContext, x: &Poly<PrimeField>) -> Result<DeformationReport> {
    let ring = ctx.ring();
    if x.is_zero() || !x.is_homogeneous() {
        return Err(Error::domain("the element must be nonzero and homogeneous"));
    }
    let xi = Ideal::new(ring, vec![x.clone()])?;
    if !ctx.ideal.colon(&xi)?.same_as(&ctx.ideal)? {
        return Err(Error::domain(format!(
            "{} is a zero divisor on the quotient ring",
            ring.format(x)
        )));
    }
    let element = ring.format(x);
    let cut = ctx.ideal.sum(&xi)?;
    if x.is_constant() || cut.is_unit()? {
        return Ok(DeformationReport {
            p: ctx.p,
            element,
            degenerate: true,
            leg1: false,
            leg2: true,
            pass: false,
            leg1_detail: None,
            leg2_detail: Vec::new(),
            conclusion: "degenerate input: R/xR is the zero ring".into(),
        });
    }
    let leg1_detail = f_injective_check(&FrobeniusContext::new(&cut)?, 1)?;
    let ext = ctx.ext()?;
    let mut leg2_detail = Vec::new();
    for j in 0..=ring.nvars() {
        let r = multiplication_map(ext, j, x)?.is_injective(None)?;
        leg2_detail.push(ExtInjRow {
            j,
            injective: r.injective,
            witness: r.witness,
        });
    }
    let leg1 = leg1_detail.injective;
    let leg2 = leg2_detail.iter().all(|r| r.injective);
    let pass = leg1 && leg2;
    let conclusion = if pass {
        format!("x^{}F is injective on every H^i_m(R)", ctx.p - 1)
    } else {
        "no conclusion".into()
    };
    Ok(DeformationReport {
        p: ctx.p,
        element,
        degenerate: false,
        leg1,
        leg2,
        pass,
        leg1_detail: Some(leg1_detail),
        leg2_detail,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_polynomial, FieldSpec, GradedRingSpec};

    fn fring(p: u64, vars: &[&str]) -> PolyRing<PrimeField> {
        PolyRing::new(
            GradedRingSpec::standard(vars, FieldSpec::prime(p).unwrap()).unwrap(),
            PrimeField::new(p).unwrap(),
        )
        .unwrap()
    }

    fn fermat(p: u64) -> FrobeniusContext {
        let r = fring(p, &["x", "y", "z"]);
        FrobeniusContext::new(&Ideal::parse(&r, &["x^3 + y^3 + z^3"]).unwrap()).unwrap()
    }

    #[test]
    fn fedder_on_fermat_cubic() {
        let got: Vec<bool> = [5, 7, 11, 13].iter().map(|&p| fedder_fpure(&fermat(p)).unwrap()).collect();
        assert_eq!(got, vec![false, true, false, true]);
    }

    #[test]
    fn fedder_on_a_variable() {
        let r = fring(3, &["x"]);
        let c = FrobeniusContext::new(&Ideal::parse(&r, &["x"]).unwrap()).unwrap();
        assert!(fedder_fpure(&c).unwrap());
    }

    #[test]
    fn supersingular_cone_is_not_f_injective() {
        let r = f_injective_check(&fermat(5), 1).unwrap();
        assert!(!r.injective);
        let bad: Vec<usize> = r.rows.iter().filter(|r| !r.injective).map(|r| r.j).collect();
        assert_eq!(bad, vec![1]);
        let w = r.rows[1].witness.clone().unwrap();
        assert_eq!((w.ext_degree, w.t), (-3, 0));
        assert!(f_injective_check(&fermat(7), 1).unwrap().injective);
    }

    #[test]
    fn maximal_ideal_is_f_injective() {
        let r = fring(3, &["x", "y"]);
        let c = FrobeniusContext::new(&Ideal::parse(&r, &["x", "y"]).unwrap()).unwrap();
        assert!(f_injective_check(&c, 1).unwrap().injective);
    }

    #[test]
    fn second_frobenius_agrees() {
        for (p, expect) in [(5, false), (7, true)] {
            let c = fermat(p);
            assert_eq!(f_injective_check(&c, 2).unwrap().injective, expect, "p = {p}");
        }
    }

    #[test]
    fn frobenius_tower() {
        let c = fermat(5);
        let twice = c.frobenius_power(1).unwrap().frobenius_power(5).unwrap();
        assert!(twice.same_as(&c.frobenius_power(2).unwrap()).unwrap());
    }

    #[test]
    fn sandwich_maps() {
        let c = fermat(7);
        assert!(fpure_surjectivity_check(&c, c.ideal()).unwrap().injective);
        let jp = c.frobenius_power(1).unwrap();
        let rep = fpure_surjectivity_check(&c, &jp).unwrap();
        assert_eq!(rep.e, 1);
        assert!(rep.injective);
        let r = c.ring().clone();
        let bigger = Ideal::parse(&r, &["x"]).unwrap();
        assert!(fpure_surjectivity_check(&c, &bigger).is_err());
    }

    #[test]
    fn deformation_on_fermat() {
        // R/zR = F_7[x,y]/(x^3 + y^3) has a-invariant 1, so Frobenius kills
        // [H^1_m]_1: the first leg fails while ·z stays injective on Ext
        let c = fermat(7);
        let z = parse_polynomial(c.ring(), "z").unwrap();
        let rep = deformation_check(&c, &z).unwrap();
        assert!(!rep.leg1 && rep.leg2 && !rep.pass, "{rep:#?}");
        let bad: Vec<(usize, i64)> = rep
            .leg1_detail
            .unwrap()
            .rows
            .iter()
            .filter_map(|r| r.witness.as_ref().map(|w| (r.i, w.t)))
            .collect();
        assert_eq!(bad, vec![(1, 1)]);
        let plane = fring(7, &["x", "y"]);
        let lines = FrobeniusContext::new(&Ideal::parse(&plane, &["x^3 + y^3"]).unwrap()).unwrap();
        assert!(!fedder_fpure(&lines).unwrap());
        let one = c.ring().one();
        assert!(deformation_check(&c, &one).unwrap().degenerate);
    }

    #[test]
    fn deformation_of_a_smooth_conic_cone() {
        // x^2 + y^2 + z^2 cut by z: two lines, F-pure for odd p
        let r = fring(7, &["x", "y", "z"]);
        let c = FrobeniusContext::new(&Ideal::parse(&r, &["x^2 + y^2 + z^2"]).unwrap()).unwrap();
        let rep = deformation_check(&c, &r.var(2)).unwrap();
        assert!(rep.leg1 && rep.leg2 && rep.pass);
    }

    #[test]
    fn zero_divisor_rejected() {
        let r = fring(7, &["x", "y"]);
        let c = FrobeniusContext::new(&Ideal::parse(&r, &["x*y"]).unwrap()).unwrap();
        assert!(matches!(deformation_check(&c, &r.var(0)), Err(Error::Domain(_))));
    }
}
