//! Graded free modules, their elements, and module monomial orders.

use std::cmp::Ordering;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::ring::{Field, Monomial, MonomialOrder, Poly, PolyRing, Polynomial};

/// Schreyer data of a basis element `e_c`: the monomial of the leading term
/// of its image all the way down to rank one, and the chain of component
/// indices met on the way. Comparing `m·e_a` with `n·e_b` compares
/// `m·mon_a` with `n·mon_b`, then the chains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub mon: Monomial,
    pub chain: SmallVec<[u32; 12]>,
}

/// `F = ⊕ A·e_c` with `deg e_c = gen_degrees[c]`, i.e. `⊕ A(-gen_degrees[c])`,
/// optionally carrying an induced (Schreyer) order on its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    gen_degrees: Arc<[i64]>,
    frames: Option<Arc<[Frame]>>,
}

impl FreeModule {
    pub fn new(gen_degrees: Vec<i64>) -> Self {
        FreeModule {
            gen_degrees: gen_degrees.into(),
            frames: None,
        }
    }

    pub fn with_frames(gen_degrees: Vec<i64>, frames: Vec<Frame>) -> Self {
        assert_eq!(gen_degrees.len(), frames.len());
        FreeModule {
            gen_degrees: gen_degrees.into(),
            frames: Some(frames.into()),
        }
    }

    pub fn frames(&self) -> Option<&[Frame]> {
        self.frames.as_deref()
    }

    /// Same generator degrees, default order.
    pub fn plain(&self) -> FreeModule {
        FreeModule {
            gen_degrees: self.gen_degrees.clone(),
            frames: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn gen_degrees(&self) -> &[i64] {
        &self.gen_degrees
    }

    /// `Hom(F, A)`: generator degrees negated, default order.
    pub fn dual(&self) -> FreeModule {
        FreeModule::new(self.gen_degrees.iter().map(|d| -d).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<E> {
    pub mon: Monomial,
    pub comp: u32,
    pub coeff: E,
}

/// Module element; terms strictly decreasing in the order it was built with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector<E> {
    pub(crate) terms: Vec<Term<E>>,
}

impl<E: Clone> Vector<E> {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term<E>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term<E>> {
        self.terms.first()
    }

    /// Degree of the leading term inside `module`.
    pub fn degree(&self, module: &FreeModule) -> Option<i64> {
        self.terms
            .first()
            .map(|t| t.mon.degree() + module.gen_degrees()[t.comp as usize])
    }

    pub fn is_homogeneous(&self, module: &FreeModule) -> bool {
        match self.degree(module) {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|t| t.mon.degree() + module.gen_degrees()[t.comp as usize] == d),
        }
    }

    /// Component `c` as a polynomial, terms kept in their relative order.
    pub fn component(&self, c: usize) -> Polynomial<E> {
        let terms: Vec<(Monomial, E)> = self
            .terms
            .iter()
            .filter(|t| t.comp as usize == c)
            .map(|t| (t.mon.clone(), t.coeff.clone()))
            .collect();
        poly_from_sorted(terms)
    }

    /// Restriction to components in `range`, re-indexed from zero.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Vector<E> {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| range.contains(&(t.comp as usize)))
                .map(|t| Term {
                    mon: t.mon.clone(),
                    comp: t.comp - range.start as u32,
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    pub fn max_comp(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.comp).max()
    }
}

pub(crate) fn poly_from_sorted<E: Clone>(terms: Vec<(Monomial, E)>) -> Polynomial<E> {
    let mut p = Polynomial::zero();
    // Polynomial has private fields; build through the public zero and a crate helper.
    crate::ring::poly::set_terms(&mut p, terms);
    p
}

/// Shape of the order on components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrderKind {
    /// degree, then monomial, then component (lower index larger)
    TermOverPosition,
    /// degree, then component, then monomial
    PositionOverTerm,
}

/// Degree-compatible module order with an optional elimination block.
///
/// Components `0..main_rank` form the main block and dominate components
/// `main_rank..`, the tag block. With frames, each block is ordered by the
/// induced Schreyer order; otherwise by `kind`.
#[derive(Clone, Debug)]
pub struct ModuleOrder {
    mono: MonomialOrder,
    gen_degrees: Arc<[i64]>,
    kind: ModuleOrderKind,
    main_rank: usize,
    frames: Option<Arc<[Frame]>>,
}

impl ModuleOrder {
    pub fn new(mono: MonomialOrder, module: &FreeModule, kind: ModuleOrderKind) -> Self {
        ModuleOrder {
            mono,
            gen_degrees: module.gen_degrees.clone(),
            kind,
            main_rank: module.rank(),
            frames: module.frames.clone(),
        }
    }

    /// Frame of component `c`; components without one get the trivial frame.
    pub fn frame(&self, c: u32) -> Frame {
        match &self.frames {
            Some(f) => f[c as usize].clone(),
            None => Frame {
                mon: Monomial::one(self.mono.nvars()),
                chain: SmallVec::from_slice(&[c]),
            },
        }
    }

    /// Frames induced on a new basis mapping to vectors with the given
    /// leading terms.
    pub fn induced_frames(&self, leads: &[(Monomial, u32)]) -> Vec<Frame> {
        leads
            .iter()
            .enumerate()
            .map(|(i, (m, c))| {
                let f = self.frame(*c);
                let mut chain = f.chain.clone();
                chain.push(i as u32);
                Frame {
                    mon: m.mul(&f.mon),
                    chain,
                }
            })
            .collect()
    }

    /// Order on `main ⊕ tags` eliminating the main block. With `tag_leads`
    /// (the leading terms of the vectors the tags stand for) the tags get the
    /// induced Schreyer order.
    pub fn with_tags(
        mono: MonomialOrder,
        main: &FreeModule,
        kind: ModuleOrderKind,
        tag_degrees: &[i64],
        tag_leads: Option<Vec<(Monomial, u32)>>,
    ) -> Self {
        let mut degs: Vec<i64> = main.gen_degrees().to_vec();
        degs.extend_from_slice(tag_degrees);
        let base = ModuleOrder::new(mono.clone(), main, kind.clone());
        let frames = if main.frames.is_some() || tag_leads.is_some() {
            let mut f: Vec<Frame> = (0..main.rank() as u32).map(|c| base.frame(c)).collect();
            match &tag_leads {
                Some(l) => {
                    assert_eq!(l.len(), tag_degrees.len());
                    f.extend(base.induced_frames(l));
                }
                None => f.extend((0..tag_degrees.len() as u32).map(|i| Frame {
                    mon: Monomial::one(mono.nvars()),
                    chain: SmallVec::from_slice(&[i]),
                })),
            }
            Some(f.into())
        } else {
            None
        };
        ModuleOrder {
            mono,
            gen_degrees: degs.into(),
            kind,
            main_rank: main.rank(),
            frames,
        }
    }

    pub fn mono(&self) -> &MonomialOrder {
        &self.mono
    }

    pub fn weights(&self) -> &[u32] {
        self.mono.weights()
    }

    pub fn main_rank(&self) -> usize {
        self.main_rank
    }

    pub fn rank(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn has_tags(&self) -> bool {
        self.rank() > self.main_rank
    }

    pub fn gen_degree(&self, c: u32) -> i64 {
        self.gen_degrees[c as usize]
    }

    pub fn is_tag(&self, c: u32) -> bool {
        c as usize >= self.main_rank
    }

    pub fn term_degree(&self, m: &Monomial, c: u32) -> i64 {
        m.degree() + self.gen_degrees[c as usize]
    }

    #[inline]
    fn cmp_block(&self, a: &Monomial, ca: u32, b: &Monomial, cb: u32) -> Ordering {
        if let Some(f) = &self.frames {
            let (fa, fb) = (&f[ca as usize], &f[cb as usize]);
            let o = if fa.mon.is_one() && fb.mon.is_one() {
                self.mono.cmp(a, b)
            } else {
                self.mono.cmp(&a.mul(&fa.mon), &b.mul(&fb.mon))
            };
            return o.then_with(|| fb.chain.cmp(&fa.chain));
        }
        match self.kind {
            ModuleOrderKind::TermOverPosition => self.mono.cmp(a, b).then_with(|| cb.cmp(&ca)),
            ModuleOrderKind::PositionOverTerm => cb.cmp(&ca).then_with(|| self.mono.cmp(a, b)),
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, ca: u32, b: &Monomial, cb: u32) -> Ordering {
        let da = a.degree() + self.gen_degrees[ca as usize];
        let db = b.degree() + self.gen_degrees[cb as usize];
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.is_tag(ca), self.is_tag(cb)) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            _ => self.cmp_block(a, ca, b, cb),
        }
    }

    pub fn cmp_terms<E>(&self, a: &Term<E>, b: &Term<E>) -> Ordering {
        self.cmp(&a.mon, a.comp, &b.mon, b.comp)
    }
}

/// Field plus module order: everything needed for vector arithmetic.
pub struct VecOps<'a, F: Field> {
    pub field: &'a F,
    pub order: &'a ModuleOrder,
}

impl<'a, F: Field> VecOps<'a, F> {
    pub fn new(field: &'a F, order: &'a ModuleOrder) -> Self {
        VecOps { field, order }
    }

    /// Normalizes arbitrary terms.
    pub fn from_terms(&self, terms: Vec<Term<F::Elem>>) -> Vector<F::Elem> {
        let mut terms = terms;
        terms.sort_by(|a, b| self.order.cmp_terms(b, a));
        let mut out: Vec<Term<F::Elem>> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mon == t.mon {
                    last.coeff = self.field.add(&last.coeff, &t.coeff);
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !self.field.is_zero(&t.coeff));
        Vector { terms: out }
    }

    pub fn from_components(&self, comps: &[Poly<F>]) -> Vector<F::Elem> {
        let mut terms = Vec::new();
        for (c, p) in comps.iter().enumerate() {
            for (m, a) in p.terms() {
                terms.push(Term {
                    mon: m.clone(),
                    comp: c as u32,
                    coeff: a.clone(),
                });
            }
        }
        self.from_terms(terms)
    }

    pub fn from_poly(&self, p: &Poly<F>, comp: u32) -> Vector<F::Elem> {
        Vector {
            terms: p
                .terms()
                .iter()
                .map(|(m, a)| Term {
                    mon: m.clone(),
                    comp,
                    coeff: a.clone(),
                })
                .collect(),
        }
    }

    /// Re-sorts a vector built under another order (same monomials and components).
    pub fn import(&self, v: &Vector<F::Elem>) -> Vector<F::Elem> {
        let mut terms = v.terms.clone();
        terms.sort_by(|a, b| self.order.cmp_terms(b, a));
        Vector { terms }
    }

    /// Moves components by `shift` and re-sorts.
    pub fn shifted(&self, v: &Vector<F::Elem>, shift: u32) -> Vector<F::Elem> {
        let mut terms: Vec<_> = v
            .terms
            .iter()
            .map(|t| Term {
                mon: t.mon.clone(),
                comp: t.comp + shift,
                coeff: t.coeff.clone(),
            })
            .collect();
        terms.sort_by(|a, b| self.order.cmp_terms(b, a));
        Vector { terms }
    }

    pub fn add(&self, f: &Vector<F::Elem>, g: &Vector<F::Elem>) -> Vector<F::Elem> {
        self.axpy(f, g, None, &self.field.one())
    }

    pub fn sub(&self, f: &Vector<F::Elem>, g: &Vector<F::Elem>) -> Vector<F::Elem> {
        self.axpy(f, g, None, &self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, f: &Vector<F::Elem>, c: &F::Elem) -> Vector<F::Elem> {
        if self.field.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    mon: t.mon.clone(),
                    comp: t.comp,
                    coeff: self.field.mul(&t.coeff, c),
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, f: &Vector<F::Elem>, m: &Monomial, c: &F::Elem) -> Vector<F::Elem> {
        if self.field.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    mon: t.mon.mul(m),
                    comp: t.comp,
                    coeff: self.field.mul(&t.coeff, c),
                })
                .collect(),
        }
    }

    /// Polynomial times vector.
    pub fn mul_poly(&self, p: &Poly<F>, f: &Vector<F::Elem>) -> Vector<F::Elem> {
        let mut acc = Vector::zero();
        for (m, c) in p.terms() {
            acc = self.axpy(&acc, f, Some(m), c);
        }
        acc
    }

    /// `f + c * m * g` in one merge pass.
    pub fn axpy(
        &self,
        f: &Vector<F::Elem>,
        g: &Vector<F::Elem>,
        m: Option<&Monomial>,
        c: &F::Elem,
    ) -> Vector<F::Elem> {
        Vector {
            terms: self.axpy_slices(&f.terms, &g.terms, m, c),
        }
    }

    pub(crate) fn axpy_slices(
        &self,
        f: &[Term<F::Elem>],
        g: &[Term<F::Elem>],
        m: Option<&Monomial>,
        c: &F::Elem,
    ) -> Vec<Term<F::Elem>> {
        let fd = self.field;
        if fd.is_zero(c) {
            return f.to_vec();
        }
        let c_is_one = fd.is_one(c);
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let mut pending: Option<Monomial> = None;
        while j < g.len() {
            let gm = match pending.take() {
                Some(x) => x,
                None => match m {
                    Some(m) => g[j].mon.mul(m),
                    None => g[j].mon.clone(),
                },
            };
            let gc = g[j].comp;
            if i < f.len() {
                match self.order.cmp(&f[i].mon, f[i].comp, &gm, gc) {
                    Ordering::Greater => {
                        out.push(f[i].clone());
                        i += 1;
                        pending = Some(gm);
                        continue;
                    }
                    Ordering::Equal => {
                        let prod = if c_is_one { g[j].coeff.clone() } else { fd.mul(&g[j].coeff, c) };
                        let s = fd.add(&f[i].coeff, &prod);
                        if !fd.is_zero(&s) {
                            out.push(Term {
                                mon: gm,
                                comp: gc,
                                coeff: s,
                            });
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    Ordering::Less => {}
                }
            }
            let prod = if c_is_one { g[j].coeff.clone() } else { fd.mul(&g[j].coeff, c) };
            out.push(Term {
                mon: gm,
                comp: gc,
                coeff: prod,
            });
            j += 1;
        }
        out.extend_from_slice(&f[i..]);
        out
    }

    pub fn monic(&self, f: &Vector<F::Elem>) -> Vector<F::Elem> {
        match f.lead() {
            None => f.clone(),
            Some(t) if self.field.is_one(&t.coeff) => f.clone(),
            Some(t) => self.scale(f, &self.field.inv(&t.coeff)),
        }
    }

    /// Splits into dense polynomial components (ring must use the same monomial order).
    pub fn to_components(&self, f: &Vector<F::Elem>, rank: usize) -> Vec<Poly<F>> {
        let mut parts: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); rank];
        for t in &f.terms {
            parts[t.comp as usize].push((t.mon.clone(), t.coeff.clone()));
        }
        parts.into_iter().map(poly_from_sorted).collect()
    }
}

/// Vector ops for a plain free module over `ring`, term-over-position.
pub fn top_order<F: Field>(ring: &PolyRing<F>, module: &FreeModule) -> ModuleOrder {
    ModuleOrder::new(ring.order().clone(), module, ModuleOrderKind::TermOverPosition)
}
