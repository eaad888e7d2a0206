//! Homogeneous Buchberger algorithm for submodules of graded free modules.
//!
//! Input vectors are processed degree by degree, interleaved with S-pairs of
//! the same degree. Inputs that reduce to zero are exactly the redundant
//! ones, so the engine also yields a minimal generating set.

use std::collections::BTreeMap;

use super::module::{ModuleOrder, Term, VecOps, Vector};
use crate::error::{Error, Result};
use crate::ring::{Field, Monomial};

/// Default cap on the number of pending S-pairs.
pub const DEFAULT_MAX_PAIRS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct GbConfig {
    /// Also complete the tag block (needed when the tag-only elements must
    /// form a Gröbner basis rather than just generate).
    pub complete_tags: bool,
    /// Reduce tails of the main block, not only leading terms.
    pub full_reduce: bool,
    pub max_pairs: usize,
    /// Stop after this degree (truncated basis).
    pub max_degree: Option<i64>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            complete_tags: true,
            full_reduce: true,
            max_pairs: super::max_pairs(),
            max_degree: None,
        }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: u32,
}

/// Result of a Gröbner basis computation.
#[derive(Clone, Debug)]
pub struct Gb<F: Field> {
    field: F,
    order: ModuleOrder,
    elems: Vec<Vector<F::Elem>>,
    by_comp: Vec<Vec<usize>>,
    minimal_inputs: Vec<usize>,
    new_syzygies: Vec<usize>,
    complete_tags: bool,
}

impl<F: Field> Gb<F> {
    fn empty(field: F, order: ModuleOrder, complete_tags: bool) -> Self {
        let rank = order.rank();
        Gb {
            field,
            order,
            elems: Vec::new(),
            by_comp: vec![Vec::new(); rank],
            minimal_inputs: Vec::new(),
            new_syzygies: Vec::new(),
            complete_tags,
        }
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn elements(&self) -> &[Vector<F::Elem>] {
        &self.elems
    }

    /// Indices (into the input list) of a minimal generating subset.
    pub fn minimal_inputs(&self) -> &[usize] {
        &self.minimal_inputs
    }

    /// Indices (into [`Gb::elements`]) of tag-block elements that arose from
    /// main-block pairs or inputs. With a completed tag block these form a
    /// minimal generating set of the syzygies.
    pub fn new_syzygies(&self) -> &[usize] {
        &self.new_syzygies
    }

    /// Elements whose leading term lies in the main block.
    pub fn main_elements(&self) -> impl Iterator<Item = &Vector<F::Elem>> {
        self.elems
            .iter()
            .filter(|v| !self.order.is_tag(v.lead().expect("nonzero").comp))
    }

    /// Buchberger's criterion re-checked from scratch: every S-vector of two
    /// main-block elements with the same leading component reduces to zero.
    pub fn verify(&self) -> bool {
        let weights = self.order.weights().to_vec();
        let main: Vec<usize> = (0..self.elems.len())
            .filter(|&i| !self.order.is_tag(self.elems[i].terms[0].comp))
            .collect();
        for (a, &i) in main.iter().enumerate() {
            for &j in &main[a + 1..] {
                let (li, lj) = (&self.elems[i].terms[0], &self.elems[j].terms[0]);
                if li.comp != lj.comp {
                    continue;
                }
                let pair = Pair {
                    i,
                    j,
                    lcm: li.mon.lcm(&lj.mon, &weights),
                    comp: li.comp,
                };
                let r = self.reduce_with(&s_vector(self, &pair), false);
                if r.lead().is_some_and(|t| !self.order.is_tag(t.comp)) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements living entirely in the tag block (syzygies).
    pub fn tag_elements(&self) -> impl Iterator<Item = &Vector<F::Elem>> {
        self.elems
            .iter()
            .filter(|v| self.order.is_tag(v.lead().expect("nonzero").comp))
    }

    pub fn is_unit(&self) -> bool {
        self.main_elements().any(|v| {
            let l = v.lead().unwrap();
            l.mon.is_one() && self.order.rank() == 1
        })
    }

    fn ops(&self) -> VecOps<'_, F> {
        VecOps::new(&self.field, &self.order)
    }

    fn find_reducer(&self, mon: &Monomial, comp: u32) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &k in &self.by_comp[comp as usize] {
            let l = &self.elems[k].terms[0];
            if l.mon.divides(mon) {
                match best {
                    None => best = Some(k),
                    Some(b) if self.elems[k].len() < self.elems[b].len() => best = Some(k),
                    _ => {}
                }
            }
        }
        best
    }

    /// Reduces `f`. With `full`, every main-block term is reduced; otherwise only
    /// the leading term. Tag terms are reduced only when the tag block is complete.
    pub fn reduce_with(&self, f: &Vector<F::Elem>, full: bool) -> Vector<F::Elem> {
        let ops = self.ops();
        let mut f: Vec<Term<F::Elem>> = f.terms.clone();
        let mut out: Vec<Term<F::Elem>> = Vec::new();
        let mut s = 0;
        while s < f.len() {
            let t = &f[s];
            let tag = self.order.is_tag(t.comp);
            if tag && !self.complete_tags {
                break;
            }
            match self.find_reducer(&t.mon, t.comp) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = g.terms[0].mon.quotient_of(&t.mon);
                    let c = self.field.neg(&t.coeff);
                    f = ops.axpy_slices(&f[s..], &g.terms, Some(&q), &c);
                    s = 0;
                }
                None => {
                    if !full {
                        break;
                    }
                    out.push(f[s].clone());
                    s += 1;
                }
            }
        }
        out.extend_from_slice(&f[s..]);
        Vector { terms: out }
    }

    /// Full normal form.
    pub fn normal_form(&self, f: &Vector<F::Elem>) -> Vector<F::Elem> {
        self.reduce_with(f, true)
    }

    /// Whether `f` lies in the main-block submodule.
    pub fn contains(&self, f: &Vector<F::Elem>) -> bool {
        let r = self.reduce_with(f, false);
        r.lead().is_none_or(|t| self.order.is_tag(t.comp))
    }

    /// Reduces `(f, 0)` and returns the tag part, negated: coefficients
    /// expressing `f` in terms of the inputs. `None` when `f` is not in the span.
    /// Components are shifted down to `0..`; terms stay in tag-block order, so
    /// callers re-sort under their own order.
    pub fn lift(&self, f: &Vector<F::Elem>) -> Option<Vector<F::Elem>> {
        let r = self.reduce_with(f, false);
        match r.lead() {
            Some(t) if !self.order.is_tag(t.comp) => None,
            _ => {
                let shift = self.order.main_rank() as u32;
                let tags: Vec<Term<F::Elem>> = r
                    .terms
                    .iter()
                    .map(|t| Term {
                        mon: t.mon.clone(),
                        comp: t.comp - shift,
                        coeff: self.field.neg(&t.coeff),
                    })
                    .collect();
                Some(Vector { terms: tags })
            }
        }
    }

    fn insert(&mut self, v: Vector<F::Elem>) -> usize {
        let idx = self.elems.len();
        let c = v.terms[0].comp as usize;
        self.elems.push(v);
        self.by_comp[c].push(idx);
        idx
    }

    /// Drops elements whose leading term is divisible by another's and
    /// tail-reduces the rest. Only meaningful without tags.
    pub fn interreduce(&mut self) {
        let n = self.elems.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            let li = &self.elems[i].terms[0];
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let lj = &self.elems[j].terms[0];
                if lj.comp == li.comp && lj.mon.divides(&li.mon) && (lj.mon != li.mon || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let kept: Vec<Vector<F::Elem>> = self
            .elems
            .drain(..)
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(v, _)| v)
            .collect();
        self.by_comp.iter_mut().for_each(|b| b.clear());
        for v in kept {
            self.insert(v);
        }
        for i in 0..self.elems.len() {
            let v = self.elems[i].clone();
            let lead = Vector {
                terms: vec![v.terms[0].clone()],
            };
            let tail = Vector {
                terms: v.terms[1..].to_vec(),
            };
            let red = self.reduce_with(&tail, true);
            let ops = self.ops();
            self.elems[i] = ops.add(&lead, &red);
        }
    }
}

type PairKey = (i64, u8, usize, usize);

/// Within a degree, tag-block pairs come first so that everything generated
/// by lower-degree syzygies is known before new syzygies appear.
fn pair_key(deg: i64, tag: bool, i: usize, j: usize) -> PairKey {
    (deg, u8::from(!tag), j, i)
}

/// Computes a Gröbner basis of the span of `inputs` under `order`.
pub fn groebner<F: Field>(
    field: &F,
    order: &ModuleOrder,
    inputs: &[Vector<F::Elem>],
    config: &GbConfig,
) -> Result<Gb<F>> {
    let mut gb = Gb::empty(field.clone(), order.clone(), config.complete_tags);
    let weights: Vec<u32> = order.weights().to_vec();
    let product_criterion = order.rank() == 1;

    let mut pending: Vec<(i64, usize)> = inputs
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.lead().map(|t| (order.term_degree(&t.mon, t.comp), i)))
        .collect();
    pending.sort();
    let mut next_input = 0;
    let mut pairs: BTreeMap<PairKey, Pair> = BTreeMap::new();

    loop {
        let pair_deg = pairs.keys().next().map(|k| k.0);
        let input_deg = pending.get(next_input).map(|p| p.0);
        let d = match (pair_deg, input_deg) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        if config.max_degree.is_some_and(|m| d > m) {
            break;
        }
        // pairs of degree d
        while let Some((&key, _)) = pairs.iter().next() {
            if key.0 != d {
                break;
            }
            let pair = pairs.remove(&key).expect("present");
            let s = s_vector(&gb, &pair);
            let h = gb.reduce_with(&s, config.full_reduce);
            if !h.is_zero() {
                if !order.is_tag(pair.comp) && order.is_tag(h.terms[0].comp) {
                    gb.new_syzygies.push(gb.elems.len());
                }
                add_element(&mut gb, h, &mut pairs, &weights, product_criterion, config)?;
            }
        }
        while next_input < pending.len() && pending[next_input].0 == d {
            let (_, idx) = pending[next_input];
            next_input += 1;
            let v = VecOps::new(field, order).monic(&inputs[idx]);
            let h = gb.reduce_with(&v, config.full_reduce);
            let lead_is_main = h.lead().is_some_and(|t| !order.is_tag(t.comp));
            if lead_is_main {
                gb.minimal_inputs.push(idx);
            }
            if !h.is_zero() {
                if !lead_is_main {
                    gb.new_syzygies.push(gb.elems.len());
                }
                add_element(&mut gb, h, &mut pairs, &weights, product_criterion, config)?;
            }
        }
    }
    gb.minimal_inputs.sort();
    Ok(gb)
}

fn s_vector<F: Field>(gb: &Gb<F>, pair: &Pair) -> Vector<F::Elem> {
    let ops = gb.ops();
    let gi = &gb.elems[pair.i];
    let gj = &gb.elems[pair.j];
    let qi = gi.terms[0].mon.quotient_of(&pair.lcm);
    let qj = gj.terms[0].mon.quotient_of(&pair.lcm);
    let a = ops.mul_term(gi, &qi, &gb.field.one());
    let minus_one = gb.field.neg(&gb.field.one());
    ops.axpy(&a, gj, Some(&qj), &minus_one)
}

fn add_element<F: Field>(
    gb: &mut Gb<F>,
    h: Vector<F::Elem>,
    pairs: &mut BTreeMap<PairKey, Pair>,
    weights: &[u32],
    product_criterion: bool,
    config: &GbConfig,
) -> Result<()> {
    let h = gb.ops().monic(&h);
    let lead_comp = h.terms[0].comp;
    let is_tag = gb.order.is_tag(lead_comp);
    let hn = gb.insert(h);
    if is_tag && !config.complete_tags {
        return Ok(());
    }
    let lead_h = gb.elems[hn].terms[0].mon.clone();

    // candidates sharing the leading component
    let cands: Vec<(usize, Monomial)> = gb.by_comp[lead_comp as usize]
        .iter()
        .filter(|&&i| i != hn)
        .map(|&i| (i, gb.elems[i].terms[0].mon.lcm(&lead_h, weights)))
        .collect();

    // Gebauer-Möller B: drop old pairs made redundant by h
    pairs.retain(|_, p| {
        if p.comp != lead_comp || !lead_h.divides(&p.lcm) {
            return true;
        }
        let li = &gb.elems[p.i].terms[0].mon;
        let lj = &gb.elems[p.j].terms[0].mon;
        li.lcm(&lead_h, weights) == p.lcm || lj.lcm(&lead_h, weights) == p.lcm
    });

    // M: keep only minimal lcms, one representative per lcm
    let mut new_pairs = Vec::new();
    for (a, (i, li)) in cands.iter().enumerate() {
        let dominated = cands.iter().enumerate().any(|(b, (_, lj))| {
            b != a && lj.divides(li) && (lj != li || b < a)
        });
        if dominated {
            continue;
        }
        if product_criterion && gb.elems[*i].terms[0].mon.is_coprime(&lead_h) {
            continue;
        }
        new_pairs.push(Pair {
            i: *i,
            j: hn,
            lcm: li.clone(),
            comp: lead_comp,
        });
    }
    for p in new_pairs {
        let deg = gb.order.term_degree(&p.lcm, p.comp);
        pairs.insert(pair_key(deg, gb.order.is_tag(p.comp), p.i, p.j), p);
    }
    if pairs.len() > config.max_pairs {
        return Err(Error::ResourceCap {
            cap: "max GB pair queue",
            limit: config.max_pairs,
        });
    }
    Ok(())
}
