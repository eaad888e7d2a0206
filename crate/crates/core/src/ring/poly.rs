use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldSpec};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// A weighted polynomial ring `k[x_1..x_n]` with `deg x_i = d_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRingSpec {
    vars: Vec<String>,
    weights: Vec<u32>,
    field: FieldSpec,
}

impl GradedRingSpec {
    pub fn new(vars: Vec<String>, weights: Vec<u32>, field: FieldSpec) -> Result<Self> {
        if vars.len() != weights.len() {
            return Err(Error::structural(format!(
                "{} variables but {} weights",
                vars.len(),
                weights.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::domain("weights strictly positive"));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::domain(format!("duplicate variable name {v}")));
            }
        }
        if let FieldSpec::PrimeField(p) = field {
            FieldSpec::prime(p)?;
        }
        Ok(GradedRingSpec {
            vars,
            weights,
            field,
        })
    }

    /// Standard graded ring on the given names.
    pub fn standard(vars: &[&str], field: FieldSpec) -> Result<Self> {
        let n = vars.len();
        Self::new(vars.iter().map(|s| s.to_string()).collect(), vec![1; n], field)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Sum of the weights; the `a`-invariant shift in local duality.
    pub fn d(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Sparse polynomial; terms sorted strictly decreasing in the owning ring's order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E: Clone> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
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

    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// Weighted degree of the leading term.
    pub fn degree(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }
}

/// A polynomial ring with a fixed coefficient field and monomial order.
///
/// Cloning is cheap. All arithmetic goes through the ring so that results
/// come back sorted in its order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    spec: Arc<GradedRingSpec>,
    field: F,
    order: MonomialOrder,
}

pub type Poly<F> = Polynomial<<F as Field>::Elem>;

impl<F: Field> PolyRing<F> {
    /// Ring with the default weighted grevlex order.
    pub fn new(spec: GradedRingSpec, field: F) -> Result<Self> {
        let order = MonomialOrder::grevlex(spec.weights());
        Self::with_order(spec, field, order)
    }

    pub fn with_order(spec: GradedRingSpec, field: F, order: MonomialOrder) -> Result<Self> {
        if spec.field() != field.spec() {
            return Err(Error::structural(format!(
                "ring declares field {} but {} was supplied",
                spec.field(),
                field.spec()
            )));
        }
        if order.weights() != spec.weights() {
            return Err(Error::structural("order weights differ from ring weights"));
        }
        Ok(PolyRing {
            spec: Arc::new(spec),
            field,
            order,
        })
    }

    pub fn spec(&self) -> &GradedRingSpec {
        &self.spec
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn weights(&self) -> &[u32] {
        self.spec.weights()
    }

    pub fn nvars(&self) -> usize {
        self.spec.n()
    }

    /// Same variables and field, different order.
    pub fn reordered(&self, order: MonomialOrder) -> Result<Self> {
        Self::with_order((*self.spec).clone(), self.field.clone(), order)
    }

    pub fn same_ring(&self, other: &PolyRing<F>) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }

    pub fn check_same(&self, other: &PolyRing<F>) -> Result<()> {
        if self.same_ring(other) && self.order == other.order {
            Ok(())
        } else {
            Err(Error::structural("polynomials belong to different rings"))
        }
    }

    pub fn monomial(&self, exps: &[u16]) -> Result<Monomial> {
        if exps.len() != self.nvars() {
            return Err(Error::structural(format!(
                "monomial has {} exponents, ring has {} variables",
                exps.len(),
                self.nvars()
            )));
        }
        Ok(Monomial::new(exps, self.weights()))
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    pub fn zero(&self) -> Poly<F> {
        Polynomial::zero()
    }

    pub fn one(&self) -> Poly<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.term(self.one_monomial(), c)
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> Poly<F> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        self.term(Monomial::var(i, self.weights()), self.field.one())
    }

    pub fn var_by_name(&self, name: &str) -> Result<Poly<F>> {
        let i = self
            .spec
            .var_index(name)
            .ok_or_else(|| Error::structural(format!("unknown variable {name}")))?;
        Ok(self.var(i))
    }

    /// Normalizes arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Poly<F> {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = self.field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    /// Re-sorts a polynomial coming from a ring with the same variables but another order.
    pub fn import(&self, f: &Poly<F>) -> Poly<F> {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    fn merge(&self, f: &Poly<F>, g: &Poly<F>, negate_g: bool) -> Poly<F> {
        let fd = &self.field;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let (mf, cf) = &f.terms[i];
            let (mg, cg) = &g.terms[j];
            match self.order.cmp(mf, mg) {
                Ordering::Greater => {
                    out.push((mf.clone(), cf.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_g { fd.neg(cg) } else { cg.clone() };
                    out.push((mg.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_g { fd.sub(cf, cg) } else { fd.add(cf, cg) };
                    if !fd.is_zero(&c) {
                        out.push((mf.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(f.terms[i..].iter().cloned());
        for (m, c) in &g.terms[j..] {
            let c = if negate_g { fd.neg(c) } else { c.clone() };
            out.push((m.clone(), c));
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        self.merge(f, g, false)
    }

    pub fn sub(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        self.merge(f, g, true)
    }

    pub fn neg(&self, f: &Poly<F>) -> Poly<F> {
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, f: &Poly<F>, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    /// `c * m * f`; monomial multiplication preserves the order.
    pub fn mul_term(&self, f: &Poly<F>, m: &Monomial, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        let mut acc = self.zero();
        for (m, c) in &small.terms {
            acc = self.add(&acc, &self.mul_term(large, m, c));
        }
        acc
    }

    pub fn pow(&self, f: &Poly<F>, mut e: u64) -> Poly<F> {
        let mut base = f.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `f^q` where `q` is a power of the characteristic: raise each term.
    pub fn frobenius(&self, f: &Poly<F>, q: u32) -> Result<Poly<F>> {
        let p = self.field.characteristic();
        if p == 0 || !is_power_of(q as u64, p) {
            return Err(Error::domain(format!(
                "{q} is not a power of the characteristic {p}"
            )));
        }
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in &f.terms {
            let mq = m
                .checked_pow(q)
                .ok_or_else(|| Error::domain("exponent overflow in Frobenius power"))?;
            terms.push((mq, self.field.pow(c, q as u64)));
        }
        // raising exponents preserves relative order for weighted grevlex
        Ok(self.from_terms(terms))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, f: &Poly<F>) -> Poly<F> {
        match f.leading() {
            None => f.clone(),
            Some((_, c)) if self.field.is_one(c) => f.clone(),
            Some((_, c)) => self.scale(f, &self.field.inv(c)),
        }
    }

    /// Homogeneous component of weighted degree `t`.
    pub fn homogeneous_part(&self, f: &Poly<F>, t: i64) -> Poly<F> {
        Polynomial {
            terms: f
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == t)
                .cloned()
                .collect(),
        }
    }

    /// Applies the ring map sending variable `i` to `images[i]` in `target`.
    pub fn map_to(&self, f: &Poly<F>, target: &PolyRing<F>, images: &[Poly<F>]) -> Result<Poly<F>> {
        if images.len() != self.nvars() {
            return Err(Error::structural("one image per source variable required"));
        }
        let mut acc = target.zero();
        let mut cache: HashMap<(usize, u16), Poly<F>> = HashMap::new();
        for (m, c) in &f.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| target.pow(&images[i], e as u64))
                    .clone();
                t = target.mul(&t, &p);
            }
            acc = target.add(&acc, &t);
        }
        Ok(acc)
    }

    /// All monomials of weighted degree `t`, in decreasing order.
    pub fn monomials_of_degree(&self, t: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if t < 0 {
            return out;
        }
        let w = self.weights();
        let mut exps = vec![0u16; w.len()];
        fn rec(i: usize, rem: i64, w: &[u32], exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i == w.len() {
                if rem == 0 {
                    out.push(Monomial::new(exps, w));
                }
                return;
            }
            let wi = w[i] as i64;
            let mut e = 0i64;
            while e * wi <= rem {
                exps[i] = e as u16;
                rec(i + 1, rem - e * wi, w, exps, out);
                e += 1;
            }
            exps[i] = 0;
        }
        rec(0, t, w, &mut exps, &mut out);
        out.sort_by(|a, b| self.order.cmp(b, a));
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.spec.vars()[i].clone()),
                _ => parts.push(format!("{}^{}", self.spec.vars()[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, f: &Poly<F>) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in f.terms.iter().enumerate() {
            let cs = self.field.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&self.format_monomial(m));
            } else {
                s.push_str(&format!("{}*{}", mag, self.format_monomial(m)));
            }
        }
        s
    }

    pub fn display<'a>(&'a self, f: &'a Poly<F>) -> impl fmt::Display + 'a {
        struct D<'a, F: Field>(&'a PolyRing<F>, &'a Poly<F>);
        impl<F: Field> fmt::Display for D<'_, F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        D(self, f)
    }
}

pub(crate) fn set_terms<E>(p: &mut Polynomial<E>, terms: Vec<(Monomial, E)>) {
    p.terms = terms;
}

pub fn is_power_of(q: u64, p: u64) -> bool {
    if p < 2 || q == 0 {
        return false;
    }
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::{PrimeField, Rationals};

    fn qring(vars: &[&str]) -> PolyRing<Rationals> {
        PolyRing::new(GradedRingSpec::standard(vars, FieldSpec::Rationals).unwrap(), Rationals).unwrap()
    }

    #[test]
    fn spec_validation() {
        let bad = GradedRingSpec::new(vec!["x".into(), "y".into()], vec![0, 1], FieldSpec::Rationals);
        assert!(matches!(bad, Err(Error::Domain(m)) if m.contains("weights strictly positive")));
        assert!(GradedRingSpec::new(vec!["x".into(), "x".into()], vec![1, 1], FieldSpec::Rationals).is_err());
        assert!(GradedRingSpec::new(vec!["x".into()], vec![1], FieldSpec::PrimeField(9)).is_err());
        let s = GradedRingSpec::new(vec!["x".into(), "y".into()], vec![2, 3], FieldSpec::Rationals).unwrap();
        assert_eq!(s.d(), 5);
    }

    #[test]
    fn arithmetic_examples() {
        let r = qring(&["x", "y"]);
        let (x, y) = (r.var(0), r.var(1));
        let s = r.add(&r.add(&x, &y), &r.neg(&x));
        assert_eq!(s, y);
        let prod = r.mul(&r.add(&x, &y), &r.sub(&x, &y));
        assert_eq!(r.format(&prod), "x^2 - y^2");
        assert!(r.mul(&prod, &r.zero()).is_zero());
    }

    #[test]
    fn frobenius_is_additive_in_char_p() {
        let r = PolyRing::new(GradedRingSpec::standard(&["x", "y"], FieldSpec::PrimeField(2)).unwrap(), PrimeField::new(2).unwrap()).unwrap();
        let f = r.add(&r.var(0), &r.var(1));
        assert_eq!(r.frobenius(&f, 2).unwrap(), r.pow(&f, 2));
        assert_eq!(r.format(&r.frobenius(&f, 2).unwrap()), "x^2 + y^2");
        assert!(r.frobenius(&f, 3).is_err());
    }

    #[test]
    fn monomials_weighted() {
        let r = PolyRing::new(
            GradedRingSpec::new(vec!["x".into(), "y".into()], vec![2, 3], FieldSpec::Rationals).unwrap(),
            Rationals,
        )
        .unwrap();
        let ms: Vec<String> = r.monomials_of_degree(6).iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(ms.len(), 2);
        assert!(ms.contains(&"x^3".to_string()) && ms.contains(&"y^2".to_string()));
        assert!(r.monomials_of_degree(-1).is_empty());
    }
}
