//! Exponent vectors and weighted monomial orders.

use std::cmp::Ordering;
use std::ops::Range;
use std::sync::Arc;

use smallvec::SmallVec;

/// Exponent vector with cached weighted degree and a support bitmask.
///
/// The mask has bit `i % 64` set when variable `i` occurs; it gives a cheap
/// necessary condition for divisibility.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u16; 16]>,
    deg: i64,
    mask: u64,
}

fn mask_of(exps: &[u16]) -> u64 {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
}

impl Monomial {
    /// Builds a monomial; panics if the exponent list and weights disagree in length.
    pub fn new(exps: &[u16], weights: &[u32]) -> Self {
        assert_eq!(exps.len(), weights.len(), "exponent length mismatch");
        let deg = exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum();
        Monomial {
            exps: SmallVec::from_slice(exps),
            deg,
            mask: mask_of(exps),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            deg: 0,
            mask: 0,
        }
    }

    pub fn var(i: usize, weights: &[u32]) -> Self {
        let mut e = vec![0u16; weights.len()];
        e[i] = 1;
        Monomial::new(&e, weights)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    /// Weighted degree under the weights it was built with.
    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn total_exponent(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0
    }

    /// Product, or `None` when an exponent overflows.
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b)?);
        }
        Some(Monomial {
            exps,
            deg: self.deg + other.deg,
            mask: self.mask | other.mask,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other)
            .expect("exponent overflow in monomial product")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.mask & !other.mask != 0 {
            return false;
        }
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 16]> = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(a, b)| a - b)
            .collect();
        let mask = mask_of(&exps);
        Monomial {
            exps,
            deg: other.deg - self.deg,
            mask,
        }
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps: SmallVec<[u16; 16]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(&exps, weights)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        if self.mask & other.mask == 0 {
            return true;
        }
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Raises every exponent to the `q`-th multiple.
    pub fn checked_pow(&self, q: u32) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for &e in &self.exps {
            let v = (e as u32).checked_mul(q)?;
            exps.push(u16::try_from(v).ok()?);
        }
        Some(Monomial {
            exps,
            deg: self.deg * q as i64,
            mask: self.mask,
        })
    }
}

/// Weighted degree of an exponent vector; fails on a length mismatch.
pub fn weighted_degree(exps: &[u16], weights: &[u32]) -> crate::Result<i64> {
    if exps.len() != weights.len() {
        return Err(crate::Error::structural(format!(
            "monomial has {} exponents but the ring has {} variables",
            exps.len(),
            weights.len()
        )));
    }
    Ok(exps
        .iter()
        .zip(weights)
        .map(|(&e, &w)| e as i64 * w as i64)
        .sum())
}

/// Weighted degree first, then block-wise (block degree, reverse lexicographic).
///
/// A single block spanning all variables is weighted grevlex. Several blocks
/// give an elimination order for the earlier blocks on homogeneous input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    weights: Arc<[u32]>,
    blocks: Vec<Range<usize>>,
}

impl MonomialOrder {
    pub fn grevlex(weights: &[u32]) -> Self {
        MonomialOrder {
            weights: weights.into(),
            blocks: vec![0..weights.len()],
        }
    }

    /// Block order; `blocks` must partition `0..n` into consecutive ranges.
    pub fn block(weights: &[u32], blocks: Vec<Range<usize>>) -> Self {
        let mut next = 0;
        for b in &blocks {
            assert_eq!(b.start, next, "blocks must be consecutive");
            next = b.end;
        }
        assert_eq!(next, weights.len(), "blocks must cover all variables");
        MonomialOrder {
            weights: weights.into(),
            blocks,
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.deg.cmp(&b.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        let single = self.blocks.len() == 1;
        for block in &self.blocks {
            if !single {
                let da: i64 = block
                    .clone()
                    .map(|i| a.exps[i] as i64 * self.weights[i] as i64)
                    .sum();
                let db: i64 = block
                    .clone()
                    .map(|i| b.exps[i] as i64 * self.weights[i] as i64)
                    .sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            for i in block.clone().rev() {
                match a.exps[i].cmp(&b.exps[i]) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
        }
        Ordering::Equal
    }
}
