//! Dense exact linear algebra over a [`Field`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::field::is_prime;
use crate::ring::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

pub fn zeros<F: Field>(field: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, field.zero())
}

pub fn mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch");
    let mut out = zeros(field, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if field.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if field.is_zero(bkj) {
                    continue;
                }
                let v = field.add(out.get(i, j), &field.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn is_zero<F: Field>(field: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|x| field.is_zero(x))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = field.inv(m.get(r, c));
        for j in c..m.cols {
            let v = field.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if field.is_zero(&f) {
                continue;
            }
            for j in c..m.cols {
                let rv = m.get(r, j);
                if field.is_zero(rv) {
                    continue;
                }
                let v = field.sub(m.get(i, j), &field.mul(&f, rv));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank. Over `Q` it goes through [`rational_rank`] first, since
/// fraction growth makes direct elimination slow beyond a few dozen rows.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    if field.characteristic() == 0 && m.rows.min(m.cols) > 16 {
        let rows: Option<Vec<Vec<BigRational>>> = (0..m.rows)
            .map(|r| m.row(r).iter().map(|x| field.to_rational(x)).collect())
            .collect();
        if let Some(rows) = rows {
            if let Some(r) = rational_rank(&rows, m.cols) {
                return r;
            }
        }
    }
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// Primes below `2^31`, largest first.
fn moduli() -> impl Iterator<Item = u64> {
    (1u64 << 30..(1u64 << 31) - 1).rev().filter(|&n| is_prime(n))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Row echelon data modulo `p`: pivot columns and, for each pivot row,
/// the reduced row.
fn rref_mod(rows: &[Vec<u64>], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(k) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(k, r);
        let inv = inv_mod(a[r][c], p);
        for x in a[r][c..].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + (p - f) * pivot_row[j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (pivots, a)
}

/// `n/d ≡ a (mod m)` with `|n|, d ≤ sqrt(m/2)`, if one exists.
fn reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Rank of a rational matrix, exact. The rank modulo a prime never exceeds
/// the rank over `Q`; a kernel basis of the complementary size, rebuilt from
/// residues and checked over `Q`, bounds it from above. `None` if the
/// residues never settle, which leaves the caller to eliminate directly.
pub fn rational_rank(rows: &[Vec<BigRational>], cols: usize) -> Option<usize> {
    // clear denominators row by row, then work with the orientation whose
    // kernel is smaller
    let mut ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut ncols = cols;
    if ints.len() < ncols {
        ints = (0..ncols).map(|c| ints.iter().map(|row| row[c].clone()).collect()).collect();
        ncols = rows.len();
    }
    if ncols == 0 {
        return Some(0);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    for p in moduli().take(64) {
        let pb = BigInt::from(p);
        let reduced: Vec<Vec<u64>> = ints
            .iter()
            .map(|row| row.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
            .collect();
        let (pivots, red) = rref_mod(&reduced, ncols, p);
        let rank = pivots.len();
        if rank == ncols {
            return Some(rank);
        }
        let better = match &best {
            None => true,
            Some((r, piv)) => rank > *r || (rank == *r && pivots < *piv),
        };
        if !better && best.as_ref().is_some_and(|(r, piv)| rank < *r || pivots != *piv) {
            continue;
        }
        // kernel basis: one vector per free column, free entry 1
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let kernel: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = (p - red[i][f]) % p;
                }
                v
            })
            .collect();
        if better {
            best = Some((rank, pivots));
            acc = kernel.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            modulus = pb;
        } else {
            // Chinese remaindering: x ≡ a (mod M), x ≡ b (mod p)
            let minv = BigInt::from(inv_mod((&modulus % &pb).to_u64().unwrap(), p));
            for (va, vb) in acc.iter_mut().zip(&kernel) {
                for (a, &b) in va.iter_mut().zip(vb) {
                    let diff = (BigInt::from(b) - &*a).mod_floor(&pb);
                    *a += &modulus * ((diff * &minv) % &pb);
                }
            }
            modulus *= &pb;
        }
        let candidate: Option<Vec<Vec<BigRational>>> = acc
            .iter()
            .map(|v| v.iter().map(|a| reconstruct(a, &modulus)).collect())
            .collect();
        let Some(candidate) = candidate else { continue };
        let verified = candidate.iter().all(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            ints.iter().all(|row| {
                row.iter()
                    .zip(&w)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
                    .is_zero()
            })
        });
        if verified {
            return best.map(|(r, _)| r);
        }
    }
    None
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(a.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Solves `m x = b` when consistent.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = zeros(field, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![field.zero(); m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, m.cols).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, Rationals};

    fn qmat(rows: &[&[i64]]) -> Matrix<num_rational::BigRational> {
        let f = Rationals;
        let mut m = zeros(&f, rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, f.from_i64(v));
            }
        }
        m
    }

    #[test]
    fn rank_and_kernel() {
        let f = Rationals;
        let m = qmat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&f, &m), 2);
        let k = kernel(&f, &m);
        assert_eq!(k.len(), 1);
        let mut v = zeros(&f, 3, 1);
        for i in 0..3 {
            v.set(i, 0, k[0][i].clone());
        }
        assert!(is_zero(&f, &mul(&f, &m, &v)));
    }

    #[test]
    fn multimodular_rank_matches_elimination() {
        use rand::{Rng, SeedableRng};
        let f = Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for inner in [3usize, 11, 20] {
            let mut a = zeros(&f, 24, inner);
            let mut b = zeros(&f, inner, 31);
            for i in 0..24 {
                for j in 0..inner {
                    let n: i64 = rng.gen_range(-9..=9);
                    a.set(i, j, BigRational::new(n.into(), rng.gen_range(1..=4i64).into()));
                }
            }
            for i in 0..inner {
                for j in 0..31 {
                    b.set(i, j, f.from_i64(rng.gen_range(-9..=9)));
                }
            }
            let m = mul(&f, &a, &b);
            let rows: Vec<Vec<BigRational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
            let mut e = m.clone();
            let direct = rref(&f, &mut e).len();
            assert_eq!(rational_rank(&rows, m.cols()), Some(direct));
            assert_eq!(rank(&f, &m), direct);
        }
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let f = PrimeField::new(3).unwrap();
        let mut m = zeros(&f, 2, 2);
        m.set(0, 0, 1);
        m.set(0, 1, 2);
        m.set(1, 0, 2);
        m.set(1, 1, 1);
        // det = 1 - 4 = -3
        assert_eq!(rank(&f, &m), 1);
        assert_eq!(rank(&Rationals, &qmat(&[&[1, 2], &[2, 1]])), 2);
    }

    #[test]
    fn solving() {
        let f = Rationals;
        let m = qmat(&[&[1, 1], &[1, -1]]);
        let x = solve(&f, &m, &[f.from_i64(3), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let s = qmat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&f, &s, &[f.from_i64(1), f.from_i64(3)]).is_none());
    }
}
