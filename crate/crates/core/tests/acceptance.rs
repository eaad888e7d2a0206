//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stdout
//! (uncaptured, so it shows in plain `cargo test` output).

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gradlc::cli::RingSpecFile;
use gradlc::cohom::{
    depth, du_bois_graded_criterion, ext_modules, induced_ext_maps, local_cohomology_table,
    set_theoretic_cm_obstruction,
};
use gradlc::frobchar::{deformation_check, f_injective_check, fedder_fpure, FrobeniusContext};
use gradlc::groebner::Ideal;
use gradlc::koszul::{find_hsop, hochster_roberts_check, koszul_strand, ParameterSequence};
use gradlc::resolve::free_resolution;
use gradlc::ring::{parse_polynomial, Field, FieldSpec, GradedRingSpec, Monomial, Poly, PolyRing, PrimeField, Rationals};

const PINCHED: &str = include_str!("../corpus/pinched_quartic.ring");
const SEGRE: &str = include_str!("../corpus/segre_fermat.ring");
const ELLIPTIC: &str = include_str!("../corpus/segre_elliptic.ring");
const FERMAT: &str = include_str!("../corpus/fermat_cubic.ring");
const TWISTED: &str = include_str!("../corpus/twisted_cubic.ring");

fn line(n: u32, name: &str, pass: bool, detail: &str, elapsed: Duration, limit: Duration) {
    let text = format!(
        "{} criterion {n}: {name}: {detail} [{:.2}s, limit {}s]\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn over_q(src: &str) -> Ideal<Rationals> {
    RingSpecFile::parse(src).unwrap().build_over(Rationals).unwrap()
}

fn over_p(src: &str, p: u64) -> Ideal<PrimeField> {
    RingSpecFile::parse(src).unwrap().build_over(PrimeField::new(p).unwrap()).unwrap()
}

/// `dim [H^1_m(k[S])]_t` for the semigroup of `s^4, s^3t, st^3, t^4`: the
/// degree-`4t` lattice points `a + b = 4t` minus those in the semigroup.
fn semigroup_gap(t: i64) -> u64 {
    let gens = [(4, 0), (3, 1), (1, 3), (0, 4)];
    let mut level = vec![(0i64, 0i64)];
    for _ in 0..t {
        let mut next: Vec<(i64, i64)> = level
            .iter()
            .flat_map(|&(a, b)| gens.iter().map(move |&(c, d)| (a + c, b + d)))
            .collect();
        next.sort();
        next.dedup();
        level = next;
    }
    (4 * t + 1) as u64 - level.len() as u64
}

#[test]
fn criterion_1_pinched_quartic() {
    let limit = Duration::from_secs(10);
    let start = Instant::now();
    let ideal = over_q(PINCHED);
    let ext = ext_modules(&ideal).unwrap();
    let table = local_cohomology_table(&ext, None);
    let d = depth(&ext).unwrap();
    let dim = ideal.krull_dim().unwrap();
    let support = table.support(1).unwrap();
    let elapsed = start.elapsed();
    let oracle: Vec<(i64, u64)> = (0..=8).map(|t| (t, semigroup_gap(t))).filter(|&(_, g)| g > 0).collect();
    let ok = d == 1 && dim == 2 && support == vec![(1, 1)] && support == oracle;
    line(
        1,
        "pinched quartic depth/dim/H^1",
        ok && elapsed <= limit,
        &format!("depth {d}, dim {dim}, H^1 support {support:?}, semigroup oracle {oracle:?}"),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

#[test]
fn criterion_2_segre_fermat() {
    let limit = Duration::from_secs(600);
    let start = Instant::now();
    let ideal = over_q(SEGRE);
    assert_eq!(ideal.ring().nvars(), 9);
    let ext = ext_modules(&ideal).unwrap();
    let table = local_cohomology_table(&ext, None);
    let d = depth(&ext).unwrap();
    let dim = ideal.krull_dim().unwrap();
    let h2 = table.support(2).unwrap();
    let h3_zero = table.module(3).zero;
    let elapsed = start.elapsed();
    let ok = dim == 4 && d == 2 && h2 == vec![(0, 1)] && h3_zero;
    line(
        2,
        "Segre product of the Fermat cubic with P^2",
        ok && elapsed <= limit,
        &format!("dim {dim}, depth {d}, H^2 support {h2:?}, H^3 zero: {h3_zero}"),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

#[test]
fn criterion_3_hochster_roberts() {
    let limit = Duration::from_secs(600);
    let start = Instant::now();
    let ideal = over_q(SEGRE);
    let ext = ext_modules(&ideal).unwrap();
    let table = local_cohomology_table(&ext, None);
    let x = find_hsop(&ideal, 0, 50).unwrap();
    let rep = hochster_roberts_check(&x, &table).unwrap();
    let koszul: Vec<usize> = (1..=3)
        .map(|r| rep.rows.iter().find(|row| row.r == r && row.t == 0).unwrap().koszul_dim)
        .collect();
    let lc: Vec<u64> = (1..=3).map(|r| table.dim(r, 0)).collect();
    let h3_total = rep.koszul_total.iter().any(|h| h.r == 3 && h.nonzero);
    let elapsed = start.elapsed();
    let ok = koszul == vec![0, 1, 0] && lc == vec![0, 1, 0] && h3_total && rep.all_equal;
    line(
        3,
        "Koszul cohomology vs local cohomology",
        ok && elapsed <= limit,
        &format!("[H^r(x,R)]_0 r=1..3 {koszul:?}, [H^r_m]_0 {lc:?}, H^3(x,R) != 0: {h3_total}"),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

#[test]
fn criterion_4_elliptic_times_line() {
    let limit = Duration::from_secs(120);
    let start = Instant::now();
    let ideal = over_q(ELLIPTIC);
    assert_eq!(ideal.ring().nvars(), 6);
    let ext = ext_modules(&ideal).unwrap();
    let db = du_bois_graded_criterion(&ext);
    let st = set_theoretic_cm_obstruction(&ext).unwrap();
    let d = depth(&ext).unwrap();
    let dim = ideal.krull_dim().unwrap();
    let elapsed = start.elapsed();
    let hit = st.hits.iter().any(|r| r.i == 2 && r.t == 0 && r.dim > 0);
    let ok = db.satisfied && hit && d < dim;
    line(
        4,
        "E x P^1 criteria",
        ok && elapsed <= limit,
        &format!(
            "Du Bois criterion {}, stcm hits {:?}, depth {d} < dim {dim}",
            db.satisfied,
            st.hits.iter().map(|r| (r.i, r.t, r.dim)).collect::<Vec<_>>()
        ),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

#[test]
fn criterion_5_fedder_sweep() {
    let limit = Duration::from_secs(10);
    let start = Instant::now();
    let pure: Vec<u64> = [5u64, 7, 11, 13]
        .into_iter()
        .filter(|&p| fedder_fpure(&FrobeniusContext::new(&over_p(FERMAT, p)).unwrap()).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let ok = pure == vec![7, 13];
    line(5, "Fedder sweep on the Fermat cubic", ok && elapsed <= limit, &format!("F-pure at {pure:?}"), elapsed, limit);
    assert!(ok);
    assert!(elapsed <= limit);
}

#[test]
fn criterion_6_f_injectivity() {
    let limit = Duration::from_secs(30);
    let start = Instant::now();
    let r7 = f_injective_check(&FrobeniusContext::new(&over_p(FERMAT, 7)).unwrap(), 1).unwrap();
    let r5 = f_injective_check(&FrobeniusContext::new(&over_p(FERMAT, 5)).unwrap(), 1).unwrap();
    let elapsed = start.elapsed();
    let w = r5.rows.iter().find_map(|r| r.witness.clone());
    let ok = r7.injective && !r5.injective && w.as_ref().is_some_and(|w| w.j == 1);
    line(
        6,
        "F-injectivity of the Fermat cubic",
        ok && elapsed <= limit,
        &format!("p=7 {}, p=5 {} with witness {:?}", r7.injective, r5.injective, w),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

/// The expected outcome (both legs true) is false: `F_7[x,y]/(x^3+y^3)` has
/// `a`-invariant 1, so Frobenius kills `[H^1_m]_1`. The line reports FAIL;
/// the assertions pin down what is actually true.
#[test]
fn criterion_7_deformation() {
    let limit = Duration::from_secs(30);
    let start = Instant::now();
    let ideal = over_p(FERMAT, 7);
    let ctx = FrobeniusContext::new(&ideal).unwrap();
    let z = parse_polynomial(ideal.ring(), "z").unwrap();
    let rep = deformation_check(&ctx, &z).unwrap();
    let elapsed = start.elapsed();
    let witness = rep
        .leg1_detail
        .as_ref()
        .and_then(|d| d.rows.iter().find_map(|r| r.witness.clone()));
    line(
        7,
        "deformation legs for x^3+y^3+z^3 along z at p=7",
        rep.leg1 && rep.leg2 && elapsed <= limit,
        &format!(
            "leg1 {} (Frobenius witness (Ext index j, t) = {:?}), leg2 {}; expected both true, which does not hold",
            rep.leg1,
            witness.as_ref().map(|w| (w.j, w.t)),
            rep.leg2
        ),
        elapsed,
        limit,
    );
    assert!(!rep.leg1);
    assert_eq!(witness.map(|w| w.t), Some(1));
    assert!(rep.leg2);
    let lines = Ideal::parse(
        &PolyRing::new(GradedRingSpec::standard(&["x", "y"], FieldSpec::PrimeField(7)).unwrap(), PrimeField::new(7).unwrap()).unwrap(),
        &["x^3 + y^3"],
    )
    .unwrap();
    assert!(!fedder_fpure(&FrobeniusContext::new(&lines).unwrap()).unwrap());
    assert!(elapsed <= limit);
}

#[test]
fn criterion_8_ext_power_kernel() {
    let limit = Duration::from_secs(300);
    let start = Instant::now();
    let ideal = over_q(PINCHED);
    let ext = ext_modules(&ideal).unwrap();
    let mut found = None;
    for t in 2..=10u32 {
        let ext_t = ext_modules(&ideal.power(t).unwrap()).unwrap();
        let maps = induced_ext_maps(&ext, &ext_t).unwrap();
        let r = maps.maps[3].is_injective(None).unwrap();
        if let Some(w) = r.witness {
            found = Some((t, w));
            break;
        }
    }
    let elapsed = start.elapsed();
    let ok = found.as_ref().is_some_and(|(_, w)| w.j == 3 && !w.vector.is_empty());
    line(
        8,
        "Ext^3(A/I,A) -> Ext^3(A/I^t,A) on the pinched quartic",
        ok && elapsed <= limit,
        &format!("first kernel {:?}", found.as_ref().map(|(t, w)| (t, w.degree, &w.vector))),
        elapsed,
        limit,
    );
    assert!(ok);
    assert!(elapsed <= limit);
}

// ---- criterion 9: property suites ----

const P: u64 = 32003;

fn field_p() -> PrimeField {
    PrimeField::new(P).unwrap()
}

fn random_ring(rng: &mut ChaCha8Rng) -> PolyRing<PrimeField> {
    let n = rng.gen_range(2..=4);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let weights: Vec<u32> = (0..n).map(|_| if rng.gen_bool(0.25) { 2 } else { 1 }).collect();
    PolyRing::new(GradedRingSpec::new(names, weights, FieldSpec::PrimeField(P)).unwrap(), field_p()).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, ring: &PolyRing<PrimeField>, deg: i64, terms: usize) -> Poly<PrimeField> {
    let mons = ring.monomials_of_degree(deg);
    if mons.is_empty() {
        return ring.zero();
    }
    let f = ring.field();
    ring.from_terms((0..terms).map(|_| {
        let m = mons[rng.gen_range(0..mons.len())].clone();
        (m, f.from_i64(rng.gen_range(1..P as i64)))
    }))
}

fn random_ideal(rng: &mut ChaCha8Rng, ring: &PolyRing<PrimeField>) -> Ideal<PrimeField> {
    let k = rng.gen_range(1..=3);
    let gens: Vec<_> = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            let t = rng.gen_range(1..=4);
            random_form(rng, ring, d, t)
        })
        .filter(|g| !g.is_zero())
        .collect();
    Ideal::new(ring, gens).unwrap()
}

/// Rank mod `P` by elimination.
fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], P - 2);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % P;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let m = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + P - m * rows[rank][k] % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// `f ∈ I` degree by degree: `f_t` in the span of `m·g` with `deg m + deg g = t`.
fn member_by_linear_algebra(ideal: &Ideal<PrimeField>, f: &Poly<PrimeField>) -> bool {
    let ring = ideal.ring();
    let mut degrees: Vec<i64> = f.terms().iter().map(|(m, _)| m.degree()).collect();
    degrees.sort();
    degrees.dedup();
    degrees.into_iter().all(|t| {
        let basis: Vec<Monomial> = ring.monomials_of_degree(t);
        let index = |m: &Monomial| basis.iter().position(|b| b == m).unwrap();
        let vector = |p: &Poly<PrimeField>| {
            let mut v = vec![0u64; basis.len()];
            for (m, c) in p.terms() {
                v[index(m)] = *c;
            }
            v
        };
        let mut rows = Vec::new();
        for g in ideal.gens() {
            let dg = g.degree().unwrap();
            if dg > t {
                continue;
            }
            for m in ring.monomials_of_degree(t - dg) {
                rows.push(vector(&ring.mul_term(g, &m, &ring.field().one())));
            }
        }
        let r0 = rank_mod_p(rows.clone());
        rows.push(vector(&ring.homogeneous_part(f, t)));
        rank_mod_p(rows) == r0
    })
}

fn gb_membership_suite(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let mut checks = 0;
    let mut members = 0;
    for _ in 0..50 {
        let ring = random_ring(rng);
        let ideal = random_ideal(rng, &ring);
        for _ in 0..4 {
            let deg = rng.gen_range(0..=6);
            let mut f = if rng.gen_bool(0.5) {
                let mut acc = ring.zero();
                for g in ideal.gens() {
                    let dh = deg - g.degree().unwrap();
                    if dh >= 0 {
                        let h = random_form(rng, &ring, dh, 3);
                        acc = ring.add(&acc, &ring.mul(&h, g));
                    }
                }
                acc
            } else {
                random_form(rng, &ring, deg, 3)
            };
            if rng.gen_bool(0.2) {
                let d = rng.gen_range(0..=6);
                let other = random_form(rng, &ring, d, 2);
                f = ring.add(&f, &other);
            }
            let gb = ideal.contains(&f).unwrap();
            let la = member_by_linear_algebra(&ideal, &f);
            assert_eq!(gb, la, "membership of {} in {:?}", ring.format(&f), ideal.gens().iter().map(|g| ring.format(g)).collect::<Vec<_>>());
            checks += 1;
            members += gb as usize;
        }
    }
    (checks, members)
}

fn check_resolution<F: Field>(ideal: &Ideal<F>) {
    let res = free_resolution(ideal, true).unwrap();
    assert!(res.check_complex().unwrap(), "d^2 != 0");
    let hs = ideal.hilbert_series().unwrap();
    assert_eq!(hs.numerator(), &res.euler_numerator(), "Hilbert numerator differs from the Betti alternating sum");
}

fn check_depth<F: Field>(ideal: &Ideal<F>) {
    let ext = ext_modules(ideal).unwrap();
    let n = ideal.ring().nvars() as i64;
    let pd = ext.resolution().length() as i64;
    let via_ext = depth(&ext).unwrap();
    let via_lc = local_cohomology_table(&ext, None).depth().map(|d| d as i64);
    assert_eq!(via_ext, n - pd, "Auslander-Buchsbaum");
    assert_eq!(Some(via_ext), via_lc, "Ext side vs local cohomology side");
}

fn check_strand<F: Field>(x: &ParameterSequence<F>, t: i64) {
    let s = koszul_strand(x, t).unwrap();
    assert_eq!(s.euler_chain(), s.euler_cohomology(), "Euler characteristic at t={t}");
    let hs = x.ideal().hilbert_series().unwrap();
    let e = x.degrees();
    for (r, &dim) in s.dims.iter().enumerate() {
        let mut expect = 0i64;
        for mask in 0u32..(1 << e.len()) {
            if mask.count_ones() as usize == r {
                let shift: i64 = (0..e.len()).filter(|k| mask >> k & 1 == 1).map(|k| e[k]).sum();
                expect += hs.coefficient(t + shift);
            }
        }
        assert_eq!(dim as i64, expect, "dim [K^{r}]_{t}");
    }
}

#[test]
fn criterion_9_property_suites() {
    let limit = Duration::from_secs(900);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let (checks, members) = gb_membership_suite(&mut rng);

    let corpus_q: Vec<Ideal<Rationals>> = [PINCHED, SEGRE, ELLIPTIC, FERMAT, TWISTED].iter().map(|s| over_q(s)).collect();
    for i in &corpus_q {
        check_resolution(i);
        check_depth(i);
    }
    let mut random_ideals = 0;
    while random_ideals < 20 {
        let ring = random_ring(&mut rng);
        let i = random_ideal(&mut rng, &ring);
        if i.is_unit().unwrap() {
            continue;
        }
        check_resolution(&i);
        check_depth(&i);
        random_ideals += 1;
    }

    let small = [PINCHED, ELLIPTIC, FERMAT, TWISTED];
    let mut strands = 0;
    while strands < 20 {
        let src = small[rng.gen_range(0..small.len())];
        let ideal = over_p(src, P);
        let x = find_hsop(&ideal, rng.gen(), 50).unwrap();
        let lo = -x.degrees().iter().sum::<i64>();
        check_strand(&x, rng.gen_range(lo..=3));
        strands += 1;
    }
    let elapsed = start.elapsed();
    line(
        9,
        "property suites",
        elapsed <= limit,
        &format!(
            "{checks} memberships ({members} members) agree with linear algebra on 50 ideals; d^2 = 0, Hilbert identity and depth agree on {} resolutions; Euler characteristic on {strands} strands",
            corpus_q.len() + random_ideals
        ),
        elapsed,
        limit,
    );
    assert!(elapsed <= limit);
}
