//! Randomized invariants of the ideal, Ext and ring-spec layers.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gradlc::cli::RingSpecFile;
use gradlc::cohom::{depth, ext_modules, induced_ext_maps, local_cohomology_table};
use gradlc::groebner::Ideal;
use gradlc::ring::{Field, FieldSpec, GradedRingSpec, Poly, PolyRing, PrimeField};

fn ring(p: u64, n: usize, weights: Vec<u32>) -> PolyRing<PrimeField> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    PolyRing::new(GradedRingSpec::new(names, weights, FieldSpec::PrimeField(p)).unwrap(), PrimeField::new(p).unwrap()).unwrap()
}

fn form(rng: &mut ChaCha8Rng, r: &PolyRing<PrimeField>, deg: i64, terms: usize) -> Poly<PrimeField> {
    let mons = r.monomials_of_degree(deg);
    if mons.is_empty() {
        return r.zero();
    }
    let p = r.field().characteristic() as i64;
    r.from_terms((0..terms).map(|_| (mons[rng.gen_range(0..mons.len())].clone(), r.field().from_i64(rng.gen_range(1..p)))))
}

fn ideal(rng: &mut ChaCha8Rng, r: &PolyRing<PrimeField>, k: usize, max_deg: i64) -> Ideal<PrimeField> {
    let gens = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=max_deg);
            let t = rng.gen_range(1..=3);
            form(rng, r, d, t)
        })
        .collect();
    Ideal::new(r, gens).unwrap()
}

fn setup(seed: u64, p: u64) -> (ChaCha8Rng, PolyRing<PrimeField>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=3);
    let w = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let r = ring(p, n, w);
    (rng, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn buchberger_criterion_holds(seed in any::<u64>()) {
        let (mut rng, r) = setup(seed, 32003);
        let i = ideal(&mut rng, &r, 3, 3);
        prop_assert!(i.gb().unwrap().verify());
    }

    #[test]
    fn colon_is_characterized_by_products(seed in any::<u64>()) {
        let (mut rng, r) = setup(seed, 32003);
        let j = ideal(&mut rng, &r, 2, 2);
        let i = ideal(&mut rng, &r, 2, 2);
        let c = j.colon(&i).unwrap();
        for _ in 0..6 {
            let d = rng.gen_range(0..=4);
            let f = if rng.gen_bool(0.5) && !c.gens().is_empty() {
                let g = &c.gens()[rng.gen_range(0..c.gens().len())];
                let dh = rng.gen_range(0..=2);
                r.mul(&form(&mut rng, &r, dh, 2), g)
            } else {
                form(&mut rng, &r, d, 3)
            };
            let by_products = i.gens().iter().all(|g| j.contains(&r.mul(&f, g)).unwrap());
            prop_assert_eq!(c.contains(&f).unwrap(), by_products);
        }
    }

    #[test]
    fn frobenius_power_commutes_with_sums(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let (mut rng, r) = setup(seed, p);
        let i = ideal(&mut rng, &r, 2, 2);
        let j = ideal(&mut rng, &r, 2, 2);
        let q = p as u32;
        let lhs = i.sum(&j).unwrap().frobenius_power(q).unwrap();
        let rhs = i.frobenius_power(q).unwrap().sum(&j.frobenius_power(q).unwrap()).unwrap();
        prop_assert!(lhs.same_as(&rhs).unwrap());
    }

    #[test]
    fn depth_cm_detection_and_grading_bound(seed in any::<u64>()) {
        let (mut rng, r) = setup(seed, 32003);
        let k = rng.gen_range(1..=3);
        let i = ideal(&mut rng, &r, k, 2);
        prop_assume!(!i.is_unit().unwrap());
        let ext = ext_modules(&i).unwrap();
        let n = ext.nvars();
        let d = depth(&ext).unwrap();
        let dim = i.krull_dim().unwrap();
        let nonzero = (0..=n).filter(|&j| !ext.ext(j).is_zero()).count();
        prop_assert_eq!(nonzero == 1, d == dim);
        let table = local_cohomology_table(&ext, None);
        let dd = r.spec().d();
        for k in 0..=n {
            if let Some(s) = ext.ext(n - k).initial_degree() {
                for t in (-s - dd + 1)..(-s - dd + 6) {
                    prop_assert_eq!(table.dim(k, t), 0);
                }
            }
        }
    }

    #[test]
    fn ring_spec_round_trip(
        p in prop::sample::select(vec![0u64, 2, 7, 32003]),
        n in 1usize..5,
        weights in prop::collection::vec(1u32..4, 4),
        exps in prop::collection::vec(prop::collection::vec(0u8..3, 4), 0..4),
        padding in "[ ]{0,3}",
    ) {
        let field = if p == 0 { "Q".to_string() } else { format!("Fp:{p}") };
        let vars: Vec<String> = (0..n).map(|k| format!("y{k}")).collect();
        let mut src = format!("# generated\nfield ={padding}{field}\nvars = {}\n", vars.join(&format!(",{padding}")));
        let w: Vec<String> = weights[..n].iter().map(|w| w.to_string()).collect();
        src.push_str(&format!("weights = {}\n", w.join(",")));
        for e in &exps {
            let m: Vec<String> = (0..n).map(|k| format!("{}^{}", vars[k], e[k])).collect();
            src.push_str(&format!("gen = {padding}{}{padding}\n", m.join("*")));
        }
        let once = RingSpecFile::parse(&src).unwrap();
        let text = once.serialize();
        let twice = RingSpecFile::parse(&text).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(text, twice.serialize());
        prop_assert!(once.build().is_ok());
    }
}

/// Induced Ext maps: identity for `J = I`, and `I ⊇ I^2 ⊇ I^3` composes on
/// cohomology.
#[test]
fn ext_maps_are_functorial() {
    let mut compared = 0;
    for seed in 0..8u64 {
        let (mut rng, r) = setup(seed, 32003);
        let i = ideal(&mut rng, &r, 2, 2);
        if i.is_unit().unwrap() {
            continue;
        }
        let i2 = i.power(2).unwrap();
        let i3 = i.power(3).unwrap();
        let (e1, e2, e3) = (ext_modules(&i).unwrap(), ext_modules(&i2).unwrap(), ext_modules(&i3).unwrap());
        let same = ext_modules(&i).unwrap();
        let id = induced_ext_maps(&e1, &same).unwrap();
        let a = induced_ext_maps(&e1, &e2).unwrap();
        let b = induced_ext_maps(&e2, &e3).unwrap();
        let direct = induced_ext_maps(&e1, &e3).unwrap();
        for j in 0..=r.nvars() {
            let src = e1.ext(j);
            for z in src.cocycles().unwrap().gens() {
                let image = id.maps[j].matrix.apply(z);
                assert_eq!(same.ext(j).reduce(&image).unwrap(), src.reduce(z).unwrap(), "identity, seed {seed}, j {j}");
                let composed = b.maps[j].matrix.apply(&a.maps[j].matrix.apply(z));
                let target = e3.ext(j);
                assert_eq!(
                    target.reduce(&composed).unwrap(),
                    target.reduce(&direct.maps[j].matrix.apply(z)).unwrap(),
                    "composition, seed {seed}, j {j}"
                );
                compared += 1;
            }
        }
    }
    assert!(compared >= 8, "only {compared} classes compared");
}
