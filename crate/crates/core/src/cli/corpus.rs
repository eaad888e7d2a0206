//! Built-in examples with stored expectations; `gradlc corpus` replays them.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::ringfile::RingSpecFile;
use super::Outcome;
use crate::cohom::{
    depth, du_bois_graded_criterion, ext_modules, induced_ext_maps, krull_dim, local_cohomology_table,
    set_theoretic_cm_obstruction, LocalCohomologyTable,
};
use crate::error::Result;
use crate::frobchar::{f_injective_check, fedder_fpure, FrobeniusContext};
use crate::koszul::{find_hsop, hochster_roberts_check};
use crate::ring::{PrimeField, Rationals};

/// Support of one `H^i_m(R)`.
enum Lc {
    Finite(&'static [(i64, u64)]),
    Tail,
}

enum Extra {
    DuBois(bool),
    /// `(i, t, dim)` hits of the set-theoretic CM obstruction.
    Stcm(&'static [(usize, i64, u64)]),
    /// `(r, dim [H^r(x;R)]_0)` and the `r` with `H^r(x;R) != 0`.
    Koszul {
        seed: u64,
        degree_zero: &'static [(usize, usize)],
        nonzero: &'static [usize],
    },
    /// First `j` where `Ext^j(A/I) -> Ext^j(A/I^t)` has a kernel, with its degree.
    PowerKernel { t: u32, j: usize, degree: i64 },
    Fedder(&'static [(u64, bool)]),
    /// `None` when F-injective, else the witness `(j, t)`.
    FInjective(&'static [(u64, Option<(usize, i64)>)]),
}

struct Example {
    name: &'static str,
    file: &'static str,
    depth: i64,
    dim: i64,
    lc: &'static [(usize, Lc)],
    extra: &'static [Extra],
}

const EXAMPLES: &[Example] = &[
    Example {
        name: "pinched_quartic",
        file: include_str!("../../corpus/pinched_quartic.ring"),
        depth: 1,
        dim: 2,
        lc: &[(1, Lc::Finite(&[(1, 1)])), (2, Lc::Tail)],
        extra: &[
            Extra::DuBois(false),
            Extra::Stcm(&[]),
            Extra::PowerKernel { t: 2, j: 3, degree: -5 },
        ],
    },
    Example {
        name: "segre_fermat",
        file: include_str!("../../corpus/segre_fermat.ring"),
        depth: 2,
        dim: 4,
        lc: &[(2, Lc::Finite(&[(0, 1)])), (4, Lc::Tail)],
        extra: &[
            Extra::DuBois(true),
            Extra::Stcm(&[(2, 0, 1)]),
            Extra::Koszul {
                seed: 0,
                degree_zero: &[(0, 0), (1, 0), (2, 1), (3, 0)],
                nonzero: &[2, 3, 4],
            },
        ],
    },
    Example {
        name: "segre_elliptic",
        file: include_str!("../../corpus/segre_elliptic.ring"),
        depth: 2,
        dim: 3,
        lc: &[(2, Lc::Finite(&[(0, 1)])), (3, Lc::Tail)],
        extra: &[Extra::DuBois(true), Extra::Stcm(&[(2, 0, 1)])],
    },
    Example {
        name: "fermat_cubic",
        file: include_str!("../../corpus/fermat_cubic.ring"),
        depth: 2,
        dim: 2,
        lc: &[(2, Lc::Tail)],
        extra: &[
            Extra::DuBois(true),
            Extra::Fedder(&[(5, false), (7, true), (11, false), (13, true)]),
            Extra::FInjective(&[(5, Some((1, 0))), (7, None)]),
        ],
    },
    Example {
        name: "twisted_cubic",
        file: include_str!("../../corpus/twisted_cubic.ring"),
        depth: 2,
        dim: 2,
        lc: &[(2, Lc::Tail)],
        extra: &[Extra::DuBois(true), Extra::Stcm(&[])],
    },
];

/// Names and ring-spec texts of the built-in examples.
pub fn corpus_examples() -> Vec<(&'static str, &'static str)> {
    EXAMPLES.iter().map(|e| (e.name, e.file)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusCheck {
    pub example: &'static str,
    pub check: String,
    pub expected: Value,
    pub actual: Value,
    pub ok: bool,
}

pub fn run_corpus() -> Result<Outcome> {
    let per: Vec<Result<Vec<CorpusCheck>>> = EXAMPLES.par_iter().map(replay).collect();
    let mut checks = Vec::new();
    for c in per {
        checks.extend(c?);
    }
    let all = checks.iter().all(|c| c.ok);
    Ok(Outcome {
        hypotheses: Vec::new(),
        verdict: Some(all),
        result: json!({ "checks": checks }),
    })
}

fn lc_value(i: usize, lc: &Lc) -> Value {
    match lc {
        Lc::Finite(s) => json!({"i": i, "support": s}),
        Lc::Tail => json!({"i": i, "support": "tail"}),
    }
}

fn lc_actual(table: &LocalCohomologyTable) -> Result<Value> {
    let mut out = Vec::new();
    for i in 0..=table.n {
        let m = table.module(i);
        if m.zero {
            continue;
        }
        out.push(if m.finite_length {
            json!({"i": i, "support": table.support(i)?})
        } else {
            json!({"i": i, "support": "tail"})
        });
    }
    Ok(Value::Array(out))
}

fn replay(ex: &Example) -> Result<Vec<CorpusCheck>> {
    let file = RingSpecFile::parse(ex.file)?;
    let ideal = file.build_over(Rationals)?;
    let ext = ext_modules(&ideal)?;
    let table = local_cohomology_table(&ext, None);
    let mut out = Vec::new();
    let mut check = |name: String, expected: Value, actual: Value| {
        out.push(CorpusCheck {
            example: ex.name,
            check: name,
            ok: expected == actual,
            expected,
            actual,
        })
    };
    check("depth".into(), json!(ex.depth), json!(depth(&ext)?));
    check("dim".into(), json!(ex.dim), json!(krull_dim(&ideal)?));
    let lc: Vec<Value> = ex.lc.iter().map(|(i, s)| lc_value(*i, s)).collect();
    check("local cohomology".into(), Value::Array(lc), lc_actual(&table)?);
    for extra in ex.extra {
        match extra {
            Extra::DuBois(b) => {
                check("du bois criterion".into(), json!(b), json!(du_bois_graded_criterion(&ext).satisfied));
            }
            Extra::Stcm(hits) => {
                let rep = set_theoretic_cm_obstruction(&ext)?;
                let actual: Vec<(usize, i64, u64)> = rep.hits.iter().map(|r| (r.i, r.t, r.dim)).collect();
                check("stcm hits".into(), json!(hits), json!(actual));
            }
            Extra::Koszul {
                seed,
                degree_zero,
                nonzero,
            } => {
                let x = find_hsop(&ideal, *seed, 50)?;
                let rep = hochster_roberts_check(&x, &table)?;
                let rows: Vec<(usize, usize)> = rep.rows.iter().filter(|r| r.t == 0).map(|r| (r.r, r.koszul_dim)).collect();
                check(format!("koszul degree 0 (seed {seed})"), json!(degree_zero), json!(rows));
                let nz: Vec<usize> = rep.koszul_total.iter().filter(|h| h.nonzero).map(|h| h.r).collect();
                check(format!("koszul nonzero (seed {seed})"), json!(nonzero), json!(nz));
            }
            Extra::PowerKernel { t, j, degree } => {
                let ext_t = ext_modules(&ideal.power(*t)?)?;
                let maps = induced_ext_maps(&ext, &ext_t)?;
                let mut actual = Value::Null;
                for m in &maps.maps {
                    let r = m.is_injective(None)?;
                    if let Some(w) = r.witness {
                        actual = json!({"j": w.j, "degree": w.degree});
                        break;
                    }
                }
                check(format!("ext kernel at power {t}"), json!({"j": j, "degree": degree}), actual);
            }
            Extra::Fedder(cases) => {
                for (p, b) in *cases {
                    let ctx = FrobeniusContext::new(&file.build_over(PrimeField::new(*p)?)?)?;
                    check(format!("fedder p={p}"), json!(b), json!(fedder_fpure(&ctx)?));
                }
            }
            Extra::FInjective(cases) => {
                for (p, w) in *cases {
                    let ctx = FrobeniusContext::new(&file.build_over(PrimeField::new(*p)?)?)?;
                    let rep = f_injective_check(&ctx, 1)?;
                    let actual = rep
                        .rows
                        .iter()
                        .find_map(|r| r.witness.as_ref())
                        .map(|w| json!({"j": w.j, "t": w.t}));
                    let expected = w.map(|(j, t)| json!({"j": j, "t": t}));
                    check(format!("f-injective witness p={p}"), json!(expected), json!(actual));
                }
            }
        }
    }
    Ok(out)
}
