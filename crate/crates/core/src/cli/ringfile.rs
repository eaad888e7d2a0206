//! Ring-spec files: `key = value` lines, `#` comments.
//!
//! ```text
//! field = Q                 # or Fp:<prime>
//! vars = x, y, z
//! weights = 1, 1, 1         # optional, default all 1
//! gen = x^3 + y^3 + z^3     # repeatable
//! ```
//!
//! A `construction` line replaces explicit generators by a kernel computed
//! with [`kernel_of_ring_map`]:
//!
//! * `segre`: `left-vars`, `left-gen`*, `right-vars`, `right-gen`*. Both
//!   factors are standard graded; the new variables are the products
//!   `vw`, named by concatenation unless `vars` is given.
//! * `veronese`: `base-vars`, `base-gen`*, `degree`. New variables `v0, v1, ..`
//!   stand for the base monomials of that degree.
//! * `semigroup-kernel`: `param-vars` and monomial `image` lines. New
//!   variables `u0, u1, ..`; weights default to the image degrees divided
//!   by their gcd.
//!
//! `gen` lines may be combined with a construction and are added to the
//! kernel.

use std::fmt::Write as _;
use std::path::Path;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::groebner::{kernel_of_ring_map, Ideal};
use crate::ring::{parse_polynomial_at, Field, FieldSpec, GradedRingSpec, Poly, PolyRing, PrimeField, Rationals};

/// A polynomial expression with its position in the source file.
#[derive(Clone, Debug)]
pub struct Expr {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Expr {}

impl Expr {
    fn parse<F: Field>(&self, ring: &PolyRing<F>) -> Result<Poly<F>> {
        parse_polynomial_at(ring, &self.text, self.line, self.column)
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message,
        }
    }

    /// Parses and rejects inhomogeneous results.
    fn homogeneous<F: Field>(&self, ring: &PolyRing<F>) -> Result<Poly<F>> {
        let f = self.parse(ring)?;
        if !f.is_homogeneous() {
            return Err(self.error(format!("generator `{}` is not homogeneous", self.text)));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub vars: Vec<String>,
    pub gens: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Segre { left: Factor, right: Factor },
    Veronese { base: Factor, degree: u32 },
    SemigroupKernel { params: Vec<String>, images: Vec<Expr> },
}

impl Construction {
    fn name(&self) -> &'static str {
        match self {
            Construction::Segre { .. } => "segre",
            Construction::Veronese { .. } => "veronese",
            Construction::SemigroupKernel { .. } => "semigroup-kernel",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpecFile {
    pub field: FieldSpec,
    pub vars: Option<Vec<String>>,
    pub weights: Option<Vec<u32>>,
    pub gens: Vec<Expr>,
    pub construction: Option<Construction>,
}

/// The ideal of a ring-spec file over the field it declares.
#[derive(Clone, Debug)]
pub enum AnyIdeal {
    Rational(Ideal<Rationals>),
    Modular(Ideal<PrimeField>),
}

impl AnyIdeal {
    pub fn spec(&self) -> &GradedRingSpec {
        match self {
            AnyIdeal::Rational(i) => i.ring().spec(),
            AnyIdeal::Modular(i) => i.ring().spec(),
        }
    }

    /// Generators in the ring's notation.
    pub fn format_gens(&self) -> Vec<String> {
        match self {
            AnyIdeal::Rational(i) => i.gens().iter().map(|g| i.ring().format(g)).collect(),
            AnyIdeal::Modular(i) => i.gens().iter().map(|g| i.ring().format(g)).collect(),
        }
    }
}

/// Reads, parses and builds a ring-spec file.
pub fn parse_ring_spec(path: &Path) -> Result<(GradedRingSpec, AnyIdeal)> {
    let file = load_ring_spec(path)?;
    let ideal = file.build()?;
    Ok((ideal.spec().clone(), ideal))
}

pub fn load_ring_spec(path: &Path) -> Result<RingSpecFile> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RingSpecFile::parse(&src)
}

const KEYS: &[&str] = &[
    "field",
    "vars",
    "weights",
    "gen",
    "construction",
    "left-vars",
    "left-gen",
    "right-vars",
    "right-gen",
    "base-vars",
    "base-gen",
    "degree",
    "param-vars",
    "image",
];

fn repeatable(key: &str) -> bool {
    matches!(key, "gen" | "left-gen" | "right-gen" | "base-gen" | "image")
}

/// Keys that belong to one construction only.
fn owner(key: &str) -> Option<&'static str> {
    match key {
        "left-vars" | "left-gen" | "right-vars" | "right-gen" => Some("segre"),
        "base-vars" | "base-gen" | "degree" => Some("veronese"),
        "param-vars" | "image" => Some("semigroup-kernel"),
        _ => None,
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    column: usize,
}

impl Entry {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn expr(&self) -> Result<Expr> {
        if self.value.is_empty() {
            return Err(self.error(format!("`{}` needs an expression", self.key)));
        }
        Ok(Expr {
            text: self.value.clone(),
            line: self.line,
            column: self.column,
        })
    }

    /// Comma-separated items with their columns.
    fn items(&self) -> Result<Vec<(String, usize)>> {
        let mut out = Vec::new();
        let mut col = self.column;
        for piece in self.value.split(',') {
            let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
            let item = piece.trim();
            if item.is_empty() {
                return Err(Error::Parse {
                    line: self.line,
                    column: col + lead,
                    message: "empty list item".into(),
                });
            }
            out.push((item.to_string(), col + lead));
            col += piece.chars().count() + 1;
        }
        Ok(out)
    }

    fn names(&self) -> Result<Vec<String>> {
        let items = self.items()?;
        let mut out: Vec<String> = Vec::new();
        for (name, col) in items {
            let err = |m: String| Error::Parse {
                line: self.line,
                column: col,
                message: m,
            };
            let mut chars = name.chars();
            let ok_head = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_');
            if !ok_head || !chars.all(|c| c.is_alphanumeric() || c == '_') {
                return Err(err(format!("`{name}` is not a variable name")));
            }
            if out.contains(&name) {
                return Err(err(format!("duplicate variable name {name}")));
            }
            out.push(name);
        }
        Ok(out)
    }

    fn weights(&self) -> Result<Vec<u32>> {
        self.items()?
            .into_iter()
            .map(|(w, col)| {
                let err = |m: &str| Error::Parse {
                    line: self.line,
                    column: col,
                    message: m.into(),
                };
                let v: u32 = w.parse().map_err(|_| err("weights must be integers"))?;
                if v == 0 {
                    return Err(err("weights strictly positive"));
                }
                Ok(v)
            })
            .collect()
    }

    fn field(&self) -> Result<FieldSpec> {
        if self.value == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = self
            .value
            .strip_prefix("Fp:")
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| self.error(format!("unknown field `{}`; expected Q or Fp:<prime>", self.value)))?;
        FieldSpec::prime(p).map_err(|e| self.error(e.to_string()))
    }
}

impl RingSpecFile {
    pub fn parse(src: &str) -> Result<Self> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut last_line = 0;
        for (k, raw) in src.lines().enumerate() {
            let line = k + 1;
            last_line = line;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let lead = body.chars().take_while(|c| c.is_whitespace()).count();
            let Some(eq) = body.find('=') else {
                return Err(Error::Parse {
                    line,
                    column: lead + 1,
                    message: "expected `key = value`".into(),
                });
            };
            let key = body[..eq].trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line,
                    column: lead + 1,
                    message: format!("unknown key `{key}`"),
                });
            }
            let after = &body[eq + 1..];
            let pad = after.chars().take_while(|c| c.is_whitespace()).count();
            let column = body[..eq].chars().count() + 2 + pad;
            if !repeatable(&key) {
                if let Some(prev) = entries.iter().find(|e| e.key == key) {
                    return Err(Error::Parse {
                        line,
                        column: lead + 1,
                        message: format!("duplicate key `{key}` (first set on line {})", prev.line),
                    });
                }
            }
            entries.push(Entry {
                key,
                value: after.trim().to_string(),
                line,
                column,
            });
        }
        let eof = |m: String| Error::Parse {
            line: last_line + 1,
            column: 1,
            message: m,
        };
        let get = |key: &str| entries.iter().find(|e| e.key == key);
        let exprs = |key: &str| {
            entries
                .iter()
                .filter(|e| e.key == key)
                .map(|e| e.expr())
                .collect::<Result<Vec<_>>>()
        };

        let field = get("field").ok_or_else(|| eof("missing key `field`".into()))?.field()?;
        let vars = get("vars").map(|e| e.names()).transpose()?;
        let weights = get("weights").map(|e| e.weights()).transpose()?;
        let gens = exprs("gen")?;

        let kind = get("construction");
        if let Some(kind) = kind {
            if !matches!(kind.value.as_str(), "segre" | "veronese" | "semigroup-kernel") {
                return Err(kind.error(format!(
                    "unknown construction `{}`; expected segre, veronese or semigroup-kernel",
                    kind.value
                )));
            }
        }
        let kind_name = kind.map(|k| k.value.as_str());
        for e in &entries {
            if let Some(o) = owner(&e.key) {
                if kind_name != Some(o) {
                    return Err(e.error(format!("`{}` is only valid with `construction = {o}`", e.key)));
                }
            }
        }
        let need = |key: &str| get(key).ok_or_else(|| eof(format!("missing key `{key}`")));
        let construction = match kind_name {
            None => None,
            Some("segre") => Some(Construction::Segre {
                left: Factor {
                    vars: need("left-vars")?.names()?,
                    gens: exprs("left-gen")?,
                },
                right: Factor {
                    vars: need("right-vars")?.names()?,
                    gens: exprs("right-gen")?,
                },
            }),
            Some("veronese") => {
                let d = need("degree")?;
                let degree: u32 = d
                    .value
                    .parse()
                    .ok()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| d.error("degree must be a positive integer"))?;
                Some(Construction::Veronese {
                    base: Factor {
                        vars: need("base-vars")?.names()?,
                        gens: exprs("base-gen")?,
                    },
                    degree,
                })
            }
            Some(_) => {
                let images = exprs("image")?;
                if images.is_empty() {
                    return Err(eof("missing key `image`".into()));
                }
                Some(Construction::SemigroupKernel {
                    params: need("param-vars")?.names()?,
                    images,
                })
            }
        };
        if construction.is_none() && vars.is_none() {
            return Err(eof("missing key `vars`".into()));
        }
        if let (Some(v), Some(w)) = (&vars, &weights) {
            if v.len() != w.len() {
                let e = get("weights").unwrap();
                return Err(e.error(format!("{} weights for {} variables", w.len(), v.len())));
            }
        }
        Ok(RingSpecFile {
            field,
            vars,
            weights,
            gens,
            construction,
        })
    }

    /// Canonical text; `parse(serialize(f)) == f`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let list = |v: &[String]| v.join(", ");
        writeln!(s, "field = {}", self.field).unwrap();
        if let Some(c) = &self.construction {
            writeln!(s, "construction = {}", c.name()).unwrap();
            let factor = |s: &mut String, side: &str, f: &Factor| {
                writeln!(s, "{side}-vars = {}", list(&f.vars)).unwrap();
                for g in &f.gens {
                    writeln!(s, "{side}-gen = {}", g.text).unwrap();
                }
            };
            match c {
                Construction::Segre { left, right } => {
                    factor(&mut s, "left", left);
                    factor(&mut s, "right", right);
                }
                Construction::Veronese { base, degree } => {
                    factor(&mut s, "base", base);
                    writeln!(s, "degree = {degree}").unwrap();
                }
                Construction::SemigroupKernel { params, images } => {
                    writeln!(s, "param-vars = {}", list(params)).unwrap();
                    for m in images {
                        writeln!(s, "image = {}", m.text).unwrap();
                    }
                }
            }
        }
        if let Some(v) = &self.vars {
            writeln!(s, "vars = {}", list(v)).unwrap();
        }
        if let Some(w) = &self.weights {
            let w: Vec<String> = w.iter().map(|w| w.to_string()).collect();
            writeln!(s, "weights = {}", w.join(", ")).unwrap();
        }
        for g in &self.gens {
            writeln!(s, "gen = {}", g.text).unwrap();
        }
        s
    }

    /// Builds the ideal over the declared field.
    pub fn build(&self) -> Result<AnyIdeal> {
        match self.field {
            FieldSpec::Rationals => Ok(AnyIdeal::Rational(self.build_over(Rationals)?)),
            FieldSpec::PrimeField(p) => Ok(AnyIdeal::Modular(self.build_over(PrimeField::new(p)?)?)),
        }
    }

    /// Builds the ideal over `field`, which may differ from the declared one
    /// (reduction of a `Q` file modulo a prime).
    pub fn build_over<F: Field>(&self, field: F) -> Result<Ideal<F>> {
        let spec = field.spec();
        let (names, default_weights, kernel): (Vec<String>, Vec<u32>, Option<Kernel<F>>) = match &self.construction {
            None => {
                let v = self.vars.clone().expect("checked by the parser");
                let n = v.len();
                (v, vec![1; n], None)
            }
            Some(Construction::Segre { left, right }) => {
                for v in &right.vars {
                    if left.vars.contains(v) {
                        return Err(Error::domain(format!("variable {v} appears in both Segre factors")));
                    }
                }
                let joint_names: Vec<String> = left.vars.iter().chain(&right.vars).cloned().collect();
                let joint = standard(&field, joint_names)?;
                let lring = standard(&field, left.vars.clone())?;
                let rring = standard(&field, right.vars.clone())?;
                let mut tgens = Vec::new();
                for (f, r) in [(left, &lring), (right, &rring)] {
                    for g in &f.gens {
                        g.homogeneous(r)?;
                        tgens.push(g.homogeneous(&joint)?);
                    }
                }
                let nl = left.vars.len();
                let mut names = Vec::new();
                let mut images = Vec::new();
                for (a, u) in left.vars.iter().enumerate() {
                    for (b, w) in right.vars.iter().enumerate() {
                        names.push(format!("{u}{w}"));
                        let mut e = vec![0u16; joint.nvars()];
                        e[a] = 1;
                        e[nl + b] = 1;
                        images.push(joint.term(joint.monomial(&e)?, field.one()));
                    }
                }
                let n = names.len();
                let t = Ideal::new(&joint, tgens)?;
                (names, vec![1; n], Some((joint, images, Some(t))))
            }
            Some(Construction::Veronese { base, degree }) => {
                let ring = standard(&field, base.vars.clone())?;
                let gens = base.gens.iter().map(|g| g.homogeneous(&ring)).collect::<Result<Vec<_>>>()?;
                let mons = ring.monomials_of_degree(*degree as i64);
                let images: Vec<Poly<F>> = mons.into_iter().map(|m| ring.term(m, field.one())).collect();
                let names: Vec<String> = (0..images.len()).map(|k| format!("v{k}")).collect();
                let n = names.len();
                let t = Ideal::new(&ring, gens)?;
                (names, vec![1; n], Some((ring, images, Some(t))))
            }
            Some(Construction::SemigroupKernel { params, images }) => {
                let ring = standard(&field, params.clone())?;
                let mut polys = Vec::new();
                for m in images {
                    let f = m.parse(&ring)?;
                    let monomial = f.len() == 1 && field.is_one(&f.terms()[0].1);
                    if !monomial {
                        return Err(m.error(format!("image `{}` is not a monomial", m.text)));
                    }
                    polys.push(f);
                }
                let degs: Vec<i64> = polys.iter().map(|f| f.degree().unwrap()).collect();
                let g = degs.iter().fold(0i64, |a, &b| a.gcd(&b)).max(1);
                let weights: Vec<u32> = degs.iter().map(|&d| (d / g).max(1) as u32).collect();
                let names: Vec<String> = (0..polys.len()).map(|k| format!("u{k}")).collect();
                (names, weights, Some((ring, polys, None)))
            }
        };
        let names = match &self.vars {
            Some(v) if self.construction.is_some() => {
                if v.len() != names.len() {
                    return Err(Error::structural(format!(
                        "the {} construction has {} variables but `vars` lists {}",
                        self.construction.as_ref().unwrap().name(),
                        names.len(),
                        v.len()
                    )));
                }
                v.clone()
            }
            _ => names,
        };
        let weights = self.weights.clone().unwrap_or(default_weights);
        let ring = PolyRing::new(GradedRingSpec::new(names, weights, spec)?, field)?;
        let mut gens = match kernel {
            None => Vec::new(),
            Some((target, images, tideal)) => kernel_of_ring_map(&ring, &target, &images, tideal.as_ref())?
                .gens()
                .to_vec(),
        };
        for g in &self.gens {
            gens.push(g.homogeneous(&ring)?);
        }
        Ideal::new(&ring, gens)
    }
}

type Kernel<F> = (PolyRing<F>, Vec<Poly<F>>, Option<Ideal<F>>);

fn standard<F: Field>(field: &F, vars: Vec<String>) -> Result<PolyRing<F>> {
    let n = vars.len();
    PolyRing::new(GradedRingSpec::new(vars, vec![1; n], field.spec())?, field.clone())
}
