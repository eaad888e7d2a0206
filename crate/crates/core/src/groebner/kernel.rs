use num_integer::Integer;

use super::ideal::Ideal;
use crate::error::{Error, Result};
use crate::ring::{GradedRingSpec, Field, Monomial, MonomialOrder, Poly, PolyRing};

/// Kernel of `source -> target / target_ideal`, `y_i ↦ images[i]`, by
/// elimination on the joint ring (target variables first, eliminated).
///
/// Degrees must be proportional: `deg images[i] = λ · weight(y_i)` for one
/// rational `λ > 0` across all nonzero images.
pub fn kernel_of_ring_map<F: Field>(
    source: &PolyRing<F>,
    target: &PolyRing<F>,
    images: &[Poly<F>],
    target_ideal: Option<&Ideal<F>>,
) -> Result<Ideal<F>> {
    if images.len() != source.nvars() {
        return Err(Error::structural(format!(
            "{} images for {} source variables",
            images.len(),
            source.nvars()
        )));
    }
    if source.spec().field() != target.spec().field() {
        return Err(Error::structural("source and target fields differ"));
    }
    if let Some(j) = target_ideal {
        target.check_same(j.ring())?;
    }
    // scale λ = num/den
    let mut scale: Option<(i64, i64)> = None;
    for (k, img) in images.iter().enumerate() {
        if img.is_zero() {
            continue;
        }
        if !img.is_homogeneous() {
            return Err(Error::domain(format!("image {} is not homogeneous", k + 1)));
        }
        let d = img.degree().unwrap();
        if d <= 0 {
            return Err(Error::domain(format!("image {} has nonpositive degree", k + 1)));
        }
        let w = source.weights()[k] as i64;
        let g = d.gcd(&w);
        let r = (d / g, w / g);
        match scale {
            None => scale = Some(r),
            Some(s) if s != r => {
                return Err(Error::domain(format!(
                    "image {} breaks degree proportionality with the earlier images",
                    k + 1
                )))
            }
            _ => {}
        }
    }
    let (num, den) = scale.unwrap_or((1, 1));

    let m = target.nvars();
    let n = source.nvars();
    let mut names: Vec<String> = (0..m).map(|i| format!("t{i}")).collect();
    names.extend((0..n).map(|i| format!("s{i}")));
    let mut weights: Vec<u32> = target.weights().iter().map(|&w| w * den as u32).collect();
    weights.extend(source.weights().iter().map(|&w| w * num as u32));
    let spec = GradedRingSpec::new(names, weights.clone(), target.spec().field())?;
    let order = MonomialOrder::block(&weights, vec![0..m, m..m + n]);
    let joint = PolyRing::with_order(spec, target.field().clone(), order)?;

    let embed: Vec<Poly<F>> = (0..m).map(|i| joint.var(i)).collect();
    let mut gens = Vec::new();
    for (k, img) in images.iter().enumerate() {
        let e = target.map_to(img, &joint, &embed)?;
        gens.push(joint.sub(&joint.var(m + k), &e));
    }
    if let Some(j) = target_ideal {
        for g in j.gens() {
            gens.push(target.map_to(g, &joint, &embed)?);
        }
    }
    let elim = Ideal::new(&joint, gens)?;
    let mut kernel = Vec::new();
    for g in elim.groebner_basis()? {
        let lead = g.leading_monomial().expect("nonzero");
        if lead.exps()[..m].iter().any(|&e| e > 0) {
            continue;
        }
        let terms = g
            .terms()
            .iter()
            .map(|(mon, c)| (Monomial::new(&mon.exps()[m..], source.weights()), c.clone()));
        kernel.push(source.from_terms(terms));
    }
    let k = Ideal::new(source, kernel)?;
    Ideal::new(source, k.minimal_generators()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_polynomial, FieldSpec, Rationals};

    fn qring(vars: &[&str]) -> PolyRing<Rationals> {
        PolyRing::new(GradedRingSpec::standard(vars, FieldSpec::Rationals).unwrap(), Rationals).unwrap()
    }

    fn images(r: &PolyRing<Rationals>, imgs: &[&str]) -> Vec<Poly<Rationals>> {
        imgs.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()
    }

    #[test]
    fn twisted_cubic() {
        let a = qring(&["x", "y", "z", "w"]);
        let b = qring(&["s", "t"]);
        let k = kernel_of_ring_map(&a, &b, &images(&b, &["s^3", "s^2*t", "s*t^2", "t^3"]), None).unwrap();
        let minors = Ideal::parse(&a, &["x*z - y^2", "x*w - y*z", "y*w - z^2"]).unwrap();
        assert!(k.same_as(&minors).unwrap());
        assert_eq!(k.gens().len(), 3);
    }

    #[test]
    fn injective_map_has_zero_kernel() {
        let a = qring(&["x"]);
        let b = qring(&["s"]);
        let k = kernel_of_ring_map(&a, &b, &images(&b, &["s"]), None).unwrap();
        assert!(k.is_zero());
    }

    #[test]
    fn pinched_quartic_relations() {
        let a = qring(&["x", "y", "z", "w"]);
        let b = qring(&["s", "t"]);
        let k = kernel_of_ring_map(&a, &b, &images(&b, &["s^4", "s^3*t", "s*t^3", "t^4"]), None).unwrap();
        for rel in ["x*w - y*z", "y^3 - x^2*z"] {
            assert!(k.contains(&parse_polynomial(&a, rel).unwrap()).unwrap(), "{rel}");
        }
        assert!(k.normal_form(&parse_polynomial(&a, "y^3 - x^2*z").unwrap()).unwrap().is_zero());
        assert_eq!(k.krull_dim().unwrap(), 2);
    }

    #[test]
    fn inhomogeneous_image_rejected() {
        let a = qring(&["x"]);
        let b = qring(&["s", "t"]);
        assert!(matches!(
            kernel_of_ring_map(&a, &b, &images(&b, &["s + t^2"]), None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn segre_over_a_quotient() {
        // E x P^1 with E = V(x^3 + y^3 + z^3): six coordinates, not CM
        let a = qring(&["u0", "u1", "u2", "u3", "u4", "u5"]);
        let b = qring(&["x", "y", "z", "a", "b"]);
        let e = Ideal::parse(&b, &["x^3 + y^3 + z^3"]).unwrap();
        let imgs = images(&b, &["x*a", "x*b", "y*a", "y*b", "z*a", "z*b"]);
        let k = kernel_of_ring_map(&a, &b, &imgs, Some(&e)).unwrap();
        assert_eq!(k.krull_dim().unwrap(), 3);
        assert!(k.contains(&parse_polynomial(&a, "u0*u3 - u1*u2").unwrap()).unwrap());
    }
}
