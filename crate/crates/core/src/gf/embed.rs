use super::{Elem, Field, Poly};
use crate::error::{Error, Result};

/// Field embedding GF(p^h) → GF(p^{mh}) determined by where the root x of the
/// subfield modulus is sent.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: Field,
    sup: Field,
    image: Elem,
    // image^i for i < h
    powers: Vec<Elem>,
}

fn check_degrees(sub: &Field, sup: &Field) -> Result<()> {
    if sub.p() != sup.p() || sup.h() % sub.h() != 0 {
        return Err(Error::NotASubfield { sub_p: sub.p(), sub_h: sub.h(), sup_p: sup.p(), sup_h: sup.h() });
    }
    Ok(())
}

/// Sub-modulus as a polynomial over the superfield (prime-field elements share
/// their encoding in every extension).
fn modulus_over(sub: &Field, sup: &Field) -> Poly {
    Poly::new(sup, sub.modulus().iter().map(|&c| Elem(c)).collect())
}

impl Embedding {
    /// Embedding sending x to the smallest (by encoding) root of the subfield
    /// modulus in `sup`.
    pub fn new(sub: &Field, sup: &Field) -> Result<Embedding> {
        let roots = Self::candidate_images(sub, sup)?;
        Self::with_image(sub, sup, roots[0])
    }

    /// Embedding with a prescribed image of x; the image must be a root of the
    /// subfield modulus.
    pub fn with_image(sub: &Field, sup: &Field, image: Elem) -> Result<Embedding> {
        check_degrees(sub, sup)?;
        if !sup.contains(image) || !modulus_over(sub, sup).eval(image).is_zero() {
            return Err(Error::InvalidModulus("image is not a root of the subfield modulus".into()));
        }
        let powers = (0..sub.h()).map(|i| sup.pow(image, i as u64)).collect();
        Ok(Embedding { sub: sub.clone(), sup: sup.clone(), image, powers })
    }

    /// Every embedding of `sub` into `sup`, ordered by image encoding.
    pub fn all(sub: &Field, sup: &Field) -> Result<Vec<Embedding>> {
        Self::candidate_images(sub, sup)?
            .into_iter()
            .map(|r| Self::with_image(sub, sup, r))
            .collect()
    }

    /// Roots of the subfield modulus in `sup`. They live in the unique subfield
    /// of order p^h, whose nonzero elements are the powers of g^((Q-1)/(q-1)).
    fn candidate_images(sub: &Field, sup: &Field) -> Result<Vec<Elem>> {
        check_degrees(sub, sup)?;
        let m = modulus_over(sub, sup);
        let step = (sup.q() as u64 - 1) / (sub.q() as u64 - 1);
        let mut roots: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..sub.q() as u64 - 1).map(|j| sup.exp_of(j * step)))
            .filter(|&a| m.eval(a).is_zero())
            .collect();
        roots.sort();
        debug_assert_eq!(roots.len(), sub.h() as usize);
        Ok(roots)
    }

    pub fn sub(&self) -> &Field {
        &self.sub
    }

    pub fn sup(&self) -> &Field {
        &self.sup
    }

    /// Image of the subfield's x.
    pub fn image_of_generator(&self) -> Elem {
        self.image
    }

    pub fn map(&self, a: Elem) -> Elem {
        let c = self.sub.coeffs(a);
        let f = &self.sup;
        c.iter()
            .zip(&self.powers)
            .fold(Elem::ZERO, |acc, (&d, &w)| f.add(acc, f.mul(Elem(d), w)))
    }

    pub fn map_poly(&self, g: &Poly) -> Poly {
        g.map_into(&self.sup, |c| self.map(c))
    }

    /// Inverse image by exhaustive search over the subfield.
    pub fn preimage(&self, b: Elem) -> Option<Elem> {
        self.sub.elements().find(|&a| self.map(a) == b)
    }
}

/// Result of [`splitting_field`].
#[derive(Clone, Debug)]
pub struct Splitting {
    pub field: Field,
    pub embedding: Embedding,
    /// All roots of g in `field`, sorted by encoding.
    pub roots: Vec<Elem>,
    /// Degree of the splitting field over the base field.
    pub degree: u32,
}

/// Optional presentation choices for the splitting field.
#[derive(Clone, Debug, Default)]
pub struct SplitOptions {
    /// Modulus of the extension GF(p^{t m}); must have the right degree.
    pub modulus: Option<Vec<u32>>,
    /// Register x as primitive element (the modulus must be primitive).
    pub register_x: bool,
    /// Image of the base field's x in the extension.
    pub base_image: Option<Elem>,
}

/// Largest extension degree tried by [`splitting_field`].
pub const MAX_SPLIT_DEGREE: u32 = 64;

/// Smallest extension of g's coefficient field over which the squarefree g
/// splits, found by testing x^(|F|^m) ≡ x (mod g) for m = 1, 2, ….
pub fn splitting_field(g: &Poly, opts: &SplitOptions, max_field: u64) -> Result<Splitting> {
    let base = g.field();
    let deg = g.degree().ok_or_else(|| Error::InvalidDimensions("zero polynomial".into()))?;
    if deg == 0 {
        return Err(Error::InvalidDimensions("constant polynomial has no roots".into()));
    }
    if !g.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    let m = split_degree(g)?;
    let h = base.h() * m;
    let size = (base.p() as u64).checked_pow(h).unwrap_or(u64::MAX);
    if size > max_field {
        return Err(Error::FieldTooLarge { size, bound: max_field });
    }
    let field = match (&opts.modulus, opts.register_x) {
        (Some(md), true) => Field::with_primitive_modulus(base.p(), md)?,
        (Some(md), false) => Field::create(base.p(), h, Some(md), None)?,
        (None, _) => Field::new(base.p(), h)?,
    };
    if field.h() != h {
        return Err(Error::InvalidModulus(format!("splitting field needs degree {h}, modulus has {}", field.h())));
    }
    let embedding = match opts.base_image {
        Some(img) => Embedding::with_image(base, &field, img)?,
        None => Embedding::new(base, &field)?,
    };
    let roots = embedding.map_poly(g).roots(max_field)?;
    debug_assert_eq!(roots.len(), deg);
    Ok(Splitting { field, embedding, roots, degree: m })
}

/// Smallest m with x^(|F|^m) ≡ x (mod g).
pub fn split_degree(g: &Poly) -> Result<u32> {
    let f = g.field();
    let x = Poly::x(f).rem(g)?;
    let mut r = x.clone();
    for m in 1..=MAX_SPLIT_DEGREE {
        r = r.powmod(f.q() as u64, g)?;
        if r == x {
            return Ok(m);
        }
    }
    Err(Error::SearchBoundExceeded(format!("no splitting field of degree ≤ {MAX_SPLIT_DEGREE}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_homomorphism() {
        let sub = Field::new(3, 2).unwrap();
        let sup = Field::new(3, 4).unwrap();
        for e in Embedding::all(&sub, &sup).unwrap() {
            assert_eq!(e.map(Elem::ONE), Elem::ONE);
            for a in sub.elements() {
                for b in sub.elements() {
                    assert_eq!(e.map(sub.add(a, b)), sup.add(e.map(a), e.map(b)));
                    assert_eq!(e.map(sub.mul(a, b)), sup.mul(e.map(a), e.map(b)));
                }
            }
        }
        assert_eq!(Embedding::all(&sub, &sup).unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_subfield() {
        let sub = Field::new(2, 3).unwrap();
        let sup = Field::new(2, 4).unwrap();
        assert!(matches!(Embedding::new(&sub, &sup), Err(Error::NotASubfield { .. })));
    }

    #[test]
    fn split_linear_factors_stay_in_base() {
        let f5 = Field::new(5, 1).unwrap();
        let g = Poly::from_roots(&f5, &[Elem(1), Elem(2)]);
        let s = splitting_field(&g, &SplitOptions::default(), 1 << 20).unwrap();
        assert_eq!(s.degree, 1);
        assert_eq!(s.roots.len(), 2);
    }

    #[test]
    fn split_rejects_repeated_roots() {
        let f5 = Field::new(5, 1).unwrap();
        let g = Poly::from_roots(&f5, &[Elem(1), Elem(1)]);
        assert_eq!(splitting_field(&g, &SplitOptions::default(), 1 << 20).unwrap_err(), Error::NotSquarefree);
    }

    #[test]
    fn split_irreducible_cubic() {
        let f2 = Field::new(2, 1).unwrap();
        let g = Poly::new(&f2, vec![Elem(1), Elem(1), Elem(0), Elem(1)]);
        let s = splitting_field(&g, &SplitOptions::default(), 1 << 20).unwrap();
        assert_eq!(s.field.q(), 8);
        assert_eq!(s.roots.len(), 3);
    }
}
