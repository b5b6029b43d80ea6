use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use super::zp;
use crate::error::{Error, Result};

/// Largest field for which log/exp tables are built.
pub const HARD_FIELD_LIMIT: u64 = 1 << 22;

/// An element of some [`Field`], stored as the base-p integer
/// `c_0 + c_1 p + ... + c_{h-1} p^{h-1}` of its ascending coefficient vector.
///
/// `Elem` carries no reference to its field; use [`FieldElement`] when the
/// owner must travel with the value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    registered: bool,
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[i] = log(1 + g^i), NO_LOG when 1 + g^i = 0; empty in characteristic 2
    zech: Vec<u32>,
}

/// The finite field GF(p^h) = GF(p)[x] / (modulus).
///
/// Cheap to clone. Two fields compare equal when they share p, h and modulus.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.h == other.0.h && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.h, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.h == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.h)
        }
    }
}

fn digits(mut v: u32, p: u32, h: u32) -> Vec<u32> {
    (0..h)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Schoolbook product of two encoded elements modulo `modulus`.
fn mul_slow(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let h = modulus.len() - 1;
    let x = digits(a, p, h as u32);
    let y = digits(b, p, h as u32);
    let mut prod = vec![0u64; 2 * h];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p as u64;
        }
    }
    for top in (h..2 * h).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus[..h].iter().enumerate() {
            let t = c * m as u64 % p as u64;
            prod[top - h + i] = (prod[top - h + i] + p as u64 - t) % p as u64;
        }
    }
    let low: Vec<u32> = prod[..h].iter().map(|&c| c as u32).collect();
    undigits(&low, p)
}

fn pow_slow(a: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut acc = 1;
    let mut base = a;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_slow(acc, base, p, modulus);
        }
        base = mul_slow(base, base, p, modulus);
        e >>= 1;
    }
    acc
}

fn is_primitive(g: u32, p: u32, modulus: &[u32], q: u64) -> bool {
    if g == 0 {
        return false;
    }
    if q == 2 {
        return g == 1;
    }
    zp::prime_factors(q - 1)
        .into_iter()
        .all(|r| pow_slow(g, (q - 1) / r, p, modulus) != 1)
}

impl Field {
    /// Builds GF(p^h). Without a modulus the default irreducible is used; a
    /// supplied `generator` (coefficient vector) is checked for primitivity and
    /// registered, which switches element printing to power notation.
    pub fn create(p: u32, h: u32, modulus: Option<&[u32]>, generator: Option<&[u32]>) -> Result<Field> {
        if !zp::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if q > HARD_FIELD_LIMIT {
            return Err(Error::FieldTooLarge { size: q, bound: HARD_FIELD_LIMIT });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != h as usize + 1 {
                    return Err(Error::InvalidModulus(format!("expected degree {h}, got {} coefficients", m.len())));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must lie in 0..{p}")));
                }
                if m[h as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !zp::is_irreducible(m, p) {
                    return Err(Error::NotIrreducible { p });
                }
                m.to_vec()
            }
            None => zp::default_modulus(p, h),
        };
        let (generator, registered) = match generator {
            Some(g) => {
                if g.len() > h as usize || g.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus("generator is not an element of the field".into()));
                }
                let g = undigits(g, p);
                if !is_primitive(g, p, &modulus, q) {
                    return Err(Error::InvalidModulus("designated generator is not primitive".into()));
                }
                (g, true)
            }
            None => {
                // prefer x itself, then scan in encoding order
                let x = if h > 1 { p } else { 2 % p };
                let g = std::iter::once(x)
                    .chain(1..q as u32)
                    .find(|&g| is_primitive(g, p, &modulus, q))
                    .expect("the multiplicative group is cyclic");
                (g, false)
            }
        };

        let q = q as u32;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            exp[i + n] = cur;
            log[cur as usize] = i as u32;
            cur = mul_slow(cur, generator, p, &modulus);
        }
        debug_assert_eq!(cur, 1);
        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..n)
                .map(|i| {
                    let v = exp[i];
                    let lo = v % p;
                    let w = v - lo + (lo + 1) % p;
                    log[w as usize]
                })
                .collect()
        };
        Ok(Field(Arc::new(Inner {
            p,
            h,
            q,
            modulus,
            generator: Elem(generator),
            registered,
            exp,
            log,
            zech,
        })))
    }

    /// GF(p^h) with the default modulus. Built fields are shared process-wide.
    pub fn new(p: u32, h: u32) -> Result<Field> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache").get(&(p, h)) {
            return Ok(f.clone());
        }
        let f = Field::create(p, h, None, None)?;
        cache.lock().expect("field cache").insert((p, h), f.clone());
        Ok(f)
    }

    /// GF(p^h) whose generator x (a root of `modulus`) is registered as the
    /// primitive element; `modulus` must therefore be primitive.
    pub fn with_primitive_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        let h = modulus.len().saturating_sub(1) as u32;
        if h == 1 {
            // x = -c0 for a linear modulus
            let root = (p - modulus[0] % p) % p;
            return Field::create(p, 1, Some(modulus), Some(&[root]));
        }
        Field::create(p, h, Some(modulus), Some(&[0, 1]))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn h(&self) -> u32 {
        self.0.h
    }

    /// Number of elements.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Primitive element used for the log tables.
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    /// Whether the generator was supplied by the caller.
    pub fn has_registered_generator(&self) -> bool {
        self.0.registered
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.0.h as usize && c[self.0.h as usize..].iter().any(|&d| d != 0) {
            return Err(Error::Parse(format!("coefficient vector longer than {}", self.0.h)));
        }
        if let Some(&d) = c.iter().find(|&&d| d >= self.0.p) {
            return Err(Error::Parse(format!("coefficient {d} out of range for p = {}", self.0.p)));
        }
        let len = c.len().min(self.0.h as usize);
        Ok(Elem(undigits(&c[..len], self.0.p)))
    }

    /// Ascending coefficient vector of length h.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.h)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.0.q))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.0.q - 1;
        let la = self.0.log[a.0 as usize];
        let lb = self.0.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        match self.0.zech[d as usize] {
            NO_LOG => Elem::ZERO,
            z => Elem(self.0.exp[(la + z) as usize]),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.p == 2 || a.0 == 0 {
            return a;
        }
        let half = (self.0.q - 1) / 2;
        Elem(self.0.exp[(self.0.log[a.0 as usize] + half) as usize])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.0.exp[(self.0.log[a.0 as usize] + self.0.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Elem(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Elem(self.0.exp[(l * (e % n) % n) as usize])
    }

    /// a^e for a signed exponent; negative powers of zero are an error.
    pub fn powi(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    /// Sum of a slice.
    pub fn sum(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Product of a slice.
    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// Exponent e with generator^e = a.
    pub fn dlog(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.0.log[a.0 as usize])
        }
    }

    /// generator^e.
    pub fn exp_of(&self, e: u64) -> Elem {
        Elem(self.0.exp[(e % (self.0.q as u64 - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Option<u64> {
        let l = self.dlog(a)? as u64;
        let n = (self.0.q - 1) as u64;
        Some(n / gcd(l, n))
    }

    /// Reference multiplication by schoolbook polynomial arithmetic; used as a
    /// test oracle for the table-driven [`Field::mul`].
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        Elem(mul_slow(a.0, b.0, self.0.p, &self.0.modulus))
    }

    /// Reference addition on coefficient vectors.
    pub fn add_reference(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let s: Vec<u32> = x.iter().zip(&y).map(|(&u, &v)| (u + v) % p).collect();
        Elem(undigits(&s, p))
    }

    /// Quadratic residue test a^((q-1)/2) = 1.
    pub fn is_square(&self, a: Elem) -> Result<bool> {
        if self.0.p == 2 {
            return Err(Error::CharTwo);
        }
        if a.0 == 0 {
            return Ok(true);
        }
        Ok(self.pow(a, ((self.0.q - 1) / 2) as u64) == Elem::ONE)
    }

    /// Canonical square root. In characteristic 2 this is a^(2^(h-1)); in odd
    /// characteristic Tonelli-Shanks, returning whichever of r, -r has the
    /// lexicographically smaller ascending coefficient vector.
    pub fn sqrt(&self, a: Elem) -> Result<Elem> {
        if self.0.p == 2 {
            return Ok(self.pow(a, 1u64 << (self.0.h - 1)));
        }
        if a.0 == 0 {
            return Ok(a);
        }
        if !self.is_square(a)? {
            return Err(Error::NotASquare);
        }
        let r = self.tonelli_shanks(a);
        let s = self.neg(r);
        Ok(if self.coeffs(s) < self.coeffs(r) { s } else { r })
    }

    fn tonelli_shanks(&self, a: Elem) -> Elem {
        let mut q1 = (self.0.q - 1) as u64;
        let mut s = 0u32;
        while q1 % 2 == 0 {
            q1 /= 2;
            s += 1;
        }
        // a primitive element is never a square
        let z = self.0.generator;
        let mut m = s;
        let mut c = self.pow(z, q1);
        let mut t = self.pow(a, q1);
        let mut r = self.pow(a, q1.div_ceil(2));
        while t != Elem::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Elem::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }

    /// Human-readable element: power notation when a generator is registered,
    /// coefficient vector otherwise (a bare integer for prime fields).
    pub fn format(&self, a: Elem) -> String {
        if self.0.registered {
            match self.dlog(a) {
                None => "0".into(),
                Some(0) => "1".into(),
                Some(e) => format!("b^{e}"),
            }
        } else if self.0.h == 1 {
            a.0.to_string()
        } else {
            let c = self.coeffs(a);
            let parts: Vec<String> = c.iter().map(|d| d.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value: a }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element bundled with its owning field; operations check that both
/// operands share the same field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<FieldElement> {
        if !field.contains(value) {
            return Err(Error::Parse(format!("{} is not an element of {field}", value.0)));
        }
        Ok(field.element(value))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.field.element(self.field.div(self.value, other.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(self.value, e))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }

    pub fn sqrt(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.sqrt(self.value)?))
    }

    pub fn is_square(&self) -> Result<bool> {
        self.field.is_square(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}
