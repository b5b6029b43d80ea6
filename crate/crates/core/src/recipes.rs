//! The ten explicit constructions: small integer and field parameters in, a
//! self-orthogonal (or self-dual) TGRS instance out.
//!
//! Coefficients `a`, `b`, `c` and the list `coeffs` (a_1, a_2, ...) live in the
//! coefficient field GF(p^t). Twist entries (`eta`, `eta11`, ...) live in the
//! code field. Every element accepts the forms of [`crate::json`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::{Bounds, CodeReport};
use crate::criteria::{check_so, is_mds};
use crate::error::{Error, Result};
use crate::gf::{split_degree, Elem, Embedding, Field, Poly};
use crate::json::{elem_from_json, elems_to_json, FieldSpec};
use crate::tgrs::{EvalData, TgrsInstance, TwistMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecipeId {
    Block1,
    Block2,
    Block3,
    Line1,
    Line2,
    Block4,
    Block5,
    Block6,
    Line3,
    Line4,
}

impl RecipeId {
    pub const ALL: [RecipeId; 10] = [
        RecipeId::Block1,
        RecipeId::Block2,
        RecipeId::Block3,
        RecipeId::Line1,
        RecipeId::Line2,
        RecipeId::Block4,
        RecipeId::Block5,
        RecipeId::Block6,
        RecipeId::Line3,
        RecipeId::Line4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecipeId::Block1 => "block1",
            RecipeId::Block2 => "block2",
            RecipeId::Block3 => "block3",
            RecipeId::Line1 => "line1",
            RecipeId::Line2 => "line2",
            RecipeId::Block4 => "block4",
            RecipeId::Block5 => "block5",
            RecipeId::Block6 => "block6",
            RecipeId::Line3 => "line3",
            RecipeId::Line4 => "line4",
        }
    }

    /// Whether the code lives over the quadratic extension of the splitting field.
    pub fn uses_quadratic_extension(self) -> bool {
        matches!(self, RecipeId::Block5 | RecipeId::Block6 | RecipeId::Line3 | RecipeId::Line4)
    }

    pub fn claims_self_dual(self) -> bool {
        matches!(self, RecipeId::Block3 | RecipeId::Line2 | RecipeId::Block6 | RecipeId::Line4)
    }
}

impl std::fmt::Display for RecipeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Recipe parameters. Unused fields are ignored by recipes that do not need them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    /// Degree of the code field (block1) or expected splitting-field degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    /// Presentation of the coefficient field GF(p^t).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Value>,
    /// a_1, a_2, ... in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Value>>,
    /// The single free twist entry of recipes that have one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta11: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta12: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta21: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta22: Option<Value>,
    /// Presentation of the splitting field; a registered generator must be x.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<FieldSpec>,
    /// Image of the coefficient field's x in the splitting field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_image: Option<Value>,
    /// Presentation of the quadratic extension carrying the code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<FieldSpec>,
    /// Image of the splitting field's x in the code field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_image: Option<Value>,
    /// Scan coefficient tuples instead of reading `a`, `b`, `c`, `coeffs`.
    #[serde(default)]
    pub search: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub id: RecipeId,
    #[serde(default)]
    pub params: Params,
}

impl Recipe {
    pub fn new(id: RecipeId, params: Params) -> Recipe {
        Recipe { id, params }
    }

    pub fn from_json(v: &Value) -> Result<Recipe> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("recipe: {e}")))
    }
}

/// Predicted parameters of a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub n: usize,
    pub k: usize,
    /// Guaranteed lower bound on the minimum distance.
    pub d_bound: usize,
    pub self_dual: bool,
}

/// Where the evaluation points came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub g: Option<String>,
    pub coefficient_field: Option<FieldSpec>,
    pub splitting_field: FieldSpec,
    pub roots: Value,
    pub code_field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_image: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub recipe: Recipe,
    pub instance: TgrsInstance,
    pub claim: Claim,
    pub provenance: Provenance,
}

fn violation(msg: impl Into<String>) -> Error {
    Error::ParamConstraintViolation(msg.into())
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| violation(format!("missing parameter {name}")))
}

fn elem(f: &Field, v: &Option<Value>, name: &str) -> Result<Elem> {
    match v {
        Some(x) => elem_from_json(f, x),
        None => Err(violation(format!("missing parameter {name}"))),
    }
}

fn elem_or(f: &Field, v: &Option<Value>, default: Elem) -> Result<Elem> {
    v.as_ref().map_or(Ok(default), |x| elem_from_json(f, x))
}

fn nonzero(a: Elem, name: &str) -> Result<Elem> {
    if a.is_zero() {
        Err(violation(format!("{name} must be nonzero")))
    } else {
        Ok(a)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_usize(b: u32, e: u32) -> usize {
    (b as usize).pow(e)
}

/// Splitting field, embeddings and points for a coefficient choice.
struct Split {
    g: Poly,
    split: Field,
    base_emb: Embedding,
    code: Field,
    to_code: Option<Embedding>,
    /// Roots in the splitting field, sorted by encoding.
    roots: Vec<Elem>,
}

impl Split {
    fn lift(&self, a: Elem) -> Elem {
        self.to_code.as_ref().map_or(a, |e| e.map(a))
    }

    /// Coefficient-field element carried into the code field.
    fn lift_base(&self, a: Elem) -> Elem {
        self.lift(self.base_emb.map(a))
    }
}

fn base_field(rec: &Params, default_p: Option<u32>) -> Result<Field> {
    match &rec.base {
        Some(spec) => {
            if rec.p.is_some_and(|p| p != spec.p) || rec.t.is_some_and(|t| t != spec.h) {
                return Err(violation("base field disagrees with p or t"));
            }
            spec.build()
        }
        None => {
            let p = rec.p.or(default_p).ok_or_else(|| violation("missing parameter p"))?;
            Field::new(p, rec.t.unwrap_or(1))
        }
    }
}

fn split_for(id: RecipeId, prm: &Params, base: &Field, g: Poly, s: u32, bounds: &Bounds) -> Result<Split> {
    if !g.is_squarefree()? {
        return Err(if id == RecipeId::Line4 { Error::RootsNotDistinct } else { Error::PolynomialNotSquarefree });
    }
    let h = base.h() * split_degree(&g)?;
    let p = base.p();
    if let Some(want) = prm.h {
        if want != h {
            return Err(violation(format!("splitting field has degree {h} over GF({p}), expected h = {want}")));
        }
    }
    check_degree(id, s, h)?;
    if id == RecipeId::Line3 {
        let q8 = (0..h).fold(1u32, |acc, _| acc * p % 8);
        if q8 != 1 && q8 != 3 {
            return Err(violation(format!("q = {p}^{h} must be 1 or 3 mod 8")));
        }
    }
    let code_h = if id.uses_quadratic_extension() { 2 * h } else { h };
    let size = (p as u64).checked_pow(code_h).unwrap_or(u64::MAX);
    if size > bounds.max_field {
        return Err(Error::SplittingFieldTooLarge(format!("GF({p}^{code_h}) exceeds {}", bounds.max_field)));
    }
    let split = match &prm.split {
        Some(spec) => {
            if spec.p != p || spec.h != h {
                return Err(violation(format!("splitting field must be GF({p}^{h})")));
            }
            spec.build()?
        }
        None => Field::new(p, h)?,
    };
    let base_emb = match &prm.base_image {
        Some(img) => Embedding::with_image(base, &split, elem_from_json(&split, img)?)?,
        None => Embedding::new(base, &split)?,
    };
    let roots = base_emb.map_poly(&g).roots(bounds.max_field)?;
    let (code, to_code) = if id.uses_quadratic_extension() {
        let code = match &prm.code {
            Some(spec) => {
                if spec.p != p || spec.h != code_h {
                    return Err(violation(format!("code field must be GF({p}^{code_h})")));
                }
                spec.build()?
            }
            None => Field::new(p, code_h)?,
        };
        let emb = match &prm.split_image {
            Some(img) => Embedding::with_image(&split, &code, elem_from_json(&code, img)?)?,
            None => Embedding::new(&split, &code)?,
        };
        (code, Some(emb))
    } else {
        (split.clone(), None)
    };
    Ok(Split { g, split, base_emb, code, to_code, roots })
}

/// (n, k, guaranteed distance) of a recipe for given p, s, r.
fn shape(id: RecipeId, p: u32, s: u32, r: u32) -> (usize, usize, usize) {
    let two_s = pow_usize(2, s);
    let rps = r as usize * pow_usize(p, s);
    match id {
        RecipeId::Block1 => (two_s, two_s / 2 - 1, two_s / 2),
        RecipeId::Block2 => (two_s + 1, two_s / 2, two_s / 2),
        RecipeId::Block3 => (two_s, two_s / 2, two_s / 2 - 1),
        RecipeId::Line1 => (two_s + 1, two_s / 2, 1),
        RecipeId::Line2 => (two_s, two_s / 2, 1),
        RecipeId::Block4 => (2 * rps, rps - 1, rps),
        RecipeId::Block5 => (rps, (rps - 1) / 2, (rps - 1) / 2),
        RecipeId::Block6 => (2 * rps, rps, rps - 1),
        RecipeId::Line3 => (rps, (rps - 1) / 2, 1),
        RecipeId::Line4 => (2 * rps, rps, 1),
    }
}

/// Number of free coefficients and which of them must be nonzero.
fn free_mask(id: RecipeId, n: usize) -> Vec<bool> {
    match id {
        RecipeId::Block2 => vec![false, true, true],
        RecipeId::Block3 | RecipeId::Block5 | RecipeId::Block6 => vec![true; 3],
        RecipeId::Block4 => vec![true; 2],
        RecipeId::Line1 => vec![true; n / 2 + 1],
        RecipeId::Line2 => vec![true; n / 2],
        RecipeId::Line3 => vec![true; (n - 1) / 2 + 1],
        RecipeId::Line4 => (1..=n).map(|i| i < n / 2 || i == n - 1).collect(),
        RecipeId::Block1 => Vec::new(),
    }
}

/// Ascending coefficients of g from the free coefficients, in the order
/// (a, b, c), (b, c), (a_1, ..., a_m, c) or (a_1, ..., a_n).
fn poly_coeffs(id: RecipeId, n: usize, f: &Field, free: &[Elem]) -> Vec<Elem> {
    let mut g = vec![Elem::ZERO; n + 1];
    g[n] = Elem::ONE;
    match id {
        RecipeId::Block2 | RecipeId::Block5 | RecipeId::Block6 => {
            g[n - 1] = free[0];
            g[n - 2] = f.add(g[n - 2], free[1]);
            g[0] = f.add(g[0], free[2]);
        }
        RecipeId::Block3 => {
            g[n - 1] = free[0];
            g[n - 2] = free[1];
            g[n - 3] = f.pow(free[0], 3);
            g[0] = f.add(g[0], free[2]);
        }
        RecipeId::Block4 => {
            g[n - 1] = free[0];
            g[0] = f.add(g[0], free[1]);
        }
        RecipeId::Line1 | RecipeId::Line2 | RecipeId::Line3 => {
            let (c, a) = free.split_last().expect("at least c");
            for (i, &ai) in a.iter().enumerate() {
                g[n - 1 - i] = ai;
            }
            g[0] = f.add(g[0], *c);
        }
        RecipeId::Line4 => {
            for (i, &ai) in free.iter().enumerate() {
                g[n - 1 - i] = ai;
            }
        }
        RecipeId::Block1 => unreachable!("block1 has no defining polynomial"),
    }
    g
}

fn free_from_params(id: RecipeId, prm: &Params, base: &Field, n: usize) -> Result<Vec<Elem>> {
    let list = |with_c: bool| -> Result<Vec<Elem>> {
        let cs = prm.coeffs.as_ref().ok_or_else(|| violation("missing parameter coeffs"))?;
        let mut v: Vec<Elem> = cs.iter().map(|x| elem_from_json(base, x)).collect::<Result<_>>()?;
        if with_c {
            v.push(elem(base, &prm.c, "c")?);
        }
        Ok(v)
    };
    let free = match id {
        RecipeId::Block2 | RecipeId::Block3 | RecipeId::Block5 | RecipeId::Block6 => vec![
            elem_or(base, &prm.a, Elem::ZERO)?,
            elem(base, &prm.b, "b")?,
            elem(base, &prm.c, "c")?,
        ],
        RecipeId::Block4 => vec![elem(base, &prm.b, "b")?, elem(base, &prm.c, "c")?],
        RecipeId::Line1 | RecipeId::Line2 | RecipeId::Line3 => list(true)?,
        RecipeId::Line4 => list(false)?,
        RecipeId::Block1 => Vec::new(),
    };
    let mask = free_mask(id, n);
    if free.len() != mask.len() {
        let (want, got) = if id == RecipeId::Line4 { (mask.len(), free.len()) } else { (mask.len() - 1, free.len() - 1) };
        return Err(violation(format!("expected {want} coefficients a_i, got {got}")));
    }
    let names = |i: usize| -> String {
        match id {
            RecipeId::Block2 | RecipeId::Block3 | RecipeId::Block5 | RecipeId::Block6 => ["a", "b", "c"][i].into(),
            RecipeId::Block4 => ["b", "c"][i].into(),
            RecipeId::Line4 => format!("a_{}", i + 1),
            _ if i + 1 == free.len() => "c".into(),
            _ => format!("a_{}", i + 1),
        }
    };
    for (i, (&x, &must)) in free.iter().zip(&mask).enumerate() {
        if must {
            nonzero(x, &names(i))?;
        }
    }
    Ok(free)
}

fn check_arith(id: RecipeId, p: u32, s: u32, r: u32) -> Result<()> {
    let odd = !matches!(id, RecipeId::Block1 | RecipeId::Block2 | RecipeId::Block3 | RecipeId::Line1 | RecipeId::Line2);
    if odd && p == 2 {
        return Err(violation(format!("{id} needs an odd characteristic")));
    }
    if !odd && p != 2 {
        return Err(violation(format!("{id} needs characteristic 2")));
    }
    if matches!(id, RecipeId::Block4 | RecipeId::Block5 | RecipeId::Line3) && gcd(r as u64, p as u64) != 1 {
        return Err(violation(format!("gcd(r, p) = gcd({r}, {p}) must be 1")));
    }
    if matches!(id, RecipeId::Block5 | RecipeId::Line3) && r % 2 == 0 {
        return Err(violation("r must be odd"));
    }
    if r == 0 || (odd && s == 0) {
        return Err(violation("r and s must be positive"));
    }
    let min_s = match id {
        RecipeId::Block1 => 3,
        RecipeId::Block2 | RecipeId::Block3 | RecipeId::Line1 | RecipeId::Line2 => 2,
        _ => 1,
    };
    if s < min_s {
        return Err(violation(format!("{id} needs s >= {min_s}")));
    }
    let (n, k, _) = shape(id, p, s, r);
    if k < 2 || k >= n {
        return Err(violation(format!("dimension k = {k} for n = {n} is outside 2 <= k < n")));
    }
    Ok(())
}

/// Theorem-specific relation between s and the splitting-field degree h.
fn check_degree(id: RecipeId, s: u32, h: u32) -> Result<()> {
    let strict = matches!(id, RecipeId::Block2 | RecipeId::Line1 | RecipeId::Line2 | RecipeId::Line3 | RecipeId::Line4);
    if (strict && s >= h) || s > h {
        let rel = if strict { "<" } else { "<=" };
        return Err(violation(format!("need s {rel} h, got s = {s}, h = {h}")));
    }
    Ok(())
}

fn sqrt_half(f: &Field, a: Elem) -> Elem {
    // a^(2^(h-1)), the square root in characteristic 2
    f.pow(a, 1u64 << (f.h() - 1))
}

fn eta_default(f: &Field, v: &Option<Value>, name: &str) -> Result<Elem> {
    nonzero(elem_or(f, v, Elem::ONE)?, name)
}

/// Builds everything but the twist-independent bookkeeping.
fn build_from_split(id: RecipeId, prm: &Params, sp: &Split, free: &[Elem], n: usize, k: usize) -> Result<(EvalData, TwistMatrix)> {
    let f = &sp.code;
    let fs = &sp.split;
    let alpha_split = &sp.roots;
    if alpha_split.len() != n {
        return Err(Error::RootsNotDistinct);
    }
    let alpha: Vec<Elem> = alpha_split.iter().map(|&a| sp.lift(a)).collect();
    let coef = |i: usize| sp.lift_base(free[i]);
    let deriv = sp.base_emb.map_poly(&sp.g).derivative();
    let u_inv: Vec<Elem> = alpha_split.iter().map(|&a| deriv.eval(a)).collect();
    let m = pow_usize(2, prm.s.unwrap_or(0)) as u64 / 2;
    let v: Vec<Elem> = match id {
        RecipeId::Block2 => {
            let bh = sqrt_half(f, coef(1));
            alpha
                .iter()
                .map(|&a| f.inv(f.add(f.pow(a, m), f.mul(bh, f.pow(a, m - 1)))))
                .collect::<Result<_>>()?
        }
        RecipeId::Block3 => {
            let ah = sqrt_half(f, coef(0));
            let ah3 = f.pow(ah, 3);
            alpha
                .iter()
                .map(|&a| f.inv(f.add(f.mul(ah, f.pow(a, m - 1)), f.mul(ah3, f.pow(a, m - 2)))))
                .collect::<Result<_>>()?
        }
        RecipeId::Line1 => {
            alpha
                .iter()
                .map(|&a| {
                    let mut acc = f.pow(a, m);
                    for j in 1..=(m / 2) as usize {
                        acc = f.add(acc, f.mul(sqrt_half(f, coef(2 * j - 1)), f.pow(a, m - j as u64)));
                    }
                    f.inv(acc)
                })
                .collect::<Result<_>>()?
        }
        RecipeId::Line2 => {
            alpha
                .iter()
                .map(|&a| {
                    let mut acc = Elem::ZERO;
                    for j in 1..=(m / 2) as usize {
                        acc = f.add(acc, f.mul(sqrt_half(f, coef(2 * j - 2)), f.pow(a, m - j as u64)));
                    }
                    f.inv(acc)
                })
                .collect::<Result<_>>()?
        }
        RecipeId::Block4 => {
            let rps = (n / 2) as i64;
            alpha.iter().map(|&a| f.powi(a, 1 - rps)).collect::<Result<_>>()?
        }
        _ => {
            // v_i is the canonical square root of g'(α_i)^{-1} in the code field
            u_inv
                .iter()
                .map(|&d| {
                    let u = fs.inv(d)?;
                    f.sqrt(sp.lift(u))
                })
                .collect::<Result<_>>()?
        }
    };
    let eval = EvalData::new(f, alpha, v)?;
    let two = f.from_int(2);
    let twist = match id {
        RecipeId::Block2 => {
            let eta2 = eta_default(f, &prm.eta, "eta")?;
            let eta1 = f.mul(eta2, f.add(sqrt_half(f, coef(1)), coef(0)));
            TwistMatrix::A1 { eta11: Elem::ZERO, eta12: Elem::ZERO, eta21: eta1, eta22: eta2 }
        }
        RecipeId::Block3 => {
            let eta1 = eta_default(f, &prm.eta, "eta")?;
            TwistMatrix::A1 { eta11: Elem::ZERO, eta12: eta1, eta21: Elem::ZERO, eta22: f.mul(coef(0), eta1) }
        }
        RecipeId::Line1 | RecipeId::Line2 => {
            let last = eta_default(f, &prm.eta, "eta")?;
            let r = n - k;
            // η_i = η_last a_{r−i} for i < r
            let mut eta: Vec<Elem> = (1..r).map(|i| f.mul(last, coef(r - i - 1))).collect();
            eta.push(last);
            TwistMatrix::A2 { eta }
        }
        RecipeId::Block4 => {
            let e12 = eta_default(f, &prm.eta12, "eta12")?;
            let e22 = eta_default(f, &prm.eta22, "eta22")?;
            let half_b = f.div(coef(0), two)?;
            TwistMatrix::A1 { eta11: f.mul(half_b, e12), eta12: e12, eta21: f.mul(half_b, e22), eta22: e22 }
        }
        RecipeId::Block5 => {
            let (a, b) = (coef(0), coef(1));
            let eta2 = f.div(two, b)?;
            TwistMatrix::A1 { eta11: Elem::ZERO, eta12: Elem::ZERO, eta21: f.mul(a, eta2), eta22: eta2 }
        }
        RecipeId::Block6 => {
            let (a, b) = (coef(0), coef(1));
            let disc = f.sub(f.mul(a, a), f.mul(two, b));
            let eta1 = f.div(two, f.mul(a, disc))?;
            TwistMatrix::A1 { eta11: Elem::ZERO, eta12: eta1, eta21: Elem::ZERO, eta22: f.neg(f.mul(a, eta1)) }
        }
        RecipeId::Line3 => {
            let last = eta_default(f, &prm.eta, "eta")?;
            let r = n - k;
            let x = f.mul(f.neg(two), last);
            let emb = sp.to_code.as_ref().expect("quadratic extension");
            match emb.preimage(last) {
                Some(l) => {
                    if !(fs.is_square(fs.neg(fs.from_int(2)))? && fs.is_square(l)?) {
                        return Err(violation("-2*eta must be a square in the splitting field"));
                    }
                }
                None => {
                    if !f.is_square(x)? {
                        return Err(violation("-2*eta must be a square in the code field"));
                    }
                }
            }
            let root = f.sqrt(x)?;
            // η_1 = η_last a_{(n−1)/2} + √(−2η_last); η_i = η_last a_{r−i} for 2 ≤ i < r
            let mut eta = vec![f.add(f.mul(last, coef(r - 2)), root)];
            eta.extend((2..r).map(|i| f.mul(last, coef(r - i - 1))));
            eta.push(last);
            TwistMatrix::A2 { eta }
        }
        RecipeId::Line4 => {
            let last = f.div(two, coef(n - 2))?;
            let r = n - k;
            let mut eta: Vec<Elem> = (1..r).map(|i| f.mul(last, coef(r - i - 1))).collect();
            eta.push(last);
            TwistMatrix::A2 { eta }
        }
        RecipeId::Block1 => unreachable!(),
    };
    Ok((eval, twist))
}

/// Largest number of coefficient tuples tried in search mode.
pub const MAX_SEARCH: usize = 20_000;

fn block1(rec: &Recipe) -> Result<Construction> {
    let prm = &rec.params;
    if prm.p.is_some_and(|p| p != 2) {
        return Err(violation("block1 needs characteristic 2"));
    }
    let s = need(prm.s, "s")?;
    check_arith(RecipeId::Block1, 2, s, 1)?;
    let spec = prm.code.as_ref().or(prm.split.as_ref());
    let h = match (prm.h, spec) {
        (Some(h), Some(sp)) if sp.h != h => return Err(violation("field presentation disagrees with h")),
        (Some(h), _) => h,
        (None, Some(sp)) => sp.h,
        (None, None) => return Err(violation("missing parameter h")),
    };
    if h % s != 0 {
        return Err(violation(format!("s = {s} must divide h = {h}")));
    }
    let f = match spec {
        Some(sp) if sp.p != 2 => return Err(violation("block1 needs characteristic 2")),
        Some(sp) => sp.build()?,
        None => Field::new(2, h)?,
    };
    let (n, k, d_bound) = shape(RecipeId::Block1, 2, s, 1);
    // GF(2^s) inside GF(2^h): 0 followed by the powers of g^((2^h-1)/(2^s-1))
    let gamma = f.pow(f.generator(), ((f.q() - 1) / ((1u32 << s) - 1)) as u64);
    let mut alpha = vec![Elem::ZERO];
    alpha.extend((0..n as u64 - 1).map(|e| f.pow(gamma, e)));
    let half = 1u64 << (h - 1);
    let v: Vec<Elem> = (0..n)
        .map(|i| {
            let prod = f.product((0..n).filter(|&j| j != i).map(|j| f.sub(alpha[i], alpha[j])));
            Ok(f.pow(f.inv(prod)?, half))
        })
        .collect::<Result<_>>()?;
    let e11 = elem_or(&f, &prm.eta11, Elem::ONE)?;
    let e12 = elem_or(&f, &prm.eta12, Elem::ONE)?;
    let e21 = elem_or(&f, &prm.eta21, Elem::ONE)?;
    let rhs = f.mul(e12, e21);
    let e22 = match &prm.eta22 {
        Some(x) => {
            let e22 = elem_from_json(&f, x)?;
            if f.mul(e11, e22) != rhs {
                return Err(violation("twist must satisfy eta11*eta22 = eta12*eta21"));
            }
            e22
        }
        None if !e11.is_zero() => f.div(rhs, e11)?,
        None if rhs.is_zero() => Elem::ONE,
        None => return Err(violation("eta11 = 0 forces eta12*eta21 = 0")),
    };
    let roots = elems_to_json(&f, &alpha);
    let eval = EvalData::new(&f, alpha, v)?;
    let twist = TwistMatrix::A1 { eta11: e11, eta12: e12, eta21: e21, eta22: e22 };
    let instance = TgrsInstance::new(eval, k, twist)?;
    let spec = FieldSpec::of(&f);
    Ok(Construction {
        recipe: rec.clone(),
        instance,
        claim: Claim { n, k, d_bound, self_dual: false },
        provenance: Provenance {
            g: None,
            coefficient_field: None,
            splitting_field: spec.clone(),
            roots,
            code_field: spec,
            split_image: None,
        },
    })
}

fn attempt(rec: &Recipe, base: &Field, free: &[Elem], s: u32, n: usize, k: usize, d_bound: usize, bounds: &Bounds) -> Result<Construction> {
    let (id, prm) = (rec.id, &rec.params);
    if id == RecipeId::Block6 {
        let two = base.from_int(2);
        if base.mul(two, free[1]) == base.mul(free[0], free[0]) {
            return Err(violation("b must differ from a^2/2"));
        }
    }
    let g = Poly::new(base, poly_coeffs(id, n, base, free));
    let sp = split_for(id, prm, base, g, s, bounds)?;
    let (eval, twist) = build_from_split(id, prm, &sp, free, n, k)?;
    let instance = TgrsInstance::new(eval, k, twist)?;
    let provenance = Provenance {
        g: Some(sp.g.to_string()),
        coefficient_field: Some(FieldSpec::of(base)),
        splitting_field: FieldSpec::of(&sp.split),
        roots: elems_to_json(&sp.split, &sp.roots),
        code_field: FieldSpec::of(&sp.code),
        split_image: sp.to_code.as_ref().map(|e| sp.code.format(e.image_of_generator())),
    };
    let mut recipe = rec.clone();
    if prm.search {
        fill_found(&mut recipe.params, id, base, free);
    }
    Ok(Construction {
        recipe,
        instance,
        claim: Claim { n, k, d_bound, self_dual: id.claims_self_dual() },
        provenance,
    })
}

/// Records the coefficients a search settled on, so the recipe replays.
fn fill_found(prm: &mut Params, id: RecipeId, base: &Field, free: &[Elem]) {
    let j = |a: Elem| crate::json::elem_to_json(base, a);
    prm.search = false;
    match id {
        RecipeId::Block2 | RecipeId::Block3 | RecipeId::Block5 | RecipeId::Block6 => {
            (prm.a, prm.b, prm.c) = (Some(j(free[0])), Some(j(free[1])), Some(j(free[2])));
        }
        RecipeId::Block4 => (prm.b, prm.c) = (Some(j(free[0])), Some(j(free[1]))),
        RecipeId::Line4 => prm.coeffs = Some(free.iter().map(|&a| j(a)).collect()),
        _ => {
            let (c, a) = free.split_last().expect("at least c");
            prm.coeffs = Some(a.iter().map(|&x| j(x)).collect());
            prm.c = Some(j(*c));
        }
    }
}

/// Failures that only rule out the current coefficient tuple.
fn skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::ParamConstraintViolation(_)
            | Error::PolynomialNotSquarefree
            | Error::RootsNotDistinct
            | Error::SplittingFieldTooLarge(_)
            | Error::NotASquare
    )
}

/// Builds the instance a recipe describes.
///
/// In search mode the free coefficients are scanned in lexicographic order of
/// their encodings and the first tuple meeting every constraint is used.
pub fn construct(rec: &Recipe, bounds: &Bounds) -> Result<Construction> {
    let (id, prm) = (rec.id, &rec.params);
    if id == RecipeId::Block1 {
        return block1(rec);
    }
    let p = prm.p.or(prm.base.as_ref().map(|b| b.p)).ok_or_else(|| violation("missing parameter p"))?;
    let s = need(prm.s, "s")?;
    let odd = p != 2;
    let r = prm.r.unwrap_or(1);
    if !odd && r != 1 {
        return Err(violation("r is only used in odd characteristic"));
    }
    check_arith(id, p, s, r)?;
    let (n, k, d_bound) = shape(id, p, s, r);
    let base = base_field(prm, Some(p))?;
    if !prm.search {
        let free = free_from_params(id, prm, &base, n)?;
        return attempt(rec, &base, &free, s, n, k, d_bound, bounds);
    }
    let mask = free_mask(id, n);
    let q = base.q();
    let mut idx: Vec<u32> = mask.iter().map(|&nz| nz as u32).collect();
    if idx.iter().any(|&i| i >= q) {
        return Err(violation("coefficient field too small"));
    }
    let mut last_err: Option<Error>;
    for _ in 0..MAX_SEARCH {
        let free: Vec<Elem> = idx.iter().map(|&i| Elem(i)).collect();
        match attempt(rec, &base, &free, s, n, k, d_bound, bounds) {
            Ok(c) => return Ok(c),
            Err(e) if skippable(&e) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        // odometer, last position fastest
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                let why = last_err.map_or(String::new(), |e| format!("; last rejection: {e}"));
                return Err(Error::SearchBoundExceeded(format!("no admissible {id} coefficients over GF({q}){why}")));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < q {
                break;
            }
            idx[pos] = mask[pos] as u32;
        }
    }
    Err(Error::SearchBoundExceeded(format!("{id}: {MAX_SEARCH} coefficient tuples tried")))
}

fn claim_err(msg: impl Into<String>) -> Error {
    Error::ClaimViolated(msg.into())
}

/// Analyses a construction and checks every claimed property.
pub fn verify_construction(c: &Construction, bounds: &Bounds) -> Result<CodeReport> {
    let inst = &c.instance;
    let report = inst.code()?.report(bounds)?;
    let cl = &c.claim;
    if report.n != cl.n || report.k != cl.k {
        return Err(claim_err(format!("expected [{}, {}], got [{}, {}]", cl.n, cl.k, report.n, report.k)));
    }
    if !report.self_orthogonal {
        return Err(claim_err("code is not self-orthogonal"));
    }
    if cl.self_dual && !report.self_dual {
        return Err(claim_err("code is not self-dual"));
    }
    let decision = check_so(inst)?;
    if !decision.verdict {
        return Err(claim_err(format!("criterion verdict is false ({})", decision.applicable_case.label())));
    }
    if report.d < cl.d_bound {
        return Err(claim_err(format!("distance {} is below the guaranteed {}", report.d, cl.d_bound)));
    }
    if is_mds(inst, bounds)? && report.d != cl.n - cl.k + 1 {
        return Err(claim_err(format!("witness says MDS but d = {}", report.d)));
    }
    Ok(report)
}

pub fn verify_recipe(rec: &Recipe, bounds: &Bounds) -> Result<(Construction, CodeReport)> {
    let c = construct(rec, bounds)?;
    let report = verify_construction(&c, bounds)?;
    Ok((c, report))
}
