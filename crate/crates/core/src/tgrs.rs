//! Twisted GRS codes: evaluation data (σ, u, Λ), the two twist shapes, their
//! generator matrices and parity-check matrices.

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::fla::Matrix;
use crate::gf::{Elem, Field, Poly};

/// Evaluation points, column multipliers and the symmetric-function data
/// derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalData {
    field: Field,
    alpha: Vec<Elem>,
    v: Vec<Elem>,
    /// σ_0..σ_n with ∏(x − α_i) = Σ σ_i x^{n−i}.
    sigma: Vec<Elem>,
    /// u_i = ∏_{j≠i} (α_i − α_j)^{-1}.
    u: Vec<Elem>,
    /// Λ_0..Λ_n, the inverse of the σ Toeplitz system.
    lambda: Vec<Elem>,
}

impl EvalData {
    pub fn new(field: &Field, alpha: Vec<Elem>, v: Vec<Elem>) -> Result<EvalData> {
        let n = alpha.len();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("{n} evaluation points but {} multipliers", v.len())));
        }
        if let Some(bad) = alpha.iter().chain(&v).find(|a| !field.contains(**a)) {
            return Err(Error::Parse(format!("{} is not an element of {field}", bad.0)));
        }
        for i in 0..n {
            for j in i + 1..n {
                if alpha[i] == alpha[j] {
                    return Err(Error::DuplicateAlpha(i, j));
                }
            }
        }
        if let Some(i) = v.iter().position(|x| x.is_zero()) {
            return Err(Error::ZeroV(i));
        }
        let f = field;
        let prod = Poly::from_roots(f, &alpha);
        let sigma: Vec<Elem> = (0..=n).map(|i| prod.coeff(n - i)).collect();
        let u = (0..n)
            .map(|i| {
                let d = f.product((0..n).filter(|&j| j != i).map(|j| f.sub(alpha[i], alpha[j])));
                f.inv(d).expect("points are distinct")
            })
            .collect();
        let mut lambda = vec![Elem::ONE];
        for t in 1..=n {
            let s = f.sum((1..=t).map(|j| f.mul(sigma[j], lambda[t - j])));
            lambda.push(f.neg(s));
        }
        Ok(EvalData { field: field.clone(), alpha, v, sigma, u, lambda })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Elem] {
        &self.alpha
    }

    pub fn v(&self) -> &[Elem] {
        &self.v
    }

    pub fn u(&self) -> &[Elem] {
        &self.u
    }

    pub fn sigmas(&self) -> &[Elem] {
        &self.sigma
    }

    pub fn lambdas(&self) -> &[Elem] {
        &self.lambda
    }

    /// σ_i, zero outside 0..=n.
    pub fn sigma(&self, i: usize) -> Elem {
        self.sigma.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn lambda(&self, t: usize) -> Elem {
        self.lambda[t]
    }

    /// (v_1 f(α_1), …, v_n f(α_n)).
    pub fn ev(&self, f: &Poly) -> Vec<Elem> {
        let fld = &self.field;
        self.alpha.iter().zip(&self.v).map(|(&a, &v)| fld.mul(v, f.eval(a))).collect()
    }

    /// Coefficient of x^{n−1} in x^{n−1+t} mod ∏(x − α_i).
    pub fn reduce_leading_coeff(&self, t: usize) -> Elem {
        let n = self.n();
        let f = &self.field;
        let prod = Poly::from_roots(f, &self.alpha);
        let r = Poly::monomial(f, Elem::ONE, n - 1 + t).rem(&prod).expect("nonzero modulus");
        r.coeff(n - 1)
    }

    /// Row (u_j/v_j · h(α_j))_j for a polynomial h.
    fn dual_row(&self, h: impl Fn(Elem) -> Elem) -> Vec<Elem> {
        let f = &self.field;
        (0..self.n())
            .map(|j| {
                let w = f.div(self.u[j], self.v[j]).expect("v is nonzero");
                f.mul(w, h(self.alpha[j]))
            })
            .collect()
    }
}

/// The two twist shapes carrying theorems, plus the general k×(n−k) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistMatrix {
    /// Twists on the last two basis monomials: x^{k−2} gains η11 x^k + η12 x^{k+1},
    /// x^{k−1} gains η21 x^k + η22 x^{k+1}.
    A1 { eta11: Elem, eta12: Elem, eta21: Elem, eta22: Elem },
    /// The constant basis polynomial gains Σ η_i x^{k−1+i}; `eta` holds η_1..η_{n−k}.
    A2 { eta: Vec<Elem> },
    /// Arbitrary k×(n−k) matrix: row m twists x^m by Σ_j a_{m,j} x^{k+j}.
    General(Matrix),
}

impl TwistMatrix {
    pub fn shape_name(&self) -> &'static str {
        match self {
            TwistMatrix::A1 { .. } => "A1",
            TwistMatrix::A2 { .. } => "A2",
            TwistMatrix::General(_) => "general",
        }
    }

    /// The k×(n−k) matrix A(η).
    pub fn to_matrix(&self, field: &Field, n: usize, k: usize) -> Matrix {
        match self {
            TwistMatrix::General(m) => m.clone(),
            TwistMatrix::A1 { eta11, eta12, eta21, eta22 } => {
                let mut m = Matrix::zeros(field, k, n - k);
                m.set(k - 2, 0, *eta11);
                m.set(k - 2, 1, *eta12);
                m.set(k - 1, 0, *eta21);
                m.set(k - 1, 1, *eta22);
                m
            }
            TwistMatrix::A2 { eta } => {
                let mut m = Matrix::zeros(field, k, n - k);
                for (j, &e) in eta.iter().enumerate() {
                    m.set(0, j, e);
                }
                m
            }
        }
    }
}

/// A 𝒞₁ (A1) or 𝒞₂ (A2) code, or a general twisted code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TgrsInstance {
    eval: EvalData,
    k: usize,
    twist: TwistMatrix,
    /// b_1..b_{n−k−1} for the A2 shape.
    b: Vec<Elem>,
}

impl TgrsInstance {
    pub fn new(eval: EvalData, k: usize, twist: TwistMatrix) -> Result<TgrsInstance> {
        let n = eval.n();
        if k < 2 || k >= n {
            return Err(Error::InvalidDimensions(format!("need 2 ≤ k < n, got n = {n}, k = {k}")));
        }
        let mut b = Vec::new();
        match &twist {
            TwistMatrix::A1 { .. } => {
                if n - k < 2 {
                    return Err(Error::InvalidDimensions("the A1 shape needs n − k ≥ 2".into()));
                }
            }
            TwistMatrix::A2 { eta } => {
                if eta.len() != n - k {
                    return Err(Error::InvalidDimensions(format!("A2 needs {} twist entries, got {}", n - k, eta.len())));
                }
                b = b_recursion(eval.field(), eval.sigmas(), eta)?;
            }
            TwistMatrix::General(m) => {
                if m.rows() != k || m.cols() != n - k {
                    return Err(Error::InvalidDimensions(format!("twist matrix must be {k}x{}", n - k)));
                }
            }
        }
        let all = [eval.alpha(), eval.v()].concat();
        let elems: Vec<Elem> = match &twist {
            TwistMatrix::A1 { eta11, eta12, eta21, eta22 } => vec![*eta11, *eta12, *eta21, *eta22],
            TwistMatrix::A2 { eta } => eta.clone(),
            TwistMatrix::General(m) => m.to_rows().concat(),
        };
        if let Some(bad) = all.iter().chain(&elems).find(|a| !eval.field().contains(**a)) {
            return Err(Error::Parse(format!("{} is not an element of {}", bad.0, eval.field())));
        }
        Ok(TgrsInstance { eval, k, twist, b })
    }

    pub fn field(&self) -> &Field {
        self.eval.field()
    }

    pub fn eval(&self) -> &EvalData {
        &self.eval
    }

    pub fn n(&self) -> usize {
        self.eval.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn twist(&self) -> &TwistMatrix {
        &self.twist
    }

    /// b_1..b_{n−k−1} (empty unless the shape is A2); `b()[i − 1]` is b_i.
    pub fn b(&self) -> &[Elem] {
        &self.b
    }

    pub fn twist_matrix(&self) -> Matrix {
        self.twist.to_matrix(self.field(), self.n(), self.k)
    }

    /// Basis polynomials x^m + Σ_j A[m][j] x^{k+j}, m = 0..k.
    pub fn basis_polys(&self) -> Vec<Poly> {
        let f = self.field();
        let a = self.twist_matrix();
        let (n, k) = (self.n(), self.k);
        (0..k)
            .map(|m| {
                let mut c = vec![Elem::ZERO; n];
                c[m] = Elem::ONE;
                for j in 0..n - k {
                    c[k + j] = a.get(m, j);
                }
                Poly::new(f, c)
            })
            .collect()
    }

    /// Generator matrix of any shape.
    pub fn generator(&self) -> Matrix {
        let rows: Vec<Vec<Elem>> = self.basis_polys().iter().map(|p| self.eval.ev(p)).collect();
        Matrix::from_rows(self.field(), self.n(), &rows).expect("rows have length n")
    }

    pub fn build_g1(&self) -> Result<Matrix> {
        match self.twist {
            TwistMatrix::A1 { .. } => self.checked_generator(),
            _ => Err(Error::ShapeMismatch),
        }
    }

    pub fn build_g2(&self) -> Result<Matrix> {
        match self.twist {
            TwistMatrix::A2 { .. } => self.checked_generator(),
            _ => Err(Error::ShapeMismatch),
        }
    }

    fn checked_generator(&self) -> Result<Matrix> {
        let g = self.generator();
        if g.rank() != self.k {
            return Err(Error::RankDeficient);
        }
        Ok(g)
    }

    pub fn code(&self) -> Result<LinearCode> {
        LinearCode::new(self.generator())
    }

    /// Parity-check matrix of 𝒞₁. The first n−k−2 rows are the GRS dual rows
    /// (u_j/v_j) α_j^i; the last two carry the twist corrections.
    pub fn build_h1(&self) -> Result<Matrix> {
        let TwistMatrix::A1 { eta11, eta12, eta21, eta22 } = self.twist else {
            return Err(Error::ShapeMismatch);
        };
        let e = &self.eval;
        let f = self.field();
        let r = self.n() - self.k;
        let s = |t: usize| e.sigma(t);
        // Σ_{t=0}^{4−i} σ_t a^{4−i−t}
        let tail = move |i: usize, a: Elem| f.sum((0..=4 - i).map(|t| f.mul(s(t), f.pow(a, (4 - i - t) as u64))));
        let mut rows = Vec::with_capacity(r);
        for i in 0..r - 2 {
            rows.push(e.dual_row(|a| f.pow(a, i as u64)));
        }
        rows.push(e.dual_row(|a| {
            let corr = f.add(f.mul(eta12, tail(1, a)), f.mul(eta22, tail(2, a)));
            f.mul(f.pow(a, (r - 2) as u64), f.sub(Elem::ONE, corr))
        }));
        rows.push(e.dual_row(|a| {
            let lin = f.add(f.mul(s(0), a), s(1));
            let corr = f.add(f.mul(eta11, tail(1, a)), f.mul(eta21, tail(2, a)));
            f.mul(f.pow(a, (r - 2) as u64), f.sub(lin, corr))
        }));
        Matrix::from_rows(f, self.n(), &rows)
    }

    /// Parity-check matrix of 𝒞₂ built from the b recursion.
    pub fn build_h2(&self) -> Result<Matrix> {
        let TwistMatrix::A2 { eta } = &self.twist else {
            return Err(Error::ShapeMismatch);
        };
        let e = &self.eval;
        let f = self.field();
        let n = self.n();
        let r = n - self.k;
        let last = eta[r - 1];
        let mut rows = Vec::with_capacity(r);
        rows.push(e.dual_row(|a| {
            let s = f.sum((0..n).map(|i| f.mul(e.sigma(n - 1 - i), f.pow(a, i as u64))));
            f.sub(Elem::ONE, f.mul(last, s))
        }));
        for i in 1..r {
            let bi = self.b[i - 1];
            rows.push(e.dual_row(|a| f.add(bi, f.pow(a, i as u64))));
        }
        Matrix::from_rows(f, n, &rows)
    }

    /// H₁ or H₂ according to the shape.
    pub fn parity_check(&self) -> Result<Matrix> {
        match self.twist {
            TwistMatrix::A1 { .. } => self.build_h1(),
            TwistMatrix::A2 { .. } => self.build_h2(),
            TwistMatrix::General(_) => Err(Error::ShapeMismatch),
        }
    }
}

/// b_1..b_{n−k−1} from σ and η = (η_1..η_{n−k}); `b[i − 1]` holds b_i.
pub fn b_recursion(field: &Field, sigma: &[Elem], eta: &[Elem]) -> Result<Vec<Elem>> {
    let f = field;
    let r = eta.len();
    let last = *eta.last().ok_or(Error::ZeroLeadingTwist)?;
    if last.is_zero() {
        return Err(Error::ZeroLeadingTwist);
    }
    let s = |i: usize| sigma.get(i).copied().unwrap_or(Elem::ZERO);
    let mut b: Vec<Elem> = Vec::with_capacity(r.saturating_sub(1));
    for i in 1..r {
        let ratio = f.div(eta[r - i - 1], last)?;
        let mut bi = f.sub(s(i), ratio);
        for j in 1..i {
            bi = f.sub(bi, f.mul(s(i - j), b[j - 1]));
        }
        b.push(bi);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elems(xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn sigma_lambda_small() {
        let f5 = Field::new(5, 1).unwrap();
        let e = EvalData::new(&f5, elems(&[1, 2]), elems(&[1, 1])).unwrap();
        assert_eq!(e.sigmas(), &elems(&[1, 2, 2])[..]);
        assert_eq!(e.lambdas(), &elems(&[1, 3, 2])[..]);
        assert_eq!(e.reduce_leading_coeff(0), Elem(1));
        assert_eq!(e.reduce_leading_coeff(1), Elem(3));
        let f3 = Field::new(3, 1).unwrap();
        let e = EvalData::new(&f3, elems(&[0, 1, 2]), elems(&[1, 1, 1])).unwrap();
        assert_eq!(e.u(), &elems(&[2, 2, 2])[..]);
    }

    #[test]
    fn whole_field_sigma_one_vanishes() {
        let f = Field::new(2, 3).unwrap();
        let e = EvalData::new(&f, f.elements().collect(), vec![Elem::ONE; 8]).unwrap();
        assert!(e.sigma(1).is_zero());
        assert_eq!(e.sigma(7), Elem::ONE);
    }

    #[test]
    fn eval_data_errors() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(EvalData::new(&f, elems(&[1, 2, 1]), elems(&[1, 1, 1])).unwrap_err(), Error::DuplicateAlpha(0, 2));
        assert_eq!(EvalData::new(&f, elems(&[1, 2, 3]), elems(&[1, 0, 1])).unwrap_err(), Error::ZeroV(1));
    }

    #[test]
    fn b_recursion_cases() {
        let f5 = Field::new(5, 1).unwrap();
        // n − k = 2, σ_1 = 3, η_1/η_2 = 1
        let b = b_recursion(&f5, &elems(&[1, 3]), &elems(&[2, 2])).unwrap();
        assert_eq!(b, elems(&[2]));
        assert_eq!(b_recursion(&f5, &elems(&[1, 3]), &elems(&[2, 0])).unwrap_err(), Error::ZeroLeadingTwist);
        // η_i = η_{n−k} σ_{n−k−i} makes every b_i vanish
        let sigma = elems(&[1, 4, 2, 3, 1]);
        let last = Elem(3);
        let eta: Vec<Elem> = (1..=4).map(|i| if i == 4 { last } else { f5.mul(last, sigma[4 - i]) }).collect();
        assert!(b_recursion(&f5, &sigma, &eta).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn zero_twist_is_grs() {
        let f = Field::new(3, 2).unwrap();
        let e = EvalData::new(&f, elems(&[0, 1, 2, 3, 4, 5, 6]), elems(&[1, 2, 3, 4, 5, 6, 7])).unwrap();
        let z = Elem::ZERO;
        let inst = TgrsInstance::new(e, 3, TwistMatrix::A1 { eta11: z, eta12: z, eta21: z, eta22: z }).unwrap();
        let g = inst.build_g1().unwrap();
        let h = inst.build_h1().unwrap();
        assert!(g.matmul(&h.transpose()).unwrap().is_zero());
        assert_eq!(inst.build_g2().unwrap_err(), Error::ShapeMismatch);
    }
}
