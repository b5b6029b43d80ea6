//! Decision procedures: self-orthogonality of 𝒞₁ and 𝒞₂, the λ-condition and
//! the MDS witness determinant.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::code::Bounds;
use crate::error::{Error, Result};
use crate::fla::Matrix;
use crate::gf::{Elem, Field, Poly};
use crate::tgrs::{EvalData, TgrsInstance, TwistMatrix};

/// One named sub-condition with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

/// Which theorem case was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SoCase {
    /// 𝒞₁, k ≤ (n−4)/2.
    BlockCase1,
    /// 𝒞₁, k = (n−3)/2.
    BlockCase2,
    /// 𝒞₁, k = (n−2)/2.
    BlockCase3,
    /// 𝒞₁, k = (n−1)/2.
    BlockCase4,
    /// 𝒞₁, k = n/2 (self-duality).
    BlockCase5,
    /// 𝒞₂, k ≤ (n−1)/2.
    LineCase1,
    /// 𝒞₂, k = n/2 (self-duality).
    LineCase2,
}

impl SoCase {
    pub fn label(self) -> &'static str {
        match self {
            SoCase::BlockCase1 => "block case 1 (k <= (n-4)/2)",
            SoCase::BlockCase2 => "block case 2 (k = (n-3)/2)",
            SoCase::BlockCase3 => "block case 3 (k = (n-2)/2)",
            SoCase::BlockCase4 => "block case 4 (k = (n-1)/2)",
            SoCase::BlockCase5 => "block case 5 (k = n/2)",
            SoCase::LineCase1 => "line case 1 (k <= (n-1)/2)",
            SoCase::LineCase2 => "line case 2 (k = n/2)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoDecision {
    pub applicable_case: SoCase,
    pub verdict: bool,
    pub conditions: Vec<Condition>,
    pub failed_conditions: Vec<Condition>,
}

impl SoDecision {
    fn from_conditions(case: SoCase, conditions: Vec<Condition>) -> SoDecision {
        let failed_conditions: Vec<Condition> = conditions.iter().filter(|c| !c.holds).cloned().collect();
        SoDecision { applicable_case: case, verdict: failed_conditions.is_empty(), conditions, failed_conditions }
    }
}

fn equation(f: &Field, name: impl Into<String>, lhs: Elem, rhs: Elem) -> Condition {
    Condition { name: name.into(), holds: lhs == rhs, lhs: f.format(lhs), rhs: f.format(rhs) }
}

/// λ with v_i² = λ u_i for every i, if such a constant exists.
pub fn lambda_condition(eval: &EvalData) -> Option<Elem> {
    let f = eval.field();
    let ratio = |i: usize| f.div(f.mul(eval.v()[i], eval.v()[i]), eval.u()[i]).expect("u is nonzero");
    let lambda = ratio(0);
    (1..eval.n()).all(|i| ratio(i) == lambda).then_some(lambda)
}

fn lambda_check(eval: &EvalData) -> Condition {
    let f = eval.field();
    let ratio = |i: usize| f.div(f.mul(eval.v()[i], eval.v()[i]), eval.u()[i]).expect("u is nonzero");
    let first = ratio(0);
    match (1..eval.n()).find(|&i| ratio(i) != first) {
        None => Condition {
            name: "λ-condition".into(),
            holds: true,
            lhs: format!("v_i^2/u_i = {}", f.format(first)),
            rhs: "constant".into(),
        },
        Some(i) => Condition {
            name: "λ-condition".into(),
            holds: false,
            lhs: format!("v_{}^2/u_{} = {}", i + 1, i + 1, f.format(ratio(i))),
            rhs: format!("v_1^2/u_1 = {}", f.format(first)),
        },
    }
}

/// Case dispatch for 𝒞₁.
pub fn block_case(n: usize, k: usize) -> Result<SoCase> {
    if 2 * k > n {
        return Err(Error::CaseNotCovered { n, k });
    }
    Ok(match n - 2 * k {
        0 => SoCase::BlockCase5,
        1 => SoCase::BlockCase4,
        2 => SoCase::BlockCase3,
        3 => SoCase::BlockCase2,
        _ => SoCase::BlockCase1,
    })
}

/// Case dispatch for 𝒞₂.
pub fn line_case(n: usize, k: usize) -> Result<SoCase> {
    if 2 * k > n {
        return Err(Error::CaseNotCovered { n, k });
    }
    Ok(if n == 2 * k { SoCase::LineCase2 } else { SoCase::LineCase1 })
}

/// Self-orthogonality (self-duality when n = 2k) of a 𝒞₁ instance, evaluating
/// the applicable case's conditions literally.
pub fn check_block_so(inst: &TgrsInstance) -> Result<SoDecision> {
    let TwistMatrix::A1 { eta11: e11, eta12: e12, eta21: e21, eta22: e22 } = *inst.twist() else {
        return Err(Error::ShapeMismatch);
    };
    let (n, k) = (inst.n(), inst.k());
    let case = block_case(n, k)?;
    let eval = inst.eval();
    let f = eval.field();
    let (s1, s2, s3) = (eval.sigma(1), eval.sigma(2), eval.sigma(3));
    let two = f.from_int(2);
    let mut conds = vec![lambda_check(eval)];
    let m = |a, b| f.mul(a, b);
    let (add, sub) = (|a, b| f.add(a, b), |a, b| f.sub(a, b));
    match case {
        SoCase::BlockCase1 => {}
        SoCase::BlockCase2 => {
            conds.push(equation(f, "η12 = 0", e12, Elem::ZERO));
            conds.push(equation(f, "η22 = 0", e22, Elem::ZERO));
        }
        SoCase::BlockCase3 => {
            for (i, (a, b)) in [(e11, e12), (e21, e22)].into_iter().enumerate() {
                let lhs = m(b, sub(m(b, s1), m(two, a)));
                conds.push(equation(f, format!("η{0}2(η{0}2σ1 − 2η{0}1) = 0", i + 1), lhs, Elem::ZERO));
            }
            conds.push(equation(f, "η12η22σ1 = η11η22 + η12η21", m(m(e12, e22), s1), add(m(e11, e22), m(e12, e21))));
        }
        SoCase::BlockCase4 | SoCase::BlockCase5 => {
            let s1sq_s2 = sub(m(s1, s1), s2);
            let h = [[f.neg(e22), f.neg(e12)], [f.neg(e21), f.neg(e11)]];
            let (g, a) = if case == SoCase::BlockCase4 {
                let g = [[e12, Elem::ZERO], [e22, Elem::ZERO]];
                let a = [
                    [sub(m(e12, s1sq_s2), m(e11, s1)), sub(e11, m(e12, s1))],
                    [sub(add(Elem::ONE, m(e22, s1sq_s2)), m(e21, s1)), sub(e21, m(e22, s1))],
                ];
                (g, a)
            } else {
                // 2σ1σ2 − σ1³ − σ3
                let cubic = sub(sub(m(two, m(s1, s2)), m(s1, m(s1, s1))), s3);
                let g = [[sub(e11, m(e12, s1)), e12], [sub(e21, m(e22, s1)), e22]];
                let a = [
                    [add(add(Elem::ONE, m(e11, s1sq_s2)), m(e12, cubic)), sub(m(e12, s1sq_s2), m(e11, s1))],
                    [add(add(f.neg(s1), m(e21, s1sq_s2)), m(e22, cubic)), sub(add(Elem::ONE, m(e22, s1sq_s2)), m(e21, s1))],
                ];
                (g, a)
            };
            let tag = if case == SoCase::BlockCase4 { "G1' = A' H1'" } else { "G1'' = A'' H1'" };
            for r in 0..2 {
                for c in 0..2 {
                    let prod = add(m(a[r][0], h[0][c]), m(a[r][1], h[1][c]));
                    conds.push(equation(f, format!("{tag} entry ({},{})", r + 1, c + 1), g[r][c], prod));
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(SoDecision::from_conditions(case, conds))
}

/// Self-orthogonality (self-duality when n = 2k) of a 𝒞₂ instance.
pub fn check_line_so(inst: &TgrsInstance) -> Result<SoDecision> {
    let TwistMatrix::A2 { eta } = inst.twist() else {
        return Err(Error::ShapeMismatch);
    };
    let (n, k) = (inst.n(), inst.k());
    let case = line_case(n, k)?;
    let eval = inst.eval();
    let f = eval.field();
    let r = n - k;
    // 1-based accessors
    let et = |i: usize| eta[i - 1];
    let b = |i: usize| inst.b()[i - 1];
    let s = |i: usize| eval.sigma(i);
    let last = et(r);
    let mut conds = vec![lambda_check(eval)];
    for i in 1..k {
        conds.push(equation(f, format!("η{} = η{}σ{}", r - i, r, i), et(r - i), f.mul(last, s(i))));
    }
    let mut lhs = f.mul(last, s(n - 1));
    if case == SoCase::LineCase1 {
        for i in 1..=n - 2 * k {
            let coef = f.sub(et(i), f.mul(last, s(r - i)));
            lhs = f.add(lhs, f.mul(coef, b(k + i - 1)));
        }
        conds.push(equation(f, "η_{n-k}σ_{n-1} + Σ (η_i − η_{n-k}σ_{n-k-i}) b_{k+i-1} = 2", lhs, f.from_int(2)));
    } else {
        conds.push(equation(f, "η_kσ_{n-1} = 2", lhs, f.from_int(2)));
    }
    Ok(SoDecision::from_conditions(case, conds))
}

/// Criterion verdict for either shape.
pub fn check_so(inst: &TgrsInstance) -> Result<SoDecision> {
    match inst.twist() {
        TwistMatrix::A1 { .. } => check_block_so(inst),
        TwistMatrix::A2 { .. } => check_line_so(inst),
        TwistMatrix::General(_) => Err(Error::ShapeMismatch),
    }
}

/// Whether the criterion verdict matches the direct test G·Gᵀ = 0.
pub fn so_oracle_agree(inst: &TgrsInstance) -> Result<bool> {
    let verdict = check_so(inst)?.verdict;
    let g = inst.generator();
    let direct = g.matmul(&g.transpose())?.is_zero();
    Ok(verdict == direct)
}

fn check_subset(n: usize, k: usize, subset: &[usize]) -> Result<()> {
    if subset.len() != k {
        return Err(Error::BadSubset(format!("expected {k} indices, got {}", subset.len())));
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= n) {
        return Err(Error::BadSubset(format!("index {i} out of range 0..{n}")));
    }
    if subset.iter().duplicates().next().is_some() {
        return Err(Error::BadSubset("repeated index".into()));
    }
    Ok(())
}

/// M(n, k, α, A(η), I): det(δ_mt + g_mt) with g_mt = −γ F_mt(A_I) γᵀ, where
/// A_I is the companion matrix of G(x) = ∏_{i∈I}(x − α_i). `subset` holds
/// 0-based indices; `twist` is the k×(n−k) matrix A(η).
pub fn mds_witness(eval: &EvalData, twist: &Matrix, subset: &[usize]) -> Result<Elem> {
    let f = eval.field();
    let n = eval.n();
    let k = twist.rows();
    if k == 0 || k >= n || twist.cols() != n - k {
        return Err(Error::InvalidDimensions(format!("twist must be k×(n−k) with 1 ≤ k < n = {n}")));
    }
    check_subset(n, k, subset)?;
    let pts: Vec<Elem> = subset.iter().map(|&i| eval.alpha()[i]).collect();
    let gx = Poly::from_roots(f, &pts);
    // c_j is the coefficient of x^{k−j}
    let c: Vec<Elem> = (0..=k).map(|j| gx.coeff(k - j)).collect();
    let mut comp = Matrix::zeros(f, k, k);
    for i in 0..k - 1 {
        comp.set(i, i + 1, Elem::ONE);
    }
    for j in 0..k {
        comp.set(k - 1, j, f.neg(c[k - j]));
    }
    let d = |j: usize| c[k - j];
    let r = n - k;
    let mut mat = Matrix::identity(f, k);
    for m in 1..=k {
        for t in 1..=k {
            // a^l for l = t..r+t−1, then Horner in A_I
            let a_l = |l: usize| {
                f.sum((0..t).filter(|&j| l >= j + 1 && l - j <= r).map(|j| f.mul(twist.get(m - 1, l - j - 1), d(j))))
            };
            let mut acc = Matrix::zeros(f, k, k);
            for l in (t..r + t).rev() {
                acc = acc.matmul(&comp)?;
                let coef = a_l(l);
                for i in 0..k {
                    let v = f.add(acc.get(i, i), coef);
                    acc.set(i, i, v);
                }
            }
            let g = f.neg(acc.get(k - 1, k - 1));
            let cur = mat.get(m - 1, t - 1);
            mat.set(m - 1, t - 1, f.add(cur, g));
        }
    }
    mat.det()
}

fn subset_count_ok(n: usize, k: usize, bounds: &Bounds) -> Result<()> {
    let count = (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    if count > bounds.max_subsets as u128 {
        return Err(Error::BoundExceeded(format!("C({n},{k}) = {count} subsets exceeds {}", bounds.max_subsets)));
    }
    Ok(())
}

/// MDS test: the witness is nonzero on every k-subset.
pub fn is_mds(inst: &TgrsInstance, bounds: &Bounds) -> Result<bool> {
    let (n, k) = (inst.n(), inst.k());
    subset_count_ok(n, k, bounds)?;
    let a = inst.twist_matrix();
    for subset in (0..n).combinations(k) {
        if mds_witness(inst.eval(), &a, &subset)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// c_1, c_2, c_3 of G(x) = ∏_{i∈I}(x − α_i) for every k-subset I.
fn subset_coefficients(eval: &EvalData, k: usize, bounds: &Bounds) -> Result<Vec<[Elem; 3]>> {
    let n = eval.n();
    subset_count_ok(n, k, bounds)?;
    let f = eval.field();
    Ok((0..n)
        .combinations(k)
        .map(|subset| {
            let pts: Vec<Elem> = subset.iter().map(|&i| eval.alpha()[i]).collect();
            let g = Poly::from_roots(f, &pts);
            let c = |j: usize| if j <= k { g.coeff(k - j) } else { Elem::ZERO };
            [c(1), c(2), c(3)]
        })
        .collect())
}

/// Shortcut for the A1 row shape (η21 = η1, η22 = η2, other entries zero):
/// MDS iff η1c1 + η2(c2 − c1²) ≠ 1 for every k-subset.
pub fn mds_row_shape(eval: &EvalData, k: usize, eta1: Elem, eta2: Elem, bounds: &Bounds) -> Result<bool> {
    let f = eval.field();
    Ok(subset_coefficients(eval, k, bounds)?.into_iter().all(|[c1, c2, _]| {
        let lhs = f.add(f.mul(eta1, c1), f.mul(eta2, f.sub(c2, f.mul(c1, c1))));
        lhs != Elem::ONE
    }))
}

/// Shortcut for the A1 column shape (η12 = η1, η22 = η2, other entries zero):
/// MDS iff 1 + η1(c1c2 − c3) + η2(c1² − c2) ≠ 0 for every k-subset.
pub fn mds_column_shape(eval: &EvalData, k: usize, eta1: Elem, eta2: Elem, bounds: &Bounds) -> Result<bool> {
    let f = eval.field();
    Ok(subset_coefficients(eval, k, bounds)?.into_iter().all(|[c1, c2, c3]| {
        let t1 = f.mul(eta1, f.sub(f.mul(c1, c2), c3));
        let t2 = f.mul(eta2, f.sub(f.mul(c1, c1), c2));
        !f.add(Elem::ONE, f.add(t1, t2)).is_zero()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_is_total_and_unique() {
        assert_eq!(block_case(10, 3).unwrap(), SoCase::BlockCase1);
        assert_eq!(block_case(9, 3).unwrap(), SoCase::BlockCase2);
        assert_eq!(block_case(8, 3).unwrap(), SoCase::BlockCase3);
        assert_eq!(block_case(7, 3).unwrap(), SoCase::BlockCase4);
        assert_eq!(block_case(6, 3).unwrap(), SoCase::BlockCase5);
        assert_eq!(block_case(5, 3).unwrap_err(), Error::CaseNotCovered { n: 5, k: 3 });
        assert_eq!(line_case(7, 3).unwrap(), SoCase::LineCase1);
        assert_eq!(line_case(6, 3).unwrap(), SoCase::LineCase2);
        assert!(line_case(5, 3).is_err());
    }

    #[test]
    fn bad_subsets() {
        let f = Field::new(5, 1).unwrap();
        let e = EvalData::new(&f, (0..5).map(Elem).collect(), vec![Elem::ONE; 5]).unwrap();
        let a = Matrix::zeros(&f, 3, 2);
        assert!(matches!(mds_witness(&e, &a, &[0, 1]), Err(Error::BadSubset(_))));
        assert!(matches!(mds_witness(&e, &a, &[0, 1, 1]), Err(Error::BadSubset(_))));
        assert!(matches!(mds_witness(&e, &a, &[0, 1, 7]), Err(Error::BadSubset(_))));
        assert_eq!(mds_witness(&e, &a, &[0, 2, 4]).unwrap(), Elem::ONE);
    }
}
