use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgrs_core::criteria::{block_case, check_so, is_mds, line_case, mds_witness};
use tgrs_core::gf::{split_degree, Embedding};
use tgrs_core::{Bounds, Elem, Error, EvalData, Field, LinearCode, Matrix, Poly, TgrsInstance, TwistMatrix};

const FIELDS: [(u32, u32); 10] = [(2, 1), (3, 1), (2, 3), (5, 1), (3, 2), (2, 4), (7, 1), (5, 2), (2, 5), (7, 2)];

fn field(i: usize) -> Field {
    let (p, h) = FIELDS[i % FIELDS.len()];
    Field::new(p, h).unwrap()
}

fn big_field(i: usize) -> Field {
    let (p, h) = FIELDS[2 + i % (FIELDS.len() - 2)];
    Field::new(p, h).unwrap()
}

fn matrix(f: &Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let rows: Vec<Vec<Elem>> = (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(0.3) { Elem::ZERO } else { f.random(rng) }).collect()).collect();
    Matrix::from_rows(f, c, &rows).unwrap()
}

fn points(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let mut all: Vec<Elem> = f.elements().collect();
    all.shuffle(rng);
    all.truncate(n);
    all
}

fn eval(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> EvalData {
    let v = (0..n).map(|_| f.random_nonzero(rng)).collect();
    EvalData::new(f, points(f, n, rng), v).unwrap()
}

fn sparse(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    if rng.gen_bool(0.4) {
        Elem::ZERO
    } else {
        f.random(rng)
    }
}

fn twist(f: &Field, n: usize, k: usize, rng: &mut ChaCha8Rng) -> TwistMatrix {
    if n - k >= 2 && rng.gen_bool(0.5) {
        TwistMatrix::A1 { eta11: sparse(f, rng), eta12: sparse(f, rng), eta21: sparse(f, rng), eta22: sparse(f, rng) }
    } else {
        let mut eta: Vec<Elem> = (0..n - k).map(|_| sparse(f, rng)).collect();
        eta[n - k - 1] = f.random_nonzero(rng);
        TwistMatrix::A2 { eta }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn lagrange(fi in 0usize..10, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_nonzero(&mut rng);
        prop_assert_eq!(f.pow(a, (f.q() - 1) as u64), Elem::ONE);
    }

    #[test]
    fn frobenius_additive(fi in 0usize..10, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (f.random(&mut rng), f.random(&mut rng));
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn sqrt_squares_back(fi in 0usize..10, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random(&mut rng);
        if let Ok(r) = f.sqrt(a) {
            prop_assert_eq!(f.mul(r, r), a);
        } else {
            prop_assert!(!f.is_square(a).unwrap());
        }
        if f.p() == 2 {
            prop_assert_eq!(f.sqrt(a).unwrap(), f.pow(a, 1 << (f.h() - 1)));
        }
    }

    #[test]
    fn roots_are_distinct_zeros(fi in 0usize..10, seed in any::<u64>(), deg in 1usize..7) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c: Vec<Elem> = (0..deg).map(|_| f.random(&mut rng)).collect();
        c.push(Elem::ONE);
        let g = Poly::new(&f, c);
        let roots = g.roots(1 << 20).unwrap();
        prop_assert!(roots.len() <= deg);
        prop_assert!(roots.iter().all(|&r| g.eval(r).is_zero()));
        prop_assert!(roots.iter().tuple_windows().all(|(a, b)| a != b));
    }

    #[test]
    fn splitting_degree_is_minimal(fi in 0usize..4, seed in any::<u64>(), deg in 2usize..6) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c: Vec<Elem> = (0..deg).map(|_| f.random(&mut rng)).collect();
        c.push(Elem::ONE);
        let g = Poly::new(&f, c);
        prop_assume!(g.is_squarefree().unwrap());
        let m = split_degree(&g).unwrap();
        prop_assume!((f.p() as u64).pow(f.h() * m) <= 1 << 20);
        let roots_over = |d: u32| {
            let big = Field::new(f.p(), f.h() * d).unwrap();
            let e = Embedding::new(&f, &big).unwrap();
            e.map_poly(&g).roots(1 << 20).unwrap().len()
        };
        prop_assert_eq!(roots_over(m), deg);
        for d in (1..m).filter(|d| m % d == 0) {
            prop_assert!(roots_over(d) < deg);
        }
    }

    #[test]
    fn rank_of_transpose(fi in 0usize..10, seed in any::<u64>(), r in 1usize..6, c in 1usize..8) {
        let f = field(fi);
        let m = matrix(&f, r, c, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let ker = m.kernel();
        prop_assert_eq!(ker.rows() + m.rank(), c);
        if ker.rows() > 0 {
            prop_assert!(m.matmul(&ker.transpose()).unwrap().is_zero());
        }
        let rr = m.rref();
        prop_assert_eq!(rr.matrix.rref().matrix, rr.matrix);
    }

    #[test]
    fn det_multiplicative(fi in 0usize..10, seed in any::<u64>(), n in 1usize..6) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (matrix(&f, n, n, &mut rng), matrix(&f, n, n, &mut rng));
        let ab = a.matmul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
    }

    #[test]
    fn distance_oracles_agree(fi in 0usize..6, seed in any::<u64>(), n in 2usize..9, k in 1usize..4) {
        let f = field(fi);
        prop_assume!(k < n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(c) = LinearCode::new(matrix(&f, k, n, &mut rng)) else { return Ok(()) };
        let b = Bounds::default();
        let d = c.min_distance(&b).unwrap();
        prop_assert_eq!(d, c.min_distance_enumerate(&b).unwrap());
        prop_assert!(d <= n - k + 1);
        let report = c.classify(&b).unwrap();
        prop_assert_eq!(c.dual().dual().classify(&b).unwrap(), report);
    }

    #[test]
    fn self_orthogonality_three_ways(fi in 0usize..10, seed in any::<u64>(), n in 4usize..9) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..=n / 2);
        let inst = TgrsInstance::new(eval(&f, n, &mut rng), k, twist(&f, n, k, &mut rng)).unwrap();
        let c = inst.code().unwrap();
        let dual = c.dual();
        let rows_in_dual = c.generator().to_rows().iter().all(|r| dual.contains(r));
        prop_assert_eq!(c.is_self_orthogonal(), c.hull_dim() == c.k());
        prop_assert_eq!(c.is_self_orthogonal(), rows_in_dual);
        if c.is_self_dual() {
            prop_assert!(c.is_self_orthogonal() && 2 * c.k() == c.n());
        }
    }

    #[test]
    fn parity_checks(fi in 0usize..10, seed in any::<u64>(), n in 4usize..11) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..n);
        let inst = TgrsInstance::new(eval(&f, n, &mut rng), k, twist(&f, n, k, &mut rng)).unwrap();
        let h = inst.parity_check().unwrap();
        prop_assert!(inst.generator().matmul(&h.transpose()).unwrap().is_zero());
        prop_assert_eq!(h.rank(), n - k);
    }

    #[test]
    fn symmetric_data(fi in 0usize..10, seed in any::<u64>(), n in 1usize..10) {
        let f = field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = eval(&f, n, &mut rng);
        // σ re-expands to ∏(x − α_i)
        let g = Poly::from_roots(&f, e.alpha());
        for i in 0..=n {
            prop_assert_eq!(e.sigma(i), g.coeff(n - i));
        }
        for t in 0..=n {
            prop_assert_eq!(e.reduce_leading_coeff(t), e.lambda(t));
        }
        for j in 0..n {
            let s = f.sum((0..n).map(|i| f.mul(e.u()[i], f.pow(e.alpha()[i], j as u64))));
            prop_assert_eq!(s, if j == n - 1 { Elem::ONE } else { Elem::ZERO });
        }
        for t in 0..=4.min(n) {
            let h = f.sum((0..n).combinations_with_replacement(t).map(|m| f.product(m.iter().map(|&i| e.alpha()[i]))));
            prop_assert_eq!(h, e.lambda(t));
        }
    }

    #[test]
    fn zero_twist_is_grs(fi in 0usize..10, seed in any::<u64>(), n in 4usize..10) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..=n - 2);
        let e = eval(&f, n, &mut rng);
        let z = Elem::ZERO;
        let inst = TgrsInstance::new(e.clone(), k, TwistMatrix::A1 { eta11: z, eta12: z, eta21: z, eta22: z }).unwrap();
        let rows: Vec<Vec<Elem>> = (0..k).map(|j| (0..n).map(|i| f.mul(e.v()[i], f.pow(e.alpha()[i], j as u64))).collect()).collect();
        let grs = LinearCode::new(Matrix::from_rows(&f, n, &rows).unwrap()).unwrap();
        prop_assert!(inst.code().unwrap().same_code(&grs));
        let a = Matrix::zeros(&f, k, n - k);
        for s in (0..n).combinations(k).take(50) {
            prop_assert_eq!(mds_witness(&e, &a, &s).unwrap(), Elem::ONE);
        }
        let bad = TgrsInstance::new(e, k, TwistMatrix::A2 { eta: vec![Elem::ZERO; n - k] });
        prop_assert!(bad.is_err());
    }

    #[test]
    fn mds_test_matches_distance(fi in 0usize..10, seed in any::<u64>(), n in 4usize..9) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..=n - 2);
        let inst = TgrsInstance::new(eval(&f, n, &mut rng), k, twist(&f, n, k, &mut rng)).unwrap();
        prop_assume!(inst.generator().rank() == k);
        let b = Bounds::default();
        let d = inst.code().unwrap().min_distance(&b).unwrap();
        prop_assert_eq!(is_mds(&inst, &b).unwrap(), d == n - k + 1);
    }

    #[test]
    fn criteria_agree_with_gram(fi in 0usize..10, seed in any::<u64>(), n in 6usize..11) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..=n / 2);
        let alpha = points(&f, n, &mut rng);
        let e = EvalData::new(&f, alpha.clone(), vec![Elem::ONE; n]).unwrap();
        let v: Option<Vec<Elem>> = e.u().iter().map(|&u| f.sqrt(f.div(u, e.u()[0]).unwrap()).ok()).collect();
        let Some(v) = v else { return Ok(()) };
        let e = EvalData::new(&f, alpha, v).unwrap();
        let inst = TgrsInstance::new(e, k, twist(&f, n, k, &mut rng)).unwrap();
        let g = inst.generator();
        prop_assert_eq!(check_so(&inst).unwrap().verdict, g.matmul(&g.transpose()).unwrap().is_zero());
    }

    #[test]
    fn quantum_distance_bounds(fi in 0usize..10, seed in any::<u64>(), n in 4usize..9) {
        let f = big_field(fi);
        prop_assume!(n <= f.q() as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=n / 2);
        let alpha = points(&f, n, &mut rng);
        let e = EvalData::new(&f, alpha.clone(), vec![Elem::ONE; n]).unwrap();
        let v: Option<Vec<Elem>> = e.u().iter().map(|&u| f.sqrt(f.div(u, e.u()[0]).unwrap()).ok()).collect();
        let Some(v) = v else { return Ok(()) };
        // GRS with v_i² ∝ u_i and 2k ≤ n is self-orthogonal
        let rows: Vec<Vec<Elem>> = (0..k).map(|j| (0..n).map(|i| f.mul(v[i], f.pow(alpha[i], j as u64))).collect()).collect();
        let c = LinearCode::new(Matrix::from_rows(&f, n, &rows).unwrap()).unwrap();
        prop_assert!(c.is_self_orthogonal());
        let b = Bounds::default();
        let q = c.quantum_derive(&b).unwrap();
        let (d, dual_d) = (c.min_distance(&b).unwrap(), c.dual().min_distance(&b).unwrap());
        prop_assert!(q.dq >= dual_d);
        if d > dual_d {
            prop_assert_eq!(q.dq, dual_d);
        }
        // brute force over C⊥ when it is small
        let dual = c.dual();
        let size = (f.q() as u64).checked_pow(dual.k() as u32);
        if q.kq > 0 && size.is_some_and(|s| s <= 1 << 16) {
            let gen = dual.generator().to_rows();
            let elems: Vec<Elem> = f.elements().collect();
            let mut best = usize::MAX;
            for coeffs in (0..dual.k()).map(|_| elems.iter().copied()).multi_cartesian_product() {
                let w: Vec<Elem> = (0..n).map(|j| f.sum(coeffs.iter().zip(&gen).map(|(&a, r)| f.mul(a, r[j])))).collect();
                if !c.contains(&w) {
                    best = best.min(w.iter().filter(|x| !x.is_zero()).count());
                }
            }
            prop_assert_eq!(q.dq, best);
        }
    }
}

#[test]
fn lagrange_exhaustive() {
    for (p, h) in [(2, 8), (3, 5), (2, 16), (251, 1)] {
        let f = Field::new(p, h).unwrap();
        assert!(f.elements().skip(1).all(|a| f.pow(a, (f.q() - 1) as u64) == Elem::ONE), "GF({p}^{h})");
    }
}

#[test]
fn case_dispatch() {
    for n in 2..30 {
        for k in 1..n {
            let b = block_case(n, k);
            if 2 * k > n {
                assert!(matches!(b, Err(Error::CaseNotCovered { .. })), "n = {n}, k = {k}");
                assert!(line_case(n, k).is_err());
            } else {
                assert!(b.is_ok(), "n = {n}, k = {k}");
            }
        }
    }
}
