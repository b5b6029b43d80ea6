//! Linear codes: duals, hulls, minimum distance, Singleton classification and
//! quantum stabilizer parameters.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fla::Matrix;
use crate::gf::{Elem, Field};

/// Search limits shared by the exhaustive procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Longest code handled by the column-subset distance search.
    pub max_n: usize,
    /// Largest q^k for exhaustive codeword enumeration.
    pub max_enumeration: u64,
    /// Largest field scanned element by element (root finding, searches).
    pub max_field: u64,
    /// Largest number of k-subsets visited by the MDS witness loop.
    pub max_subsets: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_n: 20, max_enumeration: 1 << 22, max_field: 1 << 20, max_subsets: 1 << 20 }
    }
}

impl Bounds {
    /// Defaults, with `TGRS_MAX_FIELD` overriding the field-size cap.
    pub fn from_env() -> Bounds {
        let mut b = Bounds::default();
        if let Some(v) = std::env::var("TGRS_MAX_FIELD").ok().and_then(|s| s.trim().parse().ok()) {
            b.max_field = v;
        }
        b
    }
}

/// A linear [n, k] code given by a full-rank k×n generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MdsClass {
    #[serde(rename = "MDS")]
    Mds,
    #[serde(rename = "AMDS")]
    Amds,
    #[serde(rename = "NMDS")]
    Nmds,
    #[serde(rename = "other")]
    Other,
}

impl std::fmt::Display for MdsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MdsClass::Mds => "MDS",
            MdsClass::Amds => "AMDS",
            MdsClass::Nmds => "NMDS",
            MdsClass::Other => "other",
        })
    }
}

/// Parameters [[n, kq, dq]] of the stabilizer code of a self-orthogonal code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub n: usize,
    pub kq: usize,
    pub dq: usize,
    pub saturates_singleton: bool,
}

impl std::fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{},{}]]", self.n, self.kq, self.dq)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub singleton_defect: usize,
    pub mds_class: MdsClass,
    pub self_orthogonal: bool,
    pub self_dual: bool,
    pub hull_dim: usize,
    pub dual_k: usize,
    pub dual_d: usize,
    pub dual_singleton_defect: usize,
    pub quantum: Option<QuantumParams>,
}

impl LinearCode {
    /// Wraps a generator matrix, rejecting dependent rows.
    pub fn new(gen: Matrix) -> Result<LinearCode> {
        if gen.rank() != gen.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(LinearCode { gen })
    }

    /// Code spanned by the rows of `m`, which may be dependent.
    pub fn from_spanning(m: &Matrix) -> LinearCode {
        let r = m.rref();
        let rows: Vec<usize> = (0..r.rank).collect();
        LinearCode { gen: r.matrix.select_rows(&rows) }
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    /// Dual code; its generator is the reduced-echelon kernel basis of `gen`.
    pub fn dual(&self) -> LinearCode {
        LinearCode { gen: self.gen.kernel() }
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.gen.row_space_contains(x)
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.gen.matmul(&self.gen.transpose()).expect("shapes agree").is_zero()
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n() && self.is_self_orthogonal()
    }

    /// dim(C ∩ C⊥).
    pub fn hull_dim(&self) -> usize {
        let d = self.dual();
        let stacked = self.gen.vstack(&d.gen).expect("same length");
        self.k() + d.k() - stacked.rank()
    }

    /// Same row space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.k() == other.k() && self.gen.rref().matrix == other.gen.rref().matrix
    }

    /// Minimum distance as the smallest number of linearly dependent columns
    /// of a parity-check matrix (the dual generator). The zero code is given
    /// distance n + 1.
    pub fn min_distance(&self, bounds: &Bounds) -> Result<usize> {
        let n = self.n();
        if self.k() == 0 {
            return Ok(n + 1);
        }
        if n > bounds.max_n {
            return Err(Error::BoundExceeded(format!("n = {n} exceeds the subset-search bound {}", bounds.max_n)));
        }
        let h = self.dual().gen;
        let r = h.rows();
        for w in 1..=r {
            for cols in (0..n).combinations(w) {
                if h.select_columns(&cols).rank() < w {
                    return Ok(w);
                }
            }
        }
        Ok(r + 1)
    }

    /// Minimum distance by enumerating one codeword per projective point of
    /// the message space; feasible when q^k is within `bounds.max_enumeration`.
    pub fn min_distance_enumerate(&self, bounds: &Bounds) -> Result<usize> {
        let n = self.n();
        let k = self.k();
        if k == 0 {
            return Ok(n + 1);
        }
        let f = self.field();
        let q = f.q() as u64;
        let total = q.checked_pow(k as u32).unwrap_or(u64::MAX);
        if total > bounds.max_enumeration {
            return Err(Error::BoundExceeded(format!("q^k = {total} exceeds {}", bounds.max_enumeration)));
        }
        let mut best = n;
        // leading coordinate `lead` fixed to 1, the later ones run over the field
        for lead in 0..k {
            let tail = k - lead - 1;
            let mut digits = vec![0u32; tail];
            let mut word: Vec<Elem> = self.gen.row(lead).to_vec();
            loop {
                let wt = word.iter().filter(|e| !e.is_zero()).count();
                best = best.min(wt);
                // odometer step over rows lead+1..k
                let mut i = 0;
                loop {
                    if i == tail {
                        break;
                    }
                    let row = self.gen.row(lead + 1 + i);
                    let old = Elem(digits[i]);
                    let new_digit = (digits[i] + 1) % q as u32;
                    let delta = f.sub(Elem(new_digit), old);
                    for (w, &g) in word.iter_mut().zip(row) {
                        *w = f.add(*w, f.mul(delta, g));
                    }
                    digits[i] = new_digit;
                    if new_digit != 0 {
                        break;
                    }
                    i += 1;
                }
                if i == tail {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Report with every field except `quantum` filled.
    pub fn classify(&self, bounds: &Bounds) -> Result<CodeReport> {
        let n = self.n();
        let k = self.k();
        let d = self.min_distance(bounds)?;
        let dual = self.dual();
        let dual_d = dual.min_distance(bounds)?;
        let defect = (n + 1).saturating_sub(k + d);
        let dual_defect = (n + 1).saturating_sub(dual.k() + dual_d);
        let mds_class = match (defect, dual_defect) {
            (0, _) => MdsClass::Mds,
            (1, 1) => MdsClass::Nmds,
            (1, _) => MdsClass::Amds,
            _ => MdsClass::Other,
        };
        let self_orthogonal = self.is_self_orthogonal();
        Ok(CodeReport {
            n,
            k,
            d,
            singleton_defect: defect,
            mds_class,
            self_orthogonal,
            self_dual: self_orthogonal && 2 * k == n,
            hull_dim: self.hull_dim(),
            dual_k: dual.k(),
            dual_d,
            dual_singleton_defect: dual_defect,
            quantum: None,
        })
    }

    /// [`classify`](Self::classify) plus the quantum parameters when the code
    /// is self-orthogonal.
    pub fn report(&self, bounds: &Bounds) -> Result<CodeReport> {
        let mut r = self.classify(bounds)?;
        if r.self_orthogonal {
            r.quantum = Some(self.quantum_derive(bounds)?);
        }
        Ok(r)
    }

    /// [[n, n − 2k, wt(C⊥ ∖ C)]] for a self-orthogonal code.
    ///
    /// When d(C) > d(C⊥) the answer is d(C⊥). Otherwise the smallest w is
    /// found for which some w-subset S carries a dual codeword outside C: the
    /// dual words supported in S form a subspace K_S, and K_S ⊄ C is decided
    /// on a basis of K_S. For a self-dual code C⊥ ∖ C is empty and d(C) is
    /// reported.
    pub fn quantum_derive(&self, bounds: &Bounds) -> Result<QuantumParams> {
        if !self.is_self_orthogonal() {
            return Err(Error::NotSelfOrthogonal);
        }
        let n = self.n();
        let kq = n - 2 * self.k();
        let d = self.min_distance(bounds)?;
        let dual = self.dual();
        let dual_d = dual.min_distance(bounds)?;
        let dq = if kq == 0 {
            d
        } else if d > dual_d {
            dual_d
        } else {
            self.outside_weight(&dual, dual_d)?
        };
        Ok(QuantumParams { n, kq, dq, saturates_singleton: kq + 2 * dq == n + 2 })
    }

    fn outside_weight(&self, dual: &LinearCode, start: usize) -> Result<usize> {
        let n = self.n();
        let dg = &dual.gen;
        for w in start..=n {
            for support in (0..n).combinations(w) {
                let outside: Vec<usize> = (0..n).filter(|c| !support.contains(c)).collect();
                // messages m with (m·D) vanishing off the support
                let restricted = dg.select_columns(&outside);
                let msgs = restricted.transpose().kernel();
                for r in 0..msgs.rows() {
                    let m = Matrix::new(self.field(), 1, dg.rows(), msgs.row(r).to_vec())?;
                    let word = m.matmul(dg)?;
                    if !self.contains(word.row(0)) {
                        return Ok(w);
                    }
                }
            }
        }
        Err(Error::UnsupportedInstance("C⊥ ∖ C is empty".into()))
    }
}
