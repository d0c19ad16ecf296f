//! Exact two-phase simplex for `min Σ|x_j|` subject to `A x = b`.
//!
//! Each free variable is split as `x_j = p_j − n_j`. Only the `p` columns are
//! stored: in every tableau the column of `n_j` is the negated column of
//! `p_j`. Entering and leaving variables follow Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Sparse column-major matrix with `rows` rows.
#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, Q)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Solution {
    /// Signed values `x_j`.
    pub x: Vec<Q>,
    pub value: Q,
    /// Optimal dual vector: `|A_jᵀy| ≤ 1` for all `j` and `bᵀy = value`.
    pub dual: Vec<Q>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum L1Outcome {
    Optimal(L1Solution),
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    P(usize),
    N(usize),
    Art(usize),
}

struct Tableau {
    /// `rows × (n + m)`: `p` columns then artificial columns.
    t: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<Var>,
    /// `c_B B⁻¹ A` over the stored columns.
    z: Vec<Q>,
    value: Q,
    n: usize,
    pivots: usize,
}

impl Tableau {
    fn col(&self, v: Var) -> usize {
        match v {
            Var::P(j) | Var::N(j) => j,
            Var::Art(i) => self.n + i,
        }
    }

    fn entry(&self, i: usize, v: Var) -> Q {
        let x = &self.t[i][self.col(v)];
        if matches!(v, Var::N(_)) {
            -x
        } else {
            x.clone()
        }
    }

    fn reduced_cost(&self, v: Var, phase_one: bool) -> Q {
        let z = &self.z[self.col(v)];
        match (v, phase_one) {
            (Var::P(_), true) => -z,
            (Var::N(_), true) => z.clone(),
            (Var::Art(_), true) => Q::one() - z,
            (Var::P(_), false) => Q::one() - z,
            (Var::N(_), false) => Q::one() + z,
            (Var::Art(_), false) => -z,
        }
    }

    fn cost(v: Var, phase_one: bool) -> Q {
        match (v, phase_one) {
            (Var::Art(_), true) | (Var::P(_) | Var::N(_), false) => Q::one(),
            _ => Q::zero(),
        }
    }

    fn recompute_z(&mut self, phase_one: bool) {
        let width = self.z.len();
        let mut z = vec![Q::zero(); width];
        let mut value = Q::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let c = Self::cost(b, phase_one);
            if c.is_zero() {
                continue;
            }
            for (zj, tij) in z.iter_mut().zip(&self.t[i]) {
                if !tij.is_zero() {
                    *zj += &c * tij;
                }
            }
            value += &c * &self.rhs[i];
        }
        self.z = z;
        self.value = value;
    }

    fn pivot(&mut self, r: usize, e: Var, phase_one: bool) {
        let piv = self.entry(r, e);
        debug_assert!(!piv.is_zero());
        let inv = Q::one() / piv;
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let nz: Vec<usize> = (0..self.t[r].len()).filter(|&j| !self.t[r][j].is_zero()).collect();
        let row_r = std::mem::take(&mut self.t[r]);
        let rhs_r = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.entry_in(&self.t[i], e);
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let d = &f * &row_r[j];
                self.t[i][j] -= d;
            }
            let d = &f * &rhs_r;
            self.rhs[i] -= d;
        }
        let d_e = self.reduced_cost(e, phase_one);
        for &j in &nz {
            let d = &d_e * &row_r[j];
            self.z[j] += d;
        }
        self.value += &d_e * &rhs_r;
        self.t[r] = row_r;
        self.basis[r] = e;
        self.pivots += 1;
    }

    fn entry_in(&self, row: &[Q], v: Var) -> Q {
        let x = &row[self.col(v)];
        if matches!(v, Var::N(_)) {
            -x
        } else {
            x.clone()
        }
    }

    fn candidates(&self, phase_one: bool) -> impl Iterator<Item = Var> + '_ {
        let n = self.n;
        let m = self.t.len();
        (0..n)
            .map(Var::P)
            .chain((0..n).map(Var::N))
            .chain((0..m).map(Var::Art).filter(move |_| phase_one))
    }

    /// Runs Bland pivots until optimal. Returns `false` if unbounded.
    fn optimize(&mut self, phase_one: bool) -> bool {
        loop {
            let entering = self
                .candidates(phase_one)
                .find(|&v| !self.basis.contains(&v) && self.reduced_cost(v, phase_one).is_negative());
            let Some(e) = entering else {
                return true;
            };
            let mut best: Option<(Q, Var, usize)> = None;
            for i in 0..self.t.len() {
                let a = self.entry(i, e);
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &a;
                let better = match &best {
                    None => true,
                    Some((r, v, _)) => ratio < *r || (ratio == *r && self.basis[i] < *v),
                };
                if better {
                    best = Some((ratio, self.basis[i], i));
                }
            }
            let Some((_, _, r)) = best else {
                return false;
            };
            self.pivot(r, e, phase_one);
        }
    }
}

/// Minimizes `Σ|x_j|` subject to `Σ_j x_j·A_j = b`.
pub fn solve_l1(a: &SparseColumns, b: &[Q]) -> L1Outcome {
    let m = a.rows;
    let n = a.columns.len();
    assert_eq!(b.len(), m, "right-hand side has the wrong length");
    // rows with negative rhs are negated so the artificial basis is feasible
    let sign: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let mut t = vec![vec![Q::zero(); n + m]; m];
    for (j, col) in a.columns.iter().enumerate() {
        for (i, x) in col {
            t[*i][j] = if sign[*i] { -x } else { x.clone() };
        }
    }
    for (i, row) in t.iter_mut().enumerate() {
        row[n + i] = Q::one();
    }
    let rhs: Vec<Q> = b.iter().map(|x| x.abs()).collect();
    let mut tab = Tableau {
        t,
        rhs,
        basis: (0..m).map(Var::Art).collect(),
        z: vec![Q::zero(); n + m],
        value: Q::zero(),
        n,
        pivots: 0,
    };
    tab.recompute_z(true);
    let bounded = tab.optimize(true);
    debug_assert!(bounded);
    if !tab.value.is_zero() {
        return L1Outcome::Infeasible;
    }
    // drive zero-level artificials out wherever a structural column allows it
    for r in 0..m {
        if let Var::Art(_) = tab.basis[r] {
            if let Some(j) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, Var::P(j), true);
            }
        }
    }
    tab.recompute_z(false);
    let bounded = tab.optimize(false);
    assert!(bounded, "l1 objective cannot be unbounded");

    let mut x = vec![Q::zero(); n];
    for (i, v) in tab.basis.iter().enumerate() {
        match *v {
            Var::P(j) => x[j] += &tab.rhs[i],
            Var::N(j) => x[j] -= &tab.rhs[i],
            Var::Art(_) => debug_assert!(tab.rhs[i].is_zero()),
        }
    }
    let dual: Vec<Q> = (0..m)
        .map(|i| {
            let y = tab.z[n + i].clone();
            if sign[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    L1Outcome::Optimal(L1Solution {
        x,
        value: tab.value,
        dual,
        pivots: tab.pivots,
    })
}

/// Exact checks of a claimed optimum: primal feasibility, `Σ|x| = value`,
/// dual feasibility and `bᵀy = value`.
pub fn certify(a: &SparseColumns, b: &[Q], sol: &L1Solution) -> bool {
    let mut ax = vec![Q::zero(); a.rows];
    for (col, xj) in a.columns.iter().zip(&sol.x) {
        if xj.is_zero() {
            continue;
        }
        for (i, v) in col {
            ax[*i] += v * xj;
        }
    }
    let primal = ax.as_slice() == b;
    let norm: Q = sol.x.iter().map(|v| v.abs()).sum();
    let dual_ok = a.columns.iter().all(|col| {
        let s: Q = col.iter().map(|(i, v)| v * &sol.dual[*i]).sum();
        s.abs() <= Q::one()
    });
    let by: Q = b.iter().zip(&sol.dual).map(|(x, y)| x * y).sum();
    primal && norm == sol.value && dual_ok && by == sol.value
}
