//! Minimal-polynomial recovery: express the constraint
//! G(x, Phi_k(x)) = 0 mod <x>^{k+1} as a linear system in the homogeneous
//! pieces G_{ij} of G's y-coefficients, square it with the transpose, and
//! emit every unknown as a Cramer ratio of Berkowitz determinant circuits.
//!
//! Ill-posed inputs are not rejected here: they produce well-formed
//! circuits that may divide by an identically zero determinant, which the
//! verification pass flags downstream.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{hom_table, Circuit, CircuitBuilder, CircuitError, NodeId};
use crate::field::Field;
use crate::newton::power_tables;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinPolyError {
    Circuit(CircuitError),
    BadShape(&'static str),
}

impl fmt::Display for MinPolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinPolyError::Circuit(e) => write!(f, "{e}"),
            MinPolyError::BadShape(m) => write!(f, "{m}"),
        }
    }
}

impl From<CircuitError> for MinPolyError {
    fn from(e: CircuitError) -> Self {
        MinPolyError::Circuit(e)
    }
}

/// Table of circuits Phi^{(r, l)} = Hom_l(Phi^r) for r <= max_pow,
/// l <= k, built into `b` from a circuit for Phi by structural
/// decomposition followed by truncated convolution powers.
pub fn powers_hom<F: Field>(
    b: &mut CircuitBuilder<F>,
    phi: &Circuit<F>,
    max_pow: usize,
    k: usize,
) -> Result<Vec<Vec<Option<NodeId>>>, MinPolyError> {
    let comps = hom_table(b, phi, k)?;
    Ok(power_tables(b, &comps, max_pow, k))
}

/// Division-free determinant circuit over the entries (ids into `b`),
/// by the Berkowitz vector recurrence on principal minors.
pub fn det_circuit<F: Field>(b: &mut CircuitBuilder<F>, a: &[Vec<NodeId>]) -> NodeId {
    let n = a.len();
    if n == 0 {
        return b.one();
    }
    for row in a {
        assert_eq!(row.len(), n, "square matrix required");
    }
    // p holds the characteristic-polynomial coefficients of the leading
    // r x r minor, leading coefficient first (length r + 1).
    let one = b.one();
    let mut p: Vec<NodeId> = vec![one];
    for r in 1..=n {
        // Toeplitz column: t_0 = 1, t_1 = -a_rr, t_i = -(R M^{i-2} C).
        let mut t: Vec<NodeId> = Vec::with_capacity(r + 1);
        t.push(one);
        t.push(b.neg(a[r - 1][r - 1]));
        if r >= 2 {
            // w = C; iterate w = M w, taking R.w each round.
            let mut w: Vec<NodeId> = (0..r - 1).map(|i| a[i][r - 1]).collect();
            for _ in 2..=r {
                let dot = dot_product(b, &a[r - 1][..r - 1], &w);
                t.push(b.neg(dot));
                if t.len() == r + 1 {
                    break;
                }
                let mut next = Vec::with_capacity(r - 1);
                for i in 0..r - 1 {
                    let row: Vec<NodeId> = (0..r - 1).map(|j| a[i][j]).collect();
                    next.push(dot_product(b, &row, &w));
                }
                w = next;
            }
        }
        // p_new[i] = sum_{j <= i} t[i - j] * p[j], sizes: (r+1) from r.
        let mut p_new: Vec<NodeId> = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let mut terms = Vec::new();
            for (j, &pj) in p.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    if i - j == 0 {
                        terms.push(pj);
                    } else {
                        terms.push(b.mul(t[i - j], pj));
                    }
                }
            }
            p_new.push(b.add_many(&terms));
        }
        p = p_new;
    }
    // char(lambda) = det(lambda I - A): constant term is (-1)^n det(A).
    let constant = p[n];
    if n % 2 == 1 {
        b.neg(constant)
    } else {
        constant
    }
}

fn dot_product<F: Field>(b: &mut CircuitBuilder<F>, x: &[NodeId], y: &[NodeId]) -> NodeId {
    let terms: Vec<NodeId> = x.iter().zip(y).map(|(&l, &r)| b.mul(l, r)).collect();
    b.add_many(&terms)
}

/// The homogeneous linear system for the unknowns G_{ij}
/// (0 <= i < d, 0 <= j <= D; the monic row i = d is folded into the right
/// side). Row m of M multiplies G_{ij} by Phi^{(i, m-j)}.
pub struct MinPolySystem {
    pub d: usize,
    pub xdeg: usize,
    pub k: usize,
    /// Unknown count d * (xdeg + 1); ordering row-major in i then j.
    pub unknowns: usize,
    /// matrix[m][col]: entry ids (None = zero), m = 0..=k.
    pub matrix: Vec<Vec<Option<NodeId>>>,
    /// rhs[m] = -Phi^{(d, m)}.
    pub rhs: Vec<Option<NodeId>>,
}

pub fn build_system<F: Field>(
    b: &mut CircuitBuilder<F>,
    powers: &[Vec<Option<NodeId>>],
    d: usize,
    xdeg: usize,
    k: usize,
) -> Result<MinPolySystem, MinPolyError> {
    if powers.len() < d + 1 {
        return Err(MinPolyError::BadShape("power table shorter than degree d"));
    }
    let unknowns = d * (xdeg + 1);
    let mut matrix = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let mut row = Vec::with_capacity(unknowns);
        for i in 0..d {
            for j in 0..=xdeg {
                let entry = if m >= j && m - j <= k {
                    powers[i][m - j]
                } else {
                    None
                };
                row.push(entry);
            }
        }
        matrix.push(row);
        rhs.push(powers[d][m].map(|id| b.neg(id)));
    }
    Ok(MinPolySystem {
        d,
        xdeg,
        k,
        unknowns,
        matrix,
        rhs,
    })
}

/// Node ids of the recovered coefficient circuits: nums[i] computes
/// den * G_i for i = 0..d-1, and den computes det(M^T M).
pub struct RecoveredIds {
    pub nums: Vec<NodeId>,
    pub den: NodeId,
}

/// Normal equations + Cramer: one Berkowitz determinant for N = M^T M and
/// one per unknown column replaced by M^T b; the per-coefficient numerator
/// is the sum over j of the column determinants.
pub fn solve_system<F: Field>(
    b: &mut CircuitBuilder<F>,
    sys: &MinPolySystem,
) -> Result<RecoveredIds, MinPolyError> {
    let c = sys.unknowns;
    let zero = b.zero();
    let as_node = |x: &Option<NodeId>| x.unwrap_or(zero);

    // N = M^T M (c x c), and v = M^T rhs (length c).
    let mut n_mat: Vec<Vec<NodeId>> = vec![vec![zero; c]; c];
    for p in 0..c {
        for q in p..c {
            let mut terms = Vec::new();
            for m in 0..=sys.k {
                if let (Some(a), Some(bb)) = (sys.matrix[m][p], sys.matrix[m][q]) {
                    terms.push(b.mul(a, bb));
                }
            }
            let e = b.add_many(&terms);
            n_mat[p][q] = e;
            n_mat[q][p] = e;
        }
    }
    let mut v: Vec<NodeId> = Vec::with_capacity(c);
    for p in 0..c {
        let mut terms = Vec::new();
        for m in 0..=sys.k {
            if let (Some(a), Some(r)) = (sys.matrix[m][p], sys.rhs[m]) {
                terms.push(b.mul(a, r));
            }
        }
        v.push(b.add_many(&terms));
    }
    let _ = as_node;

    let den = det_circuit(b, &n_mat);
    // Column replacements.
    let mut col_dets: Vec<NodeId> = Vec::with_capacity(c);
    for col in 0..c {
        let mut replaced = n_mat.clone();
        for (row, item) in replaced.iter_mut().enumerate() {
            item[col] = v[row];
        }
        col_dets.push(det_circuit(b, &replaced));
    }
    // G_i numerator: sum over j of z_{(i,j)} numerators.
    let mut nums = Vec::with_capacity(sys.d);
    for i in 0..sys.d {
        let cols: Vec<NodeId> = (0..=sys.xdeg)
            .map(|j| col_dets[i * (sys.xdeg + 1) + j])
            .collect();
        nums.push(b.add_many(&cols));
    }
    Ok(RecoveredIds { nums, den })
}

/// A recovered minimal polynomial: per-coefficient circuits G_i sharing one
/// division by det(M^T M), plus the assembled monic G(x, y).
pub struct RecoveredMinPoly<F: Field> {
    /// Outputs: [den*G_0, ..., den*G_{d-1}, den].
    pub circuit: Circuit<F>,
    pub d: usize,
    pub xdeg: usize,
    pub k: usize,
}

impl<F: Field> RecoveredMinPoly<F> {
    /// Monic G(x, y) = y^d + sum_i (num_i / den) y^i as one circuit with a
    /// single division gate; `yvar` designates y.
    pub fn assembled(&self, yvar: u32) -> Result<Circuit<F>, MinPolyError> {
        let d = self.d;
        let mut b = CircuitBuilder::<F>::new(self.circuit.ctx().clone(), self.circuit.nvars());
        let map = b.import(&self.circuit);
        let nums: Vec<NodeId> = (0..d)
            .map(|i| map[self.circuit.outputs()[i] as usize])
            .collect();
        let den = map[self.circuit.outputs()[d] as usize];
        let y = b.var(yvar);
        // numerator polynomial: den*y^d + sum nums[i] y^i
        let mut terms = Vec::with_capacity(d + 1);
        let mut ypow = b.one();
        for (i, &num) in nums.iter().enumerate() {
            let t = b.mul(num, ypow);
            terms.push(t);
            let _ = i;
            ypow = b.mul(ypow, y);
        }
        let top = b.mul(den, ypow);
        terms.push(top);
        let total = b.add_many(&terms);
        let out = b.div(total, den);
        Ok(b.finish_single(out).with_yvar(Some(yvar)))
    }
}

/// Full recovery from a circuit for Phi_k: decompose, build the system,
/// solve by Cramer determinants. `xdeg` bounds the x-degree of every
/// G_i; uniqueness holds when k >= 2 * d * xdeg and a monic irreducible G
/// with those bounds annihilates Phi_k mod <x>^{k+1}.
pub fn recover<F: Field>(
    phi: &Circuit<F>,
    d: usize,
    xdeg: usize,
    k: usize,
) -> Result<RecoveredMinPoly<F>, MinPolyError> {
    let mut b = CircuitBuilder::<F>::new(phi.ctx().clone(), phi.nvars());
    let powers = powers_hom(&mut b, phi, d, k)?;
    let ids = recover_ids(&mut b, &powers, d, xdeg, k)?;
    let mut outputs = ids.nums;
    outputs.push(ids.den);
    Ok(RecoveredMinPoly {
        circuit: b.finish(outputs).with_yvar(phi.yvar()),
        d,
        xdeg,
        k,
    })
}

/// As `recover`, starting from precomputed homogeneous components of
/// Phi_k living in `b` (the pipeline path, which never materializes the
/// untruncated approximant's decomposition).
pub fn recover_from_components<F: Field>(
    b: &mut CircuitBuilder<F>,
    components: &[Option<NodeId>],
    d: usize,
    xdeg: usize,
    k: usize,
) -> Result<RecoveredIds, MinPolyError> {
    let powers = power_tables(b, components, d, k);
    recover_ids(b, &powers, d, xdeg, k)
}

fn recover_ids<F: Field>(
    b: &mut CircuitBuilder<F>,
    powers: &[Vec<Option<NodeId>>],
    d: usize,
    xdeg: usize,
    k: usize,
) -> Result<RecoveredIds, MinPolyError> {
    let sys = build_system(b, powers, d, xdeg, k)?;
    solve_system(b, &sys)
}
