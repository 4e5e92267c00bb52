//! Forward scattering machinery: splitting the Hamiltonian into Hamming
//! raising/lowering parts relative to a root vertex, the Lanczos-like
//! recurrence driven by the raising part alone, exactness bookkeeping and
//! the subspace variance of the resulting tridiagonal model.

use nalgebra::DMatrix;

use crate::basis::{Basis, SpinConfig};
use crate::error::{Result, ScarError};
use crate::graph::SparseOperator;
use crate::linalg::tridiag_eigen_full;

/// Tolerance for a recurrence step to count as exact, relative to the
/// coupling at that step.
pub const FSA_EXACT_TOL: f64 = 1e-10;

const SU2_DENSE_CAP: usize = 2000;

/// The effective one-dimensional model produced by the recurrence: layer
/// couplings, the root vertex, and (optionally) the stored layer vectors.
#[derive(Clone, Debug)]
pub struct FsaChain {
    pub couplings: Vec<f64>,
    pub alphas: Vec<f64>,
    pub root: SpinConfig,
    vectors: Option<Vec<Vec<(u32, f64)>>>,
}

impl FsaChain {
    /// Number of couplings; the chain has `len() + 1` sites.
    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.couplings.is_empty()
    }

    pub fn vectors(&self) -> Option<&[Vec<(u32, f64)>]> {
        self.vectors.as_deref()
    }

    fn dense_vector(&self, j: usize, dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        for &(idx, amp) in &self.vectors.as_ref().expect("vectors not stored")[j] {
            v[idx as usize] = amp;
        }
        v
    }
}

/// Split the adjacency Hamiltonian into the Hamming-raising part (edges
/// directed away from the root) and its transpose. The two parts sum to H
/// entrywise.
pub fn split_pm(
    h: &SparseOperator,
    basis: &Basis,
    root: &SpinConfig,
) -> Result<(SparseOperator, SparseOperator)> {
    if basis.index_of(root.bits()).is_none() {
        return Err(ScarError::invalid(format!("root {root} not in basis")));
    }
    let layer = |i: usize| (basis.bits(i) ^ root.bits()).count_ones();
    let mut raising = Vec::new();
    for i in 0..h.dim() {
        let li = layer(i);
        for &j in h.neighbors(i) {
            let lj = layer(j as usize);
            if lj == li + 1 {
                raising.push((i as u32, j));
            } else if lj + 1 != li {
                return Err(ScarError::contract(
                    "adjacency edge does not change the root distance by one",
                ));
            }
        }
    }
    let hplus = SparseOperator::from_arcs(h.dim(), &raising);
    let lowering: Vec<(u32, u32)> = raising.iter().map(|&(u, v)| (v, u)).collect();
    let hminus = SparseOperator::from_arcs(h.dim(), &lowering);
    Ok((hplus, hminus))
}

/// Run the recurrence beta_{j+1} |v_{j+1}> = H+ |v_j> from the root vertex
/// until the raising part annihilates the iterate.
pub fn fsa_recurrence(
    hplus: &SparseOperator,
    basis: &Basis,
    root: &SpinConfig,
    store_vectors: bool,
) -> Result<FsaChain> {
    let root_idx = basis
        .index_of(root.bits())
        .ok_or_else(|| ScarError::invalid(format!("root {root} not in basis")))?;
    let dim = hplus.dim();
    let mut v = vec![0.0f64; dim];
    v[root_idx as usize] = 1.0;
    let mut couplings = Vec::new();
    let mut alphas = Vec::new();
    let mut vectors = if store_vectors {
        Some(vec![sparsify(&v)])
    } else {
        None
    };
    let mut w = vec![0.0f64; dim];
    loop {
        hplus.apply(&v, &mut w);
        // alpha_j = <v_j|(H+ + H-)|v_j>; the raising part alone suffices
        // because <v|H-|v> = <H+ v|v> for this split
        let alpha = 2.0 * dot(&v, &w);
        if alpha.abs() > 1e-10 {
            return Err(ScarError::contract(format!(
                "nonzero diagonal term alpha = {alpha}; graph is not bipartite from this root"
            )));
        }
        alphas.push(alpha);
        let beta = dot(&w, &w).sqrt();
        if beta < 1e-12 {
            break;
        }
        couplings.push(beta);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / beta;
        }
        if let Some(vecs) = vectors.as_mut() {
            vecs.push(sparsify(&v));
        }
        if couplings.len() > dim {
            return Err(ScarError::contract("recurrence failed to terminate"));
        }
    }
    // alphas has one entry per chain site; trim to len + 1
    alphas.truncate(couplings.len() + 1);
    Ok(FsaChain {
        couplings,
        alphas,
        root: *root,
        vectors,
    })
}

fn sparsify(v: &[f64]) -> Vec<(u32, f64)> {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // compensated summation: the recurrence normalizes by these values many
    // times in a row, so plain summation drift is visible at N ~ 20
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let term = x * y - c;
        let t = sum + term;
        c = (t - sum) - term;
        sum = t;
    }
    sum
}

/// Largest m such that H- |v_j> = beta_j |v_{j-1}> holds within tolerance
/// for every j <= m.
pub fn exact_steps(hminus: &SparseOperator, chain: &FsaChain) -> Result<usize> {
    let vectors = chain
        .vectors
        .as_ref()
        .ok_or_else(|| ScarError::invalid("chain was built without stored vectors"))?;
    let dim = hminus.dim();
    let mut w = vec![0.0f64; dim];
    let mut exact = 0usize;
    for j in 1..vectors.len() {
        let vj = chain.dense_vector(j, dim);
        hminus.apply(&vj, &mut w);
        let beta = chain.couplings[j - 1];
        let mut defect2 = 0.0;
        let prev = &vectors[j - 1];
        let mut prev_iter = prev.iter().peekable();
        for (idx, &wi) in w.iter().enumerate() {
            let expected = match prev_iter.peek() {
                Some(&&(pi, amp)) if pi as usize == idx => {
                    prev_iter.next();
                    beta * amp
                }
                _ => 0.0,
            };
            let d = wi - expected;
            defect2 += d * d;
        }
        if defect2.sqrt() <= FSA_EXACT_TOL * beta {
            exact = j;
        } else {
            break;
        }
    }
    Ok(exact)
}

/// Subspace variance sigma_E = Tr[P H^2 P - (P H P)^2] over the stored
/// chain vectors; zero iff the recurrence subspace is dynamically closed.
pub fn subspace_variance(h: &SparseOperator, chain: &FsaChain) -> Result<f64> {
    let vectors = chain
        .vectors
        .as_ref()
        .ok_or_else(|| ScarError::invalid("chain was built without stored vectors"))?;
    let dim = h.dim();
    let m = vectors.len();
    // B_ii = |H v_i|^2
    let mut trace_b = 0.0;
    let mut w = vec![0.0f64; dim];
    for j in 0..m {
        let vj = chain.dense_vector(j, dim);
        h.apply(&vj, &mut w);
        trace_b += dot(&w, &w);
    }
    // A is the tridiagonal projected Hamiltonian
    let mut a = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        a[(j, j)] = chain.alphas[j];
        if j + 1 < m {
            a[(j, j + 1)] = chain.couplings[j];
            a[(j + 1, j)] = chain.couplings[j];
        }
    }
    let a2 = &a * &a;
    let trace_a2: f64 = (0..m).map(|i| a2[(i, i)]).sum();
    let sigma = trace_b - trace_a2;
    if sigma < -1e-10 {
        return Err(ScarError::contract(format!(
            "negative subspace variance {sigma}"
        )));
    }
    Ok(sigma.max(0.0))
}

/// Eigenvalues and layer-basis eigenvectors of the chain Hamiltonian.
pub fn fsa_spectrum(chain: &FsaChain) -> (Vec<f64>, Vec<Vec<f64>>) {
    tridiag_eigen_full(chain.alphas.clone(), &chain.couplings)
}

/// Gram matrix departure of the stored chain vectors from orthonormality.
pub fn gram_defect(chain: &FsaChain) -> Result<f64> {
    let vectors = chain
        .vectors
        .as_ref()
        .ok_or_else(|| ScarError::invalid("chain was built without stored vectors"))?;
    let mut worst: f64 = 0.0;
    for (i, vi) in vectors.iter().enumerate() {
        for (j, vj) in vectors.iter().enumerate() {
            let mut acc = 0.0;
            let mut it = vj.iter().peekable();
            for &(idx, amp) in vi {
                while let Some(&&(jdx, _)) = it.peek() {
                    if jdx < idx {
                        it.next();
                    } else {
                        break;
                    }
                }
                if let Some(&&(jdx, bmp)) = it.peek() {
                    if jdx == idx {
                        acc += amp * bmp;
                    }
                }
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - expect).abs());
        }
    }
    Ok(worst)
}

/// Spectral norm of the su(2) defect delta+ = [H^z, H+] - H+ with
/// H^z = [H+, H-]/2, computed densely.
pub fn broken_su2_residual(hplus: &SparseOperator, hminus: &SparseOperator) -> Result<f64> {
    let dim = hplus.dim();
    if dim > SU2_DENSE_CAP {
        return Err(ScarError::resource(format!(
            "dense commutators capped at dimension {SU2_DENSE_CAP}, got {dim}"
        )));
    }
    let hp = hplus.to_dense();
    let hm = hminus.to_dense();
    let hz = (&hp * &hm - &hm * &hp) * 0.5;
    let delta = &hz * &hp - &hp * &hz - &hp;
    Ok(spectral_norm(&delta))
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    let gram = m.transpose() * m;
    let mut v = nalgebra::DVector::<f64>::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda: f64 = 0.0;
    for _ in 0..300 {
        let w = &gram * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w);
        v = w / nw;
        if (next - lambda).abs() < 1e-13 * next.abs().max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.max(0.0).sqrt()
}
