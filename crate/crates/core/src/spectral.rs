//! Exact-diagonalization diagnostics: eigenstate overlaps with a target
//! state and top-band identification, half-chain entanglement entropy,
//! r-statistics and unfolded level spacings.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{Basis, SpinConfig};
use crate::error::{Result, ScarError};
use crate::graph::SparseOperator;
use crate::linalg::least_squares;
use crate::symmetry::{project_sector, sector_basis, OrbitPartition};

/// Per-eigenstate overlap data with the top band marked.
#[derive(Clone, Debug)]
pub struct OverlapProfile {
    /// (energy, |<target|eigenstate>|^2), sorted by energy.
    pub entries: Vec<(f64, f64)>,
    /// Indices into `entries` of the top-band states, one per energy bin
    /// centered on the reference (FSA) eigenvalues.
    pub top_band: Vec<usize>,
}

impl OverlapProfile {
    pub fn total_overlap(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Mark the maximal-overlap eigenstate inside each energy bin centered on
/// the reference eigenvalues.
pub fn overlap_profile(items: &[(f64, f64)], reference_energies: &[f64]) -> OverlapProfile {
    let mut entries = items.to_vec();
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut refs = reference_energies.to_vec();
    refs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut top_band = Vec::new();
    for (bin, &center) in refs.iter().enumerate() {
        let lo = if bin == 0 {
            f64::NEG_INFINITY
        } else {
            0.5 * (refs[bin - 1] + center)
        };
        let hi = if bin + 1 == refs.len() {
            f64::INFINITY
        } else {
            0.5 * (center + refs[bin + 1])
        };
        let best = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.0 >= lo && e.0 < hi)
            .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap());
        if let Some((idx, _)) = best {
            top_band.push(idx);
        }
    }
    top_band.dedup();
    OverlapProfile { entries, top_band }
}

/// Overlaps of a computational-basis target state with all eigenstates of
/// the momentum sectors it lives in. Returns (energy, overlap) pairs whose
/// overlaps sum to one.
pub fn target_overlap_data(
    h: &SparseOperator,
    basis: &Basis,
    orbits: &OrbitPartition,
    target: &SpinConfig,
) -> Result<Vec<(f64, f64)>> {
    let n = basis.n_sites();
    let t_idx = basis
        .index_of(target.bits())
        .ok_or_else(|| ScarError::invalid(format!("target {target} not in basis")))?;
    let orbit = orbits.orbit_of[t_idx as usize] as usize;
    let period = orbits.period[orbit] as usize;
    let mut out = Vec::new();
    for k in 0..n {
        if (k * period) % n != 0 {
            continue;
        }
        let sector = sector_basis(basis, orbits, k, None)?;
        if sector.dim() == 0 {
            continue;
        }
        // coordinates of the target basis vector in this sector
        let coords: Vec<Complex64> = (0..sector.dim())
            .map(|c| {
                sector
                    .column(c)
                    .iter()
                    .find(|&&(i, _)| i == t_idx)
                    .map(|&(_, w)| w.conj())
                    .unwrap_or(Complex64::ZERO)
            })
            .collect();
        let (vals, vecs) = project_sector(h, basis, &sector)?.eigenpairs();
        for (m, &e) in vals.iter().enumerate() {
            let amp: Complex64 = coords
                .iter()
                .zip(&vecs[m])
                .map(|(c, v)| c.conj() * v)
                .sum();
            out.push((e, amp.norm_sqr()));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

/// Von Neumann entanglement entropy of a contiguous block of `cut` sites
/// (sites 0..cut), natural logarithm.
pub fn entanglement_entropy(
    amplitudes: &[Complex64],
    basis: &Basis,
    cut: usize,
) -> Result<f64> {
    if amplitudes.len() != basis.len() {
        return Err(ScarError::invalid("amplitude/basis dimension mismatch"));
    }
    let n = basis.n_sites();
    if cut == 0 || cut >= n {
        return Err(ScarError::invalid("cut must leave sites on both sides"));
    }
    let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-8 {
        return Err(ScarError::invalid(format!(
            "state is not normalized (|psi|^2 = {norm2})"
        )));
    }
    let left_mask = (1u64 << cut) - 1;
    let mut left_ids: fnv::FnvHashMap<u64, usize> = fnv::FnvHashMap::default();
    let mut right_ids: fnv::FnvHashMap<u64, usize> = fnv::FnvHashMap::default();
    let mut triples = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let b = basis.bits(i);
        let l = b & left_mask;
        let r = b >> cut;
        let next_left = left_ids.len();
        let li = *left_ids.entry(l).or_insert(next_left);
        let next_right = right_ids.len();
        let ri = *right_ids.entry(r).or_insert(next_right);
        triples.push((li, ri, amplitudes[i]));
    }
    let (nl, nr) = (left_ids.len(), right_ids.len());
    // Gram matrix on the smaller side
    let swap = nr < nl;
    let (rows, cols) = if swap { (nr, nl) } else { (nl, nr) };
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for (li, ri, amp) in triples {
        let (r, c) = if swap { (ri, li) } else { (li, ri) };
        m[(r, c)] += amp;
    }
    let gram = &m * m.adjoint();
    let eig = gram.symmetric_eigen();
    let mut s = 0.0;
    for &p in eig.eigenvalues.iter() {
        if p > 1e-14 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Collapse numerically degenerate eigenvalues (absolute tolerance).
pub fn collapse_degeneracies(eigenvalues: &[f64], tol: f64) -> Vec<f64> {
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    for v in sorted {
        match out.last() {
            Some(&last) if (v - last).abs() <= tol => {}
            _ => out.push(v),
        }
    }
    out
}

/// Mean ratio of consecutive level spacings min/max after collapsing
/// degeneracies and discarding a fraction of levels at each spectral edge.
pub fn r_statistic(eigenvalues: &[f64], edge_discard: f64) -> Result<f64> {
    let levels = collapse_degeneracies(eigenvalues, 1e-10);
    let skip = (levels.len() as f64 * edge_discard).floor() as usize;
    let kept = &levels[skip..levels.len() - skip];
    if kept.len() < 12 {
        return Err(ScarError::invalid("fewer than 10 spacings after discards"));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for w in kept.windows(3) {
        let s1 = w[1] - w[0];
        let s2 = w[2] - w[1];
        if s1 > 0.0 && s2 > 0.0 {
            sum += s1.min(s2) / s1.max(s2);
            count += 1;
        }
    }
    if count < 10 {
        return Err(ScarError::invalid("fewer than 10 spacings after discards"));
    }
    Ok(sum / count as f64)
}

/// Unfolded nearest-neighbour spacings and their histogram.
#[derive(Clone, Debug)]
pub struct UnfoldedSpacings {
    /// Mean-one spacings of the unfolded spectrum, edge-discarded.
    pub spacings: Vec<f64>,
    /// Histogram on [0, 4] with bin width 0.1: (bin_left, density).
    pub histogram: Vec<(f64, f64)>,
}

pub const UNFOLD_POLY_DEGREE: usize = 5;
pub const SPECTRAL_EDGE_DISCARD: f64 = 0.025;

/// Unfold a sector spectrum by fitting the cumulative staircase with a
/// degree-5 polynomial, then histogram the unit-mean spacings.
pub fn unfold_spacings(eigenvalues: &[f64]) -> Result<UnfoldedSpacings> {
    let levels = collapse_degeneracies(eigenvalues, 1e-10);
    if levels.len() < 200 {
        return Err(ScarError::invalid(format!(
            "need at least 200 levels to unfold, got {}",
            levels.len()
        )));
    }
    let lo = levels[0];
    let hi = *levels.last().unwrap();
    let scale = |e: f64| 2.0 * (e - lo) / (hi - lo) - 1.0;
    let design: Vec<Vec<f64>> = levels
        .iter()
        .map(|&e| {
            let x = scale(e);
            let mut row = Vec::with_capacity(UNFOLD_POLY_DEGREE + 1);
            let mut p = 1.0;
            for _ in 0..=UNFOLD_POLY_DEGREE {
                row.push(p);
                p *= x;
            }
            row
        })
        .collect();
    let counts: Vec<f64> = (0..levels.len()).map(|i| i as f64 + 0.5).collect();
    let coef = least_squares(&design, &counts);
    let unfolded: Vec<f64> = design
        .iter()
        .map(|row| row.iter().zip(&coef).map(|(a, b)| a * b).sum())
        .collect();
    let skip = (levels.len() as f64 * SPECTRAL_EDGE_DISCARD).floor() as usize;
    let kept = &unfolded[skip..unfolded.len() - skip];
    let mut spacings: Vec<f64> = kept.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    for s in spacings.iter_mut() {
        *s /= mean;
    }
    let mut histogram = vec![0.0f64; 40];
    for &s in &spacings {
        if (0.0..4.0).contains(&s) {
            histogram[(s / 0.1) as usize] += 1.0;
        }
    }
    let total = spacings.len() as f64;
    let histogram: Vec<(f64, f64)> = histogram
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as f64 * 0.1, c / (total * 0.1)))
        .collect();
    Ok(UnfoldedSpacings {
        spacings,
        histogram,
    })
}

/// Wigner-Dyson (GOE) surmise density P(s) = (pi s / 2) exp(-pi s^2 / 4).
pub fn wigner_surmise_pdf(s: f64) -> f64 {
    0.5 * std::f64::consts::PI * s * (-0.25 * std::f64::consts::PI * s * s).exp()
}

/// Cumulative form of the surmise: 1 - exp(-pi s^2 / 4).
pub fn wigner_surmise_cdf(s: f64) -> f64 {
    1.0 - (-0.25 * std::f64::consts::PI * s * s).exp()
}

/// Kolmogorov-Smirnov distance between empirical spacings and a reference
/// cumulative distribution.
pub fn ks_distance(spacings: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = spacings.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut worst: f64 = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        let f = cdf(s);
        worst = worst.max((f - i as f64 / n).abs());
        worst = worst.max(((i as f64 + 1.0) / n - f).abs());
    }
    worst
}
