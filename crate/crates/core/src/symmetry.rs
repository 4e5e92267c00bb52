//! Translation and inversion symmetry sectors. Sector bases are built as
//! explicit sparse isometries from the momentum (and, at k = 0 and k = N/2,
//! parity) eigenbasis into the full constrained space, so projected
//! Hamiltonians are manifestly Hermitian and sector spectra can be compared
//! against the full spectrum directly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::Basis;
use crate::error::{Result, ScarError};
use crate::graph::SparseOperator;

/// Partition of a translation-invariant basis into cyclic orbits.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    /// Basis index of each orbit's representative (minimal word).
    pub reps: Vec<u32>,
    /// Orbit id of every basis element.
    pub orbit_of: Vec<u32>,
    /// Translation count taking the representative to this element.
    pub shift_of: Vec<u8>,
    /// Orbit period (divides N).
    pub period: Vec<u8>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_size(&self, orbit: usize) -> usize {
        self.period[orbit] as usize
    }
}

/// Group a basis into translation orbits. The constraint must be
/// translation invariant (checked: every translate must be present).
pub fn translation_orbits(basis: &Basis) -> Result<OrbitPartition> {
    let n = basis.n_sites();
    let d = basis.len();
    let mut orbit_of = vec![u32::MAX; d];
    let mut shift_of = vec![0u8; d];
    let mut reps = Vec::new();
    let mut period = Vec::new();
    for i in 0..d {
        if orbit_of[i] != u32::MAX {
            continue;
        }
        let rep = basis.config(i);
        let orbit_id = reps.len() as u32;
        let mut p = 0usize;
        let mut cur = rep;
        loop {
            let idx = basis.index_of(cur.bits()).ok_or_else(|| {
                ScarError::contract("basis is not translation invariant")
            })? as usize;
            if orbit_of[idx] == u32::MAX {
                orbit_of[idx] = orbit_id;
                shift_of[idx] = p as u8;
            }
            p += 1;
            cur = cur.translated(1);
            if cur == rep {
                break;
            }
            if p > n {
                return Err(ScarError::contract("translation orbit failed to close"));
            }
        }
        reps.push(i as u32);
        period.push(p as u8);
    }
    // representatives are minimal by construction: the scan is ascending
    Ok(OrbitPartition {
        reps,
        orbit_of,
        shift_of,
        period,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(&self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// A momentum (optionally parity-resolved) sector basis: each column is a
/// normalized sparse vector in the full constrained space.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub k: usize,
    pub parity: Option<Parity>,
    pub n_sites: usize,
    columns: Vec<Vec<(u32, Complex64)>>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &[(u32, Complex64)] {
        &self.columns[i]
    }

    /// Coordinates of a full-space vector in this sector: c_i = <v_i|psi>.
    pub fn project(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|&(idx, w)| w.conj() * psi[idx as usize])
                    .sum()
            })
            .collect()
    }

    /// Map sector coordinates back to the full space.
    pub fn lift(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let dim_full = self
            .columns
            .iter()
            .flat_map(|c| c.iter().map(|&(i, _)| i as usize + 1))
            .max()
            .unwrap_or(0);
        let mut out = vec![Complex64::ZERO; dim_full];
        self.lift_into(coords, &mut out);
        out
    }

    pub fn lift_into(&self, coords: &[Complex64], out: &mut [Complex64]) {
        for v in out.iter_mut() {
            *v = Complex64::ZERO;
        }
        for (col, &c) in self.columns.iter().zip(coords) {
            for &(idx, w) in col {
                out[idx as usize] += c * w;
            }
        }
    }
}

/// Build the sector basis for momentum index k (K = 2 pi k / N), optionally
/// resolving inversion parity. Parity is only available at k = 0 and
/// k = N/2, where translation and inversion commute on momentum states.
pub fn sector_basis(
    basis: &Basis,
    orbits: &OrbitPartition,
    k: usize,
    parity: Option<Parity>,
) -> Result<SectorBasis> {
    let n = basis.n_sites();
    if k >= n {
        return Err(ScarError::invalid(format!("momentum index {k} >= N={n}")));
    }
    let parity_allowed = k == 0 || (n % 2 == 0 && k == n / 2);
    if parity.is_some() && !parity_allowed {
        return Err(ScarError::invalid(format!(
            "parity resolution only at k=0 or k=N/2, got k={k}"
        )));
    }
    let momentum_vector = |orbit: usize| -> Option<Vec<(u32, Complex64)>> {
        let p = orbits.period[orbit] as usize;
        if (k * p) % n != 0 {
            return None;
        }
        let rep_idx = orbits.reps[orbit] as usize;
        let rep = basis.config(rep_idx);
        let norm = (p as f64).sqrt();
        let mut col = Vec::with_capacity(p);
        let mut cur = rep;
        for r in 0..p {
            let idx = basis.index_of(cur.bits()).unwrap();
            let phase = phase_factor(k, r, n) / norm;
            col.push((idx, phase));
            cur = cur.translated(1);
        }
        col.sort_by_key(|&(i, _)| i);
        Some(col)
    };

    let mut columns = Vec::new();
    match parity {
        None => {
            for orbit in 0..orbits.orbit_count() {
                if let Some(col) = momentum_vector(orbit) {
                    columns.push(col);
                }
            }
        }
        Some(par) => {
            let sign = par.sign();
            let mut done = vec![false; orbits.orbit_count()];
            for orbit in 0..orbits.orbit_count() {
                if done[orbit] {
                    continue;
                }
                let Some(col) = momentum_vector(orbit) else {
                    continue;
                };
                // image of the momentum vector under spatial inversion
                let mut img: Vec<(u32, Complex64)> = col
                    .iter()
                    .map(|&(idx, w)| {
                        let refl = basis.config(idx as usize).reflected();
                        (basis.index_of(refl.bits()).unwrap(), w)
                    })
                    .collect();
                img.sort_by_key(|&(i, _)| i);
                let partner_orbit = orbits.orbit_of[img[0].0 as usize] as usize;
                done[orbit] = true;
                done[partner_orbit] = true;
                let combined = add_sparse(&col, &img, sign);
                let norm2: f64 = combined.iter().map(|&(_, w)| w.norm_sqr()).sum();
                if norm2 < 1e-20 {
                    continue;
                }
                let norm = norm2.sqrt();
                columns.push(
                    combined
                        .into_iter()
                        .map(|(i, w)| (i, w / norm))
                        .collect(),
                );
            }
        }
    }
    Ok(SectorBasis {
        k,
        parity,
        n_sites: n,
        columns,
    })
}

fn phase_factor(k: usize, r: usize, n: usize) -> Complex64 {
    // exact values at the real momenta so those sectors stay exactly real
    if k == 0 {
        return Complex64::ONE;
    }
    if 2 * k == n {
        return if r % 2 == 0 {
            Complex64::ONE
        } else {
            -Complex64::ONE
        };
    }
    let angle = -2.0 * std::f64::consts::PI * (k * r % n) as f64 / n as f64;
    Complex64::from_polar(1.0, angle)
}

fn add_sparse(
    a: &[(u32, Complex64)],
    b: &[(u32, Complex64)],
    sign: f64,
) -> Vec<(u32, Complex64)> {
    let mut map: fnv::FnvHashMap<u32, Complex64> = fnv::FnvHashMap::default();
    for &(i, w) in a {
        *map.entry(i).or_insert(Complex64::ZERO) += w;
    }
    for &(i, w) in b {
        *map.entry(i).or_insert(Complex64::ZERO) += sign * w;
    }
    let mut out: Vec<(u32, Complex64)> = map
        .into_iter()
        .filter(|(_, w)| w.norm_sqr() > 1e-24)
        .collect();
    out.sort_by_key(|&(i, _)| i);
    out
}

/// Sector Hamiltonian: real symmetric at the real momenta, complex
/// Hermitian otherwise.
pub enum SectorMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SectorMatrix::Real(m) => m.nrows(),
            SectorMatrix::Complex(m) => m.nrows(),
        }
    }

    /// Eigenvalues, ascending (no eigenvector accumulation).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = match self {
            SectorMatrix::Real(m) => m.symmetric_eigenvalues().iter().copied().collect(),
            SectorMatrix::Complex(m) => m.symmetric_eigenvalues().iter().copied().collect(),
        };
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Full eigen-decomposition: (eigenvalues ascending, eigenvectors as
    /// complex sector-coordinate columns).
    pub fn eigenpairs(&self) -> (Vec<f64>, Vec<Vec<Complex64>>) {
        match self {
            SectorMatrix::Real(m) => {
                let eig = m.clone().symmetric_eigen();
                let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
                let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
                let vecs = idx
                    .iter()
                    .map(|&i| {
                        eig.eigenvectors
                            .column(i)
                            .iter()
                            .map(|&x| Complex64::new(x, 0.0))
                            .collect()
                    })
                    .collect();
                (vals, vecs)
            }
            SectorMatrix::Complex(m) => {
                let eig = m.clone().symmetric_eigen();
                let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
                let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
                let vecs = idx
                    .iter()
                    .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
                    .collect();
                (vals, vecs)
            }
        }
    }
}

/// Project the unweighted adjacency Hamiltonian into a symmetry sector.
///
/// Every full-space index appears in at most one column of a given sector,
/// so a reverse index map makes the projection linear in the number of
/// graph edges touched.
pub fn project_sector(
    h: &SparseOperator,
    basis: &Basis,
    sector: &SectorBasis,
) -> Result<SectorMatrix> {
    if h.dim() != basis.len() {
        return Err(ScarError::invalid("graph/basis dimension mismatch"));
    }
    let d = sector.dim();
    let real = sector.k == 0 || 2 * sector.k == sector.n_sites;
    let mut owner: Vec<Option<(u32, Complex64)>> = vec![None; h.dim()];
    for (col, column) in sector.columns.iter().enumerate() {
        for &(idx, w) in column {
            debug_assert!(owner[idx as usize].is_none());
            owner[idx as usize] = Some((col as u32, w));
        }
    }
    let mut accum = vec![Complex64::ZERO; d * d];
    for (col, column) in sector.columns.iter().enumerate() {
        for &(idx, w) in column {
            for &j in h.neighbors(idx as usize) {
                if let Some((row, wj)) = owner[j as usize] {
                    accum[row as usize * d + col] += wj.conj() * w;
                }
            }
        }
    }
    if real {
        let mut m = DMatrix::<f64>::zeros(d, d);
        for row in 0..d {
            for col in 0..d {
                let v = accum[row * d + col];
                debug_assert!(v.im.abs() < 1e-10);
                m[(row, col)] = v.re;
            }
        }
        let defect = (&m - m.transpose()).abs().max();
        if defect > 1e-9 {
            return Err(ScarError::contract(format!(
                "sector matrix not symmetric (defect {defect})"
            )));
        }
        Ok(SectorMatrix::Real(m))
    } else {
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for row in 0..d {
            for col in 0..d {
                m[(row, col)] = accum[row * d + col];
            }
        }
        let defect = (&m - m.adjoint()).map(|x| x.norm()).max();
        if defect > 1e-9 {
            return Err(ScarError::contract(format!(
                "sector matrix not Hermitian (defect {defect})"
            )));
        }
        Ok(SectorMatrix::Complex(m))
    }
}
