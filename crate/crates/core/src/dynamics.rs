//! Time evolution under sparse adjacency Hamiltonians and the revival
//! diagnostics built on it. Small problems go through a dense
//! eigendecomposition; larger ones through adaptive short-step Lanczos
//! propagation with a per-step error estimate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{Basis, SpinConfig};
use crate::error::{Result, ScarError};
use crate::graph::SparseOperator;
use crate::linalg::{mean_std, tridiag_eigen_full};
use crate::symmetry::OrbitPartition;

/// Dimension up to which evolution uses a dense eigendecomposition.
pub const DENSE_EVOLVE_MAX: usize = 4000;
/// Per-segment Lanczos error budget.
const KRYLOV_STEP_TOL: f64 = 1e-11;
const KRYLOV_M: usize = 48;

/// First-revival annotation: peak fidelity and its time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevivalPeak {
    pub f0: f64,
    pub t0: f64,
}

/// Fidelity f(t) = |<psi(0)|psi(t)>|^2 on a uniform time grid.
#[derive(Clone, Debug)]
pub struct FidelitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub norm_drift: f64,
    pub revival: Option<RevivalPeak>,
    pub reflection: Option<RevivalPeak>,
}

impl FidelitySeries {
    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }
}

/// Uniform grid with the default density of 2000 samples per 3 pi window.
pub fn default_time_grid(tmax: f64) -> Vec<f64> {
    let samples = ((2000.0 * tmax / (3.0 * std::f64::consts::PI)).ceil() as usize).max(400);
    time_grid(tmax, samples)
}

pub fn time_grid(tmax: f64, samples: usize) -> Vec<f64> {
    (0..=samples)
        .map(|i| tmax * i as f64 / samples as f64)
        .collect()
}

/// Unit basis vector for a configuration.
pub fn basis_state(basis: &Basis, config: &SpinConfig) -> Result<Vec<Complex64>> {
    let idx = basis
        .index_of(config.bits())
        .ok_or_else(|| ScarError::invalid(format!("{config} not in basis")))?;
    let mut psi = vec![Complex64::ZERO; basis.len()];
    psi[idx as usize] = Complex64::ONE;
    Ok(psi)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// <psi|H|psi> for a real symmetric sparse H.
pub fn energy_expectation(h: &SparseOperator, psi: &[Complex64]) -> f64 {
    let mut hp = vec![Complex64::ZERO; psi.len()];
    h.apply_c64(psi, &mut hp);
    inner(psi, &hp).re
}

/// Dense eigendecomposition of the (unweighted, symmetric) operator.
pub struct SpectralDecomp {
    pub energies: Vec<f64>,
    vectors: nalgebra::DMatrix<f64>,
}

impl SpectralDecomp {
    pub fn new(h: &SparseOperator) -> Result<Self> {
        if h.dim() > DENSE_EVOLVE_MAX {
            return Err(ScarError::resource(format!(
                "dense eigendecomposition capped at {DENSE_EVOLVE_MAX}, dim = {}",
                h.dim()
            )));
        }
        let eig = h.to_dense().symmetric_eigen();
        Ok(SpectralDecomp {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    /// Spectral weights |<psi0|E_m>|^2 of a state.
    pub fn weights(&self, psi0: &[Complex64]) -> Vec<f64> {
        (0..self.energies.len())
            .map(|m| {
                let col = self.vectors.column(m);
                let amp: Complex64 = col.iter().zip(psi0).map(|(&q, c)| q * c.conj()).sum();
                amp.norm_sqr()
            })
            .collect()
    }

    /// Weights of a computational basis state: one row of the eigenvector
    /// matrix, squared.
    pub fn basis_weights(&self, index: usize) -> Vec<f64> {
        (0..self.energies.len())
            .map(|m| {
                let q = self.vectors[(index, m)];
                q * q
            })
            .collect()
    }
}

/// Return amplitude from spectral weights: <psi0|psi(t)> = sum_m w_m e^{-i E_m t}.
pub fn overlap_from_weights(energies: &[f64], weights: &[f64], t: f64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (e, w) in energies.iter().zip(weights) {
        acc += Complex64::from_polar(*w, -e * t);
    }
    acc
}

fn series_from_weights(energies: &[f64], weights: &[f64], times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| overlap_from_weights(energies, weights, t).norm_sqr())
        .collect()
}

/// Evolve a normalized state and record the fidelity on the given grid.
pub fn evolve(h: &SparseOperator, psi0: &[Complex64], times: &[f64]) -> Result<FidelitySeries> {
    if psi0.len() != h.dim() {
        return Err(ScarError::invalid("state dimension mismatch"));
    }
    let nrm = norm(psi0);
    if (nrm - 1.0).abs() > 1e-9 {
        return Err(ScarError::invalid(format!(
            "initial state is not normalized (|psi| = {nrm})"
        )));
    }
    let (values, norm_drift) = if h.dim() <= DENSE_EVOLVE_MAX {
        let decomp = SpectralDecomp::new(h)?;
        let w = decomp.weights(psi0);
        (series_from_weights(&decomp.energies, &w, times), 0.0)
    } else {
        let (overlaps, drift) = krylov_overlap_series(h, psi0, times)?;
        (overlaps.iter().map(|o| o.norm_sqr()).collect(), drift)
    };
    let mut series = FidelitySeries {
        times: times.to_vec(),
        values,
        norm_drift,
        revival: None,
        reflection: None,
    };
    series.revival = detect_first_revival(&series);
    if let Some(rev) = series.revival {
        series.reflection = detect_reflection_peak(&series, rev.t0);
    }
    Ok(series)
}

/// Evolve through the Lanczos path regardless of dimension. Useful when
/// many moderate-size graphs are visited in sequence (the sampler), where
/// repeated dense eigendecompositions would dominate the runtime.
pub fn evolve_krylov(
    h: &SparseOperator,
    psi0: &[Complex64],
    times: &[f64],
) -> Result<FidelitySeries> {
    if psi0.len() != h.dim() {
        return Err(ScarError::invalid("state dimension mismatch"));
    }
    let (overlaps, norm_drift) = krylov_overlap_series(h, psi0, times)?;
    let mut series = FidelitySeries {
        times: times.to_vec(),
        values: overlaps.iter().map(|o| o.norm_sqr()).collect(),
        norm_drift,
        revival: None,
        reflection: None,
    };
    series.revival = detect_first_revival(&series);
    if let Some(rev) = series.revival {
        series.reflection = detect_reflection_peak(&series, rev.t0);
    }
    Ok(series)
}

/// Propagate a state to time t (Lanczos stepping regardless of dimension);
/// mainly useful for conservation checks.
pub fn propagate(h: &SparseOperator, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    let mut psi = psi0.to_vec();
    let mut stepper = KrylovStepper::new(h, KRYLOV_M);
    let mut t_cur = 0.0;
    while t_cur < t - 1e-14 {
        let dt = stepper.step(&mut psi, t - t_cur)?;
        t_cur += dt;
    }
    Ok(psi)
}

/// Segmented Lanczos propagation evaluating <psi0|psi(t)> at grid times.
fn krylov_overlap_series(
    h: &SparseOperator,
    psi0: &[Complex64],
    times: &[f64],
) -> Result<(Vec<Complex64>, f64)> {
    let mut psi = psi0.to_vec();
    let mut out = vec![Complex64::ZERO; times.len()];
    let mut drift: f64 = 0.0;
    let mut ti = 0;
    while ti < times.len() && times[ti] <= 1e-14 {
        out[ti] = inner(psi0, &psi);
        ti += 1;
    }
    let mut t_cur = 0.0;
    let t_end = *times.last().unwrap();
    let mut stepper = KrylovStepper::new(h, KRYLOV_M);
    while ti < times.len() {
        let seg = stepper.segment(&psi, t_end - t_cur)?;
        // overlap weights of psi0 against the Krylov basis
        let w: Vec<Complex64> = stepper.basis().iter().map(|v| inner(v, psi0)).collect();
        while ti < times.len() && times[ti] <= t_cur + seg.dt + 1e-12 {
            let c = seg.coords(times[ti] - t_cur);
            let mut acc = Complex64::ZERO;
            for (wm, cm) in w.iter().zip(&c) {
                acc += wm.conj() * cm;
            }
            out[ti] = acc;
            ti += 1;
        }
        let c_end = seg.coords(seg.dt);
        stepper.assemble(&c_end, &mut psi);
        t_cur += seg.dt;
        drift = drift.max((norm(&psi) - 1.0).abs());
    }
    Ok((out, drift))
}

/// One Lanczos workspace reused across segments.
struct KrylovStepper<'a> {
    h: &'a SparseOperator,
    m_max: usize,
    basis: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    beta_res: f64,
    theta: Vec<f64>,
    s: Vec<Vec<f64>>,
}

struct Segment {
    dt: f64,
    theta: Vec<f64>,
    s: Vec<Vec<f64>>,
    s_row0: Vec<f64>,
}

impl Segment {
    /// Krylov coordinates of e^{-i tau T} e_1.
    fn coords(&self, tau: f64) -> Vec<Complex64> {
        let m = self.theta.len();
        let mut out = vec![Complex64::ZERO; m];
        for mu in 0..m {
            let phase = Complex64::from_polar(self.s_row0[mu], -self.theta[mu] * tau);
            for (row, val) in out.iter_mut().enumerate() {
                *val += self.s[mu][row] * phase;
            }
        }
        out
    }
}

impl<'a> KrylovStepper<'a> {
    fn new(h: &'a SparseOperator, m_max: usize) -> Self {
        KrylovStepper {
            h,
            m_max,
            basis: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            beta_res: 0.0,
            theta: Vec::new(),
            s: Vec::new(),
        }
    }

    fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    fn lanczos(&mut self, psi: &[Complex64]) {
        let d = psi.len();
        self.basis.clear();
        self.alpha.clear();
        self.beta.clear();
        self.beta_res = 0.0;
        let mut v = psi.to_vec();
        let n0 = norm(&v);
        v.iter_mut().for_each(|x| *x /= n0);
        self.basis.push(v);
        let mut w = vec![Complex64::ZERO; d];
        for j in 0..self.m_max {
            self.h.apply_c64(&self.basis[j], &mut w);
            let a = inner(&self.basis[j], &w).re;
            self.alpha.push(a);
            for (wi, vi) in w.iter_mut().zip(&self.basis[j]) {
                *wi -= a * vi;
            }
            if j > 0 {
                let b = self.beta[j - 1];
                let prev = &self.basis[j - 1];
                for (wi, vi) in w.iter_mut().zip(prev) {
                    *wi -= b * vi;
                }
            }
            // one reorthogonalization pass keeps the short basis clean
            for v in &self.basis {
                let c = inner(v, &w);
                if c.norm_sqr() > 0.0 {
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi -= c * vi;
                    }
                }
            }
            let b = norm(&w);
            if b < 1e-13 || j + 1 == self.m_max {
                self.beta_res = if b < 1e-13 { 0.0 } else { b };
                break;
            }
            self.beta.push(b);
            let mut next = w.clone();
            next.iter_mut().for_each(|x| *x /= b);
            self.basis.push(next);
        }
        let m = self.basis.len();
        let (theta, vecs) = tridiag_eigen_full(self.alpha[..m].to_vec(), &self.beta[..m - 1]);
        self.theta = theta;
        self.s = vecs;
    }

    fn error_estimate(&self, tau: f64) -> f64 {
        if self.beta_res == 0.0 {
            return 0.0;
        }
        let m = self.theta.len();
        // last Krylov coordinate of e^{-i tau T} e_1
        let mut last = Complex64::ZERO;
        for mu in 0..m {
            last += Complex64::from_polar(self.s[mu][0] * self.s[mu][m - 1], -self.theta[mu] * tau);
        }
        self.beta_res * last.norm()
    }

    fn segment(&mut self, psi: &[Complex64], remaining: f64) -> Result<Segment> {
        self.lanczos(psi);
        let mut dt = remaining;
        let mut halvings = 0;
        while self.error_estimate(dt) > KRYLOV_STEP_TOL {
            dt *= 0.5;
            halvings += 1;
            if halvings > 60 {
                return Err(ScarError::resource(
                    "Lanczos step control failed to reach the error budget",
                ));
            }
        }
        let m = self.theta.len();
        let s_row0: Vec<f64> = (0..m).map(|mu| self.s[mu][0]).collect();
        Ok(Segment {
            dt,
            theta: self.theta.clone(),
            s: self.s.clone(),
            s_row0,
        })
    }

    fn step(&mut self, psi: &mut [Complex64], remaining: f64) -> Result<f64> {
        let seg = self.segment(psi, remaining)?;
        let c = seg.coords(seg.dt);
        self.assemble(&c, psi);
        Ok(seg.dt)
    }

    fn assemble(&self, coords: &[Complex64], out: &mut [Complex64]) {
        for o in out.iter_mut() {
            *o = Complex64::ZERO;
        }
        for (v, &c) in self.basis.iter().zip(coords) {
            for (oi, vi) in out.iter_mut().zip(v) {
                *oi += c * vi;
            }
        }
    }
}

/// First-revival detection. The t = 0 peak and the short-time shoulder are
/// excluded by requiring the series to dip below 0.5 first; among the
/// post-dip local maxima, the earliest one within rounding of the highest
/// counts as the first revival (this keeps the reflection peak at half the
/// period from shadowing the revival itself). Peak positions are refined by
/// a local quadratic fit.
pub fn detect_first_revival(series: &FidelitySeries) -> Option<RevivalPeak> {
    let peaks = post_dip_peaks(series, 0, series.values.len());
    if peaks.is_empty() {
        return None;
    }
    let hmax = peaks.iter().map(|p| p.f0).fold(f64::MIN, f64::max);
    peaks
        .into_iter()
        .find(|p| p.f0 >= (hmax / 2.0).max(hmax - 1e-9))
}

fn post_dip_peaks(series: &FidelitySeries, start: usize, end: usize) -> Vec<RevivalPeak> {
    let v = &series.values;
    let t = &series.times;
    let mut dipped = false;
    let mut peaks = Vec::new();
    for i in start.max(1)..end.saturating_sub(1) {
        if v[i] < 0.5 {
            dipped = true;
        }
        if dipped && v[i] > v[i - 1] && v[i] >= v[i + 1] {
            peaks.push(refine_peak(t, v, i));
        }
    }
    peaks
}

fn refine_peak(t: &[f64], v: &[f64], i: usize) -> RevivalPeak {
    let (ym, y0, yp) = (v[i - 1], v[i], v[i + 1]);
    let denom = ym - 2.0 * y0 + yp;
    if denom.abs() < 1e-300 {
        return RevivalPeak { f0: y0, t0: t[i] };
    }
    let delta = 0.5 * (ym - yp) / denom;
    let delta = delta.clamp(-1.0, 1.0);
    let dt = t[1] - t[0];
    let t0 = t[i] + delta * dt;
    let f0 = y0 - 0.25 * (ym - yp) * delta;
    RevivalPeak { f0, t0 }
}

/// The small peak near half the revival period, searched for in the window
/// [0.3 T0, 0.7 T0].
pub fn detect_reflection_peak(series: &FidelitySeries, t0: f64) -> Option<RevivalPeak> {
    let t = &series.times;
    let v = &series.values;
    let lo = 0.3 * t0;
    let hi = 0.7 * t0;
    let mut best: Option<RevivalPeak> = None;
    for i in 1..t.len() - 1 {
        if t[i] < lo || t[i] > hi {
            continue;
        }
        if v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let peak = refine_peak(t, v, i);
            if best.map_or(true, |b| peak.f0 > b.f0) {
                best = Some(peak);
            }
        }
    }
    best
}

/// ln(f0)/N, the system-size-intensive revival measure.
pub fn fidelity_density(f0: f64, n: usize) -> f64 {
    if f0 == 0.0 {
        return f64::NEG_INFINITY;
    }
    f0.ln() / n as f64
}

/// Evolve with an automatically extended horizon (3 pi doubled up to 24 pi)
/// until a revival is detected.
pub fn evolve_auto_horizon(h: &SparseOperator, psi0: &[Complex64]) -> Result<FidelitySeries> {
    let mut horizon = 3.0 * std::f64::consts::PI;
    let max_horizon = 24.0 * std::f64::consts::PI;
    loop {
        let series = evolve(h, psi0, &default_time_grid(horizon))?;
        if series.revival.is_some() || horizon >= max_horizon {
            return Ok(series);
        }
        horizon *= 2.0;
    }
}

/// Per-initial-state revival record.
#[derive(Clone, Debug)]
pub struct ScanRecord {
    pub representative: SpinConfig,
    pub orbit_size: usize,
    pub revival: Option<RevivalPeak>,
}

/// Revival survey over all computational basis states, one representative
/// per translation orbit.
#[derive(Clone, Debug)]
pub struct RevivalScan {
    pub records: Vec<ScanRecord>,
    pub best: Option<ScanRecord>,
    pub mean_f0: f64,
    pub std_f0: f64,
    pub mean_t: f64,
    pub std_t: f64,
    /// Basis states whose series never produced a detectable revival.
    pub undetected: usize,
}

/// Survey revivals from every translation orbit representative. Aggregates
/// are weighted by orbit size, i.e. they are averages over all basis states.
pub fn scan_initial_states(
    h: &SparseOperator,
    basis: &Basis,
    orbits: &OrbitPartition,
    horizon: f64,
) -> Result<RevivalScan> {
    let times = default_time_grid(horizon);
    let records: Vec<ScanRecord> = if h.dim() <= DENSE_EVOLVE_MAX {
        let decomp = SpectralDecomp::new(h)?;
        orbits
            .reps
            .par_iter()
            .zip(orbits.period.par_iter())
            .map(|(&rep, &period)| {
                let w = decomp.basis_weights(rep as usize);
                let values = series_from_weights(&decomp.energies, &w, &times);
                let series = FidelitySeries {
                    times: times.clone(),
                    values,
                    norm_drift: 0.0,
                    revival: None,
                    reflection: None,
                };
                ScanRecord {
                    representative: basis.config(rep as usize),
                    orbit_size: period as usize,
                    revival: detect_first_revival(&series),
                }
            })
            .collect()
    } else {
        orbits
            .reps
            .par_iter()
            .zip(orbits.period.par_iter())
            .map(|(&rep, &period)| -> Result<ScanRecord> {
                let psi0 = basis_state(basis, &basis.config(rep as usize))?;
                let series = evolve(h, &psi0, &times)?;
                Ok(ScanRecord {
                    representative: basis.config(rep as usize),
                    orbit_size: period as usize,
                    revival: series.revival,
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut f0s = Vec::new();
    let mut t0s = Vec::new();
    let mut undetected = 0usize;
    for rec in &records {
        match rec.revival {
            Some(peak) => {
                for _ in 0..rec.orbit_size {
                    f0s.push(peak.f0);
                    t0s.push(peak.t0);
                }
            }
            None => undetected += rec.orbit_size,
        }
    }
    let best = records
        .iter()
        .filter(|r| r.revival.is_some())
        .max_by(|a, b| {
            a.revival
                .unwrap()
                .f0
                .partial_cmp(&b.revival.unwrap().f0)
                .unwrap()
        })
        .cloned();
    let (mean_f0, std_f0) = mean_std(&f0s);
    let (mean_t, std_t) = mean_std(&t0s);
    Ok(RevivalScan {
        records,
        best,
        mean_f0,
        std_f0,
        mean_t,
        std_t,
        undetected,
    })
}
