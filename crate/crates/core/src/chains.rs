//! Effective one-dimensional tight-binding chains and their dynamics: the
//! hypercube ladder, two glued ladders, star sectors, bridged middle
//! couplings, and finite-size extrapolation of revival observables.
//!
//! Site conventions: a chain with L couplings has L + 1 sites; site 0 is
//! the corner the dynamics usually starts from. All constructors take the
//! per-cube dimension n (total spins N = (d+1) n for a star of d+1 cubes).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    detect_first_revival, detect_reflection_peak, FidelitySeries, RevivalPeak,
};
use crate::error::{Result, ScarError};
use crate::linalg::{bessel_j_sequence, least_squares, tridiag_eigen_weights};

/// Largest chain evolved through the dense eigensolver; longer chains go
/// through Chebyshev stepping.
pub const CHAIN_EIGEN_MAX: usize = 10_000;
/// Largest supported chain (sites).
pub const CHAIN_SITE_CAP: usize = 200_001;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Hypercube,
    TwoHypercube,
    StarSymmetric { d: u32 },
    StarAntisymmetric { d: u32 },
    BridgedMiddle { bridges: u32 },
    Custom,
}

/// A 1D tight-binding chain with zero diagonal, described by its couplings.
#[derive(Clone, Debug)]
pub struct TbChain {
    pub couplings: Vec<f64>,
    pub kind: ChainKind,
}

impl TbChain {
    pub fn sites(&self) -> usize {
        self.couplings.len() + 1
    }
}

fn ladder(n: usize) -> Vec<f64> {
    (1..=n).map(|j| ((j * (n - j + 1)) as f64).sqrt()).collect()
}

/// The single-hypercube reduction: couplings sqrt(j (n - j + 1)).
pub fn hypercube_chain(n: usize) -> TbChain {
    TbChain {
        couplings: ladder(n),
        kind: ChainKind::Hypercube,
    }
}

/// Two glued hypercube ladders; the coupling list is palindromic.
pub fn two_hypercube_chain(n: usize) -> TbChain {
    let half = ladder(n);
    let mut couplings = half.clone();
    couplings.extend(half.iter().rev());
    TbChain {
        couplings,
        kind: ChainKind::TwoHypercube,
    }
}

/// Symmetric/antisymmetric sector chains of d+1 hypercubes joined at one
/// vertex: the symmetric sector scales the last coupling by sqrt(d+1), the
/// antisymmetric sectors (d-fold degenerate) drop it.
pub fn star_sector_chains(n: usize, d: u32) -> (TbChain, TbChain) {
    let mut sym = ladder(n);
    if let Some(last) = sym.last_mut() {
        *last *= ((d + 1) as f64).sqrt();
    }
    let mut anti = ladder(n);
    anti.pop();
    (
        TbChain {
            couplings: sym,
            kind: ChainKind::StarSymmetric { d },
        },
        TbChain {
            couplings: anti,
            kind: ChainKind::StarAntisymmetric { d },
        },
    )
}

/// Two glued ladders with both middle couplings retuned to sqrt(n + bridges)
/// by translation-invariant dimension-2 bridges.
pub fn bridged_middle_chain(n: usize, bridges: u32) -> Result<TbChain> {
    if n % 2 != 0 {
        return Err(ScarError::invalid("bridged chain needs even cube dimension"));
    }
    if bridges as usize > n || bridges % 2 != 0 {
        return Err(ScarError::invalid(
            "bridge count must be even and at most the cube dimension",
        ));
    }
    let mut couplings = two_hypercube_chain(n).couplings;
    let mid = (n as f64 + bridges as f64).sqrt();
    couplings[n - 1] = mid;
    couplings[n] = mid;
    Ok(TbChain {
        couplings,
        kind: ChainKind::BridgedMiddle { bridges },
    })
}

/// Symmetric-sector chain of a bridged star: hypercube ladder with the last
/// coupling sqrt((d+1)(n + bridges)). d = 1, bridges = 0 reduces to the
/// symmetric sector of the plain two-hypercube model.
pub fn star_symmetric_bridged_chain(n: usize, d: u32, bridges: u32) -> Result<TbChain> {
    if bridges as usize > n || bridges % 2 != 0 {
        return Err(ScarError::invalid(
            "bridge count must be even and at most the cube dimension",
        ));
    }
    let mut couplings = ladder(n);
    if let Some(last) = couplings.last_mut() {
        *last = ((d as f64 + 1.0) * (n as f64 + bridges as f64)).sqrt();
    }
    Ok(TbChain {
        couplings,
        kind: ChainKind::StarSymmetric { d },
    })
}

/// Eigen-decomposed chain dynamics from a fixed site, for exact evaluation
/// at arbitrary times and sub-grid peak refinement.
pub struct ChainPropagator {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl ChainPropagator {
    pub fn new(chain: &TbChain, site: usize) -> Result<Self> {
        if site >= chain.sites() {
            return Err(ScarError::invalid("start site out of range"));
        }
        if chain.sites() > CHAIN_EIGEN_MAX {
            return Err(ScarError::resource(
                "exact evaluation needs the eigensolver path",
            ));
        }
        let (energies, weights) =
            tridiag_eigen_weights(vec![0.0; chain.sites()], &chain.couplings, site);
        Ok(ChainPropagator { energies, weights })
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (e, w) in self.energies.iter().zip(&self.weights) {
            acc += Complex64::from_polar(*w, -e * t);
        }
        acc
    }

    pub fn fidelity(&self, t: f64) -> f64 {
        self.amplitude(t).norm_sqr()
    }

    /// Golden-section maximization of the fidelity in a window around a
    /// grid-level peak guess.
    pub fn refine_peak(&self, t_guess: f64, window: f64) -> RevivalPeak {
        let mut a = (t_guess - window).max(0.0);
        let mut b = t_guess + window;
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = self.fidelity(c);
        let mut fd = self.fidelity(d);
        for _ in 0..200 {
            if (b - a).abs() < 1e-13 * t_guess.max(1.0) {
                break;
            }
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = self.fidelity(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = self.fidelity(d);
            }
        }
        let t0 = 0.5 * (a + b);
        RevivalPeak {
            f0: self.fidelity(t0),
            t0,
        }
    }

    /// First revival on a grid, refined to machine-level time resolution.
    pub fn first_revival(&self, horizon: f64, samples: usize) -> Option<RevivalPeak> {
        let times: Vec<f64> = (0..=samples)
            .map(|i| horizon * i as f64 / samples as f64)
            .collect();
        let values: Vec<f64> = times.iter().map(|&t| self.fidelity(t)).collect();
        let series = FidelitySeries {
            times: times.clone(),
            values,
            norm_drift: 0.0,
            revival: None,
            reflection: None,
        };
        let coarse = detect_first_revival(&series)?;
        Some(self.refine_peak(coarse.t0, horizon / samples as f64))
    }
}

/// Return amplitude <site| e^{-iHt} |site> on the grid.
pub fn return_amplitude(chain: &TbChain, site: usize, times: &[f64]) -> Result<Vec<Complex64>> {
    if site >= chain.sites() {
        return Err(ScarError::invalid(format!(
            "start site {site} out of range for {} sites",
            chain.sites()
        )));
    }
    if chain.sites() > CHAIN_SITE_CAP {
        return Err(ScarError::resource(format!(
            "chain length {} exceeds the supported cap",
            chain.sites()
        )));
    }
    if chain.sites() <= CHAIN_EIGEN_MAX {
        let (energies, weights) =
            tridiag_eigen_weights(vec![0.0; chain.sites()], &chain.couplings, site);
        Ok(times
            .iter()
            .map(|&t| {
                let mut acc = Complex64::ZERO;
                for (e, w) in energies.iter().zip(&weights) {
                    acc += Complex64::from_polar(*w, -e * t);
                }
                acc
            })
            .collect())
    } else {
        chebyshev_amplitudes(chain, site, times)
    }
}

/// Single-particle fidelity from a corner (or any) site of the chain.
pub fn evolve_chain(chain: &TbChain, start_site: usize, times: &[f64]) -> Result<FidelitySeries> {
    let amps = return_amplitude(chain, start_site, times)?;
    let mut series = FidelitySeries {
        times: times.to_vec(),
        values: amps.iter().map(|a| a.norm_sqr()).collect(),
        norm_drift: 0.0,
        revival: None,
        reflection: None,
    };
    series.revival = detect_first_revival(&series);
    if let Some(rev) = series.revival {
        series.reflection = detect_reflection_peak(&series, rev.t0);
    }
    Ok(series)
}

/// Matrix-free Chebyshev propagation for long chains. The spectrum is
/// bounded by Gershgorin discs; expansion coefficients are Bessel functions
/// of the scaled step.
fn chebyshev_amplitudes(
    chain: &TbChain,
    site: usize,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    let l = chain.sites();
    let b = &chain.couplings;
    let mut radius = 0.0f64;
    for i in 0..l {
        let left = if i > 0 { b[i - 1].abs() } else { 0.0 };
        let right = if i < l - 1 { b[i].abs() } else { 0.0 };
        radius = radius.max(left + right);
    }
    if radius == 0.0 {
        radius = 1.0;
    }
    let apply_scaled = |x: &[Complex64], y: &mut [Complex64]| {
        for i in 0..l {
            let mut acc = Complex64::ZERO;
            if i > 0 {
                acc += b[i - 1] * x[i - 1];
            }
            if i < l - 1 {
                acc += b[i] * x[i + 1];
            }
            y[i] = acc / radius;
        }
    };
    let mut psi = vec![Complex64::ZERO; l];
    psi[site] = Complex64::ONE;
    let mut out = Vec::with_capacity(times.len());
    let mut t_cur = 0.0;
    let mut t0 = vec![Complex64::ZERO; l];
    let mut t1 = vec![Complex64::ZERO; l];
    let mut t2 = vec![Complex64::ZERO; l];
    let mut acc = vec![Complex64::ZERO; l];
    for &t in times {
        let dt = t - t_cur;
        if dt > 1e-14 {
            let x = dt * radius;
            let kmax = (x + 12.0 * x.cbrt() + 24.0).ceil() as usize;
            let bessel = bessel_j_sequence(x, kmax);
            t0.copy_from_slice(&psi);
            apply_scaled(&t0, &mut t1);
            for v in acc.iter_mut() {
                *v = Complex64::ZERO;
            }
            for (a, v) in acc.iter_mut().zip(&t0) {
                *a += bessel[0] * v;
            }
            let mi = Complex64::new(0.0, -1.0);
            let mut phase = mi;
            for (a, v) in acc.iter_mut().zip(&t1) {
                *a += 2.0 * bessel[1] * phase * v;
            }
            for k in 2..=kmax {
                // T_{k} = 2 H~ T_{k-1} - T_{k-2}
                apply_scaled(&t1, &mut t2);
                for i in 0..l {
                    t2[i] = 2.0 * t2[i] - t0[i];
                }
                std::mem::swap(&mut t0, &mut t1);
                std::mem::swap(&mut t1, &mut t2);
                phase *= mi;
                let c = 2.0 * bessel[k];
                if c.abs() > 1e-18 {
                    for (a, v) in acc.iter_mut().zip(&t1) {
                        *a += c * phase * v;
                    }
                }
            }
            psi.copy_from_slice(&acc);
            t_cur = t;
        }
        out.push(psi[site]);
    }
    Ok(out)
}

/// Functional forms for finite-size extrapolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitForm {
    /// a + b/N + c/N^2
    InversePoly,
    /// a + b/sqrt(N) + c/N
    InverseSqrt,
}

impl FitForm {
    fn design_row(&self, n: f64) -> Vec<f64> {
        match self {
            FitForm::InversePoly => vec![1.0, 1.0 / n, 1.0 / (n * n)],
            FitForm::InverseSqrt => vec![1.0, 1.0 / n.sqrt(), 1.0 / n],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FitForm::InversePoly => "a + b/N + c/N^2",
            FitForm::InverseSqrt => "a + b/sqrt(N) + c/N",
        }
    }
}

/// Least-squares extrapolation of (N, value) samples to N -> infinity,
/// with a resampling error estimate on the asymptote.
#[derive(Clone, Debug)]
pub struct ScalingFit {
    pub asymptote: f64,
    pub std_error: f64,
    pub coefficients: Vec<f64>,
    pub form: FitForm,
}

pub fn extrapolate_scaling(points: &[(f64, f64)], form: FitForm) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(ScarError::invalid("need at least 4 points to extrapolate"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if sorted.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(ScarError::invalid("sample sizes must be strictly increasing"));
    }
    let fit = |pts: &[(f64, f64)]| -> Vec<f64> {
        let design: Vec<Vec<f64>> = pts.iter().map(|&(n, _)| form.design_row(n)).collect();
        let y: Vec<f64> = pts.iter().map(|&(_, v)| v).collect();
        least_squares(&design, &y)
    };
    let coefficients = fit(&sorted);
    // bootstrap over points
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
    let mut asymptotes = Vec::with_capacity(200);
    for _ in 0..200 {
        let resample: Vec<(f64, f64)> = (0..sorted.len())
            .map(|_| sorted[rng.random_range(0..sorted.len())])
            .collect();
        // a degenerate resample (too few distinct N) cannot be fit
        let mut distinct: Vec<f64> = resample.iter().map(|p| p.0).collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        if distinct.len() < 3 {
            continue;
        }
        asymptotes.push(fit(&resample)[0]);
    }
    let (_, std_error) = crate::linalg::mean_std(&asymptotes);
    Ok(ScalingFit {
        asymptote: coefficients[0],
        std_error,
        coefficients,
        form,
    })
}

/// Revival observables of the symmetric-sector star chain with bridges,
/// evolved from the corner site.
pub fn star_symmetric_scan(d: u32, bridges: u32, n: usize, times: &[f64]) -> Result<FidelitySeries> {
    let chain = star_symmetric_bridged_chain(n, d, bridges)?;
    evolve_chain(&chain, 0, times)
}

/// Sector return amplitudes of a palindromic chain split at the middle
/// site: full-chain fidelity from the corner recombines as
/// |(A_sym + A_anti)/2|^2.
pub fn sector_amplitudes(
    sym: &TbChain,
    anti: &TbChain,
    times: &[f64],
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    Ok((
        return_amplitude(sym, 0, times)?,
        return_amplitude(anti, 0, times)?,
    ))
}

/// First revival of a sector's own return probability.
pub fn sector_period(chain: &TbChain, times: &[f64]) -> Result<Option<RevivalPeak>> {
    Ok(evolve_chain(chain, 0, times)?.revival)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::time_grid;
    use std::f64::consts::PI;

    #[test]
    fn constructor_examples() {
        assert_eq!(hypercube_chain(1).couplings, vec![1.0]);
        let c2 = hypercube_chain(2).couplings;
        assert!((c2[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((c2[1] - 2f64.sqrt()).abs() < 1e-15);
        let c4 = hypercube_chain(4).couplings;
        let expect = [2.0, 6f64.sqrt(), 6f64.sqrt(), 2.0];
        for (a, b) in c4.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let two3 = two_hypercube_chain(3).couplings;
        let expect3 = [3f64.sqrt(), 2.0, 3f64.sqrt(), 3f64.sqrt(), 2.0, 3f64.sqrt()];
        for (a, b) in two3.iter().zip(expect3) {
            assert!((a - b).abs() < 1e-15);
        }
        // palindromic for all n
        for n in 1..20 {
            let c = two_hypercube_chain(n).couplings;
            let rev: Vec<f64> = c.iter().rev().copied().collect();
            assert_eq!(c, rev);
        }
    }

    #[test]
    fn star_sector_examples() {
        let (sym, anti) = star_sector_chains(2, 1);
        assert!((sym.couplings[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((sym.couplings[1] - 2.0).abs() < 1e-15);
        assert_eq!(anti.couplings.len(), 1);
        assert!((anti.couplings[0] - 2f64.sqrt()).abs() < 1e-15);

        let (sym, anti) = star_sector_chains(3, 2);
        let expect_sym = [3f64.sqrt(), 2.0, 3.0];
        for (a, b) in sym.couplings.iter().zip(expect_sym) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(anti.couplings.len(), 2);
    }

    #[test]
    fn bridged_chain_examples() {
        let plain = bridged_middle_chain(6, 0).unwrap();
        assert_eq!(plain.couplings, two_hypercube_chain(6).couplings);
        let b2 = bridged_middle_chain(4, 2).unwrap();
        assert!((b2.couplings[3] - 6f64.sqrt()).abs() < 1e-15);
        assert!((b2.couplings[4] - 6f64.sqrt()).abs() < 1e-15);
        let top = bridged_middle_chain(8, 8).unwrap();
        assert!((top.couplings[7] - 4.0).abs() < 1e-15);
        assert!(bridged_middle_chain(8, 3).is_err());
        assert!(bridged_middle_chain(8, 10).is_err());
    }

    #[test]
    fn hypercube_chain_revives_perfectly() {
        for n in [3usize, 8, 17] {
            let chain = hypercube_chain(n);
            let series = evolve_chain(&chain, 0, &time_grid(3.0 * PI, 3000)).unwrap();
            let peak = series.revival.unwrap();
            assert!((peak.f0 - 1.0).abs() < 1e-10, "n={n} f0={}", peak.f0);
            assert!((peak.t0 - PI).abs() < 1e-3, "n={n} t0={}", peak.t0);
        }
    }

    #[test]
    fn mirror_symmetry_of_palindromic_chains() {
        let chain = two_hypercube_chain(9);
        let times = time_grid(8.0, 400);
        let a = evolve_chain(&chain, 0, &times).unwrap();
        let b = evolve_chain(&chain, chain.sites() - 1, &times).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn spectrum_of_the_ladder_is_integer() {
        let chain = hypercube_chain(9);
        let (vals, _) =
            crate::linalg::tridiag_eigen_full(vec![0.0; chain.sites()], &chain.couplings);
        for (m, v) in vals.iter().enumerate() {
            let expect = -9.0 + 2.0 * m as f64;
            assert!((v - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn sector_recombination_identity() {
        for n in [4usize, 7, 12] {
            let full = two_hypercube_chain(n);
            let (sym, anti) = star_sector_chains(n, 1);
            let times = time_grid(9.0, 600);
            let direct = evolve_chain(&full, 0, &times).unwrap();
            let (a_sym, a_anti) = sector_amplitudes(&sym, &anti, &times).unwrap();
            for i in 0..times.len() {
                let rec = ((a_sym[i] + a_anti[i]) / 2.0).norm_sqr();
                assert!(
                    (rec - direct.values[i]).abs() < 1e-10,
                    "n={n} t={} {} vs {}",
                    times[i],
                    rec,
                    direct.values[i]
                );
            }
        }
    }

    #[test]
    fn chebyshev_matches_eigensolver() {
        let chain = two_hypercube_chain(400);
        let times = time_grid(7.0, 140);
        let eig = return_amplitude(&chain, 0, &times).unwrap();
        let cheb = chebyshev_amplitudes(&chain, 0, &times).unwrap();
        for (a, b) in eig.iter().zip(&cheb) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn large_chain_revival_value() {
        let chain = two_hypercube_chain(512);
        let series = evolve_chain(&chain, 0, &time_grid(3.0 * PI, 6000)).unwrap();
        let peak = series.revival.unwrap();
        assert!((peak.f0 - 0.7163).abs() < 5e-4, "f0 = {}", peak.f0);
        assert!((peak.t0 - 6.17).abs() < 0.02, "t0 = {}", peak.t0);
        let refl = series.reflection.unwrap();
        assert!(refl.f0 > 0.0 && refl.f0 < 0.1);
        assert!((refl.t0 - peak.t0 / 2.0).abs() < 0.5);
    }

    #[test]
    fn extrapolation_recovers_constants() {
        let pts: Vec<(f64, f64)> = (4..10).map(|i| ((1 << i) as f64, 0.25)).collect();
        let fit = extrapolate_scaling(&pts, FitForm::InversePoly).unwrap();
        assert!((fit.asymptote - 0.25).abs() < 1e-10);
        assert!(fit.coefficients[1].abs() < 1e-8);
        assert!(fit.coefficients[2].abs() < 1e-6);
        assert!(extrapolate_scaling(&pts[..3], FitForm::InversePoly).is_err());
    }

    #[test]
    fn star_symmetric_scan_consistency() {
        // d = 1, no bridges: same as the symmetric sector of two cubes
        let times = time_grid(8.0, 800);
        let a = star_symmetric_scan(1, 0, 64, &times).unwrap();
        let (sym, _) = star_sector_chains(64, 1);
        let b = evolve_chain(&sym, 0, &times).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
