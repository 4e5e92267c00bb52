//! Random growth of translation-invariant daisy cubes from a seed of
//! corner-sharing hypercubes toward the full hypercube, recording the
//! bridge density and revival diagnostics after every addition.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{Basis, SpinConfig};
use crate::dynamics::{basis_state, default_time_grid, evolve_krylov, RevivalPeak};
use crate::error::{Result, ScarError};
use crate::fsa::{fsa_recurrence, split_pm, subspace_variance};
use crate::graph::build_adjacency;

/// Which corner-sharing seed the growth starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedGraph {
    /// Two hypercubes joined at the polarised vertex (the Neel pair).
    TwoCubes,
    /// d+1 hypercubes in a star; the seed corners are the translates of
    /// the period-(d+1) density wave.
    Star { d: u32 },
}

impl SeedGraph {
    pub fn corners(&self, n: usize) -> Result<Vec<SpinConfig>> {
        match self {
            SeedGraph::TwoCubes => {
                let z2 = SpinConfig::neel(n)?;
                Ok(vec![z2, z2.translated(1)])
            }
            SeedGraph::Star { d } => {
                let p = *d as usize + 1;
                let z = SpinConfig::z_state(n, p)?;
                Ok((0..p).map(|s| z.translated(s)).collect())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SeedGraph::TwoCubes => "2hc".into(),
            SeedGraph::Star { d } => format!("star{}", d + 1),
        }
    }
}

/// One diagnostics record, emitted at the seed step and after every orbit
/// addition.
#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub step: usize,
    /// Excitation count being sampled when this record was taken.
    pub m: u32,
    pub lambda: f64,
    pub graph_size: u64,
    pub revival: Option<RevivalPeak>,
    pub sigma_e: Option<f64>,
    pub seed: u64,
    /// Representative of the orbit added at this step (absent on the seed
    /// record).
    pub added: Option<SpinConfig>,
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub n: usize,
    pub seed: u64,
    pub seed_graph: SeedGraph,
    /// Revival detection horizon (default 4 pi).
    pub horizon: f64,
    /// Compute the recurrence-subspace variance at every step (dominates
    /// runtime when enabled).
    pub sigma_e: bool,
}

impl SamplerConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SamplerConfig {
            n,
            seed,
            seed_graph: SeedGraph::TwoCubes,
            horizon: 4.0 * std::f64::consts::PI,
            sigma_e: false,
        }
    }
}

/// Outcome of attempting to add an orbit to the maximal set.
pub enum AddOutcome {
    Added { maximal: Vec<u64>, basis: Basis },
    /// The candidate was already dominated; nothing changed.
    Dominated,
}

/// Add the full translation orbit of `u` to the maximal vertex set and
/// rebuild the daisy-cube closure.
pub fn add_orbit_closure(maximal: &[u64], u: &SpinConfig, n: usize) -> Result<AddOutcome> {
    let dominated = maximal
        .iter()
        .any(|&m| u.bits() & !m == 0);
    if dominated {
        return Ok(AddOutcome::Dominated);
    }
    let mut next: Vec<u64> = maximal.to_vec();
    let mut cur = *u;
    for _ in 0..n {
        if !next.iter().any(|&m| cur.bits() & !m == 0) {
            next.push(cur.bits());
        }
        cur = cur.translated(1);
    }
    // drop entries dominated by the new orbit
    let pruned: Vec<u64> = next
        .iter()
        .copied()
        .filter(|&m| !next.iter().any(|&other| other != m && m & !other == 0))
        .collect();
    let basis = Basis::from_maximal_set(n, &pruned)?;
    Ok(AddOutcome::Added {
        maximal: pruned,
        basis,
    })
}

/// Run the random-bridge growth. Starting from the seed corners, a uniform
/// random weight-m word not dominated by any seed corner is drawn; if it is
/// already in the graph the excitation count advances, otherwise its whole
/// translation orbit is added and diagnostics are recorded. The walk ends
/// once m exceeds N, by which point the graph is the full hypercube.
pub fn run_bridge_sampler(config: &SamplerConfig) -> Result<Vec<SampleRecord>> {
    let n = config.n;
    if n % 2 != 0 || n > 16 {
        return Err(ScarError::invalid(
            "sampler needs even N at full-diagnostics scale (N <= 16)",
        ));
    }
    let corners = config.seed_graph.corners(n)?;
    let corner_bits: Vec<u64> = corners.iter().map(|c| c.bits()).collect();
    let mut maximal = corner_bits.clone();
    let mut basis = Basis::from_maximal_set(n, &maximal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();

    // revivals are probed from the first seed corner: the Neel state for
    // two cubes, the period-(d+1) density wave for stars
    let root = corners[0];
    let diagnose = |basis: &Basis,
                    step: usize,
                    m: u32,
                    added: Option<SpinConfig>|
     -> Result<SampleRecord> {
        let graph = build_adjacency(basis)?;
        let psi0 = basis_state(basis, &root)?;
        // many graphs are visited per run; the Lanczos path avoids a dense
        // eigendecomposition at every step
        let series = evolve_krylov(&graph, &psi0, &default_time_grid(config.horizon))?;
        // star seeds start below the two-cube size floor, where the
        // interpolation coordinate is formally negative
        let lambda = raw_bridge_density(basis.len() as u64, n);
        let sigma_e = if config.sigma_e {
            let (hp, _) = split_pm(&graph, basis, &root)?;
            let chain = fsa_recurrence(&hp, basis, &root, true)?;
            if config.seed_graph == SeedGraph::TwoCubes {
                // only the two-cube seed keeps the recurrence length pinned
                // at N while bridges accumulate
                assert_eq!(
                    chain.len(),
                    n,
                    "recurrence subspace dimension changed during growth"
                );
            }
            Some(subspace_variance(&graph, &chain)?)
        } else {
            None
        };
        Ok(SampleRecord {
            step,
            m,
            lambda,
            graph_size: basis.len() as u64,
            revival: series.revival,
            sigma_e,
            seed: config.seed,
            added,
        })
    };

    let mut step = 0usize;
    let rec = diagnose(&basis, step, 2, None)?;
    let mut lambda_prev = rec.lambda;
    records.push(rec);

    let mut m = 2u32;
    while m as usize <= n {
        let u = draw_candidate(&mut rng, n, m, &corner_bits);
        if basis.contains(u.bits()) {
            m += 1;
            continue;
        }
        match add_orbit_closure(&maximal, &u, n)? {
            AddOutcome::Dominated => unreachable!("membership already checked"),
            AddOutcome::Added {
                maximal: next,
                basis: next_basis,
            } => {
                assert!(next_basis.len() > basis.len(), "graph must grow on add");
                maximal = next;
                basis = next_basis;
                step += 1;
                let rec = diagnose(&basis, step, m, Some(u))?;
                assert!(rec.lambda >= lambda_prev - 1e-12, "lambda must not decrease");
                lambda_prev = rec.lambda;
                records.push(rec);
            }
        }
    }
    debug_assert_eq!(basis.len() as u64, 1u64 << n);
    Ok(records)
}

fn raw_bridge_density(size: u64, n: usize) -> f64 {
    let floor = ((1u64 << (n / 2 + 1)) - 1) as f64;
    ((size as f64).ln() - floor.ln()) / ((n as f64) * std::f64::consts::LN_2 - floor.ln())
}

/// Uniform random weight-m word not dominated by any seed corner.
fn draw_candidate(rng: &mut ChaCha8Rng, n: usize, m: u32, corners: &[u64]) -> SpinConfig {
    loop {
        // partial Fisher-Yates for a uniform m-subset of the sites
        let mut sites: Vec<usize> = (0..n).collect();
        for i in 0..m as usize {
            let j = rng.random_range(i..n);
            sites.swap(i, j);
        }
        let bits = sites[..m as usize]
            .iter()
            .fold(0u64, |acc, &s| acc | (1 << s));
        if corners.iter().any(|&c| bits & !c == 0) {
            continue;
        }
        return SpinConfig::new(bits, n).unwrap();
    }
}

/// Per-bin ensemble aggregates over many sampler runs.
#[derive(Clone, Debug)]
pub struct BinStat {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub count: usize,
    pub mean_fidelity_density: f64,
    pub std_fidelity_density: f64,
    pub mean_period: f64,
    pub std_period: f64,
}

/// Bin all records of an ensemble of runs by bridge density and aggregate
/// the revival observables; records without a detected revival are skipped.
pub fn ensemble_statistics(
    runs: &[Vec<SampleRecord>],
    n: usize,
    bins: usize,
) -> Result<Vec<BinStat>> {
    if runs.len() < 2 {
        return Err(ScarError::invalid("need several runs for ensemble statistics"));
    }
    let mut out = Vec::new();
    for b in 0..bins {
        let lo = b as f64 / bins as f64;
        let hi = (b + 1) as f64 / bins as f64;
        let mut dens = Vec::new();
        let mut periods = Vec::new();
        for run in runs {
            for rec in run {
                let in_bin = rec.lambda >= lo && (rec.lambda < hi || (b + 1 == bins && rec.lambda <= hi));
                if !in_bin {
                    continue;
                }
                if let Some(peak) = rec.revival {
                    dens.push(crate::dynamics::fidelity_density(peak.f0, n));
                    periods.push(peak.t0);
                }
            }
        }
        if dens.is_empty() {
            continue;
        }
        let (mf, sf) = crate::linalg::mean_std(&dens);
        let (mt, st) = crate::linalg::mean_std(&periods);
        out.push(BinStat {
            lambda_lo: lo,
            lambda_hi: hi,
            count: dens.len(),
            mean_fidelity_density: mf,
            std_fidelity_density: sf,
            mean_period: mt,
            std_period: st,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_basis, ConstraintSpec, ModelFamily};

    #[test]
    fn seed_and_final_records() {
        let mut config = SamplerConfig::new(8, 11);
        config.horizon = 4.0 * std::f64::consts::PI;
        let records = run_bridge_sampler(&config).unwrap();
        let first = &records[0];
        assert_eq!(first.lambda, 0.0);
        assert_eq!(first.graph_size, (1 << 5) - 1);
        let last = records.last().unwrap();
        assert_eq!(last.lambda, 1.0);
        assert_eq!(last.graph_size, 1 << 8);
        let peak = last.revival.unwrap();
        assert!((peak.f0 - 1.0).abs() < 1e-7);
        assert!((peak.t0 - std::f64::consts::PI).abs() < 1e-3);
        // lambda non-decreasing, graph strictly growing
        for w in records.windows(2) {
            assert!(w[1].lambda >= w[0].lambda);
            assert!(w[1].graph_size > w[0].graph_size);
        }
    }

    #[test]
    fn identical_seeds_reproduce_bitwise() {
        let config = SamplerConfig::new(8, 1234);
        let a = run_bridge_sampler(&config).unwrap();
        let b = run_bridge_sampler(&config).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph_size, y.graph_size);
            assert_eq!(x.added.map(|c| c.bits()), y.added.map(|c| c.bits()));
            assert_eq!(
                x.revival.map(|p| (p.f0.to_bits(), p.t0.to_bits())),
                y.revival.map(|p| (p.f0.to_bits(), p.t0.to_bits()))
            );
        }
    }

    #[test]
    fn every_sampled_graph_is_a_translation_invariant_daisy_cube() {
        let mut config = SamplerConfig::new(8, 7);
        config.sigma_e = true; // also exercises the chain-length assertion
        let records = run_bridge_sampler(&config).unwrap();
        // replay the growth and check closure properties at each step
        let corners = SeedGraph::TwoCubes.corners(8).unwrap();
        let mut maximal: Vec<u64> = corners.iter().map(|c| c.bits()).collect();
        for rec in records.iter().skip(1) {
            let u = rec.added.unwrap();
            match add_orbit_closure(&maximal, &u, 8).unwrap() {
                AddOutcome::Added { maximal: m, basis } => {
                    assert_eq!(basis.len() as u64, rec.graph_size);
                    // translation invariance
                    for bits in basis.iter() {
                        let c = SpinConfig::new(bits, 8).unwrap();
                        assert!(basis.contains(c.translated(1).bits()));
                    }
                    // downward closure
                    for bits in basis.iter() {
                        for site in 0..8 {
                            if (bits >> site) & 1 == 1 {
                                assert!(basis.contains(bits ^ (1 << site)));
                            }
                        }
                    }
                    maximal = m;
                }
                AddOutcome::Dominated => panic!("recorded addition must not be dominated"),
            }
        }
    }

    #[test]
    fn add_orbit_examples() {
        // N=4 two-cube seed (7 states) plus the four-element weight-2 orbit
        // of 1100; the weight-3 words stay excluded since no maximal vertex
        // dominates them
        let corners = SeedGraph::TwoCubes.corners(4).unwrap();
        let maximal: Vec<u64> = corners.iter().map(|c| c.bits()).collect();
        let u = SpinConfig::parse("1100").unwrap();
        match add_orbit_closure(&maximal, &u, 4).unwrap() {
            AddOutcome::Added { basis, .. } => assert_eq!(basis.len(), 11),
            AddOutcome::Dominated => panic!(),
        }
        // all-ones completes the hypercube
        let u = SpinConfig::parse("1111").unwrap();
        match add_orbit_closure(&maximal, &u, 4).unwrap() {
            AddOutcome::Added { basis, .. } => assert_eq!(basis.len(), 16),
            AddOutcome::Dominated => panic!(),
        }
        // dominated candidates are flagged
        let u = SpinConfig::parse("1000").unwrap();
        assert!(matches!(
            add_orbit_closure(&maximal, &u, 4).unwrap(),
            AddOutcome::Dominated
        ));
    }

    #[test]
    fn star_seed_has_matching_size() {
        let config = SamplerConfig {
            n: 12,
            seed: 3,
            seed_graph: SeedGraph::Star { d: 2 },
            horizon: 2.0,
            sigma_e: false,
        };
        let corners = config.seed_graph.corners(12).unwrap();
        assert_eq!(corners.len(), 3);
        let maximal: Vec<u64> = corners.iter().map(|c| c.bits()).collect();
        let basis = Basis::from_maximal_set(12, &maximal).unwrap();
        let by_spec =
            enumerate_basis(&ConstraintSpec::new(ModelFamily::StarHypercubes(2)), 12).unwrap();
        assert_eq!(basis.len(), by_spec.len());
    }

    #[test]
    fn star_seed_runs_and_terminates() {
        let config = SamplerConfig {
            n: 12,
            seed: 5,
            seed_graph: SeedGraph::Star { d: 2 },
            horizon: 4.0 * std::f64::consts::PI,
            sigma_e: true,
        };
        let records = run_bridge_sampler(&config).unwrap();
        assert_eq!(records.last().unwrap().graph_size, 1 << 12);
        // the recurrence subspace grows from 2N/(d+1)+1 toward N+1 states
        assert!(records[0].sigma_e.is_some());
        for w in records.windows(2) {
            assert!(w[1].lambda >= w[0].lambda);
        }
    }
}
