//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with the measured numbers (run with `--nocapture` to see them).

use num_bigint::BigUint;
use num_complex::Complex64;
use std::f64::consts::PI;

use scargraph::basis::{
    enumerate_basis, hilbert_dimension, quantum_dimension, Basis, ConstraintSpec, ModelFamily,
    SpinConfig,
};
use scargraph::chains::{
    bridged_middle_chain, extrapolate_scaling, evolve_chain, star_sector_chains,
    two_hypercube_chain, ChainPropagator, FitForm,
};
use scargraph::dynamics::{
    basis_state, default_time_grid, evolve, evolve_krylov, fidelity_density, time_grid,
    SpectralDecomp,
};
use scargraph::fsa::{exact_steps, fsa_recurrence, fsa_spectrum, split_pm, subspace_variance};
use scargraph::graph::{
    build_2hg, build_adjacency, build_hypergrid_vertices, edge_free_corners, verify_partial_cube,
    SparseOperator,
};
use scargraph::linalg::spearman;
use scargraph::sampler::{run_bridge_sampler, SamplerConfig};
use scargraph::spectral::{overlap_profile, r_statistic, target_overlap_data};
use scargraph::symmetry::{project_sector, sector_basis, translation_orbits, Parity};

fn model(family: ModelFamily, n: usize) -> (Basis, SparseOperator) {
    let basis = enumerate_basis(&ConstraintSpec::new(family), n).unwrap();
    let graph = build_adjacency(&basis).unwrap();
    (basis, graph)
}

fn builtin_families() -> Vec<ModelFamily> {
    vec![
        ModelFamily::Free,
        ModelFamily::Pxp,
        ModelFamily::Blockade(2),
        ModelFamily::Blockade(3),
        ModelFamily::RRange(2),
        ModelFamily::RRange(3),
        ModelFamily::Kk(2),
        ModelFamily::Kk(3),
        ModelFamily::TwoHypercube,
        ModelFamily::StarHypercubes(2),
        ModelFamily::StarHypercubes(3),
        ModelFamily::TwoHypergrid,
    ]
}

#[test]
fn criterion_01_dimension_oracle_equivalence() {
    let mut checked = 0usize;
    for family in builtin_families() {
        let spec = ConstraintSpec::new(family.clone());
        for n in 1..=14usize {
            if spec.check_n(n).is_err() {
                continue;
            }
            let counted = hilbert_dimension(&spec, n).unwrap();
            let enumerated = enumerate_basis(&spec, n).unwrap().len();
            assert_eq!(
                BigUint::from(enumerated),
                counted,
                "{} N={n}",
                family.label()
            );
            checked += 1;
        }
    }
    println!("criterion 01: PASS - {checked} (model, N) dimension counts match enumeration");
}

#[test]
fn criterion_02_quantum_dimensions() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a_pxp = quantum_dimension(&ConstraintSpec::new(ModelFamily::Pxp)).unwrap();
    assert!((a_pxp - phi).abs() < 1e-8, "pxp alpha = {a_pxp}");
    let a_kk2 = quantum_dimension(&ConstraintSpec::new(ModelFamily::Kk(2))).unwrap();
    assert!((a_kk2 - 1.8392867552).abs() < 1e-6, "kk2 alpha = {a_kk2}");
    let mut previous = f64::INFINITY;
    let mut alphas = Vec::new();
    for d in 1..=8u32 {
        let a = quantum_dimension(&ConstraintSpec::new(ModelFamily::Blockade(d))).unwrap();
        assert!(a < previous, "blockade alpha not decreasing at d={d}");
        assert!(a > 1.0);
        previous = a;
        alphas.push(a);
    }
    assert!(alphas.last().unwrap() - 1.0 < 0.35, "blockade alpha -> 1");
    println!(
        "criterion 02: PASS - pxp {a_pxp:.10}, kk2 {a_kk2:.10}, blockade alphas {:.4}..{:.4} decreasing",
        alphas[0],
        alphas.last().unwrap()
    );
}

#[test]
fn criterion_03_fsa_exactness_ladder() {
    for n in (2..=20usize).step_by(2) {
        let (basis, graph) = model(ModelFamily::TwoHypercube, n);
        let root = SpinConfig::neel(n).unwrap();
        let (hp, hm) = split_pm(&graph, &basis, &root).unwrap();
        let chain = fsa_recurrence(&hp, &basis, &root, true).unwrap();
        assert_eq!(exact_steps(&hm, &chain).unwrap(), n, "2hc N={n}");
        let sigma = subspace_variance(&graph, &chain).unwrap();
        assert!(sigma < 1e-10, "2hc N={n} sigma={sigma}");
    }
    for family in [ModelFamily::Pxp, ModelFamily::Kk(2)] {
        for n in (8..=16usize).step_by(2) {
            let (basis, graph) = model(family.clone(), n);
            let root = SpinConfig::neel(n).unwrap();
            let (hp, hm) = split_pm(&graph, &basis, &root).unwrap();
            let chain = fsa_recurrence(&hp, &basis, &root, true).unwrap();
            assert_eq!(
                exact_steps(&hm, &chain).unwrap(),
                2,
                "{} N={n}",
                family.label()
            );
        }
    }
    for n in [8usize, 12, 16] {
        let (basis, graph) = model(ModelFamily::Free, n);
        let root = SpinConfig::neel(n).unwrap();
        let (hp, _) = split_pm(&graph, &basis, &root).unwrap();
        let chain = fsa_recurrence(&hp, &basis, &root, true).unwrap();
        let sigma = subspace_variance(&graph, &chain).unwrap();
        assert!(sigma < 1e-10, "free N={n} sigma={sigma}");
    }
    println!(
        "criterion 03: PASS - exact steps N for 2hc (N<=20), 2 for pxp/kk2 (N=8..16); sigma_E < 1e-10 on closed subspaces"
    );
}

#[test]
fn criterion_04_two_hypercube_revival() {
    let mut f_points = Vec::new();
    let mut t_points = Vec::new();
    let mut cube = 32usize;
    while cube <= 2048 {
        let chain = two_hypercube_chain(cube);
        let prop = ChainPropagator::new(&chain, 0).unwrap();
        let peak = prop.first_revival(3.0 * PI, 6000).unwrap();
        let total_spins = (2 * cube) as f64;
        f_points.push((total_spins, peak.f0));
        t_points.push((total_spins, peak.t0));
        cube *= 2;
    }
    let f_fit = extrapolate_scaling(&f_points, FitForm::InversePoly).unwrap();
    let t_fit = extrapolate_scaling(&t_points, FitForm::InverseSqrt).unwrap();
    assert!(
        (f_fit.asymptote - 0.7159).abs() <= 0.002,
        "f0 -> {}",
        f_fit.asymptote
    );
    assert!(
        (t_fit.asymptote - 6.282).abs() <= 0.01,
        "T -> {}",
        t_fit.asymptote
    );
    // reflection peak near half the period
    let chain = two_hypercube_chain(512);
    let series = evolve_chain(&chain, 0, &time_grid(3.0 * PI, 6000)).unwrap();
    let revival = series.revival.unwrap();
    let reflection = series.reflection.expect("reflection peak present");
    assert!(reflection.f0 > 0.0 && reflection.f0 < 0.1, "refl {}", reflection.f0);
    assert!((reflection.t0 - revival.t0 / 2.0).abs() < 0.6);
    println!(
        "criterion 04: PASS - f0 -> {:.5} (target 0.7159 +- 0.002), T -> {:.4} (target 6.282 +- 0.01), reflection {:.4} at t = {:.3} ~ T/2",
        f_fit.asymptote, t_fit.asymptote, reflection.f0, reflection.t0
    );
}

#[test]
fn criterion_05_free_model_perfection() {
    // N <= 10: every basis state, exactly, through one dense decomposition
    // per size (fidelity is constant on translation orbits, and here every
    // state is checked directly)
    let mut states_checked = 0usize;
    for n in 1..=10usize {
        let (_, graph) = model(ModelFamily::Free, n);
        let decomp = SpectralDecomp::new(&graph).unwrap();
        for idx in 0..graph.dim() {
            let w = decomp.basis_weights(idx);
            let f_pi = scargraph::dynamics::overlap_from_weights(&decomp.energies, &w, PI)
                .norm_sqr();
            assert!((f_pi - 1.0).abs() < 1e-9, "N={n} state {idx}: f(pi)={f_pi}");
            states_checked += 1;
        }
    }
    // N = 12..16: deterministic state samples through the Lanczos path
    let mut sampled = 0usize;
    for n in [12usize, 14, 16] {
        let (basis, graph) = model(ModelFamily::Free, n);
        let mut picks: Vec<u64> = vec![
            0,
            SpinConfig::neel(n).unwrap().bits(),
            (1u64 << n) - 1,
            0b11 << (n / 2),
            0b10110 % (1 << n),
        ];
        picks.dedup();
        for bits in picks {
            let psi0 = basis_state(&basis, &SpinConfig::new(bits, n).unwrap()).unwrap();
            let series = evolve_krylov(&graph, &psi0, &[0.0, PI / 2.0, PI]).unwrap();
            let f_pi = series.values[2];
            assert!((f_pi - 1.0).abs() < 1e-9, "N={n} bits={bits:b}: f(pi)={f_pi}");
            sampled += 1;
        }
    }
    println!(
        "criterion 05: PASS - f(pi) = 1 within 1e-9 for all {states_checked} states (N<=10) and {sampled} sampled states (N=12..16)"
    );
}

#[test]
fn criterion_06_many_body_chain_consistency() {
    let times = default_time_grid(3.0 * PI);
    let mut worst: f64 = 0.0;
    for n in (2..=18usize).step_by(2) {
        let (basis, graph) = model(ModelFamily::TwoHypercube, n);
        let psi0 = basis_state(&basis, &SpinConfig::neel(n).unwrap()).unwrap();
        let full = evolve(&graph, &psi0, &times).unwrap();
        let chain = two_hypercube_chain(n / 2);
        let reduced = evolve_chain(&chain, 0, &times).unwrap();
        for (a, b) in full.values.iter().zip(&reduced.values) {
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-9, "N={n}: worst deviation {worst}");
    }
    println!(
        "criterion 06: PASS - full model vs chain fidelity within 1e-9 pointwise (worst {worst:.2e}) for even N <= 18"
    );
}

#[test]
fn criterion_07_level_statistics() {
    let n = 20usize;
    let (basis, graph) = model(ModelFamily::Kk(2), n);
    let orbits = translation_orbits(&basis).unwrap();
    let sector = sector_basis(&basis, &orbits, 0, Some(Parity::Even)).unwrap();
    let matrix = project_sector(&graph, &basis, &sector).unwrap();
    let values = matrix.eigenvalues();
    let r = r_statistic(&values, 0.025).unwrap();
    assert!((0.48..=0.56).contains(&r), "<r> = {r}");
    println!(
        "criterion 07: PASS - (2,3) N=20 K=0 I=+1 sector dim {} gives <r> = {r:.4} in [0.48, 0.56]",
        sector.dim()
    );
}

#[test]
fn criterion_08_fidelity_densities() {
    let grid = default_time_grid(3.0 * PI);
    let mut reports = Vec::new();
    for n in [12usize, 16, 20] {
        let (basis, graph) = model(ModelFamily::Kk(2), n);
        let run = |target: SpinConfig| -> f64 {
            let psi0 = basis_state(&basis, &target).unwrap();
            let series = if graph.dim() <= 4000 {
                evolve(&graph, &psi0, &grid).unwrap()
            } else {
                evolve_krylov(&graph, &psi0, &grid).unwrap()
            };
            fidelity_density(series.revival.unwrap().f0, n)
        };
        let neel_density = run(SpinConfig::neel(n).unwrap());
        let pair_density = run(SpinConfig::parse(&"1100".repeat(n / 4)).unwrap());
        assert!(
            (-0.02..=0.0).contains(&neel_density),
            "N={n} neel density {neel_density}"
        );
        assert!(
            (-0.06..=0.0).contains(&pair_density),
            "N={n} 1100 density {pair_density}"
        );
        // both sit an order of magnitude above the ergodic benchmark
        let ergodic = -(1.8392867552f64.ln());
        assert!(neel_density > ergodic / 10.0);
        assert!(pair_density > ergodic / 10.0);
        reports.push(format!("N={n}: {neel_density:+.5}/{pair_density:+.5}"));
    }
    println!(
        "criterion 08: PASS - (2,3) neel/1100 fidelity densities {} (bands [-0.02,0] / [-0.06,0])",
        reports.join(", ")
    );
}

#[test]
fn criterion_09_two_hypergrid_structure() {
    for n in [8usize, 12] {
        // build_2hg verifies the intersection internally; check explicitly too
        let (basis_2hg, _) = build_2hg(n).unwrap();
        let v0: std::collections::BTreeSet<u64> =
            build_hypergrid_vertices(n, 0).unwrap().into_iter().collect();
        let v1: std::collections::BTreeSet<u64> =
            build_hypergrid_vertices(n, 1).unwrap().into_iter().collect();
        let inter: Vec<u64> = v0.intersection(&v1).copied().collect();
        let pxp: Vec<u64> = enumerate_basis(&ConstraintSpec::new(ModelFamily::Pxp), n)
            .unwrap()
            .iter()
            .collect();
        assert_eq!(inter, pxp, "N={n}");
        assert!(basis_2hg.len() > pxp.len());
    }
    // edge-free corners of the (2,3) graph at N=8
    let (basis, graph) = model(ModelFamily::Kk(2), 8);
    let mut corners: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    for offset in [0usize, 1] {
        for c in edge_free_corners(&basis, &graph, offset).unwrap() {
            corners.insert(c.bits());
        }
    }
    let expect: std::collections::BTreeSet<u64> = [
        "10101010", "01010101", "10011001", "01100110", "00110011", "11001100",
    ]
    .iter()
    .map(|s| SpinConfig::parse(s).unwrap().bits())
    .collect();
    assert_eq!(corners, expect);
    // N=6 is not a multiple of 4: only the Neel pair survives
    let (basis6, graph6) = model(ModelFamily::Kk(2), 6);
    let mut corners6: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    for offset in [0usize, 1] {
        for c in edge_free_corners(&basis6, &graph6, offset).unwrap() {
            corners6.insert(c.bits());
        }
    }
    let neel6: std::collections::BTreeSet<u64> = ["101010", "010101"]
        .iter()
        .map(|s| SpinConfig::parse(s).unwrap().bits())
        .collect();
    assert_eq!(corners6, neel6);
    println!(
        "criterion 09: PASS - hypergrid intersection = PXP at N=8,12; edge-free corners at N=8 are exactly the 6 listed states (2 at N=6)"
    );
}

#[test]
fn criterion_10_top_band_fsa_energies() {
    for family in [ModelFamily::Pxp, ModelFamily::Kk(2)] {
        let n = 16usize;
        let (basis, graph) = model(family.clone(), n);
        let orbits = translation_orbits(&basis).unwrap();
        let neel = SpinConfig::neel(n).unwrap();
        let (hp, _) = split_pm(&graph, &basis, &neel).unwrap();
        let chain = fsa_recurrence(&hp, &basis, &neel, false).unwrap();
        let (fsa_vals, _) = fsa_spectrum(&chain);
        let items = target_overlap_data(&graph, &basis, &orbits, &neel).unwrap();
        let profile = overlap_profile(&items, &fsa_vals);
        assert_eq!(profile.top_band.len(), n + 1, "{}", family.label());
        let e_min = items.first().unwrap().0;
        let e_max = items.last().unwrap().0;
        let bandwidth = e_max - e_min;
        let mut top: Vec<f64> = profile
            .top_band
            .iter()
            .map(|&i| profile.entries[i].0)
            .collect();
        top.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut worst: f64 = 0.0;
        for (t, f) in top.iter().zip(&fsa_vals) {
            worst = worst.max((t - f).abs());
        }
        assert!(
            worst < 0.02 * bandwidth,
            "{}: worst {worst} of bandwidth {bandwidth}",
            family.label()
        );
        println!(
            "criterion 10: PASS - {} N=16 top-band energies match the recurrence spectrum within {:.2}% of bandwidth",
            family.label(),
            100.0 * worst / bandwidth
        );
    }
}

#[test]
fn criterion_11_sampler_phenomenology() {
    let n = 12usize;
    let seeds = 20u64;
    let mut runs = Vec::new();
    for seed in 0..seeds {
        let mut cfg = SamplerConfig::new(n, seed);
        cfg.sigma_e = true;
        runs.push(run_bridge_sampler(&cfg).unwrap());
    }
    // (a) small-lambda enhancement over the two-cube seed value
    let seed_density = {
        let rec = &runs[0][0];
        fidelity_density(rec.revival.unwrap().f0, n)
    };
    let small: Vec<f64> = runs
        .iter()
        .flatten()
        .filter(|r| r.lambda > 0.0 && r.lambda <= 0.05)
        .filter_map(|r| r.revival.map(|p| fidelity_density(p.f0, n)))
        .collect();
    assert!(!small.is_empty());
    let small_mean = small.iter().sum::<f64>() / small.len() as f64;
    assert!(
        small_mean > seed_density,
        "small-lambda mean {small_mean} vs seed {seed_density}"
    );
    // (b) subspace variance anticorrelates with revival fidelity
    let mut sigmas = Vec::new();
    let mut f0s = Vec::new();
    for rec in runs.iter().flatten() {
        if let (Some(sigma), Some(peak)) = (rec.sigma_e, rec.revival) {
            sigmas.push(sigma);
            f0s.push(peak.f0);
        }
    }
    let rho = spearman(&sigmas, &f0s);
    assert!(rho <= -0.5, "spearman = {rho}");
    // (c) the PXP point is typical of its lambda bin
    let (pxp_basis, pxp_graph) = model(ModelFamily::Pxp, n);
    let psi0 = basis_state(&pxp_basis, &SpinConfig::neel(n).unwrap()).unwrap();
    let series = evolve(
        &pxp_graph,
        &psi0,
        &default_time_grid(4.0 * PI),
    )
    .unwrap();
    let pxp_peak = series.revival.unwrap();
    let pxp_lambda = scargraph::graph::bridge_density(&BigUint::from(pxp_basis.len()), n).unwrap();
    let bin = |lam: f64| (lam * 10.0).floor().min(9.0) as usize;
    let pxp_bin = bin(pxp_lambda);
    let mut dens = Vec::new();
    let mut periods = Vec::new();
    for rec in runs.iter().flatten() {
        if bin(rec.lambda) == pxp_bin {
            if let Some(peak) = rec.revival {
                dens.push(fidelity_density(peak.f0, n));
                periods.push(peak.t0);
            }
        }
    }
    let (md, sd) = scargraph::linalg::mean_std(&dens);
    let (mt, st) = scargraph::linalg::mean_std(&periods);
    let pxp_density = fidelity_density(pxp_peak.f0, n);
    assert!(
        (pxp_density - md).abs() <= 2.0 * sd,
        "pxp density {pxp_density} vs bin {md} +- {sd}"
    );
    assert!(
        (pxp_peak.t0 - mt).abs() <= 2.0 * st,
        "pxp period {} vs bin {mt} +- {st}",
        pxp_peak.t0
    );
    println!(
        "criterion 11: PASS - small-lambda mean density {small_mean:.4} > seed {seed_density:.4}; spearman(sigma_E, f0) = {rho:.3} <= -0.5; PXP (dens {pxp_density:.4}, T {:.3}) within 2 sigma of its bin ({md:.4} +- {sd:.4}, {mt:.3} +- {st:.3})",
        pxp_peak.t0
    );
}

#[test]
fn criterion_12_bridged_chain_tuning() {
    let n = 300usize;
    let step = 10u32;
    let mut best_f0 = (f64::MIN, 0u32);
    let mut best_gap = (f64::MAX, 0u32);
    for bridges in (0..=n as u32).step_by(step as usize) {
        let chain = bridged_middle_chain(n, bridges).unwrap();
        let peak = ChainPropagator::new(&chain, 0)
            .unwrap()
            .first_revival(3.0 * PI, 4000)
            .unwrap();
        let (mut sym, anti) = star_sector_chains(n, 1);
        let last = sym.couplings.len() - 1;
        sym.couplings[last] = (2.0 * (n as f64 + bridges as f64)).sqrt();
        let t_sym = ChainPropagator::new(&sym, 0)
            .unwrap()
            .first_revival(2.0 * PI, 3000)
            .unwrap()
            .t0;
        let t_anti = ChainPropagator::new(&anti, 0)
            .unwrap()
            .first_revival(2.0 * PI, 3000)
            .unwrap()
            .t0;
        let gap = (t_sym - t_anti).abs();
        if peak.f0 > best_f0.0 {
            best_f0 = (peak.f0, bridges);
        }
        if gap < best_gap.0 {
            best_gap = (gap, bridges);
        }
    }
    assert!(best_f0.1 > 0 && (best_f0.1 as usize) < n, "maximum must be interior");
    assert!(
        best_f0.1.abs_diff(best_gap.1) <= step,
        "argmax f0 at {} vs argmin period gap at {}",
        best_f0.1,
        best_gap.1
    );
    println!(
        "criterion 12: PASS - n=300 sweep: f0 max {:.4} at {} bridges, period-gap min {:.2e} at {} bridges (within one grid step of {})",
        best_f0.0, best_f0.1, best_gap.0, best_gap.1, step
    );
}

#[test]
fn criterion_13_partial_cube_certification() {
    let mut graphs = 0usize;
    for family in [
        ModelFamily::Pxp,
        ModelFamily::TwoHypercube,
        ModelFamily::Kk(1),
        ModelFamily::Kk(2),
        ModelFamily::Kk(3),
        ModelFamily::Kk(4),
        ModelFamily::Blockade(1),
        ModelFamily::Blockade(2),
        ModelFamily::Blockade(3),
    ] {
        let spec = ConstraintSpec::new(family.clone());
        for n in 4..=10usize {
            if spec.check_n(n).is_err() {
                continue;
            }
            let (basis, graph) = model(family.clone(), n);
            let report = verify_partial_cube(&graph, &basis);
            assert!(
                report.is_partial_cube,
                "{} N={n}: witness {:?}",
                family.label(),
                report.witness
            );
            graphs += 1;
        }
    }
    println!("criterion 13: PASS - {graphs} graphs certified as partial cubes (N <= 10)");
}

#[test]
fn criterion_14_blockade_non_revival() {
    // matched Hilbert dimensions: pxp N=16 (2207), blockade:2 N=21 (3063),
    // blockade:3 N=24 (2287)
    let f0_of = |family: ModelFamily, n: usize, period: usize| -> (usize, f64) {
        let (basis, graph) = model(family, n);
        let z = SpinConfig::z_state(n, period).unwrap();
        let psi0 = basis_state(&basis, &z).unwrap();
        let series = evolve_krylov(&graph, &psi0, &default_time_grid(3.0 * PI)).unwrap();
        (basis.len(), series.revival.map(|p| p.f0).unwrap_or(0.0))
    };
    let (d_pxp, f_pxp) = f0_of(ModelFamily::Pxp, 16, 2);
    let (d_b2, f_b2) = f0_of(ModelFamily::Blockade(2), 21, 3);
    let (d_b3, f_b3) = f0_of(ModelFamily::Blockade(3), 24, 4);
    assert!(f_pxp >= 2.0 * f_b2, "pxp {f_pxp} vs blockade:2 {f_b2}");
    assert!(f_pxp >= 2.0 * f_b3, "pxp {f_pxp} vs blockade:3 {f_b3}");
    println!(
        "criterion 14: PASS - f0: pxp {f_pxp:.4} (D={d_pxp}) vs blockade:2 {f_b2:.4} (D={d_b2}) and blockade:3 {f_b3:.4} (D={d_b3}); ratios {:.1}x / {:.1}x",
        f_pxp / f_b2,
        f_pxp / f_b3
    );
}
