//! Desk-scale reproduction recipes: canned parameter sets that regenerate
//! the data tables behind the headline results, each ending in a pass/fail
//! line against the same thresholds the acceptance suite uses.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_bigint::BigUint;
use serde_json::json;

use scargraph::basis::{
    enumerate_basis, ConstraintSpec, ModelFamily, SpinConfig,
};
use scargraph::chains::{
    bridged_middle_chain, extrapolate_scaling, star_sector_chains, star_symmetric_bridged_chain,
    ChainPropagator, FitForm,
};
use scargraph::dynamics::{
    basis_state, default_time_grid, evolve, evolve_krylov, fidelity_density, scan_initial_states,
};
use scargraph::fsa::{fsa_recurrence, fsa_spectrum, split_pm};
use scargraph::graph::{bridge_density, build_adjacency};
use scargraph::linalg::{mean_std, spearman};
use scargraph::sampler::{ensemble_statistics, run_bridge_sampler, SamplerConfig};
use scargraph::spectral::{
    ks_distance, overlap_profile, r_statistic, target_overlap_data, unfold_spacings,
    wigner_surmise_cdf,
};
use scargraph::symmetry::{project_sector, sector_basis, translation_orbits, Parity};

use crate::output::{fmt_f64, run_config, write_csv, write_json};
use crate::{build_model, chain_scaling_report, AnyError};

pub fn run(tag: &str, out: Option<PathBuf>) -> Result<(), AnyError> {
    let dir = out.unwrap_or_else(|| PathBuf::from(format!("repro-{tag}")));
    std::fs::create_dir_all(&dir)?;
    match tag {
        "fig3" => fig3(&dir),
        "fig4" => fig4(&dir),
        "fig5" => fig5(&dir),
        "fig6" => fig6(&dir),
        "fig7" => fig7(&dir),
        "fig10" => fig10(&dir),
        "fig11" => fig11(&dir),
        "fig13" => fig13(&dir),
        other => Err(Box::new(scargraph::error::ScarError::invalid(format!(
            "unknown repro tag '{other}'"
        )))),
    }
}

fn verdict(name: &str, ok: bool, detail: &str) {
    println!("{name}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
}

/// Finite-size scaling of the two-hypercube revival.
fn fig3(dir: &std::path::Path) -> Result<(), AnyError> {
    let report = chain_scaling_report("2hc", 1, 32, 2048, FitForm::InversePoly)?;
    write_json(&dir.join("scaling.json"), &report)?;
    let f0 = report["f0_asymptote"].as_f64().unwrap();
    let t = report["t_asymptote"].as_f64().unwrap();
    println!("extrapolated f0 = {f0:.5}, T = {t:.4}");
    verdict(
        "fig3",
        (f0 - 0.7159).abs() <= 0.002 && (t - 6.282).abs() <= 0.01,
        &format!("f0 -> {f0:.5} (0.7159 +- 0.002), T -> {t:.4} (6.282 +- 0.01)"),
    );
    Ok(())
}

/// Interpolation between the two-hypercube model and PXP at fixed N.
fn fig4(dir: &std::path::Path) -> Result<(), AnyError> {
    let n = 16usize;
    let models = ["2hc", "rrange:4", "rrange:3", "rrange:2", "pxp"];
    let mut rows = Vec::new();
    let mut all_ok = true;
    for model in models {
        let (basis, graph) = build_model(model, n)?;
        let orbits = translation_orbits(&basis)?;
        let neel = SpinConfig::neel(n)?;
        let psi0 = basis_state(&basis, &neel)?;
        let series = evolve(&graph, &psi0, &default_time_grid(3.0 * PI))?;
        let peak = series.revival.unwrap();
        // top band of N+1 states over the recurrence energies
        let (hp, _) = split_pm(&graph, &basis, &neel)?;
        let chain = fsa_recurrence(&hp, &basis, &neel, false)?;
        let (fsa_vals, _) = fsa_spectrum(&chain);
        let items = target_overlap_data(&graph, &basis, &orbits, &neel)?;
        let profile = overlap_profile(&items, &fsa_vals);
        let scan = scan_initial_states(&graph, &basis, &orbits, 3.0 * PI)?;
        let best = scan.best.as_ref().and_then(|b| b.revival).unwrap();
        rows.push(format!(
            "{model},{},{},{},{},{},{},{}",
            basis.len(),
            fmt_f64(peak.f0),
            fmt_f64(peak.t0),
            fmt_f64(best.f0),
            fmt_f64(scan.mean_f0),
            fmt_f64(scan.std_f0),
            profile.top_band.len(),
        ));
        all_ok &= peak.f0 > 0.6 && profile.top_band.len() == n + 1;
    }
    let config = run_config("repro", json!({"tag": "fig4", "n": n}));
    write_csv(
        &dir.join("interpolation.csv"),
        &config,
        "model,dim,neel_f0,neel_t,best_f0,mean_f0,std_f0,top_band",
        rows.into_iter(),
    )?;
    verdict(
        "fig4",
        all_ok,
        "Neel f0 > 0.6 and an N+1 top band for every model on the 2hc-to-pxp path",
    );
    Ok(())
}

/// Level statistics of the (2,3) model.
fn fig5(dir: &std::path::Path) -> Result<(), AnyError> {
    let n = 20usize;
    let cache_key = format!("fig5-kk2-n{n}-k0-inv+1-v{}", crate::output::ARTIFACT_VERSION);
    let (sector_dim, values): (usize, Vec<f64>) =
        match crate::output::cache_load(&cache_key) {
            Some(v) => (
                v["sector_dim"].as_u64().unwrap() as usize,
                v["values"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_f64().unwrap())
                    .collect(),
            ),
            None => {
                let (basis, graph) = build_model("kk:2", n)?;
                let orbits = translation_orbits(&basis)?;
                let sector = sector_basis(&basis, &orbits, 0, Some(Parity::Even))?;
                let values = project_sector(&graph, &basis, &sector)?.eigenvalues();
                crate::output::cache_store(
                    &cache_key,
                    &json!({"sector_dim": sector.dim(), "values": values}),
                );
                (sector.dim(), values)
            }
        };
    let r = r_statistic(&values, 0.025)?;
    let unfolded = unfold_spacings(&values)?;
    let ks = ks_distance(&unfolded.spacings, wigner_surmise_cdf);
    let config = run_config("repro", json!({"tag": "fig5", "n": n, "sector": "k=0,inv=+1"}));
    write_json(
        &dir.join("levelstats.json"),
        &json!({
            "config": config,
            "sector_dim": sector_dim,
            "r_value": r,
            "ks_to_wigner_dyson": ks,
            "histogram": unfolded.histogram,
        }),
    )?;
    println!("<r> = {r:.4}, KS distance to the Wigner-Dyson surmise = {ks:.4}");
    verdict("fig5", (0.48..=0.56).contains(&r), &format!("<r> = {r:.4} in [0.48, 0.56]"));
    Ok(())
}

/// Overlap towers, top band and entanglement entropy in the (2,3) model.
fn fig6(dir: &std::path::Path) -> Result<(), AnyError> {
    let n = 16usize;
    let (basis, graph) = build_model("kk:2", n)?;
    let orbits = translation_orbits(&basis)?;
    let neel = SpinConfig::neel(n)?;
    let (hp, _) = split_pm(&graph, &basis, &neel)?;
    let chain = fsa_recurrence(&hp, &basis, &neel, false)?;
    let (fsa_vals, _) = fsa_spectrum(&chain);
    let items = target_overlap_data(&graph, &basis, &orbits, &neel)?;
    let profile = overlap_profile(&items, &fsa_vals);
    let config = run_config("repro", json!({"tag": "fig6", "n": n}));
    let top: std::collections::HashSet<usize> = profile.top_band.iter().copied().collect();
    write_csv(
        &dir.join("overlaps.csv"),
        &config,
        "energy,overlap,top_band",
        profile.entries.iter().enumerate().map(|(i, (e, w))| {
            format!("{},{},{}", fmt_f64(*e), fmt_f64(*w), u8::from(top.contains(&i)))
        }),
    )?;
    // entanglement entropy in the K=0 and K=pi momentum sectors
    let mut entropy_rows = Vec::new();
    for k in [0usize, n / 2] {
        let sec = sector_basis(&basis, &orbits, k, None)?;
        let (vals, vecs) = project_sector(&graph, &basis, &sec)?.eigenpairs();
        for (m, &e) in vals.iter().enumerate() {
            let mut padded = vec![num_complex::Complex64::ZERO; basis.len()];
            sec.lift_into(&vecs[m], &mut padded[..]);
            let s = scargraph::spectral::entanglement_entropy(&padded, &basis, n / 2)?;
            entropy_rows.push(format!("{k},{},{}", fmt_f64(e), fmt_f64(s)));
        }
    }
    write_csv(
        &dir.join("entropy.csv"),
        &config,
        "k,energy,entropy",
        entropy_rows.into_iter(),
    )?;
    // revival curves for the two special states
    for (name, state) in [("neel", neel), ("1100", SpinConfig::parse(&"1100".repeat(n / 4))?)] {
        let psi0 = basis_state(&basis, &state)?;
        let series = evolve_krylov(&graph, &psi0, &default_time_grid(3.0 * PI))?;
        write_csv(
            &dir.join(format!("fidelity_{name}.csv")),
            &config,
            "t,fidelity",
            series
                .times
                .iter()
                .zip(&series.values)
                .map(|(t, f)| format!("{},{}", fmt_f64(*t), fmt_f64(*f))),
        )?;
    }
    // band/bandwidth agreement, as in the acceptance gate
    let e_min = items.first().unwrap().0;
    let e_max = items.last().unwrap().0;
    let mut top_sorted: Vec<f64> = profile.top_band.iter().map(|&i| profile.entries[i].0).collect();
    top_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let worst = top_sorted
        .iter()
        .zip(&fsa_vals)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    verdict(
        "fig6",
        profile.top_band.len() == n + 1 && worst < 0.02 * (e_max - e_min),
        &format!(
            "N+1 top band present; energies within {:.2}% of bandwidth of the recurrence spectrum",
            100.0 * worst / (e_max - e_min)
        ),
    );
    Ok(())
}

/// Blockade-radius family: density-wave revivals die beyond d = 1.
fn fig7(dir: &std::path::Path) -> Result<(), AnyError> {
    // matched Hilbert-space dimensions across d
    let cases = [(1u32, 16usize), (2, 21), (3, 24)];
    let mut rows = Vec::new();
    let mut f0s = Vec::new();
    for (d, n) in cases {
        let family = if d == 1 {
            ModelFamily::Pxp
        } else {
            ModelFamily::Blockade(d)
        };
        let basis = enumerate_basis(&ConstraintSpec::new(family), n)?;
        let graph = build_adjacency(&basis)?;
        let z = SpinConfig::z_state(n, d as usize + 1)?;
        let psi0 = basis_state(&basis, &z)?;
        let series = evolve_krylov(&graph, &psi0, &default_time_grid(3.0 * PI))?;
        let peak = series.revival.unwrap();
        rows.push(format!(
            "{d},{n},{},{},{}",
            basis.len(),
            fmt_f64(peak.f0),
            fmt_f64(peak.t0)
        ));
        f0s.push(peak.f0);
    }
    let config = run_config("repro", json!({"tag": "fig7"}));
    write_csv(
        &dir.join("blockade.csv"),
        &config,
        "d,N,dim,z_state_f0,z_state_t",
        rows.into_iter(),
    )?;
    verdict(
        "fig7",
        f0s[0] >= 2.0 * f0s[1] && f0s[0] >= 2.0 * f0s[2],
        &format!(
            "pxp f0 {:.3} vs blockade:2 {:.3} and blockade:3 {:.3} at matched dimensions",
            f0s[0], f0s[1], f0s[2]
        ),
    );
    Ok(())
}

/// Bridged two-cube chain: revival fidelity against sector period mismatch.
fn fig10(dir: &std::path::Path) -> Result<(), AnyError> {
    let n = 300usize;
    let step = 10u32;
    let mut rows = Vec::new();
    let mut best_f0 = (f64::MIN, 0u32);
    let mut best_gap = (f64::MAX, 0u32);
    for bridges in (0..=n as u32).step_by(step as usize) {
        let chain = bridged_middle_chain(n, bridges)?;
        let prop = ChainPropagator::new(&chain, 0)?;
        let peak = prop.first_revival(3.0 * PI, 4000).unwrap();
        let reflection = prop.refine_peak(peak.t0 / 2.0, 0.5);
        let (mut sym, anti) = star_sector_chains(n, 1);
        let last = sym.couplings.len() - 1;
        sym.couplings[last] = (2.0 * (n as f64 + bridges as f64)).sqrt();
        let t_sym = ChainPropagator::new(&sym, 0)?.first_revival(2.0 * PI, 3000).unwrap().t0;
        let t_anti = ChainPropagator::new(&anti, 0)?.first_revival(2.0 * PI, 3000).unwrap().t0;
        let gap = (t_sym - t_anti).abs();
        rows.push(format!(
            "{bridges},{},{},{},{}",
            fmt_f64(peak.f0),
            fmt_f64(peak.t0),
            fmt_f64(gap),
            fmt_f64(reflection.f0)
        ));
        if peak.f0 > best_f0.0 {
            best_f0 = (peak.f0, bridges);
        }
        if gap < best_gap.0 {
            best_gap = (gap, bridges);
        }
    }
    let config = run_config("repro", json!({"tag": "fig10", "n": n, "step": step}));
    write_csv(
        &dir.join("bridged_sweep.csv"),
        &config,
        "bridges,f0,t0,sector_period_gap,reflection_f",
        rows.into_iter(),
    )?;
    verdict(
        "fig10",
        best_f0.1.abs_diff(best_gap.1) <= step,
        &format!(
            "f0 max at {} bridges, period-gap min at {} (within one {step}-bridge step)",
            best_f0.1, best_gap.1
        ),
    );
    Ok(())
}

/// Random-bridge ensemble with the PXP and (2,3) markers.
fn fig11(dir: &std::path::Path) -> Result<(), AnyError> {
    let n = 12usize;
    let seeds = 10u64;
    let mut runs = Vec::new();
    for seed in 0..seeds {
        let mut cfg = SamplerConfig::new(n, seed);
        cfg.sigma_e = true;
        runs.push(run_bridge_sampler(&cfg)?);
    }
    let bins = ensemble_statistics(&runs, n, 20)?;
    let config = run_config("repro", json!({"tag": "fig11", "n": n, "seeds": seeds}));
    write_csv(
        &dir.join("ensemble.csv"),
        &config,
        "lambda_lo,lambda_hi,count,mean_density,std_density,mean_t,std_t",
        bins.iter().map(|b| {
            format!(
                "{},{},{},{},{},{},{}",
                fmt_f64(b.lambda_lo),
                fmt_f64(b.lambda_hi),
                b.count,
                fmt_f64(b.mean_fidelity_density),
                fmt_f64(b.std_fidelity_density),
                fmt_f64(b.mean_period),
                fmt_f64(b.std_period)
            )
        }),
    )?;
    // markers for the local models at their exact bridge densities
    let mut marker_rows = Vec::new();
    for model in ["pxp", "kk:2"] {
        let (basis, graph) = build_model(model, n)?;
        let lambda = bridge_density(&BigUint::from(basis.len()), n)?;
        let psi0 = basis_state(&basis, &SpinConfig::neel(n)?)?;
        let series = evolve(&graph, &psi0, &default_time_grid(4.0 * PI))?;
        let peak = series.revival.unwrap();
        marker_rows.push(format!(
            "{model},{},{},{}",
            fmt_f64(lambda),
            fmt_f64(fidelity_density(peak.f0, n)),
            fmt_f64(peak.t0)
        ));
    }
    write_csv(
        &dir.join("markers.csv"),
        &config,
        "model,lambda,fidelity_density,t0",
        marker_rows.into_iter(),
    )?;
    // correlation of the subspace variance with the revival fidelity
    let mut sigmas = Vec::new();
    let mut f0s = Vec::new();
    for rec in runs.iter().flatten() {
        if let (Some(sigma), Some(peak)) = (rec.sigma_e, rec.revival) {
            sigmas.push(sigma);
            f0s.push(peak.f0);
        }
    }
    let rho = spearman(&sigmas, &f0s);
    let seed_density = fidelity_density(runs[0][0].revival.unwrap().f0, n);
    let small: Vec<f64> = runs
        .iter()
        .flatten()
        .filter(|r| r.lambda > 0.0 && r.lambda <= 0.05)
        .filter_map(|r| r.revival.map(|p| fidelity_density(p.f0, n)))
        .collect();
    let (small_mean, _) = mean_std(&small);
    println!("spearman(sigma_E, f0) = {rho:.3}; small-lambda mean density {small_mean:.4} vs seed {seed_density:.4}");
    verdict(
        "fig11",
        rho <= -0.5 && small_mean > seed_density,
        &format!("sigma_E-f0 spearman {rho:.3} <= -0.5 and low-lambda revival enhancement"),
    );
    Ok(())
}

/// Star-of-hypercubes symmetric sector: scaling and bridge response.
fn fig13(dir: &std::path::Path) -> Result<(), AnyError> {
    let config = run_config("repro", json!({"tag": "fig13"}));
    let mut scaling_rows = Vec::new();
    let mut asymptotes = Vec::new();
    for d in [1u32, 2, 3] {
        let mut points = Vec::new();
        let mut n = 32usize;
        while n <= 512 {
            let chain = star_symmetric_bridged_chain(n, d, 0)?;
            let peak = ChainPropagator::new(&chain, 0)?
                .first_revival(3.0 * PI, 4000)
                .unwrap();
            scaling_rows.push(format!("{d},{n},{},{}", fmt_f64(peak.f0), fmt_f64(peak.t0)));
            points.push((((d as usize + 1) * n) as f64, peak.f0));
            n *= 2;
        }
        let fit = extrapolate_scaling(&points, FitForm::InversePoly)?;
        asymptotes.push((d, fit.asymptote));
    }
    write_csv(
        &dir.join("star_scaling.csv"),
        &config,
        "d,n,f0,t0",
        scaling_rows.into_iter(),
    )?;
    // bridge response of the symmetric sector at fixed size
    let n = 120usize;
    let mut sweep_rows = Vec::new();
    for d in [1u32, 2, 3] {
        for bridges in (0..=n as u32).step_by(8) {
            let chain = star_symmetric_bridged_chain(n, d, bridges)?;
            let peak = ChainPropagator::new(&chain, 0)?
                .first_revival(3.0 * PI, 4000)
                .unwrap();
            sweep_rows.push(format!("{d},{bridges},{}", fmt_f64(peak.f0)));
        }
    }
    write_csv(
        &dir.join("star_bridges.csv"),
        &config,
        "d,bridges,f0",
        sweep_rows.into_iter(),
    )?;
    let ok = asymptotes.iter().all(|&(_, a)| a > 0.05 && a <= 1.0 + 1e-9);
    let detail: Vec<String> = asymptotes
        .iter()
        .map(|(d, a)| format!("d={d}: f0 -> {a:.4}"))
        .collect();
    verdict("fig13", ok, &format!("finite symmetric-sector revivals: {}", detail.join(", ")));
    Ok(())
}
