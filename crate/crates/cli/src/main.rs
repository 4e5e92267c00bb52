mod output;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use scargraph::basis::{
    enumerate_basis, hilbert_dimension, quantum_dimension, Basis, Boundary, ConstraintSpec,
    ModelFamily, SpinConfig,
};
use scargraph::chains::{
    bridged_middle_chain, evolve_chain, extrapolate_scaling, hypercube_chain,
    star_symmetric_bridged_chain, two_hypercube_chain, ChainPropagator, FitForm, TbChain,
};
use scargraph::dynamics::{
    basis_state, default_time_grid, evolve, scan_initial_states,
};
use scargraph::error::ScarError;
use scargraph::fsa::{exact_steps, fsa_recurrence, fsa_spectrum, split_pm, subspace_variance};
use scargraph::graph::{build_2hg, build_adjacency, SparseOperator};
use scargraph::sampler::{run_bridge_sampler, SamplerConfig, SeedGraph};
use scargraph::spectral::{
    entanglement_entropy, ks_distance, overlap_profile, r_statistic, target_overlap_data,
    unfold_spacings, wigner_surmise_cdf,
};
use scargraph::symmetry::{project_sector, sector_basis, translation_orbits, Parity};

use output::{fmt_f64, run_config, write_csv, write_json, write_jsonl};

/// Constrained spin chains as Hilbert-space graphs: dimensions, dynamics,
/// effective chains, spectra and random daisy-cube sampling.
#[derive(Parser)]
#[command(name = "scargraph", version)]
struct Cli {
    /// Worker threads for parallel scans (default: all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Hilbert-space dimension and quantum dimension.
    Dims {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "pbc")]
        bc: String,
    },
    /// Export the adjacency graph in Matrix Market format plus an index map.
    BuildGraph {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Fidelity time series from a product state.
    Evolve {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// neel | z2 | z3 | z4 | 1100 | explicit bitstring
        #[arg(long, default_value = "neel")]
        state: String,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Revival survey over all initial basis states (orbit representatives).
    Scan {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3.0 * std::f64::consts::PI)]
        horizon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward-scattering chain: couplings, exact steps, subspace variance.
    Fsa {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "neel")]
        state: String,
    },
    /// Tight-binding chain dynamics from the corner site.
    Chain {
        /// hypercube | 2hc | star | bridged
        #[arg(long)]
        kind: String,
        /// Per-cube dimension.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        bridges: u32,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-size extrapolation of chain revival observables.
    ChainScaling {
        #[arg(long, default_value = "2hc")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 32)]
        min_n: usize,
        #[arg(long, default_value_t = 2048)]
        max_n: usize,
        /// poly (a + b/N + c/N^2) or sqrt (a + b/sqrt(N) + c/N), for f0
        #[arg(long, default_value = "poly")]
        fit: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sector-resolved spectra, overlaps, entropies and level statistics.
    Spectrum {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// k=<int>[,inv=+1|-1]; omit for all momenta.
        #[arg(long)]
        sector: Option<String>,
        /// Overlap target state (same grammar as evolve --state).
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random-bridge daisy-cube growth runs.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value = "2hc")]
        seed_graph: String,
        #[arg(long, default_value_t = false)]
        sigma_e: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Desk-scale reproduction recipes for the figure-level results.
    Repro {
        /// fig3 | fig4 | fig5 | fig6 | fig7 | fig10 | fig11 | fig13
        tag: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<ScarError>() {
                Some(ScarError::ResourceLimit(_)) => ExitCode::from(3),
                Some(ScarError::InvalidArgument(_)) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn parse_model(spec: &str) -> Result<ModelFamily, AnyError> {
    if let Some(path) = spec.strip_prefix("custom:") {
        let text = std::fs::read_to_string(path)?;
        let mut maximal = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            maximal.push(SpinConfig::parse(line)?);
        }
        if maximal.is_empty() {
            return Err(Box::new(ScarError::invalid("empty maximal vertex file")));
        }
        return Ok(ModelFamily::Custom(maximal));
    }
    Ok(ModelFamily::parse_spec(spec)?)
}

fn parse_state(state: &str, n: usize) -> Result<SpinConfig, AnyError> {
    let config = match state {
        "neel" | "z2" => SpinConfig::neel(n)?,
        "z3" => SpinConfig::z_state(n, 3)?,
        "z4" => SpinConfig::z_state(n, 4)?,
        "1100" => {
            if n % 4 != 0 {
                return Err(Box::new(ScarError::invalid("1100 pattern needs 4 | N")));
            }
            SpinConfig::parse(&"1100".repeat(n / 4))?
        }
        bits => SpinConfig::parse(bits)?,
    };
    if config.n_sites() != n {
        return Err(Box::new(ScarError::invalid(format!(
            "state has {} sites, expected {n}",
            config.n_sites()
        ))));
    }
    Ok(config)
}

fn parse_sector(s: &str) -> Result<(usize, Option<Parity>), AnyError> {
    let mut k = None;
    let mut parity = None;
    for part in s.split(',') {
        if let Some(v) = part.strip_prefix("k=") {
            k = Some(v.parse::<usize>()?);
        } else if let Some(v) = part.strip_prefix("inv=") {
            parity = Some(match v {
                "+1" | "1" | "+" => Parity::Even,
                "-1" | "-" => Parity::Odd,
                other => {
                    return Err(Box::new(ScarError::invalid(format!(
                        "bad inversion parity '{other}'"
                    ))))
                }
            });
        } else {
            return Err(Box::new(ScarError::invalid(format!(
                "bad sector component '{part}'"
            ))));
        }
    }
    let k = k.ok_or_else(|| ScarError::invalid("sector needs k=<int>"))?;
    Ok((k, parity))
}

pub fn build_model(spec: &str, n: usize) -> Result<(Basis, SparseOperator), AnyError> {
    let family = parse_model(spec)?;
    if family == ModelFamily::TwoHypergrid {
        let (basis, graph) = build_2hg(n)?;
        return Ok((basis, graph));
    }
    let basis = enumerate_basis(&ConstraintSpec::new(family), n)?;
    let graph = build_adjacency(&basis)?;
    Ok((basis, graph))
}

fn dispatch(command: Command) -> Result<(), AnyError> {
    match command {
        Command::Dims { model, n, bc } => {
            let family = parse_model(&model)?;
            let boundary = match bc.as_str() {
                "pbc" => Boundary::Periodic,
                "obc" => Boundary::Open,
                other => {
                    return Err(Box::new(ScarError::invalid(format!(
                        "bad boundary '{other}' (pbc|obc)"
                    ))))
                }
            };
            let spec = ConstraintSpec::new(family.clone()).with_boundary(boundary);
            let dim = hilbert_dimension(&spec, n)?;
            let alpha = quantum_dimension(&spec).ok();
            let config = run_config("dims", json!({"model": model, "n": n, "bc": bc}));
            let payload = json!({
                "model": family.label(),
                "N": n,
                "bc": bc,
                "dim": dim.to_string(),
                "alpha": alpha,
                "config": config,
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
        Command::BuildGraph { model, n, export } => {
            let (basis, graph) = build_model(&model, n)?;
            println!(
                "model {model} N={n}: {} vertices, {} edges",
                basis.len(),
                graph.nnz() / 2
            );
            if let Some(path) = export {
                let mut mm = String::new();
                mm.push_str("%%MatrixMarket matrix coordinate pattern symmetric\n");
                mm.push_str(&format!("% model {model} N={n}\n"));
                mm.push_str(&format!(
                    "{} {} {}\n",
                    basis.len(),
                    basis.len(),
                    graph.nnz() / 2
                ));
                for (u, v) in graph.edges() {
                    // 1-based, lower triangle of the symmetric pattern
                    mm.push_str(&format!("{} {}\n", v + 1, u + 1));
                }
                std::fs::write(&path, mm)?;
                let map: Vec<String> =
                    (0..basis.len()).map(|i| basis.config(i).to_string()).collect();
                let config = run_config("build-graph", json!({"model": model, "n": n}));
                let sidecar = path.with_extension("index.json");
                write_json(&sidecar, &json!({"config": config, "vertices": map}))?;
                println!("wrote {} and {}", path.display(), sidecar.display());
            }
            Ok(())
        }
        Command::Evolve {
            model,
            n,
            state,
            tmax,
            out,
        } => {
            let (basis, graph) = build_model(&model, n)?;
            let target = parse_state(&state, n)?;
            let psi0 = basis_state(&basis, &target)?;
            let times = default_time_grid(tmax);
            let series = evolve(&graph, &psi0, &times)?;
            let mut config = run_config(
                "evolve",
                json!({"model": model, "n": n, "state": target.to_string(), "tmax": tmax}),
            );
            config["revival"] = match series.revival {
                Some(p) => json!({"f0": p.f0, "t0": p.t0}),
                None => json!(null),
            };
            config["reflection"] = match series.reflection {
                Some(p) => json!({"f": p.f0, "t": p.t0}),
                None => json!(null),
            };
            write_csv(
                &out,
                &config,
                "t,fidelity",
                series
                    .times
                    .iter()
                    .zip(&series.values)
                    .map(|(t, f)| format!("{},{}", fmt_f64(*t), fmt_f64(*f))),
            )?;
            match series.revival {
                Some(p) => println!("first revival f0 = {:.6} at t = {:.6}", p.f0, p.t0),
                None => println!("no revival detected within the horizon"),
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Scan {
            model,
            n,
            horizon,
            out,
        } => {
            let (basis, graph) = build_model(&model, n)?;
            let orbits = translation_orbits(&basis)?;
            let scan = scan_initial_states(&graph, &basis, &orbits, horizon)?;
            let config = run_config("scan", json!({"model": model, "n": n, "horizon": horizon}));
            let records: Vec<_> = scan
                .records
                .iter()
                .map(|r| {
                    json!({
                        "state": r.representative.to_string(),
                        "orbit_size": r.orbit_size,
                        "f0": r.revival.map(|p| p.f0),
                        "t0": r.revival.map(|p| p.t0),
                    })
                })
                .collect();
            let payload = json!({
                "config": config,
                "records": records,
                "best": scan.best.as_ref().map(|b| json!({
                    "state": b.representative.to_string(),
                    "f0": b.revival.unwrap().f0,
                    "t0": b.revival.unwrap().t0,
                })),
                "mean_f0": scan.mean_f0,
                "std_f0": scan.std_f0,
                "mean_t": scan.mean_t,
                "std_t": scan.std_t,
                "undetected": scan.undetected,
            });
            match out {
                Some(path) => {
                    write_json(&path, &payload)?;
                    println!("wrote {}", path.display());
                }
                None => println!("{}", serde_json::to_string_pretty(&payload)?),
            }
            Ok(())
        }
        Command::Fsa { model, n, state } => {
            let (basis, graph) = build_model(&model, n)?;
            let root = parse_state(&state, n)?;
            let (hp, hm) = split_pm(&graph, &basis, &root)?;
            let chain = fsa_recurrence(&hp, &basis, &root, true)?;
            let steps = exact_steps(&hm, &chain)?;
            let sigma = subspace_variance(&graph, &chain)?;
            let (vals, _) = fsa_spectrum(&chain);
            let config = run_config(
                "fsa",
                json!({"model": model, "n": n, "state": root.to_string()}),
            );
            let payload = json!({
                "config": config,
                "couplings": chain.couplings,
                "chain_length": chain.len(),
                "exact_steps": steps,
                "sigma_e": sigma,
                "eigenvalues": vals,
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(())
        }
        Command::Chain {
            kind,
            n,
            d,
            bridges,
            tmax,
            out,
        } => {
            let chain: TbChain = match kind.as_str() {
                "hypercube" => hypercube_chain(n),
                "2hc" => two_hypercube_chain(n),
                "star" => star_symmetric_bridged_chain(n, d, bridges)?,
                "bridged" => bridged_middle_chain(n, bridges)?,
                other => {
                    return Err(Box::new(ScarError::invalid(format!(
                        "bad chain kind '{other}'"
                    ))))
                }
            };
            let times = default_time_grid(tmax);
            let series = evolve_chain(&chain, 0, &times)?;
            let mut config = run_config(
                "chain",
                json!({"kind": kind, "n": n, "d": d, "bridges": bridges, "tmax": tmax}),
            );
            config["revival"] = match series.revival {
                Some(p) => json!({"f0": p.f0, "t0": p.t0}),
                None => json!(null),
            };
            write_csv(
                &out,
                &config,
                "t,fidelity",
                series
                    .times
                    .iter()
                    .zip(&series.values)
                    .map(|(t, f)| format!("{},{}", fmt_f64(*t), fmt_f64(*f))),
            )?;
            match series.revival {
                Some(p) => println!("first revival f0 = {:.6} at t = {:.6}", p.f0, p.t0),
                None => println!("no revival detected within the horizon"),
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::ChainScaling {
            kind,
            d,
            min_n,
            max_n,
            fit,
            out,
        } => {
            let form = match fit.as_str() {
                "poly" => FitForm::InversePoly,
                "sqrt" => FitForm::InverseSqrt,
                other => {
                    return Err(Box::new(ScarError::invalid(format!(
                        "bad fit form '{other}' (poly|sqrt)"
                    ))))
                }
            };
            let payload = chain_scaling_report(&kind, d, min_n, max_n, form)?;
            match out {
                Some(path) => {
                    write_json(&path, &payload)?;
                    println!("wrote {}", path.display());
                }
                None => println!("{}", serde_json::to_string_pretty(&payload)?),
            }
            Ok(())
        }
        Command::Spectrum {
            model,
            n,
            sector,
            target,
            out,
        } => spectrum_command(&model, n, sector.as_deref(), target.as_deref(), &out),
        Command::Sample {
            n,
            seeds,
            seed_graph,
            sigma_e,
            out,
        } => {
            let seed_graph_kind = match seed_graph.as_str() {
                "2hc" => SeedGraph::TwoCubes,
                "star3" => SeedGraph::Star { d: 2 },
                "star4" => SeedGraph::Star { d: 3 },
                other => {
                    return Err(Box::new(ScarError::invalid(format!(
                        "bad seed graph '{other}' (2hc|star3|star4)"
                    ))))
                }
            };
            let config = run_config(
                "sample",
                json!({
                    "n": n, "seeds": seeds, "seed_graph": seed_graph,
                    "sigma_e": sigma_e, "horizon": 4.0 * std::f64::consts::PI,
                    "pick_distribution": "uniform over weight-m words",
                    "m_advance": "on drawing any word already in the graph",
                }),
            );
            let mut lines = vec![json!({"config": config})];
            for seed in 0..seeds {
                let cfg = SamplerConfig {
                    n,
                    seed,
                    seed_graph: seed_graph_kind,
                    horizon: 4.0 * std::f64::consts::PI,
                    sigma_e,
                };
                for rec in run_bridge_sampler(&cfg)? {
                    lines.push(json!({
                        "seed": rec.seed,
                        "step": rec.step,
                        "m": rec.m,
                        "lambda": rec.lambda,
                        "graph_size": rec.graph_size,
                        "f0": rec.revival.map(|p| p.f0),
                        "t0": rec.revival.map(|p| p.t0),
                        "sigma_e": rec.sigma_e,
                        "added": rec.added.map(|c| c.to_string()),
                    }));
                }
            }
            write_jsonl(&out, &lines)?;
            println!("wrote {} ({} records)", out.display(), lines.len() - 1);
            Ok(())
        }
        Command::Repro { tag, out } => repro::run(&tag, out),
    }
}

pub fn chain_scaling_report(
    kind: &str,
    d: u32,
    min_n: usize,
    max_n: usize,
    form: FitForm,
) -> Result<serde_json::Value, AnyError> {
    let mut f_points = Vec::new();
    let mut t_points = Vec::new();
    let mut samples = Vec::new();
    let mut n = min_n;
    while n <= max_n {
        let chain: TbChain = match kind {
            "2hc" => two_hypercube_chain(n),
            "star" => star_symmetric_bridged_chain(n, d, 0)?,
            other => {
                return Err(Box::new(ScarError::invalid(format!(
                    "scaling supports 2hc|star, got '{other}'"
                ))))
            }
        };
        let prop = ChainPropagator::new(&chain, 0)?;
        let peak = prop
            .first_revival(3.0 * std::f64::consts::PI, 6000)
            .ok_or_else(|| ScarError::invalid("no revival found for scaling point"))?;
        let total = match kind {
            "2hc" => (2 * n) as f64,
            _ => ((d as usize + 1) * n) as f64,
        };
        f_points.push((total, peak.f0));
        t_points.push((total, peak.t0));
        samples.push(json!({"n": n, "N": total, "f0": peak.f0, "t0": peak.t0}));
        n *= 2;
    }
    let f_fit = extrapolate_scaling(&f_points, form)?;
    // the period converges as 1/sqrt(N); its fit always uses that basis
    let t_fit = extrapolate_scaling(&t_points, FitForm::InverseSqrt)?;
    let config = run_config(
        "chain-scaling",
        json!({
            "kind": kind, "d": d, "min_n": min_n, "max_n": max_n,
            "f0_fit_form": f_fit.form.label(),
            "t_fit_form": t_fit.form.label(),
        }),
    );
    Ok(json!({
        "config": config,
        "samples": samples,
        "f0_asymptote": f_fit.asymptote,
        "f0_error": f_fit.std_error,
        "t_asymptote": t_fit.asymptote,
        "t_error": t_fit.std_error,
    }))
}

fn spectrum_command(
    model: &str,
    n: usize,
    sector: Option<&str>,
    target: Option<&str>,
    out: &std::path::Path,
) -> Result<(), AnyError> {
    let (basis, graph) = build_model(model, n)?;
    let orbits = translation_orbits(&basis)?;
    let requested: Vec<(usize, Option<Parity>)> = match sector {
        Some(s) => {
            let (k, parity) = parse_sector(s)?;
            vec![(k, parity)]
        }
        None => (0..n).map(|k| (k, None)).collect(),
    };
    std::fs::create_dir_all(out)?;
    let config = run_config(
        "spectrum",
        json!({"model": model, "n": n, "sector": sector, "target": target}),
    );

    let mut eigen_rows = Vec::new();
    let mut entropy_rows = Vec::new();
    let mut all_values = Vec::new();
    for &(k, parity) in &requested {
        let sec = sector_basis(&basis, &orbits, k, parity)?;
        if sec.dim() == 0 {
            continue;
        }
        let matrix = project_sector(&graph, &basis, &sec)?;
        let parity_label = match parity {
            Some(Parity::Even) => "+1",
            Some(Parity::Odd) => "-1",
            None => "",
        };
        let (vals, vecs) = matrix.eigenpairs();
        for (m, &e) in vals.iter().enumerate() {
            eigen_rows.push(format!("{k},{parity_label},{}", fmt_f64(e)));
            all_values.push(e);
            if n % 2 == 0 {
                let mut padded = vec![num_complex::Complex64::ZERO; basis.len()];
                sec.lift_into(&vecs[m], &mut padded[..]);
                let s = entanglement_entropy(&padded, &basis, n / 2)?;
                entropy_rows.push(format!(
                    "{k},{parity_label},{},{}",
                    fmt_f64(e),
                    fmt_f64(s)
                ));
            }
        }
    }
    write_csv(
        &out.join("eigenvalues.csv"),
        &config,
        "k,inversion,energy",
        eigen_rows.into_iter(),
    )?;
    if !entropy_rows.is_empty() {
        write_csv(
            &out.join("entropy.csv"),
            &config,
            "k,inversion,energy,entropy",
            entropy_rows.into_iter(),
        )?;
    }

    if let Some(state) = target {
        let target_config = parse_state(state, n)?;
        let items = target_overlap_data(&graph, &basis, &orbits, &target_config)?;
        let (hp, _) = split_pm(&graph, &basis, &target_config)?;
        let chain = fsa_recurrence(&hp, &basis, &target_config, false)?;
        let (fsa_vals, _) = fsa_spectrum(&chain);
        let profile = overlap_profile(&items, &fsa_vals);
        let top: std::collections::HashSet<usize> = profile.top_band.iter().copied().collect();
        write_csv(
            &out.join("overlaps.csv"),
            &config,
            "energy,overlap,top_band",
            profile.entries.iter().enumerate().map(|(i, (e, w))| {
                format!(
                    "{},{},{}",
                    fmt_f64(*e),
                    fmt_f64(*w),
                    u8::from(top.contains(&i))
                )
            }),
        )?;
    }

    // spacing statistics are only meaningful within a single symmetry
    // sector; mixing momenta superposes independent spectra
    let stats = if sector.is_none() {
        json!({"note": "pass --sector to get level statistics for one symmetry sector"})
    } else {
        match (
            r_statistic(&all_values, 0.025),
            unfold_spacings(&all_values),
        ) {
            (Ok(r), Ok(unfolded)) => {
                let ks = ks_distance(&unfolded.spacings, wigner_surmise_cdf);
                json!({
                    "r_value": r,
                    "ks_to_wigner_dyson": ks,
                    "edge_discard": 0.025,
                    "histogram": unfolded.histogram,
                })
            }
            (Ok(r), Err(_)) => json!({"r_value": r, "edge_discard": 0.025}),
            _ => json!({"note": "too few levels for statistics"}),
        }
    };
    write_json(
        &out.join("levelstats.json"),
        &json!({"config": config, "stats": stats}),
    )?;
    println!("wrote spectrum artifacts under {}", out.display());
    Ok(())
}
