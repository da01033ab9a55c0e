//! Command-line runner behind the `cavbo` binary.

use super::bundle::{fmt, fmt_opt, Axis, ResultBundle};
use super::config::{Resolved, ScenarioConfig, ScenarioKind};
use super::plot::{heat_map, line_plot, Marker, Series};
use super::workflow::{linspace, rabi_splitting, Model, System};
use crate::cbo::wells::harmonic_fit;
use crate::error::{Error, Result};
use crate::quantity::units::{mev, parse_quantity, unit_scale, Dimension, AU_TIME_FS};
use crate::spectra::TrackingOptions;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "cavbo", version, about = "Exact and cavity Born-Oppenheimer calculations for matter in a cavity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lowest exact polaritonic levels.
    SolveExact(Common),
    /// Cavity potential-energy surfaces with wells and harmonic fits.
    CboSurface(Common),
    /// Nuclear-photon eigenstates on the cavity surfaces.
    CboStates(Common),
    /// Exact levels over a coupling sweep with crossing annotations.
    SweepLambda(Common),
    /// Time evolution from a coherent field.
    Propagate(Common),
    /// Exact versus CBO energies and overlaps.
    Compare(Common),
    /// Well classification of the surfaces; with --from/--to, bisect the
    /// single to double well transition of the ground surface.
    Classify(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Scenario config file (TOML).
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario: ring, ring-table1, shin-metiu-1.5, shin-metiu-1.75.
    #[arg(long)]
    pub preset: Option<String>,
    /// Coupling strength; a bare number is read as meV^(1/2)/nm.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Sweep or bisection start coupling.
    #[arg(long)]
    pub from: Option<String>,
    /// Sweep or bisection end coupling.
    #[arg(long)]
    pub to: Option<String>,
    /// Number of sweep points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of time steps (propagate).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory (defaults to the config's run.output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Validate the config, print the resolved parameters and exit.
    #[arg(long)]
    pub dry_run: bool,
}

fn coupling(text: &str) -> Result<f64> {
    if text.trim().parse::<f64>().is_ok() {
        parse_quantity(&format!("{text} meV^(1/2)/nm"), Dimension::Coupling)
    } else {
        parse_quantity(text, Dimension::Coupling)
    }
}

fn lam_report(l: f64) -> f64 {
    l / unit_scale(Dimension::Coupling, "meV^(1/2)/nm").expect("known unit")
}

fn q_report(q: f64) -> f64 {
    q / unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs").expect("known unit")
}

fn angstrom(x: f64) -> f64 {
    x / unit_scale(Dimension::Length, "A").expect("known unit")
}

fn load(c: &Common) -> Result<(ScenarioConfig, Resolved)> {
    let cfg = match (&c.config, &c.preset) {
        (Some(p), _) => ScenarioConfig::from_file(p)?,
        (None, Some(name)) => ScenarioConfig::preset(name)?,
        (None, None) => return Err(Error::Config(vec!["give --config or --preset".into()])),
    };
    let mut res = cfg.resolve()?;
    if let Some(l) = &c.lambda {
        res.run.lambdas = vec![coupling(l)?];
        res.photon.lambda = res.run.lambdas[0];
    }
    if let Some(f) = &c.from {
        res.run.sweep_from = coupling(f)?;
    }
    if let Some(t) = &c.to {
        res.run.sweep_to = coupling(t)?;
    }
    if let Some(p) = c.points {
        res.run.sweep_points = p;
    }
    if let Some(s) = c.steps {
        res.run.n_steps = s;
    }
    if let Some(o) = &c.out {
        res.run.output = o.display().to_string();
    }
    Ok((cfg, res))
}

fn estimated_dimension(r: &Resolved) -> u128 {
    let matter = match r.scenario {
        ScenarioKind::QuantumRing => r.ring.as_ref().map(|x| x.basis_states).unwrap_or(0),
        ScenarioKind::ShinMetiu => r.shin_metiu.as_ref().map(|s| s.nuclear_points * s.adiabatic_states).unwrap_or(0),
    };
    matter as u128 * r.photon.fock_size as u128
}

fn dry_run(r: &Resolved) -> Result<()> {
    println!("{:<28} {:<34} {:>24}", "key", "given", "internal [a.u.]");
    for p in &r.parameters {
        println!("{:<28} {:<34} {:>24.12e}", p.key, p.given, p.internal);
    }
    let dim = estimated_dimension(r);
    println!("composite dimension {dim} (cap {})", r.solver.resource_cap);
    if dim > r.solver.resource_cap as u128 {
        return Err(Error::ResourceCap { estimate: dim, cap: r.solver.resource_cap as u128 });
    }
    Ok(())
}

fn error_report(e: &Error) -> String {
    let messages = match e {
        Error::Config(v) => v.clone(),
        other => vec![other.to_string()],
    };
    let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    serde_json::json!({ "error": kind, "messages": messages }).to_string()
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    if let Some(n) = std::env::var("CAVBO_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_report(&e));
            1
        }
    }
}

pub fn run(cli: &Cli, args: Vec<String>) -> Result<()> {
    let common = match &cli.command {
        Command::SolveExact(c)
        | Command::CboSurface(c)
        | Command::CboStates(c)
        | Command::SweepLambda(c)
        | Command::Propagate(c)
        | Command::Compare(c)
        | Command::Classify(c) => c,
    };
    let (cfg, res) = load(common)?;
    if common.dry_run {
        return dry_run(&res);
    }
    let sub = args.get(1).cloned().unwrap_or_default();
    let dir = PathBuf::from(&res.run.output).join(&sub);
    let mut bundle = ResultBundle::create(&dir, cfg.to_toml_string(), args)?;
    let sys = System::build(&res)?;
    match &cli.command {
        Command::SolveExact(_) => solve_exact(&sys, &mut bundle)?,
        Command::CboSurface(_) => cbo_surface(&sys, &mut bundle)?,
        Command::CboStates(_) => cbo_states(&sys, &mut bundle)?,
        Command::SweepLambda(_) => sweep(&sys, &mut bundle)?,
        Command::Propagate(_) => trajectory(&sys, &mut bundle)?,
        Command::Compare(_) => compare(&sys, &mut bundle)?,
        Command::Classify(c) => classify(&sys, &mut bundle, c.from.is_some() || c.to.is_some())?,
    }
    let m = bundle.finish()?;
    println!("wrote {}", m.display());
    Ok(())
}

fn solve_exact(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let mut rows = Vec::new();
    for &l in &sys.config.run.lambdas {
        let (asm, s) = sys.exact(l, sys.config.solver.exact_states)?;
        let e: Vec<f64> = s.values.iter().map(|e| mev(e - asm.vacuum_energy())).collect();
        println!("λ = {} meV^(1/2)/nm: {:?}", lam_report(l), e.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());
        for (i, (e, r)) in e.iter().zip(&s.residuals).enumerate() {
            rows.push(vec![fmt(lam_report(l)), (i + 1).to_string(), fmt(*e), fmt(*r)]);
        }
    }
    b.note("energies are referenced to the photon vacuum ½ħω");
    b.write_csv(
        "levels.csv",
        &["lambda[meV^(1/2)/nm]".into(), "level[-]".into(), "E[meV]".into(), "residual[Eh]".into()],
        &rows,
    )?;
    Ok(())
}

fn cbo_surface(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let omega = sys.photon().omega;
    for &l in &sys.config.run.lambdas {
        let run = sys.cbo(l)?;
        let tag = format!("{:.4}", lam_report(l));
        let mesh = &run.set.mesh;
        match &sys.model {
            Model::Ring(_) => {
                let q: Vec<f64> = mesh.axes[0].grid.coords();
                let mut header = vec!["q[sqrt(aJ)*fs]".to_string()];
                header.extend((0..run.surfaces.len()).map(|j| format!("V_{j}[meV]")));
                let rows: Vec<Vec<String>> = (0..q.len())
                    .map(|i| {
                        let mut r = vec![fmt(q_report(q[i]))];
                        r.extend(run.surfaces.iter().map(|s| fmt(mev(s.values[i]))));
                        r
                    })
                    .collect();
                b.write_csv(&format!("pes_lambda{tag}.csv"), &header, &rows)?;
                // deviation from ε_j(0) + ½ω²q², which is exact at zero coupling
                let dev = run
                    .surfaces
                    .iter()
                    .map(|s| {
                        let e0 = run.set.energies[mesh.center()][s.index];
                        q.iter().zip(&s.values).map(|(q, v)| (v - e0 - 0.5 * omega * omega * q * q).abs()).fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                println!("λ = {tag}: max deviation from the uncoupled harmonic reference {:.3e} meV", mev(dev));
                let qs: Vec<f64> = q.iter().map(|x| q_report(*x)).collect();
                let vs: Vec<Vec<f64>> = run.surfaces.iter().map(|s| s.values.iter().map(|v| mev(*v)).collect()).collect();
                let series: Vec<Series> =
                    vs.iter().enumerate().map(|(j, v)| Series { label: format!("V_{j}"), x: &qs, y: v }).collect();
                let markers: Vec<Marker> = run
                    .surfaces
                    .iter()
                    .flat_map(|s| s.wells.minima().iter().map(move |m| (s.index, m)))
                    .map(|(j, m)| Marker { x: q_report(m.coords[0]), y: mev(m.value), label: format!("min V_{j}") })
                    .collect();
                b.write_text(
                    &format!("pes_lambda{tag}.svg"),
                    &line_plot(&format!("cavity surfaces, λ = {tag}"), "q [√(aJ)·fs]", "V [meV]", &series, &markers),
                )?;
                for s in &run.surfaces {
                    let fits = harmonic_fit(mesh, &s.values, &s.wells, 0.1).unwrap_or_default();
                    for (m, f) in s.wells.minima().iter().zip(&fits) {
                        println!(
                            "  V_{}: {} well, minimum q = {:.3} √aJ·fs, ω̃/ω = {:.4}",
                            s.index,
                            s.wells.name(),
                            q_report(m.coords[0]),
                            f.omega / omega
                        );
                    }
                }
            }
            Model::ShinMetiu(_) => {
                let r: Vec<f64> = mesh.axes[0].grid.coords().iter().map(|x| angstrom(*x)).collect();
                let q: Vec<f64> = mesh.axes[1].grid.coords().iter().map(|x| q_report(*x)).collect();
                for s in &run.surfaces {
                    let v: Vec<f64> = s.values.iter().map(|v| mev(*v)).collect();
                    b.write_array(
                        &format!("pes{}_lambda{tag}", s.index),
                        &v,
                        vec![
                            Axis { name: "R".into(), unit: "Å".into(), len: r.len() },
                            Axis { name: "q".into(), unit: "sqrt(aJ)*fs".into(), len: q.len() },
                        ],
                        &format!("V_{}", s.index),
                        "meV",
                    )?;
                    let minima: Vec<(f64, f64)> =
                        s.wells.minima().iter().map(|m| (angstrom(m.coords[0]), q_report(m.coords[1]))).collect();
                    println!("λ = {tag}: V_{} {} well, minima (R[Å], q[√aJ·fs]) {:?}", s.index, s.wells.name(), minima);
                    b.write_text(
                        &format!("pes{}_lambda{tag}.svg", s.index),
                        &heat_map(&format!("V_{}, λ = {tag}", s.index), "R [Å]", "q [√(aJ)·fs]", &r, &q, &v, &minima),
                    )?;
                }
            }
        }
        b.write_json(&format!("wells_lambda{tag}.json"), &run.surfaces.iter().map(|s| &s.wells).collect::<Vec<_>>())?;
    }
    Ok(())
}

fn cbo_states(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let mut rows = Vec::new();
    let vac = 0.5 * sys.photon().omega;
    for &l in &sys.config.run.lambdas {
        let run = sys.cbo(l)?;
        println!("λ = {}:", lam_report(l));
        for s in run.states.iter().take(sys.config.solver.exact_states) {
            let (e, n) = s.label();
            println!("  ({e},{n})  {:.4} meV", mev(s.energy - vac));
        }
        for s in &run.states {
            let (e, n) = s.label();
            rows.push(vec![fmt(lam_report(l)), e.to_string(), n.to_string(), fmt(mev(s.energy - vac))]);
        }
    }
    b.note("energies are referenced to the photon vacuum ½ħω");
    b.write_csv(
        "cbo_states.csv",
        &["lambda[meV^(1/2)/nm]".into(), "surface[-]".into(), "vib[-]".into(), "E[meV]".into()],
        &rows,
    )?;
    Ok(())
}

fn sweep(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let run = &sys.config.run;
    let lambdas = linspace(run.sweep_from, run.sweep_to, run.sweep_points);
    let window = sys.config.solver.exact_states.max(2);
    let opts = TrackingOptions { window, gap_threshold: 1e-6 * sys.photon().omega, ..Default::default() };
    let (curves, vac) = sys.sweep(&lambdas, &opts)?;
    let k = curves.curves.len();
    let mut header = vec!["lambda[meV^(1/2)/nm]".to_string()];
    header.extend((0..k).map(|c| format!("E_{}[meV]", c + 1)));
    let rows: Vec<Vec<String>> = (0..lambdas.len())
        .map(|s| {
            let mut r = vec![fmt(lam_report(lambdas[s]))];
            r.extend((0..k).map(|c| fmt(mev(curves.curves[c][s] - vac))));
            r
        })
        .collect();
    b.note("E_c are tracked curves labelled by their order at the first coupling");
    b.write_csv("level_curves.csv", &header, &rows)?;
    let cross: Vec<Vec<String>> = curves
        .crossings
        .iter()
        .map(|c| {
            vec![
                "crossing".into(),
                format!("{}-{}", c.levels.0 + 1, c.levels.1 + 1),
                fmt(lam_report(c.lambda)),
                fmt(mev(c.energy - vac)),
            ]
        })
        .chain(curves.avoided.iter().map(|a| {
            vec!["avoided".into(), format!("{}-{}", a.levels.0 + 1, a.levels.1 + 1), fmt(lam_report(a.lambda)), fmt(mev(a.gap))]
        }))
        .collect();
    b.note("crossings.csv: value[meV] is the crossing energy, or the minimal gap for avoided crossings");
    b.write_csv(
        "crossings.csv",
        &["kind".into(), "levels".into(), "lambda[meV^(1/2)/nm]".into(), "value[meV]".into()],
        &cross,
    )?;
    for r in &cross {
        println!("{} levels {} at λ = {} ({} meV)", r[0], r[1], r[2], r[3]);
    }
    if matches!(sys.model, Model::ShinMetiu(_)) {
        let mut rows = Vec::new();
        for (s, &l) in lambdas.iter().enumerate() {
            let mut sorted: Vec<f64> = (0..k).map(|c| curves.curves[c][s]).collect();
            sorted.sort_by(|a, b| a.total_cmp(b));
            let gap = sys.electronic_gap(l)?;
            let rabi = rabi_splitting(&sorted, sys.photon().omega);
            println!("λ = {:.3}: gap {:.2} meV, Ω_R = {:.2}%", lam_report(l), mev(gap), 100.0 * rabi.unwrap_or(f64::NAN));
            rows.push(vec![fmt(lam_report(l)), fmt(mev(gap)), fmt_opt(rabi.map(|x| 100.0 * x))]);
        }
        b.write_csv(
            "gap.csv",
            &["lambda[meV^(1/2)/nm]".into(), "gap[meV]".into(), "rabi_splitting[%]".into()],
            &rows,
        )?;
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| lam_report(*l)).collect();
    let ys: Vec<Vec<f64>> = curves.curves.iter().map(|c| c.iter().map(|e| mev(e - vac)).collect()).collect();
    let series: Vec<Series> = ys.iter().enumerate().map(|(c, y)| Series { label: format!("E_{}", c + 1), x: &xs, y }).collect();
    let markers: Vec<Marker> = curves
        .crossings
        .iter()
        .map(|c| Marker { x: lam_report(c.lambda), y: mev(c.energy - vac), label: "×".into() })
        .collect();
    b.write_text("level_curves.svg", &line_plot("exact levels", "λ [meV^(1/2)/nm]", "E [meV]", &series, &markers))?;
    Ok(())
}

fn trajectory(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let l = sys.config.run.lambdas[0];
    let rec = sys.propagate(l, 3)?;
    let rows: Vec<Vec<String>> = (0..rec.times.len())
        .map(|i| {
            vec![
                fmt(rec.times[i] * AU_TIME_FS * 1e-3),
                fmt(rec.dipole[i] / unit_scale(Dimension::Length, "nm").expect("known unit")),
                fmt_opt(rec.mandel_q[i]),
                fmt(rec.purity[i]),
                fmt(rec.photon_number[i]),
                fmt(rec.populations[i][0]),
                fmt(rec.populations[i][2]),
                fmt(rec.norm[i]),
                fmt(mev(rec.energy[i])),
            ]
        })
        .collect();
    let header: Vec<String> =
        ["t[ps]", "dipole[nm]", "mandel_Q[-]", "purity[-]", "n_photon[-]", "P1[-]", "P3[-]", "norm[-]", "energy[meV]"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    b.write_csv("trajectory.csv", &header, &rows)?;
    let t: Vec<f64> = rec.times.iter().map(|t| t * AU_TIME_FS * 1e-3).collect();
    let p1 = rec.population(0);
    let p3 = rec.population(2);
    b.write_text(
        "trajectory.svg",
        &line_plot(
            "photon statistics and populations",
            "t [ps]",
            "[-]",
            &[
                Series { label: "purity".into(), x: &t, y: &rec.purity },
                Series { label: "P1".into(), x: &t, y: &p1 },
                Series { label: "P3".into(), x: &t, y: &p3 },
            ],
            &[],
        ),
    )?;
    println!("{} samples, max Krylov dimension {}", rec.times.len(), rec.max_krylov_dim);
    Ok(())
}

fn compare(sys: &System, b: &mut ResultBundle) -> Result<()> {
    let mut rows = Vec::new();
    for &l in &sys.config.run.lambdas {
        let c = sys.compare(l)?;
        println!("λ = {} meV^(1/2)/nm", lam_report(l));
        println!("  {:>3} {:>10} {:>10} {:>7} {:>9}", "#", "E [meV]", "E_CBO", "(e,n)", "overlap%");
        for r in &c.rows {
            let (e, n) = r.cbo_label;
            println!(
                "  {:>3} {:>10.4} {:>10.4} {:>7} {:>9.2}",
                r.exact_index + 1,
                mev(r.exact_energy - c.vacuum),
                mev(r.cbo_energy - c.vacuum),
                format!("({e},{n})"),
                r.overlap_percent
            );
            rows.push(vec![
                fmt(lam_report(l)),
                (r.exact_index + 1).to_string(),
                fmt(mev(r.exact_energy - c.vacuum)),
                fmt(mev(r.cbo_energy - c.vacuum)),
                e.to_string(),
                n.to_string(),
                fmt(r.overlap_percent),
            ]);
        }
    }
    b.note("energies are referenced to the photon vacuum ½ħω");
    let header: Vec<String> =
        ["lambda[meV^(1/2)/nm]", "state[-]", "E_exact[meV]", "E_CBO[meV]", "surface[-]", "vib[-]", "overlap[%]"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    b.write_csv("comparison.csv", &header, &rows)?;
    Ok(())
}

fn classify(sys: &System, b: &mut ResultBundle, onset: bool) -> Result<()> {
    if onset {
        let run = &sys.config.run;
        let q = sys.photon().q_grid()?;
        let at = sys.double_well_onset(run.sweep_from, run.sweep_to, 1e-4 * unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?, &q)?;
        println!("ground surface turns double-well at λ = {:.4} meV^(1/2)/nm", lam_report(at));
        b.write_csv("onset.csv", &["lambda_onset[meV^(1/2)/nm]".into()], &[vec![fmt(lam_report(at))]])?;
        return Ok(());
    }
    let mut rows = Vec::new();
    for &l in &sys.config.run.lambdas {
        let run = sys.cbo(l)?;
        for s in &run.surfaces {
            let coords: Vec<String> = s
                .wells
                .minima()
                .iter()
                .map(|m| match m.coords.len() {
                    1 => format!("{:.4}", q_report(m.coords[0])),
                    _ => format!("{:.4}/{:.4}", angstrom(m.coords[0]), q_report(m.coords[1])),
                })
                .collect();
            println!("λ = {:.4}: V_{} {} well at {}", lam_report(l), s.index, s.wells.name(), coords.join(" "));
            rows.push(vec![
                fmt(lam_report(l)),
                s.index.to_string(),
                s.wells.name().to_string(),
                s.wells.minima().len().to_string(),
                coords.join(" "),
            ]);
        }
    }
    b.note("minima: q in sqrt(aJ)*fs, or R[Å]/q[sqrt(aJ)*fs] on two-dimensional surfaces");
    b.write_csv(
        "classification.csv",
        &["lambda[meV^(1/2)/nm]".into(), "surface[-]".into(), "class".into(), "minima[-]".into(), "locations".into()],
        &rows,
    )?;
    Ok(())
}
