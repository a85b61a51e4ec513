//! Command-line front end: configuration parsing, experiment orchestration,
//! and CSV/JSON emission for the half-line toolkit.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use halfline::evolve::{convergence_study, observables, trotter_evolve, GridSpec, KineticMethod,
                       TrotterPlan};
use halfline::extensions::{deficiency_indices, make_reference_modes,
                           verify_deficiency_integrability, BcKind};
use halfline::kernels::{KernelSpec, TimeMode};
use halfline::mcpaths::{estimate_propagator, McBoundary, McConfig, ZBins};
use halfline::numerics::interp_cubic;
use halfline::spectral::{dirichlet_eigenbasis, fd_eigensolve, SpectralBasis};
use halfline::wavefunction::{Representation, WaveFunction};
use halfline::{Error as CoreError, Regime};

use config::{apply_json, RunConfig};
use output::{write_artifact, Cell, Table};

#[derive(Parser)]
#[command(
    name = "halfline",
    version,
    about = "Half-line Hamiltonian toolkit: ordering classification, self-adjoint extensions, \
             boundary kernels, time-sliced propagation, spectral oracles, and path-measure \
             Monte Carlo",
    after_help = "Outputs carry a header echoing the resolved configuration; CSV columns are \
                  documented per command (--help on a subcommand). QG_THREADS caps the worker \
                  pool."
)]
struct Cli {
    /// Flat key-value JSON config file; command-line flags override its keys.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Ordering triple j1 j2 j3 (must sum to 1).
    #[arg(long, num_args = 3, value_names = ["J1", "J2", "J3"], allow_negative_numbers = true)]
    j: Option<Vec<f64>>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Boundary condition: theta=X, l=X, beta=X, dirichlet, or neumann.
    #[arg(long)]
    bc: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an ordering: derived quantities, regime, deficiency indices.
    /// Columns: j1,j2,j3,j_plus,j_minus,q,nu,m,beta_exp,regime,n_plus,n_minus.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Extension machinery: reference-mode coefficients and the
    /// near-origin integrability scan. Columns: key,value.
    Extensions {
        #[command(flatten)]
        common: CommonArgs,
        /// Decreasing cutoffs for the integrability scan, comma-separated.
        #[arg(long)]
        eps_list: Option<String>,
    },
    /// Tabulate an analytic kernel. Columns: y,z,re,im.
    KernelTable {
        #[command(flatten)]
        common: CommonArgs,
        /// Kernel time.
        #[arg(long)]
        t: Option<f64>,
        /// imag or real.
        #[arg(long)]
        time_mode: Option<String>,
        #[arg(long)]
        zmax: Option<f64>,
        #[arg(long)]
        table_n: Option<usize>,
    },
    /// Time-sliced propagation; emits the final state.
    /// Columns: y,re,im,abs2.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        t: Option<f64>,
        /// Number of slices.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        time_mode: Option<String>,
        /// auto, sine, cosine, kernel, or robin-quad.
        #[arg(long)]
        kinetic: Option<String>,
        #[arg(long)]
        ymax: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
        /// gaussian:<center>,<width> | mode:<k> | mix:<k1>,<k2>.
        #[arg(long)]
        psi0: Option<String>,
    },
    /// Eigenvalues of the chosen extension. Columns: n,energy.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// exact (Dirichlet ladder) or fd.
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        ymax: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Slice-count convergence against the spectral oracle.
    /// Columns: n,l2_error,fitted_order.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        t: Option<f64>,
        /// Increasing slice counts, comma-separated.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        time_mode: Option<String>,
        #[arg(long)]
        kinetic: Option<String>,
        #[arg(long)]
        ymax: Option<f64>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long)]
        psi0: Option<String>,
    },
    /// Monte Carlo endpoint histogram under the avoiding/reflecting
    /// measure. Columns: z_center,value,std_error,n_effective.
    Mc {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        slices: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        y0: Option<f64>,
        /// Endpoint bins lo:hi:n.
        #[arg(long)]
        bins: Option<String>,
    },
}

/// Failure modes with their process exit codes.
enum CliError {
    /// Exit 2: configuration did not validate.
    Config(String),
    /// Exit 3: a regime gate refused the request.
    Regime(String),
    /// Exit 1: numerical failure at run time.
    Failure(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Regime(m) => CliError::Regime(m),
            CoreError::MethodMismatch(m) => CliError::Regime(m),
            CoreError::ConstraintViolation { .. }
            | CoreError::Domain(_)
            | CoreError::RepresentationMismatch(_)
            | CoreError::IncompatibleOrderings { .. }
            | CoreError::Unsupported(_) => CliError::Config(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(threads) = std::env::var("QG_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Config(m)) => {
            eprintln!("error (config): {m}");
            std::process::exit(2);
        }
        Err(CliError::Regime(m)) => {
            eprintln!("error (regime gate): {m}");
            std::process::exit(3);
        }
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            std::process::exit(1);
        }
    }
}

fn parse_list_f64(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad number '{p}'"))))
        .collect()
}

fn parse_list_usize(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| CliError::Config(format!("bad count '{p}'"))))
        .collect()
}

fn apply_common(cfg: &mut RunConfig, common: &CommonArgs) {
    if let Some(j) = &common.j {
        cfg.j1 = j[0];
        cfg.j2 = j[1];
        cfg.j3 = j[2];
    }
    if let Some(h) = common.hbar {
        cfg.hbar = h;
    }
    if let Some(l) = common.lambda {
        cfg.lambda = l;
    }
    if let Some(bc) = &common.bc {
        cfg.bc = bc.clone();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config '{path}': {e}")))?;
        let doc: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config '{path}' is not JSON: {e}")))?;
        apply_json(&mut cfg, &doc).map_err(CliError::Config)?;
    }
    if let Some(f) = &cli.format {
        if f != "csv" && f != "json" {
            return Err(CliError::Config(format!("format must be csv or json, got '{f}'")));
        }
        cfg.format = f.clone();
    }

    let table = match &cli.command {
        Command::Classify { common } => {
            cfg.command = "classify".into();
            apply_common(&mut cfg, common);
            cfg.canonicalize()?;
            run_classify(&cfg)?
        }
        Command::Extensions { common, eps_list } => {
            cfg.command = "extensions".into();
            apply_common(&mut cfg, common);
            if let Some(e) = eps_list {
                cfg.eps_list = parse_list_f64(e)?;
            }
            cfg.canonicalize()?;
            run_extensions(&cfg)?
        }
        Command::KernelTable { common, t, time_mode, zmax, table_n } => {
            cfg.command = "kernel-table".into();
            apply_common(&mut cfg, common);
            if let Some(t) = t {
                cfg.t_total = *t;
            }
            if let Some(m) = time_mode {
                cfg.time_mode = m.clone();
            }
            if let Some(z) = zmax {
                cfg.table_zmax = *z;
            }
            if let Some(n) = table_n {
                cfg.table_n = *n;
            }
            cfg.canonicalize()?;
            run_kernel_table(&cfg)?
        }
        Command::Evolve { common, t, n, time_mode, kinetic, ymax, grid_n, psi0 } => {
            cfg.command = "evolve".into();
            apply_common(&mut cfg, common);
            if let Some(t) = t {
                cfg.t_total = *t;
            }
            if let Some(n) = n {
                cfg.n_slices = *n;
            }
            if let Some(m) = time_mode {
                cfg.time_mode = m.clone();
            }
            if let Some(k) = kinetic {
                cfg.kinetic = k.clone();
            }
            if let Some(y) = ymax {
                cfg.y_max = *y;
            }
            if let Some(g) = grid_n {
                cfg.grid_n = *g;
            }
            if let Some(p) = psi0 {
                cfg.psi0 = p.clone();
            }
            cfg.canonicalize()?;
            run_evolve(&cfg)?
        }
        Command::Spectrum { common, solver, ymax, grid_n, n_max } => {
            cfg.command = "spectrum".into();
            apply_common(&mut cfg, common);
            if let Some(s) = solver {
                cfg.solver = s.clone();
            }
            if let Some(y) = ymax {
                cfg.y_max = *y;
            }
            if let Some(g) = grid_n {
                cfg.grid_n = *g;
            }
            if let Some(n) = n_max {
                cfg.n_max = *n;
            }
            cfg.canonicalize()?;
            run_spectrum(&cfg)?
        }
        Command::Converge { common, t, n, time_mode, kinetic, ymax, grid_n, psi0 } => {
            cfg.command = "converge".into();
            apply_common(&mut cfg, common);
            if let Some(t) = t {
                cfg.t_total = *t;
            }
            if let Some(list) = n {
                cfg.n_list = parse_list_usize(list)?;
            }
            if let Some(m) = time_mode {
                cfg.time_mode = m.clone();
            }
            if let Some(k) = kinetic {
                cfg.kinetic = k.clone();
            }
            if let Some(y) = ymax {
                cfg.y_max = *y;
            }
            if let Some(g) = grid_n {
                cfg.grid_n = *g;
            }
            if let Some(p) = psi0 {
                cfg.psi0 = p.clone();
            }
            cfg.canonicalize()?;
            run_converge(&cfg)?
        }
        Command::Mc { common, t, slices, samples, seed, y0, bins } => {
            cfg.command = "mc".into();
            apply_common(&mut cfg, common);
            if let Some(t) = t {
                cfg.t_total = *t;
            }
            if let Some(s) = slices {
                cfg.n_slices = *s;
            }
            if let Some(s) = samples {
                cfg.samples = *s;
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if let Some(y) = y0 {
                cfg.y0 = *y;
            }
            if let Some(b) = bins {
                cfg.bins = b.clone();
            }
            cfg.canonicalize()?;
            run_mc(&cfg)?
        }
    };
    write_artifact(&cfg, &table, cli.out.as_deref())
        .map_err(|e| CliError::Failure(format!("cannot write output: {e}")))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::EssentiallySelfAdjoint => "essentially-self-adjoint",
        Regime::BarrierMultiExt => "barrier-multi-extension",
        Regime::CriticalNoPotential => "critical-no-potential",
        Regime::WellUnsupported => "well-unsupported",
    }
}

fn time_mode_of(cfg: &RunConfig) -> Result<TimeMode, CliError> {
    match cfg.time_mode.as_str() {
        "imag" | "imaginary" => Ok(TimeMode::Imaginary),
        "real" => Ok(TimeMode::Real),
        other => Err(CliError::Config(format!("time_mode must be imag or real, got '{other}'"))),
    }
}

fn kinetic_of(cfg: &RunConfig) -> Result<KineticMethod, CliError> {
    let kind = cfg.bc_kind()?;
    match cfg.kinetic.as_str() {
        "auto" => Ok(match kind {
            BcKind::Dirichlet => KineticMethod::SineTransform,
            BcKind::Neumann => KineticMethod::CosineTransform,
            BcKind::Robin => KineticMethod::RobinEigenQuadrature,
            BcKind::General => KineticMethod::KernelMatrix,
        }),
        "sine" => Ok(KineticMethod::SineTransform),
        "cosine" => Ok(KineticMethod::CosineTransform),
        "kernel" => Ok(KineticMethod::KernelMatrix),
        "robin-quad" => Ok(KineticMethod::RobinEigenQuadrature),
        other => Err(CliError::Config(format!("unknown kinetic method '{other}'"))),
    }
}

/// Initial state from the `psi0` spec on the given grid.
fn build_psi0(cfg: &RunConfig, grid: &[f64]) -> Result<WaveFunction, CliError> {
    let spec = cfg.psi0.trim();
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let make_modes = |k_needed: usize| -> Result<SpectralBasis, CliError> {
        let o = cfg.ordering()?;
        let c = cfg.constants()?;
        Ok(dirichlet_eigenbasis(&o, &c, k_needed + 1, grid)?)
    };
    let wf = match kind {
        "gaussian" => {
            let parts = parse_list_f64(rest)?;
            if parts.len() != 2 {
                return Err(CliError::Config(format!(
                    "psi0 gaussian needs center,width: '{spec}'"
                )));
            }
            let (c0, w) = (parts[0], parts[1]);
            if !(w > 0.0) {
                return Err(CliError::Config("gaussian width must be positive".into()));
            }
            WaveFunction::from_fn(grid.to_vec(), Representation::FlatY, |y| {
                Complex64::new((-(y - c0) * (y - c0) / (2.0 * w * w)).exp(), 0.0)
            })?
            .normalized()
        }
        "mode" => {
            let k: usize = rest
                .parse()
                .map_err(|_| CliError::Config(format!("psi0 mode needs an index: '{spec}'")))?;
            make_modes(k)?.modes[k].clone()
        }
        "mix" => {
            let parts = parse_list_usize(rest)?;
            if parts.len() != 2 {
                return Err(CliError::Config(format!("psi0 mix needs two indices: '{spec}'")));
            }
            let basis = make_modes(parts[0].max(parts[1]))?;
            let vals: Vec<Complex64> = basis.modes[parts[0]]
                .values()
                .iter()
                .zip(basis.modes[parts[1]].values())
                .map(|(a, b)| (a + b) / 2f64.sqrt())
                .collect();
            WaveFunction::new(grid.to_vec(), vals, Representation::FlatY)?
        }
        other => return Err(CliError::Config(format!("unknown psi0 kind '{other}'"))),
    };
    Ok(wf)
}

/// Spectral oracle for the configured boundary condition, sampled on `grid`.
fn oracle_on_grid(cfg: &RunConfig, grid: &[f64]) -> Result<SpectralBasis, CliError> {
    let o = cfg.ordering()?;
    let c = cfg.constants()?;
    let bc = cfg.boundary()?;
    if bc.kind() == BcKind::Dirichlet {
        return Ok(dirichlet_eigenbasis(&o, &c, cfg.n_max, grid)?);
    }
    // FD basis on its own grid, resampled onto the evolve grid.
    let fd = fd_eigensolve(&o, &c, &bc, cfg.y_max, cfg.grid_n.max(4000), cfg.n_max)?;
    let top = fd.grid()[fd.grid().len() - 1];
    let mut modes = Vec::with_capacity(fd.modes.len());
    for m in &fd.modes {
        let vals: Vec<Complex64> = grid
            .iter()
            .map(|&y| interp_cubic(m.grid(), m.values(), y.min(top)))
            .collect();
        modes.push(WaveFunction::new(grid.to_vec(), vals, Representation::FlatY)?.normalized());
    }
    Ok(SpectralBasis {
        ordering: o,
        constants: c,
        bc,
        energies: fd.energies.clone(),
        modes,
        n_max: fd.n_max,
    })
}

fn run_classify(cfg: &RunConfig) -> Result<Table, CliError> {
    let o = cfg.ordering()?;
    let (np, nm) = deficiency_indices(&o);
    Ok(Table {
        columns: vec![
            "j1", "j2", "j3", "j_plus", "j_minus", "q", "nu", "m", "beta_exp", "regime",
            "n_plus", "n_minus",
        ],
        rows: vec![vec![
            Cell::Float(o.j1),
            Cell::Float(o.j2),
            Cell::Float(o.j3),
            Cell::Float(o.j_plus),
            Cell::Float(o.j_minus),
            Cell::Float(o.q),
            Cell::Float(o.nu),
            Cell::Float(o.m),
            Cell::Float(o.beta_exp),
            Cell::Text(regime_name(o.regime).into()),
            Cell::UInt(np as u64),
            Cell::UInt(nm as u64),
        ]],
    })
}

fn run_extensions(cfg: &RunConfig) -> Result<Table, CliError> {
    let o = cfg.ordering()?;
    let c = cfg.constants()?;
    let modes = make_reference_modes(&o, &c);
    let (np, nm) = deficiency_indices(&o);
    let mut rows = vec![
        vec![Cell::Text("j_plus".into()), Cell::Float(o.j_plus)],
        vec![Cell::Text("regime".into()), Cell::Text(regime_name(o.regime).into())],
        vec![Cell::Text("n_plus".into()), Cell::UInt(np as u64)],
        vec![Cell::Text("n_minus".into()), Cell::UInt(nm as u64)],
        vec![Cell::Text("c1".into()), Cell::Float(modes.c1.unwrap_or(f64::NAN))],
        vec![Cell::Text("c2".into()), Cell::Float(modes.c2)],
        vec![Cell::Text("k_log".into()), Cell::Float(modes.k.unwrap_or(f64::NAN))],
    ];
    let report = verify_deficiency_integrability(&o, &c, &cfg.eps_list)?;
    rows.push(vec![
        Cell::Text("integrand_exponent".into()),
        Cell::Float(report.integrand_exponent),
    ]);
    rows.push(vec![
        Cell::Text("log_linearity_r2".into()),
        Cell::Float(report.log_linearity_r2),
    ]);
    for (eps, integral) in report.cutoffs.iter().zip(&report.integrals) {
        rows.push(vec![Cell::Text(format!("integral@{eps}")), Cell::Float(*integral)]);
    }
    Ok(Table { columns: vec!["key", "value"], rows })
}

fn run_kernel_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let mode = time_mode_of(cfg)?;
    let spec = KernelSpec::new(mode, cfg.boundary()?, cfg.t_total)?;
    let n = cfg.table_n.max(2);
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        let y = cfg.table_zmax * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let z = cfg.table_zmax * j as f64 / (n - 1) as f64;
            let v = spec.eval(y, z)?;
            rows.push(vec![Cell::Float(y), Cell::Float(z), Cell::Float(v.re), Cell::Float(v.im)]);
        }
    }
    Ok(Table { columns: vec!["y", "z", "re", "im"], rows })
}

fn run_evolve(cfg: &RunConfig) -> Result<Table, CliError> {
    let grid = GridSpec::new(cfg.y_max, cfg.grid_n)?;
    let plan = TrotterPlan::new(
        cfg.ordering()?,
        cfg.constants()?,
        cfg.boundary()?,
        grid,
        cfg.t_total,
        cfg.n_slices,
        time_mode_of(cfg)?,
        kinetic_of(cfg)?,
    )?
    .with_near_zero_eps(cfg.near_zero_eps);
    let psi0 = build_psi0(cfg, &grid.build())?;
    let (out, diag) = trotter_evolve(&psi0, &plan)?;
    let obs = observables(&out, cfg.near_zero_eps);
    eprintln!(
        "evolve: norm {} -> {}, mean_y {}, P[0,{}] = {}{}",
        psi0.norm(),
        obs.norm,
        obs.mean_y,
        cfg.near_zero_eps,
        obs.prob_near_zero,
        diag.phase_guard.as_deref().map(|m| format!(" (warning: {m})")).unwrap_or_default()
    );
    let rows = out
        .grid()
        .iter()
        .zip(out.values())
        .map(|(&y, v)| {
            vec![Cell::Float(y), Cell::Float(v.re), Cell::Float(v.im), Cell::Float(v.norm_sqr())]
        })
        .collect();
    Ok(Table { columns: vec!["y", "re", "im", "abs2"], rows })
}

fn run_spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let o = cfg.ordering()?;
    let c = cfg.constants()?;
    let basis = match cfg.solver.as_str() {
        "exact" => {
            if cfg.bc_kind()? != BcKind::Dirichlet {
                return Err(CliError::Config(
                    "the exact ladder is the Dirichlet (theta = 0) spectrum; use --solver fd"
                        .into(),
                ));
            }
            let grid: Vec<f64> = (1..=cfg.grid_n)
                .map(|j| cfg.y_max * j as f64 / cfg.grid_n as f64)
                .collect();
            dirichlet_eigenbasis(&o, &c, cfg.n_max, &grid)?
        }
        "fd" => fd_eigensolve(&o, &c, &cfg.boundary()?, cfg.y_max, cfg.grid_n, cfg.n_max)?,
        other => return Err(CliError::Config(format!("unknown solver '{other}'"))),
    };
    let rows = basis
        .energies
        .iter()
        .enumerate()
        .map(|(n, &e)| vec![Cell::UInt(n as u64), Cell::Float(e)])
        .collect();
    Ok(Table { columns: vec!["n", "energy"], rows })
}

fn run_converge(cfg: &RunConfig) -> Result<Table, CliError> {
    if cfg.n_list.len() < 2 {
        return Err(CliError::Config("converge needs at least two slice counts".into()));
    }
    let grid = GridSpec::new(cfg.y_max, cfg.grid_n)?;
    let plan = TrotterPlan::new(
        cfg.ordering()?,
        cfg.constants()?,
        cfg.boundary()?,
        grid,
        cfg.t_total,
        cfg.n_list[0],
        time_mode_of(cfg)?,
        kinetic_of(cfg)?,
    )?;
    let g = grid.build();
    let psi0 = build_psi0(cfg, &g)?;
    let oracle = oracle_on_grid(cfg, &g)?;
    let study = convergence_study(&psi0, &plan, &cfg.n_list, &oracle)?;
    let rows = study
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::UInt(r.n_slices as u64),
                Cell::Float(r.l2_error),
                Cell::Float(study.fitted_order),
            ]
        })
        .collect();
    Ok(Table { columns: vec!["n", "l2_error", "fitted_order"], rows })
}

fn run_mc(cfg: &RunConfig) -> Result<Table, CliError> {
    let bc = match cfg.bc_kind()? {
        BcKind::Dirichlet => McBoundary::Dirichlet,
        BcKind::Neumann => McBoundary::Neumann,
        other => {
            return Err(CliError::Config(format!(
                "mc supports dirichlet or neumann walks, got {other:?}"
            )))
        }
    };
    let mc = McConfig::new(
        cfg.ordering()?,
        cfg.constants()?,
        bc,
        cfg.t_total,
        cfg.n_slices,
        cfg.samples,
        cfg.seed,
        cfg.y0,
    )?;
    let (lo, hi, n) = cfg.parsed_bins().map_err(CliError::Config)?;
    let bins = ZBins::new(lo, hi, n)?;
    let est = estimate_propagator(&mc, &bins)?;
    let rows = bins
        .centers()
        .iter()
        .zip(&est)
        .map(|(&z, e)| {
            vec![
                Cell::Float(z),
                Cell::Float(e.value),
                Cell::Float(e.std_error),
                Cell::UInt(e.n_effective as u64),
            ]
        })
        .collect();
    Ok(Table { columns: vec!["z_center", "value", "std_error", "n_effective"], rows })
}
