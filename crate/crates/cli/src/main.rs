use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use serde_json::{json, Value};

use sicforge::construct::{adjoint_basis, adjoint_coefficients, gell_mann_basis, jordan_basis, jordan_shift, lie_basis};
use sicforge::equivalence::{check_all, check_formulation, Formulation};
use sicforge::group::{m_dl, sample_stochastic, write_samples_csv};
use sicforge::io::{BasisFile, FiducialFile, ReportBundle, StructureFile};
use sicforge::jordan::jordan_structure;
use sicforge::lie::lie_structure;
use sicforge::random::{orthonormal_basis, stream_rng};
use sicforge::rep::{certify_adjoint_uniqueness, enumerate_small_irreps, one_column_survivors, Partition};
use sicforge::sic::{
    check_2design, minimize_frame_potential, verify_sic, wh_orbit, wh_orbit_states, SolverConfig, WeightedStateSet,
};
use sicforge::{tol, CheckReport, OperatorBasis};

const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "sicforge", version, about = "SIC fiducial search and SIC-basis checks")]
struct Cli {
    /// Print what each check asserts.
    #[arg(long, global = true)]
    explain: bool,
    /// Emit report/1 JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Tolerances {
    /// Fidelity and resolution-of-identity tolerance.
    #[arg(long, default_value_t = tol::SIC)]
    tol_sic: f64,
    /// Tolerance for structure, Gram and decomposition residuals.
    #[arg(long, default_value_t = 1e-8)]
    tol_structure: f64,
    /// Entry and row/column-sum tolerance for stochastic-type adjoints.
    #[arg(long, default_value_t = tol::STOCHASTIC)]
    tol_stochastic: f64,
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("tol-sic", self.tol_sic), ("tol-structure", self.tol_structure), ("tol-stochastic", self.tol_stochastic)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!(Usage(format!("--{name} must be positive")));
            }
        }
        Ok(())
    }

    fn echo(&self) -> Value {
        json!({"sic": self.tol_sic, "structure": self.tol_structure, "stochastic": self.tol_stochastic})
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a Weyl-Heisenberg covariant fiducial.
    Solve {
        #[arg(long)]
        dim: usize,
        #[arg(long, env = "SICFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = tol::MAX_ITERS)]
        max_iters: usize,
        /// Fiducial output path (stdout if absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the report bundle here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Certify a fiducial file: SIC overlaps and the 2-design identity.
    Verify {
        fiducial: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Build an operator basis.
    Basis {
        #[arg(long, value_enum)]
        kind: BasisKind,
        /// Fiducial for the SIC-derived kinds.
        #[arg(long)]
        fiducial: Option<PathBuf>,
        /// Dimension for gell-mann and random.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, env = "SICFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i8,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon_prime: i8,
        /// Per-operator signs, comma separated (default all +1).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        epsilons: Option<Vec<i8>>,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eta: f64,
        /// Overall scale c of the jordan kind.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Build from a fiducial even if its orbit is not a SIC.
        #[arg(long)]
        allow_non_sic: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Run one or all SIC formulations on a basis file.
    Check {
        #[arg(long, value_enum, default_value_t = FormulationArg::All)]
        formulation: FormulationArg,
        basis: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Small PU(d) irreps and the adjoint uniqueness certificate.
    Irreps {
        #[arg(long)]
        dim: usize,
    },
    /// Sample Haar (anti)unitaries and test stochastic-type adjoints.
    Stochastic {
        basis: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "SICFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        antiunitary: bool,
        /// CSV of per-sample minima and sum errors.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Smallest adjoint entry m(d, L) of an orthonormal basis.
    Mdl {
        basis: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Export commutator or anticommutator structure constants.
    Structure {
        basis: PathBuf,
        #[arg(long, value_enum)]
        product: ProductArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BasisKind {
    Adjoint,
    Lie,
    Jordan,
    GellMann,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormulationArg {
    Simplex,
    Group,
    Lie,
    Jordan,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ProductArg {
    Lie,
    Jordan,
}

/// Marks errors that should exit with the usage code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn explain_check(name: &str) -> &'static str {
    match name {
        "sic" => "every pair of orbit projectors has tr(P_j P_k) = 1/(d+1) and the projectors sum to d*I",
        "2design" => "sum_j w_j P_j (x) P_j equals the normalized symmetric projector 2 P_s/(d+1)",
        "simplex" => Formulation::Simplex.explain(),
        "group" => Formulation::Group.explain(),
        "lie_sic" => Formulation::Lie.explain(),
        "jordan_sic" => Formulation::Jordan.explain(),
        "jordan_sic_form" => "each anticommutator structure matrix is 2P + Q + Q^T - 2a with the SIC shift a",
        "adjoint_uniqueness" => "the only PU(d) irreps of degree at most d^2-1 are the trivial one and the adjoint",
        "stochastic" => "every sampled adjoint R gives (R + d*J/d^2)/(d+1) doubly stochastic",
        "mdl" => "m(d, L) is at most -1/d, with equality exactly for SIC-derived orthonormal bases",
        "solve" => "the best restart reaches the frame-potential bound 2d/(d+1)",
        _ => "",
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_basis(path: &Path) -> Result<OperatorBasis> {
    Ok(BasisFile::parse(&read(path)?)?.basis()?)
}

fn number(v: f64) -> String {
    if v == 0.0 || (1e-3..1e6).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:.6e}")
    }
}

fn render(bundle: &ReportBundle, explain: bool) -> String {
    let mut out = String::new();
    for r in &bundle.reports {
        out.push_str(&format!("{} {}\n", if r.pass { "PASS" } else { "FAIL" }, r.check));
        if explain {
            let e = explain_check(&r.check);
            if !e.is_empty() {
                out.push_str(&format!("  asserts: {e}\n"));
            }
        }
        for (k, v) in &r.residuals {
            let t = r.tolerances.get(k).copied().unwrap_or(f64::NAN);
            out.push_str(&format!("  {k:<36} {v:.3e} (tol {t:.1e})\n"));
        }
        for (k, v) in &r.values {
            out.push_str(&format!("  {k:<36} {}\n", number(*v)));
        }
        for (k, v) in &r.verdicts {
            out.push_str(&format!("  {k:<36} {v}\n"));
        }
        for n in &r.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
    }
    out.push_str(&format!("overall: {}\n", if bundle.overall { "PASS" } else { "FAIL" }));
    out
}

/// Prints (or writes) a bundle and maps its verdict to an exit code.
fn emit(cli: &Cli, output: Option<&Path>, bundle: &ReportBundle) -> Result<u8> {
    let json = bundle.to_json()?;
    if let Some(p) = output {
        fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
    }
    if cli.json {
        if output.is_none() {
            print!("{json}");
        }
    } else {
        print!("{}", render(bundle, cli.explain));
    }
    Ok(if bundle.overall { 0 } else { EXIT_FAIL })
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { dim, seed, restarts, max_iters, output, report, tol } => {
            tol.validate()?;
            if *dim < 2 {
                bail!(Usage("--dim must be at least 2".into()));
            }
            if *dim > 8 {
                warn!("d = {dim} is above the tested range; expect long runs");
            }
            let cfg = SolverConfig { seed: *seed, restarts: *restarts, max_iters: *max_iters, ..SolverConfig::default() };
            let out = minimize_frame_potential(*dim, &cfg)?;
            let sic = wh_orbit(&out.fiducial);
            let mut r = verify_sic(&sic, tol.tol_sic)?;
            r.value("frame_potential", out.frame_potential);
            r.value("frame_potential_gap", out.gap);
            r.value("best_restart", out.best_restart as f64);
            let mut solve = CheckReport::new("solve");
            let converged = solve.residual("frame_potential_gap", out.gap.max(0.0), cfg.gap_tol);
            solve.value("restarts", *restarts as f64);
            let solve = solve.finish(converged);
            let fid = FiducialFile::new(&out.fiducial, out.frame_potential, out.max_fidelity_error).to_json()?;
            write_out(output.as_deref(), &fid)?;
            let config = json!({"command": "solve", "dim": dim, "seed": seed, "restarts": restarts,
                "maxIters": max_iters, "tolerances": tol.echo()});
            let bundle = ReportBundle::new(config, vec![r, solve]);
            if let Some(p) = report {
                fs::write(p, bundle.to_json()?).with_context(|| format!("writing {}", p.display()))?;
            }
            if output.is_some() {
                print!("{}", if cli.json { bundle.to_json()? } else { render(&bundle, cli.explain) });
            } else {
                eprint!("{}", render(&bundle, cli.explain));
            }
            Ok(if bundle.overall { 0 } else { EXIT_FAIL })
        }
        Command::Verify { fiducial, tol } => {
            tol.validate()?;
            let file = FiducialFile::parse(&read(fiducial)?)?;
            let f = file.fiducial()?;
            let d = f.dim();
            let sic = wh_orbit(&f);
            let v = verify_sic(&sic, tol.tol_sic)?;
            let states = WeightedStateSet::new(wh_orbit_states(&f), vec![1.0 / d as f64; d * d])?;
            let design = check_2design(&states, tol.tol_sic)?;
            let config = json!({"command": "verify", "input": fiducial.display().to_string(), "tolerances": tol.echo()});
            emit(cli, None, &ReportBundle::new(config, vec![v, design]))
        }
        Command::Basis {
            kind,
            fiducial,
            dim,
            seed,
            epsilon,
            epsilon_prime,
            epsilons,
            ell,
            eta,
            scale,
            allow_non_sic,
            output,
            tol,
        } => {
            tol.validate()?;
            let file = build_basis(*kind, fiducial.as_deref(), *dim, *seed, BasisParams {
                epsilon: *epsilon,
                epsilon_prime: *epsilon_prime,
                epsilons: epsilons.clone(),
                ell: *ell,
                eta: *eta,
                scale: *scale,
                allow_non_sic: *allow_non_sic,
                tol_sic: tol.tol_sic,
            })?;
            write_out(output.as_deref(), &file.to_json()?)?;
            Ok(0)
        }
        Command::Check { formulation, basis, output, tol } => {
            tol.validate()?;
            let b = load_basis(basis)?;
            let t = tol.tol_structure;
            let reports = match formulation {
                FormulationArg::All => {
                    let out = check_all(&b, t);
                    let mut reports = out.reports;
                    let mut agg = CheckReport::new("equivalence");
                    agg.value("applicable", out.applicable as f64);
                    agg.value("passes", out.passes as f64);
                    agg.verdict("agree", out.agree);
                    for f in Formulation::ALL.iter().filter(|f| !f.applies(b.dim())) {
                        agg.note(format!("{} does not characterize SIC bases at d = {}; skipped", f.name(), b.dim()));
                    }
                    if !out.agree {
                        agg.note("formulations disagree; the basis may belong to a different construction family");
                    }
                    reports.push(agg.finish(out.agree && out.passes == out.applicable));
                    reports
                }
                FormulationArg::Simplex => vec![check_formulation(&b, Formulation::Simplex, t)],
                FormulationArg::Group => vec![check_formulation(&b, Formulation::Group, t)],
                FormulationArg::Lie => vec![check_formulation(&b, Formulation::Lie, t)],
                FormulationArg::Jordan => vec![check_formulation(&b, Formulation::Jordan, t)],
            };
            let config = json!({"command": "check", "formulation": format!("{formulation:?}").to_lowercase(),
                "input": basis.display().to_string(), "dim": b.dim(), "tolerances": tol.echo()});
            emit(cli, output.as_deref(), &ReportBundle::new(config, reports))
        }
        Command::Irreps { dim } => {
            if *dim < 2 {
                bail!(Usage("--dim must be at least 2".into()));
            }
            let bound = (dim * dim - 1) as u128;
            let records = enumerate_small_irreps(*dim, bound)?;
            let cert = certify_adjoint_uniqueness(*dim)?;
            if cli.json {
                let v = json!({"dimension": dim, "bound": bound as u64, "irreps": records, "certificate": cert});
                print!("{}", sicforge::io::to_canonical_json(&v)?);
            } else {
                println!("{:<28} {:>10} {:>8} {:>6}", "partition", "dimension", "boxes", "PU(d)");
                for r in &records {
                    let label = if r.partition.is_trivial() { "[] (trivial)".to_string() } else { r.partition.to_string() };
                    println!("{:<28} {:>10} {:>8} {:>6}", label, r.dimension, r.box_sum, if r.pu_compatible { "yes" } else { "no" });
                }
                let excluded: Vec<u32> =
                    (1..*dim as u32).filter(|m| !one_column_survivors(*dim).unwrap_or_default().contains(m)).collect();
                if !excluded.is_empty() {
                    let shown: Vec<String> = excluded
                        .iter()
                        .map(|&m| {
                            let p = Partition::from_columns(&[m]).expect("valid column");
                            let dm = sicforge::rep::weyl_dimension(&p, *dim).unwrap_or(0);
                            format!("[{m}]^C (D = {dm})")
                        })
                        .collect();
                    println!("one-column exclusions above {bound}: {}", shown.join(", "));
                }
                let bundle = ReportBundle::new(json!({"command": "irreps", "dim": dim}), vec![cert.clone()]);
                print!("{}", render(&bundle, cli.explain));
            }
            Ok(if cert.pass { 0 } else { EXIT_FAIL })
        }
        Command::Stochastic { basis, samples, seed, antiunitary, csv, output, tol } => {
            tol.validate()?;
            let b = load_basis(basis)?;
            let d = b.dim();
            let defect = b.orthonormality_defect();
            if b.len() != d * d || defect > tol::ORTHONORMAL {
                bail!(Usage(format!("stochastic sampling needs an orthonormal basis (defect {defect:e})")));
            }
            let rows = sample_stochastic(&b, *samples, *seed, *antiunitary, tol.tol_stochastic)?;
            if let Some(p) = csv {
                write_samples_csv(&rows, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?;
            }
            let passes = rows.iter().filter(|s| s.stochastic).count();
            let min_entry = rows.iter().map(|s| s.min_entry).fold(f64::INFINITY, f64::min);
            let sum_err = rows.iter().map(|s| s.row_sum_max_err.max(s.col_sum_max_err)).fold(0.0, f64::max);
            let mut r = CheckReport::new("stochastic");
            r.value("samples", *samples as f64);
            r.value("stochastic_samples", passes as f64);
            r.value("min_entry", min_entry);
            r.value("min_entry_bound", -1.0 / d as f64);
            r.residual("sum_error", sum_err, tol.tol_stochastic);
            let r = r.finish(passes == *samples);
            let config = json!({"command": "stochastic", "input": basis.display().to_string(), "samples": samples,
                "seed": seed, "antiunitary": antiunitary, "tolerances": tol.echo()});
            emit(cli, output.as_deref(), &ReportBundle::new(config, vec![r]))
        }
        Command::Mdl { basis, tol } => {
            tol.validate()?;
            let b = load_basis(basis)?;
            let d = b.dim() as f64;
            let mut r = CheckReport::new("mdl");
            let m = m_dl(&b)?;
            r.value("m_dl", m);
            r.value("bound", -1.0 / d);
            let ortho = r.residual("orthonormality", b.orthonormality_defect(), tol.tol_structure);
            let sat = r.residual("saturation", (m + 1.0 / d).abs(), tol.tol_structure);
            let r = r.finish(ortho && sat);
            let config = json!({"command": "mdl", "input": basis.display().to_string(), "tolerances": tol.echo()});
            emit(cli, None, &ReportBundle::new(config, vec![r]))
        }
        Command::Structure { basis, product, output } => {
            let b = load_basis(basis)?;
            let s = match product {
                ProductArg::Lie => lie_structure(&b)?,
                ProductArg::Jordan => jordan_structure(&b)?,
            };
            write_out(output.as_deref(), &StructureFile::new(&s).to_json()?)?;
            Ok(0)
        }
    }
}

struct BasisParams {
    epsilon: i8,
    epsilon_prime: i8,
    epsilons: Option<Vec<i8>>,
    ell: f64,
    eta: f64,
    scale: f64,
    allow_non_sic: bool,
    tol_sic: f64,
}

fn sign_arg(name: &str, v: i8) -> Result<i8> {
    if v == 1 || v == -1 {
        Ok(v)
    } else {
        bail!(Usage(format!("--{name} must be 1 or -1")))
    }
}

fn build_basis(kind: BasisKind, fiducial: Option<&Path>, dim: Option<usize>, seed: u64, p: BasisParams) -> Result<BasisFile> {
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    let (name, basis) = match kind {
        BasisKind::GellMann | BasisKind::Random => {
            let d = dim.ok_or_else(|| Usage("--dim is required for this kind".into()))?;
            if d < 2 {
                bail!(Usage("--dim must be at least 2".into()));
            }
            if kind == BasisKind::GellMann {
                ("gell-mann", gell_mann_basis(d))
            } else {
                params.insert("seed".into(), json!(seed));
                ("random-orthonormal", orthonormal_basis(d, &mut stream_rng(seed, 0)))
            }
        }
        _ => {
            let path = fiducial.ok_or_else(|| Usage("--fiducial is required for this kind".into()))?;
            let f = FiducialFile::parse(&read(path)?)?.fiducial()?;
            let sic = wh_orbit(&f);
            let d = f.dim();
            let v = verify_sic(&sic, p.tol_sic)?;
            if !v.pass && !p.allow_non_sic {
                bail!(
                    "fiducial orbit is not a SIC (max fidelity error {:e}); pass --allow-non-sic to build anyway",
                    sic.max_fidelity_error()
                );
            }
            let epsilons = match &p.epsilons {
                Some(e) => {
                    if e.len() != d * d {
                        bail!(Usage(format!("--epsilons needs {} entries, found {}", d * d, e.len())));
                    }
                    for &s in e {
                        sign_arg("epsilons", s)?;
                    }
                    e.clone()
                }
                None => vec![1; d * d],
            };
            match kind {
                BasisKind::Adjoint => {
                    let e = sign_arg("epsilon", p.epsilon)?;
                    let ep = sign_arg("epsilon-prime", p.epsilon_prime)?;
                    let (a, b) = adjoint_coefficients(d, e, ep)?;
                    params.insert("epsilon".into(), json!(e));
                    params.insert("epsilon_prime".into(), json!(ep));
                    params.insert("a".into(), json!(a));
                    params.insert("b".into(), json!(b));
                    ("adjoint", adjoint_basis(&sic, e, ep)?)
                }
                BasisKind::Lie => {
                    if (p.eta + 1.0 / d as f64).abs() < 1e-12 {
                        bail!(Usage("--eta = -1/d makes every operator traceless".into()));
                    }
                    if p.ell == 0.0 || !p.ell.is_finite() {
                        bail!(Usage("--ell must be a non-zero real".into()));
                    }
                    params.insert("epsilons".into(), json!(epsilons));
                    params.insert("ell".into(), json!(p.ell));
                    params.insert("eta".into(), json!(p.eta));
                    ("lie", lie_basis(&sic, &epsilons, p.ell, p.eta)?)
                }
                BasisKind::Jordan => {
                    let e = sign_arg("epsilon", p.epsilon)?;
                    if !(p.scale > 0.0 && p.scale.is_finite()) {
                        bail!(Usage("--scale must be positive".into()));
                    }
                    params.insert("epsilon".into(), json!(e));
                    params.insert("epsilons".into(), json!(epsilons));
                    params.insert("c".into(), json!(p.scale));
                    params.insert("a".into(), json!(jordan_shift(d, e)?));
                    ("jordan", jordan_basis(&sic, e, &epsilons, p.scale)?)
                }
                BasisKind::GellMann | BasisKind::Random => unreachable!(),
            }
        }
    };
    Ok(BasisFile::new(&basis, None).with_construction(name, params))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some()
                || e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some())
                || e.chain().any(|c| {
                    matches!(
                        c.downcast_ref::<sicforge::Error>(),
                        Some(sicforge::Error::Json(_) | sicforge::Error::Schema(_) | sicforge::Error::Io(_))
                    )
                });
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_FAIL })
        }
    }
}
