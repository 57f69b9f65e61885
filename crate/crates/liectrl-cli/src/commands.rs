use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use liectrl_core::bilinear_form::{classify_form, FORM_MAX_SIDE};
use liectrl_core::catalog::{build_lattice_with_cap, catalog_csv_rows, enumerate_irreps, Lattice, DEFAULT_LATTICE_CAP};
use liectrl_core::closure::{lie_closure, span_contains};
use liectrl_core::decide::{assess, check_simulates, make_model, AssessOptions, ModelFamily, ModelSpec, Stage};
use liectrl_core::fermion::{fermion_model, FermionModel};
use liectrl_core::graph::coupling_graph;
use liectrl_core::matrep::CMatrix;
use liectrl_core::pauli::parse_rational;
use liectrl_core::symmetry::{
    centraliser_with_cap, pauli_matrices, with_tensor_square, CentraliserBasis, EXACT_CENTRALISER_MAX_QUBITS,
    TENSOR_SQUARE_MAX_SIDE,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::CliError;
use crate::report::{form_kind_name, render_report, verdict_json, Format};
use crate::system_file::{parse_system, render_system};

#[derive(Debug, Parser)]
#[command(name = "liectrl", version, about = "Controllability of bilinear quantum control systems")]
pub struct Cli {
    /// Seed for the order of randomized spot checks. Results never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Lie closure of the drift and controls.
    Closure(ClosureArgs),
    /// Centraliser, commutant and optionally the tensor-square commutant, as JSON.
    Symmetry(SymmetryArgs),
    /// Invariant bilinear form of the dense generators.
    Form(FormArgs),
    /// Coupling graph in Graphviz DOT.
    Graph(GraphArgs),
    /// Irreducible simple subalgebras of su(N) and their inclusion lattices.
    Catalog(CatalogArgs),
    /// Write a fermionic model as a system file.
    Fermion(FermionArgs),
    /// Write a named spin model as a system file.
    Model(ModelArgs),
    /// Run the full controllability pipeline.
    Assess(AssessArgs),
    /// Compare the dynamic algebras of two systems.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    pub system: PathBuf,
    /// Stop once the dimension reaches this value.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Print the basis elements.
    #[arg(long)]
    pub basis: bool,
    /// Check this many random basis pairs for bracket membership.
    #[arg(long, default_value_t = 0)]
    pub verify: usize,
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub tensor_square: bool,
    #[arg(long, default_value_t = EXACT_CENTRALISER_MAX_QUBITS)]
    pub max_qubits: usize,
    #[arg(long, default_value_t = TENSOR_SQUARE_MAX_SIDE)]
    pub max_side: usize,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    pub system: PathBuf,
    /// Write S as a JSON matrix to this file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = FORM_MAX_SIDE)]
    pub max_side: usize,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    pub system: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long, default_value_t = 16)]
    pub max_dim: u64,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Largest ambient dimension for which lattices are built.
    #[arg(long, default_value_t = DEFAULT_LATTICE_CAP)]
    pub lattice_cap: u64,
}

#[derive(Debug, Args)]
pub struct FermionArgs {
    /// quadratic, quadratic-linear, number-preserving, diagonal, hubbard or hubbard-spin.
    pub kind: String,
    #[arg(long)]
    pub d: usize,
    /// Hopping amplitude as an exact rational.
    #[arg(long, default_value = "1")]
    pub t: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    pub family: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    pub system: PathBuf,
    /// Always compute the Lie closure.
    #[arg(long, conflicts_with = "no_closure")]
    pub closure: bool,
    #[arg(long)]
    pub no_closure: bool,
    /// Always compute the tensor-square commutant.
    #[arg(long, conflicts_with = "no_tensor_square")]
    pub tensor_square: bool,
    #[arg(long)]
    pub no_tensor_square: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub closure_cap: Option<usize>,
    #[arg(long, default_value_t = TENSOR_SQUARE_MAX_SIDE)]
    pub tensor_square_max_side: usize,
    #[arg(long, default_value_t = FORM_MAX_SIDE)]
    pub form_max_side: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn emit_or_write(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

fn stage(always: bool, never: bool) -> Stage {
    match (always, never) {
        (true, _) => Stage::Always,
        (_, true) => Stage::Never,
        _ => Stage::Auto,
    }
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let part = |f: fn(&liectrl_core::matrep::C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m.get(i, j))).collect()).collect()
    };
    json!({ "rows": m.rows(), "cols": m.cols(), "re": part(|z| z.re), "im": part(|z| z.im) })
}

fn format_entry(z: liectrl_core::matrep::C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.4}"),
        (true, false) => format!("{im:.4}i"),
        _ => format!("{re:.4}{im:+.4}i"),
    }
}

/// Runs one command, writing its primary output to `out`, and returns the
/// process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Closure(a) => closure(a, cli.seed, out),
        Command::Symmetry(a) => symmetry(a, out),
        Command::Form(a) => form(a, out),
        Command::Graph(a) => {
            let sys = parse_system(&a.system)?;
            let g = coupling_graph(&sys.drift, &sys.controls, &sys.structure)
                .map_err(|e| CliError::Input(e.to_string()))?;
            emit_or_write(out, a.output.as_deref(), &g.to_dot(&sys.label))?;
            Ok(0)
        }
        Command::Catalog(a) => catalog(a, out),
        Command::Fermion(a) => {
            let model: FermionModel = a.kind.parse().map_err(CliError::Input)?;
            let t = parse_rational(&a.t).map_err(|e| CliError::Input(format!("--t: {e}")))?;
            let sys = fermion_model(model, a.d, &t).map_err(|e| CliError::Input(e.to_string()))?;
            emit_or_write(out, a.output.as_deref(), &render_system(&sys))?;
            Ok(0)
        }
        Command::Model(a) => {
            let family: ModelFamily = a.family.parse().map_err(CliError::Input)?;
            let sys = make_model(&ModelSpec { family, n: a.n }).map_err(|e| CliError::Input(e.to_string()))?;
            emit_or_write(out, a.output.as_deref(), &render_system(&sys))?;
            Ok(0)
        }
        Command::Assess(a) => {
            let sys = parse_system(&a.system)?;
            let options = AssessOptions {
                closure: stage(a.closure, a.no_closure),
                tensor_square: stage(a.tensor_square, a.no_tensor_square),
                closure_cap: a.closure_cap,
                tensor_square_max_side: a.tensor_square_max_side,
                form_max_side: a.form_max_side,
            };
            let verdict = assess(&sys, &options)?;
            if let Some(path) = &a.json {
                let text = serde_json::to_string_pretty(&verdict_json(&verdict)).expect("verdicts always serialise");
                write_file(path, &(text + "\n"))?;
            }
            emit(out, &render_report(&verdict, a.format))?;
            Ok(if verdict.inconsistency.is_some() { 4 } else { 0 })
        }
        Command::Simulate(a) => {
            let sa = parse_system(&a.a)?;
            let sb = parse_system(&a.b)?;
            let ka = lie_closure(&sa.generators(), None)?;
            let kb = lie_closure(&sb.generators(), None)?;
            let relation = check_simulates(&ka, &kb)?;
            let text = format!(
                "a: {} (closure dim {})\nb: {} (closure dim {})\nrelation: {}\n",
                sa.label,
                ka.dim,
                sb.label,
                kb.dim,
                relation.as_str()
            );
            emit(out, &text)?;
            Ok(0)
        }
    }
}

fn closure(a: &ClosureArgs, seed: u64, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = parse_system(&a.system)?;
    let basis = lie_closure(&sys.generators(), a.cap)?;
    let mut text = format!(
        "system: {}\nclosure dim: {}\nclosed: {}\nstop: {:?}\nsweeps: {}\n",
        sys.label,
        basis.dim,
        if basis.closed { "yes" } else { "no" },
        basis.stop_reason,
        basis.sweeps
    );
    if a.verify > 0 && basis.dim > 0 {
        let mut pairs: Vec<(usize, usize)> =
            (0..basis.dim).flat_map(|i| (i + 1..basis.dim).map(move |j| (i, j))).collect();
        pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        pairs.truncate(a.verify);
        let mut missing = 0;
        for &(i, j) in &pairs {
            let b = basis.elements[i].bracket(&basis.elements[j]).map_err(|e| CliError::Input(e.to_string()))?;
            if !span_contains(&basis, &b)? {
                missing += 1;
            }
        }
        text.push_str(&format!("spot check: {} pairs, {missing} brackets outside the span\n", pairs.len()));
    }
    if a.basis {
        for e in &basis.elements {
            text.push_str(&format!("{e}\n"));
        }
    }
    emit(out, &text)?;
    Ok(0)
}

fn symmetry(a: &SymmetryArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = parse_system(&a.system)?;
    let gens = sys.generators();
    let mut report = centraliser_with_cap(&gens, a.max_qubits)?;
    if a.tensor_square {
        if sys.side() > a.max_side {
            return Err(CliError::ResourceCap(format!(
                "tensor square needs side {}, above the limit {}",
                sys.side(),
                a.max_side
            )));
        }
        let mats = pauli_matrices(&gens, sys.n())?;
        report = with_tensor_square(report, &mats, a.max_side)?;
    }
    let basis: Vec<String> = match &report.centraliser_basis {
        CentraliserBasis::Pauli(v) => v.iter().map(ToString::to_string).collect(),
        CentraliserBasis::Dense(v) => v.iter().map(|m| format!("dense {}x{}", m.rows(), m.cols())).collect(),
    };
    let ts = report.tensor_square.as_ref().map(|t| {
        json!({
            "dim": t.dim,
            "alt_dim": t.alt_dim,
            "sym_dim": t.sym_dim,
            "contains_swap": t.contains_swap,
            "tolerance_used": t.tolerance_used,
            "residual_max": t.residual_max,
        })
    });
    let value = json!({
        "label": sys.label,
        "n": sys.n(),
        "centraliser_dim": report.centraliser_dim,
        "commutant_dim": report.commutant_dim,
        "irreducible": report.irreducible,
        "centraliser_basis": basis,
        "tensor_square_commutant_dim": report.tensor_square_commutant_dim(),
        "tensor_square": ts,
    });
    emit(out, &(serde_json::to_string_pretty(&value).expect("json values serialise") + "\n"))?;
    Ok(0)
}

fn form(a: &FormArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let sys = parse_system(&a.system)?;
    if sys.side() > a.max_side {
        return Err(CliError::ResourceCap(format!(
            "form test needs side {}, above the limit {}",
            sys.side(),
            a.max_side
        )));
    }
    let mats = pauli_matrices(&sys.generators(), sys.n())?;
    let f = classify_form(&mats, None)?;
    let mut text = format!("kind: {}\n", form_kind_name(f.kind));
    if let Some(sign) = f.s_sbar_sign {
        text.push_str(&format!("sign: {sign:+}\n"));
    }
    text.push_str(&format!("residual: {:.3e}\n", f.residual));
    if !f.exclusive {
        let kinds: Vec<&str> = f.kinds_found.iter().map(|&k| form_kind_name(k)).collect();
        text.push_str(&format!("solution dim: {} (kinds found: {})\n", f.solution_dim, kinds.join(", ")));
    }
    if let Some(s) = &f.s {
        match &a.output {
            Some(path) => {
                let body = serde_json::to_string_pretty(&matrix_json(s)).expect("json values serialise");
                write_file(path, &(body + "\n"))?;
                text.push_str(&format!("S written to {}\n", path.display()));
            }
            None => {
                text.push_str("S:\n");
                for i in 0..s.rows() {
                    let row: Vec<String> = (0..s.cols()).map(|j| format_entry(s.get(i, j))).collect();
                    text.push_str(&format!("  {}\n", row.join(" ")));
                }
            }
        }
    }
    emit(out, &text)?;
    Ok(0)
}

fn catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if a.max_dim > a.lattice_cap && (a.dot.is_some() || a.csv.is_some()) {
        return Err(CliError::ResourceCap(format!(
            "lattices are built up to dimension {}, asked for {}",
            a.lattice_cap, a.max_dim
        )));
    }
    let mut text = String::new();
    for rec in enumerate_irreps(a.max_dim) {
        text.push_str(&format!("{rec}\n"));
    }
    emit(out, &text)?;
    if let Some(path) = &a.dot {
        let lattices =
            (2..=a.max_dim).map(|n| build_lattice_with_cap(n, a.lattice_cap)).collect::<Result<Vec<_>, _>>()?;
        write_file(path, &Lattice::combined_dot(&lattices))?;
    }
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        for row in catalog_csv_rows(a.max_dim)? {
            w.serialize(&row).map_err(|e| CliError::Input(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(0)
}
