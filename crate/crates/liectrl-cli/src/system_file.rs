use std::fmt::Write as _;
use std::path::Path;

use liectrl_core::decide::ControlSystem;
use liectrl_core::pauli::{format_rational, parse_rational, PauliExpr, PauliTerm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// One weighted Pauli string, with the coefficient as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub pauli: String,
}

/// On-disk description of a qubit control system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    pub drift: Vec<TermJson>,
    pub controls: Vec<Vec<TermJson>>,
    #[serde(default)]
    pub label: String,
}

fn expr_from_terms(n: usize, terms: &[TermJson], field: &str) -> Result<PauliExpr, CliError> {
    let invalid = |i: usize, what: String| CliError::Input(format!("{field}[{i}]: {what}"));
    let mut out = PauliExpr::zero(n).map_err(|e| CliError::Input(format!("n: {e}")))?;
    for (i, t) in terms.iter().enumerate() {
        if t.pauli.chars().count() != n {
            return Err(invalid(
                i,
                format!("pauli {:?} has length {}, expected n = {n}", t.pauli, t.pauli.chars().count()),
            ));
        }
        let letters = t
            .pauli
            .chars()
            .map(liectrl_core::pauli::Letter::from_char)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(i, format!("pauli {:?}: {e}", t.pauli)))?;
        let coeff = parse_rational(&t.coeff).map_err(|e| invalid(i, format!("coeff: {e}")))?;
        let term = PauliTerm::from_letters(&letters).map_err(|e| invalid(i, e.to_string()))?;
        out = out.add(&PauliExpr::from_term(term, coeff)).map_err(|e| invalid(i, e.to_string()))?;
    }
    Ok(out)
}

fn terms_of(e: &PauliExpr) -> Vec<TermJson> {
    e.terms().map(|(t, c)| TermJson { coeff: format_rational(c), pauli: t.to_string() }).collect()
}

impl SystemFile {
    pub fn from_system(system: &ControlSystem) -> SystemFile {
        SystemFile {
            n: system.n(),
            drift: terms_of(&system.drift),
            controls: system.controls.iter().map(terms_of).collect(),
            label: system.label.clone(),
        }
    }

    pub fn to_system(&self) -> Result<ControlSystem, CliError> {
        let drift = expr_from_terms(self.n, &self.drift, "drift")?;
        let controls = self
            .controls
            .iter()
            .enumerate()
            .map(|(j, c)| expr_from_terms(self.n, c, &format!("controls[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        ControlSystem::qubits(drift, controls, &self.label).map_err(|e| CliError::Input(e.to_string()))
    }
}

/// Parses a system description from JSON text. Syntax errors carry the line
/// and column reported by the JSON parser.
pub fn parse_system_str(text: &str) -> Result<ControlSystem, CliError> {
    let file: SystemFile = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("line {} column {}: {e}", e.line(), e.column())))?;
    file.to_system()
}

pub fn parse_system(path: &Path) -> Result<ControlSystem, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    parse_system_str(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Pretty JSON for a system, ending in a newline.
pub fn render_system(system: &ControlSystem) -> String {
    let mut s = serde_json::to_string_pretty(&SystemFile::from_system(system)).expect("system files always serialise");
    let _ = writeln!(s);
    s
}
