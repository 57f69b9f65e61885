use std::fmt::Write as _;
use std::str::FromStr;

use liectrl_core::bilinear_form::FormKind;
use liectrl_core::catalog::format_weight;
use liectrl_core::decide::{DecisionBasis, Verdict};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}, expected text or json")),
        }
    }
}

pub fn form_kind_name(kind: FormKind) -> &'static str {
    match kind {
        FormKind::Orthogonal => "orthogonal",
        FormKind::Symplectic => "symplectic",
        FormKind::NoForm => "none",
    }
}

/// Short description of each numbered necessary condition.
pub fn condition_text(id: u8) -> &'static str {
    match id {
        1 => "the centraliser is nontrivial, so the system has a symmetry",
        2 => "the system is not connected",
        3 => "an invariant bilinear form exists",
        4 => "the expensive test rules out su(N)",
        _ => "unknown condition",
    }
}

fn outcome(v: &Verdict) -> &'static str {
    match (v.fully_controllable, v.decided_by) {
        (true, _) => "fully controllable",
        (false, DecisionBasis::Undecided) => "undecided",
        (false, _) => "not fully controllable",
    }
}

/// Stable JSON object for a verdict.
pub fn verdict_json(v: &Verdict) -> Value {
    let form = v.form.as_ref().map(|f| {
        json!({
            "kind": form_kind_name(f.kind),
            "sign": f.s_sbar_sign,
            "residual": f.residual,
            "exclusive": f.exclusive,
            "solution_dim": f.solution_dim,
        })
    });
    let identified = v.identified.as_ref().map(|id| {
        json!({
            "algebra": id.name,
            "weights": id.weights.iter().map(|w| format_weight(w)).collect::<Vec<_>>(),
            "confidence": id.confidence.as_str(),
            "candidates": id.candidates,
        })
    });
    json!({
        "label": v.label,
        "n": v.n,
        "centraliser_dim": v.centraliser_dim,
        "irreducible": v.irreducible,
        "connected": v.connected,
        "coupling_graph_connected": v.coupling_graph_connected,
        "form": form,
        "tensor_square_commutant_dim": v.tensor_square_dim,
        "closure_dim": v.closure_dim,
        "identified": identified,
        "fully_controllable": v.fully_controllable,
        "outcome": outcome(v),
        "decided_by": v.decided_by.as_str(),
        "failed_conditions": v.failed_conditions,
        "notes": v.notes,
        "inconsistency": v.inconsistency,
    })
}

fn or_skipped<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "not computed".to_string(), |v| v.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_report(v: &Verdict, format: Format) -> String {
    if format == Format::Json {
        let mut s = serde_json::to_string_pretty(&verdict_json(v)).expect("verdicts always serialise");
        s.push('\n');
        return s;
    }
    let mut s = String::new();
    let _ = writeln!(s, "system: {} ({} qubits, N = {})", v.label, v.n, v.side());
    let reducible = if v.irreducible { "irreducible" } else { "reducible" };
    let _ = writeln!(s, "centraliser dim: {} ({reducible})", v.centraliser_dim);
    let _ = write!(s, "connected: {}", yes_no(v.connected));
    if let Some(g) = v.coupling_graph_connected {
        let _ = write!(s, " (coupling graph {})", if g { "connected" } else { "disconnected" });
    }
    s.push('\n');
    match &v.form {
        Some(f) => {
            let sign = f.s_sbar_sign.map_or(String::new(), |x| format!(", sign {x:+}"));
            let _ = writeln!(s, "invariant form: {}{sign}", form_kind_name(f.kind));
        }
        None => s.push_str("invariant form: not computed\n"),
    }
    let _ = writeln!(s, "tensor-square commutant dim: {}", or_skipped(v.tensor_square_dim));
    let _ = writeln!(s, "closure dim: {}", or_skipped(v.closure_dim));
    if let Some(id) = &v.identified {
        let weights: Vec<String> = id.weights.iter().map(|w| format_weight(w)).collect();
        let _ = writeln!(s, "identified: {} {} ({})", id.name, weights.join("/"), id.confidence.as_str());
        if id.candidates.len() > 1 {
            let _ = writeln!(s, "candidates: {}", id.candidates.join("; "));
        }
    }
    let _ = writeln!(s, "verdict: {} (decided by {})", outcome(v), v.decided_by.as_str());
    for &c in &v.failed_conditions {
        let _ = writeln!(s, "failed condition {c}: {}", condition_text(c));
    }
    for note in &v.notes {
        let _ = writeln!(s, "note: {note}");
    }
    if let Some(why) = &v.inconsistency {
        let _ = writeln!(s, "inconsistency: {why}");
    }
    s
}
