use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use sympovm::dilate::{cg_unitary_two_qubits, dicke_isometry, dilate_set};
use sympovm::measure::{
    born_probabilities, pauli_decompose, post_state, post_state_pure, ppt_check_eps, update_weight, OutcomeSampler,
    PptResult,
};
use sympovm::povm::{coalesce_degenerate_eps, completeness_defect, spherical_povm, PovmElement, PovmSet};
use sympovm::{CMatrix, DensityMatrix, HalfInt, PureState};

use crate::error::CliError;
use crate::json::{read_state, JsonMatrix, MatrixKind, StateInput};
use crate::verify;

/// Largest spin accepted by `povm`.
pub const MAX_TWICE_J: i64 = 64;
/// Largest register accepted by `dilate` and `measure` (dense 2^n × 2^n matrices).
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outputs: Value, seed: Option<u64>) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }
}

pub fn parse_j(text: &str) -> Result<HalfInt, CliError> {
    let j: HalfInt = text
        .parse()
        .map_err(|e: sympovm::Error| CliError::Usage(e.to_string()))?;
    if j.twice() < 1 {
        return Err(CliError::Usage(format!("j must be at least 1/2, got {j}")));
    }
    if j.twice() > MAX_TWICE_J {
        return Err(CliError::Usage(format!(
            "j = {j} exceeds the supported maximum {}",
            MAX_TWICE_J / 2
        )));
    }
    Ok(j)
}

fn symmetric_set(j: HalfInt, coalesce: bool, eps: f64) -> Result<PovmSet, CliError> {
    let set = spherical_povm(j)?;
    Ok(if coalesce {
        coalesce_degenerate_eps(&set, eps)
    } else {
        set
    })
}

fn qubits_for(j: HalfInt) -> Result<usize, CliError> {
    let n = j.twice() as usize;
    if n > MAX_QUBITS {
        return Err(CliError::Usage(format!(
            "j = {j} needs {n} qubits; dilation is limited to {MAX_QUBITS}"
        )));
    }
    Ok(n)
}

pub fn find_element<'a>(set: &'a PovmSet, label: &str) -> Result<&'a PovmElement, CliError> {
    set.find(label).ok_or_else(|| {
        let mut valid: Vec<String> = Vec::new();
        for e in &set.elements {
            valid.push(e.label.clone());
            valid.extend(e.members.iter().filter(|m| **m != e.label).cloned());
        }
        CliError::Usage(format!("unknown element {label:?}; valid labels: {}", valid.join(", ")))
    })
}

fn matrix(m: &CMatrix) -> Value {
    json!(JsonMatrix::encode(MatrixKind::Matrix, m))
}

fn element_json(e: &PovmElement) -> Value {
    json!({
        "label": e.label,
        "multiplicity": e.multiplicity,
        "members": e.members,
        "matrix": matrix(&e.mat),
    })
}

pub fn pauli_json(m: &CMatrix, n_qubits: usize) -> Result<Value, CliError> {
    let d = pauli_decompose(m, n_qubits)?;
    if d.is_real(sympovm::tol::PAULI_ZERO) {
        return Ok(json!(d.real_coeffs()));
    }
    let coeffs: BTreeMap<&String, [f64; 2]> = d.coeffs.iter().map(|(k, c)| (k, [c.re, c.im])).collect();
    Ok(json!(coeffs))
}

fn ppt_json(r: &PptResult) -> Value {
    json!({
        "eigenvalues": r.eigenvalues,
        "min_eigenvalue": r.min_eigenvalue,
        "entangled": r.entangled,
        "conclusive_for_separability": matches!(r.strength, sympovm::measure::PptStrength::NecessaryAndSufficient),
    })
}

pub fn povm(j_text: &str, coalesce: bool, eps: f64) -> Result<RunReport, CliError> {
    let j = parse_j(j_text)?;
    let set = symmetric_set(j, coalesce, eps)?;
    let outputs = json!({
        "j": j.to_string(),
        "dim": set.dim,
        "count": set.len(),
        "completeness_defect": completeness_defect(&set),
        "elements": set.elements.iter().map(element_json).collect::<Vec<_>>(),
    });
    let inputs = json!({ "j": j_text, "coalesce": coalesce });
    Ok(RunReport::new("povm", inputs, outputs, None))
}

pub fn dilate(
    j_text: &str,
    n_qubits: Option<usize>,
    label: &str,
    coalesce: bool,
    eps: f64,
) -> Result<RunReport, CliError> {
    let j = parse_j(j_text)?;
    let n = qubits_for(j)?;
    if let Some(given) = n_qubits {
        if given != n {
            return Err(CliError::Usage(format!("j = {j} lives on {n} qubits, not {given}")));
        }
    }
    let set = symmetric_set(j, coalesce, eps)?;
    let e = find_element(&set, label)?;
    let iso = dicke_isometry(n)?;
    let eps_el = sympovm::dilate::dilate_element(e, &iso)?;
    let mut outputs = json!({
        "label": e.label,
        "members": e.members,
        "n_qubits": n,
        "symmetric": matrix(&e.mat),
        "dilated": matrix(&eps_el.mat),
        "pauli": pauli_json(&eps_el.mat, n)?,
    });
    if n == 2 {
        let cg = cg_unitary_two_qubits();
        outputs["cg_unitary"] = matrix(cg.matrix());
        outputs["cg_route_defect"] = json!(cg.dilate(&e.mat)?.distance(&eps_el.mat));
    }
    let inputs = json!({ "j": j_text, "n_qubits": n_qubits, "element": label, "coalesce": coalesce });
    Ok(RunReport::new("dilate", inputs, outputs, None))
}

#[derive(Debug, Clone)]
pub struct MeasureArgs {
    pub state: PathBuf,
    pub j: Option<String>,
    pub n_qubits: Option<usize>,
    pub element: Option<String>,
    pub sample: Option<usize>,
    pub seed: u64,
    pub coalesce: bool,
}

/// Picks the symmetric-subspace set or its dilation to match the state's dimension.
fn measurement_set(
    args: &MeasureArgs,
    dim: usize,
    eps: f64,
) -> Result<(PovmSet, &'static str, Option<usize>), CliError> {
    let j = match (&args.j, args.n_qubits) {
        (Some(text), n) => {
            let j = parse_j(text)?;
            if let Some(n) = n {
                if n as i64 != j.twice() {
                    return Err(CliError::Usage(format!(
                        "j = {j} lives on {} qubits, not {n}",
                        j.twice()
                    )));
                }
            }
            j
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(CliError::Usage("n-qubits must be at least 1".into()));
            }
            HalfInt::from_twice(n as i64)
        }
        (None, None) => return Err(CliError::Usage("give --j or --n-qubits".into())),
    };
    let set = symmetric_set(j, args.coalesce, eps)?;
    let sym_dim = set.dim;
    let n = j.twice() as usize;
    if dim == sym_dim && args.n_qubits.is_none() {
        return Ok((set, "symmetric", None));
    }
    let full = if n <= MAX_QUBITS { 1usize << n } else { 0 };
    if dim == full {
        let iso = dicke_isometry(n)?;
        return Ok((dilate_set(&set, &iso)?, "dilated", Some(n)));
    }
    Err(CliError::Usage(format!(
        "state has dimension {dim}; j = {j} needs {sym_dim} (symmetric subspace) or 2^{n} (qubit register)"
    )))
}

pub fn measure(args: &MeasureArgs, eps: f64) -> Result<RunReport, CliError> {
    let state = read_state(&args.state, eps)?;
    let (set, space, n_qubits) = measurement_set(args, state.dim(), eps)?;
    let rho = state.density();
    let probs = born_probabilities(&rho, &set)?;
    let total: f64 = probs.iter().map(|(_, p)| p).sum();
    let mut outputs = json!({
        "space": space,
        "dim": set.dim,
        "n_qubits": n_qubits,
        "probabilities": probs.iter().map(|(l, p)| json!({"label": l, "probability": p})).collect::<Vec<_>>(),
        "total_probability": total,
    });
    let mut inputs = json!({
        "state": args.state.display().to_string(),
        "state_type": state.kind(),
        "j": args.j,
        "n_qubits": args.n_qubits,
        "coalesce": args.coalesce,
    });
    let mut seed = None;
    match (&args.element, args.sample) {
        (Some(label), None) => {
            inputs["element"] = json!(label);
            let e = find_element(&set, label)?;
            outputs["outcome"] = outcome(&state, &rho, e, eps)?;
        }
        (None, Some(shots)) => {
            inputs["sample"] = json!(shots);
            seed = Some(args.seed);
            outputs["sampling"] = sampling(&rho, &set, shots, args.seed)?;
        }
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --element or --sample, not both".into())),
        (None, None) => return Err(CliError::Usage("give --element LABEL or --sample N".into())),
    }
    Ok(RunReport::new("measure", inputs, outputs, seed))
}

fn outcome(state: &StateInput, rho: &DensityMatrix, e: &PovmElement, eps: f64) -> Result<Value, CliError> {
    let probability = (e.mat.trace_inner(rho.matrix())?).re;
    let weight = update_weight(rho, e)?;
    let impossible = |err: sympovm::Error| CliError::Usage(format!("outcome {:?} cannot occur: {err}", e.label));
    let (post_json, post_rho) = match state {
        StateInput::Pure(psi) => {
            let post: PureState = post_state_pure(psi, e).map_err(impossible)?;
            (JsonMatrix::from_pure(&post), post.to_density())
        }
        StateInput::Density(_) => {
            let post = post_state(rho, e).map_err(impossible)?;
            (JsonMatrix::encode(MatrixKind::Density, post.matrix()), post)
        }
    };
    let mut out = json!({
        "label": e.label,
        "members": e.members,
        "probability": probability,
        "update_weight": weight,
        "post_state": post_json,
    });
    if post_rho.dim() == 4 {
        out["ppt"] = ppt_json(&ppt_check_eps(&post_rho, 2, 2, eps)?);
    }
    Ok(out)
}

fn sampling(rho: &DensityMatrix, set: &PovmSet, shots: usize, seed: u64) -> Result<Value, CliError> {
    let probs = born_probabilities(rho, set)?;
    let counts = OutcomeSampler::new(seed)
        .counts(rho, set, shots)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let table: Vec<Value> = probs
        .iter()
        .zip(&counts)
        .map(|((label, p), &c)| {
            json!({
                "label": label,
                "count": c,
                "frequency": if shots == 0 { 0.0 } else { c as f64 / shots as f64 },
                "probability": p,
            })
        })
        .collect();
    Ok(json!({ "shots": shots, "seed": seed, "counts": table }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Paper,
    Random,
}

/// Runs a verification suite; the report's `outputs.passed` says whether every check held.
pub fn verify(suite: Suite, dims: &[usize], seed: u64, eps: f64) -> Result<RunReport, CliError> {
    let (name, report, seed_used) = match suite {
        Suite::Paper => ("paper", verify::reference_suite(eps)?, None),
        Suite::Random => ("random", verify::random_suite(dims, seed)?, Some(seed)),
    };
    let inputs = json!({ "suite": name, "dims": dims });
    Ok(RunReport::new("verify", inputs, report, seed_used))
}
