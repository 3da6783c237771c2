//! Batch runs behind the command line: parse, compute, and assemble the JSON
//! report.

use serde_json::{json, Value};

use crate::bounds::{self, Bound};
use crate::chains::{is_squarefree_chain, ChainRefusal};
use crate::decompose::{
    decompose_with, parse_bypass_chains, triangular_decompose, Decomposition, InputSystem,
};
use crate::meter::{Measurements, Recording};
use crate::oracle::{split_linear_solve, verify_decomposition, SplitLinearSystem};
use crate::poly::{parse_polynomial_lines, ParseError, Polynomial, VariableOrder};
use crate::unmixed::unmixed;

pub const SCHEMA: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Decompose,
    UnmixedOnly,
    BoundsOnly,
    Verify,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Decompose => "decompose",
            Mode::UnmixedOnly => "unmixed-only",
            Mode::BoundsOnly => "bounds-only",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub order: Option<Vec<String>>,
    pub m: Option<u32>,
    pub seed: u64,
    pub verify: bool,
    /// Parameters for bounds-only runs without an input file.
    pub n: Option<u32>,
    pub d: Option<u32>,
    pub r: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Decompose,
            order: None,
            m: None,
            seed: DEFAULT_SEED,
            verify: false,
            n: None,
            d: None,
            r: None,
        }
    }
}

/// Exit status 1 for bad input, 2 for internal faults.
#[derive(Debug)]
pub struct RunFailure {
    pub code: i32,
    pub message: String,
    pub detail: Value,
}

impl RunFailure {
    fn input(message: impl Into<String>) -> RunFailure {
        RunFailure {
            code: 1,
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn parse(e: ParseError) -> RunFailure {
        RunFailure {
            code: 1,
            message: e.to_string(),
            detail: json!({ "line": e.line }),
        }
    }

    fn fault(message: impl Into<String>, detail: Value) -> RunFailure {
        RunFailure {
            code: 2,
            message: message.into(),
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "error": { "code": self.code, "message": self.message, "detail": self.detail },
        })
    }
}

impl From<crate::Error> for RunFailure {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidInput(_)
            | crate::Error::NotTriangular(_)
            | crate::Error::NotNormalized(_) => RunFailure::input(e.to_string()),
            other => RunFailure::fault(other.to_string(), Value::Null),
        }
    }
}

/// Runs one configuration on the given input text (and optional chains
/// replacing the candidate step).
pub fn run(cfg: &RunConfig, input: Option<&str>, bypass: Option<&str>) -> Result<Value, RunFailure> {
    let explicit = match &cfg.order {
        Some(names) => Some(VariableOrder::new(names.clone()).map_err(RunFailure::parse)?),
        None => None,
    };
    match cfg.mode {
        Mode::BoundsOnly => bounds_only(cfg, input, explicit.as_ref()),
        Mode::UnmixedOnly => {
            let text = input.ok_or_else(|| RunFailure::input("unmixed-only needs --input"))?;
            unmixed_only(cfg, text, explicit.as_ref())
        }
        Mode::Decompose | Mode::Verify => {
            let text = input.ok_or_else(|| RunFailure::input("decompose needs --input"))?;
            decompose_run(cfg, text, explicit.as_ref(), bypass)
        }
    }
}

fn header(cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("mode".into(), json!(cfg.mode.name()));
    out.insert("seed".into(), json!(cfg.seed));
    out
}

fn input_echo(system: &InputSystem) -> Value {
    let order = system.order();
    json!({
        "order": order.names(),
        "n": system.n(),
        "d": system.d(),
        "r": system.r(),
        "polys": system.polys().iter().map(|p| order.format(p)).collect::<Vec<_>>(),
    })
}

fn resolve_m(cfg: &RunConfig, n: u32) -> Result<u32, RunFailure> {
    let m = cfg.m.unwrap_or(n);
    if m < 1 || m > n {
        return Err(RunFailure::input(format!("--m must lie in 1..={n}, got {m}")));
    }
    Ok(m)
}

fn bounds_only(cfg: &RunConfig, input: Option<&str>, order: Option<&VariableOrder>) -> Result<Value, RunFailure> {
    let mut out = header(cfg);
    let (n, d, r) = match input {
        Some(text) => {
            let system = InputSystem::parse(text, order).map_err(RunFailure::parse)?;
            out.insert("input".into(), input_echo(&system));
            (system.n() as u32, system.d(), system.r() as u32)
        }
        None => {
            let n = cfg.n.ok_or_else(|| RunFailure::input("bounds-only needs --n or --input"))?;
            let d = cfg.d.ok_or_else(|| RunFailure::input("bounds-only needs --d or --input"))?;
            (n, d, cfg.r.unwrap_or(1))
        }
    };
    if n == 0 || d == 0 {
        return Err(RunFailure::input("bounds need n >= 1 and d >= 1"));
    }
    let m = resolve_m(cfg, n)?;
    out.insert("bounds".into(), bound_block(n, m, d, r)?.0);
    Ok(Value::Object(out))
}

struct BoundValues {
    degree: Bound,
    height: Bound,
    components: num_bigint::BigUint,
}

/// Bound block for `n` variables, chains of length `m`, input height `d`
/// and `r + 1` input polynomials. Formulas that need `d, m >= 2` are
/// evaluated at the clamped values, which only loosens them.
fn bound_block(n: u32, m: u32, d: u32, r: u32) -> Result<(Value, BoundValues), RunFailure> {
    let (dc, mc) = (d.max(2), m.max(2));
    let gamma = bounds::gamma_bound(d, m)?;
    let b = bounds::degree_bound_b(n, mc, dc, r)?;
    let height = bounds::output_height_bound(mc, dc, dc, 1)?;
    let components = bounds::component_bound(n, m, d)?;
    let gm = bounds::gm_comparison(n, m, d, d);
    let value = json!({
        "n": n,
        "m": m,
        "d": d,
        "r": r,
        "clamped": dc != d || mc != m,
        "precision_digits": bounds::DECIMAL_DIGITS,
        "gamma_bound": gamma,
        "degree_bound_b": b.b,
        "epsilon": b.epsilon,
        "output_height_bound": height,
        "component_bound": components.to_string(),
        "gm_comparison": gm,
    });
    Ok((
        value,
        BoundValues {
            degree: b.b,
            height,
            components,
        },
    ))
}

fn ratio(measured: u64, bound: &Bound) -> String {
    Bound::int(measured).div(bound).to_scientific(6)
}

fn instrumentation(meas: &Measurements, count: usize, bv: &BoundValues) -> Value {
    let degree_ok = Bound::int(u64::from(meas.max_total_degree)).upper() <= bv.degree.upper();
    let height_ok = Bound::int(u64::from(meas.max_height)).upper() <= bv.height.upper();
    let count_ok = num_bigint::BigUint::from(count) <= bv.components;
    json!({
        "polys_observed": meas.polys_observed,
        "max_total_degree": meas.max_total_degree,
        "max_height": meas.max_height,
        "max_alpha_per_level": meas.max_alpha_per_level,
        "component_count": count,
        "degree_ratio": ratio(u64::from(meas.max_total_degree), &bv.degree),
        "height_ratio": ratio(u64::from(meas.max_height), &bv.height),
        "within_degree_bound": degree_ok,
        "within_height_bound": height_ok,
        "within_component_bound": count_ok,
    })
}

fn certify(set: &crate::chains::TriangularSet, lines: &[String]) -> Result<&'static str, RunFailure> {
    match is_squarefree_chain(set) {
        Ok(_) => Ok("squarefree-regular"),
        Err(ChainRefusal::Fault(e)) => Err(RunFailure::fault(e.to_string(), json!({ "chain": lines }))),
        Err(refusal) => Err(RunFailure::fault(
            format!("output chain is not squarefree regular: {refusal:?}"),
            json!({ "chain": lines }),
        )),
    }
}

fn component_json(
    order: &VariableOrder,
    free: &[usize],
    leaders: &[usize],
    polys: &[Polynomial],
    degrees: &[u32],
    gamma: u32,
    certificate: &str,
) -> Value {
    json!({
        "free": free.iter().map(|&v| order.name(v)).collect::<Vec<_>>(),
        "leaders": leaders.iter().map(|&v| order.name(v)).collect::<Vec<_>>(),
        "chain": polys.iter().map(|p| order.format(p)).collect::<Vec<_>>(),
        "leader_degrees": degrees,
        "heights": polys.iter().map(Polynomial::height).collect::<Vec<_>>(),
        "gamma": gamma,
        "certificate": certificate,
    })
}

fn decompose_run(
    cfg: &RunConfig,
    text: &str,
    order: Option<&VariableOrder>,
    bypass: Option<&str>,
) -> Result<Value, RunFailure> {
    let system = InputSystem::parse(text, order).map_err(RunFailure::parse)?;
    let n = system.n() as u32;
    let m = resolve_m(cfg, n)?;
    let mut out = header(cfg);
    out.insert("input".into(), input_echo(&system));

    let rec = Recording::start();
    let decomp: Decomposition = match bypass {
        Some(chains) => {
            let cands = parse_bypass_chains(chains, system.order()).map_err(RunFailure::parse)?;
            decompose_with(&system, cands, cfg.seed)?
        }
        None => triangular_decompose(&system, cfg.seed)?,
    };
    let meas = rec.finish();

    let sys_order = system.order();
    let mut comps = Vec::new();
    for c in &decomp.components {
        let polys = c.original_polys();
        let lines: Vec<String> = polys.iter().map(|p| sys_order.format(p)).collect();
        let cert = certify(c.chain.set(), &lines)?;
        comps.push(component_json(
            sys_order,
            &c.layout.free,
            &c.leaders(),
            &polys,
            &c.chain.degrees(),
            c.algebra.gamma(),
            cert,
        ));
    }
    out.insert("inconsistent".into(), json!(decomp.inconsistent));
    out.insert("components".into(), Value::Array(comps));
    let absent: Vec<Value> = decomp
        .candidates
        .iter()
        .filter(|c| c.chain.is_none())
        .map(|c| {
            json!({
                "free": c.layout.free.iter().map(|&v| sys_order.name(v)).collect::<Vec<_>>(),
                "note": c.note,
            })
        })
        .collect();
    out.insert("absent_candidates".into(), Value::Array(absent));
    let failures: Vec<Value> = decomp
        .failures
        .iter()
        .map(|(free, why)| {
            json!({
                "free": free.iter().map(|&v| sys_order.name(v)).collect::<Vec<_>>(),
                "reason": why,
            })
        })
        .collect();
    out.insert("failures".into(), Value::Array(failures));

    let (block, bv) = bound_block(n, m, system.d().max(1), system.r() as u32)?;
    out.insert(
        "instrumentation".into(),
        instrumentation(&meas, decomp.components.len(), &bv),
    );
    out.insert("bounds".into(), block);

    if cfg.mode == Mode::Verify || cfg.verify {
        let split = SplitLinearSystem::from_system(&system)
            .map_err(|e| RunFailure::input(format!("verification needs a split-linear system: {e}")))?;
        let truth = split_linear_solve(&split);
        let report = verify_decomposition(&decomp, &system, &truth, cfg.seed);
        let value = serde_json::to_value(&report)
            .map_err(|e| RunFailure::fault(e.to_string(), Value::Null))?;
        out.insert("verification".into(), value);
    }
    Ok(Value::Object(out))
}

/// Input: the chain as one block (one element per line, increasing
/// leaders), a blank line, then `f` and optionally `h`.
fn unmixed_only(cfg: &RunConfig, text: &str, order: Option<&VariableOrder>) -> Result<Value, RunFailure> {
    let order = order.cloned().unwrap_or_else(|| VariableOrder::infer(text));
    let lines: Vec<&str> = text.lines().collect();
    let split = lines
        .iter()
        .position(|l| l.trim().is_empty())
        .filter(|&k| lines[..k].iter().any(|l| !l.trim().is_empty()))
        .ok_or_else(|| RunFailure::input("unmixed-only input needs a chain block, a blank line, then f [and h]"))?;
    let chain_text = lines[..split].join("\n");
    let rest = lines[split + 1..].join("\n");
    let cands = parse_bypass_chains(&chain_text, &order).map_err(RunFailure::parse)?;
    let cand = cands
        .into_iter()
        .next()
        .ok_or_else(|| RunFailure::input("empty chain"))?;
    let chain = cand.chain.expect("parsed chains are present");
    let layout = cand.layout;
    let fh = parse_polynomial_lines(&rest, &order).map_err(|e| {
        RunFailure::parse(ParseError {
            line: e.line + split + 1,
            message: e.message,
        })
    })?;
    let (f, h) = match fh.as_slice() {
        [f] => (f.clone(), Polynomial::one()),
        [f, h] => (f.clone(), h.clone()),
        _ => return Err(RunFailure::input("expected f and optionally h after the chain")),
    };
    let n = order.len() as u32;
    let m = chain.len() as u32;
    let d = chain.polys().iter().map(Polynomial::height).max().unwrap_or(1);

    let mut out = header(cfg);
    out.insert(
        "input".into(),
        json!({
            "order": order.names(),
            "chain": chain.polys().iter().map(|p| order.format(&layout.to_original(p))).collect::<Vec<_>>(),
            "f": order.format(&f),
            "h": order.format(&h),
        }),
    );
    let rec = Recording::start();
    let result = unmixed(&chain, &layout.to_permuted(&f, 0), &layout.to_permuted(&h, 0), cfg.seed)?;
    let meas = rec.finish();
    let leaders: Vec<usize> = layout.position[layout.free.len()..].to_vec();
    let mut comps = Vec::new();
    for c in &result.components {
        let polys: Vec<Polynomial> = c.chain.polys().iter().map(|p| layout.to_original(p)).collect();
        let lines: Vec<String> = polys.iter().map(|p| order.format(p)).collect();
        let cert = certify(c.chain.set(), &lines)?;
        comps.push(component_json(
            &order,
            &layout.free,
            &leaders[..c.chain.len()],
            &polys,
            &c.chain.degrees(),
            c.algebra.gamma(),
            cert,
        ));
    }
    out.insert("components".into(), Value::Array(comps));
    let (mc, dc) = (m.max(2), d.max(2));
    let height = bounds::output_height_bound(mc, dc, f.height(), h.height())?;
    let within = Bound::int(u64::from(meas.max_height)).upper() <= height.upper();
    out.insert(
        "instrumentation".into(),
        json!({
            "polys_observed": meas.polys_observed,
            "max_total_degree": meas.max_total_degree,
            "max_height": meas.max_height,
            "max_alpha_per_level": meas.max_alpha_per_level,
            "component_count": result.components.len(),
            "height_ratio": ratio(u64::from(meas.max_height), &height),
            "within_height_bound": within,
        }),
    );
    out.insert(
        "bounds".into(),
        json!({
            "n": n,
            "m": m,
            "d": d,
            "clamped": mc != m || dc != d,
            "gamma_bound": bounds::gamma_bound(d.max(1), m.max(1))?,
            "output_height_bound": height,
        }),
    );
    Ok(Value::Object(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_only_without_input() {
        let cfg = RunConfig {
            mode: Mode::BoundsOnly,
            n: Some(2),
            d: Some(2),
            r: Some(1),
            ..RunConfig::default()
        };
        let v = run(&cfg, None, None).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["bounds"]["gamma_bound"], "128");
        assert_eq!(v["bounds"]["component_bound"], "169");
        assert!(v.get("components").is_none());
    }

    #[test]
    fn malformed_line_is_exit_one() {
        let cfg = RunConfig::default();
        let err = run(&cfg, Some("x1 + 1\nx1 * * x2\n"), None).unwrap_err();
        assert_eq!(err.code, 1);
        assert_eq!(err.detail["line"], 2);
    }

    #[test]
    fn decompose_is_deterministic() {
        let cfg = RunConfig {
            verify: true,
            ..RunConfig::default()
        };
        let text = "(x1-1)*(x1-2)*(x2-1)*(x2-2)";
        let a = serde_json::to_string(&run(&cfg, Some(text), None).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&cfg, Some(text), None).unwrap()).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["verification"]["redundant_degree"], 4);
        assert_eq!(v["instrumentation"]["within_degree_bound"], true);
    }

    #[test]
    fn unmixed_only_splits_by_multiplicity() {
        let cfg = RunConfig {
            mode: Mode::UnmixedOnly,
            ..RunConfig::default()
        };
        let v = run(&cfg, Some("(x1-1)^2*(x1-2)\n\n0\n"), None).unwrap();
        let chains: Vec<&str> = v["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["chain"][0].as_str().unwrap())
            .collect();
        assert_eq!(chains.len(), 2, "{chains:?}");
    }
}
