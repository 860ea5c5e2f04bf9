mod args;
mod output;
mod presets;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ruin_core::{
    chi, estimate_reach_prob, estimate_survival, solve_chi, survival_classical,
    survival_erlang2_with, EliminationRule, ExpSum, ModelSpec, RuinError, SignVariant,
};
use serde_json::{json, Value};

use args::{
    Arrival, Cli, Command, Example, Format, GridArgs, ModelArgs, OutputArgs, Rule, Variant,
};
use output::{canonical_json, curve_csv, curve_json, sig6, Point};

const EXIT_MODEL: u8 = 3;
const EXIT_SOLVER: u8 = 4;
const EXIT_IO: u8 = 1;

enum Failure {
    Core(RuinError),
    Io(String),
}

impl From<RuinError> for Failure {
    fn from(e: RuinError) -> Self {
        Failure::Core(e)
    }
}

/// What a command produced, before formatting.
enum Artifact {
    Curve { meta: Value, points: Vec<Point> },
    Comparison { meta: Value, rows: Vec<Row> },
}

struct Row {
    theta: f64,
    quantity: String,
    computed: f64,
    printed: f64,
}

impl Row {
    fn deviation(&self) -> f64 {
        (self.computed - self.printed).abs()
    }
}

fn model_json(m: &ModelSpec) -> Value {
    serde_json::to_value(m).expect("model serializes")
}

fn classical(m: &ModelArgs, lambda: f64) -> Result<ModelSpec, Failure> {
    Ok(ModelSpec::classical(m.c, m.alpha, lambda, m.theta)?)
}

fn erlang2(m: &ModelArgs, beta: f64) -> Result<ModelSpec, Failure> {
    Ok(ModelSpec::erlang2(m.c, m.alpha, beta, m.theta)?)
}

fn curve(
    grid: &GridArgs,
    f: impl Fn(f64) -> Result<f64, RuinError>,
) -> Result<Vec<Point>, Failure> {
    grid.u
        .0
        .iter()
        .map(|&u| {
            Ok(Point {
                u,
                value: f(u)?,
                stderr: None,
            })
        })
        .collect()
}

fn expsum_json(e: &ExpSum) -> Value {
    serde_json::to_value(e).expect("exponential sums serialize")
}

fn rule(r: Rule) -> EliminationRule {
    match r {
        Rule::Exact => EliminationRule::Exact,
        Rule::Collective => EliminationRule::Collective,
    }
}

fn execute(cmd: &Command) -> Result<Artifact, Failure> {
    match cmd {
        Command::SurvivalClassical {
            model,
            lambda,
            grid,
            ..
        } => {
            let m = classical(model, *lambda)?;
            let sol = survival_classical(&m)?;
            Ok(Artifact::Curve {
                meta: json!({
                    "command": "survival-classical",
                    "model": model_json(&m),
                    "phi0": sol.phi0,
                    "survival": expsum_json(&sol.phi),
                }),
                points: curve(grid, |u| Ok(sol.survival(u)))?,
            })
        }
        Command::SurvivalErlang2 {
            model,
            beta,
            variant,
            rule: r,
            grid,
            ..
        } => {
            let m = erlang2(model, *beta)?;
            let v = match variant {
                Variant::Minus => SignVariant::Minus,
                Variant::Plus => SignVariant::Plus,
            };
            let sol = survival_erlang2_with(&m, v, rule(*r))?;
            Ok(Artifact::Curve {
                meta: json!({
                    "command": "survival-erlang2",
                    "model": model_json(&m),
                    "delta0": sol.delta0,
                    "sign_variant": v.to_string(),
                    "rule": sol.rule.to_string(),
                    "survival": expsum_json(&sol.delta),
                }),
                points: curve(grid, |u| Ok(sol.survival(u)))?,
            })
        }
        Command::MaxSurplus {
            model,
            lambda,
            b,
            grid,
            ..
        } => {
            let m = classical(model, *lambda)?;
            let sol = solve_chi(&m, *b)?;
            let terms: Vec<Value> = sol
                .terms
                .iter()
                .map(|t| {
                    let a = t.unanchored_coef();
                    json!({"coef_re": a.re, "coef_im": a.im, "rate_re": t.rate.re, "rate_im": t.rate.im})
                })
                .collect();
            Ok(Artifact::Curve {
                meta: json!({
                    "command": "max-surplus",
                    "model": model_json(&m),
                    "b": b,
                    "a0": sol.a0,
                    "terms": terms,
                    "condition": sol.condition,
                }),
                points: curve(grid, |u| sol.chi(u))?,
            })
        }
        Command::Simulate {
            model,
            arrival,
            lambda,
            beta,
            b,
            n,
            seed,
            grid,
            ..
        } => {
            let m = match arrival {
                Arrival::Poisson => classical(model, *lambda)?,
                Arrival::Erlang2 => erlang2(model, *beta)?,
            };
            let seed = seed_override().unwrap_or(*seed);
            let mut points = Vec::new();
            let mut bias = Vec::new();
            for &u in &grid.u.0 {
                let est = match b {
                    Some(level) => estimate_reach_prob(&m, u, *level, *n, seed)?,
                    None => {
                        let s = estimate_survival(&m, u, *n, seed, None)?;
                        bias.push(
                            json!({"u": u, "b_proxy": s.b_proxy, "bias_bound": s.bias_bound}),
                        );
                        s.estimate
                    }
                };
                points.push(Point {
                    u,
                    value: est.value,
                    stderr: Some(est.stderr),
                });
            }
            let mut meta = json!({
                "command": "simulate",
                "model": model_json(&m),
                "n": n,
                "seed": seed,
                "b": b,
            });
            if b.is_none() {
                meta["survival_proxy"] = Value::Array(bias);
            }
            Ok(Artifact::Curve { meta, points })
        }
        Command::Reproduce {
            example, rule: r, ..
        } => reproduce(*example, rule(*r)),
    }
}

fn seed_override() -> Option<u64> {
    std::env::var("RUIN_SEED").ok()?.trim().parse().ok()
}

fn term_rows(
    theta: f64,
    expsum: &ExpSum,
    printed: &[(f64, f64)],
    rows: &mut Vec<Row>,
) -> Result<(), Failure> {
    for &(coef, rate) in printed {
        let t = expsum.coef_near(rate.into()).ok_or_else(|| {
            RuinError::Structure(format!("no term near exponent {rate} at θ = {theta}"))
        })?;
        rows.push(Row {
            theta,
            quantity: format!("coefficient at {rate}"),
            computed: t.coef.re,
            printed: coef,
        });
        rows.push(Row {
            theta,
            quantity: format!("exponent near {rate}"),
            computed: t.rate.re,
            printed: rate,
        });
    }
    Ok(())
}

fn reproduce(example: Example, rule: EliminationRule) -> Result<Artifact, Failure> {
    use presets::*;
    let mut rows = Vec::new();
    let preset = match example {
        Example::Example1 => {
            for (theta, phi0, terms) in EXAMPLE1 {
                let sol = survival_classical(&ModelSpec::classical(C, ALPHA, LAMBDA, theta)?)?;
                rows.push(Row {
                    theta,
                    quantity: "phi(0)".into(),
                    computed: sol.phi0,
                    printed: phi0,
                });
                term_rows(theta, &sol.phi, terms, &mut rows)?;
            }
            json!({"arrival": "poisson", "c": C, "alpha": ALPHA, "lambda": LAMBDA})
        }
        Example::Example2 => {
            for (theta, delta0, terms) in EXAMPLE2 {
                let m = ModelSpec::erlang2(C, ALPHA, BETA, theta)?;
                let sol = survival_erlang2_with(&m, SignVariant::Minus, rule)?;
                rows.push(Row {
                    theta,
                    quantity: "delta(0)".into(),
                    computed: sol.delta0,
                    printed: delta0,
                });
                term_rows(theta, &sol.delta, terms, &mut rows)?;
            }
            json!({
                "arrival": "erlang2", "c": C, "alpha": ALPHA, "beta": BETA,
                "sign_variant": SignVariant::Minus.to_string(), "rule": rule.to_string(),
            })
        }
        Example::Example3 => {
            for (theta, pairs) in EXAMPLE3 {
                let sol = solve_chi(&ModelSpec::classical(C, ALPHA, LAMBDA, theta)?, B)?;
                for &(coef, rate) in pairs {
                    let t = sol.term_near(rate.into()).ok_or_else(|| {
                        RuinError::Structure(format!("no term near exponent {rate} at θ = {theta}"))
                    })?;
                    rows.push(Row {
                        theta,
                        quantity: format!("coefficient at {rate}"),
                        computed: t.unanchored_coef().re,
                        printed: coef,
                    });
                    rows.push(Row {
                        theta,
                        quantity: format!("exponent near {rate}"),
                        computed: t.rate.re,
                        printed: rate,
                    });
                }
                rows.push(Row {
                    theta,
                    quantity: "chi(0, 20)".into(),
                    computed: chi(&ModelSpec::classical(C, ALPHA, LAMBDA, theta)?, 0.0, B)?,
                    printed: f64::NAN,
                });
            }
            json!({"arrival": "poisson", "c": C, "alpha": ALPHA, "lambda": LAMBDA, "b": B})
        }
    };
    let name = match example {
        Example::Example1 => "example1",
        Example::Example2 => "example2",
        Example::Example3 => "example3",
    };
    Ok(Artifact::Comparison {
        meta: json!({"command": "reproduce", "example": name, "preset": preset}),
        rows,
    })
}

fn render(artifact: Artifact, format: Format) -> String {
    match (artifact, format) {
        (Artifact::Curve { points, .. }, Format::Csv) => curve_csv(&points),
        (Artifact::Curve { mut meta, points }, Format::Json) => {
            meta["points"] = curve_json(&points);
            canonical_json(&meta)
        }
        (Artifact::Comparison { rows, .. }, Format::Csv) => {
            let mut out = String::from("theta,quantity,computed,printed,deviation\n");
            for r in &rows {
                let opt = |x: f64| if x.is_nan() { String::new() } else { sig6(x) };
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    sig6(r.theta),
                    r.quantity,
                    sig6(r.computed),
                    opt(r.printed),
                    opt(r.deviation())
                ));
            }
            out
        }
        (Artifact::Comparison { mut meta, rows }, Format::Json) => {
            let compared: Vec<&Row> = rows.iter().filter(|r| !r.printed.is_nan()).collect();
            meta["max_deviation"] = compared
                .iter()
                .map(|r| r.deviation())
                .fold(0.0, f64::max)
                .into();
            meta["rows"] = rows
                .iter()
                .map(|r| {
                    let opt = |x: f64| if x.is_nan() { Value::Null } else { x.into() };
                    json!({
                        "theta": r.theta,
                        "quantity": r.quantity,
                        "computed": r.computed,
                        "printed": opt(r.printed),
                        "deviation": opt(r.deviation()),
                    })
                })
                .collect();
            canonical_json(&meta)
        }
    }
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::SurvivalClassical { out, .. }
        | Command::SurvivalErlang2 { out, .. }
        | Command::MaxSurplus { out, .. }
        | Command::Simulate { out, .. }
        | Command::Reproduce { out, .. } => out,
    }
}

fn emit(text: &str, out: &OutputArgs) -> Result<(), Failure> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = output_args(&cli.command);
    let result = execute(&cli.command).and_then(|a| emit(&render(a, out.format), out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                RuinError::Input(_) | RuinError::Loading { .. } => EXIT_MODEL,
                RuinError::Structure(_) | RuinError::Conditioning(_) | RuinError::Pole { .. } => {
                    EXIT_SOLVER
                }
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
