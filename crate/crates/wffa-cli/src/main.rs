use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use wffa::automaton::{
    lower_to_monomials, negate_to_tropical, op_cauchy, op_hadamard, op_star, op_sum, parse_wffa, print_wffa,
};
use wffa::decide::{support_nfa, threshold_gt};
use wffa::instruments::{build_bond, effective_duration, evaluate_batch, parse_scenarios, Engine};
use wffa::regex::{classify_regex, parse_regex, print_regex, regex_to_wffa_over, wffa_to_regex};
use wffa::semiring::{parse_ext_real, parse_rational};
use wffa::{ExtReal, Interval, Rational, SemiringSpec, Wffa};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Lib { path: String, source: wffa::Error },
    #[error("{0}")]
    Lib2(#[from] wffa::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Params { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib { source, .. } | CliError::Lib2(source) if source.is_parse() => 2,
            CliError::Params { .. } => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "wffa", version, about = "Weighted finite finance automata toolkit")]
struct Cli {
    /// Round displayed values to this many decimal places.
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Matrix,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Sum,
    Hadamard,
    Cauchy,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Auto,
    Wffa,
    Regex,
    Scenarios,
    Params,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an automaton on every scenario of a scenario file.
    Eval {
        model: String,
        scenarios: String,
        #[arg(long, value_enum, default_value = "matrix")]
        engine: EngineArg,
    },
    /// Compile a regular expression into an automaton document.
    Compile {
        regex: String,
        #[arg(long, default_value = "arctic nonneg")]
        semiring: String,
        /// Extra alphabet symbols, comma separated.
        #[arg(long, value_delimiter = ',')]
        alphabet: Vec<String>,
    },
    /// Convert an automaton into an equivalent regular expression.
    Toregex { model: String },
    /// Combine automata with a closure operation.
    Compose {
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(required = true)]
        models: Vec<String>,
    },
    /// Rewrite all weights into monomials.
    Lower { model: String },
    /// Negate an arctic automaton into a tropical one.
    Negate { model: String },
    /// Decide support emptiness and print the support automaton.
    Support { model: String },
    /// Decide whether some scenario exceeds a threshold.
    Threshold {
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value = "0")]
        lo: String,
        #[arg(long, default_value = "inf")]
        hi: String,
    },
    /// Effective duration of a bond described by a parameter file.
    Duration {
        params: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Check a file and report diagnostics.
    Validate {
        file: String,
        #[arg(long, value_enum, default_value = "auto")]
        kind: KindArg,
    },
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
            path: "<stdin>".into(),
            message: e.to_string(),
        })?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.into(),
            message: e.to_string(),
        })
    }
}

fn at(path: &str) -> impl Fn(wffa::Error) -> CliError + '_ {
    move |source| CliError::Lib {
        path: if path == "-" { "<stdin>".into() } else { path.into() },
        source,
    }
}

fn load_model(path: &str) -> CliResult<Wffa> {
    parse_wffa(&read_input(path)?).map_err(at(path))
}

/// Regex files may contain `#` comment lines; the remaining lines are joined.
fn regex_text(text: &str) -> String {
    text.lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

fn literal(name: &str, s: &str) -> CliResult<ExtReal> {
    parse_ext_real(s).ok_or_else(|| CliError::Usage(format!("--{name}: `{s}` is not a number")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DurationParams {
    coupon: String,
    face: String,
    spots: Vec<String>,
    delta: Option<String>,
}

fn rational_field(path: &str, name: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s).ok_or_else(|| CliError::Params {
        path: path.into(),
        message: format!("`{name}` = `{s}` is not a decimal or fraction"),
    })
}

fn load_params(path: &str) -> CliResult<DurationParams> {
    toml::from_str(&read_input(path)?).map_err(|e| CliError::Params {
        path: path.into(),
        message: e.to_string().trim_end().to_string(),
    })
}

struct Printer {
    decimal: Option<usize>,
}

impl Printer {
    fn value(&self, v: &ExtReal) -> String {
        match self.decimal {
            Some(n) => v.to_decimal_string(n),
            None => v.to_string(),
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let printer = Printer { decimal: cli.decimal };
    let mut text = String::new();
    match cli.command {
        Command::Eval {
            model,
            scenarios,
            engine,
        } => {
            let a = load_model(&model)?;
            let set = parse_scenarios(&read_input(&scenarios)?, a.spec(), a.alphabet()).map_err(at(&scenarios))?;
            let engine = match engine {
                EngineArg::Matrix => Engine::Matrix,
                EngineArg::Brute => Engine::BruteForce,
            };
            let results = evaluate_batch(&a, &set.rows, engine);
            for (i, (label, r)) in set.labels.iter().zip(results).enumerate() {
                let label = label.clone().unwrap_or_else(|| format!("row{}", i + 1));
                let v = r.map_err(at(&scenarios))?;
                text.push_str(&format!("{label}\t{}\n", printer.value(&v)));
            }
        }
        Command::Compile {
            regex,
            semiring,
            alphabet,
        } => {
            let spec: SemiringSpec = semiring.parse()?;
            let r = parse_regex(&regex_text(&read_input(&regex)?)).map_err(at(&regex))?;
            let alphabet: BTreeSet<String> = alphabet.into_iter().filter(|s| !s.is_empty()).collect();
            let a = regex_to_wffa_over(&spec, &alphabet, &r).map_err(at(&regex))?;
            text = print_wffa(&a);
        }
        Command::Toregex { model } => {
            let a = load_model(&model)?;
            text = format!("{}\n", print_regex(&wffa_to_regex(&a)));
        }
        Command::Compose { op, models } => {
            let autos = models.iter().map(|m| load_model(m)).collect::<CliResult<Vec<_>>>()?;
            let result = match op {
                OpArg::Star => {
                    let [a] = &autos[..] else {
                        return Err(CliError::Usage("--op star takes exactly one model".into()));
                    };
                    op_star(a)?
                }
                OpArg::Sum | OpArg::Hadamard | OpArg::Cauchy => {
                    if autos.len() < 2 {
                        return Err(CliError::Usage("binary operations need at least two models".into()));
                    }
                    let f = match op {
                        OpArg::Sum => op_sum,
                        OpArg::Hadamard => op_hadamard,
                        _ => op_cauchy,
                    };
                    let mut acc = autos[0].clone();
                    for b in &autos[1..] {
                        acc = f(&acc, b)?;
                    }
                    acc
                }
            };
            text = print_wffa(&result);
        }
        Command::Lower { model } => text = print_wffa(&lower_to_monomials(&load_model(&model)?)?),
        Command::Negate { model } => text = print_wffa(&negate_to_tropical(&load_model(&model)?)?),
        Command::Support { model } => {
            let nfa = support_nfa(&load_model(&model)?)?;
            text = format!("support nonempty: {}\n{nfa}", if nfa.is_empty() { "no" } else { "yes" });
        }
        Command::Threshold { model, theta, lo, hi } => {
            let a = load_model(&model)?;
            let iv = Interval::new(literal("lo", &lo)?, literal("hi", &hi)?)?;
            let verdict = threshold_gt(&a, &literal("theta", &theta)?, &iv)?;
            text = format!(
                "{}, sup = {}\nreason: {}\nwitness: {}\n",
                if verdict.answer { "yes" } else { "no" },
                printer.value(&verdict.sup_value),
                verdict.reason,
                verdict.witness.map_or_else(|| "none".to_string(), |w| w.to_string())
            );
        }
        Command::Duration { params, delta } => {
            let p = load_params(&params)?;
            let coupon = rational_field(&params, "coupon", &p.coupon)?;
            let face = rational_field(&params, "face", &p.face)?;
            let spots = p
                .spots
                .iter()
                .map(|s| rational_field(&params, "spots", s))
                .collect::<CliResult<Vec<_>>>()?;
            let delta = match delta.or(p.delta) {
                Some(d) => parse_rational(&d).ok_or_else(|| CliError::Usage(format!("--delta: `{d}` is not a number")))?,
                None => return Err(CliError::Usage("no delta given (flag --delta or `delta` in the file)".into())),
            };
            let bond = build_bond(&coupon, &face, &Rational::from_integer(0.into()))?;
            let d = effective_duration(&bond, &spots, &delta)?;
            text = format!("{}\n", printer.value(&ExtReal::Finite(d)));
        }
        Command::Validate { file, kind } => text = validate(&file, kind)?,
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn detect(file: &str, content: &str) -> KindArg {
    match Path::new(file).extension().and_then(|e| e.to_str()) {
        Some("wffa") => return KindArg::Wffa,
        Some("wfre" | "re" | "regex") => return KindArg::Regex,
        Some("csv" | "scn" | "txt") => return KindArg::Scenarios,
        Some("toml") => return KindArg::Params,
        _ => {}
    }
    let first = content
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("format") {
        KindArg::Wffa
    } else if first.contains('=') && !first.contains('[') {
        KindArg::Params
    } else {
        KindArg::Regex
    }
}

fn validate(file: &str, kind: KindArg) -> CliResult<String> {
    let content = read_input(file)?;
    let kind = match kind {
        KindArg::Auto => detect(file, &content),
        k => k,
    };
    Ok(match kind {
        KindArg::Wffa => {
            let a = parse_wffa(&content).map_err(at(file))?;
            let class = a
                .transitions()
                .values()
                .map(|e| e.classify())
                .reduce(|x, y| x.join(y))
                .map_or_else(|| "none".to_string(), |c| c.to_string());
            format!(
                "ok: automaton\nsemiring: {}\nstates: {}\ntransitions: {}\nweight class: {class}\nproper: {}\npurely transition weighted: {}\n",
                a.spec(),
                a.state_count(),
                a.transition_count(),
                yes_no(a.is_proper()),
                yes_no(a.is_purely_transition_weighted())
            )
        }
        KindArg::Regex => {
            let r = parse_regex(&regex_text(&content)).map_err(at(file))?;
            let spec = SemiringSpec::arctic();
            let c = classify_regex(&spec, &r).map_err(at(file))?;
            format!(
                "ok: regular expression\nvalid: yes\neps-free: {}\nrestricted: {}\nweight class: {}\n",
                yes_no(c.flags.eps_free),
                yes_no(c.flags.restricted),
                c.weight_class
            )
        }
        KindArg::Scenarios => {
            let alphabet = scenario_symbols(&content);
            let set = parse_scenarios(&content, &SemiringSpec::arctic(), &alphabet).map_err(at(file))?;
            format!(
                "ok: scenarios\nrows: {}\nsymbols: {}\n",
                set.len(),
                alphabet.into_iter().collect::<Vec<_>>().join(" ")
            )
        }
        KindArg::Params => {
            let p = load_params(file)?;
            for s in [&p.coupon, &p.face].into_iter().chain(&p.spots).chain(&p.delta) {
                rational_field(file, "value", s)?;
            }
            format!("ok: duration parameters\nperiods: {}\n", p.spots.len())
        }
        KindArg::Auto => unreachable!("resolved above"),
    })
}

fn scenario_symbols(content: &str) -> BTreeSet<String> {
    content
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(','))
        .filter_map(|f| f.split_once(':').map(|(s, _)| s.trim().to_string()))
        .filter(|s| !s.is_empty())
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
