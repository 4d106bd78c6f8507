use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use chainmdp::block::{self, BlockCode};
use chainmdp::conv::{self, ConvCode, PolyMatrix};
use chainmdp::{construct, format, gamma, registry, ChainRing, Error, RingMatrix, ToeplitzSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "chainmdp", version, about = "MDP convolutional codes over finite chain rings")]
struct Cli {
    /// Worker threads for enumerations
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Include wall-clock timing in the report
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a chain ring
    Ring {
        #[arg(long)]
        ring: String,
    },
    /// Build a code; the code document goes to stdout, the report to stderr
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Test a property of a code; exit 0 if it holds, 1 if not
    Check {
        property: Property,
        #[command(flatten)]
        code: CodeArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Minors)]
        method: MethodArg,
        #[arg(long, default_value_t = gamma::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Column distances against their bounds
    Distances {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long = "max-j")]
        max_j: usize,
        #[arg(long, default_value_t = gamma::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Distance bounds for bare parameters
    Bounds {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        nu: usize,
        #[arg(long = "max-j")]
        max_j: Option<usize>,
    },
    /// Block codes given by a matrix document
    Blockcode {
        op: BlockOp,
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = gamma::DEFAULT_BUDGET)]
        budget: u128,
    },
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Args)]
struct CodeArg {
    /// Code document; read from stdin when absent or "-"
    #[arg(long)]
    code: Option<String>,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    delta: usize,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Lift a residue-field code into a chain ring
    Lift {
        #[arg(long = "field-code")]
        field_code: String,
        #[arg(long)]
        ring: String,
    },
    /// Binomial encoder over F_p, optionally lifted into --ring
    Binomial {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Extract a code from a superregular Toeplitz matrix and lift it
    Superregular {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "example")]
        rows: String,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Upper-triangular Toeplitz superregular matrices with a_1 = 1
    Superregular {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = gamma::DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        reverse: bool,
        /// Include every proper minor's valuation for each hit
        #[arg(long)]
        certificate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Mdp,
    ReverseMdp,
    DelayFree,
    Reduced,
    GammaBasis,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum MethodArg {
    Minors,
    Distances,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockOp {
    Shape,
    StandardForm,
    Params,
    Mindist,
}

struct Report {
    command: Vec<String>,
    hasher: Sha256,
    results: serde_json::Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    fn new() -> Self {
        let command: Vec<String> = std::env::args().skip(1).collect();
        let mut hasher = Sha256::new();
        for a in &command {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
        }
        Report {
            command,
            hasher,
            results: serde_json::Map::new(),
            warnings: Vec::new(),
        }
    }

    fn input(&mut self, bytes: &[u8]) {
        self.hasher.update(bytes);
    }

    fn set(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    fn finish(self, timing: Option<f64>) -> Value {
        let mut doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs_digest": hex::encode(self.hasher.finalize()),
            "results": self.results,
            "warnings": self.warnings,
        });
        if let Some(ms) = timing {
            doc["timing_ms"] = json!(ms);
        }
        doc
    }
}

enum Outcome {
    Holds,
    Fails,
}

fn read_input(path: Option<&str>, report: &mut Report) -> anyhow::Result<Value> {
    let mut text = String::new();
    match path {
        None | Some("-") => {
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
        Some(p) => {
            text = std::fs::read_to_string(p).with_context(|| format!("reading {p}"))?;
        }
    }
    report.input(text.as_bytes());
    serde_json::from_str(&text).map_err(|e| anyhow!(Error::from(e)))
}

fn ring_arg(s: &str) -> anyhow::Result<ChainRing> {
    if let Ok(text) = std::fs::read_to_string(s) {
        return Ok(format::ring_from_json(&serde_json::from_str(&text)?)?);
    }
    Ok(format::parse_ring(s)?)
}

fn ring_summary(r: &ChainRing) -> Value {
    json!({
        "name": r.name(),
        "descriptor": r.spec(),
        "p": r.p(),
        "nu": r.nu(),
        "q": r.q(),
        "size": r.size().map(|s| s.to_string()),
        "residue_degree": r.residue_degree(),
        "convention": r.convention(),
    })
}

fn run(cli: &Cli, report: &mut Report) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Ring { ring } => {
            let r = ring_arg(ring)?;
            report.set("ring", ring_summary(&r));
            if r.q() <= 64 {
                let t: Vec<Value> = r.representatives().iter().map(|x| r.element_json(x)).collect();
                report.set("representatives", json!(t));
            }
            Ok(Outcome::Holds)
        }
        Command::Construct(c) => construct_cmd(c, report),
        Command::Check {
            property,
            code,
            method,
            budget,
        } => check_cmd(*property, code, *method, *budget, report),
        Command::Distances { code, max_j, budget } => {
            let v = read_input(code.code.as_deref(), report)?;
            let c = ConvCode::from_json(&v)?;
            let profile = c.column_distances(*max_j, *budget)?;
            let bounds = c.bounds(*max_j)?;
            let saturated: Vec<bool> = profile
                .values
                .iter()
                .zip(&bounds.per_j)
                .map(|(&d, &b)| d as i64 == b)
                .collect();
            report.set("params", json!({"n": c.n(), "k": c.k(), "delta": c.delta(), "nu": c.nu()}));
            report.set("column_distances", json!(profile.values));
            report.set("bounds", serde_json::to_value(&bounds)?);
            report.set("saturated", json!(saturated));
            Ok(Outcome::Holds)
        }
        Command::Bounds { params, nu, max_j } => {
            let (n, k, delta) = (params.n, params.k, params.delta);
            let l = match conv::l_index(n, k, delta, *nu) {
                Ok(l) => Some(l),
                Err(Error::NuNotDividingK { .. }) => {
                    report.warnings.push("ν does not divide k; L has no closed form here".into());
                    None
                }
                Err(e) => return Err(e.into()),
            };
            let max_j = max_j.or(l).unwrap_or(0);
            let b = conv::distance_bounds(n, k, delta, *nu, max_j)?;
            report.set("generalized_singleton", json!(b.generalized_singleton));
            report.set("L", json!(l));
            report.set("n_index", json!(b.n_index));
            report.set("column_distance_bounds", json!(b.per_j));
            if *nu > 1 && k % nu == 0 {
                let e = conv::embed_comparison(n, k, delta, *nu)?;
                report.set("field_comparison", serde_json::to_value(e)?);
            }
            Ok(Outcome::Holds)
        }
        Command::Blockcode { op, matrix, budget } => {
            let v = read_input(Some(matrix), report)?;
            let m = RingMatrix::from_json(&v, None)?;
            match op {
                BlockOp::Shape => {
                    report.set("shape", json!(gamma::shape_of(&m).mu));
                    report.set("gamma_dimension", json!(gamma::gamma_dimension(&m)));
                }
                BlockOp::StandardForm => {
                    let sf = gamma::standard_form(&m)?;
                    report.set("matrix", sf.matrix.to_json(false));
                    report.set("permutation", json!(sf.perm));
                    report.set("parameters", json!(sf.params.k_list));
                }
                BlockOp::Params => {
                    report.set("parameters", json!(gamma::parameters_of(&m).k_list));
                }
                BlockOp::Mindist => {
                    let c = BlockCode::new(m)?;
                    let d = c.min_distance(*budget)?;
                    let s = block::singleton_bound_block(c.n(), c.k(), c.ring().nu())?;
                    report.set("n", json!(c.n()));
                    report.set("k", json!(c.k()));
                    report.set("min_distance", json!(d));
                    report.set("singleton_bound", json!(s));
                    report.set("mds", json!(d == s));
                }
            }
            Ok(Outcome::Holds)
        }
        Command::Search(SearchCmd::Superregular {
            ell,
            ring,
            strategy,
            seed,
            budget,
            reverse,
            certificate,
        }) => {
            let r = ring_arg(ring)?;
            let searches = registry::superregular_searches();
            let s = searches.get(strategy)?;
            if s.randomized() && seed.is_none() {
                bail!(Error::InvalidParams("randomized search requires --seed".into()));
            }
            let hits = s.search(*ell, &r, *seed, *budget, *reverse)?;
            let docs: Vec<Value> = hits
                .iter()
                .map(|t| {
                    let mut d = t.to_json();
                    if *certificate {
                        d["minors"] = serde_json::to_value(construct::superregular_certificate(t)).expect("records serialize");
                    }
                    d
                })
                .collect();
            report.set("count", json!(hits.len()));
            report.set("hits", json!(docs));
            Ok(if hits.is_empty() { Outcome::Fails } else { Outcome::Holds })
        }
    }
}

fn emit_code(code: &ConvCode) {
    println!("{}", format::save_code(code));
}

fn construct_cmd(c: &ConstructCmd, report: &mut Report) -> anyhow::Result<Outcome> {
    let code = match c {
        ConstructCmd::Lift { field_code, ring } => {
            let r = ring_arg(ring)?;
            let v = read_input(Some(field_code), report)?;
            let gt = conv::encoder_from_json(&v)?;
            construct::lift_from_residue_field(&gt, &r)?
        }
        ConstructCmd::Binomial { params, p, ring } => {
            let gt = construct::binomial_encoder(params.n, params.k, params.delta, *p)?;
            if let Some(w) = construct::binomial_warning(params.n, params.k, params.delta, *p)? {
                report.warnings.push(w);
            }
            report.set(
                "sufficient_bound",
                json!(construct::binomial_bound(params.n, params.k, params.delta)?.to_string()),
            );
            match ring {
                Some(r) => construct::lift_from_residue_field(&gt, &ring_arg(r)?)?,
                None => construct::field_code(&gt)?,
            }
        }
        ConstructCmd::Superregular {
            matrix,
            n,
            k,
            l,
            ring,
            rows,
        } => {
            let r = ring_arg(ring)?;
            let v = read_input(Some(matrix), report)?;
            let t = ToeplitzSpec::from_json(&v)?;
            // a matrix over the ring itself is read through its projection
            let t = if t.ring == r && !r.is_field() {
                let f = r.residue_field();
                ToeplitzSpec::new(&f, RingMatrix::from_rows(&r, t.size(), &[t.first_row.clone()])?.project().row(0).to_vec())
            } else {
                t
            };
            let gt = registry::extractions().get(rows)?.extract(&t, *n, *k, *l)?;
            report.set("field_encoder", gt.to_json());
            if gt.ring() == &r {
                ConvCode::new(gt)?
            } else {
                construct::lift_from_residue_field(&gt, &r)?
            }
        }
    };
    report.set("params", json!({"n": code.n(), "k": code.k(), "delta": code.delta()}));
    emit_code(&code);
    Ok(Outcome::Holds)
}

fn check_cmd(
    property: Property,
    code: &CodeArg,
    method: MethodArg,
    budget: u128,
    report: &mut Report,
) -> anyhow::Result<Outcome> {
    let v = read_input(code.code.as_deref(), report)?;
    let verdict = match property {
        Property::DelayFree => encoder(&v)?.is_delay_free()?,
        Property::Reduced => encoder(&v)?.is_reduced()?,
        Property::GammaBasis => {
            let e = encoder(&v)?;
            e.is_gamma_generator_sequence() && e.is_gamma_independent(budget)?
        }
        Property::Mdp | Property::ReverseMdp => {
            let c = ConvCode::from_json(&v)?;
            let criteria = registry::mdp_criteria();
            let names: &[&str] = match method {
                MethodArg::Minors => &["minors"],
                MethodArg::Distances => &["distances"],
                MethodArg::Both => &["minors", "distances"],
            };
            let mut verdicts = Vec::new();
            for name in names {
                let crit = criteria.get(name)?;
                let v = match property {
                    Property::Mdp => crit.is_mdp(&c, budget)?,
                    _ => crit.is_reverse_mdp(&c, budget)?,
                };
                report.set(name, json!(v));
                verdicts.push(v);
            }
            if verdicts.windows(2).any(|w| w[0] != w[1]) {
                bail!("methods disagree: {verdicts:?}");
            }
            verdicts[0]
        }
    };
    report.set("holds", json!(verdict));
    Ok(if verdict { Outcome::Holds } else { Outcome::Fails })
}

fn encoder(v: &Value) -> anyhow::Result<PolyMatrix> {
    Ok(conv::encoder_from_json(v)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let mut report = Report::new();
    let result = run(&cli, &mut report);
    let timing = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let to_stderr = matches!(cli.command, Command::Construct(_));
    match result {
        Ok(outcome) => {
            let doc = serde_json::to_string_pretty(&report.finish(timing)).expect("report serializes");
            if to_stderr {
                eprintln!("{doc}");
            } else {
                println!("{doc}");
            }
            match outcome {
                Outcome::Holds => ExitCode::SUCCESS,
                Outcome::Fails => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
