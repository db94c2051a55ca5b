//! `clfi`: batch analysis of coalition models with the full-inability
//! modality.
//!
//! Exit codes: 0 when the command succeeds and any checked property
//! holds, 1 when a checked property fails, 2 on input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use clfi_core::duality::{klein_table_check, DualityError, Transform};
use clfi_core::explore::{
    bounded_sat, fixture, random_alpha_dual, random_induced_model, FixtureKind, SatOutcome,
    SatParams,
};
use clfi_core::gameform::induce_model;
use clfi_core::mcheck::{classify, truth_set, PowerCategory};
use clfi_core::model::{check_alpha_duality, check_coalition_monotonicity, check_playability, check_regularity};
use clfi_core::regions::{power_regions, RegionReport};
use clfi_core::robustness::{dummy_fi_check, inability_threshold, is_k_robust, strategic_profile, DummyFiVerdict};
use clfi_core::{AgentSet, CoalitionModel, Formula, GameForm, StateSet};

#[derive(Parser)]
#[command(name = "clfi", version, about = "Coalition-logic analysis with the full-inability modality")]
struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Admit models beyond the default sweep caps (16 states / 8 agents),
    /// up to the per-operation hard limits
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Playability, regularity, coalition-monotonicity, and alpha-duality report
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Induce a coalition model from a game form
    Induce {
        #[arg(long)]
        game: PathBuf,
        /// Output path; stdout when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a formula at every state
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Classify a coalition's power over a formula per state
    Classify {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated agent indices, e.g. `0,2` (empty for the empty coalition)
        #[arg(long, default_value = "")]
        coalition: String,
        #[arg(long)]
        formula: String,
    },
    /// Power-region report for one state and coalition
    Regions {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: usize,
        #[arg(long, default_value = "")]
        coalition: String,
    },
    /// Klein transformation table (requires an alpha-dual state)
    Klein {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: usize,
        #[arg(long, default_value = "")]
        coalition: String,
        #[arg(long)]
        formula: String,
    },
    /// Inability threshold, robustness degree, optional k-robustness test
    Robustness {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: usize,
        #[arg(long)]
        formula: String,
        /// Exit 0 iff no coalition of size <= k escapes full inability
        #[arg(long)]
        k: Option<usize>,
    },
    /// Dummy-player analysis for one agent
    Dummy {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: usize,
        #[arg(long)]
        agent: usize,
        #[arg(long)]
        formula: String,
    },
    /// Eliminate full-inability operators from a formula
    Translate {
        #[arg(long)]
        formula: String,
    },
    /// Per-state power-category counts for one agent
    Profile {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        agent: usize,
        #[arg(long)]
        formula: String,
    },
    /// Generate fixtures or seeded random artifacts
    Gen {
        /// matching-pennies | dictator | veto | shutdown | random | alpha-dual
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long, default_value_t = 2)]
        max_actions: usize,
        /// Emit the induced model or the raw game form
        #[arg(long, value_enum, default_value_t = Emit::Model)]
        emit: Emit,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounded satisfiability search over game-form-induced models
    Sat {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_actions: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Agent universe; defaults to exactly the agents in the formula
        #[arg(long)]
        agents: Option<usize>,
        /// Write the witness model here when one is found
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Model,
    GameForm,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

const DEFAULT_STATE_CAP: usize = 16;
const DEFAULT_AGENT_CAP: usize = 8;

fn load_model(path: &Path, allow_large: bool) -> Result<CoalitionModel> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    let model = CoalitionModel::from_json(&text)
        .with_context(|| format!("cannot parse model file {}", path.display()))?;
    if !allow_large
        && (model.num_states() > DEFAULT_STATE_CAP || model.num_agents() > DEFAULT_AGENT_CAP)
    {
        bail!(
            "model has {} states and {} agents, beyond the default caps ({} states, {} agents); pass --allow-large to proceed",
            model.num_states(),
            model.num_agents(),
            DEFAULT_STATE_CAP,
            DEFAULT_AGENT_CAP
        );
    }
    Ok(model)
}

fn parse_formula(text: &str) -> Result<Formula> {
    text.parse::<Formula>()
        .map_err(|e| anyhow!("in formula {:?}: {}", text, e))
}

fn parse_coalition(text: &str, num_agents: usize) -> Result<AgentSet> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut coalition = AgentSet::EMPTY;
    for part in trimmed.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let index: usize = part
            .parse()
            .map_err(|_| anyhow!("invalid agent index {:?} in coalition", part))?;
        if index >= num_agents {
            bail!("agent index {} out of range for {} agents", index, num_agents);
        }
        if coalition.contains(index) {
            bail!("duplicate agent index {} in coalition", index);
        }
        coalition = coalition.insert(index);
    }
    Ok(coalition)
}

fn write_or_print(output: Option<&Path>, contents: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{}", contents),
    }
    Ok(())
}

fn set_json(s: StateSet) -> serde_json::Value {
    json!(s.to_indices())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Validate { model } => {
            let m = load_model(&model, cli.allow_large)?;
            cmd_validate(&m, format)
        }
        Command::Induce { game, output } => {
            let text = fs::read_to_string(&game)
                .with_context(|| format!("cannot read game form {}", game.display()))?;
            let g = GameForm::from_json(&text)?;
            let model = induce_model(&g, Default::default())?;
            write_or_print(output.as_deref(), &model.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { model, formula } => {
            let m = load_model(&model, cli.allow_large)?;
            let f = parse_formula(&formula)?;
            let ts = truth_set(&m, &f)?;
            match format {
                Format::Text => {
                    let line = (0..m.num_states())
                        .map(|w| format!("state {}: {}", w, ts.contains(w)))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!("{}", line);
                }
                Format::Json => {
                    let per_state: Vec<bool> = (0..m.num_states()).map(|w| ts.contains(w)).collect();
                    println!(
                        "{}",
                        json!({"formula": f.to_string(), "per_state": per_state, "truth_set": ts.to_indices()})
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { model, coalition, formula } => {
            let m = load_model(&model, cli.allow_large)?;
            let c = parse_coalition(&coalition, m.num_agents())?;
            let f = parse_formula(&formula)?;
            let categories: Vec<PowerCategory> = (0..m.num_states())
                .map(|w| classify(&m, w, c, &f))
                .collect::<Result<_, _>>()?;
            match format {
                Format::Text => {
                    let line = categories
                        .iter()
                        .enumerate()
                        .map(|(w, cat)| format!("state {}: {}", w, cat))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!("{}", line);
                }
                Format::Json => {
                    let labels: Vec<&str> = categories.iter().map(|c| c.label()).collect();
                    println!(
                        "{}",
                        json!({"coalition": c.to_indices(), "formula": f.to_string(), "per_state": labels})
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Regions { model, state, coalition } => {
            let m = load_model(&model, cli.allow_large)?;
            check_state(&m, state)?;
            let c = parse_coalition(&coalition, m.num_agents())?;
            let report = power_regions(&m, state, c)?;
            print_regions(&report, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Klein { model, state, coalition, formula } => {
            let m = load_model(&model, cli.allow_large)?;
            check_state(&m, state)?;
            let c = parse_coalition(&coalition, m.num_agents())?;
            let f = parse_formula(&formula)?;
            match klein_table_check(&m, state, c, &f) {
                Ok(table) => {
                    match format {
                        Format::Text => {
                            println!("state {} coalition {} formula {}", state, c, f);
                            for t in Transform::ALL {
                                println!("{}: {}", t, table.category(t));
                            }
                            println!("pattern: {}", if table.pass { "OK" } else { "MISMATCH" });
                            // the full action table, transforms by categories
                            println!("action table (rows: transform, columns: FC PD AD FI)");
                            for t in Transform::ALL {
                                let row = PowerCategory::ALL
                                    .iter()
                                    .map(|&cat| t.category_action(cat).label())
                                    .collect::<Vec<_>>()
                                    .join(" ");
                                println!("{:>4}: {}", t.label(), row);
                            }
                        }
                        Format::Json => {
                            let rows: serde_json::Map<String, serde_json::Value> = Transform::ALL
                                .iter()
                                .map(|t| (t.label().to_string(), json!(table.category(*t).label())))
                                .collect();
                            println!(
                                "{}",
                                json!({"state": state, "coalition": c.to_indices(), "formula": f.to_string(), "categories": rows, "pass": table.pass})
                            );
                        }
                    }
                    Ok(if table.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                Err(DualityError::NotAlphaDual { state, coalition, set }) => {
                    eprintln!(
                        "precondition failed: model is not alpha-dual at state {} (witness coalition {}, set {})",
                        state, coalition, set
                    );
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Robustness { model, state, formula, k } => {
            let m = load_model(&model, cli.allow_large)?;
            check_state(&m, state)?;
            let f = parse_formula(&formula)?;
            let report = inability_threshold(&m, state, &f)?;
            let robust = match k {
                Some(k) => Some(is_k_robust(&m, state, &f, k)?),
                None => None,
            };
            match format {
                Format::Text => {
                    println!("state {} formula {}", state, f);
                    let antichain = report
                        .minimal_escaping
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!("minimal escaping: {}", antichain);
                    println!("degree: {}", report.degree);
                    if let (Some(k), Some(r)) = (k, robust) {
                        println!("k={} robust: {}", k, if r { "yes" } else { "no" });
                    }
                }
                Format::Json => {
                    let antichain: Vec<Vec<usize>> =
                        report.minimal_escaping.iter().map(|c| c.to_indices()).collect();
                    let mut value = json!({
                        "state": state,
                        "formula": f.to_string(),
                        "minimal_escaping": antichain,
                        "degree": report.degree,
                    });
                    if let (Some(k), Some(r)) = (k, robust) {
                        value["k"] = json!(k);
                        value["k_robust"] = json!(r);
                    }
                    println!("{}", value);
                }
            }
            Ok(match robust {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Dummy { model, state, agent, formula } => {
            let m = load_model(&model, cli.allow_large)?;
            check_state(&m, state)?;
            if agent >= m.num_agents() {
                bail!("agent index {} out of range for {} agents", agent, m.num_agents());
            }
            let f = parse_formula(&formula)?;
            let report = dummy_fi_check(&m, state, agent, &f)?;
            let verdict = match report.verdict {
                DummyFiVerdict::Confirmed => "confirmed",
                DummyFiVerdict::Vacuous => "vacuous",
            };
            match format {
                Format::Text => {
                    println!("agent {} at state {} on {}", agent, state, f);
                    println!("dummy for formula: {}", yesno(report.dummy_for_formula));
                    println!("dummy for negation: {}", yesno(report.dummy_for_negation));
                    println!(
                        "empty coalition enforces neither side: {}",
                        yesno(report.empty_cannot_enforce && report.empty_cannot_refute)
                    );
                    println!("full inability holds: {}", yesno(report.fi_holds));
                    println!("verdict: {}", verdict);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "agent": agent,
                            "state": state,
                            "formula": f.to_string(),
                            "dummy_for_formula": report.dummy_for_formula,
                            "dummy_for_negation": report.dummy_for_negation,
                            "empty_cannot_enforce": report.empty_cannot_enforce,
                            "empty_cannot_refute": report.empty_cannot_refute,
                            "fi_holds": report.fi_holds,
                            "verdict": verdict,
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { formula } => {
            let f = parse_formula(&formula)?;
            let translated = f.translate();
            match format {
                Format::Text => println!("{}", translated),
                Format::Json => println!(
                    "{}",
                    json!({"input": f.to_string(), "translated": translated.to_string()})
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { model, agent, formula } => {
            let m = load_model(&model, cli.allow_large)?;
            if agent >= m.num_agents() {
                bail!("agent index {} out of range for {} agents", agent, m.num_agents());
            }
            let f = parse_formula(&formula)?;
            let profile = strategic_profile(&m, agent, &f)?;
            match format {
                Format::Text => println!("agent {} on {}: {}", agent, f, profile),
                Format::Json => println!(
                    "{}",
                    json!({
                        "agent": agent,
                        "formula": f.to_string(),
                        "fc": profile.fc, "pd": profile.pd, "ad": profile.ad, "fi": profile.fi,
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { kind, seed, states, agents, max_actions, emit, output } => {
            cmd_gen(&kind, seed, states, agents, max_actions, emit, output.as_deref())
        }
        Command::Sat { formula, max_states, max_actions, samples, seed, agents, output } => {
            let f = parse_formula(&formula)?;
            let mut params = SatParams::new(max_states, max_actions, samples, seed);
            if let Some(n) = agents {
                params = params.with_agents(n);
            }
            match bounded_sat(&f, &params)? {
                SatOutcome::Witness(witness) => {
                    if let Some(path) = &output {
                        fs::write(path, witness.model.to_json())
                            .with_context(|| format!("cannot write {}", path.display()))?;
                    }
                    match format {
                        Format::Text => println!(
                            "sat: witness at state {} ({} states, {} agents)",
                            witness.state,
                            witness.model.num_states(),
                            witness.model.num_agents()
                        ),
                        Format::Json => println!(
                            "{}",
                            json!({
                                "result": "witness",
                                "state": witness.state,
                                "states": witness.model.num_states(),
                                "agents": witness.model.num_agents(),
                            })
                        ),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SatOutcome::Unknown => {
                    match format {
                        Format::Text => println!("sat: unknown"),
                        Format::Json => println!("{}", json!({"result": "unknown"})),
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn check_state(m: &CoalitionModel, state: usize) -> Result<()> {
    if state >= m.num_states() {
        bail!("state index {} out of range for {} states", state, m.num_states());
    }
    Ok(())
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_validate(m: &CoalitionModel, format: Format) -> Result<ExitCode> {
    let playability = check_playability(m)?;
    let regularity = check_regularity(m);
    let monotonicity = check_coalition_monotonicity(m);
    let mut alpha_per_state = Vec::with_capacity(m.num_states());
    for w in 0..m.num_states() {
        alpha_per_state.push(check_alpha_duality(m, w)?);
    }
    let clean =
        playability.is_playable() && regularity.is_empty() && monotonicity.is_empty();

    match format {
        Format::Text => {
            println!("model: {} states, {} agents", m.num_states(), m.num_agents());
            if playability.is_playable() {
                println!("playability: OK");
            } else {
                println!("playability: {} violations", playability.total_violations());
                for (w, v) in playability.iter() {
                    println!("  state {}: {}", w, v);
                }
            }
            if regularity.is_empty() {
                println!("regularity: OK");
            } else {
                println!("regularity: {} violations", regularity.len());
                for v in &regularity {
                    println!("  {}", v);
                }
            }
            if monotonicity.is_empty() {
                println!("coalition monotonicity: OK");
            } else {
                println!("coalition monotonicity: {} violations", monotonicity.len());
                for v in &monotonicity {
                    println!("  {}", v);
                }
            }
            let alpha = alpha_per_state
                .iter()
                .enumerate()
                .map(|(w, a)| {
                    if a.holds {
                        format!("state {}: yes", w)
                    } else {
                        let (c, x) = a.witness.unwrap();
                        format!("state {}: no (witness coalition {}, set {})", w, c, x)
                    }
                })
                .collect::<Vec<_>>()
                .join("; ");
            println!("alpha-duality: {}", alpha);
        }
        Format::Json => {
            let playability_violations: Vec<String> =
                playability.iter().map(|(w, v)| format!("state {}: {}", w, v)).collect();
            println!(
                "{}",
                json!({
                    "states": m.num_states(),
                    "agents": m.num_agents(),
                    "playable": playability.is_playable(),
                    "playability_violations": playability_violations,
                    "regularity_violations": regularity.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "coalition_monotonicity_violations": monotonicity.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "alpha_dual_per_state": alpha_per_state.iter().map(|a| a.holds).collect::<Vec<_>>(),
                })
            );
        }
    }
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_regions(report: &RegionReport, format: Format) {
    let fmt_sets = |sets: &[StateSet]| {
        sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    };
    match format {
        Format::Text => {
            println!("{}", report);
            for cat in PowerCategory::ALL {
                println!(
                    "{}: count={} min=[{}] max=[{}]",
                    cat,
                    report.members(cat).len(),
                    fmt_sets(&report.minimal_members(cat)),
                    fmt_sets(&report.maximal_members(cat)),
                );
            }
            let closure = report.closure();
            println!(
                "closure: enforceable upward={} co-enforceable downward={}",
                yesno(closure.enforce_upward),
                yesno(closure.refute_downward)
            );
            let convexity = report.convexity();
            println!(
                "convexity: FC={} PD={} AD={} FI={}",
                yesno(convexity.region(PowerCategory::Fc)),
                yesno(convexity.region(PowerCategory::Pd)),
                yesno(convexity.region(PowerCategory::Ad)),
                yesno(convexity.region(PowerCategory::Fi)),
            );
        }
        Format::Json => {
            let per_region: serde_json::Map<String, serde_json::Value> = PowerCategory::ALL
                .iter()
                .map(|&cat| {
                    (
                        cat.label().to_string(),
                        json!({
                            "count": report.members(cat).len(),
                            "minimal": report.minimal_members(cat).iter().map(|s| set_json(*s)).collect::<Vec<_>>(),
                            "maximal": report.maximal_members(cat).iter().map(|s| set_json(*s)).collect::<Vec<_>>(),
                            "convex": report.convexity().region(cat),
                        }),
                    )
                })
                .collect();
            println!(
                "{}",
                json!({
                    "state": report.state(),
                    "coalition": report.coalition().to_indices(),
                    "regions": per_region,
                    "closure": {
                        "enforceable_upward": report.closure().enforce_upward,
                        "co_enforceable_downward": report.closure().refute_downward,
                    },
                })
            );
        }
    }
}

fn cmd_gen(
    kind: &str,
    seed: u64,
    states: usize,
    agents: usize,
    max_actions: usize,
    emit: Emit,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let contents = match kind {
        "matching-pennies" | "dictator" | "veto" | "shutdown" => {
            let fx = fixture(kind.parse::<FixtureKind>()?);
            match emit {
                Emit::Model => fx.model.to_json(),
                Emit::GameForm => fx.game_form.to_json(),
            }
        }
        "random" => {
            let (game, model) = random_induced_model(seed, states, agents, max_actions, &["p", "q"])?;
            match emit {
                Emit::Model => model.to_json(),
                Emit::GameForm => game.to_json(),
            }
        }
        "alpha-dual" => {
            if emit == Emit::GameForm {
                bail!("alpha-dual generation produces a model, not a game form");
            }
            let sample = random_alpha_dual(seed, states, agents)?;
            if sample.fell_back {
                eprintln!(
                    "note: rejection sampling exhausted its budget; emitting the dictatorship fallback"
                );
            }
            sample.model.to_json()
        }
        other => bail!(
            "unknown kind {:?} (expected matching-pennies, dictator, veto, shutdown, random, or alpha-dual)",
            other
        ),
    };
    write_or_print(output, &contents)?;
    Ok(ExitCode::SUCCESS)
}
