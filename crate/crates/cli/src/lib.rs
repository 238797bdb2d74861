//! The `pte` command line: validation, canonicalization, solving, spacetime
//! construction, DOT export and oracle cross-checks over JSON documents.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use pte_core::formats::{
    export_dot, game_to_document, game_to_json, parse_game, parse_setup, trace_to_json,
};
use pte_core::oracle::{naive_solve, random_game, search_empty_pte, GeneratorParams, Shape};
use pte_core::{solve, Game, Status, Vertex};

/// Exit status for I/O, parse and precondition failures.
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_TIES: i32 = 3;
/// Exit status of `oracle-compare` when the two solvers disagree.
pub const EXIT_DIVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pte",
    version,
    about = "Perfectly transparent equilibrium toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input document; `-` or omitted reads standard input.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a game document and print the validation report.
    Validate(Input),
    /// Prune a game to canonical form and print it.
    Canonicalize(Input),
    /// Run the elimination and print the full trace.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Print only the final status line.
        #[arg(long)]
        quiet: bool,
        /// Canonicalize the game before solving.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Build the game induced by a spacetime setup document.
    SpacetimeBuild {
        #[command(flatten)]
        input: Input,
        /// Print the game document alone, without the computed order.
        #[arg(long)]
        game_only: bool,
    },
    /// Render the game at one step of the trace as Graphviz DOT.
    ExportDot {
        #[command(flatten)]
        input: Input,
        /// Trace step to render; defaults to the last one.
        #[arg(long)]
        step: Option<usize>,
        /// Canonicalize the game before solving.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Compare the solver against the brute-force oracle.
    OracleCompare {
        /// Game documents to compare.
        files: Vec<PathBuf>,
        /// Also compare this many generated games.
        #[arg(long, default_value_t = 0)]
        random: u64,
        /// First seed for generated games.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search small tie-free normal forms for a game with no equilibrium.
    SearchCounterexample {
        #[arg(long, default_value_t = 2)]
        players: usize,
        /// Largest number of strategies per player.
        #[arg(long, default_value_t = 3)]
        max_actions: usize,
    },
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String> {
    match &input.input {
        Some(path) if path.as_os_str() != "-" => {
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
        }
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .context("cannot read standard input")?;
            Ok(text)
        }
    }
}

fn load_game(input: &Input, stdin: &mut dyn Read) -> Result<Game> {
    let text = read_input(input, stdin)?;
    parse_game(&text).map_err(|e| anyhow!(e))
}

fn prepare(game: Game, canonicalize: bool) -> Result<Game> {
    if canonicalize {
        Ok(game.canonicalize()?)
    } else {
        Ok(game)
    }
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Unique => 0,
        Status::Empty => EXIT_EMPTY,
        Status::MultipleWithTies => EXIT_TIES,
    }
}

fn status_line(status: Status, fixpoint: &[String]) -> String {
    match status {
        Status::Unique => format!("status: unique equilibrium {}", fixpoint[0]),
        Status::Empty => "status: empty".to_string(),
        Status::MultipleWithTies => format!("status: multiple_with_ties {}", fixpoint.join(" ")),
    }
}

/// Runs one invocation and returns the process exit status.
pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Validate(input) => {
            let game = load_game(&input, stdin)?;
            let report = game.validate();
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.is_valid() { 0 } else { EXIT_ERROR })
        }
        Command::Canonicalize(input) => {
            let game = load_game(&input, stdin)?.canonicalize()?;
            writeln!(out, "{}", game_to_json(&game))?;
            Ok(0)
        }
        Command::Solve {
            input,
            quiet,
            canonicalize,
        } => {
            let game = prepare(load_game(&input, stdin)?, canonicalize)?;
            let result = solve(&game)?;
            let fixpoint: Vec<String> = result
                .fixpoint
                .iter()
                .map(|&z| game.vertex_name(Vertex::Outcome(z)).to_string())
                .collect();
            if !quiet {
                writeln!(out, "{}", trace_to_json(&game, &result))?;
            }
            writeln!(out, "{}", status_line(result.status, &fixpoint))?;
            Ok(exit_code(result.status))
        }
        Command::SpacetimeBuild { input, game_only } => {
            let setup = parse_setup(&read_input(&input, stdin)?).map_err(|e| anyhow!(e))?;
            let report = setup.validate_triangle();
            if !report.is_valid() {
                let messages: Vec<String> = report
                    .errors
                    .iter()
                    .map(|e| format!("{}: {}", e.ids.join(" <- "), e.message))
                    .collect();
                return Err(anyhow!(
                    "invalid contingency triangle:\n  {}",
                    messages.join("\n  ")
                ));
            }
            let game = setup.build_game()?;
            let document = game_to_document(&game);
            let text = if game_only {
                serde_json::to_string_pretty(&document)?
            } else {
                let order: Vec<&str> = setup
                    .total_order()
                    .into_iter()
                    .map(|p| setup.point(p).id.as_str())
                    .collect();
                serde_json::to_string_pretty(
                    &serde_json::json!({ "order": order, "game": document }),
                )?
            };
            writeln!(out, "{text}")?;
            Ok(0)
        }
        Command::ExportDot {
            input,
            step,
            canonicalize,
        } => {
            let game = prepare(load_game(&input, stdin)?, canonicalize)?;
            let result = solve(&game)?;
            let step = step.unwrap_or(result.steps.len() - 1);
            write!(out, "{}", export_dot(&game, &result, step)?)?;
            Ok(0)
        }
        Command::OracleCompare {
            files,
            random,
            seed,
        } => {
            let mut diverged = 0;
            let mut compared = 0;
            for path in &files {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                let game = parse_game(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
                compared += 1;
                if !agree(&game) {
                    diverged += 1;
                    writeln!(out, "divergence: {}", path.display())?;
                }
            }
            const SHAPES: [Shape; 4] = [
                Shape::NormalForm,
                Shape::PerfectInfo,
                Shape::GeneralImperfect,
                Shape::Spacetime,
            ];
            for s in seed..seed + random {
                let params = GeneratorParams::new(s, SHAPES[(s % 4) as usize]);
                let game = random_game(&params)?;
                compared += 1;
                if !agree(&game) {
                    diverged += 1;
                    writeln!(out, "divergence: seed {s} ({:?})", params.shape)?;
                }
            }
            writeln!(out, "compared {compared} games, {diverged} divergent")?;
            Ok(if diverged == 0 { 0 } else { EXIT_DIVERGENCE })
        }
        Command::SearchCounterexample {
            players,
            max_actions,
        } => {
            let mut params = GeneratorParams::new(0, Shape::NormalForm);
            params.max_players = players;
            params.max_actions = max_actions;
            params.max_outcomes = max_actions.pow(players as u32);
            match search_empty_pte(&params)? {
                Some(game) => writeln!(out, "{}", game_to_json(&game))?,
                None => writeln!(out, "no game with an empty fixpoint in range")?,
            }
            Ok(0)
        }
    }
}

/// Whether solver and oracle return the same result, including errors.
fn agree(game: &Game) -> bool {
    solve(game) == naive_solve(game)
}
