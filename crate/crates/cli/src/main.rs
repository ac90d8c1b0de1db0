use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use corridor_reduction::game::{self, validate_instance, GameInstance, Player, Position, State};
use corridor_reduction::geometry::{self, Mode};
use corridor_reduction::harness::{self, Family, SweepSummary};
use corridor_reduction::logic::{formula_size, parse_formula, print_formula, Evaluator, KripkeModel};
use corridor_reduction::model::CanonicalModel;
use corridor_reduction::reduction::{CompileOptions, Compiler};

/// Exit status when a verification finds a disagreement, as opposed to a
/// crash or bad input (2).
const DISAGREEMENT: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "corridor", about = "Corridor tiling games, their tense-logic encoding, and the plane embedding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CompileFlags {
    /// Also require every Abelard move in the last column.
    #[arg(long)]
    strict_abelard: bool,
    /// Compile the all-Abelard-moves condition without its column guard.
    #[arg(long)]
    unguarded_abelard: bool,
}

impl CompileFlags {
    fn options(self) -> CompileOptions {
        CompileOptions { strict_abelard: self.strict_abelard, abelard_column_guard: !self.unguarded_abelard }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance: winner, initial rank and the rank of every position.
    Solve { instance: PathBuf },
    /// Print the compiled formula with a statistics footer.
    Compile {
        instance: PathBuf,
        #[command(flatten)]
        flags: CompileFlags,
        /// Write the formula here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dump the canonical model of an instance.
    Model {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Model-check a formula file against a model file.
    Check {
        formula: PathBuf,
        model: PathBuf,
        /// Points to report; all points when omitted.
        #[arg(short, long, value_delimiter = ',')]
        points: Vec<String>,
    },
    /// Sweep an instance family and compare solver and model checker.
    E2e {
        /// Clauses such as `n<=2,s=0`.
        #[arg(long, default_value = "n<=2,s<=1")]
        family: String,
        #[command(flatten)]
        flags: CompileFlags,
        /// Print only the summary.
        #[arg(short, long)]
        quiet: bool,
    },
    /// Plane-geometry verification.
    Geometry {
        #[command(subcommand)]
        command: GeometryCommand,
    },
    /// Play Eloise against the optimal Abelard.
    Play { instance: PathBuf },
}

#[derive(Subcommand)]
enum GeometryCommand {
    /// Compare the disc relation with tree adjacency and print the certificates.
    Verify {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Disc mode; both when omitted.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Randomised check of the four-points-on-a-circle lemma.
    Lemma {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_instance(path: &Path) -> Result<GameInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = GameInstance::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    for d in validate_instance(&inst) {
        eprintln!("{d}");
    }
    Ok(inst)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn show_position(inst: &GameInstance, pos: &Position) -> String {
    let row: Vec<&str> = pos.last_row.iter().map(|&t| inst.tile(t).name.as_str()).collect();
    format!("{} to move, column {}, row [{}]", pos.player, pos.next_column, row.join(" "))
}

fn solve_cmd(path: &Path) -> Result<u8> {
    let inst = load_instance(path)?;
    let solved = game::solve(&inst);
    println!("winner: {}, rank: {}", solved.winner, solved.initial_rank());
    println!("bound N: {}", inst.play_bound());
    println!("positions: {}", solved.graph.positions.len());
    for (pos, rank) in solved.graph.positions.iter().zip(&solved.ranks) {
        println!("  {:>4}  {}", rank.to_string(), show_position(&inst, pos));
    }
    Ok(0)
}

fn compile_cmd(path: &Path, flags: CompileFlags, output: &Option<PathBuf>) -> Result<u8> {
    let inst = load_instance(path)?;
    let compiler = Compiler::with_options(&inst, flags.options());
    let phi = compiler.compile();
    let p = compiler.params;
    let text = format!(
        "{}\n# size={}\n# props={}\n# b={} N={} L={}\n",
        print_formula(&phi),
        formula_size(&phi),
        compiler.space.all().len(),
        p.b,
        p.play_bound,
        p.counter_bits
    );
    emit(output, &text)?;
    Ok(0)
}

fn model_cmd(path: &Path, output: &Option<PathBuf>) -> Result<u8> {
    let inst = load_instance(path)?;
    let solved = game::solve(&inst);
    let cm = CanonicalModel::build(&inst, &solved);
    let text = format!("# root {}\n{}", cm.model.frame.name(cm.root()), cm.model.to_text());
    emit(output, &text)?;
    Ok(0)
}

fn check_cmd(formula: &Path, model: &Path, points: &[String]) -> Result<u8> {
    let ftext = fs::read_to_string(formula).with_context(|| format!("reading {}", formula.display()))?;
    let mtext = fs::read_to_string(model).with_context(|| format!("reading {}", model.display()))?;
    let phi = parse_formula(&ftext).with_context(|| format!("parsing {}", formula.display()))?;
    let m = KripkeModel::parse(&mtext).with_context(|| format!("parsing {}", model.display()))?;
    let truth = Evaluator::new(&m).eval(&phi).clone();
    let ids: Vec<usize> = if points.is_empty() {
        (0..m.frame.len()).collect()
    } else {
        points.iter().map(|p| m.frame.point(p)).collect::<Result<_, _>>()?
    };
    for id in ids {
        println!("{}: {}", m.frame.name(id), truth.contains(id));
    }
    Ok(0)
}

fn e2e_cmd(family: &str, flags: CompileFlags, quiet: bool) -> Result<u8> {
    let fam: Family = family.parse()?;
    let instances = harness::family_instances(&fam);
    println!("family: {fam} ({} instances)", instances.len());
    if !quiet {
        println!("{:>5} {:>2} {:>2} {:>8} {:>5} {:>4} {:>8} {:>6}", "#", "n", "s", "winner", "rank", "N", "verdict", "agrees");
    }
    let mut rows = Vec::with_capacity(instances.len());
    for (k, inst) in instances.iter().enumerate() {
        let row = harness::run_instance(inst, flags.options());
        if !quiet || !row.agrees() {
            println!(
                "{:>5} {:>2} {:>2} {:>8} {:>5} {:>4} {:>8} {:>6}",
                k,
                row.n,
                row.s,
                row.winner.to_string(),
                row.rank.to_string(),
                row.play_bound,
                row.verdict,
                if row.agrees() { "yes" } else { "NO" }
            );
        }
        rows.push(row);
    }
    let s = SweepSummary::from_rows(&rows);
    println!("eloise wins: {}/{}", s.eloise_wins, s.instances);
    println!("frame failures: {}", s.frame_failures);
    println!("strategy failures: {}", s.strategy_failures);
    println!("rank bound violations: {}", s.rank_violations);
    println!("size bound violations: {} (C = {}, max ratio {}/{})", s.size_violations, harness::SIZE_CONSTANT, s.max_size_ratio.0, s.max_size_ratio.1);
    if s.all_agree() {
        println!("agreements: 100%");
    } else {
        println!("agreements: {:.2}% ({} of {})", s.agreement_percent(), s.agreements, s.instances);
    }
    Ok(if s.all_agree() { 0 } else { DISAGREEMENT })
}

fn verify_cmd(depth: usize, mode: Option<Mode>) -> Result<u8> {
    let modes = mode.map_or(vec![Mode::Closed, Mode::Open], |m| vec![m]);
    let mut bad = false;
    for m in modes {
        let r = geometry::verify_tilde(depth, m)?;
        println!(
            "mode {m}: nodes {}, obstacles {}, tree edges {}, related {}",
            r.nodes,
            r.obstacles,
            r.tree_edges,
            r.related.len()
        );
        println!("mode {m}: pairs checked: {}, mismatches: {}", r.pairs_checked, r.mismatches.len());
        for (a, b, rel) in &r.mismatches {
            println!("  mismatch {a} ~ {b}: disc relation {rel}");
        }
        bad |= !r.mismatches.is_empty();
    }
    println!("certificates:");
    for c in geometry::certificates() {
        println!("  {c}");
        bad |= !c.holds();
    }
    Ok(if bad { DISAGREEMENT } else { 0 })
}

fn lemma_cmd(trials: usize, seed: u64) -> Result<u8> {
    let r = geometry::lemma_harness(trials, seed);
    println!("seed: {seed}");
    println!("trials: {}, violations: {}", r.trials, r.violations);
    println!("tight discs: {}, closed discs: {}", r.tight, r.closed);
    Ok(if r.violations == 0 { 0 } else { DISAGREEMENT })
}

fn play_cmd(path: &Path) -> Result<u8> {
    let inst = load_instance(path)?;
    let solved = game::solve(&inst);
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut pos = inst.initial_position();
    println!("target {} in column 1; enter a tile name or number, `quit` to stop", inst.tile(inst.target()).name);
    for turn in 1.. {
        let rank = solved.rank(&pos).map_or("?".to_string(), |r| r.to_string());
        println!("[{turn}] {} (rank {rank})", show_position(&inst, &pos));
        let moves = inst.legal_moves(&pos);
        if moves.is_empty() {
            println!("{} is stuck: Abelard wins", pos.player);
            return Ok(0);
        }
        let tile = match pos.player {
            Player::Abelard => {
                let t = solved.abelard_reply(&pos).context("Abelard has no reply")?;
                println!("Abelard plays {}", inst.tile(t).name);
                t
            }
            Player::Eloise => loop {
                let names: Vec<String> =
                    moves.iter().enumerate().map(|(k, &t)| format!("{k}:{}", inst.tile(t).name)).collect();
                print!("legal moves {}> ", names.join(" "));
                io::stdout().flush()?;
                let Some(line) = lines.next() else {
                    println!();
                    return Ok(0);
                };
                let answer = line?.trim().to_string();
                if answer == "quit" {
                    return Ok(0);
                }
                let pick = answer
                    .parse::<usize>()
                    .ok()
                    .and_then(|k| moves.get(k).copied())
                    .or_else(|| inst.tile_id(&answer).filter(|t| moves.contains(t)));
                match pick {
                    Some(t) => break t,
                    None => println!("`{answer}` is not a legal move"),
                }
            },
        };
        match inst.apply(&pos, tile)? {
            State::Won(_) => {
                println!("{} placed in column 1: Eloise wins", inst.tile(inst.target()).name);
                return Ok(0);
            }
            State::Playing(next) => pos = next,
        }
    }
    unreachable!()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { instance } => solve_cmd(&instance),
        Command::Compile { instance, flags, output } => compile_cmd(&instance, flags, &output),
        Command::Model { instance, output } => model_cmd(&instance, &output),
        Command::Check { formula, model, points } => check_cmd(&formula, &model, &points),
        Command::E2e { family, flags, quiet } => e2e_cmd(&family, flags, quiet),
        Command::Geometry { command } => match command {
            GeometryCommand::Verify { depth, mode } => verify_cmd(depth, mode),
            GeometryCommand::Lemma { trials, seed } => lemma_cmd(trials, seed),
        },
        Command::Play { instance } => play_cmd(&instance),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}
