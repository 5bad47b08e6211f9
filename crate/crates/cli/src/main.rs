use clap::{Args, Parser, Subcommand};
use dynce_cli::commands::{
    cmd_distance, cmd_generate, cmd_kernelize, cmd_solve, cmd_verify, Algo, CmdOutput, Family,
};
use std::path::PathBuf;

/// Exact solvers and instance tooling for dynamic cluster editing: turn a
/// graph into a cluster graph with a bounded number of edge modifications
/// while staying close to a given target clustering.
#[derive(Parser)]
#[command(name = "dynce", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file (exit code 0 = yes, 1 = no, 2 = error).
    Solve {
        /// Instance JSON file.
        path: PathBuf,
        /// Algorithm: auto picks the FPT solver matching the instance's
        /// variant and measure, falling back to kernelize-plus-search.
        #[arg(long, default_value = "auto", value_parser = parse_algo)]
        algo: Algo,
        /// Vertex cap for brute-force search (default 11; env DYNCE_ORACLE_CAP).
        #[arg(long)]
        cap: Option<usize>,
        /// Include the witness clustering and edit list in the result.
        #[arg(long)]
        emit_witness: bool,
        /// Emit the result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively apply the data reduction rules to an instance file.
    Kernelize {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Distance between two cluster-graph files under a measure.
    Distance {
        path_a: PathBuf,
        path_b: PathBuf,
        /// matching | edge
        #[arg(long)]
        measure: String,
    },
    /// Check a proposed solution against an instance (exit 0 valid, 1 not).
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Generate an instance file from one of the structured families.
    Generate {
        #[command(subcommand)]
        family: FamilyCmd,
    },
}

fn parse_algo(s: &str) -> Result<Algo, String> {
    Algo::parse(s).ok_or_else(|| format!("expected auto|oracle|combined|fpt-k|fpt-d, got {s:?}"))
}

#[derive(Args)]
struct OutArg {
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Number-partitioning family (completion, edge distance): 3m numbers
    /// summing to m*b, each strictly between b/4 and b/2.
    #[command(name = "3partition")]
    ThreePartition {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: u64,
        /// Comma-separated numbers, e.g. 2,2,2.
        #[arg(long)]
        a: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact-cover family (deletion, matching distance) over 3q elements.
    X3c {
        #[arg(long)]
        q: usize,
        /// Semicolon-separated 3-sets of 0-based elements, e.g. "0,1,2;0,1,2".
        #[arg(long)]
        sets: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Clique-embedding family (editing, edge distance); ell >= 3.
    Clique {
        #[arg(long)]
        ell: u64,
        /// Vertices of the source graph.
        #[arg(long)]
        n0: usize,
        /// Comma-separated edges, e.g. "0-1,1-2".
        #[arg(long, default_value = "")]
        edges: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Multicolored-clique family (deletion, edge distance); colors 1..=ell,
    /// no monochromatic edges.
    Mcclique {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n0: usize,
        #[arg(long, default_value = "")]
        edges: String,
        /// Comma-separated vertex colors, e.g. "1,2,1".
        #[arg(long)]
        colors: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Seeded random instance: Erdős–Rényi graph plus a random target
    /// partition.
    Random {
        #[arg(long)]
        n: usize,
        /// Edge probability in [0, 1].
        #[arg(long)]
        p: f64,
        #[arg(long)]
        variant: String,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| format!("invalid {what} entry {x:?}"))
        })
        .collect()
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|e| {
            let (u, v) = e
                .trim()
                .split_once('-')
                .ok_or_else(|| format!("invalid edge {e:?}, expected u-v"))?;
            Ok((
                u.parse().map_err(|_| format!("invalid edge {e:?}"))?,
                v.parse().map_err(|_| format!("invalid edge {e:?}"))?,
            ))
        })
        .collect()
}

fn parse_sets(s: &str) -> Result<Vec<[usize; 3]>, String> {
    s.split(';')
        .map(|set| {
            let items: Vec<usize> = parse_list(set, "set")?;
            match <[usize; 3]>::try_from(items) {
                Ok(arr) => Ok(arr),
                Err(_) => Err(format!("set {set:?} must have exactly 3 elements")),
            }
        })
        .collect()
}

fn family_from_cmd(cmd: &FamilyCmd) -> Result<(Family, Option<PathBuf>), String> {
    Ok(match cmd {
        FamilyCmd::ThreePartition { m, b, a, out } => (
            Family::ThreePartition {
                m: *m,
                b: *b,
                a: parse_list(a, "number")?,
            },
            out.out.clone(),
        ),
        FamilyCmd::X3c { q, sets, out } => (
            Family::X3c {
                q: *q,
                sets: parse_sets(sets)?,
            },
            out.out.clone(),
        ),
        FamilyCmd::Clique {
            ell,
            n0,
            edges,
            out,
        } => (
            Family::Clique {
                ell: *ell,
                n0: *n0,
                edges: parse_edges(edges)?,
            },
            out.out.clone(),
        ),
        FamilyCmd::Mcclique {
            ell,
            n0,
            edges,
            colors,
            out,
        } => (
            Family::McClique {
                ell: *ell,
                n0: *n0,
                edges: parse_edges(edges)?,
                colors: parse_list(colors, "color")?,
            },
            out.out.clone(),
        ),
        FamilyCmd::Random {
            n,
            p,
            variant,
            measure,
            k,
            d,
            seed,
            out,
        } => (
            Family::Random {
                n: *n,
                p: *p,
                variant: variant.clone(),
                measure: measure.clone(),
                k: *k,
                d: *d,
                seed: *seed,
            },
            out.out.clone(),
        ),
    })
}

fn main() {
    let cli = Cli::parse();
    let output: CmdOutput = match &cli.command {
        Command::Solve {
            path,
            algo,
            cap,
            emit_witness,
            json,
        } => cmd_solve(path, *algo, *cap, *emit_witness, *json),
        Command::Kernelize { path, json } => cmd_kernelize(path, *json),
        Command::Distance {
            path_a,
            path_b,
            measure,
        } => cmd_distance(path_a, path_b, measure),
        Command::Verify { instance, solution } => cmd_verify(instance, solution),
        Command::Generate { family } => match family_from_cmd(family) {
            Ok((family, out)) => cmd_generate(&family, out.as_deref()),
            Err(e) => CmdOutput {
                exit: 2,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
    };
    print!("{}", output.stdout);
    eprint!("{}", output.stderr);
    std::process::exit(output.exit);
}
