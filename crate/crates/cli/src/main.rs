use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use noeth::carrier::{Capability, Carrier};
use noeth::convert::expose_to_acc_with_fuel;
use noeth::decider::extract_decider;
use noeth::games::{explore, play, Arena, GameNode, Opponent, Verdict};
use noeth::lattice::{check_matrix, check_one, implemented, separation_label, Encoding};
use noeth::witnesses::{bounded_to_noeth_acc, build_named, Builtin, NoethAcc};
use noeth::{Value, DEFAULT_FUEL};

/// Explore finiteness witnesses: build, play, convert, decide, check.
#[derive(Parser, Debug)]
#[command(name = "noeth", version)]
struct Cli {
    /// Node-visit budget for every evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Seed for the `random` opponent.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Compact single-line JSON instead of pretty output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named witness and describe it.
    Build {
        #[arg(long)]
        carrier: String,
        #[arg(long = "as")]
        name: String,
    },
    /// Play a named witness against an opponent and print the transcript.
    Play {
        #[arg(long)]
        carrier: String,
        #[arg(long)]
        witness: String,
        /// exhaustive | adversarial | random[:seed] | script:<v1,v2,...>
        #[arg(long, default_value = "exhaustive")]
        opponent: String,
    },
    /// Verify one conversion arrow on a carrier.
    Convert {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value = "bool")]
        carrier: String,
    },
    /// Print the equality table decided by a witness.
    Decide {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        carrier: String,
    },
    /// Check the implication matrix on a carrier.
    Check {
        carrier: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ILLEGAL: u8 = 3;
const EXIT_INCOMPLETE: u8 = 4;

struct Failure {
    code: u8,
    doc: Json,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        doc: json!({ "error": message.to_string() }),
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::ProverWins(_) => EXIT_OK,
        Verdict::WitnessDishonest | Verdict::FuelExhausted => EXIT_FAILED,
        Verdict::IllegalOpponentMove => EXIT_ILLEGAL,
        Verdict::IncompletePlay => EXIT_INCOMPLETE,
    }
}

fn encoding(w: &Builtin) -> Encoding {
    match w {
        Builtin::Acc(_) => Encoding::NoethAcc,
        Builtin::Strict(_) => Encoding::NoethAccS,
        Builtin::Expose(_) => Encoding::NoethExpose,
        Builtin::Bounded(_) => Encoding::Bounded,
    }
}

/// The witness as a `NoethAcc`, when a constructive route exists.
fn into_acc(w: Builtin, fuel: u64) -> Result<NoethAcc, Failure> {
    match w {
        Builtin::Acc(w) => Ok(w),
        Builtin::Expose(w) => Ok(expose_to_acc_with_fuel(&w, fuel)),
        Builtin::Bounded(b) => bounded_to_noeth_acc(&b).map_err(usage),
        Builtin::Strict(_) => Err(usage(format!(
            "NoethAccS does not yield a NoethAcc witness (separated:{})",
            separation_label(Encoding::NoethAccS, Encoding::NoethAcc).unwrap_or("?")
        ))),
    }
}

fn parse_carrier(spec: &str) -> Result<Carrier, Failure> {
    Carrier::parse(spec).map_err(usage)
}

fn build_witness(name: &str, c: &Carrier) -> Result<Builtin, Failure> {
    build_named(name, c).map_err(usage)
}

fn parse_opponent(desc: &str, seed: u64) -> Result<Opponent, Failure> {
    match desc {
        "exhaustive" => Ok(Opponent::Exhaustive),
        "adversarial" => Ok(Opponent::Adversarial),
        "random" => Ok(Opponent::Random(seed)),
        _ => {
            if let Some(s) = desc.strip_prefix("random:") {
                return s
                    .parse()
                    .map(Opponent::Random)
                    .map_err(|_| usage(format!("bad seed in `{desc}`")));
            }
            if let Some(moves) = desc.strip_prefix("script:") {
                return Value::parse_list(moves).map(Opponent::Scripted).map_err(usage);
            }
            Err(usage(format!("unknown opponent `{desc}`")))
        }
    }
}

/// Longest play over every opponent, if the carrier can be enumerated.
fn depth<N: GameNode>(w: &N, c: &Carrier, fuel: u64) -> Option<usize> {
    c.require(Capability::Enumeration).ok()?;
    let plays = explore(w, Arena::new(c), fuel);
    if plays.iter().all(|t| t.verdict.prover_wins()) {
        plays.iter().map(|t| t.asks()).max()
    } else {
        None
    }
}

fn cmd_build(c: &Carrier, name: &str, fuel: u64) -> Result<Json, Failure> {
    let built = build_witness(name, c)?;
    let mut doc = json!({
        "witness": name,
        "encoding": encoding(&built),
        "carrier": c.to_string(),
    });
    let d = match &built {
        Builtin::Acc(w) => depth(w, c, fuel),
        Builtin::Strict(w) => depth(w, c, fuel),
        Builtin::Expose(w) => depth(w, c, fuel),
        Builtin::Bounded(b) => {
            doc["bound"] = json!(b.bound);
            None
        }
    };
    if let Some(d) = d {
        doc["depth"] = json!(d);
    }
    Ok(doc)
}

fn cmd_play(c: &Carrier, name: &str, opponent: &Opponent, fuel: u64) -> Result<(Json, u8), Failure> {
    let arena = Arena::new(c);
    let t = match build_witness(name, c)? {
        Builtin::Acc(w) => play(&w, arena, opponent, fuel),
        Builtin::Strict(w) => play(&w, arena, opponent, fuel),
        Builtin::Expose(w) => play(&w, arena, opponent, fuel),
        Builtin::Bounded(b) => play(&bounded_to_noeth_acc(&b).map_err(usage)?, arena, opponent, fuel),
    };
    let doc = serde_json::to_value(&t).expect("transcripts serialize");
    Ok((doc, verdict_exit(t.verdict)))
}

fn cmd_convert(from: &str, to: &str, c: &Carrier, fuel: u64) -> Result<(Json, u8), Failure> {
    let from: Encoding = from.parse().map_err(usage)?;
    let to: Encoding = to.parse().map_err(usage)?;
    if let Some(arrow) = implemented(from, to) {
        let entry = check_one(arrow, c, fuel);
        let code = if entry.failed() {
            EXIT_FAILED
        } else if entry.status.starts_with("skipped") {
            EXIT_USAGE
        } else {
            EXIT_OK
        };
        let mut doc = serde_json::to_value(&entry).expect("entries serialize");
        doc["carrier"] = json!(c.to_string());
        return Ok((doc, code));
    }
    let status = match separation_label(from, to) {
        Some(label) => format!("separated:{label}"),
        None => "unsupported".to_string(),
    };
    Ok((json!({ "from": from, "to": to, "status": status }), EXIT_USAGE))
}

fn cmd_decide(c: &Carrier, name: &str, fuel: u64) -> Result<(Json, u8), Failure> {
    let elems = c.enumerate().map_err(usage)?;
    let w = into_acc(build_witness(name, c)?, fuel)?;
    let decider = extract_decider(&w, fuel);
    let before = c.eq_calls();
    let mut table = Vec::with_capacity(elems.len());
    for x in &elems {
        let mut row = Vec::with_capacity(elems.len());
        for y in &elems {
            match decider.decide(x, y) {
                Ok(eq) => row.push(eq.is_equal()),
                Err(e) => return Ok((json!({ "error": e.to_string() }), EXIT_FAILED)),
            }
        }
        table.push(row);
    }
    let extraction_eq_calls = c.eq_calls() - before;
    let agrees = if c.caps().has_eq {
        let mut all = true;
        for (x, row) in elems.iter().zip(&table) {
            for (y, decided) in elems.iter().zip(row) {
                all &= c.value_eq(x, y).map_err(usage)?.is_equal() == *decided;
            }
        }
        Some(all)
    } else {
        None
    };
    let doc = json!({
        "witness": name,
        "carrier": c.to_string(),
        "elements": elems,
        "table": table,
        "extraction_eq_calls": extraction_eq_calls,
        "agrees_with_value_eq": agrees,
    });
    let code = if agrees == Some(false) { EXIT_FAILED } else { EXIT_OK };
    Ok((doc, code))
}

fn cmd_check(c: &Carrier, max_size: usize, fuel: u64) -> Result<(Json, u8), Failure> {
    match c.caps().size_bound {
        Some(n) if n <= max_size => {}
        Some(n) => return Err(usage(format!("{c} has {n} elements, above the limit of {max_size}"))),
        None => return Err(usage(format!("{c} has no size bound"))),
    }
    let m = check_matrix(c, fuel);
    let code = if m.failures().next().is_some() {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok((serde_json::to_value(&m).expect("matrices serialize"), code))
}

fn run(cli: &Cli) -> Result<(Json, u8), Failure> {
    let fuel = cli.fuel;
    match &cli.command {
        Command::Build { carrier, name } => Ok((cmd_build(&parse_carrier(carrier)?, name, fuel)?, EXIT_OK)),
        Command::Play {
            carrier,
            witness,
            opponent,
        } => {
            let c = parse_carrier(carrier)?;
            let o = parse_opponent(opponent, cli.seed)?;
            cmd_play(&c, witness, &o, fuel)
        }
        Command::Convert { from, to, carrier } => cmd_convert(from, to, &parse_carrier(carrier)?, fuel),
        Command::Decide { witness, carrier } => cmd_decide(&parse_carrier(carrier)?, witness, fuel),
        Command::Check { carrier, max_size } => cmd_check(&parse_carrier(carrier)?, *max_size, fuel),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match run(&cli) {
        Ok(out) => out,
        Err(f) => (f.doc, f.code),
    };
    let text = if cli.json {
        serde_json::to_string(&doc)
    } else {
        serde_json::to_string_pretty(&doc)
    };
    println!("{}", text.expect("JSON values serialize"));
    ExitCode::from(code)
}
