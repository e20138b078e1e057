//! `mkgc`: key generation, encryption, operator evaluation, training and
//! gate-count benchmarks.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mkgc::circuits::{
    add_w, decode_int, div_w, encode_int, mul_w, sub_w, BitDecryptor, BitEncryptor, IntCiphertext,
    JointDecryptor, PartyEncryptor, PlainBits,
};
use mkgc::gates::{ClearBackend, GateBackend, GateCounts, LweBackend};
use mkgc::linreg::{self, read_samples, EncryptedDataset, GdConfig, Model, ModelCiphertext};
use mkgc::lwe::{key_from_bytes, key_to_bytes, Keyring, LweParams, PartyId, RefreshOracle, Roster};
use mkgc::metrics::{self, measure, naive_gate_comparison, Operator};
use mkgc::protocol::{derive_seed, run_protocol, split_by_party, ParticipantState, ProtocolConfig, TrainMethod};

#[derive(Parser, Debug)]
#[command(name = "mkgc", version, about = "Multi-key LWE gate circuits and encrypted linear regression")]
struct Cli {
    /// Worker threads for circuit evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "MKGC_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = BackendKind::Lwe)]
    backend: BackendKind,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    /// Multi-key LWE ciphertexts with oracle refresh.
    Lwe,
    /// Plain booleans through the same circuits.
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Gd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate one secret key file per party.
    Keygen {
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        parties: u16,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt one party's rows of a dataset into an upload bundle.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 8)]
        w: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one integer operator on encrypted operands.
    Eval {
        #[arg(long, value_parser = parse_op)]
        op: Operator,
        #[arg(long)]
        w: usize,
        /// First operand; the dividend for div, at twice the width.
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u16).range(1..))]
        parties: u16,
    },
    /// Train a linear model on an `x,y,party` CSV.
    Train {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        data: PathBuf,
        /// Reassign row i to party i mod p instead of the party column.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        parties: Option<u16>,
        /// Operand width (default 8 for formula, 16 for gd).
        #[arg(long)]
        w: Option<usize>,
        /// Accumulator width of the formula method (default 2w).
        #[arg(long)]
        acc_width: Option<usize>,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        #[arg(long, default_value_t = 10_000)]
        zoom: i64,
        /// Learning rate as a fraction.
        #[arg(long, default_value = "1/1000", value_parser = parse_rate)]
        lr: (i64, i64),
        /// Also compute the encrypted training loss.
        #[arg(long)]
        evaluate: bool,
        /// Write the phase log as CSV.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Write the model JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate counts and depth of the integer operators.
    Bench {
        #[arg(long, value_delimiter = ',', value_parser = parse_op, default_value = "add,sub,mul,div")]
        ops: Vec<Operator>,
        /// Inclusive width range, `lo..hi` or a single width.
        #[arg(long, default_value = "1..8", value_parser = parse_range)]
        w_range: (usize, usize),
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Append the direct versus NAND-only gate table.
        #[arg(long)]
        gates: bool,
    },
}

fn parse_op(s: &str) -> Result<Operator, String> {
    s.parse().map_err(|e: mkgc::Error| e.to_string())
}

fn parse_rate(s: &str) -> Result<(i64, i64), String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if n <= 0 || d <= 0 {
        return Err("learning rate must be positive".into());
    }
    Ok((n, d))
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once("..").or_else(|| s.split_once('-')).unwrap_or((s, s));
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("empty or zero-based range {s:?}"));
    }
    Ok((lo, hi))
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<mkgc::Error> for Failure {
    fn from(e: mkgc::Error) -> Self {
        match &e {
            mkgc::Error::Io(_) => Failure::Io(e.to_string()),
            mkgc::Error::Csv(c) if c.is_io_error() => Failure::Io(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Keygen { parties, out } => keygen(*parties, out, cli.seed),
        Command::Encrypt { key, data, w, out } => encrypt(key, data, *w, out, cli.seed),
        Command::Eval { op, w, a, b, parties } => eval(cli, *op, *w, *a, *b, *parties),
        Command::Train {
            method,
            data,
            parties,
            w,
            acc_width,
            iterations,
            zoom,
            lr,
            evaluate,
            log,
            out,
        } => {
            let w = w.unwrap_or(match method {
                Method::Formula => 8,
                Method::Gd => 16,
            });
            let method = match method {
                Method::Formula => TrainMethod::ClosedForm {
                    acc_width: acc_width.unwrap_or(2 * w),
                },
                Method::Gd => TrainMethod::Gd(GdConfig {
                    lr_num: lr.0,
                    lr_den: lr.1,
                    zoom: *zoom,
                    iterations: *iterations,
                    width: w,
                }),
            };
            train(cli, data, *parties, w, method, *evaluate, log.as_deref(), out.as_deref())
        }
        Command::Bench {
            ops,
            w_range,
            format,
            gates,
        } => bench(ops, *w_range, *format, *gates),
    }
}

/// Key of party `i`, derived the same way the protocol derives it.
fn participant(i: u16, params: &LweParams, seed: u64) -> CliResult<ParticipantState> {
    Ok(ParticipantState::new(PartyId(i), params.clone(), derive_seed(seed, i as u64 + 1))?)
}

fn keygen(parties: u16, out: &Path, seed: u64) -> CliResult {
    let params = LweParams::standard();
    fs::create_dir_all(out).map_err(io_err(out))?;
    for i in 0..parties {
        let key = participant(i, &params, seed)?.release_key();
        let path = out.join(format!("party_{i:03}.key"));
        fs::write(&path, key_to_bytes(&key)).map_err(io_err(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn encrypt(key_path: &Path, data: &Path, w: usize, out: &Path, seed: u64) -> CliResult {
    let key = key_from_bytes(&fs::read(key_path).map_err(io_err(key_path))?)?;
    let party = key.party();
    let samples = read_samples(fs::File::open(data).map_err(io_err(data))?)?;
    let rows: Vec<(i64, i64)> = samples.iter().filter(|s| s.party == party).map(|s| (s.x, s.y)).collect();
    if rows.is_empty() {
        return Err(Failure::Domain(format!("no rows for party {party} in {}", data.display())));
    }
    let state = ParticipantState::from_key(key, LweParams::standard(), derive_seed(seed, party.0 as u64 + 1))?;
    let bundle = state.prepare(&rows, w)?;
    bundle.write_dir(out)?;
    println!(
        "party {party}: {} rows, {} ciphertext bytes -> {}",
        rows.len(),
        bundle.payload_len(),
        out.display()
    );
    Ok(())
}

struct LweSetup {
    params: LweParams,
    keys: Keyring,
    roster: Roster,
    backend: LweBackend<u32>,
}

fn lwe_setup(parties: u16, seed: u64) -> CliResult<LweSetup> {
    let params = LweParams::standard();
    let keys: Keyring = (0..parties)
        .map(|i| participant(i, &params, seed).map(|p| p.release_key()))
        .collect::<CliResult<_>>()?;
    let roster = Roster::range(parties);
    let oracle = Arc::new(RefreshOracle::new(keys.clone(), params.clone(), derive_seed(seed, 0))?);
    let backend = LweBackend::new(oracle, roster.clone());
    Ok(LweSetup {
        params,
        keys,
        roster,
        backend,
    })
}

/// Result of one operator run: outputs and the gate tally.
struct EvalRun {
    values: Vec<i64>,
    counts: GateCounts,
}

#[allow(clippy::too_many_arguments)]
fn apply<B, E, D>(be: &B, op: Operator, w: usize, a: i64, b: i64, enc_a: &mut E, enc_b: &mut E, dec: &D) -> CliResult<EvalRun>
where
    B: GateBackend,
    E: BitEncryptor<Bit = B::Bit>,
    D: BitDecryptor<Bit = B::Bit>,
{
    let a_width = if op == Operator::Div { 2 * w } else { w };
    let x = encode_int(a, a_width, enc_a)?;
    let y = encode_int(b, w, enc_b)?;
    let outs: Vec<IntCiphertext<B::Bit>> = match op {
        Operator::Add => vec![add_w(be, &x, &y)?],
        Operator::Sub => vec![sub_w(be, &x, &y)?],
        Operator::Mul => vec![mul_w(be, &x, &y)?],
        Operator::Div => {
            let (q, r) = div_w(be, &x, &y)?;
            vec![q, r]
        }
    };
    let values = outs.iter().map(|c| decode_int(c, dec)).collect::<mkgc::Result<_>>()?;
    Ok(EvalRun {
        values,
        counts: be.counter().snapshot(),
    })
}

fn eval(cli: &Cli, op: Operator, w: usize, a: i64, b: i64, parties: u16) -> CliResult {
    if w < op.min_width() || w > op.max_width() {
        return Err(Failure::Domain(format!(
            "{op} supports widths {}..={}, got {w}",
            op.min_width(),
            op.max_width()
        )));
    }
    let run = match cli.backend {
        BackendKind::Clear => {
            let be = ClearBackend::new();
            apply(&be, op, w, a, b, &mut PlainBits, &mut PlainBits, &PlainBits)?
        }
        BackendKind::Lwe => {
            let s = lwe_setup(parties, cli.seed)?;
            let owner_b = PartyId(1 % parties);
            let mut enc_a = PartyEncryptor::new(s.keys.get(PartyId(0))?, &s.params, s.roster.clone(), derive_seed(cli.seed, 1 << 32))?;
            let mut enc_b = PartyEncryptor::new(s.keys.get(owner_b)?, &s.params, s.roster.clone(), derive_seed(cli.seed, (1 << 32) + 1))?;
            let dec = JointDecryptor::new(&s.keys, &s.roster)?;
            apply(&s.backend, op, w, a, b, &mut enc_a, &mut enc_b, &dec)?
        }
    };

    let mut out = io::stdout().lock();
    let undefined = if op == Operator::Div {
        let (lo, hi) = (-(1i64 << (w - 1)), (1i64 << (w - 1)) - 1);
        if b == 0 {
            Some("divisor zero: undefined output")
        } else if !(lo..=hi).contains(&(a / b)) {
            Some("quotient does not fit in w bits: undefined output")
        } else {
            None
        }
    } else {
        None
    };
    if let Some(msg) = undefined {
        eprintln!("warning: {msg}");
    }
    let flag = if undefined.is_some() { " (undefined)" } else { "" };
    match run.values.as_slice() {
        [q, r] => writeln!(out, "{q} remainder {r}{flag}"),
        [v] => writeln!(out, "{v}{flag}"),
        _ => unreachable!("one or two outputs"),
    }
    .map_err(|e| Failure::Io(e.to_string()))?;
    let report = measure(op, w)?;
    writeln!(
        out,
        "op={op} w={w} gates={} nots={} refreshes={} depth={} published={} match={}",
        run.counts.total_gates(),
        run.counts.nots,
        run.counts.refreshes,
        report.depth,
        report.published,
        if run.counts.total_gates() == report.published { "yes" } else { "no" }
    )
    .map_err(|e| Failure::Io(e.to_string()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn train(
    cli: &Cli,
    data: &Path,
    parties: Option<u16>,
    w: usize,
    method: TrainMethod,
    evaluate: bool,
    log_path: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let mut samples = read_samples(fs::File::open(data).map_err(io_err(data))?)?;
    if let Some(p) = parties {
        for (i, s) in samples.iter_mut().enumerate() {
            s.party = PartyId((i % p as usize) as u16);
        }
    }
    let (model, loss) = match cli.backend {
        BackendKind::Clear => train_clear(&samples, w, method, evaluate)?,
        BackendKind::Lwe => {
            let cfg = ProtocolConfig {
                params: LweParams::standard(),
                width: w,
                method,
                seed: cli.seed,
                evaluate,
            };
            let outcome = run_protocol(&split_by_party(&samples), &cfg)?;
            eprint!("{}", outcome.log.render());
            if let Some(path) = log_path {
                let f = fs::File::create(path).map_err(io_err(path))?;
                outcome.log.write_csv(f)?;
            }
            (outcome.model, outcome.loss)
        }
    };
    if cli.backend == BackendKind::Clear && log_path.is_some() {
        eprintln!("note: the clear backend runs no protocol; no phase log written");
    }
    let mut json = serde_json::json!({
        "slope": model.slope,
        "intercept": model.intercept,
        "zoom": model.zoom,
        "slope_real": model.slope_f64(),
        "intercept_real": model.intercept_f64(),
    });
    if let Some(l) = loss {
        json["loss"] = l.into();
    }
    let text = serde_json::to_string_pretty(&json).expect("json value serializes");
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(io_err(path))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn train_clear(
    samples: &[linreg::Sample],
    w: usize,
    method: TrainMethod,
    evaluate: bool,
) -> CliResult<(Model, Option<i64>)> {
    let be = ClearBackend::new();
    let enc = |v| encode_int(v, w, &mut PlainBits);
    let ds = EncryptedDataset::new(
        samples.iter().map(|s| enc(s.x)).collect::<mkgc::Result<_>>()?,
        samples.iter().map(|s| enc(s.y)).collect::<mkgc::Result<_>>()?,
        samples.iter().map(|s| s.party).collect(),
    )?;
    let model: ModelCiphertext<bool> = match method {
        TrainMethod::ClosedForm { acc_width } => linreg::train_closed_form(&be, &ds, acc_width)?,
        TrainMethod::Gd(cfg) => linreg::train_gd(&be, &ds, &cfg, |_, _| Ok(()))?,
    };
    let loss = if evaluate {
        Some(decode_int(&linreg::loss(&be, &ds, &model)?, &PlainBits)?)
    } else {
        None
    };
    let plain = Model {
        slope: decode_int(&model.slope, &PlainBits)?,
        intercept: decode_int(&model.intercept, &PlainBits)?,
        zoom: model.zoom,
    };
    Ok((plain, loss))
}

fn bench(ops: &[Operator], (lo, hi): (usize, usize), format: Format, gates: bool) -> CliResult {
    let mut reports = Vec::new();
    for &op in ops {
        for w in lo.max(op.min_width())..=hi.min(op.max_width()) {
            reports.push(measure(op, w)?);
        }
    }
    if reports.is_empty() {
        return Err(Failure::Usage("no supported widths in the requested range".into()));
    }
    let stdout = io::stdout();
    match format {
        Format::Csv => metrics::write_csv(&reports, stdout.lock())?,
        Format::Text => print!("{}", metrics::render_table(&reports)),
    }
    if gates {
        let rows = naive_gate_comparison()?;
        println!();
        print!("{}", metrics::render_comparison(&rows));
    }
    Ok(())
}
