use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use borcherds::engine::{compute_product_with, naive_product_with, weyl_data, NaiveOptions, ProductOptions};
use borcherds::hermitian::{count_coefficients, restrict_diagonal, restrict_diagonal_full};
use borcherds::par::with_threads;
use borcherds::vvmf::{convert_tuple_layout, required_precision};
use borcherds::{rat, Error, Execution, LatticeL0, ProductResult, VVForm};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "borcherds", version, about = "Fourier expansions of Borcherds products")]
struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, env = "BORCHERDS_THREADS")]
    threads: Option<usize>,
    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expansion through the logarithm.
    Compute(ProductArgs),
    /// Expansion by multiplying out every factor.
    Naive(ProductArgs),
    /// Time both algorithms over a range of B and check they agree.
    Bench(BenchArgs),
    /// Diagonal restriction of a Hermitian expansion.
    Restrict(RestrictArgs),
    /// Check an input form and report what a run at B needs.
    Validate(ValidateArgs),
    /// Convert the tuple-keyed dictionary layout into the JSON schema.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input form in the JSON schema.
    #[arg(long, short)]
    input: PathBuf,
    /// Lattice preset name or descriptor file; overrides the one in the input.
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Log,
    Naive,
}

#[derive(Args, Debug)]
struct ProductArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short = 'B', long = "precision")]
    b: i64,
    #[command(flatten)]
    output: OutputArgs,
    /// Give up after this many seconds (naive only).
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    from: i64,
    #[arg(long)]
    to: i64,
    /// Timing table destination (CSV).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RestrictArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short = 'B', long = "precision")]
    b: i64,
    #[arg(long, value_enum, default_value_t = Algo::Log)]
    algorithm: Algo,
    /// Sum over every stored index, singular ones included.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short = 'B', long = "precision")]
    b: Option<i64>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Text in the tuple-keyed layout.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value = "hermitian-d3")]
    lattice: String,
    #[arg(long)]
    weight: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::InsufficientPrecision { .. }) => 2,
            Failure::Core(Error::Integrality { .. }) => 3,
            Failure::Mismatch(_) => 4,
            Failure::Core(Error::Timeout(_)) => 5,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Core(e) => e.kind(),
            Failure::Io(_) => "io",
            Failure::Mismatch(_) => "mismatch",
        }
    }

    fn json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({"error": self.kind(), "message": self.to_string(), "exit_code": self.code()});
        if let Failure::Core(Error::InsufficientPrecision { required, .. }) = self {
            v["required_precision"] = serde_json::Value::String(rat::format(required));
        }
        v
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(s) | Failure::Mismatch(s) => f.write_str(s),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = cli.json_errors;
    let threads = cli.threads;
    match with_threads(threads, move || run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json_errors {
                eprintln!("{}", e.json());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Command) -> Outcome<()> {
    match cmd {
        Command::Compute(a) => {
            let f = load(&a.input)?;
            let r = compute_product_with(&f, a.b, &ProductOptions { exec: Execution::Parallel, cap_slack: 0 })?;
            emit(&a.output, &r)
        }
        Command::Naive(a) => {
            let deadline = a.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s));
            let f = load(&a.input)?;
            let r = naive_product_with(&f, a.b, &NaiveOptions { exec: Execution::Parallel, deadline })?;
            emit(&a.output, &r)
        }
        Command::Bench(a) => bench(&a),
        Command::Restrict(a) => {
            let f = load(&a.input)?;
            let r = product(&f, a.b, a.algorithm)?;
            let series = if a.all { restrict_diagonal_full(&r)? } else { restrict_diagonal(&r)? };
            let text = match a.output.format {
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> =
                        series.iter().map(|(n, v)| (n.to_string(), serde_json::Value::String(v.to_string()))).collect();
                    let doc = serde_json::json!({"B": a.b, "count": count_coefficients(&r)?, "restriction": map});
                    pretty(&doc)
                }
                Format::Csv => {
                    let mut s = String::from("n,coefficient\n");
                    for (n, v) in &series {
                        s.push_str(&format!("{n},{v}\n"));
                    }
                    s
                }
            };
            write_out(a.output.output.as_deref(), &text)
        }
        Command::Validate(a) => validate(&a),
        Command::Convert(a) => {
            let text = read(&a.input)?;
            let lat = lattice_arg(&a.lattice)?;
            let weight = rat::parse(&a.weight)?;
            let doc = convert_tuple_layout(&text, &lat, &weight)?;
            // round-trip through the parser so the output is known to be valid
            borcherds::parse_vvform(&doc)?;
            write_out(a.output.as_deref(), &pretty(&doc))
        }
    }
}

fn product(f: &VVForm, b: i64, algo: Algo) -> Outcome<ProductResult> {
    Ok(match algo {
        Algo::Log => compute_product_with(f, b, &ProductOptions::default())?,
        Algo::Naive => naive_product_with(f, b, &NaiveOptions::default())?,
    })
}

fn bench(a: &BenchArgs) -> Outcome<()> {
    if a.from < 1 || a.to < a.from {
        return Err(Error::Input(format!("invalid B range {}..{}", a.from, a.to)).into());
    }
    let f = load(&a.input)?;
    let mut table = String::from("B,coefficients,log_seconds,naive_seconds,equal\n");
    let mut mismatch = None;
    for b in a.from..=a.to {
        let t = Instant::now();
        let fast = compute_product_with(&f, b, &ProductOptions::default())?;
        let t_fast = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let slow = naive_product_with(&f, b, &NaiveOptions::default())?;
        let t_slow = t.elapsed().as_secs_f64();
        let equal = fast.same_coefficients(&slow);
        if !equal && mismatch.is_none() {
            let at = fast.first_difference(&slow).map(|k| format!("{:?}", k.to_json())).unwrap_or_default();
            mismatch = Some(format!("algorithms disagree at B = {b}, first at {at}"));
        }
        table.push_str(&format!("{b},{},{t_fast:.6},{t_slow:.6},{equal}\n", fast.len()));
    }
    write_out(a.output.as_deref(), &table)?;
    match mismatch {
        Some(m) => Err(Failure::Mismatch(m)),
        None => Ok(()),
    }
}

fn validate(a: &ValidateArgs) -> Outcome<()> {
    let f = load(&a.input)?;
    let residues: Vec<serde_json::Value> = f
        .residues()
        .iter()
        .map(|(k, r)| serde_json::json!({"key": k.coords.to_vec(), "residue": rat::format(r)}))
        .collect();
    let mut doc = serde_json::json!({
        "valid": true,
        "weight": rat::format(f.weight()),
        "d_min": rat::format(f.d_min()),
        "max_exponent": f.max_exponent().map(rat::format),
        "components": residues,
    });
    let w = weyl_data(&f)?;
    doc["weyl"] = w.to_json();
    if let Some(b) = a.b {
        let (a_neg, d) = required_precision(b, &w, f.d_min());
        doc["B"] = b.into();
        doc["a_neg"] = rat::format(&a_neg).into();
        doc["required_precision"] = rat::format(&d).into();
    }
    write_out(None, &pretty(&doc))
}

fn load(args: &InputArgs) -> Outcome<VVForm> {
    let text = read(&args.input)?;
    let mut doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", args.input.display())))?;
    if let Some(l) = &args.lattice {
        let lat = lattice_arg(l)?;
        if let Some(obj) = doc.as_object_mut() {
            obj.remove("D");
            obj.insert("lattice".into(), lat.to_json());
        }
    }
    Ok(borcherds::parse_vvform(&doc)?)
}

fn lattice_arg(s: &str) -> Outcome<LatticeL0> {
    if Path::new(s).is_file() {
        let text = read(Path::new(s))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{s}: {e}")))?;
        Ok(LatticeL0::from_json(&v)?)
    } else {
        Ok(LatticeL0::preset(s)?)
    }
}

fn emit(out: &OutputArgs, r: &ProductResult) -> Outcome<()> {
    let text = match out.format {
        Format::Json => pretty(&r.to_json()),
        Format::Csv => r.to_csv(),
    };
    write_out(out.output.as_deref(), &text)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read(p: &Path) -> Outcome<String> {
    fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
}

fn write_out(p: Option<&Path>, text: &str) -> Outcome<()> {
    match p {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
