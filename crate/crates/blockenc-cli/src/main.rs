//! Batch command-line front end for dictionary-based block-encoding synthesis.
//!
//! Subcommands: `encode` builds a circuit and writes its artifacts
//! (dictionary JSON, OpenQASM, layout metadata, resource report); `verify`
//! re-simulates previously written artifacts and measures the block error;
//! `compare` tabulates protocol cost models on a matrix; `generate` emits
//! application instances; `export` extracts the tensor-of-X
//! linear-combination form of a dictionary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input/parse error,
//! 3 capacity refusal (simulation cap or ancilla pool).  Failures also print
//! a machine-readable JSON object on stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use blockenc::circuit::{export_qasm, import_qasm_with_layout, CircuitError, RegisterLayout};
use blockenc::dictionary::{
    build_dictionary, hermitianize, Dictionary, DictionaryError, HermitianDictionary,
};
use blockenc::resources::{compare, dictionary_cost, ResourcesError};
use blockenc::sparse::{load_matrix_market, write_matrix_market, SparseError, SparseMatrix};
use blockenc::synthesis::{
    assemble, assemble_hermitian, export_lcu, verify_block_encoding,
    verify_block_encoding_sampled, BlockEncoding, EncodingSource, SynthesisError,
    VERIFY_SAMPLE_COLUMNS,
};
use blockenc::applications::{
    gen_cyclic_laplacian, gen_gep_matrices, gen_laplacian2d, ApplicationsError, GepParameters,
};

/// Environment variable consulted for the default output directory.
const OUTPUT_DIR_ENV: &str = "BLOCKENC_OUTPUT_DIR";
/// Format tag written into (and required from) layout metadata files.
const ARTIFACT_FORMAT: &str = "blockenc-artifacts/1";

#[derive(Parser)]
#[command(
    name = "blockenc",
    version,
    about = "Compile sparse structured matrices into verified block-encoding circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a block-encoding circuit and write its artifacts.
    Encode(EncodeArgs),
    /// Re-simulate previously written artifacts and measure the block error.
    Verify(VerifyArgs),
    /// Evaluate protocol cost models side by side on a matrix.
    Compare(CompareArgs),
    /// Generate application instances (matrix plus dictionary files).
    Generate(GenerateArgs),
    /// Extract the tensor-of-X linear-combination form of a dictionary.
    Export(ExportArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory (default: $BLOCKENC_OUTPUT_DIR, then the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Error tolerance for verification checks.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Qubit cap for full simulation and circuit expansion.
    #[arg(long, default_value_t = 14)]
    cap: u32,
}

#[derive(Args)]
struct EncodeArgs {
    /// Input file: MatrixMarket matrix (.mtx) or dictionary JSON (.json).
    input: PathBuf,
    /// Treat the input as a symmetric instance with strictly positive values
    /// and build the palindromic encoding.
    #[arg(long)]
    hermitian: bool,
    /// Also write the tensor-of-X linear-combination form (plain dictionaries only).
    #[arg(long)]
    lcu: bool,
    /// When building a dictionary from a matrix, group values that differ by
    /// at most this much into one item.
    #[arg(long, default_value_t = 0.0)]
    value_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory containing the artifacts written by `encode`.
    artifacts: PathBuf,
    /// Check a fixed-seed random subset of columns instead of refusing
    /// circuits beyond the simulation cap.
    #[arg(long)]
    sampled: bool,
    /// Number of columns to check in sampled mode.
    #[arg(long, default_value_t = VERIFY_SAMPLE_COLUMNS)]
    columns: usize,
    /// Seed for the sampled-column draw.
    #[arg(long, default_value_t = 0xB10C_5EED)]
    seed: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Input file: MatrixMarket matrix (.mtx) or dictionary JSON (.json).
    input: PathBuf,
    /// When building a dictionary from a matrix, group values that differ by
    /// at most this much into one item.
    #[arg(long, default_value_t = 0.0)]
    value_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    family: GenerateFamily,
}

#[derive(Subcommand)]
enum GenerateFamily {
    /// Ring operator: alpha1 on the diagonal, alpha2 one step below
    /// (wrapping), alpha3 one step above.
    Cyclic {
        /// System qubits (matrix dimension 2^n).
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 3.0)]
        alpha1: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha2: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha3: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Five-point grid operator with Dirichlet boundaries.
    Laplacian2d {
        #[arg(long, default_value_t = 4)]
        nx: usize,
        #[arg(long, default_value_t = 4)]
        ny: usize,
        #[arg(long, default_value_t = 1.0)]
        dx: f64,
        #[arg(long, default_value_t = 1.0)]
        dy: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Plate-vibration generalized eigenvalue pair A, B with random nonzero
    /// coefficients drawn from the seed.
    Gep {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct ExportArgs {
    /// Input file: dictionary JSON (.json) or MatrixMarket matrix (.mtx).
    input: PathBuf,
    /// When building a dictionary from a matrix, group values that differ by
    /// at most this much into one item.
    #[arg(long, default_value_t = 0.0)]
    value_tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("verification failed: measured epsilon {epsilon:.6e} exceeds tolerance {tolerance:.6e}")]
    VerificationFailed { epsilon: f64, tolerance: f64 },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Capacity(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::VerificationFailed { .. } => "verification",
            CliError::Parse(_) => "parse",
            CliError::Io(_) => "io",
            CliError::Capacity(_) => "capacity",
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn circuit_error(e: CircuitError) -> CliError {
    match e {
        CircuitError::SimulationCapExceeded { .. } | CircuitError::PoolExhausted { .. } => {
            CliError::Capacity(e.to_string())
        }
        other => CliError::Parse(other.to_string()),
    }
}

fn synthesis_error(e: SynthesisError) -> CliError {
    match e {
        SynthesisError::Circuit(inner) => circuit_error(inner),
        other => CliError::Parse(other.to_string()),
    }
}

fn dictionary_error(e: DictionaryError) -> CliError {
    CliError::Parse(e.to_string())
}

fn sparse_error(e: SparseError) -> CliError {
    match e {
        SparseError::DenseCapExceeded { .. } => CliError::Capacity(e.to_string()),
        other => CliError::Parse(other.to_string()),
    }
}

fn resources_error(e: ResourcesError) -> CliError {
    match e {
        ResourcesError::Synthesis(inner) => synthesis_error(inner),
        other => CliError::Parse(other.to_string()),
    }
}

fn applications_error(e: ApplicationsError) -> CliError {
    CliError::Parse(e.to_string())
}

/// Shared, validated run settings.
struct RunConfig {
    out_dir: PathBuf,
    tolerance: f64,
    cap: u32,
}

impl RunConfig {
    fn resolve(common: &CommonArgs) -> CliResult<Self> {
        if !(common.tolerance > 0.0) {
            return Err(CliError::Parse(format!(
                "tolerance must be positive, got {}",
                common.tolerance
            )));
        }
        if common.cap < 1 {
            return Err(CliError::Parse("cap must be at least 1".to_string()));
        }
        let out_dir = match &common.out {
            Some(dir) => dir.clone(),
            None => match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) => PathBuf::from(dir),
                None => PathBuf::from("."),
            },
        };
        Ok(RunConfig { out_dir, tolerance: common.tolerance, cap: common.cap })
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn to_pretty_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Loaded encoding input: either kind of dictionary.
enum SourceDictionary {
    Plain(Dictionary),
    Hermitian(HermitianDictionary),
}

impl SourceDictionary {
    fn kind(&self) -> &'static str {
        match self {
            SourceDictionary::Plain(_) => "dictionary",
            SourceDictionary::Hermitian(_) => "hermitian",
        }
    }

    fn to_json(&self) -> String {
        match self {
            SourceDictionary::Plain(d) => d.to_json(),
            SourceDictionary::Hermitian(hd) => hd.to_json(),
        }
    }

    fn n(&self) -> u32 {
        match self {
            SourceDictionary::Plain(d) => d.n(),
            SourceDictionary::Hermitian(hd) => hd.n(),
        }
    }

    fn item_count(&self) -> usize {
        match self {
            SourceDictionary::Plain(d) => d.item_count(),
            SourceDictionary::Hermitian(hd) => hd.item_count(),
        }
    }

    fn coordinate_count(&self) -> usize {
        match self {
            SourceDictionary::Plain(d) => d.coordinate_count(),
            SourceDictionary::Hermitian(hd) => hd.coordinate_count(),
        }
    }
}

/// Reads an encode input, accepting a dictionary JSON file or a MatrixMarket
/// matrix (decided by extension; anything but `.json` is parsed as a matrix).
fn load_source(path: &Path, hermitian: bool, value_tol: f64) -> CliResult<SourceDictionary> {
    let text = read_text(path)?;
    let is_json = path.extension().map(|e| e == "json").unwrap_or(false);
    if is_json {
        if hermitian {
            Ok(SourceDictionary::Hermitian(
                HermitianDictionary::from_json(&text).map_err(dictionary_error)?,
            ))
        } else {
            Ok(SourceDictionary::Plain(
                Dictionary::from_json(&text).map_err(dictionary_error)?,
            ))
        }
    } else {
        let a = load_matrix_market(&text).map_err(sparse_error)?;
        if hermitian {
            Ok(SourceDictionary::Hermitian(hermitianize(&a).map_err(dictionary_error)?))
        } else {
            Ok(SourceDictionary::Plain(
                build_dictionary(&a, value_tol).map_err(dictionary_error)?,
            ))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RegisterMeta {
    name: String,
    size: usize,
}

/// Machine-readable layout/provenance metadata tying the artifact set together.
#[derive(Serialize, Deserialize)]
struct LayoutMeta {
    format: String,
    source_kind: String,
    alpha: f64,
    ancilla_count: usize,
    system_qubits: usize,
    /// Total qubits of the elementary circuit, including the decomposition pool.
    total_qubits: usize,
    /// Registers of the elementary circuit in significance order (first is
    /// most significant); zero-sized registers are kept.
    registers: Vec<RegisterMeta>,
}

fn run_encode(args: &EncodeArgs) -> CliResult<()> {
    let config = RunConfig::resolve(&args.common)?;
    let source = load_source(&args.input, args.hermitian, args.value_tol)?;
    if args.lcu && matches!(source, SourceDictionary::Hermitian(_)) {
        return Err(CliError::Parse(
            "the tensor-of-X form is defined for plain dictionaries; drop --hermitian or --lcu"
                .to_string(),
        ));
    }

    let be = match &source {
        SourceDictionary::Plain(d) => assemble(d).map_err(synthesis_error)?,
        SourceDictionary::Hermitian(hd) => assemble_hermitian(hd).map_err(synthesis_error)?,
    };
    let elementary = be.circuit.decompose().map_err(circuit_error)?;
    // Refuse to write artifacts wider than the simulation cap: the QASM on
    // disk is the elementary circuit, so this is exactly the width `verify`
    // would have to simulate later.
    if elementary.layout().total_qubits() > config.cap as usize {
        return Err(CliError::Capacity(format!(
            "the elementary circuit spans {} qubits, beyond the simulation cap of {}; \
             raise --cap to write artifacts this wide",
            elementary.layout().total_qubits(),
            config.cap
        )));
    }
    let qasm = export_qasm(&elementary).map_err(circuit_error)?;
    let depth = elementary.depth().map_err(circuit_error)?;

    let mut report = dictionary_cost(source.n(), source.coordinate_count(), source.item_count())
        .map_err(resources_error)?
        .with_subnormalization(be.alpha);
    report.measured_depth = Some(depth);
    report.measured_gates = Some(elementary.gate_count());

    let meta = LayoutMeta {
        format: ARTIFACT_FORMAT.to_string(),
        source_kind: source.kind().to_string(),
        alpha: be.alpha,
        ancilla_count: be.ancilla_count,
        system_qubits: be.system_qubits(),
        total_qubits: elementary.layout().total_qubits(),
        registers: elementary
            .layout()
            .registers()
            .iter()
            .map(|r| RegisterMeta { name: r.name.clone(), size: r.size })
            .collect(),
    };

    println!(
        "encoded {} items over {} coordinates: alpha = {}, {} qubits, depth {}, {} gates",
        source.item_count(),
        source.coordinate_count(),
        be.alpha,
        meta.total_qubits,
        depth,
        elementary.gate_count(),
    );
    write_artifact(&config.out_dir, "dictionary.json", &source.to_json())?;
    write_artifact(&config.out_dir, "circuit.qasm", &qasm)?;
    write_artifact(&config.out_dir, "layout.json", &to_pretty_json(&meta)?)?;
    write_artifact(&config.out_dir, "report.json", &to_pretty_json(&report)?)?;
    if args.lcu {
        if let SourceDictionary::Plain(d) = &source {
            let lcu = export_lcu(d).map_err(synthesis_error)?;
            write_artifact(&config.out_dir, "lcu.json", &lcu_json(&lcu)?)?;
        }
    }
    Ok(())
}

fn lcu_json(lcu: &blockenc::synthesis::LcuForm) -> CliResult<String> {
    let terms: Vec<serde_json::Value> = (0..lcu.term_count())
        .map(|l| {
            serde_json::json!({
                "value": { "re": lcu.values()[l].re, "im": lcu.values()[l].im },
                "coefficient": {
                    "re": lcu.coefficients()[l].re,
                    "im": lcu.coefficients()[l].im,
                },
                "mask": lcu.masks()[l],
            })
        })
        .collect();
    let doc = serde_json::json!({ "n": lcu.n(), "terms": terms });
    to_pretty_json(&doc)
}

fn run_verify(args: &VerifyArgs) -> CliResult<()> {
    let config = RunConfig::resolve(&args.common)?;
    let dir = &args.artifacts;
    let meta: LayoutMeta = serde_json::from_str(&read_text(&dir.join("layout.json"))?)
        .map_err(|e| CliError::Parse(format!("bad layout.json: {e}")))?;
    if meta.format != ARTIFACT_FORMAT {
        return Err(CliError::Parse(format!(
            "layout.json declares format '{}', expected '{ARTIFACT_FORMAT}'",
            meta.format
        )));
    }

    let dictionary_text = read_text(&dir.join("dictionary.json"))?;
    let source = match meta.source_kind.as_str() {
        "dictionary" => EncodingSource::Dictionary(
            Dictionary::from_json(&dictionary_text).map_err(dictionary_error)?,
        ),
        "hermitian" => EncodingSource::Hermitian(
            HermitianDictionary::from_json(&dictionary_text).map_err(dictionary_error)?,
        ),
        other => {
            return Err(CliError::Parse(format!("unknown source kind '{other}' in layout.json")))
        }
    };

    let specs: Vec<(&str, usize)> =
        meta.registers.iter().map(|r| (r.name.as_str(), r.size)).collect();
    let layout = RegisterLayout::new(&specs).map_err(circuit_error)?;
    if layout.total_qubits() != meta.total_qubits {
        return Err(CliError::Parse(format!(
            "layout.json registers sum to {} qubits but declare {}",
            layout.total_qubits(),
            meta.total_qubits
        )));
    }
    let circuit = import_qasm_with_layout(&read_text(&dir.join("circuit.qasm"))?, &layout)
        .map_err(circuit_error)?;

    let be = BlockEncoding {
        circuit,
        alpha: meta.alpha,
        ancilla_count: meta.ancilla_count,
        source,
    };
    let a = be.source.target_matrix().map_err(synthesis_error)?;

    let report = if args.sampled {
        verify_block_encoding_sampled(&be, &a, config.tolerance, args.columns, args.seed)
            .map_err(synthesis_error)?
    } else {
        if be.total_qubits() > config.cap as usize {
            return Err(CliError::Capacity(format!(
                "{}-qubit circuit exceeds the configured cap of {} qubits; \
                 pass --sampled to check a random column subset",
                be.total_qubits(),
                config.cap
            )));
        }
        verify_block_encoding(&be, &a, config.tolerance, config.cap).map_err(synthesis_error)?
    };

    println!(
        "verification {}: epsilon = {:.6e} (tolerance {:.6e}), unitarity residual {:.6e}, \
         {} column(s){}",
        if report.passed { "PASSED" } else { "FAILED" },
        report.epsilon,
        report.tolerance,
        report.unitarity_residual,
        report.columns_checked,
        if report.sampled { " [sampled]" } else { "" },
    );
    write_artifact(&config.out_dir, "verification.json", &to_pretty_json(&report)?)?;
    if !report.passed {
        return Err(CliError::VerificationFailed {
            epsilon: report.epsilon,
            tolerance: report.tolerance,
        });
    }
    Ok(())
}

fn run_compare(args: &CompareArgs) -> CliResult<()> {
    let config = RunConfig::resolve(&args.common)?;
    let text = read_text(&args.input)?;
    let is_json = args.input.extension().map(|e| e == "json").unwrap_or(false);
    let (a, d): (SparseMatrix, Dictionary) = if is_json {
        let d = Dictionary::from_json(&text).map_err(dictionary_error)?;
        let a = d.to_matrix().map_err(dictionary_error)?;
        (a, d)
    } else {
        let a = load_matrix_market(&text).map_err(sparse_error)?;
        let d = build_dictionary(&a, args.value_tol).map_err(dictionary_error)?;
        (a, d)
    };
    let table = compare(&a, &d).map_err(resources_error)?;
    print!("{table}");
    write_artifact(&config.out_dir, "compare.csv", &table.to_csv())?;
    Ok(())
}

fn nonzero_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() >= 0.3 {
            return v;
        }
    }
}

fn run_generate(args: &GenerateArgs) -> CliResult<()> {
    match &args.family {
        GenerateFamily::Cyclic { n, alpha1, alpha2, alpha3, common } => {
            let config = RunConfig::resolve(common)?;
            let alphas = [
                Complex64::new(*alpha1, 0.0),
                Complex64::new(*alpha2, 0.0),
                Complex64::new(*alpha3, 0.0),
            ];
            let (a, d) = gen_cyclic_laplacian(*n, alphas).map_err(applications_error)?;
            println!(
                "cyclic instance: dimension {}, {} nonzeros, alpha = {}",
                a.dim(),
                a.nnz(),
                d.subnormalization()
            );
            write_artifact(&config.out_dir, "cyclic.mtx", &write_matrix_market(&a))?;
            write_artifact(&config.out_dir, "cyclic.dictionary.json", &d.to_json())?;
        }
        GenerateFamily::Laplacian2d { nx, ny, dx, dy, common } => {
            let config = RunConfig::resolve(common)?;
            let (a, d) = gen_laplacian2d(*nx, *ny, *dx, *dy).map_err(applications_error)?;
            println!(
                "grid instance: dimension {}, {} nonzeros over {} items, alpha = {}",
                a.dim(),
                a.nnz(),
                d.item_count(),
                d.subnormalization()
            );
            write_artifact(&config.out_dir, "laplacian2d.mtx", &write_matrix_market(&a))?;
            write_artifact(&config.out_dir, "laplacian2d.dictionary.json", &d.to_json())?;
        }
        GenerateFamily::Gep { n1, n2, seed, common } => {
            let config = RunConfig::resolve(common)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let params = GepParameters {
                n1: *n1,
                n2: *n2,
                a: std::array::from_fn(|_| nonzero_complex(&mut rng)),
                b: std::array::from_fn(|_| nonzero_complex(&mut rng)),
            };
            let ((am, ad), (bm, bd)) = gen_gep_matrices(&params).map_err(applications_error)?;
            println!(
                "eigenvalue pair: dimension {}, A has {} nonzeros over {} items, \
                 B has {} nonzeros over {} items",
                am.dim(),
                am.nnz(),
                ad.item_count(),
                bm.nnz(),
                bd.item_count()
            );
            write_artifact(&config.out_dir, "gep_parameters.json", &to_pretty_json(&params)?)?;
            write_artifact(&config.out_dir, "gep_a.mtx", &write_matrix_market(&am))?;
            write_artifact(&config.out_dir, "gep_a.dictionary.json", &ad.to_json())?;
            write_artifact(&config.out_dir, "gep_b.mtx", &write_matrix_market(&bm))?;
            write_artifact(&config.out_dir, "gep_b.dictionary.json", &bd.to_json())?;
        }
    }
    Ok(())
}

fn run_export(args: &ExportArgs) -> CliResult<()> {
    let config = RunConfig::resolve(&args.common)?;
    let text = read_text(&args.input)?;
    let is_json = args.input.extension().map(|e| e == "json").unwrap_or(false);
    let d = if is_json {
        Dictionary::from_json(&text).map_err(dictionary_error)?
    } else {
        let a = load_matrix_market(&text).map_err(sparse_error)?;
        build_dictionary(&a, args.value_tol).map_err(dictionary_error)?
    };
    let lcu = export_lcu(&d).map_err(synthesis_error)?;
    println!(
        "tensor-of-X form: {} term(s) on {} system qubit(s)",
        lcu.term_count(),
        lcu.n()
    );
    write_artifact(&config.out_dir, "lcu.json", &lcu_json(&lcu)?)?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Encode(args) => run_encode(args),
        Command::Verify(args) => run_verify(args),
        Command::Compare(args) => run_compare(args),
        Command::Generate(args) => run_generate(args),
        Command::Export(args) => run_export(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            e.exit();
        }
    };
    if let Err(e) = run(&cli) {
        let payload = serde_json::json!({
            "error": {
                "kind": e.kind(),
                "message": e.to_string(),
                "exit_code": e.exit_code(),
            }
        });
        eprintln!("{payload}");
        std::process::exit(e.exit_code());
    }
}
