//! Command-line front end for the `dnamagic` cipher.
//!
//! [`run`] parses arguments, executes one subcommand, and returns the process
//! exit code: 0 on success, 1 on usage errors, 2 on data or contract errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dnamagic::{
    adjacent_correlation, build_key, chosen_plaintext_attack, decrypt, deserialize, encrypt,
    encrypt_with_fingerprint, evaluate_attack, generate_doubly_even, histogram, parse_fasta,
    pointer_histogram, read_pgm, serialize, write_pgm, AnalysisError, CipherImage, Direction,
    Histogram, KmerIndex, ParseMode, PlainImage, RandomStream, ReferenceKey, Verdict, KEY_MIN_LEN,
};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dnamagic",
    version,
    about = "DNA-coded image cipher with magic-square scrambling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a PGM image into a DMC1 container
    Encrypt(EncryptArgs),
    /// Decrypt a DMC1 container back into a PGM image
    Decrypt(DecryptArgs),
    /// Histogram and adjacent-pixel correlation report for a plain/cipher pair
    Analyze(AnalyzeArgs),
    /// Run the XOR replay known-plaintext attack and score it against the truth
    Attack(AttackArgs),
    /// Print a doubly-even magic square and its magic constant
    Magic(MagicArgs),
    /// Summarise a key sequence file
    Keyinfo(KeyinfoArgs),
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// Key sequence in FASTA format
    #[arg(long, value_name = "FASTA")]
    pub key: PathBuf,
    /// How to treat symbols other than A, C, G, T in the key
    #[arg(long, value_name = "MODE", default_value = "strict", value_parser = parse_mode)]
    pub mode: ParseMode,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    /// Plain image (PGM, P2 or P5, maxval 255)
    #[arg(long = "in", value_name = "PGM")]
    pub input: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    /// Output container
    #[arg(long, value_name = "DMC")]
    pub out: PathBuf,
    /// Random seed, decimal or 0x-hex; drawn from the OS when omitted
    #[arg(long, value_name = "N", value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Embed the key fingerprint so decryption can detect a wrong key
    #[arg(long)]
    pub fingerprint: bool,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    /// Input container
    #[arg(long = "in", value_name = "DMC")]
    pub input: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    /// Output image (binary P5)
    #[arg(long, value_name = "PGM")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Plain image
    #[arg(long, value_name = "PGM")]
    pub plain: PathBuf,
    /// Its ciphertext
    #[arg(long, value_name = "DMC")]
    pub cipher: PathBuf,
    /// Also write metrics as CSV (metric,direction,value)
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Adjacent pairs sampled per direction
    #[arg(long, value_name = "N", default_value_t = dnamagic::analysis::DEFAULT_SAMPLE_N)]
    pub sample_n: usize,
    /// Sampling seed, decimal or 0x-hex; drawn from the OS when omitted
    #[arg(long, value_name = "N", value_parser = parse_seed)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// Known plain image
    #[arg(long, value_name = "PGM")]
    pub known_plain: PathBuf,
    /// Ciphertext of the known plain image
    #[arg(long, value_name = "DMC")]
    pub known_cipher: PathBuf,
    /// Ciphertext to attack
    #[arg(long, value_name = "DMC")]
    pub target: PathBuf,
    /// True plaintext of the target, used to score the attack
    #[arg(long, value_name = "PGM")]
    pub truth: PathBuf,
}

#[derive(Debug, Args)]
pub struct MagicArgs {
    /// Square order, a positive multiple of 4
    #[arg(long, value_name = "N")]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct KeyinfoArgs {
    #[command(flatten)]
    pub key: KeyArgs,
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_mode(s: &str) -> Result<ParseMode, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] dnamagic::Error),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.name(),
            CliError::Mismatch(_) => "LengthMismatch",
        }
    }
}

fn core<E: Into<dnamagic::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_image(path: &Path) -> Result<PlainImage, CliError> {
    read_pgm(&read_file(path)?).map_err(core)
}

fn load_cipher(path: &Path) -> Result<CipherImage, CliError> {
    deserialize(&read_file(path)?).map_err(core)
}

fn load_key(args: &KeyArgs) -> Result<ReferenceKey, CliError> {
    let seq = parse_fasta(&read_file(&args.key)?, args.mode).map_err(core)?;
    build_key(seq).map_err(core)
}

fn seed_or_entropy(seed: Option<u64>, err: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        let _ = writeln!(err, "seed: {s}");
        s
    })
}

/// Parses `argv` (including the program name) and runs the chosen subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };

    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            EXIT_DATA
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Encrypt(a) => cmd_encrypt(a, err),
        Command::Decrypt(a) => cmd_decrypt(a),
        Command::Analyze(a) => cmd_analyze(a, out, err),
        Command::Attack(a) => cmd_attack(a, out),
        Command::Magic(a) => cmd_magic(a, out),
        Command::Keyinfo(a) => cmd_keyinfo(a, out),
    }
}

fn cmd_encrypt(a: EncryptArgs, err: &mut dyn Write) -> Result<(), CliError> {
    let image = load_image(&a.input)?;
    let key = load_key(&a.key)?;
    let mut rng = RandomStream::from_seed(seed_or_entropy(a.seed, err));
    let cipher = if a.fingerprint {
        encrypt_with_fingerprint(&image, &key, &mut rng)
    } else {
        encrypt(&image, &key, &mut rng)
    }
    .map_err(core)?;
    write_file(&a.out, &serialize(&cipher))
}

fn cmd_decrypt(a: DecryptArgs) -> Result<(), CliError> {
    let cipher = load_cipher(&a.input)?;
    let key = load_key(&a.key)?;
    let image = decrypt(&cipher, &key).map_err(core)?;
    write_file(&a.out, &write_pgm(&image))
}

struct Metric {
    name: &'static str,
    direction: &'static str,
    value: f64,
}

fn histogram_metrics(
    (chi, ratio): (&'static str, &'static str),
    h: &Histogram,
    rows: &mut Vec<Metric>,
) {
    rows.push(Metric {
        name: chi,
        direction: "all",
        value: h.chi_square_uniform(),
    });
    rows.push(Metric {
        name: ratio,
        direction: "all",
        value: h.max_bin() as f64 / h.mean_bin(),
    });
}

fn correlation_value<T: Copy + Into<f64>>(
    cells: &[T],
    side: (usize, usize),
    d: Direction,
    sample_n: usize,
    seed: u64,
) -> Result<f64, CliError> {
    let mut rng = RandomStream::from_seed(seed);
    match adjacent_correlation(cells, side.0, side.1, d, sample_n, &mut rng) {
        Ok(rep) => Ok(rep.r),
        Err(AnalysisError::ZeroVariance) => Ok(f64::NAN),
        Err(e) => Err(core(e)),
    }
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let plain = load_image(&a.plain)?;
    let cipher = load_cipher(&a.cipher)?;
    let seed = seed_or_entropy(a.seed, err);

    let mut rows = Vec::new();
    histogram_metrics(
        (
            "plain_histogram_chi_square",
            "plain_histogram_max_over_mean",
        ),
        &histogram(plain.pixels()),
        &mut rows,
    );
    histogram_metrics(
        (
            "cipher_histogram_chi_square",
            "cipher_histogram_max_over_mean",
        ),
        &pointer_histogram(cipher.pointers()),
        &mut rows,
    );
    let plain_dims = (plain.width(), plain.height());
    let cipher_dims = (cipher.width(), cipher.height());
    for d in Direction::ALL {
        // same seed for both so the sampled positions coincide
        let p = correlation_value(plain.pixels(), plain_dims, d, a.sample_n, seed)?;
        let c = correlation_value(cipher.pointers(), cipher_dims, d, a.sample_n, seed)?;
        rows.push(Metric {
            name: "plain_correlation",
            direction: d.as_str(),
            value: p,
        });
        rows.push(Metric {
            name: "cipher_correlation",
            direction: d.as_str(),
            value: c,
        });
    }

    let mut report = String::new();
    let _ = writeln!(report, "plain:  {}x{}", plain.width(), plain.height());
    let _ = writeln!(
        report,
        "cipher: {}x{} (16-bit pointer cells)",
        cipher.width(),
        cipher.height()
    );
    let _ = writeln!(
        report,
        "sampling: {} pairs per direction, seed {seed}",
        a.sample_n
    );
    for m in &rows {
        let value = if m.value.is_nan() {
            "undefined (ZeroVariance)".to_string()
        } else {
            format!("{:.6}", m.value)
        };
        let _ = writeln!(report, "{:<32} {:<10} {value}", m.name, m.direction);
    }
    out.write_all(report.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;

    if let Some(path) = a.csv {
        let mut csv = String::from("metric,direction,value\n");
        for m in &rows {
            let _ = writeln!(csv, "{},{},{}", m.name, m.direction, m.value);
        }
        write_file(&path, csv.as_bytes())?;
    }
    Ok(())
}

fn cmd_attack(a: AttackArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let known_plain = load_image(&a.known_plain)?;
    let known_cipher = load_cipher(&a.known_cipher)?;
    let target = load_cipher(&a.target)?;
    let truth = load_image(&a.truth)?;
    if truth.pixels().len() != target.pointers().len() {
        return Err(CliError::Mismatch(format!(
            "truth has {} pixels, target has {} cells",
            truth.pixels().len(),
            target.pointers().len()
        )));
    }
    let candidate = chosen_plaintext_attack(
        known_plain.pixels(),
        known_cipher.pointers(),
        target.pointers(),
    )
    .map_err(core)?;
    let report = evaluate_attack(&candidate, truth.pixels()).map_err(core)?;
    let verdict = match report.verdict {
        Verdict::Success => "success",
        Verdict::Failure => "failure",
    };
    let matched = candidate
        .iter()
        .zip(truth.pixels())
        .filter(|(a, b)| a == b)
        .count();
    writeln!(out, "recovered pixels: {matched}/{}", candidate.len())
        .and_then(|_| writeln!(out, "match fraction: {:.6}", report.match_fraction))
        .and_then(|_| writeln!(out, "verdict: {verdict}"))
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_magic(a: MagicArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let square = generate_doubly_even(a.order).map_err(core)?;
    write!(out, "{square}")
        .and_then(|_| writeln!(out, "magic constant: {}", square.magic_constant()))
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn cmd_keyinfo(a: KeyinfoArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let seq = parse_fasta(&read_file(&a.key.key)?, a.key.mode).map_err(core)?;
    let mut report = String::new();
    let _ = writeln!(report, "source: {}", seq.source_name);
    let _ = writeln!(report, "length: {} bases", seq.len());
    if seq.len() < KEY_MIN_LEN {
        out.write_all(report.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        return Err(core(dnamagic::KeyError::SequenceTooShort(seq.len())));
    }
    let index = KmerIndex::scan(&seq).map_err(core)?;
    let fingerprint = dnamagic::key_fingerprint(&seq).map_err(core)?;
    let _ = writeln!(report, "window: {} start positions", index.window_starts());
    let _ = writeln!(report, "coverage: {}/256 quads", index.covered_count());
    let _ = writeln!(report, "min_multiplicity: {}", index.min_multiplicity());
    let _ = writeln!(report, "max_multiplicity: {}", index.max_multiplicity());
    let _ = writeln!(report, "fingerprint: {fingerprint:#018x}");
    out.write_all(report.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    build_key(seq).map(|_| ()).map_err(core)
}
