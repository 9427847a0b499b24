use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;

use dbrank::channel::{self, NoiseModel};
use dbrank::codes::{kendall_tau, permutation_distance, PermCode};
use dbrank::encoder::{self, InfoVecA, InfoVecB, Repository};
use dbrank::feasibility::{alpha_star_lower, upper_bound};
use dbrank::oracle;
use dbrank::profile::{dna_to_symbols, format_string, parse_params_header, parse_string};
use dbrank::synthesis;
use dbrank::{decide, profile_of, rank_of, Error, Params, ProfileVector, RankPermutation};

/// Rank modulation over DeBruijn-graph profile vectors.
#[derive(Parser)]
#[command(name = "dbrank", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a permutation (or the order of a profile) is feasible.
    Check(CheckArgs),
    /// Encode an information vector.
    Encode {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: Input,
        /// What to print.
        #[arg(long, value_enum, default_value_t = EncodeOutput::Vector)]
        output: EncodeOutput,
        /// Longest string printed by `--output string`.
        #[arg(long, default_value_t = 10_000_000)]
        max_len: usize,
    },
    /// Recover an information vector from an encoder output or its permutation.
    Decode {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: Input,
    },
    /// Build a string realizing a profile vector.
    Synthesize(SynthArgs),
    /// Circular profile of a string.
    Profile(ProfileArgs),
    /// Count feasible permutations by exhaustive enumeration.
    Census {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also list the feasible permutations.
        #[arg(long)]
        list: bool,
    },
    /// Build or check the base-case repository.
    Repo {
        #[command(subcommand)]
        action: RepoAction,
    },
    /// Counting, rate and length formulas.
    Bounds(BoundsArgs),
    /// Monte-Carlo rank recovery through a noisy channel.
    Simulate(SimArgs),
    /// Kendall-tau distance between two sequences, or the minimum distance of a code.
    Distance(DistanceArgs),
    /// Information vectors: random draws and mixed-radix indices.
    Info {
        #[command(subcommand)]
        action: InfoAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodeOutput {
    Vector,
    Perm,
    String,
}

#[derive(Args)]
struct Input {
    /// Input file; standard input when omitted or `-`.
    #[arg(long, short)]
    input: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, Failure> {
        match &self.input {
            Some(p) if p.as_os_str() != "-" => {
                fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
            }
            _ => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
                Ok(s)
            }
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    /// Permutation given inline, least frequent word first.
    #[arg(long)]
    perm: Option<String>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Print only the status line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Euler,
    Markov,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Method::Euler)]
    method: Method,
    /// Required for `--method markov`.
    #[arg(long)]
    seed: Option<u64>,
    /// Length of a Markov string.
    #[arg(long)]
    length: Option<usize>,
    /// Longest Eulerian string printed.
    #[arg(long, default_value_t = 10_000_000)]
    max_len: usize,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    ell: usize,
    /// Read the string over ACG as 0, 1, 2 (and T as 3).
    #[arg(long)]
    dna: bool,
}

#[derive(Subcommand)]
enum RepoAction {
    /// Search for the repository and write it.
    Build {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = oracle::REPOSITORY_CAP)]
        cap: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Validate a repository file, or the embedded copy.
    Verify {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Smallest entry cap covering every feasible (3,2) permutation.
    C3 {
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Upper bound on the number of feasible permutations.
    #[arg(long)]
    upper: bool,
    /// Number of permutations the encoders produce.
    #[arg(long)]
    lower: bool,
    /// Rate lower bound; without --q/--ell prints the full table.
    #[arg(long)]
    rate: bool,
    /// Entry and length bounds.
    #[arg(long)]
    length: bool,
    /// Base-case entry bound used by --length.
    #[arg(long, default_value_t = 17)]
    c3: u64,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    input: Input,
    /// Noise settings: `additive:M` or `drop:RATE`; repeatable.
    #[arg(long, required = true)]
    noise: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct DistanceArgs {
    /// Two sequences; single characters are symbols, or comma-separated tokens.
    sequences: Vec<String>,
    /// Read both as rank permutations with these parameters.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    /// Minimum distance of a code file, one comma-separated permutation per line.
    #[arg(long)]
    code: Option<PathBuf>,
}

#[derive(Subcommand)]
enum InfoAction {
    /// Draw a uniform information vector.
    Random {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Mixed-radix index of an information vector.
    Index {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: Input,
    },
    /// Information vector with a given index.
    FromIndex {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        index: String,
    },
    /// Size of the message space.
    Size {
        #[arg(value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
    },
}

/// Why a command failed, mapped onto the exit status.
enum Failure {
    Usage(String),
    /// The input was read fine but the answer is negative.
    Rejected(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Rejected(_) => 2,
            Failure::Domain(e) => match e {
                Error::Internal(_) => 3,
                Error::NotACodeword(_)
                | Error::NotFlowConserving(_)
                | Error::NotConnected
                | Error::Tie(..)
                | Error::Repository(_)
                | Error::SearchExhausted(_) => 2,
                _ => 1,
            },
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("usage error: {m}"),
                Failure::Rejected(m) => print!("{m}"),
                Failure::Domain(e) => eprintln!("error[{}]: {e}", e.code()),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check(a) => check(a),
        Command::Encode { algorithm, input, output, max_len } => encode(algorithm, &input.read()?, output, max_len),
        Command::Decode { algorithm, input } => decode(algorithm, &input.read()?),
        Command::Synthesize(a) => synthesize(a),
        Command::Profile(a) => profile(a),
        Command::Census { q, ell, jobs, list } => {
            let census = oracle::enumerate_feasible(Params::new(q, ell)?, jobs)?;
            let mut out = census.report();
            if list {
                for pi in &census.feasible {
                    out.push_str(&pi.to_text());
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Command::Repo { action } => repo(action),
        Command::Bounds(a) => bounds(a),
        Command::Simulate(a) => simulate(a),
        Command::Distance(a) => distance(a),
        Command::Info { action } => info(action),
    }
}

/// Drops status lines so outputs of `check` feed straight into other commands.
fn payload(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("status="))
        .collect::<Vec<_>>()
        .join("\n")
}

fn params_from(q: Option<usize>, ell: Option<usize>) -> Result<Params, Failure> {
    match (q, ell) {
        (Some(q), Some(ell)) => Ok(Params::new(q, ell)?),
        _ => Err(Failure::Usage("--q and --ell are required without a header line".into())),
    }
}

/// A permutation, or the order of a profile vector, with an optional header.
fn read_permutation(text: &str, q: Option<usize>, ell: Option<usize>) -> Result<RankPermutation, Failure> {
    let text = payload(text);
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let (params, body) = match lines.first() {
        Some(first) if first.starts_with("q=") => (parse_params_header(first)?, &lines[1..]),
        Some(_) => (params_from(q, ell)?, &lines[..]),
        None => return Err(Failure::Usage("empty input".into())),
    };
    if body.len() == 1 && body[0].contains(',') {
        return Ok(RankPermutation::parse_text(params, body[0])?);
    }
    let profile = ProfileVector::parse_text(&format!("{params}\n{}", body.join("\n")))?;
    Ok(rank_of(params, profile.counts())?)
}

fn check(a: CheckArgs) -> Outcome {
    let text = match &a.perm {
        Some(p) => p.clone(),
        None => a.input.read()?,
    };
    let pi = read_permutation(&text, a.q, a.ell)?;
    let verdict = decide(&pi);
    let out = if a.quiet {
        verdict.to_text().lines().next().unwrap_or_default().to_string() + "\n"
    } else {
        verdict.to_text()
    };
    if verdict.is_feasible() {
        Ok(out)
    } else {
        Err(Failure::Rejected(out))
    }
}

fn encode(algorithm: Algorithm, text: &str, output: EncodeOutput, max_len: usize) -> Outcome {
    let repo = Repository::embedded();
    let profile = match algorithm {
        Algorithm::A => encoder::encode_a(&InfoVecA::parse_text(text)?, repo)?,
        Algorithm::B => encoder::encode_b(&InfoVecB::parse_text(text)?, repo)?.into_profile(),
    };
    Ok(match output {
        EncodeOutput::Vector => profile.to_text(),
        EncodeOutput::Perm => format!("{}\n{}\n", profile.params(), rank_of(profile.params(), profile.counts())?),
        EncodeOutput::String => string_of(&profile, max_len)?,
    })
}

fn string_of(profile: &ProfileVector, max_len: usize) -> Outcome {
    let compact = synthesis::eulerian_compact(profile)?;
    let x = compact.materialize(max_len).ok_or_else(|| {
        Failure::Domain(Error::CapExceeded(format!("string length {} exceeds --max-len {max_len}", compact.len())))
    })?;
    Ok(format_string(&x) + "\n")
}

fn decode(algorithm: Algorithm, text: &str) -> Outcome {
    let pi = read_permutation(text, None, None)?;
    let repo = Repository::embedded();
    Ok(match algorithm {
        Algorithm::A => encoder::decode_a(&pi, repo)?.to_text(),
        Algorithm::B => encoder::decode_b(&pi, repo)?.to_text(),
    })
}

fn synthesize(a: SynthArgs) -> Outcome {
    let profile = ProfileVector::parse_text(&payload(&a.input.read()?))?;
    match a.method {
        Method::Euler => string_of(&profile, a.max_len),
        Method::Markov => {
            let seed = a.seed.ok_or_else(|| Failure::Usage("--method markov needs --seed".into()))?;
            let n = a.length.ok_or_else(|| Failure::Usage("--method markov needs --length".into()))?;
            let values: Vec<BigRational> =
                profile.counts().iter().map(|c| BigRational::from_integer(c.clone().into())).collect();
            let s = synthesis::normalize(&values)?;
            let x = synthesis::markov_generate(profile.params(), &s, n, seed)?;
            Ok(format_string(&x) + "\n")
        }
    }
}

fn profile(a: ProfileArgs) -> Outcome {
    let text = a.input.read()?;
    let text = text.trim();
    let (x, q) = if a.dna {
        let x = dna_to_symbols(text)?;
        let q = a.q.unwrap_or(if text.contains('T') { 4 } else { 3 });
        (x, q)
    } else {
        let q = a.q.ok_or_else(|| Failure::Usage("--q is required without --dna".into()))?;
        (parse_string(text, q)?, q)
    };
    Ok(profile_of(&x, Params::new(q, a.ell)?)?.to_text())
}

fn repo(action: RepoAction) -> Outcome {
    match action {
        RepoAction::Build { out, cap, jobs } => {
            let repo = oracle::build_repository(cap, jobs)?;
            fs::write(&out, repo.to_text()).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            Ok(format!("entries={}\nmax_entry={}\nsha256={}\n", repo.len(), repo.max_entry(), repo.checksum()))
        }
        RepoAction::Verify { file } => {
            let repo = match file {
                Some(p) => {
                    let text = fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    Repository::parse_text(&text)?
                }
                None => Repository::embedded().clone(),
            };
            Ok(format!("entries={}\nmax_entry={}\nsha256={}\nstatus=ok\n", repo.len(), repo.max_entry(), repo.checksum()))
        }
        RepoAction::C3 { jobs } => {
            let (c3, count) = oracle::compute_c3(jobs)?;
            Ok(format!("c3={c3}\npermutations_at_max={count}\n"))
        }
    }
}

fn rate_table() -> Result<String, Failure> {
    let mut out = String::from("q\\ell");
    for ell in 3..=10 {
        out.push_str(&format!("\t{ell}"));
    }
    out.push('\n');
    for q in 3..=10 {
        out.push_str(&q.to_string());
        for ell in 3..=10 {
            out.push_str(&format!("\t{:.4}", encoder::rate_lower_bound(Params::new(q, ell)?)?));
        }
        out.push('\n');
    }
    Ok(out)
}

fn bounds(a: BoundsArgs) -> Outcome {
    let any = a.upper || a.lower || a.rate || a.length;
    if a.rate && a.q.is_none() && a.ell.is_none() {
        return rate_table();
    }
    let params = params_from(a.q, a.ell)?;
    let mut out = String::new();
    if a.upper || !any {
        let ub = upper_bound(params)?;
        out.push_str(&format!("upper_log10={:.6}\nupper_exponent={}\n", ub.log10, ub.exponent));
        if params.ell >= 2 {
            out.push_str(&format!("alpha_star_lower={}\n", alpha_star_lower(params)?));
        }
        if let Some(x) = &ub.exact {
            out.push_str(&format!("upper_exact={}\n", x.floor().to_integer()));
        }
    }
    if a.lower || !any {
        out.push_str(&format!("lower={}\n", encoder::count_lower_bound(params)?));
    }
    if a.rate || (!any && params.ell >= 3) {
        out.push_str(&format!("rate={:.4}\n", encoder::rate_lower_bound(params)?));
    }
    if a.length || !any {
        let b = encoder::length_bounds(params, a.c3)?;
        out.push_str(&format!(
            "c3={}\nc_q={}\nlen_q2={}\nc_q_ell={}\nlen_q_ell={}\nlen_closed_form={}\n",
            b.c3, b.c_q, b.len_q2, b.c_q_ell, b.len_q_ell, b.closed_form
        ));
    }
    Ok(out)
}

fn parse_noise(s: &str) -> Result<NoiseModel, Failure> {
    let bad = || Failure::Usage(format!("noise {s:?}: expected additive:M or drop:RATE"));
    match s.split_once(':') {
        Some(("additive", m)) => Ok(NoiseModel::Additive { m: m.parse().map_err(|_| bad())? }),
        Some(("drop", r)) => Ok(NoiseModel::Drop { rate: r.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

fn simulate(a: SimArgs) -> Outcome {
    let profile = ProfileVector::parse_text(&payload(&a.input.read()?))?;
    let models = a.noise.iter().map(|s| parse_noise(s)).collect::<Result<Vec<_>, _>>()?;
    let rows = channel::simulate(&profile, &models, a.trials, a.seed, a.jobs)?;
    Ok(channel::report(&rows))
}

fn tokens(s: &str) -> Vec<String> {
    if s.contains(',') {
        s.split(',').map(|t| t.trim().to_string()).collect()
    } else {
        s.chars().map(String::from).collect()
    }
}

fn distance(a: DistanceArgs) -> Outcome {
    if let Some(path) = a.code {
        let text = fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let code = PermCode::parse_text(&text)?;
        return Ok(match code.min_distance() {
            Some(d) => format!("size={}\nmin_distance={d}\n", code.len()),
            None => format!("size={}\nmin_distance=inf\n", code.len()),
        });
    }
    let [x, y] = a.sequences.as_slice() else {
        return Err(Failure::Usage("expected two sequences or --code".into()));
    };
    let d = if a.q.is_some() || a.ell.is_some() {
        let params = params_from(a.q, a.ell)?;
        permutation_distance(&RankPermutation::parse_text(params, x)?, &RankPermutation::parse_text(params, y)?)?
    } else {
        kendall_tau(&tokens(x), &tokens(y))?
    };
    Ok(format!("{d}\n"))
}

fn info(action: InfoAction) -> Outcome {
    match action {
        InfoAction::Random { algorithm, q, ell, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            Params::new(q, ell)?;
            if q < 3 || ell < 2 {
                return Err(Failure::Usage("information vectors need q >= 3 and ell >= 2".into()));
            }
            Ok(match algorithm {
                Algorithm::A => InfoVecA::random(q, &mut rng).to_text(),
                Algorithm::B => InfoVecB::random(q, ell, &mut rng).to_text(),
            })
        }
        InfoAction::Index { algorithm, input } => {
            let text = input.read()?;
            Ok(match algorithm {
                Algorithm::A => InfoVecA::parse_text(&text)?.to_index(),
                Algorithm::B => InfoVecB::parse_text(&text)?.to_index(),
            }
            .to_string()
                + "\n")
        }
        InfoAction::FromIndex { algorithm, q, ell, index } => {
            let n: BigUint = index.parse().map_err(|_| Failure::Usage(format!("bad index {index:?}")))?;
            Ok(match algorithm {
                Algorithm::A => InfoVecA::from_index(q, &n)?.to_text(),
                Algorithm::B => InfoVecB::from_index(q, ell, &n)?.to_text(),
            })
        }
        InfoAction::Size { algorithm, q, ell } => Ok(match algorithm {
            Algorithm::A => InfoVecA::space_size(q),
            Algorithm::B => InfoVecB::space_size(q, ell),
        }
        .to_string()
            + "\n"),
    }
}
