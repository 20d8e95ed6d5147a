//! Command-line front end for `linfcert-core`.
//!
//! Every subcommand emits one [`CertificateReport`], as pretty JSON or as
//! text. Exit codes: 0 success, 1 report produced with a failed assertion,
//! 2 input error, 3 budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use linfcert_core::certificates::{
    area_cocycle, dehn_filling_constant, horoball_iso_probe, iso_constant, johnson_check,
    mean_retraction_check, product_witness, random_unit_cocycle, strong_vanishing_sample, CertificateError,
    SignedPermutation,
};
use linfcert_core::chains::SparseChain;
use linfcert_core::complexes::{
    build_ball_with_budget, build_cusped_ball_with_budget, check_boundary_squared, export_complex, orbit_labels,
    BallComplex, CellComplex, ComplexError, CuspedBall,
};
use linfcert_core::corpus;
use linfcert_core::lpcore::{fill_norm, folner_lp_bound, relative_fill_norm, LpBudget, LpError};
use linfcert_core::presentations::{
    parse_relative_presentation, PreparedOracle, Presentation, RelativePresentation, WordOracle,
};
use linfcert_core::report::CertificateReport;
use linfcert_core::{qi, Extended};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::VertexBudget(_) | ComplexError::CellBudget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Budget(_) => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CertificateError> for CliError {
    fn from(e: CertificateError) -> Self {
        match e {
            CertificateError::Lp(l) => l.into(),
            CertificateError::Complex(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "linfcert", version, about = "Exact LP certificates for l-infinity cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CocycleKind {
    /// 1 on every 2-cell.
    Area,
    /// Random dyadic values scaled to sup norm 1, from `--seed`.
    Random,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct Budgets {
    /// Maximum number of ball vertices.
    #[arg(long, env = "LINFCERT_VERTEX_BUDGET", default_value_t = 250_000)]
    vertex_budget: usize,
    /// Maximum LP tableau entries (rows times columns).
    #[arg(long, env = "LINFCERT_LP_BUDGET", default_value_t = 4_000_000)]
    lp_budget: usize,
}

impl Budgets {
    fn lp(&self) -> Result<LpBudget, CliError> {
        if self.vertex_budget == 0 || self.lp_budget == 0 {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        Ok(LpBudget {
            max_entries: self.lp_budget,
            ..LpBudget::default()
        })
    }
}

#[derive(Debug, Args)]
struct Input {
    /// Presentation file, or a built-in corpus name such as `z2` or `z2.grp`.
    #[arg(long = "in", value_name = "PATH|NAME")]
    input: String,
    /// Word oracle: free, abelian, dehn, or finite:<bound>. Defaults to the
    /// file's `oracle:` line, then `free`.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Debug, Args)]
struct BallArgs {
    #[command(flatten)]
    input: Input,
    #[arg(short = 'R', long = "radius")]
    radius: usize,
    #[command(flatten)]
    budgets: Budgets,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a ball of the Cayley 2-complex and report its cells.
    Ball {
        #[command(flatten)]
        ball: BallArgs,
        /// Include every cell with its boundary.
        #[arg(long)]
        cells: bool,
    },
    /// Minimal l1 filling of the loop read by a word from the base vertex.
    Fill {
        #[command(flatten)]
        ball: BallArgs,
        /// Loop word, e.g. `abAB`.
        #[arg(long)]
        word: String,
        /// Write the LP in CPLEX LP format.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// LP bound on inf |dc|_1 / |c|_1 over 2-chains of the ball.
    Folner {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Truncated isoperimetric constant of a 2-cocycle, with witness and primitive.
    Iso {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, value_enum, default_value = "area")]
        cocycle: CocycleKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Check the Johnson cocycle identity and its norm bound on a ball.
    Johnson {
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Check the mean retraction over a finite group acting by signed permutations.
    Mean {
        #[command(flatten)]
        input: Input,
        /// One signed 1-based permutation per generator, e.g. `"2 3 -1"`.
        #[arg(long, required = true)]
        action: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Non-vanishing witness on the product of an n-cube grid with a ball.
    Witness {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        /// Base presentation file or corpus name.
        #[arg(long)]
        base: String,
        #[arg(long)]
        oracle: Option<String>,
        #[command(flatten)]
        budgets: Budgets,
        #[command(flatten)]
        output: Output,
    },
    /// Build a cusped ball and check its structural invariants.
    Cusped {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(short = 'D', long = "depth")]
        depth: usize,
    },
    /// Sample unit 2-cocycles and report the largest truncated constant.
    Sample {
        #[command(flatten)]
        ball: BallArgs,
        /// Horoball depth; samples relative cocycles on the cusped ball.
        #[arg(short = 'D', long = "depth")]
        depth: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Filling ratios of rectangular loops inside horoballs.
    Horoprobe {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(short = 'D', long = "depth")]
        depth: usize,
    },
    /// Parse a presentation and report its shape.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
}

struct Loaded {
    relative: RelativePresentation,
    oracle: WordOracle,
}

impl Loaded {
    fn presentation(&self) -> &Presentation {
        self.relative.ambient()
    }

    fn report(&self, kind: &str) -> CertificateReport {
        CertificateReport::new(kind)
            .with_sha(self.relative.content_hash())
            .with_oracle(self.oracle)
    }

    fn with_header(&self, r: CertificateReport) -> CertificateReport {
        r.with_sha(self.relative.content_hash()).with_oracle(self.oracle)
    }
}

fn read_source(name: &str) -> Result<(String, String), CliError> {
    let path = Path::new(name);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        return Ok((name.to_string(), text));
    }
    match corpus::entry(name) {
        Some(e) => Ok((format!("corpus:{}", e.name), e.text.to_string())),
        None => Err(CliError::Input(format!("{name}: no such file or corpus entry"))),
    }
}

fn load(name: &str, oracle: Option<&str>) -> Result<Loaded, CliError> {
    let (origin, text) = read_source(name)?;
    let relative = parse_relative_presentation(&text).map_err(|e| CliError::Input(format!("{origin}:{e}")))?;
    let oracle = match oracle {
        Some(o) => o.parse::<WordOracle>().map_err(CliError::Input)?,
        None => relative.ambient_oracle().unwrap_or(WordOracle::FreeReduction),
    };
    Ok(Loaded { relative, oracle })
}

fn build(loaded: &Loaded, args: &BallArgs) -> Result<BallComplex, CliError> {
    args.budgets.lp()?;
    Ok(build_ball_with_budget(loaded.presentation(), args.radius, loaded.oracle, args.budgets.vertex_budget)?)
}

fn build_cusped(loaded: &Loaded, args: &BallArgs, depth: usize) -> Result<CuspedBall, CliError> {
    args.budgets.lp()?;
    let mut relative = loaded.relative.clone();
    if args.input.oracle.is_some() {
        relative = RelativePresentation::new(
            relative.ambient().clone(),
            relative.peripherals().to_vec(),
            Some(loaded.oracle),
        )
        .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(build_cusped_ball_with_budget(&relative, args.radius, depth, args.budgets.vertex_budget)?)
}

fn dump(path: &Option<PathBuf>, lp: &linfcert_core::LpProblem) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, lp.to_lp_format()).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cell_counts(c: &dyn CellComplex) -> serde_json::Value {
    (0..=c.top_dimension()).map(|d| c.cell_count(d)).collect::<Vec<_>>().into()
}

fn execute(command: Command) -> Result<(CertificateReport, Output), CliError> {
    match command {
        Command::Ball { ball, cells } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let b = build(&loaded, &ball)?;
            let mut r = loaded.report("ball").with_radius(Some(ball.radius));
            r.detail("cell_counts", cell_counts(&b));
            r.detail("oracle_complete", b.oracle_complete());
            r.detail("max_face_length", b.max_face_length());
            let dd = check_boundary_squared(&b);
            r.check("boundary squared vanishes", "0", dd.map_or_else(|(d, c)| format!("{d}-cell {c}"), |_| "0".into()), dd.is_ok());
            if cells {
                let export = serde_json::to_value(export_complex(&b)).expect("exports serialize");
                r.detail("complex", export);
            }
            Ok((r, ball.output))
        }
        Command::Fill { ball, word, dump_lp } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let b = build(&loaded, &ball)?;
            let w = loaded
                .presentation()
                .parse_word(&word)
                .ok_or_else(|| CliError::Input(format!("`{word}` is not a word in the generators")))?;
            let path = b
                .path_edges(0, &w)
                .ok_or_else(|| CliError::Input(format!("the path of `{word}` leaves the radius-{} ball", ball.radius)))?;
            if b.walk(0, &w) != Some(0) {
                return Err(CliError::Input(format!("`{word}` does not close up in the ball")));
            }
            let mut loop_ = SparseChain::zero(1);
            for (e, s) in path {
                loop_.add_at(e, qi(s));
            }
            let result = fill_norm(&b, &loop_, ball.budgets.lp()?)?;
            dump(&dump_lp, &result.problem)?;
            let mut r = loaded.report("fill").with_radius(Some(ball.radius));
            r.set_value(&result.value);
            r.witness_chain = result.filler.as_ref().map(|c| c.to_literal());
            r.detail("word", word);
            r.detail("loop_length", loop_.l1_norm().to_string());
            r.detail("lp_pivots", result.solution.pivots);
            let cert = result.solution.check(&result.problem);
            r.check("LP certificate valid", "valid", cert.clone().err().unwrap_or_else(|| "valid".into()), cert.is_ok());
            Ok((r, ball.output))
        }
        Command::Folner { ball, dump_lp } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let b = build(&loaded, &ball)?;
            let f = folner_lp_bound(&b, 2, ball.budgets.lp()?)?;
            if let Some(p) = &f.problem {
                dump(&dump_lp, p)?;
            }
            let mut r = loaded.report("folner").with_radius(Some(ball.radius));
            r.set_value(&Extended::Finite(f.value.clone()));
            r.witness_chain = Some(f.chain.to_literal());
            r.detail("from_kernel", f.from_kernel);
            if let (Some(p), Some(s)) = (&f.problem, &f.solution) {
                let cert = s.check(p);
                r.check("LP certificate valid", "valid", cert.clone().err().unwrap_or_else(|| "valid".into()), cert.is_ok());
            }
            Ok((r, ball.output))
        }
        Command::Iso { ball, cocycle, seed, dump_lp } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let b = build(&loaded, &ball)?;
            let alpha = match cocycle {
                CocycleKind::Area => area_cocycle(loaded.presentation()),
                CocycleKind::Random => random_unit_cocycle(&b, false, &mut ChaCha8Rng::seed_from_u64(seed))?,
            };
            let cert = iso_constant(&b, &alpha, ball.budgets.lp()?)?;
            dump(&dump_lp, &cert.problem)?;
            let mut r = loaded.with_header(cert.report("iso"));
            r.detail("cocycle", format!("{cocycle:?}").to_lowercase());
            if cocycle == CocycleKind::Random {
                r.detail("seed", seed);
            }
            if loaded.oracle == WordOracle::DehnReduction && cocycle == CocycleKind::Area {
                if let Some(bound) = dehn_filling_constant(loaded.presentation(), &qi(1)) {
                    r.check_at_most("within the Dehn filling constant", &bound, &cert.lambda);
                }
            }
            Ok((r, ball.output))
        }
        Command::Johnson { ball } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let b = build(&loaded, &ball)?;
            let j = johnson_check(&b)?;
            Ok((loaded.with_header(j.report()), ball.output))
        }
        Command::Mean { input, action, trials, seed, output } => {
            let loaded = load(&input.input, input.oracle.as_deref())?;
            let actions = action
                .iter()
                .map(|a| SignedPermutation::parse(a).ok_or_else(|| CliError::Input(format!("`{a}` is not a signed permutation"))))
                .collect::<Result<Vec<_>, _>>()?;
            let m = mean_retraction_check(loaded.presentation(), loaded.oracle, &actions, trials, seed)?;
            Ok((loaded.with_header(m.report()), output))
        }
        Command::Witness { n, k, base, oracle, budgets, output } => {
            let loaded = load(&base, oracle.as_deref())?;
            let lp = budgets.lp()?;
            let b = build_ball_with_budget(loaded.presentation(), k, loaded.oracle, budgets.vertex_budget)?;
            let w = product_witness(n, k, &b, lp)?;
            Ok((loaded.with_header(w.report()), output))
        }
        Command::Cusped { ball, depth } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let c = build_cusped(&loaded, &ball, depth)?;
            let mut r = loaded.report("cusped").with_radius(Some(ball.radius));
            r.detail("depth", depth);
            r.detail("cell_counts", cell_counts(&c));
            r.detail("cosets", c.coset_count());
            r.detail("horoball_vertices", c.horo_vertices().len());
            let dd = check_boundary_squared(&c);
            r.check("boundary squared vanishes", "0", dd.map_or_else(|(d, i)| format!("{d}-cell {i}"), |_| "0".into()), dd.is_ok());
            let bound = loaded.presentation().max_relator_length().max(5);
            let worst = (0..c.cell_count(2))
                .map(|f| c.cell_boundary(2, f).iter().map(|(_, s)| s.unsigned_abs() as usize).sum::<usize>())
                .max()
                .unwrap_or(0);
            r.check("uniform boundary norm", format!("<= {bound}"), worst, worst <= bound);
            let spanning = (1..=2)
                .flat_map(|d| (0..c.cell_count(d)).map(move |f| (d, f)))
                .filter(|&(d, f)| c.is_horoball(d, f))
                .filter(|&(d, f)| {
                    let mut owners = c.cell_vertices(d, f).into_iter().filter_map(|v| c.vertex_coset(v));
                    let first = owners.next();
                    owners.any(|o| Some(o) != first)
                })
                .count();
            r.check("horoballs disjoint", 0, spanning, spanning == 0);
            let labels = orbit_labels(&c, 2, true);
            r.detail("non_horoball_2_orbits", labels.len());
            Ok((r, ball.output))
        }
        Command::Sample { ball, depth, samples, seed } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let lp = ball.budgets.lp()?;
            let mut r = match depth {
                Some(d) => {
                    let c = build_cusped(&loaded, &ball, d)?;
                    let mut r = strong_vanishing_sample(&c, true, samples, seed, &[], lp)?.report();
                    r.detail("depth", d);
                    r
                }
                None => {
                    let b = build(&loaded, &ball)?;
                    strong_vanishing_sample(&b, false, samples, seed, &[], lp)?.report()
                }
            };
            r = loaded.with_header(r).with_radius(Some(ball.radius));
            Ok((r, ball.output))
        }
        Command::Horoprobe { ball, depth } => {
            let loaded = load(&ball.input.input, ball.input.oracle.as_deref())?;
            let c = build_cusped(&loaded, &ball, depth)?;
            let probe = horoball_iso_probe(&c, ball.budgets.lp()?)?;
            let mut r = loaded.with_header(probe.report()).with_radius(Some(ball.radius));
            let (fill_ok, total) = horoball_loops_fill_relatively(&c, ball.budgets.lp()?)?;
            r.check("horoball loops have zero relative fill", total, fill_ok, fill_ok == total);
            Ok((r, ball.output))
        }
        Command::Validate { input, output } => {
            let loaded = load(&input.input, input.oracle.as_deref())?;
            let p = loaded.presentation();
            let mut r = loaded.report("validate");
            r.detail("generators", p.generators().to_vec());
            r.detail("relators", p.relators().iter().map(|w| p.render_word(w)).collect::<Vec<_>>());
            r.detail("peripherals", loaded.relative.peripherals().len());
            let prepared = PreparedOracle::new(loaded.oracle, p);
            let complete = prepared.as_ref().map(|o| o.is_complete()).unwrap_or(false);
            r.check("oracle applies", "ok", prepared.as_ref().err().map_or("ok".into(), |e| e.to_string()), prepared.is_ok());
            r.detail("oracle_complete", complete);
            Ok((r, output))
        }
    }
}

/// `(loops with zero relative fill, loops)` over depth-1 rectangles of every
/// horoball.
fn horoball_loops_fill_relatively(c: &CuspedBall, budget: LpBudget) -> Result<(usize, usize), CliError> {
    let (mut ok, mut total) = (0, 0);
    if c.depth_limit() < 2 {
        return Ok((0, 0));
    }
    for coset in 0..c.coset_count() {
        let m = c.coset_members(coset).len();
        for j in 0..m {
            for j2 in j + 1..m {
                let steps = [
                    c.horo_edge(coset, (j, 1), (j2, 1)),
                    c.horo_edge(coset, (j2, 1), (j2, 2)),
                    c.horo_edge(coset, (j2, 2), (j, 2)),
                    c.horo_edge(coset, (j, 2), (j, 1)),
                ];
                let Some(steps) = steps.into_iter().collect::<Option<Vec<_>>>() else { continue };
                let b = SparseChain::from_entries(1, steps.into_iter().map(|(e, s)| (e, qi(s))));
                let fill = relative_fill_norm(c, &b, budget)?;
                total += 1;
                if fill.fill.value == Extended::Finite(qi(0)) {
                    ok += 1;
                }
            }
        }
    }
    Ok((ok, total))
}

fn emit(report: &CertificateReport, output: &Output) -> Result<(), CliError> {
    let mut text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string())),
    }
}

/// Parses `argv` (program name first), runs one subcommand, and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command).and_then(|(report, output)| emit(&report, &output).map(|_| report)) {
        Ok(report) if report.passed() => EXIT_OK,
        Ok(_) => EXIT_ASSERTION,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
