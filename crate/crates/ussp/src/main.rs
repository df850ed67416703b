use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ussp::commands::{Command, DEFAULT_CAP};
use ussp::corpus;
use ussp::format::{AbSheafDesc, GroupSheafDesc, ModelDesc, SheafDesc, TheoryDesc};
use ussp::instance::InstanceDesc;
use ussp::{execute, parse_instance, render_report, CliError, Format, Kind, Options};

#[derive(Parser)]
#[command(name = "ussp", version, about = "Unstable exact couples, coniveau spectral sequences and torsors on finite models")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Search cap for enumerations (opens, cocycles, sections).
    #[arg(long, global = true, env = "USSP_CAP")]
    cap: Option<usize>,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check an instance against its schema and the engine's axioms.
    Validate(Run),
    /// Pages E_1..E_r of the right couple.
    Pages(Run),
    /// Degeneracy conditions and the second page.
    Collapse(Run),
    /// Gersten property in each degree, with the Gersten terms.
    Gersten(Run),
    /// Cousin complex of an abelian sheaf and its comparison with the Gersten complex.
    Cousin(Run),
    /// Homotopy Cohen–Macaulay conditions of a group sheaf.
    CmCheck(Run),
    /// Isomorphism classes of torsors.
    Torsors(Run),
    /// Double cosets of a group sheaf on a curve-like model.
    Adelic(Run),
    /// Filtered colimits of rows and flags.
    Colimit(Run),
    /// Print a random instance.
    Generate(Generate),
}

#[derive(Args)]
struct Run {
    /// Instance file, `-` for standard input.
    file: String,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    window: Option<Vec<usize>>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    max_page: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tower,
    Model,
    AbSheaf,
    GroupSheaf,
    EmTheory,
}

#[derive(Args)]
struct Generate {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Top codimension of generated models.
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

fn generate(g: &Generate) -> InstanceDesc {
    let mut rng = corpus::rng(g.seed);
    let blank = |kind| InstanceDesc { kind, model: None, tower: None, theory: None, sheaf: None, options: Options::default() };
    if let GenKind::Tower = g.kind {
        return InstanceDesc { tower: Some(corpus::random_tower(&mut rng, 4, 24)), ..blank(Kind::Rees) };
    }
    let m = corpus::random_model(&mut rng, g.dim, 2);
    let model = Some(ModelDesc::describe(&m));
    match g.kind {
        GenKind::Model => InstanceDesc { model, ..blank(Kind::Model) },
        GenKind::AbSheaf => {
            let f = corpus::random_ab_sheaf(&mut rng, &m);
            InstanceDesc { model, sheaf: Some(SheafDesc::Abelian(AbSheafDesc::describe(&f))), ..blank(Kind::Sheaf) }
        }
        GenKind::GroupSheaf => {
            let s = corpus::random_group_sheaf(&mut rng, &m, 24);
            InstanceDesc { model, sheaf: Some(SheafDesc::Group(GroupSheafDesc::describe(&s))), ..blank(Kind::Sheaf) }
        }
        GenKind::EmTheory => {
            let f = corpus::random_ab_sheaf(&mut rng, &m);
            let theory = TheoryDesc::Em { sheaf: AbSheafDesc::describe(&f), level: 1 };
            InstanceDesc { model, theory: Some(theory), ..blank(Kind::Theory) }
        }
        GenKind::Tower => unreachable!("handled above"),
    }
}

fn run(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let (cmd, args) = match &cli.command {
        Sub::Generate(g) => {
            let mut out = serde_json::to_vec_pretty(&generate(g)).expect("instances serialize");
            out.push(b'\n');
            return Ok(out);
        }
        Sub::Validate(a) => (Command::Validate, a),
        Sub::Pages(a) => (Command::Pages, a),
        Sub::Collapse(a) => (Command::Collapse, a),
        Sub::Gersten(a) => (Command::Gersten, a),
        Sub::Cousin(a) => (Command::Cousin, a),
        Sub::CmCheck(a) => (Command::CmCheck, a),
        Sub::Torsors(a) => (Command::Torsors, a),
        Sub::Adelic(a) => (Command::Adelic, a),
        Sub::Colimit(a) => (Command::Colimit, a),
    };
    let start = Instant::now();
    let instance = parse_instance(&args.file)?;
    let over = Options {
        window: args.window.as_ref().map(|w| (w[0], w[1])),
        q: args.q,
        max_page: args.max_page,
        cap: cli.cap,
    };
    let mut report = execute(&instance, cmd, &over)?;
    if report.options.cap.is_none() {
        report.options.cap = Some(DEFAULT_CAP);
    }
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(render_report(&report, cli.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(bytes) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&bytes).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
