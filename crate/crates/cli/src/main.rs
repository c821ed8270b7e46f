use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ortho_core::certificate::{produce, verify, Request};
use ortho_core::colouring::{omega_colouring, sylvester_clique};
use ortho_core::families::lift_to_omega;
use ortho_core::{Canon, Envelope, Error, Evidence, FamilyKind, GraphKind, SearchConfig, VertexWord};

/// Exact experiments on the orthogonality graphs Ω_n.
#[derive(Parser)]
#[command(name = "ortho-lab", version)]
struct Cli {
    /// Write the certificate here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the search.
    #[arg(long, global = true, env = "ORTHO_LAB_JOBS", default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Graph {
    Omega,
    Y,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonArg {
    Clear,
    Set,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Galliard,
    OddSmall,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct ColourMode {
    /// Emit the Sylvester clique of order 2^K instead.
    #[arg(long, value_name = "K")]
    clique: Option<u32>,
    /// Emit the recursive Ψ colouring of Ψ_{2^K}.
    #[arg(long, value_name = "K")]
    psi: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Ratio bound for Ω_n or Y_n.
    Bound {
        #[arg(long, value_enum, default_value = "omega")]
        graph: Graph,
        #[arg(long)]
        n: u32,
    },
    /// Gram identities and the NᵀN spectrum (n in 8, 12, 16).
    Spectrum {
        #[arg(long)]
        n: u32,
    },
    /// Exhaustive search for tight independent sets of Y_n (n in 4, 8, 16).
    Search {
        #[arg(long)]
        n: u32,
        /// Base vertex as lowercase hex.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value = "clear")]
        canon: CanonArg,
    },
    /// Proper n-colouring of Ω_n, a Sylvester clique, or a Ψ colouring.
    Colour {
        #[arg(long, required_unless_present_any = ["clique", "psi"])]
        n: Option<u32>,
        #[command(flatten)]
        mode: ColourMode,
    },
    /// Explicit independent-set families.
    Families {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: u32,
        /// Emit the lift of the family to Ω_n as an independent-set certificate.
        #[arg(long)]
        lift: bool,
    },
    /// Vertex, edge and ratio table of Ψ_n against Ω_n for n = 1, 2, …, 2^K.
    Psi {
        #[arg(long)]
        k: u32,
    },
    /// Verdict on χ(Ω_n) versus n.
    Status {
        #[arg(long)]
        n: u32,
    },
    /// Recompute a certificate and compare.
    Verify { file: PathBuf },
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn request(command: &Command, evidence: &Evidence) -> Result<Request, Failure> {
    Ok(match *command {
        Command::Bound { graph, n } => Request::Bound(match graph {
            Graph::Omega => GraphKind::Omega(n),
            Graph::Y => GraphKind::Y(n),
            Graph::Psi => return Err(Failure::Usage("no ratio bound for Psi".into())),
        }),
        Command::Spectrum { n } => Request::Spectrum(n),
        Command::Search { n, ref base, canon } => {
            let canon = match canon {
                CanonArg::Clear => Canon::Clear,
                CanonArg::Set => Canon::Set,
            };
            let mut cfg = SearchConfig::new(n)?.with_canon(canon);
            if let Some(hex) = base {
                cfg = cfg.with_base(VertexWord::from_hex(hex, n)?);
            }
            Request::Search(cfg.with_jobs(evidence.jobs()))
        }
        Command::Colour { n, ref mode } => match (n, mode.clique, mode.psi) {
            (_, Some(k), _) => {
                let c = sylvester_clique(k)?;
                Request::Clique { n: c.n, vertices: c.vertices }
            }
            (_, _, Some(k)) => Request::PsiColouring(k),
            (Some(n), None, None) => Request::Colouring {
                kind: GraphKind::Omega(n),
                classes: omega_colouring(n, evidence)?.classes,
            },
            (None, None, None) => unreachable!("clap requires --n"),
        },
        Command::Families { family, n, lift } => {
            let kind = match family {
                Family::Galliard => FamilyKind::Galliard,
                Family::OddSmall => FamilyKind::OddSmall,
            };
            if !lift {
                return Ok(Request::Family(kind, n));
            }
            let report = match kind {
                FamilyKind::Galliard => ortho_core::families::galliard_family(n)?,
                FamilyKind::OddSmall => {
                    return Err(Failure::Usage("odd-small is already a set of Omega_n".into()))
                }
            };
            let members = report
                .members
                .ok_or_else(|| Failure::Usage("family too large to list".into()))?;
            let lifted = lift_to_omega(n, &members)?;
            Request::IndSet {
                kind: lifted.kind,
                canon: lifted.canon,
                base: lifted.base,
                vertices: lifted.vertices,
            }
        }
        Command::Psi { k } => Request::PsiTable(k),
        Command::Status { n } => Request::Status(n),
        Command::Verify { .. } => unreachable!("handled separately"),
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let evidence = Evidence::new(cli.jobs);
    if let Command::Verify { file } = &cli.command {
        let text = std::fs::read_to_string(file)
            .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
        let report = verify(&text, &evidence)?;
        emit(
            &serde_json::to_string(&report).expect("report is plain data"),
            cli.out.as_ref(),
        )?;
        return if report.ok { Ok(()) } else { Err(Failure::Mismatch) };
    }
    let envelope: Envelope = produce(&request(&cli.command, &evidence)?, &evidence)?;
    emit(&envelope.to_canonical_json(), cli.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("ortho-lab: {msg}");
            ExitCode::from(2)
        }
    }
}
