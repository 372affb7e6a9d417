//! `hull`: command-line front end for the exact 2+1-convex hull.
//!
//! Exit codes: 0 success or member, 1 non-member or failed verification,
//! 2 usage, input or I/O error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rchull::document::{parse_input, ComplexDocument, InputDocument, TraceDocument};
use rchull::kernel::parse_rational;
use rchull::mesh::export_mesh;
use rchull::{pcpp_member, scaffolding, verify_hull, Grid, Hull, PcppVerdict, Point3, Strategy};

#[derive(Parser)]
#[command(name = "hull", version, about = "Exact 2+1-convex hulls of finite point sets in R^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the hull and write it as a JSON complex document.
    Compute {
        /// Input document, or `-` for stdin.
        input: PathBuf,
        /// Complex document destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a (lossy) OBJ surface.
        #[arg(long)]
        mesh: Option<PathBuf>,
        /// Run the verification checks and print them to stderr.
        #[arg(long)]
        report: bool,
        #[arg(long, default_value = "batch")]
        strategy: Strategy,
        /// Also write the full elimination trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Is a point in the hull? Exit 0 if so, 1 if not.
    Member {
        input: PathBuf,
        #[command(flatten)]
        point: PointArg,
    },
    /// Is a point in the shovel outer hull? Prints the witness shovel if not.
    Pcpp {
        input: PathBuf,
        #[command(flatten)]
        point: PointArg,
    },
    /// Print the sizes of the first-order grid.
    Grid { input: PathBuf },
    /// Run the verification checks. Exit 0 iff all pass.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the surviving grid points, a finite set with the same hull.
    Scaffold {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct PointArg {
    /// Exact coordinates: integers, `p/q` or finite decimals.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true, required = true)]
    point: Vec<String>,
}

impl PointArg {
    fn parse(&self) -> Result<Point3, String> {
        let c: Vec<_> = self
            .point
            .iter()
            .map(|t| parse_rational(t).map_err(|e| format!("bad coordinate `{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        let [x, y, z] = <[_; 3]>::try_from(c).expect("clap takes exactly three values");
        Ok(Point3::from_coords(x, y, z))
    }
}

/// Failure carrying its exit code.
struct Failure(u8, String);

fn usage(message: impl ToString) -> Failure {
    Failure(2, message.to_string())
}

fn read_input(path: &Path) -> Result<InputDocument, Failure> {
    let bytes = if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(usage)?;
        buf
    } else {
        fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    parse_input(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(usage),
    }
}

fn status(member: bool) -> u8 {
    if member {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compute {
            input,
            out,
            mesh,
            report,
            strategy,
            trace,
        } => {
            let doc = read_input(&input)?;
            let hull = Hull::compute(&doc.points, strategy).map_err(usage)?;
            emit(out.as_deref(), &ComplexDocument::from_hull(&hull).to_json())?;
            if let Some(p) = mesh {
                emit(Some(&p), &export_mesh(&hull.complex))?;
            }
            if let Some(p) = trace {
                emit(Some(&p), &TraceDocument::from_trace(&hull.trace).to_json())?;
            }
            if report {
                let r = verify_hull(&hull.input, &hull.trace, &hull.complex, 200, 0).map_err(usage)?;
                eprintln!("{r}");
                return Ok(status(r.overall));
            }
            Ok(0)
        }
        Command::Member { input, point } => {
            let doc = read_input(&input)?;
            let p = point.parse().map_err(usage)?;
            let hull = Hull::compute(&doc.points, Strategy::Batch).map_err(usage)?;
            let member = hull.contains(&p);
            println!("member: {member}");
            Ok(status(member))
        }
        Command::Pcpp { input, point } => {
            let doc = read_input(&input)?;
            let p = point.parse().map_err(usage)?;
            match pcpp_member(&doc.points, &p).map_err(usage)? {
                PcppVerdict::Member => {
                    println!("member: true");
                    Ok(0)
                }
                PcppVerdict::Excluded(s) => {
                    println!("member: false");
                    println!("witness: {s}");
                    Ok(1)
                }
            }
        }
        Command::Grid { input } => {
            let doc = read_input(&input)?;
            let g = Grid::build(&doc.points).map_err(usage)?;
            println!(
                "|F|={}, |F¹|={}, |H|={}, |G|={}",
                g.projection().len(),
                g.derived().len(),
                g.heights().len(),
                g.len()
            );
            Ok(0)
        }
        Command::Verify { input, samples, seed } => {
            let doc = read_input(&input)?;
            let hull = Hull::compute(&doc.points, Strategy::Batch).map_err(usage)?;
            let r = verify_hull(&hull.input, &hull.trace, &hull.complex, samples, seed).map_err(usage)?;
            println!("{r}");
            Ok(status(r.overall))
        }
        Command::Scaffold { input, out } => {
            let doc = read_input(&input)?;
            let points = scaffolding(&doc.points).map_err(usage)?;
            emit(out.as_deref(), &InputDocument::from_points(points).to_json())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("hull: {message}");
            ExitCode::from(code)
        }
    }
}
