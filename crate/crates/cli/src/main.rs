use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use gacf::multivector::format_real;
use gacf::{emit_table, load_frame, parse_matrix_file, parse_mv, reciprocal_frame, selftest};
use gacf::{Error, Frame, Outermorphism, ProductKind};

/// Geometric algebra over coordinate frames.
#[derive(Parser)]
#[command(name = "gacf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the kind of a frame's metric.
    Classify {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Write the product table of all basis blades as CSV.
    Table {
        #[arg(long)]
        frame: PathBuf,
        /// gp, op, sp, lcont, rcont, fatdot, hip, cp, acp or rp
        #[arg(long, value_parser = parse_product)]
        product: ProductKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an expression and print the result.
    Eval {
        #[arg(long)]
        frame: PathBuf,
        expr: String,
    },
    /// Print the reciprocal metric and reciprocal basis vectors.
    Reciprocal {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Outermorphism of a vector map on a frame.
    Om {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[command(subcommand)]
        action: OmAction,
    },
    /// Run the built-in verification suites.
    Selftest {
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OmAction {
    /// Apply the outermorphism to an expression.
    Apply { expr: String },
    /// Print the determinant.
    Det,
    /// Print the matrix of every grade.
    Grades,
}

fn parse_product(s: &str) -> Result<ProductKind, String> {
    ProductKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = ProductKind::ALL.iter().map(|k| k.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn frame(path: &Path) -> Result<Arc<Frame>, Error> {
    load_frame(&read(path)?).map_err(|e| match e {
        Error::Syntax { line, message } => Error::Syntax { line, message: format!("{}: {message}", path.display()) },
        other => other,
    })
}

fn run(cmd: Command, out: &mut impl Write) -> Result<bool, Error> {
    match cmd {
        Command::Classify { frame: path } => {
            writeln!(out, "{}", frame(&path)?.kind())?;
        }
        Command::Table { frame: path, product, out: dest } => {
            let f = frame(&path)?;
            let file = fs::File::create(&dest).map_err(|e| Error::Io(format!("{}: {e}", dest.display())))?;
            let mut w = io::BufWriter::new(file);
            emit_table(&f, product, &mut w)?;
            w.flush()?;
        }
        Command::Eval { frame: path, expr } => {
            writeln!(out, "{}", parse_mv(&expr, &frame(&path)?)?)?;
        }
        Command::Reciprocal { frame: path } => {
            let (recip, vectors) = reciprocal_frame(&frame(&path)?)?;
            write!(out, "{}", recip.ipm())?;
            for (i, v) in vectors.iter().enumerate() {
                writeln!(out, "c{i} = {v}")?;
            }
        }
        Command::Om { frame: path, matrix, action } => {
            let f = frame(&path)?;
            let m = parse_matrix_file(&read(&matrix)?)?;
            let om = Outermorphism::from_vector_matrix(&m, &f, &f)?;
            match action {
                OmAction::Apply { expr } => writeln!(out, "{}", om.apply(&parse_mv(&expr, &f)?)?)?,
                OmAction::Det => writeln!(out, "{}", format_real(om.det()?))?,
                OmAction::Grades => {
                    for (g, mat) in om.grade_matrices().grades().iter().enumerate() {
                        writeln!(out, "grade {g}")?;
                        write!(out, "{mat}")?;
                    }
                }
            }
        }
        Command::Selftest { dim, seed } => {
            let reports = selftest::run(dim, seed);
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            return Ok(reports.iter().all(|r| r.ok()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|ok| {
        out.flush()?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
