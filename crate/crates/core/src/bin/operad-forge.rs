use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use operad_forge::condensation::{nor_breq, tot_column};
use operad_forge::homology::Complex;
use operad_forge::scalar::ScalarKind;
use operad_forge::seq::enumerate_configs;
use operad_forge::verify::{self, Bounds, Suite};
use operad_forge::{Config, Disk2, Error};

#[derive(Parser)]
#[command(
    name = "operad-forge",
    version,
    about = "Configurations, brace complexes and their verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// List all configurations on a disk with given colors, in canonical order.
    Enumerate {
        /// Column heights, e.g. `2,1`.
        #[arg(long)]
        disk: Disk2,
        /// Color lengths ℓ_ν of the balls in lexicographic order, e.g. `0,1`.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        /// Output ordinal: W takes values in `[0, out]`.
        #[arg(long, default_value_t = 0)]
        out: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cohomology of the normalised brace complex, or of one column of the
    /// condensation, on the window `[−d, 0]`.
    Homology {
        #[arg(long)]
        disk: Disk2,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Use the column complex at this output length instead.
        #[arg(long)]
        column: Option<usize>,
        /// With `--column`, keep degenerate configurations.
        #[arg(long, requires = "column")]
        plain: bool,
        /// Also emit the bases and differentials.
        #[arg(long)]
        dump: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Bound on |J|, the length of the output ordinal.
        #[arg(long)]
        max_out: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Record wall time per check.
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Bounds used when a flag is omitted.
fn default_bounds(suite: Suite) -> (usize, usize, usize) {
    match suite {
        Suite::SeqAxioms => (3, 2, 2),
        Suite::Whiskering => (3, 2, 3),
        Suite::Contractibility => (4, 4, 1),
        Suite::Column => (3, 3, 3),
        Suite::Hochschild => (5, 4, 1),
        Suite::Phi => (4, 4, 1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scalar = match ScalarKind::from_env() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, scalar) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, scalar: ScalarKind) -> Result<bool, Error> {
    match command {
        Command::Enumerate {
            disk,
            degrees,
            out,
            format,
        } => {
            if degrees.len() != disk.num_balls() {
                return Err(Error::Shape(format!(
                    "{disk} has {} balls but {} degrees were given",
                    disk.num_balls(),
                    degrees.len()
                )));
            }
            let configs = enumerate_configs(&disk, &degrees, out);
            match format {
                Format::Json => {
                    print_json(&Value::Array(configs.iter().map(Config::to_json).collect()))
                }
                Format::Tsv => {
                    println!("index\tdegree\tconfig");
                    for (i, c) in configs.iter().enumerate() {
                        println!("{}\t{}\t{}", i + 1, c.degree(), c.label());
                    }
                }
            }
            Ok(true)
        }
        Command::Homology {
            disk,
            max_degree,
            column,
            plain,
            dump,
            format,
        } => {
            let complex = match column {
                Some(l) => tot_column(&disk, l, max_degree, !plain)?,
                None => nor_breq(&disk, max_degree)?,
            };
            let window = -(max_degree as i32)..=0;
            let betti = complex.betti(window.clone(), scalar)?;
            if scalar == ScalarKind::Fp32003 {
                let q = complex.betti(window, ScalarKind::Rational)?;
                if q != betti {
                    return Err(Error::Shape(format!(
                        "prime-field Betti numbers {betti:?} disagree with rational {q:?}"
                    )));
                }
            }
            match format {
                Format::Json => {
                    let mut v = json!({
                        "disk": disk.to_json(),
                        "column": column,
                        "normalised": !plain,
                        "betti": betti.iter().rev().map(|(q, b)| json!({ "degree": q, "dim": complex.dim(*q), "betti": b })).collect::<Vec<_>>(),
                    });
                    if dump {
                        v["complex"] = dump_complex(&complex);
                    }
                    print_json(&v);
                }
                Format::Tsv => {
                    println!("degree\tdim\tbetti");
                    for (q, b) in betti.iter().rev() {
                        println!("{q}\t{}\t{b}", complex.dim(*q));
                    }
                }
            }
            Ok(true)
        }
        Command::Verify {
            suite,
            max_size,
            max_degree,
            max_out,
            threads,
            timings,
            format,
        } => {
            let (s, d, o) = default_bounds(suite);
            let mut bounds = Bounds::new(
                max_size.unwrap_or(s),
                max_degree.unwrap_or(d),
                max_out.unwrap_or(o),
            );
            bounds.scalar = scalar;
            bounds.timings = timings;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| Error::Shape(format!("thread pool: {e}")))?;
            let report = pool.install(|| verify::run(suite, &bounds));
            match format {
                Format::Json => print_json(&report.to_json()),
                Format::Tsv => {
                    println!("check\tstatus\tcases");
                    for c in &report.checks {
                        println!(
                            "{}\t{}\t{}",
                            c.name,
                            if c.passed() { "pass" } else { "fail" },
                            c.cases
                        );
                    }
                }
            }
            Ok(report.passed())
        }
    }
}

fn dump_complex(c: &Complex<Config>) -> Value {
    c.to_json(Config::to_json)
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialise")
    );
}
