//! `xcir` command line tool.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 usage, parse or
//! domain error, 3 numerical warning (output still written), 4 numerical
//! failure.

mod model;
mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use xcir::bondpricing::solve_riccati_default;
use xcir::*;

use model::ModelFile;
use validate::SuiteOptions;

#[derive(Parser)]
#[command(name = "xcir", version, about = "Extended CIR short-rate model: bonds, options, densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-coupon bond price P(0, T) and its affine coefficients.
    PriceBond {
        model: PathBuf,
        #[arg(long)]
        maturity: f64,
    },
    /// European call on a zero-coupon bond.
    PriceOption {
        model: PathBuf,
        #[arg(long)]
        expiry: f64,
        #[arg(long)]
        maturity: f64,
        #[arg(long)]
        strike: f64,
        #[arg(long, value_enum, default_value_t = Method::Laplace)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Density of r(t) on a grid, written as CSV.
    Density {
        model: PathBuf,
        #[arg(long)]
        time: f64,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a validation suite and prints one line per check.
    Validate {
        model: PathBuf,
        suite: String,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Laplace,
    Fourier,
    Mc,
    All,
}

enum Outcome {
    Ok,
    Warning,
    ChecksFailed,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::SolverFailure { .. } | Error::NotConverged { .. } | Error::Resource(_) => 4,
        _ => 2,
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
    if let Some(n) = std::env::var("XCIR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Warning) => ExitCode::from(3),
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::PriceBond { model, maturity } => {
            let m = ModelFile::load(&model)?;
            let p = &m.params;
            if !(maturity > 0.0) {
                return Err(Error::Domain(format!("maturity must be positive, got {maturity}")));
            }
            if maturity > p.horizon {
                return Err(Error::Domain(format!("maturity beyond horizon ({maturity} > {})", p.horizon)));
            }
            let sol = solve_riccati_default(p, maturity)?;
            println!("P = {:.9e}", bond_price(&sol, 0.0, p.r0)?);
            println!("C = {:.9e}", sol.c(0.0));
            println!("A = {:.9e}", sol.a(0.0));
            Ok(Outcome::Ok)
        }
        Command::PriceOption { model, expiry, maturity, strike, method, paths, seed, dt } => {
            let m = ModelFile::load(&model)?;
            let spec = OptionSpec::new(expiry, maturity, strike)?;
            price_option(&m.params, &spec, method, &SimConfig::new(paths, dt, seed)?)
        }
        Command::Density { model, time, grid, out } => {
            let m = ModelFile::load(&model)?;
            let xs = parse_grid(&grid)?;
            let law = Law::new(&m.params, time)?;
            let res = density_from_cf(&law, &xs, DensityConfig::default())?;
            let sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(File::create(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?),
                None => Box::new(io::stdout().lock()),
            };
            write_density(BufWriter::new(sink), &res).map_err(|e| Error::Domain(format!("write failed: {e}")))?;
            eprintln!("mass over grid = {:.9e}", res.mass());
            match &res.warning {
                Some(w) => {
                    eprintln!("warning: {w}");
                    Ok(Outcome::Warning)
                }
                None => Ok(Outcome::Ok),
            }
        }
        Command::Validate { model, suite, paths, seed, dt } => {
            let m = ModelFile::load(&model)?;
            let checks = validate::run(&m, &suite, &SuiteOptions { paths, seed, dt })?;
            let mut all = true;
            for c in &checks {
                all &= c.pass;
                println!(
                    "{} {}: measured {:.4e}, tolerance {:.4e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance
                );
            }
            Ok(if all { Outcome::Ok } else { Outcome::ChecksFailed })
        }
    }
}

fn price_option(p: &Params, spec: &OptionSpec<f64>, method: Method, sim: &SimConfig) -> Result<Outcome> {
    let cfg = InversionConfig::default();
    let mut warned = false;
    let mut prices = Vec::new();
    let mut report = |name: &str, price: OptionPrice<f64>| {
        println!("{name} = {:.9e}", price.price);
        if let Some(d) = &price.diagnostic {
            eprintln!("warning ({name}): {d}");
            warned = true;
        }
        prices.push(price.price);
    };
    if matches!(method, Method::Laplace | Method::All) {
        report("laplace", price_call_laplace(p, spec, &cfg)?);
    }
    if matches!(method, Method::Fourier | Method::All) {
        report("fourier", price_call_fourier(p, spec, &cfg)?);
    }
    if matches!(method, Method::Mc | Method::All) {
        let mc = mc_option_price(p, spec, sim)?;
        println!("mc = {:.9e} (se {:.3e})", mc.value, mc.se);
        prices.push(mc.value);
    }
    if method == Method::All {
        let hi = prices.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = prices.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("max discrepancy = {:.3e}", hi - lo);
    }
    Ok(if warned { Outcome::Warning } else { Outcome::Ok })
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Domain(format!("invalid grid '{spec}': {what}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let xs = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count must be a non-negative integer"))?;
        match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
        }
    } else {
        spec.split(',').filter(|s| !s.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?
    };
    if xs.is_empty() {
        return Err(bad("empty grid"));
    }
    if xs.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(bad("points must be finite and non-negative"));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("points must be strictly increasing"));
    }
    Ok(xs)
}

fn write_density<W: Write>(mut w: W, res: &DensityResult<f64>) -> io::Result<()> {
    writeln!(w, "x,density")?;
    for (x, f) in res.x.iter().zip(&res.density) {
        writeln!(w, "{x},{f:e}")?;
    }
    w.flush()
}
