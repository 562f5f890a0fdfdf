//! Command-line front end: evaluate trigonometric polynomials, search for
//! zeros, emit and recheck certificates, and run the built-in verification
//! suite.
//!
//! Exit codes: 0 on success, 1 when a requested certification fails or comes
//! back inconclusive, 2 on usage or input errors.

mod report;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use zerocert::cert;
use zerocert::charfn::{parse_distribution, DiscreteDistribution};
use zerocert::interval::Box2;
use zerocert::miranda::{certified_margin, certify_miranda, AffineSquareMap};
use zerocert::winding::{winding_number, zero_search, PolyPath};
use zerocert::Verdict;

#[derive(Parser)]
#[command(name = "zerocert", version, about = "Certified zero analysis for trigonometric polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct DistArgs {
    /// Distribution file (JSON: dim, atoms, weights)
    #[arg(long, conflicts_with = "builtin")]
    dist: Option<PathBuf>,
    /// Built-in distribution name (currently: paper-mu)
    #[arg(long)]
    builtin: Option<String>,
}

impl DistArgs {
    fn load(&self) -> Result<DiscreteDistribution> {
        match (&self.dist, &self.builtin) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                parse_distribution(&text).with_context(|| format!("parsing {}", path.display()))
            }
            (None, Some(name)) if name == "paper-mu" => Ok(DiscreteDistribution::builtin_mu()),
            (None, Some(name)) => bail!("unknown builtin {name:?} (try paper-mu)"),
            (None, None) => bail!("one of --dist or --builtin is required"),
            (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the characteristic function at a point
    Eval {
        #[command(flatten)]
        dist: DistArgs,
        /// Comma-separated coordinates, e.g. 3.14,-3.14
        #[arg(long)]
        point: String,
    },
    /// Locate candidate zero clusters in a box
    Zeros {
        #[command(flatten)]
        dist: DistArgs,
        /// Box as XLO,XHI,YLO,YHI
        #[arg(long, value_name = "BOX")]
        r#box: String,
        /// Cluster diameter tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also write an N x N value grid (CSV: x,y,re,im,abs) to --out
        #[arg(long, requires = "out")]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a robust zero inside an affine square via sign conditions
    Miranda {
        #[command(flatten)]
        dist: DistArgs,
        /// Affine map as BASE_X,BASE_Y,UX,UY,VX,VY
        #[arg(long, conflicts_with = "builtin_map")]
        map: Option<String>,
        /// Built-in map name (currently: paper-psi)
        #[arg(long)]
        builtin_map: Option<String>,
        /// Margin to certify; omitted: report the largest certifiable margin
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 14)]
        max_depth: usize,
        /// Write the certificate here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the winding number along a rectangle boundary
    Winding {
        #[command(flatten)]
        dist: DistArgs,
        /// Box as XLO,XHI,YLO,YHI
        #[arg(long, value_name = "BOX")]
        r#box: String,
        #[arg(long, default_value_t = 18)]
        max_depth: usize,
        /// Write the certificate here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full built-in verification suite
    VerifyPaper {
        /// Override the three built-in weights, e.g. 0.34,0.33,0.33
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = 18)]
        max_depth: usize,
        /// Write all produced certificates here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate file without rerunning any search
    Recheck {
        #[arg(long)]
        cert: PathBuf,
    },
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {what}")))
        .collect::<Result<_>>()?;
    if v.len() != n {
        bail!("{what} needs {n} comma-separated numbers, got {}", v.len());
    }
    Ok(v)
}

fn parse_box(s: &str) -> Result<Box2> {
    let v = parse_floats(s, 4, "--box")?;
    Box2::new(v[0], v[1], v[2], v[3]).context("invalid box")
}

fn sci(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_complex(v: num_complex::Complex64) -> String {
    let sign = if v.im.is_sign_negative() { "-" } else { "+" };
    format!("{} {} {}i", sci(v.re), sign, sci(v.im.abs()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = out {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Ok(true): success. Ok(false): ran fine but a certification failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Eval { dist, point } => {
            let d = dist.load()?;
            let coords = parse_floats(&point, d.dim(), "--point")?;
            let v = d.char_poly().eval(&coords)?;
            println!("{}", fmt_complex(v));
            Ok(true)
        }
        Cmd::Zeros { dist, r#box, tol, grid, out } => {
            let d = dist.load()?;
            let p = d.char_poly();
            let b = parse_box(&r#box)?;
            if tol <= 0.0 {
                bail!("--tol must be positive");
            }
            let clusters = zero_search(&p, &b, tol)?;
            if clusters.is_empty() {
                println!("no zeros");
            } else {
                println!("{} cluster(s)", clusters.len());
                for (i, c) in clusters.iter().enumerate() {
                    println!(
                        "cluster {}: center ({}, {}) box [{}, {}] x [{}, {}]",
                        i,
                        sci(c.center()[0]),
                        sci(c.center()[1]),
                        sci(c.x.lo()),
                        sci(c.x.hi()),
                        sci(c.y.lo()),
                        sci(c.y.hi()),
                    );
                }
            }
            if let Some(n) = grid {
                if n < 2 {
                    bail!("--grid needs at least 2 points per axis");
                }
                let mut csv = String::from("x,y,re,im,abs\n");
                for i in 0..n {
                    let x = b.x.lo() + b.x.width() * i as f64 / (n - 1) as f64;
                    for j in 0..n {
                        let y = b.y.lo() + b.y.width() * j as f64 / (n - 1) as f64;
                        let v = p.eval(&[x, y])?;
                        writeln!(csv, "{},{},{},{},{}", sci(x), sci(y), sci(v.re), sci(v.im), sci(v.norm()))
                            .unwrap();
                    }
                }
                write_out(&out, &csv)?;
            }
            Ok(true)
        }
        Cmd::Miranda { dist, map, builtin_map, eps, max_depth, out } => {
            let d = dist.load()?;
            let p = d.char_poly();
            let m = match (&map, &builtin_map) {
                (Some(s), None) => {
                    let v = parse_floats(s, 6, "--map")?;
                    AffineSquareMap::new([v[0], v[1]], [v[2], v[3]], [v[4], v[5]])?
                }
                (None, Some(name)) if name == "paper-psi" => AffineSquareMap::builtin_psi(),
                (None, Some(name)) => bail!("unknown builtin map {name:?} (try paper-psi)"),
                (None, None) => bail!("one of --map or --builtin-map is required"),
                (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
            };
            let margin = match eps {
                Some(e) => e,
                None => {
                    let m = certified_margin(&p, &m, max_depth)?;
                    if m <= 0.0 {
                        println!("INCONCLUSIVE no positive margin certifiable at depth {max_depth}");
                        return Ok(false);
                    }
                    m
                }
            };
            match certify_miranda(&p, &m, margin, max_depth)? {
                Verdict::Certified(c) => {
                    println!("PASS margin {} orientation {}", sci(c.margin), c.orientation.name());
                    write_out(&out, &cert::write_miranda(&p, &c))?;
                    Ok(true)
                }
                Verdict::Inconclusive => {
                    println!("INCONCLUSIVE margin {} at depth {max_depth}", sci(margin));
                    Ok(false)
                }
            }
        }
        Cmd::Winding { dist, r#box, max_depth, out } => {
            let d = dist.load()?;
            let p = d.char_poly();
            let b = parse_box(&r#box)?;
            match winding_number(&p, &PolyPath::rectangle(&b), max_depth)? {
                Verdict::Certified(c) => {
                    println!("winding {} modulus floor {}", c.winding, sci(c.modulus_floor));
                    write_out(&out, &cert::write_winding(&p, &c))?;
                    Ok(true)
                }
                Verdict::Inconclusive => {
                    println!("INCONCLUSIVE at depth {max_depth}");
                    Ok(false)
                }
            }
        }
        Cmd::VerifyPaper { weights, max_depth, out } => {
            let w = match weights {
                None => None,
                Some(s) => {
                    let v = parse_floats(&s, 3, "--weights")?;
                    Some([v[0], v[1], v[2]])
                }
            };
            let rep = report::run(w, max_depth)?;
            print!("{}", rep.render());
            write_out(&out, &rep.certificates)?;
            Ok(rep.all_pass())
        }
        Cmd::Recheck { cert: path } => {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            match cert::recheck_all(&text) {
                Ok(lines) => {
                    for line in &lines {
                        println!("OK {line}");
                    }
                    println!("{} certificate(s) verified", lines.len());
                    Ok(true)
                }
                Err(e) => {
                    println!("FAIL {e}");
                    Ok(false)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
