//! `toric`: analyze complete smooth fans in a rank-2 lattice.
//!
//! Exit codes: 0 success, 1 user error (bad fan file, bad flags), 2 internal
//! invariant violation (a configuration that would falsify a theorem; the
//! offending fan is dumped).

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toric::divisor::{cohomology, picard, DivisorClass, Picard, TorusDivisor};
use toric::fan::io::{parse_fan_text, render_fan_text};
use toric::fan::{census, CensusFilter, Fan};
use toric::knum::{
    braid_relation_check, euler, euler_gram, exceptional_presentation, twist_matrix, KClass,
};
use toric::neg2::{chain_decomposition, minus_two_set, separation_identity_search};
use toric::report::{analyze, render_structured, render_text};
use toric::Coord;

#[derive(Parser)]
#[command(name = "toric", version, about = "Exact analyzer for smooth complete rank-2 fans")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a fan file is a valid complete smooth fan.
    Validate(FileArg),
    /// Full autoequivalence structure report.
    Analyze {
        #[command(flatten)]
        file: FileArg,
        /// Output format: text or structured.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Picard lattice: rank, basis, intersection matrix, ray classes.
    Pic(FileArg),
    /// Cohomology dimensions of a line bundle.
    Cohomology {
        #[command(flatten)]
        file: FileArg,
        /// Divisor: comma-separated coefficients in ray order, or `pic:`
        /// followed by coordinates in the Picard basis.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// K-lattice data: Euler pairing, twist matrices, braid checks.
    Ktheory {
        #[command(flatten)]
        file: FileArg,
        /// Euler pairing of two classes `r,det...,chi`.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        euler: Option<Vec<String>>,
        /// Print the twist matrix of a class `r,det...,chi`.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
        /// Exceptional presentation of O_C(a) for `C,a` (1-based ray index).
        #[arg(long, allow_hyphen_values = true)]
        presentation: Option<String>,
    },
    /// Enumerate fans up to equivalence.
    Census {
        #[arg(long)]
        max_rays: usize,
        #[arg(long)]
        bound: Coord,
        /// Keep only fans with ample anticanonical class.
        #[arg(long)]
        fano: bool,
    },
    /// Print a standard fan.
    Construct {
        /// The projective plane.
        #[arg(long, group = "kind")]
        projective_plane: bool,
        /// The n-th Hirzebruch surface.
        #[arg(long, group = "kind")]
        hirzebruch: Option<u32>,
        /// A fan with the given -2-chain lengths, comma-separated.
        #[arg(long, group = "kind")]
        chains: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blow down to a minimal model and print the replayable trace.
    MinimalModel(FileArg),
    /// Brute-force the two-chain holonomy identity (expected: no solutions).
    SeparationSearch {
        #[arg(long)]
        alpha_bound: Coord,
        #[arg(long)]
        length_bound: u32,
    },
}

#[derive(Args)]
struct FileArg {
    /// Fan file: one ray per line as two integers, counterclockwise.
    file: PathBuf,
}

enum CliError {
    User(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::User(m) | CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

fn user<E: fmt::Display>(e: E) -> CliError {
    CliError::User(e.to_string())
}

fn load_fan(path: &Path) -> Result<Fan, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("cannot read {}: {e}", path.display())))?;
    parse_fan_text(&text).map_err(|e| CliError::User(format!("{}: {e}", path.display())))
}

fn parse_divisor(spec: &str, fan: &Fan, pic: &Picard) -> Result<TorusDivisor, CliError> {
    let parse_list = |s: &str| -> Result<Vec<Coord>, CliError> {
        s.split(',')
            .map(|t| t.trim().parse::<Coord>().map_err(|_| user(format!("bad integer `{t}`"))))
            .collect()
    };
    if let Some(rest) = spec.strip_prefix("pic:") {
        let coords = parse_list(rest)?;
        if coords.len() != pic.rank() {
            return Err(user(format!(
                "expected {} basis coordinates, got {}",
                pic.rank(),
                coords.len()
            )));
        }
        Ok(pic.lift(&DivisorClass::new(coords)))
    } else {
        let coeffs = parse_list(spec)?;
        if coeffs.len() != fan.ray_count() {
            return Err(user(format!(
                "expected {} ray coefficients, got {}",
                fan.ray_count(),
                coeffs.len()
            )));
        }
        Ok(TorusDivisor::new(coeffs))
    }
}

fn parse_kclass(spec: &str, pic: &Picard) -> Result<KClass, CliError> {
    let coords: Result<Vec<Coord>, CliError> = spec
        .split(',')
        .map(|t| t.trim().parse::<Coord>().map_err(|_| user(format!("bad integer `{t}`"))))
        .collect();
    let coords = coords?;
    if coords.len() != pic.rank() + 2 {
        return Err(user(format!(
            "a class has {} coordinates (rank, det..., chi), got {}",
            pic.rank() + 2,
            coords.len()
        )));
    }
    Ok(KClass::from_coords(&coords))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Validate(arg) => {
            let fan = load_fan(&arg.file)?;
            println!("valid fan with {} rays", fan.ray_count());
            println!("self-intersections: {:?}", fan.self_intersections());
            if !fan.holonomy().is_identity() {
                return Err(CliError::Internal(format!(
                    "internal invariant violated: holonomy is not the identity\noffending fan:\n{}",
                    render_fan_text(&fan)
                )));
            }
            Ok(())
        }
        Cmd::Analyze { file, format } => {
            let fan = load_fan(&file.file)?;
            let report = analyze(&fan).map_err(|e| CliError::Internal(e.to_string()))?;
            match format.as_str() {
                "text" => print!("{}", render_text(&report)),
                "structured" => print!("{}", render_structured(&report)),
                other => return Err(user(format!("unknown format `{other}`"))),
            }
            Ok(())
        }
        Cmd::Pic(arg) => {
            let fan = load_fan(&arg.file)?;
            let pic = picard(&fan);
            println!("rank: {}", pic.rank());
            println!(
                "basis: {}",
                pic.basis_rays()
                    .iter()
                    .map(|&i| format!("D_{}", i + 1))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            println!("intersection matrix (rows, basis order):");
            let q = pic.intersection_matrix();
            for i in 0..pic.rank() {
                let row: Vec<String> = (0..pic.rank()).map(|j| q[(i, j)].to_string()).collect();
                println!("  {}", row.join(" "));
            }
            println!("ray classes:");
            for i in 0..fan.ray_count() {
                println!(
                    "  D_{} = pic:{}",
                    i + 1,
                    pic.ray_class(i)
                        .coords
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
            let k = pic.canonical_class();
            println!(
                "K = pic:{}  (K.K = {})",
                k.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                pic.pair(&k, &k)
            );
            Ok(())
        }
        Cmd::Cohomology { file, divisor } => {
            let fan = load_fan(&file.file)?;
            let pic = picard(&fan);
            let td = parse_divisor(&divisor, &fan, &pic)?;
            let (h0, h1, h2) = cohomology(&fan, &td);
            println!("h0: {h0}");
            println!("h1: {h1}");
            println!("h2: {h2}");
            println!("chi: {}", h0 as i64 - h1 as i64 + h2 as i64);
            Ok(())
        }
        Cmd::Ktheory { file, euler: euler_args, twist, presentation } => {
            let fan = load_fan(&file.file)?;
            let pic = picard(&fan);
            if let Some(args) = euler_args {
                let x = parse_kclass(&args[0], &pic)?;
                let y = parse_kclass(&args[1], &pic)?;
                println!("euler(x, y) = {}", euler(&pic, &x, &y));
                println!("euler(y, x) = {}", euler(&pic, &y, &x));
                return Ok(());
            }
            if let Some(spec) = twist {
                let s = parse_kclass(&spec, &pic)?;
                let t = twist_matrix(&pic, &s);
                println!("twist matrix (row-major, dimension {}):", pic.rank() + 2);
                for i in 0..t.mat.rows() {
                    let row: Vec<String> =
                        (0..t.mat.cols()).map(|j| t.mat[(i, j)].to_string()).collect();
                    println!("  {}", row.join(" "));
                }
                return Ok(());
            }
            if let Some(spec) = presentation {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 2 {
                    return Err(user("expected `C,a` with a 1-based ray index"));
                }
                let c: usize = parts[0].trim().parse().map_err(|_| user("bad ray index"))?;
                let a: Coord = parts[1].trim().parse().map_err(|_| user("bad twist degree"))?;
                if c == 0 || c > fan.ray_count() {
                    return Err(user("ray index out of range"));
                }
                if fan.alpha(c - 1) != 2 {
                    return Err(user(format!("D_{c} is not a -2-curve")));
                }
                let p = exceptional_presentation(&fan, &pic, c - 1, a)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                let fmt_class = |c: &DivisorClass| {
                    c.coords.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                };
                println!("H  = pic:{}", fmt_class(&p.h));
                println!("E' = pic:{}", fmt_class(&p.e_prime));
                println!("E  = pic:{}", fmt_class(&p.e));
                println!(
                    "S  = {}",
                    p.s.coords().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                );
                return Ok(());
            }
            // Default: lattice summary, Euler Gram matrix, chains and braid checks.
            println!("k-lattice dimension: {}", pic.rank() + 2);
            println!("euler pairing (row-major):");
            let e = euler_gram(&pic);
            for i in 0..e.rows() {
                let row: Vec<String> = (0..e.cols()).map(|j| e[(i, j)].to_string()).collect();
                println!("  {}", row.join(" "));
            }
            let delta = minus_two_set(&fan);
            println!(
                "spherical generators: {}",
                if delta.is_empty() {
                    "none".to_string()
                } else {
                    delta.iter().map(|&i| format!("O_D{}(-1)", i + 1)).collect::<Vec<_>>().join(" ")
                }
            );
            let chains = chain_decomposition(&fan).map_err(|e| CliError::Internal(e.to_string()))?;
            for (i, chain) in chains.chains.iter().enumerate() {
                println!(
                    "chain {} (length {}): braid and commutation relations {}",
                    i + 1,
                    chain.len(),
                    if braid_relation_check(&pic, chain) { "hold" } else { "FAIL" }
                );
            }
            Ok(())
        }
        Cmd::Census { max_rays, bound, fano } => {
            if max_rays < 3 {
                return Err(user("census needs --max-rays >= 3"));
            }
            if bound < 1 {
                return Err(user("census needs --bound >= 1"));
            }
            let filter = if fano { CensusFilter::Fano } else { CensusFilter::All };
            let fans = census(max_rays, bound, filter);
            for f in &fans {
                let rays: Vec<String> =
                    f.rays().iter().map(|r| format!("({},{})", r.x, r.y)).collect();
                println!(
                    "rays={} profile={:?} {}",
                    f.ray_count(),
                    f.self_intersections(),
                    rays.join(" ")
                );
            }
            println!("classes: {}", fans.len());
            Ok(())
        }
        Cmd::Construct { projective_plane, hirzebruch, chains, out } => {
            let fan = if projective_plane {
                toric::fan::projective_plane()
            } else if let Some(n) = hirzebruch {
                toric::fan::hirzebruch(n)
            } else if let Some(spec) = chains {
                let lengths: Result<Vec<u32>, CliError> = spec
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .ok()
                            .filter(|&l| l >= 1)
                            .ok_or_else(|| user(format!("bad chain length `{t}`")))
                    })
                    .collect();
                toric::fan::chain_surface(&lengths?)
            } else {
                return Err(user(
                    "choose one of --projective-plane, --hirzebruch N, --chains L1,L2,...",
                ));
            };
            let text = render_fan_text(&fan);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Cmd::MinimalModel(arg) => {
            let fan = load_fan(&arg.file)?;
            let mm = fan.minimal_model();
            println!("base ({} rays):", mm.base.ray_count());
            print!("{}", render_fan_text(&mm.base));
            println!("trace ({} blow-ups, replay order):", mm.steps.len());
            for s in &mm.steps {
                println!("  insert {} {} at position {}", s.inserted.x, s.inserted.y, s.position + 1);
            }
            if mm.replay() != fan {
                return Err(CliError::Internal(format!(
                    "internal invariant violated: trace replay does not reproduce the fan\noffending fan:\n{}",
                    render_fan_text(&fan)
                )));
            }
            println!("replay: ok");
            Ok(())
        }
        Cmd::SeparationSearch { alpha_bound, length_bound } => {
            if alpha_bound < 1 || length_bound < 1 {
                return Err(user("bounds must be at least 1"));
            }
            let sols = separation_identity_search(alpha_bound, length_bound);
            for s in &sols {
                println!(
                    "solution: alpha1={} len1={} alpha2={} len2={}",
                    s.alpha1, s.len1, s.alpha2, s.len2
                );
            }
            println!("solutions: {}", sols.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CliError::User(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // A panic is an internal invariant violation by contract.
        Err(_) => ExitCode::from(2),
    }
}
