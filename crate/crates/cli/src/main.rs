use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use merogerm::algebra::Rat;
use merogerm::dmodule::{verify_functional_equation, FeqMode, TwistedModule};
use merogerm::invariants::{self, DEFAULT_ELL_MAX, DEFAULT_LATTICE_DEPTH};
use merogerm::multiplier;
use merogerm::parser::{parse_operator, parse_polynomials, parse_rat, parse_spoly, print_operator};
use merogerm::reports::{self, BsReport, FeqJson, IdealJson, JumpingJson, MultiplierJson, ZetaJson};
use merogerm::resolution::{resolve_pair_with_cap, separate_dicritical, ResolutionData, DEFAULT_BLOWUP_CAP};
use merogerm::{parse_germ, resolution::SCHEMA_VERSION};

/// Singularity invariants of meromorphic plane-curve germs f/g.
#[derive(Parser)]
#[command(name = "merogerm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embedded resolution with dicritical separation.
    Resolve(GermArgs),
    /// lct, convergence strip and candidate sets.
    Invariants {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
        ell_max: u32,
        #[arg(long, default_value_t = DEFAULT_LATTICE_DEPTH)]
        lattice_depth: u32,
        /// Upper end for jumping number candidates.
        #[arg(long, default_value = "2", value_parser = rat)]
        lambda_max: Rat,
    },
    /// The multiplier ideal at one lambda.
    Multiplier {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, value_parser = rat)]
        lambda: Rat,
        /// Truncation degree; chosen from the resolution when omitted.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Jumping numbers and the ideal on each constancy region.
    Jumping {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, value_parser = rat)]
        lambda_max: Rat,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Candidate roots of the Bernstein-Sato polynomial.
    BsCandidates {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
        ell_max: u32,
    },
    /// Candidate poles of the local zeta function.
    ZetaCandidates {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value_t = DEFAULT_LATTICE_DEPTH)]
        lattice_depth: u32,
        #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
        ell_max: u32,
    },
    /// Check a functional equation delta(s) f F = b(s) F exactly.
    VerifyFeq {
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "1")]
        g: String,
        #[arg(long)]
        op: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "0", value_parser = rat)]
        alpha: Rat,
        #[arg(long, value_enum, default_value_t = Mode::Numerator)]
        mode: Mode,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct GermArgs {
    /// The germ, e.g. "(y^3+x^5)/x". Omit when loading --resolution.
    germ: Option<String>,
    /// Load a resolution saved with `resolve --format json --out`.
    #[arg(long, conflicts_with = "germ")]
    resolution: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BLOWUP_CAP)]
    blowup_cap: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Numerator,
    Quotient,
}

fn rat(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn load(args: &GermArgs) -> Result<ResolutionData, Failure> {
    if let Some(path) = &args.resolution {
        let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        let res = ResolutionData::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        if res.schema_version != SCHEMA_VERSION {
            return Err(input_error(format!(
                "{}: schema version {} is not supported",
                path.display(),
                res.schema_version
            )));
        }
        return Ok(res);
    }
    let text = args.germ.as_deref().ok_or_else(|| input_error("a germ or --resolution is required"))?;
    let germ = parse_germ(text).map_err(|e| input_error(format!("germ: {e}")))?;
    let res = resolve_pair_with_cap(&germ, args.blowup_cap).map_err(input_error)?;
    separate_dicritical(res).map_err(input_error)
}

fn emit<T: Serialize>(out: &OutArgs, value: &T, text: impl FnOnce(&T) -> String) -> Result<(), Failure> {
    let body = match out.format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(value),
    };
    match &out.out {
        Some(path) => std::fs::write(path, body).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn degree_or_default(res: &ResolutionData, degree: Option<u32>, lambda: &Rat) -> Result<u32, Failure> {
    match degree {
        Some(0) => Err(input_error("--degree must be at least 1")),
        Some(d) => Ok(d),
        None => Ok(multiplier::default_degree(res, lambda)),
    }
}

fn non_negative(name: &str, l: &Rat) -> Result<(), Failure> {
    if l.is_negative() {
        return Err(input_error(format!("--{name} must be non-negative")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Resolve(args) => {
            let res = load(&args)?;
            match args.out.format {
                Format::Json => {
                    let body = res.to_json() + "\n";
                    match &args.out.out {
                        Some(p) => std::fs::write(p, body).map_err(|e| input_error(format!("{}: {e}", p.display()))),
                        None => {
                            print!("{body}");
                            Ok(())
                        }
                    }
                }
                Format::Text => emit(&args.out, &res, reports::resolution_text),
            }
        }
        Command::Invariants {
            germ,
            ell_max,
            lattice_depth,
            lambda_max,
        } => {
            non_negative("lambda-max", &lambda_max)?;
            let res = load(&germ)?;
            let rep = invariants::report(&res, ell_max, lattice_depth, &lambda_max);
            emit(&germ.out, &rep, reports::invariants_text)
        }
        Command::Multiplier { germ, lambda, degree } => {
            non_negative("lambda", &lambda)?;
            let res = load(&germ)?;
            let d = degree_or_default(&res, degree, &lambda)?;
            let ideal = multiplier::multiplier_ideal(&res, &lambda, d).map_err(input_error)?;
            warn_unstable(ideal.is_stable());
            let rep = MultiplierJson {
                schema_version: SCHEMA_VERSION,
                germ: res.germ.to_string(),
                constraints: multiplier::constraint_vector(&res, &lambda),
                ideal: IdealJson::new(&lambda, (lambda.clone(), None), &ideal, &res.germ.var_refs()),
            };
            emit(&germ.out, &rep, reports::multiplier_text)
        }
        Command::Jumping {
            germ,
            lambda_max,
            degree,
        } => {
            non_negative("lambda-max", &lambda_max)?;
            let res = load(&germ)?;
            let d = degree_or_default(&res, degree, &lambda_max)?;
            let rep = multiplier::jumping_report(&res, &lambda_max, d).map_err(input_error)?;
            for r in &rep.regions {
                warn_unstable(r.ideal.is_stable());
            }
            emit(&germ.out, &JumpingJson::new(&res, &rep), reports::jumping_text)
        }
        Command::BsCandidates { germ, ell_max } => {
            let res = load(&germ)?;
            let rep = BsReport::new(&res, invariants::candidate_bs_roots(&res, ell_max));
            emit(&germ.out, &rep, |r| format!("germ: {}\n{}", r.germ, reports::bs_text(&r.candidates)))
        }
        Command::ZetaCandidates {
            germ,
            lattice_depth,
            ell_max,
        } => {
            let res = load(&germ)?;
            let report = invariants::candidate_zeta_poles(&res, lattice_depth, ell_max).map_err(input_error)?;
            let rep = ZetaJson {
                schema_version: SCHEMA_VERSION,
                germ: res.germ.to_string(),
                report,
            };
            emit(&germ.out, &rep, |r| format!("germ: {}\n{}", r.germ, reports::zeta_text(&r.report)))
        }
        Command::VerifyFeq {
            f,
            g,
            op,
            b,
            alpha,
            mode,
            out,
        } => {
            non_negative("alpha", &alpha)?;
            let (polys, names) = parse_polynomials(&[&f, &g]).map_err(|(i, e)| {
                input_error(format!("--{}: {e}", if i == 0 { "f" } else { "g" }))
            })?;
            let (fp, gp) = (polys[0].clone(), polys[1].clone());
            if fp.is_zero() || gp.is_zero() {
                return Err(input_error("f and g must be nonzero"));
            }
            let delta = parse_operator(&op, &names).map_err(|e| input_error(format!("--op: {e}")))?;
            let bp = parse_spoly(&b).map_err(|e| input_error(format!("--b: {e}")))?;
            let mode = match mode {
                Mode::Numerator => FeqMode::Numerator,
                Mode::Quotient => FeqMode::Quotient,
            };
            let module = TwistedModule::new(fp, gp, alpha);
            let v = verify_functional_equation(&delta, &bp, &module, mode);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let rep = FeqJson::new(&refs, print_operator(&delta, &names), &bp, mode, &v);
            emit(&out, &rep, reports::feq_text)?;
            if v.holds {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    message: "functional equation does not hold".to_string(),
                })
            }
        }
    }
}

fn warn_unstable(stable: Option<bool>) {
    if stable == Some(false) {
        eprintln!("warning: generators changed between truncations D and D+2; raise --degree");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
