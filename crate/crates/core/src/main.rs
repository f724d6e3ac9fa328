//! Command-line surface: `verify`, `fuzz`, and `figure`.
//!
//! Reports go to standard output as canonical JSON; human-readable
//! diagnostics go to standard error. Exit codes: `0` all requested
//! claims hold, `1` at least one claim is violated, `2` degenerate-only
//! failures or an invalid scene, `3` I/O or parse errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use necktie::report::{fuzz_report, verify_report};
use necktie::scalar::{Mersenne61, Rational, Scalar};
use necktie::scene::{SceneError, SceneFile};
use necktie::suite::{
    fuzz, verify_claim, Claim, FieldChoice, FuzzPlan, FuzzReport, Status, SuiteInput, Verdict,
};
use necktie::svg::{parse_layers, render_figure, FigureSpec};

const EXIT_HOLDS: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "necktie",
    version,
    about = "Exact projective verification of cevian-nest concurrency, collinearity, and conic claims"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify claims on a scene file and print a JSON report.
    Verify {
        /// Claim id (for example 1.1, lemma2) or "all".
        #[arg(long)]
        claim: String,
        /// Path to the scene JSON file.
        #[arg(long)]
        scene: PathBuf,
    },
    /// Verify claims on randomized configurations and print a JSON report.
    Fuzz {
        /// Claim id or "all".
        #[arg(long)]
        claim: String,
        /// Number of random configurations per claim.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// Seed of the deterministic generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Coordinates are drawn uniformly from [-bound, bound].
        #[arg(long, default_value_t = 100)]
        bound: i64,
        /// Scalar field: "rational" (exact) or "prime" (fast screen
        /// modulo 2^61 - 1 with automatic rational recheck of failures).
        #[arg(long, default_value = "rational")]
        field: String,
    },
    /// Render a scene to a deterministic SVG figure.
    Figure {
        /// Path to the scene JSON file.
        #[arg(long)]
        scene: PathBuf,
        /// Comma-separated layers: triangle, cevians, conic, w, j, t, g,
        /// v, primed.
        #[arg(long, default_value = "triangle,cevians,w")]
        layers: String,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Move A, B, C, P to a standard affine frame before drawing
        /// (makes any scene drawable in the default chart).
        #[arg(long)]
        normalize: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful output, not
            // usage errors.
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(EXIT_PARSE);
            }
            let _ = e.print();
            return ExitCode::from(EXIT_HOLDS);
        }
    };
    let code = match cli.command {
        Command::Verify { claim, scene } => cmd_verify(&claim, &scene),
        Command::Fuzz {
            claim,
            trials,
            seed,
            bound,
            field,
        } => cmd_fuzz(&claim, trials, seed, bound, &field),
        Command::Figure {
            scene,
            layers,
            out,
            normalize,
        } => cmd_figure(&scene, &layers, &out, normalize),
    };
    ExitCode::from(code)
}

fn parse_claims(spec: &str) -> Result<Vec<Claim>, u8> {
    if spec == "all" {
        return Ok(Claim::ALL.to_vec());
    }
    spec.parse::<Claim>().map(|c| vec![c]).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })
}

fn load_scene(path: &PathBuf) -> Result<SceneFile, u8> {
    let bytes = fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    SceneFile::parse(&bytes).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            SceneError::Parse { .. } => EXIT_PARSE,
            SceneError::Invariant { .. } => EXIT_DEGENERATE,
        }
    })
}

fn instantiate(scene: &SceneFile) -> Result<SuiteInput<Rational>, u8> {
    SuiteInput::<Rational>::from_scene(scene).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            SceneError::Parse { .. } => EXIT_PARSE,
            SceneError::Invariant { .. } => EXIT_DEGENERATE,
        }
    })
}

fn print_stdout(bytes: &[u8]) -> Result<(), u8> {
    std::io::stdout().write_all(bytes).map_err(|e| {
        eprintln!("error: cannot write report: {e}");
        EXIT_PARSE
    })
}

fn cmd_verify(claim_spec: &str, scene_path: &PathBuf) -> u8 {
    let claims = match parse_claims(claim_spec) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let scene = match load_scene(scene_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let input = match instantiate(&scene) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let verdicts: Vec<(Claim, Verdict<Rational>)> = claims
        .iter()
        .map(|&c| (c, verify_claim(c, &input)))
        .collect();
    if let Err(code) = print_stdout(&verify_report(&scene, &verdicts)) {
        return code;
    }
    let mut any_degenerate = false;
    for (claim, verdict) in &verdicts {
        match verdict.status {
            Status::Violated => {
                eprintln!("claim {claim}: violated");
                return EXIT_VIOLATED;
            }
            Status::Degenerate => {
                eprintln!(
                    "claim {claim}: degenerate ({})",
                    verdict.degenerate_step.as_deref().unwrap_or("unknown step")
                );
                any_degenerate = true;
            }
            Status::Holds => {}
        }
    }
    if any_degenerate {
        EXIT_DEGENERATE
    } else {
        EXIT_HOLDS
    }
}

fn cmd_fuzz(claim_spec: &str, trials: u32, seed: u64, bound: i64, field: &str) -> u8 {
    let claim = if claim_spec == "all" {
        None
    } else {
        match claim_spec.parse::<Claim>() {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_PARSE;
            }
        }
    };
    let field = match field {
        "rational" => FieldChoice::Rational,
        "prime" => FieldChoice::Prime,
        other => {
            eprintln!("error: unknown field {other:?} (expected rational or prime)");
            return EXIT_PARSE;
        }
    };
    let plan = FuzzPlan {
        claim,
        trials,
        seed,
        bound,
        field,
    };
    match field {
        FieldChoice::Rational => run_fuzz::<Rational>(&plan),
        FieldChoice::Prime => run_fuzz::<Mersenne61>(&plan),
    }
}

fn run_fuzz<S: Scalar>(plan: &FuzzPlan) -> u8 {
    let report: FuzzReport<S> = match fuzz::<S>(plan) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DEGENERATE;
        }
    };
    if print_stdout(&fuzz_report(&report)).is_err() {
        return EXIT_PARSE;
    }
    let mut short_trials = false;
    for (claim, tally) in &report.claims {
        if tally.violated > 0 {
            eprintln!("claim {claim}: {} violated instance(s)", tally.violated);
            return EXIT_VIOLATED;
        }
        if tally.holds + tally.violated < plan.trials {
            eprintln!(
                "claim {claim}: only {} of {} trials settled (degeneracy resampling exhausted)",
                tally.holds + tally.violated,
                plan.trials
            );
            short_trials = true;
        }
    }
    if short_trials {
        EXIT_DEGENERATE
    } else {
        EXIT_HOLDS
    }
}

fn cmd_figure(scene_path: &PathBuf, layers_spec: &str, out: &PathBuf, normalize: bool) -> u8 {
    let layers = match parse_layers(layers_spec) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let scene = match load_scene(scene_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let input = match instantiate(&scene) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let spec = FigureSpec {
        layers,
        normalize,
        ..FigureSpec::default()
    };
    let bytes = match render_figure(&input, &spec) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DEGENERATE;
        }
    };
    if let Err(e) = fs::write(out, &bytes) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_PARSE;
    }
    EXIT_HOLDS
}
