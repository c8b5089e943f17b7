use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use nodal_core::census::{certified_count, refine_until_stable, sample_field, GridSpec};
use nodal_core::constructors::{build_three_wave, lemma3_window, torus_eigenfunction};
use nodal_core::criteria::{
    check_independence, check_non_domination, theorem2_check, CriterionParams,
};
use nodal_core::wave::WaveEnsemble;
use nodal_core::Vec2;
use nodal_lab::ensemble::{ensemble_to_json, read_ensemble};
use nodal_lab::report::{to_json, CensusJson, CheckJson, DominationJson, IndependenceJson};
use nodal_lab::scaling::run_scaling;
use nodal_lab::{pgm, LabError};

/// Nodal domains of finite sums of planar cosine waves.
#[derive(Parser)]
#[command(name = "nodal-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f and its gradient at a point.
    Eval {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Plain and certified nodal-domain counts on a disk.
    Census {
        #[command(flatten)]
        grid: GridArgs,
        /// Halve the step from --step until the count settles.
        #[arg(long)]
        refine: bool,
        /// Smallest step tried by --refine.
        #[arg(long, default_value_t = 1e-3)]
        min_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the certified sign field as a PGM image.
    Render {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check support, independence and per-bucket non-domination.
    Check {
        #[arg(long)]
        ensemble: PathBuf,
        #[command(flatten)]
        criteria: CriteriaArgs,
    },
    /// Search for small integer relations among the wavevectors.
    Independence {
        #[arg(long)]
        ensemble: PathBuf,
        #[command(flatten)]
        criteria: CriteriaArgs,
    },
    /// Best signed balance of the amplitudes.
    Domination {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps2: f64,
    },
    /// Three-wave ensemble with a stable compact domain at the origin.
    Lemma3 {
        #[arg(long, value_parser = parse_pair, default_value = "1,0")]
        k1: Vec2,
        #[arg(long, value_parser = parse_pair, default_value = "0,1")]
        k2: Vec2,
        #[arg(long, value_parser = parse_pair, default_value = "0.7071067811865476,0.7071067811865476")]
        k3: Vec2,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        a1: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Torus eigenfunction with wavevectors near the given directions.
    Torus {
        /// Target directions in degrees.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "10,40,75",
            allow_hyphen_values = true
        )]
        degrees: Vec<f64>,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 100_000)]
        m_max: u64,
        #[arg(long, default_value_t = 2)]
        height: u32,
        /// One per direction; defaults to all ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        amplitudes: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phases: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phases_hat: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified counts on growing disks and the fit N = c r^2.
    Scaling {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long)]
        step: Option<f64>,
        /// Write 0 in the seconds column so the CSV is reproducible.
        #[arg(long)]
        no_timing: bool,
        /// Continue when the hypothesis check fails.
        #[arg(long)]
        unchecked: bool,
        #[command(flatten)]
        criteria: CriteriaArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    ensemble: PathBuf,
    /// Stability margin.
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Cell side; defaults to min(0.05, eps / (4 L)).
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    cx: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    cy: f64,
}

#[derive(Args)]
struct CriteriaArgs {
    #[arg(long, default_value_t = 0.1)]
    eps0: f64,
    #[arg(long, default_value_t = 0.15)]
    eps1: f64,
    #[arg(long, default_value_t = 0.01)]
    eps2: f64,
    #[arg(long, default_value_t = 0.01)]
    eps3: f64,
    /// Largest coefficient in the integer relation search.
    #[arg(long, default_value_t = 50)]
    height: u32,
    /// Time budget of the covering estimate.
    #[arg(long, default_value_t = 1e4)]
    orbit_budget: f64,
}

impl CriteriaArgs {
    fn params(&self) -> Result<CriterionParams, LabError> {
        Ok(CriterionParams::new(
            self.eps0,
            self.eps1,
            self.eps2,
            self.eps3,
            self.height,
            self.orbit_budget,
        )?)
    }
}

fn parse_pair(s: &str) -> Result<Vec2, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Vec2::new(x, y))
}

fn auto_step(eps: f64, e: &WaveEnsemble) -> f64 {
    let l = e.lipschitz_bound();
    if l > 0.0 {
        0.05f64.min(eps / (4.0 * l))
    } else {
        0.05
    }
}

impl GridArgs {
    fn load(&self) -> Result<(WaveEnsemble, GridSpec), LabError> {
        let e = read_ensemble(&self.ensemble)?;
        let step = self.step.unwrap_or_else(|| auto_step(self.eps, &e));
        let spec = GridSpec::new(Vec2::new(self.cx, self.cy), self.radius, step)?;
        Ok((e, spec))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), LabError> {
    match out {
        Some(path) => {
            fs::write(path, format!("{}\n", text.trim_end())).map_err(|e| LabError::IoFailure {
                path: path.into(),
                source: e,
            })
        }
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, LabError> {
    match cli.command {
        Command::Eval { ensemble, x, y } => {
            let e = read_ensemble(&ensemble)?;
            let p = Vec2::new(x, y);
            let g = e.gradient(p);
            println!("f = {}", e.evaluate(p));
            println!("grad = ({}, {})", g.x, g.y);
        }
        Command::Census {
            grid,
            refine,
            min_step,
            out,
        } => {
            let (e, spec) = grid.load()?;
            let json = if refine {
                let r = refine_until_stable(
                    &e,
                    spec.center,
                    spec.half_width,
                    grid.eps,
                    spec.step,
                    min_step,
                )?;
                CensusJson::from(&r)
            } else {
                CensusJson::from(&certified_count(&e, &spec, grid.eps)?)
            };
            emit(out.as_deref(), &to_json(&json))?;
        }
        Command::Render { grid, out } => {
            let (e, spec) = grid.load()?;
            let field = sample_field(&e, &spec, grid.eps)?;
            pgm::write_field(&out, &field)?;
            eprintln!("wrote {} ({1}x{1} cells)", out.display(), field.side());
        }
        Command::Check { ensemble, criteria } => {
            let report = theorem2_check(&read_ensemble(&ensemble)?, &criteria.params()?)?;
            println!("{}", to_json(&CheckJson::from(&report)));
            if !report.passed {
                for f in report.failures() {
                    eprintln!("{f}");
                }
                return Ok(ExitCode::from(1));
            }
        }
        Command::Independence { ensemble, criteria } => {
            let e = read_ensemble(&ensemble)?;
            let v = check_independence(&e.wavevectors(), &criteria.params()?)?;
            println!("{}", to_json(&IndependenceJson::from(&v)));
        }
        Command::Domination { ensemble, eps2 } => {
            let e = read_ensemble(&ensemble)?;
            let v = check_non_domination(&e.amplitudes(), eps2)?;
            println!("{}", to_json(&DominationJson::from(&v)));
        }
        Command::Lemma3 {
            k1,
            k2,
            k3,
            epsilon,
            a1,
            out,
        } => {
            let w = lemma3_window(k1, k2, k3, epsilon / 2.0)?;
            let e = build_three_wave(k1, k2, k3, epsilon, a1)?;
            eprintln!("order      {:?}", w.order);
            eprintln!("lambda'    {}", w.lambda_prime);
            eprintln!("mu'        {}", w.mu_prime);
            eprintln!("case       {:?}", w.case);
            eprintln!("gap        {}", a1 * w.epsilon);
            eprintln!(
                "a3 window  [{}, {}]",
                a1 * w.a3_interval.0,
                a1 * w.a3_interval.1
            );
            emit(out.as_deref(), &ensemble_to_json(&e))?;
        }
        Command::Torus {
            degrees,
            eps,
            p,
            m_max,
            height,
            amplitudes,
            phases,
            phases_hat,
            out,
        } => {
            let n = degrees.len();
            let targets: Vec<Vec2> = degrees
                .iter()
                .map(|d| Vec2::from_angle(d.to_radians()))
                .collect();
            let s = torus_eigenfunction(
                &targets,
                eps,
                &amplitudes.unwrap_or_else(|| vec![1.0; n]),
                &phases.unwrap_or_else(|| vec![0.0; n]),
                &phases_hat.unwrap_or_else(|| vec![0.0; n]),
                p,
                m_max,
                height,
            )?;
            for r in &s.rejected {
                eprintln!("m {:>7} rejected, relation {:?}", r.m, r.relation);
            }
            eprintln!("m          {}", s.mode.m());
            eprintln!("vectors    {:?}", s.mode.vectors());
            eprintln!("lambda_p   {}", s.mode.lambda_p());
            eprintln!("eigenvalue {}", s.mode.eigenvalue());
            emit(out.as_deref(), &ensemble_to_json(&s.mode.ensemble()))?;
        }
        Command::Scaling {
            ensemble,
            radii,
            eps,
            step,
            no_timing,
            unchecked,
            criteria,
            out,
        } => {
            let e = read_ensemble(&ensemble)?;
            let report = theorem2_check(&e, &criteria.params()?)?;
            if !report.passed {
                for f in report.failures() {
                    eprintln!("{f}");
                }
                if !unchecked {
                    return Ok(ExitCode::from(1));
                }
                eprintln!("continuing without the hypotheses");
            }
            let step = step.unwrap_or_else(|| auto_step(eps, &e));
            let run = run_scaling(&e, &radii, eps, step, !no_timing)?;
            if let Some(d) = &run.diagnostic {
                eprintln!("{d}");
            }
            eprintln!(
                "fitted_c {} relative_residual {}",
                run.fitted_c, run.relative_residual
            );
            emit(out.as_deref(), &run.to_csv()?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
