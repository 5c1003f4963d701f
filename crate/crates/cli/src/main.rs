//! `minkest`: configuration-class tables, weight solving and verification,
//! simulation experiments and hit-and-miss probes.
//!
//! Settings come from flags, then a `--config` key=value file, then
//! defaults. `MINKEST_SEED` replaces the default seed.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use minkest::engine::{collect_histograms, report};
use minkest::expansion::{b_target, BallModel, ExpansionTables, BASIS_LEN};
use minkest::lattice::{ClassTable, NUM_CLASSES, NUM_PROPER_CLASSES};
use minkest::sim::mask_frequencies;
use minkest::weights::{solve_weights, WeightVector};

use config::{parse_list, parse_radius, radius_text, ConfigFile, Format, RunConfig};
use output::{Cell, Table};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] minkest::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use minkest::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(e) => match e {
                E::Io(_) => 4,
                E::Infeasible { .. } | E::QuadratureNotConverged { .. } | E::OutOfRange { .. } => 3,
                _ => 2,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "minkest", version, about = "Local estimators of intrinsic volumes for Boolean models of balls")]
struct Cli {
    /// key=value file; flags take precedence over its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write class, M, P, Q, b_q and c-constant tables
    Tables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum-norm weights with w D Q = b_q
    Solve {
        #[arg(long)]
        q: Option<usize>,
        /// Classes allowed nonzero weight (default 2..=21)
        #[arg(long)]
        support: Option<String>,
        /// Directory for the weight file and residual table
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the w D Q row of a weight file next to b_q
    Verify {
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Convergence experiment on digitized realizations
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        q: Option<usize>,
        /// Weight file; defaults to point counting for q = 3 and the
        /// minimum-norm solution otherwise
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Directory for report and plot data (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local Monte-Carlo hit-and-miss frequencies against the expansion
    Probe {
        #[command(flatten)]
        model: ModelArgs,
        /// Class id 1..=22 (all classes when absent)
        #[arg(long)]
        class: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Intensity of the germ process
    #[arg(long)]
    gamma: Option<f64>,
    /// `const:R` or `uniform:MIN:MAX`
    #[arg(long)]
    radius: Option<String>,
    /// Window side
    #[arg(long = "L")]
    side: Option<f64>,
    /// Comma-separated grid widths
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("minkest: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = match cli.format.as_deref() {
        Some(f) => Format::parse(f)?,
        None => file.get::<String>("format")?.map_or(Ok(Format::Csv), |f| Format::parse(&f))?,
    };
    let tables = ExpansionTables::build(ClassTable::shared());
    match cli.command {
        Command::Tables { out } => {
            let out = file.pick(out, "out")?.ok_or_else(|| CliError::Config("tables needs --out DIR".into()))?;
            let rc = RunConfig::new("tables", format).with("out", out.display());
            write_tables(&tables, &out, &rc)
        }
        Command::Solve { q, support, out } => {
            let q = file.pick(q, "q")?.ok_or_else(|| CliError::Config("solve needs --q".into()))?;
            let support: Option<String> = file.pick(support, "support")?;
            let out: Option<PathBuf> = file.pick(out, "out")?;
            let mut rc = RunConfig::new("solve", format).with("q", q);
            let classes = match &support {
                Some(s) => {
                    rc = rc.with("support", s);
                    Some(parse_list::<usize>(s, "support")?)
                }
                None => None,
            };
            let w = solve_weights(&tables, q, classes.as_deref())?;
            let weights = weight_table(&w);
            let residual = residual_table(&w, &tables);
            match out {
                Some(dir) => {
                    create_dir(&dir)?;
                    write_file(&dir.join(format!("weights_q{q}.txt")), &w.to_text())?;
                    write_file(&dir.join(format!("residual_q{q}.{}", format.ext())), &residual.render(format, &rc))?;
                    Ok(())
                }
                None => {
                    print!("{}", weights.render(format, &rc));
                    println!();
                    print!("{}", residual.render(format, &rc));
                    Ok(())
                }
            }
        }
        Command::Verify { weights, q } => {
            let path: PathBuf = file
                .pick(weights, "weights")?
                .ok_or_else(|| CliError::Config("verify needs --weights FILE".into()))?;
            let q = file.pick(q, "q")?.ok_or_else(|| CliError::Config("verify needs --q".into()))?;
            let rc = RunConfig::new("verify", format).with("weights", path.display()).with("q", q);
            let w = load_weights(&path, q)?;
            print!("{}", residual_table(&w, &tables).render(format, &rc));
            Ok(())
        }
        Command::Simulate { model, q, weights, out } => {
            let settings = ModelSettings::resolve(&model, &file, Defaults::SIMULATE)?;
            let q = file.pick(q, "q")?.unwrap_or(3);
            if q > 3 {
                return Err(CliError::Config(format!("q = {q} is not in 0..=3")));
            }
            let weights: Option<PathBuf> = file.pick(weights, "weights")?;
            let out: Option<PathBuf> = file.pick(out, "out")?;
            let w = match &weights {
                Some(path) => load_weights(path, q)?,
                None if q == 3 => WeightVector::volume(),
                None => solve_weights(&tables, q, None)?,
            };
            let side = settings.side;
            for &a in &settings.widths {
                minkest::engine::grid_steps(side, a).map_err(|e| CliError::Config(e.to_string()))?;
            }
            if settings.reps < 2 {
                return Err(CliError::Config("simulate needs --reps ≥ 2".into()));
            }
            let rc = settings
                .record(RunConfig::new("simulate", format), true)
                .with("q", q)
                .with("weights", weights.as_ref().map_or("default".into(), |p| p.display().to_string()));
            let set = collect_histograms(&settings.model, side, &settings.widths, settings.reps as usize, settings.seed)?;
            let rep = report(&set, &w, &tables)?;
            let mut table = Table::new(&[
                "q",
                "a",
                "L",
                "replications",
                "estimator_mean",
                "stderr",
                "predicted_mean",
                "miles_truth",
                "abs_bias",
            ]);
            let mut plot = Table::new(&["a", "abs_bias", "log_a", "log_abs_bias"]);
            for row in &rep.rows {
                table.push(vec![
                    Cell::Int(row.q as i64),
                    Cell::Num(row.a),
                    Cell::Num(row.side),
                    Cell::Int(row.replications as i64),
                    Cell::Num(row.mean),
                    Cell::Num(row.std_error),
                    Cell::Num(row.predicted_mean),
                    Cell::Num(row.miles_truth),
                    Cell::Num(row.abs_bias),
                ]);
                plot.push(vec![
                    Cell::Num(row.a),
                    Cell::Num(row.abs_bias),
                    Cell::Num(row.a.ln()),
                    Cell::Num(row.abs_bias.ln()),
                ]);
            }
            let order = rep.convergence_order.map_or("none".to_string(), |o| format!("{o:.16e}"));
            let rc = rc.note("convergence_order", order);
            match out {
                Some(dir) => {
                    create_dir(&dir)?;
                    write_file(&dir.join(format!("report.{}", format.ext())), &table.render(format, &rc))?;
                    write_file(&dir.join(format!("plot.{}", format.ext())), &plot.render(format, &rc))?;
                }
                None => print!("{}", table.render(format, &rc)),
            }
            Ok(())
        }
        Command::Probe { model, class, out } => {
            let settings = ModelSettings::resolve(&model, &file, Defaults::PROBE)?;
            let class: Option<usize> = file.pick(class, "class")?;
            let out: Option<PathBuf> = file.pick(out, "out")?;
            if let Some(j) = class {
                if !(1..=NUM_CLASSES).contains(&j) {
                    return Err(CliError::Config(format!("class {j} outside 1..={NUM_CLASSES}")));
                }
            }
            let mut rc = settings.record(RunConfig::new("probe", format), false);
            if let Some(j) = class {
                rc = rc.with("class", j);
            }
            let mut table = Table::new(&["class", "a", "mc_estimate", "stderr", "prediction", "deviation"]);
            for &a in &settings.widths {
                let f = mask_frequencies(&settings.model, a, settings.reps, settings.seed)?;
                let classes: Vec<usize> = class.map_or((1..=NUM_CLASSES).collect(), |j| vec![j]);
                for j in classes {
                    let mc = f.class(j);
                    let prediction = tables.hit_miss_expansion(j, &settings.model, a);
                    table.push(vec![
                        Cell::Int(j as i64),
                        Cell::Num(a),
                        Cell::Num(mc.estimate),
                        Cell::Num(mc.std_error),
                        Cell::Num(prediction),
                        Cell::Num(mc.estimate - prediction),
                    ]);
                }
            }
            let text = table.render(format, &rc);
            match out {
                Some(dir) => {
                    create_dir(&dir)?;
                    write_file(&dir.join(format!("probe.{}", format.ext())), &text)
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

struct Defaults {
    widths: &'static str,
    reps: u64,
}

impl Defaults {
    const SIMULATE: Defaults = Defaults {
        widths: "0.25,0.125,0.0625",
        reps: 32,
    };
    const PROBE: Defaults = Defaults {
        widths: "0.1",
        reps: 1_000_000,
    };
}

struct ModelSettings {
    model: BallModel<f64>,
    radius: String,
    side: f64,
    widths: Vec<f64>,
    widths_text: String,
    reps: u64,
    seed: u64,
}

impl ModelSettings {
    fn resolve(args: &ModelArgs, file: &ConfigFile, defaults: Defaults) -> CliResult<Self> {
        let gamma = file.pick(args.gamma, "gamma")?.unwrap_or(0.1);
        let radius: String = file.pick(args.radius.clone(), "radius")?.unwrap_or_else(|| "const:1".into());
        let law = parse_radius(&radius)?;
        let model = BallModel::new(gamma, law).map_err(|e| CliError::Config(e.to_string()))?;
        let side = file.pick(args.side, "L")?.unwrap_or(16.0);
        if !(side > 0.0 && side.is_finite()) {
            return Err(CliError::Config(format!("L = {side} must be positive")));
        }
        let widths_text: String = file.pick(args.a.clone(), "a")?.unwrap_or_else(|| defaults.widths.into());
        let widths = parse_list::<f64>(&widths_text, "a")?;
        if widths.is_empty() || widths.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(CliError::Config(format!("grid widths `{widths_text}` must be positive")));
        }
        let reps = file.pick(args.reps, "reps")?.unwrap_or(defaults.reps);
        if reps < 1 {
            return Err(CliError::Config("--reps must be at least 1".into()));
        }
        let seed = match file.pick(args.seed, "seed")? {
            Some(s) => s,
            None => match std::env::var("MINKEST_SEED") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("MINKEST_SEED `{v}` is not an integer")))?,
                Err(_) => 1,
            },
        };
        Ok(ModelSettings {
            model,
            radius: radius_text(&law),
            side,
            widths,
            widths_text,
            reps,
            seed,
        })
    }

    fn record(&self, rc: RunConfig, with_side: bool) -> RunConfig {
        let rc = rc.with("gamma", self.model.gamma).with("radius", &self.radius);
        let rc = if with_side { rc.with("L", self.side) } else { rc };
        rc.with("a", &self.widths_text)
            .with("reps", self.reps)
            .with("seed", self.seed)
    }
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_weights(path: &Path, q: usize) -> CliResult<WeightVector<f64>> {
    WeightVector::load(path, q).map_err(|e| match e {
        minkest::Error::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other.into(),
    })
}

fn weight_table(w: &WeightVector<f64>) -> Table {
    let mut t = Table::new(&["class_id", "weight"]);
    for j in 1..=NUM_CLASSES {
        t.push(vec![Cell::Int(j as i64), Cell::Num(w.get(j))]);
    }
    t
}

fn residual_table(w: &WeightVector<f64>, tables: &ExpansionTables<f64>) -> Table {
    let row = w.wdq_row(tables);
    let b = b_target::<f64>(w.q());
    let mut t = Table::new(&["component", "wdq", "b", "residual"]);
    for k in 0..BASIS_LEN {
        t.push(vec![
            Cell::Int(k as i64 + 1),
            Cell::Num(row[k]),
            Cell::Num(b[k]),
            Cell::Num(row[k] - b[k]),
        ]);
    }
    t
}

fn write_tables(tables: &ExpansionTables<f64>, dir: &Path, rc: &RunConfig) -> CliResult<()> {
    let classes = ClassTable::shared();
    let ext = rc.format().ext();
    create_dir(dir)?;

    let mut t = Table::new(&["class", "size", "representative_mask", "white_points", "v1", "v2", "v3", "v13"]);
    for j in 1..=NUM_CLASSES {
        let mask = classes.representative(j);
        let (v1, v2, v3, v13) = match mask.white() {
            Some(white) => {
                let hull = white.hull();
                (hull.v1::<f64>(), hull.v2::<f64>(), hull.v3::<f64>(), hull.power_volume_v13::<f64>())
            }
            None => (0.0, 0.0, 0.0, 0.0),
        };
        t.push(vec![
            Cell::Int(j as i64),
            Cell::Int(i64::from(classes.class_sizes()[j - 1])),
            Cell::Int(i64::from(mask.0)),
            Cell::Int(mask.white_count() as i64),
            Cell::Num(v1),
            Cell::Num(v2),
            Cell::Num(v3),
            Cell::Num(v13),
        ]);
    }
    write_file(&dir.join(format!("classes.{ext}")), &t.render(rc.format(), rc))?;

    let m_cols: Vec<String> = std::iter::once("class".to_string())
        .chain((1..=NUM_PROPER_CLASSES).map(|j| format!("m{j}")))
        .collect();
    let mut t = Table::from_columns(m_cols);
    for (i, row) in classes.m_matrix().iter().enumerate() {
        let mut cells = vec![Cell::Int(i as i64 + 1)];
        cells.extend(row.iter().map(|&m| Cell::Int(i64::from(m))));
        t.push(cells);
    }
    write_file(&dir.join(format!("m.{ext}")), &t.render(rc.format(), rc))?;

    let basis_cols = |prefix: &str, first: &str| -> Vec<String> {
        std::iter::once(first.to_string())
            .chain((1..=BASIS_LEN).map(|k| format!("{prefix}{k}")))
            .collect()
    };
    let mut p = Table::from_columns(basis_cols("p", "class"));
    for j in 1..=NUM_PROPER_CLASSES {
        let mut cells = vec![Cell::Int(j as i64)];
        cells.extend(tables.p_row(j).iter().map(|&x| Cell::Num(x)));
        p.push(cells);
    }
    write_file(&dir.join(format!("p.{ext}")), &p.render(rc.format(), rc))?;

    let mut q = Table::from_columns(basis_cols("q", "class"));
    for j in 1..=NUM_CLASSES {
        let mut cells = vec![Cell::Int(j as i64)];
        cells.extend(tables.q_row(j).iter().map(|&x| Cell::Num(x)));
        q.push(cells);
    }
    write_file(&dir.join(format!("q.{ext}")), &q.render(rc.format(), rc))?;

    let mut b = Table::from_columns(basis_cols("b", "q"));
    for qi in 0..=3 {
        let mut cells = vec![Cell::Int(qi as i64)];
        cells.extend(b_target::<f64>(qi).iter().map(|&x| Cell::Num(x)));
        b.push(cells);
    }
    write_file(&dir.join(format!("b.{ext}")), &b.render(rc.format(), rc))?;

    let mut c = Table::new(&["class", "c1", "c2", "c3"]);
    for j in 1..=NUM_CLASSES {
        let (c1, c2, c3) = tables.c_constants(j);
        c.push(vec![Cell::Int(j as i64), Cell::Num(c1), Cell::Num(c2), Cell::Num(c3)]);
    }
    write_file(&dir.join(format!("c.{ext}")), &c.render(rc.format(), rc))?;
    Ok(())
}
