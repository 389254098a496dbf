use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hextet::pipeline::{self, RealizeConfig, CLASS_COUNT};
use hextet::realize::{Budget, DEFAULT_ITERATIONS, DEFAULT_RESTARTS};

/// Triangulations of the hexahedron: enumeration, realization and detection
/// in tetrahedral meshes.
#[derive(Parser)]
#[command(name = "hextet", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the catalog of triangulation classes.
    Enumerate {
        /// Largest number of tetrahedra searched.
        #[arg(long, default_value_t = hextet::enumerate::DEFAULT_MAX_TETS)]
        max_tets: usize,
        /// Cross-check against a file of 9-vertex 3-sphere triangulations.
        #[arg(long)]
        sphere_data: Option<PathBuf>,
    },
    /// Decide realizability of every class and write witnesses.
    Realize {
        /// Require the 8 points in convex position.
        #[arg(long)]
        convex: bool,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        budget_restarts: usize,
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        budget_iters: usize,
        /// Catalog file (default: the one recorded in the output directory).
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Comma-separated class ids to process.
        #[arg(long, value_delimiter = ',')]
        classes: Option<Vec<String>>,
        /// Write each SAT instance as DIMACS CNF with a JSON sidecar.
        #[arg(long)]
        dimacs_dump: Option<PathBuf>,
        /// Also write one MEDIT mesh per realization.
        #[arg(long)]
        medit: bool,
    },
    /// Find and classify hexahedra in tetrahedral meshes (.mesh, .node/.ele).
    Scan {
        #[arg(required = true)]
        meshes: Vec<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Include hexahedra failing the validity proxy.
        #[arg(long)]
        all: bool,
    },
    /// Re-run exact verification on catalog, realization or certificate files.
    Verify {
        #[arg(required = true)]
        artifacts: Vec<PathBuf>,
    },
}

fn run(cli: Cli) -> hextet::Result<bool> {
    let out = &cli.common.out;
    match cli.command {
        Command::Enumerate { max_tets, sphere_data } => {
            let r = pipeline::run_enumerate(out, max_tets, sphere_data.as_deref())?;
            println!("classes: {}", r.catalog.len());
            println!("labeled: {}", r.catalog.labeled_total());
            print!("{}", r.catalog.counts_csv());
            println!("catalog: {}", r.catalog_path.display());
            println!("table: {}", r.table_path.display());
            if let Some(agrees) = r.sphere_agrees {
                println!("sphere cross-check: {}", if agrees { "pass" } else { "FAIL" });
            }
            Ok(r.catalog.len() == CLASS_COUNT && r.sphere_agrees != Some(false))
        }
        Command::Realize {
            convex,
            budget_restarts,
            budget_iters,
            catalog,
            classes,
            dimacs_dump,
            medit,
        } => {
            if budget_restarts == 0 || budget_iters == 0 {
                return Err(hextet::Error::Schema("budgets must be positive".into()));
            }
            let cat = pipeline::load_catalog(out, catalog.as_deref())?;
            let cfg = RealizeConfig {
                convex,
                budget: Budget {
                    restarts: budget_restarts,
                    iterations: budget_iters,
                    seed: cli.common.seed,
                },
                classes,
                dimacs_dump,
                medit,
            };
            let r = pipeline::run_realize(out, &cat, &cfg)?;
            for (verdict, n) in r.counts() {
                println!("{verdict}: {n}");
            }
            let fills = r.records.iter().filter(|x| x.fills_hull == Some(true)).count();
            println!("realizations filling the hull: {fills}");
            let (meshes, files): (Vec<_>, Vec<_>) = r.paths.iter().partition(|p| p.extension().is_some_and(|e| e == "mesh"));
            for p in files {
                println!("wrote {}", p.display());
            }
            if let Some(dir) = meshes.first().and_then(|p| p.parent()) {
                println!("wrote {} meshes to {}", meshes.len(), dir.display());
            }
            Ok(true)
        }
        Command::Scan { meshes, catalog, all } => {
            let cat = pipeline::load_catalog(out, catalog.as_deref())?;
            let r = pipeline::run_scan(out, &cat, &meshes, all)?;
            print!("{}", hextet::meshscan::patterns_csv(&r.rows));
            for p in &r.paths {
                println!("wrote {}", p.display());
            }
            Ok(r.failures.is_empty())
        }
        Command::Verify { artifacts } => {
            let mut ok = true;
            for a in &artifacts {
                for c in pipeline::verify_artifact(a)? {
                    ok &= c.ok;
                    if c.ok {
                        println!("{}: true", c.item);
                    } else {
                        println!("{}: false ({})", c.item, c.detail);
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.common.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
