use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use regionloc::distance::{centroid_distance_matrix, representative_points};
use regionloc::facility::{InstanceDoc, SolutionDoc};
use regionloc::io;
use regionloc::render::{render_svg, Overlay, SolutionOverlay};
use regionloc::{
    distance_matrix, fixture, generate, lp_distance, solve, FacilityInstance, FacilitySolution, GenConfig,
    ObjectiveMode, Point, RegionMap, SolveStatus,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "regionloc", version, about = "In-region centers, region distances and closest-assignment facility location")]
struct Cli {
    /// Objective used for representative points.
    #[arg(long, global = true, default_value = "squared", value_parser = parse_mode)]
    mode: ObjectiveMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random map with concave regions and a demands file.
    Genmap {
        #[arg(long, default_value_t = 200)]
        width: u32,
        #[arg(long, default_value_t = 200)]
        height: u32,
        #[arg(long, default_value_t = 29)]
        regions: u32,
        /// Fraction of regions forced to be non-convex.
        #[arg(long, default_value_t = 0.5)]
        bias: f64,
        #[arg(long, default_value_t = 1)]
        demand_min: u32,
        #[arg(long, default_value_t = 10)]
        demand_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Map output (labeled grid CSV); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        demands_out: Option<PathBuf>,
    },
    /// Table of centroid cells and representative points.
    Centers {
        map: PathBuf,
        #[arg(long)]
        demands: Option<PathBuf>,
        /// Round coordinates to the nearest integer.
        #[arg(long)]
        integer_centers: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance matrix between representative points.
    Distmat {
        map: PathBuf,
        /// Use exact centroids instead of representative points.
        #[arg(long)]
        geometric: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the facility-location model.
    Solve {
        /// Map file; requires --demands.
        map: Option<PathBuf>,
        #[arg(long)]
        demands: Option<PathBuf>,
        /// Instance JSON with sites given directly (overrides the map).
        #[arg(long, conflicts_with_all = ["map", "demands"])]
        instance: Option<PathBuf>,
        #[arg(long = "c", default_value_t = 200.0)]
        fixed_cost: f64,
        #[arg(long = "L", default_value_t = 50.0)]
        capacity: f64,
        #[arg(long = "M", default_value_t = 10_000.0)]
        big_m: f64,
        /// Solution JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solve report JSON including timing.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the instance JSON that was solved.
        #[arg(long)]
        instance_out: Option<PathBuf>,
        /// Accept demands above L and a small M; such instances solve to
        /// INFEASIBLE instead of failing validation.
        #[arg(long)]
        relaxed: bool,
    },
    /// Render a map, optionally with centers and a solution, as SVG.
    Render {
        map: PathBuf,
        /// Center table CSV.
        #[arg(long)]
        centers: Option<PathBuf>,
        /// Solution JSON; sites are the representative points under --mode.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        demands: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the built-in special-case maps.
    Fixture {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        case: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// l_p distance between two points.
    Lp {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(allow_negative_numbers = true)]
        x1: f64,
        #[arg(allow_negative_numbers = true)]
        y1: f64,
        #[arg(allow_negative_numbers = true)]
        x2: f64,
        #[arg(allow_negative_numbers = true)]
        y2: f64,
    },
}

fn parse_mode(s: &str) -> Result<ObjectiveMode, String> {
    s.parse().map_err(|e: regionloc::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Infeasible,
}

impl From<regionloc::Error> for Failure {
    fn from(e: regionloc::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_map(path: &Path) -> Result<RegionMap, Failure> {
    io::parse_map(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_demands(path: &Path) -> Result<Vec<u32>, Failure> {
    io::parse_demands(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mode = cli.mode;
    match cli.command {
        Command::Genmap {
            width,
            height,
            regions,
            bias,
            demand_min,
            demand_max,
            seed,
            out,
            demands_out,
        } => {
            let config = GenConfig {
                width,
                height,
                region_count: regions,
                concavity_bias: bias,
                demand_range: (demand_min, demand_max),
                seed,
            };
            let (map, demands) = generate(&config)?;
            emit(out.as_deref(), &io::write_grid(&map))?;
            if let Some(path) = demands_out {
                emit(Some(&path), &io::write_demands(&demands))?;
            }
        }
        Command::Centers {
            map,
            demands,
            integer_centers,
            out,
        } => {
            let map = load_map(&map)?;
            let demands = demands.as_deref().map(load_demands).transpose()?;
            let rows = io::center_table(&map, mode, demands.as_deref())?;
            emit(out.as_deref(), &io::write_center_table(&rows, integer_centers))?;
        }
        Command::Distmat { map, geometric, out } => {
            let map = load_map(&map)?;
            let m = if geometric {
                centroid_distance_matrix(&map)?
            } else {
                distance_matrix(&map, mode)?
            };
            let ids: Vec<u32> = map.regions().iter().map(|r| r.id()).collect();
            emit(out.as_deref(), &io::write_distance_matrix(&ids, &m))?;
        }
        Command::Solve {
            map,
            demands,
            instance,
            fixed_cost,
            capacity,
            big_m,
            out,
            report,
            instance_out,
            relaxed,
        } => {
            let build = |sites: Vec<Point>, demand: Vec<u32>, c: f64, l: f64, m: f64, mode| {
                if relaxed {
                    FacilityInstance::from_sites_relaxed(sites, demand, c, l, m, mode)
                } else {
                    FacilityInstance::from_sites(sites, demand, c, l, m, mode)
                }
            };
            let inst = match (instance, map) {
                (Some(path), _) => {
                    let doc: InstanceDoc = serde_json::from_str(&read(&path)?)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    let sites = doc.sites.iter().map(|&[x, y]| Point::new(x, y)).collect();
                    build(sites, doc.demands, doc.c, doc.capacity, doc.big_m, doc.mode)?
                }
                (None, Some(map_path)) => {
                    let map = load_map(&map_path)?;
                    let Some(demands) = demands else {
                        return Err(Failure::Usage("solve needs --demands with a map".into()));
                    };
                    let demands = load_demands(&demands)?;
                    if demands.len() != map.len() {
                        return Err(Failure::Input(format!(
                            "{} regions but {} demands",
                            map.len(),
                            demands.len()
                        )));
                    }
                    build(representative_points(&map, mode)?, demands, fixed_cost, capacity, big_m, mode)?
                }
                (None, None) => return Err(Failure::Usage("solve needs a map or --instance".into())),
            };
            if let Some(path) = instance_out {
                emit(Some(&path), &to_json(&inst.to_doc()))?;
            }
            let rep = solve(&inst);
            let sol = &rep.solution;
            emit(out.as_deref(), &to_json(&sol.to_doc()))?;
            if let Some(path) = report {
                emit(Some(&path), &to_json(&rep.to_doc()))?;
            }
            let summary = summarize(sol);
            if out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
            if sol.status == SolveStatus::Infeasible {
                return Err(Failure::Infeasible);
            }
        }
        Command::Render {
            map,
            centers,
            solution,
            demands,
            out,
        } => {
            let map = load_map(&map)?;
            let mut overlay = Overlay::default();
            if let Some(path) = centers {
                overlay.centers = io::parse_center_table(&read(&path)?)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = solution {
                let doc: SolutionDoc = serde_json::from_str(&read(&path)?)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                overlay.solution = Some(SolutionOverlay {
                    sites: representative_points(&map, mode)?,
                    solution: FacilitySolution::from_doc(&doc)?,
                    demands: demands.as_deref().map(load_demands).transpose()?,
                });
            }
            emit(out.as_deref(), &render_svg(&map, &overlay)?)?;
        }
        Command::Fixture { case, out } => {
            emit(out.as_deref(), &io::write_grid(&fixture(case)?))?;
        }
        Command::Lp { p, x1, y1, x2, y2 } => {
            let d = lp_distance(Point::new(x1, y1), Point::new(x2, y2), p)?;
            println!("{d}");
        }
    }
    Ok(())
}

fn summarize(sol: &FacilitySolution) -> String {
    match sol.status {
        SolveStatus::Infeasible => "status: INFEASIBLE\n".to_string(),
        SolveStatus::Optimal => {
            let mut s = format!(
                "status: OPTIMAL\nopen facilities: {}\ncost: {}\n",
                sol.open_count(),
                sol.total_cost
            );
            for x in 0..sol.open.len() {
                if let Some(y) = sol.facility_of(x) {
                    s.push_str(&format!("site {x} -> facility {y}\n"));
                }
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Infeasible) => {
            eprintln!("error: model infeasible");
            ExitCode::from(EXIT_INFEASIBLE)
        }
    }
}
