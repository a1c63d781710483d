//! Command line interface for the elastic time warping similarity.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 on internal
//! inconsistencies (a failed oracle check or an unexpected panic). All
//! numeric output is printed with 17 significant digits, so equal inputs
//! produce byte-identical output for every command except `bench`, which
//! reports wall-clock times.

use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use etw::hellinger::{hellinger_affinity, hellinger_distance, sine_distance, theta_distance};
use etw::io::{
    parse_diffeo_csv, parse_similarity_csv, parse_time_series_csv, write_result_json,
    write_similarity_csv, ResultDocument, ResultMetadata,
};
use etw::oracle::{brute_force_similarity, ENUMERATION_CAP};
use etw::synth::random_series;
use etw::{
    build_similarity_matrix, elastic_similarity, exp_kernel, SimilarityMatrix, TimeSeries,
    ValueMetric,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "etw",
    version,
    about = "Elastic time warping: a stretch-penalized similarity for time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two series files and emit the result as JSON.
    Compare {
        /// CSV file with header `t,v1,...,vd` for the first series.
        left: PathBuf,
        /// CSV file with header `t,v1,...,vd` for the second series.
        right: PathBuf,
        /// Pointwise similarity kernel for building the grid.
        #[arg(long, value_enum, default_value_t = KernelChoice::Exp)]
        kernel: KernelChoice,
        /// Read the similarity grid from headerless CSV instead of applying
        /// the kernel.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Affinely rescale raw timestamps onto [0, 1) before validating.
        #[arg(long)]
        normalize: bool,
        /// Write the JSON document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every pair from a manifest and write the similarity matrix.
    Matrix {
        /// Text file listing series CSV paths (one per line, relative to the
        /// manifest), or a directory whose *.csv files are taken in sorted
        /// order.
        manifest: PathBuf,
        /// Output CSV path for the symmetric similarity matrix.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the pairwise comparisons (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the affinity and warp distances between two piecewise linear
    /// warps given as `tau,alpha` CSV files.
    Diffeo {
        /// First warp.
        left: PathBuf,
        /// Second warp.
        right: PathBuf,
        /// Which distance to print alongside the affinity.
        #[arg(long, value_enum, default_value_t = MetricChoice::All)]
        metric: MetricChoice,
    },
    /// Check the dynamic program against exhaustive enumeration on a small
    /// instance; exits 2 on a mismatch.
    Oracle {
        /// CSV file for the first series.
        left: PathBuf,
        /// CSV file for the second series.
        right: PathBuf,
        /// Read the similarity grid from CSV instead of applying the kernel.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Refuse instances with more samples per side than this.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Time the alignment on random instances of the given sizes.
    Bench {
        /// Comma-separated series lengths, e.g. `--sizes 100,200,400`.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Seed for the instance generator (default: from entropy).
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelChoice {
    /// exp(-d) with the Euclidean metric on values.
    Exp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricChoice {
    /// Angle arccos of the affinity.
    Theta,
    /// Sine of the angle.
    Sine,
    /// Hellinger distance sqrt(1 - affinity).
    Hellinger,
    /// All three.
    All,
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
    match std::panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal error: unexpected panic, see the message above");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Compare {
            left,
            right,
            kernel,
            matrix,
            normalize,
            out,
        } => compare(&left, &right, kernel, matrix.as_deref(), normalize, out.as_deref()),
        Command::Matrix {
            manifest,
            out,
            jobs,
        } => matrix_command(&manifest, &out, jobs),
        Command::Diffeo {
            left,
            right,
            metric,
        } => diffeo_command(&left, &right, metric),
        Command::Oracle {
            left,
            right,
            matrix,
            cap,
        } => oracle_command(&left, &right, matrix.as_deref(), cap),
        Command::Bench { sizes, seed } => bench_command(&sizes, seed),
    }
}

/// 17 significant digits: reproduces any finite f64 bit for bit.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_series(path: &Path, normalize: bool) -> Result<TimeSeries, String> {
    parse_time_series_csv(&read_file(path)?, normalize)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_grid(
    f: &TimeSeries,
    g: &TimeSeries,
    matrix: Option<&Path>,
) -> Result<SimilarityMatrix, String> {
    match matrix {
        Some(path) => parse_similarity_csv(&read_file(path)?, f.len(), g.len())
            .map_err(|e| format!("{}: {e}", path.display())),
        None => build_similarity_matrix(f, g, |x, y| exp_kernel(x, y, ValueMetric::Euclidean))
            .map_err(|e| e.to_string()),
    }
}

fn compare(
    left: &Path,
    right: &Path,
    _kernel: KernelChoice,
    matrix: Option<&Path>,
    normalize: bool,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    let f = load_series(left, normalize)?;
    let g = load_series(right, normalize)?;
    let c = load_grid(&f, &g, matrix)?;
    let r = elastic_similarity(&f, &g, &c).map_err(|e| e.to_string())?;
    let doc = ResultDocument::new(
        &r,
        ResultMetadata {
            left: left.display().to_string(),
            right: right.display().to_string(),
            kernel: if matrix.is_some() { "precomputed" } else { "exp" }.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    );
    let text = write_result_json(&doc);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Resolves a manifest argument into an ordered list of series files.
fn collect_series_paths(manifest: &Path) -> Result<Vec<PathBuf>, String> {
    let meta =
        std::fs::metadata(manifest).map_err(|e| format!("{}: {e}", manifest.display()))?;
    if meta.is_dir() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(manifest)
            .map_err(|e| format!("{}: {e}", manifest.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
            .collect();
        paths.sort();
        Ok(paths)
    } else {
        let base = manifest.parent().unwrap_or(Path::new("."));
        Ok(read_file(manifest)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| base.join(l))
            .collect())
    }
}

fn matrix_command(manifest: &Path, out: &Path, jobs: Option<usize>) -> Result<ExitCode, String> {
    let paths = collect_series_paths(manifest)?;
    if paths.len() < 2 {
        return Err(format!(
            "{}: need at least 2 series files, found {}",
            manifest.display(),
            paths.len()
        ));
    }
    let series: Vec<TimeSeries> = paths
        .iter()
        .map(|p| load_series(p, false))
        .collect::<Result<_, _>>()?;

    let n = series.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| e.to_string())?;
    let computed: Vec<((usize, usize), f64)> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                build_similarity_matrix(&series[i], &series[j], |x, y| {
                    exp_kernel(x, y, ValueMetric::Euclidean)
                })
                .and_then(|c| elastic_similarity(&series[i], &series[j], &c))
                .map(|r| ((i, j), r.value))
                .map_err(|e| {
                    format!(
                        "comparing {} with {}: {e}",
                        paths[i].display(),
                        paths[j].display()
                    )
                })
            })
            .collect::<Result<_, String>>()
    })?;

    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
    }
    for ((i, j), v) in computed {
        // Self-similar pairs can overshoot 1 by an ulp; the matrix type
        // rejects anything above 1.
        let v = v.min(1.0);
        entries[i * n + j] = v;
        entries[j * n + i] = v;
    }
    let m = SimilarityMatrix::new(n, n, entries).map_err(|e| e.to_string())?;
    std::fs::write(out, write_similarity_csv(&m))
        .map_err(|e| format!("{}: {e}", out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn diffeo_command(left: &Path, right: &Path, metric: MetricChoice) -> Result<ExitCode, String> {
    let a = parse_diffeo_csv(&read_file(left)?).map_err(|e| format!("{}: {e}", left.display()))?;
    let b =
        parse_diffeo_csv(&read_file(right)?).map_err(|e| format!("{}: {e}", right.display()))?;
    println!("affinity: {}", fmt_f64(hellinger_affinity(&a, &b)));
    if matches!(metric, MetricChoice::Theta | MetricChoice::All) {
        println!("theta: {}", fmt_f64(theta_distance(&a, &b)));
    }
    if matches!(metric, MetricChoice::Sine | MetricChoice::All) {
        println!("sine: {}", fmt_f64(sine_distance(&a, &b)));
    }
    if matches!(metric, MetricChoice::Hellinger | MetricChoice::All) {
        println!("hellinger: {}", fmt_f64(hellinger_distance(&a, &b)));
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_command(
    left: &Path,
    right: &Path,
    matrix: Option<&Path>,
    cap: Option<usize>,
) -> Result<ExitCode, String> {
    let f = load_series(left, false)?;
    let g = load_series(right, false)?;
    let cap = cap.unwrap_or(ENUMERATION_CAP);
    if f.len() > cap || g.len() > cap {
        return Err(format!(
            "instance is {}x{}, above the enumeration cap {cap}",
            f.len(),
            g.len()
        ));
    }
    let c = load_grid(&f, &g, matrix)?;
    let dp = elastic_similarity(&f, &g, &c).map_err(|e| e.to_string())?;
    let (bf, bf_path) = brute_force_similarity(&f, &g, &c).map_err(|e| e.to_string())?;
    let diff = (dp.value - bf).abs();
    println!("dp:     {}", fmt_f64(dp.value));
    println!("oracle: {}", fmt_f64(bf));
    println!("diff:   {diff:e}");
    let ok = diff <= 1e-9 && dp.path.moves() == bf_path.moves();
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn bench_command(sizes: &[usize], seed: Option<u64>) -> Result<ExitCode, String> {
    if sizes.contains(&0) {
        return Err("sizes must be positive".to_string());
    }
    let seed = seed.unwrap_or_else(rand::random);
    println!("seed: {seed}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let f = random_series(&mut rng, size, 1);
        let g = random_series(&mut rng, size, 1);
        let c = build_similarity_matrix(&f, &g, |x, y| exp_kernel(x, y, ValueMetric::Euclidean))
            .map_err(|e| e.to_string())?;
        let t0 = Instant::now();
        let r = elastic_similarity(&f, &g, &c).map_err(|e| e.to_string())?;
        let secs = t0.elapsed().as_secs_f64();
        println!("size {size}: {secs:.6} s (similarity {:.6})", r.value);
        pts.push(((size as f64).ln(), secs.max(1e-9).ln()));
    }
    if pts.len() >= 3 {
        // Least-squares slope of ln(time) against ln(size).
        let k = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = k * sxx - sx * sx;
        if denom.abs() > 1e-12 {
            println!("scaling exponent: {:.2}", (k * sxy - sx * sy) / denom);
        }
    }
    Ok(ExitCode::SUCCESS)
}
