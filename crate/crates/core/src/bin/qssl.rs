use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qssl::data::{fetch_dataset, load_dataset, FeatureMode, ScalingMode, SplitFractions, BUNDLED_DATASETS};
use qssl::error::{Result, Stage, StageExt};
use qssl::graphssl::{OperatorMode, PseudoLabelRule};
use qssl::runner::{
    emit_outputs, run_single, sweep_layers, sweep_qubits, AdjacencyMode, EmbedSpan, ExperimentConfig, RunResult,
    TrainingPool,
};
use qssl::vqc::GradientMethod;

#[derive(Parser)]
#[command(name = "qssl", version, about = "Graph label propagation feeding a simulated variational quantum classifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One end-to-end run.
    Run {
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        layers: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// One row per qubit count, for each dataset given.
    SweepQubits {
        #[arg(long, value_delimiter = ',', default_value = "4,8,12,14")]
        qubits: Vec<usize>,
        #[arg(long)]
        layers: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// One row per layer count, for each dataset given.
    SweepLayers {
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30")]
        layers: Vec<usize>,
        #[arg(long)]
        qubits: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Download the datasets from UCI and write fixture CSVs.
    FetchData {
        /// Datasets to fetch (default: all).
        #[arg(long, value_delimiter = ',')]
        dataset: Vec<String>,
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
    },
    /// Print the bundled datasets and their shapes.
    ListDatasets,
}

#[derive(Args)]
struct Common {
    /// Bundled name or CSV path; sweeps accept a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    dataset: Vec<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    prop_iters: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    labeled_frac: Option<f64>,
    #[arg(long)]
    test_frac: Option<f64>,
    /// random | knn
    #[arg(long)]
    adjacency: Option<AdjacencyMode>,
    /// Neighbours per node for the knn graph.
    #[arg(long)]
    k: Option<usize>,
    /// Gaussian bandwidth for the knn graph.
    #[arg(long)]
    sigma: Option<f64>,
    /// spread | laplacian
    #[arg(long)]
    operator: Option<OperatorMode>,
    /// auto | truncate | pad | pca
    #[arg(long)]
    features: Option<FeatureMode>,
    /// all-rows | no-leakage
    #[arg(long)]
    scaling: Option<ScalingMode>,
    #[arg(long)]
    entropy_keep: Option<usize>,
    /// labeled-and-pseudo | labeled-only
    #[arg(long)]
    pool: Option<TrainingPool>,
    #[arg(long)]
    pseudo_threshold: Option<f64>,
    /// threshold | class-mass
    #[arg(long)]
    pseudo_rule: Option<PseudoLabelRule>,
    /// parameter-shift | adjoint
    #[arg(long)]
    gradient: Option<GradientMethod>,
    /// leading | full
    #[arg(long)]
    embed: Option<EmbedSpan>,
    /// Write measured wall times into results.csv.
    #[arg(long)]
    timing: bool,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self, qubits: Option<usize>, layers: Option<usize>) -> Result<(ExperimentConfig, Vec<String>)> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident).+ = $value:expr) => {
                if let Some(v) = $value {
                    c.$($field).+ = v;
                }
            };
        }
        set!(n_qubits = qubits);
        set!(n_layers = layers);
        set!(alpha = self.alpha);
        set!(prop_iters = self.prop_iters);
        set!(epochs = self.epochs);
        set!(lr = self.lr);
        set!(seed = self.seed);
        set!(adjacency.mode = self.adjacency);
        set!(adjacency.k = self.k);
        set!(adjacency.sigma = self.sigma);
        set!(operator = self.operator);
        set!(features = self.features);
        set!(scaling = self.scaling);
        set!(pool = self.pool);
        set!(pseudo_threshold = self.pseudo_threshold);
        set!(pseudo_rule = self.pseudo_rule);
        set!(gradient = self.gradient);
        set!(embed = self.embed);
        set!(out_dir = self.out.clone());
        if self.entropy_keep.is_some() {
            c.entropy_keep = self.entropy_keep;
        }
        if self.labeled_frac.is_some() || self.test_frac.is_some() {
            let labeled = self.labeled_frac.unwrap_or(c.split.labeled);
            let test = self.test_frac.unwrap_or(c.split.test);
            c.split = SplitFractions::from_labeled_test(labeled, test);
        }
        c.record_timing |= self.timing;
        let datasets = if self.dataset.is_empty() { vec![c.dataset.clone()] } else { self.dataset.clone() };
        c.dataset = datasets[0].clone();
        c.validate()?;
        Ok((c, datasets))
    }
}

fn run_per_dataset(
    config: &ExperimentConfig,
    datasets: &[String],
    f: impl Fn(&ExperimentConfig) -> Result<Vec<RunResult>>,
) -> Result<Vec<RunResult>> {
    let mut all = Vec::new();
    for name in datasets {
        let c = ExperimentConfig { dataset: name.clone(), ..config.clone() };
        all.extend(f(&c)?);
    }
    Ok(all)
}

fn report(results: &[RunResult], config: &ExperimentConfig) -> Result<()> {
    let files = emit_outputs(results, config, &config.out_dir).stage(Stage::Output)?;
    println!("{:<14} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9}", "dataset", "qubits", "layers", "seed", "accuracy", "f1", "entropy");
    for r in results {
        println!(
            "{:<14} {:>6} {:>6} {:>6} {:>9.4} {:>9.4} {:>9.4}",
            r.config.dataset, r.config.n_qubits, r.config.n_layers, r.config.seed, r.metrics.accuracy, r.metrics.f1, r.mean_entropy
        );
    }
    println!("wrote {}", files.results.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { qubits, layers, common } => {
            let (config, _) = common.resolve(qubits, layers).stage(Stage::Config)?;
            let result = run_single(&config)?;
            report(&[result], &config)
        }
        Command::SweepQubits { qubits, layers, common } => {
            let (config, datasets) = common.resolve(None, layers).stage(Stage::Config)?;
            let results = run_per_dataset(&config, &datasets, |c| sweep_qubits(c, &qubits))?;
            report(&results, &config)
        }
        Command::SweepLayers { layers, qubits, common } => {
            let (config, datasets) = common.resolve(qubits, None).stage(Stage::Config)?;
            let results = run_per_dataset(&config, &datasets, |c| sweep_layers(c, &layers))?;
            report(&results, &config)
        }
        Command::FetchData { dataset, data_dir } => {
            let names: Vec<String> =
                if dataset.is_empty() { BUNDLED_DATASETS.iter().map(|s| s.to_string()).collect() } else { dataset };
            for name in names {
                let path = fetch_dataset(&name, &data_dir).stage(Stage::Fetch)?;
                println!("{name}: {}", path.display());
            }
            Ok(())
        }
        Command::ListDatasets => {
            for name in BUNDLED_DATASETS {
                let t = load_dataset(name).stage(Stage::Preprocess)?;
                println!("{name:<14} {:>4} rows {:>3} features {:>2} missing cells", t.n_rows(), t.n_features(), t.missing_count());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
