//! Command-line front end: `train`, `add`, `select`, `eval`, `inspect`, `gen`.
//!
//! Every command writes machine-readable results to `out` and diagnostics
//! to `err`, so the two never interleave.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::corpus::{parse_corpus, write_corpus, CorpusError, StructurePair};
use crate::evalkit::{
    self, gen_synthetic, BaselineError, BaselineTable, SynthError, SynthSpec, BASELINE_FILE,
};
use crate::extraction::{extract_corpus, CategoryMap, CategoryMapError, ExtractedSample};
use crate::fstructure::{FStructure, ParseError};
use crate::itnet::{
    load_model, model_path, save_model, train_by_category, CountStore, ModelFileError, NetError,
    Network, DEFAULT_LAMBDA, MODEL_EXTENSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Corpus {
        path: PathBuf,
        #[source]
        source: CorpusError,
    },
    #[error("{path}: {source}")]
    CategoryMap {
        path: PathBuf,
        #[source]
        source: CategoryMapError,
    },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("model {path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: ModelFileError,
    },
    #[error("no model for category `{category}` (looked for {path})")]
    MissingModel { category: String, path: PathBuf },
    #[error(
        "model for category `{category}` was trained with lambda {stored}, \
         refusing to add data with lambda {requested}"
    )]
    LambdaMismatch {
        category: String,
        stored: f64,
        requested: f64,
    },
    #[error("cannot parse structure: {0}")]
    Structure(#[from] ParseError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("baseline: {0}")]
    Baseline(#[from] BaselineError),
    #[error("invalid category name `{0}`")]
    BadCategory(String),
}

impl CliError {
    fn io(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "itlex",
    version,
    about = "Lexical selection with information-theoretical networks"
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SharedOpts {
    /// Add-lambda smoothing constant (default 0.5)
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Slot-label to category map (`slot<TAB>category` lines)
    #[arg(long, global = true, value_name = "PATH")]
    pub category_map: Option<PathBuf>,
    /// Directory holding one model file per category (default `models`)
    #[arg(long, global = true, value_name = "PATH")]
    pub model_dir: Option<PathBuf>,
    /// Number of ranked outputs `select` prints (default 5)
    #[arg(long, global = true, value_name = "K")]
    pub top_k: Option<usize>,
    /// TOML file with `lambda`, `category_map`, `model_dir`, `top_k`
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one network per category from a corpus of structure pairs
    Train { corpus: PathBuf },
    /// Fold another corpus into the existing networks
    Add { corpus: PathBuf },
    /// Select a target head for a source structure
    Select {
        structure: String,
        /// Network to use; defaults to the category of the structure's label
        #[arg(long)]
        category: Option<String>,
    },
    /// Evaluate the networks on a held-out corpus
    Eval {
        corpus: PathBuf,
        /// Also score the word-level baseline
        #[arg(long)]
        baseline: bool,
    },
    /// Print the bias and weights of one network
    Inspect { category: String },
    /// Generate a synthetic train/test corpus
    Gen {
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 5)]
        categories: usize,
        #[arg(long, default_value_t = 50)]
        in_vocab: usize,
        #[arg(long, default_value_t = 50)]
        out_vocab: usize,
        #[arg(long, default_value_t = 2)]
        senses: usize,
        #[arg(long = "train", default_value_t = 500)]
        n_train: usize,
        #[arg(long = "test", default_value_t = 500)]
        n_test: usize,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lambda: Option<f64>,
    category_map: Option<PathBuf>,
    model_dir: Option<PathBuf>,
    top_k: Option<usize>,
}

/// Resolved settings: flags over config file over defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// `None` when neither a flag nor the config file set it.
    pub lambda: Option<f64>,
    pub category_map_path: Option<PathBuf>,
    pub model_dir: PathBuf,
    pub top_k: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lambda: None,
            category_map_path: None,
            model_dir: PathBuf::from("models"),
            top_k: 5,
        }
    }
}

impl Config {
    pub fn resolve(shared: &SharedOpts) -> Result<Config, CliError> {
        let file = match &shared.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(CliError::io(path))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| CliError::Config {
                    path: path.clone(),
                    message: e.to_string(),
                })?
            }
            None => FileConfig::default(),
        };
        let defaults = Config::default();
        let config = Config {
            lambda: shared.lambda.or(file.lambda),
            category_map_path: shared.category_map.clone().or(file.category_map),
            model_dir: shared
                .model_dir
                .clone()
                .or(file.model_dir)
                .unwrap_or(defaults.model_dir),
            top_k: shared.top_k.or(file.top_k).unwrap_or(defaults.top_k),
        };
        if let Some(l) = config.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return Err(NetError::InvalidLambda(l).into());
            }
        }
        Ok(config)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda.unwrap_or(DEFAULT_LAMBDA)
    }

    pub fn category_map(&self) -> Result<CategoryMap, CliError> {
        match &self.category_map_path {
            None => Ok(CategoryMap::default()),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(CliError::io(path))?;
                CategoryMap::parse(&text).map_err(|source| CliError::CategoryMap {
                    path: path.clone(),
                    source,
                })
            }
        }
    }
}

/// Parses arguments and runs a command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = Config::resolve(&cli.shared)?;
    match &cli.command {
        Command::Train { corpus } => cmd_train(corpus, &config, out, err),
        Command::Add { corpus } => cmd_add(corpus, &config, out, err),
        Command::Select {
            structure,
            category,
        } => cmd_select(structure, category.as_deref(), &config, out, err),
        Command::Eval { corpus, baseline } => cmd_eval(corpus, *baseline, &config, out, err),
        Command::Inspect { category } => cmd_inspect(category, &config, out),
        Command::Gen {
            out_dir,
            seed,
            noise,
            categories,
            in_vocab,
            out_vocab,
            senses,
            n_train,
            n_test,
        } => {
            let spec = SynthSpec {
                categories: *categories,
                in_vocab: *in_vocab,
                out_vocab: *out_vocab,
                senses: *senses,
                n_train: *n_train,
                n_test: *n_test,
                noise: *noise,
                seed: *seed,
            };
            cmd_gen(out_dir, &spec, out)
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(CliError::io(Path::new("<stdout>")))
}

fn read_corpus(path: &Path) -> Result<Vec<StructurePair>, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_corpus(&text).map_err(|source| CliError::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

fn corpus_samples(
    path: &Path,
    config: &Config,
    err: &mut dyn Write,
) -> Result<Vec<ExtractedSample>, CliError> {
    let corpus = read_corpus(path)?;
    let cmap = config.category_map()?;
    let (samples, diag) = extract_corpus(&corpus, &cmap);
    let _ = writeln!(
        err,
        "{}: {} records, {} aligned pairs, {} samples ({} unaligned structures, {} without target head, {} without source heads)",
        path.display(),
        corpus.len(),
        diag.aligned_pairs,
        samples.len(),
        diag.skipped_structures,
        diag.target_without_head,
        diag.source_without_head,
    );
    Ok(samples)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

fn save_baseline(table: &BaselineTable, dir: &Path) -> Result<(), CliError> {
    let path = dir.join(BASELINE_FILE);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, table.to_file_string()).map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, &path).map_err(CliError::io(&path))
}

fn load_baseline(dir: &Path) -> Result<Option<BaselineTable>, CliError> {
    let path = dir.join(BASELINE_FILE);
    match fs::read_to_string(&path) {
        Ok(text) => Ok(Some(BaselineTable::from_file_str(&text)?)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::Io { path, source: e }),
    }
}

fn load_category(dir: &Path, category: &str) -> Result<Option<CountStore>, CliError> {
    let path = model_path(dir, category);
    if !path.exists() {
        return Ok(None);
    }
    load_model(&path)
        .map(Some)
        .map_err(|source| CliError::Model { path, source })
}

fn require_category(dir: &Path, category: &str) -> Result<CountStore, CliError> {
    if !crate::extraction::is_valid_category(category) {
        return Err(CliError::BadCategory(category.to_string()));
    }
    load_category(dir, category)?.ok_or_else(|| CliError::MissingModel {
        category: category.to_string(),
        path: model_path(dir, category),
    })
}

/// Every `*.model` file in `dir`, keyed by category.
pub fn load_all_models(dir: &Path) -> Result<BTreeMap<String, CountStore>, CliError> {
    let mut out = BTreeMap::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(out),
        Err(e) => {
            return Err(CliError::Io {
                path: dir.to_path_buf(),
                source: e,
            })
        }
    };
    for entry in entries {
        let path = entry.map_err(CliError::io(dir))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some(MODEL_EXTENSION) {
            continue;
        }
        let store = load_model(&path).map_err(|source| CliError::Model {
            path: path.clone(),
            source,
        })?;
        out.insert(store.category().to_string(), store);
    }
    Ok(out)
}

pub fn cmd_train(
    corpus: &Path,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let samples = corpus_samples(corpus, config, err)?;
    if samples.is_empty() {
        let _ = writeln!(err, "warning: no samples extracted, no models written");
        return Ok(());
    }
    let stores = train_by_category(config.lambda(), samples.iter().map(|e| &e.sample))?;
    let baseline = evalkit::baseline_train(evalkit::head_pairs(&samples));

    let dir = &config.model_dir;
    ensure_dir(dir)?;
    for (category, store) in &stores {
        let path = model_path(dir, category);
        save_model(store, &path).map_err(|source| CliError::Model { path, source })?;
        write_out(out, &format!("{category}\t{}\n", store.n_samples()))?;
    }
    save_baseline(&baseline, dir)
}

pub fn cmd_add(
    corpus: &Path,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let samples = corpus_samples(corpus, config, err)?;
    if samples.is_empty() {
        let _ = writeln!(err, "nothing to add");
        return Ok(());
    }
    let dir = &config.model_dir;
    let existing = load_all_models(dir)?;
    if let Some(requested) = config.lambda {
        if let Some(s) = existing.values().find(|s| s.lambda() != requested) {
            return Err(CliError::LambdaMismatch {
                category: s.category().to_string(),
                stored: s.lambda(),
                requested,
            });
        }
    }
    // new categories follow the explicit lambda, else the existing models
    let lambda = config
        .lambda
        .or_else(|| existing.values().next().map(CountStore::lambda))
        .unwrap_or(DEFAULT_LAMBDA);

    let fresh = train_by_category(lambda, samples.iter().map(|e| &e.sample))?;
    let mut merged = Vec::new();
    for (category, store) in fresh {
        let combined = match existing.get(&category) {
            Some(old) => old.merge(&store).map_err(|e| match e {
                NetError::LambdaMismatch { left, right } => CliError::LambdaMismatch {
                    category: category.clone(),
                    stored: left,
                    requested: right,
                },
                other => other.into(),
            })?,
            None => store,
        };
        merged.push(combined);
    }
    let mut baseline = load_baseline(dir)?.unwrap_or_default();
    baseline.merge(&evalkit::baseline_train(evalkit::head_pairs(&samples)));

    ensure_dir(dir)?;
    for store in &merged {
        let path = model_path(dir, store.category());
        save_model(store, &path).map_err(|source| CliError::Model { path, source })?;
        write_out(
            out,
            &format!("{}\t{}\n", store.category(), store.n_samples()),
        )?;
    }
    save_baseline(&baseline, dir)
}

pub fn cmd_select(
    structure: &str,
    category: Option<&str>,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let fs = FStructure::parse(structure)?;
    let category = match category {
        Some(c) => c.to_lowercase(),
        None => config.category_map()?.category(fs.label()).to_string(),
    };
    let net = Network::new(require_category(&config.model_dir, &category)?);

    let inputs: Vec<String> = fs
        .head()
        .ok()
        .into_iter()
        .chain(fs.subs().filter_map(|c| c.head().ok()))
        .map(|h| h.into_string())
        .collect();
    let winner = net.select(&inputs)?;
    let activation = net.activate(&inputs);
    if !activation.unknown_inputs.is_empty() {
        let unknown: Vec<&str> = activation
            .unknown_inputs
            .iter()
            .map(String::as_str)
            .collect();
        let _ = writeln!(err, "unknown inputs: {}", unknown.join(" "));
    }
    if activation.active_inputs.is_empty() {
        let _ = writeln!(err, "warning: no known inputs, falling back to the prior");
    }

    let mut text = format!("{winner}\n");
    for (token, score) in activation.ranking().into_iter().take(config.top_k) {
        text.push_str(&format!("{token}\t{score:.6}\n"));
    }
    write_out(out, &text)
}

pub fn cmd_eval(
    corpus: &Path,
    baseline: bool,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let samples = corpus_samples(corpus, config, err)?;
    let networks: BTreeMap<String, Network> = load_all_models(&config.model_dir)?
        .into_iter()
        .map(|(k, s)| (k, Network::new(s)))
        .collect();
    let report = evalkit::evaluate_samples(&networks, &samples);
    if report.missing_network > 0 {
        let _ = writeln!(
            err,
            "{} samples had no network for their category",
            report.missing_network
        );
    }

    let mut text = report.table();
    let baseline_report = if baseline {
        let table = load_baseline(&config.model_dir)?.unwrap_or_default();
        let r = evalkit::evaluate_baseline_samples(&table, &samples);
        text.push_str("\nbaseline\n");
        text.push_str(&r.table());
        Some(r)
    } else {
        None
    };
    text.push('\n');
    text.push_str(&report.key_values(""));
    if let Some(r) = baseline_report {
        text.push_str(&r.key_values("baseline"));
    }
    write_out(out, &text)
}

pub fn cmd_inspect(category: &str, config: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let category = category.to_lowercase();
    let store = require_category(&config.model_dir, &category)?;
    let mut text = format!(
        "category {}\nlambda {}\nn {}\n",
        store.category(),
        store.lambda(),
        store.n_samples()
    );
    let net = Network::new(store);
    for (j, _) in net.store().outputs() {
        text.push_str(&format!("b {j} {:.6}\n", net.bias(j)?));
    }
    for (i, j, _) in net.store().joints() {
        text.push_str(&format!("w {i} {j} {:.6}\n", net.weight(i, j)?));
    }
    write_out(out, &text)
}

pub fn cmd_gen(out_dir: &Path, spec: &SynthSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let g = gen_synthetic(spec)?;
    ensure_dir(out_dir)?;
    let files = [
        ("train.fs", write_corpus(&g.train)),
        ("test.fs", write_corpus(&g.test)),
        ("categories.tsv", g.category_map.to_string()),
        (
            "truth.tsv",
            g.truth
                .iter()
                .map(|((cat, inputs), t)| {
                    let inputs: Vec<&str> = inputs.iter().map(String::as_str).collect();
                    format!("{cat}\t{}\t{t}\n", inputs.join(" "))
                })
                .collect(),
        ),
    ];
    for (name, body) in files {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(CliError::io(&path))?;
    }
    write_out(
        out,
        &format!(
            "train_records={}\ntest_records={}\nbayes_rate={:?}\n",
            g.train.len(),
            g.test.len(),
            g.bayes_rate
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("itlex.toml");
        fs::write(&cfg, "lambda = 0.25\nmodel_dir = \"m\"\ntop_k = 3\n").unwrap();
        let shared = SharedOpts {
            config: Some(cfg.clone()),
            ..SharedOpts::default()
        };
        let c = Config::resolve(&shared).unwrap();
        assert_eq!(c.lambda, Some(0.25));
        assert_eq!(c.model_dir, PathBuf::from("m"));
        assert_eq!(c.top_k, 3);

        let shared = SharedOpts {
            config: Some(cfg),
            lambda: Some(1.0),
            model_dir: Some("x".into()),
            top_k: Some(1),
            ..SharedOpts::default()
        };
        let c = Config::resolve(&shared).unwrap();
        assert_eq!((c.lambda(), c.model_dir), (1.0, PathBuf::from("x")));
        assert_eq!(c.top_k, 1);
    }

    #[test]
    fn defaults() {
        let c = Config::resolve(&SharedOpts::default()).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.lambda(), 0.5);
        assert_eq!(c.top_k, 5);
    }

    #[test]
    fn rejects_bad_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.toml");
        fs::write(&cfg, "lamda = 1\n").unwrap();
        let shared = SharedOpts {
            config: Some(cfg),
            ..SharedOpts::default()
        };
        assert!(matches!(
            Config::resolve(&shared),
            Err(CliError::Config { .. })
        ));
        let shared = SharedOpts {
            lambda: Some(-2.0),
            ..SharedOpts::default()
        };
        assert!(matches!(
            Config::resolve(&shared),
            Err(CliError::Net(NetError::InvalidLambda(_)))
        ));
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["itlex", "frobnicate"], &mut o, &mut e), 2);
        assert!(!e.is_empty());
    }
}
