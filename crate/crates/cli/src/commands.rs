use std::io::Write;
use std::path::{Path, PathBuf};

use clickclust::eval::evaluate;
use clickclust::fcm::FcmConfig;
use clickclust::features::WeightMethod;
use clickclust::pipeline::{cluster_sessions, PipelineOptions, Vectorization};
use clickclust::session::{dataset_stats, parse_log, CategoryDictionary, DictionaryMode, SessionDataset};
use clickclust::tolerance::{
    check_threshold, merge_tolerance_classes, similarity_matrix, streaming_tolerance_clusters,
    upper_approximation, DEFAULT_THRESHOLD,
};
use clickclust::ClusterSet;
use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::FileConfig;
use crate::error::CliError;
use crate::{CommonArgs, EvalArgs, FcmArgs, Format, InputArgs, StatsArgs, ToleranceArgs};

/// Memberships are only written past this many sessions with `--emit-memberships`.
const MEMBERSHIP_EMIT_LIMIT: usize = 10_000;

struct Session {
    file: FileConfig,
    format: Format,
    output: Option<PathBuf>,
    threads: Option<usize>,
    verbose: u8,
}

impl Session {
    fn new(common: &CommonArgs) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let format = match (common.format, &file.format) {
            (Some(f), _) => f,
            (None, Some(s)) => Format::from_str(s, true)
                .map_err(|_| CliError::Usage(format!("unknown format {s:?} in config")))?,
            (None, None) => Format::Json,
        };
        let threads = common.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(Self {
            output: common.output.clone().or_else(|| file.output.clone()),
            threads,
            verbose: common.verbose,
            format,
            file,
        })
    }

    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("clickclust: {}", msg.as_ref());
        }
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.threads {
            None => Ok(f()),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| CliError::Internal(format!("thread pool: {e}"))),
        }
    }

    fn emit(&self, body: String) -> Result<(), CliError> {
        match &self.output {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
            }
        }
    }

    fn emit_json(&self, doc: Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        self.emit(text)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

struct LoadedInput {
    path: PathBuf,
    digest: String,
    data: SessionDataset,
}

fn load_sessions(args: &InputArgs, session: &Session) -> Result<LoadedInput, CliError> {
    let path = args
        .input
        .clone()
        .or_else(|| session.file.input.clone())
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let mode = match args.dictionary.clone().or_else(|| session.file.dictionary.clone()) {
        Some(dict_path) => {
            let text = String::from_utf8(read_file(&dict_path)?)
                .map_err(|_| CliError::Input(format!("{} is not UTF-8", dict_path.display())))?;
            let dict = CategoryDictionary::new(text.split_whitespace())
                .map_err(|e| CliError::Input(format!("{}: {e}", dict_path.display())))?;
            DictionaryMode::External(dict)
        }
        None => DictionaryMode::Embedded,
    };
    let bytes = read_file(&path)?;
    let data = parse_log(&bytes, &mode).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    session.log(format!("parsed {} sessions from {}", data.len(), path.display()));
    Ok(LoadedInput {
        digest: sha256_hex(&bytes),
        path,
        data,
    })
}

fn metadata(command: &str, config: Value, inputs: Value) -> Value {
    json!({
        "tool": "clickclust",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "inputs": inputs,
    })
}

fn input_meta(input: &LoadedInput) -> Value {
    json!([{ "path": input.path.display().to_string(), "sha256": input.digest }])
}

/// Adds every field of `extra` (an object) to `doc`.
fn merge(mut doc: Map<String, Value>, extra: Value) -> Map<String, Value> {
    if let Value::Object(m) = extra {
        doc.extend(m);
    }
    doc
}

pub fn stats(args: StatsArgs) -> Result<(), CliError> {
    let session = Session::new(&args.common)?;
    let input = load_sessions(&args.input, &session)?;
    let st = dataset_stats(&input.data);
    match session.format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata("stats", json!({}), input_meta(&input)));
            let doc = merge(doc, serde_json::to_value(&st).map_err(|e| CliError::Internal(e.to_string()))?);
            session.emit_json(Value::Object(doc))
        }
        Format::Csv => session.emit(format!(
            "num_sessions,total_visits,avg_visits,num_categories,length_min,length_max\n{},{},{:.6},{},{},{}\n",
            st.num_sessions, st.total_visits, st.avg_visits, st.num_categories, st.length_min, st.length_max
        )),
    }
}

pub fn tolerance(args: ToleranceArgs) -> Result<(), CliError> {
    let session = Session::new(&args.common)?;
    let p = args.p.or(session.file.p).unwrap_or(DEFAULT_THRESHOLD);
    check_threshold(p)?;
    let streaming = args.streaming || session.file.streaming.unwrap_or(false);
    let matrix_out = args.matrix_out.clone().or_else(|| session.file.matrix_out.clone());
    if streaming && matrix_out.is_some() {
        return Err(CliError::Usage("--matrix-out cannot be combined with --streaming".into()));
    }
    let input = load_sessions(&args.input, &session)?;

    let (relation, clusters, matrix_csv) = session.in_pool(|| -> Result<_, CliError> {
        if streaming {
            return Ok((None, streaming_tolerance_clusters(&input.data, p)?, None));
        }
        let sim = similarity_matrix(&input.data);
        let rel = upper_approximation(&sim, p)?;
        let clusters = merge_tolerance_classes(&rel);
        let csv = matrix_out.as_ref().map(|_| sim.to_csv());
        Ok((Some(rel), clusters, csv))
    })??;
    session.log(format!("{} clusters at p = {p}", clusters.len()));

    if let (Some(path), Some(csv)) = (&matrix_out, matrix_csv) {
        std::fs::write(path, csv).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }

    match session.format {
        Format::Json => {
            let config = json!({ "p": p, "streaming": streaming });
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata("tolerance", config, input_meta(&input)));
            let mut doc = merge(doc, clusters.to_json(Some(p)));
            if let Some(rel) = &relation {
                doc.insert("upper_approximations".into(), rel.to_json());
            }
            session.emit_json(Value::Object(doc))
        }
        Format::Csv => session.emit(clusters.to_csv()),
    }
}

fn parse_choice<T: std::str::FromStr<Err = clickclust::Error>>(
    flag: &Option<String>,
    file: &Option<String>,
    default: T,
) -> Result<T, CliError> {
    match flag.as_ref().or(file.as_ref()) {
        Some(s) => s.parse().map_err(CliError::from),
        None => Ok(default),
    }
}

pub fn fcm(args: FcmArgs) -> Result<(), CliError> {
    let session = Session::new(&args.common)?;
    let f = &session.file;
    let defaults = FcmConfig::default();
    let fcm_config = FcmConfig {
        alpha: args.alpha.or(f.alpha).unwrap_or(defaults.alpha),
        m: args.m.or(f.m).unwrap_or(defaults.m),
        max_iter: args.max_iter.or(f.max_iter).unwrap_or(defaults.max_iter),
        epsilon: args.epsilon.or(f.epsilon).unwrap_or(defaults.epsilon),
        seed: args.seed.or(f.seed).unwrap_or(defaults.seed),
        init_beta: args.beta.or(f.beta).unwrap_or(defaults.init_beta),
        weights: None,
    };
    fcm_config.validate()?;
    let weight_method: WeightMethod = parse_choice(&args.weights, &f.weights, WeightMethod::Uniform)?;
    let vectorization: Vectorization = parse_choice(&args.vectorize, &f.vectorize, Vectorization::Normalized)?;
    let label_p = args.label_p.or(f.label_p).unwrap_or(DEFAULT_THRESHOLD);
    check_threshold(label_p)?;
    let merge_p = args.merge_p.or(f.merge_p);
    if let Some(p) = merge_p {
        check_threshold(p)?;
    }
    let emit_flag = args.emit_memberships || f.emit_memberships.unwrap_or(false);

    let options = PipelineOptions {
        vectorization,
        weight_method,
        label_threshold: label_p,
        merge_threshold: merge_p,
        fcm: fcm_config.clone(),
    };
    let input = load_sessions(&args.input, &session)?;
    let out = session.in_pool(|| cluster_sessions(&input.data, &options))??;

    let u = &out.result.memberships;
    for i in 0..u.n() {
        let row = u.row(i);
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || row.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(CliError::Internal(format!("membership row {} is not a distribution", i + 1)));
        }
    }
    if !out.result.converged {
        eprintln!(
            "clickclust: warning: not converged after {} iterations",
            out.result.iterations
        );
    }
    session.log(format!(
        "{} centers, {} iterations, {} hard clusters",
        out.result.centers.c(),
        out.result.iterations,
        out.clusters.len()
    ));

    match session.format {
        Format::Json => {
            let emit_memberships = emit_flag || input.data.len() <= MEMBERSHIP_EMIT_LIMIT;
            let config = json!({
                "alpha": fcm_config.alpha,
                "m": fcm_config.m,
                "beta": fcm_config.init_beta,
                "epsilon": fcm_config.epsilon,
                "max_iter": fcm_config.max_iter,
                "seed": fcm_config.seed,
                "weights": weight_method,
                "vectorize": vectorization,
                "label_p": label_p,
                "merge_p": merge_p,
                "emit_memberships": emit_memberships,
            });
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata("fcm", config, input_meta(&input)));
            doc.insert("weights".into(), json!(out.weights));
            let doc = merge(doc, out.result.to_json(emit_memberships));
            let doc = merge(doc, out.clusters.to_json(None));
            session.emit_json(Value::Object(doc))
        }
        Format::Csv => session.emit(out.clusters.to_csv()),
    }
}

fn load_cluster_file(path: &Path) -> Result<(ClusterSet, String), CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') {
        ClusterSet::from_json(&text)
    } else {
        ClusterSet::from_csv(&text)
    };
    let clusters = parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((clusters, sha256_hex(&bytes)))
}

pub fn eval(args: EvalArgs) -> Result<(), CliError> {
    let session = Session::new(&args.common)?;
    let required = |flag: &Option<PathBuf>, file: &Option<PathBuf>, name: &str| {
        flag.clone()
            .or_else(|| file.clone())
            .ok_or_else(|| CliError::Usage(format!("--{name} is required")))
    };
    let clusters_path = required(&args.clusters, &session.file.clusters, "clusters")?;
    let labels_path = required(&args.labels, &session.file.labels, "labels")?;
    let per_pair = args.per_pair || session.file.per_pair.unwrap_or(false);

    let (clusters, clusters_digest) = load_cluster_file(&clusters_path)?;
    let (labels, labels_digest) = load_cluster_file(&labels_path)?;
    let report = evaluate(&clusters, &labels, per_pair)?;

    match session.format {
        Format::Json => {
            let inputs = json!([
                { "path": clusters_path.display().to_string(), "sha256": clusters_digest },
                { "path": labels_path.display().to_string(), "sha256": labels_digest },
            ]);
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata("eval", json!({ "per_pair": per_pair }), inputs));
            let doc = merge(doc, serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?);
            session.emit_json(Value::Object(doc))
        }
        Format::Csv => session.emit(report.to_csv()),
    }
}
