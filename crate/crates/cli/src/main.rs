use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use sllm::demo::{run_demo, DemoExample};
use sllm::experiments::{
    cosines_tsv, reports_table, reports_tsv, run_evaluation, Dataset, EmbeddingSource, EvalConfig, Grouping,
    ModelId, TTestOptions,
};
use sllm::tensor::{AtomDims, TensorValue};
use sllm::{
    build_lexicon, check_derivation, compile_derivation, enumerate_proofs, load_occurrences, parse_formula,
    parse_sequent, search, CalculusConfig, Derivation, EmbeddingFormat, EmbeddingStore, SearchOutcome, Sequent,
    UnknownWordPolicy,
};

/// Proof search and vector semantics for Lambek calculus with soft
/// subexponentials.
#[derive(Parser, Debug)]
#[command(name = "sllm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a derivation of a sequent such as `n, n\s -> s`.
    Prove(ProveArgs),
    /// Compile a derivation file into a linear map and print its shapes.
    Compile(CompileArgs),
    /// Parse a sentence with a lexicon and evaluate its meaning.
    Eval(EvalArgs),
    /// Run the sentence-similarity evaluation.
    Experiment(ExperimentArgs),
    /// Run one of the built-in worked examples.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
struct ProveArgs {
    sequent: String,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    #[arg(long, default_value_t = 40)]
    depth: usize,
    /// Print several distinct derivations instead of one.
    #[arg(long)]
    all: bool,
    /// How many derivations `--all` prints at most.
    #[arg(long, default_value_t = 20)]
    limit: usize,
    /// Also write the (first) derivation's s-expression to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompileArgs {
    derivation_file: PathBuf,
    #[arg(long, default_value = "n=2,s=2")]
    dims: AtomDims,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    /// Also print the dense matrix (rows indexed by the domain).
    #[arg(long)]
    matrix: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    sentence: String,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value = "n=2,s=2")]
    dims: AtomDims,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    /// Goal type of the sentence.
    #[arg(long, default_value = "s")]
    goal: String,
    #[arg(long, default_value_t = 40)]
    depth: usize,
    /// Word vectors for `embed` and `tilde` entries.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long, default_value = "word2vec")]
    format: EmbeddingFormat,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Word vectors as `name=path`; repeat for several sources.
    #[arg(long = "embeddings", required = true, value_parser = parse_named_path)]
    embeddings: Vec<(String, PathBuf)>,
    /// Subject-verb-object occurrences for the relational verb matrices.
    #[arg(long)]
    svo: PathBuf,
    /// Precomputed sentence vectors as `name=path` (the source they join).
    #[arg(long = "sentence-vectors", value_parser = parse_named_path)]
    sentence_vectors: Vec<(String, PathBuf)>,
    /// Comma-separated model names; all applicable models by default.
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelId>,
    #[arg(long, default_value = "first-sentence")]
    grouping: Grouping,
    /// Where the TSV report goes; per-pair cosines are written next to it.
    #[arg(long)]
    report_path: PathBuf,
    /// Explicit triplets file; otherwise derived from the dataset.
    #[arg(long)]
    triplets: Option<PathBuf>,
    #[arg(long, default_value = "word2vec")]
    format: EmbeddingFormat,
    /// Paired rather than two-sample t statistics.
    #[arg(long)]
    paired: bool,
    /// Compare raw human scores instead of scores mapped onto [0, 1].
    #[arg(long)]
    raw_scores: bool,
    /// Weight every occurrence equally when building verb matrices.
    #[arg(long)]
    ignore_counts: bool,
    /// Give unknown words a vector hashed from this seed instead of failing.
    #[arg(long)]
    hash_unknown: Option<u64>,
    /// Base directory for relative embedding paths.
    #[arg(long, env = "SLLM_EMBEDDINGS_DIR")]
    embeddings_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DemoArgs {
    example: DemoExample,
    #[arg(long, default_value = "n=2,s=2")]
    dims: AtomDims,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    #[arg(long, default_value_t = 40)]
    depth: usize,
    /// Seed for the random toy lexicon.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn parse_named_path(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Ok((
            Path::new(s)
                .file_stem()
                .map(|n| n.to_string_lossy().into_owned())
                .ok_or_else(|| format!("expected name=path, got `{s}`"))?,
            PathBuf::from(s),
        )),
    }
}

/// An argument that parsed syntactically but is still unusable.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn config(k0: usize, depth: usize, seq: Option<&Sequent>) -> Result<CalculusConfig> {
    let cfg = CalculusConfig::new(k0, depth).map_err(|e| usage(e.to_string()))?;
    let atoms: Vec<String> = seq
        .map(|s| s.atoms().into_iter().map(str::to_string).collect())
        .unwrap_or_default();
    Ok(cfg.with_atoms(atoms))
}

fn print_derivation(d: &Derivation) {
    println!("{}", d.to_sexpr_pretty());
    println!();
    print!("{}", d.to_tree_string());
}

fn print_tensor(label: &str, t: &TensorValue) {
    println!("{label} : {}", t.shape);
    let coeffs: Vec<String> = t.data.iter().map(|x| format!("{x:.10}")).collect();
    println!("  [{}]", coeffs.join(", "));
}

fn unprovable(seq: &Sequent, outcome: &SearchOutcome, depth: usize) -> anyhow::Error {
    match outcome {
        SearchOutcome::DepthExhausted { min_depth } => {
            anyhow!("`{seq}`: unprovable within depth {depth} (the shallowest proof needs {min_depth})")
        }
        _ => anyhow!("`{seq}`: unprovable within depth {depth}"),
    }
}

fn prove(a: ProveArgs) -> Result<()> {
    let seq = parse_sequent(&a.sequent).map_err(|e| usage(format!("bad sequent: {e}")))?;
    let cfg = config(a.k0, a.depth, Some(&seq))?;
    let outcome = search(&seq, &cfg)?;
    let SearchOutcome::Proved(first) = outcome else {
        return Err(unprovable(&seq, &outcome, a.depth));
    };
    let proofs = if a.all {
        enumerate_proofs(&seq, &cfg, a.limit)?
    } else {
        vec![first]
    };
    if let Some(path) = &a.output {
        std::fs::write(path, format!("{}\n", proofs[0]))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    for (i, d) in proofs.iter().enumerate() {
        if a.all {
            println!("derivation {} of {}", i + 1, proofs.len());
        }
        print_derivation(d);
        if i + 1 < proofs.len() {
            println!();
        }
    }
    Ok(())
}

fn compile(a: CompileArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.derivation_file)
        .with_context(|| format!("cannot read {}", a.derivation_file.display()))?;
    let d = Derivation::parse(&text)?;
    let cfg = config(a.k0, usize::MAX, Some(&d.conclusion))?;
    check_derivation(&d, &cfg)?;
    let map = compile_derivation(&d, &a.dims, &cfg)?;
    println!("sequent  : {}", d.conclusion);
    let domain: Vec<String> = map.domain.iter().map(ToString::to_string).collect();
    println!("domain   : [{}]", domain.join(", "));
    println!("codomain : {}", map.codomain);
    if a.matrix {
        let rows = map.domain_shape().total_dim();
        let cols = map.codomain.total_dim();
        let m = map.to_matrix()?;
        println!("matrix {rows} x {cols}");
        for r in 0..rows {
            let row: Vec<String> = m[r * cols..(r + 1) * cols].iter().map(|x| format!("{x:.6}")).collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let emb = match &a.embeddings {
        Some(p) => EmbeddingStore::load(p, a.format)?,
        None => EmbeddingStore::from_pairs(Vec::<(String, Vec<f64>)>::new())?,
    };
    let lex = build_lexicon(&a.lexicon, &emb, &a.dims, a.k0)?;
    let words = lex.sentence(&a.sentence)?;
    let goal = parse_formula(&a.goal).map_err(|e| usage(format!("bad goal: {e}")))?;
    let seq = Sequent::new(words.iter().map(|e| e.formula.clone()).collect(), goal);
    let cfg = config(a.k0, a.depth, Some(&seq))?;
    let outcome = search(&seq, &cfg)?;
    let SearchOutcome::Proved(d) = outcome else {
        return Err(unprovable(&seq, &outcome, a.depth));
    };
    print_derivation(&d);
    let map = compile_derivation(&d, &a.dims, &cfg)?;
    let inputs: Vec<TensorValue> = words.iter().map(|e| e.value.clone()).collect();
    let out = map.apply_factors(&inputs)?;
    println!();
    print_tensor("meaning", &out);
    Ok(())
}

fn resolve(dir: &Option<PathBuf>, p: &Path) -> PathBuf {
    match dir {
        Some(d) if p.is_relative() && !p.exists() => d.join(p),
        _ => p.to_path_buf(),
    }
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let dataset = Dataset::load(&a.dataset)?;
    let occurrences = load_occurrences(resolve(&a.embeddings_dir, &a.svo))?;
    let policy = match a.hash_unknown {
        Some(seed) => UnknownWordPolicy::HashRandom { seed },
        None => UnknownWordPolicy::Error,
    };
    let mut sources = Vec::new();
    for (name, path) in &a.embeddings {
        let words = EmbeddingStore::load(resolve(&a.embeddings_dir, path), a.format)?.with_policy(policy);
        let mut src = EmbeddingSource::new(name.clone(), words, &occurrences, a.ignore_counts);
        if let Some((_, sp)) = a.sentence_vectors.iter().find(|(n, _)| n == name) {
            src = src.with_sentences(EmbeddingStore::load(resolve(&a.embeddings_dir, sp), a.format)?);
        }
        sources.push(src);
    }
    if let Some((n, _)) = a.sentence_vectors.iter().find(|(n, _)| !a.embeddings.iter().any(|(m, _)| m == n)) {
        return Err(usage(format!("sentence vectors `{n}` name no embedding source")));
    }
    let models = if a.models.is_empty() {
        ModelId::ALL.to_vec()
    } else {
        a.models.clone()
    };
    let triplets = a.triplets.as_ref().map(|p| dataset.load_triplets(p)).transpose()?;
    let cfg = EvalConfig {
        grouping: a.grouping,
        ttest: TTestOptions {
            paired: a.paired,
            normalize: !a.raw_scores,
        },
        triplets,
    };
    let reports = run_evaluation(&dataset, &models, &sources, &cfg)?;
    if let Some(dir) = a.report_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(&a.report_path, reports_tsv(&reports))
        .with_context(|| format!("cannot write {}", a.report_path.display()))?;
    let cos_path = a.report_path.with_extension("cosines.tsv");
    std::fs::write(&cos_path, cosines_tsv(&reports)).with_context(|| format!("cannot write {}", cos_path.display()))?;
    print!("{}", reports_table(&reports));
    println!();
    println!("report  : {}", a.report_path.display());
    println!("cosines : {}", cos_path.display());
    Ok(())
}

fn demo(a: DemoArgs) -> Result<()> {
    let mut cfg = config(a.k0, a.depth, None)?;
    cfg = cfg.with_atoms(a.dims.0.keys().cloned());
    let run = run_demo(a.example, &a.dims, &cfg, a.seed)?;
    println!("{}: {}", run.example, run.example.sentence());
    println!("sequent: {}", run.sequent);
    println!();
    print_derivation(&run.derivation);
    println!();
    check_derivation(&run.derivation, &cfg)?;
    print_tensor("meaning", &run.output);
    print_tensor("oracle", &run.oracle);
    println!(
        "matches oracle: {} (relative difference {:.2e}, {} derivation(s) examined)",
        if run.matches() { "yes" } else { "no" },
        run.output.rel_diff(&run.oracle),
        run.examined
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Prove(a) => prove(a),
        Command::Compile(a) => compile(a),
        Command::Eval(a) => eval(a),
        Command::Experiment(a) => experiment(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
