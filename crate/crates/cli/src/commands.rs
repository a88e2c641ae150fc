//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use relwsd::cascade::{
    parse_cascade, parse_instances, write_instances, Cascade, DisambiguationInstance, EnrichmentCache,
    HeuristicDefaults, InstanceHeader, PosRadii, Resources,
};
use relwsd::corpus::stream::{read_stream, write_stream, StreamHeader};
use relwsd::corpus::{
    normalize_corpus, read_corpus, Normalizer, PipelineOptions, StopwordList, SuffixLemmatizer, Token,
};
use relwsd::eval::{baseline_first_sense, baseline_random, parse_answers, score_answers, write_answers, GoldStandard};
use relwsd::hash::short_hash;
use relwsd::lexicon::{Lexicon, LoadOptions};
use relwsd::pseudo::{generate, PseudowordConfig};
use relwsd::relmatrix::{
    codec, count_cooccurrences, RelevanceMatrix, RelevanceModel, Vocabulary, DEFAULT_RADIUS, DEFAULT_THRESHOLD,
    DEFAULT_VOCAB_SIZE,
};
use relwsd::TOOL_VERSION;

use crate::config::RunConfig;
use crate::{
    BaselineArgs, BaselineKind, BuildMatrixArgs, DisambiguateArgs, EvaluateArgs, Failure, NormalizeArgs,
    PseudowordArgs, ReportFormat,
};

type Outcome = Result<(), Failure>;

fn require<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T, Failure> {
    flag.or(config).ok_or_else(|| {
        Failure::Usage(format!(
            "--{name} is required (flag or config key `{}`)",
            name.replace('-', "_")
        ))
    })
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> anyhow::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn source(path: &Path) -> String {
    path.display().to_string()
}

fn normalizer(stopwords: Option<&Path>) -> anyhow::Result<Normalizer> {
    let list = match stopwords {
        Some(p) => StopwordList::from_path(p)?,
        None => StopwordList::english(),
    };
    Ok(Normalizer::new(list, std::sync::Arc::new(SuffixLemmatizer::english())))
}

/// Hash of the parameters that shape an artifact; paths are left out so
/// that moving files does not change it.
fn config_hash(params: &[(&str, String)]) -> String {
    let text: String = params.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    short_hash(text.as_bytes())
}

fn header(fields: &[(&str, String)]) -> Vec<(String, String)> {
    std::iter::once(("tool".to_string(), TOOL_VERSION.to_string()))
        .chain(fields.iter().map(|(k, v)| (k.to_string(), v.clone())))
        .collect()
}

/// Where the vocabulary of a matrix file lives: `m.bin` -> `m.vocab.tsv`.
pub fn vocab_path(matrix: &Path) -> PathBuf {
    matrix.with_extension("vocab.tsv")
}

fn load_model(matrix: &Path) -> anyhow::Result<RelevanceModel> {
    let bytes = fs::read(matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let m = codec::decode_any(&bytes, &source(matrix))?;
    let vpath = vocab_path(matrix);
    let vocab = Vocabulary::from_tsv(&read_text(&vpath)?, &source(&vpath))?;
    RelevanceModel::new(vocab, m).with_context(|| format!("{} does not match {}", vpath.display(), matrix.display()))
}

fn load_lexicon(path: &Path, normalizer: &Normalizer) -> anyhow::Result<(Lexicon, String)> {
    let text = read_text(path)?;
    let lex = Lexicon::from_json(&text, normalizer, &LoadOptions::default())
        .with_context(|| format!("loading {}", path.display()))?;
    Ok((lex, short_hash(text.as_bytes())))
}

fn load_instances(path: &Path) -> anyhow::Result<(InstanceHeader, Vec<DisambiguationInstance>)> {
    Ok(parse_instances(&read_text(path)?, &source(path))?)
}

fn check_stopwords(what: &str, found: &str, expected: &str) -> anyhow::Result<()> {
    if !found.is_empty() && !expected.is_empty() && found != expected {
        bail!("{what} was normalized with stopword list {found}, but this run uses {expected}");
    }
    Ok(())
}

pub fn normalize(args: NormalizeArgs, config: &RunConfig) -> Outcome {
    let corpus = require(args.corpus, config.corpus.clone(), "corpus")?;
    let out = require(args.out, config.out.clone(), "out")?;
    let norm = normalizer(args.stopwords.as_deref().or(config.stopwords.as_deref()))?;
    let options = PipelineOptions {
        english_threshold: (!args.keep_all).then_some(relwsd::corpus::DEFAULT_ENGLISH_THRESHOLD),
        ..PipelineOptions::default()
    };
    let (docs, skipped) = read_corpus(&corpus)?;
    let (normalized, mut diag) = normalize_corpus(&docs, &norm, &options);
    diag.invalid_sequences_skipped = skipped;

    let stopword_hash = norm.stopwords().hash().to_string();
    let lemmatizer = norm.lemmatizer().id();
    let chash = config_hash(&[
        ("stopword_hash", stopword_hash.clone()),
        ("lemmatizer", lemmatizer.clone()),
        ("english_threshold", format!("{:?}", options.english_threshold)),
    ]);
    let mut seen = std::collections::HashSet::new();
    for doc in &normalized {
        if !seen.insert(doc.doc_id.as_str()) {
            return Err(anyhow!("two documents share the name `{}`", doc.doc_id).into());
        }
        let mut h = StreamHeader::default();
        for (k, v) in header(&[
            ("doc_id", doc.doc_id.clone()),
            ("stopword_hash", stopword_hash.clone()),
            ("lemmatizer", lemmatizer.clone()),
            ("config_hash", chash.clone()),
        ]) {
            h.set(&k, v);
        }
        write_file(&out.join(format!("{}.tok", doc.doc_id)), write_stream(&h, &doc.tokens))?;
    }
    eprintln!("{}", serde_json::to_string(&diag).expect("diagnostics serialize"));
    Ok(())
}

fn read_streams(dir: &Path) -> anyhow::Result<(Vec<Vec<Token>>, String)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "tok"));
    paths.sort();
    if paths.is_empty() {
        bail!("no .tok files in {}", dir.display());
    }
    let mut streams = Vec::with_capacity(paths.len());
    let mut stopword_hash: Option<String> = None;
    for p in &paths {
        let (h, tokens) = read_stream(&read_text(p)?, &source(p))?;
        let hash = h.get("stopword_hash").unwrap_or("").to_string();
        match &stopword_hash {
            None => stopword_hash = Some(hash),
            Some(prev) if *prev != hash => {
                bail!("{} uses stopword list {hash}, earlier streams use {prev}", p.display())
            }
            Some(_) => {}
        }
        streams.push(tokens);
    }
    Ok((streams, stopword_hash.unwrap_or_default()))
}

pub fn build_matrix(args: BuildMatrixArgs, config: &RunConfig) -> Outcome {
    let corpus = require(args.corpus, config.corpus.clone(), "corpus")?;
    let out = require(args.out, config.out.clone(), "out")?;
    let k = args.vocab_size.or(config.vocab_size).unwrap_or(DEFAULT_VOCAB_SIZE);
    let radius = args.radius.or(config.radius).unwrap_or(DEFAULT_RADIUS);
    let threshold = args.threshold.or(config.threshold).unwrap_or(DEFAULT_THRESHOLD);
    if k == 0 || radius == 0 {
        return Err(Failure::Usage("--vocab-size and --radius must be positive".into()));
    }
    let (streams, stopword_hash) = read_streams(&corpus)?;
    let chash = config_hash(&[
        ("vocab_size", k.to_string()),
        ("radius", radius.to_string()),
        ("threshold", threshold.to_string()),
        ("stopword_hash", stopword_hash.clone()),
    ]);
    let vocab = Vocabulary::build(streams.iter().map(Vec::as_slice), k);
    let counts = count_cooccurrences(&streams, &vocab, radius)?;
    let matrix = RelevanceMatrix::from_counts(&counts, threshold)?
        .with_stopword_hash(&stopword_hash)
        .with_config_hash(&chash);
    let vocab = vocab.to_tsv(&header(&[("stopword_hash", stopword_hash), ("config_hash", chash)]));
    let is_tsv = out.extension().is_some_and(|e| e == "tsv");
    if is_tsv {
        write_file(&out, codec::encode_tsv(&matrix, TOOL_VERSION))?;
    } else {
        write_file(&out, codec::encode_binary(&matrix))?;
    }
    write_file(&vocab_path(&out), vocab)?;
    eprintln!(
        "vocabulary {} words, {} positions, {} stored cells",
        matrix.vocab_size(),
        matrix.meta().total_positions,
        matrix.nnz()
    );
    Ok(())
}

pub fn lexicon_check(lexicon: Option<PathBuf>, stopwords: Option<PathBuf>, config: &RunConfig) -> Outcome {
    let path = require(lexicon, config.lexicon.clone(), "lexicon")?;
    let norm = normalizer(stopwords.as_deref().or(config.stopwords.as_deref()))?;
    let text = read_text(&path)?;
    let violations = Lexicon::check(&text, &norm);
    if violations.is_empty() {
        let lex = Lexicon::from_json(&text, &norm, &LoadOptions::default())?;
        let senses: usize = lex.entries().iter().map(|e| e.senses.len()).sum();
        println!(
            "ok: {} entries, {} senses, {} multiword expressions",
            lex.entries().len(),
            senses,
            lex.multiwords().len()
        );
        return Ok(());
    }
    for v in &violations {
        println!("{v}");
    }
    Err(anyhow!("{} has {} violation(s)", path.display(), violations.len()).into())
}

fn heuristic_defaults(args: &DisambiguateArgs, config: &RunConfig) -> Result<HeuristicDefaults, Failure> {
    let base = HeuristicDefaults::default();
    let pick = |flag: Option<usize>, cfg: Option<usize>, default: Option<usize>| flag.or(cfg).or(default);
    let defaults = HeuristicDefaults {
        cutoff: args.cutoff.or(config.cutoff).unwrap_or(base.cutoff),
        max_senses: args.max_senses.or(config.max_senses).unwrap_or(base.max_senses),
        expand_depth: args.expand_depth.or(config.expand_depth).unwrap_or(base.expand_depth),
        radii: PosRadii {
            noun: pick(args.radius_noun, config.radius_noun, base.radii.noun),
            verb: pick(args.radius_verb, config.radius_verb, base.radii.verb),
            adj: pick(args.radius_adj, config.radius_adj, base.radii.adj),
            adv: pick(args.radius_adv, config.radius_adv, base.radii.adv),
        },
        pos_compat: args
            .pos_compat
            .map(bool::from)
            .or(config.pos_compat)
            .unwrap_or(base.pos_compat),
        supervised: args
            .supervised
            .map(bool::from)
            .or(config.supervised)
            .unwrap_or(base.supervised),
    };
    if !(defaults.cutoff > 0.0 && defaults.cutoff < 1.0) {
        return Err(Failure::Usage(format!("cutoff {} is outside (0, 1)", defaults.cutoff)));
    }
    if defaults.max_senses == 0 {
        return Err(Failure::Usage("max_senses must be at least 1".into()));
    }
    Ok(defaults)
}

fn defaults_fingerprint(d: &HeuristicDefaults) -> Vec<(&'static str, String)> {
    vec![
        ("cutoff", d.cutoff.to_string()),
        ("max_senses", d.max_senses.to_string()),
        ("expand_depth", d.expand_depth.to_string()),
        ("radii", format!("{:?}", d.radii)),
        ("pos_compat", d.pos_compat.to_string()),
        ("supervised", d.supervised.to_string()),
    ]
}

pub fn disambiguate(args: DisambiguateArgs, config: &RunConfig) -> Outcome {
    let lexicon_path = require(args.lexicon.clone(), config.lexicon.clone(), "lexicon")?;
    let cascade_path = require(args.cascade.clone(), config.cascade.clone(), "cascade")?;
    let instances_path = require(args.instances.clone(), config.instances.clone(), "instances")?;
    let matrix_path = args.matrix.clone().or(config.matrix.clone());
    let out = args.out.clone().or(config.out.clone());
    let defaults = heuristic_defaults(&args, config)?;

    let norm = normalizer(args.stopwords.as_deref().or(config.stopwords.as_deref()))?;
    let run_hash = norm.stopwords().hash().to_string();
    let model = match &matrix_path {
        Some(p) => load_model(p)?,
        None => RelevanceModel::empty(),
    };
    check_stopwords("the matrix", &model.matrix().meta().stopword_hash, &run_hash)?;
    let (lexicon, lexicon_hash) = load_lexicon(&lexicon_path, &norm)?;
    let (inst_header, instances) = load_instances(&instances_path)?;
    if let Some(h) = inst_header.get("stopword_hash") {
        check_stopwords("the instance file", h, &run_hash)?;
        check_stopwords("the instance file", h, &model.matrix().meta().stopword_hash)?;
    }
    let spec =
        parse_cascade(&read_text(&cascade_path)?).with_context(|| format!("parsing {}", cascade_path.display()))?;
    let cascade = Cascade::compile(&spec, &defaults)?;

    let cache = EnrichmentCache::new();
    let res = Resources {
        lexicon: &lexicon,
        model: &model,
        cache: &cache,
    };
    let results: Vec<_> = instances.par_iter().map(|inst| cascade.run(res, inst)).collect();

    let mut answers = Vec::new();
    for (inst, r) in instances.iter().zip(&results) {
        if args.trace {
            for step in &r.trace {
                eprintln!("{} {step}", inst.instance_id);
            }
        }
        if let Some(key) = r.verdict.sense_key() {
            answers.push(relwsd::eval::Answer::new(&inst.instance_id, key, &r.verdict.heuristic));
        }
    }
    let mut fingerprint = defaults_fingerprint(&defaults);
    fingerprint.push(("cascade", spec.to_string()));
    let h = header(&[
        ("cascade_hash", short_hash(spec.to_string().as_bytes())),
        (
            "matrix_hash",
            if matrix_path.is_some() {
                model.content_hash().to_string()
            } else {
                "none".into()
            },
        ),
        ("lexicon_hash", lexicon_hash),
        ("config_hash", config_hash(&fingerprint)),
    ]);
    emit(out.as_deref(), &write_answers(&h, &answers))?;
    eprintln!("answered {} of {} instances", answers.len(), instances.len());
    Ok(())
}

pub fn evaluate(args: EvaluateArgs, config: &RunConfig) -> Outcome {
    let answers_path = require(args.answers, config.answers.clone(), "answers")?;
    let gold_path = require(args.gold, config.gold.clone(), "gold")?;
    let answers = parse_answers(&read_text(&answers_path)?, &source(&answers_path))?;
    let gold = GoldStandard::parse(&read_text(&gold_path)?, &source(&gold_path))?;
    let total = match (args.total, args.instances.or(config.instances.clone())) {
        (Some(n), _) => n,
        (None, Some(p)) => load_instances(&p)?.1.len() as u64,
        (None, None) => gold.len() as u64,
    };
    let report = score_answers(&answers, &gold, total)?;
    let text = match args.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    emit(args.out.or(config.out.clone()).as_deref(), &text)?;
    Ok(())
}

pub fn pseudoword(args: PseudowordArgs, config: &RunConfig, seed: u64) -> Outcome {
    let corpus = require(args.corpus, config.corpus.clone(), "corpus")?;
    let out = require(args.out, config.out.clone(), "out")?;
    let word_a = require(args.word_a, config.word_a.clone(), "word-a")?;
    let word_b = require(args.word_b, config.word_b.clone(), "word-b")?;
    let mut cfg = PseudowordConfig::new(word_a, word_b);
    cfg.seed = seed;
    if let Some(h) = args.holdout.or(config.holdout) {
        cfg.holdout = h;
    }
    if let Some(g) = args.gloss_size.or(config.gloss_size) {
        cfg.gloss_size = g;
    }
    let norm = normalizer(args.stopwords.as_deref().or(config.stopwords.as_deref()))?;
    let (docs, _) = read_corpus(&corpus)?;
    let (normalized, _) = normalize_corpus(&docs, &norm, &PipelineOptions::default());
    let streams: Vec<Vec<Token>> = normalized.into_iter().map(|d| d.tokens).collect();
    let task = generate(&streams, &cfg)?;

    let stopword_hash = norm.stopwords().hash().to_string();
    let chash = config_hash(&[
        ("word_a", cfg.word_a.clone()),
        ("word_b", cfg.word_b.clone()),
        ("holdout", cfg.holdout.to_string()),
        ("seed", cfg.seed.to_string()),
        ("gloss_size", cfg.gloss_size.to_string()),
        ("stopword_hash", stopword_hash.clone()),
    ]);
    let fields = header(&[
        ("pseudoword", task.pseudoword.clone()),
        ("stopword_hash", stopword_hash.clone()),
        ("config_hash", chash.clone()),
    ]);
    let inst_header: InstanceHeader = fields.iter().cloned().collect();
    write_file(
        &out.join("instances.jsonl"),
        write_instances(&inst_header, &task.instances),
    )?;
    write_file(&out.join("gold.txt"), task.gold.to_text(&fields))?;
    write_file(&out.join("lexicon.json"), &task.lexicon_json)?;
    let mut h = StreamHeader::default();
    for (k, v) in &fields {
        h.set(k, v.clone());
    }
    for (i, seg) in task.training.iter().enumerate() {
        write_file(&out.join("train").join(format!("{i:05}.tok")), write_stream(&h, seg))?;
    }
    eprintln!(
        "{}: {} instances, training counts {} / {}",
        task.pseudoword,
        task.instances.len(),
        task.training_counts[0],
        task.training_counts[1]
    );
    Ok(())
}

pub fn baseline(args: BaselineArgs, config: &RunConfig, seed: u64) -> Outcome {
    let lexicon_path = require(args.lexicon, config.lexicon.clone(), "lexicon")?;
    let instances_path = require(args.instances, config.instances.clone(), "instances")?;
    let norm = normalizer(args.stopwords.as_deref().or(config.stopwords.as_deref()))?;
    let (lexicon, lexicon_hash) = load_lexicon(&lexicon_path, &norm)?;
    let (_, instances) = load_instances(&instances_path)?;
    let (answers, kind) = match args.kind {
        BaselineKind::Random => (
            baseline_random(&instances, &lexicon, seed),
            format!("random seed={seed}"),
        ),
        BaselineKind::FirstSense => (baseline_first_sense(&instances, &lexicon), "first_sense".to_string()),
    };
    let h = header(&[("baseline", kind), ("lexicon_hash", lexicon_hash)]);
    emit(args.out.or(config.out.clone()).as_deref(), &write_answers(&h, &answers))?;
    Ok(())
}
