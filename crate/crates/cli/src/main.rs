//! `dise`: generate and verify spatial-reasoning VQA datasets, score model
//! answers, plan human-assessment booklets and run the assessment server.

use clap::{Parser, Subcommand};
use dise_core::pipeline::{
    gen_dataset, verify_item, ContentRegistry, DatasetSpec, Manifest, PipelineError, Task,
};
use dise_eval::{read_answers, report, score, AnswerKey, EvalError, Format};
use dise_psychometrics::{derive_booklet_size, make_booklets, BookletPlan, PsychError};
use dise_service::{
    compute_stats, fit_irt_report, load_items, load_irt, read_responses, save_irt, serve, stats_table, AppState,
    Catalog, ServiceError,
};
use std::collections::BTreeMap;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "dise", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, verify and write `count` items of one task.
    Gen {
        #[arg(long)]
        task: Task,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        namespace: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        distractors: usize,
    },
    /// Generate a multi-task dataset from a TOML or JSON spec.
    GenDataset {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-run quality control on every item in a directory.
    Verify { dir: PathBuf },
    /// Print each item's prompt as one JSON line.
    EmitPrompts { dir: PathBuf },
    /// Score an answers file against a manifest.
    Score {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        answers: PathBuf,
        /// `.json` for a JSON report, anything else for text.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build a booklet plan over a dataset's items.
    Plan {
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Items per booklet.
        #[arg(long, conflicts_with = "booklets")]
        k: Option<usize>,
        /// Target booklet count; K is derived from it.
        #[arg(long)]
        booklets: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        anchor_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the assessment server.
    Serve {
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        state: PathBuf,
    },
    /// Summarize the response log; `--fit-irt` also fits and stores the 2PL model.
    Stats {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        fit_irt: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Psych(#[from] PsychError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0} item(s) failed quality control")]
    QcFailed(usize),
}

fn read_spec(path: &Path) -> Result<DatasetSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn run_dataset(spec: &DatasetSpec) -> Result<(), CliError> {
    let total = spec.total();
    let step = (total / 20).max(1);
    let m = gen_dataset(spec, |done, total| {
        if done % step == 0 || done == total {
            eprintln!("{done}/{total}");
        }
    })?;
    let s = m.header.splits;
    println!(
        "{} items written to {} (train {}, val {}, test {}); {} skipped",
        m.header.items,
        spec.out_dir.display(),
        s.train,
        s.val,
        s.test,
        m.header.skipped.len()
    );
    Ok(())
}

fn catalog(items: &Path) -> Result<Catalog, CliError> {
    Ok(load_items(items)?
        .into_iter()
        .map(|it| (it.question_id, (it.task, it.dise_category)))
        .collect())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            task,
            count,
            namespace,
            out,
            distractors,
        } => run_dataset(&DatasetSpec {
            namespace,
            counts: BTreeMap::from([(task, count)]),
            n_distractors: distractors,
            cell_range: (5, 15),
            out_dir: out,
        }),
        Command::GenDataset { config } => run_dataset(&read_spec(&config)?),
        Command::Verify { dir } => {
            let items = load_items(&dir)?;
            let mut registry = ContentRegistry::new();
            let mut failed = 0;
            let mut out = std::io::stdout().lock();
            for item in &items {
                match verify_item(item, &dir, &mut registry) {
                    Ok(r) => {
                        failed += !r.passed() as usize;
                        writeln!(out, "{}", serde_json::to_string(&r)?)?;
                    }
                    Err(e) => {
                        failed += 1;
                        let line = serde_json::json!({"question_id": item.question_id, "error": e.to_string()});
                        writeln!(out, "{line}")?;
                    }
                }
            }
            eprintln!("{} verified, {failed} failed", items.len());
            if failed > 0 {
                return Err(CliError::QcFailed(failed));
            }
            Ok(())
        }
        Command::EmitPrompts { dir } => {
            let mut out = std::io::stdout().lock();
            for item in load_items(&dir)? {
                let line = serde_json::json!({"question_id": item.question_id, "prompt_text": item.prompt_text});
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        Command::Score {
            key,
            answers,
            report: out,
        } => {
            let key = AnswerKey::load(&key)?;
            let answers = read_answers(&std::fs::read_to_string(&answers)?)?;
            let run = score(&key, &answers)?;
            match out {
                Some(path) => std::fs::write(&path, report(&run, Format::from_path(&path)))?,
                None => print!("{}", report(&run, Format::Text)),
            }
            Ok(())
        }
        Command::Plan {
            items,
            out,
            k,
            booklets,
            anchor_fraction,
            seed,
        } => {
            let ids: Vec<String> = Manifest::read(&items)?.entries.into_iter().map(|e| e.question_id).collect();
            let k = match (k, booklets) {
                (Some(k), _) => k,
                (None, Some(b)) => derive_booklet_size(ids.len(), b, anchor_fraction)
                    .map(|(k, _)| k)
                    .ok_or_else(|| CliError::Usage(format!("no booklet size gives {b} booklets")))?,
                (None, None) => return Err(CliError::Usage("pass --k or --booklets".into())),
            };
            let plan = make_booklets(&ids, k, anchor_fraction, seed)?;
            std::fs::write(&out, serde_json::to_vec_pretty(&plan)?)?;
            println!("{} booklets of K={} with a={} anchors over I={} items", plan.len(), plan.k, plan.a, plan.i);
            Ok(())
        }
        Command::Serve {
            items,
            plan,
            port,
            state,
        } => {
            let plan: BookletPlan = serde_json::from_slice(&std::fs::read(&plan)?)?;
            let app = AppState::open(&items, plan, &state)?;
            let addr = SocketAddr::from(([0, 0, 0, 0], port));
            eprintln!("listening on {addr}");
            tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?
                .block_on(serve(app, addr))?;
            Ok(())
        }
        Command::Stats {
            state,
            items,
            fit_irt,
            json,
        } => {
            let catalog = catalog(&items)?;
            let records = read_responses(&state)?;
            let irt = if fit_irt {
                let r = fit_irt_report(&records, &catalog)?;
                save_irt(&state, &r)?;
                Some(r)
            } else {
                load_irt(&state)
            };
            let stats = compute_stats(&records, &catalog, irt);
            if json {
                println!("{}", serde_json::to_string_pretty(&stats)?);
            } else {
                print!("{}", stats_table(&stats));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
