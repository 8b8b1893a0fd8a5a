mod args;
mod commands;
mod ctx;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use ctx::{read_manifest, sha256_hex, usage, Ctx, Failure, FileRecord, Outcome, RunManifest, MANIFEST};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const REPLAY_TOLERANCE: f64 = 1e-12;

fn thread_count(flag: Option<usize>) -> Outcome<usize> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var("CSPHERE_THREADS") {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("CSPHERE_THREADS={v:?} is not a count")))?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    if n == 0 {
        return usage("thread count must be positive");
    }
    Ok(n)
}

/// argv without the program name, --out, --threads and --replay.
fn recorded_argv(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if ["--out", "--threads", "--replay"].contains(&a.as_str()) {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--threads=") || a.starts_with("--replay=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn execute(cmd: &Command, argv: Vec<String>, out: Option<PathBuf>, check: bool, threads: usize) -> Outcome<RunManifest> {
    let start = Instant::now();
    let mut ctx = Ctx::new(out.clone(), check)?;
    let summary = commands::dispatch(cmd, &mut ctx)?;
    println!("{summary}");
    let manifest = RunManifest {
        subcommand: cmd.name().to_string(),
        argv,
        params: serde_json::to_value(cmd).map_err(|e| Failure::Compute(e.to_string()))?,
        derived: std::mem::take(&mut ctx.derived),
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads,
        wall_clock_secs: start.elapsed().as_secs_f64(),
        summary,
        outputs: ctx.files.clone(),
    };
    if let Some(dir) = &out {
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Compute(e.to_string()))?;
        std::fs::write(dir.join(MANIFEST), text + "\n")?;
    }
    if !ctx.violations().is_empty() {
        return Err(Failure::Check(ctx.violations().to_vec()));
    }
    Ok(manifest)
}

fn numbers_close(a: &str, b: &str) -> bool {
    let la: Vec<&str> = a.lines().collect();
    let lb: Vec<&str> = b.lines().collect();
    la.len() == lb.len()
        && la.iter().zip(&lb).all(|(x, y)| {
            let cx: Vec<&str> = x.split(',').collect();
            let cy: Vec<&str> = y.split(',').collect();
            cx.len() == cy.len()
                && cx.iter().zip(&cy).all(|(p, q)| {
                    p == q
                        || match (p.parse::<f64>(), q.parse::<f64>()) {
                            (Ok(u), Ok(v)) => (u - v).abs() <= REPLAY_TOLERANCE * u.abs().max(v.abs()).max(1.0),
                            _ => false,
                        }
                })
        })
}

fn compare(old: &[FileRecord], dir: &Path, prior: &Path) -> Vec<String> {
    let mut bad = Vec::new();
    for rec in old {
        let Ok(bytes) = std::fs::read(dir.join(&rec.name)) else {
            bad.push(format!("{} was not produced", rec.name));
            continue;
        };
        if sha256_hex(&bytes) == rec.sha256 {
            continue;
        }
        let close = rec.name.ends_with(".csv")
            && std::fs::read_to_string(prior.join(&rec.name))
                .map(|before| numbers_close(&before, &String::from_utf8_lossy(&bytes)))
                .unwrap_or(false);
        if !close {
            bad.push(format!("{} differs from the recorded digest", rec.name));
        }
    }
    bad
}

fn replay(path: &Path, out: Option<PathBuf>, threads: usize) -> Outcome<()> {
    let m = read_manifest(path)?;
    let prior = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let dir = out.unwrap_or_else(|| prior.join("replay"));
    if dir == prior {
        return usage("--out for a replay must differ from the recorded output directory");
    }
    let mut full = vec!["csphere".to_string()];
    full.extend(m.argv.iter().cloned());
    let cli = Cli::try_parse_from(&full).map_err(|e| Failure::Usage(format!("recorded arguments no longer parse: {e}")))?;
    let Some(cmd) = cli.command else { return usage("manifest has no subcommand") };
    let run = execute(&cmd, m.argv.clone(), Some(dir.clone()), cli.check, threads)?;
    let bad = compare(&m.outputs, &dir, &prior);
    if !bad.is_empty() {
        return Err(Failure::Check(bad));
    }
    println!("replay: {} outputs reproduced in {}", run.outputs.len(), dir.display());
    Ok(())
}

fn run(argv: Vec<String>) -> Outcome<()> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Failure::Usage(e.render().to_string().trim_start_matches("error: ").to_string())),
    };
    let threads = thread_count(cli.threads)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Compute(e.to_string()))?;
    match (&cli.replay, &cli.command) {
        (Some(p), None) => replay(p, cli.out.clone(), threads),
        (None, Some(cmd)) => execute(cmd, recorded_argv(&argv), cli.out.clone(), cli.check, threads).map(|_| ()),
        (Some(_), Some(_)) => usage("--replay takes no subcommand"),
        (None, None) => usage("a subcommand or --replay is required (see --help)"),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_string().trim_end());
            ExitCode::from(f.code() as u8)
        }
    }
}
