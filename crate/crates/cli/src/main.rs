//! `rasft`: command-line front end for cobordism files and deformation scenarios.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rasft::io::{cobordism_to_json, load_cobordism, load_scenario, pages_to_json, parse_cobordism_file, read};
use rasft::{
    bifurcate, build_complex, chain_map_lower, chain_map_upper, differential_parts, enumerate_basis, join,
    page_morphism, parse_action, scenario_chain_iso, spectral_sequence, stabilize, validate_boundary,
    verify_d_squared, Alpha, Budgets, CobordismData, DiskVector, Error, FormalDisk, SpectralPage,
};

#[derive(Parser, Debug)]
#[command(name = "rasft", version, about = "Filtered SFT complexes of exact Lagrangian cobordisms over Z2")]
struct Cli {
    /// Truncation level: a positive action, or `inf`.
    #[arg(long, global = true, default_value = "inf", value_parser = parse_alpha)]
    alpha: Alpha,

    /// Largest number of punctures of an enumerated disk.
    #[arg(long, global = true, default_value_t = 8)]
    max_punctures: usize,

    /// Inclusive degree range `LO..HI` of the enumerated basis.
    #[arg(long, global = true, value_parser = parse_window)]
    degree_window: Option<(i64, i64)>,

    /// Also write machine-readable output here; `-` prints it instead of the table. Used by `ss` and `stabilize`.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Mark pages touched by truncation leaks as unreliable instead of failing.
    #[arg(long, global = true)]
    allow_leaks: bool,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check boundaries, degrees, actions, h(f) = 0 and d^2 = 0.
    Validate { file: PathBuf },
    /// Classify the given disk words, or list the enumerated basis.
    Admissible { file: PathBuf, words: Vec<String> },
    /// Print d = d+ + d- of the given disk words, or of every basis disk.
    Diff { file: PathBuf, words: Vec<String> },
    /// Print the pages of the spectral sequence.
    Ss { file: PathBuf },
    /// Stack LOWER below UPPER and write the joined cobordism.
    Join {
        lower: PathBuf,
        upper: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Matrix of the chain map from one side into the joined cobordism.
    Chainmap {
        lower: PathBuf,
        upper: PathBuf,
        #[arg(long, value_enum, default_value_t = Side::Lower)]
        side: Side,
    },
    /// Cross the moment of a scenario and write the cobordism after it.
    Bifurcate {
        scenario: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Build the chain isomorphism across a moment and compare the pages.
    Invariance { scenario: PathBuf },
    /// Compare pages across increasing truncation levels.
    Stabilize {
        file: PathBuf,
        /// Comma-separated increasing levels.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_alpha)]
        levels: Vec<Alpha>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Lower,
    Upper,
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    if s == "inf" {
        return Ok(Alpha::Infinite);
    }
    let a = parse_action(s).map_err(|e| e.to_string())?;
    if a <= parse_action("0").map_err(|e| e.to_string())? {
        return Err(format!("alpha must be positive, got {s}"));
    }
    Ok(Alpha::Finite(a))
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
    if lo > hi {
        return Err(format!("empty degree window {s}"));
    }
    Ok((lo, hi))
}

/// How a command ended when it did not fail with an error.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> rasft::Result<Outcome> {
    let budgets = Budgets { max_punctures: cli.max_punctures, degree_window: cli.degree_window };
    let alpha = cli.alpha;
    // with `--json -` stdout carries only the JSON document
    let table = cli.json.as_deref() != Some(Path::new("-"));
    match &cli.cmd {
        Cmd::Validate { file } => validate(file, alpha, &budgets),
        Cmd::Admissible { file, words } => admissible(file, words, alpha, &budgets),
        Cmd::Diff { file, words } => diff(file, words, alpha, &budgets),
        Cmd::Ss { file } => {
            let cob = load_cobordism(file)?;
            let c = build_complex(&cob, alpha, &budgets, cli.allow_leaks)?;
            let pages = spectral_sequence(&c);
            if table {
                print!("{}", pages_table(&pages));
            }
            if let Some(out) = &cli.json {
                emit(out, &pages_to_json(&c, &pages))?;
            }
            Ok(Outcome::Ok)
        }
        Cmd::Join { lower, upper, out } => {
            let joined = join(&load_cobordism(lower)?, &load_cobordism(upper)?, alpha)?;
            emit_cobordism(out.as_deref(), &joined)
        }
        Cmd::Chainmap { lower, upper, side } => chainmap(lower, upper, *side, alpha, &budgets, cli.allow_leaks),
        Cmd::Bifurcate { scenario, out } => {
            let scen = load_scenario(scenario)?;
            let (cob1, report) = bifurcate(&scen, alpha, &budgets)?;
            if !report.is_ok() {
                if report.supplied_matches == Some(false) {
                    eprintln!("supplied cob1 differs from the computed one");
                }
                for v in &report.violations {
                    eprintln!("{v}");
                }
                for (g, dd) in &report.d_squared.failures {
                    eprintln!("d^2[{g}] = {}", sum(dd));
                }
                if let Some(hf) = report.d_squared.ham_at_potential.as_ref().filter(|v| !v.is_empty()) {
                    eprintln!("h(f) = {}", sum(hf));
                }
                return Ok(Outcome::Failed);
            }
            emit_cobordism(out.as_deref(), &cob1)
        }
        Cmd::Invariance { scenario } => {
            let scen = load_scenario(scenario)?;
            let iso = scenario_chain_iso(&scen, alpha, &budgets, cli.allow_leaks)?;
            let r = &iso.report;
            match &r.action_gap {
                Some(a) => println!("action gap {}", rasft::format_action(a)),
                None => println!("action gap none (B = 0)"),
            }
            println!("N = {}", r.n);
            for (what, list) in [
                ("chain map", &r.chain_map_failures),
                ("power", &r.power_failures),
                ("inverse", &r.inverse_failures),
                ("leak", &r.leaks),
            ] {
                for f in list {
                    println!("{what} failure: {f}");
                }
            }
            for m in &r.pages {
                let tag = if m.is_iso() { "iso" } else { "NOT iso" };
                println!("E_{}: {tag}", m.r);
                for key in m.not_injective.iter().chain(&m.not_surjective) {
                    println!("  witness (p, q) = {key:?}");
                }
            }
            Ok(if r.is_ok() { Outcome::Ok } else { Outcome::Failed })
        }
        Cmd::Stabilize { file, levels } => {
            let cob = load_cobordism(file)?;
            let rep = stabilize(&cob, levels, &budgets, cli.allow_leaks)?;
            for (i, l) in rep.levels.iter().enumerate().filter(|_| table) {
                let dims: Vec<String> = l.page_dims.iter().map(|(r, d)| format!("E{r}={d}")).collect();
                let iso = if i == 0 { "-".to_string() } else { rep.isos[i - 1].to_string() };
                let flag = if l.unreliable { " unreliable" } else { "" };
                println!("alpha {}: {} generators, {}, iso to previous: {iso}{flag}", l.alpha, l.generators, dims.join(" "));
            }
            if table {
                println!("stable from alpha {}", rep.stable_from);
                println!("basis saturated from alpha {}", rep.basis_saturated_from);
            }
            if let Some(out) = &cli.json {
                let levels: Vec<_> = rep
                    .levels
                    .iter()
                    .map(|l| {
                        serde_json::json!({
                            "alpha": l.alpha.to_string(),
                            "generators": l.generators,
                            "page_dims": l.page_dims,
                            "unreliable": l.unreliable,
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "levels": levels,
                    "isos": rep.isos,
                    "stable_from": rep.stable_from.to_string(),
                    "basis_saturated_from": rep.basis_saturated_from.to_string(),
                });
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).expect("plain data serializes")))?;
            }
            Ok(Outcome::Ok)
        }
    }
}

fn validate(file: &Path, alpha: Alpha, budgets: &Budgets) -> rasft::Result<Outcome> {
    let raw = parse_cobordism_file(&read(file)?)?;
    let mut lines = Vec::new();
    for (name, b) in [("pos_boundary", &raw.pos_boundary), ("neg_boundary", &raw.neg_boundary)] {
        for v in validate_boundary(&b.to_spec()?).violations {
            lines.push(format!("{name}: {v}"));
        }
    }
    if lines.is_empty() {
        let cob = raw.to_data()?;
        lines.extend(cob.violations());
        if lines.is_empty() {
            let rep = verify_d_squared(&cob, alpha, budgets)?;
            if let Some(hf) = rep.ham_at_potential.as_ref().filter(|v| !v.is_empty()) {
                lines.push(format!("h(f) = {} is not zero", sum(hf)));
            }
            for (g, dd) in &rep.failures {
                lines.push(format!("d^2[{g}] = {} is not zero", sum(dd)));
            }
            if lines.is_empty() {
                println!("ok: {} leak(s) outside the basis at alpha {alpha}", rep.leaks.len());
                return Ok(Outcome::Ok);
            }
        }
    }
    for l in &lines {
        println!("{l}");
    }
    Ok(Outcome::Failed)
}

fn disks_of(cob: &CobordismData, words: &[String], alpha: Alpha, budgets: &Budgets) -> rasft::Result<Vec<FormalDisk>> {
    if words.is_empty() {
        return Ok(enumerate_basis(cob, alpha, budgets)?.0);
    }
    words.iter().map(|w| FormalDisk::parse(w, &cob.ends)).collect()
}

fn admissible(file: &Path, words: &[String], alpha: Alpha, budgets: &Budgets) -> rasft::Result<Outcome> {
    let cob = load_cobordism(file)?;
    let mut all = true;
    for d in disks_of(&cob, words, alpha, budgets)? {
        let ok = d.is_admissible(&cob.ends);
        all &= ok;
        println!(
            "[{d}] {} degree {} p {} A+ {}",
            if ok { "admissible" } else { "not admissible" },
            d.degree(&cob.ends),
            d.positives(),
            rasft::format_action(&d.action_plus(&cob.ends)),
        );
    }
    Ok(if all { Outcome::Ok } else { Outcome::Failed })
}

fn diff(file: &Path, words: &[String], alpha: Alpha, budgets: &Budgets) -> rasft::Result<Outcome> {
    let cob = load_cobordism(file)?;
    for d in disks_of(&cob, words, alpha, budgets)? {
        let v = DiskVector::from_disks(&cob.ends, alpha, [d.clone()])?;
        let (plus, minus) = differential_parts(&cob, &v, alpha)?;
        println!("d[{d}] = {}", sum(&plus.add(&minus)?));
        println!("  d+ = {}", sum(&plus));
        println!("  d- = {}", sum(&minus));
    }
    Ok(Outcome::Ok)
}

fn chainmap(lower: &Path, upper: &Path, side: Side, alpha: Alpha, budgets: &Budgets, allow_leaks: bool) -> rasft::Result<Outcome> {
    let lo = load_cobordism(lower)?;
    let up = load_cobordism(upper)?;
    let joined = join(&lo, &up, alpha)?;
    let domain = if side == Side::Lower { &lo } else { &up };
    let src = build_complex(domain, alpha, budgets, allow_leaks)?;
    let dst = build_complex(&joined, alpha, budgets, allow_leaks)?;
    let mut columns = Vec::with_capacity(src.len());
    for g in &src.generators {
        let d = g.disk.clone().expect("disk complexes carry labels");
        let w = DiskVector::from_disks(&domain.ends, alpha, [d.clone()])?;
        let image = match side {
            Side::Lower => chain_map_upper(&lo, &up, &w, alpha)?,
            Side::Upper => chain_map_lower(&lo, &up, &w, alpha)?,
        };
        let mut col = Vec::new();
        for x in image.iter() {
            match dst.index_of(x) {
                Some(i) => col.push(i),
                None if allow_leaks => {}
                None => return Err(Error::Leak(format!("image of [{d}] contains [{x}], outside the joined basis"))),
            }
        }
        col.sort_unstable();
        println!("[{d}] -> {}", if col.is_empty() { "0".to_string() } else { labels(&dst, &col) });
        columns.push(col);
    }
    let pages = page_morphism(&columns, &src, &spectral_sequence(&src), &dst, &spectral_sequence(&dst))?;
    println!("chain map equation holds on {} generators", src.len());
    for m in &pages {
        println!("E_{}: {}", m.r, if m.is_iso() { "iso" } else { "not iso" });
    }
    Ok(Outcome::Ok)
}

fn labels(c: &rasft::FilteredComplex, ix: &[usize]) -> String {
    ix.iter().map(|&i| c.label(i)).collect::<Vec<_>>().join(" + ")
}

fn sum(v: &DiskVector) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.words().iter().map(|w| format!("[{w}]")).collect::<Vec<_>>().join(" + ")
}

fn pages_table(pages: &[SpectralPage]) -> String {
    let mut s = String::new();
    for pg in pages {
        let name = if pg.infinity { "E_inf".to_string() } else { format!("E_{}", pg.r) };
        s += &format!("{name}\n  p    q  dim\n");
        for (&(p, q), e) in &pg.entries {
            let flag = if e.unreliable { "  unreliable" } else { "" };
            s += &format!("{p:>3} {q:>4} {:>4}{flag}\n", e.dim);
        }
    }
    s
}

fn emit(out: &Path, text: &str) -> rasft::Result<()> {
    if out == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(out, text).map_err(|e| Error::Io(format!("{}: {e}", out.display())))
}

fn emit_cobordism(out: Option<&Path>, c: &CobordismData) -> rasft::Result<Outcome> {
    let text = cobordism_to_json(c);
    match out {
        Some(p) => emit(p, &text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Ok)
}
