//! Command-line front end. [`run`] does all the work so tests can drive it
//! in-process; the binary only forwards arguments and the exit code.
//!
//! Exit codes: 0 success, 1 verification failed, 2 no solution, 64 usage,
//! 65 malformed input, 66 unreadable or unwritable file.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::d2::solve_d2;
use crate::fpt::solve_d3_fpt_report;
use crate::generate;
use crate::hourglass::collect_hourglasses;
use crate::oracle::solve_brute;
use crate::profile::{
    parse_matching, parse_profile, serialize_matching, serialize_profile, Matching, Profile,
};
use crate::reductions::{
    complete_profile, is_to_pesm, parse_dimacs, parse_edge_list, r3sat_to_223sat, sat_to_cesm3,
    CnfFormula, SideOrders,
};
use crate::stability::{all_ebps, find_ebc, is_ces, is_exchange_stable, is_maximal, is_perfect};
use crate::swap::reach_es;
use crate::Criterion;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_NONE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 66;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Data { path: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data { .. } => EXIT_DATA,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

type Res<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "exstab",
    version,
    about = "Exchange-stable matchings: verify, solve, swap, generate"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a matching against a profile.
    Verify {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long, value_enum, default_value = "es")]
        criterion: CritArg,
        #[arg(long)]
        json: bool,
    },
    /// Find a stable matching.
    Solve {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        algo: Algo,
        #[arg(long, value_enum, default_value = "es")]
        criterion: CritArg,
        /// Require every agent to be matched.
        #[arg(long)]
        perfect: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the matching here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Search for at most `k` swaps leading to an exchange-stable matching.
    Reach {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Structural statistics of a profile.
    Stats {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Profile with lists of length at most three from a (2,2)-3SAT formula.
    Sat3 {
        #[command(flatten)]
        cnf: CnfArgs,
    },
    /// Same construction, completed to complete bipartite preferences.
    Complete {
        #[command(flatten)]
        cnf: CnfArgs,
    },
    /// Swap-reachability instance from a graph and a target size `h`.
    Pesm {
        /// Edge list: `n m` header, then `u v` lines, 1-based.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        out: OutArgs,
        /// Where to write the start matching.
        #[arg(long)]
        m0: Option<PathBuf>,
    },
    /// Random profile; seeded by `--seed`, else `EXSTAB_SEED`, else 0.
    Random {
        #[arg(long)]
        agents: usize,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Two sides of `agents / 2` each.
        #[arg(long)]
        bipartite: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random preferences on a ladder of the given height.
    Hourglass {
        #[arg(long)]
        height: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Large sparse instance with a few ladders hung off a long path.
    Sparse {
        #[arg(long)]
        agents: usize,
        #[arg(long, default_value_t = 4)]
        ladders: usize,
        #[arg(long, default_value_t = 6)]
        height: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct CnfArgs {
    /// DIMACS CNF file.
    #[arg(long)]
    cnf: PathBuf,
    /// Normalise to (2,2)-3SAT first when the formula is not already.
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write the profile here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CritArg {
    Es,
    Ces,
}

impl From<CritArg> for Criterion {
    fn from(c: CritArg) -> Self {
        match c {
            CritArg::Es => Criterion::Es,
            CritArg::Ces => Criterion::Ces,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Algo {
    Brute,
    D2,
    Fpt,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn data_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

fn load_profile(path: &Path) -> Res<Profile> {
    parse_profile(&read(path)?).map_err(|e| data_err(path, e))
}

fn load_matching(p: &Profile, path: &Path) -> Res<Matching> {
    parse_matching(p, &read(path)?).map_err(|e| data_err(path, e))
}

fn emit(out: &mut dyn Write, text: &str) {
    let _ = write!(out, "{text}");
}

fn pairs_json(p: &Profile, m: &Matching) -> serde_json::Value {
    json!(m
        .pairs()
        .into_iter()
        .map(|(a, b)| [p.name(a), p.name(b)])
        .collect::<Vec<_>>())
}

fn pair_name(p: &Profile, (a, b): (usize, usize)) -> String {
    format!("({},{})", p.name(a), p.name(b))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Res<i32> {
    match cmd {
        Cmd::Verify {
            profile,
            matching,
            criterion,
            json,
        } => {
            let p = load_profile(&profile)?;
            let m = load_matching(&p, &matching)?;
            verify(&p, &m, criterion.into(), json, out)
        }
        Cmd::Solve {
            profile,
            algo,
            criterion,
            perfect,
            threads,
            output,
            json,
        } => {
            let p = load_profile(&profile)?;
            solve(
                &p,
                algo,
                criterion.into(),
                perfect,
                threads,
                output.as_deref(),
                json,
                out,
            )
        }
        Cmd::Reach {
            profile,
            matching,
            k,
            json,
        } => {
            let p = load_profile(&profile)?;
            let m = load_matching(&p, &matching)?;
            reach(&p, &m, k, json, out)
        }
        Cmd::Gen { what } => gen(what, out),
        Cmd::Stats { profile, json } => {
            let p = load_profile(&profile)?;
            stats(&p, json, out);
            Ok(EXIT_OK)
        }
    }
}

fn verify(
    p: &Profile,
    m: &Matching,
    criterion: Criterion,
    json: bool,
    out: &mut dyn Write,
) -> Res<i32> {
    let perfect = is_perfect(p, m);
    let maximal = is_maximal(p, m);
    let es = is_exchange_stable(p, m);
    let ces = is_ces(p, m);
    let ebps: Vec<String> = all_ebps(p, m)
        .into_iter()
        .map(|e| pair_name(p, e))
        .collect();
    let ebc = if ces {
        None
    } else {
        find_ebc(p, m).map(|c| c.display(p))
    };
    let holds = match criterion {
        Criterion::Es => es,
        Criterion::Ces => ces,
    };
    if json {
        let v = json!({
            "schema": 1,
            "criterion": criterion,
            "holds": holds,
            "perfect": perfect,
            "maximal": maximal,
            "es": es,
            "ces": ces,
            "ebps": ebps,
            "ebc": ebc,
        });
        emit(out, &format!("{v}\n"));
    } else {
        let yn = |b: bool| if b { "yes" } else { "no" };
        emit(
            out,
            &format!(
                "perfect: {}\nmaximal: {}\nexchange-stable: {}\ncoalitional: {}\n",
                yn(perfect),
                yn(maximal),
                yn(es),
                yn(ces)
            ),
        );
        if !holds {
            match criterion {
                Criterion::Es => emit(out, &format!("blocking pairs: {}\n", ebps.join(" "))),
                Criterion::Ces => emit(
                    out,
                    &format!("blocking coalition: {}\n", ebc.unwrap_or_default()),
                ),
            }
        }
    }
    Ok(if holds { EXIT_OK } else { EXIT_FAILED })
}

#[allow(clippy::too_many_arguments)]
fn solve(
    p: &Profile,
    algo: Algo,
    criterion: Criterion,
    perfect: bool,
    threads: usize,
    output: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Res<i32> {
    match algo {
        Algo::Fpt if criterion != Criterion::Es || !perfect => {
            return Err(CliError::Usage(
                "--algo fpt needs --criterion es and --perfect".into(),
            ))
        }
        Algo::D2 if !perfect => return Err(CliError::Usage("--algo d2 needs --perfect".into())),
        _ => {}
    }
    let start = Instant::now();
    let mut extra = json!({});
    let found = match algo {
        Algo::Brute => solve_brute(p, criterion, perfect),
        Algo::D2 => solve_d2(p, criterion).map_err(|e| CliError::Usage(e.to_string()))?,
        Algo::Fpt => {
            let r = solve_d3_fpt_report(p, threads.max(1))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            extra = json!({
                "ell": r.ell,
                "clusters": r.clusters,
                "tall": r.tall,
                "combinations": r.combinations,
            });
            r.matching
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if let (Some(path), Some(m)) = (output, &found) {
        write_file(path, &serialize_matching(p, m))?;
    }
    if json {
        let mut v = json!({
            "schema": 1,
            "algo": format!("{algo:?}").to_lowercase(),
            "criterion": criterion,
            "perfect": perfect,
            "found": found.is_some(),
            "matching": found.as_ref().map(|m| pairs_json(p, m)),
            "elapsed_ms": elapsed,
        });
        if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
            obj.extend(more.clone());
        }
        emit(out, &format!("{v}\n"));
    } else {
        match &found {
            Some(m) if output.is_none() => emit(out, &serialize_matching(p, m)),
            Some(_) => {}
            None => emit(out, "NONE\n"),
        }
    }
    Ok(if found.is_some() { EXIT_OK } else { EXIT_NONE })
}

fn reach(p: &Profile, m0: &Matching, k: usize, json: bool, out: &mut dyn Write) -> Res<i32> {
    let steps = reach_es(p, m0, k);
    if json {
        let v = json!({
            "schema": 1,
            "k": k,
            "found": steps.is_some(),
            "swaps": steps.as_ref().map(|s| s.iter().map(|st| [p.name(st.pair.0), p.name(st.pair.1)]).collect::<Vec<_>>()),
            "final": steps.as_ref().map(|s| pairs_json(p, s.last().map_or(m0, |st| &st.after))),
        });
        emit(out, &format!("{v}\n"));
    } else {
        match &steps {
            Some(s) => {
                for st in s {
                    emit(
                        out,
                        &format!("swap {} {}\n", p.name(st.pair.0), p.name(st.pair.1)),
                    );
                }
                emit(
                    out,
                    &serialize_matching(p, s.last().map_or(m0, |st| &st.after)),
                );
            }
            None => emit(out, "NONE\n"),
        }
    }
    Ok(if steps.is_some() { EXIT_OK } else { EXIT_NONE })
}

fn load_cnf(args: &CnfArgs) -> Res<CnfFormula> {
    let f = parse_dimacs(&read(&args.cnf)?).map_err(|e| data_err(&args.cnf, e))?;
    if args.normalize {
        r3sat_to_223sat(&f).map_err(|e| data_err(&args.cnf, e))
    } else {
        Ok(f)
    }
}

fn put_profile(out_args: &OutArgs, header: &str, p: &Profile, out: &mut dyn Write) -> Res<()> {
    let text = format!("{header}{}", serialize_profile(p));
    match &out_args.out {
        Some(path) => write_file(path, &text),
        None => {
            emit(out, &text);
            Ok(())
        }
    }
}

fn gen(what: GenCmd, out: &mut dyn Write) -> Res<i32> {
    let seed = |s: Option<u64>| s.unwrap_or_else(|| generate::seed_from_env(0));
    match what {
        GenCmd::Sat3 { cnf } => {
            let f = load_cnf(&cnf)?;
            let (p, _) = sat_to_cesm3(&f).map_err(|e| data_err(&cnf.cnf, e))?;
            let header = format!("# {} variables, {} clauses\n", f.num_vars, f.clauses.len());
            put_profile(&cnf.out, &header, &p, out)?;
        }
        GenCmd::Complete { cnf } => {
            let f = load_cnf(&cnf)?;
            let (p, gm) = sat_to_cesm3(&f).map_err(|e| data_err(&cnf.cnf, e))?;
            let orders = SideOrders::id_order(&p).map_err(|e| data_err(&cnf.cnf, e))?;
            let q = complete_profile(&p, &gm, &orders).map_err(|e| data_err(&cnf.cnf, e))?;
            put_profile(&cnf.out, "", &q, out)?;
        }
        GenCmd::Pesm {
            graph,
            h,
            out: o,
            m0,
        } => {
            let g = parse_edge_list(&read(&graph)?).map_err(|e| data_err(&graph, e))?;
            let inst = is_to_pesm(&g, h).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(path) = m0 {
                write_file(&path, &serialize_matching(&inst.profile, &inst.m0))?;
            }
            put_profile(
                &o,
                &format!("# budget {}\n", inst.budget),
                &inst.profile,
                out,
            )?;
        }
        GenCmd::Random {
            agents,
            max_length,
            density,
            bipartite,
            seed: s,
            out: o,
        } => {
            if agents < 2 || max_length == 0 || !(density > 0.0 && density <= 1.0) {
                return Err(CliError::Usage(
                    "need --agents >= 2, --max-length >= 1 and 0 < --density <= 1".into(),
                ));
            }
            let mut r = generate::rng(seed(s));
            let p = if bipartite {
                generate::random_bipartite_profile(agents / 2, max_length, density, &mut r)
            } else {
                generate::random_profile(agents, max_length, density, &mut r)
            };
            put_profile(&o, "", &p, out)?;
        }
        GenCmd::Hourglass {
            height,
            seed: s,
            out: o,
        } => {
            if height < 2 {
                return Err(CliError::Usage("--height must be at least 2".into()));
            }
            let mut r = generate::rng(seed(s));
            let (p, _) =
                generate::random_hourglass_profile(height, generate::Wraps::default(), &mut r);
            put_profile(&o, "", &p, out)?;
        }
        GenCmd::Sparse {
            agents,
            ladders,
            height,
            seed: s,
            out: o,
        } => {
            if height < 2 || agents < (ladders + 1) * (2 * height + 4) {
                return Err(CliError::Usage(
                    "too few agents for the requested ladders".into(),
                ));
            }
            let mut r = generate::rng(seed(s));
            let p = generate::synthetic_sparse(agents, ladders, height, &mut r);
            put_profile(&o, "", &p, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn stats(p: &Profile, json: bool, out: &mut dyn Write) {
    let g = p.acceptability_graph();
    let comps = g.components();
    let mut census: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for c in &comps {
        *census.entry(c.len()).or_insert(0) += 1;
    }
    let hg = (p.max_length() <= 3).then(|| collect_hourglasses(&g));
    let heights: Vec<usize> = hg
        .as_ref()
        .map_or(Vec::new(), |c| c.all.iter().map(|h| h.height()).collect());
    if json {
        let v = json!({
            "schema": 1,
            "agents": p.len(),
            "edges": g.num_edges(),
            "bipartite": p.is_bipartite(),
            "complete": p.is_complete(),
            "max_length": p.max_length(),
            "components": comps.len(),
            "component_sizes": census.iter().map(|(k, v)| json!({"size": k, "count": v})).collect::<Vec<_>>(),
            "ell": hg.as_ref().map(|c| c.ell()),
            "heights": hg.as_ref().map(|_| heights.clone()),
            "clusters": hg.as_ref().map(|c| c.clusters.len()),
            "tall": hg.as_ref().map(|c| c.tall.len()),
        });
        emit(out, &format!("{v}\n"));
        return;
    }
    let sizes: Vec<String> = census.iter().map(|(k, v)| format!("{k}x{v}")).collect();
    emit(
        out,
        &format!(
            "agents: {}\nedges: {}\nbipartite: {}\ncomplete: {}\nmax list length: {}\ncomponents: {} (size x count: {})\n",
            p.len(),
            g.num_edges(),
            p.is_bipartite(),
            p.is_complete(),
            p.max_length(),
            comps.len(),
            sizes.join(" ")
        ),
    );
    match &hg {
        Some(c) => emit(
            out,
            &format!(
                "hourglasses: {}\nheights: {:?}\nclusters: {}\ntall: {}\n",
                c.ell(),
                heights,
                c.clusters.len(),
                c.tall.len()
            ),
        ),
        None => emit(out, "hourglasses: n/a (lists longer than three)\n"),
    }
}
