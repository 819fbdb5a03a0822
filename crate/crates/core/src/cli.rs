//! The `ct` command line.
//!
//! Human output is 1-indexed like graph files; `--json` output and traces
//! use the internal 0-indexed ids.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::decomp::{nice_decomposition, validate_nice};
use crate::engine::{bound, replay_verify, solve_with_mode, EngineError, Mode, Trace};
use crate::fuzz::{run_fuzz, FuzzConfig, DEFAULT_SEED};
use crate::generators::{complete_graph, h_graph, lower_bound_graph, random_four_chordal, GenSpec};
use crate::graph::{
    is_chordal, is_four_chordal, maximal_cliques, maximal_triangles, parse_graph, write_graph, Clique,
    FourChordalWitness, Graph,
};
use crate::oracle::{is_transversal, min_transversal_exact};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Where a failing solve writes its trace when `--trace` is absent.
pub const FAILURE_TRACE: &str = "ct-failure-trace.jsonl";

#[derive(Parser, Debug)]
#[command(name = "ct", version, about = "Clique transversals of 4-chordal graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chordality, 4-chordality and the number of maximal 3-cliques.
    Check(Input),
    /// List the maximal cliques.
    Cliques(Input),
    /// Print a nice tree decomposition.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Root clique as comma separated vertices (default: first maximal
        /// 3-clique, else first clique of size at least 4).
        #[arg(long)]
        root: Option<String>,
    },
    /// Compute a clique transversal within the bound.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Write the JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// auto, thmA, thmB or basic.
        #[arg(long, default_value = "auto")]
        mode: Mode,
    },
    /// Check a vertex set or replay a trace.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Comma or space separated vertices.
        #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
        set: Option<String>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exact minimum clique transversal.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Give up above this size.
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Print a generated graph.
    #[command(subcommand)]
    Gen(Gen),
    /// Seeded batch run over random 4-chordal graphs.
    Fuzz {
        #[arg(long, env = "CT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Largest number of decomposition nodes per instance.
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        #[arg(long, default_value_t = 8)]
        max_bag: usize,
        #[arg(long, default_value_t = 60)]
        max_vertices: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct Input {
    /// Graph file, or a generator spec such as `hk:1`, `lower:12`,
    /// `complete:5` or `random:SEED:NODES:MAXBAG`.
    pub input: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Gen {
    Hk {
        #[arg(long)]
        k: usize,
    },
    Lower {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        max_bag: usize,
    },
}

struct Failure(i32, String);

type Out<'a> = &'a mut dyn Write;

pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command line; returns the exit code.
pub fn run(args: &[String], out: Out, err: Out) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: Out) -> Result<i32, Failure> {
    match cmd {
        Command::Check(i) => check(&i, out),
        Command::Cliques(i) => cliques(&i, out),
        Command::Decompose { input, root } => decompose(&input, root.as_deref(), out),
        Command::Solve { input, trace, mode } => solve_cmd(&input, trace.as_deref(), mode, out),
        Command::Verify { input, set, trace } => verify(&input, set.as_deref(), trace.as_deref(), out),
        Command::Oracle { input, cap } => oracle(&input, cap, out),
        Command::Gen(g) => gen(g, out),
        Command::Fuzz {
            seed,
            count,
            nodes,
            max_bag,
            max_vertices,
            json,
        } => {
            let cfg = FuzzConfig {
                seed,
                count,
                nodes,
                max_bag,
                max_vertices,
            };
            if nodes == 0 || !(4..=12).contains(&max_bag) || max_vertices < 5 {
                return Err(Failure(
                    EXIT_INPUT,
                    "fuzz needs --nodes >= 1, 4 <= --max-bag <= 12 and --max-vertices >= 5".into(),
                ));
            }
            let report = run_fuzz(&cfg);
            if json {
                emit(out, &serde_json::to_string_pretty(&report).expect("report serialises"))?;
            } else {
                emit(out, report.summary().trim_end())?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_INTERNAL })
        }
    }
}

fn emit(out: Out, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure(EXIT_INPUT, format!("cannot write output: {e}")))
}

fn load(input: &str) -> Result<Graph, Failure> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("{input}: {e}")))?;
        return parse_graph(&text).map_err(|e| Failure(EXIT_INPUT, format!("{input}: {e}")));
    }
    match input.parse::<GenSpec>() {
        Ok(spec) => spec.build().map_err(|e| Failure(EXIT_INPUT, e.to_string())),
        Err(_) => Err(Failure(EXIT_INPUT, format!("{input}: no such file"))),
    }
}

fn show(vs: &[usize]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_witness(w: &FourChordalWitness) -> String {
    match w {
        FourChordalWitness::NotChordal(c) => format!("induced cycle {}", show(c)),
        FourChordalWitness::EdgeWithoutK4(u, v) => format!("edge {}-{} lies in no 4-clique", u + 1, v + 1),
    }
}

fn check(i: &Input, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    let chordal = is_chordal(&g);
    let four = is_four_chordal(&g);
    let t = maximal_triangles(&g).ok().map(|v| v.len());
    if i.json {
        let witness = match &four {
            Ok(()) => serde_json::Value::Null,
            Err(FourChordalWitness::NotChordal(c)) => json!({ "induced_cycle": c }),
            Err(FourChordalWitness::EdgeWithoutK4(u, v)) => json!({ "edge_without_k4": [u, v] }),
        };
        let v = json!({
            "n": g.n(),
            "m": g.m(),
            "chordal": chordal.is_ok(),
            "four_chordal": four.is_ok(),
            "t": t,
            "bound": bound(g.n()),
            "witness": witness,
        });
        emit(out, &v.to_string())?;
    } else {
        let mut s = format!("n: {}\nm: {}\nchordal: {}\n", g.n(), g.m(), yes(chordal.is_ok()));
        match &four {
            Ok(()) => s.push_str("4-chordal: yes\n"),
            Err(w) => s.push_str(&format!("4-chordal: no ({})\n", show_witness(w))),
        }
        if let Some(t) = t {
            s.push_str(&format!("maximal 3-cliques: {t}\n"));
        }
        s.push_str(&format!("bound: {}", bound(g.n())));
        emit(out, &s)?;
    }
    Ok(EXIT_OK)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn chordal_cliques(g: &Graph) -> Result<Vec<Clique>, Failure> {
    let peo =
        is_chordal(g).map_err(|c| Failure(EXIT_INPUT, format!("graph is not chordal: induced cycle {}", show(&c))))?;
    maximal_cliques(g, &peo).map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))
}

fn cliques(i: &Input, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    let cs = chordal_cliques(&g)?;
    if i.json {
        let list: Vec<&[usize]> = cs.iter().map(|c| c.vertices()).collect();
        emit(out, &json!({ "cliques": list }).to_string())?;
    } else {
        let lines: Vec<String> = cs.iter().map(|c| show(c.vertices())).collect();
        emit(
            out,
            format!("{} maximal cliques\n{}", cs.len(), lines.join("\n")).trim_end(),
        )?;
    }
    Ok(EXIT_OK)
}

fn parse_set(s: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let mut vs = Vec::new();
    for tok in s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let tok = tok.trim_matches(|c| c == '{' || c == '}');
        if tok.is_empty() {
            continue;
        }
        let v: usize = tok
            .parse()
            .map_err(|_| Failure(EXIT_INPUT, format!("`{tok}` is not a vertex")))?;
        if v < 1 || v > n {
            return Err(Failure(EXIT_INPUT, format!("vertex {v} out of range 1..={n}")));
        }
        vs.push(v - 1);
    }
    vs.sort_unstable();
    vs.dedup();
    Ok(vs)
}

fn decompose(i: &Input, root: Option<&str>, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    is_four_chordal(&g).map_err(|w| Failure(EXIT_INPUT, format!("graph is not 4-chordal: {}", show_witness(&w))))?;
    let cs = chordal_cliques(&g)?;
    let root = match root {
        Some(s) => Clique::new(parse_set(s, g.n())?),
        None => cs
            .iter()
            .find(|c| c.len() == 3)
            .or_else(|| cs.iter().find(|c| c.len() >= 4))
            .cloned()
            .ok_or_else(|| Failure(EXIT_INPUT, "graph has no clique to root at".into()))?,
    };
    let d = nice_decomposition(&g, &root).map_err(|e| Failure(EXIT_INPUT, e.to_string()))?;
    if let Err(v) = validate_nice(&d, &g) {
        return Err(Failure(EXIT_INTERNAL, format!("decomposition invalid: {}", v[0])));
    }
    if i.json {
        emit(out, &serde_json::to_string(&d.to_export()).expect("export serialises"))?;
    } else {
        let mut s = format!("{} nodes, root {}\n", d.len(), d.root() + 1);
        for u in 0..d.len() {
            let parent = d.parent(u).map_or("-".to_string(), |p| (p + 1).to_string());
            s.push_str(&format!("node {} parent {} bag {}\n", u + 1, parent, show(d.bag(u))));
        }
        emit(out, s.trim_end())?;
    }
    Ok(EXIT_OK)
}

fn write_trace(path: &Path, trace: &Trace) -> Result<(), Failure> {
    std::fs::write(path, trace.to_jsonl()).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn solve_cmd(i: &Input, trace_path: Option<&Path>, mode: Mode, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    match solve_with_mode(&g, mode) {
        Ok(r) => {
            if let Some(p) = trace_path {
                write_trace(p, &r.trace)?;
            }
            if i.json {
                let v = json!({
                    "n": r.n,
                    "t": r.t,
                    "red": r.red,
                    "size": r.size(),
                    "bound": r.bound(),
                    "saved": r.saved,
                    "bound_ok": r.bound_ok,
                    "fallbacks": r.fallbacks,
                });
                emit(out, &v.to_string())?;
            } else {
                let mut s = format!(
                    "red: {}\nsize: {}\nbound: {}\nsaved: {}",
                    show(&r.red),
                    r.size(),
                    r.bound(),
                    r.saved
                );
                if !r.bound_ok {
                    s.push_str(&format!("\nnote: size exceeds the bound (n = {} is below 5)", r.n));
                }
                emit(out, &s)?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ (EngineError::NotFourChordal(_) | EngineError::Precondition(_))) => {
            let msg = match &e {
                EngineError::NotFourChordal(w) => format!("graph is not 4-chordal: {}", show_witness(w)),
                other => other.to_string(),
            };
            Err(Failure(EXIT_INPUT, msg))
        }
        Err(e) => {
            let path = trace_path.map_or_else(|| PathBuf::from(FAILURE_TRACE), Path::to_path_buf);
            if let Some(t) = e.trace() {
                write_trace(&path, t)?;
            }
            Err(Failure(
                EXIT_INTERNAL,
                format!("{e}; trace written to {}", path.display()),
            ))
        }
    }
}

fn verify(i: &Input, set: Option<&str>, trace: Option<&Path>, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    if let Some(s) = set {
        let vs = parse_set(s, g.n())?;
        return match is_transversal(&g, &vs) {
            Ok(()) => {
                if i.json {
                    emit(
                        out,
                        &json!({ "transversal": true, "size": vs.len(), "bound": bound(g.n()) }).to_string(),
                    )?;
                } else {
                    emit(
                        out,
                        &format!("transversal: yes\nsize: {}\nbound: {}", vs.len(), bound(g.n())),
                    )?;
                }
                Ok(EXIT_OK)
            }
            Err(c) => {
                if i.json {
                    emit(
                        out,
                        &json!({ "transversal": false, "missed": c.vertices() }).to_string(),
                    )?;
                } else {
                    emit(out, &format!("transversal: no\nmissed clique: {}", show(c.vertices())))?;
                }
                Ok(EXIT_INPUT)
            }
        };
    }
    let path = trace.expect("clap requires --set or --trace");
    let text = std::fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let tr = Trace::from_jsonl(&text).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    match replay_verify(&tr, &g) {
        Ok(rep) => {
            let within = rep.n < 5 || rep.red.len() <= bound(rep.n);
            if i.json {
                emit(out, &serde_json::to_string(&rep).expect("report serialises"))?;
            } else {
                emit(
                    out,
                    &format!(
                        "trace ok: {} events\nred: {}\nsize: {}\nbound: {}\n7*{} = 2*{} + {} - {}\nbranches: {}",
                        tr.len(),
                        show(&rep.red),
                        rep.red.len(),
                        bound(rep.n),
                        rep.red.len(),
                        rep.n,
                        rep.t,
                        rep.saved,
                        rep.branches.len()
                    ),
                )?;
            }
            Ok(if within { EXIT_OK } else { EXIT_INTERNAL })
        }
        Err(v) => Err(Failure(EXIT_INTERNAL, format!("{v} ({})", path.display()))),
    }
}

fn oracle(i: &Input, cap: usize, out: Out) -> Result<i32, Failure> {
    let g = load(&i.input)?;
    match min_transversal_exact(&g, cap) {
        Ok(r) => {
            if i.json {
                emit(out, &serde_json::to_string(&r).expect("result serialises"))?;
            } else {
                emit(
                    out,
                    &format!("minimum: {}\nwitness: {}", r.minimum_size, show(&r.witness)),
                )?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            if i.json {
                emit(
                    out,
                    &json!({ "cap_exceeded": e.cap, "explored": e.explored }).to_string(),
                )?;
            } else {
                emit(out, &e.to_string())?;
            }
            Ok(EXIT_CAP)
        }
    }
}

fn gen(g: Gen, out: Out) -> Result<i32, Failure> {
    let graph = match g {
        Gen::Hk { k } => h_graph(k),
        Gen::Lower { n } => lower_bound_graph(n).map_err(|e| Failure(EXIT_INPUT, e.to_string()))?,
        Gen::Complete { n } => {
            if n == 0 {
                return Err(Failure(EXIT_INPUT, "complete graph needs n >= 1".into()));
            }
            complete_graph(n)
        }
        Gen::Random { seed, nodes, max_bag } => {
            random_four_chordal(seed, nodes, max_bag).map_err(|e| Failure(EXIT_INPUT, e.to_string()))?
        }
    };
    out.write_all(write_graph(&graph).as_bytes())
        .map_err(|e| Failure(EXIT_INPUT, format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["ct".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(&argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn solve_hk1_inline() {
        let (code, out, _) = call(&["solve", "hk:1"]);
        assert_eq!(code, 0);
        assert!(out.contains("size: 4\nbound: 4\nsaved: 3"), "{out}");
    }

    #[test]
    fn set_parsing() {
        assert_eq!(parse_set("{1, 3,2}", 4).ok().unwrap(), vec![0, 1, 2]);
        assert!(parse_set("0", 4).is_err());
        assert!(parse_set("x", 4).is_err());
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _, err) = call(&["check", "/no/such/file.graph"]);
        assert_eq!(code, 1);
        assert!(err.contains("no such file"));
    }

    #[test]
    fn non_transversal_set() {
        let (code, out, _) = call(&["verify", "complete:5", "--set", ""]);
        assert_eq!(code, 1);
        assert!(out.contains("missed clique: {1, 2, 3, 4, 5}"));
    }

    #[test]
    fn oracle_cap() {
        assert_eq!(call(&["oracle", "hk:1", "--cap", "3"]).0, 2);
        let (code, out, _) = call(&["oracle", "hk:1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("minimum: 4"));
    }

    #[test]
    fn gen_roundtrip() {
        let (code, out, _) = call(&["gen", "complete", "--n", "4"]);
        assert_eq!(code, 0);
        assert_eq!(parse_graph(&out).unwrap(), complete_graph(4));
    }
}
