use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gkmloc::adelic::verify_adelic;
use gkmloc::asymptotics::{compare_asymptotics, is_balanced, predict_tree, test_directions};
use gkmloc::gkm::{build_flag_sl, build_projective_space, parse_graph, GkmGraph};
use gkmloc::jfunction::{compare_series, compute_jseries, hypergeometric_i_with_mode};
use gkmloc::localization::{sum_in_order, Executor, Localizer, TwistMode};
use gkmloc::trees::{enumerate_trees, ktree_to_dot};
use gkmloc::Error;

/// Writes a line to stdout; a closed pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

/// Version of the JSON report layout.
const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Parser)]
#[command(name = "gkmloc", version, about = "Exact K-theoretic localization on GKM graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the fixed-point trees of one degree.
    Trees {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: String,
        /// Emit one Graphviz graph per K-theoretic tree.
        #[arg(long)]
        dot: bool,
    },
    /// Per-tree contributions and their sum.
    Contrib {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: String,
        #[arg(long, default_value = "cotangent")]
        mode: TwistMode,
        #[arg(long)]
        per_tree: bool,
    },
    /// J-function terms for every degree up to the cap.
    Jfun {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "cotangent")]
        mode: TwistMode,
        #[arg(long)]
        cap: String,
        /// Compare with the closed form (projective spaces only).
        #[arg(long)]
        oracle: bool,
    },
    /// Pole, regular-part and edge-recursion checks.
    VerifyAdelic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "cotangent")]
        mode: TwistMode,
        #[arg(long)]
        cap: String,
    },
    /// Whether the degree-d term stays bounded in all equivariant limits.
    Balance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: String,
        #[arg(long, default_value = "cotangent")]
        mode: TwistMode,
    },
    /// Growth of each tree contribution against the predicted class.
    Asymptotics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: String,
        #[arg(long)]
        per_tree: bool,
    },
}

#[derive(Args)]
struct Common {
    /// `pn:<n>` or `slflag:<n>`.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    builder: Option<String>,
    /// Graph in the plain-text format.
    #[arg(long)]
    graph: Option<std::path::PathBuf>,
    /// Root vertex, by label or index.
    #[arg(long, default_value = "0")]
    root: String,
    /// Worker threads; 0 runs sequentially. Defaults to all cores.
    #[arg(long)]
    width: Option<usize>,
    /// Largest total degree accepted.
    #[arg(long, default_value_t = 3)]
    max_degree: i64,
    #[arg(long)]
    json: bool,
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Check,
    Usage(String),
    Arithmetic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Invalid(_) | Error::ResourceCap(_) | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            _ => Failure::Arithmetic(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Setup {
    graph: GkmGraph,
    root: usize,
    exec: Executor,
    json: bool,
    /// `n` when the graph came from `pn:<n>`.
    projective: Option<usize>,
}

fn setup(c: &Common) -> std::result::Result<Setup, Failure> {
    let (graph, projective) = match (&c.builder, &c.graph) {
        (Some(spec), _) => {
            let (kind, n) = spec.split_once(':').ok_or_else(|| Failure::Usage(format!("bad builder `{spec}`")))?;
            let n: usize = n.parse().map_err(|_| Failure::Usage(format!("bad builder size `{n}`")))?;
            match kind {
                "pn" if n >= 1 => (build_projective_space(n), Some(n)),
                "slflag" if n >= 2 => (build_flag_sl(n), None),
                _ => return Err(Failure::Usage(format!("unknown builder `{spec}`"))),
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (parse_graph(&text)?, None)
        }
        (None, None) => return Err(Failure::Usage("need --builder or --graph".into())),
    };
    let root = match graph.vertex_index(&c.root) {
        Some(v) => v,
        None => c
            .root
            .parse::<usize>()
            .ok()
            .filter(|&v| v < graph.vertices.len())
            .ok_or_else(|| Failure::Usage(format!("no vertex `{}`", c.root)))?,
    };
    let exec = match c.width {
        None => Executor::default(),
        Some(0) => Executor::Sequential,
        Some(w) => Executor::Parallel(w),
    };
    Ok(Setup { graph, root, exec, json: c.json, projective })
}

fn parse_degree(s: &str, g: &GkmGraph, max: i64) -> std::result::Result<Vec<i64>, Failure> {
    let d: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad degree `{s}`")))?;
    if d.len() != g.picard {
        return Err(Failure::Usage(format!("degree needs {} entries", g.picard)));
    }
    if d.iter().any(|&x| x < 0) {
        return Err(Failure::Usage("degrees must be nonnegative".into()));
    }
    if d.iter().sum::<i64>() > max {
        return Err(Failure::Usage(format!("total degree exceeds --max-degree {max}")));
    }
    Ok(d)
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Arithmetic(e.to_string()))?;
    out!("{s}");
    Ok(())
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: &'static str,
    command: &'static str,
    graph: String,
    root: String,
    #[serde(flatten)]
    body: T,
}

fn report<T: Serialize>(s: &Setup, command: &'static str, body: T) -> Outcome {
    print_json(&Report { schema_version: SCHEMA_VERSION, command, graph: s.graph.name.clone(), root: s.graph.label(s.root).to_string(), body })
}

fn trees(s: &Setup, degree: &[i64], dot: bool) -> Outcome {
    let plain = enumerate_trees(&s.graph, s.root, degree, 1);
    let loc = Localizer::new(&s.graph, TwistMode::Untwisted)?;
    let ktrees = loc.ktrees(s.root, degree);
    if dot {
        for (i, t) in ktrees.iter().enumerate() {
            out!("{}", ktree_to_dot(t, &s.graph, &format!("tree{i}")).trim_end());
        }
        return Ok(());
    }
    if s.json {
        #[derive(Serialize)]
        struct Body {
            degree: Vec<i64>,
            trees: usize,
            ktrees: Vec<String>,
        }
        let ktrees = ktrees.iter().map(|t| t.canonical_form()).collect();
        return report(s, "trees", Body { degree: degree.to_vec(), trees: plain.len(), ktrees });
    }
    out!("trees: {}", plain.len());
    out!("k-theoretic trees: {}", ktrees.len());
    for t in &ktrees {
        out!("{}", t.canonical_form());
    }
    Ok(())
}

fn contrib(s: &Setup, degree: &[i64], mode: TwistMode, per_tree: bool) -> Outcome {
    let loc = Localizer::new(&s.graph, mode)?;
    let cs = loc.contributions(s.root, degree, s.exec)?;
    let total = sum_in_order(cs.iter().map(|c| &c.value));
    if s.json {
        #[derive(Serialize)]
        struct Body<'a> {
            degree: Vec<i64>,
            mode: TwistMode,
            trees: &'a [gkmloc::localization::Contribution],
            total: String,
        }
        let trees: &[_] = if per_tree { &cs } else { &[] };
        return report(s, "contrib", Body { degree: degree.to_vec(), mode, trees, total: total.to_factored_string() });
    }
    if per_tree {
        for c in &cs {
            out!("{}", c.tree.tree.describe(&s.graph));
            out!("  {}", c.value.to_factored_string());
        }
    }
    out!("total: {}", total.to_factored_string());
    Ok(())
}

fn jfun(s: &Setup, mode: TwistMode, cap: &[i64], oracle: bool) -> Outcome {
    let j = compute_jseries(&s.graph, s.root, mode, cap, s.exec)?;
    let closed = match (oracle, s.projective) {
        (true, Some(n)) => Some(hypergeometric_i_with_mode(n, s.root, cap[0], mode)?),
        _ => None,
    };
    let cmp = closed.as_ref().map(|c| compare_series(&j, c));
    let equal_at = |d: &[i64]| cmp.as_ref().and_then(|c| c.degrees.iter().find(|x| x.degree == d).map(|x| x.equal));
    let all_equal = cmp.as_ref().map(|c| c.all_equal());
    if s.json {
        #[derive(Serialize)]
        struct Term {
            degree: Vec<i64>,
            term_factored: String,
            term_expanded: String,
            oracle_equal: Option<bool>,
        }
        #[derive(Serialize)]
        struct Body {
            mode: TwistMode,
            terms: Vec<Term>,
            oracle_equal: Option<bool>,
        }
        let terms = j
            .terms
            .iter()
            .map(|(d, f)| Term {
                degree: d.clone(),
                term_factored: f.to_factored_string(),
                term_expanded: f.to_expanded_string(),
                oracle_equal: equal_at(d),
            })
            .collect();
        report(s, "jfun", Body { mode, terms, oracle_equal: all_equal })?;
    } else {
        for (d, f) in &j.terms {
            out!("d={}: {}", fmt_degree(d), f.to_factored_string());
        }
        match (oracle, all_equal) {
            (true, Some(true)) => out!("oracle: equal"),
            (true, Some(false)) => out!("oracle: DIFFERENT"),
            (true, None) => out!("oracle: not available for this graph"),
            _ => {}
        }
    }
    if !j.waived.is_empty() {
        eprintln!("terms with a regular part: {:?}", j.waived);
    }
    if all_equal == Some(false) {
        return Err(Failure::Check);
    }
    Ok(())
}

fn fmt_degree(d: &[i64]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn verify(s: &Setup, mode: TwistMode, cap: &[i64]) -> Outcome {
    let r = verify_adelic(&s.graph, s.root, mode, cap, s.exec)?;
    if s.json {
        report(s, "verify-adelic", &r)?;
    } else {
        out!("{:<10} {:>8} {:>9} {:>9}", "degree", "no-reg", "poles", "result");
        for t in &r.terms {
            let poles = t.poles.iter().all(|p| p.allowed());
            out!("{:<10} {:>8} {:>9} {:>9}", fmt_degree(&t.degree), t.no_regular_part, poles, verdict(t.pass()));
        }
        out!();
        out!("{:<10} {:>5} {:>5} {:>7} {:>9}", "degree", "edge", "m", "sector", "result");
        for x in &r.recursions {
            for sc in &x.sectors {
                out!("{:<10} {:>5} {:>5} {:>7} {:>9}", fmt_degree(&x.degree), x.edge, x.cover, sc.sector, verdict(sc.pass));
            }
        }
        out!();
        out!("overall: {}", verdict(r.pass()));
    }
    if r.pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn balance(s: &Setup, degree: &[i64], mode: TwistMode) -> Outcome {
    let total = Localizer::new(&s.graph, mode)?.sum_over_trees(s.root, degree, s.exec)?;
    let v = is_balanced(&total);
    if s.json {
        return report(s, "balance", &v);
    }
    if v.balanced {
        out!("balanced");
    } else {
        out!("unbalanced");
        if let (Some(w), Some(g)) = (&v.witness, &v.growth) {
            out!("witness sigma: ({})", w.join(", "));
            out!("growth: {g}");
        }
    }
    Ok(())
}

fn asymptotics(s: &Setup, degree: &[i64], per_tree: bool) -> Outcome {
    let loc = Localizer::new(&s.graph, TwistMode::Cotangent)?;
    let cs = loc.contributions(s.root, degree, s.exec)?;
    #[derive(Serialize)]
    struct Row {
        tree: String,
        predicted: String,
        matches: bool,
        balanced: bool,
    }
    let mut rows = Vec::new();
    for c in &cs {
        let p = predict_tree(&s.graph, &c.tree)?;
        let dirs = test_directions(&[&c.value, &p.value], 16, 1);
        rows.push(Row {
            tree: c.tree.tree.describe(&s.graph),
            predicted: p.value.to_factored_string(),
            matches: compare_asymptotics(&c.value, &p.value, &dirs).pass(),
            balanced: is_balanced(&c.value).balanced,
        });
    }
    let total = is_balanced(&sum_in_order(cs.iter().map(|c| &c.value)));
    let ok = rows.iter().all(|r| r.matches);
    if s.json {
        #[derive(Serialize)]
        struct Body<'a> {
            degree: Vec<i64>,
            trees: &'a [Row],
            total: &'a gkmloc::asymptotics::BalanceVerdict,
        }
        report(s, "asymptotics", Body { degree: degree.to_vec(), trees: if per_tree { &rows } else { &[] }, total: &total })?;
    } else {
        if per_tree {
            for r in &rows {
                out!("{}", r.tree);
                out!("  ~ {}", r.predicted);
                out!("  prediction {}, balanced {}", verdict(r.matches), r.balanced);
            }
        }
        out!("trees matching prediction: {}/{}", rows.iter().filter(|r| r.matches).count(), rows.len());
        out!("total: {}", if total.balanced { "balanced" } else { "unbalanced" });
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Trees { common, degree, dot } => {
            let s = setup(&common)?;
            trees(&s, &parse_degree(&degree, &s.graph, common.max_degree)?, dot)
        }
        Command::Contrib { common, degree, mode, per_tree } => {
            let s = setup(&common)?;
            contrib(&s, &parse_degree(&degree, &s.graph, common.max_degree)?, mode, per_tree)
        }
        Command::Jfun { common, mode, cap, oracle } => {
            let s = setup(&common)?;
            jfun(&s, mode, &parse_degree(&cap, &s.graph, common.max_degree)?, oracle)
        }
        Command::VerifyAdelic { common, mode, cap } => {
            let s = setup(&common)?;
            verify(&s, mode, &parse_degree(&cap, &s.graph, common.max_degree)?)
        }
        Command::Balance { common, degree, mode } => {
            let s = setup(&common)?;
            balance(&s, &parse_degree(&degree, &s.graph, common.max_degree)?, mode)
        }
        Command::Asymptotics { common, degree, per_tree } => {
            let s = setup(&common)?;
            asymptotics(&s, &parse_degree(&degree, &s.graph, common.max_degree)?, per_tree)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Arithmetic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
