mod dimacs;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;

use mincut_core::fixtures;
use mincut_core::*;
// The glob brings in the crate's Result alias; commands want std's.
use std::result::Result;

#[derive(Parser)]
#[command(name = "mincut", version, about = "Graph-cuts toolkit: second mincuts, minimum+1 cuts, anchors and sensitivity queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum (s,t)-flow value and the canonical mincut
    Maxflow { graph: PathBuf },
    /// Nodes, arcs and topological order of the mincut DAG
    Pqdag {
        graph: PathBuf,
        /// Emit a DOT digraph instead of the text dump
        #[arg(long)]
        dot: bool,
    },
    /// Second minimum (s,t)-cut (directed graphs)
    SecondMincut {
        graph: PathBuf,
        /// Use the maxflow-only covering algorithm
        #[arg(long)]
        covering: bool,
    },
    /// Minimum+1 (s,t)-cut (directed graphs)
    Minplus1 { graph: PathBuf },
    /// Anchor edges for the pinned maximum flow (undirected unit graphs)
    Anchors { graph: PathBuf },
    /// The compact structure: anchors plus the DAG of the anchor-free graph
    Structure { graph: PathBuf },
    /// Stream batch sensitivity queries against a simple graph
    Oracle {
        graph: PathBuf,
        queries: PathBuf,
        /// Answer from the residual-graph baseline instead of the compact state
        #[arg(long)]
        baseline: bool,
    },
    /// Cross-check a computation against the brute-force enumeration oracle
    Verify {
        target: VerifyTarget,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        count: u32,
    },
    /// Structure sizes and call counters for one instance
    Bench { graph: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Maxflow,
    Pqdag,
    SecondMincut,
    Minplus1,
    Anchors,
    Structure,
    Oracle,
    All,
}

enum Failure {
    Parse(String),
    Infeasible(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Infeasible(m) | Failure::Mismatch(m) => m,
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MINCUT_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version on stdout with success.
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    let started = Instant::now();
    let outcome = run(cli.command);
    log::info!("elapsed_ms {}", started.elapsed().as_millis());
    if let Err(f) = outcome {
        eprintln!("{}", f.message());
        std::process::exit(f.code());
    }
}

fn load(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    dimacs::parse_graph(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn side_text(side: &[usize]) -> String {
    side.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn pinned_flow(g: &Graph) -> FlowAssignment {
    let (f, _) = max_flow(g);
    cancel_flow_cycles(g, &f)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Maxflow { graph } => {
            let g = load(&graph)?;
            let (f, cut) = max_flow(&g);
            println!("value {}", f.value);
            println!("cutside {}", side_text(&cut.side));
            Ok(())
        }
        Command::Pqdag { graph, dot } => {
            let g = load(&graph)?;
            let (f, _) = max_flow(&g);
            let dag = build_pq_dag(&g, &f)
                .map_err(|e| Failure::Infeasible(e.to_string()))?;
            if dot {
                print_dag_dot(&dag);
            } else {
                print_dag(f.value, &dag);
            }
            Ok(())
        }
        Command::SecondMincut { graph, covering } => {
            let g = load(&graph)?;
            let run = if covering { second_mincut_covering(&g) } else { second_mincut(&g) };
            match run {
                Ok(r) => {
                    println!("cap {}", r.capacity);
                    println!("cutside {}", side_text(&r.cut.side));
                    match r.source {
                        SecondMincutSource::NodeSubdivision(nd) => println!("source subdivision {nd}"),
                        SecondMincutSource::NonTransversal(a, b) => println!("source nontransversal {a} {b}"),
                    }
                    println!("maxflow_calls {}", r.maxflow_calls);
                    println!("global_mincut_calls {}", r.global_mincut_calls);
                    Ok(())
                }
                Err(Error::NoSecondMincut) => {
                    Err(Failure::Infeasible("no second (s,t)-mincut".into()))
                }
                Err(e) => Err(Failure::Infeasible(e.to_string())),
            }
        }
        Command::Minplus1 { graph } => {
            let g = load(&graph)?;
            let (f, _) = max_flow(&g);
            match minplus1(&g, &f) {
                Ok(Some(cut)) => {
                    println!("cap {}", cut.capacity);
                    println!("cutside {}", side_text(&cut.side));
                    Ok(())
                }
                Ok(None) => Err(Failure::Infeasible("no minimum+1 (s,t)-cut".into())),
                Err(e) => Err(Failure::Infeasible(e.to_string())),
            }
        }
        Command::Anchors { graph } => {
            let g = load(&graph)?;
            let f = pinned_flow(&g);
            let anchors = compute_anchors(&g, &f)
                .map_err(|e| Failure::Infeasible(e.to_string()))?;
            for &id in &anchors {
                let e = g.edge(id).unwrap();
                println!("anchor {} {} {}", id + 1, e.u + 1, e.v + 1);
            }
            if anchors.len() == g.n() - 2 {
                println!("|A| = {} = n-2", anchors.len());
            } else {
                println!("|A| = {}", anchors.len());
            }
            Ok(())
        }
        Command::Structure { graph } => {
            let g = load(&graph)?;
            let st = build_structure(&g).map_err(|e| Failure::Infeasible(e.to_string()))?;
            println!("lambda {}", st.lambda);
            println!("anchors {}", st.anchors.len());
            for &id in &st.anchors {
                let e = g.edge(id).unwrap();
                println!("anchor {} {} {}", id + 1, e.u + 1, e.v + 1);
            }
            print_dag_nodes_arcs(&st.dag);
            Ok(())
        }
        Command::Oracle { graph, queries, baseline } => {
            let g = load(&graph)?;
            let text = std::fs::read_to_string(&queries)
                .map_err(|e| Failure::Parse(format!("{}: {e}", queries.display())))?;
            run_oracle(&g, &text, baseline)
        }
        Command::Verify { target, seed, count } => run_verify(target, seed, count),
        Command::Bench { graph } => {
            let g = load(&graph)?;
            run_bench(&g)
        }
    }
}

fn print_dag(lambda: u64, dag: &PqDag) {
    println!("lambda {lambda}");
    println!("nodes {}", dag.node_count());
    for (pos, &nd) in dag.topo.iter().enumerate() {
        println!("node {pos} {}", side_text(&dag.nodes[nd]));
    }
    println!("sink-node 0");
    println!("source-node {}", dag.node_count() - 1);
    let weights = consolidated_arcs(dag);
    println!("arcs {}", weights.len());
    for ((from, to), cap) in weights {
        println!("arc {from} {to} {cap}");
    }
}

/// Arc weights per (topo position) pair.
fn consolidated_arcs(dag: &PqDag) -> BTreeMap<(usize, usize), u64> {
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for a in &dag.arcs {
        *weights
            .entry((dag.topo_pos[a.from], dag.topo_pos[a.to]))
            .or_insert(0) += a.cap;
    }
    weights
}

fn print_dag_nodes_arcs(dag: &PqDag) {
    println!("nodes {}", dag.node_count());
    for (pos, &nd) in dag.topo.iter().enumerate() {
        println!("node {pos} {}", side_text(&dag.nodes[nd]));
    }
    let weights = consolidated_arcs(dag);
    println!("arcs {}", weights.len());
    for ((from, to), cap) in weights {
        println!("arc {from} {to} {cap}");
    }
}

fn print_dag_dot(dag: &PqDag) {
    println!("digraph pqdag {{");
    println!("  rankdir=LR;");
    for (pos, &nd) in dag.topo.iter().enumerate() {
        let label = side_text(&dag.nodes[nd]);
        let shape = if nd == dag.s_node {
            " shape=doublecircle"
        } else if nd == dag.t_node {
            " shape=diamond"
        } else {
            ""
        };
        println!("  n{pos} [label=\"{label}\"{shape}];");
    }
    for ((from, to), cap) in consolidated_arcs(dag) {
        println!("  n{from} -> n{to} [label=\"{cap}\"];");
    }
    println!("}}");
}

fn edge_by_endpoints(g: &Graph, u: usize, v: usize) -> Option<usize> {
    g.edges()
        .iter()
        .find(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
        .map(|e| e.id)
}

fn run_oracle(g: &Graph, queries: &str, baseline: bool) -> Result<(), Failure> {
    enum State {
        Base(BaselineOracle),
        Compact(CompactOracle),
    }
    let state = if baseline {
        State::Base(BaselineOracle::new(g).map_err(|e| Failure::Infeasible(e.to_string()))?)
    } else {
        State::Compact(CompactOracle::new(g).map_err(|e| Failure::Infeasible(e.to_string()))?)
    };

    let mut first = true;
    for (idx, raw) in queries.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Failure::Parse(format!(
                "query line {lineno}: expected `fail|insert u1 v1 u2 v2`"
            )));
        }
        let mut ids = [0usize; 4];
        for (i, field) in fields[1..].iter().enumerate() {
            let id: usize = field
                .parse()
                .map_err(|_| Failure::Parse(format!("query line {lineno}: bad vertex id")))?;
            if id == 0 || id > g.n() {
                return Err(Failure::Parse(format!(
                    "query line {lineno}: vertex id out of range"
                )));
            }
            ids[i] = id - 1;
        }
        let answer = match fields[0] {
            "fail" => {
                let e1 = edge_by_endpoints(g, ids[0], ids[1]).ok_or_else(|| {
                    Failure::Infeasible(format!("query line {lineno}: no edge {} {}", ids[0] + 1, ids[1] + 1))
                })?;
                let e2 = edge_by_endpoints(g, ids[2], ids[3]).ok_or_else(|| {
                    Failure::Infeasible(format!("query line {lineno}: no edge {} {}", ids[2] + 1, ids[3] + 1))
                })?;
                match &state {
                    State::Base(o) => o.query_fail(e1, e2),
                    State::Compact(o) => o.query_fail(e1, e2),
                }
            }
            "insert" => match &state {
                State::Base(o) => o.query_insert((ids[0], ids[1]), (ids[2], ids[3])),
                State::Compact(o) => o.query_insert((ids[0], ids[1]), (ids[2], ids[3])),
            },
            other => {
                return Err(Failure::Parse(format!(
                    "query line {lineno}: unknown query `{other}`"
                )))
            }
        }
        .map_err(|e| Failure::Infeasible(format!("query line {lineno}: {e}")))?;

        if !first {
            println!();
        }
        first = false;
        println!("cap {}", answer.capacity);
        println!("cutside {}", side_text(&answer.side));
        let pairs: Vec<String> = answer
            .edges
            .iter()
            .map(|&(u, v)| format!("{} {}", u + 1, v + 1))
            .collect();
        if pairs.is_empty() {
            println!("edges");
        } else {
            println!("edges {}", pairs.join(" "));
        }
    }
    Ok(())
}

fn run_bench(g: &Graph) -> Result<(), Failure> {
    let mode = if g.is_directed() { "directed" } else { "undirected" };
    println!("graph n {} m {} {}", g.n(), g.m(), mode);
    let f = pinned_flow(g);
    let lambda = f.value;
    println!("lambda {lambda}");
    println!("flow_edges {}", f.flow_edges(g).len());
    let dag = build_pq_dag(g, &f).map_err(|e| Failure::Infeasible(e.to_string()))?;
    println!("dpq_nodes {}", dag.node_count());
    println!("dpq_arcs {}", dag.arcs.len());
    let bound = (g.n() as u64) * (lambda as f64).sqrt().ceil().max(1.0) as u64;
    println!("space_bound_min_m_nsqrtlambda {}", (g.m() as u64).min(bound));

    if g.is_directed() {
        match second_mincut(g) {
            Ok(r) => {
                println!("second_mincut_cap {}", r.capacity);
                println!("maxflow_calls {}", r.maxflow_calls);
                println!("global_mincut_calls {}", r.global_mincut_calls);
                println!("dag_mincut_calls {}", r.dag_mincut_calls);
            }
            Err(Error::NoSecondMincut) => println!("second_mincut_cap none"),
            Err(e) => return Err(Failure::Infeasible(e.to_string())),
        }
    } else if g.is_unit() {
        let anchors = compute_anchors(g, &f).map_err(|e| Failure::Infeasible(e.to_string()))?;
        println!("anchors {}", anchors.len());
        let st = build_structure(g).map_err(|e| Failure::Infeasible(e.to_string()))?;
        println!("structure_nodes {}", st.dag.node_count());
        println!("structure_arcs {}", st.dag.arcs.len());
        if g.is_simple() {
            let oracle = CompactOracle::new(g).map_err(|e| Failure::Infeasible(e.to_string()))?;
            println!("oracle_arcs {}", oracle.arc_count());
        }
    }
    Ok(())
}

fn run_verify(target: VerifyTarget, seed: u64, count: u32) -> Result<(), Failure> {
    println!("seed {seed}");
    let all = target == VerifyTarget::All;
    let mut checks: Vec<(&str, Box<dyn Fn(u64, u32) -> Result<String, String>>)> = Vec::new();
    if all || target == VerifyTarget::Maxflow {
        checks.push(("maxflow", Box::new(verify_maxflow)));
    }
    if all || target == VerifyTarget::Pqdag {
        checks.push(("pqdag", Box::new(verify_pqdag)));
    }
    if all || target == VerifyTarget::SecondMincut {
        checks.push(("second-mincut", Box::new(verify_second_mincut)));
    }
    if all || target == VerifyTarget::Minplus1 {
        checks.push(("minplus1", Box::new(verify_minplus1)));
    }
    if all || target == VerifyTarget::Anchors {
        checks.push(("anchors", Box::new(verify_anchors)));
    }
    if all || target == VerifyTarget::Structure {
        checks.push(("structure", Box::new(verify_structure)));
    }
    if all || target == VerifyTarget::Oracle {
        checks.push(("oracle", Box::new(verify_oracle)));
    }
    for (name, check) in checks {
        match check(seed, count) {
            Ok(detail) => println!("ok {name}: {detail}"),
            Err(detail) => {
                println!("MISMATCH {name}: {detail}");
                return Err(Failure::Mismatch(format!("{name}: {detail}")));
            }
        }
    }
    Ok(())
}

fn verify_maxflow(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed);
    for i in 0..count {
        let n = rng.random_range(4..=8);
        let g = if rng.random_bool(0.5) {
            fixtures::random_directed(&mut rng, n, 0.5, 5)
        } else {
            fixtures::random_undirected_multigraph(&mut rng, n, 0.5, 3)
        };
        let inv = enumerate_cuts(&g, false).map_err(|e| e.to_string())?;
        let (f, cut) = max_flow(&g);
        if f.value != inv.lambda || cut.capacity != inv.lambda {
            return Err(format!("instance {i}: value {} vs lambda {}", f.value, inv.lambda));
        }
    }
    Ok(format!("{count} instances"))
}

fn verify_pqdag(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0x5051);
    for i in 0..count {
        let n = rng.random_range(4..=8);
        let g = if rng.random_bool(0.5) {
            fixtures::random_directed(&mut rng, n, 0.5, 4)
        } else {
            fixtures::random_undirected_multigraph(&mut rng, n, 0.5, 2)
        };
        let inv = enumerate_cuts(&g, false).map_err(|e| e.to_string())?;
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).map_err(|e| e.to_string())?;
        for start in 1..dag.node_count() {
            let side = dag.suffix_side(start);
            let cap = cut_capacity(&g, &side).map_err(|e| e.to_string())?.capacity;
            if cap != inv.lambda {
                return Err(format!("instance {i}: suffix {start} has capacity {cap}"));
            }
        }
        for mask in 0..inv.cut_count() {
            let side = inv.side_of_mask(mask);
            let expect = inv.capacities[mask as usize] == inv.lambda;
            if dag.is_one_transversal(&side) != expect {
                return Err(format!("instance {i}: transversal mismatch on {side:?}"));
            }
        }
    }
    Ok(format!("{count} instances, exhaustive transversal check"))
}

fn verify_second_mincut(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0x2ECD);
    for i in 0..count {
        let n = rng.random_range(4..=8);
        let density = rng.random_range(0.3..=0.9);
        let g = fixtures::random_directed(&mut rng, n, density, 5);
        let inv = enumerate_cuts(&g, false).map_err(|e| e.to_string())?;
        for (label, run) in [
            ("global", second_mincut(&g)),
            ("covering", second_mincut_covering(&g)),
        ] {
            match (inv.second_min, run) {
                (Some(expect), Ok(r)) if r.capacity == expect => {}
                (None, Err(Error::NoSecondMincut)) => {}
                (expect, got) => {
                    return Err(format!(
                        "instance {i} ({label}): oracle {expect:?}, algorithm {:?}\n{}",
                        got.map(|r| r.capacity),
                        dimacs::render_graph(&g)
                    ))
                }
            }
        }
    }
    Ok(format!("{count} instances, both algorithms"))
}

fn verify_minplus1(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0x3A01);
    for i in 0..count {
        let n = rng.random_range(4..=8);
        let g = fixtures::random_directed(&mut rng, n, 0.45, 2);
        let inv = enumerate_cuts(&g, false).map_err(|e| e.to_string())?;
        let (f, _) = max_flow(&g);
        let got = minplus1(&g, &f).map_err(|e| e.to_string())?;
        let exists = inv.second_min == Some(inv.lambda + 1);
        match got {
            Some(cut) if exists && cut.capacity == inv.lambda + 1 => {}
            None if !exists => {}
            other => {
                return Err(format!(
                    "instance {i}: oracle min+1 exists={exists}, algorithm {:?}\n{}",
                    other.map(|c| c.capacity),
                    dimacs::render_graph(&g)
                ))
            }
        }
    }
    Ok(format!("{count} instances"))
}

fn verify_anchors(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0xA2C4);
    for i in 0..count {
        let n = rng.random_range(4..=8);
        let g = fixtures::random_undirected_multigraph(&mut rng, n, 0.5, 2);
        let f = pinned_flow(&g);
        let fast = compute_anchors(&g, &f).map_err(|e| e.to_string())?;
        let brute = brute_anchors(&g, &f).map_err(|e| e.to_string())?;
        if fast != brute {
            return Err(format!(
                "instance {i}: {fast:?} vs brute {brute:?}\n{}",
                dimacs::render_graph(&g)
            ));
        }
        if fast.len() > g.n() - 2 {
            return Err(format!("instance {i}: |A| = {} exceeds n-2", fast.len()));
        }
    }
    Ok(format!("{count} instances, set equality"))
}

fn verify_structure(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0x57CC);
    for i in 0..count {
        let n = rng.random_range(4..=10);
        let g = fixtures::random_undirected_multigraph(&mut rng, n, 0.4, 2);
        let st = build_structure(&g).map_err(|e| e.to_string())?;
        let inv = enumerate_cuts(&g, false).map_err(|e| e.to_string())?;
        for mask in 0..inv.cut_count() {
            let side = inv.side_of_mask(mask);
            let cap = inv.capacities[mask as usize];
            let expect = if cap == inv.lambda {
                oracle::CutClass::Mincut
            } else if cap == inv.lambda + 1 {
                oracle::CutClass::MinPlusOne
            } else {
                oracle::CutClass::Other
            };
            let got = classify_cut(&st, &side).map_err(|e| e.to_string())?;
            if got != expect {
                return Err(format!("instance {i}: side {side:?} classified {got:?}"));
            }
        }
    }
    Ok(format!("{count} instances, all cuts classified"))
}

fn verify_oracle(seed: u64, count: u32) -> Result<String, String> {
    let mut rng = fixtures::rng(seed ^ 0x04AC);
    let graphs = count.min(10);
    let mut pairs_checked = 0u64;
    for i in 0..graphs {
        let n = rng.random_range(5..=9);
        let g = fixtures::random_simple(&mut rng, n, 0.5);
        let baseline = BaselineOracle::new(&g).map_err(|e| e.to_string())?;
        let compact = CompactOracle::new(&g).map_err(|e| e.to_string())?;
        for e1 in 0..g.m() {
            for e2 in (e1 + 1)..g.m() {
                let expect = max_flow(&g.remove_edges(&[e1, e2]).unwrap()).0.value;
                let ba = baseline.query_fail(e1, e2).map_err(|e| e.to_string())?;
                let ca = compact.query_fail(e1, e2).map_err(|e| e.to_string())?;
                if ba.capacity != expect || ca.capacity != expect {
                    return Err(format!(
                        "instance {i}: fail({e1},{e2}) baseline {} compact {} expect {expect}",
                        ba.capacity, ca.capacity
                    ));
                }
                pairs_checked += 1;
            }
        }
        for _ in 0..20 {
            let mut pick = || {
                let u = rng.random_range(0..g.n());
                let mut v = rng.random_range(0..g.n());
                while v == u {
                    v = rng.random_range(0..g.n());
                }
                (u, v)
            };
            let (p1, p2) = (pick(), pick());
            let mut g2 = g.clone();
            g2 = g2.add_edge(p1.0, p1.1, 1).unwrap().0;
            g2 = g2.add_edge(p2.0, p2.1, 1).unwrap().0;
            let expect = max_flow(&g2).0.value;
            let ba = baseline.query_insert(p1, p2).map_err(|e| e.to_string())?;
            let ca = compact.query_insert(p1, p2).map_err(|e| e.to_string())?;
            if ba.capacity != expect || ca.capacity != expect {
                return Err(format!(
                    "instance {i}: insert {p1:?} {p2:?} baseline {} compact {} expect {expect}",
                    ba.capacity, ca.capacity
                ));
            }
        }
    }
    Ok(format!("{graphs} graphs, {pairs_checked} failure pairs, 20 insertions each"))
}
