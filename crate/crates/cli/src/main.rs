use std::fmt::Write as _;
use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use grepair::codec::{read_container, write_container, CodecError, Container, NodeMapping};
use grepair::compressor::{compress, CompressError, CompressorConfig};
use grepair::generators::{self, RankedTree};
use grepair::io::{parse_edge_list, write_edge_list, IngestError};
use grepair::orders::{fp_order, OrderKind};
use grepair::queries::{regex_to_nfa, Direction, QueryError, QueryGrammar, RegularPathQuery};
use grepair::{Edge, Hypergraph, Label, LabelDictionary, NodeId};

#[derive(Parser)]
#[command(name = "grepair", version, about = "Compress graphs into hyperedge replacement grammars and query them")]
struct Cli {
    /// Only print machine-readable output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Read and print node arguments as canonical ids instead of input names.
    #[arg(long, global = true)]
    raw: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress an edge list (`-` for stdin) into a container.
    Compress {
        input: PathBuf,
        /// Container path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value = "fp")]
        order: OrderKind,
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        no_virtual_pass: bool,
        /// Do not store input node names.
        #[arg(long)]
        no_mapping: bool,
    },
    /// Write the edge list of a container.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Sort lines so that outputs are byte-comparable.
        #[arg(long)]
        sort: bool,
    },
    /// Print statistics of a container as one line of key=value pairs.
    Stats { input: PathBuf },
    /// Reachability and regular path queries.
    Query {
        #[command(subcommand)]
        query: Query,
    },
    /// Print the in- or out-neighbours of a node.
    Neighbors {
        input: PathBuf,
        node: String,
        #[arg(long, value_enum, default_value = "out")]
        direction: Dir,
    },
    /// Print a synthetic graph as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Is `target` reachable from `source`?
    Reach { input: PathBuf, source: String, target: String },
    /// Is there a path from `source` to `target` spelling a word of the
    /// pattern? Without nodes: is there such a pair at all?
    Rpq { input: PathBuf, pattern: String, source: Option<String>, target: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Out,
    In,
}

#[derive(Subcommand)]
enum Family {
    /// `n` rows of `2^n` nodes.
    Grid { n: u32 },
    /// Triangle fractal after `n` steps.
    Tf { n: u32 },
    /// Tree-graph of a comb with `2^n` spine nodes of rank `k`.
    Comb { n: u32, k: u32 },
    /// Path of `2^n` f-edges with a_(i mod 5) leaves.
    Tn { n: u32 },
    /// `m` disjoint copies of a 4-cycle with one diagonal.
    Copies { m: u32 },
    /// String graph; every character is a label.
    Sgraph { word: String },
    /// Tree-graph of a term such as `f(a,g(a,b))`.
    Tgraph { term: String },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Ingest(IngestError),
    Io(PathBuf, io::Error),
    Decode(CodecError),
    Query(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Ingest(_) => 3,
            Failure::Io(..) => 4,
            Failure::Decode(_) => 5,
            Failure::Query(_) => 6,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Ingest(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Decode(e) => write!(f, "cannot decode container: {e}"),
            Failure::Query(m) => write!(f, "{m}"),
        }
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        Failure::Query(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Compress { input, output, max_rank, order, no_prune, no_virtual_pass, no_mapping } => {
            let config = CompressorConfig {
                max_rank: *max_rank,
                order: *order,
                prune: !no_prune,
                virtual_edge_pass: !no_virtual_pass,
            };
            cmd_compress(cli, input, output.as_deref(), &config, !no_mapping)
        }
        Command::Decompress { input, output, sort } => cmd_decompress(cli, input, output.as_deref(), *sort),
        Command::Stats { input } => cmd_stats(input),
        Command::Query { query: Query::Reach { input, source, target } } => {
            let loaded = Loaded::open(input)?;
            let s = loaded.resolve(source, cli.raw)?;
            let t = loaded.resolve(target, cli.raw)?;
            println!("{}", loaded.index.reachable(s, t)?);
            Ok(())
        }
        Command::Query { query: Query::Rpq { input, pattern, source, target } } => {
            let loaded = Loaded::open(input)?;
            let nfa = regex_to_nfa(pattern, &loaded.container.labels)?;
            let rpq = RegularPathQuery::new(&loaded.container.grammar, &nfa)?;
            let answer = match (source, target) {
                (Some(s), Some(t)) => {
                    rpq.pair(&loaded.index, loaded.resolve(s, cli.raw)?, loaded.resolve(t, cli.raw)?)?
                }
                (None, None) => rpq.exists(),
                _ => return Err(Failure::Usage("give both a source and a target, or neither".into())),
            };
            println!("{answer}");
            Ok(())
        }
        Command::Neighbors { input, node, direction } => {
            let loaded = Loaded::open(input)?;
            let v = loaded.resolve(node, cli.raw)?;
            let dir = match direction {
                Dir::Out => Direction::Out,
                Dir::In => Direction::In,
            };
            let names: Vec<String> =
                loaded.index.neighbors(v, dir)?.into_iter().map(|u| loaded.name(u, cli.raw)).collect();
            println!("{}", names.join(","));
            Ok(())
        }
        Command::Gen { family } => {
            print!("{}", generate(family)?);
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| Failure::Io(path.into(), e))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| Failure::Io(path.into(), e))
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(p.into(), e)),
        None => io::stdout().write_all(bytes).map_err(|e| Failure::Io("<stdout>".into(), e)),
    }
}

fn ms(t: Instant) -> String {
    format!("{:.3}", t.elapsed().as_secs_f64() * 1e3)
}

fn cmd_compress(cli: &Cli, input: &Path, output: Option<&Path>, config: &CompressorConfig, keep_names: bool) -> Result<()> {
    if output.is_none() && io::stdout().is_terminal() {
        return Err(Failure::Usage("refusing to write a container to a terminal; use -o".into()));
    }
    let t0 = Instant::now();
    let bytes = read_input(input)?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{}: not UTF-8", input.display())))?;
    let list = parse_edge_list(&text).map_err(Failure::Ingest)?;
    let parse_ms = ms(t0);
    if !cli.quiet {
        for w in &list.warnings {
            eprintln!("warning: {w}");
        }
    }
    let t1 = Instant::now();
    let c = compress(&list.graph, config).map_err(|e| match e {
        CompressError::MaxRank(_) => Failure::Usage(e.to_string()),
        CompressError::InvalidInput(_) => Failure::Usage(e.to_string()),
    })?;
    let compress_ms = ms(t1);
    let t2 = Instant::now();
    let mapping = keep_names.then(|| {
        NodeMapping::from_names(c.mapping.iter().map(|&v| list.node_names[(v - 1) as usize].clone()).collect())
    });
    let container = Container { grammar: c.grammar.clone(), labels: list.labels.clone(), mapping };
    let out = write_container(&container).map_err(Failure::Decode)?;
    let encode_ms = ms(t2);
    write_output(output, &out)?;

    let g = &list.graph;
    let stats = c.grammar.stats();
    let edges = g.edges().len();
    let mut report = String::new();
    write!(
        report,
        "nodes={} edges={} input_size={} grammar_size={} rules={} height={} ratio={:.6} bpe={:.4} classes={} \
         replacements={} fell_back={} container_bytes={} parse_ms={parse_ms} compress_ms={compress_ms} encode_ms={encode_ms}",
        g.node_count(),
        edges,
        g.size().total,
        stats.size,
        stats.rules,
        stats.height,
        stats.size as f64 / g.size().total as f64,
        8.0 * out.len() as f64 / edges as f64,
        c.stats.class_count.map_or("-".to_string(), |n| n.to_string()),
        c.stats.replacements,
        c.stats.fell_back,
        out.len(),
    )
    .unwrap();
    if !cli.quiet {
        eprintln!(
            "{} nodes, {} edges: grammar size {} of {} ({:.1}%), {} rules, {:.2} bits per edge",
            g.node_count(),
            edges,
            stats.size,
            g.size().total,
            100.0 * stats.size as f64 / g.size().total as f64,
            stats.rules,
            8.0 * out.len() as f64 / edges as f64
        );
    }
    eprintln!("{report}");
    Ok(())
}

fn load(input: &Path) -> Result<Container> {
    read_container(&read_input(input)?).map_err(Failure::Decode)
}

fn cmd_decompress(cli: &Cli, input: &Path, output: Option<&Path>, sort: bool) -> Result<()> {
    let c = load(input)?;
    let v = c.grammar.val();
    let names: Option<Vec<String>> = match (&c.mapping, cli.raw) {
        (Some(m), false) => Some(v.nodes().map(|x| m.name(x)).collect()),
        (None, false) => {
            eprintln!("warning: container has no node mapping; printing canonical ids");
            None
        }
        _ => None,
    };
    let mut text = write_edge_list(&v, names.as_deref(), &c.labels);
    if sort {
        let mut lines: Vec<&str> = text.lines().collect();
        lines.sort_unstable();
        text = lines.iter().map(|l| format!("{l}\n")).collect();
    }
    write_output(output, text.as_bytes())
}

fn cmd_stats(input: &Path) -> Result<()> {
    let bytes = read_input(input)?;
    let c = read_container(&bytes).map_err(Failure::Decode)?;
    let v = c.grammar.val();
    let stats = c.grammar.stats();
    let edges = v.edges().len();
    let fp = fp_order(&v, None);
    println!(
        "nodes={} edges={} input_size={} grammar_size={} rules={} height={} ratio={:.6} bpe={:.4} classes={} container_bytes={} mapping={}",
        v.node_count(),
        edges,
        v.size().total,
        stats.size,
        stats.rules,
        stats.height,
        stats.size as f64 / v.size().total.max(1) as f64,
        8.0 * bytes.len() as f64 / edges.max(1) as f64,
        fp.class_count.unwrap_or(0),
        bytes.len(),
        c.mapping.is_some(),
    );
    Ok(())
}

struct Loaded {
    container: Container,
    index: QueryGrammar,
}

impl Loaded {
    fn open(input: &Path) -> Result<Self> {
        let container = load(input)?;
        let index = QueryGrammar::new(container.grammar.clone());
        Ok(Loaded { container, index })
    }

    /// A node argument: a stored name, or a canonical id with `--raw` or
    /// when the container has no mapping.
    fn resolve(&self, arg: &str, raw: bool) -> Result<u64> {
        match (&self.container.mapping, raw) {
            (Some(NodeMapping::Names(names)), false) => names
                .iter()
                .position(|n| n == arg)
                .map(|i| i as u64 + 1)
                .ok_or_else(|| Failure::Query(format!("unknown node `{arg}`"))),
            (Some(NodeMapping::Ids(ids)), false) => {
                let want: u64 = arg.parse().map_err(|_| Failure::Query(format!("unknown node `{arg}`")))?;
                ids.iter()
                    .position(|&n| n == want)
                    .map(|i| i as u64 + 1)
                    .ok_or_else(|| Failure::Query(format!("unknown node `{arg}`")))
            }
            _ => arg.parse().map_err(|_| Failure::Query(format!("`{arg}` is not a node id"))),
        }
    }

    fn name(&self, v: u64, raw: bool) -> String {
        match (&self.container.mapping, raw) {
            (Some(m), false) => m.name(v as NodeId),
            _ => v.to_string(),
        }
    }
}

fn generate(family: &Family) -> Result<String> {
    let plain = |g: &Hypergraph| {
        let mut labels = LabelDictionary::new();
        labels.intern("");
        write_edge_list(g, None, &labels)
    };
    Ok(match family {
        Family::Grid { n } => plain(&generators::grid(*n)),
        Family::Tf { n } => plain(&generators::triangle_fractal(*n)),
        Family::Copies { m } => plain(&generators::disjoint_copies(&generators::square_with_diagonal(), *m)),
        Family::Tn { n } => {
            let mut labels = LabelDictionary::new();
            labels.intern("f");
            for l in 0..5 {
                labels.intern(&format!("a{l}"));
            }
            write_edge_list(&generators::chain_with_cycle(*n), None, &labels)
        }
        Family::Sgraph { word } => {
            let mut labels = LabelDictionary::new();
            let w: Vec<u32> = word.chars().map(|c| labels.intern(c.encode_utf8(&mut [0; 4]))).collect();
            // node names follow positions 0..=|w|
            let names: Vec<String> = (0..=w.len()).map(|i| i.to_string()).collect();
            write_edge_list(&generators::s_graph(&w), Some(&names), &labels)
        }
        Family::Comb { n, k } => {
            if *n == 0 || *k == 0 {
                return Err(Failure::Usage("comb needs n ≥ 1 and k ≥ 1".into()));
            }
            tree_edge_list(&generators::comb_tree(*n, *k), &|s| {
                if s == generators::COMB_F { "f".into() } else { "a".into() }
            })
        }
        Family::Tgraph { term } => {
            let mut symbols = LabelDictionary::new();
            let t = parse_term(term, &mut symbols)?;
            tree_edge_list(&t, &|s| symbols.name(s).unwrap().to_string())
        }
    })
}

/// Edge lists hold rank-2 edges only, so a tree is written as parent →
/// child edges labelled by child position, and each node is named
/// `pre-order id:symbol`.
fn tree_edge_list(t: &RankedTree, symbol: &dyn Fn(u32) -> String) -> String {
    let g = generators::t_graph(t);
    let mut names = vec![String::new(); g.node_count() as usize];
    let mut edges = Vec::new();
    let mut labels = LabelDictionary::new();
    for e in g.edges() {
        let v = e.att[0];
        names[(v - 1) as usize] = format!("{v}:{}", symbol(e.label.id()));
        for (i, &c) in e.att[1..].iter().enumerate() {
            let l = labels.intern(&(i + 1).to_string());
            edges.push(Edge::new(Label::Terminal(l), vec![v, c]));
        }
    }
    write_edge_list(&Hypergraph::new(g.node_count(), edges, Vec::new()), Some(&names), &labels)
}

fn parse_term(s: &str, symbols: &mut LabelDictionary) -> Result<RankedTree> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut at = 0;
    let t = term(&chars, &mut at, symbols)?;
    if at != chars.len() {
        return Err(Failure::Usage(format!("unexpected `{}` in term", chars[at])));
    }
    Ok(t)
}

fn term(c: &[char], at: &mut usize, symbols: &mut LabelDictionary) -> Result<RankedTree> {
    let start = *at;
    while *at < c.len() && (c[*at].is_alphanumeric() || c[*at] == '_') {
        *at += 1;
    }
    if start == *at {
        return Err(Failure::Usage(format!("expected a symbol at offset {start} of term")));
    }
    let name: String = c[start..*at].iter().collect();
    let symbol = symbols.intern(&name);
    let mut children = Vec::new();
    if c.get(*at) == Some(&'(') {
        *at += 1;
        loop {
            children.push(term(c, at, symbols)?);
            match c.get(*at) {
                Some(',') => *at += 1,
                Some(')') => {
                    *at += 1;
                    break;
                }
                _ => return Err(Failure::Usage(format!("expected `,` or `)` at offset {at} of term"))),
            }
        }
    }
    Ok(RankedTree::node(symbol, children))
}
