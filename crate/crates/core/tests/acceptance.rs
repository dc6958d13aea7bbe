//! Acceptance run: one verdict line per criterion. Criteria listed in
//! `KNOWN_FAILURES` are reported but do not fail the run.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use grepair::codec::{read_container, write_container, Container, K2Tree, NodeMapping};
use grepair::compressor::{compress, count_occurrences, Compressed, CompressorConfig};
use grepair::fixtures;
use grepair::generators::*;
use grepair::orders::{order, OrderKind};
use grepair::queries::*;
use grepair::{Edge, Grammar, Hypergraph, Label, LabelDictionary, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[4];

struct Verdict {
    id: u32,
    pass: bool,
    lines: Vec<String>,
}

impl Verdict {
    fn new(id: u32) -> Self {
        Verdict { id, pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, what: String) {
        self.lines.push(format!("     {what}"));
    }

    fn time(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.check(took < limit, format!("runtime {:.1}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
    }
}

fn run(c: &CompressorConfig, g: &Hypergraph) -> Compressed {
    compress(g, c).expect("compressible input")
}

fn default() -> CompressorConfig {
    CompressorConfig::default()
}

fn fixture_inputs() -> Vec<(String, Hypergraph)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push((format!("grid({n})"), grid(n)));
        out.push((format!("tf({n})"), triangle_fractal(n)));
    }
    for n in 1..=6 {
        for k in 1..=5 {
            out.push((format!("comb({n},{k})"), comb(n, k)));
        }
        out.push((format!("tgraph(comb({n},3))"), t_graph(&comb_tree(n, 3))));
    }
    for n in 2..=11 {
        out.push((format!("T({n})"), chain_with_cycle(n)));
    }
    for m in [1, 2, 8, 64, 256] {
        out.push((format!("copies({m})"), disjoint_copies(&square_with_diagonal(), m)));
    }
    out.push(("sgraph(abab...)".into(), s_graph(&[1, 2, 1, 2, 1, 2, 1, 2, 1])));
    out.push(("intro".into(), fixtures::intro_graph()));
    out.push(("counting".into(), fixtures::counting_graph().0));
    out
}

fn roundtrip(v: &mut Verdict, sizes: &mut Verdict, name: &str, g: &Hypergraph, labels: &LabelDictionary) -> bool {
    let c = run(&default(), g);
    let container = Container {
        grammar: c.grammar.clone(),
        labels: labels.clone(),
        mapping: Some(NodeMapping::Ids(c.mapping.iter().map(|&x| x as u64).collect())),
    };
    let bytes = write_container(&container).unwrap();
    let back = read_container(&bytes).unwrap();
    let Some(NodeMapping::Ids(ids)) = &back.mapping else { return false };
    let map: Vec<NodeId> = ids.iter().map(|&x| x as NodeId).collect();
    let ok = c.restore() == *g
        && back == container
        && write_container(&back).unwrap() == bytes
        && back.grammar.val().rename(&map) == *g;
    let small = c.grammar.size() <= g.size().total;
    if !ok {
        v.check(false, format!("{name}: roundtrip"));
    }
    if !small {
        sizes.check(false, format!("{name}: |G| = {} > |g| = {}", c.grammar.size(), g.size().total));
    }
    ok
}

fn criteria_1_and_2() -> (Verdict, Verdict) {
    let start = Instant::now();
    let (mut v, mut s) = (Verdict::new(1), Verdict::new(2));
    let mut labels = LabelDictionary::new();
    for i in 1..=8 {
        labels.intern(&format!("l{i}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut good = 0;
    for i in 0..1000 {
        let g = {
            let labels = rng.gen_range(1..=8);
            common::random_graph(&mut rng, 300, 1500, labels)
        };
        good += roundtrip(&mut v, &mut s, &format!("random #{i}"), &g, &labels) as usize;
    }
    v.check(good == 1000, format!("{good}/1000 random graphs roundtrip through the container"));
    let fixtures = fixture_inputs();
    let good = fixtures.iter().filter(|(name, g)| roundtrip(&mut v, &mut s, name, g, &labels)).count();
    v.check(good == fixtures.len(), format!("{good}/{} generator fixtures roundtrip", fixtures.len()));
    v.time(start, Duration::from_secs(120));
    if s.pass {
        s.check(true, format!("|G| <= |g| on {} inputs", 1000 + fixtures.len()));
    }
    // Also every configuration exercised below.
    let mut other = 0;
    for (_, g) in &fixtures {
        for kind in [OrderKind::Natural, OrderKind::Bfs, OrderKind::Fp0, OrderKind::Fp] {
            for config in [default().with_order(kind).with_max_rank(2), default().with_order(kind).unbounded()] {
                let c = run(&config, g);
                other += 1;
                if c.grammar.size() > g.size().total {
                    s.check(false, format!("{kind}: |G| = {} > |g| = {}", c.grammar.size(), g.size().total));
                }
            }
        }
    }
    if s.pass {
        s.check(true, format!("|G| <= |g| on {other} fixture runs under every order and rank bound"));
    }
    (v, s)
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut good = 0;
    for _ in 0..200 {
        let len = rng.gen_range(1..=64);
        let sigma = rng.gen_range(1..=4);
        let w: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=sigma)).collect();
        let c = run(&default().with_order(OrderKind::Natural), &s_graph(&w));
        let got: Vec<(Label, Label)> = c.digrams.iter().map(|k| k.labels).collect();
        let shapes = c.digrams.iter().all(|k| k.pattern == [1, 2] && k.ext == [0, 2]);
        if got == common::string_repair(&w) && shapes {
            good += 1;
        } else {
            v.note(format!("word {w:?} diverges"));
        }
    }
    v.check(good == 200, format!("{good}/200 words replace the string-RePair digram sequence"));
    v
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut v = Verdict::new(4);

    let mut zero = true;
    for n in 1..=6 {
        for k in 3..=5 {
            for rank in 2..k as usize {
                let rules = run(&default().with_max_rank(rank), &comb(n, k)).grammar.rules.len();
                if rules != 0 {
                    zero = false;
                    v.note(format!("comb({n},{k}) max_rank {rank}: {rules} rules"));
                }
            }
        }
    }
    v.check(zero, "(a) comb(n,k), max_rank < k, n <= 6, k in 3..5: no rules".into());

    let size = |n: u32, k: u32| run(&default().with_max_rank(k as usize), &comb(n, k)).grammar.size();
    let c1 = size(4, 3) as f64 / 13.0;
    let mut over = Vec::new();
    for n in 1..=6 {
        for k in 3..=5 {
            let s = size(n, k);
            let bound = c1 * (k * k + n) as f64;
            if s as f64 > bound {
                over.push(format!("comb({n},{k}) {s} > {bound:.1}"));
            }
        }
    }
    v.check(over.is_empty(), format!("(b) comb(n,k), max_rank = k: |G| <= c1(k^2+n), c1 = {c1:.3}; over: {over:?}"));

    for kind in [OrderKind::Natural, OrderKind::Bfs, OrderKind::Fp0, OrderKind::Fp] {
        let tn = |n: u32| run(&default().with_order(kind).with_max_rank(2), &chain_with_cycle(n)).grammar.size();
        let sizes: Vec<usize> = (6..=11).map(tn).collect();
        let c2 = sizes[0] as f64 / 6.0;
        let over: Vec<u32> = (6..=11).filter(|&n| sizes[n as usize - 6] as f64 > c2 * n as f64).collect();
        v.check(over.is_empty(), format!("(c) T_n max_rank 2, {kind}: sizes {sizes:?} for n = 6..11, c2 = {c2:.3}, over: {over:?}"));
    }

    for kind in [OrderKind::Natural, OrderKind::Bfs, OrderKind::Fp0, OrderKind::Fp] {
        let ratios: Vec<f64> = (10..=11)
            .map(|n| {
                let g = chain_with_cycle(n);
                run(&default().with_order(kind).unbounded(), &g).grammar.size() as f64 / g.size().total as f64
            })
            .collect();
        let ok = ratios.iter().all(|&r| r >= 0.70);
        v.check(ok, format!("(d) T_n unbounded, {kind}: ratio for n = 10, 11: {ratios:.3?} (>= 0.70)"));
    }
    v.time(start, Duration::from_secs(60));
    v
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let mut v = Verdict::new(5);
    let sizes: Vec<(u32, usize, usize)> = (3..=12)
        .map(|e| {
            let g = disjoint_copies(&square_with_diagonal(), 1 << e);
            (e, g.size().total, run(&default(), &g).grammar.size())
        })
        .collect();
    let b = sizes[1].2 as f64 - sizes[0].2 as f64;
    let a = sizes[0].2 as f64 - 3.0 * b;
    let over: Vec<u32> = sizes.iter().filter(|s| s.2 as f64 > 2.0 * (a + b * s.0 as f64)).map(|s| 1 << s.0).collect();
    v.check(over.is_empty(), format!("|G| <= 2(a + b log2 m) for m = 8..4096 with a = {a}, b = {b}; over: {over:?}"));
    let last = sizes.last().unwrap();
    v.note(format!("m = 4096: |g| = {}, |G| = {}, fitted {}", last.1, last.2, a + 12.0 * b));
    let linear = sizes.iter().all(|s| s.1 == sizes[0].1 << (s.0 - 3));
    v.check(linear, "input size doubles with m".into());
    v.time(start, Duration::from_secs(60));
    v
}

/// Smallest sorted arc list over node relabelings that keep nodes sorted
/// by (out-degree, in-degree).
fn canonical(n: usize, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut deg = vec![(0, 0); n];
    for &(u, w) in arcs {
        deg[u].0 += 1;
        deg[w].1 += 1;
    }
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.sort_by_key(|&x| deg[x]);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &nodes {
        match classes.last_mut() {
            Some(c) if deg[c[0]] == deg[x] => c.push(x),
            _ => classes.push(vec![x]),
        }
    }
    fn permute(c: usize, classes: &mut [Vec<usize>], arcs: &[(usize, usize)], best: &mut Option<Vec<(usize, usize)>>) {
        if c == classes.len() {
            let mut pos = vec![0; classes.iter().map(Vec::len).sum()];
            let mut i = 0;
            for class in classes.iter() {
                for &x in class {
                    pos[x] = i;
                    i += 1;
                }
            }
            let mut out: Vec<(usize, usize)> = arcs.iter().map(|&(u, w)| (pos[u], pos[w])).collect();
            out.sort_unstable();
            if best.as_ref().is_none_or(|b| out < *b) {
                *best = Some(out);
            }
            return;
        }
        let k = classes[c].len();
        // Heap's algorithm over this class, recursing at each permutation.
        let mut counter = vec![0; k];
        permute(c + 1, classes, arcs, best);
        let mut i = 0;
        while i < k {
            if counter[i] < i {
                if i % 2 == 0 {
                    classes[c].swap(0, i);
                } else {
                    classes[c].swap(counter[i], i);
                }
                permute(c + 1, classes, arcs, best);
                counter[i] += 1;
                i = 0;
            } else {
                counter[i] = 0;
                i += 1;
            }
        }
    }
    let mut best = None;
    permute(0, &mut classes, arcs, &mut best);
    best.unwrap()
}

/// Every weakly connected simple digraph with at most `max` arcs, one per
/// isomorphism class.
fn connected_digraphs(max: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut layer: Vec<(usize, Vec<(usize, usize)>)> = vec![(2, vec![(0, 1)])];
    let mut all = layer.clone();
    for _ in 1..max {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (n, arcs) in &layer {
            let mut grow = |n: usize, a: (usize, usize)| {
                let mut arcs = arcs.clone();
                arcs.push(a);
                let c = canonical(n, &arcs);
                if seen.insert((n, c.clone())) {
                    next.push((n, c));
                }
            };
            for u in 0..*n {
                for w in 0..*n {
                    if u != w && !arcs.contains(&(u, w)) {
                        grow(*n, (u, w));
                    }
                }
                grow(n + 1, (u, *n));
                grow(n + 1, (*n, u));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn greedy_against_matching(g: &Hypergraph, stats: &mut (usize, usize, usize)) -> bool {
    let all = common::all_occurrences(g);
    let mut ok = true;
    for kind in [OrderKind::Natural, OrderKind::Fp] {
        let idx = count_occurrences(g, &order(g, kind), usize::MAX);
        for (key, occs) in &idx.digrams {
            let shape = ((key.ranks.0, key.ranks.1), key.pattern.clone(), key.ext.clone(), key.labels);
            let best = common::max_matching(g.edges().len(), &all[&shape]);
            stats.0 += 1;
            ok &= occs.len() <= best;
            if 2 * occs.len() < best {
                stats.1 += 1;
            }
            stats.2 = stats.2.max(best - occs.len().min(best));
        }
    }
    ok
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut v = Verdict::new(6);
    let shapes = connected_digraphs(7);
    let mut stats = (0, 0, 0);
    let mut bad = 0;
    for (n, arcs) in &shapes {
        let edges = arcs.iter().map(|&(u, w)| Edge::new(Label::Terminal(1), vec![u as u32 + 1, w as u32 + 1])).collect();
        let g = Hypergraph::new(*n as u32, edges, Vec::new());
        bad += !greedy_against_matching(&g, &mut stats) as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for _ in 0..500 {
        let g = {
            let edges = rng.gen_range(8..=12);
            common::random_connected(&mut rng, edges, 2)
        };
        bad += !greedy_against_matching(&g, &mut stats) as usize;
    }
    v.check(bad == 0, format!("greedy <= maximum matching: {} exhaustive graphs (<= 7 edges) + 500 random, {} digram counts, {bad} violations", shapes.len(), stats.0));
    v.note(format!("greedy < half of the optimum: {} of {} counts (reported only); largest gap {}", stats.1, stats.0, stats.2));
    v.time(start, Duration::from_secs(180));
    v
}

fn bfs_reach(g: &Hypergraph, s: NodeId, t: NodeId) -> bool {
    let mut seen = vec![false; g.node_count() as usize + 1];
    let mut queue = VecDeque::from([s]);
    seen[s as usize] = true;
    while let Some(x) = queue.pop_front() {
        if x == t {
            return true;
        }
        for &e in g.incident(x) {
            let e = g.edge(e as usize);
            if e.att[0] == x {
                for &w in &e.att[1..] {
                    if !std::mem::replace(&mut seen[w as usize], true) {
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    false
}

/// Half plain random graphs, half copies of a small random graph joined by
/// a few extra edges, so that most grammars have rules.
fn random_compressed(rng: &mut ChaCha8Rng, nodes: u32, edges: usize) -> Grammar {
    let g = if rng.gen_bool(0.5) {
        common::random_graph(rng, nodes, edges, 3)
    } else {
        let unit = common::random_graph(rng, 5, 8, 3);
        let m = rng.gen_range(2..=(nodes / unit.node_count()).max(2));
        let copies = disjoint_copies(&unit, m);
        let n = copies.node_count();
        let mut seen: HashSet<(NodeId, NodeId, Label)> = copies.edges().iter().map(|e| (e.att[0], e.att[1], e.label)).collect();
        let mut all = copies.edges().to_vec();
        for _ in 0..rng.gen_range(0..=3) {
            let (u, w, l) = (rng.gen_range(1..=n), rng.gen_range(1..=n), Label::Terminal(rng.gen_range(1..=3)));
            if u != w && seen.insert((u, w, l)) {
                all.push(Edge::new(l, vec![u, w]));
            }
        }
        Hypergraph::new(n, all, Vec::new())
    };
    let kind = [OrderKind::Natural, OrderKind::Bfs, OrderKind::Fp0, OrderKind::Fp][rng.gen_range(0..4)];
    run(&default().with_order(kind).with_max_rank(rng.gen_range(2..=5)), &g).grammar
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let mut v = Verdict::new(7);
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let (mut nb, mut nb_bad, mut re_bad, mut rpq_bad, mut rules) = (0, 0, 0, 0, 0);
    for i in 0..200 {
        let g = random_compressed(&mut rng, 40, 120);
        rules += g.rules.len();
        let val = g.val();
        let q = QueryGrammar::new(g.clone());
        let mut out: HashMap<NodeId, BTreeSet<u64>> = val.nodes().map(|x| (x, BTreeSet::new())).collect();
        let mut inc = out.clone();
        for e in val.edges() {
            for &w in &e.att[1..] {
                out.get_mut(&e.att[0]).unwrap().insert(w as u64);
                inc.get_mut(&w).unwrap().insert(e.att[0] as u64);
            }
        }
        for x in val.nodes() {
            nb += 1;
            let o: BTreeSet<u64> = q.neighbors(x as u64, Direction::Out).unwrap().into_iter().collect();
            let n: BTreeSet<u64> = q.neighbors(x as u64, Direction::In).unwrap().into_iter().collect();
            nb_bad += (o != out[&x] || n != inc[&x]) as usize;
        }
        let n = val.node_count();
        for _ in 0..10 {
            let (s, t) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            re_bad += (q.reachable(s as u64, t as u64).unwrap() != bfs_reach(&val, s, t)) as usize;
        }
        let count = if i < 100 { 3 } else { 2 };
        for _ in 0..count {
            let p = common::random_pattern_upto(&mut rng, 10);
            let nfa = regex_to_nfa_with(&p, common::abc).unwrap();
            let (s, t) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            rpq_bad += (rpq_pair(&q, &nfa, s as u64, t as u64).unwrap() != common::flat_rpq(&val, &nfa, s, t)) as usize;
        }
    }
    v.note(format!("200 grammars, {rules} rules in total"));
    v.check(nb_bad == 0, format!("(a) neighbors: {nb} nodes, {nb_bad} mismatches"));
    v.check(re_bad == 0, format!("(b) reachable: 2000 pairs, {re_bad} mismatches"));
    v.check(rpq_bad == 0, format!("(c) rpq_pair: 500 queries, {rpq_bad} mismatches"));

    let (mut ex_bad, mut seen) = (0, [0; 2]);
    for _ in 0..200 {
        let g = random_compressed(&mut rng, 15, 40);
        let p = common::random_pattern_upto(&mut rng, 10);
        let nfa = regex_to_nfa_with(&p, common::abc).unwrap();
        let rpq = RegularPathQuery::new(&g, &nfa).unwrap();
        let base = QueryGrammar::new(g.clone());
        let n = base.node_total();
        let any = (1..=n).any(|s| (1..=n).any(|t| rpq.pair(&base, s, t).unwrap()));
        ex_bad += (rpq.exists() != any) as usize;
        seen[any as usize] += 1;
    }
    v.check(ex_bad == 0, format!("(d) rpq_exists: 200 graphs <= 15 nodes ({} true, {} false), {ex_bad} mismatches", seen[1], seen[0]));
    v.time(start, Duration::from_secs(180));
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new(8);
    let con = fixtures::pruning_grammar().contribution(1);
    v.check(con == Ok(3), format!("con(A) = {con:?} on the pruning fixture (expected 3)"));
    let (gs, hs) = (fixtures::intro_grammar().size(), fixtures::intro_graph().size().total);
    v.check((gs, hs) == (10, 11), format!("intro grammar size {gs} vs graph size {hs} (expected 10 vs 11)"));
    let a = |name: &str| (name == "a").then_some(1);
    let nfa = regex_to_nfa_with("(aaaaa)*", a).unwrap();
    let counter = Nfa::counter(1, 5);
    let p = product_grammar(&fixtures::a40_grammar(), &counter).unwrap();
    let flat = fixtures::a40_grammar().val().node_count() as usize * counter.states;
    v.check((p.node_slots(), flat) == (95, 205), format!("a40 product: {} node slots vs {flat} flat (expected 95 vs 205)", p.node_slots()));

    // Nodes named 0..=40 along the path, as the command line tool does.
    let c = run(&default(), &s_graph(&[1; 40]));
    let names: Vec<String> = c.mapping.iter().map(|&x| (x - 1).to_string()).collect();
    let find = |name: &str| names.iter().position(|n| n == name).unwrap() as u64 + 1;
    let q = QueryGrammar::new(c.grammar.clone());
    let hit = rpq_pair(&q, &nfa, find("0"), find("40")).unwrap();
    let miss = rpq_pair(&q, &nfa, find("0"), find("39")).unwrap();
    v.check(hit && !miss, format!("rpq \"(aaaaa)*\" 0 40 = {hit} (0 39 = {miss}) on the compressed path, {} rules", c.grammar.rules.len()));
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new(9);
    let mut labels = LabelDictionary::new();
    labels.intern("a");
    labels.intern("b");
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut inputs: Vec<Hypergraph> = (0..50).map(|_| common::random_graph(&mut rng, 100, 300, 2)).collect();
    inputs.extend(fixture_inputs().into_iter().map(|(_, g)| g));
    let bytes = |g: &Hypergraph| {
        let c = run(&default(), g);
        let names = c.mapping.iter().map(|x| format!("n{x}")).collect();
        write_container(&Container { grammar: c.grammar, labels: labels.clone(), mapping: Some(NodeMapping::from_names(names)) }).unwrap()
    };
    let same = inputs.iter().filter(|g| bytes(g) == bytes(g)).count();
    v.check(same == inputs.len(), format!("container bytes identical across two runs: {same}/{}", inputs.len()));

    let mut good = 0;
    let mut cells = 0;
    for i in 0..50 {
        let (r, c) = if i == 0 { (128, 128) } else { (rng.gen_range(1..=128), rng.gen_range(1..=128)) };
        let density = [0.0, 0.01, 0.05, 0.2, 0.5][i % 5];
        let m: Vec<Vec<bool>> = (0..r).map(|_| (0..c).map(|_| rng.gen_bool(density)).collect()).collect();
        let t = K2Tree::from_matrix(&m);
        let ok = (0..r).all(|x| (0..c).all(|y| t.cell(x as u64, y as u64).unwrap() == m[x][y]));
        cells += r * c;
        good += ok as usize;
    }
    v.check(good == 50, format!("k2-tree cells match {good}/50 matrices ({cells} cells)"));
    v
}

fn main() {
    let start = Instant::now();
    let (one, two) = criteria_1_and_2();
    let mut verdicts = vec![one, two, criterion_3(), criterion_4(), criterion_5(), criterion_6(), criterion_7(), criterion_8(), criterion_9()];
    verdicts.sort_by_key(|v| v.id);
    let mut unexpected = Vec::new();
    for v in &verdicts {
        let known = KNOWN_FAILURES.contains(&v.id);
        let tag = match (v.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {tag}", v.id);
        for line in &v.lines {
            println!("    {line}");
        }
        if !v.pass && !known {
            unexpected.push(v.id);
        }
        if v.pass && known {
            println!("    note: listed as a known failure but passed");
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
