use std::collections::HashMap;

use gridex::adversary::{gen_random, minimax_value, InstanceFamily};
use gridex::engine::parse_trace_csv;
use gridex::opt::{ladder_profile_opt, optimal_cost};
use gridex::{run_on, GridSpec, Greedy, Instance, Ratio, Trace, Vertex};

const INF: u64 = u64::MAX / 4;

/// All-pairs shortest traversal costs.
fn floyd(inst: &Instance) -> Vec<Vec<u64>> {
    let spec = inst.spec;
    let n = spec.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for u in spec.vertices() {
        let i = spec.index(u);
        d[i][i] = 0;
        for v in spec.neighbors(u) {
            if let Some(w) = inst.traversal(u, v) {
                d[i][spec.index(v)] = w;
            }
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][m] + d[m][j]);
            }
        }
    }
    d
}

/// Held-Karp over first-visit orders.
fn held_karp(inst: &Instance) -> Option<u64> {
    let n = inst.spec.vertex_count();
    let d = floyd(inst);
    let s = inst.spec.index(inst.start);
    let full = (1usize << n) - 1;
    let mut dp = vec![vec![INF; n]; 1 << n];
    dp[1 << s][s] = 0;
    for mask in 0..=full {
        for last in 0..n {
            let c = dp[mask][last];
            if c >= INF || mask & (1 << last) == 0 {
                continue;
            }
            for nxt in 0..n {
                if mask & (1 << nxt) == 0 && d[last][nxt] < INF {
                    let m2 = mask | (1 << nxt);
                    dp[m2][nxt] = dp[m2][nxt].min(c + d[last][nxt]);
                }
            }
        }
    }
    let best = dp[full].iter().copied().min().unwrap();
    (best < INF).then_some(best)
}

fn all_assignments(spec: GridSpec, start: Vertex, k: u64) -> Vec<Instance> {
    let e = spec.edge_count();
    (0u32..1 << e)
        .map(|bits| {
            let mut g = Instance::all_ones(spec).with_k(k);
            g.start = start;
            for i in 0..e {
                if bits >> i & 1 == 1 {
                    g.weights[i] = k;
                }
            }
            g
        })
        .collect()
}

/// Explorer moves one edge at a time; the adversary keeps every member
/// consistent with what has been seen and answers each new vertex with
/// the worst class. Moves are capped at `cap`.
struct PrimitiveGame {
    spec: GridSpec,
    members: Vec<Instance>,
    opt: Vec<u64>,
    memo: HashMap<(usize, u32, u128, u64, usize), Ratio>,
}

impl PrimitiveGame {
    fn new(spec: GridSpec, start: Vertex, k: u64) -> Self {
        let members = all_assignments(spec, start, k);
        let opt = members.iter().map(|m| held_karp(m).unwrap()).collect();
        PrimitiveGame { spec, members, opt, memo: HashMap::new() }
    }

    fn classes(&self, set: u128, v: Vertex) -> Vec<u128> {
        let mut by: HashMap<Vec<u64>, u128> = HashMap::new();
        for i in 0..self.members.len() {
            if set >> i & 1 == 1 {
                let sig = self.spec.incident(v).map(|(e, _)| self.members[i].weight(e)).collect();
                *by.entry(sig).or_default() |= 1 << i;
            }
        }
        by.into_values().collect()
    }

    fn value(&mut self, pos: usize, visited: u32, set: u128, spent: u64, left: usize) -> Option<Ratio> {
        let n = self.spec.vertex_count();
        if visited == (1 << n) - 1 {
            let best = (0..self.members.len()).filter(|i| set >> i & 1 == 1).map(|i| self.opt[i]).min()?;
            return Some(Ratio::new(spent, best));
        }
        if left == 0 {
            return None;
        }
        let key = (pos, visited, set, spent, left);
        if let Some(r) = self.memo.get(&key) {
            return Some(*r);
        }
        let any = set.trailing_zeros() as usize;
        let u = self.spec.vertex(pos);
        let mut best: Option<Ratio> = None;
        for q in self.spec.neighbors(u).collect::<Vec<_>>() {
            let w = self.members[any].traversal(u, q).unwrap();
            let qi = self.spec.index(q);
            let r = if visited >> qi & 1 == 1 {
                self.value(qi, visited, set, spent + w, left - 1)
            } else {
                let mut worst = Some(Ratio::from_integer(0));
                for c in self.classes(set, q) {
                    let v = self.value(qi, visited | 1 << qi, c, spent + w, left - 1);
                    worst = match (worst, v) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                }
                worst
            };
            if let Some(r) = r {
                best = Some(best.map_or(r, |b| b.min(r)));
            }
        }
        if let Some(b) = best {
            self.memo.insert(key, b);
        }
        best
    }

    fn root(&mut self, start: Vertex, cap: usize) -> Ratio {
        let s = self.spec.index(start);
        let all = u128::MAX >> (128 - self.members.len());
        let mut worst = Ratio::from_integer(0);
        for c in self.classes(all, start) {
            worst = worst.max(self.value(s, 1 << s, c, 0, cap).expect("cap too small"));
        }
        worst
    }
}

#[test]
fn primitive_minimax_on_two_by_two_is_five_quarters() {
    let mut g = PrimitiveGame::new(GridSpec::ladder(2), Vertex::new(1, 1), 5);
    let v = g.root(Vertex::new(1, 1), 8);
    assert_eq!(v, Ratio::new(5, 4));
    let fam = InstanceFamily::all(GridSpec::ladder(2), Vertex::new(1, 1), 5).unwrap();
    assert_eq!(minimax_value(&fam, 8).unwrap().value, v);
}

#[test]
fn primitive_minimax_matches_solver_on_two_by_three() {
    let mut g = PrimitiveGame::new(GridSpec::ladder(3), Vertex::new(1, 1), 5);
    let v = g.root(Vertex::new(1, 1), 10);
    let fam = InstanceFamily::all(GridSpec::ladder(3), Vertex::new(1, 1), 5).unwrap();
    assert_eq!(minimax_value(&fam, 8).unwrap().value, v);
}

#[test]
fn primitive_minimax_other_starts() {
    for (spec, start) in [(GridSpec::ladder(2), Vertex::new(2, 2)), (GridSpec::undirected(1, 3), Vertex::new(1, 2))] {
        let mut g = PrimitiveGame::new(spec, start, 3);
        let v = g.root(start, 8);
        let fam = InstanceFamily::all(spec, start, 3).unwrap();
        assert_eq!(minimax_value(&fam, 8).unwrap().value, v, "{spec:?} from {start:?}");
    }
}

#[test]
fn exact_optima_agree_with_held_karp() {
    for seed in 0..300u64 {
        let rows = 1 + (seed % 3) as u32;
        let cols = 1 + (seed / 3 % 4) as u32;
        let directed = seed % 2 == 1;
        let spec = GridSpec::new(rows, cols, directed).unwrap();
        let inst = gen_random(spec, 2 + seed % 7, 0.4, seed).unwrap();
        // Directed instances may have no covering walk at all.
        let hk = held_karp(&inst);
        assert_eq!(optimal_cost(&inst).ok().map(|r| r.cost), hk, "seed {seed}");
        if spec.is_ladder() && !directed {
            assert_eq!(ladder_profile_opt(&inst).ok(), hk, "seed {seed}");
        }
    }
}

#[test]
fn witness_replays_to_optimal_cost() {
    for seed in 0..100u64 {
        let spec = GridSpec::new(2 + (seed % 2) as u32, 3, seed % 3 == 0).unwrap();
        let inst = gen_random(spec, 5, 0.5, seed).unwrap();
        let Ok(res) = optimal_cost(&inst) else {
            assert!(spec.directed && held_karp(&inst).is_none());
            continue;
        };
        assert_eq!(inst.walk_cost(&res.witness), Some(res.cost));
        let mut seen = vec![false; spec.vertex_count()];
        res.witness.iter().for_each(|v| seen[spec.index(*v)] = true);
        assert!(seen.iter().all(|s| *s));
        let trace = Trace::from_walk("opt", &inst, &res.witness).unwrap();
        let steps = parse_trace_csv(trace.to_csv_string().as_bytes()).unwrap();
        assert_eq!(steps.iter().map(|s| s.weight).sum::<u64>(), res.cost);
    }
}

#[test]
fn optimum_is_monotone_in_weights() {
    for seed in 0..200u64 {
        let spec = GridSpec::new(2, 2 + (seed % 3) as u32, seed % 2 == 0).unwrap();
        let inst = gen_random(spec, 4, 0.3, seed).unwrap();
        let Ok(base) = optimal_cost(&inst).map(|r| r.cost) else { continue };
        let e = (seed as usize * 7) % spec.edge_count();
        let mut heavier = inst.clone();
        heavier.weights[e] += 3;
        assert!(optimal_cost(&heavier).unwrap().cost >= base);
        let n = spec.vertex_count() as u64;
        assert!(base >= n - 1);
    }
}

/// Between consecutive first visits greedy pays exactly the known
/// distance from where it stood to the nearest unvisited vertex.
#[test]
fn greedy_steps_are_shortest_known_paths() {
    for seed in 0..400u64 {
        let spec = GridSpec::new(1 + (seed % 4) as u32, 1 + (seed / 4 % 5) as u32, seed % 3 == 0).unwrap();
        let inst = gen_random(spec, 2 + seed % 9, 0.5, seed).unwrap();
        let Ok(out) = run_on(&inst, &mut Greedy) else {
            assert!(spec.directed, "seed {seed}");
            continue;
        };
        let walk = out.trace.walk();
        let mut visited = vec![false; spec.vertex_count()];
        visited[spec.index(walk[0])] = true;
        let mut seg_start = 0;
        let mut seg_cost = 0;
        for (i, s) in out.trace.steps.iter().enumerate() {
            seg_cost += s.weight;
            let t = spec.index(s.to);
            if !visited[t] {
                let d = known_nearest_unvisited(&inst, &visited, walk[seg_start]);
                assert_eq!(seg_cost, d, "seed {seed} segment ending at step {i}");
                visited[t] = true;
                seg_start = i + 1;
                seg_cost = 0;
            }
        }
    }
}

/// Dijkstra through visited vertices over arcs whose tail is visited.
fn known_nearest_unvisited(inst: &Instance, visited: &[bool], from: Vertex) -> u64 {
    let spec = inst.spec;
    let n = spec.vertex_count();
    let mut dist = vec![INF; n];
    let mut done = vec![false; n];
    dist[spec.index(from)] = 0;
    loop {
        let Some(u) = (0..n).filter(|&i| !done[i] && dist[i] < INF).min_by_key(|&i| dist[i]) else {
            return INF;
        };
        if !visited[u] {
            return dist[u];
        }
        done[u] = true;
        let uv = spec.vertex(u);
        for q in spec.neighbors(uv) {
            if let Some(w) = inst.traversal(uv, q) {
                let qi = spec.index(q);
                dist[qi] = dist[qi].min(dist[u] + w);
            }
        }
    }
}
