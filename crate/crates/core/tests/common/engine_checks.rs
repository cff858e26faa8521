//! Engine contract checks shared by the property tests and the acceptance run.

use gridex::adversary::gen_random;
use gridex::engine::LazySource;
use gridex::strategy::by_name;
use gridex::{run, Explorer, GridSpec, Instance, Orientation, StaticSource, Vertex};

/// Deterministic small instance for `seed`: up to 3x4, either direction model.
pub fn seeded_instance(seed: u64) -> Instance {
    let rows = 1 + (seed % 3) as u32;
    let cols = 1 + (seed / 3 % 4) as u32;
    let directed = seed / 12 % 2 == 1;
    let k = [2, 5, 9][(seed / 24 % 3) as usize];
    let p = [0.0, 0.3, 0.6, 1.0][(seed / 72 % 4) as usize];
    gen_random(GridSpec::new(rows, cols, directed).unwrap(), k, p, seed).unwrap()
}

pub fn strategy_for(inst: &Instance, prefer_sweep: bool) -> &'static str {
    if prefer_sweep && inst.spec.is_ladder() {
        "sweep"
    } else {
        "greedy"
    }
}

fn budget(inst: &Instance) -> usize {
    40 * inst.spec.vertex_count()
}

/// What an agent with this visited set is entitled to see.
pub fn expected_view(inst: &Instance, visited: &[bool]) -> (Vec<Option<u64>>, Vec<Option<Orientation>>) {
    let spec = inst.spec;
    let seen = |v: Vertex| visited[spec.index(v)];
    let mut w = Vec::new();
    let mut o = Vec::new();
    for e in 0..spec.edge_count() {
        let id = spec.edge(e);
        let touched = seen(id.first()) || seen(id.second());
        match inst.orientation_of(e) {
            None => {
                w.push(touched.then(|| inst.weight(e)));
                o.push(None);
            }
            Some(or) => {
                w.push(seen(id.tail(or)).then(|| inst.weight(e)));
                o.push(touched.then_some(or));
            }
        }
    }
    (w, o)
}

/// Revealed data matches the entitlement after every move, and knowledge
/// only ever grows.
pub fn check_revelation(inst: &Instance, name: &str) -> Result<(), String> {
    let mut agent = by_name(name).unwrap();
    let mut ex = Explorer::new(StaticSource::new(inst.clone()), inst.start).map_err(|e| e.to_string())?;
    let mut prev = ex.knowledge().clone();
    loop {
        let k = ex.knowledge();
        let (w, o) = expected_view(inst, k.visited_mask());
        if k.revealed_weights() != &w[..] {
            return Err(format!("weights after {} moves: {:?} != {:?}", k.move_count(), k.revealed_weights(), w));
        }
        if inst.spec.directed && k.revealed_orientations() != &o[..] {
            return Err(format!("orientations after {} moves", k.move_count()));
        }
        if prev.visited_mask().iter().zip(k.visited_mask()).any(|(a, b)| *a && !*b) {
            return Err("visited set shrank".into());
        }
        if prev.revealed_weights().iter().enumerate().any(|(e, was)| was.is_some() && *was != k.weight(e)) {
            return Err("revealed weight changed".into());
        }
        if k.all_visited() || ex.steps().len() >= budget(inst) {
            break;
        }
        // Directed grids need not be strongly connected.
        let Ok(to) = agent.decide(k) else {
            return if inst.spec.directed { Ok(()) } else { Err("undirected run got stuck".into()) };
        };
        let from = k.position();
        let step = ex.apply_move(to).map_err(|e| e.to_string())?;
        if Some(step.weight) != inst.traversal(from, to) {
            return Err(format!("charged {} for {from:?}->{to:?}", step.weight));
        }
        let k = ex.knowledge();
        if k.cum_cost() != prev.cum_cost() + step.weight || k.move_count() != prev.move_count() + 1 || k.position() != to {
            return Err("cost, count or position did not advance by one move".into());
        }
        prev = k.clone();
    }
    if ex.knowledge().all_visited() {
        Ok(())
    } else {
        Err("budget exhausted".into())
    }
}

/// A source that commits edges only when first revealed yields the same
/// run and the same final instance as the static source.
pub fn check_lazy_equivalence(inst: &Instance, name: &str) -> Result<(), String> {
    let b = budget(inst) as u64;
    let mut a = by_name(name).unwrap();
    let eager = run(StaticSource::new(inst.clone()), inst.start, &mut a, b);
    let truth = inst.clone();
    let mut lazy = LazySource::new(inst.spec, inst.start, inst.k, move |e: usize| {
        (truth.weights[e], truth.orientation_of(e))
    });
    let mut c = by_name(name).unwrap();
    let out = run(&mut lazy, inst.start, &mut c, b);
    match (eager, out) {
        (Ok(e), Ok(l)) if l.trace == e.trace && l.instance == *inst => Ok(()),
        (Ok(_), Ok(_)) => Err("lazy run diverged".into()),
        (Err(e), Err(l)) if inst.spec.directed && format!("{e:?}") == format!("{l:?}") => Ok(()),
        (e, l) => Err(format!("static ok={} lazy ok={}", e.is_ok(), l.is_ok())),
    }
}

/// Moves chosen by `name` on `inst`, at most `limit` of them.
pub fn moves(inst: &Instance, name: &str, limit: usize) -> Vec<Vertex> {
    let mut agent = by_name(name).unwrap();
    let mut ex = Explorer::new(StaticSource::new(inst.clone()), inst.start).unwrap();
    let mut out = Vec::new();
    while out.len() < limit && !ex.knowledge().all_visited() {
        let Ok(to) = agent.decide(ex.knowledge()) else { break };
        if ex.apply_move(to).is_err() {
            break;
        }
        out.push(to);
    }
    out
}

/// `inst` with every weight the agent cannot see changed and every
/// orientation it cannot see flipped.
pub fn perturb_hidden(inst: &Instance, weights: &[Option<u64>], orients: &[Option<Orientation>]) -> Instance {
    let mut g = inst.clone();
    for (w, seen) in g.weights.iter_mut().zip(weights) {
        if seen.is_none() {
            *w = if *w == 1 { 7 } else { 1 };
        }
    }
    if let Some(o) = g.orientation.as_mut() {
        for (or, seen) in o.iter_mut().zip(orients) {
            if seen.is_none() {
                *or = match *or {
                    Orientation::Forward => Orientation::Backward,
                    Orientation::Backward => Orientation::Forward,
                };
            }
        }
    }
    g
}

/// Each decision is unchanged when everything still hidden is rewritten.
pub fn check_hidden(inst: &Instance, name: &str) -> Result<(), String> {
    let full = moves(inst, name, budget(inst));
    let mut ex = Explorer::new(StaticSource::new(inst.clone()), inst.start).map_err(|e| e.to_string())?;
    for t in 0..full.len() {
        let k = ex.knowledge();
        let other = perturb_hidden(inst, k.revealed_weights(), k.revealed_orientations());
        if moves(&other, name, t + 1)[..] != full[..t + 1] {
            return Err(format!("decision {t} depends on hidden data"));
        }
        ex.apply_move(full[t]).map_err(|e| e.to_string())?;
    }
    Ok(())
}
