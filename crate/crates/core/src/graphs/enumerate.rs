use super::{vertex_is_stable, StableGraph, Vertex};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

fn check_stable(g: u32, n: u32) -> Result<()> {
    if 2 * g + n < 3 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

/// All stable graphs of type `(g, n)` with legs labelled `1..=n`, including
/// the graph without edges, sorted by edge count then canonical code.
pub fn enumerate_stable_graphs(g: u32, n: u32) -> Result<Vec<StableGraph>> {
    check_stable(g, n)?;
    Ok(enumerate(g, (1..=n).collect()))
}

/// Stable graphs of type `(g, n)` with anonymous legs. Each shape stands for
/// the labelled graphs obtained by distributing the labels over its legs.
pub fn enumerate_shapes(g: u32, n: u32) -> Result<Vec<StableGraph>> {
    check_stable(g, n)?;
    Ok(enumerate(g, vec![0; n as usize]))
}

/// Labelled graphs grouped by number of edges.
pub fn graphs_by_cylinders(g: u32, n: u32) -> Result<BTreeMap<usize, Vec<StableGraph>>> {
    let mut out: BTreeMap<usize, Vec<StableGraph>> = BTreeMap::new();
    for gr in enumerate_stable_graphs(g, n)? {
        out.entry(gr.num_edges()).or_default().push(gr);
    }
    Ok(out)
}

fn enumerate(g: u32, legs: Vec<u32>) -> Vec<StableGraph> {
    let root = StableGraph::new_unchecked(vec![Vertex { genus: g, legs }], Vec::new());
    let mut all = vec![root.clone()];
    let mut level = vec![root];
    while !level.is_empty() {
        let children: Vec<StableGraph> = level.par_iter().flat_map_iter(splits).collect();
        let mut uniq: HashMap<Vec<u32>, StableGraph> = HashMap::new();
        for c in children {
            uniq.entry(c.code().to_vec()).or_insert(c);
        }
        let mut next: Vec<StableGraph> = uniq.into_values().collect();
        next.sort();
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

fn counts_of<T: Ord + Copy>(xs: &[T]) -> Vec<(T, usize)> {
    let mut m: BTreeMap<T, usize> = BTreeMap::new();
    for &x in xs {
        *m.entry(x).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Every graph with one more edge that contracts back to `gr`.
fn splits(gr: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for v in 0..gr.num_vertices() {
        let vx = &gr.vertices()[v];
        if vx.genus >= 1 {
            let mut vs = gr.vertices().to_vec();
            vs[v].genus -= 1;
            let mut es = gr.edges().to_vec();
            es.push((v, v));
            out.push(StableGraph::new_unchecked(vs, es));
        }

        let loops = gr.loops_at(v);
        let others: Vec<usize> = gr
            .edges()
            .iter()
            .filter(|&&(a, b)| (a == v) != (b == v))
            .map(|&(a, b)| if a == v { b } else { a })
            .collect();
        let nb = counts_of(&others);
        let lb = counts_of(&vx.legs);
        let base_edges: Vec<(usize, usize)> =
            gr.edges().iter().copied().filter(|&(a, b)| a != v && b != v).collect();
        let w = gr.num_vertices();

        // choice vectors: how many of each neighbour group / leg label move to w
        let mut choice_n = vec![0usize; nb.len()];
        loop {
            let mut choice_l = vec![0usize; lb.len()];
            loop {
                for keep in 0..=loops {
                    for moved in 0..=(loops - keep) {
                        let across = loops - keep - moved;
                        for ga in 0..=vx.genus {
                            let gb = vx.genus - ga;
                            let mut legs_a = Vec::new();
                            let mut legs_b = Vec::new();
                            for (i, &(l, m)) in lb.iter().enumerate() {
                                legs_b.extend(std::iter::repeat(l).take(choice_l[i]));
                                legs_a.extend(std::iter::repeat(l).take(m - choice_l[i]));
                            }
                            let mut es = base_edges.clone();
                            let mut val_a = legs_a.len() + 2 * keep + across + 1;
                            let mut val_b = legs_b.len() + 2 * moved + across + 1;
                            for (i, &(u, m)) in nb.iter().enumerate() {
                                for _ in 0..choice_n[i] {
                                    es.push((u.min(w), u.max(w)));
                                }
                                for _ in 0..(m - choice_n[i]) {
                                    es.push((u.min(v), u.max(v)));
                                }
                                val_b += choice_n[i];
                                val_a += m - choice_n[i];
                            }
                            if !vertex_is_stable(ga, val_a) || !vertex_is_stable(gb, val_b) {
                                continue;
                            }
                            es.extend(std::iter::repeat((v, v)).take(keep));
                            es.extend(std::iter::repeat((w, w)).take(moved));
                            es.extend(std::iter::repeat((v, w)).take(across + 1));
                            let mut vs = gr.vertices().to_vec();
                            vs[v] = Vertex { genus: ga, legs: legs_a };
                            vs.push(Vertex { genus: gb, legs: legs_b });
                            out.push(StableGraph::new_unchecked(vs, es));
                        }
                    }
                }
                if !advance(&mut choice_l, &lb) {
                    break;
                }
            }
            if !advance(&mut choice_n, &nb) {
                break;
            }
        }
    }
    out
}

fn advance<T>(choice: &mut [usize], bounds: &[(T, usize)]) -> bool {
    for i in 0..choice.len() {
        if choice[i] < bounds[i].1 {
            choice[i] += 1;
            return true;
        }
        choice[i] = 0;
    }
    false
}
