//! Canonical labelling by colour refinement and individualization.
//!
//! Colours are cell start positions in an ordered partition, so a discrete
//! partition is directly a vertex ordering. The search returns the smallest
//! code among all leaves together with the order of the vertex automorphism
//! group, obtained by orbit counting at each branching level.

use super::{StableGraph, Vertex};

struct Ctx<'a> {
    vertices: &'a [Vertex],
    loops: Vec<u32>,
    mult: Vec<Vec<u32>>,
}

struct Leaf {
    code: Vec<u32>,
    order: Vec<usize>,
}

pub(super) fn canonicalize(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> StableGraph {
    let nv = vertices.len();
    let mut mult = vec![vec![0u32; nv]; nv];
    let mut loops = vec![0u32; nv];
    for &(u, v) in &edges {
        if u == v {
            loops[u] += 1;
        } else {
            mult[u][v] += 1;
            mult[v][u] += 1;
        }
    }
    let ctx = Ctx { vertices: &vertices, loops, mult };

    let keys: Vec<(&Vertex, u32)> = (0..nv).map(|v| (&vertices[v], ctx.loops[v])).collect();
    let colors: Vec<usize> = (0..nv).map(|v| keys.iter().filter(|k| **k < keys[v]).count()).collect();

    let (leaf, aut) = search(&ctx, colors);
    // order[p] = old vertex placed at position p
    let mut pos = vec![0usize; nv];
    for (p, &v) in leaf.order.iter().enumerate() {
        pos[v] = p;
    }
    let new_vertices: Vec<Vertex> = leaf.order.iter().map(|&v| vertices[v].clone()).collect();
    let mut new_edges: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (pos[u], pos[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    new_edges.sort_unstable();
    StableGraph { vertices: new_vertices, edges: new_edges, code: leaf.code, vertex_aut: aut }
}

fn refine(ctx: &Ctx, colors: &mut Vec<usize>) {
    let nv = colors.len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..nv)
            .map(|v| {
                let mut s: Vec<(usize, u32)> = (0..nv)
                    .filter(|&u| u != v && ctx.mult[v][u] > 0)
                    .map(|u| (colors[u], ctx.mult[v][u]))
                    .collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let next: Vec<usize> = (0..nv).map(|v| sigs.iter().filter(|s| **s < sigs[v]).count()).collect();
        let before = distinct(colors);
        *colors = next;
        if distinct(colors) == before {
            return;
        }
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn leaf_code(ctx: &Ctx, colors: &[usize]) -> Leaf {
    let nv = colors.len();
    let mut order = vec![0usize; nv];
    for (v, &c) in colors.iter().enumerate() {
        order[c] = v;
    }
    let mut code = vec![nv as u32];
    for &v in &order {
        let vx = &ctx.vertices[v];
        code.push(vx.genus);
        code.push(ctx.loops[v]);
        code.push(vx.legs.len() as u32);
        code.extend(vx.legs.iter().copied());
    }
    for p in 0..nv {
        for q in p + 1..nv {
            code.push(ctx.mult[order[p]][order[q]]);
        }
    }
    Leaf { code, order }
}

fn twins(ctx: &Ctx, u: usize, v: usize) -> bool {
    (0..ctx.mult.len()).all(|x| x == u || x == v || ctx.mult[u][x] == ctx.mult[v][x])
}

fn search(ctx: &Ctx, mut colors: Vec<usize>) -> (Leaf, u64) {
    refine(ctx, &mut colors);
    let nv = colors.len();
    let mut size = vec![0usize; nv];
    for &c in &colors {
        size[c] += 1;
    }
    let Some(cell) = (0..nv).find(|&c| size[c] > 1) else {
        return (leaf_code(ctx, &colors), 1);
    };
    let members: Vec<usize> = (0..nv).filter(|&v| colors[v] == cell).collect();

    // twin classes inside the target cell; each class is one branch
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &members {
        match classes.iter_mut().find(|cl| twins(ctx, cl[0], v)) {
            Some(cl) => cl.push(v),
            None => classes.push(vec![v]),
        }
    }

    let mut best: Option<(Leaf, u64)> = None;
    let mut orbit = 0u64;
    for cl in &classes {
        let w = cl[0];
        let mut c = colors.clone();
        for &v in &members {
            if v != w {
                c[v] = cell + 1;
            }
        }
        let (leaf, aut) = search(ctx, c);
        match &best {
            Some((b, _)) if leaf.code > b.code => {}
            Some((b, _)) if leaf.code == b.code => orbit += cl.len() as u64,
            _ => {
                orbit = cl.len() as u64;
                best = Some((leaf, aut));
            }
        }
    }
    let (leaf, aut) = best.unwrap();
    (leaf, aut * orbit)
}

#[cfg(test)]
mod tests {
    use super::super::{StableGraph, Vertex};

    fn v0() -> Vertex {
        Vertex { genus: 0, legs: vec![] }
    }

    #[test]
    fn vertex_automorphisms() {
        // complete graph K4 with every vertex genus 0: |Aut_V| = 24
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b));
            }
        }
        let k4 = StableGraph::new(vec![v0(), v0(), v0(), v0()], edges).unwrap();
        assert_eq!(k4.vertex_aut(), 24);

        // a 4-cycle of genus 0 vertices each carrying a loop: dihedral group of order 8
        let cyc = StableGraph::new(
            vec![v0(), v0(), v0(), v0()],
            vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 0), (1, 1), (2, 2), (3, 3)],
        )
        .unwrap();
        assert_eq!(cyc.vertex_aut(), 8);

        // path of three vertices: swap the ends
        let path = StableGraph::new(
            vec![Vertex { genus: 1, legs: vec![] }, v0(), Vertex { genus: 1, legs: vec![] }],
            vec![(0, 1), (1, 2), (1, 1)],
        )
        .unwrap();
        assert_eq!(path.vertex_aut(), 2);
    }
}
