use crate::output::{Format, Record, Report};
use crate::{Cmd, FreqCmd, Method, StatsCmd, GN};
use anyhow::{anyhow, bail, Context};
use quadvol_core::graphs::{enumerate_shapes, enumerate_stable_graphs};
use quadvol_core::siegel_veech::{carea_boundary, carea_direct, lyapunov_sums};
use quadvol_core::statistics::{self, Expectation, ExpectationQuery};
use quadvol_core::{asymptotics, correlators, frequencies, volumes};
use quadvol_core::{CareaMethod, Error, LegMode, PiMonomial, StableGraph};
use serde_json::{json, Value};

/// Bad command-line input that clap could not catch.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Consistency(_)) => 4,
        _ => 3,
    }
}

pub fn run(cmd: &Cmd, format: Format, digits: u32) -> anyhow::Result<String> {
    match cmd {
        Cmd::Volume { gn, by_graph, by_cylinders, shapes } => volume(*gn, *by_graph, *by_cylinders, *shapes, digits),
        Cmd::Carea { gn, method } => carea(*gn, *method, digits),
        Cmd::Graphs { gn, dot, shapes } => return graphs(*gn, *dot, *shapes, format),
        Cmd::Freq { what } => freq(what, digits),
        Cmd::Corr { g, d } => corr(*g, d, digits),
        Cmd::Agk { g, all } => {
            if format == Format::Csv {
                return agk_csv(*g, *all);
            }
            agk(*g, *all, digits)
        }
        Cmd::Stats { what } => stats(what, digits),
        Cmd::Asym { from, to } => {
            if format == Format::Csv {
                return Ok(asymptotics::diagnostics_csv(*from..=*to)?);
            }
            asym(*from, *to)
        }
    }
    .map(|r| r.render(format))
}

fn notes_for(g: u32, n: u32) -> Vec<String> {
    match (g, n) {
        (0, 3) => vec!["Vol Q_{0,3} = 4 is a convention".into()],
        (1, 1) => vec!["Vol Q_{1,1} = 2*pi^2/3 is the convention used in the c_area boundary recursion".into()],
        _ => Vec::new(),
    }
}

fn volume(gn: GN, by_graph: bool, by_cylinders: bool, shapes: bool, digits: u32) -> anyhow::Result<Report> {
    let GN { g, n } = gn;
    let mut rep = Report::new("volume");
    rep.notes = notes_for(g, n);
    let mode = if shapes { LegMode::Shapes } else { LegMode::Labeled };
    let report = if by_graph { volumes::volume_breakdown(g, n, mode)? } else { volumes::masur_veech_volume(g, n)? };
    rep.push(Record::pi(format!("Vol Q_{{{g},{n}}}"), &report.total, digits, "volumes"));
    if by_cylinders {
        let fr = report.cylinder_fractions();
        for (k, v) in &report.cylinders {
            rep.push(Record::pi(format!("cylinders={k}"), v, digits, "volumes"));
        }
        for (k, p) in &fr {
            rep.push(Record::rational(format!("p_{k}"), p, digits, "statistics"));
        }
    }
    if by_graph {
        // indices refer to the listing of `quadvol graphs`
        let index: std::collections::HashMap<String, usize> =
            graph_list(g, n, shapes)?.iter().enumerate().map(|(i, gr)| (gr.canonical_encoding(), i)).collect();
        let mut rows = Vec::new();
        for c in &report.graphs {
            let i = index[&c.encoding];
            rep.push(Record::pi(format!("[{i}] {}  P={}", c.encoding, c.p_gamma_text), &c.volume, digits, "volumes"));
            rows.push(json!({
                "index": i,
                "encoding": c.encoding,
                "cylinders": c.cylinders,
                "aut": c.aut,
                "p_gamma": c.p_gamma_text,
                "volume": c.volume,
            }));
        }
        rep.extra.insert("graphs".into(), Value::Array(rows));
    }
    Ok(rep)
}

fn carea(gn: GN, method: Method, digits: u32) -> anyhow::Result<Report> {
    let GN { g, n } = gn;
    let mut rep = Report::new("carea");
    let (direct, boundary) = match method {
        Method::Direct => (Some(carea_direct(g, n)?), None),
        Method::Boundary => (None, Some(carea_boundary(g, n)?)),
        Method::Both => {
            let (d, b) = rayon::join(|| carea_direct(g, n), || carea_boundary(g, n));
            (Some(d?), Some(b?))
        }
    };
    if let (Some(d), Some(b)) = (&direct, &boundary) {
        if d != b {
            return Err(Error::Consistency(format!(
                "c_area methods disagree for ({g},{n}): direct {d}, boundary {b}"
            ))
            .into());
        }
        rep.extra.insert("agree".into(), Value::Bool(true));
    }
    if let Some(d) = &direct {
        rep.push(Record::rational("pi^2/3*c_area (direct)", d, digits, "siegel_veech::direct"));
    }
    if let Some(b) = &boundary {
        rep.push(Record::rational("pi^2/3*c_area (boundary)", b, digits, "siegel_veech::boundary"));
    }
    let m = if direct.is_some() { CareaMethod::Direct } else { CareaMethod::Boundary };
    let l = lyapunov_sums(g, n, m)?;
    rep.push(Record::rational("Lambda+", &l.plus, digits, "siegel_veech"));
    rep.push(Record::rational("Lambda-", &l.minus, digits, "siegel_veech"));
    Ok(rep)
}

fn graph_list(g: u32, n: u32, shapes: bool) -> anyhow::Result<Vec<StableGraph>> {
    Ok(if shapes { enumerate_shapes(g, n)? } else { enumerate_stable_graphs(g, n)? })
}

fn graphs(gn: GN, dot: bool, shapes: bool, format: Format) -> anyhow::Result<String> {
    let list = graph_list(gn.g, gn.n, shapes)?;
    if dot && format != Format::Json {
        return Ok(list.iter().map(|gr| gr.to_dot()).collect::<Vec<_>>().join("\n"));
    }
    match format {
        Format::Json => {
            let rows: Vec<Value> = list
                .iter()
                .enumerate()
                .map(|(i, gr)| {
                    let mut v = json!({
                        "index": i,
                        "encoding": gr.canonical_encoding(),
                        "graph": gr,
                        "edges": gr.num_edges(),
                        "aut": gr.aut_order().to_string(),
                    });
                    if dot {
                        v["dot"] = Value::String(gr.to_dot());
                    }
                    v
                })
                .collect();
            let out = json!({ "command": "graphs", "g": gn.g, "n": gn.n, "count": list.len(), "graphs": rows });
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
        Format::Csv => {
            let mut s = String::from("index,edges,aut,encoding\n");
            for (i, gr) in list.iter().enumerate() {
                s.push_str(&format!("{i},{},{},\"{}\"\n", gr.num_edges(), gr.aut_order(), gr.canonical_encoding()));
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = format!("{} stable graphs of type ({},{})\n", list.len(), gn.g, gn.n);
            for (i, gr) in list.iter().enumerate() {
                s.push_str(&format!("{i:>4}  edges={}  |Aut|={}  {}\n", gr.num_edges(), gr.aut_order(), gr.canonical_encoding()));
            }
            Ok(s)
        }
    }
}

fn pick_graph(g: u32, n: u32, idx: usize) -> anyhow::Result<StableGraph> {
    let list = enumerate_stable_graphs(g, n)?;
    let len = list.len();
    list.into_iter()
        .nth(idx)
        .ok_or_else(|| Usage(format!("graph index {idx} out of range 0..{len}; see `quadvol graphs {g} {n}`")).into())
}

fn freq(what: &FreqCmd, digits: u32) -> anyhow::Result<Report> {
    let mut rep = Report::new("freq");
    match what {
        FreqCmd::Total { gn } => {
            let b = frequencies::b_gn(gn.g, gn.n)?;
            rep.push(Record::pi(format!("b_{{{},{}}}", gn.g, gn.n), &b.value, digits, "frequencies"));
            rep.notes = b.flags;
        }
        FreqCmd::Curve { gn, graph, weights } => {
            let gr = pick_graph(gn.g, gn.n, *graph)?;
            let w = weights.clone().unwrap_or_else(|| vec![1; gr.num_edges()]);
            let f = frequencies::c_gamma(&gr, &w)?;
            rep.push(Record::rational(format!("c({})", f.encoding), &f.c, digits, "frequencies"));
            rep.push(Record::rational(format!("c~({})", f.encoding), &f.c_tilde, digits, "frequencies"));
            rep.extra.insert("weights".into(), json!(w));
            rep.notes = f.flags;
        }
        FreqCmd::SepRatio { g } => {
            let r = frequencies::sep_nonsep_ratio(*g)?;
            let closed = asymptotics::sep_ratio_closed(*g)?;
            if r != closed {
                return Err(Error::Consistency(format!("graph sum {r} differs from closed form {closed}")).into());
            }
            rep.push(Record::rational(format!("sep/nonsep (g={g})"), &r, digits, "frequencies"));
        }
        FreqCmd::Split { gn } => {
            for (k, v) in frequencies::one_curve_split(gn.g, gn.n)? {
                rep.push(Record::rational(k, &v, digits, "frequencies"));
            }
        }
    }
    Ok(rep)
}

fn corr(g: u32, d: &[u32], digits: u32) -> anyhow::Result<Report> {
    let v = correlators::psi_correlator(g, d)?;
    let ds: Vec<String> = d.iter().map(|x| format!("tau_{x}")).collect();
    let mut rep = Report::new("corr");
    rep.push(Record::rational(format!("<{}>_{g}", ds.join(" ")), &v, digits, "correlators"));
    Ok(rep)
}

fn agk(g: u32, all: bool, digits: u32) -> anyhow::Result<Report> {
    let mut rep = Report::new("agk");
    let lo = if all { 1 } else { g };
    for h in lo..=g {
        for (k, a) in asymptotics::a_gk_row(h)?.iter().enumerate() {
            rep.push(Record::rational(format!("a_{{{h},{k}}}"), a, digits, "asymptotics"));
        }
    }
    Ok(rep)
}

fn agk_csv(g: u32, all: bool) -> anyhow::Result<String> {
    if all {
        return Ok(asymptotics::a_gk_csv(g)?);
    }
    let mut s = String::from("g,k,num,den\n");
    for (k, a) in asymptotics::a_gk_row(g)?.iter().enumerate() {
        s.push_str(&format!("{g},{k},{},{}\n", a.numer(), a.denom()));
    }
    Ok(s)
}

fn parse_edge(tok: &str) -> anyhow::Result<usize> {
    let t = tok.trim();
    let t = t.strip_prefix("e_").or_else(|| t.strip_prefix('e')).unwrap_or(t);
    t.parse().map_err(|_| Usage(format!("bad edge reference {tok:?}; expected e<index>")).into())
}

/// `ratio e_i/e_j`.
fn parse_query(words: &[String]) -> anyhow::Result<(usize, usize)> {
    let text = words.join(" ");
    let rest = text
        .trim()
        .strip_prefix("ratio")
        .ok_or_else(|| Usage(format!("unknown query {text:?}; expected `ratio e_i/e_j`")))?;
    let (a, b) = rest.split_once('/').ok_or_else(|| Usage("ratio needs the form e_i/e_j".into()))?;
    Ok((parse_edge(a)?, parse_edge(b)?))
}

fn stats(what: &StatsCmd, digits: u32) -> anyhow::Result<Report> {
    let mut rep = Report::new("stats");
    match what {
        StatsCmd::Dist { gn } => {
            for (k, p) in statistics::cylinder_distribution(gn.g, gn.n)? {
                rep.push(Record::rational(format!("p_{k}"), &p, digits, "statistics"));
            }
        }
        StatsCmd::Query { gn, graph, heights, query } => {
            let (i, j) = parse_query(query)?;
            let gr = pick_graph(gn.g, gn.n, *graph)?;
            let label = format!("E(b{i}/b{j})");
            let q = ExpectationQuery::ratio(gr, i, j, heights.clone()).map_err(|e| Usage(e.to_string()))?;
            match statistics::expectation(&q).context("expectation")? {
                Expectation::Fixed(v) => rep.push(Record::rational(label, &v, digits, "statistics")),
                Expectation::Averaged(z) => rep.push(Record::zeta(label, &z, digits, "statistics")),
                Expectation::Divergent => rep.push(Record::divergent(label, "statistics")),
            }
            if let Some(h) = heights {
                rep.extra.insert("heights".into(), json!(h));
            }
        }
        StatsCmd::HeightOne { gn } => {
            let p: PiMonomial = statistics::height_one_probability(gn.g, gn.n)?;
            rep.push(Record::pi("P(height = 1 | one cylinder)", &p, digits, "statistics"));
        }
        StatsCmd::Bounded { gn, graph, bound } => {
            if *bound == 0 {
                bail!(Usage("--bound must be at least 1".into()));
            }
            let gr = pick_graph(gn.g, gn.n, *graph)?;
            let z = statistics::bounded_height_probability(&gr, *bound)?;
            rep.push(Record::zeta(format!("P(all heights <= {bound})"), &z, digits, "statistics"));
        }
    }
    Ok(rep)
}

fn asym(from: u32, to: u32) -> anyhow::Result<Report> {
    if from < 2 || to < from {
        return Err(anyhow!(Usage("need 2 <= from <= to".into())));
    }
    let mut rep = Report::new("asym");
    let rows: Vec<_> = (from..=to).map(asymptotics::diagnostics).collect::<Result<_, _>>()?;
    for d in &rows {
        let s = format!("{:.12}", d.sep_ratio_normalized);
        rep.push(Record {
            quantity: format!("g={} sep ratio / asymptote", d.g),
            exact: json!(d),
            display: s.clone(),
            decimal: s,
            source: "asymptotics",
        });
    }
    Ok(rep)
}
