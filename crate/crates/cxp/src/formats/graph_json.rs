//! Graph JSON: `{"ixps": [...], "endpoints": [...], "pathlets": [...]}`.
//!
//! Pathlets are written in id order and reservations are dropped, so a saved
//! graph is always pristine and saving is deterministic.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use cxp_core::graph::{Multigraph, NodeKind, PathletKind, PathletSpec};
use cxp_core::prefix::Ipv4Cidr;
use serde::{Deserialize, Serialize};

use crate::DataError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    ixps: Vec<String>,
    endpoints: Vec<EndpointDoc>,
    pathlets: Vec<PathletSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndpointDoc {
    id: String,
    prefixes: Vec<String>,
    access_pathlets: Vec<u64>,
}

fn to_doc(g: &Multigraph) -> GraphDoc {
    let ixps = g.ixps().map(|i| g.name(i).to_string()).collect();
    let endpoints = g
        .endpoints()
        .map(|e| {
            let n = g.node_info(e);
            let mut access = n.incident.clone();
            access.sort_unstable();
            EndpointDoc {
                id: n.name.clone(),
                prefixes: n.prefixes.iter().map(Ipv4Cidr::to_string).collect(),
                access_pathlets: access,
            }
        })
        .collect();
    let pathlets = g
        .pathlets()
        .map(|p| PathletSpec {
            id: p.id,
            kind: p.kind,
            a: g.name(p.ends[0]).into(),
            b: g.name(p.ends[1]).into(),
            asn: p.isp,
            capacity_mbps: p.capacity,
            latency_ms: p.latency,
        })
        .collect();
    GraphDoc {
        ixps,
        endpoints,
        pathlets,
    }
}

pub fn save_graph<W: Write>(graph: &Multigraph, mut sink: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut sink, &to_doc(graph))?;
    sink.write_all(b"\n")
}

pub fn graph_to_string(graph: &Multigraph) -> String {
    let mut buf = Vec::new();
    save_graph(graph, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn load_graph<R: Read>(source: R, name: &str) -> Result<Multigraph, DataError> {
    let doc: GraphDoc = serde_json::from_reader(source).map_err(|e| {
        let line = (e.line() > 0).then_some(e.line() as u64);
        DataError::new(name, line, e)
    })?;
    let err = |what: String| DataError::new(name, None, what);
    let mut g = Multigraph::new();
    for x in &doc.ixps {
        g.add_ixp(x).map_err(|e| err(format!("ixps: {e}")))?;
    }
    for ep in &doc.endpoints {
        let prefixes = ep
            .prefixes
            .iter()
            .map(|p| p.parse::<Ipv4Cidr>().map_err(|e| err(format!("endpoint {:?}: prefix {p:?}: {e}", ep.id))))
            .collect::<Result<Vec<_>, _>>()?;
        g.add_endpoint(&ep.id, prefixes)
            .map_err(|e| err(format!("endpoints: {e}")))?;
    }
    for (i, p) in doc.pathlets.iter().enumerate() {
        g.add_pathlet(p).map_err(|e| err(format!("pathlets[{i}]: {e}")))?;
    }
    for ep in &doc.endpoints {
        let listed: BTreeSet<u64> = ep.access_pathlets.iter().copied().collect();
        let idx = g.node(&ep.id).map_err(|e| err(e.to_string()))?;
        let actual: BTreeSet<u64> = g.incident(idx).iter().copied().collect();
        if listed != actual || listed.len() != ep.access_pathlets.len() {
            return Err(err(format!(
                "endpoint {:?}: access_pathlets {:?} disagree with pathlets attached to it {:?}",
                ep.id, ep.access_pathlets, actual
            )));
        }
    }
    g.validate().map_err(|e| err(e.to_string()))?;
    debug_assert!(g
        .pathlets()
        .all(|p| p.kind == PathletKind::Transit || g.kind(p.ends[0]) == NodeKind::Endpoint));
    Ok(g)
}
