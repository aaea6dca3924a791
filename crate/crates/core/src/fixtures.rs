//! Small hand-checkable substrate used across tests, docs and examples.
//!
//! ```text
//!            p1 (AS100, 100 Mbps, 10 ms)
//!        +---------------------------+
//!  E1 -- X1  p2 (AS200, 50, 5)       X2 -- p3 (AS100, 100, 10) -- X3 -- E2
//!   a1   |                                                         |  a2
//!        +---------- p4 (AS300, 50 Mbps, 30 ms) -------------------+
//! ```
//!
//! Access pathlets `a1` (E1–X1, AS10) and `a2` (E2–X3, AS20) carry 1000 Mbps
//! at 1 ms.

use alloc::vec;

use crate::graph::{Multigraph, PathletId, PathletKind, PathletSpec};
use crate::prefix::Ipv4Cidr;

pub const P1: PathletId = 1;
pub const P2: PathletId = 2;
pub const P3: PathletId = 3;
pub const P4: PathletId = 4;
pub const A1: PathletId = 10;
pub const A2: PathletId = 20;
pub const ALL: [PathletId; 6] = [P1, P2, P3, P4, A1, A2];

fn spec(id: PathletId, kind: PathletKind, a: &str, b: &str, asn: u32, cap: u32, lat: u32) -> PathletSpec {
    PathletSpec {
        id,
        kind,
        a: a.into(),
        b: b.into(),
        asn,
        capacity_mbps: cap,
        latency_ms: lat,
    }
}

pub fn g1() -> Multigraph {
    use PathletKind::*;
    let mut g = Multigraph::new();
    for x in ["X1", "X2", "X3"] {
        g.add_ixp(x).expect("fresh ixp");
    }
    let cidr = |s: &str| s.parse::<Ipv4Cidr>().expect("literal cidr");
    g.add_endpoint("E1", vec![cidr("10.1.0.0/16")]).expect("fresh endpoint");
    g.add_endpoint("E2", vec![cidr("10.2.0.0/16")]).expect("fresh endpoint");
    for s in [
        spec(P1, Transit, "X1", "X2", 100, 100, 10),
        spec(P2, Transit, "X1", "X2", 200, 50, 5),
        spec(P3, Transit, "X2", "X3", 100, 100, 10),
        spec(P4, Transit, "X1", "X3", 300, 50, 30),
        spec(A1, Access, "E1", "X1", 10, 1000, 1),
        spec(A2, Access, "E2", "X3", 20, 1000, 1),
    ] {
        g.add_pathlet(&s).expect("fixture pathlet");
    }
    g
}
