//! Multiplicity tables, CCDF files and the snapshot sanity report.

use std::io::{self, Write};

use cxp_core::analytics::{Ccdf, MultiplicityStats};
use serde::Serialize;

/// Inter-IXP interconnections in the reference 229-IXP snapshot.
pub const REFERENCE_EDGE_COUNT: u64 = 49_000;
/// Relative deviation from the reference beyond which a snapshot is flagged.
pub const DRIFT_TOLERANCE: f64 = 0.10;
/// Expected ratio of median pair multiplicity to the collapsed baseline of 1.
pub const DIVERSITY_FACTOR: u64 = 10;

pub fn write_pairs_csv<W: Write>(stats: &MultiplicityStats, sink: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["ixp_a", "ixp_b", "multiplicity"])?;
    for p in &stats.pairs {
        w.write_record([p.ixp_a.as_str(), p.ixp_b.as_str(), &p.multiplicity.to_string()])?;
    }
    w.flush()
}

pub fn write_ccdf_csv<W: Write>(ccdf: &Ccdf<u64>, sink: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["value", "fraction"])?;
    for p in &ccdf.points {
        w.write_record([p.value.to_string(), p.fraction.to_string()])?;
    }
    w.flush()
}

/// Edge count and diversity compared with the published full-scale figures.
/// Deviations are reported as drift, never as failures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotReport {
    pub ixps: u64,
    pub transit_pathlets: u64,
    pub connected_pairs: u64,
    pub reference_edge_count: u64,
    /// `(transit_pathlets - reference) / reference`.
    pub edge_count_deviation: f64,
    pub snapshot_drift: bool,
    pub median_multiplicity: u64,
    pub direct_baseline: u64,
    pub diversity_order_of_magnitude: bool,
}

impl SnapshotReport {
    pub fn new(ixps: usize, stats: &MultiplicityStats) -> Self {
        let n = stats.transit_pathlets;
        let dev = (n as f64 - REFERENCE_EDGE_COUNT as f64) / REFERENCE_EDGE_COUNT as f64;
        let median = stats.median_multiplicity();
        SnapshotReport {
            ixps: ixps as u64,
            transit_pathlets: n,
            connected_pairs: stats.pairs.len() as u64,
            reference_edge_count: REFERENCE_EDGE_COUNT,
            edge_count_deviation: dev,
            snapshot_drift: dev.abs() > DRIFT_TOLERANCE,
            median_multiplicity: median,
            direct_baseline: 1,
            diversity_order_of_magnitude: median >= DIVERSITY_FACTOR,
        }
    }

    pub fn lines(&self) -> Vec<String> {
        let drift = if self.snapshot_drift {
            "snapshot drift (outside +/-10%)"
        } else {
            "within +/-10%"
        };
        let div = if self.diversity_order_of_magnitude { "yes" } else { "no" };
        vec![
            format!(
                "transit pathlets: {} across {} IXP pairs, {} IXPs",
                self.transit_pathlets, self.connected_pairs, self.ixps
            ),
            format!(
                "reference edge count {}: deviation {:+.1}%, {drift}",
                self.reference_edge_count,
                100.0 * self.edge_count_deviation
            ),
            format!(
                "median pair multiplicity {} vs direct baseline {}: >= {}x {div}",
                self.median_multiplicity, self.direct_baseline, DIVERSITY_FACTOR
            ),
        ]
    }
}
