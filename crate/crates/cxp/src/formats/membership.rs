//! `ixp_id,asn` membership snapshots.

use std::io::Read;

use cxp_core::ingest::MembershipTable;

use super::csvutil::{positive_asn, rows};
use crate::DataError;

pub fn parse_membership<R: Read>(input: R, source: &str) -> Result<MembershipTable, DataError> {
    let mut table = MembershipTable::new();
    for (line, rec) in rows(input, source, &["ixp_id", "asn"])? {
        if rec[0].is_empty() {
            return Err(DataError::new(source, Some(line), "empty IXP id"));
        }
        let asn = positive_asn(&rec[1], source, line)?;
        table
            .insert(&rec[0], asn)
            .map_err(|e| DataError::new(source, Some(line), e))?;
    }
    Ok(table)
}
