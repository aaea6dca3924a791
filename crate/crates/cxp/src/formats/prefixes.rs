//! `asn,prefix` origin tables.

use std::io::Read;

use cxp_core::analytics::AsPrefixes;
use cxp_core::prefix::Ipv4Cidr;

use super::csvutil::{positive_asn, rows};
use crate::DataError;

pub fn parse_as_prefixes<R: Read>(input: R, source: &str) -> Result<AsPrefixes, DataError> {
    let mut out = AsPrefixes::new();
    for (line, rec) in rows(input, source, &["asn", "prefix"])? {
        let asn = positive_asn(&rec[0], source, line)?;
        let cidr: Ipv4Cidr = rec[1]
            .parse()
            .map_err(|e| DataError::new(source, Some(line), format!("{:?}: {e}", &rec[1])))?;
        out.entry(asn).or_default().push(cidr);
    }
    Ok(out)
}
