//! Pipe-separated AS relationship files (`provider|customer|-1`).

use std::io::{BufRead, BufReader, Read};

use cxp_core::analytics::AsRelationships;

use super::csvutil::positive_asn;
use crate::DataError;

/// Keeps provider-to-customer links (`-1`); comments and other relation codes
/// are skipped. Extra trailing fields are allowed.
pub fn parse_relationships<R: Read>(input: R, source: &str) -> Result<AsRelationships, DataError> {
    let mut rel = AsRelationships::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let n = i as u64 + 1;
        let line = line.map_err(|e| DataError::new(source, Some(n), e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        if f.len() < 3 {
            return Err(DataError::new(source, Some(n), "expected provider|customer|relation"));
        }
        let code: i32 = f[2]
            .parse()
            .map_err(|_| DataError::new(source, Some(n), format!("bad relation code {:?}", f[2])))?;
        let a = positive_asn(f[0], source, n)?;
        let b = positive_asn(f[1], source, n)?;
        if code == -1 {
            rel.insert(a, b).map_err(|e| DataError::new(source, Some(n), e))?;
        }
    }
    Ok(rel)
}
