use std::io::Read;

use crate::DataError;

/// Reads a headed CSV, checking the header, and yields `(line, fields)` for
/// every data row with the expected column count.
pub(crate) fn rows<R: Read>(
    input: R,
    source: &str,
    header: &[&str],
) -> Result<Vec<(u64, csv::StringRecord)>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = Vec::new();
    let mut seen_header = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line());
            DataError::new(source, line, e)
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if !seen_header {
            if rec.iter().ne(header.iter().copied()) {
                return Err(DataError::new(
                    source,
                    Some(line),
                    format!("expected header {:?}", header.join(",")),
                ));
            }
            seen_header = true;
            continue;
        }
        if rec.len() != header.len() {
            return Err(DataError::new(
                source,
                Some(line),
                format!("expected {} columns, found {}", header.len(), rec.len()),
            ));
        }
        out.push((line, rec));
    }
    if !seen_header {
        return Err(DataError::new(source, Some(1), format!("missing header {:?}", header.join(","))));
    }
    Ok(out)
}

pub(crate) fn positive_asn(field: &str, source: &str, line: u64) -> Result<u32, DataError> {
    match field.parse::<u32>() {
        Ok(a) if a > 0 => Ok(a),
        _ => Err(DataError::new(source, Some(line), format!("ASN must be a positive integer, got {field:?}"))),
    }
}
