//! CSV files for profiles (`voter,<alt…>`), partitions (`voter,district`)
//! and weights (`district,weight`). Errors name the file and line.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{DistrictPartition, ValuationProfile, WeightVector};

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::data(format!("{}: cannot open: {e}", path.display())))
}

fn data_err(source: &str, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::data(format!("{source}, line {line}: {msg}"))
}

/// Header plus data records; line numbers are 1-based and count the header.
fn records<R: Read>(reader: R, source: &str, first: &str) -> Result<(Vec<String>, Vec<(usize, Vec<String>)>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> =
        rdr.headers().map_err(|e| data_err(source, 1, e))?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some(first) {
        return Err(data_err(source, 1, format!("header must start with `{first}`")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| data_err(source, i + 2, e))?;
        rows.push((i + 2, rec.iter().map(str::to_string).collect()));
    }
    Ok((header, rows))
}

fn parse<T: std::str::FromStr>(source: &str, line: usize, cell: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    cell.parse().map_err(|e| data_err(source, line, format!("cannot parse {cell:?}: {e}")))
}

/// Rows are taken in file order; the `voter` column is informational.
/// Returns the alternative names from the header alongside the profile.
pub fn read_profile<R: Read>(reader: R, source: &str) -> Result<(Vec<String>, ValuationProfile)> {
    let (header, rows) = records(reader, source, "voter")?;
    let names = header[1..].to_vec();
    let mut values = Vec::with_capacity(rows.len());
    for (line, rec) in &rows {
        let row = rec[1..].iter().map(|c| parse::<f64>(source, *line, c)).collect::<Result<Vec<_>>>()?;
        if row.len() != names.len() {
            return Err(data_err(source, *line, format!("expected {} values, got {}", names.len(), row.len())));
        }
        let row = ValuationProfile::new(vec![row]).map_err(|e| match e {
            Error::Data(msg) => data_err(source, *line, msg),
            other => other,
        })?;
        values.push(row.row(0).to_vec());
    }
    Ok((names, ValuationProfile::new(values)?))
}

pub fn read_profile_path(path: &Path) -> Result<(Vec<String>, ValuationProfile)> {
    read_profile(open(path)?, &path.display().to_string())
}

pub fn write_profile<W: Write>(profile: &ValuationProfile, names: Option<&[String]>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    let mut header = vec!["voter".to_string()];
    match names {
        Some(n) => header.extend(n.iter().cloned()),
        None => header.extend((0..profile.m()).map(|j| format!("a{j}"))),
    }
    w.write_record(&header).map_err(io)?;
    for (i, row) in profile.rows().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// `voter,district` with voters `0..n` in any order, each exactly once.
pub fn read_partition<R: Read>(reader: R, source: &str) -> Result<DistrictPartition> {
    let (_, rows) = records(reader, source, "voter")?;
    let n = rows.len();
    let mut assignment = vec![usize::MAX; n];
    for (line, rec) in &rows {
        if rec.len() != 2 {
            return Err(data_err(source, *line, "expected `voter,district`"));
        }
        let voter: usize = parse(source, *line, &rec[0])?;
        let district: usize = parse(source, *line, &rec[1])?;
        if voter >= n || assignment[voter] != usize::MAX {
            return Err(data_err(source, *line, format!("voter {voter} out of range or repeated")));
        }
        assignment[voter] = district;
    }
    let k = assignment.iter().max().map_or(0, |d| d + 1);
    DistrictPartition::new(assignment, k).map_err(|e| Error::data(format!("{source}: {e}")))
}

pub fn read_partition_path(path: &Path) -> Result<DistrictPartition> {
    read_partition(open(path)?, &path.display().to_string())
}

pub fn write_partition<W: Write>(partition: &DistrictPartition, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(["voter", "district"]).map_err(io)?;
    for (i, d) in partition.assignment().iter().enumerate() {
        w.write_record([i.to_string(), d.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// `district,weight` for districts `0..k`, each exactly once.
pub fn read_weights<R: Read>(reader: R, source: &str) -> Result<WeightVector> {
    let (_, rows) = records(reader, source, "district")?;
    let k = rows.len();
    let mut weights = vec![f64::NAN; k];
    for (line, rec) in &rows {
        if rec.len() != 2 {
            return Err(data_err(source, *line, "expected `district,weight`"));
        }
        let d: usize = parse(source, *line, &rec[0])?;
        let w: f64 = parse(source, *line, &rec[1])?;
        if d >= k || !weights[d].is_nan() {
            return Err(data_err(source, *line, format!("district {d} out of range or repeated")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(data_err(source, *line, format!("weight {w} must be positive")));
        }
        weights[d] = w;
    }
    WeightVector::new(weights).map_err(|e| Error::data(format!("{source}: {e}")))
}

pub fn read_weights_path(path: &Path) -> Result<WeightVector> {
    read_weights(open(path)?, &path.display().to_string())
}

pub fn write_weights<W: Write>(weights: &WeightVector, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(["district", "weight"]).map_err(io)?;
    for (d, x) in weights.as_slice().iter().enumerate() {
        w.write_record([d.to_string(), x.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
