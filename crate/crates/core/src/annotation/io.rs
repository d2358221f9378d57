//! CSV and JSON ingestion.
//!
//! * long CSV: header `unit_id,rater_id,label`, one observation per row
//! * wide CSV: header `unit_id,<rater_1>,...,<rater_k>`, empty field = missing
//! * confusion JSON: `{"tt": .., "tf": .., "ft": .., "ff": ..}`

use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{AnnotationTable, ConfusionTable2x2, Label, TableBuilder};
use crate::error::{Error, Result};

pub const LONG_HEADER: [&str; 3] = ["unit_id", "rater_id", "label"];

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn builder(label_set: Option<&[Label]>) -> TableBuilder {
    match label_set {
        Some(set) => AnnotationTable::builder().with_label_set(set.iter().cloned()),
        None => AnnotationTable::builder(),
    }
}

pub fn read_long_csv<R: Read>(input: R, label_set: Option<&[Label]>) -> Result<AnnotationTable> {
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(LONG_HEADER) {
        return Err(Error::Parse(format!(
            "long-format header must be `unit_id,rater_id,label`, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut b = builder(label_set);
    let mut rows = 0usize;
    for record in rdr.records() {
        let record = record?;
        b.add(&record[0], &record[1], &record[2])?;
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyInput);
    }
    b.build()
}

pub fn write_long_csv(table: &AnnotationTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(LONG_HEADER).expect("in-memory write");
    for cell in table.cells() {
        w.write_record([
            table.units()[cell.unit].as_str(),
            table.raters()[cell.rater].as_str(),
            table.label_set()[cell.label].as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn read_wide_csv<R: Read>(input: R, label_set: Option<&[Label]>) -> Result<AnnotationTable> {
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    if header.get(0) != Some("unit_id") || header.len() < 2 {
        return Err(Error::Parse(
            "wide-format header must be `unit_id,<rater_1>,...,<rater_k>`".into(),
        ));
    }
    let mut b = builder(label_set);
    let raters: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    for (i, rater) in raters.iter().enumerate() {
        if b.add_rater(rater)? != i {
            return Err(Error::DuplicateId(rater.clone()));
        }
    }
    let mut rows = 0usize;
    for record in rdr.records() {
        let record = record?;
        let unit = &record[0];
        if b.add_unit(unit)? != rows {
            return Err(Error::DuplicateId(unit.trim().to_owned()));
        }
        for (rater, field) in raters.iter().zip(record.iter().skip(1)) {
            if !field.is_empty() {
                b.add(unit, rater, field)?;
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyInput);
    }
    b.build()
}

pub fn write_wide_csv(table: &AnnotationTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("unit_id")
        .chain(table.raters().iter().map(String::as_str))
        .collect();
    w.write_record(&header).expect("in-memory write");
    for (u, unit) in table.units().iter().enumerate() {
        let mut row = vec![unit.as_str()];
        row.extend((0..table.n_raters()).map(|r| table.get(u, r).map_or("", Label::as_str)));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn read_confusion_json<R: Read>(mut input: R) -> Result<ConfusionTable2x2> {
    let mut s = String::new();
    input.read_to_string(&mut s)?;
    ConfusionTable2x2::from_json_str(&s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    LongCsv,
    WideCsv,
}

pub fn load_table(path: &Path, format: TableFormat, label_set: Option<&[Label]>) -> Result<AnnotationTable> {
    let file = File::open(path)?;
    match format {
        TableFormat::LongCsv => read_long_csv(file, label_set),
        TableFormat::WideCsv => read_wide_csv(file, label_set),
    }
}

pub fn load_confusion(path: &Path) -> Result<ConfusionTable2x2> {
    read_confusion_json(File::open(path)?)
}
