use std::fs::OpenOptions;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

use crate::cli::{Format, OutputArgs};
use crate::error::CliError;

/// Rows for `--format csv`; the header row is always emitted.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command hands back before formatting.
#[derive(Debug)]
pub struct Report {
    pub params: Value,
    pub result: Value,
    pub table: Table,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: &'a Value,
    result: &'a Value,
    version: &'a str,
}

pub fn render(command: &str, report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let envelope = Envelope {
                command,
                params: &report.params,
                result: &report.result,
                version: env!("CARGO_PKG_VERSION"),
            };
            let mut bytes = serde_json::to_vec_pretty(&envelope)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(&report.table.header)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            for row in &report.table.rows {
                writer
                    .write_record(row)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            writer
                .into_inner()
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

pub fn emit(bytes: &[u8], output: &OutputArgs) -> Result<(), CliError> {
    let Some(path) = &output.out else {
        let mut stdout = io::stdout().lock();
        stdout.write_all(bytes)?;
        return Ok(stdout.flush()?);
    };
    let mut options = OpenOptions::new();
    options.write(true);
    if output.force {
        options.create(true).truncate(true);
    } else {
        options.create_new(true);
    }
    let mut file = options.open(path).map_err(|e| match e.kind() {
        io::ErrorKind::AlreadyExists => CliError::Input(format!(
            "{} already exists; pass --force to overwrite",
            path.display()
        )),
        _ => CliError::Io(e),
    })?;
    file.write_all(bytes)?;
    Ok(())
}
