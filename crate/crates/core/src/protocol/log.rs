use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;

pub const PHASE_KEYGEN: &str = "KeyGen";
pub const PHASE_EXTENSION: &str = "Ciphertext extension";
pub const PHASE_TRAINING: &str = "Training";
pub const PHASE_EVALUATION: &str = "Evaluation";

/// One protocol phase. `ops` counts the work unit natural to the phase:
/// key bits for key generation, mask coefficients written for extension,
/// bootstrapped gates for training and evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub phase: String,
    pub parties: usize,
    pub refreshes: u64,
    pub elapsed_ms: f64,
    pub ops: u64,
}

#[derive(Clone, Debug, Default)]
pub struct StepLog {
    records: Vec<StepRecord>,
}

impl StepLog {
    pub fn push(&mut self, phase: &str, parties: usize, refreshes: u64, ops: u64, elapsed: Duration) {
        self.records.push(StepRecord {
            phase: phase.to_string(),
            parties,
            refreshes,
            elapsed_ms: (elapsed.as_secs_f64() * 1e6).round() / 1e3,
            ops,
        });
    }

    pub fn append(&mut self, other: &StepLog) {
        self.records.extend(other.records.iter().cloned());
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn phase(&self, name: &str) -> Option<&StepRecord> {
        self.records.iter().find(|r| r.phase == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for r in &self.records {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{:<22} {:>7} {:>10} {:>12} {:>12}\n",
            "phase", "parties", "refreshes", "ops", "elapsed_ms"
        );
        for r in &self.records {
            s.push_str(&format!(
                "{:<22} {:>7} {:>10} {:>12} {:>12.1}\n",
                r.phase, r.parties, r.refreshes, r.ops, r.elapsed_ms
            ));
        }
        s
    }
}
