use std::sync::Arc;
use std::time::Instant;

use super::bundle::UploadBundle;
use super::log::{StepLog, PHASE_EVALUATION, PHASE_EXTENSION, PHASE_TRAINING};
use crate::circuits::{int_from_bytes, int_to_bytes, IntCiphertext};
use crate::error::{Error, Result};
use crate::gates::{GateBackend, LweBackend};
use crate::linreg::{self, EncryptedDataset, GdConfig, ModelCiphertext};
use crate::lwe::{MkLweCiphertext, RefreshOracle, Roster};

pub type Bit = MkLweCiphertext<u32>;

pub const MODEL_MAGIC: &[u8; 4] = b"MKMD";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrainMethod {
    /// Closed-form fit with intermediates at `acc_width` bits.
    ClosedForm { acc_width: usize },
    Gd(GdConfig),
}

/// The evaluating party. It sees only ciphertexts and a handle to the
/// refresh oracle; it has no secret-key field.
pub struct ServerState {
    roster: Roster,
    backend: LweBackend<u32>,
    dataset: EncryptedDataset<Bit>,
    log: StepLog,
}

impl ServerState {
    /// Decodes the bundles and extends every ciphertext to the joint roster.
    pub fn assemble(bundles: &[UploadBundle], oracle: Arc<RefreshOracle<u32>>) -> Result<Self> {
        let start = Instant::now();
        let first = bundles
            .first()
            .ok_or_else(|| Error::InvalidConfig("no bundles uploaded".into()))?;
        let w = first.manifest.w;
        let digest = oracle.params().digest();
        for b in bundles {
            if b.manifest.w != w {
                return Err(Error::WidthMismatch {
                    left: w,
                    right: b.manifest.w,
                });
            }
            if b.manifest.params_hash != digest {
                return Err(Error::InvalidParams(format!(
                    "bundle of party {} was encrypted under different parameters",
                    b.manifest.party_id
                )));
            }
        }
        let roster = Roster::new(bundles.iter().map(|b| b.manifest.party_id))?;
        let mut ordered: Vec<&UploadBundle> = bundles.iter().collect();
        ordered.sort_by_key(|b| b.manifest.party_id);

        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut owners = Vec::new();
        let mut ops = 0u64;
        for b in ordered {
            let single = Roster::single(b.manifest.party_id);
            let mut lift = |bytes: &[u8]| -> Result<IntCiphertext<Bit>> {
                let ct = int_from_bytes(bytes, &single)?;
                if ct.width() != w {
                    return Err(Error::WidthMismatch {
                        left: w,
                        right: ct.width(),
                    });
                }
                let bits = ct
                    .bits()
                    .iter()
                    .map(|c| {
                        ops += (roster.len() * c.dimension()) as u64;
                        c.extend(&roster)
                    })
                    .collect::<Result<Vec<_>>>()?;
                IntCiphertext::from_bits(bits)
            };
            for (x, y) in b.xs.iter().zip(&b.ys) {
                xs.push(lift(x)?);
                ys.push(lift(y)?);
                owners.push(b.manifest.party_id);
            }
        }
        let dataset = EncryptedDataset::new(xs, ys, owners)?;
        let backend = LweBackend::new(oracle, roster.clone());
        let mut log = StepLog::default();
        log.push(PHASE_EXTENSION, roster.len(), 0, ops, start.elapsed());
        Ok(ServerState {
            roster,
            backend,
            dataset,
            log,
        })
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub fn dataset(&self) -> &EncryptedDataset<Bit> {
        &self.dataset
    }

    pub fn log(&self) -> &StepLog {
        &self.log
    }

    pub fn backend(&self) -> &LweBackend<u32> {
        &self.backend
    }

    pub fn train(&mut self, method: TrainMethod) -> Result<ModelCiphertext<Bit>> {
        let start = Instant::now();
        let before = self.backend.counter().snapshot();
        let model = match method {
            TrainMethod::ClosedForm { acc_width } => {
                linreg::train_closed_form(&self.backend, &self.dataset, acc_width)?
            }
            TrainMethod::Gd(cfg) => linreg::train_gd(&self.backend, &self.dataset, &cfg, |_, _| Ok(()))?,
        };
        let d = self.backend.counter().snapshot() - before;
        self.log
            .push(PHASE_TRAINING, self.roster.len(), d.refreshes, d.total_gates(), start.elapsed());
        Ok(model)
    }

    /// Encrypted mean squared error of `model` on the training data.
    pub fn evaluate(&mut self, model: &ModelCiphertext<Bit>) -> Result<IntCiphertext<Bit>> {
        let start = Instant::now();
        let before = self.backend.counter().snapshot();
        let loss = linreg::loss(&self.backend, &self.dataset, model)?;
        let d = self.backend.counter().snapshot() - before;
        self.log
            .push(PHASE_EVALUATION, self.roster.len(), d.refreshes, d.total_gates(), start.elapsed());
        Ok(loss)
    }

    pub fn log_mut(&mut self) -> &mut StepLog {
        &mut self.log
    }
}

/// `"MKMD"`, zoom i64, then length-prefixed slope and intercept.
pub fn model_to_bytes(model: &ModelCiphertext<Bit>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MODEL_MAGIC);
    out.extend_from_slice(&model.zoom.to_le_bytes());
    for part in [&model.slope, &model.intercept] {
        let b = int_to_bytes(part);
        out.extend_from_slice(&(b.len() as u32).to_le_bytes());
        out.extend_from_slice(&b);
    }
    out
}

pub fn model_from_bytes(bytes: &[u8], roster: &Roster) -> Result<ModelCiphertext<Bit>> {
    let bad = || Error::Decode("malformed model ciphertext".into());
    if bytes.len() < 12 || &bytes[..4] != MODEL_MAGIC {
        return Err(bad());
    }
    let zoom = i64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let mut rest = &bytes[12..];
    let mut parts = Vec::with_capacity(2);
    for _ in 0..2 {
        if rest.len() < 4 {
            return Err(bad());
        }
        let n = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
        rest = &rest[4..];
        if rest.len() < n {
            return Err(bad());
        }
        parts.push(int_from_bytes(&rest[..n], roster)?);
        rest = &rest[n..];
    }
    if !rest.is_empty() {
        return Err(bad());
    }
    let intercept = parts.pop().unwrap();
    let slope = parts.pop().unwrap();
    Ok(ModelCiphertext {
        slope,
        intercept,
        zoom,
    })
}
