//! Three-role training flow: participants encrypt and upload, the server
//! extends and trains, and a decryption session opens the result once all
//! parties contribute their keys.
//!
//! Roles run as separate state machines and only exchange serialized bytes
//! over in-memory channels.

mod bundle;
mod decryption;
mod log;
mod participant;
mod server;

use std::sync::{mpsc, Arc};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub use bundle::{Manifest, UploadBundle};
pub use decryption::DecryptionSession;
pub use log::{StepLog, StepRecord, PHASE_EVALUATION, PHASE_EXTENSION, PHASE_KEYGEN, PHASE_TRAINING};
pub use participant::ParticipantState;
pub use server::{model_from_bytes, model_to_bytes, ServerState, TrainMethod, MODEL_MAGIC};

use crate::error::{Error, Result};
use crate::linreg::Model;
use crate::lwe::{key_from_bytes, key_to_bytes, serialized_len, Keyring, LweParams, PartyId, RefreshOracle, Roster};

/// Independent seed for a role, derived from the run seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.random()
}

#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub params: LweParams,
    pub width: usize,
    pub method: TrainMethod,
    pub seed: u64,
    pub evaluate: bool,
}

#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    pub model: Model,
    pub loss: Option<i64>,
    pub log: StepLog,
    pub roster: Roster,
    /// Serialized upload size per party, in roster order.
    pub upload_bytes: Vec<usize>,
    /// Size of one serialized bit ciphertext after extension.
    pub extended_ciphertext_len: usize,
}

enum Message {
    KeyShare(Vec<u8>),
    Upload(Vec<u8>),
}

/// Runs upload, assembly, training, optional evaluation and joint
/// decryption for the given per-party rows.
pub fn run_protocol(parties: &[(PartyId, Vec<(i64, i64)>)], cfg: &ProtocolConfig) -> Result<ProtocolOutcome> {
    if parties.is_empty() {
        return Err(Error::InvalidConfig("at least one party is required".into()));
    }
    let roster = Roster::new(parties.iter().map(|p| p.0))?;
    let start = Instant::now();

    let (to_dealer, dealer_rx) = mpsc::channel::<Message>();
    let (to_server, server_rx) = mpsc::channel::<Message>();
    let participants: Vec<ParticipantState> = parties
        .iter()
        .map(|(id, _)| ParticipantState::new(*id, cfg.params.clone(), derive_seed(cfg.seed, id.0 as u64 + 1)))
        .collect::<Result<_>>()?;

    // Key shares go to the oracle dealer first.
    for p in &participants {
        to_dealer
            .send(Message::KeyShare(key_to_bytes(&p.release_key())))
            .expect("dealer alive");
    }
    drop(to_dealer);
    let mut keys = Keyring::new();
    for msg in dealer_rx {
        if let Message::KeyShare(bytes) = msg {
            keys.insert(key_from_bytes(&bytes)?);
        }
    }
    let oracle = Arc::new(RefreshOracle::new(keys.clone(), cfg.params.clone(), derive_seed(cfg.seed, 0))?);
    let mut keygen_log = StepLog::default();
    keygen_log.push(
        PHASE_KEYGEN,
        roster.len(),
        0,
        (roster.len() * cfg.params.n) as u64,
        start.elapsed(),
    );

    // Participants encrypt in parallel and upload.
    std::thread::scope(|s| -> Result<()> {
        let handles: Vec<_> = participants
            .iter()
            .zip(parties)
            .map(|(p, (_, rows))| {
                let tx = to_server.clone();
                s.spawn(move || -> Result<()> {
                    let bundle = p.prepare(rows, cfg.width)?;
                    tx.send(Message::Upload(bundle.to_bytes())).expect("server alive");
                    Ok(())
                })
            })
            .collect();
        for h in handles {
            h.join().expect("participant thread panicked")?;
        }
        Ok(())
    })?;
    drop(to_server);

    let mut bundles = Vec::new();
    for msg in server_rx {
        if let Message::Upload(bytes) = msg {
            bundles.push(UploadBundle::from_bytes(&bytes)?);
        }
    }
    bundles.sort_by_key(|b| b.manifest.party_id);
    let upload_bytes = bundles.iter().map(|b| b.to_bytes().len()).collect();

    let mut server = ServerState::assemble(&bundles, oracle)?;
    let model_ct = server.train(cfg.method)?;
    let loss_ct = if cfg.evaluate {
        Some(server.evaluate(&model_ct)?)
    } else {
        None
    };

    // The decryption party receives the model as bytes.
    let mut session = DecryptionSession::new(model_from_bytes(&model_to_bytes(&model_ct), &roster)?, roster.clone());
    for p in &participants {
        session.contribute(p.release_key());
    }
    let model = session.decrypt()?;
    let loss = loss_ct.map(|c| session.decrypt_int(&c)).transpose()?;

    let mut log = keygen_log;
    log.append(server.log());
    Ok(ProtocolOutcome {
        model,
        loss,
        log,
        extended_ciphertext_len: serialized_len(roster.len(), cfg.params.n),
        roster,
        upload_bytes,
    })
}

/// Groups samples by owning party, in ascending party order.
pub fn split_by_party(samples: &[crate::linreg::Sample]) -> Vec<(PartyId, Vec<(i64, i64)>)> {
    let mut map: std::collections::BTreeMap<PartyId, Vec<(i64, i64)>> = Default::default();
    for s in samples {
        map.entry(s.party).or_default().push((s.x, s.y));
    }
    map.into_iter().collect()
}
