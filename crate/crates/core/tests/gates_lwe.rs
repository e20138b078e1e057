use std::sync::Arc;

use mkgc::gates::{ClearBackend, GateBackend, GateConstants, GateKind, LweBackend};
use mkgc::lwe::{keygen, Keyring, LweParams, MkLweCiphertext, PartyId, RefreshOracle, Roster};
use mkgc::torus::NoiseSampler;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

struct Fixture {
    keys: Keyring,
    params: LweParams,
    backend: LweBackend<u32>,
    sampler: NoiseSampler,
    roster: Roster,
}

fn fixture(p: u16, constants: GateConstants, seed: u64) -> Fixture {
    let params = LweParams::standard();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let keys: Keyring = (0..p).map(|i| keygen(&params, PartyId(i), &mut rng)).collect();
    let roster = Roster::range(p);
    let oracle = Arc::new(RefreshOracle::new(keys.clone(), params.clone(), seed ^ 0xabc).unwrap());
    let backend = LweBackend::with_constants(oracle, roster.clone(), constants);
    Fixture {
        keys,
        sampler: NoiseSampler::new(params.alpha, seed + 1).unwrap(),
        params,
        backend,
        roster,
    }
}

impl Fixture {
    fn enc(&mut self, party: u16, m: bool) -> MkLweCiphertext<u32> {
        let key = self.keys.get(PartyId(party)).unwrap();
        MkLweCiphertext::sym_enc(key, m, &self.params, &mut self.sampler)
            .extend(&self.roster)
            .unwrap()
    }

    fn dec(&self, c: &MkLweCiphertext<u32>) -> bool {
        c.sym_dec(&self.keys).unwrap()
    }
}

#[test]
fn truth_tables_two_parties() {
    let mut f = fixture(2, GateConstants::corrected(), 1);
    for kind in GateKind::ALL {
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            for _ in 0..50 {
                let x = f.enc(0, a);
                let y = f.enc(1, b);
                let out = f.backend.gate(kind, &x, &y).unwrap();
                assert_eq!(f.dec(&out), kind.eval(a, b), "{} {a} {b}", kind.name());
            }
        }
    }
    for m in [false, true] {
        let x = f.enc(1, m);
        let n = f.backend.not(&x).unwrap();
        assert_eq!(f.dec(&n), !m);
        assert_eq!(n.variance(), x.variance());
        assert_eq!(f.dec(&f.backend.not(&n).unwrap()), m);
    }
}

#[test]
fn constants_are_noiseless() {
    let f = fixture(2, GateConstants::corrected(), 2);
    for m in [false, true] {
        let c = f.backend.constant(m);
        assert_eq!(f.dec(&c), m);
        assert_eq!(c.variance(), 0.0);
    }
}

#[test]
fn refresh_and_combinator_accounting() {
    let mut f = fixture(2, GateConstants::corrected(), 3);
    let x = f.enc(0, true);
    let y = f.enc(1, false);
    // (add, sub, mul, mod_to_t) per gate.
    let expected = [
        (GateKind::And, (2, 0, 0, 1)),
        (GateKind::Or, (2, 0, 0, 1)),
        (GateKind::Nand, (0, 2, 0, 1)),
        (GateKind::Nor, (0, 2, 0, 1)),
        (GateKind::Xor, (0, 1, 1, 0)),
        (GateKind::Xnor, (0, 1, 1, 1)),
    ];
    for (kind, (add, sub, mul, mtt)) in expected {
        let before = f.backend.counter().snapshot();
        f.backend.gate(kind, &x, &y).unwrap();
        let d = f.backend.counter().snapshot() - before;
        assert_eq!((d.lwe_add, d.lwe_sub, d.lwe_mul, d.mod_to_t), (add, sub, mul, mtt), "{}", kind.name());
        assert_eq!(d.refreshes, 1);
    }
    let before = f.backend.counter().snapshot();
    f.backend.not(&x).unwrap();
    let d = f.backend.counter().snapshot() - before;
    assert_eq!((d.lwe_add, d.lwe_sub, d.lwe_mul, d.mod_to_t, d.refreshes, d.nots), (0, 1, 0, 1, 0, 1));
}

#[test]
fn random_gate_dags_agree_with_clear_backend() {
    let mut f = fixture(3, GateConstants::corrected(), 4);
    let clear = ClearBackend::new();
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    for _ in 0..3 {
        let inputs: Vec<bool> = (0..8).map(|_| rng.random()).collect();
        let mut plain: Vec<bool> = inputs.clone();
        let mut wires: Vec<MkLweCiphertext<u32>> = inputs
            .iter()
            .enumerate()
            .map(|(i, &m)| f.enc((i % 3) as u16, m))
            .collect();
        for _ in 0..200 {
            let i = rng.random_range(0..wires.len());
            let j = rng.random_range(0..wires.len());
            if rng.random_ratio(1, 8) {
                plain.push(clear.not(&plain[i]).unwrap());
                wires.push(f.backend.not(&wires[i]).unwrap());
            } else {
                let kind = GateKind::ALL[rng.random_range(0..6)];
                plain.push(clear.gate(kind, &plain[i], &plain[j]).unwrap());
                wires.push(f.backend.gate(kind, &wires[i], &wires[j]).unwrap());
            }
        }
        for (p, c) in plain.iter().zip(&wires) {
            assert_eq!(*p, f.dec(c));
        }
    }
}

#[test]
fn mixed_rosters_are_rejected() {
    let mut f = fixture(2, GateConstants::corrected(), 5);
    let single = {
        let key = f.keys.get(PartyId(0)).unwrap();
        MkLweCiphertext::sym_enc(key, true, &f.params, &mut f.sampler)
    };
    let joint = f.enc(1, true);
    assert!(f.backend.and(&single, &joint).is_err());
}
