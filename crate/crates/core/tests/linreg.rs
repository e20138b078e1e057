mod common;

use common::linreg_oracle::{self as oracle, Params};
use common::world::{clear, clear_dataset, clear_dec, World};
use mkgc::linreg::{loss, predict, train_closed_form, train_gd, GdConfig, ModelCiphertext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const W: usize = 8;
const ACC: usize = 16;

/// m = 8 points with |x|, |y| <= 5 and at least two distinct x values.
fn random_points(rng: &mut ChaCha20Rng) -> Vec<(i64, i64)> {
    loop {
        let pts: Vec<_> = (0..8)
            .map(|_| (rng.random_range(-5..=5), rng.random_range(-5..=5)))
            .collect();
        if pts.iter().any(|p| p.0 != pts[0].0) {
            return pts;
        }
    }
}

fn params_of(p: (i64, i64)) -> Params {
    Params {
        slope: p.0,
        intercept: p.1,
    }
}

#[test]
fn closed_form_matches_oracle_on_random_clear_datasets() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let be = clear();
    for _ in 0..20 {
        let pts = random_points(&mut rng);
        let want = oracle::closed_form(&pts, W as u32, ACC as u32).expect("valid division");
        let ds = clear_dataset(&pts, W);
        let model = train_closed_form(&be, &ds, ACC).unwrap();
        let got = params_of((clear_dec(&model.slope), clear_dec(&model.intercept)));
        assert_eq!(got, want, "points {pts:?}");
        assert_eq!(model.zoom, 1);
    }
}

#[test]
fn closed_form_tracks_real_fit_on_exact_lines() {
    let be = clear();
    for (a, b) in [(2, 1), (-3, 4), (0, -2), (1, 0)] {
        let pts: Vec<_> = (-3..=4).map(|x| (x, a * x + b)).collect();
        let (rs, ri) = oracle::closed_form_real(&pts);
        let model = train_closed_form(&be, &clear_dataset(&pts, W), ACC).unwrap();
        assert_eq!(clear_dec(&model.slope) as f64, rs);
        assert_eq!(clear_dec(&model.intercept) as f64, ri);
    }
}

#[test]
fn closed_form_matches_oracle_on_lwe() {
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    let mut world = World::new(2, 31);
    for _ in 0..3 {
        let pts = random_points(&mut rng);
        let want = oracle::closed_form(&pts, W as u32, ACC as u32).unwrap();
        let ds = world.dataset(&pts, W);
        let model = train_closed_form(&world.backend, &ds, ACC).unwrap();
        let got = params_of((world.dec(&model.slope), world.dec(&model.intercept)));
        assert_eq!(got, want, "points {pts:?}");
    }
}

fn gd_points() -> Vec<(i64, i64)> {
    vec![(1, 3), (2, 5), (3, 7), (4, 9)]
}

#[test]
fn gd_runs_in_lockstep_with_simulator() {
    let cfg = GdConfig::default();
    let pts = gd_points();
    let k = cfg.step_divisor(pts.len()).unwrap();
    assert_eq!(k, 2000);
    let trace = oracle::gd(&pts, cfg.zoom, k, cfg.iterations, cfg.width as u32);
    assert!(!trace.overflowed);
    let be = clear();
    let mut seen = Vec::new();
    train_gd(&be, &clear_dataset(&pts, cfg.width), &cfg, |i, m: &ModelCiphertext<bool>| {
        seen.push((i, params_of((clear_dec(&m.slope), clear_dec(&m.intercept)))));
        Ok(())
    })
    .unwrap();
    assert_eq!(seen.len(), cfg.iterations);
    for (i, p) in seen {
        assert_eq!(p, trace.steps[i], "iteration {i}");
    }
    for pair in trace.losses.windows(2) {
        assert!(pair[1] <= pair[0], "loss increased: {:?}", trace.losses);
    }
}

#[test]
fn gd_lockstep_on_lwe() {
    let cfg = GdConfig {
        iterations: 2,
        ..GdConfig::default()
    };
    let pts = vec![(1, 2), (2, 4)];
    let k = cfg.step_divisor(pts.len()).unwrap();
    let trace = oracle::gd(&pts, cfg.zoom, k, cfg.iterations, cfg.width as u32);
    assert!(!trace.overflowed);
    let mut world = World::new(2, 5);
    let ds = world.dataset(&pts, cfg.width);
    let mut seen = Vec::new();
    let model = train_gd(&world.backend, &ds, &cfg, |_, m| {
        seen.push(params_of((world.dec(&m.slope), world.dec(&m.intercept))));
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, trace.steps);
    assert_eq!(model.zoom, cfg.zoom);
}

#[test]
fn predict_and_loss_match_oracle() {
    let be = clear();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let w = 16;
    let zoom = 10_000;
    for _ in 0..40 {
        let p = Params {
            slope: rng.random_range(-30_000..=30_000),
            intercept: rng.random_range(-30_000..=30_000),
        };
        let pts: Vec<_> = (0..5)
            .map(|_| (rng.random_range(-20..=20), rng.random_range(-50..=50)))
            .collect();
        let model = ModelCiphertext {
            slope: mkgc::circuits::encode_int(p.slope, w, &mut mkgc::circuits::PlainBits).unwrap(),
            intercept: mkgc::circuits::encode_int(p.intercept, w, &mut mkgc::circuits::PlainBits).unwrap(),
            zoom,
        };
        let ds = clear_dataset(&pts, w);
        for (x, _) in &pts {
            let got = clear_dec(&predict(&be, &model, &clear_dataset(&[(*x, 0)], w).xs[0]).unwrap());
            assert_eq!(Some(got), oracle::predict(p, *x, zoom, w as u32));
        }
        let want = oracle::loss(&pts, p, zoom, w as u32).unwrap();
        assert_eq!(clear_dec(&loss(&be, &ds, &model).unwrap()), want);
    }
}

#[test]
fn gd_rejects_width_mismatch() {
    let cfg = GdConfig::default();
    let ds = clear_dataset(&gd_points(), 8);
    assert!(train_gd(&clear(), &ds, &cfg, |_, _| Ok(())).is_err());
}
