//! Unary linear regression evaluated entirely with integer circuits.
//!
//! Two trainers are provided. [`train_closed_form`] evaluates the least
//! squares solution directly. [`train_gd`] runs gradient descent on
//! parameters scaled by an integer zoom factor `Z`, so that a fractional
//! learning rate becomes an integer divisor.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{add_w, div_w, encode_int, mul_w, signed_range, sub_w, IntCiphertext, PlainBits};
use crate::error::{Error, Result};
use crate::gates::GateBackend;
use crate::lwe::PartyId;

/// Plaintext training data with the owning party of each sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: i64,
    pub y: i64,
    pub party: PartyId,
}

#[derive(Deserialize)]
struct CsvRow {
    x: f64,
    y: f64,
    party: u16,
}

/// Reads `x,y,party` rows. Fractional values are rounded to the nearest
/// integer, halves away from zero.
pub fn read_samples<R: std::io::Read>(input: R) -> Result<Vec<Sample>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: CsvRow = row?;
        let round = |v: f64| -> Result<i64> {
            let r = v.round();
            if !r.is_finite() || r.abs() > (1u64 << 62) as f64 {
                return Err(Error::InvalidConfig(format!("value {v} is not a usable integer")));
            }
            Ok(r as i64)
        };
        out.push(Sample {
            x: round(row.x)?,
            y: round(row.y)?,
            party: PartyId(row.party),
        });
    }
    if out.is_empty() {
        return Err(Error::InvalidConfig("dataset has no rows".into()));
    }
    Ok(out)
}

/// Encrypted samples, all on one backend and roster.
#[derive(Clone, Debug)]
pub struct EncryptedDataset<B> {
    pub xs: Vec<IntCiphertext<B>>,
    pub ys: Vec<IntCiphertext<B>>,
    pub owners: Vec<PartyId>,
    pub width: usize,
}

impl<B: Clone> EncryptedDataset<B> {
    pub fn new(
        xs: Vec<IntCiphertext<B>>,
        ys: Vec<IntCiphertext<B>>,
        owners: Vec<PartyId>,
    ) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidConfig("dataset is empty".into()));
        }
        if xs.len() != ys.len() || xs.len() != owners.len() {
            return Err(Error::InvalidConfig("x, y and owner counts differ".into()));
        }
        let width = xs[0].width();
        for c in xs.iter().chain(&ys) {
            if c.width() != width {
                return Err(Error::WidthMismatch {
                    left: width,
                    right: c.width(),
                });
            }
        }
        Ok(EncryptedDataset { xs, ys, owners, width })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Trained parameters scaled by `zoom`: the real-valued model is
/// `y = (slope * x + intercept) / zoom`.
#[derive(Clone, Debug)]
pub struct ModelCiphertext<B> {
    pub slope: IntCiphertext<B>,
    pub intercept: IntCiphertext<B>,
    pub zoom: i64,
}

/// Decrypted model as written to disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub slope: i64,
    pub intercept: i64,
    pub zoom: i64,
}

impl Model {
    pub fn slope_f64(&self) -> f64 {
        self.slope as f64 / self.zoom as f64
    }

    pub fn intercept_f64(&self) -> f64 {
        self.intercept as f64 / self.zoom as f64
    }
}

/// Gradient-descent settings. The learning rate is the rational
/// `lr_num / lr_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdConfig {
    pub lr_num: i64,
    pub lr_den: i64,
    pub zoom: i64,
    pub iterations: usize,
    pub width: usize,
}

impl Default for GdConfig {
    fn default() -> Self {
        GdConfig {
            lr_num: 1,
            lr_den: 1000,
            zoom: 10_000,
            iterations: 10,
            width: 16,
        }
    }
}

impl GdConfig {
    /// `lr * Z`, which must be a positive integer.
    pub fn scaled_rate(&self) -> Result<i64> {
        if self.lr_num <= 0 || self.lr_den <= 0 || self.zoom <= 0 {
            return Err(Error::InvalidConfig(
                "learning rate and zoom must be positive".into(),
            ));
        }
        let p = self.zoom * self.lr_num;
        if p % self.lr_den != 0 {
            return Err(Error::InvalidConfig(format!(
                "learning rate {}/{} times zoom {} is not an integer",
                self.lr_num, self.lr_den, self.zoom
            )));
        }
        Ok(p / self.lr_den)
    }

    /// Divisor `K = m * Z / (2 * lr * Z)` applied to each residual term.
    pub fn step_divisor(&self, m: usize) -> Result<i64> {
        let rate = self.scaled_rate()?;
        let top = m as i64 * self.zoom;
        if top % (2 * rate) != 0 {
            return Err(Error::InvalidConfig(format!(
                "m*Z = {top} is not divisible by 2*lr*Z = {}",
                2 * rate
            )));
        }
        let k = top / (2 * rate);
        let (_, hi) = signed_range(self.width);
        if k > hi || self.zoom > hi {
            return Err(Error::InvalidConfig(format!(
                "step divisor {k} or zoom {} does not fit in {} bits",
                self.zoom, self.width
            )));
        }
        Ok(k)
    }
}

fn constant<B: GateBackend>(be: &B, v: i64, w: usize) -> Result<IntCiphertext<B::Bit>> {
    let plain = encode_int(v, w, &mut PlainBits)?;
    IntCiphertext::from_bits(plain.bits().iter().map(|&b| be.constant(b)).collect())
}

/// Truncating division of a `w`-bit value by a `w`-bit value.
fn div_by<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let (q, _) = div_w(be, &a.sign_extend(2 * a.width()), b)?;
    Ok(q)
}

fn sum<B: GateBackend>(be: &B, terms: Vec<IntCiphertext<B::Bit>>) -> Result<IntCiphertext<B::Bit>> {
    let mut it = terms.into_iter();
    let first = it.next().ok_or_else(|| Error::InvalidConfig("empty sum".into()))?;
    it.try_fold(first, |acc, t| add_w(be, &acc, &t))
}

/// Least-squares fit with the mean folded into numerator and denominator:
///
/// `slope = sum(y_i * (m x_i - Sx)) / (m * sum(x_i^2) - Sx^2)`,
/// `intercept = (Sy - slope * Sx) / m`.
///
/// Intermediates run at `acc_width` bits; both divisions truncate toward
/// zero. The model is returned at the dataset width with zoom 1.
pub fn train_closed_form<B: GateBackend>(
    be: &B,
    ds: &EncryptedDataset<B::Bit>,
    acc_width: usize,
) -> Result<ModelCiphertext<B::Bit>> {
    let a = acc_width;
    if a < ds.width {
        return Err(Error::InvalidConfig(format!(
            "accumulator width {a} is narrower than the data width {}",
            ds.width
        )));
    }
    let m = constant(be, ds.len() as i64, a)?;
    let xs: Vec<_> = ds.xs.iter().map(|x| x.sign_extend(a)).collect();
    let ys: Vec<_> = ds.ys.iter().map(|y| y.sign_extend(a)).collect();

    let sx = sum(be, xs.clone())?;
    let sy = sum(be, ys.clone())?;

    let terms = xs
        .par_iter()
        .zip(&ys)
        .map(|(x, y)| {
            let centered = sub_w(be, &mul_w(be, &m, x)?, &sx)?;
            Ok((mul_w(be, y, &centered)?, mul_w(be, x, x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (num_terms, sq_terms): (Vec<_>, Vec<_>) = terms.into_iter().unzip();
    let num = sum(be, num_terms)?;
    let den = sub_w(be, &mul_w(be, &m, &sum(be, sq_terms)?)?, &mul_w(be, &sx, &sx)?)?;

    let slope = div_by(be, &num, &den)?;
    let intercept = div_by(be, &sub_w(be, &sy, &mul_w(be, &slope, &sx)?)?, &m)?;
    Ok(ModelCiphertext {
        slope: slope.truncate(ds.width),
        intercept: intercept.truncate(ds.width),
        zoom: 1,
    })
}

/// Gradient descent on zoomed parameters `W = slope * Z`, `B = intercept * Z`
/// starting from zero. Per iteration, with `R_i = y_i Z - (W x_i + B)`:
///
/// `B += sum(R_i / K)`, `W += sum(R_i x_i / K)`, `K = m Z / (2 lr Z)`.
///
/// Residuals and `R_i x_i` are formed at twice the width; each quotient
/// returns to the parameter width. `on_iteration` sees the model after
/// every update.
pub fn train_gd<B, F>(
    be: &B,
    ds: &EncryptedDataset<B::Bit>,
    cfg: &GdConfig,
    mut on_iteration: F,
) -> Result<ModelCiphertext<B::Bit>>
where
    B: GateBackend,
    F: FnMut(usize, &ModelCiphertext<B::Bit>) -> Result<()>,
{
    let w = cfg.width;
    if ds.width != w {
        return Err(Error::WidthMismatch {
            left: ds.width,
            right: w,
        });
    }
    let k = constant(be, cfg.step_divisor(ds.len())?, w)?;
    let z = constant(be, cfg.zoom, w)?;
    let mut model = ModelCiphertext {
        slope: constant(be, 0, w)?,
        intercept: constant(be, 0, w)?,
        zoom: cfg.zoom,
    };
    for it in 0..cfg.iterations {
        let steps = ds
            .xs
            .par_iter()
            .zip(&ds.ys)
            .map(|(x, y)| {
                let pred = scaled_prediction(be, &model, x)?;
                let r = sub_w(be, &wide_mul(be, y, &z)?, &pred)?;
                let (db, _) = div_w(be, &r, &k)?;
                let rx = mul_w(be, &r, &x.sign_extend(2 * w))?;
                let (dw, _) = div_w(be, &rx, &k)?;
                Ok((dw, db))
            })
            .collect::<Result<Vec<_>>>()?;
        let (dws, dbs): (Vec<_>, Vec<_>) = steps.into_iter().unzip();
        let mut slope = model.slope.clone();
        for d in &dws {
            slope = add_w(be, &slope, d)?;
        }
        let mut intercept = model.intercept.clone();
        for d in &dbs {
            intercept = add_w(be, &intercept, d)?;
        }
        model.slope = slope;
        model.intercept = intercept;
        on_iteration(it, &model)?;
    }
    Ok(model)
}

/// Full `2w`-bit product of two `w`-bit values.
fn wide_mul<B: GateBackend>(
    be: &B,
    a: &IntCiphertext<B::Bit>,
    b: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let w2 = 2 * a.width();
    mul_w(be, &a.sign_extend(w2), &b.sign_extend(w2))
}

/// `W x + B` at twice the parameter width.
fn scaled_prediction<B: GateBackend>(
    be: &B,
    model: &ModelCiphertext<B::Bit>,
    x: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let w2 = 2 * model.slope.width();
    add_w(be, &wide_mul(be, &model.slope, x)?, &model.intercept.sign_extend(w2))
}

/// `(slope * x + intercept) / zoom`, truncated. The numerator is formed
/// at twice the width.
pub fn predict<B: GateBackend>(
    be: &B,
    model: &ModelCiphertext<B::Bit>,
    x: &IntCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let z = constant(be, model.zoom, model.slope.width())?;
    let (q, _) = div_w(be, &scaled_prediction(be, model, x)?, &z)?;
    Ok(q)
}

/// `sum((y_i - predict(x_i))^2) / m`, truncated.
pub fn loss<B: GateBackend>(
    be: &B,
    ds: &EncryptedDataset<B::Bit>,
    model: &ModelCiphertext<B::Bit>,
) -> Result<IntCiphertext<B::Bit>> {
    let w = ds.width;
    let terms = ds
        .xs
        .par_iter()
        .zip(&ds.ys)
        .map(|(x, y)| {
            let e = sub_w(be, y, &predict(be, model, x)?)?;
            mul_w(be, &e, &e)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = constant(be, ds.len() as i64, w)?;
    div_by(be, &sum(be, terms)?, &m)
}
