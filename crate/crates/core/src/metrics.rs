//! Cost accounting for the integer circuits.
//!
//! The unit of cost is one refresh, i.e. one bootstrapped gate. Circuits are
//! measured on [`DepthBackend`], which yields gate counts and refresh depth
//! from a single evaluation.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::circuits::{
    add_w, div_w, full_adder_with, mul_w, sub_w, FullAdderStyle, IntCiphertext,
};
use crate::error::{Error, Result};
use crate::gates::{ClearBackend, DepthBackend, GateBackend, GateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Add,
    Sub,
    Mul,
    Div,
}

impl Operator {
    pub const ALL: [Operator; 4] = [Operator::Add, Operator::Sub, Operator::Mul, Operator::Div];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Add => "add",
            Operator::Sub => "sub",
            Operator::Mul => "mul",
            Operator::Div => "div",
        }
    }

    /// Published gate count for width `w`.
    pub fn published_count(self, w: u64) -> u64 {
        match self {
            Operator::Add => 5 * w,
            Operator::Sub => 6 * w,
            Operator::Mul => 7 * w * (w - 1),
            Operator::Div => 7 * w * w + 2 * w + 1,
        }
    }

    pub fn max_width(self) -> usize {
        match self {
            Operator::Div => 31,
            _ => 63,
        }
    }

    pub fn min_width(self) -> usize {
        match self {
            Operator::Mul => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(Operator::Add),
            "sub" => Ok(Operator::Sub),
            "mul" => Ok(Operator::Mul),
            "div" => Ok(Operator::Div),
            other => Err(Error::InvalidConfig(format!("unknown operator {other:?}"))),
        }
    }
}

/// Measured cost of one operator evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub op: String,
    pub w: usize,
    pub gates: u64,
    pub nots: u64,
    pub depth: u32,
    /// Gate count given by the published closed-form formula.
    #[serde(rename = "paper_formula")]
    pub published: u64,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip)]
    pub layers: u64,
}

impl CostReport {
    /// Measured minus published.
    pub fn delta(&self) -> i64 {
        self.gates as i64 - self.published as i64
    }
}

pub fn measure(op: Operator, w: usize) -> Result<CostReport> {
    if w < op.min_width() || w > op.max_width() {
        return Err(Error::UnsupportedWidth(w));
    }
    let be = DepthBackend::new();
    let operand = |width: usize| IntCiphertext::from_bits(vec![0u32; width]);
    let outputs: Vec<u32> = match op {
        Operator::Add => add_w(&be, &operand(w)?, &operand(w)?)?.into_bits(),
        Operator::Sub => sub_w(&be, &operand(w)?, &operand(w)?)?.into_bits(),
        Operator::Mul => mul_w(&be, &operand(w)?, &operand(w)?)?.into_bits(),
        Operator::Div => {
            let (q, r) = div_w(&be, &operand(2 * w)?, &operand(w)?)?;
            q.into_bits().into_iter().chain(r.into_bits()).collect()
        }
    };
    let counts = be.counter().snapshot();
    let formula = op.published_count(w as u64);
    Ok(CostReport {
        op: op.name().to_string(),
        w,
        gates: counts.total_gates(),
        nots: counts.nots,
        depth: outputs.into_iter().max().unwrap_or(0),
        published: formula,
        matches: counts.total_gates() == formula,
        layers: counts.layers,
    })
}

/// Growth order inferred from finite differences of the count series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Constant,
    Linear,
    Quadratic,
    Other,
}

#[derive(Clone, Debug)]
pub struct ScalingSeries {
    pub op: Operator,
    pub reports: Vec<CostReport>,
    pub growth: Growth,
}

pub fn scaling_report(op: Operator, widths: impl IntoIterator<Item = usize>) -> Result<ScalingSeries> {
    let reports = widths
        .into_iter()
        .map(|w| measure(op, w))
        .collect::<Result<Vec<_>>>()?;
    if reports.is_empty() {
        return Err(Error::InvalidConfig("empty width range".into()));
    }
    let counts: Vec<i64> = reports.iter().map(|r| r.gates as i64).collect();
    Ok(ScalingSeries {
        op,
        growth: classify(&counts),
        reports,
    })
}

fn classify(series: &[i64]) -> Growth {
    let diff = |v: &[i64]| v.windows(2).map(|p| p[1] - p[0]).collect::<Vec<_>>();
    let flat = |v: &[i64]| v.windows(2).all(|p| p[0] == p[1]);
    if flat(series) {
        return Growth::Constant;
    }
    let d1 = diff(series);
    if flat(&d1) {
        return Growth::Linear;
    }
    if flat(&diff(&d1)) {
        return Growth::Quadratic;
    }
    Growth::Other
}

/// One row of the direct versus NAND-only comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateComparison {
    pub gate: &'static str,
    pub direct: u64,
    pub nand_only: u64,
}

impl GateComparison {
    /// Fraction of refreshes saved by the direct construction.
    pub fn reduction(&self) -> f64 {
        if self.nand_only == 0 {
            0.0
        } else {
            1.0 - self.direct as f64 / self.nand_only as f64
        }
    }
}

/// Refresh counts of each basic gate against its textbook NAND-only
/// decomposition. Both sides are evaluated and checked against the truth
/// table, not just counted.
pub fn naive_gate_comparison() -> Result<Vec<GateComparison>> {
    type Composite = fn(&ClearBackend, bool, bool) -> Result<bool>;
    fn nand(be: &ClearBackend, a: bool, b: bool) -> Result<bool> {
        be.nand(&a, &b)
    }
    fn not(be: &ClearBackend, a: bool) -> Result<bool> {
        nand(be, a, a)
    }
    fn and(be: &ClearBackend, a: bool, b: bool) -> Result<bool> {
        not(be, nand(be, a, b)?)
    }
    fn or(be: &ClearBackend, a: bool, b: bool) -> Result<bool> {
        nand(be, not(be, a)?, not(be, b)?)
    }
    fn xor(be: &ClearBackend, a: bool, b: bool) -> Result<bool> {
        let n = nand(be, a, b)?;
        nand(be, nand(be, a, n)?, nand(be, b, n)?)
    }
    let table: [(&str, Option<GateKind>, Composite); 7] = [
        ("AND", Some(GateKind::And), and),
        ("OR", Some(GateKind::Or), or),
        ("NOT", None, |be, a, _| not(be, a)),
        ("NAND", Some(GateKind::Nand), nand),
        ("NOR", Some(GateKind::Nor), |be, a, b| not(be, or(be, a, b)?)),
        ("XOR", Some(GateKind::Xor), xor),
        ("XNOR", Some(GateKind::Xnor), |be, a, b| not(be, xor(be, a, b)?)),
    ];
    let mut rows = Vec::new();
    for (name, kind, composite) in table {
        let direct_be = ClearBackend::new();
        let naive_be = ClearBackend::new();
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let want = kind.map_or(!a, |k| k.eval(a, b));
            let direct = match kind {
                Some(k) => direct_be.gate(k, &a, &b)?,
                None => direct_be.not(&a)?,
            };
            let naive = composite(&naive_be, a, b)?;
            debug_assert_eq!(direct, want);
            if naive != want {
                return Err(Error::InvalidConfig(format!("NAND composition of {name} is wrong")));
            }
        }
        rows.push(GateComparison {
            gate: name,
            direct: direct_be.counter().snapshot().refreshes / 4,
            nand_only: naive_be.counter().snapshot().refreshes / 4,
        });
    }
    Ok(rows)
}

/// Gate counts of the ripple adder with the shared-carry and the naive
/// seven-gate full adder.
pub fn full_adder_comparison(w: usize) -> Result<(u64, u64)> {
    let count = |style| -> Result<u64> {
        let be = ClearBackend::new();
        let mut carry = false;
        for _ in 0..w {
            carry = full_adder_with(&be, style, &false, &false, &carry)?.1;
        }
        Ok(be.counter().snapshot().total_gates())
    };
    Ok((count(FullAdderStyle::Shared)?, count(FullAdderStyle::Naive)?))
}

pub fn write_csv<W: Write>(reports: &[CostReport], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in reports {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn render_table(reports: &[CostReport]) -> String {
    let mut s = format!(
        "{:<4} {:>3} {:>7} {:>6} {:>6} {:>7} {:>7} {:>7} {:>6}\n",
        "op", "w", "gates", "nots", "depth", "layers", "formula", "delta", "match"
    );
    for r in reports {
        s.push_str(&format!(
            "{:<4} {:>3} {:>7} {:>6} {:>6} {:>7} {:>7} {:>+7} {:>6}\n",
            r.op,
            r.w,
            r.gates,
            r.nots,
            r.depth,
            r.layers,
            r.published,
            r.delta(),
            if r.matches { "yes" } else { "no" }
        ));
    }
    s
}

pub fn render_comparison(rows: &[GateComparison]) -> String {
    let mut s = format!("{:<5} {:>7} {:>10} {:>10}\n", "gate", "direct", "nand-only", "reduction");
    for r in rows {
        s.push_str(&format!(
            "{:<5} {:>7} {:>10} {:>9.0}%\n",
            r.gate,
            r.direct,
            r.nand_only,
            100.0 * r.reduction()
        ));
    }
    s
}
